//! Running the seeded property suites from code.

use binform::codec;
use binform::verify::{run, Suite, VerifyConfig};

fn main() -> binform::Result<()> {
    let cfg = VerifyConfig { seed: 42, count: 40, ..Default::default() };
    for suite in Suite::ALL {
        let report = run(suite, &cfg)?;
        let checks: usize = report.passed.values().sum();
        println!("{suite:<13} {} ({checks} checks)", if report.ok() { "ok" } else { "FAILED" });
        for f in &report.failures {
            println!("  trial {} {}: {}", f.trial, f.check, codec::to_canonical(&f.input));
        }
    }
    Ok(())
}
