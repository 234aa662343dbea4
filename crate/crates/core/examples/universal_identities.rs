//! Pointwise checks of the universal-tensor identities at random integer points.

use binform::univcheck::{check_correspondence_backward, check_correspondence_forward, check_nodenom, Specialization};
use binform::sampling::trial_rng;
use binform::Error;

fn main() -> binform::Result<()> {
    let mut rng = trial_rng(9, "universal_example", 0);
    for n in 2..=4 {
        let (mut nodenom, mut singular, mut fwd, mut bwd) = (0, 0, 0, 0);
        for _ in 0..300 {
            let s = Specialization::random(n, 9, &mut rng);
            match check_nodenom(&s, n - 1) {
                Ok(ok) => nodenom += usize::from(ok),
                Err(Error::Singular) => singular += 1,
                Err(e) => return Err(e),
            }
            for col in 0..n {
                fwd += usize::from(check_correspondence_forward(&s, col)?);
                for v in 0..n {
                    bwd += usize::from(check_correspondence_backward(&s, col, v)?);
                }
            }
        }
        println!(
            "n = {n}: nodenom {nodenom}/{} (skipped {singular} singular), forward {fwd}/{}, backward {bwd}/{}",
            300 - singular,
            300 * n,
            300 * n * n
        );
    }
    Ok(())
}
