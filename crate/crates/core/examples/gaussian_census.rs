//! Census of tensors with `Det = x^2 + y^2` and entries in `[-1, 1]`.
//!
//! Classes are merged along short G-move words only, so the class count is an
//! upper bound for the number of orbits meeting the box.

use binform::codec;
use binform::formring::BinaryForm;
use binform::groups::enumerate_orbits;
use binform::tensorlink::{phi, psi};

fn main() -> binform::Result<()> {
    let f = BinaryForm::from_i64(&[1, 0, 1])?;
    let report = enumerate_orbits(&f, 1, 4)?;
    println!("members in box: {}", report.members.len());
    println!("classes: {} (budget-limited: {})", report.classes.len(), report.budget_limited);
    for c in &report.classes {
        println!("  {} tensors, representative {}", c.size_in_box, codec::to_canonical(&codec::tensor(&c.representative)));
    }
    let round_trips = report.members.iter().filter(|a| psi(a).and_then(|p| phi(&p)).is_ok_and(|b| &b == *a)).count();
    println!("round trips: {round_trips}/{}", report.members.len());

    // x^2 + 5y^2: two orbits in all, not necessarily both inside a small box
    let f = BinaryForm::from_i64(&[1, 0, 5])?;
    let report = enumerate_orbits(&f, 2, 3)?;
    println!("x^2 + 5y^2, bound 2: {} members, {} classes", report.members.len(), report.classes.len());
    Ok(())
}
