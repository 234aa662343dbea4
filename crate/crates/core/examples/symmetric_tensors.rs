//! Symmetric tensors give modules balanced with themselves.

use binform::balance::{realize_self_balanced, self_balance_check};
use binform::codec;
use binform::groups::GPair;
use binform::sampling::{random_symmetric_tensor, random_unimodular, trial_rng};
use binform::tensorlink::{phi, symmetric_ops};
use num_traits::Zero;

fn main() -> binform::Result<()> {
    let mut rng = trial_rng(5, "symmetric_example", 0);
    let a = random_symmetric_tensor(3, 4, &mut rng);
    println!("A = {}", codec::to_canonical(&codec::tensor(&a)));
    let report = symmetric_ops(&a)?;
    let p = report.self_pair.expect("A is symmetric");
    for k in 1..3 {
        println!("zeta_{k}: M action is the transpose of N action: {}", p.m().action(k) == p.n().action(k).transpose());
    }

    // the same basis change on both sides keeps the tensor symmetric
    let g = random_unimodular(3, 6, &mut rng);
    let q = p.change_basis(&GPair::new(g.clone(), g)?)?;
    println!("phi after (g, g): symmetric {}", phi(&q)?.is_symmetric());

    if !p.ring().form().discriminant().is_zero() {
        let (m, k) = realize_self_balanced(&p)?;
        let v = self_balance_check(&m, &k)?;
        println!("M = {}", codec::to_canonical(&codec::lattice(m.lattice())));
        println!("k = {}", codec::to_canonical(&codec::theta_vec(&k)));
        println!("self-balance verdict {}", codec::to_canonical(&codec::self_verdict(&v)));
    }
    Ok(())
}
