//! Balancing partners `M = (I_f : N)`, the index and norm criteria, and what
//! happens when the pair is broken.

use std::sync::Arc;

use binform::balance::{balancing_partner, check_balanced, pairing_determinant, random_fractional_ideal};
use binform::codec;
use binform::formring::{make_ring, BinaryForm};
use binform::sampling::trial_rng;
use num_rational::BigRational;
use num_traits::Signed;

fn main() -> binform::Result<()> {
    let f = BinaryForm::from_i64(&[2, 3, 5, -1])?;
    let ring = Arc::new(make_ring(&f)?);
    let mut rng = trial_rng(3, "partner_example", 0);
    let (_, j_f) = ring.make_if_jf();
    for _ in 0..3 {
        let n = random_fractional_ideal(&ring, 3, &mut rng);
        let report = balancing_partner(&n)?;
        let m = report.partner.lattice();
        println!("N = {}", codec::to_canonical(&codec::lattice(n.lattice())));
        println!("  M = {}", codec::to_canonical(&codec::lattice(m)));
        println!("  verdict {}", codec::to_canonical(&codec::verdict(&report.verdict)));
        let det = pairing_determinant(&ring, m, n.lattice()).abs();
        println!("  pairing determinant {det} = |M||N|/|J_f| = {}", report.partner.norm() * n.norm() / ring.ideal_norm(&j_f)?);
        let half = m.scale(&BigRational::new(1.into(), 2.into()))?;
        let broken = check_balanced(&ring, &half, n.lattice())?;
        println!("  M/2 against N: balanced {}, criteria agree {}", broken.balanced(), broken.criteria_agree);
    }
    Ok(())
}
