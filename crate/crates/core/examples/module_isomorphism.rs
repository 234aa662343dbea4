//! Bounded search for isomorphisms between based modules.

use binform::groups::{g_act_tensor, modules_isomorphic, IsoSearch};
use binform::sampling::{random_gpair, random_tensor_nonzero_leading, trial_rng};
use binform::tensorlink::psi;

fn main() -> binform::Result<()> {
    let mut rng = trial_rng(11, "iso_example", 0);
    let a = random_tensor_nonzero_leading(3, 3, &mut rng);
    let h = random_gpair(3, 8, &mut rng);
    let p = psi(&a)?;
    let q = psi(&g_act_tensor(&h, &a)?)?;
    match modules_isomorphic(p.n(), q.n(), 3)? {
        IsoSearch::Found(g) => println!("N and N' are isomorphic via {:?}", g.to_rows()),
        other => println!("search result: {other:?}"),
    }

    // same charpolys as every characteristic module, so a bounded search that
    // finds no small intertwiner can only answer Unknown
    let regular = binform::tensorlink::RfModule::regular(p.ring().clone(), p.n().side());
    println!("N against R_f: {:?}", modules_isomorphic(p.n(), &regular, 2)?);
    Ok(())
}
