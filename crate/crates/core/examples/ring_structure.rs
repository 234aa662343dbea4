//! The ring `R_f` of a binary form: zeta basis, structure constants, `I_f`, `J_f`.
//!
//! `cargo run --example ring_structure -- '[2,3,5,-1]'`

use binform::codec;
use binform::formring::{make_ring, normalize_leading, BinaryForm};

fn main() -> binform::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "[2,3,5,-1]".into());
    let f: BinaryForm = codec::form_from(&codec::parse(&arg)?)?;
    let (g, h) = normalize_leading(&f)?;
    if !g.is_identity() {
        println!("f0 = 0; working with the transported form {:?}", h.coeffs());
    }
    let ring = make_ring(&h)?;
    let n = ring.degree();
    println!("form {:?}, disc {}, primitive {}", f.coeffs(), f.discriminant(), f.is_primitive());
    for k in 0..n {
        println!("zeta_{k} = {:?} (theta coordinates)", ring.zeta(k).coords().iter().map(|q| q.to_string()).collect::<Vec<_>>());
    }
    println!("zeta_i zeta_j in the zeta basis:");
    for i in 1..n {
        for j in i..n {
            let c: Vec<String> = ring.struct_consts()[i][j].iter().map(|x| x.to_string()).collect();
            println!("  zeta_{i} zeta_{j} = {c:?}");
        }
    }
    ring.check_axioms()?;
    let (i_f, j_f) = ring.make_if_jf();
    println!("I_f basis (columns): {}", codec::to_canonical(&codec::lattice(&i_f)));
    println!("J_f basis (columns): {}", codec::to_canonical(&codec::lattice(&j_f)));
    println!("[J_f : I_f] = {}, |I_f| = {}, |J_f| = {}", j_f.index_of(&i_f), ring.ideal_norm(&i_f)?, ring.ideal_norm(&j_f)?);

    // r in J_f lies in I_f exactly when its second-to-top dual coordinate is integral
    for r in j_f.basis_vectors() {
        println!("  J_f basis vector in I_f: {} (second functional {})", i_f.contains(&r), ring.zeta_dual_second(&r));
    }
    Ok(())
}
