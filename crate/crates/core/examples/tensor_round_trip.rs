//! A `2 x n x n` tensor, its balanced pair, and back.

use binform::codec;
use binform::tensorlink::{phi, psi, Tensor2nn};

fn show(a: &Tensor2nn) -> binform::Result<()> {
    let f = a.det_form()?;
    println!("tensor {}", codec::to_canonical(&codec::tensor(a)));
    println!("  Det = {:?}", f.coeffs());
    let p = psi(a)?;
    if !p.transport().is_identity() {
        println!("  f0 = 0, ring built over the sheared form {:?}", p.ring().form().coeffs());
    }
    let n = a.n();
    for k in 1..n {
        println!("  zeta_{k} on M (rows): {:?}", p.m().action(k).to_rows());
        println!("  zeta_{k} on N (columns): {:?}", p.n().action(k).to_rows());
    }
    for (j, row) in p.pairing().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| codec::to_canonical(&codec::theta_vec(x))).collect();
        println!("  m_{j} o n_k = {}", cells.join(" "));
    }
    let back = phi(&p)?;
    println!("  phi(psi(A)) == A: {}", &back == a);
    Ok(())
}

fn main() -> binform::Result<()> {
    // x^2 + y^2
    show(&Tensor2nn::from_i64(&[&[1, 0], &[0, 1]], &[&[0, -1], &[1, 0]])?)?;
    // a cubic
    show(&Tensor2nn::from_i64(
        &[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]],
        &[&[0, 1, 1], &[1, -1, 0], &[2, 0, 1]],
    )?)?;
    // det A1 = 0
    show(&Tensor2nn::from_i64(&[&[1, 0], &[0, 0]], &[&[0, 1], &[-1, 1]])?)?;
    Ok(())
}
