//! Exact big-integer and big-rational linear algebra.

mod hnf;
mod matrix;
mod poly;

pub use hnf::{contains, dual_basis, hnf, hnf_span, int_hnf, int_kernel, lattice_index, lll_reduce};
pub use matrix::{int_to_rat, rat, IntMatrix, Matrix, RatMatrix};
pub use poly::{charpoly, charpoly_rat, interpolate, IntPoly, Poly, RatPoly};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Coefficients `(c_0, ..., c_n)` of `Det(A1*x + A2*y) = sum c_i x^(n-i) y^i`.
///
/// Evaluates `det(A1*t + A2)` at `t = 0..=n` and interpolates; the end
/// coefficients are cross-checked against `det A1` and `det A2`.
pub fn det_binary_form(a1: &IntMatrix, a2: &IntMatrix) -> Result<Vec<BigInt>> {
    a1.ensure_square()?;
    if a1.rows() != a2.rows() || a1.cols() != a2.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A1 is {}x{}, A2 is {}x{}",
            a1.rows(),
            a1.cols(),
            a2.rows(),
            a2.cols()
        )));
    }
    let n = a1.rows();
    let points = (0..=n)
        .map(|t| {
            let t = BigInt::from(t);
            let m = a1.scale(&t).add(a2)?;
            Ok((BigRational::from_integer(t), BigRational::from_integer(m.det()?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let p = interpolate(&points)?.to_integer()?;
    // p(t) = sum c_i t^(n-i)
    let mut coeffs = vec![BigInt::from(0); n + 1];
    for (deg, c) in p.coeffs().iter().enumerate() {
        coeffs[n - deg] = c.clone();
    }
    let d1 = a1.det()?;
    let d2 = a2.det()?;
    if coeffs[0] != d1 || coeffs[n] != d2 {
        return Err(Error::InvariantViolation(format!(
            "interpolated end coefficients ({}, {}) disagree with det A1 = {d1}, det A2 = {d2}",
            coeffs[0], coeffs[n]
        )));
    }
    Ok(coeffs)
}
