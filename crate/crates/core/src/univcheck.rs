//! Pointwise checks of the universal-tensor identities at integer specializations.
//!
//! A specialization fixes every `u_ijk` (stored as the tensor `(C1, C2)` with
//! `C_i[j][k] = u_ijk`) and optionally `x = (x1, x2)` and `y = (y_1, ..., y_n)`.
//! `C(x) = x1 C1 + x2 C2` is `n x n`; `C(y)` is `2 x n` with
//! `C(y)[i][k] = sum_j u_ijk y_j`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlat::IntMatrix;
use crate::tensorlink::{zeta_action_rational, Side, Tensor2nn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub u: Tensor2nn,
    pub x: Option<[BigInt; 2]>,
    pub y: Option<Vec<BigInt>>,
}

fn draw<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigInt {
    BigInt::from(rng.random_range(-bound..=bound))
}

impl Specialization {
    pub fn new(u: Tensor2nn) -> Self {
        Specialization { u, x: None, y: None }
    }

    pub fn with_x(mut self, x1: BigInt, x2: BigInt) -> Self {
        self.x = Some([x1, x2]);
        self
    }

    pub fn with_y(mut self, y: Vec<BigInt>) -> Self {
        self.y = Some(y);
        self
    }

    /// All of `u`, `x`, `y` uniform in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Self {
        let mat = |rng: &mut R| IntMatrix::from_fn(n, n, |_, _| draw(rng, bound));
        let u = Tensor2nn::new(mat(rng), mat(rng)).expect("same size");
        let x = [draw(rng, bound), draw(rng, bound)];
        let y = (0..n).map(|_| draw(rng, bound)).collect();
        Specialization { u, x: Some(x), y: Some(y) }
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    /// `C(x) = x1 C1 + x2 C2`.
    pub fn c_of_x(&self) -> Result<IntMatrix> {
        let [x1, x2] = self.x.as_ref().ok_or_else(|| Error::InvariantViolation("x not specialized".into()))?;
        self.u.a1().scale(x1).add(&self.u.a2().scale(x2))
    }

    /// `C(y)`, a `2 x n` matrix.
    pub fn c_of_y(&self) -> Result<IntMatrix> {
        let y = self.y.as_ref().ok_or_else(|| Error::InvariantViolation("y not specialized".into()))?;
        let n = self.n();
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!("y has {} entries, expected {n}", y.len())));
        }
        Ok(IntMatrix::from_fn(2, n, |i, k| {
            (0..n).map(|j| &self.u.slot(i)[(j, k)] * &y[j]).sum()
        }))
    }
}

/// `c_0 T^k + ... + c_(k-1) T` with `T = -C1^-1 C2` is integral for `k = 1..=k_max`.
///
/// Fails with [`Error::Singular`] when `det C1 = 0`; callers resample.
pub fn check_nodenom(s: &Specialization, k_max: usize) -> Result<bool> {
    let n = s.n();
    if k_max == 0 || k_max >= n {
        return Err(Error::OutOfRange { index: k_max, range: format!("1..={}", n - 1) });
    }
    if s.u.a1().det()?.is_zero() {
        return Err(Error::Singular);
    }
    let zs = zeta_action_rational(&s.u, Side::Column)?;
    Ok(zs[..k_max].iter().all(|z| z.is_integral()))
}

fn x_from_y(cy: &IntMatrix, col: usize) -> [BigInt; 2] {
    [-cy[(1, col)].clone(), cy[(0, col)].clone()]
}

/// With `x1 = -C(y)[2][l]` and `x2 = C(y)[1][l]`, checks
/// `C(x, y)_k = -C(y)[1][k] C(y)[2][l] + C(y)[2][k] C(y)[1][l]` for every `k`.
pub fn check_correspondence_forward(s: &Specialization, col: usize) -> Result<bool> {
    let n = s.n();
    if col >= n {
        return Err(Error::OutOfRange { index: col, range: format!("0..{n}") });
    }
    let y = s.y.as_ref().ok_or_else(|| Error::InvariantViolation("y not specialized".into()))?;
    let cy = s.c_of_y()?;
    let [x1, x2] = x_from_y(&cy, col);
    Ok((0..n).all(|k| {
        // C(x, y)_k = sum_ij u_ijk x_i y_j
        let lhs: BigInt = (0..n)
            .map(|j| (&x1 * &s.u.a1()[(j, k)] + &x2 * &s.u.a2()[(j, k)]) * &y[j])
            .sum();
        let rhs = -(&cy[(0, k)] * &cy[(1, col)]) + &cy[(1, k)] * &cy[(0, col)];
        lhs == rhs
    }))
}

/// With `y_j = (-1)^(j + minor_col)` times the `(j, minor_col)` minor of `C(x)` and
/// `x'` built from `y` by the forward formulas on `value_col`, checks
/// `-x1' x2 + x2' x1 = det(C(x) with column minor_col replaced by column value_col)`.
pub fn check_correspondence_backward(s: &Specialization, minor_col: usize, value_col: usize) -> Result<bool> {
    let n = s.n();
    if minor_col >= n || value_col >= n {
        return Err(Error::OutOfRange { index: minor_col.max(value_col), range: format!("0..{n}") });
    }
    let [x1, x2] = s.x.clone().ok_or_else(|| Error::InvariantViolation("x not specialized".into()))?;
    let cx = s.c_of_x()?;
    let y = (0..n)
        .map(|j| {
            let m = cx.minor(j, minor_col).det()?;
            Ok(if (j + minor_col).is_multiple_of(2) { m } else { -m })
        })
        .collect::<Result<Vec<_>>>()?;
    let with_y = Specialization { u: s.u.clone(), x: None, y: Some(y) };
    let [xp1, xp2] = x_from_y(&with_y.c_of_y()?, value_col);
    let lhs = -(&xp1 * &x2) + &xp2 * &x1;
    let rhs = cx.with_column_replaced(minor_col, value_col).det()?;
    Ok(lhs == rhs)
}
