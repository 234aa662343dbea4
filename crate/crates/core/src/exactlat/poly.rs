use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use super::matrix::{Matrix, RatMatrix};
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Clone + Num> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }
}

impl<T: fmt::Display> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl IntPoly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        Poly::new(self.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }
}

impl RatPoly {
    pub fn to_integer(&self) -> Result<IntPoly> {
        self.coeffs
            .iter()
            .map(|q| {
                if q.is_integer() {
                    Ok(q.to_integer())
                } else {
                    Err(Error::NonIntegral(format!("polynomial coefficient {q}")))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Poly::new)
    }
}

/// Monic characteristic polynomial `det(t*I - m)` by Berkowitz's division-free recurrence.
pub fn charpoly<T>(m: &Matrix<T>) -> Result<Poly<T>>
where
    T: Clone + Num + std::ops::Neg<Output = T>,
{
    m.ensure_square()?;
    let n = m.rows();
    // highest degree first while iterating
    let mut v: Vec<T> = vec![T::one()];
    for k in 0..n {
        // q = [1, -a_kk, -R C, -R A C, ..., -R A^{k-1} C]
        let mut q = Vec::with_capacity(k + 2);
        q.push(T::one());
        q.push(-m[(k, k)].clone());
        let mut col: Vec<T> = (0..k).map(|i| m[(i, k)].clone()).collect();
        for _ in 0..k {
            let rc = (0..k).fold(T::zero(), |acc, j| acc + m[(k, j)].clone() * col[j].clone());
            q.push(-rc);
            col = (0..k)
                .map(|i| (0..k).fold(T::zero(), |acc, j| acc + m[(i, j)].clone() * col[j].clone()))
                .collect();
        }
        let next: Vec<T> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(T::zero(), |acc, j| acc + q[i - j].clone() * v[j].clone())
            })
            .collect();
        v = next;
    }
    v.reverse();
    Ok(Poly::new(v))
}

/// Exact Lagrange interpolation through `(x_i, y_i)`; returns coefficients lowest first.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> Result<RatPoly> {
    let n = points.len();
    for i in 0..n {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return Err(Error::Singular);
            }
        }
    }
    let mut acc = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] += b;
                next[d] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let factor = yi / denom;
        for (d, b) in basis.iter().enumerate() {
            acc[d] += b * &factor;
        }
    }
    Ok(Poly::new(acc))
}

/// Characteristic polynomial of a rational matrix, convenience wrapper.
pub fn charpoly_rat(m: &RatMatrix) -> Result<RatPoly> {
    charpoly(m)
}
