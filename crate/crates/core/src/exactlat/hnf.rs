//! Hermite normal forms, integer kernels and lattice reduction.
//!
//! Lattices are stored as column bases. The canonical form is the upper
//! triangular column HNF: positive pivots on the diagonal and every entry to
//! the right of a pivot reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::error::{Error, Result};

/// Column operation on a list of columns: `col[dst] -= q * col[src]`.
fn axpy(cols: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (a, b) = cols.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = cols.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Integer column HNF of the lattice generated by the columns of `gens`.
/// The lattice must have full rank `gens.rows()`.
pub fn int_hnf(gens: &IntMatrix) -> Result<IntMatrix> {
    let n = gens.rows();
    let mut active: Vec<Vec<BigInt>> = (0..gens.cols()).map(|c| gens.column(c)).collect();
    active.retain(|c| c.iter().any(|x| !x.is_zero()));
    let mut pivots: Vec<Vec<BigInt>> = vec![Vec::new(); n];

    for row in (0..n).rev() {
        // Euclid across all active columns on this row.
        loop {
            let nonzero: Vec<usize> =
                (0..active.len()).filter(|&i| !active[i][row].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| active[i][row].abs()).unwrap();
            for &i in &nonzero {
                if i == p {
                    continue;
                }
                let q = active[i][row].div_floor(&active[p][row]);
                axpy(&mut active, i, p, &q);
            }
        }
        let Some(p) = (0..active.len()).find(|&i| !active[i][row].is_zero()) else {
            return Err(Error::DegenerateLattice);
        };
        let mut col = active.swap_remove(p);
        if col[row].is_negative() {
            col.iter_mut().for_each(|x| *x = -x.clone());
        }
        pivots[row] = col;
        active.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    if !active.is_empty() {
        // Remaining columns would have to be zero for a rank-n lattice.
        return Err(Error::DegenerateLattice);
    }

    for row in (0..n).rev() {
        for j in row + 1..n {
            let q = pivots[j][row].div_floor(&pivots[row][row]);
            axpy(&mut pivots, j, row, &q);
        }
    }
    Matrix::from_columns(&pivots)
}

/// Canonical basis of the lattice spanned by the columns of a rational generating set.
pub fn hnf_span(gens: &RatMatrix) -> Result<RatMatrix> {
    let d = gens.common_denominator();
    let scaled = gens.map(|q| (q * BigRational::from_integer(d.clone())).to_integer());
    let h = int_hnf(&scaled)?;
    let d = BigRational::from_integer(d);
    Ok(h.map(|a| BigRational::from_integer(a.clone()) / &d))
}

/// Canonical HNF of a square nonsingular rational basis.
pub fn hnf(basis: &RatMatrix) -> Result<RatMatrix> {
    basis.ensure_square()?;
    hnf_span(basis)
}

/// Generalized index `|det(sup^-1 * sub)|`.
pub fn lattice_index(sub: &RatMatrix, sup: &RatMatrix) -> Result<BigRational> {
    sub.ensure_square()?;
    sup.ensure_square()?;
    if sub.rows() != sup.rows() {
        return Err(Error::DimensionMismatch(format!(
            "lattices of rank {} and {}",
            sub.rows(),
            sup.rows()
        )));
    }
    let a = sub.det()?;
    let b = sup.det()?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::DegenerateLattice);
    }
    Ok((a / b).abs())
}

/// Basis of `{x : B^T x in Z^n}` for a nonsingular basis `B`.
pub fn dual_basis(basis: &RatMatrix) -> Result<RatMatrix> {
    let inv_t = basis.transpose().inverse().map_err(|_| Error::DegenerateLattice)?;
    hnf(&inv_t)
}

/// Whether `v` lies in the lattice with basis `basis`.
pub fn contains(basis: &RatMatrix, v: &[BigRational]) -> Result<bool> {
    let coords = basis.solve(v).map_err(|_| Error::DegenerateLattice)?;
    Ok(coords.iter().all(BigRational::is_integer))
}

/// Z-basis (as columns) of the integer kernel `{x in Z^m : A x = 0}`.
pub fn int_kernel(a: &IntMatrix) -> IntMatrix {
    let (rows, m) = (a.rows(), a.cols());
    // Each working column carries its image under A followed by the transform.
    let mut cols: Vec<Vec<BigInt>> = (0..m)
        .map(|c| {
            let mut v = a.column(c);
            v.extend((0..m).map(|r| if r == c { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let mut next = 0;
    for row in 0..rows {
        loop {
            let nonzero: Vec<usize> = (next..m).filter(|&i| !cols[i][row].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| cols[i][row].abs()).unwrap();
            for &i in &nonzero {
                if i != p {
                    let q = cols[i][row].div_floor(&cols[p][row]);
                    axpy(&mut cols, i, p, &q);
                }
            }
        }
        if let Some(p) = (next..m).find(|&i| !cols[i][row].is_zero()) {
            cols.swap(p, next);
            next += 1;
        }
    }
    let kernel: Vec<Vec<BigInt>> = cols[next..].iter().map(|c| c[rows..].to_vec()).collect();
    if kernel.is_empty() {
        return IntMatrix::zeros(m, 0);
    }
    let basis = Matrix::from_columns(&kernel).expect("uniform kernel columns");
    lll_reduce(&basis)
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Exact LLL reduction (delta = 3/4) of linearly independent integer columns.
pub fn lll_reduce(basis: &IntMatrix) -> IntMatrix {
    let k_max = basis.cols();
    let mut b: Vec<Vec<BigInt>> = (0..k_max).map(|c| basis.column(c)).collect();
    if k_max <= 1 {
        return basis.clone();
    }
    let to_q = |v: &Vec<BigInt>| -> Vec<BigRational> {
        v.iter().cloned().map(BigRational::from_integer).collect()
    };
    let gram_schmidt = |b: &[Vec<BigInt>]| {
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(b.len());
        let mut mu = vec![vec![BigRational::zero(); b.len()]; b.len()];
        let mut norms: Vec<BigRational> = Vec::with_capacity(b.len());
        for i in 0..b.len() {
            let bi = to_q(&b[i]);
            let mut v = bi.clone();
            for j in 0..i {
                mu[i][j] = if norms[j].is_zero() {
                    BigRational::zero()
                } else {
                    dot(&bi, &star[j]) / &norms[j]
                };
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            norms.push(dot(&v, &v));
            star.push(v);
        }
        (mu, norms)
    };
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < k_max {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round().to_integer();
                axpy(&mut b, k, j, &q);
                let (m2, n2) = gram_schmidt(&b);
                mu = m2;
                norms = n2;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (m2, n2) = gram_schmidt(&b);
            mu = m2;
            norms = n2;
            k = k.max(2) - 1;
        }
    }
    Matrix::from_columns(&b).expect("uniform columns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::matrix::rat;

    #[test]
    fn identity_and_permutation() {
        let id = RatMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert_eq!(hnf(&id).unwrap(), id);
        assert_eq!(hnf(&RatMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap(), id);
    }

    #[test]
    fn two_by_two_reduction() {
        // columns (2,0) and (1,1): pivot 1 on the bottom row, then 2 on top; the
        // off-diagonal 1 already sits in [0, 2).
        let h = hnf(&RatMatrix::from_i64(&[&[2, 1], &[0, 1]])).unwrap();
        assert_eq!(h, RatMatrix::from_i64(&[&[2, 1], &[0, 1]]));
        // same lattice from a different basis: (2,0), (3,1)
        let h2 = hnf(&RatMatrix::from_i64(&[&[2, 3], &[0, 1]])).unwrap();
        assert_eq!(h2, h);
        let h3 = hnf(&RatMatrix::from_i64(&[&[-2, 5], &[0, 1]])).unwrap();
        assert_eq!(h3, h);
    }

    #[test]
    fn singular_is_degenerate() {
        let s = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(hnf(&s), Err(Error::DegenerateLattice));
    }

    #[test]
    fn rational_entries() {
        let b = RatMatrix::new(2, 2, vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 3)]).unwrap();
        let h = hnf(&b).unwrap();
        assert_eq!(h, b);
        assert_eq!(lattice_index(&b, &RatMatrix::from_i64(&[&[1, 0], &[0, 1]])).unwrap(), rat(1, 6));
    }

    #[test]
    fn index_examples() {
        let id = RatMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let two = RatMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(lattice_index(&two, &id).unwrap(), rat(4, 1));
        assert_eq!(lattice_index(&id, &id).unwrap(), rat(1, 1));
        assert_eq!(lattice_index(&id, &two).unwrap(), rat(1, 4));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let a = IntMatrix::from_i64(&[&[2, 4, 6]]);
        let k = int_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).unwrap().is_zero());
        // saturated: the kernel lattice of (1,2,3) has covolume sqrt(14); check via Gram det
        let g = k.transpose().mul(&k).unwrap();
        assert_eq!(g.det().unwrap(), BigInt::from(14));
    }

    #[test]
    fn dual_of_scaled_lattice() {
        let two = RatMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let d = dual_basis(&two).unwrap();
        assert_eq!(d, RatMatrix::new(2, 2, vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)]).unwrap());
    }
}
