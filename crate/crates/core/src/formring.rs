//! The ring `R_f` of a binary n-ic form, its modules `I_f` and `J_f`, and the
//! dual functionals that map `I_f` onto `V = Z^2`.
//!
//! Everything is computed inside `Q[theta]/F(theta, 1)`, which requires a
//! nonzero leading coefficient `f_0`. Forms with `f_0 = 0` are first moved by
//! [`normalize_leading`]; that transport is the caller's job.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{contains, hnf_span, lattice_index, IntMatrix, Matrix, RatMatrix};
use crate::groups::{gl2_act_form, GL2Elem};

/// `f_0 x^n + f_1 x^(n-1) y + ... + f_n y^n` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroForm);
        }
        if coeffs.len() < 3 {
            return Err(Error::DegreeTooSmall(coeffs.len().saturating_sub(1)));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        BinaryForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let n = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(x.clone(), n - i) * num_traits::pow(y.clone(), i))
            .sum()
    }

    /// gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `(-1)^(n(n-1)/2) Res(F, F') / f_0` with `F = F(x, 1)`, computed after
    /// moving to `f_0 != 0` by a determinant-one shear.
    pub fn discriminant(&self) -> BigInt {
        let (_, g) = normalize_leading(self).expect("nonzero by construction");
        g.discriminant_monic_free()
    }

    fn discriminant_monic_free(&self) -> BigInt {
        let n = self.degree();
        let f: Vec<BigInt> = self.coeffs.clone();
        let df: Vec<BigInt> =
            (0..n).map(|i| &f[i] * BigInt::from((n - i) as u64)).collect();
        let res = sylvester_resultant(&f, &df);
        let d = res / &f[0];
        if (n * (n - 1) / 2) % 2 == 1 { -d } else { d }
    }
}

/// Resultant of two polynomials given highest coefficient first.
fn sylvester_resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let size = dp + dq;
    let m = Matrix::from_fn(size, size, |r, c| {
        if r < dq {
            c.checked_sub(r).and_then(|i| p.get(i)).cloned().unwrap_or_default()
        } else {
            c.checked_sub(r - dq).and_then(|i| q.get(i)).cloned().unwrap_or_default()
        }
    });
    m.det().expect("square")
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "BinaryForm({})", parts.join(","))
    }
}

/// Discriminant and primitivity of a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormStats {
    pub disc: BigInt,
    pub primitive: bool,
}

pub fn form_stats(f: &BinaryForm) -> FormStats {
    FormStats { disc: f.discriminant(), primitive: f.is_primitive() }
}

/// Move `f` to a form with nonzero leading coefficient.
///
/// Returns the identity when `f_0 != 0`, otherwise the shear
/// `(x, y) -> (x, y + t x)` with the smallest `|t| >= 1` (positive first)
/// such that `F(1, t) != 0`.
pub fn normalize_leading(f: &BinaryForm) -> Result<(GL2Elem, BinaryForm)> {
    if f.coeffs.iter().all(Zero::is_zero) {
        return Err(Error::ZeroForm);
    }
    if !f.leading().is_zero() {
        return Ok((GL2Elem::identity(), f.clone()));
    }
    let one = BigInt::one();
    for m in 1i64.. {
        for t in [m, -m] {
            if !f.eval(&one, &BigInt::from(t)).is_zero() {
                let g = GL2Elem::shear(t);
                return Ok((g.clone(), gl2_act_form(&g, f)));
            }
        }
    }
    unreachable!("a nonzero form has finitely many roots")
}

/// An element of `Q[theta]/F(theta, 1)` in coordinates on `1, theta, ..., theta^(n-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThetaVec(pub Vec<BigRational>);

impl ThetaVec {
    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn zero(n: usize) -> Self {
        ThetaVec(vec![BigRational::zero(); n])
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = ThetaVec::zero(n);
        v.0[k] = BigRational::one();
        v
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        ThetaVec(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ThetaVec) -> ThetaVec {
        ThetaVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ThetaVec) -> ThetaVec {
        ThetaVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &BigRational) -> ThetaVec {
        ThetaVec(self.0.iter().map(|a| a * s).collect())
    }

    /// `theta_check_k`: the coefficient of `theta^k`.
    pub fn theta_coord(&self, k: usize) -> &BigRational {
        &self.0[k]
    }
}

impl fmt::Debug for ThetaVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "ThetaVec[{}]", parts.join(", "))
    }
}

/// The rank-n ring `R_f` with basis `zeta_0 = 1, zeta_k = f_0 theta^k + ... + f_(k-1) theta`.
#[derive(Clone)]
pub struct RingRf {
    form: BinaryForm,
    n: usize,
    /// `theta^d` reduced, for `d = 0..=2n-2`.
    theta_powers: Vec<ThetaVec>,
    zeta: Vec<ThetaVec>,
    /// Columns are the theta-coordinates of the zeta basis.
    zeta_basis: RatMatrix,
    zeta_basis_inv: RatMatrix,
    /// `struct_consts[i][j][k]` is the `zeta_k` coefficient of `zeta_i * zeta_j`.
    struct_consts: Vec<Vec<Vec<BigInt>>>,
}

impl fmt::Debug for RingRf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingRf").field("form", &self.form).finish_non_exhaustive()
    }
}

impl PartialEq for RingRf {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
    }
}

impl Eq for RingRf {}

/// Build `R_f` and its integral structure constants. Requires `f_0 != 0`.
pub fn make_ring(f: &BinaryForm) -> Result<RingRf> {
    if f.leading().is_zero() {
        return Err(Error::LeadingCoefficientVanishes);
    }
    let n = f.degree();
    let f0 = BigRational::from_integer(f.leading().clone());

    let mut theta_powers: Vec<ThetaVec> = (0..n).map(|k| ThetaVec::basis(n, k)).collect();
    for _ in n..=2 * n - 2 {
        let prev = theta_powers.last().unwrap();
        theta_powers.push(shift_by_theta(f, &f0, prev));
    }

    let zeta: Vec<ThetaVec> = (0..n)
        .map(|k| {
            if k == 0 {
                return ThetaVec::basis(n, 0);
            }
            let mut v = ThetaVec::zero(n);
            // zeta_k = sum_{i<k} f_i theta^(k-i)
            for i in 0..k {
                v.0[k - i] = BigRational::from_integer(f.coeff(i).clone());
            }
            v
        })
        .collect();
    let zeta_basis =
        Matrix::from_columns(&zeta.iter().map(|z| z.0.clone()).collect::<Vec<_>>())?;
    let zeta_basis_inv = zeta_basis.inverse()?;

    let mut ring = RingRf {
        form: f.clone(),
        n,
        theta_powers,
        zeta,
        zeta_basis,
        zeta_basis_inv,
        struct_consts: Vec::new(),
    };

    let mut consts = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = ring.mul(&ring.zeta[i], &ring.zeta[j]);
            let coords = ring.zeta_coords(&prod);
            let ints = coords
                .iter()
                .map(|q| {
                    if q.is_integer() {
                        Ok(q.to_integer())
                    } else {
                        Err(Error::NonIntegral(format!(
                            "structure constant of zeta_{i} * zeta_{j}: {q}"
                        )))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            consts[i][j] = ints.clone();
            consts[j][i] = ints;
        }
    }
    ring.struct_consts = consts;
    Ok(ring)
}

fn shift_by_theta(f: &BinaryForm, f0: &BigRational, v: &ThetaVec) -> ThetaVec {
    let n = f.degree();
    let top = v.0[n - 1].clone();
    let mut out = ThetaVec::zero(n);
    for k in 1..n {
        out.0[k] = v.0[k - 1].clone();
    }
    if !top.is_zero() {
        // theta^n = -(f_1 theta^(n-1) + ... + f_n) / f_0
        let scale = -&top / f0;
        for i in 1..=n {
            out.0[n - i] += &scale * BigRational::from_integer(f.coeff(i).clone());
        }
    }
    out
}

impl RingRf {
    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn f0(&self) -> BigRational {
        BigRational::from_integer(self.form.leading().clone())
    }

    pub fn one(&self) -> ThetaVec {
        ThetaVec::basis(self.n, 0)
    }

    pub fn theta(&self) -> ThetaVec {
        ThetaVec::basis(self.n, 1.min(self.n - 1))
    }

    pub fn theta_pow(&self, k: usize) -> ThetaVec {
        if k < self.theta_powers.len() {
            return self.theta_powers[k].clone();
        }
        let mut v = self.theta_powers.last().unwrap().clone();
        for _ in self.theta_powers.len()..=k {
            v = shift_by_theta(&self.form, &self.f0(), &v);
        }
        v
    }

    pub fn zeta(&self, k: usize) -> &ThetaVec {
        &self.zeta[k]
    }

    pub fn struct_const(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.struct_consts[i][j][k]
    }

    pub fn struct_consts(&self) -> &[Vec<Vec<BigInt>>] {
        &self.struct_consts
    }

    /// Theta-coordinates of the zeta basis as matrix columns.
    pub fn zeta_basis(&self) -> &RatMatrix {
        &self.zeta_basis
    }

    pub fn scalar(&self, q: &BigRational) -> ThetaVec {
        let mut v = ThetaVec::zero(self.n);
        v.0[0] = q.clone();
        v
    }

    pub fn mul(&self, a: &ThetaVec, b: &ThetaVec) -> ThetaVec {
        let n = self.n;
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = ThetaVec(prod[..n].to_vec());
        for (d, c) in prod.iter().enumerate().skip(n) {
            if c.is_zero() {
                continue;
            }
            for (o, t) in out.0.iter_mut().zip(&self.theta_powers[d].0) {
                if !t.is_zero() {
                    *o += c * t;
                }
            }
        }
        out
    }

    /// Coordinates on the zeta basis.
    pub fn zeta_coords(&self, x: &ThetaVec) -> Vec<BigRational> {
        self.zeta_basis_inv.mul_vec(&x.0).expect("dimensions agree")
    }

    pub fn from_zeta_coords(&self, c: &[BigRational]) -> ThetaVec {
        ThetaVec(self.zeta_basis.mul_vec(c).expect("dimensions agree"))
    }

    pub fn from_zeta_ints(&self, c: &[BigInt]) -> ThetaVec {
        let q: Vec<BigRational> = c.iter().cloned().map(BigRational::from_integer).collect();
        self.from_zeta_coords(&q)
    }

    /// Matrix of multiplication by `x` in theta-coordinates.
    pub fn mult_matrix(&self, x: &ThetaVec) -> RatMatrix {
        let cols: Vec<Vec<BigRational>> =
            (0..self.n).map(|k| self.mul(x, &self.theta_powers[k]).0).collect();
        Matrix::from_columns(&cols).expect("square")
    }

    /// Norm from `Q[theta]/F` to `Q`.
    pub fn norm(&self, x: &ThetaVec) -> BigRational {
        self.mult_matrix(x).det().expect("square")
    }

    pub fn is_zero_divisor(&self, x: &ThetaVec) -> bool {
        self.norm(x).is_zero()
    }

    pub fn inverse(&self, x: &ThetaVec) -> Result<ThetaVec> {
        let m = self.mult_matrix(x);
        m.solve(&self.one().0).map(ThetaVec).map_err(|_| Error::ZeroDivisor)
    }

    /// Regular representation of `zeta_k` on the zeta basis (acting on columns).
    pub fn regular_rep(&self, k: usize) -> IntMatrix {
        Matrix::from_fn(self.n, self.n, |r, c| self.struct_consts[k][c][r].clone())
    }

    /// Regular representation of `sum a_k zeta_k` on the zeta basis.
    pub fn regular_rep_of(&self, coeffs: &[BigInt]) -> IntMatrix {
        let mut acc = IntMatrix::zeros(self.n, self.n);
        for (k, a) in coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(&self.regular_rep(k).scale(a)).expect("square");
            }
        }
        acc
    }

    /// `zeta_check_(n-1)(r) = theta_check_(n-1)(r) / f_0`.
    pub fn zeta_dual_top(&self, r: &ThetaVec) -> BigRational {
        &r.0[self.n - 1] / self.f0()
    }

    /// `zeta_check_(n-2)(r) = (theta_check_(n-2)(r) - f_1 theta_check_(n-1)(r) / f_0) / f_0`.
    pub fn zeta_dual_second(&self, r: &ThetaVec) -> BigRational {
        let f0 = self.f0();
        let f1 = BigRational::from_integer(self.form.coeff(1).clone());
        (&r.0[self.n - 2] - f1 * &r.0[self.n - 1] / &f0) / f0
    }

    /// The functional `zeta_check_which`; only `which = n-1` and `which = n-2` exist.
    pub fn zeta_dual(&self, r: &ThetaVec, which: usize) -> Result<BigRational> {
        let n = self.n;
        if which == n - 1 {
            Ok(self.zeta_dual_top(r))
        } else if which == n - 2 {
            Ok(self.zeta_dual_second(r))
        } else {
            Err(Error::OutOfRange { index: which, range: format!("{{{}, {}}}", n - 2, n - 1) })
        }
    }

    /// Checks `zeta_check_(n-1)(zeta_k r) = theta_check_(n-1-k)(r) - f_k zeta_check_(n-1)(r)`.
    pub fn getcoeff_identity(&self, r: &ThetaVec, k: usize) -> Result<bool> {
        let n = self.n;
        if k == 0 || k >= n {
            return Err(Error::OutOfRange { index: k, range: format!("1..={}", n - 1) });
        }
        let lhs = self.zeta_dual_top(&self.mul(&self.zeta[k], r));
        let fk = BigRational::from_integer(self.form.coeff(k).clone());
        let rhs = r.theta_coord(n - 1 - k) - fk * self.zeta_dual_top(r);
        Ok(lhs == rhs)
    }

    /// The map `I_f -> V`: `r -> (zeta_check_(n-1)(r), -zeta_check_(n-2)(r))`.
    pub fn to_v(&self, r: &ThetaVec) -> (BigRational, BigRational) {
        (self.zeta_dual_top(r), -self.zeta_dual_second(r))
    }

    /// `R_f` itself as a lattice.
    pub fn lattice(&self) -> Lattice {
        Lattice::from_basis_matrix(&self.zeta_basis).expect("zeta basis is nonsingular")
    }

    /// Generators of `I_f` and `J_f`.
    pub fn make_if_jf(&self) -> (Lattice, Lattice) {
        let n = self.n;
        let f0 = self.f0();
        let f1 = BigRational::from_integer(self.form.coeff(1).clone());
        let mut i_gens: Vec<ThetaVec> = (0..n - 2).map(|k| ThetaVec::basis(n, k)).collect();
        i_gens.push(ThetaVec::basis(n, n - 2).scale(&f0));
        i_gens.push(ThetaVec::basis(n, n - 1).scale(&f0).add(&ThetaVec::basis(n, n - 2).scale(&f1)));
        let mut j_gens: Vec<ThetaVec> = (0..n - 1).map(|k| ThetaVec::basis(n, k)).collect();
        j_gens.push(self.zeta[n - 1].clone());
        (
            Lattice::from_generators(&i_gens).expect("I_f has full rank"),
            Lattice::from_generators(&j_gens).expect("J_f has full rank"),
        )
    }

    /// `[R_f : L]` as a positive rational.
    pub fn ideal_norm(&self, l: &Lattice) -> Result<BigRational> {
        lattice_index(l.basis(), &self.zeta_basis)
    }

    /// Structure-constant checks: commutativity, associativity, identity.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        let c = &self.struct_consts;
        for i in 0..n {
            for k in 0..n {
                let expected = if i == k { BigInt::one() } else { BigInt::zero() };
                if c[0][i][k] != expected {
                    return Err(Error::InvariantViolation(format!("zeta_0 * zeta_{i} != zeta_{i}")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if c[i][j] != c[j][i] {
                    return Err(Error::InvariantViolation(format!("zeta_{i} zeta_{j} not commutative")));
                }
                for l in 0..n {
                    // (z_i z_j) z_l = z_i (z_j z_l)
                    for m in 0..n {
                        let lhs: BigInt = (0..n).map(|k| &c[i][j][k] * &c[k][l][m]).sum();
                        let rhs: BigInt = (0..n).map(|k| &c[j][l][k] * &c[i][k][m]).sum();
                        if lhs != rhs {
                            return Err(Error::InvariantViolation(format!(
                                "associativity fails for zeta_{i}, zeta_{j}, zeta_{l}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A full-rank lattice in `Q^n`, stored by its canonical HNF column basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: RatMatrix,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.basis)
    }
}

impl Lattice {
    pub fn from_basis_matrix(m: &RatMatrix) -> Result<Self> {
        Ok(Lattice { basis: hnf_span(m)? })
    }

    pub fn from_generators(gens: &[ThetaVec]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::DegenerateLattice);
        }
        let cols: Vec<Vec<BigRational>> = gens.iter().map(|g| g.0.clone()).collect();
        Lattice::from_basis_matrix(&Matrix::from_columns(&cols)?)
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_vectors(&self) -> Vec<ThetaVec> {
        (0..self.basis.cols()).map(|c| ThetaVec(self.basis.column(c))).collect()
    }

    pub fn contains(&self, v: &ThetaVec) -> bool {
        contains(&self.basis, &v.0).expect("canonical bases are nonsingular")
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Generalized index `[self : sub]`.
    pub fn index_of(&self, sub: &Lattice) -> BigRational {
        lattice_index(&sub.basis, &self.basis).expect("canonical bases are nonsingular")
    }

    pub fn scale(&self, s: &BigRational) -> Result<Lattice> {
        if s.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Lattice::from_basis_matrix(&self.basis.scale(s))
    }

    /// Sum of two lattices.
    pub fn join(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis_vectors();
        gens.extend(other.basis_vectors());
        Lattice::from_generators(&gens).expect("contains a full-rank lattice")
    }
}
