//! Fractional ideals of `R_f` and the equivalent balancing criteria.
//!
//! Self-balance convention: `(M, k)` is self-balanced when `M^2 k` lies in
//! `I_f` and `|M|^2 |(k)| = |I_f|`; for primitive forms this is the same as
//! `M = (I_f k^-1 : M)`. Classes are `(M, k) ~ (l M, l^-2 k)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlat::{charpoly, dual_basis, hnf_span, int_to_rat, Matrix, RatMatrix};
use crate::formring::{Lattice, RingRf, ThetaVec};
use crate::tensorlink::{BalancedPair, RfModule, Side};

/// A lattice in `Q[theta]/F` closed under multiplication by `R_f`.
#[derive(Clone)]
pub struct FractionalIdeal {
    ring: Arc<RingRf>,
    lattice: Lattice,
}

impl fmt::Debug for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FractionalIdeal({:?})", self.lattice)
    }
}

impl PartialEq for FractionalIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.lattice == other.lattice
    }
}

impl Eq for FractionalIdeal {}

impl FractionalIdeal {
    pub fn new(ring: Arc<RingRf>, lattice: Lattice) -> Result<Self> {
        if lattice.rank() != ring.degree() {
            return Err(Error::DimensionMismatch("lattice rank differs from ring degree".into()));
        }
        for b in lattice.basis_vectors() {
            for k in 1..ring.degree() {
                if !lattice.contains(&ring.mul(ring.zeta(k), &b)) {
                    return Err(Error::InvariantViolation(format!(
                        "lattice is not closed under zeta_{k}"
                    )));
                }
            }
        }
        Ok(FractionalIdeal { ring, lattice })
    }

    /// The `R_f`-module generated by `gens`.
    pub fn generated_by(ring: Arc<RingRf>, gens: &[ThetaVec]) -> Result<Self> {
        let mut all = Vec::with_capacity(gens.len() * ring.degree());
        for g in gens {
            for k in 0..ring.degree() {
                all.push(ring.mul(ring.zeta(k), g));
            }
        }
        let lattice = Lattice::from_generators(&all)?;
        FractionalIdeal::new(ring, lattice)
    }

    pub fn unit(ring: Arc<RingRf>) -> Self {
        let lattice = ring.lattice();
        FractionalIdeal { ring, lattice }
    }

    pub fn i_f(ring: Arc<RingRf>) -> Self {
        let (i, _) = ring.make_if_jf();
        FractionalIdeal { ring, lattice: i }
    }

    pub fn j_f(ring: Arc<RingRf>) -> Self {
        let (_, j) = ring.make_if_jf();
        FractionalIdeal { ring, lattice: j }
    }

    /// `alpha R_f` for a non-zero-divisor `alpha`.
    pub fn principal(ring: Arc<RingRf>, alpha: &ThetaVec) -> Result<Self> {
        if ring.is_zero_divisor(alpha) {
            return Err(Error::ZeroDivisor);
        }
        FractionalIdeal::generated_by(ring, std::slice::from_ref(alpha))
    }

    pub fn ring(&self) -> &Arc<RingRf> {
        &self.ring
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// `|M| = [R_f : M]`.
    pub fn norm(&self) -> BigRational {
        self.ring.ideal_norm(&self.lattice).expect("nonsingular lattice")
    }

    /// `alpha M` for a non-zero-divisor `alpha`.
    pub fn times(&self, alpha: &ThetaVec) -> Result<FractionalIdeal> {
        if self.ring.is_zero_divisor(alpha) {
            return Err(Error::ZeroDivisor);
        }
        let gens: Vec<ThetaVec> =
            self.lattice.basis_vectors().iter().map(|b| self.ring.mul(alpha, b)).collect();
        Ok(FractionalIdeal { ring: self.ring.clone(), lattice: Lattice::from_generators(&gens)? })
    }

    pub fn scale(&self, q: &BigRational) -> Result<FractionalIdeal> {
        Ok(FractionalIdeal { ring: self.ring.clone(), lattice: self.lattice.scale(q)? })
    }

    /// `M (R_f : M) = R_f`.
    pub fn is_invertible(&self) -> bool {
        let unit = FractionalIdeal::unit(self.ring.clone());
        ideal_quotient(&unit, self)
            .and_then(|inv| ideal_product(self, &inv))
            .is_ok_and(|p| p == unit)
    }
}

fn same_ring(a: &FractionalIdeal, b: &FractionalIdeal) -> Result<()> {
    if a.ring != b.ring {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// Span of all pairwise products of basis elements.
pub fn lattice_product(ring: &RingRf, a: &Lattice, b: &Lattice) -> Result<Lattice> {
    let bv = b.basis_vectors();
    let mut gens = Vec::with_capacity(a.rank() * b.rank());
    for x in a.basis_vectors() {
        for y in &bv {
            gens.push(ring.mul(&x, y));
        }
    }
    Lattice::from_generators(&gens)
}

/// `{x : x N in I}`, the dual of the lattice spanned by the rows of `B_I^-1 Mult(nu)`.
pub fn lattice_quotient(ring: &RingRf, i: &Lattice, n: &Lattice) -> Result<Lattice> {
    let bi_inv = i.basis().inverse().map_err(|_| Error::DegenerateLattice)?;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for nu in n.basis_vectors() {
        let r = bi_inv.mul(&ring.mult_matrix(&nu))?;
        rows.extend(r.to_rows());
    }
    // columns of the transpose are the constraint functionals
    let functionals = Matrix::from_rows(&rows)?.transpose();
    let span = hnf_span(&functionals)?;
    Lattice::from_basis_matrix(&dual_basis(&span)?)
}

pub fn ideal_product(a: &FractionalIdeal, b: &FractionalIdeal) -> Result<FractionalIdeal> {
    same_ring(a, b)?;
    let lattice = lattice_product(&a.ring, &a.lattice, &b.lattice)?;
    Ok(FractionalIdeal { ring: a.ring.clone(), lattice })
}

pub fn ideal_quotient(i: &FractionalIdeal, n: &FractionalIdeal) -> Result<FractionalIdeal> {
    same_ring(i, n)?;
    let lattice = lattice_quotient(&i.ring, &i.lattice, &n.lattice)?;
    FractionalIdeal::new(i.ring.clone(), lattice)
}

/// Result of testing `(M, N)` against both balancing criteria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceVerdict {
    /// `M N` lies in `I_f`.
    pub contained: bool,
    /// `|M| |N| = |I_f|`.
    pub norm_ok: bool,
    /// `[(J_f : N) : M] = [J_f : I_f]`.
    pub index_ok: bool,
    pub criteria_agree: bool,
    pub norm_m: BigRational,
    pub norm_n: BigRational,
    pub norm_if: BigRational,
}

impl BalanceVerdict {
    pub fn balanced(&self) -> bool {
        self.contained && self.norm_ok && self.index_ok
    }
}

fn ensure_nondegenerate(ring: &RingRf) -> Result<()> {
    if ring.form().discriminant().is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok(())
}

/// Containment plus index equality; valid for degenerate forms too.
pub fn index_criterion(ring: &RingRf, m: &Lattice, n: &Lattice) -> Result<(bool, bool)> {
    let (i_f, j_f) = ring.make_if_jf();
    let contained = lattice_quotient(ring, &i_f, n)?.contains_lattice(m);
    let hom_nj = lattice_quotient(ring, &j_f, n)?;
    Ok((contained, hom_nj.index_of(m) == j_f.index_of(&i_f)))
}

/// Evaluate the norm and index criteria for `(M, N)`. Refuses degenerate forms.
pub fn check_balanced(ring: &RingRf, m: &Lattice, n: &Lattice) -> Result<BalanceVerdict> {
    ensure_nondegenerate(ring)?;
    let (i_f, _) = ring.make_if_jf();
    let contained = i_f.contains_lattice(&lattice_product(ring, m, n)?);
    let norm_m = ring.ideal_norm(m)?;
    let norm_n = ring.ideal_norm(n)?;
    let norm_if = ring.ideal_norm(&i_f)?;
    let norm_ok = &norm_m * &norm_n == norm_if;
    let (_, index_ok) = index_criterion(ring, m, n)?;
    Ok(BalanceVerdict {
        contained,
        norm_ok,
        index_ok,
        criteria_agree: (contained && norm_ok) == (contained && index_ok),
        norm_m,
        norm_n,
        norm_if,
    })
}

/// `(I_f : N)` together with whether the hypotheses guarantee it is a partner.
#[derive(Debug, Clone)]
pub struct PartnerReport {
    pub partner: FractionalIdeal,
    /// `f` primitive and nondegenerate, or `N` invertible.
    pub guaranteed: bool,
    pub verdict: BalanceVerdict,
}

pub fn balancing_partner(n: &FractionalIdeal) -> Result<PartnerReport> {
    let ring = n.ring.clone();
    let f = ring.form();
    let guaranteed = (f.is_primitive() && !f.discriminant().is_zero()) || n.is_invertible();
    let partner = ideal_quotient(&FractionalIdeal::i_f(ring.clone()), n)?;
    let verdict = check_balanced(&ring, partner.lattice(), n.lattice())?;
    Ok(PartnerReport { partner, guaranteed, verdict })
}

/// Result of the self-balance test for `(M, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfBalanceVerdict {
    /// `M^2 k` lies in `I_f`.
    pub contained: bool,
    /// `|M|^2 |(k)| = |I_f|`.
    pub norm_ok: bool,
    /// `M = (I_f k^-1 : M)`; only evaluated for primitive forms.
    pub quotient_ok: Option<bool>,
    pub norm_m: BigRational,
    pub norm_k: BigRational,
    pub norm_if: BigRational,
}

impl SelfBalanceVerdict {
    pub fn self_balanced(&self) -> bool {
        self.contained && self.norm_ok && self.quotient_ok.unwrap_or(true)
    }
}

pub fn self_balance_check(m: &FractionalIdeal, k: &ThetaVec) -> Result<SelfBalanceVerdict> {
    let ring = m.ring.clone();
    ensure_nondegenerate(&ring)?;
    if ring.is_zero_divisor(k) {
        return Err(Error::ZeroDivisor);
    }
    let i_f = FractionalIdeal::i_f(ring.clone());
    let m2 = ideal_product(m, m)?;
    let m2k = m2.times(k)?;
    let contained = i_f.lattice().contains_lattice(m2k.lattice());
    let norm_m = m.norm();
    let norm_k = ring.norm(k).abs();
    let norm_if = i_f.norm();
    let norm_ok = &norm_m * &norm_m * &norm_k == norm_if;
    let quotient_ok = if ring.form().is_primitive() {
        let target = i_f.times(&ring.inverse(k)?)?;
        Some(ideal_quotient(&target, m)? == *m)
    } else {
        None
    };
    Ok(SelfBalanceVerdict { contained, norm_ok, quotient_ok, norm_m, norm_k, norm_if })
}

/// Whether every `zeta` action (basis elements and `trials` random combinations
/// with coefficients in `[-3, 3]`) has the charpoly of the regular representation.
pub fn is_characteristic<R: Rng + ?Sized>(m: &RfModule, trials: usize, rng: &mut R) -> Result<bool> {
    let ring = m.ring();
    let n = ring.degree();
    for k in 1..n {
        if charpoly(&m.action(k))? != charpoly(&ring.regular_rep(k))? {
            return Ok(false);
        }
    }
    for _ in 0..trials {
        let coeffs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.random_range(-3i64..=3))).collect();
        if charpoly(&m.action_of(&coeffs))? != charpoly(&ring.regular_rep_of(&coeffs))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A module embedded in `Q[theta]/F`: `images[i]` is where basis element `i` goes.
#[derive(Debug, Clone)]
pub struct RealizedModule {
    pub ideal: FractionalIdeal,
    pub images: Vec<ThetaVec>,
}

/// Embed a characteristic module as a fractional ideal by a cyclic vector for `theta`.
pub fn realize_fractional_ideal(m: &RfModule) -> Result<RealizedModule> {
    let ring = m.ring().clone();
    ensure_nondegenerate(&ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    if !is_characteristic(m, 4, &mut rng)? {
        return Err(Error::NotCharacteristic);
    }
    let n = ring.degree();
    let t = match m.side() {
        Side::Column => m.theta_action(),
        Side::Row => m.theta_action().transpose(),
    };
    let krylov = |v: Vec<BigRational>| -> Result<RatMatrix> {
        let mut cols = vec![v];
        for _ in 1..n {
            let next = t.mul_vec(cols.last().unwrap())?;
            cols.push(next);
        }
        Matrix::from_columns(&cols)
    };
    let mut candidates: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    candidates.extend((0..64).map(|_| (0..n).map(|_| int_to_rat(&rng.random_range(-3i64..=3).into())).collect()));
    for v in candidates {
        let k = krylov(v)?;
        if let Ok(k_inv) = k.inverse() {
            let images: Vec<ThetaVec> = (0..n).map(|c| ThetaVec(k_inv.column(c))).collect();
            let ideal = FractionalIdeal::new(ring.clone(), Lattice::from_basis_matrix(&k_inv)?)?;
            return Ok(RealizedModule { ideal, images });
        }
    }
    Err(Error::InvariantViolation("no cyclic vector found for a separable theta-action".into()))
}

/// Both modules of a pair as fractional ideals, with `N` rescaled so the
/// pairing is literal multiplication.
#[derive(Debug, Clone)]
pub struct RealizedPair {
    pub m: RealizedModule,
    pub n: RealizedModule,
    /// The element `l` with `m o n = l * iota_M(m) * iota_N(n)` before rescaling.
    pub lambda: ThetaVec,
}

pub fn realize_pair(p: &BalancedPair) -> Result<RealizedPair> {
    let ring = p.ring().clone();
    let rm = realize_fractional_ideal(p.m())?;
    let rn = realize_fractional_ideal(p.n())?;
    let n = ring.degree();
    // Products of basis images can all be zero divisors when the algebra
    // splits, so solve against a random combination instead.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut lambda = None;
    for _ in 0..64 {
        let (mut x, mut y) = (ThetaVec::zero(n), ThetaVec::zero(n));
        for j in 0..n {
            for k in 0..n {
                let c = BigRational::from_integer(BigInt::from(rng.random_range(-5i64..=5)));
                x = x.add(&ring.mul(&rm.images[j], &rn.images[k]).scale(&c));
                y = y.add(&p.pairing()[j][k].scale(&c));
            }
        }
        if !ring.is_zero_divisor(&x) {
            lambda = Some(ring.mul(&y, &ring.inverse(&x)?));
            break;
        }
    }
    let lambda =
        lambda.ok_or_else(|| Error::InvariantViolation("products of basis images span a degenerate space".into()))?;
    for j in 0..n {
        for k in 0..n {
            let lit = ring.mul(&lambda, &ring.mul(&rm.images[j], &rn.images[k]));
            if lit != p.pairing()[j][k] {
                return Err(Error::InvariantViolation(format!(
                    "pairing is not a multiple of the product at ({j}, {k})"
                )));
            }
        }
    }
    let images: Vec<ThetaVec> = rn.images.iter().map(|x| ring.mul(&lambda, x)).collect();
    let ideal = rn.ideal.times(&lambda)?;
    Ok(RealizedPair { m: rm, n: RealizedModule { ideal, images }, lambda })
}

/// For a pair with `M = N` (symmetric tensor): the ideal `M` and the witness `k`.
pub fn realize_self_balanced(p: &BalancedPair) -> Result<(FractionalIdeal, ThetaVec)> {
    let n = p.ring().degree();
    if (1..n).any(|k| p.m().action(k) != p.n().action(k).transpose()) {
        return Err(Error::NotSymmetric);
    }
    let rm = realize_fractional_ideal(p.m())?;
    let rn = realize_fractional_ideal(p.n())?;
    if rm.images != rn.images {
        return Err(Error::InvariantViolation("mirrored modules embedded differently".into()));
    }
    let rp = realize_pair(p)?;
    Ok((rm.ideal, rp.lambda))
}

/// A random fractional ideal: the `R_f`-span of `n` random elements of `R_f`
/// with zeta-coordinates in `[-bound, bound]`, divided by a random `d` in `1..=3`.
pub fn random_fractional_ideal<R: Rng + ?Sized>(ring: &Arc<RingRf>, bound: i64, rng: &mut R) -> FractionalIdeal {
    let n = ring.degree();
    loop {
        let gens: Vec<ThetaVec> = (0..n)
            .map(|_| {
                let c: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect();
                ring.from_zeta_ints(&c)
            })
            .collect();
        if let Ok(ideal) = FractionalIdeal::generated_by(ring.clone(), &gens) {
            let d = BigRational::new(BigInt::one(), BigInt::from(rng.random_range(1i64..=3)));
            return ideal.scale(&d).expect("nonzero scale");
        }
    }
}

/// A random non-zero-divisor of `R_f` with zeta-coordinates in `[-bound, bound]`.
pub fn random_unit_of_algebra<R: Rng + ?Sized>(ring: &RingRf, bound: i64, rng: &mut R) -> ThetaVec {
    let n = ring.degree();
    loop {
        let c: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect();
        let x = ring.from_zeta_ints(&c);
        if !ring.is_zero_divisor(&x) {
            return x;
        }
    }
}

/// Determinant of `[zeta_check_(n-1)(m_i n_j)]` over the lattice bases.
pub fn pairing_determinant(ring: &RingRf, m: &Lattice, n: &Lattice) -> BigRational {
    let mb = m.basis_vectors();
    let nb = n.basis_vectors();
    let d = ring.degree();
    let g = Matrix::from_fn(d, d, |i, j| ring.zeta_dual_top(&ring.mul(&mb[i], &nb[j])));
    g.det().expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::rat;
    use crate::formring::{make_ring, BinaryForm};
    use crate::tensorlink::{psi, Tensor2nn};

    fn ring(c: &[i64]) -> Arc<RingRf> {
        Arc::new(make_ring(&BinaryForm::from_i64(c).unwrap()).unwrap())
    }

    #[test]
    fn unit_quotients_and_products() {
        let r = ring(&[2, 3, 5]);
        let unit = FractionalIdeal::unit(r.clone());
        let i_f = FractionalIdeal::i_f(r.clone());
        assert_eq!(ideal_quotient(&i_f, &unit).unwrap(), i_f);
        assert_eq!(ideal_product(&unit, &i_f).unwrap(), i_f);
        let mult = ideal_quotient(&i_f, &i_f).unwrap();
        assert!(mult.lattice().contains_lattice(unit.lattice()));
        // primitive form: I_f is invertible, so the multiplier ring is R_f
        assert_eq!(mult, unit);
        assert!(i_f.is_invertible());
    }

    #[test]
    fn principal_scalars() {
        let r = ring(&[1, 0, 2]);
        let two = FractionalIdeal::principal(r.clone(), &r.scalar(&rat(2, 1))).unwrap();
        let three = FractionalIdeal::principal(r.clone(), &r.scalar(&rat(3, 1))).unwrap();
        let six = FractionalIdeal::principal(r.clone(), &r.scalar(&rat(6, 1))).unwrap();
        assert_eq!(ideal_product(&two, &three).unwrap(), six);
        assert_eq!(six.norm(), rat(36, 1));
    }

    #[test]
    fn unit_partner_is_i_f() {
        let r = ring(&[2, 3, 5]);
        let rep = balancing_partner(&FractionalIdeal::unit(r.clone())).unwrap();
        assert_eq!(rep.partner, FractionalIdeal::i_f(r.clone()));
        assert!(rep.guaranteed && rep.verdict.balanced() && rep.verdict.criteria_agree);
        let doubled = rep.partner.scale(&rat(2, 1)).unwrap();
        let v = check_balanced(&r, doubled.lattice(), &r.lattice()).unwrap();
        assert!(v.contained && !v.norm_ok && !v.index_ok && v.criteria_agree);
        assert_eq!(v.norm_m, rep.verdict.norm_m * rat(4, 1));
    }

    #[test]
    fn realize_regular_and_gaussian() {
        let r = ring(&[1, 3, 5]);
        let reg = RfModule::regular(r.clone(), Side::Column);
        assert_eq!(realize_fractional_ideal(&reg).unwrap().ideal, FractionalIdeal::unit(r.clone()));

        let a = Tensor2nn::from_i64(&[&[1, 0], &[0, 1]], &[&[0, -1], &[1, 0]]).unwrap();
        let p = psi(&a).unwrap();
        let n = realize_fractional_ideal(p.n()).unwrap();
        assert_eq!(n.ideal.norm(), rat(1, 1));
        let rp = realize_pair(&p).unwrap();
        let v = check_balanced(p.ring(), rp.m.ideal.lattice(), rp.n.ideal.lattice()).unwrap();
        assert!(v.balanced());
    }

    #[test]
    fn zero_module_is_not_characteristic() {
        let r = ring(&[2, 3, 5]);
        let zero = RfModule::from_actions_unchecked(r.clone(), Side::Column, vec![Matrix::zeros(2, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(!is_characteristic(&zero, 5, &mut rng).unwrap());
        assert!(is_characteristic(&RfModule::regular(r, Side::Row), 5, &mut rng).unwrap());
    }

    #[test]
    fn symmetric_self_balance() {
        let a = Tensor2nn::from_i64(&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]).unwrap();
        let p = psi(&a).unwrap();
        let (m, k) = realize_self_balanced(&p).unwrap();
        let v = self_balance_check(&m, &k).unwrap();
        assert!(v.self_balanced(), "{v:?}");
        let r = p.ring();
        let l = r.from_zeta_ints(&[BigInt::from(2), BigInt::from(1)]);
        let l_inv = r.inverse(&l).unwrap();
        let v2 = self_balance_check(&m.times(&l).unwrap(), &r.mul(&k, &r.mul(&l_inv, &l_inv))).unwrap();
        assert_eq!(v.contained, v2.contained);
        assert_eq!(v.norm_ok, v2.norm_ok);
        assert_eq!(v.quotient_ok, v2.quotient_ok);
    }

    #[test]
    fn split_algebra_pair_realizes() {
        // -2(3x + y)(x - y): every basis product is a zero divisor
        let a = Tensor2nn::from_i64(&[&[3, -1], &[0, -2]], &[&[1, 1], &[0, 2]]).unwrap();
        let p = psi(&a).unwrap();
        let r = realize_pair(&p).unwrap();
        assert!(check_balanced(p.ring(), r.m.ideal.lattice(), r.n.ideal.lattice()).unwrap().balanced());
    }
}
