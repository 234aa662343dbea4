//! Tensors in `Z^2 (x) Z^n (x) Z^n` and based balanced pairs of `R_f`-modules.
//!
//! Elements of `M` are row vectors acted on from the right; elements of `N`
//! are column vectors acted on from the left. Entry `(j, k)` of the tensor
//! pairs the `j`-th basis row of `M` with the `k`-th basis column of `N`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{det_binary_form, int_to_rat, IntMatrix, Matrix, RatMatrix};
use crate::formring::{make_ring, normalize_leading, BinaryForm, RingRf, ThetaVec};
use crate::groups::{gl2_act_tensor, GL2Elem, GPair};

/// A pair `(A1, A2)` of `n x n` integer matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor2nn {
    a1: IntMatrix,
    a2: IntMatrix,
}

impl fmt::Debug for Tensor2nn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor2nn(A1 = {:?}, A2 = {:?})", self.a1, self.a2)
    }
}

impl Tensor2nn {
    pub fn new(a1: IntMatrix, a2: IntMatrix) -> Result<Self> {
        a1.ensure_square()?;
        if a1.rows() != a2.rows() || a1.cols() != a2.cols() {
            return Err(Error::DimensionMismatch("A1 and A2 must have the same size".into()));
        }
        Ok(Tensor2nn { a1, a2 })
    }

    pub fn from_i64(a1: &[&[i64]], a2: &[&[i64]]) -> Result<Self> {
        Tensor2nn::new(IntMatrix::from_i64(a1), IntMatrix::from_i64(a2))
    }

    /// `(I, -Comp(F))` for the companion matrix of a monic `F(t, 1)`.
    pub fn companion(f: &BinaryForm) -> Result<Self> {
        if !f.leading().is_one() {
            return Err(Error::InvariantViolation("companion tensor needs a monic form".into()));
        }
        let n = f.degree();
        let comp = Matrix::from_fn(n, n, |r, c| {
            if c == n - 1 {
                -f.coeff(n - r).clone()
            } else if r == c + 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        Tensor2nn::new(IntMatrix::identity(n), comp.neg())
    }

    pub fn n(&self) -> usize {
        self.a1.rows()
    }

    pub fn a1(&self) -> &IntMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &IntMatrix {
        &self.a2
    }

    pub fn slot(&self, i: usize) -> &IntMatrix {
        if i == 0 { &self.a1 } else { &self.a2 }
    }

    pub fn det_coeffs(&self) -> Result<Vec<BigInt>> {
        det_binary_form(&self.a1, &self.a2)
    }

    /// `Det(A1 x + A2 y)`; fails when that form vanishes identically.
    pub fn det_form(&self) -> Result<BinaryForm> {
        BinaryForm::new(self.det_coeffs()?).map_err(|e| match e {
            Error::ZeroForm => Error::DegenerateTensor,
            other => other,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.a1.is_symmetric() && self.a2.is_symmetric()
    }
}

/// Which side a module's elements live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Row vectors, acted on from the right.
    Row,
    /// Column vectors, acted on from the left.
    Column,
}

/// A rank-n `Z`-module with integer matrices for the action of each `zeta_k`.
#[derive(Clone)]
pub struct RfModule {
    ring: Arc<RingRf>,
    side: Side,
    /// `actions[k - 1]` is the matrix of `zeta_k`.
    actions: Vec<IntMatrix>,
}

impl fmt::Debug for RfModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RfModule")
            .field("form", self.ring.form())
            .field("side", &self.side)
            .field("actions", &self.actions)
            .finish()
    }
}

impl PartialEq for RfModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.side == other.side && self.actions == other.actions
    }
}

impl RfModule {
    /// Validates sizes and the module axioms against the structure constants.
    pub fn new(ring: Arc<RingRf>, side: Side, actions: Vec<IntMatrix>) -> Result<Self> {
        let m = RfModule::from_actions_unchecked(ring, side, actions)?;
        m.check_axioms()?;
        Ok(m)
    }

    pub fn from_actions_unchecked(ring: Arc<RingRf>, side: Side, actions: Vec<IntMatrix>) -> Result<Self> {
        let n = ring.degree();
        if actions.len() != n - 1 || actions.iter().any(|z| z.rows() != n || z.cols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} action matrices of size {n}x{n}",
                n - 1
            )));
        }
        Ok(RfModule { ring, side, actions })
    }

    /// `R_f` acting on itself in the zeta basis.
    pub fn regular(ring: Arc<RingRf>, side: Side) -> Self {
        let n = ring.degree();
        let actions = (1..n)
            .map(|k| {
                let z = ring.regular_rep(k);
                match side {
                    Side::Column => z,
                    Side::Row => z.transpose(),
                }
            })
            .collect();
        RfModule { ring, side, actions }
    }

    pub fn ring(&self) -> &Arc<RingRf> {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.ring.degree()
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    /// Matrix of `zeta_k`; `k = 0` is the identity.
    pub fn action(&self, k: usize) -> IntMatrix {
        if k == 0 { IntMatrix::identity(self.rank()) } else { self.actions[k - 1].clone() }
    }

    /// Matrix of `sum_k a_k zeta_k`.
    pub fn action_of(&self, coeffs: &[BigInt]) -> IntMatrix {
        let n = self.rank();
        let mut acc = IntMatrix::zeros(n, n);
        for (k, a) in coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(&self.action(k).scale(a)).expect("square");
            }
        }
        acc
    }

    /// Action of `theta = zeta_1 / f_0`, over `Q`.
    pub fn theta_action(&self) -> RatMatrix {
        let f0 = self.ring.f0();
        self.action(1).to_rational().map(|q| q / &f0)
    }

    /// Same module with elements written on the opposite side.
    pub fn flip_side(&self) -> RfModule {
        RfModule {
            ring: self.ring.clone(),
            side: match self.side {
                Side::Row => Side::Column,
                Side::Column => Side::Row,
            },
            actions: self.actions.iter().map(Matrix::transpose).collect(),
        }
    }

    /// The module with every action replaced by `g Z g^-1`.
    pub fn conjugate(&self, g: &IntMatrix) -> Result<RfModule> {
        let g_inv = g.unimodular_inverse()?;
        let actions = self
            .actions
            .iter()
            .map(|z| g.mul(z)?.mul(&g_inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(RfModule { ring: self.ring.clone(), side: self.side, actions })
    }

    /// `Z_i Z_j = sum_k c^k_ij Z_k` with `Z_0 = Id`.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.rank();
        for i in 1..n {
            for j in i..n {
                let lhs = self.action(i).mul(&self.action(j))?;
                let rhs = self.action_of(&self.ring.struct_consts()[i][j]);
                if lhs != rhs {
                    return Err(Error::InvariantViolation(format!(
                        "module axiom fails for zeta_{i} * zeta_{j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Rational matrices of `zeta_1, ..., zeta_(n-1)` built from a tensor with `det A1 != 0`.
///
/// With `T = -A1^-1 A2` (columns) or `T = -A2 A1^-1` (rows), the action of
/// `zeta_k` is `c_0 T^k + ... + c_(k-1) T`, computed as `Z_k = T (Z_(k-1) + c_(k-1))`.
pub fn zeta_action_rational(a: &Tensor2nn, side: Side) -> Result<Vec<RatMatrix>> {
    let c = a.det_coeffs()?;
    if c[0].is_zero() {
        return Err(Error::LeadingCoefficientVanishes);
    }
    let n = a.n();
    let a1_inv = a.a1.to_rational().inverse()?;
    let a2 = a.a2.to_rational();
    let t = match side {
        Side::Column => a1_inv.mul(&a2)?.neg(),
        Side::Row => a2.mul(&a1_inv)?.neg(),
    };
    let mut out = Vec::with_capacity(n - 1);
    let mut z = RatMatrix::zeros(n, n);
    for k in 1..n {
        let shifted = z.add(&RatMatrix::identity(n).scale(&int_to_rat(&c[k - 1])))?;
        z = t.mul(&shifted)?;
        out.push(z.clone());
    }
    Ok(out)
}

/// Integer matrices of `zeta_1, ..., zeta_(n-1)`; see [`zeta_action_rational`].
pub fn zeta_action_matrices(a: &Tensor2nn, side: Side) -> Result<Vec<IntMatrix>> {
    zeta_action_rational(a, side)?
        .iter()
        .enumerate()
        .map(|(i, z)| {
            z.to_integer().map_err(|e| {
                Error::InvariantViolation(format!("zeta_{} action is not integral: {e}", i + 1))
            })
        })
        .collect()
}

/// Matrix of `zeta_k` for a single `k` in `1..n`.
pub fn zeta_action_matrix(a: &Tensor2nn, k: usize, side: Side) -> Result<IntMatrix> {
    let n = a.n();
    if k == 0 || k >= n {
        return Err(Error::OutOfRange { index: k, range: format!("1..={}", n - 1) });
    }
    Ok(zeta_action_matrices(a, side)?.swap_remove(k - 1))
}

/// A based balanced pair `(M, N)` with its pairing into `I_f`.
///
/// When the determinant form has `f_0 = 0`, the modules and the pairing are
/// expressed over `R_(g f)` for the shear `g` chosen by [`normalize_leading`];
/// `transport` records `g`, and the stored tensor is the original one.
#[derive(Clone)]
pub struct BalancedPair {
    ring: Arc<RingRf>,
    transport: GL2Elem,
    m: RfModule,
    n: RfModule,
    pairing: Vec<Vec<ThetaVec>>,
    tensor: Tensor2nn,
}

impl fmt::Debug for BalancedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BalancedPair")
            .field("form", self.ring.form())
            .field("transport", &self.transport)
            .field("tensor", &self.tensor)
            .finish_non_exhaustive()
    }
}

impl PartialEq for BalancedPair {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.transport == other.transport
            && self.m == other.m
            && self.n == other.n
            && self.pairing == other.pairing
    }
}

impl BalancedPair {
    /// Assemble a pair and check every invariant; the tensor is derived from the pairing.
    pub fn new(
        ring: Arc<RingRf>,
        transport: GL2Elem,
        m: RfModule,
        n: RfModule,
        pairing: Vec<Vec<ThetaVec>>,
    ) -> Result<Self> {
        let rank = ring.degree();
        if m.ring() != &ring || n.ring() != &ring {
            return Err(Error::ContextMismatch);
        }
        if m.side() != Side::Row || n.side() != Side::Column {
            return Err(Error::InvariantViolation("M must be a row module and N a column module".into()));
        }
        if pairing.len() != rank
            || pairing.iter().any(|row| row.len() != rank || row.iter().any(|x| x.coords().len() != rank))
        {
            return Err(Error::DimensionMismatch("pairing must be n x n elements of rank n".into()));
        }
        let transported = tensor_from_pairing(&ring, &pairing)?;
        let tensor = gl2_act_tensor(&transport.inverse(), &transported);
        let p = BalancedPair { ring, transport, m, n, pairing, tensor };
        p.check_invariants(&transported)?;
        Ok(p)
    }

    fn check_invariants(&self, transported: &Tensor2nn) -> Result<()> {
        self.m.check_axioms()?;
        self.n.check_axioms()?;
        if &transported.det_form()? != self.ring.form() {
            return Err(Error::InvariantViolation("Det(A) differs from the ring's form".into()));
        }
        let (i_f, _) = self.ring.make_if_jf();
        let rank = self.ring.degree();
        for row in &self.pairing {
            for x in row {
                if !i_f.contains(x) {
                    return Err(Error::InvariantViolation(format!("pairing value {x:?} not in I_f")));
                }
            }
        }
        // R_f-balanced and R_f-linear: (m zeta) o n = zeta (m o n) = m o (zeta n)
        for k in 1..rank {
            let zr = self.m.action(k);
            let zc = self.n.action(k);
            let zeta = self.ring.zeta(k);
            for j in 0..rank {
                for l in 0..rank {
                    let mut left = ThetaVec::zero(rank);
                    let mut right = ThetaVec::zero(rank);
                    for s in 0..rank {
                        if !zr[(j, s)].is_zero() {
                            left = left.add(&self.pairing[s][l].scale(&int_to_rat(&zr[(j, s)])));
                        }
                        if !zc[(s, l)].is_zero() {
                            right = right.add(&self.pairing[j][s].scale(&int_to_rat(&zc[(s, l)])));
                        }
                    }
                    let mid = self.ring.mul(zeta, &self.pairing[j][l]);
                    if left != mid || right != mid {
                        return Err(Error::InvariantViolation(format!(
                            "pairing is not R_f-bilinear at zeta_{k}, ({j}, {l})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<RingRf> {
        &self.ring
    }

    pub fn transport(&self) -> &GL2Elem {
        &self.transport
    }

    pub fn m(&self) -> &RfModule {
        &self.m
    }

    pub fn n(&self) -> &RfModule {
        &self.n
    }

    pub fn pairing(&self) -> &[Vec<ThetaVec>] {
        &self.pairing
    }

    pub fn tensor(&self) -> &Tensor2nn {
        &self.tensor
    }

    /// New bases `m' = g1 m` and `n' = g2 n` for `(g1, g2)` in `G`.
    pub fn change_basis(&self, h: &GPair) -> Result<BalancedPair> {
        let rank = self.ring.degree();
        let (g1, g2) = (h.g1(), h.g2());
        if g1.rows() != rank {
            return Err(Error::DimensionMismatch("basis change of the wrong size".into()));
        }
        let m = self.m.conjugate(g1)?;
        let g2t = g2.transpose();
        let n = self.n.conjugate(&g2t.unimodular_inverse()?)?;
        let pairing = (0..rank)
            .map(|j| {
                (0..rank)
                    .map(|k| {
                        let mut acc = ThetaVec::zero(rank);
                        for l in 0..rank {
                            for s in 0..rank {
                                let c = &g1[(j, l)] * &g2[(k, s)];
                                if !c.is_zero() {
                                    acc = acc.add(&self.pairing[l][s].scale(&int_to_rat(&c)));
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        BalancedPair::new(self.ring.clone(), self.transport.clone(), m, n, pairing)
    }
}

/// `A'_1[j,k] = zeta_check_(n-1)(x_jk)`, `A'_2[j,k] = -zeta_check_(n-2)(x_jk)`.
fn tensor_from_pairing(ring: &RingRf, pairing: &[Vec<ThetaVec>]) -> Result<Tensor2nn> {
    let n = ring.degree();
    let mut a1 = IntMatrix::zeros(n, n);
    let mut a2 = IntMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let (v1, v2) = ring.to_v(&pairing[j][k]);
            if !v1.is_integer() || !v2.is_integer() {
                return Err(Error::NonIntegral(format!(
                    "pairing ({j}, {k}) maps to ({v1}, {v2}); it does not land in I_f"
                )));
            }
            a1[(j, k)] = v1.to_integer();
            a2[(j, k)] = v2.to_integer();
        }
    }
    Tensor2nn::new(a1, a2)
}

/// Matrix whose row `i` is the functional `r -> zeta_check_(n-1)(zeta_i r)` in theta-coordinates.
pub fn pairing_functional_matrix(ring: &RingRf) -> RatMatrix {
    let n = ring.degree();
    Matrix::from_fn(n, n, |i, k| ring.zeta_dual_top(&ring.mul(ring.zeta(i), &ring.theta_pow(k))))
}

/// The based balanced pair of a tensor with nonzero determinant form.
pub fn psi(a: &Tensor2nn) -> Result<BalancedPair> {
    let f = a.det_form()?;
    let (g, f_norm) = normalize_leading(&f)?;
    let a_t = if g.is_identity() { a.clone() } else { gl2_act_tensor(&g, a) };
    let ring = Arc::new(make_ring(&f_norm)?);
    let n = ring.degree();

    let col = zeta_action_matrices(&a_t, Side::Column)?;
    let row = zeta_action_matrices(&a_t, Side::Row)?;
    let m = RfModule::from_actions_unchecked(ring.clone(), Side::Row, row)?;
    let nn = RfModule::from_actions_unchecked(ring.clone(), Side::Column, col)?;

    // x = m_j o n_k is the unique element with zeta_check_(n-1)(zeta_i x) = (Z_i^row A1)[j, k].
    let d_inv = pairing_functional_matrix(&ring).inverse()?;
    let products: Vec<IntMatrix> =
        (0..n).map(|i| m.action(i).mul(a_t.a1())).collect::<Result<_>>()?;
    let pairing = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let v: Vec<BigRational> = products.iter().map(|p| int_to_rat(&p[(j, k)])).collect();
                    Ok(ThetaVec(d_inv.mul_vec(&v)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let p = BalancedPair::new(ring, g, m, nn, pairing)?;
    if p.tensor() != a {
        return Err(Error::InvariantViolation("pairing does not reproduce the tensor".into()));
    }
    Ok(p)
}

/// The tensor of a based balanced pair.
pub fn phi(p: &BalancedPair) -> Result<Tensor2nn> {
    let transported = tensor_from_pairing(p.ring(), p.pairing())?;
    Ok(gl2_act_tensor(&p.transport().inverse(), &transported))
}

/// Symmetric tensors and the self-balanced module they define.
#[derive(Debug, Clone)]
pub struct SymmetricReport {
    pub is_symmetric: bool,
    pub self_pair: Option<BalancedPair>,
}

pub fn symmetric_ops(a: &Tensor2nn) -> Result<SymmetricReport> {
    if !a.is_symmetric() {
        return Ok(SymmetricReport { is_symmetric: false, self_pair: None });
    }
    let p = psi(a)?;
    let n = p.ring().degree();
    for k in 1..n {
        if p.m().action(k) != p.n().action(k).transpose() {
            return Err(Error::InvariantViolation(format!(
                "zeta_{k} acts on M and N by non-transposed matrices"
            )));
        }
    }
    for j in 0..n {
        for k in 0..j {
            if p.pairing()[j][k] != p.pairing()[k][j] {
                return Err(Error::InvariantViolation("pairing of a symmetric tensor is not symmetric".into()));
            }
        }
    }
    Ok(SymmetricReport { is_symmetric: true, self_pair: Some(p) })
}
