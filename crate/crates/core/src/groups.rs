//! Group actions on forms and tensors, isomorphism search for modules, and
//! bounded orbit censuses.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlat::{charpoly, det_binary_form, int_kernel, IntMatrix, Matrix};
use crate::formring::BinaryForm;
use crate::tensorlink::{RfModule, Tensor2nn};

/// `[[a, b], [c, d]]` with determinant `+-1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GL2Elem {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl fmt::Debug for GL2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GL2[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

impl GL2Elem {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(GL2Elem { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        GL2Elem::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        GL2Elem { a: BigInt::one(), b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() }
    }

    /// `(x, y) -> (x, y + t x)`, i.e. `F(x, y) -> F(x, t x + y)`.
    pub fn shear(t: i64) -> Self {
        GL2Elem { a: BigInt::one(), b: BigInt::from(t), c: BigInt::zero(), d: BigInt::one() }
    }

    pub fn swap() -> Self {
        GL2Elem { a: BigInt::zero(), b: BigInt::one(), c: BigInt::one(), d: BigInt::zero() }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == GL2Elem::identity()
    }

    pub fn mul(&self, o: &GL2Elem) -> GL2Elem {
        GL2Elem {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> GL2Elem {
        let det = self.det();
        GL2Elem {
            a: &det * &self.d,
            b: -(&det * &self.b),
            c: -(&det * &self.c),
            d: &det * &self.a,
        }
    }
}

/// An element `(g1, g2)` of `G = {det g1 * det g2 = 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GPair {
    g1: IntMatrix,
    g2: IntMatrix,
}

impl GPair {
    pub fn new(g1: IntMatrix, g2: IntMatrix) -> Result<Self> {
        g1.ensure_square()?;
        g2.ensure_square()?;
        if g1.rows() != g2.rows() {
            return Err(Error::DimensionMismatch("g1 and g2 differ in size".into()));
        }
        let d = g1.det()? * g2.det()?;
        if !d.is_one() {
            return Err(Error::InvariantViolation(format!("det g1 * det g2 = {d}, expected 1")));
        }
        Ok(GPair { g1, g2 })
    }

    pub fn identity(n: usize) -> Self {
        GPair { g1: IntMatrix::identity(n), g2: IntMatrix::identity(n) }
    }

    pub fn g1(&self) -> &IntMatrix {
        &self.g1
    }

    pub fn g2(&self) -> &IntMatrix {
        &self.g2
    }

    pub fn mul(&self, o: &GPair) -> GPair {
        GPair { g1: self.g1.mul(&o.g1).expect("same size"), g2: self.g2.mul(&o.g2).expect("same size") }
    }
}

/// Coefficients of a binary form of degree `m` indexed by the power of `y`.
fn form_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `F(a x + c y, b x + d y)` on a raw coefficient vector.
pub(crate) fn act_on_coeffs(g: &GL2Elem, f: &[BigInt]) -> Vec<BigInt> {
    let n = f.len() - 1;
    let l1 = [g.a.clone(), g.c.clone()];
    let l2 = [g.b.clone(), g.d.clone()];
    let mut p1 = vec![vec![BigInt::one()]];
    let mut p2 = vec![vec![BigInt::one()]];
    for k in 1..=n {
        p1.push(form_mul(&p1[k - 1], &l1));
        p2.push(form_mul(&p2[k - 1], &l2));
    }
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (k, c) in form_mul(&p1[n - i], &p2[i]).iter().enumerate() {
            out[k] += fi * c;
        }
    }
    out
}

pub fn gl2_act_form(g: &GL2Elem, f: &BinaryForm) -> BinaryForm {
    BinaryForm::new(act_on_coeffs(g, f.coeffs())).expect("GL2 preserves nonzero forms")
}

/// `(a A1 + b A2, c A1 + d A2)`; the determinant form transforms by [`gl2_act_form`].
pub fn gl2_act_tensor(g: &GL2Elem, a: &Tensor2nn) -> Tensor2nn {
    let lin = |x: &BigInt, y: &BigInt| a.a1().scale(x).add(&a.a2().scale(y)).expect("same size");
    let out = Tensor2nn::new(lin(&g.a, &g.b), lin(&g.c, &g.d)).expect("same size");
    debug_assert_eq!(
        out.det_coeffs().ok(),
        a.det_coeffs().ok().map(|c| act_on_coeffs(g, &c)),
        "determinant equivariance"
    );
    out
}

/// `A_i -> g1 A_i g2^T`.
pub fn g_act_tensor(h: &GPair, a: &Tensor2nn) -> Result<Tensor2nn> {
    if h.g1.rows() != a.n() {
        return Err(Error::DimensionMismatch("group element and tensor differ in size".into()));
    }
    let g2t = h.g2.transpose();
    let act = |m: &IntMatrix| h.g1.mul(m)?.mul(&g2t);
    Tensor2nn::new(act(a.a1())?, act(a.a2())?)
}

/// `(g A1 g^T, g A2 g^T)` on a symmetric tensor.
pub fn gln_act_symmetric(g: &IntMatrix, a: &Tensor2nn) -> Result<Tensor2nn> {
    if !g.is_unimodular() {
        return Err(Error::NotUnimodular(g.det().map(|d| d.to_string()).unwrap_or_default()));
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    g_act_tensor(&GPair { g1: g.clone(), g2: g.clone() }, a)
}

/// Outcome of a bounded isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoSearch {
    /// `g Z_k(M) g^-1 = Z_k(M')` for all `k`.
    Found(IntMatrix),
    /// No isomorphism exists (empty intertwiner space or a charpoly obstruction).
    NotIsomorphic,
    /// Budget exhausted.
    Unknown,
}

impl IsoSearch {
    pub fn found(&self) -> Option<&IntMatrix> {
        match self {
            IsoSearch::Found(g) => Some(g),
            _ => None,
        }
    }
}

/// Search for a unimodular intertwiner `g` with `g Z_k(M) g^-1 = Z_k(M')`.
///
/// Coefficient vectors over the LLL-reduced intertwiner basis are tried in
/// order of increasing sup-norm up to `budget`.
pub fn modules_isomorphic(m: &RfModule, m2: &RfModule, budget: u32) -> Result<IsoSearch> {
    if m.ring() != m2.ring() || m.side() != m2.side() {
        return Err(Error::ContextMismatch);
    }
    let n = m.rank();
    for k in 1..n {
        if charpoly(&m.action(k))? != charpoly(&m2.action(k))? {
            return Ok(IsoSearch::NotIsomorphic);
        }
    }
    // Unknown X (row-major), equations X Z_k - Z'_k X = 0.
    let vars = n * n;
    let mut eqs: Vec<Vec<BigInt>> = Vec::new();
    for k in 1..n {
        let z = m.action(k);
        let z2 = m2.action(k);
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![BigInt::zero(); vars];
                for l in 0..n {
                    row[r * n + l] += &z[(l, c)];
                    row[l * n + c] -= &z2[(r, l)];
                }
                eqs.push(row);
            }
        }
    }
    let system = Matrix::from_rows(&eqs)?;
    let kernel = int_kernel(&system);
    let d = kernel.cols();
    if d == 0 {
        return Ok(IsoSearch::NotIsomorphic);
    }
    let basis: Vec<IntMatrix> = (0..d)
        .map(|c| Matrix::new(n, n, kernel.column(c)).expect("n*n entries"))
        .collect();
    let check = |x: &IntMatrix| -> bool {
        if !x.is_unimodular() {
            return false;
        }
        let Ok(inv) = x.unimodular_inverse() else { return false };
        (1..n).all(|k| {
            x.mul(&m.action(k)).and_then(|p| p.mul(&inv)).map(|p| p == m2.action(k)).unwrap_or(false)
        })
    };
    let b = budget as i64;
    for shell in 1..=b {
        let mut coeffs = vec![-shell; d];
        loop {
            if coeffs.iter().any(|c| c.abs() == shell) {
                let mut x = IntMatrix::zeros(n, n);
                for (c, bm) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        x = x.add(&bm.scale(&BigInt::from(*c)))?;
                    }
                }
                if check(&x) {
                    return Ok(IsoSearch::Found(x));
                }
            }
            // odometer over [-shell, shell]^d
            let mut i = 0;
            while i < d && coeffs[i] == shell {
                coeffs[i] = -shell;
                i += 1;
            }
            if i == d {
                break;
            }
            coeffs[i] += 1;
        }
    }
    Ok(IsoSearch::Unknown)
}

/// Default cap on census sizes, overridable through `BINFORM_MAX_ENUM`.
pub const DEFAULT_MAX_ENUM: u64 = 20_000_000;

pub fn max_enum() -> u64 {
    std::env::var("BINFORM_MAX_ENUM").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ENUM)
}

/// One union-find class of a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub representative: Tensor2nn,
    pub size_in_box: usize,
}

/// Census of tensors in a box with a given determinant form.
///
/// Classes are merged only along move words of length at most `move_budget`,
/// so two reported classes may still be equivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub form: BinaryForm,
    pub entry_bound: u32,
    pub move_budget: u32,
    pub members: Vec<Tensor2nn>,
    pub classes: Vec<OrbitClass>,
    pub budget_limited: bool,
}

/// Flat small-integer state: `A1` then `A2`, row-major.
type State = Vec<i64>;

#[derive(Clone, Copy, Debug)]
enum Move {
    /// `row i += s * row j` in both slots (left transvection).
    Row(usize, usize, i64),
    /// `col i += s * col j` (right transvection by `g2^T`).
    Col(usize, usize, i64),
    /// Negate row `i` and column `j`.
    Sign(usize, usize),
}

fn moves(n: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for s in [1, -1] {
                    out.push(Move::Row(i, j, s));
                    out.push(Move::Col(i, j, s));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.push(Move::Sign(i, j));
        }
    }
    out
}

fn apply_move(n: usize, s: &State, mv: Move) -> State {
    let mut t = s.clone();
    for slot in 0..2 {
        let base = slot * n * n;
        match mv {
            Move::Row(i, j, k) => {
                for c in 0..n {
                    t[base + i * n + c] += k * s[base + j * n + c];
                }
            }
            Move::Col(i, j, k) => {
                for r in 0..n {
                    t[base + r * n + i] += k * s[base + r * n + j];
                }
            }
            Move::Sign(i, j) => {
                for c in 0..n {
                    t[base + i * n + c] = -t[base + i * n + c];
                }
                for r in 0..n {
                    t[base + r * n + j] = -t[base + r * n + j];
                }
            }
        }
    }
    t
}

fn to_state(a: &Tensor2nn) -> State {
    a.a1().entries().iter().chain(a.a2().entries()).map(|x| x.to_i64().expect("small entries")).collect()
}

fn box_matrix(n: usize, bound: i64, mut index: u64) -> IntMatrix {
    let width = (2 * bound + 1) as u64;
    let entries = (0..n * n)
        .map(|_| {
            let v = (index % width) as i64 - bound;
            index /= width;
            BigInt::from(v)
        })
        .collect();
    Matrix::new(n, n, entries).expect("n*n entries")
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Enumerate all `A` with entries in `[-entry_bound, entry_bound]` and `Det(A) = f`,
/// then merge them along G-move words of length at most `move_budget`.
pub fn enumerate_orbits(f: &BinaryForm, entry_bound: u32, move_budget: u32) -> Result<OrbitReport> {
    let n = f.degree();
    let cap = max_enum();
    let width = 2 * entry_bound as u64 + 1;
    let box_size = u32::try_from(n * n)
        .ok()
        .and_then(|e| width.checked_pow(e))
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::BoundTooLarge(format!("{width}^{} matrices exceeds cap {cap}", n * n)))?;
    let bound = entry_bound as i64;

    // Bucket by determinant: A1 needs det f_0, A2 needs det f_n.
    let (f0, fn_) = (f.coeff(0).clone(), f.coeff(n).clone());
    let tagged: Vec<(IntMatrix, bool, bool)> = (0..box_size)
        .into_par_iter()
        .filter_map(|i| {
            let m = box_matrix(n, bound, i);
            let d = m.det().ok()?;
            let (first, last) = (d == f0, d == fn_);
            (first || last).then_some((m, first, last))
        })
        .collect();
    let firsts: Vec<&IntMatrix> = tagged.iter().filter(|t| t.1).map(|t| &t.0).collect();
    let lasts: Vec<&IntMatrix> = tagged.iter().filter(|t| t.2).map(|t| &t.0).collect();
    let pairs = firsts.len() as u64 * lasts.len() as u64;
    if pairs > cap {
        return Err(Error::BoundTooLarge(format!("{pairs} candidate pairs exceeds cap {cap}")));
    }
    let members: Vec<Tensor2nn> = (0..pairs)
        .into_par_iter()
        .filter_map(|idx| {
            let a1 = firsts[(idx / lasts.len() as u64) as usize];
            let a2 = lasts[(idx % lasts.len() as u64) as usize];
            let coeffs = det_binary_form(a1, a2).ok()?;
            (coeffs == f.coeffs()).then(|| Tensor2nn::new(a1.clone(), a2.clone()).expect("square"))
        })
        .collect();

    let states: Vec<State> = members.iter().map(to_state).collect();
    let index: HashMap<&State, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let gens = moves(n);
    let reach: Vec<Vec<usize>> = states
        .par_iter()
        .map(|start| {
            let mut seen: HashSet<State> = HashSet::from([start.clone()]);
            let mut queue = VecDeque::from([(start.clone(), 0u32)]);
            let mut hits = Vec::new();
            while let Some((s, depth)) = queue.pop_front() {
                if let Some(&i) = index.get(&s) {
                    hits.push(i);
                }
                if depth == move_budget || seen.len() as u64 > cap {
                    continue;
                }
                for &mv in &gens {
                    let t = apply_move(n, &s, mv);
                    if seen.insert(t.clone()) {
                        queue.push_back((t, depth + 1));
                    }
                }
            }
            hits
        })
        .collect();

    let mut parent: Vec<usize> = (0..members.len()).collect();
    for (i, hits) in reach.iter().enumerate() {
        for &j in hits {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..members.len() {
        let r = find(&mut parent, i);
        if !sizes.contains_key(&r) {
            order.push(r);
        }
        *sizes.entry(r).or_default() += 1;
    }
    let classes = order
        .into_iter()
        .map(|r| OrbitClass { representative: members[r].clone(), size_in_box: sizes[&r] })
        .collect();
    Ok(OrbitReport {
        form: f.clone(),
        entry_bound,
        move_budget,
        members,
        classes,
        budget_limited: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorlink::{psi, Side};

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(c).unwrap()
    }

    #[test]
    fn form_action_examples() {
        assert_eq!(gl2_act_form(&GL2Elem::swap(), &form(&[2, 3, 5])), form(&[5, 3, 2]));
        assert_eq!(gl2_act_form(&GL2Elem::identity(), &form(&[2, 3, 5])), form(&[2, 3, 5]));
        assert_eq!(gl2_act_form(&GL2Elem::shear(1), &form(&[0, 1, 0])), form(&[1, 1, 0]));
        // F(x, y) = x^3 under (x, y) -> (x + y, y): (x + y)^3
        let g = GL2Elem::from_i64(1, 0, 1, 1).unwrap();
        assert_eq!(gl2_act_form(&g, &form(&[1, 0, 0, 0])), form(&[1, 3, 3, 1]));
    }

    #[test]
    fn non_unimodular_rejected() {
        assert!(GL2Elem::from_i64(2, 0, 0, 1).is_err());
        assert_eq!(GL2Elem::from_i64(2, 1, 1, 1).unwrap().inverse(), GL2Elem::from_i64(1, -1, -1, 2).unwrap());
    }

    #[test]
    fn swap_on_tensor() {
        let a = Tensor2nn::from_i64(&[&[2, 0], &[0, 1]], &[&[1, 1], &[-1, 2]]).unwrap();
        let b = gl2_act_tensor(&GL2Elem::swap(), &a);
        assert_eq!(b.a1(), a.a2());
        assert_eq!(b.a2(), a.a1());
        assert_eq!(b.det_form().unwrap(), form(&[3, 5, 2]));
    }

    #[test]
    fn g_action_keeps_det() {
        let a = Tensor2nn::from_i64(&[&[2, 0], &[0, 1]], &[&[1, 1], &[-1, 2]]).unwrap();
        let u = IntMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        let h = GPair::new(u.clone(), u.unimodular_inverse().unwrap().transpose()).unwrap();
        assert_eq!(g_act_tensor(&h, &a).unwrap().det_form().unwrap(), a.det_form().unwrap());
        assert!(GPair::new(IntMatrix::from_i64(&[&[-1, 0], &[0, 1]]), IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn symmetric_action() {
        let a = Tensor2nn::from_i64(&[&[1, 2], &[2, 3]], &[&[0, 1], &[1, 5]]).unwrap();
        let p = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let b = gln_act_symmetric(&p, &a).unwrap();
        assert_eq!(b.a1(), &IntMatrix::from_i64(&[&[3, 2], &[2, 1]]));
        assert!(b.is_symmetric());
        assert!(gln_act_symmetric(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]]), &a).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let a = Tensor2nn::from_i64(&[&[2, 1, 0], &[0, 1, 1], &[1, 0, 1]], &[&[1, 0, 2], &[0, 3, 1], &[1, 1, 0]])
            .unwrap();
        let p = psi(&a).unwrap();
        let m = p.n().clone();
        assert!(modules_isomorphic(&m, &m, 1).unwrap().found().is_some());
        let g = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, -1], &[0, 0, 1]]);
        let m2 = m.conjugate(&g).unwrap();
        let found = modules_isomorphic(&m, &m2, 2).unwrap();
        let h = found.found().expect("conjugate is isomorphic");
        let hi = h.unimodular_inverse().unwrap();
        for k in 1..3 {
            assert_eq!(h.mul(&m.action(k)).unwrap().mul(&hi).unwrap(), m2.action(k));
        }
        let zero = RfModule::from_actions_unchecked(
            m.ring().clone(),
            Side::Column,
            vec![IntMatrix::zeros(3, 3), IntMatrix::zeros(3, 3)],
        )
        .unwrap();
        assert_eq!(modules_isomorphic(&m, &zero, 2).unwrap(), IsoSearch::NotIsomorphic);
    }

    #[test]
    fn gaussian_census() {
        let r = enumerate_orbits(&form(&[1, 0, 1]), 1, 4).unwrap();
        let gauss = Tensor2nn::from_i64(&[&[1, 0], &[0, 1]], &[&[0, -1], &[1, 0]]).unwrap();
        assert!(r.members.contains(&gauss));
        assert_eq!(r.classes.len(), 1);
        assert!(r.budget_limited);
    }

    #[test]
    fn empty_census() {
        // det A1 = 7 is impossible with entries in [-1, 1]
        let r = enumerate_orbits(&form(&[7, 0, 1]), 1, 2).unwrap();
        assert!(r.members.is_empty() && r.classes.is_empty());
    }
}
