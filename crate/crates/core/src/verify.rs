//! Seeded property suites behind `binform verify`.
//!
//! Every trial draws from its own stream (`trial_rng(seed, suite, trial)`), so
//! trials run in parallel and still merge into a byte-identical report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::balance::{
    balancing_partner, check_balanced, pairing_determinant, random_fractional_ideal, random_unit_of_algebra,
    realize_pair, realize_self_balanced, self_balance_check,
};
use crate::codec;
use crate::error::{Error, Result};
use crate::exactlat::{charpoly, RatMatrix, RatPoly};
use crate::formring::{make_ring, BinaryForm, Lattice, RingRf, ThetaVec};
use crate::groups::{g_act_tensor, gl2_act_form, gl2_act_tensor, GPair};
use crate::sampling::{
    random_form, random_gl2, random_gpair, random_primitive_form, random_symmetric_tensor, random_tensor,
    random_theta_vec, random_unimodular, trial_rng,
};
use crate::tensorlink::{phi, psi, symmetric_ops, BalancedPair};
use crate::univcheck::{check_correspondence_backward, check_correspondence_forward, check_nodenom, Specialization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Roundtrip,
    Ring,
    Balance,
    Equivariance,
    Universal,
    Symmetric,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Roundtrip, Suite::Ring, Suite::Balance, Suite::Equivariance, Suite::Universal, Suite::Symmetric];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roundtrip => "roundtrip",
            Suite::Ring => "ring",
            Suite::Balance => "balance",
            Suite::Equivariance => "equivariance",
            Suite::Universal => "universal",
            Suite::Symmetric => "symmetric",
        }
    }

    /// Degrees cycled through when `--n` is not given.
    pub fn default_degrees(self) -> &'static [usize] {
        match self {
            Suite::Ring => &[2, 3, 4, 5, 6],
            Suite::Balance | Suite::Universal => &[2, 3, 4],
            _ => &[2, 3, 4, 5],
        }
    }

    pub fn default_bound(self) -> i64 {
        match self {
            Suite::Ring | Suite::Universal => 9,
            Suite::Balance => 4,
            _ => 5,
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.parse().map(|x| vec![x])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub count: usize,
    /// Fixed degree; `None` cycles through the suite's defaults.
    pub n: Option<usize>,
    /// Entry bound; `None` uses the suite's default.
    pub bound: Option<i64>,
    /// Fixed form for the `ring` and `balance` suites.
    pub form: Option<BinaryForm>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, count: 100, n: None, bound: None, form: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub trial: u64,
    pub check: String,
    pub detail: String,
    pub input: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    /// Passing evaluations per named check.
    pub passed: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "trials": self.trials,
            "passed": self.passed,
            "failures": self.failures.iter().map(|f| json!({
                "trial": f.trial,
                "check": f.check,
                "detail": f.detail,
                "input": f.input,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of a single trial.
#[derive(Default)]
struct Trial {
    input: Value,
    passed: Vec<&'static str>,
    failed: Vec<(&'static str, String)>,
}

impl Trial {
    fn new(input: Value) -> Self {
        Trial { input, ..Default::default() }
    }

    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed.push(name);
        } else {
            self.failed.push((name, detail()));
        }
    }

    /// Records `Ok(true)` as a pass; `Ok(false)` and errors as failures.
    fn check_result(&mut self, name: &'static str, r: Result<bool>) {
        match r {
            Ok(ok) => self.check(name, ok, || "identity does not hold".into()),
            Err(e) => self.failed.push((name, e.to_string())),
        }
    }

    fn attach(&mut self, key: &str, v: Value) {
        if let Value::Object(m) = &mut self.input {
            m.insert(key.into(), v);
        }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if let Some(n) = cfg.n {
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
    }
    if cfg.bound.is_some_and(|b| b < 1) {
        return Err(Error::BoundTooLarge("entry bound must be positive".into()));
    }
    let fixed_ring = match (&cfg.form, suite) {
        (Some(f), Suite::Ring | Suite::Balance) => {
            if f.leading().is_zero() {
                return Err(Error::LeadingCoefficientVanishes);
            }
            if suite == Suite::Balance && f.discriminant().is_zero() {
                return Err(Error::DegenerateForm);
            }
            Some(Arc::new(make_ring(f)?))
        }
        _ => None,
    };
    let degrees = suite.default_degrees();
    let bound = cfg.bound.unwrap_or_else(|| suite.default_bound());
    let trials: Vec<Trial> = (0..cfg.count as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, suite.name(), t);
            let n = cfg.n.unwrap_or(degrees[t as usize % degrees.len()]);
            match suite {
                Suite::Roundtrip => roundtrip_trial(n, bound, &mut rng),
                Suite::Ring => ring_trial(fixed_ring.clone(), n, bound, &mut rng),
                Suite::Balance => balance_trial(fixed_ring.clone(), n, bound, &mut rng),
                Suite::Equivariance => equivariance_trial(n, bound, &mut rng),
                Suite::Universal => universal_trial(n, bound, &mut rng),
                Suite::Symmetric => symmetric_trial(n, bound, &mut rng),
            }
        })
        .collect();
    let mut report = SuiteReport { suite, trials: trials.len(), passed: BTreeMap::new(), failures: Vec::new() };
    for (t, trial) in trials.into_iter().enumerate() {
        for name in trial.passed {
            *report.passed.entry(name.to_string()).or_default() += 1;
        }
        for (name, detail) in trial.failed {
            report.failures.push(Failure { trial: t as u64, check: name.into(), detail, input: trial.input.clone() });
        }
    }
    Ok(report)
}

/// `f_0 * charpoly(theta on N) = F(t, 1)`, with `f` the ring's form.
pub fn characteristic_ok(p: &BalancedPair) -> Result<bool> {
    let f = p.ring().form();
    let cp: RatPoly = charpoly(&p.n().theta_action())?;
    let f0 = BigRational::from_integer(f.leading().clone());
    let lhs = cp.scale(&f0);
    let rhs = RatPoly::new(f.coeffs().iter().rev().map(|c| BigRational::from_integer(c.clone())).collect());
    Ok(lhs == rhs)
}

/// `psi(A)` and `p` agree in every action matrix and pairing value.
fn same_pair(a: &BalancedPair, b: &BalancedPair) -> bool {
    a.m().actions() == b.m().actions() && a.n().actions() == b.n().actions() && a.pairing() == b.pairing()
}

fn roundtrip_trial(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Trial {
    let a = random_tensor(n, bound, rng);
    let mut t = Trial::new(json!({ "tensor": codec::tensor(&a) }));
    let f = a.det_form().expect("nonzero by construction");
    t.check_result("det_endpoints", (|| {
        Ok(&a.a1().det()? == f.coeff(0) && &a.a2().det()? == f.coeff(n))
    })());
    let p = match psi(&a) {
        Ok(p) => p,
        Err(e) => {
            t.failed.push(("psi", e.to_string()));
            return t;
        }
    };
    t.check_result("phi_psi", phi(&p).map(|b| b == a));
    t.check_result("characteristic", characteristic_ok(&p));
    let h = random_gpair(n, 6, rng);
    t.attach("g1", codec::int_matrix(h.g1()));
    t.attach("g2", codec::int_matrix(h.g2()));
    t.check_result("psi_phi", (|| {
        let q = p.change_basis(&h)?;
        Ok(same_pair(&psi(&phi(&q)?)?, &q))
    })());
    t
}

fn ring_trial(fixed: Option<Arc<RingRf>>, n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Trial {
    let ring = match fixed {
        Some(r) => r,
        None => Arc::new(make_ring(&random_form(n, bound, rng)).expect("f0 != 0 by construction")),
    };
    let n = ring.degree();
    let mut t = Trial::new(json!({ "form": codec::form(ring.form()) }));
    t.check_result("axioms", ring.check_axioms().map(|_| true));
    let r = random_theta_vec(n, 9, 4, rng);
    let k = rng.random_range(1..n);
    t.attach("r", codec::theta_vec(&r));
    t.attach("k", json!(k));
    t.check_result("getcoeff", ring.getcoeff_identity(&r, k));
    t.check("thet", ring.zeta_dual_top(&ring.mul(&ring.theta(), &r)) == ring.zeta_dual_second(&r), || {
        "top functional of theta*r differs from second functional of r".into()
    });
    let (i_f, j_f) = ring.make_if_jf();
    t.check("index_j_i", j_f.index_of(&i_f) == BigRational::from_integer(ring.form().leading().abs()), || {
        format!("[J_f:I_f] = {}", j_f.index_of(&i_f))
    });
    let rj = random_combination(&j_f, 6, rng);
    t.check("in_i", i_f.contains(&rj) == ring.zeta_dual_second(&rj).is_integer(), || {
        format!("membership of {:?} disagrees with the second functional", rj.coords())
    });
    let ri = random_combination(&i_f, 3, rng);
    let vanishes = (0..n).all(|k| {
        let (a, b) = ring.to_v(&ring.mul(ring.zeta(k), &ri));
        a.is_zero() && b.is_zero()
    });
    t.check("injective", !vanishes || ri.is_zero(), || "nonzero element maps to zero in V".into());
    t
}

fn random_combination(l: &Lattice, bound: i64, rng: &mut ChaCha8Rng) -> ThetaVec {
    let basis = l.basis_vectors();
    let n = basis.len();
    basis.iter().fold(ThetaVec::zero(n), |acc, b| {
        acc.add(&b.scale(&BigRational::from_integer(BigInt::from(rng.random_range(-bound..=bound)))))
    })
}

/// A lattice different from `l`: `l` transformed by `D U` with `U` unimodular and
/// `D` one of `diag(p, 1/p, 1, ...)`, `diag(p, 1, ...)`, `diag(1/p, 1, ...)`.
pub fn perturb_lattice(l: &Lattice, rng: &mut ChaCha8Rng) -> Result<Lattice> {
    let n = l.rank();
    let p = BigRational::from_integer(BigInt::from(rng.random_range(2i64..=3)));
    let mut d = RatMatrix::identity(n);
    match rng.random_range(0..3) {
        0 if n >= 2 => {
            d[(0, 0)] = p.clone();
            d[(1, 1)] = p.recip();
        }
        1 => d[(0, 0)] = p,
        _ => d[(0, 0)] = p.recip(),
    }
    let u = random_unimodular(n, 2 * n, rng).to_rational();
    Lattice::from_basis_matrix(&l.basis().mul(&u)?.mul(&d)?)
}

fn balance_trial(fixed: Option<Arc<RingRf>>, n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Trial {
    let ring = match fixed {
        Some(r) => r,
        None => Arc::new(make_ring(&random_primitive_form(n, bound, rng)).expect("f0 != 0 by construction")),
    };
    let nn = random_fractional_ideal(&ring, 3, rng);
    let mut t = Trial::new(json!({
        "form": codec::form(ring.form()),
        "N": codec::lattice(nn.lattice()),
    }));
    let report = match balancing_partner(&nn) {
        Ok(r) => r,
        Err(e) => {
            t.failed.push(("partner", e.to_string()));
            return t;
        }
    };
    let m = report.partner.lattice().clone();
    let v = &report.verdict;
    t.check("partner", v.balanced(), || format!("verdict {}", codec::to_canonical(&codec::verdict(v))));
    t.check("criteria_agree", v.criteria_agree, || "index and norm verdicts differ".into());
    let two = BigRational::from_integer(BigInt::from(2));
    t.check_result("broken_pair", (|| {
        let b = check_balanced(&ring, &m.scale(&two)?, nn.lattice())?;
        Ok(b.criteria_agree && !b.balanced())
    })());
    for _ in 0..3 {
        let r = (|| {
            let mp = perturb_lattice(&m, rng)?;
            Ok(!check_balanced(&ring, &mp, nn.lattice())?.balanced())
        })();
        t.check_result("uniqueness", r);
    }
    t.check_result("scaling", (|| {
        let lambda = random_unit_of_algebra(&ring, 3, rng);
        let lm = report.partner.times(&lambda)?;
        let ln = nn.times(&ring.inverse(&lambda)?)?;
        Ok(check_balanced(&ring, lm.lattice(), ln.lattice())?.balanced() == v.balanced())
    })());
    t.check_result("norm_lemma", (|| {
        let (_, j_f) = ring.make_if_jf();
        let expected = report.partner.norm() * nn.norm() / ring.ideal_norm(&j_f)?;
        Ok(pairing_determinant(&ring, &m, nn.lattice()).abs() == expected)
    })());
    let a = random_tensor(n, 3, rng);
    if !a.det_form().expect("nonzero").discriminant().is_zero() {
        t.attach("tensor", codec::tensor(&a));
        t.check_result("psi_balanced", (|| {
            let p = psi(&a)?;
            let rp = realize_pair(&p)?;
            Ok(check_balanced(p.ring(), rp.m.ideal.lattice(), rp.n.ideal.lattice())?.balanced())
        })());
    }
    t
}

fn equivariance_trial(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Trial {
    let a = random_tensor(n, bound, rng);
    let g = random_gl2(6, rng);
    let g2 = random_gl2(6, rng);
    let h = random_gpair(n, 6, rng);
    let mut t = Trial::new(json!({
        "tensor": codec::tensor(&a),
        "g": codec::gl2(&g),
        "h": codec::gl2(&g2),
        "g1": codec::int_matrix(h.g1()),
        "g2": codec::int_matrix(h.g2()),
    }));
    let f = a.det_form().expect("nonzero by construction");
    t.check_result("gl2_det", gl2_act_tensor(&g, &a).det_form().map(|d| d == gl2_act_form(&g, &f)));
    t.check("gl2_form_action", gl2_act_form(&g, &gl2_act_form(&g2, &f)) == gl2_act_form(&g.mul(&g2), &f), || {
        "form action is not a left action".into()
    });
    t.check(
        "gl2_tensor_action",
        gl2_act_tensor(&g, &gl2_act_tensor(&g2, &a)) == gl2_act_tensor(&g.mul(&g2), &a),
        || "tensor action is not a left action".into(),
    );
    t.check_result("g_invariance", (|| Ok(g_act_tensor(&h, &a)?.det_form()? == f))());
    let h2 = random_gpair(n, 6, rng);
    t.check_result("g_action", (|| Ok(g_act_tensor(&h, &g_act_tensor(&h2, &a)?)? == g_act_tensor(&h.mul(&h2), &a)?))());
    t.check_result("psi_covariance", (|| {
        let p = psi(&a)?;
        Ok(same_pair(&psi(&g_act_tensor(&h, &a)?)?, &p.change_basis(&h)?))
    })());
    t
}

fn universal_trial(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Trial {
    let s = Specialization::random(n, bound, rng);
    let mut t = Trial::new(specialization_json(&s));
    let col = rng.random_range(0..n);
    let (mc, vc) = (rng.random_range(0..n), rng.random_range(0..n));
    t.attach("col", json!(col));
    t.attach("minor_col", json!(mc));
    t.attach("value_col", json!(vc));
    t.check_result("forward", check_correspondence_forward(&s, col));
    t.check_result("backward", check_correspondence_backward(&s, mc, vc));
    // resample u until C1 is invertible
    let mut u = s.u.clone();
    let r = loop {
        match check_nodenom(&Specialization::new(u.clone()), n - 1) {
            Err(Error::Singular) => u = Specialization::random(n, bound, rng).u,
            other => break other,
        }
    };
    if u != s.u {
        t.attach("nodenom_u", codec::tensor(&u));
    }
    t.check_result("nodenom", r);
    t
}

fn specialization_json(s: &Specialization) -> Value {
    let ints = |v: &[BigInt]| v.iter().map(codec::int).collect::<Vec<_>>();
    json!({
        "u": codec::tensor(&s.u),
        "x": s.x.as_ref().map(|x| ints(x)),
        "y": s.y.as_ref().map(|y| ints(y)),
    })
}

fn symmetric_trial(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Trial {
    let a = random_symmetric_tensor(n, bound, rng);
    let mut t = Trial::new(json!({ "tensor": codec::tensor(&a) }));
    let p = match symmetric_ops(&a) {
        Ok(r) if r.is_symmetric => r.self_pair.expect("symmetric input"),
        Ok(_) => {
            t.failed.push(("mirror", "symmetric tensor reported as non-symmetric".into()));
            return t;
        }
        Err(e) => {
            t.failed.push(("mirror", e.to_string()));
            return t;
        }
    };
    t.passed.push("mirror");
    let g = random_unimodular(n, 2 * n, rng);
    t.attach("g", codec::int_matrix(&g));
    t.check_result("same_module_phi", (|| {
        let q = p.change_basis(&GPair::new(g.clone(), g.clone())?)?;
        let b = phi(&q)?;
        Ok(b.is_symmetric() && b == crate::groups::gln_act_symmetric(&g, &a)?)
    })());
    if !p.ring().form().discriminant().is_zero() {
        t.check_result("self_balanced", (|| {
            let (m, k) = realize_self_balanced(&p)?;
            Ok(self_balance_check(&m, &k)?.self_balanced())
        })());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(count: usize, seed: u64) -> VerifyConfig {
        VerifyConfig { seed, count, ..Default::default() }
    }

    #[test]
    fn every_suite_passes_briefly() {
        for s in Suite::ALL {
            let r = run(s, &cfg(12, 5)).unwrap();
            assert!(r.ok(), "{s}: {:?}", r.failures);
            assert!(!r.passed.is_empty());
        }
    }

    #[test]
    fn deterministic_reports() {
        let a = run(Suite::Roundtrip, &cfg(8, 42)).unwrap().to_json();
        let b = run(Suite::Roundtrip, &cfg(8, 42)).unwrap().to_json();
        assert_eq!(codec::to_canonical(&a), codec::to_canonical(&b));
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 6);
        assert_eq!("ring".parse::<Suite>().unwrap(), Suite::Ring);
        assert!("rings".parse::<Suite>().is_err());
    }

    #[test]
    fn fixed_form_balance() {
        let f = BinaryForm::from_i64(&[2, 3, 5]).unwrap();
        let r = run(Suite::Balance, &VerifyConfig { form: Some(f), ..cfg(6, 1) }).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        let degenerate = BinaryForm::from_i64(&[1, 2, 1]).unwrap();
        assert_eq!(
            run(Suite::Balance, &VerifyConfig { form: Some(degenerate), ..cfg(1, 1) }).unwrap_err(),
            Error::DegenerateForm
        );
    }
}
