//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 3 includes a literal comparison against a stated table of
//! `zeta_check_(n-1)(zeta_i theta^k)` values that is only correct for
//! `i + k <= n - 1`; that sub-check is reported as FAIL, and the run asserts that
//! every mismatch lies outside that range.

use std::sync::Arc;
use std::time::Instant;

use binform::balance::{balancing_partner, check_balanced, random_fractional_ideal};
use binform::formring::{make_ring, BinaryForm, RingRf};
use binform::groups::{enumerate_orbits, g_act_tensor, gl2_act_form, gl2_act_tensor, GPair};
use binform::sampling::{
    random_form, random_gl2, random_gpair, random_primitive_form, random_symmetric_tensor, random_tensor,
    random_theta_vec, random_unimodular, trial_rng,
};
use binform::tensorlink::{phi, psi, symmetric_ops};
use binform::univcheck::{check_correspondence_backward, check_correspondence_forward, check_nodenom, Specialization};
use binform::verify::{characteristic_ok, perturb_lattice};
use binform::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Number of trials in `0..count` for which `trial` is false.
fn failures(label: &str, count: u64, trial: impl Fn(&mut rand_chacha::ChaCha8Rng) -> bool + Sync) -> usize {
    (0..count).into_par_iter().filter(|&t| !trial(&mut trial_rng(SEED, label, t))).count()
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for n in 2..=5 {
        bad += failures(&format!("roundtrip{n}"), 1000, |rng| {
            let a = random_tensor(n, 5, rng);
            psi(&a).and_then(|p| phi(&p)).is_ok_and(|b| b == a)
        });
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(bad == 0 && secs < 60.0, format!("4000 tensors, {bad} failures, {secs:.1}s"))
}

fn ring_axioms() -> Outcome {
    let mut bad = 0;
    for n in 2..=6 {
        bad += failures(&format!("ring{n}"), 500, |rng| {
            let f = random_form(n, 9, rng);
            make_ring(&f).is_ok_and(|r| r.check_axioms().is_ok())
        });
    }
    outcome(bad == 0, format!("2500 forms, {bad} failures"))
}

/// The table value claimed for `zeta_check_(n-1)(zeta_i theta^k)`.
fn stated_table(ring: &RingRf, i: usize, k: usize) -> BigRational {
    let n = ring.degree();
    if k + i == n - 1 && i > 0 {
        BigRational::one()
    } else if k == n - 1 && i == 0 {
        ring.f0().recip()
    } else {
        BigRational::zero()
    }
}

fn dual_functionals() -> Outcome {
    let identity_bad = failures("dual", 10_000, |rng| {
        let n = rng.random_range(2..=6);
        let ring = make_ring(&random_form(n, 9, rng)).expect("f0 != 0");
        let r = random_theta_vec(n, 9, 5, rng);
        let k = rng.random_range(1..n);
        let thet = ring.zeta_dual_top(&ring.mul(&ring.theta(), &r)) == ring.zeta_dual_second(&r);
        ring.getcoeff_identity(&r, k).unwrap_or(false) && thet
    });
    let (mut cells, mut mismatched, mut outside_triangle) = (0usize, 0usize, true);
    for t in 0..500 {
        let mut rng = trial_rng(SEED, "table", t);
        let n = rng.random_range(2..=6);
        let ring = make_ring(&random_form(n, 9, &mut rng)).expect("f0 != 0");
        for i in 0..n {
            for k in 0..n {
                cells += 1;
                let actual = ring.zeta_dual_top(&ring.mul(ring.zeta(i), &ring.theta_pow(k)));
                if actual != stated_table(&ring, i, k) {
                    mismatched += 1;
                    outside_triangle &= i > 0 && i + k >= n;
                }
            }
        }
    }
    println!(
        "    table sub-check: {} ({mismatched}/{cells} cells differ; all with i > 0 and i + k >= n: {outside_triangle})",
        if mismatched == 0 { "PASS" } else { "FAIL" }
    );
    assert!(outside_triangle, "table mismatch inside the range where the stated values are correct");
    assert_eq!(identity_bad, 0, "dual-functional identities failed");
    outcome(
        identity_bad == 0 && mismatched == 0,
        format!("10000 triples, {identity_bad} identity failures; table cells differing: {mismatched}"),
    )
}

fn index_facts() -> Outcome {
    let index_bad = failures("index", 500, |rng| {
        let n = rng.random_range(2..=6);
        let ring = make_ring(&random_form(n, 9, rng)).expect("f0 != 0");
        let (i_f, j_f) = ring.make_if_jf();
        j_f.index_of(&i_f) == BigRational::from_integer(ring.form().leading().abs())
    });
    let det_bad = failures("dets", 1000, |rng| {
        let n = rng.random_range(2..=5);
        let a = random_tensor(n, 5, rng);
        let ends = |t: &binform::tensorlink::Tensor2nn, f: &BinaryForm| {
            t.a1().det().unwrap().abs() == f.coeff(0).abs() && t.a2().det().unwrap().abs() == f.coeff(n).abs()
        };
        let f = a.det_form().unwrap();
        let p = psi(&a).unwrap();
        // the pair's own tensor lives over the transported form
        let transported = gl2_act_tensor(p.transport(), p.tensor());
        ends(&a, &f) && ends(&phi(&p).unwrap(), &f) && ends(&transported, p.ring().form())
    });
    outcome(
        index_bad == 0 && det_bad == 0,
        format!("500 forms, {index_bad} index failures; 1000 tensors/pairs, {det_bad} determinant failures"),
    )
}

fn characteristic() -> Outcome {
    let bad = failures("charpoly", 1000, |rng| {
        let n = rng.random_range(2..=5);
        let a = loop {
            let a = random_tensor(n, 5, rng);
            if !a.det_form().unwrap().discriminant().is_zero() {
                break a;
            }
        };
        psi(&a).and_then(|p| characteristic_ok(&p)).unwrap_or(false)
    });
    outcome(bad == 0, format!("1000 tensors, {bad} failures"))
}

fn equivariance() -> Outcome {
    let gl2_bad = failures("gl2", 1000, |rng| {
        let n = rng.random_range(2..=5);
        let a = random_tensor(n, 5, rng);
        let g = random_gl2(8, rng);
        gl2_act_tensor(&g, &a).det_form().unwrap() == gl2_act_form(&g, &a.det_form().unwrap())
    });
    let g_bad = failures("gpair", 1000, |rng| {
        let n = rng.random_range(2..=5);
        let a = random_tensor(n, 5, rng);
        let h = random_gpair(n, 8, rng);
        g_act_tensor(&h, &a).unwrap().det_form().unwrap() == a.det_form().unwrap()
    });
    outcome(gl2_bad == 0 && g_bad == 0, format!("GL2: {gl2_bad} failures; G pairs: {g_bad} failures"))
}

fn balancing() -> Outcome {
    // (partner ok, broken-pair disagreement, uniqueness violations)
    let results: Vec<(bool, bool, usize)> = (0..700u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(SEED, "balance", t);
            let n = 2 + (t as usize % 3);
            let ring = Arc::new(make_ring(&random_primitive_form(n, 4, &mut rng)).expect("f0 != 0"));
            let nn = random_fractional_ideal(&ring, 3, &mut rng);
            let report = balancing_partner(&nn).unwrap();
            let m = report.partner.lattice().clone();
            if t >= 500 {
                let two = BigRational::from_integer(BigInt::from(2));
                let v = check_balanced(&ring, &m.scale(&two).unwrap(), nn.lattice()).unwrap();
                return (true, !v.criteria_agree || v.balanced(), 0);
            }
            let v = &report.verdict;
            let ok = v.contained && v.norm_ok && v.index_ok;
            let clashes = (0..10)
                .filter(|_| {
                    let mp = perturb_lattice(&m, &mut rng).unwrap();
                    check_balanced(&ring, &mp, nn.lattice()).unwrap().balanced()
                })
                .count();
            (ok, false, clashes)
        })
        .collect();
    let partner_bad = results.iter().filter(|r| !r.0).count();
    let broken_bad = results.iter().filter(|r| r.1).count();
    let unique_bad: usize = results.iter().map(|r| r.2).sum();
    outcome(
        partner_bad == 0 && broken_bad == 0 && unique_bad == 0,
        format!(
            "500 ideals, {partner_bad} partner failures; 200 broken pairs, {broken_bad} disagreements; \
             5000 perturbations, {unique_bad} accepted"
        ),
    )
}

fn symmetric() -> Outcome {
    let bad = failures("symmetric", 500, |rng| {
        let n = rng.random_range(2..=5);
        let a = random_symmetric_tensor(n, 5, rng);
        let Ok(report) = symmetric_ops(&a) else { return false };
        let Some(p) = report.self_pair else { return false };
        let g = random_unimodular(n, 2 * n, rng);
        let q = p.change_basis(&GPair::new(g.clone(), g).unwrap()).unwrap();
        phi(&q).is_ok_and(|b| b.is_symmetric())
    });
    outcome(bad == 0, format!("500 tensors, {bad} failures"))
}

fn universal() -> Outcome {
    let mut bad = [0usize; 3];
    for n in 2..=4 {
        let per: Vec<[bool; 3]> = (0..1000u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(SEED, &format!("universal{n}"), t);
                let s = Specialization::random(n, 9, &mut rng);
                let fwd = check_correspondence_forward(&s, rng.random_range(0..n)).unwrap();
                let bwd = check_correspondence_backward(&s, rng.random_range(0..n), rng.random_range(0..n)).unwrap();
                let mut u = s.u;
                let nodenom = loop {
                    match check_nodenom(&Specialization::new(u), n - 1) {
                        Err(Error::Singular) => u = Specialization::random(n, 9, &mut rng).u,
                        r => break r.unwrap(),
                    }
                };
                [nodenom, fwd, bwd]
            })
            .collect();
        for r in per {
            for (b, ok) in bad.iter_mut().zip(r) {
                *b += usize::from(!ok);
            }
        }
    }
    outcome(
        bad == [0; 3],
        format!("3000 specializations; failures nodenom {}, forward {}, backward {}", bad[0], bad[1], bad[2]),
    )
}

fn census() -> Outcome {
    let f = BinaryForm::from_i64(&[1, 0, 1]).unwrap();
    let r = enumerate_orbits(&f, 1, 4).unwrap();
    let round_trips = r.members.iter().all(|a| psi(a).and_then(|p| phi(&p)).is_ok_and(|b| &b == a));
    outcome(
        !r.members.is_empty() && round_trips && r.classes.len() == 1 && r.budget_limited,
        format!(
            "{} members, {} classes, round trips {}, budget-limited {}",
            r.members.len(),
            r.classes.len(),
            round_trips,
            r.budget_limited
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("round trip", round_trip),
        ("ring axioms", ring_axioms),
        ("dual functionals", dual_functionals),
        ("index facts", index_facts),
        ("characteristic polynomial", characteristic),
        ("equivariance", equivariance),
        ("balancing criteria", balancing),
        ("symmetric correspondence", symmetric),
        ("universal identities", universal),
        ("census", census),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {:>2} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    // Criterion 3 cannot pass as stated; its failure is checked for shape above.
    let unexpected: Vec<usize> = failed.into_iter().filter(|&c| c != 3).collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
