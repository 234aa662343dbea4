use std::sync::Arc;

use binform::balance::{
    check_balanced, ideal_quotient, pairing_determinant, random_fractional_ideal, random_unit_of_algebra,
    realize_pair, FractionalIdeal,
};
use binform::codec;
use binform::exactlat::{charpoly, det_binary_form, hnf, lattice_index, IntMatrix, Matrix, RatMatrix};
use binform::formring::{make_ring, BinaryForm};
use binform::groups::{g_act_tensor, gl2_act_form, gl2_act_tensor};
use binform::sampling::{random_gl2, random_gpair, random_primitive_form, random_tensor, random_unimodular};
use binform::tensorlink::{phi, psi, Tensor2nn};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_matrix(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, n * n)
        .prop_map(move |v| IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap())
}

fn nonsingular(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    int_matrix(n, bound).prop_filter("singular", |m| !m.det().unwrap().is_zero())
}

fn tensor(n: usize, bound: i64) -> impl Strategy<Value = Tensor2nn> {
    (int_matrix(n, bound), int_matrix(n, bound))
        .prop_map(|(a, b)| Tensor2nn::new(a, b).unwrap())
        .prop_filter("zero determinant form", |a| a.det_form().is_ok())
}

fn form(n: usize, bound: i64) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(-bound..=bound, n + 1)
        .prop_filter("f0 = 0", |c| c[0] != 0)
        .prop_map(|c| BinaryForm::from_i64(&c).unwrap())
}

fn degree() -> impl Strategy<Value = usize> {
    2usize..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_ignores_unimodular_change((b, seed) in (2usize..=4).prop_flat_map(|n| (nonsingular(n, 6), any::<u64>()))) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(b.rows(), 10, &mut rng);
        let b = b.to_rational();
        prop_assert_eq!(hnf(&b.mul(&u.to_rational()).unwrap()).unwrap(), hnf(&b).unwrap());
    }

    #[test]
    fn index_is_multiplicative(
        (l1, t1, t2) in (2usize..=4).prop_flat_map(|n| (nonsingular(n, 5), nonsingular(n, 3), nonsingular(n, 3)))
    ) {
        let l1 = l1.to_rational();
        let l2 = l1.mul(&t1.to_rational()).unwrap();
        let l3 = l2.mul(&t2.to_rational()).unwrap();
        let whole = lattice_index(&l3, &l1).unwrap();
        prop_assert_eq!(whole, lattice_index(&l2, &l1).unwrap() * lattice_index(&l3, &l2).unwrap());
        prop_assert_eq!(lattice_index(&l1, &l3).unwrap(), BigRational::from_integer(1.into()) / lattice_index(&l3, &l1).unwrap());
    }

    #[test]
    fn charpoly_is_conjugation_invariant((m, seed) in (2usize..=5).prop_flat_map(|n| (int_matrix(n, 9), any::<u64>()))) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_unimodular(m.rows(), 8, &mut rng);
        let conj = p.unimodular_inverse().unwrap().mul(&m).unwrap().mul(&p).unwrap();
        prop_assert_eq!(charpoly(&conj).unwrap(), charpoly(&m).unwrap());
    }

    #[test]
    fn det_form_endpoints(a in degree().prop_flat_map(|n| tensor(n, 6))) {
        let c = det_binary_form(a.a1(), a.a2()).unwrap();
        prop_assert_eq!(&c[0], &a.a1().det().unwrap());
        prop_assert_eq!(c.last().unwrap(), &a.a2().det().unwrap());
    }

    #[test]
    fn gl2_actions_compose((a, seed) in (degree().prop_flat_map(|n| tensor(n, 4)), any::<u64>())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (random_gl2(6, &mut rng), random_gl2(6, &mut rng));
        let f = a.det_form().unwrap();
        prop_assert_eq!(gl2_act_form(&g, &gl2_act_form(&h, &f)), gl2_act_form(&g.mul(&h), &f));
        prop_assert_eq!(gl2_act_tensor(&g, &gl2_act_tensor(&h, &a)), gl2_act_tensor(&g.mul(&h), &a));
        prop_assert_eq!(gl2_act_tensor(&g, &a).det_form().unwrap(), gl2_act_form(&g, &f));
        let (p, q) = (random_gpair(a.n(), 6, &mut rng), random_gpair(a.n(), 6, &mut rng));
        let pq = g_act_tensor(&p.mul(&q), &a).unwrap();
        prop_assert_eq!(&g_act_tensor(&p, &g_act_tensor(&q, &a).unwrap()).unwrap(), &pq);
        prop_assert_eq!(pq.det_form().unwrap(), f);
    }

    #[test]
    fn dual_functional_identities((f, seed) in (2usize..=6).prop_flat_map(|n| (form(n, 9), any::<u64>()))) {
        let ring = make_ring(&f).unwrap();
        let n = ring.degree();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = binform::sampling::random_theta_vec(n, 9, 6, &mut rng);
        for k in 1..n {
            prop_assert!(ring.getcoeff_identity(&r, k).unwrap());
        }
        prop_assert_eq!(ring.zeta_dual_top(&ring.mul(&ring.theta(), &r)), ring.zeta_dual_second(&r));
        let (i_f, j_f) = ring.make_if_jf();
        let x = j_f.basis_vectors().iter().fold(binform::formring::ThetaVec::zero(n), |acc, b| {
            acc.add(&b.scale(&BigRational::from_integer(rng.random_range(-5i64..=5).into())))
        });
        prop_assert_eq!(i_f.contains(&x), ring.zeta_dual_second(&x).is_integer());
        prop_assert_eq!(j_f.index_of(&i_f), BigRational::from_integer(f.leading().abs()));
    }

    #[test]
    fn round_trip_after_basis_change((a, seed) in (degree().prop_flat_map(|n| tensor(n, 4)), any::<u64>())) {
        let p = psi(&a).unwrap();
        prop_assert_eq!(&phi(&p).unwrap(), &a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = p.change_basis(&random_gpair(a.n(), 6, &mut rng)).unwrap();
        let back = psi(&phi(&q).unwrap()).unwrap();
        prop_assert_eq!(back.m().actions(), q.m().actions());
        prop_assert_eq!(back.n().actions(), q.n().actions());
        prop_assert_eq!(back.pairing(), q.pairing());
    }

    #[test]
    fn psi_is_covariant((a, seed) in (degree().prop_flat_map(|n| tensor(n, 4)), any::<u64>())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_gpair(a.n(), 6, &mut rng);
        let moved = psi(&g_act_tensor(&h, &a).unwrap()).unwrap();
        let expected = psi(&a).unwrap().change_basis(&h).unwrap();
        prop_assert_eq!(moved.n().actions(), expected.n().actions());
        prop_assert_eq!(moved.m().actions(), expected.m().actions());
        prop_assert_eq!(moved.pairing(), expected.pairing());
    }

    #[test]
    fn tensor_json_round_trip(a in degree().prop_flat_map(|n| tensor(n, 50))) {
        let text = codec::to_canonical(&codec::tensor(&a));
        prop_assert_eq!(codec::tensor_from(&codec::parse(&text).unwrap()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_lemma(n in degree(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Arc::new(make_ring(&random_primitive_form(n, 5, &mut rng)).unwrap());
        let m = random_fractional_ideal(&ring, 3, &mut rng);
        let nn = random_fractional_ideal(&ring, 3, &mut rng);
        let (_, j_f) = ring.make_if_jf();
        let expected = m.norm() * nn.norm() / ring.ideal_norm(&j_f).unwrap();
        prop_assert_eq!(pairing_determinant(&ring, m.lattice(), nn.lattice()).abs(), expected);
    }

    #[test]
    fn balance_is_scale_invariant(n in degree(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Arc::new(make_ring(&random_primitive_form(n, 5, &mut rng)).unwrap());
        let nn = random_fractional_ideal(&ring, 3, &mut rng);
        // a partner and a non-partner
        let m = ideal_quotient(&FractionalIdeal::i_f(ring.clone()), &nn).unwrap();
        let m_bad = m.scale(&BigRational::new(3.into(), 2.into())).unwrap();
        let lambda = random_unit_of_algebra(&ring, 3, &mut rng);
        let inv = ring.inverse(&lambda).unwrap();
        let scaled_n = nn.times(&inv).unwrap();
        for mm in [&m, &m_bad] {
            let before = check_balanced(&ring, mm.lattice(), nn.lattice()).unwrap();
            let after = check_balanced(&ring, mm.times(&lambda).unwrap().lattice(), scaled_n.lattice()).unwrap();
            prop_assert_eq!(before.balanced(), after.balanced());
            prop_assert!(after.criteria_agree);
        }
    }

    #[test]
    fn psi_outputs_are_balanced_ideals(n in degree(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_tensor(n, 4, &mut rng);
        prop_assume!(!a.det_form().unwrap().discriminant().is_zero());
        let p = psi(&a).unwrap();
        let r = realize_pair(&p).unwrap();
        prop_assert!(check_balanced(p.ring(), r.m.ideal.lattice(), r.n.ideal.lattice()).unwrap().balanced());
    }
}

#[test]
fn hnf_of_rational_basis_is_canonical() {
    let b = RatMatrix::from_i64(&[&[2, 1], &[0, 3]]).scale(&BigRational::new(1.into(), 2.into()));
    let swapped = Matrix::from_columns(&[b.column(1), b.column(0)]).unwrap();
    assert_eq!(hnf(&b).unwrap(), hnf(&swapped).unwrap());
}
