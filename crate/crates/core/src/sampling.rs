//! Seeded random generators for forms, tensors and group elements.
//!
//! Each trial of a sweep draws from its own ChaCha stream, so results do not
//! depend on how trials are split across threads.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlat::IntMatrix;
use crate::formring::{BinaryForm, ThetaVec};
use crate::groups::{GL2Elem, GPair};
use crate::tensorlink::Tensor2nn;

/// Generator for trial `trial` of the sweep identified by `label` under `seed`.
pub fn trial_rng(seed: u64, label: &str, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tag = label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    rng.set_stream(tag ^ trial.rotate_left(32));
    rng
}

fn draw<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigInt {
    BigInt::from(rng.random_range(-bound..=bound))
}

pub fn random_matrix<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> IntMatrix {
    IntMatrix::from_fn(n, n, |_, _| draw(rng, bound))
}

pub fn random_symmetric<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> IntMatrix {
    let m = random_matrix(n, bound, rng);
    IntMatrix::from_fn(n, n, |r, c| if r <= c { m[(r, c)].clone() } else { m[(c, r)].clone() })
}

/// Degree-`n` form with coefficients in `[-bound, bound]` and `f_0 != 0`.
pub fn random_form<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> BinaryForm {
    loop {
        let coeffs: Vec<BigInt> = (0..=n).map(|_| draw(rng, bound)).collect();
        if !coeffs[0].is_zero() {
            return BinaryForm::new(coeffs).expect("nonzero leading coefficient");
        }
    }
}

/// Primitive form with nonzero discriminant and `f_0 != 0`.
pub fn random_primitive_form<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> BinaryForm {
    loop {
        let f = random_form(n, bound, rng);
        if f.is_primitive() && !f.discriminant().is_zero() {
            return f;
        }
    }
}

/// Tensor with entries in `[-bound, bound]` and nonzero determinant form.
pub fn random_tensor<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Tensor2nn {
    loop {
        let a = Tensor2nn::new(random_matrix(n, bound, rng), random_matrix(n, bound, rng)).expect("same size");
        if a.det_coeffs().is_ok_and(|c| c.iter().any(|x| !x.is_zero())) {
            return a;
        }
    }
}

/// As [`random_tensor`] but with `det A1 != 0`.
pub fn random_tensor_nonzero_leading<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Tensor2nn {
    loop {
        let a = random_tensor(n, bound, rng);
        if !a.a1().det().expect("square").is_zero() {
            return a;
        }
    }
}

pub fn random_symmetric_tensor<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Tensor2nn {
    loop {
        let a = Tensor2nn::new(random_symmetric(n, bound, rng), random_symmetric(n, bound, rng)).expect("same size");
        if a.det_coeffs().is_ok_and(|c| c.iter().any(|x| !x.is_zero())) {
            return a;
        }
    }
}

/// Product of `len` random elementary matrices and sign flips; determinant `+-1`.
pub fn random_unimodular<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> IntMatrix {
    let mut g = IntMatrix::identity(n);
    for _ in 0..len {
        let i = rng.random_range(0..n);
        if rng.random_bool(0.15) {
            for c in 0..n {
                g[(i, c)] = -g[(i, c)].clone();
            }
            continue;
        }
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = BigInt::from(if rng.random_bool(0.5) { 1 } else { -1 });
        for c in 0..n {
            let add = &s * &g[(j, c)];
            g[(i, c)] += add;
        }
    }
    g
}

pub fn random_gl2<R: Rng + ?Sized>(len: usize, rng: &mut R) -> GL2Elem {
    let m = random_unimodular(2, len, rng);
    GL2Elem::new(m[(0, 0)].clone(), m[(0, 1)].clone(), m[(1, 0)].clone(), m[(1, 1)].clone())
        .expect("unimodular by construction")
}

/// Random `(g1, g2)` with `det g1 det g2 = 1`.
pub fn random_gpair<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> GPair {
    let g1 = random_unimodular(n, len, rng);
    let mut g2 = random_unimodular(n, len, rng);
    if g1.det().expect("square") != g2.det().expect("square") {
        for c in 0..n {
            g2[(0, c)] = -g2[(0, c)].clone();
        }
    }
    GPair::new(g1, g2).expect("determinants multiply to 1")
}

/// Element of `Q[theta]/F` with numerators in `[-bound, bound]` and denominators in `1..=den`.
pub fn random_theta_vec<R: Rng + ?Sized>(n: usize, bound: i64, den: i64, rng: &mut R) -> ThetaVec {
    ThetaVec(
        (0..n)
            .map(|_| BigRational::new(draw(rng, bound), BigInt::from(rng.random_range(1..=den))))
            .collect(),
    )
}
