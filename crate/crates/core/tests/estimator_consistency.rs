//! Monte Carlo checks of the estimators against closed-form entropies and
//! mutual informations.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tsinfo_core::estimators::{
    cmi_ksg, entropy_gaussian, entropy_kernel, entropy_knn, mi_gaussian, mi_ksg,
};

const H_NORMAL: f64 = 1.418_938_533_204_672_7;

fn normal(n: usize, d: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((n, d), |_| StandardNormal.sample(&mut rng))
}

/// Pairs `(x, r·x + √(1−r²)·e)`.
fn correlated(n: usize, r: f64, seed: u64) -> (Array2<f64>, Array2<f64>) {
    let z = normal(n, 2, seed);
    let x = z.column(0).to_owned().insert_axis(ndarray::Axis(1));
    let y = (&z.column(0) * r + &z.column(1) * (1.0 - r * r).sqrt()).insert_axis(ndarray::Axis(1));
    (x, y)
}

#[test]
fn kozachenko_normal_in_two_dimensions() {
    let h = entropy_knn(&normal(20_000, 2, 1), 4).unwrap();
    assert!((h - 2.0 * H_NORMAL).abs() < 0.03, "{h}");
}

#[test]
fn kozachenko_uniform_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = Array2::from_shape_fn((20_000, 1), |_| rng.random_range(0.0..2.0));
    let h = entropy_knn(&s, 4).unwrap();
    assert!((h - 2f64.ln()).abs() < 0.02, "{h}");
}

#[test]
fn kernel_normal_is_close() {
    let h = entropy_kernel(&normal(20_000, 1, 3), 0.25).unwrap();
    assert!((h - H_NORMAL).abs() < 0.03, "{h}");
}

#[test]
fn gaussian_entropy_scales_with_variance() {
    let s = normal(50_000, 1, 4).mapv(|v| 3.0 * v);
    let h = entropy_gaussian(&s).unwrap();
    assert!((h - (H_NORMAL + 3f64.ln())).abs() < 0.01, "{h}");
}

#[test]
fn ksg_tracks_correlation() {
    for (r, seed) in [(0.0, 5), (0.5, 6), (0.9, 7)] {
        let (x, y) = correlated(20_000, r, seed);
        let want = -0.5 * (1.0 - r * r).ln();
        let ksg = mi_ksg(&x, &y, 4).unwrap();
        let gauss = mi_gaussian(&x, &y).unwrap();
        assert!((ksg - want).abs() < 0.03, "r={r}: ksg {ksg} vs {want}");
        assert!((gauss - want).abs() < 0.02, "r={r}: gaussian {gauss} vs {want}");
    }
}

#[test]
fn conditional_ksg_on_markov_chain() {
    // x -> z -> y: I(x; y | z) = 0, while I(x; y) > 0.
    let n = 20_000;
    let e = normal(n, 3, 8);
    let x = e.column(0).to_owned().insert_axis(ndarray::Axis(1));
    let z = (&x.column(0) + &e.column(1)).insert_axis(ndarray::Axis(1));
    let y = (&z.column(0) + &e.column(2)).insert_axis(ndarray::Axis(1));
    let cmi = cmi_ksg(&x, &y, &z, 4).unwrap();
    let mi = mi_ksg(&x, &y, 4).unwrap();
    assert!(cmi.abs() < 0.02, "{cmi}");
    // Var(y) = 3, Cov(x, y) = 1: I = -½ ln(1 - 1/3).
    assert!((mi - (-0.5 * (2.0f64 / 3.0).ln())).abs() < 0.03, "{mi}");
}
