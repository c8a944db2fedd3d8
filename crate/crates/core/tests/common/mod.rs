#![allow(dead_code)]

use cfwgan_core::distributions::ContinuousDistribution1D as D;
use cfwgan_core::linalg::symmetric_eigen;
use cfwgan_core::rng;

pub fn laws() -> Vec<(&'static str, D)> {
    vec![
        ("gaussian", D::gaussian(0.3, 2.0).unwrap()),
        ("laplace", D::laplace(-1.0, 0.7).unwrap()),
        ("uniform", D::uniform(-1.0, 3.0).unwrap()),
        ("gumbel", D::gumbel(0.5, 1.5).unwrap()),
        (
            "reflected-gumbel",
            D::affine(D::gumbel(0.0, 1.0).unwrap(), -2.0, 1.0).unwrap(),
        ),
        ("logit-normal", D::LogitNormal),
    ]
}

/// A Haar-ish orthogonal matrix: eigenvectors of a random symmetric matrix.
pub fn random_orthogonal(d: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed, 77);
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let v = rng::normal(&mut r);
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
    }
    symmetric_eigen(&a, d).unwrap().vectors
}

/// Kolmogorov–Smirnov distance between two samples (ties handled).
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut worst) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        worst = worst.max((i as f64 / n - j as f64 / m).abs());
    }
    worst
}

/// KS distance of a sample from Uniform(0,1).
pub fn ks_uniform(u: &mut [f64]) -> f64 {
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &v)| (v - i as f64 / n).abs().max(((i + 1) as f64 / n - v).abs()))
        .fold(0.0, f64::max)
}
