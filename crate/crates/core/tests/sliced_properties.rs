mod common;

use cfwgan_core::distributions::{
    sample_matrix, ContinuousDistribution1D as D, DataSpec, Provenance, SampleMatrix,
};
use cfwgan_core::ot1d::Order;
use cfwgan_core::rng;
use cfwgan_core::sliced::{
    closed_form_objective_d2, direction_terms, objective_carlson, objective_mc,
    objective_quadrature, optimal_scale, optimal_theta_w2, projection_direction, sigma_tilde,
    sliced_wq_empirical, ub_value, LinearGenerator, SigmaTilde, SlicedEvalConfig,
};
use cfwgan_core::special::gamma_ratio_sq;
use common::random_orthogonal;
use proptest::prelude::*;

fn matvec(q: &[f64], v: &[f64]) -> Vec<f64> {
    let d = v.len();
    (0..d)
        .map(|i| (0..d).map(|j| q[i * d + j] * v[j]).sum())
        .collect()
}

#[test]
fn rotation_invariance_with_matched_directions() {
    let (d, m, r) = (6, 400, 4);
    let x = sample_matrix(&DataSpec::Iid(D::laplace(0.2, 1.0).unwrap()), d, m, 3).unwrap();
    let q = random_orthogonal(d, 8);
    let rotated_rows: Vec<f64> = (0..m).flat_map(|i| matvec(&q, x.row(i))).collect();
    let xq = SampleMatrix::new(m, d, rotated_rows, Provenance::InMemory).unwrap();
    let mut g = rng::stream(4, 0);
    let theta =
        LinearGenerator::new((0..d * r).map(|_| rng::normal(&mut g)).collect(), d, r).unwrap();
    let theta_q = theta.rotated(&q).unwrap();
    for i in 0..200 {
        let omega = projection_direction(d, 17, i);
        for order in [Order::One, Order::Two] {
            let a = direction_terms(&x, &[&theta], &omega, order).unwrap()[0];
            let b = direction_terms(&xq, &[&theta_q], &matvec(&q, &omega), order).unwrap()[0];
            assert!((a - b).abs() < 1e-10, "projection {i}: {a} vs {b}");
        }
    }
}

#[test]
fn isotropic_spectrum_is_minimal() {
    let st = SigmaTilde(1.0);
    let mut r = rng::stream(31, 0);
    for d in [2usize, 3, 5] {
        let s_star = optimal_scale(d, st).unwrap();
        let best = objective_quadrature(&vec![s_star; d], st).unwrap();
        for _ in 0..50 {
            let w: Vec<f64> = (0..d).map(|_| -rng::uniform_open(&mut r).ln()).collect();
            let total: f64 = w.iter().sum();
            let s: Vec<f64> = w.iter().map(|v| v / total * d as f64 * s_star).collect();
            let v = objective_quadrature(&s, st).unwrap();
            assert!(best <= v + 1e-9, "d={d} S={s:?}: {best} > {v}");
        }
    }
}

#[test]
fn equal_spectrum_optimum_is_the_gamma_ratio() {
    // s − 2σ̃√(g s) is a quadratic in √s with vertex √s = σ̃√g.
    for d in [1u64, 2, 3, 7, 30, 500] {
        let g = gamma_ratio_sq(d).unwrap();
        for st in [0.5, 1.0, 2.0] {
            let f = |s: f64| s - 2.0 * st * (g * s).sqrt();
            let s_star = g * st * st;
            assert_eq!(optimal_scale(d as usize, SigmaTilde(st)).unwrap(), s_star);
            for k in 1..200 {
                let s = s_star * k as f64 / 100.0;
                assert!(f(s_star) <= f(s) + 1e-15 * st * st);
            }
            assert!((f(s_star) + g * st * st).abs() < 1e-14 * st * st);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_identities_d2(a in 0.0..4.0f64, b in 0.0..4.0f64, st in 0.1..3.0f64) {
        let st = SigmaTilde(st);
        let q = objective_quadrature(&[a, b], st).unwrap();
        let c = objective_carlson(&[a, b], st).unwrap();
        let e = closed_form_objective_d2(a, b, st).unwrap();
        prop_assert!((q - c).abs() < 1e-6 && (q - e).abs() < 1e-6 && (c - e).abs() < 1e-6, "{q} {c} {e}");
    }

    #[test]
    fn objective_identities_higher_d(s in prop::collection::vec(0.0..4.0f64, 3..8), st in 0.1..3.0f64) {
        let st = SigmaTilde(st);
        let q = objective_quadrature(&s, st).unwrap();
        let c = objective_carlson(&s, st).unwrap();
        prop_assert!((q - c).abs() < 1e-6, "{q} vs {c}");
    }
}

#[test]
fn monte_carlo_objective_matches_expansion() {
    let mut r = rng::stream(12, 0);
    for (k, d) in [2usize, 4, 9].into_iter().enumerate() {
        let rk = d + 1;
        let theta = LinearGenerator::new(
            (0..d * rk).map(|_| 0.5 * rng::normal(&mut r)).collect(),
            d,
            rk,
        )
        .unwrap();
        let st = SigmaTilde(1.1);
        let mc = objective_mc(&theta, st, Order::Two, 200_000, k as u64).unwrap();
        let exact = st.0 * st.0 + objective_quadrature(theta.spectrum(), st).unwrap();
        assert!(
            (mc.value - exact).abs() < 3.0 * mc.stderr,
            "d={d}: {} ± {} vs {exact}",
            mc.value,
            mc.stderr
        );
    }
}

#[test]
fn upper_bound_decreases_to_zero() {
    let st = SigmaTilde(1.0);
    let mut prev = f64::INFINITY;
    for d in 1..=1000 {
        let v = ub_value(d, st).unwrap();
        assert!(v < prev, "d={d}");
        prev = v;
    }
    for d in [1000usize, 5000, 100_000, 10_000_000] {
        assert!(ub_value(d, st).unwrap() < 0.05);
    }
}

#[test]
fn more_projections_do_not_inflate_the_estimate() {
    let x = sample_matrix(&DataSpec::Iid(D::laplace(0.0, 1.0).unwrap()), 8, 2000, 6).unwrap();
    let theta = optimal_theta_w2(8, 8, sigma_tilde(&x)).unwrap();
    for q in [Order::One, Order::Two] {
        let small = SlicedEvalConfig {
            n_projections: 500,
            q,
            seed: 3,
            parallel: false,
        };
        let large = SlicedEvalConfig {
            n_projections: 1000,
            ..small
        };
        let a = sliced_wq_empirical(&x, &theta, &small).unwrap();
        let b = sliced_wq_empirical(&x, &theta, &large).unwrap();
        assert!(
            b.value <= a.value + 3.0 * a.stderr.hypot(b.stderr),
            "{a:?} -> {b:?}"
        );
    }
}
