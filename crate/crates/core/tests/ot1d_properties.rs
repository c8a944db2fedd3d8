mod common;

use cfwgan_core::activation::ActivationKind;
use cfwgan_core::distributions::{
    sample_sphere_direction, ContinuousDistribution1D as D, Law1D, Provenance, SampleMatrix,
};
use cfwgan_core::ot1d::{
    transport_map, unprojected_inner_value, wq_brute, wq_empirical, wq_to_gaussian_power, Order,
};
use cfwgan_core::rng;
use cfwgan_core::sliced::LinearGenerator;
use cfwgan_core::wgan1d::Generator1D;
use common::laws;
use proptest::prelude::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn samples(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, n).prop_map(sorted)
}

fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..40).prop_flat_map(|n| (samples(n), samples(n), samples(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn w1_never_exceeds_w2((x, y, _) in triple()) {
        let w1 = wq_empirical(&x, &y, Order::One).unwrap();
        let w2 = wq_empirical(&x, &y, Order::Two).unwrap();
        prop_assert!(w1 <= w2 * (1.0 + 1e-12), "{w1} > {w2}");
    }

    #[test]
    fn triangle_inequality((x, y, z) in triple()) {
        for q in [Order::One, Order::Two] {
            let xz = wq_empirical(&x, &z, q).unwrap();
            let xy = wq_empirical(&x, &y, q).unwrap();
            let yz = wq_empirical(&y, &z, q).unwrap();
            let zy = wq_empirical(&z, &y, q).unwrap();
            let yx = wq_empirical(&y, &x, q).unwrap();
            prop_assert!(xz <= (xy + yz) * (1.0 + 1e-12) + 1e-300);
            prop_assert!(xz <= (yx + zy) * (1.0 + 1e-12) + 1e-300);
        }
    }
}

#[test]
fn sorted_pairing_equals_brute_force() {
    let mut r = rng::stream(2024, 0);
    for trial in 0..1000 {
        let n = 1 + rng::index_below(&mut r, 8);
        // A coarse grid produces ties, where q = 1 optima are not unique.
        let coarse = trial % 3 == 0;
        let mut draw = || {
            let v = 4.0 * rng::normal(&mut r);
            if coarse {
                v.round()
            } else {
                v
            }
        };
        let x: Vec<f64> = (0..n).map(|_| draw()).collect();
        let y: Vec<f64> = (0..n).map(|_| draw()).collect();
        for q in [Order::One, Order::Two] {
            let fast = wq_empirical(&sorted(x.clone()), &sorted(y.clone()), q).unwrap();
            assert_eq!(
                fast,
                wq_brute(&x, &y, q).unwrap(),
                "trial {trial}: {x:?} {y:?}"
            );
        }
    }
}

#[test]
fn transport_map_is_monotone() {
    for (name, law) in laws() {
        let lo = law.quantile(1e-9).unwrap();
        let hi = law.quantile(1.0 - 1e-9).unwrap();
        for kind in ActivationKind::ALL {
            for theta2 in [1.3, -0.8] {
                let t = transport_map(&law, Generator1D::new(0.2, theta2, kind));
                let mut prev = f64::NEG_INFINITY;
                for i in 0..10_000 {
                    let x = lo + (hi - lo) * i as f64 / 9_999.0;
                    let v = t.eval(x);
                    assert!(
                        v >= prev,
                        "{name}/{}/θ₂={theta2}: t({x}) = {v} < {prev}",
                        kind.name()
                    );
                    prev = v;
                }
            }
        }
    }
}

#[test]
fn projected_and_unprojected_values_agree() {
    let mut r = rng::stream(99, 0);
    for trial in 0..100 {
        let d = [2, 5, 10][trial % 3];
        let rk = 1 + rng::index_below(&mut r, d);
        let m = 50 + rng::index_below(&mut r, 200);
        let law = D::laplace(0.0, 1.0).unwrap();
        let data: Vec<f64> = (0..m * d).map(|_| law.sample(&mut r)).collect();
        let x = SampleMatrix::new(m, d, data, Provenance::InMemory).unwrap();
        let theta = LinearGenerator::new((0..d * rk).map(|_| rng::normal(&mut r)).collect(), d, rk)
            .unwrap();
        let omega = sample_sphere_direction(d, &mut r);
        let unprojected = unprojected_inner_value(&x, &omega, &theta).unwrap();
        let projected = wq_to_gaussian_power(
            &sorted(x.project(&omega)),
            theta.projected_sd(&omega).unwrap(),
            Order::Two,
        )
        .unwrap();
        assert!(
            (unprojected - projected).abs() < 1e-10,
            "trial {trial}: {unprojected} vs {projected}"
        );
    }
}
