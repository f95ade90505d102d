use std::f64::consts::PI;

use logtrig_core::identities::{rhs_closed, series_spec, SERIES_IDS};
use logtrig_core::series_engine::{
    bilateral_symmetric_mean, cesaro_sum, dirichlet_partial, lerch_tail_sum, naive_partial_sum,
    sum_by_parts,
};
use logtrig_core::{NuValue, Oscillation, SeriesSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn nu(v: f64) -> NuValue {
    NuValue::new(v).unwrap()
}

fn grid() -> impl Iterator<Item = f64> {
    (1..=9).map(|i| i as f64 / 10.0)
}

#[test]
fn parts_and_cesaro_agree_within_estimates() {
    for id in SERIES_IDS {
        let spec = series_spec(id).unwrap();
        for v in grid() {
            let parts = sum_by_parts(&spec, nu(v), 1e-10).unwrap();
            let cesaro = cesaro_sum(&spec, nu(v), 1, 200_000).unwrap();
            let gap = (parts.re() - cesaro.re()).abs();
            assert!(
                gap <= parts.error_estimate + cesaro.error_estimate,
                "{id} at nu = {v}: gap {gap:e}, estimates {:e} + {:e}",
                parts.error_estimate,
                cesaro.error_estimate
            );
        }
    }
}

#[test]
fn error_estimates_are_honest() {
    for id in SERIES_IDS {
        let spec = series_spec(id).unwrap();
        for v in grid() {
            let closed = rhs_closed(id, nu(v)).unwrap();
            for tol in [1e-6, 1e-10] {
                let parts = sum_by_parts(&spec, nu(v), tol).unwrap();
                let err = (parts.re() - closed.re()).abs();
                assert!(
                    err <= 2.0 * (parts.error_estimate + closed.error_estimate),
                    "{id} at nu = {v}, tol {tol:e}: error {err:e} vs estimate {:e}",
                    parts.error_estimate
                );
            }
            for order in [1, 2] {
                let cesaro = cesaro_sum(&spec, nu(v), order, 50_000).unwrap();
                let err = (cesaro.re() - closed.re()).abs();
                assert!(
                    err <= 2.0 * (cesaro.error_estimate + closed.error_estimate),
                    "{id} (C,{order}) at nu = {v}: error {err:e} vs estimate {:e}",
                    cesaro.error_estimate
                );
            }
        }
    }
}

#[test]
fn near_endpoint_still_converges() {
    let spec = series_spec(logtrig_core::IdentityId::Series2).unwrap();
    for v in [1e-3, 1.0 - 1e-3] {
        let parts = sum_by_parts(&spec, nu(v), 1e-8).unwrap();
        let closed = rhs_closed(logtrig_core::IdentityId::Series2, nu(v)).unwrap();
        assert!((parts.re() - closed.re()).abs() < 1e-8, "nu = {v}");
    }
}

#[test]
fn lerch_tail_examples() {
    // x = 1/2 turns the sum into an alternating one.
    let v = 0.3;
    let alt = rhs_closed(logtrig_core::IdentityId::AltDigamma, nu(v))
        .unwrap()
        .re();
    let want = Complex64::from_polar(alt, -PI * v);
    let got = lerch_tail_sum(0.5, nu(v), 1e-12)
        .unwrap()
        .value
        .as_complex();
    assert!((got - want).norm() < 1e-11);

    let got = lerch_tail_sum(0.5, nu(0.5), 1e-12)
        .unwrap()
        .value
        .as_complex();
    assert!((got - Complex64::new(0.0, -0.5 * PI)).norm() < 1e-11);
}

#[test]
fn lerch_tail_matches_brute_force_average() {
    let (x, v) = (0.25, 0.6);
    let n = 2_000_000u64;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut mean = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let t = v + k as f64;
        partial += Complex64::from_polar(1.0 / t, -2.0 * PI * x * t);
        mean += partial;
    }
    mean /= n as f64;
    let got = lerch_tail_sum(x, nu(v), 1e-10).unwrap().value.as_complex();
    assert!((got - mean).norm() < 1e-5, "{got} vs {mean}");
}

#[test]
fn kronecker_residual_shrinks_with_n() {
    let (y, v) = (0.4, 0.3);
    let i = Complex64::new(0.0, 1.0);
    let closed = 2.0 * PI * i * Complex64::from_polar(1.0, -2.0 * PI * v * y)
        / (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * PI * y))
        - 1.0 / y;
    let residuals: Vec<f64> = [1_000u64, 10_000, 100_000]
        .iter()
        .map(|&n| {
            let mean = bilateral_symmetric_mean(
                |k| Complex64::from_polar(1.0, 2.0 * PI * v * k as f64) / (k as f64 + y),
                n,
            )
            .unwrap();
            (mean.value.as_complex() - closed).norm()
        })
        .collect();
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
    assert!(residuals[2] < 1e-3);
}

#[test]
fn naive_partial_sum_of_short_series() {
    let spec = SeriesSpec::new(|k: u64| 1.0 / k as f64, Oscillation::Cos2k, 1).unwrap();
    let want: f64 = (1..=3)
        .map(|k| (2.0 * PI * 0.2 * k as f64).cos() / k as f64)
        .sum();
    assert!((naive_partial_sum(&spec, nu(0.2), 3) - want).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dirichlet_differences_are_terms(
        v in 0.01f64..0.99,
        k in 2u64..1_000_000,
        osc in prop::sample::select(vec![
            Oscillation::Sin2k, Oscillation::Cos2k, Oscillation::Sin2k1, Oscillation::Cos2k1,
        ]),
    ) {
        let nu = nu(v);
        let diff = dirichlet_partial(osc, nu, 1, k).unwrap() - dirichlet_partial(osc, nu, 1, k - 1).unwrap();
        prop_assert!((diff - osc.term(nu, k)).abs() < 1e-12, "diff {} term {}", diff, osc.term(nu, k));
    }

    #[test]
    fn parts_matches_closed_form_on_random_nu(v in 0.02f64..0.98, idx in 0usize..7) {
        let id = SERIES_IDS[idx];
        let spec = series_spec(id).unwrap();
        let parts = sum_by_parts(&spec, nu(v), 1e-10).unwrap();
        let closed = rhs_closed(id, nu(v)).unwrap();
        prop_assert!((parts.re() - closed.re()).abs() < 1e-9);
    }
}
