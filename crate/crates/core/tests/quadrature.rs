use logtrig_core::identities::rhs_closed;
use logtrig_core::quadrature::{
    frullani_exchange_integral, frullani_log_check, integrate_frullani, kernel_geom_sum,
    QuadratureConfig,
};
use logtrig_core::{FrullaniIntegrand, IdentityId, NuValue};
use proptest::prelude::*;

fn nu(v: f64) -> NuValue {
    NuValue::new(v).unwrap()
}

fn brute_kernel(x: f64, v: f64, s: f64, terms: u64) -> f64 {
    (2..=terms)
        .map(|k| {
            let k = k as f64;
            (-s * k * x).exp() * (2.0 * k * v * std::f64::consts::PI).sin()
        })
        .sum()
}

#[test]
fn kernel_matches_brute_force() {
    for x in [0.1, 0.5, 1.0, 3.0] {
        for i in 1..=9 {
            let v = i as f64 / 10.0;
            for s in [1u8, 2] {
                let got = kernel_geom_sum(x, nu(v), s).unwrap();
                let want = brute_kernel(x, v, f64::from(s), 2000);
                assert!((got - want).abs() < 1e-10, "x = {x}, nu = {v}, s = {s}");
            }
        }
    }
}

#[test]
fn kernel_examples() {
    let want = -(-2f64).exp() / (2.0 * 1f64.cosh());
    assert!((kernel_geom_sum(1.0, nu(0.25), 1).unwrap() - want).abs() < 1e-15);
    for x in [0.2, 1.0, 7.0] {
        assert!(kernel_geom_sum(x, nu(0.5), 1).unwrap().abs() < 1e-15);
    }
    let want = brute_kernel(0.5, 0.3, 2.0, 500);
    assert!((kernel_geom_sum(0.5, nu(0.3), 2).unwrap() - want).abs() < 1e-12);
}

#[test]
fn integrals_match_closed_forms() {
    let cfg = QuadratureConfig::new(1e-10);
    for i in 1..=9 {
        let v = i as f64 / 10.0;
        for (scale, id) in [(1u8, IdentityId::IntThm1), (2, IdentityId::IntThm2)] {
            if id == IdentityId::IntThm2 && i == 5 {
                continue;
            }
            let f = FrullaniIntegrand::new(scale, nu(v)).unwrap();
            let got = integrate_frullani(&f, &cfg).unwrap();
            let want = rhs_closed(id, nu(v)).unwrap();
            assert!((got.re() - want.re()).abs() < 1e-8, "{id} at nu = {v}");
            assert!(got.error_estimate <= 1e-10);
        }
    }
}

#[test]
fn integral_endpoint_zone_is_rejected() {
    let cfg = QuadratureConfig::new(1e-10);
    for v in [5e-4, 1.0 - 5e-4] {
        let f = FrullaniIntegrand::new(1, nu(v)).unwrap();
        assert!(integrate_frullani(&f, &cfg).is_err());
    }
}

#[test]
fn exchange_of_order_reproduces_series2() {
    for i in 1..=9 {
        let v = i as f64 / 10.0;
        let got = frullani_exchange_integral(nu(v), 1, 40.0, 1e-11).unwrap();
        let want = rhs_closed(IdentityId::Series2, nu(v)).unwrap().re();
        assert!(
            (got.value - want).abs() < 1e-8,
            "nu = {v}: {} vs {want}",
            got.value
        );
    }
}

#[test]
fn integrand_limit_at_zero() {
    for v in [0.1, 0.3, 0.5, 0.9] {
        for scale in [1u8, 2] {
            let f = FrullaniIntegrand::new(scale, nu(v)).unwrap();
            let near = f.eval(1e-7);
            assert!(
                (near - f.limit_at_zero()).abs() < 1e-6,
                "nu = {v}, scale = {scale}"
            );
            assert_eq!(f.eval(0.0), f.limit_at_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn frullani_recovers_log_ratio(a in 0.5f64..5.0, b in 0.5f64..5.0) {
        let cfg = QuadratureConfig::new(1e-11);
        let got = frullani_log_check(a, b, &cfg).unwrap();
        prop_assert!((got - (b / a).ln()).abs() < 1e-9);
    }

    #[test]
    fn integrand_is_finite(v in 0.001f64..0.999, x in 0.0f64..60.0, scale in 1u8..=2) {
        let f = FrullaniIntegrand::new(scale, nu(v)).unwrap();
        prop_assert!(f.eval(x).is_finite());
    }
}
