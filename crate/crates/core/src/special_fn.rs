//! Real digamma and log-gamma functions.
//!
//! Both functions shift the argument upward with their recurrences until it
//! clears [`ASYMPTOTIC_THRESHOLD`], then sum the Bernoulli-number asymptotic
//! series. Only positive real arguments are supported.

use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Result};
use crate::quadrature::{integrate_adaptive, QuadratureConfig};

/// Euler–Mascheroni constant, γ = −ψ(1).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Arguments are shifted by the recurrence until they are at least this large.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// B_{2k} / (2k) for k = 1..7, the coefficients of x^{-2k} in ψ(x).
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// B_{2k} / (2k (2k-1)) for k = 1..7, the coefficients of x^{1-2k} in log Γ(x).
const LOG_GAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

/// The fixed constants the closed forms are assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub euler_gamma: f64,
    pub pi: f64,
    pub log2: f64,
}

pub const CONSTANTS: Constants = Constants {
    euler_gamma: EULER_GAMMA,
    pi: PI,
    log2: LN_2,
};

/// A finite real argument, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealArg(f64);

impl RealArg {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(domain(format!("argument {value} is not finite")))
        }
    }

    /// A finite, strictly positive argument as required by ψ and log Γ.
    pub fn positive(value: f64) -> Result<Self> {
        let arg = Self::new(value)?;
        if value > 0.0 {
            Ok(arg)
        } else {
            Err(domain(format!("argument {value} must be positive")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Digamma function ψ(z) = Γ′(z)/Γ(z) for z > 0.
pub fn digamma(z: f64) -> Result<f64> {
    let mut x = RealArg::positive(z)?.value();
    // Accumulate the shifted terms separately so the small ones are not lost.
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = DIGAMMA_ASYMP
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c)
        * inv2;
    Ok(x.ln() - 0.5 / x - series - shift)
}

/// log Γ(z) for z > 0.
pub fn log_gamma(z: f64) -> Result<f64> {
    let mut x = RealArg::positive(z)?.value();
    let mut product = 1.0;
    while x < ASYMPTOTIC_THRESHOLD {
        product *= x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = LOG_GAMMA_ASYMP
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c)
        * inv;
    let stirling = (x - 0.5) * x.ln() - x + HALF_LN_2PI + series;
    Ok(stirling - product.ln())
}

/// Evaluates ψ(z) = ∫₀^∞ (e^{-t}/t − e^{-zt}/(1 − e^{-t})) dt by quadrature.
///
/// This is an independent cross-check of [`digamma`], not a replacement. The
/// range is split at t = 1. The head uses a Taylor expansion close to t = 0
/// where the two terms cancel. The tail is mapped onto a finite interval with
/// u = e^{-mt}, m = min(z, 1), which keeps the transformed integrand bounded.
pub fn digamma_integral_check(z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let z = RealArg::positive(z)?.value();
    cfg.validate()?;

    let head_fn = |t: f64| {
        if t < 1e-4 {
            z - 1.5 + t * (5.0 / 12.0 + 0.5 * z - 0.5 * z * z)
        } else {
            (-t).exp() / t - (-z * t).exp() / -(-t).exp_m1()
        }
    };
    let head = integrate_adaptive(head_fn, 0.0, 1.0, 0.5 * cfg.tol, cfg.max_subdivisions)?;

    let m = z.min(1.0);
    let tail_fn = |u: f64| {
        let t = -u.ln() / m;
        let a = (-(1.0 - m) * t).exp() / t;
        let b = (-(z - m) * t).exp() / -(-t).exp_m1();
        (a - b) / m
    };
    let tail = integrate_adaptive(
        tail_fn,
        0.0,
        (-m).exp(),
        0.5 * cfg.tol,
        cfg.max_subdivisions,
    )?;

    Ok(head.value + tail.value)
}
