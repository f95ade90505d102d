//! Adaptive Gauss–Kronrod integration on finite intervals, and the
//! semi-infinite Frullani-type integrals built on top of it.
//!
//! Semi-infinite integrals are truncated at a point `X` where an analytic
//! tail bound already falls below half the tolerance; the other half of the
//! budget goes to the adaptive rule on `[0, X]`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::series_engine::{EvalResult, Method, NuValue};

/// Integrals are not attempted with ν closer than this to 0 or 1.
pub const NU_EXCLUSION: f64 = 1e-3;

/// Smallest tolerance a configuration may request.
pub const MIN_TOL: f64 = 1e-13;

/// Constant `C` in the tail bound |g(x)| ≤ C e^{-x}/x (valid for x ≥ ln 4)
/// shared by both Frullani integrands.
const FRULLANI_TAIL_CONST: f64 = 6.0;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Settings for semi-infinite integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance.
    pub tol: f64,
    /// Upper limit `X` of the truncated range `[0, X]`.
    pub truncation: f64,
    pub max_subdivisions: usize,
}

impl QuadratureConfig {
    /// A configuration whose truncation point satisfies the Frullani tail
    /// bound for `tol`.
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            truncation: frullani_truncation(tol),
            max_subdivisions: 2000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= MIN_TOL) || !self.tol.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "quadrature tolerance {:e} must be finite and at least {MIN_TOL:e}",
                self.tol
            )));
        }
        if !(self.truncation > 0.0) || !self.truncation.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "truncation point {} must be positive",
                self.truncation
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidSpec(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Analytic bound on the discarded Frullani tail beyond the truncation.
    pub fn tail_bound(&self) -> f64 {
        frullani_tail_bound(self.truncation)
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::new(1e-10)
    }
}

/// Outcome of a finite-interval integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: u64,
    pub subdivisions: usize,
}

fn frullani_tail_bound(x: f64) -> f64 {
    let x = x.max(4f64.ln());
    FRULLANI_TAIL_CONST * (-x).exp() / x
}

fn frullani_truncation(tol: f64) -> f64 {
    let target = 0.5 * tol;
    let mut x: f64 = 4f64.ln();
    // Fixed point of x = ln(C / (target x)); converges in a handful of steps.
    for _ in 0..50 {
        let next = (FRULLANI_TAIL_CONST / (target * x)).ln().max(4f64.ln());
        if (next - x).abs() < 1e-12 {
            break;
        }
        x = next;
    }
    while frullani_tail_bound(x) > target {
        x += 0.5;
    }
    x
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    Segment {
        a,
        b,
        value: kronrod * half,
        error: rescale_error(
            (kronrod - gauss) * half,
            res_abs * abs_half,
            res_asc * abs_half,
        ),
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by globally
/// adaptive bisection with the 21-point Gauss–Kronrod rule.
///
/// `f` is never evaluated at the endpoints.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("integration bounds must be finite"));
    }
    let mut segments = vec![gauss_kronrod_21(&f, a, b)];
    let mut evaluations = 21;
    loop {
        let (value, error) = segments
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() {
            return Err(Error::Quadrature {
                estimate: f64::INFINITY,
                tol,
                subdivisions: segments.len(),
            });
        }
        if error <= tol {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
                subdivisions: segments.len(),
            });
        }
        if segments.len() >= max_subdivisions {
            return Err(Error::Quadrature {
                estimate: error,
                tol,
                subdivisions: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: error,
                tol,
                subdivisions: segments.len() + 1,
            });
        }
        segments.push(gauss_kronrod_21(&f, seg.a, mid));
        segments.push(gauss_kronrod_21(&f, mid, seg.b));
        evaluations += 42;
    }
}

/// Numerically checks Frullani's theorem for f = exp(−·):
/// ∫₀^∞ (e^{-ax} − e^{-bx}) dx/x, which should equal log(b/a).
pub fn frullani_log_check(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(domain(format!(
            "Frullani rates must be positive, got ({a}, {b})"
        )));
    }
    cfg.validate()?;
    if a == b {
        return Ok(0.0);
    }
    let slow = a.min(b);
    // |e^{-ax} − e^{-bx}|/x ≤ e^{-slow x}/x, whose tail is below e^{-slow X}/(slow X).
    let target = 0.5 * cfg.tol;
    let mut upper = 1.0 / slow;
    while (-slow * upper).exp() / (slow * upper) > target {
        upper *= 1.25;
    }
    let rate_gap = b - a;
    let integrand = move |x: f64| -(-a * x).exp() * (-rate_gap * x).exp_m1() / x;
    let res = integrate_adaptive(integrand, 0.0, upper, target, cfg.max_subdivisions)?;
    Ok(res.value)
}

/// One of the two integrands of the form
/// sinh(x) e^{-sx} (e^{-sx} − 2 cos 2νπ) / (x (cosh sx − cos 2νπ)), s ∈ {1, 2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrullaniIntegrand {
    pub scale: u8,
    pub nu: NuValue,
}

impl FrullaniIntegrand {
    pub fn new(scale: u8, nu: NuValue) -> Result<Self> {
        if scale != 1 && scale != 2 {
            return Err(domain(format!(
                "integrand scale must be 1 or 2, got {scale}"
            )));
        }
        Ok(Self { scale, nu })
    }

    /// Value at x = 0, the limit (1 − 2c)/(1 − c) with c = cos 2νπ.
    pub fn limit_at_zero(&self) -> f64 {
        let c = (2.0 * PI * self.nu.value()).cos();
        let one_minus_c = 2.0 * (PI * self.nu.value()).sin().powi(2);
        (1.0 - 2.0 * c) / one_minus_c
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return self.limit_at_zero();
        }
        let s = f64::from(self.scale);
        let theta = PI * self.nu.value();
        let c = (2.0 * theta).cos();
        let decay = (-s * x).exp();
        // cosh(sx) − cos(2θ) = 2 sinh²(sx/2) + 2 sin²θ, free of cancellation.
        let denom = 2.0 * (0.5 * s * x).sinh().powi(2) + 2.0 * theta.sin().powi(2);
        let sinhc = if x.abs() < 1e-8 { 1.0 } else { x.sinh() / x };
        sinhc * decay * (decay - 2.0 * c) / denom
    }
}

/// ∫₀^∞ of a [`FrullaniIntegrand`]. The error estimate includes the
/// truncated tail.
pub fn integrate_frullani(f: &FrullaniIntegrand, cfg: &QuadratureConfig) -> Result<EvalResult> {
    cfg.validate()?;
    let nu = f.nu.value();
    if !(NU_EXCLUSION..=1.0 - NU_EXCLUSION).contains(&nu) {
        return Err(domain(format!(
            "nu = {nu} lies within {NU_EXCLUSION:e} of an endpoint; the integral is not evaluated there"
        )));
    }
    let tail = cfg.tail_bound();
    if tail > 0.5 * cfg.tol {
        return Err(Error::InvalidSpec(format!(
            "truncation {} leaves tail bound {tail:e} above half the tolerance {:e}",
            cfg.truncation, cfg.tol
        )));
    }
    let budget = cfg.tol - tail;
    let res = integrate_adaptive(
        |x| f.eval(x),
        0.0,
        cfg.truncation,
        budget,
        cfg.max_subdivisions,
    )?;
    Ok(EvalResult::real(
        res.value,
        res.error + tail,
        res.evaluations,
        Method::Quad,
    ))
}

/// Closed form of Σ_{k≥2} e^{-skx} sin(2kνπ).
pub fn kernel_geom_sum(x: f64, nu: NuValue, scale: u8) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("kernel sum needs x > 0, got {x}")));
    }
    if scale == 0 {
        return Err(domain("kernel scale must be positive"));
    }
    let s = f64::from(scale);
    let theta = PI * nu.value();
    let decay = (-s * x).exp();
    let denom = 2.0 * (0.5 * s * x).sinh().powi(2) + 2.0 * theta.sin().powi(2);
    Ok(0.5 * decay * (2.0 * theta).sin() * (2.0 * (2.0 * theta).cos() - decay) / denom)
}

/// ∫₀^X (−2 sinh x / x) Σ_{k≥2} e^{-skx} sin(2kνπ) dx, the summed form of the
/// term-by-term Frullani integrals, truncated at `upper`.
pub fn frullani_exchange_integral(
    nu: NuValue,
    scale: u8,
    upper: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(upper > 0.0) {
        return Err(domain("upper limit must be positive"));
    }
    let integrand = |x: f64| {
        let sinhc = if x < 1e-8 { 1.0 } else { x.sinh() / x };
        -2.0 * sinhc * kernel_geom_sum(x, nu, scale).unwrap_or(0.0)
    };
    integrate_adaptive(integrand, 0.0, upper, tol, 4000)
}
