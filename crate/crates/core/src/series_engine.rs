//! Evaluation of slowly convergent oscillatory series.
//!
//! The series handled here have the shape Σ a_k·t_k, where t_k is one of
//! sin(2kνπ), cos(2kνπ), sin((2k+1)νπ), cos((2k+1)νπ) and a_k decays like
//! 1/k or 1/k². Writing t_k as the real or imaginary part of w·z^k with
//! z = e^{2πiν}, the sum splits into
//!
//! * a head Σ_{k ≤ K}, evaluated by Abel summation by parts against the
//!   closed-form partial sums of t_k ([`dirichlet_partial`]), and
//! * a tail Σ_{k > K} a_k z^k, expanded by repeated summation by parts into
//!   boundary terms in the backward differences ∇^j a_{K+1+j}. The remainder
//!   after r terms is bounded by |∇^{r-1} a|/|1 − z|^r, which holds whenever the
//!   r-th differences keep one sign (true for the completely monotone
//!   logarithmic coefficients of the catalog).
//!
//! Cesàro averaging ([`cesaro_sum`]) is kept as an independent, slower oracle.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Upper limit on coefficient evaluations for a single accelerated sum.
pub const WORK_CEILING: u64 = 1_000_000;

/// Highest order of the tail expansion.
const MAX_TAIL_ORDER: usize = 10;

/// Number of trailing averaged values whose spread enters the Cesàro estimate.
const CESARO_WINDOW: usize = 10;

/// The parameter ν, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NuValue(f64);

impl NuValue {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(domain(format!(
                "nu = {value} must lie strictly inside (0, 1)"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for NuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The oscillating factor multiplying each coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Oscillation {
    /// sin(2kνπ)
    Sin2k,
    /// cos(2kνπ)
    Cos2k,
    /// sin((2k+1)νπ)
    Sin2k1,
    /// cos((2k+1)νπ)
    Cos2k1,
}

impl Oscillation {
    fn is_sine(self) -> bool {
        matches!(self, Oscillation::Sin2k | Oscillation::Sin2k1)
    }

    /// Offset δ in units of νπ: the argument is (2k + δ)νπ.
    fn offset(self) -> u64 {
        match self {
            Oscillation::Sin2k | Oscillation::Cos2k => 0,
            Oscillation::Sin2k1 | Oscillation::Cos2k1 => 1,
        }
    }

    /// t_k evaluated with exact argument reduction.
    pub fn term(self, nu: NuValue, k: u64) -> f64 {
        let (s, c) = sin_cos_pi_multiple(2 * k + self.offset(), nu.value());
        if self.is_sine() {
            s
        } else {
            c
        }
    }

    fn project(self, z: Complex64) -> f64 {
        if self.is_sine() {
            z.im
        } else {
            z.re
        }
    }
}

pub type Coefficient = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// A series Σ_{k ≥ start} coeff(k)·t_k.
#[derive(Clone)]
pub struct SeriesSpec {
    pub coeff: Coefficient,
    pub oscillation: Oscillation,
    pub start: u64,
}

impl SeriesSpec {
    pub fn new(
        coeff: impl Fn(u64) -> f64 + Send + Sync + 'static,
        oscillation: Oscillation,
        start: u64,
    ) -> Result<Self> {
        if start < 1 {
            return Err(Error::InvalidSpec(
                "series start index must be at least 1".into(),
            ));
        }
        Ok(Self {
            coeff: Arc::new(coeff),
            oscillation,
            start,
        })
    }

    pub fn coeff(&self, k: u64) -> f64 {
        (self.coeff)(k)
    }
}

impl fmt::Debug for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesSpec")
            .field("oscillation", &self.oscillation)
            .field("start", &self.start)
            .finish_non_exhaustive()
    }
}

/// A real or complex evaluated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(Complex64),
}

impl Value {
    pub fn re(self) -> f64 {
        match self {
            Value::Real(x) => x,
            Value::Complex(z) => z.re,
        }
    }

    /// Imaginary part, or `None` for a real value.
    pub fn im(self) -> Option<f64> {
        match self {
            Value::Real(_) => None,
            Value::Complex(z) => Some(z.im),
        }
    }

    pub fn as_complex(self) -> Complex64 {
        match self {
            Value::Real(x) => Complex64::new(x, 0.0),
            Value::Complex(z) => z,
        }
    }

    /// |self − other|, the complex modulus when either side is complex.
    pub fn distance(self, other: Value) -> f64 {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => (a - b).abs(),
            _ => (self.as_complex() - other.as_complex()).norm(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => write!(f, "{x}"),
            Value::Complex(z) => write!(
                f,
                "{} {} {}i",
                z.re,
                if z.im < 0.0 { '-' } else { '+' },
                z.im.abs()
            ),
        }
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    Cesaro,
    Parts,
    Kernel,
    Quad,
    Closed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Cesaro => "cesaro",
            Method::Parts => "parts",
            Method::Kernel => "kernel",
            Method::Quad => "quad",
            Method::Closed => "closed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed value with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Value,
    pub error_estimate: f64,
    pub work: u64,
    pub method: Method,
}

impl EvalResult {
    pub fn real(value: f64, error_estimate: f64, work: u64, method: Method) -> Self {
        Self {
            value: Value::Real(value),
            error_estimate: error_estimate.max(0.0),
            work,
            method,
        }
    }

    pub fn complex(value: Complex64, error_estimate: f64, work: u64, method: Method) -> Self {
        Self {
            value: Value::Complex(value),
            error_estimate: error_estimate.max(0.0),
            work,
            method,
        }
    }

    pub fn closed(value: f64) -> Self {
        Self::real(
            value,
            4.0 * f64::EPSILON * value.abs().max(1.0),
            1,
            Method::Closed,
        )
    }

    pub fn re(&self) -> f64 {
        self.value.re()
    }
}

/// sin and cos of m·ν·π, reducing m·ν modulo 2 without losing the low bits
/// of the product.
pub fn sin_cos_pi_multiple(m: u64, nu: f64) -> (f64, f64) {
    let m = m as f64;
    let hi = m * nu;
    let lo = m.mul_add(nu, -hi);
    let mut r = hi % 2.0 + lo;
    r -= 2.0 * (0.5 * r).round();
    (PI * r).sin_cos()
}

/// e^{2πiνk}
fn unit_power(nu: f64, k: u64) -> Complex64 {
    let (s, c) = sin_cos_pi_multiple(2 * k, nu);
    Complex64::new(c, s)
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Closed-form Σ_{k=start}^{last} t_k.
///
/// Uses 2 sin(νπ)·t_k = f((2k+1+δ)νπ) − f((2k−1+δ)νπ), which telescopes.
/// `last = start − 1` gives the empty sum.
pub fn dirichlet_partial(
    oscillation: Oscillation,
    nu: NuValue,
    start: u64,
    last: u64,
) -> Result<f64> {
    if start < 1 {
        return Err(domain("start index must be at least 1"));
    }
    if last + 1 < start {
        return Err(domain(format!("last index {last} precedes start {start}")));
    }
    let kernel = DirichletKernel::new(oscillation, nu, start)?;
    Ok(kernel.partial(last))
}

struct DirichletKernel {
    oscillation: Oscillation,
    nu: f64,
    lower: f64,
    denom: f64,
}

impl DirichletKernel {
    fn new(oscillation: Oscillation, nu: NuValue, start: u64) -> Result<Self> {
        let denom = 2.0 * (PI * nu.value()).sin();
        if denom == 0.0 {
            return Err(domain("Dirichlet kernel denominator vanishes"));
        }
        let (s, c) = sin_cos_pi_multiple(2 * start - 1 + oscillation.offset(), nu.value());
        let lower = if oscillation.is_sine() { c } else { s };
        Ok(Self {
            oscillation,
            nu: nu.value(),
            lower,
            denom,
        })
    }

    fn partial(&self, last: u64) -> f64 {
        let (s, c) = sin_cos_pi_multiple(2 * last + 1 + self.oscillation.offset(), self.nu);
        if self.oscillation.is_sine() {
            (self.lower - c) / self.denom
        } else {
            (s - self.lower) / self.denom
        }
    }

    /// Largest possible |partial sum|.
    fn sup(&self) -> f64 {
        2.0 / self.denom
    }
}

struct Tail {
    value: Complex64,
    estimate: f64,
    evaluations: u64,
}

/// Σ_{k ≥ n} b_k z^k by the iterated summation-by-parts expansion
///
/// Σ_{j<r} ∇^j b_{n+j} z^{n+j} / (1 − z)^{j+1} + remainder,
///
/// choosing r to minimise the remainder bound plus rounding.
fn geometric_tail(
    b: &dyn Fn(u64) -> f64,
    z_pow: &dyn Fn(u64) -> Complex64,
    one_minus_z: Complex64,
    n: u64,
) -> Tail {
    let values: Vec<f64> = (0..=MAX_TAIL_ORDER as u64).map(|i| b(n + i)).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // diffs[j] = ∇^j b at index n + j
    let mut row = values.clone();
    let mut diffs = Vec::with_capacity(MAX_TAIL_ORDER + 1);
    diffs.push(row[0]);
    for j in 1..=MAX_TAIL_ORDER {
        for i in (j..row.len()).rev() {
            row[i] -= row[i - 1];
        }
        diffs.push(row[j]);
    }

    let inv = 1.0 / one_minus_z;
    let inv_abs = inv.norm();
    let mut best: Option<(usize, f64)> = None;
    let mut rounding = 0.0;
    let mut inv_pow = inv_abs;
    for r in 1..=MAX_TAIL_ORDER {
        rounding += f64::powi(2.0, r as i32) * f64::EPSILON * scale * inv_pow;
        let remainder = 2.0 * diffs[r - 1].abs() * inv_pow;
        let est = remainder + rounding;
        if best.map_or(true, |(_, e)| est < e) {
            best = Some((r, est));
        }
        inv_pow *= inv_abs;
    }
    let (order, estimate) = best.expect("at least one order is tried");

    let mut value = Complex64::new(0.0, 0.0);
    let mut factor = inv;
    for (j, d) in diffs.iter().take(order).enumerate() {
        value += *d * z_pow(n + j as u64) * factor;
        factor *= inv;
    }
    Tail {
        value,
        estimate,
        evaluations: values.len() as u64,
    }
}

/// Doubles the head length until the tail estimate fits in half of `tol`.
fn choose_head(start: u64, tol: f64, tail_at: &dyn Fn(u64) -> Tail) -> Result<(u64, Tail, u64)> {
    let mut last = start.max(32);
    let mut work = 0;
    loop {
        let tail = tail_at(last + 1);
        work += tail.evaluations;
        if tail.estimate <= 0.5 * tol {
            return Ok((last, tail, work));
        }
        let next = 2 * last;
        if next + work + MAX_TAIL_ORDER as u64 > WORK_CEILING {
            return Err(Error::NonConvergence {
                estimate: tail.estimate,
                tol,
                work: work + last,
            });
        }
        last = next;
    }
}

/// Sums `spec` by Abel summation by parts with an analytic tail.
pub fn sum_by_parts(spec: &SeriesSpec, nu: NuValue, tol: f64) -> Result<EvalResult> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let start = spec.start;
    let v = nu.value();
    let z = unit_power(v, 1);
    let one_minus_z = Complex64::new(1.0, 0.0) - z;
    let w = if spec.oscillation.offset() == 1 {
        let (s, c) = (PI * v).sin_cos();
        Complex64::new(c, s)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let coeff = |k: u64| spec.coeff(k);
    let z_pow = |k: u64| unit_power(v, k);
    let tail_at = |n: u64| geometric_tail(&coeff, &z_pow, one_minus_z, n);
    let (last, tail, tail_work) = choose_head(start, tol, &tail_at)?;

    // Σ_{k=s}^{K} a_k t_k = a_K D_K − Σ_{k=s}^{K−1} (a_{k+1} − a_k) D_k
    let kernel = DirichletKernel::new(spec.oscillation, nu, start)?;
    let mut head = CompensatedSum::default();
    let mut magnitude = 0.0;
    let mut a_k = spec.coeff(start);
    for k in start..last {
        let a_next = spec.coeff(k + 1);
        let d_k = kernel.partial(k);
        head.add(-(a_next - a_k) * d_k);
        magnitude += a_k.abs();
        a_k = a_next;
    }
    head.add(a_k * kernel.partial(last));
    magnitude += a_k.abs();
    let head_rounding = 4.0 * f64::EPSILON * magnitude * (kernel.sup() + 1.0);

    let estimate = tail.estimate + head_rounding;
    let work = tail_work + (last - start + 1);
    if estimate > tol {
        return Err(Error::NonConvergence {
            estimate,
            tol,
            work,
        });
    }
    let value = head.value() + spec.oscillation.project(w * tail.value);
    if !value.is_finite() {
        return Err(Error::NonConvergence {
            estimate: f64::INFINITY,
            tol,
            work,
        });
    }
    Ok(EvalResult::real(value, estimate, work, Method::Parts))
}

/// Running Cesàro means of a sequence of partial sums.
#[derive(Debug, Clone)]
struct CesaroMeans {
    order: u32,
    count: u64,
    first: CompensatedSum,
    second: CompensatedSum,
    window: Vec<f64>,
    history_mid: Option<f64>,
    mid_index: u64,
}

impl CesaroMeans {
    fn new(order: u32, total: u64) -> Self {
        Self {
            order,
            count: 0,
            first: CompensatedSum::default(),
            second: CompensatedSum::default(),
            window: Vec::with_capacity(CESARO_WINDOW),
            history_mid: None,
            mid_index: total / 2,
        }
    }

    fn push(&mut self, partial: f64) {
        self.count += 1;
        self.first.add(partial);
        self.second.add(self.first.value());
        let n = self.count as f64;
        let mean = match self.order {
            1 => self.first.value() / n,
            _ => self.second.value() / (0.5 * n * (n + 1.0)),
        };
        if self.window.len() == CESARO_WINDOW {
            self.window.remove(0);
        }
        self.window.push(mean);
        if self.count == self.mid_index {
            self.history_mid = Some(mean);
        }
    }

    /// Final mean and its error estimate.
    ///
    /// For σ_n ≈ S + L/n the gap σ_{N/2} − σ_N equals the leading error at N,
    /// which the short trailing window alone cannot see.
    fn finish(&self) -> (f64, f64) {
        let last = *self.window.last().expect("at least one partial sum");
        let (lo, hi) = self
            .window
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        let spread = hi - lo;
        let drift = self.history_mid.map_or(0.0, |mid| 2.0 * (mid - last).abs());
        (last, spread.max(drift))
    }
}

/// Order-`order` Cesàro mean of the partial sums S_start, …, S_last.
///
/// The error estimate is the larger of the spread of the last ten means and
/// twice the change in the mean since the halfway point.
pub fn cesaro_sum(spec: &SeriesSpec, nu: NuValue, order: u32, last: u64) -> Result<EvalResult> {
    if order != 1 && order != 2 {
        return Err(Error::InvalidSpec(format!(
            "Cesàro order must be 1 or 2, got {order}"
        )));
    }
    if last < spec.start + CESARO_WINDOW as u64 {
        return Err(Error::InvalidSpec(format!(
            "Cesàro truncation {last} must be at least start + {CESARO_WINDOW}"
        )));
    }
    let count = last - spec.start + 1;
    let mut means = CesaroMeans::new(order, count);
    let mut partial = CompensatedSum::default();
    for k in spec.start..=last {
        partial.add(spec.coeff(k) * spec.oscillation.term(nu, k));
        means.push(partial.value());
    }
    let (value, estimate) = means.finish();
    Ok(EvalResult::real(value, estimate, count, Method::Cesaro))
}

/// Plain partial sum Σ_{k=start}^{last} a_k t_k.
pub fn naive_partial_sum(spec: &SeriesSpec, nu: NuValue, last: u64) -> f64 {
    let mut sum = CompensatedSum::default();
    for k in spec.start..=last {
        sum.add(spec.coeff(k) * spec.oscillation.term(nu, k));
    }
    sum.value()
}

/// Symmetric partial sum Σ′_{k=−N}^{N} term(k), k = 0 excluded, with each
/// +k term paired with its −k partner before accumulation.
pub fn bilateral_symmetric_sum<F: Fn(i64) -> Complex64>(term: F, n: u64) -> Complex64 {
    let mut sum = ComplexSum::default();
    for k in 1..=n as i64 {
        sum.add(term(k) + term(-k));
    }
    sum.value()
}

/// Cesàro (order 1) mean of the symmetric partial sums P_1, …, P_N.
pub fn bilateral_symmetric_mean<F: Fn(i64) -> Complex64>(term: F, n: u64) -> Result<EvalResult> {
    if n < CESARO_WINDOW as u64 {
        return Err(Error::InvalidSpec(format!(
            "bilateral truncation {n} must be at least {CESARO_WINDOW}"
        )));
    }
    let mut sum = ComplexSum::default();
    let mut re = CesaroMeans::new(1, n);
    let mut im = CesaroMeans::new(1, n);
    for k in 1..=n as i64 {
        sum.add(term(k) + term(-k));
        let p = sum.value();
        re.push(p.re);
        im.push(p.im);
    }
    let (vr, er) = re.finish();
    let (vi, ei) = im.finish();
    Ok(EvalResult::complex(
        Complex64::new(vr, vi),
        er.hypot(ei),
        n,
        Method::Cesaro,
    ))
}

/// Σ_{n≥0} e^{−2πix(ν+n)} / (ν+n) for 0 < x < 1.
///
/// The head is summed by parts against the geometric partial sums of
/// e^{−2πixn}; the tail uses the same expansion as [`sum_by_parts`].
pub fn lerch_tail_sum(x: f64, nu: NuValue, tol: f64) -> Result<EvalResult> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("x = {x} must lie strictly inside (0, 1)")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let v = nu.value();
    let coeff = |n: u64| 1.0 / (v + n as f64);
    let zeta_pow = |n: u64| unit_power(x, n).conj();
    let zeta = zeta_pow(1);
    let one_minus_zeta = Complex64::new(1.0, 0.0) - zeta;
    let tail_at = |n: u64| geometric_tail(&coeff, &zeta_pow, one_minus_zeta, n);
    let (last, tail, tail_work) = choose_head(0, tol, &tail_at)?;

    // G_n = Σ_{j=0}^{n} ζ^j = (1 − ζ^{n+1}) / (1 − ζ)
    let geometric = |n: u64| (Complex64::new(1.0, 0.0) - zeta_pow(n + 1)) / one_minus_zeta;
    let mut head = ComplexSum::default();
    let mut magnitude = 0.0;
    let mut b_n = coeff(0);
    for n in 0..last {
        let b_next = coeff(n + 1);
        head.add(-(b_next - b_n) * geometric(n));
        magnitude += b_n.abs();
        b_n = b_next;
    }
    head.add(b_n * geometric(last));
    magnitude += b_n.abs();
    let head_rounding = 4.0 * f64::EPSILON * magnitude * (2.0 / one_minus_zeta.norm() + 1.0);

    let estimate = tail.estimate + head_rounding;
    let work = tail_work + last + 1;
    if estimate > tol {
        return Err(Error::NonConvergence {
            estimate,
            tol,
            work,
        });
    }
    let (s, c) = (2.0 * PI * x * v).sin_cos();
    let phase = Complex64::new(c, -s);
    Ok(EvalResult::complex(
        phase * (head.value() + tail.value),
        estimate,
        work,
        Method::Parts,
    ))
}

/// Σ_{k ≥ start} term(k) for a non-oscillating, absolutely convergent series
/// whose partial sums have an asymptotic expansion in powers of 1/K.
///
/// Partial sums at K = base·2^j, j = 0..=levels, are combined by Richardson
/// extrapolation; the error estimate is twice the last correction.
pub fn richardson_sum<F: Fn(u64) -> f64>(
    term: F,
    start: u64,
    base: u64,
    levels: usize,
) -> Result<EvalResult> {
    if base <= start || levels == 0 {
        return Err(Error::InvalidSpec(
            "Richardson needs base > start and at least one level".into(),
        ));
    }
    let mut partials = Vec::with_capacity(levels + 1);
    let mut sum = CompensatedSum::default();
    let mut k = start;
    let mut magnitude = 0.0;
    for j in 0..=levels {
        let upto = base << j;
        while k <= upto {
            let t = term(k);
            magnitude += t.abs();
            sum.add(t);
            k += 1;
        }
        partials.push(sum.value());
    }
    let (value, correction) = richardson_table(&partials);
    let rounding = 4.0 * f64::EPSILON * magnitude;
    Ok(EvalResult::real(
        value,
        2.0 * correction + rounding,
        k - start,
        Method::Naive,
    ))
}

/// Neville table for values sampled at h, h/2, h/4, … with an error expansion
/// in integer powers of h. Returns the extrapolated value and the size of the
/// last correction.
pub(crate) fn richardson_table(samples: &[f64]) -> (f64, f64) {
    let mut table = samples.to_vec();
    let mut correction = 0.0;
    for m in 1..samples.len() {
        let factor = f64::powi(2.0, m as i32) - 1.0;
        for j in (m..samples.len()).rev() {
            table[j] += (table[j] - table[j - 1]) / factor;
        }
        correction = (table[samples.len() - 1] - table[samples.len() - 2]).abs();
    }
    (table[samples.len() - 1], correction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(v: f64) -> NuValue {
        NuValue::new(v).unwrap()
    }

    fn brute_dirichlet(osc: Oscillation, v: f64, start: u64, last: u64) -> f64 {
        (start..=last)
            .map(|k| {
                let m = (2 * k + osc.offset()) as f64;
                if osc.is_sine() {
                    (m * v * PI).sin()
                } else {
                    (m * v * PI).cos()
                }
            })
            .sum()
    }

    #[test]
    fn nu_rejects_endpoints() {
        for v in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(NuValue::new(v).is_err());
        }
        assert!(NuValue::new(1e-12).is_ok());
    }

    #[test]
    fn exact_phase_reduction() {
        let (s, c) = sin_cos_pi_multiple(3, 0.5);
        assert!((s + 1.0).abs() < 1e-15 && c.abs() < 1e-15);
        // m ν is an exact even integer here
        let (s, c) = sin_cos_pi_multiple(4_000_000, 0.25);
        assert!(s.abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        // sin(kπ/2) for k = 2..5 is 0, −1, 0, 1
        let brute = brute_dirichlet(Oscillation::Sin2k, 0.25, 2, 5);
        assert!(brute.abs() < 1e-15);
        assert!(
            dirichlet_partial(Oscillation::Sin2k, nu(0.25), 2, 5)
                .unwrap()
                .abs()
                < 1e-15
        );
        let v = dirichlet_partial(Oscillation::Cos2k, nu(0.5), 2, 4).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let v = dirichlet_partial(Oscillation::Sin2k, nu(0.37), 2, 2).unwrap();
        assert!((v - (4.0 * 0.37 * PI).sin()).abs() < 1e-15);
        assert_eq!(
            dirichlet_partial(Oscillation::Cos2k1, nu(0.37), 5, 4).unwrap(),
            0.0
        );
        assert!(dirichlet_partial(Oscillation::Cos2k1, nu(0.37), 5, 2).is_err());
    }

    #[test]
    fn dirichlet_matches_brute_force() {
        for osc in [
            Oscillation::Sin2k,
            Oscillation::Cos2k,
            Oscillation::Sin2k1,
            Oscillation::Cos2k1,
        ] {
            for v in [0.01, 0.3, 0.5, 0.71, 0.999] {
                for (s, l) in [(1, 1), (1, 40), (2, 333), (7, 1000)] {
                    let closed = dirichlet_partial(osc, nu(v), s, l).unwrap();
                    let brute = brute_dirichlet(osc, v, s, l);
                    assert!((closed - brute).abs() < 1e-10, "{osc:?} nu={v} {s}..{l}");
                }
            }
        }
    }

    #[test]
    fn zero_series() {
        let spec = SeriesSpec::new(|_| 0.0, Oscillation::Sin2k, 2).unwrap();
        let r = sum_by_parts(&spec, nu(0.3), 1e-10).unwrap();
        assert_eq!(r.re(), 0.0);
        let r = cesaro_sum(&spec, nu(0.3), 1, 100).unwrap();
        assert_eq!(r.re(), 0.0);
    }

    #[test]
    fn geometric_coefficients_have_closed_sum() {
        // a_k = r^k: Σ_{k≥1} r^k cos(2kθ) = Re(rz/(1 − rz))
        let r = 0.9f64;
        let v = 0.2;
        let spec = SeriesSpec::new(move |k| r.powi(k as i32), Oscillation::Cos2k, 1).unwrap();
        let z = Complex64::from_polar(r, 2.0 * PI * v);
        let exact = (z / (1.0 - z)).re;
        let got = sum_by_parts(&spec, nu(v), 1e-12).unwrap();
        assert!((got.re() - exact).abs() < 1e-12);
    }

    #[test]
    fn harmonic_sine_series() {
        // Σ_{k≥1} sin(2kθ)/k = (π − 2θ)/2 for 0 < θ < π
        for v in [0.05, 0.3, 0.5, 0.9] {
            let spec = SeriesSpec::new(|k| 1.0 / k as f64, Oscillation::Sin2k, 1).unwrap();
            let got = sum_by_parts(&spec, nu(v), 1e-11).unwrap();
            let exact = (PI - 2.0 * PI * v) / 2.0;
            assert!(
                (got.re() - exact).abs() < 1e-11,
                "nu={v}: {} vs {exact}",
                got.re()
            );
            assert!(got.error_estimate <= 1e-11);
        }
    }

    #[test]
    fn sum_by_parts_rejects_bad_tolerance() {
        let spec = SeriesSpec::new(|k| 1.0 / k as f64, Oscillation::Sin2k, 1).unwrap();
        assert!(sum_by_parts(&spec, nu(0.3), 0.0).is_err());
        assert!(matches!(
            sum_by_parts(&spec, nu(0.3), 1e-30),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn cesaro_preconditions() {
        let spec = SeriesSpec::new(|k| 1.0 / k as f64, Oscillation::Sin2k, 2).unwrap();
        assert!(cesaro_sum(&spec, nu(0.3), 3, 1000).is_err());
        assert!(cesaro_sum(&spec, nu(0.3), 1, 11).is_err());
        assert!(cesaro_sum(&spec, nu(0.3), 1, 12).is_ok());
    }

    #[test]
    fn cesaro_order_two_on_harmonic_series() {
        let spec = SeriesSpec::new(|k| 1.0 / k as f64, Oscillation::Sin2k, 1).unwrap();
        let exact = (PI - 2.0 * PI * 0.3) / 2.0;
        for order in [1, 2] {
            let r = cesaro_sum(&spec, nu(0.3), order, 50_000).unwrap();
            assert!((r.re() - exact).abs() <= r.error_estimate, "order {order}");
        }
    }

    #[test]
    fn bilateral_odd_term_cancels() {
        let s = bilateral_symmetric_sum(|k| Complex64::new(k as f64, -2.0 * k as f64), 1000);
        assert_eq!(s, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn leibniz_series() {
        // x = 1/2, ν = 1/2: e^{−iπ/2} Σ (−1)^n/(n + 1/2) = −iπ/2
        let r = lerch_tail_sum(0.5, nu(0.5), 1e-12).unwrap();
        let z = r.value.as_complex();
        assert!(z.re.abs() < 1e-12 && (z.im + PI / 2.0).abs() < 1e-12, "{z}");
        assert!(lerch_tail_sum(1.0, nu(0.5), 1e-12).is_err());
    }

    #[test]
    fn richardson_on_basel() {
        let r = richardson_sum(|k| 1.0 / (k * k) as f64, 1, 1000, 3).unwrap();
        assert!((r.re() - PI * PI / 6.0).abs() < 1e-12);
        assert!(r.error_estimate < 1e-10);
    }
}
