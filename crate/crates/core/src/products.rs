//! Balanced rational infinite products Π_{m≥0} Π(m + aᵢ) / Π(m + bⱼ).
//!
//! Partial products are accumulated in log space. With Σaᵢ = Σbⱼ the log of
//! the partial product approaches its limit like c/M, so a single Richardson
//! step on truncations M and 2M removes the leading error.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::identities::{self, IdentityId};
use crate::series_engine::{CompensatedSum, EvalResult, Method, NuValue};
use crate::special_fn::log_gamma;

/// Relative tolerance used when comparing a series identity with its
/// exponentiated closed form.
pub const PRODUCT_MATCH_TOL: f64 = 1e-8;

/// Default truncation for direct products.
pub const DEFAULT_TERMS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RationalProductSpec {
    numerator_shifts: Vec<f64>,
    denominator_shifts: Vec<f64>,
}

impl RationalProductSpec {
    pub fn new(numerator_shifts: Vec<f64>, denominator_shifts: Vec<f64>) -> Result<Self> {
        if numerator_shifts.len() != denominator_shifts.len() || numerator_shifts.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "product needs equally many numerator and denominator shifts, got {} and {}",
                numerator_shifts.len(),
                denominator_shifts.len()
            )));
        }
        if let Some(bad) = numerator_shifts
            .iter()
            .chain(&denominator_shifts)
            .find(|s| !(**s > 0.0) || !s.is_finite())
        {
            return Err(domain(format!(
                "product shifts must be positive, got {bad}"
            )));
        }
        let num: f64 = numerator_shifts.iter().sum();
        let den: f64 = denominator_shifts.iter().sum();
        if (num - den).abs() > 1e-12 * num.abs().max(den.abs()) {
            return Err(Error::InvalidSpec(format!(
                "unbalanced product: numerator shifts sum to {num}, denominator shifts to {den}"
            )));
        }
        Ok(Self {
            numerator_shifts,
            denominator_shifts,
        })
    }

    pub fn numerator_shifts(&self) -> &[f64] {
        &self.numerator_shifts
    }

    pub fn denominator_shifts(&self) -> &[f64] {
        &self.denominator_shifts
    }

    /// log of the m-th factor. For m ≥ 1 the common ln m terms cancel exactly.
    fn log_factor(&self, m: u64) -> f64 {
        if m == 0 {
            let num: f64 = self.numerator_shifts.iter().map(|a| a.ln()).sum();
            let den: f64 = self.denominator_shifts.iter().map(|b| b.ln()).sum();
            return num - den;
        }
        let m = m as f64;
        let num: f64 = self.numerator_shifts.iter().map(|a| (a / m).ln_1p()).sum();
        let den: f64 = self
            .denominator_shifts
            .iter()
            .map(|b| (b / m).ln_1p())
            .sum();
        num - den
    }

    fn log_partials(&self, truncations: &[u64]) -> Vec<f64> {
        let mut sum = CompensatedSum::default();
        let mut m = 0;
        truncations
            .iter()
            .map(|&upto| {
                while m < upto {
                    sum.add(self.log_factor(m));
                    m += 1;
                }
                sum.value()
            })
            .collect()
    }
}

/// [(m + 5/2)(m + 3/2)]² / ((m + 3)(m + 2)²(m + 1))
pub fn infprod_spec() -> RationalProductSpec {
    RationalProductSpec::new(vec![2.5, 2.5, 1.5, 1.5], vec![3.0, 2.0, 2.0, 1.0]).expect("balanced")
}

/// Wallis' (2k)² / ((2k − 1)(2k + 1)) with k = m + 1, i.e. (m + 1)² / ((m + 1/2)(m + 3/2)).
pub fn wallis_spec() -> RationalProductSpec {
    RationalProductSpec::new(vec![1.0, 1.0], vec![0.5, 1.5]).expect("balanced")
}

/// Partial product over m = 0, …, terms − 1.
pub fn product_direct(spec: &RationalProductSpec, terms: u64) -> Result<f64> {
    if terms < 10 {
        return Err(domain(format!(
            "product truncation must be at least 10, got {terms}"
        )));
    }
    Ok(spec.log_partials(&[terms])[0].exp())
}

/// Direct product sharpened by one Richardson step in 1/M on the
/// truncations M and 2M. The error estimate compares with the same step
/// taken on M/2 and M.
pub fn product_extrapolated(spec: &RationalProductSpec, terms: u64) -> Result<EvalResult> {
    if terms < 20 {
        return Err(domain(format!(
            "product truncation must be at least 20, got {terms}"
        )));
    }
    let logs = spec.log_partials(&[terms / 2, terms, 2 * terms]);
    let coarse = 2.0 * logs[1] - logs[0];
    let fine = 2.0 * logs[2] - logs[1];
    let value = fine.exp();
    let log_err = (fine - coarse).abs() / 3.0 + 8.0 * f64::EPSILON * (1.0 + fine.abs());
    let work = 2 * terms * spec.numerator_shifts.len() as u64;
    Ok(EvalResult::real(
        value,
        value * log_err,
        work,
        Method::Naive,
    ))
}

/// exp(Σⱼ log Γ(bⱼ) − Σᵢ log Γ(aᵢ)).
pub fn product_gamma_closed(spec: &RationalProductSpec) -> Result<f64> {
    let mut log = 0.0;
    for b in &spec.denominator_shifts {
        log += log_gamma(*b)?;
    }
    for a in &spec.numerator_shifts {
        log -= log_gamma(*a)?;
    }
    Ok(log.exp())
}

/// 128 / (9π²)
pub fn infprod_value() -> f64 {
    128.0 / (9.0 * PI * PI)
}

/// Exponentiates a series identity into its product form.
///
/// For ν-parameterised identities the exponentiated series is checked
/// against the exponentiated closed form before the latter is returned.
/// The limit identities take `nu = None`.
pub fn series_to_product(id: IdentityId, nu: Option<NuValue>) -> Result<f64> {
    match (id, nu) {
        (IdentityId::InfSeries0 | IdentityId::InfSeries1 | IdentityId::InfSeries2, None) => {
            Ok(identities::endpoint_value(id)?.exp())
        }
        (_, Some(nu)) if identities::series_spec(id).is_some() => {
            let closed = identities::rhs_closed(id, nu)?.re().exp();
            let series = identities::lhs_series(id, nu, 1e-10)?.re().exp();
            if (series - closed).abs() > PRODUCT_MATCH_TOL * closed {
                return Err(Error::Mismatch {
                    lhs: series,
                    rhs: closed,
                });
            }
            Ok(closed)
        }
        _ => Err(domain(format!(
            "{} has no product form for the given parameter",
            id.as_str()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(RationalProductSpec::new(vec![1.0, 2.0], vec![1.5]).is_err());
        assert!(RationalProductSpec::new(vec![1.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(RationalProductSpec::new(vec![-1.0, 2.0], vec![0.5, 0.5]).is_err());
        assert!(RationalProductSpec::new(vec![], vec![]).is_err());
    }

    #[test]
    fn identical_shifts_give_one() {
        let spec = RationalProductSpec::new(vec![0.7, 2.0], vec![2.0, 0.7]).unwrap();
        assert_eq!(product_direct(&spec, 1000).unwrap(), 1.0);
        assert!((product_gamma_closed(&spec).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_closed_forms() {
        assert!((product_gamma_closed(&infprod_spec()).unwrap() - infprod_value()).abs() < 1e-13);
        assert!((product_gamma_closed(&wallis_spec()).unwrap() - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn direct_products_converge_like_one_over_m() {
        let spec = wallis_spec();
        let p1 = product_direct(&spec, 1000).unwrap();
        let p2 = product_direct(&spec, 2000).unwrap();
        let exact = PI / 2.0;
        let ratio = (p1 - exact) / (p2 - exact);
        assert!((ratio - 2.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn truncation_guard() {
        assert!(product_direct(&wallis_spec(), 9).is_err());
        assert!(product_extrapolated(&wallis_spec(), 10).is_err());
    }

    #[test]
    fn limit_identities_exponentiate() {
        let p = series_to_product(IdentityId::InfSeries1, None).unwrap();
        assert!((p - 3.0 * PI / 16.0).abs() < 1e-15);
        assert!(series_to_product(IdentityId::IntThm1, None).is_err());
    }
}
