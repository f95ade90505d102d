//! The identity catalog.
//!
//! Every entry binds a series, integral or product (the left side) to a
//! closed form built from ψ, logarithms and trigonometric functions (the right
//! side), together with the parameter domain on which the equality holds.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::products::{
    infprod_spec, infprod_value, product_extrapolated, wallis_spec, DEFAULT_TERMS,
};
use crate::quadrature::{integrate_frullani, FrullaniIntegrand, QuadratureConfig, NU_EXCLUSION};
use crate::series_engine::{
    bilateral_symmetric_mean, lerch_tail_sum, richardson_sum, sin_cos_pi_multiple, sum_by_parts,
    EvalResult, Method, NuValue, Oscillation, SeriesSpec,
};
use crate::special_fn::digamma;

/// Truncation N of the symmetric bilateral sums.
pub const BILATERAL_TERMS: u64 = 100_000;

/// Grid used for the auxiliary parameter (x or y) in sweeps.
pub const AUX_GRID: [f64; 3] = [0.25, 0.5, 0.75];

/// y is kept at least this far from 0 and 1.
pub const KRONECKER_MARGIN: f64 = 1e-3;

/// Stable identifiers for the catalog entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "lerch1")]
    Lerch1,
    #[serde(rename = "series2")]
    Series2,
    #[serde(rename = "series3")]
    Series3,
    #[serde(rename = "series4")]
    Series4,
    #[serde(rename = "imag1")]
    Imag1,
    #[serde(rename = "real1")]
    Real1,
    #[serde(rename = "series4a")]
    Series4a,
    #[serde(rename = "lemma-lerch2")]
    LemmaLerch2,
    #[serde(rename = "kronecker")]
    Kronecker,
    #[serde(rename = "alt-digamma")]
    AltDigamma,
    #[serde(rename = "int-thm1")]
    IntThm1,
    #[serde(rename = "int-thm2")]
    IntThm2,
    #[serde(rename = "infseries0")]
    InfSeries0,
    #[serde(rename = "infseries1")]
    InfSeries1,
    #[serde(rename = "infseries2")]
    InfSeries2,
    #[serde(rename = "infprod")]
    InfProd,
    #[serde(rename = "wallis")]
    Wallis,
}

impl IdentityId {
    pub const ALL: [IdentityId; 17] = [
        IdentityId::Lerch1,
        IdentityId::Series2,
        IdentityId::Series3,
        IdentityId::Series4,
        IdentityId::Imag1,
        IdentityId::Real1,
        IdentityId::Series4a,
        IdentityId::LemmaLerch2,
        IdentityId::Kronecker,
        IdentityId::AltDigamma,
        IdentityId::IntThm1,
        IdentityId::IntThm2,
        IdentityId::InfSeries0,
        IdentityId::InfSeries1,
        IdentityId::InfSeries2,
        IdentityId::InfProd,
        IdentityId::Wallis,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Lerch1 => "lerch1",
            IdentityId::Series2 => "series2",
            IdentityId::Series3 => "series3",
            IdentityId::Series4 => "series4",
            IdentityId::Imag1 => "imag1",
            IdentityId::Real1 => "real1",
            IdentityId::Series4a => "series4a",
            IdentityId::LemmaLerch2 => "lemma-lerch2",
            IdentityId::Kronecker => "kronecker",
            IdentityId::AltDigamma => "alt-digamma",
            IdentityId::IntThm1 => "int-thm1",
            IdentityId::IntThm2 => "int-thm2",
            IdentityId::InfSeries0 => "infseries0",
            IdentityId::InfSeries1 => "infseries1",
            IdentityId::InfSeries2 => "infseries2",
            IdentityId::InfProd => "infprod",
            IdentityId::Wallis => "wallis",
        }
    }

    pub fn spec(self) -> &'static IdentitySpec {
        &CATALOG[self as usize]
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase().replace('_', "-");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == wanted)
            .ok_or_else(|| domain(format!("unknown identity '{s}'")))
    }
}

/// Where an identity's ν may lie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// ν in (margin, 1 − margin), skipping points within `margin` of `singular`.
    Open {
        margin: f64,
        singular: &'static [f64],
    },
    ParameterFree,
}

/// A second parameter carried by the lemma identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxParam {
    pub name: &'static str,
    pub margin: f64,
}

/// The parameters of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub nu: Option<NuValue>,
    pub aux: Option<f64>,
}

impl Point {
    pub fn nu(nu: NuValue) -> Self {
        Self {
            nu: Some(nu),
            aux: None,
        }
    }

    pub fn with_aux(nu: NuValue, aux: f64) -> Self {
        Self {
            nu: Some(nu),
            aux: Some(aux),
        }
    }
}

/// Outcome of checking a point against an identity's domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Admission {
    Admitted,
    /// The point is well-formed but sits on an excluded zone or singular point.
    Excluded(String),
}

type LhsFn = fn(IdentityId, &Point, f64) -> Result<EvalResult>;
type RhsFn = fn(IdentityId, &Point) -> Result<EvalResult>;

/// A catalog entry.
pub struct IdentitySpec {
    pub id: IdentityId,
    /// Short human-readable form of the identity.
    pub label: &'static str,
    pub domain: Domain,
    pub aux: Option<AuxParam>,
    /// Residual tolerance below which a check cannot be expected to pass,
    /// set by the convergence rate of the slowest side.
    pub tolerance_floor: f64,
    lhs: LhsFn,
    rhs: RhsFn,
}

impl fmt::Debug for IdentitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentitySpec")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("aux", &self.aux)
            .finish_non_exhaustive()
    }
}

impl IdentitySpec {
    pub fn is_parameterised(&self) -> bool {
        !matches!(self.domain, Domain::ParameterFree)
    }

    /// The parameter domain in words, e.g. `0 < nu < 1, 0 < x < 1`.
    pub fn domain_description(&self) -> String {
        let Domain::Open { margin, singular } = self.domain else {
            return "no parameters".to_string();
        };
        let mut out = if margin == 0.0 {
            "0 < nu < 1".to_string()
        } else {
            format!("{margin:e} <= nu <= 1 - {margin:e}")
        };
        for s in singular {
            out.push_str(&format!(", |nu - {s}| >= {margin:e}"));
        }
        if let Some(aux) = self.aux {
            if aux.margin == 0.0 {
                out.push_str(&format!(", 0 < {} < 1", aux.name));
            } else {
                out.push_str(&format!(
                    ", {m:e} < {n} < 1 - {m:e}",
                    m = aux.margin,
                    n = aux.name
                ));
            }
        }
        out
    }

    /// Rejects malformed points with an error and reports excluded ones.
    pub fn admit(&self, point: &Point) -> Result<Admission> {
        match (self.domain, point.nu) {
            (Domain::ParameterFree, None) => {
                if point.aux.is_some() {
                    return Err(domain(format!("{} takes no parameters", self.id)));
                }
                Ok(Admission::Admitted)
            }
            (Domain::ParameterFree, Some(_)) => {
                Err(domain(format!("{} takes no nu parameter", self.id)))
            }
            (Domain::Open { .. }, None) => Err(domain(format!("{} requires nu", self.id))),
            (Domain::Open { margin, singular }, Some(nu)) => {
                match (self.aux, point.aux) {
                    (Some(aux), Some(value)) => {
                        if !(value > aux.margin && value < 1.0 - aux.margin) {
                            return Ok(Admission::Excluded(format!(
                                "{} = {value} outside ({}, {})",
                                aux.name,
                                aux.margin,
                                1.0 - aux.margin
                            )));
                        }
                    }
                    (Some(aux), None) => {
                        return Err(domain(format!("{} requires {}", self.id, aux.name)))
                    }
                    (None, Some(_)) => {
                        return Err(domain(format!("{} takes no auxiliary parameter", self.id)))
                    }
                    (None, None) => {}
                }
                let v = nu.value();
                if v < margin || v > 1.0 - margin {
                    return Ok(Admission::Excluded(format!(
                        "nu = {v} within {margin:e} of an endpoint of (0, 1)"
                    )));
                }
                if let Some(s) = singular
                    .iter()
                    .find(|s| (v - **s).abs() < margin.max(1e-12))
                {
                    return Ok(Admission::Excluded(format!(
                        "nu = {v} at singular point {s} of the closed form"
                    )));
                }
                Ok(Admission::Admitted)
            }
        }
    }

    fn require(&self, point: &Point) -> Result<()> {
        match self.admit(point)? {
            Admission::Admitted => Ok(()),
            Admission::Excluded(reason) => Err(domain(format!("{}: {reason}", self.id))),
        }
    }

    /// Left side (series, integral or product) at `point`.
    pub fn lhs(&self, point: &Point, tol: f64) -> Result<EvalResult> {
        self.require(point)?;
        (self.lhs)(self.id, point, tol)
    }

    /// Right side (closed form) at `point`.
    pub fn rhs(&self, point: &Point) -> Result<EvalResult> {
        self.require(point)?;
        (self.rhs)(self.id, point)
    }
}

const OPEN: Domain = Domain::Open {
    margin: 0.0,
    singular: &[],
};

const INTEGRAL: Domain = Domain::Open {
    margin: NU_EXCLUSION,
    singular: &[],
};

const INTEGRAL_SKIP_HALF: Domain = Domain::Open {
    margin: NU_EXCLUSION,
    singular: &[0.5],
};

static CATALOG: [IdentitySpec; 17] = [
    IdentitySpec {
        id: IdentityId::Lerch1,
        label: "sum_{k>=2} log(1-1/k^2) cos(2k nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::Series2,
        label: "sum_{k>=2} log((k-1)/(k+1)) sin(2k nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::Series3,
        label: "sum_{k>=2} log((2k-1)/(2k+1)) sin(2k nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::Series4,
        label: "sum_{k>=2} log(4(k^2-1)/(4k^2-1)) cos(2k nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::Imag1,
        label: "sum_{k>=1} log(k/(k+1)) sin((2k+1) nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::Real1,
        label: "-sum_{k>=1} log((2k+1)^2/(4k(k+1))) cos((2k+1) nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::Series4a,
        label: "sum_{k>=2} log((4k^2-1)^2/(16k^2(k^2-1))) cos(2k nu pi)",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_series_point,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::LemmaLerch2,
        label: "sum_{n>=0} e^{-2 pi i x (nu+n)}/(nu+n) vs bilateral log sum",
        domain: OPEN,
        aux: Some(AuxParam {
            name: "x",
            margin: 0.0,
        }),
        tolerance_floor: 1e-4,
        lhs: lhs_lemma,
        rhs: rhs_lemma,
    },
    IdentitySpec {
        id: IdentityId::Kronecker,
        label: "sum'_{k} e^{2k nu pi i}/(k+y) = 2 pi i e^{-2 pi i nu y}/(1-e^{-2 pi i y}) - 1/y",
        domain: OPEN,
        aux: Some(AuxParam {
            name: "y",
            margin: KRONECKER_MARGIN,
        }),
        tolerance_floor: 1e-3,
        lhs: lhs_kronecker,
        rhs: rhs_kronecker,
    },
    IdentitySpec {
        id: IdentityId::AltDigamma,
        label: "sum_{n>=0} (-1)^n/(nu+n) = (psi((nu+1)/2) - psi(nu/2))/2",
        domain: OPEN,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_alt_digamma,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::IntThm1,
        label: "int_0^inf sinh(x) e^{-x} (e^{-x} - 2cos 2nu pi)/(x (cosh x - cos 2nu pi)) dx",
        domain: INTEGRAL,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_integral,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::IntThm2,
        label: "int_0^inf sinh(x) e^{-2x} (e^{-2x} - 2cos 2nu pi)/(x (cosh 2x - cos 2nu pi)) dx",
        domain: INTEGRAL_SKIP_HALF,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_integral,
        rhs: rhs_closed_point,
    },
    IdentitySpec {
        id: IdentityId::InfSeries0,
        label: "sum_{k>=2} log(1-1/k^2) = -log 2",
        domain: Domain::ParameterFree,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_limit_series,
        rhs: rhs_endpoint,
    },
    IdentitySpec {
        id: IdentityId::InfSeries1,
        label: "sum_{k>=2} log(4(k^2-1)/(4k^2-1)) = log(3 pi/16)",
        domain: Domain::ParameterFree,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_limit_series,
        rhs: rhs_endpoint,
    },
    IdentitySpec {
        id: IdentityId::InfSeries2,
        label: "sum_{k>=2} log((4k^2-1)^2/(16k^2(k^2-1))) = log(128/(9 pi^2))",
        domain: Domain::ParameterFree,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_limit_series,
        rhs: rhs_endpoint,
    },
    IdentitySpec {
        id: IdentityId::InfProd,
        label: "prod_{m>=0} [(m+5/2)(m+3/2)]^2/((m+3)(m+2)^2(m+1)) = 128/(9 pi^2)",
        domain: Domain::ParameterFree,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_product,
        rhs: rhs_product,
    },
    IdentitySpec {
        id: IdentityId::Wallis,
        label: "prod_{k>=1} (2k/(2k-1)) (2k/(2k+1)) = pi/2",
        domain: Domain::ParameterFree,
        aux: None,
        tolerance_floor: 0.0,
        lhs: lhs_product,
        rhs: rhs_product,
    },
];

/// The whole catalog, in [`IdentityId::ALL`] order.
pub fn catalog() -> &'static [IdentitySpec] {
    &CATALOG
}

// Coefficients, written with ln_1p so that they keep full relative accuracy
// for large k.

pub fn lerch1_coeff(k: u64) -> f64 {
    let k = k as f64;
    (-1.0 / (k * k)).ln_1p()
}

pub fn series2_coeff(k: u64) -> f64 {
    (-2.0 / (k as f64 + 1.0)).ln_1p()
}

pub fn series3_coeff(k: u64) -> f64 {
    (-2.0 / (2.0 * k as f64 + 1.0)).ln_1p()
}

pub fn series4_coeff(k: u64) -> f64 {
    let k = k as f64;
    (-3.0 / (4.0 * k * k - 1.0)).ln_1p()
}

pub fn imag1_coeff(k: u64) -> f64 {
    -(1.0 / k as f64).ln_1p()
}

pub fn real1_coeff(k: u64) -> f64 {
    let k = k as f64;
    -(1.0 / (4.0 * k * (k + 1.0))).ln_1p()
}

pub fn series4a_coeff(k: u64) -> f64 {
    let k = k as f64;
    ((8.0 * k * k + 1.0) / (16.0 * k * k * (k * k - 1.0))).ln_1p()
}

/// The series behind a series identity, or `None` for the others.
pub fn series_spec(id: IdentityId) -> Option<SeriesSpec> {
    let (coeff, osc, start): (fn(u64) -> f64, _, _) = match id {
        IdentityId::Lerch1 => (lerch1_coeff, Oscillation::Cos2k, 2),
        IdentityId::Series2 => (series2_coeff, Oscillation::Sin2k, 2),
        IdentityId::Series3 => (series3_coeff, Oscillation::Sin2k, 2),
        IdentityId::Series4 => (series4_coeff, Oscillation::Cos2k, 2),
        IdentityId::Imag1 => (imag1_coeff, Oscillation::Sin2k1, 1),
        IdentityId::Real1 => (real1_coeff, Oscillation::Cos2k1, 1),
        IdentityId::Series4a => (series4a_coeff, Oscillation::Cos2k, 2),
        _ => return None,
    };
    Some(SeriesSpec::new(coeff, osc, start).expect("catalog start indices are valid"))
}

/// The identities evaluated through [`series_spec`].
pub const SERIES_IDS: [IdentityId; 7] = [
    IdentityId::Lerch1,
    IdentityId::Series2,
    IdentityId::Series3,
    IdentityId::Series4,
    IdentityId::Imag1,
    IdentityId::Real1,
    IdentityId::Series4a,
];

/// Closed-form right side, with ψ supplied by the caller.
pub fn rhs_closed_with<P>(id: IdentityId, nu: NuValue, psi: &mut P) -> Result<f64>
where
    P: FnMut(f64) -> Result<f64>,
{
    let v = nu.value();
    let (s, c) = sin_cos_pi_multiple(1, v);
    let (s2, c2) = sin_cos_pi_multiple(2, v);
    let value = match id {
        IdentityId::Lerch1 => 2.0 * s * s * (psi(1.0)? - psi(v)? - PI.ln()) - 0.5 * PI * s2 - LN_2,
        IdentityId::Series2 => s2 * ((4.0 * PI).ln() - psi(1.0)? + psi(v)?) + PI * c * c,
        IdentityId::Series3 => {
            0.5 * s * (psi(0.5 * v)? - psi(0.5 * (v + 1.0))?) + 0.5 * PI + 3f64.ln() * s2
        }
        IdentityId::Series4 => {
            0.5 * c * (psi(0.5 * (v + 1.0))? - psi(0.5 * v)? - 4.0 * LN_2 * c) - 0.5 * PI * s2
                + c2 * ((1.5 * PI).ln() - psi(1.0)? + psi(v)?)
        }
        IdentityId::Imag1 => s * ((2.0 * PI).ln() - psi(1.0)? + psi(v)?) + 0.5 * PI * c,
        IdentityId::Real1 => {
            c * ((0.5 * PI).ln() - psi(1.0)? + psi(v)?) - 0.5 * PI * s
                + 0.5 * (psi(0.5 * (v + 1.0))? - psi(0.5 * v)?)
        }
        IdentityId::Series4a => {
            -(2.0 * c * c * ((0.5 * PI).ln() - psi(1.0)? + psi(v)?) - 0.5 * PI * s2
                + c * (psi(0.5 * (v + 1.0))? - psi(0.5 * v)?))
                - (9.0f64 / 8.0).ln() * c2
        }
        IdentityId::AltDigamma => 0.5 * (psi(0.5 * (v + 1.0))? - psi(0.5 * v)?),
        IdentityId::IntThm1 => (4.0 * PI).ln() - psi(1.0)? + psi(v)? + 0.5 * PI * c / s,
        IdentityId::IntThm2 => {
            0.5 * PI / s2 + 3f64.ln() + 0.25 / c * (psi(0.5 * v)? - psi(0.5 * (v + 1.0))?)
        }
        _ => {
            return Err(domain(format!("{id} has no real closed form in nu")));
        }
    };
    Ok(value)
}

/// Closed-form right side of a ν-parameterised real identity.
pub fn rhs_closed(id: IdentityId, nu: NuValue) -> Result<EvalResult> {
    let spec = id.spec();
    spec.require(&Point::nu(nu))?;
    let value = rhs_closed_with(id, nu, &mut digamma)?;
    let v = nu.value();
    // ψ(ν) ~ −1/ν sets the size of the cancelling terms; cot and cosec add their own.
    let mut scale = value.abs().max(1.0).max(1.0 / v);
    match id {
        IdentityId::IntThm1 => scale = scale.max(1.0 / sin_cos_pi_multiple(1, v).0),
        IdentityId::IntThm2 => scale = scale.max(1.0 / sin_cos_pi_multiple(2, v).0.abs()),
        _ => {}
    }
    Ok(EvalResult::real(
        value,
        16.0 * f64::EPSILON * scale,
        1,
        Method::Closed,
    ))
}

/// Accelerated left side of a series identity.
pub fn lhs_series(id: IdentityId, nu: NuValue, tol: f64) -> Result<EvalResult> {
    let spec = series_spec(id).ok_or_else(|| domain(format!("{id} is not a series identity")))?;
    sum_by_parts(&spec, nu, tol)
}

/// Σ_{n≥0} (−1)^n/(ν+n), summed in consecutive pairs
/// 1/((ν+2m)(ν+2m+1)) with the remainder from the midpoint-rule integral
/// ∫_{M−1/2}^∞, which is exact up to |c′(M − 1/2)|/24.
pub fn alt_digamma_sum(nu: NuValue, tol: f64) -> Result<EvalResult> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let v = nu.value();
    let pair = |m: f64| 1.0 / ((v + 2.0 * m) * (v + 2.0 * m + 1.0));
    let slope = |m: f64| {
        let a = v + 2.0 * m;
        -2.0 * (2.0 * a + 1.0) / (a * a * (a + 1.0) * (a + 1.0))
    };
    let mut pairs = 16u64;
    loop {
        let mid = pairs as f64 - 0.5;
        let bound = slope(mid).abs() / 24.0;
        let rounding = 8.0 * f64::EPSILON * (1.0 / v + 1.0);
        if bound + rounding <= tol {
            let mut sum = crate::series_engine::CompensatedSum::default();
            for m in (0..pairs).rev() {
                sum.add(pair(m as f64));
            }
            let tail = 0.5 * (1.0 / (v + 2.0 * mid)).ln_1p();
            return Ok(EvalResult::real(
                sum.value() + tail,
                bound + rounding,
                2 * pairs,
                Method::Naive,
            ));
        }
        if 2 * pairs > crate::series_engine::WORK_CEILING {
            return Err(Error::NonConvergence {
                estimate: bound + rounding,
                tol,
                work: 2 * pairs,
            });
        }
        pairs *= 2;
    }
}

/// Exact constants of the three limit identities.
pub fn endpoint_value(id: IdentityId) -> Result<f64> {
    match id {
        IdentityId::InfSeries0 => Ok(-LN_2),
        IdentityId::InfSeries1 => Ok((3.0 * PI / 16.0).ln()),
        IdentityId::InfSeries2 => Ok((128.0 / (9.0 * PI * PI)).ln()),
        _ => Err(domain(format!("{id} has no endpoint value"))),
    }
}

/// e^{2kνπi}, valid for negative k.
fn signed_unit_power(nu: f64, k: i64) -> Complex64 {
    let (s, c) = sin_cos_pi_multiple(2 * k.unsigned_abs(), nu);
    Complex64::new(c, if k < 0 { -s } else { s })
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} = {value} must lie strictly inside (0, 1)"
        )))
    }
}

/// Cesàro mean of Σ′_{k=−N}^{N} e^{2kνπi} log((x+k)/k).
pub fn lemma_bilateral_mean(x: f64, nu: NuValue, n: u64) -> Result<EvalResult> {
    check_unit("x", x)?;
    let v = nu.value();
    bilateral_symmetric_mean(|k| signed_unit_power(v, k) * (x / k as f64).ln_1p(), n)
}

/// −log(2πx) + ψ(1) − ψ(ν) − iπ/2 − Σ′ e^{2kνπi} log((x+k)/k), with the
/// bilateral sum Cesàro-averaged at truncation `n`.
pub fn lemma_rhs(x: f64, nu: NuValue, n: u64) -> Result<EvalResult> {
    check_unit("x", x)?;
    let bilateral = lemma_bilateral_mean(x, nu, n)?;
    let closed = Complex64::new(
        -(2.0 * PI * x).ln() + digamma(1.0)? - digamma(nu.value())?,
        -0.5 * PI,
    );
    Ok(EvalResult::complex(
        closed - bilateral.value.as_complex(),
        bilateral.error_estimate,
        bilateral.work,
        Method::Cesaro,
    ))
}

/// |Σ_{n≥0} e^{−2xπi(ν+n)}/(ν+n) − right side| with the bilateral sum truncated at `n`.
pub fn lemma_residual(x: f64, nu: NuValue, n: u64, tol: f64) -> Result<f64> {
    check_unit("x", x)?;
    let lhs = lerch_tail_sum(x, nu, tol)?;
    let rhs = lemma_rhs(x, nu, n)?;
    Ok(lhs.value.distance(rhs.value))
}

fn kronecker_check_y(y: f64) -> Result<()> {
    if !(y > KRONECKER_MARGIN && y < 1.0 - KRONECKER_MARGIN) {
        return Err(domain(format!(
            "y = {y} must lie in ({KRONECKER_MARGIN}, {}) so that 1 - e^(-2 pi i y) stays away from 0",
            1.0 - KRONECKER_MARGIN
        )));
    }
    Ok(())
}

/// 2πi e^{−2πiνy}/(1 − e^{−2πiy}) − 1/y
pub fn kronecker_closed(y: f64, nu: NuValue) -> Result<Complex64> {
    kronecker_check_y(y)?;
    let i = Complex64::new(0.0, 1.0);
    let num = 2.0 * PI * i * Complex64::from_polar(1.0, -2.0 * PI * nu.value() * y);
    let den = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * PI * y);
    Ok(num / den - 1.0 / y)
}

/// Cesàro mean of Σ′_{k=−N}^{N} e^{2kνπi}/(k+y).
pub fn kronecker_mean(y: f64, nu: NuValue, n: u64) -> Result<EvalResult> {
    kronecker_check_y(y)?;
    let v = nu.value();
    bilateral_symmetric_mean(|k| signed_unit_power(v, k) / (k as f64 + y), n)
}

/// |averaged symmetric partial sum − Kronecker closed form|.
pub fn kronecker_residual(y: f64, nu: NuValue, n: u64) -> Result<f64> {
    let closed = kronecker_closed(y, nu)?;
    let mean = kronecker_mean(y, nu, n)?;
    Ok((mean.value.as_complex() - closed).norm())
}

// Evaluator adapters stored in the catalog. `IdentitySpec::lhs`/`rhs` run
// the domain check first, so the parameters are present.

fn nu_of(point: &Point) -> NuValue {
    point.nu.expect("domain check guarantees nu")
}

fn aux_of(point: &Point) -> f64 {
    point
        .aux
        .expect("domain check guarantees the auxiliary parameter")
}

fn lhs_series_point(id: IdentityId, point: &Point, tol: f64) -> Result<EvalResult> {
    lhs_series(id, nu_of(point), tol)
}

fn rhs_closed_point(id: IdentityId, point: &Point) -> Result<EvalResult> {
    rhs_closed(id, nu_of(point))
}

fn lhs_lemma(_: IdentityId, point: &Point, tol: f64) -> Result<EvalResult> {
    lerch_tail_sum(aux_of(point), nu_of(point), tol)
}

fn rhs_lemma(_: IdentityId, point: &Point) -> Result<EvalResult> {
    lemma_rhs(aux_of(point), nu_of(point), BILATERAL_TERMS)
}

fn lhs_kronecker(_: IdentityId, point: &Point, _tol: f64) -> Result<EvalResult> {
    kronecker_mean(aux_of(point), nu_of(point), BILATERAL_TERMS)
}

fn rhs_kronecker(_: IdentityId, point: &Point) -> Result<EvalResult> {
    let z = kronecker_closed(aux_of(point), nu_of(point))?;
    Ok(EvalResult::complex(
        z,
        16.0 * f64::EPSILON * z.norm().max(1.0),
        1,
        Method::Closed,
    ))
}

fn lhs_alt_digamma(_: IdentityId, point: &Point, tol: f64) -> Result<EvalResult> {
    alt_digamma_sum(nu_of(point), tol)
}

fn lhs_integral(id: IdentityId, point: &Point, tol: f64) -> Result<EvalResult> {
    let scale = if id == IdentityId::IntThm1 { 1 } else { 2 };
    let integrand = FrullaniIntegrand::new(scale, nu_of(point))?;
    integrate_frullani(
        &integrand,
        &QuadratureConfig::new(tol.max(crate::quadrature::MIN_TOL)),
    )
}

/// Σ_{k≥2} of the ν = 0 coefficients, by Richardson-extrapolated partial sums.
pub fn limit_series_sum(id: IdentityId) -> Result<EvalResult> {
    let coeff: fn(u64) -> f64 = match id {
        IdentityId::InfSeries0 => lerch1_coeff,
        IdentityId::InfSeries1 => series4_coeff,
        IdentityId::InfSeries2 => series4a_coeff,
        _ => return Err(domain(format!("{id} is not a limit series"))),
    };
    richardson_sum(coeff, 2, 2000, 3)
}

fn lhs_limit_series(id: IdentityId, _: &Point, _: f64) -> Result<EvalResult> {
    limit_series_sum(id)
}

fn rhs_endpoint(id: IdentityId, _: &Point) -> Result<EvalResult> {
    Ok(EvalResult::closed(endpoint_value(id)?))
}

fn lhs_product(id: IdentityId, _: &Point, _: f64) -> Result<EvalResult> {
    let spec = if id == IdentityId::InfProd {
        infprod_spec()
    } else {
        wallis_spec()
    };
    product_extrapolated(&spec, DEFAULT_TERMS)
}

fn rhs_product(id: IdentityId, _: &Point) -> Result<EvalResult> {
    let value = if id == IdentityId::InfProd {
        infprod_value()
    } else {
        0.5 * PI
    };
    Ok(EvalResult::closed(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(v: f64) -> NuValue {
        NuValue::new(v).unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for (spec, id) in catalog().iter().zip(IdentityId::ALL) {
            assert_eq!(spec.id, id);
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert!("series9".parse::<IdentityId>().is_err());
    }

    #[test]
    fn domain_descriptions() {
        assert_eq!(
            IdentityId::Series2.spec().domain_description(),
            "0 < nu < 1"
        );
        assert_eq!(
            IdentityId::Wallis.spec().domain_description(),
            "no parameters"
        );
        assert!(IdentityId::IntThm2
            .spec()
            .domain_description()
            .contains("0.5"));
        assert!(IdentityId::LemmaLerch2
            .spec()
            .domain_description()
            .ends_with("0 < x < 1"));
    }

    #[test]
    fn series2_at_quarter_is_log_half_pi() {
        let want = (0.5 * PI).ln();
        assert!((rhs_closed(IdentityId::Series2, nu(0.25)).unwrap().re() - want).abs() < 1e-14);
        assert!(
            (lhs_series(IdentityId::Series2, nu(0.25), 1e-11)
                .unwrap()
                .re()
                - want)
                .abs()
                < 1e-10
        );
    }

    #[test]
    fn alt_digamma_at_half_is_half_pi() {
        // 2(1 - 1/3 + 1/5 - ...) = pi/2
        let r = alt_digamma_sum(nu(0.5), 1e-12).unwrap();
        assert!((r.re() - 0.5 * PI).abs() < 1e-12);
        assert!(
            (rhs_closed(IdentityId::AltDigamma, nu(0.5)).unwrap().re() - 0.5 * PI).abs() < 1e-14
        );
    }

    #[test]
    fn closed_forms_reject_wrong_ids() {
        assert!(rhs_closed(IdentityId::Wallis, nu(0.3)).is_err());
        assert!(rhs_closed(IdentityId::IntThm2, nu(0.5)).is_err());
        assert!(lhs_series(IdentityId::IntThm1, nu(0.3), 1e-8).is_err());
        assert!(endpoint_value(IdentityId::Series2).is_err());
        assert!(limit_series_sum(IdentityId::Lerch1).is_err());
    }

    #[test]
    fn limit_series_reach_endpoints() {
        for id in [
            IdentityId::InfSeries0,
            IdentityId::InfSeries1,
            IdentityId::InfSeries2,
        ] {
            let r = limit_series_sum(id).unwrap();
            assert!((r.re() - endpoint_value(id).unwrap()).abs() < 1e-12, "{id}");
        }
    }

    #[test]
    fn kronecker_guards_y() {
        assert!(kronecker_closed(0.0005, nu(0.3)).is_err());
        assert!(kronecker_closed(0.9995, nu(0.3)).is_err());
        assert!(kronecker_residual(0.5, nu(0.3), 100_000).unwrap() < 1e-3);
    }

    #[test]
    fn lemma_guards_x() {
        assert!(lemma_rhs(0.0, nu(0.3), 1000).is_err());
        assert!(lemma_rhs(1.0, nu(0.3), 1000).is_err());
    }

    #[test]
    fn lemma_residual_at_half() {
        assert!(lemma_residual(0.5, nu(0.3), 100_000, 1e-10).unwrap() < 1e-4);
    }
}
