//! Grid sweeps over the catalog and report generation.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::identities::{Admission, IdentityId, Point, AUX_GRID, BILATERAL_TERMS};
use crate::quadrature::MIN_TOL;
use crate::series_engine::NuValue;

/// Sides are evaluated this much tighter than the residual tolerance.
const EVAL_TOL_FACTOR: f64 = 0.1;

/// One identity checked at one parameter point.
///
/// `pass` holds exactly when `residual < tolerance`. Skipped and failed
/// evaluations carry no residual and never pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub id: IdentityId,
    pub nu: Option<f64>,
    pub aux: Option<f64>,
    pub lhs_re: Option<f64>,
    pub lhs_im: Option<f64>,
    pub rhs_re: Option<f64>,
    pub rhs_im: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub skipped: bool,
    pub reason: Option<String>,
    pub work: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Equality ignores `wall_time`.
impl PartialEq for VerificationRecord {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.nu == other.nu
            && self.aux == other.aux
            && self.lhs_re == other.lhs_re
            && self.lhs_im == other.lhs_im
            && self.rhs_re == other.rhs_re
            && self.rhs_im == other.rhs_im
            && self.residual == other.residual
            && self.tolerance == other.tolerance
            && self.pass == other.pass
            && self.skipped == other.skipped
            && self.reason == other.reason
            && self.work == other.work
    }
}

impl VerificationRecord {
    fn empty(id: IdentityId, point: &Point, tolerance: f64) -> Self {
        Self {
            id,
            nu: point.nu.map(NuValue::value),
            aux: point.aux,
            lhs_re: None,
            lhs_im: None,
            rhs_re: None,
            rhs_im: None,
            residual: None,
            tolerance,
            pass: false,
            skipped: false,
            reason: None,
            work: 0,
            wall_time: Duration::ZERO,
        }
    }

    /// |lhs − rhs| recomputed from the stored sides.
    pub fn recomputed_residual(&self) -> Option<f64> {
        let (lr, rr) = (self.lhs_re?, self.rhs_re?);
        let li = self.lhs_im.unwrap_or(0.0);
        let ri = self.rhs_im.unwrap_or(0.0);
        if self.lhs_im.is_none() && self.rhs_im.is_none() {
            Some((lr - rr).abs())
        } else {
            Some((lr - rr).hypot(li - ri))
        }
    }
}

/// The tolerance a record is judged against: the requested one, raised to
/// the identity's floor where its slow side cannot do better.
pub fn effective_tolerance(id: IdentityId, requested: f64) -> f64 {
    requested.max(id.spec().tolerance_floor)
}

/// Checks `id` at `point`.
///
/// Malformed points (ν given to a parameter-free identity, missing aux
/// parameter) are errors. Excluded points come back as skipped records and
/// evaluation failures as failed records.
pub fn verify_identity(id: IdentityId, point: Point, tol: f64) -> Result<VerificationRecord> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let spec = id.spec();
    let tolerance = effective_tolerance(id, tol);
    let mut record = VerificationRecord::empty(id, &point, tolerance);
    if let Admission::Excluded(reason) = spec.admit(&point)? {
        record.skipped = true;
        record.reason = Some(reason);
        return Ok(record);
    }

    let started = Instant::now();
    let eval_tol = (EVAL_TOL_FACTOR * tolerance).max(MIN_TOL);
    let sides = spec
        .lhs(&point, eval_tol)
        .and_then(|lhs| spec.rhs(&point).map(|rhs| (lhs, rhs)));
    record.wall_time = started.elapsed();
    match sides {
        Ok((lhs, rhs)) => {
            record.lhs_re = Some(lhs.value.re());
            record.lhs_im = lhs.value.im();
            record.rhs_re = Some(rhs.value.re());
            record.rhs_im = rhs.value.im();
            record.work = lhs.work + rhs.work;
            let residual = record.recomputed_residual().unwrap_or(f64::NAN);
            record.pass = residual < tolerance;
            record.residual = Some(residual);
            if !record.pass {
                record.reason = Some(format!(
                    "residual {residual:e} not below tolerance {tolerance:e} (lhs error estimate {:e})",
                    lhs.error_estimate
                ));
            }
        }
        Err(e) => {
            record.reason = Some(e.to_string());
        }
    }
    Ok(record)
}

/// Sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid_points: usize,
    pub nu_min: f64,
    pub nu_max: f64,
    /// Additional ν values merged into the evenly spaced grid when they lie
    /// within [nu_min, nu_max].
    pub extra_points: Vec<f64>,
    pub aux_grid: Vec<f64>,
    pub tolerance: f64,
    pub identity_filter: Option<Vec<IdentityId>>,
}

impl Default for SweepConfig {
    /// ν ∈ {0.1, …, 0.9} ∪ {1/4, 1/3, 3/4}, all identities, tolerance 1e-8.
    fn default() -> Self {
        Self {
            grid_points: 9,
            nu_min: 0.1,
            nu_max: 0.9,
            extra_points: vec![0.25, 1.0 / 3.0, 0.75],
            aux_grid: AUX_GRID.to_vec(),
            tolerance: 1e-8,
            identity_filter: None,
        }
    }
}

impl SweepConfig {
    /// An evenly spaced grid without extra points.
    pub fn uniform(grid_points: usize, nu_min: f64, nu_max: f64, tolerance: f64) -> Self {
        Self {
            grid_points,
            nu_min,
            nu_max,
            extra_points: Vec::new(),
            aux_grid: AUX_GRID.to_vec(),
            tolerance,
            identity_filter: None,
        }
    }

    pub fn with_filter(mut self, ids: Vec<IdentityId>) -> Self {
        self.identity_filter = Some(ids);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points == 0 {
            return Err(Error::InvalidSpec("grid needs at least one point".into()));
        }
        if !(self.nu_min > 0.0 && self.nu_min <= self.nu_max && self.nu_max < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "grid bounds must satisfy 0 < nu_min <= nu_max < 1, got [{}, {}]",
                self.nu_min, self.nu_max
            )));
        }
        if let Some(bad) = self.extra_points.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return Err(Error::InvalidSpec(format!(
                "extra grid point {bad} is outside (0, 1)"
            )));
        }
        if self.aux_grid.is_empty() {
            return Err(Error::InvalidSpec("auxiliary grid is empty".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    /// The sorted ν grid.
    pub fn nu_grid(&self) -> Vec<f64> {
        let mut grid: Vec<f64> = if self.grid_points == 1 {
            vec![self.nu_min]
        } else {
            let step = (self.nu_max - self.nu_min) / (self.grid_points - 1) as f64;
            (0..self.grid_points)
                .map(|i| {
                    // Round to 12 digits so that 0.1 + 2·0.1 lands on 0.3.
                    let v = self.nu_min + step * i as f64;
                    (v * 1e12).round() / 1e12
                })
                .collect()
        };
        grid.extend(
            self.extra_points
                .iter()
                .copied()
                .filter(|v| *v >= self.nu_min && *v <= self.nu_max),
        );
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        grid
    }

    /// Identities in catalog order.
    pub fn identities(&self) -> Vec<IdentityId> {
        IdentityId::ALL
            .into_iter()
            .filter(|id| {
                self.identity_filter
                    .as_ref()
                    .map_or(true, |f| f.contains(id))
            })
            .collect()
    }

    /// Every (identity, point) pair the sweep evaluates, in report order.
    pub fn tasks(&self) -> Vec<(IdentityId, Point)> {
        let grid = self.nu_grid();
        let mut tasks = Vec::new();
        for id in self.identities() {
            let spec = id.spec();
            if !spec.is_parameterised() {
                tasks.push((id, Point::default()));
                continue;
            }
            for &v in &grid {
                let nu = NuValue::new(v).expect("validated grid lies inside (0, 1)");
                if spec.aux.is_some() {
                    for &a in &self.aux_grid {
                        tasks.push((id, Point::with_aux(nu, a)));
                    }
                } else {
                    tasks.push((id, Point::nu(nu)));
                }
            }
        }
        tasks
    }
}

/// Runs every task of `cfg`, concurrently, returning records in task order.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<VerificationRecord>> {
    cfg.validate()?;
    let records = cfg
        .tasks()
        .into_par_iter()
        .map(|(id, point)| {
            verify_identity(id, point, cfg.tolerance).unwrap_or_else(|e| {
                let mut r =
                    VerificationRecord::empty(id, &point, effective_tolerance(id, cfg.tolerance));
                r.reason = Some(e.to_string());
                r
            })
        })
        .collect();
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" | "txt" => Ok(ReportFormat::Text),
            other => Err(domain(format!("unknown report format '{other}'"))),
        }
    }
}

/// True when no record failed. Skipped records do not count against this.
pub fn all_pass(records: &[VerificationRecord]) -> bool {
    records.iter().all(|r| r.skipped || r.pass)
}

pub fn emit_report(records: &[VerificationRecord], format: ReportFormat) -> Result<Vec<u8>> {
    if records.is_empty() {
        return Err(Error::InvalidSpec(
            "cannot emit a report without records".into(),
        ));
    }
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(records)
                .map_err(|e| Error::Serialization(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for r in records {
                writer
                    .serialize(r)
                    .map_err(|e| Error::Serialization(e.to_string()))?;
            }
            writer
                .into_inner()
                .map_err(|e| Error::Serialization(e.to_string()))
        }
        ReportFormat::Text => Ok(text_report(records).into_bytes()),
    }
}

/// Parses a JSON report back into records.
pub fn parse_json_report(bytes: &[u8]) -> Result<Vec<VerificationRecord>> {
    serde_json::from_slice(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

/// Parses a CSV report back into records.
pub fn parse_csv_report(bytes: &[u8]) -> Result<Vec<VerificationRecord>> {
    csv::Reader::from_reader(bytes)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Serialization(e.to_string()))
}

fn text_report(records: &[VerificationRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<14} {:>7} {:>6} {:>7} {:>6} {:>12} {:>10}",
        "identity", "records", "passed", "skipped", "failed", "max_residual", "tolerance"
    );
    let mut ids: Vec<IdentityId> = records.iter().map(|r| r.id).collect();
    ids.dedup();
    for id in &ids {
        let group: Vec<&VerificationRecord> = records.iter().filter(|r| r.id == *id).collect();
        let passed = group.iter().filter(|r| r.pass).count();
        let skipped = group.iter().filter(|r| r.skipped).count();
        let failed = group.len() - passed - skipped;
        let max_residual = group
            .iter()
            .filter_map(|r| r.residual)
            .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        let tolerance = group.iter().map(|r| r.tolerance).fold(0.0, f64::max);
        let residual = max_residual.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"));
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>6} {:>7} {:>6} {:>12} {:>10.1e}",
            id.as_str(),
            group.len(),
            passed,
            skipped,
            failed,
            residual,
            tolerance
        );
    }
    for r in records.iter().filter(|r| !r.pass) {
        let at = match (r.nu, r.aux) {
            (Some(n), Some(a)) => format!(" at nu={n}, aux={a}"),
            (Some(n), None) => format!(" at nu={n}"),
            _ => String::new(),
        };
        let kind = if r.skipped { "skipped" } else { "FAILED" };
        let _ = writeln!(
            out,
            "{kind}: {}{at}: {}",
            r.id,
            r.reason.as_deref().unwrap_or("no reason recorded")
        );
    }
    if ids
        .iter()
        .any(|id| matches!(id, IdentityId::LemmaLerch2 | IdentityId::Kronecker))
    {
        let _ = writeln!(
            out,
            "note: lemma-lerch2 and kronecker compare Cesàro-averaged symmetric sums truncated at N = {BILATERAL_TERMS}; \
             these converge like O(1/N), hence tolerance floors of 1e-4 and 1e-3"
        );
    }
    let failures = records.iter().filter(|r| !r.skipped && !r.pass).count();
    if failures == 0 {
        out.push_str("ALL PASS\n");
    } else {
        let _ = writeln!(out, "FAILED: {failures} of {} records", records.len());
    }
    out
}
