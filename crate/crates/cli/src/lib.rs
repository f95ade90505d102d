//! The `logtrig` command line. [`run`] holds all the logic so that it can be
//! driven in-process; `main` only wires it to the real streams.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use logtrig_core::harness::{all_pass, effective_tolerance};
use logtrig_core::identities::{rhs_closed, Admission};
use logtrig_core::products::{
    infprod_spec, infprod_value, product_direct, product_extrapolated, product_gamma_closed,
    wallis_spec, DEFAULT_TERMS,
};
use logtrig_core::quadrature::{integrate_frullani, MIN_TOL};
use logtrig_core::{
    digamma, emit_report, sweep, verify_identity, Complex64, Error, EvalResult, FrullaniIntegrand,
    IdentityId, NuValue, Point, QuadratureConfig, ReportFormat, SweepConfig, Value,
    VerificationRecord,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "logtrig",
    version,
    about = "Evaluate and verify log-trigonometric series identities"
)]
struct Cli {
    /// Significant digits for printed values.
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u8).range(1..=17))]
    digits: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the digamma function at z > 0.
    Digamma {
        #[arg(allow_negative_numbers = true)]
        z: f64,
    },
    /// Evaluate one or both sides of an identity.
    Eval {
        #[arg(long, value_parser = parse_id)]
        id: IdentityId,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        /// x for lemma-lerch2, y for kronecker.
        #[arg(long, allow_negative_numbers = true)]
        aux: Option<f64>,
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Check an identity at one point. Exits 1 if the residual is too large.
    Verify {
        #[arg(long, value_parser = parse_id)]
        id: IdentityId,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        aux: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = RecordFormat::Text)]
        format: RecordFormat,
    },
    /// Verify identities over a grid of nu values and write a report.
    Sweep {
        /// Number of evenly spaced nu values in [nu-min, nu-max].
        #[arg(long, default_value_t = 9)]
        grid: usize,
        #[arg(long, default_value_t = 0.1)]
        nu_min: f64,
        #[arg(long, default_value_t = 0.9)]
        nu_max: f64,
        /// Leave out the extra points 1/4, 1/3 and 3/4.
        #[arg(long)]
        no_special: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Comma-separated identity ids; all identities when omitted.
        #[arg(long, value_delimiter = ',', value_parser = parse_id)]
        ids: Vec<IdentityId>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate one of the two hyperbolic Frullani integrals and compare
    /// with its closed form.
    Integrate {
        /// 1 for int-thm1 (kernel in x), 2 for int-thm2 (kernel in 2x).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compare a truncated infinite product with its closed form.
    Product {
        #[arg(long, value_enum)]
        id: ProductId,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: u64,
    },
    /// List identity ids with their forms and domains.
    List,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Lhs,
    Rhs,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RecordFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Text => ReportFormat::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProductId {
    Infprod,
    Wallis,
}

fn parse_id(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|_| {
        let known: Vec<&str> = IdentityId::ALL.iter().map(|id| id.as_str()).collect();
        format!(
            "unknown identity '{s}', expected one of: {}",
            known.join(", ")
        )
    })
}

/// Why a command stopped early.
enum Failure {
    /// Bad arguments or a point outside the identity's domain.
    Usage(String),
    /// The computation itself failed.
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidSpec(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let printer = Printer { digits: cli.digits };
    let result = match cli.command {
        Command::Digamma { z } => cmd_digamma(&printer, z, out),
        Command::Eval {
            id,
            nu,
            aux,
            side,
            tol,
        } => cmd_eval(&printer, id, nu, aux, side, tol, out),
        Command::Verify {
            id,
            nu,
            aux,
            tol,
            format,
        } => cmd_verify(&printer, id, nu, aux, tol, format, out, err),
        Command::Sweep {
            grid,
            nu_min,
            nu_max,
            no_special,
            tol,
            ids,
            format,
            out: path,
        } => {
            let mut cfg = SweepConfig {
                grid_points: grid,
                nu_min,
                nu_max,
                tolerance: tol,
                ..SweepConfig::default()
            };
            if no_special {
                cfg.extra_points.clear();
            }
            if !ids.is_empty() {
                cfg.identity_filter = Some(ids);
            }
            cmd_sweep(&cfg, format.into(), path.as_deref(), out)
        }
        Command::Integrate { theorem, nu, tol } => cmd_integrate(&printer, theorem, nu, tol, out),
        Command::Product { id, terms } => cmd_product(&printer, id, terms, out),
        Command::List => cmd_list(out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

struct Printer {
    digits: u8,
}

impl Printer {
    /// `digits` significant digits, switching to exponent notation for very
    /// small or very large magnitudes.
    fn num(&self, x: f64) -> String {
        let digits = usize::from(self.digits);
        if x == 0.0 || !x.is_finite() {
            return format!("{x}");
        }
        let exponent = x.abs().log10().floor() as i32;
        if !(-4..15).contains(&exponent) {
            return format!("{:.*e}", digits - 1, x);
        }
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    }

    fn value(&self, v: Value) -> String {
        match v {
            Value::Real(x) => self.num(x),
            Value::Complex(z) => {
                let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                format!("{} {sign} {}i", self.num(z.re), self.num(z.im.abs()))
            }
        }
    }

    fn eval(&self, r: &EvalResult) -> String {
        format!(
            "{} (error estimate {:.2e}, work {}, method {})",
            self.value(r.value),
            r.error_estimate,
            r.work,
            r.method.as_str()
        )
    }

    fn opt(&self, x: Option<f64>) -> String {
        x.map_or_else(|| "-".to_string(), |x| self.num(x))
    }

    fn side(&self, re: Option<f64>, im: Option<f64>) -> String {
        match (re, im) {
            (Some(re), Some(im)) => self.value(Value::Complex(Complex64::new(re, im))),
            (Some(re), None) => self.num(re),
            _ => "-".to_string(),
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn point(nu: Option<f64>, aux: Option<f64>) -> Result<Point, Failure> {
    let nu = nu.map(NuValue::new).transpose()?;
    if aux.is_some() && nu.is_none() {
        return Err(Failure::Usage("--aux needs --nu".into()));
    }
    Ok(Point { nu, aux })
}

fn cmd_digamma(p: &Printer, z: f64, out: &mut dyn Write) -> CmdResult {
    writeln!(out, "{}", p.num(digamma(z)?))?;
    Ok(EXIT_OK)
}

fn cmd_eval(
    p: &Printer,
    id: IdentityId,
    nu: Option<f64>,
    aux: Option<f64>,
    side: Side,
    tol: f64,
    out: &mut dyn Write,
) -> CmdResult {
    check_tol(tol)?;
    let point = point(nu, aux)?;
    let spec = id.spec();
    if let Admission::Excluded(reason) = spec.admit(&point)? {
        return Err(Failure::Usage(format!(
            "{id} excluded at this point: {reason}"
        )));
    }
    if matches!(side, Side::Lhs | Side::Both) {
        let lhs = spec.lhs(&point, tol.max(MIN_TOL))?;
        writeln!(out, "lhs: {}", p.eval(&lhs))?;
    }
    if matches!(side, Side::Rhs | Side::Both) {
        let rhs = spec.rhs(&point)?;
        writeln!(out, "rhs: {}", p.eval(&rhs))?;
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    p: &Printer,
    id: IdentityId,
    nu: Option<f64>,
    aux: Option<f64>,
    tol: f64,
    format: RecordFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    check_tol(tol)?;
    let record = verify_identity(id, point(nu, aux)?, tol)?;
    if record.skipped {
        return Err(Failure::Usage(format!(
            "{id} excluded at this point: {}",
            record.reason.as_deref().unwrap_or("outside the domain")
        )));
    }
    match format {
        RecordFormat::Json => out.write_all(&emit_report(
            std::slice::from_ref(&record),
            ReportFormat::Json,
        )?)?,
        RecordFormat::Text => write_record(p, &record, out)?,
    }
    if record.pass {
        Ok(EXIT_OK)
    } else {
        if let Some(reason) = &record.reason {
            writeln!(err, "verification failed: {reason}")?;
        }
        Ok(EXIT_FAILURE)
    }
}

fn write_record(p: &Printer, r: &VerificationRecord, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "id:        {}", r.id)?;
    if r.nu.is_some() {
        writeln!(out, "nu:        {}", p.opt(r.nu))?;
    }
    if r.aux.is_some() {
        writeln!(out, "aux:       {}", p.opt(r.aux))?;
    }
    writeln!(out, "lhs:       {}", p.side(r.lhs_re, r.lhs_im))?;
    writeln!(out, "rhs:       {}", p.side(r.rhs_re, r.rhs_im))?;
    writeln!(
        out,
        "residual:  {}",
        r.residual
            .map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
    )?;
    writeln!(out, "tolerance: {:e}", r.tolerance)?;
    writeln!(out, "work:      {}", r.work)?;
    writeln!(out, "pass:      {}", r.pass)?;
    if let Some(reason) = &r.reason {
        writeln!(out, "reason:    {reason}")?;
    }
    Ok(())
}

fn cmd_sweep(
    cfg: &SweepConfig,
    format: ReportFormat,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    cfg.validate()?;
    let records = sweep(cfg)?;
    let report = emit_report(&records, format)?;
    match path {
        Some(path) => {
            write_atomically(path, &report)?;
            let failed = records.iter().filter(|r| !r.skipped && !r.pass).count();
            let skipped = records.iter().filter(|r| r.skipped).count();
            writeln!(
                out,
                "{} records ({failed} failed, {skipped} skipped) written to {}",
                records.len(),
                path.display()
            )?;
        }
        None => out.write_all(&report)?,
    }
    Ok(if all_pass(&records) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

/// Writes to a temporary file next to `path`, then renames it into place.
fn write_atomically(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn cmd_integrate(p: &Printer, theorem: u8, nu: f64, tol: f64, out: &mut dyn Write) -> CmdResult {
    check_tol(tol)?;
    if tol < MIN_TOL {
        return Err(Failure::Usage(format!(
            "--tol must be at least {MIN_TOL:e}"
        )));
    }
    let nu = NuValue::new(nu)?;
    let id = if theorem == 1 {
        IdentityId::IntThm1
    } else {
        IdentityId::IntThm2
    };
    let closed = rhs_closed(id, nu)?;
    let integrand = FrullaniIntegrand::new(theorem, nu)?;
    let integral = integrate_frullani(&integrand, &QuadratureConfig::new(tol))?;
    writeln!(out, "integral:    {}", p.eval(&integral))?;
    writeln!(out, "closed form: {}", p.num(closed.re()))?;
    writeln!(
        out,
        "residual:    {:.3e}",
        (integral.re() - closed.re()).abs()
    )?;
    Ok(EXIT_OK)
}

fn cmd_product(p: &Printer, id: ProductId, terms: u64, out: &mut dyn Write) -> CmdResult {
    let (spec, exact, name) = match id {
        ProductId::Infprod => (infprod_spec(), infprod_value(), "128/(9 pi^2)"),
        ProductId::Wallis => (wallis_spec(), 0.5 * std::f64::consts::PI, "pi/2"),
    };
    let direct = product_direct(&spec, terms)?;
    let extrapolated = product_extrapolated(&spec, terms)?;
    let gamma = product_gamma_closed(&spec)?;
    writeln!(out, "direct ({terms} factors): {}", p.num(direct))?;
    writeln!(out, "extrapolated:            {}", p.eval(&extrapolated))?;
    writeln!(out, "gamma closed form:       {}", p.num(gamma))?;
    writeln!(out, "exact {name:<17}  {}", p.num(exact))?;
    writeln!(
        out,
        "relative error direct:       {:.3e}",
        ((direct - exact) / exact).abs()
    )?;
    writeln!(
        out,
        "relative error extrapolated: {:.3e}",
        ((extrapolated.re() - exact) / exact).abs()
    )?;
    Ok(EXIT_OK)
}

fn cmd_list(out: &mut dyn Write) -> CmdResult {
    writeln!(
        out,
        "{:<13} {:<10} {:<42} form",
        "id", "tolerance", "domain"
    )?;
    for id in IdentityId::ALL {
        let spec = id.spec();
        let floor = effective_tolerance(id, 0.0);
        let tol = if floor > 0.0 {
            format!(">= {floor:e}")
        } else {
            "-".into()
        };
        writeln!(
            out,
            "{:<13} {:<10} {:<42} {}",
            id.as_str(),
            tol,
            spec.domain_description(),
            spec.label
        )?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        let p = Printer { digits: 15 };
        assert_eq!(p.num(0.0), "0");
        assert_eq!(p.num(1.5), "1.50000000000000");
        assert_eq!(p.num(-123.25), "-123.250000000000");
        assert_eq!(p.num(2.5e-7), "2.50000000000000e-7");
        assert_eq!(Printer { digits: 3 }.num(0.001234), "0.00123");
        assert_eq!(
            p.value(Value::Complex(Complex64::new(1.0, -2.0))),
            "1.00000000000000 - 2.00000000000000i"
        );
    }
}
