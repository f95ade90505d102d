use std::f64::consts::PI;

use logtrig_core::harness::{all_pass, parse_csv_report, parse_json_report};
use logtrig_core::{
    emit_report, sweep, verify_identity, IdentityId, NuValue, Point, ReportFormat, SweepConfig,
};

fn nu(v: f64) -> NuValue {
    NuValue::new(v).unwrap()
}

#[test]
fn verify_examples() {
    let r = verify_identity(IdentityId::Series2, Point::nu(nu(0.25)), 1e-9).unwrap();
    assert!(r.pass);
    let half_pi = (0.5 * PI).ln();
    assert!(
        (r.lhs_re.unwrap() - half_pi).abs() < 1e-9 && (r.rhs_re.unwrap() - half_pi).abs() < 1e-14
    );

    let r = verify_identity(IdentityId::InfSeries0, Point::default(), 1e-9).unwrap();
    assert!(r.pass && r.nu.is_none());
    assert_eq!(r.rhs_re, Some(-std::f64::consts::LN_2));

    let r = verify_identity(IdentityId::IntThm2, Point::nu(nu(0.5)), 1e-8).unwrap();
    assert!(r.skipped && !r.pass && r.residual.is_none());
}

#[test]
fn complex_records_carry_imaginary_parts() {
    let r = verify_identity(IdentityId::Kronecker, Point::with_aux(nu(0.3), 0.4), 1e-3).unwrap();
    assert!(r.pass);
    assert!(r.lhs_im.is_some() && r.rhs_im.is_some());
    assert_eq!(r.tolerance, 1e-3);
}

#[test]
fn single_point_sweep() {
    let cfg = SweepConfig::uniform(1, 0.3, 0.3, 1e-8).with_filter(vec![IdentityId::Lerch1]);
    let records = sweep(&cfg).unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0].pass);
    assert_eq!(records[0].nu, Some(0.3));
}

#[test]
fn product_sweep() {
    let cfg = SweepConfig::default().with_filter(vec![IdentityId::InfProd]);
    let records = sweep(&cfg).unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0].pass);
    assert_eq!(records[0].rhs_re, Some(128.0 / (9.0 * PI * PI)));
}

#[test]
fn invalid_config_rejected() {
    assert!(sweep(&SweepConfig::uniform(5, 0.0, 0.5, 1e-8)).is_err());
}

#[test]
fn default_sweep_is_complete_deterministic_and_honest() {
    let cfg = SweepConfig::default();
    let first = sweep(&cfg).unwrap();
    let second = sweep(&cfg).unwrap();
    assert_eq!(first, second);

    let grid = cfg.nu_grid().len();
    let mut expected = 0;
    for id in IdentityId::ALL {
        let spec = id.spec();
        let count = match (spec.is_parameterised(), spec.aux.is_some()) {
            (false, _) => 1,
            (true, false) => grid,
            (true, true) => grid * cfg.aux_grid.len(),
        };
        let got = first.iter().filter(|r| r.id == id).count();
        assert_eq!(got, count, "{id}");
        expected += count;
    }
    assert_eq!(first.len(), expected);

    // Records follow catalog order.
    let order: Vec<usize> = first
        .iter()
        .map(|r| IdentityId::ALL.iter().position(|id| *id == r.id).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] <= w[1]));

    for r in &first {
        if let Some(res) = r.residual {
            assert!((res - r.recomputed_residual().unwrap()).abs() <= 1e-15);
            assert_eq!(r.pass, res < r.tolerance);
        }
    }
    assert!(all_pass(&first));
    assert_eq!(first.iter().filter(|r| r.skipped).count(), 1);
}

#[test]
fn json_report_round_trips() {
    let cfg = SweepConfig::default().with_filter(vec![
        IdentityId::Series3,
        IdentityId::Kronecker,
        IdentityId::IntThm2,
    ]);
    let records = sweep(&cfg).unwrap();
    let bytes = emit_report(&records, ReportFormat::Json).unwrap();
    assert_eq!(parse_json_report(&bytes).unwrap(), records);

    let one = emit_report(&records[..1], ReportFormat::Json).unwrap();
    let value: serde_json::Value = serde_json::from_slice(&one).unwrap();
    let array = value.as_array().unwrap();
    assert_eq!(array.len(), 1);
    let keys: Vec<&str> = array[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    let mut want = vec![
        "id",
        "nu",
        "aux",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "residual",
        "tolerance",
        "pass",
        "skipped",
        "reason",
        "work",
    ];
    let mut got = keys.clone();
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn csv_report_has_header_and_rows() {
    let cfg = SweepConfig::default().with_filter(vec![IdentityId::Series2, IdentityId::IntThm2]);
    let records = sweep(&cfg).unwrap();
    let bytes = emit_report(&records, ReportFormat::Csv).unwrap();
    let text = String::from_utf8(bytes.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "id,nu,aux,lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,pass,skipped,reason,work"
    );
    assert_eq!(lines.count(), records.len());
    assert_eq!(parse_csv_report(&bytes).unwrap(), records);
}

#[test]
fn text_report_summarises() {
    let cfg =
        SweepConfig::default().with_filter(vec![IdentityId::LemmaLerch2, IdentityId::IntThm2]);
    let mut records = sweep(&cfg).unwrap();
    let text = String::from_utf8(emit_report(&records, ReportFormat::Text).unwrap()).unwrap();
    assert!(text.trim_end().ends_with("ALL PASS"));
    assert!(text.contains("lemma-lerch2") && text.contains("O(1/N)"));
    assert!(text.contains("skipped: int-thm2"));

    records[0].pass = false;
    records[0].residual = Some(1.0);
    let text = String::from_utf8(emit_report(&records, ReportFormat::Text).unwrap()).unwrap();
    assert!(!text.contains("ALL PASS"));
    assert!(text.contains("FAILED: 1 of"));
}
