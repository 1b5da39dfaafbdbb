//! File emission: atomic writes, CSV with fixed headers, JSON records.
//! Floats print with 17 significant digits so reruns round-trip bit-exactly.

use crate::error::{Error, Result};
use crate::propagator::MomentRecord;
use crate::scaling::{band_ratio, RegimeReport};
use crate::spectral::SpectralCurve;
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits: enough to reconstruct any f64 exactly.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

/// Write via a temp file in the same directory plus rename, so an
/// interrupted run never leaves a truncated artifact behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub const MOMENT_HEADER: &str = "beta,t,Z,m0,m2,r,gamma,chi,regime";
pub const SWEEP_HEADER: &str = "beta,t,Z,m0,m2,r,gamma,chi,regime,band_ratio";

fn moment_fields(rec: &MomentRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        fmt_float(rec.beta),
        fmt_float(rec.t),
        fmt_float(rec.z),
        fmt_float(rec.m0),
        fmt_float(rec.m2),
        fmt_float(rec.r),
        fmt_float(rec.gamma),
        fmt_float(rec.chi),
        rec.regime
    )
}

pub fn moments_csv(records: &[MomentRecord]) -> String {
    let mut out = String::from(MOMENT_HEADER);
    out.push('\n');
    for rec in records {
        out.push_str(&moment_fields(rec));
        out.push('\n');
    }
    out
}

pub fn sweep_csv(report: &RegimeReport) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for rec in &report.records {
        let _ = writeln!(
            out,
            "{},{}",
            moment_fields(rec),
            fmt_float(band_ratio(rec, report.beta_cr))
        );
    }
    out
}

pub fn curve_csv(curve: &SpectralCurve) -> String {
    let mut out = String::from("k,sigma0\n");
    for (&k, &s) in curve.k_samples.iter().zip(&curve.sigma0_values) {
        let _ = writeln!(out, "{},{}", fmt_float(k), fmt_float(s));
    }
    out
}

pub fn density_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("r,q\n");
    for &(r, q) in samples {
        let _ = writeln!(out, "{},{}", fmt_float(r), fmt_float(q));
    }
    out
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Machine-readable error record emitted on nonzero exits.
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::{classify_chi, Regime};

    fn rec() -> MomentRecord {
        MomentRecord {
            beta: 1.25,
            t: 100.0,
            z: 2.0,
            m0: 2.0,
            m2: 600.0,
            r: (300.0_f64).sqrt(),
            gamma: 0.0123,
            chi: 0.163,
            regime: classify_chi(0.163),
        }
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[1.0, std::f64::consts::PI, 1.0e-300, -3.5e17, 0.1 + 0.2] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(f64::NAN), "nan");
    }

    #[test]
    fn moment_csv_has_exact_header_and_row_shape() {
        let csv = moments_csv(&[rec()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "beta,t,Z,m0,m2,r,gamma,chi,regime");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 9);
        assert_eq!(row[8], "extended");
        assert_eq!(row[0].parse::<f64>().unwrap(), 1.25);
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
    }

    #[test]
    fn regime_display_matches_csv_vocabulary() {
        assert_eq!(Regime::Globular.to_string(), "globular");
        assert_eq!(Regime::Extended.to_string(), "extended");
    }
}
