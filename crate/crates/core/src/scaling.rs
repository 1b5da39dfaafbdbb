//! Sweeps of the (beta, t) plane and verification of the two-band radius
//! scaling law: r ~ (beta - beta_cr)^-1 in the globular band
//! (chi = (beta - beta_cr) sqrt(t) >= 1) and r ~ sqrt(t) in the extended
//! band (chi <= 1), with the limiting coefficients alpha_plus and
//! alpha_minus extracted by extrapolation.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::propagator::{classify_chi, moments, MomentRecord, Regime, SolverConfig};
use crate::spectral::{CriticalData, SpectralOpts};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Fixed-beta rows: values of (beta - beta_cr) / beta_cr.
    pub beta_offsets: Vec<f64>,
    /// Fixed-chi rows: beta co-varies with t as beta = beta_cr + chi / sqrt(t).
    #[serde(default)]
    pub chi_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub solver: SolverConfig,
    /// Band verdicts pass when max/min of the normalized ratio stays below
    /// this bound.
    pub band_bound: f64,
}

impl SweepSpec {
    pub fn validate(&self, opts: &SpectralOpts) -> Result<()> {
        for &o in &self.beta_offsets {
            if o.abs() > opts.window_rel {
                return Err(Error::InvalidArgument(format!(
                    "beta offset {o} outside validity window {}",
                    opts.window_rel
                )));
            }
        }
        if self.t_values.is_empty() {
            return Err(Error::InvalidArgument("t_values must be nonempty".into()));
        }
        for w in self.t_values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument(
                    "t_values must be strictly increasing".into(),
                ));
            }
        }
        if !(self.band_bound > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "band_bound must exceed 1, got {}",
                self.band_bound
            )));
        }
        self.solver.validate()
    }
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            beta_offsets: vec![-0.1, -0.05, -0.02, 0.0, 0.02, 0.05, 0.1],
            chi_values: vec![],
            t_values: (0..5).map(|j| 10.0 * 4.0_f64.powi(j)).collect(),
            solver: SolverConfig::default(),
            band_bound: 10.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepFailure {
    pub beta: f64,
    pub t: f64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BandSummary {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlphaPlus {
    pub beta: f64,
    pub estimate: f64,
    /// Distance of the third-largest-t point from the extrapolation line.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AlphaMinus {
    pub chi: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeReport {
    pub records: Vec<MomentRecord>,
    pub failures: Vec<SweepFailure>,
    /// r (beta - beta_cr) over chi >= 1 points.
    pub band1: BandSummary,
    /// r / sqrt(t) over chi <= 1 points.
    pub band2: BandSummary,
    pub alpha_plus: Vec<AlphaPlus>,
    pub alpha_minus: Vec<AlphaMinus>,
    /// Hypothesis flag, not a theorem claim: is the alpha_minus profile
    /// monotone decreasing in chi?
    pub alpha_minus_monotone: Option<bool>,
    pub verdict: bool,
    pub beta_cr: f64,
    /// chi = 1 is assigned to the globular regime and included in both bands.
    pub boundary_assignment: String,
}

/// Normalized band ratio of a record: r (beta - beta_cr) in the globular
/// band, r / sqrt(t) in the extended band.
pub fn band_ratio(rec: &MomentRecord, beta_cr: f64) -> f64 {
    match rec.regime {
        Regime::Globular => rec.r * (rec.beta - beta_cr),
        Regime::Extended => rec.r / rec.t.sqrt(),
    }
}

pub fn classify_regime(beta: f64, t: f64, crit: &CriticalData) -> (f64, Regime) {
    let chi = (beta - crit.beta_cr) * t.sqrt();
    (chi, classify_chi(chi))
}

fn band_summary<'a>(
    records: impl Iterator<Item = &'a MomentRecord>,
    beta_cr: f64,
    globular: bool,
    bound: f64,
) -> BandSummary {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut points = 0;
    for rec in records {
        // chi = 1 belongs to both bands (non-exclusive inequalities)
        let in_band = if globular { rec.chi >= 1.0 } else { rec.chi <= 1.0 };
        if !in_band {
            continue;
        }
        let ratio = if globular {
            rec.r * (rec.beta - beta_cr)
        } else {
            rec.r / rec.t.sqrt()
        };
        min = min.min(ratio);
        max = max.max(ratio);
        points += 1;
    }
    if points == 0 {
        return BandSummary {
            ratio_min: f64::NAN,
            ratio_max: f64::NAN,
            points: 0,
            pass: true,
        };
    }
    BandSummary {
        ratio_min: min,
        ratio_max: max,
        points,
        pass: min > 0.0 && max / min <= bound,
    }
}

pub fn run_sweep(
    p: &Potential,
    spec: &SweepSpec,
    crit: &CriticalData,
    opts: &SpectralOpts,
) -> Result<RegimeReport> {
    spec.validate(opts)?;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &offset in &spec.beta_offsets {
        for &t in &spec.t_values {
            points.push((crit.beta_cr * (1.0 + offset), t));
        }
    }
    for &chi in &spec.chi_values {
        for &t in &spec.t_values {
            points.push((crit.beta_cr + chi / t.sqrt(), t));
        }
    }
    let results: Vec<(f64, f64, Result<MomentRecord>)> = points
        .par_iter()
        .map(|&(beta, t)| (beta, t, moments(p, beta, t, &spec.solver, crit, opts)))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (beta, t, res) in results {
        match res {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(SweepFailure {
                beta,
                t,
                error: e.to_string(),
            }),
        }
    }
    let total = points.len();
    if failures.len() * 10 > total {
        return Err(Error::ExcessiveFailures {
            failed: failures.len(),
            total,
        });
    }
    records.sort_by(|a, b| (a.beta, a.t).partial_cmp(&(b.beta, b.t)).unwrap());

    let band1 = band_summary(records.iter(), crit.beta_cr, true, spec.band_bound);
    let band2 = band_summary(records.iter(), crit.beta_cr, false, spec.band_bound);
    let alpha_plus = fit_alpha_plus(&records, crit.beta_cr)
        .into_iter()
        .filter_map(|(_, r)| r.ok())
        .collect();
    let alpha_minus = fit_alpha_minus(&records)?;
    let alpha_minus_monotone = if alpha_minus.len() >= 2 {
        Some(
            alpha_minus
                .windows(2)
                .all(|w| w[1].estimate <= w[0].estimate),
        )
    } else {
        None
    };
    Ok(RegimeReport {
        verdict: band1.pass && band2.pass,
        records,
        failures,
        band1,
        band2,
        alpha_plus,
        alpha_minus,
        alpha_minus_monotone,
        beta_cr: crit.beta_cr,
        boundary_assignment: "chi = 1 classified globular; included in both bands".into(),
    })
}

/// Per-beta extrapolation of r (beta - beta_cr) to 1/(gamma^2 t) -> 0 from
/// the two largest-t globular points; needs >= 3 in-regime points with
/// gamma^2 t >= 4.
pub fn fit_alpha_plus(records: &[MomentRecord], beta_cr: f64) -> Vec<(f64, Result<AlphaPlus>)> {
    let mut betas: Vec<f64> = Vec::new();
    for rec in records {
        if !betas.iter().any(|&b| (b - rec.beta).abs() <= 1e-12 * beta_cr.abs().max(1.0)) {
            betas.push(rec.beta);
        }
    }
    betas.sort_by(f64::total_cmp);
    betas
        .into_iter()
        .map(|beta| {
            let mut group: Vec<&MomentRecord> = records
                .iter()
                .filter(|rec| {
                    (rec.beta - beta).abs() <= 1e-12 * beta_cr.abs().max(1.0)
                        && rec.regime == Regime::Globular
                        && rec.gamma.is_finite()
                        && rec.gamma * rec.gamma * rec.t >= 4.0
                })
                .collect();
            group.sort_by(|a, b| a.t.total_cmp(&b.t));
            if group.len() < 3 {
                return (
                    beta,
                    Err(Error::InsufficientPoints {
                        beta,
                        found: group.len(),
                        needed: 3,
                    }),
                );
            }
            let point = |rec: &MomentRecord| {
                (
                    1.0 / (rec.gamma * rec.gamma * rec.t),
                    rec.r * (rec.beta - beta_cr),
                )
            };
            let (x1, y1) = point(group[group.len() - 2]);
            let (x2, y2) = point(group[group.len() - 1]);
            let slope = (y2 - y1) / (x2 - x1);
            let estimate = y2 - slope * x2;
            let (x3, y3) = point(group[group.len() - 3]);
            let residual = (y3 - (estimate + slope * x3)).abs();
            (
                beta,
                Ok(AlphaPlus {
                    beta,
                    estimate,
                    residual,
                }),
            )
        })
        .collect()
}

/// alpha_minus(chi) from extended-regime records at matched chi:
/// least-squares fit of r / sqrt(t) against 1/sqrt(t), intercept taken as
/// the t -> infinity limit. Groups need >= 3 distinct t values; chi must
/// match within 1e-9 inside a group.
pub fn fit_alpha_minus(records: &[MomentRecord]) -> Result<Vec<AlphaMinus>> {
    const CHI_TOL: f64 = 1e-9;
    let mut extended: Vec<&MomentRecord> = records
        .iter()
        .filter(|rec| rec.regime == Regime::Extended)
        .collect();
    extended.sort_by(|a, b| a.chi.total_cmp(&b.chi));
    let mut profile = Vec::new();
    let mut i = 0;
    while i < extended.len() {
        let mut j = i + 1;
        while j < extended.len() && (extended[j].chi - extended[i].chi).abs() <= CHI_TOL {
            j += 1;
        }
        let group = &extended[i..j];
        let chi = group[0].chi;
        if group.iter().any(|rec| (rec.chi - chi).abs() > CHI_TOL) {
            return Err(Error::UnmatchedChi { chi });
        }
        let mut ts: Vec<f64> = group.iter().map(|rec| rec.t).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if ts.len() >= 3 {
            // least squares y = a + c x, x = 1/sqrt(t), y = r/sqrt(t)
            let n = group.len() as f64;
            let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
            for rec in group {
                let x = 1.0 / rec.t.sqrt();
                let y = rec.r / rec.t.sqrt();
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            let denom = n * sxx - sx * sx;
            let slope = (n * sxy - sx * sy) / denom;
            let intercept = (sy - slope * sx) / n;
            profile.push(AlphaMinus {
                chi,
                estimate: intercept,
            });
        }
        i = j;
    }
    Ok(profile)
}
