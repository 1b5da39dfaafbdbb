//! Fundamental-solution moments, partition function, and polymer radius.
//!
//! The fundamental solution is split as p_beta = p0 + u with p0 the free
//! Gaussian kernel (treated analytically throughout) and u the solution of
//! the forced problem u_t = (1/2) Lap u + beta v u + beta v p0, u(0) = 0.
//! The deterministic route solves the radial problem for w = r u by
//! Crank-Nicolson; the Feynman-Kac Monte Carlo route is an independent
//! cross-check of the same moments.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::quadrature::simpson_uniform;
use crate::spectral::{lambda0, Branch, CriticalData, SpectralOpts};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Radial step.
    pub dr: f64,
    /// Requested time step; the solve additionally caps it so that
    /// max(beta v) dt <= 0.1.
    pub dt: f64,
    /// Domain truncation multiplier: R = b + domain_factor * sqrt(t).
    pub domain_factor: f64,
    pub mc_paths: usize,
    /// Euler step for the Monte Carlo route; None means min(0.01, t/100).
    pub mc_step: Option<f64>,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dr: 0.025,
            dt: 0.05,
            domain_factor: 8.0,
            mc_paths: 100_000,
            mc_step: None,
            seed: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dr > 0.0) {
            return Err(Error::InvalidArgument(format!("dr must be > 0, got {}", self.dr)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.domain_factor >= 4.0) {
            return Err(Error::InvalidArgument(format!(
                "domain_factor must be >= 4, got {}",
                self.domain_factor
            )));
        }
        if self.mc_paths < 1_000 {
            return Err(Error::InvalidArgument(format!(
                "mc_paths must be >= 1000, got {}",
                self.mc_paths
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Globular,
    Extended,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Globular => write!(f, "globular"),
            Regime::Extended => write!(f, "extended"),
        }
    }
}

/// One point of the radius surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentRecord {
    pub beta: f64,
    pub t: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub m0: f64,
    pub m2: f64,
    pub r: f64,
    /// Signed sqrt(lambda0): negative on the resonance branch. NaN when
    /// beta lies outside the spectral validity window.
    pub gamma: f64,
    pub chi: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_paths: usize,
}

impl McEstimate {
    /// Relative standard error above 5% signals an under-resolved estimate.
    pub fn under_resolved(&self) -> bool {
        self.stderr > 0.05 * self.mean.abs()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McResult {
    pub z: McEstimate,
    pub m2: McEstimate,
    pub r: f64,
    /// Standard error of r propagated from the two estimates.
    pub r_stderr: f64,
}

/// Radial profile u(t, r) on a uniform grid 0..=n (r = i dr), with u(0)
/// filled by one-sided extrapolation of w/r.
#[derive(Debug, Clone)]
pub struct HeatSolution {
    pub dr: f64,
    pub t: f64,
    pub u: Vec<f64>,
}

const BOUNDARY_MASS_LIMIT: f64 = 1e-12;

/// Crank-Nicolson solve of the forced radial problem for w = r u:
/// w_t = (1/2) w_rr + beta v w + beta v r p0, with w = 0 at both ends of
/// [0, R], R = b + domain_factor sqrt(t). The reaction coefficient is
/// cell-averaged so discontinuous potentials keep second-order accuracy.
pub fn solve_forced_heat(
    p: &Potential,
    beta: f64,
    t: f64,
    cfg: &SolverConfig,
) -> Result<HeatSolution> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be > 0, got {t}")));
    }
    if !(beta >= 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be >= 0, got {beta}")));
    }
    let b = p.support_radius;
    let big_r = b + cfg.domain_factor * t.sqrt();
    let n = (big_r / cfg.dr).ceil() as usize;
    let n = n.max(8);
    let dr = big_r / n as f64;

    let (_, vmax) = p.norms();
    let mut dt = cfg.dt;
    if beta > 0.0 {
        dt = dt.min(0.1 / (beta * vmax));
    }
    let steps = (t / dt).ceil() as usize;
    let dt = t / steps as f64;

    // interior nodes i = 1..n-1
    let m = n - 1;
    let r: Vec<f64> = (1..n).map(|i| i as f64 * dr).collect();
    let v: Vec<f64> = r
        .iter()
        .map(|&ri| beta * p.cell_average(ri - 0.5 * dr, ri + 0.5 * dr))
        .collect();

    // CN: (I - dt/2 A) w_new = (I + dt/2 A) w + dt f(tau + dt/2)
    // A tridiagonal: off = 1/(2 dr^2), diag_i = -1/dr^2 + beta v_i
    let off = 0.5 / (dr * dr);
    let diag: Vec<f64> = v.iter().map(|&vi| -1.0 / (dr * dr) + vi).collect();

    // constant-matrix Thomas factorization of (I - dt/2 A)
    let a_off = -0.5 * dt * off;
    let lhs_diag: Vec<f64> = diag.iter().map(|&d| 1.0 - 0.5 * dt * d).collect();
    let mut cp = vec![0.0; m]; // modified upper diagonal
    let mut denom = vec![0.0; m];
    denom[0] = lhs_diag[0];
    cp[0] = a_off / denom[0];
    for i in 1..m {
        denom[i] = lhs_diag[i] - a_off * cp[i - 1];
        cp[i] = a_off / denom[i];
    }

    // indices with nonzero forcing (inside the potential support)
    let forced: Vec<usize> = (0..m).filter(|&i| v[i] != 0.0).collect();

    let mut w = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let mut tau = 0.0;
    for _ in 0..steps {
        // explicit half of CN
        rhs[0] = (1.0 + 0.5 * dt * diag[0]) * w[0] + 0.5 * dt * off * w[1];
        for i in 1..m - 1 {
            rhs[i] = (1.0 + 0.5 * dt * diag[i]) * w[i] + 0.5 * dt * off * (w[i - 1] + w[i + 1]);
        }
        rhs[m - 1] = (1.0 + 0.5 * dt * diag[m - 1]) * w[m - 1] + 0.5 * dt * off * w[m - 2];
        // forcing at the half step
        if beta > 0.0 {
            let th = tau + 0.5 * dt;
            let norm = (2.0 * std::f64::consts::PI * th).powf(1.5);
            for &i in &forced {
                let ri = r[i];
                rhs[i] += dt * v[i] * ri * (-ri * ri / (2.0 * th)).exp() / norm;
            }
        }
        // Thomas substitution
        rhs[0] /= denom[0];
        for i in 1..m {
            rhs[i] = (rhs[i] - a_off * rhs[i - 1]) / denom[i];
        }
        w[m - 1] = rhs[m - 1];
        for i in (0..m - 1).rev() {
            w[i] = rhs[i] - cp[i] * w[i + 1];
        }
        tau += dt;
    }

    // u on the full grid 0..=n; u(0) by linear extrapolation of w/r
    let mut u = vec![0.0; n + 1];
    for i in 0..m {
        u[i + 1] = w[i] / r[i];
    }
    u[0] = 2.0 * u[1] - u[2];
    u[n] = 0.0;

    let umax = u.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    if umax > 0.0 {
        let boundary = u[n - 1].abs() / umax;
        if boundary > BOUNDARY_MASS_LIMIT {
            return Err(Error::DomainTooSmall {
                boundary,
                limit: BOUNDARY_MASS_LIMIT,
            });
        }
    }

    Ok(HeatSolution { dr, t, u })
}

impl HeatSolution {
    /// nu-th radial moment of u: 4 pi int r^{2+nu} u dr.
    pub fn moment(&self, nu: u32) -> f64 {
        let vals: Vec<f64> = self
            .u
            .iter()
            .enumerate()
            .map(|(i, &ui)| {
                let r = i as f64 * self.dr;
                r.powi(nu as i32 + 2) * ui
            })
            .collect();
        4.0 * std::f64::consts::PI * simpson_uniform(&vals, self.dr)
    }
}

/// Signed gamma and chi for a record; gamma is NaN when lambda0 is not
/// defined at this beta (outside the validity window).
fn gamma_chi(
    p: &Potential,
    beta: f64,
    t: f64,
    crit: &CriticalData,
    opts: &SpectralOpts,
) -> (f64, f64) {
    let chi = (beta - crit.beta_cr) * t.sqrt();
    let gamma = match lambda0(p, beta, crit, opts) {
        Ok(root) => match root.branch {
            Branch::Critical => 0.0,
            _ => root.k_root,
        },
        Err(_) => f64::NAN,
    };
    (gamma, chi)
}

pub fn classify_chi(chi: f64) -> Regime {
    // the theorem's overlap point chi = 1 is assigned to the globular band
    if chi >= 1.0 {
        Regime::Globular
    } else {
        Regime::Extended
    }
}

/// Deterministic moments via the PDE route:
/// p_beta^(nu) = p0^(nu) + u^(nu) with p0^(0) = 1 and p0^(2) = 3t analytic.
pub fn moments(
    p: &Potential,
    beta: f64,
    t: f64,
    cfg: &SolverConfig,
    crit: &CriticalData,
    opts: &SpectralOpts,
) -> Result<MomentRecord> {
    let sol = solve_forced_heat(p, beta, t, cfg)?;
    let u0 = sol.moment(0);
    let u2 = sol.moment(2);
    let m0 = 1.0 + u0;
    let m2 = 3.0 * t + u2;
    let (gamma, chi) = gamma_chi(p, beta, t, crit, opts);
    Ok(MomentRecord {
        beta,
        t,
        z: m0,
        m0,
        m2,
        r: (m2 / m0).sqrt(),
        gamma,
        chi,
        regime: classify_chi(chi),
    })
}

/// Radial endpoint density q(r) = (p0(t, r) + u(t, r)) / Z on the solver grid.
pub fn endpoint_density(
    p: &Potential,
    beta: f64,
    t: f64,
    cfg: &SolverConfig,
) -> Result<Vec<(f64, f64)>> {
    let sol = solve_forced_heat(p, beta, t, cfg)?;
    let z = 1.0 + sol.moment(0);
    let norm = (2.0 * std::f64::consts::PI * t).powf(1.5);
    Ok(sol
        .u
        .iter()
        .enumerate()
        .map(|(i, &ui)| {
            let r = i as f64 * sol.dr;
            let p0 = (-r * r / (2.0 * t)).exp() / norm;
            (r, (p0 + ui) / z)
        })
        .collect())
}

const MC_BLOCK: usize = 1024;

/// Feynman-Kac Monte Carlo: Euler-Maruyama Brownian paths from the origin
/// with trapezoidal accumulation of the potential integral. Deterministic
/// given the seed: every path draws from its own counter-derived stream and
/// the reduction runs over fixed blocks in index order.
pub fn feynman_kac_mc(p: &Potential, beta: f64, t: f64, cfg: &SolverConfig) -> Result<McResult> {
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be > 0, got {t}")));
    }
    let step = cfg.mc_step.unwrap_or_else(|| (0.01_f64).min(t / 100.0));
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("mc_step must be > 0, got {step}")));
    }
    let n_steps = (t / step).ceil() as usize;
    let h = t / n_steps as f64;
    let sqrt_h = h.sqrt();
    let n_paths = cfg.mc_paths;
    let n_blocks = n_paths.div_ceil(MC_BLOCK);

    let partials: Vec<[f64; 4]> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let lo = block * MC_BLOCK;
            let hi = ((block + 1) * MC_BLOCK).min(n_paths);
            let mut acc = [0.0_f64; 4]; // sum W, sum W^2, sum |x|^2 W, sum (|x|^2 W)^2
            for path in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(path as u64);
                let mut x = [0.0_f64; 3];
                let mut v_prev = p.evaluate(0.0);
                let mut action = 0.0;
                for _ in 0..n_steps {
                    for xi in x.iter_mut() {
                        let g: f64 = rng.sample(StandardNormal);
                        *xi += sqrt_h * g;
                    }
                    let radius = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                    let v_cur = p.evaluate(radius);
                    action += 0.5 * (v_prev + v_cur) * h;
                    v_prev = v_cur;
                }
                let weight = (beta * action).exp();
                let sq = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                acc[0] += weight;
                acc[1] += weight * weight;
                acc[2] += sq * weight;
                acc[3] += (sq * weight) * (sq * weight);
            }
            acc
        })
        .collect();

    let mut sums = [0.0_f64; 4];
    for part in &partials {
        for (s, &v) in sums.iter_mut().zip(part) {
            *s += v;
        }
    }
    let nf = n_paths as f64;
    let mean_w = sums[0] / nf;
    let var_w = (sums[1] / nf - mean_w * mean_w).max(0.0);
    let mean_m2 = sums[2] / nf;
    let var_m2 = (sums[3] / nf - mean_m2 * mean_m2).max(0.0);
    let z = McEstimate {
        mean: mean_w,
        stderr: (var_w / nf).sqrt(),
        n_paths,
    };
    let m2 = McEstimate {
        mean: mean_m2,
        stderr: (var_m2 / nf).sqrt(),
        n_paths,
    };
    let r = (m2.mean / z.mean).sqrt();
    let rel = 0.5
        * ((m2.stderr / m2.mean).powi(2) + (z.stderr / z.mean).powi(2)).sqrt();
    Ok(McResult {
        z,
        m2,
        r,
        r_stderr: r * rel,
    })
}
