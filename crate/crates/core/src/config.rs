//! Run configuration: a strict TOML schema with dotted sections. Unknown
//! keys are rejected so typos fail loudly instead of silently falling back
//! to defaults.

use crate::error::{Error, Result};
use crate::potential::{Potential, Profile};
use crate::propagator::SolverConfig;
use crate::scaling::SweepSpec;
use crate::spectral::SpectralOpts;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialSection,
    #[serde(default)]
    pub spectral: SpectralSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub kind: String,
    pub b: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectralSection {
    pub n_nodes: usize,
    /// Validity window for lambda0 as a fraction of beta_cr.
    pub window_rel: f64,
    /// Bracketing interval for root-finding, in units of 1/b.
    pub k_min_factor: f64,
    pub k_max_factor: f64,
    /// Sampling grid for the sigma0 curve export, in units of 1/b.
    pub k_grid_min: f64,
    pub k_grid_max: f64,
    pub k_grid_points: usize,
}

impl Default for SpectralSection {
    fn default() -> Self {
        let opts = SpectralOpts::default();
        Self {
            n_nodes: opts.n_nodes,
            window_rel: opts.window_rel,
            k_min_factor: opts.k_min_factor,
            k_max_factor: opts.k_max_factor,
            k_grid_min: -1.0,
            k_grid_max: 10.0,
            k_grid_points: 45,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub dr: f64,
    pub dt: f64,
    pub domain_factor: f64,
    pub mc_paths: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_step: Option<f64>,
    pub seed: u64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let cfg = SolverConfig::default();
        Self {
            dr: cfg.dr,
            dt: cfg.dt,
            domain_factor: cfg.domain_factor,
            mc_paths: cfg.mc_paths,
            mc_step: cfg.mc_step,
            seed: cfg.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub beta_offsets: Vec<f64>,
    pub chi_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub band_bound: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        let spec = SweepSpec::default();
        Self {
            beta_offsets: spec.beta_offsets,
            chi_values: spec.chi_values,
            t_values: spec.t_values,
            band_bound: spec.band_bound,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    /// Subset of {"csv", "json"}.
    pub formats: Vec<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            formats: vec!["csv".into(), "json".into()],
        }
    }
}

fn one() -> f64 {
    1.0
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.spectral.n_nodes < 16 {
            return Err(Error::Config(format!(
                "spectral.n_nodes must be >= 16, got {}",
                self.spectral.n_nodes
            )));
        }
        if !(self.spectral.window_rel > 0.0) {
            return Err(Error::Config("spectral.window_rel must be > 0".into()));
        }
        if !(self.spectral.k_grid_min < self.spectral.k_grid_max)
            || self.spectral.k_grid_points < 2
        {
            return Err(Error::Config("invalid spectral k grid".into()));
        }
        for f in &self.output.formats {
            if f != "csv" && f != "json" {
                return Err(Error::Config(format!("unknown output format {f:?}")));
            }
        }
        self.build_potential()?;
        self.solver_config().validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn build_potential(&self) -> Result<Potential> {
        let p = &self.potential;
        match p.kind.as_str() {
            "indicator" => Potential::indicator(p.b, p.amplitude),
            "smooth_bump" => Potential::smooth_bump(p.b, p.amplitude),
            "tabulated" => {
                let samples = p
                    .samples
                    .clone()
                    .ok_or_else(|| Error::Config("tabulated potential needs samples".into()))?;
                Potential::new(Profile::Tabulated { samples }, p.b, p.amplitude)
            }
            other => Err(Error::Config(format!("unknown potential kind {other:?}"))),
        }
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn spectral_opts(&self) -> SpectralOpts {
        SpectralOpts {
            n_nodes: self.spectral.n_nodes,
            window_rel: self.spectral.window_rel,
            k_min_factor: self.spectral.k_min_factor,
            k_max_factor: self.spectral.k_max_factor,
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            dr: self.solver.dr,
            dt: self.solver.dt,
            domain_factor: self.solver.domain_factor,
            mc_paths: self.solver.mc_paths,
            mc_step: self.solver.mc_step,
            seed: self.solver.seed,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            beta_offsets: self.sweep.beta_offsets.clone(),
            chi_values: self.sweep.chi_values.clone(),
            t_values: self.sweep.t_values.clone(),
            solver: self.solver_config(),
            band_bound: self.sweep.band_bound,
        }
    }

    /// k grid for the sigma0 curve export, in absolute units.
    pub fn k_grid(&self) -> Vec<f64> {
        let s = &self.spectral;
        let scale = 1.0 / self.potential.b;
        let n = s.k_grid_points;
        (0..n)
            .map(|i| {
                let frac = i as f64 / (n - 1) as f64;
                scale * (s.k_grid_min + frac * (s.k_grid_max - s.k_grid_min))
            })
            .collect()
    }
}
