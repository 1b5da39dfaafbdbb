//! Numerical laboratory for a mean-field polymer pinning model: critical
//! coupling via the Birman-Schwinger principal eigenvalue, near-critical
//! eigenvalue asymptotics, the polymer radius r(beta, t) from a radial
//! forced heat equation cross-checked by Feynman-Kac Monte Carlo, and
//! sweep-level verification of the globular/extended scaling bands.

pub mod config;
pub mod error;
pub mod output;
pub mod potential;
pub mod propagator;
pub mod quadrature;
pub mod scaling;
pub mod spectral;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use potential::{Potential, Profile};
pub use propagator::{
    endpoint_density, feynman_kac_mc, moments, solve_forced_heat, McEstimate, McResult,
    MomentRecord, Regime, SolverConfig,
};
pub use scaling::{fit_alpha_minus, fit_alpha_plus, run_sweep, RegimeReport, SweepSpec};
pub use spectral::{
    beta_critical, kappa, lambda0, sigma0, varsigma, Branch, CriticalData, SpectralCurve,
    SpectralOpts,
};
