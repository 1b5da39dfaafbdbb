use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("power iteration did not converge within {iterations} iterations (last relative change {last_change:.3e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("no root bracket for beta = {beta} in k ∈ [{k_min}, {k_max}]; beta is outside the perturbative window")]
    NoBracket { beta: f64, k_min: f64, k_max: f64 },

    #[error("coupling beta = {beta} outside validity window |beta - beta_cr| <= {window} (beta_cr = {beta_cr})")]
    WindowExceeded { beta: f64, beta_cr: f64, window: f64 },

    #[error("solution mass at the domain boundary ({boundary:.3e} relative to max) exceeds {limit:.1e}; increase domain_factor")]
    DomainTooSmall { boundary: f64, limit: f64 },

    #[error("curvature estimates disagree by {disagreement:.1}% (> {limit:.0}%); resolution too coarse")]
    ResolutionTooCoarse { disagreement: f64, limit: f64 },

    #[error("{failed} of {total} sweep points failed (> 10%)")]
    ExcessiveFailures { failed: usize, total: usize },

    #[error("insufficient in-regime points for beta = {beta}: {found} found, {needed} needed")]
    InsufficientPoints { beta: f64, found: usize, needed: usize },

    #[error("chi values not matched across t within 1e-9 (group chi = {chi})")]
    UnmatchedChi { chi: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
