//! Error taxonomy shared by every module of the crate.
//!
//! The variants map onto the CLI's exit-code contract:
//! input/parameter guards exit 2, integration-accuracy failures exit 3,
//! trace-analysis input failures exit 4.

use thiserror::Error;

/// All failure modes of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The resonance condition N·E'(r) = ħ has no root in the search range.
    #[error("no resonant level: N·E'(r) = {hbar_eff} has no root for r in [1, {n_max_search}]")]
    NoResonance { hbar_eff: f64, n_max_search: f64 },

    /// Integer Mathieu order: the a/b band-edge splitting is not modeled.
    #[error("degenerate Mathieu order: nu = {nu} is within 1e-6 of an integer (band-edge splitting not modeled)")]
    DegenerateOrder { nu: f64 },

    /// The perturbative series is singular at nu = ±1 (resonant order).
    #[error("singular Mathieu order: |nu^2 - 1| = {gap:.3e} <= 1e-6 at nu = {nu} (series valid only away from nu = ±1)")]
    SingularOrder { nu: f64, gap: f64 },

    /// E''(r) = 0: the quasi-energy mapping needs spectrum curvature.
    #[error("flat spectrum: E''(r) = 0 at r = {r}; the quasi-energy mapping requires curvature")]
    FlatSpectrum { r: f64 },

    /// The Mathieu matrix eigenvalue did not converge in truncation size.
    #[error("Mathieu matrix did not converge: err_estimate = {err_estimate:.3e} > 1e-8 at truncation M = {truncation}")]
    Convergence { err_estimate: f64, truncation: usize },

    /// The level window cannot hold the requested wave packet.
    #[error("window error: {0}")]
    Window(String),

    /// Norm drift exceeded tolerance during propagation.
    #[error("integration accuracy: norm drift {drift:.3e} > 1e-6 at t = {t}; retry with dt <= {suggested_dt:.3e}")]
    IntegrationAccuracy { drift: f64, t: f64, suggested_dt: f64 },

    /// Truncation-boundary level acquired non-negligible population.
    #[error("boundary population: level {level} reached {population:.3e} > 1e-10 at t = {t}; enlarge the window")]
    BoundaryPopulation { level: i64, population: f64, t: f64 },

    /// A trace is too short for the requested analysis.
    #[error("trace too short: {needed} samples needed, {got} present")]
    TraceTooShort { needed: usize, got: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI contract: 2 = parameter/domain guard,
    /// 3 = integration accuracy, 4 = analysis input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::NoResonance { .. }
            | Error::DegenerateOrder { .. }
            | Error::SingularOrder { .. }
            | Error::FlatSpectrum { .. }
            | Error::Convergence { .. }
            | Error::Window(_) => 2,
            Error::IntegrationAccuracy { .. } | Error::BoundaryPopulation { .. } => 3,
            Error::TraceTooShort { .. } => 4,
        }
    }
}
