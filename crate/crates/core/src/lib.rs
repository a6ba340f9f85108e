//! Analytic and numerical tools for quantum revival time scales in
//! periodically driven single-well systems.
//!
//! A wave packet launched on a ladder of unperturbed levels `E_n` and driven
//! at strength `λ` near an `N`-photon resonance develops structure on three
//! nested time scales: the classical oscillation period, the revival period,
//! and the super-revival period. This crate computes all three **two
//! independent ways** and lets them confront each other:
//!
//! * **Prediction** — expand the levels around the resonant index `r`, map
//!   the slow dynamics onto the characteristic-value problem of the Mathieu
//!   equation, and read the time scales off the first three derivatives of
//!   the characteristic value `a(ν, q)` ([`quasienergy::time_scales`]).
//! * **Measurement** — integrate the driven Schrödinger equation directly in
//!   the level basis ([`propagate::evolve`]), record the autocorrelation
//!   `A(t) = ⟨ψ(0)|ψ(t)⟩`, and extract the same scales from the peak comb,
//!   collapse, and recurrence structure of `|A(t)|²`
//!   ([`analysis::measure_timescales`]).
//!
//! Modules:
//!
//! * [`spectrum`] — level families (infinite square well, power law),
//!   derivatives, resonance location, drive coupling matrices.
//! * [`mathieu`] — Mathieu characteristic values `a(ν, q)` by truncated
//!   matrix diagonalization and by small-`q` series, with `ν`-derivatives.
//! * [`quasienergy`] — the resonance expansion: canonical coefficients,
//!   quasi-energies, and the three predicted time scales.
//! * [`propagate`] — direct integration (split-step and Runge-Kutta), the
//!   reduced resonant-ladder model, and closed-form autocorrelations.
//! * [`analysis`] — peak detection and time-scale extraction from traces.
//! * [`linalg`] — self-contained real symmetric eigensolvers.
//! * [`fingerprint`] — FNV-1a provenance stamps for reproducible outputs.

// Float guards are written `!(x > 0.0)` on purpose: the negation rejects NaN
// along with the out-of-range values, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod fingerprint;
pub mod linalg;
pub mod mathieu;
pub mod propagate;
pub mod quasienergy;
pub mod spectrum;

pub use analysis::{
    compare, detect_peaks, measure_timescales, AnalysisOptions, ComparisonRow, Peak,
    RevivalReport,
};
pub use error::{Error, Result};
pub use mathieu::{char_value_matrix, char_value_series, da_dnu, MathieuMethod};
pub use propagate::{
    default_window, evolve, evolve_rwa, init_gaussian, predicted_autocorrelation, AutocorrTrace,
    EvolutionConfig, Frame, Integrator, WavePacketState,
};
pub use quasienergy::{
    canonical_coeffs, nu_of_n, quasi_energy, time_scales, CanonicalCoeffs, Mode, ModeSelect,
    Period, QConvention, ResonanceParams, TimeScaleOptions, TimeScales, TimeScalesReport,
};
pub use spectrum::{
    coupling_matrix, energy, energy_derivs, find_resonant_level, CouplingMatrix, CouplingModel,
    SpectrumFamily, SpectrumModel,
};
