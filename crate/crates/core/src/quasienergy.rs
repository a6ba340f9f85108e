//! Effective-Hamiltonian coefficients, the quasi-energy function, and the
//! three revival time scales in two computation modes.
//!
//! The chain from a spectrum + drive to time scales is:
//!
//! 1. [`canonical_coeffs`] — the curvature scale `β = N³E″/4`, the detuning
//!    `γ-magnitude = NE′ − ħ`, the cubic coefficient `α-magnitude = N³E‴/6`,
//!    and the derived `ω²`, `a_offset`, and the two `q` identifications.
//! 2. [`quasi_energy`] — `ε(ν)` from the Mathieu characteristic value, via
//!    the perturbative series or the matrix eigenproblem.
//! 3. [`time_scales`] — `T_cl`, `T_rev`, `T_sr`:
//!    * **definition mode** converts quasi-energy derivatives in the level
//!      index into periods, `T_cl = 2πħ/|ε⁽¹⁾|`, `T_rev = 4πħ/|ε⁽²⁾|`,
//!      `T_sr = 12πħ/|ε⁽³⁾|`, with the Jacobian `dν/dn = 2/N` applied;
//!    * **paper mode** evaluates a published set of product formulas
//!      verbatim. Its second- and third-derivative coefficients differ from
//!      direct differentiation of the series, and it omits the `dν/dn`
//!      Jacobian; both facts are surfaced through the discrepancy block and
//!      the self-check ledger rather than silently corrected.

use crate::error::{Error, Result};
use crate::mathieu::{self, MathieuMethod};
use crate::spectrum::{energy_derivs, SpectrumModel};
use serde::{Serialize, Serializer};
use std::f64::consts::PI;

/// Drive and resonance configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceParams {
    /// Resonance order N (drive period / classical period).
    pub drive_n: u32,
    /// Resonance center: the real level index solving N·E'(r) = ħ.
    pub r: f64,
    /// Modulation strength λ ≥ 0.
    pub lambda: f64,
    /// Constant coupling matrix element V.
    pub v: f64,
    /// Effective Planck constant.
    pub hbar_eff: f64,
}

impl ResonanceParams {
    /// True when λ is outside the perturbative comfort zone; callers attach
    /// a warning to their outputs instead of refusing to compute.
    pub fn perturbative_warning(&self) -> bool {
        self.lambda >= 0.5
    }
}

/// Coefficients of the third-order effective equation and their Mathieu-side
/// derived quantities. `alpha_mag` and `gamma_mag` store the real
/// coefficients of the purely imaginary `α = i·N³E‴/6` and `γ = i(NE′ − ħ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalCoeffs {
    pub alpha_mag: f64,
    pub beta: f64,
    pub gamma_mag: f64,
    /// `ω² = (NE′ − ħ)² / (4β²)`, from `ω = iγ/(2β)` with imaginary γ.
    pub omega_sq: f64,
    /// Drive-strength parameter as identified in the source formulas: `λV/β`.
    pub q_paper: f64,
    /// Standard-convention Mathieu parameter: `−λV/(2β)`.
    pub q_std: f64,
    /// Constant shift entering the matrix-mode quasi-energy:
    /// `(αω²-coefficient + γ-coefficient)²/(4β²) ≥ 0`.
    pub a_offset: f64,
}

/// Builds [`CanonicalCoeffs`] from the spectrum derivatives at `params.r`.
pub fn canonical_coeffs(model: &SpectrumModel, params: &ResonanceParams) -> Result<CanonicalCoeffs> {
    let (e1, e2, e3) = energy_derivs(model, params.r)?;
    if e2 == 0.0 {
        return Err(Error::FlatSpectrum { r: params.r });
    }
    let n3 = f64::from(params.drive_n).powi(3);
    let alpha_mag = n3 * e3 / 6.0;
    let beta = n3 * e2 / 4.0;
    let gamma_mag = f64::from(params.drive_n) * e1 - params.hbar_eff;
    let omega_sq = gamma_mag * gamma_mag / (4.0 * beta * beta);
    let lv = params.lambda * params.v;
    let combo = alpha_mag * omega_sq + gamma_mag;
    Ok(CanonicalCoeffs {
        alpha_mag,
        beta,
        gamma_mag,
        omega_sq,
        q_paper: lv / beta,
        q_std: -lv / (2.0 * beta),
        a_offset: combo * combo / (4.0 * beta * beta),
    })
}

/// Map from level index to Mathieu order: `ν_n = 2(n − r)/N`.
///
/// Accepts a real index so derivative oracles can probe between levels.
pub fn nu_of_n(n: f64, params: &ResonanceParams) -> f64 {
    2.0 * (n - params.r) / f64::from(params.drive_n)
}

/// Which identification of the Mathieu `q` a computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QConvention {
    /// `q = λV/β`, the identification printed alongside the source formulas.
    PaperQ,
    /// `q = −λV/(2β)`, the standard `y″ + (a − 2q cos 2z)y = 0` convention.
    StandardQ,
}

impl QConvention {
    pub fn q(&self, coeffs: &CanonicalCoeffs) -> f64 {
        match self {
            QConvention::PaperQ => coeffs.q_paper,
            QConvention::StandardQ => coeffs.q_std,
        }
    }
}

/// Source of the characteristic value inside [`quasi_energy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasiEnergySource {
    Series,
    MatrixFloquet,
}

/// Truncation used by the `MatrixFloquet` source.
const MATRIX_FLOQUET_TRUNCATION: usize = 64;

/// Quasi-energy at Mathieu order `ν`.
///
/// `Series` evaluates `β(ν² + q²/(2(ν²−1)))`; `MatrixFloquet` evaluates
/// `β·a_matrix(ν, q) + β·a_offset`. The positive sign on `β·a` is normative
/// here; the opposite printed sign is reported by the self-check ledger.
pub fn quasi_energy(
    nu: f64,
    coeffs: &CanonicalCoeffs,
    source: QuasiEnergySource,
    convention: QConvention,
) -> Result<f64> {
    let q = convention.q(coeffs);
    match source {
        QuasiEnergySource::Series => Ok(coeffs.beta * mathieu::char_value_series(nu, q)?),
        QuasiEnergySource::MatrixFloquet => {
            let a = mathieu::char_value_matrix(nu, q, MATRIX_FLOQUET_TRUNCATION)?.a;
            Ok(coeffs.beta * (a + coeffs.a_offset))
        }
    }
}

/// Quasi-energy derivatives `ε⁽¹⁾, ε⁽²⁾, ε⁽³⁾` with respect to the level
/// index at packet center `center`, definition-mode conventions (series
/// closed forms, chain rule `dν/dn = 2/N`).
///
/// With `strict_jacobian` the change-of-variable Jacobian of the angle
/// substitution is applied to the Mathieu identification (energy scale `β/4`,
/// `q = −2λV/β`) instead of the printed one; see [`TimeScaleOptions`].
pub fn epsilon_derivatives(
    model: &SpectrumModel,
    params: &ResonanceParams,
    center: f64,
    convention: QConvention,
    strict_jacobian: bool,
) -> Result<[f64; 3]> {
    let coeffs = canonical_coeffs(model, params)?;
    let nu_r = nu_of_n(center, params);
    let (scale, q) = if strict_jacobian {
        (coeffs.beta / 4.0, -2.0 * params.lambda * params.v / coeffs.beta)
    } else {
        (coeffs.beta, convention.q(&coeffs))
    };
    let jac = 2.0 / f64::from(params.drive_n);
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let order = (i + 1) as u8;
        let da = mathieu::da_dnu(nu_r, q, order, MathieuMethod::Series, None)?;
        *slot = scale * da * jac.powi(order as i32);
    }
    Ok(out)
}

/// A period: a positive magnitude with the sign of the underlying quantity
/// recorded separately, or infinite when the generating term vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Period {
    Finite { value: f64, sign: i8 },
    Infinite,
}

impl Period {
    /// Builds a period from `numerator / quantity`, treating a vanishing
    /// quantity as an infinite period.
    fn from_ratio(numerator: f64, quantity: f64) -> Period {
        if quantity == 0.0 {
            Period::Infinite
        } else {
            Period::Finite {
                value: (numerator / quantity).abs(),
                sign: if quantity >= 0.0 { 1 } else { -1 },
            }
        }
    }

    /// Builds a period from a formula that *is* the period (closed-form
    /// products); a zero value means the generating term vanished.
    pub fn from_value(value: f64) -> Period {
        if value == 0.0 {
            Period::Infinite
        } else {
            Period::Finite { value: value.abs(), sign: if value >= 0.0 { 1 } else { -1 } }
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Period::Finite { value, .. } => Some(*value),
            Period::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Period::Infinite)
    }

    /// Text rendering used by tables and CSV: the magnitude, or `inf`.
    pub fn render(&self) -> String {
        match self {
            Period::Finite { value, .. } => format!("{value}"),
            Period::Infinite => "inf".to_string(),
        }
    }
}

// JSON has no infinity literal, so an infinite period serializes as the
// string "inf" and a finite one as {"value": .., "sign": ..}.
impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Period::Infinite => serializer.serialize_str("inf"),
            Period::Finite { value, sign } => {
                use serde::ser::SerializeStruct;
                let mut s = serializer.serialize_struct("Period", 2)?;
                s.serialize_field("value", value)?;
                s.serialize_field("sign", sign)?;
                s.end()
            }
        }
    }
}

/// Computation mode for the time scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Definition,
    Paper,
}

/// One mode's time scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeScales {
    pub mode: Mode,
    pub t_cl: Period,
    pub t_rev: Period,
    pub t_sr: Period,
    pub nu_r: f64,
    pub q_used: f64,
    pub convention: QConvention,
}

/// Relative differences between the two modes, per scale. `None` when the
/// scales cannot be compared (one side infinite, the other finite).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeDiscrepancy {
    pub t_cl: Option<f64>,
    pub t_rev: Option<f64>,
    pub t_sr: Option<f64>,
}

/// Full report: one or both modes plus their discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeScalesReport {
    pub scales: Vec<TimeScales>,
    pub discrepancy: Option<ModeDiscrepancy>,
    pub warnings: Vec<String>,
}

impl TimeScalesReport {
    pub fn mode(&self, mode: Mode) -> Option<&TimeScales> {
        self.scales.iter().find(|s| s.mode == mode)
    }
}

/// Mode selection for [`time_scales`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSelect {
    Definition,
    Paper,
    Both,
}

/// Options for [`time_scales`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScaleOptions {
    pub mode: ModeSelect,
    pub convention: QConvention,
    /// Apply the angle-substitution Jacobian to the Mathieu identification
    /// in definition mode (sensitivity variant; paper mode stays verbatim).
    pub strict_jacobian: bool,
    /// Packet center (level index) at which ν_r is evaluated. The center is
    /// the caller's explicit choice; `r.round()` is the conventional one.
    pub center: f64,
}

impl TimeScaleOptions {
    pub fn at_center(center: f64) -> TimeScaleOptions {
        TimeScaleOptions {
            mode: ModeSelect::Both,
            convention: QConvention::PaperQ,
            strict_jacobian: false,
            center,
        }
    }
}

/// Computes the time-scale report.
pub fn time_scales(
    model: &SpectrumModel,
    params: &ResonanceParams,
    opts: &TimeScaleOptions,
) -> Result<TimeScalesReport> {
    if params.lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be >= 0, got {}", params.lambda)));
    }
    let coeffs = canonical_coeffs(model, params)?;
    let nu_r = nu_of_n(opts.center, params);
    let gap = (nu_r * nu_r - 1.0).abs();
    if gap <= 1e-6 {
        return Err(Error::SingularOrder { nu: nu_r, gap });
    }
    let hbar = params.hbar_eff;

    let mut warnings = Vec::new();
    if params.perturbative_warning() {
        warnings.push(format!(
            "modulation strength lambda = {} is outside the perturbative regime (lambda >= 0.5)",
            params.lambda
        ));
    }
    let q_chosen = opts.convention.q(&coeffs);
    if q_chosen.abs() >= 1.0 {
        warnings.push(format!(
            "|q| = {:.4} >= 1: the O(q^2) characteristic-value series is not trustworthy here",
            q_chosen.abs()
        ));
    }

    let mut scales = Vec::new();
    if matches!(opts.mode, ModeSelect::Definition | ModeSelect::Both) {
        let eps =
            epsilon_derivatives(model, params, opts.center, opts.convention, opts.strict_jacobian)?;
        let q_used = if opts.strict_jacobian {
            -2.0 * params.lambda * params.v / coeffs.beta
        } else {
            q_chosen
        };
        scales.push(TimeScales {
            mode: Mode::Definition,
            t_cl: Period::from_ratio(2.0 * PI * hbar, eps[0]),
            t_rev: Period::from_ratio(4.0 * PI * hbar, eps[1]),
            t_sr: Period::from_ratio(12.0 * PI * hbar, eps[2]),
            nu_r,
            q_used,
            convention: opts.convention,
        });
    }
    if matches!(opts.mode, ModeSelect::Paper | ModeSelect::Both) {
        // Verbatim product formulas, including their printed second- and
        // third-derivative coefficients (which differ from differentiating
        // the series) and the missing dν/dn Jacobian.
        let q = q_chosen;
        let t0 = 2.0 * PI * hbar / coeffs.beta;
        let d = nu_r * nu_r - 1.0;
        let t_cl = t0 * (2.0 * nu_r - q * q * nu_r / d.powi(2));
        let t_rev = 2.0 * t0 * (2.0 + q * q * (3.0 * nu_r * nu_r - 1.0) / d.powi(3));
        let t_sr = 6.0 * t0 * (q * q / 2.0) * 36.0 * nu_r * nu_r / d.powi(4);
        scales.push(TimeScales {
            mode: Mode::Paper,
            t_cl: Period::from_value(t_cl),
            t_rev: Period::from_value(t_rev),
            t_sr: Period::from_value(t_sr),
            nu_r,
            q_used: q,
            convention: opts.convention,
        });
    }

    let discrepancy = match (
        scales.iter().find(|s| s.mode == Mode::Definition),
        scales.iter().find(|s| s.mode == Mode::Paper),
    ) {
        (Some(d), Some(p)) => Some(ModeDiscrepancy {
            t_cl: rel_diff(&d.t_cl, &p.t_cl),
            t_rev: rel_diff(&d.t_rev, &p.t_rev),
            t_sr: rel_diff(&d.t_sr, &p.t_sr),
        }),
        _ => None,
    };

    Ok(TimeScalesReport { scales, discrepancy, warnings })
}

/// `|a − b| / a` for finite periods; 0 when both are infinite; `None` when
/// exactly one side is infinite.
fn rel_diff(a: &Period, b: &Period) -> Option<f64> {
    match (a, b) {
        (Period::Finite { value: va, .. }, Period::Finite { value: vb, .. }) => {
            Some((va - vb).abs() / va)
        }
        (Period::Infinite, Period::Infinite) => Some(0.0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumModel;

    fn cubic_model() -> SpectrumModel {
        // E_n = n^3: E'(2) = 12, E''(2) = 12, E'''(2) = 6, so beta = 3.
        SpectrumModel::power_law(1.0, 3.0, 12.0)
    }

    fn cubic_params(lambda: f64, hbar_eff: f64) -> ResonanceParams {
        ResonanceParams { drive_n: 1, r: 2.0, lambda, v: 1.0, hbar_eff }
    }

    #[test]
    fn coefficients_at_exact_resonance() {
        let model = cubic_model();
        let c = canonical_coeffs(&model, &cubic_params(0.0, 12.0)).unwrap();
        assert!((c.alpha_mag - 1.0).abs() < 1e-14);
        assert!((c.beta - 3.0).abs() < 1e-14);
        assert_eq!(c.gamma_mag, 0.0);
        assert_eq!(c.omega_sq, 0.0);
        assert_eq!(c.a_offset, 0.0);
    }

    #[test]
    fn box_coefficients_have_zero_cubic_term() {
        let model = SpectrumModel::square_well(0.01);
        let r = 1.0 / (std::f64::consts::PI.powi(2) * 0.01);
        let params = ResonanceParams { drive_n: 1, r, lambda: 0.05, v: 1.0, hbar_eff: 0.01 };
        let c = canonical_coeffs(&model, &params).unwrap();
        assert_eq!(c.alpha_mag, 0.0);
        assert!(c.gamma_mag.abs() < 1e-12);
        let beta_expect = std::f64::consts::PI.powi(2) * 0.01 * 0.01 / 4.0;
        assert!((c.beta - beta_expect).abs() < 1e-18);
    }

    #[test]
    fn detuned_offset_is_the_exact_rational() {
        // hbar one unit below resonance: gamma = 1, omega^2 = 1/36,
        // a_offset = (1/36 + 1)^2 / 36 = 1369/46656.
        let model = SpectrumModel::power_law(1.0, 3.0, 11.0);
        let c = canonical_coeffs(&model, &cubic_params(0.0, 11.0)).unwrap();
        assert!((c.gamma_mag - 1.0).abs() < 1e-14);
        assert!((c.omega_sq - 1.0 / 36.0).abs() < 1e-16);
        assert!((c.a_offset - 1369.0 / 46656.0).abs() < 1e-16);
        assert!(c.a_offset >= 0.0);
    }

    #[test]
    fn flat_spectrum_is_refused() {
        // k = 1 makes E'' vanish identically.
        let model = SpectrumModel::power_law(1.0, 1.0, 1.0);
        let params = ResonanceParams { drive_n: 1, r: 2.0, lambda: 0.1, v: 1.0, hbar_eff: 1.0 };
        assert!(matches!(canonical_coeffs(&model, &params), Err(Error::FlatSpectrum { .. })));
    }

    #[test]
    fn nu_map_is_the_scaled_offset() {
        let p = cubic_params(0.0, 12.0);
        assert_eq!(nu_of_n(2.0, &p), 0.0);
        assert_eq!(nu_of_n(3.0, &p), 2.0);
        let p2 = ResonanceParams { drive_n: 2, ..p };
        assert_eq!(nu_of_n(7.0, &p2), 5.0);
    }

    #[test]
    fn quasi_energy_series_closed_form() {
        let model = cubic_model();
        // q_paper = lambda*V/beta = 0.3/3 = 0.1.
        let c = canonical_coeffs(&model, &cubic_params(0.3, 12.0)).unwrap();
        assert!((c.q_paper - 0.1).abs() < 1e-15);
        let e = quasi_energy(2.0, &c, QuasiEnergySource::Series, QConvention::PaperQ).unwrap();
        assert!((e - 12.005).abs() < 1e-12);
        let e0 = quasi_energy(2.0, &c, QuasiEnergySource::Series, QConvention::StandardQ).unwrap();
        // Standard q = -0.05: evenness means only the magnitude differs.
        assert!((e0 - (12.0 + 3.0 * 0.0025 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn quasi_energy_matrix_close_to_series() {
        let model = cubic_model();
        let c = canonical_coeffs(&model, &cubic_params(0.3, 12.0)).unwrap();
        let s = quasi_energy(2.5, &c, QuasiEnergySource::Series, QConvention::PaperQ).unwrap();
        let m = quasi_energy(2.5, &c, QuasiEnergySource::MatrixFloquet, QConvention::PaperQ)
            .unwrap();
        assert!((s - m).abs() < 3e-5 * c.beta, "gap {}", (s - m).abs());
    }

    #[test]
    fn definition_mode_closed_form_at_zero_q() {
        let model = cubic_model();
        let params = cubic_params(0.0, 1.0);
        // center = r + nu_r*N/2 = 2 + 2/2... nu_r = 2 needs center 3.
        let opts = TimeScaleOptions {
            mode: ModeSelect::Definition,
            convention: QConvention::PaperQ,
            strict_jacobian: false,
            center: 3.0,
        };
        let rep = time_scales(&model, &params, &opts).unwrap();
        let d = rep.mode(Mode::Definition).unwrap();
        // eps' = beta * 2*nu * (2/N) = 3*4*2 = 24; T_cl = 2*pi*hbar/24.
        let t_cl = d.t_cl.value().unwrap();
        assert!((t_cl - 2.0 * PI / 24.0).abs() < 1e-12);
        assert!(d.t_sr.is_infinite());
        assert!(!d.t_rev.is_infinite());
    }

    #[test]
    fn paper_mode_super_revival_product() {
        let model = cubic_model();
        let params = cubic_params(0.3, 1.0);
        let opts = TimeScaleOptions {
            mode: ModeSelect::Paper,
            convention: QConvention::PaperQ,
            strict_jacobian: false,
            center: 3.0,
        };
        let rep = time_scales(&model, &params, &opts).unwrap();
        let p = rep.mode(Mode::Paper).unwrap();
        // 6*(2*pi/3)*0.005*36*4/81, frozen from independent evaluation.
        let t_sr = p.t_sr.value().unwrap();
        assert!((t_sr - 0.1117010721276371).abs() < 1e-15, "t_sr = {t_sr}");
    }

    #[test]
    fn both_modes_produce_discrepancy_block() {
        let model = cubic_model();
        let params = cubic_params(0.3, 12.0);
        let rep = time_scales(&model, &params, &TimeScaleOptions::at_center(3.25)).unwrap();
        assert_eq!(rep.scales.len(), 2);
        let disc = rep.discrepancy.unwrap();
        // The Jacobian omission alone makes T_cl differ by a factor ~2.
        assert!(disc.t_cl.unwrap() > 0.1);
        assert!(disc.t_rev.unwrap() > 0.1);
    }

    #[test]
    fn singular_center_is_refused() {
        let model = cubic_model();
        let params = cubic_params(0.1, 12.0);
        // center = r + N/2 puts nu_r exactly at 1.
        let opts = TimeScaleOptions::at_center(2.5);
        assert!(matches!(time_scales(&model, &params, &opts), Err(Error::SingularOrder { .. })));
    }

    #[test]
    fn lambda_sign_is_immaterial() {
        // q enters every formula squared; compare lambda against the same
        // magnitude with V negated (lambda itself must be nonnegative).
        let model = cubic_model();
        let plus = time_scales(
            &model,
            &cubic_params(0.2, 12.0),
            &TimeScaleOptions::at_center(3.25),
        )
        .unwrap();
        let minus = time_scales(
            &model,
            &ResonanceParams { v: -1.0, ..cubic_params(0.2, 12.0) },
            &TimeScaleOptions::at_center(3.25),
        )
        .unwrap();
        for (a, b) in plus.scales.iter().zip(minus.scales.iter()) {
            assert_eq!(a.t_cl, b.t_cl);
            assert_eq!(a.t_rev, b.t_rev);
            assert_eq!(a.t_sr, b.t_sr);
        }
    }

    #[test]
    fn strict_jacobian_changes_definition_only() {
        let model = cubic_model();
        let params = cubic_params(0.3, 12.0);
        let base = time_scales(&model, &params, &TimeScaleOptions::at_center(3.25)).unwrap();
        let strict = time_scales(
            &model,
            &params,
            &TimeScaleOptions { strict_jacobian: true, ..TimeScaleOptions::at_center(3.25) },
        )
        .unwrap();
        assert_ne!(
            base.mode(Mode::Definition).unwrap().t_cl,
            strict.mode(Mode::Definition).unwrap().t_cl
        );
        assert_eq!(base.mode(Mode::Paper).unwrap(), strict.mode(Mode::Paper).unwrap());
    }

    #[test]
    fn large_q_and_large_lambda_warn() {
        let model = SpectrumModel::square_well(0.01);
        let r = 1.0 / (std::f64::consts::PI.powi(2) * 0.01);
        let params = ResonanceParams { drive_n: 1, r, lambda: 0.6, v: 1.0, hbar_eff: 0.01 };
        let rep = time_scales(&model, &params, &TimeScaleOptions::at_center(10.0)).unwrap();
        assert_eq!(rep.warnings.len(), 2, "warnings: {:?}", rep.warnings);
    }
}
