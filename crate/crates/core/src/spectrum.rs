//! Unperturbed 1-D spectra, their level-index derivatives, resonance
//! location, and coupling matrix elements.
//!
//! Everything is expressed in dimensionless units: particle mass and box
//! length are 1, the drive frequency is 1, and a single effective Planck
//! constant `hbar_eff` sets the quantum scale. Level energies are evaluated
//! at real (continuous) level index so that derivative oracles can probe
//! between levels; physical states always use integer levels.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Family of analytic unperturbed spectra.
///
/// * `Box` — infinite square well, `E_n = (π² ħ² / 2) n²` (third derivative
///   exactly zero).
/// * `PowerLaw` — `E_n = c nᵏ` with `c > 0`, `k > 0`, giving tunable
///   curvature and a nonzero third derivative to exercise the cubic terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectrumFamily {
    Box,
    PowerLaw { c: f64, k: f64 },
}

/// A spectrum family together with the effective Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    pub family: SpectrumFamily,
    pub hbar_eff: f64,
}

impl SpectrumModel {
    /// Infinite square well with the given effective Planck constant.
    pub fn square_well(hbar_eff: f64) -> SpectrumModel {
        SpectrumModel { family: SpectrumFamily::Box, hbar_eff }
    }

    /// Power-law spectrum `E_n = c nᵏ`.
    pub fn power_law(c: f64, k: f64, hbar_eff: f64) -> SpectrumModel {
        SpectrumModel { family: SpectrumFamily::PowerLaw { c, k }, hbar_eff }
    }

    fn validate(&self) -> Result<()> {
        if !self.hbar_eff.is_finite() || self.hbar_eff <= 0.0 {
            return Err(Error::Domain(format!("hbar_eff must be positive, got {}", self.hbar_eff)));
        }
        if let SpectrumFamily::PowerLaw { c, k } = self.family {
            if !(c > 0.0) || !(k > 0.0) {
                return Err(Error::Domain(format!(
                    "power-law spectrum needs c > 0 and k > 0, got c = {c}, k = {k}"
                )));
            }
        }
        Ok(())
    }
}

/// Energy at (possibly fractional) level index `n ≥ 1`.
pub fn energy(model: &SpectrumModel, n: f64) -> Result<f64> {
    model.validate()?;
    if !(n >= 1.0) {
        return Err(Error::Domain(format!("level index must satisfy n >= 1, got {n}")));
    }
    let h = model.hbar_eff;
    Ok(match model.family {
        SpectrumFamily::Box => 0.5 * std::f64::consts::PI.powi(2) * h * h * n * n,
        SpectrumFamily::PowerLaw { c, k } => c * n.powf(k),
    })
}

/// Analytic first, second, and third derivatives of the energy with respect
/// to the continuous level index, evaluated at `r ≥ 1`.
pub fn energy_derivs(model: &SpectrumModel, r: f64) -> Result<(f64, f64, f64)> {
    model.validate()?;
    if !(r >= 1.0) {
        return Err(Error::Domain(format!("level index must satisfy r >= 1, got {r}")));
    }
    let h = model.hbar_eff;
    Ok(match model.family {
        SpectrumFamily::Box => {
            let pih = std::f64::consts::PI.powi(2) * h * h;
            (pih * r, pih, 0.0)
        }
        SpectrumFamily::PowerLaw { c, k } => (
            c * k * r.powf(k - 1.0),
            c * k * (k - 1.0) * r.powf(k - 2.0),
            c * k * (k - 1.0) * (k - 2.0) * r.powf(k - 3.0),
        ),
    })
}

/// Upper end of the bisection search range for [`find_resonant_level`].
pub const RESONANCE_SEARCH_MAX: f64 = 1.0e7;

/// Solves the resonance condition `N·E'(r) = ħ_eff` for the real level
/// index `r` by bisection to relative tolerance 1e-12.
///
/// For every supported family `E'` is strictly monotone in `r`, so a sign
/// change of `N·E'(r) − ħ` over `[1, RESONANCE_SEARCH_MAX]` brackets the
/// unique root. Callers may round the result to the nearest integer level;
/// the rounding detuning is theirs to record.
pub fn find_resonant_level(model: &SpectrumModel, drive_n: u32) -> Result<f64> {
    model.validate()?;
    if drive_n == 0 {
        return Err(Error::Domain("resonance order N must be >= 1".into()));
    }
    let h = model.hbar_eff;
    let nf = f64::from(drive_n);
    let f = |r: f64| -> Result<f64> { Ok(nf * energy_derivs(model, r)?.0 - h) };
    let (mut lo, mut hi) = (1.0, RESONANCE_SEARCH_MAX);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo == 0.0 {
        return Ok(lo);
    }
    if flo * fhi > 0.0 {
        return Err(Error::NoResonance { hbar_eff: h, n_max_search: RESONANCE_SEARCH_MAX });
    }
    // Bisection: ~60 halvings reach relative tolerance 1e-12 on this range.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= 1e-12 * hi.abs() {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// How the drive couples levels.
///
/// * `Constant` — the two ladder diagonals `m = n ± N` carry a single matrix
///   element `v` (the approximation behind all analytic formulas here).
/// * `BoxPosition` — exact position matrix elements of the unit box,
///   `⟨m|x|n⟩ = −8mn/(π²(m²−n²)²)` for odd `m+n`, `1/2` on the diagonal,
///   zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CouplingModel {
    Constant { v: f64 },
    BoxPosition,
}

/// Dense real-symmetric coupling matrix over the level window
/// `n_min..=n_max`, stored flat row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub n_min: i64,
    pub n_max: i64,
    /// Row-major `(dim × dim)` entries, `dim = n_max - n_min + 1`.
    pub entries: Vec<f64>,
}

impl CouplingMatrix {
    pub fn dim(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    /// Entry for physical levels `(m, n)` inside the window.
    pub fn at(&self, m: i64, n: i64) -> f64 {
        let dim = self.dim() as i64;
        let (i, j) = (m - self.n_min, n - self.n_min);
        assert!(i >= 0 && i < dim && j >= 0 && j < dim, "level out of window");
        self.entries[(i * dim + j) as usize]
    }
}

/// Builds the coupling matrix over `n_min..=n_max`.
///
/// `drive_n` is the ladder spacing used by the `Constant` mode (ignored by
/// `BoxPosition`, which is dense in parity).
pub fn coupling_matrix(
    coupling: &CouplingModel,
    drive_n: u32,
    n_min: i64,
    n_max: i64,
) -> Result<CouplingMatrix> {
    if n_min < 1 || n_min >= n_max {
        return Err(Error::Domain(format!(
            "coupling window needs 1 <= n_min < n_max, got [{n_min}, {n_max}]"
        )));
    }
    let dim = (n_max - n_min + 1) as usize;
    let mut entries = vec![0.0; dim * dim];
    for i in 0..dim {
        let m = n_min + i as i64;
        for j in 0..dim {
            let n = n_min + j as i64;
            entries[i * dim + j] = match *coupling {
                CouplingModel::Constant { v } => {
                    if (m - n).unsigned_abs() == u64::from(drive_n) {
                        v
                    } else {
                        0.0
                    }
                }
                CouplingModel::BoxPosition => box_position_element(m, n),
            };
        }
    }
    Ok(CouplingMatrix { n_min, n_max, entries })
}

/// Exact `⟨m|x|n⟩` for the unit box.
pub fn box_position_element(m: i64, n: i64) -> f64 {
    if m == n {
        return 0.5;
    }
    if (m + n) % 2 == 0 {
        return 0.0;
    }
    let (mf, nf) = (m as f64, n as f64);
    let diff2 = (mf * mf - nf * nf).powi(2);
    -8.0 * mf * nf / (std::f64::consts::PI.powi(2) * diff2)
}

/// The single matrix element analytic formulas use when the coupling is not
/// literally constant: the ladder element at the rounded resonance center,
/// `⟨c|x|c+N⟩` with `c = round(r)` for `BoxPosition`, or `v` itself.
pub fn representative_v(coupling: &CouplingModel, r: f64, drive_n: u32) -> f64 {
    match *coupling {
        CouplingModel::Constant { v } => v,
        CouplingModel::BoxPosition => {
            let c = r.round().max(1.0) as i64;
            box_position_element(c, c + i64::from(drive_n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn box_energy_closed_forms() {
        let m = SpectrumModel::square_well(1.0);
        assert!((energy(&m, 1.0).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        let m = SpectrumModel::square_well(0.5);
        assert!((energy(&m, 4.0).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn power_law_energy_closed_form() {
        let m = SpectrumModel::power_law(1.0, 2.0, 1.0);
        assert!((energy(&m, 3.0).unwrap() - 9.0).abs() < 1e-14);
    }

    #[test]
    fn energy_rejects_sub_ground_index() {
        let m = SpectrumModel::square_well(1.0);
        assert!(matches!(energy(&m, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_closed_forms() {
        let m = SpectrumModel::square_well(1.0);
        let (d1, d2, d3) = energy_derivs(&m, 10.0).unwrap();
        assert!((d1 - 10.0 * PI * PI).abs() < 1e-11);
        assert!((d2 - PI * PI).abs() < 1e-13);
        assert_eq!(d3, 0.0);

        let m = SpectrumModel::power_law(1.0, 3.0, 1.0);
        let (d1, d2, d3) = energy_derivs(&m, 2.0).unwrap();
        assert!((d1 - 12.0).abs() < 1e-12);
        assert!((d2 - 12.0).abs() < 1e-12);
        assert!((d3 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn resonance_matches_closed_form_inversion() {
        // Box: N E'(r) = h  =>  r = 1/(N pi^2 h).
        let m = SpectrumModel::square_well(0.01);
        let r = find_resonant_level(&m, 1).unwrap();
        assert!((r - 1.0 / (PI * PI * 0.01)).abs() < 1e-10 * r);

        let m = SpectrumModel::square_well(0.005);
        let r = find_resonant_level(&m, 2).unwrap();
        assert!((r - 1.0 / (2.0 * PI * PI * 0.005)).abs() < 1e-10 * r);
    }

    #[test]
    fn resonance_below_ground_level_is_rejected() {
        // PowerLaw c=1, k=2: E'(r) = 2r, root of N·2r = 1 is r = 0.5 < 1.
        let m = SpectrumModel::power_law(1.0, 2.0, 1.0);
        assert!(matches!(find_resonant_level(&m, 1), Err(Error::NoResonance { .. })));
    }

    #[test]
    fn resonance_residual_is_tiny() {
        let m = SpectrumModel::square_well(0.05);
        let r = find_resonant_level(&m, 1).unwrap();
        let (e1, _, _) = energy_derivs(&m, r).unwrap();
        assert!((e1 - 0.05).abs() < 1e-10 * 0.05);
    }

    #[test]
    fn constant_coupling_fills_ladder_diagonals() {
        let cm = coupling_matrix(&CouplingModel::Constant { v: 0.3 }, 1, 1, 4).unwrap();
        for m in 1..=4i64 {
            for n in 1..=4i64 {
                let want = if (m - n).abs() == 1 { 0.3 } else { 0.0 };
                assert_eq!(cm.at(m, n), want);
            }
        }
    }

    #[test]
    fn box_position_parity_and_value() {
        assert_eq!(box_position_element(1, 3), 0.0);
        let want = -16.0 / (9.0 * PI * PI);
        assert!((box_position_element(1, 2) - want).abs() < 1e-15);
        assert_eq!(box_position_element(5, 5), 0.5);
    }

    #[test]
    fn coupling_matrix_is_symmetric() {
        let cm = coupling_matrix(&CouplingModel::BoxPosition, 1, 1, 12).unwrap();
        let d = cm.dim();
        for i in 0..d {
            for j in 0..d {
                assert_eq!(cm.entries[i * d + j], cm.entries[j * d + i]);
            }
        }
    }

    #[test]
    fn representative_element_picks_rounded_center_ladder() {
        let v = representative_v(&CouplingModel::BoxPosition, 10.1321, 1);
        assert!((v - box_position_element(10, 11)).abs() < 1e-16);
        let v = representative_v(&CouplingModel::Constant { v: 0.7 }, 10.1321, 1);
        assert_eq!(v, 0.7);
    }
}
