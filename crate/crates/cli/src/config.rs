//! Run configuration: a strict JSON schema (unknown keys rejected), its
//! canonical re-encoding, and resolution into the library's domain types.
//!
//! Every section is optional at parse time; each command demands the
//! sections it needs and fails with a domain error naming what is missing.

use std::path::Path;

use driven_revivals::error::Error;
use driven_revivals::propagate::{default_window, EvolutionConfig, Frame, Integrator};
use driven_revivals::quasienergy::ResonanceParams;
use driven_revivals::spectrum::{find_resonant_level, representative_v, CouplingModel, SpectrumModel};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance: Option<ResonanceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packet: Option<PacketSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// `box` or `power_law`.
    pub family: String,
    pub hbar_eff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    /// `constant` or `box_position`.
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSection {
    /// Resonance order N (drive period = N classical periods).
    pub n: u32,
    pub lambda: f64,
    /// Optional override for the resonant index; found by bisection when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSection {
    pub center: f64,
    pub delta_n: f64,
    /// Level window `[n_min, n_max]`; derived from the packet when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    /// `exp_midpoint` or `rk4`.
    pub integrator: String,
    /// `bare` or `rotating`.
    #[serde(default = "default_frame")]
    pub frame: String,
    #[serde(default)]
    pub rwa: bool,
    pub dt: f64,
    pub t_max: f64,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
}

fn default_frame() -> String {
    "bare".to_string()
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default = "default_threshold")]
    pub peak_threshold: f64,
    #[serde(default)]
    pub min_separation: f64,
    #[serde(default = "default_collapse_frac")]
    pub collapse_frac: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_cl_hint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_cl_band: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_rev_band: Option<(f64, f64)>,
}

fn default_threshold() -> f64 {
    0.5
}

fn default_collapse_frac() -> f64 {
    0.5
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Core(Error::Domain(format!("cannot read config {}: {e}", path.display())))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Core(Error::Domain(format!("config {} rejected: {e}", path.display())))
        })
    }

    /// Canonical encoding: the parsed, default-filled structure re-serialized
    /// compactly in fixed field order. Formatting and key order of the input
    /// file do not affect it.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialization cannot fail")
    }

    pub fn spectrum(&self) -> Result<&SpectrumSection, Error> {
        self.spectrum.as_ref().ok_or_else(|| missing("spectrum"))
    }

    pub fn coupling(&self) -> Result<&CouplingSection, Error> {
        self.coupling.as_ref().ok_or_else(|| missing("coupling"))
    }

    pub fn resonance(&self) -> Result<&ResonanceSection, Error> {
        self.resonance.as_ref().ok_or_else(|| missing("resonance"))
    }

    pub fn packet(&self) -> Result<&PacketSection, Error> {
        self.packet.as_ref().ok_or_else(|| missing("packet"))
    }

    pub fn evolution(&self) -> Result<&EvolutionSection, Error> {
        self.evolution.as_ref().ok_or_else(|| missing("evolution"))
    }
}

fn missing(section: &str) -> Error {
    Error::Domain(format!("config is missing the `{section}` section required by this command"))
}

impl SpectrumSection {
    pub fn to_model(&self) -> Result<SpectrumModel, Error> {
        match self.family.as_str() {
            "box" => {
                if self.c.is_some() || self.k.is_some() {
                    return Err(Error::Domain(
                        "spectrum family `box` takes no `c`/`k` parameters".into(),
                    ));
                }
                Ok(SpectrumModel::square_well(self.hbar_eff))
            }
            "power_law" => {
                let (c, k) = match (self.c, self.k) {
                    (Some(c), Some(k)) => (c, k),
                    _ => {
                        return Err(Error::Domain(
                            "spectrum family `power_law` requires both `c` and `k`".into(),
                        ))
                    }
                };
                Ok(SpectrumModel::power_law(c, k, self.hbar_eff))
            }
            other => Err(Error::Domain(format!(
                "unknown spectrum family `{other}` (expected `box` or `power_law`)"
            ))),
        }
    }
}

impl CouplingSection {
    pub fn to_model(&self) -> Result<CouplingModel, Error> {
        match self.model.as_str() {
            "constant" => {
                let v = self.v.ok_or_else(|| {
                    Error::Domain("coupling model `constant` requires `v`".into())
                })?;
                Ok(CouplingModel::Constant { v })
            }
            "box_position" => {
                if self.v.is_some() {
                    return Err(Error::Domain(
                        "coupling model `box_position` takes no `v` (elements are derived)".into(),
                    ));
                }
                Ok(CouplingModel::BoxPosition)
            }
            other => Err(Error::Domain(format!(
                "unknown coupling model `{other}` (expected `constant` or `box_position`)"
            ))),
        }
    }
}

impl EvolutionSection {
    pub fn to_config(&self) -> Result<EvolutionConfig, Error> {
        let integrator = match self.integrator.as_str() {
            "exp_midpoint" => Integrator::ExpMidpoint,
            "rk4" => Integrator::Rk4Fixed,
            other => {
                return Err(Error::Domain(format!(
                    "unknown integrator `{other}` (expected `exp_midpoint` or `rk4`)"
                )))
            }
        };
        let frame = match self.frame.as_str() {
            "bare" => Frame::Bare,
            "rotating" => Frame::Rotating,
            other => {
                return Err(Error::Domain(format!(
                    "unknown frame `{other}` (expected `bare` or `rotating`)"
                )))
            }
        };
        Ok(EvolutionConfig {
            frame,
            rwa: self.rwa,
            dt: self.dt,
            t_max: self.t_max,
            sample_stride: self.sample_stride,
            integrator,
        })
    }
}

impl AnalysisSection {
    pub fn to_options(&self) -> driven_revivals::analysis::AnalysisOptions {
        driven_revivals::analysis::AnalysisOptions {
            peak_threshold: self.peak_threshold,
            min_separation: self.min_separation,
            collapse_frac: self.collapse_frac,
            t_cl_hint: self.t_cl_hint,
            t_cl_band: self.t_cl_band,
            t_rev_band: self.t_rev_band,
        }
    }
}

/// The physics inputs shared by `times`, `evolve`, and `sweep`, resolved
/// from a config: spectrum model, coupling, and the full resonance
/// parameter block (with `r` found by bisection unless overridden).
pub struct Resolved {
    pub model: SpectrumModel,
    pub coupling: CouplingModel,
    pub params: ResonanceParams,
}

pub fn resolve(config: &RunConfig) -> Result<Resolved, Error> {
    let spectrum = config.spectrum()?;
    let model = spectrum.to_model()?;
    let coupling = config.coupling()?.to_model()?;
    let resonance = config.resonance()?;
    let r = match resonance.r {
        Some(r) => r,
        None => find_resonant_level(&model, resonance.n)?,
    };
    let v = representative_v(&coupling, r, resonance.n);
    Ok(Resolved {
        model,
        coupling,
        params: ResonanceParams {
            drive_n: resonance.n,
            r,
            lambda: resonance.lambda,
            v,
            hbar_eff: spectrum.hbar_eff,
        },
    })
}

/// Level window for the configured packet: explicit, or derived from the
/// resonance geometry.
pub fn packet_window(packet: &PacketSection, params: &ResonanceParams) -> (i64, i64) {
    packet
        .window
        .unwrap_or_else(|| default_window(params.r, packet.delta_n, params.drive_n))
}
