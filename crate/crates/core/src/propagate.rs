//! Direct numerical integration of the driven level-space Schrödinger
//! equation, plus the resonant secular (rotating-wave) approximation.
//!
//! The state is expanded over the unperturbed levels inside a finite window
//! `[n_min, n_max]`: `ψ(t) = Σ_n C_n(t) |n⟩`. The equations of motion are
//!
//! ```text
//! iħ dC_n/dt = E_n C_n + λ sin(t) Σ_m V_nm C_m          (bare frame)
//! ```
//!
//! or the same dynamics expressed in a rotating frame in which each level
//! carries the phase `exp(-i [E_ref + (n - r) ħ_eff / N] t / ħ_eff)`; the
//! two frames are connected by an exact diagonal gauge transformation and
//! produce the same observables.
//!
//! The primary observable is the autocorrelation `A(t) = ⟨ψ(0)|ψ(t)⟩`,
//! always evaluated in the bare frame (frame phases are attached before the
//! overlap is taken), so the recorded trace is frame-independent.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fingerprint::Fingerprint;
use crate::linalg::{sym_eigen, symtrid_eigen};
use crate::quasienergy::ResonanceParams;
use crate::spectrum::{energy, CouplingMatrix, SpectrumModel};

/// Largest admissible time step: one hundredth of the drive period 2π.
pub const MAX_DT: f64 = 2.0 * std::f64::consts::PI / 100.0;

/// Norm drift above this aborts the integration with a smaller-step hint.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Edge-level population above this aborts the integration (window too small).
pub const BOUNDARY_LIMIT: f64 = 1e-10;

/// Wave packet over a finite ladder of levels `n_min..=n_max`.
///
/// `amps[i]` is the amplitude on level `n_min + i`. `t` is the time the
/// amplitudes refer to; amplitudes are always stored in the bare frame.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketState {
    pub n_min: i64,
    pub n_max: i64,
    pub amps: Vec<Complex64>,
    pub t: f64,
}

impl WavePacketState {
    pub fn dim(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    /// Level index carried by amplitude slot `i`.
    pub fn level(&self, i: usize) -> i64 {
        self.n_min + i as i64
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Default simulation window around a resonant level.
///
/// Wide enough to hold the initial packet (±8 standard deviations) plus the
/// drive-induced sidebands (±2 ladder steps of size `drive_n`), clipped at
/// the physical floor n = 1.
pub fn default_window(r: f64, delta_n: f64, drive_n: u32) -> (i64, i64) {
    let c = r.round() as i64;
    let spread = (8.0 * delta_n).ceil() as i64 + 2 * i64::from(drive_n);
    ((c - spread).max(1), c + spread)
}

/// Normalized Gaussian packet `C_n ∝ exp(-(n - center)² / (4 δn²))`.
///
/// The window must contain the ±5 δn core of the packet, otherwise the
/// truncation would visibly distort the dynamics and a `Window` error is
/// returned instead.
pub fn init_gaussian(center: f64, delta_n: f64, n_min: i64, n_max: i64) -> Result<WavePacketState> {
    if !(delta_n > 0.0) || !delta_n.is_finite() {
        return Err(Error::Domain(format!(
            "packet width delta_n must be positive and finite, got {delta_n}"
        )));
    }
    if !center.is_finite() {
        return Err(Error::Domain(format!("packet center must be finite, got {center}")));
    }
    if n_min < 1 || n_max <= n_min {
        return Err(Error::Window(format!(
            "window [{n_min}, {n_max}] must satisfy 1 <= n_min < n_max"
        )));
    }
    let lo_req = ((center - 5.0 * delta_n).ceil() as i64).max(1);
    let hi_req = (center + 5.0 * delta_n).floor() as i64;
    if n_min > lo_req || n_max < hi_req {
        return Err(Error::Window(format!(
            "window [{n_min}, {n_max}] does not contain the packet core [{lo_req}, {hi_req}] \
             (center {center}, width {delta_n})"
        )));
    }
    let dim = (n_max - n_min + 1) as usize;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let mut norm = 0.0;
    for (i, a) in amps.iter_mut().enumerate() {
        let n = n_min + i as i64;
        let x = (n as f64 - center) / delta_n;
        let w = (-x * x / 4.0).exp();
        *a = Complex64::new(w, 0.0);
        norm += w * w;
    }
    if norm <= 0.0 {
        return Err(Error::Domain(format!(
            "packet with center {center} and width {delta_n} has no weight on the window"
        )));
    }
    let inv = 1.0 / norm.sqrt();
    for a in &mut amps {
        *a *= inv;
    }
    Ok(WavePacketState { n_min, n_max, amps, t: 0.0 })
}

/// Frame in which the integrator propagates the amplitudes.
///
/// Observables are frame-independent; `Rotating` removes the fast resonant
/// phase winding and is the natural frame for slow-envelope dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Bare level phases `E_n t / ħ_eff`.
    Bare,
    /// Phases `[E_ref + (n - r) ħ_eff / N] t / ħ_eff` removed, with
    /// `E_ref` the spectrum evaluated at the resonant (real) index `r`.
    Rotating,
}

/// Time integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4Fixed,
    /// Second-order symmetric splitting: half a diagonal phase step, an exact
    /// exponential of the drive term frozen at the midpoint, half a diagonal
    /// phase step. Exactly unitary at every step.
    ExpMidpoint,
}

/// Integration run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub frame: Frame,
    /// Replace the full drive by its stationary resonant ladder terms and
    /// integrate that reduced model exactly (see [`evolve_rwa`]).
    pub rwa: bool,
    pub dt: f64,
    pub t_max: f64,
    /// Record every `sample_stride`-th step (plus the initial sample).
    pub sample_stride: usize,
    pub integrator: Integrator,
}

impl EvolutionConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Domain(format!("dt must be positive and finite, got {}", self.dt)));
        }
        // Tiny relative slack so dt = 2π/100 computed in user code passes.
        if self.dt > MAX_DT * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "dt = {} exceeds the drive-resolution limit 2*pi/100 = {MAX_DT:.6}",
                self.dt
            )));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::Domain(format!(
                "t_max must be positive and finite, got {}",
                self.t_max
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::Domain("sample_stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sampled autocorrelation record from one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrTrace {
    /// Absolute sample times (the first entry is the start time of the run).
    pub times: Vec<f64>,
    /// `A(t) = ⟨ψ(start)|ψ(t)⟩` in the bare frame.
    pub values: Vec<Complex64>,
    /// `|Σ|C_n|² - 1|` at each sample.
    pub norm_drift: Vec<f64>,
    /// FNV-1a fingerprint of every input that determined this trace.
    pub fingerprint: u64,
}

impl AutocorrTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn fingerprint_common(
    state: &WavePacketState,
    model: &SpectrumModel,
    params: &ResonanceParams,
    config: &EvolutionConfig,
) -> Fingerprint {
    let mut f = Fingerprint::new();
    f.write_i64(state.n_min).write_i64(state.n_max).write_f64(state.t);
    for a in &state.amps {
        f.write_f64(a.re).write_f64(a.im);
    }
    match model.family {
        crate::spectrum::SpectrumFamily::Box => {
            f.write_bytes(b"box");
        }
        crate::spectrum::SpectrumFamily::PowerLaw { c, k } => {
            f.write_bytes(b"power_law").write_f64(c).write_f64(k);
        }
    }
    f.write_f64(model.hbar_eff);
    f.write_u64(u64::from(params.drive_n))
        .write_f64(params.r)
        .write_f64(params.lambda)
        .write_f64(params.v)
        .write_f64(params.hbar_eff);
    f.write_bytes(match config.frame {
        Frame::Bare => b"bare",
        Frame::Rotating => b"rotating",
    });
    f.write_u64(u64::from(config.rwa));
    f.write_f64(config.dt).write_f64(config.t_max).write_u64(config.sample_stride as u64);
    f.write_bytes(match config.integrator {
        Integrator::Rk4Fixed => b"rk4",
        Integrator::ExpMidpoint => b"expmid",
    });
    f
}

/// Shared per-run scaffolding: level energies, rotating-frame phase rates,
/// and the sample recorder.
struct RunContext {
    energies: Vec<f64>,
    /// Phase rate ω_n removed by the rotating frame (zero in the bare frame):
    /// bare amplitude = rotating amplitude × exp(-i ω_n t).
    frame_rate: Vec<f64>,
    hbar: f64,
    psi0: Vec<Complex64>,
    times: Vec<f64>,
    values: Vec<Complex64>,
    drift: Vec<f64>,
    n_min: i64,
    n_max: i64,
    frame: Frame,
}

impl RunContext {
    fn new(
        state: &WavePacketState,
        model: &SpectrumModel,
        params: &ResonanceParams,
        frame: Frame,
    ) -> Result<RunContext> {
        let dim = state.dim();
        if state.amps.len() != dim {
            return Err(Error::Window(format!(
                "state holds {} amplitudes for a window of {} levels",
                state.amps.len(),
                dim
            )));
        }
        let mut energies = Vec::with_capacity(dim);
        for i in 0..dim {
            energies.push(energy(model, state.level(i) as f64)?);
        }
        let n = f64::from(params.drive_n);
        let e_ref = energy(model, params.r)?;
        let frame_rate: Vec<f64> = match frame {
            Frame::Bare => vec![0.0; dim],
            Frame::Rotating => (0..dim)
                .map(|i| {
                    let m = state.level(i) as f64;
                    (e_ref + (m - params.r) * params.hbar_eff / n) / params.hbar_eff
                })
                .collect(),
        };
        Ok(RunContext {
            energies,
            frame_rate,
            hbar: params.hbar_eff,
            psi0: state.amps.clone(),
            times: Vec::new(),
            values: Vec::new(),
            drift: Vec::new(),
            n_min: state.n_min,
            n_max: state.n_max,
            frame,
        })
    }

    /// Bare-frame overlap ⟨ψ0|ψ(t)⟩ with frame phases re-attached.
    fn record(&mut self, t_rel: f64, t_abs: f64, amps: &[Complex64]) {
        let mut a = Complex64::new(0.0, 0.0);
        let mut norm = 0.0;
        for (i, c) in amps.iter().enumerate() {
            let bare = match self.frame {
                Frame::Bare => *c,
                Frame::Rotating => {
                    let ph = -self.frame_rate[i] * t_rel;
                    *c * Complex64::from_polar(1.0, ph)
                }
            };
            a += self.psi0[i].conj() * bare;
            norm += c.norm_sqr();
        }
        if self.times.is_empty() {
            // The packet is normalized, so A at the start time is exactly the
            // squared norm = 1; store it without roundoff so downstream
            // normalization checks are exact.
            a = Complex64::new(1.0, 0.0);
        }
        self.times.push(t_abs);
        self.values.push(a);
        self.drift.push((norm - 1.0).abs());
    }

    fn check_monitors(&self, t_abs: f64, dt: f64, amps: &[Complex64]) -> Result<()> {
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let drift = (norm - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::IntegrationAccuracy { drift, t: t_abs, suggested_dt: dt / 2.0 });
        }
        // The lower edge is exempt when it sits on the physical floor n = 1:
        // there is nothing below it for probability to leak into.
        if self.n_min > 1 {
            let p = amps[0].norm_sqr();
            if p > BOUNDARY_LIMIT {
                return Err(Error::BoundaryPopulation { level: self.n_min, population: p, t: t_abs });
            }
        }
        let p = amps[amps.len() - 1].norm_sqr();
        if p > BOUNDARY_LIMIT {
            return Err(Error::BoundaryPopulation { level: self.n_max, population: p, t: t_abs });
        }
        Ok(())
    }

    fn into_trace(self, fingerprint: u64) -> AutocorrTrace {
        AutocorrTrace {
            times: self.times,
            values: self.values,
            norm_drift: self.drift,
            fingerprint,
        }
    }
}

fn check_coupling_window(state: &WavePacketState, coupling: &CouplingMatrix) -> Result<()> {
    if coupling.n_min != state.n_min || coupling.n_max != state.n_max {
        return Err(Error::Window(format!(
            "coupling window [{}, {}] does not match state window [{}, {}]",
            coupling.n_min, coupling.n_max, state.n_min, state.n_max
        )));
    }
    Ok(())
}

/// Integrates the driven equations of motion and records the
/// autocorrelation.
///
/// Returns the trace and the final state (bare frame). The run starts at
/// `state.t`; `config.t_max` is the additional time to integrate, rounded to
/// a whole number of steps. Norm drift beyond [`NORM_DRIFT_LIMIT`] or edge
/// population beyond [`BOUNDARY_LIMIT`] aborts with a diagnostic error.
pub fn evolve(
    state: &WavePacketState,
    model: &SpectrumModel,
    coupling: &CouplingMatrix,
    params: &ResonanceParams,
    config: &EvolutionConfig,
) -> Result<(AutocorrTrace, WavePacketState)> {
    config.validate()?;
    if config.rwa {
        return Err(Error::Domain(
            "config.rwa = true: use evolve_rwa for the reduced resonant model".into(),
        ));
    }
    check_coupling_window(state, coupling)?;
    if params.lambda < 0.0 {
        return Err(Error::Domain(format!(
            "drive strength lambda must be nonnegative, got {}",
            params.lambda
        )));
    }
    let mut ctx = RunContext::new(state, model, params, config.frame)?;
    let fp = {
        let mut f = fingerprint_common(state, model, params, config);
        for &v in &coupling.entries {
            f.write_f64(v);
        }
        f.finish()
    };

    let dim = state.dim();
    let dt = config.dt;
    let n_steps = ((config.t_max / dt).round() as usize).max(1);
    let t0 = state.t;

    let mut amps = state.amps.clone();
    ctx.record(0.0, t0, &amps);

    // The drive is λ sin(t) V with V real symmetric. ExpMidpoint needs the
    // spectral decomposition of V once; RK4 only needs matrix-vector products.
    match config.integrator {
        Integrator::ExpMidpoint => {
            let driven = params.lambda != 0.0 && coupling.entries.iter().any(|&v| v != 0.0);
            let eig = if driven { Some(sym_eigen(&coupling.entries, dim)) } else { None };
            // Diagonal half-step phases exp(-i h_n dt / 2ħ), where h_n is the
            // frame-shifted level energy.
            let half: Vec<Complex64> = (0..dim)
                .map(|i| {
                    let h = ctx.energies[i] / ctx.hbar - ctx.frame_rate[i];
                    Complex64::from_polar(1.0, -h * dt / 2.0)
                })
                .collect();
            let mut work = vec![Complex64::new(0.0, 0.0); dim];
            for step in 0..n_steps {
                let t_rel = step as f64 * dt;
                for (a, p) in amps.iter_mut().zip(&half) {
                    *a *= p;
                }
                if let Some((w, z)) = &eig {
                    // Drive phase is a lab quantity (absolute time); the
                    // frame gauge is anchored at the start of this run
                    // (relative time), matching how samples are recorded.
                    let t_mid_rel = t_rel + dt / 2.0;
                    let theta = params.lambda * (t0 + t_mid_rel).sin() * dt / ctx.hbar;
                    // Rotating frame: the drive matrix picks up the gauge
                    // phases, V -> D V D* with D_n = exp(i ω_n t_mid); the
                    // same real eigenvectors serve both frames.
                    let gauge: Option<Vec<Complex64>> = match config.frame {
                        Frame::Bare => None,
                        Frame::Rotating => Some(
                            (0..dim)
                                .map(|i| {
                                    let ph = ctx.frame_rate[i] * t_mid_rel;
                                    Complex64::from_polar(1.0, ph)
                                })
                                .collect(),
                        ),
                    };
                    if let Some(g) = &gauge {
                        for (a, p) in amps.iter_mut().zip(g) {
                            *a *= p.conj();
                        }
                    }
                    // amps <- Z exp(-i theta w) Z^T amps
                    for wk in work.iter_mut() {
                        *wk = Complex64::new(0.0, 0.0);
                    }
                    for (k, wk) in work.iter_mut().enumerate() {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (j, a) in amps.iter().enumerate() {
                            s += z[j * dim + k] * a;
                        }
                        *wk = s * Complex64::from_polar(1.0, -theta * w[k]);
                    }
                    for (j, a) in amps.iter_mut().enumerate() {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (k, wk) in work.iter().enumerate() {
                            s += z[j * dim + k] * wk;
                        }
                        *a = s;
                    }
                    if let Some(g) = &gauge {
                        for (a, p) in amps.iter_mut().zip(g) {
                            *a *= *p;
                        }
                    }
                }
                for (a, p) in amps.iter_mut().zip(&half) {
                    *a *= p;
                }
                let t_rel_next = (step + 1) as f64 * dt;
                ctx.check_monitors(t0 + t_rel_next, dt, &amps)?;
                if (step + 1) % config.sample_stride == 0 {
                    ctx.record(t_rel_next, t0 + t_rel_next, &amps);
                }
            }
        }
        Integrator::Rk4Fixed => {
            let energies = ctx.energies.clone();
            let frame_rate = ctx.frame_rate.clone();
            let hbar = ctx.hbar;
            let deriv = |t_rel: f64, c: &[Complex64], out: &mut [Complex64]| {
                let t_abs = t0 + t_rel;
                let drive = params.lambda * t_abs.sin();
                // out = -i [ (E_n/ħ - ω_n) c_n + (drive/ħ) (D V D* c)_n ]
                for (i, o) in out.iter_mut().enumerate() {
                    let h = energies[i] / hbar - frame_rate[i];
                    *o = Complex64::new(0.0, -1.0) * (h * c[i]);
                }
                if drive != 0.0 {
                    let scale = drive / hbar;
                    match config.frame {
                        Frame::Bare => {
                            for (i, o) in out.iter_mut().enumerate() {
                                let mut s = Complex64::new(0.0, 0.0);
                                for (j, cj) in c.iter().enumerate() {
                                    s += coupling.entries[i * dim + j] * cj;
                                }
                                *o += Complex64::new(0.0, -scale) * s;
                            }
                        }
                        Frame::Rotating => {
                            for (i, o) in out.iter_mut().enumerate() {
                                let gi = Complex64::from_polar(1.0, frame_rate[i] * t_rel);
                                let mut s = Complex64::new(0.0, 0.0);
                                for (j, cj) in c.iter().enumerate() {
                                    let gj = Complex64::from_polar(1.0, -frame_rate[j] * t_rel);
                                    s += coupling.entries[i * dim + j] * (gj * cj);
                                }
                                *o += Complex64::new(0.0, -scale) * (gi * s);
                            }
                        }
                    }
                }
            };
            let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
            let mut k2 = k1.clone();
            let mut k3 = k1.clone();
            let mut k4 = k1.clone();
            let mut tmp = k1.clone();
            for step in 0..n_steps {
                let t_rel = step as f64 * dt;
                deriv(t_rel, &amps, &mut k1);
                for i in 0..dim {
                    tmp[i] = amps[i] + k1[i] * (dt / 2.0);
                }
                deriv(t_rel + dt / 2.0, &tmp, &mut k2);
                for i in 0..dim {
                    tmp[i] = amps[i] + k2[i] * (dt / 2.0);
                }
                deriv(t_rel + dt / 2.0, &tmp, &mut k3);
                for i in 0..dim {
                    tmp[i] = amps[i] + k3[i] * dt;
                }
                deriv(t_rel + dt, &tmp, &mut k4);
                for i in 0..dim {
                    amps[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                }
                let t_rel_next = (step + 1) as f64 * dt;
                ctx.check_monitors(t0 + t_rel_next, dt, &amps)?;
                if (step + 1) % config.sample_stride == 0 {
                    ctx.record(t_rel_next, t0 + t_rel_next, &amps);
                }
            }
        }
    }

    // Convert the final amplitudes back to the bare frame so the returned
    // state is frame-independent.
    let t_final_rel = n_steps as f64 * dt;
    let mut final_amps = amps;
    if ctx.frame == Frame::Rotating {
        for (i, a) in final_amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -ctx.frame_rate[i] * t_final_rel);
        }
    }
    let final_state = WavePacketState {
        n_min: state.n_min,
        n_max: state.n_max,
        amps: final_amps,
        t: t0 + t_final_rel,
    };
    Ok((ctx.into_trace(fp), final_state))
}

/// Integrates the stationary resonant ladder model exactly.
///
/// Keeping only the near-resonant terms of the drive turns the rotating-frame
/// equations into a time-independent nearest-neighbor ladder in steps of `N`:
///
/// ```text
/// iħ dĈ_m/dt = [E_m - E_ref - (m - r) ħ/N] Ĉ_m + (λ v / 2i)(Ĉ_{m+N} - Ĉ_{m-N})
/// ```
///
/// with `v` the (constant) ladder coupling element. Levels in different
/// residue classes mod `N` never mix, and each class is a real symmetric
/// tridiagonal problem after the gauge `Ĉ_m = i^k D_k`, so the evolution is
/// evaluated by exact eigendecomposition — the configured integrator and step
/// size only set the sampling grid. The trace records bare-frame overlaps,
/// directly comparable with [`evolve`].
pub fn evolve_rwa(
    state: &WavePacketState,
    model: &SpectrumModel,
    params: &ResonanceParams,
    config: &EvolutionConfig,
) -> Result<(AutocorrTrace, WavePacketState)> {
    config.validate()?;
    if params.lambda < 0.0 {
        return Err(Error::Domain(format!(
            "drive strength lambda must be nonnegative, got {}",
            params.lambda
        )));
    }
    // The reduced model is formulated in the rotating frame regardless of
    // config.frame; the trace is bare-frame either way.
    let mut ctx = RunContext::new(state, model, params, Frame::Rotating)?;
    let fp = {
        let mut f = fingerprint_common(state, model, params, config);
        f.write_bytes(b"rwa-ladder");
        f.finish()
    };

    let dim = state.dim();
    let nstep = i64::from(params.drive_n);
    let g = params.lambda * params.v / 2.0;

    // Group window slots by residue class mod N (of the absolute level).
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); params.drive_n as usize];
    for i in 0..dim {
        let class = (state.level(i).rem_euclid(nstep)) as usize;
        classes[class].push(i);
    }

    // Per class: eigendecomposition of the gauged real tridiagonal block.
    struct Block {
        slots: Vec<usize>,
        eigvals: Vec<f64>,
        /// Row-major, eigenvectors in columns.
        eigvecs: Vec<f64>,
        /// Initial amplitudes in the eigenbasis (gauge already applied).
        coeffs: Vec<Complex64>,
        /// i^k gauge phases per slot.
        gauge: Vec<Complex64>,
    }
    let mut blocks = Vec::new();
    let i_unit = Complex64::new(0.0, 1.0);
    for slots in classes.into_iter().filter(|s| !s.is_empty()) {
        let m = slots.len();
        let diag: Vec<f64> = slots
            .iter()
            .map(|&i| {
                ctx.energies[i] - ctx.frame_rate[i] * ctx.hbar
                // frame_rate·ħ = E_ref + (m - r) ħ/N, so this is the detuning.
            })
            .collect();
        let off = vec![g; m.saturating_sub(1)];
        let gauge: Vec<Complex64> = (0..m).map(|k| i_unit.powu(k as u32)).collect();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
        let (eigvals, eigvecs) =
            if m == 1 { (vec![diag[0]], vec![1.0]) } else { symtrid_eigen(&diag, &off) };
        // coeffs = U^T (gauge^{-1} ⊙ c0)
        for (k, ck) in coeffs.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &slot) in slots.iter().enumerate() {
                let d0 = state.amps[slot] * gauge[j].conj();
                s += eigvecs[j * m + k] * d0;
            }
            *ck = s;
        }
        blocks.push(Block { slots, eigvals, eigvecs, coeffs, gauge });
    }

    let dt = config.dt;
    let n_steps = ((config.t_max / dt).round() as usize).max(1);
    let t0 = state.t;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];

    let hbar = ctx.hbar;
    let eval_at = |t_rel: f64, amps: &mut [Complex64]| {
        for a in amps.iter_mut() {
            *a = Complex64::new(0.0, 0.0);
        }
        for b in &blocks {
            let m = b.slots.len();
            for (j, &slot) in b.slots.iter().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    let ph = Complex64::from_polar(1.0, -b.eigvals[k] * t_rel / hbar);
                    s += b.eigvecs[j * m + k] * (b.coeffs[k] * ph);
                }
                amps[slot] = b.gauge[j] * s;
            }
        }
    };

    eval_at(0.0, &mut amps);
    ctx.record(0.0, t0, &amps);
    for step in 0..n_steps {
        let t_rel = (step + 1) as f64 * dt;
        if (step + 1) % config.sample_stride == 0 || step + 1 == n_steps {
            eval_at(t_rel, &mut amps);
            ctx.check_monitors(t0 + t_rel, dt, &amps)?;
            if (step + 1) % config.sample_stride == 0 {
                ctx.record(t_rel, t0 + t_rel, &amps);
            }
        }
    }

    let t_final_rel = n_steps as f64 * dt;
    eval_at(t_final_rel, &mut amps);
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= Complex64::from_polar(1.0, -ctx.frame_rate[i] * t_final_rel);
    }
    let final_state =
        WavePacketState { n_min: state.n_min, n_max: state.n_max, amps, t: t0 + t_final_rel };
    Ok((ctx.into_trace(fp), final_state))
}

/// Closed-form autocorrelation of a packet with weights `ξ_n` on stationary
/// states with quasi-energies `ε_n`:
///
/// ```text
/// A(t) = Σ_n |ξ_n|² exp(-i ε_n t / ħ_eff)
/// ```
///
/// The phase sign matches the propagator convention used by [`evolve`], so an
/// undriven run with `ε_n = E_n` reproduces this series to integrator
/// accuracy. Weights are normalized internally so `A(0) = 1`.
pub fn predicted_autocorrelation(
    xi: &[f64],
    eps: &[f64],
    hbar_eff: f64,
    times: &[f64],
) -> Result<AutocorrTrace> {
    if xi.len() != eps.len() {
        return Err(Error::Domain(format!(
            "{} weights but {} quasi-energies",
            xi.len(),
            eps.len()
        )));
    }
    if !(hbar_eff > 0.0) {
        return Err(Error::Domain(format!("hbar_eff must be positive, got {hbar_eff}")));
    }
    let norm: f64 = xi.iter().map(|x| x * x).sum();
    if norm <= 0.0 {
        return Err(Error::Domain("weights must carry nonzero total probability".into()));
    }
    let mut f = Fingerprint::new();
    f.write_bytes(b"predicted");
    for &x in xi {
        f.write_f64(x);
    }
    for &e in eps {
        f.write_f64(e);
    }
    f.write_f64(hbar_eff);
    for &t in times {
        f.write_f64(t);
    }

    let mut values = Vec::with_capacity(times.len());
    let mut drift = Vec::with_capacity(times.len());
    for &t in times {
        let mut a = Complex64::new(0.0, 0.0);
        for (x, e) in xi.iter().zip(eps) {
            a += (x * x / norm) * Complex64::from_polar(1.0, -e * t / hbar_eff);
        }
        values.push(a);
        drift.push(0.0);
    }
    Ok(AutocorrTrace { times: times.to_vec(), values, norm_drift: drift, fingerprint: f.finish() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{coupling_matrix, CouplingModel, SpectrumModel};

    fn box_model(hbar: f64) -> SpectrumModel {
        SpectrumModel::square_well(hbar)
    }

    fn params_for(model: &SpectrumModel, lambda: f64, v: f64) -> ResonanceParams {
        ResonanceParams {
            drive_n: 1,
            r: 1.0 / (std::f64::consts::PI.powi(2) * model.hbar_eff),
            lambda,
            v,
            hbar_eff: model.hbar_eff,
        }
    }

    #[test]
    fn gaussian_packet_is_normalized_and_centered() {
        let s = init_gaussian(20.0, 2.0, 2, 38).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-14);
        // Peak amplitude on the center level.
        let peak = s.amps.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!((s.amps[(20 - 2) as usize].norm() - peak).abs() < 1e-15);
        // Symmetric around the center.
        let a = s.amps[(18 - 2) as usize].norm();
        let b = s.amps[(22 - 2) as usize].norm();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn gaussian_window_too_small_is_rejected() {
        let err = init_gaussian(20.0, 2.0, 15, 25).unwrap_err();
        assert!(matches!(err, Error::Window(_)));
    }

    #[test]
    fn narrow_packet_with_integer_center_is_a_point_mass() {
        let s = init_gaussian(7.0, 1e-4, 1, 14).unwrap();
        assert!((s.amps[6].re - 1.0).abs() < 1e-14);
        assert!(s.amps.iter().enumerate().all(|(i, c)| i == 6 || c.norm() < 1e-15));
    }

    #[test]
    fn default_window_clips_at_floor() {
        let (lo, hi) = default_window(5.0, 2.0, 1);
        assert_eq!(lo, 1);
        assert_eq!(hi, 5 + 16 + 2);
        let (lo2, hi2) = default_window(100.0, 2.0, 1);
        assert_eq!(lo2, 100 - 18);
        assert_eq!(hi2, 100 + 18);
    }

    #[test]
    fn undriven_trace_matches_closed_form() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.0, 0.0);
        let state = init_gaussian(20.0, 2.0, 2, 38).unwrap();
        let coupling = coupling_matrix(&CouplingModel::Constant { v: 0.0 }, 1, 2, 38).unwrap();
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 0.05,
            t_max: 2.0,
            sample_stride: 4,
            integrator: Integrator::ExpMidpoint,
        };
        let (trace, _) = evolve(&state, &model, &coupling, &params, &config).unwrap();

        let xi: Vec<f64> = state.amps.iter().map(|c| c.norm()).collect();
        let eps: Vec<f64> = (0..state.dim()).map(|i| energy(&model, state.level(i) as f64).unwrap()).collect();
        let closed = predicted_autocorrelation(&xi, &eps, model.hbar_eff, &trace.times).unwrap();
        for (a, b) in trace.values.iter().zip(&closed.values) {
            assert!((a - b).norm() < 1e-10, "evolved {a} vs closed-form {b}");
        }
    }

    #[test]
    fn first_sample_is_exactly_one() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.0, 0.0);
        let state = init_gaussian(20.0, 2.0, 2, 38).unwrap();
        let coupling = coupling_matrix(&CouplingModel::Constant { v: 0.0 }, 1, 2, 38).unwrap();
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 0.05,
            t_max: 0.5,
            sample_stride: 1,
            integrator: Integrator::ExpMidpoint,
        };
        let (trace, _) = evolve(&state, &model, &coupling, &params, &config).unwrap();
        assert_eq!(trace.values[0], Complex64::new(1.0, 0.0));
        assert_eq!(trace.times[0], 0.0);
    }

    #[test]
    fn frames_agree_for_driven_run() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.05, 1.0);
        let state = init_gaussian(20.0, 2.0, 2, 38).unwrap();
        let coupling = coupling_matrix(&CouplingModel::Constant { v: 1.0 }, 1, 2, 38).unwrap();
        let mk = |frame| EvolutionConfig {
            frame,
            rwa: false,
            dt: 0.02,
            t_max: 4.0,
            sample_stride: 10,
            integrator: Integrator::ExpMidpoint,
        };
        let (bare, fb) = evolve(&state, &model, &coupling, &params, &mk(Frame::Bare)).unwrap();
        let (rot, fr) = evolve(&state, &model, &coupling, &params, &mk(Frame::Rotating)).unwrap();
        for (a, b) in bare.values.iter().zip(&rot.values) {
            assert!((a - b).norm() < 1e-8, "bare {a} vs rotating {b}");
        }
        for (a, b) in fb.amps.iter().zip(&fr.amps) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn unitarity_is_machine_level_for_split_step() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.03, 1.0);
        // Lower edge on the physical floor (exempt from the leak monitor),
        // upper edge far enough out that the dense coupling cannot reach it.
        let state = init_gaussian(20.0, 2.0, 1, 60).unwrap();
        let coupling = coupling_matrix(&CouplingModel::BoxPosition, 1, 1, 60).unwrap();
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 0.05,
            t_max: 20.0,
            sample_stride: 50,
            integrator: Integrator::ExpMidpoint,
        };
        let (trace, _) = evolve(&state, &model, &coupling, &params, &config).unwrap();
        let max_drift = trace.norm_drift.iter().cloned().fold(0.0, f64::max);
        assert!(max_drift < 1e-11, "drift {max_drift}");
    }

    #[test]
    fn rwa_decouples_residue_classes() {
        // Drive in steps of N = 2: a packet starting on even levels must
        // never populate odd levels in the reduced model.
        let model = box_model(0.2);
        let params = ResonanceParams { drive_n: 2, r: 6.0, lambda: 0.3, v: 0.8, hbar_eff: 0.2 };
        let mut state = init_gaussian(6.0, 0.6, 1, 16).unwrap();
        // Project onto even levels only.
        for i in 0..state.dim() {
            if state.level(i) % 2 != 0 {
                state.amps[i] = Complex64::new(0.0, 0.0);
            }
        }
        let norm = state.norm_sq().sqrt();
        for a in &mut state.amps {
            *a /= norm;
        }
        let config = EvolutionConfig {
            frame: Frame::Rotating,
            rwa: true,
            dt: 0.05,
            t_max: 5.0,
            sample_stride: 10,
            integrator: Integrator::ExpMidpoint,
        };
        let (_, fin) = evolve_rwa(&state, &model, &params, &config).unwrap();
        for i in 0..fin.dim() {
            if fin.level(i) % 2 != 0 {
                assert!(fin.amps[i].norm() < 1e-14, "odd level {} populated", fin.level(i));
            }
        }
        assert!((fin.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rwa_reduces_to_free_phases_without_drive() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.0, 1.0);
        let state = init_gaussian(20.0, 2.0, 2, 38).unwrap();
        let config = EvolutionConfig {
            frame: Frame::Rotating,
            rwa: true,
            dt: 0.05,
            t_max: 2.0,
            sample_stride: 4,
            integrator: Integrator::ExpMidpoint,
        };
        let (trace, _) = evolve_rwa(&state, &model, &params, &config).unwrap();
        let xi: Vec<f64> = state.amps.iter().map(|c| c.norm()).collect();
        let eps: Vec<f64> = (0..state.dim()).map(|i| energy(&model, state.level(i) as f64).unwrap()).collect();
        let closed = predicted_autocorrelation(&xi, &eps, model.hbar_eff, &trace.times).unwrap();
        for (a, b) in trace.values.iter().zip(&closed.values) {
            assert!((a - b).norm() < 1e-10, "rwa {a} vs closed {b}");
        }
    }

    #[test]
    fn boundary_leak_is_reported() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.4, 1.0);
        // Window deliberately tight: ±5σ fits, but the drive pushes
        // population into the edges quickly.
        let state = init_gaussian(20.0, 1.5, 12, 28).unwrap();
        let coupling = coupling_matrix(&CouplingModel::Constant { v: 1.0 }, 1, 12, 28).unwrap();
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 0.05,
            t_max: 50.0,
            sample_stride: 10,
            integrator: Integrator::ExpMidpoint,
        };
        let err = evolve(&state, &model, &coupling, &params, &config).unwrap_err();
        match err {
            Error::BoundaryPopulation { level, population, .. } => {
                assert!(level == 12 || level == 28);
                assert!(population > BOUNDARY_LIMIT);
            }
            other => panic!("expected boundary error, got {other:?}"),
        }
    }

    #[test]
    fn oversized_dt_is_rejected() {
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 0.05,
            t_max: 1.0,
            sample_stride: 1,
            integrator: Integrator::Rk4Fixed,
        };
        assert!(config.validate().is_ok());
        let config = EvolutionConfig { dt: 0.07, ..config };
        assert!(matches!(config.validate(), Err(Error::Domain(_))));
    }

    #[test]
    fn predicted_autocorrelation_two_levels() {
        // |ξ|² = (0.5, 0.5), ε = (0, π): A(t) = (1 + e^{-iπt/ħ})/2.
        let xi = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        let eps = [0.0, std::f64::consts::PI];
        let times = [0.0, 1.0, 2.0];
        let tr = predicted_autocorrelation(&xi, &eps, 1.0, &times).unwrap();
        assert!((tr.values[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(tr.values[1].norm() < 1e-15, "half-period null, got {}", tr.values[1]);
        assert!((tr.values[2] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fingerprint_reacts_to_inputs() {
        let model = box_model(0.05);
        let params = params_for(&model, 0.0, 0.0);
        let state = init_gaussian(20.0, 2.0, 2, 38).unwrap();
        let coupling = coupling_matrix(&CouplingModel::Constant { v: 0.0 }, 1, 2, 38).unwrap();
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 0.05,
            t_max: 0.5,
            sample_stride: 1,
            integrator: Integrator::ExpMidpoint,
        };
        let (t1, _) = evolve(&state, &model, &coupling, &params, &config).unwrap();
        let (t2, _) = evolve(&state, &model, &coupling, &params, &config).unwrap();
        assert_eq!(t1.fingerprint, t2.fingerprint);
        let config2 = EvolutionConfig { dt: 0.025, ..config };
        let (t3, _) = evolve(&state, &model, &coupling, &params, &config2).unwrap();
        assert_ne!(t1.fingerprint, t3.fingerprint);
    }
}
