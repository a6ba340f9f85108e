//! Integrator-level checks against independently computable evolutions:
//! exact undriven revivals, single-mode stationarity, frame independence,
//! drive-reversal symmetry, and the Runge-Kutta convergence order.

use driven_revivals::propagate::{
    evolve, init_gaussian, predicted_autocorrelation, EvolutionConfig, Frame, Integrator,
    WavePacketState,
};
use driven_revivals::quasienergy::ResonanceParams;
use driven_revivals::spectrum::{coupling_matrix, energy, CouplingModel, SpectrumModel};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Low-order power-law ladder with small level frequencies, so the
/// fixed-step Runge-Kutta integrator is comfortably inside its stability
/// region at moderate step sizes.
fn soft_ladder() -> (SpectrumModel, ResonanceParams) {
    let model = SpectrumModel::power_law(1.0, 1.2, 1.0);
    let params = ResonanceParams { drive_n: 1, r: 3.0, lambda: 0.2, v: 0.4, hbar_eff: 1.0 };
    (model, params)
}

fn l2_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn undriven_box_packet_revives_exactly() {
    // For the quadratic box ladder every phase E_n t*/ħ is a multiple of 2π
    // at t* = 4/(πħ), so |A(t*)|² returns to 1 for any packet.
    let hbar = 0.05;
    let model = SpectrumModel::square_well(hbar);
    let params = ResonanceParams { drive_n: 1, r: 20.0, lambda: 0.0, v: 1.0, hbar_eff: hbar };
    let coupling = coupling_matrix(&CouplingModel::Constant { v: 1.0 }, 1, 2, 38).unwrap();
    let psi0 = init_gaussian(20.0, 2.0, 2, 38).unwrap();
    let t_star = 4.0 / (PI * hbar);
    let config = EvolutionConfig {
        frame: Frame::Bare,
        rwa: false,
        dt: t_star / 800.0,
        t_max: t_star,
        sample_stride: 800,
        integrator: Integrator::ExpMidpoint,
    };
    let (trace, _) = evolve(&psi0, &model, &coupling, &params, &config).unwrap();
    let last = trace.values.last().unwrap();
    assert!((trace.times.last().unwrap() - t_star).abs() < 1e-9);
    assert!(
        last.norm_sqr() >= 0.9999,
        "revival overlap |A(t*)|² = {} at t* = {t_star}",
        last.norm_sqr()
    );
}

#[test]
fn single_level_state_is_stationary_without_drive() {
    let model = SpectrumModel::square_well(0.05);
    let params = ResonanceParams { drive_n: 1, r: 5.0, lambda: 0.0, v: 1.0, hbar_eff: 0.05 };
    let coupling = coupling_matrix(&CouplingModel::Constant { v: 1.0 }, 1, 2, 8).unwrap();
    let mut amps = vec![Complex64::new(0.0, 0.0); 7];
    amps[3] = Complex64::new(1.0, 0.0); // level 5
    let psi0 = WavePacketState { n_min: 2, n_max: 8, amps, t: 0.0 };
    let config = EvolutionConfig {
        frame: Frame::Bare,
        rwa: false,
        dt: 0.05,
        t_max: 5.0,
        sample_stride: 10,
        integrator: Integrator::ExpMidpoint,
    };
    let (trace, _) = evolve(&psi0, &model, &coupling, &params, &config).unwrap();
    for (t, a) in trace.times.iter().zip(&trace.values) {
        assert!((a.norm() - 1.0).abs() < 1e-12, "|A({t})| = {}", a.norm());
    }
    assert!(trace.norm_drift.iter().all(|&d| d < 1e-13));
}

#[test]
fn bare_and_rotating_frames_agree_for_rk4() {
    let (model, params) = soft_ladder();
    let coupling = coupling_matrix(&CouplingModel::Constant { v: 0.4 }, 1, 1, 9).unwrap();
    let psi0 = init_gaussian(3.0, 0.4, 1, 9).unwrap();
    let dt = 2.0 * PI / 1024.0;
    let mut config = EvolutionConfig {
        frame: Frame::Bare,
        rwa: false,
        dt,
        t_max: 2.0 * PI,
        sample_stride: 16,
        integrator: Integrator::Rk4Fixed,
    };
    let (bare, _) = evolve(&psi0, &model, &coupling, &params, &config).unwrap();
    config.frame = Frame::Rotating;
    let (rot, _) = evolve(&psi0, &model, &coupling, &params, &config).unwrap();
    assert_eq!(bare.times, rot.times);
    for ((t, a), b) in bare.times.iter().zip(&bare.values).zip(&rot.values) {
        assert!((a - b).norm() < 1e-6, "t={t}: bare {a} vs rotating {b}");
    }
}

#[test]
fn reversed_drive_on_the_conjugate_state_returns_to_start() {
    // With a real Hamiltonian and t_max a whole number of drive periods,
    // sin(t_max - s) = -sin(s): conjugating the final state and evolving it
    // under the sign-flipped drive must land back on the (real) initial
    // packet. The symmetric splitting mirrors this identity step for step.
    let hbar = 0.05;
    let model = SpectrumModel::square_well(hbar);
    let params = ResonanceParams { drive_n: 1, r: 20.0, lambda: 0.1, v: 1.0, hbar_eff: hbar };
    let forward = coupling_matrix(&CouplingModel::Constant { v: 1.0 }, 1, 2, 38).unwrap();
    let reversed = coupling_matrix(&CouplingModel::Constant { v: -1.0 }, 1, 2, 38).unwrap();
    let psi0 = init_gaussian(20.0, 2.0, 2, 38).unwrap();
    let t_max = 4.0 * PI;
    let config = EvolutionConfig {
        frame: Frame::Bare,
        rwa: false,
        dt: t_max / 256.0,
        t_max,
        sample_stride: 256,
        integrator: Integrator::ExpMidpoint,
    };
    let (_, out) = evolve(&psi0, &model, &forward, &params, &config).unwrap();
    let back = WavePacketState {
        n_min: out.n_min,
        n_max: out.n_max,
        amps: out.amps.iter().map(|a| a.conj()).collect(),
        t: 0.0,
    };
    let (_, roundtrip) = evolve(&back, &model, &reversed, &params, &config).unwrap();
    let recovered: Vec<Complex64> = roundtrip.amps.iter().map(|a| a.conj()).collect();
    let err = l2_diff(&recovered, &psi0.amps);
    assert!(err < 1e-6, "round-trip L2 error {err:e}");
}

#[test]
fn rk4_final_state_converges_at_fourth_order() {
    let (model, params) = soft_ladder();
    let coupling = coupling_matrix(&CouplingModel::Constant { v: 0.4 }, 1, 1, 9).unwrap();
    let psi0 = init_gaussian(3.0, 0.4, 1, 9).unwrap();
    let run = |steps: usize| {
        let config = EvolutionConfig {
            frame: Frame::Bare,
            rwa: false,
            dt: 2.0 * PI / steps as f64,
            t_max: 2.0 * PI,
            sample_stride: steps,
            integrator: Integrator::Rk4Fixed,
        };
        let (trace, out) = evolve(&psi0, &model, &coupling, &params, &config).unwrap();
        assert!(trace.norm_drift.iter().all(|&d| d < 1e-6));
        out.amps
    };
    let reference = run(8192);
    let coarse = l2_diff(&run(512), &reference);
    let fine = l2_diff(&run(1024), &reference);
    let order = (coarse / fine).log2();
    assert!(
        (3.7..=4.3).contains(&order),
        "convergence order {order} (errors {coarse:e} -> {fine:e})"
    );
}

#[test]
fn undriven_rk4_matches_the_closed_form_autocorrelation() {
    let model = SpectrumModel::power_law(1.0, 1.2, 1.0);
    let params = ResonanceParams { drive_n: 1, r: 3.0, lambda: 0.0, v: 0.4, hbar_eff: 1.0 };
    let coupling = coupling_matrix(&CouplingModel::Constant { v: 0.4 }, 1, 1, 9).unwrap();
    let psi0 = init_gaussian(3.0, 0.4, 1, 9).unwrap();
    let config = EvolutionConfig {
        frame: Frame::Bare,
        rwa: false,
        dt: 2.0 * PI / 2048.0,
        t_max: 2.0 * PI,
        sample_stride: 64,
        integrator: Integrator::Rk4Fixed,
    };
    let (trace, _) = evolve(&psi0, &model, &coupling, &params, &config).unwrap();
    let xi: Vec<f64> = psi0.amps.iter().map(|a| a.re).collect();
    let eps: Vec<f64> = (1..=9).map(|n| energy(&model, n as f64).unwrap()).collect();
    let predicted = predicted_autocorrelation(&xi, &eps, 1.0, &trace.times).unwrap();
    for ((t, a), p) in trace.times.iter().zip(&trace.values).zip(&predicted.values) {
        assert!((a - p).norm() < 1e-8, "t={t}: integrated {a} vs closed form {p}");
    }
}
