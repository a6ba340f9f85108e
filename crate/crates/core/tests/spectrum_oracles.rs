//! Independent cross-checks of the spectrum module: analytic derivatives
//! against high-order finite differences of the energy function, coupling
//! matrix elements against direct numerical quadrature, and resonance
//! locations against closed-form inversions of the resonance condition.

use driven_revivals::spectrum::{
    box_position_element, energy, energy_derivs, find_resonant_level, SpectrumModel,
};
use driven_revivals::Error;

/// Fourth-order central stencils. The step is scaled to the evaluation point
/// so the relative truncation error is uniform across the ladder.
fn fd_derivs(model: &SpectrumModel, r: f64) -> (f64, f64, f64) {
    let f = |x: f64| energy(model, x).unwrap();
    let h1 = 1e-3 * r.max(1.0);
    let d1 = (-f(r + 2.0 * h1) + 8.0 * f(r + h1) - 8.0 * f(r - h1) + f(r - 2.0 * h1)) / (12.0 * h1);
    let d2 = (-f(r + 2.0 * h1) + 16.0 * f(r + h1) - 30.0 * f(r) + 16.0 * f(r - h1)
        - f(r - 2.0 * h1))
        / (12.0 * h1 * h1);
    let h3 = 1e-2 * r.max(1.0);
    let d3 = (f(r - 3.0 * h3) - 8.0 * f(r - 2.0 * h3) + 13.0 * f(r - h3) - 13.0 * f(r + h3)
        + 8.0 * f(r + 2.0 * h3)
        - f(r + 3.0 * h3))
        / (8.0 * h3 * h3 * h3);
    (d1, d2, d3)
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    let models = [
        SpectrumModel::square_well(0.05),
        SpectrumModel::square_well(0.01),
        SpectrumModel::power_law(1.0, 3.0, 12.0),
        SpectrumModel::power_law(0.8, 1.7, 0.3),
        SpectrumModel::power_law(2.5, 1.2, 1.0),
    ];
    for model in &models {
        for &r in &[2.0, 5.0, 10.0, 37.3, 100.0] {
            let (a1, a2, a3) = energy_derivs(model, r).unwrap();
            let (f1, f2, f3) = fd_derivs(model, r);
            let e1 = energy(model, r).unwrap();
            // Scale-aware floors keep the relative test meaningful when a
            // derivative is identically zero (the square well's third).
            let tol1 = 1e-6 * a1.abs().max(e1 / r);
            let tol2 = 1e-6 * a2.abs().max(e1 / (r * r));
            let tol3 = 1e-6 * a3.abs().max(e1 / (r * r * r));
            assert!((f1 - a1).abs() <= tol1, "{model:?} r={r}: d1 {f1} vs {a1}");
            assert!((f2 - a2).abs() <= tol2, "{model:?} r={r}: d2 {f2} vs {a2}");
            assert!((f3 - a3).abs() <= tol3, "{model:?} r={r}: d3 {f3} vs {a3}");
        }
    }
}

/// Composite Simpson quadrature of `2∫₀¹ x sin(mπx) sin(nπx) dx`.
fn position_element_by_quadrature(m: i64, n: i64) -> f64 {
    let panels = 4000usize; // even
    let h = 1.0 / panels as f64;
    let g = |x: f64| {
        2.0 * x
            * (m as f64 * std::f64::consts::PI * x).sin()
            * (n as f64 * std::f64::consts::PI * x).sin()
    };
    let mut sum = g(0.0) + g(1.0);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(i as f64 * h);
    }
    sum * h / 3.0
}

#[test]
fn box_position_elements_match_quadrature() {
    for m in 1..=20i64 {
        for n in 1..=20i64 {
            let analytic = box_position_element(m, n);
            let numeric = position_element_by_quadrature(m, n);
            assert!(
                (analytic - numeric).abs() < 1e-8,
                "({m},{n}): analytic {analytic} vs quadrature {numeric}"
            );
        }
    }
}

#[test]
fn resonance_inverts_closed_forms() {
    // Square well: N E'(r) = h  =>  r = 1/(N π² h).
    for &(h, n) in &[(0.05_f64, 1_u32), (0.01, 1), (0.005, 2), (0.02, 3)] {
        let model = SpectrumModel::square_well(h);
        let r = find_resonant_level(&model, n).unwrap();
        let want = 1.0 / (f64::from(n) * std::f64::consts::PI.powi(2) * h);
        assert!((r - want).abs() <= 1e-10 * want, "h={h} N={n}: {r} vs {want}");
    }
    // Power law E = c n^k: N c k r^(k-1) = h  =>  r = (h/(N c k))^(1/(k-1)).
    for &(c, k, h, n) in &[(1.0_f64, 3.0_f64, 12.0_f64, 1_u32), (0.2, 1.5, 0.9, 1), (1.0, 3.0, 27.0, 2)]
    {
        let model = SpectrumModel::power_law(c, k, h);
        let r = find_resonant_level(&model, n).unwrap();
        let want = (h / (f64::from(n) * c * k)).powf(1.0 / (k - 1.0));
        assert!((r - want).abs() <= 1e-10 * want, "c={c} k={k} h={h} N={n}: {r} vs {want}");
    }
}

#[test]
fn resonance_residual_vanishes_to_tolerance() {
    for model in [
        SpectrumModel::square_well(0.03),
        SpectrumModel::power_law(0.5, 2.5, 4.0),
    ] {
        let r = find_resonant_level(&model, 1).unwrap();
        let (e1, _, _) = energy_derivs(&model, r).unwrap();
        let residual = (e1 - model.hbar_eff).abs() / model.hbar_eff;
        assert!(residual < 1e-10, "{model:?}: residual {residual}");
    }
}

#[test]
fn resonance_outside_physical_ladder_is_refused() {
    // Square well with large h: the root of N E'(r) = h sits below n = 1.
    let model = SpectrumModel::square_well(0.2);
    assert!(matches!(find_resonant_level(&model, 1), Err(Error::NoResonance { .. })));
}
