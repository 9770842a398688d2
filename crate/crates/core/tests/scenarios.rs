use std::f64::consts::PI;

use num_complex::Complex64;
use oscillock::clock::ClockParams;
use oscillock::evolution::{phase_space_trajectory, wavefunction_on_grid, EvolutionRequest};
use oscillock::periods::{period_ensemble, scan_crossings};
use oscillock::phase::PhaseLaw;
use oscillock::systems::{
    coherent_state, harmonic_observables, harmonic_spectrum, CoherentStateSpec,
    HarmonicObservables, HarmonicParams,
};

fn coherent(
    alpha: Complex64,
    lambda: f64,
    mode: PhaseLaw,
    tau: Vec<f64>,
) -> (EvolutionRequest, HarmonicObservables) {
    let cutoff = 64;
    let params = HarmonicParams::natural();
    let req = EvolutionRequest::new(
        harmonic_spectrum(cutoff, params).unwrap(),
        coherent_state(CoherentStateSpec { alpha, cutoff }).unwrap(),
        ClockParams::natural(lambda).unwrap(),
        tau,
        mode,
    )
    .unwrap();
    (req, harmonic_observables(cutoff, params).unwrap())
}

fn real(a: f64) -> Complex64 {
    Complex64::new(a, 0.0)
}

#[test]
fn fast_clock_crossings_are_four_apart() {
    let (req, obs) = coherent(real(2.0), 1e3, PhaseLaw::Oscillating, vec![0.0]);
    let c = scan_crossings(|t| req.expectation(t, &obs.x), 0.0, 0.01, 21, 200.0).unwrap();
    for w in c.windows(2) {
        assert!((w[1] - w[0] - 4.0).abs() < 1e-2, "spacing {}", w[1] - w[0]);
    }
    assert!((period_ensemble(&c).unwrap().mean_period - 8.0).abs() < 1e-3);
}

#[test]
fn reference_modes_have_no_period_dispersion() {
    for (mode, period) in [
        (PhaseLaw::SmallLambdaReference, 2.0 * PI),
        (PhaseLaw::LargeLambdaReference, 8.0),
    ] {
        let (req, obs) = coherent(real(0.6), 10.0, mode, vec![0.0]);
        let c = scan_crossings(|t| req.expectation(t, &obs.x), 0.0, 0.01, 61, 1e3).unwrap();
        let e = period_ensemble(&c).unwrap();
        assert!(
            e.relative_std_dev < 1e-9,
            "{mode:?}: {}",
            e.relative_std_dev
        );
        assert!((e.mean_period - period).abs() < 1e-8);
    }
}

#[test]
fn slow_clock_orbit_is_a_circle() {
    let tau: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
    let (req, obs) = coherent(real(2.0), 1e-5, PhaseLaw::Oscillating, tau);
    for p in phase_space_trajectory(&req, &obs).unwrap() {
        let r = p.mean_x.hypot(p.mean_p);
        assert!((r - 8f64.sqrt()).abs() < 1e-6);
        assert!((p.var_x - 0.5).abs() < 1e-6);
        assert!((p.uncertainty() - 0.5f64.sqrt()).abs() < 1e-6);
    }
}

#[test]
fn coherent_wavefunction_is_a_displaced_gaussian() {
    let alpha = Complex64::new(1.5, 0.7);
    let (req, _) = coherent(alpha, 0.2, PhaseLaw::Oscillating, vec![0.0]);
    let xs: Vec<f64> = (0..=800).map(|i| -10.0 + 0.025 * i as f64).collect();
    let centre = 2f64.sqrt() * alpha.re;
    let psi0 = wavefunction_on_grid(&req, 0.0, &xs).unwrap();
    for (x, a) in xs.iter().zip(&psi0) {
        let gauss = (-(x - centre).powi(2)).exp() / PI.sqrt();
        assert!((a.norm_sqr() - gauss).abs() < 1e-10);
    }
    for tau in [0.0, 3.7, 41.0, 250.0] {
        let psi = wavefunction_on_grid(&req, tau, &xs).unwrap();
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>() * 0.025;
        assert!((norm - 1.0).abs() < 1e-6, "tau {tau}: {norm}");
    }
}
