//! A coherent state α = 2 spreads when the clock is slow (λ = 0.1) and stays
//! coherent when it is fast (λ = 10³).
//!
//!     cargo run --release --example coherent_dephasing

use std::f64::consts::PI;

use num_complex::Complex64;
use oscillock::clock::ClockParams;
use oscillock::evolution::{phase_space_trajectory, EvolutionRequest};
use oscillock::phase::PhaseLaw;
use oscillock::systems::{
    coherent_state, harmonic_observables, harmonic_spectrum, CoherentStateSpec, HarmonicParams,
};

fn main() -> oscillock::error::Result<()> {
    let params = HarmonicParams::natural();
    let cutoff = 64;
    let state = coherent_state(CoherentStateSpec {
        alpha: Complex64::new(2.0, 0.0),
        cutoff,
    })?;
    let obs = harmonic_observables(cutoff, params)?;
    let tau: Vec<f64> = (0..=4000).map(|i| i as f64 * 10.0 * PI / 4000.0).collect();

    for lambda in [0.1, 1e3] {
        let req = EvolutionRequest::new(
            harmonic_spectrum(cutoff, params)?,
            state.clone(),
            ClockParams::natural(lambda)?,
            tau.clone(),
            PhaseLaw::Oscillating,
        )?;
        let traj = phase_space_trajectory(&req, &obs)?;
        let (lo, hi) = traj.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
            (lo.min(p.var_x), hi.max(p.var_x))
        });
        let first_spread = traj.iter().find(|p| p.var_x > 1.5).map(|p| p.tau);
        let min_product = traj
            .iter()
            .map(|p| p.uncertainty_product())
            .fold(f64::INFINITY, f64::min);
        println!(
            "lambda = {lambda:e}: var_x in [{lo:.4}, {hi:.4}], first var_x > 1.5 at {first_spread:?}, \
             min var_x var_p - cov^2 = {min_product:.6}"
        );
    }
    Ok(())
}
