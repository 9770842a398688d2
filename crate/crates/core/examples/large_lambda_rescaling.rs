//! For a fast clock the oscillation of ⟨x⟩ runs at π/4 of the slow-clock
//! frequency.
//!
//!     cargo run --release --example large_lambda_rescaling

use std::f64::consts::PI;

use num_complex::Complex64;
use oscillock::clock::ClockParams;
use oscillock::evolution::EvolutionRequest;
use oscillock::periods::{period_ensemble, scan_crossings};
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

    let mut freqs = Vec::new();
    for lambda in [1e-5, 1e3] {
        let req = EvolutionRequest::new(
            harmonic_spectrum(cutoff, params)?,
            state.clone(),
            ClockParams::natural(lambda)?,
            vec![0.0],
            PhaseLaw::Oscillating,
        )?;
        let crossings = scan_crossings(|t| req.expectation(t, &obs.x), 0.0, 0.01, 41, 1e3)?;
        let ens = period_ensemble(&crossings)?;
        println!(
            "lambda = {lambda:e}: mean period {:.8}, frequency {:.8}",
            ens.mean_period,
            ens.angular_frequency()
        );
        freqs.push(ens.angular_frequency());
    }
    println!("ratio {:.8} (pi/4 = {:.8})", freqs[1] / freqs[0], PI / 4.0);
    Ok(())
}
