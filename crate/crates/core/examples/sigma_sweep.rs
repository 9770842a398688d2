//! Period dispersion of ⟨x⟩ against clock frequency, compared with the
//! quarter-cycle estimate σ ∝ ⟨Ĥ²⟩/λ.
//!
//!     cargo run --release --example sigma_sweep

use num_complex::Complex64;
use oscillock::clock::ClockParams;
use oscillock::evolution::EvolutionRequest;
use oscillock::periods::{log_grid, sigma_vs_lambda, SweepOptions};
use oscillock::phase::PhaseLaw;
use oscillock::systems::{
    coherent_state, harmonic_observables, harmonic_spectrum, CoherentStateSpec, HarmonicParams,
};

fn main() -> oscillock::error::Result<()> {
    let params = HarmonicParams::natural();
    let cutoff = 40;
    let state = coherent_state(CoherentStateSpec {
        alpha: Complex64::new(0.6, 0.0),
        cutoff,
    })?;
    let obs = harmonic_observables(cutoff, params)?;
    let request = EvolutionRequest::new(
        harmonic_spectrum(cutoff, params)?,
        state,
        ClockParams::natural(1.0)?,
        vec![0.0],
        PhaseLaw::Oscillating,
    )?;

    let grid = log_grid(1.0, 1e3, 7)?;
    let cmp = sigma_vs_lambda(&request, &obs.x, &grid, SweepOptions::default())?;

    println!(
        "{:>12} {:>14} {:>14} {:>8}",
        "lambda", "sigma_num", "sigma_ana", "ratio"
    );
    for run in &cmp.runs {
        let num = run
            .ensemble
            .as_ref()
            .map_or(f64::NAN, |e| e.relative_std_dev);
        println!(
            "{:>12.4e} {:>14.6e} {:>14.6e} {:>8.3} {}",
            run.lambda,
            num,
            run.sigma_analytic,
            num / run.sigma_analytic,
            run.flag.as_deref().unwrap_or("")
        );
    }
    println!(
        "slope numeric {:.4}, analytic {:.4}",
        cmp.numeric_slope, cmp.analytic_slope
    );
    Ok(())
}
