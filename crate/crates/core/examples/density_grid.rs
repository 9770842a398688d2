//! |ψ(x, τ)|² of a coherent state on a coarse grid, printed as text.
//!
//!     cargo run --release --example density_grid

use num_complex::Complex64;
use oscillock::clock::ClockParams;
use oscillock::evolution::{wavefunction_on_grid, EvolutionRequest};
use oscillock::phase::PhaseLaw;
use oscillock::systems::{coherent_state, harmonic_spectrum, CoherentStateSpec, HarmonicParams};

fn main() -> oscillock::error::Result<()> {
    let cutoff = 64;
    let req = EvolutionRequest::new(
        harmonic_spectrum(cutoff, HarmonicParams::natural())?,
        coherent_state(CoherentStateSpec {
            alpha: Complex64::new(2.0, 0.0),
            cutoff,
        })?,
        ClockParams::natural(0.1)?,
        vec![0.0],
        PhaseLaw::Oscillating,
    )?;
    let xs: Vec<f64> = (0..=60).map(|i| -6.0 + 0.2 * i as f64).collect();
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for j in 0..=24 {
        let tau = 0.5 * j as f64;
        let row: String = wavefunction_on_grid(&req, tau, &xs)?
            .iter()
            .map(|a| shades[((a.norm_sqr() * 16.0) as usize).min(9)])
            .collect();
        println!("{tau:>5.1} |{row}|");
    }
    Ok(())
}
