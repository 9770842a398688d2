//! ⟨r⟩ of a hydrogen s-state superposition under the oscillating clock and
//! under standard evolution.
//!
//!     cargo run --release --example hydrogen_radius

use num_complex::Complex64;
use oscillock::clock::ClockParams;
use oscillock::evolution::{observable_series, EvolutionRequest};
use oscillock::phase::PhaseLaw;
use oscillock::systems::{hydrogen_system, StateVector};

fn main() -> oscillock::error::Result<()> {
    let sys = hydrogen_system(3)?;
    let state = StateVector::normalized(vec![Complex64::new(1.0, 0.0); 3])?;
    let tau: Vec<f64> = (0..=10).map(|i| i as f64 * 5.0).collect();

    for (name, mode) in [
        ("oscillating", PhaseLaw::Oscillating),
        ("reference", PhaseLaw::SmallLambdaReference),
    ] {
        let req = EvolutionRequest::new(
            sys.spectrum.clone(),
            state.clone(),
            ClockParams::natural(0.05)?,
            tau.clone(),
            mode,
        )?;
        println!("{name}");
        for p in observable_series(&req, &sys.radius, &sys.radius_sq)? {
            println!(
                "  tau {:>5.1}: <r> = {:>9.5}, var r = {:>10.4}",
                p.tau, p.value, p.variance
            );
        }
    }
    Ok(())
}
