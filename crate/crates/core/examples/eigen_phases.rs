//! Accumulated eigenphases against the oscillating clock, next to the two
//! reference laws they interpolate between.
//!
//!     cargo run --example eigen_phases

use std::f64::consts::PI;

use oscillock::clock::ClockParams;
use oscillock::phase::{
    accumulated_phase, half_cycle_increment, large_lambda_phase, small_lambda_phase,
};

fn main() -> oscillock::error::Result<()> {
    let energy = 1.5;
    for lambda in [1e-2, 1.0, 1e2] {
        let clock = ClockParams::natural(lambda)?;
        println!(
            "lambda = {lambda:e}: half-cycle increment {:.6}, full cycle {:.6} (= -pi E^2/lambda)",
            half_cycle_increment(energy, &clock),
            -PI * energy * energy / lambda
        );
        for tau in [0.5, 2.0, 10.0] {
            let p = accumulated_phase(tau, energy, &clock)?;
            println!(
                "  tau {tau:>5}: phase {:>12.6}  small {:>10.6}  large {:>10.6}  (quarter turns {})",
                p.total_phase(),
                small_lambda_phase(tau, energy, &clock),
                large_lambda_phase(tau, energy, &clock),
                4.0 * p.turns
            );
        }
    }
    Ok(())
}
