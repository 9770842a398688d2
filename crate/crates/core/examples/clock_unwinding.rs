//! Map global time τ onto the bounded clock variable φ and its cycle index.
//!
//!     cargo run --example clock_unwinding

use oscillock::clock::{clock_orbit, phi_of_tau, turning_amplitude, ClockParams};

fn main() -> oscillock::error::Result<()> {
    let clock = ClockParams::natural(1.0)?;
    let amp = turning_amplitude(1.0, &clock)?;
    println!(
        "phi_t = {}, clock period = {}",
        amp.phi_t,
        amp.clock_period()
    );

    println!("{:>6} {:>8} {:>3} {:>9}", "tau", "phi", "n", "branch");
    for i in 0..=20 {
        let tau = 0.5 * i as f64;
        let s = phi_of_tau(tau, amp.phi_t);
        println!(
            "{:>6.2} {:>8.4} {:>3} {:>9?}",
            s.tau, s.phi, s.n, s.direction
        );
    }

    // the clock's own phase-space loop, φ_t sinθ against −|E|cosθ
    let orbit = clock_orbit(1.0, &clock, 8)?;
    for (phi, p) in orbit {
        println!("orbit phi = {phi:+.4}, p = {p:+.4}");
    }
    Ok(())
}
