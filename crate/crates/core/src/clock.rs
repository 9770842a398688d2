//! Unwinding of the periodic clock variable φ into a monotonic global time τ.
//!
//! The clock oscillates between its turning points ±φ_t with unit speed, so
//! one full cycle lasts 4φ_t. Cycle `n` covers τ/φ_t ∈ [4n−1, 4n+3): the first
//! half (forward, dφ/dτ = +1) runs from −φ_t to +φ_t and the second half
//! (backward, dφ/dτ = −1) returns to −φ_t.

use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this ratio τ/φ_t an f64 can no longer carry a fractional cycle part.
const EXACT_RATIO_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52

static RATIO_WARNED: AtomicBool = AtomicBool::new(false);

/// Clock stiffness λ and action quantum ħ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockParams {
    lambda: f64,
    hbar: f64,
}

impl ClockParams {
    pub fn new(lambda: f64, hbar: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!(
                "clock stiffness lambda must be positive and finite, got {lambda}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::domain(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        Ok(Self { lambda, hbar })
    }

    /// Natural units, ħ = 1.
    pub fn natural(lambda: f64) -> Result<Self> {
        Self::new(lambda, 1.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Turning value φ_t = |E|/λ of the clock for one energy eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningAmplitude {
    pub phi_t: f64,
    pub energy: f64,
}

impl TurningAmplitude {
    /// Duration 4φ_t of one full clock cycle.
    pub fn clock_period(&self) -> f64 {
        4.0 * self.phi_t
    }
}

/// Sign of dφ/dτ on the current half-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// Clock state reached at global time τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnwoundClockSample {
    pub tau: f64,
    pub phi: f64,
    pub n: i64,
    pub direction: Direction,
}

pub fn turning_amplitude(energy: f64, clock: &ClockParams) -> Result<TurningAmplitude> {
    if energy == 0.0 || !energy.is_finite() {
        return Err(Error::domain(format!(
            "turning amplitude undefined for energy {energy}: the clock never turns"
        )));
    }
    Ok(TurningAmplitude {
        phi_t: energy.abs() / clock.lambda,
        energy,
    })
}

/// Cycle index n together with the offset τ − 4nφ_t ∈ [−φ_t, 3φ_t).
///
/// The offset is formed with a fused multiply-add so that it stays accurate
/// when τ spans billions of cycles.
fn unwind(tau: f64, phi_t: f64) -> (i64, f64) {
    debug_assert!(phi_t > 0.0);
    let ratio = tau / phi_t;
    if ratio.abs() > EXACT_RATIO_LIMIT && !RATIO_WARNED.swap(true, Ordering::Relaxed) {
        log::warn!(
            "tau/phi_t = {ratio:e} exceeds 2^52; cycle boundaries rely on the fused remainder"
        );
    }
    let period = 4.0 * phi_t;
    let mut n = ((1.0 + ratio) / 4.0).floor();
    let mut offset = (-period).mul_add(n, tau);
    if offset < -phi_t {
        n -= 1.0;
        offset += period;
    } else if offset >= 3.0 * phi_t {
        n += 1.0;
        offset -= period;
    }
    (n as i64, offset)
}

/// n = ⌊(1 + τ/φ_t)/4⌋.
pub fn cycle_index(tau: f64, phi_t: f64) -> i64 {
    unwind(tau, phi_t).0
}

/// Piecewise-linear clock value at global time τ.
///
/// Branch boundaries belong to the half-cycle that starts there: τ/φ_t = 4n+1
/// is reported as backward, τ/φ_t = 4n−1 as forward.
pub fn phi_of_tau(tau: f64, phi_t: f64) -> UnwoundClockSample {
    let (n, offset) = unwind(tau, phi_t);
    let (phi, direction) = if offset < phi_t {
        (offset, Direction::Forward)
    } else {
        (2.0 * phi_t - offset, Direction::Backward)
    };
    UnwoundClockSample {
        tau,
        phi: phi.clamp(-phi_t, phi_t),
        n,
        direction,
    }
}

/// Magnitude of the clock momentum, |p_φ| = √(E² − λ²φ²).
pub fn clock_momentum(phi: f64, energy: f64, clock: &ClockParams) -> Result<f64> {
    let e = energy.abs();
    let lp = clock.lambda * phi.abs();
    if lp > e {
        return Err(Error::domain(format!(
            "clock value {phi} lies beyond the turning point {}",
            e / clock.lambda
        )));
    }
    Ok(((e - lp) * (e + lp)).sqrt())
}

/// One traversal of the clock's phase-space ellipse p_φ² + λ²φ² = E².
///
/// The orbit starts at φ = 0 moving forward; p_φ carries the sign opposite
/// to dφ/dτ, as required for a positive system Hamiltonian. The first and
/// last points coincide.
pub fn clock_orbit(energy: f64, clock: &ClockParams, samples: usize) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(Error::domain("clock orbit needs at least two samples"));
    }
    let amp = turning_amplitude(energy, clock)?;
    let e = energy.abs();
    let step = std::f64::consts::TAU / (samples - 1) as f64;
    Ok((0..samples)
        .map(|j| {
            let angle = step * j as f64;
            (amp.phi_t * angle.sin(), -e * angle.cos())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn turning_amplitude_examples() {
        let clock = ClockParams::natural(0.1).unwrap();
        assert_abs_diff_eq!(
            turning_amplitude(0.5, &clock).unwrap().phi_t,
            5.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            turning_amplitude(-0.5, &clock).unwrap().phi_t,
            5.0,
            epsilon = 1e-12
        );
        let unit = ClockParams::natural(1.0).unwrap();
        assert_eq!(turning_amplitude(1.0, &unit).unwrap().phi_t, 1.0);
        assert!(matches!(
            turning_amplitude(0.0, &unit),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn invalid_clock_rejected() {
        assert!(ClockParams::new(0.0, 1.0).is_err());
        assert!(ClockParams::new(-1.0, 1.0).is_err());
        assert!(ClockParams::new(1.0, 0.0).is_err());
        assert!(ClockParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn cycle_index_examples() {
        assert_eq!(cycle_index(0.0, 1.0), 0);
        assert_eq!(cycle_index(3.0, 1.0), 1);
        assert_eq!(cycle_index(7.0, 1.0), 2);
        assert_eq!(cycle_index(-1.0, 1.0), 0);
        assert_eq!(cycle_index(-1.5, 1.0), -1);
        assert_eq!(cycle_index(2.999, 1.0), 0);
    }

    #[test]
    fn phi_of_tau_examples() {
        let s = phi_of_tau(0.0, 1.0);
        assert_eq!((s.phi, s.n, s.direction), (0.0, 0, Direction::Forward));
        let s = phi_of_tau(2.0 * 3.0, 3.0);
        assert_eq!((s.phi, s.n, s.direction), (0.0, 0, Direction::Backward));
        // turning points of the λ = 0.1 ground state sit at τ = 5 + 10j
        let s = phi_of_tau(5.0, 5.0);
        assert_eq!(s.phi, 5.0);
        assert_eq!(s.direction, Direction::Backward);
        let s = phi_of_tau(15.0, 5.0);
        assert_eq!((s.phi, s.n, s.direction), (-5.0, 1, Direction::Forward));
        let s = phi_of_tau(25.0, 5.0);
        assert_eq!(s.phi, 5.0);
    }

    #[test]
    fn extreme_cycle_counts_stay_in_range() {
        let phi_t = 0.5e-10;
        for tau in [1e7, 123_456_789.123, 9.99e8] {
            let s = phi_of_tau(tau, phi_t);
            assert!(s.phi.abs() <= phi_t);
            assert!(s.n > 0);
        }
    }

    #[test]
    fn orbit_satisfies_constraint() {
        let clock = ClockParams::natural(1.0).unwrap();
        let orbit = clock_orbit(1.0, &clock, 65).unwrap();
        assert_eq!(orbit.len(), 65);
        assert_abs_diff_eq!(orbit[0].0, 0.0);
        assert_abs_diff_eq!(orbit[0].1.abs(), 1.0);
        assert_abs_diff_eq!(orbit[16].0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(orbit[16].1, 0.0, epsilon = 1e-12);
        for (phi, p) in orbit {
            assert_abs_diff_eq!(-p * p - phi * phi + 1.0, 0.0, epsilon = 1e-12);
        }
        assert!(clock_orbit(1.0, &clock, 1).is_err());
    }

    #[test]
    fn momentum_three_four_five() {
        let clock = ClockParams::natural(1.0).unwrap();
        let p = clock_momentum(0.6, 1.0, &clock).unwrap();
        assert_abs_diff_eq!(p, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(-p * p - 0.36 + 1.0, 0.0, epsilon = 1e-15);
        assert_eq!(clock_momentum(1.0, 1.0, &clock).unwrap(), 0.0);
        assert!(clock_momentum(1.01, 1.0, &clock).is_err());
    }
}
