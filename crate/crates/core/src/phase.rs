//! Eigenstate phases under the oscillating clock.
//!
//! Within a half-cycle an energy eigenstate picks up the phase Θ(φ) obtained
//! by integrating `iħ dψ/dφ = ±√(E² − λ²φ²) ψ`. Half-cycles are concatenated
//! with the sign of Θ flipped on backward branches, which keeps the generator
//! of τ-evolution positive and makes every half-cycle add −πE²/(2λħ).
//!
//! Phases are kept as `−unit·turns + residual`, where `unit = πE²/(λħ)` is the
//! magnitude of the full-cycle increment and `turns` is an exact multiple of
//! 1/4. Near turning points the residual is evaluated through `acos`, so the
//! large quarter-cycle parts never have to cancel in floating point.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::clock::{phi_of_tau, turning_amplitude, ClockParams, Direction, UnwoundClockSample};
use crate::error::{Error, Result};

/// Arguments |λφ/E| within this distance of 1 are treated as the turning point.
const TURNING_CLAMP: f64 = 1e-12;

/// Which phase law drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseLaw {
    /// Concatenated half-cycle evolution against the oscillating clock.
    Oscillating,
    /// Standard evolution −Eτ/ħ (λ → 0).
    SmallLambdaReference,
    /// Rescaled evolution −(π/4)Eτ/ħ (λ → ∞).
    LargeLambdaReference,
}

impl PhaseLaw {
    pub fn phase(self, tau: f64, energy: f64, clock: &ClockParams) -> Result<f64> {
        match self {
            PhaseLaw::Oscillating => Ok(accumulated_phase(tau, energy, clock)?.total_phase()),
            PhaseLaw::SmallLambdaReference => Ok(small_lambda_phase(tau, energy, clock)),
            PhaseLaw::LargeLambdaReference => Ok(large_lambda_phase(tau, energy, clock)),
        }
    }
}

/// Accumulated phase of one eigenstate at global time τ, relative to τ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPhase {
    pub energy: f64,
    pub tau: f64,
    /// πE²/(λħ), the magnitude of one full-cycle increment.
    pub unit: f64,
    /// Whole and quarter cycles elapsed; always a multiple of 1/4.
    pub turns: f64,
    pub residual: f64,
}

impl EigenPhase {
    pub fn total_phase(&self) -> f64 {
        (-self.unit).mul_add(self.turns, self.residual)
    }

    /// `self − other` for two phases of the same eigenstate, without forming
    /// either total.
    pub fn difference(&self, other: &EigenPhase) -> f64 {
        debug_assert_eq!(self.unit, other.unit);
        (-self.unit).mul_add(self.turns - other.turns, self.residual - other.residual)
    }

    /// The phase reduced to (−π, π].
    pub fn wrapped(&self) -> f64 {
        let w = self.total_phase().rem_euclid(2.0 * PI);
        if w > PI {
            w - 2.0 * PI
        } else {
            w
        }
    }
}

/// Θ split into `−unit·turns + residual` with turns ∈ {−1/4, 0, 1/4}.
#[derive(Debug, Clone, Copy)]
struct ThetaParts {
    turns: f64,
    residual: f64,
}

fn theta_parts(phi: f64, energy: f64, clock: &ClockParams) -> Result<ThetaParts> {
    let e = energy.abs();
    if e == 0.0 {
        return Err(Error::domain("zero-energy eigenstates have no clock phase"));
    }
    let lambda = clock.lambda();
    let scale = e * e / (2.0 * lambda * clock.hbar());
    let mut u = lambda * phi / e;
    if u.abs() > 1.0 + TURNING_CLAMP {
        return Err(Error::domain(format!(
            "clock value {phi} outside the turning points ±{}; unwind first",
            e / lambda
        )));
    }
    if u.abs() >= 1.0 - TURNING_CLAMP {
        u = u.signum();
    }
    let a = u.abs();
    if a <= 0.5 {
        let root = ((1.0 - u) * (1.0 + u)).sqrt();
        return Ok(ThetaParts {
            turns: 0.0,
            residual: -scale * (u * root + u.asin()),
        });
    }
    // arcsin|u| = π/2 − arccos|u|; the π/2 part is a quarter of the unit.
    let root = ((1.0 - a) * (1.0 + a)).sqrt();
    let tail = a * root - a.acos();
    Ok(ThetaParts {
        turns: 0.25 * u.signum(),
        residual: -u.signum() * scale * tail,
    })
}

/// Θ(φ) = −(1/2ħ)(φ√(E² − λ²φ²) + (E²/λ) arcsin(λφ/E)).
pub fn theta(phi: f64, energy: f64, clock: &ClockParams) -> Result<f64> {
    let parts = theta_parts(phi, energy, clock)?;
    let unit = full_cycle_unit(energy, clock);
    Ok((-unit).mul_add(parts.turns, parts.residual))
}

fn full_cycle_unit(energy: f64, clock: &ClockParams) -> f64 {
    PI * energy * energy / (clock.lambda() * clock.hbar())
}

/// Phase added by one monotonic half-cycle, −πE²/(2λħ).
pub fn half_cycle_increment(energy: f64, clock: &ClockParams) -> f64 {
    -0.5 * full_cycle_unit(energy, clock)
}

/// Accumulated phase at an already unwound clock sample.
pub fn phase_at_sample(
    sample: &UnwoundClockSample,
    energy: f64,
    clock: &ClockParams,
) -> Result<EigenPhase> {
    let parts = theta_parts(sample.phi, energy, clock)?;
    let n = sample.n as f64;
    // forward:  −n·unit + Θ(φ)
    // backward: −(n + 1/2)·unit − Θ(φ)
    let (turns, residual) = match sample.direction {
        Direction::Forward => (n + parts.turns, parts.residual),
        Direction::Backward => (n + 0.5 - parts.turns, -parts.residual),
    };
    Ok(EigenPhase {
        energy,
        tau: sample.tau,
        unit: full_cycle_unit(energy, clock),
        turns,
        residual,
    })
}

/// Phase of eigenstate `energy` at global time τ, with phase(0) = 0.
///
/// Each eigenstate runs on its own clock cycle, φ_t = |E|/λ.
pub fn accumulated_phase(tau: f64, energy: f64, clock: &ClockParams) -> Result<EigenPhase> {
    let amp = turning_amplitude(energy, clock)?;
    let sample = phi_of_tau(tau, amp.phi_t);
    phase_at_sample(&sample, energy, clock)
}

/// Instantaneous rate d(phase)/dτ = −√(E² − λ²φ(τ)²)/ħ inside a half-cycle.
pub fn phase_rate(tau: f64, energy: f64, clock: &ClockParams) -> Result<f64> {
    let amp = turning_amplitude(energy, clock)?;
    let sample = phi_of_tau(tau, amp.phi_t);
    let p = crate::clock::clock_momentum(sample.phi, energy, clock)?;
    Ok(-p / clock.hbar())
}

/// Standard evolution −|E|τ/ħ.
pub fn small_lambda_phase(tau: f64, energy: f64, clock: &ClockParams) -> f64 {
    -energy.abs() * tau / clock.hbar()
}

/// Fast-clock evolution −(π/4)|E|τ/ħ.
pub fn large_lambda_phase(tau: f64, energy: f64, clock: &ClockParams) -> f64 {
    -FRAC_PI_4 * energy.abs() * tau / clock.hbar()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn clock(lambda: f64) -> ClockParams {
        ClockParams::natural(lambda).unwrap()
    }

    #[test]
    fn theta_examples() {
        let c = clock(1.0);
        assert_eq!(theta(0.0, 1.0, &c).unwrap(), 0.0);
        assert_abs_diff_eq!(theta(1.0, 1.0, &c).unwrap(), -PI / 4.0, epsilon = 1e-15);
        let t = theta(std::f64::consts::FRAC_1_SQRT_2, 1.0, &c).unwrap();
        assert_abs_diff_eq!(t, -0.5 * (0.5 + PI / 4.0), epsilon = 1e-14);
        assert_abs_diff_eq!(t, -0.642699081698724, epsilon = 1e-12);
    }

    #[test]
    fn theta_is_odd_and_continuous_across_split() {
        let c = clock(0.3);
        let e = 1.7;
        let phi_t = e / 0.3;
        for i in 0..=200 {
            let phi = phi_t * (i as f64 / 200.0);
            let plus = theta(phi, e, &c).unwrap();
            let minus = theta(-phi, e, &c).unwrap();
            assert_abs_diff_eq!(plus, -minus, epsilon = 1e-14);
        }
        let split = 0.5 * phi_t;
        let below = theta(split * (1.0 - 1e-14), e, &c).unwrap();
        let above = theta(split * (1.0 + 1e-14), e, &c).unwrap();
        assert_abs_diff_eq!(below, above, epsilon = 1e-12);
    }

    #[test]
    fn theta_out_of_range_is_domain_error() {
        let c = clock(1.0);
        assert!(matches!(theta(1.1, 1.0, &c), Err(Error::Domain(_))));
        assert!(matches!(theta(0.1, 0.0, &c), Err(Error::Domain(_))));
        // tiny overshoot from rounding is clamped to the turning point
        assert_abs_diff_eq!(
            theta(1.0 + 1e-14, 1.0, &c).unwrap(),
            -PI / 4.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn half_cycle_examples() {
        assert_abs_diff_eq!(
            half_cycle_increment(1.0, &clock(1.0)),
            -PI / 2.0,
            epsilon = 1e-15
        );
        let c = clock(0.1);
        let inc = half_cycle_increment(0.5, &c);
        assert_abs_diff_eq!(inc, -1.25 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(inc, -3.926990816987241, epsilon = 1e-12);
        let phi_t = 5.0;
        let via_theta = theta(phi_t, 0.5, &c).unwrap() - theta(-phi_t, 0.5, &c).unwrap();
        assert_abs_diff_eq!(inc, via_theta, epsilon = 1e-12);
        assert_abs_diff_eq!(inc, 2.0 * theta(phi_t, 0.5, &c).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn accumulated_phase_reference_points() {
        let c = clock(0.1);
        let e = 0.5;
        assert_eq!(accumulated_phase(0.0, e, &c).unwrap().total_phase(), 0.0);
        let start = accumulated_phase(-5.0, e, &c).unwrap();
        let one_cycle = accumulated_phase(15.0, e, &c).unwrap();
        let unit = PI * e * e / 0.1;
        assert_abs_diff_eq!(one_cycle.difference(&start), -unit, epsilon = 1e-12);
    }

    #[test]
    fn large_lambda_example() {
        let c = clock(1e3);
        let p = accumulated_phase(8.0, 0.5, &c).unwrap();
        assert_relative_eq!(p.total_phase(), -PI, max_relative = 1e-12);
        assert_relative_eq!(large_lambda_phase(8.0, 0.5, &c), -PI, max_relative = 1e-15);
    }

    #[test]
    fn reference_laws() {
        let c = clock(1.0);
        assert_abs_diff_eq!(
            small_lambda_phase(2.0 * PI / 0.5, 0.5, &c),
            -2.0 * PI,
            epsilon = 1e-14
        );
        assert_eq!(small_lambda_phase(0.0, 0.5, &c), 0.0);
        assert_abs_diff_eq!(
            small_lambda_phase(4.0 * PI, 0.5, &c),
            -2.0 * PI,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            large_lambda_phase(8.0 / 1.5, 1.5, &c),
            -2.0 * PI,
            epsilon = 1e-14
        );
        for tau in [0.3, 2.0, 17.0] {
            let ratio = large_lambda_phase(tau, 1.2, &c) / small_lambda_phase(tau, 1.2, &c);
            assert_relative_eq!(ratio, FRAC_PI_4, max_relative = 1e-15);
        }
    }

    #[test]
    fn negative_energy_uses_magnitude() {
        let c = clock(0.2);
        let a = accumulated_phase(3.7, -0.5, &c).unwrap().total_phase();
        let b = accumulated_phase(3.7, 0.5, &c).unwrap().total_phase();
        assert_eq!(a, b);
        assert!(matches!(
            accumulated_phase(1.0, 0.0, &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn wrapped_agrees_with_total_modulo_two_pi() {
        let c = clock(0.7);
        for tau in [0.0, 1.3, 55.5, 1234.5] {
            let p = accumulated_phase(tau, 2.5, &c).unwrap();
            let d = (p.total_phase() - p.wrapped()) / (2.0 * PI);
            assert_abs_diff_eq!(d, d.round(), epsilon = 1e-9);
            assert!(p.wrapped().abs() <= PI);
        }
    }
}
