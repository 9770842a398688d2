//! Closed-form evolution of superpositions and the moments derived from it.
//!
//! Every eigenstate carries its own clock: at a common global time τ the
//! components sit at different clock values and in different cycles. The
//! state at τ is obtained directly from the accumulated phases; there is no
//! time stepping.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clock::ClockParams;
use crate::error::{Error, Result};
use crate::phase::PhaseLaw;
use crate::systems::{
    hermite_functions, HarmonicObservables, ObservableMatrix, Spectrum, StateVector, SystemKind,
};

/// Imaginary parts of expectation values above this are reported as errors.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;
/// Populations below this are ignored when choosing sampling resolution.
pub const POPULATED_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EvolutionRequest {
    pub spectrum: Spectrum,
    pub initial_state: StateVector,
    pub clock: ClockParams,
    pub tau_grid: Vec<f64>,
    pub mode: PhaseLaw,
}

impl EvolutionRequest {
    pub fn new(
        spectrum: Spectrum,
        initial_state: StateVector,
        clock: ClockParams,
        tau_grid: Vec<f64>,
        mode: PhaseLaw,
    ) -> Result<Self> {
        if spectrum.len() != initial_state.len() {
            return Err(Error::domain(format!(
                "state has {} amplitudes for {} levels",
                initial_state.len(),
                spectrum.len()
            )));
        }
        check_grid(&tau_grid)?;
        Ok(Self {
            spectrum,
            initial_state,
            clock,
            tau_grid,
            mode,
        })
    }

    /// Same system and clock on a different τ-grid.
    pub fn with_tau_grid(&self, tau_grid: Vec<f64>) -> Result<Self> {
        check_grid(&tau_grid)?;
        Ok(Self {
            tau_grid,
            ..self.clone()
        })
    }

    /// Same system on a different clock.
    pub fn with_clock(&self, clock: ClockParams) -> Self {
        Self {
            clock,
            ..self.clone()
        }
    }

    /// Expectation value ⟨O⟩ at a single τ.
    pub fn expectation(&self, tau: f64, observable: &ObservableMatrix) -> Result<f64> {
        self.check_dim(observable)?;
        let c = self.evolved_coefficients(tau)?;
        real_part(observable, &c)
    }

    fn evolved_coefficients(&self, tau: f64) -> Result<Vec<Complex64>> {
        self.initial_state
            .coefficients()
            .iter()
            .zip(self.spectrum.energies())
            .map(|(c0, &e)| {
                if c0.norm_sqr() == 0.0 {
                    return Ok(*c0);
                }
                let phase = self.mode.phase(tau, e, &self.clock)?;
                Ok(c0 * Complex64::from_polar(1.0, phase))
            })
            .collect()
    }

    fn check_dim(&self, observable: &ObservableMatrix) -> Result<()> {
        if observable.dim() != self.spectrum.len() {
            return Err(Error::domain(format!(
                "observable `{}` has dimension {} but the spectrum has {} levels",
                observable.name(),
                observable.dim(),
                self.spectrum.len()
            )));
        }
        Ok(())
    }
}

fn check_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("tau grid contains non-finite values"));
    }
    if tau_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("tau grid must be strictly increasing"));
    }
    Ok(())
}

fn real_part(observable: &ObservableMatrix, c: &[Complex64]) -> Result<f64> {
    let v = observable.expectation_raw(c);
    if v.im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::Consistency(format!(
            "expectation of `{}` has imaginary part {:e}",
            observable.name(),
            v.im
        )));
    }
    Ok(v.re)
}

/// c_k(τ) = c_k(0)·exp(i·phase_k(τ)).
pub fn evolve_state(request: &EvolutionRequest, tau: f64) -> Result<StateVector> {
    Ok(StateVector::from_evolved(
        request.evolved_coefficients(tau)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub tau: f64,
    pub value: f64,
    pub variance: f64,
}

/// ⟨O⟩(τ) and ⟨O²⟩ − ⟨O⟩² over the request's τ-grid.
pub fn observable_series(
    request: &EvolutionRequest,
    observable: &ObservableMatrix,
    squared: &ObservableMatrix,
) -> Result<Vec<SeriesPoint>> {
    request.check_dim(observable)?;
    request.check_dim(squared)?;
    request
        .tau_grid
        .par_iter()
        .map(|&tau| {
            let c = request.evolved_coefficients(tau)?;
            let value = real_part(observable, &c)?;
            let second = real_part(squared, &c)?;
            Ok(SeriesPoint {
                tau,
                value,
                variance: second - value * value,
            })
        })
        .collect()
}

/// ψ(x, τ) = Σ_k c_k(τ) u_k(x) for harmonic systems.
pub fn wavefunction_on_grid(
    request: &EvolutionRequest,
    tau: f64,
    x_grid: &[f64],
) -> Result<Vec<Complex64>> {
    let SystemKind::Harmonic(params) = request.spectrum.kind() else {
        return Err(Error::Unsupported(
            "grid wavefunctions need Hermite eigenfunctions (harmonic systems only)".into(),
        ));
    };
    let c = request.evolved_coefficients(tau)?;
    Ok(x_grid
        .iter()
        .map(|&x| {
            hermite_functions(x, c.len(), &params)
                .iter()
                .zip(&c)
                .map(|(u, ck)| ck * *u)
                .sum()
        })
        .collect())
}

/// Means and second moments of x and p at one τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub covar_xp: f64,
    pub norm: f64,
}

impl TrajectoryPoint {
    /// Width of the uncertainty bar drawn under phase-space plots: √var_x.
    pub fn uncertainty(&self) -> f64 {
        self.var_x.max(0.0).sqrt()
    }

    /// var_x·var_p − covar_xp², bounded below by (ħ/2)².
    pub fn uncertainty_product(&self) -> f64 {
        self.var_x * self.var_p - self.covar_xp * self.covar_xp
    }
}

pub fn phase_space_trajectory(
    request: &EvolutionRequest,
    observables: &HarmonicObservables,
) -> Result<Vec<TrajectoryPoint>> {
    for o in [
        &observables.x,
        &observables.p,
        &observables.x2,
        &observables.p2,
        &observables.xp_sym,
    ] {
        request.check_dim(o)?;
    }
    request
        .tau_grid
        .par_iter()
        .map(|&tau| {
            let c = request.evolved_coefficients(tau)?;
            let mean_x = real_part(&observables.x, &c)?;
            let mean_p = real_part(&observables.p, &c)?;
            let x2 = real_part(&observables.x2, &c)?;
            let p2 = real_part(&observables.p2, &c)?;
            let xp = real_part(&observables.xp_sym, &c)?;
            Ok(TrajectoryPoint {
                tau,
                mean_x,
                mean_p,
                var_x: x2 - mean_x * mean_x,
                var_p: p2 - mean_p * mean_p,
                covar_xp: xp - mean_x * mean_p,
                norm: c.iter().map(|z| z.norm_sqr()).sum(),
            })
        })
        .collect()
}

/// Characteristic time scales of a state used to pick a τ resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    /// Shortest clock cycle 4|E_k|/λ among populated levels.
    pub shortest_clock_cycle: f64,
    /// Shortest system period 2πħ/ΔE among populated levels.
    pub system_period: f64,
}

pub fn time_scales(spectrum: &Spectrum, state: &StateVector, clock: &ClockParams) -> TimeScales {
    let populated: Vec<f64> = spectrum
        .energies()
        .iter()
        .zip(state.populations())
        .filter(|(_, w)| *w > POPULATED_THRESHOLD)
        .map(|(e, _)| *e)
        .collect();
    let min_abs = populated
        .iter()
        .map(|e| e.abs())
        .fold(f64::INFINITY, f64::min);
    let (lo, hi) = populated
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
            (lo.min(*e), hi.max(*e))
        });
    let spread = if populated.len() > 1 {
        hi - lo
    } else {
        min_abs
    };
    TimeScales {
        shortest_clock_cycle: 4.0 * min_abs / clock.lambda(),
        system_period: TAU * clock.hbar() / spread,
    }
}

/// How τ samples are placed between `tau_min` and `tau_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingPolicy {
    /// Exactly this many evenly spaced samples (including both ends).
    Fixed { samples: usize },
    /// Resolve every clock cycle with `per_clock_cycle` samples when that
    /// fits in `max_samples`; otherwise `per_system_period` samples per
    /// system period.
    Auto {
        per_clock_cycle: usize,
        per_system_period: usize,
        max_samples: usize,
    },
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy::Auto {
            per_clock_cycle: 40,
            per_system_period: 256,
            max_samples: 200_000,
        }
    }
}

pub fn tau_grid(
    tau_min: f64,
    tau_max: f64,
    policy: SamplingPolicy,
    scales: TimeScales,
) -> Result<Vec<f64>> {
    if !(tau_max > tau_min) {
        return Err(Error::domain(format!(
            "tau range [{tau_min}, {tau_max}] is empty"
        )));
    }
    let span = tau_max - tau_min;
    let samples = match policy {
        SamplingPolicy::Fixed { samples } => samples,
        SamplingPolicy::Auto {
            per_clock_cycle,
            per_system_period,
            max_samples,
        } => {
            let by_system = (span / scales.system_period * per_system_period as f64).ceil();
            let by_clock = (span / scales.shortest_clock_cycle * per_clock_cycle as f64).ceil();
            let wanted = if by_clock <= max_samples as f64 {
                by_clock.max(by_system)
            } else {
                by_system
            };
            (wanted as usize).clamp(2, max_samples.max(2)) + 1
        }
    };
    if samples < 2 {
        return Err(Error::domain("a tau grid needs at least two samples"));
    }
    let step = span / (samples - 1) as f64;
    Ok((0..samples).map(|i| tau_min + step * i as f64).collect())
}
