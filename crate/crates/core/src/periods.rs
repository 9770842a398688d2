//! System-period statistics from zero crossings of an expectation value, and
//! the dephasing bound on the period of a fundamental clock.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::clock::ClockParams;
use crate::error::{Error, Result};
use crate::evolution::{time_scales, EvolutionRequest};
use crate::systems::ObservableMatrix;

/// Bisection stops once a bracket is narrower than this fraction of the
/// mean sample spacing.
pub const CROSSING_REFINEMENT: f64 = 1e-10;

/// √(21π² − 1024/5), the constant of the quarter-cycle phase variance.
pub fn variance_constant() -> f64 {
    (21.0 * PI * PI - 1024.0 / 5.0).sqrt()
}

/// Coefficient 48/(π√(21π² − 1024/5)) relating clock and system periods.
pub fn bound_coefficient() -> f64 {
    48.0 / (PI * variance_constant())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

fn sign(v: f64) -> Sign {
    if v > 0.0 {
        Sign::Pos
    } else if v < 0.0 {
        Sign::Neg
    } else {
        Sign::Zero
    }
}

/// Crossing candidates: either an exact zero sample or a bracketing pair.
enum Candidate {
    Exact(f64),
    Bracket(usize),
}

fn candidates(series: &[(f64, f64)]) -> Vec<Candidate> {
    let mut out = Vec::new();
    let n = series.len();
    for i in 0..n {
        let s = sign(series[i].1);
        if s == Sign::Zero {
            // a zero sample counts when the signal changes sign across it, or
            // when it sits at the end of the series next to a nonzero value
            let before = series[..i]
                .iter()
                .rev()
                .map(|p| sign(p.1))
                .find(|s| *s != Sign::Zero);
            let after = series[i + 1..]
                .iter()
                .map(|p| sign(p.1))
                .find(|s| *s != Sign::Zero);
            let previous_is_zero = i > 0 && sign(series[i - 1].1) == Sign::Zero;
            let counts = match (before, after) {
                (Some(b), Some(a)) => b != a && !previous_is_zero,
                (None, Some(_)) => i == 0,
                (Some(_), None) => i == n - 1,
                (None, None) => false,
            };
            if counts {
                out.push(Candidate::Exact(series[i].0));
            }
        } else if i + 1 < n {
            let t = sign(series[i + 1].1);
            if t != Sign::Zero && t != s {
                out.push(Candidate::Bracket(i));
            }
        }
    }
    out
}

fn interpolate(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 - a.1 * (b.0 - a.0) / (b.1 - a.1)
}

/// Crossing times by linear interpolation between bracketing samples.
///
/// Samples that are exactly zero are reported as crossings when the signal
/// changes sign across them. A series without sign changes gives an empty
/// list.
pub fn find_zero_crossings(series: &[(f64, f64)]) -> Vec<f64> {
    candidates(series)
        .into_iter()
        .map(|c| match c {
            Candidate::Exact(t) => t,
            Candidate::Bracket(i) => interpolate(series[i], series[i + 1]),
        })
        .collect()
}

/// Like [`find_zero_crossings`], refining every bracket by bisection on a
/// re-evaluation of the underlying signal.
pub fn find_zero_crossings_refined<F>(series: &[(f64, f64)], mut signal: F) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if series.len() < 2 {
        return Ok(Vec::new());
    }
    let spacing = (series[series.len() - 1].0 - series[0].0) / (series.len() - 1) as f64;
    let tolerance = CROSSING_REFINEMENT * spacing.abs();
    candidates(series)
        .into_iter()
        .map(|c| match c {
            Candidate::Exact(t) => Ok(t),
            Candidate::Bracket(i) => bisect(series[i], series[i + 1], tolerance, &mut signal),
        })
        .collect()
}

fn bisect<F>(mut lo: (f64, f64), mut hi: (f64, f64), tolerance: f64, signal: &mut F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..200 {
        if (hi.0 - lo.0).abs() <= tolerance {
            break;
        }
        let mid = 0.5 * (lo.0 + hi.0);
        if mid <= lo.0 || mid >= hi.0 {
            break;
        }
        let v = signal(mid)?;
        match sign(v) {
            Sign::Zero => return Ok(mid),
            s if s == sign(lo.1) => lo = (mid, v),
            _ => hi = (mid, v),
        }
    }
    Ok(interpolate(lo, hi))
}

/// Periods measured as twice the spacing of successive crossings.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodEnsemble {
    pub periods: Vec<f64>,
    pub mean_period: f64,
    /// Sample standard deviation (divisor n − 1).
    pub std_dev: f64,
    pub relative_std_dev: f64,
}

impl PeriodEnsemble {
    /// Frequency 2π/⟨T⟩.
    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI / self.mean_period
    }

    /// Total τ covered, in units of the mean period.
    pub fn covered_periods(&self) -> f64 {
        self.periods.iter().sum::<f64>() / (2.0 * self.mean_period)
    }
}

pub fn period_ensemble(crossings: &[f64]) -> Result<PeriodEnsemble> {
    if crossings.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: crossings.len(),
        });
    }
    let periods: Vec<f64> = crossings.windows(2).map(|w| 2.0 * (w[1] - w[0])).collect();
    if let Some(p) = periods.iter().find(|p| **p <= 0.0) {
        return Err(Error::domain(format!(
            "crossings must be strictly increasing (found period {p})"
        )));
    }
    let n = periods.len() as f64;
    let mean = periods.iter().sum::<f64>() / n;
    let var = periods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std_dev = var.sqrt();
    Ok(PeriodEnsemble {
        mean_period: mean,
        std_dev,
        relative_std_dev: std_dev / mean,
        periods,
    })
}

/// Quarter-cycle relative phase deviation
/// σ = E²√(21π² − 1024/5)/(24λħ) with E² := `energy_sq`.
///
/// For superpositions pass ⟨Ĥ²⟩. `rescale` applies the 2/π average of a
/// sine over a quarter cycle.
pub fn analytic_sigma(energy_sq: f64, clock: &ClockParams, rescale: bool) -> f64 {
    let sigma = energy_sq * variance_constant() / (24.0 * clock.lambda() * clock.hbar());
    if rescale {
        sigma * 2.0 / PI
    } else {
        sigma
    }
}

/// Upper bound T_C = 48σT_S/(π√(21π² − 1024/5)) on the clock period.
pub fn clock_period_bound(sigma: f64, system_period: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!(
            "sigma must be non-negative, got {sigma}"
        )));
    }
    if !(system_period > 0.0) || !system_period.is_finite() {
        return Err(Error::domain(format!(
            "system period must be positive, got {system_period}"
        )));
    }
    Ok(bound_coefficient() * sigma * system_period)
}

/// Least-squares slope and intercept of log y against log x.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: xs.len().min(ys.len()),
        });
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::domain("log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain(
            "log-log fit needs at least two distinct x values",
        ));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Scans `signal` from `start` in steps of `step` until `target` crossings
/// are found or `max_tau` is passed. Crossings are bisection-refined.
pub fn scan_crossings<F>(
    mut signal: F,
    start: f64,
    step: f64,
    target: usize,
    max_tau: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(step > 0.0) {
        return Err(Error::domain("scan step must be positive"));
    }
    let tolerance = CROSSING_REFINEMENT * step;
    let mut crossings = Vec::with_capacity(target);
    let mut prev = (start, signal(start)?);
    if prev.1 == 0.0 {
        crossings.push(start);
    }
    let mut i = 1u64;
    while crossings.len() < target {
        let tau = start + step * i as f64;
        if tau > max_tau {
            break;
        }
        let cur = (tau, signal(tau)?);
        match (sign(prev.1), sign(cur.1)) {
            (_, Sign::Zero) => crossings.push(tau),
            (Sign::Zero, _) => {}
            (a, b) if a != b => crossings.push(bisect(prev, cur, tolerance, &mut signal)?),
            _ => {}
        }
        prev = cur;
        i += 1;
    }
    Ok(crossings)
}

/// Settings for a σ(λ) sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// System periods each run must cover.
    pub periods: usize,
    /// Scan samples per shortest system period of the state.
    pub samples_per_period: usize,
    /// τ beyond which a run gives up.
    pub max_tau: f64,
    pub rescale: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            periods: 100,
            samples_per_period: 64,
            max_tau: 2.0e4,
            rescale: true,
        }
    }
}

/// One λ of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRun {
    pub lambda: f64,
    pub ensemble: Option<PeriodEnsemble>,
    pub sigma_analytic: f64,
    /// Why the run was excluded from the comparison, if it was.
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaComparison {
    pub lambda_values: Vec<f64>,
    pub numeric_sigma: Vec<f64>,
    pub analytic_sigma: Vec<f64>,
    /// Factor applied to the analytic values (2/π or 1).
    pub rescale: f64,
    pub numeric_slope: f64,
    pub analytic_slope: f64,
    pub runs: Vec<SweepRun>,
}

/// Numeric period dispersion of ⟨x⟩ against the analytic estimate with
/// E² → ⟨Ĥ²⟩, for each λ in `lambda_grid`.
pub fn sigma_vs_lambda(
    template: &EvolutionRequest,
    observable: &ObservableMatrix,
    lambda_grid: &[f64],
    options: SweepOptions,
) -> Result<SigmaComparison> {
    if lambda_grid.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: lambda_grid.len(),
        });
    }
    let energy_sq = template
        .initial_state
        .mean_energy_squared(&template.spectrum);
    let runs: Vec<SweepRun> = lambda_grid
        .par_iter()
        .map(|&lambda| -> Result<SweepRun> {
            let clock = ClockParams::new(lambda, template.clock.hbar())?;
            let request = template.with_clock(clock);
            let scales = time_scales(&request.spectrum, &request.initial_state, &clock);
            let step = scales.system_period / options.samples_per_period as f64;
            let target = 2 * options.periods + 1;
            let crossings = scan_crossings(
                |tau| request.expectation(tau, observable),
                0.0,
                step,
                target,
                options.max_tau,
            )?;
            let sigma_analytic = analytic_sigma(energy_sq, &clock, options.rescale);
            if crossings.len() < target {
                log::warn!(
                    "lambda = {lambda}: only {} of {target} crossings before tau = {}; run excluded",
                    crossings.len(),
                    options.max_tau
                );
                let ensemble = period_ensemble(&crossings).ok();
                return Ok(SweepRun {
                    lambda,
                    ensemble,
                    sigma_analytic,
                    flag: Some(format!("unresolved: {} crossings", crossings.len())),
                });
            }
            let ensemble = period_ensemble(&crossings)?;
            let flag = (ensemble.relative_std_dev <= 0.0).then(|| "zero dispersion".to_string());
            Ok(SweepRun {
                lambda,
                ensemble: Some(ensemble),
                sigma_analytic,
                flag,
            })
        })
        .collect::<Result<_>>()?;

    let kept: Vec<&SweepRun> = runs.iter().filter(|r| r.flag.is_none()).collect();
    let lambda_values: Vec<f64> = kept.iter().map(|r| r.lambda).collect();
    let numeric_sigma: Vec<f64> = kept
        .iter()
        .filter_map(|r| r.ensemble.as_ref().map(|e| e.relative_std_dev))
        .collect();
    let analytic: Vec<f64> = kept.iter().map(|r| r.sigma_analytic).collect();
    let (numeric_slope, _) = loglog_fit(&lambda_values, &numeric_sigma)?;
    let (analytic_slope, _) = loglog_fit(&lambda_values, &analytic)?;
    Ok(SigmaComparison {
        lambda_values,
        numeric_sigma,
        analytic_sigma: analytic,
        rescale: if options.rescale { 2.0 / PI } else { 1.0 },
        numeric_slope,
        analytic_slope,
        runs,
    })
}

/// Log-uniform grid of `points` values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || points < 2 {
        return Err(Error::domain(format!(
            "log grid needs 0 < lo < hi and >= 2 points (got {lo}, {hi}, {points})"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sine_series() -> Vec<(f64, f64)> {
        (0..=1000)
            .map(|i| i as f64 * 0.01)
            .map(|t| (t, t.sin()))
            .collect()
    }

    #[test]
    fn sine_crossings_refined() {
        let c = find_zero_crossings_refined(&sine_series(), |t| Ok(t.sin())).unwrap();
        assert_eq!(c.len(), 4);
        for (k, t) in c.iter().enumerate() {
            assert_abs_diff_eq!(*t, k as f64 * PI, epsilon = 1e-9);
        }
    }

    #[test]
    fn sine_crossings_linear() {
        let c = find_zero_crossings(&sine_series());
        assert_eq!(c.len(), 4);
        for (k, t) in c.iter().enumerate() {
            assert_abs_diff_eq!(*t, k as f64 * PI, epsilon = 1e-6);
        }
    }

    #[test]
    fn constant_series_has_no_crossings() {
        let s: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 2.0)).collect();
        assert!(find_zero_crossings(&s).is_empty());
        let z: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.0)).collect();
        assert!(find_zero_crossings(&z).is_empty());
    }

    #[test]
    fn touching_zero_is_not_a_crossing() {
        let s = vec![(0.0, 1.0), (1.0, 0.0), (2.0, 1.0)];
        assert!(find_zero_crossings(&s).is_empty());
        let s = vec![(0.0, 1.0), (1.0, 0.0), (2.0, 0.0), (3.0, -1.0)];
        assert_eq!(find_zero_crossings(&s), vec![1.0]);
    }

    #[test]
    fn ensemble_examples() {
        let e = period_ensemble(&[0.0, PI, 2.0 * PI, 3.0 * PI]).unwrap();
        assert_eq!(e.periods.len(), 3);
        assert_abs_diff_eq!(e.mean_period, 2.0 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(e.relative_std_dev, 0.0, epsilon = 1e-15);

        let e = period_ensemble(&[0.0, 1.0, 2.2, 3.2]).unwrap();
        assert_abs_diff_eq!(e.periods[1], 2.4, epsilon = 1e-14);
        assert_abs_diff_eq!(e.mean_period, 6.4 / 3.0, epsilon = 1e-14);
        // sample std of {2, 2.4, 2}: √(0.32/3/2)
        assert_abs_diff_eq!(e.std_dev, (0.32f64 / 6.0).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(e.relative_std_dev, 0.10825317547305, epsilon = 1e-12);

        assert!(matches!(
            period_ensemble(&[0.0, 1.0]),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn analytic_sigma_scaling() {
        let c1 = ClockParams::natural(1.0).unwrap();
        let c2 = ClockParams::natural(2.0).unwrap();
        let s1 = analytic_sigma(1.0, &c1, false);
        assert_relative_eq!(s1 * s1, 4.273771567493916e-3, max_relative = 1e-12);
        assert_relative_eq!(
            analytic_sigma(1.0, &c2, false) / s1,
            0.5,
            max_relative = 1e-15
        );
        // E² → 4E² quadruples σ
        assert_relative_eq!(
            analytic_sigma(4.0, &c1, false) / s1,
            4.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            analytic_sigma(1.0, &c1, true) / s1,
            2.0 / PI,
            max_relative = 1e-15
        );
    }

    #[test]
    fn bound_examples() {
        let t = clock_period_bound(1e-19, 2e-15).unwrap();
        assert!((1.8e-33..=2.2e-33).contains(&t), "{t:e}");
        assert_eq!(clock_period_bound(0.0, 5.0).unwrap(), 0.0);
        let c = clock_period_bound(1.0, 1.0).unwrap();
        assert!((9.7..=9.8).contains(&c));
        assert_relative_eq!(c, 9.738105387252, max_relative = 1e-12);
        assert!(clock_period_bound(-1.0, 1.0).is_err());
        assert!(clock_period_bound(1.0, 0.0).is_err());
    }

    #[test]
    fn loglog_fit_recovers_power_law() {
        let xs = [1.0, 10.0, 100.0, 1000.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 / x).collect();
        let (slope, icpt) = loglog_fit(&xs, &ys).unwrap();
        assert_abs_diff_eq!(slope, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(icpt, 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn scan_finds_sine_crossings() {
        let c = scan_crossings(|t| Ok((t - 0.3).sin()), 0.0, 0.05, 5, 100.0).unwrap();
        assert_eq!(c.len(), 5);
        for (k, t) in c.iter().enumerate() {
            assert_abs_diff_eq!(*t, 0.3 + k as f64 * PI, epsilon = 1e-10);
        }
        let short = scan_crossings(|t| Ok((t - 0.3).sin()), 0.0, 0.05, 5, 4.0).unwrap();
        assert_eq!(short.len(), 2);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1.0, 1e3, 7).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[6], 1e3);
        assert_relative_eq!(g[1], 10f64.sqrt(), max_relative = 1e-14);
    }
}
