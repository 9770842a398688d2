//! Scenario runs that turn a [`ScenarioConfig`] into CSV files.
//!
//! Every file starts with a comment line carrying the tool version and the
//! SHA-256 of the resolved configuration, followed by a header row. Numbers
//! are written in scientific notation with 16 significant digits, so equal
//! configurations give byte-identical files.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::clock::ClockParams;
use crate::config::{ScenarioConfig, SystemChoice};
use crate::error::{Error, Result};
use crate::evolution::{
    evolve_state, observable_series, phase_space_trajectory, tau_grid, time_scales,
    wavefunction_on_grid, EvolutionRequest,
};
use crate::periods::{
    bound_coefficient, clock_period_bound, log_grid, sigma_vs_lambda, SweepOptions,
};
use crate::phase::{large_lambda_phase, small_lambda_phase, PhaseLaw};
use crate::systems::{
    coherent_state, custom_superposition, harmonic_observables, harmonic_spectrum, hydrogen_system,
    CoherentStateSpec, HarmonicParams, Spectrum, StateVector,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Slack on the uncertainty floor ħ²/4 before a run is rejected.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;
/// Allowed deviation of the norm from 1.
pub const NORM_SLACK: f64 = 1e-12;

/// Files written by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Minimal CSV table with fixed float formatting.
struct Table {
    body: String,
}

impl Table {
    fn new(config: &ScenarioConfig, header: &[&str]) -> Self {
        let mut body = String::new();
        writeln!(
            body,
            "# oscillock {TOOL_VERSION} config-sha256 {}",
            config.hash()
        )
        .unwrap();
        writeln!(body, "{}", header.join(",")).unwrap();
        Self { body }
    }

    fn comment(&mut self, text: &str) {
        writeln!(self.body, "# {text}").unwrap();
    }

    fn row(&mut self, cells: &[Cell]) {
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        writeln!(self.body, "{}", line.join(",")).unwrap();
    }

    fn write(self, dir: &Path, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, self.body)?;
        Ok(path)
    }
}

enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(v) => format_float(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

/// `{:.15e}`, with a signed exponent of at least two digits.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // adding 0.0 turns −0.0 into +0.0
    let v = v + 0.0;
    let s = format!("{v:.15e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// The system and initial state described by `config.system`.
pub fn build_system(config: &ScenarioConfig) -> Result<(Spectrum, StateVector)> {
    let s = &config.system;
    let amplitudes = || -> Vec<Complex64> {
        s.amplitudes_re
            .iter()
            .enumerate()
            .map(|(i, re)| Complex64::new(*re, s.amplitudes_im.get(i).copied().unwrap_or(0.0)))
            .collect()
    };
    let field_err = |field: &str, e: Error| Error::config(field, e.to_string());
    match s.kind {
        SystemChoice::Harmonic => {
            let params = harmonic_params(config);
            let spectrum = harmonic_spectrum(s.cutoff, params)?;
            let state = coherent_state(CoherentStateSpec {
                alpha: Complex64::new(s.alpha_re, s.alpha_im),
                cutoff: s.cutoff,
            })
            .map_err(|e| field_err("system.cutoff", e))?;
            Ok((spectrum, state))
        }
        SystemChoice::Hydrogen => {
            let sys = hydrogen_system(s.n_max)?;
            let amps = if s.amplitudes_re.is_empty() {
                vec![Complex64::new(1.0, 0.0); s.n_max]
            } else {
                amplitudes()
            };
            let state =
                StateVector::normalized(amps).map_err(|e| field_err("system.amplitudes_re", e))?;
            Ok((sys.spectrum, state))
        }
        SystemChoice::Custom => custom_superposition(&s.energies, &amplitudes())
            .map_err(|e| field_err("system.energies", e)),
    }
}

fn harmonic_params(config: &ScenarioConfig) -> HarmonicParams {
    HarmonicParams {
        omega: config.system.omega,
        mass: config.system.mass,
        hbar: config.clock.hbar,
    }
}

fn clock(config: &ScenarioConfig) -> Result<ClockParams> {
    ClockParams::new(config.clock.lambda, config.clock.hbar)
}

fn request(config: &ScenarioConfig) -> Result<EvolutionRequest> {
    let (spectrum, state) = build_system(config)?;
    let clock = clock(config)?;
    let scales = time_scales(&spectrum, &state, &clock);
    let e = &config.evolution;
    let grid = tau_grid(e.tau_min, e.tau_max, e.sampling(), scales)?;
    EvolutionRequest::new(spectrum, state, clock, grid, e.mode)
}

/// Moments of the system observables along the τ-grid, plus the levels and
/// initial amplitudes (`spectrum.csv`).
///
/// Harmonic: ⟨x⟩, ⟨p⟩, variances, covariance and √var_x (`trajectory.csv`).
/// Hydrogen: ⟨r⟩ and its variance (`radius.csv`). Custom: survival
/// probability |⟨ψ(0)|ψ(τ)⟩|² (`survival.csv`).
pub fn run_evolve(config: &ScenarioConfig) -> Result<RunReport> {
    let req = request(config)?;
    let spectrum_file = write_spectrum(config, &req.spectrum, &req.initial_state)?;
    let mut report = evolve_series(config, &req)?;
    report.files.insert(0, spectrum_file);
    Ok(report)
}

/// Levels and initial amplitudes (`spectrum.csv`).
fn write_spectrum(
    config: &ScenarioConfig,
    spectrum: &Spectrum,
    state: &StateVector,
) -> Result<PathBuf> {
    let mut table = Table::new(
        config,
        &[
            "level",
            "label",
            "energy",
            "amplitude_re",
            "amplitude_im",
            "population",
        ],
    );
    for (k, ((label, e), c)) in spectrum
        .labels()
        .iter()
        .zip(spectrum.energies())
        .zip(state.coefficients())
        .enumerate()
    {
        table.row(&[
            Cell::I(k as i64),
            Cell::S(label.clone()),
            Cell::F(*e),
            Cell::F(c.re),
            Cell::F(c.im),
            Cell::F(c.norm_sqr()),
        ]);
    }
    table.write(&config.output.dir, "spectrum.csv")
}

fn evolve_series(config: &ScenarioConfig, req: &EvolutionRequest) -> Result<RunReport> {
    let dir = &config.output.dir;
    match config.system.kind {
        SystemChoice::Harmonic => {
            let obs = harmonic_observables(config.system.cutoff, harmonic_params(config))?;
            let traj = phase_space_trajectory(req, &obs)?;
            let floor = 0.25 * config.clock.hbar.powi(2);
            let mut min_product = f64::INFINITY;
            let mut table = Table::new(
                config,
                &[
                    "tau", "mean_x", "mean_p", "var_x", "var_p", "covar_xp", "norm", "std_x",
                ],
            );
            for p in &traj {
                if (p.norm - 1.0).abs() > NORM_SLACK {
                    return Err(Error::Consistency(format!(
                        "norm {} at tau = {}",
                        p.norm, p.tau
                    )));
                }
                let product = p.uncertainty_product();
                if product < floor - UNCERTAINTY_SLACK {
                    return Err(Error::Consistency(format!(
                        "uncertainty product {product} below hbar^2/4 at tau = {}",
                        p.tau
                    )));
                }
                min_product = min_product.min(product);
                table.row(&[
                    Cell::F(p.tau),
                    Cell::F(p.mean_x),
                    Cell::F(p.mean_p),
                    Cell::F(p.var_x),
                    Cell::F(p.var_p),
                    Cell::F(p.covar_xp),
                    Cell::F(p.norm),
                    Cell::F(p.uncertainty()),
                ]);
            }
            let path = table.write(dir, "trajectory.csv")?;
            let max_var = traj
                .iter()
                .map(|p| p.var_x)
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(RunReport {
                files: vec![path],
                summary: format!(
                    "{} samples, max var_x {max_var:.6e}, min uncertainty product {min_product:.6e}",
                    traj.len()
                ),
            })
        }
        SystemChoice::Hydrogen => {
            let sys = hydrogen_system(config.system.n_max)?;
            let series = observable_series(req, &sys.radius, &sys.radius_sq)?;
            let mut table = Table::new(config, &["tau", "mean_r", "var_r", "norm"]);
            for p in &series {
                let norm = evolve_state(req, p.tau)?.norm_sqr();
                table.row(&[
                    Cell::F(p.tau),
                    Cell::F(p.value),
                    Cell::F(p.variance),
                    Cell::F(norm),
                ]);
            }
            let path = table.write(dir, "radius.csv")?;
            Ok(RunReport {
                files: vec![path],
                summary: format!("{} samples of <r>", series.len()),
            })
        }
        SystemChoice::Custom => {
            let initial = req.initial_state.coefficients().to_vec();
            let mut table = Table::new(config, &["tau", "survival_probability", "norm"]);
            for &tau in &req.tau_grid {
                let st = evolve_state(req, tau)?;
                let overlap: Complex64 = initial
                    .iter()
                    .zip(st.coefficients())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                table.row(&[
                    Cell::F(tau),
                    Cell::F(overlap.norm_sqr()),
                    Cell::F(st.norm_sqr()),
                ]);
            }
            let path = table.write(dir, "survival.csv")?;
            Ok(RunReport {
                files: vec![path],
                summary: format!("{} samples of survival probability", req.tau_grid.len()),
            })
        }
    }
}

/// Accumulated phases of selected levels with both reference laws.
pub fn run_phases(config: &ScenarioConfig) -> Result<RunReport> {
    let (spectrum, _) = build_system(config)?;
    let clock = clock(config)?;
    for &k in &config.phases.levels {
        if k >= spectrum.len() {
            return Err(Error::config(
                "phases.levels",
                format!(
                    "level {k} outside the spectrum of {} levels",
                    spectrum.len()
                ),
            ));
        }
    }
    let e = &config.evolution;
    let n = config.phases.samples;
    let mut table = Table::new(
        config,
        &[
            "tau",
            "level",
            "energy",
            "phase",
            "phase_small_lambda",
            "phase_large_lambda",
        ],
    );
    for i in 0..n {
        let tau = if i == n - 1 {
            e.tau_max
        } else {
            e.tau_min + (e.tau_max - e.tau_min) * i as f64 / (n - 1) as f64
        };
        for &k in &config.phases.levels {
            let energy = spectrum.energies()[k];
            table.row(&[
                Cell::F(tau),
                Cell::I(k as i64),
                Cell::F(energy),
                Cell::F(PhaseLaw::Oscillating.phase(tau, energy, &clock)?),
                Cell::F(small_lambda_phase(tau, energy, &clock)),
                Cell::F(large_lambda_phase(tau, energy, &clock)),
            ]);
        }
    }
    let path = table.write(&config.output.dir, "phases.csv")?;
    Ok(RunReport {
        files: vec![path],
        summary: format!("{n} samples for {} levels", config.phases.levels.len()),
    })
}

/// |ψ(x, τ)|² of the oscillator on an (x, τ) grid.
pub fn run_density(config: &ScenarioConfig) -> Result<RunReport> {
    if config.system.kind != SystemChoice::Harmonic {
        return Err(Error::config(
            "system.kind",
            "density needs a harmonic system",
        ));
    }
    let req = request(config)?;
    let d = &config.density;
    let e = &config.evolution;
    let xs: Vec<f64> = (0..d.x_points)
        .map(|i| d.x_min + (d.x_max - d.x_min) * i as f64 / (d.x_points - 1) as f64)
        .collect();
    let mut table = Table::new(config, &["tau", "x", "density"]);
    for j in 0..d.tau_samples {
        let tau = e.tau_min + (e.tau_max - e.tau_min) * j as f64 / (d.tau_samples - 1) as f64;
        let psi = wavefunction_on_grid(&req, tau, &xs)?;
        for (x, amp) in xs.iter().zip(psi) {
            table.row(&[Cell::F(tau), Cell::F(*x), Cell::F(amp.norm_sqr())]);
        }
    }
    let path = table.write(&config.output.dir, "density.csv")?;
    Ok(RunReport {
        files: vec![path],
        summary: format!("{} x {} density grid", d.tau_samples, d.x_points),
    })
}

/// Numeric period dispersion of ⟨x⟩ across λ against the analytic law.
pub fn run_sigma_sweep(config: &ScenarioConfig) -> Result<RunReport> {
    if config.system.kind != SystemChoice::Harmonic {
        return Err(Error::config(
            "system.kind",
            "sigma-sweep needs a harmonic system",
        ));
    }
    let w = &config.sweep;
    let params = harmonic_params(config);
    let state = coherent_state(CoherentStateSpec {
        alpha: Complex64::new(w.alpha, 0.0),
        cutoff: w.cutoff,
    })
    .map_err(|e| Error::config("sweep.cutoff", e.to_string()))?;
    let obs = harmonic_observables(w.cutoff, params)?;
    let template = EvolutionRequest::new(
        harmonic_spectrum(w.cutoff, params)?,
        state,
        clock(config)?,
        vec![0.0],
        PhaseLaw::Oscillating,
    )?;
    // ⟨x⟩ slows down by at most 4/π relative to the oscillator period
    let longest_period = 2.0 * PI / params.omega * 4.0 / PI;
    let options = SweepOptions {
        periods: w.periods,
        samples_per_period: w.samples_per_period,
        max_tau: w.max_periods_factor * w.periods as f64 * longest_period,
        rescale: w.rescale,
    };
    let grid = log_grid(w.lambda_min, w.lambda_max, w.points)?;
    let cmp = sigma_vs_lambda(&template, &obs.x, &grid, options)?;

    let mut table = Table::new(
        config,
        &[
            "lambda",
            "sigma_numeric",
            "sigma_analytic",
            "ratio",
            "n_periods",
            "mean_period",
            "included",
            "slope_numeric",
            "slope_analytic",
        ],
    );
    for run in &cmp.runs {
        let (sigma, covered, mean) = run
            .ensemble
            .as_ref()
            .map_or((f64::NAN, 0.0, f64::NAN), |e| {
                (e.relative_std_dev, e.covered_periods(), e.mean_period)
            });
        table.row(&[
            Cell::F(run.lambda),
            Cell::F(sigma),
            Cell::F(run.sigma_analytic),
            Cell::F(sigma / run.sigma_analytic),
            Cell::I(covered.floor() as i64),
            Cell::F(mean),
            Cell::S(if run.flag.is_none() {
                "true".into()
            } else {
                "false".into()
            }),
            Cell::F(cmp.numeric_slope),
            Cell::F(cmp.analytic_slope),
        ]);
    }
    let excluded = cmp.runs.iter().filter(|r| r.flag.is_some()).count();
    if excluded > 0 {
        table.comment(&format!("{excluded} run(s) excluded from the fit"));
    }
    let path = table.write(&config.output.dir, "sigma_sweep.csv")?;
    Ok(RunReport {
        files: vec![path],
        summary: format!(
            "slope numeric {:.4}, analytic {:.4} over {} points",
            cmp.numeric_slope,
            cmp.analytic_slope,
            cmp.lambda_values.len()
        ),
    })
}

/// Upper bound on the clock period from a dephasing limit.
pub fn run_bound(config: &ScenarioConfig) -> Result<RunReport> {
    let b = &config.bound;
    let bound = clock_period_bound(b.sigma, b.system_period)?;
    let mut table = Table::new(
        config,
        &[
            "sigma",
            "system_period",
            "clock_period_bound",
            "coefficient",
        ],
    );
    table.row(&[
        Cell::F(b.sigma),
        Cell::F(b.system_period),
        Cell::F(bound),
        Cell::F(bound_coefficient()),
    ]);
    let path = table.write(&config.output.dir, "bound.csv")?;
    Ok(RunReport {
        files: vec![path],
        summary: format!("clock period bound {}", format_float(bound)),
    })
}
