use ndarray::Array2;
use num_complex::Complex64;

use super::quadrature::GaussLegendre;
use super::{ObservableMatrix, Spectrum, SystemKind};
use crate::error::{Error, Result};

const NODES_PER_PANEL: usize = 16;
const PANEL_WIDTH: f64 = 0.25;
const CONVERGENCE_TOLERANCE: f64 = 1e-10;

/// Hydrogen s-states (atomic units) with their radius matrices.
#[derive(Debug, Clone)]
pub struct HydrogenSystem {
    pub spectrum: Spectrum,
    pub radius: ObservableMatrix,
    pub radius_sq: ObservableMatrix,
}

/// Generalized Laguerre polynomial L_m^{(a)}(x) by upward recurrence.
fn laguerre(m: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// R_{n0}(r) = 2 n^{−5/2} e^{−r/n} L_{n−1}^{(1)}(2r/n).
pub fn radial_s_wavefunction(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    2.0 * nf.powf(-2.5) * (-r / nf).exp() * laguerre(n - 1, 1.0, 2.0 * r / nf)
}

/// Matrices ∫R_i R_j r^{2+power} dr on a composite rule with `panels` panels.
fn radial_moments(n_max: usize, r_max: f64, panels: usize) -> [Array2<f64>; 3] {
    let rule = GaussLegendre::new(NODES_PER_PANEL);
    let (rs, ws) = rule.composite_points(0.0, r_max, panels);
    let values: Vec<Vec<f64>> = (1..=n_max)
        .map(|n| rs.iter().map(|&r| radial_s_wavefunction(n, r)).collect())
        .collect();
    let mut out = [
        Array2::zeros((n_max, n_max)),
        Array2::zeros((n_max, n_max)),
        Array2::zeros((n_max, n_max)),
    ];
    for i in 0..n_max {
        for j in i..n_max {
            let mut acc = [0.0; 3];
            for (q, (&r, &w)) in rs.iter().zip(&ws).enumerate() {
                let base = w * values[i][q] * values[j][q] * r * r;
                acc[0] += base;
                acc[1] += base * r;
                acc[2] += base * r * r;
            }
            for (m, a) in out.iter_mut().zip(acc) {
                m[[i, j]] = a;
                m[[j, i]] = a;
            }
        }
    }
    out
}

/// Bound s-states n = 1..=n_max with E_n = −1/(2n²) and the matrices of r
/// and r² computed by quadrature of the radial functions.
pub fn hydrogen_system(n_max: usize) -> Result<HydrogenSystem> {
    if n_max < 2 {
        return Err(Error::domain("hydrogen system needs n_max >= 2"));
    }
    let nf = n_max as f64;
    // e^{−2r/n}(2r/n)^{2n+3} is below 1e−20 well before this radius
    let r_max = nf * (2.0 * nf + 40.0);
    let panels = (r_max / PANEL_WIDTH).ceil() as usize;
    let fine = radial_moments(n_max, r_max, panels);
    let coarse = radial_moments(n_max, r_max, panels.div_ceil(2));

    for (which, (f, c)) in ["overlap", "r", "r^2"].iter().zip(fine.iter().zip(&coarse)) {
        for ((idx, a), b) in f.indexed_iter().zip(c.iter()) {
            let scale = a.abs().max(1.0);
            if (a - b).abs() > CONVERGENCE_TOLERANCE * scale {
                return Err(Error::Numerical(format!(
                    "radial quadrature of {which} did not converge at {idx:?}: {a} vs {b}"
                )));
            }
        }
    }
    for i in 0..n_max {
        for j in 0..n_max {
            let expected = if i == j { 1.0 } else { 0.0 };
            let got = fine[0][[i, j]];
            if (got - expected).abs() > CONVERGENCE_TOLERANCE {
                return Err(Error::Numerical(format!(
                    "radial functions not orthonormal at ({}, {}): overlap {got}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let energies = (1..=n_max).map(|n| -0.5 / (n * n) as f64).collect();
    let labels = (1..=n_max).map(|n| format!("{n}s")).collect();
    let spectrum = Spectrum::new(energies, labels, SystemKind::Hydrogen)?;
    let to_complex = |m: &Array2<f64>| m.mapv(|v| Complex64::new(v, 0.0));
    Ok(HydrogenSystem {
        spectrum,
        radius: ObservableMatrix::new("r", to_complex(&fine[1]))?,
        radius_sq: ObservableMatrix::new("r2", to_complex(&fine[2]))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 1.0, 3.0), 1.0);
        assert_eq!(laguerre(1, 1.0, 3.0), -1.0);
        // L_2^{(1)}(x) = (x² − 6x + 6)/2
        assert_relative_eq!(
            laguerre(2, 1.0, 1.5),
            (2.25 - 9.0 + 6.0) / 2.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn ground_state_radial_function() {
        assert_relative_eq!(
            radial_s_wavefunction(1, 0.7),
            2.0 * (-0.7f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn diagonal_radius_matches_closed_form() {
        let sys = hydrogen_system(5).unwrap();
        for n in 1..=5usize {
            let nf = n as f64;
            let r = sys.radius.elements()[[n - 1, n - 1]].re;
            assert_relative_eq!(r, 1.5 * nf * nf, max_relative = 1e-8);
            // ⟨r²⟩ for l = 0: n²(5n² + 1)/2
            let r2 = sys.radius_sq.elements()[[n - 1, n - 1]].re;
            assert_relative_eq!(
                r2,
                nf * nf * (5.0 * nf * nf + 1.0) / 2.0,
                max_relative = 1e-8
            );
        }
        assert_eq!(sys.spectrum.energies()[0], -0.5);
        assert_eq!(sys.spectrum.energies()[1], -0.125);
    }

    #[test]
    fn rejects_tiny_basis() {
        assert!(hydrogen_system(1).is_err());
    }
}
