//! Bound-state systems in their energy eigenbasis.

mod harmonic;
mod hydrogen;
pub mod quadrature;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use harmonic::{
    coherent_state, harmonic_observables, harmonic_spectrum, hermite_functions, CoherentStateSpec,
    HarmonicObservables, HarmonicParams,
};
pub use hydrogen::{hydrogen_system, radial_s_wavefunction, HydrogenSystem};

/// Tolerance on Σ|c_k|² = 1.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Tolerance on O_jk = conj(O_kj).
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemKind {
    Harmonic(HarmonicParams),
    Hydrogen,
    Custom,
}

/// Ordered eigenvalues of a bound-state system.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    energies: Vec<f64>,
    labels: Vec<String>,
    kind: SystemKind,
}

impl Spectrum {
    pub fn new(energies: Vec<f64>, labels: Vec<String>, kind: SystemKind) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::domain("spectrum needs at least one level"));
        }
        if energies.len() != labels.len() {
            return Err(Error::domain(format!(
                "{} energies but {} labels",
                energies.len(),
                labels.len()
            )));
        }
        if let Some(e) = energies.iter().find(|e| **e == 0.0 || !e.is_finite()) {
            return Err(Error::domain(format!(
                "energy {e} is not a valid nonzero level"
            )));
        }
        if energies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("energies must be strictly increasing"));
        }
        Ok(Self {
            energies,
            labels,
            kind,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Unit-norm amplitudes over a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    coefficients: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sqr(&coefficients);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("state norm² is {norm}, expected 1")));
        }
        Ok(Self { coefficients })
    }

    /// Scales arbitrary amplitudes to unit norm.
    pub fn normalized(coefficients: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sqr(&coefficients).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero-norm amplitude list"));
        }
        Ok(Self {
            coefficients: coefficients.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// Skips the norm check; used for evolved states, which are unit-norm up
    /// to rounding by construction.
    pub(crate) fn from_evolved(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.coefficients)
    }

    /// Probabilities |c_k|².
    pub fn populations(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    /// ⟨Ĥ²⟩ = Σ |c_k|² E_k².
    pub fn mean_energy_squared(&self, spectrum: &Spectrum) -> f64 {
        self.coefficients
            .iter()
            .zip(spectrum.energies())
            .map(|(c, e)| c.norm_sqr() * e * e)
            .sum()
    }
}

fn norm_sqr(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

/// A Hermitian operator in the energy basis.
#[derive(Debug, Clone)]
pub struct ObservableMatrix {
    name: String,
    elements: Array2<Complex64>,
    nonzero: Vec<(usize, usize, Complex64)>,
}

impl ObservableMatrix {
    pub fn new(name: impl Into<String>, elements: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = elements.dim();
        if rows != cols {
            return Err(Error::domain(format!("observable matrix is {rows}x{cols}")));
        }
        for j in 0..rows {
            for k in j..cols {
                let d = (elements[[j, k]] - elements[[k, j]].conj()).norm();
                if d > HERMITIAN_TOLERANCE {
                    return Err(Error::domain(format!(
                        "observable is not Hermitian at ({j}, {k}): deviation {d:e}"
                    )));
                }
            }
        }
        let nonzero = elements
            .indexed_iter()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|((j, k), v)| (j, k, *v))
            .collect();
        Ok(Self {
            name: name.into(),
            elements,
            nonzero,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &Array2<Complex64> {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    /// Σ_jk conj(c_j) O_jk c_k, including any imaginary residue.
    pub fn expectation_raw(&self, coefficients: &[Complex64]) -> Complex64 {
        self.nonzero
            .iter()
            .map(|&(j, k, v)| coefficients[j].conj() * v * coefficients[k])
            .sum()
    }
}

/// Normalized superposition over user-supplied levels.
pub fn custom_superposition(
    energies: &[f64],
    amplitudes: &[Complex64],
) -> Result<(Spectrum, StateVector)> {
    if energies.len() != amplitudes.len() {
        return Err(Error::domain(format!(
            "{} energies but {} amplitudes",
            energies.len(),
            amplitudes.len()
        )));
    }
    let labels = (0..energies.len()).map(|k| format!("E{k}")).collect();
    let spectrum = Spectrum::new(energies.to_vec(), labels, SystemKind::Custom)?;
    let state = StateVector::normalized(amplitudes.to_vec())?;
    Ok((spectrum, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|x| Complex64::new(*x, 0.0)).collect()
    }

    #[test]
    fn custom_superposition_examples() {
        let (s, st) = custom_superposition(&[0.5], &re(&[1.0])).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(st.coefficients()[0], Complex64::new(1.0, 0.0));

        let (_, st) = custom_superposition(&[0.5, 1.5], &re(&[1.0, 1.0])).unwrap();
        for c in st.coefficients() {
            assert_abs_diff_eq!(c.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        }

        let (_, st) = custom_superposition(&[0.5, 1.5, 2.5], &re(&[1.0, 2.0, 1.0])).unwrap();
        assert_abs_diff_eq!(st.norm_sqr(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st.coefficients()[1].re, 2.0 / 6f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn custom_superposition_errors() {
        assert!(custom_superposition(&[0.5, 1.5], &re(&[0.0, 0.0])).is_err());
        assert!(custom_superposition(&[0.5, 1.5], &re(&[1.0])).is_err());
        assert!(custom_superposition(&[0.0, 1.5], &re(&[1.0, 1.0])).is_err());
        assert!(custom_superposition(&[1.5, 0.5], &re(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn state_vector_rejects_bad_norm() {
        assert!(StateVector::new(re(&[1.0, 1.0])).is_err());
        assert!(StateVector::new(re(&[0.6, 0.8])).is_ok());
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Array2::<Complex64>::zeros((2, 2));
        m[[0, 1]] = Complex64::new(0.0, 1.0);
        m[[1, 0]] = Complex64::new(0.0, 1.0);
        assert!(ObservableMatrix::new("bad", m).is_err());
    }
}
