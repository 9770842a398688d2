use ndarray::Array2;
use num_complex::Complex64;

use super::{ObservableMatrix, Spectrum, StateVector, SystemKind};
use crate::error::{Error, Result};

/// Allowed Poisson weight beyond the basis cutoff.
pub const COHERENT_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicParams {
    pub omega: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl HarmonicParams {
    pub fn natural() -> Self {
        Self {
            omega: 1.0,
            mass: 1.0,
            hbar: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega", self.omega),
            ("mass", self.mass),
            ("hbar", self.hbar),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Oscillator length √(ħ/(mω)).
    pub fn length(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }
}

/// E_k = ħω(k + 1/2) for k = 0..=cutoff.
pub fn harmonic_spectrum(cutoff: usize, params: HarmonicParams) -> Result<Spectrum> {
    if cutoff < 1 {
        return Err(Error::domain("harmonic cutoff must be at least 1"));
    }
    params.validate()?;
    let energies = (0..=cutoff)
        .map(|k| params.hbar * params.omega * (k as f64 + 0.5))
        .collect();
    let labels = (0..=cutoff).map(|k| format!("n={k}")).collect();
    Spectrum::new(energies, labels, SystemKind::Harmonic(params))
}

/// Ladder-operator matrices of the truncated oscillator.
///
/// The quadratic observables use their exact matrix elements rather than
/// products of the truncated linear ones, so second moments of any state in
/// the truncated space are exact.
#[derive(Debug, Clone)]
pub struct HarmonicObservables {
    pub x: ObservableMatrix,
    pub p: ObservableMatrix,
    pub x2: ObservableMatrix,
    pub p2: ObservableMatrix,
    /// (xp + px)/2
    pub xp_sym: ObservableMatrix,
}

pub fn harmonic_observables(cutoff: usize, params: HarmonicParams) -> Result<HarmonicObservables> {
    if cutoff < 1 {
        return Err(Error::domain("harmonic cutoff must be at least 1"));
    }
    params.validate()?;
    let dim = cutoff + 1;
    let x0 = (params.hbar / (2.0 * params.mass * params.omega)).sqrt();
    let p0 = (params.hbar * params.mass * params.omega / 2.0).sqrt();
    let zero = || Array2::<Complex64>::zeros((dim, dim));
    let (mut x, mut p, mut x2, mut p2, mut xp) = (zero(), zero(), zero(), zero(), zero());

    for k in 0..dim {
        let kf = k as f64;
        x2[[k, k]] = Complex64::new(x0 * x0 * (2.0 * kf + 1.0), 0.0);
        p2[[k, k]] = Complex64::new(p0 * p0 * (2.0 * kf + 1.0), 0.0);
        if k + 1 < dim {
            let s = (kf + 1.0).sqrt();
            x[[k, k + 1]] = Complex64::new(x0 * s, 0.0);
            x[[k + 1, k]] = Complex64::new(x0 * s, 0.0);
            // p = i p0 (a† − a)
            p[[k, k + 1]] = Complex64::new(0.0, -p0 * s);
            p[[k + 1, k]] = Complex64::new(0.0, p0 * s);
        }
        if k + 2 < dim {
            let s = ((kf + 1.0) * (kf + 2.0)).sqrt();
            x2[[k, k + 2]] = Complex64::new(x0 * x0 * s, 0.0);
            x2[[k + 2, k]] = Complex64::new(x0 * x0 * s, 0.0);
            p2[[k, k + 2]] = Complex64::new(-p0 * p0 * s, 0.0);
            p2[[k + 2, k]] = Complex64::new(-p0 * p0 * s, 0.0);
            // (xp + px)/2 = (iħ/2)(a†² − a²)
            let h = 0.5 * params.hbar * s;
            xp[[k, k + 2]] = Complex64::new(0.0, -h);
            xp[[k + 2, k]] = Complex64::new(0.0, h);
        }
    }

    Ok(HarmonicObservables {
        x: ObservableMatrix::new("x", x)?,
        p: ObservableMatrix::new("p", p)?,
        x2: ObservableMatrix::new("x2", x2)?,
        p2: ObservableMatrix::new("p2", p2)?,
        xp_sym: ObservableMatrix::new("xp_sym", xp)?,
    })
}

/// Coherent state |α⟩ truncated to levels 0..=cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentStateSpec {
    pub alpha: Complex64,
    pub cutoff: usize,
}

impl CoherentStateSpec {
    /// Poisson weight that falls beyond the cutoff.
    pub fn tail_weight(&self) -> f64 {
        let kept: f64 = raw_coherent(self).iter().map(|c| c.norm_sqr()).sum();
        (1.0 - kept).max(0.0)
    }
}

fn raw_coherent(spec: &CoherentStateSpec) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(spec.cutoff + 1);
    let mut current = Complex64::new((-0.5 * spec.alpha.norm_sqr()).exp(), 0.0);
    c.push(current);
    for k in 1..=spec.cutoff {
        current = current * spec.alpha / (k as f64).sqrt();
        c.push(current);
    }
    c
}

/// c_k = e^{−|α|²/2} α^k / √(k!), renormalized after truncation.
pub fn coherent_state(spec: CoherentStateSpec) -> Result<StateVector> {
    let tail = spec.tail_weight();
    if tail > COHERENT_TAIL_TOLERANCE {
        return Err(Error::Numerical(format!(
            "cutoff {} leaves Poisson weight {tail:e} for |alpha| = {}; raise the cutoff",
            spec.cutoff,
            spec.alpha.norm()
        )));
    }
    StateVector::normalized(raw_coherent(&spec))
}

/// Normalized Hermite functions u_0..u_{count−1} at position `x`.
pub fn hermite_functions(x: f64, count: usize, params: &HarmonicParams) -> Vec<f64> {
    let len = params.length();
    let xi = x / len;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let u0 = (std::f64::consts::PI.powf(-0.25) / len.sqrt()) * (-0.5 * xi * xi).exp();
    out.push(u0);
    if count > 1 {
        out.push(std::f64::consts::SQRT_2 * xi * u0);
    }
    for k in 1..count.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn spectrum_examples() {
        let s = harmonic_spectrum(5, HarmonicParams::natural()).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.energies()[0], 0.5);
        assert_eq!(s.energies()[3], 3.5);
        let fast = HarmonicParams {
            omega: 2.0,
            ..HarmonicParams::natural()
        };
        assert_eq!(harmonic_spectrum(1, fast).unwrap().energies()[0], 1.0);
        assert!(harmonic_spectrum(0, fast).is_err());
    }

    #[test]
    fn ladder_elements() {
        let obs = harmonic_observables(8, HarmonicParams::natural()).unwrap();
        assert_abs_diff_eq!(
            obs.x.elements()[[0, 1]].re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(obs.x2.elements()[[0, 0]].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(obs.p2.elements()[[0, 0]].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn commutator_on_interior() {
        let params = HarmonicParams {
            omega: 1.3,
            mass: 0.7,
            hbar: 1.1,
        };
        let n = 12;
        let obs = harmonic_observables(n, params).unwrap();
        let x = obs.x.elements();
        let p = obs.p.elements();
        let c = x.dot(p) - p.dot(x);
        for j in 0..=n - 2 {
            for k in 0..=n - 2 {
                let expected = if j == k {
                    Complex64::new(0.0, params.hbar)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!(
                    (c[[j, k]] - expected).norm() < 1e-10,
                    "({j},{k}) {}",
                    c[[j, k]]
                );
            }
        }
    }

    #[test]
    fn quadratic_matrices_match_products_on_interior() {
        let obs = harmonic_observables(10, HarmonicParams::natural()).unwrap();
        let x = obs.x.elements();
        let p = obs.p.elements();
        let xx = x.dot(x);
        let pp = p.dot(p);
        let sym = (x.dot(p) + p.dot(x)).mapv(|v| v * 0.5);
        for j in 0..9 {
            for k in 0..9 {
                assert!((xx[[j, k]] - obs.x2.elements()[[j, k]]).norm() < 1e-12);
                assert!((pp[[j, k]] - obs.p2.elements()[[j, k]]).norm() < 1e-12);
                assert!((sym[[j, k]] - obs.xp_sym.elements()[[j, k]]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coherent_examples() {
        let vac = coherent_state(CoherentStateSpec {
            alpha: Complex64::new(0.0, 0.0),
            cutoff: 4,
        })
        .unwrap();
        assert_eq!(vac.coefficients()[0], Complex64::new(1.0, 0.0));
        assert!(vac.coefficients()[1..].iter().all(|c| c.norm() == 0.0));

        let one = coherent_state(CoherentStateSpec {
            alpha: Complex64::new(1.0, 0.0),
            cutoff: 30,
        })
        .unwrap();
        let c = one.coefficients();
        assert_abs_diff_eq!((c[1] / c[0]).re, 1.0, epsilon = 1e-14);

        // Poisson mean |α|² by direct summation
        let two = coherent_state(CoherentStateSpec {
            alpha: Complex64::new(2.0, 0.0),
            cutoff: 40,
        })
        .unwrap();
        let mean: f64 = two
            .populations()
            .iter()
            .enumerate()
            .map(|(k, w)| k as f64 * w)
            .sum();
        assert_abs_diff_eq!(mean, 4.0, epsilon = 1e-8);
    }

    #[test]
    fn coherent_cutoff_too_small() {
        let r = coherent_state(CoherentStateSpec {
            alpha: Complex64::new(3.0, 0.0),
            cutoff: 10,
        });
        assert!(matches!(r, Err(Error::Numerical(_))));
    }

    #[test]
    fn coherent_saturates_uncertainty() {
        let params = HarmonicParams::natural();
        let obs = harmonic_observables(60, params).unwrap();
        let st = coherent_state(CoherentStateSpec {
            alpha: Complex64::new(1.7, 0.0),
            cutoff: 60,
        })
        .unwrap();
        let c = st.coefficients();
        let mx = obs.x.expectation_raw(c).re;
        let mp = obs.p.expectation_raw(c).re;
        let vx = obs.x2.expectation_raw(c).re - mx * mx;
        let vp = obs.p2.expectation_raw(c).re - mp * mp;
        assert_abs_diff_eq!(mx, 2f64.sqrt() * 1.7, epsilon = 1e-10);
        assert_abs_diff_eq!(vx.sqrt() * vp.sqrt(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let params = HarmonicParams::natural();
        let n = 8;
        let dx = 0.01;
        let mut gram = vec![vec![0.0; n]; n];
        for i in -1500..=1500 {
            let u = hermite_functions(i as f64 * dx, n, &params);
            for (row, ua) in gram.iter_mut().zip(&u) {
                for (g, ub) in row.iter_mut().zip(&u) {
                    *g += ua * ub * dx;
                }
            }
        }
        for (a, row) in gram.iter().enumerate() {
            for (b, g) in row.iter().enumerate() {
                let expected = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(*g, expected, epsilon = 1e-10);
            }
        }
    }
}
