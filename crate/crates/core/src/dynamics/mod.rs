//! Time evolution and the uncertainty product `dxi drho`.
//!
//! Moments of `xi, rho, xi^2, rho^2` come from two routes that share no
//! code past the spectrum: [`expectations_oracle`] applies the stored
//! matrices to an evolved state vector, [`expectations_series`] evaluates
//! the closed-form cosine/sine series. Time is dimensionless: `b t / hbar`
//! for the `b`-scaled spectra, `omega t` for Morse.

mod series;
mod trace;

pub use series::{expectations_series, MorseSummation, SeriesOptions};
pub use trace::{trace, trace_with_dim, Path, TimeGrid, TraceMeta, UncertaintyTrace};

use num_complex::Complex;

use crate::algebra::AlgebraRep;
use crate::coherent::FockState;
use crate::error::{GhaError, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::spectrum::SpectrumModel;

/// First and second moments of the canonical pair at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationSet<T> {
    pub mean_xi: T,
    pub mean_rho: T,
    pub mean_xi2: T,
    pub mean_rho2: T,
    var_xi: T,
    var_rho: T,
    hbar: T,
}

fn variance<T: Real>(name: &str, mean: T, mean_sq: T) -> Result<T> {
    let var = mean_sq - mean * mean;
    if var >= T::zero() {
        return Ok(var);
    }
    let tol = T::lit(1e-12).max(T::lit(64.0) * T::epsilon()) * T::one().max(mean_sq.abs());
    if var >= -tol {
        log::warn!("{name} variance {var:e} clamped to zero");
        Ok(T::zero())
    } else {
        Err(GhaError::NegativeVariance(var.to_f64().unwrap_or(f64::NAN)))
    }
}

impl<T: Real> ExpectationSet<T> {
    pub fn new(mean_xi: T, mean_rho: T, mean_xi2: T, mean_rho2: T, hbar: T) -> Result<Self> {
        Ok(Self {
            mean_xi,
            mean_rho,
            mean_xi2,
            mean_rho2,
            var_xi: variance("xi", mean_xi, mean_xi2)?,
            var_rho: variance("rho", mean_rho, mean_rho2)?,
            hbar,
        })
    }

    pub fn var_xi(&self) -> T {
        self.var_xi
    }

    pub fn var_rho(&self) -> T {
        self.var_rho
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// Largest absolute difference over the four moments.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        [
            self.mean_xi - other.mean_xi,
            self.mean_rho - other.mean_rho,
            self.mean_xi2 - other.mean_xi2,
            self.mean_rho2 - other.mean_rho2,
        ]
        .iter()
        .fold(T::zero(), |m, d| m.max(d.abs()))
    }

    /// Largest `|a - b| / (1 + |b|)` over the four moments, `other` as reference.
    pub fn max_rel_diff(&self, other: &Self) -> T {
        [
            (self.mean_xi, other.mean_xi),
            (self.mean_rho, other.mean_rho),
            (self.mean_xi2, other.mean_xi2),
            (self.mean_rho2, other.mean_rho2),
        ]
        .iter()
        .fold(T::zero(), |m, &(a, b)| m.max((a - b).abs() / (T::one() + b.abs())))
    }
}

/// `dxi drho / hbar`.
pub fn uncertainty<T: Real>(es: &ExpectationSet<T>) -> T {
    (es.var_xi * es.var_rho).sqrt() / es.hbar
}

/// Multiplies storage level `k` by `e^{-i e t}`, with `e` the energy of
/// the level's presentation label.
pub fn evolve<T: Real>(state: &FockState<T>, spec: &SpectrumModel<T>, t: T) -> Result<FockState<T>> {
    if let Some(id) = state.system().filter(|&id| id != spec.id()) {
        return Err(GhaError::WrongSystem {
            operation: "evolve a state built for another spectrum",
            system: id,
        });
    }
    let offset = state.index_offset();
    let coeffs = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            if c.re == T::zero() && c.im == T::zero() {
                return Ok(c);
            }
            let e = spec.energy_at_label(k + offset)?;
            Ok(c * Complex::from_polar(T::one(), -e * t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(state.with_coeffs(coeffs))
}

/// Representation size at which the oracle sees no truncation: two levels
/// above the state's support, capped by a finite spectrum.
pub fn oracle_dim<T: Real>(spec: &SpectrumModel<T>, state_dim: usize) -> usize {
    match (spec.max_level(), spec.highest_level()) {
        (Some(n_max), _) => n_max + 1,
        (None, Some(top)) => (state_dim + 2).min(top),
        (None, None) => state_dim + 2,
    }
}

fn expectation<T: Real>(
    name: &'static str,
    bra: &[Complex<T>],
    ket: &[Complex<T>],
) -> Result<T> {
    let v = bra
        .iter()
        .zip(ket)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a.conj() * b);
    let tol = T::lit(1e-12).max(T::lit(64.0) * T::epsilon()) * T::one().max(v.re.abs());
    if v.im.abs() > tol {
        return Err(GhaError::ImaginaryResidual {
            operator: name,
            imag: v.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(v.re)
}

/// Direct `<psi|X|psi>` for `X` in `xi, rho, xi^2, rho^2`.
///
/// The state is zero-padded to the representation; build the rep with
/// [`oracle_dim`] to keep `xi^2` and `rho^2` free of truncation effects.
pub fn expectations_oracle<T: Real>(state: &FockState<T>, rep: &AlgebraRep<T>) -> Result<ExpectationSet<T>> {
    if state.dim() > rep.dim() {
        return Err(GhaError::DimensionMismatch(format!(
            "state of dimension {} does not fit a rep of dimension {}",
            state.dim(),
            rep.dim()
        )));
    }
    if let Some(id) = state.system().filter(|&id| id != rep.system()) {
        return Err(GhaError::WrongSystem {
            operation: "oracle on a rep of another spectrum",
            system: id,
        });
    }
    let mut psi = state.coeffs().to_vec();
    psi.resize(rep.dim(), Complex::new(T::zero(), T::zero()));
    let apply = |m: &Matrix<T>, v: &[Complex<T>]| m.mul_vec(v);
    let xi_psi = apply(rep.xi(), &psi);
    let rho_psi = apply(rep.rho(), &psi);
    ExpectationSet::new(
        expectation("xi", &psi, &xi_psi)?,
        expectation("rho", &psi, &rho_psi)?,
        expectation("xi^2", &psi, &apply(rep.xi(), &xi_psi))?,
        expectation("rho^2", &psi, &apply(rep.rho(), &rho_psi))?,
        rep.hbar(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_rep;
    use crate::coherent::{linear_coherent_state_auto, system_coherent_state, StateKind};
    use crate::spectrum::Labeling;

    #[test]
    fn vacuum_saturates() {
        let spec = SpectrumModel::<f64>::harmonic();
        let rep = build_rep(&spec, 6).unwrap();
        let ground = FockState::basis(0, 4, Labeling::ZeroBased).unwrap();
        let es = expectations_oracle(&ground, &rep).unwrap();
        assert_eq!(es.mean_xi, 0.0);
        assert!((uncertainty(&es) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn glauber_state_stays_minimal() {
        let spec = SpectrumModel::<f64>::harmonic();
        let z = Complex::new(0.7, -0.4);
        let s = linear_coherent_state_auto(z, Labeling::ZeroBased).unwrap();
        let rep = build_rep(&spec, oracle_dim(&spec, s.dim())).unwrap();
        for t in [0.0, 0.3, 2.0, 17.5] {
            let es = expectations_oracle(&evolve(&s, &spec, t).unwrap(), &rep).unwrap();
            assert!((uncertainty(&es) - 0.5).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn basis_state_is_stationary() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let s = FockState::basis(2, 5, Labeling::OneBased).unwrap();
        let rep = build_rep(&spec, 7).unwrap();
        let e0 = expectations_oracle(&s, &rep).unwrap();
        let e1 = expectations_oracle(&evolve(&s, &spec, 3.7).unwrap(), &rep).unwrap();
        assert!(e0.max_abs_diff(&e1) < 1e-15);
        assert_eq!(evolve(&s, &spec, 0.0).unwrap(), s);
    }

    #[test]
    fn morse_phase_sign() {
        let spec = SpectrumModel::<f64>::morse(7.59).unwrap();
        let s = system_coherent_state(&spec, StateKind::Gha, 1.0, 0.0, None).unwrap();
        let t = 0.01;
        let e = evolve(&s, &spec, t).unwrap();
        for n in 0..7 {
            let expected = s.coeffs()[n] * Complex::from_polar(1.0, (7.59 - n as f64).powi(2) * t);
            assert!((e.coeffs()[n] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn mismatched_spectrum_rejected() {
        let t1 = SpectrumModel::<f64>::type1(1.0).unwrap();
        let t2 = SpectrumModel::<f64>::type2(1.0).unwrap();
        let s = system_coherent_state(&t1, StateKind::Gha, 0.2, 0.0, None).unwrap();
        assert!(evolve(&s, &t2, 1.0).is_err());
    }

    #[test]
    fn clamps_tiny_negative_variance() {
        let es = ExpectationSet::new(1.0, 0.0, 1.0 - 1e-14, 0.5, 1.0).unwrap();
        assert_eq!(es.var_xi(), 0.0);
        assert!(ExpectationSet::new(1.0, 0.0, 0.9, 0.5, 1.0).is_err());
    }
}
