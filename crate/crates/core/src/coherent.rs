//! Linear and nonlinear (GHA) coherent states on the Fock basis.
//!
//! A GHA coherent state has amplitudes `z^n / N_{n-1}!` with
//! `N_{n-1}! = N_0 N_1 ... N_{n-1}`; a linear coherent state has
//! `e^{-|z|^2/2} z^n / sqrt(n!)`. Infinite series are cut at the smallest
//! dimension whose analytic tail mass is at most [`TAIL_BOUND`].
//!
//! For type-1, type-2 and hydrogen the user-facing parameters are
//! `z = r e^{i phi}` with `0 <= r < 1`; since those spectra are stored in
//! units of `b`, the `sqrt(b)` that a dimensionful `z` would carry is
//! already divided out and `r` enters the 0-based amplitudes directly.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::algebra::build_rep;
use crate::error::{GhaError, Result};
use crate::scalar::Real;
use crate::spectrum::{Labeling, SpectrumModel, SystemId};

/// Largest relative tail mass left out of a truncated series.
pub const TAIL_BOUND: f64 = 1e-14;
/// Hard cap on adaptive truncation.
pub const MAX_DIM: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Eigenstate of the algebra annihilator `A`.
    Gha,
    /// Eigenstate of the canonical annihilator `D`.
    Linear,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Gha => "gha",
            StateKind::Linear => "linear",
        }
    }
}

impl std::str::FromStr for StateKind {
    type Err = GhaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gha" | "nonlinear" => Ok(StateKind::Gha),
            "linear" | "lin" => Ok(StateKind::Linear),
            other => Err(GhaError::InvalidParameter(format!("unknown state kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for StateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Normalized amplitude vector over the first `dim` Fock states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState<T> {
    coeffs: Vec<Complex<T>>,
    labeling: Labeling,
    system: Option<SystemId>,
    kind: Option<StateKind>,
    normalization: T,
    tail_mass: T,
}

impl<T: Real> FockState<T> {
    /// Normalizes `coeffs`; `normalization` records `1 / |coeffs|`.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>, labeling: Labeling) -> Result<Self> {
        let norm = l2(&coeffs);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(GhaError::InvalidParameter(
                "state vector must have a finite, nonzero norm".into(),
            ));
        }
        let inv = T::one() / norm;
        Ok(Self {
            coeffs: coeffs.into_iter().map(|c| c * inv).collect(),
            labeling,
            system: None,
            kind: None,
            normalization: inv,
            tail_mass: T::zero(),
        })
    }

    /// Fock basis vector `|k>` (storage index) in a space of dimension `dim`.
    pub fn basis(k: usize, dim: usize, labeling: Labeling) -> Result<Self> {
        if k >= dim {
            return Err(GhaError::DimensionMismatch(format!(
                "basis index {k} outside dimension {dim}"
            )));
        }
        let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
        v[k] = Complex::new(T::one(), T::zero());
        Self::from_coeffs(v, labeling)
    }

    pub fn for_system(mut self, id: SystemId) -> Self {
        self.system = Some(id);
        self
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
    pub fn labeling(&self) -> Labeling {
        self.labeling
    }
    pub fn index_offset(&self) -> usize {
        self.labeling.offset()
    }
    pub fn system(&self) -> Option<SystemId> {
        self.system
    }
    pub fn kind(&self) -> Option<StateKind> {
        self.kind
    }
    /// Numerical normalization `1 / |unnormalized series|`.
    pub fn normalization(&self) -> T {
        self.normalization
    }
    /// Analytic bound on the relative mass beyond the last stored level.
    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }
    pub fn norm(&self) -> T {
        l2(&self.coeffs)
    }

    /// Same metadata, new amplitudes (already normalized by the caller).
    pub(crate) fn with_coeffs(&self, coeffs: Vec<Complex<T>>) -> Self {
        Self {
            coeffs,
            ..self.clone()
        }
    }

    /// `index,re,im` rows keyed by presentation label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{:.12e},{:.12e}",
                k + self.index_offset(),
                c.re,
                c.im
            );
        }
        out
    }

    /// `|self - other|`, zero-padding the shorter vector.
    pub fn distance(&self, other: &Self) -> T {
        let n = self.dim().max(other.dim());
        let zero = Complex::new(T::zero(), T::zero());
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm_sqr()
            })
            .sum::<T>()
            .sqrt()
    }
}

fn l2<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
}

/// Amplitude recurrence `a_k = step(k) * a_{k-1}`.
#[derive(Clone, Copy)]
enum Family {
    Gha,
    /// GHA amplitudes times the presentation label `k + 1`.
    LabelWeighted,
    Linear,
}

struct Series<'a, T> {
    spec: Option<&'a SpectrumModel<T>>,
    family: Family,
    z: Complex<T>,
    /// Highest storage index carrying amplitude, for finite sums.
    support: Option<usize>,
}

impl<T: Real> Series<'_, T> {
    fn first(&self) -> Complex<T> {
        match self.family {
            Family::Linear => Complex::new((-self.z.norm_sqr() / T::lit(2.0)).exp(), T::zero()),
            _ => Complex::new(T::one(), T::zero()),
        }
    }

    fn step(&self, k: usize) -> Result<Complex<T>> {
        match self.family {
            Family::Linear => Ok(self.z / T::of(k).sqrt()),
            Family::Gha | Family::LabelWeighted => {
                let spec = self.spec.expect("GHA series needs a spectrum");
                let nk = spec.ladder_coefficient(k - 1)?;
                if nk == T::zero() {
                    return Err(GhaError::DegenerateSpectrum { level: k - 1 });
                }
                let mut s = self.z / nk;
                if let Family::LabelWeighted = self.family {
                    s = s * (T::of(k + 1) / T::of(k));
                }
                Ok(s)
            }
        }
    }

    /// Amplitudes up to index `upto` (inclusive), stopping at the support.
    fn extend(&self, amps: &mut Vec<Complex<T>>, upto: usize) -> Result<()> {
        if amps.is_empty() {
            amps.push(self.first());
        }
        while amps.len() <= upto {
            let k = amps.len();
            if self.support.is_some_and(|s| k > s) {
                break;
            }
            let next = amps[k - 1] * self.step(k)?;
            amps.push(next);
        }
        Ok(())
    }

    /// Relative mass of levels `>= d`, summed exactly inside a finite
    /// support and bounded geometrically otherwise. Ratios
    /// `w_{k+1}/w_k = |z|^2 / N_k^2` (times label factors) are
    /// non-increasing for every catalog spectrum.
    fn tail(&self, amps: &[Complex<T>], d: usize) -> T {
        let head: T = amps[..d].iter().map(|c| c.norm_sqr()).sum();
        if let Some(s) = self.support {
            if amps.len() == s + 1 {
                let rest: T = amps[d..].iter().map(|c| c.norm_sqr()).sum();
                return rest / head;
            }
        }
        let w_d = amps[d].norm_sqr();
        let w_next = amps[d + 1].norm_sqr();
        if w_d == T::zero() {
            return if w_next == T::zero() { T::zero() } else { T::infinity() };
        }
        let ratio = w_next / w_d;
        if ratio >= T::one() {
            return T::infinity();
        }
        w_d / (T::one() - ratio) / head
    }

    fn build(&self, dim: Option<usize>) -> Result<(Vec<Complex<T>>, T)> {
        let bound = T::lit(TAIL_BOUND);
        let mut amps = Vec::new();
        let finite_len = self.support.map(|s| s + 1);
        match dim {
            Some(d) => {
                if d == 0 {
                    return Err(GhaError::DimensionMismatch("dimension must be positive".into()));
                }
                self.extend(&mut amps, d + 1)?;
                let tail = if finite_len.is_some_and(|n| d >= n) {
                    T::zero()
                } else {
                    self.tail(&amps, d)
                };
                if tail > bound {
                    return Err(GhaError::TailBound {
                        dim: d,
                        tail: tail.to_f64().unwrap_or(f64::INFINITY),
                        bound: TAIL_BOUND,
                    });
                }
                amps.truncate(d);
                Ok((amps, tail))
            }
            None => {
                let mut d = 1;
                loop {
                    if finite_len.is_some_and(|n| d >= n) {
                        self.extend(&mut amps, d)?;
                        amps.truncate(d);
                        return Ok((amps, T::zero()));
                    }
                    if d > MAX_DIM {
                        return Err(GhaError::Convergence { cap: MAX_DIM });
                    }
                    self.extend(&mut amps, d + 1)?;
                    let tail = self.tail(&amps, d);
                    if tail <= bound {
                        amps.truncate(d);
                        return Ok((amps, tail));
                    }
                    d += 1;
                }
            }
        }
    }
}

fn check_radius<T: Real>(spec: &SpectrumModel<T>, z: Complex<T>) -> Result<()> {
    if let Some(radius) = spec.coherent_radius() {
        let r = z.norm();
        if r >= radius {
            return Err(GhaError::RadiusOfConvergence {
                r: r.to_f64().unwrap_or(f64::NAN),
                radius: radius.to_f64().unwrap_or(f64::NAN),
            });
        }
        if r >= T::lit(0.99) * radius {
            log::warn!(
                "|z| = {r} is within 1% of the convergence radius {radius}; normalization is ill-conditioned"
            );
        }
    }
    Ok(())
}

fn finish<T: Real>(
    (amps, tail): (Vec<Complex<T>>, T),
    dim: usize,
    labeling: Labeling,
    system: Option<SystemId>,
    kind: StateKind,
) -> Result<FockState<T>> {
    let mut coeffs = amps;
    coeffs.resize(dim.max(coeffs.len()), Complex::new(T::zero(), T::zero()));
    let mut state = FockState::from_coeffs(coeffs, labeling)?;
    state.system = system;
    state.kind = Some(kind);
    state.tail_mass = tail;
    if kind == StateKind::Linear {
        // the series already carries e^{-|z|^2/2}
        state.normalization = T::one();
    }
    Ok(state)
}

fn gha_series<T: Real>(
    spec: &SpectrumModel<T>,
    family: Family,
    z: Complex<T>,
    dim: Option<usize>,
) -> Result<FockState<T>> {
    check_radius(spec, z)?;
    let (support, storage_dim) = match (spec.max_level(), spec.highest_level()) {
        // the Morse sum stops at n_max - 1; the space keeps |n_max>
        (Some(n_max), _) => {
            if let Some(d) = dim.filter(|&d| d != n_max + 1) {
                return Err(GhaError::DimensionMismatch(format!(
                    "nilpotent spectrum needs dim = {}, got {d}",
                    n_max + 1
                )));
            }
            (Some(n_max - 1), Some(n_max + 1))
        }
        (None, Some(top)) => (Some(top - 1), None),
        (None, None) => (None, None),
    };
    let series = Series {
        spec: Some(spec),
        family,
        z,
        support,
    };
    let trunc = if storage_dim.is_some() { None } else { dim };
    let built = series.build(trunc)?;
    let len = storage_dim.unwrap_or(built.0.len());
    finish(built, len, spec.natural_labeling(), Some(spec.id()), StateKind::Gha)
}

/// Eigenstate of `A` with eigenvalue `z` on exactly `dim` levels.
///
/// Fails with [`GhaError::TailBound`] when `dim` leaves more than
/// [`TAIL_BOUND`] of the series out. For Morse, `dim` must be `n_max + 1`
/// and the sum runs over `n = 0..n_max-1`.
pub fn gha_coherent_state<T: Real>(
    spec: &SpectrumModel<T>,
    z: Complex<T>,
    dim: usize,
) -> Result<FockState<T>> {
    gha_series(spec, Family::Gha, z, Some(dim))
}

/// [`gha_coherent_state`] at the smallest admissible dimension.
pub fn gha_coherent_state_auto<T: Real>(spec: &SpectrumModel<T>, z: Complex<T>) -> Result<FockState<T>> {
    gha_series(spec, Family::Gha, z, None)
}

/// Hydrogen coherent state `N(r) sum_n n r^{n-1} e^{i(n-1)phi}
/// / prod_{i<n} sqrt(e_{i+1} - e_1) |n>`: the GHA amplitudes weighted by
/// the principal number `n`.
pub fn hydrogen_coherent_state<T: Real>(
    spec: &SpectrumModel<T>,
    z: Complex<T>,
    dim: Option<usize>,
) -> Result<FockState<T>> {
    if spec.id() != SystemId::Hydrogen {
        return Err(GhaError::WrongSystem {
            operation: "hydrogen_coherent_state",
            system: spec.id(),
        });
    }
    gha_series(spec, Family::LabelWeighted, z, dim)
}

/// Eigenstate of `D` on exactly `dim` levels.
pub fn linear_coherent_state<T: Real>(
    z: Complex<T>,
    dim: usize,
    labeling: Labeling,
) -> Result<FockState<T>> {
    linear_series(z, Some(dim), labeling)
}

pub fn linear_coherent_state_auto<T: Real>(z: Complex<T>, labeling: Labeling) -> Result<FockState<T>> {
    linear_series(z, None, labeling)
}

fn linear_series<T: Real>(z: Complex<T>, dim: Option<usize>, labeling: Labeling) -> Result<FockState<T>> {
    if !z.norm().is_finite() {
        return Err(GhaError::InvalidParameter("z must be finite".into()));
    }
    let series = Series {
        spec: None,
        family: Family::Linear,
        z,
        support: None,
    };
    let built = series.build(dim)?;
    let len = built.0.len();
    finish(built, len, labeling, None, StateKind::Linear)
}

/// The coherent state a system's dynamics is written for, at
/// `z = r e^{i phi}`: type-1, type-2 and the catalog oscillators use the
/// GHA series, hydrogen its label-weighted form, Morse the finite sum.
/// Linear states use the system's natural labelling and do not exist for
/// the finite Morse spectrum.
pub fn system_coherent_state<T: Real>(
    spec: &SpectrumModel<T>,
    kind: StateKind,
    r: T,
    phi: T,
    dim: Option<usize>,
) -> Result<FockState<T>> {
    if !(r >= T::zero()) || !r.is_finite() || !phi.is_finite() {
        return Err(GhaError::InvalidParameter(format!(
            "r must be finite and non-negative, got r = {r}, phi = {phi}"
        )));
    }
    let z = Complex::from_polar(r, phi);
    match kind {
        StateKind::Gha if spec.id() == SystemId::Hydrogen => hydrogen_coherent_state(spec, z, dim),
        StateKind::Gha => gha_series(spec, Family::Gha, z, dim),
        StateKind::Linear => {
            if spec.max_level().is_some() || spec.id() == SystemId::Tabulated {
                return Err(GhaError::WrongSystem {
                    operation: "linear coherent state",
                    system: spec.id(),
                });
            }
            check_radius(spec, z)?;
            Ok(linear_series(z, dim, spec.natural_labeling())?.for_system(spec.id()))
        }
    }
}

/// Closed-form `N(r)` of the state returned by [`system_coherent_state`].
pub fn closed_form_normalization<T: Real>(spec: &SpectrumModel<T>, kind: StateKind, r: T) -> Result<T> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(GhaError::InvalidParameter(format!("r must be non-negative, got {r}")));
    }
    let one = T::one();
    let x = r * r;
    let out_of_domain = || GhaError::RadiusOfConvergence {
        r: r.to_f64().unwrap_or(f64::NAN),
        radius: 1.0,
    };
    match (kind, spec.id()) {
        (StateKind::Linear, SystemId::Morse) => Err(GhaError::WrongSystem {
            operation: "linear coherent state",
            system: SystemId::Morse,
        }),
        (StateKind::Linear, _) | (StateKind::Gha, SystemId::Harmonic) => Ok((-x / T::lit(2.0)).exp()),
        (StateKind::Gha, SystemId::Type1) => {
            if r >= one {
                return Err(out_of_domain());
            }
            Ok(one - x)
        }
        (StateKind::Gha, SystemId::Type2) => {
            if r >= one {
                return Err(out_of_domain());
            }
            let u = one - x;
            Ok((u * u * u / (one + x)).sqrt())
        }
        (StateKind::Gha, SystemId::Hydrogen) => {
            if r >= one {
                return Err(out_of_domain());
            }
            Ok(hydrogen_normalization(x))
        }
        (StateKind::Gha, SystemId::Morse) => {
            let p = spec.morse_p().expect("morse has p");
            let n_max = spec.max_level().expect("morse has n_max");
            // sum_{n=0}^{n_max-1} x^n / (n! prod_{i=1}^n (2p - i))
            let mut term = one;
            let mut sum = one;
            for n in 1..n_max {
                term = term * x / (T::of(n) * (T::lit(2.0) * p - T::of(n)));
                sum = sum + term;
            }
            Ok(one / sum.sqrt())
        }
        (StateKind::Gha, id) => Err(GhaError::WrongSystem {
            operation: "closed-form normalization",
            system: id,
        }),
    }
}

/// `sqrt(x^2 (1-x)^3 / (2x(1-2x+3x^2) + 2(1-x)^3 ln(1-x)))` with `x = r^2`.
///
/// The denominator cancels to `O(x^2)`; below `r = 0.02` the leading
/// Taylor terms of `1 / N^2 = sum 2n^3/(n+1) x^{n-1}` are used instead.
fn hydrogen_normalization<T: Real>(x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    if x < T::lit(4e-4) {
        let coeffs = [1.0, 16.0 / 3.0, 13.5, 25.6, 250.0 / 6.0, 432.0 / 7.0];
        let s = coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + T::lit(c));
        return one / s.sqrt();
    }
    let u = one - x;
    let cube = u * u * u;
    let den = two * x * (one - two * x + T::lit(3.0) * x * x) + two * cube * (-x).ln_1p();
    (x * x * cube / den).sqrt()
}

/// `|(Op - z) psi|` with `Op = A` for GHA states and `D` for linear ones.
pub fn eigenstate_residual<T: Real>(
    spec: &SpectrumModel<T>,
    state: &FockState<T>,
    z: Complex<T>,
) -> Result<T> {
    let kind = state.kind().ok_or_else(|| {
        GhaError::InvalidParameter("eigenstate residual needs a coherent state".into())
    })?;
    let dim = state.dim().max(2);
    let mut psi = state.coeffs().to_vec();
    psi.resize(dim, Complex::new(T::zero(), T::zero()));
    let rep = build_rep(spec, dim)?;
    let op = match kind {
        StateKind::Gha => rep.a(),
        StateKind::Linear => rep.d(),
    };
    let image = op.mul_vec(&psi);
    Ok(image
        .iter()
        .zip(&psi)
        .map(|(&a, &p)| (a - z * p).norm_sqr())
        .sum::<T>()
        .sqrt())
}

/// `| |z> - |z'> |` for GHA states built on a common dimension.
pub fn klauder_continuity_check<T: Real>(
    spec: &SpectrumModel<T>,
    z: Complex<T>,
    z_prime: Complex<T>,
) -> Result<T> {
    let auto = |w: Complex<T>| system_coherent_state(spec, StateKind::Gha, w.norm(), w.arg(), None);
    let a = auto(z)?;
    let b = auto(z_prime)?;
    let dim = a.dim().max(b.dim());
    let fixed = |w: Complex<T>| system_coherent_state(spec, StateKind::Gha, w.norm(), w.arg(), Some(dim));
    Ok(fixed(z)?.distance(&fixed(z_prime)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn zero_label_gives_ground_state() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let s = gha_coherent_state_auto(&spec, c(0.0, 0.0)).unwrap();
        assert_eq!(s.coeffs()[0], c(1.0, 0.0));
        assert!(s.coeffs()[1..].iter().all(|x| x.norm() == 0.0));
        let l = linear_coherent_state_auto(c(0.0, 0.0), Labeling::ZeroBased).unwrap();
        assert_eq!(l.coeffs()[0], c(1.0, 0.0));
    }

    #[test]
    fn type1_normalization_at_half() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let s = gha_coherent_state_auto(&spec, c(0.5, 0.0)).unwrap();
        assert!((s.normalization() - 0.75).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-14);
        assert_eq!(s.labeling(), Labeling::OneBased);
    }

    #[test]
    fn linear_ratio_recurrence() {
        let z = c(0.5, 0.0);
        for offset in [Labeling::ZeroBased, Labeling::OneBased] {
            let s = linear_coherent_state(z, 40, offset).unwrap();
            for k in 0..20 {
                let ratio = s.coeffs()[k + 1] / s.coeffs()[k];
                assert!((ratio - z / ((k + 1) as f64).sqrt()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn linear_truncated_norm_within_tail() {
        // Poisson tail beyond 40 terms at r = 0.5 is far below 1e-14
        let raw: f64 = (0..40)
            .map(|k| {
                let lf: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
                (-0.25f64 + 2.0 * k as f64 * 0.5f64.ln() - lf).exp()
            })
            .sum::<f64>()
            .sqrt();
        assert!((1.0 - 1e-14..=1.0 + 1e-15).contains(&raw));
        let s = linear_coherent_state(c(0.5, 0.0), 40, Labeling::ZeroBased).unwrap();
        assert!(s.tail_mass() <= 1e-14);
    }

    #[test]
    fn tail_bound_violation() {
        let err = linear_coherent_state(c(3.0, 0.0), 5, Labeling::ZeroBased).unwrap_err();
        assert!(matches!(err, GhaError::TailBound { dim: 5, .. }));
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        assert!(gha_coherent_state(&spec, c(0.5, 0.0), 10).is_err());
    }

    #[test]
    fn radius_rejected() {
        let spec = SpectrumModel::<f64>::type2(1.0).unwrap();
        assert!(matches!(
            gha_coherent_state_auto(&spec, c(1.0, 0.0)),
            Err(GhaError::RadiusOfConvergence { .. })
        ));
        assert!(closed_form_normalization(&spec, StateKind::Gha, 1.0).is_err());
    }

    #[test]
    fn morse_state_support() {
        let spec = SpectrumModel::<f64>::morse(7.59).unwrap();
        let s = gha_coherent_state_auto(&spec, c(1.0, 0.0)).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.coeffs()[7], c(0.0, 0.0));
        assert!(s.coeffs()[6].norm() > 0.0);
        // direct summation of z^n / sqrt(n! prod (2p - i)), n = 0..6
        let mut amps = vec![1.0f64];
        for n in 1..7 {
            let prev = amps[n - 1];
            amps.push(prev / ((n as f64) * (2.0 * 7.59 - n as f64)).sqrt());
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        for (k, a) in amps.iter().enumerate() {
            assert!((s.coeffs()[k].re - a / norm).abs() < 1e-14);
        }
        let closed = closed_form_normalization(&spec, StateKind::Gha, 1.0).unwrap();
        assert!((closed - 1.0 / norm).abs() < 1e-14);
        assert!(gha_coherent_state(&spec, c(1.0, 0.0), 9).is_err());
    }

    #[test]
    fn type2_closed_form_value() {
        let spec = SpectrumModel::<f64>::type2(1.0).unwrap();
        let n = closed_form_normalization(&spec, StateKind::Gha, 0.5).unwrap();
        assert!((n - (0.421875f64 / 1.25).sqrt()).abs() < 1e-15);
        assert!((n - 0.580948).abs() < 1e-6);
    }

    #[test]
    fn hydrogen_small_r_limit() {
        let spec = SpectrumModel::<f64>::hydrogen(1.0).unwrap();
        assert_eq!(closed_form_normalization(&spec, StateKind::Gha, 0.0).unwrap(), 1.0);
        for r in [1e-4, 0.01, 0.019, 0.021, 0.05] {
            let closed = closed_form_normalization(&spec, StateKind::Gha, r).unwrap();
            let s = system_coherent_state(&spec, StateKind::Gha, r, 0.0, None).unwrap();
            assert!((closed / s.normalization() - 1.0).abs() < 1e-11, "r = {r}");
        }
    }

    #[test]
    fn eigenstate_examples() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let s = gha_coherent_state(&spec, c(0.0, 0.0), 4).unwrap();
        assert_eq!(eigenstate_residual(&spec, &s, c(0.0, 0.0)).unwrap(), 0.0);
        let z = c(0.5, 0.0);
        let s = gha_coherent_state(&spec, z, 60).unwrap();
        assert!(eigenstate_residual(&spec, &s, z).unwrap() <= 1e-8);
        let l = linear_coherent_state(z, 40, Labeling::ZeroBased).unwrap();
        assert!(eigenstate_residual(&spec, &l, z).unwrap() <= 1e-8);
    }

    #[test]
    fn continuity() {
        let t1 = SpectrumModel::<f64>::type1(1.0).unwrap();
        let z = c(0.3, 0.2);
        assert_eq!(klauder_continuity_check(&t1, z, z).unwrap(), 0.0);
        assert!(klauder_continuity_check(&t1, z, z + 1e-6).unwrap() <= 1e-4);
        let m = SpectrumModel::<f64>::morse(7.59).unwrap();
        assert!(klauder_continuity_check(&m, c(1.0, 0.0), c(1.0 + 1e-6, 0.0)).unwrap() <= 1e-4);
    }

    #[test]
    fn csv_export() {
        let l = linear_coherent_state(c(0.0, 0.0), 2, Labeling::OneBased).unwrap();
        assert_eq!(
            l.to_csv(),
            "index,re,im\n1,1.000000000000e0,0.000000000000e0\n2,0.000000000000e0,0.000000000000e0\n"
        );
    }

    #[test]
    fn morse_has_no_linear_state() {
        let spec = SpectrumModel::<f64>::morse(7.59).unwrap();
        assert!(matches!(
            system_coherent_state(&spec, StateKind::Linear, 0.1, 0.0, None),
            Err(GhaError::WrongSystem { .. })
        ));
    }
}
