//! Closed-form moment series.
//!
//! Every moment has the shape
//!
//! ```text
//! <xi>    = sqrt2 L P sum F_n cos(D1_n t + phi)
//! <rho>   = sqrt2 (hbar/L) P sum F_n sin(D1_n t + phi)
//! <xi^2>  = L^2 { P sum S_n cos(D2_n t + 2 phi) + G } + L^2/2
//! <rho^2> = -(hbar/L)^2 { P sum S_n cos(D2_n t + 2 phi) - G } + hbar^2/(2 L^2)
//! ```
//!
//! with `D1_n = e_n - e_{n+1}`, `D2_n = e_n - e_{n+2}` and `G` the
//! time-independent diagonal part. The type-1, type-2, hydrogen and Morse
//! coefficients are written out per system; the remaining catalog systems
//! use the same shape with coefficients taken from the amplitude recurrence.

use crate::coherent::{closed_form_normalization, StateKind, MAX_DIM, TAIL_BOUND};
use crate::error::{GhaError, Result};
use crate::scalar::Real;
use crate::spectrum::{SpectrumModel, SystemId};

use super::ExpectationSet;

/// Summation bounds for the Morse series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MorseSummation {
    /// First-order sums over `n = 1..n_max-1`, second-order over
    /// `n = 1..n_max-2`, as printed.
    Printed,
    /// Bounds implied by the state's support `n = 0..n_max-1`: first-order
    /// `0..n_max-2`, second-order `0..n_max-3`. Agrees with the oracle.
    #[default]
    Resolved,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions<T> {
    pub length: T,
    pub hbar: T,
    pub morse: MorseSummation,
}

impl<T: Real> Default for SeriesOptions<T> {
    fn default() -> Self {
        Self {
            length: T::one(),
            hbar: T::one(),
            morse: MorseSummation::default(),
        }
    }
}

/// The three sums entering the four moments.
struct Sums<T> {
    /// `sum F cos(D1 t + phi)`, `sum F sin(D1 t + phi)`.
    first: [T; 2],
    /// `sum S cos(D2 t + 2 phi)`.
    second: T,
    /// Sum of `G`.
    diagonal: T,
}

/// Sums `term(n)` for `n = first..`, stopping when the geometric bound on
/// the remaining magnitudes drops below the tail tolerance; a finite
/// `last` sums exactly.
fn sum_terms<T: Real, const K: usize>(
    first: usize,
    last: Option<usize>,
    mut term: impl FnMut(usize) -> Result<(T, [T; K])>,
) -> Result<[T; K]> {
    let mut acc = [T::zero(); K];
    if let Some(last) = last {
        for n in first..=last {
            let (_, v) = term(n)?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a = *a + x;
            }
        }
        return Ok(acc);
    }
    let tol = T::lit(TAIL_BOUND);
    let mut total = T::zero();
    let mut prev = T::zero();
    for (count, n) in (first..first + MAX_DIM).enumerate() {
        let (mag, v) = term(n)?;
        for (a, x) in acc.iter_mut().zip(v) {
            *a = *a + x;
        }
        total = total + mag;
        if count >= 2 {
            if mag == T::zero() && prev == T::zero() {
                return Ok(acc);
            }
            let ratio = mag / prev;
            if ratio < T::one() && mag * ratio / (T::one() - ratio) <= tol * total {
                return Ok(acc);
            }
        }
        prev = mag;
    }
    Err(GhaError::Convergence { cap: MAX_DIM })
}

fn cos_sin<T: Real>(x: T) -> [T; 2] {
    [x.cos(), x.sin()]
}

/// Moments of the coherent state `kind` at `z = r e^{i phi}`, evolved for
/// dimensionless time `t`, from the closed-form series.
pub fn expectations_series<T: Real>(
    spec: &SpectrumModel<T>,
    kind: StateKind,
    r: T,
    phi: T,
    t: T,
    opts: &SeriesOptions<T>,
) -> Result<ExpectationSet<T>> {
    if !(r >= T::zero()) || !r.is_finite() || !phi.is_finite() || !t.is_finite() {
        return Err(GhaError::InvalidParameter(format!(
            "series needs finite r >= 0, phi, t; got r = {r}, phi = {phi}, t = {t}"
        )));
    }
    if let Some(radius) = spec.coherent_radius() {
        if r >= radius {
            return Err(GhaError::RadiusOfConvergence {
                r: r.to_f64().unwrap_or(f64::NAN),
                radius: radius.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let (prefactor, sums) = match (spec.id(), kind) {
        (SystemId::Morse, StateKind::Gha) => morse(spec, r, phi, t, opts.morse)?,
        (SystemId::Morse, StateKind::Linear) | (SystemId::Tabulated, StateKind::Linear) => {
            return Err(GhaError::WrongSystem {
                operation: "linear coherent state",
                system: spec.id(),
            })
        }
        (SystemId::Type1 | SystemId::Type2 | SystemId::Hydrogen, _) => {
            one_based(spec, kind, r, phi, t)?
        }
        _ => from_recurrence(spec, kind, r, phi, t)?,
    };
    let (l, h) = (opts.length, opts.hbar);
    let two = T::lit(2.0);
    let sqrt2 = T::SQRT_2();
    let [c1, s1] = sums.first;
    let second = prefactor * sums.second;
    let diagonal = sums.diagonal;
    ExpectationSet::new(
        sqrt2 * l * prefactor * c1,
        sqrt2 * h / l * prefactor * s1,
        l * l * (second + diagonal) + l * l / two,
        -(h * h) / (l * l) * (second - diagonal) + h * h / (two * l * l),
        h,
    )
}

/// Type-1, type-2 and hydrogen, summed over the label `n >= 1`.
fn one_based<T: Real>(
    spec: &SpectrumModel<T>,
    kind: StateKind,
    r: T,
    phi: T,
    t: T,
) -> Result<(T, Sums<T>)> {
    let e = |n: usize| spec.energy_at_label(n);
    let two = T::lit(2.0);
    let x = r * r;
    let id = spec.id();
    let one = T::one();

    // F_n, S_n, G_n for the GHA states
    let gha = |n: usize| -> (T, T, T) {
        let m = T::of(n);
        let odd = r.powi(2 * n as i32 - 1);
        let even = x.powi(n as i32);
        let prev = x.powi(n as i32 - 1);
        match id {
            SystemId::Type1 => (
                odd * m * (m + one).sqrt(),
                even * m * ((m + one) * (m + two)).sqrt(),
                prev * m * (m - one),
            ),
            SystemId::Type2 => (
                odd * m * (m + one) * m.sqrt(),
                even * m * (m + two) * (m * (m + one)).sqrt(),
                prev * m * m * (m - one),
            ),
            _ => (
                two * m * m * (m + one) * odd / (m + two).sqrt(),
                two * m * m * (m + two) * (m + two).sqrt() * even / (m + T::lit(3.0)).sqrt(),
                two * m * m * m * (m - one) * prev / (m + one),
            ),
        }
    };

    let (prefactor, diagonal_sum) = match kind {
        StateKind::Gha => {
            let n = closed_form_normalization(spec, kind, r)?;
            let g = sum_terms(1, None, |n| {
                let (_, _, g) = gha(n);
                Ok((g, [g]))
            })?[0];
            (n * n, g * n * n)
        }
        // e^{-r^2} sum_{n>=1} (n-1) r^{2(n-1)}/(n-1)! = r^2
        StateKind::Linear => ((-x).exp(), x),
    };

    let linear = |n: usize| -> (T, T) {
        // r^{2n-1}/(n-1)! and r^{2n}/(n-1)!
        let mut fact = one;
        for k in 2..n {
            fact = fact * T::of(k);
        }
        (r.powi(2 * n as i32 - 1) / fact, x.powi(n as i32) / fact)
    };

    let coeff = |n: usize| match kind {
        StateKind::Gha => {
            let (f, s, _) = gha(n);
            (f, s)
        }
        StateKind::Linear => linear(n),
    };

    let first = sum_terms(1, None, |n| {
        let (f, _) = coeff(n);
        let arg = (e(n)? - e(n + 1)?) * t + phi;
        let [c, s] = cos_sin(arg);
        Ok((f, [f * c, f * s]))
    })?;
    let second = sum_terms(1, None, |n| {
        let (_, s) = coeff(n);
        let arg = (e(n)? - e(n + 2)?) * t + two * phi;
        Ok((s, [s * arg.cos()]))
    })?[0];
    Ok((
        prefactor,
        Sums {
            first,
            second,
            diagonal: diagonal_sum,
        },
    ))
}

/// The finite Morse sums. `ln(n! prod_{i=1}^n (2p - i))` is accumulated
/// in log form so large `p` stays finite.
fn morse<T: Real>(
    spec: &SpectrumModel<T>,
    r: T,
    phi: T,
    t: T,
    bounds: MorseSummation,
) -> Result<(T, Sums<T>)> {
    let p = spec.morse_p().expect("morse has p");
    let n_max = spec.max_level().expect("morse has n_max");
    let two = T::lit(2.0);
    let mut log_w = vec![T::zero(); n_max + 2];
    for n in 1..n_max + 2 {
        log_w[n] = log_w[n - 1] + (T::of(n) * (two * p - T::of(n))).abs().ln();
    }
    let norm = closed_form_normalization(spec, StateKind::Gha, r)?;
    let ln_r = r.ln();
    let power = |k: usize| if k == 0 { T::one() } else { (T::of(k) * ln_r).exp() };
    let f = |n: usize| {
        power(2 * n + 1) * T::of(n + 1).sqrt() * (-(log_w[n] + log_w[n + 1]) / two).exp()
    };
    let s = |n: usize| {
        power(2 * n + 2)
            * (T::of(n + 1) * T::of(n + 2)).sqrt()
            * (-(log_w[n] + log_w[n + 2]) / two).exp()
    };
    let g = |n: usize| T::of(n) * power(2 * n) * (-log_w[n]).exp();

    let (first_lo, first_hi, second_lo, second_hi) = match bounds {
        MorseSummation::Printed => (1, n_max as isize - 1, 1, n_max as isize - 2),
        MorseSummation::Resolved => (0, n_max as isize - 2, 0, n_max as isize - 3),
    };
    let range = |lo: usize, hi: isize| -> Vec<usize> {
        if hi < lo as isize {
            Vec::new()
        } else {
            (lo..=hi as usize).collect()
        }
    };
    let pn = |n: usize| T::of(n) - p;
    let mut first = [T::zero(); 2];
    for n in range(first_lo, first_hi) {
        let [c, si] = cos_sin((two * pn(n) + T::one()) * t + phi);
        first[0] = first[0] + f(n) * c;
        first[1] = first[1] + f(n) * si;
    }
    let mut second = T::zero();
    for n in range(second_lo, second_hi) {
        second = second + s(n) * (T::lit(4.0) * (pn(n) + T::one()) * t + two * phi).cos();
    }
    let diagonal: T = (1..n_max).map(g).sum();
    let prefactor = norm * norm;
    Ok((
        prefactor,
        Sums {
            first,
            second,
            diagonal: prefactor * diagonal,
        },
    ))
}

/// Harmonic, q-deformed and square-well: coefficients from the amplitude
/// moduli `|a_k|` (`a_{k+1} = a_k r / N_k`, or `r / sqrt(k+1)` for linear
/// states), normalized by their own sum.
fn from_recurrence<T: Real>(
    spec: &SpectrumModel<T>,
    kind: StateKind,
    r: T,
    phi: T,
    t: T,
) -> Result<(T, Sums<T>)> {
    let step = |k: usize| -> Result<T> {
        match kind {
            StateKind::Gha => {
                let nk = spec.ladder_coefficient(k)?;
                if nk == T::zero() {
                    return Err(GhaError::DegenerateSpectrum { level: k });
                }
                Ok(r / nk)
            }
            StateKind::Linear => Ok(r / T::of(k + 1).sqrt()),
        }
    };
    // amplitudes until the weight tail is negligible, plus two guard levels
    let mut amps = vec![T::one()];
    let mut weight = T::one();
    loop {
        let k = amps.len();
        if k > MAX_DIM {
            return Err(GhaError::Convergence { cap: MAX_DIM });
        }
        let next = amps[k - 1] * step(k - 1)?;
        amps.push(next);
        let w = next * next;
        weight = weight + w;
        let ratio = if amps[k - 1] == T::zero() { T::zero() } else { w / (amps[k - 1] * amps[k - 1]) };
        if k >= 3 && ratio < T::one() && w * ratio / (T::one() - ratio) <= T::lit(TAIL_BOUND) * weight {
            break;
        }
    }
    for _ in 0..2 {
        let k = amps.len();
        let next = amps[k - 1] * step(k - 1)?;
        amps.push(next);
    }
    let used = amps.len() - 2;
    let prefactor = T::one() / amps[..used].iter().map(|&a| a * a).sum::<T>();
    let e = |k: usize| spec.energy(k);
    let two = T::lit(2.0);
    let mut first = [T::zero(); 2];
    let mut second = T::zero();
    let mut diagonal = T::zero();
    for k in 0..used {
        let f = T::of(k + 1).sqrt() * amps[k] * amps[k + 1];
        let [c, s] = cos_sin((e(k)? - e(k + 1)?) * t + phi);
        first[0] = first[0] + f * c;
        first[1] = first[1] + f * s;
        let sk = (T::of(k + 1) * T::of(k + 2)).sqrt() * amps[k] * amps[k + 2];
        second = second + sk * ((e(k)? - e(k + 2)?) * t + two * phi).cos();
        diagonal = diagonal + T::of(k) * amps[k] * amps[k];
    }
    Ok((
        prefactor,
        Sums {
            first,
            second,
            diagonal: prefactor * diagonal,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_rep;
    use crate::coherent::system_coherent_state;
    use crate::dynamics::{evolve, expectations_oracle, oracle_dim, uncertainty};

    fn oracle(spec: &SpectrumModel<f64>, kind: StateKind, r: f64, phi: f64, t: f64) -> ExpectationSet<f64> {
        let s = system_coherent_state(spec, kind, r, phi, None).unwrap();
        let rep = build_rep(spec, oracle_dim(spec, s.dim())).unwrap();
        expectations_oracle(&evolve(&s, spec, t).unwrap(), &rep).unwrap()
    }

    #[test]
    fn vacuum_limit() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let es = expectations_series(&spec, StateKind::Gha, 0.0, 0.0, 4.0, &SeriesOptions::default()).unwrap();
        assert_eq!(es.mean_xi, 0.0);
        assert!((uncertainty(&es) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matches_oracle_at_sample_points() {
        let opts = SeriesOptions::default();
        let cases = [
            (SpectrumModel::<f64>::type1(1.0).unwrap(), StateKind::Gha),
            (SpectrumModel::type1(1.0).unwrap(), StateKind::Linear),
            (SpectrumModel::type2(1.0).unwrap(), StateKind::Gha),
            (SpectrumModel::hydrogen(1.0).unwrap(), StateKind::Gha),
            (SpectrumModel::hydrogen(1.0).unwrap(), StateKind::Linear),
            (SpectrumModel::morse(7.59).unwrap(), StateKind::Gha),
            (SpectrumModel::square_well(4.0).unwrap(), StateKind::Gha),
            (SpectrumModel::q_deformed(0.5).unwrap(), StateKind::Linear),
        ];
        for (spec, kind) in &cases {
            for &(r, phi, t) in &[(0.1, 0.0, 0.0), (0.5, 0.7, 3.3), (0.8, -1.2, 41.0)] {
                let a = expectations_series(spec, *kind, r, phi, t, &opts).unwrap();
                let b = oracle(spec, *kind, r, phi, t);
                assert!(a.max_rel_diff(&b) <= 1e-9, "{} {kind} r={r}: {a:?} vs {b:?}", spec.id());
            }
        }
    }

    #[test]
    fn printed_morse_bounds_differ() {
        let spec = SpectrumModel::<f64>::morse(7.59).unwrap();
        let printed = SeriesOptions {
            morse: MorseSummation::Printed,
            ..SeriesOptions::default()
        };
        let a = expectations_series(&spec, StateKind::Gha, 1.0, 0.0, 0.2, &printed).unwrap();
        let b = oracle(&spec, StateKind::Gha, 1.0, 0.0, 0.2);
        assert!(a.max_rel_diff(&b) > 1e-3);
    }

    #[test]
    fn radius_enforced() {
        let spec = SpectrumModel::<f64>::hydrogen(1.0).unwrap();
        assert!(expectations_series(&spec, StateKind::Gha, 1.0, 0.0, 0.0, &SeriesOptions::default()).is_err());
    }
}
