use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algebra::build_rep_scaled;
use crate::coherent::{system_coherent_state, StateKind};
use crate::error::{GhaError, Result};
use crate::scalar::Real;
use crate::spectrum::{SpectrumModel, SystemId};

use super::{evolve, expectations_oracle, expectations_series, oracle_dim, uncertainty, ExpectationSet, SeriesOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    Oracle,
    Series,
    /// Oracle values, with the series evaluated alongside for comparison.
    Both,
}

impl Path {
    pub fn as_str(self) -> &'static str {
        match self {
            Path::Oracle => "oracle",
            Path::Series => "series",
            Path::Both => "both",
        }
    }
}

impl FromStr for Path {
    type Err = GhaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oracle" => Ok(Path::Oracle),
            "series" => Ok(Path::Series),
            "both" => Ok(Path::Both),
            other => Err(GhaError::InvalidParameter(format!("unknown path '{other}'"))),
        }
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Uniform grid of `points` instants from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub start: T,
    pub end: T,
    pub points: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(start: T, end: T, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(GhaError::InvalidParameter(format!("need at least 2 points, got {points}")));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(GhaError::InvalidParameter(format!(
                "time window [{start}, {end}] must be finite with end > start"
            )));
        }
        Ok(Self { start, end, points })
    }

    pub fn at(&self, i: usize) -> T {
        if i + 1 == self.points {
            return self.end;
        }
        self.start + (self.end - self.start) * T::of(i) / T::of(self.points - 1)
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.points).map(|i| self.at(i)).collect()
    }
}

impl<T: Real> Default for TimeGrid<T> {
    fn default() -> Self {
        Self {
            start: T::zero(),
            end: T::lit(100.0),
            points: 2001,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta<T> {
    pub system: SystemId,
    pub kind: StateKind,
    pub r: T,
    pub phi: T,
    /// `b`, where the spectrum has one.
    pub energy_scale: Option<T>,
    /// Morse `omega` in 1/s; the grid is then `omega t`.
    pub time_scale: Option<T>,
    /// Oracle representation size, or the state size on the series path.
    pub dim: usize,
    pub path: Path,
}

/// `dxi drho / hbar` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyTrace<T> {
    pub meta: TraceMeta<T>,
    t: Vec<T>,
    moments: Vec<ExpectationSet<T>>,
    values: Vec<T>,
    /// Per-point `max |series - oracle|` over the moments and the product.
    discrepancy: Option<Vec<T>>,
}

/// Evaluates a trace, in parallel over grid points.
pub fn trace<T: Real>(
    spec: &SpectrumModel<T>,
    kind: StateKind,
    r: T,
    phi: T,
    grid: TimeGrid<T>,
    path: Path,
    opts: &SeriesOptions<T>,
) -> Result<UncertaintyTrace<T>> {
    trace_with_dim(spec, kind, r, phi, grid, path, opts, None)
}

/// [`trace`] with the oracle state held at `dim` levels instead of the
/// adaptive truncation.
#[allow(clippy::too_many_arguments)]
pub fn trace_with_dim<T: Real>(
    spec: &SpectrumModel<T>,
    kind: StateKind,
    r: T,
    phi: T,
    grid: TimeGrid<T>,
    path: Path,
    opts: &SeriesOptions<T>,
    dim: Option<usize>,
) -> Result<UncertaintyTrace<T>> {
    let grid = TimeGrid::new(grid.start, grid.end, grid.points)?;
    let times = grid.values();
    let state = system_coherent_state(spec, kind, r, phi, dim)?;

    let oracle_moments = || -> Result<(usize, Vec<ExpectationSet<T>>)> {
        let dim = oracle_dim(spec, state.dim());
        let rep = build_rep_scaled(spec, dim.max(2), opts.length, opts.hbar)?;
        let moments = times
            .par_iter()
            .map(|&t| expectations_oracle(&evolve(&state, spec, t)?, &rep))
            .collect::<Result<Vec<_>>>()?;
        Ok((rep.dim(), moments))
    };
    let series_moments = || -> Result<Vec<ExpectationSet<T>>> {
        times
            .par_iter()
            .map(|&t| expectations_series(spec, kind, r, phi, t, opts))
            .collect()
    };

    let (dim, moments, discrepancy) = match path {
        Path::Oracle => {
            let (dim, m) = oracle_moments()?;
            (dim, m, None)
        }
        Path::Series => (state.dim(), series_moments()?, None),
        Path::Both => {
            let (dim, m) = oracle_moments()?;
            let s = series_moments()?;
            let d = m
                .iter()
                .zip(&s)
                .map(|(a, b)| a.max_abs_diff(b).max((uncertainty(a) - uncertainty(b)).abs()))
                .collect();
            (dim, m, Some(d))
        }
    };
    let values = moments.iter().map(uncertainty).collect::<Vec<_>>();
    let floor = T::lit(0.5 - 1e-9);
    if let Some(v) = values.iter().find(|&&v| v < floor) {
        log::warn!("uncertainty {v} below hbar/2");
    }
    Ok(UncertaintyTrace {
        meta: TraceMeta {
            system: spec.id(),
            kind,
            r,
            phi,
            energy_scale: spec.energy_scale(),
            time_scale: spec.time_scale(),
            dim,
            path,
        },
        t: times,
        moments,
        values,
        discrepancy,
    })
}

/// Grid extremum with a parabola through the neighbouring points.
fn refined_extremum<T: Real>(t: &[T], v: &[T], sign: T) -> (T, T) {
    let (i, _) = v
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |(bi, bv), (i, &x)| {
            if sign * x > bv {
                (i, sign * x)
            } else {
                (bi, bv)
            }
        });
    if i == 0 || i + 1 == v.len() {
        return (t[i], v[i]);
    }
    let (ym, y0, yp) = (v[i - 1], v[i], v[i + 1]);
    let curv = ym - T::lit(2.0) * y0 + yp;
    if curv == T::zero() {
        return (t[i], y0);
    }
    let h = t[i + 1] - t[i];
    let delta = (ym - yp) / (T::lit(2.0) * curv);
    let peak = y0 - (yp - ym) * (yp - ym) / (T::lit(8.0) * curv);
    (t[i] + delta * h, peak)
}

impl<T: Real> UncertaintyTrace<T> {
    pub fn t(&self) -> &[T] {
        &self.t
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn moments(&self) -> &[ExpectationSet<T>] {
        &self.moments
    }

    pub fn discrepancy(&self) -> Option<&[T]> {
        self.discrepancy.as_deref()
    }

    pub fn max_discrepancy(&self) -> Option<T> {
        self.discrepancy
            .as_ref()
            .map(|d| d.iter().fold(T::zero(), |m, &x| m.max(x)))
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `(t, value)` of the refined maximum.
    pub fn peak_max(&self) -> (T, T) {
        refined_extremum(&self.t, &self.values, T::one())
    }

    pub fn peak_min(&self) -> (T, T) {
        let (t, v) = refined_extremum(&self.t, &self.values, -T::one());
        (t, v)
    }

    pub fn max_value(&self) -> T {
        self.peak_max().1
    }

    pub fn min_value(&self) -> T {
        self.peak_min().1
    }

    /// Largest `|value - 1/2|` after refinement.
    pub fn max_deviation(&self) -> T {
        let half = T::lit(0.5);
        (self.max_value() - half).max(half - self.min_value())
    }

    /// One row per grid point, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mean_xi,mean_rho,var_xi,var_rho,uncertainty");
        if self.discrepancy.is_some() {
            out.push_str(",discrepancy");
        }
        out.push('\n');
        for (i, (t, m)) in self.t.iter().zip(&self.moments).enumerate() {
            let _ = write!(
                out,
                "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
                t,
                m.mean_xi,
                m.mean_rho,
                m.var_xi(),
                m.var_rho(),
                self.values[i]
            );
            if let Some(d) = &self.discrepancy {
                let _ = write!(out, ",{:.11e}", d[i]);
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
        assert_eq!(g.values(), vec![0.0, 0.5, 1.0]);
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
    }

    #[test]
    fn vacuum_trace_is_flat() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let tr = trace(
            &spec,
            StateKind::Gha,
            0.0,
            0.0,
            TimeGrid::new(0.0, 10.0, 11).unwrap(),
            Path::Both,
            &SeriesOptions::default(),
        )
        .unwrap();
        assert!(tr.values().iter().all(|&v| (v - 0.5).abs() < 1e-15));
        assert!(tr.max_discrepancy().unwrap() < 1e-15);
        let csv = tr.to_csv();
        assert!(csv.starts_with("t,mean_xi,mean_rho,var_xi,var_rho,uncertainty,discrepancy\n"));
        assert_eq!(csv.lines().count(), 12);
    }

    #[test]
    fn near_identical_two_points() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let tr = trace(
            &spec,
            StateKind::Gha,
            0.5,
            0.0,
            TimeGrid::new(5.0 - 1e-9, 5.0, 2).unwrap(),
            Path::Oracle,
            &SeriesOptions::default(),
        )
        .unwrap();
        assert!((tr.values()[0] - tr.values()[1]).abs() < 1e-8);
    }

    #[test]
    fn parabola_refinement() {
        let t: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|&x| 1.0 - (x - 0.43) * (x - 0.43)).collect();
        let (tp, vp) = refined_extremum(&t, &v, 1.0);
        assert!((tp - 0.43).abs() < 1e-12 && (vp - 1.0).abs() < 1e-12);
    }
}
