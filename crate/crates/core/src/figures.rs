//! Trace bundles behind the seven uncertainty figures.
//!
//! Figures 1-6 pair the GHA and linear coherent states of type-1, type-2
//! and hydrogen at `r = 0.1, 0.5`; figure 7 is the O2 Morse oscillator at
//! `r = 0.03, 0.1` with `nu = 16.18` (so `n_max = 7`). All use `phi = 0`
//! and `b / hbar = 1`.
//!
//! Windows span at least two periods of the slowest dominant series term:
//! `t in [0, 100]` for the `b`-scaled systems (the type-1 `r = 0.5` beat
//! has period about 37.7), `omega t in [0, 10]` for O2.

use std::fmt::Write as _;

use crate::coherent::StateKind;
use crate::dynamics::{trace, Path, SeriesOptions, TimeGrid, UncertaintyTrace};
use crate::error::{GhaError, Result};
use crate::spectrum::{morse_from_physical_with, MorseOverrides, MorsePhysicalParams, SpectrumModel, SystemId};

pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 1..=7;

/// The `nu` quoted for O2, which pins seven levels above the ground state.
pub const O2_NU: f64 = 16.18;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: u32,
    pub spectrum: SpectrumModel<f64>,
    pub kind: StateKind,
    pub radii: [f64; 2],
    pub grid: TimeGrid<f64>,
    pub caption: &'static str,
}

/// O2 Morse spectrum with `nu` pinned to the quoted value and the time
/// scale taken from the molecular constants.
pub fn oxygen_spectrum() -> Result<SpectrumModel<f64>> {
    morse_from_physical_with(
        &MorsePhysicalParams::oxygen(),
        &MorseOverrides {
            nu: Some(O2_NU),
            ..MorseOverrides::default()
        },
    )
}

pub fn figure_spec(id: u32) -> Result<FigureSpec> {
    let window = TimeGrid::new(0.0, 100.0, 2001)?;
    let (spectrum, kind, caption) = match id {
        1 => (SpectrumModel::type1(1.0)?, StateKind::Gha, "type-1 system, GHA coherent states"),
        2 => (SpectrumModel::type1(1.0)?, StateKind::Linear, "type-1 system, linear coherent states"),
        3 => (SpectrumModel::type2(1.0)?, StateKind::Gha, "type-2 system, GHA coherent states"),
        4 => (SpectrumModel::type2(1.0)?, StateKind::Linear, "type-2 system, linear coherent states"),
        5 => (SpectrumModel::hydrogen(1.0)?, StateKind::Gha, "hydrogen atom, GHA coherent states"),
        6 => (SpectrumModel::hydrogen(1.0)?, StateKind::Linear, "hydrogen atom, linear coherent states"),
        7 => {
            return Ok(FigureSpec {
                id,
                spectrum: oxygen_spectrum()?,
                kind: StateKind::Gha,
                radii: [0.03, 0.1],
                grid: TimeGrid::new(0.0, 10.0, 2001)?,
                caption: "O2 Morse oscillator, GHA coherent states (time in units of 1/omega)",
            })
        }
        other => {
            return Err(GhaError::InvalidParameter(format!(
                "figure {other} does not exist; choose 1-7"
            )))
        }
    };
    Ok(FigureSpec {
        id,
        spectrum,
        kind,
        radii: [0.1, 0.5],
        grid: window,
        caption,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub file_name: String,
    pub r: f64,
    pub trace: UncertaintyTrace<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub spec: FigureSpec,
    pub curves: Vec<FigureCurve>,
}

fn system_slug(id: SystemId) -> &'static str {
    match id {
        SystemId::Morse => "o2",
        other => other.as_str(),
    }
}

pub fn render_figure(id: u32, path: Path) -> Result<FigureData> {
    let spec = figure_spec(id)?;
    let curves = spec
        .radii
        .iter()
        .map(|&r| {
            let tr = trace(
                &spec.spectrum,
                spec.kind,
                r,
                0.0,
                spec.grid,
                path,
                &SeriesOptions::default(),
            )?;
            Ok(FigureCurve {
                file_name: format!(
                    "fig{id}_{}_{}_r{r}.csv",
                    system_slug(spec.spectrum.id()),
                    spec.kind
                ),
                r,
                trace: tr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData { spec, curves })
}

impl FigureData {
    /// `key = value` description of the bundle, one `[curve]` block per file.
    pub fn manifest(&self) -> String {
        let s = &self.spec;
        let mut out = String::new();
        let _ = writeln!(out, "figure = {}", s.id);
        let _ = writeln!(out, "caption = {}", s.caption);
        let _ = writeln!(out, "system = {}", s.spectrum.id());
        let _ = writeln!(out, "kind = {}", s.kind);
        let _ = writeln!(out, "phi = 0");
        match s.spectrum.morse_p() {
            Some(p) => {
                let _ = writeln!(out, "nu = {}", 2.0 * p + 1.0);
                let _ = writeln!(out, "p = {p}");
                let _ = writeln!(out, "n_max = {}", s.spectrum.max_level().unwrap_or(0));
                if let Some(w) = s.spectrum.time_scale() {
                    let _ = writeln!(out, "omega = {w:.6e}");
                }
                let _ = writeln!(out, "time = omega t");
            }
            None => {
                let _ = writeln!(out, "b_over_hbar = 1");
                let _ = writeln!(out, "time = b t / hbar");
            }
        }
        let _ = writeln!(out, "t_start = {}", s.grid.start);
        let _ = writeln!(out, "t_end = {}", s.grid.end);
        let _ = writeln!(out, "points = {}", s.grid.points);
        for c in &self.curves {
            let _ = writeln!(out, "\n[curve]");
            let _ = writeln!(out, "file = {}", c.file_name);
            let _ = writeln!(out, "r = {}", c.r);
            let _ = writeln!(out, "path = {}", c.trace.meta.path);
            let _ = writeln!(out, "dim = {}", c.trace.meta.dim);
            let _ = writeln!(out, "min = {:.9}", c.trace.min_value());
            let _ = writeln!(out, "max = {:.9}", c.trace.max_value());
            if let Some(d) = c.trace.max_discrepancy() {
                let _ = writeln!(out, "max_discrepancy = {d:.3e}");
            }
        }
        out
    }
}
