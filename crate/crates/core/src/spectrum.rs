//! Energy spectra, characteristic functions and ladder coefficients.
//!
//! Every system is stored with dimensionless energies: the type-1, type-2
//! and hydrogen spectra are divided by their energy constant `b`, the Morse
//! spectrum by `hbar^2 beta^2 / 2 m_r`. The square well keeps `b` inside its
//! characteristic function `f(x) = (sqrt(x) + sqrt(b))^2`.
//!
//! Levels are always addressed by a 0-based storage index. Systems whose
//! states are conventionally labelled from 1 (type-1, type-2, hydrogen)
//! expose that through [`Labeling`] and [`SpectrumModel::energy_at_label`].

use std::fmt;
use std::str::FromStr;

use crate::error::{GhaError, Result};
use crate::scalar::Real;

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// One electronvolt in joules.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemId {
    Harmonic,
    QDeformed,
    SquareWell,
    Type1,
    Type2,
    Hydrogen,
    Morse,
    /// User supplied energy table.
    Tabulated,
}

impl SystemId {
    /// The seven analytic systems of the catalog.
    pub const CATALOG: [SystemId; 7] = [
        SystemId::Harmonic,
        SystemId::QDeformed,
        SystemId::SquareWell,
        SystemId::Type1,
        SystemId::Type2,
        SystemId::Hydrogen,
        SystemId::Morse,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::Harmonic => "harmonic",
            SystemId::QDeformed => "q-deformed",
            SystemId::SquareWell => "square-well",
            SystemId::Type1 => "type1",
            SystemId::Type2 => "type2",
            SystemId::Hydrogen => "hydrogen",
            SystemId::Morse => "morse",
            SystemId::Tabulated => "tabulated",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemId {
    type Err = GhaError;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "harmonic" => SystemId::Harmonic,
            "q-deformed" | "qdeformed" => SystemId::QDeformed,
            "square-well" | "squarewell" => SystemId::SquareWell,
            "type1" | "type-1" => SystemId::Type1,
            "type2" | "type-2" => SystemId::Type2,
            "hydrogen" => SystemId::Hydrogen,
            "morse" => SystemId::Morse,
            "tabulated" | "table" => SystemId::Tabulated,
            other => {
                return Err(GhaError::InvalidParameter(format!(
                    "unknown system '{other}'"
                )))
            }
        };
        Ok(id)
    }
}

/// Presentation label of storage index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Labeling {
    ZeroBased,
    OneBased,
}

impl Labeling {
    pub fn offset(self) -> usize {
        match self {
            Labeling::ZeroBased => 0,
            Labeling::OneBased => 1,
        }
    }

    pub fn from_offset(offset: usize) -> Result<Self> {
        match offset {
            0 => Ok(Labeling::ZeroBased),
            1 => Ok(Labeling::OneBased),
            _ => Err(GhaError::InvalidParameter(format!(
                "index offset must be 0 or 1, got {offset}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumParams<T> {
    Harmonic,
    QDeformed { q: T },
    SquareWell { b: T },
    Type1 { b: T },
    Type2 { b: T },
    Hydrogen { b: T },
    /// `time_scale` is `omega = hbar beta^2 / 2 m_r` in 1/s when the model
    /// was derived from physical constants.
    Morse { p: T, time_scale: Option<T> },
    Tabulated { levels: Vec<T> },
}

/// A quantum system described by its energy levels and characteristic
/// function. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumModel<T> {
    params: SpectrumParams<T>,
    ground_energy: T,
    max_level: Option<usize>,
}

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(GhaError::InvalidParameter(format!(
            "{name} must be finite and positive, got {v}"
        )))
    }
}

impl<T: Real> SpectrumModel<T> {
    pub fn harmonic() -> Self {
        Self {
            params: SpectrumParams::Harmonic,
            ground_energy: T::zero(),
            max_level: None,
        }
    }

    /// Deformed oscillator with `f(x) = q x + 1`.
    pub fn q_deformed(q: T) -> Result<Self> {
        check_positive("q", q)?;
        Ok(Self {
            params: SpectrumParams::QDeformed { q },
            ground_energy: T::zero(),
            max_level: None,
        })
    }

    /// Infinite square well, `e_n = b (n+1)^2`.
    pub fn square_well(b: T) -> Result<Self> {
        check_positive("b", b)?;
        Ok(Self {
            params: SpectrumParams::SquareWell { b },
            ground_energy: b,
            max_level: None,
        })
    }

    /// `e_n = n / (n+1)` in units of `b`.
    pub fn type1(b: T) -> Result<Self> {
        check_positive("b", b)?;
        Ok(Self {
            params: SpectrumParams::Type1 { b },
            ground_energy: T::zero(),
            max_level: None,
        })
    }

    /// `e_n = n^2 / (n+1)^2` in units of `b`.
    pub fn type2(b: T) -> Result<Self> {
        check_positive("b", b)?;
        Ok(Self {
            params: SpectrumParams::Type2 { b },
            ground_energy: T::zero(),
            max_level: None,
        })
    }

    /// `e = -1/n^2` (n >= 1) in units of the ionisation energy `b`; storage
    /// index `k` holds principal number `k + 1`.
    pub fn hydrogen(b: T) -> Result<Self> {
        check_positive("b", b)?;
        Ok(Self {
            params: SpectrumParams::Hydrogen { b },
            ground_energy: -T::one(),
            max_level: None,
        })
    }

    /// Morse oscillator `e_n = -(p - n)^2`, `n = 0..=floor(p)`.
    pub fn morse(p: T) -> Result<Self> {
        let n_max = Self::morse_levels(p)?;
        Self::morse_truncated(p, n_max)
    }

    /// Morse spectrum whose ladder wraps at `n_max <= floor(p)` instead of
    /// at the last bound level.
    pub fn morse_truncated(p: T, n_max: usize) -> Result<Self> {
        let top = Self::morse_levels(p)?;
        if n_max < 1 || n_max > top {
            return Err(GhaError::InvalidParameter(format!(
                "n_max must lie in 1..={top} for p = {p}, got {n_max}"
            )));
        }
        Ok(Self {
            params: SpectrumParams::Morse {
                p,
                time_scale: None,
            },
            ground_energy: -(p * p),
            max_level: Some(n_max),
        })
    }

    fn morse_levels(p: T) -> Result<usize> {
        check_positive("p", p)?;
        if p.fract() == T::zero() {
            return Err(GhaError::DegenerateMorse(p.to_f64().unwrap_or(f64::NAN)));
        }
        if p < T::one() {
            return Err(GhaError::InvalidParameter(format!(
                "p = {p} supports a single bound level; at least two are required"
            )));
        }
        Ok(p.floor().to_usize().expect("p fits in usize"))
    }

    /// User supplied table `e_0, e_1, ...`; `f` is tabulated on the orbit,
    /// `f(e_n) = e_{n+1}`.
    pub fn tabulated(levels: Vec<T>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(GhaError::InvalidParameter(
                "an energy table needs at least two levels".into(),
            ));
        }
        if let Some(bad) = levels.iter().find(|e| !e.is_finite()) {
            return Err(GhaError::InvalidParameter(format!(
                "energy table contains non-finite value {bad}"
            )));
        }
        let e0 = levels[0];
        for (n, &e) in levels.iter().enumerate().skip(1) {
            if e < e0 {
                return Err(GhaError::NegativeGap {
                    level: n - 1,
                    gap: (e - e0).to_f64().unwrap_or(f64::NAN),
                });
            }
            if levels[..n].contains(&e) {
                return Err(GhaError::InvalidParameter(format!(
                    "energy {e} appears twice; f would not be a function"
                )));
            }
        }
        Ok(Self {
            ground_energy: e0,
            params: SpectrumParams::Tabulated { levels },
            max_level: None,
        })
    }

    /// Records the dimensionful time scale of a Morse model.
    pub fn with_time_scale(mut self, omega: T) -> Result<Self> {
        check_positive("time scale", omega)?;
        match &mut self.params {
            SpectrumParams::Morse { time_scale, .. } => {
                *time_scale = Some(omega);
                Ok(self)
            }
            _ => Err(GhaError::WrongSystem {
                operation: "with_time_scale",
                system: self.id(),
            }),
        }
    }

    pub fn id(&self) -> SystemId {
        match self.params {
            SpectrumParams::Harmonic => SystemId::Harmonic,
            SpectrumParams::QDeformed { .. } => SystemId::QDeformed,
            SpectrumParams::SquareWell { .. } => SystemId::SquareWell,
            SpectrumParams::Type1 { .. } => SystemId::Type1,
            SpectrumParams::Type2 { .. } => SystemId::Type2,
            SpectrumParams::Hydrogen { .. } => SystemId::Hydrogen,
            SpectrumParams::Morse { .. } => SystemId::Morse,
            SpectrumParams::Tabulated { .. } => SystemId::Tabulated,
        }
    }

    pub fn params(&self) -> &SpectrumParams<T> {
        &self.params
    }

    pub fn ground_energy(&self) -> T {
        self.ground_energy
    }

    /// `n_max` of a nilpotent (Morse) spectrum.
    pub fn max_level(&self) -> Option<usize> {
        self.max_level
    }

    /// Highest level `energy` accepts, if any.
    pub fn highest_level(&self) -> Option<usize> {
        match &self.params {
            SpectrumParams::Tabulated { levels } => Some(levels.len() - 1),
            _ => self.max_level,
        }
    }

    pub fn morse_p(&self) -> Option<T> {
        match self.params {
            SpectrumParams::Morse { p, .. } => Some(p),
            _ => None,
        }
    }

    /// `omega = hbar beta^2 / 2 m_r` (1/s) for Morse models built from
    /// physical constants.
    pub fn time_scale(&self) -> Option<T> {
        match self.params {
            SpectrumParams::Morse { time_scale, .. } => time_scale,
            _ => None,
        }
    }

    /// The constant `b` that sets the energy unit, where there is one.
    pub fn energy_scale(&self) -> Option<T> {
        match self.params {
            SpectrumParams::SquareWell { b }
            | SpectrumParams::Type1 { b }
            | SpectrumParams::Type2 { b }
            | SpectrumParams::Hydrogen { b } => Some(b),
            _ => None,
        }
    }

    /// Labelling under which the system's states are usually written.
    pub fn natural_labeling(&self) -> Labeling {
        match self.id() {
            SystemId::Type1 | SystemId::Type2 | SystemId::Hydrogen => Labeling::OneBased,
            _ => Labeling::ZeroBased,
        }
    }

    /// Modulus beyond which the coherent state series diverges
    /// (`lim N_n^2` for saturating spectra).
    pub fn coherent_radius(&self) -> Option<T> {
        match self.params {
            SpectrumParams::Type1 { .. }
            | SpectrumParams::Type2 { .. }
            | SpectrumParams::Hydrogen { .. } => Some(T::one()),
            SpectrumParams::QDeformed { q } if q < T::one() => {
                Some((T::one() / (T::one() - q)).sqrt())
            }
            _ => None,
        }
    }

    fn check_level(&self, n: usize) -> Result<()> {
        match self.highest_level() {
            Some(max) if n > max => Err(GhaError::LevelOutOfRange { level: n, max }),
            _ => Ok(()),
        }
    }

    /// Dimensionless energy of storage level `n`.
    pub fn energy(&self, n: usize) -> Result<T> {
        self.check_level(n)?;
        let x = T::of(n);
        let one = T::one();
        Ok(match &self.params {
            SpectrumParams::Harmonic => x,
            SpectrumParams::QDeformed { q } => {
                if *q == one {
                    x
                } else {
                    // (1 - q^n) / (1 - q) without cancellation near q = 1
                    let lq = q.ln();
                    (x * lq).exp_m1() / lq.exp_m1()
                }
            }
            SpectrumParams::SquareWell { b } => *b * (x + one) * (x + one),
            SpectrumParams::Type1 { .. } => x / (x + one),
            SpectrumParams::Type2 { .. } => {
                let s = x / (x + one);
                s * s
            }
            SpectrumParams::Hydrogen { .. } => -one / ((x + one) * (x + one)),
            SpectrumParams::Morse { p, .. } => -(*p - x) * (*p - x),
            SpectrumParams::Tabulated { levels } => levels[n],
        })
    }

    /// Energy of the state presented with label `label`.
    ///
    /// Type-1 and type-2 formulas are indexed by the label itself; hydrogen
    /// label `n >= 1` is storage level `n - 1`.
    pub fn energy_at_label(&self, label: usize) -> Result<T> {
        match self.id() {
            SystemId::Hydrogen => {
                if label == 0 {
                    return Err(GhaError::InvalidParameter(
                        "hydrogen labels start at n = 1".into(),
                    ));
                }
                self.energy(label - 1)
            }
            _ => self.energy(label),
        }
    }

    fn domain(&self, x: T) -> GhaError {
        GhaError::Domain {
            system: self.id(),
            x: x.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// The analytic characteristic map `f`, without the nilpotent wrap.
    pub fn characteristic_fn(&self, x: T) -> Result<T> {
        let one = T::one();
        let two = one + one;
        match &self.params {
            SpectrumParams::Harmonic => Ok(x + one),
            SpectrumParams::QDeformed { q } => Ok(*q * x + one),
            SpectrumParams::SquareWell { b } => {
                if x < T::zero() {
                    return Err(self.domain(x));
                }
                let s = x.sqrt() + b.sqrt();
                Ok(s * s)
            }
            SpectrumParams::Type1 { .. } => {
                if x >= two {
                    return Err(self.domain(x));
                }
                Ok(one / (two - x))
            }
            SpectrumParams::Type2 { .. } => {
                if x < T::zero() || x >= two * two {
                    return Err(self.domain(x));
                }
                let d = two - x.sqrt();
                Ok(one / (d * d))
            }
            SpectrumParams::Hydrogen { .. } => {
                if x > T::zero() {
                    return Err(self.domain(x));
                }
                let d = one + (-x).sqrt();
                Ok(x / (d * d))
            }
            SpectrumParams::Morse { .. } => {
                if x > T::zero() {
                    return Err(self.domain(x));
                }
                Ok(x + two * (-x).sqrt() - one)
            }
            SpectrumParams::Tabulated { levels } => {
                let tol = T::lit(1e-12) * (one + x.abs());
                levels
                    .iter()
                    .position(|&e| (e - x).abs() <= tol)
                    .filter(|&n| n + 1 < levels.len())
                    .map(|n| levels[n + 1])
                    .ok_or_else(|| self.domain(x))
            }
        }
    }

    /// `f(e_n)`, with `f(e_{n_max}) = e_0` for nilpotent spectra.
    pub fn next_energy(&self, n: usize) -> Result<T> {
        self.check_level(n)?;
        match &self.params {
            SpectrumParams::Morse { .. } if Some(n) == self.max_level => Ok(self.ground_energy),
            SpectrumParams::Tabulated { levels } => {
                levels
                    .get(n + 1)
                    .copied()
                    .ok_or(GhaError::LevelOutOfRange {
                        level: n + 1,
                        max: levels.len() - 1,
                    })
            }
            _ => self.characteristic_fn(self.energy(n)?),
        }
    }

    /// `N_n = sqrt(f(e_n) - e_0)`, the matrix element of `A^dag` between
    /// `|n>` and `|n+1>`.
    pub fn ladder_coefficient(&self, n: usize) -> Result<T> {
        let top = match &self.params {
            SpectrumParams::Tabulated { levels } => Some(levels.len() - 2),
            _ => self.max_level.map(|m| m - 1),
        };
        if let Some(max) = top {
            if n > max {
                return Err(GhaError::LevelOutOfRange { level: n, max });
            }
        }
        let gap = self.next_energy(n)? - self.ground_energy;
        if gap < T::zero() {
            return Err(GhaError::NegativeGap {
                level: n,
                gap: gap.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(gap.sqrt())
    }

    /// `f^(n)(e_0)` by repeated application of the characteristic map.
    pub fn iterate_characteristic(&self, n: usize) -> Result<T> {
        self.check_level(n)?;
        let mut x = self.ground_energy;
        for _ in 0..n {
            x = self.characteristic_fn(x)?;
        }
        Ok(x)
    }

    /// Smallest `m >= 1` with `(A^dag)^m = 0`: `n_max + 1` for Morse.
    pub fn nilpotency_index(&self) -> Option<usize> {
        self.max_level.map(|m| m + 1)
    }
}

/// Physical constants of a Morse oscillator, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorsePhysicalParams<T> {
    /// Inverse width, 1/m.
    pub beta: T,
    /// Well depth, J.
    pub v0: T,
    /// Reduced mass, kg.
    pub reduced_mass: T,
    /// J s.
    pub hbar: T,
}

/// Direct replacements for quantities derived from [`MorsePhysicalParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseOverrides<T> {
    pub nu: Option<T>,
    pub p: Option<T>,
    pub n_max: Option<usize>,
}

impl<T> Default for MorseOverrides<T> {
    fn default() -> Self {
        Self {
            nu: None,
            p: None,
            n_max: None,
        }
    }
}

impl<T: Real> MorsePhysicalParams<T> {
    pub fn new(beta: T, v0: T, reduced_mass: T, hbar: T) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("V0", v0)?;
        check_positive("reduced mass", reduced_mass)?;
        check_positive("hbar", hbar)?;
        Ok(Self {
            beta,
            v0,
            reduced_mass,
            hbar,
        })
    }

    /// Takes the well depth in eV and uses the SI value of hbar.
    pub fn from_ev(beta: T, v0_ev: T, reduced_mass: T) -> Result<Self> {
        Self::new(
            beta,
            v0_ev * T::lit(ELECTRON_VOLT),
            reduced_mass,
            T::lit(HBAR_SI),
        )
    }

    /// O2 constants: beta = 2.78e10 1/m, V0 = 5.211 eV, m_r = 1.33e-26 kg.
    pub fn oxygen() -> Self {
        Self::from_ev(T::lit(2.78e10), T::lit(5.211), T::lit(1.33e-26))
            .expect("valid O2 constants")
    }

    /// `nu = sqrt(8 m_r V0 / (beta^2 hbar^2))`, evaluated as
    /// `2 sqrt(2 m_r) sqrt(V0) / (beta hbar)` to stay inside `f32` range.
    pub fn nu(&self) -> T {
        let two = T::lit(2.0);
        two * (two * self.reduced_mass).sqrt() * self.v0.sqrt() / (self.beta * self.hbar)
    }

    pub fn p(&self) -> T {
        (self.nu() - T::one()) / T::lit(2.0)
    }

    /// `omega = hbar beta^2 / (2 m_r)` in 1/s; dimensionless Morse time is
    /// `omega t`.
    pub fn time_scale(&self) -> T {
        self.hbar * self.beta * self.beta / (T::lit(2.0) * self.reduced_mass)
    }

    /// `hbar^2 beta^2 / 2 m_r` in J.
    pub fn energy_unit(&self) -> T {
        self.hbar * self.time_scale()
    }
}

/// Builds the Morse spectrum of a molecule: `p = (nu - 1)/2`,
/// `n_max = floor(p)`, with the physical time scale attached.
pub fn morse_from_physical<T: Real>(phys: &MorsePhysicalParams<T>) -> Result<SpectrumModel<T>> {
    morse_from_physical_with(phys, &MorseOverrides::default())
}

/// As [`morse_from_physical`], with `nu`, `p` or `n_max` replaced. An
/// `n_max` override wraps the ladder at that level while keeping `p`.
pub fn morse_from_physical_with<T: Real>(
    phys: &MorsePhysicalParams<T>,
    overrides: &MorseOverrides<T>,
) -> Result<SpectrumModel<T>> {
    let nu = overrides.nu.unwrap_or_else(|| phys.nu());
    if !(nu > T::one()) {
        return Err(GhaError::InvalidParameter(format!(
            "nu = {nu} must exceed 1 for a bound Morse state"
        )));
    }
    let p = overrides.p.unwrap_or((nu - T::one()) / T::lit(2.0));
    let model = match overrides.n_max {
        Some(n_max) => SpectrumModel::morse_truncated(p, n_max)?,
        None => SpectrumModel::morse(p)?,
    };
    model.with_time_scale(phys.time_scale())
}

/// Summary printed by `morse-info`.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseReport<T> {
    pub nu: Option<T>,
    pub p: T,
    pub n_max: usize,
    pub nilpotency_index: usize,
    pub levels: Vec<T>,
    pub time_scale: Option<T>,
    pub energy_unit: Option<T>,
}

impl<T: Real> MorseReport<T> {
    pub fn new(spec: &SpectrumModel<T>, phys: Option<&MorsePhysicalParams<T>>) -> Result<Self> {
        let (p, n_max) = match (spec.morse_p(), spec.max_level()) {
            (Some(p), Some(n)) => (p, n),
            _ => {
                return Err(GhaError::WrongSystem {
                    operation: "morse report",
                    system: spec.id(),
                })
            }
        };
        let levels = (0..=n_max).map(|n| spec.energy(n)).collect::<Result<_>>()?;
        Ok(Self {
            nu: Some(T::lit(2.0) * p + T::one()),
            p,
            n_max,
            nilpotency_index: n_max + 1,
            levels,
            time_scale: spec.time_scale(),
            energy_unit: phys.map(|ph| ph.energy_unit()),
        })
    }
}

impl<T: Real> fmt::Display for MorseReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(nu) = self.nu {
            writeln!(f, "nu               = {nu:.6}")?;
        }
        writeln!(f, "p                = {:.6}", self.p)?;
        writeln!(f, "n_max            = {}", self.n_max)?;
        writeln!(f, "nilpotency index = {}", self.nilpotency_index)?;
        match self.time_scale {
            Some(w) => writeln!(f, "omega            = {w:.6e} 1/s")?,
            None => writeln!(f, "omega            = (dimensionless time only)")?,
        }
        writeln!(f, "levels:")?;
        writeln!(f, "  n  epsilon_n{}", if self.energy_unit.is_some() { "        E_n [eV]" } else { "" })?;
        for (n, e) in self.levels.iter().enumerate() {
            match self.energy_unit {
                Some(u) => writeln!(
                    f,
                    "{n:>3}  {e:>14.6}  {:>14.6}",
                    *e * u / T::lit(ELECTRON_VOLT)
                )?,
                None => writeln!(f, "{n:>3}  {e:>14.6}")?,
            }
        }
        Ok(())
    }
}
