//! Generalized Heisenberg algebra systems.
//!
//! A system is selected by its characteristic function `f`, which links
//! successive energy levels through `e_{n+1} = f(e_n)`. From a
//! [`SpectrumModel`] the crate builds truncated Fock representations of
//! the generators `J0, A, A^dag` and of the canonical pair `xi, rho`,
//! constructs linear and nonlinear coherent states, and follows the
//! uncertainty product `dxi drho` in time along two independent routes:
//! direct matrix expectation values and the closed-form series.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which the quoted tolerances
//! assume.

// NaN must fail parameter checks, so guards are written `!(x > 0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod coherent;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod matrix;
pub mod scalar;
pub mod spectrum;

pub use error::{GhaError, Result};
pub use scalar::Real;
pub use spectrum::{Labeling, SystemId};

pub type Spectrum = spectrum::SpectrumModel<f64>;
pub type MorsePhysical = spectrum::MorsePhysicalParams<f64>;
pub type Rep = algebra::AlgebraRep<f64>;
pub type Report = algebra::AlgebraReport<f64>;
pub type Mat = matrix::Matrix<f64>;
pub type State = coherent::FockState<f64>;
pub type Expectations = dynamics::ExpectationSet<f64>;
pub type Trace = dynamics::UncertaintyTrace<f64>;
