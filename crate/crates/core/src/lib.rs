//! Thermodynamic formalism on subshifts of finite type.
//!
//! The crate computes topological pressure of locally constant potentials,
//! exhausts the non-dense orbit set `E(z0)` by cylinder-avoidance subshifts,
//! solves Bowen's equation for BS/Hausdorff dimension of coded interval maps,
//! and replays the Moran-type fractal construction that certifies the lower
//! bound `P(E(z0), phi) >= C - 4 eta` on finite levels.
//!
//! Everything is exact or certified: symbolic balls are cylinders, pressures
//! come with Collatz-Wielandt brackets, and map geometry is rational.

pub mod avoidance;
pub mod dimension;
mod error;
mod graph;
pub mod maps;
pub mod moran;
pub mod potential;
pub mod pressure;
pub mod symbolic;

pub use error::{Error, Result};
pub use potential::Potential;
pub use pressure::{PressureMethod, PressureResult};
pub use symbolic::{EventuallyPeriodicPoint, Sft, Symbol, Word};
