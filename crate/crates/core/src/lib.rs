//! Dressed coherent states in finite quantum systems.
//!
//! The crate works in the `Z(d) x Z(d)` phase space of a `d`-dimensional
//! Hilbert space: displacement operators, coherent states built from a
//! fiducial vector, rank-`n` coherent projectors `Π(A)` onto aggregations of
//! coherent states, and the Shapley dressing `Π(i) -> σ(i)` that turns the
//! bare coherent projectors into coherent density matrices. The same
//! dressing works for any total set of states.
//!
//! On top of that sit the classical cooperative-game tools the dressing is
//! modelled on (characteristic functions, Möbius transforms, three Shapley
//! formulas) and a small phase-space analysis layer: location indices,
//! comonotonicity and coupling-constant sweeps.
//!
//! Labels are 1-based everywhere: the phase point `(α, β)` has label
//! `α·d + β + 1`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aggregation;
pub mod analysis;
pub mod coherent;
pub mod dressing;
pub mod error;
pub mod games;
pub mod operator;
pub mod phase_space;
pub mod quantum;
pub mod real;
pub mod subsets;
mod sum;

pub use aggregation::{AggregateProjector, ProjectorMemo, StateSet};
pub use analysis::{Comonotonicity, LocationIndex, SweepResult, WeightKind};
pub use coherent::{CoherentDensityFamily, CoherentFamily, FiducialVector};
pub use dressing::{DressedFamily, TotalSet};
pub use error::{Error, Result};
pub use games::{SetFunction, ShapleyVector};
pub use operator::{EigenSystem, Operator, Tolerances};
pub use phase_space::{PhasePoint, PhaseSpace};
pub use subsets::LabelSubset;

pub use num_complex::Complex64;
