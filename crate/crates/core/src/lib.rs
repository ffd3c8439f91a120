//! Tomographic sets of rank-one projectors over finite and truncated Hilbert
//! spaces: tomograms, dual (Gram-Schmidt) operators and reconstruction.

pub mod config;
pub mod continuous;
pub mod demo;
pub mod discrete;
pub mod error;
pub mod frame;
pub mod generators;
pub mod io;
pub mod operator_space;
pub mod quadrature;
pub mod random;
pub mod spin;

pub use error::{Result, TomographyError};
pub use frame::{dual_frame, orthonormalize, reconstruct, tomogram, DualFrame, Label, TomogramTable, TomographicSet};
pub use operator_space::{Operator, RankOneProjector, StateVector, TOL_FINITE, TOL_TRUNC};
