//! Tomography over continuous label sets: symplectic quadratures on a
//! position grid, coherent states and displaced number states on a truncated
//! Fock space.

pub mod fock;
pub mod photon;
pub mod symplectic;

pub use fock::{coherent_state, displacement, husimi_q, FockSpace};
pub use photon::{photon_kernel, photon_reconstruct, photon_tomogram, PhotonGrid, PhotonLabel};
pub use symplectic::{symplectic_eigenfunction, symplectic_tomogram, PositionGrid, SymplecticLabel, Wavefunction};
