//! Seeded random operators for tests, demos and the acceptance runs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator_space::{Operator, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    Operator::from_square(DMatrix::from_fn(dim, dim, |_, _| gaussian(rng)))
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let a = random_matrix(dim, rng);
    Operator::from_square((a.matrix() + a.matrix().adjoint()) * Complex64::new(0.5, 0.0))
}

/// Haar-distributed unit vector.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v = DVector::from_fn(dim, |_, _| gaussian(rng));
    StateVector::normalized(v).expect("gaussian vector is nonzero almost surely")
}

/// `G G† / Tr(G G†)` for a Ginibre `G` (Hilbert-Schmidt measure).
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = random_matrix(dim, rng);
    let m = g.matrix() * g.matrix().adjoint();
    let tr = m.trace();
    Operator::from_square(m / tr)
}

/// A density operator of dimension `dim` supported on the lowest `support` levels.
pub fn random_density_on_levels<R: Rng + ?Sized>(dim: usize, support: usize, rng: &mut R) -> Operator {
    let small = random_density(support, rng);
    let mut m = DMatrix::zeros(dim, dim);
    m.view_mut((0, 0), (support, support)).copy_from(small.matrix());
    Operator::from_square(m)
}
