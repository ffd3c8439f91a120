//! Spin-1/2 tomography on a Gauss-Legendre × uniform sphere quadrature.
//!
//! Run with `cargo run --example spin_tomography`.

use hilbert_tomography::random::random_hermitian;
use hilbert_tomography::spin::{spin_kernel, spin_round_trip, spin_tomogram, BlochLabel, SphereQuadrature, SpinMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hilbert_tomography::Result<()> {
    let quad = SphereQuadrature::default();
    let total: f64 = quad.weights.iter().sum();
    println!("{} nodes, weights sum to {total:.15} (4π = {:.15})", quad.len(), 4.0 * std::f64::consts::PI);

    // kernel at the north pole: (1/4π)(I + 3σ₃)
    let k = spin_kernel(BlochLabel::new(0.0, 0.0)?);
    println!("K(north) diagonal = {:.6}, {:.6}", k[(0, 0)].re, k[(1, 1)].re);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_hermitian(2, &mut rng);
    let table = spin_tomogram(&quad, &a, SpinMode::KernelWeighted)?;
    println!("first three tomogram values: {:?}", &table.real_values()[..3]);

    let report = spin_round_trip(&quad, &a)?;
    println!(
        "round trip: kernel-weighted error {:.2e}, projector-weighted error {:.2e}",
        report.kernel_weighted_error, report.projector_weighted_error
    );
    Ok(())
}
