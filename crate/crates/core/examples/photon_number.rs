//! Photon-number tomography with the one-parameter family of kernels.

use hilbert_tomography::continuous::fock::FockSpace;
use hilbert_tomography::continuous::photon::{photon_identity_check, photon_reconstruct, photon_tomogram_table, PhotonGrid};
use hilbert_tomography::quadrature::PolarQuadrature;
use hilbert_tomography::random::random_density_on_levels;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hilbert_tomography::Result<()> {
    let n = 16;
    let radius = 4.0;
    let fock = FockSpace::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rho = random_density_on_levels(n, 4, &mut rng);
    let quad = PolarQuadrature::new(radius, 32, 32)?;

    for s in [-0.5, 0.0, 0.5] {
        let grid = PhotonGrid::new(quad.clone(), PhotonGrid::suggested_n_max(radius, n, s)?)?;
        let table = photon_tomogram_table(&rho, &fock, &grid)?;
        let back = photon_reconstruct(&table, s, &fock, &grid)?;
        let block = (back.matrix().view((0, 0), (4, 4)) - rho.matrix().view((0, 0), (4, 4)))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        println!("s = {s:>4}: n_max {:>3}, error on the support {block:.1e}", grid.n_max);
    }

    let small = FockSpace::new(6)?;
    let grid = PhotonGrid::new(PolarQuadrature::new(3.0, 24, 24)?, PhotonGrid::suggested_n_max(3.0, 6, 0.0)?)?;
    let full = photon_identity_check(0.0, &small, &grid, 3, None)?;
    let vacuum_only = photon_identity_check(0.0, &small, &grid, 3, Some(1))?;
    println!("identity on 3 levels: {:.1e}; keeping only n = 0: {:.2}", full.max_deviation, vacuum_only.max_deviation);
    Ok(())
}
