//! The finite-level projector bundle: diagonal projectors plus four pair
//! projectors for every n < m, and exact reconstruction from them.

use hilbert_tomography::discrete::{
    hermitian_split, pair_identity_deviation, reconstruct_discrete, reconstruct_split, resolution_of_unity_discrete,
    DiscreteSetBundle,
};
use hilbert_tomography::operator_space::completeness_rank;
use hilbert_tomography::random::random_matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hilbert_tomography::Result<()> {
    let n = 8;
    let bundle = DiscreteSetBundle::new(n)?;
    let minimal = bundle.minimal_subset()?;
    println!("N = {n}: {} projectors, minimal subset of {} with rank {}", bundle.labels().len(), minimal.len(), completeness_rank(&minimal)?);
    println!("pair identities hold to {:.1e}", pair_identity_deviation(n)?);

    let full = resolution_of_unity_discrete(n, false)?;
    let diag = resolution_of_unity_discrete(n, true)?;
    println!("resolution of unity on {} matrix units: {:.1e} (diagonal terms only: {:.1e})", full.units_checked, full.max_deviation, diag.max_deviation);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = random_matrix(n, &mut rng);
    let direct = reconstruct_discrete(&bundle, &bundle.tomogram(&b)?)?;
    let (h1, h2) = hermitian_split(&b);
    let split = reconstruct_split(&bundle, &bundle.tomogram(&h1)?, &bundle.tomogram(&h2)?)?;
    println!("non-Hermitian round trip: {:.1e} directly, {:.1e} via Hermitian parts", direct.max_abs_diff(&b), split.max_abs_diff(&b));
    Ok(())
}
