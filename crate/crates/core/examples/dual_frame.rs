//! Gram-Schmidt duals of a random minimal tomographic set and reconstruction
//! through them.

use hilbert_tomography::operator_space::{hs_inner, operators_rank, projector_from_vector};
use hilbert_tomography::random::{random_matrix, random_state};
use hilbert_tomography::{dual_frame, reconstruct, tomogram, Label, TomographicSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hilbert_tomography::Result<()> {
    let dim = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // draw rank-one projectors until they span the operator space
    let projectors = loop {
        let ps: Vec<_> = (0..dim * dim).map(|_| projector_from_vector(random_state(dim, &mut rng).entries())).collect::<Result<_, _>>()?;
        if operators_rank(&ps)?.rank == dim * dim {
            break ps;
        }
    };
    let labels = (0..dim * dim).map(|i| Label::Index(i as u64)).collect();
    let set = TomographicSet::from_projectors(projectors, labels)?;
    let frame = dual_frame(&set)?;
    println!("minimal: {}, Gram condition number {:.3e}", frame.minimal, frame.condition_number);

    let mut worst: f64 = 0.0;
    for (i, p) in set.projectors().iter().enumerate() {
        for (l, k) in frame.duals.iter().enumerate() {
            let expected = if i == l { 1.0 } else { 0.0 };
            worst = worst.max((hs_inner(p, k)? - expected).norm());
        }
    }
    println!("max |<P_i|K_l> - δ_il| = {worst:.2e}");

    let b = random_matrix(dim, &mut rng);
    let back = reconstruct(&frame, &tomogram(&set, &b)?)?;
    println!("reconstruction error for a random non-Hermitian operator: {:.2e}", back.max_abs_diff(&b));
    Ok(())
}
