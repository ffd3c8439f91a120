//! Block rotations and level swaps carry diag(1, -1, 0, ...) onto every
//! 2E⁺_nm and 2E⁻_nm, and their eigenprojectors span the operator space.

use hilbert_tomography::generators::pauli_swap_generation;

fn main() -> hilbert_tomography::Result<()> {
    for dim in 3..=6 {
        let gen = pauli_swap_generation(dim)?;
        let set = gen.generated_set()?;
        println!(
            "N = {dim}: {} unitaries, max deviation {:.1e}, rank {} of {}",
            gen.family.len(),
            gen.max_deviation()?,
            set.completeness_rank()?,
            dim * dim
        );
    }
    Ok(())
}
