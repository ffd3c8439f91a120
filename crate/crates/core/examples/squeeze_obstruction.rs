//! Squeezing preserves parity, so its orbit of number states never sees
//! coherences between even and odd levels.

use hilbert_tomography::generators::{common_invariant_subspace, default_squeeze_grid, squeeze_family_truncated};

fn main() -> hilbert_tomography::Result<()> {
    let n = 16;
    let fam = squeeze_family_truncated(n, &default_squeeze_grid())?;
    println!("{} squeeze operators on N = {n}", fam.family.len());
    println!("max |[S, parity]| = {:.1e}", fam.max_parity_commutator);
    println!("max |Tr(P |0><1|)| over the generated set = {:.1e}", fam.witness_max_tomogram);
    println!("completeness rank {} of {}", fam.completeness_rank()?, n * n);
    if let Some(w) = common_invariant_subspace(&fam.fiducial, &fam.family)? {
        let diag: Vec<i32> = (0..n).map(|i| w.projector[(i, i)].re.round() as i32).collect();
        println!("reducing projector of rank {} has diagonal {diag:?}", w.rank);
    }
    Ok(())
}
