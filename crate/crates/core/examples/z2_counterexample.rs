//! An irreducible two-element family that is still not tomographic.

use hilbert_tomography::generators::{diagnose, generated_projector_set, isospectral_family, z2_eigenvalues, z2_example};
use num_complex::Complex64;

fn main() -> hilbert_tomography::Result<()> {
    let beta = Complex64::new(1.0, 0.0);
    let (t0, fam) = z2_example(1.0, beta, 2.0)?;
    println!("eigenvalues {:?}", z2_eigenvalues(1.0, beta, 2.0));
    for (t, (label, _)) in isospectral_family(&t0, &fam)?.iter().zip(&fam.members) {
        println!("T[{label:?}] off-diagonal = {}", t[(0, 1)]);
    }
    let report = diagnose(&t0, &fam)?;
    let generated = generated_projector_set(&t0, &fam)?;
    println!(
        "irreducible: {}, rank {} of {} ({} projectors): {}",
        report.irreducible,
        report.completeness_rank,
        report.required_rank,
        generated.set.len(),
        if report.tomographic() { "tomographic" } else { "not tomographic" }
    );
    Ok(())
}
