//! Coherent-state projectors from a small disk already span the truncated
//! operator space.

use hilbert_tomography::continuous::fock::{coherent_skewness, husimi_q, FockSpace};
use hilbert_tomography::Operator;
use num_complex::Complex64;

fn main() -> hilbert_tomography::Result<()> {
    let fock = FockSpace::new(4)?;
    let centre = Complex64::new(0.3, 0.2);
    for points in [12, 15, 16, 20] {
        let r = coherent_skewness(&fock, centre, 0.5, points)?;
        println!("{points:>2} points: rank {:>2} of {}, duplicate rank {:>2}, condition {:.1e}", r.rank, r.required, r.duplicate_rank, r.condition_number);
    }
    let vacuum = Operator::unit(4, 0, 0);
    println!("Q(vacuum) at the centre = {:.6}", husimi_q(&vacuum, centre, &fock)?);
    Ok(())
}
