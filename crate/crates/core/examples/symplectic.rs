//! Quadrature tomograms on a position grid and inversion back to the density matrix.

use hilbert_tomography::continuous::symplectic::{
    ground_state_tomogram, symplectic_identity_check, symplectic_round_trip, symplectic_tomogram, uniform_points,
    InversionBox, PositionGrid, SymplecticLabel, Wavefunction,
};

fn main() -> hilbert_tomography::Result<()> {
    let grid = PositionGrid::default();
    let psi = Wavefunction::number_state(grid, 0)?;
    for (x, mu, nu) in [(0.5, 1.0, 0.0), (0.5, 0.6, 0.8), (-1.0, 0.3, -1.5)] {
        let l = SymplecticLabel::new(x, mu, nu)?;
        println!("T({x}, {mu}, {nu}) = {:.12} (Gaussian {:.12})", symplectic_tomogram(&psi, &l)?, ground_state_tomogram(&l));
    }

    let ys = uniform_points(3.5, 15);
    let round = symplectic_round_trip(&psi, &ys, &InversionBox::default())?;
    println!("ground state from its tomograms: fidelity {:.6}, trace {:.6}", round.fidelity, round.trace);

    let ys = uniform_points(3.0, 13);
    let wide = InversionBox { mu_max: 13.0, mu_points: 209, ..InversionBox::default() };
    let id = symplectic_identity_check(grid, [ys[4], ys[8]], 0.6, &ys, &wide)?;
    println!("smoothed identity: deviation {:.1e}, peak/far ratio {:.0}", id.max_deviation, id.peak_ratio);
    Ok(())
}
