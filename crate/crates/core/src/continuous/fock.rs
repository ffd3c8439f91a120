//! Truncated single-mode Fock space: ladder operators, displacements and
//! coherent states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Result, TomographyError};
use crate::frame::{Label, TomographicSet};
use crate::operator_space::{operators_rank, projector_from_vector, Operator, StateVector};

/// The span of `|0⟩, …, |N−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockSpace {
    dim: usize,
    a: Operator,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(TomographyError::DegenerateInput(format!("Fock truncation must be at least 2, got {dim}")));
        }
        let mut a = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self { dim, a: Operator::from_square(a) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn annihilation(&self) -> &Operator {
        &self.a
    }

    pub fn creation(&self) -> Operator {
        self.a.adjoint()
    }

    pub fn number(&self) -> Operator {
        Operator::diagonal(&(0..self.dim).map(|n| n as f64).collect::<Vec<_>>())
    }

    /// `(−1)^{a†a}`.
    pub fn parity(&self) -> Operator {
        Operator::diagonal(&(0..self.dim).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>())
    }

    /// Requires `|α|² + n ≤ N/2`, the headroom below which exponentiating the
    /// truncated ladder operators stays accurate.
    pub fn check_guard(&self, alpha: Complex64, n: usize) -> Result<()> {
        let load = alpha.norm_sqr() + n as f64;
        if !load.is_finite() || load > self.dim as f64 / 2.0 {
            return Err(TomographyError::Truncation(format!(
                "|alpha|^2 + n = {load:.3} exceeds N/2 = {}",
                self.dim as f64 / 2.0
            )));
        }
        Ok(())
    }
}

/// `exp(α a† − α* a)` on the truncated space.
pub fn displacement(alpha: Complex64, fock: &FockSpace) -> Result<Operator> {
    fock.check_guard(alpha, 0)?;
    let a = fock.annihilation().matrix();
    let generator = a.adjoint() * alpha - a * alpha.conj();
    Ok(Operator::from_square(generator.exp()))
}

/// `e^{−|α|²/2} α^j / √(j!)` for `j < len`, without renormalization.
pub fn coherent_amplitudes(alpha: Complex64, len: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(len);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for j in 0..len {
        v[j] = c;
        c *= alpha / ((j + 1) as f64).sqrt();
    }
    v
}

/// `|α⟩` truncated to the space and renormalized.
pub fn coherent_state(alpha: Complex64, fock: &FockSpace) -> Result<StateVector> {
    fock.check_guard(alpha, 0)?;
    StateVector::normalized(coherent_amplitudes(alpha, fock.dim()))
}

/// `⟨α|ρ|α⟩` with the exact coherent amplitudes on the support of `ρ`.
pub fn husimi_q(rho: &Operator, alpha: Complex64, fock: &FockSpace) -> Result<f64> {
    if rho.dim() != fock.dim() {
        return Err(TomographyError::Dimension { expected: fock.dim(), found: rho.dim() });
    }
    fock.check_guard(alpha, 0)?;
    let v = coherent_amplitudes(alpha, fock.dim());
    Ok((v.adjoint() * rho.matrix() * &v)[(0, 0)].re)
}

/// `A[j, n] = ⟨j|D(α)|n⟩` for `j < rows`, `n < cols`, from the exact
/// (untruncated) displacement.
///
/// Uses `⟨j|D(α)|n⟩ = √(n!/j!) α^{j−n} e^{−|α|²/2} L_n^{(j−n)}(|α|²)` for
/// `j ≥ n` and the mirrored form with `−α*` for `j < n`. The Laguerre
/// polynomials come from the three-term recurrence in the lower index, so
/// entries keep their relative accuracy even when they are astronomically small.
pub fn displaced_number_amplitudes(alpha: Complex64, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let x = alpha.norm_sqr();
    let gauss = (-0.5 * x).exp();
    let mut amp = DMatrix::zeros(rows, cols);
    for j in 0..rows {
        // √(lo!/hi!) base^{hi−lo} e^{−x/2}, stepped outwards from the diagonal
        let mut pre = Complex64::new(gauss, 0.0);
        for n in (0..=j).rev() {
            if n < j {
                pre *= alpha / ((n + 1) as f64).sqrt();
            }
            if n < cols {
                amp[(j, n)] = pre * laguerre(n, (j - n) as f64, x);
            }
        }
        let mut pre = Complex64::new(gauss, 0.0);
        for n in j + 1..cols {
            pre *= -alpha.conj() / (n as f64).sqrt();
            amp[(j, n)] = pre * laguerre(j, (n - j) as f64, x);
        }
    }
    amp
}

/// Generalized Laguerre polynomial `L_k^{(a)}(x)`.
pub fn laguerre(k: usize, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if k == 0 {
        return prev;
    }
    for i in 1..k {
        let i = i as f64;
        let next = ((2.0 * i + 1.0 + a - x) * cur - (i + a) * prev) / (i + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `{|α_k⟩⟨α_k|}` labeled by `[Re α, Im α]`.
pub fn coherent_projector_set(alphas: &[Complex64], fock: &FockSpace) -> Result<TomographicSet> {
    let mut projectors = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        projectors.push(projector_from_vector(coherent_state(alpha, fock)?.entries())?);
    }
    let labels = alphas.iter().map(|a| Label::params(&[a.re, a.im])).collect();
    TomographicSet::from_projectors(projectors, labels)
}

/// `count` distinct points filling the disk `|α − centre| ≤ radius` along a
/// golden-angle spiral.
pub fn disk_points(centre: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| centre + Complex64::from_polar(radius * ((k as f64 + 0.5) / count as f64).sqrt(), k as f64 * golden))
        .collect()
}

/// Rank of coherent projectors clustered around one point, with and without a
/// duplicated label.
#[derive(Clone, Debug, Serialize)]
pub struct SkewnessReport {
    pub dim: usize,
    pub centre: [f64; 2],
    pub radius: f64,
    pub points: usize,
    pub rank: usize,
    pub required: usize,
    pub condition_number: f64,
    /// Rank after replacing the last point by a copy of the first.
    pub duplicate_rank: usize,
}

impl SkewnessReport {
    pub fn complete(&self) -> bool {
        self.rank == self.required
    }
}

pub fn coherent_skewness(fock: &FockSpace, centre: Complex64, radius: f64, points: usize) -> Result<SkewnessReport> {
    if points < 2 || !(radius > 0.0) {
        return Err(TomographyError::Parameter(format!("need at least two points and a positive radius, got {points}, {radius}")));
    }
    let mut alphas = disk_points(centre, radius, points);
    let set = coherent_projector_set(&alphas, fock)?;
    let full = operators_rank(set.projectors())?;
    alphas[points - 1] = alphas[0];
    let dup = coherent_projector_set(&alphas, fock)?;
    Ok(SkewnessReport {
        dim: fock.dim(),
        centre: [centre.re, centre.im],
        radius,
        points,
        rank: full.rank,
        required: fock.dim() * fock.dim(),
        condition_number: full.condition_number,
        duplicate_rank: operators_rank(dup.projectors())?.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_space::{gram_matrix, gram_rank, projector_from_vector};
    use crate::random::random_density_on_levels;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn ladder_commutator_is_identity_below_the_cutoff() {
        let f = FockSpace::new(8).unwrap();
        let comm = f.annihilation().commutator(&f.creation());
        for n in 0..7 {
            assert!((comm[(n, n)] - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((comm[(7, 7)] - c(-7.0, 0.0)).norm() < 1e-14);
        assert!(f.creation().mul(f.annihilation()).max_abs_diff(&f.number()) < 1e-14);
        assert!(FockSpace::new(1).is_err());
    }

    #[test]
    fn displacement_examples() {
        let f = FockSpace::new(24).unwrap();
        assert!(displacement(c(0.0, 0.0), &f).unwrap().max_abs_diff(&Operator::identity(24)) < 1e-15);
        let alpha = c(0.8, -0.5);
        let d = displacement(alpha, &f).unwrap();
        assert!(d.unitarity_deviation() < 1e-6);
        let back = displacement(-alpha, &f).unwrap();
        assert!(d.mul(&back).max_abs_diff(&Operator::identity(24)) < 1e-6);
        // D(α)|0⟩ against the closed-form amplitudes, away from the top levels
        let exact = coherent_amplitudes(alpha, 24);
        for j in 0..12 {
            assert!((d[(j, 0)] - exact[j]).norm() < 1e-6);
        }
        let j = 3;
        let expected = (-0.5 * alpha.norm_sqr()).exp() * alpha.powu(j as u32) / factorial(j).sqrt();
        assert!((exact[j] - expected).norm() < 1e-15);
    }

    #[test]
    fn guard_rejects_large_displacements() {
        let f = FockSpace::new(8).unwrap();
        assert!(matches!(displacement(c(2.1, 0.0), &f), Err(TomographyError::Truncation(_))));
        assert!(f.check_guard(c(1.0, 1.0), 2).is_ok());
        assert!(f.check_guard(c(1.0, 1.0), 3).is_err());
        assert!(coherent_state(c(f64::NAN, 0.0), &f).is_err());
    }

    #[test]
    fn coherent_states_and_husimi() {
        let f = FockSpace::new(16).unwrap();
        let alpha = c(0.7, 0.4);
        let psi = coherent_state(alpha, &f).unwrap();
        assert!((psi.inner(&psi).re - 1.0).abs() < 1e-12);
        let vac = Operator::unit(16, 0, 0);
        assert!((husimi_q(&vac, alpha, &f).unwrap() - (-alpha.norm_sqr()).exp()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rho = random_density_on_levels(16, 3, &mut rng);
        let q = husimi_q(&rho, alpha, &f).unwrap();
        assert!((0.0..=1.0).contains(&q));
    }

    #[test]
    fn husimi_integrates_to_one() {
        use crate::quadrature::PolarQuadrature;
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let rho = random_density_on_levels(16, 3, &mut rng);
        // the integrand is only evaluated inside the guard disk here, so use the
        // unguarded amplitudes directly for the tail
        let quad = PolarQuadrature::new(7.0, 48, 32).unwrap();
        let total: f64 = quad
            .points
            .iter()
            .zip(&quad.weights)
            .map(|(a, w)| {
                let v = coherent_amplitudes(*a, 16);
                w * (v.adjoint() * rho.matrix() * &v)[(0, 0)].re
            })
            .sum::<f64>()
            / std::f64::consts::PI;
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn displaced_amplitudes_match_matrix_exponential() {
        let f = FockSpace::new(40).unwrap();
        let alpha = c(-0.6, 0.9);
        let d = displacement(alpha, &f).unwrap();
        let amp = displaced_number_amplitudes(alpha, 12, 12);
        for j in 0..12 {
            for n in 0..12 {
                assert!((amp[(j, n)] - d[(j, n)]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn displaced_amplitudes_are_unitary_columns() {
        let alpha = c(3.0, -2.0);
        let amp = displaced_number_amplitudes(alpha, 120, 10);
        for n in 0..10 {
            let norm: f64 = amp.column(n).iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
        let overlap: Complex64 = amp.column(2).iter().zip(amp.column(5).iter()).map(|(x, y)| x.conj() * y).sum();
        assert!(overlap.norm() < 1e-10);
    }

    #[test]
    fn coherent_projectors_span_the_truncated_space() {
        let f = FockSpace::new(3).unwrap();
        let alphas: Vec<Complex64> = std::iter::once(c(0.0, 0.0))
            .chain((0..4).map(|k| Complex64::from_polar(0.6, k as f64 * std::f64::consts::FRAC_PI_2)))
            .chain((0..4).map(|k| Complex64::from_polar(1.1, (k as f64 + 0.5) * std::f64::consts::FRAC_PI_2)))
            .collect();
        let ps: Vec<Operator> = alphas
            .iter()
            .map(|a| projector_from_vector(coherent_state(*a, &f).unwrap().entries()).unwrap().into_operator())
            .collect();
        assert_eq!(gram_rank(&gram_matrix(&ps).unwrap(), 3).unwrap().rank, 9);
    }

    #[test]
    fn coherent_projectors_near_a_point_are_complete() {
        let f = FockSpace::new(4).unwrap();
        let report = coherent_skewness(&f, c(0.3, 0.2), 0.5, 16).unwrap();
        assert!(report.complete(), "{report:?}");
        assert_eq!(report.duplicate_rank, 15);
        let fewer = coherent_skewness(&f, c(0.3, 0.2), 0.5, 15).unwrap();
        assert_eq!(fewer.rank, 15);
        for a in disk_points(c(0.3, 0.2), 0.5, 16) {
            assert!((a - c(0.3, 0.2)).norm() <= 0.5);
        }
    }

    #[test]
    fn far_amplitudes_keep_relative_accuracy() {
        // ⟨0|D(α)|n⟩ = e^{−|α|²/2} (−α*)ⁿ / √(n!), far below any absolute rounding floor
        let alpha = c(1.5, -2.0);
        let amp = displaced_number_amplitudes(alpha, 1, 300);
        let mut expected = c((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..300 {
            assert!((amp[(0, n)] - expected).norm() <= 1e-12 * expected.norm(), "n={n}");
            expected *= -alpha.conj() / ((n + 1) as f64).sqrt();
        }
        assert!((laguerre(3, 0.5, 1.2) - (-0.5 * 1.2f64.powi(3) / 3.0 + 0.5 * 3.5 * 1.44 - 3.5 * 2.5 * 1.2 / 2.0 + 3.5 * 2.5 * 1.5 / 6.0) * 1.0).abs() < 1e-14);
    }
}
