//! Photon-number tomography over displaced number states `|nα⟩ = D(α)|n⟩`.
//!
//! For `−1 < s < 1`, with `t = (s − 1)/(s + 1)`, the kernel
//!
//! `K^(s)(n, α) = 4/(1 − s²) · t^{−n} · D(α) t^{a†a} D(α)†`
//!
//! resolves the identity as `A = Σ_n ∫ (d²α/π) K^(s)(n, α) ⟨nα|A|nα⟩`.
//! The displaced power is evaluated in closed form,
//!
//! `⟨j|D t^{a†a} D†|k⟩ = e^{c|α|²} Σ_l t^l √(j!k!)/l! · (−cα)^{j−l} (−cα*)^{k−l} / ((j−l)!(k−l)!)`,
//!
//! `c = t − 1`, which follows from `t^{a†a} = :e^{c a†a}:` and needs no Fock
//! cutoff. Tomograms use exact displaced-number amplitudes, so the only
//! approximations are the α-plane quadrature and the cutoff `n_max` on `n`.
//!
//! For `s > 0` the weight `t^{−n}` grows geometrically and the inversion
//! amplifies quadrature error roughly like `e^{2|α|²s/(1−s)}`; entries far from
//! the support of the input are the first to degrade.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::fock::{displaced_number_amplitudes, FockSpace};
use crate::error::{Result, TomographyError};
use crate::frame::{Label, TomogramTable};
use crate::operator_space::Operator;
use crate::quadrature::PolarQuadrature;

/// A displaced number state `D(α)|n⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonLabel {
    pub n: usize,
    pub alpha: Complex64,
}

impl PhotonLabel {
    pub fn label(&self) -> Label {
        Label::params(&[self.n as f64, self.alpha.re, self.alpha.im])
    }
}

fn check_s(s: f64) -> Result<f64> {
    if !(s > -1.0 && s < 1.0) {
        return Err(TomographyError::Parameter(format!("s must lie in (-1, 1), got {s}")));
    }
    Ok((s - 1.0) / (s + 1.0))
}

fn check_rho(rho: &Operator, fock: &FockSpace) -> Result<()> {
    if rho.dim() != fock.dim() {
        return Err(TomographyError::Dimension { expected: fock.dim(), found: rho.dim() });
    }
    Ok(())
}

/// `⟨nα|ρ|nα⟩`.
pub fn photon_tomogram(rho: &Operator, label: PhotonLabel, fock: &FockSpace) -> Result<f64> {
    check_rho(rho, fock)?;
    if !label.alpha.re.is_finite() || !label.alpha.im.is_finite() {
        return Err(TomographyError::Parameter("alpha must be finite".into()));
    }
    let amp = displaced_number_amplitudes(label.alpha, fock.dim(), label.n + 1);
    let v = amp.column(label.n);
    Ok((v.adjoint() * rho.matrix() * v)[(0, 0)].re)
}

/// `⟨j|D(α) t^{a†a} D(α)†|k⟩` for `j, k < dim`.
pub fn displaced_power(alpha: Complex64, t: f64, dim: usize) -> DMatrix<Complex64> {
    let c = t - 1.0;
    let x = -alpha * c;
    let y = -alpha.conj() * c;
    let fact: Vec<f64> = std::iter::once(1.0)
        .chain((1..dim).scan(1.0, |f, k| {
            *f *= k as f64;
            Some(*f)
        }))
        .collect();
    let xp: Vec<Complex64> = (0..dim).map(|k| x.powu(k as u32)).collect();
    let yp: Vec<Complex64> = (0..dim).map(|k| y.powu(k as u32)).collect();
    let tp: Vec<f64> = (0..dim).map(|k| t.powi(k as i32)).collect();
    let pre = (c * alpha.norm_sqr()).exp();
    DMatrix::from_fn(dim, dim, |j, k| {
        let mut sum = Complex64::new(0.0, 0.0);
        for l in 0..=j.min(k) {
            sum += xp[j - l] * yp[k - l] * (tp[l] / fact[l] / fact[j - l] / fact[k - l]);
        }
        sum * (pre * (fact[j] * fact[k]).sqrt())
    })
}

/// `K^(s)(n, α)` restricted to the truncated space.
pub fn photon_kernel(label: PhotonLabel, s: f64, fock: &FockSpace) -> Result<Operator> {
    let t = check_s(s)?;
    let scale = 4.0 / (1.0 - s * s) * t.powi(-(label.n as i32));
    Ok(Operator::from_square(displaced_power(label.alpha, t, fock.dim()) * Complex64::new(scale, 0.0)))
}

/// Sampling plan for the α-plane integral and the sum over `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonGrid {
    pub quadrature: PolarQuadrature,
    /// Number of photon numbers `n = 0, …, n_max − 1` summed.
    pub n_max: usize,
}

impl PhotonGrid {
    pub fn new(quadrature: PolarQuadrature, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(TomographyError::DegenerateInput("n_max must be positive".into()));
        }
        Ok(Self { quadrature, n_max })
    }

    /// A cutoff large enough that the neglected photon numbers are beyond the
    /// reach of displacements up to the grid radius, inflated by `|1/t|` for `s > 0`.
    pub fn suggested_n_max(radius: f64, dim: usize, s: f64) -> Result<usize> {
        let t = check_s(s)?;
        let growth = (1.0 / t.abs()).max(1.0);
        let reach = radius + (dim as f64).sqrt();
        Ok((std::f64::consts::E * growth * reach * reach).ceil() as usize + 20)
    }

    pub fn labels(&self) -> Vec<PhotonLabel> {
        self.quadrature
            .points
            .iter()
            .flat_map(|&alpha| (0..self.n_max).map(move |n| PhotonLabel { n, alpha }))
            .collect()
    }

    fn describe(&self) -> serde_json::Value {
        let mut g = self.quadrature.describe();
        g["n_max"] = serde_json::json!(self.n_max);
        g
    }
}

/// Tomograms `⟨nα|A|nα⟩` over the whole grid, α-major. Complex for non-Hermitian `A`.
pub fn photon_tomogram_table(a: &Operator, fock: &FockSpace, grid: &PhotonGrid) -> Result<TomogramTable> {
    check_rho(a, fock)?;
    let hermitian = a.is_hermitian(0.0);
    let mut values = Vec::with_capacity(grid.quadrature.len() * grid.n_max);
    for &alpha in &grid.quadrature.points {
        let amp = displaced_number_amplitudes(alpha, fock.dim(), grid.n_max);
        let av = a.matrix() * &amp;
        for n in 0..grid.n_max {
            let v: Complex64 = amp.column(n).iter().zip(av.column(n).iter()).map(|(x, y)| x.conj() * y).sum();
            values.push(if hermitian { Complex64::new(v.re, 0.0) } else { v });
        }
    }
    Ok(TomogramTable {
        labels: grid.labels().iter().map(PhotonLabel::label).collect(),
        values,
        dim: fock.dim(),
        grid: Some(grid.describe()),
    })
}

/// `Σ_grid (w/π) Σ_n K^(s)(n, α) T(n, α)`, optionally keeping only `n < keep_n`.
fn reconstruct_with(table: &TomogramTable, s: f64, fock: &FockSpace, grid: &PhotonGrid, keep_n: usize) -> Result<Operator> {
    let t = check_s(s)?;
    let expected = grid.quadrature.len() * grid.n_max;
    if table.len() != expected || table.dim != fock.dim() {
        return Err(TomographyError::LabelMismatch(format!(
            "table has {} values of dim {}, grid expects {expected} of dim {}",
            table.len(),
            table.dim,
            fock.dim()
        )));
    }
    if table.labels != grid.labels().iter().map(PhotonLabel::label).collect::<Vec<_>>() {
        return Err(TomographyError::LabelMismatch("table was not sampled on this grid".into()));
    }
    let pre = 4.0 / (1.0 - s * s) / PI;
    let inv_t = 1.0 / t;
    let mut out = DMatrix::zeros(fock.dim(), fock.dim());
    for (k, (&alpha, &w)) in grid.quadrature.points.iter().zip(&grid.quadrature.weights).enumerate() {
        let row = &table.values[k * grid.n_max..(k + 1) * grid.n_max];
        let mut weight: f64 = 1.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, v) in row.iter().take(keep_n).enumerate() {
            if *v != Complex64::new(0.0, 0.0) {
                if !weight.is_finite() {
                    return Err(TomographyError::Numerical(format!(
                        "kernel weight t^-n overflows at n = {n} for s = {s}; lower n_max"
                    )));
                }
                acc += v * weight;
            }
            weight *= inv_t;
        }
        if acc == Complex64::new(0.0, 0.0) {
            continue;
        }
        out += displaced_power(alpha, t, fock.dim()) * (acc * (w * pre));
    }
    Ok(Operator::from_square(out))
}

pub fn photon_reconstruct(table: &TomogramTable, s: f64, fock: &FockSpace, grid: &PhotonGrid) -> Result<Operator> {
    reconstruct_with(table, s, fock, grid, grid.n_max)
}

/// Deviations of the reconstructed matrix units from the originals.
#[derive(Clone, Debug, Serialize)]
pub struct PhotonIdentityReport {
    pub s: f64,
    pub n_test: usize,
    pub n_max: usize,
    pub grid_points: usize,
    pub max_deviation: f64,
}

/// Applies `Σ_n ∫ (d²α/π) |K^(s)(n,α)⟩⟨nα|·|nα⟩` to every `E_jk` with `j, k < n_test`.
/// `terms` limits the sum to `n < terms` (a negative control when small).
pub fn photon_identity_check(
    s: f64,
    fock: &FockSpace,
    grid: &PhotonGrid,
    n_test: usize,
    terms: Option<usize>,
) -> Result<PhotonIdentityReport> {
    if n_test == 0 || n_test > fock.dim() {
        return Err(TomographyError::Parameter(format!("n_test must lie in 1..={}", fock.dim())));
    }
    let keep = terms.unwrap_or(grid.n_max).min(grid.n_max);
    let mut worst: f64 = 0.0;
    for j in 0..n_test {
        for k in 0..n_test {
            let e = Operator::unit(fock.dim(), j, k);
            let table = photon_tomogram_table(&e, fock, grid)?;
            let back = reconstruct_with(&table, s, fock, grid, keep)?;
            worst = worst.max(back.max_abs_diff(&e));
        }
    }
    Ok(PhotonIdentityReport { s, n_test, n_max: keep, grid_points: grid.quadrature.len(), max_deviation: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::symplectic::hermite_function;
    use crate::random::{random_density_on_levels, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_grid(s: f64) -> PhotonGrid {
        let n_max = PhotonGrid::suggested_n_max(3.0, 6, s).unwrap();
        PhotonGrid::new(PolarQuadrature::new(3.0, 24, 24).unwrap(), n_max).unwrap()
    }

    #[test]
    fn vacuum_tomograms() {
        let f = FockSpace::new(8).unwrap();
        let vac = Operator::unit(8, 0, 0);
        for n in 0..5 {
            let t = photon_tomogram(&vac, PhotonLabel { n, alpha: c(0.0, 0.0) }, &f).unwrap();
            assert!((t - if n == 0 { 1.0 } else { 0.0 }).abs() < 1e-15);
        }
        let alpha = c(1.2, -0.7);
        let mut fact = 1.0;
        for n in 0..10 {
            if n > 0 {
                fact *= n as f64;
            }
            let expected = (-alpha.norm_sqr()).exp() * alpha.norm_sqr().powi(n as i32) / fact;
            let t = photon_tomogram(&vac, PhotonLabel { n, alpha }, &f).unwrap();
            assert!((t - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn tomograms_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rho = random_density_on_levels(16, 4, &mut rng);
        for alpha in [c(0.0, 0.0), c(2.5, 1.0), c(-3.0, -2.5)] {
            let amp = displaced_number_amplitudes(alpha, 16, 120);
            let total: f64 = (0..120)
                .map(|n| {
                    let v = amp.column(n);
                    (v.adjoint() * rho.matrix() * v)[(0, 0)].re
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn position_representation_of_displaced_number_states() {
        // ⟨y|nα⟩ = e^{i(μy − μν/2)} ψ_n(y − ν) with α = (ν + iμ)/√2
        let (nu, mu) = (0.9, -0.6);
        let alpha = c(nu, mu) / 2f64.sqrt();
        let amp = displaced_number_amplitudes(alpha, 60, 4);
        for n in 0..4 {
            for y in [-1.5, -0.3, 0.0, 0.8, 2.0] {
                let series: Complex64 = (0..60).map(|j| amp[(j, n)] * hermite_function(j, y)).sum();
                let closed = Complex64::from_polar(hermite_function(n, y - nu), mu * y - mu * nu / 2.0);
                assert!((series - closed).norm() < 1e-12, "n={n} y={y}: {series} vs {closed}");
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let f = FockSpace::new(8).unwrap();
        let parity = f.parity();
        for n in 0..4 {
            let k = photon_kernel(PhotonLabel { n, alpha: c(0.0, 0.0) }, 0.0, &f).unwrap();
            let sign = if n % 2 == 0 { 4.0 } else { -4.0 };
            assert!(k.max_abs_diff(&parity.scale(c(sign, 0.0))) < 1e-14);
        }
        let k = photon_kernel(PhotonLabel { n: 2, alpha: c(0.0, 0.0) }, 0.3, &f).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(k[(i, j)], c(0.0, 0.0));
                }
            }
        }
        for (n, alpha, s) in [(0, c(0.5, 0.5), -0.5), (3, c(-1.0, 0.2), 0.5), (1, c(2.0, -1.0), 0.0)] {
            let k = photon_kernel(PhotonLabel { n, alpha }, s, &f).unwrap();
            assert!(k.hermitian_deviation() <= 1e-12 * k.max_abs().max(1.0));
        }
        assert!(matches!(photon_kernel(PhotonLabel { n: 0, alpha: c(0.0, 0.0) }, 1.0, &f), Err(TomographyError::Parameter(_))));
        assert!(photon_kernel(PhotonLabel { n: 0, alpha: c(0.0, 0.0) }, -1.0, &f).is_err());
    }

    #[test]
    fn displaced_power_matches_spectral_sum() {
        // For |t| ≤ 1, D t^N D† = A diag(t^l) A† converges with exact amplitudes.
        let alpha = c(0.7, -1.1);
        let amp = displaced_number_amplitudes(alpha, 6, 150);
        for t in [-1.0f64, -0.4, 0.0, 0.3, 1.0 / 3.0] {
            let spectral = DMatrix::from_fn(6, 6, |j, k| {
                (0..150).map(|l| amp[(j, l)] * amp[(k, l)].conj() * t.powi(l as i32)).sum::<Complex64>()
            });
            let closed = displaced_power(alpha, t, 6);
            assert!((closed - spectral).camax() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn reconstruction_is_s_independent() {
        let f = FockSpace::new(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let rho = random_density_on_levels(6, 3, &mut rng);
        let mut results = Vec::new();
        for s in [-0.5, 0.0, 0.3] {
            let grid = small_grid(s);
            let table = photon_tomogram_table(&rho, &f, &grid).unwrap();
            let back = photon_reconstruct(&table, s, &f, &grid).unwrap();
            let block = (back.matrix().view((0, 0), (3, 3)) - rho.matrix().view((0, 0), (3, 3))).camax();
            assert!(block < 1e-4, "s={s}: {block}");
            results.push(back);
        }
        let diff = (results[0].matrix().view((0, 0), (3, 3)) - results[1].matrix().view((0, 0), (3, 3))).camax();
        assert!(diff < 1e-4);
    }

    #[test]
    fn non_hermitian_operators_reconstruct() {
        let f = FockSpace::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut b = random_matrix(5, &mut rng).into_matrix();
        b.view_mut((3, 0), (2, 5)).fill(c(0.0, 0.0));
        b.view_mut((0, 3), (5, 2)).fill(c(0.0, 0.0));
        let b = Operator::new(b).unwrap();
        let grid = small_grid(0.0);
        let table = photon_tomogram_table(&b, &f, &grid).unwrap();
        assert!(!table.is_real());
        let back = photon_reconstruct(&table, 0.0, &f, &grid).unwrap();
        assert!(back.max_abs_diff(&b) < 1e-6);
    }

    #[test]
    fn identity_check_and_negative_control() {
        let f = FockSpace::new(6).unwrap();
        let grid = small_grid(0.0);
        let full = photon_identity_check(0.0, &f, &grid, 3, None).unwrap();
        assert!(full.max_deviation < 1e-6, "{}", full.max_deviation);
        let truncated = photon_identity_check(0.0, &f, &grid, 3, Some(1)).unwrap();
        assert!(truncated.max_deviation > 0.1);
    }

    #[test]
    fn identity_check_improves_with_refinement() {
        let f = FockSpace::new(4).unwrap();
        let mut last = f64::INFINITY;
        for (radius, nodes) in [(1.5, 6), (2.5, 10), (3.5, 20)] {
            let n_max = PhotonGrid::suggested_n_max(radius, 4, 0.0).unwrap();
            let grid = PhotonGrid::new(PolarQuadrature::new(radius, nodes, nodes).unwrap(), n_max).unwrap();
            let dev = photon_identity_check(0.0, &f, &grid, 2, None).unwrap().max_deviation;
            assert!(dev < last, "{dev} !< {last}");
            last = dev;
        }
    }

    #[test]
    fn table_grid_mismatch_is_reported() {
        let f = FockSpace::new(4).unwrap();
        let g1 = PhotonGrid::new(PolarQuadrature::new(2.0, 4, 4).unwrap(), 10).unwrap();
        let g2 = PhotonGrid::new(PolarQuadrature::new(2.5, 4, 4).unwrap(), 10).unwrap();
        let table = photon_tomogram_table(&Operator::identity(4), &f, &g1).unwrap();
        assert!(matches!(photon_reconstruct(&table, 0.0, &f, &g2), Err(TomographyError::LabelMismatch(_))));
    }
}
