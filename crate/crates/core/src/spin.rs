//! Qubit tomography over the Bloch sphere.
//!
//! `P(θ,φ) = ½(I + n·σ)` is sampled on a product quadrature and paired with the
//! kernel `K(θ,φ) = (1/4π)(I + 3 n·σ)`, so that
//! `A = ∫ K Tr(P A) dΩ = ∫ P Tr(K A) dΩ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Result, TomographyError};
use crate::frame::{Label, TomogramTable, TomographicSet};
use crate::operator_space::{Operator, RankOneProjector, StateVector};
use crate::quadrature::gauss_legendre;

/// A point `(θ, φ)` of the Bloch sphere, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochLabel {
    theta: f64,
    phi: f64,
}

impl BlochLabel {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(TomographyError::DegenerateInput(format!(
                "Bloch angles out of range: theta={theta}, phi={phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit Bloch vector.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn label(&self) -> Label {
        Label::params(&[self.theta, self.phi])
    }
}

/// `½(I + n·σ)`, generated by `(cos θ/2, e^{iφ} sin θ/2)`.
pub fn bloch_projector(l: BlochLabel) -> RankOneProjector {
    let (s, c) = (0.5 * l.theta).sin_cos();
    let v = DVector::from_vec(vec![Complex64::new(c, 0.0), Complex64::from_polar(s, l.phi)]);
    RankOneProjector::from_state(StateVector::normalized(v).expect("unit vector"))
}

/// `(1/4π)(I + 3 n·σ)`.
pub fn spin_kernel(l: BlochLabel) -> Operator {
    let (st, ct) = l.theta.sin_cos();
    let c = 1.0 / (4.0 * PI);
    let off = Complex64::from_polar(3.0 * st * c, -l.phi);
    Operator::from_square(DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(c * (1.0 + 3.0 * ct), 0.0), off, off.conj(), Complex64::new(c * (1.0 - 3.0 * ct), 0.0)],
    ))
}

/// Product rule: Gauss-Legendre in `cos θ`, uniform in `φ`. The `sin θ` of the
/// surface measure is absorbed by the change of variable, so the weights sum to `4π`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereQuadrature {
    pub n_theta: usize,
    pub n_phi: usize,
    pub nodes: Vec<BlochLabel>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn product(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_phi == 0 {
            return Err(TomographyError::DegenerateInput("need at least one azimuthal node".into()));
        }
        let (x, w) = gauss_legendre(n_theta)?;
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                nodes.push(BlochLabel::new(theta, j as f64 * dphi)?);
                weights.push(wi * dphi);
            }
        }
        Ok(Self { n_theta, n_phi, nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.nodes.iter().map(BlochLabel::label).collect()
    }

    /// The sampled projectors as a weighted tomographic set.
    pub fn tomographic_set(&self) -> Result<TomographicSet> {
        TomographicSet::from_projectors(self.nodes.iter().map(|l| bloch_projector(*l)).collect(), self.labels())?
            .with_weights(self.weights.clone())
    }

    fn describe(&self, mode: SpinMode) -> serde_json::Value {
        serde_json::json!({
            "kind": "sphere",
            "n_theta": self.n_theta,
            "n_phi": self.n_phi,
            "mode": mode,
        })
    }
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        Self::product(8, 16).expect("default grid is valid")
    }
}

/// Which of the two equivalent orderings of the reconstruction integral to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinMode {
    /// Table holds `Tr(P A)`; reconstruction sums `w K · value`.
    KernelWeighted,
    /// Table holds `Tr(K A)`; reconstruction sums `w P · value`.
    ProjectorWeighted,
}

/// Samples the table matching `mode` on the quadrature nodes.
pub fn spin_tomogram(quad: &SphereQuadrature, a: &Operator, mode: SpinMode) -> Result<TomogramTable> {
    if a.dim() != 2 {
        return Err(TomographyError::Dimension { expected: 2, found: a.dim() });
    }
    let hermitian = a.is_hermitian(1e-12 * a.max_abs().max(1.0));
    let values = quad
        .nodes
        .iter()
        .map(|l| {
            let m = match mode {
                SpinMode::KernelWeighted => bloch_projector(*l).into_operator(),
                SpinMode::ProjectorWeighted => spin_kernel(*l),
            };
            let v = m.mul(a).trace();
            if hermitian { Complex64::new(v.re, 0.0) } else { v }
        })
        .collect();
    Ok(TomogramTable { labels: quad.labels(), values, dim: 2, grid: Some(quad.describe(mode)) })
}

/// Quadrature sum of the reconstruction integral.
pub fn spin_reconstruct(quad: &SphereQuadrature, table: &TomogramTable, mode: SpinMode) -> Result<Operator> {
    if table.labels.len() != quad.len() || table.labels.iter().zip(&quad.nodes).any(|(a, b)| *a != b.label()) {
        return Err(TomographyError::LabelMismatch("table was not sampled on this sphere quadrature".into()));
    }
    let mut out = DMatrix::zeros(2, 2);
    for ((l, w), v) in quad.nodes.iter().zip(&quad.weights).zip(&table.values) {
        let m = match mode {
            SpinMode::KernelWeighted => spin_kernel(*l),
            SpinMode::ProjectorWeighted => bloch_projector(*l).into_operator(),
        };
        out += m.matrix() * (*v * *w);
    }
    Ok(Operator::from_square(out))
}

/// Outcome of reconstructing one operator on a sphere quadrature.
#[derive(Clone, Debug, Serialize)]
pub struct SpinReport {
    pub input: Operator,
    pub nodes: usize,
    pub kernel_weighted_error: f64,
    pub projector_weighted_error: f64,
}

pub fn spin_round_trip(quad: &SphereQuadrature, a: &Operator) -> Result<SpinReport> {
    let mut errors = [0.0; 2];
    for (e, mode) in errors.iter_mut().zip([SpinMode::KernelWeighted, SpinMode::ProjectorWeighted]) {
        let table = spin_tomogram(quad, a, mode)?;
        *e = spin_reconstruct(quad, &table, mode)?.max_abs_diff(a);
    }
    Ok(SpinReport {
        input: a.clone(),
        nodes: quad.len(),
        kernel_weighted_error: errors[0],
        projector_weighted_error: errors[1],
    })
}
