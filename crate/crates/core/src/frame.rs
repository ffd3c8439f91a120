//! Tomographic sets, their Gram-Schmidt dual operators, tomograms and linear
//! reconstruction.
//!
//! For a minimal set (a basis of `dim²` rank-one projectors) the projectors are
//! orthonormalized as `|V_j> = Σ_k γ_jk |P_k>` and the dual operators are
//! `|K_l> = Σ_i γ*_il |V_i>`, which satisfy `<P_i|K_l> = δ_il`. Over-complete
//! sets get the canonical dual `K_μ = w_μ S⁺ P_μ` with `S = Σ_μ w_μ |P_μ><P_μ|`,
//! the minimum-norm solution of `Σ_μ |K_μ><P_μ| = 1`; these duals are not
//! biorthogonal to the projectors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::discrete::PairLabel;
use crate::error::{Result, TomographyError};
use crate::operator_space::{gram_rank, Operator, RankOneProjector, TOL_FINITE};

/// Condition number of the Gram matrix above which a frame is flagged as skewed.
pub const CONDITION_WARNING: f64 = 1e8;

/// Identifies one element of a tomographic set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(u64),
    /// Continuous parameters, e.g. `[theta, phi]` or `[mu, nu, n]`.
    Params(Vec<f64>),
    Pair(PairLabel),
    Name(String),
}

impl Label {
    pub fn params(values: &[f64]) -> Self {
        Label::Params(values.to_vec())
    }
}

/// An ordered collection of rank-one projectors with labels and optional
/// quadrature weights.
#[derive(Clone, Debug, PartialEq)]
pub struct TomographicSet {
    dim: usize,
    projectors: Vec<Operator>,
    labels: Vec<Label>,
    weights: Option<Vec<f64>>,
}

impl TomographicSet {
    /// Validates that every operator is a rank-one projector of a common dimension.
    pub fn new(projectors: Vec<Operator>, labels: Vec<Label>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return Err(TomographyError::DegenerateInput("empty tomographic set".into()));
        };
        let dim = first.dim();
        if projectors.len() != labels.len() {
            return Err(TomographyError::LabelMismatch(format!(
                "{} projectors but {} labels",
                projectors.len(),
                labels.len()
            )));
        }
        for (k, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(TomographyError::Dimension { expected: dim, found: p.dim() });
            }
            check_rank_one_projector(p).map_err(|msg| {
                TomographyError::DegenerateInput(format!("element {k} is not a rank-one projector: {msg}"))
            })?;
        }
        Ok(Self { dim, projectors, labels, weights: None })
    }

    pub fn from_projectors(projectors: Vec<RankOneProjector>, labels: Vec<Label>) -> Result<Self> {
        Self::new(projectors.into_iter().map(RankOneProjector::into_operator).collect(), labels)
    }

    /// Attaches positive quadrature weights, one per projector.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.projectors.len() {
            return Err(TomographyError::LabelMismatch(format!(
                "{} weights for {} projectors",
                weights.len(),
                self.projectors.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(TomographyError::DegenerateInput("weights must be positive".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Whether the set has exactly `dim²` elements.
    pub fn is_minimal_size(&self) -> bool {
        self.len() == self.dim * self.dim
    }

    /// Keeps the elements whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> Result<Self> {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(i)).collect();
        let projectors = idx.iter().map(|&i| self.projectors[i].clone()).collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let set = Self::new(projectors, labels)?;
        match &self.weights {
            Some(w) => set.with_weights(idx.iter().map(|&i| w[i]).collect()),
            None => Ok(set),
        }
    }

    /// Reorders the set: element `k` of the result is element `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(TomographyError::DegenerateInput("order is not a permutation".into()));
            }
        }
        if order.len() != self.len() {
            return Err(TomographyError::DegenerateInput("order is not a permutation".into()));
        }
        let mut out = self.clone();
        out.projectors = order.iter().map(|&i| self.projectors[i].clone()).collect();
        out.labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        out.weights = self.weights.as_ref().map(|w| order.iter().map(|&i| w[i]).collect());
        Ok(out)
    }

    /// `dim² × len` matrix whose columns are the vectorized projectors.
    fn synthesis_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim * self.dim, self.len());
        for (k, p) in self.projectors.iter().enumerate() {
            m.set_column(k, &p.vectorize());
        }
        m
    }
}

fn check_rank_one_projector(p: &Operator) -> std::result::Result<(), String> {
    let tol = 1e3 * TOL_FINITE;
    let herm = p.hermitian_deviation();
    if herm > tol {
        return Err(format!("not Hermitian ({herm:.2e})"));
    }
    let idem = p.mul(p).max_abs_diff(p);
    if idem > tol {
        return Err(format!("P² ≠ P ({idem:.2e})"));
    }
    let tr = (p.trace() - Complex64::new(1.0, 0.0)).norm();
    if tr > tol {
        return Err(format!("Tr P ≠ 1 ({tr:.2e})"));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    dim: usize,
    projectors: Vec<Operator>,
    labels: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl Serialize for TomographicSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetJson {
            dim: self.dim,
            projectors: self.projectors.clone(),
            labels: self.labels.clone(),
            weights: self.weights.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TomographicSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SetJson::deserialize(deserializer)?;
        let set = TomographicSet::new(raw.projectors, raw.labels).map_err(D::Error::custom)?;
        if set.dim != raw.dim {
            return Err(D::Error::custom(format!("declared dim {} but projectors have dim {}", raw.dim, set.dim)));
        }
        match raw.weights {
            Some(w) => set.with_weights(w).map_err(D::Error::custom),
            None => Ok(set),
        }
    }
}

/// The Gram-Schmidt (dual) operators of a tomographic set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualFrame {
    pub labels: Vec<Label>,
    pub duals: Vec<Operator>,
    /// Orthonormalization coefficients; present for minimal sets only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Operator>,
    pub condition_number: f64,
    pub minimal: bool,
}

impl DualFrame {
    pub fn dim(&self) -> usize {
        self.duals[0].dim()
    }

    pub fn len(&self) -> usize {
        self.duals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.duals.is_empty()
    }

    /// `Σ_μ |K_μ><P_μ|` applied to `a`, i.e. `reconstruct(tomogram(a))`.
    pub fn resolve(&self, set: &TomographicSet, a: &Operator) -> Result<Operator> {
        let table = tomogram(set, a)?;
        reconstruct(self, &table)
    }
}

/// Gram-Schmidt orthonormalization of a minimal tomographic set.
///
/// Returns the orthonormal operators `V_j` and the coefficients `γ` with
/// `|V_j> = Σ_k γ_jk |P_k>`. Uses a Householder QR factorization of the
/// synthesis matrix `[P_1 … P_{n²}] = Q R`, so that `γ = (R⁻¹)ᵀ`.
pub fn orthonormalize(set: &TomographicSet) -> Result<(Vec<Operator>, DMatrix<Complex64>)> {
    let required = set.dim() * set.dim();
    if !set.is_minimal_size() {
        return Err(TomographyError::NotMinimal { count: set.len(), required });
    }
    let synthesis = set.synthesis_matrix();
    let rank = gram_rank(&(synthesis.adjoint() * &synthesis), set.dim())?;
    if rank.rank < required {
        return Err(TomographyError::IncompleteSet { rank: rank.rank, required });
    }
    let qr = synthesis.qr();
    let q = qr.q();
    let r = qr.r();
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| TomographyError::Numerical("triangular factor is singular".into()))?;
    let gamma = r_inv.transpose();
    let v = (0..required)
        .map(|j| Operator::from_vectorized(set.dim(), &q.column(j).into_owned()))
        .collect::<Result<Vec<_>>>()?;
    Ok((v, gamma))
}

/// Dual operators of a tomographic set.
///
/// Minimal sets go through [`orthonormalize`]; over-complete sets (or any set
/// carrying quadrature weights) use the weighted canonical dual, with the
/// weight folded into each `K_μ` so that reconstruction is `Σ_μ K_μ T(μ)`.
pub fn dual_frame(set: &TomographicSet) -> Result<DualFrame> {
    let dim = set.dim();
    let required = dim * dim;
    let synthesis = set.synthesis_matrix();
    let gram = synthesis.adjoint() * &synthesis;
    let rank = gram_rank(&gram, dim)?;
    if rank.rank < required {
        return Err(TomographyError::IncompleteSet { rank: rank.rank, required });
    }
    if rank.condition_number > CONDITION_WARNING {
        log::warn!(
            "Gram matrix condition number {:.3e} exceeds {:.0e}; duals will amplify tomogram noise",
            rank.condition_number,
            CONDITION_WARNING
        );
    }

    if set.is_minimal_size() && set.weights().is_none() {
        let (v, gamma) = orthonormalize(set)?;
        let duals = (0..required)
            .map(|l| {
                let mut k = DMatrix::zeros(dim, dim);
                for (i, vi) in v.iter().enumerate() {
                    k += vi.matrix() * gamma[(i, l)].conj();
                }
                Operator::from_square(k)
            })
            .collect();
        return Ok(DualFrame {
            labels: set.labels().to_vec(),
            duals,
            gamma: Some(Operator::from_square(gamma)),
            condition_number: rank.condition_number,
            minimal: true,
        });
    }

    let weights: Vec<f64> = match set.weights() {
        Some(w) => w.to_vec(),
        None => vec![1.0; set.len()],
    };
    let mut weighted = synthesis.clone();
    for (k, w) in weights.iter().enumerate() {
        weighted.column_mut(k).scale_mut(*w);
    }
    let frame_op = &weighted * synthesis.adjoint();
    let frame_inv = pseudo_inverse(&frame_op, dim)?;
    let dual_cols = frame_inv * weighted;
    let duals = (0..set.len())
        .map(|k| Operator::from_vectorized(dim, &dual_cols.column(k).into_owned()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualFrame {
        labels: set.labels().to_vec(),
        duals,
        gamma: None,
        condition_number: rank.condition_number,
        minimal: false,
    })
}

fn pseudo_inverse(m: &DMatrix<Complex64>, dim: usize) -> Result<DMatrix<Complex64>> {
    let svd = nalgebra::SVD::try_new(m.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| TomographyError::Numerical("SVD did not converge".into()))?;
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = max * (dim * dim) as f64 * 1e-12;
    svd.pseudo_inverse(eps).map_err(|e| TomographyError::Numerical(e.to_string()))
}

/// Tomogram values `T_A(μ) = Tr(P_μ A)` over a tomographic set.
#[derive(Clone, Debug, PartialEq)]
pub struct TomogramTable {
    pub labels: Vec<Label>,
    pub values: Vec<Complex64>,
    pub dim: usize,
    /// Free-form description of the sampling grid, if any.
    pub grid: Option<serde_json::Value>,
}

impl TomogramTable {
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a given label, if present.
    pub fn get(&self, label: &Label) -> Option<Complex64> {
        self.labels.iter().position(|l| l == label).map(|i| self.values[i])
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    dim: usize,
    labels: Vec<Label>,
    values: Vec<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<serde_json::Value>,
}

impl Serialize for TomogramTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let values = self
            .values
            .iter()
            .map(|v| if v.im == 0.0 { ValueJson::Real(v.re) } else { ValueJson::Complex([v.re, v.im]) })
            .collect();
        TableJson { dim: self.dim, labels: self.labels.clone(), values, grid: self.grid.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TomogramTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = TableJson::deserialize(deserializer)?;
        if raw.labels.len() != raw.values.len() {
            return Err(D::Error::custom(format!(
                "{} labels but {} values",
                raw.labels.len(),
                raw.values.len()
            )));
        }
        let values = raw
            .values
            .into_iter()
            .map(|v| match v {
                ValueJson::Real(re) => Complex64::new(re, 0.0),
                ValueJson::Complex([re, im]) => Complex64::new(re, im),
            })
            .collect();
        Ok(TomogramTable { labels: raw.labels, values, dim: raw.dim, grid: raw.grid })
    }
}

/// `Tr(P_μ A)` for every element of the set.
///
/// Values are real when `A` is Hermitian (flagged, or numerically so); the
/// discarded imaginary residue must stay below `TOL_FINITE` relative to `‖A‖`.
pub fn tomogram(set: &TomographicSet, a: &Operator) -> Result<TomogramTable> {
    if a.dim() != set.dim() {
        return Err(TomographyError::Dimension { expected: set.dim(), found: a.dim() });
    }
    let scale = a.max_abs().max(1.0);
    let hermitian = a.flags().hermitian || a.is_hermitian(TOL_FINITE * scale);
    let mut values = Vec::with_capacity(set.len());
    for p in set.projectors() {
        // Tr(P A) = Σ_ij P_ij A_ji
        let mut v = Complex64::new(0.0, 0.0);
        for i in 0..set.dim() {
            for j in 0..set.dim() {
                v += p[(i, j)] * a[(j, i)];
            }
        }
        if hermitian {
            if v.im.abs() > TOL_FINITE * scale {
                return Err(TomographyError::Numerical(format!(
                    "tomogram of a Hermitian operator has imaginary residue {:.3e}",
                    v.im
                )));
            }
            v.im = 0.0;
        }
        values.push(v);
    }
    Ok(TomogramTable { labels: set.labels().to_vec(), values, dim: set.dim(), grid: None })
}

/// `A = Σ_μ K_μ T(μ)`.
pub fn reconstruct(frame: &DualFrame, table: &TomogramTable) -> Result<Operator> {
    if frame.labels != table.labels {
        return Err(TomographyError::LabelMismatch(format!(
            "frame has {} labels, table has {} (or they differ in order/content)",
            frame.labels.len(),
            table.labels.len()
        )));
    }
    let dim = frame.dim();
    if table.dim != dim {
        return Err(TomographyError::Dimension { expected: dim, found: table.dim });
    }
    let mut out = DMatrix::zeros(dim, dim);
    for (k, v) in frame.duals.iter().zip(&table.values) {
        out += k.matrix() * *v;
    }
    Ok(Operator::from_square(out))
}
