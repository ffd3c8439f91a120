//! Dense operators on a finite (or truncated) Hilbert space, viewed as vectors
//! of the Hilbert-Schmidt space with the trace inner product `<A|B> = Tr(A†B)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, TomographyError};
use crate::frame::TomographicSet;

/// Tolerance for identities that are exact in finite dimension.
pub const TOL_FINITE: f64 = 1e-10;
/// Tolerance for identities that only hold up to Fock-space truncation.
pub const TOL_TRUNC: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Optional assertions carried by an [`Operator`]; checked when set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFlags {
    #[serde(default)]
    pub hermitian: bool,
    #[serde(default)]
    pub positive: bool,
    #[serde(default)]
    pub trace_one: bool,
}

/// A dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    matrix: DMatrix<Complex64>,
    flags: OperatorFlags,
}

impl Operator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(TomographyError::Dimension {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(TomographyError::DegenerateInput("zero-dimensional operator".into()));
        }
        Ok(Self { matrix, flags: OperatorFlags::default() })
    }

    /// Wraps a matrix already known to be square. Panics otherwise.
    pub(crate) fn from_square(matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operator must be square");
        Self { matrix, flags: OperatorFlags::default() }
    }

    /// Builds an operator from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(TomographyError::Dimension { expected: dim * dim, found: entries.len() });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a real operator from row-major entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_slice(dim, &entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_square(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_square(DMatrix::identity(dim, dim))
    }

    /// The matrix unit `|i><j|` (0-based indices).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, j)] = ONE;
        Self::from_square(m)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let d = DVector::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::from_square(DMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    /// Attaches assertion flags after checking each requested property.
    pub fn with_flags(mut self, flags: OperatorFlags) -> Result<Self> {
        if flags.hermitian || flags.positive {
            let dev = self.hermitian_deviation();
            if dev > TOL_FINITE {
                return Err(TomographyError::Numerical(format!(
                    "operator flagged Hermitian deviates by {dev:.3e}"
                )));
            }
        }
        if flags.trace_one {
            let dev = (self.trace() - ONE).norm();
            if dev > TOL_FINITE {
                return Err(TomographyError::Numerical(format!(
                    "operator flagged trace-one has |Tr - 1| = {dev:.3e}"
                )));
            }
        }
        if flags.positive {
            let (values, _) = hermitian_eigen(&self)?;
            if let Some(&min) = values.first() {
                if min < -TOL_FINITE {
                    return Err(TomographyError::Numerical(format!(
                        "operator flagged positive has eigenvalue {min:.3e}"
                    )));
                }
            }
        }
        self.flags = flags;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_square(self.matrix.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `max |A - A†|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operators differ in dimension");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_square(&self.matrix * factor)
    }

    pub fn add(&self, other: &Operator) -> Self {
        Self::from_square(&self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &Operator) -> Self {
        Self::from_square(&self.matrix - &other.matrix)
    }

    pub fn mul(&self, other: &Operator) -> Self {
        Self::from_square(&self.matrix * &other.matrix)
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, unitary: &Operator) -> Self {
        Self::from_square(&unitary.matrix * &self.matrix * unitary.matrix.adjoint())
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Operator) -> Self {
        Self::from_square(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
    }

    /// `max |U†U - I|` over all entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        let n = self.dim();
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((prod[(i, j)] - target).norm());
            }
        }
        dev
    }

    /// Row-major entries.
    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.matrix[(i, j)]);
            }
        }
        out
    }

    /// The operator as a vector of the `dim²`-dimensional Hilbert-Schmidt space.
    pub fn vectorize(&self) -> DVector<Complex64> {
        DVector::from_vec(self.row_major())
    }

    /// Inverse of [`Operator::vectorize`].
    pub fn from_vectorized(dim: usize, v: &DVector<Complex64>) -> Result<Self> {
        Self::from_row_slice(dim, v.as_slice())
    }
}

impl AsRef<Operator> for Operator {
    fn as_ref(&self) -> &Operator {
        self
    }
}

impl std::ops::Index<(usize, usize)> for Operator {
    type Output = Complex64;

    fn index(&self, index: (usize, usize)) -> &Complex64 {
        &self.matrix[index]
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "is_default_flags")]
    flags: OperatorFlags,
}

fn is_default_flags(flags: &OperatorFlags) -> bool {
    *flags == OperatorFlags::default()
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim(),
            entries: self.row_major().iter().map(|z| [z.re, z.im]).collect(),
            flags: self.flags,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.dim == 0 {
            return Err(D::Error::custom("matrix dim must be positive"));
        }
        if raw.entries.len() != raw.dim * raw.dim {
            return Err(D::Error::custom(format!(
                "matrix of dim {} needs {} entries, found {}",
                raw.dim,
                raw.dim * raw.dim,
                raw.entries.len()
            )));
        }
        let entries: Vec<Complex64> = raw.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Operator::from_row_slice(raw.dim, &entries)
            .and_then(|op| op.with_flags(raw.flags))
            .map_err(D::Error::custom)
    }
}

/// A unit vector of a finite (or truncated) Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    entries: DVector<Complex64>,
}

impl StateVector {
    /// Normalizes `v`; fails on the zero vector.
    pub fn normalized(v: DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(TomographyError::DegenerateInput("cannot normalize a zero vector".into()));
        }
        Ok(Self { entries: v.unscale(norm) })
    }

    pub fn from_slice(entries: &[Complex64]) -> Result<Self> {
        Self::normalized(DVector::from_column_slice(entries))
    }

    /// `|i>` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[i] = ONE;
        Self { entries: v }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &DVector<Complex64> {
        &self.entries
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.entries.dotc(&other.entries)
    }

    /// `<ψ|A|ψ>`.
    pub fn expectation(&self, op: &Operator) -> Complex64 {
        self.entries.dotc(&(op.matrix() * &self.entries))
    }

    pub fn apply(&self, op: &Operator) -> Result<StateVector> {
        Self::normalized(op.matrix() * &self.entries)
    }
}

/// `|ψ><ψ|` together with its generating unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneProjector {
    vector: StateVector,
    matrix: Operator,
}

impl RankOneProjector {
    pub fn from_state(vector: StateVector) -> Self {
        let m = &vector.entries * vector.entries.adjoint();
        let matrix = Operator::from_square(m);
        Self { vector, matrix }
    }

    pub fn vector(&self) -> &StateVector {
        &self.vector
    }

    pub fn operator(&self) -> &Operator {
        &self.matrix
    }

    pub fn into_operator(self) -> Operator {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

impl AsRef<Operator> for RankOneProjector {
    fn as_ref(&self) -> &Operator {
        &self.matrix
    }
}

/// `P = ψψ†/‖ψ‖²`.
pub fn projector_from_vector(psi: &DVector<Complex64>) -> Result<RankOneProjector> {
    Ok(RankOneProjector::from_state(StateVector::normalized(psi.clone())?))
}

/// The three norms of the operator-space hierarchy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTriple {
    pub operator_norm: f64,
    pub hs_norm: f64,
    pub trace_norm: f64,
}

impl NormTriple {
    /// `operator ≤ HS ≤ trace`, each comparison relaxed by `tol`.
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.operator_norm <= self.hs_norm + tol && self.hs_norm <= self.trace_norm + tol
    }
}

/// `Tr(A†B)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(TomographyError::Dimension { expected: a.dim(), found: b.dim() });
    }
    Ok(a.matrix.iter().zip(b.matrix.iter()).map(|(x, y)| x.conj() * y).sum())
}

pub fn hs_norm(a: &Operator) -> f64 {
    a.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn singular_values(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let svd = nalgebra::SVD::try_new(a.clone(), false, false, f64::EPSILON, 0)
        .ok_or_else(|| TomographyError::Numerical("SVD did not converge".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

pub fn norms(a: &Operator) -> Result<NormTriple> {
    let sv = singular_values(&a.matrix)?;
    Ok(NormTriple {
        operator_norm: sv.first().copied().unwrap_or(0.0),
        hs_norm: sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
        trace_norm: sv.iter().sum(),
    })
}

/// Eigen-decomposition of a Hermitian operator.
///
/// Eigenvalues come back ascending. Each eigenvector has its phase fixed so that
/// its largest-magnitude component (first one on ties) is real and positive.
pub fn hermitian_eigen(a: &Operator) -> Result<(Vec<f64>, Vec<DVector<Complex64>>)> {
    let dev = a.hermitian_deviation();
    let scale = a.max_abs().max(1.0);
    if dev > TOL_FINITE * scale {
        return Err(TomographyError::Numerical(format!(
            "eigensolver needs a Hermitian operator (deviation {dev:.3e})"
        )));
    }
    let sym = (a.matrix() + a.matrix().adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| TomographyError::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| fix_phase(eig.eigenvectors.column(i).into_owned()))
        .collect();
    Ok((values, vectors))
}

fn fix_phase(mut v: DVector<Complex64>) -> DVector<Complex64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    // "largest" up to rounding, so near-ties resolve to the first component.
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    v.apply(|z| *z /= phase);
    v[pivot] = Complex64::new(v[pivot].re, 0.0);
    v
}

/// Gram matrix `G_ij = <P_i|P_j>` of a list of operators.
pub fn gram_matrix<O: AsRef<Operator>>(ops: &[O]) -> Result<DMatrix<Complex64>> {
    let Some(first) = ops.first() else {
        return Err(TomographyError::DegenerateInput("empty operator list".into()));
    };
    let dim = first.as_ref().dim();
    let m = ops.len();
    let mut vecs = DMatrix::zeros(dim * dim, m);
    for (k, op) in ops.iter().enumerate() {
        let op = op.as_ref();
        if op.dim() != dim {
            return Err(TomographyError::Dimension { expected: dim, found: op.dim() });
        }
        vecs.set_column(k, &op.vectorize());
    }
    Ok(vecs.adjoint() * vecs)
}

/// Numerical rank and conditioning of a Gram matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Ratio of the largest to the smallest retained singular value.
    pub condition_number: f64,
    pub singular_values: Vec<f64>,
}

/// Counts Gram singular values above `σ_max · dim² · 1e-12`, `dim` being the
/// Hilbert-space dimension.
pub fn gram_rank(gram: &DMatrix<Complex64>, dim: usize) -> Result<RankReport> {
    let sv = singular_values(gram)?;
    let max = sv.first().copied().unwrap_or(0.0);
    let threshold = max * (dim * dim) as f64 * 1e-12;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let condition_number = if rank == 0 { f64::INFINITY } else { max / sv[rank - 1] };
    Ok(RankReport { rank, condition_number, singular_values: sv })
}

pub fn operators_rank<O: AsRef<Operator>>(ops: &[O]) -> Result<RankReport> {
    let gram = gram_matrix(ops)?;
    gram_rank(&gram, ops[0].as_ref().dim())
}

/// Rank of the Gram matrix of the set's projectors; complete iff it equals `dim²`.
pub fn completeness_rank(set: &TomographicSet) -> Result<usize> {
    Ok(operators_rank(set.projectors())?.rank)
}
