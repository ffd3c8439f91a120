//! Projector families generated by a fiducial Hermitian operator and a family
//! of unitaries, `T_μ = U_μ T₀ U_μ†`, `P_{μ,n} = U_μ P⁰_n U_μ†`.
//!
//! A family whose joint commutant with `T₀` contains a nontrivial projector `Q`
//! cannot be tomographic: every `P_{μ,n}` commutes with `Q`, so `|φ₁⟩⟨φ₂|` with
//! `φ₁ ∈ ran Q`, `φ₂ ∈ ker Q` has vanishing tomograms. Triviality of the joint
//! commutant is necessary but not sufficient, as the two-element family in
//! [`z2_example`] shows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::continuous::fock::FockSpace;
use crate::discrete::{matrix_units, Branch, MAX_TRUNCATION};
use crate::error::{Result, TomographyError};
use crate::frame::{Label, TomographicSet};
use crate::operator_space::{
    hermitian_eigen, operators_rank, projector_from_vector, Operator, TOL_FINITE, TOL_TRUNC,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size below which a singular value of the commutation map counts as zero.
pub const COMMUTANT_TOL: f64 = 1e-6;

/// Labeled unitaries `U_μ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitaryFamily {
    pub members: Vec<(Label, Operator)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl UnitaryFamily {
    pub fn new(members: Vec<(Label, Operator)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(TomographyError::DegenerateInput("empty unitary family".into()));
        };
        let dim = first.dim();
        for (index, (_, u)) in members.iter().enumerate() {
            if u.dim() != dim {
                return Err(TomographyError::Dimension { expected: dim, found: u.dim() });
            }
            let deviation = u.unitarity_deviation();
            if deviation > TOL_FINITE {
                return Err(TomographyError::InvalidUnitary { index, deviation });
            }
        }
        Ok(Self { members, generator: None })
    }

    pub fn with_generator(mut self, description: impl Into<String>) -> Self {
        self.generator = Some(description.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn unitaries(&self) -> impl Iterator<Item = &Operator> {
        self.members.iter().map(|(_, u)| u)
    }
}

/// A Hermitian seed `T₀` with its spectral decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct FiducialOperator {
    t0: Operator,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<DVector<Complex64>>,
    gap_tol: f64,
}

impl FiducialOperator {
    pub fn new(t0: Operator) -> Result<Self> {
        let scale = t0.max_abs().max(1.0);
        if !t0.is_hermitian(TOL_FINITE * scale) {
            return Err(TomographyError::DegenerateInput("fiducial operator must be Hermitian".into()));
        }
        let (eigenvalues, eigenvectors) = hermitian_eigen(&t0)?;
        Ok(Self { t0, eigenvalues, eigenvectors, gap_tol: 1e-8 * scale })
    }

    pub fn operator(&self) -> &Operator {
        &self.t0
    }

    pub fn dim(&self) -> usize {
        self.t0.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[DVector<Complex64>] {
        &self.eigenvectors
    }

    /// Smallest gap between consecutive eigenvalues (infinite in dimension 1).
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn is_generic(&self) -> bool {
        self.min_gap() > self.gap_tol
    }

    /// Eigenvalue clusters `(λ, indices)` separated by more than the gap tolerance.
    pub fn clusters(&self) -> Vec<(f64, Vec<usize>)> {
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (i, &v) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some((_, idx)) if v - self.eigenvalues[*idx.last().unwrap()] <= self.gap_tol => idx.push(i),
                _ => out.push((v, vec![i])),
            }
        }
        out
    }

    /// Indices of eigenvalues of multiplicity one.
    pub fn simple_eigenvalues(&self) -> Vec<usize> {
        self.clusters().into_iter().filter(|(_, idx)| idx.len() == 1).map(|(_, idx)| idx[0]).collect()
    }

    /// Orthogonal projectors onto each eigenspace.
    pub fn spectral_projectors(&self) -> Vec<Operator> {
        self.clusters()
            .into_iter()
            .map(|(_, idx)| {
                let mut p = DMatrix::zeros(self.dim(), self.dim());
                for i in idx {
                    let v = &self.eigenvectors[i];
                    p += v * v.adjoint();
                }
                Operator::from_square(p)
            })
            .collect()
    }
}

fn check_dims(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<()> {
    if fam.dim() != t0.dim() {
        return Err(TomographyError::Dimension { expected: t0.dim(), found: fam.dim() });
    }
    Ok(())
}

/// `U_μ T₀ U_μ†` for each member.
pub fn isospectral_family(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<Vec<Operator>> {
    check_dims(t0, fam)?;
    Ok(fam.unitaries().map(|u| t0.operator().conjugate_by(u)).collect())
}

/// Rank-one projectors `U_μ |e_n⟩⟨e_n| U_μ†` with their provenance.
#[derive(Clone, Debug)]
pub struct GeneratedSet {
    pub set: TomographicSet,
    /// Eigen-indices of `T₀` used for every member, ascending.
    pub levels: Vec<usize>,
    pub family_size: usize,
}

impl GeneratedSet {
    /// `Σ_n Tr(ρ P_{μ,n})` for each member `μ`.
    pub fn marginal_sums(&self, rho: &Operator) -> Result<Vec<f64>> {
        let table = crate::frame::tomogram(&self.set, rho)?;
        Ok(table.values.chunks(self.levels.len()).map(|c| c.iter().map(|v| v.re).sum()).collect())
    }

    pub fn completeness_rank(&self) -> Result<usize> {
        crate::operator_space::completeness_rank(&self.set)
    }
}

fn member_label(label: &Label, n: usize) -> Label {
    match label {
        Label::Index(k) => Label::Params(vec![*k as f64, n as f64]),
        Label::Params(p) => Label::Params(p.iter().copied().chain([n as f64]).collect()),
        Label::Name(s) => Label::Name(format!("{s}#{n}")),
        Label::Pair(p) => Label::Name(format!("{},{},{:?},{:?}#{n}", p.n, p.m, p.branch, p.eig)),
    }
}

fn build_generated(t0: &FiducialOperator, fam: &UnitaryFamily, levels: Vec<usize>) -> Result<GeneratedSet> {
    let mut projectors = Vec::with_capacity(fam.len() * levels.len());
    let mut labels = Vec::with_capacity(fam.len() * levels.len());
    for (label, u) in &fam.members {
        for &n in &levels {
            let v = u.matrix() * &t0.eigenvectors()[n];
            projectors.push(projector_from_vector(&v)?);
            labels.push(member_label(label, n));
        }
    }
    Ok(GeneratedSet { set: TomographicSet::from_projectors(projectors, labels)?, levels, family_size: fam.len() })
}

/// All eigenprojectors of every `T_μ`; requires a simple spectrum.
pub fn generated_projector_set(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<GeneratedSet> {
    check_dims(t0, fam)?;
    if !t0.is_generic() {
        return Err(TomographyError::DegenerateSpectrum { gap: t0.min_gap() });
    }
    build_generated(t0, fam, (0..t0.dim()).collect())
}

/// Eigenprojectors of the simple eigenvalues of every `T_μ`; degenerate
/// eigenspaces are skipped since they carry no rank-one projector.
pub fn generated_simple_projector_set(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<GeneratedSet> {
    check_dims(t0, fam)?;
    let levels = t0.simple_eigenvalues();
    if levels.is_empty() {
        return Err(TomographyError::DegenerateSpectrum { gap: t0.min_gap() });
    }
    build_generated(t0, fam, levels)
}

/// Orthonormal (Hilbert-Schmidt) basis of `{X : [A, X] = 0 for all A in ops}`.
///
/// Each operator is normalized, its commutation map `X ↦ AX − XA` is written as
/// `A ⊗ I − I ⊗ Aᵀ` on row-major vectors, and the null space of the stacked maps
/// is read off the eigenvectors of `Σ L†L` whose eigenvalues fall below
/// `(COMMUTANT_TOL)²` of the largest.
pub fn joint_commutant(ops: &[&Operator]) -> Result<Vec<Operator>> {
    let Some(first) = ops.first() else {
        return Err(TomographyError::DegenerateInput("commutant of an empty set".into()));
    };
    let dim = first.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let mut normal = DMatrix::<Complex64>::zeros(dim * dim, dim * dim);
    for op in ops {
        if op.dim() != dim {
            return Err(TomographyError::Dimension { expected: dim, found: op.dim() });
        }
        let scale = op.max_abs();
        if scale == 0.0 {
            continue;
        }
        let a = op.matrix() / Complex64::new(scale, 0.0);
        let l = a.kronecker(&id) - id.kronecker(&a.transpose());
        normal += l.adjoint() * l;
    }
    let (values, vectors) = hermitian_eigen(&Operator::from_square(normal))?;
    let top = values.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let threshold = COMMUTANT_TOL * COMMUTANT_TOL * top;
    values
        .iter()
        .zip(vectors)
        .filter(|(v, _)| **v <= threshold)
        .map(|(_, vec)| Operator::from_vectorized(dim, &vec))
        .collect()
}

fn family_ops<'a>(t0: &'a FiducialOperator, fam: &'a UnitaryFamily) -> Vec<&'a Operator> {
    std::iter::once(t0.operator()).chain(fam.unitaries()).collect()
}

/// Whether the joint commutant of `T₀` and the family is spanned by `I`.
pub fn commutant_intersection_trivial(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<bool> {
    check_dims(t0, fam)?;
    Ok(joint_commutant(&family_ops(t0, fam))?.len() == 1)
}

/// A nontrivial projector `Q` commuting with `T₀` and every `U_μ`, and the
/// operator `|φ₁⟩⟨φ₂|` (`φ₁ ∈ ran Q`, `φ₂ ∈ ker Q`) invisible to the generated set.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantWitness {
    pub projector: Operator,
    pub witness: Operator,
    pub rank: usize,
}

/// Looks for a reducing subspace through the spectrum of a random Hermitian
/// element of the joint commutant (seeded, so the search is deterministic).
pub fn common_invariant_subspace(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<Option<InvariantWitness>> {
    check_dims(t0, fam)?;
    let basis = joint_commutant(&family_ops(t0, fam))?;
    if basis.len() <= 1 {
        return Ok(None);
    }
    let dim = t0.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57);
    for _ in 0..8 {
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for b in &basis {
            let herm = b.matrix() + b.matrix().adjoint();
            let anti = (b.matrix() - b.matrix().adjoint()) * Complex64::new(0.0, 1.0);
            let (x, y): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h += herm * Complex64::new(x, 0.0) + anti * Complex64::new(y, 0.0);
        }
        let (values, vectors) = hermitian_eigen(&Operator::from_square(h))?;
        let spread = values[dim - 1] - values[0];
        if spread < 1e-6 {
            continue;
        }
        let cut = values.iter().position(|v| v - values[0] > 1e-6 * spread).unwrap_or(dim);
        let mut q = DMatrix::zeros(dim, dim);
        for v in &vectors[..cut] {
            q += v * v.adjoint();
        }
        let witness = &vectors[0] * vectors[cut].adjoint();
        return Ok(Some(InvariantWitness {
            projector: Operator::from_square(q),
            witness: Operator::from_square(witness),
            rank: cut,
        }));
    }
    Ok(None)
}

/// `{irreducible, invariant_witness, completeness_rank}` for a family.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticReport {
    pub irreducible: bool,
    pub invariant_witness: Option<Operator>,
    /// Rank of the span of all spectral projectors `U_μ Π_λ U_μ†`.
    pub completeness_rank: usize,
    pub required_rank: usize,
}

impl DiagnosticReport {
    pub fn tomographic(&self) -> bool {
        self.completeness_rank == self.required_rank
    }
}

pub fn diagnose(t0: &FiducialOperator, fam: &UnitaryFamily) -> Result<DiagnosticReport> {
    check_dims(t0, fam)?;
    let irreducible = commutant_intersection_trivial(t0, fam)?;
    let invariant_witness = common_invariant_subspace(t0, fam)?.map(|w| w.witness);
    let spectral = t0.spectral_projectors();
    let projectors: Vec<Operator> =
        fam.unitaries().flat_map(|u| spectral.iter().map(move |p| p.conjugate_by(u))).collect();
    Ok(DiagnosticReport {
        irreducible,
        invariant_witness,
        completeness_rank: operators_rank(&projectors)?.rank,
        required_rank: t0.dim() * t0.dim(),
    })
}

/// `T₀ = [[α, β], [β*, γ]]` with the family `{I, diag(1, −1)}`.
pub fn z2_example(alpha: f64, beta: Complex64, gamma: f64) -> Result<(FiducialOperator, UnitaryFamily)> {
    let t0 = Operator::from_row_slice(2, &[Complex64::new(alpha, 0.0), beta, beta.conj(), Complex64::new(gamma, 0.0)])?;
    let fam = UnitaryFamily::new(vec![
        (Label::Index(0), Operator::identity(2)),
        (Label::Index(1), Operator::diagonal(&[1.0, -1.0])),
    ])?
    .with_generator("Z2 = {I, sigma3}");
    Ok((FiducialOperator::new(t0)?, fam))
}

/// `[α + γ ± √((α − γ)² + 4|β|²)] / 2`, ascending.
pub fn z2_eigenvalues(alpha: f64, beta: Complex64, gamma: f64) -> [f64; 2] {
    let root = ((alpha - gamma).powi(2) + 4.0 * beta.norm_sqr()).sqrt();
    [(alpha + gamma - root) / 2.0, (alpha + gamma + root) / 2.0]
}

/// `exp((r/2)(a² e^{−2iθ} − a†² e^{2iθ}) − iλ a†a)` with `r = √(μ² + ν²)`,
/// `θ = atan2(ν, μ)/2`, `λ = 0`. The exponent is anti-Hermitian and even in
/// the ladder operators, so the result is unitary and parity preserving.
pub fn squeeze_operator(fock: &FockSpace, mu: f64, nu: f64) -> Operator {
    let r = (mu * mu + nu * nu).sqrt();
    let theta = 0.5 * nu.atan2(mu);
    let lambda = 0.0;
    let a = fock.annihilation().matrix();
    let a2 = a * a;
    let phase = Complex64::from_polar(1.0, -2.0 * theta);
    let gen = (&a2 * phase - a2.adjoint() * phase.conj()) * Complex64::new(0.5 * r, 0.0)
        - fock.number().matrix() * Complex64::new(0.0, lambda);
    Operator::from_square(gen.exp())
}

/// A 3 × 3 grid of `(μ, ν)` in `{−0.3, 0, 0.3}²`.
pub fn default_squeeze_grid() -> Vec<(f64, f64)> {
    let v = [-0.3, 0.0, 0.3];
    v.iter().flat_map(|&mu| v.iter().map(move |&nu| (mu, nu))).collect()
}

/// The squeeze family on a truncated Fock space together with the parity obstruction.
#[derive(Clone, Debug)]
pub struct SqueezeFamily {
    pub fiducial: FiducialOperator,
    pub family: UnitaryFamily,
    pub parity: Operator,
    /// Largest entry of `[S(μ,ν), parity]` over the grid.
    pub max_parity_commutator: f64,
    pub generated: GeneratedSet,
    /// `|0⟩⟨1|`: even range, odd kernel of the parity projector.
    pub witness: Operator,
    /// Largest `|Tr(P W)|` over the generated set.
    pub witness_max_tomogram: f64,
}

impl SqueezeFamily {
    pub fn completeness_rank(&self) -> Result<usize> {
        self.generated.completeness_rank()
    }
}

pub fn squeeze_family_truncated(n: usize, grid: &[(f64, f64)]) -> Result<SqueezeFamily> {
    if n < 8 || n % 2 == 1 {
        return Err(TomographyError::DegenerateInput(format!("squeeze truncation must be even and at least 8, got {n}")));
    }
    if grid.is_empty() {
        return Err(TomographyError::DegenerateInput("empty (mu, nu) grid".into()));
    }
    let fock = FockSpace::new(n)?;
    let members = grid
        .iter()
        .map(|&(mu, nu)| (Label::params(&[mu, nu]), squeeze_operator(&fock, mu, nu)))
        .collect();
    let family = UnitaryFamily::new(members)?.with_generator("exp((r/2)(a^2 e^{-2i theta} - h.c.))");
    let parity = fock.parity();
    let max_parity_commutator = family.unitaries().map(|s| s.commutator(&parity).max_abs()).fold(0.0, f64::max);
    if max_parity_commutator > TOL_TRUNC {
        return Err(TomographyError::Numerical(format!(
            "squeeze family breaks parity by {max_parity_commutator:.3e}"
        )));
    }
    let fiducial = FiducialOperator::new(fock.number())?;
    let generated = generated_projector_set(&fiducial, &family)?;
    let witness = Operator::unit(n, 0, 1);
    let table = crate::frame::tomogram(&generated.set, &witness)?;
    let witness_max_tomogram = table.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(SqueezeFamily { fiducial, family, parity, max_parity_commutator, generated, witness, witness_max_tomogram })
}

/// `cos(φ/2) I − i sin(φ/2) σ·n` on the first two levels, identity elsewhere.
pub fn embedded_rotation(dim: usize, axis: [f64; 3], half_angle: f64) -> Operator {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [nx, ny, nz] = axis.map(|x| x / norm);
    let (s, c) = half_angle.sin_cos();
    let mut m = DMatrix::<Complex64>::identity(dim, dim);
    let mi = Complex64::new(0.0, -s);
    m[(0, 0)] = Complex64::new(c, 0.0) + mi * nz;
    m[(0, 1)] = mi * Complex64::new(nx, -ny);
    m[(1, 0)] = mi * Complex64::new(nx, ny);
    m[(1, 1)] = Complex64::new(c, 0.0) - mi * nz;
    Operator::from_square(m)
}

/// Permutation matrix exchanging levels `i` and `j` (1-based).
pub fn level_swap(dim: usize, i: usize, j: usize) -> Operator {
    let mut m = DMatrix::<Complex64>::identity(dim, dim);
    if i != j {
        m[(i - 1, i - 1)] = ZERO;
        m[(j - 1, j - 1)] = ZERO;
        m[(i - 1, j - 1)] = ONE;
        m[(j - 1, i - 1)] = ONE;
    }
    Operator::from_square(m)
}

/// One member `W` of the Pauli-and-swap family with its image `W T₀ W†`.
#[derive(Clone, Debug)]
pub struct PauliSwapMember {
    pub n: usize,
    pub m: usize,
    pub branch: Branch,
    pub unitary: Operator,
    pub image: Operator,
}

#[derive(Clone, Debug)]
pub struct PauliSwapGeneration {
    pub fiducial: FiducialOperator,
    pub family: UnitaryFamily,
    pub members: Vec<PauliSwapMember>,
}

impl PauliSwapGeneration {
    /// Largest entrywise deviation of the images from `2E⁺_nm`, `2E⁻_nm`.
    pub fn max_deviation(&self) -> Result<f64> {
        let units = matrix_units(self.fiducial.dim())?;
        let mut worst: f64 = 0.0;
        for member in &self.members {
            let e = match member.branch {
                Branch::Plus => units.e_plus(member.n, member.m)?,
                Branch::Minus => units.e_minus(member.n, member.m)?,
            };
            worst = worst.max(member.image.max_abs_diff(&e.scale(Complex64::new(2.0, 0.0))));
        }
        Ok(worst)
    }

    /// Eigenprojectors of the simple eigenvalues `±1` of every image.
    pub fn generated_set(&self) -> Result<GeneratedSet> {
        generated_simple_projector_set(&self.fiducial, &self.family)
    }
}

/// `T₀ = diag(1, −1, 0, …)` moved by `U_{1,n} U_{2,m} S(n₁, π/2)` and
/// `U_{1,n} U_{2,m} S(n₂, π/4) S(n₁, π/2)` for every `n < m`, with
/// `n₁ = (1, 0, 1)/√2`, `n₂ = (0, 0, 1)`. The rotations carry `σ₃` to `σ₁` and
/// then `σ₂` on the first two levels; the swaps move that block to `(n, m)`.
pub fn pauli_swap_generation(dim: usize) -> Result<PauliSwapGeneration> {
    if dim < 3 {
        return Err(TomographyError::DegenerateInput(format!("Pauli-swap generation needs N ≥ 3, got {dim}")));
    }
    if dim > MAX_TRUNCATION {
        return Err(TomographyError::Parameter(format!("truncation {dim} exceeds the cap of {MAX_TRUNCATION}")));
    }
    let mut diag = vec![0.0; dim];
    diag[0] = 1.0;
    diag[1] = -1.0;
    let t0 = Operator::diagonal(&diag);
    let s1 = embedded_rotation(dim, [1.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
    let s2 = embedded_rotation(dim, [0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_4);
    let s21 = s2.mul(&s1);
    let mut members = Vec::new();
    for n in 1..=dim {
        for m in n + 1..=dim {
            let swaps = level_swap(dim, 1, n).mul(&level_swap(dim, 2, m));
            for (branch, rot) in [(Branch::Plus, &s1), (Branch::Minus, &s21)] {
                let unitary = swaps.mul(rot);
                let image = t0.conjugate_by(&unitary);
                members.push(PauliSwapMember { n, m, branch, unitary, image });
            }
        }
    }
    let family = UnitaryFamily::new(
        members
            .iter()
            .map(|mb| {
                let b = if mb.branch == Branch::Plus { "plus" } else { "minus" };
                (Label::Name(format!("{},{},{b}", mb.n, mb.m)), mb.unitary.clone())
            })
            .collect(),
    )?
    .with_generator("U_{1,n} U_{2,m} S(n1, pi/2) [S(n2, pi/4)]");
    Ok(PauliSwapGeneration { fiducial: FiducialOperator::new(t0)?, family, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_space::completeness_rank;
    use crate::random::{random_density, random_hermitian, random_state};
    use crate::frame::tomogram;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Operator {
        let h = random_hermitian(dim, rng);
        Operator::new((h.matrix() * c(0.0, 1.0)).exp()).unwrap()
    }

    #[test]
    fn trivial_family_returns_the_fiducial() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let t0 = FiducialOperator::new(random_hermitian(3, &mut rng)).unwrap();
        let fam = UnitaryFamily::new(vec![(Label::Index(0), Operator::identity(3))]).unwrap();
        assert_eq!(isospectral_family(&t0, &fam).unwrap(), vec![t0.operator().clone()]);
    }

    #[test]
    fn non_unitary_members_are_rejected() {
        let err = UnitaryFamily::new(vec![
            (Label::Index(0), Operator::identity(2)),
            (Label::Index(1), Operator::diagonal(&[1.0, 2.0])),
        ])
        .unwrap_err();
        assert!(matches!(err, TomographyError::InvalidUnitary { index: 1, .. }));
        // an embedding into zeros instead of the identity would not be unitary
        let mut m = embedded_rotation(3, [1.0, 0.0, 1.0], 1.0).into_matrix();
        m[(2, 2)] = ZERO;
        assert!(UnitaryFamily::new(vec![(Label::Index(0), Operator::new(m).unwrap())]).is_err());
    }

    #[test]
    fn z2_family_and_spectrum() {
        let beta = c(0.4, -0.3);
        let (t0, fam) = z2_example(0.5, beta, -1.0).unwrap();
        let ts = isospectral_family(&t0, &fam).unwrap();
        let flipped = Operator::from_row_slice(2, &[c(0.5, 0.0), -beta, -beta.conj(), c(-1.0, 0.0)]).unwrap();
        assert!(ts[1].max_abs_diff(&flipped) < 1e-15);
        let expected = z2_eigenvalues(0.5, beta, -1.0);
        for t in &ts {
            let (vals, _) = hermitian_eigen(t).unwrap();
            assert!((vals[0] - expected[0]).abs() < 1e-12 && (vals[1] - expected[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn z2_counterexample_is_irreducible_but_incomplete() {
        let (t0, fam) = z2_example(1.0, c(1.0, 0.0), 2.0).unwrap();
        assert!(commutant_intersection_trivial(&t0, &fam).unwrap());
        assert!(common_invariant_subspace(&t0, &fam).unwrap().is_none());
        let generated = generated_projector_set(&t0, &fam).unwrap();
        assert_eq!(generated.completeness_rank().unwrap(), 3);
        let report = diagnose(&t0, &fam).unwrap();
        assert!(report.irreducible && !report.tomographic());
        // α = γ = 0 with real β: still at most three independent directions
        let (t0, fam) = z2_example(0.0, c(0.7, 0.0), 0.0).unwrap();
        assert!(generated_projector_set(&t0, &fam).unwrap().completeness_rank().unwrap() <= 3);
    }

    #[test]
    fn identity_fiducial_has_full_commutant() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let fam = UnitaryFamily::new(vec![(Label::Index(0), haar_unitary(3, &mut rng))]).unwrap();
        let t0 = FiducialOperator::new(Operator::identity(3)).unwrap();
        assert!(!commutant_intersection_trivial(&t0, &fam).unwrap());
        assert!(matches!(generated_projector_set(&t0, &fam), Err(TomographyError::DegenerateSpectrum { .. })));
    }

    #[test]
    fn diagonal_fiducial_with_trivial_family_is_reducible() {
        let t0 = FiducialOperator::new(Operator::diagonal(&[0.0, 1.0, 2.5])).unwrap();
        let fam = UnitaryFamily::new(vec![(Label::Index(0), Operator::identity(3))]).unwrap();
        let w = common_invariant_subspace(&t0, &fam).unwrap().unwrap();
        let q = &w.projector;
        assert!(q.mul(q).max_abs_diff(q) < 1e-10);
        assert!(q.sub(&Operator::diagonal(&q.matrix().diagonal().iter().map(|z| z.re).collect::<Vec<_>>())).max_abs() < 1e-10);
        let generated = generated_projector_set(&t0, &fam).unwrap();
        let t = tomogram(&generated.set, &w.witness).unwrap();
        assert!(t.values.iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn marginals_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let t0 = FiducialOperator::new(random_hermitian(4, &mut rng)).unwrap();
        let fam = UnitaryFamily::new((0..5).map(|k| (Label::Index(k), haar_unitary(4, &mut rng))).collect()).unwrap();
        let generated = generated_projector_set(&t0, &fam).unwrap();
        for _ in 0..20 {
            let rho = random_density(4, &mut rng);
            for s in generated.marginal_sums(&rho).unwrap() {
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
        // each member is isospectral to the seed
        for t in isospectral_family(&t0, &fam).unwrap() {
            let (vals, _) = hermitian_eigen(&t).unwrap();
            for (a, b) in vals.iter().zip(t0.eigenvalues()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn random_family_is_tomographic_and_irreducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let t0 = FiducialOperator::new(random_hermitian(3, &mut rng)).unwrap();
        let fam = UnitaryFamily::new((0..4).map(|k| (Label::Index(k), haar_unitary(3, &mut rng))).collect()).unwrap();
        let report = diagnose(&t0, &fam).unwrap();
        assert!(report.tomographic());
        assert!(report.irreducible);
        assert!(report.invariant_witness.is_none());
    }

    #[test]
    fn commutant_of_block_diagonal_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let psi = random_state(2, &mut rng);
        let mut m = DMatrix::zeros(3, 3);
        m.view_mut((0, 0), (2, 2)).copy_from(&(psi.entries() * psi.entries().adjoint()));
        m[(2, 2)] = c(3.0, 0.0);
        let a = Operator::new(m).unwrap();
        // commutant of a Hermitian operator with simple spectrum is its polynomial algebra
        assert_eq!(joint_commutant(&[&a]).unwrap().len(), 3);
    }

    #[test]
    fn squeeze_examples() {
        let fock = FockSpace::new(16).unwrap();
        assert!(squeeze_operator(&fock, 0.0, 0.0).max_abs_diff(&Operator::identity(16)) < 1e-15);
        let s = squeeze_operator(&fock, 0.2, -0.1);
        assert!(s.unitarity_deviation() < 1e-12);
        assert!(s.commutator(&fock.parity()).max_abs() < 1e-8);
        assert!(squeeze_family_truncated(7, &default_squeeze_grid()).is_err());
        assert!(squeeze_family_truncated(6, &default_squeeze_grid()).is_err());
    }

    #[test]
    fn squeeze_obstruction() {
        let fam = squeeze_family_truncated(8, &default_squeeze_grid()).unwrap();
        assert!(fam.max_parity_commutator < 1e-8);
        assert!(fam.witness_max_tomogram < 1e-10);
        let rank = fam.completeness_rank().unwrap();
        assert!(rank <= 32 && rank < 64, "{rank}");
        assert!(!commutant_intersection_trivial(&fam.fiducial, &fam.family).unwrap());
        let w = common_invariant_subspace(&fam.fiducial, &fam.family).unwrap().unwrap();
        // the reducing projector is one of the two parity projectors
        let even = fam.parity.add(&Operator::identity(8)).scale(c(0.5, 0.0));
        let odd = Operator::identity(8).sub(&even);
        assert!(w.projector.max_abs_diff(&even) < 1e-8 || w.projector.max_abs_diff(&odd) < 1e-8);
        let t = tomogram(&fam.generated.set, &w.witness).unwrap();
        assert!(t.values.iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn block_rotations_match_pauli_identities() {
        let sx = Operator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let sy = Operator::from_row_slice(2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap();
        let sz = Operator::diagonal(&[1.0, -1.0]);
        let r1 = embedded_rotation(2, [1.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
        assert!(sz.conjugate_by(&r1).max_abs_diff(&sx) < 1e-15);
        let r2 = embedded_rotation(2, [0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_4);
        assert!(sx.conjugate_by(&r2).max_abs_diff(&sy) < 1e-15);
        // closed form against the matrix exponential
        let n = [0.3, -0.4, 0.5];
        let norm = (0.5f64).sqrt();
        let gen = sx.scale(c(n[0] / norm, 0.0)).add(&sy.scale(c(n[1] / norm, 0.0))).add(&sz.scale(c(n[2] / norm, 0.0)));
        let expm = Operator::new((gen.matrix() * c(0.0, -0.35)).exp()).unwrap();
        assert!(embedded_rotation(2, n, 0.35).max_abs_diff(&expm) < 1e-14);
    }

    #[test]
    fn pauli_swap_reproduces_hermitian_units() {
        for dim in 3..=6 {
            let gen = pauli_swap_generation(dim).unwrap();
            assert!(gen.max_deviation().unwrap() < 1e-12);
            let set = gen.generated_set().unwrap();
            assert_eq!(completeness_rank(&set.set).unwrap(), dim * dim);
            assert!(commutant_intersection_trivial(&gen.fiducial, &gen.family).unwrap());
        }
        assert!(pauli_swap_generation(2).is_err());
    }
}
