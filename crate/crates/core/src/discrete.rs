//! The countable tomographic set built from matrix units of a truncated space.
//!
//! Indices are 1-based throughout (`|1⟩, …, |N⟩`). For each unordered pair the
//! canonical key is `n < m`, and
//!
//! * `E⁺_nm = ½(E_nm + E_mn)` with eigenvectors `(|n⟩ ± |m⟩)/√2`,
//! * `E⁻_nm = (i/2)(E_mn − E_nm)` with eigenvectors `(|n⟩ ± i|m⟩)/√2`,
//!
//! both with eigenvalues `±½`. For `N = 2`, `E⁺₁₂ = ½σ₁` and `E⁻₁₂ = ½σ₂`.
//! The projectors onto these eigenvectors together with the diagonal `P_nn`
//! form a complete set; keeping one projector of each `±` pair gives a basis.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomographyError};
use crate::frame::{Label, TomogramTable, TomographicSet};
use crate::operator_space::{Operator, RankOneProjector, StateVector};

/// Largest supported truncation.
pub const MAX_TRUNCATION: usize = 64;
pub const DEFAULT_TRUNCATION: usize = 8;

const HALF: Complex64 = Complex64::new(0.5, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Eigenprojectors of `E⁺`.
    Plus,
    /// Eigenprojectors of `E⁻`.
    Minus,
}

/// Sign of the eigenvalue `±½`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eig {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Eig {
    fn sign(self) -> f64 {
        match self {
            Eig::Pos => 1.0,
            Eig::Neg => -1.0,
        }
    }
}

/// `P_nn` (no branch) or `P^{branch,eig}_nm` with `n < m`; indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairLabel {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig: Option<Eig>,
}

impl PairLabel {
    pub fn diagonal(n: usize) -> Self {
        Self { n, m: n, branch: None, eig: None }
    }

    /// Normalizes `(n, m)` to `n < m`.
    pub fn pair(n: usize, m: usize, branch: Branch, eig: Eig) -> Self {
        Self { n: n.min(m), m: n.max(m), branch: Some(branch), eig: Some(eig) }
    }

    pub fn is_diagonal(&self) -> bool {
        self.branch.is_none()
    }

    /// The unit vector this label projects onto.
    pub fn state(&self, dim: usize) -> Result<StateVector> {
        check_index(self.n, dim)?;
        check_index(self.m, dim)?;
        let mut v = DVector::zeros(dim);
        match (self.branch, self.eig) {
            (None, None) if self.n == self.m => v[self.n - 1] = Complex64::new(1.0, 0.0),
            (Some(branch), Some(eig)) if self.n < self.m => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                v[self.n - 1] = Complex64::new(s, 0.0);
                v[self.m - 1] = match branch {
                    Branch::Plus => Complex64::new(eig.sign() * s, 0.0),
                    Branch::Minus => Complex64::new(0.0, eig.sign() * s),
                };
            }
            _ => return Err(TomographyError::DegenerateInput(format!("malformed pair label {self:?}"))),
        }
        StateVector::normalized(v)
    }

    pub fn projector(&self, dim: usize) -> Result<RankOneProjector> {
        Ok(RankOneProjector::from_state(self.state(dim)?))
    }
}

fn check_index(n: usize, dim: usize) -> Result<()> {
    if n == 0 || n > dim {
        return Err(TomographyError::DegenerateInput(format!("index {n} outside 1..={dim}")));
    }
    Ok(())
}

fn check_truncation(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(TomographyError::DegenerateInput(format!("truncation must be at least 2, got {dim}")));
    }
    if dim > MAX_TRUNCATION {
        return Err(TomographyError::Parameter(format!("truncation {dim} exceeds the cap of {MAX_TRUNCATION}")));
    }
    Ok(())
}

/// Matrix units and their Hermitian combinations in dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixUnits {
    dim: usize,
}

pub fn matrix_units(dim: usize) -> Result<MatrixUnits> {
    check_truncation(dim)?;
    Ok(MatrixUnits { dim })
}

impl MatrixUnits {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|n⟩⟨m|`.
    pub fn e(&self, n: usize, m: usize) -> Result<Operator> {
        check_index(n, self.dim)?;
        check_index(m, self.dim)?;
        Ok(Operator::unit(self.dim, n - 1, m - 1))
    }

    /// `½(E_nm + E_mn)`; symmetric in its indices.
    pub fn e_plus(&self, n: usize, m: usize) -> Result<Operator> {
        let e = self.e(n, m)?;
        Ok(e.add(&e.adjoint()).scale(HALF))
    }

    /// `(i/2)(E_pq − E_qp)` with `p = max(n, m)`, `q = min(n, m)`; symmetric in
    /// its indices, so both orders name the same operator.
    pub fn e_minus(&self, n: usize, m: usize) -> Result<Operator> {
        if n == m {
            return Err(TomographyError::DegenerateInput("E⁻ needs n ≠ m".into()));
        }
        let e = self.e(n.max(m), n.min(m))?;
        Ok(e.sub(&e.adjoint()).scale(Complex64::new(0.0, 0.5)))
    }
}

/// The four eigenprojectors of `E⁺_nm` and `E⁻_nm`.
#[derive(Clone, Debug)]
pub struct PairProjectors {
    /// Ordered `(+,+), (+,−), (−,+), (−,−)`.
    pub labels: [PairLabel; 4],
    pub projectors: [RankOneProjector; 4],
}

pub fn pair_projectors(n: usize, m: usize, dim: usize) -> Result<PairProjectors> {
    check_truncation(dim)?;
    if n == m {
        return Err(TomographyError::DegenerateInput(format!("pair needs distinct indices, got ({n}, {m})")));
    }
    let labels = pair_labels(n, m);
    let projectors = [
        labels[0].projector(dim)?,
        labels[1].projector(dim)?,
        labels[2].projector(dim)?,
        labels[3].projector(dim)?,
    ];
    Ok(PairProjectors { labels, projectors })
}

fn pair_labels(n: usize, m: usize) -> [PairLabel; 4] {
    [
        PairLabel::pair(n, m, Branch::Plus, Eig::Pos),
        PairLabel::pair(n, m, Branch::Plus, Eig::Neg),
        PairLabel::pair(n, m, Branch::Minus, Eig::Pos),
        PairLabel::pair(n, m, Branch::Minus, Eig::Neg),
    ]
}

/// All diagonal and pair labels for a truncation `N`. Projector matrices are
/// generated on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteSetBundle {
    dim: usize,
    labels: Vec<PairLabel>,
}

#[derive(Serialize, Deserialize)]
struct BundleJson {
    #[serde(rename = "N")]
    n: usize,
    labels: Vec<PairLabel>,
}

impl DiscreteSetBundle {
    pub fn new(dim: usize) -> Result<Self> {
        check_truncation(dim)?;
        let mut labels: Vec<PairLabel> = (1..=dim).map(PairLabel::diagonal).collect();
        for n in 1..=dim {
            for m in n + 1..=dim {
                labels.extend(pair_labels(n, m));
            }
        }
        Ok(Self { dim, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[PairLabel] {
        &self.labels
    }

    pub fn units(&self) -> MatrixUnits {
        MatrixUnits { dim: self.dim }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BundleJson { n: self.dim, labels: self.labels.clone() }).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: BundleJson = serde_json::from_value(value.clone())?;
        let bundle = Self::new(raw.n)?;
        if raw.labels != bundle.labels {
            return Err(TomographyError::LabelMismatch("bundle labels do not match the canonical order".into()));
        }
        Ok(bundle)
    }

    fn set_from(&self, labels: Vec<PairLabel>) -> Result<TomographicSet> {
        let projectors = labels.iter().map(|l| l.projector(self.dim)).collect::<Result<Vec<_>>>()?;
        TomographicSet::from_projectors(projectors, labels.into_iter().map(Label::Pair).collect())
    }

    /// Every projector of the bundle (`2N² − N` of them).
    pub fn full_set(&self) -> Result<TomographicSet> {
        self.set_from(self.labels.clone())
    }

    /// `{P_nn} ∪ {P^{+,+}_nm} ∪ {P^{−,+}_nm}`: exactly `N²` projectors.
    pub fn minimal_subset(&self) -> Result<TomographicSet> {
        self.set_from(
            self.labels.iter().copied().filter(|l| l.is_diagonal() || l.eig == Some(Eig::Pos)).collect(),
        )
    }

    /// `⟨ψ_l|B|ψ_l⟩` for every label, read off the two nonzero entries of `ψ_l`.
    pub fn tomogram(&self, b: &Operator) -> Result<TomogramTable> {
        if b.dim() != self.dim {
            return Err(TomographyError::Dimension { expected: self.dim, found: b.dim() });
        }
        let hermitian = b.is_hermitian(0.0);
        let values = self
            .labels
            .iter()
            .map(|l| {
                let v = pair_expectation(b, l);
                if hermitian { Complex64::new(v.re, 0.0) } else { v }
            })
            .collect();
        Ok(TomogramTable {
            labels: self.labels.iter().copied().map(Label::Pair).collect(),
            values,
            dim: self.dim,
            grid: None,
        })
    }
}

fn pair_expectation(b: &Operator, l: &PairLabel) -> Complex64 {
    let (n, m) = (l.n - 1, l.m - 1);
    match (l.branch, l.eig) {
        (Some(branch), Some(eig)) => {
            // ψ = (|n⟩ + c|m⟩)/√2
            let c = match branch {
                Branch::Plus => Complex64::new(eig.sign(), 0.0),
                Branch::Minus => Complex64::new(0.0, eig.sign()),
            };
            (b[(n, n)] + b[(m, m)] + c * b[(n, m)] + c.conj() * b[(m, n)]) * HALF
        }
        _ => b[(n, n)],
    }
}

fn lookup(table: &TomogramTable, dim: usize) -> Result<HashMap<PairLabel, Complex64>> {
    if table.dim != dim {
        return Err(TomographyError::Dimension { expected: dim, found: table.dim });
    }
    let mut map = HashMap::with_capacity(table.len());
    for (l, v) in table.labels.iter().zip(&table.values) {
        match l {
            Label::Pair(p) => {
                map.insert(*p, *v);
            }
            other => return Err(TomographyError::LabelMismatch(format!("unexpected label {other:?}"))),
        }
    }
    Ok(map)
}

/// `B = Σ_n P_nn T(P_nn) + Σ_{n<m} E⁺_nm [T(+,+) − T(+,−)] + E⁻_nm [T(−,+) − T(−,−)]`.
///
/// The formula is linear, so complex tables of non-Hermitian operators
/// reconstruct directly.
pub fn reconstruct_discrete(bundle: &DiscreteSetBundle, table: &TomogramTable) -> Result<Operator> {
    let dim = bundle.dim;
    let values = lookup(table, dim)?;
    let get = |l: &PairLabel| {
        values.get(l).copied().ok_or_else(|| TomographyError::LabelMismatch(format!("table is missing label {l:?}")))
    };
    let mut out = DMatrix::zeros(dim, dim);
    for n in 1..=dim {
        out[(n - 1, n - 1)] = get(&PairLabel::diagonal(n))?;
    }
    let i_half = Complex64::new(0.0, 0.5);
    for n in 1..=dim {
        for m in n + 1..=dim {
            let [pp, pn, mp, mn] = pair_labels(n, m);
            let plus = get(&pp)? - get(&pn)?;
            let minus = get(&mp)? - get(&mn)?;
            let (a, b) = (n - 1, m - 1);
            // E⁺ has ½ at (a,b),(b,a); E⁻ has −i/2 at (a,b), +i/2 at (b,a)
            out[(a, b)] += plus * HALF - minus * i_half;
            out[(b, a)] += plus * HALF + minus * i_half;
        }
    }
    Ok(Operator::from_square(out))
}

/// `(H₁, H₂)` with `H₁ = ½(B + B†)`, `H₂ = (i/2)(B − B†)`, both Hermitian and `B = H₁ − iH₂`.
pub fn hermitian_split(b: &Operator) -> (Operator, Operator) {
    let h1 = b.add(&b.adjoint()).scale(HALF);
    let h2 = b.sub(&b.adjoint()).scale(Complex64::new(0.0, 0.5));
    (h1, h2)
}

/// Reconstructs `B = H₁ − iH₂` from the real tables of its two Hermitian parts.
pub fn reconstruct_split(bundle: &DiscreteSetBundle, h1: &TomogramTable, h2: &TomogramTable) -> Result<Operator> {
    if !h1.is_real() || !h2.is_real() {
        return Err(TomographyError::Numerical("split reconstruction expects real tables".into()));
    }
    let a = reconstruct_discrete(bundle, h1)?;
    let b = reconstruct_discrete(bundle, h2)?;
    Ok(a.sub(&b.scale(Complex64::new(0.0, 1.0))))
}

/// Result of applying a candidate resolution of unity to every matrix unit.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub units_checked: usize,
    pub max_deviation: f64,
}

/// Applies `Σ_n |P_nn⟩⟨P_nn| + Σ_{n<m} Σ_± (±|E^b_nm⟩⟨P^{b,±}_nm|)` to each `E_jk`.
/// With `diagonal_only` the pair terms are dropped.
pub fn resolution_of_unity_discrete(dim: usize, diagonal_only: bool) -> Result<ResolutionReport> {
    let bundle = DiscreteSetBundle::new(dim)?;
    let units = bundle.units();
    let mut max_deviation: f64 = 0.0;
    for j in 1..=dim {
        for k in 1..=dim {
            let e = units.e(j, k)?;
            let mut acc = Operator::zeros(dim);
            for l in bundle.labels() {
                let t = pair_expectation(&e, l);
                if t == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let kernel = match (l.branch, l.eig) {
                    (None, _) => Operator::unit(dim, l.n - 1, l.n - 1),
                    _ if diagonal_only => continue,
                    (Some(Branch::Plus), Some(eig)) => units.e_plus(l.n, l.m)?.scale(Complex64::new(eig.sign(), 0.0)),
                    (Some(Branch::Minus), Some(eig)) => units.e_minus(l.n, l.m)?.scale(Complex64::new(eig.sign(), 0.0)),
                    _ => unreachable!("bundle labels are well formed"),
                };
                acc = acc.add(&kernel.scale(t));
            }
            max_deviation = max_deviation.max(acc.max_abs_diff(&e));
        }
    }
    Ok(ResolutionReport { n: dim, units_checked: dim * dim, max_deviation })
}

/// Largest entrywise violation of `P^{b,±} = ½(P_nn + P_mm) ± E^b_nm` over all pairs.
pub fn pair_identity_deviation(dim: usize) -> Result<f64> {
    let units = matrix_units(dim)?;
    let mut worst: f64 = 0.0;
    for n in 1..=dim {
        for m in n + 1..=dim {
            let pp = pair_projectors(n, m, dim)?;
            let mid = units.e(n, n)?.add(&units.e(m, m)?).scale(HALF);
            let ep = units.e_plus(n, m)?;
            let em = units.e_minus(n, m)?;
            let expected = [mid.add(&ep), mid.sub(&ep), mid.add(&em), mid.sub(&em)];
            for (p, e) in pp.projectors.iter().zip(&expected) {
                worst = worst.max(p.operator().max_abs_diff(e));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{dual_frame, tomogram};
    use crate::operator_space::{completeness_rank, hermitian_eigen, hs_inner, hs_norm, operators_rank};
    use crate::random::{random_hermitian, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_examples() {
        let u = matrix_units(2).unwrap();
        let sx = Operator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let sy = Operator::from_row_slice(2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        assert!(u.e_plus(1, 2).unwrap().max_abs_diff(&sx.scale(HALF)) < 1e-15);
        assert!(u.e_minus(2, 1).unwrap().max_abs_diff(&sy.scale(HALF)) < 1e-15);
        assert_eq!(u.e_minus(1, 2).unwrap(), u.e_minus(2, 1).unwrap());
        let u = matrix_units(5).unwrap();
        for n in 1..=5 {
            for m in n + 1..=5 {
                assert!(hs_inner(&u.e_plus(n, m).unwrap(), &u.e_minus(n, m).unwrap()).unwrap().norm() < 1e-15);
                assert!(u.e_plus(n, m).unwrap().is_hermitian(0.0));
                assert!(u.e_minus(n, m).unwrap().is_hermitian(0.0));
            }
        }
        assert!(matrix_units(1).is_err());
        assert!(matrix_units(65).is_err());
        assert!(u.e(0, 1).is_err());
    }

    #[test]
    fn hs_inner_of_units_is_kronecker() {
        let u = matrix_units(3).unwrap();
        for (q, p, n, m) in [(1, 2, 1, 2), (1, 2, 2, 1), (3, 3, 3, 3), (1, 1, 2, 2)] {
            let v = hs_inner(&u.e(q, p).unwrap(), &u.e(n, m).unwrap()).unwrap();
            let expected = if q == n && p == m { 1.0 } else { 0.0 };
            assert_eq!(v, c(expected, 0.0));
        }
    }

    #[test]
    fn pair_projector_examples() {
        let pp = pair_projectors(1, 2, 2).unwrap();
        let half = Operator::from_real_rows(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(pp.projectors[0].operator().max_abs_diff(&half) < 1e-15);
        let u = matrix_units(4).unwrap();
        let pp = pair_projectors(2, 4, 4).unwrap();
        let plane = u.e(2, 2).unwrap().add(&u.e(4, 4).unwrap());
        assert!(pp.projectors[0].operator().add(pp.projectors[1].operator()).max_abs_diff(&plane) < 1e-15);
        assert!(pp.projectors[2].operator().add(pp.projectors[3].operator()).max_abs_diff(&plane) < 1e-15);
        assert!(pair_projectors(2, 2, 4).is_err());
        assert!(pair_projectors(1, 5, 4).is_err());
    }

    #[test]
    fn eigenvectors_match_the_eigensolver() {
        let u = matrix_units(3).unwrap();
        for (n, m) in [(1, 2), (1, 3), (2, 3)] {
            let pp = pair_projectors(n, m, 3).unwrap();
            for (op, offset) in [(u.e_plus(n, m).unwrap(), 0), (u.e_minus(n, m).unwrap(), 2)] {
                let (vals, vecs) = hermitian_eigen(&op).unwrap();
                assert!((vals[0] + 0.5).abs() < 1e-14 && (vals[2] - 0.5).abs() < 1e-14);
                assert!(vals[1].abs() < 1e-14);
                let top = crate::operator_space::projector_from_vector(&vecs[2]).unwrap();
                let bottom = crate::operator_space::projector_from_vector(&vecs[0]).unwrap();
                assert!(top.operator().max_abs_diff(pp.projectors[offset].operator()) < 1e-14);
                assert!(bottom.operator().max_abs_diff(pp.projectors[offset + 1].operator()) < 1e-14);
            }
        }
    }

    #[test]
    fn pair_identities_hold() {
        for n in [2, 3, 8, 16] {
            assert!(pair_identity_deviation(n).unwrap() < 1e-14);
        }
    }

    #[test]
    fn bundle_is_complete() {
        let bundle = DiscreteSetBundle::new(3).unwrap();
        let full = bundle.full_set().unwrap();
        assert_eq!(full.len(), 2 * 9 - 3);
        assert_eq!(completeness_rank(&full).unwrap(), 9);
    }

    #[test]
    fn minimal_subset_is_a_basis() {
        for n in [2, 3] {
            let set = DiscreteSetBundle::new(n).unwrap().minimal_subset().unwrap();
            assert_eq!(set.len(), n * n);
            assert_eq!(completeness_rank(&set).unwrap(), n * n);
            for drop in 0..set.len() {
                let smaller = set.filter(|i| i != drop).unwrap();
                assert_eq!(operators_rank(smaller.projectors()).unwrap().rank, n * n - 1);
            }
        }
    }

    #[test]
    fn fast_tomogram_matches_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let bundle = DiscreteSetBundle::new(4).unwrap();
        let b = random_matrix(4, &mut rng);
        let fast = bundle.tomogram(&b).unwrap();
        let slow = tomogram(&bundle.full_set().unwrap(), &b).unwrap();
        assert_eq!(fast.labels, slow.labels);
        for (x, y) in fast.values.iter().zip(&slow.values) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn sigma_x_example() {
        let bundle = DiscreteSetBundle::new(3).unwrap();
        let b = Operator::unit(3, 0, 1).add(&Operator::unit(3, 1, 0));
        let t = bundle.tomogram(&b).unwrap();
        let get = |l: PairLabel| t.get(&Label::Pair(l)).unwrap();
        for n in 1..=3 {
            assert_eq!(get(PairLabel::diagonal(n)), c(0.0, 0.0));
        }
        assert!((get(PairLabel::pair(1, 2, Branch::Plus, Eig::Pos)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((get(PairLabel::pair(1, 2, Branch::Plus, Eig::Neg)) - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(get(PairLabel::pair(1, 2, Branch::Minus, Eig::Pos)).norm() < 1e-15);
        assert!(reconstruct_discrete(&bundle, &t).unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn identity_uses_only_diagonal_terms() {
        let bundle = DiscreteSetBundle::new(5).unwrap();
        let t = bundle.tomogram(&Operator::identity(5)).unwrap();
        // every projector has unit trace, so all pair differences vanish
        assert!(t.values.iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-15));
        assert!(reconstruct_discrete(&bundle, &t).unwrap().max_abs_diff(&Operator::identity(5)) < 1e-15);
    }

    #[test]
    fn round_trips_at_default_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let bundle = DiscreteSetBundle::new(DEFAULT_TRUNCATION).unwrap();
        for _ in 0..10 {
            let h = random_hermitian(8, &mut rng);
            let t = bundle.tomogram(&h).unwrap();
            assert!(t.is_real());
            assert!(reconstruct_discrete(&bundle, &t).unwrap().max_abs_diff(&h) < 1e-12);
            let b = random_matrix(8, &mut rng);
            assert!(reconstruct_discrete(&bundle, &bundle.tomogram(&b).unwrap()).unwrap().max_abs_diff(&b) < 1e-12);
            let (h1, h2) = hermitian_split(&b);
            let r = reconstruct_split(&bundle, &bundle.tomogram(&h1).unwrap(), &bundle.tomogram(&h2).unwrap()).unwrap();
            assert!(r.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn missing_labels_are_reported() {
        let bundle = DiscreteSetBundle::new(3).unwrap();
        let mut t = bundle.tomogram(&Operator::identity(3)).unwrap();
        t.labels.pop();
        t.values.pop();
        assert!(matches!(reconstruct_discrete(&bundle, &t), Err(TomographyError::LabelMismatch(_))));
    }

    #[test]
    fn resolution_of_unity_and_negative_control() {
        assert!(resolution_of_unity_discrete(2, false).unwrap().max_deviation < 1e-14);
        assert!(resolution_of_unity_discrete(8, false).unwrap().max_deviation < 1e-12);
        let control = resolution_of_unity_discrete(3, true).unwrap();
        assert!((control.max_deviation - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vanishing_tomograms_force_zero_operator() {
        let bundle = DiscreteSetBundle::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let b = random_matrix(4, &mut rng).scale(c(1e-14, 0.0));
        let t = bundle.tomogram(&b).unwrap();
        assert!(t.values.iter().all(|v| v.norm() < 1e-12));
        assert!(hs_norm(&reconstruct_discrete(&bundle, &t).unwrap()) < 16.0 * 1e-12);
    }

    #[test]
    fn frame_duals_of_the_minimal_subset_agree_with_closed_form() {
        let bundle = DiscreteSetBundle::new(3).unwrap();
        let set = bundle.minimal_subset().unwrap();
        let frame = dual_frame(&set).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let b = random_matrix(3, &mut rng);
        let via_frame = frame.resolve(&set, &b).unwrap();
        let closed = reconstruct_discrete(&bundle, &bundle.tomogram(&b).unwrap()).unwrap();
        assert!(via_frame.max_abs_diff(&closed) < 1e-12);
    }

    #[test]
    fn bundle_json() {
        let bundle = DiscreteSetBundle::new(2).unwrap();
        let v = bundle.to_json();
        assert_eq!(v["N"], 2);
        assert_eq!(v["labels"][0], serde_json::json!({"n": 1, "m": 1}));
        assert_eq!(v["labels"][2], serde_json::json!({"n": 1, "m": 2, "branch": "plus", "eig": "+"}));
        assert_eq!(DiscreteSetBundle::from_json(&v).unwrap(), bundle);
        let label: Label = serde_json::from_value(v["labels"][5].clone()).unwrap();
        assert_eq!(label, Label::Pair(PairLabel::pair(1, 2, Branch::Minus, Eig::Neg)));
    }
}
