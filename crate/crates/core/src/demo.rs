//! Worked scenarios, each reporting measured deviations against tolerances.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::continuous::fock::FockSpace;
use crate::continuous::photon::{photon_reconstruct, photon_tomogram_table, PhotonGrid};
use crate::continuous::symplectic::{
    ground_state_tomogram, symplectic_round_trip, symplectic_tomogram, uniform_points, SymplecticLabel, Wavefunction,
};
use crate::discrete::{pair_identity_deviation, reconstruct_discrete, resolution_of_unity_discrete, DiscreteSetBundle};
use crate::error::{Result, TomographyError};
use crate::generators::{diagnose, squeeze_family_truncated, z2_example};
use crate::operator_space::Operator;
use crate::quadrature::PolarQuadrature;
use crate::random::{random_density_on_levels, random_hermitian, random_matrix};
use crate::spin::{spin_round_trip, SphereQuadrature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Demo {
    Spin,
    Discrete,
    Symplectic,
    Photon,
    Squeeze,
    Z2,
}

impl Demo {
    pub const ALL: [Demo; 6] = [Demo::Spin, Demo::Discrete, Demo::Symplectic, Demo::Photon, Demo::Squeeze, Demo::Z2];

    pub fn name(self) -> &'static str {
        match self {
            Demo::Spin => "spin",
            Demo::Discrete => "discrete",
            Demo::Symplectic => "symplectic",
            Demo::Photon => "photon",
            Demo::Squeeze => "squeeze",
            Demo::Z2 => "z2",
        }
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = TomographyError;

    fn from_str(s: &str) -> Result<Self> {
        Demo::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| TomographyError::Parameter(format!("unknown demo '{s}'")))
    }
}

/// One measured quantity and its bound.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// `"max"`: measured ≤ limit; `"min"`: measured ≥ limit.
    pub kind: &'static str,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, kind: "max", limit, pass: measured <= limit }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, kind: "min", limit, pass: measured >= limit }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub demo: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
}

impl DemoReport {
    fn new(demo: Demo, checks: Vec<Check>, details: serde_json::Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { demo: demo.name(), pass, checks, details }
    }
}

pub fn run_demo(demo: Demo, cfg: &RunConfig) -> Result<DemoReport> {
    match demo {
        Demo::Spin => spin(cfg),
        Demo::Discrete => discrete(cfg),
        Demo::Symplectic => symplectic(cfg),
        Demo::Photon => photon(cfg),
        Demo::Squeeze => squeeze(cfg),
        Demo::Z2 => z2(),
    }
}

fn spin(cfg: &RunConfig) -> Result<DemoReport> {
    let quad = SphereQuadrature::product(cfg.sphere.n_theta, cfg.sphere.n_phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut first = None;
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let report = spin_round_trip(&quad, &random_hermitian(2, &mut rng))?;
        worst = worst.max(report.kernel_weighted_error).max(report.projector_weighted_error);
        first.get_or_insert(report);
    }
    let checks = vec![Check::at_most("max reconstruction error", worst, cfg.tol_or(1e-10))];
    Ok(DemoReport::new(Demo::Spin, checks, json!({ "first": first, "samples": cfg.samples })))
}

fn discrete(cfg: &RunConfig) -> Result<DemoReport> {
    let n = cfg.truncation_or(8);
    let bundle = DiscreteSetBundle::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for k in 0..cfg.samples {
        let b = if k % 2 == 0 { random_matrix(n, &mut rng) } else { random_hermitian(n, &mut rng) };
        let back = reconstruct_discrete(&bundle, &bundle.tomogram(&b)?)?;
        worst = worst.max(back.max_abs_diff(&b));
    }
    let resolution = resolution_of_unity_discrete(n, false)?;
    let diagonal_only = resolution_of_unity_discrete(n, true)?;
    let checks = vec![
        Check::at_most("max reconstruction error", worst, cfg.tol_or(1e-12)),
        Check::at_most("resolution of unity on matrix units", resolution.max_deviation, cfg.tol_or(1e-12)),
        Check::at_most("pair projector identities", pair_identity_deviation(n)?, 1e-14),
        Check::at_least("diagonal-only negative control", diagonal_only.max_deviation, 0.1),
    ];
    Ok(DemoReport::new(Demo::Discrete, checks, json!({ "N": n, "projectors": bundle.labels().len(), "samples": cfg.samples })))
}

fn symplectic(cfg: &RunConfig) -> Result<DemoReport> {
    let sc = &cfg.symplectic;
    let grid = sc.grid()?;
    let psi = Wavefunction::number_state(grid, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut analytic: f64 = 0.0;
    for _ in 0..20 {
        let l = SymplecticLabel::new(rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))?;
        analytic = analytic.max((symplectic_tomogram(&psi, &l)? - ground_state_tomogram(&l)).abs());
    }
    let excited = Wavefunction::number_state(grid, 2)?;
    let mut normalization: f64 = 0.0;
    for (mu, nu) in [(1.0, 0.0), (0.0, 1.0), (0.6, -0.8), (1.3, 0.4)] {
        let hx = 0.05;
        let total: f64 = (-400..=400)
            .map(|k| symplectic_tomogram(&excited, &SymplecticLabel::new(k as f64 * hx, mu, nu)?))
            .sum::<Result<f64>>()?
            * hx;
        normalization = normalization.max((total - 1.0).abs());
    }
    let ys = uniform_points(sc.half_width, sc.points);
    let round = symplectic_round_trip(&psi, &ys, &sc.inversion())?;
    let checks = vec![
        Check::at_most("ground-state tomogram vs Gaussian", analytic, cfg.tol_or(1e-8)),
        Check::at_most("tomogram normalization", normalization, cfg.tol_or(1e-8)),
        Check::at_least("round-trip fidelity", round.fidelity, 0.99),
    ];
    Ok(DemoReport::new(Demo::Symplectic, checks, json!({ "round_trip": round, "grid_points": grid.points })))
}

fn photon(cfg: &RunConfig) -> Result<DemoReport> {
    let pc = &cfg.photon;
    let n = cfg.truncation_or(16);
    let fock = FockSpace::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let support = pc.support.min(n);
    let rho = random_density_on_levels(n, support, &mut rng);
    let quad = PolarQuadrature::new(pc.radius, pc.radial, pc.angular)?;
    let tol = cfg.tol_or(1e-3);
    let mut checks = Vec::new();
    let mut results: Vec<(f64, Operator)> = Vec::new();
    let mut per_s = Vec::new();
    let mut normalization: f64 = 0.0;
    for &s in &pc.s_values {
        let grid = PhotonGrid::new(quad.clone(), PhotonGrid::suggested_n_max(pc.radius, n, s)?)?;
        let table = photon_tomogram_table(&rho, &fock, &grid)?;
        for row in table.values.chunks(grid.n_max) {
            normalization = normalization.max((row.iter().map(|v| v.re).sum::<f64>() - 1.0).abs());
        }
        let back = photon_reconstruct(&table, s, &fock, &grid)?;
        let error = block_diff(&back, &rho, support);
        checks.push(Check::at_most(format!("reconstruction error on the support at s = {s}"), error, tol));
        // entries far outside the support carry the rounding of the t^-n weights
        per_s.push(json!({ "s": s, "n_max": grid.n_max, "support_error": error, "full_error": back.max_abs_diff(&rho) }));
        results.push((s, back));
    }
    let mut spread: f64 = 0.0;
    for (i, (_, a)) in results.iter().enumerate() {
        for (_, b) in &results[i + 1..] {
            spread = spread.max(block_diff(a, b, support));
        }
    }
    checks.push(Check::at_most("agreement across s", spread, 2.0 * tol));
    checks.push(Check::at_most("tomogram normalization", normalization, 1e-6));
    let details = json!({ "N": n, "support": support, "radius": pc.radius, "grid_points": quad.len(), "runs": per_s });
    Ok(DemoReport::new(Demo::Photon, checks, details))
}

/// Largest entry of `a − b` on the leading `k × k` block.
fn block_diff(a: &Operator, b: &Operator, k: usize) -> f64 {
    let d = a.matrix().view((0, 0), (k, k)) - b.matrix().view((0, 0), (k, k));
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn squeeze(cfg: &RunConfig) -> Result<DemoReport> {
    let n = cfg.truncation_or(16);
    let grid: Vec<(f64, f64)> = cfg.squeeze_grid.iter().map(|&[m, v]| (m, v)).collect();
    let fam = squeeze_family_truncated(n, &grid)?;
    let rank = fam.completeness_rank()?;
    let checks = vec![
        Check::at_most("parity commutator", fam.max_parity_commutator, 1e-8),
        Check::at_most("witness tomograms", fam.witness_max_tomogram, 1e-10),
        Check::at_most("completeness rank", rank as f64, (n * n - 1) as f64),
    ];
    let details = json!({ "N": n, "family_size": fam.family.len(), "completeness_rank": rank, "required_rank": n * n });
    Ok(DemoReport::new(Demo::Squeeze, checks, details))
}

fn z2() -> Result<DemoReport> {
    let (t0, fam) = z2_example(1.0, Complex64::new(1.0, 0.0), 2.0)?;
    let report = diagnose(&t0, &fam)?;
    let checks = vec![
        Check::at_least("irreducible", f64::from(u8::from(report.irreducible)), 1.0),
        Check::at_most("completeness rank", report.completeness_rank as f64, 3.0),
    ];
    let details = json!({
        "irreducible": report.irreducible,
        "complete": report.tomographic(),
        "completeness_rank": report.completeness_rank,
        "required_rank": report.required_rank,
        "verdict": if report.tomographic() { "tomographic" } else { "not tomographic" },
    });
    Ok(DemoReport::new(Demo::Z2, checks, details))
}
