//! Symplectic tomography along the quadratures `μQ + νP` (ħ = 1).
//!
//! Wavefunctions live on a uniform position grid. The tomogram
//! `T(X, μ, ν) = |⟨Xμν|ψ⟩|²` is evaluated with the position-space eigenfunction
//! `⟨q|Xμν⟩ = (2π|ν|)^{−1/2} exp[−i(μq²/(2ν) − Xq/ν)]` when `|ν| ≥ |μ|`, and
//! with its momentum-space counterpart
//! `⟨p|Xμν⟩ = (2π|μ|)^{−1/2} exp[i(νp²/(2μ) − Xp/μ)]` otherwise, so that the
//! chirp never outruns the grid. `ν = 0` reads the position density directly.
//!
//! Reconstruction inverts `ρ = (1/2π) ∫ dX dμ dν T(X,μ,ν) e^{i(X − μQ − νP)}`,
//! whose position matrix element collapses the `ν` integral:
//! `ρ(y, y') = (1/2π) ∫ dX dμ T(X, μ, y − y') e^{i(X − μ(y + y')/2)}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Result, TomographyError};
use crate::frame::Label;

/// Uniform grid `q_min = q_0 < … < q_{points−1} = q_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub points: usize,
}

impl Default for PositionGrid {
    fn default() -> Self {
        Self { q_min: -8.0, q_max: 8.0, points: 512 }
    }
}

impl PositionGrid {
    pub fn new(q_min: f64, q_max: f64, points: usize) -> Result<Self> {
        if points < 2 || !(q_max > q_min) || !q_min.is_finite() || !q_max.is_finite() {
            return Err(TomographyError::DegenerateInput(format!(
                "invalid grid [{q_min}, {q_max}] with {points} points"
            )));
        }
        Ok(Self { q_min, q_max, points })
    }

    pub fn step(&self) -> f64 {
        (self.q_max - self.q_min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }
}

/// Quadrature direction `(μ, ν) ≠ (0, 0)` and eigenvalue `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticLabel {
    x: f64,
    mu: f64,
    nu: f64,
}

impl SymplecticLabel {
    pub fn new(x: f64, mu: f64, nu: f64) -> Result<Self> {
        if mu == 0.0 && nu == 0.0 {
            return Err(TomographyError::Parameter("(mu, nu) must not both vanish".into()));
        }
        if !(x.is_finite() && mu.is_finite() && nu.is_finite()) {
            return Err(TomographyError::Parameter("symplectic label must be finite".into()));
        }
        Ok(Self { x, mu, nu })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn label(&self) -> Label {
        Label::params(&[self.x, self.mu, self.nu])
    }
}

/// `⟨q|Xμν⟩` for `ν ≠ 0`.
pub fn symplectic_eigenfunction(q: f64, l: &SymplecticLabel) -> Result<Complex64> {
    if l.nu == 0.0 {
        return Err(TomographyError::UseDirectBranch);
    }
    let phase = -(l.mu * q * q / (2.0 * l.nu) - l.x * q / l.nu);
    Ok(Complex64::from_polar((2.0 * PI * l.nu.abs()).sqrt().recip(), phase))
}

/// `⟨p|Xμν⟩` for `μ ≠ 0`.
pub fn momentum_eigenfunction(p: f64, l: &SymplecticLabel) -> Result<Complex64> {
    if l.mu == 0.0 {
        return Err(TomographyError::Parameter("momentum representation needs mu ≠ 0".into()));
    }
    let phase = l.nu * p * p / (2.0 * l.mu) - l.x * p / l.mu;
    Ok(Complex64::from_polar((2.0 * PI * l.mu.abs()).sqrt().recip(), phase))
}

/// Normalized oscillator eigenfunction `ψ_n(q) = (2ⁿ n! √π)^{−1/2} H_n(q) e^{−q²/2}`,
/// by the three-term recurrence.
pub fn hermite_function(n: usize, q: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * q * q).exp();
    for k in 0..n {
        let next = (2.0 / (k + 1) as f64).sqrt() * q * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `exp(−X²/(μ²+ν²)) / √(π(μ²+ν²))`, the oscillator ground-state tomogram.
pub fn ground_state_tomogram(l: &SymplecticLabel) -> f64 {
    let r2 = l.mu * l.mu + l.nu * l.nu;
    (-l.x * l.x / r2).exp() / (PI * r2).sqrt()
}

/// A normalized wavefunction sampled on a position grid, with its momentum
/// representation on the same nodes.
#[derive(Clone, Debug)]
pub struct Wavefunction {
    grid: PositionGrid,
    values: Vec<Complex64>,
    momentum: Vec<Complex64>,
}

impl Wavefunction {
    /// Accepts samples whose grid norm `Σ|ψ|²Δq` is within `1e-6` of one.
    pub fn new(grid: PositionGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points {
            return Err(TomographyError::Dimension { expected: grid.points, found: values.len() });
        }
        let norm: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.step();
        if !((norm - 1.0).abs() <= 1e-6) {
            return Err(TomographyError::DegenerateInput(format!("wavefunction has grid norm {norm:.9}, expected 1")));
        }
        let momentum = fourier(&grid, &values);
        Ok(Self { grid, values, momentum })
    }

    /// Samples `f` and rescales to unit grid norm.
    pub fn normalized_from_fn(grid: PositionGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let mut values: Vec<Complex64> = grid.nodes().into_iter().map(f).collect();
        let norm: f64 = (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.step()).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(TomographyError::DegenerateInput("wavefunction vanishes on the grid".into()));
        }
        values.iter_mut().for_each(|v| *v /= norm);
        Self::new(grid, values)
    }

    /// `ψ_n` sampled on the grid.
    pub fn number_state(grid: PositionGrid, n: usize) -> Result<Self> {
        Self::normalized_from_fn(grid, |q| Complex64::new(hermite_function(n, q), 0.0))
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn momentum(&self) -> &[Complex64] {
        &self.momentum
    }

    /// `⟨Xμν|ψ⟩` for `ν ≠ 0`, in whichever representation keeps the chirp resolved.
    pub fn overlap(&self, l: &SymplecticLabel) -> Result<Complex64> {
        let h = self.grid.step();
        let (samples, use_position) = if l.nu.abs() >= l.mu.abs() {
            (&self.values, true)
        } else {
            (&self.momentum, false)
        };
        if l.nu == 0.0 {
            return Err(TomographyError::UseDirectBranch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, v) in samples.iter().enumerate() {
            let z = self.grid.node(i);
            let e = if use_position { symplectic_eigenfunction(z, l)? } else { momentum_eigenfunction(z, l)? };
            acc += e.conj() * v;
        }
        Ok(acc * h)
    }

    /// `ψ(q)` by 8-point Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, q: f64) -> Complex64 {
        let h = self.grid.step();
        let pos = (q - self.grid.q_min) / h;
        if !(pos >= 0.0 && pos <= (self.grid.points - 1) as f64) {
            return Complex64::new(0.0, 0.0);
        }
        let width = 8.min(self.grid.points);
        let start = (pos.floor() as isize - (width as isize / 2 - 1)).clamp(0, (self.grid.points - width) as isize) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in start..start + width {
            let mut w = 1.0;
            for j in start..start + width {
                if j != i {
                    w *= (pos - j as f64) / (i as f64 - j as f64);
                }
            }
            acc += self.values[i] * w;
        }
        acc
    }
}

fn fourier(grid: &PositionGrid, values: &[Complex64]) -> Vec<Complex64> {
    let h = grid.step();
    let scale = h / (2.0 * PI).sqrt();
    (0..grid.points)
        .map(|k| {
            let p = grid.node(k);
            let step = Complex64::from_polar(1.0, -p * h);
            let mut phase = Complex64::from_polar(1.0, -p * grid.q_min);
            let mut acc = Complex64::new(0.0, 0.0);
            for v in values {
                acc += phase * v;
                phase *= step;
            }
            acc * scale
        })
        .collect()
}

/// `|⟨Xμν|ψ⟩|²`, or `|ψ(X/μ)|²/|μ|` when `ν = 0`.
pub fn symplectic_tomogram(psi: &Wavefunction, l: &SymplecticLabel) -> Result<f64> {
    if l.nu == 0.0 {
        return Ok(psi.interpolate(l.x / l.mu).norm_sqr() / l.mu.abs());
    }
    Ok(psi.overlap(l)?.norm_sqr())
}

/// `⟨Xμν|a⟩⟨b|Xμν⟩`, the tomogram of the rank-one operator `|a⟩⟨b|`.
pub fn rank_one_tomogram(a: &Wavefunction, b: &Wavefunction, l: &SymplecticLabel) -> Result<Complex64> {
    if l.nu == 0.0 {
        let q = l.x / l.mu;
        return Ok(a.interpolate(q) * b.interpolate(q).conj() / l.mu.abs());
    }
    Ok(a.overlap(l)? * b.overlap(l)?.conj())
}

/// Integration box for the inversion integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionBox {
    /// `μ ∈ [−mu_max, mu_max]`.
    pub mu_max: f64,
    pub mu_points: usize,
    /// `X ∈ ±x_extent · max(1, √(μ²+ν²))`.
    pub x_extent: f64,
    /// Spacing of the `X` grid; must resolve `e^{iX}`.
    pub x_step: f64,
}

impl Default for InversionBox {
    fn default() -> Self {
        Self { mu_max: 6.0, mu_points: 97, x_extent: 7.0, x_step: 0.25 }
    }
}

/// `ρ(y_i, y_j)` on a uniform set of points `ys` from any tomogram function.
pub fn symplectic_reconstruct(
    tomogram: impl Fn(&SymplecticLabel) -> Result<Complex64>,
    ys: &[f64],
    inversion: &InversionBox,
) -> Result<DMatrix<Complex64>> {
    if ys.len() < 2 {
        return Err(TomographyError::DegenerateInput("need at least two reconstruction points".into()));
    }
    if !(inversion.x_step > 0.0 && inversion.x_step < 1.0) || inversion.mu_points < 3 {
        return Err(TomographyError::Numerical(format!(
            "inversion box under-resolves the kernel: x_step = {} (needs < 1), mu_points = {} (needs ≥ 3)",
            inversion.x_step, inversion.mu_points
        )));
    }
    let dy = ys[1] - ys[0];
    if ys.windows(2).any(|w| ((w[1] - w[0]) - dy).abs() > 1e-12 * dy.abs().max(1.0)) {
        return Err(TomographyError::DegenerateInput("reconstruction points must be uniform".into()));
    }
    let n = ys.len();
    let dmu = 2.0 * inversion.mu_max / (inversion.mu_points - 1) as f64;
    let mus: Vec<f64> = (0..inversion.mu_points).map(|k| -inversion.mu_max + k as f64 * dmu).collect();
    let trap = |k: usize, len: usize| if k == 0 || k == len - 1 { 0.5 } else { 1.0 };

    // G(μ, ν_d) = ∫ dX T(X, μ, ν_d) e^{iX} for each offset d = i − j
    let mut g = vec![vec![Complex64::new(0.0, 0.0); mus.len()]; 2 * n - 1];
    for (d_idx, row) in g.iter_mut().enumerate() {
        let nu = (d_idx as f64 - (n - 1) as f64) * dy;
        for (k, &mu) in mus.iter().enumerate() {
            // at the origin the integrand is the normalization ∫ T dX, read off along μ = 1
            let origin = mu == 0.0 && nu == 0.0;
            let (mu_e, freq) = if origin { (1.0, 0.0) } else { (mu, 1.0) };
            let r = (mu_e * mu_e + nu * nu).sqrt();
            // the tomogram has width ∝ r, so the step shrinks with it
            let extent = inversion.x_extent * r.max(1.0);
            let steps = (2.0 * extent / (inversion.x_step * r.min(1.0))).ceil() as usize;
            let hx = 2.0 * extent / steps as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..=steps {
                let x = -extent + s as f64 * hx;
                let t = tomogram(&SymplecticLabel::new(x, mu_e, nu)?)?;
                acc += t * Complex64::from_polar(trap(s, steps + 1), freq * x);
            }
            row[k] = acc * hx;
        }
    }
    let mut rho = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let row = &g[i + n - 1 - j];
            let centre = 0.5 * (ys[i] + ys[j]);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &mu) in mus.iter().enumerate() {
                acc += row[k] * Complex64::from_polar(trap(k, mus.len()), -mu * centre);
            }
            rho[(i, j)] = acc * (dmu / (2.0 * PI));
        }
    }
    Ok(rho)
}

/// Round trip of a pure state through its tomograms.
#[derive(Clone, Debug, Serialize)]
pub struct SymplecticRoundTrip {
    pub points: usize,
    /// `⟨ψ|ρ_rec|ψ⟩` by grid quadrature.
    pub fidelity: f64,
    /// `Σ ρ_rec(y, y) Δy`.
    pub trace: f64,
}

/// Reconstructs `|ψ⟩⟨ψ|` on `ys` from its tomograms and scores it against `ψ`.
pub fn symplectic_round_trip(psi: &Wavefunction, ys: &[f64], inversion: &InversionBox) -> Result<SymplecticRoundTrip> {
    let rho = symplectic_reconstruct(|l| Ok(Complex64::new(symplectic_tomogram(psi, l)?, 0.0)), ys, inversion)?;
    let dy = ys[1] - ys[0];
    let amp: Vec<Complex64> = ys.iter().map(|&y| psi.interpolate(y)).collect();
    let mut fidelity = Complex64::new(0.0, 0.0);
    for i in 0..ys.len() {
        for j in 0..ys.len() {
            fidelity += amp[i].conj() * rho[(i, j)] * amp[j];
        }
    }
    let trace: f64 = (0..ys.len()).map(|i| rho[(i, i)].re).sum::<f64>() * dy;
    Ok(SymplecticRoundTrip { points: ys.len(), fidelity: fidelity.re * dy * dy, trace })
}

/// Smoothed check of the resolution of unity on `|g_a⟩⟨g_b|`, with `g_c` a
/// normalized Gaussian of width `sigma` centred at `c`.
#[derive(Clone, Debug, Serialize)]
pub struct SymplecticIdentityReport {
    pub centres: [f64; 2],
    pub sigma: f64,
    pub points: usize,
    /// Largest `|ρ_rec(y, y') − g_a(y) g_b(y')|` over the reconstruction points.
    pub max_deviation: f64,
    /// Peak magnitude over the largest magnitude more than `3σ` away from it.
    pub peak_ratio: f64,
}

pub fn symplectic_identity_check(
    grid: PositionGrid,
    centres: [f64; 2],
    sigma: f64,
    ys: &[f64],
    inversion: &InversionBox,
) -> Result<SymplecticIdentityReport> {
    if !(sigma > 0.0) {
        return Err(TomographyError::Parameter("sigma must be positive".into()));
    }
    let gauss = |c: f64| move |q: f64| Complex64::new((-(q - c) * (q - c) / (2.0 * sigma * sigma)).exp(), 0.0);
    let a = Wavefunction::normalized_from_fn(grid, gauss(centres[0]))?;
    let b = Wavefunction::normalized_from_fn(grid, gauss(centres[1]))?;
    let rho = symplectic_reconstruct(|l| rank_one_tomogram(&a, &b, l), ys, inversion)?;
    let mut max_deviation: f64 = 0.0;
    let mut peak: f64 = 0.0;
    let mut far: f64 = 0.0;
    for (i, &y) in ys.iter().enumerate() {
        for (j, &yp) in ys.iter().enumerate() {
            let expected = a.interpolate(y) * b.interpolate(yp).conj();
            max_deviation = max_deviation.max((rho[(i, j)] - expected).norm());
            let dist = ((y - centres[0]).powi(2) + (yp - centres[1]).powi(2)).sqrt();
            if dist < 0.5 * (ys[1] - ys[0]) + 1e-12 {
                peak = peak.max(rho[(i, j)].norm());
            } else if dist > 3.0 * sigma {
                far = far.max(rho[(i, j)].norm());
            }
        }
    }
    Ok(SymplecticIdentityReport {
        centres,
        sigma,
        points: ys.len(),
        max_deviation,
        peak_ratio: if far > 0.0 { peak / far } else { f64::INFINITY },
    })
}

/// `count` uniform points spanning `[-half_width, half_width]`.
pub fn uniform_points(half_width: f64, count: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (count - 1) as f64;
    (0..count).map(|i| -half_width + i as f64 * h).collect()
}
