//! Gauss-Legendre rules and the product grids built from them.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Result, TomographyError};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// nodes ascending. Exact for polynomials of degree `≤ 2n − 1`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(TomographyError::DegenerateInput("Gauss-Legendre rule needs at least one node".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Quadrature over the disk `|α| ≤ R` for the measure `d²α = r dr dθ`:
/// Gauss-Legendre radial nodes mapped to `[0, R]` times uniform angles.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarQuadrature {
    pub radius: f64,
    pub radial: usize,
    pub angular: usize,
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl PolarQuadrature {
    pub fn new(radius: f64, radial: usize, angular: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(TomographyError::Parameter(format!("radius must be positive, got {radius}")));
        }
        if angular == 0 {
            return Err(TomographyError::DegenerateInput("angular grid needs at least one node".into()));
        }
        let (x, w) = gauss_legendre(radial)?;
        let mut points = Vec::with_capacity(radial * angular);
        let mut weights = Vec::with_capacity(radial * angular);
        let dtheta = 2.0 * PI / angular as f64;
        for (xi, wi) in x.iter().zip(&w) {
            let r = 0.5 * radius * (xi + 1.0);
            let wr = 0.5 * radius * wi * r;
            for j in 0..angular {
                points.push(Complex64::from_polar(r, j as f64 * dtheta));
                weights.push(wr * dtheta);
            }
        }
        Ok(Self { radius, radial, angular, points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Grid description for table metadata.
    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "polar",
            "radius": self.radius,
            "radial": self.radial,
            "angular": self.angular,
        })
    }
}
