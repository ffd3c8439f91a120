//! Run configuration: a JSON file plus command-line overrides (flags win).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::continuous::symplectic::{InversionBox, PositionGrid};
use crate::error::{Result, TomographyError};
use crate::io::read_json;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphereConfig {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for SphereConfig {
    fn default() -> Self {
        Self { n_theta: 8, n_phi: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhotonConfig {
    pub radius: f64,
    pub radial: usize,
    pub angular: usize,
    pub s_values: Vec<f64>,
    /// Number of lowest Fock levels carrying the test density.
    pub support: usize,
}

impl Default for PhotonConfig {
    fn default() -> Self {
        Self { radius: 4.0, radial: 32, angular: 32, s_values: vec![-0.5, 0.0, 0.5], support: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymplecticConfig {
    pub grid_points: usize,
    pub q_extent: f64,
    /// Reconstruction points span `[-half_width, half_width]`.
    pub half_width: f64,
    pub points: usize,
    pub mu_max: f64,
    pub mu_points: usize,
    pub x_extent: f64,
    pub x_step: f64,
}

impl Default for SymplecticConfig {
    fn default() -> Self {
        let b = InversionBox::default();
        let g = PositionGrid::default();
        Self {
            grid_points: g.points,
            q_extent: g.q_max,
            half_width: 3.5,
            points: 15,
            mu_max: b.mu_max,
            mu_points: b.mu_points,
            x_extent: b.x_extent,
            x_step: b.x_step,
        }
    }
}

impl SymplecticConfig {
    pub fn grid(&self) -> Result<PositionGrid> {
        PositionGrid::new(-self.q_extent, self.q_extent, self.grid_points)
    }

    pub fn inversion(&self) -> InversionBox {
        InversionBox { mu_max: self.mu_max, mu_points: self.mu_points, x_extent: self.x_extent, x_step: self.x_step }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Truncation; each demo has its own default when unset.
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Pass/fail tolerance; each demo has its own default when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub seed: u64,
    /// Number of random operators per randomized check.
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub sphere: SphereConfig,
    pub photon: PhotonConfig,
    pub symplectic: SymplecticConfig,
    /// `(μ, ν)` samples of the squeeze family.
    pub squeeze_grid: Vec<[f64; 2]>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: None,
            tol: None,
            seed: 20_240_601,
            samples: 20,
            out: None,
            sphere: SphereConfig::default(),
            photon: PhotonConfig::default(),
            symplectic: SymplecticConfig::default(),
            squeeze_grid: crate::generators::default_squeeze_grid().into_iter().map(|(m, n)| [m, n]).collect(),
        }
    }
}

/// Values given on the command line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => read_json(p)?,
            None => Self::default(),
        };
        if overrides.n.is_some() {
            cfg.n = overrides.n;
        }
        if overrides.tol.is_some() {
            cfg.tol = overrides.tol;
        }
        if let Some(seed) = overrides.seed {
            cfg.seed = seed;
        }
        if overrides.out.is_some() {
            cfg.out = overrides.out;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(TomographyError::Parameter(what.to_string()));
        if self.n == Some(0) {
            return bad("N must be positive");
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol < 1.0) {
                return bad("tol must lie in (0, 1)");
            }
        }
        let sizes = [
            self.samples,
            self.sphere.n_theta,
            self.sphere.n_phi,
            self.photon.radial,
            self.photon.angular,
            self.photon.support,
            self.symplectic.grid_points,
            self.symplectic.points,
            self.symplectic.mu_points,
        ];
        if sizes.contains(&0) {
            return bad("all sizes must be positive");
        }
        let lengths = [self.photon.radius, self.symplectic.q_extent, self.symplectic.half_width, self.symplectic.mu_max];
        if lengths.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return bad("radii and extents must be positive");
        }
        if self.photon.s_values.is_empty() || self.squeeze_grid.is_empty() {
            return bad("s_values and squeeze_grid must be non-empty");
        }
        Ok(())
    }

    pub fn truncation_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}
