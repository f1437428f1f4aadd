//! Run configuration: geometry, wavenumber, incidence, mesh and quadrature.

use std::path::Path;

use fractal_bem_core::geometry::Mat2;
use fractal_bem_core::ifs::{Attractor, SimilarityMap};
use fractal_bem_core::kernels::{KernelConfig, Wavenumber};
use fractal_bem_core::mesh::Mesh;
use fractal_bem_core::quadrature::QuadPolicy;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Geometry {
    CantorSet {
        rho: f64,
    },
    CantorDust {
        rho: f64,
    },
    Sierpinski,
    NonhomogeneousDust,
    Custom {
        n: usize,
        maps: Vec<MapSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diam: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub rho: f64,
    #[serde(default = "identity")]
    pub rotation: Mat2,
    pub translation: [f64; 2],
}

fn identity() -> Mat2 {
    [[1.0, 0.0], [0.0, 1.0]]
}

impl Geometry {
    pub fn attractor(&self) -> Result<Attractor, CliError> {
        let a = match self {
            Geometry::CantorSet { rho } => Attractor::cantor_set(*rho)?,
            Geometry::CantorDust { rho } => {
                if *rho <= 0.25 {
                    log::warn!(
                        "Cantor dust with rho = {rho} <= 1/4 has dimension at most 1; \
                         its screen scatters nothing"
                    );
                }
                Attractor::cantor_dust(*rho)?
            }
            Geometry::Sierpinski => Attractor::sierpinski()?,
            Geometry::NonhomogeneousDust => Attractor::nonhomogeneous_dust()?,
            Geometry::Custom { n, maps, diam } => {
                let maps = maps
                    .iter()
                    .map(|m| SimilarityMap::new(m.rho, m.rotation, m.translation))
                    .collect::<Result<Vec<_>, _>>()?;
                Attractor::new(maps, *n, *diam)?
            }
        };
        Ok(a)
    }

    pub fn n(&self) -> usize {
        match self {
            Geometry::CantorSet { .. } => 1,
            Geometry::Custom { n, .. } => *n,
            _ => 2,
        }
    }

    /// Largest contraction factor.
    pub fn rho_max(&self) -> f64 {
        match self {
            Geometry::CantorSet { rho } | Geometry::CantorDust { rho } => *rho,
            Geometry::Sierpinski => 0.5,
            Geometry::NonhomogeneousDust => 0.5,
            Geometry::Custom { maps, .. } => maps.iter().map(|m| m.rho).fold(0.0, f64::max),
        }
    }
}

/// A real wavenumber or the screened kernel `k = i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WaveNumberSpec {
    Real(f64),
    Screened(ScreenedTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScreenedTag {
    #[serde(rename = "screened")]
    Screened,
}

impl WaveNumberSpec {
    pub fn to_core(self) -> Wavenumber {
        match self {
            WaveNumberSpec::Real(k) => Wavenumber::Real(k),
            WaveNumberSpec::Screened(_) => Wavenumber::Screened,
        }
    }

    pub fn real(self) -> Option<f64> {
        match self {
            WaveNumberSpec::Real(k) => Some(k),
            WaveNumberSpec::Screened(_) => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        if s == "screened" || s == "i" {
            return Ok(WaveNumberSpec::Screened(ScreenedTag::Screened));
        }
        s.parse::<f64>().map(WaveNumberSpec::Real).map_err(|_| {
            CliError::Config(format!(
                "wavenumber {s:?} is neither a number nor \"screened\""
            ))
        })
    }
}

impl std::fmt::Display for WaveNumberSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WaveNumberSpec::Real(k) => write!(f, "{k}"),
            WaveNumberSpec::Screened(_) => f.write_str("screened"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MeshSpec {
    Level(usize),
    H(f64),
}

impl MeshSpec {
    pub fn build(&self, a: &Attractor) -> Result<Mesh, CliError> {
        Ok(match self {
            MeshSpec::Level(l) => Mesh::level(a, *l)?,
            MeshSpec::H(h) => Mesh::new(a, *h)?,
        })
    }
}

/// `h_Q = c_q h` or an absolute `h_q`; with neither, `c_q = ρ_max²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_q: Option<f64>,
    #[serde(default = "yes")]
    pub reduced: bool,
}

fn yes() -> bool {
    true
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            c_q: None,
            h_q: None,
            reduced: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: Geometry,
    #[serde(default = "one")]
    pub measure_scale: f64,
    pub k: WaveNumberSpec,
    /// Unit vector in `R^{n+1}`; defaults to `(1,−1)/√2` for `n = 1` and
    /// `(0,1,−1)/√2` for `n = 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    pub mesh: MeshSpec,
    #[serde(default)]
    pub quadrature: QuadSpec,
}

fn one() -> f64 {
    1.0
}

impl RunConfig {
    pub fn preset(geometry: Geometry, k: f64, level: usize) -> Self {
        RunConfig {
            geometry,
            measure_scale: 1.0,
            k: WaveNumberSpec::Real(k),
            theta: None,
            mesh: MeshSpec::Level(level),
            quadrature: QuadSpec::default(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let c: RunConfig = serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        match &self.geometry {
            Geometry::CantorSet { rho } | Geometry::CantorDust { rho } => {
                if !(*rho > 0.0 && *rho <= 0.5) {
                    return bad(format!("rho = {rho} outside (0, 1/2]"));
                }
            }
            Geometry::Custom { n, maps, .. } => {
                if !(*n == 1 || *n == 2) {
                    return bad(format!("n = {n} must be 1 or 2"));
                }
                if maps.len() < 2 {
                    return bad("a custom IFS needs at least two maps".into());
                }
            }
            _ => {}
        }
        if !(self.measure_scale > 0.0 && self.measure_scale.is_finite()) {
            return bad(format!(
                "measure_scale = {} must be positive",
                self.measure_scale
            ));
        }
        if let WaveNumberSpec::Real(k) = self.k {
            if !(k > 0.0 && k.is_finite()) {
                return bad(format!("k = {k} must be positive"));
            }
        }
        if let Some(t) = &self.theta {
            let n = self.geometry.n();
            if t.len() != n + 1 {
                return bad(format!("theta needs {} components, got {}", n + 1, t.len()));
            }
            let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return bad(format!("theta has length {norm}, not 1"));
            }
        }
        match self.mesh {
            MeshSpec::H(h) if !(h > 0.0) => return bad(format!("mesh h = {h} must be positive")),
            _ => {}
        }
        let q = &self.quadrature;
        if q.c_q.is_some() && q.h_q.is_some() {
            return bad("quadrature takes c_q or h_q, not both".into());
        }
        if let Some(v) = q.c_q.or(q.h_q) {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("quadrature width {v} must be positive"));
            }
        }
        Ok(())
    }

    pub fn attractor(&self) -> Result<Attractor, CliError> {
        Ok(self
            .geometry
            .attractor()?
            .with_measure_scale(self.measure_scale)?)
    }

    pub fn theta3(&self) -> [f64; 3] {
        let n = self.geometry.n();
        match &self.theta {
            Some(t) => {
                let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                let mut out = [0.0; 3];
                for (o, v) in out.iter_mut().zip(t) {
                    *o = v / norm;
                }
                out
            }
            None => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                if n == 1 {
                    [s, -s, 0.0]
                } else {
                    [0.0, s, -s]
                }
            }
        }
    }

    pub fn policy(&self) -> QuadPolicy {
        let q = &self.quadrature;
        match q.h_q {
            Some(h) => QuadPolicy::absolute(h, q.reduced),
            None => {
                let c = q.c_q.unwrap_or_else(|| self.geometry.rho_max().powi(2));
                QuadPolicy::relative(c, q.reduced)
            }
        }
    }

    pub fn kernel(&self) -> Result<KernelConfig, CliError> {
        Ok(KernelConfig::new(self.geometry.n(), self.k.to_core())?)
    }

    pub fn with_level(&self, level: usize) -> Self {
        RunConfig {
            mesh: MeshSpec::Level(level),
            ..self.clone()
        }
    }

    pub fn with_k(&self, k: WaveNumberSpec) -> Self {
        RunConfig { k, ..self.clone() }
    }
}
