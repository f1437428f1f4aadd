//! Solution files: a JSON document whose coefficient payload is base64 of
//! little-endian `f64` pairs, checked by SHA-256.

use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use fractal_bem_core::{Complex64, Solution};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

pub const SOLUTION_FORMAT: &str = "fractal-bem-solution";
pub const SOLUTION_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub encoding: String,
    pub sha256: String,
    pub data: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    pub version: u32,
    pub config: RunConfig,
    pub n_elements: usize,
    pub h: f64,
    pub h_q: f64,
    pub residual: f64,
    pub payload: Payload,
}

pub fn encode_coeffs(c: &[Complex64]) -> Payload {
    let mut bytes = Vec::with_capacity(16 * c.len());
    for z in c {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    Payload {
        encoding: "base64-f64le-pairs".into(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        data: STANDARD.encode(&bytes),
    }
}

pub fn decode_coeffs(p: &Payload) -> Result<Vec<Complex64>, String> {
    if p.encoding != "base64-f64le-pairs" {
        return Err(format!("unknown payload encoding {:?}", p.encoding));
    }
    let bytes = STANDARD.decode(&p.data).map_err(|e| e.to_string())?;
    if hex::encode(Sha256::digest(&bytes)) != p.sha256 {
        return Err("payload checksum mismatch".into());
    }
    if bytes.len() % 16 != 0 {
        return Err(format!(
            "payload of {} bytes is not a list of complex numbers",
            bytes.len()
        ));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|b| {
            let re = f64::from_le_bytes(b[..8].try_into().unwrap());
            let im = f64::from_le_bytes(b[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

impl SolutionFile {
    pub fn new(config: &RunConfig, sol: &Solution) -> Self {
        SolutionFile {
            format: SOLUTION_FORMAT.into(),
            version: SOLUTION_VERSION,
            config: config.clone(),
            n_elements: sol.mesh.len(),
            h: sol.mesh.h(),
            h_q: sol.h_q,
            residual: sol.residual,
            payload: encode_coeffs(&sol.coeffs),
        }
    }

    /// Rebuilds the mesh from the stored configuration and checks it
    /// against the stored size.
    pub fn into_solution(self, path: &str) -> Result<Solution, CliError> {
        let bad = |reason: String| CliError::Format {
            path: path.to_string(),
            reason,
        };
        if self.format != SOLUTION_FORMAT || self.version != SOLUTION_VERSION {
            return Err(bad(format!(
                "unsupported format {} v{}",
                self.format, self.version
            )));
        }
        self.config.validate()?;
        let k = self
            .config
            .k
            .real()
            .ok_or_else(|| bad("solution with a screened wavenumber".into()))?;
        let att = self.config.attractor()?;
        let mesh = self.config.mesh.build(&att)?;
        if mesh.len() != self.n_elements {
            return Err(bad(format!(
                "mesh has {} elements, file says {}",
                mesh.len(),
                self.n_elements
            )));
        }
        let coeffs = decode_coeffs(&self.payload).map_err(bad)?;
        if coeffs.len() != mesh.len() {
            return Err(bad(format!(
                "{} coefficients for {} elements",
                coeffs.len(),
                mesh.len()
            )));
        }
        Ok(Solution {
            theta: self.config.theta3(),
            mesh,
            coeffs,
            k,
            h_q: self.h_q,
            residual: self.residual,
        })
    }
}

pub fn write_solution(path: &Path, config: &RunConfig, sol: &Solution) -> Result<(), CliError> {
    let s =
        serde_json::to_string_pretty(&SolutionFile::new(config, sol)).expect("solution serialises");
    std::fs::write(path, s).map_err(|e| CliError::io(path, e))
}

pub fn read_solution_file(path: &Path) -> Result<SolutionFile, CliError> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&s).map_err(|e| CliError::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

pub fn read_solution(path: &Path) -> Result<(RunConfig, Solution), CliError> {
    let f = read_solution_file(path)?;
    let cfg = f.config.clone();
    Ok((cfg, f.into_solution(&path.display().to_string())?))
}
