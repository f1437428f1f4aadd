//! Solve pipeline and the refinement studies.
//!
//! Increments `‖φ_ℓ − φ_{ℓ+1}‖_{H^{-1/2}}` are measured with the screened
//! Gram matrix on the finest mesh of the study, after prolonging every
//! solution to that mesh. Field increments are maxima over the standard
//! sample sets.

use std::ops::RangeInclusive;
use std::time::Instant;

use fractal_bem_core::galerkin::{assemble_matrix, AssemblyOptions, GalerkinSystem};
use fractal_bem_core::linalg::matrix_norms;
use fractal_bem_core::postprocess::{
    far_field, far_field_directions, hminushalf_norm, near_field, near_field_samples, prolong,
    screened_gram,
};
use fractal_bem_core::{Complex64, Solution};

use crate::cache::Cache;
use crate::config::{RunConfig, WaveNumberSpec};
use crate::error::CliError;

/// Assembles and solves, going through `cache` when given.
pub fn solve(cfg: &RunConfig, cache: Option<&Cache>) -> Result<Solution, CliError> {
    if let Some(s) = cache.and_then(|c| c.get(cfg)) {
        log::info!("cache hit {}", Cache::key(cfg));
        return Ok(s);
    }
    let k = cfg
        .k
        .real()
        .ok_or_else(|| CliError::Config("solving needs a real wavenumber".into()))?;
    let att = cfg.attractor()?;
    let mesh = cfg.mesh.build(&att)?;
    let t = Instant::now();
    let sys = GalerkinSystem::assemble(
        &mesh,
        k,
        cfg.theta3(),
        cfg.policy(),
        &AssemblyOptions::default(),
    )?;
    let assembled = t.elapsed();
    let sol = sys.solve()?;
    log::info!(
        "N = {}, h_Q = {:.3e}, assembly {:.3?}, total {:.3?}, residual {:.2e}",
        mesh.len(),
        sol.h_q,
        assembled,
        t.elapsed(),
        sol.residual
    );
    if let Some(c) = cache {
        c.put(cfg, &sol)?;
    }
    Ok(sol)
}

/// Least-squares slope of `log v` against position.
pub fn log_slope(values: &[f64]) -> Option<f64> {
    if values.len() < 2 || values.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let m = values.len() as f64;
    let xbar = (m - 1.0) / 2.0;
    let ybar = values.iter().map(|v| v.ln()).sum::<f64>() / m;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, v) in values.iter().enumerate() {
        let dx = i as f64 - xbar;
        num += dx * (v.ln() - ybar);
        den += dx * dx;
    }
    Some(num / den)
}

/// `exp(−s)` with `s` the [`log_slope`] of the last three values (fewer if
/// fewer are given). For three values this is the geometric mean of the
/// two consecutive ratios.
pub fn fitted_ratio(values: &[f64]) -> Option<f64> {
    log_slope(&values[values.len().saturating_sub(3)..]).map(|s| (-s).exp())
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn diff(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub elements: usize,
    pub h: f64,
    /// `‖φ_ℓ − φ_{ℓ+1}‖_{H^{-1/2}}`.
    pub increment: f64,
    pub nearfield_increment: f64,
    pub farfield_increment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub ratio: Option<f64>,
    pub nearfield_ratio: Option<f64>,
    pub farfield_ratio: Option<f64>,
}

pub fn convergence(
    cfg: &RunConfig,
    levels: RangeInclusive<usize>,
    cache: Option<&Cache>,
) -> Result<ConvergenceStudy, CliError> {
    let (lo, hi) = (*levels.start(), *levels.end());
    if hi <= lo {
        return Err(CliError::Config(format!(
            "level range {lo}..{hi} needs two levels"
        )));
    }
    let k = cfg
        .k
        .real()
        .ok_or_else(|| CliError::Config("convergence study needs a real wavenumber".into()))?;
    let att = cfg.attractor()?;
    let n = att.n();
    let fine = cfg.with_level(hi).mesh.build(&att)?;
    let gram = screened_gram(&fine, &cfg.policy(), &AssemblyOptions::default())?;
    let points = near_field_samples(n, k);
    let dirs = far_field_directions(n, k);

    struct Snapshot {
        level: usize,
        h: f64,
        elements: usize,
        coeffs: Vec<Complex64>,
        near: Vec<Complex64>,
        far: Vec<Complex64>,
    }
    let mut prev: Option<Snapshot> = None;
    let mut rows = Vec::new();
    for level in lo..=hi {
        let sol = solve(&cfg.with_level(level), cache)?;
        let cur = Snapshot {
            level,
            h: sol.mesh.h(),
            elements: sol.mesh.len(),
            coeffs: prolong(&sol, &fine)?,
            near: near_field(&sol, &points, None)?,
            far: far_field(&sol, &dirs, None)?,
        };
        if let Some(p) = prev.take() {
            rows.push(ConvergenceRow {
                level: p.level,
                elements: p.elements,
                h: p.h,
                increment: hminushalf_norm(&diff(&p.coeffs, &cur.coeffs), &gram)?,
                nearfield_increment: max_abs_diff(&p.near, &cur.near),
                farfield_increment: max_abs_diff(&p.far, &cur.far),
            });
        }
        prev = Some(cur);
    }
    let col = |g: fn(&ConvergenceRow) -> f64| fitted_ratio(&rows.iter().map(g).collect::<Vec<_>>());
    Ok(ConvergenceStudy {
        ratio: col(|r| r.increment),
        nearfield_ratio: col(|r| r.nearfield_increment),
        farfield_ratio: col(|r| r.farfield_increment),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub level: usize,
    pub elements: usize,
    /// `‖φ_ℓ − φ_ref‖ / ‖φ_ref‖` in `H^{-1/2}`.
    pub relative_error: f64,
}

/// Relative errors against the solution at `reference`.
pub fn reference_errors(
    cfg: &RunConfig,
    levels: RangeInclusive<usize>,
    reference: usize,
    cache: Option<&Cache>,
) -> Result<Vec<ErrorRow>, CliError> {
    if *levels.end() >= reference {
        return Err(CliError::Config(format!(
            "reference level {reference} must exceed the studied levels"
        )));
    }
    let att = cfg.attractor()?;
    let fine = cfg.with_level(reference).mesh.build(&att)?;
    let gram = screened_gram(&fine, &cfg.policy(), &AssemblyOptions::default())?;
    let r = solve(&cfg.with_level(reference), cache)?;
    let norm = hminushalf_norm(&r.coeffs, &gram)?;
    levels
        .map(|level| {
            let sol = solve(&cfg.with_level(level), cache)?;
            let c = prolong(&sol, &fine)?;
            Ok(ErrorRow {
                level,
                elements: sol.mesh.len(),
                relative_error: hminushalf_norm(&diff(&c, &r.coeffs), &gram)? / norm,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub k: WaveNumberSpec,
    pub level: usize,
    pub elements: usize,
    pub norm: f64,
    pub inverse_norm: f64,
}

impl ConditionRow {
    pub fn condition(&self) -> f64 {
        self.norm * self.inverse_norm
    }
}

/// `‖A‖₂` and `‖A⁻¹‖₂` for every wavenumber and level.
pub fn condition(
    cfg: &RunConfig,
    ks: &[WaveNumberSpec],
    levels: RangeInclusive<usize>,
) -> Result<Vec<ConditionRow>, CliError> {
    let att = cfg.attractor()?;
    let mut rows = Vec::new();
    for &k in ks {
        let c = cfg.with_k(k);
        let kernel = c.kernel()?;
        for level in levels.clone() {
            let mesh = c.with_level(level).mesh.build(&att)?;
            let t = Instant::now();
            let a = assemble_matrix(&mesh, &kernel, &c.policy(), &AssemblyOptions::default())?;
            let (norm, inverse_norm) = matrix_norms(&a)?;
            log::info!(
                "k = {k}, level {level}: N = {}, {:.3?}",
                mesh.len(),
                t.elapsed()
            );
            rows.push(ConditionRow {
                k,
                level,
                elements: mesh.len(),
                norm,
                inverse_norm,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Geometry;

    #[test]
    fn fitted_ratio_of_geometric_sequence() {
        let v: Vec<f64> = (0..6).map(|i| 3.0 * 0.5f64.powi(i)).collect();
        assert!((fitted_ratio(&v).unwrap() - 2.0).abs() < 1e-12);
        let r = fitted_ratio(&[9.0, 1.0, 4.0, 1.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert_eq!(fitted_ratio(&[1.0]), None);
        assert_eq!(fitted_ratio(&[1.0, 0.0]), None);
    }

    #[test]
    fn small_cantor_study_runs() {
        let cfg = RunConfig::preset(Geometry::CantorSet { rho: 1.0 / 3.0 }, 0.1, 0);
        let s = convergence(&cfg, 1..=4, None).unwrap();
        assert_eq!(s.rows.len(), 3);
        assert!(s.rows.windows(2).all(|w| w[1].increment < w[0].increment));
        let e = reference_errors(&cfg, 1..=3, 5, None).unwrap();
        assert!(e
            .windows(2)
            .all(|w| w[1].relative_error < w[0].relative_error));
    }

    #[test]
    fn level_zero_condition_is_diagonal_entry() {
        let cfg = RunConfig::preset(Geometry::CantorSet { rho: 1.0 / 3.0 }, 0.1, 0);
        let rows = condition(&cfg, &[WaveNumberSpec::Real(0.1)], 0..=0).unwrap();
        let mesh = cfg.mesh.build(&cfg.attractor().unwrap()).unwrap();
        let a = assemble_matrix(
            &mesh,
            &cfg.kernel().unwrap(),
            &cfg.policy(),
            &AssemblyOptions::default(),
        )
        .unwrap();
        let v = a[(0, 0)].norm();
        assert!((rows[0].norm - v).abs() < 1e-12 * v);
        assert!((rows[0].inverse_norm - 1.0 / v).abs() < 1e-12 / v);
    }
}
