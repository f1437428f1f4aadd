//! CSV writers. Every table has a header row and a deterministic order.

use std::io::Write;
use std::path::Path;

use fractal_bem_core::geometry::Point3;
use fractal_bem_core::mesh::Mesh;
use fractal_bem_core::Complex64;

use crate::error::CliError;
use crate::study::{ConditionRow, ConvergenceStudy, ErrorRow};

/// A file, or stdout for `None` or `-`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = std::fs::File::create(p).map_err(|e| CliError::io(p, e))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        _ => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn g(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn write_near_field(
    out: Box<dyn Write>,
    n: usize,
    points: &[Point3],
    values: &[Complex64],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    if n == 1 {
        w.write_record(["x", "y", "re", "im", "abs"])?;
    } else {
        w.write_record(["x", "y", "z", "re", "im", "abs"])?;
    }
    for (p, u) in points.iter().zip(values) {
        let mut rec: Vec<String> = p[..n + 1].iter().map(|v| g(*v)).collect();
        rec.extend([g(u.re), g(u.im), g(u.norm())]);
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn write_far_field(
    out: Box<dyn Write>,
    n: usize,
    directions: &[Point3],
    values: &[Complex64],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    if n == 1 {
        w.write_record(["angle", "re", "im", "abs"])?;
    } else {
        w.write_record(["polar", "azimuth", "re", "im", "abs"])?;
    }
    for (d, u) in directions.iter().zip(values) {
        let azimuth = g(d[1].atan2(d[0]));
        let mut rec = if n == 1 {
            vec![azimuth]
        } else {
            vec![g(d[2].clamp(-1.0, 1.0).acos()), azimuth]
        };
        rec.extend([g(u.re), g(u.im), g(u.norm())]);
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn write_mesh(out: Box<dyn Write>, mesh: &Mesh) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["address", "measure", "diam", "barycentre_x", "barycentre_y"])?;
    for e in mesh.elements() {
        w.write_record([
            e.address.to_string(),
            g(e.measure),
            g(e.diam),
            g(e.barycentre[0]),
            g(e.barycentre[1]),
        ])?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn write_convergence(out: Box<dyn Write>, s: &ConvergenceStudy) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "level",
        "elements",
        "h",
        "increment",
        "nearfield_increment",
        "farfield_increment",
    ])?;
    for r in &s.rows {
        w.write_record([
            r.level.to_string(),
            r.elements.to_string(),
            g(r.h),
            g(r.increment),
            g(r.nearfield_increment),
            g(r.farfield_increment),
        ])?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn write_errors(out: Box<dyn Write>, rows: &[ErrorRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["level", "elements", "relative_error"])?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            r.elements.to_string(),
            g(r.relative_error),
        ])?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn write_condition(out: Box<dyn Write>, rows: &[ConditionRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "k",
        "level",
        "elements",
        "norm",
        "inverse_norm",
        "condition",
    ])?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.level.to_string(),
            r.elements.to_string(),
            g(r.norm),
            g(r.inverse_norm),
            g(r.condition()),
        ])?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}
