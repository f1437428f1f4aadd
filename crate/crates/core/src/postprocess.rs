//! Fields, far-field patterns, prolongation and the `H^{-1/2}` error norm.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galerkin::{assemble_matrix, plane_wave, AssemblyOptions, Solution};
use crate::geometry::{dist3, embed, Point3};
use crate::kernels::{check_unit, farfield_prefactor, KernelConfig, Wavenumber};
use crate::linalg::Matrix;
use crate::mesh::Mesh;
use crate::quadrature::{nodes, QuadPolicy};
use crate::sum::pairwise;

/// Quadrature nodes on the screen with the density folded into the weight:
/// `u(x) = −Σ w Φ(x, y)`.
#[derive(Debug, Clone)]
pub struct Sources {
    pub n: usize,
    pub k: f64,
    pub points: Vec<Point3>,
    pub weights: Vec<Complex64>,
}

impl Sources {
    pub fn new(sol: &Solution, h_q: Option<f64>) -> Result<Self> {
        let h_q = h_q.unwrap_or(sol.h_q);
        if !(h_q > 0.0) {
            return Err(Error::Domain(alloc::format!(
                "h_Q = {h_q} must be positive"
            )));
        }
        let att = sol.mesh.attractor();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (e, c) in sol.mesh.elements().iter().zip(&sol.coeffs) {
            let scale = c / libm::sqrt(e.measure);
            for nd in nodes(att, e, h_q) {
                points.push(embed(&nd.x));
                weights.push(scale * nd.w);
            }
        }
        Ok(Sources {
            n: att.n(),
            k: sol.k,
            points,
            weights,
        })
    }

    fn check_point(&self, x: &Point3) -> Result<()> {
        if self.n == 1 && x[2] != 0.0 {
            return Err(Error::Domain(alloc::format!(
                "field point {x:?} must have zero third coordinate for n = 1"
            )));
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain(alloc::format!(
                "field point {x:?} is not finite"
            )));
        }
        Ok(())
    }

    /// Scattered field at one point.
    pub fn scattered(&self, x: &Point3) -> Result<Complex64> {
        self.check_point(x)?;
        let cfg = KernelConfig::new(self.n, Wavenumber::Real(self.k))?;
        let mut terms = Vec::with_capacity(self.points.len());
        for (y, w) in self.points.iter().zip(&self.weights) {
            let r = dist3(x, y);
            if r < 1e-12 {
                return Err(Error::SingularEvaluation(alloc::format!(
                    "field point {x:?} lies on a quadrature node"
                )));
            }
            terms.push(cfg.phi(r)? * w);
        }
        Ok(-pairwise(&terms))
    }

    /// Far-field pattern in one direction.
    pub fn farfield(&self, xhat: &Point3) -> Result<Complex64> {
        check_unit(xhat)?;
        if self.n == 1 && xhat[2] != 0.0 {
            return Err(Error::Domain(alloc::format!(
                "direction {xhat:?} must lie in the plane for n = 1"
            )));
        }
        let terms: Vec<Complex64> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(y, w)| plane_wave(-self.k, xhat, y) * w)
            .collect();
        Ok(-farfield_prefactor(self.n, self.k) * pairwise(&terms))
    }
}

fn warn_on_screen_plane(sol: &Solution, points: &[Point3]) {
    let att = sol.mesh.attractor();
    let (lo, hi) = bounding_box(sol);
    let normal = att.n();
    for x in points {
        let inside = (0..att.n()).all(|a| x[a] >= lo[a] - 1e-12 && x[a] <= hi[a] + 1e-12);
        if x[normal] == 0.0 && inside {
            log::warn!("field point {x:?} lies in the screen plane over the screen");
        }
    }
}

fn bounding_box(sol: &Solution) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for e in sol.mesh.elements() {
        let r = 0.5 * e.diam;
        for a in 0..2 {
            lo[a] = lo[a].min(e.barycentre[a] - r);
            hi[a] = hi[a].max(e.barycentre[a] + r);
        }
    }
    (lo, hi)
}

fn map_points<F>(points: &[Point3], f: F) -> Result<Vec<Complex64>>
where
    F: Fn(&Point3) -> Result<Complex64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(f).collect()
    }
}

/// Scattered field `u = −Sφ` at each point. `h_q` defaults to the width the
/// system was assembled with.
pub fn near_field(sol: &Solution, points: &[Point3], h_q: Option<f64>) -> Result<Vec<Complex64>> {
    warn_on_screen_plane(sol, points);
    let src = Sources::new(sol, h_q)?;
    map_points(points, |x| src.scattered(x))
}

/// Scattered plus incident field.
pub fn total_field(sol: &Solution, points: &[Point3], h_q: Option<f64>) -> Result<Vec<Complex64>> {
    let u = near_field(sol, points, h_q)?;
    Ok(u.into_iter()
        .zip(points)
        .map(|(v, x)| v + plane_wave(sol.k, &sol.theta, x))
        .collect())
}

pub fn far_field(
    sol: &Solution,
    directions: &[Point3],
    h_q: Option<f64>,
) -> Result<Vec<Complex64>> {
    let src = Sources::new(sol, h_q)?;
    map_points(directions, |d| src.farfield(d))
}

/// Coefficients of a coarse solution on a nested finer mesh:
/// `c_n = c_m (μ_n/μ_m)^{1/2}`.
pub fn prolong_coeffs(coeffs: &[Complex64], coarse: &Mesh, fine: &Mesh) -> Result<Vec<Complex64>> {
    if coeffs.len() != coarse.len() {
        return Err(Error::Domain(alloc::format!(
            "{} coefficients for a mesh of {} elements",
            coeffs.len(),
            coarse.len()
        )));
    }
    let parents = coarse.parent_map(fine)?;
    let ce = coarse.elements();
    Ok(fine
        .elements()
        .iter()
        .zip(parents)
        .map(|(e, m)| coeffs[m] * libm::sqrt(e.measure / ce[m].measure))
        .collect())
}

pub fn prolong(sol: &Solution, fine: &Mesh) -> Result<Vec<Complex64>> {
    prolong_coeffs(&sol.coeffs, &sol.mesh, fine)
}

/// Galerkin matrix of the screened kernel (`k = i`) on `mesh`.
pub fn screened_gram(mesh: &Mesh, policy: &QuadPolicy, opts: &AssemblyOptions) -> Result<Matrix> {
    assemble_matrix(
        mesh,
        &KernelConfig::screened(mesh.attractor().n())?,
        policy,
        opts,
    )
}

/// `(2 vᴴ A v)^{1/2}` for the screened Gram matrix `A`.
pub fn hminushalf_norm(v: &[Complex64], gram: &Matrix) -> Result<f64> {
    if v.len() != gram.n() {
        return Err(Error::Domain(alloc::format!(
            "vector of length {} for a {}×{} matrix",
            v.len(),
            gram.n(),
            gram.n()
        )));
    }
    let q = 2.0 * gram.quadratic_form(v).re;
    if q >= 0.0 {
        return Ok(libm::sqrt(q));
    }
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if q >= -1e-14 * vv * gram.norm_inf() {
        Ok(0.0)
    } else {
        Err(Error::Singular(alloc::format!(
            "screened form is negative ({q:e}); quadrature too coarse for definiteness"
        )))
    }
}

/// `𝒩(k) = 10 max(k, 2)`, rounded up to an even integer.
pub fn sample_count(k: f64) -> usize {
    let v = libm::ceil(10.0 * k.max(2.0)) as usize;
    v + v % 2
}

/// Near-field sample points: `4𝒩` points on the boundary of
/// `(−1,2)×(−1.5,1.5)` for `n = 1`, an `𝒩×𝒩` grid on `[−1,2]²×{−1}` for `n = 2`.
pub fn near_field_samples(n: usize, k: f64) -> Vec<Point3> {
    let m = sample_count(k);
    if n == 1 {
        let corners = [
            [-1.0, -1.5],
            [2.0, -1.5],
            [2.0, 1.5],
            [-1.0, 1.5],
            [-1.0, -1.5],
        ];
        let mut out = Vec::with_capacity(4 * m);
        for s in 0..4 {
            let (a, b): ([f64; 2], [f64; 2]) = (corners[s], corners[s + 1]);
            for i in 0..m {
                let t = i as f64 / m as f64;
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0]);
            }
        }
        out
    } else {
        let step = 3.0 / (m - 1) as f64;
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                out.push([-1.0 + i as f64 * step, -1.0 + j as f64 * step, -1.0]);
            }
        }
        out
    }
}

/// Far-field directions: `𝒩` equispaced angles on the circle for `n = 1`;
/// for `n = 2` an `𝒩/2 × 𝒩` grid of polar (cell midpoints) by azimuthal angles.
pub fn far_field_directions(n: usize, k: f64) -> Vec<Point3> {
    let m = sample_count(k);
    if n == 1 {
        (0..m)
            .map(|i| {
                let (s, c) = libm::sincos(2.0 * PI * i as f64 / m as f64);
                [c, s, 0.0]
            })
            .collect()
    } else {
        let mut out = Vec::with_capacity(m * m / 2);
        for i in 0..m / 2 {
            let (st, ct) = libm::sincos(PI * (i as f64 + 0.5) / (m / 2) as f64);
            for j in 0..m {
                let (sp, cp) = libm::sincos(2.0 * PI * j as f64 / m as f64);
                out.push([st * cp, st * sp, ct]);
            }
        }
        out
    }
}
