//! Galerkin discretisation of the single-layer operator in the normalised
//! piecewise-constant basis `f_j = μ_j^{-1/2} 1_{Γ_j}`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{embed, Point3};
use crate::ifs::{le_tol, Certificate};
use crate::kernels::{check_unit, KernelConfig, Wavenumber};
use crate::linalg::{solve_certified, Matrix};
use crate::mesh::Mesh;
use crate::quadrature::{
    diag_singular_integral, nodes, offdiag_nodes, Node, QuadPolicy, ReducedQuadrature,
};
use crate::sum::pairwise;

/// Default cap on the dense matrix size: 4 GiB.
pub const DEFAULT_MEMORY_BUDGET: usize = 4 << 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    pub memory_budget: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Checks the dense `N × N` complex matrix against the budget.
pub fn check_budget(n: usize, budget: usize) -> Result<()> {
    let required = n
        .checked_mul(n)
        .and_then(|v| v.checked_mul(core::mem::size_of::<Complex64>()))
        .unwrap_or(usize::MAX);
    if required > budget {
        return Err(Error::MemoryBudget { required, budget });
    }
    Ok(())
}

/// `A_ij = μ_i^{-1/2} μ_j^{-1/2} ∫_{Γ_i}∫_{Γ_j} Φ`, computed for `i ≤ j` and
/// mirrored, so `A` is symmetric bit for bit.
pub fn assemble_matrix(
    mesh: &Mesh,
    cfg: &KernelConfig,
    policy: &QuadPolicy,
    opts: &AssemblyOptions,
) -> Result<Matrix> {
    let n = mesh.len();
    if n == 0 {
        return Err(Error::Domain(alloc::string::String::from("empty mesh")));
    }
    check_budget(n, opts.memory_budget)?;
    let attractor = mesh.attractor();
    if cfg.n != attractor.n() {
        return Err(Error::Domain(alloc::format!(
            "kernel for n = {} on a screen with n = {}",
            cfg.n,
            attractor.n()
        )));
    }
    if attractor.hull_disjoint() != Certificate::Yes {
        log::warn!(
            "hull-disjointness not certified ({}); quadrature error theory does not apply",
            attractor.hull_disjoint().as_str()
        );
    }
    let h_q = policy.h_q(mesh.h(), attractor.d())?;
    let el = mesh.elements();
    let base: Vec<Vec<Node>> = el.iter().map(|e| nodes(attractor, e, h_q)).collect();
    let reduced = policy
        .reduced
        .then(|| ReducedQuadrature::new(el, cfg.n, cfg.decay_k()));
    let kernel = |r: f64| cfg.phi(r);

    let row = |i: usize| -> Result<Vec<Complex64>> {
        let ei = &el[i];
        let si = libm::sqrt(ei.measure);
        let mut out = Vec::with_capacity(n - i);
        out.push(diag_singular_integral(attractor, ei, cfg, h_q)? / ei.measure);
        for j in i + 1..n {
            let ej = &el[j];
            let hij = reduced.map_or(h_q, |m| m.hq(ei, ej, h_q));
            let v = if le_tol(hij, h_q) {
                offdiag_nodes(&base[i], &base[j], kernel)?
            } else {
                offdiag_nodes(
                    &nodes(attractor, ei, hij),
                    &nodes(attractor, ej, hij),
                    kernel,
                )?
            };
            out.push(v / (si * libm::sqrt(ej.measure)));
        }
        Ok(out)
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<Complex64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<Complex64>> = (0..n).map(row).collect::<Result<_>>()?;

    let mut a = Matrix::zeros(n);
    for (i, r) in rows.iter().enumerate() {
        for (off, v) in r.iter().enumerate() {
            a[(i, i + off)] = *v;
            a[(i + off, i)] = *v;
        }
    }
    Ok(a)
}

/// `b_i = μ_i^{-1/2} Σ_n μ_n exp(i k θ·(x_n, 0))`.
pub fn assemble_rhs(mesh: &Mesh, k: f64, theta: &Point3, h_q: f64) -> Result<Vec<Complex64>> {
    check_unit(theta)?;
    if mesh.attractor().n() == 1 && theta[2] != 0.0 {
        return Err(Error::Domain(alloc::string::String::from(
            "incident direction for n = 1 must lie in the plane",
        )));
    }
    let attractor = mesh.attractor();
    Ok(mesh
        .elements()
        .iter()
        .map(|e| {
            let terms: Vec<Complex64> = nodes(attractor, e, h_q)
                .iter()
                .map(|nd| plane_wave(k, theta, &embed(&nd.x)) * nd.w)
                .collect();
            pairwise(&terms) / libm::sqrt(e.measure)
        })
        .collect())
}

/// `exp(i k θ·x)`.
pub fn plane_wave(k: f64, theta: &Point3, x: &Point3) -> Complex64 {
    let (s, c) = libm::sincos(k * (theta[0] * x[0] + theta[1] * x[1] + theta[2] * x[2]));
    Complex64::new(c, s)
}

/// Matrix, right-hand side and the data they were built from.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub mesh: Mesh,
    pub k: f64,
    pub theta: Point3,
    pub policy: QuadPolicy,
    pub h_q: f64,
    pub matrix: Matrix,
    pub rhs: Vec<Complex64>,
}

impl GalerkinSystem {
    pub fn assemble(
        mesh: &Mesh,
        k: f64,
        theta: Point3,
        policy: QuadPolicy,
        opts: &AssemblyOptions,
    ) -> Result<Self> {
        let n = mesh.attractor().n();
        let cfg = KernelConfig::new(n, Wavenumber::Real(k))?;
        let h_q = policy.h_q(mesh.h(), mesh.attractor().d())?;
        let rhs = assemble_rhs(mesh, k, &theta, h_q)?;
        let matrix = assemble_matrix(mesh, &cfg, &policy, opts)?;
        Ok(GalerkinSystem {
            mesh: mesh.clone(),
            k,
            theta,
            policy,
            h_q,
            matrix,
            rhs,
        })
    }

    /// LU solve with the residual certified to `1e-10`.
    pub fn solve(&self) -> Result<Solution> {
        let (coeffs, residual) = solve_certified(&self.matrix, &self.rhs)?;
        Ok(Solution {
            mesh: self.mesh.clone(),
            coeffs,
            k: self.k,
            theta: self.theta,
            h_q: self.h_q,
            residual,
        })
    }
}

/// Coefficients in the normalised basis together with the problem data.
#[derive(Debug, Clone)]
pub struct Solution {
    pub mesh: Mesh,
    pub coeffs: Vec<Complex64>,
    pub k: f64,
    pub theta: Point3,
    /// Quadrature width used for the system; the default for functionals.
    pub h_q: f64,
    pub residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::Attractor;
    use crate::linalg::cholesky;

    fn theta() -> Point3 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        [s, -s, 0.0]
    }

    #[test]
    fn root_mesh_is_diagonal_integral() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let mesh = Mesh::level(&a, 0).unwrap();
        let pol = QuadPolicy::relative(1.0 / 9.0, true);
        let sys = GalerkinSystem::assemble(&mesh, 1.0, theta(), pol, &Default::default()).unwrap();
        let cfg = KernelConfig::helmholtz(1, 1.0).unwrap();
        let want = diag_singular_integral(&a, &a.root(), &cfg, 1.0 / 9.0).unwrap();
        assert_eq!(sys.matrix[(0, 0)], want);
        let sol = sys.solve().unwrap();
        assert!((sol.coeffs[0] - sys.rhs[0] / sys.matrix[(0, 0)]).norm() < 1e-15);
    }

    #[test]
    fn symmetric_and_screened_spd() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let mesh = Mesh::level(&a, 3).unwrap();
        let pol = QuadPolicy::relative(1.0 / 9.0, true);
        let m = assemble_matrix(
            &mesh,
            &KernelConfig::helmholtz(1, 5.0).unwrap(),
            &pol,
            &Default::default(),
        )
        .unwrap();
        assert!(m.is_symmetric());
        let s = assemble_matrix(
            &mesh,
            &KernelConfig::screened(1).unwrap(),
            &pol,
            &Default::default(),
        )
        .unwrap();
        assert!(s.is_symmetric());
        assert!(cholesky(&s).is_ok());
    }

    #[test]
    fn rhs_bounds_and_small_k_limit() {
        let a = Attractor::cantor_dust(1.0 / 3.0).unwrap();
        let mesh = Mesh::level(&a, 2).unwrap();
        let t = [
            0.0,
            core::f64::consts::FRAC_1_SQRT_2,
            -core::f64::consts::FRAC_1_SQRT_2,
        ];
        let b = assemble_rhs(&mesh, 3.0, &t, 0.01).unwrap();
        for (bi, e) in b.iter().zip(mesh.elements()) {
            assert!(bi.norm() <= e.measure.sqrt() * (1.0 + 1e-14));
        }
        let b0 = assemble_rhs(&mesh, 1e-12, &t, 0.01).unwrap();
        for (bi, e) in b0.iter().zip(mesh.elements()) {
            assert!((bi - e.measure.sqrt()).norm() < 1e-12);
        }
        assert!(assemble_rhs(&mesh, 1.0, &[1.0, 1.0, 0.0], 0.01).is_err());
    }

    #[test]
    fn rhs_reflection_symmetry() {
        // x ↦ 1 − x preserves the Cantor measure
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let mesh = Mesh::level(&a, 0).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let b1 = assemble_rhs(&mesh, 1.0, &[s, -s, 0.0], 3f64.powi(-6)).unwrap()[0];
        let b2 = assemble_rhs(&mesh, 1.0, &[-s, -s, 0.0], 3f64.powi(-6)).unwrap()[0];
        // ∫ e^{ikθ₁x} = e^{ikθ₁} ∫ e^{-ikθ₁x}
        let phase = Complex64::from_polar(1.0, 1.0 * s);
        assert!((b1 - phase * b2).norm() < 1e-14);
    }

    #[test]
    fn memory_budget_refuses() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let mesh = Mesh::level(&a, 4).unwrap();
        let pol = QuadPolicy::relative(1.0 / 9.0, true);
        let opts = AssemblyOptions {
            memory_budget: 1000,
        };
        assert!(matches!(
            assemble_matrix(
                &mesh,
                &KernelConfig::helmholtz(1, 1.0).unwrap(),
                &pol,
                &opts
            ),
            Err(Error::MemoryBudget { .. })
        ));
    }
}
