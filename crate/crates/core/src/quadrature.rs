//! Composite barycentre rules with respect to `H^d`, singularity subtraction
//! for the diagonal Galerkin entries, and distance-adapted quadrature widths.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{dist2, Point2};
use crate::ifs::{Attractor, Component};
use crate::kernels::{phi_sing, KernelConfig};
use crate::sum::pairwise;

/// How the quadrature width `h_Q` is derived from the mesh width `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadRule {
    /// `h_Q = C_Q h`.
    Relative(f64),
    /// A fixed `h_Q`.
    Absolute(f64),
    /// `h_Q = C_Q h^{1+d}`, sufficient for general attractors.
    General(f64),
    /// `h_Q = C_Q h^{1+d/2}`, sufficient for hull-disjoint attractors.
    Uniform(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPolicy {
    pub rule: QuadRule,
    /// Enlarge `h_Q` for well-separated element pairs.
    pub reduced: bool,
}

impl QuadPolicy {
    pub fn relative(c_q: f64, reduced: bool) -> Self {
        QuadPolicy {
            rule: QuadRule::Relative(c_q),
            reduced,
        }
    }

    pub fn absolute(h_q: f64, reduced: bool) -> Self {
        QuadPolicy {
            rule: QuadRule::Absolute(h_q),
            reduced,
        }
    }

    /// Resolves `h_Q` for a mesh of width `h` on a `d`-set.
    pub fn h_q(&self, h: f64, d: f64) -> Result<f64> {
        let (v, c) = match self.rule {
            QuadRule::Relative(c) => (c * h, c),
            QuadRule::Absolute(v) => (v, v),
            QuadRule::General(c) => (c * libm::pow(h, 1.0 + d), c),
            QuadRule::Uniform(c) => (c * libm::pow(h, 1.0 + 0.5 * d), c),
        };
        if matches!(self.rule, QuadRule::Relative(_)) && !(c > 0.0 && c <= 1.0) {
            return Err(Error::Domain(alloc::format!("C_Q = {c} not in (0, 1]")));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(alloc::format!("h_Q = {v} must be positive")));
        }
        Ok(v)
    }
}

/// A quadrature point: barycentre of a component and its measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: Point2,
    pub w: f64,
}

/// Barycentre nodes of the partition of `c` at width `h_q`, depth-first.
pub fn nodes(attractor: &Attractor, c: &Component, h_q: f64) -> Vec<Node> {
    attractor
        .quad_partition(c, h_q)
        .into_iter()
        .map(|p| Node {
            x: p.barycentre,
            w: p.measure,
        })
        .collect()
}

/// `∫_{Γ_m} f dH^d ≈ Σ_n μ_n f(x_n)`.
pub fn single_integral<F>(attractor: &Attractor, c: &Component, h_q: f64, f: F) -> Complex64
where
    F: Fn(&Point2) -> Complex64,
{
    let terms: Vec<Complex64> = nodes(attractor, c, h_q)
        .iter()
        .map(|n| f(&n.x) * n.w)
        .collect();
    pairwise(&terms)
}

/// Tensor barycentre rule `Σ_n Σ_n' w_n w_n' K(|x_n − x_n'|)`; every row is
/// summed pairwise, then the row sums.
pub fn offdiag_nodes<K>(p: &[Node], q: &[Node], kernel: K) -> Result<Complex64>
where
    K: Fn(f64) -> Result<Complex64>,
{
    let mut rows = Vec::with_capacity(p.len());
    let mut row = Vec::with_capacity(q.len());
    for a in p {
        row.clear();
        for b in q {
            let r = dist2(&a.x, &b.x);
            if r == 0.0 {
                return Err(Error::SingularEvaluation(alloc::format!(
                    "coincident barycentres at {:?}",
                    a.x
                )));
            }
            row.push(kernel(r)? * b.w);
        }
        rows.push(pairwise(&row) * a.w);
    }
    Ok(pairwise(&rows))
}

/// `∫_{Γ_i}∫_{Γ_j} K dH^d dH^d` for distinct components by the composite
/// barycentre rule at width `h_q`.
pub fn double_integral_offdiag<K>(
    attractor: &Attractor,
    a: &Component,
    b: &Component,
    h_q: f64,
    kernel: K,
) -> Result<Complex64>
where
    K: Fn(f64) -> Result<Complex64>,
{
    if a.address == b.address {
        return Err(Error::Domain(alloc::format!(
            "off-diagonal rule applied to the single component {}",
            a.address
        )));
    }
    offdiag_nodes(&nodes(attractor, a, h_q), &nodes(attractor, b, h_q), kernel)
}

/// `∫∫_{Γ_m×Γ_m} Φ_sing` from the self-similarity identity: the children's
/// self-interactions are rescaled copies of the parent's, leaving only the
/// cross-child integrals to quadrature.
pub fn diag_singular_part(attractor: &Attractor, c: &Component, h_q: f64) -> Result<f64> {
    let n = attractor.n();
    let d = attractor.d();
    let maps = attractor.maps();
    let kids = attractor.children(c);
    let kid_nodes: Vec<Vec<Node>> = kids.iter().map(|k| nodes(attractor, k, h_q)).collect();
    let sing = |r: f64| phi_sing(n, r).map(|v| Complex64::new(v, 0.0));
    let mut cross = Vec::new();
    for i in 0..kids.len() {
        for j in i + 1..kids.len() {
            cross.push(2.0 * offdiag_nodes(&kid_nodes[i], &kid_nodes[j], sing)?.re);
        }
    }
    let (denom, self_terms) = if n == 1 {
        let denom = 1.0 - maps.iter().map(|m| libm::pow(m.rho, 2.0 * d)).sum::<f64>();
        let mu2 = c.measure * c.measure;
        let logs: Vec<f64> = maps
            .iter()
            .map(|m| {
                -mu2 * libm::pow(m.rho, 2.0 * d) * libm::log(m.rho) / (2.0 * core::f64::consts::PI)
            })
            .collect();
        (denom, pairwise(&logs))
    } else {
        let denom = 1.0
            - maps
                .iter()
                .map(|m| libm::pow(m.rho, 2.0 * d - 1.0))
                .sum::<f64>();
        (denom, 0.0)
    };
    if !(denom > 0.0) {
        return Err(Error::InvalidGeometry(alloc::format!(
            "self-similarity prefactor denominator {denom} is not positive"
        )));
    }
    Ok((self_terms + pairwise(&cross)) / denom)
}

/// `∫∫_{Γ_m×Γ_m} Φ_reg` by the barycentre rule, including coincident nodes
/// where `Φ_reg` takes its limit value.
pub fn diag_regular_part(
    attractor: &Attractor,
    c: &Component,
    cfg: &KernelConfig,
    h_q: f64,
) -> Result<Complex64> {
    let p = nodes(attractor, c, h_q);
    let mut rows = Vec::with_capacity(p.len());
    let mut row = Vec::with_capacity(p.len());
    for a in &p {
        row.clear();
        for b in &p {
            row.push(cfg.phi_reg(dist2(&a.x, &b.x))? * b.w);
        }
        rows.push(pairwise(&row) * a.w);
    }
    Ok(pairwise(&rows))
}

/// `∫∫_{Γ_m×Γ_m} Φ dH^d dH^d` by singularity subtraction.
pub fn diag_singular_integral(
    attractor: &Attractor,
    c: &Component,
    cfg: &KernelConfig,
    h_q: f64,
) -> Result<Complex64> {
    let reg = diag_regular_part(attractor, c, cfg, h_q)?;
    Ok(reg + diag_singular_part(attractor, c, h_q)?)
}

/// Kernel-decay model `Υ(R) = (1 + (kR)^{n/2+1}) / R^{n+1}`.
pub fn upsilon(n: usize, k: f64, r: f64) -> f64 {
    let nf = n as f64;
    (1.0 + libm::pow(k * r, 0.5 * nf + 1.0)) / libm::pow(r, nf + 1.0)
}

/// Widths `h_{Q,i,j}` for reduced quadrature on a fixed mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedQuadrature {
    n: usize,
    k: f64,
    upsilon_max: f64,
}

impl ReducedQuadrature {
    /// Precomputes `max_{p≠q} Υ(|x_p − x_q|)` over the element barycentres.
    pub fn new(elements: &[Component], n: usize, k: f64) -> Self {
        let mut upsilon_max: f64 = 0.0;
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                let r = dist2(&a.barycentre, &b.barycentre);
                if r > 0.0 {
                    upsilon_max = upsilon_max.max(upsilon(n, k, r));
                }
            }
        }
        ReducedQuadrature { n, k, upsilon_max }
    }

    pub fn upsilon_max(&self) -> f64 {
        self.upsilon_max
    }

    /// `h_Q max(√(Υ_max / Υ(R⁻_ij)), 1)` with `R⁻ = max(|x_i − x_j| − diam_i − diam_j, 0)`
    /// and `1/Υ(0) = 0`.
    pub fn hq(&self, a: &Component, b: &Component, h_q: f64) -> f64 {
        let r_minus = (dist2(&a.barycentre, &b.barycentre) - a.diam - b.diam).max(0.0);
        if r_minus == 0.0 || self.upsilon_max == 0.0 {
            return h_q;
        }
        let ratio = self.upsilon_max / upsilon(self.n, self.k, r_minus);
        h_q * libm::sqrt(ratio).max(1.0)
    }
}

/// `h_{Q,i,j}` for elements `i ≠ j` of `elements`; builds the decay model on
/// the fly, so prefer [`ReducedQuadrature`] inside loops.
pub fn reduced_hq(
    elements: &[Component],
    i: usize,
    j: usize,
    h_q: f64,
    cfg: &KernelConfig,
) -> Result<f64> {
    if i == j {
        return Err(Error::Domain(alloc::format!(
            "reduced width requested for the diagonal entry {i}"
        )));
    }
    let model = ReducedQuadrature::new(elements, cfg.n, cfg.decay_k());
    Ok(model.hq(&elements[i], &elements[j], h_q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::Address;

    fn one(_: f64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    #[test]
    fn exact_for_constants_and_affine() {
        let a = Attractor::cantor_dust(0.3).unwrap();
        let c = a.component(&Address::from_one_based(&[2, 3])).unwrap();
        for hq in [1.0, 0.05, 0.004] {
            let m = single_integral(&a, &c, hq, |_| Complex64::new(1.0, 0.0));
            assert!((m.re - c.measure).abs() < 1e-15);
            let fx = single_integral(&a, &c, hq, |x| Complex64::new(x[0], x[1]));
            assert!((fx.re - c.measure * c.barycentre[0]).abs() < 1e-15);
            assert!((fx.im - c.measure * c.barycentre[1]).abs() < 1e-15);
        }
        let d = a.component(&Address::from_one_based(&[1])).unwrap();
        let v = double_integral_offdiag(&a, &c, &d, 0.01, one).unwrap();
        assert!((v.re - c.measure * d.measure).abs() < 1e-15);
    }

    #[test]
    fn second_moment_of_cantor_set() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let v = single_integral(&a, &a.root(), 3f64.powi(-6), |x| {
            Complex64::new(x[0] * x[0], 0.0)
        });
        // ∫x² = (1/18)∫x² + (1/2)∫(2/3 + x/3)² gives 3/8
        assert!((v.re - 3.0 / 8.0).abs() < 1e-6);
    }

    #[test]
    fn offdiag_symmetric_and_rejects_coincidence() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let c1 = a.component(&Address::from_one_based(&[1])).unwrap();
        let c2 = a.component(&Address::from_one_based(&[2])).unwrap();
        let cfg = KernelConfig::helmholtz(1, 3.0).unwrap();
        let k = |r: f64| cfg.phi(r);
        let x = double_integral_offdiag(&a, &c1, &c2, 1e-3, k).unwrap();
        let y = double_integral_offdiag(&a, &c2, &c1, 1e-3, k).unwrap();
        assert!((x - y).norm() < 1e-17);
        assert!(double_integral_offdiag(&a, &c1, &c1, 1e-3, k).is_err());
        let n = [Node {
            x: [0.5, 0.0],
            w: 1.0,
        }];
        assert!(matches!(
            offdiag_nodes(&n, &n, k),
            Err(Error::SingularEvaluation(_))
        ));
    }

    #[test]
    fn cantor_root_singular_value() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let v = diag_singular_part(&a, &a.root(), 3f64.powi(-6)).unwrap();
        // reference from a direct level-9 barycentre sum, cross-checked by Richardson
        assert!((v - 0.244_740_63).abs() < 1e-6, "{v}");
        let c1 = a.component(&Address::from_one_based(&[1])).unwrap();
        let c2 = a.component(&Address::from_one_based(&[2])).unwrap();
        let sing = |r: f64| phi_sing(1, r).map(|v| Complex64::new(v, 0.0));
        let cross = double_integral_offdiag(&a, &c1, &c2, 3f64.powi(-7), sing).unwrap();
        assert!((cross.re - 0.017_472_764).abs() < 1e-8, "{}", cross.re);
    }

    #[test]
    fn singular_part_scales_exactly() {
        // Γ_(m) is a copy of Γ scaled by ρ_m, so under the rule the child
        // value at h_Q equals the rescaled root value at h_Q/ρ_m.
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        let rho: f64 = 1.0 / 3.0;
        let hq = 3f64.powi(-6);
        let root = diag_singular_part(&a, &a.root(), hq / rho).unwrap();
        let child = diag_singular_part(
            &a,
            &a.component(&Address::from_one_based(&[2])).unwrap(),
            hq,
        )
        .unwrap();
        let mu = 0.5;
        let want = mu * mu * (root - rho.ln() / (2.0 * core::f64::consts::PI));
        assert!((child - want).abs() < 1e-10, "{child} {want}");

        let dust = Attractor::cantor_dust(1.0 / 3.0).unwrap();
        let root = diag_singular_part(&dust, &dust.root(), 0.02 / rho).unwrap();
        let child = diag_singular_part(
            &dust,
            &dust.component(&Address::from_one_based(&[3])).unwrap(),
            0.02,
        )
        .unwrap();
        let w = 0.25;
        assert!((child - w * w * root / rho).abs() < 1e-10 * root);
    }

    #[test]
    fn reduced_width_properties() {
        let a = Attractor::cantor_dust(1.0 / 3.0).unwrap();
        let mesh = crate::mesh::Mesh::level(&a, 2).unwrap();
        let el = mesh.elements();
        let cfg = KernelConfig::helmholtz(2, 5.0).unwrap();
        let model = ReducedQuadrature::new(el, 2, 5.0);
        let hq = 0.01;
        for i in 0..el.len() {
            for j in 0..el.len() {
                if i == j {
                    continue;
                }
                let v = model.hq(&el[i], &el[j], hq);
                assert!(v >= hq);
                assert_eq!(v, model.hq(&el[j], &el[i], hq));
            }
        }
        assert_eq!(
            reduced_hq(el, 0, 15, hq, &cfg).unwrap(),
            model.hq(&el[0], &el[15], hq)
        );
        assert!(reduced_hq(el, 0, 0, hq, &cfg).is_err());
        // touching elements keep h_Q
        let far = model.hq(&el[0], &el[1], hq);
        assert_eq!(far, hq);
    }
}
