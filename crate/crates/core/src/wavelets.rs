//! Hierarchical orthonormal Haar-type wavelets on disjoint attractors and
//! the fractional norms `‖·‖_t` built from their coefficients.
//!
//! Functions are piecewise constant on a mesh `L_h` and passed as element
//! values. The scaled wavelet at address `m` takes the value
//! `μ_m^{-1/2} v^k_j` on the child `Γ_{m j}`, where `v^k` are the mother
//! tables below.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ifs::{Address, Attractor, Certificate, Component};
use crate::mesh::Mesh;

/// The band `ν` with `2^{−ν} ≤ diam < 2^{−ν+1}`.
pub fn band(diam: f64) -> i32 {
    libm::ceil(-libm::log2(diam) - 1e-12) as i32
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletBasis {
    attractor: Attractor,
    mother: Vec<Vec<f64>>,
    nu0: i32,
}

/// Wavelet coefficients at one address: `beta[k] = (f, ψ^{k+1}_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Detail {
    pub address: Address,
    pub measure: f64,
    pub band: i32,
    pub beta: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    pub beta0: Complex64,
    /// Sorted by address.
    pub details: Vec<Detail>,
}

impl WaveletCoeffs {
    /// `Σ|β|²`, which equals `‖f‖²` in `L₂`.
    pub fn energy(&self) -> f64 {
        self.beta0.norm_sqr()
            + self
                .details
                .iter()
                .flat_map(|d| d.beta.iter())
                .map(|b| b.norm_sqr())
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseEstimateRow {
    pub level: usize,
    pub h: f64,
    pub elements: usize,
    /// Largest `‖Ψ‖_{L₂} h^t / ‖Ψ‖_{−t}` over the samples.
    pub max_ratio: f64,
}

impl WaveletBasis {
    /// Requires a certified disjoint attractor.
    pub fn new(attractor: &Attractor) -> Result<Self> {
        if attractor.disjoint() != Certificate::Yes {
            return Err(Error::InvalidGeometry(alloc::format!(
                "wavelet basis needs a disjoint attractor (certificate: {})",
                attractor.disjoint().as_str()
            )));
        }
        Ok(WaveletBasis {
            mother: mother_wavelets(attractor.weights()),
            nu0: band(attractor.diam()),
            attractor: attractor.clone(),
        })
    }

    pub fn attractor(&self) -> &Attractor {
        &self.attractor
    }

    /// Mother wavelet values on `Γ_1..Γ_M` for `H^d(Γ) = 1`; under the scale
    /// `γ` they are divided by `γ^{1/2}`.
    pub fn mother(&self) -> &[Vec<f64>] {
        &self.mother
    }

    pub fn nu0(&self) -> i32 {
        self.nu0
    }

    fn psi0(&self) -> f64 {
        1.0 / libm::sqrt(self.attractor.measure_scale())
    }

    fn check_mesh(&self, mesh: &Mesh, len: usize) -> Result<()> {
        if mesh.attractor() != &self.attractor {
            return Err(Error::Domain(alloc::string::String::from(
                "mesh built on a different attractor",
            )));
        }
        if len != mesh.len() {
            return Err(Error::Domain(alloc::format!(
                "{len} values for a mesh of {} elements",
                mesh.len()
            )));
        }
        Ok(())
    }

    /// Exact wavelet coefficients of the piecewise-constant function with
    /// element values `values` on `mesh`.
    pub fn analyze(&self, mesh: &Mesh, values: &[Complex64]) -> Result<WaveletCoeffs> {
        self.check_mesh(mesh, values.len())?;
        let lookup: BTreeMap<&Address, usize> = mesh
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| (&e.address, i))
            .collect();
        let depth = mesh
            .elements()
            .iter()
            .map(|e| e.address.len())
            .max()
            .unwrap_or(0);
        let mut details = Vec::new();
        let total = self.integrate(
            &self.attractor.root(),
            &lookup,
            mesh,
            values,
            depth,
            &mut details,
        )?;
        details.sort_by(|a: &Detail, b: &Detail| a.address.cmp(&b.address));
        Ok(WaveletCoeffs {
            beta0: total * self.psi0(),
            details,
        })
    }

    /// `∫_{Γ_c} f`, recording the coefficients of every wavelet below `c`.
    fn integrate(
        &self,
        c: &Component,
        lookup: &BTreeMap<&Address, usize>,
        mesh: &Mesh,
        values: &[Complex64],
        depth: usize,
        out: &mut Vec<Detail>,
    ) -> Result<Complex64> {
        if let Some(&i) = lookup.get(&c.address) {
            return Ok(values[i] * mesh.elements()[i].measure);
        }
        if c.address.len() >= depth {
            return Err(Error::Domain(alloc::format!(
                "mesh does not cover component {}",
                c.address
            )));
        }
        let mut parts = Vec::with_capacity(self.attractor.num_maps());
        for child in self.attractor.children(c) {
            parts.push(self.integrate(&child, lookup, mesh, values, depth, out)?);
        }
        let s = 1.0 / libm::sqrt(c.measure);
        let beta = self
            .mother
            .iter()
            .map(|v| parts.iter().zip(v).map(|(p, w)| p * *w).sum::<Complex64>() * s)
            .collect();
        out.push(Detail {
            address: c.address.clone(),
            measure: c.measure,
            band: band(c.diam),
            beta,
        });
        Ok(parts.iter().sum())
    }

    /// Element values on `mesh` of `β₀ψ₀ + Σ β ψ`. Fails if a coefficient
    /// belongs to a wavelet that is not piecewise constant on `mesh`.
    pub fn reconstruct(&self, coeffs: &WaveletCoeffs, mesh: &Mesh) -> Result<Vec<Complex64>> {
        self.check_mesh(mesh, mesh.len())?;
        let index: BTreeMap<&Address, usize> = coeffs
            .details
            .iter()
            .enumerate()
            .map(|(i, d)| (&d.address, i))
            .collect();
        let mut used = vec![false; coeffs.details.len()];
        let c0 = coeffs.beta0 * self.psi0();
        let mut out = Vec::with_capacity(mesh.len());
        for e in mesh.elements() {
            let idx = e.address.indices();
            let mut v = c0;
            for len in 0..idx.len() {
                let prefix = Address::from_indices(&idx[..len]);
                if let Some(&i) = index.get(&prefix) {
                    used[i] = true;
                    let d = &coeffs.details[i];
                    let j = idx[len] as usize;
                    let s = 1.0 / libm::sqrt(d.measure);
                    for (b, m) in d.beta.iter().zip(&self.mother) {
                        v += b * (m[j] * s);
                    }
                }
            }
            out.push(v);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::NotNested(alloc::format!(
                "wavelet at {} is finer than the mesh",
                coeffs.details[i].address
            )));
        }
        Ok(out)
    }

    /// Every basis function piecewise constant on `mesh`, as element values:
    /// `ψ₀` first, then the wavelets by address.
    pub fn basis_functions(&self, mesh: &Mesh) -> Result<Vec<Vec<f64>>> {
        self.check_mesh(mesh, mesh.len())?;
        let mut internal = BTreeSet::new();
        for e in mesh.elements() {
            let idx = e.address.indices();
            for len in 0..idx.len() {
                internal.insert(Address::from_indices(&idx[..len]));
            }
        }
        let mut out = vec![vec![self.psi0(); mesh.len()]];
        for p in &internal {
            let s = 1.0 / libm::sqrt(self.attractor.component_measure(p)?);
            for m in &self.mother {
                out.push(
                    mesh.elements()
                        .iter()
                        .map(|e| {
                            if p.len() < e.address.len() && p.is_prefix_of(&e.address) {
                                m[e.address.indices()[p.len()] as usize] * s
                            } else {
                                0.0
                            }
                        })
                        .collect(),
                );
            }
        }
        Ok(out)
    }

    /// `J_ν` for `ν₀ ≤ ν ≤ nu_max`.
    pub fn bands(&self, nu_max: i32) -> BTreeMap<i32, Vec<Address>> {
        let mut out: BTreeMap<i32, Vec<Address>> =
            (self.nu0..=nu_max).map(|v| (v, Vec::new())).collect();
        let mut stack = vec![self.attractor.root()];
        while let Some(c) = stack.pop() {
            let b = band(c.diam);
            if b > nu_max {
                continue;
            }
            out.entry(b).or_default().push(c.address.clone());
            let mut ch = self.attractor.children(&c);
            ch.reverse();
            stack.extend(ch);
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    /// `‖f‖_t = (|β₀|² + Σ_ν 2^{2νt} Σ_{J_ν} |β|²)^{1/2}` for `|t| < 1`;
    /// negative `t` gives the dual norm.
    pub fn fractional_norm(&self, coeffs: &WaveletCoeffs, t: f64) -> Result<f64> {
        if !(t.abs() < 1.0) {
            return Err(Error::Domain(alloc::format!("t = {t} outside (−1, 1)")));
        }
        let mut s = coeffs.beta0.norm_sqr();
        for d in &coeffs.details {
            let w = libm::exp2(2.0 * d.band as f64 * t);
            s += w * d.beta.iter().map(|b| b.norm_sqr()).sum::<f64>();
        }
        Ok(libm::sqrt(s))
    }

    /// For each level, the largest `‖Ψ‖_{L₂} h^t / ‖Ψ‖_{−t}` over `samples`
    /// random `Ψ` with element values uniform in `[−1, 1]`.
    pub fn inverse_estimate_check<R: Rng + ?Sized>(
        &self,
        levels: &[usize],
        t: f64,
        samples: usize,
        rng: &mut R,
    ) -> Result<Vec<InverseEstimateRow>> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(alloc::format!("t = {t} outside (0, 1)")));
        }
        let mut rows = Vec::with_capacity(levels.len());
        for &level in levels {
            let mesh = Mesh::level(&self.attractor, level)?;
            let h = mesh.h();
            let mut max_ratio = 0.0f64;
            for _ in 0..samples {
                let v: Vec<Complex64> = (0..mesh.len())
                    .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), 0.0))
                    .collect();
                let c = self.analyze(&mesh, &v)?;
                let l2 = libm::sqrt(c.energy());
                let neg = self.fractional_norm(&c, -t)?;
                if neg > 0.0 {
                    max_ratio = max_ratio.max(l2 * libm::pow(h, t) / neg);
                }
            }
            rows.push(InverseEstimateRow {
                level,
                h,
                elements: mesh.len(),
                max_ratio,
            });
        }
        Ok(rows)
    }
}

/// Gram–Schmidt on `ψ̃^m = 1_{Γ_m}/p_m − 1_{Γ_{m+1}}/p_{m+1}` in the inner
/// product `Σ_j p_j a_j b_j`, with `p_j` the child weights.
fn mother_wavelets(weights: &[f64]) -> Vec<Vec<f64>> {
    let total: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let inner =
        |a: &[f64], b: &[f64]| -> f64 { p.iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum() };
    let m = p.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let mut v = vec![0.0; m];
        v[k] = 1.0 / p[k];
        v[k + 1] = -1.0 / p[k + 1];
        // the constant component is zero in exact arithmetic
        let ones = vec![1.0; m];
        let c = inner(&v, &ones);
        v.iter_mut().for_each(|x| *x -= c);
        for u in &out {
            let c = inner(&v, u);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        let nrm = libm::sqrt(inner(&v, &v));
        v.iter_mut().for_each(|x| *x /= nrm);
        out.push(v);
    }
    out
}
