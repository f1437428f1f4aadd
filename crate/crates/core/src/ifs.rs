//! Iterated function systems of contracting similarities and their attractors.
//!
//! Each map has the form `s(x) = ρ A x + v` with `0 < ρ < 1` and `A`
//! orthogonal. Screens with `n = 1` are stored in the plane with zero second
//! coordinate, and their "rotations" are `diag(±1, 1)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::geometry::{dist2, Affine, Mat2, Point2, IDENTITY};

/// Relative slack used when comparing diameters against mesh widths, so that
/// `diam · ρ^ℓ` and `h = diam · ρ^ℓ` computed along different routes agree.
pub const DIAM_RTOL: f64 = 1e-12;

#[inline]
pub(crate) fn le_tol(a: f64, b: f64) -> bool {
    a <= b * (1.0 + DIAM_RTOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityMap {
    pub rho: f64,
    pub rotation: Mat2,
    pub translation: Point2,
}

impl SimilarityMap {
    pub fn new(rho: f64, rotation: Mat2, translation: Point2) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidGeometry(alloc::format!(
                "contraction factor {rho} not in (0,1)"
            )));
        }
        let r = rotation;
        let rrt = [
            [
                r[0][0] * r[0][0] + r[0][1] * r[0][1],
                r[0][0] * r[1][0] + r[0][1] * r[1][1],
            ],
            [
                r[1][0] * r[0][0] + r[1][1] * r[0][1],
                r[1][0] * r[1][0] + r[1][1] * r[1][1],
            ],
        ];
        for (i, row) in rrt.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                if !((v - target).abs() <= 1e-12) {
                    return Err(Error::InvalidGeometry(String::from(
                        "rotation matrix is not orthogonal",
                    )));
                }
            }
        }
        if !(translation[0].is_finite() && translation[1].is_finite()) {
            return Err(Error::InvalidGeometry(String::from(
                "non-finite translation",
            )));
        }
        Ok(Self {
            rho,
            rotation,
            translation,
        })
    }

    /// `x ↦ ρ x + v` in one dimension.
    pub fn scalar(rho: f64, v: f64) -> Result<Self> {
        Self::new(rho, IDENTITY, [v, 0.0])
    }

    /// `x ↦ ρ x + v` in the plane (no rotation).
    pub fn planar(rho: f64, v: Point2) -> Result<Self> {
        Self::new(rho, IDENTITY, v)
    }

    #[inline]
    pub fn apply(&self, x: &Point2) -> Point2 {
        self.affine().apply(x)
    }

    #[inline]
    pub fn affine(&self) -> Affine {
        Affine {
            scale: self.rho,
            rotation: self.rotation,
            translation: self.translation,
        }
    }

    /// Unique fixed point of the map.
    pub fn fixed_point(&self) -> Point2 {
        fixed_point(&self.affine())
    }
}

/// Fixed point of a contracting similarity: solves `(I − σR) p = t`.
pub fn fixed_point(a: &Affine) -> Point2 {
    let m = [
        [
            1.0 - a.scale * a.rotation[0][0],
            -a.scale * a.rotation[0][1],
        ],
        [
            -a.scale * a.rotation[1][0],
            1.0 - a.scale * a.rotation[1][1],
        ],
    ];
    solve2(&m, &a.translation)
}

fn solve2(m: &Mat2, b: &Point2) -> Point2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        (b[0] * m[1][1] - m[0][1] * b[1]) / det,
        (m[0][0] * b[1] - m[1][0] * b[0]) / det,
    ]
}

/// Solves `Σ ρ_m^d = 1` for `d`.
///
/// Homogeneous systems use `log M / log(1/ρ)`; otherwise the strictly
/// decreasing function `d ↦ Σ ρ_m^d` is bisected on `[1e-9, n]`.
pub fn fractal_dimension(maps: &[SimilarityMap], n: usize) -> Result<f64> {
    if maps.len() < 2 {
        return Err(Error::InvalidGeometry(String::from(
            "an IFS needs at least two maps",
        )));
    }
    if n != 1 && n != 2 {
        return Err(Error::InvalidGeometry(alloc::format!(
            "screen dimension {n} not supported"
        )));
    }
    let r0 = maps[0].rho;
    let homogeneous = maps.iter().all(|m| (m.rho - r0).abs() <= 1e-14);
    let nf = n as f64;
    let d = if homogeneous {
        libm::log(maps.len() as f64) / libm::log(1.0 / r0)
    } else {
        let f = |d: f64| maps.iter().map(|m| libm::pow(m.rho, d)).sum::<f64>() - 1.0;
        if f(nf) > 1e-12 {
            return Err(dimension_too_large(n));
        }
        let (mut lo, mut hi) = (1e-9, nf);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    if d > nf * (1.0 + 1e-12) {
        return Err(dimension_too_large(n));
    }
    Ok(d)
}

fn dimension_too_large(n: usize) -> Error {
    Error::InvalidGeometry(alloc::format!(
        "the similarity dimension exceeds the screen dimension {n}"
    ))
}

/// Multi-index `(m_1, …, m_ℓ)` naming the component `Γ_m = s_{m_1}∘⋯∘s_{m_ℓ}(Γ)`.
///
/// Indices are stored zero-based and displayed one-based; the empty address
/// is the root and displays as `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Address(Vec<u16>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    /// Builds an address from zero-based indices.
    pub fn from_indices(idx: &[u16]) -> Self {
        Address(idx.to_vec())
    }

    /// Builds an address from one-based indices, as they are usually written.
    pub fn from_one_based(idx: &[usize]) -> Self {
        Address(idx.iter().map(|&i| (i - 1) as u16).collect())
    }

    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, j: usize) -> Address {
        let mut v = self.0.clone();
        v.push(j as u16);
        Address(v)
    }

    pub fn parent(&self) -> Option<Address> {
        if self.0.is_empty() {
            None
        } else {
            Some(Address(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// True when `self` is an ancestor of `other` or equal to it.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", m + 1)?;
        }
        write!(f, ")")
    }
}

/// Outcome of a numerical separation test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Yes,
    No,
    Undetermined,
}

impl Certificate {
    pub fn is_yes(self) -> bool {
        self == Certificate::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Yes => "true",
            Certificate::No => "false",
            Certificate::Undetermined => "undetermined",
        }
    }
}

/// A component `Γ_m` together with everything derived from its address.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub address: Address,
    pub measure: f64,
    pub diam: f64,
    pub barycentre: Point2,
    /// Composite similarity `s_{m_1}∘⋯∘s_{m_ℓ}`.
    pub map: Affine,
}

/// Attractor of an IFS of contracting similarities, carrying the normalised
/// Hausdorff measure `H^d(Γ) = γ` (by default `γ = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Attractor {
    maps: Vec<SimilarityMap>,
    n: usize,
    d: f64,
    diam: f64,
    weights: Vec<f64>,
    x0: Point2,
    measure_scale: f64,
    disjoint: Certificate,
    hull_disjoint: Certificate,
}

/// Default maximum refinement depth used by the separation certificates.
pub const DEFAULT_CERT_DEPTH: usize = 24;

impl Attractor {
    /// Builds an attractor. When `diam` is `None` it is replaced by the
    /// certified upper bound from [`estimate_diameter`].
    pub fn new(maps: Vec<SimilarityMap>, n: usize, diam: Option<f64>) -> Result<Self> {
        let d = fractal_dimension(&maps, n)?;
        if n == 1 {
            for m in &maps {
                let r = m.rotation;
                if r[0][1] != 0.0 || r[1][0] != 0.0 || r[1][1] != 1.0 || m.translation[1] != 0.0 {
                    return Err(Error::InvalidGeometry(String::from(
                        "one-dimensional maps must have the form x ↦ ±ρx + v",
                    )));
                }
            }
        }
        let weights: Vec<f64> = maps.iter().map(|m| libm::pow(m.rho, d)).collect();
        let x0 = root_barycentre(&maps, d);
        let mut a = Attractor {
            maps,
            n,
            d,
            diam: 1.0,
            weights,
            x0,
            measure_scale: 1.0,
            disjoint: Certificate::Undetermined,
            hull_disjoint: Certificate::Undetermined,
        };
        a.diam = match diam {
            Some(v) if v > 0.0 && v.is_finite() => v,
            Some(v) => {
                return Err(Error::InvalidGeometry(alloc::format!(
                    "diameter {v} must be positive"
                )))
            }
            None => {
                let level = a.auto_diameter_level();
                let (_, upper) = a.estimate_diameter(level);
                if !upper.is_finite() {
                    return Err(Error::InvalidGeometry(String::from(
                        "diameter estimation failed; supply the diameter explicitly",
                    )));
                }
                upper
            }
        };
        let (dj, hj) = a.check_disjoint(DEFAULT_CERT_DEPTH);
        a.disjoint = dj;
        a.hull_disjoint = hj;
        Ok(a)
    }

    /// Middle-`(1−2ρ)` Cantor set in `[0,1]`: `s_1 = ρx`, `s_2 = 1−ρ+ρx`.
    pub fn cantor_set(rho: f64) -> Result<Self> {
        check_cantor_rho(rho)?;
        Self::new(
            vec![
                SimilarityMap::scalar(rho, 0.0)?,
                SimilarityMap::scalar(rho, 1.0 - rho)?,
            ],
            1,
            Some(1.0),
        )
    }

    /// Middle-`(1−2ρ)` Cantor dust in `[0,1]²`.
    pub fn cantor_dust(rho: f64) -> Result<Self> {
        check_cantor_rho(rho)?;
        let t = 1.0 - rho;
        Self::new(
            vec![
                SimilarityMap::planar(rho, [0.0, 0.0])?,
                SimilarityMap::planar(rho, [t, 0.0])?,
                SimilarityMap::planar(rho, [t, t])?,
                SimilarityMap::planar(rho, [0.0, t])?,
            ],
            2,
            Some(core::f64::consts::SQRT_2),
        )
    }

    /// Sierpinski triangle with unit side.
    pub fn sierpinski() -> Result<Self> {
        let h = libm::sqrt(3.0) / 4.0;
        Self::new(
            vec![
                SimilarityMap::planar(0.5, [0.0, 0.0])?,
                SimilarityMap::planar(0.5, [0.5, 0.0])?,
                SimilarityMap::planar(0.5, [0.25, h])?,
            ],
            2,
            Some(1.0),
        )
    }

    /// Four-map dust in the unit square with `ρ = (1/4, 1/4, 1/4, 1/2)`,
    /// each copy anchored at a corner.
    pub fn nonhomogeneous_dust() -> Result<Self> {
        Self::new(
            vec![
                SimilarityMap::planar(0.25, [0.0, 0.0])?,
                SimilarityMap::planar(0.25, [0.75, 0.0])?,
                SimilarityMap::planar(0.25, [0.75, 0.75])?,
                SimilarityMap::planar(0.5, [0.0, 0.5])?,
            ],
            2,
            Some(core::f64::consts::SQRT_2),
        )
    }

    /// Same attractor with `H^d(Γ) = γ`. Fields and solutions do not depend
    /// on `γ`; it exists to test exactly that.
    pub fn with_measure_scale(mut self, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(alloc::format!(
                "measure scale {gamma} must be positive"
            )));
        }
        self.measure_scale = gamma;
        Ok(self)
    }

    pub fn maps(&self) -> &[SimilarityMap] {
        &self.maps
    }

    pub fn num_maps(&self) -> usize {
        self.maps.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn diam(&self) -> f64 {
        self.diam
    }

    pub fn measure_scale(&self) -> f64 {
        self.measure_scale
    }

    /// `ρ_m^d` for each map.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rho_max(&self) -> f64 {
        self.maps.iter().map(|m| m.rho).fold(0.0, f64::max)
    }

    pub fn is_homogeneous(&self) -> bool {
        let r0 = self.maps[0].rho;
        self.maps.iter().all(|m| (m.rho - r0).abs() <= 1e-14)
    }

    pub fn disjoint(&self) -> Certificate {
        self.disjoint
    }

    pub fn hull_disjoint(&self) -> Certificate {
        self.hull_disjoint
    }

    /// `|Σ ρ_m^d − 1|`.
    pub fn dimension_residual(&self) -> f64 {
        (self.weights.iter().sum::<f64>() - 1.0).abs()
    }

    pub fn root(&self) -> Component {
        Component {
            address: Address::root(),
            measure: self.measure_scale,
            diam: self.diam,
            barycentre: self.x0,
            map: Affine::IDENTITY,
        }
    }

    /// Child `(m, j)` of a component, `j` zero-based.
    pub fn child(&self, parent: &Component, j: usize) -> Component {
        let s = &self.maps[j];
        let map = parent.map.compose(&s.affine());
        Component {
            address: parent.address.child(j),
            measure: parent.measure * self.weights[j],
            diam: parent.diam * s.rho,
            barycentre: map.apply(&self.x0),
            map,
        }
    }

    pub fn children(&self, parent: &Component) -> Vec<Component> {
        (0..self.maps.len())
            .map(|j| self.child(parent, j))
            .collect()
    }

    pub fn component(&self, address: &Address) -> Result<Component> {
        let mut c = self.root();
        for &j in address.indices() {
            if j as usize >= self.maps.len() {
                return Err(Error::Domain(alloc::format!(
                    "address {address} refers to a map that does not exist"
                )));
            }
            c = self.child(&c, j as usize);
        }
        Ok(c)
    }

    pub fn component_measure(&self, address: &Address) -> Result<f64> {
        Ok(self.component(address)?.measure)
    }

    pub fn component_diam(&self, address: &Address) -> Result<f64> {
        Ok(self.component(address)?.diam)
    }

    pub fn barycentre(&self, address: &Address) -> Result<Point2> {
        Ok(self.component(address)?.barycentre)
    }

    /// All components at exactly the given depth, in depth-first order.
    pub fn level(&self, depth: usize) -> Vec<Component> {
        let mut out = Vec::new();
        self.collect_level(&self.root(), depth, &mut out);
        out
    }

    fn collect_level(&self, c: &Component, depth: usize, out: &mut Vec<Component>) {
        if depth == 0 {
            out.push(c.clone());
            return;
        }
        for j in 0..self.maps.len() {
            self.collect_level(&self.child(c, j), depth - 1, out);
        }
    }

    /// Components of `quad_partition`: `{c}` when `h_Q ≥ diam(c)`, otherwise
    /// the descendants with `diam ≤ h_Q < parent diam`, depth-first.
    pub fn quad_partition(&self, c: &Component, h_q: f64) -> Vec<Component> {
        let mut out = Vec::new();
        self.partition_into(c, h_q, &mut out);
        out
    }

    pub(crate) fn partition_into(&self, c: &Component, h_q: f64, out: &mut Vec<Component>) {
        if le_tol(c.diam, h_q) {
            out.push(c.clone());
            return;
        }
        for j in 0..self.maps.len() {
            self.partition_into(&self.child(c, j), h_q, out);
        }
    }

    /// Lower and upper bounds for `diam(Γ)` from the barycentres at `level`.
    ///
    /// Every point of `Γ_m` lies within `diam(Γ_m) = ρ_m diam(Γ)` of the
    /// barycentre, so `diam(Γ) ≤ lower + 2 ρ_max^level diam(Γ)`. The upper
    /// bound is infinite when `2 ρ_max^level ≥ 1`.
    pub fn estimate_diameter(&self, level: usize) -> (f64, f64) {
        let pts: Vec<Point2> = self.level_barycentres(level.max(1));
        let mut lower: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                lower = lower.max(dist2(a, b));
            }
        }
        let q = 2.0 * libm::pow(self.rho_max(), level.max(1) as f64);
        let upper = if q < 1.0 {
            lower / (1.0 - q)
        } else {
            f64::INFINITY
        };
        (lower, upper)
    }

    fn level_barycentres(&self, level: usize) -> Vec<Point2> {
        let mut out = Vec::new();
        let mut stack = vec![(Affine::IDENTITY, 0usize)];
        while let Some((a, depth)) = stack.pop() {
            if depth == level {
                out.push(a.apply(&self.x0));
                continue;
            }
            for s in self.maps.iter().rev() {
                stack.push((a.compose(&s.affine()), depth + 1));
            }
        }
        out
    }

    fn auto_diameter_level(&self) -> usize {
        let m = self.maps.len() as f64;
        let mut level = 1;
        while libm::pow(m, (level + 1) as f64) <= 4096.0 {
            level += 1;
        }
        level
    }

    /// Certifies whether the first-level copies `Γ_1, …, Γ_M` (resp. their
    /// convex hulls) are pairwise disjoint.
    ///
    /// Overlap is certified when two copies share a point of the form
    /// `S_m(p_j)` (`p_j` the fixed point of `s_j`), which lies in `Γ` exactly.
    /// Separation is certified by refining pairs of components until the
    /// balls `B(x_m, diam Γ_m)` are apart, up to `depth` levels.
    pub fn check_disjoint(&self, depth: usize) -> (Certificate, Certificate) {
        let depth = depth.max(1);
        if self.copies_overlap() {
            return (Certificate::No, Certificate::No);
        }
        let kids = self.children(&self.root());
        let mut budget: usize = 400_000;
        let mut disjoint = Certificate::Yes;
        'outer: for i in 0..kids.len() {
            for j in i + 1..kids.len() {
                match self.separated(&kids[i], &kids[j], depth, &mut budget) {
                    Some(true) => {}
                    _ => {
                        disjoint = Certificate::Undetermined;
                        break 'outer;
                    }
                }
            }
        }
        let hull = self.hull_certificate(&kids);
        let hull = match (disjoint, hull) {
            (_, Certificate::Yes) => Certificate::Yes,
            (Certificate::No, _) => Certificate::No,
            (_, h) => h,
        };
        (disjoint, hull)
    }

    fn copies_overlap(&self) -> bool {
        let fixed: Vec<Point2> = self.maps.iter().map(|m| m.fixed_point()).collect();
        let tol = 1e-12 * self.diam;
        let mut per_copy: Vec<Vec<Point2>> = Vec::new();
        for s in &self.maps {
            let a = s.affine();
            let mut pts: Vec<Point2> = fixed.iter().map(|p| a.apply(p)).collect();
            for t in &self.maps {
                let b = a.compose(&t.affine());
                pts.extend(fixed.iter().map(|p| b.apply(p)));
            }
            per_copy.push(pts);
        }
        for i in 0..per_copy.len() {
            for j in i + 1..per_copy.len() {
                for p in &per_copy[i] {
                    if per_copy[j].iter().any(|q| dist2(p, q) <= tol) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn separated(
        &self,
        a: &Component,
        b: &Component,
        depth: usize,
        budget: &mut usize,
    ) -> Option<bool> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if dist2(&a.barycentre, &b.barycentre) > a.diam + b.diam {
            return Some(true);
        }
        if depth == 0 {
            return None;
        }
        let (big, small) = if a.diam >= b.diam { (a, b) } else { (b, a) };
        for j in 0..self.maps.len() {
            let c = self.child(big, j);
            self.separated(&c, small, depth - 1, budget)?;
        }
        Some(true)
    }

    fn hull_certificate(&self, kids: &[Component]) -> Certificate {
        let level = {
            let m = self.maps.len() as f64;
            let mut l = 1;
            while libm::pow(m, (l + 1) as f64) <= 2048.0 {
                l += 1;
            }
            l
        };
        let clouds: Vec<Vec<Component>> = kids
            .iter()
            .map(|k| {
                let mut v = vec![k.clone()];
                for _ in 1..level {
                    v = v.iter().flat_map(|c| self.children(c)).collect();
                }
                v
            })
            .collect();
        let mut dirs: Vec<Point2> = Vec::new();
        if self.n == 1 {
            dirs.push([1.0, 0.0]);
        } else {
            let k = 360;
            for i in 0..k {
                let t = core::f64::consts::PI * i as f64 / k as f64;
                dirs.push([libm::cos(t), libm::sin(t)]);
            }
        }
        for i in 0..clouds.len() {
            for j in i + 1..clouds.len() {
                let mut local = dirs.clone();
                let (bi, bj) = (kids[i].barycentre, kids[j].barycentre);
                let (dx, dy) = (bj[0] - bi[0], bj[1] - bi[1]);
                let r = libm::hypot(dx, dy);
                if r > 0.0 && self.n == 2 {
                    local.push([dx / r, dy / r]);
                }
                let ok = local.iter().any(|u| {
                    hull_gap(&clouds[i], &clouds[j], u) || hull_gap(&clouds[j], &clouds[i], u)
                });
                if !ok {
                    return Certificate::Undetermined;
                }
            }
        }
        Certificate::Yes
    }
}

/// True when `max_{A} u·x < min_{B} u·x` holds for the true sets, using the
/// inflated bounds `u·x_m ± diam_m` of each cloud.
fn hull_gap(a: &[Component], b: &[Component], u: &Point2) -> bool {
    let proj = |c: &Component| u[0] * c.barycentre[0] + u[1] * c.barycentre[1];
    let max_a = a
        .iter()
        .map(|c| proj(c) + c.diam)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_b = b
        .iter()
        .map(|c| proj(c) - c.diam)
        .fold(f64::INFINITY, f64::min);
    max_a < min_b
}

fn check_cantor_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(Error::InvalidGeometry(alloc::format!(
            "Cantor contraction factor {rho} not in (0, 1/2]"
        )));
    }
    Ok(())
}

/// `x_0 = [I − Σ ρ_m^{d+1} A_m]^{-1} Σ ρ_m^d v_m`.
fn root_barycentre(maps: &[SimilarityMap], d: f64) -> Point2 {
    let mut m = IDENTITY;
    let mut rhs = [0.0, 0.0];
    for s in maps {
        let w = libm::pow(s.rho, d);
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] -= w * s.rho * s.rotation[i][j];
            }
            rhs[i] += w * s.translation[i];
        }
    }
    solve2(&m, &rhs)
}

/// `x_0 − Σ ρ_m^d s_m(x_0)`, which vanishes for the true barycentre.
pub fn barycentre_defect(a: &Attractor) -> f64 {
    let x0 = a.root().barycentre;
    let mut acc = [x0[0], x0[1]];
    for (s, w) in a.maps().iter().zip(a.weights()) {
        let y = s.apply(&x0);
        acc[0] -= w * y[0];
        acc[1] -= w * y[1];
    }
    libm::hypot(acc[0], acc[1])
}
