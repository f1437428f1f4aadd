//! Small fixed-size vector helpers.
//!
//! Screen points live in `ℝⁿ` with `n ≤ 2` and are stored as `[f64; 2]`
//! (second coordinate zero when `n = 1`). Points of the propagation space
//! `ℝ^{n+1}` are stored as `[f64; 3]`; for `n = 1` the third coordinate is
//! zero and the screen sits on the first axis.

pub type Point2 = [f64; 2];
pub type Point3 = [f64; 3];

/// Row-major 2×2 matrix.
pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

#[inline]
pub fn mat_vec(a: &Mat2, x: &Point2) -> Point2 {
    [
        a[0][0] * x[0] + a[0][1] * x[1],
        a[1][0] * x[0] + a[1][1] * x[1],
    ]
}

#[inline]
pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

#[inline]
pub fn dist2(a: &Point2, b: &Point2) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

#[inline]
pub fn dist3(a: &Point3, b: &Point3) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    libm::sqrt(dx * dx + dy * dy + dz * dz)
}

#[inline]
pub fn dot3(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm3(a: &Point3) -> f64 {
    libm::sqrt(dot3(a, a))
}

/// Embeds a screen point `x ∈ ℝⁿ` as `(x, 0) ∈ ℝ^{n+1}`.
#[inline]
pub fn embed(x: &Point2) -> Point3 {
    [x[0], x[1], 0.0]
}

/// Composite similarity `x ↦ scale · rotation · x + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub scale: f64,
    pub rotation: Mat2,
    pub translation: Point2,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        scale: 1.0,
        rotation: IDENTITY,
        translation: [0.0, 0.0],
    };

    #[inline]
    pub fn apply(&self, x: &Point2) -> Point2 {
        let r = mat_vec(&self.rotation, x);
        [
            self.scale * r[0] + self.translation[0],
            self.scale * r[1] + self.translation[1],
        ]
    }

    /// `self ∘ other`.
    #[inline]
    pub fn compose(&self, other: &Affine) -> Affine {
        let t = self.apply(&other.translation);
        Affine {
            scale: self.scale * other.scale,
            rotation: mat_mul(&self.rotation, &other.rotation),
            translation: t,
        }
    }
}
