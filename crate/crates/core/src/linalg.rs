//! Dense complex matrices: LU with partial pivoting, Cholesky for real SPD
//! matrices, and extreme singular values by power and inverse iteration.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::pairwise;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Domain(alloc::format!(
                "{} entries for a {n}×{n} matrix",
                data.len()
            )));
        }
        Ok(Matrix { n, data })
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Aᴴ x`.
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.n];
        for (i, xi) in x.iter().enumerate() {
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj += a.conj() * xi;
            }
        }
        y
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `vᴴ A v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        let av = self.mul_vec(v);
        let terms: Vec<Complex64> = v.iter().zip(&av).map(|(a, b)| a.conj() * b).collect();
        pairwise(&terms)
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    pairwise(&terms)
}

pub fn norm2(v: &[Complex64]) -> f64 {
    let sq: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    libm::sqrt(pairwise(&sq))
}

/// `PA = LU` with unit lower `L`, stored in place.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorises `a`; fails if a pivot falls below `1e-14 ‖A‖_∞`.
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tol = 1e-14 * a.norm_inf();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmax > tol) || pmax == 0.0 {
                return Err(Error::Singular(alloc::format!(
                    "pivot {pmax:e} in column {k} below {tol:e}"
                )));
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            let (top, bottom) = lu.data.split_at_mut((k + 1) * n);
            let prow = &top[k * n + k + 1..k * n + n];
            for row in bottom.chunks_mut(n) {
                let f = row[k] / pivot;
                row[k] = f;
                if f != ZERO {
                    for (x, y) in row[k + 1..].iter_mut().zip(prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn n(&self) -> usize {
        self.lu.n
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s -= row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s -= row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        x
    }

    /// Solves `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ z = b, Lᴴ w = z, x = Pᵀ w.
        let n = self.lu.n;
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s -= self.lu[(j, i)].conj() * z[j];
            }
            z[i] = s / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in i + 1..n {
                s -= self.lu[(j, i)].conj() * z[j];
            }
            z[i] = s;
        }
        let mut x = vec![ZERO; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

/// Solves `A x = b` and certifies `‖Ax − b‖₂ ≤ 1e-10 ‖b‖₂`; returns the
/// solution and the relative residual.
pub fn solve_certified(a: &Matrix, b: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if b.len() != a.n {
        return Err(Error::Domain(alloc::format!(
            "right-hand side of length {} for a {}×{} matrix",
            b.len(),
            a.n,
            a.n
        )));
    }
    let lu = Lu::factor(a)?;
    let x = lu.solve(b);
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Singular(alloc::string::String::from(
            "non-finite solution",
        )));
    }
    let r: Vec<Complex64> = a.mul_vec(&x).iter().zip(b).map(|(u, v)| u - v).collect();
    let bn = norm2(b);
    let rel = if bn > 0.0 { norm2(&r) / bn } else { norm2(&r) };
    if !(rel <= 1e-10) {
        return Err(Error::Singular(alloc::format!(
            "relative residual {rel:e} above 1e-10"
        )));
    }
    Ok((x, rel))
}

/// Cholesky factor of a real symmetric positive definite matrix stored as
/// complex; fails on a non-positive pivot or a non-real entry.
pub fn cholesky(a: &Matrix) -> Result<Vec<f64>> {
    let n = a.n;
    if a.data.iter().any(|z| z.im != 0.0) {
        return Err(Error::Domain(alloc::string::String::from(
            "Cholesky needs a real matrix",
        )));
    }
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut s = a[(j, j)].re;
        for k in 0..j {
            s -= l[j * n + k] * l[j * n + k];
        }
        if !(s > 0.0) {
            return Err(Error::Singular(alloc::format!(
                "matrix not positive definite at column {j}"
            )));
        }
        let d = libm::sqrt(s);
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)].re;
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(l)
}

/// Largest Krylov dimension used by [`matrix_norms`].
pub const NORM_MAX_ITER: usize = 600;

/// `(‖A‖₂, ‖A⁻¹‖₂)` from the largest eigenvalues of `AᴴA` and `(AᴴA)⁻¹`
/// (the latter through the LU factors), each by Lanczos with full
/// reorthogonalisation.
pub fn matrix_norms(a: &Matrix) -> Result<(f64, f64)> {
    let lu = Lu::factor(a)?;
    let big = lanczos_max(a.n, |x| a.adjoint_mul_vec(&a.mul_vec(x)))?;
    let small = lanczos_max(a.n, |x| lu.solve(&lu.solve_adjoint(x)))?;
    Ok((libm::sqrt(big), libm::sqrt(small)))
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator.
fn lanczos_max<F>(n: usize, op: F) -> Result<f64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if n == 0 {
        return Ok(0.0);
    }
    // deterministic start vector with no special structure
    let mut q: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = i as f64 + 1.0;
            Complex64::new(1.0 + 0.5 * libm::sin(t), 0.25 * libm::cos(1.7 * t))
        })
        .collect();
    let s = norm2(&q);
    q.iter_mut().for_each(|z| *z /= s);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut theta = 0.0;
    let cap = n.min(NORM_MAX_ITER);
    for step in 0..cap {
        let mut w = op(&q);
        let a: f64 = q.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
        basis.push(q);
        alpha.push(a);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let c = dot_conj(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm2(&w);
        let t = tridiagonal_max(&alpha, &beta);
        let scale = t.abs().max(f64::MIN_POSITIVE);
        if b <= 1e-13 * scale || step + 1 == n {
            return Ok(t);
        }
        if step > 2 && (t - theta).abs() <= 1e-13 * scale {
            return Ok(t);
        }
        theta = t;
        beta.push(b);
        q = w.into_iter().map(|z| z / b).collect();
    }
    Err(Error::NoConvergence(alloc::format!(
        "Lanczos did not settle within {cap} steps"
    )))
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
    pairwise(&terms)
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, by Sturm-sequence bisection.
fn tridiagonal_max(alpha: &[f64], beta: &[f64]) -> f64 {
    let m = alpha.len();
    let off = |i: usize| {
        if i < beta.len() && i + 1 < m {
            beta[i].abs()
        } else {
            0.0
        }
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    // number of eigenvalues below x
    let count = |x: f64| -> usize {
        let mut c = 0;
        let mut d = 1.0;
        for i in 0..m {
            let b2 = if i > 0 { off(i - 1) * off(i - 1) } else { 0.0 };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                c += 1;
            }
        }
        c
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count(mid) >= m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
