//! Helmholtz fundamental solution in `ℝ^{n+1}`, its splitting
//! `Φ = Φ_sing + Φ_reg`, the far-field kernel and the screened (`k = i`)
//! kernel.

use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::bessel::{self, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::geometry::{dot3, norm3, Point3};

/// Below this distance the `n = 2` regular parts use their limit at `0` plus
/// the first-order term. The `n = 1` parts cancel the logarithm inside the
/// power series instead and only need the limit at `r = 0` itself.
pub const REG_SMALL_R: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wavenumber {
    Real(f64),
    /// `k = i`: kernel `K0(r)/(2π)` (n = 1) or `e^{−r}/(4πr)` (n = 2).
    Screened,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub n: usize,
    pub k: Wavenumber,
}

impl KernelConfig {
    pub fn new(n: usize, k: Wavenumber) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::Domain(alloc::format!("screen dimension {n}")));
        }
        if let Wavenumber::Real(k) = k {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::Domain(alloc::format!(
                    "wavenumber {k} must be positive"
                )));
            }
        }
        Ok(KernelConfig { n, k })
    }

    pub fn helmholtz(n: usize, k: f64) -> Result<Self> {
        Self::new(n, Wavenumber::Real(k))
    }

    pub fn screened(n: usize) -> Result<Self> {
        Self::new(n, Wavenumber::Screened)
    }

    pub fn is_screened(&self) -> bool {
        self.k == Wavenumber::Screened
    }

    /// Wavenumber used in the reduced-quadrature decay model: `k`, or `1`
    /// for the screened kernel.
    pub fn decay_k(&self) -> f64 {
        match self.k {
            Wavenumber::Real(k) => k,
            Wavenumber::Screened => 1.0,
        }
    }

    /// `Φ(r)` for `r > 0`.
    pub fn phi(&self, r: f64) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::SingularEvaluation(alloc::format!(
                "kernel evaluated at distance {r}"
            )));
        }
        Ok(match (self.n, self.k) {
            (2, Wavenumber::Real(k)) => {
                let (s, c) = libm::sincos(k * r);
                Complex64::new(c, s) / (4.0 * PI * r)
            }
            (2, Wavenumber::Screened) => Complex64::new(libm::exp(-r) / (4.0 * PI * r), 0.0),
            (_, Wavenumber::Real(k)) => {
                let (j, y) = bessel::j0_y0(k * r)?;
                Complex64::new(-0.25 * y, 0.25 * j)
            }
            (_, Wavenumber::Screened) => Complex64::new(bessel::k0(r)? / (2.0 * PI), 0.0),
        })
    }

    /// `Φ_reg(r) = Φ(r) − Φ_sing(r)`, continuous at `r = 0`.
    pub fn phi_reg(&self, r: f64) -> Result<Complex64> {
        if !(r >= 0.0) {
            return Err(Error::Domain(alloc::format!("negative distance {r}")));
        }
        if r == 0.0 || (self.n == 2 && r < REG_SMALL_R) {
            return Ok(self.phi_reg_near_zero(r));
        }
        Ok(match (self.n, self.k) {
            (2, Wavenumber::Real(k)) => {
                let kr = k * r;
                let s = libm::sin(0.5 * kr);
                Complex64::new(-2.0 * s * s, libm::sin(kr)) / (4.0 * PI * r)
            }
            (2, Wavenumber::Screened) => Complex64::new(libm::expm1(-r) / (4.0 * PI * r), 0.0),
            (_, Wavenumber::Real(k)) => {
                let kr = k * r;
                if kr < 1.0 {
                    // −Y0/4 + log r/(2π) with the log r terms cancelled exactly
                    let (jm1, tail) = bessel::j0_series_parts(kr);
                    let j = 1.0 + jm1;
                    let re = -((libm::log(0.5 * k) + EULER_GAMMA) * j + libm::log(r) * jm1 + tail)
                        / (2.0 * PI);
                    Complex64::new(re, 0.25 * j)
                } else {
                    let (j, y) = bessel::j0_y0(kr)?;
                    Complex64::new(-0.25 * y + libm::log(r) / (2.0 * PI), 0.25 * j)
                }
            }
            (_, Wavenumber::Screened) => {
                if r <= 2.0 {
                    let (im1, tail) = bessel::k0_series_parts(r);
                    let re = ((core::f64::consts::LN_2 - EULER_GAMMA) * (1.0 + im1)
                        - libm::log(r) * im1
                        + tail)
                        / (2.0 * PI);
                    Complex64::new(re, 0.0)
                } else {
                    Complex64::new((bessel::k0(r)? + libm::log(r)) / (2.0 * PI), 0.0)
                }
            }
        })
    }

    fn phi_reg_near_zero(&self, r: f64) -> Complex64 {
        match (self.n, self.k) {
            (2, Wavenumber::Real(k)) => Complex64::new(-k * k * r / (8.0 * PI), k / (4.0 * PI)),
            (2, Wavenumber::Screened) => Complex64::new((-1.0 + 0.5 * r) / (4.0 * PI), 0.0),
            (_, Wavenumber::Real(k)) => {
                Complex64::new(-(libm::log(0.5 * k) + EULER_GAMMA) / (2.0 * PI), 0.25)
            }
            (_, Wavenumber::Screened) => {
                Complex64::new((core::f64::consts::LN_2 - EULER_GAMMA) / (2.0 * PI), 0.0)
            }
        }
    }

    pub fn phi_sing(&self, r: f64) -> Result<f64> {
        phi_sing(self.n, r)
    }
}

/// `−log(r)/(2π)` for `n = 1`, `1/(4πr)` for `n = 2`.
pub fn phi_sing(n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::SingularEvaluation(alloc::format!(
            "singular kernel evaluated at distance {r}"
        )));
    }
    Ok(if n == 2 {
        1.0 / (4.0 * PI * r)
    } else {
        -libm::log(r) / (2.0 * PI)
    })
}

/// Constant factor `i k^{(n−2)/2} / (2 (2πi)^{n/2})` of the far-field kernel,
/// with the principal branch of the square root.
pub fn farfield_prefactor(n: usize, k: f64) -> Complex64 {
    if n == 2 {
        Complex64::new(1.0 / (4.0 * PI), 0.0)
    } else {
        Complex64::from_polar(1.0 / (2.0 * libm::sqrt(2.0 * PI * k)), FRAC_PI_4)
    }
}

/// `Φ^∞(x̂, y) = prefactor · exp(−i k x̂·y)`.
pub fn phi_farfield(n: usize, k: f64, xhat: &Point3, y: &Point3) -> Result<Complex64> {
    check_unit(xhat)?;
    let (s, c) = libm::sincos(-k * dot3(xhat, y));
    Ok(farfield_prefactor(n, k) * Complex64::new(c, s))
}

pub(crate) fn check_unit(v: &Point3) -> Result<()> {
    if (norm3(v) - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(alloc::format!(
            "direction {v:?} is not a unit vector"
        )));
    }
    Ok(())
}
