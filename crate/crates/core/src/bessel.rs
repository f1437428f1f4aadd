//! Zero-order Bessel functions `J0`, `Y0` and `K0` for real arguments.
//!
//! * `x < 1`: power series.
//! * `1 ≤ x ≤ 25`: Miller backward recurrence for `J_{2k}`, normalised by
//!   `J0 + 2 Σ J_{2k} = 1`, with `Y0` from the Neumann series.
//! * `x > 25`: Hankel asymptotic expansion.
//!
//! `K0` uses its power series for `x ≤ 2` and the trapezoid rule on
//! `∫_0^∞ exp(−x cosh t) dt` above, which converges exponentially in the
//! step size.

use crate::error::{Error, Result};
use core::f64::consts::{FRAC_2_PI, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 1.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_MAX {
        series_j0_y0(x).0
    } else if x <= ASYMPTOTIC_MIN {
        miller_j0_y0(x).0
    } else {
        hankel_j0_y0(x).0
    }
}

pub fn y0(x: f64) -> Result<f64> {
    Ok(j0_y0(x)?.1)
}

/// `(J0(x), Y0(x))` for `x > 0`, sharing work between the two.
pub fn j0_y0(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(alloc::format!("Y0 needs x > 0, got {x}")));
    }
    Ok(if x < SERIES_MAX {
        series_j0_y0(x)
    } else if x <= ASYMPTOTIC_MIN {
        miller_j0_y0(x)
    } else {
        hankel_j0_y0(x)
    })
}

pub fn k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain(alloc::format!("K0 needs x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(series_k0(x))
    } else {
        Ok(libm::exp(-x) * integral_k0_scaled(x))
    }
}

/// `e^x K0(x)`, which stays representable where `K0` underflows.
pub fn k0_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain(alloc::format!("K0 needs x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(libm::exp(x) * series_k0(x))
    } else {
        Ok(integral_k0_scaled(x))
    }
}

fn series_j0_y0(x: f64) -> (f64, f64) {
    let (jm1, tail) = j0_series_parts(x);
    let j = 1.0 + jm1;
    (
        j,
        FRAC_2_PI * ((libm::log(0.5 * x) + EULER_GAMMA) * j + tail),
    )
}

fn miller_j0_y0(x: f64) -> (f64, f64) {
    let start = x + 10.0 * libm::cbrt(x) + 40.0;
    let mut n = start as usize;
    n += n % 2;
    let two_over_x = 2.0 / x;
    let (mut jp1, mut j) = (0.0, 1e-300);
    let mut norm = 0.0;
    let mut neumann = 0.0;
    for k in (1..=n).rev() {
        let jm1 = k as f64 * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx > 0 && idx % 2 == 0 {
            let m = idx / 2;
            norm += 2.0 * j;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            neumann += sign * j / m as f64;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            neumann *= 1e-250;
        }
    }
    norm += j;
    let j0 = j / norm;
    let sum = neumann / norm;
    let y0 = FRAC_2_PI * (libm::log(0.5 * x) + EULER_GAMMA) * j0 - 2.0 * FRAC_2_PI * sum;
    (j0, y0)
}

fn hankel_j0_y0(x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(x);
    let (s, c) = libm::sincos(x);
    let cos_chi = (c + s) * core::f64::consts::FRAC_1_SQRT_2;
    let sin_chi = (s - c) * core::f64::consts::FRAC_1_SQRT_2;
    let amp = libm::sqrt(FRAC_2_PI / x);
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

/// Asymptotic series `P(x) ~ Σ (−1)^k a_{2k} x^{−2k}` and
/// `Q(x) ~ Σ (−1)^k a_{2k+1} x^{−2k−1}` with
/// `a_k = (−1)^k ((1)(9)⋯(2k−1)²)/(k! 8^k)`, truncated at the smallest term.
fn hankel_pq(x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let t = 2.0 * kf - 1.0;
        a *= t * t / (kf * 8.0 * x);
        if a >= prev || a < 1e-20 {
            break;
        }
        prev = a;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            // odd-order coefficients carry an extra factor −1 at ν = 0
            q -= sign * a;
        }
    }
    (p, q)
}

/// Pieces of the small-argument expansions, for callers that cancel the
/// logarithm analytically: `(J0(x) − 1, t)` with
/// `Y0(x) = (2/π)[(log(x/2) + γ) J0(x) + t]`.
pub(crate) fn j0_series_parts(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut jm1 = 0.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        jm1 += term;
        tail -= harmonic * term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    (jm1, tail)
}

/// `(I0(x) − 1, t)` with `K0(x) = −(log(x/2) + γ) I0(x) + t`.
pub(crate) fn k0_series_parts(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut im1 = 0.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        im1 += term;
        tail += harmonic * term;
        if term < 1e-18 * (1.0 + im1) {
            break;
        }
    }
    (im1, tail)
}

fn series_k0(x: f64) -> f64 {
    let (im1, tail) = k0_series_parts(x);
    -(libm::log(0.5 * x) + EULER_GAMMA) * (1.0 + im1) + tail
}

fn integral_k0_scaled(x: f64) -> f64 {
    // The integrand has width ~x^{-1/2}; the step must resolve it.
    let h = f64::min(0.05, 0.3 / libm::sqrt(x));
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        // cosh t − 1 = 2 sinh²(t/2) avoids cancellation for small t.
        let s = libm::sinh(0.5 * t);
        let v = libm::exp(-2.0 * x * s * s);
        sum += v;
        if v < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    h * sum
}

/// `2/(πx)`, the value of `J0 Y0′ − J0′ Y0`.
pub fn wronskian(x: f64) -> f64 {
    2.0 / (PI * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `J0(x) = (1/π) ∫_0^π cos(x sin t) dt` by the trapezoid rule, which is
    /// spectrally accurate for this periodic integrand.
    fn j0_oracle(x: f64) -> f64 {
        let n = (x.abs() as usize) + 64;
        let h = PI / n as f64;
        let mut s = 0.5 * (1.0 + 1.0);
        for i in 1..n {
            s += (x * (i as f64 * h).sin()).cos();
        }
        s / n as f64
    }

    /// `K0(x) = e^{−x} ∫ exp(−x u²)/√(2 + u²) du` over the real line,
    /// from the substitution `cosh t = 1 + u²`.
    fn k0_scaled_oracle(x: f64) -> f64 {
        let h = 0.02 / x.sqrt().max(0.1);
        let mut s = 1.0 / 2f64.sqrt();
        let mut i = 1;
        loop {
            let u = i as f64 * h;
            let v = (-x * u * u).exp() / (2.0 + u * u).sqrt();
            s += 2.0 * v;
            if v < 1e-20 {
                break;
            }
            i += 1;
        }
        s * h
    }

    #[test]
    fn j0_matches_trapezoid_oracle() {
        let mut x = 1e-3f64;
        while x < 1e3 {
            let (a, b) = (j0(x), j0_oracle(x));
            assert!(
                (a - b).abs() <= 1e-12 * b.abs().max(1e-3),
                "x={x}: {a} vs {b}"
            );
            x *= 1.07;
        }
        assert_eq!(j0(0.0), 1.0);
    }

    #[test]
    fn y0_reference_values() {
        assert!((y0(1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-14);
        assert!((k0(1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-14);
        assert!(y0(0.0).is_err());
        assert!(k0(-1.0).is_err());
    }

    #[test]
    fn k0_matches_integral_oracle() {
        let mut x = 1e-3f64;
        while x < 1e3 {
            let (a, b) = (k0_scaled(x).unwrap(), k0_scaled_oracle(x));
            assert!((a - b).abs() <= 1e-10 * b, "x={x}: {a} vs {b}");
            x *= 1.1;
        }
    }

    #[test]
    fn wronskian_holds() {
        let mut x = 0.1f64;
        while x <= 50.0 {
            let h = 1e-6 * x.max(1.0);
            let dj = (j0(x + h) - j0(x - h)) / (2.0 * h);
            let dy = (y0(x + h).unwrap() - y0(x - h).unwrap()) / (2.0 * h);
            let w = j0(x) * dy - dj * y0(x).unwrap();
            assert!((w - wronskian(x)).abs() <= 1e-7 * wronskian(x), "x={x}");
            x *= 1.05;
        }
    }

    #[test]
    fn branches_agree_at_switch_points() {
        let (a, b) = (series_j0_y0(SERIES_MAX), miller_j0_y0(SERIES_MAX));
        assert!((a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
        let (a, b) = (miller_j0_y0(ASYMPTOTIC_MIN), hankel_j0_y0(ASYMPTOTIC_MIN));
        assert!((a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
        let (a, b) = (series_k0(2.0), (-2.0f64).exp() * integral_k0_scaled(2.0));
        assert!((a - b).abs() < 1e-15);
    }
}
