//! Hausdorff-measure boundary element method for time-harmonic acoustic
//! scattering by fractal screens.
//!
//! A sound-soft screen `Γ ⊂ ℝⁿ × {0}` (n = 1 or 2) that is the attractor of an
//! iterated function system of contracting similarities is discretised with
//! piecewise constants on its self-similar components. Every integral is taken
//! with respect to the (normalised) Hausdorff measure `H^d` and evaluated with
//! composite barycentre rules, using the self-similarity of `Γ` to handle the
//! singular diagonal entries of the single-layer Galerkin matrix.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std` feature.
//! The optional `parallel` feature distributes matrix assembly and field
//! evaluation over a rayon thread pool; results are bitwise identical either way.
//!
//! Module map:
//!
//! * [`ifs`]: similarity maps, attractors, addresses, measures, barycentres.
//! * [`mesh`]: the meshes `L_h` and quadrature partitions.
//! * [`bessel`], [`kernels`]: the Helmholtz fundamental solution and friends.
//! * [`quadrature`]: barycentre rules, singularity subtraction, reduced rules.
//! * [`linalg`], [`galerkin`]: dense assembly and direct solution.
//! * [`postprocess`]: near and far fields, prolongation, `H^{-1/2}` norms.
//! * [`wavelets`]: hierarchical Haar-type wavelets and fractional norms.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bessel;
pub mod error;
pub mod galerkin;
pub mod geometry;
pub mod ifs;
pub mod kernels;
pub mod linalg;
pub mod mesh;
pub mod postprocess;
pub mod quadrature;
pub mod sum;
pub mod wavelets;

pub use error::{Error, Result};
pub use galerkin::{GalerkinSystem, Solution};
pub use ifs::{Address, Attractor, Certificate, SimilarityMap};
pub use kernels::{KernelConfig, Wavenumber};
pub use mesh::Mesh;
pub use num_complex::Complex64;
pub use quadrature::QuadPolicy;

/// `t_d = 1/2 − (n − d)/2`, the Sobolev index linking `H^{-1/2}_Γ` to the
/// function spaces on `Γ`.
pub fn trace_index(n: usize, d: f64) -> f64 {
    0.5 - (n as f64 - d) / 2.0
}
