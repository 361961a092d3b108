//! Bulk (free-space) Green's tensor at imaginary frequency and its curls.
//!
//! With `ρ = ξr/c` (internally `c = 1`):
//!
//! ```text
//! G⁰(r_A, r_B, iξ) = e^{-ρ}/(4π ξ² r³) · [ a(ρ) I - b(ρ) e_r e_r ]
//! a(x) = 1 + x + x²,  b(x) = 3 + 3x + x²
//! ```
//!
//! The left curl has the closed form
//!
//! ```text
//! ∇_A × G⁰ = e^{-ρ}(1+ρ)/(4π r²) · skew(e_r)
//! ```
//!
//! (cross-checked against central finite differences of `G⁰` in the tests),
//! and the right curl is its negative since `G⁰` is even and symmetric. The
//! double curl equals `ξ² G⁰` away from the source point.

use std::f64::consts::PI;

use crate::greens::{GeometryPair, GreensBlocks};
use crate::math::{Tensor3, Vector3};

fn spatial_part(separation: Vector3, dist: f64, xi: f64) -> (f64, Tensor3) {
    let rho = xi * dist;
    let e_r = separation * (1.0 / dist);
    let a = 1.0 + rho + rho * rho;
    let b = 3.0 + 3.0 * rho + rho * rho;
    let shape = Tensor3::identity() * a - Tensor3::dyadic(e_r, e_r) * b;
    let prefactor = (-rho).exp() / (4.0 * PI * dist.powi(3));
    (prefactor, shape)
}

/// `G⁰(r_A, r_B, iξ)`; real and symmetric for `r > 0`, `ξ > 0`.
pub fn free_space_g(geom: &GeometryPair, xi: f64) -> Tensor3 {
    let (pre, shape) = spatial_part(geom.separation, geom.dist, xi);
    shape * (pre / (xi * xi))
}

/// `∇_A × G⁰(r_A, r_B, iξ)`; antisymmetric, odd under `r → -r`.
pub fn curl_free_space_g(geom: &GeometryPair, xi: f64) -> Tensor3 {
    let rho = xi * geom.dist;
    let w = (-rho).exp() * (1.0 + rho) / (4.0 * PI * geom.dist * geom.dist);
    Tensor3::skew(geom.e_r) * w
}

/// Scaled dual-index blocks of the bulk tensor; all finite as ξ → 0.
pub(super) fn scaled_blocks(geom: &GeometryPair, xi: f64) -> GreensBlocks {
    let (pre, shape) = spatial_part(geom.separation, geom.dist, xi);
    let g00 = shape * pre;
    let curl = curl_free_space_g(geom, xi);
    let mut blocks = GreensBlocks::default();
    blocks.set(0, 0, g00);
    blocks.set(1, 0, curl * (-xi));
    blocks.set(0, 1, curl * xi);
    blocks.set(1, 1, g00);
    blocks
}
