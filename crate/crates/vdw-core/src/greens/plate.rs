//! Scattering Green's tensor of a perfect chiral plate and its curls.
//!
//! The plate converts p-polarized waves to s and vice versa with unit
//! coefficients; its scattering tensor is the angular-spectrum integral
//!
//! ```text
//! G¹(r_A, r_B, iξ) = 1/(8π²) ∫₀^{2π} dφ ∫₀^∞ dk (k/κ) e^{-κ z₊}
//!                    e^{-i k (x cosφ + y sinφ)}
//!                    ( e_{p+} e_{s-} r_{s→p} + e_{s+} e_{p-} r_{p→s} )
//! ```
//!
//! with `κ = √(ξ² + k²)`, `x = x_B - x_A`, `y = y_B - y_A`, `z₊ = z_A + z_B`
//! (heights above the plate), `e_{s±} = (sinφ, -cosφ, 0)` and
//! `e_{p±} = (1/ξ)(∓κ cosφ, ∓κ sinφ, -ik)`.
//!
//! A left curl acts as `i k₊ ×` with `k₊ = (k cosφ, k sinφ, iκ)`, which maps
//! `e_{s+} → (ξ/c) e_{p+}` and `e_{p+} → -(ξ/c) e_{s+}`; a right curl acts
//! analogously on the source-side vectors. All four dual-index blocks are
//! therefore the same double integral with different weights on the four
//! polarization dyads, and one quadrature pass yields them all.
//!
//! The φ integral uses the trapezoid rule with a node count that grows with
//! `k·ρ` to resolve the lateral phase; the `k` integral uses the mapped
//! Gauss–Legendre rule with scale `2/z₊ + √(2ξ/z₊)`, covering both the
//! non-retarded ridge at `k ~ 1/z₊` and the support width of `e^{-κz₊}` at
//! large ξ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{Chirality, GeometryPair, GreensBlocks, PlateFrame, PlateSpec};
use crate::math::{
    integrate_periodic, integrate_semi_infinite, CTensor3, CVector3, QuadValue, QuadratureSpec,
    Tensor3,
};

/// The four polarization dyad families integrated over (φ, k).
///
/// `ps = p̃₊⊗s`, `sp = s⊗p̃₋`, `pp = p̃₊⊗p̃₋`, `ss = s⊗s`, where
/// `p̃± = ξ·e_{p±}` keeps every entry finite for ξ → 0.
#[derive(Clone, Copy, Debug)]
struct Families {
    ps: CTensor3,
    sp: CTensor3,
    pp: CTensor3,
    ss: CTensor3,
}

impl QuadValue for Families {
    fn zero() -> Self {
        Self {
            ps: CTensor3::ZERO,
            sp: CTensor3::ZERO,
            pp: CTensor3::ZERO,
            ss: CTensor3::ZERO,
        }
    }
    fn add(self, o: Self) -> Self {
        Self {
            ps: self.ps + o.ps,
            sp: self.sp + o.sp,
            pp: self.pp + o.pp,
            ss: self.ss + o.ss,
        }
    }
    fn scale(self, s: f64) -> Self {
        Self {
            ps: self.ps * s,
            sp: self.sp * s,
            pp: self.pp * s,
            ss: self.ss * s,
        }
    }
    fn norm(&self) -> f64 {
        self.ps
            .max_abs()
            .max(self.sp.max_abs())
            .max(self.pp.max_abs())
            .max(self.ss.max_abs())
    }
    fn is_finite(&self) -> bool {
        self.ps.is_finite() && self.sp.is_finite() && self.pp.is_finite() && self.ss.is_finite()
    }
}

/// Exponent beyond which a k∥ node is dropped. Far below any tolerance
/// scale, so the implied jump in the integrand cannot stall the relative
/// convergence of the k∥ rule.
const DAMPING_CUTOFF: f64 = 300.0;

/// Exponent beyond which the whole plate contribution at this ξ is zero:
/// every k∥ node carries at least e^{-ξ z₊}.
const PLATE_CUTOFF: f64 = 140.0;

fn phi_node_count(base: usize, oscillation: f64) -> usize {
    // Trapezoid coefficients of e^{-iu cosφ} decay like Bessel functions:
    // super-exponentially once the node count exceeds u.
    let needed = oscillation + 10.0 * oscillation.cbrt() + 16.0;
    let n = (needed.ceil() as usize).max(base.max(4));
    n.div_ceil(4) * 4
}

fn phi_pass(k: f64, kappa: f64, frame: &PlateFrame, nodes: usize) -> Result<Families> {
    integrate_periodic(
        |phi| {
            let (sin_phi, cos_phi) = phi.sin_cos();
            let phase = Complex64::from_polar(1.0, -k * (frame.x * cos_phi + frame.y * sin_phi));
            let zero = Complex64::new(0.0, 0.0);
            let minus_ik = Complex64::new(0.0, -k);
            let s = CVector3::new(sin_phi.into(), (-cos_phi).into(), zero);
            let p_plus = CVector3::new(
                (-kappa * cos_phi).into(),
                (-kappa * sin_phi).into(),
                minus_ik,
            );
            let p_minus = CVector3::new(
                (kappa * cos_phi).into(),
                (kappa * sin_phi).into(),
                minus_ik,
            );
            Families {
                ps: CTensor3::dyadic(p_plus, s).scale(phase),
                sp: CTensor3::dyadic(s, p_minus).scale(phase),
                pp: CTensor3::dyadic(p_plus, p_minus).scale(phase),
                ss: CTensor3::dyadic(s, s).scale(phase),
            }
        },
        nodes,
    )
}

fn integrate_families(xi: f64, frame: &PlateFrame, spec: &QuadratureSpec) -> Result<Families> {
    spec.validate()?;
    // The integrand decays as e^{-κz₊}; its k∥ support ends near
    // √(2ξ/z₊ + 1/z₊²), which covers both the non-retarded ridge (~1/z₊)
    // and the retarded regime.
    let zp = frame.z_plus;
    let rule = spec.kpar_rule(2.0 / zp + (2.0 * xi / zp).sqrt());
    let estimate = integrate_semi_infinite(
        |k| {
            let kappa = (xi * xi + k * k).sqrt();
            if kappa * frame.z_plus > DAMPING_CUTOFF {
                return Ok(Families::zero());
            }
            let damping = (k / kappa) * (-kappa * frame.z_plus).exp();
            let nodes = phi_node_count(spec.phi_nodes, k * frame.rho);
            Ok(phi_pass(k, kappa, frame, nodes)?.scale(damping))
        },
        &rule,
    )?;
    Ok(estimate.value)
}

/// Extracts the real part, failing if the imaginary residue is out of scale.
fn realize(blocks: [CTensor3; 4], rel_tol: f64) -> Result<[Tensor3; 4]> {
    let scale = blocks
        .iter()
        .map(|b| b.max_abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let residue = blocks
        .iter()
        .map(|b| b.im_max_abs())
        .fold(0.0f64, f64::max);
    let limit = 1e3 * rel_tol * scale;
    if residue > limit {
        return Err(Error::ImaginaryResidue { residue, limit });
    }
    Ok([blocks[0].re(), blocks[1].re(), blocks[2].re(), blocks[3].re()])
}

/// Scaled dual-index blocks of one plate's scattering tensor in the lab frame.
pub(super) fn scaled_blocks(
    frame: &PlateFrame,
    chirality: Chirality,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<GreensBlocks> {
    if xi * frame.z_plus > PLATE_CUTOFF {
        return Ok(GreensBlocks::default());
    }
    let fam = integrate_families(xi, frame, spec)?;
    let (r_sp, r_ps) = chirality.reflection_coefficients();
    let norm = 1.0 / (8.0 * PI * PI);
    let xi2 = xi * xi;
    // g00 = ξ²G¹, g10 = -ξ∇×G¹, g01 = -ξG¹×∇', g11 = ∇×G¹×∇'.
    let g00 = (fam.ps * r_sp + fam.sp * r_ps) * (norm * xi);
    let g10 = (fam.pp * r_ps + fam.ss * (-xi2 * r_sp)) * -norm;
    let g01 = (fam.pp * r_sp + fam.ss * (-xi2 * r_ps)) * -norm;
    let g11 = (fam.ps * r_ps + fam.sp * r_sp) * (-norm * xi);
    let [g00, g10, g01, g11] = realize([g00, g10, g01, g11], spec.rel_tol)?;
    let mut blocks = GreensBlocks::default();
    blocks.set(0, 0, frame.to_lab(g00));
    blocks.set(1, 0, frame.to_lab(g10));
    blocks.set(0, 1, frame.to_lab(g01));
    blocks.set(1, 1, frame.to_lab(g11));
    Ok(blocks)
}

/// Full scattering tensor `G¹(r_A, r_B, iξ)` of one plate by double
/// quadrature over φ and k∥.
pub fn plate_scattering_g(
    geom: &GeometryPair,
    plate: &PlateSpec,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Tensor3> {
    let frame = geom.plate_frame(plate)?;
    let blocks = scaled_blocks(&frame, plate.chirality, xi, spec)?;
    Ok(blocks.get(0, 0) * (1.0 / (xi * xi)))
}

/// Left curl `∇_A × G¹(r_A, r_B, iξ)` by double quadrature.
pub fn curl_plate_g(
    geom: &GeometryPair,
    plate: &PlateSpec,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Tensor3> {
    let frame = geom.plate_frame(plate)?;
    let blocks = scaled_blocks(&frame, plate.chirality, xi, spec)?;
    Ok(blocks.get(1, 0) * (-1.0 / xi))
}

/// The (x²+y²)⁻²-structured coefficient `(3 z₊ r₊² - 2 r₊³ - z₊³)/ρ⁴`,
/// evaluated by series for small ρ/z₊ where the direct form cancels
/// catastrophically.
fn lateral_coefficient(rho_sq: f64, z_plus: f64, r_plus: f64) -> f64 {
    let u = rho_sq / (z_plus * z_plus);
    if u < 1e-2 {
        // (2 + 3u - 2(1+u)^{3/2})/u² = -3/4 + u/8 - 3u²/64 + 3u³/128 - ...
        (-0.75 + u * (0.125 + u * (-3.0 / 64.0 + u * (3.0 / 128.0)))) / z_plus
    } else {
        (3.0 * z_plus * r_plus * r_plus - 2.0 * r_plus.powi(3) - z_plus.powi(3))
            / (rho_sq * rho_sq)
    }
}

/// Non-retarded closed form of the scattering tensor.
///
/// On the plate axis (x = y = 0) the (x²+y²)⁻² entries have a finite but
/// direction-dependent limit whose azimuthal average vanishes; the average
/// is what the full angular-spectrum quadrature produces at ρ = 0, so it is
/// the value returned here.
pub fn plate_scattering_g_nr(geom: &GeometryPair, plate: &PlateSpec, xi: f64) -> Result<Tensor3> {
    let frame = geom.plate_frame(plate)?;
    let (x, y, zp) = (frame.x, frame.y, frame.z_plus);
    let rho_sq = frame.rho * frame.rho;
    let q = if rho_sq == 0.0 {
        0.0
    } else {
        lateral_coefficient(rho_sq, zp, frame.r_plus)
    };
    let m = Tensor3([
        [2.0 * x * y * q, -(x * x - y * y) * q, -y],
        [-(x * x - y * y) * q, -2.0 * x * y * q, x],
        [y, -x, 0.0],
    ]);
    let pre = plate.chirality.sign() / (4.0 * PI * xi * frame.r_plus.powi(3));
    Ok(frame.to_lab(m * pre))
}

/// Non-retarded closed form of the curl of the scattering tensor.
///
/// The non-retarded limit does not commute with the curl, so this is not the
/// curl of [`plate_scattering_g_nr`]; it is the limit of the curled full
/// tensor.
pub fn curl_plate_g_nr(geom: &GeometryPair, plate: &PlateSpec, xi: f64) -> Result<Tensor3> {
    let frame = geom.plate_frame(plate)?;
    let (x, y, zp) = (frame.x, frame.y, frame.z_plus);
    let (x2, y2, z2) = (x * x, y * y, zp * zp);
    let c = Tensor3([
        [2.0 * x2 - y2 - z2, 3.0 * x * y, 3.0 * x * zp],
        [3.0 * x * y, -x2 + 2.0 * y2 - z2, 3.0 * y * zp],
        [-3.0 * x * zp, -3.0 * y * zp, x2 + y2 - 2.0 * z2],
    ]);
    let pre = plate.chirality.sign() / (4.0 * PI * xi * frame.r_plus.powi(5));
    Ok(frame.to_lab(c * pre))
}
