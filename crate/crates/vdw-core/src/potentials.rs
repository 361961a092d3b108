//! Ground-state interaction energies between two molecules.
//!
//! Everything descends from the dual-indexed family (internal units
//! `ħ = c = ε₀ = 1`)
//!
//! ```text
//! U_{λ1λ2λ3λ4} = -(1/2π) ∫₀^∞ dξ
//!     Tr[ α_A^{λ1λ2}(iξ) · G^{λ2λ3}(r_A,r_B,iξ)
//!       · α_B^{λ3λ4}(iξ) · G^{λ4λ1}(r_B,r_A,iξ) ]
//! ```
//!
//! whose 16 quadruples group into six interaction classes by the character
//! (electric, magnetic or chiral) of the two polarizability index pairs.
//! The named potentials are fixed sums of quadruples; the purely electric
//! and chiral-electric ones are also implemented directly from their closed
//! trace forms, and the two routes are cross-checked in the tests.
//!
//! The ξ integrand evaluates the Green's-tensor blocks once per node and
//! reuses them for every requested trace, since the plate's double
//! quadrature dominates the cost.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens::{self, BlockPair, Environment, GeometryPair, PlateSpec};
use crate::math::{
    integrate_semi_infinite, AxisRule, Estimate, QuadValue, QuadratureSpec, Tensor3,
};
use crate::polarizability::PolarizabilityModel;

/// Interaction classes by the dipole character of the two molecules' index
/// pairs: electric (00), magnetic (11) or chiral (01/10).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interaction {
    /// Both electric: the ordinary attractive dispersion term.
    Ee,
    /// One chiral, one electric pair; discriminatory, surface-assisted.
    Ce,
    /// Both chiral.
    Cc,
    /// One electric, one magnetic pair.
    Em,
    /// One chiral, one magnetic pair.
    Cm,
    /// Both magnetic.
    Mm,
}

impl Interaction {
    pub const ALL: [Interaction; 6] = [
        Interaction::Ee,
        Interaction::Ce,
        Interaction::Cc,
        Interaction::Em,
        Interaction::Cm,
        Interaction::Mm,
    ];

    pub fn index(self) -> usize {
        match self {
            Interaction::Ee => 0,
            Interaction::Ce => 1,
            Interaction::Cc => 2,
            Interaction::Em => 3,
            Interaction::Cm => 4,
            Interaction::Mm => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Interaction::Ee => "EE",
            Interaction::Ce => "CE",
            Interaction::Cc => "CC",
            Interaction::Em => "EM",
            Interaction::Cm => "CM",
            Interaction::Mm => "MM",
        }
    }

    /// Class of one index quadruple.
    pub fn of_quadruple(q: [usize; 4]) -> Interaction {
        #[derive(PartialEq)]
        enum Pair {
            E,
            M,
            C,
        }
        let pair = |a: usize, b: usize| match (a, b) {
            (0, 0) => Pair::E,
            (1, 1) => Pair::M,
            _ => Pair::C,
        };
        match (pair(q[0], q[1]), pair(q[2], q[3])) {
            (Pair::E, Pair::E) => Interaction::Ee,
            (Pair::C, Pair::E) | (Pair::E, Pair::C) => Interaction::Ce,
            (Pair::C, Pair::C) => Interaction::Cc,
            (Pair::E, Pair::M) | (Pair::M, Pair::E) => Interaction::Em,
            (Pair::C, Pair::M) | (Pair::M, Pair::C) => Interaction::Cm,
            (Pair::M, Pair::M) => Interaction::Mm,
        }
    }
}

/// All 16 index quadruples `(λ1, λ2, λ3, λ4)`.
fn quadruples() -> impl Iterator<Item = [usize; 4]> {
    (0..16usize).map(|i| [(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1])
}

/// Interaction energy split into the six classes, with per-term quadrature
/// error estimates. `total = components.sum()`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PotentialBreakdown {
    pub components: [f64; 6],
    pub rel_errors: [f64; 6],
}

impl PotentialBreakdown {
    pub fn get(&self, kind: Interaction) -> f64 {
        self.components[kind.index()]
    }

    pub fn total(&self) -> f64 {
        self.components.iter().sum()
    }

    pub fn max_rel_error(&self) -> f64 {
        self.rel_errors.iter().fold(0.0f64, |m, &e| m.max(e))
    }

    pub fn u_ee(&self) -> f64 {
        self.get(Interaction::Ee)
    }
    pub fn u_ce(&self) -> f64 {
        self.get(Interaction::Ce)
    }
    pub fn u_cc(&self) -> f64 {
        self.get(Interaction::Cc)
    }
    pub fn u_em(&self) -> f64 {
        self.get(Interaction::Em)
    }
    pub fn u_cm(&self) -> f64 {
        self.get(Interaction::Cm)
    }
    pub fn u_mm(&self) -> f64 {
        self.get(Interaction::Mm)
    }
}

fn trace4(a: Tensor3, g1: Tensor3, b: Tensor3, g2: Tensor3) -> f64 {
    (a * g1 * b * g2).trace()
}

/// Mapping scale for the ξ integral: the dominant transition frequency,
/// capped by the retardation cutoff `c/r` at large separation.
fn xi_scale(a: &PolarizabilityModel, b: &PolarizabilityModel, geom: &GeometryPair) -> f64 {
    let omega = a.dominant_omega().min(b.dominant_omega());
    omega.min(1.0 / geom.dist)
}

fn xi_rule(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    spec: &QuadratureSpec,
) -> AxisRule {
    spec.xi_rule(xi_scale(a, b, geom))
}

/// Purely electric interaction
/// `U^EE = -(ħμ₀²/2π) ∫ dξ ξ⁴ Tr{α_A·G(r_A,r_B)·α_B·G(r_B,r_A)}`.
///
/// Negative (attractive) in free space for isotropic electric models.
pub fn potential_ee(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    integrate_semi_infinite(
        |xi| {
            let bp = greens::scaled_blocks(geom, env, xi, spec)?;
            let aa = a.general_polarizability(0, 0, xi);
            let ab = b.general_polarizability(0, 0, xi);
            Ok(-trace4(aa, bp.ab.get(0, 0), ab, bp.ba.get(0, 0)) / (2.0 * PI))
        },
        &xi_rule(a, b, geom, spec),
    )
}

/// Chiral-electric interaction (molecule A chiral, molecule B electric)
/// `U^CE = +(ħμ₀²/π) ∫ dξ ξ³ Tr{χ_A·∇_A×G(r_A,r_B)·α_B·G(r_B,r_A)}`.
///
/// Zero in free space for isotropic models; near a chiral plate it is odd
/// under both an enantiomer flip of A and a chirality flip of the plate.
pub fn potential_ce(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    integrate_semi_infinite(
        |xi| {
            let bp = greens::scaled_blocks(geom, env, xi, spec)?;
            let chi_a = a.chi_tensor(xi);
            let alpha_b = b.general_polarizability(0, 0, xi);
            // ξ³ · (∇×G) · G = -(ξ-scaled blocks): ξ³·(-g10/ξ)·(g00/ξ²).
            Ok(-trace4(chi_a, bp.ab.get(1, 0), alpha_b, bp.ba.get(0, 0)) / PI)
        },
        &xi_rule(a, b, geom, spec),
    )
}

/// Chiral-chiral interaction, the two-trace-term integral
///
/// ```text
/// U^CC = -(ħμ₀²/π) ∫ dξ ξ² Tr{ χ_A·[∇_A×G×∇'_B]·χ^{me}_B·G(r_B,r_A)
///                            + χ_A·[∇_A×G]·χ_B·[∇_B×G(r_B,r_A)] }
/// ```
///
/// with `χ^{me} = -χᵀ`. Odd under a single enantiomer flip, even under a
/// double flip.
pub fn potential_cc(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    integrate_semi_infinite(
        |xi| {
            let bp = greens::scaled_blocks(geom, env, xi, spec)?;
            let chi_a = a.chi_tensor(xi);
            let chi_b = b.chi_tensor(xi);
            let chi_me_b = chi_b.transpose() * -1.0;
            let term1 = trace4(chi_a, bp.ab.get(1, 1), chi_me_b, bp.ba.get(0, 0));
            let term2 = trace4(chi_a, bp.ab.get(1, 0), chi_b, bp.ba.get(1, 0));
            Ok(-(term1 + term2) / PI)
        },
        &xi_rule(a, b, geom, spec),
    )
}

/// Retardation kernel of the isotropic free-space chiral-chiral potential.
pub fn retarded_cc_kernel(x: f64) -> f64 {
    (-2.0 * x).exp() * (3.0 + 6.0 * x + 4.0 * x * x)
}

/// Free-space isotropic chiral-chiral potential in closed ξ-integral form,
/// `U^CC(r) = ħ/(8π³ε₀²r⁶) ∫ dξ (χ_A/c)(χ_B/c) l(ξr/c)` with
/// `l(x) = e^{-2x}(3 + 6x + 4x²)`.
pub fn potential_cc_free_iso(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    dist: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    if !(dist > 0.0) {
        return Err(Error::CoincidentPositions);
    }
    let scale = a.dominant_omega().min(b.dominant_omega()).min(1.0 / dist);
    let rule = spec.xi_rule(scale);
    let pre = 1.0 / (8.0 * PI.powi(3) * dist.powi(6));
    integrate_semi_infinite(
        |xi| Ok(pre * a.chi_iso(xi) * b.chi_iso(xi) * retarded_cc_kernel(xi * dist)),
        &rule,
    )
}

/// One term of the dual-indexed family `U_{λ1λ2λ3λ4}`.
pub fn potential_general(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    quadruple: [usize; 4],
    geom: &GeometryPair,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    let [l1, l2, l3, l4] = quadruple;
    assert!(quadruple.iter().all(|&l| l <= 1), "dual indices are 0 or 1");
    integrate_semi_infinite(
        |xi| {
            let bp = greens::scaled_blocks(geom, env, xi, spec)?;
            Ok(general_trace(a, b, [l1, l2, l3, l4], &bp, xi))
        },
        &xi_rule(a, b, geom, spec),
    )
}

fn general_trace(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    [l1, l2, l3, l4]: [usize; 4],
    bp: &BlockPair,
    xi: f64,
) -> f64 {
    let alpha_a = a.general_polarizability(l1, l2, xi);
    let alpha_b = b.general_polarizability(l3, l4, xi);
    -trace4(alpha_a, bp.ab.get(l2, l3), alpha_b, bp.ba.get(l4, l1)) / (2.0 * PI)
}

/// Sum of the quadruples belonging to one interaction class.
pub fn potential_component(
    kind: Interaction,
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    integrate_semi_infinite(
        |xi| {
            let bp = greens::scaled_blocks(geom, env, xi, spec)?;
            Ok(quadruples()
                .filter(|&q| Interaction::of_quadruple(q) == kind)
                .map(|q| general_trace(a, b, q, &bp, xi))
                .sum())
        },
        &xi_rule(a, b, geom, spec),
    )
}

#[derive(Clone, Copy, Debug)]
struct Comp6([f64; 6]);

impl QuadValue for Comp6 {
    fn zero() -> Self {
        Comp6([0.0; 6])
    }
    fn add(self, o: Self) -> Self {
        let mut out = self.0;
        for i in 0..6 {
            out[i] += o.0[i];
        }
        Comp6(out)
    }
    fn scale(self, s: f64) -> Self {
        let mut out = self.0;
        for v in &mut out {
            *v *= s;
        }
        Comp6(out)
    }
    fn norm(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// All six interaction classes in one Green's-tensor sweep.
///
/// Refinement stops when every component has stabilised relative to itself;
/// components below `10⁻⁸` of the dominant one count as converged at the
/// breakdown scale. Reported per-term errors are each component's own last
/// relative change.
pub fn breakdown(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<PotentialBreakdown> {
    let rule = xi_rule(a, b, geom, spec);
    let integrand = |xi: f64| -> Result<Comp6> {
        let bp = greens::scaled_blocks(geom, env, xi, spec)?;
        let mut out = [0.0; 6];
        for q in quadruples() {
            out[Interaction::of_quadruple(q).index()] += general_trace(a, b, q, &bp, xi);
        }
        Ok(Comp6(out))
    };

    let mut nodes = rule.nodes.max(2);
    let mut prev: Option<Comp6> = None;
    let mut errors = [f64::INFINITY; 6];
    for _ in 0..=rule.max_refinements {
        let cur = crate::math::single_pass_semi_infinite(integrand, nodes, rule.scale)?;
        if let Some(p) = prev {
            let scale_floor = 1e-8 * cur.norm();
            let mut done = true;
            for i in 0..6 {
                let delta = (cur.0[i] - p.0[i]).abs();
                errors[i] = delta / cur.0[i].abs().max(f64::MIN_POSITIVE);
                if delta > rule.rel_tol * cur.0[i].abs().max(scale_floor) {
                    done = false;
                }
            }
            if done {
                return Ok(PotentialBreakdown {
                    components: cur.0,
                    rel_errors: errors,
                });
            }
        }
        prev = Some(cur);
        nodes *= 2;
    }
    Err(Error::QuadratureNonConvergent {
        last_norm: prev.map(|v| v.norm()).unwrap_or(f64::NAN),
        rel_change: errors.iter().fold(0.0f64, |m, &e| m.max(e)),
        tol: rule.rel_tol,
        refinements: rule.max_refinements,
    })
}

/// Non-retarded single-plate chiral-electric potential in closed form:
///
/// ```text
/// U^CE_nr = ± ħ/(16π³ε₀²) · [∫ dξ (χ_A/c) α_B]
///           · ( r²[2r₊² - 3(x²+y²)] - 3r₊²(x²+y²) ) / (r⁵ r₊⁵)
/// ```
///
/// with the positive sign for a positive-chirality plate. Valid when all
/// lengths are far below the transition wavelength; the caller owns that
/// judgement.
pub fn potential_ce_nr_plate(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    geom: &GeometryPair,
    plate: &PlateSpec,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    let strength = nr_ce_strength(a, b, spec)?;
    let frame = geom.plate_frame(plate)?;
    let f = nr_ce_geometric_factor(&frame, geom.dist);
    Ok(Estimate {
        value: plate.chirality.sign() * strength.value * f,
        rel_error: strength.rel_error,
    })
}

/// The geometric factor of the non-retarded chiral-electric potential.
pub fn nr_ce_geometric_factor(frame: &crate::greens::PlateFrame, dist: f64) -> f64 {
    let r2 = dist * dist;
    let rp2 = frame.r_plus * frame.r_plus;
    let rho2 = frame.rho * frame.rho;
    (r2 * (2.0 * rp2 - 3.0 * rho2) - 3.0 * rp2 * rho2)
        / (dist.powi(5) * frame.r_plus.powi(5))
}

/// `(1/16π³) ∫ dξ χ_A(iξ) α_B(iξ)`, the molecular strength multiplying the
/// geometric factor of the non-retarded chiral-electric potential.
pub fn nr_ce_strength(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    let rule = spec.xi_rule(a.dominant_omega().min(b.dominant_omega()));
    let mut est = integrate_semi_infinite(|xi| Ok(a.chi_iso(xi) * b.alpha_iso(xi)), &rule)?;
    est.value /= 16.0 * PI.powi(3);
    Ok(est)
}

/// The London coefficient: `U^EE_nr = -C₆/r⁶` with
/// `C₆ = (3/16π³) ∫ dξ α_A α_B`.
pub fn london_c6(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    let rule = spec.xi_rule(a.dominant_omega().min(b.dominant_omega()));
    let mut est = integrate_semi_infinite(|xi| Ok(a.alpha_iso(xi) * b.alpha_iso(xi)), &rule)?;
    est.value *= 3.0 / (16.0 * PI.powi(3));
    Ok(est)
}

/// Coefficient of the non-retarded free-space chiral-chiral potential:
/// `U^CC_nr = C/r⁶` with `C = (3/8π³) ∫ dξ χ_A χ_B`.
pub fn nr_cc_coefficient(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    let rule = spec.xi_rule(a.dominant_omega().min(b.dominant_omega()));
    let mut est = integrate_semi_infinite(|xi| Ok(a.chi_iso(xi) * b.chi_iso(xi)), &rule)?;
    est.value *= 3.0 / (8.0 * PI.powi(3));
    Ok(est)
}
