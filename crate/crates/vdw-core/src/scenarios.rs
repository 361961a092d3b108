//! Forces from potential gradients, the attractiveness-ratio field over
//! molecule-B positions, and the two-plate cavity discrimination experiment.
//!
//! The force on molecule B is `F = -∇_r U(r_A, r_A + r)`, evaluated by
//! second-order central differences; near a plate its direction differs from
//! `e_r` because the surface breaks the central symmetry.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::{Environment, GeometryPair, PlateNormal};
use crate::math::{gradient_central, QuadratureSpec, Vector3};
use crate::polarizability::PolarizabilityModel;
use crate::potentials::{
    self, breakdown, nr_ce_geometric_factor, Interaction, PotentialBreakdown,
};

/// Central-difference step: `1e-4` of the separation by default, clamped so
/// the stencil never crosses a plate or the companion molecule.
fn fd_step(step: Option<f64>, r_b: Vector3, env: &Environment, dist: f64) -> Result<f64> {
    let mut h = step.unwrap_or(1e-4 * dist);
    h = h.min(0.45 * dist);
    for plate in env.plates() {
        h = h.min(0.5 * plate.height(r_b.z));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep { h });
    }
    Ok(h)
}

/// Forces on molecule B per interaction class, from central differences of
/// the full breakdown (one Green's-tensor sweep per stencil point).
pub fn force_breakdown(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    r_a: Vector3,
    r_b: Vector3,
    env: &Environment,
    spec: &QuadratureSpec,
    step: Option<f64>,
) -> Result<[Vector3; 6]> {
    let geom = GeometryPair::new(r_a, r_b)?;
    geom.validate_in(env)?;
    let h = fd_step(step, r_b, env, geom.dist)?;
    let axes = [
        Vector3::new(h, 0.0, 0.0),
        Vector3::new(0.0, h, 0.0),
        Vector3::new(0.0, 0.0, h),
    ];
    let mut components = [[0.0f64; 3]; 6];
    for (axis, offset) in axes.iter().enumerate() {
        let plus = breakdown(a, b, &GeometryPair::new(r_a, r_b + *offset)?, env, spec)?;
        let minus = breakdown(a, b, &GeometryPair::new(r_a, r_b - *offset)?, env, spec)?;
        for kind in Interaction::ALL {
            let i = kind.index();
            components[i][axis] = -(plus.components[i] - minus.components[i]) / (2.0 * h);
        }
    }
    Ok(components.map(Vector3::from))
}

/// Force on molecule B for one interaction class.
pub fn force(
    kind: Interaction,
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    r_a: Vector3,
    r_b: Vector3,
    env: &Environment,
    spec: &QuadratureSpec,
    step: Option<f64>,
) -> Result<Vector3> {
    Ok(force_breakdown(a, b, r_a, r_b, env, spec, step)?[kind.index()])
}

/// Whether a scan evaluates the fast non-retarded closed forms or the full
/// frequency-and-angular-spectrum quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    NonRetarded,
    FullQuadrature,
}

/// Grid of molecule-B separations in the x = 0 plane, with fixed molecule A.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub model_a: PolarizabilityModel,
    pub model_b: PolarizabilityModel,
    pub r_a: Vector3,
    pub env: Environment,
    pub spec: QuadratureSpec,
    /// Separation y-components of the grid.
    pub y_values: Vec<f64>,
    /// Separation z-components of the grid.
    pub z_values: Vec<f64>,
    pub mode: ScanMode,
    pub fd_step_rel: f64,
}

/// One scanned molecule-B position.
#[derive(Clone, Debug)]
pub struct ScanPoint {
    pub separation: Vector3,
    pub r_b: Vector3,
    pub u_ee: f64,
    pub u_ce: f64,
    pub u_cc: f64,
    pub f_ee: Vector3,
    pub f_ce: Vector3,
    pub er_dot_f_ee: f64,
    pub er_dot_f_ce: f64,
    pub ratio_ce_ee: f64,
    pub err_estimate: f64,
    /// Per-point failure; the scan continues past failed points.
    pub error: Option<String>,
}

impl ScanPoint {
    fn failed(separation: Vector3, r_b: Vector3, message: String) -> Self {
        Self {
            separation,
            r_b,
            u_ee: f64::NAN,
            u_ce: f64::NAN,
            u_cc: f64::NAN,
            f_ee: Vector3::new(f64::NAN, f64::NAN, f64::NAN),
            f_ce: Vector3::new(f64::NAN, f64::NAN, f64::NAN),
            er_dot_f_ee: f64::NAN,
            er_dot_f_ce: f64::NAN,
            ratio_ce_ee: f64::NAN,
            err_estimate: f64::NAN,
            error: Some(message),
        }
    }
}

/// Scan output in grid order: `points[iz * ny + iy]`.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub ny: usize,
    pub nz: usize,
    pub points: Vec<ScanPoint>,
}

/// Closed-form non-retarded potentials of a configuration, from
/// pre-integrated molecular strengths.
#[derive(Clone, Copy, Debug)]
struct NrCoefficients {
    c6: f64,
    ce_strength: f64,
    cc_coefficient: f64,
    rel_error: f64,
}

impl NrCoefficients {
    fn build(
        a: &PolarizabilityModel,
        b: &PolarizabilityModel,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        let c6 = potentials::london_c6(a, b, spec)?;
        let ce = potentials::nr_ce_strength(a, b, spec)?;
        let cc = potentials::nr_cc_coefficient(a, b, spec)?;
        Ok(Self {
            c6: c6.value,
            ce_strength: ce.value,
            cc_coefficient: cc.value,
            rel_error: c6.rel_error.max(ce.rel_error).max(cc.rel_error),
        })
    }

    fn potentials(&self, r_a: Vector3, r_b: Vector3, env: &Environment) -> Result<(f64, f64, f64)> {
        let geom = GeometryPair::new(r_a, r_b)?;
        geom.validate_in(env)?;
        let r6 = geom.dist.powi(6);
        let mut u_ce = 0.0;
        for plate in env.plates() {
            let frame = geom.plate_frame(plate)?;
            u_ce += plate.chirality.sign()
                * self.ce_strength
                * nr_ce_geometric_factor(&frame, geom.dist);
        }
        Ok((-self.c6 / r6, u_ce, self.cc_coefficient / r6))
    }
}

/// Evaluates the attractiveness-ratio field `e_r·F^CE / e_r·F^EE` over the
/// configured grid.
pub fn ratio_field(cfg: &ScanConfig) -> Result<ScanResult> {
    if cfg.y_values.is_empty() || cfg.z_values.is_empty() {
        return Err(Error::InvalidScan {
            reason: "scan grid is empty".into(),
        });
    }
    if !(cfg.fd_step_rel > 0.0) {
        return Err(Error::InvalidScan {
            reason: "finite-difference step factor must be positive".into(),
        });
    }
    cfg.env.validate()?;
    for plate in cfg.env.plates() {
        if !(plate.height(cfg.r_a.z) > 0.0) {
            return Err(Error::MoleculeBehindPlate {
                z: cfg.r_a.z,
                z0: plate.z0,
            });
        }
    }
    let nr = match cfg.mode {
        ScanMode::NonRetarded => Some(NrCoefficients::build(&cfg.model_a, &cfg.model_b, &cfg.spec)?),
        ScanMode::FullQuadrature => None,
    };
    let grid: Vec<Vector3> = cfg
        .z_values
        .iter()
        .flat_map(|&z| cfg.y_values.iter().map(move |&y| Vector3::new(0.0, y, z)))
        .collect();
    let points: Vec<ScanPoint> = grid
        .par_iter()
        .map(|&sep| scan_point(cfg, nr.as_ref(), sep))
        .collect();
    Ok(ScanResult {
        ny: cfg.y_values.len(),
        nz: cfg.z_values.len(),
        points,
    })
}

fn scan_point(cfg: &ScanConfig, nr: Option<&NrCoefficients>, sep: Vector3) -> ScanPoint {
    let r_b = cfg.r_a + sep;
    match try_scan_point(cfg, nr, sep, r_b) {
        Ok(p) => p,
        Err(e) => ScanPoint::failed(sep, r_b, e.to_string()),
    }
}

fn try_scan_point(
    cfg: &ScanConfig,
    nr: Option<&NrCoefficients>,
    sep: Vector3,
    r_b: Vector3,
) -> Result<ScanPoint> {
    let geom = GeometryPair::new(cfg.r_a, r_b)?;
    geom.validate_in(&cfg.env)?;
    let h = fd_step(Some(cfg.fd_step_rel * geom.dist), r_b, &cfg.env, geom.dist)?;
    let (u_ee, u_ce, u_cc, f_ee, f_ce, err) = match nr {
        Some(coeffs) => {
            let (u_ee, u_ce, u_cc) = coeffs.potentials(cfg.r_a, r_b, &cfg.env)?;
            let f_ee = gradient_central(
                |rb| coeffs.potentials(cfg.r_a, rb, &cfg.env).map(|u| u.0),
                r_b,
                h,
            )?;
            let f_ce = gradient_central(
                |rb| coeffs.potentials(cfg.r_a, rb, &cfg.env).map(|u| u.1),
                r_b,
                h,
            )?;
            (u_ee, u_ce, u_cc, -f_ee, -f_ce, coeffs.rel_error)
        }
        None => {
            let u = breakdown(&cfg.model_a, &cfg.model_b, &geom, &cfg.env, &cfg.spec)?;
            let forces = force_breakdown(
                &cfg.model_a,
                &cfg.model_b,
                cfg.r_a,
                r_b,
                &cfg.env,
                &cfg.spec,
                Some(h),
            )?;
            (
                u.get(Interaction::Ee),
                u.get(Interaction::Ce),
                u.get(Interaction::Cc),
                forces[Interaction::Ee.index()],
                forces[Interaction::Ce.index()],
                u.max_rel_error(),
            )
        }
    };
    let er_dot_f_ee = geom.e_r.dot(f_ee);
    let er_dot_f_ce = geom.e_r.dot(f_ce);
    Ok(ScanPoint {
        separation: sep,
        r_b,
        u_ee,
        u_ce,
        u_cc,
        f_ee,
        f_ce,
        er_dot_f_ee,
        er_dot_f_ce,
        ratio_ce_ee: er_dot_f_ce / er_dot_f_ee,
        err_estimate: err,
        error: None,
    })
}

/// The ratio `e_r·F^CE / e_r·F^EE` at a single separation, non-retarded
/// closed forms.
pub fn nr_ratio_at(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    env: &Environment,
    r_a: Vector3,
    separation: Vector3,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let cfg = ScanConfig {
        model_a: a.clone(),
        model_b: b.clone(),
        r_a,
        env: env.clone(),
        spec: *spec,
        y_values: vec![separation.y],
        z_values: vec![separation.z],
        mode: ScanMode::NonRetarded,
        fd_step_rel: 1e-4,
    };
    let result = ratio_field(&cfg)?;
    let point = &result.points[0];
    if let Some(msg) = &point.error {
        return Err(Error::InvalidScan {
            reason: msg.clone(),
        });
    }
    Ok(point.ratio_ce_ee)
}

/// Magnetic-moment scale factor that makes the parallel-configuration
/// asymptotic ratio equal `target`; the ratio is linear in the chirality
/// magnitude, so one evaluation pins it.
pub fn calibrate_chirality_scale(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    env: &Environment,
    z_a: f64,
    aspect: f64,
    target: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let r_a = Vector3::new(0.0, 0.0, z_a);
    let sep = Vector3::new(0.0, aspect * z_a, 0.0);
    let ratio = nr_ratio_at(a, b, env, r_a, sep, spec)?;
    if !(ratio.is_finite() && ratio != 0.0) {
        return Err(Error::InvalidScan {
            reason: format!("cannot calibrate from ratio {ratio}"),
        });
    }
    Ok(target / ratio)
}

/// Per-pair, per-class z-forces on the middle molecule of the cavity
/// experiment.
#[derive(Clone, Copy, Debug)]
pub struct CavityReport {
    /// z-forces on B from the A–B pair, indexed like [`Interaction::ALL`].
    pub pair_ab: [f64; 6],
    /// z-forces on B from the C–B pair.
    pub pair_cb: [f64; 6],
    /// Total z-force on B (pairwise two-body contributions only; three-body
    /// terms are excluded).
    pub f_b_z: f64,
    /// Magnitude of the purely electric A–B force, the natural scale.
    pub reference: f64,
}

/// Three species on the symmetry axis of a two-plate cavity; reports the
/// z-force on the middle molecule B.
///
/// A and C must be placed mirror-symmetrically about B, and B must sit at
/// the cavity midplane with both plates of identical chirality; asymmetric
/// placement is rejected because the discrimination claim relies on it.
pub fn cavity_experiment(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    c: &PolarizabilityModel,
    env: &Environment,
    z_a: f64,
    z_b: f64,
    z_c: f64,
    spec: &QuadratureSpec,
    step: Option<f64>,
) -> Result<CavityReport> {
    env.validate()?;
    let plates = env.plates();
    if plates.len() != 2 {
        return Err(Error::AsymmetricCavity {
            reason: format!("expected a two-plate cavity, got {} plate(s)", plates.len()),
        });
    }
    let (bottom, top) = if plates[0].z0 < plates[1].z0 {
        (&plates[0], &plates[1])
    } else {
        (&plates[1], &plates[0])
    };
    debug_assert_eq!(bottom.normal, PlateNormal::Up);
    if bottom.chirality != top.chirality {
        return Err(Error::AsymmetricCavity {
            reason: "the two plates must be identical (same chirality)".into(),
        });
    }
    if !(z_a < z_b && z_b < z_c) {
        return Err(Error::AsymmetricCavity {
            reason: "positions must be ordered z_a < z_b < z_c".into(),
        });
    }
    let span = z_c - z_a;
    if ((z_b - z_a) - (z_c - z_b)).abs() > 1e-9 * span {
        return Err(Error::AsymmetricCavity {
            reason: "A and C must be mirror-symmetric about B".into(),
        });
    }
    let mid = 0.5 * (bottom.z0 + top.z0);
    if (z_b - mid).abs() > 1e-9 * (top.z0 - bottom.z0) {
        return Err(Error::AsymmetricCavity {
            reason: "B must sit at the cavity midplane".into(),
        });
    }

    let r_b = Vector3::new(0.0, 0.0, z_b);
    let f_ab = force_breakdown(a, b, Vector3::new(0.0, 0.0, z_a), r_b, env, spec, step)?;
    let f_cb = force_breakdown(c, b, Vector3::new(0.0, 0.0, z_c), r_b, env, spec, step)?;
    let pair_ab = f_ab.map(|f| f.z);
    let pair_cb = f_cb.map(|f| f.z);
    let f_b_z = pair_ab.iter().sum::<f64>() + pair_cb.iter().sum::<f64>();
    Ok(CavityReport {
        pair_ab,
        pair_cb,
        f_b_z,
        reference: pair_ab[Interaction::Ee.index()].abs(),
    })
}

/// Convenience: breakdown of the pair potential at explicit positions.
pub fn potential_at(
    a: &PolarizabilityModel,
    b: &PolarizabilityModel,
    r_a: Vector3,
    r_b: Vector3,
    env: &Environment,
    spec: &QuadratureSpec,
) -> Result<PotentialBreakdown> {
    let geom = GeometryPair::new(r_a, r_b)?;
    geom.validate_in(env)?;
    breakdown(a, b, &geom, env, spec)
}
