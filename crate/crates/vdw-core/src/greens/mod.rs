//! Dyadic Green's tensors at imaginary frequency.
//!
//! The total tensor in a planar environment is the sum of the bulk
//! (free-space) part and one single-reflection scattering part per plate:
//! `G = G⁰ + Σ G¹`. Everything is evaluated at `ω = iξ`, `ξ > 0`, where all
//! physically meaningful tensors are real; the angular-spectrum quadrature
//! asserts and then discards its numerically vanishing imaginary part.
//!
//! Besides `G` itself the potentials need its left curl, right curl and
//! double curl. These enter through the dual-index blocks (at `ω = iξ`)
//!
//! ```text
//! G^{00} =  ξ²/c² G        G^{01} = -ξ/c · G×∇'
//! G^{10} = -ξ/c · ∇×G      G^{11} =  ∇×G×∇'
//! ```
//!
//! which are the numerically safe objects: they stay finite for ξ → 0 while
//! `G` itself diverges as `1/ξ²`.

mod free_space;
mod plate;

pub use free_space::{curl_free_space_g, free_space_g};
pub use plate::{curl_plate_g, curl_plate_g_nr, plate_scattering_g, plate_scattering_g_nr};

use crate::error::{Error, Result};
use crate::math::{QuadratureSpec, Tensor3, Vector3};

/// Chirality sign of a perfect chiral plate.
///
/// A positive plate reflects with `r_{s→p} = -1`, `r_{p→s} = +1`; a negative
/// plate with the opposite signs. Flipping the chirality negates the whole
/// scattering tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Positive,
    Negative,
}

impl Chirality {
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Positive => 1.0,
            Chirality::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Chirality::Positive => Chirality::Negative,
            Chirality::Negative => Chirality::Positive,
        }
    }

    /// Reflection coefficients `(r_{s→p}, r_{p→s})`.
    pub fn reflection_coefficients(self) -> (f64, f64) {
        match self {
            Chirality::Positive => (-1.0, 1.0),
            Chirality::Negative => (1.0, -1.0),
        }
    }

    pub fn from_sign(s: i8) -> Result<Self> {
        match s {
            1 => Ok(Chirality::Positive),
            -1 => Ok(Chirality::Negative),
            other => Err(Error::InvalidMolecule {
                reason: format!("plate chirality must be +1 or -1, got {other}"),
            }),
        }
    }
}

/// Which side of the plate is vacuum (the side the molecules live on).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlateNormal {
    /// Vacuum above the plate (outward normal +ẑ).
    Up,
    /// Vacuum below the plate (outward normal -ẑ).
    Down,
}

/// A perfect chiral plate: the plane `z = z0` with a chirality sign and an
/// outward normal along ±ẑ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateSpec {
    pub z0: f64,
    pub chirality: Chirality,
    pub normal: PlateNormal,
}

impl PlateSpec {
    pub fn new(z0: f64, chirality: Chirality, normal: PlateNormal) -> Self {
        Self {
            z0,
            chirality,
            normal,
        }
    }

    /// Signed distance from the plate plane to a point, positive on the
    /// vacuum side.
    pub fn height(&self, z: f64) -> f64 {
        match self.normal {
            PlateNormal::Up => z - self.z0,
            PlateNormal::Down => self.z0 - z,
        }
    }

    pub fn flipped(self) -> Self {
        Self {
            chirality: self.chirality.flipped(),
            ..self
        }
    }
}

/// Zero, one or two perfect chiral plates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Environment {
    plates: Vec<PlateSpec>,
}

impl Environment {
    pub fn free_space() -> Self {
        Self { plates: vec![] }
    }

    pub fn single_plate(plate: PlateSpec) -> Self {
        Self {
            plates: vec![plate],
        }
    }

    /// A cavity of two plates facing each other; molecules live between them.
    pub fn cavity(bottom: PlateSpec, top: PlateSpec) -> Result<Self> {
        let env = Self {
            plates: vec![bottom, top],
        };
        env.validate()?;
        Ok(env)
    }

    pub fn from_plates(plates: Vec<PlateSpec>) -> Result<Self> {
        let env = Self { plates };
        env.validate()?;
        Ok(env)
    }

    pub fn plates(&self) -> &[PlateSpec] {
        &self.plates
    }

    pub fn validate(&self) -> Result<()> {
        if self.plates.len() > 2 {
            return Err(Error::TooManyPlates {
                count: self.plates.len(),
            });
        }
        if self.plates.len() == 2 {
            let (a, b) = (&self.plates[0], &self.plates[1]);
            if a.z0 == b.z0 {
                return Err(Error::CoincidentPlates { z0: a.z0 });
            }
            let (lower, upper) = if a.z0 < b.z0 { (a, b) } else { (b, a) };
            if lower.normal != PlateNormal::Up || upper.normal != PlateNormal::Down {
                return Err(Error::InvalidCavity);
            }
        }
        Ok(())
    }

    /// Every plate with its chirality flipped.
    pub fn flipped(&self) -> Self {
        Self {
            plates: self.plates.iter().map(|p| p.flipped()).collect(),
        }
    }
}

/// A pair of molecule positions with the derived separation quantities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryPair {
    pub r_a: Vector3,
    pub r_b: Vector3,
    /// Separation `r = r_B - r_A`.
    pub separation: Vector3,
    pub dist: f64,
    pub e_r: Vector3,
}

impl GeometryPair {
    pub fn new(r_a: Vector3, r_b: Vector3) -> Result<Self> {
        let separation = r_b - r_a;
        let dist = separation.norm();
        if !(dist > 0.0) {
            return Err(Error::CoincidentPositions);
        }
        Ok(Self {
            r_a,
            r_b,
            separation,
            dist,
            e_r: separation * (1.0 / dist),
        })
    }

    pub fn swapped(&self) -> Self {
        Self {
            r_a: self.r_b,
            r_b: self.r_a,
            separation: -self.separation,
            dist: self.dist,
            e_r: -self.e_r,
        }
    }

    /// Validates that both molecules sit strictly on the vacuum side of
    /// every plate.
    pub fn validate_in(&self, env: &Environment) -> Result<()> {
        env.validate()?;
        for plate in env.plates() {
            for z in [self.r_a.z, self.r_b.z] {
                if !(plate.height(z) > 0.0) {
                    return Err(Error::MoleculeBehindPlate { z, z0: plate.z0 });
                }
            }
        }
        Ok(())
    }

    /// Geometry of the pair relative to one plate.
    pub fn plate_frame(&self, plate: &PlateSpec) -> Result<PlateFrame> {
        let ha = plate.height(self.r_a.z);
        let hb = plate.height(self.r_b.z);
        for (h, z) in [(ha, self.r_a.z), (hb, self.r_b.z)] {
            if !(h > 0.0) {
                return Err(Error::MoleculeBehindPlate { z, z0: plate.z0 });
            }
        }
        // A plate with downward normal is the image of the standard one
        // under a π rotation about the x axis (a proper rotation, so the
        // material chirality is untouched): evaluate in the rotated frame
        // (x, -y, height) and conjugate the resulting tensors with
        // R = diag(1,-1,-1).
        let mirrored = plate.normal == PlateNormal::Down;
        let x = self.separation.x;
        let y = if mirrored {
            -self.separation.y
        } else {
            self.separation.y
        };
        let z_plus = ha + hb;
        let rho_sq = x * x + y * y;
        Ok(PlateFrame {
            x,
            y,
            z_plus,
            rho: rho_sq.sqrt(),
            r_plus: (rho_sq + z_plus * z_plus).sqrt(),
            mirrored,
        })
    }
}

/// Pair geometry in a plate's own frame: lateral offsets, the summed height
/// `z₊` and `r₊ = √(x² + y² + z₊²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateFrame {
    pub x: f64,
    pub y: f64,
    pub z_plus: f64,
    pub rho: f64,
    pub r_plus: f64,
    /// Whether tensors must be conjugated with diag(1,-1,-1) on return.
    pub mirrored: bool,
}

impl PlateFrame {
    /// Applies the frame rotation to a tensor computed in the standard
    /// (upward-normal) orientation.
    pub fn to_lab(&self, t: Tensor3) -> Tensor3 {
        if !self.mirrored {
            return t;
        }
        let mut out = t;
        // Conjugation with diag(1,-1,-1): entry (i,j) flips iff exactly one
        // of i, j is the x axis... sign(i)·sign(j) with sign = (+,-,-).
        let sign = [1.0, -1.0, -1.0];
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = t.0[i][j] * sign[i] * sign[j];
            }
        }
        out
    }
}

/// The four dual-index blocks of a Green's tensor at fixed (ξ, geometry),
/// indexed by `2λ + λ'`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GreensBlocks {
    blocks: [Tensor3; 4],
}

impl GreensBlocks {
    pub fn get(&self, lambda: usize, lambda_p: usize) -> Tensor3 {
        debug_assert!(lambda <= 1 && lambda_p <= 1);
        self.blocks[2 * lambda + lambda_p]
    }

    fn set(&mut self, lambda: usize, lambda_p: usize, t: Tensor3) {
        self.blocks[2 * lambda + lambda_p] = t;
    }

    fn add(&mut self, other: &GreensBlocks) {
        for i in 0..4 {
            self.blocks[i] += other.blocks[i];
        }
    }
}

/// Blocks for both argument orders of a pair.
///
/// The reversed order follows from reciprocity:
/// `G^{λλ'}(r_B, r_A) = (-1)^{λ+λ'} [G^{λ'λ}(r_A, r_B)]ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockPair {
    pub ab: GreensBlocks,
    pub ba: GreensBlocks,
}

impl BlockPair {
    fn from_ab(ab: GreensBlocks) -> Self {
        let mut ba = GreensBlocks::default();
        for l in 0..2 {
            for lp in 0..2 {
                let sign = if (l + lp) % 2 == 0 { 1.0 } else { -1.0 };
                ba.set(l, lp, ab.get(lp, l).transpose() * sign);
            }
        }
        Self { ab, ba }
    }
}

/// Dual-index blocks of the total Green's tensor for both argument orders.
pub fn scaled_blocks(
    geom: &GeometryPair,
    env: &Environment,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<BlockPair> {
    geom.validate_in(env)?;
    let mut ab = free_space::scaled_blocks(geom, xi);
    for plate in env.plates() {
        let frame = geom.plate_frame(plate)?;
        let pb = plate::scaled_blocks(&frame, plate.chirality, xi, spec)?;
        ab.add(&pb);
    }
    Ok(BlockPair::from_ab(ab))
}

/// Total Green's tensor `G(r_A, r_B, iξ)`: bulk plus one single-reflection
/// scattering term per plate.
pub fn total_g(
    geom: &GeometryPair,
    env: &Environment,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Tensor3> {
    geom.validate_in(env)?;
    let mut g = free_space_g(geom, xi);
    for plate in env.plates() {
        g += plate_scattering_g(geom, plate, xi, spec)?;
    }
    Ok(g)
}

/// Left curl of the total Green's tensor, `∇_A × G(r_A, r_B, iξ)`.
pub fn total_curl_g(
    geom: &GeometryPair,
    env: &Environment,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Tensor3> {
    geom.validate_in(env)?;
    let mut g = curl_free_space_g(geom, xi);
    for plate in env.plates() {
        g += curl_plate_g(geom, plate, xi, spec)?;
    }
    Ok(g)
}
