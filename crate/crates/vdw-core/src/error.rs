//! Crate-wide error type.

use crate::math::Vector3;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(
        "quadrature did not converge after {refinements} refinements: \
         relative change {rel_change:.3e} > tolerance {tol:.3e} \
         (last estimate norm {last_norm:.6e})"
    )]
    QuadratureNonConvergent {
        last_norm: f64,
        rel_change: f64,
        tol: f64,
        refinements: u32,
    },

    #[error("integrand returned a non-finite value at node {x:.6e} ({context})")]
    NonFiniteSample { x: f64, context: &'static str },

    #[error("periodic quadrature requires at least 4 nodes, got {nodes}")]
    TooFewPeriodicNodes { nodes: usize },

    #[error("invalid quadrature spec: {reason}")]
    InvalidQuadratureSpec { reason: String },

    #[error("finite-difference step must be positive, got {h:.6e}")]
    InvalidStep { h: f64 },

    #[error(
        "non-finite value at stencil point ({x:.6e}, {y:.6e}, {z:.6e})",
        x = .point.x, y = .point.y, z = .point.z
    )]
    NonFiniteStencil { point: Vector3 },

    #[error("molecule positions coincide (zero separation)")]
    CoincidentPositions,

    #[error(
        "molecule at z = {z:.6e} is not strictly on the vacuum side of the plate at z0 = {z0:.6e}"
    )]
    MoleculeBehindPlate { z: f64, z0: f64 },

    #[error("plates at z0 = {z0:.6e} coincide")]
    CoincidentPlates { z0: f64 },

    #[error("environment supports at most two plates, got {count}")]
    TooManyPlates { count: usize },

    #[error("a two-plate cavity needs opposite-facing normals enclosing the molecules")]
    InvalidCavity,

    #[error(
        "scattering tensor imaginary residue {residue:.3e} exceeds limit {limit:.3e}; \
         the angular-spectrum integrand is inconsistent"
    )]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("invalid molecule definition: {reason}")]
    InvalidMolecule { reason: String },

    #[error("failed to read molecule file {path}")]
    MoleculeIo {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse molecule file {path}: {source}")]
    MoleculeParse {
        path: String,
        #[source]
        source: toml::de::Error,
    },

    #[error("cavity experiment requires mirror-symmetric placement: {reason}")]
    AsymmetricCavity { reason: String },

    #[error("invalid scan configuration: {reason}")]
    InvalidScan { reason: String },
}
