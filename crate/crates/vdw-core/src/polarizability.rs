//! Frequency-dependent electric, magnetic and chiral response functions
//! built from dipole transition data.
//!
//! For time-reversal-symmetric molecules the electric dipole matrix elements
//! are real and the magnetic ones purely imaginary, so a transition stows the
//! magnetic moment as the real vector `m_imag` with `m = i·m_imag`. All
//! evaluations are at imaginary frequency `ω = iξ` where the Lorentzian
//! denominators `ω_k² + ξ²` have no poles; real-frequency evaluation is
//! deliberately not offered.
//!
//! With `μ⁰ = d` and `μ¹ = m/c` the general polarizability reads
//!
//! ```text
//! α^{λλ'}(iξ) = (1/ħ) Σ_k [ μ^λ_{k0} μ^{λ'}_{0k} / (ω_k + iξ)
//!                         + μ^λ_{0k} μ^{λ'}_{k0} / (ω_k - iξ) ]
//! ```
//!
//! which for real `d` and imaginary `m` collapses to the real tensors
//! implemented below (internal units `ħ = c = 1`):
//!
//! * `α^{00}(iξ) = Σ_k 2 ω_k d⊗d / (ω_k² + ξ²)`
//! * `α^{11}(iξ) = Σ_k 2 ω_k μ⊗μ / (ω_k² + ξ²)`
//! * `α^{01}(iξ) = Σ_k 2 ξ  d⊗μ / (ω_k² + ξ²)`  (the chiral response)
//! * `α^{10}(iξ) = -α^{01}(iξ)ᵀ`

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::math::{Tensor3, Vector3};
use crate::units::UnitSystem;

/// Enantiomer label; flipping it negates every magnetic moment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Handedness {
    Plus,
    Minus,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Plus => 1.0,
            Handedness::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Handedness::Plus => Handedness::Minus,
            Handedness::Minus => Handedness::Plus,
        }
    }

    pub fn from_sign(s: i8) -> Result<Self> {
        match s {
            1 => Ok(Handedness::Plus),
            -1 => Ok(Handedness::Minus),
            other => Err(Error::InvalidMolecule {
                reason: format!("handedness must be +1 or -1, got {other}"),
            }),
        }
    }
}

/// One dipole transition from the ground state.
///
/// `omega` is the transition angular frequency in `omega_ref` units, `d` the
/// (real) electric dipole matrix element and `m_imag` the real vector `μ`
/// with magnetic moment `m = i·μ`, both in internal dipole units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub omega: f64,
    pub d: Vector3,
    pub m_imag: Vector3,
}

impl Transition {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidMolecule {
                reason: format!("transition frequency must be positive, got {}", self.omega),
            });
        }
        if !self.d.is_finite() || !self.m_imag.is_finite() {
            return Err(Error::InvalidMolecule {
                reason: "dipole moments must be finite".into(),
            });
        }
        Ok(())
    }

    /// Rotatory strength `R = Im(d_{0k} · m_{k0})`.
    ///
    /// With `m_{0k} = i·μ` and Hermitian dipole operators, `m_{k0} = -i·μ`,
    /// so `R = -d·μ`. It changes sign under spatial inversion.
    pub fn rotatory_strength(&self) -> f64 {
        -self.d.dot(self.m_imag)
    }
}

/// Orientation handling for the response tensors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Averaging {
    /// Orientation-averaged: every dyadic `u⊗v` becomes `(u·v)/3 · I`.
    Isotropic,
    /// Full dyadics retained.
    FullTensor,
}

/// A molecule's polarizability model: a set of transitions plus handedness.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizabilityModel {
    pub name: String,
    pub handedness: Handedness,
    pub averaging: Averaging,
    transitions: Vec<Transition>,
}

impl PolarizabilityModel {
    pub fn new(
        name: impl Into<String>,
        transitions: Vec<Transition>,
        handedness: Handedness,
        averaging: Averaging,
    ) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidMolecule {
                reason: "at least one transition is required".into(),
            });
        }
        for t in &transitions {
            t.validate()?;
        }
        Ok(Self {
            name: name.into(),
            handedness,
            averaging,
            transitions,
        })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// The enantiomer: same transitions, opposite handedness.
    pub fn enantiomer(&self) -> Self {
        let mut out = self.clone();
        out.handedness = self.handedness.flipped();
        out
    }

    /// Scales every magnetic moment by `factor` (may be negative); used to
    /// calibrate the chirality magnitude.
    pub fn scale_magnetic(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.transitions {
            t.m_imag = t.m_imag * factor;
        }
        out
    }

    /// Effective magnetic vector of a transition, handedness applied.
    fn mu(&self, t: &Transition) -> Vector3 {
        t.m_imag * self.handedness.sign()
    }

    /// Frequency of the transition with the largest electric dipole weight;
    /// sets the default semi-infinite mapping scale.
    pub fn dominant_omega(&self) -> f64 {
        self.transitions
            .iter()
            .max_by(|a, b| {
                let wa = a.d.norm_sq().max(a.m_imag.norm_sq());
                let wb = b.d.norm_sq().max(b.m_imag.norm_sq());
                wa.total_cmp(&wb)
            })
            .map(|t| t.omega)
            .unwrap_or(1.0)
    }

    /// Isotropic electric polarizability `α(iξ) = (2/3) Σ_k |d|² ω_k/(ω_k²+ξ²)`.
    pub fn alpha_iso(&self, xi: f64) -> f64 {
        self.transitions
            .iter()
            .map(|t| 2.0 / 3.0 * t.d.norm_sq() * t.omega / (t.omega * t.omega + xi * xi))
            .sum()
    }

    /// Isotropic magnetic polarizability (same form with `d → μ`).
    pub fn beta_iso(&self, xi: f64) -> f64 {
        self.transitions
            .iter()
            .map(|t| 2.0 / 3.0 * t.m_imag.norm_sq() * t.omega / (t.omega * t.omega + xi * xi))
            .sum()
    }

    /// Isotropic chiral polarizability `χ(iξ) = (2ξ/3) Σ_k (d·μ)/(ω_k²+ξ²)`.
    ///
    /// Vanishes at `ξ = 0` (the two resonance terms cancel), decays as `1/ξ`,
    /// and is odd under a handedness flip.
    pub fn chi_iso(&self, xi: f64) -> f64 {
        self.transitions
            .iter()
            .map(|t| {
                2.0 / 3.0 * xi * t.d.dot(self.mu(t)) / (t.omega * t.omega + xi * xi)
            })
            .sum()
    }

    /// General polarizability tensor `α^{λλ'}(iξ)` for `λ, λ' ∈ {0, 1}`.
    pub fn general_polarizability(&self, lambda: usize, lambda_p: usize, xi: f64) -> Tensor3 {
        assert!(lambda <= 1 && lambda_p <= 1, "dual indices are 0 or 1");
        let mut out = Tensor3::ZERO;
        for t in &self.transitions {
            let denom = t.omega * t.omega + xi * xi;
            let mu = self.mu(t);
            let (coeff, u, v) = match (lambda, lambda_p) {
                (0, 0) => (2.0 * t.omega / denom, t.d, t.d),
                (1, 1) => (2.0 * t.omega / denom, mu, mu),
                (0, 1) => (2.0 * xi / denom, t.d, mu),
                (1, 0) => (-2.0 * xi / denom, mu, t.d),
                _ => unreachable!(),
            };
            out += match self.averaging {
                Averaging::Isotropic => Tensor3::identity() * (coeff * u.dot(v) / 3.0),
                Averaging::FullTensor => Tensor3::dyadic(u, v) * coeff,
            };
        }
        out
    }

    /// The chiral response tensor `χ(iξ) = c·α^{01}(iξ)` (internally `c = 1`).
    pub fn chi_tensor(&self, xi: f64) -> Tensor3 {
        self.general_polarizability(0, 1, xi)
    }

    /// Load a molecule definition file (TOML).
    pub fn from_file(path: impl AsRef<Path>, units: &UnitSystem) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::MoleculeIo {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text, units).map_err(|e| match e {
            Error::MoleculeParse { source, .. } => Error::MoleculeParse {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }

    /// Parse a molecule definition from TOML text.
    ///
    /// Keys: `units` ("atomic" or "si"), `name`, `handedness` (+1/-1) and
    /// repeated `[[transition]]` blocks with `omega`, `d = [dx,dy,dz]`,
    /// `m_imag = [mx,my,mz]`. Atomic units mean `omega` in `omega_ref`, `d`
    /// in `e·a_Bohr`, `m_imag` in Bohr magnetons; SI means rad/s, C·m, J/T.
    pub fn from_toml_str(text: &str, units: &UnitSystem) -> Result<Self> {
        let raw: MoleculeFile = toml::from_str(text).map_err(|source| Error::MoleculeParse {
            path: "<inline>".into(),
            source,
        })?;
        let (omega_scale, d_scale, m_scale) = match raw.units.as_str() {
            "atomic" => (
                1.0,
                units.dipole_atomic_to_internal(),
                units.magneton_atomic_to_internal(),
            ),
            "si" => (
                1.0 / units.omega_ref_si,
                units.dipole_si_to_internal(1.0),
                units.magnetic_si_to_internal(1.0),
            ),
            other => {
                return Err(Error::InvalidMolecule {
                    reason: format!("units must be \"atomic\" or \"si\", got \"{other}\""),
                })
            }
        };
        let transitions = raw
            .transition
            .iter()
            .map(|t| Transition {
                omega: t.omega * omega_scale,
                d: Vector3::from(t.d) * d_scale,
                m_imag: Vector3::from(t.m_imag) * m_scale,
            })
            .collect();
        let averaging = match raw.averaging.as_deref() {
            None | Some("isotropic") => Averaging::Isotropic,
            Some("tensor") => Averaging::FullTensor,
            Some(other) => {
                return Err(Error::InvalidMolecule {
                    reason: format!("averaging must be \"isotropic\" or \"tensor\", got \"{other}\""),
                })
            }
        };
        Self::new(
            raw.name,
            transitions,
            Handedness::from_sign(raw.handedness)?,
            averaging,
        )
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoleculeFile {
    units: String,
    name: String,
    #[serde(default = "default_handedness")]
    handedness: i8,
    #[serde(default)]
    averaging: Option<String>,
    transition: Vec<TransitionFile>,
}

fn default_handedness() -> i8 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    omega: f64,
    d: [f64; 3],
    m_imag: [f64; 3],
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn single(d: Vector3, m: Vector3) -> PolarizabilityModel {
        PolarizabilityModel::new(
            "test",
            vec![Transition {
                omega: 1.0,
                d,
                m_imag: m,
            }],
            Handedness::Plus,
            Averaging::Isotropic,
        )
        .unwrap()
    }

    #[test]
    fn rotatory_strength_examples() {
        // d = (1,0,0), m = (i,0,0): R = Im(d·m_{k0}) = Im(-i) = -1.
        let t = Transition {
            omega: 1.0,
            d: Vector3::new(1.0, 0.0, 0.0),
            m_imag: Vector3::new(1.0, 0.0, 0.0),
        };
        assert_abs_diff_eq!(t.rotatory_strength(), -1.0);

        // Enantiomer flip changes the sign.
        let flipped = Transition {
            m_imag: -t.m_imag,
            ..t
        };
        assert_abs_diff_eq!(flipped.rotatory_strength(), 1.0);

        // Orthogonal d and m give zero.
        let ortho = Transition {
            omega: 1.0,
            d: Vector3::new(1.0, 0.0, 0.0),
            m_imag: Vector3::new(0.0, 1.0, 0.0),
        };
        assert_abs_diff_eq!(ortho.rotatory_strength(), 0.0);
    }

    #[test]
    fn alpha_static_and_decay() {
        let m = single(Vector3::new(1.0, 0.0, 0.0), Vector3::ZERO);
        // Static value (2/3)|d|²/ω in ħ=1 units (oracle: the general form at ω=0).
        assert_relative_eq!(m.alpha_iso(0.0), 2.0 / 3.0, max_relative = 1e-14);
        // Decays to zero at large ξ.
        assert!(m.alpha_iso(1e6) < 1e-9);
        // Strictly decreasing.
        assert!(m.alpha_iso(0.5) > m.alpha_iso(1.0));
    }

    #[test]
    fn two_identical_transitions_double_alpha() {
        let t = Transition {
            omega: 1.0,
            d: Vector3::new(1.0, 0.0, 0.0),
            m_imag: Vector3::ZERO,
        };
        let one = PolarizabilityModel::new("a", vec![t], Handedness::Plus, Averaging::Isotropic)
            .unwrap();
        let two =
            PolarizabilityModel::new("b", vec![t, t], Handedness::Plus, Averaging::Isotropic)
                .unwrap();
        assert_relative_eq!(two.alpha_iso(0.7), 2.0 * one.alpha_iso(0.7), max_relative = 1e-15);
    }

    #[test]
    fn chi_vanishes_at_zero_and_infinity() {
        let m = single(Vector3::new(1.0, 0.0, 0.0), Vector3::new(1.0, 0.0, 0.0));
        assert_abs_diff_eq!(m.chi_iso(0.0), 0.0);
        assert!(m.chi_iso(1e8).abs() < 1e-7);
        assert!(m.chi_iso(1.0).abs() > 0.0);
    }

    #[test]
    fn handedness_flip_negates_chi_leaves_alpha() {
        let m = single(Vector3::new(1.0, 0.2, 0.0), Vector3::new(0.5, -0.3, 0.1));
        let e = m.enantiomer();
        for &xi in &[0.1, 0.7, 2.3, 11.0] {
            assert_abs_diff_eq!(m.chi_iso(xi), -e.chi_iso(xi), epsilon = 1e-18);
            assert_abs_diff_eq!(m.alpha_iso(xi), e.alpha_iso(xi));
            assert_abs_diff_eq!(m.beta_iso(xi), e.beta_iso(xi));
        }
    }

    #[test]
    fn achiral_molecule_has_zero_chi() {
        let m = single(Vector3::new(1.0, 0.0, 0.0), Vector3::ZERO);
        for &xi in &[0.0, 0.3, 1.0, 10.0] {
            assert_abs_diff_eq!(m.chi_iso(xi), 0.0);
        }
    }

    #[test]
    fn general_polarizability_specialisations() {
        let mut m = single(Vector3::new(0.8, -0.1, 0.4), Vector3::new(0.2, 0.5, -0.3));
        let xi = 0.9;
        // Isotropic (0,0) equals alpha_iso times the identity.
        let a = m.general_polarizability(0, 0, xi);
        assert_relative_eq!(a.0[0][0], m.alpha_iso(xi), max_relative = 1e-14);
        assert_abs_diff_eq!(a.0[0][1], 0.0);

        // Transpose relation α01 = -α10ᵀ holds in full-tensor mode too.
        m.averaging = Averaging::FullTensor;
        let a01 = m.general_polarizability(0, 1, xi);
        let a10 = m.general_polarizability(1, 0, xi);
        let minus_a10_t = a10.transpose() * -1.0;
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(a01.0[i][j], minus_a10_t.0[i][j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn magnetic_to_electric_scale_is_fine_structure_squared() {
        // |d| = e·a_B, |m| = μ_B: α11/α00 = (α_fs/2)².
        let u = UnitSystem::default();
        let d = u.dipole_atomic_to_internal();
        let mu = u.magneton_atomic_to_internal();
        let m = single(Vector3::new(d, 0.0, 0.0), Vector3::new(mu, 0.0, 0.0));
        let ratio = m.general_polarizability(1, 1, 0.3).0[0][0]
            / m.general_polarizability(0, 0, 0.3).0[0][0];
        assert_relative_eq!(
            ratio,
            (crate::units::FINE_STRUCTURE / 2.0).powi(2),
            max_relative = 1e-12
        );
    }

    #[test]
    fn parse_molecule_file() {
        let text = r#"
units = "atomic"
name = "3MCP-like calibration model"
handedness = -1

[[transition]]
omega = 1.0
d = [1.0, 0.0, 0.0]
m_imag = [1.0, 0.0, 0.0]
"#;
        let u = UnitSystem::default();
        let m = PolarizabilityModel::from_toml_str(text, &u).unwrap();
        assert_eq!(m.handedness, Handedness::Minus);
        assert_eq!(m.transitions().len(), 1);
        assert_relative_eq!(
            m.transitions()[0].d.x,
            u.dipole_atomic_to_internal(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            m.transitions()[0].m_imag.x,
            u.magneton_atomic_to_internal(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn bad_handedness_is_rejected() {
        let text = r#"
units = "atomic"
name = "bad"
handedness = 3
[[transition]]
omega = 1.0
d = [1.0, 0.0, 0.0]
m_imag = [0.0, 0.0, 0.0]
"#;
        let err = PolarizabilityModel::from_toml_str(text, &UnitSystem::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidMolecule { .. }));
    }

    #[test]
    fn nonpositive_frequency_is_rejected() {
        let err = PolarizabilityModel::new(
            "bad",
            vec![Transition {
                omega: 0.0,
                d: Vector3::new(1.0, 0.0, 0.0),
                m_imag: Vector3::ZERO,
            }],
            Handedness::Plus,
            Averaging::Isotropic,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidMolecule { .. }));
    }
}
