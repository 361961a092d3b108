//! Van der Waals dispersion potentials and forces for molecules with
//! electric, magnetic and chiral response, in free space and near perfect
//! chiral plates.
//!
//! The crate is organised bottom-up:
//!
//! * [`math`] — fixed-size 3-vector/tensor algebra, Gauss–Legendre quadrature
//!   on semi-infinite intervals, trapezoid quadrature on the circle, and
//!   central-difference gradients.
//! * [`polarizability`] — frequency-dependent electric, magnetic and chiral
//!   response functions built from dipole transition data.
//! * [`greens`] — dyadic Green's tensors at imaginary frequency: the bulk
//!   (free-space) tensor, the scattering tensor of a perfect chiral plate
//!   (full angular-spectrum quadrature and non-retarded closed forms), their
//!   curls, and superposition over an environment of plates.
//! * [`potentials`] — the ground-state interaction energies: the purely
//!   electric term, the chiral-electric and chiral-chiral terms, and the
//!   general dual-indexed family they specialise.
//! * [`scenarios`] — forces from potential gradients, attractiveness-ratio
//!   scans over molecule positions, and the two-plate cavity discrimination
//!   experiment.
//!
//! Internally `hbar = c = epsilon_0 = 1`; frequencies are measured in a
//! reference `omega_ref`, lengths in `c/omega_ref` and energies in
//! `hbar*omega_ref`. Conversions to SI live in [`units`].
//!
//! ```
//! use vdw_core::greens::{Environment, GeometryPair};
//! use vdw_core::math::{QuadratureSpec, Vector3};
//! use vdw_core::polarizability::{Averaging, Handedness, PolarizabilityModel, Transition};
//! use vdw_core::potentials::potential_ee;
//!
//! let atom = PolarizabilityModel::new(
//!     "one-line atom",
//!     vec![Transition {
//!         omega: 1.0,
//!         d: Vector3::new(1.0, 0.0, 0.0),
//!         m_imag: Vector3::ZERO,
//!     }],
//!     Handedness::Plus,
//!     Averaging::Isotropic,
//! )?;
//! let geom = GeometryPair::new(Vector3::ZERO, Vector3::new(0.0, 0.0, 0.01))?;
//! let u = potential_ee(
//!     &atom,
//!     &atom,
//!     &geom,
//!     &Environment::free_space(),
//!     &QuadratureSpec::default(),
//! )?;
//! assert!(u.value < 0.0); // dispersion attraction
//! # Ok::<(), vdw_core::Error>(())
//! ```

pub mod error;
pub mod greens;
pub mod math;
pub mod polarizability;
pub mod potentials;
pub mod scenarios;
pub mod units;

pub use error::{Error, Result};
