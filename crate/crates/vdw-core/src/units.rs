//! Unit system and physical constants.
//!
//! Internally the crate sets `hbar = c = epsilon_0 = 1` and measures
//! frequencies in a reference `omega_ref`, lengths in `c/omega_ref` and
//! energies in `hbar*omega_ref`. This removes the ~10⁻⁴⁰-scale SI constants
//! from the integrands; conversion happens only at the boundaries.

/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
/// Bohr radius in metres.
pub const BOHR_RADIUS_SI: f64 = 5.291_772_109_03e-11;
/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_SI: f64 = 2.997_924_58e8;
/// Reduced Planck constant in J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Vacuum permittivity in F/m.
pub const VACUUM_PERMITTIVITY_SI: f64 = 8.854_187_812_8e-12;
/// Atomic unit of angular frequency (Hartree / hbar) in rad/s.
pub const ATOMIC_ANGULAR_FREQUENCY_SI: f64 = 4.134_137_333_52e16;

/// Conversion boundary between internal dimensionless quantities and SI.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    /// The reference angular frequency in rad/s.
    pub omega_ref_si: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self {
            omega_ref_si: ATOMIC_ANGULAR_FREQUENCY_SI,
        }
    }
}

impl UnitSystem {
    pub fn new(omega_ref_si: f64) -> Self {
        Self { omega_ref_si }
    }

    /// Metres per internal length unit (`c/omega_ref`).
    pub fn length_si(&self) -> f64 {
        SPEED_OF_LIGHT_SI / self.omega_ref_si
    }

    /// Joules per internal energy unit (`hbar*omega_ref`).
    pub fn energy_si(&self) -> f64 {
        HBAR_SI * self.omega_ref_si
    }

    /// Newtons per internal force unit.
    pub fn force_si(&self) -> f64 {
        self.energy_si() / self.length_si()
    }

    /// Internal value of an electric dipole given in C·m.
    ///
    /// Chosen so that `d_int² / r_int³` carries the same energy as
    /// `d² / (ε₀ r³)` in SI: `d_int = d · ω_ref / sqrt(ħ ε₀ c³)`.
    pub fn dipole_si_to_internal(&self, d_cm: f64) -> f64 {
        d_cm * self.omega_ref_si
            / (HBAR_SI * VACUUM_PERMITTIVITY_SI * SPEED_OF_LIGHT_SI.powi(3)).sqrt()
    }

    /// Internal value of a magnetic dipole given in J/T, stored as the
    /// equivalent electric dipole `m/c` (internally `c = 1`).
    pub fn magnetic_si_to_internal(&self, m_jt: f64) -> f64 {
        self.dipole_si_to_internal(m_jt / SPEED_OF_LIGHT_SI)
    }

    /// Internal value of one `e·a_Bohr`.
    pub fn dipole_atomic_to_internal(&self) -> f64 {
        // e·a_B · ω/√(ħε₀c³) = √(4πα)·(a_B ω / c)
        (4.0 * std::f64::consts::PI * FINE_STRUCTURE).sqrt()
            * (BOHR_RADIUS_SI * self.omega_ref_si / SPEED_OF_LIGHT_SI)
    }

    /// Internal value of one Bohr magneton.
    pub fn magneton_atomic_to_internal(&self) -> f64 {
        // μ_B/(c·e·a_B) = α/2, so one magneton is (α/2) electric-dipole units.
        self.dipole_atomic_to_internal() * FINE_STRUCTURE / 2.0
    }
}
