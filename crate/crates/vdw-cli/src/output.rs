//! CSV emission: 12-significant-digit numbers, a commented header that
//! echoes the effective config, and unit annotations.

use std::io::Write;
use std::path::Path;

use vdw_core::units::UnitSystem;

use crate::config::UnitMode;
use crate::CliError;

/// Energy, force and length multipliers applied to internal results.
#[derive(Clone, Copy, Debug)]
pub struct OutputUnits {
    pub mode: UnitMode,
    pub energy: f64,
    pub force: f64,
    pub length: f64,
    pub omega_ref_si: f64,
}

impl OutputUnits {
    pub fn new(mode: UnitMode, units: &UnitSystem) -> Self {
        match mode {
            UnitMode::Internal => Self {
                mode,
                energy: 1.0,
                force: 1.0,
                length: 1.0,
                omega_ref_si: units.omega_ref_si,
            },
            UnitMode::Si => Self {
                mode,
                energy: units.energy_si(),
                force: units.force_si(),
                length: units.length_si(),
                omega_ref_si: units.omega_ref_si,
            },
        }
    }

    pub fn annotation(&self) -> String {
        match self.mode {
            UnitMode::Internal => format!(
                "units: internal (hbar = c = epsilon_0 = 1; energies in hbar*omega_ref, \
                 lengths in c/omega_ref; omega_ref = {:.6e} rad/s)",
                self.omega_ref_si
            ),
            UnitMode::Si => format!(
                "units: SI (energies in J, forces in N, lengths in m; \
                 omega_ref = {:.6e} rad/s, c/omega_ref = {:.6e} m)",
                self.omega_ref_si,
                vdw_core::units::SPEED_OF_LIGHT_SI / self.omega_ref_si
            ),
        }
    }
}

/// 12 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

pub struct CsvWriter {
    out: Box<dyn Write>,
}

impl CsvWriter {
    pub fn create(path: Option<&Path>) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(
                std::fs::File::create(p)
                    .map_err(|e| CliError::Io(format!("cannot create {}: {e}", p.display())))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        Ok(Self { out })
    }

    pub fn comment_block(&mut self, title: &str, body: &str) -> Result<(), CliError> {
        writeln!(self.out, "# {title}").map_err(io_err)?;
        for line in body.lines() {
            writeln!(self.out, "# {line}").map_err(io_err)?;
        }
        Ok(())
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<(), CliError> {
        writeln!(self.out, "{}", columns.join(",")).map_err(io_err)
    }

    pub fn row(&mut self, values: &[String]) -> Result<(), CliError> {
        writeln!(self.out, "{}", values.join(",")).map_err(io_err)
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush().map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("write failed: {e}"))
}
