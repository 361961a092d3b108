//! Run configuration: TOML file plus repeatable `--set KEY=VALUE` overrides.
//!
//! Overrides are applied to the parsed TOML document before
//! deserialization, so the echoed effective config reproduces the run
//! exactly.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use vdw_core::greens::{Chirality, Environment, PlateNormal, PlateSpec};
use vdw_core::math::QuadratureSpec;
use vdw_core::polarizability::{Handedness, PolarizabilityModel};
use vdw_core::units::UnitSystem;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Internal,
    Si,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional scenario name; must match the subcommand when present.
    pub scenario: Option<String>,
    #[serde(default)]
    pub units: UnitMode,
    /// Reference angular frequency in rad/s for SI conversion.
    pub omega_ref_si: Option<f64>,
    /// Output path; `--out` takes precedence.
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub molecules: MoleculesConfig,
    #[serde(default)]
    pub environment: EnvironmentConfig,
    pub geometry: Option<GeometryConfig>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    pub scan: Option<ScanSection>,
    pub cavity: Option<CavitySection>,
    pub greens_dump: Option<GreensDumpSection>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculesConfig {
    pub a: Option<PathBuf>,
    pub b: Option<PathBuf>,
    pub c: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    #[serde(default)]
    pub plates: Vec<PlateConfig>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateConfig {
    pub z0: f64,
    pub chirality: i8,
    /// "+z" (vacuum above, default) or "-z" (vacuum below).
    pub normal: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub r_a: [f64; 3],
    pub r_b: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub xi_nodes: usize,
    pub kpar_nodes: usize,
    pub phi_nodes: usize,
    pub rel_tol: f64,
    pub max_refinements: u32,
    /// 0 selects the automatic scale.
    pub map_scale: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Self {
            xi_nodes: q.xi_nodes,
            kpar_nodes: q.kpar_nodes,
            phi_nodes: q.phi_nodes,
            rel_tol: q.rel_tol,
            max_refinements: q.max_refinements,
            map_scale: 0.0,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl RangeConfig {
    pub fn values(&self, log_spacing: bool) -> Result<Vec<f64>, CliError> {
        if self.count == 0 {
            return Err(CliError::Config("range count must be positive".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let n = self.count as f64 - 1.0;
        if log_spacing {
            if !(self.start > 0.0 && self.stop > 0.0) {
                return Err(CliError::Config(
                    "log-spaced range bounds must be positive".into(),
                ));
            }
            let ratio = (self.stop / self.start).ln();
            Ok((0..self.count)
                .map(|i| self.start * (ratio * i as f64 / n).exp())
                .collect())
        } else {
            let step = (self.stop - self.start) / n;
            Ok((0..self.count)
                .map(|i| self.start + step * i as f64)
                .collect())
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    /// Height of the fixed molecule A above z = 0.
    pub z_a: f64,
    pub y_over_za: RangeConfig,
    pub z_over_za: RangeConfig,
    #[serde(default)]
    pub full: bool,
    #[serde(default = "default_fd_step")]
    pub fd_step_rel: f64,
}

fn default_fd_step() -> f64 {
    1e-4
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    /// Distance between B and each of A, C along the axis.
    pub separation: f64,
    pub handedness_a: Option<i8>,
    pub handedness_c: Option<i8>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreensDumpSection {
    pub xi: RangeConfig,
    #[serde(default)]
    pub log_spacing: bool,
}

/// The parsed document together with its effective TOML form.
pub struct LoadedConfig {
    pub config: RunConfig,
    /// TOML text of the post-override document, echoed into output headers.
    pub effective_toml: String,
    /// Directory of the config file; molecule paths resolve against it.
    pub base_dir: PathBuf,
}

pub fn load(path: &Path, overrides: &[String]) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut doc: toml::Value = text
        .parse()
        .map_err(|e| CliError::Config(format!("cannot parse config {}: {e}", path.display())))?;
    for entry in overrides {
        apply_override(&mut doc, entry)?;
    }
    let effective_toml = toml::to_string_pretty(&doc)
        .map_err(|e| CliError::Config(format!("cannot re-serialize config: {e}")))?;
    let config: RunConfig = doc
        .try_into()
        .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    Ok(LoadedConfig {
        config,
        effective_toml,
        base_dir: path.parent().unwrap_or(Path::new(".")).to_path_buf(),
    })
}

/// Applies one `KEY=VALUE` override; dotted keys descend into tables and
/// numeric segments index arrays.
fn apply_override(doc: &mut toml::Value, entry: &str) -> Result<(), CliError> {
    let (key, raw_value) = entry.split_once('=').ok_or_else(|| {
        CliError::Config(format!("override '{entry}' is not of the form KEY=VALUE"))
    })?;
    let value = parse_override_value(raw_value);
    let segments: Vec<&str> = key.split('.').collect();
    if segments.is_empty() || segments.iter().any(|s| s.is_empty()) {
        return Err(CliError::Config(format!("override key '{key}' is empty")));
    }
    let mut node = doc;
    for (i, segment) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        if let Ok(index) = segment.parse::<usize>() {
            let arr = node.as_array_mut().ok_or_else(|| {
                CliError::Config(format!("override key '{key}': '{segment}' indexes a non-array"))
            })?;
            if index >= arr.len() {
                return Err(CliError::Config(format!(
                    "override key '{key}': index {index} out of bounds (len {})",
                    arr.len()
                )));
            }
            if last {
                arr[index] = value;
                return Ok(());
            }
            node = &mut arr[index];
        } else {
            let table = node.as_table_mut().ok_or_else(|| {
                CliError::Config(format!(
                    "override key '{key}': '{segment}' descends into a non-table"
                ))
            })?;
            if last {
                table.insert(segment.to_string(), value);
                return Ok(());
            }
            node = table
                .entry(segment.to_string())
                .or_insert_with(|| toml::Value::Table(Default::default()));
        }
    }
    Ok(())
}

fn parse_override_value(raw: &str) -> toml::Value {
    let probe = format!("v = {raw}");
    match probe.parse::<toml::Table>() {
        Ok(table) => table["v"].clone(),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

impl RunConfig {
    pub fn unit_system(&self) -> UnitSystem {
        match self.omega_ref_si {
            Some(w) => UnitSystem::new(w),
            None => UnitSystem::default(),
        }
    }

    pub fn quadrature_spec(&self) -> Result<QuadratureSpec, CliError> {
        let q = &self.quadrature;
        let spec = QuadratureSpec {
            xi_nodes: q.xi_nodes,
            kpar_nodes: q.kpar_nodes,
            phi_nodes: q.phi_nodes,
            rel_tol: q.rel_tol,
            max_refinements: q.max_refinements,
            map_scale: if q.map_scale == 0.0 {
                None
            } else {
                Some(q.map_scale)
            },
        };
        spec.validate()
            .map_err(|e| CliError::Config(format!("quadrature: {e}")))?;
        Ok(spec)
    }

    pub fn environment(&self) -> Result<Environment, CliError> {
        let mut plates = Vec::new();
        for (i, p) in self.environment.plates.iter().enumerate() {
            let chirality = Chirality::from_sign(p.chirality).map_err(|e| {
                CliError::Config(format!("environment.plates.{i}.chirality: {e}"))
            })?;
            let normal = match p.normal.as_deref() {
                None | Some("+z") => PlateNormal::Up,
                Some("-z") => PlateNormal::Down,
                Some(other) => {
                    return Err(CliError::Config(format!(
                        "environment.plates.{i}.normal must be \"+z\" or \"-z\", got \"{other}\""
                    )))
                }
            };
            plates.push(PlateSpec::new(p.z0, chirality, normal));
        }
        Environment::from_plates(plates)
            .map_err(|e| CliError::Config(format!("environment: {e}")))
    }

    pub fn molecule(
        &self,
        which: char,
        base_dir: &Path,
        units: &UnitSystem,
    ) -> Result<PolarizabilityModel, CliError> {
        let path = match which {
            'a' => self.molecules.a.as_ref(),
            'b' => self.molecules.b.as_ref(),
            'c' => self.molecules.c.as_ref(),
            _ => None,
        }
        .ok_or_else(|| CliError::Config(format!("molecules.{which} is required")))?;
        let resolved = if path.is_absolute() {
            path.clone()
        } else {
            base_dir.join(path)
        };
        PolarizabilityModel::from_file(&resolved, units).map_err(|e| match &e {
            vdw_core::Error::MoleculeIo { .. } => CliError::Io(format!("molecules.{which}: {e}")),
            _ => CliError::Config(format!("molecules.{which}: {e}")),
        })
    }
}

pub fn handedness_override(
    model: PolarizabilityModel,
    sign: Option<i8>,
    key: &str,
) -> Result<PolarizabilityModel, CliError> {
    match sign {
        None => Ok(model),
        Some(s) => {
            let h = Handedness::from_sign(s)
                .map_err(|e| CliError::Config(format!("{key}: {e}")))?;
            let mut m = model;
            m.handedness = h;
            Ok(m)
        }
    }
}
