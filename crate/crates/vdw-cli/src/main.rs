//! `vdw` — dispersion potentials and forces between polarizable molecules
//! near perfect chiral plates.
//!
//! Subcommands: `potential` (single-pair breakdown), `scan`
//! (attractiveness-ratio grid over molecule-B positions), `cavity`
//! (two-plate discrimination experiment) and `greens-dump` (tensor debug
//! records). All take `--config PATH` plus repeatable `--set KEY=VALUE`
//! overrides; outputs are deterministic CSV for fixed config.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vdw_core::greens::{total_curl_g, total_g, GeometryPair};
use vdw_core::math::Vector3;
use vdw_core::potentials::Interaction;
use vdw_core::scenarios::{
    cavity_experiment, potential_at, ratio_field, ScanConfig, ScanMode,
};

use config::{handedness_override, LoadedConfig};
use output::{fmt, CsvWriter, OutputUnits};

#[derive(Debug)]
pub enum CliError {
    /// Exit code 1: bad configuration; the message names the offending key.
    Config(String),
    /// Exit code 2: numerical failure; the message names operation and point.
    Numerical(String),
    /// Exit code 3: I/O failure.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

/// Classifies a core error raised while evaluating `operation` at `point`.
fn classify(e: vdw_core::Error, operation: &str, point: &str) -> CliError {
    use vdw_core::Error as E;
    match &e {
        E::QuadratureNonConvergent { .. }
        | E::NonFiniteSample { .. }
        | E::NonFiniteStencil { .. }
        | E::ImaginaryResidue { .. } => {
            CliError::Numerical(format!("{operation} at {point}: {e}"))
        }
        E::MoleculeIo { .. } => CliError::Io(e.to_string()),
        _ => CliError::Config(format!("{operation}: {e}")),
    }
}

#[derive(Parser)]
#[command(
    name = "vdw",
    about = "Dispersion potentials and forces near perfect chiral plates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. `--set environment.plates.0.chirality=-1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output path (defaults to the config's `output`, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override all quadrature node counts.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Single-pair potential breakdown at a fixed geometry.
    Potential(CommonArgs),
    /// Attractiveness-ratio grid over molecule-B positions.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        /// Use the full frequency and angular-spectrum quadrature instead of
        /// the non-retarded closed forms.
        #[arg(long)]
        full: bool,
    },
    /// Two-plate cavity discrimination experiment.
    Cavity {
        #[command(flatten)]
        common: CommonArgs,
        /// Handedness overrides, e.g. `--handedness A=+1,C=-1`.
        #[arg(long)]
        handedness: Option<String>,
    },
    /// Debug dump of the total Green's tensor and its curl over a ξ range.
    GreensDump(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Potential(common) => run_potential(prepare("potential", &common)?, &common),
        Command::Scan { common, full } => {
            run_scan(prepare("scan", &common)?, &common, full)
        }
        Command::Cavity { common, handedness } => {
            run_cavity(prepare("cavity", &common)?, &common, handedness.as_deref())
        }
        Command::GreensDump(common) => run_greens_dump(prepare("greens-dump", &common)?, &common),
    }
}

fn prepare(scenario: &str, common: &CommonArgs) -> Result<LoadedConfig, CliError> {
    let mut overrides = common.set.clone();
    if let Some(n) = common.nodes {
        overrides.push(format!("quadrature.xi_nodes={n}"));
        overrides.push(format!("quadrature.kpar_nodes={n}"));
        overrides.push(format!("quadrature.phi_nodes={n}"));
    }
    let loaded = config::load(&common.config, &overrides)?;
    if let Some(declared) = &loaded.config.scenario {
        if declared != scenario {
            return Err(CliError::Config(format!(
                "scenario: config declares \"{declared}\" but the subcommand is \"{scenario}\""
            )));
        }
    }
    Ok(loaded)
}

fn open_output(loaded: &LoadedConfig, common: &CommonArgs) -> Result<CsvWriter, CliError> {
    let path = common.out.clone().or_else(|| loaded.config.output.clone());
    CsvWriter::create(path.as_deref())
}

fn run_potential(loaded: LoadedConfig, common: &CommonArgs) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let units = cfg.unit_system();
    let out_units = OutputUnits::new(cfg.units, &units);
    let spec = cfg.quadrature_spec()?;
    let env = cfg.environment()?;
    let a = cfg.molecule('a', &loaded.base_dir, &units)?;
    let b = cfg.molecule('b', &loaded.base_dir, &units)?;
    let geometry = cfg
        .geometry
        .as_ref()
        .ok_or_else(|| CliError::Config("geometry section is required".into()))?;
    let r_a = Vector3::from(geometry.r_a);
    let r_b = Vector3::from(
        geometry
            .r_b
            .ok_or_else(|| CliError::Config("geometry.r_b is required".into()))?,
    );
    let point = format!("r_b = ({}, {}, {})", r_b.x, r_b.y, r_b.z);
    let bd = potential_at(&a, &b, r_a, r_b, &env, &spec)
        .map_err(|e| classify(e, "potential breakdown", &point))?;

    let mut w = open_output(&loaded, common)?;
    w.comment_block("vdw potential", &loaded.effective_toml)?;
    w.comment_block("", &out_units.annotation())?;
    w.header(&[
        "x_a",
        "y_a",
        "z_a",
        "x_b",
        "y_b",
        "z_b",
        "U_EE",
        "U_CE",
        "U_CC",
        "U_EM",
        "U_CM",
        "U_MM",
        "U_total",
        "err_estimate",
    ])?;
    let mut row = Vec::new();
    for v in [r_a.x, r_a.y, r_a.z, r_b.x, r_b.y, r_b.z] {
        row.push(fmt(v * out_units.length));
    }
    for kind in Interaction::ALL {
        row.push(fmt(bd.get(kind) * out_units.energy));
    }
    row.push(fmt(bd.total() * out_units.energy));
    row.push(fmt(bd.max_rel_error()));
    w.row(&row)?;
    w.finish()
}

fn run_scan(loaded: LoadedConfig, common: &CommonArgs, full_flag: bool) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let units = cfg.unit_system();
    let out_units = OutputUnits::new(cfg.units, &units);
    let spec = cfg.quadrature_spec()?;
    let env = cfg.environment()?;
    let a = cfg.molecule('a', &loaded.base_dir, &units)?;
    let b = cfg.molecule('b', &loaded.base_dir, &units)?;
    let scan = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::Config("scan section is required".into()))?;
    if !(scan.z_a > 0.0) {
        return Err(CliError::Config("scan.z_a must be positive".into()));
    }
    let y_values: Vec<f64> = scan
        .y_over_za
        .values(false)?
        .into_iter()
        .map(|f| f * scan.z_a)
        .collect();
    let z_values: Vec<f64> = scan
        .z_over_za
        .values(false)?
        .into_iter()
        .map(|f| f * scan.z_a)
        .collect();
    let mode = if full_flag || scan.full {
        ScanMode::FullQuadrature
    } else {
        ScanMode::NonRetarded
    };
    let scan_cfg = ScanConfig {
        model_a: a,
        model_b: b,
        r_a: Vector3::new(0.0, 0.0, scan.z_a),
        env,
        spec,
        y_values,
        z_values,
        mode,
        fd_step_rel: scan.fd_step_rel,
    };
    let result = ratio_field(&scan_cfg).map_err(|e| classify(e, "scan", "grid"))?;

    let mut w = open_output(&loaded, common)?;
    w.comment_block("vdw scan", &loaded.effective_toml)?;
    w.comment_block(
        "",
        &format!(
            "{}\nx,y,z are molecule-B positions relative to molecule A at (0, 0, z_a)",
            out_units.annotation()
        ),
    )?;
    w.header(&[
        "x",
        "y",
        "z",
        "U_EE",
        "U_CE",
        "U_CC",
        "Fx_EE",
        "Fy_EE",
        "Fz_EE",
        "Fx_CE",
        "Fy_CE",
        "Fz_CE",
        "er_dot_F_EE",
        "er_dot_F_CE",
        "ratio_CE_EE",
        "err_estimate",
    ])?;
    for p in &result.points {
        let mut row = Vec::with_capacity(16);
        for v in [p.separation.x, p.separation.y, p.separation.z] {
            row.push(fmt(v * out_units.length));
        }
        for v in [p.u_ee, p.u_ce, p.u_cc] {
            row.push(fmt(v * out_units.energy));
        }
        for v in [
            p.f_ee.x, p.f_ee.y, p.f_ee.z, p.f_ce.x, p.f_ce.y, p.f_ce.z,
        ] {
            row.push(fmt(v * out_units.force));
        }
        row.push(fmt(p.er_dot_f_ee * out_units.force));
        row.push(fmt(p.er_dot_f_ce * out_units.force));
        row.push(fmt(p.ratio_ce_ee));
        row.push(fmt(p.err_estimate));
        w.row(&row)?;
    }
    w.finish()
}

fn parse_handedness_flag(flag: &str) -> Result<(Option<i8>, Option<i8>), CliError> {
    let mut a = None;
    let mut c = None;
    for part in flag.split(',') {
        let (who, value) = part.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--handedness part '{part}' is not WHO=SIGN"))
        })?;
        let sign: i8 = value.trim_start_matches('+').parse().map_err(|_| {
            CliError::Config(format!("--handedness sign '{value}' must be +1 or -1"))
        })?;
        match who.trim() {
            "A" | "a" => a = Some(sign),
            "C" | "c" => c = Some(sign),
            other => {
                return Err(CliError::Config(format!(
                    "--handedness names molecules A or C, got '{other}'"
                )))
            }
        }
    }
    Ok((a, c))
}

fn run_cavity(
    loaded: LoadedConfig,
    common: &CommonArgs,
    handedness_flag: Option<&str>,
) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let units = cfg.unit_system();
    let out_units = OutputUnits::new(cfg.units, &units);
    let spec = cfg.quadrature_spec()?;
    let env = cfg.environment()?;
    let cavity = cfg
        .cavity
        .as_ref()
        .ok_or_else(|| CliError::Config("cavity section is required".into()))?;
    let (flag_a, flag_c) = match handedness_flag {
        Some(f) => parse_handedness_flag(f)?,
        None => (None, None),
    };
    let a = handedness_override(
        cfg.molecule('a', &loaded.base_dir, &units)?,
        flag_a.or(cavity.handedness_a),
        "cavity.handedness_a",
    )?;
    let b = cfg.molecule('b', &loaded.base_dir, &units)?;
    let c = handedness_override(
        cfg.molecule('c', &loaded.base_dir, &units)?,
        flag_c.or(cavity.handedness_c),
        "cavity.handedness_c",
    )?;

    let plates = env.plates();
    if plates.len() != 2 {
        return Err(CliError::Config(
            "cavity scenario needs exactly two plates in the environment".into(),
        ));
    }
    let z_b = 0.5 * (plates[0].z0 + plates[1].z0);
    let z_a = z_b - cavity.separation;
    let z_c = z_b + cavity.separation;
    let point = format!("z_b = {z_b}, separation = {}", cavity.separation);
    let report = cavity_experiment(&a, &b, &c, &env, z_a, z_b, z_c, &spec, None)
        .map_err(|e| classify(e, "cavity experiment", &point))?;

    let mut w = open_output(&loaded, common)?;
    w.comment_block("vdw cavity", &loaded.effective_toml)?;
    w.comment_block(
        "",
        &format!(
            "{}\nz-forces on the middle molecule B from each pair, per interaction class",
            out_units.annotation()
        ),
    )?;
    let mut columns = vec![
        "z_a".to_string(),
        "z_b".to_string(),
        "z_c".to_string(),
        "F_B_z".to_string(),
        "reference".to_string(),
    ];
    for kind in Interaction::ALL {
        columns.push(format!("F_AB_{}_z", kind.label()));
    }
    for kind in Interaction::ALL {
        columns.push(format!("F_CB_{}_z", kind.label()));
    }
    let column_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    w.header(&column_refs)?;
    let mut row = Vec::new();
    for v in [z_a, z_b, z_c] {
        row.push(fmt(v * out_units.length));
    }
    row.push(fmt(report.f_b_z * out_units.force));
    row.push(fmt(report.reference * out_units.force));
    for v in report.pair_ab {
        row.push(fmt(v * out_units.force));
    }
    for v in report.pair_cb {
        row.push(fmt(v * out_units.force));
    }
    w.row(&row)?;
    w.finish()
}

fn run_greens_dump(loaded: LoadedConfig, common: &CommonArgs) -> Result<(), CliError> {
    let cfg = &loaded.config;
    let spec = cfg.quadrature_spec()?;
    let env = cfg.environment()?;
    let dump = cfg
        .greens_dump
        .as_ref()
        .ok_or_else(|| CliError::Config("greens_dump section is required".into()))?;
    let geometry = cfg
        .geometry
        .as_ref()
        .ok_or_else(|| CliError::Config("geometry section is required".into()))?;
    let r_a = Vector3::from(geometry.r_a);
    let r_b = Vector3::from(
        geometry
            .r_b
            .ok_or_else(|| CliError::Config("geometry.r_b is required".into()))?,
    );
    let geom = GeometryPair::new(r_a, r_b)
        .map_err(|e| CliError::Config(format!("geometry: {e}")))?;
    let xis = dump.xi.values(dump.log_spacing)?;

    let mut w = open_output(&loaded, common)?;
    w.comment_block("vdw greens-dump", &loaded.effective_toml)?;
    w.comment_block(
        "",
        "total Green's tensor G and its left curl at imaginary frequency, internal units",
    )?;
    w.header(&[
        "xi", "kind", "g_xx", "g_xy", "g_xz", "g_yx", "g_yy", "g_yz", "g_zx", "g_zy", "g_zz",
    ])?;
    for &xi in &xis {
        if !(xi > 0.0) {
            return Err(CliError::Config(
                "greens_dump.xi values must be positive".into(),
            ));
        }
        let point = format!("xi = {xi}");
        let g = total_g(&geom, &env, xi, &spec)
            .map_err(|e| classify(e, "greens-dump G", &point))?;
        let c = total_curl_g(&geom, &env, xi, &spec)
            .map_err(|e| classify(e, "greens-dump curl G", &point))?;
        for (kind, tensor) in [("G", g), ("curlG", c)] {
            let mut row = vec![fmt(xi), kind.to_string()];
            for i in 0..3 {
                for j in 0..3 {
                    row.push(fmt(tensor.0[i][j]));
                }
            }
            w.row(&row)?;
        }
    }
    w.finish()
}
