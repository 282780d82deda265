//! Command-line and config-file parameters.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Grid spectrum of the cut Hamiltonian.
    Solve,
    /// Closed-form oscillator values.
    Analytic,
    /// Grid spectrum next to the closed forms, with residuals.
    Compare,
    /// Corrected hydrogen levels and Lamb-shift factor.
    Hydrogen,
    /// Coherence amplification D·δ² for one parameter set.
    Star,
    /// Coherence amplification over a list of values.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Analytic => "analytic",
            Command::Compare => "compare",
            Command::Hydrogen => "hydrogen",
            Command::Star => "star",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Harmonic,
    Box,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuttingKind {
    Identity,
    Gaussian,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// ℏ = 1; mass and omega as given.
    Dimensionless,
    /// Mass in g, omega in rad/s, lengths in cm; energies reported in erg.
    Cgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Vary {
    Radius,
    Neutrons,
    MicroLength,
    Delta,
}

/// Every run parameter. Config files use the long flag names as keys.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    /// solve | analytic | compare | hydrogen | star | sweep
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<Command>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialKind>,
    /// Two-column CSV (x, V) for `--potential tabulated`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutting: Option<CuttingKind>,
    /// Gaussian cutting length.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Two-column CSV (x, f) for `--cutting tabulated`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutting_file: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    /// Grid points, boundary nodes included.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_doublings: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    /// Number of levels (default 5).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Isotropic dimension for D-dimensional levels.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<usize>,
    /// Emit finest-grid eigenvectors.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<bool>,

    /// Cutting length in cm for the hydrogen formulas.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_cm: Option<f64>,
    /// Single principal quantum number.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Nuclear charge (default 1).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,
    /// m_el c²/ΔE inside the Lamb-shift logarithm.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bethe_log_argument: Option<f64>,

    /// Number of coherent degrees of freedom D.
    #[arg(long)]
    #[serde(alias = "D", skip_serializing_if = "Option::is_none")]
    pub neutrons: Option<f64>,
    /// Deviation parameter δ, overriding (ℓ/a)².
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_cm: Option<f64>,
    /// Microscopic length ℓ in cm (default: Bohr radius).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micro_length_cm: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vary: Option<Vary>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

macro_rules! for_each_field {
    ($mac:ident) => {
        $mac!(
            subcommand => "subcommand",
            potential => "--potential",
            potential_file => "--potential-file",
            units => "--units",
            mass => "--mass",
            omega => "--omega",
            cutting => "--cutting",
            a => "--a",
            cutting_file => "--cutting-file",
            x_min => "--x-min",
            x_max => "--x-max",
            points => "--points",
            max_doublings => "--max-doublings",
            rel_tol => "--rel-tol",
            levels => "--levels",
            dims => "--dims",
            eigenvectors => "--eigenvectors",
            a_cm => "--a-cm",
            n => "--n",
            z => "--z",
            bethe_log_argument => "--bethe-log-argument",
            neutrons => "--neutrons",
            delta => "--delta",
            radius_cm => "--radius-cm",
            micro_length_cm => "--micro-length-cm",
            label => "--label",
            vary => "--vary",
            values => "--values",
            format => "--format",
            output => "--output"
        )
    };
}

impl Params {
    /// Field-wise `self` over `base`.
    pub fn overriding(self, base: Params) -> Params {
        macro_rules! merge {
            ($($field:ident => $flag:literal),*) => {
                Params { $($field: self.$field.or(base.$field)),* }
            };
        }
        for_each_field!(merge)
    }

    /// Flags that carry a value.
    pub fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! collect {
            ($($field:ident => $flag:literal),*) => {
                $(if self.$field.is_some() { out.push($flag); })*
            };
        }
        for_each_field!(collect);
        out
    }
}

const OSCILLATOR: &[&str] = &["--units", "--mass", "--omega", "--cutting", "--a"];
const GRID: &[&str] = &[
    "--potential",
    "--potential-file",
    "--cutting-file",
    "--x-min",
    "--x-max",
    "--points",
    "--max-doublings",
    "--rel-tol",
];
const STAR: &[&str] = &[
    "--neutrons",
    "--delta",
    "--radius-cm",
    "--micro-length-cm",
    "--label",
];

fn accepts(command: Command, flag: &str) -> bool {
    let common = ["subcommand", "--format", "--output"];
    if common.contains(&flag) {
        return true;
    }
    match command {
        Command::Solve => {
            OSCILLATOR.contains(&flag)
                || GRID.contains(&flag)
                || ["--levels", "--eigenvectors"].contains(&flag)
        }
        Command::Compare => {
            OSCILLATOR.contains(&flag) || GRID.contains(&flag) || ["--levels", "--dims"].contains(&flag)
        }
        Command::Analytic => {
            OSCILLATOR.contains(&flag) || ["--potential", "--levels", "--dims"].contains(&flag)
        }
        Command::Hydrogen => [
            "--a-cm",
            "--delta",
            "--n",
            "--levels",
            "--z",
            "--bethe-log-argument",
        ]
        .contains(&flag),
        Command::Star => STAR.contains(&flag),
        Command::Sweep => STAR.contains(&flag) || ["--vary", "--values"].contains(&flag),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fquant",
    version,
    about = "Spectra of cutting-function quantized Hamiltonians, hydrogen corrections and coherence estimates",
    allow_negative_numbers = true
)]
struct Cli {
    /// JSON file with the same keys as the long flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_LEVELS: usize = 5;

/// Validated parameters with defaults filled in. Serializes to a config file
/// that reproduces the same run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RunConfig {
    params: Params,
}

impl RunConfig {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn command(&self) -> Command {
        self.params.subcommand.expect("validated")
    }

    pub fn format(&self) -> OutputFormat {
        self.params.format.unwrap_or(OutputFormat::Json)
    }

    pub fn output(&self) -> Option<&Path> {
        self.params.output.as_deref()
    }

    pub fn levels(&self) -> usize {
        self.params.levels.unwrap_or(DEFAULT_LEVELS)
    }

    pub fn rel_tol(&self) -> f64 {
        self.params.rel_tol.unwrap_or(DEFAULT_REL_TOL)
    }

    pub fn to_json(&self) -> String {
        crate::output::to_json(&self.params)
    }
}

/// Parses `argv` (program name first) into a validated [`RunConfig`].
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(first_line(&e.render().to_string())),
    })?;
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => Params::default(),
    };
    let command_line_flags = cli.params.present();
    let mut params = cli.params.overriding(file);

    let command = params
        .subcommand
        .ok_or_else(|| CliError::Usage("no subcommand given (solve, analytic, compare, hydrogen, star, sweep)".into()))?;
    for flag in params.present() {
        if !accepts(command, flag) {
            let origin = if command_line_flags.contains(&flag) {
                ""
            } else {
                " (from config file)"
            };
            return Err(CliError::Usage(format!(
                "{flag}{origin} does not apply to `{}`",
                command.name()
            )));
        }
    }
    validate(command, &mut params)?;
    Ok(RunConfig { params })
}

fn first_line(s: &str) -> String {
    s.lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("invalid arguments")
        .trim()
        .to_string()
}

fn load_config(path: &Path) -> Result<Params, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
}

fn bad(flag: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {reason}"))
}

fn require_positive(flag: &str, value: Option<f64>) -> Result<(), CliError> {
    match value {
        Some(v) if !(v > 0.0 && v.is_finite()) => {
            Err(bad(flag, format!("must be positive and finite, got {v}")))
        }
        _ => Ok(()),
    }
}

fn conflict(params: &Params, a: &str, b: &str) -> Result<(), CliError> {
    let present = params.present();
    if present.contains(&a) && present.contains(&b) {
        return Err(CliError::Usage(format!("{a} conflicts with {b}")));
    }
    Ok(())
}

fn validate(command: Command, p: &mut Params) -> Result<(), CliError> {
    p.format.get_or_insert(OutputFormat::Json);
    for (flag, v) in [
        ("--mass", p.mass),
        ("--omega", p.omega),
        ("--rel-tol", p.rel_tol),
        ("--a-cm", p.a_cm),
        ("--radius-cm", p.radius_cm),
        ("--micro-length-cm", p.micro_length_cm),
    ] {
        require_positive(flag, v)?;
    }
    if let Some(a) = p.a {
        if !(a > 0.0) || a.is_nan() {
            return Err(bad("--a", format!("cutting length must be positive, got {a}")));
        }
    }
    if let Some(d) = p.delta {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(bad("--delta", format!("must be finite and non-negative, got {d}")));
        }
    }
    if let Some(d) = p.neutrons {
        if !(d >= 1.0 && d.is_finite()) {
            return Err(bad("--neutrons", format!("must be a finite count of at least 1, got {d}")));
        }
    }
    if p.levels == Some(0) {
        return Err(bad("--levels", "must be at least 1"));
    }
    if p.dims == Some(0) {
        return Err(bad("--dims", "must be at least 1"));
    }
    if p.n == Some(0) {
        return Err(bad("--n", "principal quantum number starts at 1"));
    }
    if p.z == Some(0) {
        return Err(bad("--z", "nuclear charge must be at least 1"));
    }
    if let Some(b) = p.bethe_log_argument {
        if !(b > 1.0 && b.is_finite()) {
            return Err(bad("--bethe-log-argument", format!("must exceed 1, got {b}")));
        }
    }
    if let Some(n) = p.points {
        if n < 3 {
            return Err(bad("--points", format!("need at least 3 grid points, got {n}")));
        }
    }

    match command {
        Command::Solve | Command::Compare | Command::Analytic => {
            p.levels.get_or_insert(DEFAULT_LEVELS);
            if command != Command::Analytic {
                p.rel_tol.get_or_insert(DEFAULT_REL_TOL);
            }
            let potential = *p.potential.get_or_insert(PotentialKind::Harmonic);
            if command != Command::Solve && potential != PotentialKind::Harmonic {
                return Err(bad(
                    "--potential",
                    format!("`{}` needs the harmonic potential", command.name()),
                ));
            }
            match (potential, &p.potential_file) {
                (PotentialKind::Tabulated, None) => {
                    return Err(bad("--potential-file", "required by --potential tabulated"))
                }
                (PotentialKind::Harmonic | PotentialKind::Box, Some(_)) => {
                    return Err(bad("--potential-file", "only used with --potential tabulated"))
                }
                _ => {}
            }
            let cutting = *p.cutting.get_or_insert(if p.a.is_some() {
                CuttingKind::Gaussian
            } else {
                CuttingKind::Identity
            });
            match cutting {
                CuttingKind::Gaussian if p.a.is_none() => {
                    return Err(bad("--a", "required by --cutting gaussian"))
                }
                CuttingKind::Identity if p.a.is_some() => {
                    return Err(CliError::Usage("--a conflicts with --cutting identity".into()))
                }
                CuttingKind::Tabulated if p.cutting_file.is_none() => {
                    return Err(bad("--cutting-file", "required by --cutting tabulated"))
                }
                CuttingKind::Tabulated if command != Command::Solve => {
                    return Err(bad(
                        "--cutting",
                        format!("`{}` needs identity or gaussian cutting", command.name()),
                    ))
                }
                CuttingKind::Tabulated if p.a.is_some() => {
                    return Err(CliError::Usage("--a conflicts with --cutting tabulated".into()))
                }
                CuttingKind::Identity | CuttingKind::Gaussian if p.cutting_file.is_some() => {
                    return Err(bad("--cutting-file", "only used with --cutting tabulated"))
                }
                _ => {}
            }
            if p.units == Some(Units::Cgs) && (p.mass.is_none() || p.omega.is_none()) {
                return Err(bad("--units", "cgs units need both --mass and --omega"));
            }
            match (p.x_min, p.x_max) {
                (Some(lo), Some(hi)) if !(lo < hi) => {
                    return Err(bad("--x-min", format!("must be below --x-max ({lo} >= {hi})")))
                }
                (Some(_), None) => return Err(bad("--x-max", "required with --x-min")),
                (None, Some(_)) => return Err(bad("--x-min", "required with --x-max")),
                _ => {}
            }
            if potential == PotentialKind::Box && p.x_min.is_none() {
                return Err(bad(
                    "--x-min",
                    "the box potential is unconfined without an explicit --x-min/--x-max grid",
                ));
            }
            if let Some(points) = p.points {
                if points < p.levels.unwrap_or(DEFAULT_LEVELS) + 2 {
                    return Err(bad("--points", "too few grid points for the requested --levels"));
                }
            }
        }
        Command::Hydrogen => {
            conflict(p, "--a-cm", "--delta")?;
            conflict(p, "--n", "--levels")?;
            if p.a_cm.is_none() && p.delta.is_none() {
                return Err(bad("--a-cm", "give the cutting length (or --delta)"));
            }
            if p.n.is_none() {
                p.levels.get_or_insert(DEFAULT_LEVELS);
            }
        }
        Command::Star => {}
        Command::Sweep => {
            if p.vary.is_none() {
                return Err(bad("--vary", "required by sweep (radius, neutrons, micro-length, delta)"));
            }
            match &p.values {
                None => return Err(bad("--values", "required by sweep")),
                Some(v) if v.is_empty() => return Err(bad("--values", "empty list")),
                Some(v) if v.iter().any(|x| !x.is_finite()) => {
                    return Err(bad("--values", "all values must be finite"))
                }
                _ => {}
            }
        }
    }
    Ok(())
}
