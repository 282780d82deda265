//! Executes a validated [`RunConfig`].

use std::path::Path;

use fquant::analytic::{
    ddim_degeneracy, ddim_level, exact_spacing_shift, hydrogen_delta, hydrogen_level,
    lamb_correction_factor, lamb_relative_deviation, lamb_shift, omega_bar, oscillator_level,
    principal_number_substitution, relative_residuals, relative_spacing_shift,
    rydberg_relative_correction,
};
use fquant::coherence::{estimate, order_of_magnitude, sweep};
use fquant::solver::{ddim_levels_by_separability, DEFAULT_POINTS, DEFAULT_MARGIN};
use fquant::units::HBAR_CGS;
use fquant::{
    CuttingFunction, DeltaParameter, EstimateReport, Grid1D, GridPolicy, LambInputs,
    OscillatorParams, PhysicalConstants, PotentialSpec, SpectralProblem, StarParameters,
    SweepParameter, Table, UnitSystem,
};
use serde::Serialize;

use crate::config::{Command, CuttingKind, OutputFormat, Params, PotentialKind, RunConfig, Units, Vary};
use crate::output::{to_json, Cell, Rows};
use crate::CliError;

/// Rendered output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub warnings: Vec<String>,
    /// False when a grid solve stopped before reaching the tolerance.
    pub converged: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool_version: &'static str,
    inputs: &'a Params,
    results: T,
    warnings: &'a [String],
}

struct Output<T> {
    results: T,
    rows: Rows,
    warnings: Vec<String>,
    converged: bool,
}

impl<T: Serialize> Output<T> {
    fn render(self, config: &RunConfig) -> Report {
        let text = match config.format() {
            OutputFormat::Json => to_json(&Envelope {
                tool_version: env!("CARGO_PKG_VERSION"),
                inputs: config.params(),
                results: &self.results,
                warnings: &self.warnings,
            }),
            OutputFormat::Csv => self.rows.to_csv(),
            OutputFormat::Table => self.rows.to_table(),
        };
        Report {
            text,
            warnings: self.warnings,
            converged: self.converged,
        }
    }
}

fn compute(context: &str) -> impl Fn(fquant::Error) -> CliError + '_ {
    move |e| CliError::Compute(format!("{context}: {e}"))
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    Ok(match config.command() {
        Command::Solve => solve(config, false)?.render(config),
        Command::Compare => solve(config, true)?.render(config),
        Command::Analytic => analytic(config)?.render(config),
        Command::Hydrogen => hydrogen(config)?.render(config),
        Command::Star => star(config)?.render(config),
        Command::Sweep => run_sweep(config)?.render(config),
    })
}

/// External units and the matching internal oscillator.
struct Frame {
    units: UnitSystem,
    mass: f64,
    omega: f64,
    /// ℏ in external units.
    hbar: f64,
}

impl Frame {
    fn new(p: &Params) -> Result<Self, CliError> {
        let mass = p.mass.unwrap_or(1.0);
        let omega = p.omega.unwrap_or(1.0);
        Ok(match p.units {
            Some(Units::Cgs) => Frame {
                units: UnitSystem::cgs(mass, omega).map_err(compute("--units"))?,
                mass,
                omega,
                hbar: HBAR_CGS,
            },
            _ => Frame {
                units: UnitSystem::Dimensionless,
                mass,
                omega,
                hbar: 1.0,
            },
        })
    }

    fn is_cgs(&self) -> bool {
        matches!(self.units, UnitSystem::Cgs { .. })
    }

    /// Mass and frequency of the internal problem, where ℏ = 1.
    fn internal_oscillator(&self) -> (f64, f64) {
        if self.is_cgs() {
            (1.0, 1.0)
        } else {
            (self.mass, self.omega)
        }
    }

    fn unit_names(&self) -> UnitNames {
        if self.is_cgs() {
            UnitNames { length: "cm", energy: "erg" }
        } else {
            UnitNames { length: "dimensionless", energy: "dimensionless" }
        }
    }

    fn cutting_length(&self, p: &Params) -> f64 {
        match p.cutting {
            Some(CuttingKind::Gaussian) => p.a.expect("validated"),
            _ => f64::INFINITY,
        }
    }

    fn params(&self, p: &Params) -> OscillatorParams {
        OscillatorParams {
            mass: self.mass,
            omega: self.omega,
            cutting_length: self.cutting_length(p),
        }
    }

    fn delta(&self, p: &Params) -> Result<Option<f64>, CliError> {
        if p.cutting != Some(CuttingKind::Gaussian) {
            return Ok(None);
        }
        DeltaParameter::from_params(&self.params(p), self.hbar)
            .map(|d| Some(d.value()))
            .map_err(compute("--a"))
    }
}

#[derive(Serialize)]
struct UnitNames {
    length: &'static str,
    energy: &'static str,
}

fn load_table(flag: &str, path: &Path) -> Result<Table, CliError> {
    Table::from_csv_path(path).map_err(|e| CliError::Compute(format!("{flag} {}: {e}", path.display())))
}

fn scaled_table(
    table: &Table,
    x: impl Fn(f64) -> f64,
    y: impl Fn(f64) -> f64,
    flag: &str,
) -> Result<Table, CliError> {
    Table::new(
        table.abscissae().iter().map(|&v| x(v)).collect(),
        table.values().iter().map(|&v| y(v)).collect(),
    )
    .map_err(compute(flag))
}

fn build_problem(config: &RunConfig, frame: &Frame) -> Result<SpectralProblem, CliError> {
    let p = config.params();
    let units = frame.units;
    let (mass, omega) = frame.internal_oscillator();
    let potential = match p.potential.expect("validated") {
        PotentialKind::Harmonic => PotentialSpec::Harmonic { mass, omega },
        PotentialKind::Box => PotentialSpec::FreeBox,
        PotentialKind::Tabulated => {
            let table = load_table("--potential-file", p.potential_file.as_deref().expect("validated"))?;
            PotentialSpec::Tabulated(scaled_table(
                &table,
                |x| units.length_to_internal(x),
                |v| units.energy_to_internal(v),
                "--potential-file",
            )?)
        }
    };
    let a = units.length_to_internal(frame.cutting_length(p));
    let cutting = match p.cutting.expect("validated") {
        CuttingKind::Identity => CuttingFunction::Identity,
        CuttingKind::Gaussian => CuttingFunction::gaussian(a).map_err(compute("--a"))?,
        CuttingKind::Tabulated => {
            let table = load_table("--cutting-file", p.cutting_file.as_deref().expect("validated"))?;
            let table = scaled_table(&table, |x| units.length_to_internal(x), |f| f, "--cutting-file")?;
            CuttingFunction::tabulated(table).map_err(compute("--cutting-file"))?
        }
    };
    let params = OscillatorParams::new(mass, omega, if cutting.is_identity() { f64::INFINITY } else { a })
        .map_err(compute("oscillator"))?;
    let mut problem =
        SpectralProblem::new(potential, cutting, params, config.levels()).map_err(compute("problem"))?;
    let n_points = p.points.unwrap_or(DEFAULT_POINTS);
    problem.grid = match (p.x_min, p.x_max) {
        (Some(lo), Some(hi)) => GridPolicy::Explicit(
            Grid1D::new(units.length_to_internal(lo), units.length_to_internal(hi), n_points)
                .map_err(compute("grid"))?,
        ),
        _ => GridPolicy::Automatic {
            margin: DEFAULT_MARGIN,
            n_points,
        },
    };
    if let Some(d) = p.max_doublings {
        problem.max_doublings = d;
    }
    problem.eigenvectors = p.eigenvectors.unwrap_or(false);
    problem.validate().map_err(compute("problem"))?;
    Ok(problem)
}

#[derive(Serialize)]
struct GridOut {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    spacing: f64,
}

#[derive(Serialize)]
struct LevelOut {
    n: usize,
    eigenvalue: f64,
    convergence_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

#[derive(Serialize)]
struct DdimOut {
    quanta: u32,
    numeric: f64,
    numeric_degeneracy: u64,
    analytic: f64,
    analytic_degeneracy: u64,
    residual: f64,
}

#[derive(Serialize)]
struct SolveOut {
    units: UnitNames,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    converged: bool,
    refinement_levels: u32,
    grid: GridOut,
    levels: Vec<LevelOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ddim_levels: Option<Vec<DdimOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvectors: Option<Vec<Vec<f64>>>,
}

fn solve(config: &RunConfig, compare: bool) -> Result<Output<SolveOut>, CliError> {
    let p = config.params();
    let frame = Frame::new(p)?;
    let problem = build_problem(config, &frame)?;
    let result = fquant::solve_converged(&problem, config.rel_tol()).map_err(compute("solve"))?;
    let units = frame.units;
    let energy = |e: f64| units.energy_from_internal(e);
    let length = |x: f64| units.length_from_internal(x);

    let eigenvalues: Vec<f64> = result.eigenvalues.iter().map(|&e| energy(e)).collect();
    let reference: Option<Vec<f64>> = problem
        .analytic_levels()
        .map(|levels| levels.into_iter().map(energy).collect());
    let residuals = match &reference {
        Some(r) => Some(relative_residuals(r, &eigenvalues).map_err(compute("compare"))?),
        None => None,
    };
    let mut warnings = Vec::new();
    if compare && reference.is_none() {
        return Err(CliError::Compute(
            "compare: no closed form for this potential and cutting".into(),
        ));
    }
    if !result.converged {
        warnings.push(format!(
            "grid refinement stopped after {} doublings before reaching --rel-tol {:e}",
            result.refinement_levels,
            config.rel_tol()
        ));
    }

    let levels: Vec<LevelOut> = eigenvalues
        .iter()
        .enumerate()
        .map(|(n, &e)| LevelOut {
            n,
            eigenvalue: e,
            convergence_estimate: energy(result.convergence_estimate[n]),
            analytic: reference.as_ref().map(|r| r[n]),
            residual: residuals.as_ref().map(|r| r[n]),
        })
        .collect();

    let ddim_levels = match (compare, p.dims) {
        (true, Some(dims)) => Some(ddim_compare(&eigenvalues, dims, config.levels(), &frame, p)?),
        _ => None,
    };

    let mut rows = Rows::new(vec!["n", "eigenvalue", "convergence_estimate", "analytic", "residual"]);
    for l in &levels {
        rows.push(vec![
            l.n.into(),
            l.eigenvalue.into(),
            l.convergence_estimate.into(),
            l.analytic.into(),
            l.residual.into(),
        ]);
    }

    let grid = result.grid_used;
    Ok(Output {
        results: SolveOut {
            units: frame.unit_names(),
            delta: frame.delta(p)?,
            converged: result.converged,
            refinement_levels: result.refinement_levels,
            grid: GridOut {
                x_min: length(grid.x_min()),
                x_max: length(grid.x_max()),
                n_points: grid.n_points(),
                spacing: length(grid.spacing()),
            },
            max_residual: residuals
                .as_ref()
                .map(|r| r.iter().copied().fold(0.0, f64::max)),
            dims: ddim_levels.as_ref().and(p.dims),
            ddim_levels,
            levels,
            eigenvectors: result.eigenvectors,
        },
        rows,
        warnings,
        converged: result.converged,
    })
}

fn ddim_compare(
    levels_1d: &[f64],
    dims: usize,
    count: usize,
    frame: &Frame,
    p: &Params,
) -> Result<Vec<DdimOut>, CliError> {
    let numeric =
        ddim_levels_by_separability(levels_1d, false, dims, count).map_err(compute("--dims"))?;
    let params = frame.params(p);
    Ok(numeric
        .iter()
        .enumerate()
        .map(|(quanta, level)| {
            let quanta = quanta as u32;
            let analytic = ddim_level(quanta, dims as u32, &params, frame.hbar);
            DdimOut {
                quanta,
                numeric: level.energy,
                numeric_degeneracy: level.degeneracy,
                analytic,
                analytic_degeneracy: ddim_degeneracy(quanta, dims as u32),
                residual: (level.energy - analytic).abs() / analytic.abs().max(1e-300),
            }
        })
        .collect())
}

#[derive(Serialize)]
struct AnalyticLevel {
    n: u32,
    energy: f64,
}

#[derive(Serialize)]
struct AnalyticDdim {
    quanta: u32,
    energy: f64,
    degeneracy: u64,
}

#[derive(Serialize)]
struct AnalyticOut {
    units: UnitNames,
    delta: f64,
    omega_bar: f64,
    relative_spacing_shift: f64,
    exact_spacing_shift: f64,
    ground_shift: f64,
    levels: Vec<AnalyticLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ddim_levels: Option<Vec<AnalyticDdim>>,
}

fn analytic(config: &RunConfig) -> Result<Output<AnalyticOut>, CliError> {
    let p = config.params();
    let frame = Frame::new(p)?;
    let params = frame.params(p);
    let delta = DeltaParameter::from_params(&params, frame.hbar).map_err(compute("--a"))?;
    let a = params.cutting_length;
    let ground_shift = frame.hbar * frame.hbar / (2.0 * params.mass * a * a);
    let levels: Vec<AnalyticLevel> = (0..config.levels() as u32)
        .map(|n| AnalyticLevel {
            n,
            energy: oscillator_level(n, &params, frame.hbar),
        })
        .collect();
    let ddim_levels = p.dims.map(|dims| {
        (0..config.levels() as u32)
            .map(|quanta| AnalyticDdim {
                quanta,
                energy: ddim_level(quanta, dims as u32, &params, frame.hbar),
                degeneracy: ddim_degeneracy(quanta, dims as u32),
            })
            .collect::<Vec<_>>()
    });

    let mut rows = Rows::new(vec!["dims", "index", "energy", "degeneracy"]);
    for l in &levels {
        rows.push(vec![1u32.into(), l.n.into(), l.energy.into(), 1u32.into()]);
    }
    for l in ddim_levels.iter().flatten() {
        rows.push(vec![
            p.dims.expect("set").into(),
            l.quanta.into(),
            l.energy.into(),
            l.degeneracy.into(),
        ]);
    }

    Ok(Output {
        results: AnalyticOut {
            units: frame.unit_names(),
            delta: delta.value(),
            omega_bar: omega_bar(params.omega, delta),
            relative_spacing_shift: relative_spacing_shift(delta),
            exact_spacing_shift: exact_spacing_shift(delta),
            ground_shift,
            levels,
            dims: p.dims,
            ddim_levels,
        },
        rows,
        warnings: Vec::new(),
        converged: true,
    })
}

#[derive(Serialize)]
struct HydrogenLevel {
    n: u32,
    n_effective: f64,
    energy_ev: f64,
    standard_energy_ev: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lamb_shift_ev: Option<f64>,
}

#[derive(Serialize)]
struct HydrogenOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    a_cm: Option<f64>,
    delta: f64,
    delta_squared: f64,
    order_delta: i32,
    order_delta_squared: i32,
    rydberg_relative_correction: f64,
    lamb_correction_factor: f64,
    lamb_relative_deviation: f64,
    z: u32,
    levels: Vec<HydrogenLevel>,
}

fn hydrogen(config: &RunConfig) -> Result<Output<HydrogenOut>, CliError> {
    let p = config.params();
    let constants = PhysicalConstants::default();
    let delta = match (p.a_cm, p.delta) {
        (Some(a), _) => hydrogen_delta(a, &constants).map_err(compute("--a-cm"))?,
        (None, Some(d)) => DeltaParameter::new(d).map_err(compute("--delta"))?,
        (None, None) => unreachable!("validated"),
    };
    let z = p.z.unwrap_or(1);
    let ns: Vec<u32> = match p.n {
        Some(n) => vec![n],
        None => (1..=config.levels() as u32).collect(),
    };
    let mut warnings = Vec::new();
    if p.bethe_log_argument.is_none() {
        warnings.push("absolute Lamb shift omitted; pass --bethe-log-argument to include it".into());
    }
    let levels = ns
        .iter()
        .map(|&n| {
            let lamb_shift_ev = match p.bethe_log_argument {
                Some(arg) => Some(
                    lamb_shift(&LambInputs {
                        n,
                        z,
                        alpha: constants.fine_structure_alpha,
                        bethe_log_argument: arg,
                        hartree_energy: constants.hartree_energy(),
                        delta,
                    })
                    .map_err(compute("lamb"))?,
                ),
                None => None,
            };
            Ok(HydrogenLevel {
                n,
                n_effective: principal_number_substitution(n, delta).map_err(compute("--n"))?,
                energy_ev: hydrogen_level(n, delta, &constants).map_err(compute("--n"))?,
                standard_energy_ev: -constants.rydberg_infinity / (n as f64 * n as f64),
                lamb_shift_ev,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut rows = Rows::new(vec![
        "n",
        "n_effective",
        "energy_ev",
        "standard_energy_ev",
        "lamb_shift_ev",
        "delta",
        "rydberg_relative_correction",
        "lamb_relative_deviation",
    ]);
    for l in &levels {
        rows.push(vec![
            l.n.into(),
            l.n_effective.into(),
            l.energy_ev.into(),
            l.standard_energy_ev.into(),
            l.lamb_shift_ev.into(),
            delta.value().into(),
            rydberg_relative_correction(delta).into(),
            lamb_relative_deviation(delta).into(),
        ]);
    }

    Ok(Output {
        results: HydrogenOut {
            a_cm: p.a_cm,
            delta: delta.value(),
            delta_squared: delta.squared(),
            order_delta: order_of_magnitude(delta.value()),
            order_delta_squared: order_of_magnitude(delta.squared()),
            rydberg_relative_correction: rydberg_relative_correction(delta),
            lamb_correction_factor: lamb_correction_factor(delta),
            lamb_relative_deviation: lamb_relative_deviation(delta),
            z,
            levels,
        },
        rows,
        warnings,
        converged: true,
    })
}

fn star_parameters(p: &Params) -> StarParameters {
    let mut s = StarParameters::default();
    if let Some(v) = &p.label {
        s.label = v.clone();
    }
    if let Some(v) = p.radius_cm {
        s.radius = v;
    }
    if let Some(v) = p.neutrons {
        s.particle_count = v;
    }
    if let Some(v) = p.micro_length_cm {
        s.micro_length = v;
    }
    s.delta_override = p.delta;
    s
}

const STAR_COLUMNS: [&str; 15] = [
    "label",
    "radius_cm",
    "neutrons",
    "micro_length_cm",
    "delta_source",
    "delta",
    "derived_delta",
    "delta_squared",
    "amplification",
    "log10_delta",
    "log10_delta_squared",
    "log10_amplification",
    "order_delta",
    "order_delta_squared",
    "order_amplification",
];

fn star_row(r: &EstimateReport) -> Vec<Cell> {
    let source = match r.delta_source {
        fquant::coherence::DeltaSource::Derived => "derived",
        fquant::coherence::DeltaSource::Override => "override",
    };
    vec![
        r.inputs.label.as_str().into(),
        r.inputs.radius.into(),
        r.inputs.particle_count.into(),
        r.inputs.micro_length.into(),
        source.into(),
        r.delta.value().into(),
        r.derived_delta.value().into(),
        r.delta_squared.into(),
        r.amplification.into(),
        r.log10_delta.into(),
        r.log10_delta_squared.into(),
        r.log10_amplification.into(),
        r.order_delta.into(),
        r.order_delta_squared.into(),
        r.order_amplification.into(),
    ]
}

fn star(config: &RunConfig) -> Result<Output<EstimateReport>, CliError> {
    let report = estimate(&star_parameters(config.params())).map_err(compute("star"))?;
    let mut rows = Rows::new(STAR_COLUMNS.to_vec());
    rows.push(star_row(&report));
    Ok(Output {
        results: report,
        rows,
        warnings: Vec::new(),
        converged: true,
    })
}

#[derive(Serialize)]
struct SweepEntry {
    index: usize,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<EstimateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepOut {
    vary: Vary,
    entries: Vec<SweepEntry>,
}

fn run_sweep(config: &RunConfig) -> Result<Output<SweepOut>, CliError> {
    let p = config.params();
    let vary = p.vary.expect("validated");
    let values = p.values.clone().expect("validated");
    let parameter = match vary {
        Vary::Radius => SweepParameter::Radius,
        Vary::Neutrons => SweepParameter::ParticleCount,
        Vary::MicroLength => SweepParameter::MicroLength,
        Vary::Delta => SweepParameter::Delta,
    };
    let base = star_parameters(p);
    let mut warnings = Vec::new();
    let mut header = vec!["index", "value"];
    header.extend(STAR_COLUMNS);
    header.push("error");
    let mut rows = Rows::new(header);
    let entries: Vec<SweepEntry> = sweep(&base, parameter, &values)
        .into_iter()
        .zip(&values)
        .enumerate()
        .map(|(index, (outcome, &value))| match outcome {
            Ok(report) => {
                let mut row = vec![index.into(), value.into()];
                row.extend(star_row(&report));
                row.push(Cell::Empty);
                rows.push(row);
                SweepEntry { index, value, report: Some(report), error: None }
            }
            Err(e) => {
                warnings.push(format!("sweep entry {index} ({value:e}): {e}"));
                let mut row = vec![index.into(), value.into()];
                row.extend(std::iter::repeat_n(Cell::Empty, STAR_COLUMNS.len()));
                row.push(e.to_string().into());
                rows.push(row);
                SweepEntry { index, value, report: None, error: Some(e.to_string()) }
            }
        })
        .collect();
    Ok(Output {
        results: SweepOut { vary, entries },
        rows,
        warnings,
        converged: true,
    })
}
