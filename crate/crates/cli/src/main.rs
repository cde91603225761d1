#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use kamstab::dynamics::{integrate, IntegrateOptions};
use kamstab::dynamics::{jacobi_constant, PhaseState};
use kamstab::equilibria::{refine_equilibrium, series_point_l4, triangular_point_full, Branch};
use kamstab::kam::{self, CriticalMassSet, DeterminantMode, Drag};
use kamstab::linear::{self, FrequencyPair, GVariant};
use kamstab::normal_form::{moser_divisor_check, normal_form_abc, Variant};
use kamstab::params::{parse_config, ParamOverrides, DEFAULT_CD};
use kamstab::report::{self, format_sig, json_number, Axis, SweepSpec, Table};
use kamstab::{Error, SystemParams};

#[derive(Parser)]
#[command(name = "kamstab", version, about = "Stability of triangular points with radiation, drag and oblateness")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Mass ratio.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Mass-reduction factor of the radiating primary.
    #[arg(long, global = true)]
    q1: Option<f64>,
    /// Oblateness coefficient of the secondary.
    #[arg(long, global = true)]
    a2: Option<f64>,
    /// Dimensionless speed of light.
    #[arg(long, global = true)]
    cd: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance for resonance and degeneracy checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// key=value file with mu, q1, a2, cd; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    L4,
    L5,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Full,
    Series,
    Refined,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Verbatim,
    SymmetricA13,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Verbatim => Variant::Verbatim,
            VariantArg::SymmetricA13 => Variant::SymmetricA13,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ClosedForm,
    NormalForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rk4,
    Dopri5,
}

#[derive(Subcommand)]
enum Command {
    /// Position of a triangular equilibrium.
    EqPoint {
        #[arg(long, value_enum, default_value_t = BranchArg::L4)]
        branch: BranchArg,
        #[arg(long, value_enum, default_value_t = FormulaArg::Full)]
        formula: FormulaArg,
    },
    /// Long- and short-period frequencies.
    Frequencies {
        /// Use the roots of the characteristic quartic instead of the relations.
        #[arg(long)]
        quartic: bool,
    },
    /// Linear-stability boundary.
    MuC0,
    /// Fourth-order normal-form coefficients A, B, C.
    NormalForm {
        #[arg(long, value_enum, default_value_t = VariantArg::Verbatim)]
        variant: VariantArg,
        #[arg(long, requires = "omega2")]
        omega1: Option<f64>,
        #[arg(long, requires = "omega1")]
        omega2: Option<f64>,
    },
    /// Linear-stability, resonance and degeneracy mass ratios.
    CriticalMasses,
    /// KAM determinant and its parts.
    KamD {
        #[arg(long, value_enum, default_value_t = ModeArg::ClosedForm)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Verbatim)]
        variant: VariantArg,
        /// Evaluate only the classical part at this value of u^2.
        #[arg(long)]
        u_sq: Option<f64>,
    },
    /// Stability verdict for the given mass ratio.
    Classify,
    /// Trajectory from an initial state.
    Integrate {
        #[arg(long)]
        t_final: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Dopri5)]
        method: MethodArg,
        /// Fixed step (rk4) or initial step (dopri5).
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        #[arg(long, default_value_t = 1e-10)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-12)]
        atol: f64,
        /// Sampling interval of the output.
        #[arg(long)]
        every: Option<f64>,
        /// Initial state; defaults to the refined L4 point at rest.
        #[arg(long, num_args = 4, value_names = ["X", "Y", "VX", "VY"], allow_hyphen_values = true)]
        state: Option<Vec<f64>>,
        /// Displacement added to the initial position.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dx: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dy: f64,
    },
    /// Critical masses against the radiation factor.
    Table1,
    /// Critical masses against the oblateness.
    Table2,
    /// Grid of critical masses and verdicts.
    Region {
        /// name:min:max:count with name in {mu, q1, a2}; one or two axes.
        #[arg(long = "axis", required = true, num_args = 1)]
        axes: Vec<String>,
    },
    /// Inconsistencies in the source formulas and how they are handled (JSON).
    Errata,
}

enum CliError {
    Core(Error),
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_singularity() => 3,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(Error::ResonancePole { u_sq }) => {
                let factor = if (4.0 * u_sq - 1.0).abs() < (25.0 * u_sq - 4.0).abs() {
                    "(4*u^2-1)"
                } else {
                    "(25*u^2-4)"
                };
                format!("singular denominator: factor {factor} vanishes at u^2 = {u_sq}")
            }
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) => m.clone(),
            CliError::Io { path, source } => format!("{}: {source}", path.display()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Output cell.
enum Cell {
    Num(f64),
    Text(String),
    Flag(bool),
}

/// Rows of named cells; rendered as CSV or as a JSON array of objects.
struct Records {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Records {
    fn single(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self { columns, rows: vec![row] }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(x) => format_sig(*x),
                            Cell::Text(s) => s.clone(),
                            Cell::Flag(b) => b.to_string(),
                        })
                        .collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut m = Map::new();
                        for (k, c) in self.columns.iter().zip(row) {
                            let v = match c {
                                Cell::Num(x) => json_number(*x),
                                Cell::Text(s) => Value::String(s.clone()),
                                Cell::Flag(b) => Value::Bool(*b),
                            };
                            m.insert(k.clone(), v);
                        }
                        Value::Object(m)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

fn table_output(t: &Table, format: Format) -> String {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json() + "\n",
    }
}

fn overrides(g: &Global) -> CliResult<ParamOverrides> {
    let file = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            parse_config(&text)?
        }
        None => ParamOverrides::default(),
    };
    Ok(file.merged_with(ParamOverrides { mu: g.mu, q1: g.q1, a2: g.a2, cd: g.cd }))
}

fn radiation_set(o: &ParamOverrides) -> CliResult<CriticalMassSet> {
    // validate the non-mu inputs with a placeholder mass ratio
    let probe = SystemParams::new(0.01, o.q1.unwrap_or(1.0), o.a2.unwrap_or(0.0), o.cd.unwrap_or(DEFAULT_CD))?;
    Ok(CriticalMassSet::new(probe.eps, probe.a2, Drag::FromRadiation { c_d: probe.c_d }))
}

fn parse_axis(text: &str) -> CliResult<Axis> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Usage(format!("axis {text:?}: expected name:min:max:count"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let param = parts[0].parse()?;
    let min = parts[1].parse().map_err(|_| bad())?;
    let max = parts[2].parse().map_err(|_| bad())?;
    let count = parts[3].parse().map_err(|_| bad())?;
    Ok(Axis::new(param, min, max, count))
}

fn frequency_records(f: &FrequencyPair, disc: f64) -> Records {
    let resonance = match f.resonance {
        Some(linear::Resonance::TwoToOne) => "2:1",
        Some(linear::Resonance::ThreeToOne) => "3:1",
        None => "none",
    };
    Records::single(vec![
        ("omega1", Cell::Num(f.omega1)),
        ("omega2", Cell::Num(f.omega2)),
        ("u", Cell::Num(f.u)),
        ("discriminant", Cell::Num(disc)),
        ("boundary", Cell::Flag(f.boundary)),
        ("resonance", Cell::Text(resonance.into())),
    ])
}

fn run(cli: Cli) -> CliResult<String> {
    let g = &cli.global;
    let o = overrides(g)?;
    let fmt = g.format;
    let tol = g.tol.unwrap_or(kam::DEFAULT_CLASSIFY_TOL);
    if !(tol >= 0.0) {
        return Err(CliError::Usage(format!("tol = {tol} must be non-negative")));
    }
    let params = || -> CliResult<SystemParams> { Ok(o.resolve()?) };

    let out = match cli.command {
        Command::EqPoint { branch, formula } => {
            let p = params()?;
            let branch = match branch {
                BranchArg::L4 => Branch::L4,
                BranchArg::L5 => Branch::L5,
            };
            let point = match formula {
                FormulaArg::Full => triangular_point_full(&p, branch)?,
                FormulaArg::Series => {
                    let s = series_point_l4(&p).point();
                    if branch == Branch::L5 { s.mirrored() } else { s }
                }
                FormulaArg::Refined => refine_equilibrium(&triangular_point_full(&p, branch)?, &p, 1e-14)?,
            };
            let (rx, ry) = kamstab::equilibria::equilibrium_residual(&point, &p)?;
            Records::single(vec![
                ("x", Cell::Num(point.x)),
                ("y", Cell::Num(point.y)),
                ("residual_x", Cell::Num(rx)),
                ("residual_y", Cell::Num(ry)),
            ])
            .render(fmt)
        }
        Command::Frequencies { quartic } => {
            let p = params()?;
            let f = if quartic {
                linear::quartic_frequencies(&p, GVariant::Corrected)?
            } else {
                linear::frequencies(&p)?
            };
            frequency_records(&f, linear::discriminant(&p)).render(fmt)
        }
        Command::MuC0 => {
            let s = radiation_set(&o)?;
            Records::single(vec![
                ("eps", Cell::Num(s.eps)),
                ("a2", Cell::Num(s.a2)),
                ("w1", Cell::Num(s.mu_c0.w1)),
                ("mu_c0", Cell::Num(s.mu_c0.value)),
            ])
            .render(fmt)
        }
        Command::NormalForm { variant, omega1, omega2 } => {
            let p = params()?;
            let f = match (omega1, omega2) {
                (Some(a), Some(b)) => FrequencyPair::new(a, b),
                _ => linear::frequencies(&p)?,
            };
            let nf = normal_form_abc(&p, &f, variant.into())?;
            let moser = moser_divisor_check(&f, tol);
            Records::single(vec![
                ("omega1", Cell::Num(f.omega1)),
                ("omega2", Cell::Num(f.omega2)),
                ("a", Cell::Num(nf.a)),
                ("b", Cell::Num(nf.b)),
                ("c", Cell::Num(nf.c)),
                ("determinant", Cell::Num(nf.determinant(&f))),
                ("min_combination", Cell::Num(moser.min_combination)),
                ("resonant", Cell::Flag(!moser.resonant.is_empty())),
            ])
            .render(fmt)
        }
        Command::CriticalMasses => {
            let s = radiation_set(&o)?;
            let rows = [("mu_c0", s.mu_c0), ("mu_c1", s.mu_c1), ("mu_c2", s.mu_c2), ("mu_c3", s.mu_c3)]
                .into_iter()
                .map(|(n, c)| vec![Cell::Text(n.into()), Cell::Num(c.value), Cell::Num(c.w1), Cell::Flag(c.applicable)])
                .collect();
            Records { columns: vec!["name".into(), "value".into(), "w1".into(), "applicable".into()], rows }.render(fmt)
        }
        Command::KamD { mode, variant, u_sq } => {
            if let Some(u_sq) = u_sq {
                let d = kam::d_classical(u_sq)?;
                Records::single(vec![("u_sq", Cell::Num(u_sq)), ("d_classical", Cell::Num(d))]).render(fmt)
            } else {
                let p = params()?;
                let f = linear::frequencies(&p)?;
                let mode = match mode {
                    ModeArg::ClosedForm => DeterminantMode::ClosedForm,
                    ModeArg::NormalForm => DeterminantMode::NormalForm(variant.into()),
                };
                let parts = kam::kam_determinant(&p, &f, mode)?;
                let mut fields = vec![("u_sq", Cell::Num(parts.u_sq)), ("d_classical", Cell::Num(parts.d_classical))];
                for (name, v) in ["d2", "d3", "d4", "d5", "d6", "d7"].into_iter().zip(parts.d) {
                    fields.push((name, Cell::Num(v)));
                }
                fields.push(("total", Cell::Num(parts.total)));
                Records::single(fields).render(fmt)
            }
        }
        Command::Classify => {
            let p = params()?;
            let v = kam::classify(p.mu, &p, tol);
            Records::single(vec![
                ("mu", Cell::Num(p.mu)),
                ("verdict", Cell::Num(v.code() as f64)),
                ("label", Cell::Text(v.label().into())),
            ])
            .render(fmt)
        }
        Command::Integrate { t_final, method, step, rtol, atol, every, state, dx, dy } => {
            let p = params()?;
            let base = match state {
                Some(s) => PhaseState::new(0.0, s[0], s[1], s[2], s[3]),
                None => {
                    let l4 = refine_equilibrium(&triangular_point_full(&p, Branch::L4)?, &p, 1e-14)?;
                    PhaseState::at_rest(l4.x, l4.y)
                }
            };
            let start = PhaseState::new(0.0, base.x + dx, base.y + dy, base.vx, base.vy);
            let mut opts = match method {
                MethodArg::Rk4 => IntegrateOptions::rk4(step),
                MethodArg::Dopri5 => IntegrateOptions { step, ..IntegrateOptions::dopri5(rtol, atol) },
            };
            if let Some(e) = every {
                opts = opts.sampled(e);
            }
            let traj = integrate(&start, &p, t_final, &opts)?;
            let mut t = Table::new(&["t", "x", "y", "vx", "vy", "jacobi"]);
            for s in &traj.states {
                t.push(vec![s.t, s.x, s.y, s.vx, s.vy, jacobi_constant(s, &p)]);
            }
            table_output(&t, fmt)
        }
        Command::Table1 => table_output(&report::table1(), fmt),
        Command::Table2 => table_output(&report::table2(), fmt),
        Command::Region { axes } => {
            let axes = axes.iter().map(|a| parse_axis(a)).collect::<CliResult<Vec<_>>>()?;
            let mut spec = SweepSpec::new(axes);
            spec.mu = o.mu;
            spec.q1 = o.q1.unwrap_or(1.0);
            spec.a2 = o.a2.unwrap_or(0.0);
            spec.c_d = o.cd.unwrap_or(DEFAULT_CD);
            spec.tol = tol;
            table_output(&report::region_sweep(&spec)?, fmt)
        }
        Command::Errata => report::errata_json() + "\n",
    };
    Ok(out)
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    match run(cli).and_then(|text| emit(&text, out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kamstab: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
