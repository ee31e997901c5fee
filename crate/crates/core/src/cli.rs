//! Command-line front end of the `effcond` binary.
//!
//! Exit codes: 0 when every row succeeded, 1 for usage and I/O errors, 2
//! when at least one computation failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::closed_forms::FormulaId;
use crate::error::Error;
use crate::lattice::LatticeKind;
use crate::rayleigh::{SolveMethod, DEFAULT_ITERATION_TOL, DEFAULT_MAX_ITER, DEFAULT_TRUNCATION};
use crate::series::{expand_effective_series, required_sum_order, DEFAULT_SERIES_ORDER};
use crate::sums::build_sum_table;
use crate::sweep::{
    build_lattice, render_csv, run_sweep, write_csv, write_plot_script, Contrast, Method, RowOutcome,
    SweepConfig, DEFAULT_SUM_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED_ROWS: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "effcond",
    version,
    about = "Effective conductivity of doubly periodic fibre composites"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Tabulate the lattice sums S_2 ..= S_max.
    Sums {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 26)]
        max_order: u32,
        #[arg(long, default_value_t = DEFAULT_SUM_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the truncated Rayleigh system at one concentration.
    Solve {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        contrast: ContrastArgs,
        #[arg(long)]
        f: f64,
        #[command(flatten)]
        numerics: NumericArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the series at one concentration, or export its coefficients.
    Series {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        contrast: ContrastArgs,
        #[arg(long)]
        f: Option<f64>,
        /// Highest power of f kept.
        #[arg(long, default_value_t = DEFAULT_SERIES_ORDER)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_SUM_TOLERANCE)]
        sum_tol: f64,
        /// Print the coefficient table `j,k,re,im` instead.
        #[arg(long)]
        coefficients: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a closed-form formula at one concentration.
    ClosedForm {
        #[arg(long, value_parser = parse_formula)]
        formula: FormulaId,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        contrast: ContrastArgs,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate several methods over a concentration grid.
    Compare {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        contrast: ContrastArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_method)]
        methods: Vec<Method>,
        #[command(flatten)]
        numerics: NumericArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate one method over a concentration grid.
    Sweep {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        contrast: ContrastArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[command(flatten)]
        numerics: NumericArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LatticeName {
    Square,
    #[value(alias = "hexagonal")]
    Hex,
    #[value(alias = "rectangular")]
    Rect,
    General,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[arg(long, value_enum)]
    lattice: Option<LatticeName>,
    /// Side ratio of a rectangular cell.
    #[arg(long)]
    aspect: Option<f64>,
    /// Period ratio `re,im` of a general lattice.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
}

#[derive(Args, Debug)]
struct ContrastArgs {
    /// Inclusion/matrix conductivity ratio; `inf` for perfect conductors.
    #[arg(long, conflicts_with = "rho", allow_negative_numbers = true)]
    sigma: Option<f64>,
    /// Contrast parameter (σ-1)/(σ+1).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
}

#[derive(Args, Debug)]
struct RangeArgs {
    #[arg(long)]
    f_min: f64,
    #[arg(long)]
    f_max: f64,
    #[arg(long, default_value_t = 20)]
    steps: usize,
}

#[derive(Args, Debug)]
struct NumericArgs {
    /// Truncation order L of the Rayleigh system.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: usize,
    #[arg(long, default_value_t = DEFAULT_SERIES_ORDER)]
    series_order: usize,
    #[arg(long, default_value_t = DEFAULT_SUM_TOLERANCE)]
    sum_tol: f64,
    /// Solve by successive approximations instead of LU.
    #[arg(long)]
    iterative: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_ITERATION_TOL)]
    iter_tol: f64,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_formula(s: &str) -> std::result::Result<FormulaId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumsConfig {
    pub lattice: LatticeKind,
    pub max_order: u32,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientsConfig {
    pub lattice: LatticeKind,
    pub order: usize,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Sums(SumsConfig),
    Coefficients(CoefficientsConfig),
    Sweep(SweepConfig),
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(kind, msg)
}

impl LatticeArgs {
    fn resolve(&self, default: Option<LatticeName>) -> Result<LatticeKind, clap::Error> {
        let name = self
            .lattice
            .or(default)
            .ok_or_else(|| usage(ErrorKind::MissingRequiredArgument, "--lattice is required"))?;
        let kind = match (name, self.aspect, &self.tau) {
            (LatticeName::Square, None, None) => LatticeKind::Square,
            (LatticeName::Hex, None, None) => LatticeKind::Hexagonal,
            (LatticeName::Rect, Some(a), None) => LatticeKind::Rectangular(a),
            (LatticeName::Rect, None, _) => {
                return Err(usage(ErrorKind::MissingRequiredArgument, "--lattice rect needs --aspect"))
            }
            (LatticeName::General, None, Some(t)) => LatticeKind::General(parse_tau(t)?),
            (LatticeName::General, _, None) => {
                return Err(usage(ErrorKind::MissingRequiredArgument, "--lattice general needs --tau"))
            }
            _ => {
                return Err(usage(
                    ErrorKind::ArgumentConflict,
                    "--aspect goes with rect and --tau with general only",
                ))
            }
        };
        build_lattice(kind).map_err(|e| usage(ErrorKind::ValueValidation, e))?;
        Ok(kind)
    }
}

fn parse_tau(text: &str) -> Result<Complex64, clap::Error> {
    let bad = || usage(ErrorKind::ValueValidation, format!("--tau expects 're,im', got '{text}'"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

impl ContrastArgs {
    fn resolve(&self, default: Option<Contrast>) -> Result<Contrast, clap::Error> {
        let c = match (self.sigma, self.rho) {
            (Some(s), None) => Contrast::Ratio(s),
            (None, Some(r)) => Contrast::Rho(r),
            (None, None) => default.ok_or_else(|| {
                usage(ErrorKind::MissingRequiredArgument, "one of --sigma or --rho is required")
            })?,
            (Some(_), Some(_)) => {
                return Err(usage(ErrorKind::ArgumentConflict, "--sigma and --rho are exclusive"))
            }
        };
        c.rho().map_err(|e| usage(ErrorKind::ValueValidation, e))?;
        Ok(c)
    }
}

impl NumericArgs {
    fn apply(&self, config: &mut SweepConfig) {
        config.truncation = self.truncation;
        config.series_order = self.series_order;
        config.sum_tolerance = self.sum_tol;
        config.solve = if self.iterative {
            SolveMethod::Iterative {
                max_iter: self.max_iter,
                tol: self.iter_tol,
            }
        } else {
            SolveMethod::Direct
        };
    }
}

fn grid_config(
    lattice: &LatticeArgs,
    contrast: &ContrastArgs,
    range: &RangeArgs,
    methods: Vec<Method>,
    numerics: &NumericArgs,
    output: Option<PathBuf>,
) -> Result<SweepConfig, clap::Error> {
    let mut config = SweepConfig::point(lattice.resolve(None)?, methods[0], contrast.resolve(None)?, range.f_min);
    config.methods = methods;
    config.f_max = range.f_max;
    config.steps = range.steps;
    config.output = output;
    numerics.apply(&mut config);
    Ok(config)
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let command = match cli.command {
        Sub::Sums {
            lattice,
            max_order,
            tol,
            output,
        } => Command::Sums(SumsConfig {
            lattice: lattice.resolve(None)?,
            max_order,
            tolerance: tol,
            output,
        }),
        Sub::Solve {
            lattice,
            contrast,
            f,
            numerics,
            output,
        } => {
            let mut c = SweepConfig::point(lattice.resolve(None)?, Method::Solver, contrast.resolve(None)?, f);
            numerics.apply(&mut c);
            c.output = output;
            Command::Sweep(c)
        }
        Sub::Series {
            lattice,
            contrast,
            f,
            order,
            sum_tol,
            coefficients,
            output,
        } => {
            let lattice = lattice.resolve(None)?;
            if coefficients {
                Command::Coefficients(CoefficientsConfig {
                    lattice,
                    order,
                    tolerance: sum_tol,
                    output,
                })
            } else {
                let f = f.ok_or_else(|| {
                    usage(ErrorKind::MissingRequiredArgument, "series needs --f or --coefficients")
                })?;
                let mut c = SweepConfig::point(lattice, Method::Series, contrast.resolve(None)?, f);
                c.series_order = order;
                c.sum_tolerance = sum_tol;
                c.output = output;
                Command::Sweep(c)
            }
        }
        Sub::ClosedForm {
            formula,
            lattice,
            contrast,
            f,
            output,
        } => {
            let mut c = SweepConfig::point(
                lattice.resolve(Some(LatticeName::Hex))?,
                Method::Closed(formula),
                contrast.resolve(Some(Contrast::Rho(1.0)))?,
                f,
            );
            c.output = output;
            Command::Sweep(c)
        }
        Sub::Compare {
            lattice,
            contrast,
            range,
            methods,
            numerics,
            output,
        } => Command::Sweep(grid_config(&lattice, &contrast, &range, methods, &numerics, output)?),
        Sub::Sweep {
            lattice,
            contrast,
            range,
            method,
            numerics,
            output,
        } => Command::Sweep(grid_config(&lattice, &contrast, &range, vec![method], &numerics, output)?),
    };
    if let Command::Sweep(c) = &command {
        c.validate().map_err(|e| usage(ErrorKind::ValueValidation, e))?;
    }
    Ok(command)
}

impl SweepConfig {
    /// Arguments of a `compare` invocation that parses back to this
    /// configuration, program name excluded.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["compare".to_string()];
        match self.lattice {
            LatticeKind::Square => args.push("--lattice=square".into()),
            LatticeKind::Hexagonal => args.push("--lattice=hex".into()),
            LatticeKind::Rectangular(a) => {
                args.push("--lattice=rect".into());
                args.push(format!("--aspect={a}"));
            }
            LatticeKind::General(t) => {
                args.push("--lattice=general".into());
                args.push(format!("--tau={},{}", t.re, t.im));
            }
        }
        args.push(match self.contrast {
            Contrast::Ratio(s) => format!("--sigma={s}"),
            Contrast::Rho(r) => format!("--rho={r}"),
        });
        args.push(format!("--f-min={}", self.f_min));
        args.push(format!("--f-max={}", self.f_max));
        args.push(format!("--steps={}", self.steps));
        let names: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        args.push(format!("--methods={}", names.join(",")));
        args.push(format!("--truncation={}", self.truncation));
        args.push(format!("--series-order={}", self.series_order));
        args.push(format!("--sum-tol={}", self.sum_tolerance));
        if let SolveMethod::Iterative { max_iter, tol } = self.solve {
            args.push("--iterative".into());
            args.push(format!("--max-iter={max_iter}"));
            args.push(format!("--iter-tol={tol}"));
        }
        if let Some(path) = &self.output {
            args.push(format!("--output={}", path.display()));
        }
        args
    }
}

fn emit(text: &str, output: &Option<PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match output {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}", Error::io(path, e));
                EXIT_USAGE
            }
        },
        None => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(_) => EXIT_USAGE,
        },
    }
}

fn failure_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Io { .. } => EXIT_USAGE,
        _ => EXIT_FAILED_ROWS,
    }
}

/// Executes a parsed command, writing results and diagnostics to the given
/// streams, and returns the exit code.
pub fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match command {
        Command::Sums(c) => {
            let table = build_lattice(c.lattice).and_then(|l| build_sum_table(&l, c.max_order, c.tolerance));
            match table {
                Ok(t) => {
                    let text = format!("# {}: order real imag accuracy\n{}", c.lattice, t.to_fixture());
                    emit(&text, &c.output, stdout, stderr)
                }
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    failure_code(&e)
                }
            }
        }
        Command::Coefficients(c) => {
            let poly = build_lattice(c.lattice)
                .and_then(|l| build_sum_table(&l, required_sum_order(c.order), c.tolerance))
                .and_then(|t| expand_effective_series(&t, c.order));
            match poly {
                Ok(p) => emit(&p.to_table(), &c.output, stdout, stderr),
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    failure_code(&e)
                }
            }
        }
        Command::Sweep(c) => {
            let rows = match run_sweep(c) {
                Ok(rows) => rows,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return failure_code(&e);
                }
            };
            let mut failed = false;
            for row in &rows {
                if let RowOutcome::Failed { message, .. } = &row.outcome {
                    failed = true;
                    let _ = writeln!(stderr, "f = {}, {}: {message}", row.f, row.method);
                }
            }
            let code = match &c.output {
                Some(path) => match write_csv(&rows, path).and_then(|_| write_plot_script(path)) {
                    Ok(_) => EXIT_OK,
                    Err(e) => {
                        let _ = writeln!(stderr, "error: {e}");
                        return EXIT_USAGE;
                    }
                },
                None => emit(&render_csv(&rows), &None, stdout, stderr),
            };
            if code != EXIT_OK {
                code
            } else if failed {
                EXIT_FAILED_ROWS
            } else {
                EXIT_OK
            }
        }
    }
}

/// Parses and executes; help and version requests exit with 0.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(command) => execute(&command, stdout, stderr),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            }
        }
    }
}
