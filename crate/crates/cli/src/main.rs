//! seqdim: exact solution-space dimensions of linear difference equations.
//!
//! Subcommands: `dim` (exact dimension, periodic coefficients), `unfold`
//! (inspect the constant-coefficient system), `construct` (gadget
//! equations), `interlace`, `oracle` (brute-force window estimates), and
//! `gallery` (undecidability scenarios around a user-supplied sequence
//! program).
//!
//! Exit codes: 0 success, 1 parse error, 2 domain error (non-periodic
//! coefficients, invalid parameters, invalid H), 3 sequence-oracle
//! subprocess error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seqdim::equation::interlace;
use seqdim::error::{DimensionError, EvalError, FormatError, UnfoldError};
use seqdim::format::{write_equation, EquationReader};
use seqdim::gadgets::{
    build_ecirc, build_ed, build_einf, build_order_r_dim_d, build_signal, build_thm4_finite,
    build_thm4_infinite, DimSpec,
};
use seqdim::matrix::RatMatrix;
use seqdim::oracle::{estimate_dimension, OracleConfig, OracleEstimate};
use seqdim::pencil::pencil_from_unfolded;
use seqdim::rat::format_rat;
use seqdim::sequence::OracleSequence;
use seqdim::subprocess::{command_oracle, default_timeout};
use seqdim::unfold::{choose_h, unfold};
use seqdim::{solution_space_dimension, DifferenceEquation, Dimension, Method};

#[derive(Parser)]
#[command(
    name = "seqdim",
    version,
    about = "Solution-space dimensions of linear difference equations over two-sided rational sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact dimension (requires purely periodic coefficients)
    Dim {
        eqfile: PathBuf,
        /// Exact route to run
        #[arg(long, value_enum, default_value_t = MethodArg::Pencil)]
        method: MethodArg,
        /// Emit a fixed-schema JSON object instead of text
        #[arg(long)]
        json: bool,
    },
    /// Print H, the matrices A0 and A1, and det P(t)
    Unfold {
        eqfile: PathBuf,
        /// Override the block size (must exceed the order and be a multiple
        /// of the coefficient period lcm)
        #[arg(long = "H")]
        h: Option<usize>,
    },
    /// Build a gadget equation and write it to a file
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Interlace two equations: even-indexed subsequences solve the first,
    /// odd-indexed the second
    Interlace {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Estimate the dimension with the brute-force window oracle
    Oracle {
        eqfile: PathBuf,
        /// Command for oracle-backed coefficients (overrides the file)
        #[arg(long)]
        oracle_cmd: Option<String>,
        #[command(flatten)]
        knobs: OracleKnobs,
    },
    /// Build an undecidability scenario around a sequence program, run the
    /// window oracle, and relate the estimate to the explored prefix
    #[command(subcommand)]
    Gallery(GalleryCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Pencil,
    Groebner,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Pencil => Method::Pencil,
            MethodArg::Groebner => Method::Groebner,
            MethodArg::Both => Method::Both,
        }
    }
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Pencil => "pencil",
            MethodArg::Groebner => "groebner",
            MethodArg::Both => "both",
        }
    }
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Order-0 equation with solution space of dimension d
    Ed {
        #[arg(long)]
        d: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Order-0 equation with infinite-dimensional solution space
    Einf {
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Order-r equation with only the zero solution
    Ecirc {
        #[arg(long)]
        r: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Order-r equation with solution space of dimension d (d may be "inf")
    OrderDim {
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = parse_dim_spec)]
        d: DimSpec,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// First-order equation with dimension 1 if the program's sequence is
    /// identically zero and 0 otherwise
    Signal {
        #[arg(long)]
        oracle_cmd: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Equation with dimension b if the program's sequence has no nonzero
    /// element and a otherwise (b > a)
    Thm4Finite {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        oracle_cmd: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Equation with dimension b if the program's sequence has no zero
    /// element and infinite dimension otherwise
    Thm4Infinite {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        oracle_cmd: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum GalleryCmd {
    /// The signal equation of the program's sequence
    Signal {
        #[arg(long)]
        oracle_cmd: String,
        #[command(flatten)]
        knobs: OracleKnobs,
    },
    /// Dimension b versus a, decided by whether the sequence has a nonzero
    /// element
    Thm4Finite {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        oracle_cmd: String,
        #[command(flatten)]
        knobs: OracleKnobs,
    },
    /// Dimension b versus infinity, decided by whether the sequence has a
    /// zero element
    Thm4Infinite {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        oracle_cmd: String,
        #[command(flatten)]
        knobs: OracleKnobs,
    },
}

#[derive(Args)]
struct OracleKnobs {
    /// First inner window radius
    #[arg(long)]
    inner: Option<usize>,
    /// Window growth step
    #[arg(long)]
    step: Option<usize>,
    /// Consecutive unchanged values required for stabilization
    #[arg(long)]
    stall: Option<usize>,
    /// Estimate cap
    #[arg(long)]
    cap: Option<usize>,
    /// Per-request subprocess timeout in seconds (default from
    /// SEQDIM_ORACLE_TIMEOUT, else 10)
    #[arg(long)]
    oracle_timeout: Option<f64>,
}

impl OracleKnobs {
    fn config_for(&self, e: &DifferenceEquation) -> OracleConfig {
        let mut cfg = OracleConfig::for_equation(e);
        if let Some(v) = self.inner {
            cfg.inner_start = v;
        }
        if let Some(v) = self.step {
            cfg.outer_step = v;
        }
        if let Some(v) = self.stall {
            cfg.stall = v;
        }
        if let Some(v) = self.cap {
            cfg.cap = v;
        }
        cfg
    }

    fn timeout(&self) -> Duration {
        match self.oracle_timeout {
            Some(secs) if secs > 0.0 => Duration::from_secs_f64(secs),
            _ => default_timeout(),
        }
    }
}

fn parse_dim_spec(s: &str) -> Result<DimSpec, String> {
    match s {
        "inf" | "infinite" | "infinity" => Ok(DimSpec::Infinite),
        other => other
            .parse::<usize>()
            .map(DimSpec::Finite)
            .map_err(|_| format!("expected a nonnegative integer or \"inf\", got {other:?}")),
    }
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
    fn oracle(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::MissingOracleCommand | FormatError::UnserializableOracle { .. } => {
                Failure::domain(e.to_string())
            }
            other => Failure::parse(other.to_string()),
        }
    }
}

impl From<UnfoldError> for Failure {
    fn from(e: UnfoldError) -> Self {
        Failure::domain(e.to_string())
    }
}

impl From<DimensionError> for Failure {
    fn from(e: DimensionError) -> Self {
        match e {
            DimensionError::NonPeriodicCoefficient { .. } => Failure::domain(e.to_string()),
            DimensionError::RouteMismatch { .. } => Failure::internal(e.to_string()),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::oracle(e.to_string())
    }
}

impl From<seqdim::BuildError> for Failure {
    fn from(e: seqdim::BuildError) -> Self {
        Failure::domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Dim {
            eqfile,
            method,
            json,
        } => cmd_dim(&eqfile, method, json),
        Command::Unfold { eqfile, h } => cmd_unfold(&eqfile, h),
        Command::Construct(c) => cmd_construct(c),
        Command::Interlace {
            first,
            second,
            output,
        } => cmd_interlace(&first, &second, &output),
        Command::Oracle {
            eqfile,
            oracle_cmd,
            knobs,
        } => cmd_oracle(&eqfile, oracle_cmd, &knobs),
        Command::Gallery(g) => cmd_gallery(g),
    }
}

fn read_eq(
    path: &PathBuf,
    oracle_cmd: Option<String>,
    timeout: Duration,
) -> Result<DifferenceEquation, Failure> {
    let mut reader = EquationReader::new().with_command(oracle_cmd);
    reader.timeout = timeout;
    Ok(reader.read(path)?)
}

fn cmd_dim(eqfile: &PathBuf, method: MethodArg, json_out: bool) -> Result<(), Failure> {
    let e = read_eq(eqfile, None, default_timeout())?;
    let dim = solution_space_dimension(&e, method.into())?;
    if json_out {
        let h = choose_h(&e)?;
        let dim_value = match dim {
            Dimension::Finite(k) => json!(k),
            Dimension::Infinite => json!("infinite"),
        };
        let obj = json!({
            "H": h,
            "dimension": dim_value,
            "method": method.name(),
        });
        println!("{}", serde_json::to_string(&obj).expect("JSON output"));
    } else {
        println!("dimension: {dim}");
    }
    Ok(())
}

fn format_matrix(m: &RatMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rat).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let body = row
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join(" ");
            format!("[ {body} ]")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_unfold(eqfile: &PathBuf, h_flag: Option<usize>) -> Result<(), Failure> {
    let e = read_eq(eqfile, None, default_timeout())?;
    let h = match h_flag {
        Some(h) => h,
        None => choose_h(&e)?,
    };
    let sys = unfold(&e, h)?;
    let pencil = pencil_from_unfolded(&sys);
    println!("H: {}", sys.h);
    println!("A0:\n{}", format_matrix(&sys.a0));
    println!("A1:\n{}", format_matrix(&sys.a1));
    println!("det: {}", pencil.det());
    Ok(())
}

fn cmd_construct(cmd: ConstructCmd) -> Result<(), Failure> {
    let timeout = default_timeout();
    let (e, output) = match cmd {
        ConstructCmd::Ed { d, output } => (build_ed(d), output),
        ConstructCmd::Einf { output } => (build_einf(), output),
        ConstructCmd::Ecirc { r, output } => (build_ecirc(r)?, output),
        ConstructCmd::OrderDim { r, d, output } => (build_order_r_dim_d(r, d)?, output),
        ConstructCmd::Signal { oracle_cmd, output } => {
            (build_signal(command_oracle(oracle_cmd, timeout)), output)
        }
        ConstructCmd::Thm4Finite {
            a,
            b,
            oracle_cmd,
            output,
        } => (
            build_thm4_finite(a, b, command_oracle(oracle_cmd, timeout))?,
            output,
        ),
        ConstructCmd::Thm4Infinite {
            b,
            oracle_cmd,
            output,
        } => (
            build_thm4_infinite(b, command_oracle(oracle_cmd, timeout)),
            output,
        ),
    };
    write_equation(&e, output)?;
    Ok(())
}

fn cmd_interlace(first: &PathBuf, second: &PathBuf, output: &PathBuf) -> Result<(), Failure> {
    let timeout = default_timeout();
    let e1 = read_eq(first, None, timeout)?;
    let e2 = read_eq(second, None, timeout)?;
    write_equation(&interlace(&e1, &e2), output)?;
    Ok(())
}

fn print_estimate(est: &OracleEstimate, periodic: bool) {
    println!("value {}, {}", est.value, est.status);
    println!("inner radius: {}", est.inner_radius);
    println!("outer radius: {}", est.outer_radius);
    println!("cap: {}", est.cap);
    if !periodic {
        println!(
            "note: heuristic estimate; no finite window certifies the dimension for non-periodic coefficients"
        );
    }
}

fn cmd_oracle(
    eqfile: &PathBuf,
    oracle_cmd: Option<String>,
    knobs: &OracleKnobs,
) -> Result<(), Failure> {
    let e = read_eq(eqfile, oracle_cmd, knobs.timeout())?;
    let cfg = knobs.config_for(&e);
    let est = estimate_dimension(&e, &cfg)?;
    print_estimate(&est, e.is_purely_periodic());
    Ok(())
}

fn cmd_gallery(cmd: GalleryCmd) -> Result<(), Failure> {
    match cmd {
        GalleryCmd::Signal { oracle_cmd, knobs } => {
            let v = command_oracle(oracle_cmd, knobs.timeout());
            let e = build_signal(v.clone());
            run_gallery(
                "signal",
                &e,
                &v,
                &knobs,
                |found_nonzero, _| match found_nonzero {
                    Some(n) => (
                        format!("nonzero found at n={n}"),
                        "0 (the signal equation has only the zero solution)".to_string(),
                    ),
                    None => (
                        "no nonzero element of v found in the explored prefix".to_string(),
                        "1 (constant sequences solve the signal equation)".to_string(),
                    ),
                },
            )
        }
        GalleryCmd::Thm4Finite {
            a,
            b,
            oracle_cmd,
            knobs,
        } => {
            let v = command_oracle(oracle_cmd, knobs.timeout());
            let e = build_thm4_finite(a, b, v.clone())?;
            run_gallery(
                "thm4-finite",
                &e,
                &v,
                &knobs,
                |found_nonzero, _| match found_nonzero {
                    Some(n) => (format!("nonzero found at n={n}"), format!("{a} (= a)")),
                    None => (
                        "no nonzero element of v found in the explored prefix".to_string(),
                        format!("{b} (= b)"),
                    ),
                },
            )
        }
        GalleryCmd::Thm4Infinite {
            b,
            oracle_cmd,
            knobs,
        } => {
            let v = command_oracle(oracle_cmd, knobs.timeout());
            let e = build_thm4_infinite(b, v.clone());
            run_gallery(
                "thm4-infinite",
                &e,
                &v,
                &knobs,
                |_, found_zero| match found_zero {
                    Some(n) => (
                        format!("zero found at n={n}"),
                        "infinite (window estimates grow without bound)".to_string(),
                    ),
                    None => (
                        "no zero element of v found in the explored prefix".to_string(),
                        format!("{b} (= b)"),
                    ),
                },
            )
        }
    }
}

fn run_gallery(
    scenario: &str,
    e: &DifferenceEquation,
    v: &OracleSequence,
    knobs: &OracleKnobs,
    narrate: impl Fn(Option<i64>, Option<i64>) -> (String, String),
) -> Result<(), Failure> {
    let cfg = knobs.config_for(e);
    println!("scenario: {scenario}");
    let est = estimate_dimension(e, &cfg)?;
    print_estimate(&est, false);
    match v.explored_max() {
        Some(n) => println!("explored prefix: v(0..={n})"),
        None => println!("explored prefix: empty"),
    }
    let (finding, expected) = narrate(v.first_nonzero_seen(), v.first_zero_seen());
    println!("{finding}");
    println!("expected dimension given the explored prefix: {expected}");
    Ok(())
}
