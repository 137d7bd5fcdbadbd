//! `qphase`: phase distributions, entanglement degree and self-validation
//! from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 input error, 64 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use serde::Serialize;

use qphase::entangle::{entanglement_degree, epsilon_sweep, hadamard_rotated_bell_state, is_maximally_entangled};
use qphase::io::{load_state, load_tolerances, write_joint_csv, write_phase_csv, write_sweep_csv};
use qphase::povm::PhasePovm;
use qphase::qubit_phase::hermitian_phase_distribution;
use qphase::twoqubit::JointPhaseFourier;
use qphase::validation::run_validation;
use qphase::{QuantumState, Sign, Tolerances};

const EXIT_VALIDATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "qphase", version, about = "Quantum phase of one- and two-qubit states")]
struct Cli {
    /// Increase log output on stderr (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    /// JSON file overriding the state-validation tolerances.
    #[arg(long, global = true, value_name = "PATH")]
    tolerances: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the phase distribution P(φ) of a one-qubit state.
    PhaseDist {
        #[command(flatten)]
        input: StateArg,
        /// POVM parameter in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Probabilities of the two eigenphases of the Hermitian phase operator.
    PhaseHerm {
        #[command(flatten)]
        input: StateArg,
    },
    /// Export the cast joint distribution over (φ+, φ-) of a two-qubit state.
    JointDist {
        #[command(flatten)]
        input: StateArg,
        #[command(flatten)]
        gammas: GammaPair,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Entanglement report of a two-qubit state.
    Entanglement {
        #[command(flatten)]
        input: StateArg,
        #[command(flatten)]
        gammas: GammaPair,
    },
    /// Degree of entanglement across the ε family.
    SweepEpsilon {
        /// Number of ε values from 0 to 1 inclusive (at least 2).
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long, default_value = "plus", value_parser = parse_sign)]
        sign: Sign,
        #[command(flatten)]
        gammas: GammaPair,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every invariant suite and print a JSON report.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Show that the degree depends on the local basis: (H x I)|Φ+> is
    /// maximally entangled but has degree 0.
    BasisDependence {
        #[command(flatten)]
        gammas: GammaPair,
    },
}

#[derive(Args)]
struct StateArg {
    /// State file (JSON).
    #[arg(long, value_name = "PATH")]
    state: PathBuf,
}

#[derive(Args)]
struct GammaPair {
    /// POVM parameter for qubit A.
    #[arg(long, default_value_t = 1.0)]
    gamma_a: f64,
    /// POVM parameter for qubit B.
    #[arg(long, default_value_t = 1.0)]
    gamma_b: f64,
}

#[derive(Args)]
struct GridArgs {
    /// Grid points per axis (at least 8).
    #[arg(long, default_value_t = 64)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Print JSON to stdout.
    #[arg(long)]
    json: bool,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: qphase::Error| e.to_string())
}

/// A failure together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qphase: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let tol = match &cli.tolerances {
        Some(path) => load_tolerances(path).map_err(|e| Failure::usage(format!("--tolerances: {e}")))?,
        None => Tolerances::default(),
    };
    match cli.command {
        Command::PhaseDist { input, gamma, grid } => phase_dist(&input, gamma, &grid, &tol),
        Command::PhaseHerm { input } => phase_herm(&input, &tol),
        Command::JointDist { input, gammas, grid } => joint_dist(&input, &gammas, &grid, &tol),
        Command::Entanglement { input, gammas } => entanglement(&input, &gammas, &tol),
        Command::SweepEpsilon {
            steps,
            sign,
            gammas,
            output,
        } => sweep(steps, sign, &gammas, &output),
        Command::Validate { seed } => validate(seed, &tol),
        Command::BasisDependence { gammas } => basis_dependence(&gammas),
    }
}

fn check_gamma(flag: &str, gamma: f64) -> Result<(), Failure> {
    PhasePovm::new(gamma)
        .map(|_| ())
        .map_err(|_| Failure::usage(format!("{flag} must lie in (0, 1], got {gamma}")))
}

fn check_pair(g: &GammaPair) -> Result<(), Failure> {
    check_gamma("--gamma-a", g.gamma_a)?;
    check_gamma("--gamma-b", g.gamma_b)
}

fn check_points(points: usize) -> Result<(), Failure> {
    if points < 8 {
        return Err(Failure::usage(format!("--points must be at least 8, got {points}")));
    }
    Ok(())
}

fn load(input: &StateArg, tol: &Tolerances, qubits: usize) -> Result<QuantumState, Failure> {
    let state = load_state(&input.state, tol).map_err(Failure::input)?;
    if state.qubits() != qubits {
        return Err(Failure::input(format!(
            "{}: expected a {qubits}-qubit state, got {} qubit(s)",
            input.state.display(),
            state.qubits()
        )));
    }
    info!("loaded {}-qubit state from {}", qubits, input.state.display());
    Ok(state)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Failure::input)?;
    text.push('\n');
    to_stdout(text.as_bytes())
}

fn to_stdout(bytes: &[u8]) -> Result<(), Failure> {
    match io::stdout().lock().write_all(bytes) {
        // A closed pipe (`| head`) is the reader's choice, not an error.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

/// Runs `write` against `--out` if given, else stdout when no JSON was requested.
fn emit_csv(
    output: &OutputArgs,
    write: impl FnOnce(&mut dyn Write) -> qphase::Result<()>,
) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w).map_err(Failure::input)?;
            w.flush().map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            info!("wrote {}", path.display());
        }
        None if !output.json => {
            let mut buf = Vec::new();
            write(&mut buf).map_err(Failure::input)?;
            to_stdout(&buf)?;
        }
        None => {}
    }
    Ok(())
}

#[derive(Serialize)]
struct PhaseDistJson<'a> {
    gamma: f64,
    c: qphase::C64,
    dispersion: f64,
    rows: &'a [(f64, f64)],
}

fn phase_dist(input: &StateArg, gamma: f64, grid: &GridArgs, tol: &Tolerances) -> Outcome {
    check_gamma("--gamma", gamma)?;
    check_points(grid.points)?;
    let state = load(input, tol, 1)?;
    let povm = PhasePovm::new(gamma).map_err(Failure::input)?;
    let d = povm.distribution(&state).map_err(Failure::input)?;
    debug!("c = {}", d.c);
    let rows = d.grid(grid.points);
    emit_csv(&grid.output, |w| write_phase_csv(w, &rows))?;
    if grid.output.json {
        print_json(&PhaseDistJson {
            gamma,
            c: d.c,
            dispersion: d.dispersion().value(),
            rows: &rows,
        })?;
    }
    Ok(0)
}

fn phase_herm(input: &StateArg, tol: &Tolerances) -> Outcome {
    let state = load(input, tol, 1)?;
    let d = hermitian_phase_distribution(&state).map_err(Failure::input)?;
    print_json(&d)?;
    Ok(0)
}

#[derive(Serialize)]
struct JointDistJson<'a> {
    #[serde(flatten)]
    coefficients: &'a JointPhaseFourier,
    d_plus: f64,
    d_minus: f64,
    rows: &'a [[f64; 3]],
}

fn joint_dist(input: &StateArg, gammas: &GammaPair, grid: &GridArgs, tol: &Tolerances) -> Outcome {
    check_pair(gammas)?;
    check_points(grid.points)?;
    let state = load(input, tol, 2)?;
    let joint = JointPhaseFourier::from_state(&state, gammas.gamma_a, gammas.gamma_b).map_err(Failure::input)?;
    let rows = joint.grid(grid.points);
    emit_csv(&grid.output, |w| write_joint_csv(w, &rows))?;
    if grid.output.json {
        let (d_plus, d_minus) = joint.dispersions();
        print_json(&JointDistJson {
            coefficients: &joint,
            d_plus,
            d_minus,
            rows: &rows,
        })?;
    }
    Ok(0)
}

fn entanglement(input: &StateArg, gammas: &GammaPair, tol: &Tolerances) -> Outcome {
    check_pair(gammas)?;
    let state = load(input, tol, 2)?;
    let report = entanglement_degree(&state, gammas.gamma_a, gammas.gamma_b).map_err(Failure::input)?;
    print_json(&report)?;
    Ok(0)
}

fn sweep(steps: usize, sign: Sign, gammas: &GammaPair, output: &OutputArgs) -> Outcome {
    check_pair(gammas)?;
    if steps < 2 {
        return Err(Failure::usage(format!("--steps must be at least 2, got {steps}")));
    }
    let rows = epsilon_sweep(steps, sign, gammas.gamma_a, gammas.gamma_b).map_err(Failure::input)?;
    emit_csv(output, |w| write_sweep_csv(w, &rows))?;
    if output.json {
        print_json(&rows)?;
    }
    Ok(0)
}

fn validate(seed: u64, tol: &Tolerances) -> Outcome {
    info!("running validation suites with seed {seed}");
    let report = run_validation(seed, tol);
    for c in &report.checks {
        let status = if c.passed { "ok" } else { "FAIL" };
        info!("[{status}] {}: {} = {:e} ({} {:e})", c.suite, c.name, c.value, c.comparison, c.threshold);
    }
    for a in &report.audits {
        debug!("[audit] {}: {} = {:e} ({})", a.suite, a.name, a.value, a.note);
    }
    print_json(&report)?;
    if report.passed {
        Ok(0)
    } else {
        for c in report.failures() {
            eprintln!("qphase: check failed: {}: {} = {:e}", c.suite, c.name, c.value);
        }
        Ok(EXIT_VALIDATION)
    }
}

#[derive(Serialize)]
struct BasisDependenceJson {
    state: &'static str,
    maximally_entangled: bool,
    degree: f64,
    concurrence: f64,
    c_plus: qphase::C64,
    c_minus: qphase::C64,
}

fn basis_dependence(gammas: &GammaPair) -> Outcome {
    check_pair(gammas)?;
    let state = hadamard_rotated_bell_state();
    let check = is_maximally_entangled(&state).map_err(Failure::input)?;
    let report = entanglement_degree(&state, gammas.gamma_a, gammas.gamma_b).map_err(Failure::input)?;
    print_json(&BasisDependenceJson {
        state: "(|00> + |01> + |10> - |11>)/2",
        maximally_entangled: check.maximal,
        degree: report.degree,
        concurrence: report.concurrence,
        c_plus: report.c_plus,
        c_minus: report.c_minus,
    })?;
    Ok(0)
}
