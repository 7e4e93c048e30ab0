//! Command-line front end: Hamiltonian/state ingestion, subcommand dispatch,
//! report emission. Exit codes: 0 success, 1 input error, 2 budget or check
//! violation.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use io::{HamiltonianFile, MatrixFile, StateFile};
use lcuwalk::lcu::{self, SegmentMode};
use lcuwalk::linalg::eigendecompose;
use lcuwalk::walk::{build_walk, verify_block_encoding, walk_eigenpair_check};
use lcuwalk::{bessel, check_sparse_norm_bound, rowtree, testgen, Error, HermitianOperator};

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
    fn violation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VIOLATION, message: message.into() }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure::input(message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LeakageBudget { .. } | Error::PaddingAmplitude(_) => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "lcuwalk", about = "Hamiltonian simulation by LCU of quantum walk steps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Circuit,
    Effective,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate e^{-iHt}|psi0> to accuracy eps.
    Evolve {
        /// Hamiltonian file (JSON).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        eps: f64,
        /// Initial state file; mutually exclusive with --basis.
        #[arg(long, conflicts_with = "basis")]
        state: Option<PathBuf>,
        /// Basis-state index for the initial state (default 0).
        #[arg(long)]
        basis: Option<usize>,
        #[arg(long, value_enum, default_value = "circuit")]
        mode: ModeArg,
        /// Compare against the exact matrix exponential.
        #[arg(long)]
        oracle_check: bool,
        /// Reject input states whose norm is not exactly 1.
        #[arg(long)]
        strict_norm: bool,
        /// Write the RunReport JSON here (default: stdout).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the output state here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the walk operator: block encoding and eigenpair residuals.
    WalkCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate Bessel coefficients by backward recurrence vs power series.
    BesselTable {
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form resource accounting for an evolution.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a unitary through its Hermitian embedding.
    ApplyUnitary {
        /// Unitary matrix file (full listing).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, conflicts_with = "basis")]
        state: Option<PathBuf>,
        #[arg(long)]
        basis: Option<usize>,
        #[arg(long)]
        strict_norm: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the sparse norm bound |A|_1 <= sqrt(d)|A|.
    NormCheck {
        /// Matrix file; omit to run a random ensemble instead.
        #[arg(long, required_unless_present = "trials")]
        input: Option<PathBuf>,
        /// Declared row sparsity d.
        #[arg(long)]
        d: usize,
        /// Number of random d-sparse draws (ensemble mode).
        #[arg(long)]
        trials: Option<usize>,
        /// Matrix dimension for ensemble mode.
        #[arg(long, default_value = "16")]
        dim: usize,
        /// RNG seed for ensemble mode.
        #[arg(long, default_value = "1")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => io::write_json(path, value)?,
        None => println!("{}", serde_json::to_string_pretty(value).map_err(|e| e.to_string())?),
    }
    Ok(())
}

fn load_operator(path: &PathBuf) -> Result<HermitianOperator, Failure> {
    let file: HamiltonianFile = io::read_json(path)?;
    Ok(file.to_operator()?)
}

fn initial_state(
    dim: usize,
    state: Option<&PathBuf>,
    basis: Option<usize>,
    strict: bool,
) -> Result<Vec<Complex64>, Failure> {
    if let Some(path) = state {
        let file: StateFile = io::read_json(path)?;
        return Ok(file.to_amplitudes(dim, strict)?);
    }
    let idx = basis.unwrap_or(0);
    if idx >= dim {
        return Err(Failure::input(format!("basis index {idx} out of range for N = {dim}")));
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    psi[idx] = Complex64::new(1.0, 0.0);
    Ok(psi)
}

fn cmd_evolve(
    input: PathBuf,
    t: f64,
    eps: f64,
    state: Option<PathBuf>,
    basis: Option<usize>,
    mode: ModeArg,
    oracle_check: bool,
    strict_norm: bool,
    report_path: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let h = load_operator(&input)?;
    let psi0 = initial_state(h.dim(), state.as_ref(), basis, strict_norm)?;
    let mode = match mode {
        ModeArg::Circuit => SegmentMode::Circuit,
        ModeArg::Effective => SegmentMode::Effective,
    };
    let (psi, report) = lcu::evolve(&h, t, eps, &psi0, mode, oracle_check)?;
    if let Some(path) = out {
        io::write_json(&path, &StateFile::from_amplitudes(&psi))?;
    }
    emit(&report, report_path.as_ref())?;
    if let Some(err) = report.final_error {
        if err > eps {
            return Err(Failure::violation(format!(
                "oracle check failed: error {err} > eps {eps}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct WalkCheckReport {
    lambda: f64,
    isometry_residual: f64,
    block_encoding_residual: Option<f64>,
    /// (eigenvalue, residual for mu_plus, residual for mu_minus); entries
    /// skipped as near-degenerate are reported with nulls.
    eigenpairs: Vec<(f64, Option<f64>, Option<f64>)>,
    max_residual: f64,
}

fn cmd_walk_check(input: PathBuf, out: Option<PathBuf>) -> Result<(), Failure> {
    let h = load_operator(&input)?;
    let ds = rowtree::build(&h)?;
    let w = build_walk(&ds)?;
    let eig = eigendecompose(&h)?;
    let mut eigenpairs = Vec::new();
    let mut max_residual = w.isometry_residual();
    let block = if h.dim() <= 8 {
        let r = verify_block_encoding(&w, &h);
        max_residual = max_residual.max(r);
        Some(r)
    } else {
        None
    };
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        let vec = eig.eigenvector(i);
        let mut residuals = [None, None];
        for (slot, sign) in [(0, 1i8), (1, -1i8)] {
            match walk_eigenpair_check(&w, &h, lambda, &vec, sign) {
                Ok(res) => {
                    max_residual = max_residual.max(res);
                    residuals[slot] = Some(res);
                }
                Err(Error::NearDegenerateEigenvalue) => {}
                Err(e) => return Err(e.into()),
            }
        }
        eigenpairs.push((lambda, residuals[0], residuals[1]));
    }
    let report = WalkCheckReport {
        lambda: h.lambda(),
        isometry_residual: w.isometry_residual(),
        block_encoding_residual: block,
        eigenpairs,
        max_residual,
    };
    emit(&report, out.as_ref())?;
    if max_residual > 1e-10 {
        return Err(Failure::violation(format!(
            "walk residual {max_residual} exceeds 1e-10"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BesselRow {
    m: i64,
    backward: f64,
    series: f64,
    difference: f64,
}

#[derive(Serialize)]
struct BesselTable {
    z: f64,
    k: usize,
    rows: Vec<BesselRow>,
    max_difference: f64,
    truncated_sum: f64,
}

fn cmd_bessel_table(z: f64, k: usize, out: Option<PathBuf>) -> Result<(), Failure> {
    let table = bessel::bessel_backward(z, k)?;
    let mut rows = Vec::new();
    let mut max_difference = 0.0_f64;
    for m in -(k as i64)..=(k as i64) {
        let series = bessel::bessel_series(m, z)?;
        let base = table[m.unsigned_abs() as usize];
        let backward = if m < 0 && m % 2 != 0 { -base } else { base };
        let difference = (backward - series).abs();
        max_difference = max_difference.max(difference);
        rows.push(BesselRow { m, backward, series, difference });
    }
    let report = BesselTable {
        z,
        k,
        rows,
        max_difference,
        truncated_sum: bessel::truncated_sum(&table),
    };
    emit(&report, out.as_ref())?;
    if max_difference > 1e-13 {
        return Err(Failure::violation(format!(
            "backward recurrence and series disagree by {max_difference}"
        )));
    }
    Ok(())
}

fn cmd_estimate(input: PathBuf, t: f64, eps: f64, out: Option<PathBuf>) -> Result<(), Failure> {
    let h = load_operator(&input)?;
    let report = lcu::estimate_resources(&h, t, eps)?;
    emit(&report, out.as_ref())
}

fn cmd_apply_unitary(
    input: PathBuf,
    eps: f64,
    state: Option<PathBuf>,
    basis: Option<usize>,
    strict_norm: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let file: MatrixFile = io::read_json(&input)?;
    let u = file.to_matrix()?;
    let psi = initial_state(u.dim(), state.as_ref(), basis, strict_norm)?;
    let result = lcu::apply_unitary_via_embedding(&u, &psi, eps)?;
    emit(&StateFile::from_amplitudes(&result), out.as_ref())
}

#[derive(Serialize)]
struct NormCheckReport {
    d: usize,
    trials: usize,
    violations: usize,
    /// (lhs |A|_1, rhs sqrt(d)|A|, holds) per matrix checked.
    results: Vec<(f64, f64, bool)>,
}

fn cmd_norm_check(
    input: Option<PathBuf>,
    d: usize,
    trials: Option<usize>,
    dim: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let mut results = Vec::new();
    match (input, trials) {
        (Some(path), _) => {
            let file: MatrixFile = io::read_json(&path)?;
            let m = file.to_matrix()?;
            let chk = check_sparse_norm_bound(&m, d)?;
            results.push((chk.lhs, chk.rhs, chk.holds));
        }
        (None, Some(count)) => {
            let mut rng = testgen::rng(seed);
            for _ in 0..count {
                let m = testgen::random_d_sparse(&mut rng, dim, d);
                let chk = check_sparse_norm_bound(&m, d)?;
                results.push((chk.lhs, chk.rhs, chk.holds));
            }
        }
        (None, None) => return Err(Failure::input("need --input or --trials")),
    }
    let violations = results.iter().filter(|r| !r.2).count();
    let report = NormCheckReport {
        d,
        trials: results.len(),
        violations,
        results,
    };
    emit(&report, out.as_ref())?;
    if violations > 0 {
        return Err(Failure::violation(format!("{violations} norm-bound violations")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Evolve {
            input, t, eps, state, basis, mode, oracle_check, strict_norm, report, out,
        } => cmd_evolve(input, t, eps, state, basis, mode, oracle_check, strict_norm, report, out),
        Command::WalkCheck { input, out } => cmd_walk_check(input, out),
        Command::BesselTable { z, k, out } => cmd_bessel_table(z, k, out),
        Command::Estimate { input, t, eps, out } => cmd_estimate(input, t, eps, out),
        Command::ApplyUnitary { input, eps, state, basis, strict_norm, out } => {
            cmd_apply_unitary(input, eps, state, basis, strict_norm, out)
        }
        Command::NormCheck { input, d, trials, dim, seed, out } => {
            cmd_norm_check(input, d, trials, dim, seed, out)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
