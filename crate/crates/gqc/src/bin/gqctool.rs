//! Command-line front end.
//!
//! Exit codes are a stable contract: 0 success (and identity pass), 1 usage,
//! 2 parse failure, 3 shape mismatch, 4 I/O failure, 5 identity failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use gqc::error::Error;
use gqc::estimation::{linear_grid, replicate_experiment, run_estimation, MeasurementBasis};
use gqc::io::{
    estimates_csv, experiment_csv, experiment_summary_json, fmt12, hamiltonian_from_json,
    matrix_to_json, pure_state_to_json, state_from_json, verify_csv, ProbeState,
};
use gqc::metrology::{
    gqc_mixed, gqc_pure, l1_coherence, l1_coherence_in_eigenbasis, qfi_mixed, qfi_pure,
    random_diagonal_hamiltonian, sld_qfi, verify_identity_with_sign, CoherenceBasis, GqcReport,
    Hamiltonian, SummandSign, VerifyMode, REL_DEV_FLOOR,
};
use gqc::states::{random_haar_pure, random_mixed, RngSeed};

const EXIT_USAGE: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_SHAPE: i32 = 3;
const EXIT_IO: i32 = 4;
const EXIT_IDENTITY_FAIL: i32 = 5;

/// Identity gate thresholds for `verify`.
const VERIFY_THRESHOLD_PURE: f64 = 1e-10;
const VERIFY_THRESHOLD_MIXED: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "gqctool",
    version,
    about = "Quantum Fisher information, coherence, and phase-estimation toolkit",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pure,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fisher information of a probe file under a generator, cross-checked
    /// against the symmetric-logarithmic-derivative route.
    Qfi {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
    },
    /// Generalized-coherence report for a probe file.
    Gqc {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// l1-norm coherence of a probe file, optionally in a generator's
    /// eigenbasis.
    Coherence {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
    },
    /// Sample random probes and generators and gate on the identity between
    /// Fisher information and squared generalized coherence.
    Verify {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        dim: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "GQC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Mutation fixture: corrupt the pairwise summand sign to prove the
        /// gate detects a broken implementation.
        #[arg(long, hide = true)]
        corrupt_pair_sign: bool,
    },
    /// Monte-Carlo maximum-likelihood phase estimation against the
    /// Cramér-Rao bound. Defaults to the optimal qubit configuration.
    Simulate {
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        /// Pauli axis string for the measurement, one of x/y/z per qubit.
        #[arg(long, default_value = "y")]
        basis: String,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        phi: f64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "GQC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replicate the two-photon benchmark: evolve both probes over a theta
    /// grid, tomograph, and compare Fisher informations. `--shots 0` uses
    /// exact probabilities.
    Experiment {
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        /// Grid as start:stop:count.
        #[arg(long, default_value = "0:6.283185307179586:20")]
        theta_grid: String,
        #[arg(long, env = "GQC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median wall times of the mixed-state routines on seeded probes.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
        #[arg(long, env = "GQC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random probe state file (pure unless --rank is given).
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        dim: u64,
        #[arg(long)]
        rank: Option<u64>,
        #[arg(long, env = "GQC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

/// Library errors raised while interpreting a loaded file are parse-class;
/// mismatches between otherwise valid inputs are shape-class.
fn parse_failure(path: &Path, err: Error) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: format!("{}: {err}", path.display()),
    }
}

fn compute_failure(err: Error) -> Failure {
    let code = match err {
        Error::DimensionMismatch { .. }
        | Error::NotSquare { .. }
        | Error::BadEntryCount { .. }
        | Error::UnsupportedDimension { .. } => EXIT_SHAPE,
        Error::InvalidArgument(_)
        | Error::DimensionTooSmall { .. }
        | Error::RankOutOfRange { .. }
        | Error::NonIdentifiable { .. } => EXIT_USAGE,
        _ => EXIT_PARSE,
    };
    Failure {
        code,
        message: format!("{err}"),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}

fn run(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Qfi { state, hamiltonian } => cmd_qfi(&state, &hamiltonian),
        Command::Gqc {
            state,
            hamiltonian,
            out,
            format,
        } => cmd_gqc(&state, &hamiltonian, out.as_deref(), format),
        Command::Coherence { state, hamiltonian } => cmd_coherence(&state, hamiltonian.as_deref()),
        Command::Verify {
            mode,
            dim,
            trials,
            seed,
            out,
            corrupt_pair_sign,
        } => cmd_verify(mode, dim as usize, trials, seed, out.as_deref(), corrupt_pair_sign),
        Command::Simulate {
            state,
            hamiltonian,
            basis,
            phi,
            shots,
            trials,
            seed,
            out,
        } => cmd_simulate(
            state.as_deref(),
            hamiltonian.as_deref(),
            &basis,
            phi,
            shots,
            trials,
            seed,
            out.as_deref(),
        ),
        Command::Experiment {
            shots,
            theta_grid,
            seed,
            out,
        } => cmd_experiment(shots, &theta_grid, seed, out.as_deref()),
        Command::Bench {
            dims,
            reps,
            seed,
            out,
        } => cmd_bench(&dims, reps, seed, out.as_deref()),
        Command::Sample {
            dim,
            rank,
            seed,
            out,
        } => cmd_sample(dim as usize, rank.map(|r| r as usize), seed, out.as_deref()),
    }
}

fn load_state(path: &Path) -> Result<ProbeState, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    state_from_json(&text).map_err(|e| parse_failure(path, e))
}

fn load_hamiltonian(path: &Path) -> Result<Hamiltonian, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    hamiltonian_from_json(&text).map_err(|e| parse_failure(path, e))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| Failure::io(p, e)),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_qfi(state_path: &Path, ham_path: &Path) -> Result<i32, Failure> {
    let state = load_state(state_path)?;
    let h = load_hamiltonian(ham_path)?;
    let f_closed = match &state {
        ProbeState::Pure(psi) => qfi_pure(psi, &h).map_err(compute_failure)?,
        ProbeState::Density(rho) => qfi_mixed(rho, &h).map_err(compute_failure)?,
    };
    let rho = state.to_density();
    let (f_sld, _) = sld_qfi(&rho, &h).map_err(compute_failure)?;
    let rel_dev = (f_closed - f_sld).abs() / f_closed.max(REL_DEV_FLOOR);
    println!("f_q: {}", fmt12(f_closed));
    println!("f_q_sld: {}", fmt12(f_sld));
    println!("rel_dev: {}", fmt12(rel_dev));
    Ok(0)
}

fn report_csv(report: &GqcReport) -> String {
    let mut out = String::from("i,j,weight,m2\n");
    for t in &report.pair_terms {
        out.push_str(&format!(
            "{},{},{},{}\n",
            t.i,
            t.j,
            fmt12(t.weight),
            fmt12(t.m2)
        ));
    }
    out
}

fn cmd_gqc(
    state_path: &Path,
    ham_path: &Path,
    out: Option<&Path>,
    format: FormatArg,
) -> Result<i32, Failure> {
    let state = load_state(state_path)?;
    let h = load_hamiltonian(ham_path)?;
    let report = match &state {
        ProbeState::Pure(psi) => gqc_pure(psi, &h).map_err(compute_failure)?,
        ProbeState::Density(rho) => gqc_mixed(rho, &h).map_err(compute_failure)?,
    };
    let content = match format {
        FormatArg::Json => {
            let mut json =
                serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
            json.push('\n');
            json
        }
        FormatArg::Csv => report_csv(&report),
    };
    match out {
        Some(path) => {
            write_output(Some(path), &content)?;
            println!("gqc: {}", fmt12(report.gqc));
            println!("gqc_squared: {}", fmt12(report.gqc_squared));
            println!("coherence_l1: {}", fmt12(report.coherence_l1));
        }
        None => print!("{content}"),
    }
    Ok(0)
}

fn cmd_coherence(state_path: &Path, ham_path: Option<&Path>) -> Result<i32, Failure> {
    let state = load_state(state_path)?;
    let rho = state.to_density();
    let (value, basis) = match ham_path {
        Some(p) => {
            let h = load_hamiltonian(p)?;
            let value = l1_coherence_in_eigenbasis(&rho, &h).map_err(compute_failure)?;
            let basis = if h.is_diagonal() {
                CoherenceBasis::Storage
            } else {
                CoherenceBasis::HamiltonianEigenbasis
            };
            (value, basis)
        }
        None => (l1_coherence(&rho), CoherenceBasis::Storage),
    };
    println!("coherence_l1: {}", fmt12(value));
    println!(
        "basis: {}",
        match basis {
            CoherenceBasis::Storage => "storage",
            CoherenceBasis::HamiltonianEigenbasis => "hamiltonian_eigenbasis",
        }
    );
    Ok(0)
}

fn cmd_verify(
    mode: ModeArg,
    dim: usize,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
    corrupt_pair_sign: bool,
) -> Result<i32, Failure> {
    let (mode, threshold) = match mode {
        ModeArg::Pure => (VerifyMode::Pure, VERIFY_THRESHOLD_PURE),
        ModeArg::Mixed => (VerifyMode::Mixed, VERIFY_THRESHOLD_MIXED),
    };
    let sign = if corrupt_pair_sign {
        SummandSign::Flipped
    } else {
        SummandSign::Standard
    };
    let summary = verify_identity_with_sign(dim, trials, RngSeed::new(seed), mode, sign)
        .map_err(compute_failure)?;
    write_output(out, &verify_csv(&summary))?;
    let pass = summary.max_rel_dev <= threshold;
    println!(
        "mode: {} dim: {} trials: {} seed: {} max_rel_dev: {} mean_rel_dev: {} threshold: {} result: {}",
        summary.mode,
        summary.dim,
        summary.trials,
        summary.seed,
        fmt12(summary.max_rel_dev),
        fmt12(summary.mean_rel_dev),
        fmt12(threshold),
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { EXIT_IDENTITY_FAIL })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    state_path: Option<&Path>,
    ham_path: Option<&Path>,
    basis_axes: &str,
    phi: f64,
    shots: u64,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let rho = match state_path {
        Some(p) => load_state(p)?.to_density(),
        None => gqc::states::pure_to_density(
            &gqc::states::PureState::equal_superposition(2, 0, 1).expect("static state"),
        ),
    };
    let h = match ham_path {
        Some(p) => load_hamiltonian(p)?,
        None => Hamiltonian::from_diagonal(&[0.5, -0.5]),
    };
    let basis = MeasurementBasis::pauli_product(basis_axes).map_err(compute_failure)?;
    let run = run_estimation(&rho, &h, &basis, phi, shots, trials, RngSeed::new(seed))
        .map_err(compute_failure)?;
    println!("true_phi: {}", fmt12(run.true_phi));
    println!("shots: {}", run.shots_per_trial);
    println!("trials: {}", run.trials);
    println!("empirical_std: {}", fmt12(run.empirical_std));
    println!("crlb: {}", fmt12(run.crlb));
    println!("std_over_crlb: {}", fmt12(run.empirical_std / run.crlb));
    println!("classical_fisher: {}", fmt12(run.classical_fisher));
    if out.is_some() {
        write_output(out, &estimates_csv(&run))?;
    }
    Ok(0)
}

fn parse_theta_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!(
            "theta grid must be start:stop:count, got '{spec}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Failure::usage(format!("bad grid start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| Failure::usage(format!("bad grid stop '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Failure::usage(format!("bad grid count '{}'", parts[2])))?;
    if count == 0 {
        return Err(Failure::usage("grid count must be positive"));
    }
    linear_grid(start, stop, count).map_err(compute_failure)
}

fn cmd_experiment(
    shots: u64,
    grid_spec: &str,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let grid = parse_theta_grid(grid_spec)?;
    let report = replicate_experiment(shots, &grid, RngSeed::new(seed)).map_err(compute_failure)?;
    write_output(out, &experiment_csv(&report))?;
    println!("{}", experiment_summary_json(&report));
    Ok(0)
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    samples[samples.len() / 2]
}

fn cmd_bench(dims: &[usize], reps: u64, seed: u64, out: Option<&Path>) -> Result<i32, Failure> {
    if dims.iter().any(|&d| d < 2) {
        return Err(Failure::usage("bench dims must be at least 2"));
    }
    let seed = RngSeed::new(seed);
    let mut csv = String::from("dim,qfi_mixed_s,sld_qfi_s,gqc_mixed_s\n");
    for (index, &dim) in dims.iter().enumerate() {
        let rho = random_mixed(dim, (dim / 2).max(1), seed.derive(2 * index as u64))
            .map_err(compute_failure)?;
        let h = random_diagonal_hamiltonian(dim, seed.derive(2 * index as u64 + 1));
        let mut qfi_times = Vec::with_capacity(reps as usize);
        let mut sld_times = Vec::with_capacity(reps as usize);
        let mut gqc_times = Vec::with_capacity(reps as usize);
        for _ in 0..reps {
            let t = Instant::now();
            let f = qfi_mixed(&rho, &h).map_err(compute_failure)?;
            qfi_times.push(t.elapsed().as_secs_f64());
            std::hint::black_box(f);

            let t = Instant::now();
            let s = sld_qfi(&rho, &h).map_err(compute_failure)?;
            sld_times.push(t.elapsed().as_secs_f64());
            std::hint::black_box(s.0);

            let t = Instant::now();
            let g = gqc_mixed(&rho, &h).map_err(compute_failure)?;
            gqc_times.push(t.elapsed().as_secs_f64());
            std::hint::black_box(g.gqc);
        }
        csv.push_str(&format!(
            "{},{},{},{}\n",
            dim,
            fmt12(median(&mut qfi_times)),
            fmt12(median(&mut sld_times)),
            fmt12(median(&mut gqc_times))
        ));
    }
    write_output(out, &csv)?;
    Ok(0)
}

fn cmd_sample(
    dim: usize,
    rank: Option<usize>,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let seed = RngSeed::new(seed);
    let content = match rank {
        None => {
            let psi = random_haar_pure(dim, seed).map_err(compute_failure)?;
            let mut json = pure_state_to_json(&psi);
            json.push('\n');
            json
        }
        Some(r) => {
            let rho = random_mixed(dim, r, seed).map_err(compute_failure)?;
            let mut json = matrix_to_json(rho.matrix());
            json.push('\n');
            json
        }
    };
    write_output(out, &content)?;
    Ok(0)
}
