//! `alphasig`: command-line front end for the verification pipeline.
//!
//! Exit codes: 0 success, 2 validation/usage error, 3 soundness failure
//! reported by the oracle, 4 I/O error.

use std::fs::File;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::Array1;

use alpha_sig::model::{load_model, save_model, NeuralNet, NormOrder, VerificationProblem};
use alpha_sig::oracle::{soundness_check, static_baseline};
use alpha_sig::verifier::{run_alpha_sig, tau_compare, write_trace_csv, RunConfig, VerifyResult};
use alpha_sig::{compute_activation_bounds, Error};

const EXIT_VALIDATION: u8 = 2;
const EXIT_SOUNDNESS: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "alphasig",
    about = "Certified lower bounds for sigmoid networks via tunable tangent-line relaxations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random model file
    Gen(GenArgs),
    /// Compute a certified lower bound for a model
    Verify(VerifyArgs),
    /// Check a previously produced bound against the sampling oracle
    Oracle(OracleArgs),
    /// Compare two verification results (percent improvement tau)
    Compare(CompareArgs),
    /// Batch run, shrinking weight distributions (std 2.5/j for model j)
    Exp1(ExpArgs),
    /// Batch run, constant weight distribution (std 2.5)
    Exp2(ExpArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Comma-separated layer widths, e.g. 1,5,5,5,5,1
    #[arg(long, value_delimiter = ',', required = true)]
    widths: Vec<usize>,
    #[arg(long, default_value_t = 2.5)]
    weight_std: f64,
    #[arg(long, default_value_t = 0.25)]
    bias_std: f64,
    /// Shorthand for the shrinking-variance regime: sets weight std to 2.5/j
    #[arg(long, value_name = "J", conflicts_with = "weight_std")]
    exp1_index: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, required = true)]
    out: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum NormArg {
    Inf,
    Two,
}

impl From<NormArg> for NormOrder {
    fn from(p: NormArg) -> Self {
        match p {
            NormArg::Inf => NormOrder::Infinity,
            NormArg::Two => NormOrder::Two,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum OutputMode {
    Text,
    Json,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, required = true)]
    model: PathBuf,
    /// Output cost vector: `ones` or comma-separated values
    #[arg(long, default_value = "ones")]
    c: String,
    /// Center of the input set; comma-separated, defaults to the origin
    #[arg(long)]
    x0: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = NormArg::Inf)]
    p: NormArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 300)]
    steps: usize,
    /// Write the iteration trace as CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the full result as JSON
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// The bound to check, as a number
    #[arg(long, conflicts_with = "result")]
    bound: Option<f64>,
    /// ... or a result file produced by `verify --out`
    #[arg(long)]
    result: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,
}

#[derive(Args)]
struct CompareArgs {
    /// Reference result file (denominator of tau)
    baseline: PathBuf,
    /// New result file
    optimized: PathBuf,
}

#[derive(Args)]
struct ExpArgs {
    /// Neurons per hidden layer; defaults to the full 5..1000 grid
    #[arg(long, value_delimiter = ',', default_values_t = [5usize, 10, 50, 100, 500, 1000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 300)]
    steps: usize,
    /// Base seed; model j of size n uses seed + 10*n + j
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_vector(text: &str) -> Result<Array1<f64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Array1::from_vec)
}

fn build_problem(args: &ProblemArgs) -> Result<VerificationProblem, Error> {
    let net = load_model(&args.model)?;
    let c = if args.c == "ones" {
        Array1::ones(net.output_dim())
    } else {
        parse_vector(&args.c)?
    };
    let x0 = match &args.x0 {
        Some(text) => parse_vector(text)?,
        None => Array1::zeros(net.input_dim()),
    };
    VerificationProblem::new(net, c, x0, args.eps, args.p.into())
}

fn run_verify(prob: &VerificationProblem, steps: usize) -> Result<VerifyResult, Error> {
    let bounds = compute_activation_bounds(prob)?;
    let config = RunConfig {
        steps,
        ..Default::default()
    };
    run_alpha_sig(prob, &bounds, &config)
}

fn cmd_gen(args: &GenArgs) -> Result<(), Error> {
    let weight_std = match args.exp1_index {
        Some(0) => return Err(Error::invalid("--exp1-index must be >= 1")),
        Some(j) => 2.5 / j as f64,
        None => args.weight_std,
    };
    let net = NeuralNet::generate_random(&args.widths, weight_std, args.bias_std, args.seed)?;
    save_model(&net, &args.out)?;
    println!(
        "wrote {} ({} sigmoid neurons, weight std {weight_std})",
        args.out.display(),
        net.num_sigmoid_neurons()
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Error> {
    let prob = build_problem(&args.problem)?;
    let result = run_verify(&prob, args.steps)?;
    if let Some(path) = &args.trace {
        write_trace_csv(&result, File::create(path)?)?;
    }
    if let Some(path) = &args.out {
        let mut f = File::create(path)?;
        writeln!(
            f,
            "{}",
            serde_json::to_string_pretty(&result).expect("result serializes")
        )?;
    }
    match args.output {
        OutputMode::Json => println!(
            "{}",
            serde_json::to_string_pretty(&result).expect("result serializes")
        ),
        OutputMode::Text => {
            println!("bound      {:.17}", result.bound);
            println!("iterations {} (best at {})", result.iterations_run, result.best_iteration);
            println!("wall_ms    {:.2}", result.wall_ms);
        }
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<bool, Error> {
    let prob = build_problem(&args.problem)?;
    let bound = match (args.bound, &args.result) {
        (Some(b), _) => b,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad result file: {e}")))?;
            value
                .get("bound")
                .and_then(|b| b.as_f64())
                .ok_or_else(|| Error::Parse("result file has no \"bound\" field".into()))?
        }
        (None, None) => return Err(Error::invalid("pass --bound or --result")),
    };
    let report = soundness_check(&prob, bound, args.samples, args.seed);
    match args.output {
        OutputMode::Json => println!("{}", report.to_json()),
        OutputMode::Text => {
            println!("sampled_min   {:.17}", report.sampled_min);
            println!("bound checked {bound:.17}");
            println!(
                "violations    {} / {} (max excess {:.3e})",
                report.violations, report.samples, report.max_violation
            );
            println!("{}", if report.passed() { "SOUND" } else { "UNSOUND" });
        }
    }
    Ok(report.passed())
}

fn read_bound(path: &PathBuf) -> Result<f64, Error> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad result file: {e}")))?;
    value
        .get("bound")
        .and_then(|b| b.as_f64())
        .ok_or_else(|| Error::Parse(format!("{} has no \"bound\" field", path.display())))
}

fn cmd_compare(args: &CompareArgs) -> Result<(), Error> {
    let reference = read_bound(&args.baseline)?;
    let new = read_bound(&args.optimized)?;
    let tau = tau_compare(new, reference)?;
    println!("baseline  {reference:.17}");
    println!("optimized {new:.17}");
    println!("tau       {tau:+.4}");
    Ok(())
}

fn cmd_experiment(args: &ExpArgs, shrinking: bool) -> Result<(), Error> {
    println!("size  {}", (1..=5).map(|j| format!("tau_{j}      ")).collect::<String>());
    for &n in &args.sizes {
        let widths = [1, n, n, n, n, 1];
        let mut row = format!("{n:<5}");
        for j in 1..=5u64 {
            let weight_std = if shrinking { 2.5 / j as f64 } else { 2.5 };
            let seed = args.seed + 10 * n as u64 + j;
            let net = NeuralNet::generate_random(&widths, weight_std, 0.25, seed)?;
            let c = Array1::ones(net.output_dim());
            let x0 = Array1::zeros(net.input_dim());
            let prob = VerificationProblem::new(net, c, x0, 1.0, NormOrder::Infinity)?;
            let bounds = compute_activation_bounds(&prob)?;
            let start = Instant::now();
            let config = RunConfig {
                steps: args.steps,
                ..Default::default()
            };
            let result = run_alpha_sig(&prob, &bounds, &config)?;
            let reference = static_baseline(&prob, &bounds)?;
            let tau = tau_compare(result.bound, reference)?;
            row.push_str(&format!(" {tau:+9.4}"));
            eprintln!(
                "size {n} model {j}: bound {:.6} (baseline {:.6}) in {:.2}s",
                result.bound,
                reference,
                start.elapsed().as_secs_f64()
            );
        }
        println!("{row}");
    }
    println!("(tau: percent improvement of the optimized bound over the 0-step static baseline)");
    Ok(())
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ALPHASIG_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: ALPHASIG_THREADS must be a positive integer");
                return ExitCode::from(EXIT_VALIDATION);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => match cmd_oracle(args) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(EXIT_SOUNDNESS),
            Err(e) => Err(e),
        },
        Command::Compare(args) => cmd_compare(args),
        Command::Exp1(args) => cmd_experiment(args, true),
        Command::Exp2(args) => cmd_experiment(args, false),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
