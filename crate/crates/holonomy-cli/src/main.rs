use std::f64::consts::PI;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use holonomy::Error;
use holonomy_cli::commands::{
    curve_trace, no_trace, run_bound, run_fuzz, run_lambda, run_qft_bound, run_simulate,
    run_synthesize, FuzzArgs, LambdaArgs, SimulateArgs, SynthesizeArgs,
};
use holonomy_cli::report::trace_csv;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// Holonomic loop calculator. Angles are radians; matrices are read from
/// JSON files (complex entries as [re, im] pairs, row-major) passed as
/// @path arguments. Set HOLONOMY_LOG=info (or debug) for progress logs.
#[derive(Parser)]
#[command(name = "holonomy", version, max_term_width = 100)]
struct Cli {
    /// Report format. csv emits a time,speed,cumulative_length trace and is
    /// only available for commands that simulate a curve.
    #[arg(long, global = true, value_enum, default_value = "json")]
    output: OutputFormat,

    /// Omit the timestamp so identical inputs give byte-identical output.
    #[arg(long, global = true)]
    reproducible: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Loop-length lower bound for realizing a gate, from its eigenphases.
    Bound {
        /// Named gate (hadamard, phase_s, pi8_t, cnot, qft:N,
        /// gamma1:ALPHA:BETA, gamma2:ALPHA:BETA) or @file with the matrix.
        #[arg(long)]
        gate: String,
    },
    /// Closed-form length bound for the N-point Fourier transform gate,
    /// cross-checked against the spectral computation.
    QftBound {
        /// Transform size N >= 1.
        #[arg(long)]
        dim: usize,
    },
    /// Drive a subspace around a Hamiltonian schedule and report the loop:
    /// holonomy, length, bound, ratio, kinetic energy.
    Simulate {
        /// Schedule file: {"tau":T,"matrix":M} or sampled {"interpolation":..,"samples":[..]}.
        #[arg(long, value_name = "@FILE")]
        hamiltonian: String,

        /// Initial subspace frame file: list of orthonormal column vectors.
        #[arg(long, value_name = "@FILE")]
        frame: String,

        /// Time steps for the propagator grid.
        #[arg(long, default_value_t = 4000)]
        steps: usize,

        /// Override the closure gate on the final projector (Frobenius).
        #[arg(long)]
        closure_tolerance: Option<f64>,
    },
    /// Build a length-optimal loop realizing a gate and measure it.
    Synthesize {
        /// Named gate (same keys as bound) or @file with the matrix.
        #[arg(long)]
        gate: String,

        /// Ambient dimension d; needs d >= 2n - k for an n-dim gate with
        /// k unit eigenvalues.
        #[arg(long)]
        dim: usize,

        /// Reference frame file; defaults to the first n coordinate axes.
        #[arg(long, value_name = "@FILE")]
        frame: Option<String>,

        /// Lower energy eigenvalue of the synthesized Hamiltonian.
        #[arg(long, default_value_t = 0.0)]
        eps0: f64,

        /// Upper energy eigenvalue; the loop period is 2 pi / (eps1 - eps0).
        #[arg(long, default_value_t = 1.0)]
        eps1: f64,

        /// Time steps for the verification run.
        #[arg(long, default_value_t = 4000)]
        steps: usize,
    },
    /// Three-level lambda pulse realizing a one-qubit gate; certifies the
    /// loop closes and saturates the length bound.
    Lambda1(LambdaCli),
    /// Nine-level two-qubit analogue of lambda1.
    Lambda2(LambdaCli),
    /// Random loops from several families, checking length >= bound on each.
    FuzzInequality {
        /// Number of random loops.
        #[arg(long)]
        trials: usize,

        /// RNG seed; equal seeds give identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Ambient dimension for the random families.
        #[arg(long, default_value_t = 4)]
        dim: usize,

        /// Subspace rank for the random families.
        #[arg(long, default_value_t = 2)]
        rank: usize,

        /// Loop family: mixed, plan, snapped, companion, lambda-double.
        #[arg(long, default_value = "mixed")]
        family: String,

        /// Time steps per trial.
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
}

#[derive(clap::Args)]
struct LambdaCli {
    /// Coupling mix angle in (0, pi).
    #[arg(long)]
    alpha: f64,

    /// Relative coupling phase.
    #[arg(long, default_value_t = 0.0)]
    beta: f64,

    /// Pulse envelope: square, sin2, or @file with {"times":[..],"values":[..]}.
    #[arg(long, default_value = "square")]
    envelope: String,

    /// Pulse duration for the built-in envelopes.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,

    /// Pulse area for the built-in envelopes; pi closes the loop.
    #[arg(long, default_value_t = PI)]
    area: f64,

    /// Time steps for the verification run.
    #[arg(long, default_value_t = 4000)]
    steps: usize,
}

fn execute(cli: &Cli) -> Result<String, Error> {
    let csv = cli.output == OutputFormat::Csv;
    let render = |report: holonomy_cli::report::Report| report.stamped(cli.reproducible).to_json();
    match &cli.command {
        Command::Bound { gate } => {
            if csv {
                return Err(no_trace("bound"));
            }
            Ok(render(run_bound(gate)?))
        }
        Command::QftBound { dim } => {
            if csv {
                return Err(no_trace("qft-bound"));
            }
            Ok(render(run_qft_bound(*dim)?))
        }
        Command::Simulate { hamiltonian, frame, steps, closure_tolerance } => {
            let args = SimulateArgs {
                hamiltonian,
                frame,
                steps: *steps,
                closure_tolerance: *closure_tolerance,
            };
            let (report, schedule, frame) = run_simulate(&args)?;
            if csv {
                Ok(trace_csv(&curve_trace(&schedule, &frame, *steps)?))
            } else {
                Ok(render(report))
            }
        }
        Command::Synthesize { gate, dim, frame, eps0, eps1, steps } => {
            let args = SynthesizeArgs {
                gate,
                dim: *dim,
                frame: frame.as_deref(),
                eps0: *eps0,
                eps1: *eps1,
                steps: *steps,
            };
            let (report, schedule, frame) = run_synthesize(&args)?;
            if csv {
                Ok(trace_csv(&curve_trace(&schedule, &frame, *steps)?))
            } else {
                Ok(render(report))
            }
        }
        Command::Lambda1(args) | Command::Lambda2(args) => {
            let two_qubit = matches!(cli.command, Command::Lambda2(_));
            let lambda = LambdaArgs {
                alpha: args.alpha,
                beta: args.beta,
                envelope: &args.envelope,
                tau: args.tau,
                area: args.area,
                steps: args.steps,
            };
            let (report, schedule, frame) = run_lambda(two_qubit, &lambda)?;
            if csv {
                Ok(trace_csv(&curve_trace(&schedule, &frame, args.steps)?))
            } else {
                Ok(render(report))
            }
        }
        Command::FuzzInequality { trials, seed, dim, rank, family, steps } => {
            if csv {
                return Err(no_trace("fuzz-inequality"));
            }
            let args = FuzzArgs {
                trials: *trials,
                seed: *seed,
                dim: *dim,
                rank: *rank,
                family,
                steps: *steps,
            };
            Ok(render(run_fuzz(&args)?))
        }
    }
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Closure { .. } | Error::Resolution(_) | Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HOLONOMY_LOG")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}
