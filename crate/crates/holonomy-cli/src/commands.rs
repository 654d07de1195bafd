//! Subcommand implementations: resolve inputs, run the library, shape reports.

use serde_json::{json, Value};

use holonomy::bounds::{isoholonomic_bound, qft_bound, PHASE_TOL};
use holonomy::bundle::{closure_tolerance, Frame};
use holonomy::geometry::speed_profile;
use holonomy::lambda::{
    one_qubit_frame, one_qubit_hamiltonian, two_qubit_frame, two_qubit_hamiltonian,
    LambdaOneQubit, LambdaTwoQubit, PulseEnvelope,
};
use holonomy::linalg::frobenius_distance;
use holonomy::propagate::{analyze_loop, drive_subspace, HamiltonianSchedule, LoopReport};
use holonomy::synthesis::{execute_plan, plan_optimal_loop};
use holonomy::{Error, Result};

use crate::fuzz::{fuzz_inequality, LoopFamily, INEQUALITY_SLACK};
use crate::io::{
    frame_value, matrix_value, ratio_value, resolve_envelope, resolve_frame, resolve_gate,
    resolve_schedule,
};
use crate::report::Report;

fn loop_results(report: &LoopReport) -> Value {
    json!({
        "holonomy": matrix_value(report.holonomy.matrix()),
        "dynamical_operator": matrix_value(report.dynamical_operator.matrix()),
        "bound": report.bound,
        "length": report.length,
        "kinetic_energy": report.kinetic_energy,
        "mean_speed": report.mean_speed(),
        "ratio": ratio_value(report.ratio),
        "closure_residual": report.closure_residual,
        "duration": report.duration,
        "optimal": report.is_optimal(),
    })
}

/// (time, speed, cumulative length) rows for CSV traces.
pub fn curve_trace(
    schedule: &HamiltonianSchedule,
    frame: &Frame,
    steps: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    let (curve, _) = drive_subspace(schedule, frame, steps)?;
    let speeds = speed_profile(&curve)?;
    let times = curve.times();
    let mut rows = Vec::with_capacity(times.len());
    let mut cumulative = 0.0;
    for i in 0..times.len() {
        if i > 0 {
            cumulative += 0.5 * (times[i] - times[i - 1]) * (speeds[i] + speeds[i - 1]);
        }
        rows.push((times[i], speeds[i], cumulative));
    }
    Ok(rows)
}

pub fn run_bound(gate_spec: &str) -> Result<Report> {
    let gate = resolve_gate(gate_spec)?;
    let spectrum = isoholonomic_bound(&gate)?;
    log::info!("bound for {gate_spec}: {:.12}", spectrum.bound);
    Ok(Report::new(
        "bound",
        json!({ "gate": gate_spec, "dimension": gate.dim() }),
        json!({ "phase_clamp": PHASE_TOL }),
        json!({
            "bound": spectrum.bound,
            "eigenphases": spectrum.eigenphases,
            "unit_eigenvalue_count": spectrum.unit_eigenvalue_count,
        }),
    ))
}

pub fn run_qft_bound(dim: usize) -> Result<Report> {
    let closed_form = qft_bound(dim)?;
    let gate = holonomy::bounds::named_gate(&format!("qft:{dim}"))?;
    let spectral = isoholonomic_bound(&gate)?.bound;
    Ok(Report::new(
        "qft-bound",
        json!({ "dim": dim }),
        json!({ "phase_clamp": PHASE_TOL }),
        json!({
            "closed_form_bound": closed_form,
            "spectral_bound": spectral,
            "agreement_gap": (closed_form - spectral).abs(),
        }),
    ))
}

pub struct SimulateArgs<'a> {
    pub hamiltonian: &'a str,
    pub frame: &'a str,
    pub steps: usize,
    pub closure_tolerance: Option<f64>,
}

pub fn run_simulate(args: &SimulateArgs) -> Result<(Report, HamiltonianSchedule, Frame)> {
    let schedule = resolve_schedule(args.hamiltonian)?;
    let frame = resolve_frame(args.frame)?;
    log::info!(
        "simulating {} steps in dimension {}, rank {}",
        args.steps,
        schedule.dim(),
        frame.rank()
    );
    let report = analyze_loop(&schedule, &frame, args.steps, args.closure_tolerance)?;
    let closure_gate = args.closure_tolerance.unwrap_or_else(|| closure_tolerance(frame.rank()));
    let doc = Report::new(
        "simulate",
        json!({
            "hamiltonian": args.hamiltonian,
            "frame": frame_value(&frame),
            "steps": args.steps,
        }),
        json!({
            "closure": closure_gate,
            "optimality_slack": LoopReport::OPTIMALITY_SLACK,
        }),
        loop_results(&report),
    );
    Ok((doc, schedule, frame))
}

pub struct SynthesizeArgs<'a> {
    pub gate: &'a str,
    pub dim: usize,
    pub frame: Option<&'a str>,
    pub eps0: f64,
    pub eps1: f64,
    pub steps: usize,
}

pub fn run_synthesize(args: &SynthesizeArgs) -> Result<(Report, HamiltonianSchedule, Frame)> {
    let gate = resolve_gate(args.gate)?;
    let frame = match args.frame {
        Some(spec) => resolve_frame(spec)?,
        None => Frame::standard(args.dim, gate.dim())?,
    };
    let plan = plan_optimal_loop(&gate, &frame, args.dim, args.eps0, args.eps1)?;
    let run = execute_plan(&plan, args.steps)?;
    log::info!(
        "synthesized {} blocks in dimension {}, measured ratio {}",
        plan.blocks.len(),
        args.dim,
        run.report.ratio
    );
    let blocks: Vec<Value> = plan
        .blocks
        .iter()
        .map(|b| {
            json!({
                "theta": b.theta,
                "lifted_phase": b.lifted_phase,
                "a": b.a,
                "b": b.b,
            })
        })
        .collect();
    let doc = Report::new(
        "synthesize",
        json!({
            "gate": args.gate,
            "dim": args.dim,
            "frame": args.frame.map(|s| json!(s)).unwrap_or(json!("standard")),
            "eps0": args.eps0,
            "eps1": args.eps1,
            "steps": args.steps,
        }),
        json!({
            "closure": closure_tolerance(frame.rank()),
            "optimality_slack": LoopReport::OPTIMALITY_SLACK,
            "phase_clamp": PHASE_TOL,
        }),
        json!({
            "eigenphases": plan.eigenphases,
            "period": plan.period,
            "blocks": blocks,
            "hamiltonian": matrix_value(&plan.hamiltonian),
            "target_bound": run.target_bound,
            "holonomy_error": run.holonomy_error,
            "length_error": run.length_error,
            "loop": loop_results(&run.report),
        }),
    );
    let schedule = plan.schedule()?;
    Ok((doc, schedule, frame))
}

pub struct LambdaArgs<'a> {
    pub alpha: f64,
    pub beta: f64,
    pub envelope: &'a str,
    pub tau: f64,
    pub area: f64,
    pub steps: usize,
}

pub fn run_lambda(two_qubit: bool, args: &LambdaArgs) -> Result<(Report, HamiltonianSchedule, Frame)> {
    let envelope: PulseEnvelope = resolve_envelope(args.envelope, args.tau, args.area)?;
    let grid = args.steps.max(2);
    let (schedule, frame, target) = if two_qubit {
        let params = LambdaTwoQubit::new(args.alpha, args.beta)?;
        let target = params.target();
        (two_qubit_hamiltonian(&params, &envelope, grid)?, two_qubit_frame(), target)
    } else {
        let params = LambdaOneQubit::new(args.alpha, args.beta)?;
        let target = params.target();
        (one_qubit_hamiltonian(&params, &envelope, grid)?, one_qubit_frame(), target)
    };
    log::info!(
        "certifying {} pulse, area {:.6}, duration {:.6}",
        if two_qubit { "two-qubit" } else { "one-qubit" },
        envelope.area(),
        envelope.duration()
    );
    let report = analyze_loop(&schedule, &frame, args.steps, None)?;
    let holonomy_error = frobenius_distance(report.holonomy.matrix(), &target);
    let command = if two_qubit { "lambda2" } else { "lambda1" };
    let mut results = loop_results(&report);
    results["target"] = matrix_value(&target);
    results["holonomy_error"] = json!(holonomy_error);
    let doc = Report::new(
        command,
        json!({
            "alpha": args.alpha,
            "beta": args.beta,
            "envelope": args.envelope,
            "tau": args.tau,
            "area": args.area,
            "steps": args.steps,
        }),
        json!({
            "closure": closure_tolerance(frame.rank()),
            "optimality_slack": LoopReport::OPTIMALITY_SLACK,
        }),
        results,
    );
    Ok((doc, schedule, frame))
}

pub struct FuzzArgs<'a> {
    pub trials: usize,
    pub seed: u64,
    pub dim: usize,
    pub rank: usize,
    pub family: &'a str,
    pub steps: usize,
}

pub fn run_fuzz(args: &FuzzArgs) -> Result<Report> {
    let family = LoopFamily::parse(args.family)?;
    let outcome = fuzz_inequality(args.trials, args.seed, args.dim, args.rank, family, args.steps)?;
    log::info!(
        "fuzzed {} loops: {} violations, worst margin {:+.3e}",
        args.trials,
        outcome.violations,
        outcome.worst_margin
    );
    let trials: Vec<Value> = outcome
        .trials
        .iter()
        .map(|t| {
            json!({
                "family": t.family,
                "length": t.length,
                "bound": t.bound,
                "ratio": ratio_value(t.ratio),
                "margin": t.margin,
                "violation": t.violation,
            })
        })
        .collect();
    Ok(Report::new(
        "fuzz-inequality",
        json!({
            "trials": args.trials,
            "seed": args.seed,
            "dim": args.dim,
            "rank": args.rank,
            "family": family.name(),
            "steps": args.steps,
        }),
        json!({ "inequality_slack": INEQUALITY_SLACK }),
        json!({
            "violations": outcome.violations,
            "min_ratio": ratio_value(outcome.min_ratio),
            "mean_ratio": ratio_value(outcome.mean_ratio),
            "max_ratio": ratio_value(outcome.max_ratio),
            "finite_ratios": outcome.finite_ratios,
            "nonfinite_ratios": outcome.nonfinite_ratios,
            "worst_margin": outcome.worst_margin,
            "trials": trials,
        }),
    ))
}

/// CSV traces exist only for commands that simulate a curve.
pub fn no_trace(command: &str) -> Error {
    Error::Validation(format!("csv output is not available for {command}; use json"))
}
