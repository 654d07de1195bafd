//! Randomized closed-loop generation for inequality fuzzing.
//!
//! Every family produces a genuinely closed loop, measures its length, and
//! compares against the spectral bound of whatever holonomy the loop actually
//! produced. Families:
//! - `plan`: synthesized bound-saturating loops for random targets (ratio 1),
//! - `snapped`: random constant fields with spectra snapped to the resonance
//!   lattice so the subspace recloses exactly (generic ratios > 1),
//! - `companion`: the same loops re-driven by their parallel-transporting
//!   companion fields (stresses the time-dependent integrator),
//! - `lambda-double`: pulse loops traversed at double area, which close on a
//!   near-identity holonomy and probe the zero-bound sentinel path.

use std::f64::consts::{PI, TAU};

use holonomy::bundle::Frame;
use holonomy::lambda::{one_qubit_frame, one_qubit_hamiltonian, LambdaOneQubit, PulseEnvelope};
use holonomy::linalg::{random_commensurate_hamiltonian, random_frame, random_unitary, CMat};
use holonomy::propagate::{analyze_loop, HamiltonianSchedule, Interpolation, LoopReport};
use holonomy::synthesis::{execute_plan, parallel_companion, plan_optimal_loop};
use holonomy::{Error, Gate, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Loops must not undershoot the bound by more than this.
pub const INEQUALITY_SLACK: f64 = 1e-3;

/// Closure gate for loops that only reclose up to integrator error.
const COMPANION_CLOSURE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopFamily {
    Mixed,
    Plan,
    Snapped,
    Companion,
    LambdaDouble,
}

impl LoopFamily {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "mixed" => Ok(LoopFamily::Mixed),
            "plan" => Ok(LoopFamily::Plan),
            "snapped" => Ok(LoopFamily::Snapped),
            "companion" => Ok(LoopFamily::Companion),
            "lambda-double" => Ok(LoopFamily::LambdaDouble),
            other => Err(Error::Validation(format!("unknown loop family {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LoopFamily::Mixed => "mixed",
            LoopFamily::Plan => "plan",
            LoopFamily::Snapped => "snapped",
            LoopFamily::Companion => "companion",
            LoopFamily::LambdaDouble => "lambda-double",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub family: &'static str,
    pub length: f64,
    pub bound: f64,
    pub ratio: f64,
    pub margin: f64,
    pub violation: bool,
}

#[derive(Debug, Clone)]
pub struct FuzzOutcome {
    pub trials: Vec<TrialRecord>,
    pub violations: usize,
    pub finite_ratios: usize,
    pub nonfinite_ratios: usize,
    /// Min/mean/max over the finite ratios only; NaN when none are finite.
    pub min_ratio: f64,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    /// Smallest length - bound over all trials; the inequality demands this
    /// stays above -INEQUALITY_SLACK.
    pub worst_margin: f64,
}

fn record(family: &'static str, report: &LoopReport) -> TrialRecord {
    let margin = report.length - report.bound;
    TrialRecord {
        family,
        length: report.length,
        bound: report.bound,
        ratio: report.ratio,
        margin,
        violation: margin < -INEQUALITY_SLACK,
    }
}

fn constant_on_grid(h: CMat, tau: f64, intervals: usize) -> Result<HamiltonianSchedule> {
    let samples: Vec<(f64, CMat)> = (0..=intervals)
        .map(|i| {
            let t = if i == intervals { tau } else { i as f64 * tau / intervals as f64 };
            (t, h.clone())
        })
        .collect();
    HamiltonianSchedule::from_samples(samples, Interpolation::Linear)
}

fn plan_trial(dim: usize, rank: usize, steps: usize, rng: &mut ChaCha12Rng) -> Result<TrialRecord> {
    let target = Gate::in_standard_basis(random_unitary(rank, rng))?;
    let frame = Frame::new(random_frame(dim, rank, rng))?;
    let plan = plan_optimal_loop(&target, &frame, dim, 0.0, 1.0)?;
    let run = execute_plan(&plan, steps)?;
    Ok(record("plan", &run.report))
}

fn snapped_trial(
    dim: usize,
    rank: usize,
    steps: usize,
    rng: &mut ChaCha12Rng,
) -> Result<TrialRecord> {
    let h = random_commensurate_hamiltonian(dim, TAU, 2, rng);
    let frame = Frame::new(random_frame(dim, rank, rng))?;
    let schedule = HamiltonianSchedule::constant(h, TAU)?;
    let report = analyze_loop(&schedule, &frame, steps, None)?;
    Ok(record("snapped", &report))
}

fn companion_trial(
    dim: usize,
    rank: usize,
    steps: usize,
    rng: &mut ChaCha12Rng,
) -> Result<TrialRecord> {
    let h = random_commensurate_hamiltonian(dim, TAU, 1, rng);
    let frame = Frame::new(random_frame(dim, rank, rng))?;
    let grid = steps.min(2048);
    let schedule = constant_on_grid(h, TAU, grid)?;
    let companion = parallel_companion(&schedule, &frame.projector())?;
    let report = analyze_loop(&companion, &frame, steps, Some(COMPANION_CLOSURE_TOL))?;
    Ok(record("companion", &report))
}

fn lambda_double_trial(steps: usize, rng: &mut ChaCha12Rng) -> Result<TrialRecord> {
    let alpha: f64 = rng.gen_range(0.0..PI);
    let beta: f64 = rng.gen_range(-PI..PI);
    let params = LambdaOneQubit::new(alpha, beta)?;
    let envelope = if rng.gen_bool(0.5) {
        PulseEnvelope::square(1.0, 2.0 * PI)?
    } else {
        PulseEnvelope::sin_squared(1.0, 2.0 * PI)?
    };
    let schedule = one_qubit_hamiltonian(&params, &envelope, steps.max(2))?;
    let report = analyze_loop(&schedule, &one_qubit_frame(), steps, None)?;
    Ok(record("lambda-double", &report))
}

/// Run `trials` random closed loops and check each against the bound.
pub fn fuzz_inequality(
    trials: usize,
    seed: u64,
    dim: usize,
    rank: usize,
    family: LoopFamily,
    steps: usize,
) -> Result<FuzzOutcome> {
    if trials == 0 {
        return Err(Error::Validation("fuzzing needs at least one trial".into()));
    }
    if rank == 0 || rank >= dim {
        return Err(Error::Validation(format!(
            "rank must satisfy 1 <= rank < dim, got rank {rank}, dim {dim}"
        )));
    }
    let needs_plans = matches!(family, LoopFamily::Mixed | LoopFamily::Plan);
    if needs_plans && dim < 2 * rank {
        return Err(Error::Validation(format!(
            "plan loops need dim >= 2 rank for full-rotation targets, got dim {dim}, rank {rank}"
        )));
    }
    if steps < 2 {
        return Err(Error::Validation("fuzzing needs at least two steps".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(trials);
    for i in 0..trials {
        let pick = match family {
            LoopFamily::Mixed => match i % 4 {
                0 => LoopFamily::Plan,
                1 => LoopFamily::Snapped,
                2 => LoopFamily::Companion,
                _ => LoopFamily::LambdaDouble,
            },
            other => other,
        };
        let rec = match pick {
            LoopFamily::Plan => plan_trial(dim, rank, steps, &mut rng)?,
            LoopFamily::Snapped => snapped_trial(dim, rank, steps, &mut rng)?,
            LoopFamily::Companion => companion_trial(dim, rank, steps, &mut rng)?,
            LoopFamily::LambdaDouble => lambda_double_trial(steps, &mut rng)?,
            LoopFamily::Mixed => unreachable!("mixed resolves to a concrete family"),
        };
        log::debug!(
            "trial {i}: family {}, length {:.6}, bound {:.6}, margin {:+.3e}",
            rec.family,
            rec.length,
            rec.bound,
            rec.margin
        );
        records.push(rec);
    }
    let violations = records.iter().filter(|r| r.violation).count();
    let finite: Vec<f64> = records.iter().map(|r| r.ratio).filter(|r| r.is_finite()).collect();
    let (min_ratio, mean_ratio, max_ratio) = if finite.is_empty() {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        let min = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean = finite.iter().sum::<f64>() / finite.len() as f64;
        (min, mean, max)
    };
    let worst_margin = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(FuzzOutcome {
        violations,
        finite_ratios: finite.len(),
        nonfinite_ratios: records.len() - finite.len(),
        min_ratio,
        mean_ratio,
        max_ratio,
        worst_margin,
        trials: records,
    })
}
