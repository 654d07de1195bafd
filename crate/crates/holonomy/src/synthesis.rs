//! Constructive synthesis of bound-saturating loops for a target holonomy.
//!
//! Given a unitary target on an n-dimensional subspace of a d-dimensional
//! space, the planner splits the target into its eigenvector frame, pairs each
//! rotating eigenvector with a direction orthogonal to the whole subspace, and
//! places a static two-level Hamiltonian on each pair. Driving the subspace for
//! one period then traces a loop whose holonomy is exactly the target and whose
//! length equals the spectral lower bound, so every plan produced here is
//! optimal by construction. The module also derives the parallel-transporting
//! companion of an arbitrary Hamiltonian schedule, which generates the same
//! projector motion with an identity dynamical factor.

use std::f64::consts::PI;

use crate::bounds::{isoholonomic_bound, ordered_eigensystem};
use crate::bundle::{Frame, Gate, Projector};
use crate::error::{Error, Result};
use crate::linalg::{cr, frobenius_distance, orthonormal_complement, CMat, CVec, I1};
use crate::propagate::{
    analyze_loop, propagator_on_grid, HamiltonianSchedule, Interpolation, LoopReport,
};

/// Grid intervals used when sampling a plan's parallel companion schedule.
pub const PARALLEL_GRID_INTERVALS: usize = 2048;

/// One rotating plane of a synthesized loop: the eigenvector `a|0> + b|1>`
/// precesses inside span{|0>, |1>} and returns with phase `theta`.
#[derive(Debug, Clone)]
pub struct QubitBlock {
    /// Principal eigenphase of the target on this plane, in (-pi, pi], nonzero.
    pub theta: f64,
    /// The same phase lifted to [0, 2 pi), fixing the occupation b^2.
    pub lifted_phase: f64,
    /// Ground-level amplitude, a = sqrt(1 - b^2) >= 0.
    pub a: f64,
    /// Excited-level amplitude, b = sqrt(lifted_phase / 2 pi) >= 0.
    pub b: f64,
    /// Ground level |0_j>, unit vector in the ambient space.
    pub zero_state: CVec,
    /// Excited level |1_j>, unit vector orthogonal to |0_j>.
    pub one_state: CVec,
}

/// A static-field loop plan whose holonomy is the requested target and whose
/// projector path has minimal length.
#[derive(Debug, Clone)]
pub struct OptimalLoopPlan {
    /// Target gate, coordinates relative to the columns of `reference_frame`.
    pub target: Gate,
    /// Frame spanning the driven subspace at the start and end of the loop.
    pub reference_frame: Frame,
    /// Static Hamiltonian generating the loop.
    pub hamiltonian: CMat,
    /// Parallel-transporting companion of the static field, pre-sampled over
    /// one period for downstream propagation.
    pub parallel_hamiltonian: HamiltonianSchedule,
    /// Loop duration, 2 pi / (eps1 - eps0).
    pub period: f64,
    /// Lower level of every two-level block.
    pub eps0: f64,
    /// Upper level of every two-level block.
    pub eps1: f64,
    /// Target eigenvectors embedded in the ambient space, rotating ones first.
    pub eigen_frame: Frame,
    /// Clamped principal eigenphases, ordered as in `eigen_frame`.
    pub eigenphases: Vec<f64>,
    /// Two-level blocks, one per nonzero eigenphase.
    pub blocks: Vec<QubitBlock>,
}

/// Outcome of simulating a plan, with deviations from the design targets.
#[derive(Debug, Clone)]
pub struct PlanExecution {
    /// Full loop analysis of the simulated drive.
    pub report: LoopReport,
    /// Frobenius distance between the measured holonomy and the target.
    pub holonomy_error: f64,
    /// |measured length - spectral bound of the target|.
    pub length_error: f64,
    /// Spectral length bound of the target gate.
    pub target_bound: f64,
}

/// Plan a loop in d dimensions whose holonomy equals `target` on the subspace
/// spanned by `r_frame`, saturating the length bound.
///
/// The target matrix is read as coordinates in the columns of `r_frame`. With
/// k unit eigenvalues the construction needs d >= 2n - k ambient dimensions,
/// one fresh direction per rotating eigenvector.
pub fn plan_optimal_loop(
    target: &Gate,
    r_frame: &Frame,
    d: usize,
    eps0: f64,
    eps1: f64,
) -> Result<OptimalLoopPlan> {
    if !(eps0 < eps1) || !eps0.is_finite() || !eps1.is_finite() {
        return Err(Error::Domain(format!(
            "block levels must satisfy eps0 < eps1, got {eps0} and {eps1}"
        )));
    }
    if r_frame.dim() != d {
        return Err(Error::Dimension(format!(
            "frame lives in {} dimensions but the plan asks for {d}",
            r_frame.dim()
        )));
    }
    let n = target.dim();
    if r_frame.rank() != n {
        return Err(Error::Dimension(format!(
            "target acts on {n} dimensions but the frame spans {}",
            r_frame.rank()
        )));
    }
    let (eigenphases, eigvecs) = ordered_eigensystem(target)?;
    let k = eigenphases.iter().filter(|t| **t == 0.0).count();
    if d < 2 * n - k {
        return Err(Error::DimensionCondition { dim: d, n, k });
    }

    let eigen_frame = Frame::new(r_frame.matrix() * &eigvecs)?;
    let complement = orthonormal_complement(r_frame.matrix())?;

    let delta = eps1 - eps0;
    let period = 2.0 * PI / delta;
    let mut blocks = Vec::with_capacity(n - k);
    let mut hamiltonian = CMat::zeros(d, d);
    for (j, &theta) in eigenphases.iter().take(n - k).enumerate() {
        let lifted_phase = if theta < 0.0 { theta + 2.0 * PI } else { theta };
        let b = (lifted_phase / (2.0 * PI)).sqrt();
        let a = (1.0 - b * b).max(0.0).sqrt();
        let u = eigen_frame.matrix().column(j);
        let v = complement.column(j);
        let zero_state: CVec = u * cr(a) - v * cr(b);
        let one_state: CVec = u * cr(b) + v * cr(a);
        hamiltonian += &zero_state * zero_state.adjoint() * cr(eps0)
            + &one_state * one_state.adjoint() * cr(eps1);
        blocks.push(QubitBlock { theta, lifted_phase, a, b, zero_state, one_state });
    }
    hamiltonian = (&hamiltonian + hamiltonian.adjoint()) * cr(0.5);

    let parallel_hamiltonian = sample_parallel_field(&blocks, delta, period, d)?;
    Ok(OptimalLoopPlan {
        target: target.clone(),
        reference_frame: r_frame.clone(),
        hamiltonian,
        parallel_hamiltonian,
        period,
        eps0,
        eps1,
        eigen_frame,
        eigenphases,
        blocks,
    })
}

impl OptimalLoopPlan {
    /// The static field as a constant schedule over one period.
    pub fn schedule(&self) -> Result<HamiltonianSchedule> {
        HamiltonianSchedule::constant(self.hamiltonian.clone(), self.period)
    }

    /// Exact value of the parallel-transporting companion field at time t.
    ///
    /// Block by block this is the closed form
    /// delta a b [2 a b (|1><1| - |0><0|) + (a^2 - b^2)(e^{i t delta}|0><1| + h.c.)].
    pub fn parallel_field_at(&self, t: f64) -> CMat {
        let d = self.reference_frame.dim();
        let delta = self.eps1 - self.eps0;
        let mut field = CMat::zeros(d, d);
        for blk in &self.blocks {
            let ab = blk.a * blk.b;
            let diag = cr(2.0 * ab * ab * delta);
            let phase = (I1 * cr(t * delta)).exp() * cr(ab * (blk.a * blk.a - blk.b * blk.b) * delta);
            field += &blk.one_state * blk.one_state.adjoint() * diag
                - &blk.zero_state * blk.zero_state.adjoint() * diag
                + &blk.zero_state * blk.one_state.adjoint() * phase
                + &blk.one_state * blk.zero_state.adjoint() * phase.conj();
        }
        field
    }
}

fn sample_parallel_field(
    blocks: &[QubitBlock],
    delta: f64,
    period: f64,
    d: usize,
) -> Result<HamiltonianSchedule> {
    let mut samples = Vec::with_capacity(PARALLEL_GRID_INTERVALS + 1);
    for i in 0..=PARALLEL_GRID_INTERVALS {
        let t = if i == PARALLEL_GRID_INTERVALS {
            period
        } else {
            i as f64 * period / PARALLEL_GRID_INTERVALS as f64
        };
        let mut field = CMat::zeros(d, d);
        for blk in blocks {
            let ab = blk.a * blk.b;
            let diag = cr(2.0 * ab * ab * delta);
            let phase =
                (I1 * cr(t * delta)).exp() * cr(ab * (blk.a * blk.a - blk.b * blk.b) * delta);
            field += &blk.one_state * blk.one_state.adjoint() * diag
                - &blk.zero_state * blk.zero_state.adjoint() * diag
                + &blk.zero_state * blk.one_state.adjoint() * phase
                + &blk.one_state * blk.zero_state.adjoint() * phase.conj();
        }
        field = (&field + field.adjoint()) * cr(0.5);
        samples.push((t, field));
    }
    HamiltonianSchedule::from_samples(samples, Interpolation::Linear)
}

/// Simulate a plan with the given number of propagation steps and report the
/// measured loop alongside its deviations from the design targets.
pub fn execute_plan(plan: &OptimalLoopPlan, steps: usize) -> Result<PlanExecution> {
    if steps < 100 {
        return Err(Error::Precondition(format!(
            "plan execution needs at least 100 steps, got {steps}"
        )));
    }
    let schedule = plan.schedule()?;
    let report = analyze_loop(&schedule, &plan.reference_frame, steps, None)?;
    let target_bound = isoholonomic_bound(&plan.target)?.bound;
    let holonomy_error = frobenius_distance(report.holonomy.matrix(), plan.target.matrix());
    let length_error = (report.length - target_bound).abs();
    Ok(PlanExecution { report, holonomy_error, length_error, target_bound })
}

/// Parallel-transporting companion of a Hamiltonian schedule.
///
/// Propagates the projector from `p0` under the schedule and returns
/// H P + P H - 2 P H P sampled on the schedule's own grid. The companion
/// generates the identical projector motion while keeping the driven frames
/// horizontal, so its dynamical factor is trivial. Constant schedules use the
/// closed form e^{-itH} (H P + P H - 2 P H P) e^{itH}.
pub fn parallel_companion(
    schedule: &HamiltonianSchedule,
    p0: &Projector,
) -> Result<HamiltonianSchedule> {
    if p0.dim() != schedule.dim() {
        return Err(Error::Dimension(format!(
            "projector dimension {} does not match the schedule dimension {}",
            p0.dim(),
            schedule.dim()
        )));
    }
    let times: Vec<f64> = schedule.samples().iter().map(|(t, _)| *t).collect();
    let samples = if schedule.is_constant() {
        let h = &schedule.samples()[0].1;
        let base = companion_field(h, p0.matrix());
        let sym = h.clone().symmetric_eigen();
        let rotated = sym.eigenvectors.adjoint() * base * &sym.eigenvectors;
        let d = schedule.dim();
        times
            .iter()
            .map(|&t| {
                let mut twisted = CMat::zeros(d, d);
                for r in 0..d {
                    for c in 0..d {
                        let freq = sym.eigenvalues[r] - sym.eigenvalues[c];
                        twisted[(r, c)] = rotated[(r, c)] * (-I1 * cr(t * freq)).exp();
                    }
                }
                let field = &sym.eigenvectors * twisted * sym.eigenvectors.adjoint();
                (t, (&field + field.adjoint()) * cr(0.5))
            })
            .collect()
    } else {
        let propagation = propagator_on_grid(schedule, times.clone())?;
        times
            .iter()
            .zip(&propagation.unitaries)
            .map(|(&t, u)| {
                let p = u * p0.matrix() * u.adjoint();
                let field = companion_field(&schedule.value_at(t), &p);
                (t, (&field + field.adjoint()) * cr(0.5))
            })
            .collect()
    };
    HamiltonianSchedule::from_samples(samples, schedule.interpolation())
}

fn companion_field(h: &CMat, p: &CMat) -> CMat {
    let hp = h * p;
    let ph = p * h;
    &hp + &ph - p * &hp * cr(2.0)
}
