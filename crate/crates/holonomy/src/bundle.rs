//! The Stiefel-Grassmann bundle: orthonormal frames over rank-n projectors.
//!
//! A frame F (d x n, F^dagger F = I) sits over the projector P = F F^dagger.
//! The connection A(F') = F^dagger F' vanishes exactly on horizontal motion;
//! transporting a frame horizontally around a closed projector loop returns it
//! rotated by the holonomy gate, measured here relative to the starting frame.

use crate::error::{Error, Result};
use crate::linalg::{
    cr, frobenius_distance, hermitian_operator_norm, hermiticity_error, orthonormality_error,
    polar_orthonormalize, sampled_derivative, CMat,
};
use crate::propagate::{ordered_exponential, HamiltonianSchedule, OrderDirection};

/// Orthonormal columns to 1e-10.
pub const FRAME_TOL: f64 = 1e-10;
/// Projector hermiticity/idempotency to 1e-10, integer trace to 1e-8.
pub const PROJECTOR_TOL: f64 = 1e-10;
/// Gates must be unitary to 1e-8 (measured holonomies carry transport error).
pub const GATE_TOL: f64 = 1e-8;

/// Default closure gate for a rank-n loop: ||P(tau) - P(0)||_F <= 1e-8 sqrt(2n).
/// sqrt(2n) is the diameter scale of rank-n projectors in Frobenius norm.
pub fn closure_tolerance(rank: usize) -> f64 {
    1e-8 * (2.0 * rank as f64).sqrt()
}

/// d x n matrix with orthonormal columns spanning a rank-n subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    matrix: CMat,
}

impl Frame {
    pub fn new(matrix: CMat) -> Result<Self> {
        let (d, n) = matrix.shape();
        if n == 0 || n > d {
            return Err(Error::Dimension(format!(
                "a frame needs 1 <= n <= d columns, got {d}x{n}"
            )));
        }
        let err = orthonormality_error(&matrix);
        if err > FRAME_TOL {
            return Err(Error::Validation(format!(
                "frame columns are not orthonormal: deviation {err:.3e} > {FRAME_TOL:.1e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// For frames produced by unitary action on an already validated frame.
    pub(crate) fn new_unchecked(matrix: CMat) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn projector(&self) -> Projector {
        let p = &self.matrix * self.matrix.adjoint();
        Projector { matrix: p, rank: self.rank() }
    }

    /// Identity frame: the first n standard basis vectors of C^d.
    pub fn standard(d: usize, n: usize) -> Result<Self> {
        if n == 0 || n > d {
            return Err(Error::Dimension(format!("standard frame needs 1 <= n <= d, got d={d} n={n}")));
        }
        Ok(Self { matrix: CMat::identity(d, d).columns(0, n).into_owned() })
    }
}

/// Rank-n orthogonal projector: Hermitian, idempotent, integer trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMat,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "projector must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herr = hermiticity_error(&matrix);
        if herr > PROJECTOR_TOL {
            return Err(Error::Validation(format!(
                "projector is not Hermitian: deviation {herr:.3e}"
            )));
        }
        let idem = frobenius_distance(&(&matrix * &matrix), &matrix);
        if idem > PROJECTOR_TOL {
            return Err(Error::Validation(format!(
                "projector is not idempotent: ||P^2 - P|| = {idem:.3e}"
            )));
        }
        let tr = crate::linalg::trace(&matrix).re;
        let rank = tr.round();
        if (tr - rank).abs() > 1e-8 || rank < 1.0 {
            return Err(Error::Validation(format!(
                "projector trace {tr} is not a positive integer"
            )));
        }
        Ok(Self { matrix, rank: rank as usize })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Unitary gate matrix expressed in the basis given by a reference frame.
#[derive(Debug, Clone)]
pub struct Gate {
    matrix: CMat,
    reference_frame: Frame,
}

impl Gate {
    pub fn new(matrix: CMat, reference_frame: Frame) -> Result<Self> {
        let n = reference_frame.rank();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "gate is {}x{} but the reference frame has rank {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let uerr = orthonormality_error(&matrix);
        if uerr > GATE_TOL {
            return Err(Error::Validation(format!(
                "gate is not unitary: ||U^dagger U - I|| = {uerr:.3e} > {GATE_TOL:.1e}"
            )));
        }
        Ok(Self { matrix, reference_frame })
    }

    /// Gate written in the standard basis of C^n (reference frame = identity).
    pub fn in_standard_basis(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 {
            return Err(Error::Dimension("empty gate".into()));
        }
        let frame = Frame::standard(n, n)?;
        Self::new(matrix, frame)
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn reference_frame(&self) -> &Frame {
        &self.reference_frame
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Projector samples on a strictly increasing time grid starting at 0.
#[derive(Debug, Clone)]
pub struct ProjectorCurve {
    times: Vec<f64>,
    samples: Vec<Projector>,
}

impl ProjectorCurve {
    pub fn from_projectors(times: Vec<f64>, samples: Vec<Projector>) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(Error::Dimension("times and samples differ in length".into()));
        }
        if times.len() < 2 {
            return Err(Error::Precondition("a curve needs at least two samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::Validation(format!("curve must start at t = 0, got {}", times[0])));
        }
        for i in 1..times.len() {
            if times[i] <= times[i - 1] {
                return Err(Error::Validation(format!(
                    "sample times must increase strictly; duplicate or reversed time at index {i}"
                )));
            }
        }
        let (d, n) = (samples[0].dim(), samples[0].rank());
        for (i, p) in samples.iter().enumerate() {
            if p.dim() != d || p.rank() != n {
                return Err(Error::Dimension(format!(
                    "sample {i} has dim {} rank {}, expected dim {d} rank {n}",
                    p.dim(),
                    p.rank()
                )));
            }
        }
        Ok(Self { times, samples })
    }

    pub fn from_raw(times: Vec<f64>, matrices: Vec<CMat>) -> Result<Self> {
        let samples = matrices.into_iter().map(Projector::new).collect::<Result<Vec<_>>>()?;
        Self::from_projectors(times, samples)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[Projector] {
        &self.samples
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn rank(&self) -> usize {
        self.samples[0].rank()
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn closure_residual(&self) -> f64 {
        frobenius_distance(self.samples.last().unwrap().matrix(), self.samples[0].matrix())
    }
}

/// Connection one-form A(F') = F^dagger F'; skew-Hermitian on tangent motion,
/// zero exactly when the motion is horizontal.
pub fn connection_form(frame: &Frame, velocity: &CMat) -> Result<CMat> {
    if velocity.shape() != frame.matrix().shape() {
        return Err(Error::Dimension(format!(
            "velocity is {}x{}, frame is {}x{}",
            velocity.nrows(),
            velocity.ncols(),
            frame.dim(),
            frame.rank()
        )));
    }
    Ok(frame.matrix().adjoint() * velocity)
}

fn check_step_resolution(curve: &ProjectorCurve) -> Result<()> {
    for i in 1..curve.samples.len() {
        let diff = curve.samples[i].matrix() - curve.samples[i - 1].matrix();
        // cheap Frobenius bound first; ||.||_2 <= ||.||_F so most grids pass here
        if diff.norm() >= 1.0 {
            let spectral = hermitian_operator_norm(&diff);
            if spectral >= 1.0 {
                return Err(Error::Resolution(format!(
                    "consecutive projectors at step {i} are {spectral:.3} apart in operator norm; \
                     transport needs ||P_(i+1) - P_i||_2 < 1"
                )));
            }
        }
    }
    Ok(())
}

/// Horizontal lift of a projector curve starting at `frame`.
///
/// Integrates F' = P' F with the explicit midpoint rule (P' from second-order
/// stencils on the grid, exact midpoint difference across each step) and
/// projects every step onto the fiber of the next projector by polar
/// decomposition, so F_i F_i^dagger = P(t_i) holds to roundoff throughout.
pub fn horizontal_lift(curve: &ProjectorCurve, frame: &Frame) -> Result<Vec<Frame>> {
    if frame.dim() != curve.dim() || frame.rank() != curve.rank() {
        return Err(Error::Dimension(format!(
            "frame {}x{} does not match curve with dim {} rank {}",
            frame.dim(),
            frame.rank(),
            curve.dim(),
            curve.rank()
        )));
    }
    let start_gap = frobenius_distance(frame.projector().matrix(), curve.samples[0].matrix());
    if start_gap > 1e-8 {
        return Err(Error::Precondition(format!(
            "frame does not span the initial projector: gap {start_gap:.3e} > 1e-8"
        )));
    }
    if curve.samples.len() < 3 {
        return Err(Error::Precondition(
            "horizontal transport needs at least three samples for the derivative stencils".into(),
        ));
    }
    check_step_resolution(curve)?;
    let times = curve.times();
    let mats: Vec<CMat> = curve.samples.iter().map(|p| p.matrix().clone()).collect();
    let pdots = sampled_derivative(times, &mats)?;
    let mut lift = Vec::with_capacity(mats.len());
    lift.push(frame.clone());
    for i in 0..mats.len() - 1 {
        let h = times[i + 1] - times[i];
        let f_i = lift[i].matrix();
        let k1 = &pdots[i] * f_i;
        let f_half = f_i + &k1 * cr(0.5 * h);
        let pdot_mid = (&mats[i + 1] - &mats[i]) * cr(1.0 / h);
        let f_raw = f_i + pdot_mid * f_half * cr(h);
        let projected = polar_orthonormalize(&(&mats[i + 1] * f_raw))?;
        lift.push(Frame::new_unchecked(projected));
    }
    Ok(lift)
}

/// Holonomy of a closed curve relative to `frame`, with the default closure gate.
pub fn holonomy_of_curve(curve: &ProjectorCurve, frame: &Frame) -> Result<Gate> {
    holonomy_of_curve_with(curve, frame, closure_tolerance(curve.rank()))
}

/// Holonomy with an explicit closure tolerance; the matrix is F_0^dagger F_M
/// for the horizontal lift F, so gauge changes F_0 -> F_0 V conjugate it.
pub fn holonomy_of_curve_with(
    curve: &ProjectorCurve,
    frame: &Frame,
    closure_tol: f64,
) -> Result<Gate> {
    let residual = curve.closure_residual();
    if residual > closure_tol {
        return Err(Error::Closure { residual, tolerance: closure_tol });
    }
    let lift = horizontal_lift(curve, frame)?;
    let last = lift.last().unwrap();
    let gamma = frame.matrix().adjoint() * last.matrix();
    Gate::new(gamma, frame.clone()).map_err(|e| {
        Error::Numerical(format!("measured holonomy drifted from unitarity: {e}"))
    })
}

/// Holonomy from an arbitrary (not necessarily horizontal) lift of a closed
/// curve: (F_0^dagger F_M) times the forward-ordered exponential of -A along
/// the lift. Gauge distortions of the lift cancel exactly.
pub fn holonomy_from_any_lift(times: &[f64], frames: &[Frame]) -> Result<Gate> {
    if frames.is_empty() {
        return Err(Error::Precondition("empty lift".into()));
    }
    holonomy_from_any_lift_with(times, frames, closure_tolerance(frames[0].rank()))
}

pub fn holonomy_from_any_lift_with(
    times: &[f64],
    frames: &[Frame],
    closure_tol: f64,
) -> Result<Gate> {
    if times.len() != frames.len() {
        return Err(Error::Dimension("times and frames differ in length".into()));
    }
    if times.len() < 3 {
        return Err(Error::Precondition("a lift needs at least three samples".into()));
    }
    let first = &frames[0];
    let last = frames.last().unwrap();
    let residual =
        frobenius_distance(last.projector().matrix(), first.projector().matrix());
    if residual > closure_tol {
        return Err(Error::Closure { residual, tolerance: closure_tol });
    }
    let mats: Vec<CMat> = frames.iter().map(|f| f.matrix().clone()).collect();
    let fdots = sampled_derivative(times, &mats)?;
    let minus_a: Vec<CMat> = mats
        .iter()
        .zip(&fdots)
        .map(|(f, fd)| {
            let a = f.adjoint() * fd;
            // the exact connection is skew-Hermitian; drop the O(h^2) symmetric
            // part the stencils introduce
            (a.adjoint() - &a) * cr(0.5)
        })
        .collect();
    let k = ordered_exponential(times, &minus_a, OrderDirection::Forward)?;
    let gamma = (first.matrix().adjoint() * last.matrix()) * k;
    Gate::new(gamma, first.clone())
        .map_err(|e| Error::Numerical(format!("lift holonomy drifted from unitarity: {e}")))
}

/// Backward-ordered dynamical factor of a schedule that drives `frame` around
/// a closed loop; the loop unitary restricted to the subspace splits as
/// holonomy times this factor.
pub fn dynamical_operator(
    schedule: &HamiltonianSchedule,
    frame: &Frame,
    steps: usize,
) -> Result<Gate> {
    dynamical_operator_with(schedule, frame, steps, None)
}

/// Same as [`dynamical_operator`] but with an explicit closure tolerance for
/// curves that only close up to integrator error.
pub fn dynamical_operator_with(
    schedule: &HamiltonianSchedule,
    frame: &Frame,
    steps: usize,
    closure_tolerance_override: Option<f64>,
) -> Result<Gate> {
    let (curve, frames) = crate::propagate::drive_subspace(schedule, frame, steps)?;
    let residual = curve.closure_residual();
    let tol = closure_tolerance_override.unwrap_or_else(|| closure_tolerance(frame.rank()));
    if residual > tol {
        return Err(Error::Closure { residual, tolerance: tol });
    }
    dynamical_operator_along(schedule, &frames, curve.times(), frame)
}

/// Dynamical factor evaluated along already-propagated frames.
pub(crate) fn dynamical_operator_along(
    schedule: &HamiltonianSchedule,
    frames: &[Frame],
    times: &[f64],
    reference: &Frame,
) -> Result<Gate> {
    let integrand: Vec<CMat> = frames
        .iter()
        .zip(times)
        .map(|(f, &t)| {
            let b = f.matrix().adjoint() * schedule.value_at(t) * f.matrix();
            // -i B for Hermitian B, symmetrized against roundoff
            let herm = (&b + b.adjoint()) * cr(0.5);
            herm.map(|z| z * crate::linalg::I1 * cr(-1.0))
        })
        .collect();
    let d = ordered_exponential(times, &integrand, OrderDirection::Backward)?;
    Gate::new(d, reference.clone())
        .map_err(|e| Error::Numerical(format!("dynamical factor drifted from unitarity: {e}")))
}
