//! Three-level pulse schemes that generate one- and two-qubit holonomies.
//!
//! One qubit lives in levels (|0>, |1>) of a three-level system whose excited
//! level |e> is driven by a pulse envelope Omega(t) with couplings
//! (omega0, omega1), |omega0|^2 + |omega1|^2 = 1. A pulse of area pi closes
//! the subspace loop and imprints the holonomy
//! [[|omega1|^2 - |omega0|^2, -2 omega0* omega1], [-2 omega0 omega1*, |omega0|^2 - |omega1|^2]].
//! Two qubits use the nine-level product basis ordered
//! {00, 01, 0e, 10, 11, 1e, e0, e1, ee} with the doubly excited level coupled
//! to |00> and |11>, plus spectator exchange couplings on the singly excited
//! levels. The generated gates are the one-parameter families below.

use std::f64::consts::PI;

use crate::bundle::Frame;
use crate::error::{Error, Result};
use crate::linalg::{cr, trapezoid, CMat, C64, I1};
use crate::propagate::{analyze_loop, HamiltonianSchedule, Interpolation, LoopReport};

/// Default number of grid intervals for generated schedules.
pub const DEFAULT_GRID: usize = 4000;

/// One-qubit gate family: [[cos a, e^{-ib} sin a], [e^{ib} sin a, -cos a]].
pub fn gamma_one_matrix(alpha: f64, beta: f64) -> CMat {
    let (ca, sa) = (alpha.cos(), alpha.sin());
    CMat::from_row_slice(
        2,
        2,
        &[
            cr(ca),
            (-I1 * cr(beta)).exp() * sa,
            (I1 * cr(beta)).exp() * sa,
            cr(-ca),
        ],
    )
}

/// Two-qubit gate family on the ordered basis {00, 01, 10, 11}: identity on
/// the middle pair, the one-qubit family on the outer pair.
pub fn gamma_two_matrix(alpha: f64, beta: f64) -> CMat {
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let mut m = CMat::zeros(4, 4);
    m[(0, 0)] = cr(ca);
    m[(0, 3)] = (-I1 * cr(beta)).exp() * sa;
    m[(3, 0)] = (I1 * cr(beta)).exp() * sa;
    m[(3, 3)] = cr(-ca);
    m[(1, 1)] = cr(1.0);
    m[(2, 2)] = cr(1.0);
    m
}

/// Pulse shape on [0, duration] with a prescribed area.
#[derive(Debug, Clone)]
pub enum EnvelopeKind {
    /// Constant Omega = area / duration.
    Square,
    /// Omega(t) = (2 area / duration) sin^2(pi t / duration).
    SinSquared,
    /// Arbitrary nonnegative samples; area fixed by trapezoid quadrature.
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

/// Nonnegative pulse envelope; gate-generating pulses carry area pi.
#[derive(Debug, Clone)]
pub struct PulseEnvelope {
    kind: EnvelopeKind,
    duration: f64,
    area: f64,
}

impl PulseEnvelope {
    pub fn square(duration: f64, area: f64) -> Result<Self> {
        Self::check_scalars(duration, area)?;
        Ok(Self { kind: EnvelopeKind::Square, duration, area })
    }

    pub fn sin_squared(duration: f64, area: f64) -> Result<Self> {
        Self::check_scalars(duration, area)?;
        Ok(Self { kind: EnvelopeKind::SinSquared, duration, area })
    }

    pub fn from_samples(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::Precondition(
                "a sampled envelope needs matching times and values, at least two".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::Validation("envelope samples must start at t = 0".into()));
        }
        for i in 1..times.len() {
            if times[i] <= times[i - 1] {
                return Err(Error::Validation(format!(
                    "envelope times must increase strictly at index {i}"
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Validation("envelope values must be finite and >= 0".into()));
        }
        let duration = *times.last().unwrap();
        let area = trapezoid(&times, &values);
        Ok(Self { kind: EnvelopeKind::Sampled { times, values }, duration, area })
    }

    fn check_scalars(duration: f64, area: f64) -> Result<()> {
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::Domain(format!("envelope duration must be positive, got {duration}")));
        }
        if !(area >= 0.0) || !area.is_finite() {
            return Err(Error::Domain(format!("envelope area must be nonnegative, got {area}")));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn kind(&self) -> &EnvelopeKind {
        &self.kind
    }

    /// Omega(t), clamped to the envelope support.
    pub fn value_at(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        match &self.kind {
            EnvelopeKind::Square => self.area / self.duration,
            EnvelopeKind::SinSquared => {
                2.0 * self.area / self.duration * (PI * t / self.duration).sin().powi(2)
            }
            EnvelopeKind::Sampled { times, values } => {
                let idx = match times
                    .binary_search_by(|s| s.partial_cmp(&t).expect("finite times"))
                {
                    Ok(i) => i,
                    Err(ins) => ins.saturating_sub(1),
                };
                if idx + 1 >= times.len() {
                    values[idx]
                } else {
                    let w = (t - times[idx]) / (times[idx + 1] - times[idx]);
                    values[idx] * (1.0 - w) + values[idx + 1] * w
                }
            }
        }
    }
}

/// One-qubit scheme parameters; the couplings are derived from the two angles.
#[derive(Debug, Clone, Copy)]
pub struct LambdaOneQubit {
    pub alpha: f64,
    pub beta: f64,
}

impl LambdaOneQubit {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain("angles must be finite".into()));
        }
        Ok(Self { alpha, beta })
    }

    /// sin(alpha/2) e^{i beta/2}
    pub fn omega0(&self) -> C64 {
        (I1 * cr(self.beta / 2.0)).exp() * (self.alpha / 2.0).sin()
    }

    /// -cos(alpha/2) e^{-i beta/2}
    pub fn omega1(&self) -> C64 {
        -(-I1 * cr(self.beta / 2.0)).exp() * (self.alpha / 2.0).cos()
    }

    /// The gate this scheme generates with a pi-area pulse.
    pub fn target(&self) -> CMat {
        gamma_one_matrix(self.alpha, self.beta)
    }
}

/// Two-qubit scheme parameters.
#[derive(Debug, Clone, Copy)]
pub struct LambdaTwoQubit {
    pub alpha: f64,
    pub beta: f64,
}

impl LambdaTwoQubit {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain("angles must be finite".into()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn omega00(&self) -> C64 {
        (I1 * cr(self.beta / 2.0)).exp() * (self.alpha / 2.0).sin()
    }

    pub fn omega11(&self) -> C64 {
        -(-I1 * cr(self.beta / 2.0)).exp() * (self.alpha / 2.0).cos()
    }

    pub fn omega0e(&self) -> C64 {
        cr((self.alpha / 2.0).sin())
    }

    pub fn omega1e(&self) -> C64 {
        cr(-(self.alpha / 2.0).cos())
    }

    pub fn target(&self) -> CMat {
        gamma_two_matrix(self.alpha, self.beta)
    }
}

pub fn envelope_schedule(
    base: &CMat,
    envelope: &PulseEnvelope,
    grid: usize,
) -> Result<HamiltonianSchedule> {
    if grid < 2 {
        return Err(Error::Precondition(format!(
            "schedule grid needs at least 2 intervals, got {grid}"
        )));
    }
    let tau = envelope.duration();
    let samples: Vec<(f64, CMat)> = (0..=grid)
        .map(|i| {
            let t = if i == grid { tau } else { tau * i as f64 / grid as f64 };
            (t, base * cr(envelope.value_at(t)))
        })
        .collect();
    HamiltonianSchedule::from_samples(samples, Interpolation::Linear)
}

/// Coupling pattern of the one-qubit scheme on the basis (|0>, |1>, |e>).
fn one_qubit_base(p: &LambdaOneQubit) -> CMat {
    let mut h = CMat::zeros(3, 3);
    let w0 = p.omega0();
    let w1 = p.omega1();
    h[(2, 0)] = w0;
    h[(0, 2)] = w0.conj();
    h[(2, 1)] = w1;
    h[(1, 2)] = w1.conj();
    h
}

/// Driven one-qubit schedule H(t) = Omega(t) (omega0 |e><0| + omega1 |e><1| + h.c.).
pub fn one_qubit_hamiltonian(
    p: &LambdaOneQubit,
    envelope: &PulseEnvelope,
    grid: usize,
) -> Result<HamiltonianSchedule> {
    envelope_schedule(&one_qubit_base(p), envelope, grid)
}

/// Computational frame of the one-qubit scheme: span(|0>, |1>) in C^3.
pub fn one_qubit_frame() -> Frame {
    Frame::standard(3, 2).expect("3 >= 2")
}

/// Basis index of |ab> with a, b in {0, 1, e}: 3a + b, e encoded as 2.
fn idx2(a: usize, b: usize) -> usize {
    3 * a + b
}

fn two_qubit_base(p: &LambdaTwoQubit) -> CMat {
    let e = 2;
    let mut h = CMat::zeros(9, 9);
    let mut couple = |row: usize, col: usize, w: C64| {
        h[(row, col)] = w;
        h[(col, row)] = w.conj();
    };
    // doubly excited level against the outer computational pair
    couple(idx2(e, e), idx2(0, 0), p.omega00());
    couple(idx2(e, e), idx2(1, 1), p.omega11());
    // exchange couplings among singly excited levels; they keep the drive
    // physical but never touch the computational subspace
    couple(idx2(e, 0), idx2(0, e), p.omega0e());
    couple(idx2(e, 1), idx2(1, e), p.omega1e());
    h
}

/// Driven two-qubit schedule H(t) = Omega(t) (H_0 + H_1) on the nine-level basis.
pub fn two_qubit_hamiltonian(
    p: &LambdaTwoQubit,
    envelope: &PulseEnvelope,
    grid: usize,
) -> Result<HamiltonianSchedule> {
    envelope_schedule(&two_qubit_base(p), envelope, grid)
}

/// Computational frame of the two-qubit scheme: span(|00>, |01>, |10>, |11>) in C^9.
pub fn two_qubit_frame() -> Frame {
    let mut m = CMat::zeros(9, 4);
    for (col, idx) in [idx2(0, 0), idx2(0, 1), idx2(1, 0), idx2(1, 1)].iter().enumerate() {
        m[(*idx, col)] = cr(1.0);
    }
    Frame::new(m).expect("columns are distinct basis vectors")
}

/// Drives the schedule around its loop and measures whether the traversal
/// saturates the length bound of the holonomy it produced.
pub fn certify_optimality(schedule: &HamiltonianSchedule, frame: &Frame) -> Result<LoopReport> {
    let steps = schedule.samples().len() - 1;
    analyze_loop(schedule, frame, steps, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, orthonormality_error};
    use std::f64::consts::TAU;

    #[test]
    fn gamma_one_is_hermitian_unitary_with_balanced_spectrum() {
        for (alpha, beta) in [(0.3, 1.1), (PI / 4.0, 0.0), (2.2, -0.7)] {
            let g = gamma_one_matrix(alpha, beta);
            assert!(orthonormality_error(&g) < 1e-12);
            assert!(crate::linalg::hermiticity_error(&g) < 1e-12);
            // Hermitian unitary with zero trace: eigenvalues {1, -1}
            assert!(crate::linalg::trace(&g).norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_one_special_point_is_hadamard() {
        let g = gamma_one_matrix(PI / 4.0, 0.0);
        let h = crate::bounds::named_gate("hadamard").unwrap();
        assert!(frobenius_distance(&g, h.matrix()) < 1e-12);
    }

    #[test]
    fn gamma_two_special_point() {
        let g = gamma_two_matrix(PI, 0.0);
        let expect = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(-1.0),
            cr(1.0),
            cr(1.0),
            cr(1.0),
        ]));
        assert!(frobenius_distance(&g, &expect) < 1e-12);
    }

    #[test]
    fn couplings_are_normalized_and_reproduce_the_gate() {
        let p = LambdaOneQubit::new(0.9, -1.3).unwrap();
        let (w0, w1) = (p.omega0(), p.omega1());
        assert!((w0.norm_sqr() + w1.norm_sqr() - 1.0).abs() < 1e-12);
        // bright-state reflection I - 2|b><b| written in couplings
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = cr(w1.norm_sqr() - w0.norm_sqr());
        m[(0, 1)] = -w0.conj() * w1 * 2.0;
        m[(1, 0)] = -w0 * w1.conj() * 2.0;
        m[(1, 1)] = cr(w0.norm_sqr() - w1.norm_sqr());
        assert!(frobenius_distance(&m, &p.target()) < 1e-12);
    }

    #[test]
    fn envelope_areas_and_values() {
        let sq = PulseEnvelope::square(2.0, PI).unwrap();
        assert!((sq.value_at(0.7) - PI / 2.0).abs() < 1e-12);
        let s2 = PulseEnvelope::sin_squared(2.0, PI).unwrap();
        assert_eq!(s2.value_at(0.0), 0.0);
        assert!((s2.value_at(1.0) - PI).abs() < 1e-12);
        let m = 4000;
        let times: Vec<f64> = (0..=m).map(|i| 2.0 * i as f64 / m as f64).collect();
        let vals: Vec<f64> = times.iter().map(|t| s2.value_at(*t)).collect();
        assert!((trapezoid(&times, &vals) - PI).abs() < 1e-6);
    }

    #[test]
    fn sampled_envelope_validation() {
        assert!(PulseEnvelope::from_samples(vec![0.0, 1.0], vec![1.0, -0.1]).is_err());
        assert!(PulseEnvelope::from_samples(vec![0.5, 1.0], vec![1.0, 1.0]).is_err());
        assert!(PulseEnvelope::from_samples(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        let env = PulseEnvelope::from_samples(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!((env.area() - 1.0).abs() < 1e-12);
        assert!((env.value_at(0.5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_pulse_produces_a_static_loop() {
        let p = LambdaOneQubit::new(1.0, 0.5).unwrap();
        let env = PulseEnvelope::square(1.0, 0.0).unwrap();
        let schedule = one_qubit_hamiltonian(&p, &env, 100).unwrap();
        let report = certify_optimality(&schedule, &one_qubit_frame()).unwrap();
        assert!(report.length <= 1e-12);
        assert_eq!(report.bound, 0.0);
        assert!(!report.ratio.is_finite());
        assert!(!report.is_optimal());
        assert!(frobenius_distance(report.holonomy.matrix(), &CMat::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn pi_pulse_generates_the_hadamard_optimally() {
        let p = LambdaOneQubit::new(PI / 4.0, 0.0).unwrap();
        let env = PulseEnvelope::square(1.0, PI).unwrap();
        let schedule = one_qubit_hamiltonian(&p, &env, DEFAULT_GRID).unwrap();
        let report = certify_optimality(&schedule, &one_qubit_frame()).unwrap();
        let h = crate::bounds::named_gate("hadamard").unwrap();
        assert!(
            frobenius_distance(report.holonomy.matrix(), h.matrix()) < 1e-6,
            "holonomy gap {:.3e}",
            frobenius_distance(report.holonomy.matrix(), h.matrix())
        );
        assert!((report.length - PI).abs() < 1e-4, "length {}", report.length);
        assert!((report.bound - PI).abs() < 1e-5, "bound {}", report.bound);
        assert!(report.is_optimal(), "ratio {}", report.ratio);
        // parallel transport: the dynamical factor is the identity
        assert!(
            frobenius_distance(report.dynamical_operator.matrix(), &CMat::identity(2, 2)) < 1e-6
        );
    }

    #[test]
    fn smooth_pulse_generates_the_same_gate() {
        let p = LambdaOneQubit::new(1.1, 0.4).unwrap();
        let env = PulseEnvelope::sin_squared(1.0, PI).unwrap();
        let schedule = one_qubit_hamiltonian(&p, &env, DEFAULT_GRID).unwrap();
        let report = certify_optimality(&schedule, &one_qubit_frame()).unwrap();
        assert!(frobenius_distance(report.holonomy.matrix(), &p.target()) < 1e-6);
        assert!((report.length - PI).abs() < 1e-4);
        assert!(report.is_optimal());
    }

    #[test]
    fn doubled_area_traverses_twice_and_loses_optimality() {
        let p = LambdaOneQubit::new(PI / 4.0, 0.0).unwrap();
        let env = PulseEnvelope::square(1.0, TAU).unwrap();
        let schedule = one_qubit_hamiltonian(&p, &env, DEFAULT_GRID).unwrap();
        let report = certify_optimality(&schedule, &one_qubit_frame()).unwrap();
        // the doubled loop composes the involution with itself: identity holonomy
        assert!(frobenius_distance(report.holonomy.matrix(), &CMat::identity(2, 2)) < 1e-5);
        assert!((report.length - TAU).abs() < 1e-3, "length {}", report.length);
        assert!(report.bound < 1e-2, "bound {}", report.bound);
        assert!(!report.ratio.is_finite() || report.ratio > 100.0, "ratio {}", report.ratio);
        assert!(!report.is_optimal());
    }

    #[test]
    fn two_qubit_pulse_generates_the_gate_family() {
        let p = LambdaTwoQubit::new(0.8, 1.7).unwrap();
        let env = PulseEnvelope::square(1.0, PI).unwrap();
        let schedule = two_qubit_hamiltonian(&p, &env, DEFAULT_GRID).unwrap();
        let report = certify_optimality(&schedule, &two_qubit_frame()).unwrap();
        assert!(
            frobenius_distance(report.holonomy.matrix(), &p.target()) < 1e-6,
            "holonomy gap {:.3e}",
            frobenius_distance(report.holonomy.matrix(), &p.target())
        );
        assert!((report.length - PI).abs() < 1e-4);
        assert!((report.bound - PI).abs() < 1e-5);
        assert!(report.is_optimal());
    }

    #[test]
    fn computational_frames_are_untouched_by_the_couplings() {
        let p1 = LambdaOneQubit::new(0.6, 0.2).unwrap();
        let b1 = one_qubit_base(&p1);
        let f1 = one_qubit_frame();
        assert!((f1.matrix().adjoint() * &b1 * f1.matrix()).norm() < 1e-15);
        let p2 = LambdaTwoQubit::new(0.6, 0.2).unwrap();
        let b2 = two_qubit_base(&p2);
        let f2 = two_qubit_frame();
        assert!((f2.matrix().adjoint() * &b2 * f2.matrix()).norm() < 1e-15);
    }
}
