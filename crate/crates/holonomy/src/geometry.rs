//! Metric functionals on projector curves and their frame lifts.
//!
//! The Grassmann metric on projector velocities is (1/2) tr(P1' P2'); the
//! Stiefel metric on frame velocities is (1/2) tr(F1'^dagger F2' + h.c.).
//! Horizontal lifts are isometric to their projector curves, so both length
//! functionals agree on horizontal motion. The skewness of (H, P) is
//! -(1/2) tr([H, P]^2), the squared speed of the motion H generates at P.

use crate::bundle::{Frame, ProjectorCurve};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_error, sampled_derivative, trapezoid, CMat};

/// Length, energy, and averaged speed of one sampled curve.
#[derive(Debug, Clone, Copy)]
pub struct CurveFunctionals {
    pub length: f64,
    pub kinetic_energy: f64,
    pub mean_speed: f64,
    pub duration: f64,
}

/// Squared Grassmann speed (1/2) tr(Pdot^2) of a Hermitian tangent sample.
pub fn grassmann_speed_sq(pdot: &CMat) -> Result<f64> {
    if pdot.nrows() != pdot.ncols() {
        return Err(Error::Dimension(format!(
            "tangent sample must be square, got {}x{}",
            pdot.nrows(),
            pdot.ncols()
        )));
    }
    let herr = hermiticity_error(pdot);
    if herr > 1e-8 {
        return Err(Error::Validation(format!(
            "tangent sample is not Hermitian: deviation {herr:.3e}"
        )));
    }
    // for Hermitian X, tr(X^2) = ||X||_F^2 >= 0
    Ok(0.5 * pdot.norm_squared())
}

/// Squared Stiefel speed tr(Fdot^dagger Fdot) of a frame velocity.
pub fn stiefel_speed_sq(fdot: &CMat) -> f64 {
    fdot.norm_squared()
}

/// Grassmann speed at every sample of the curve (second-order stencils).
pub fn speed_profile(curve: &ProjectorCurve) -> Result<Vec<f64>> {
    let mats: Vec<CMat> = curve.samples().iter().map(|p| p.matrix().clone()).collect();
    let pdots = sampled_derivative(curve.times(), &mats)?;
    pdots
        .iter()
        .map(|pd| grassmann_speed_sq(pd).map(|s| s.max(0.0).sqrt()))
        .collect()
}

/// Length, kinetic energy (1/2 integral of squared speed), and mean speed of a
/// projector curve, by trapezoid quadrature over the sample grid.
pub fn curve_functionals(curve: &ProjectorCurve) -> Result<CurveFunctionals> {
    let speeds = speed_profile(curve)?;
    let times = curve.times();
    let length = trapezoid(times, &speeds);
    let sq: Vec<f64> = speeds.iter().map(|s| s * s).collect();
    let kinetic_energy = 0.5 * trapezoid(times, &sq);
    let duration = curve.duration();
    Ok(CurveFunctionals { length, kinetic_energy, mean_speed: length / duration, duration })
}

/// Curve length alone.
pub fn curve_length(curve: &ProjectorCurve) -> Result<f64> {
    Ok(curve_functionals(curve)?.length)
}

/// Skewness -(1/2) tr([H, P]^2) of a Hermitian generator against a projector;
/// nonnegative, and equal to the squared Grassmann speed of the motion H
/// generates at P. Conserved along the drive when H is time independent.
pub fn skewness(h: &CMat, p: &CMat) -> Result<f64> {
    if h.shape() != p.shape() || h.nrows() != h.ncols() {
        return Err(Error::Dimension(format!(
            "skewness needs equal square shapes, got {}x{} and {}x{}",
            h.nrows(),
            h.ncols(),
            p.nrows(),
            p.ncols()
        )));
    }
    for (m, what) in [(h, "generator"), (p, "projector")] {
        let herr = hermiticity_error(m);
        if herr > 1e-8 {
            return Err(Error::Validation(format!(
                "{what} is not Hermitian: deviation {herr:.3e}"
            )));
        }
    }
    // [H, P] is skew-Hermitian, so -tr([H,P]^2) = ||[H,P]||_F^2
    let c = h * p - p * h;
    Ok(0.5 * c.norm_squared())
}

/// Length of a sampled frame curve in the Stiefel metric.
pub fn stiefel_curve_length(times: &[f64], frames: &[Frame]) -> Result<f64> {
    if times.len() != frames.len() {
        return Err(Error::Dimension("times and frames differ in length".into()));
    }
    let mats: Vec<CMat> = frames.iter().map(|f| f.matrix().clone()).collect();
    let fdots = sampled_derivative(times, &mats)?;
    let speeds: Vec<f64> = fdots.iter().map(|fd| stiefel_speed_sq(fd).max(0.0).sqrt()).collect();
    Ok(trapezoid(times, &speeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::horizontal_lift;
    use crate::linalg::{c, cr, random_frame, random_hermitian, CVec, C64, I1};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::TAU;

    fn qubit_curve_warped(
        a: C64,
        b: C64,
        gap: f64,
        samples: usize,
        warp: impl Fn(f64) -> f64,
    ) -> ProjectorCurve {
        let tau = TAU / gap;
        let mut times = Vec::with_capacity(samples + 1);
        let mut mats = Vec::with_capacity(samples + 1);
        for i in 0..=samples {
            let s = if i == samples { tau } else { tau * i as f64 / samples as f64 };
            let t = warp(s);
            let phase = (I1 * cr(gap * t)).exp();
            let off = a * b.conj() * phase;
            times.push(s);
            mats.push(CMat::from_row_slice(
                2,
                2,
                &[cr(a.norm_sqr()), off, off.conj(), cr(b.norm_sqr())],
            ));
        }
        ProjectorCurve::from_raw(times, mats).unwrap()
    }

    fn qubit_curve(a: C64, b: C64, gap: f64, samples: usize) -> ProjectorCurve {
        qubit_curve_warped(a, b, gap, samples, |s| s)
    }

    #[test]
    fn zero_tangent_has_zero_speed() {
        assert_eq!(grassmann_speed_sq(&CMat::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn speed_matches_entrywise_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let m = random_hermitian(5, &mut rng);
        let oracle: f64 = 0.5 * m.iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert!((grassmann_speed_sq(&m).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn two_level_speed_formula() {
        // Pdot of the driven qubit at t = 0; speed = gap |a||b|
        let (a, b, gap) = (c(0.5, 0.3), cr(0.812403840463596), 1.7);
        assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-12);
        let off = I1 * cr(gap) * a * b.conj();
        let pdot = CMat::from_row_slice(2, 2, &[cr(0.0), off, off.conj(), cr(0.0)]);
        let speed = grassmann_speed_sq(&pdot).unwrap().sqrt();
        assert!((speed - gap * a.norm() * b.norm()).abs() < 1e-12);
    }

    #[test]
    fn constant_curve_has_zero_length() {
        let p = crate::bundle::Frame::standard(3, 1).unwrap().projector().matrix().clone();
        let times: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let curve = ProjectorCurve::from_raw(times, vec![p; 21]).unwrap();
        let f = curve_functionals(&curve).unwrap();
        // uneven float spacing leaves ~1e-15 stencil residue on exact-constant data
        assert!(f.length <= 1e-12);
        assert!(f.kinetic_energy <= 1e-12);
    }

    #[test]
    fn qubit_loop_length_and_energy() {
        let a = cr(0.8);
        let b = cr(0.6);
        let gap = 1.0;
        let curve = qubit_curve(a, b, gap, 2000);
        let f = curve_functionals(&curve).unwrap();
        let expect_len = TAU * a.norm() * b.norm();
        assert!((f.length - expect_len).abs() < 1e-4, "length {}", f.length);
        // constant speed: 2 tau E = L^2 with equality
        let cs = 2.0 * f.duration * f.kinetic_energy;
        assert!((cs - f.length * f.length).abs() / cs < 1e-6);
        assert!((f.mean_speed - gap * a.norm() * b.norm()).abs() < 1e-6);
    }

    #[test]
    fn cauchy_schwarz_on_nonuniform_speed() {
        // warped traversal has the same length but strictly larger energy
        let a = cr(0.8);
        let b = cr(0.6);
        let tau = TAU;
        let warp = |s: f64| s - (tau / TAU) * 0.5 * (TAU * s / tau).sin();
        let curve = qubit_curve_warped(a, b, 1.0, 3000, warp);
        let f = curve_functionals(&curve).unwrap();
        let expect_len = TAU * 0.48;
        assert!((f.length - expect_len).abs() < 1e-3, "length {}", f.length);
        let lhs = 2.0 * f.duration * f.kinetic_energy;
        assert!(lhs > f.length * f.length * (1.0 + 1e-3), "CS should be strict here");
    }

    #[test]
    fn reparameterization_leaves_length_invariant() {
        let a = cr(0.6);
        let b = cr(0.8);
        let plain = qubit_curve(a, b, 1.0, 3000);
        let tau = TAU;
        let warp = |s: f64| s - 0.5 * (s).sin() * (1.0 - (s - tau).exp() * 0.0);
        let warped = qubit_curve_warped(a, b, 1.0, 3000, warp);
        let l0 = curve_length(&plain).unwrap();
        let l1 = curve_length(&warped).unwrap();
        assert!((l0 - l1).abs() < 1e-4, "lengths {l0} vs {l1}");
    }

    #[test]
    fn skewness_commuting_vanishes() {
        let h = CMat::from_diagonal(&CVec::from_vec(vec![cr(1.0), cr(2.0), cr(3.0)]));
        let p = crate::bundle::Frame::standard(3, 2).unwrap().projector().matrix().clone();
        assert_eq!(skewness(&h, &p).unwrap(), 0.0);
    }

    #[test]
    fn skewness_of_transversal_generator_is_trace_formula() {
        // generators with no block-diagonal part satisfy I = tr(H^2 P)
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        for _ in 0..5 {
            let d = 5;
            let h = random_hermitian(d, &mut rng);
            let f = random_frame(d, 2, &mut rng);
            let p = &f * f.adjoint();
            let transversal = &h * &p + &p * &h - &p * &h * &p * cr(2.0);
            let s = skewness(&transversal, &p).unwrap();
            let trace_formula = crate::linalg::trace(&(&transversal * &transversal * &p)).re;
            assert!((s - trace_formula).abs() < 1e-10);
        }
    }

    #[test]
    fn skewness_is_conserved_under_constant_drive() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let h = random_hermitian(4, &mut rng);
        let f = random_frame(4, 2, &mut rng);
        let p0 = &f * f.adjoint();
        let s0 = skewness(&h, &p0).unwrap();
        for &t in &[0.3, 1.1, 2.9] {
            let u = crate::linalg::exp_hermitian_scaled(&h, -I1 * cr(t)).unwrap();
            let pt = &u * &p0 * u.adjoint();
            let st = skewness(&h, &pt).unwrap();
            assert!((st - s0).abs() < 1e-10, "t = {t}: {st} vs {s0}");
        }
    }

    #[test]
    fn skewness_equals_squared_speed_of_generated_motion() {
        let mut rng = ChaCha12Rng::seed_from_u64(24);
        let h = random_hermitian(4, &mut rng);
        let f = random_frame(4, 2, &mut rng);
        let p = &f * f.adjoint();
        let comm = &h * &p - &p * &h;
        let pdot = comm.map(|z| z * -I1);
        let lhs = grassmann_speed_sq(&pdot).unwrap();
        let rhs = skewness(&h, &p).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn vertical_frame_curve_length_closed_form() {
        // F_t = F_0 exp(tW): speed^2 = tr(W^dagger W) everywhere
        let f0 = crate::bundle::Frame::standard(4, 2).unwrap();
        let w = CMat::from_row_slice(
            2,
            2,
            &[c(0.0, 0.9), c(0.25, -0.1), c(-0.25, -0.1), c(0.0, -0.4)],
        );
        let tau = 2.0;
        let samples = 2000;
        let mut times = Vec::new();
        let mut frames = Vec::new();
        for i in 0..=samples {
            let t = if i == samples { tau } else { tau * i as f64 / samples as f64 };
            let v = crate::linalg::exp_skew_hermitian(&(w.clone() * cr(t))).unwrap();
            times.push(t);
            frames.push(Frame::new(f0.matrix() * v).unwrap());
        }
        let len = stiefel_curve_length(&times, &frames).unwrap();
        let expect = tau * w.norm_squared().sqrt();
        assert!((len - expect).abs() < 1e-6, "length {len} vs {expect}");
    }

    #[test]
    fn horizontal_lift_is_isometric() {
        let a = cr(0.8);
        let b = cr(0.6);
        let curve = qubit_curve(a, b, 1.0, 2000);
        let frame = Frame::new(CMat::from_row_slice(2, 1, &[a, b])).unwrap();
        let lift = horizontal_lift(&curve, &frame).unwrap();
        let lp = curve_length(&curve).unwrap();
        let lv = stiefel_curve_length(curve.times(), &lift).unwrap();
        assert!((lp - lv).abs() <= 1e-5 * lp.max(1.0), "{lp} vs {lv}");
    }
}
