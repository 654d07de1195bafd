//! Lower bounds on loop length and runtime from the holonomy spectrum.
//!
//! A target gate with eigenvalue phases theta_j in (-pi, pi] cannot be
//! generated by a loop shorter than sqrt(sum_j |theta_j| (2 pi - |theta_j|)).
//! Dividing by the time-averaged speed of the driven subspace turns the length
//! bound into a runtime bound.

use std::f64::consts::PI;

use crate::bundle::Gate;
use crate::error::{Error, Result};
use crate::linalg::{cr, principal_phase, unitary_eigen, CMat, I1};

/// Eigenphases within 1e-9 of zero count as exact unit eigenvalues.
pub const PHASE_TOL: f64 = 1e-9;

/// Spectrum-derived length bound for one gate.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Principal eigenphases, descending in magnitude, ties broken by signed
    /// value descending. Sub-tolerance phases are clamped to exactly zero.
    pub eigenphases: Vec<f64>,
    /// sqrt(sum |theta| (2 pi - |theta|)) over the reported phases.
    pub bound: f64,
    /// Number of clamped (unit-eigenvalue) phases.
    pub unit_eigenvalue_count: usize,
}

/// Length bound contributed by a single eigenphase in (-pi, pi].
pub fn state_bound(theta: f64) -> Result<f64> {
    if !theta.is_finite() || theta <= -PI || theta > PI {
        return Err(Error::Domain(format!(
            "eigenphase must lie in (-pi, pi], got {theta}"
        )));
    }
    Ok((theta.abs() * (2.0 * PI - theta.abs())).sqrt())
}

fn bound_from_phases(phases: &[f64]) -> f64 {
    phases.iter().map(|t| t.abs() * (2.0 * PI - t.abs())).sum::<f64>().sqrt()
}

/// Clamped principal eigenphases in canonical order (magnitude descending,
/// ties by signed value descending, unit eigenvalues last) together with the
/// matching orthonormal eigenvector columns.
pub fn ordered_eigensystem(gate: &Gate) -> Result<(Vec<f64>, CMat)> {
    let (eigenvalues, vectors) = unitary_eigen(gate.matrix())?;
    let phases: Vec<f64> = eigenvalues
        .into_iter()
        .map(|z| {
            let theta = principal_phase(z);
            if theta.abs() <= PHASE_TOL {
                0.0
            } else {
                theta
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..phases.len()).collect();
    order.sort_by(|&i, &j| {
        (phases[j].abs(), phases[j])
            .partial_cmp(&(phases[i].abs(), phases[i]))
            .expect("eigenphases are finite")
    });
    let n = phases.len();
    let mut sorted_vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    let sorted_phases: Vec<f64> = order.iter().map(|&i| phases[i]).collect();
    Ok((sorted_phases, sorted_vectors))
}

/// Principal eigenphases and the loop length bound of a gate.
pub fn isoholonomic_bound(gate: &Gate) -> Result<SpectralReport> {
    let (eigenphases, _) = ordered_eigensystem(gate)?;
    let unit_eigenvalue_count = eigenphases.iter().filter(|t| **t == 0.0).count();
    let bound = bound_from_phases(&eigenphases);
    Ok(SpectralReport { eigenphases, bound, unit_eigenvalue_count })
}

/// Discrete Fourier transform on n points, entries e^{2 pi i jk / n} / sqrt(n).
pub fn dft_matrix(n: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::Domain("transform size must be at least 1".into()));
    }
    let scale = cr(1.0 / (n as f64).sqrt());
    Ok(CMat::from_fn(n, n, |j, k| {
        let angle = 2.0 * PI * (j as f64) * (k as f64) / n as f64;
        (I1 * cr(angle)).exp() * scale
    }))
}

/// Closed-form length bound for the n-point Fourier transform. Its eigenvalue
/// multiplicities over {1, -1, -i, i} are floor((n+4)/4), floor((n+2)/4),
/// floor((n+1)/4), floor((n-1)/4), so only the last three phases contribute.
pub fn qft_bound(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("transform size must be at least 1".into()));
    }
    let m_minus = ((n + 2) / 4) as f64;
    let m_minus_i = ((n + 1) / 4) as f64;
    let m_plus_i = ((n - 1) / 4) as f64;
    Ok(PI * (m_minus + 0.75 * (m_minus_i + m_plus_i)).sqrt())
}

/// Runtime bound: length bound over the time-averaged subspace speed.
pub fn runtime_bound(bound: f64, mean_speed: f64) -> Result<f64> {
    if !(bound >= 0.0) || !bound.is_finite() {
        return Err(Error::Domain(format!("length bound must be nonnegative, got {bound}")));
    }
    if !(mean_speed > 0.0) || !mean_speed.is_finite() {
        return Err(Error::Domain(format!(
            "mean speed must be positive, got {mean_speed}"
        )));
    }
    Ok(bound / mean_speed)
}

/// Fixed-name gates accepted anywhere a target gate is expected.
///
/// Keys: `hadamard`, `phase_s`, `pi8_t`, `cnot`, `qft:<n>`,
/// `gamma1:<alpha>:<beta>`, `gamma2:<alpha>:<beta>` (angles in radians).
pub fn named_gate(key: &str) -> Result<Gate> {
    let parts: Vec<&str> = key.split(':').collect();
    let matrix = match parts.as_slice() {
        ["hadamard"] => {
            let s = cr(std::f64::consts::FRAC_1_SQRT_2);
            CMat::from_row_slice(2, 2, &[s, s, s, -s])
        }
        ["phase_s"] => CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), I1]),
        ["pi8_t"] => {
            let t = (I1 * cr(PI / 4.0)).exp();
            CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), t])
        }
        ["cnot"] => {
            let mut m = CMat::zeros(4, 4);
            m[(0, 0)] = cr(1.0);
            m[(1, 1)] = cr(1.0);
            m[(2, 3)] = cr(1.0);
            m[(3, 2)] = cr(1.0);
            m
        }
        ["qft", size] => {
            let n: usize = size.parse().map_err(|_| {
                Error::Validation(format!("bad transform size in gate key '{key}'"))
            })?;
            dft_matrix(n)?
        }
        ["gamma1", alpha, beta] => {
            let (a, b) = parse_angles(key, alpha, beta)?;
            crate::lambda::gamma_one_matrix(a, b)
        }
        ["gamma2", alpha, beta] => {
            let (a, b) = parse_angles(key, alpha, beta)?;
            crate::lambda::gamma_two_matrix(a, b)
        }
        _ => {
            return Err(Error::Validation(format!(
                "unknown gate key '{key}'; expected hadamard, phase_s, pi8_t, cnot, \
                 qft:<n>, gamma1:<alpha>:<beta>, or gamma2:<alpha>:<beta>"
            )))
        }
    };
    Gate::in_standard_basis(matrix)
}

fn parse_angles(key: &str, alpha: &str, beta: &str) -> Result<(f64, f64)> {
    let a: f64 = alpha
        .parse()
        .map_err(|_| Error::Validation(format!("bad alpha in gate key '{key}'")))?;
    let b: f64 = beta
        .parse()
        .map_err(|_| Error::Validation(format!("bad beta in gate key '{key}'")))?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Validation(format!("angles in '{key}' must be finite")));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{direct_sum, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    const TOL: f64 = 1e-10;

    #[test]
    fn state_bound_reference_values() {
        assert_eq!(state_bound(0.0).unwrap(), 0.0);
        assert!((state_bound(PI).unwrap() - PI).abs() < TOL);
        let two_thirds = 2.0 * PI / 3.0;
        assert!((state_bound(two_thirds).unwrap() - 2.0 * PI * 2.0f64.sqrt() / 3.0).abs() < TOL);
        assert!((state_bound(-two_thirds).unwrap() - state_bound(two_thirds).unwrap()).abs() < TOL);
    }

    #[test]
    fn state_bound_domain() {
        assert!(matches!(state_bound(-PI), Err(Error::Domain(_))));
        assert!(matches!(state_bound(4.0), Err(Error::Domain(_))));
        assert!(matches!(state_bound(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_gate_has_zero_bound() {
        let g = Gate::in_standard_basis(CMat::identity(3, 3)).unwrap();
        let r = isoholonomic_bound(&g).unwrap();
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.unit_eigenvalue_count, 3);
        assert!(r.eigenphases.iter().all(|t| *t == 0.0));
    }

    #[test]
    fn standard_gate_bounds() {
        let cases: [(&str, f64); 4] = [
            ("hadamard", PI),
            ("phase_s", PI * 3.0f64.sqrt() / 2.0),
            ("pi8_t", PI * 7.0f64.sqrt() / 4.0),
            ("cnot", PI),
        ];
        for (key, expect) in cases {
            let r = isoholonomic_bound(&named_gate(key).unwrap()).unwrap();
            assert!((r.bound - expect).abs() < TOL, "{key}: {} vs {expect}", r.bound);
        }
    }

    #[test]
    fn cnot_spectrum_and_ordering() {
        let r = isoholonomic_bound(&named_gate("cnot").unwrap()).unwrap();
        assert_eq!(r.unit_eigenvalue_count, 3);
        assert!((r.eigenphases[0] - PI).abs() < TOL);
        assert_eq!(&r.eigenphases[1..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn ordering_breaks_magnitude_ties_by_sign() {
        let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            (I1 * cr(-PI / 2.0)).exp(),
            (I1 * cr(PI / 2.0)).exp(),
        ]));
        let r = isoholonomic_bound(&Gate::in_standard_basis(m).unwrap()).unwrap();
        assert!((r.eigenphases[0] - PI / 2.0).abs() < TOL);
        assert!((r.eigenphases[1] + PI / 2.0).abs() < TOL);
    }

    #[test]
    fn qft_bound_small_sizes() {
        assert_eq!(qft_bound(1).unwrap(), 0.0);
        assert!((qft_bound(2).unwrap() - PI).abs() < TOL);
        assert!((qft_bound(4).unwrap() - PI * 7.0f64.sqrt() / 2.0).abs() < TOL);
        assert!(matches!(qft_bound(0), Err(Error::Domain(_))));
    }

    #[test]
    fn qft_bound_matches_spectrum_up_to_16() {
        for n in 1..=16 {
            let g = Gate::in_standard_basis(dft_matrix(n).unwrap()).unwrap();
            let spectral = isoholonomic_bound(&g).unwrap();
            let closed = qft_bound(n).unwrap();
            assert!(
                (spectral.bound - closed).abs() < 1e-8,
                "n = {n}: spectral {} vs closed form {closed}",
                spectral.bound
            );
        }
    }

    #[test]
    fn dft4_multiplicities() {
        let g = Gate::in_standard_basis(dft_matrix(4).unwrap()).unwrap();
        let r = isoholonomic_bound(&g).unwrap();
        // char poly (x-1)^2 (x+1) (x-i): phases {pi, pi/2, 0, 0}
        assert_eq!(r.unit_eigenvalue_count, 2);
        assert!((r.eigenphases[0] - PI).abs() < 1e-10);
        assert!((r.eigenphases[1] - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn bound_is_conjugation_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let g = named_gate("qft:5").unwrap();
        let v = random_unitary(5, &mut rng);
        let conj = v.adjoint() * g.matrix() * &v;
        let r0 = isoholonomic_bound(&g).unwrap();
        let r1 = isoholonomic_bound(&Gate::in_standard_basis(conj).unwrap()).unwrap();
        assert!((r0.bound - r1.bound).abs() < 1e-9);
    }

    #[test]
    fn bound_squares_add_over_direct_sums() {
        let a = named_gate("phase_s").unwrap();
        let b = named_gate("hadamard").unwrap();
        let sum = Gate::in_standard_basis(direct_sum(a.matrix(), b.matrix())).unwrap();
        let ra = isoholonomic_bound(&a).unwrap();
        let rb = isoholonomic_bound(&b).unwrap();
        let rs = isoholonomic_bound(&sum).unwrap();
        let expect = (ra.bound.powi(2) + rb.bound.powi(2)).sqrt();
        assert!((rs.bound - expect).abs() < 1e-9);
    }

    #[test]
    fn bound_range_is_zero_to_pi_sqrt_n() {
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        for n in [2usize, 3, 5] {
            let u = random_unitary(n, &mut rng);
            let r = isoholonomic_bound(&Gate::in_standard_basis(u).unwrap()).unwrap();
            assert!(r.bound >= 0.0 && r.bound <= PI * (n as f64).sqrt() + 1e-12);
        }
    }

    #[test]
    fn report_bound_is_consistent_with_reported_phases() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let u = random_unitary(4, &mut rng);
        let r = isoholonomic_bound(&Gate::in_standard_basis(u).unwrap()).unwrap();
        let recomputed = bound_from_phases(&r.eigenphases);
        assert!((r.bound - recomputed).abs() < 1e-10);
    }

    #[test]
    fn runtime_bound_examples() {
        // constant-speed loop of length pi at speed omega takes at least pi/omega
        let omega = 0.7;
        assert!((runtime_bound(PI, omega).unwrap() - PI / omega).abs() < TOL);
        assert_eq!(runtime_bound(0.0, 1.0).unwrap(), 0.0);
        assert!(matches!(runtime_bound(PI, 0.0), Err(Error::Domain(_))));
        assert!(matches!(runtime_bound(-1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn catalog_rejects_unknown_keys() {
        assert!(matches!(named_gate("swap"), Err(Error::Validation(_))));
        assert!(matches!(named_gate("qft:zero"), Err(Error::Validation(_))));
        assert!(matches!(named_gate("gamma1:1.0"), Err(Error::Validation(_))));
    }
}
