//! Dense complex kernels shared by the whole crate.
//!
//! Everything here wraps nalgebra so the rest of the crate can stay expressed
//! in terms of a handful of deterministic operations: Hermitian functional
//! calculus, Schur-based unitary eigendecompositions, polar projection onto
//! orthonormal columns, and seeded random ensembles for tests and fuzzing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I1: C64 = Complex::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Frobenius distance ||a - b||_F.
pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    (a - b).norm()
}

/// ||m - m^dagger||_F, zero iff m is Hermitian.
pub fn hermiticity_error(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// ||m^dagger m - I||_F, zero iff m has orthonormal columns.
pub fn orthonormality_error(m: &CMat) -> f64 {
    let g = m.adjoint() * m;
    (g - CMat::identity(m.ncols(), m.ncols())).norm()
}

/// Largest singular value of a Hermitian matrix (max |eigenvalue|).
pub fn hermitian_operator_norm(m: &CMat) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()))
}

/// tr(m) as a complex number.
pub fn trace(m: &CMat) -> C64 {
    m.diagonal().sum()
}

fn check_square(m: &CMat, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn check_hermitian(m: &CMat, tol: f64, what: &str) -> Result<()> {
    check_square(m, what)?;
    let err = hermiticity_error(m);
    if err > tol {
        return Err(Error::Validation(format!(
            "{what} is not Hermitian: ||m - m^dagger|| = {err:.3e} > {tol:.1e}"
        )));
    }
    Ok(())
}

/// f(H) = V f(lambda) V^dagger for Hermitian H and a scalar map on its spectrum.
pub fn hermitian_map(h: &CMat, f: impl Fn(f64) -> C64) -> Result<CMat> {
    check_hermitian(h, 1e-8, "hermitian_map operand")?;
    let sym = h.clone().symmetric_eigen();
    let n = h.nrows();
    let mut out = CMat::zeros(n, n);
    for (j, &lambda) in sym.eigenvalues.iter().enumerate() {
        let v = sym.eigenvectors.column(j);
        let fv = f(lambda);
        // rank-one accumulation keeps out exactly Hermitian-structured per term
        for r in 0..n {
            for cc in 0..n {
                out[(r, cc)] += fv * v[r] * v[cc].conj();
            }
        }
    }
    Ok(out)
}

/// exp(scale * H) for Hermitian H; with scale = -i dt this is an exact unitary step.
pub fn exp_hermitian_scaled(h: &CMat, scale: C64) -> Result<CMat> {
    hermitian_map(h, |l| (scale * l).exp())
}

/// exp(W) for skew-Hermitian W, computed through the Hermitian matrix iW.
/// Each factor is unitary to roundoff because the spectrum maps to the unit circle.
pub fn exp_skew_hermitian(w: &CMat) -> Result<CMat> {
    check_square(w, "exp_skew_hermitian operand")?;
    let skew_err = (w + w.adjoint()).norm();
    if skew_err > 1e-8 {
        return Err(Error::Validation(format!(
            "matrix is not skew-Hermitian: ||w + w^dagger|| = {skew_err:.3e}"
        )));
    }
    // k = iW is Hermitian; exp(W) = exp(-i k).
    let k = w.map(|z| z * I1);
    exp_hermitian_scaled(&k, -I1)
}

/// Eigendecomposition of a unitary matrix via its complex Schur form.
/// For normal matrices the Schur factor is diagonal, so the Schur basis is an
/// orthonormal eigenbasis. Returns (eigenvalues, eigenvectors as columns),
/// unordered; callers impose their own ordering.
pub fn unitary_eigen(u: &CMat) -> Result<(Vec<C64>, CMat)> {
    check_square(u, "unitary_eigen operand")?;
    let uerr = orthonormality_error(u);
    if uerr > 1e-8 {
        return Err(Error::Validation(format!(
            "matrix is not unitary: ||u^dagger u - I|| = {uerr:.3e} > 1e-8"
        )));
    }
    let n = u.nrows();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let schur = u
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    // Off-diagonal mass of T measures departure from normality; a unitary input
    // within the 1e-8 gate cannot produce more than a comparable defect.
    let mut offdiag = 0.0f64;
    for r in 0..n {
        for cc in 0..n {
            if r != cc {
                offdiag += t[(r, cc)].norm_sqr();
            }
        }
    }
    if offdiag.sqrt() > 1e-6 {
        return Err(Error::Numerical(format!(
            "Schur form of a unitary input is not diagonal: off-diagonal norm {:.3e}",
            offdiag.sqrt()
        )));
    }
    let eigenvalues: Vec<C64> = (0..n).map(|j| t[(j, j)]).collect();
    Ok((eigenvalues, q))
}

/// Principal argument in (-pi, pi]; the branch point -pi is folded to +pi.
pub fn principal_phase(z: C64) -> f64 {
    let theta = z.im.atan2(z.re);
    if theta <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        theta
    }
}

/// Polar projection A (A^dagger A)^{-1/2}: the nearest matrix with orthonormal
/// columns. Fails if A is column-rank deficient.
pub fn polar_orthonormalize(a: &CMat) -> Result<CMat> {
    let n = a.ncols();
    if n == 0 || a.nrows() < n {
        return Err(Error::Dimension(format!(
            "polar projection needs a tall matrix, got {}x{}",
            a.nrows(),
            n
        )));
    }
    let gram = a.adjoint() * a;
    let sym = gram.symmetric_eigen();
    let mut inv_sqrt = CMat::zeros(n, n);
    for (j, &lambda) in sym.eigenvalues.iter().enumerate() {
        if lambda <= 1e-24 {
            return Err(Error::Resolution(format!(
                "column rank collapsed during polar projection (gram eigenvalue {lambda:.3e})"
            )));
        }
        let v = sym.eigenvectors.column(j);
        let w = cr(1.0 / lambda.sqrt());
        for r in 0..n {
            for cc in 0..n {
                inv_sqrt[(r, cc)] += w * v[r] * v[cc].conj();
            }
        }
    }
    Ok(a * inv_sqrt)
}

/// Extends d x n orthonormal columns to a full orthonormal basis and returns
/// the d x (d - n) complement block. Deterministic: standard basis vectors are
/// swept in index order and Gram-Schmidt keeps the first independent ones.
pub fn orthonormal_complement(frame: &CMat) -> Result<CMat> {
    let (d, n) = frame.shape();
    if n > d {
        return Err(Error::Dimension(format!("frame {d}x{n} has too many columns")));
    }
    if n == d {
        return Ok(CMat::zeros(d, 0));
    }
    let mut basis: Vec<CVec> = (0..n).map(|j| frame.column(j).into_owned()).collect();
    let mut complement: Vec<CVec> = Vec::with_capacity(d - n);
    for k in 0..d {
        if complement.len() == d - n {
            break;
        }
        let mut v = CVec::zeros(d);
        v[k] = cr(1.0);
        for _ in 0..2 {
            // twice-is-enough reorthogonalization
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            let unit = v / cr(norm);
            basis.push(unit.clone());
            complement.push(unit);
        }
    }
    if complement.len() != d - n {
        return Err(Error::Numerical(
            "failed to complete an orthonormal basis of the complement".into(),
        ));
    }
    Ok(CMat::from_columns(&complement))
}

/// Composite trapezoid rule on a (possibly nonuniform) strictly increasing grid.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(times.len(), values.len());
    let mut acc = 0.0;
    for i in 1..times.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    }
    acc
}

/// Weights of the three-point Lagrange derivative at `at` for nodes (t0, t1, t2).
/// Exact for quadratics, hence second order on smooth data for any of the nodes.
pub fn three_point_derivative_weights(t0: f64, t1: f64, t2: f64, at: f64) -> (f64, f64, f64) {
    let w0 = (2.0 * at - t1 - t2) / ((t0 - t1) * (t0 - t2));
    let w1 = (2.0 * at - t0 - t2) / ((t1 - t0) * (t1 - t2));
    let w2 = (2.0 * at - t0 - t1) / ((t2 - t0) * (t2 - t1));
    (w0, w1, w2)
}

/// Sample-wise derivative of a matrix-valued curve: three-point stencils,
/// central in the interior and one-sided at both endpoints. Needs >= 3 samples.
pub fn sampled_derivative(times: &[f64], values: &[CMat]) -> Result<Vec<CMat>> {
    let m = times.len();
    if m != values.len() {
        return Err(Error::Dimension("times and samples differ in length".into()));
    }
    if m < 3 {
        return Err(Error::Precondition(format!(
            "derivative stencils need at least 3 samples, got {m}"
        )));
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let (j0, j1, j2) = if i == 0 {
            (0, 1, 2)
        } else if i == m - 1 {
            (m - 3, m - 2, m - 1)
        } else {
            (i - 1, i, i + 1)
        };
        let (w0, w1, w2) = three_point_derivative_weights(times[j0], times[j1], times[j2], times[i]);
        out.push(&values[j0] * cr(w0) + &values[j1] * cr(w1) + &values[j2] * cr(w2));
    }
    Ok(out)
}

/// Block direct sum a (+) b.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = CMat::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Standard complex Gaussian matrix, entries N(0, 1/2) + i N(0, 1/2).
pub fn random_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    use rand::distributions::Distribution;
    let normal = GaussianPair;
    CMat::from_fn(rows, cols, |_, _| normal.sample(rng))
}

struct GaussianPair;

impl rand::distributions::Distribution<C64> for GaussianPair {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> C64 {
        // Box-Muller; avoids pulling in a heavier distribution crate.
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u1.ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
        c(r * u2.cos(), r * u2.sin())
    }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal phases
/// absorbed so the result does not depend on the QR sign convention.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMat {
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / cr(d.norm()) } else { cr(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// GUE-style random Hermitian matrix (A + A^dagger)/2.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMat {
    let a = random_gaussian(n, n, rng);
    (&a + a.adjoint()) * cr(0.5)
}

/// Random Hermitian matrix whose spectrum lies on the lattice (2 pi / tau) Z,
/// so exp(-i tau H) = I and every driven subspace returns exactly at time tau.
/// Windings are drawn from [0, max_winding], keeping the spectral spread (and
/// with it the curve speed) proportional to max_winding.
pub fn random_commensurate_hamiltonian(
    d: usize,
    tau: f64,
    max_winding: i64,
    rng: &mut impl Rng,
) -> CMat {
    let v = random_unitary(d, rng);
    let base = std::f64::consts::TAU / tau;
    let mut out = CMat::zeros(d, d);
    for j in 0..d {
        let m: i64 = rng.gen_range(0..=max_winding);
        let lambda = cr(base * m as f64);
        let col = v.column(j);
        for r in 0..d {
            for cc in 0..d {
                out[(r, cc)] += lambda * col[r] * col[cc].conj();
            }
        }
    }
    out
}

/// Random orthonormal d x n frame: the first n columns of a Haar unitary.
pub fn random_frame(d: usize, n: usize, rng: &mut impl Rng) -> CMat {
    let u = random_unitary(d, rng);
    u.columns(0, n).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    const TOL: f64 = 1e-12;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(3, 3);
        let e = exp_hermitian_scaled(&z, -I1).unwrap();
        assert!(frobenius_distance(&e, &CMat::identity(3, 3)) < TOL);
    }

    #[test]
    fn exp_diagonal_matches_scalar_exp() {
        let h = CMat::from_diagonal(&CVec::from_vec(vec![cr(0.3), cr(-1.7)]));
        let e = exp_hermitian_scaled(&h, c(0.0, -2.0)).unwrap();
        assert!((e[(0, 0)] - c(0.0, -0.6).exp()).norm() < TOL);
        assert!((e[(1, 1)] - c(0.0, 3.4).exp()).norm() < TOL);
        assert!(e[(0, 1)].norm() < TOL);
    }

    #[test]
    fn exp_skew_hermitian_is_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..5 {
            let h = random_hermitian(4, &mut rng);
            let w = h.map(|z| z * I1 * cr(0.37));
            let e = exp_skew_hermitian(&w).unwrap();
            assert!(orthonormality_error(&e) < 1e-12);
        }
    }

    #[test]
    fn unitary_eigen_reconstructs() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for n in [2usize, 3, 5] {
            let u = random_unitary(n, &mut rng);
            let (vals, vecs) = unitary_eigen(&u).unwrap();
            for j in 0..n {
                let v = vecs.column(j).into_owned();
                let residual = (&u * &v - &v * vals[j]).norm();
                assert!(residual < 1e-10, "n={n} j={j} residual={residual:.3e}");
                assert!((vals[j].norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unitary_eigen_rejects_nonunitary() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![cr(2.0), cr(1.0)]));
        assert!(matches!(unitary_eigen(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn principal_phase_branch() {
        assert_eq!(principal_phase(cr(1.0)), 0.0);
        assert!((principal_phase(cr(-1.0)) - std::f64::consts::PI).abs() < TOL);
        assert!((principal_phase(c(0.0, -0.0) - cr(1.0)) - std::f64::consts::PI).abs() < TOL);
        assert!((principal_phase(c(0.0, -1.0)) + std::f64::consts::FRAC_PI_2).abs() < TOL);
    }

    #[test]
    fn polar_recovers_orthonormal_input() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let f = random_frame(5, 2, &mut rng);
        let p = polar_orthonormalize(&f).unwrap();
        assert!(frobenius_distance(&p, &f) < 1e-12);
    }

    #[test]
    fn polar_output_is_orthonormal_and_nearby() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let f = random_frame(6, 3, &mut rng);
        let noise = random_gaussian(6, 3, &mut rng) * cr(0.05);
        let p = polar_orthonormalize(&(&f + &noise)).unwrap();
        assert!(orthonormality_error(&p) < 1e-12);
        assert!(frobenius_distance(&p, &f) < 0.3);
    }

    #[test]
    fn polar_rejects_rank_deficient() {
        let mut a = CMat::zeros(4, 2);
        a[(0, 0)] = cr(1.0);
        a[(0, 1)] = cr(1.0);
        assert!(matches!(polar_orthonormalize(&a), Err(Error::Resolution(_))));
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let f = random_frame(6, 2, &mut rng);
        let comp = orthonormal_complement(&f).unwrap();
        assert_eq!(comp.shape(), (6, 4));
        assert!(orthonormality_error(&comp) < 1e-10);
        assert!((f.adjoint() * &comp).norm() < 1e-10);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let times = [0.0, 0.25, 1.0, 2.0];
        let values: Vec<f64> = times.iter().map(|t| 3.0 * t + 1.0).collect();
        assert!((trapezoid(&times, &values) - 8.0).abs() < TOL);
    }

    #[test]
    fn derivative_stencils_exact_on_quadratics() {
        let times: Vec<f64> = vec![0.0, 0.1, 0.25, 0.4, 0.6];
        let values: Vec<CMat> = times
            .iter()
            .map(|t| CMat::from_element(1, 1, cr(2.0 * t * t - t + 0.5)))
            .collect();
        let dots = sampled_derivative(&times, &values).unwrap();
        for (t, d) in times.iter().zip(&dots) {
            let expect = 4.0 * t - 1.0;
            assert!((d[(0, 0)].re - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn random_unitary_is_unitary_and_seeded() {
        let mut rng_a = ChaCha12Rng::seed_from_u64(42);
        let mut rng_b = ChaCha12Rng::seed_from_u64(42);
        let ua = random_unitary(5, &mut rng_a);
        let ub = random_unitary(5, &mut rng_b);
        assert!(orthonormality_error(&ua) < 1e-12);
        assert_eq!(ua, ub);
    }
}
