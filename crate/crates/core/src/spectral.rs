//! Spectral data for non-negative Hermitian operators and the functional
//! calculus built on it.
//!
//! A [`HermitianOperator`] stores an eigendecomposition `A = V diag(λ) V†`
//! with ascending real eigenvalues and an orthonormal eigenbasis. Every
//! matrix function used by the product formulas (`e^{-itA}`, resolvents,
//! arbitrary boundary functions `f(iy)`) is evaluated through this spectral
//! data rather than through Padé or scaling-and-squaring, because the
//! schemes need scalar functions far more general than `exp`.
//!
//! The eigensolver is a dependency-free Householder tridiagonalization
//! followed by implicit QL with Wilkinson shifts, adequate for the dense
//! desk-scale matrices this crate works with.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::matrix::{ComplexMatrix, MatrixError};
use crate::rng::{complex_gaussian_entries, SplitMix64};

#[derive(Debug, Error)]
pub enum SpectralError {
    /// Input matrix is not Hermitian within tolerance.
    #[error("matrix is not Hermitian: ||m - m†|| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Input matrix has an eigenvalue below the PSD tolerance.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} < -{tol:.3e}")]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    /// Implicit QL iteration failed to isolate an eigenvalue.
    #[error("eigensolver did not converge at index {index}")]
    EigensolverFailure { index: usize },

    /// The scalar function was undefined at a point of the spectrum.
    #[error("scalar function undefined at eigenvalue {eigenvalue}")]
    FunctionUndefinedAtSpectrum { eigenvalue: f64 },

    /// `1 + z λ` vanished for some eigenvalue λ.
    #[error("resolvent singular: |1 + z λ| < 1e-14 at eigenvalue {eigenvalue}")]
    SingularResolvent { eigenvalue: f64 },

    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub type SpectralResult<T> = Result<T, SpectralError>;

/// Relative tolerance for Hermitian-symmetry and reconstruction checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative tolerance below which negative eigenvalues are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// A non-negative Hermitian operator stored as spectral data.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    dim: usize,
    /// Ascending, all ≥ 0 after PSD clamping.
    eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    eigenbasis: ComplexMatrix,
}

impl HermitianOperator {
    /// Eigendecompose a Hermitian PSD matrix.
    ///
    /// Eigenvalues in `[-tol_psd, 0)` with `tol_psd = 1e-10 · max(1, ρ(m))`
    /// are clamped to zero (discretized Laplacians routinely produce such
    /// round-off negatives); anything below that is rejected as not PSD.
    pub fn from_matrix(m: &ComplexMatrix) -> SpectralResult<Self> {
        m.check_finite()?;
        let scale = m.operator_norm()?;
        let deviation = (m - &m.adjoint()).operator_norm()?;
        let tol = HERMITIAN_TOL * (1.0 + scale);
        if deviation > tol {
            return Err(SpectralError::NotHermitian { deviation, tol });
        }
        let (mut eigenvalues, eigenbasis) = hermitian_eigen(m)?;
        let spectral_radius = eigenvalues.iter().fold(0.0_f64, |a, &l| a.max(l.abs()));
        let tol_psd = PSD_TOL * spectral_radius.max(1.0);
        for l in eigenvalues.iter_mut() {
            if *l < 0.0 {
                if *l < -tol_psd {
                    return Err(SpectralError::NotPsd {
                        min_eigenvalue: *l,
                        tol: tol_psd,
                    });
                }
                log::warn!("clamping round-off eigenvalue {l:.3e} to 0");
                *l = 0.0;
            }
        }
        Ok(HermitianOperator {
            dim: m.dim(),
            eigenvalues,
            eigenbasis,
        })
    }

    /// Build directly from spectral data (diagonal operators, compressions).
    /// Values are sorted ascending together with their basis columns.
    pub fn from_spectral_data(
        eigenvalues: Vec<f64>,
        eigenbasis: ComplexMatrix,
    ) -> SpectralResult<Self> {
        assert_eq!(eigenvalues.len(), eigenbasis.dim());
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let sorted: Vec<f64> = order.iter().map(|&k| eigenvalues[k]).collect();
        let dim = eigenbasis.dim();
        let basis = ComplexMatrix::from_fn(dim, |i, j| eigenbasis[(i, order[j])]);
        let op = HermitianOperator {
            dim,
            eigenvalues: sorted,
            eigenbasis: basis,
        };
        let min = op.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL * op.spectral_radius().max(1.0) {
            return Err(SpectralError::NotPsd {
                min_eigenvalue: min,
                tol: PSD_TOL * op.spectral_radius().max(1.0),
            });
        }
        Ok(op)
    }

    /// Diagonal non-negative operator with the standard basis.
    pub fn diagonal(values: &[f64]) -> SpectralResult<Self> {
        Self::from_spectral_data(values.to_vec(), ComplexMatrix::identity(values.len()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.eigenbasis
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |a, &l| a.max(l.abs()))
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_scalar_infallible(|l| C64::new(l, 0.0))
    }

    /// Spectral functional calculus: `V diag(φ(λ)) V†`.
    ///
    /// `phi` returns `None` to flag a pole or otherwise undefined value at an
    /// eigenvalue; the offending eigenvalue is carried in the error.
    pub fn apply_scalar<F>(&self, phi: F) -> SpectralResult<ComplexMatrix>
    where
        F: Fn(f64) -> Option<C64>,
    {
        let mut diag = Vec::with_capacity(self.dim);
        for &l in &self.eigenvalues {
            match phi(l) {
                Some(z) if z.re.is_finite() && z.im.is_finite() => diag.push(z),
                _ => return Err(SpectralError::FunctionUndefinedAtSpectrum { eigenvalue: l }),
            }
        }
        Ok(self.conjugate_diag(&diag))
    }

    /// Same as [`Self::apply_scalar`] for functions defined on all of the
    /// spectrum.
    pub fn apply_scalar_infallible<F>(&self, phi: F) -> ComplexMatrix
    where
        F: Fn(f64) -> C64,
    {
        let diag: Vec<C64> = self.eigenvalues.iter().map(|&l| phi(l)).collect();
        self.conjugate_diag(&diag)
    }

    /// `V diag V†` for an explicit diagonal in eigenvalue order.
    pub fn synthesize(&self, diag: &[C64]) -> ComplexMatrix {
        assert_eq!(diag.len(), self.dim, "diagonal length mismatch");
        self.conjugate_diag(diag)
    }

    fn conjugate_diag(&self, diag: &[C64]) -> ComplexMatrix {
        // (V diag) V†; column scaling plus one cache-friendly product
        let n = self.dim;
        let v = &self.eigenbasis;
        let mut scaled = v.clone();
        for i in 0..n {
            for (k, d) in diag.iter().enumerate() {
                scaled[(i, k)] *= d;
            }
        }
        &scaled * &v.adjoint()
    }

    /// The unitary group element `e^{-itA}`.
    pub fn unitary_group(&self, t: f64) -> ComplexMatrix {
        self.apply_scalar_infallible(|l| C64::new(0.0, -t * l).exp())
    }

    /// The contraction semigroup element `e^{-sA}`, `s ≥ 0`.
    pub fn semigroup(&self, s: f64) -> ComplexMatrix {
        self.apply_scalar_infallible(|l| C64::new(-s * l, 0.0).exp())
    }

    /// `(I + zA)^{-1}` through the spectrum.
    pub fn resolvent(&self, z: C64) -> SpectralResult<ComplexMatrix> {
        let mut diag = Vec::with_capacity(self.dim);
        for &l in &self.eigenvalues {
            let denom = C64::new(1.0, 0.0) + z * l;
            if denom.norm() < 1e-14 {
                return Err(SpectralError::SingularResolvent { eigenvalue: l });
            }
            diag.push(denom.inv());
        }
        Ok(self.conjugate_diag(&diag))
    }
}

/// Eigendecompose a Hermitian matrix (no PSD policy applied).
///
/// Returns ascending eigenvalues and the unitary eigenbasis as columns.
fn hermitian_eigen(m: &ComplexMatrix) -> SpectralResult<(Vec<f64>, ComplexMatrix)> {
    let n = m.dim();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0)));
    }
    let (mut d, mut e, mut q) = tridiagonalize(m);
    ql_implicit(&mut d, &mut e, &mut q)?;
    // sort ascending, permute basis columns to match
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let basis = ComplexMatrix::from_fn(n, |i, j| q[(i, order[j])]);
    Ok((values, basis))
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form, with the accumulated unitary. Off-diagonals are made real
/// non-negative by a final diagonal phase similarity.
fn tridiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut u = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        // column segment below the diagonal
        let mut norm_sq = 0.0;
        for i in (k + 1)..n {
            norm_sq += a[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        // Householder vector u = x - alpha e1
        for i in (k + 1)..n {
            u[i] = a[(i, k)];
        }
        u[k + 1] -= alpha;
        let u_norm_sq: f64 = ((k + 1)..n).map(|i| u[i].norm_sqr()).sum();
        if u_norm_sq < f64::MIN_POSITIVE {
            continue;
        }
        let beta = 2.0 / u_norm_sq;

        // A <- H A with H = I - beta u u†  (rows k+1..n)
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for i in (k + 1)..n {
                s += u[i].conj() * a[(i, j)];
            }
            s *= beta;
            for i in (k + 1)..n {
                let sub = s * u[i];
                a[(i, j)] -= sub;
            }
        }
        // A <- A H (columns k+1..n)
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in (k + 1)..n {
                s += a[(i, j)] * u[j];
            }
            s *= beta;
            for j in (k + 1)..n {
                let sub = s * u[j].conj();
                a[(i, j)] -= sub;
            }
        }
        // Q <- Q H
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in (k + 1)..n {
                s += q[(i, j)] * u[j];
            }
            s *= beta;
            for j in (k + 1)..n {
                let sub = s * u[j].conj();
                q[(i, j)] -= sub;
            }
        }
    }

    // Phase out the remaining complex sub-diagonal so QL can run in reals.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for i in 0..n {
        d[i] = a[(i, i)].re;
    }
    for i in 0..n - 1 {
        let sub = a[(i + 1, i)];
        let abs = sub.norm();
        e[i] = abs;
        phases[i + 1] = if abs > 0.0 {
            phases[i] * (sub / abs)
        } else {
            phases[i]
        };
    }
    for j in 0..n {
        if (phases[j] - C64::new(1.0, 0.0)).norm() == 0.0 {
            continue;
        }
        for i in 0..n {
            let scaled = q[(i, j)] * phases[j];
            q[(i, j)] = scaled;
        }
    }
    (d, e, q)
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal,
/// accumulating the rotations into the complex basis columns.
fn ql_implicit(d: &mut [f64], e: &mut [f64], q: &mut ComplexMatrix) -> SpectralResult<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(SpectralError::EigensolverFailure { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0_f64, 1.0_f64);
            let mut p = 0.0_f64;
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // rotate basis columns i and i+1
                for k in 0..q.dim() {
                    f = q[(k, i + 1)].re;
                    let f_im = q[(k, i + 1)].im;
                    let gi = q[(k, i)];
                    q[(k, i + 1)] = C64::new(s * gi.re + c * f, s * gi.im + c * f_im);
                    q[(k, i)] = C64::new(c * gi.re - s * f, c * gi.im - s * f_im);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Random Hermitian PSD matrix from a seeded Gaussian `G`: `G†G` rescaled
/// so its operator norm equals `spectral_scale` exactly.
pub fn random_hermitian_psd(dim: usize, seed: u64, spectral_scale: f64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    let g = ComplexMatrix::new(dim, complex_gaussian_entries(dim, &mut rng))
        .expect("gaussian entries are finite");
    let gram = &g.adjoint() * &g;
    let norm = gram.operator_norm().expect("Gram norm converges");
    gram.scale(C64::new(spectral_scale / norm, 0.0))
}

/// Random rank-`r` orthogonal projection, built by Gram-Schmidt on seeded
/// Gaussian vectors.
pub fn random_projection(dim: usize, rank: usize, seed: u64) -> ComplexMatrix {
    assert!(rank <= dim);
    let mut rng = SplitMix64::new(seed);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(rank);
    while basis.len() < rank {
        let mut v: Vec<C64> = (0..dim).map(|_| rng.complex_normal()).collect();
        for b in &basis {
            let overlap: C64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b.iter()) {
                *vi -= overlap * bi;
            }
        }
        let norm = crate::matrix::vec_norm(&v);
        if norm < 1e-8 {
            continue; // degenerate draw, try again
        }
        for z in v.iter_mut() {
            *z /= norm;
        }
        basis.push(v);
    }
    let mut p = ComplexMatrix::zeros(dim);
    for b in &basis {
        for i in 0..dim {
            for j in 0..dim {
                let outer = b[i] * b[j].conj();
                p[(i, j)] += outer;
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Brute-force oracle for small Hermitian matrices: eigenvalues are the
    /// roots of det(M - λI), located by sign bisection of the determinant
    /// over a Gershgorin-bounded scan. Independent of the QL path.
    fn char_poly_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
        let n = m.dim();
        let det = |lambda: f64| -> f64 {
            // LU without pivoting refinements; determinant of Hermitian
            // shift is real, take the real part of the pivot product.
            let shifted = ComplexMatrix::from_fn(n, |i, j| {
                m[(i, j)] - if i == j { c(lambda, 0.0) } else { c(0.0, 0.0) }
            });
            let mut lu = shifted;
            let mut det = c(1.0, 0.0);
            let mut sign = 1.0;
            for k in 0..n {
                let mut pr = k;
                let mut pa = lu[(k, k)].norm();
                for i in (k + 1)..n {
                    if lu[(i, k)].norm() > pa {
                        pr = i;
                        pa = lu[(i, k)].norm();
                    }
                }
                if pa == 0.0 {
                    return 0.0;
                }
                if pr != k {
                    for j in 0..n {
                        let tmp = lu[(k, j)];
                        lu[(k, j)] = lu[(pr, j)];
                        lu[(pr, j)] = tmp;
                    }
                    sign = -sign;
                }
                det *= lu[(k, k)];
                for i in (k + 1)..n {
                    let f = lu[(i, k)] / lu[(k, k)];
                    for j in k..n {
                        let sub = f * lu[(k, j)];
                        lu[(i, j)] -= sub;
                    }
                }
            }
            sign * det.re
        };
        // Gershgorin interval
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let radius: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| m[(i, j)].norm())
                .sum();
            lo = lo.min(m[(i, i)].re - radius);
            hi = hi.max(m[(i, i)].re + radius);
        }
        lo -= 1e-6;
        hi += 1e-6;
        // scan for sign changes, then bisect each bracket
        let steps = 20_000;
        let dx = (hi - lo) / steps as f64;
        let mut roots = Vec::new();
        let mut prev = det(lo);
        for k in 1..=steps {
            let x = lo + k as f64 * dx;
            let val = det(x);
            if prev == 0.0 {
                roots.push(lo + (k - 1) as f64 * dx);
            } else if prev.signum() != val.signum() && val != 0.0 {
                let (mut a, mut b) = (x - dx, x);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    let fm = det(mid);
                    if fm == 0.0 {
                        a = mid;
                        b = mid;
                        break;
                    }
                    if fm.signum() == det(a).signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev = val;
        }
        roots
    }

    /// Truncated exponential series Σ_{k≤40} (zM)^k / k!.
    fn series_exp(m: &ComplexMatrix, z: C64) -> ComplexMatrix {
        let n = m.dim();
        let zm = m.scale(z);
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..=40u64 {
            term = &term * &zm;
            term = term.scale(c(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        sum
    }

    fn orthonormality_defect(op: &HermitianOperator) -> f64 {
        let v = op.eigenbasis();
        (&(&v.adjoint() * v) - &ComplexMatrix::identity(op.dim()))
            .operator_norm()
            .unwrap()
    }

    #[test]
    fn diagonal_matrix_eigendecomposition() {
        let m = ComplexMatrix::diagonal_real(&[2.0, 1.0]);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        assert_eq!(op.eigenvalues(), &[1.0, 2.0]);
        // eigenbasis is a permutation of the identity
        let recon = (&op.reconstruct() - &m).operator_norm().unwrap();
        assert!(recon < 1e-12);
    }

    #[test]
    fn identity_eigendecomposition() {
        let m = ComplexMatrix::identity(5);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        for &l in op.eigenvalues() {
            assert!((l - 1.0).abs() < 1e-12);
        }
        assert!(orthonormality_defect(&op) < 1e-10);
    }

    #[test]
    fn random_psd_matches_char_poly_oracle() {
        let m = random_hermitian_psd(4, 0xA11CE, 2.0);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let oracle = char_poly_eigenvalues(&m);
        assert_eq!(oracle.len(), 4, "oracle found {} roots", oracle.len());
        for (a, b) in op.eigenvalues().iter().zip(oracle.iter()) {
            assert!((a - b).abs() < 1e-9, "eigenvalue {a} vs oracle {b}");
        }
        let recon = (&op.reconstruct() - &m).operator_norm().unwrap();
        let scale = 1.0 + m.operator_norm().unwrap();
        assert!(recon <= 1e-10 * scale, "reconstruction error {recon}");
        assert!(orthonormality_defect(&op) <= 1e-10);
    }

    #[test]
    fn eigensolver_handles_degenerate_spectrum() {
        // projection has eigenvalues {0, 0, 1, 1, 1} at dim 5
        let p = random_projection(5, 3, 99);
        let op = HermitianOperator::from_matrix(&p).unwrap();
        let eig = op.eigenvalues();
        for &l in &eig[..2] {
            assert!(l.abs() < 1e-10, "expected 0, got {l}");
        }
        for &l in &eig[2..] {
            assert!((l - 1.0).abs() < 1e-10, "expected 1, got {l}");
        }
        assert!(orthonormality_defect(&op) < 1e-10);
    }

    #[test]
    fn larger_random_matrices_reconstruct() {
        for &dim in &[8usize, 32, 64] {
            let m = random_hermitian_psd(dim, 7 + dim as u64, 1.5);
            let op = HermitianOperator::from_matrix(&m).unwrap();
            let recon = (&op.reconstruct() - &m).operator_norm().unwrap();
            let scale = 1.0 + m.operator_norm().unwrap();
            assert!(
                recon <= 1e-10 * scale,
                "dim {dim}: reconstruction error {recon}"
            );
            assert!(orthonormality_defect(&op) <= 1e-10, "dim {dim}");
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(
            HermitianOperator::from_matrix(&m),
            Err(SpectralError::NotHermitian { .. })
        ));
    }

    #[test]
    fn negative_definite_rejected_small_negatives_clamped() {
        let m = ComplexMatrix::diagonal_real(&[1.0, -0.5]);
        assert!(matches!(
            HermitianOperator::from_matrix(&m),
            Err(SpectralError::NotPsd { .. })
        ));
        let tiny = ComplexMatrix::diagonal_real(&[1.0, -1e-13]);
        let op = HermitianOperator::from_matrix(&tiny).unwrap();
        assert_eq!(op.eigenvalues()[0], 0.0);
    }

    #[test]
    fn apply_scalar_constant_one_gives_identity() {
        let m = random_hermitian_psd(4, 3, 1.0);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let r = op.apply_scalar_infallible(|_| c(1.0, 0.0));
        let defect = (&r - &ComplexMatrix::identity(4)).operator_norm().unwrap();
        assert!(defect < 1e-12);
    }

    #[test]
    fn apply_scalar_exact_diagonal_exponential() {
        // diag(1,2) with φ(λ) = e^{-iπλ} -> diag(-1, 1)
        let op = HermitianOperator::diagonal(&[1.0, 2.0]).unwrap();
        let r = op.apply_scalar_infallible(|l| c(0.0, -std::f64::consts::PI * l).exp());
        assert!((r[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[(1, 1)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(r[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn apply_scalar_matches_series_oracle() {
        let m = random_hermitian_psd(4, 21, 1.8);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let spectral = op.apply_scalar_infallible(|l| (c(0.0, -1.0) * l).exp());
        let series = series_exp(&m, c(0.0, -1.0));
        let diff = (&spectral - &series).operator_norm().unwrap();
        assert!(diff <= 1e-10, "series oracle mismatch {diff}");
    }

    #[test]
    fn apply_scalar_reports_undefined_point() {
        let op = HermitianOperator::diagonal(&[0.0, 2.0]).unwrap();
        let err = op
            .apply_scalar(|l| if l == 2.0 { None } else { Some(c(1.0, 0.0)) })
            .unwrap_err();
        match err {
            SpectralError::FunctionUndefinedAtSpectrum { eigenvalue } => {
                assert_eq!(eigenvalue, 2.0)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unitary_group_trivial_and_oracle_cases() {
        let op = HermitianOperator::diagonal(&[0.0]).unwrap();
        let u = op.unitary_group(3.7);
        assert!((u[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);

        let m = random_hermitian_psd(4, 11, 1.9);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let u0 = op.unitary_group(0.0);
        assert!(
            (&u0 - &ComplexMatrix::identity(4)).operator_norm().unwrap() < 1e-12
        );
        let u = op.unitary_group(0.7);
        let series = series_exp(&m, c(0.0, -0.7));
        let diff = (&u - &series).operator_norm().unwrap();
        assert!(diff <= 1e-10, "series oracle mismatch {diff}");
        let defect = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(4))
            .operator_norm()
            .unwrap();
        assert!(defect <= 1e-10, "unitarity defect {defect}");
    }

    #[test]
    fn unitary_group_law() {
        let m = random_hermitian_psd(5, 13, 1.0);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        for &(s, t) in &[(0.3, 0.9), (1.1, -0.4), (2.0, 2.0)] {
            let lhs = op.unitary_group(s + t);
            let rhs = &op.unitary_group(s) * &op.unitary_group(t);
            let diff = (&lhs - &rhs).operator_norm().unwrap();
            assert!(diff <= 1e-10, "group law defect {diff} at ({s},{t})");
        }
    }

    #[test]
    fn resolvent_trivial_scalar_and_product_check() {
        let op = HermitianOperator::diagonal(&[1.0]).unwrap();
        let r = op.resolvent(c(0.0, 1.0)).unwrap();
        // 1/(1+i) = 0.5 - 0.5i
        assert!((r[(0, 0)] - c(0.5, -0.5)).norm() < 1e-15);

        let m = random_hermitian_psd(4, 17, 1.3);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let z = c(0.3, 0.4);
        let r0 = op.resolvent(c(0.0, 0.0)).unwrap();
        assert!((&r0 - &ComplexMatrix::identity(4)).operator_norm().unwrap() < 1e-12);
        let r = op.resolvent(z).unwrap();
        let lhs = &(&ComplexMatrix::identity(4) + &m.scale(z)) * &r;
        let defect = (&lhs - &ComplexMatrix::identity(4)).operator_norm().unwrap();
        assert!(defect <= 1e-12, "(I+zA)R - I = {defect}");
    }

    #[test]
    fn resolvent_identity_holds() {
        let m = random_hermitian_psd(4, 29, 1.1);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let a = op.reconstruct();
        for &(z, w) in &[
            (c(0.2, 0.7), c(1.0, -0.3)),
            (c(0.0, 1.0), c(0.5, 0.0)),
            (c(2.0, 2.0), c(0.1, -0.9)),
        ] {
            let rz = op.resolvent(z).unwrap();
            let rw = op.resolvent(w).unwrap();
            let lhs = &rz - &rw;
            let rhs = (&(&rz * &a) * &rw).scale(w - z);
            let diff = (&lhs - &rhs).operator_norm().unwrap();
            assert!(diff <= 1e-10, "resolvent identity defect {diff}");
        }
    }

    #[test]
    fn resolvent_contraction_on_right_half_plane() {
        let m = random_hermitian_psd(4, 31, 2.0);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        for &z in &[c(0.5, 3.0), c(0.0, 2.0), c(1e-3, -5.0)] {
            let n = op.resolvent(z).unwrap().operator_norm().unwrap();
            assert!(n <= 1.0 + 1e-10, "||R({z})|| = {n}");
        }
    }

    #[test]
    fn contraction_property_of_bounded_symbols() {
        let m = random_hermitian_psd(6, 37, 1.4);
        let op = HermitianOperator::from_matrix(&m).unwrap();
        let r = op.apply_scalar_infallible(|l| c(0.0, -1.3 * l).exp() * 0.99);
        assert!(r.operator_norm().unwrap() <= 1.0 + 1e-10);
    }

    #[test]
    fn projection_fixture_is_projection() {
        let p = random_projection(8, 4, 42);
        let idem = (&(&p * &p) - &p).operator_norm().unwrap();
        let herm = (&p - &p.adjoint()).operator_norm().unwrap();
        assert!(idem <= 1e-12, "P² - P = {idem}");
        assert!(herm <= 1e-12, "P - P† = {herm}");
    }
}
