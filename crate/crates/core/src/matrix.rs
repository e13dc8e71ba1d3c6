//! Dense square complex matrices and vectors.
//!
//! Everything in the crate is desk-scale (dim ≤ a few hundred), so matrices
//! are stored as plain row-major `Vec<Complex64>` with O(n³) algorithms.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum MatrixError {
    /// Entry data contained a NaN or infinity.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Entry buffer length does not match the declared dimension.
    #[error("entry buffer has length {len}, expected {dim}x{dim}")]
    BadShape { len: usize, dim: usize },

    /// Two operands have different dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    /// Power iteration for the operator norm hit its iteration cap.
    #[error("operator-norm power iteration did not converge in {0} iterations")]
    IterationLimit(usize),

    /// LU factorization met a pivot too small to invert through.
    #[error("matrix is numerically singular (pivot {pivot:.3e} at step {step})")]
    SingularInverse { pivot: f64, step: usize },
}

pub type MatrixResult<T> = Result<T, MatrixError>;

/// Tolerance of the power-iteration eigenvalue estimate.
const POWER_ITER_TOL: f64 = 1e-12;
/// Iteration cap for the operator-norm power iteration.
const POWER_ITER_MAX: usize = 10_000;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix(dim={})", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.4e}{:+.4e}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Validating constructor: checks shape and that every entry is finite.
    pub fn new(dim: usize, entries: Vec<C64>) -> MatrixResult<Self> {
        if entries.len() != dim * dim {
            return Err(MatrixError::BadShape {
                len: entries.len(),
                dim,
            });
        }
        let m = ComplexMatrix { dim, entries };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from complex entries.
    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal_real(values: &[f64]) -> Self {
        Self::diagonal(&values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn check_finite(&self) -> MatrixResult<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(MatrixError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "matvec dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.dim {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Max |entry|, used for relative singularity thresholds.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm; cheap upper bound on the operator norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Operator (spectral) norm: largest singular value, computed by power
    /// iteration on `m† m` with a deterministic seeded start vector.
    ///
    /// A tightly clustered top of the Gram spectrum stalls the plain
    /// iteration, so whenever a chunk of iterations fails to converge the
    /// Gram matrix is squared (normalized, with log-scale bookkeeping);
    /// each squaring doubles the convergence exponent. The total matvec
    /// budget stays at 10⁴.
    pub fn operator_norm(&self) -> MatrixResult<f64> {
        if self.dim == 0 {
            return Ok(0.0);
        }
        let mut g = &self.adjoint() * self;
        let s0 = g.max_abs();
        if s0 == 0.0 {
            return Ok(0.0);
        }
        g = g.scale(C64::new(1.0 / s0, 0.0));
        // invariant: ln λ_top(m†m) = (ln λ_top(g) + log_acc) / 2^doublings
        let mut log_acc = s0.ln();
        let mut doublings = 0u32;

        let mut rng = SplitMix64::new(0x6f70_6e6f_726d ^ self.dim as u64);
        let mut v: Vec<C64> = (0..self.dim)
            .map(|_| C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
            .collect();
        let norm0 = vec_norm(&v);
        if norm0 == 0.0 {
            return Ok(0.0);
        }
        for z in v.iter_mut() {
            *z /= norm0;
        }

        let finish = |lambda: f64, log_acc: f64, doublings: u32| -> f64 {
            if lambda <= 0.0 {
                return 0.0;
            }
            ((lambda.ln() + log_acc) / 2f64.powi(doublings as i32 + 1)).exp()
        };

        const CHUNK: usize = 250;
        let mut used = 0usize;
        while used < POWER_ITER_MAX {
            let mut prev = f64::NAN;
            let mut lambda = 0.0;
            for _ in 0..CHUNK.min(POWER_ITER_MAX - used) {
                used += 1;
                let w = g.matvec(&v);
                // Rayleigh quotient v† g v, real non-negative for Gram matrices
                lambda = v
                    .iter()
                    .zip(w.iter())
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum();
                let wn = vec_norm(&w);
                if wn == 0.0 {
                    return Ok(0.0);
                }
                for (vi, wi) in v.iter_mut().zip(w.iter()) {
                    *vi = wi / wn;
                }
                if !prev.is_nan()
                    && (lambda - prev).abs() <= POWER_ITER_TOL * lambda.abs() + 1e-300
                {
                    return Ok(finish(lambda, log_acc, doublings));
                }
                prev = lambda;
            }
            // stalled: square the (normalized) Gram matrix and keep going
            if doublings >= 60 {
                return Ok(finish(lambda, log_acc, doublings));
            }
            g = &g * &g;
            let s = g.max_abs();
            if s == 0.0 {
                return Ok(0.0);
            }
            g = g.scale(C64::new(1.0 / s, 0.0));
            log_acc = 2.0 * log_acc + s.ln();
            doublings += 1;
        }
        Err(MatrixError::IterationLimit(POWER_ITER_MAX))
    }

    /// Matrix power by binary exponentiation. `n = 0` gives the identity.
    pub fn power(&self, n: u64) -> Self {
        let mut result = Self::identity(self.dim);
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// Inverse via LU with partial pivoting.
    pub fn inverse(&self) -> MatrixResult<Self> {
        let n = self.dim;
        let mut lu = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self.max_abs().max(1e-300);
        for k in 0..n {
            let (mut pivot_row, mut pivot_abs) = (k, lu[k * n + k].norm());
            for i in (k + 1)..n {
                let a = lu[i * n + k].norm();
                if a > pivot_abs {
                    pivot_row = i;
                    pivot_abs = a;
                }
            }
            if pivot_abs < 1e-14 * scale {
                return Err(MatrixError::SingularInverse {
                    pivot: pivot_abs,
                    step: k,
                });
            }
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[k * n + j];
                    lu[i * n + j] -= sub;
                }
            }
        }
        // Solve for each unit vector column.
        let mut inv = Self::zeros(n);
        let mut col = vec![C64::new(0.0, 0.0); n];
        for e in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = if perm[i] == e {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
            }
            // forward substitution (L has unit diagonal)
            for i in 1..n {
                for j in 0..i {
                    let sub = lu[i * n + j] * col[j];
                    col[i] -= sub;
                }
            }
            // back substitution
            for i in (0..n).rev() {
                for j in (i + 1)..n {
                    let sub = lu[i * n + j] * col[j];
                    col[i] -= sub;
                }
                col[i] /= lu[i * n + i];
            }
            for i in 0..n {
                inv[(i, e)] = col[i];
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix mul dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += aik * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `a - b` entrywise for vectors.
pub fn vec_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}
