//! Dense one-dimensional Schrödinger assembly: `A = -Δ/2` as the Dirichlet
//! second-difference matrix on the interior grid of `[-L, L]`, `B` the
//! multiplication operator of a non-negative potential.
//!
//! Grid nodes are `x_j = -L + j·2L/(d+1)`, `j = 1..d`. With `d` a power of
//! two, `(d+1)/2` is never an integer, so `x = 0` is never a node and the
//! node nearest the origin sits half a spacing away, which is what admits
//! potentials like `|x|^{-p}` that are integrable but unbounded at 0.

use num_complex::Complex64 as C64;

use tklab_core::formulas::{make_pair, OperatorPair};
use tklab_core::matrix::ComplexMatrix;

use crate::scenario::PotentialSpec;
use crate::{HarnessError, HarnessResult};

impl PotentialSpec {
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Harmonic { coefficient } => coefficient * x * x,
            PotentialSpec::InversePower { p } => x.abs().powf(-p),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            PotentialSpec::Zero => "zero".into(),
            PotentialSpec::Harmonic { coefficient } => format!("harmonic({coefficient})"),
            PotentialSpec::InversePower { p } => format!("inverse_power({p})"),
        }
    }
}

/// Interior grid nodes of `[-L, L]` with `d` points.
pub fn grid_nodes(d: usize, l: f64) -> Vec<f64> {
    let spacing = 2.0 * l / (d + 1) as f64;
    (1..=d).map(|j| -l + j as f64 * spacing).collect()
}

/// Assemble the pair `(A, B)` with `A` PSD by construction.
pub fn assemble_schrodinger(
    d: usize,
    l: f64,
    potential: &PotentialSpec,
) -> HarnessResult<OperatorPair> {
    if d < 8 {
        return Err(HarnessError::ConfigParse {
            detail: format!("Schrodinger grid needs d >= 8, got {d}"),
        });
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(HarnessError::ConfigParse {
            detail: format!("box half-width must be positive, got {l}"),
        });
    }
    let spacing = 2.0 * l / (d + 1) as f64;
    let scale = 0.5 / (spacing * spacing);
    let a = ComplexMatrix::from_fn(d, |i, j| {
        let v = if i == j {
            2.0 * scale
        } else if i.abs_diff(j) == 1 {
            -scale
        } else {
            0.0
        };
        C64::new(v, 0.0)
    });
    let mut b_diag = Vec::with_capacity(d);
    for x in grid_nodes(d, l) {
        let v = potential.evaluate(x);
        if !v.is_finite() {
            return Err(HarnessError::PotentialSingularOnGrid { x });
        }
        if v < 0.0 {
            return Err(HarnessError::ConfigParse {
                detail: format!("potential is negative at x = {x}: V = {v}"),
            });
        }
        b_diag.push(v);
    }
    let b = ComplexMatrix::diagonal_real(&b_diag);
    Ok(make_pair(&a, &b, None)?)
}
