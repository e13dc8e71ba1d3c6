//! The product-formula zoo: every scheme builds an n-step approximant
//! `Π_n(t)` to `e^{-itC}` (or `e^{-tC}` for the real-time family) from
//! one-step contraction factors, and the metrics in [`metrics`] measure how
//! fast the approximants converge.

pub mod grid;
pub mod metrics;
pub mod report;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::kato::{KatoError, KatoFunctionHandle};
use crate::matrix::{ComplexMatrix, MatrixError};
use crate::spectral::{HermitianOperator, SpectralError};

pub use grid::QuadratureGrid;
pub use report::{ConvergenceReport, GridMeta, MetricKind, SweepEntry};

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("operator dimensions differ: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("projection is not orthogonal: defect {defect:.3e}")]
    BadProjection { defect: f64 },

    #[error("Zeno scheme requested but the pair carries no projection")]
    MissingProjection,

    #[error("subdivision count n must be >= 1")]
    InvalidSubdivisions,

    #[error("real-time schemes are semigroups only; t = {t} < 0 rejected")]
    NegativeTimeRealScheme { t: f64 },

    #[error("metric '{metric}' does not apply to scheme {scheme}")]
    SchemeMismatch {
        scheme: String,
        metric: &'static str,
    },

    #[error("boundary function undefined at eigenvalue {eigenvalue} in scheme {scheme}: {source}")]
    FunctionUndefinedAtSpectrum {
        eigenvalue: f64,
        scheme: String,
        #[source]
        source: KatoError,
    },

    #[error("scheme {scheme} rejected: Kato axiom '{axiom}' failed (measured {measured:.6e})")]
    KatoAxiomFailed {
        scheme: String,
        axiom: String,
        measured: f64,
    },

    #[error("invalid quadrature grid: {reason}")]
    InvalidGrid { reason: String },

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error(transparent)]
    Matrix(#[from] MatrixError),

    #[error(transparent)]
    Kato(#[from] KatoError),
}

pub type FormulaResult<T> = Result<T, FormulaError>;

/// Orthogonality tolerance for Zeno projections.
pub const PROJECTION_TOL: f64 = 1e-12;

/// Zeno data: an orthogonal projection P and the spectral data of `P B P`,
/// which acts as the compressed generator on ran P and as 0 on ker P.
#[derive(Clone, Debug)]
pub struct ZenoData {
    projection: ComplexMatrix,
    generator: HermitianOperator,
    rank: usize,
}

impl ZenoData {
    pub fn projection(&self) -> &ComplexMatrix {
        &self.projection
    }

    /// Spectral data of `P B P` on the full space.
    pub fn generator(&self) -> &HermitianOperator {
        &self.generator
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The comparator `e^{-itC_zeno} ⊕ 0` on ran P ⊕ ker P.
    pub fn comparator(&self, t: f64) -> ComplexMatrix {
        &self.generator.unitary_group(t) * &self.projection
    }

    /// `(I + z C_zeno)^{-1} ⊕ 0`.
    pub fn resolvent_comparator(&self, z: C64) -> FormulaResult<ComplexMatrix> {
        Ok(&self.generator.resolvent(z)? * &self.projection)
    }
}

/// The pair (A, B) with the precomputed spectral data of C = A + B.
#[derive(Clone, Debug)]
pub struct OperatorPair {
    a: HermitianOperator,
    b: HermitianOperator,
    c: HermitianOperator,
    zeno: Option<ZenoData>,
}

impl OperatorPair {
    pub fn a(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn b(&self) -> &HermitianOperator {
        &self.b
    }

    /// Spectral data of the sum C = A + B.
    pub fn c(&self) -> &HermitianOperator {
        &self.c
    }

    pub fn zeno(&self) -> Option<&ZenoData> {
        self.zeno.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// The exact propagator `e^{-itC}` every scheme is compared against.
    pub fn exact_propagator(&self, t: f64) -> ComplexMatrix {
        self.c.unitary_group(t)
    }
}

/// Assemble an [`OperatorPair`] from Hermitian PSD matrices, optionally with
/// a Zeno projection whose compression of B is eigendecomposed up front.
pub fn make_pair(
    a_matrix: &ComplexMatrix,
    b_matrix: &ComplexMatrix,
    projection: Option<&ComplexMatrix>,
) -> FormulaResult<OperatorPair> {
    if a_matrix.dim() != b_matrix.dim() {
        return Err(FormulaError::DimMismatch {
            left: a_matrix.dim(),
            right: b_matrix.dim(),
        });
    }
    let a = HermitianOperator::from_matrix(a_matrix)?;
    let b = HermitianOperator::from_matrix(b_matrix)?;
    let c = HermitianOperator::from_matrix(&(a_matrix + b_matrix))?;
    let zeno = match projection {
        None => None,
        Some(p) => {
            if p.dim() != a_matrix.dim() {
                return Err(FormulaError::DimMismatch {
                    left: p.dim(),
                    right: a_matrix.dim(),
                });
            }
            let idem = (&(p * p) - p).operator_norm()?;
            let herm = (p - &p.adjoint()).operator_norm()?;
            let defect = idem.max(herm);
            if defect > PROJECTION_TOL {
                return Err(FormulaError::BadProjection { defect });
            }
            let compressed = &(p * b_matrix) * p;
            let generator = HermitianOperator::from_matrix(&compressed)?;
            let rank = p
                .entries()
                .iter()
                .step_by(p.dim() + 1)
                .map(|z| z.re)
                .sum::<f64>()
                .round() as usize;
            Some(ZenoData {
                projection: p.clone(),
                generator,
                rank,
            })
        }
    };
    Ok(OperatorPair { a, b, c, zeno })
}

/// One product-formula variant.
#[derive(Clone, Debug)]
pub enum ProductScheme {
    /// `(e^{-itA/n} e^{-itB/n})^n`.
    TrotterPlain,
    /// `(e^{-itA/2n} e^{-itB/n} e^{-itA/2n})^n`.
    TrotterSymmetrized,
    /// `(f(itA/n) g(itB/n))^n` for holomorphic Kato functions f, g.
    KatoProduct {
        f: KatoFunctionHandle,
        g: KatoFunctionHandle,
    },
    /// `(f(itA/2n) g(itB/n) f(itA/2n))^n` (half-parameter convention).
    KatoSymmetrized {
        f: KatoFunctionHandle,
        g: KatoFunctionHandle,
    },
    /// `(((f(2itA/n) + g(2itB/n))/2)^n`.
    CachiaAverage {
        f: KatoFunctionHandle,
        g: KatoFunctionHandle,
    },
    /// `((I + itA/kn)^{-k} (I + itB/kn)^{-k})^n`, computed through matrix
    /// resolvents (the spectral-evaluation route is `KatoProduct` with
    /// `ResolventPower(k)` factors; the two must agree entrywise).
    LapidusResolvent { k: u32 },
    /// `(P e^{-itB/n} P)^n` against `e^{-itC_zeno} ⊕ 0`.
    Zeno,
    /// `(e^{-tA/n} e^{-tB/n})^n`, real semigroup factors.
    RealTimePlain,
    /// `(e^{-tA/2n} e^{-tB/n} e^{-tA/2n})^n`, real semigroup factors.
    RealTimeSymmetrized,
    /// Sentinel: the comparator `e^{-itC}` itself, for metric and grid
    /// validation (error is identically zero).
    Exact,
}

impl ProductScheme {
    pub fn kato_product(f: KatoFunctionHandle, g: KatoFunctionHandle) -> Self {
        ProductScheme::KatoProduct { f, g }
    }

    pub fn is_real_time(&self) -> bool {
        matches!(
            self,
            ProductScheme::RealTimePlain | ProductScheme::RealTimeSymmetrized
        )
    }

    /// Stable tag used in reports and CSV.
    pub fn tag(&self) -> &'static str {
        match self {
            ProductScheme::TrotterPlain => "trotter_plain",
            ProductScheme::TrotterSymmetrized => "trotter_symmetrized",
            ProductScheme::KatoProduct { .. } => "kato_product",
            ProductScheme::KatoSymmetrized { .. } => "kato_symmetrized",
            ProductScheme::CachiaAverage { .. } => "cachia_average",
            ProductScheme::LapidusResolvent { .. } => "lapidus_resolvent",
            ProductScheme::Zeno => "zeno",
            ProductScheme::RealTimePlain => "real_time_plain",
            ProductScheme::RealTimeSymmetrized => "real_time_symmetrized",
            ProductScheme::Exact => "exact",
        }
    }

    /// Parameter description for the CSV `variant_params` column
    /// (semicolon-separated to keep the CSV comma-clean).
    pub fn variant_params(&self) -> String {
        match self {
            ProductScheme::KatoProduct { f, g }
            | ProductScheme::KatoSymmetrized { f, g }
            | ProductScheme::CachiaAverage { f, g } => {
                format!("f={};g={}", f.tag(), g.tag())
            }
            ProductScheme::LapidusResolvent { k } => format!("k={k}"),
            _ => String::new(),
        }
    }

    /// Admission check: every Kato handle in the scheme must pass the axiom
    /// battery.
    pub fn validate(&self) -> FormulaResult<()> {
        let handles: Vec<&KatoFunctionHandle> = match self {
            ProductScheme::KatoProduct { f, g }
            | ProductScheme::KatoSymmetrized { f, g }
            | ProductScheme::CachiaAverage { f, g } => vec![f, g],
            ProductScheme::LapidusResolvent { k } => {
                if *k == 0 {
                    return Err(FormulaError::InvalidSubdivisions);
                }
                vec![]
            }
            _ => vec![],
        };
        for handle in handles {
            let report = handle.check_axioms();
            if let Some(failure) = report.first_failure() {
                return Err(FormulaError::KatoAxiomFailed {
                    scheme: format!("{}({})", self.tag(), handle.tag()),
                    axiom: failure.axiom.to_string(),
                    measured: failure.measured,
                });
            }
        }
        Ok(())
    }
}

/// `f(zA)` through the spectrum, wrapping pole/boundary failures with the
/// offending eigenvalue and scheme tag.
fn kato_factor(
    op: &HermitianOperator,
    f: &KatoFunctionHandle,
    z_at: impl Fn(f64) -> C64,
    scheme: &ProductScheme,
) -> FormulaResult<ComplexMatrix> {
    let mut diag = Vec::with_capacity(op.dim());
    for &l in op.eigenvalues() {
        match f.eval(z_at(l)) {
            Ok(v) => diag.push(v),
            Err(source) => {
                return Err(FormulaError::FunctionUndefinedAtSpectrum {
                    eigenvalue: l,
                    scheme: format!("{}[{}]", scheme.tag(), f.tag()),
                    source,
                })
            }
        }
    }
    Ok(op.synthesize(&diag))
}

/// One-step factor with unitary-family (boundary) arguments: the factors of
/// `Π_n(t)` at step parameter `s = t/n`.
fn one_step_unitary(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    s: f64,
) -> FormulaResult<ComplexMatrix> {
    let (a, b) = (&pair.a, &pair.b);
    Ok(match scheme {
        ProductScheme::TrotterPlain => &a.unitary_group(s) * &b.unitary_group(s),
        ProductScheme::TrotterSymmetrized => {
            let half = a.unitary_group(0.5 * s);
            &(&half * &b.unitary_group(s)) * &half
        }
        ProductScheme::KatoProduct { f, g } => {
            let fa = kato_factor(a, f, |l| C64::new(0.0, s * l), scheme)?;
            let gb = kato_factor(b, g, |l| C64::new(0.0, s * l), scheme)?;
            &fa * &gb
        }
        ProductScheme::KatoSymmetrized { f, g } => {
            let fa = kato_factor(a, f, |l| C64::new(0.0, 0.5 * s * l), scheme)?;
            let gb = kato_factor(b, g, |l| C64::new(0.0, s * l), scheme)?;
            &(&fa * &gb) * &fa
        }
        ProductScheme::CachiaAverage { f, g } => {
            let fa = kato_factor(a, f, |l| C64::new(0.0, 2.0 * s * l), scheme)?;
            let gb = kato_factor(b, g, |l| C64::new(0.0, 2.0 * s * l), scheme)?;
            (&fa + &gb).scale(C64::new(0.5, 0.0))
        }
        ProductScheme::LapidusResolvent { k } => {
            if *k == 0 {
                return Err(FormulaError::InvalidSubdivisions);
            }
            let z = C64::new(0.0, s / *k as f64);
            let ra = a.resolvent(z)?.power(*k as u64);
            let rb = b.resolvent(z)?.power(*k as u64);
            &ra * &rb
        }
        ProductScheme::Zeno => {
            let zeno = pair.zeno().ok_or(FormulaError::MissingProjection)?;
            let p = zeno.projection();
            &(p * &b.unitary_group(s)) * p
        }
        ProductScheme::RealTimePlain | ProductScheme::RealTimeSymmetrized => {
            return one_step_real(pair, scheme, s)
        }
        ProductScheme::Exact => pair.c.unitary_group(s),
    })
}

/// One-step factor with real semigroup arguments (the Chernoff quotient and
/// the real-time family run over these).
fn one_step_real(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    s: f64,
) -> FormulaResult<ComplexMatrix> {
    let (a, b) = (&pair.a, &pair.b);
    Ok(match scheme {
        ProductScheme::TrotterPlain | ProductScheme::RealTimePlain => {
            &a.semigroup(s) * &b.semigroup(s)
        }
        ProductScheme::TrotterSymmetrized | ProductScheme::RealTimeSymmetrized => {
            let half = a.semigroup(0.5 * s);
            &(&half * &b.semigroup(s)) * &half
        }
        ProductScheme::KatoProduct { f, g } => {
            let fa = kato_factor(a, f, |l| C64::new(s * l, 0.0), scheme)?;
            let gb = kato_factor(b, g, |l| C64::new(s * l, 0.0), scheme)?;
            &fa * &gb
        }
        ProductScheme::KatoSymmetrized { f, g } => {
            let fa = kato_factor(a, f, |l| C64::new(0.5 * s * l, 0.0), scheme)?;
            let gb = kato_factor(b, g, |l| C64::new(s * l, 0.0), scheme)?;
            &(&fa * &gb) * &fa
        }
        ProductScheme::CachiaAverage { f, g } => {
            let fa = kato_factor(a, f, |l| C64::new(2.0 * s * l, 0.0), scheme)?;
            let gb = kato_factor(b, g, |l| C64::new(2.0 * s * l, 0.0), scheme)?;
            (&fa + &gb).scale(C64::new(0.5, 0.0))
        }
        ProductScheme::LapidusResolvent { k } => {
            if *k == 0 {
                return Err(FormulaError::InvalidSubdivisions);
            }
            let z = C64::new(s / *k as f64, 0.0);
            let ra = a.resolvent(z)?.power(*k as u64);
            let rb = b.resolvent(z)?.power(*k as u64);
            &ra * &rb
        }
        ProductScheme::Zeno => {
            let zeno = pair.zeno().ok_or(FormulaError::MissingProjection)?;
            let p = zeno.projection();
            &(p * &b.semigroup(s)) * p
        }
        ProductScheme::Exact => pair.c.semigroup(s),
    })
}

/// Build `Π_n(t)`, the n-step product approximant.
///
/// Unitary-family schemes accept any real t (the factors form groups);
/// real-time schemes are semigroups and reject t < 0.
pub fn product_operator(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    t: f64,
    n: u32,
) -> FormulaResult<ComplexMatrix> {
    if n == 0 {
        return Err(FormulaError::InvalidSubdivisions);
    }
    if scheme.is_real_time() {
        if t < 0.0 {
            return Err(FormulaError::NegativeTimeRealScheme { t });
        }
        let step = one_step_real(pair, scheme, t / n as f64)?;
        return Ok(step.power(n as u64));
    }
    if let ProductScheme::Exact = scheme {
        // the sentinel is the limit object itself
        return Ok(pair.exact_propagator(t));
    }
    let step = one_step_unitary(pair, scheme, t / n as f64)?;
    Ok(step.power(n as u64))
}

/// The Chernoff quotient `S_τ = (I - F(τ·t))/τ` built from the scheme's
/// real one-step factor.
pub(crate) fn chernoff_quotient(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    tau: f64,
    t: f64,
) -> FormulaResult<ComplexMatrix> {
    let f = one_step_real(pair, scheme, tau * t)?;
    let id = ComplexMatrix::identity(pair.dim());
    Ok((&id - &f).scale(C64::new(1.0 / tau, 0.0)))
}

/// Boundary Chernoff quotient `S_τ(it) = (I - F_τ(it))/τ` from the unitary
/// one-step factor.
pub(crate) fn chernoff_quotient_boundary(
    pair: &OperatorPair,
    scheme: &ProductScheme,
    tau: f64,
    t: f64,
) -> FormulaResult<ComplexMatrix> {
    let f = one_step_unitary(pair, scheme, tau * t)?;
    let id = ComplexMatrix::identity(pair.dim());
    Ok((&id - &f).scale(C64::new(1.0 / tau, 0.0)))
}
