//! Holomorphic Kato functions.
//!
//! A Kato function is a real function on `[0, ∞)` with `0 ≤ f ≤ 1`,
//! `f(0) = 1` and `f'(0) = -1`; the holomorphic class extends to the open
//! right half-plane with `|f(z)| ≤ 1` there. Every such function factors as
//!
//! ```text
//! f(z) = D(z) · exp{ -(2z/π) ∫ dν(t)/(z²+t²) } · e^{-αz}
//! ```
//!
//! with `D` a Blaschke-type product over the zeros, `ν` a measure on
//! `(0, ∞)`, and `α ≥ 0`, constrained by the derivative budget
//! `α + κ + β = 1`. This module constructs, validates, evaluates and
//! diagnoses members of the class:
//!
//! - [`zeros`]: the zero set, its κ functional and the Blaschke product;
//! - [`measure`]: atomic + absolutely-continuous measures, the exponent
//!   `E(z)` and the β limit;
//! - [`canonical`]: the assembled `(zeros, ν, α)` representation;
//! - [`KatoFunctionHandle`]: closed-form builtins plus canonical instances
//!   behind one evaluation surface, with the axiom checker used to admit
//!   functions into product schemes.

pub mod canonical;
pub mod measure;
pub mod zeros;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::{build_canonical, random_canonical_inputs, CanonicalKato};
pub use measure::{AcWeight, KatoMeasure};
pub use zeros::{blaschke_product, BoundaryDiagnostic, RegularityVerdict, ZeroEntry, ZeroSet};

#[derive(Debug, Error)]
pub enum KatoError {
    /// κ = 4 Σ Re ξ / |ξ|² exceeded 1: the zero set cannot belong to a Kato
    /// function.
    #[error("kappa = {kappa} exceeds 1: not a Kato zero set")]
    KappaExceedsOne { kappa: f64 },

    /// A zero lies outside the open right half-plane or has Im < 0 or zero
    /// multiplicity.
    #[error("invalid zero ({position}, multiplicity {multiplicity}): \
             need Re > 0, Im >= 0, multiplicity >= 1")]
    InvalidZero { position: C64, multiplicity: u32 },

    /// Atoms must sit at s > 0 with positive weight (ν({0}) = 0).
    #[error("invalid atom (s = {s}, w = {w}): need s > 0 and w > 0")]
    InvalidAtom { s: f64, w: f64 },

    /// The 1/(1+t²)-moment of the measure failed its finiteness guard.
    #[error("measure moment {moment:.3e} exceeds the 1e12 guard")]
    MomentGuardExceeded { moment: f64 },

    /// A weight parameter is outside its domain.
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    /// Evaluation requested within 1e-12 of an atomic pole ±i·s on the
    /// imaginary axis, where the boundary value genuinely fails to exist.
    #[error("evaluation at z = {z} hits the boundary pole at ±i{s}")]
    PoleAtBoundary { z: C64, s: f64 },

    /// Boundary evaluation (Re z = 0) of an absolutely-continuous part with
    /// no registered closed-form boundary formula.
    #[error("boundary evaluation unsupported for weight '{weight}' (no closed form registered)")]
    BoundaryACUnsupported { weight: String },

    /// The β limit diverged: p(x) blew past 10 or its increments stopped
    /// shrinking.
    #[error("beta limit diverges (p reached {value:.3e})")]
    BetaDiverges { value: f64 },

    /// κ + β > 1: no α ≥ 0 can complete the derivative budget.
    #[error("budget exceeded: kappa {kappa} + beta {beta} > 1")]
    BudgetExceeded { kappa: f64, beta: f64 },

    /// Evaluation point outside the closed right half-plane.
    #[error("evaluation point {z} has Re < 0")]
    OutsideHalfPlane { z: C64 },
}

pub type KatoResult<T> = Result<T, KatoError>;

/// One evaluatable Kato function: a closed-form builtin or a canonical
/// `(zeros, measure, α)` instance.
#[derive(Clone, Debug)]
pub enum KatoFunctionHandle {
    /// `f(z) = e^{-z}` (no zeros, no measure, α = 1).
    Exp,
    /// `f_k(z) = (1 + z/k)^{-k}`, the resolvent-power family.
    ResolventPower(u32),
    /// A single conjugate zero pair ξ = η + iτ with `|ξ|² = 4η/(1-α)`, so
    /// the budget closes with κ = 1 - α and no measure.
    SinglePair { eta: f64, alpha: f64 },
    /// One atom of mass `(1-α)πs²/2` at `s`:
    /// `f(z) = exp{-z(1-α)s²/(z²+s²)} e^{-αz}`.
    AtomicExp { s: f64, alpha: f64 },
    /// General canonical representation.
    Canonical(CanonicalKato),
}

impl KatoFunctionHandle {
    pub fn exp() -> Self {
        KatoFunctionHandle::Exp
    }

    pub fn resolvent_power(k: u32) -> KatoResult<Self> {
        if k == 0 {
            return Err(KatoError::InvalidParameter {
                reason: "resolvent power k must be >= 1".into(),
            });
        }
        Ok(KatoFunctionHandle::ResolventPower(k))
    }

    pub fn single_pair(eta: f64, alpha: f64) -> KatoResult<Self> {
        if !(eta.is_finite() && eta > 0.0) || !(0.0..=1.0).contains(&alpha) {
            return Err(KatoError::InvalidParameter {
                reason: format!("single pair needs eta > 0 and alpha in [0,1], got ({eta}, {alpha})"),
            });
        }
        if alpha < 1.0 && eta > 4.0 / (1.0 - alpha) + 1e-12 {
            return Err(KatoError::InvalidParameter {
                reason: format!("single pair needs eta <= 4/(1-alpha), got eta = {eta}"),
            });
        }
        Ok(KatoFunctionHandle::SinglePair { eta, alpha })
    }

    pub fn atomic_exp(s: f64, alpha: f64) -> KatoResult<Self> {
        if !(s.is_finite() && s > 0.0) || !(0.0..=1.0).contains(&alpha) {
            return Err(KatoError::InvalidParameter {
                reason: format!("atomic exp needs s > 0 and alpha in [0,1], got ({s}, {alpha})"),
            });
        }
        Ok(KatoFunctionHandle::AtomicExp { s, alpha })
    }

    /// Short tag for reports and error messages. Comma-free so it can sit
    /// inside a CSV field.
    pub fn tag(&self) -> String {
        match self {
            KatoFunctionHandle::Exp => "exp".into(),
            KatoFunctionHandle::ResolventPower(k) => format!("resolvent_power(k={k})"),
            KatoFunctionHandle::SinglePair { eta, alpha } => {
                format!("single_pair(eta={eta};alpha={alpha})")
            }
            KatoFunctionHandle::AtomicExp { s, alpha } => {
                format!("atomic_exp(s={s};alpha={alpha})")
            }
            KatoFunctionHandle::Canonical(c) => format!(
                "canonical(zeros={};atoms={};ac={})",
                c.zeros().entries().len(),
                c.measure().atoms().len(),
                c.measure()
                    .ac_weight()
                    .map(|w| w.id().to_string())
                    .unwrap_or_else(|| "none".into()),
            ),
        }
    }

    /// Evaluate on the closed right half-plane.
    pub fn eval(&self, z: C64) -> KatoResult<C64> {
        if z.re < 0.0 {
            return Err(KatoError::OutsideHalfPlane { z });
        }
        match self {
            KatoFunctionHandle::Exp => Ok((-z).exp()),
            KatoFunctionHandle::ResolventPower(k) => {
                let w = C64::new(1.0, 0.0) + z / (*k as f64);
                Ok(w.powu(*k).inv())
            }
            KatoFunctionHandle::SinglePair { eta, alpha } => {
                if *alpha >= 1.0 {
                    // the pair escapes to infinity, leaving the pure exponential
                    return Ok((-z).exp());
                }
                let m2 = 4.0 * eta / (1.0 - alpha);
                let z2 = z * z;
                let num = z2 - z * (2.0 * eta) + m2;
                let den = z2 + z * (2.0 * eta) + m2;
                Ok(num / den * (-(*alpha) * z).exp())
            }
            KatoFunctionHandle::AtomicExp { s, alpha } => {
                let is = C64::new(0.0, *s);
                if (z - is).norm() < 1e-12 || (z + is).norm() < 1e-12 {
                    return Err(KatoError::PoleAtBoundary { z, s: *s });
                }
                let s2 = s * s;
                let exponent = z * (1.0 - alpha) * s2 / (z * z + s2) + z * *alpha;
                Ok((-exponent).exp())
            }
            KatoFunctionHandle::Canonical(c) => c.eval(z),
        }
    }

    /// Run the Kato axiom battery; failures are report entries, not errors.
    pub fn check_axioms(&self) -> AxiomReport {
        check_kato_axioms(self)
    }
}

/// Which axiom a check result refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KatoAxiom {
    /// (a) `f(x) → 1` as `x → 0⁺`.
    LimitOneAtZero,
    /// (b) `(f(x) - 1)/x → -1`.
    DerivativeMinusOne,
    /// (c) `0 ≤ f(x) ≤ 1` on the positive reals, and f real there.
    UnitIntervalOnAxis,
    /// (d) `|f(z)| ≤ 1` on the right half-plane sample grid.
    HalfPlaneContraction,
}

impl std::fmt::Display for KatoAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            KatoAxiom::LimitOneAtZero => "f(0)=1",
            KatoAxiom::DerivativeMinusOne => "f'(0)=-1",
            KatoAxiom::UnitIntervalOnAxis => "0<=f<=1 on axis",
            KatoAxiom::HalfPlaneContraction => "|f|<=1 on half-plane",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: KatoAxiom,
    pub passed: bool,
    /// Extrapolated limit / slope, or the worst offending value for the
    /// grid checks.
    pub measured: f64,
    /// Witness point (re, im) of the worst violation, when there is one.
    pub witness: Option<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, axiom: KatoAxiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("report carries every axiom")
    }
}

/// Extrapolate the limit of a sequence sampled on a halving grid by
/// iterated Aitken Δ² (Richardson acceleration with unknown order).
pub(crate) fn aitken_limit(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    while v.len() >= 3 {
        let mut next = Vec::with_capacity(v.len() - 2);
        for w in v.windows(3) {
            let d1 = w[1] - w[0];
            let d2 = w[2] - w[1];
            let denom = d2 - d1;
            // flat or rounding-dominated tail: keep the last value
            if d2.abs() <= 1e-14 * w[2].abs().max(1.0) || denom.abs() <= f64::MIN_POSITIVE {
                next.push(w[2]);
            } else {
                next.push(w[2] - d2 * d2 / denom);
            }
        }
        v = next;
    }
    *v.last().expect("non-empty sequence")
}

/// Axiom battery per the class definition: limit 1 at zero, slope -1 at
/// zero, range `[0, 1]` on the axis, contraction on the half-plane.
pub fn check_kato_axioms(f: &KatoFunctionHandle) -> AxiomReport {
    let mut checks = Vec::with_capacity(4);

    // (a), (b): sample along x_j = 2^{-j}. j stops at 20 so that the
    // cancellation in f(x)-1 stays well above rounding.
    let mut values = Vec::new();
    let mut slopes = Vec::new();
    let mut eval_failure: Option<(f64, f64)> = None;
    for j in 0..=20 {
        let x = 2.0_f64.powi(-j);
        match f.eval(C64::new(x, 0.0)) {
            Ok(v) => {
                values.push(v.re);
                slopes.push((v.re - 1.0) / x);
            }
            Err(_) => {
                eval_failure = Some((x, 0.0));
                break;
            }
        }
    }
    if let Some(w) = eval_failure {
        checks.push(AxiomCheck {
            axiom: KatoAxiom::LimitOneAtZero,
            passed: false,
            measured: f64::NAN,
            witness: Some(w),
        });
        checks.push(AxiomCheck {
            axiom: KatoAxiom::DerivativeMinusOne,
            passed: false,
            measured: f64::NAN,
            witness: Some(w),
        });
    } else {
        let tail = &values[values.len().saturating_sub(5)..];
        let limit = aitken_limit(tail);
        checks.push(AxiomCheck {
            axiom: KatoAxiom::LimitOneAtZero,
            passed: (limit - 1.0).abs() <= 1e-8,
            measured: limit,
            witness: None,
        });
        let tail = &slopes[slopes.len().saturating_sub(5)..];
        let slope = aitken_limit(tail);
        checks.push(AxiomCheck {
            axiom: KatoAxiom::DerivativeMinusOne,
            passed: (slope + 1.0).abs() <= 1e-6,
            measured: slope,
            witness: None,
        });
    }

    // (c): 0 <= f <= 1 and real on a 200-point log grid over [1e-4, 1e4].
    let mut worst = 0.0_f64;
    let mut witness = None;
    for i in 0..200 {
        let x = 10.0_f64.powf(-4.0 + 8.0 * i as f64 / 199.0);
        match f.eval(C64::new(x, 0.0)) {
            Ok(v) => {
                let excess = (v.re - 1.0).max(-v.re).max(v.im.abs());
                if excess > worst {
                    worst = excess;
                    witness = Some((x, 0.0));
                }
            }
            Err(_) => {
                worst = f64::INFINITY;
                witness = Some((x, 0.0));
                break;
            }
        }
    }
    checks.push(AxiomCheck {
        axiom: KatoAxiom::UnitIntervalOnAxis,
        passed: worst <= 1e-10,
        measured: worst,
        witness: if worst > 1e-10 { witness } else { None },
    });

    // (d): |f| <= 1 + 1e-10 on a 40x40 grid, Re log-spaced in [1e-3, 10],
    // Im linear in [-10, 10].
    let mut worst = 0.0_f64;
    let mut witness = None;
    for i in 0..40 {
        let re = 10.0_f64.powf(-3.0 + 4.0 * i as f64 / 39.0);
        for j in 0..40 {
            let im = -10.0 + 20.0 * j as f64 / 39.0;
            let z = C64::new(re, im);
            match f.eval(z) {
                Ok(v) => {
                    let excess = v.norm() - 1.0;
                    if excess > worst {
                        worst = excess;
                        witness = Some((re, im));
                    }
                }
                Err(_) => {
                    worst = f64::INFINITY;
                    witness = Some((re, im));
                }
            }
        }
    }
    checks.push(AxiomCheck {
        axiom: KatoAxiom::HalfPlaneContraction,
        passed: worst <= 1e-10,
        measured: worst,
        witness: if worst > 1e-10 { witness } else { None },
    });

    AxiomReport { checks }
}

/// Wire format for Kato-function descriptors.
///
/// Canonical instances are described by their raw data (zeros as
/// `[re, im, mult]` triples, atoms as `[s, w]` pairs, AC weight by
/// registered id); α is derived from the budget when the handle is built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum KatoFunctionSpec {
    Exp,
    ResolventPower {
        k: u32,
    },
    SinglePair {
        eta: f64,
        alpha: f64,
    },
    AtomicExp {
        s: f64,
        alpha: f64,
    },
    Canonical {
        #[serde(default)]
        zeros: Vec<(f64, f64, u32)>,
        #[serde(default)]
        atoms: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ac_weight: Option<AcWeightSpec>,
    },
}

/// Registered absolutely-continuous weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum AcWeightSpec {
    /// `h(t) = (k/2) ln(1 + t²/k²)`; reproduces `(1 + z/k)^{-k}`.
    LogResolvent { k: f64 },
    /// `h(t) = c t²/(1 + t²)`; contributes β = c, no registered boundary
    /// formula.
    RationalStep { c: f64 },
}

impl KatoFunctionSpec {
    /// Validate and build the runtime handle.
    pub fn build(&self) -> KatoResult<KatoFunctionHandle> {
        match self {
            KatoFunctionSpec::Exp => Ok(KatoFunctionHandle::Exp),
            KatoFunctionSpec::ResolventPower { k } => KatoFunctionHandle::resolvent_power(*k),
            KatoFunctionSpec::SinglePair { eta, alpha } => {
                KatoFunctionHandle::single_pair(*eta, *alpha)
            }
            KatoFunctionSpec::AtomicExp { s, alpha } => KatoFunctionHandle::atomic_exp(*s, *alpha),
            KatoFunctionSpec::Canonical {
                zeros,
                atoms,
                ac_weight,
            } => {
                let zero_set = ZeroSet::new(
                    zeros
                        .iter()
                        .map(|&(re, im, mult)| (C64::new(re, im), mult))
                        .collect(),
                )?;
                let ac = ac_weight.as_ref().map(AcWeight::from_spec).transpose()?;
                let measure = KatoMeasure::new(atoms.clone(), ac)?;
                Ok(KatoFunctionHandle::Canonical(canonical::build_canonical(
                    zero_set, measure,
                )?))
            }
        }
    }
}

impl KatoFunctionHandle {
    pub fn to_spec(&self) -> KatoFunctionSpec {
        match self {
            KatoFunctionHandle::Exp => KatoFunctionSpec::Exp,
            KatoFunctionHandle::ResolventPower(k) => KatoFunctionSpec::ResolventPower { k: *k },
            KatoFunctionHandle::SinglePair { eta, alpha } => KatoFunctionSpec::SinglePair {
                eta: *eta,
                alpha: *alpha,
            },
            KatoFunctionHandle::AtomicExp { s, alpha } => KatoFunctionSpec::AtomicExp {
                s: *s,
                alpha: *alpha,
            },
            KatoFunctionHandle::Canonical(c) => KatoFunctionSpec::Canonical {
                zeros: c
                    .zeros()
                    .entries()
                    .iter()
                    .map(|e| (e.position.re, e.position.im, e.multiplicity))
                    .collect(),
                atoms: c.measure().atoms().to_vec(),
                ac_weight: c.measure().ac_weight().map(|w| w.to_spec()),
            },
        }
    }
}
