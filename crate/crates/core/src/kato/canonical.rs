//! The canonical `(zeros, measure, α)` representation of a holomorphic Kato
//! function and its budget arithmetic.

use num_complex::Complex64 as C64;

use super::measure::{AcWeight, KatoMeasure};
use super::zeros::ZeroSet;
use super::{KatoError, KatoResult};
use crate::rng::SplitMix64;

/// Slack allowed on the κ + β ≤ 1 budget before construction is refused.
pub const BUDGET_TOL: f64 = 1e-8;

/// Assembled canonical representation, with κ and β cached from
/// construction: `f(z) = D(z) · exp(-E(z)) · e^{-αz}`.
#[derive(Clone, Debug)]
pub struct CanonicalKato {
    zeros: ZeroSet,
    measure: KatoMeasure,
    alpha: f64,
    kappa: f64,
    beta: f64,
}

/// Close the derivative budget: α := 1 - κ - β, clamped into [0, 1].
///
/// κ comes validated from the zero set; β is extracted from the measure by
/// the halving-grid limit. κ + β > 1 (beyond tolerance) leaves no room for
/// the exponential factor and is refused.
pub fn build_canonical(zeros: ZeroSet, measure: KatoMeasure) -> KatoResult<CanonicalKato> {
    let kappa = zeros.kappa();
    let beta = measure.beta()?;
    if kappa + beta > 1.0 + BUDGET_TOL {
        return Err(KatoError::BudgetExceeded { kappa, beta });
    }
    let alpha = (1.0 - kappa - beta).clamp(0.0, 1.0);
    Ok(CanonicalKato {
        zeros,
        measure,
        alpha,
        kappa,
        beta,
    })
}

impl CanonicalKato {
    /// Diagnostic constructor that takes α as given instead of closing the
    /// budget. The result is generally *not* a Kato function; it exists so
    /// the axiom checker can demonstrate that a broken budget is caught
    /// (the measured slope comes out as -(α+κ+β) instead of -1).
    pub fn with_forced_alpha(
        zeros: ZeroSet,
        measure: KatoMeasure,
        alpha: f64,
    ) -> KatoResult<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(KatoError::InvalidParameter {
                reason: format!("alpha must be finite and >= 0, got {alpha}"),
            });
        }
        let kappa = zeros.kappa();
        let beta = measure.beta()?;
        Ok(CanonicalKato {
            zeros,
            measure,
            alpha,
            kappa,
            beta,
        })
    }

    pub fn zeros(&self) -> &ZeroSet {
        &self.zeros
    }

    pub fn measure(&self) -> &KatoMeasure {
        &self.measure
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// α + κ + β, which is 1 (within tolerance) for every budget-closed
    /// instance.
    pub fn budget(&self) -> f64 {
        self.alpha + self.kappa + self.beta
    }

    /// Evaluate the three factors at z, Re z ≥ 0.
    pub fn eval(&self, z: C64) -> KatoResult<C64> {
        if z.re < 0.0 {
            return Err(KatoError::OutsideHalfPlane { z });
        }
        let d = self.zeros.blaschke(z);
        let e = self.measure.exponent(z)?;
        Ok(d * (-e).exp() * (-(self.alpha) * z).exp())
    }
}

/// Seeded generator of valid `(zeros, measure)` canonical inputs: κ and the
/// β contributions of atoms and AC weight are drawn first and the raw data
/// is rescaled to hit them, so the budget always closes with α > 0.
pub fn random_canonical_inputs(seed: u64) -> (ZeroSet, KatoMeasure) {
    let mut rng = SplitMix64::new(seed);
    let kappa_target = 0.6 * rng.uniform();
    let n_zeros = (rng.next_u64() % 4) as usize;
    let zeros = if n_zeros == 0 || kappa_target < 1e-3 {
        ZeroSet::empty()
    } else {
        let raw: Vec<(C64, u32)> = (0..n_zeros)
            .map(|_| {
                let xi = C64::new(0.3 + 2.2 * rng.uniform(), 3.0 * rng.uniform());
                let mult = 1 + (rng.next_u64() % 2) as u32;
                (xi, mult)
            })
            .collect();
        let kappa_raw: f64 = raw
            .iter()
            .map(|(xi, m)| 4.0 * *m as f64 * xi.re / xi.norm_sqr())
            .sum();
        // κ scales as 1/c under ξ -> cξ
        let c = kappa_raw / kappa_target;
        ZeroSet::new(raw.into_iter().map(|(xi, m)| (xi * c, m)).collect())
            .expect("rescaled zeros close the kappa target")
    };

    let beta_budget = 0.8 * (1.0 - kappa_target) * rng.uniform();
    let ac_share = if rng.uniform() < 0.5 { rng.uniform() } else { 0.0 };
    let beta_atoms_target = beta_budget * (1.0 - ac_share);
    let n_atoms = 1 + (rng.next_u64() % 2) as usize;
    let mut atoms: Vec<(f64, f64)> = (0..n_atoms)
        .map(|_| (0.3 + 4.0 * rng.uniform(), 0.1 + rng.uniform()))
        .collect();
    let beta_raw: f64 = atoms
        .iter()
        .map(|&(s, w)| (2.0 / std::f64::consts::PI) * w / (s * s))
        .sum();
    for (_, w) in atoms.iter_mut() {
        *w *= beta_atoms_target / beta_raw;
    }
    if beta_atoms_target < 1e-6 {
        atoms.clear();
    }
    let ac = if ac_share > 0.0 {
        Some(AcWeight::RationalStep {
            c: beta_budget * ac_share,
        })
    } else {
        None
    };
    let measure = KatoMeasure::new(atoms, ac).expect("rescaled atoms are valid");
    (zeros, measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kato::measure::AcWeight;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn empty_data_gives_pure_exponential() {
        let f = build_canonical(ZeroSet::empty(), KatoMeasure::empty()).unwrap();
        assert_eq!(f.alpha(), 1.0);
        assert_eq!(f.kappa(), 0.0);
        assert_eq!(f.beta(), 0.0);
        for &z in &[c(0.5, 0.0), c(1.0, 2.0), c(0.0, 3.0)] {
            let v = f.eval(z).unwrap();
            assert!((v - (-z).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn log_resolvent_measure_closes_with_alpha_zero() {
        let measure = KatoMeasure::new(vec![], Some(AcWeight::LogResolvent { k: 1.0 })).unwrap();
        let f = build_canonical(ZeroSet::empty(), measure).unwrap();
        assert!(f.alpha() <= 1e-6, "alpha = {}", f.alpha());
        assert!((f.beta() - 1.0).abs() < 1e-6);
        assert_eq!(f.kappa(), 0.0);
    }

    #[test]
    fn alpha_constrained_zero_closes_with_alpha_zero() {
        // |ξ|² = 4η/(1-α') with α' = 0 gives κ = 1
        let eta = 0.5;
        let m2: f64 = 4.0 * eta;
        let tau = (m2 - eta * eta).sqrt();
        let zeros = ZeroSet::new(vec![(c(eta, tau), 1)]).unwrap();
        let f = build_canonical(zeros, KatoMeasure::empty()).unwrap();
        assert!((f.kappa() - 1.0).abs() < 1e-12);
        assert!(f.alpha().abs() < 1e-12);
    }

    #[test]
    fn budget_violation_refused() {
        // ξ = 1 + 2i has κ = 4/5 exactly; an atom with β = 0.6 cannot close
        let zeros = ZeroSet::new(vec![(c(1.0, 2.0), 1)]).unwrap();
        assert!((zeros.kappa() - 0.8).abs() < 1e-15);
        let s = 1.7;
        let w = 0.6 * std::f64::consts::PI * s * s / 2.0;
        let measure = KatoMeasure::from_atoms(vec![(s, w)]).unwrap();
        assert!(matches!(
            build_canonical(zeros, measure),
            Err(KatoError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn round_trip_against_resolvent_power() {
        // canonical (∅, h_k, α=0) equals (1 + x/k)^{-k} on the real axis
        for &k in &[1.0, 3.0] {
            let measure =
                KatoMeasure::new(vec![], Some(AcWeight::LogResolvent { k })).unwrap();
            let f = build_canonical(ZeroSet::empty(), measure).unwrap();
            for i in 0..40 {
                let x = 10.0_f64.powf(-2.0 + 4.0 * i as f64 / 39.0);
                let got = f.eval(c(x, 0.0)).unwrap();
                let expect = (1.0 + x / k).powf(-k);
                let rel = (got.re - expect).abs() / expect;
                assert!(
                    rel <= 1e-5 && got.im.abs() < 1e-12,
                    "k={k} x={x:.3e}: {} vs {expect} (rel {rel:.3e})",
                    got.re
                );
            }
        }
    }

    #[test]
    fn eval_vanishes_at_prescribed_zeros() {
        let xi = c(1.5, 2.0);
        let zeros = ZeroSet::new(vec![(xi, 1)]).unwrap();
        let f = build_canonical(zeros, KatoMeasure::empty()).unwrap();
        let v = f.eval(xi).unwrap();
        assert!(v.norm() <= 1e-8, "|f(xi)| = {}", v.norm());
    }

    #[test]
    fn random_inputs_close_the_budget() {
        for seed in 0..30u64 {
            let (zeros, measure) = random_canonical_inputs(seed);
            let f = build_canonical(zeros, measure)
                .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            let budget = f.budget();
            assert!(
                (budget - 1.0).abs() <= 1e-8,
                "seed {seed}: budget {budget}"
            );
            assert!(f.alpha() > 0.0, "seed {seed}: alpha {}", f.alpha());
        }
    }

    #[test]
    fn random_builds_pass_the_axiom_battery() {
        // budget closure must translate into the defining axioms, slope
        // included, through the quadrature path
        use crate::kato::KatoFunctionHandle;
        for seed in [0u64, 3, 7, 11] {
            let (zeros, measure) = random_canonical_inputs(seed);
            let f = build_canonical(zeros, measure).unwrap();
            let report = KatoFunctionHandle::Canonical(f).check_axioms();
            assert!(
                report.all_pass(),
                "seed {seed}: {:?}",
                report.first_failure()
            );
        }
    }

    #[test]
    fn forced_alpha_breaks_slope() {
        let broken =
            CanonicalKato::with_forced_alpha(ZeroSet::empty(), KatoMeasure::empty(), 0.5)
                .unwrap();
        // slope of (f(x)-1)/x near zero is -(α+κ+β) = -0.5
        let x = 1e-6;
        let v = broken.eval(c(x, 0.0)).unwrap();
        let slope = (v.re - 1.0) / x;
        assert!((slope + 0.5).abs() < 1e-4, "slope {slope}");
    }
}
