//! Zero sets of holomorphic Kato functions and their Blaschke-type product.
//!
//! A zero set stores one representative ξ per conjugate pair, with
//! `Re ξ > 0` and `Im ξ ≥ 0`. The quadratic factor
//!
//! ```text
//! (z² - 2z·Re ξ + |ξ|²) / (z² + 2z·Re ξ + |ξ|²)
//! ```
//!
//! already encodes both members of the pair, so the κ functional counts
//! each representative once. Entries with `Im ξ = 0` stand for real zeros,
//! which carry even multiplicity through the same quadratic factor.

use num_complex::Complex64 as C64;

use super::{KatoError, KatoResult};

/// Tolerance slack on the κ ≤ 1 admission test.
pub const KAPPA_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroEntry {
    pub position: C64,
    pub multiplicity: u32,
}

/// Validated zero set with its cached κ.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    entries: Vec<ZeroEntry>,
    kappa: f64,
}

impl ZeroSet {
    pub fn empty() -> Self {
        ZeroSet {
            entries: Vec::new(),
            kappa: 0.0,
        }
    }

    /// Validate positions, multiplicities and the κ ≤ 1 admission bound.
    pub fn new(zeros: Vec<(C64, u32)>) -> KatoResult<Self> {
        let mut entries = Vec::with_capacity(zeros.len());
        for (position, multiplicity) in zeros {
            if !(position.re.is_finite() && position.re > 0.0)
                || !position.im.is_finite()
                || position.im < 0.0
                || multiplicity == 0
            {
                return Err(KatoError::InvalidZero {
                    position,
                    multiplicity,
                });
            }
            entries.push(ZeroEntry {
                position,
                multiplicity,
            });
        }
        let kappa = raw_kappa(&entries);
        if kappa > 1.0 + KAPPA_TOL {
            return Err(KatoError::KappaExceedsOne { kappa });
        }
        Ok(ZeroSet { entries, kappa })
    }

    pub fn entries(&self) -> &[ZeroEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// κ = 4 Σ mult · Re ξ / |ξ|², zero for the empty set.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Blaschke-type product over the zero set; `|D(z)| ≤ 1` for Re z ≥ 0.
    pub fn blaschke(&self, z: C64) -> C64 {
        blaschke_product(
            self.entries
                .iter()
                .map(|e| (e.position, e.multiplicity)),
            z,
        )
    }

    /// Zero-concentration diagnostic near the boundary point `iy`:
    /// `τ(iy, t) = Σ_{dist(iy, ξ) ≤ t} mult · Re ξ`, reported as the ratio
    /// `τ/t` for each probe radius.
    ///
    /// Conjugate-pair representatives are mirrored, so for `y < 0` the
    /// implicit zero `ξ̄` is seen. Probe radii must be positive, finite and
    /// strictly decreasing.
    pub fn boundary_regularity(&self, y: f64, probe_ts: &[f64]) -> BoundaryDiagnostic {
        assert!(!probe_ts.is_empty(), "need at least one probe radius");
        assert!(
            probe_ts
                .iter()
                .all(|t| t.is_finite() && *t > 0.0),
            "probe radii must be positive and finite"
        );
        assert!(
            probe_ts.windows(2).all(|w| w[0] > w[1]),
            "probe radii must be strictly decreasing"
        );
        let point = C64::new(0.0, y);
        let mut min_distance = f64::INFINITY;
        let distances: Vec<(f64, f64)> = self
            .entries
            .iter()
            .flat_map(|e| {
                let mass = e.multiplicity as f64 * e.position.re;
                let d_up = (point - e.position).norm();
                let d_down = (point - e.position.conj()).norm();
                min_distance = min_distance.min(d_up).min(d_down);
                // a real zero is its own mirror
                if e.position.im == 0.0 {
                    vec![(d_up, mass)]
                } else {
                    vec![(d_up, mass), (d_down, mass)]
                }
            })
            .collect();

        let ratios: Vec<(f64, f64)> = probe_ts
            .iter()
            .map(|&t| {
                let tau: f64 = distances
                    .iter()
                    .filter(|(d, _)| *d <= t)
                    .map(|(_, mass)| mass)
                    .sum();
                (t, tau / t)
            })
            .collect();

        let r_max = ratios.iter().map(|&(_, r)| r).fold(0.0_f64, f64::max);
        let r_last = ratios.last().map(|&(_, r)| r).unwrap_or(0.0);
        let verdict = if r_last <= 1e-12 || (r_max > 0.0 && r_last <= 0.25 * r_max) {
            RegularityVerdict::VanishingRatio
        } else if r_max > 0.0 && r_last >= 0.5 * r_max {
            RegularityVerdict::NonVanishing
        } else {
            RegularityVerdict::Inconclusive
        };
        let t_min = *probe_ts.last().expect("non-empty probes");
        BoundaryDiagnostic {
            ratios,
            verdict,
            min_distance,
            accumulation_suspected: min_distance < t_min,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityVerdict {
    /// τ(iy, t)/t trends to zero: the boundary modulus limit plausibly
    /// exists at iy.
    VanishingRatio,
    /// τ(iy, t)/t stays bounded below over the probes.
    NonVanishing,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct BoundaryDiagnostic {
    /// (probe radius, τ/t) in the given probe order.
    pub ratios: Vec<(f64, f64)>,
    pub verdict: RegularityVerdict,
    /// Distance from iy to the nearest (mirrored) zero; infinite for an
    /// empty set.
    pub min_distance: f64,
    /// Whether a zero sits closer than the smallest probe radius, the
    /// numerical stand-in for accumulation at iy.
    pub accumulation_suspected: bool,
}

fn raw_kappa(entries: &[ZeroEntry]) -> f64 {
    4.0 * entries
        .iter()
        .map(|e| e.multiplicity as f64 * e.position.re / e.position.norm_sqr())
        .sum::<f64>()
}

/// Blaschke-type quadratic product over raw zero data. The contraction
/// bound `|D(z)| ≤ 1` on Re z ≥ 0 holds for any zeros with Re ξ > 0,
/// whether or not they satisfy the κ ≤ 1 admission test of [`ZeroSet`].
pub fn blaschke_product(zeros: impl IntoIterator<Item = (C64, u32)>, z: C64) -> C64 {
    let z2 = z * z;
    let mut product = C64::new(1.0, 0.0);
    for (xi, multiplicity) in zeros {
        let a = xi.re;
        let m2 = xi.norm_sqr();
        let factor = (z2 - z * (2.0 * a) + m2) / (z2 + z * (2.0 * a) + m2);
        product *= factor.powu(multiplicity);
    }
    product
}
