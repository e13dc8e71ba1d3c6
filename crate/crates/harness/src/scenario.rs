//! Scenario configuration: a single versioned JSON document describing the
//! operators, schemes, sweep points, metrics and output destination.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use tklab_core::formulas::{make_pair, OperatorPair, ProductScheme};
use tklab_core::kato::KatoFunctionSpec;
use tklab_core::matrix::ComplexMatrix;
use tklab_core::rng::random_unit_vector;
use tklab_core::spectral::{random_hermitian_psd, random_projection};

use crate::{HarnessError, HarnessResult};

/// Schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub schema: u32,
    pub operator_source: OperatorSource,
    pub schemes: Vec<SchemeSpec>,
    pub n_values: Vec<u32>,
    #[serde(rename = "T")]
    pub t_max: f64,
    pub grid: GridSpec,
    pub h: HSpec,
    pub metrics: Vec<MetricSpec>,
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSource {
    /// Matrices read from a JSON file: `{"a": [[[re,im],...],...],
    /// "b": ..., "p": ...?}` with `p` an optional Zeno projection.
    ExplicitMatrices { path: String },
    /// Seeded Gaussian-Gram pair; `zeno_rank` adds a seeded projection.
    RandomPsd {
        dim: usize,
        seed: u64,
        spectral_scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zeno_rank: Option<usize>,
    },
    /// Dirichlet second-difference Laplacian/2 plus a multiplication
    /// potential on the interior grid of [-L, L].
    Schrodinger1d {
        grid_points: usize,
        box_half_width: f64,
        potential: PotentialSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum PotentialSpec {
    Zero,
    /// `V(x) = coefficient · x²`.
    Harmonic { coefficient: f64 },
    /// `V(x) = |x|^{-p}`, 0 < p < 2; in L¹ near 0 but allowed to miss L².
    InversePower { p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeSpec {
    TrotterPlain,
    TrotterSymmetrized,
    KatoProduct {
        f: KatoFunctionSpec,
        g: KatoFunctionSpec,
    },
    KatoSymmetrized {
        f: KatoFunctionSpec,
        g: KatoFunctionSpec,
    },
    CachiaAverage {
        f: KatoFunctionSpec,
        g: KatoFunctionSpec,
    },
    LapidusResolvent {
        k: u32,
    },
    Zeno,
    RealTimePlain,
    RealTimeSymmetrized,
    Exact,
}

impl SchemeSpec {
    pub fn build(&self) -> HarnessResult<ProductScheme> {
        Ok(match self {
            SchemeSpec::TrotterPlain => ProductScheme::TrotterPlain,
            SchemeSpec::TrotterSymmetrized => ProductScheme::TrotterSymmetrized,
            SchemeSpec::KatoProduct { f, g } => ProductScheme::KatoProduct {
                f: f.build()?,
                g: g.build()?,
            },
            SchemeSpec::KatoSymmetrized { f, g } => ProductScheme::KatoSymmetrized {
                f: f.build()?,
                g: g.build()?,
            },
            SchemeSpec::CachiaAverage { f, g } => ProductScheme::CachiaAverage {
                f: f.build()?,
                g: g.build()?,
            },
            SchemeSpec::LapidusResolvent { k } => ProductScheme::LapidusResolvent { k: *k },
            SchemeSpec::Zeno => ProductScheme::Zeno,
            SchemeSpec::RealTimePlain => ProductScheme::RealTimePlain,
            SchemeSpec::RealTimeSymmetrized => ProductScheme::RealTimeSymmetrized,
            SchemeSpec::Exact => ProductScheme::Exact,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub panels: usize,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            panels: 8,
            points: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HSpec {
    /// Standard basis vector e_j.
    Basis { index: usize },
    /// Seeded random unit vector.
    Random { seed: u64 },
    /// The normalized all-ones vector.
    Constant,
}

impl HSpec {
    pub fn build(&self, dim: usize) -> HarnessResult<Vec<C64>> {
        match self {
            HSpec::Basis { index } => {
                if *index >= dim {
                    return Err(HarnessError::ConfigParse {
                        detail: format!("h basis index {index} out of range for dim {dim}"),
                    });
                }
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[*index] = C64::new(1.0, 0.0);
                Ok(v)
            }
            HSpec::Random { seed } => Ok(random_unit_vector(dim, *seed)),
            HSpec::Constant => {
                let a = 1.0 / (dim as f64).sqrt();
                Ok(vec![C64::new(a, 0.0); dim])
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            HSpec::Basis { index } => format!("basis({index})"),
            HSpec::Random { seed } => format!("random({seed})"),
            HSpec::Constant => "constant".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    L2,
    Measure { eta: f64 },
    Sup,
    /// Chernoff-quotient resolvent sweep over the given τ values at t = T.
    Chernoff { taus: Vec<f64> },
}

impl MetricSpec {
    pub fn label(&self) -> String {
        match self {
            MetricSpec::L2 => "l2".into(),
            MetricSpec::Measure { eta } => format!("measure(eta={eta})"),
            MetricSpec::Sup => "sup".into(),
            MetricSpec::Chernoff { .. } => "chernoff".into(),
        }
    }
}

impl Scenario {
    /// Structural validation beyond what serde enforces.
    pub fn validate(&self) -> HarnessResult<()> {
        let fail = |detail: String| Err(HarnessError::ConfigParse { detail });
        if self.schema != SCHEMA_VERSION {
            return fail(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                self.schema
            ));
        }
        if self.schemes.is_empty() {
            return fail("schemes must be non-empty".into());
        }
        if self.n_values.is_empty() {
            return fail("n_values must be non-empty".into());
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return fail("n_values must be strictly increasing".into());
        }
        if self.n_values.first() == Some(&0) {
            return fail("n_values must be >= 1".into());
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return fail(format!("T must be positive and finite, got {}", self.t_max));
        }
        if self.grid.panels == 0 || self.grid.points == 0 {
            return fail("grid panels and points must be >= 1".into());
        }
        if self.metrics.is_empty() {
            return fail("metrics must be non-empty".into());
        }
        for metric in &self.metrics {
            match metric {
                MetricSpec::Measure { eta } if !(eta.is_finite() && *eta > 0.0) => {
                    return fail(format!("measure eta must be > 0, got {eta}"));
                }
                MetricSpec::Sup => {
                    let bad = self
                        .schemes
                        .iter()
                        .find(|s| !matches!(s, SchemeSpec::RealTimePlain | SchemeSpec::RealTimeSymmetrized));
                    if let Some(s) = bad {
                        return fail(format!(
                            "sup metric applies only to real-time schemes, found {s:?}"
                        ));
                    }
                }
                MetricSpec::Chernoff { taus }
                    if taus.is_empty() || taus.iter().any(|t| !(t.is_finite() && *t > 0.0)) =>
                {
                    return fail("chernoff taus must be non-empty and positive".into());
                }
                _ => {}
            }
        }
        if let OperatorSource::Schrodinger1d {
            grid_points,
            box_half_width,
            potential,
        } = &self.operator_source
        {
            if *grid_points < 8 || !grid_points.is_power_of_two() {
                return fail(format!(
                    "Schrodinger grid_points must be a power of two >= 8, got {grid_points}"
                ));
            }
            if !(box_half_width.is_finite() && *box_half_width > 0.0) {
                return fail("box_half_width must be > 0".into());
            }
            match potential {
                PotentialSpec::InversePower { p } if !(p.is_finite() && *p > 0.0 && *p < 2.0) => {
                    return fail(format!("inverse power p must be in (0, 2), got {p}"));
                }
                PotentialSpec::Harmonic { coefficient }
                    if !(coefficient.is_finite() && *coefficient >= 0.0) => {
                    return fail("harmonic coefficient must be >= 0".into());
                }
                _ => {}
            }
        }
        if let OperatorSource::RandomPsd {
            dim,
            spectral_scale,
            zeno_rank,
            ..
        } = &self.operator_source
        {
            if *dim == 0 {
                return fail("dim must be >= 1".into());
            }
            if !(spectral_scale.is_finite() && *spectral_scale > 0.0) {
                return fail("spectral_scale must be > 0".into());
            }
            if let Some(rank) = zeno_rank {
                if *rank == 0 || rank > dim {
                    return fail(format!("zeno_rank {rank} out of range for dim {dim}"));
                }
            }
        }
        Ok(())
    }

    /// `(dim, seed)` metadata carried into CSV rows; seed 0 for non-seeded
    /// sources.
    pub fn seed(&self) -> u64 {
        match &self.operator_source {
            OperatorSource::RandomPsd { seed, .. } => *seed,
            _ => 0,
        }
    }

    /// Assemble the operator pair this scenario runs on.
    pub fn build_pair(&self) -> HarnessResult<OperatorPair> {
        match &self.operator_source {
            OperatorSource::ExplicitMatrices { path } => load_explicit_pair(Path::new(path)),
            OperatorSource::RandomPsd {
                dim,
                seed,
                spectral_scale,
                zeno_rank,
            } => {
                let a = random_hermitian_psd(*dim, *seed, *spectral_scale);
                let b = random_hermitian_psd(*dim, seed ^ 0xB0B, *spectral_scale);
                let p = zeno_rank.map(|rank| random_projection(*dim, rank, seed ^ 0x2E40));
                Ok(make_pair(&a, &b, p.as_ref())?)
            }
            OperatorSource::Schrodinger1d {
                grid_points,
                box_half_width,
                potential,
            } => crate::schrodinger::assemble_schrodinger(*grid_points, *box_half_width, potential),
        }
    }
}

/// Wire form of one complex matrix: rows of `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
struct ExplicitMatricesFile {
    a: Vec<Vec<(f64, f64)>>,
    b: Vec<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<Vec<(f64, f64)>>>,
}

fn matrix_from_rows(rows: &[Vec<(f64, f64)>], name: &str) -> HarnessResult<ComplexMatrix> {
    let dim = rows.len();
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        if row.len() != dim {
            return Err(HarnessError::ConfigParse {
                detail: format!("matrix '{name}' is not square"),
            });
        }
        entries.extend(row.iter().map(|&(re, im)| C64::new(re, im)));
    }
    Ok(ComplexMatrix::new(dim, entries)?)
}

fn load_explicit_pair(path: &Path) -> HarnessResult<OperatorPair> {
    let text = std::fs::read_to_string(path)?;
    let file: ExplicitMatricesFile =
        serde_json::from_str(&text).map_err(|e| HarnessError::ConfigParse {
            detail: format!("{}: {e}", path.display()),
        })?;
    let a = matrix_from_rows(&file.a, "a")?;
    let b = matrix_from_rows(&file.b, "b")?;
    let p = file
        .p
        .as_ref()
        .map(|rows| matrix_from_rows(rows, "p"))
        .transpose()?;
    Ok(make_pair(&a, &b, p.as_ref())?)
}

/// Read and validate a scenario document.
pub fn load_scenario(path: &Path) -> HarnessResult<Scenario> {
    let text = std::fs::read_to_string(path)?;
    let scenario: Scenario =
        serde_json::from_str(&text).map_err(|e| HarnessError::ConfigParse {
            detail: format!("{}: {e}", path.display()),
        })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Write a scenario document (pretty-printed, stable field order).
pub fn save_scenario(scenario: &Scenario, path: &Path) -> HarnessResult<()> {
    let text = serde_json::to_string_pretty(scenario).map_err(|e| HarnessError::ConfigParse {
        detail: e.to_string(),
    })?;
    std::fs::write(path, text)?;
    Ok(())
}
