//! Convergence reports and their CSV serialization.
//!
//! CSV rows are `scheme,variant_params,metric,n,T,dim,seed,error,
//! error_normalized` in that fixed order, with floats printed in 17
//! significant-digit scientific notation so values round-trip exactly.

use serde::{Deserialize, Serialize};

use super::{FormulaError, FormulaResult};

/// Which error functional a report's entries hold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricKind {
    L2Time,
    MeasureExceedance { eta: f64 },
    SupTime,
    OperatorNormL2Time,
    /// τ-sweep of the Chernoff resolvent gap at fixed real t (the entry
    /// index j encodes τ = 2^{-j}).
    ChernoffResolvent,
    /// τ-sweep of the boundary resolvent L² gap (same τ indexing).
    BoundaryResolventL2,
}

impl MetricKind {
    /// Stable name for the CSV `metric` column.
    pub fn label(&self) -> String {
        match self {
            MetricKind::L2Time => "l2".into(),
            MetricKind::MeasureExceedance { eta } => format!("measure(eta={})", fmt_float(*eta)),
            MetricKind::SupTime => "sup".into(),
            MetricKind::OperatorNormL2Time => "opnorm_l2".into(),
            MetricKind::ChernoffResolvent => "chernoff".into(),
            MetricKind::BoundaryResolventL2 => "boundary_resolvent".into(),
        }
    }
}

/// One sweep point. For n-sweeps `index` is the subdivision count; for
/// τ-sweeps it is the dyadic exponent j of τ = 2^{-j}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub index: u64,
    pub error: f64,
    pub error_normalized: f64,
}

/// Grid metadata carried alongside the entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub rule: String,
    pub nodes: usize,
    pub t_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub scheme: String,
    pub variant_params: String,
    pub metric: MetricKind,
    pub entries: Vec<SweepEntry>,
    pub grid: GridMeta,
    pub dim: usize,
    pub seed: u64,
    /// Description of the sweep vector h ("basis(0)", "random(7)", ...).
    pub h_descriptor: String,
    /// Free-form qualifier; Zeno and Schrödinger runs are labeled
    /// "demonstration" here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConvergenceReport {
    /// Structural invariants: strictly increasing indices, finite
    /// non-negative errors, comma-free text fields.
    pub fn validate(&self) -> FormulaResult<()> {
        if self.scheme.contains(',')
            || self.variant_params.contains(',')
            || self.metric.label().contains(',')
        {
            return Err(FormulaError::InvalidGrid {
                reason: format!(
                    "CSV fields must be comma-free: '{}' / '{}' / '{}'",
                    self.scheme,
                    self.variant_params,
                    self.metric.label()
                ),
            });
        }
        if !self.entries.windows(2).all(|w| w[0].index < w[1].index) {
            return Err(FormulaError::InvalidGrid {
                reason: format!(
                    "report {}/{}: sweep indices must be strictly increasing",
                    self.scheme,
                    self.metric.label()
                ),
            });
        }
        for e in &self.entries {
            if !e.error.is_finite() || e.error < 0.0 {
                return Err(FormulaError::InvalidGrid {
                    reason: format!(
                        "report {}/{}: error {} at index {} is not a finite non-negative value",
                        self.scheme,
                        self.metric.label(),
                        e.error,
                        e.index
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn csv_header() -> &'static str {
        "scheme,variant_params,metric,n,T,dim,seed,error,error_normalized"
    }

    /// One CSV row per entry, in entry order.
    pub fn csv_rows(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| {
                format!(
                    "{},{},{},{},{},{},{},{},{}",
                    self.scheme,
                    self.variant_params,
                    self.metric.label(),
                    e.index,
                    fmt_float(self.grid.t_max),
                    self.dim,
                    self.seed,
                    fmt_float(e.error),
                    fmt_float(e.error_normalized),
                )
            })
            .collect()
    }
}

/// 17 significant digits, scientific: enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> ConvergenceReport {
        ConvergenceReport {
            scheme: "trotter_plain".into(),
            variant_params: String::new(),
            metric: MetricKind::L2Time,
            entries: vec![
                SweepEntry {
                    index: 1,
                    error: 0.25,
                    error_normalized: 0.25,
                },
                SweepEntry {
                    index: 2,
                    error: 0.0625,
                    error_normalized: 0.0625,
                },
            ],
            grid: GridMeta {
                rule: "gauss_legendre(8x16)".into(),
                nodes: 128,
                t_max: 1.0,
            },
            dim: 8,
            seed: 42,
            h_descriptor: "random(42)".into(),
            note: None,
        }
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            5e-324,
            -0.0,
        ] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(x.to_bits(), back.to_bits(), "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn csv_rows_have_fixed_column_count() {
        let report = sample_report();
        assert!(report.validate().is_ok());
        for row in report.csv_rows() {
            assert_eq!(row.split(',').count(), 9, "row: {row}");
        }
    }

    #[test]
    fn invariants_enforced() {
        let mut report = sample_report();
        report.entries[1].index = 1;
        assert!(report.validate().is_err());
        let mut report = sample_report();
        report.entries[0].error = f64::NAN;
        assert!(report.validate().is_err());
    }

    #[test]
    fn scheme_tags_stay_comma_free() {
        use crate::formulas::ProductScheme;
        use crate::kato::KatoFunctionHandle;
        let scheme = ProductScheme::KatoProduct {
            f: KatoFunctionHandle::single_pair(1.0, 0.25).unwrap(),
            g: KatoFunctionHandle::atomic_exp(2.0, 0.5).unwrap(),
        };
        let mut report = sample_report();
        report.scheme = scheme.tag().into();
        report.variant_params = scheme.variant_params();
        report.validate().unwrap();
        for row in report.csv_rows() {
            assert_eq!(row.split(',').count(), 9, "row: {row}");
        }
    }

    #[test]
    fn json_round_trip() {
        let report = sample_report();
        let json = serde_json::to_string(&report).unwrap();
        let back: ConvergenceReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }
}
