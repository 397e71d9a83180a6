//! Serialized solve reports.

use std::io::Write;
use std::str::FromStr;

use fouranchor_core::{Classification, RatMPoly, SolveReport, ToleranceSettings, ValidationReport};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::ConfigEcho;
use crate::CliError;

/// A float written with 17 significant digits, enough to round-trip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

pub fn format17(v: f64) -> String {
    format!("{v:.16e}")
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match serde_json::Number::from_str(&format17(self.0)) {
            Ok(n) if self.0.is_finite() => n.serialize(s),
            _ => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Real(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN)))
    }
}

pub type ComplexRecord = [Real; 2];

pub fn complex(z: Complex64) -> ComplexRecord {
    [Real(z.re), Real(z.im)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub x: [ComplexRecord; 2],
    pub y: [ComplexRecord; 2],
    pub residual: Real,
    pub is_real: bool,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    /// Exact rational, `"p/q"` or an integer.
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub variables: Vec<String>,
    pub terms: Vec<TermRecord>,
    pub display: String,
    pub samples: usize,
    pub max_sample_residual: Real,
}

impl WitnessRecord {
    pub fn of(poly: &RatMPoly, samples: usize, max_sample_residual: f64) -> Self {
        Self {
            variables: poly.vars().to_vec(),
            terms: poly
                .terms()
                .rev()
                .map(|(e, c)| TermRecord { exponents: e.clone(), coefficient: c.to_string() })
                .collect(),
            display: poly.to_string(),
            samples,
            max_sample_residual: Real(max_sample_residual),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceRecord {
    pub accept: Real,
    pub real: Real,
    pub dedupe: Real,
    pub max_newton_iters: usize,
}

impl From<&ToleranceSettings> for ToleranceRecord {
    fn from(t: &ToleranceSettings) -> Self {
        Self { accept: Real(t.accept), real: Real(t.real), dedupe: Real(t.dedupe), max_newton_iters: t.max_newton_iters }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub reduction: String,
    pub constraint_degrees: Option<(u32, u32)>,
    pub shear: Option<String>,
    pub resultant_degree: Option<usize>,
    /// `(degree, multiplicity)` of each square-free factor of the eliminant.
    pub square_free_factors: Vec<(usize, usize)>,
    pub candidates: usize,
    pub rejected: usize,
    pub messages: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub classification: Classification,
    pub invalid_reason: Option<String>,
    pub validation: Option<ValidationReport>,
    pub solution_count: usize,
    pub real_count: usize,
    pub solutions: Vec<SolutionRecord>,
    pub witness: Option<WitnessRecord>,
    pub bezout_ceiling: usize,
    pub seed: u64,
    pub tolerances: ToleranceRecord,
    pub diagnostics: DiagnosticsRecord,
    pub input: Option<ConfigEcho>,
    pub timing_ms: Real,
}

impl ReportFile {
    pub fn new(report: &SolveReport, input: Option<ConfigEcho>, timing_ms: f64) -> Self {
        let solutions: Vec<SolutionRecord> = report
            .solutions
            .iter()
            .map(|s| SolutionRecord {
                x: [complex(s.x.x), complex(s.x.y)],
                y: [complex(s.y.x), complex(s.y.y)],
                residual: Real(s.residual),
                is_real: s.is_real,
                multiplicity: s.multiplicity,
            })
            .collect();
        let d = &report.diagnostics;
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            classification: report.classification,
            invalid_reason: report.invalid_reason.clone(),
            validation: report.validation.clone(),
            solution_count: solutions.len(),
            real_count: solutions.iter().filter(|s| s.is_real).count(),
            solutions,
            witness: report
                .witness
                .as_ref()
                .map(|w| WitnessRecord::of(&w.polynomial, w.samples.len(), w.max_sample_residual)),
            bezout_ceiling: report.bezout_ceiling,
            seed: d.seed,
            tolerances: (&report.tolerances).into(),
            diagnostics: DiagnosticsRecord {
                reduction: d.reduction.clone(),
                constraint_degrees: d.constraint_degrees,
                shear: d.shear.clone(),
                resultant_degree: d.resultant_degree,
                square_free_factors: d.square_free_factors.clone(),
                candidates: d.candidates,
                rejected: d.rejected,
                messages: d.messages.clone(),
            },
            input,
            timing_ms: Real(timing_ms),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
    }

    /// Real solutions only, one row each.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x1", "x2", "y1", "y2", "residual", "multiplicity"])?;
        for s in self.solutions.iter().filter(|s| s.is_real) {
            let vals = [s.x[0][0].0, s.x[1][0].0, s.y[0][0].0, s.y[1][0].0, s.residual.0];
            let mut row: Vec<String> = vals.iter().map(|&v| format17(v)).collect();
            row.push(s.multiplicity.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
