//! Built-in configurations compared against their closed-form answers.

use fouranchor_core::catalog;
use fouranchor_core::solver::NumericSystem;
use fouranchor_core::{Configuration, Label, SolveOptions, SolveReport};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::report::{complex, ComplexRecord, Real, ReportFile};
use crate::{solve_to_report, CliError};

/// Number of closed-form curve points checked for the collinear example.
pub const CURVE_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Square,
    Collinear,
}

impl Example {
    pub fn from_name(name: &str) -> Result<Self, CliError> {
        match name {
            "square" => Ok(Self::Square),
            "collinear" => Ok(Self::Collinear),
            other => Err(CliError::UnknownExample(other.to_string())),
        }
    }

    pub fn config(self) -> Configuration {
        match self {
            Self::Square => catalog::square(),
            Self::Collinear => catalog::collinear(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub expected: [ComplexRecord; 4],
    /// Index of the nearest emitted solution.
    pub nearest: Option<usize>,
    /// Largest coordinate difference to that solution.
    pub deviation: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareComparison {
    pub expected: usize,
    pub emitted: usize,
    pub expected_real: usize,
    pub emitted_real: usize,
    pub max_deviation: Real,
    /// Emitted solutions that are not the nearest match of any expected one.
    pub unmatched_emitted: Vec<usize>,
    pub deviations: Vec<Deviation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub x: ComplexRecord,
    pub y: ComplexRecord,
    pub residual: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollinearComparison {
    pub samples: Vec<CurveSample>,
    pub max_residual: Real,
    pub witness_samples: usize,
    pub witness_max_residual: Option<Real>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Square(SquareComparison),
    Collinear(CollinearComparison),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleOutput {
    pub example: String,
    pub report: ReportFile,
    pub comparison: Comparison,
}

impl ExampleOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("example output serializes")
    }
}

pub struct ExampleResult {
    pub solve: SolveReport,
    pub output: ExampleOutput,
}

/// Largest `|1/‖X−T‖² + 1/‖Y−T‖² − k_T|` over the anchors.
pub fn rational_residual(config: &Configuration, z: &[Complex64; 4]) -> f64 {
    Label::ALL
        .iter()
        .map(|&l| {
            let t = config.anchor(l);
            let (t1, t2) = (t.x.to_f64().unwrap_or(f64::NAN), t.y.to_f64().unwrap_or(f64::NAN));
            let p = (z[0] - t1).powu(2) + (z[1] - t2).powu(2);
            let q = (z[2] - t1).powu(2) + (z[3] - t2).powu(2);
            (p.inv() + q.inv() - config.k(l).to_f64().unwrap_or(f64::NAN)).norm()
        })
        .fold(0.0, f64::max)
}

fn compare_square(rep: &SolveReport) -> SquareComparison {
    let expected = catalog::square_solutions();
    let emitted: Vec<[Complex64; 4]> = rep.solutions.iter().map(|s| s.coords()).collect();
    let dist = |a: &[Complex64; 4], b: &[Complex64; 4]| a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    let deviations: Vec<Deviation> = expected
        .iter()
        .map(|e| {
            let best = emitted
                .iter()
                .enumerate()
                .map(|(i, z)| (i, dist(e, z)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            Deviation {
                expected: e.map(complex),
                nearest: best.map(|b| b.0),
                deviation: Real(best.map_or(f64::INFINITY, |b| b.1)),
            }
        })
        .collect();
    let unmatched_emitted = (0..emitted.len()).filter(|i| !deviations.iter().any(|d| d.nearest == Some(*i))).collect();
    SquareComparison {
        expected: expected.len(),
        emitted: emitted.len(),
        expected_real: expected.iter().filter(|z| z.iter().all(|c| c.im == 0.0)).count(),
        emitted_real: rep.real_solutions().count(),
        max_deviation: Real(deviations.iter().map(|d| d.deviation.0).fold(0.0, f64::max)),
        unmatched_emitted,
        deviations,
    }
}

fn compare_collinear(config: &Configuration, rep: &SolveReport) -> CollinearComparison {
    let samples: Vec<CurveSample> = (0..CURVE_SAMPLES)
        .map(|j| {
            let x = Complex64::new(-5.0 + 10.0 * j as f64 / (CURVE_SAMPLES - 1) as f64, 0.0);
            let (px, py) = catalog::collinear_point(x);
            let residual = rational_residual(config, &[px.x, px.y, py.x, py.y]);
            CurveSample { x: complex(px.y), y: complex(py.y), residual: Real(residual) }
        })
        .collect();
    let ns = NumericSystem::new(config);
    let witness = rep.witness.as_ref();
    CollinearComparison {
        max_residual: Real(samples.iter().map(|s| s.residual.0).fold(0.0, f64::max)),
        samples,
        witness_samples: witness.map_or(0, |w| w.samples.len()),
        witness_max_residual: witness.map(|w| {
            Real(w.samples.iter().map(|(x, y)| ns.max_residual(&[x.x, x.y, y.x, y.y])).fold(0.0, f64::max))
        }),
    }
}

pub fn run_example(ex: Example, opts: &SolveOptions) -> ExampleResult {
    let config = ex.config();
    let (solve, report) = solve_to_report(&config, opts);
    let comparison = match ex {
        Example::Square => Comparison::Square(compare_square(&solve)),
        Example::Collinear => Comparison::Collinear(compare_collinear(&config, &solve)),
    };
    let name = match ex {
        Example::Square => "square",
        Example::Collinear => "collinear",
    };
    ExampleResult { solve, output: ExampleOutput { example: name.into(), report, comparison } }
}
