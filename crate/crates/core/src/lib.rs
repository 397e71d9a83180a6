//! Solver for the four-anchor inverse-square system: given anchors `T` and
//! constants `k_T`, find all `X, Y` in the complexified plane with
//! `1/‖X−T‖² + 1/‖Y−T‖² = k_T` for each anchor.

pub mod catalog;
pub mod geometry;
pub mod poly;
pub mod solver;
pub mod sysbuild;

pub use geometry::{
    normalize, validate, Condition, ConcurrencyPoint, Configuration, GeometryError, Label, PlaneTransform, Point2,
    ValidationReport, Violation,
};
pub use poly::{ComplexPoint2, PolyError, RatMPoly};
pub use solver::{
    certify, newton_polish, solve, solve_with, CertificateSummary, CheckResult, Classification, Diagnostics,
    SolutionPair, SolveOptions, SolveReport, ToleranceSettings, WitnessCurve, BEZOUT_CEILING,
};
pub use sysbuild::SysError;
