//! Two reference configurations with closed-form answers.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::geometry::{Configuration, Point2};
use crate::poly::ComplexPoint2;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Anchors at the corners of the square `[-1, 1]²`, every constant `11/10`.
pub fn square() -> Configuration {
    Configuration::new(
        [(-1, -1), (-1, 1), (1, -1), (1, 1)].map(|(x, y)| Point2::from_ints(x, y)),
        std::array::from_fn(|_| q(11, 10)),
    )
}

/// Anchors `(-1,0), (1,0), (-2,0), (2,0)` with constants `-2/3, -2/3, 2/3, 2/3`.
/// Its solution set is a curve.
pub fn collinear() -> Configuration {
    Configuration::new(
        [(-1, 0), (1, 0), (-2, 0), (2, 0)].map(|(x, y)| Point2::from_ints(x, y)),
        [q(-2, 3), q(-2, 3), q(2, 3), q(2, 3)],
    )
}

/// The 24 solutions `(x1, x2, y1, y2)` of [`square`].
pub fn square_solutions() -> Vec<[Complex64; 4]> {
    let s14 = 14f64.sqrt();
    let s2041 = 2041f64.sqrt();
    let r1 = ((2.0 / 11.0) * (5.0 - s14)).sqrt();
    let r3 = ((2.0 / 11.0) * (5.0 + s14)).sqrt();
    let r5m = ((85.0 - s2041) / 66.0).sqrt();
    let r5p = ((85.0 + s2041) / 66.0).sqrt();
    let on_axis = [
        (-r1, r1),
        (r1, -r1),
        (-r3, r3),
        (r3, -r3),
        (r5m, -r5p),
        (-r5m, r5p),
        (-r5p, r5m),
        (r5p, -r5m),
    ];
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut out = Vec::with_capacity(24);
    for &(x, y) in &on_axis {
        out.push([re(x), re(0.0), re(y), re(0.0)]);
        out.push([re(0.0), re(x), re(0.0), re(y)]);
    }
    let a = (157.0f64 / 2.0).sqrt() / 11.0;
    let b = (107.0f64 / 2.0).sqrt() / 11.0;
    let im = |v: f64| Complex64::new(0.0, v);
    for (x1, x2, y1, y2) in [
        (a, -b, -a, -b),
        (-a, -b, a, -b),
        (a, b, -a, b),
        (-a, b, a, b),
        (-b, a, -b, -a),
        (b, a, b, -a),
        (-b, -a, -b, a),
        (b, -a, b, a),
    ] {
        out.push([im(x1), im(x2), im(y1), im(y2)]);
    }
    out
}

/// `y2` on the curve `2x²y² + 5(x² + y²) + 8 = 0` above `x`, taking the
/// branch `i·sqrt((5x² + 8)/(2x² + 5))`.
pub fn collinear_curve_y(x: Complex64) -> Complex64 {
    let x2 = x * x;
    Complex64::i() * ((5.0 * x2 + 8.0) / (2.0 * x2 + 5.0)).sqrt()
}

/// A solution of [`collinear`] with `X = (0, x)` and `Y = (0, y(x))`.
pub fn collinear_point(x: Complex64) -> (ComplexPoint2, ComplexPoint2) {
    let zero = Complex64::new(0.0, 0.0);
    (ComplexPoint2::new(zero, x), ComplexPoint2::new(zero, collinear_curve_y(x)))
}
