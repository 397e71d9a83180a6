//! Anchor configurations, the two genericity conditions, and the similarity
//! transform that brings a configuration into normal position.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::{rat_to_f64, ComplexPoint2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::A, Label::B, Label::C, Label::D];

    /// The four triples in lexicographic order.
    pub const TRIPLES: [[Label; 3]; 4] = [
        [Label::A, Label::B, Label::C],
        [Label::A, Label::B, Label::D],
        [Label::A, Label::C, Label::D],
        [Label::B, Label::C, Label::D],
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::D => "D",
        }
    }

    /// The label missing from `triple`.
    pub fn complement(triple: [Label; 3]) -> Label {
        Label::ALL
            .into_iter()
            .find(|l| !triple.contains(l))
            .expect("triple of distinct labels")
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point2 {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point2 {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn origin() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn norm_sq(&self) -> BigRational {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn sub(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn dist_sq(&self, other: &Point2) -> BigRational {
        self.sub(other).norm_sq()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.x), rat_to_f64(&self.y))
    }

    pub fn to_complex(&self) -> ComplexPoint2 {
        let (x, y) = self.to_f64();
        ComplexPoint2::real(x, y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("anchors {0} and {1} coincide")]
    DuplicateAnchors(Label, Label),
    #[error("constant k_{0} is zero")]
    ZeroConstant(Label),
}

/// Four labelled anchors with their inverse-square constants, indexed by
/// [`Label::index`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub anchors: [Point2; 4],
    pub k: [BigRational; 4],
}

impl Configuration {
    pub fn new(anchors: [Point2; 4], k: [BigRational; 4]) -> Self {
        Self { anchors, k }
    }

    pub fn anchor(&self, l: Label) -> &Point2 {
        &self.anchors[l.index()]
    }

    pub fn k(&self, l: Label) -> &BigRational {
        &self.k[l.index()]
    }

    /// Checks that the anchors are pairwise distinct and every constant is
    /// non-zero.
    pub fn check(&self) -> Result<(), GeometryError> {
        for (i, a) in Label::ALL.iter().enumerate() {
            for b in &Label::ALL[i + 1..] {
                if self.anchor(*a) == self.anchor(*b) {
                    return Err(GeometryError::DuplicateAnchors(*a, *b));
                }
            }
        }
        for l in Label::ALL {
            if self.k(l).is_zero() {
                return Err(GeometryError::ZeroConstant(l));
            }
        }
        Ok(())
    }

    /// Anchors and constants rounded to `f64`.
    pub fn to_f64(&self) -> ([(f64, f64); 4], [f64; 4]) {
        (
            std::array::from_fn(|i| self.anchors[i].to_f64()),
            std::array::from_fn(|i| rat_to_f64(&self.k[i])),
        )
    }
}

/// Exact collinearity test via the doubled signed area.
pub fn collinear(p: &Point2, q: &Point2, r: &Point2) -> bool {
    let u = q.sub(p);
    let v = r.sub(p);
    (&u.x * &v.y - &u.y * &v.x).is_zero()
}

/// A real point shared by three anchor circles.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrencyPoint {
    /// The common point when it is rational.
    pub exact: Option<Point2>,
    pub approx: (f64, f64),
}

/// Decides whether the circles `‖P − T‖² = 1/k_T` of a triple of anchors have
/// a common real point.
///
/// The decision is exact: subtracting circle equations gives radical lines
/// with rational coefficients. For non-collinear centres they meet in a single
/// rational point which is tested exactly against the first circle. For
/// collinear centres the radical lines are parallel; they must coincide and
/// cut the first circle, which is again a rational inequality.
pub fn triple_circles_concurrent(config: &Configuration, triple: [Label; 3]) -> Option<ConcurrencyPoint> {
    assert!(
        triple[0] != triple[1] && triple[1] != triple[2] && triple[0] != triple[2],
        "triple labels must be distinct"
    );
    if triple.iter().any(|&l| !config.k(l).is_positive()) {
        return None;
    }
    let t: Vec<&Point2> = triple.iter().map(|&l| config.anchor(l)).collect();
    let r: Vec<BigRational> = triple.iter().map(|&l| config.k(l).recip()).collect();
    let two = BigRational::from_integer(BigInt::from(2));
    // Radical line of circles 0 and i: 2(T_i − T_0)·P = ‖T_i‖² − ‖T_0‖² − r_i + r_0.
    let line = |i: usize| {
        let d = t[i].sub(t[0]);
        let rhs = t[i].norm_sq() - t[0].norm_sq() - &r[i] + &r[0];
        (&two * &d.x, &two * &d.y, rhs)
    };
    let (a1, b1, c1) = line(1);
    let (a2, b2, c2) = line(2);
    let det = &a1 * &b2 - &a2 * &b1;
    if !det.is_zero() {
        let p = Point2::new((&c1 * &b2 - &c2 * &b1) / &det, (&a1 * &c2 - &a2 * &c1) / &det);
        return (p.dist_sq(t[0]) == r[0]).then(|| ConcurrencyPoint { approx: p.to_f64(), exact: Some(p) });
    }
    // Collinear centres: the lines are parallel to each other.
    let u = t[1].sub(t[0]);
    let w = t[2].sub(t[0]);
    let mu = if u.x.is_zero() { &w.y / &u.y } else { &w.x / &u.x };
    if c2 != &mu * &c1 {
        return None;
    }
    // Line u·P = h. Foot of the perpendicular from T_0 and its squared distance.
    let h = &c1 / &two;
    let uu = u.norm_sq();
    let off = &h - (&u.x * &t[0].x + &u.y * &t[0].y);
    let dist_sq = &off * &off / &uu;
    if dist_sq > r[0] {
        return None;
    }
    let foot = Point2::new(&t[0].x + &u.x * &off / &uu, &t[0].y + &u.y * &off / &uu);
    if dist_sq == r[0] {
        return Some(ConcurrencyPoint { approx: foot.to_f64(), exact: Some(foot) });
    }
    // Two irrational intersection points; report one of them.
    let along = (rat_to_f64(&(&r[0] - &dist_sq)) / rat_to_f64(&uu)).sqrt();
    let (fx, fy) = foot.to_f64();
    let (ux, uy) = u.to_f64();
    Some(ConcurrencyPoint { exact: None, approx: (fx - uy * along, fy + ux * along) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// No three anchors collinear.
    NonCollinear,
    /// No three anchor circles through a common real point.
    NoConcurrentCircles,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub triple: [Label; 3],
    pub condition: Condition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub condition_i_ok: bool,
    pub condition_ii_ok: bool,
    pub violating_triples: Vec<Violation>,
    pub details: Vec<String>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.condition_i_ok && self.condition_ii_ok
    }
}

/// Evaluates both genericity conditions on every anchor triple.
pub fn validate(config: &Configuration) -> Result<ValidationReport, GeometryError> {
    config.check()?;
    let mut violating = Vec::new();
    let mut details = Vec::new();
    for triple in Label::TRIPLES {
        let [p, q, r] = triple.map(|l| config.anchor(l));
        if collinear(p, q, r) {
            details.push(format!("anchors {}{}{} are collinear", triple[0], triple[1], triple[2]));
            violating.push(Violation { triple, condition: Condition::NonCollinear });
        }
    }
    for triple in Label::TRIPLES {
        if let Some(pt) = triple_circles_concurrent(config, triple) {
            let at = match &pt.exact {
                Some(p) => p.to_string(),
                None => format!("({:.17}, {:.17})", pt.approx.0, pt.approx.1),
            };
            details.push(format!("circles {}{}{} meet at {}", triple[0], triple[1], triple[2], at));
            violating.push(Violation { triple, condition: Condition::NoConcurrentCircles });
        }
    }
    Ok(ValidationReport {
        condition_i_ok: !violating.iter().any(|v| v.condition == Condition::NonCollinear),
        condition_ii_ok: !violating.iter().any(|v| v.condition == Condition::NoConcurrentCircles),
        violating_triples: violating,
        details,
    })
}

/// Plane similarity `P ↦ M·P + t` with `M = [[a, b], [−b, a]]` rational.
///
/// `M` is a rotation composed with a dilation by `√(a² + b²)`; only the
/// squared scale is rational in general, so the rotation and the scale are
/// exposed as floating values while the map itself stays exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneTransform {
    a: BigRational,
    b: BigRational,
    t: (BigRational, BigRational),
}

impl PlaneTransform {
    pub fn identity() -> Self {
        Self::new(BigRational::one(), BigRational::zero(), (BigRational::zero(), BigRational::zero()))
    }

    /// # Panics
    /// If `a` and `b` are both zero.
    pub fn new(a: BigRational, b: BigRational, t: (BigRational, BigRational)) -> Self {
        assert!(!(a.is_zero() && b.is_zero()), "degenerate similarity");
        Self { a, b, t }
    }

    pub fn translation(v: &Point2) -> Self {
        Self::new(BigRational::one(), BigRational::zero(), (v.x.clone(), v.y.clone()))
    }

    /// Dilation about the origin by a non-zero rational factor.
    pub fn dilation(s: BigRational) -> Self {
        Self::new(s, BigRational::zero(), (BigRational::zero(), BigRational::zero()))
    }

    /// Squared dilation factor `a² + b²`, the factor by which squared
    /// distances are multiplied.
    pub fn scale_sq(&self) -> BigRational {
        &self.a * &self.a + &self.b * &self.b
    }

    pub fn dilation_factor(&self) -> f64 {
        rat_to_f64(&self.scale_sq()).sqrt()
    }

    /// The orthogonal part `M/√det M`.
    pub fn rotation(&self) -> [[f64; 2]; 2] {
        let s = self.dilation_factor();
        let (a, b) = (rat_to_f64(&self.a) / s, rat_to_f64(&self.b) / s);
        [[a, b], [-b, a]]
    }

    pub fn translation_part(&self) -> (&BigRational, &BigRational) {
        (&self.t.0, &self.t.1)
    }

    /// Linear part `(a, b)` of `M = [[a, b], [−b, a]]`.
    pub fn linear_part(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        Point2::new(
            &self.a * &p.x + &self.b * &p.y + &self.t.0,
            &self.a * &p.y - &self.b * &p.x + &self.t.1,
        )
    }

    /// The same map on complex coordinates (it is complex-linear).
    pub fn apply_complex(&self, p: &ComplexPoint2) -> ComplexPoint2 {
        let (a, b) = (rat_to_f64(&self.a), rat_to_f64(&self.b));
        let (tx, ty) = (rat_to_f64(&self.t.0), rat_to_f64(&self.t.1));
        ComplexPoint2::new(
            p.x * a + p.y * b + Complex64::new(tx, 0.0),
            p.y * a - p.x * b + Complex64::new(ty, 0.0),
        )
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &PlaneTransform) -> PlaneTransform {
        let a = &self.a * &first.a - &self.b * &first.b;
        let b = &self.a * &first.b + &self.b * &first.a;
        let t0 = Point2::new(first.t.0.clone(), first.t.1.clone());
        let t = self.apply(&t0);
        PlaneTransform::new(a, b, (t.x, t.y))
    }

    pub fn inverse(&self) -> PlaneTransform {
        let d = self.scale_sq();
        let a = &self.a / &d;
        let b = -&self.b / &d;
        let lin = PlaneTransform::new(a, b, (BigRational::zero(), BigRational::zero()));
        let t = lin.apply(&Point2::new(-&self.t.0, -&self.t.1));
        PlaneTransform::new(lin.a, lin.b, (t.x, t.y))
    }

    /// Image configuration: anchors are mapped and every constant divided by
    /// the squared scale, so solutions of the system map by the same
    /// transform.
    pub fn apply_config(&self, config: &Configuration) -> Configuration {
        let s2 = self.scale_sq();
        Configuration {
            anchors: std::array::from_fn(|i| self.apply(&config.anchors[i])),
            k: std::array::from_fn(|i| &config.k[i] / &s2),
        }
    }
}

/// Similarity sending `A` to the origin and `B` to `(1, 0)`, with the
/// transformed configuration.
///
/// # Panics
/// If `A = B`.
pub fn normalize(config: &Configuration) -> (Configuration, PlaneTransform) {
    let a = config.anchor(Label::A);
    let u = config.anchor(Label::B).sub(a);
    let n = u.norm_sq();
    assert!(!n.is_zero(), "normalization needs A ≠ B");
    let (ma, mb) = (&u.x / &n, &u.y / &n);
    let lin = PlaneTransform::new(ma, mb, (BigRational::zero(), BigRational::zero()));
    let shifted = lin.apply(a);
    let tf = PlaneTransform::new(lin.a, lin.b, (-shifted.x, -shifted.y));
    (tf.apply_config(config), tf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn config(pts: [(i64, i64); 4], k: [BigRational; 4]) -> Configuration {
        Configuration::new(pts.map(|(x, y)| Point2::from_ints(x, y)), k)
    }

    fn square() -> Configuration {
        config([(-1, -1), (-1, 1), (1, -1), (1, 1)], std::array::from_fn(|_| q(11, 10)))
    }

    fn axis() -> Configuration {
        config([(-1, 0), (1, 0), (-2, 0), (2, 0)], [q(-2, 3), q(-2, 3), q(2, 3), q(2, 3)])
    }

    #[test]
    fn collinearity_examples() {
        let p = Point2::from_ints;
        assert!(collinear(&p(0, 0), &p(1, 0), &p(2, 0)));
        assert!(collinear(&p(-1, 0), &p(1, 0), &p(2, 0)));
        assert!(!collinear(&p(-1, -1), &p(-1, 1), &p(1, -1)));
    }

    #[test]
    fn concurrent_rational_point() {
        let c = config([(0, 0), (2, 0), (0, 2), (5, 7)], std::array::from_fn(|_| q(1, 2)));
        let hit = triple_circles_concurrent(&c, [Label::A, Label::B, Label::C]).unwrap();
        assert_eq!(hit.exact, Some(Point2::from_ints(1, 1)));
        assert!(triple_circles_concurrent(&c, [Label::C, Label::A, Label::B]).is_some());
    }

    #[test]
    fn negative_constant_blocks_concurrency() {
        let c = axis();
        for t in Label::TRIPLES {
            assert!(triple_circles_concurrent(&c, t).is_none());
        }
    }

    #[test]
    fn collinear_centres_tangent_and_secant() {
        // Unit circles at 0 and 2 touch at (1,0); the third at 1 with radius 0-ish
        // is replaced by a circle through (1, 0) centred at (3, 0): radius 2.
        let c = config([(0, 0), (2, 0), (3, 0), (9, 9)], [q(1, 1), q(1, 1), q(1, 4), q(1, 1)]);
        let hit = triple_circles_concurrent(&c, [Label::A, Label::B, Label::C]).unwrap();
        assert_eq!(hit.exact, Some(Point2::from_ints(1, 0)));
        // Radius 2 circles at 0 and 2 and a radius-√8 circle at 4 meet at (1, ±√3).
        let c = config([(0, 0), (2, 0), (4, 0), (9, 9)], [q(1, 4), q(1, 4), q(1, 12), q(1, 1)]);
        let hit = triple_circles_concurrent(&c, [Label::A, Label::B, Label::C]).unwrap();
        assert!(hit.exact.is_none());
        assert!((hit.approx.0 - 1.0).abs() < 1e-12 && (hit.approx.1.abs() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn validation_examples() {
        let r = validate(&square()).unwrap();
        assert!(r.condition_i_ok && r.condition_ii_ok && r.violating_triples.is_empty());
        let r = validate(&axis()).unwrap();
        assert!(!r.condition_i_ok && r.condition_ii_ok);
        assert_eq!(r.violating_triples.len(), 4);
        let mut dup = square();
        dup.anchors[1] = dup.anchors[0].clone();
        assert_eq!(validate(&dup), Err(GeometryError::DuplicateAnchors(Label::A, Label::B)));
        let mut zero = square();
        zero.k[2] = BigRational::zero();
        assert_eq!(validate(&zero), Err(GeometryError::ZeroConstant(Label::C)));
    }

    #[test]
    fn normalization() {
        let (n, tf) = normalize(&square());
        assert_eq!(n.anchors[0], Point2::origin());
        assert_eq!(n.anchors[1], Point2::from_ints(1, 0));
        assert_eq!(n.anchors[2], Point2::from_ints(0, -1));
        assert_eq!(n.anchors[3], Point2::from_ints(1, -1));
        assert!(n.k.iter().all(|k| *k == q(22, 5)));
        assert_eq!(tf.inverse().apply_config(&n), square());
        assert_eq!(tf.after(&tf.inverse()), PlaneTransform::identity());

        let c = config([(0, 0), (2, 0), (3, 5), (-1, 4)], std::array::from_fn(|_| q(1, 1)));
        let (n, _) = normalize(&c);
        assert_eq!(n.anchors[1], Point2::from_ints(1, 0));
        assert!(n.k.iter().all(|k| *k == q(4, 1)));
        let (n, tf) = normalize(&n);
        assert_eq!(tf, PlaneTransform::identity());
        assert_eq!(n.anchors[3], Point2::new(q(-1, 2), q(2, 1)));
    }

    #[test]
    fn rotation_is_orthogonal() {
        let (_, tf) = normalize(&config([(1, 2), (4, 6), (0, 0), (3, 3)], std::array::from_fn(|_| q(1, 1))));
        let r = tf.rotation();
        let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
        assert!((det - 1.0).abs() < 1e-12);
        assert!((r[0][0] * r[0][0] + r[0][1] * r[0][1] - 1.0).abs() < 1e-12);
        assert!((tf.dilation_factor() - 0.2).abs() < 1e-15);
    }
}
