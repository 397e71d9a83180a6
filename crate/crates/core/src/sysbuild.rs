//! Symbolic construction of the quartic system, the Γ-functions and the
//! reduced constraints in the `Y` plane.

use nalgebra::Matrix4;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::geometry::{normalize, Configuration, Label, PlaneTransform, Point2};
use crate::poly::{rat_to_f64, ComplexPoint2, RatMPoly};

pub const XY_VARS: [&str; 4] = ["x1", "x2", "y1", "y2"];
pub const Y_VARS: [&str; 2] = ["y1", "y2"];
pub const AXIS_VARS: [&str; 2] = ["y1", "sigma"];
pub const GAMMA_VARS: [&str; 4] = ["ga", "gb", "gc", "gd"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SysError {
    #[error("every anchor triple is collinear; the Cramer reduction is unavailable")]
    ZeroDelta,
    #[error("Y is a pole of the Γ-function of anchor {0}")]
    Pole(Label),
    #[error("configuration is not normalized: {0}")]
    NotNormalized(String),
    #[error("anchors are not all collinear")]
    NotCollinear,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn cst(vars: &[&str], c: &BigRational) -> RatMPoly {
    RatMPoly::constant(vars, c.clone())
}

/// `‖V − T‖²` over the two named variables.
fn dist_sq(vars: &[&str], v1: &str, v2: &str, t: &Point2) -> RatMPoly {
    let d1 = RatMPoly::var(vars, v1) - cst(vars, &t.x);
    let d2 = RatMPoly::var(vars, v2) - cst(vars, &t.y);
    &(&d1 * &d1) + &(&d2 * &d2)
}

/// One polynomial per anchor: `k_T‖X−T‖²‖Y−T‖² − ‖X−T‖² − ‖Y−T‖²`, in
/// the variables [`XY_VARS`].
pub fn build_quartic_system(config: &Configuration) -> [RatMPoly; 4] {
    Label::ALL.map(|l| {
        let t = config.anchor(l);
        let p = dist_sq(&XY_VARS, "x1", "x2", t);
        let q = dist_sq(&XY_VARS, "y1", "y2", t);
        &(&(&p * &q).scale(config.k(l)) - &p) - &q
    })
}

/// `Γ_T(Y) = ‖Y−T‖²/(k_T‖Y−T‖² − 1) − ‖T‖²` as an exact fraction over
/// [`Y_VARS`].
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFn {
    pub label: Label,
    pub numerator: RatMPoly,
    pub denominator: RatMPoly,
}

impl GammaFn {
    /// Value at `y`, or a pole signal when the denominator is negligible
    /// against its own term magnitudes.
    pub fn eval(&self, y: &ComplexPoint2) -> Result<Complex64, SysError> {
        let pt = [y.x, y.y];
        let den = self.denominator.eval_complex(&pt);
        if den.norm() <= 1e-12 * self.denominator.eval_abs_scale(&pt) {
            return Err(SysError::Pole(self.label));
        }
        Ok(self.numerator.eval_complex(&pt) / den)
    }
}

pub fn gamma(config: &Configuration, label: Label) -> GammaFn {
    let t = config.anchor(label);
    let q = dist_sq(&Y_VARS, "y1", "y2", t);
    let den = &q.scale(config.k(label)) - &RatMPoly::one(&Y_VARS);
    let num = &q - &den.scale(&t.norm_sq());
    GammaFn { label, numerator: num, denominator: den }
}

/// The anchor triple spanning the largest triangle, earliest in
/// lexicographic order among ties; `None` when all anchors are collinear.
pub fn cramer_pivot(config: &Configuration) -> Option<[Label; 3]> {
    let mut best: Option<([Label; 3], BigRational)> = None;
    for t in Label::TRIPLES {
        let d = delta(config, t).abs();
        if d.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| d > *b) {
            best = Some((t, d));
        }
    }
    best.map(|(t, _)| t)
}

/// `Δ = (a₁−b₁)(a₂−c₂) − (a₂−b₂)(a₁−c₁)` for the triple `(a, b, c)`.
pub fn delta(config: &Configuration, triple: [Label; 3]) -> BigRational {
    let [a, b, c] = triple.map(|l| config.anchor(l));
    (&a.x - &b.x) * (&a.y - &c.y) - (&a.y - &b.y) * (&a.x - &c.x)
}

/// Solves the two linear equations `2(a−b)·X = Γ_b − Γ_a`,
/// `2(a−c)·X = Γ_c − Γ_a` for `X` using the pivot triple.
pub fn recover_x(config: &Configuration, y: &ComplexPoint2) -> Result<ComplexPoint2, SysError> {
    let pivot = cramer_pivot(config).ok_or(SysError::ZeroDelta)?;
    recover_x_with(config, pivot, y)
}

pub fn recover_x_with(config: &Configuration, pivot: [Label; 3], y: &ComplexPoint2) -> Result<ComplexPoint2, SysError> {
    let d = rat_to_f64(&delta(config, pivot));
    if d == 0.0 {
        return Err(SysError::ZeroDelta);
    }
    let g = pivot.map(|l| gamma(config, l).eval(y));
    let [ga, gb, gc] = [g[0].clone()?, g[1].clone()?, g[2].clone()?];
    let [(a1, a2), (b1, b2), (c1, c2)] = pivot.map(|l| config.anchor(l).to_f64());
    let (db, dc) = (gb - ga, gc - ga);
    let x1 = (db * (a2 - c2) - dc * (a2 - b2)) / (2.0 * d);
    let x2 = (dc * (a1 - b1) - db * (a1 - c1)) / (2.0 * d);
    Ok(ComplexPoint2::new(x1, x2))
}

/// A pair of polynomial constraints on a two-dimensional slice together with
/// the factors whose zeros are artefacts of clearing denominators.
pub trait ConstraintPair {
    fn constraints(&self) -> (&RatMPoly, &RatMPoly);
    fn spurious_factors(&self) -> Vec<&RatMPoly>;
}

/// The reduced system in `Y = (y1, y2)` obtained from the Cramer recovery of
/// `X`.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub pivot: [Label; 3],
    /// The label outside the pivot triple.
    pub fourth: Label,
    /// Linear dependence of the rows `(Γ_T, t₁, t₂, 1)`, multiplied by the
    /// four Γ denominators.
    pub det_constraint: RatMPoly,
    /// `‖X − a‖² = Γ_a + ‖a‖²` for the recovered `X`, multiplied by the
    /// squared product of the pivot denominators (one power of the first
    /// cancels).
    pub circle_constraint: RatMPoly,
    /// `k_T‖Y−T‖² − 1` for every anchor.
    pub cleared_factors: Vec<RatMPoly>,
    /// `‖Y−T‖²` for every anchor.
    pub isotropic_factors: Vec<RatMPoly>,
    pub delta: BigRational,
    pub gammas: [GammaFn; 4],
    anchors: [(f64, f64); 4],
}

impl ConstraintPair for ReducedSystem {
    fn constraints(&self) -> (&RatMPoly, &RatMPoly) {
        (&self.det_constraint, &self.circle_constraint)
    }

    fn spurious_factors(&self) -> Vec<&RatMPoly> {
        self.cleared_factors.iter().chain(&self.isotropic_factors).collect()
    }
}

impl ReducedSystem {
    fn gamma_values(&self, y: &ComplexPoint2) -> Result<[Complex64; 4], SysError> {
        let v = self.gammas.each_ref().map(|g| g.eval(y));
        Ok([v[0].clone()?, v[1].clone()?, v[2].clone()?, v[3].clone()?])
    }

    /// The determinant of the rows `(Γ_T(Y), t₁, t₂, 1)` and its Hadamard
    /// bound, the scale against which it should be judged.
    pub fn det_identity(&self, y: &ComplexPoint2) -> Result<(Complex64, f64), SysError> {
        let g = self.gamma_values(y)?;
        let m = Matrix4::from_fn(|i, j| match j {
            0 => g[i],
            1 => Complex64::new(self.anchors[i].0, 0.0),
            2 => Complex64::new(self.anchors[i].1, 0.0),
            _ => Complex64::new(1.0, 0.0),
        });
        let bound: f64 = (0..4).map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product();
        Ok((m.determinant(), bound))
    }

    /// `‖X(Y) − a‖² − (Γ_a(Y) + ‖a‖²)` for the Cramer recovery `X(Y)`, with
    /// the magnitude of the larger side as scale.
    pub fn circle_identity(&self, config: &Configuration, y: &ComplexPoint2) -> Result<(Complex64, f64), SysError> {
        let x = recover_x_with(config, self.pivot, y)?;
        let a = self.pivot[0];
        let (a1, a2) = self.anchors[a.index()];
        let lhs = (x.x - a1).powu(2) + (x.y - a2).powu(2);
        let rhs = self.gammas[a.index()].eval(y)? + (a1 * a1 + a2 * a2);
        Ok((lhs - rhs, lhs.norm().max(rhs.norm())))
    }
}

/// Builds the reduced system using the largest anchor triangle as
/// the Cramer pivot.
pub fn build_reduced_system(config: &Configuration) -> Result<ReducedSystem, SysError> {
    let pivot = cramer_pivot(config).ok_or(SysError::ZeroDelta)?;
    build_reduced_system_with(config, pivot)
}

pub fn build_reduced_system_with(config: &Configuration, pivot: [Label; 3]) -> Result<ReducedSystem, SysError> {
    let v = &Y_VARS;
    let delta = delta(config, pivot);
    if delta.is_zero() {
        return Err(SysError::ZeroDelta);
    }
    let gammas = Label::ALL.map(|l| gamma(config, l));
    let num = |l: Label| &gammas[l.index()].numerator;
    let den = |l: Label| &gammas[l.index()].denominator;

    // Expansion of det[Γ_T, t₁, t₂, 1] along the first column.
    let mut det_constraint = RatMPoly::zero(v);
    for (i, l) in Label::ALL.into_iter().enumerate() {
        let others: Vec<&Point2> = Label::ALL.iter().filter(|&&m| m != l).map(|&m| config.anchor(m)).collect();
        let minor = det3_points(&others);
        let cof = if i % 2 == 0 { minor } else { -minor };
        let mut term = num(l).scale(&cof);
        for m in Label::ALL.into_iter().filter(|&m| m != l) {
            term = &term * den(m);
        }
        det_constraint += &term;
    }

    let [la, lb, lc] = pivot;
    let [a, b, c] = pivot.map(|l| config.anchor(l));
    let dd = &(den(la) * den(lb)) * den(lc);
    // (Γ_b − Γ_a)·L and (Γ_c − Γ_a)·L with L the product of pivot denominators.
    let gb = &(&(num(lb) * den(la)) * den(lc)) - &(&(num(la) * den(lb)) * den(lc));
    let gc = &(&(num(lc) * den(la)) * den(lb)) - &(&(num(la) * den(lb)) * den(lc));
    let two_delta = &delta * rat(2);
    let e1 = &(&gb.scale(&(&a.y - &c.y)) - &gc.scale(&(&a.y - &b.y))) - &dd.scale(&(&two_delta * &a.x));
    let e2 = &(&gc.scale(&(&a.x - &b.x)) - &gb.scale(&(&a.x - &c.x))) - &dd.scale(&(&two_delta * &a.y));
    let qa = dist_sq(v, "y1", "y2", a);
    let tail = &(&(&qa * den(la)) * &den(lb).pow(2)) * &den(lc).pow(2);
    let circle_constraint = &(&(&e1 * &e1) + &(&e2 * &e2)) - &tail.scale(&(&two_delta * &two_delta));

    Ok(ReducedSystem {
        pivot,
        fourth: Label::complement(pivot),
        det_constraint,
        circle_constraint,
        cleared_factors: Label::ALL.iter().map(|&l| den(l).clone()).collect(),
        isotropic_factors: Label::ALL.iter().map(|&l| dist_sq(v, "y1", "y2", config.anchor(l))).collect(),
        delta,
        anchors: std::array::from_fn(|i| config.anchors[i].to_f64()),
        gammas,
    })
}

/// `det[[x, y, 1]]` over three points.
fn det3_points(p: &[&Point2]) -> BigRational {
    let (a, b, c) = (p[0], p[1], p[2]);
    &a.x * (&b.y - &c.y) - &a.y * (&b.x - &c.x) + (&b.x * &c.y - &b.y * &c.x)
}

/// Reduction used when all four anchors lie on one line.
///
/// After normalization every anchor sits at `(t_T, 0)`, so
/// `‖X−T‖² = s − 2t_T x₁ + t_T²` with `s = ‖X‖²`, and likewise for `Y` with
/// `σ = ‖Y‖²`. Each equation then says that the row
/// `(1, −2t_T, t_T² − Γ̄_T(y₁, σ))` annihilates `(s, x₁, 1)`; the constraints
/// are the two 3×3 minors through rows `A, B`.
#[derive(Clone, Debug)]
pub struct AxisSystem {
    pub transform: PlaneTransform,
    pub normalized: Configuration,
    /// Minor through rows `A, B, C`, over [`AXIS_VARS`].
    pub first: RatMPoly,
    /// Minor through rows `A, B, D`.
    pub second: RatMPoly,
    pub cleared_factors: Vec<RatMPoly>,
    pub isotropic_factors: Vec<RatMPoly>,
    positions: [BigRational; 4],
}

impl ConstraintPair for AxisSystem {
    fn constraints(&self) -> (&RatMPoly, &RatMPoly) {
        (&self.first, &self.second)
    }

    fn spurious_factors(&self) -> Vec<&RatMPoly> {
        self.cleared_factors.iter().chain(&self.isotropic_factors).collect()
    }
}

impl AxisSystem {
    /// Axis coordinate of each normalized anchor.
    pub fn positions(&self) -> &[BigRational; 4] {
        &self.positions
    }

    /// `Γ̄_T = q_T/(k_T q_T − 1)` with `q_T = σ − 2t_T y₁ + t_T²`.
    pub fn gamma_bar(&self, l: Label, y1: Complex64, sigma: Complex64) -> Result<Complex64, SysError> {
        let t = rat_to_f64(&self.positions[l.index()]);
        let k = rat_to_f64(self.normalized.k(l));
        let q = sigma - 2.0 * t * y1 + t * t;
        let d = k * q - 1.0;
        if d.norm() <= 1e-12 * (1.0 + (k * q).norm()) {
            return Err(SysError::Pole(l));
        }
        Ok(q / d)
    }

    /// `(x₁, s)` in normalized coordinates from rows `A` and `B`.
    pub fn extend(&self, y1: Complex64, sigma: Complex64) -> Result<(Complex64, Complex64), SysError> {
        let ga = self.gamma_bar(Label::A, y1, sigma)?;
        let gb = self.gamma_bar(Label::B, y1, sigma)?;
        Ok(((ga - gb + 1.0) / 2.0, ga))
    }

    /// Expresses a polynomial over [`AXIS_VARS`] in original coordinates
    /// [`Y_VARS`].
    pub fn to_original(&self, p: &RatMPoly) -> RatMPoly {
        let v = &Y_VARS;
        let (a, b) = self.transform.linear_part();
        let (t0, t1) = self.transform.translation_part();
        // y1' = a·y1 + b·y2 + t0 and y2' = a·y2 − b·y1 + t1.
        let y1n = &(&RatMPoly::var(v, "y1").scale(a) + &RatMPoly::var(v, "y2").scale(b)) + &cst(v, t0);
        let y2n = &(&RatMPoly::var(v, "y2").scale(a) - &RatMPoly::var(v, "y1").scale(b)) + &cst(v, t1);
        let sigma = &(&y1n * &y1n) + &(&y2n * &y2n);
        p.with_vars(&AXIS_VARS).expect("axis polynomial").compose(&[y1n, sigma])
    }
}

pub fn build_axis_system(config: &Configuration) -> Result<AxisSystem, SysError> {
    if cramer_pivot(config).is_some() {
        return Err(SysError::NotCollinear);
    }
    let (normalized, transform) = normalize(config);
    let v = &AXIS_VARS;
    let positions: [BigRational; 4] = std::array::from_fn(|i| normalized.anchors[i].x.clone());
    let q: Vec<RatMPoly> = positions
        .iter()
        .map(|t| {
            let lin = &RatMPoly::var(v, "sigma") - &RatMPoly::var(v, "y1").scale(&(t * rat(2)));
            &lin + &cst(v, &(t * t))
        })
        .collect();
    let d: Vec<RatMPoly> = Label::ALL
        .iter()
        .map(|&l| &q[l.index()].scale(normalized.k(l)) - &RatMPoly::one(v))
        .collect();
    let minor = |rows: [usize; 3]| {
        // Third-column expansion of det[1, −2t_i, t_i² − q_i/D_i], cleared
        // by the three denominators.
        let mut out = RatMPoly::zero(v);
        for (pos, &i) in rows.iter().enumerate() {
            let others: Vec<usize> = rows.iter().copied().filter(|&j| j != i).collect();
            let (tj, tk) = (&positions[others[0]], &positions[others[1]]);
            // Minor det[[1, −2t_j], [1, −2t_k]] and cofactor sign (−1)^pos.
            let m2 = (tj - tk) * rat(2);
            let cof = if pos % 2 == 0 { m2 } else { -m2 };
            let t = &positions[i];
            let entry = &d[i].scale(&(t * t)) - &q[i];
            let mut term = entry.scale(&cof);
            for &j in &others {
                term = &term * &d[j];
            }
            out += &term;
        }
        out
    };
    let first = minor([0, 1, 2]);
    let second = minor([0, 1, 3]);
    Ok(AxisSystem { transform, normalized, first, second, cleared_factors: d, isotropic_factors: q, positions })
}

/// The system in the shifted Γ-values `Γ̄_T = Γ_T + ‖T‖²` for a normalized
/// configuration (`A = (0,0)`, `B = (1,0)`, `c₂ ≠ 0`, `d₂ ≠ 0`), over
/// [`GAMMA_VARS`].
#[derive(Clone, Debug)]
pub struct GammaSystem {
    /// From `‖Y‖² = Γ̄_A/(k_AΓ̄_A − 1)` after eliminating `y₁, y₂` with the
    /// relations for `A, B, C`.
    pub h: RatMPoly,
    /// From the two expressions of `y₂` through `C` and through `D`.
    pub f: RatMPoly,
    pub linear_relation: RatMPoly,
    pub quadric_relation: RatMPoly,
}

impl GammaSystem {
    /// Product of the total degrees of the four relations.
    pub fn bezout_product(&self) -> u32 {
        [&self.h, &self.f, &self.linear_relation, &self.quadric_relation]
            .iter()
            .map(|p| p.total_degree().unwrap_or(0))
            .product()
    }
}

pub fn build_gamma_system(config: &Configuration) -> Result<GammaSystem, SysError> {
    let a = config.anchor(Label::A);
    let b = config.anchor(Label::B);
    if *a != Point2::origin() || *b != Point2::from_ints(1, 0) {
        return Err(SysError::NotNormalized("expected A = (0, 0) and B = (1, 0)".into()));
    }
    let (c, d) = (config.anchor(Label::C), config.anchor(Label::D));
    if c.y.is_zero() || d.y.is_zero() {
        return Err(SysError::NotNormalized("C and D must lie off the first axis".into()));
    }
    let v = &GAMMA_VARS;
    let g: Vec<RatMPoly> = GAMMA_VARS.iter().map(|n| RatMPoly::var(v, n)).collect();
    let one = RatMPoly::one(v);
    let e: Vec<RatMPoly> = Label::ALL.iter().map(|&l| &g[l.index()].scale(config.k(l)) - &one).collect();
    let (c1, c2, cc) = (&c.x, &c.y, c.norm_sq());
    let (d1, d2, dd) = (&d.x, &d.y, d.norm_sq());

    // 2y₁ = p1/(E_A E_B); 2(t·Y) = m_t/(E_A E_t) for t = C, D.
    let p1 = &(&(&g[0] * &e[1]) - &(&g[1] * &e[0])) + &(&e[0] * &e[1]);
    let m = |i: usize, tt: &BigRational| &(&(&g[0] * &e[i]) - &(&g[i] * &e[0])) + &(&e[0] * &e[i]).scale(tt);
    let mc = m(2, &cc);
    let md = m(3, &dd);
    // 2c₂y₂·E_A E_B E_C.
    let yc = &(&e[1] * &mc) - &(&e[2] * &p1).scale(c1);
    let yd = &(&e[1] * &md) - &(&e[3] * &p1).scale(d1);

    let c2sq = c2 * c2;
    let h = &(&(&e[2] * &p1).pow(2).scale(&c2sq) + &(&yc * &yc))
        - &(&(&(&g[0] * &e[0]) * &e[1].pow(2)) * &e[2].pow(2)).scale(&(&c2sq * rat(4)));
    let f = &(&e[3] * &yc).scale(d2) - &(&e[2] * &yd).scale(c2);

    // Rows (Γ̄_A, Γ̄_B − 1, Γ̄_C − ‖C‖², Γ̄_D − ‖D‖²), (0, 1, c₁, d₁),
    // (0, 0, c₂, d₂), (1, 1, 1, 1); expansion along the first row.
    let first_row = [
        g[0].clone(),
        &g[1] - &one,
        &g[2] - &cst(v, &cc),
        &g[3] - &cst(v, &dd),
    ];
    let rows = [[rat(0), rat(1), c1.clone(), d1.clone()], [rat(0), rat(0), c2.clone(), d2.clone()], [rat(1), rat(1), rat(1), rat(1)]];
    let mut linear_relation = RatMPoly::zero(v);
    for (j, entry) in first_row.iter().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        let minor = det3(&rows.each_ref().map(|r| [r[cols[0]].clone(), r[cols[1]].clone(), r[cols[2]].clone()]));
        let cof = if j % 2 == 0 { minor } else { -minor };
        linear_relation += &entry.scale(&cof);
    }

    // 2ΔX = (−c₂(Γ_B − Γ_A), −(Γ_C − Γ_A) + c₁(Γ_B − Γ_A)) with Δ = c₂.
    let db = &(&g[1] - &one) - &g[0];
    let dc = &(&g[2] - &cst(v, &cc)) - &g[0];
    let u1 = db.scale(&-c2.clone());
    let u2 = &db.scale(c1) - &dc;
    let quadric_relation = &(&(&u1 * &u1) + &(&u2 * &u2)) - &g[0].scale(&(&c2sq * rat(4)));

    Ok(GammaSystem { h, f, linear_relation, quadric_relation })
}

fn det3(m: &[[BigRational; 3]; 3]) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// `Γ̄_T = ‖X − T‖²` for each anchor: the point of Γ̄-space attached to a
/// solution.
pub fn gamma_bar_point(config: &Configuration, x: &ComplexPoint2) -> [Complex64; 4] {
    Label::ALL.map(|l| {
        let (t1, t2) = config.anchor(l).to_f64();
        (x.x - t1).powu(2) + (x.y - t2).powu(2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> Configuration {
        Configuration::new(
            [(-1, -1), (-1, 1), (1, -1), (1, 1)].map(|(x, y)| Point2::from_ints(x, y)),
            std::array::from_fn(|_| q(11, 10)),
        )
    }

    fn axis() -> Configuration {
        Configuration::new(
            [(-1, 0), (1, 0), (-2, 0), (2, 0)].map(|(x, y)| Point2::from_ints(x, y)),
            [q(-2, 3), q(-2, 3), q(2, 3), q(2, 3)],
        )
    }

    fn generic() -> Configuration {
        Configuration::new(
            [(0, 0), (3, 1), (-1, 2), (2, -3)].map(|(x, y)| Point2::from_ints(x, y)),
            [q(1, 2), q(3, 4), q(5, 3), q(2, 1)],
        )
    }

    fn small_root() -> f64 {
        ((2.0 / 11.0) * (5.0 - 14f64.sqrt())).sqrt()
    }

    fn eval4(p: &RatMPoly, v: [Complex64; 4]) -> Complex64 {
        p.eval_complex(&v)
    }

    #[test]
    fn quartic_at_origin() {
        let cfg = Configuration::new(
            [(0, 0), (5, 0), (0, 5), (5, 5)].map(|(x, y)| Point2::from_ints(x, y)),
            std::array::from_fn(|_| q(1, 1)),
        );
        let sys = build_quartic_system(&cfg);
        let var = |n| RatMPoly::var(&XY_VARS, n);
        let (x1, x2, y1, y2) = (var("x1"), var("x2"), var("y1"), var("y2"));
        let xx = &(&x1 * &x1) + &(&x2 * &x2);
        let yy = &(&y1 * &y1) + &(&y2 * &y2);
        assert_eq!(sys[0], &(&(&xx * &yy) - &xx) - &yy);
        assert!(sys.iter().all(|p| p.total_degree() == Some(4)));
    }

    #[test]
    fn quartic_residuals_at_known_solutions() {
        let sys = build_quartic_system(&square());
        let r = small_root();
        for p in &sys {
            assert!(eval4(p, [c(-r, 0.0), c(0.0, 0.0), c(r, 0.0), c(0.0, 0.0)]).norm() <= 1e-12);
        }
        let sys = build_quartic_system(&axis());
        let y = c(0.0, (13.0f64 / 7.0).sqrt());
        for p in &sys {
            assert!(eval4(p, [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), y]).norm() <= 1e-13);
        }
    }

    #[test]
    fn gamma_values_and_poles() {
        let cfg = Configuration::new(
            [(0, 0), (5, 0), (0, 5), (5, 5)].map(|(x, y)| Point2::from_ints(x, y)),
            std::array::from_fn(|_| q(1, 1)),
        );
        let g = gamma(&cfg, Label::A);
        let v = g.eval(&ComplexPoint2::real(2.0, 0.0)).unwrap();
        assert!((v - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(g.eval(&ComplexPoint2::real(0.6, 0.8)), Err(SysError::Pole(Label::A)));

        let r = small_root();
        let g = gamma(&square(), Label::A);
        let lhs = g.eval(&ComplexPoint2::real(r, 0.0)).unwrap() + 2.0;
        let rhs = (-r + 1.0).powi(2) + 1.0;
        assert!((lhs.re - rhs).abs() < 1e-12 && lhs.im == 0.0);
    }

    #[test]
    fn cramer_recovery() {
        let r = small_root();
        let x = recover_x(&square(), &ComplexPoint2::real(r, 0.0)).unwrap();
        assert!(x.dist(&ComplexPoint2::real(-r, 0.0)) < 1e-10);
        let x = recover_x(&square(), &ComplexPoint2::real(0.0, r)).unwrap();
        assert!(x.dist(&ComplexPoint2::real(0.0, -r)) < 1e-10);
        let x = recover_x(&square(), &ComplexPoint2::real(0.3, 0.0)).unwrap();
        assert!(x.y.norm() < 1e-14);
        assert_eq!(recover_x(&axis(), &ComplexPoint2::real(0.3, 0.0)), Err(SysError::ZeroDelta));
    }

    #[test]
    fn reduced_constraints_vanish_on_solutions() {
        let rs = build_reduced_system(&square()).unwrap();
        assert_eq!(rs.pivot, [Label::A, Label::B, Label::C]);
        assert_eq!(rs.delta, q(-4, 1));
        // Equal constants make the top forms of the Γ numerators cancel.
        assert_eq!(rs.det_constraint.total_degree(), Some(4));
        assert_eq!(rs.circle_constraint.total_degree(), Some(12));
        let generic = build_reduced_system(&generic()).unwrap();
        assert_eq!(generic.det_constraint.total_degree(), Some(8));
        assert_eq!(generic.circle_constraint.total_degree(), Some(12));
        let r = small_root();
        for y in [ComplexPoint2::real(r, 0.0), ComplexPoint2::real(0.0, -r)] {
            let pt = [y.x, y.y];
            for p in [&rs.det_constraint, &rs.circle_constraint] {
                assert!(p.eval_complex(&pt).norm() <= 1e-12 * p.eval_abs_scale(&pt));
            }
            let (d, scale) = rs.det_identity(&y).unwrap();
            assert!(d.norm() <= 1e-12 * scale);
            let (e, scale) = rs.circle_identity(&square(), &y).unwrap();
            assert!(e.norm() <= 1e-12 * scale);
        }
        let y = [c(0.3, 0.1), c(-0.7, 0.2)];
        let off = rs.det_constraint.eval_complex(&y).norm() / rs.det_constraint.eval_abs_scale(&y)
            + rs.circle_constraint.eval_complex(&y).norm() / rs.circle_constraint.eval_abs_scale(&y);
        assert!(off > 1e-6);
    }

    #[test]
    fn axis_reduction_has_common_line() {
        let ax = build_axis_system(&axis()).unwrap();
        assert_eq!(ax.positions(), &[q(0, 1), q(1, 1), q(-1, 2), q(3, 2)]);
        assert!(ax.first.total_degree().unwrap() <= 3);
        // The family Y = (0, y) sits at y1' = 1/2 in normalized coordinates.
        for sigma in [c(0.7, 0.0), c(-2.0, 1.5)] {
            let pt = [c(0.5, 0.0), sigma];
            assert!(ax.first.eval_complex(&pt).norm() < 1e-12 * ax.first.eval_abs_scale(&pt));
            assert!(ax.second.eval_complex(&pt).norm() < 1e-12 * ax.second.eval_abs_scale(&pt));
        }
        let line = ax.to_original(&(&RatMPoly::var(&AXIS_VARS, "y1") - &RatMPoly::constant(&AXIS_VARS, q(1, 2))));
        assert_eq!(line.primitive(), RatMPoly::var(&Y_VARS, "y1"));
        assert!(matches!(build_axis_system(&square()), Err(SysError::NotCollinear)));
    }

    #[test]
    fn gamma_system_shapes() {
        let (n, _) = normalize(&generic());
        let gs = build_gamma_system(&n).unwrap();
        assert_eq!(gs.h.total_degree(), Some(6));
        assert_eq!(gs.h.homogeneous_part(6).num_terms(), 1);
        assert_eq!(gs.f.total_degree(), Some(4));
        assert!((0..4).all(|i| gs.f.degree_in(i) == Some(1)));
        assert_eq!(gs.bezout_product(), 48);

        let (n, tf) = normalize(&square());
        let gs = build_gamma_system(&n).unwrap();
        assert_eq!(gs.h.total_degree(), Some(6));
        // With all constants equal the quartic part of F cancels.
        assert_eq!(gs.f.total_degree(), Some(3));
        // All four relations vanish at the Γ̄-point of a solution.
        let r = small_root();
        let x = tf.apply_complex(&ComplexPoint2::real(-r, 0.0));
        let gp = gamma_bar_point(&n, &x);
        for p in [&gs.h, &gs.f, &gs.linear_relation, &gs.quadric_relation] {
            assert!(p.eval_complex(&gp).norm() <= 1e-11 * p.eval_abs_scale(&gp), "{p}");
        }
        assert!(matches!(build_gamma_system(&square()), Err(SysError::NotNormalized(_))));
    }
}
