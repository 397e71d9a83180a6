//! End-to-end solution of the four-anchor system: finiteness test,
//! elimination to one variable, back-substitution, Newton polishing and
//! certification.

use nalgebra::{Matrix4, Vector4};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{validate, Configuration, Label, PlaneTransform, Point2, ValidationReport};
use crate::poly::roots::{raw_roots, zpoly_roots, CPoly};
use crate::poly::{mp_gcd, rat_to_f64, resultant, ComplexPoint2, RatMPoly, ZPoly};
use crate::sysbuild::{
    build_axis_system, build_reduced_system, cramer_pivot, recover_x_with, AxisSystem, ConstraintPair, SysError,
};

/// Upper bound on the number of isolated solutions.
pub const BEZOUT_CEILING: usize = 48;

const SHEAR_ATTEMPTS: usize = 3;
const WITNESS_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSettings {
    /// Largest accepted residual of the four polynomial equations.
    pub accept: f64,
    /// Relative bound on imaginary parts for a solution to count as real.
    pub real: f64,
    /// Relative radius within which two solutions are merged.
    pub dedupe: f64,
    pub max_newton_iters: usize,
}

impl Default for ToleranceSettings {
    fn default() -> Self {
        Self { accept: 1e-8, real: 1e-8, dedupe: 1e-6, max_newton_iters: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tolerances: ToleranceSettings,
    /// Seed for the random change of coordinates and witness sampling.
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tolerances: ToleranceSettings::default(), seed: 0x5eed_f00d }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Finite,
    PositiveDimensional,
    InvalidInput,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionPair {
    pub x: ComplexPoint2,
    pub y: ComplexPoint2,
    /// Largest absolute value of the four polynomial equations.
    pub residual: f64,
    pub is_real: bool,
    pub multiplicity: usize,
}

impl SolutionPair {
    pub fn coords(&self) -> [Complex64; 4] {
        [self.x.x, self.x.y, self.y.x, self.y.y]
    }

    pub fn max_abs(&self) -> f64 {
        self.x.max_abs().max(self.y.max_abs())
    }

    /// Largest coordinate difference to `other`.
    pub fn distance(&self, other: &SolutionPair) -> f64 {
        coord_distance(&self.coords(), &other.coords())
    }
}

fn coord_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

/// A curve of `Y` values each of which extends to a solution.
#[derive(Clone, Debug)]
pub struct WitnessCurve {
    /// Primitive polynomial over `y1, y2` in the input coordinates.
    pub polynomial: RatMPoly,
    /// Solutions obtained by extending sampled curve points.
    pub samples: Vec<(ComplexPoint2, ComplexPoint2)>,
    pub max_sample_residual: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub seed: u64,
    /// `"cramer"` or `"axis"`.
    pub reduction: String,
    pub constraint_degrees: Option<(u32, u32)>,
    pub shear: Option<String>,
    pub shear_attempts: usize,
    pub resultant_degree: Option<usize>,
    pub square_free_factors: Vec<(usize, usize)>,
    pub candidates: usize,
    pub rejected: usize,
    pub messages: Vec<String>,
}

impl Diagnostics {
    fn note(&mut self, msg: impl Into<String>) {
        self.messages.push(msg.into());
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub classification: Classification,
    /// Sorted canonically; empty unless the classification is `Finite`.
    pub solutions: Vec<SolutionPair>,
    pub witness: Option<WitnessCurve>,
    /// Absent only for invalid input.
    pub validation: Option<ValidationReport>,
    pub bezout_ceiling: usize,
    pub tolerances: ToleranceSettings,
    pub invalid_reason: Option<String>,
    pub diagnostics: Diagnostics,
}

impl SolveReport {
    pub fn real_solutions(&self) -> impl Iterator<Item = &SolutionPair> {
        self.solutions.iter().filter(|s| s.is_real)
    }

    /// Number of solutions counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> usize {
        self.solutions.iter().map(|s| s.multiplicity).sum()
    }
}

/// Floating image of the configuration used for residuals and Newton steps.
#[derive(Clone, Copy, Debug)]
pub struct NumericSystem {
    t: [(f64, f64); 4],
    k: [f64; 4],
}

impl NumericSystem {
    pub fn new(config: &Configuration) -> Self {
        let (t, k) = config.to_f64();
        Self { t, k }
    }

    fn sq_dists(&self, i: usize, z: &[Complex64; 4]) -> (Complex64, Complex64) {
        let (t1, t2) = self.t[i];
        let p = (z[0] - t1).powu(2) + (z[1] - t2).powu(2);
        let q = (z[2] - t1).powu(2) + (z[3] - t2).powu(2);
        (p, q)
    }

    pub fn residuals(&self, z: &[Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|i| {
            let (p, q) = self.sq_dists(i, z);
            self.k[i] * (p * q) - (p + q)
        })
    }

    pub fn max_residual(&self, z: &[Complex64; 4]) -> f64 {
        self.residuals(z).iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn jacobian(&self, z: &[Complex64; 4]) -> Matrix4<Complex64> {
        Matrix4::from_fn(|i, j| {
            let (p, q) = self.sq_dists(i, z);
            let (t1, t2) = self.t[i];
            match j {
                0 => (self.k[i] * q - 1.0) * 2.0 * (z[0] - t1),
                1 => (self.k[i] * q - 1.0) * 2.0 * (z[1] - t2),
                2 => (self.k[i] * p - 1.0) * 2.0 * (z[2] - t1),
                _ => (self.k[i] * p - 1.0) * 2.0 * (z[3] - t2),
            }
        })
    }

    /// Smallest `|‖X−T‖²|` or `|‖Y−T‖²|`; zero means the point lies outside
    /// the domain of the original rational equations.
    pub fn min_sq_dist(&self, z: &[Complex64; 4]) -> f64 {
        (0..4)
            .map(|i| {
                let (p, q) = self.sq_dists(i, z);
                p.norm().min(q.norm())
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Damped Newton iteration; returns the final point and residual. Stops on
/// stagnation, a singular step or divergence.
fn newton(ns: &NumericSystem, start: [Complex64; 4], max_iters: usize) -> Option<([Complex64; 4], f64)> {
    let mut z = start;
    let mut r = ns.max_residual(&z);
    if !r.is_finite() {
        return None;
    }
    for _ in 0..max_iters {
        if r == 0.0 {
            break;
        }
        let f = Vector4::from(ns.residuals(&z));
        let Some(step) = ns.jacobian(&z).lu().solve(&f) else {
            break;
        };
        let mut t = 1.0;
        let mut improved = None;
        for _ in 0..12 {
            let cand: [Complex64; 4] = std::array::from_fn(|i| z[i] - step[i] * t);
            let rc = ns.max_residual(&cand);
            if rc < r {
                improved = Some((cand, rc));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, rc)) = improved else { break };
        let stalled = rc > 0.5 * r;
        z = cand;
        r = rc;
        if z.iter().any(|c| c.norm() > 1e12) {
            return None;
        }
        if stalled && r < 1e-14 * (1.0 + max_abs(&z).powi(4)) {
            break;
        }
    }
    Some((z, r))
}

fn max_abs(z: &[Complex64; 4]) -> f64 {
    z.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn is_near_singular(ns: &NumericSystem, z: &[Complex64; 4]) -> bool {
    let sv = ns.jacobian(z).singular_values();
    let (lo, hi) = (sv.min(), sv.max());
    lo < 1e-6 * hi
}

/// Polishes a guess against the four polynomial equations. Returns `None`
/// when Newton fails to reach the acceptance residual, or converges to a
/// point where some `‖X−T‖²` or `‖Y−T‖²` vanishes.
pub fn newton_polish(
    config: &Configuration,
    guess: (ComplexPoint2, ComplexPoint2),
    tol: &ToleranceSettings,
) -> Option<SolutionPair> {
    polish(&NumericSystem::new(config), guess, tol, 1)
}

fn polish(
    ns: &NumericSystem,
    (x, y): (ComplexPoint2, ComplexPoint2),
    tol: &ToleranceSettings,
    hint_multiplicity: usize,
) -> Option<SolutionPair> {
    let start = [x.x, x.y, y.x, y.y];
    if start.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let (mut z, mut r) = newton(ns, start, tol.max_newton_iters)?;
    if r.is_nan() || r > tol.accept || ns.min_sq_dist(&z) <= 1e-6 {
        return None;
    }
    let imag = z.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let is_real = imag <= tol.real * (1.0 + max_abs(&z));
    if is_real {
        let real: [Complex64; 4] = z.map(|c| Complex64::new(c.re, 0.0));
        if let Some((zr, rr)) = newton(ns, real, tol.max_newton_iters) {
            if rr <= tol.accept {
                z = zr;
                r = rr;
            }
        }
    }
    let multiplicity = if is_near_singular(ns, &z) { hint_multiplicity.max(1) } else { 1 };
    Some(SolutionPair {
        x: ComplexPoint2::new(z[0], z[1]),
        y: ComplexPoint2::new(z[2], z[3]),
        residual: r,
        is_real,
        multiplicity,
    })
}

/// The primitive common factor of the two constraints after removing every
/// factor that only records a cleared denominator, when it has positive
/// degree.
pub fn detect_positive_dimensional<S: ConstraintPair>(system: &S) -> Option<RatMPoly> {
    let (p, q) = system.constraints();
    let mut g = mp_gcd(p, q).ok()?;
    if g.total_degree().unwrap_or(0) == 0 {
        return None;
    }
    for f in system.spurious_factors() {
        if f.total_degree().unwrap_or(0) == 0 {
            continue;
        }
        while let Some(h) = g.div_exact(f) {
            g = h;
        }
    }
    (g.total_degree().unwrap_or(0) > 0).then(|| square_free_part(g).primitive())
}

/// Removes repeated factors: divides by the gcd with each partial derivative.
fn square_free_part(mut g: RatMPoly) -> RatMPoly {
    for idx in 0..g.vars().len() {
        let d = g.derivative(idx);
        if d.is_zero() {
            continue;
        }
        if let Ok(h) = mp_gcd(&g, &d) {
            if h.total_degree().unwrap_or(0) > 0 {
                if let Some(r) = g.div_exact(&h) {
                    g = r;
                }
            }
        }
    }
    g
}

/// A common zero of two bivariate constraints with the multiplicity of its
/// square-free factor in the eliminant.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    a: Complex64,
    b: Complex64,
    multiplicity: usize,
}

/// Common zeros of `p` and `q` over their two variables `(v0, v1)`.
///
/// A random shear `v0 = u + λ·v1` puts the pair in general position; the
/// eliminant `Res_{v1}` is split into square-free factors whose roots are
/// lifted by solving `p(u, ·) = 0` and keeping roots where `q` nearly
/// vanishes.
fn common_zeros(p: &RatMPoly, q: &RatMPoly, rng: &mut ChaCha8Rng, diag: &mut Diagnostics) -> Option<Vec<Candidate>> {
    let (p, q) = p.align(q);
    let vars = p.vars().to_vec();
    assert_eq!(vars.len(), 2, "bivariate constraints expected");
    let sheared_vars = ["u".to_string(), vars[1].clone()];
    for attempt in 1..=SHEAR_ATTEMPTS {
        diag.shear_attempts = attempt;
        let num: i64 = rng.gen_range(1..=13) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let den: i64 = rng.gen_range(2..=11);
        let lambda = BigRational::new(num.into(), den.into());
        let u = RatMPoly::var(&sheared_vars, "u");
        let w = RatMPoly::var(&sheared_vars, &vars[1]);
        let sub = [&u + &w.scale(&lambda), w.clone()];
        let ps = p.compose(&sub);
        let qs = q.compose(&sub);
        let lead_ok = |s: &RatMPoly, orig: &RatMPoly| {
            s.degree_in(1) == orig.total_degree() && s.coefficients_in(1).last().is_some_and(|c| c.is_constant())
        };
        if !lead_ok(&ps, &p) || !lead_ok(&qs, &q) {
            diag.note(format!("shear {lambda} leaves solutions at infinity; retrying"));
            continue;
        }
        let r = match resultant(&ps, &qs, &vars[1]) {
            Ok(r) => r,
            Err(e) => {
                diag.note(format!("elimination failed: {e}"));
                continue;
            }
        };
        if r.is_zero() {
            diag.note(format!("eliminant vanishes identically under shear {lambda}; retrying"));
            continue;
        }
        diag.shear = Some(format!("{} = u + ({lambda})·{}", vars[0], vars[1]));
        let r = to_univariate(&r);
        diag.resultant_degree = r.degree();
        if r.degree().unwrap_or(0) == 0 {
            return Some(Vec::new());
        }
        let factors = r.square_free();
        diag.square_free_factors = factors.iter().map(|(f, m)| (f.degree().unwrap_or(0), *m)).collect();
        let pcoeffs = ps.coefficients_in(1);
        let newton = BivariateNewton::new(&p, &q);
        let lam = lambda.to_f64().unwrap_or(0.0);
        let mut out = Vec::new();
        for (f, m) in &factors {
            if f.degree().unwrap_or(0) == 0 {
                continue;
            }
            let roots = match zpoly_roots(f) {
                Ok(r) => r,
                Err(e) => {
                    diag.note(format!("root finding failed on a factor of degree {:?}: {e}", f.degree()));
                    continue;
                }
            };
            for ur in roots {
                lift_root(&newton, &pcoeffs, ur, lam, *m, &mut out, diag);
            }
        }
        return Some(out);
    }
    None
}

fn to_univariate(r: &RatMPoly) -> ZPoly {
    let l = BigRational::from_integer(r.denominator_lcm());
    let deg = r.total_degree().unwrap_or(0) as usize;
    let mut c = vec![BigInt::zero(); deg + 1];
    for (e, v) in r.terms() {
        let d = e.first().copied().unwrap_or(0) as usize;
        c[d] = (v * &l).to_integer();
    }
    ZPoly::new(c).primitive_part()
}

/// Bivariate polynomial with floating-point coefficients.
struct FloatPoly(Vec<(u32, u32, f64)>);

impl FloatPoly {
    fn new(p: &RatMPoly) -> Self {
        Self(p.terms().map(|(e, c)| (e[0], e[1], rat_to_f64(c))).collect())
    }

    fn eval(&self, z: &[Complex64; 2]) -> Complex64 {
        self.0.iter().map(|&(i, j, c)| c * z[0].powu(i) * z[1].powu(j)).sum()
    }

    /// Sum of the absolute values of the terms at `z`.
    fn scale(&self, z: &[Complex64; 2]) -> f64 {
        let (a, b) = (z[0].norm(), z[1].norm());
        self.0.iter().map(|&(i, j, c)| c.abs() * a.powi(i as i32) * b.powi(j as i32)).sum()
    }
}

/// Newton's method on a pair of bivariate polynomials.
struct BivariateNewton {
    p: FloatPoly,
    q: FloatPoly,
    dp: [FloatPoly; 2],
    dq: [FloatPoly; 2],
}

impl BivariateNewton {
    fn new(p: &RatMPoly, q: &RatMPoly) -> Self {
        Self {
            p: FloatPoly::new(p),
            q: FloatPoly::new(q),
            dp: [FloatPoly::new(&p.derivative(0)), FloatPoly::new(&p.derivative(1))],
            dq: [FloatPoly::new(&q.derivative(0)), FloatPoly::new(&q.derivative(1))],
        }
    }

    fn relative_residual(&self, z: &[Complex64; 2]) -> f64 {
        let rel = |f: &FloatPoly| f.eval(z).norm() / f.scale(z).max(f64::MIN_POSITIVE);
        rel(&self.p).max(rel(&self.q))
    }

    /// Refines `z` towards a common zero; `None` when the iteration leaves
    /// the finite range or ends with neither a small step nor a small
    /// relative residual. Both tests are needed: coordinate factors of the
    /// constraints spoil the residual near those lines, while badly scaled
    /// coefficients keep the step from settling.
    fn refine(&self, mut z: [Complex64; 2]) -> Option<[Complex64; 2]> {
        let mut last = f64::INFINITY;
        for _ in 0..40 {
            let (fp, fq) = (self.p.eval(&z), self.q.eval(&z));
            let [p0, p1] = [self.dp[0].eval(&z), self.dp[1].eval(&z)];
            let [q0, q1] = [self.dq[0].eval(&z), self.dq[1].eval(&z)];
            let det = p0 * q1 - p1 * q0;
            if det.norm() == 0.0 || !det.is_finite() {
                break;
            }
            let s0 = (fp * q1 - fq * p1) / det;
            let s1 = (p0 * fq - q0 * fp) / det;
            z = [z[0] - s0, z[1] - s1];
            let size = 1.0 + z[0].norm().max(z[1].norm());
            if !(z[0].is_finite() && z[1].is_finite()) || size > 1e12 {
                return None;
            }
            last = s0.norm().max(s1.norm()) / size;
            if last <= 1e-14 {
                break;
            }
        }
        (last <= 1e-8 || self.relative_residual(&z) <= 1e-8).then_some(z)
    }
}

/// Lifts a root `u` of the eliminant: each root `w` of `p(u, ·)` gives the
/// start `(u + λw, w)` for Newton on both constraints.
fn lift_root(
    newton: &BivariateNewton,
    pcoeffs: &[RatMPoly],
    u: Complex64,
    lambda: f64,
    multiplicity: usize,
    out: &mut Vec<Candidate>,
    diag: &mut Diagnostics,
) {
    let c: Vec<Complex64> = pcoeffs.iter().map(|c| c.eval_complex(&[u, Complex64::zero()])).collect();
    let ws = match raw_roots(&CPoly::new(c)) {
        Ok(ws) => ws,
        Err(e) => {
            diag.note(format!("back-substitution at u = {u} failed: {e}"));
            return;
        }
    };
    let mut push = |[a, b]: [Complex64; 2]| {
        let close = |c: &Candidate| (c.a - a).norm().max((c.b - b).norm()) <= 1e-9 * (1.0 + a.norm().max(b.norm()));
        if !out.iter().any(close) {
            out.push(Candidate { a, b, multiplicity });
        }
    };
    for w in ws {
        if let Some(z) = newton.refine([u + lambda * w, w]) {
            push(z);
        }
    }
}

fn invalid(reason: String, opts: &SolveOptions) -> SolveReport {
    SolveReport {
        classification: Classification::InvalidInput,
        solutions: Vec::new(),
        witness: None,
        validation: None,
        bezout_ceiling: BEZOUT_CEILING,
        tolerances: opts.tolerances,
        invalid_reason: Some(reason),
        diagnostics: Diagnostics { seed: opts.seed, ..Default::default() },
    }
}

pub fn solve(config: &Configuration) -> SolveReport {
    solve_with(config, &SolveOptions::default())
}

/// Translation of the anchor centroid to the origin followed by a
/// power-of-two dilation bringing the anchors within distance `[1, 2)`
/// of it.
fn working_frame(config: &Configuration) -> PlaneTransform {
    let four = BigRational::from_integer(4.into());
    let cx = config.anchors.iter().map(|p| p.x.clone()).sum::<BigRational>() / &four;
    let cy = config.anchors.iter().map(|p| p.y.clone()).sum::<BigRational>() / &four;
    let centroid = Point2::new(cx, cy);
    let spread = config.anchors.iter().map(|p| rat_to_f64(&p.dist_sq(&centroid))).fold(0.0, f64::max).sqrt();
    let e = spread.log2().floor() as i32;
    let two = BigRational::from_integer(2.into());
    let s = if e >= 0 { two.pow(e).recip() } else { two.pow(-e) };
    PlaneTransform::dilation(s).after(&PlaneTransform::translation(&Point2::new(-centroid.x, -centroid.y)))
}

/// Pulls a curve over `y1, y2` in working coordinates back to input
/// coordinates.
fn pull_back_curve(curve: &RatMPoly, frame: &PlaneTransform) -> RatMPoly {
    let curve = curve.with_vars(&crate::sysbuild::Y_VARS).expect("witness curve over y1, y2");
    let (a, b) = frame.linear_part();
    let (t0, t1) = frame.translation_part();
    let y1 = RatMPoly::var(&crate::sysbuild::Y_VARS, "y1");
    let y2 = RatMPoly::var(&crate::sysbuild::Y_VARS, "y2");
    let c = |v: &BigRational| RatMPoly::constant(&crate::sysbuild::Y_VARS, v.clone());
    let img1 = &(&y1.scale(a) + &y2.scale(b)) + &c(t0);
    let img2 = &(&y2.scale(a) - &y1.scale(b)) + &c(t1);
    curve.compose(&[img1, img2]).primitive()
}

pub fn solve_with(config: &Configuration, opts: &SolveOptions) -> SolveReport {
    let validation = match validate(config) {
        Ok(v) => v,
        Err(e) => return invalid(e.to_string(), opts),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut diag = Diagnostics { seed: opts.seed, ..Default::default() };
    let ns = NumericSystem::new(config);
    let tol = &opts.tolerances;
    let frame = working_frame(config);
    let back = frame.inverse();
    let input = config;
    let config = &frame.apply_config(input);
    let local_ns = NumericSystem::new(config);
    diag.note(format!("working frame: scale {}, shift ({}, {})", frame.linear_part().0, frame.translation_part().0, frame.translation_part().1));

    let mut report = SolveReport {
        classification: Classification::Finite,
        solutions: Vec::new(),
        witness: None,
        validation: Some(validation),
        bezout_ceiling: BEZOUT_CEILING,
        tolerances: *tol,
        invalid_reason: None,
        diagnostics: Diagnostics::default(),
    };

    let mut guesses: Vec<((ComplexPoint2, ComplexPoint2), usize)> = Vec::new();
    match build_reduced_system(config) {
        Ok(rs) => {
            diag.reduction = "cramer".into();
            diag.constraint_degrees =
                Some((rs.det_constraint.total_degree().unwrap_or(0), rs.circle_constraint.total_degree().unwrap_or(0)));
            diag.note(format!("pivot {}{}{}, Δ = {}", rs.pivot[0], rs.pivot[1], rs.pivot[2], rs.delta));
            if let Some(g) = detect_positive_dimensional(&rs) {
                report.classification = Classification::PositiveDimensional;
                report.witness = Some(sample_witness(config, None, g, &mut rng, &local_ns));
            } else {
                match common_zeros(&rs.det_constraint, &rs.circle_constraint, &mut rng, &mut diag) {
                    Some(cands) => {
                        diag.candidates = cands.len();
                        for c in cands {
                            let y = ComplexPoint2::new(c.a, c.b);
                            match recover_x_with(config, rs.pivot, &y) {
                                Ok(x) => guesses.push(((x, y), c.multiplicity)),
                                Err(_) => diag.rejected += 1,
                            }
                        }
                    }
                    None => diag.note("no shear produced a usable eliminant"),
                }
            }
        }
        Err(SysError::ZeroDelta) => {
            diag.reduction = "axis".into();
            let ax = build_axis_system(config).expect("all anchors collinear");
            diag.constraint_degrees =
                Some((ax.first.total_degree().unwrap_or(0), ax.second.total_degree().unwrap_or(0)));
            if let Some(g) = detect_positive_dimensional(&ax) {
                report.classification = Classification::PositiveDimensional;
                let curve = ax.to_original(&g).primitive();
                report.witness = Some(sample_witness(config, Some(&ax), curve, &mut rng, &local_ns));
            } else {
                match common_zeros(&ax.first, &ax.second, &mut rng, &mut diag) {
                    Some(cands) => {
                        diag.candidates = cands.len();
                        for c in cands {
                            match axis_lifts(&ax, c.a, c.b) {
                                Ok(pairs) => guesses.extend(pairs.into_iter().map(|g| (g, c.multiplicity))),
                                Err(_) => diag.rejected += 1,
                            }
                        }
                    }
                    None => diag.note("no shear produced a usable eliminant"),
                }
            }
        }
        Err(e) => unreachable!("reduced system construction: {e}"),
    }

    if let Some(w) = report.witness.take() {
        let samples: Vec<_> = w.samples.iter().map(|(x, y)| (back.apply_complex(x), back.apply_complex(y))).collect();
        let max_sample_residual =
            samples.iter().map(|(x, y)| ns.max_residual(&[x.x, x.y, y.x, y.y])).fold(0.0, f64::max);
        report.witness = Some(WitnessCurve { polynomial: pull_back_curve(&w.polynomial, &frame), samples, max_sample_residual });
    }
    if report.classification == Classification::Finite {
        let mut sols: Vec<SolutionPair> = Vec::new();
        for ((x, y), m) in guesses {
            let g = (back.apply_complex(&x), back.apply_complex(&y));
            match polish(&ns, g, tol, m) {
                Some(s) => insert_dedup(&mut sols, s, tol.dedupe),
                None => diag.rejected += 1,
            }
        }
        let mut sols = close_under_swap(sols, tol.dedupe);
        sort_canonical(&mut sols);
        diag.note(format!("{} distinct solutions, {} real", sols.len(), sols.iter().filter(|s| s.is_real).count()));
        if sols.iter().map(|s| s.multiplicity).sum::<usize>() > BEZOUT_CEILING {
            diag.note("solution count exceeds the Bézout ceiling");
        }
        report.solutions = sols;
    }
    report.diagnostics = diag;
    report
}

/// Every `(X, Y)` over a common zero `(y₁, σ)` of an axis system, in input
/// coordinates.
fn axis_lifts(ax: &AxisSystem, y1: Complex64, sigma: Complex64) -> Result<Vec<(ComplexPoint2, ComplexPoint2)>, SysError> {
    let (x1, s) = ax.extend(y1, sigma)?;
    let x2 = (s - x1 * x1).sqrt();
    let y2 = (sigma - y1 * y1).sqrt();
    let back = ax.transform.inverse();
    let mut out = Vec::with_capacity(4);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            let x = back.apply_complex(&ComplexPoint2::new(x1, x2 * sx));
            let y = back.apply_complex(&ComplexPoint2::new(y1, y2 * sy));
            out.push((x, y));
        }
    }
    Ok(out)
}

/// Pairs every solution with its exact swap `(Y, X)`. Of two polished
/// twins the one with the smaller residual is kept and mirrored.
fn close_under_swap(mut sols: Vec<SolutionPair>, radius: f64) -> Vec<SolutionPair> {
    sols.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let mut out: Vec<SolutionPair> = Vec::new();
    for s in sols {
        let scale = 1.0 + s.max_abs();
        if let Some(t) = out.iter_mut().find(|t| t.distance(&s) <= radius * scale) {
            t.multiplicity = t.multiplicity.max(s.multiplicity);
            continue;
        }
        let twin = SolutionPair { x: s.y, y: s.x, ..s };
        let distinct = twin.distance(&s) > radius * scale;
        out.push(s);
        if distinct {
            out.push(twin);
        }
    }
    out
}

fn insert_dedup(sols: &mut Vec<SolutionPair>, s: SolutionPair, radius: f64) {
    let scale = 1.0 + s.max_abs();
    match sols.iter_mut().find(|t| t.distance(&s) <= radius * scale) {
        Some(t) => {
            let m = t.multiplicity.max(s.multiplicity);
            if s.residual < t.residual {
                *t = s;
            }
            t.multiplicity = m;
        }
        None => sols.push(s),
    }
}

/// Lexicographic order on coordinates rounded to eight decimals, ties broken
/// by the exact values.
pub fn sort_canonical(sols: &mut [SolutionPair]) {
    let key = |s: &SolutionPair| -> Vec<i64> {
        s.coords().iter().flat_map(|c| [round_key(c.re), round_key(c.im)]).collect()
    };
    sols.sort_by(|a, b| {
        key(a).cmp(&key(b)).then_with(|| {
            a.coords()
                .iter()
                .zip(b.coords().iter())
                .map(|(u, v)| u.re.total_cmp(&v.re).then(u.im.total_cmp(&v.im)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

fn round_key(v: f64) -> i64 {
    let r = (v * 1e8).round();
    if r == 0.0 {
        0
    } else {
        r as i64
    }
}

/// Samples points on a witness curve over `(y1, y2)` and extends each to a
/// full solution.
fn sample_witness(
    config: &Configuration,
    axis: Option<&AxisSystem>,
    curve: RatMPoly,
    rng: &mut ChaCha8Rng,
    ns: &NumericSystem,
) -> WitnessCurve {
    let samples = witness_points(config, axis, &curve, WITNESS_SAMPLES, rng);
    let max_sample_residual = samples
        .iter()
        .map(|(x, y)| ns.max_residual(&[x.x, x.y, y.x, y.y]))
        .fold(0.0, f64::max);
    WitnessCurve { polynomial: curve, samples, max_sample_residual }
}

/// Up to `n` solutions whose `Y` lies on `curve`.
pub fn witness_points(
    config: &Configuration,
    axis: Option<&AxisSystem>,
    curve: &RatMPoly,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(ComplexPoint2, ComplexPoint2)> {
    let curve = curve.with_vars(&crate::sysbuild::Y_VARS).expect("witness curve over y1, y2");
    let pivot = cramer_pivot(config);
    let (free, solved) = if curve.degree_in(1).unwrap_or(0) > 0 { (0, 1) } else { (1, 0) };
    let coeffs = curve.coefficients_in(solved);
    let mut out = Vec::with_capacity(n);
    for _ in 0..20 * n {
        if out.len() == n {
            break;
        }
        let t = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mut pt = [Complex64::zero(); 2];
        pt[free] = t;
        let c: Vec<Complex64> = coeffs.iter().map(|c| c.eval_complex(&pt)).collect();
        let Ok(roots) = raw_roots(&CPoly::new(c)) else { continue };
        let Some(&s) = roots.first() else { continue };
        pt[solved] = s;
        let y = ComplexPoint2::new(pt[0], pt[1]);
        let x = match (pivot, axis) {
            (Some(pv), _) => recover_x_with(config, pv, &y).ok(),
            (None, Some(ax)) => axis_extend_point(ax, &y).ok(),
            (None, None) => None,
        };
        if let Some(x) = x {
            out.push((x, y));
        }
    }
    out
}

fn axis_extend_point(ax: &AxisSystem, y: &ComplexPoint2) -> Result<ComplexPoint2, SysError> {
    let yn = ax.transform.apply_complex(y);
    let sigma = yn.x * yn.x + yn.y * yn.y;
    let (x1, s) = ax.extend(yn.x, sigma)?;
    let x2 = (s - x1 * x1).sqrt();
    Ok(ax.transform.inverse().apply_complex(&ComplexPoint2::new(x1, x2)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Indices into the report's solution list that fail the check.
    pub failures: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub checks: Vec<CheckResult>,
}

impl CertificateSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Exact complex rational used to re-evaluate residuals without rounding.
#[derive(Clone)]
struct QC {
    re: BigRational,
    im: BigRational,
}

impl QC {
    fn from_c(z: Complex64) -> Self {
        let f = |v: f64| BigRational::from_float(v).unwrap_or_else(BigRational::zero);
        Self { re: f(z.re), im: f(z.im) }
    }
    fn from_rat(r: &BigRational) -> Self {
        Self { re: r.clone(), im: BigRational::zero() }
    }
    fn sub(&self, o: &QC) -> QC {
        QC { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn add(&self, o: &QC) -> QC {
        QC { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn mul(&self, o: &QC) -> QC {
        QC { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn norm(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::INFINITY).hypot(self.im.to_f64().unwrap_or(f64::INFINITY))
    }
}

/// Largest residual of the four equations evaluated exactly at the given
/// floating coordinates.
pub fn exact_residual(config: &Configuration, s: &SolutionPair) -> f64 {
    let z = s.coords().map(QC::from_c);
    Label::ALL
        .iter()
        .map(|&l| {
            let t = config.anchor(l);
            let (t1, t2) = (QC::from_rat(&t.x), QC::from_rat(&t.y));
            let sq = |a: &QC, b: &QC| {
                let (u, v) = (a.sub(&t1), b.sub(&t2));
                u.mul(&u).add(&v.mul(&v))
            };
            let p = sq(&z[0], &z[1]);
            let q = sq(&z[2], &z[3]);
            let k = QC::from_rat(config.k(l));
            k.mul(&p).mul(&q).sub(&p).sub(&q).norm()
        })
        .fold(0.0, f64::max)
}

/// Independent re-checks of a finite report.
pub fn certify(report: &SolveReport, config: &Configuration) -> CertificateSummary {
    let sols = &report.solutions;
    let tol = &report.tolerances;
    let mut checks = Vec::new();
    if report.classification != Classification::Finite {
        checks.push(CheckResult {
            name: "classification".into(),
            passed: false,
            failures: Vec::new(),
            detail: format!("{:?} report has no finite solution list", report.classification),
        });
        return CertificateSummary { checks };
    }
    let close = |a: &[Complex64; 4], b: &[Complex64; 4]| coord_distance(a, b) <= 1e-6 * (1.0 + max_abs(a));
    let closure = |name: &str, map: &dyn Fn(&SolutionPair) -> [Complex64; 4]| {
        let failures: Vec<usize> = (0..sols.len())
            .filter(|&i| {
                let target = map(&sols[i]);
                !sols.iter().any(|s| close(&s.coords(), &target))
            })
            .collect();
        CheckResult {
            name: name.into(),
            passed: failures.is_empty(),
            detail: format!("{} of {} images missing", failures.len(), sols.len()),
            failures,
        }
    };

    let residuals: Vec<f64> = sols.iter().map(|s| exact_residual(config, s)).collect();
    let failures: Vec<usize> = (0..sols.len()).filter(|&i| residuals[i].is_nan() || residuals[i] > tol.accept).collect();
    checks.push(CheckResult {
        name: "residual".into(),
        passed: failures.is_empty(),
        detail: format!("max exact residual {:.3e}", residuals.iter().cloned().fold(0.0, f64::max)),
        failures,
    });
    checks.push(closure("swap_closure", &|s| [s.y.x, s.y.y, s.x.x, s.x.y]));
    checks.push(closure("conjugate_closure", &|s| s.coords().map(|c| c.conj())));

    match build_reduced_system(config) {
        Ok(rs) => {
            let mut cramer_fail = Vec::new();
            let mut det_fail = Vec::new();
            let mut worst = (0.0f64, 0.0f64);
            for (i, s) in sols.iter().enumerate() {
                match recover_x_with(config, rs.pivot, &s.y) {
                    Ok(x) => {
                        let err = x.dist(&s.x) / (1.0 + s.x.max_abs());
                        worst.0 = worst.0.max(err);
                        if err > 1e-6 {
                            cramer_fail.push(i);
                        }
                    }
                    Err(_) => cramer_fail.push(i),
                }
                match rs.det_identity(&s.y) {
                    Ok((d, scale)) => {
                        let rel = d.norm() / scale.max(f64::MIN_POSITIVE);
                        worst.1 = worst.1.max(rel);
                        if rel > 1e-6 {
                            det_fail.push(i);
                        }
                    }
                    Err(_) => det_fail.push(i),
                }
            }
            checks.push(CheckResult {
                name: "cramer_consistency".into(),
                passed: cramer_fail.is_empty(),
                failures: cramer_fail,
                detail: format!("max relative deviation {:.3e}", worst.0),
            });
            checks.push(CheckResult {
                name: "determinant_identity".into(),
                passed: det_fail.is_empty(),
                failures: det_fail,
                detail: format!("max scaled determinant {:.3e}", worst.1),
            });
        }
        Err(_) => {
            for name in ["cramer_consistency", "determinant_identity"] {
                checks.push(CheckResult {
                    name: name.into(),
                    passed: true,
                    failures: Vec::new(),
                    detail: "not applicable: all anchors collinear".into(),
                });
            }
        }
    }
    CertificateSummary { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn square() -> Configuration {
        Configuration::new(
            [(-1, -1), (-1, 1), (1, -1), (1, 1)].map(|(x, y)| Point2::from_ints(x, y)),
            std::array::from_fn(|_| q(11, 10)),
        )
    }

    #[test]
    fn square_has_24_solutions() {
        let rep = solve(&square());
        assert_eq!(rep.classification, Classification::Finite, "{:?}", rep.diagnostics);
        assert_eq!(rep.solutions.len(), 24, "{:?}", rep.diagnostics);
        assert_eq!(rep.real_solutions().count(), 16);
        let cert = certify(&rep, &square());
        assert!(cert.all_passed(), "{cert:?}");
    }

    #[test]
    fn planted_common_factor_is_detected() {
        struct Planted(RatMPoly, RatMPoly, Vec<RatMPoly>);
        impl ConstraintPair for Planted {
            fn constraints(&self) -> (&RatMPoly, &RatMPoly) {
                (&self.0, &self.1)
            }
            fn spurious_factors(&self) -> Vec<&RatMPoly> {
                self.2.iter().collect()
            }
        }
        let rs = build_reduced_system(&square()).unwrap();
        let v = crate::sysbuild::Y_VARS;
        let line = &(&RatMPoly::var(&v, "y1") + &RatMPoly::var(&v, "y2")) - &RatMPoly::one(&v);
        let planted = Planted(&rs.det_constraint * &line, &rs.circle_constraint * &line, rs.cleared_factors.clone());
        assert_eq!(detect_positive_dimensional(&planted), Some(line.primitive()));
        let spurious = &rs.cleared_factors[0];
        let only_spurious =
            Planted(&rs.det_constraint * spurious, &rs.circle_constraint * spurious, rs.cleared_factors.clone());
        assert_eq!(detect_positive_dimensional(&only_spurious), None);
        assert_eq!(detect_positive_dimensional(&rs), None);
    }

    #[test]
    fn perturbed_solution_polishes_back() {
        let r = ((2.0 / 11.0) * (5.0 - 14f64.sqrt())).sqrt();
        let guess = (ComplexPoint2::real(-r + 1e-4, 1e-4), ComplexPoint2::real(r - 1e-4, -1e-4));
        let s = newton_polish(&square(), guess, &ToleranceSettings::default()).unwrap();
        assert!(s.x.dist(&ComplexPoint2::real(-r, 0.0)) < 1e-12);
        assert!(s.y.dist(&ComplexPoint2::real(r, 0.0)) < 1e-12);
        assert!(s.is_real && s.multiplicity == 1);
    }

    #[test]
    fn far_guess_is_rejected_or_lands_on_a_solution() {
        let s = newton_polish(
            &square(),
            (ComplexPoint2::real(40.0, -35.0), ComplexPoint2::real(-60.0, 70.0)),
            &ToleranceSettings { max_newton_iters: 5, ..Default::default() },
        );
        assert!(s.is_none());
    }

    #[test]
    fn certify_flags_planted_defects() {
        let cfg = square();
        let rep = solve(&cfg);
        let mut moved = rep.clone();
        moved.solutions[3].y.x += 0.1;
        let cert = certify(&moved, &cfg);
        assert_eq!(cert.check("residual").unwrap().failures, vec![3]);

        let mut dropped = rep.clone();
        let victim = dropped.solutions[5];
        dropped
            .solutions
            .retain(|s| s.distance(&SolutionPair { x: victim.y, y: victim.x, ..victim }) > 1e-9);
        assert_eq!(dropped.solutions.len(), 23);
        assert!(!certify(&dropped, &cfg).check("swap_closure").unwrap().passed);
    }

    #[test]
    fn collinear_example_is_a_curve() {
        let cfg = crate::catalog::collinear();
        let rep = solve(&cfg);
        assert_eq!(rep.classification, Classification::PositiveDimensional, "{:?}", rep.diagnostics);
        let w = rep.witness.unwrap();
        assert!(w.samples.len() >= 100 && w.max_sample_residual <= 1e-8);
    }

    #[test]
    fn generic_configuration() {
        let cfg = Configuration::new(
            [(0, 0), (3, 1), (-1, 2), (2, -3)].map(|(x, y)| Point2::from_ints(x, y)),
            [q(1, 2), q(3, 4), q(5, 3), q(2, 1)],
        );
        let rep = solve(&cfg);
        assert_eq!(rep.classification, Classification::Finite);
        assert_eq!(rep.solutions.len(), 24);
        assert!(certify(&rep, &cfg).all_passed());
    }

    #[test]
    fn invalid_inputs() {
        let mut cfg = square();
        cfg.k[0] = BigRational::zero();
        let rep = solve(&cfg);
        assert_eq!(rep.classification, Classification::InvalidInput);
        assert!(rep.invalid_reason.unwrap().contains("zero"));
    }
}
