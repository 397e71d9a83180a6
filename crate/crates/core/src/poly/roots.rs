//! Complex univariate root finding: Aberth–Ehrlich simultaneous iteration
//! seeded from the Newton polygon, followed by Newton polishing.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::zpoly::ZPoly;
use super::PolyError;

/// Polynomial with complex floating coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

/// A root with its multiplicity after clustering.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

const MAX_ABERTH_ITERS: usize = 600;
const POLISH_ITERS: usize = 8;

impl CPoly {
    /// Trailing (leading-degree) exact zeros are dropped.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::zero(); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Coefficients divided by the leading one.
    pub fn monic(&self) -> Self {
        let lc = *self.coeffs.last().expect("monic of zero polynomial");
        Self::new(self.coeffs.iter().map(|&c| c / lc).collect())
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// All complex roots of `p`, polished by Newton iteration and clustered:
/// roots within `1e-6·(1+|z|)` of each other are merged with summed
/// multiplicity.
pub fn univariate_roots(p: &CPoly) -> Result<Vec<Root>, PolyError> {
    let raw = raw_roots(p)?;
    Ok(cluster(&raw, 1e-6))
}

/// Roots without clustering, one entry per root counted with multiplicity.
pub fn raw_roots(p: &CPoly) -> Result<Vec<Complex64>, PolyError> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(PolyError::ConstantPolynomial),
    };
    let lc = p.coeffs[deg].norm();
    let scale = p.max_abs();
    if lc.is_nan() || scale.is_nan() || lc <= 1e-14 * scale {
        return Err(PolyError::IllConditionedLeading);
    }
    // Exact zero roots are split off; Aberth dislikes them.
    let zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced = CPoly::new(p.coeffs[zeros..].to_vec());
    let mut roots = vec![Complex64::zero(); zeros];
    if reduced.degree().unwrap_or(0) > 0 {
        let mut z = aberth(&reduced);
        for r in z.iter_mut() {
            *r = newton_polish(&reduced, *r);
        }
        roots.extend(z);
    }
    Ok(roots)
}

/// Merges roots closer than `tol·(1+|z|)`; result sorted by (re, im).
pub fn cluster(roots: &[Complex64], tol: f64) -> Vec<Root> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        match groups
            .iter_mut()
            .find(|(c, n)| ((*c / *n as f64) - r).norm() <= tol * (1.0 + r.norm()))
        {
            Some((sum, n)) => {
                *sum += r;
                *n += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    let mut out: Vec<Root> = groups
        .into_iter()
        .map(|(s, n)| Root { value: s / n as f64, multiplicity: n })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

fn newton_polish(p: &CPoly, mut z: Complex64) -> Complex64 {
    let (mut v, _) = p.eval_with_derivative(z);
    for _ in 0..POLISH_ITERS {
        let (pv, dp) = p.eval_with_derivative(z);
        if dp.is_zero() || pv.is_zero() {
            break;
        }
        let cand = z - pv / dp;
        let nv = p.eval(cand);
        if nv.norm().partial_cmp(&v.norm()) != Some(std::cmp::Ordering::Less) {
            break;
        }
        z = cand;
        v = nv;
    }
    z
}

/// Initial approximations on circles whose radii come from the upper convex
/// hull of `(i, log|a_i|)`.
fn initial_guesses(p: &CPoly) -> Vec<Complex64> {
    let n = p.coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (i1, l1) = hull[hull.len() - 2];
            let (i2, l2) = hull[hull.len() - 1];
            let cross = (i2 as f64 - i1 as f64) * (pt.1 - l1) - (l2 - l1) * (pt.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(n);
    let offset = 0.4;
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let k = j - i;
        let radius = ((li - lj) / k as f64).exp();
        for m in 0..k {
            let angle = 2.0 * PI * (m as f64) / (k as f64) + offset + 0.7 * i as f64 / n as f64;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn aberth(p: &CPoly) -> Vec<Complex64> {
    let n = p.coeffs.len() - 1;
    if n == 1 {
        return vec![-p.coeffs[0] / p.coeffs[1]];
    }
    let mut z = initial_guesses(p);
    debug_assert_eq!(z.len(), n);
    let mut done = vec![false; n];
    for _ in 0..MAX_ABERTH_ITERS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dp) = p.eval_with_derivative(z[k]);
            if pv.is_zero() {
                done[k] = true;
                continue;
            }
            let ratio = pv / dp;
            let mut sum = Complex64::zero();
            for j in 0..n {
                if j != k {
                    sum += (z[k] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[k] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Converts an exact integer polynomial to floating form with the variable
/// rescaled by a power of two, so that huge or tiny coefficient ranges stay
/// representable. Returns the scaled polynomial `q(w) = p(2^s w)/norm` and `s`.
pub fn scaled_cpoly(p: &ZPoly) -> (CPoly, i64) {
    let coeffs = p.coeffs();
    let n = coeffs.len() - 1;
    // log2 magnitudes of the non-zero coefficients.
    let logs: Vec<Option<f64>> = coeffs.iter().map(log2_abs).collect();
    let lo = logs.iter().position(Option::is_some).expect("non-zero polynomial");
    let shift = if n > lo {
        let l0 = logs[lo].unwrap();
        let ln = logs[n].unwrap();
        ((l0 - ln) / (n - lo) as f64).round() as i64
    } else {
        0
    };
    let scaled: Vec<Option<f64>> = logs
        .iter()
        .enumerate()
        .map(|(i, l)| l.map(|l| l + (shift * i as i64) as f64))
        .collect();
    let top = scaled.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
    let out = coeffs
        .iter()
        .zip(&scaled)
        .map(|(c, l)| match l {
            None => Complex64::zero(),
            Some(l) => {
                let e = l - top;
                if e < -1070.0 {
                    Complex64::zero()
                } else {
                    let sign = if c.sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
                    Complex64::new(sign * e.exp2(), 0.0)
                }
            }
        })
        .collect();
    (CPoly::new(out), shift)
}

/// `log2 |c|` with about 53 bits of accuracy, `None` for zero.
fn log2_abs(c: &BigInt) -> Option<f64> {
    if c.is_zero() {
        return None;
    }
    let bits = c.bits();
    let keep = 60u64;
    if bits <= keep {
        return Some(c.to_f64().unwrap().abs().log2());
    }
    let top = (c.magnitude() >> (bits - keep) as usize).to_f64().unwrap();
    Some(top.log2() + (bits - keep) as f64)
}

/// Complex roots of an exact integer polynomial, each refined by Newton
/// steps on a rescaled floating image.
pub fn zpoly_roots(p: &ZPoly) -> Result<Vec<Complex64>, PolyError> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(PolyError::ConstantPolynomial);
    }
    let (q, shift) = scaled_cpoly(p);
    let scale = (shift as f64).exp2();
    Ok(raw_roots(&q)?.into_iter().map(|w| w * scale).collect())
}
