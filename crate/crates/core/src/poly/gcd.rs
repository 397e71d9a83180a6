//! Exact GCD of polynomials in at most two variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::mpoly::RatMPoly;
use super::zpoly::{ZBiPoly, ZPoly};
use super::PolyError;

/// Primitive GCD of two polynomials in at most two variables.
///
/// The result has integer coefficients with unit content and a positive
/// lex-leading coefficient; a constant result means the inputs are coprime.
/// `gcd(0, 0)` is zero.
pub fn mp_gcd(p: &RatMPoly, q: &RatMPoly) -> Result<RatMPoly, PolyError> {
    let (p, q) = p.align(q);
    let vars = p.vars().to_vec();
    let active: Vec<usize> = (0..vars.len())
        .filter(|&i| p.degree_in(i).unwrap_or(0) > 0 || q.degree_in(i).unwrap_or(0) > 0)
        .collect();
    if p.is_zero() && q.is_zero() {
        return Ok(RatMPoly::zero(&vars));
    }
    match active.as_slice() {
        [] => Ok(RatMPoly::one(&vars)),
        [x] => {
            let g = to_zpoly(&p, *x).gcd(&to_zpoly(&q, *x));
            Ok(from_zpoly(&g, *x, &vars))
        }
        [x, y] => {
            let (a, b) = (to_zbi(&p, *y, *x), to_zbi(&q, *y, *x));
            if certainly_coprime(&a, &b) {
                return Ok(RatMPoly::one(&vars));
            }
            let g = a.gcd(&b);
            Ok(from_zbi(&g, *y, *x, &vars))
        }
        _ => Err(PolyError::TooManyVariables(active.len())),
    }
}

/// Cheap exact sufficient test for coprimality: trivial content gcd plus a
/// trivial gcd of the specializations at an integer `x` that keeps both
/// leading coefficients non-zero.
fn certainly_coprime(a: &ZBiPoly, b: &ZBiPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    if a.content().gcd(&b.content()).degree() != Some(0) {
        return false;
    }
    let lca = a.coeffs().last().unwrap();
    let lcb = b.coeffs().last().unwrap();
    for t in [3i64, -5, 7, 11, -13] {
        let t = BigInt::from(t);
        if lca.eval(&t).is_zero() || lcb.eval(&t).is_zero() {
            continue;
        }
        let sa = ZPoly::new(a.coeffs().iter().map(|c| c.eval(&t)).collect());
        let sb = ZPoly::new(b.coeffs().iter().map(|c| c.eval(&t)).collect());
        return sa.gcd(&sb).degree() == Some(0);
    }
    false
}

fn integer_terms(p: &RatMPoly) -> Vec<(Vec<u32>, BigInt)> {
    let l = BigRational::from_integer(p.denominator_lcm());
    p.terms().map(|(e, c)| (e.clone(), (c * &l).to_integer())).collect()
}

fn to_zpoly(p: &RatMPoly, x: usize) -> ZPoly {
    let deg = p.degree_in(x).unwrap_or(0) as usize;
    let mut c = vec![BigInt::zero(); deg + 1];
    for (e, v) in integer_terms(p) {
        c[e[x] as usize] = v;
    }
    ZPoly::new(c)
}

fn from_zpoly(g: &ZPoly, x: usize, vars: &[String]) -> RatMPoly {
    let terms = g.coeffs().iter().enumerate().map(|(k, c)| {
        let mut e = vec![0; vars.len()];
        e[x] = k as u32;
        (e, BigRational::from_integer(c.clone()))
    });
    RatMPoly::from_terms(vars, terms).primitive()
}

fn to_zbi(p: &RatMPoly, y: usize, x: usize) -> ZBiPoly {
    let dy = p.degree_in(y).unwrap_or(0) as usize;
    let dx = p.degree_in(x).unwrap_or(0) as usize;
    let mut grid = vec![vec![BigInt::zero(); dx + 1]; dy + 1];
    for (e, v) in integer_terms(p) {
        grid[e[y] as usize][e[x] as usize] = v;
    }
    ZBiPoly::new(grid.into_iter().map(ZPoly::new).collect())
}

fn from_zbi(g: &ZBiPoly, y: usize, x: usize, vars: &[String]) -> RatMPoly {
    let mut terms = Vec::new();
    for (dy, c) in g.coeffs().iter().enumerate() {
        for (dx, v) in c.coeffs().iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[y] = dy as u32;
            e[x] = dx as u32;
            terms.push((e, BigRational::from_integer(v.clone())));
        }
    }
    RatMPoly::from_terms(vars, terms).primitive()
}
