//! Sylvester resultants.
//!
//! Two routes compute the same determinant. [`resultant_bareiss`] runs
//! fraction-free Bareiss elimination on the Sylvester matrix with
//! polynomial entries and works for any number of remaining variables.
//! When exactly one variable remains, [`resultant`] instead evaluates the
//! Sylvester determinant at integer points modulo a stream of word-size
//! primes, interpolates, and lifts the coefficients by Chinese remaindering
//! under a rigorous coefficient bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modular::{self, Crt, PrimeStream};
use super::mpoly::RatMPoly;
use super::zpoly::ZPoly;
use super::PolyError;

/// Resultant of `p` and `q` with respect to `var`.
///
/// The result is expressed over the remaining variables of the aligned
/// pair. Both inputs must have positive degree in `var`.
pub fn resultant(p: &RatMPoly, q: &RatMPoly, var: &str) -> Result<RatMPoly, PolyError> {
    let (p, q, idx) = prepare(p, q, var)?;
    let others: Vec<usize> = (0..p.vars().len())
        .filter(|&i| i != idx)
        .filter(|&i| p.degree_in(i).unwrap_or(0) > 0 || q.degree_in(i).unwrap_or(0) > 0)
        .collect();
    match others.as_slice() {
        [x] => Ok(resultant_modular(&p, &q, idx, *x)),
        _ => resultant_bareiss_prepared(&p, &q, idx),
    }
}

/// Resultant via Bareiss elimination over the polynomial ring of the
/// remaining variables.
pub fn resultant_bareiss(p: &RatMPoly, q: &RatMPoly, var: &str) -> Result<RatMPoly, PolyError> {
    let (p, q, idx) = prepare(p, q, var)?;
    resultant_bareiss_prepared(&p, &q, idx)
}

fn prepare(p: &RatMPoly, q: &RatMPoly, var: &str) -> Result<(RatMPoly, RatMPoly, usize), PolyError> {
    let (p, q) = p.align(q);
    let idx = p
        .index_of(var)
        .ok_or_else(|| PolyError::DegenerateDegree(var.to_string()))?;
    if p.degree_in(idx).unwrap_or(0) == 0 || q.degree_in(idx).unwrap_or(0) == 0 {
        return Err(PolyError::DegenerateDegree(var.to_string()));
    }
    Ok((p, q, idx))
}

fn remaining_vars(p: &RatMPoly, idx: usize) -> Vec<String> {
    p.vars()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, v)| v.clone())
        .collect()
}

fn resultant_bareiss_prepared(p: &RatMPoly, q: &RatMPoly, idx: usize) -> Result<RatMPoly, PolyError> {
    let out_vars = remaining_vars(p, idx);
    let to_out = |c: &RatMPoly| c.with_vars(&out_vars).expect("coefficient free of eliminated variable");
    let pc: Vec<RatMPoly> = p.coefficients_in(idx).iter().map(to_out).collect();
    let qc: Vec<RatMPoly> = q.coefficients_in(idx).iter().map(to_out).collect();
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let zero = RatMPoly::zero(&out_vars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (j, c) in pc.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in qc.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat, &out_vars))
}

/// Fraction-free determinant over `Q[vars]`.
pub fn bareiss_det(mut mat: Vec<Vec<RatMPoly>>, vars: &[String]) -> RatMPoly {
    let n = mat.len();
    if n == 0 {
        return RatMPoly::one(vars);
    }
    let mut negate = false;
    let mut prev = RatMPoly::one(vars);
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(i, k);
                    negate = !negate;
                }
                None => return RatMPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = RatMPoly::zero(vars);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Splits `p` into integer coefficient polynomials in `x` indexed by the
/// degree in `y`, after multiplying by the lcm of its denominators.
fn integer_slices(p: &RatMPoly, y: usize, x: usize) -> (Vec<ZPoly>, BigInt) {
    let l = p.denominator_lcm();
    let lr = BigRational::from_integer(l.clone());
    let m = p.degree_in(y).unwrap_or(0) as usize;
    let dx = p.degree_in(x).unwrap_or(0) as usize;
    let mut slices = vec![vec![BigInt::zero(); dx + 1]; m + 1];
    for (e, c) in p.terms() {
        let v = c * &lr;
        debug_assert!(v.is_integer());
        slices[e[y] as usize][e[x] as usize] = v.to_integer();
    }
    (slices.into_iter().map(ZPoly::new).collect(), l)
}

fn resultant_modular(p: &RatMPoly, q: &RatMPoly, y: usize, x: usize) -> RatMPoly {
    let (ps, lp) = integer_slices(p, y, x);
    let (qs, lq) = integer_slices(q, y, x);
    let m = ps.len() - 1;
    let n = qs.len() - 1;
    let dxp = p.degree_in(x).unwrap_or(0) as usize;
    let dxq = q.degree_in(x).unwrap_or(0) as usize;
    let row_bound = n * dxp + m * dxq;
    let tot_bound = (p.total_degree().unwrap_or(0) * q.total_degree().unwrap_or(0)) as usize;
    let deg_bound = row_bound.min(tot_bound);
    let npts = deg_bound + 1;

    // |coeff(Res)| <= ||P||_1^n ||Q||_1^m.
    let l1p: BigInt = ps.iter().map(ZPoly::l1_norm).sum();
    let l1q: BigInt = qs.iter().map(ZPoly::l1_norm).sum();
    let need_bits = n as u64 * modular::bit_length(&l1p) + m as u64 * modular::bit_length(&l1q) + 2;

    let xs: Vec<u64> = (0..npts as u64).collect();
    let mut crt = Crt::new(npts);
    for prime in PrimeStream::new() {
        let pr: Vec<Vec<u64>> = ps
            .iter()
            .map(|z| z.coeffs().iter().map(|c| modular::reduce(c, prime)).collect())
            .collect();
        let qr: Vec<Vec<u64>> = qs
            .iter()
            .map(|z| z.coeffs().iter().map(|c| modular::reduce(c, prime)).collect())
            .collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&xv| {
                let a: Vec<u64> = pr.iter().map(|c| modular::eval_mod(c, xv, prime)).collect();
                let b: Vec<u64> = qr.iter().map(|c| modular::eval_mod(c, xv, prime)).collect();
                modular::resultant_mod(&a, &b, prime)
            })
            .collect();
        let coeffs = modular::interpolate_mod(&xs, &ys, prime);
        crt.absorb(&coeffs, prime);
        if crt.modulus().bits() > need_bits {
            break;
        }
    }

    // Res(lp·p, lq·q) = lp^n lq^m Res(p, q).
    let scale = BigRational::new(
        BigInt::one(),
        num_traits::pow(lp, n) * num_traits::pow(lq, m),
    );
    let out_vars = remaining_vars(p, y);
    let xname = &p.vars()[x];
    let xi = out_vars.iter().position(|v| v == xname).expect("x among remaining variables");
    let terms = crt.symmetric().into_iter().enumerate().map(|(k, c)| {
        let mut e = vec![0u32; out_vars.len()];
        e[xi] = k as u32;
        (e, BigRational::from_integer(c) * &scale)
    });
    RatMPoly::from_terms(&out_vars, terms)
}
