//! Word-size prime field arithmetic for the evaluation/interpolation
//! resultant.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // Deterministic for all 64-bit n.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending sequence of primes below 2^62.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        Self { next: (1u64 << 62) - 1 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let c = self.next;
            self.next -= 2;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

pub fn reduce(c: &BigInt, p: u64) -> u64 {
    let m = c.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits in u64")
}

/// Evaluates a polynomial (lowest degree first) at `x` modulo `p`.
pub fn eval_mod(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Resultant of `a` and `b` over `F_p` taken with formal degrees
/// `a.len() - 1` and `b.len() - 1` (Sylvester convention, `a` rows first).
pub fn resultant_mod(a: &[u64], b: &[u64], p: u64) -> u64 {
    let m = a.len().saturating_sub(1);
    let n = b.len().saturating_sub(1);
    let lead_ok = a.last().is_some_and(|&c| c != 0) && b.last().is_some_and(|&c| c != 0);
    if lead_ok {
        resultant_euclid(a.to_vec(), b.to_vec(), p)
    } else {
        sylvester_det_mod(a, b, m, n, p)
    }
}

fn resultant_euclid(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> u64 {
    let mut acc = 1u64;
    loop {
        let m = a.len() - 1;
        let n = b.len() - 1;
        if n == 0 {
            return mul_mod(acc, pow_mod(b[0], m as u64, p), p);
        }
        if m == 0 {
            return mul_mod(acc, pow_mod(a[0], n as u64, p), p);
        }
        if m < n {
            if (m * n) % 2 == 1 {
                acc = sub_mod(0, acc, p);
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // Res(a, b) = (-1)^{mn} Res(b, a) and Res(b, a) = lc(b)^{m - deg r} Res(b, r).
        let mut r = a.clone();
        let inv_lc = inv_mod(b[n], p);
        for k in (0..=m - n).rev() {
            let q = mul_mod(r[k + n], inv_lc, p);
            if q != 0 {
                for j in 0..=n {
                    r[k + j] = sub_mod(r[k + j], mul_mod(q, b[j], p), p);
                }
            }
        }
        trim(&mut r);
        if r.is_empty() {
            return 0;
        }
        let k = r.len() - 1;
        if (m * n) % 2 == 1 {
            acc = sub_mod(0, acc, p);
        }
        acc = mul_mod(acc, pow_mod(b[n], (m - k) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Monic gcd over `F_p` (lowest degree first); empty when both inputs are zero.
pub fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let n = b.len() - 1;
        let inv_lc = inv_mod(b[n], p);
        while a.len() > n {
            let k = a.len() - 1 - n;
            let q = mul_mod(a[k + n], inv_lc, p);
            for j in 0..=n {
                a[k + j] = sub_mod(a[k + j], mul_mod(q, b[j], p), p);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        for c in &mut a {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

/// Determinant of the `(m+n)`-square Sylvester matrix modulo `p`.
pub fn sylvester_det_mod(a: &[u64], b: &[u64], m: usize, n: usize, p: u64) -> u64 {
    let size = m + n;
    if size == 0 {
        return 1;
    }
    let mut mat = vec![vec![0u64; size]; size];
    for i in 0..n {
        for (j, &c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c;
        }
    }
    for i in 0..m {
        for (j, &c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c;
        }
    }
    det_mod(mat, p)
}

#[allow(clippy::needless_range_loop)]
pub fn det_mod(mut mat: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = mat.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| mat[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            mat.swap(piv, k);
            det = sub_mod(0, det, p);
        }
        det = mul_mod(det, mat[k][k], p);
        let inv = inv_mod(mat[k][k], p);
        for i in k + 1..n {
            let f = mul_mod(mat[i][k], inv, p);
            if f == 0 {
                continue;
            }
            for j in k..n {
                mat[i][j] = sub_mod(mat[i][j], mul_mod(f, mat[k][j], p), p);
            }
        }
    }
    det
}

/// Coefficients (lowest first, length `xs.len()`) of the unique polynomial of
/// degree `< xs.len()` through `(xs[i], ys[i])` over `F_p`.
pub fn interpolate_mod(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences.
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub_mod(dd[i], dd[i - 1], p);
            let den = sub_mod(xs[i], xs[i - j], p);
            dd[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    // Expand the Newton form by Horner.
    let mut coeffs = vec![0u64; n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut shifted = vec![0u64; n];
        for k in 0..n {
            if coeffs[k] == 0 {
                continue;
            }
            if k + 1 < n {
                shifted[k + 1] = add_mod(shifted[k + 1], coeffs[k], p);
            }
            shifted[k] = sub_mod(shifted[k], mul_mod(coeffs[k], xs[i], p), p);
        }
        shifted[0] = add_mod(shifted[0], dd[i], p);
        coeffs = shifted;
    }
    coeffs
}

/// Incremental Chinese remaindering of a vector of residues into symmetric
/// integer representatives.
pub struct Crt {
    values: Vec<BigInt>,
    modulus: BigInt,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Self { values: vec![BigInt::zero(); len], modulus: BigInt::one() }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn absorb(&mut self, residues: &[u64], p: u64) {
        let bp = BigInt::from(p);
        let m_mod_p = reduce(&self.modulus, p);
        let inv = inv_mod(m_mod_p, p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = reduce(v, p);
            let t = mul_mod(sub_mod(r, cur, p), inv, p);
            *v += &self.modulus * BigInt::from(t);
        }
        self.modulus *= bp;
    }

    /// Values mapped into `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values
            .iter()
            .map(|v| {
                let v = v.mod_floor(&self.modulus);
                if v > half {
                    v - &self.modulus
                } else {
                    v
                }
            })
            .collect()
    }
}

/// `floor(log2(|x|)) + 1`, zero for zero.
pub fn bit_length(x: &BigInt) -> u64 {
    if x.sign() == Sign::NoSign {
        0
    } else {
        x.bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = PrimeStream::new().take(3).collect();
        assert!(ps.iter().all(|&p| p > 1 << 61));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(is_prime(P));
        assert!(!is_prime(561));
    }

    #[test]
    fn euclid_agrees_with_sylvester() {
        // (x-1)(x-2) and (x-3): resultant = (1-3)(2-3) = 2
        let a = [2, P - 3, 1];
        let b = [P - 3, 1];
        assert_eq!(resultant_mod(&a, &b, P), 2);
        assert_eq!(sylvester_det_mod(&a, &b, 2, 1, P), 2);
        let c = [5, 0, 7, 1];
        let d = [3, 4, 9];
        assert_eq!(resultant_euclid(c.to_vec(), d.to_vec(), P), sylvester_det_mod(&c, &d, 3, 2, P));
        assert_eq!(resultant_euclid(d.to_vec(), c.to_vec(), P), sylvester_det_mod(&d, &c, 2, 3, P));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let poly = [3u64, 0, 5, 11];
        let xs: Vec<u64> = (0..6).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| eval_mod(&poly, x, P)).collect();
        let c = interpolate_mod(&xs, &ys, P);
        assert_eq!(&c[..4], &poly);
        assert!(c[4..].iter().all(|&x| x == 0));
    }

    #[test]
    fn crt_symmetric_reconstruction() {
        let target = [BigInt::from(-123456789012345678i64) * BigInt::from(98765i64), BigInt::from(42)];
        let mut crt = Crt::new(2);
        for p in PrimeStream::new().take(3) {
            let r: Vec<u64> = target.iter().map(|t| reduce(t, p)).collect();
            crt.absorb(&r, p);
        }
        assert_eq!(crt.symmetric(), target.to_vec());
    }
}
