//! Dense univariate polynomials over the integers, plus the bivariate
//! `Z[x][y]` view used by the GCD.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modular::{gcd_mod, mul_mod, reduce, Crt, PrimeStream};

/// Dense integer polynomial, coefficients stored lowest degree first with
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Self { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Gcd of the coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Exact division over `Z`. `None` when the quotient is not integral or
    /// a remainder is left.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let lcd = d.lc();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qq, r) = top.div_rem(&lcd);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &qq * dc;
            }
            q[k] = qq;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Pseudo-remainder: `lc(d)^k · self mod d` for the number `k` of
    /// elimination steps actually taken.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-remainder by zero");
        let lcd = d.lc();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lcr = r.lc();
            r = r.scale(&lcd).sub(&d.scale(&lcr).shift(rd - dd));
        }
        r
    }

    /// Primitive gcd (positive leading coefficient); `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let a = self.primitive_part();
        let b = other.primitive_part();
        if a.is_constant() || b.is_constant() {
            return Self::constant(BigInt::one());
        }
        a.gcd_modular(&b).unwrap_or_else(|| a.gcd_prs(&b))
    }

    /// Images modulo word-size primes combined by CRT until the candidate
    /// stabilises and divides both inputs.
    fn gcd_modular(&self, other: &Self) -> Option<Self> {
        let scale = self.lc().gcd(&other.lc());
        let mut crt: Option<(Crt, usize)> = None;
        let mut last: Option<Self> = None;
        for p in PrimeStream::new().take(400) {
            if reduce(&self.lc(), p) == 0 || reduce(&other.lc(), p) == 0 {
                continue;
            }
            let ap: Vec<u64> = self.coeffs.iter().map(|c| reduce(c, p)).collect();
            let bp: Vec<u64> = other.coeffs.iter().map(|c| reduce(c, p)).collect();
            let g = gcd_mod(&ap, &bp, p);
            let deg = g.len() - 1;
            if deg == 0 {
                return Some(Self::constant(BigInt::one()));
            }
            let s = reduce(&scale, p);
            let g: Vec<u64> = g.iter().map(|&c| mul_mod(c, s, p)).collect();
            match &mut crt {
                Some((_, d)) if deg > *d => continue,
                Some((acc, d)) if deg == *d => acc.absorb(&g, p),
                _ => {
                    let mut acc = Crt::new(deg + 1);
                    acc.absorb(&g, p);
                    crt = Some((acc, deg));
                    last = None;
                    continue;
                }
            }
            let cand = Self::new(crt.as_ref().expect("accumulator set").0.symmetric()).primitive_part();
            if last.as_ref() == Some(&cand) && self.div_exact(&cand).is_some() && other.div_exact(&cand).is_some() {
                return Some(cand);
            }
            last = Some(cand);
        }
        None
    }

    fn gcd_prs(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return Self::constant(BigInt::one());
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a
    }

    /// Square-free decomposition (Yun). Returns primitive, pairwise coprime
    /// factors of positive degree with their multiplicities.
    pub fn square_free(&self) -> Vec<(ZPoly, usize)> {
        let f = self.primitive_part();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let g = f.gcd(&df);
        let mut c = f.div_exact(&g).expect("gcd divides f");
        let mut d = df.div_exact(&g).expect("gcd divides f'").sub(&c.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            c = c.div_exact(&a).expect("yun step divides c");
            d = d.div_exact(&a).expect("yun step divides d").sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Bit length of the largest coefficient.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Polynomial in a main variable `y` whose coefficients are [`ZPoly`]s in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZBiPoly {
    coeffs: Vec<ZPoly>,
}

impl ZBiPoly {
    pub fn new(mut coeffs: Vec<ZPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ZPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lc(&self) -> &ZPoly {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    /// Gcd in `Z[x]` of all coefficients.
    pub fn content(&self) -> ZPoly {
        let mut g = ZPoly::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    }

    fn map(&self, f: impl Fn(&ZPoly) -> ZPoly) -> Self {
        Self::new(self.coeffs.iter().map(f).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = ZPoly::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero).sub(other.coeffs.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    fn shift(&self, k: usize) -> Self {
        let mut out = vec![ZPoly::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Self::new(out)
    }

    /// Divides every coefficient exactly by `d`.
    pub fn div_coeffs(&self, d: &ZPoly) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.div_exact(d)?);
        }
        Some(Self::new(out))
    }

    pub fn scale(&self, c: &ZPoly) -> Self {
        self.map(|a| a.mul(c))
    }

    /// Primitive part with respect to `y`: content removed, leading
    /// coefficient normalized to a positive leading integer.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let mut p = self.div_coeffs(&c).expect("content divides every coefficient");
        if p.lc().lc().is_negative() {
            p = p.map(|a| a.neg());
        }
        p
    }

    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-remainder by zero");
        let lcd = d.lc().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lcr = r.lc().clone();
            r = r.scale(&lcd).sub(&d.scale(&lcr).shift(rd - dd));
        }
        r
    }

    /// Gcd in `Z[x][y]` via the primitive polynomial remainder sequence.
    /// The result is primitive over `Z` with a positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part_full();
        }
        if other.is_zero() {
            return self.primitive_part_full();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                a = Self::new(vec![ZPoly::constant(BigInt::one())]);
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.scale(&content).primitive_part_full()
    }

    /// Removes the integer content only, sign-normalized.
    fn primitive_part_full(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&c.content()));
        let g = if self.lc().lc().is_negative() { -g } else { g };
        self.map(|c| ZPoly::new(c.coeffs().iter().map(|x| x / &g).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn gcd_of_planted_factor() {
        let g = zp(&[-2, 1]); // x - 2
        let a = zp(&[1, 0, 1]).mul(&g);
        let b = zp(&[3, 5]).mul(&g).scale(&BigInt::from(6));
        assert_eq!(a.gcd(&b), g);
        assert_eq!(zp(&[1, 0, 1]).gcd(&zp(&[1, 1])), zp(&[1]));
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)^3 (x+2)^2 (x^2+1)
        let f = zp(&[-1, 1]).mul(&zp(&[-1, 1])).mul(&zp(&[-1, 1]));
        let f = f.mul(&zp(&[2, 1])).mul(&zp(&[2, 1])).mul(&zp(&[1, 0, 1])).scale(&BigInt::from(-4));
        let sf = f.square_free();
        assert_eq!(sf, vec![(zp(&[1, 0, 1]), 1), (zp(&[2, 1]), 2), (zp(&[-1, 1]), 3)]);
    }

    #[test]
    fn exact_division() {
        let a = zp(&[1, 2, 1]);
        assert_eq!(a.div_exact(&zp(&[1, 1])), Some(zp(&[1, 1])));
        assert_eq!(a.div_exact(&zp(&[1, 2])), None);
        assert_eq!(zp(&[2, 4]).div_exact(&zp(&[1, 2])), Some(zp(&[2])));
    }

    #[test]
    fn bivariate_gcd() {
        // coefficient lists are in y; inner lists in x.
        let g = ZBiPoly::new(vec![zp(&[1, 1]), zp(&[0, 2]), zp(&[1])]); // y^2 + 2xy + x + 1
        let f1 = ZBiPoly::new(vec![zp(&[0, 0, 1]), zp(&[]), zp(&[1])]); // y^2 + x^2
        let f2 = ZBiPoly::new(vec![zp(&[3]), zp(&[0, 1])]); // x y + 3
        let a = mul_bi(&g, &f1);
        let b = mul_bi(&g, &f2);
        assert_eq!(a.gcd(&b), g);
        assert_eq!(f1.gcd(&f2), ZBiPoly::new(vec![zp(&[1])]));
    }

    fn mul_bi(a: &ZBiPoly, b: &ZBiPoly) -> ZBiPoly {
        let mut out = vec![ZPoly::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        ZBiPoly::new(out)
    }
}
