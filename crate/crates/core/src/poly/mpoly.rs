//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Maximum number of variables a [`RatMPoly`] may carry.
pub const MAX_VARS: usize = 4;

/// Exponent vector, one entry per variable of the owning polynomial.
pub type Exponents = Vec<u32>;

/// Multivariate polynomial over the rationals.
///
/// Terms are kept in a map keyed by exponent vector, ordered
/// lexicographically with the first variable most significant, so the last
/// entry is the lex-leading term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, BigRational>,
}

impl RatMPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        assert!(vars.len() <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, BigRational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Self {
        let mut p = Self::zero(vars);
        let idx = p.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.terms.insert(e, BigRational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<S, I>(vars: &[S], terms: I) -> Self
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// True when the polynomial has no term of positive degree.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&d| d == 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the variable at `idx`, `None` for the zero polynomial.
    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[idx]).max()
    }

    pub fn degree_in_var(&self, name: &str) -> Option<u32> {
        match self.index_of(name) {
            Some(i) => self.degree_in(i),
            None => self.total_degree().map(|_| 0),
        }
    }

    /// Lex-leading term.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Sum of the terms of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == deg)
            .map(|(e, c)| (e.clone(), c.clone()));
        Self::from_terms(&self.vars, terms)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that actually occurs.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<Self, PolyError> {
        let target: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        if target.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(target.len()));
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.degree_in(i).unwrap_or(0) > 0 {
                        return Err(PolyError::VariableMismatch(v.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = Self::zero(&target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &d) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = d;
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Brings two polynomials onto a common variable ordering: the
    /// variables of `self` followed by those of `other` not already present.
    pub fn align(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let a = self.with_vars(&vars).expect("alignment keeps every variable");
        let b = other.with_vars(&vars).expect("alignment keeps every variable");
        (a, b)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates at a complex point given in variable order.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut m = Complex64::new(rat_to_f64(c), 0.0);
            for (z, &d) in point.iter().zip(e) {
                if d > 0 {
                    m *= z.powu(d);
                }
            }
            acc += m;
        }
        acc
    }

    /// Sum of |coefficient|·|monomial| at the point: the natural scale
    /// against which to judge a residual from [`Self::eval_complex`].
    pub fn eval_abs_scale(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = rat_to_f64(c).abs();
                for (z, &d) in point.iter().zip(e) {
                    m *= z.norm().powi(d as i32);
                }
                m
            })
            .sum()
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (z, &d) in point.iter().zip(e) {
                if d > 0 {
                    m *= num_traits::pow(z.clone(), d as usize);
                }
            }
            acc += m;
        }
        acc
    }

    /// Replaces the variable at `idx` by `value`, keeping the variable list.
    pub fn substitute(&self, idx: usize, value: &Self) -> Self {
        let value = value.with_vars(&self.vars).expect("substituted value must use the same variables");
        let max_deg = self.degree_in(idx).unwrap_or(0);
        let mut powers = vec![Self::one(&self.vars)];
        for d in 1..=max_deg as usize {
            let next = &powers[d - 1] * &value;
            powers.push(next);
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = rest[idx] as usize;
            rest[idx] = 0;
            let mono = Self::from_terms(&self.vars, [(rest, c.clone())]);
            out += &(&mono * &powers[d]);
        }
        out
    }

    /// Substitutes every variable simultaneously. `values[i]` replaces
    /// variable `i`; all values must share one variable list, which becomes
    /// the variable list of the result.
    pub fn compose(&self, values: &[Self]) -> Self {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        let target = match values.first() {
            Some(v) => v.vars.clone(),
            None => return self.clone(),
        };
        let mut pow_cache: Vec<Vec<Self>> = values.iter().map(|v| vec![Self::one(&target), v.clone()]).collect();
        let mut out = Self::zero(&target);
        for (e, c) in &self.terms {
            let mut m = Self::constant(&target, c.clone());
            for (i, &d) in e.iter().enumerate() {
                let d = d as usize;
                while pow_cache[i].len() <= d {
                    let next = pow_cache[i].last().unwrap() * &values[i];
                    pow_cache[i].push(next);
                }
                if d > 0 {
                    m = &m * &pow_cache[i][d];
                }
            }
            out += &m;
        }
        out
    }

    /// Coefficients with respect to the variable at `idx`: entry `d` holds the
    /// coefficient of `var^d`, expressed over the same variable list.
    pub fn coefficients_in(&self, idx: usize) -> Vec<Self> {
        let deg = self.degree_in(idx).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.vars); deg + 1];
        for (e, c) in &self.terms {
            let d = e[idx] as usize;
            let mut rest = e.clone();
            rest[idx] = 0;
            out[d].terms.insert(rest, c.clone());
        }
        out
    }

    /// Partial derivative with respect to the variable at `idx`.
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] > 0 {
                let mut d = e.clone();
                d[idx] -= 1;
                out.add_term(d, c * BigRational::from_integer(e[idx].into()));
            }
        }
        out
    }

    /// Exact multivariate division. Returns `None` when `divisor` does not
    /// divide `self` over the rationals.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (a, b) = self.align(divisor);
        if b.is_zero() {
            return None;
        }
        let (lead_e, lead_c) = b.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = a.clone();
        let mut quot = Self::zero(&a.vars);
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).any(|(x, y)| x < y) {
                return None;
            }
            let qe: Exponents = e.iter().zip(&lead_e).map(|(x, y)| x - y).collect();
            let qc = c / &lead_c;
            let mono = Self::from_terms(&a.vars, [(qe, qc)]);
            rem -= &(&mono * &b);
            quot += &mono;
        }
        Some(quot)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer-coefficient associate with unit content and positive
    /// lex-leading coefficient. Zero maps to zero.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = BigRational::from_integer(self.denominator_lcm());
        let scaled = self.scale(&l);
        let g = scaled.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut factor = BigRational::new(BigInt::one(), g);
        if scaled.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            factor = -factor;
        }
        scaled.scale(&factor)
    }

    /// Largest coefficient magnitude, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| rat_to_f64(c).abs()).fold(0.0, f64::max)
    }
}

/// Converts a rational to the nearest `f64` (saturating to ±inf).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl AddAssign<&RatMPoly> for RatMPoly {
    fn add_assign(&mut self, rhs: &RatMPoly) {
        if self.vars == rhs.vars {
            for (e, c) in &rhs.terms {
                self.add_term(e.clone(), c.clone());
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&RatMPoly> for RatMPoly {
    fn sub_assign(&mut self, rhs: &RatMPoly) {
        if self.vars == rhs.vars {
            for (e, c) in &rhs.terms {
                self.add_term(e.clone(), -c.clone());
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl Add for RatMPoly {
    type Output = RatMPoly;
    fn add(mut self, rhs: RatMPoly) -> RatMPoly {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a RatMPoly> for &'a RatMPoly {
    type Output = RatMPoly;
    fn add(self, rhs: &RatMPoly) -> RatMPoly {
        let (mut a, b) = self.align(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Add<&RatMPoly> for RatMPoly {
    type Output = RatMPoly;
    fn add(mut self, rhs: &RatMPoly) -> RatMPoly {
        self += rhs;
        self
    }
}

impl Neg for RatMPoly {
    type Output = RatMPoly;
    fn neg(mut self) -> RatMPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &RatMPoly {
    type Output = RatMPoly;
    fn neg(self) -> RatMPoly {
        -self.clone()
    }
}

impl Sub for RatMPoly {
    type Output = RatMPoly;
    fn sub(mut self, rhs: RatMPoly) -> RatMPoly {
        self -= &rhs;
        self
    }
}

impl<'a> Sub<&'a RatMPoly> for &'a RatMPoly {
    type Output = RatMPoly;
    fn sub(self, rhs: &RatMPoly) -> RatMPoly {
        let (mut a, b) = self.align(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl Sub<&RatMPoly> for RatMPoly {
    type Output = RatMPoly;
    fn sub(mut self, rhs: &RatMPoly) -> RatMPoly {
        self -= rhs;
        self
    }
}

impl Mul for RatMPoly {
    type Output = RatMPoly;
    fn mul(self, rhs: RatMPoly) -> RatMPoly {
        &self * &rhs
    }
}

impl<'a> Mul<&'a RatMPoly> for &'a RatMPoly {
    type Output = RatMPoly;
    fn mul(self, rhs: &RatMPoly) -> RatMPoly {
        if self.vars != rhs.vars {
            let (a, b) = self.align(rhs);
            return &a * &b;
        }
        let mut out = RatMPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul<&RatMPoly> for RatMPoly {
    type Output = RatMPoly;
    fn mul(self, rhs: &RatMPoly) -> RatMPoly {
        &self * rhs
    }
}

impl fmt::Display for RatMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let is_const = e.iter().all(|&d| d == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut sep = "";
            for (v, &d) in self.vars.iter().zip(e) {
                match d {
                    0 => {}
                    1 => {
                        write!(f, "{sep}{v}")?;
                        sep = "*";
                    }
                    _ => {
                        write!(f, "{sep}{v}^{d}")?;
                        sep = "*";
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMPoly[{}]({self})", self.vars.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    const XY: [&str; 2] = ["y1", "y2"];

    #[test]
    fn difference_of_squares() {
        let y = RatMPoly::var(&XY, "y1");
        let one = RatMPoly::one(&XY);
        let p = &(&y + &one) * &(&y - &one);
        let expected = RatMPoly::from_terms(&XY, [(vec![2, 0], r(1)), (vec![0, 0], r(-1))]);
        assert_eq!(p, expected);
    }

    #[test]
    fn additive_identity() {
        let p = RatMPoly::from_terms(&XY, [(vec![3, 1], r(5)), (vec![0, 2], r(-2))]);
        assert_eq!(&p + &RatMPoly::zero(&XY), p);
    }

    #[test]
    fn binomial_square() {
        let s = RatMPoly::var(&XY, "y1") + RatMPoly::var(&XY, "y2");
        let expected =
            RatMPoly::from_terms(&XY, [(vec![2, 0], r(1)), (vec![1, 1], r(2)), (vec![0, 2], r(1))]);
        assert_eq!(s.pow(2), expected);
    }

    #[test]
    fn alignment_by_symbol_name() {
        let a = RatMPoly::var(&["x"], "x");
        let b = RatMPoly::var(&["y"], "y");
        let s = &a * &b;
        assert_eq!(s.vars(), ["x", "y"]);
        assert_eq!(s.coeff(&[1, 1]), r(1));
        let t = RatMPoly::var(&["y", "x"], "x");
        assert_eq!((&a - &t), RatMPoly::zero(&["x", "y"]));
    }

    #[test]
    fn complex_evaluation() {
        let y1 = RatMPoly::var(&XY, "y1");
        let y2 = RatMPoly::var(&XY, "y2");
        let p = &y1 * &y1 - RatMPoly::one(&XY);
        assert_eq!(p.eval_complex(&[Complex64::new(1.0, 0.0), Complex64::zero()]), Complex64::zero());
        let iso = &y1 * &y1 + &y2 * &y2;
        let v = iso.eval_complex(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert!(v.norm() < 1e-15);
        // 2 y1^2 y2^2 + 5 (y1^2 + y2^2) + 8 on the point with y2^2 = -13/7.
        let curve = (&y1 * &y1 * &y2 * &y2).scale(&r(2)) + iso.scale(&r(5)) + RatMPoly::constant(&XY, r(8));
        let v = curve.eval_complex(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, (13.0f64 / 7.0).sqrt())]);
        assert!(v.norm() < 1e-13, "{v}");
    }

    #[test]
    fn exact_division_and_primitive() {
        let y1 = RatMPoly::var(&XY, "y1");
        let y2 = RatMPoly::var(&XY, "y2");
        let g = &y1 + &y2.scale(&r(2)) + RatMPoly::one(&XY);
        let f = &(&y1 * &y1 + RatMPoly::one(&XY)) * &g;
        assert_eq!(f.div_exact(&g).unwrap(), &y1 * &y1 + RatMPoly::one(&XY));
        assert!(f.div_exact(&(&y1 - &y2)).is_none());
        let half = BigRational::new(1.into(), 2.into());
        let h = g.scale(&(-half));
        assert_eq!(h.primitive(), g);
    }

    #[test]
    fn substitution_and_composition() {
        let y1 = RatMPoly::var(&XY, "y1");
        let y2 = RatMPoly::var(&XY, "y2");
        let p = &y1 * &y1 - &y2;
        let q = p.substitute(0, &(&y2 + &RatMPoly::one(&XY)));
        // (y2+1)^2 - y2
        assert_eq!(q, &y2 * &y2 + &y2 + RatMPoly::one(&XY));
        let uv = ["u", "v"];
        let u = RatMPoly::var(&uv, "u");
        let v = RatMPoly::var(&uv, "v");
        let c = p.compose(&[&u + &v, v.clone()]);
        assert_eq!(c, &(&u + &v) * &(&u + &v) - &v);
    }
}
