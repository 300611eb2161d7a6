//! Dense univariate polynomials over ℚ.
//!
//! A `RatPoly` doubles as a coordinate vector of `E_n = {P : deg P ≤ n}` through
//! [`RatPoly::coeff_vector`]; the stored coefficient list never has trailing zeros,
//! so the ambient degree is supplied by whoever needs the vector view.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, binomial, factorial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `T^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        RatPoly { coeffs: c }
    }

    /// `T - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a.clone(), Rational::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficients `(a_0, …, a_n)` padded with zeros; fails if `deg P > n`.
    pub fn coeff_vector(&self, n: usize) -> Result<Vec<Rational>> {
        if self.coeffs.len() > n + 1 {
            return Err(Error::DegreeOverflow { degree: self.deg(), cap: n });
        }
        let mut v = self.coeffs.clone();
        v.resize(n + 1, Rational::zero());
        Ok(v)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// The `k`-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(k)
                .map(|(i, c)| c * Rational::from_integer(factorial(i as u64) / factorial((i - k) as u64)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `T^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs: c }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let lc_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// `Some(q)` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &RatPoly) -> Option<RatPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Squarefree part, monic.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's algorithm: `self = lc · ∏ S_i^i` with monic squarefree pairwise coprime `S_i`.
    /// Returns the nonconstant `(S_i, i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.deg() > 0 {
            a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((a.monic(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients if every coefficient is integral.
    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// `(s, F)` with `self = s·F`, `F` integral, primitive, positive leading coefficient.
    pub fn primitive_decomposition(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, l), prim)
    }

    /// Primitive integer representative with positive leading coefficient.
    pub fn primitive(&self) -> RatPoly {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_bigints(&self.primitive_decomposition().1)
    }

    /// `max_i |a_i|`.
    pub fn norm_inf(&self) -> Rational {
        rational::max_abs(&self.coeffs)
    }

    /// `Σ |a_i|`.
    pub fn norm_l1(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// `P(T + a)`.
    pub fn taylor_shift(&self, a: &Rational) -> RatPoly {
        let n = self.coeffs.len();
        let mut c = self.coeffs.clone();
        // Repeated synthetic division (Horner shift).
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// `P(a T + b)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> RatPoly {
        let shifted = self.taylor_shift(b);
        let mut pw = Rational::one();
        let mut c = Vec::with_capacity(shifted.coeffs.len());
        for x in &shifted.coeffs {
            c.push(x * &pw);
            pw *= a;
        }
        Self::new(c)
    }

    /// `P(-T)`.
    pub fn reflect(&self) -> RatPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Coefficients of `P` in the basis `1, (T-ξ), …, (T-ξ)^d`: `P^{(j)}(ξ)/j!`.
    pub fn taylor_coeffs_at(&self, xi: &Rational) -> Vec<Rational> {
        self.taylor_shift(xi).coeffs
    }

    /// Sum over the binomial expansion used when bounding Taylor coefficients by `‖P‖`.
    pub fn binomial_row_bound(deg: usize, j: usize, abs_xi: &Rational) -> Rational {
        (j..=deg)
            .map(|i| Rational::from_integer(binomial(i as u64, j as u64)) * rational::pow(abs_xi, (i - j) as u64))
            .sum()
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = a.is_one();
            if !unit || i == 0 {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_rational_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rational::serde_rational_vec::deserialize(d).map(RatPoly::new)
    }
}

/// Parses a comma separated integer coefficient list `a0,a1,…`.
pub fn parse_int_poly(s: &str) -> Result<RatPoly> {
    let cs = rational::parse_list(s)?;
    if cs.iter().any(|c| !c.is_integer()) {
        return Err(Error::NonIntegerCoefficients);
    }
    Ok(RatPoly::new(cs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn arithmetic_and_division() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(&q * &b, a);
        assert_eq!(a.gcd(&p(&[1, 1])), p(&[1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-2, 1])), RatPoly::one());
    }

    #[test]
    fn derivatives_and_taylor() {
        let q = p(&[1, 2, 3, 4]);
        assert_eq!(q.nth_derivative(2), p(&[6, 24]));
        assert_eq!(q.nth_derivative(4), RatPoly::zero());
        let xi = rat(1, 2);
        let tc = q.taylor_coeffs_at(&xi);
        for (j, c) in tc.iter().enumerate() {
            let expect = q.nth_derivative(j).eval(&xi) / Rational::from_integer(factorial(j as u64));
            assert_eq!(*c, expect);
        }
        assert_eq!(q.compose_linear(&int(2), &int(1)).eval(&int(3)), q.eval(&int(7)));
    }

    #[test]
    fn squarefree() {
        // (T-1)^2 (T+2)^3
        let f = &p(&[-1, 1]).pow(2) * &p(&[2, 1]).pow(3);
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
        assert_eq!(f.squarefree_part(), &p(&[-1, 1]) * &p(&[2, 1]));
    }

    #[test]
    fn primitive_parts() {
        let f = RatPoly::new(vec![rat(-1, 2), int(0), rat(3, 4)]);
        let (s, prim) = f.primitive_decomposition();
        assert_eq!(prim, vec![BigInt::from(-2), BigInt::from(0), BigInt::from(3)]);
        assert_eq!(RatPoly::from_bigints(&prim).scale(&s), f);
        let g = p(&[4, -6]);
        assert_eq!(g.primitive(), p(&[-2, 3]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 2]).to_string(), "2T^2 - 1");
        assert_eq!(p(&[0, -1]).to_string(), "-T");
        assert_eq!(RatPoly::new(vec![rat(1, 2), int(1)]).to_string(), "T + 1/2");
    }
}
