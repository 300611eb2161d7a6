//! Rationals, places of ℚ and the normalized absolute values.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes;
use crate::error::{Error, Result};

/// Exact arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Canonical `num/den` rendering (the denominator is always printed).
pub fn to_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den`, a bare integer, or a finite decimal such as `-1.25`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(ip_abs).map_err(|_| bad())?
        };
        let frac = BigInt::from_str(fp).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u32), fp.len());
        let v = Rational::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Parses a comma separated list of rationals.
pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse).collect()
}

/// A place of ℚ: the Archimedean one or a prime.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Finite(BigUint),
}

impl Place {
    /// Finite place at `p`; fails unless `p` is prime.
    pub fn finite(p: impl Into<BigUint>) -> Result<Place> {
        let p = p.into();
        if !primes::is_prime(&p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(Place::Finite(p))
    }

    /// JSON key: `"inf"` or the prime in decimal.
    pub fn key(&self) -> String {
        match self {
            Place::Infinite => "inf".to_string(),
            Place::Finite(p) => p.to_string(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn ord_p_int(n: &BigInt, p: &BigUint) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `p`-adic valuation of a nonzero rational.
pub fn ord_p(x: &Rational, p: &BigUint) -> i64 {
    ord_p_int(x.numer(), p) as i64 - ord_p_int(x.denom(), p) as i64
}

/// `|x|_v` with the normalization `|p|_p = 1/p`; `|0|_v = 0`.
pub fn abs_at_place(x: &Rational, v: &Place) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    match v {
        Place::Infinite => x.abs(),
        Place::Finite(p) => {
            let e = ord_p(x, p);
            let pp = BigInt::from_biguint(Sign::Plus, p.clone());
            let pw = num_traits::pow(pp, e.unsigned_abs() as usize);
            if e >= 0 {
                Rational::new(BigInt::one(), pw)
            } else {
                Rational::from_integer(pw)
            }
        }
    }
}

/// Primes dividing the numerator or the denominator, ascending.
pub fn prime_support(x: &Rational) -> Vec<BigUint> {
    let mut ps: Vec<BigUint> = primes::factor(&x.numer().magnitude().clone())
        .into_keys()
        .chain(primes::factor(&x.denom().magnitude().clone()).into_keys())
        .collect();
    ps.sort();
    ps.dedup();
    ps
}

/// Multiplies `|x|_v` over the Archimedean place and every prime in the support of `x`.
/// All other places contribute exactly 1, so the result is the full product.
pub fn product_formula_check(x: &Rational) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut prod = abs_at_place(x, &Place::Infinite);
    for p in prime_support(x) {
        prod *= abs_at_place(x, &Place::Finite(p));
    }
    Ok(prod.is_one())
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow(x: &Rational, e: u64) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// `x^e` for a signed exponent; `x` must be nonzero when `e < 0`.
pub fn powi(x: &Rational, e: i64) -> Rational {
    let p = pow(x, e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

pub fn max_abs<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Rational {
    xs.into_iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Lossy conversion for diagnostics and float filters only.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // to_f64 gives up on huge numerators/denominators; rescale by bit length.
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb - db;
        let scaled = x / powi(&int(2), shift);
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift.clamp(-1100, 1100) as i32)
    })
}

/// Serde adapters rendering rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(to_string).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// A single integer as a JSON number when it fits in an `i64`, a decimal string otherwise.
pub mod serde_int {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(i) => IntRepr::Small(i),
            None => IntRepr::Big(x.to_string()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Small(i) => Ok(BigInt::from(i)),
            IntRepr::Big(s) => BigInt::from_str(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// Integers as JSON numbers when they fit in an `i64`, decimal strings otherwise.
pub mod serde_int_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<IntRepr> = xs
            .iter()
            .map(|x| match x.to_i64() {
                Some(i) => IntRepr::Small(i),
                None => IntRepr::Big(x.to_string()),
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let v = Vec::<IntRepr>::deserialize(d)?;
        v.into_iter()
            .map(|r| match r {
                IntRepr::Small(i) => Ok(BigInt::from(i)),
                IntRepr::Big(s) => BigInt::from_str(&s).map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

pub mod serde_rational_opt {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(to_string).serialize(s)
    }
}

pub mod serde_int_vec_vec {
    use super::*;
    use serde::Serializer;

    #[derive(Serialize)]
    struct Row<'a>(#[serde(with = "super::serde_int_vec")] &'a [BigInt]);

    pub fn serialize<S: Serializer>(xs: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Row> = xs.iter().map(|r| Row(r)).collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Place {
        Place::finite(BigUint::from(n)).unwrap()
    }

    #[test]
    fn abs_values() {
        assert_eq!(abs_at_place(&int(12), &p(2)), rat(1, 4));
        assert_eq!(abs_at_place(&rat(-3, 4), &Place::Infinite), rat(3, 4));
        assert_eq!(abs_at_place(&rat(5, 7), &p(7)), int(7));
        assert_eq!(abs_at_place(&int(0), &p(3)), int(0));
    }

    #[test]
    fn product_formula_examples() {
        assert!(product_formula_check(&int(-6)).unwrap());
        assert!(product_formula_check(&int(1)).unwrap());
        assert!(product_formula_check(&rat(35, 4)).unwrap());
        assert!(matches!(product_formula_check(&int(0)), Err(Error::ZeroInput)));
    }

    #[test]
    fn product_formula_35_over_4_by_hand() {
        // |35/4|_inf = 35/4, |.|_2 = 4, |.|_5 = 1/5, |.|_7 = 1/7
        let x = rat(35, 4);
        let prod = abs_at_place(&x, &Place::Infinite)
            * abs_at_place(&x, &p(2))
            * abs_at_place(&x, &p(5))
            * abs_at_place(&x, &p(7));
        assert_eq!(prod, int(1));
        assert_eq!(prime_support(&x).len(), 3);
    }

    #[test]
    fn composite_place_rejected() {
        assert!(Place::finite(BigUint::from(9u32)).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse("0/1").unwrap(), int(0));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert_eq!(to_string(&rat(-2, 4)), "-1/2");
        assert_eq!(to_string(&int(3)), "3/1");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }
}
