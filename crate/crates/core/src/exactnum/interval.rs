//! Closed intervals with exact rational endpoints.
//!
//! Transcendental functions return enclosures whose endpoints are dyadic;
//! `bits` is always a relative precision target, never a guarantee of width.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "rational::serde_rational")]
    pub lo: Rational,
    #[serde(with = "rational::serde_rational")]
    pub hi: Rational,
}

fn two_pow(e: i64) -> Rational {
    rational::powi(&rational::int(2), e)
}

/// `⌊log2 |x|⌋` for nonzero `x`.
pub fn floor_log2(x: &Rational) -> i64 {
    let nb = x.numer().magnitude().bits() as i64;
    let db = x.denom().bits() as i64;
    let e = nb - db;
    // 2^(e-1) < |x| < 2^(e+1)
    if x.abs() >= two_pow(e) {
        e
    } else {
        e - 1
    }
}

/// Largest multiple of `2^-p` that is `≤ x`.
pub fn round_down_abs(x: &Rational, p: i64) -> Rational {
    let s = two_pow(p);
    Rational::new((x * &s).floor().to_integer(), BigInt::one()) / s
}

pub fn round_up_abs(x: &Rational, p: i64) -> Rational {
    let s = two_pow(p);
    Rational::new((x * &s).ceil().to_integer(), BigInt::one()) / s
}

/// Rounds down keeping about `bits` significant bits.
pub fn round_down(x: &Rational, bits: u64) -> Rational {
    if x.is_zero() || (x.denom().bits() <= 1 && x.numer().bits() <= bits) {
        return x.clone();
    }
    round_down_abs(x, bits as i64 - floor_log2(x))
}

pub fn round_up(x: &Rational, bits: u64) -> Rational {
    if x.is_zero() || (x.denom().bits() <= 1 && x.numer().bits() <= bits) {
        return x.clone();
    }
    round_up_abs(x, bits as i64 - floor_log2(x))
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn int(n: i64) -> Self {
        Self::point(rational::int(n))
    }

    /// `[c - r, c + r]`.
    pub fn ball(c: &Rational, r: &Rational) -> Self {
        Interval { lo: c - r, hi: c + r }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn radius(&self) -> Rational {
        self.width() / rational::int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Some(ordering of every point against 0)` when decided.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison; `None` when the intervals overlap.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval { lo: Rational::zero(), hi: self.hi.clone().max(-self.lo.clone()) }
        } else if self.hi.is_negative() || self.hi.is_zero() {
            Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
        } else {
            self.clone()
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval { lo: &a.lo * &a.lo, hi: &a.hi * &a.hi }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::Precondition("reciprocal of an interval containing 0".into()));
        }
        Ok(Interval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        Ok(self * &o.recip()?)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()) }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e.is_multiple_of(2) {
            let a = self.abs();
            Interval { lo: rational::pow(&a.lo, e as u64), hi: rational::pow(&a.hi, e as u64) }
        } else {
            Interval { lo: rational::pow(&self.lo, e as u64), hi: rational::pow(&self.hi, e as u64) }
        }
    }

    /// Outward rounding of both endpoints to about `bits` significant bits.
    pub fn round_out(&self, bits: u64) -> Interval {
        Interval { lo: round_down(&self.lo, bits), hi: round_up(&self.hi, bits) }
    }

    pub fn sqrt(&self, bits: u64) -> Result<Interval> {
        if self.lo.is_negative() {
            return Err(Error::Precondition("square root of a negative interval".into()));
        }
        Ok(Interval { lo: sqrt_bounds(&self.lo, bits).0, hi: sqrt_bounds(&self.hi, bits).1 })
    }

    pub fn exp(&self, bits: u64) -> Interval {
        Interval { lo: exp_point(&self.lo, bits).lo, hi: exp_point(&self.hi, bits).hi }
    }

    pub fn ln(&self, bits: u64) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(Error::Precondition("logarithm of a non-positive interval".into()));
        }
        Ok(Interval { lo: ln_point(&self.lo, bits).lo, hi: ln_point(&self.hi, bits).hi })
    }

    /// `self^e` for a positive base and a real exponent.
    pub fn powr(&self, e: &Interval, bits: u64) -> Result<Interval> {
        let l = self.ln(bits + 8)?;
        Ok((&l * e).round_out(bits + 8).exp(bits))
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }
}

/// Dyadic `(lo, hi)` with `lo ≤ √x ≤ hi` and `hi - lo ≤ 2^-p` relative to `√x`.
pub fn sqrt_bounds(x: &Rational, bits: u64) -> (Rational, Rational) {
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    // Scale so that the integer part carries 2·bits significant bits.
    let e = floor_log2(x);
    let shift = 2 * (bits as i64 + 2) - e;
    let shift = shift + (shift & 1);
    let scaled = x * two_pow(shift);
    let lo_int = scaled.floor().to_integer();
    let r = lo_int.sqrt();
    let half = two_pow(-shift / 2);
    let lo = Rational::from_integer(r.clone()) * &half;
    let hi = if Rational::from_integer(&r * &r) == scaled {
        lo.clone()
    } else {
        Rational::from_integer(r + 1) * &half
    };
    (lo, hi)
}

/// Enclosure of `e^x`.
pub fn exp_point(x: &Rational, bits: u64) -> Interval {
    if x.is_zero() {
        return Interval::int(1);
    }
    let s = (floor_log2(x) + 2).max(0);
    let y = round_to_interval(&(x / two_pow(s)), bits + s as u64 + 16);
    let work = bits + 2 * s as u64 + 16;
    let lo = exp_small(&y.lo, work).lo;
    let hi = exp_small(&y.hi, work).hi;
    let mut acc = Interval { lo, hi };
    for _ in 0..s {
        acc = acc.sqr().round_out(work);
    }
    acc.round_out(bits + 4)
}

fn round_to_interval(x: &Rational, bits: u64) -> Interval {
    Interval { lo: round_down(x, bits), hi: round_up(x, bits) }
}

/// Taylor series for `|y| ≤ 1/2`.
fn exp_small(y: &Rational, bits: u64) -> Interval {
    let eps = two_pow(-(bits as i64) - 4);
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k = 1u64;
    loop {
        term = round_to_interval(&(&term * y / rational::int(k as i64)), bits + 32).hi;
        sum += &term;
        k += 1;
        if term.abs() < eps {
            break;
        }
    }
    // The remainder after a term of size τ is at most 2τ for |y| ≤ 1/2; rounding of
    // each term contributes at most k·2^-(bits+32) on top.
    let slack = term.abs() * rational::int(2) + rational::int(k as i64) * two_pow(-(bits as i64) - 30);
    Interval { lo: &sum - &slack, hi: &sum + &slack }.round_out(bits + 8)
}

/// `2·atanh(z) = ln((1+z)/(1-z))` for `0 ≤ z ≤ 1/3`.
fn two_atanh(z: &Rational, bits: u64) -> Interval {
    let eps = two_pow(-(bits as i64) - 8);
    let z2 = z * z;
    let mut pw = z.clone();
    let mut sum = Rational::zero();
    let mut i = 0i64;
    loop {
        let term = &pw / rational::int(2 * i + 1);
        sum += round_down(&term, bits + 32);
        pw = round_up(&(&pw * &z2), bits + 32);
        i += 1;
        if pw < eps {
            break;
        }
    }
    // Tail: Σ_{j≥i} z^{2j+1}/(2j+1) ≤ pw / (1 - z²); per-term rounding bounded below.
    let tail = &pw / (Rational::one() - &z2);
    let round = rational::int((i + 1) * (i + 1)) * two_pow(-(bits as i64) - 28);
    let two = rational::int(2);
    Interval { lo: &sum * &two - &round, hi: (&sum + &tail) * &two + &round }.round_out(bits + 4)
}

pub fn ln2(bits: u64) -> Interval {
    two_atanh(&rational::rat(1, 3), bits)
}

/// Enclosure of `ln x` for `x > 0`.
pub fn ln_point(x: &Rational, bits: u64) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    if x.is_one() {
        return Interval::int(0);
    }
    let k = floor_log2(x);
    let m = x / two_pow(k);
    // m ∈ [1, 2); z = (m-1)/(m+1) ∈ [0, 1/3)
    let work = bits + 16 + (64 - (k.unsigned_abs()).leading_zeros()) as u64;
    let mi = round_to_interval(&m, work + 8);
    let z_lo = (&mi.lo - Rational::one()) / (&mi.lo + Rational::one());
    let z_hi = (&mi.hi - Rational::one()) / (&mi.hi + Rational::one());
    let lm = Interval { lo: two_atanh(&z_lo.max(Rational::zero()), work).lo, hi: two_atanh(&z_hi, work).hi };
    let l2 = ln2(work).scale(&rational::int(k));
    (&lm + &l2).round_out(bits + 4)
}

pub fn e_pow(n: i64, bits: u64) -> Interval {
    exp_point(&rational::int(n), bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat, to_f64};

    fn close(i: &Interval, v: f64, tol: f64) {
        assert!(to_f64(&i.lo) <= v + tol && to_f64(&i.hi) >= v - tol, "{v} not in [{}, {}]", to_f64(&i.lo), to_f64(&i.hi));
        assert!(to_f64(&i.width()) < tol.max(v.abs() * 1e-12));
    }

    #[test]
    fn exp_and_ln() {
        close(&exp_point(&int(1), 64), std::f64::consts::E, 1e-15);
        close(&exp_point(&int(-3), 64), (-3f64).exp(), 1e-15);
        close(&exp_point(&rat(7, 3), 80), (7f64 / 3.0).exp(), 1e-14);
        close(&exp_point(&int(20), 80), 20f64.exp(), 1e-3);
        close(&ln2(64), std::f64::consts::LN_2, 1e-15);
        close(&ln_point(&int(10), 64), 10f64.ln(), 1e-15);
        close(&ln_point(&rat(1, 1000), 64), (0.001f64).ln(), 1e-14);
        close(&ln_point(&rat(3, 2), 64), 1.5f64.ln(), 1e-15);
    }

    #[test]
    fn exp_enclosure_contains_truth_at_high_precision() {
        // e = Σ 1/k! with a rigorous tail below 2^-200 after 60 terms.
        let mut s = Rational::zero();
        let mut t = Rational::one();
        for k in 0..60 {
            if k > 0 {
                t /= int(k);
            }
            s += &t;
        }
        let e = exp_point(&int(1), 150);
        assert!(e.lo <= s && s <= &e.hi + two_pow(-190));
        assert!(e.width() < two_pow(-140));
    }

    #[test]
    fn sqrt_and_pow() {
        let (lo, hi) = sqrt_bounds(&int(2), 100);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(&hi - &lo <= two_pow(-99));
        assert_eq!(sqrt_bounds(&rat(9, 4), 20), (rat(3, 2), rat(3, 2)));
        let p = Interval::int(2).powr(&Interval::point(rat(1, 2)), 60).unwrap();
        close(&p, std::f64::consts::SQRT_2, 1e-15);
    }

    #[test]
    fn rounding() {
        let x = rat(1, 3);
        let d = round_down(&x, 10);
        let u = round_up(&x, 10);
        assert!(d < x && x < u);
        assert!(&u - &d <= two_pow(-11));
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&rat(3, 4)), -1);
        assert_eq!(floor_log2(&rat(-1, 8)), -3);
    }
}
