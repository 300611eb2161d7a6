//! Dyadic balls: the serialized form of certified real enclosures.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::{self, Interval};
use super::rational::{self, serde_int, Rational};

/// `m·2^e` as a rational.
pub fn dyadic(m: &BigInt, e: i64) -> Rational {
    Rational::from_integer(m.clone()) * rational::powi(&rational::int(2), e)
}

/// `(m, e)` with `x = m·2^e` and `m` odd (or zero); `None` if `x` is not dyadic.
pub fn to_dyadic(x: &Rational) -> Option<(BigInt, i64)> {
    if x.is_zero() {
        return Some((BigInt::zero(), 0));
    }
    let d = x.denom();
    let k = d.trailing_zeros().unwrap_or(0);
    if (d >> k) != BigInt::one() {
        return None;
    }
    let mut m = x.numer().clone();
    let mut e = -(k as i64);
    let tz = m.trailing_zeros().unwrap_or(0);
    m >>= tz;
    e += tz as i64;
    Some((m, e))
}

/// Certified real ball `center ± radius` with dyadic center and radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicBall {
    #[serde(with = "serde_int")]
    pub c_man: BigInt,
    pub c_exp: i64,
    #[serde(with = "serde_int")]
    pub r_man: BigInt,
    pub r_exp: i64,
}

impl DyadicBall {
    pub fn exact(x: &Rational) -> Option<DyadicBall> {
        let (c_man, c_exp) = to_dyadic(x)?;
        Some(DyadicBall { c_man, c_exp, r_man: BigInt::zero(), r_exp: 0 })
    }

    /// Smallest convenient ball containing `iv`; endpoints are rounded outward to
    /// `bits` significant bits when they are not dyadic already.
    pub fn enclosing(iv: &Interval, bits: u64) -> DyadicBall {
        let lo = to_dyadic(&iv.lo).map_or_else(|| interval::round_down(&iv.lo, bits), |_| iv.lo.clone());
        let hi = to_dyadic(&iv.hi).map_or_else(|| interval::round_up(&iv.hi, bits), |_| iv.hi.clone());
        let two = rational::int(2);
        let c = (&lo + &hi) / &two;
        let r = (&hi - &lo) / &two;
        let (c_man, c_exp) = to_dyadic(&c).expect("midpoint of dyadics is dyadic");
        let (r_man, r_exp) = to_dyadic(&r).expect("half-width of dyadics is dyadic");
        DyadicBall { c_man, c_exp, r_man, r_exp }
    }

    pub fn center(&self) -> Rational {
        dyadic(&self.c_man, self.c_exp)
    }

    pub fn radius(&self) -> Rational {
        dyadic(&self.r_man, self.r_exp)
    }

    pub fn to_interval(&self) -> Interval {
        Interval::ball(&self.center(), &self.radius())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        (x - self.center()).abs() <= self.radius()
    }

    pub fn is_disjoint(&self, o: &DyadicBall) -> bool {
        (self.center() - o.center()).abs() > self.radius() + o.radius()
    }

    /// Nearest `f64` to the center, for display.
    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.center())
    }
}

/// Certified complex disk: `|z - (re + i·im)| ≤ radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexBall {
    #[serde(with = "rational::serde_rational")]
    pub re: Rational,
    #[serde(with = "rational::serde_rational")]
    pub im: Rational,
    #[serde(with = "rational::serde_rational")]
    pub radius: Rational,
}

impl ComplexBall {
    /// Enclosure of the real part.
    pub fn re_interval(&self) -> Interval {
        Interval::ball(&self.re, &self.radius)
    }

    pub fn im_interval(&self) -> Interval {
        Interval::ball(&self.im, &self.radius)
    }

    /// Enclosure of `|z - x|` for a real `x` known up to `x_enc`.
    pub fn distance_to(&self, x_enc: &Interval, bits: u64) -> Interval {
        let dx = &Interval::point(self.re.clone()) - x_enc;
        let dsq = &dx.sqr() + &Interval::point(&self.im * &self.im);
        let d = dsq.sqrt(bits).expect("nonnegative");
        Interval {
            lo: (&d.lo - &self.radius).max(Rational::zero()),
            hi: &d.hi + &self.radius,
        }
    }
}

/// Integer nearest to `x`, ties toward `+∞`.
pub fn round_nearest(x: &Rational) -> BigInt {
    (x + rational::rat(1, 2)).floor().to_integer()
}
