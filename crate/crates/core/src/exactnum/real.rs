//! Real numbers with certified enclosures: rationals, real algebraic numbers and
//! lacunary dyadic series.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::DyadicBall;
use super::interval::Interval;
use super::poly::RatPoly;
use super::rational::{self, Rational};
use super::sturm::{self, RootInterval, SturmChain};
use crate::error::{Error, Result};

/// Default cap on the binary precision of any refinement loop.
pub const DEFAULT_PRECISION_CAP: u64 = 256;

/// Precision cap from `DIOPH_PRECISION_CAP`, falling back to [`DEFAULT_PRECISION_CAP`].
pub fn precision_cap() -> u64 {
    std::env::var("DIOPH_PRECISION_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&b: &u64| b >= 16)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

/// The real root of a squarefree polynomial lying in `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: RatPoly,
    iso: RootInterval,
    /// Sharpest isolating interval found so far, shared between clones.
    sharp: Arc<Mutex<RootInterval>>,
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, o: &Self) -> bool {
        self.poly == o.poly && self.iso == o.iso
    }
}

impl Eq for AlgebraicReal {}

impl AlgebraicReal {
    /// Root of `p` inside `[lo, hi]`; the interval must hold exactly one root of `p`.
    pub fn new(p: &RatPoly, lo: &Rational, hi: &Rational) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let roots = sturm::isolate(p, Some((lo, hi)));
        if roots.len() != 1 {
            return Err(Error::Precondition(format!(
                "[{}, {}] holds {} roots of {p}",
                rational::to_string(lo),
                rational::to_string(hi),
                roots.len()
            )));
        }
        Ok(AlgebraicReal::from_parts(p.squarefree_part().primitive(), roots[0].clone()))
    }

    /// The `index`-th real root of `p` in ascending order.
    pub fn real_root(p: &RatPoly, index: usize) -> Result<Self> {
        let roots = sturm::isolate(p, None);
        let iso = roots
            .get(index)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("{p} has only {} real roots", roots.len())))?;
        Ok(AlgebraicReal::from_parts(p.squarefree_part().primitive(), iso))
    }

    fn from_parts(poly: RatPoly, iso: RootInterval) -> Self {
        AlgebraicReal { poly, sharp: Arc::new(Mutex::new(iso.clone())), iso }
    }

    fn sharpened(&self, bits: u64) -> RootInterval {
        let w = rational::powi(&rational::int(2), -(bits as i64));
        let mut g = self.sharp.lock().unwrap();
        if &g.hi - &g.lo > w {
            *g = g.refine(&self.poly, &w);
        }
        g.clone()
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn isolating_interval(&self) -> Interval {
        self.iso.to_interval()
    }

    pub fn enclosure(&self, bits: u64) -> Interval {
        self.sharpened(bits).to_interval()
    }

    /// The same number, with the shared enclosure cache sharpened to `bits`.
    pub fn refined(&self, bits: u64) -> AlgebraicReal {
        self.sharpened(bits);
        self.clone()
    }

    /// Whether `q(α) = 0`, decided exactly through `gcd(q, poly)`.
    pub fn is_root_of(&self, q: &RatPoly) -> bool {
        if q.is_zero() {
            return true;
        }
        let g = q.gcd(&self.poly);
        if g.deg() == 0 {
            return false;
        }
        if self.iso.is_exact() {
            return g.eval(&self.iso.lo).is_zero();
        }
        SturmChain::new(&g).count_closed(&self.iso.lo, &self.iso.hi) == 1
    }
}

/// `ξ_j = Σ_{i≥0} 2^{-a_{j+ti}}` with `a_ℓ = ⌊b^{ℓ/t}⌋`, `b = (t+1)n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiouvilleSeries {
    pub j: u64,
    pub t: u64,
    pub n: u64,
}

impl LiouvilleSeries {
    pub fn new(j: u64, t: u64, n: u64) -> Result<Self> {
        if t == 0 || n == 0 || j == 0 || j > t {
            return Err(Error::Precondition(format!("invalid series indices j={j}, t={t}, n={n}")));
        }
        Ok(LiouvilleSeries { j, t, n })
    }

    /// `a_ℓ = ⌊b^{ℓ/t}⌋` via an exact integer `t`-th root.
    pub fn exponent(&self, l: u64) -> BigInt {
        liouville_exponent((self.t + 1) * self.n, self.t, l)
    }

    /// Indices `ℓ = j + t·i` of the terms, in order.
    pub fn index(&self, i: u64) -> u64 {
        self.j + self.t * i
    }

    /// Exact partial sum of the first `terms` terms.
    pub fn partial_sum(&self, terms: u64) -> Rational {
        (0..terms)
            .map(|i| {
                let a = self.exponent(self.index(i)).to_i64().expect("exponent fits in i64");
                rational::powi(&rational::int(2), -a)
            })
            .sum()
    }

    /// Upper bound `2^{1-a}` on the tail after `terms` terms, `a` the next exponent.
    pub fn tail_bound(&self, terms: u64) -> Rational {
        let a = self.exponent(self.index(terms)).to_i64().expect("exponent fits in i64");
        rational::powi(&rational::int(2), 1 - a)
    }

    /// Number of terms needed for a tail below `2^{-bits}`.
    pub fn terms_for(&self, bits: u64) -> u64 {
        let mut k = 0;
        while self.exponent(self.index(k)) <= BigInt::from(bits + 1) {
            k += 1;
        }
        k
    }

    pub fn enclosure(&self, bits: u64) -> Interval {
        let k = self.terms_for(bits);
        let s = self.partial_sum(k);
        Interval::new(s.clone(), s + self.tail_bound(k))
    }
}

pub fn liouville_exponent(b: u64, t: u64, l: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), l as usize).nth_root(t as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealNumber {
    Rational(Rational),
    Algebraic(AlgebraicReal),
    Liouville(LiouvilleSeries),
}

impl From<Rational> for RealNumber {
    fn from(x: Rational) -> Self {
        RealNumber::Rational(x)
    }
}

impl RealNumber {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealNumber::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// Interval of width at most `2^{-bits}` containing the number.
    pub fn enclosure(&self, bits: u64) -> Interval {
        match self {
            RealNumber::Rational(x) => Interval::point(x.clone()),
            RealNumber::Algebraic(a) => a.enclosure(bits),
            RealNumber::Liouville(s) => s.enclosure(bits),
        }
    }

    pub fn ball(&self, bits: u64) -> DyadicBall {
        DyadicBall::enclosing(&self.enclosure(bits), bits + 8)
    }

    /// A copy whose cached enclosure is at least `bits` sharp.
    pub fn refined(&self, bits: u64) -> RealNumber {
        match self {
            RealNumber::Algebraic(a) => RealNumber::Algebraic(a.refined(bits)),
            other => other.clone(),
        }
    }

    /// Upper bound on `|ξ|`.
    pub fn abs_upper(&self) -> Rational {
        let e = self.enclosure(16);
        e.lo.abs().max(e.hi.abs())
    }

    /// Exact sign of `q(ξ)`.
    ///
    /// Zero is decided algebraically (rational and algebraic ξ) or excluded by
    /// transcendence (series values); nonzero signs come from enclosures refined up to
    /// the precision cap.
    pub fn sign_of(&self, q: &RatPoly) -> Result<Ordering> {
        if q.is_zero() {
            return Ok(Ordering::Equal);
        }
        match self {
            RealNumber::Rational(x) => Ok(q.eval(x).cmp(&Rational::zero())),
            RealNumber::Algebraic(a) => {
                if a.is_root_of(q) {
                    return Ok(Ordering::Equal);
                }
                let r = q.div_rem(&a.poly).1;
                self.sign_by_refinement(&r)
            }
            RealNumber::Liouville(_) => self.sign_by_refinement(q),
        }
    }

    fn sign_by_refinement(&self, q: &RatPoly) -> Result<Ordering> {
        let cap = precision_cap().max(64) * 4;
        let mut bits = 32;
        while bits <= cap {
            if let Some(s) = eval_interval(q, &self.enclosure(bits)).sign() {
                if s != Ordering::Equal {
                    return Ok(s);
                }
            }
            bits *= 2;
        }
        Err(Error::PrecisionExhausted(cap))
    }

    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        self.sign_of(&RatPoly::linear_root(r))
    }

    /// Accepts `num/den`, a decimal, `alg:<a0,a1,…>:<lo>:<hi>` or `liouville:<j>:<t>:<n>`.
    pub fn parse(s: &str) -> Result<RealNumber> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("alg:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("expected alg:<coeffs>:<lo>:<hi>, got {s:?}")));
            }
            let p = RatPoly::new(rational::parse_list(parts[0])?);
            let lo = rational::parse(parts[1])?;
            let hi = rational::parse(parts[2])?;
            return Ok(RealNumber::Algebraic(AlgebraicReal::new(&p, &lo, &hi)?));
        }
        if let Some(rest) = s.strip_prefix("liouville:") {
            let nums: Vec<u64> = rest
                .split(':')
                .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad series spec {s:?}"))))
                .collect::<Result<_>>()?;
            if nums.len() != 3 {
                return Err(Error::Parse(format!("expected liouville:<j>:<t>:<n>, got {s:?}")));
            }
            return Ok(RealNumber::Liouville(LiouvilleSeries::new(nums[0], nums[1], nums[2])?));
        }
        rational::parse(s).map(RealNumber::Rational)
    }
}

impl fmt::Display for RealNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealNumber::Rational(x) => f.write_str(&rational::to_string(x)),
            RealNumber::Algebraic(a) => {
                let cs: Vec<String> = a.poly.coeffs().iter().map(rational::to_string).collect();
                let iv = a.isolating_interval();
                write!(f, "alg:{}:{}:{}", cs.join(","), rational::to_string(&iv.lo), rational::to_string(&iv.hi))
            }
            RealNumber::Liouville(s) => write!(f, "liouville:{}:{}:{}", s.j, s.t, s.n),
        }
    }
}

/// Enclosure of `q` over an interval via the Taylor form at the midpoint.
pub fn eval_interval(q: &RatPoly, x: &Interval) -> Interval {
    if x.lo == x.hi {
        return Interval::point(q.eval(&x.lo));
    }
    let m = x.mid();
    let r = x.radius();
    let tc = q.taylor_coeffs_at(&m);
    let mut spread = Rational::zero();
    let mut rp = Rational::one();
    for c in tc.iter().skip(1) {
        rp *= &r;
        spread += c.abs() * &rp;
    }
    let v = tc.first().cloned().unwrap_or_else(Rational::zero);
    Interval::new(&v - &spread, &v + &spread)
}

/// `√2`, `∛2` and similar fixtures.
pub fn real_nth_root(a: i64, k: usize) -> AlgebraicReal {
    let mut c = vec![Rational::zero(); k + 1];
    c[0] = rational::int(-a);
    c[k] = Rational::one();
    let p = RatPoly::new(c);
    let n = sturm::isolate(&p, None).len();
    AlgebraicReal::real_root(&p, n - 1).expect("positive real root exists")
}

/// Serializes a value through its `Display` form.
pub fn serialize_display<T: fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat, to_f64};

    #[test]
    fn algebraic_enclosure_and_signs() {
        let c = RealNumber::Algebraic(real_nth_root(2, 3));
        let e = c.enclosure(80);
        assert!(e.width() <= rational::powi(&int(2), -80));
        assert!((to_f64(&e.mid()) - 2f64.cbrt()).abs() < 1e-15);
        assert_eq!(c.sign_of(&RatPoly::from_ints(&[-2, 0, 0, 1])).unwrap(), Ordering::Equal);
        assert_eq!(c.sign_of(&RatPoly::from_ints(&[-4, 0, 0, 0, 0, 0, 1])).unwrap(), Ordering::Equal);
        assert_eq!(c.cmp_rational(&rat(5, 4)).unwrap(), Ordering::Greater);
        assert_eq!(c.cmp_rational(&rat(127, 100)).unwrap(), Ordering::Less);
        let near = RatPoly::new(vec![-rat(125_992_105, 100_000_000), int(1)]);
        assert_eq!(c.sign_of(&near).unwrap(), Ordering::Less);
    }

    #[test]
    fn liouville_exponents() {
        let s = LiouvilleSeries::new(1, 2, 2).unwrap();
        let a: Vec<BigInt> = (1..=6).map(|l| s.exponent(l)).collect();
        let expect: Vec<BigInt> = [2, 6, 14, 36, 88, 216].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(a, expect);
        // t = 1 makes the exponents plain powers of b = 2n.
        let t1 = LiouvilleSeries::new(1, 1, 2).unwrap();
        for l in 1..8 {
            assert_eq!(t1.exponent(l), BigInt::from(4u64.pow(l as u32)));
        }
        let b3: Vec<BigInt> = (1..=6).map(|l| LiouvilleSeries::new(1, 2, 1).unwrap().exponent(l)).collect();
        assert_eq!(b3, [1, 3, 5, 9, 15, 27].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        // ξ_1 = 2^-2 + 2^-14 + 2^-88 + …
        assert_eq!(s.partial_sum(2), rat(1, 4) + rational::powi(&int(2), -14));
        assert_eq!(s.tail_bound(2), rational::powi(&int(2), -87));
        let e = s.enclosure(200);
        assert!(e.contains(&(s.partial_sum(5))));
    }

    #[test]
    fn liouville_sign_is_never_zero() {
        let x = RealNumber::Liouville(LiouvilleSeries::new(1, 2, 2).unwrap());
        let r = RealNumber::Liouville(LiouvilleSeries::new(1, 2, 2).unwrap()).enclosure(40).lo;
        // The truncation is a rational just below ξ.
        assert_eq!(x.cmp_rational(&r).unwrap(), Ordering::Greater);
    }

    #[test]
    fn parse_and_display() {
        let x = RealNumber::parse("alg:-2,0,1:1:2").unwrap();
        assert_eq!(x.to_string(), "alg:-2/1,0/1,1/1:1/1:2/1");
        assert_eq!(RealNumber::parse("3/6").unwrap(), RealNumber::Rational(rat(1, 2)));
        assert!(RealNumber::parse("alg:-2,0,1:-2:2").is_err());
        assert!(matches!(RealNumber::parse("liouville:1:2:2").unwrap(), RealNumber::Liouville(_)));
    }

    #[test]
    fn interval_evaluation_encloses() {
        let q = RatPoly::from_ints(&[1, -3, 0, 2]);
        let x = Interval::new(rat(1, 3), rat(1, 2));
        let e = eval_interval(&q, &x);
        for k in 0..=10 {
            let t = rat(1, 3) + rat(k, 60);
            assert!(e.contains(&q.eval(&t)));
        }
    }
}
