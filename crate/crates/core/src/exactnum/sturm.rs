//! Sturm sequences and real root isolation by bisection.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::dyadic::DyadicBall;
use super::interval::Interval;
use super::poly::RatPoly;
use super::rational::{self, Rational};

/// Sturm chain of the squarefree part of `p`, each member rescaled by a positive factor.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

fn positive_primitive(p: &RatPoly) -> RatPoly {
    let (s, prim) = p.primitive_decomposition();
    let f = RatPoly::from_bigints(&prim);
    if s.is_negative() {
        -&f
    } else {
        f
    }
}

fn sign(x: &Rational) -> i8 {
    match x.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let p0 = positive_primitive(&p.squarefree_part());
        let mut chain = vec![p0.clone()];
        if p0.deg() == 0 {
            return SturmChain { chain };
        }
        let mut a = p0;
        let mut b = positive_primitive(&a.derivative());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            chain.push(b.clone());
            a = b;
            b = positive_primitive(&-&r);
        }
        SturmChain { chain }
    }

    /// The squarefree polynomial the chain was built from.
    pub fn base(&self) -> &RatPoly {
        &self.chain[0]
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        variations(self.chain.iter().map(|q| sign(&q.eval(x))))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        variations(self.chain.iter().map(|q| {
            let s = sign(&q.leading());
            if positive || q.deg() % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct real roots in `[a, b]`.
    pub fn count_closed(&self, a: &Rational, b: &Rational) -> usize {
        self.count_half_open(a, b) + usize::from(self.base().eval(a).is_zero())
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// Power of two strictly exceeding every root modulus (Cauchy bound).
pub fn root_bound(p: &RatPoly) -> Rational {
    let lc = p.leading().abs();
    let m = p.coeffs()[..p.deg()].iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
    let b = Rational::one() + m;
    let mut r = Rational::one();
    while r <= b {
        r *= rational::int(2);
    }
    r
}

/// Isolating interval `[lo, hi]` of a real root: either a point or an interval whose
/// endpoints are not roots and which holds exactly one root in its interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn to_interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn to_ball(&self) -> DyadicBall {
        DyadicBall::enclosing(&self.to_interval(), 64)
    }

    /// Bisects until the width is at most `width` (or the root is hit exactly).
    pub fn refine(&self, p: &RatPoly, width: &Rational) -> RootInterval {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        if lo == hi {
            return self.clone();
        }
        let s_lo = sign(&p.eval(&lo));
        debug_assert!(s_lo != 0);
        let two = rational::int(2);
        while &(&hi - &lo) > width {
            let m = (&lo + &hi) / &two;
            let s = sign(&p.eval(&m));
            if s == 0 {
                return RootInterval { lo: m.clone(), hi: m };
            }
            if s == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
        RootInterval { lo, hi }
    }
}

/// Real roots of `p` in the closed region `[a, b]` (all of ℝ when `None`), ascending.
pub fn isolate(p: &RatPoly, region: Option<(&Rational, &Rational)>) -> Vec<RootInterval> {
    let sc = SturmChain::new(p);
    let f = sc.base().clone();
    if f.deg() == 0 {
        return Vec::new();
    }
    let (a, b) = match region {
        Some((a, b)) => (a.clone(), b.clone()),
        None => {
            let r = root_bound(&f);
            (-r.clone(), r)
        }
    };
    if a > b {
        return Vec::new();
    }
    let mut out = Vec::new();
    if f.eval(&a).is_zero() {
        out.push(RootInterval { lo: a.clone(), hi: a.clone() });
    }
    let two = rational::int(2);
    let mut stack = vec![(a.clone(), b.clone(), sc.count_half_open(&a, &b))];
    while let Some((lo, hi, c)) = stack.pop() {
        if c == 0 {
            continue;
        }
        if c == 1 {
            if f.eval(&hi).is_zero() {
                out.push(RootInterval { lo: hi.clone(), hi });
                continue;
            }
            let (mut l, h) = (lo, hi);
            // Move the left end off a root belonging to the neighbouring interval.
            while f.eval(&l).is_zero() {
                let m = (&l + &h) / &two;
                if sc.count_half_open(&m, &h) == 1 {
                    l = m;
                } else {
                    stack.push((l.clone(), m.clone(), 1));
                    l = h.clone();
                    break;
                }
            }
            if l != h {
                out.push(RootInterval { lo: l, hi: h });
            }
            continue;
        }
        let m = (&lo + &hi) / &two;
        let left = sc.count_half_open(&lo, &m);
        stack.push((m.clone(), hi, c - left));
        stack.push((lo, m, left));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    separate(&f, out)
}

/// Shrinks touching neighbours so that the closed intervals are pairwise disjoint.
fn separate(f: &RatPoly, mut v: Vec<RootInterval>) -> Vec<RootInterval> {
    for i in 0..v.len() {
        loop {
            let touches_left = i > 0 && v[i - 1].hi >= v[i].lo;
            let touches_right = i + 1 < v.len() && v[i].hi >= v[i + 1].lo;
            if !(touches_left || touches_right) || v[i].is_exact() {
                break;
            }
            let w = v[i].hi.clone() - v[i].lo.clone();
            let r = v[i].refine(f, &(w / rational::int(2)));
            v[i] = r;
        }
    }
    v
}

/// Public form of the isolation: one dyadic ball per real root.
pub fn isolate_real_roots(p: &RatPoly, region: Option<(&Rational, &Rational)>) -> Vec<DyadicBall> {
    isolate(p, region).iter().map(RootInterval::to_ball).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    #[test]
    fn sturm_counts() {
        let p = RatPoly::from_ints(&[-2, 0, 1]);
        let sc = SturmChain::new(&p);
        assert_eq!(sc.count_all(), 2);
        assert_eq!(sc.count_half_open(&int(0), &int(2)), 1);
        assert_eq!(SturmChain::new(&RatPoly::from_ints(&[1, 0, 1])).count_all(), 0);
        // (T-1)^2 (T+3) has two distinct real roots
        let q = &RatPoly::from_ints(&[-1, 1]).pow(2) * &RatPoly::from_ints(&[3, 1]);
        assert_eq!(SturmChain::new(&q).count_all(), 2);
    }

    #[test]
    fn isolation_examples() {
        let p = RatPoly::from_ints(&[-2, 0, 1]);
        let r = isolate(&p, Some((&int(0), &int(2))));
        assert_eq!(r.len(), 1);
        let tight = r[0].refine(&p, &rational::powi(&int(2), -60));
        assert!(&tight.lo * &tight.lo < int(2) && &tight.hi * &tight.hi > int(2));
        assert!(isolate(&RatPoly::from_ints(&[1, 0, 1]), None).is_empty());
        let q = &RatPoly::linear_root(&int(1)) * &RatPoly::linear_root(&rat(1, 2));
        let r = isolate(&q, Some((&int(0), &int(2))));
        assert_eq!(r.len(), 2);
        assert!(r[0].to_interval().contains(&rat(1, 2)) && r[1].to_interval().contains(&int(1)));
        assert!(r[0].hi < r[1].lo);
    }

    #[test]
    fn roots_on_region_boundary_and_bisection_points() {
        // Roots at 0, 1 and -1 hit the region ends and the first bisection point.
        let p = &(&RatPoly::monomial(1) * &RatPoly::linear_root(&int(1))) * &RatPoly::linear_root(&int(-1));
        let r = isolate(&p, Some((&int(-1), &int(1))));
        assert_eq!(r.len(), 3);
        for w in r.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
        let all = isolate(&p, None);
        assert_eq!(all.len(), 3);
    }
}
