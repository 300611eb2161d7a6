//! Factorization over ℚ for small degrees by recombination of certified roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::sqrt_bounds;
use super::poly::RatPoly;
use super::rational::{self, Rational};
use super::roots::{certified_roots_until, RootBall};
use crate::error::{Error, Result};

/// Degree cap for [`factor_over_rationals`].
pub const FACTOR_DEGREE_CAP: usize = 8;

/// `P = leading · ∏ factor^multiplicity` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub leading: Rational,
    pub factors: Vec<(RatPoly, usize)>,
}

impl Factorization {
    pub fn product(&self) -> RatPoly {
        self.factors
            .iter()
            .fold(RatPoly::constant(self.leading.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

/// Complex ball `c ± r` with exact center.
#[derive(Clone, Debug)]
struct CBall {
    re: Rational,
    im: Rational,
    r: Rational,
}

impl CBall {
    fn abs_up(&self) -> Rational {
        sqrt_bounds(&(&self.re * &self.re + &self.im * &self.im), 40).1
    }

    fn mul(&self, o: &CBall) -> CBall {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let r = self.abs_up() * &o.r + o.abs_up() * &self.r + &self.r * &o.r;
        CBall { re, im, r }
    }

    fn add(&self, o: &CBall) -> CBall {
        CBall { re: &self.re + &o.re, im: &self.im + &o.im, r: &self.r + &o.r }
    }

    fn neg(&self) -> CBall {
        CBall { re: -self.re.clone(), im: -self.im.clone(), r: self.r.clone() }
    }
}

enum Candidate {
    /// The product has integer coefficients only if they are these.
    Integers(Vec<BigInt>),
    /// Some coefficient ball excludes every integer.
    Impossible,
    /// Balls too wide to decide.
    Unresolved,
}

/// Coefficient balls of `a · ∏ (T − α)` over the roots in `subset`.
fn subset_product(a: &BigInt, roots: &[&RootBall]) -> Candidate {
    let zero = CBall { re: Rational::zero(), im: Rational::zero(), r: Rational::zero() };
    let mut coeffs = vec![CBall { re: Rational::from_integer(a.clone()), ..zero.clone() }];
    for b in roots {
        let neg_root = CBall { re: b.re.clone(), im: b.im.clone(), r: b.radius.clone() }.neg();
        let mut next = vec![zero.clone(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].add(&c.mul(&neg_root));
        }
        coeffs = next;
    }
    let half = rational::rat(1, 2);
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if c.im.abs() > c.r {
            return Candidate::Impossible;
        }
        let k = (&c.re + &half).floor().to_integer();
        let dist = (&c.re - Rational::from_integer(k.clone())).abs();
        if c.r >= half {
            return Candidate::Unresolved;
        }
        if dist > c.r {
            return Candidate::Impossible;
        }
        out.push(k);
    }
    Candidate::Integers(out)
}

/// Index subsets of `0..n` of size `k` that contain 0.
fn subsets_with_first(n: usize, k: usize) -> Vec<Vec<usize>> {
    super::linalg::column_subsets(n - 1, k - 1)
        .into_iter()
        .map(|s| std::iter::once(0).chain(s.into_iter().map(|i| i + 1)).collect())
        .collect()
}

/// Irreducible factors of a squarefree primitive integer polynomial, monic.
fn factor_squarefree(f: &RatPoly, cap: u64) -> Result<Vec<RatPoly>> {
    if f.deg() <= 1 {
        return Ok(if f.deg() == 1 { vec![f.monic()] } else { Vec::new() });
    }
    if f.deg() <= 3 {
        return Ok(match rational_root(f) {
            None => vec![f.monic()],
            Some(r) => {
                let lin = RatPoly::linear_root(&r);
                let mut v = vec![lin.clone()];
                v.extend(factor_squarefree(&f.div_rem(&lin).0.primitive(), cap)?);
                v
            }
        });
    }
    let (_, out) = certified_roots_until(f, cap, |c| recombine(f, &c.balls))?;
    Ok(out)
}

/// One pass of the recombination; `None` asks for sharper roots.
fn recombine(f: &RatPoly, balls: &[RootBall]) -> Option<Vec<RatPoly>> {
    let mut rest: Vec<&RootBall> = balls.iter().collect();
    let mut cur = f.clone();
    let mut found = Vec::new();
    'outer: while rest.len() > 1 {
        let a = cur.primitive_decomposition().1.last().cloned().unwrap();
        for k in 1..rest.len() {
            for s in subsets_with_first(rest.len(), k) {
                let chosen: Vec<&RootBall> = s.iter().map(|&i| rest[i]).collect();
                match subset_product(&a, &chosen) {
                    Candidate::Impossible => continue,
                    Candidate::Unresolved => return None,
                    Candidate::Integers(c) => {
                        let g = RatPoly::from_bigints(&c).primitive();
                        if let Some(q) = cur.exact_div(&g) {
                            found.push(g.monic());
                            cur = q.primitive();
                            rest = rest
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| !s.contains(i))
                                .map(|(_, b)| *b)
                                .collect();
                            continue 'outer;
                        }
                    }
                }
            }
        }
        break;
    }
    if cur.deg() > 0 {
        found.push(cur.monic());
    }
    Some(found)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let f = super::primes::factor(n.magnitude());
    let mut ds = vec![BigInt::one()];
    for (p, e) in f {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for d in &ds {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pw);
                pw *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

/// A rational root of an integer polynomial, if any (smallest candidate first).
pub fn rational_root(f: &RatPoly) -> Option<Rational> {
    let c = f.primitive_decomposition().1;
    if c.is_empty() || c.len() == 1 {
        return None;
    }
    if c[0].is_zero() {
        return Some(Rational::zero());
    }
    let ps = divisors(&c[0]);
    let qs = divisors(c.last().unwrap());
    let mut cands: Vec<Rational> = Vec::new();
    for p in &ps {
        for q in &qs {
            if p.gcd(q).is_one() {
                let r = Rational::new(p.clone(), q.clone());
                cands.push(-r.clone());
                cands.push(r);
            }
        }
    }
    cands.sort();
    cands.into_iter().find(|r| f.eval(r).is_zero())
}

/// `P = lc · ∏ Q_i^{m_i}` with monic irreducible `Q_i` over ℚ, sorted by degree and
/// then by coefficient vector.
pub fn factor_over_rationals(p: &RatPoly, cap: u64) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() > FACTOR_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { degree: p.deg(), cap: FACTOR_DEGREE_CAP });
    }
    let mut factors = Vec::new();
    for (s, m) in p.squarefree_decomposition() {
        for f in factor_squarefree(&s.primitive(), cap)? {
            factors.push((f, m));
        }
    }
    factors.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    Ok(Factorization { leading: p.leading(), factors })
}

/// Irreducibility over ℚ (degree ≥ 1).
pub fn is_irreducible(p: &RatPoly, cap: u64) -> Result<bool> {
    if p.deg() == 0 {
        return Ok(false);
    }
    if p.deg() == 1 {
        return Ok(true);
    }
    if p.deg() <= 3 {
        return Ok(rational_root(p).is_none());
    }
    let f = factor_over_rationals(p, cap)?;
    Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
}

/// Eisenstein's criterion at `q` for an integer polynomial.
pub fn is_eisenstein(p: &RatPoly, q: &BigInt) -> bool {
    let Some(c) = p.int_coeffs() else {
        return false;
    };
    let n = c.len();
    if n < 2 {
        return false;
    }
    let q2 = q * q;
    !(&c[n - 1] % q).is_zero()
        && c[..n - 1].iter().all(|a| (a % q).is_zero())
        && !(&c[0] % &q2).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::int;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn spec_examples() {
        let f = factor_over_rationals(&p(&[-1, 0, 1]), 256).unwrap();
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        let f = factor_over_rationals(&p(&[3, 0, 1]), 256).unwrap();
        assert_eq!(f.factors, vec![(p(&[3, 0, 1]), 1)]);
        let f = factor_over_rationals(&p(&[0, -2, 0, 2]), 256).unwrap();
        assert_eq!(f.leading, int(2));
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[0, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn higher_degree_recombination() {
        // (T² + 1)(T² − 2)(T² + T + 1)(2T − 3)
        let g = &(&(&p(&[1, 0, 1]) * &p(&[-2, 0, 1])) * &p(&[1, 1, 1])) * &p(&[-3, 2]);
        let f = factor_over_rationals(&g, 256).unwrap();
        assert_eq!(f.product(), g);
        assert_eq!(f.factors.len(), 4);
        // x^4 + 1 is irreducible though reducible mod every prime.
        assert!(is_irreducible(&p(&[1, 0, 0, 0, 1]), 256).unwrap());
        // x^4 + 4 = (x² + 2x + 2)(x² − 2x + 2)
        assert_eq!(factor_over_rationals(&p(&[4, 0, 0, 0, 1]), 256).unwrap().factors.len(), 2);
        let sq = &p(&[-2, 0, 1]).pow(2) * &p(&[1, 1]);
        let f = factor_over_rationals(&sq, 256).unwrap();
        assert_eq!(f.factors, vec![(p(&[1, 1]), 1), (p(&[-2, 0, 1]), 2)]);
        assert!(matches!(
            factor_over_rationals(&RatPoly::monomial(9), 256),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn eisenstein() {
        assert!(is_eisenstein(&p(&[3, 0, 1]), &BigInt::from(3)));
        assert!(!is_eisenstein(&p(&[9, 0, 1]), &BigInt::from(3)));
        assert!(!is_eisenstein(&p(&[3, 1, 1]), &BigInt::from(3)));
    }
}
