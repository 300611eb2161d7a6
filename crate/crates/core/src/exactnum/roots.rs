//! Certified complex roots.
//!
//! Approximations come from Aberth's iteration, first in `f64` and then in exact
//! rational arithmetic rounded to a working precision. They are certified with
//! Weierstrass inclusion disks: for a squarefree `p` of degree `n` with leading
//! coefficient `a` and pairwise distinct approximations `z_i`, put
//! `W_i = p(z_i) / (a ∏_{j≠i} (z_i − z_j))`. Every root lies in `⋃ D(z_i, n|W_i|)`
//! and a connected component made of `m` disks holds exactly `m` roots, so pairwise
//! disjoint disks isolate one root each.

use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use super::dyadic::ComplexBall;
use super::interval::{self, sqrt_bounds, Interval};
use super::poly::RatPoly;
use super::rational::{self, Rational};
use super::real::RealNumber;
use crate::error::{Error, Result};

type C64 = Complex<f64>;
type CQ = Complex<Rational>;

/// One certified root: the disk holds exactly one root of the squarefree polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBall {
    pub re: Rational,
    pub im: Rational,
    pub radius: Rational,
    /// Certified real root.
    pub real: bool,
}

impl RootBall {
    pub fn to_complex_ball(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.clone(), radius: self.radius.clone() }
    }

    pub fn center(&self) -> CQ {
        Complex::new(self.re.clone(), self.im.clone())
    }

    /// Enclosure of `|α − x|` for the enclosed root `α` and a real `x ∈ x_enc`.
    pub fn distance_to(&self, x_enc: &Interval, bits: u64) -> Interval {
        self.to_complex_ball().distance_to(x_enc, bits)
    }

    /// Enclosure of `|α|`.
    pub fn modulus(&self, bits: u64) -> Interval {
        self.distance_to(&Interval::int(0), bits)
    }

    pub fn approx(&self) -> C64 {
        Complex::new(rational::to_f64(&self.re), rational::to_f64(&self.im))
    }
}

/// Certified roots of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct CertifiedRoots {
    /// Primitive integer squarefree polynomial whose roots are listed.
    pub poly: RatPoly,
    pub balls: Vec<RootBall>,
    /// Working precision that produced the certificate (53 for the float stage).
    pub bits: u64,
}

fn cq(re: Rational, im: Rational) -> CQ {
    Complex::new(re, im)
}

fn norm_sqr(z: &CQ) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

fn horner_q(p: &[Rational], z: &CQ) -> CQ {
    let mut acc = cq(Rational::zero(), Rational::zero());
    for c in p.iter().rev() {
        acc = &acc * z;
        acc.re += c;
    }
    acc
}

fn horner_f(p: &[f64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Upper bound on `√x` with about 40 correct bits.
fn sqrt_up(x: &Rational) -> Rational {
    sqrt_bounds(x, 40).1
}

fn initial_guesses(p: &[f64]) -> Vec<C64> {
    let n = p.len() - 1;
    let lc = p[n].abs();
    // Geometric mean of root moduli, with the Cauchy-type bound as a ceiling.
    let g = (p[0].abs() / lc).powf(1.0 / n as f64);
    let bound = 1.0 + p[..n].iter().map(|c| c.abs() / lc).fold(0.0, f64::max);
    let r = if g.is_finite() && g > 0.0 { g.min(bound) } else { 1.0 };
    (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            C64::from_polar(r, th)
        })
        .collect()
}

/// Aberth iteration in `f64`; `None` on non-finite values.
fn aberth_f64(p: &[f64]) -> Option<Vec<C64>> {
    let n = p.len() - 1;
    let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let mut z = initial_guesses(p);
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = horner_f(p, z[i]);
            let dv = horner_f(&dp, z[i]);
            if pv == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pv / dv;
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[i] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-17 {
            break;
        }
    }
    Some(z)
}

fn round_cq(z: &CQ, bits: u64) -> CQ {
    let mag = rational::max_abs([&z.re, &z.im]);
    let p = if mag.is_zero() { bits as i64 } else { bits as i64 - interval::floor_log2(&mag) };
    let p = p.max(bits as i64);
    cq(round_nearest_abs(&z.re, p), round_nearest_abs(&z.im, p))
}

fn round_nearest_abs(x: &Rational, p: i64) -> Rational {
    let s = rational::powi(&rational::int(2), p);
    Rational::from_integer((x * &s + rational::rat(1, 2)).floor().to_integer()) / s
}

/// Aberth iteration in rounded exact arithmetic, started from `z`.
///
/// With `perturb`, the start points are first pushed apart by small distinct offsets:
/// float approximations of a tight cluster often sit on a symmetry line of the
/// polynomial, which the iteration never leaves.
fn aberth_exact(p: &[Rational], z: &[CQ], bits: u64, perturb: bool) -> Vec<CQ> {
    let n = p.len() - 1;
    let dp: Vec<Rational> = p.iter().enumerate().skip(1).map(|(i, c)| c * rational::int(i as i64)).collect();
    let mut z: Vec<CQ> = z.iter().map(|x| round_cq(x, bits)).collect();
    if perturb {
        let eps = rational::powi(&rational::int(2), -30);
        for (k, x) in z.iter_mut().enumerate() {
            let scale = &eps * (Rational::one() + x.re.abs() + x.im.abs());
            let k = rational::int(k as i64 + 1);
            x.re += &scale * &k;
            x.im += &scale * &k * rational::rat(3, 7);
        }
    }
    let tol = rational::powi(&rational::int(2), -2 * (bits as i64));
    let one = cq(Rational::one(), Rational::zero());
    for _ in 0..60 {
        let mut max_step = Rational::zero();
        for i in 0..n {
            let pv = horner_q(p, &z[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = horner_q(&dp, &z[i]);
            if dv.is_zero() {
                continue;
            }
            let ratio = &pv / &dv;
            let mut s = cq(Rational::zero(), Rational::zero());
            for j in (0..n).filter(|&j| j != i) {
                let d = &z[i] - &z[j];
                if d.is_zero() {
                    continue;
                }
                s += &one / &d;
            }
            let den = &one - &(&ratio * &s);
            let w = if den.is_zero() { ratio } else { &ratio / &den };
            let step = norm_sqr(&w) / (Rational::one() + norm_sqr(&z[i]));
            max_step = max_step.max(step);
            z[i] = round_cq(&(&z[i] - &w), bits);
        }
        if max_step < tol {
            break;
        }
    }
    z
}

/// Snaps nearly real approximations onto the real axis (conjugate symmetry of real
/// polynomials makes a symmetric disk certify a real root).
fn snap_real(z: &mut [CQ], bits: u64) {
    let tol = rational::powi(&rational::int(2), -(bits as i64) / 2);
    for x in z.iter_mut() {
        if x.im.abs() <= &tol * (Rational::one() + x.re.abs()) {
            x.im = Rational::zero();
        }
    }
}

/// Attempts the inclusion-disk certificate.
fn certify(p: &[Rational], z: &[CQ]) -> Option<Vec<RootBall>> {
    let n = z.len();
    let lc = p.last()?.clone();
    let nn = rational::int(n as i64);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let pv = horner_q(p, &z[i]);
        let mut den = lc.clone() * &lc;
        for j in (0..n).filter(|&j| j != i) {
            let d = norm_sqr(&(&z[i] - &z[j]));
            if d.is_zero() {
                return None;
            }
            den *= d;
        }
        let w2 = norm_sqr(&pv) / den;
        radii.push(interval::round_up(&sqrt_up(&(&w2 * &nn * &nn)), 40));
    }
    for i in 0..n {
        for j in i + 1..n {
            let s = &radii[i] + &radii[j];
            if norm_sqr(&(&z[i] - &z[j])) <= &s * &s {
                return None;
            }
        }
    }
    let mut balls = Vec::with_capacity(n);
    for i in 0..n {
        let real = if z[i].im.is_zero() {
            true
        } else if z[i].im.abs() > radii[i] {
            false
        } else {
            // The disk meets the real axis without being symmetric: the root's
            // conjugate must lie in some disk, so decide via the mirrored disk.
            let zc = cq(z[i].re.clone(), -z[i].im.clone());
            let mirrored_hits_other = (0..n).filter(|&j| j != i).any(|j| {
                let s = &radii[i] + &radii[j];
                norm_sqr(&(&zc - &z[j])) <= &s * &s
            });
            if mirrored_hits_other {
                return None;
            }
            true
        };
        balls.push(RootBall { re: z[i].re.clone(), im: z[i].im.clone(), radius: radii[i].clone(), real });
    }
    Some(balls)
}

fn f64_to_rational(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Successively sharper certificates for the roots of one polynomial.
pub struct RootRefiner {
    poly: RatPoly,
    coeffs: Vec<Rational>,
    current: Vec<CQ>,
    next_bits: u64,
    cap: u64,
    started: bool,
}

impl RootRefiner {
    pub fn new(p: &RatPoly, cap: u64) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let poly = p.squarefree_part().primitive();
        let coeffs = poly.coeffs().to_vec();
        Ok(RootRefiner { poly, coeffs, current: Vec::new(), next_bits: 53, cap, started: false })
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    /// Next certificate at a higher precision; `Ok(None)` once the cap is passed.
    pub fn next_certificate(&mut self) -> Result<Option<CertifiedRoots>> {
        let n = self.poly.deg();
        if n == 0 {
            if self.started {
                return Ok(None);
            }
            self.started = true;
            return Ok(Some(CertifiedRoots { poly: self.poly.clone(), balls: Vec::new(), bits: 0 }));
        }
        while self.next_bits <= self.cap.max(64) {
            let bits = self.next_bits;
            if !self.started {
                self.started = true;
                self.next_bits = 64;
                if n == 1 {
                    let r = -&self.coeffs[0] / &self.coeffs[1];
                    let ball = RootBall { re: r, im: Rational::zero(), radius: Rational::zero(), real: true };
                    self.next_bits = u64::MAX;
                    return Ok(Some(CertifiedRoots { poly: self.poly.clone(), balls: vec![ball], bits: u64::MAX }));
                }
                let pf: Vec<f64> = self.coeffs.iter().map(rational::to_f64).collect();
                let approx = aberth_f64(&pf).unwrap_or_else(|| initial_guesses(&pf));
                self.current = approx
                    .iter()
                    .map(|w| cq(f64_to_rational(w.re), f64_to_rational(w.im)))
                    .collect();
                let mut z = self.current.clone();
                snap_real(&mut z, 53);
                if let Some(balls) = certify(&self.coeffs, &z) {
                    return Ok(Some(CertifiedRoots { poly: self.poly.clone(), balls, bits }));
                }
                continue;
            }
            self.next_bits = bits * 2;
            self.current = aberth_exact(&self.coeffs, &self.current, bits, bits == 64);
            let mut z = self.current.clone();
            snap_real(&mut z, bits);
            if let Some(balls) = certify(&self.coeffs, &z) {
                return Ok(Some(CertifiedRoots { poly: self.poly.clone(), balls, bits }));
            }
        }
        Ok(None)
    }
}

/// Certified roots of the squarefree part of `p`.
pub fn certified_roots(p: &RatPoly, cap: u64) -> Result<CertifiedRoots> {
    let mut r = RootRefiner::new(p, cap)?;
    r.next_certificate()?.ok_or(Error::PrecisionExhausted(cap))
}

/// First certificate accepted by `accept`, refining up to the cap.
pub fn certified_roots_until<T>(
    p: &RatPoly,
    cap: u64,
    mut accept: impl FnMut(&CertifiedRoots) -> Option<T>,
) -> Result<(CertifiedRoots, T)> {
    let mut r = RootRefiner::new(p, cap)?;
    while let Some(c) = r.next_certificate()? {
        if let Some(t) = accept(&c) {
            return Ok((c, t));
        }
    }
    Err(Error::PrecisionExhausted(cap))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskRelation {
    Inside,
    Outside,
    Undecided,
}

/// Where the root in `ball` sits relative to the closed disk `D(c, radius)`, `c ∈ c_enc` real.
pub fn relation_to_disk(ball: &RootBall, c_enc: &Interval, radius: &Rational) -> DiskRelation {
    let im2 = &ball.im * &ball.im;
    let dlo = &ball.re - &c_enc.hi;
    let dhi = &ball.re - &c_enc.lo;
    let far2 = (&dlo * &dlo).max(&dhi * &dhi) + &im2;
    let near_re = if dlo.is_positive() {
        dlo.clone()
    } else if dhi.is_negative() {
        -dhi.clone()
    } else {
        Rational::zero()
    };
    let near2 = &near_re * &near_re + &im2;
    if &ball.radius <= radius {
        let slack = radius - &ball.radius;
        if far2 <= &slack * &slack {
            return DiskRelation::Inside;
        }
    }
    let reach = radius + &ball.radius;
    if near2 > &reach * &reach {
        return DiskRelation::Outside;
    }
    DiskRelation::Undecided
}

/// Number of distinct complex roots of `p` in the closed disk `|z − c| ≤ radius`.
pub fn count_roots_in_disk(p: &RatPoly, center: &RealNumber, radius: &Rational, cap: u64) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut r = RootRefiner::new(p, cap)?;
    let f = r.poly().clone();
    while let Some(c) = r.next_certificate()? {
        let c_enc = center.enclosure(c.bits.min(4 * cap) + 16);
        let mut count = 0;
        let mut undecided = false;
        for b in &c.balls {
            match relation_to_disk(b, &c_enc, radius) {
                DiskRelation::Inside => count += 1,
                DiskRelation::Outside => {}
                DiskRelation::Undecided => {
                    // A rational center allows an exact boundary test for real roots.
                    let on_boundary = center.as_rational().is_some_and(|x| {
                        b.real
                            && [x + radius, x - radius].iter().any(|e| {
                                let dx = e - &b.re;
                                f.eval(e).is_zero() && &dx * &dx + &b.im * &b.im <= &b.radius * &b.radius
                            })
                    });
                    if on_boundary {
                        count += 1;
                    } else {
                        undecided = true;
                    }
                }
            }
        }
        if !undecided {
            return Ok(count);
        }
    }
    Err(Error::BoundaryUndecidable)
}

/// Certified roots of `p` sorted by distance from `xi` (midpoint of the distance
/// enclosure, then real part, then imaginary part), each with its distance enclosure.
///
/// The order is deterministic but not certified; use [`order_statistic`] for
/// certified bounds on the `k`-th smallest distance.
pub fn roots_by_distance(p: &RatPoly, xi: &RealNumber, cap: u64) -> Result<(CertifiedRoots, Vec<(RootBall, Interval)>)> {
    let c = certified_roots(p, cap)?;
    let x = xi.enclosure(c.bits.min(4 * cap) + 16);
    let mut v: Vec<(RootBall, Interval)> =
        c.balls.iter().map(|b| (b.clone(), b.distance_to(&x, c.bits.min(cap) + 16))).collect();
    v.sort_by(|a, b| {
        let ka = (&a.1.lo + &a.1.hi, a.0.re.clone(), a.0.im.clone());
        let kb = (&b.1.lo + &b.1.hi, b.0.re.clone(), b.0.im.clone());
        ka.cmp(&kb)
    });
    Ok((c, v))
}

/// Enclosure of the `k`-th smallest (1-based) of values known through enclosures.
pub fn order_statistic(values: &[Interval], k: usize) -> Interval {
    let mut lo: Vec<&Rational> = values.iter().map(|i| &i.lo).collect();
    let mut hi: Vec<&Rational> = values.iter().map(|i| &i.hi).collect();
    lo.sort();
    hi.sort();
    Interval::new(lo[k - 1].clone(), hi[k - 1].clone())
}

/// `f64` approximations, handy for diagnostics.
pub fn approx_roots(c: &CertifiedRoots) -> Vec<(f64, f64)> {
    c.balls.iter().map(|b| (rational::to_f64(&b.re), rational::to_f64(&b.im))).collect()
}

/// Upper bound of `|z|` over a disk, as a rational.
pub fn modulus_upper(b: &RootBall) -> Rational {
    sqrt_up(&(&b.re * &b.re + &b.im * &b.im)) + &b.radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn cap() -> u64 {
        256
    }

    #[test]
    fn roots_of_simple_polynomials() {
        let c = certified_roots(&RatPoly::from_ints(&[-2, 0, 1]), cap()).unwrap();
        assert_eq!(c.balls.len(), 2);
        assert!(c.balls.iter().all(|b| b.real));
        let c = certified_roots(&RatPoly::from_ints(&[1, 0, 1]), cap()).unwrap();
        assert!(c.balls.iter().all(|b| !b.real));
        let c = certified_roots(&RatPoly::from_ints(&[1, 1, 1, 1, 1, 1]), cap()).unwrap();
        assert_eq!(c.balls.len(), 5);
        assert_eq!(c.balls.iter().filter(|b| b.real).count(), 1);
    }

    #[test]
    fn count_in_disk_examples() {
        let z = RealNumber::Rational(int(0));
        assert_eq!(count_roots_in_disk(&RatPoly::from_ints(&[-2, 0, 1]), &z, &int(2), cap()).unwrap(), 2);
        assert_eq!(count_roots_in_disk(&RatPoly::from_ints(&[1, 0, 1]), &z, &rat(1, 2), cap()).unwrap(), 0);
        // (T − 1/2)² − 1/100 has roots 1/2 ± 1/10
        let p = RatPoly::new(vec![rat(6, 25), int(-1), int(1)]);
        let h = RealNumber::Rational(rat(1, 2));
        assert_eq!(count_roots_in_disk(&p, &h, &rat(1, 5), cap()).unwrap(), 2);
        assert_eq!(count_roots_in_disk(&p, &h, &rat(1, 20), cap()).unwrap(), 0);
        // Root exactly on the circle: T² − 4 with radius 2 around 0.
        assert_eq!(count_roots_in_disk(&RatPoly::from_ints(&[-4, 0, 1]), &z, &int(2), cap()).unwrap(), 2);
        // Multiplicities are ignored.
        let sq = RatPoly::from_ints(&[-1, 1]).pow(3);
        assert_eq!(count_roots_in_disk(&sq, &z, &int(2), cap()).unwrap(), 1);
    }

    #[test]
    fn clustered_roots_need_exact_stage() {
        // Roots 1 and 1 + 2^-40.
        let e = rational::powi(&int(2), -40);
        let p = &RatPoly::linear_root(&int(1)) * &RatPoly::linear_root(&(int(1) + &e));
        let c = certified_roots(&p, cap()).unwrap();
        assert_eq!(c.balls.len(), 2);
        assert!(c.balls.iter().all(|b| b.radius < e));
    }

    #[test]
    fn nearest_root_ordering() {
        let p = RatPoly::from_ints(&[-2, 0, 0, 1]);
        let (_, v) = roots_by_distance(&p, &RealNumber::Rational(int(1)), cap()).unwrap();
        assert!(v[0].0.real);
        assert!(rational::to_f64(&v[0].0.re) > 1.25);
        let d: Vec<Interval> = v.iter().map(|x| x.1.clone()).collect();
        let second = order_statistic(&d, 2);
        assert!(second.lo > rat(1, 2));
    }
}
