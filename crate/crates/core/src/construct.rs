//! Algebraic integers of degree `n+1` with `t` conjugates near `ξ`, and the lower bounds
//! limiting such approximation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::convexbody::{self, BodySpec};
use crate::error::{Error, Result};
use crate::exactnum::dyadic::{round_nearest, ComplexBall};
use crate::exactnum::factor::{is_eisenstein, is_irreducible, FACTOR_DEGREE_CAP};
use crate::exactnum::interval::{round_down, round_up, Interval};
use crate::exactnum::linalg;
use crate::exactnum::primes::is_prime_u64;
use crate::exactnum::rational::{self, from_bigint, int, rat, serde_int, serde_rational};
use crate::exactnum::real::{precision_cap, serialize_display, LiouvilleSeries, RealNumber};
use crate::exactnum::roots::{self, certified_roots, certified_roots_until, order_statistic};
use crate::exactnum::{RatPoly, Rational};
use crate::heights::height_poly;
use crate::report::{Inequality, Verdict};

/// Desk cap on `n` for the construction experiment.
pub const EXPERIMENT_DEGREE_CAP: usize = 5;
/// Most halvings of `ε` tried by [`eisenstein_lift`].
pub const MAX_HALVINGS: u32 = 20;

fn root_cap() -> u64 {
    precision_cap().max(256)
}

/// `B(T) = ∏_{i=1}^{t} (T − i/(t+1))`.
pub fn base_root_poly(t: usize) -> Result<RatPoly> {
    if t == 0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    let d = t as i64 + 1;
    Ok((1..=t as i64).fold(RatPoly::one(), |acc, i| &acc * &RatPoly::linear_root(&rat(i, d))))
}

/// A monic integer polynomial, irreducible by Eisenstein's criterion, with certified roots.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicInteger {
    pub min_poly: RatPoly,
    pub eisenstein_prime: u64,
    pub roots: Vec<ComplexBall>,
    /// Indices into `roots` of the `t` roots nearest to `ξ`.
    pub selected: Vec<usize>,
}

/// Everything recorded by one successful lift.
#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub alg: AlgebraicInteger,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub halvings: u32,
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational")]
    pub s: Rational,
    #[serde(with = "rational::serde_int_vec")]
    pub b: Vec<BigInt>,
    /// Determinant of the witness coefficient matrix.
    #[serde(with = "serde_int")]
    pub det: BigInt,
    #[serde(with = "serde_rational")]
    pub height: Rational,
    /// `C` with `H(P) ≤ C·Y` from the triangle inequality.
    #[serde(with = "serde_rational")]
    pub constant: Rational,
    pub height_check: Inequality,
    pub roots_in_disk: usize,
}

/// Least prime not dividing `d` (which must be nonzero).
pub fn least_prime_not_dividing(d: &BigInt) -> u64 {
    (2u64..).filter(|&p| is_prime_u64(p)).find(|&p| !(d % BigInt::from(p)).is_zero()).unwrap()
}

/// `x` modulo `m` for a rational whose denominator is prime to `m`.
fn residue(x: &Rational, m: &BigInt) -> Option<BigInt> {
    let g = x.denom().extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some((x.numer() * g.x).mod_floor(m))
}

/// The element of `γ + mℤ` nearest to `θ`.
fn nearest_in_class(gamma: &BigInt, m: &BigInt, theta: &Rational) -> BigInt {
    let k = round_nearest(&((theta - from_bigint(gamma.clone())) / from_bigint(m.clone())));
    gamma + m * k
}

fn coeffs_padded(p: &RatPoly, len: usize) -> Vec<Rational> {
    (0..len).map(|i| p.coeff(i)).collect()
}

/// Coefficient rows of `n+1` integer polynomials of degree at most `n`.
pub fn witness_matrix(witnesses: &[RatPoly]) -> Result<linalg::IntMatrix> {
    let n1 = witnesses.len();
    witnesses
        .iter()
        .map(|p| {
            if !p.is_zero() && p.deg() >= n1 {
                return Err(Error::DegreeOverflow { degree: p.deg(), cap: n1 - 1 });
            }
            p.int_coeffs().map(|c| (0..n1).map(|i| c.get(i).cloned().unwrap_or_default()).collect()).ok_or(Error::NonIntegerCoefficients)
        })
        .collect()
}

/// Builds `P = T^{n+1} + Σ b_i P_i`, Eisenstein at `q`, with `t` roots in `D(ξ, δ)`.
///
/// The `b_i` lie in the class of the coordinates of `q` modulo `q²` and are nearest there
/// to the coordinates of `R = (T−ξ)^{n+1} + s·B((T−ξ)/r)`, with `r = min(δ, ε)` and
/// `s = κ ε^{−t−2} r^t Y`. `ε` starts at `2/q²` and is halved until the roots cluster.
#[allow(clippy::too_many_arguments)]
pub fn eisenstein_lift(
    witnesses: &[RatPoly],
    xi: &RealNumber,
    delta: &Rational,
    y: &Rational,
    kappa: &Rational,
    t: usize,
    q: u64,
) -> Result<LiftReport> {
    let n1 = witnesses.len();
    if n1 < 2 || t == 0 || t > n1 {
        return Err(Error::Precondition(format!("need 1 <= t <= n with {n1} witnesses")));
    }
    if !(delta.is_positive() && *delta < Rational::one() && *y > Rational::one() && *kappa >= Rational::one()) {
        return Err(Error::Precondition("need 0 < delta < 1 < Y and kappa >= 1".into()));
    }
    if !is_prime_u64(q) {
        return Err(Error::Precondition(format!("{q} is not prime")));
    }
    let w = witness_matrix(witnesses)?;
    let det = linalg::det_int(&w);
    if det.is_zero() {
        return Err(Error::Precondition("witnesses are linearly dependent".into()));
    }
    let qb = BigInt::from(q);
    if (&det % &qb).is_zero() {
        return Err(Error::PrimeDividesD(q));
    }
    let wt = linalg::transpose(&linalg::to_rational(&w));
    let q2 = &qb * &qb;
    let mut e0 = vec![Rational::zero(); n1];
    e0[0] = from_bigint(qb.clone());
    let gamma = linalg::solve(&wt, &e0).ok_or_else(|| Error::HardAssertion("witness matrix is singular".into()))?;
    let gamma: Vec<BigInt> = gamma
        .iter()
        .map(|g| residue(g, &q2).ok_or_else(|| Error::HardAssertion("coordinate of q is not q-integral".into())))
        .collect::<Result<_>>()?;
    let b_poly = base_root_poly(t)?;
    let xi_t = xi.enclosure(256).mid();
    let abs_xi = xi.abs_upper();
    let tn = RatPoly::monomial(n1);
    let norms: Rational = witnesses.iter().map(RatPoly::norm_inf).sum();
    let cap = root_cap();
    let mut eps = rat(2, 1) / from_bigint(q2.clone());
    for halvings in 0..=MAX_HALVINGS {
        let r = delta.clone().min(eps.clone());
        let s = kappa * rational::powi(&eps, -(t as i64) - 2) * rational::pow(&r, t as u64) * y;
        let shifted = RatPoly::linear_root(&xi_t).pow(n1);
        let scaled = b_poly.compose_linear(&r.recip(), &(-&xi_t / &r)).scale(&s);
        let f = &(&shifted + &scaled) - &tn;
        let theta = linalg::solve(&wt, &coeffs_padded(&f, n1)).ok_or_else(|| Error::HardAssertion("witness matrix is singular".into()))?;
        let b: Vec<BigInt> = gamma.iter().zip(&theta).map(|(g, th)| nearest_in_class(g, &q2, th)).collect();
        let p = witnesses.iter().zip(&b).fold(tn.clone(), |acc, (pi, bi)| &acc + &pi.scale(&from_bigint(bi.clone())));
        if !is_eisenstein(&p, &qb) {
            return Err(Error::HardAssertion(format!("{p} is not Eisenstein at {q}")));
        }
        let count = roots::count_roots_in_disk(&p, xi, delta, cap)?;
        if count >= t {
            if !is_irreducible(&p, FACTOR_DEGREE_CAP as u64)? {
                return Err(Error::HardAssertion(format!("Eisenstein polynomial {p} factors")));
            }
            let height = height_poly(&p)?;
            // ‖P‖ ≤ ‖R − T^{n+1}‖ + Σ|b_i − θ_i|·‖P_i‖, with |b_i − θ_i| ≤ q²/2 plus the error in ξ.
            let one = Rational::one();
            let binom = rational::pow(&(&abs_xi + &one), n1 as u64);
            let b_part: Rational = (0..=t)
                .map(|k| b_poly.coeff(k).abs() * rational::powi(&r, -(k as i64)) * rational::pow(&(&abs_xi + &one), k as u64))
                .sum::<Rational>()
                * &s;
            let rounding = (from_bigint(q2.clone()) / int(2) + &one) * &norms;
            let constant = round_up(&((binom + b_part + rounding) / y), 64);
            let height_check = Inequality::le_exact("H(P) <= C Y", height.clone(), &constant * y);
            let alg = algebraic_integer(&p, q, xi, t)?;
            return Ok(LiftReport { alg, epsilon: eps, halvings, r, s, b, det, height, constant, height_check, roots_in_disk: count });
        }
        eps /= int(2);
    }
    Err(Error::RootClusterFailed(MAX_HALVINGS))
}

fn algebraic_integer(p: &RatPoly, q: u64, xi: &RealNumber, t: usize) -> Result<AlgebraicInteger> {
    let (c, order) = roots::roots_by_distance(p, xi, root_cap())?;
    if c.balls.len() != p.deg() {
        return Err(Error::HardAssertion(format!("{} certified roots for degree {}", c.balls.len(), p.deg())));
    }
    let selected = order
        .iter()
        .take(t)
        .map(|(b, _)| c.balls.iter().position(|x| x == b).unwrap())
        .collect();
    Ok(AlgebraicInteger {
        min_poly: p.clone(),
        eisenstein_prime: q,
        roots: c.balls.iter().map(|b| b.to_complex_ball()).collect(),
        selected,
    })
}

/// `x^{num/den}` rounded up to a rational with about 64 significant bits.
fn pow_frac_up(x: &Rational, num: u32, den: u32) -> Rational {
    let v = rational::pow(x, num as u64);
    if den == 1 {
        return v;
    }
    // (a/b)^{1/d} = (a b^{d−1})^{1/d} / b.
    let (a, b) = (v.numer().clone(), v.denom().clone());
    let scale = BigInt::one() << (64 * den as usize);
    let m = a * num_traits::pow(b.clone(), den as usize - 1) * scale;
    let r = m.nth_root(den);
    let r = if num_traits::pow(r.clone(), den as usize) == m { r } else { r + 1 };
    Rational::new(r, b << 64)
}

/// One schedule point of the construction experiment.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxRecord {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub y: Rational,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    /// Upper bound on `λ_{n+1}` of the dual body, at least 1.
    #[serde(with = "serde_rational")]
    pub kappa: Rational,
    pub q: u64,
    pub lift: LiftReport,
    #[serde(with = "serde_rational")]
    pub h_alpha: Rational,
    /// `max_i |ξ − α_i|` over the selected conjugates.
    pub max_conj_distance: Interval,
    /// `−log(max distance)/log H(α)`.
    pub exponent: Interval,
    /// `Y_0 ≤ Y δ^t` required by the lift.
    pub premise: Inequality,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentParams {
    pub n: usize,
    pub t: usize,
    pub k: usize,
    /// Constant `c` in `X_j = cX^{−t/(k+1−t)}`; the experiment fixes `c = 1`.
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(serialize_with = "serialize_display")]
    pub xi: RealNumber,
    /// `(n+1)/(4t²)`.
    #[serde(with = "serde_rational")]
    pub target_exponent: Rational,
}

pub fn experiment_params(xi: &RealNumber, n: usize, t: usize) -> Result<ExperimentParams> {
    if n > EXPERIMENT_DEGREE_CAP {
        return Err(Error::CapExceeded(format!("n = {n} exceeds {EXPERIMENT_DEGREE_CAP}")));
    }
    let k = n / 4;
    if k == 0 || t == 0 || t > k {
        return Err(Error::Precondition(format!("need 1 <= t <= n/4 (n = {n}, t = {t})")));
    }
    if xi.as_rational().is_some() {
        return Err(Error::Precondition("xi must be irrational".into()));
    }
    Ok(ExperimentParams {
        n,
        t,
        k,
        c: Rational::one(),
        xi: xi.clone(),
        target_exponent: rat(n as i64 + 1, 4 * (t * t) as i64),
    })
}

fn schedule_point(p: &ExperimentParams, x: &Rational) -> Result<ApproxRecord> {
    let (n, t, k) = (p.n, p.t, p.k);
    if *x <= Rational::one() {
        return Err(Error::Precondition("schedule values must exceed 1".into()));
    }
    let y = pow_frac_up(x, t as u32, (k + 1 - t) as u32) / &p.c;
    let delta = pow_frac_up(&(x * &y).recip(), 1, t as u32);
    let yt: Vec<Rational> = (0..=n).map(|j| if j < t { x.recip() } else { y.clone() }).collect();
    let premise = Inequality::le_exact("Y_0 <= Y delta^t", yt[0].clone(), &y * rational::pow(&delta, t as u64));
    let body = BodySpec::new(p.xi.clone(), yt)?;
    let minima = convexbody::successive_minima(&body)?;
    let kappa = minima.lambdas[n].to_interval().hi.max(Rational::one());
    let det = linalg::det_int(&witness_matrix(&minima.witnesses)?);
    let q = least_prime_not_dividing(&det);
    let lift = eisenstein_lift(&minima.witnesses, &p.xi, &delta, &y, &kappa, t, q)?;
    let bits = root_cap();
    let (c, t_dist) = certified_roots_until(&lift.alg.min_poly, bits, |c| {
        let xe = p.xi.enclosure(c.bits + 16);
        let d: Vec<Interval> = c.balls.iter().map(|b| b.distance_to(&xe, c.bits + 16)).collect();
        let dt = order_statistic(&d, t);
        dt.lo.is_positive().then_some(dt)
    })?;
    drop(c);
    let h_alpha = lift.height.clone();
    let lh = Interval::point(h_alpha.clone()).ln(bits)?;
    let exponent = (-&t_dist.ln(bits)?).div(&lh)?;
    Ok(ApproxRecord {
        x: x.clone(),
        y,
        delta,
        kappa,
        q,
        lift,
        h_alpha,
        max_conj_distance: t_dist.round_out(64),
        exponent: exponent.round_out(64),
        premise,
    })
}

/// Runs the construction at each schedule point (independently, results in schedule order).
#[allow(non_snake_case)]
pub fn theorem_A_experiment(xi: &RealNumber, n: usize, t: usize, schedule: &[Rational]) -> Result<Vec<ApproxRecord>> {
    let params = experiment_params(xi, n, t)?;
    schedule.par_iter().map(|x| schedule_point(&params, x)).collect()
}

/// The final display of the discriminant argument, certified.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantRecord {
    pub n: usize,
    pub t: usize,
    #[serde(with = "serde_rational")]
    pub height: Rational,
    /// `(2^n (n+1))^{n−1} H(P)^{2(n−1)}`.
    #[serde(with = "serde_rational")]
    pub constant: Rational,
    /// Distance from `ξ` to the `t`-th nearest root.
    pub distance: Interval,
    /// `1 ≤ constant · distance^{t(t−1)}`.
    pub check: Inequality,
}

pub fn discriminant_constant(n: usize, h: &Rational) -> Rational {
    rational::pow(&int((1i64 << n) * (n as i64 + 1)), n as u64 - 1) * rational::pow(h, 2 * (n as u64 - 1))
}

pub fn prop_10_1_check(p: &RatPoly, xi: &RealNumber, t: usize) -> Result<DiscriminantRecord> {
    let n = p.deg();
    if p.is_zero() || t < 2 || t > n {
        return Err(Error::Precondition(format!("need 2 <= t <= deg P (t = {t})")));
    }
    if !is_irreducible(p, FACTOR_DEGREE_CAP as u64)? {
        return Err(Error::Reducible);
    }
    let height = height_poly(p)?;
    let constant = discriminant_constant(n, &height);
    let e = (t * (t - 1)) as u32;
    let (_, (distance, check)) = certified_roots_until(p, root_cap(), |c| {
        let xe = xi.enclosure(c.bits + 16);
        let d: Vec<Interval> = c.balls.iter().map(|b| b.distance_to(&xe, c.bits + 16)).collect();
        let dt = order_statistic(&d, t);
        let ineq = Inequality::le("1 <= (2^n(n+1))^(n-1) H(P)^(2(n-1)) |xi - alpha_t|^(t(t-1))", Interval::int(1), dt.pow(e).scale(&constant));
        (ineq.verdict != Verdict::Undecided).then_some((dt, ineq))
    })?;
    if check.verdict == Verdict::Violated {
        return Err(Error::HardAssertion(format!("discriminant bound fails for {p} at t = {t}")));
    }
    Ok(DiscriminantRecord { n, t, height, constant, distance, check })
}

/// `Some(true)` when Pellet's test at `ρ = 1/v` shows at most `t−1` roots of `P` within `ρ` of `ξ = a/b`.
fn pellet_certify(c: &[i64], a: i64, b: i64, v: i128, t: usize) -> Option<bool> {
    let d = c.len() - 1;
    // C_k = b^d · P^{(k)}(ξ)/k!.
    let mut ck = [0i128; 8];
    for (k, slot) in ck.iter_mut().enumerate().take(d + 1) {
        let mut s: i128 = 0;
        for (i, &pi) in c.iter().enumerate().skip(k) {
            let binom = rational::binomial(i as u64, k as u64).to_i128()?;
            let term = (pi as i128)
                .checked_mul(binom)?
                .checked_mul((a as i128).checked_pow((i - k) as u32)?)?
                .checked_mul((b as i128).checked_pow((d - i + k) as u32)?)?;
            s = s.checked_add(term)?;
        }
        *slot = s.checked_abs()?;
    }
    // |C_m| v^{d−m} > Σ_{k≠m} |C_k| v^{d−k}.
    let w: Vec<i128> = (0..=d).map(|k| ck[k].checked_mul(v.checked_pow((d - k) as u32)?)).collect::<Option<_>>()?;
    let total = w.iter().try_fold(0i128, |acc, &x| acc.checked_add(x))?;
    Some((0..t.min(d + 1)).any(|m| w[m] > total - w[m]))
}

/// `⌊A^{1/e}⌋` for a positive integer `A`.
fn int_root_floor(a: &BigInt, e: u32) -> BigInt {
    a.nth_root(e)
}

fn has_rational_root(c: &[i64]) -> bool {
    let d = c.len() - 1;
    if c[0] == 0 {
        return true;
    }
    let divisors = |x: i64| -> Vec<i64> { (1..=x.abs()).filter(|k| x % k == 0).collect() };
    let (num, den) = (divisors(c[0]), divisors(c[d]));
    for &p in &num {
        for &q in &den {
            if p.gcd(&q) != 1 {
                continue;
            }
            for s in [p, -p] {
                // Σ c_i s^i q^{d−i} = 0.
                let mut acc: i128 = 0;
                for (i, &ci) in c.iter().enumerate() {
                    acc += ci as i128 * (s as i128).pow(i as u32) * (q as i128).pow((d - i) as u32);
                }
                if acc == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// All primitive integer polynomials of exact degree `d ≤ 3` with positive leading
/// coefficient, `H ≤ hmax` and no rational root (for `d ≤ 3`, exactly the irreducible ones).
pub fn irreducible_polys(d: usize, hmax: i64) -> Vec<Vec<i64>> {
    assert!((1..=3).contains(&d));
    let mut out = Vec::new();
    let range: Vec<i64> = (-hmax..=hmax).collect();
    let mut c = vec![0i64; d + 1];
    fn rec(i: usize, c: &mut Vec<i64>, range: &[i64], d: usize, hmax: i64, out: &mut Vec<Vec<i64>>) {
        if i == d {
            for lead in 1..=hmax {
                c[d] = lead;
                let g = c.iter().fold(0i64, |g, &x| g.gcd(&x));
                if g != 1 {
                    continue;
                }
                if d == 1 || !has_rational_root(c) {
                    out.push(c.clone());
                }
            }
            return;
        }
        for &v in range {
            c[i] = v;
            rec(i + 1, c, range, d, hmax, out);
        }
    }
    rec(0, &mut c, &range, d, hmax, &mut out);
    out
}

/// Summary of the exhaustive discriminant-bound sweep.
#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantSweep {
    pub polys: usize,
    pub checks: usize,
    /// Certified by Pellet's test without computing roots.
    pub pellet: usize,
    /// Certified from root enclosures.
    pub roots: usize,
    /// Pellet-certified checks re-verified from root enclosures.
    pub cross_checked: usize,
    pub violations: usize,
}

/// Every irreducible polynomial of degree `2..=dmax` and height `≤ hmax`, at each `ξ`,
/// for every `t` in `2..=deg`.
pub fn prop_10_1_sweep(dmax: usize, hmax: i64, xis: &[Rational], cross_every: usize) -> Result<DiscriminantSweep> {
    let mut sw = DiscriminantSweep { polys: 0, checks: 0, pellet: 0, roots: 0, cross_checked: 0, violations: 0 };
    for d in 2..=dmax {
        let polys = irreducible_polys(d, hmax);
        sw.polys += polys.len();
        // ⌊A^{1/(t(t−1))}⌋ by height and t.
        let radii: Vec<Vec<i128>> = (0..=hmax)
            .map(|h| {
                (0..=d)
                    .map(|t| {
                        if h == 0 || t < 2 {
                            return 0;
                        }
                        let cst = discriminant_constant(d, &int(h)).to_integer();
                        int_root_floor(&cst, (t * (t - 1)) as u32).to_i128().unwrap()
                    })
                    .collect()
            })
            .collect();
        let xi_ab: Vec<(i64, i64)> = xis.iter().map(|x| (x.numer().to_i64().unwrap(), x.denom().to_i64().unwrap())).collect();
        let parts: Vec<Result<[usize; 5]>> = polys
            .par_chunks(4096)
            .enumerate()
            .map(|(ci, chunk)| {
                let mut s = [0usize; 5];
                for (pi, c) in chunk.iter().enumerate() {
                    let h = c.iter().map(|x| x.abs()).max().unwrap();
                    let poly = || RatPoly::from_ints(c);
                    for (xj, (xi, &(a, b))) in xis.iter().zip(&xi_ab).enumerate() {
                        for t in 2..=d {
                            s[0] += 1;
                            let v = radii[h as usize][t];
                            let serial = (ci * 4096 + pi) * xis.len() + xj;
                            if pellet_certify(c, a, b, v, t) == Some(true) {
                                s[1] += 1;
                                if cross_every > 0 && serial.is_multiple_of(cross_every) {
                                    s[3] += 1;
                                    if !prop_10_1_check(&poly(), &RealNumber::Rational(xi.clone()), t)?.check.holds() {
                                        s[4] += 1;
                                    }
                                }
                            } else {
                                s[2] += 1;
                                match prop_10_1_check(&poly(), &RealNumber::Rational(xi.clone()), t) {
                                    Ok(r) if r.check.holds() => {}
                                    Ok(_) | Err(Error::HardAssertion(_)) => s[4] += 1,
                                    Err(e) => return Err(e),
                                }
                            }
                        }
                    }
                }
                Ok(s)
            })
            .collect();
        for p in parts {
            let s = p?;
            sw.checks += s[0];
            sw.pellet += s[1];
            sw.roots += s[2];
            sw.cross_checked += s[3];
            sw.violations += s[4];
        }
    }
    Ok(sw)
}

/// `ξ_1..ξ_t` for the simultaneous-approximation counterexample, `b = (t+1)n`.
pub fn liouville_targets(n: usize, t: usize) -> Result<Vec<RealNumber>> {
    (1..=t as u64).map(|j| LiouvilleSeries::new(j, t as u64, n as u64).map(RealNumber::Liouville)).collect()
}

/// A root of an irreducible integer polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicNumber {
    pub min_poly: RatPoly,
    pub root: ComplexBall,
}

impl AlgebraicNumber {
    pub fn rational(r: &Rational) -> Self {
        let p = RatPoly::from_bigints(&[-r.numer().clone(), r.denom().clone()]);
        AlgebraicNumber { min_poly: p, root: ComplexBall { re: r.clone(), im: Rational::zero(), radius: Rational::zero() } }
    }

    /// All roots of the irreducible `p`, as primitive minimal polynomial plus certified ball.
    pub fn roots_of(p: &RatPoly) -> Result<Vec<AlgebraicNumber>> {
        if !is_irreducible(p, FACTOR_DEGREE_CAP as u64)? {
            return Err(Error::Reducible);
        }
        let mp = p.primitive();
        let mp = if mp.leading().is_negative() { -&mp } else { mp };
        if mp.deg() == 1 {
            return Ok(vec![AlgebraicNumber::rational(&(-mp.coeff(0) / mp.coeff(1)))]);
        }
        let c = certified_roots(&mp, root_cap())?;
        Ok(c.balls.iter().map(|b| AlgebraicNumber { min_poly: mp.clone(), root: b.to_complex_ball() }).collect())
    }

    pub fn height(&self) -> Result<Rational> {
        height_poly(&self.min_poly)
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }
}

/// `γ(n) = 2^{1−n}(n+1)^{−1/2}`.
pub fn liouville_gamma(n: usize, bits: u64) -> Result<Interval> {
    let s = Interval::int(n as i64 + 1).sqrt(bits)?;
    Interval::point(rational::powi(&int(2), 1 - n as i64)).div(&s)
}

/// `|α − r| ≥ γ(n) H(α)^{−1} H(r)^{−n}` for `α` of degree at most `n`.
pub fn liouville_inequality_check(alpha: &AlgebraicNumber, r: &Rational, n: usize) -> Result<Inequality> {
    if alpha.degree() > n || n == 0 {
        return Err(Error::Precondition(format!("alpha has degree {} > n = {n}", alpha.degree())));
    }
    if alpha.min_poly.eval(r).is_zero() {
        return Err(Error::Equal);
    }
    let bits = root_cap();
    let hr = from_bigint(r.numer().abs().max(r.denom().clone()));
    let rhs = liouville_gamma(n, bits)?.scale(&(alpha.height()? * rational::pow(&hr, n as u64)).recip());
    let lhs = alpha.root.distance_to(&Interval::point(r.clone()), bits);
    Ok(Inequality::le("gamma(n) H(alpha)^-1 H(r)^-n <= |alpha - r|", rhs, lhs))
}

/// `κ > (t+1)^{1+1/t}/t`, decided as `(κt)^t > (t+1)^{t+1}`.
pub fn kappa_hypothesis(t: usize, kappa: &Rational) -> bool {
    rational::pow(&(kappa * int(t as i64)), t as u64) > rational::pow(&int(t as i64 + 1), t as u64 + 1)
}

/// Status of the bound at one height `H`.
#[derive(Clone, Debug, Serialize)]
pub struct HeightStatus {
    pub h: i64,
    /// `H^{−κ n^{1/t}}`.
    pub bound: Interval,
    pub verdict: Verdict,
    /// Lower bound on `max_j min_α |ξ_j − α|` divided by the bound, capped at the screening factor.
    #[serde(with = "serde_rational")]
    pub slack: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversarialReport {
    pub n: usize,
    pub t: usize,
    #[serde(with = "serde_rational")]
    pub kappa: Rational,
    pub hypothesis: bool,
    pub polys: usize,
    /// Polynomials whose roots needed certified distances, per target.
    pub candidates: Vec<usize>,
    pub statuses: Vec<HeightStatus>,
    /// Least `H_0` such that the bound holds for every integer `H` in `[H_0, H_max]`.
    pub h0: Option<i64>,
    #[serde(with = "serde_rational")]
    pub min_slack: Rational,
}

/// Screening radius in units of the bound.
const SCREEN: i64 = 4;

/// A dyadic partial sum `r` of the series and `ε` with `0 ≤ ξ − r ≤ ε`.
fn dyadic_center(s: &LiouvilleSeries, max_exp: u64) -> (Rational, Rational) {
    let mut terms = 0;
    while s.exponent(s.index(terms)) <= BigInt::from(max_exp) {
        terms += 1;
    }
    (s.partial_sum(terms), s.tail_bound(terms))
}

/// No root of `c` in the closed disk `D(center, radius)`, by Pellet's test with `m = 0`.
fn no_root_in_disk(c: &[i64], center: &Rational, radius: &Rational) -> bool {
    let p = RatPoly::from_ints(c);
    let tc = p.taylor_coeffs_at(center);
    let mut rest = Rational::zero();
    let mut pw = Rational::one();
    for ck in tc.iter().skip(1) {
        pw *= radius;
        rest += ck.abs() * &pw;
    }
    tc[0].abs() > rest
}

pub fn prop_10_2_adversarial(n: usize, t: usize, kappa: &Rational, h_max: i64) -> Result<AdversarialReport> {
    if n == 0 || t == 0 {
        return Err(Error::Precondition("need n, t >= 1".into()));
    }
    if n > 3 || h_max > 50 {
        return Err(Error::CapExceeded(format!("desk caps n <= 3, H_max <= 50 (n = {n}, H_max = {h_max})")));
    }
    let hypothesis = kappa_hypothesis(t, kappa);
    if !hypothesis {
        return Err(Error::Precondition("kappa does not exceed (t+1)^(1+1/t)/t".into()));
    }
    let bits = 128;
    let targets = liouville_targets(n, t)?;
    // κ n^{1/t} and ρ(H) = exp(−κ n^{1/t} log H).
    let expo = Interval::int(n as i64).powr(&Interval::point(rat(1, t as i64)), bits)?.scale(kappa);
    let rho = |h: i64| -> Result<Interval> {
        let l = Interval::int(h).ln(bits)?;
        Ok((-&(&expo * &l)).exp(bits))
    };
    let rhos: Vec<Interval> = (1..=h_max).map(rho).collect::<Result<_>>()?;
    let mut polys: Vec<Vec<i64>> = Vec::new();
    for d in 1..=n {
        polys.extend(irreducible_polys(d, h_max));
    }
    let mut candidates = Vec::new();
    // Per target: (height, certified min distance) of polynomials with a root near ξ_j.
    let mut near: Vec<Vec<(i64, Interval)>> = Vec::new();
    for tgt in &targets {
        let RealNumber::Liouville(s) = tgt else { unreachable!() };
        let (center, tail) = dyadic_center(s, 60);
        let found: Vec<Result<Option<(i64, Interval)>>> = polys
            .par_iter()
            .map(|c| {
                let h = c.iter().map(|x| x.abs()).max().unwrap();
                let radius = rhos[h as usize - 1].hi.clone() * int(SCREEN) + &tail;
                if no_root_in_disk(c, &center, &radius) {
                    return Ok(None);
                }
                let (_, order) = roots::roots_by_distance(&RatPoly::from_ints(c), tgt, root_cap())?;
                let dists: Vec<Interval> = order.into_iter().map(|(_, d)| d).collect();
                Ok(Some((h, order_statistic(&dists, 1))))
            })
            .collect();
        let list: Vec<(i64, Interval)> = found.into_iter().filter_map(|r| r.transpose()).collect::<Result<_>>()?;
        candidates.push(list.len());
        near.push(list);
    }
    let mut statuses = Vec::new();
    for h in 1..=h_max {
        let bound = rhos[h as usize - 1].clone();
        let mut any_pass = false;
        let mut all_fail = true;
        let mut slack = Rational::zero();
        for list in &near {
            let relevant: Vec<&Interval> = list.iter().filter(|(hp, _)| *hp <= h).map(|(_, d)| d).collect();
            let fail = relevant.iter().any(|d| d.hi < bound.lo);
            let pass = relevant.iter().all(|d| d.lo >= bound.hi);
            any_pass |= pass;
            all_fail &= fail;
            let s = relevant.iter().map(|d| &d.lo / &bound.hi).min().unwrap_or_else(|| int(SCREEN)).min(int(SCREEN));
            slack = slack.max(s);
        }
        let verdict = if any_pass {
            Verdict::Holds
        } else if all_fail {
            Verdict::Violated
        } else {
            Verdict::Undecided
        };
        statuses.push(HeightStatus { h, bound: bound.round_out(64), verdict, slack: round_down(&slack, 64) });
    }
    let h0 = statuses.iter().rposition(|s| s.verdict != Verdict::Holds).map_or(Some(1), |i| {
        if i + 1 < statuses.len() {
            Some(statuses[i + 1].h)
        } else {
            None
        }
    });
    let min_slack = statuses
        .iter()
        .filter(|s| h0.is_some_and(|h0| s.h >= h0))
        .map(|s| s.slack.clone())
        .min()
        .unwrap_or_else(Rational::zero);
    Ok(AdversarialReport { n, t, kappa: kappa.clone(), hypothesis, polys: polys.len(), candidates, statuses, h0, min_slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::real::real_nth_root;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn base_roots() {
        assert_eq!(base_root_poly(1).unwrap(), RatPoly::linear_root(&rat(1, 2)));
        let b2 = base_root_poly(2).unwrap();
        assert_eq!(b2, &RatPoly::linear_root(&rat(1, 3)) * &RatPoly::linear_root(&rat(2, 3)));
        let b3 = base_root_poly(3).unwrap();
        assert!((1..=3).all(|i| b3.eval(&rat(i, 4)).is_zero()));
        assert_eq!(b3.deg(), 3);
    }

    #[test]
    fn residue_rounding() {
        let m = BigInt::from(9);
        for th in [rat(0, 1), rat(7, 3), rat(-41, 2), rat(100, 7)] {
            for g in 0..9 {
                let b = nearest_in_class(&BigInt::from(g), &m, &th);
                assert!((&b - BigInt::from(g)).mod_floor(&m).is_zero());
                assert!((from_bigint(b) - &th).abs() <= rat(9, 2));
            }
        }
        assert_eq!(residue(&rat(1, 2), &m), Some(BigInt::from(5)));
        assert_eq!(residue(&rat(1, 3), &m), None);
    }

    #[test]
    fn lift_trivial_basis() {
        let xi = RealNumber::Rational(rat(1, 2));
        let basis = [RatPoly::one(), RatPoly::monomial(1)];
        let delta = rat(1, 100);
        let rep = eisenstein_lift(&basis, &xi, &delta, &int(10), &int(1), 1, 3).unwrap();
        let pp = &rep.alg.min_poly;
        assert_eq!(pp.deg(), 2);
        assert!(pp.leading().is_one());
        assert!(is_eisenstein(pp, &BigInt::from(3)));
        assert!(roots::count_roots_in_disk(pp, &xi, &delta, 256).unwrap() >= 1);
        assert!(rep.height_check.holds());
        assert!(is_eisenstein(&p(&[3, 0, 1]), &BigInt::from(3)));
        assert!(matches!(eisenstein_lift(&basis, &xi, &delta, &int(10), &int(1), 1, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn small_experiment() {
        let xi = RealNumber::Algebraic(real_nth_root(2, 3));
        let recs = theorem_A_experiment(&xi, 4, 1, &[int(10)]).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.lift.alg.min_poly.deg(), 5);
        assert!(r.max_conj_distance.lo.is_positive());
        assert!(r.max_conj_distance.hi <= r.delta);
        assert!(r.premise.holds() && r.lift.height_check.holds());
        assert!(matches!(theorem_A_experiment(&RealNumber::Rational(int(1)), 4, 1, &[int(10)]), Err(Error::Precondition(_))));
    }

    #[test]
    fn discriminant_examples() {
        let zero = RealNumber::Rational(int(0));
        let r = prop_10_1_check(&p(&[-2, 0, 1]), &zero, 2).unwrap();
        assert_eq!(r.constant, int(48));
        assert!(r.check.holds());
        assert!(r.distance.contains(&rat(14142, 10000)) || r.distance.lo > rat(14142, 10000));
        let r = prop_10_1_check(&p(&[1, 0, 1]), &zero, 2).unwrap();
        assert!(r.distance.contains(&int(1)));
        assert_eq!(prop_10_1_check(&p(&[-1, 0, 1]), &zero, 2).unwrap_err(), Error::Reducible);
    }

    #[test]
    fn pellet_matches_roots() {
        for c in irreducible_polys(2, 4).iter().take(200) {
            for (a, b) in [(0, 1), (1, 3), (5, 7)] {
                let h = c.iter().map(|x| x.abs()).max().unwrap();
                let v = int_root_floor(&discriminant_constant(2, &int(h)).to_integer(), 2).to_i128().unwrap();
                if pellet_certify(c, a, b, v, 2) == Some(true) {
                    assert!(prop_10_1_check(&RatPoly::from_ints(c), &RealNumber::Rational(rat(a, b)), 2).unwrap().check.holds());
                }
            }
        }
    }

    #[test]
    fn liouville_examples() {
        let t = liouville_targets(2, 2).unwrap();
        let RealNumber::Liouville(s) = &t[0] else { panic!() };
        let a: Vec<i64> = (1..=4).map(|l| s.exponent(l).to_i64().unwrap()).collect();
        assert_eq!(a, vec![2, 6, 14, 36]);
        let third = AlgebraicNumber::rational(&rat(1, 3));
        let ineq = liouville_inequality_check(&third, &rat(1, 2), 1).unwrap();
        assert!(ineq.holds());
        assert!(ineq.rhs.contains(&rat(1, 6)));
        let sqrt2 = AlgebraicNumber::roots_of(&p(&[-2, 0, 1])).unwrap().into_iter().find(|a| a.root.re.is_positive()).unwrap();
        assert!(liouville_inequality_check(&sqrt2, &int(1), 2).unwrap().holds());
        assert_eq!(liouville_inequality_check(&third, &rat(1, 3), 1).unwrap_err(), Error::Equal);
    }

    #[test]
    fn adversarial_rationals() {
        let r = prop_10_2_adversarial(1, 1, &int(5), 30).unwrap();
        assert!(r.h0.is_some_and(|h| h <= 30));
        assert!(r.statuses.last().unwrap().verdict == Verdict::Holds);
        assert!(matches!(prop_10_2_adversarial(2, 2, &rat(5, 2), 10), Err(Error::Precondition(_))));
        assert!(matches!(prop_10_2_adversarial(4, 2, &int(3), 10), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn kappa_threshold() {
        assert!(kappa_hypothesis(2, &int(3)));
        assert!(!kappa_hypothesis(2, &rat(5, 2)));
        assert!(kappa_hypothesis(1, &int(5)));
    }
}
