//! Convex bodies `C(X) = {P ∈ ℤ[T]_{≤n} : |P^{(j)}(ξ)| ≤ X_j}` and their successive minima.
//!
//! Lattice points are enumerated coordinate by coordinate from the top degree down:
//! the Taylor coefficient `c_j = P^{(j)}(ξ)/j!` equals `a_j` plus a combination of the
//! higher coefficients, so each bound `|c_j| ≤ λX_j/j!` pins `a_j` to an interval.
//! Interval endpoints are computed in `f64` with explicit rounding margins, so the
//! enumerated set always contains the body; membership, ordering and ties are then
//! decided exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::dyadic::DyadicBall;
use crate::exactnum::interval::Interval;
use crate::exactnum::linalg;
use crate::exactnum::rational::{self, factorial, int, serde_rational};
use crate::exactnum::real::{eval_interval, precision_cap, RealNumber};
use crate::exactnum::{RatPoly, Rational};
use crate::report::Inequality;

/// Largest ambient degree for exhaustive minima.
pub const MINIMA_DIMENSION_CAP: usize = 6;
/// Largest ambient degree for [`duality_products`].
pub const DUALITY_DIMENSION_CAP: usize = 4;
/// Enumeration gives up past this many candidate leaves in one pass.
pub const ENUMERATION_LEAF_CAP: u64 = 50_000_000;

/// Relative error allowance for the floating-point enumeration bounds.
const FP_GAMMA: f64 = 1.0 / (1u64 << 36) as f64;

/// `(ξ, X_0..X_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodySpec {
    pub n: usize,
    pub xi: RealNumber,
    pub x: Vec<Rational>,
}

impl BodySpec {
    pub fn new(xi: RealNumber, x: Vec<Rational>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Precondition("empty X tuple".into()));
        }
        if x.iter().any(|v| !v.is_positive()) {
            return Err(Error::Precondition("X_j must be positive".into()));
        }
        Ok(BodySpec { n: x.len() - 1, xi: xi.refined(256), x })
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        BodySpec { n: self.n, xi: self.xi.clone(), x: self.x.iter().map(|v| v * c).collect() }
    }

    /// The body on the dual tuple.
    pub fn dual(&self) -> Self {
        BodySpec { n: self.n, xi: self.xi.clone(), x: dual_tuple(&self.x) }
    }
}

/// `Y_i = 1/X_{n−i}`.
pub fn dual_tuple(x: &[Rational]) -> Vec<Rational> {
    x.iter().rev().map(|v| v.recip()).collect()
}

/// `2^{n+1} ∏X_j / ∏ j!`.
pub fn volume(body: &BodySpec) -> Rational {
    let n = body.n;
    let num = body.x.iter().fold(Rational::from_integer(BigInt::one() << (n + 1)), |acc, v| acc * v);
    let den = (0..=n as u64).fold(BigInt::one(), |acc, j| acc * factorial(j));
    num / Rational::from_integer(den)
}

/// `Vol ≥ (2/κ)^{n+1}`, which forces `λ_1 ≤ κ`.
pub fn first_minimum_condition(body: &BodySpec, kappa: &Rational) -> Result<bool> {
    if !kappa.is_positive() {
        return Err(Error::Precondition("kappa must be positive".into()));
    }
    Ok(volume(body) >= rational::pow(&(int(2) / kappa), body.n as u64 + 1))
}

fn to_int_poly(p: &RatPoly) -> Result<()> {
    if p.is_integral() {
        Ok(())
    } else {
        Err(Error::NonIntegerCoefficients)
    }
}

/// `|a(ξ)|/x` versus `|b(ξ)|/y`, exactly.
fn cmp_ratio(xi: &RealNumber, a: &RatPoly, x: &Rational, b: &RatPoly, y: &Rational) -> Result<Ordering> {
    if let Some(r) = xi.as_rational() {
        return Ok((a.eval(r).abs() / x).cmp(&(b.eval(r).abs() / y)));
    }
    let lhs = &(a * a).scale(&(y * y)) - &(b * b).scale(&(x * x));
    xi.sign_of(&lhs).map_err(|_| Error::UndecidableTie)
}

/// `|a(ξ)|` versus `c ≥ 0`, exactly.
fn cmp_abs_const(xi: &RealNumber, a: &RatPoly, c: &Rational) -> Result<Ordering> {
    if let Some(r) = xi.as_rational() {
        return Ok(a.eval(r).abs().cmp(c));
    }
    let q = &(a * a) - &RatPoly::constant(c * c);
    xi.sign_of(&q).map_err(|_| Error::UndecidableTie)
}

/// `|P^{(j)}(ξ)| ≤ λX_j` for all `j`, decided exactly.
pub fn membership(p: &RatPoly, body: &BodySpec, lambda: &Rational) -> Result<bool> {
    to_int_poly(p)?;
    if p.deg() > body.n {
        return Ok(false);
    }
    for j in 0..=body.n {
        if cmp_abs_const(&body.xi, &p.nth_derivative(j), &(lambda * &body.x[j]))? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A successive minimum: exact when the attaining term is rational, else an enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lambda {
    Exact(#[serde(with = "serde_rational")] Rational),
    Ball(DyadicBall),
}

impl Lambda {
    pub fn to_interval(&self) -> Interval {
        match self {
            Lambda::Exact(r) => Interval::point(r.clone()),
            Lambda::Ball(b) => b.to_interval(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Lambda::Exact(r) => Some(r),
            Lambda::Ball(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.to_interval().mid())
    }
}

/// Successive minima with linearly independent integer witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaResult {
    pub lambdas: Vec<Lambda>,
    pub witnesses: Vec<RatPoly>,
    pub exhaustive: bool,
}

impl MinimaResult {
    /// Enclosure of `λ_1⋯λ_{n+1}`.
    pub fn product(&self) -> Interval {
        self.lambdas.iter().fold(Interval::int(1), |acc, l| &acc * &l.to_interval())
    }

    pub fn witness_coeffs(&self) -> Vec<Vec<BigInt>> {
        self.witnesses.iter().map(|w| w.int_coeffs().unwrap_or_default()).collect()
    }
}

impl Serialize for MinimaResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            lambdas: &'a [Lambda],
            witnesses: Vec<Vec<serde_json::Value>>,
            exhaustive: bool,
        }
        let witnesses = self
            .witness_coeffs()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|v| match v.to_i64() {
                        Some(i) => serde_json::Value::from(i),
                        None => serde_json::Value::from(v.to_string()),
                    })
                    .collect()
            })
            .collect();
        Out { lambdas: &self.lambdas, witnesses, exhaustive: self.exhaustive }.serialize(s)
    }
}

/// An enumerated lattice point with a floating estimate of `μ` and its certified error.
#[derive(Clone, Debug)]
pub struct LatticePoint {
    /// Coefficients `a_0..a_n`, highest nonzero one positive.
    pub coeffs: Vec<i64>,
    mu_f: f64,
    err: f64,
}

impl LatticePoint {
    pub fn poly(&self) -> RatPoly {
        RatPoly::from_ints(&self.coeffs)
    }

    fn lo(&self) -> f64 {
        self.mu_f - self.err
    }

    fn hi(&self) -> f64 {
        self.mu_f + self.err
    }

    fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0).unwrap_or(0)
    }

    fn l1(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).sum()
    }
}

/// Floating-point data for the enumeration at one body.
struct Frame {
    n: usize,
    /// `w[j][i] = C(i,j)·ξ^{i−j}`.
    w: Vec<Vec<f64>>,
    /// `X_j / j!`.
    f: Vec<f64>,
}

impl Frame {
    fn new(body: &BodySpec) -> Self {
        let n = body.n;
        let xi = rational::to_f64(&body.xi.enclosure(80).mid());
        let mut w = vec![vec![0.0; n + 1]; n + 1];
        for (j, row) in w.iter_mut().enumerate() {
            for (i, v) in row.iter_mut().enumerate().skip(j) {
                let b = rational::binomial(i as u64, j as u64).to_f64().unwrap();
                *v = b * xi.powi((i - j) as i32);
            }
        }
        let f = (0..=n)
            .map(|j| rational::to_f64(&(&body.x[j] / Rational::from_integer(factorial(j as u64)))))
            .collect();
        Frame { n, w, f }
    }

    /// `μ` estimate and a rigorous bound on its error.
    fn mu(&self, a: &[i64]) -> (f64, f64) {
        let mut mu: f64 = 0.0;
        let mut err: f64 = 0.0;
        for j in 0..=self.n {
            let (mut s, mut sa) = (0.0, 0.0);
            for i in j..=self.n {
                let t = self.w[j][i] * a[i] as f64;
                s += t;
                sa += t.abs();
            }
            mu = mu.max(s.abs() / self.f[j]);
            err = err.max(FP_GAMMA * sa / self.f[j]);
        }
        (mu, err + f64::MIN_POSITIVE)
    }
}

/// All sign-normalized nonzero integer polynomials with `μ(P) ≤ bound`, certified complete.
pub fn lattice_points(body: &BodySpec, bound: &Rational) -> Result<Vec<LatticePoint>> {
    lattice_points_where(body, bound, None)
}

/// Integer functionals cutting out a subspace; points where all vanish are skipped.
struct SpanFilter {
    rows: Vec<Vec<i128>>,
    /// Lowest coordinate any functional depends on.
    low: usize,
}

impl SpanFilter {
    /// `None` when the annihilator does not fit in `i128`.
    fn annihilating(chosen: &[Vec<i64>], dim: usize) -> Option<SpanFilter> {
        let m: linalg::Matrix =
            chosen.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect();
        let ann = if m.is_empty() {
            (0..dim).map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
        } else {
            linalg::nullspace_int(&m, dim)
        };
        let rows: Option<Vec<Vec<i128>>> =
            ann.iter().map(|r| r.iter().map(|c| i128::try_from(c).ok()).collect()).collect();
        let rows = rows?;
        let low = rows.iter().filter_map(|r| r.iter().position(|&c| c != 0)).min().unwrap_or(dim);
        Some(SpanFilter { rows, low })
    }

    /// False only when `a` certainly lies in the subspace.
    fn outside(&self, a: &[i64]) -> bool {
        self.rows.iter().any(|r| {
            let mut s: i128 = 0;
            for (x, &c) in r.iter().zip(a) {
                match x.checked_mul(c as i128).and_then(|t| s.checked_add(t)) {
                    Some(v) => s = v,
                    None => return true,
                }
            }
            s != 0
        })
    }
}

fn lattice_points_where(body: &BodySpec, bound: &Rational, keep: Option<&SpanFilter>) -> Result<Vec<LatticePoint>> {
    let frame = Frame::new(body);
    let b = rational::to_f64(bound) * (1.0 + 4.0 * FP_GAMMA);
    let n = body.n;
    let top = (b * frame.f[n] * (1.0 + FP_GAMMA)).floor();
    if !top.is_finite() || top > (1u64 << 50) as f64 {
        return Err(Error::CapExceeded(format!("coefficient range {top:e} too large")));
    }
    let top = top as i64;
    let leaves = std::sync::atomic::AtomicU64::new(0);
    let chunks: Vec<Result<Vec<LatticePoint>>> = (0..=top)
        .into_par_iter()
        .map(|an| {
            let mut a = vec![0i64; n + 1];
            a[n] = an;
            let mut out = Vec::new();
            descend(&frame, b, n, &mut a, an == 0, keep, &mut out, &leaves)?;
            Ok(out)
        })
        .collect();
    let mut cand = Vec::new();
    for c in chunks {
        cand.extend(c?);
    }
    let mut out = Vec::with_capacity(cand.len());
    for p in cand {
        let bf = rational::to_f64(bound);
        if p.hi() <= bf * (1.0 - 4.0 * FP_GAMMA) || boundary_member(&frame, &p.coeffs, body, bound)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Exact membership, deciding in floating point the orders `j` that are clearly inside.
fn boundary_member(fr: &Frame, a: &[i64], body: &BodySpec, bound: &Rational) -> Result<bool> {
    let b = rational::to_f64(bound);
    let p = RatPoly::from_ints(a);
    for j in 0..=fr.n {
        let (mut s, mut sa) = (0.0, 0.0);
        for i in j..=fr.n {
            let t = fr.w[j][i] * a[i] as f64;
            s += t;
            sa += t.abs();
        }
        let lim = b * fr.f[j];
        let err = FP_GAMMA * (sa + lim) + f64::MIN_POSITIVE;
        if s.abs() + err < lim * (1.0 - 4.0 * FP_GAMMA) {
            continue;
        }
        if cmp_abs_const(&body.xi, &p.nth_derivative(j), &(bound * &body.x[j]))? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

fn descend(
    fr: &Frame,
    b: f64,
    j: usize,
    a: &mut Vec<i64>,
    all_zero_above: bool,
    keep: Option<&SpanFilter>,
    out: &mut Vec<LatticePoint>,
    leaves: &std::sync::atomic::AtomicU64,
) -> Result<()> {
    if j == 0 {
        if a.iter().all(|&c| c == 0) {
            return Ok(());
        }
        if leaves.fetch_add(1, std::sync::atomic::Ordering::Relaxed) > ENUMERATION_LEAF_CAP {
            return Err(Error::CapExceeded("enumeration leaf cap".into()));
        }
        let (mu_f, err) = fr.mu(a);
        if mu_f - err <= b && keep.is_none_or(|f| f.outside(a)) {
            out.push(LatticePoint { coeffs: a.clone(), mu_f, err });
        }
        return Ok(());
    }
    if let Some(f) = keep {
        if j == f.low && j <= fr.n && !f.outside(a) {
            return Ok(());
        }
    }
    let k = j - 1;
    let (mut s, mut sa) = (0.0, 0.0);
    for i in j..=fr.n {
        let t = fr.w[k][i] * a[i] as f64;
        s += t;
        sa += t.abs();
    }
    let f = b * fr.f[k];
    let margin = FP_GAMMA * (sa + f) + 1e-300;
    let mut lo = (-f - s - margin).ceil();
    let hi = (f - s + margin).floor();
    if all_zero_above {
        lo = lo.max(0.0);
    }
    if hi < lo {
        return Ok(());
    }
    if lo.abs() > (1u64 << 52) as f64 || hi.abs() > (1u64 << 52) as f64 {
        return Err(Error::CapExceeded(format!("coefficient range [{lo:e}, {hi:e}] too large")));
    }
    for v in lo as i64..=hi as i64 {
        a[k] = v;
        descend(fr, b, k, a, all_zero_above && v == 0, keep, out, leaves)?;
    }
    a[k] = 0;
    Ok(())
}

/// Exact `μ(P)` data: the attaining derivative order and the value or an enclosure.
#[derive(Clone, Debug)]
pub struct ExactMu {
    pub j: usize,
    deriv: RatPoly,
    pub value: Lambda,
}

/// `μ(P) = max_j |P^{(j)}(ξ)|/X_j` with its attaining index.
pub fn mu_exact(p: &RatPoly, body: &BodySpec) -> Result<ExactMu> {
    let mut best = 0usize;
    let mut best_d = p.clone();
    for j in 1..=body.n {
        let d = p.nth_derivative(j);
        if cmp_ratio(&body.xi, &d, &body.x[j], &best_d, &body.x[best])? == Ordering::Greater {
            best = j;
            best_d = d;
        }
    }
    let value = term_value(&body.xi, &best_d, &body.x[best]);
    Ok(ExactMu { j: best, deriv: best_d, value })
}

/// [`mu_exact`], locating the attaining order in floating point when it is clear.
fn mu_exact_framed(fr: &Frame, a: &[i64], body: &BodySpec) -> Result<ExactMu> {
    let terms: Vec<(f64, f64)> = (0..=fr.n)
        .map(|j| {
            let (mut s, mut sa) = (0.0, 0.0);
            for i in j..=fr.n {
                let t = fr.w[j][i] * a[i] as f64;
                s += t;
                sa += t.abs();
            }
            (s.abs() / fr.f[j], FP_GAMMA * sa / fr.f[j] + f64::MIN_POSITIVE)
        })
        .collect();
    let best = (0..=fr.n).max_by(|&x, &y| (terms[x].0 - terms[x].1).total_cmp(&(terms[y].0 - terms[y].1))).unwrap();
    let floor = terms[best].0 - terms[best].1;
    if (0..=fr.n).all(|j| j == best || terms[j].0 + terms[j].1 < floor) {
        let deriv = RatPoly::from_ints(a).nth_derivative(best);
        let value = term_value(&body.xi, &deriv, &body.x[best]);
        return Ok(ExactMu { j: best, deriv, value });
    }
    mu_exact(&RatPoly::from_ints(a), body)
}

fn term_value(xi: &RealNumber, d: &RatPoly, x: &Rational) -> Lambda {
    if let Some(r) = xi.as_rational() {
        return Lambda::Exact(d.eval(r).abs() / x);
    }
    if d.deg() == 0 {
        return Lambda::Exact(d.coeff(0).abs() / x);
    }
    let bits = precision_cap().max(128);
    let e = eval_interval(d, &xi.enclosure(bits)).abs();
    let iv = Interval::new(&e.lo / x, &e.hi / x);
    Lambda::Ball(DyadicBall::enclosing(&iv, bits))
}

fn cmp_exact_mu(body: &BodySpec, a: &ExactMu, b: &ExactMu) -> Result<Ordering> {
    if let (Lambda::Exact(x), Lambda::Exact(y)) = (&a.value, &b.value) {
        return Ok(x.cmp(y));
    }
    if let Some(o) = a.value.to_interval().compare(&b.value.to_interval()) {
        if o != Ordering::Equal {
            return Ok(o);
        }
    }
    cmp_ratio(&body.xi, &a.deriv, &body.x[a.j], &b.deriv, &body.x[b.j])
}

fn tie_key(p: &LatticePoint) -> (usize, u64, &[i64]) {
    (p.degree(), p.l1(), &p.coeffs)
}

/// Sorts points by exact `μ`, ties by degree, then `ℓ1` norm, then coefficient vector.
fn sort_points(body: &BodySpec, mut pts: Vec<LatticePoint>) -> Result<Vec<(LatticePoint, Option<ExactMu>)>> {
    pts.sort_by(|a, b| a.mu_f.total_cmp(&b.mu_f).then_with(|| tie_key(a).cmp(&tie_key(b))));
    let mut out = Vec::with_capacity(pts.len());
    let mut i = 0;
    while i < pts.len() {
        let mut j = i + 1;
        let mut hi = pts[i].hi();
        while j < pts.len() && pts[j].lo() <= hi {
            hi = hi.max(pts[j].hi());
            j += 1;
        }
        if j == i + 1 {
            out.push((pts[i].clone(), None));
        } else {
            let frame = Frame::new(body);
            let mut cluster: Vec<(LatticePoint, ExactMu)> = Vec::with_capacity(j - i);
            for p in &pts[i..j] {
                cluster.push((p.clone(), mu_exact_framed(&frame, &p.coeffs, body)?));
            }
            let mut err = None;
            cluster.sort_by(|a, b| match cmp_exact_mu(body, &a.1, &b.1) {
                Ok(Ordering::Equal) => tie_key(&a.0).cmp(&tie_key(&b.0)),
                Ok(o) => o,
                Err(e) => {
                    err = Some(e);
                    Ordering::Equal
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            out.extend(cluster.into_iter().map(|(p, m)| (p, Some(m))));
        }
        i = j;
    }
    Ok(out)
}

/// Incremental fraction-free echelon form for independence tests.
struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
    originals: Vec<Vec<i64>>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new(), originals: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.originals.len()
    }

    /// Adds `v` if independent of the rows so far; returns whether it was added.
    fn try_add(&mut self, v: &[i64]) -> bool {
        match self.reduce(v) {
            Some(Some(r)) => {
                let p = r.iter().position(|&c| c != 0).unwrap();
                let at = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(at, (p, r));
                self.originals.push(v.to_vec());
                true
            }
            Some(None) => false,
            None => {
                let mut m: linalg::IntMatrix =
                    self.originals.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
                m.push(v.iter().map(|&c| BigInt::from(c)).collect());
                if linalg::rank_int(&m) > self.originals.len() {
                    self.originals.push(v.to_vec());
                    self.rebuild();
                    true
                } else {
                    false
                }
            }
        }
    }

    fn rebuild(&mut self) {
        let originals = std::mem::take(&mut self.originals);
        self.rows.clear();
        for o in &originals {
            if let Some(Some(r)) = self.reduce(o) {
                let p = r.iter().position(|&c| c != 0).unwrap();
                let at = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(at, (p, r));
            }
        }
        self.originals = originals;
    }

    /// `None` on overflow, `Some(None)` when `v` lies in the span.
    fn reduce(&self, v: &[i64]) -> Option<Option<Vec<i128>>> {
        let mut v: Vec<i128> = v.iter().map(|&c| c as i128).collect();
        for (p, row) in &self.rows {
            if v[*p] == 0 {
                continue;
            }
            let (a, b) = (row[*p], v[*p]);
            let g = gcd_i128(a, b);
            let (a, b) = (a / g, b / g);
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.checked_mul(a)?.checked_sub(r.checked_mul(b)?)?;
            }
            let g = v.iter().fold(0i128, |acc, &x| gcd_i128(acc, x));
            if g > 1 {
                v.iter_mut().for_each(|x| *x /= g);
            }
        }
        Some(if v.iter().all(|&c| c == 0) { None } else { Some(v) })
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `μ` for rational `ξ = p/q` as the fraction `|q^n P^{(j)}(ξ)|·v_j / (q^n u_j)` with
/// `X_j = u_j/v_j`, in machine integers.
struct FastMu {
    p: i128,
    q: i128,
    u: Vec<i128>,
    v: Vec<i128>,
    n: usize,
}

/// Keys below this bound multiply without overflowing `i128`.
const FAST_KEY_LIMIT: i128 = 1 << 62;

impl FastMu {
    fn new(body: &BodySpec) -> Option<FastMu> {
        let xi = body.xi.as_rational()?;
        let p = i128::try_from(xi.numer()).ok()?;
        let q = i128::try_from(xi.denom()).ok()?;
        let u = body.x.iter().map(|x| i128::try_from(x.numer()).ok()).collect::<Option<Vec<_>>>()?;
        let v = body.x.iter().map(|x| i128::try_from(x.denom()).ok()).collect::<Option<Vec<_>>>()?;
        Some(FastMu { p, q, u, v, n: body.n })
    }

    fn key(&self, a: &[i64]) -> Option<(i128, i128)> {
        let n = self.n;
        let mut best: Option<(i128, i128)> = None;
        for j in 0..=n {
            let mut d: i128 = 0;
            for i in j..=n {
                let mut t = a[i] as i128;
                for f in (i - j + 1)..=i {
                    t = t.checked_mul(f as i128)?;
                }
                t = t.checked_mul(self.p.checked_pow((i - j) as u32)?)?;
                t = t.checked_mul(self.q.checked_pow((n - i + j) as u32)?)?;
                d = d.checked_add(t)?;
            }
            let num = d.checked_abs()?.checked_mul(self.v[j])?;
            let den = self.q.checked_pow(n as u32)?.checked_mul(self.u[j])?;
            if num >= FAST_KEY_LIMIT || den >= FAST_KEY_LIMIT {
                return None;
            }
            best = match best {
                Some((bn, bd)) if bn * den >= num * bd => Some((bn, bd)),
                _ => Some((num, den)),
            };
        }
        best
    }
}

/// Picks from candidates whose `μ` enclosures overlap the least one.
fn pick_in_cluster(
    body: &BodySpec,
    ech: &mut Echelon,
    cand: Vec<LatticePoint>,
) -> Result<Option<(LatticePoint, Option<ExactMu>)>> {
    if cand.len() > 1 {
        if let Some(fm) = FastMu::new(body) {
            let keys: Option<Vec<(i128, i128)>> = cand.iter().map(|p| fm.key(&p.coeffs)).collect();
            if let Some(keys) = keys {
                let mut keyed: Vec<_> = keys.into_iter().zip(cand).collect();
                let less = |a: &((i128, i128), LatticePoint), b: &((i128, i128), LatticePoint)| {
                    (a.0 .0 * b.0 .1)
                        .cmp(&(b.0 .0 * a.0 .1))
                        .then_with(|| tie_key(&a.1).cmp(&tie_key(&b.1)))
                        == Ordering::Less
                };
                while !keyed.is_empty() {
                    let mut best = 0;
                    for i in 1..keyed.len() {
                        if less(&keyed[i], &keyed[best]) {
                            best = i;
                        }
                    }
                    let (_, p) = keyed.swap_remove(best);
                    if ech.try_add(&p.coeffs) {
                        return Ok(Some((p, None)));
                    }
                }
                return Ok(None);
            }
        }
    }
    for (p, m) in sort_points(body, cand)? {
        if ech.try_add(&p.coeffs) {
            return Ok(Some((p, m)));
        }
    }
    Ok(None)
}

/// The least point (by `μ`, then tie key) that extends the echelon basis, which is updated.
fn pick_least(
    body: &BodySpec,
    ech: &mut Echelon,
    mut pts: Vec<LatticePoint>,
) -> Result<Option<(LatticePoint, Option<ExactMu>)>> {
    while !pts.is_empty() {
        let min_hi = pts.iter().map(LatticePoint::hi).fold(f64::INFINITY, f64::min);
        let (cand, rest): (Vec<_>, Vec<_>) = pts.into_iter().partition(|p| p.lo() <= min_hi);
        if let Some(found) = pick_in_cluster(body, ech, cand)? {
            return Ok(Some(found));
        }
        pts = rest;
    }
    Ok(None)
}

/// Exact successive minima by exhaustive enumeration.
pub fn successive_minima(body: &BodySpec) -> Result<MinimaResult> {
    let n = body.n;
    if n > MINIMA_DIMENSION_CAP {
        return Err(Error::DimensionCap { n, cap: MINIMA_DIMENSION_CAP });
    }
    let vol = rational::to_f64(&volume(body));
    let est = (2f64.powi(n as i32 + 1) / vol).powf(1.0 / (n as f64 + 1.0));
    let mut bound = f64_to_rational_up(est * 1.0001);
    let growth = rational::rat(5, 4);
    let mut ech = Echelon::new();
    let mut lambdas = Vec::with_capacity(n + 1);
    let mut witnesses = Vec::with_capacity(n + 1);
    // Stage k finds the least point outside the span of the first k minima.
    while ech.rank() <= n {
        let filter = SpanFilter::annihilating(&ech.originals, n + 1);
        let pts = lattice_points_where(body, &bound, filter.as_ref())?;
        let Some((p, m)) = pick_least(body, &mut ech, pts)? else {
            bound = &bound * &growth;
            continue;
        };
        let poly = p.poly();
        let m = match m {
            Some(m) => m,
            None => mu_exact(&poly, body)?,
        };
        lambdas.push(m.value);
        witnesses.push(poly);
    }
    Ok(MinimaResult { lambdas, witnesses, exhaustive: true })
}

/// A rational at least `x` with a short dyadic expansion.
pub fn f64_to_rational_up(x: f64) -> Rational {
    let scale = 1u64 << 30;
    let m = (x * scale as f64).ceil() as i64 + 1;
    rational::rat(m, scale as i64)
}

/// `2^{n+1}/(n+1)! ≤ λ_1⋯λ_{n+1}·Vol ≤ 2^{n+1}`.
pub fn minkowski_product_check(res: &MinimaResult, body: &BodySpec) -> Result<Vec<Inequality>> {
    if !res.exhaustive {
        return Err(Error::Precondition("minima were not computed exhaustively".into()));
    }
    let n = body.n as u64;
    let prod = res.product().scale(&volume(body));
    let two = Rational::from_integer(BigInt::one() << (n + 1));
    let lower = &two / Rational::from_integer(factorial(n + 1));
    Ok(vec![
        Inequality::le("2^(n+1)/(n+1)! <= prod(lambda) Vol", Interval::point(lower), prod.clone()),
        Inequality::le("prod(lambda) Vol <= 2^(n+1)", prod, Interval::point(two)),
    ])
}

/// Products `λ_i(X)·λ_{n+2−i}(Y)` against the lower bound `1/(n+1)!`.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub minima_x: MinimaResult,
    pub minima_y: MinimaResult,
    pub products: Vec<Interval>,
    pub checks: Vec<Inequality>,
    #[serde(with = "serde_rational")]
    pub observed_max: Rational,
}

pub fn duality_products(body: &BodySpec) -> Result<DualityReport> {
    let n = body.n;
    if n > DUALITY_DIMENSION_CAP {
        return Err(Error::DimensionCap { n, cap: DUALITY_DIMENSION_CAP });
    }
    let mx = successive_minima(body)?;
    let my = successive_minima(&body.dual())?;
    let lower = Interval::point(Rational::from_integer(factorial(n as u64 + 1)).recip());
    let mut products = Vec::with_capacity(n + 1);
    let mut checks = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let p = &mx.lambdas[i].to_interval() * &my.lambdas[n - i].to_interval();
        checks.push(Inequality::le(format!("1/(n+1)! <= lambda_{}(X) lambda_{}(Y)", i + 1, n + 1 - i), lower.clone(), p.clone()));
        products.push(p);
    }
    let observed_max = products.iter().map(|p| p.hi.clone()).max().unwrap_or_else(Rational::zero);
    Ok(DualityReport { minima_x: mx, minima_y: my, products, checks, observed_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn body(xi: Rational, x: &[Rational]) -> BodySpec {
        BodySpec::new(RealNumber::Rational(xi), x.to_vec()).unwrap()
    }

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn membership_examples() {
        let b = body(int(0), &[int(1), int(1)]);
        assert!(membership(&p(&[1]), &b, &int(1)).unwrap());
        let b = body(rat(1, 2), &[rat(1, 4), int(2)]);
        assert!(membership(&p(&[-1, 2]), &b, &int(1)).unwrap());
        let b = body(int(0), &[int(1), rat(1, 2)]);
        assert!(!membership(&p(&[0, 1]), &b, &int(1)).unwrap());
        assert_eq!(
            membership(&RatPoly::new(vec![rat(1, 2)]), &b, &int(1)),
            Err(Error::NonIntegerCoefficients)
        );
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&body(int(0), &[int(1), int(1)])), int(4));
        assert_eq!(volume(&body(int(0), &[int(1), int(1), int(1)])), int(4));
        assert_eq!(volume(&body(int(0), &[rat(1, 2), int(1), int(2)])), int(4));
    }

    #[test]
    fn first_minimum_examples() {
        assert!(first_minimum_condition(&body(int(0), &[int(1), int(1)]), &int(1)).unwrap());
        assert!(!first_minimum_condition(&body(int(0), &[rat(1, 4), int(1)]), &int(1)).unwrap());
        assert!(first_minimum_condition(&body(int(0), &[int(1), int(1), int(1)]), &int(2)).unwrap());
    }

    #[test]
    fn minima_examples() {
        let m = successive_minima(&body(int(0), &[int(1), int(1)])).unwrap();
        assert_eq!(m.lambdas, vec![Lambda::Exact(int(1)), Lambda::Exact(int(1))]);
        assert_eq!(m.witnesses, vec![p(&[1]), p(&[0, 1])]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"lambdas":["1/1","1/1"],"witnesses":[[1],[0,1]],"exhaustive":true}"#);

        let b = body(rat(1, 2), &[rat(1, 4), int(2)]);
        let m = successive_minima(&b).unwrap();
        assert_eq!(m.lambdas[0], Lambda::Exact(int(1)));
        assert_eq!(m.witnesses[0], p(&[-1, 2]));
        for c in minkowski_product_check(&m, &b).unwrap() {
            assert!(c.holds(), "{c}");
        }

        let m = successive_minima(&body(int(0), &[rat(1, 2), rat(1, 2)])).unwrap();
        assert_eq!(m.lambdas, vec![Lambda::Exact(int(2)), Lambda::Exact(int(2))]);
    }

    #[test]
    fn dual_tuple_examples() {
        assert_eq!(dual_tuple(&[rat(1, 4), int(2)]), vec![rat(1, 2), int(4)]);
        assert_eq!(dual_tuple(&[int(1), int(1), int(1)]), vec![int(1), int(1), int(1)]);
        assert_eq!(dual_tuple(&[int(2), int(3), int(5)]), vec![rat(1, 5), rat(1, 3), rat(1, 2)]);
    }

    #[test]
    fn duality_examples() {
        let r = duality_products(&body(int(0), &[int(1), int(1)])).unwrap();
        assert!(r.products.iter().all(|p| *p == Interval::int(1)));
        assert!(r.checks.iter().all(Inequality::holds));
        let r = duality_products(&body(rat(1, 2), &[rat(1, 4), int(2)])).unwrap();
        assert!(r.checks.iter().all(Inequality::holds));
    }

    #[test]
    fn irrational_center() {
        let xi = RealNumber::Algebraic(crate::exactnum::real::real_nth_root(2, 2));
        let b = BodySpec::new(xi, vec![rat(1, 10), int(10)]).unwrap();
        let m = successive_minima(&b).unwrap();
        assert_eq!(m.lambdas.len(), 2);
        assert!(linalg::rank(&linalg::to_rational(&m.witness_coeffs())) == 2);
        for c in minkowski_product_check(&m, &b).unwrap() {
            assert!(c.holds(), "{c}");
        }
    }
}
