//! Resultant gap bounds, the factor-chain procedure, minor modules and product-space heights.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::factor::{factor_over_rationals, FACTOR_DEGREE_CAP};
use crate::exactnum::interval::{e_pow, Interval};
use crate::exactnum::linalg::{self, IntMatrix};
use crate::exactnum::rational::{self, factorial, from_bigint, serde_rational};
use crate::exactnum::real::{eval_interval, precision_cap, RealNumber};
use crate::exactnum::resultant::resultant;
use crate::exactnum::{RatPoly, Rational};
use crate::heights::{height_matrix, height_poly};
use crate::report::Inequality;

/// Largest `k + ℓ` accepted by [`minor_module_generation`].
pub const MODULE_GEN_CAP: usize = 7;

/// `|P(ξ)|/‖P‖_∞` enclosed at `bits`.
pub fn normalized_value(p: &RatPoly, xi: &RealNumber, bits: u64) -> Interval {
    let v = match xi.as_rational() {
        Some(r) => Interval::point(p.eval(r)),
        None => eval_interval(p, &xi.enclosure(bits)),
    };
    v.abs().scale(&p.norm_inf().recip())
}

fn is_coprime(p: &RatPoly, q: &RatPoly) -> Result<bool> {
    if p.deg() == 0 || q.deg() == 0 {
        return Ok(true);
    }
    Ok(!resultant(p, q)?.is_zero())
}

/// `1 ≤ (2n)!·max{|P(ξ)|/‖P‖, |Q(ξ)|/‖Q‖}·H(P)^{deg Q}·H(Q)^{deg P}` with `n = max(deg P, deg Q)`.
pub fn resultant_gap_check(p: &RatPoly, q: &RatPoly, xi: &RealNumber) -> Result<Inequality> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_coprime(p, q)? {
        return Err(Error::NotCoprime);
    }
    let n = p.deg().max(q.deg()) as u64;
    let heights = rational::pow(&height_poly(p)?, q.deg() as u64) * rational::pow(&height_poly(q)?, p.deg() as u64);
    let c3 = from_bigint(factorial(2 * n));
    let scale = c3 * heights;
    Ok(crate::report::decide(precision_cap().max(64) * 4, |bits| {
        let m = normalized_value(p, xi, bits).max(&normalized_value(q, xi, bits));
        Inequality::le("1 <= (2n)! max(|P(xi)|/|P|, |Q(xi)|/|Q|) H(P)^deg Q H(Q)^deg P", Interval::int(1), m.scale(&scale))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "factor", rename_all = "snake_case")]
pub enum ChainStatus {
    Tracking,
    Stabilized(RatPoly),
    Inconclusive,
}

/// One processed input of the chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainEntry {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    pub p: RatPoly,
    /// Selected monic irreducible factor.
    pub selected: RatPoly,
    /// `(|Q(ξ)|/‖Q‖)·H(Q)^n·(eY)^{deg Q}` for the selected factor, `Y = e^n X`.
    pub quantity: Interval,
    /// Whether the quantity is certified `≤ 1/(2n)!`.
    pub meets_bound: bool,
    /// Whether the selected factor vanishes at `ξ`.
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorChainState {
    #[serde(serialize_with = "crate::exactnum::real::serialize_display")]
    pub xi: RealNumber,
    pub n: usize,
    pub entries: Vec<ChainEntry>,
    pub current: Option<RatPoly>,
    pub status: ChainStatus,
    /// Resultant gap records between consecutive distinct selections.
    pub gap_checks: Vec<Inequality>,
}

impl FactorChainState {
    pub fn new(xi: RealNumber, n: usize) -> Self {
        FactorChainState { xi, n, entries: Vec::new(), current: None, status: ChainStatus::Tracking, gap_checks: Vec::new() }
    }
}

/// `(|Q(ξ)|/‖Q‖)·H(Q)^n` exactly or enclosed, and the exponent `deg Q` of `eY`.
fn selection_quantity(q: &RatPoly, xi: &RealNumber, n: usize, x: &Rational, bits: u64) -> Result<Interval> {
    let base = normalized_value(q, xi, bits).scale(&rational::pow(&height_poly(q)?, n as u64));
    let d = q.deg() as u64;
    // eY = e^{n+1} X.
    let ey = e_pow((n as i64 + 1) * d as i64, bits).scale(&rational::pow(x, d));
    Ok(&base * &ey)
}

fn vanishes_at(q: &RatPoly, xi: &RealNumber) -> Result<bool> {
    Ok(xi.sign_of(q)? == Ordering::Equal)
}

fn cmp_selection(
    a: &RatPoly,
    b: &RatPoly,
    xi: &RealNumber,
    n: usize,
    x: &Rational,
) -> Result<Ordering> {
    let (za, zb) = (vanishes_at(a, xi)?, vanishes_at(b, xi)?);
    match (za, zb) {
        (true, true) => return Ok(a.coeffs().cmp(b.coeffs())),
        (true, false) => return Ok(Ordering::Less),
        (false, true) => return Ok(Ordering::Greater),
        _ => {}
    }
    let cap = precision_cap().max(64) * 4;
    let mut bits = 64;
    loop {
        let qa = selection_quantity(a, xi, n, x, bits)?;
        let qb = selection_quantity(b, xi, n, x, bits)?;
        match qa.compare(&qb) {
            Some(o) if o != Ordering::Equal => return Ok(o),
            _ if bits >= cap => return Ok(a.coeffs().cmp(b.coeffs())),
            _ => bits = (bits * 2).min(cap),
        }
    }
}

/// Feeds `P_X` to the chain; selection ties fall back to the lexicographically smallest
/// coefficient vector of the monic factor.
pub fn factor_chain_step(state: &FactorChainState, x: &Rational, p: &RatPoly) -> Result<FactorChainState> {
    let n = state.n;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() > n {
        return Err(Error::DegreeOverflow { degree: p.deg(), cap: n });
    }
    if height_poly(p)? > *x {
        return Err(Error::Precondition(format!("H(P) exceeds X = {}", rational::to_string(x))));
    }
    let fac = factor_over_rationals(p, FACTOR_DEGREE_CAP as u64)?;
    let mut best: Option<RatPoly> = None;
    for (f, _) in &fac.factors {
        best = Some(match best {
            None => f.clone(),
            Some(b) => {
                if cmp_selection(f, &b, &state.xi, n, x)? == Ordering::Less {
                    f.clone()
                } else {
                    b
                }
            }
        });
    }
    let mut next = state.clone();
    let Some(sel) = best else {
        // A nonzero constant has no irreducible factor.
        next.status = ChainStatus::Inconclusive;
        return Ok(next);
    };
    let bits = precision_cap().max(64);
    let quantity = selection_quantity(&sel, &state.xi, n, x, bits)?;
    let c3 = from_bigint(factorial(2 * n as u64));
    let vanishes = vanishes_at(&sel, &state.xi)?;
    let meets_bound = vanishes || quantity.hi <= c3.recip();
    if let Some(prev) = &state.current {
        if *prev != sel {
            let gap = resultant_gap_check(prev, &sel, &state.xi)?;
            next.gap_checks.push(gap);
        }
    }
    next.status = match (&state.current, meets_bound) {
        (_, false) => ChainStatus::Inconclusive,
        (Some(prev), true) if *prev == sel && state.entries.last().is_some_and(|e| e.meets_bound) => {
            ChainStatus::Stabilized(sel.clone())
        }
        _ => ChainStatus::Tracking,
    };
    next.current = Some(sel.clone());
    next.entries.push(ChainEntry { x: x.clone(), p: p.clone(), selected: sel, quantity, meets_bound, vanishes });
    Ok(next)
}

/// Runs the chain over a finite input stream.
pub fn factor_chain(xi: &RealNumber, n: usize, inputs: &[(Rational, RatPoly)]) -> Result<FactorChainState> {
    let mut s = FactorChainState::new(xi.clone(), n);
    for (x, p) in inputs {
        s = factor_chain_step(&s, x, p)?;
    }
    Ok(s)
}

type Monomial = Vec<u32>;
type Form = BTreeMap<Monomial, BigInt>;

fn form_mul(a: &Form, b: &Form) -> Form {
    let mut out = Form::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn form_add(acc: &mut Form, f: &Form, sign: i32) {
    for (m, c) in f {
        let e = acc.entry(m.clone()).or_insert_with(BigInt::zero);
        if sign > 0 {
            *e += c;
        } else {
            *e -= c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
}

/// Determinant of a square matrix of forms by cofactor expansion along the first row.
fn form_det(m: &[Vec<Form>]) -> Form {
    let k = m.len();
    if k == 0 {
        return Form::from([(Vec::new(), BigInt::one())]);
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = Form::new();
    for j in 0..k {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Form>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, f)| f.clone()).collect()).collect();
        let term = form_mul(&m[0][j], &form_det(&minor));
        form_add(&mut acc, &term, if j % 2 == 0 { 1 } else { -1 });
    }
    acc
}

/// Exponent vectors of degree `k` in `vars` variables, lexicographically descending.
fn monomials(vars: usize, k: u32) -> Vec<Monomial> {
    if vars == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for e in (0..=k).rev() {
        for mut rest in monomials(vars - 1, k - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Outcome of the minor/monomial comparison for `R(k, ℓ)`.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleGenReport {
    pub k: usize,
    pub l: usize,
    /// True iff the minors generate all degree-`k` forms over ℤ.
    pub generates: bool,
    /// Max row sum of the minors-in-monomials matrix.
    #[serde(with = "rational::serde_int")]
    pub forward_row_sum: BigInt,
    /// Max row sum of the monomials-in-minors matrix (when it exists over ℤ).
    #[serde(with = "rational::serde_int")]
    pub inverse_row_sum: BigInt,
}

impl ModuleGenReport {
    /// Per-`(k, ℓ)` constant `c` with `c^{-1}H(P)^k ≤ H(P·E_{k−1}) ≤ c H(P)^k`.
    pub fn constant(&self) -> Rational {
        from_bigint(self.forward_row_sum.clone().max(self.inverse_row_sum.clone()))
    }
}

/// Coefficient matrix of the order-`k` minors of `R(k, ℓ)` in the degree-`k` monomial basis.
pub fn minor_matrix(k: usize, l: usize) -> IntMatrix {
    let vars = l + 1;
    let var = |i: usize| -> Form {
        let mut m = vec![0u32; vars];
        m[i] = 1;
        Form::from([(m, BigInt::one())])
    };
    let r: Vec<Vec<Form>> = (0..k)
        .map(|i| (0..k + l).map(|j| if j >= i && j - i <= l { var(j - i) } else { Form::new() }).collect())
        .collect();
    let monos = monomials(vars, k as u32);
    linalg::column_subsets(k + l, k)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Vec<Form>> = r.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            let d = form_det(&sub);
            monos.iter().map(|m| d.get(m).cloned().unwrap_or_else(BigInt::zero)).collect()
        })
        .collect()
}

static MODULE_CACHE: Mutex<BTreeMap<(usize, usize), ModuleGenReport>> = Mutex::new(BTreeMap::new());

/// Checks by Hermite normal form that the order-`k` minors of `R(k, ℓ)` span the degree-`k`
/// forms in `x_0..x_ℓ` over ℤ.
pub fn minor_module_generation(k: usize, l: usize) -> Result<ModuleGenReport> {
    if k == 0 || k + l > MODULE_GEN_CAP {
        return Err(Error::CapExceeded(format!("module generation needs 1 <= k, k + l <= {MODULE_GEN_CAP}")));
    }
    if let Some(r) = MODULE_CACHE.lock().unwrap().get(&(k, l)) {
        return Ok(r.clone());
    }
    let a = minor_matrix(k, l);
    let cols = a.first().map_or(0, Vec::len);
    let (h, u) = linalg::hermite_normal_form(&a);
    let top: IntMatrix = h.iter().take(cols).cloned().collect();
    let generates = h.len() >= cols && linalg::is_identity(&top) && h[cols..].iter().all(|r| r.iter().all(Zero::is_zero));
    let inverse_row_sum = if generates {
        let inv: IntMatrix = u.iter().take(cols).cloned().collect();
        linalg::max_row_sum(&inv)
    } else {
        BigInt::zero()
    };
    let rep = ModuleGenReport { k, l, generates, forward_row_sum: linalg::max_row_sum(&a), inverse_row_sum };
    MODULE_CACHE.lock().unwrap().insert((k, l), rep.clone());
    Ok(rep)
}

/// `H(P·E_{k−1})` against `H(P)^k`.
#[derive(Clone, Debug, Serialize)]
pub struct ProductSpaceReport {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub h_product: Rational,
    #[serde(with = "serde_rational")]
    pub h_power: Rational,
    #[serde(with = "serde_rational")]
    pub constant: Rational,
    #[serde(with = "serde_rational")]
    pub ratio: Rational,
    pub lower: Inequality,
    pub upper: Inequality,
}

/// The `k`-row banded matrix whose rows are `T^i·P`, `i < k`.
pub fn band_matrix(p: &RatPoly, k: usize) -> linalg::Matrix {
    let l = p.deg();
    (0..k)
        .map(|i| (0..k + l).map(|j| if j >= i && j - i <= l { p.coeff(j - i) } else { Rational::zero() }).collect())
        .collect()
}

pub fn product_space_height_check(p: &RatPoly, k: usize) -> Result<ProductSpaceReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let gen = minor_module_generation(k, p.deg())?;
    if !gen.generates {
        return Err(Error::HardAssertion(format!("minors of R({k},{}) do not generate", p.deg())));
    }
    let c = gen.constant();
    let h_product = height_matrix(&band_matrix(p, k))?.value;
    let h_power = rational::pow(&height_poly(p)?, k as u64);
    let ratio = &h_product / &h_power;
    let lower = Inequality::le_exact("H(P)^k / c <= H(P E_{k-1})", &h_power / &c, h_product.clone());
    let upper = Inequality::le_exact("H(P E_{k-1}) <= c H(P)^k", h_product.clone(), &c * &h_power);
    Ok(ProductSpaceReport { k, h_product, h_power, constant: c, ratio, lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use crate::exactnum::real::real_nth_root;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    fn q(x: Rational) -> RealNumber {
        RealNumber::Rational(x)
    }

    #[test]
    fn gap_examples() {
        let r = resultant_gap_check(&p(&[-1, 1]), &p(&[1, 1]), &q(int(0))).unwrap();
        assert!(r.holds());
        assert_eq!(r.rhs, Interval::int(2));
        let r = resultant_gap_check(&p(&[-1, 1]), &p(&[1, 1]), &q(int(1))).unwrap();
        assert_eq!(r.rhs, Interval::int(4));
        assert_eq!(resultant_gap_check(&p(&[-1, 1]), &p(&[1, -2, 1]), &q(int(0))).unwrap_err(), Error::NotCoprime);
        let cbrt2 = RealNumber::Algebraic(real_nth_root(2, 3));
        let r = resultant_gap_check(&p(&[-1, 1]), &p(&[-5, 4]), &cbrt2).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn chain_stabilizes_on_rational_root() {
        let xi = q(rat(1, 2));
        let inputs: Vec<(Rational, RatPoly)> = (1..5).map(|m| (int(2 * m), p(&[-m, 2 * m]))).collect();
        let s = factor_chain(&xi, 2, &inputs).unwrap();
        assert_eq!(s.status, ChainStatus::Stabilized(RatPoly::linear_root(&rat(1, 2))));
        assert!(s.entries.iter().all(|e| e.vanishes));
    }

    #[test]
    fn chain_selects_vanishing_factor() {
        let xi = q(rat(1, 2));
        let prod = &p(&[-1, 2]) * &p(&[1, 0, 1]);
        let s = factor_chain(&xi, 3, &[(int(4), prod)]).unwrap();
        assert_eq!(s.current, Some(RatPoly::linear_root(&rat(1, 2))));
    }

    #[test]
    fn chain_without_small_values_is_inconclusive() {
        let xi = q(rat(1, 3));
        let s = factor_chain(&xi, 2, &[(int(2), p(&[1, 0, 1])), (int(3), p(&[2, 1, 1]))]).unwrap();
        assert_eq!(s.status, ChainStatus::Inconclusive);
    }

    #[test]
    fn module_generation_examples() {
        for l in 0..4 {
            assert!(minor_module_generation(1, l).unwrap().generates);
        }
        let m = minor_matrix(2, 1);
        assert_eq!(m.len(), 3);
        assert!(minor_module_generation(2, 1).unwrap().generates);
        let m = minor_matrix(2, 2);
        assert_eq!((m.len(), m[0].len()), (6, 6));
        assert!(minor_module_generation(2, 2).unwrap().generates);
        assert!(matches!(minor_module_generation(4, 4), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn product_space_examples() {
        let r = product_space_height_check(&p(&[1, 2]), 2).unwrap();
        assert_eq!(r.h_product, int(4));
        assert_eq!(r.h_power, int(4));
        let r = product_space_height_check(&p(&[0, 0, 0, 1]), 3).unwrap();
        assert_eq!((r.h_product, r.h_power), (int(1), int(1)));
        let r = product_space_height_check(&p(&[3, -1, 4, 2]), 2).unwrap();
        assert!(r.lower.holds() && r.upper.holds());
    }
}
