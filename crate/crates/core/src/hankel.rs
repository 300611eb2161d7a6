//! Hankel matrices attached to a polynomial, their kernels and the pairing `g`.
//!
//! For `Q ∈ E_n` put `y_i = (−1)^i i! Q^{(n−i)}(0)` and `z_i` likewise at `ξ`. Then
//! `M_ℓ[i][j] = y_{i+j}` and `N_ℓ[i][j] = z_{i+j}` are the matrices of the pairing
//! `(A, B) ↦ g(AB, Q)` on `E_ℓ × E_{n−ℓ}` in the monomial and `(T−ξ)`-power bases.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::convexbody::{self, BodySpec, LatticePoint};
use crate::error::{Error, Result};
use crate::exactnum::factor::{factor_over_rationals, FACTOR_DEGREE_CAP};
use crate::exactnum::interval::{e_pow, Interval};
use crate::exactnum::linalg::{self, Matrix};
use crate::exactnum::rational::{self, binomial, factorial, from_bigint, serde_rational};
use crate::exactnum::real::{eval_interval, precision_cap, serialize_display, RealNumber};
use crate::exactnum::{RatPoly, Rational};
use crate::gelfond::{self, normalized_value};
use crate::heights::{height_int, height_matrix, height_poly};
use crate::report::Inequality;

/// `g(P,Q) = Σ_j (−1)^j P^{(j)}(a) Q^{(n−j)}(a)`; independent of `a`.
pub fn bilinear_g(p: &RatPoly, q: &RatPoly, n: usize, a: &Rational) -> Rational {
    let pd = p.taylor_coeffs_at(a);
    let qd = q.taylor_coeffs_at(a);
    let mut s = Rational::zero();
    for j in 0..=n {
        let (Some(x), Some(y)) = (pd.get(j), qd.get(n - j)) else { continue };
        let t = x * y * from_bigint(factorial(j as u64) * factorial((n - j) as u64));
        if j % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s
}

/// `g(P,Q)` evaluated from derivative enclosures at a real `ξ`.
pub fn bilinear_g_at(p: &RatPoly, q: &RatPoly, n: usize, xi: &RealNumber, bits: u64) -> Interval {
    if let Some(r) = xi.as_rational() {
        return Interval::point(bilinear_g(p, q, n, r));
    }
    let x = xi.enclosure(bits);
    let mut s = Interval::int(0);
    for j in 0..=n {
        let t = &eval_interval(&p.nth_derivative(j), &x) * &eval_interval(&q.nth_derivative(n - j), &x);
        s = if j % 2 == 0 { &s + &t } else { &s - &t };
    }
    s
}

/// Outcome of the pairing bound `∏_v |g(P,Q)|_v ≤ (n+1)!·max_j X_j Y_{n−j}`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    #[serde(with = "serde_rational")]
    pub g: Rational,
    /// `g = 0`, in which case the bound is vacuous.
    pub vacuous: bool,
    pub check: Option<Inequality>,
}

impl PairingReport {
    pub fn holds(&self) -> bool {
        self.vacuous || self.check.as_ref().is_some_and(Inequality::holds)
    }
}

pub fn pairing_bound_check(p: &RatPoly, q: &RatPoly, bx: &BodySpec, by: &BodySpec) -> Result<PairingReport> {
    let n = bx.n;
    if by.n != n || bx.xi != by.xi {
        return Err(Error::Precondition("bodies must share n and xi".into()));
    }
    if !convexbody::membership(p, bx, &Rational::one())? || !convexbody::membership(q, by, &Rational::one())? {
        return Err(Error::Precondition("polynomials must lie in their bodies".into()));
    }
    let g = bilinear_g(p, q, n, &Rational::zero());
    if g.is_zero() {
        return Ok(PairingReport { g, vacuous: true, check: None });
    }
    // The product formula makes the left side exactly 1 for a nonzero rational.
    if !rational::product_formula_check(&g)? {
        return Err(Error::HardAssertion("product formula failed for g".into()));
    }
    let m = (0..=n).map(|j| &bx.x[j] * &by.x[n - j]).max().unwrap();
    let rhs = from_bigint(factorial(n as u64 + 1)) * m;
    let check = Inequality::le_exact("prod_v |g(P,Q)|_v <= (n+1)! max X_j Y_{n-j}", Rational::one(), rhs);
    Ok(PairingReport { g, vacuous: false, check: Some(check) })
}

fn require_integer_poly(q: &RatPoly, n: usize) -> Result<()> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.deg() > n {
        return Err(Error::DegreeOverflow { degree: q.deg(), cap: n });
    }
    if !q.is_integral() {
        return Err(Error::NonIntegerCoefficients);
    }
    Ok(())
}

/// Determinant of a small interval matrix by cofactor expansion.
fn det_interval(m: &[Vec<Interval>]) -> Interval {
    match m.len() {
        0 => Interval::int(1),
        1 => m[0][0].clone(),
        k => {
            let mut acc = Interval::int(0);
            for j in 0..k {
                if m[0][j].lo.is_zero() && m[0][j].hi.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Interval>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
                let t = &m[0][j] * &det_interval(&minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// `max |det|` over the maximal minors using the columns from `first` on.
fn max_minor(m: &[Vec<Interval>], first: usize) -> Interval {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut best = Interval::int(0);
    for sub in linalg::column_subsets(cols - first, rows) {
        let sm: Vec<Vec<Interval>> = m.iter().map(|r| sub.iter().map(|&c| r[c + first].clone()).collect()).collect();
        best = best.max(&det_interval(&sm).abs());
    }
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelState {
    pub n: usize,
    pub q: RatPoly,
    #[serde(serialize_with = "serialize_display")]
    pub xi: RealNumber,
    #[serde(with = "rational::serde_rational_vec")]
    pub y: Vec<Rational>,
    /// Exact points for rational `ξ`, certified enclosures otherwise.
    pub z: Vec<Interval>,
    /// `rank(M_ℓ)` for `ℓ = 0..n`.
    pub ranks: Vec<usize>,
    /// Whether `rank(N_ℓ) = rank(M_ℓ)` was certified directly on `N_ℓ`.
    pub n_rank_certified: Vec<bool>,
}

impl HankelState {
    pub fn m(&self, l: usize) -> Matrix {
        (0..=l).map(|i| (0..=self.n - l).map(|j| self.y[i + j].clone()).collect()).collect()
    }

    pub fn n_interval(&self, l: usize) -> Vec<Vec<Interval>> {
        (0..=l).map(|i| (0..=self.n - l).map(|j| self.z[i + j].clone()).collect()).collect()
    }

    /// `N_ℓ` when `ξ` is rational.
    pub fn n_exact(&self, l: usize) -> Option<Matrix> {
        self.xi.as_rational()?;
        Some(self.n_interval(l).into_iter().map(|r| r.into_iter().map(|x| x.lo).collect()).collect())
    }

    pub fn rank(&self, l: usize) -> usize {
        self.ranks[l]
    }

    /// `‖N_ℓ‖`: the largest maximal minor in absolute value.
    pub fn norm_n(&self, l: usize) -> Interval {
        max_minor(&self.n_interval(l), 0)
    }
}

/// True when some `r×r` minor of `m` is certified nonzero.
fn certified_minor(m: &[Vec<Interval>], r: usize) -> bool {
    if r == 0 {
        return true;
    }
    let cols = m.first().map_or(0, Vec::len);
    linalg::column_subsets(m.len(), r).iter().any(|rows| {
        linalg::column_subsets(cols, r).iter().any(|cs| {
            let sm: Vec<Vec<Interval>> = rows.iter().map(|&i| cs.iter().map(|&c| m[i][c].clone()).collect()).collect();
            !det_interval(&sm).contains_zero()
        })
    })
}

pub fn build_state(q: &RatPoly, xi: &RealNumber, n: usize) -> Result<HankelState> {
    require_integer_poly(q, n)?;
    let y: Vec<Rational> = (0..=n)
        .map(|i| {
            let v = from_bigint(factorial(i as u64) * factorial((n - i) as u64)) * q.coeff(n - i);
            if i % 2 == 0 { v } else { -v }
        })
        .collect();
    let z: Vec<Interval> = match xi.as_rational() {
        Some(r) => {
            let tc = q.taylor_coeffs_at(r);
            (0..=n)
                .map(|i| {
                    let c = tc.get(n - i).cloned().unwrap_or_else(Rational::zero);
                    let v = from_bigint(factorial(i as u64) * factorial((n - i) as u64)) * c;
                    Interval::point(if i % 2 == 0 { v } else { -v })
                })
                .collect()
        }
        None => {
            let x = xi.enclosure(precision_cap().max(128));
            (0..=n)
                .map(|i| {
                    let v = eval_interval(&q.nth_derivative(n - i), &x).scale(&from_bigint(factorial(i as u64)));
                    if i % 2 == 0 { v } else { -&v }
                })
                .collect()
        }
    };
    let mut st = HankelState { n, q: q.clone(), xi: xi.clone(), y, z, ranks: Vec::new(), n_rank_certified: Vec::new() };
    for l in 0..=n {
        let m = st.m(l);
        if linalg::transpose(&m) != st.m(n - l) {
            return Err(Error::HardAssertion(format!("M_{} is not the transpose of M_{l}", n - l)));
        }
        let r = linalg::rank(&m);
        let certified = match st.n_exact(l) {
            Some(nm) => {
                if linalg::rank(&nm) != r {
                    return Err(Error::HardAssertion(format!("rank(N_{l}) differs from rank(M_{l})")));
                }
                true
            }
            None => certified_minor(&st.n_interval(l), r),
        };
        st.ranks.push(r);
        st.n_rank_certified.push(certified);
    }
    Ok(st)
}

/// `V_ℓ = {G ∈ E_{n−ℓ} : g(T^i G, Q) = 0, i ≤ ℓ}` as primitive integer vectors `a_0..a_{n−ℓ}`.
#[derive(Clone, Debug, Serialize)]
pub struct KernelSpace {
    pub ell: usize,
    pub dim: usize,
    #[serde(with = "crate::exactnum::rational::serde_int_vec_vec")]
    pub basis: Vec<Vec<BigInt>>,
    /// `H(V_ℓ)`, asserted equal to `H(M_ℓ)` when `M_ℓ` has full row rank.
    #[serde(with = "crate::exactnum::rational::serde_rational_opt")]
    pub height: Option<Rational>,
}

impl KernelSpace {
    pub fn polys(&self) -> Vec<RatPoly> {
        self.basis.iter().map(|b| RatPoly::from_bigints(b)).collect()
    }

    pub fn matrix(&self) -> Matrix {
        linalg::to_rational(&self.basis)
    }
}

#[allow(non_snake_case)]
pub fn kernel_V(state: &HankelState, l: usize) -> Result<KernelSpace> {
    let n = state.n;
    if l > n {
        return Err(Error::Precondition(format!("ell = {l} exceeds n = {n}")));
    }
    let m = state.m(l);
    let basis = linalg::nullspace_int(&m, n - l + 1);
    let r = state.rank(l);
    if basis.len() != n - l + 1 - r {
        return Err(Error::HardAssertion(format!("dim V_{l} = {} but n - l + 1 - rank = {}", basis.len(), n - l + 1 - r)));
    }
    let height = if basis.is_empty() { None } else { Some(height_matrix(&linalg::to_rational(&basis))?.value) };
    if r == l + 1 && !basis.is_empty() {
        let hm = height_matrix(&m)?.value;
        if height.as_ref() != Some(&hm) {
            return Err(Error::HardAssertion(format!("H(V_{l}) differs from H(M_{l})")));
        }
    }
    Ok(KernelSpace { ell: l, dim: basis.len(), basis, height })
}

fn coeff_vec(p: &RatPoly, len: usize) -> Vec<Rational> {
    (0..len).map(|i| p.coeff(i)).collect()
}

/// Primitive integer form with positive leading coefficient.
fn normalize(p: &RatPoly) -> RatPoly {
    let q = p.primitive();
    if q.leading().is_negative() {
        -&q
    } else {
        q
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankDrop {
    pub h: usize,
    pub p: RatPoly,
    /// `V_{h−1}`, which equals `P·E_{n−2h+1}`.
    pub v_prev: KernelSpace,
}

/// Least `h ≤ k` with `rank(M_{h−1}) = h` and `rank(M_h) ≤ h`, and the divisor `P` it yields.
pub fn rank_drop_extract(state: &HankelState, k: usize) -> Result<RankDrop> {
    let n = state.n;
    if k == 0 || 2 * k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= n/2, got k = {k}, n = {n}")));
    }
    let Some(h) = (1..=k).find(|&h| state.rank(h - 1) == h && state.rank(h) <= h) else {
        return Err(Error::NoRankDrop(k));
    };
    let mt = state.m(n - h);
    let mut p = None;
    for d in 0..=h {
        let sub: Matrix = mt.iter().map(|r| r[..=d].to_vec()).collect();
        let ns = linalg::nullspace_int(&sub, d + 1);
        if !ns.is_empty() {
            if ns.len() != 1 {
                return Err(Error::HardAssertion(format!("minimal-degree part of V_{} has dimension {}", n - h, ns.len())));
            }
            p = Some(normalize(&RatPoly::from_bigints(&ns[0])));
            break;
        }
    }
    let Some(p) = p else {
        return Err(Error::HardAssertion(format!("V_{} is zero despite the rank drop", n - h)));
    };
    let v_prev = kernel_V(state, h - 1)?;
    let width = n - h + 2;
    let shifted: Matrix = (0..=n + 1 - 2 * h).map(|i| coeff_vec(&p.shift_up(i), width)).collect();
    if !linalg::same_row_space(&shifted, &v_prev.matrix()) {
        return Err(Error::HardAssertion(format!("P E_{{n-2h+1}} differs from V_{}", h - 1)));
    }
    if !v_prev.polys().iter().all(|g| p.divides(g)) {
        return Err(Error::HardAssertion(format!("P does not divide V_{}", h - 1)));
    }
    Ok(RankDrop { h, p, v_prev })
}

/// `Σ_{j=1}^{d} Σ_{i=j}^{d} C(i,j) a^{i−j}`, bounding `Σ_{j≥1} |b_j|/‖P‖` for
/// `P = Σ b_j (T−ξ)^j` of degree `d` and `|ξ| ≤ a`.
pub fn recurrence_constant(d: usize, abs_xi: &Rational) -> Rational {
    let mut c = Rational::zero();
    for j in 1..=d {
        for i in j..=d {
            c += from_bigint(binomial(i as u64, j as u64)) * rational::pow(abs_xi, (i - j) as u64);
        }
    }
    c
}

fn abs_xi_bound(xi: &RealNumber) -> Rational {
    match xi.as_rational() {
        Some(r) => r.abs(),
        None => xi.abs_upper(),
    }
}

/// `(ℓ+1)!(n!)^{ℓ+1}`, bounding `‖N_ℓ‖` by `X_{n−ℓ}⋯X_n` for nondecreasing `X`.
pub fn c5(n: usize, l: usize) -> Rational {
    from_bigint(factorial(l as u64 + 1) * num_traits::pow(factorial(n as u64), l + 1))
}

/// `(1+|ξ|)^S` with `S = Σ_{j=n−2ℓ}^{n−ℓ} j`, bounding `H(M_ℓ)/‖N_ℓ‖` at full rank.
pub fn c7(n: usize, l: usize, abs_xi: &Rational) -> Rational {
    let s: usize = (n - 2 * l..=n - l).sum();
    rational::pow(&(abs_xi + Rational::one()), s as u64)
}

/// Records for the ratio bound on `|P(ξ)|/‖P‖`.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub ell: usize,
    pub t: usize,
    /// Recurrence constant `c`.
    #[serde(with = "serde_rational")]
    pub c: Rational,
    /// `C = c^t (ℓ+1)! (n!)^{ℓ+1}`.
    #[serde(with = "serde_rational")]
    pub constant: Rational,
    /// Product of the row bounds, `X_{n−t−ℓ}⋯X_{n−t}` for nondecreasing `X`.
    #[serde(with = "serde_rational")]
    pub x_product: Rational,
    pub norm_n: Interval,
    pub norm_tail: Interval,
    /// `(|P(ξ)|/‖P‖)^t ≤ c^t ‖N^{(t+1)}‖/‖N_ℓ‖`.
    pub telescoped: Inequality,
    /// `(|P(ξ)|/‖P‖)^t ≤ C·x_product/‖N_ℓ‖`.
    pub bound: Inequality,
}

impl RatioReport {
    pub fn holds(&self) -> bool {
        self.telescoped.holds() && self.bound.holds()
    }
}

fn check_body(state: &HankelState, body: &BodySpec) -> Result<()> {
    if body.n != state.n || body.xi != state.xi {
        return Err(Error::Precondition("body must share n and xi with the state".into()));
    }
    if !convexbody::membership(&state.q, body, &Rational::one())? {
        return Err(Error::Precondition("Q is not in the body".into()));
    }
    Ok(())
}

fn nondecreasing(x: &[Rational]) -> bool {
    x.windows(2).all(|w| w[0] <= w[1])
}

pub fn ratio_bound_check(state: &HankelState, l: usize, t: usize, p: &RatPoly, body: &BodySpec) -> Result<RatioReport> {
    let n = state.n;
    if 2 * l >= n || t == 0 || t > n - 2 * l {
        return Err(Error::Precondition(format!("need l < n/2 and 1 <= t <= n - 2l (l = {l}, t = {t})")));
    }
    if state.rank(l) != l + 1 {
        return Err(Error::Precondition(format!("N_{l} must have rank {}", l + 1)));
    }
    if p.is_zero() || p.deg() == 0 {
        return Err(Error::Precondition("P must be nonconstant".into()));
    }
    if p.deg() + t - 1 > n - l {
        return Err(Error::Precondition("T^(t-1) P exceeds degree n - l".into()));
    }
    let m = state.m(l);
    for i in 0..t {
        let v = coeff_vec(&p.shift_up(i), n - l + 1);
        if linalg::mat_vec(&m, &v).iter().any(|x| !x.is_zero()) {
            return Err(Error::Precondition(format!("T^{i} P is not in V_{l}")));
        }
    }
    check_body(state, body)?;
    let c = recurrence_constant(p.deg(), &abs_xi_bound(&state.xi));
    let ct = rational::pow(&c, t as u64);
    let constant = &ct * c5(n, l);
    // Row i of N^{(t+1)} holds z_m for m = i+t..=i+n−l, and |z_m| ≤ m!·X_{n−m} ≤ n!·X_{n−m}.
    let x_product = (0..=l).fold(Rational::one(), |acc, i| {
        acc * (i + t..=i + n - l).map(|mm| body.x[n - mm].clone()).max().unwrap()
    });
    let nm = state.n_interval(l);
    let norm_n = max_minor(&nm, 0);
    let norm_tail = max_minor(&nm, t);
    let lhs = normalized_value(p, &state.xi, precision_cap().max(128)).pow(t as u32);
    let telescoped = Inequality::le(
        "(|P(xi)|/|P|)^t <= c^t |N^(t+1)| / |N_l|",
        lhs.clone(),
        norm_tail.scale(&ct).div(&norm_n)?,
    );
    let bound = Inequality::le(
        "(|P(xi)|/|P|)^t <= C X_{n-t-l}...X_{n-t} / |N_l|",
        lhs,
        Interval::point(&constant * &x_product).div(&norm_n)?,
    );
    Ok(RatioReport { ell: l, t, c, constant, x_product, norm_n, norm_tail, telescoped, bound })
}

/// The irreducible factor chosen after a rank drop.
#[derive(Clone, Debug, Serialize)]
pub struct FactorChoice {
    pub factor: RatPoly,
    /// `(|P_i(ξ)|/‖P_i‖)^t δ^{−deg P_i} H(P_i)^{n+2−2k}`.
    pub quantity: Interval,
    pub check: Inequality,
    /// Whether the factor divides every element of `V_{k−1}`.
    pub divides_v: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DropData {
    pub h: usize,
    pub p: RatPoly,
    #[serde(with = "serde_rational")]
    pub height_p: Rational,
    #[serde(with = "serde_rational")]
    pub height_m: Rational,
    pub ratio: RatioReport,
    /// Product-space height constant for `(n−2h+2, deg P)`, when within the module cap.
    #[serde(with = "crate::exactnum::rational::serde_rational_opt")]
    pub c52: Option<Rational>,
    #[serde(with = "crate::exactnum::rational::serde_rational_opt")]
    pub c8: Option<Rational>,
    pub c9: Option<Interval>,
    pub choice: Option<FactorChoice>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DivisorOutcome {
    Dropped(Box<DropData>),
    DidNotDrop,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    #[serde(with = "serde_rational")]
    pub y: Rational,
    /// Uniform constants over `ℓ ≤ k`.
    #[serde(with = "serde_rational")]
    pub c5: Rational,
    #[serde(with = "serde_rational")]
    pub c7: Rational,
    pub ranks: Vec<usize>,
    /// `Yδ^{k+1−t} < (c5 c7)^{-1}`.
    pub premise: Inequality,
    pub outcome: DivisorOutcome,
    /// Consequences whose hypotheses were met; any violation is an implementation fault.
    pub asserted: Vec<Inequality>,
    /// Measured quantities recorded without a hypothesis guaranteeing them.
    pub diagnostic: Vec<Inequality>,
}

impl DivisorReport {
    pub fn violations(&self) -> usize {
        self.asserted.iter().filter(|i| i.verdict == crate::report::Verdict::Violated).count()
    }
}

fn cmp_factor_quantity(a: &(RatPoly, Interval), b: &(RatPoly, Interval)) -> Ordering {
    match a.1.compare(&b.1) {
        Some(o) if o != Ordering::Equal => o,
        _ => a.0.coeffs().cmp(b.0.coeffs()),
    }
}

/// Runs the rank-drop construction with effective constants.
pub fn construct_divisor(body: &BodySpec, q: &RatPoly, k: usize, t: usize) -> Result<DivisorReport> {
    let n = body.n;
    if k == 0 || 2 * k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= n/2, got k = {k}")));
    }
    if t == 0 || t + 2 * k > n + 2 {
        return Err(Error::Precondition(format!("need 1 <= t <= n + 2 - 2k, got t = {t}")));
    }
    let x = &body.x;
    let one = Rational::one();
    if !nondecreasing(x) || x[n - t] >= one || (t >= 1 && n + 1 - t <= n && x[n + 1 - t] < one) {
        return Err(Error::Precondition("need X_0 <= ... <= X_(n-t) < 1 <= X_(n-t+1) <= ... <= X_n".into()));
    }
    let state = build_state(q, &body.xi, n)?;
    check_body(&state, body)?;
    let delta = x[n - t].clone();
    let y: Rational = x[n + 1 - t..].iter().fold(Rational::one(), |a, v| a * v);
    let axi = abs_xi_bound(&body.xi);
    let c5u = (0..=k).map(|l| c5(n, l)).max().unwrap();
    let c7u = (0..=k).map(|l| c7(n, l, &axi)).max().unwrap();
    let premise_lhs = &y * rational::pow(&delta, (k + 1 - t) as u64);
    let premise = Inequality::lt("Y delta^(k+1-t) < 1/(c5 c7)", Interval::point(premise_lhs), Interval::point((&c5u * &c7u).recip()));
    let mut rep = DivisorReport {
        n,
        k,
        t,
        delta: delta.clone(),
        y: y.clone(),
        c5: c5u.clone(),
        c7: c7u.clone(),
        ranks: state.ranks.clone(),
        premise: premise.clone(),
        outcome: DivisorOutcome::DidNotDrop,
        asserted: Vec::new(),
        diagnostic: Vec::new(),
    };
    let drop = match rank_drop_extract(&state, k) {
        Ok(d) => d,
        Err(Error::NoRankDrop(_)) => {
            if premise.holds() {
                return Err(Error::HardAssertion("premise holds but M_k has full rank".into()));
            }
            return Ok(rep);
        }
        Err(e) => return Err(e),
    };
    let h = drop.h;
    let p = drop.p.clone();
    let hp = height_poly(&p)?;
    let hm = height_matrix(&state.m(h - 1))?.value;
    let l = h - 1;
    let bucket = |b: bool| if b { 0 } else { 1 };
    let mut buckets: [Vec<Inequality>; 2] = [Vec::new(), Vec::new()];
    let pre = premise.holds();

    // H(M_{h−1}) ≤ c7‖N_{h−1}‖ ≤ c5 c7 X_{n−h+1}⋯X_n ≤ c5 c7 Y δ^{h−t}.
    let c7l = c7(n, l, &axi);
    let nrm = state.norm_n(l);
    buckets[0].push(Inequality::le("H(M_(h-1)) <= c7 |N_(h-1)|", Interval::point(hm.clone()), nrm.scale(&c7l)));
    let xs: Rational = x[n - l..].iter().fold(Rational::one(), |a, v| a * v);
    buckets[0].push(Inequality::le("|N_(h-1)| <= c5 X_(n-h+1)...X_n", nrm.clone(), Interval::point(c5(n, l) * &xs)));
    let ydh = &y * rational::powi(&delta, h as i64 - t as i64);
    buckets[0].push(Inequality::le_exact("H(M_(h-1)) <= c5 c7 Y delta^(h-t)", hm.clone(), &c5u * &c7u * &ydh));

    let ratio = ratio_bound_check(&state, l, t, &p, body)?;
    buckets[0].push(ratio.telescoped.clone());
    buckets[0].push(ratio.bound.clone());

    let kp = n + 2 - 2 * h;
    let c52 = match gelfond::product_space_height_check(&p, kp) {
        Ok(ps) => {
            buckets[0].push(ps.lower.clone());
            buckets[0].push(ps.upper.clone());
            Some(ps.constant)
        }
        Err(Error::CapExceeded(_)) => None,
        Err(e) => return Err(e),
    };
    let mut c8 = None;
    let mut c9 = None;
    let mut choice = None;
    if let Some(c52) = &c52 {
        // H(P)^{n(n+2−2h)} ≤ c52^n δ^{−k(n+2−2h)}.
        let lhs = rational::pow(&hp, (n * kp) as u64);
        let rhs = rational::pow(c52, n as u64) * rational::powi(&delta, -((k * kp) as i64));
        buckets[bucket(pre)].push(Inequality::le_exact("H(P)^(n(n+2-2h)) <= c52^n delta^(-k(n+2-2h))", lhs, rhs));
        let c8v = &ratio.constant * &c7l * c52;
        let lhs = normalized_value(&p, &body.xi, precision_cap().max(128)).pow(t as u32);
        let rhs = &c8v * rational::pow(&delta, h as u64) * rational::powi(&hp, -(kp as i64));
        buckets[0].push(Inequality::le("(|P(xi)|/|P|)^t <= c8 delta^h H(P)^-(n+2-2h)", lhs, Interval::point(rhs)));
        let c9v = e_pow((n * n) as i64, 128).scale(&c8v).max(&Interval::int(1));
        let applicable = &c8v * &delta < one;
        choice = choose_factor(&state, &p, &body.xi, &delta, n, k, t, &c9v)?;
        if let Some(ch) = &choice {
            buckets[bucket(applicable)].push(ch.check.clone());
        }
        c8 = Some(c8v);
        c9 = Some(c9v);
    }
    let [asserted, diagnostic] = buckets;
    rep.asserted = asserted;
    rep.diagnostic = diagnostic;
    rep.outcome = DivisorOutcome::Dropped(Box::new(DropData {
        h,
        p,
        height_p: hp,
        height_m: hm,
        ratio,
        c52,
        c8,
        c9,
        choice,
    }));
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn choose_factor(
    state: &HankelState,
    p: &RatPoly,
    xi: &RealNumber,
    delta: &Rational,
    n: usize,
    k: usize,
    t: usize,
    c9: &Interval,
) -> Result<Option<FactorChoice>> {
    if p.deg() == 0 {
        return Ok(None);
    }
    let fac = factor_over_rationals(p, FACTOR_DEGREE_CAP as u64)?;
    let bits = precision_cap().max(128);
    let mut cands = Vec::new();
    for (f, _) in &fac.factors {
        let f = normalize(f);
        let v = normalized_value(&f, xi, bits).pow(t as u32);
        let s = rational::powi(delta, -(f.deg() as i64)) * rational::pow(&height_poly(&f)?, (n + 2 - 2 * k) as u64);
        cands.push((f, v.scale(&s)));
    }
    cands.sort_by(cmp_factor_quantity);
    let (factor, quantity) = cands.swap_remove(0);
    let v = kernel_V(state, k - 1)?;
    let divides_v = v.polys().iter().all(|g| factor.divides(g));
    let check = Inequality::le("(|P_i(xi)|/|P_i|)^t delta^-deg H(P_i)^(n+2-2k) <= c9", quantity.clone(), c9.clone());
    Ok(Some(FactorChoice { factor, quantity, check, divides_v }))
}

/// Result of checking that small dual-body polynomials lie in `V_ℓ`.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub ell: usize,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    /// Nonzero lattice points checked (up to sign).
    pub checked: usize,
    /// Pairings `g(T^m G, Q)` evaluated.
    pub pairings: usize,
}

/// `((n+1)!)^{-2}`.
pub fn inclusion_constant(n: usize) -> Rational {
    let f = from_bigint(factorial(n as u64 + 1));
    (&f * &f).recip()
}

fn dual_body(state: &HankelState, l: usize, body: &BodySpec, c: &Rational) -> Result<BodySpec> {
    let n = state.n;
    let y: Vec<Rational> = (0..=n - l).map(|j| c / &body.x[n - j]).collect();
    BodySpec::new(state.xi.clone(), y)
}

fn sorted_points(mut pts: Vec<LatticePoint>) -> Vec<LatticePoint> {
    pts.sort_by(|a, b| {
        let da = a.coeffs.iter().rposition(|&c| c != 0);
        let db = b.coeffs.iter().rposition(|&c| c != 0);
        let la: u64 = a.coeffs.iter().map(|c| c.unsigned_abs()).sum();
        let lb: u64 = b.coeffs.iter().map(|c| c.unsigned_abs()).sum();
        (da, la, &a.coeffs).cmp(&(db, lb, &b.coeffs))
    });
    pts
}

/// Verifies `g(T^m G, Q) = 0` for `m ≤ ℓ` and every integer `G ∈ 𝒞(cX_n^{-1},…,cX_ℓ^{-1})`,
/// enumerated exhaustively, or only the first `samples` in a fixed order.
pub fn inclusion_check_71(state: &HankelState, l: usize, body: &BodySpec, samples: Option<usize>) -> Result<InclusionReport> {
    let n = state.n;
    if l > n {
        return Err(Error::Precondition(format!("ell = {l} exceeds n = {n}")));
    }
    check_body(state, body)?;
    if !nondecreasing(&body.x) {
        return Err(Error::Precondition("X must be nondecreasing".into()));
    }
    let c = inclusion_constant(n);
    let dual = dual_body(state, l, body, &c)?;
    let mut pts = sorted_points(convexbody::lattice_points(&dual, &Rational::one())?);
    if let Some(s) = samples {
        pts.truncate(s);
    }
    let mut pairings = 0;
    for pt in &pts {
        let g = pt.poly();
        for m in 0..=l {
            pairings += 1;
            let v = bilinear_g(&g.shift_up(m), &state.q, n, &Rational::zero());
            if !v.is_zero() {
                return Err(Error::CounterexampleFound(format!("g(T^{m} G, Q) = {} for G = {g}", rational::to_string(&v))));
            }
        }
    }
    Ok(InclusionReport { ell: l, c, checked: pts.len(), pairings })
}

/// Auxiliary polynomial with `G^{(i)} ∈ V_ℓ` for `i ≤ u`.
#[derive(Clone, Debug, Serialize)]
pub struct AuxReport {
    pub ell: usize,
    pub u: usize,
    pub g: RatPoly,
    #[serde(with = "serde_rational")]
    pub height: Rational,
    /// `X_{ℓ+u}^{-1}`.
    #[serde(with = "serde_rational")]
    pub target: Rational,
    /// `Y_0..Y_{n−ℓ}` of the search body.
    #[serde(with = "rational::serde_rational_vec")]
    pub y: Vec<Rational>,
    /// Whether Minkowski's volume condition guarantees a point at scale `1/n!`.
    pub minkowski_premise: bool,
    /// Found in the scaled body (false: taken from a kernel basis when `u = 0`).
    pub from_search: bool,
    /// Body points checked against the derivative conditions.
    pub checked: usize,
}

fn in_kernel(state: &HankelState, l: usize, g: &RatPoly) -> bool {
    let m = state.m(l);
    let v = coeff_vec(g, state.n - l + 1);
    linalg::mat_vec(&m, &v).iter().all(Zero::is_zero)
}

fn derivatives_in_kernel(state: &HankelState, l: usize, u: usize, g: &RatPoly) -> bool {
    (0..=u).all(|i| in_kernel(state, l, &g.nth_derivative(i)))
}

#[allow(non_snake_case)]
pub fn aux_polynomial_G(state: &HankelState, l: usize, u: usize, body: &BodySpec) -> Result<AuxReport> {
    let n = state.n;
    if l + u >= n {
        return Err(Error::Precondition(format!("need l + u < n (l = {l}, u = {u})")));
    }
    check_body(state, body)?;
    if !nondecreasing(&body.x) {
        return Err(Error::Precondition("X must be nondecreasing".into()));
    }
    let c = inclusion_constant(n);
    let y: Vec<Rational> =
        (0..=n - l).map(|i| if i <= u { &c / &body.x[n] } else { &c / &body.x[n - i + u] }).collect();
    let search = BodySpec::new(state.xi.clone(), y.clone())?;
    let kappa = from_bigint(factorial(n as u64)).recip();
    let minkowski_premise = convexbody::first_minimum_condition(&search, &kappa)?;
    let pts = sorted_points(convexbody::lattice_points(&search, &kappa)?);
    let target = body.x[l + u].recip();
    for pt in &pts {
        let g = pt.poly();
        if !derivatives_in_kernel(state, l, u, &g) {
            return Err(Error::CounterexampleFound(format!("G = {g} in the scaled body has a derivative outside V_{l}")));
        }
    }
    if let Some(pt) = pts.first() {
        let g = pt.poly();
        return Ok(AuxReport {
            ell: l,
            u,
            height: height_poly(&g)?,
            g,
            target,
            y,
            minkowski_premise,
            from_search: true,
            checked: pts.len(),
        });
    }
    if u == 0 {
        let v = kernel_V(state, l)?;
        let best = v.basis.iter().map(|b| (height_int(b), b)).filter_map(|(h, b)| h.ok().map(|h| (h, b))).min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        if let Some((h, b)) = best {
            return Ok(AuxReport {
                ell: l,
                u,
                g: RatPoly::from_bigints(b),
                height: h,
                target,
                y,
                minkowski_premise,
                from_search: false,
                checked: 0,
            });
        }
    }
    Err(Error::SearchExhausted(format!("no nonzero point in (1/n!) C(Y) for l = {l}, u = {u}")))
}

/// `P^{u+1} | G` and `(u+1)·deg P ≤ n − ℓ`.
#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityReport {
    pub divides: bool,
    pub degree_bound: bool,
}

pub fn cor_7_3_check(g: &RatPoly, p: &RatPoly, u: usize, n: usize, l: usize) -> DivisibilityReport {
    DivisibilityReport { divides: p.pow(u + 1).divides(g), degree_bound: (u + 1) * p.deg() <= n - l }
}

/// Full-run summary for the CLI: ranks, kernels and the optional divisor pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct HankelRun {
    pub state: HankelState,
    pub kernel_dims: Vec<usize>,
    pub divisor: Option<DivisorReport>,
}

pub fn hankel_run(body: &BodySpec, q: &RatPoly, k: usize, t: usize) -> Result<HankelRun> {
    let state = build_state(q, &body.xi, body.n)?;
    let kernel_dims = (0..=body.n).map(|l| kernel_V(&state, l).map(|v| v.dim)).collect::<Result<Vec<_>>>()?;
    let divisor = match construct_divisor(body, q, k, t) {
        Ok(d) => Some(d),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(HankelRun { state, kernel_dims, divisor })
}

/// `Q` with prescribed `y_0..y_n`, solving `y_i = (−1)^i i!(n−i)! q_{n−i}`.
pub fn poly_from_y(y: &[Rational]) -> RatPoly {
    let n = y.len() - 1;
    let mut c = vec![Rational::zero(); n + 1];
    for (i, yi) in y.iter().enumerate() {
        let v = yi / from_bigint(factorial(i as u64) * factorial((n - i) as u64));
        c[n - i] = if i % 2 == 0 { v } else { -v };
    }
    RatPoly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use crate::exactnum::real::real_nth_root;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    fn rq(x: Rational) -> RealNumber {
        RealNumber::Rational(x)
    }

    #[test]
    fn pairing_examples() {
        let n = 3;
        assert_eq!(bilinear_g(&RatPoly::one(), &RatPoly::monomial(n), n, &int(0)), int(6));
        for i in 0..=n {
            let expect = from_bigint(factorial(i as u64) * factorial((n - i) as u64));
            let expect = if i % 2 == 0 { expect } else { -expect };
            assert_eq!(bilinear_g(&RatPoly::monomial(i), &RatPoly::monomial(n - i), n, &int(0)), expect);
        }
        let (a, b) = (p(&[1, -2, 0, 3]), p(&[4, 1, 1]));
        assert_eq!(bilinear_g(&a, &b, 3, &int(0)), bilinear_g(&a, &b, 3, &int(1)));
        let cbrt2 = RealNumber::Algebraic(real_nth_root(2, 3));
        assert!(bilinear_g_at(&a, &b, 3, &cbrt2, 128).contains(&bilinear_g(&a, &b, 3, &int(0))));
    }

    #[test]
    fn pairing_bound_examples() {
        let b = BodySpec::new(rq(int(0)), vec![int(1), int(1)]).unwrap();
        let r = pairing_bound_check(&RatPoly::one(), &RatPoly::one(), &b, &b).unwrap();
        assert!(r.vacuous);
        let r = pairing_bound_check(&RatPoly::one(), &p(&[0, 1]), &b, &b).unwrap();
        assert_eq!(r.g, int(1));
        assert!(r.holds());
        assert_eq!(r.check.unwrap().rhs, Interval::int(2));
    }

    #[test]
    fn state_examples() {
        let s = build_state(&RatPoly::monomial(3), &rq(int(0)), 3).unwrap();
        assert_eq!(s.y, vec![int(6), int(0), int(0), int(0)]);
        let s = build_state(&p(&[1, -2, 1]), &rq(int(0)), 2).unwrap();
        assert_eq!(s.y, vec![int(2), int(2), int(2)]);
        assert_eq!(s.ranks, vec![1, 1, 1]);
        let s = build_state(&p(&[3, 0, -1, 2, 5]), &rq(rat(2, 3)), 4).unwrap();
        assert!(s.n_rank_certified.iter().all(|&b| b));
        let cbrt2 = RealNumber::Algebraic(real_nth_root(2, 3));
        let s = build_state(&p(&[3, 0, -1, 2, 5]), &cbrt2, 4).unwrap();
        assert!(s.n_rank_certified.iter().all(|&b| b));
        assert_eq!(build_state(&RatPoly::zero(), &rq(int(0)), 2).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn kernel_examples() {
        let s = build_state(&RatPoly::monomial(3), &rq(int(0)), 3).unwrap();
        let v = kernel_V(&s, 0).unwrap();
        assert_eq!(v.dim, 3);
        assert!(v.polys().iter().all(|g| g.coeff(0).is_zero()));
        let s = build_state(&p(&[1, -2, 1]), &rq(int(0)), 2).unwrap();
        let v = kernel_V(&s, 1).unwrap();
        assert_eq!(v.dim, 1);
        assert_eq!(normalize(&v.polys()[0]), p(&[-1, 1]));
        let s = build_state(&p(&[2, -1, 3, 1]), &rq(int(1)), 3).unwrap();
        let v = kernel_V(&s, 0).unwrap();
        assert_eq!(v.dim, 3);
        assert_eq!(v.height, Some(height_matrix(&s.m(0)).unwrap().value));
    }

    #[test]
    fn rank_drop_examples() {
        let s = build_state(&p(&[1, -2, 1]), &rq(int(0)), 2).unwrap();
        let d = rank_drop_extract(&s, 1).unwrap();
        assert_eq!((d.h, d.p.clone()), (1, p(&[-1, 1])));
        assert_eq!(d.v_prev.dim, 2);
        // y_i = 24·3^i: a rank-one Hankel matrix with kernel direction T − 3.
        let s = build_state(&p(&[-3, 1]).pow(4), &rq(int(0)), 4).unwrap();
        assert_eq!(s.y, (0..5).map(|i| int(24 * 3i64.pow(i))).collect::<Vec<_>>());
        let d = rank_drop_extract(&s, 2).unwrap();
        assert_eq!(d.h, 1);
        assert_eq!(d.p, p(&[-3, 1]));
        let s = build_state(&RatPoly::monomial(4), &rq(int(0)), 4).unwrap();
        let d = rank_drop_extract(&s, 1).unwrap();
        assert_eq!((d.h, d.p), (1, p(&[0, 1])));
        // y = 24·(1, 0, 1, 0, 3): every M_ℓ has full rank.
        let q = p(&[3, 0, 6, 0, 1]);
        assert_eq!(poly_from_y(&[int(24), int(0), int(24), int(0), int(72)]), q);
        let s = build_state(&q, &rq(int(0)), 4).unwrap();
        assert_eq!(rank_drop_extract(&s, 2).unwrap_err(), Error::NoRankDrop(2));
        let s = build_state(&p(&[1, 0, 0, 0, 1]), &rq(int(0)), 4).unwrap();
        assert_eq!(rank_drop_extract(&s, 2).unwrap().p, p(&[0, 1]));
    }

    #[test]
    fn ratio_example() {
        let s = build_state(&p(&[1, -2, 1]), &rq(int(0)), 2).unwrap();
        let body = BodySpec::new(rq(int(0)), vec![int(1), int(2), int(2)]).unwrap();
        let r = ratio_bound_check(&s, 0, 1, &p(&[-1, 1]), &body).unwrap();
        assert_eq!(r.c, int(1));
        assert_eq!(r.constant, int(2));
        assert_eq!(r.bound.rhs, Interval::int(2));
        assert!(r.holds());
        let r = ratio_bound_check(&s, 0, 1, &p(&[-1, 1]), &body).unwrap();
        assert_eq!(r.bound.lhs, Interval::int(1));
        assert!(matches!(ratio_bound_check(&s, 1, 1, &p(&[-1, 1]), &body), Err(Error::Precondition(_))));
    }

    #[test]
    fn divisor_at_multiple_root() {
        // Q = (T−1)^4 at ξ = 1: derivatives of order < 4 vanish.
        let q = p(&[-1, 1]).pow(4);
        let eps = rational::pow(&rat(1, 10), 30);
        let body = BodySpec::new(rq(int(1)), vec![eps.clone(), eps.clone(), eps.clone(), eps, int(24)]).unwrap();
        let r = construct_divisor(&body, &q, 1, 1).unwrap();
        assert!(r.premise.holds());
        let DivisorOutcome::Dropped(d) = &r.outcome else { panic!("expected a rank drop") };
        assert_eq!((d.h, d.p.clone()), (1, p(&[-1, 1])));
        assert!(d.c8.is_some());
        assert_eq!(d.choice.as_ref().unwrap().factor, p(&[-1, 1]));
        assert_eq!(r.violations(), 0);
        assert!(r.asserted.len() >= 7);
    }

    #[test]
    fn inclusion_and_aux() {
        let q = p(&[1, -2, 1]);
        let body = BodySpec::new(rq(int(1)), vec![rat(1, 1000), rat(1, 144), int(2)]).unwrap();
        let s = build_state(&q, &rq(int(1)), 2).unwrap();
        let rep = inclusion_check_71(&s, 0, &body, None).unwrap();
        assert_eq!(rep.c, rat(1, 36));
        let aux = aux_polynomial_G(&s, 0, 1, &body).unwrap();
        assert!(cor_7_3_check(&aux.g, &p(&[-1, 1]), 1, 2, 0).divides);
        let aux0 = aux_polynomial_G(&s, 0, 0, &body).unwrap();
        assert!(in_kernel(&s, 0, &aux0.g));
    }
}
