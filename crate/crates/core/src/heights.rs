//! Heights of vectors, matrices, subspaces and polynomials over ℚ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::interval::{e_pow, sqrt_bounds, Interval};
use crate::exactnum::linalg::{self, Matrix};
use crate::exactnum::rational::{self, abs_at_place, prime_support};
use crate::exactnum::roots::{certified_roots, RootBall};
use crate::exactnum::{Place, RatPoly, Rational};
use crate::report::{Inequality, Verdict};

/// `H(a) = ∏_v ‖a‖_v` together with the places whose norm differs from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub value: Rational,
    pub per_place_norms: BTreeMap<Place, Rational>,
}

impl HeightReport {
    /// Product of the stored norms; equals `value` by construction.
    pub fn product(&self) -> Rational {
        self.per_place_norms.values().fold(Rational::one(), |acc, x| acc * x)
    }

    fn trivial() -> Self {
        HeightReport { value: Rational::one(), per_place_norms: BTreeMap::new() }
    }
}

impl Serialize for HeightReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Norms<'a>(&'a BTreeMap<Place, Rational>);
        impl Serialize for Norms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(&k.key(), &rational::to_string(v))?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("value", &rational::to_string(&self.value))?;
        m.serialize_entry("per_place_norms", &Norms(&self.per_place_norms))?;
        m.end()
    }
}

/// Height of a nonzero vector.
///
/// Writing `a = s·b` with `b` primitive integral, `‖a‖_p = |s|_p` and `‖a‖_∞ = max|a_i|`.
pub fn height_vector(a: &[Rational]) -> Result<HeightReport> {
    if a.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let (ints, den) = linalg::clear_denominators(a);
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let s = Rational::new(g.clone(), den);
    let mut norms = BTreeMap::new();
    let inf = rational::max_abs(a);
    if !inf.is_one() {
        norms.insert(Place::Infinite, inf);
    }
    for p in prime_support(&s) {
        let v = Place::Finite(p);
        norms.insert(v.clone(), abs_at_place(&s, &v));
    }
    let value = ints.iter().map(|c| (c / &g).abs()).max().map(Rational::from_integer).unwrap();
    Ok(HeightReport { value, per_place_norms: norms })
}

/// Height of an integer coefficient vector.
pub fn height_int(a: &[BigInt]) -> Result<Rational> {
    let g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(Rational::from_integer(a.iter().map(|c| (c / &g).abs()).max().unwrap()))
}

/// Height of a polynomial's coefficient vector.
pub fn height_poly(p: &RatPoly) -> Result<Rational> {
    Ok(height_vector(p.coeffs())?.value)
}

/// Order-`m` minors of an `m×n` matrix, columns in lexicographic subset order.
pub fn plucker(m: &Matrix) -> Result<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let r = linalg::rank(m);
    if rows == 0 || rows > cols || r != rows {
        return Err(Error::RankDeficient { rank: r, expected: rows });
    }
    Ok(linalg::maximal_minors(m))
}

/// Height of the Plücker vector of a full-row-rank matrix.
pub fn height_matrix(m: &Matrix) -> Result<HeightReport> {
    height_vector(&plucker(m)?)
}

/// A subspace of ℚ^N given by a basis, by equations, or both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceRep {
    pub ambient: usize,
    /// Rows span the subspace.
    pub basis: Option<Matrix>,
    /// The subspace is the kernel of this matrix.
    pub kernel: Option<Matrix>,
}

impl SubspaceRep {
    pub fn from_basis(basis: Matrix) -> Self {
        let ambient = basis.first().map_or(0, Vec::len);
        SubspaceRep { ambient, basis: Some(basis), kernel: None }
    }

    /// Adds the equation representation computed from the basis.
    pub fn with_kernel(mut self) -> Self {
        let b = self.basis.clone().unwrap_or_default();
        let k = linalg::nullspace(&b, self.ambient);
        self.kernel = Some(k);
        self
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        match (&self.basis, &self.kernel) {
            (Some(b), _) => linalg::rank(b),
            (None, Some(k)) => self.ambient - linalg::rank(k),
            (None, None) => 0,
        }
    }
}

fn height_of_rows(m: &Matrix) -> Result<HeightReport> {
    if m.is_empty() {
        return Ok(HeightReport::trivial());
    }
    height_matrix(m)
}

/// Height of a subspace; with both representations present, both are computed and compared.
pub fn height_subspace(v: &SubspaceRep) -> Result<HeightReport> {
    let n = v.ambient;
    let check_width = |m: &Matrix| -> Result<()> {
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::InconsistentRep(format!("row length differs from ambient {n}")));
        }
        Ok(())
    };
    let from_basis = match &v.basis {
        Some(b) => {
            check_width(b)?;
            Some(height_of_rows(b)?)
        }
        None => None,
    };
    let from_kernel = match &v.kernel {
        Some(k) => {
            check_width(k)?;
            let rk = linalg::rank(k);
            if rk != k.len() {
                return Err(Error::RankDeficient { rank: rk, expected: k.len() });
            }
            Some(if rk == n { HeightReport::trivial() } else { height_of_rows(k)? })
        }
        None => None,
    };
    match (from_basis, from_kernel) {
        (Some(hb), Some(hk)) => {
            let b = v.basis.as_ref().unwrap();
            let k = v.kernel.as_ref().unwrap();
            let orthogonal = b.iter().all(|r| linalg::mat_vec(k, r).iter().all(Zero::is_zero));
            if !orthogonal || b.len() + k.len() != n {
                return Err(Error::InconsistentRep("representations define different subspaces".into()));
            }
            if hb.value != hk.value {
                return Err(Error::InconsistentRep(format!(
                    "basis height {} differs from kernel height {}",
                    rational::to_string(&hb.value),
                    rational::to_string(&hk.value)
                )));
            }
            Ok(hb)
        }
        (Some(h), None) | (None, Some(h)) => Ok(h),
        (None, None) => Ok(HeightReport::trivial()),
    }
}

/// `(H(∏P_i), ∏H(P_i), e^{−n}∏H(P_i) < H(∏P_i) < e^{n}∏H(P_i))` for a product of degree ≤ n.
pub fn height_poly_product_bounds(polys: &[RatPoly], n: usize) -> Result<(Rational, Rational, bool)> {
    let prod = polys.iter().fold(RatPoly::one(), |acc, p| &acc * p);
    if prod.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if prod.deg() > n {
        return Err(Error::DegreeOverflow { degree: prod.deg(), cap: n });
    }
    let h = height_poly(&prod)?;
    let mut ph = Rational::one();
    for p in polys {
        ph *= height_poly(p)?;
    }
    let mut bits = 64;
    let flag = loop {
        let up = e_pow(n as i64, bits).scale(&ph);
        let down = e_pow(-(n as i64), bits).scale(&ph);
        let lower = Inequality::lt("e^-n prod H < H", down, Interval::point(h.clone()));
        let upper = Inequality::lt("H < e^n prod H", Interval::point(h.clone()), up);
        if lower.holds() && upper.holds() {
            break true;
        }
        if lower.verdict != Verdict::Undecided && upper.verdict != Verdict::Undecided {
            break false;
        }
        if bits >= 1024 {
            break false;
        }
        bits *= 2;
    };
    Ok((h, ph, flag))
}

/// Mahler measure enclosure and the comparison `M(P) ≤ (n+1)^{1/2}‖P‖_∞`.
#[derive(Clone, Debug, Serialize)]
pub struct MahlerReport {
    pub measure: Interval,
    pub bound: Inequality,
}

/// `M(P) = |a_n| ∏ max(1, |α_i|)` from a full list of roots (with multiplicity).
pub fn mahler_measure_bound(p: &RatPoly, roots: &[RootBall], bits: u64) -> Result<MahlerReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if roots.len() != p.deg() {
        return Err(Error::RootsIncomplete);
    }
    let one = Interval::int(1);
    let mut m = Interval::point(p.leading().abs());
    for r in roots {
        m = &m * &r.modulus(bits).max(&one);
    }
    let m = m.round_out(bits);
    let (slo, shi) = sqrt_bounds(&Rational::from_integer(BigInt::from(p.deg() + 1)), bits);
    let norm = p.norm_inf();
    let rhs = Interval::new(slo * &norm, shi * &norm);
    let bound = Inequality::le("M(P) <= sqrt(n+1) |P|", m.clone(), rhs);
    Ok(MahlerReport { measure: m, bound })
}

/// All complex roots of `p` with multiplicity, each as a certified ball.
pub fn roots_with_multiplicity(p: &RatPoly, cap: u64) -> Result<Vec<RootBall>> {
    let mut out = Vec::new();
    for (s, m) in p.squarefree_decomposition() {
        let c = certified_roots(&s, cap)?;
        for b in c.balls {
            out.extend(std::iter::repeat_n(b, m));
        }
    }
    Ok(out)
}

/// [`mahler_measure_bound`] with roots computed internally.
pub fn mahler_measure(p: &RatPoly, cap: u64) -> Result<MahlerReport> {
    let roots = roots_with_multiplicity(p, cap)?;
    mahler_measure_bound(p, &roots, 96)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn vector_examples() {
        assert_eq!(height_vector(&ints(&[4, 6])).unwrap().value, int(3));
        assert_eq!(height_vector(&ints(&[1, 0, 0])).unwrap().value, int(1));
        let h = height_vector(&[rat(1, 2), rat(1, 3)]).unwrap();
        assert_eq!(h.value, int(3));
        assert_eq!(h.product(), h.value);
        assert_eq!(h.per_place_norms[&Place::Infinite], rat(1, 2));
        assert_eq!(h.per_place_norms[&Place::finite(2u32).unwrap()], int(2));
        assert_eq!(h.per_place_norms[&Place::finite(3u32).unwrap()], int(3));
        assert_eq!(height_vector(&ints(&[0, 0])), Err(Error::ZeroVector));
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(json, r#"{"value":"3/1","per_place_norms":{"inf":"1/2","2":"2/1","3":"3/1"}}"#);
    }

    #[test]
    fn matrix_examples() {
        let m = linalg::from_ints(&[&[1, 0, 1], &[0, 1, 0]]);
        assert_eq!(plucker(&m).unwrap(), ints(&[1, 0, -1]));
        assert_eq!(height_matrix(&m).unwrap().value, int(1));
        let m = linalg::from_ints(&[&[1, 2, 0], &[0, 1, 2]]);
        assert_eq!(plucker(&m).unwrap(), ints(&[1, 2, 4]));
        assert_eq!(height_matrix(&m).unwrap().value, int(4));
        assert_eq!(height_matrix(&linalg::from_ints(&[&[2, 0], &[0, 2]])).unwrap().value, int(1));
        assert!(matches!(
            height_matrix(&linalg::from_ints(&[&[1, 2], &[2, 4]])),
            Err(Error::RankDeficient { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn subspace_examples() {
        let v = SubspaceRep {
            ambient: 3,
            basis: Some(linalg::from_ints(&[&[1, 0, 1], &[0, 1, 0]])),
            kernel: Some(linalg::from_ints(&[&[1, 0, -1]])),
        };
        assert_eq!(height_subspace(&v).unwrap().value, int(1));
        let v = SubspaceRep {
            ambient: 2,
            basis: Some(linalg::from_ints(&[&[1, 2]])),
            kernel: Some(linalg::from_ints(&[&[2, -1]])),
        };
        assert_eq!(height_subspace(&v).unwrap().value, int(2));
        let bad = SubspaceRep {
            ambient: 2,
            basis: Some(linalg::from_ints(&[&[1, 2]])),
            kernel: Some(linalg::from_ints(&[&[1, -1]])),
        };
        assert!(matches!(height_subspace(&bad), Err(Error::InconsistentRep(_))));
        let zero = SubspaceRep { ambient: 3, basis: Some(Vec::new()), kernel: None }.with_kernel();
        assert_eq!(height_subspace(&zero).unwrap().value, int(1));
    }

    #[test]
    fn product_bounds_examples() {
        let p = |c: &[i64]| RatPoly::from_ints(c);
        let (h, ph, ok) = height_poly_product_bounds(&[p(&[-1, 1]), p(&[1, 1])], 2).unwrap();
        assert_eq!((h, ph, ok), (int(1), int(1), true));
        let (h, ph, ok) = height_poly_product_bounds(&[p(&[1, 2]), p(&[1, 2])], 2).unwrap();
        assert_eq!((h, ph, ok), (int(4), int(4), true));
        let x = p(&[0, 1]);
        let (h, ph, ok) = height_poly_product_bounds(&[x.clone(), x.clone(), x], 3).unwrap();
        assert_eq!((h, ph, ok), (int(1), int(1), true));
        assert!(matches!(
            height_poly_product_bounds(&[p(&[1, 1]), p(&[1, 1])], 1),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn mahler_examples() {
        let r = mahler_measure(&RatPoly::from_ints(&[-2, 0, 1]), 256).unwrap();
        assert!(r.measure.contains(&int(2)) && r.measure.width() < rat(1, 1 << 20));
        assert!(r.bound.holds());
        // 2·max(1, 1/2)
        let r = mahler_measure(&RatPoly::from_ints(&[-1, 2]), 256).unwrap();
        assert!(r.measure.contains(&int(2)));
        let r = mahler_measure(&RatPoly::from_ints(&[1, 0, 1]), 256).unwrap();
        assert!(r.measure.contains(&int(1)) && r.bound.holds());
        let r = mahler_measure(&RatPoly::from_ints(&[1, -2, 1]), 256).unwrap();
        assert!(r.measure.contains(&int(1)));
        assert_eq!(
            mahler_measure_bound(&RatPoly::from_ints(&[1, 0, 1]), &[], 64).unwrap_err(),
            Error::RootsIncomplete
        );
    }
}
