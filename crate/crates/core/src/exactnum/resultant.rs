//! Sylvester resultants and discriminants.

use num_traits::{One, Zero};

use super::linalg;
use super::poly::RatPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Sylvester matrix of `P` (degree m) and `Q` (degree n), size `(m+n)×(m+n)`.
pub fn sylvester_matrix(p: &RatPoly, q: &RatPoly) -> linalg::Matrix {
    let (m, n) = (p.deg(), q.deg());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, shifts, d) in [(p, n, m), (q, m, n)] {
        for s in 0..shifts {
            let mut row = vec![Rational::zero(); size];
            for i in 0..=d {
                // Coefficients run from the leading one downwards.
                row[s + i] = poly.coeff(d - i);
            }
            rows.push(row);
        }
    }
    rows
}

/// `Res(P, Q)` with respect to the actual degrees.
pub fn resultant(p: &RatPoly, q: &RatPoly) -> Result<Rational> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(linalg::det(&sylvester_matrix(p, q)))
}

/// `Disc(P) = (-1)^{n(n-1)/2} Res(P, P') / a_n`.
pub fn discriminant(p: &RatPoly) -> Result<Rational> {
    let n = p.deg();
    if p.is_zero() || n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    let r = resultant(p, &p.derivative())? / p.leading();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// `(-1)^{deg P · deg Q}` swap relation, exposed for property checks.
pub fn swap_sign(p: &RatPoly, q: &RatPoly) -> Rational {
    if (p.deg() * q.deg()) % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Parses `"a0,a1,…"` and computes the resultant; convenience for callers holding integer lists.
pub fn resultant_ints(p: &[i64], q: &[i64]) -> Result<Rational> {
    resultant(&RatPoly::from_ints(p), &RatPoly::from_ints(q))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::int;

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant_ints(&[-1, 1], &[1, 1]).unwrap(), int(2));
        assert_eq!(resultant_ints(&[1, 0, 1], &[-2, 1]).unwrap(), int(5));
        assert_eq!(resultant_ints(&[-1, 0, 1], &[-1, 1]).unwrap(), int(0));
        assert_eq!(resultant_ints(&[3], &[1, 2, 1]).unwrap(), int(9));
        assert!(resultant_ints(&[], &[1]).is_err());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&RatPoly::from_ints(&[-2, 0, 1])).unwrap(), int(8));
        assert_eq!(discriminant(&RatPoly::from_ints(&[1, 1, 1])).unwrap(), int(-3));
        assert_eq!(discriminant(&RatPoly::from_ints(&[-2, 0, 2])).unwrap(), int(16));
        // b²c² − 4c³ − 4b³d − 27d² + 18bcd for T³ + bT² + cT + d
        assert_eq!(discriminant(&RatPoly::from_ints(&[-2, 0, 0, 1])).unwrap(), int(-108));
        assert!(matches!(discriminant(&RatPoly::from_ints(&[1, 1])), Err(Error::DegreeTooSmall(1))));
    }
}
