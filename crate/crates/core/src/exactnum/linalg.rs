//! Exact dense linear algebra over ℚ and ℤ.
//!
//! Matrices are plain row-major `Vec<Vec<_>>`. Rank and determinant use
//! fraction-free (Bareiss) elimination on integer rows; kernels come from
//! rational reduced row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn from_ints(rows: &[&[i64]]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect()
}

pub fn to_rational(m: &IntMatrix) -> Matrix {
    m.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect()
}

fn ncols<T>(m: &[Vec<T>]) -> usize {
    m.first().map_or(0, |r| r.len())
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let c = ncols(m);
    (0..c).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.len(), b.len(), ncols(b));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Rational::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// Scales `v` by the lcm of its denominators.
pub fn clear_denominators(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = v.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    (ints, l)
}

/// Primitive integer vector on the same line as `v`, with first nonzero entry positive.
pub fn primitive_int_vec(v: &[Rational]) -> Vec<BigInt> {
    let (ints, _) = clear_denominators(v);
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    if ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    ints.iter().map(|c| c / &g).collect()
}

/// Bareiss elimination in place; returns the rank and the sign flips from row swaps.
fn bareiss(m: &mut IntMatrix) -> (usize, bool) {
    let rows = m.len();
    let cols = ncols(m);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut flipped = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            flipped = !flipped;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    (r, flipped)
}

pub fn rank_int(m: &IntMatrix) -> usize {
    bareiss(&mut m.clone()).0
}

pub fn rank(m: &Matrix) -> usize {
    let mut im: IntMatrix = m.iter().map(|r| clear_denominators(r).0).collect();
    bareiss(&mut im).0
}

/// Determinant of a square integer matrix.
pub fn det_int(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let (r, flipped) = bareiss(&mut a);
    if r < n {
        return BigInt::zero();
    }
    let d = a[n - 1][n - 1].clone();
    if flipped {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix.
pub fn det(m: &Matrix) -> Rational {
    let mut scale = BigInt::one();
    let im: IntMatrix = m
        .iter()
        .map(|r| {
            let (v, l) = clear_denominators(r);
            scale *= l;
            v
        })
        .collect();
    Rational::new(det_int(&im), scale)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = ncols(&a);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{x : M x = 0}` for a matrix with `cols` columns, one vector per free column.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Same as [`nullspace`] with each vector scaled to a primitive integer vector.
pub fn nullspace_int(m: &Matrix, cols: usize) -> Vec<Vec<BigInt>> {
    nullspace(m, cols).iter().map(|v| primitive_int_vec(v)).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Maximal minors of an `m×n` matrix (`m ≤ n`), columns taken in lexicographic subset order.
pub fn maximal_minors(m: &Matrix) -> Vec<Rational> {
    let k = m.len();
    column_subsets(ncols(m), k)
        .iter()
        .map(|s| det(&m.iter().map(|r| s.iter().map(|&j| r[j].clone()).collect()).collect()))
        .collect()
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let aug: Matrix = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// True iff the row spaces of `a` and `b` coincide.
pub fn same_row_space(a: &Matrix, b: &Matrix) -> bool {
    let ra = rank(a);
    if ra != rank(b) {
        return false;
    }
    let stacked: Matrix = a.iter().chain(b.iter()).cloned().collect();
    rank(&stacked) == ra
}

/// Row Hermite normal form `H = U·A` with `U` unimodular.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero rows sit at
/// the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = a.len();
    let cols = ncols(a);
    let mut h = a.clone();
    let mut u: IntMatrix = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid down the column until only row r has a nonzero entry.
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()))
            else {
                break;
            };
            h.swap(p, r);
            u.swap(p, r);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_row_multiple(&mut h, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn sub_row_multiple(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    let s = m[src].clone();
    for (x, y) in m[target].iter_mut().zip(&s) {
        *x -= q * y;
    }
}

pub fn int_mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (n, k, m) = (a.len(), b.len(), ncols(b));
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(BigInt::zero(), |acc, l| acc + &a[i][l] * &b[l][j])).collect())
        .collect()
}

/// `max_i Σ_j |a_ij|`.
pub fn max_row_sum(a: &IntMatrix) -> BigInt {
    a.iter().map(|r| r.iter().map(|x| x.abs()).sum()).max().unwrap_or_else(BigInt::zero)
}

pub fn is_identity(a: &IntMatrix) -> bool {
    a.iter().enumerate().all(|(i, r)| {
        r.len() == a.len() && r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn rank_and_det() {
        let m = from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(det(&m), int(0));
        let m = vec![vec![rat(1, 2), int(1)], vec![int(3), int(4)]];
        assert_eq!(det(&m), int(-1));
        assert_eq!(det_int(&im(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_int(&im(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])), BigInt::from(18));
    }

    #[test]
    fn kernel() {
        let m = from_ints(&[&[1, 0, -1], &[0, 1, 0]]);
        let k = nullspace_int(&m, 3);
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]]);
        assert_eq!(nullspace(&Vec::new(), 2).len(), 2);
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            column_subsets(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(column_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(
            maximal_minors(&from_ints(&[&[1, 2, 0], &[0, 1, 2]])),
            vec![int(1), int(2), int(4)]
        );
    }

    #[test]
    fn hnf_transform() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(int_mat_mul(&u, &a), h);
        assert!(det_int(&u).abs().is_one());
        assert_eq!(det_int(&h).abs(), det_int(&a).abs());
        for i in 0..3 {
            assert!(h[i][i].is_positive());
            for j in 0..i {
                assert!(h[i][j].is_zero());
                assert!(!h[j][i].is_negative() && h[j][i] < h[i][i]);
            }
        }
        let (h, _) = hermite_normal_form(&im(&[&[2, 3], &[1, 2]]));
        assert!(is_identity(&h));
    }

    #[test]
    fn solve_system() {
        let a = from_ints(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }
}
