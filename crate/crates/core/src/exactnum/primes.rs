//! Primality and integer factorization at the sizes heights produce.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first twelve prime bases; exact below 3.3·10^24.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut k = n + 1;
    while !is_prime_u64(k) {
        k += 1;
    }
    k
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = match n.to_u64() {
        Some(v) => BigUint::from(rho_u64(v)),
        None => rho_big(&n),
    };
    let q = &n / &d;
    split(d, out);
    split(q, out);
}

/// Prime factorization of a positive integer; `factor(0)` and `factor(1)` are empty.
pub fn factor(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return out;
    }
    let mut m = n.clone();
    if let Some(mut v) = m.to_u64() {
        let mut p = 2u64;
        while p < 1000 && p * p <= v {
            while v % p == 0 {
                v /= p;
                *out.entry(BigUint::from(p)).or_insert(0) += 1;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        m = BigUint::from(v);
    } else {
        for p in (3u32..1000).step_by(2).chain([2]) {
            while (&m % p).is_zero() {
                m /= p;
                *out.entry(BigUint::from(p)).or_insert(0) += 1;
            }
        }
    }
    split(m, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let ps: Vec<u64> = (0..50).filter(|&k| is_prime_u64(k)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
        let m61 = (BigUint::one() << 61u32) - 1u32;
        assert!(is_prime(&m61));
        assert!(!is_prime(&(&m61 * &m61)));
    }

    #[test]
    fn factorization_reconstructs() {
        for n in [1u64, 2, 12, 360, 1_000_003 * 999_983, 2u64.pow(40) * 3] {
            let f = factor(&BigUint::from(n));
            let back = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(back, BigUint::from(n));
            assert!(f.keys().all(is_prime));
        }
        let big = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * BigUint::from(1_000_003u64);
        let f = factor(&big);
        assert_eq!(f.len(), 3);
    }
}
