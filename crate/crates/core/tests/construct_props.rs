use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use dioph_core::construct::{self, least_prime_not_dividing, witness_matrix};
use dioph_core::error::Error;
use dioph_core::exactnum::factor::{factor_over_rationals, is_irreducible};
use dioph_core::exactnum::linalg;
use dioph_core::exactnum::rational::{self, int, rat};
use dioph_core::exactnum::real::{LiouvilleSeries, RealNumber};
use dioph_core::exactnum::roots::count_roots_in_disk;
use dioph_core::exactnum::RatPoly;
use dioph_core::heights::height_poly;

fn witnesses(n: usize) -> impl Strategy<Value = Vec<RatPoly>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n + 1), n + 1)
        .prop_map(|rows| rows.iter().map(|r| RatPoly::from_ints(r)).collect::<Vec<_>>())
        .prop_filter("independent", |w| !linalg::det_int(&witness_matrix(w).unwrap()).eq(&BigInt::from(0)))
}

fn lift_case() -> impl Strategy<Value = (Vec<RatPoly>, i64, i64, usize, i64)> {
    (1usize..=3).prop_flat_map(|n| (witnesses(n), -9i64..=9, 1i64..=5, 1..=n, 2i64..=4))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lift_invariants((w, a, b, t, e) in lift_case()) {
        let n = w.len() - 1;
        let xi = RealNumber::Rational(rat(a, b));
        let delta = rat(1, 10i64.pow(e as u32 - 1));
        let y = int(10i64.pow(e as u32));
        let q = least_prime_not_dividing(&linalg::det_int(&witness_matrix(&w).unwrap()));
        match construct::eisenstein_lift(&w, &xi, &delta, &y, &int(1), t, q) {
            Ok(rep) => {
                let p = &rep.alg.min_poly;
                let c = p.int_coeffs().unwrap();
                let qb = BigInt::from(q);
                prop_assert_eq!(p.deg(), n + 1);
                prop_assert!(p.leading().is_one());
                prop_assert!(c[..=n].iter().all(|x| (x % &qb) == BigInt::from(0)));
                prop_assert!((&c[0] % (&qb * &qb)) != BigInt::from(0));
                prop_assert_eq!(factor_over_rationals(p, 8).unwrap().factors.len(), 1);
                prop_assert!(count_roots_in_disk(p, &xi, &delta, 256).unwrap() >= t);
                prop_assert_eq!(rep.alg.roots.len(), n + 1);
                prop_assert!(height_poly(p).unwrap() <= &rep.constant * &y);
            }
            Err(Error::RootClusterFailed(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn discriminant_bound(c in prop::collection::vec(-12i64..=12, 3..=5), a in -6i64..=6, b in 1i64..=6, t in 2usize..=4) {
        let p = RatPoly::from_ints(&c);
        prop_assume!(p.deg() >= t && is_irreducible(&p, 8).unwrap());
        let r = construct::prop_10_1_check(&p, &RealNumber::Rational(rat(a, b)), t).unwrap();
        prop_assert!(r.check.holds());
    }

    #[test]
    fn liouville_exponents(t in 1u64..=3, n in 1u64..=3, j in 1u64..=3) {
        prop_assume!(j <= t);
        let s = LiouvilleSeries::new(j, t, n).unwrap();
        let a: Vec<BigInt> = (1..=8).map(|l| s.exponent(l)).collect();
        prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
        for terms in 1..=3u64 {
            let r = s.partial_sum(terms);
            let last = s.exponent(s.index(terms - 1)).to_i64().unwrap();
            let hr = r.numer().clone().max(r.denom().clone());
            prop_assert_eq!(rational::from_bigint(hr), rational::powi(&int(2), last));
        }
    }
}
