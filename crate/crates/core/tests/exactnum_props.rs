use num_traits::{One, Zero};
use proptest::prelude::*;

use dioph_core::exactnum::factor::{factor_over_rationals, is_irreducible};
use dioph_core::exactnum::rational::{self, rat};
use dioph_core::exactnum::real::LiouvilleSeries;
use dioph_core::exactnum::resultant::resultant;
use dioph_core::exactnum::sturm::{self, isolate_real_roots, SturmChain};
use dioph_core::exactnum::RatPoly;

fn poly(max_deg: usize, h: i64) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1)
        .prop_map(|c| RatPoly::from_ints(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_formula(a in -1_000_000i64..=1_000_000, b in 1i64..=1_000_000) {
        prop_assume!(a != 0);
        let x = rat(a, b);
        prop_assert!(x.denom() > &0.into());
        prop_assert!(rational::product_formula_check(&x).unwrap());
    }

    #[test]
    fn resultant_antisymmetry(p in poly(4, 9), q in poly(4, 9)) {
        let sign = if (p.deg() * q.deg()) % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
        prop_assert_eq!(resultant(&p, &q).unwrap(), resultant(&q, &p).unwrap() * sign);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(p in poly(3, 5), q in poly(3, 5), r in poly(2, 5)) {
        let (p, q) = (&p * &r, &q * &r);
        let common = p.gcd(&q).deg() > 0;
        prop_assert_eq!(resultant(&p, &q).unwrap().is_zero(), common);
    }

    #[test]
    fn factorization_product(a in poly(3, 6), b in poly(3, 6)) {
        let p = &a * &b;
        let f = factor_over_rationals(&p, 8).unwrap();
        prop_assert_eq!(f.product(), p);
        for (g, _) in &f.factors {
            prop_assert!(g.leading().is_one());
            prop_assert!(is_irreducible(g, 8).unwrap());
        }
    }

    #[test]
    fn isolation_matches_sturm(p in poly(6, 20)) {
        prop_assume!(p.deg() > 0);
        let b = sturm::root_bound(&p);
        let balls = isolate_real_roots(&p, None);
        prop_assert_eq!(balls.len(), SturmChain::new(&p).count_closed(&-b.clone(), &b));
    }

    #[test]
    fn liouville_tail_bound(t in 1u64..=3, n in 1u64..=3, j in 1u64..=3, terms in 0u64..=3) {
        prop_assume!(j <= t);
        let s = LiouvilleSeries::new(j, t, n).unwrap();
        let deep = s.partial_sum(terms + 3);
        let tail = &deep - s.partial_sum(terms);
        prop_assert!(tail >= rat(0, 1) && tail <= s.tail_bound(terms));
    }
}
