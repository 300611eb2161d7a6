use proptest::prelude::*;

use dioph_core::error::Error;
use dioph_core::exactnum::rational::rat;
use dioph_core::exactnum::real::RealNumber;
use dioph_core::exactnum::RatPoly;
use dioph_core::gelfond::{self, FactorChainState};

fn poly(max_deg: usize, h: i64) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1)
        .prop_map(|c| RatPoly::from_ints(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn resultant_gap_holds(p in poly(4, 50), q in poly(4, 50), a in -24i64..=24, b in 1i64..=12) {
        match gelfond::resultant_gap_check(&p, &q, &RealNumber::Rational(rat(a, b))) {
            Ok(ineq) => prop_assert!(ineq.holds()),
            Err(Error::NotCoprime) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn product_space_scaling(p in poly(3, 9), k in 1usize..=3, c in 1i64..=7, d in 1i64..=7) {
        prop_assume!(p.deg() >= 1);
        let a = gelfond::product_space_height_check(&p, k).unwrap();
        let b = gelfond::product_space_height_check(&p.scale(&rat(-c, d)), k).unwrap();
        prop_assert_eq!(a.h_product, b.h_product);
        prop_assert_eq!(a.h_power, b.h_power);
        prop_assert_eq!(a.ratio, b.ratio);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 30, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn chain_is_deterministic(stream in prop::collection::vec(poly(2, 9), 1..5)) {
        let run = || {
            let mut st = FactorChainState::new(RealNumber::Rational(rat(1, 3)), 2);
            for (i, p) in stream.iter().enumerate() {
                if let Ok(next) = gelfond::factor_chain_step(&st, &rat(i as i64 + 2, 1), p) {
                    st = next;
                }
            }
            serde_json::to_string(&st).unwrap()
        };
        prop_assert_eq!(run(), run());
    }
}
