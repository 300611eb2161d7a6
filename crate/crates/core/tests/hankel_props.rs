use proptest::prelude::*;

use dioph_core::exactnum::linalg;
use dioph_core::exactnum::rational::{int, rat};
use dioph_core::exactnum::real::RealNumber;
use dioph_core::exactnum::{RatPoly, Rational};
use dioph_core::hankel::{self, bilinear_g};

fn poly(max_deg: usize, h: i64) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1).prop_map(|c| RatPoly::from_ints(&c))
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(a, b)| rat(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pairing_symmetry_and_invariance(n in 1usize..=5, p in poly(5, 20), q in poly(5, 20), a in small_rat()) {
        prop_assume!(p.is_zero() || p.deg() <= n);
        prop_assume!(q.is_zero() || q.deg() <= n);
        let g = bilinear_g(&p, &q, n, &Rational::from_integer(0.into()));
        let sign = if n % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(&g, &(bilinear_g(&q, &p, n, &Rational::from_integer(0.into())) * sign));
        prop_assert_eq!(g, bilinear_g(&p, &q, n, &a));
    }

    #[test]
    fn state_structure(n in 1usize..=5, q in poly(5, 15), xi in small_rat()) {
        prop_assume!(!q.is_zero() && q.deg() <= n);
        let st = hankel::build_state(&q, &RealNumber::Rational(xi), n).unwrap();
        for l in 0..=n {
            let m = st.m(l);
            let rk = linalg::rank(&m);
            prop_assert_eq!(rk, linalg::rank(&st.n_exact(l).unwrap()));
            prop_assert_eq!(linalg::transpose(&m), st.m(n - l));
            prop_assert_eq!(hankel::kernel_V(&st, l).unwrap().dim + rk, n - l + 1);
        }
    }

    #[test]
    fn rank_drop_kernel(n in 2usize..=5, a in -4i64..=4, b in 1i64..=3, m in 1usize..=4, r in poly(3, 4)) {
        prop_assume!(m <= n && !r.is_zero() && r.deg() + m <= n);
        let xi = rat(a, b);
        let q = &RatPoly::from_ints(&[-a, b]).pow(m) * &r;
        let st = hankel::build_state(&q, &RealNumber::Rational(xi), n).unwrap();
        if let Ok(d) = hankel::rank_drop_extract(&st, n / 2) {
            let h = d.h;
            let v = hankel::kernel_V(&st, h - 1).unwrap();
            let cols = n - h + 2;
            let pe: Vec<Vec<Rational>> = (0..n + 2 - 2 * h).map(|i| (0..cols).map(|j| d.p.shift_up(i).coeff(j)).collect()).collect();
            prop_assert!(linalg::same_row_space(&v.matrix(), &pe));
        }
    }
}
