use num_traits::{Signed, Zero};
use proptest::prelude::*;

use dioph_core::exactnum::factor::is_irreducible;
use dioph_core::exactnum::linalg;
use dioph_core::exactnum::rational::{int, rat};
use dioph_core::exactnum::{RatPoly, Rational};
use dioph_core::heights::{self, SubspaceRep};

fn int_matrix(rows: usize, cols: usize, h: i64) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((-h..=h).prop_map(int), cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn basis_invariance(m in int_matrix(2, 4, 30), u in int_matrix(2, 2, 5)) {
        prop_assume!(linalg::rank(&m) == 2 && !linalg::det(&u).is_zero());
        let um = linalg::mat_mul(&u, &m);
        prop_assert_eq!(heights::height_matrix(&um).unwrap().value, heights::height_matrix(&m).unwrap().value);
    }

    #[test]
    fn duality(m in int_matrix(3, 5, 50)) {
        prop_assume!(linalg::rank(&m) == 3);
        let k = linalg::nullspace(&m, 5);
        prop_assert_eq!(heights::height_matrix(&m).unwrap().value, heights::height_matrix(&k).unwrap().value);
        let rep = SubspaceRep { ambient: 5, basis: Some(m), kernel: Some(k) };
        prop_assert!(heights::height_subspace(&rep).is_ok());
    }

    #[test]
    fn vector_scaling(a in prop::collection::vec(-1000i64..=1000, 1..6), p in -50i64..=50, q in 1i64..=50) {
        let v: Vec<Rational> = a.iter().map(|&x| int(x)).collect();
        prop_assume!(p != 0 && v.iter().any(|x| !x.is_zero()));
        let lam = rat(p, q);
        let w: Vec<Rational> = v.iter().map(|x| x * &lam).collect();
        prop_assert_eq!(heights::height_vector(&w).unwrap().value, heights::height_vector(&v).unwrap().value);
    }

    #[test]
    fn naive_height_of_irreducible(c in prop::collection::vec(-30i64..=30, 2..5)) {
        let p = RatPoly::from_ints(&c);
        prop_assume!(p.deg() >= 1 && is_irreducible(&p, 8).unwrap());
        let prim = p.primitive();
        let naive = prim.coeffs().iter().map(|x| x.abs()).max().unwrap();
        prop_assert_eq!(heights::height_poly(&p).unwrap(), naive);
    }
}
