use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use wgalaxy::enlargement::Enlargement;
use wgalaxy::ordinal::ExpRank;
use wgalaxy::wdistance::Metric;
use wgalaxy::wgraph::catalog;
use wgalaxy::{Ordinal, Poly, RatPoly};

fn exp() -> impl Strategy<Value = ExpRank> {
    prop_oneof![4 => (0u64..5).prop_map(ExpRank::Finite), 1 => Just(ExpRank::Omega)]
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec((exp(), 0u32..9), 0..5)
        .prop_map(|t| Ordinal::from_terms(t.into_iter().map(|(e, c)| (e, BigUint::from(c)))))
}

proptest! {
    #[test]
    fn natural_sum_is_a_commutative_monoid(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.nat_sum(&b), b.nat_sum(&a));
        prop_assert_eq!(a.nat_sum(&b).nat_sum(&c), a.nat_sum(&b.nat_sum(&c)));
        prop_assert_eq!(a.nat_sum(&Ordinal::zero()), a.clone());
    }

    #[test]
    fn order_is_total_and_compatible_with_sums(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a.nat_sum(&c).cmp(&b.nat_sum(&c)), a.cmp(&b));
        prop_assert!(a.nat_sum(&b) >= a);
    }

    #[test]
    fn difference_undoes_sum(a in ordinal(), b in ordinal()) {
        prop_assert_eq!(a.nat_sum(&b).nat_diff(&b), Some(a.clone()));
        if let Some(d) = a.nat_diff(&b) {
            prop_assert_eq!(b.nat_sum(&d), a.clone());
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn display_parses_back(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }

    #[test]
    fn scaled_powers_bound_their_coefficient(e in 0u64..5, mu in 0u32..9, a in ordinal()) {
        let e = ExpRank::Finite(e);
        let bound = Ordinal::omega_pow_scaled(e, BigUint::from(mu));
        prop_assert_eq!(a.le_omega_pow_scaled(e, &BigUint::from(mu)), a <= bound);
    }

    #[test]
    fn fitting_recovers_integer_polynomials(cs in prop::collection::vec(-20i64..20, 0..4), start in 0u64..5) {
        let p = Poly::new(cs.clone());
        let values: Vec<BigRational> = (start..start + 8)
            .map(|n| BigRational::from_integer(p.eval(&(n as i64)).into()))
            .collect();
        let fit = RatPoly::fit_exact(start, &values, 3, 2).expect("degree at most 3");
        for n in start..start + 8 {
            prop_assert_eq!(fit.eval_u64(n), BigRational::from_integer(p.eval(&(n as i64)).into()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladder_distances_form_a_metric(i in 0usize..10_000, j in 0usize..10_000, k in 0usize..10_000) {
        let g = catalog::by_name("ladder1").unwrap();
        let m = Metric::new(&g);
        let slice = m.prepared(5, None).unwrap().slice.clone();
        let n = slice.len();
        let (x, y, z) = (slice.node(i % n), slice.node(j % n), slice.node(k % n));
        let d = |a, b| m.dist_at(a, b, 5, None).unwrap();
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert!(d(x, z) <= d(x, y).nat_sum(&d(y, z)));
        let same = slice.maximal_of(i % n) == slice.maximal_of(j % n);
        prop_assert_eq!(d(x, y).is_zero(), same);
    }

    #[test]
    fn hyperdistance_is_symmetric(a in 0i64..3, b in 1i64..3, c in 0i64..3) {
        let g = catalog::by_name("ladder1").unwrap();
        let enl = Enlargement::new(&g);
        let x = enl.parse(&format!("b1[{b}n+{a}]")).unwrap();
        let y = enl.parse(&format!("r[n,{c}]")).unwrap();
        let xy = enl.hyperdist(&x, &y, 5).unwrap();
        let yx = enl.hyperdist(&y, &x, 5).unwrap();
        prop_assert_eq!(&xy.samples, &yx.samples);
    }
}
