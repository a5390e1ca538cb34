mod common;

use common::*;
use hasse_core::linalg::IntMatrix;
use hasse_core::positivity::{hasse_divisor_coeffs, zeta_image};
use hasse_core::root_datum::{
    build_group, frobenius_is_compatible, GroupSpec, Isogeny, NodeSet, RationalCharacter, Series,
};
use hasse_core::zip::{classify_cocharacter, pairings_bounded, CocharClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-12i64..=12, r * c)
            .prop_map(move |xs| IntMatrix::from_vec(r, c, xs.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn square(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(-9i64..=9, n * n)
            .prop_map(move |xs| IntMatrix::from_vec(n, n, xs.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn builder() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (1usize..=5).prop_map(|n| GroupSpec::Gl { n }),
        (1usize..=4).prop_map(|n| GroupSpec::Unitary { n }),
        (1usize..=3).prop_map(|g| GroupSpec::Gsp { g }),
        (1usize..=4, any::<bool>()).prop_map(|(r, sc)| simple(
            Series::A,
            r,
            if sc { Isogeny::SimplyConnected } else { Isogeny::Adjoint }
        )),
        Just(simple(Series::B, 3, Isogeny::SimplyConnected)),
        Just(simple(Series::C, 3, Isogeny::Adjoint)),
        Just(simple(Series::D, 4, Isogeny::SimplyConnected)),
        Just(simple(Series::G, 2, Isogeny::Adjoint)),
        (1usize..=3).prop_map(|r| weil(r, GroupSpec::Gl { n: 2 })),
        Just(GroupSpec::Product { factors: vec![GroupSpec::Unitary { n: 3 }, GroupSpec::Gl { n: 2 }] }),
    ]
}

fn prime_power() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(7), Just(8), Just(9)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn snf_reconstructs(m in matrix(5)) {
        let s = m.smith_normal_form();
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        for w in s.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for (i, d) in s.invariant_factors.iter().enumerate() {
            prop_assert!(d.is_positive());
            prop_assert_eq!(s.d.get(i, i), d);
        }
    }

    #[test]
    fn snf_transpose_invariant(m in matrix(5)) {
        prop_assert_eq!(m.smith_normal_form().invariant_factors, m.transpose().smith_normal_form().invariant_factors);
    }

    #[test]
    fn snf_product_is_abs_det(m in square(5)) {
        let det = m.determinant().unwrap();
        let s = m.smith_normal_form();
        if det.is_zero() {
            prop_assert!(s.rank() < m.rows());
        } else {
            let prod = s.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b);
            prop_assert_eq!(prod, det.abs());
        }
    }

    #[test]
    fn snf_matches_minors_oracle(m in matrix(4)) {
        prop_assert_eq!(m.smith_normal_form().invariant_factors, minors_oracle(&m));
    }

    #[test]
    fn determinant_matches_cofactors(m in square(5)) {
        let rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        prop_assert_eq!(m.determinant().unwrap(), laplace_det(&rows));
    }

    #[test]
    fn inverse_is_exact(m in square(5)) {
        match m.rational_inverse() {
            Ok(inv) => {
                let n = m.rows();
                prop_assert_eq!(&m.to_rational() * &inv, hasse_core::linalg::RatMatrix::identity(n));
                prop_assert_eq!(&inv * &m.to_rational(), hasse_core::linalg::RatMatrix::identity(n));
            }
            Err(_) => prop_assert!(m.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn frobenius_is_compatible_with_the_datum(spec in builder(), q in prime_power()) {
        let (rd, frob) = build_group(&spec, q).unwrap();
        prop_assert!(frobenius_is_compatible(&rd, &frob));
        for i in 0..rd.node_count() {
            for j in 0..rd.node_count() {
                let (pi, pj) = (frob.root_perm()[i], frob.root_perm()[j]);
                prop_assert_eq!(rd.cartan()[pi][pj], rd.cartan()[i][j]);
            }
        }
    }

    #[test]
    fn zip_datum_invariants(spec in builder(), q in prime_power(), mask in any::<u32>()) {
        let (rd, frob) = build_group(&spec, q).unwrap();
        let j: NodeSet = (0..rd.node_count()).filter(|i| mask & (1 << i) != 0).collect();
        let zd = datum(&spec, q, j.clone());
        prop_assert!(zd.j0.is_subset(&zd.j));
        prop_assert_eq!(frob.permute(&zd.j0), zd.j0.clone());
        prop_assert_eq!(zd.k.clone(), rd.opp_type(&frob.permute(&j)));
        prop_assert_eq!(zd.dim_e(), zd.dim_g());
        prop_assert_eq!(zd.pic_rank().m_p, rd.node_count() - j.len());
        let rep = zd.hasse_report_unchecked();
        prop_assert!(!rep.det_zeta.is_zero());
        let prod = rep.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b);
        prop_assert_eq!(&prod, &rep.s0_order);
        prop_assert!((&rep.s0_order % &rep.hasse_number).is_zero());
        for d in &rep.invariant_factors {
            prop_assert!((&rep.hasse_number % d).is_zero());
        }
        if frob.is_split() {
            prop_assert!(rep.invariant_factors.iter().all(|d| *d == BigInt::from(q - 1)));
        }
    }

    #[test]
    fn fundamental_weights_are_dual(spec in builder(), mask in any::<u32>()) {
        let (rd, _) = build_group(&spec, 2).unwrap();
        let j: NodeSet = (0..rd.node_count()).filter(|i| mask & (1 << i) != 0).collect();
        prop_assert_eq!(rd.opp_type(&rd.opp_type(&j)), j.clone());
        for (i, w) in rd.fundamental_weights(&j) {
            prop_assert!(!j.contains(&i));
            for k in 0..rd.node_count() {
                let want = if k == i { BigRational::one() } else { BigRational::zero() };
                prop_assert_eq!(rd.pair_coroot(k, &w), want);
            }
        }
    }

    #[test]
    fn divisor_coefficients_are_linear(
        n in 2usize..=4,
        q in prime_power(),
        a in -6i64..=6,
        b in -6i64..=6,
        xs in proptest::collection::vec(-9i64..=9, 4),
        ys in proptest::collection::vec(-9i64..=9, 4),
    ) {
        for spec in [GroupSpec::Gl { n }, GroupSpec::Unitary { n }] {
            let zd = datum(&spec, q, NodeSet::new());
            let lam = RationalCharacter::from_ints(&xs[..n]);
            let mu = RationalCharacter::from_ints(&ys[..n]);
            let (ra, rb) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
            let combo = lam.scale(&ra).add(&mu.scale(&rb));
            let c = hasse_divisor_coeffs(&zd, &combo).unwrap().borel_coefficients;
            let cl = hasse_divisor_coeffs(&zd, &lam).unwrap().borel_coefficients;
            let cm = hasse_divisor_coeffs(&zd, &mu).unwrap().borel_coefficients;
            for k in 0..c.len() {
                prop_assert_eq!(&c[k], &(&ra * &cl[k] + &rb * &cm[k]));
            }
            // zeta_T^{-1} o zeta_T collapses
            let image = zeta_image(&zd, &mu);
            let c = hasse_divisor_coeffs(&zd, &image).unwrap().borel_coefficients;
            for (k, ck) in c.iter().enumerate() {
                prop_assert_eq!(ck, &-zd.rd.pair_coroot(k, &mu));
            }
        }
    }

    #[test]
    fn minuscule_iff_pairings_bounded(spec in builder(), chi in proptest::collection::vec(-3i64..=3, 6)) {
        let (rd, _) = build_group(&spec, 2).unwrap();
        let chi = &chi[..rd.rank().min(6)];
        prop_assume!(chi.len() == rd.rank());
        let class = classify_cocharacter(&rd, chi);
        prop_assert_eq!(class == CocharClass::Minuscule, pairings_bounded(&rd, chi) && class != CocharClass::Central);
    }
}
