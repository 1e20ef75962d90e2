use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use cyclounits::curves::{cross_ratio_q, legendre_from_field, legendre_orbit};
use cyclounits::cycfield::FieldElem;
use cyclounits::unitlattice::{normalize, word_to_field, FormalProduct, DEFAULT_MASS_LIMIT};

const FIELDS: [(u64, u32); 4] = [(2, 3), (3, 2), (5, 1), (7, 1)];

fn field() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(FIELDS.to_vec())
}

fn elem(ell: u64, level: u32, coeffs: &[i64]) -> FieldElem {
    let m = ell.pow(level) as usize;
    let poly: Vec<BigRational> = coeffs
        .iter()
        .cycle()
        .take(m)
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    FieldElem::reduce(ell, level, &poly).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..8)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #[test]
    fn valuation_is_additive((ell, n) in field(), a in coeffs(), b in coeffs()) {
        let x = elem(ell, n, &a);
        let y = elem(ell, n, &b);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let vxy = (&x * &y).valuation().unwrap();
        prop_assert_eq!(vxy, x.valuation().unwrap() + y.valuation().unwrap());
    }

    #[test]
    fn galois_action_composes((ell, n) in field(), a in coeffs(), s in 1i64..200, t in 1i64..200) {
        prop_assume!(s % ell as i64 != 0 && t % ell as i64 != 0);
        let x = elem(ell, n, &a);
        let lhs = x.galois(t).unwrap().galois(s).unwrap();
        prop_assert_eq!(lhs, x.galois(s * t).unwrap());
    }

    #[test]
    fn inverse_is_inverse((ell, n) in field(), a in coeffs()) {
        let x = elem(ell, n, &a);
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn normal_form_evaluates_like_the_product(
        (ell, n) in field(),
        factors in prop::collection::vec((1i64..60, -2i64..=2), 0..5),
        zeta_exp in -10i64..10,
        negate in any::<bool>(),
    ) {
        let m = ell.pow(n) as i64;
        let factors: Vec<(i64, i64)> = factors.into_iter().filter(|(a, _)| a % m != 0).collect();
        let mut p = FormalProduct::new(ell, n, factors);
        p.zeta_exp = zeta_exp;
        if negate {
            p = p.neg();
        }
        let w = normalize(&p).unwrap();
        prop_assert_eq!(word_to_field(&w, DEFAULT_MASS_LIMIT).unwrap(), p.evaluate().unwrap());
    }

    #[test]
    fn legendre_orbit_is_closed((ell, n) in field(), a in coeffs()) {
        let lambda = elem(ell, n, &a);
        prop_assume!(!lambda.is_zero() && !lambda.is_one());
        let orbit = legendre_orbit(&lambda).unwrap();
        let mut distinct: Vec<FieldElem> = Vec::new();
        for x in &orbit {
            if !distinct.contains(x) {
                distinct.push(x.clone());
            }
        }
        prop_assert!([1, 2, 3, 6].contains(&distinct.len()), "orbit size {}", distinct.len());
        for x in &distinct {
            for y in legendre_orbit(x).unwrap() {
                prop_assert!(distinct.contains(&y));
            }
        }
    }

    #[test]
    fn j_invariant_identity((ell, n) in field(), a in coeffs()) {
        let lambda = elem(ell, n, &a);
        prop_assume!(!lambda.is_zero() && !lambda.is_one());
        let e = legendre_from_field(&lambda).unwrap();
        let one = FieldElem::one(ell, n).unwrap();
        let om = &one - &lambda;
        let lhs = &(&e.j_inv * &(&lambda * &lambda)) * &(&om * &om);
        let t = &(&lambda * &lambda) - &(&lambda - &one);
        let rhs = (&(&t * &t) * &t).scale(&q(256, 1));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cross_ratio_is_moebius_invariant(
        z in prop::collection::btree_set(-30i64..30, 4),
        (a, b, c, d) in (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5),
    ) {
        prop_assume!(a * d - b * c != 0);
        let z: Vec<BigRational> = z.into_iter().map(|x| q(x, 1)).collect();
        prop_assume!(z.iter().all(|x| q(c, 1) * x + q(d, 1) != q(0, 1)));
        let f = |x: &BigRational| (q(a, 1) * x + q(b, 1)) / (q(c, 1) * x + q(d, 1));
        let w: Vec<BigRational> = z.iter().map(f).collect();
        let before = cross_ratio_q([&z[0], &z[1], &z[2], &z[3]]).unwrap();
        let after = cross_ratio_q([&w[0], &w[1], &w[2], &w[3]]).unwrap();
        prop_assert_eq!(before, after);
    }
}
