use cyclounits::sunit::{
    gen_identity_family, gen_q5, gen_q7, gen_unit_equation, identity_min_level, identity_route,
    verify_solution, PrimeSet,
};
use cyclounits::Error;

const KS: [u64; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 24];

#[test]
fn identity_grid_two_layers() {
    for ell in [2u64, 3] {
        for k in KS {
            let (base, _) = identity_route(ell, k).unwrap();
            let n0 = identity_min_level(ell, base).unwrap();
            for n in [n0, n0 + 1] {
                let s = gen_identity_family(ell, k, n).unwrap();
                let c = verify_solution(&s).unwrap();
                assert!(c.passed(), "ell={ell} k={k} n={n}: {c:?}");
            }
        }
    }
}

#[test]
fn below_minimal_level_is_refused() {
    assert!(matches!(
        gen_identity_family(2, 1, 2),
        Err(Error::LevelTooSmall { .. })
    ));
}

#[test]
fn q5_and_q7_layers() {
    for k in [1u64, 2, 4] {
        for n in [2u32, 3] {
            let s = gen_q5(k, n).unwrap();
            let c = verify_solution(&s).unwrap();
            assert!(c.passed(), "q5 k={k} n={n}: {c:?}");
            if k == 2 {
                assert_eq!(s.s_set, PrimeSet::Empty);
            }
        }
    }
    let c = verify_solution(&gen_q7(2).unwrap()).unwrap();
    assert!(c.passed(), "{c:?}");
}

#[test]
fn unit_equation_valuations() {
    for ell in [3u64, 5, 7] {
        let m = (ell * ell) as i64;
        let mut done = 0;
        'outer: for i in 1..m {
            for j in 1..i {
                if (i + j) % m == 0 {
                    continue;
                }
                let s = gen_unit_equation(ell, i, j, 2).unwrap();
                let c = verify_solution(&s).unwrap();
                assert!(c.passed(), "ell={ell} ({i},{j}): {c:?}");
                done += 1;
                if done == 20 {
                    break 'outer;
                }
            }
        }
    }
}
