use cyclounits::curves::{
    build_dn, cross_ratio_permutation, isogeny_obstruction, legendre, legendre_noniso,
    noniso_certificate, HRoot, NonisoCase,
};
use cyclounits::sunit::gen_q5;

#[test]
fn legendre_layers_are_distinct() {
    let s2 = gen_q5(1, 2).unwrap();
    let s3 = gen_q5(1, 3).unwrap();
    let c = legendre_noniso(&s3, &s2).unwrap();
    assert!(c.passed, "{c:?}");
    assert!(legendre_noniso(&s2, &s2).is_err());
    let curve = legendre(&s2).unwrap();
    assert!(curve.reduction.unwrap().ok);
}

#[test]
fn hyperelliptic_models() {
    for (ell, g, n, h) in [
        (11u64, 2u64, 2u32, vec![]),
        (13, 2, 2, vec![]),
        (3, 2, 3, vec![]),
        (7, 3, 2, vec![HRoot::Zero]),
    ] {
        let m = build_dn(ell, g, n, &h).unwrap();
        assert!(m.passed(), "({ell},{g},{n}): {:?}", m.resultant_check);
        if ell == 3 {
            assert!(m.resultant_check.is_some());
        }
    }
}

#[test]
fn noniso_cases() {
    for (ell, g, n, case) in [
        (5u64, 2u64, 2u32, NonisoCase::KAtLeastTwo),
        (11, 2, 2, NonisoCase::KOne),
        (3, 2, 3, NonisoCase::EllThree),
    ] {
        let c = noniso_certificate(ell, g, n).unwrap();
        assert_eq!(c.case, case);
        assert!(c.passed, "({ell},{g},{n}): {:?}", c.membership);
    }
}

#[test]
fn permutation_oracle_separates_layers() {
    let d2 = build_dn(5, 2, 2, &[]).unwrap();
    let d3 = build_dn(5, 2, 3, &[]).unwrap();
    assert!(cross_ratio_permutation(&d2, &d2).unwrap().is_some());
    assert!(cross_ratio_permutation(&d3, &d2).unwrap().is_none());
}

#[test]
fn isogeny_parity() {
    for ell in [11u64, 23] {
        let c = isogeny_obstruction(ell, 3, 2).unwrap();
        assert!(c.passed, "{ell}: {:?}", c.membership);
    }
}
