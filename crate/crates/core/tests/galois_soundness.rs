//! No false S_n verdicts or irreducibility certificates, checked against classical invariants.

mod support;

use support::*;

#[test]
fn quartic_oracles_agree_on_known_groups() {
    // x^4 + 1 is V4, x^4 - 2 is D4, x^4 + x + 1 is S4, x^4 + 8x + 12 is A4.
    let v4 = monic_quartic(&[1, 0, 0, 0, 1]);
    assert!(is_square(disc_monic_quartic(v4)) && resolvent_reducible(v4));
    let d4 = monic_quartic(&[-2, 0, 0, 0, 1]);
    assert!(!is_square(disc_monic_quartic(d4)) && resolvent_reducible(d4));
    assert!(full_symmetric(&[1, 1, 0, 0, 1]));
    let a4 = monic_quartic(&[12, 8, 0, 0, 1]);
    assert!(is_square(disc_monic_quartic(a4)) && !resolvent_reducible(a4));
    assert!(has_quadratic_factor(&[2, 0, 3, 0, 1]));
    assert!(!has_quadratic_factor(&[1, 1, 0, 0, 1]));
    assert!(!full_symmetric(&[-1, -3, 0, 1]));
}

#[test]
fn cubics_exhaustive() {
    let (irreducible, certified) = check_small_corpus(3, 200).unwrap();
    assert!(irreducible > 3000);
    assert!(certified > irreducible / 2);
}

#[test]
fn quartics_exhaustive() {
    let (irreducible, certified) = check_small_corpus(4, 200).unwrap();
    assert!(irreducible > 20_000);
    assert!(certified > irreducible / 2);
}

#[test]
fn reducible_products_never_certified() {
    check_reducible_products(10_000, 21, 60).unwrap();
}
