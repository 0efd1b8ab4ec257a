use std::sync::OnceLock;

use padovan_core::numerics::{Ball, PrecisionContext};
use padovan_core::padovan::{canonical_index, error_term, growth_bounds_check, padovan, BinetSystem};
use padovan_core::repdigit::{classify_repdigit, make_repdigit};
use proptest::prelude::*;
use rug::{Float, Integer};

fn system() -> &'static BinetSystem {
    static SYS: OnceLock<BinetSystem> = OnceLock::new();
    SYS.get_or_init(|| BinetSystem::new(&PrecisionContext::with_digits(120).unwrap()).unwrap())
}

#[test]
fn growth_bounds_up_to_1000() {
    let sys = system();
    for n in 1..=1000 {
        assert!(growth_bounds_check(n, &sys.roots).unwrap(), "n = {n}");
    }
}

#[test]
fn error_term_decays_up_to_1000() {
    let sys = system();
    for n in 1..=1000u32 {
        let e = error_term(n, sys).unwrap();
        let cap = sys.roots.alpha_pow(-(n as i64)).sqrt();
        assert!(e.abs().lt(&cap), "n = {n}");
    }
}

#[test]
fn dominant_term_tracks_the_next_index() {
    // a alpha^n sits next to P_{n+1}, not P_n
    let sys = system();
    let a_alpha = sys.coeffs.a.mul(&sys.roots.alpha_pow(30));
    let next = Ball::from_integer(&padovan(31), sys.prec());
    let same = Ball::from_integer(&padovan(30), sys.prec());
    assert!(a_alpha.sub(&next).abs().lt(&Ball::from_ratio(1, 100, sys.prec())));
    assert!(Ball::one(sys.prec()).lt(&a_alpha.sub(&same).abs()));
}

#[test]
fn beta_modulus_is_inverse_square_root_of_alpha() {
    let sys = BinetSystem::new(&PrecisionContext::with_digits(50).unwrap()).unwrap();
    let diff = sys.roots.beta.abs().sub(&sys.roots.alpha.sqrt().recip()).abs();
    assert!(diff.lt(&Ball::pow10(-40, sys.prec())));
    let sum = sys.coeffs.b.add(&sys.coeffs.c).re.add(&sys.coeffs.a);
    assert!(sum.contains(&Float::with_val(sys.prec(), 1)));
}

proptest! {
    #[test]
    fn recurrence_holds(n in 0u32..2000) {
        prop_assert_eq!(padovan(n + 3), padovan(n + 1) + padovan(n));
    }

    #[test]
    fn binet_identity(n in 0u32..=200) {
        let sys = system();
        let v = sys.binet_value(n);
        prop_assert!(v.re.contains(&Float::with_val(sys.prec(), padovan(n + 1))));
        prop_assert!(v.im.contains_zero());
    }

    #[test]
    fn canonical_index_is_idempotent(n in 0u32..10_000) {
        let c = canonical_index(n);
        prop_assert_eq!(canonical_index(c), c);
        prop_assert!(!matches!(c, 1 | 2 | 4));
        prop_assert_eq!(padovan(c), padovan(n));
    }

    #[test]
    fn repdigit_round_trip(d in 1u32..=9, len in 1u32..=300) {
        let r = make_repdigit(d, len).unwrap();
        prop_assert_eq!(classify_repdigit(r.value()), Some((d as u8, len)));
    }

    #[test]
    fn perturbed_repdigits_are_rejected(d in 1u32..=9, len in 2u32..=60, bump in 1u32..9) {
        let r = make_repdigit(d, len).unwrap();
        let off = Integer::from(r.value() + bump);
        let same_digits = off.to_string().bytes().all(|b| b == off.to_string().as_bytes()[0]);
        prop_assert_eq!(classify_repdigit(&off).is_some(), same_digits);
    }
}
