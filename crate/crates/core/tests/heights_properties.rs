use padovan_core::heights::{
    guzman_luca_bound, height_bound_combine, matveev_lower_bound, HeightOp, HeightProvenance, HeightValue, MatveevInput,
};
use padovan_core::numerics::Ball;
use proptest::prelude::*;
use rug::Float;

const P: u32 = 128;

fn input(b: f64, factors: &[f64]) -> MatveevInput {
    MatveevInput::new(
        3,
        Ball::from_f64(b, P),
        factors.iter().map(|&a| Ball::from_f64(a, P)).collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn matveev_bound_decreases_with_heights(a in 0.16f64..1e3, b in 0.16f64..1e3, extra in 0.0f64..1e3, big_b in 1.0f64..1e50) {
        let base = matveev_lower_bound(&input(big_b, &[a, b, 1.0]));
        let larger = matveev_lower_bound(&input(big_b, &[a + extra, b, 1.0]));
        prop_assert!(larger.le(&base) || larger.overlaps(&base));
    }

    #[test]
    fn matveev_bound_decreases_with_coefficient_bound(big_b in 1.0f64..1e40, factor in 1.0f64..1e6) {
        let base = matveev_lower_bound(&input(big_b, &[1.0, 1.0]));
        let larger = matveev_lower_bound(&input(big_b * factor, &[1.0, 1.0]));
        prop_assert!(larger.le(&base) || larger.overlaps(&base));
    }

    #[test]
    fn power_rule_is_exact(h in 0u32..10_000, s in -50i64..50) {
        let hv = HeightValue { value: Ball::from_ratio(h as i64, 7, P), provenance: HeightProvenance::Rational };
        let out = height_bound_combine(HeightOp::Power(s), &[hv], P);
        let expected = Ball::from_ratio(h as i64 * s.abs(), 7, P);
        prop_assert!(out.value.overlaps(&expected));
        prop_assert!(out.value.rad() < &Float::with_val(64, 1e-30));
    }

    #[test]
    fn fixed_point_is_bracketed(exp in 3.0f64..45.0, r in 1u32..=3) {
        let c = 10f64.powf(exp);
        prop_assume!(c > ((4 * r * r) as f64).powi(r as i32));
        let l = guzman_luca_bound(r, &Ball::from_f64(c, P)).unwrap();
        let lf = l.fixed_point.to_f64();
        let f = |x: f64| c * x.ln().powi(r as i32);
        prop_assert!(f(lf) <= lf * (1.0 + 1e-9));
        prop_assert!(lf <= 1.01 * f(1.01 * lf));
        prop_assert!(l.fixed_point <= l.lemma);
    }
}
