//! Exact Padovan numbers and the Binet decomposition `P_{n+1} = a alpha^n + b beta^n + c gamma^n`.
//!
//! The coefficients are normalised so that `a = alpha(alpha+1)/(3 alpha^2 - 1)`, the root of
//! `23x^3 - 23x^2 + 6x - 1` near 0.722. With that normalisation the dominant term tracks
//! `P_{n+1}`, so the error term is `e(n) = P_{n+1} - a alpha^n`.

use rug::Integer;

use crate::error::{Error, Result};
use crate::numerics::{solve_plastic_cubic, Ball, ComplexBall, PlasticRootSystem, PrecisionContext};

/// `P_n`, by iterating `P_{n+3} = P_{n+1} + P_n` from `0, 1, 1`.
pub fn padovan(n: u32) -> Integer {
    let (mut x, mut y, mut z) = (Integer::from(0), Integer::from(1), Integer::from(1));
    for _ in 0..n {
        let next = Integer::from(&x + &y);
        x = std::mem::replace(&mut y, std::mem::replace(&mut z, next));
    }
    x
}

/// `P_0, ..., P_{n_max}`.
pub fn padovan_table(n_max: u32) -> Vec<Integer> {
    let mut table: Vec<Integer> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max as usize {
        let v = match n {
            0 => Integer::from(0),
            1 | 2 => Integer::from(1),
            _ => Integer::from(&table[n - 2] + &table[n - 3]),
        };
        table.push(v);
    }
    table
}

/// Representative index for the aliases `P_1 = P_2 = P_3` and `P_4 = P_5`.
pub fn canonical_index(n: u32) -> u32 {
    match n {
        1 | 2 => 3,
        4 => 5,
        other => other,
    }
}

pub fn is_canonical_index(n: u32) -> bool {
    canonical_index(n) == n
}

#[derive(Debug, Clone)]
pub struct BinetCoefficients {
    pub a: Ball,
    pub b: ComplexBall,
    pub c: ComplexBall,
    context: PrecisionContext,
}

impl BinetCoefficients {
    pub fn context(&self) -> &PrecisionContext {
        &self.context
    }

    /// Numeric coefficients of `23 (x - a)(x - b)(x - c)`, highest degree first.
    pub fn minimal_polynomial_of_a(&self) -> [ComplexBall; 4] {
        let prec = self.a.prec();
        let a = ComplexBall::real(self.a.clone());
        let e1 = a.add(&self.b).add(&self.c);
        let e2 = a.mul(&self.b).add(&a.mul(&self.c)).add(&self.b.mul(&self.c));
        let e3 = a.mul(&self.b).mul(&self.c);
        let k = Ball::from_i64(23, prec);
        [
            ComplexBall::real(k.clone()),
            e1.scale(&k).neg(),
            e2.scale(&k),
            e3.scale(&k).neg(),
        ]
    }
}

/// Binet coefficients `r(r+1)/((r-s)(r-t))` for each root `r`, with `a` checked against its closed form.
pub fn binet_coefficients(roots: &PlasticRootSystem) -> Result<BinetCoefficients> {
    let prec = roots.prec();
    let one = ComplexBall::one(prec);
    let alpha = ComplexBall::real(roots.alpha.clone());
    let (beta, gamma) = (&roots.beta, &roots.gamma);
    let coefficient =
        |r: &ComplexBall, s: &ComplexBall, t: &ComplexBall| r.mul(&r.add(&one)).div(&r.sub(s).mul(&r.sub(t)));
    let a_formula = coefficient(&alpha, beta, gamma);
    let b = coefficient(beta, &alpha, gamma);
    let c = coefficient(gamma, &alpha, beta);

    let al = &roots.alpha;
    let a_closed = al
        .mul(&al.add(&Ball::one(prec)))
        .div(&al.sqr().mul_i64(3).sub(&Ball::one(prec)));

    let digits = roots.context().decimal_digits();
    let tol = roots.context().tolerance().lower();
    if a_formula.re.sub(&a_closed).mag() >= tol || a_formula.im.mag() >= tol {
        return Err(Error::precision("Binet coefficient a: formulas disagree", digits));
    }
    if c.distance_upper(&b.conj()) >= tol {
        return Err(Error::precision("Binet coefficient c is not conj(b)", digits));
    }
    Ok(BinetCoefficients {
        a: a_closed,
        b,
        c,
        context: *roots.context(),
    })
}

/// Roots and Binet coefficients computed together at one precision.
#[derive(Debug, Clone)]
pub struct BinetSystem {
    pub roots: PlasticRootSystem,
    pub coeffs: BinetCoefficients,
}

impl BinetSystem {
    pub fn new(ctx: &PrecisionContext) -> Result<Self> {
        let roots = solve_plastic_cubic(ctx)?;
        let coeffs = binet_coefficients(&roots)?;
        Ok(BinetSystem { roots, coeffs })
    }

    pub fn prec(&self) -> u32 {
        self.roots.prec()
    }

    /// `a alpha^n + b beta^n + c gamma^n`, which equals `P_{n+1}`.
    pub fn binet_value(&self, n: u32) -> ComplexBall {
        let dominant = ComplexBall::real(self.coeffs.a.mul(&self.roots.alpha_pow(n as i64)));
        dominant.add(&self.conjugate_part(n))
    }

    fn conjugate_part(&self, n: u32) -> ComplexBall {
        let bb = self.coeffs.b.mul(&self.roots.beta.pow_u(n as u64));
        let cc = self.coeffs.c.mul(&self.roots.gamma.pow_u(n as u64));
        bb.add(&cc)
    }
}

/// `e(n) = P_{n+1} - a alpha^n = b beta^n + c gamma^n`, evaluated both ways.
///
/// The conjugate-pair path keeps full relative accuracy for large `n`; the exact path
/// must overlap it. Returns the narrower of the two enclosures.
pub fn error_term(n: u32, sys: &BinetSystem) -> Result<Ball> {
    if n == 0 {
        return Err(Error::domain("e(n) is defined for n >= 1"));
    }
    let digits = sys.roots.context().decimal_digits();
    let pair = sys.conjugate_part(n);
    if !pair.im.contains_zero() {
        return Err(Error::precision("e(n) has a non-real enclosure", digits));
    }
    let exact = Ball::from_integer(&padovan(n + 1), sys.prec()).sub(&sys.coeffs.a.mul(&sys.roots.alpha_pow(n as i64)));
    if !exact.overlaps(&pair.re) {
        return Err(Error::precision(format!("e({n}) evaluation paths disagree"), digits));
    }
    Ok(if exact.rad() < pair.re.rad() { exact } else { pair.re })
}

/// Certified check of `alpha^(n-3) <= P_n <= alpha^(n-1)`.
pub fn growth_bounds_check(n: u32, roots: &PlasticRootSystem) -> Result<bool> {
    if n == 0 {
        return Err(Error::domain("growth bounds are stated for n >= 1"));
    }
    let p = Ball::from_integer(&padovan(n), roots.prec());
    let lower = roots.alpha_pow(n as i64 - 3);
    let upper = roots.alpha_pow(n as i64 - 1);
    let digits = roots.context().decimal_digits();
    let lower_ok = if lower.le(&p) {
        true
    } else if p.lt(&lower) {
        false
    } else {
        return Err(Error::precision(format!("alpha^(n-3) vs P_{n} unresolved"), digits));
    };
    let upper_ok = if p.le(&upper) {
        true
    } else if upper.lt(&p) {
        false
    } else {
        return Err(Error::precision(format!("P_{n} vs alpha^(n-1) unresolved"), digits));
    };
    Ok(lower_ok && upper_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn system(digits: u32) -> BinetSystem {
        BinetSystem::new(&PrecisionContext::with_digits(digits).unwrap()).unwrap()
    }

    #[test]
    fn padovan_goldens() {
        let listed = [
            0, 1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12, 16, 21, 28, 37, 49, 65, 86, 114, 151,
        ];
        for (n, v) in listed.iter().enumerate() {
            assert_eq!(padovan(n as u32), *v, "P_{n}");
        }
        let table = padovan_table(300);
        for n in [0u32, 10, 20, 123, 300] {
            assert_eq!(table[n as usize], padovan(n));
        }
    }

    #[test]
    fn canonical_indices() {
        assert_eq!(canonical_index(1), 3);
        assert_eq!(canonical_index(2), 3);
        assert_eq!(canonical_index(4), 5);
        assert_eq!(canonical_index(7), 7);
        assert_eq!(canonical_index(0), 0);
        for n in 0..50 {
            assert_eq!(padovan(canonical_index(n)), padovan(n));
        }
    }

    #[test]
    fn binet_coefficient_envelope() {
        let sys = system(50);
        let p = sys.prec();
        let a = &sys.coeffs.a;
        assert!(Ball::from_ratio(72, 100, p).lt(a) && a.lt(&Ball::from_ratio(73, 100, p)));
        let mb = sys.coeffs.b.abs();
        assert!(Ball::from_ratio(24, 100, p).lt(&mb) && mb.lt(&Ball::from_ratio(25, 100, p)));
        assert!(sys.coeffs.c.is_conj_of(&sys.coeffs.b));
        // the nonvanishing arguments lean on 3|b| < 1
        assert!(mb.mul_i64(3).lt(&Ball::one(p)));
    }

    #[test]
    fn binet_at_zero_and_one() {
        let sys = system(50);
        let v0 = sys.binet_value(0);
        assert!(v0.re.contains(&Float::with_val(sys.prec(), 1)));
        assert!(v0.im.contains_zero());
        let v1 = sys.binet_value(1);
        assert!(v1.re.contains(&Float::with_val(sys.prec(), 1)));
        let v3 = sys.binet_value(3);
        assert!(v3.re.contains(&Float::with_val(sys.prec(), 2)));
    }

    #[test]
    fn binet_identity_to_200() {
        let sys = system(50);
        for n in 0..=200u32 {
            let v = sys.binet_value(n);
            let exact = Float::with_val(sys.prec(), padovan(n + 1));
            assert!(v.re.contains(&exact), "Binet identity fails at n={n}");
            assert!(v.im.contains_zero());
        }
    }

    #[test]
    fn minimal_polynomial_of_a() {
        let sys = system(50);
        let coeffs = sys.coeffs.minimal_polynomial_of_a();
        let expected = [23, -23, 6, -1];
        for (c, e) in coeffs.iter().zip(expected) {
            assert!(c.re.contains(&Float::with_val(sys.prec(), e)));
            assert!(c.im.contains_zero());
        }
        let a = &sys.coeffs.a;
        let val = a
            .pow_u(3)
            .mul_i64(23)
            .sub(&a.sqr().mul_i64(23))
            .add(&a.mul_i64(6))
            .sub(&Ball::one(sys.prec()));
        assert!(val.contains_zero());
    }

    #[test]
    fn error_term_examples() {
        let sys = system(50);
        let alpha = &sys.roots.alpha;
        let e1 = error_term(1, &sys).unwrap();
        let direct = Ball::one(sys.prec()).sub(&sys.coeffs.a.mul(alpha));
        assert!(e1.overlaps(&direct));
        assert!(e1.abs().lt(&alpha.sqrt().recip()));

        let e7 = error_term(7, &sys).unwrap();
        let direct7 = Ball::from_i64(5, sys.prec()).sub(&sys.coeffs.a.mul(&alpha.pow_u(7)));
        assert!(e7.overlaps(&direct7));

        let e100 = error_term(100, &sys).unwrap();
        assert!(e100.abs().lt(&alpha.pow_i(-50)));
        assert!(error_term(0, &sys).is_err());
    }

    #[test]
    fn growth_bound_examples() {
        let sys = system(50);
        assert!(growth_bounds_check(1, &sys.roots).unwrap());
        assert!(growth_bounds_check(3, &sys.roots).unwrap());
        assert!(growth_bounds_check(12, &sys.roots).unwrap());
        assert!(growth_bounds_check(500, &sys.roots).unwrap());
    }
}
