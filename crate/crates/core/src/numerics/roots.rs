use super::{Ball, ComplexBall, PrecisionContext};
use crate::error::{Error, Result};
#[cfg(test)]
use rug::Float;

/// Certified roots of `x^3 - x - 1`: the real root `alpha` and the conjugate pair `beta`, `gamma`.
#[derive(Debug, Clone)]
pub struct PlasticRootSystem {
    pub alpha: Ball,
    pub beta: ComplexBall,
    pub gamma: ComplexBall,
    /// `cbrt(108 + 12 sqrt 69)`
    pub r1: Ball,
    /// `cbrt(108 - 12 sqrt 69)`
    pub r2: Ball,
    context: PrecisionContext,
}

impl PlasticRootSystem {
    pub fn context(&self) -> &PrecisionContext {
        &self.context
    }

    pub fn prec(&self) -> u32 {
        self.context.bits()
    }

    pub fn log_alpha(&self) -> Ball {
        self.alpha.ln()
    }

    /// `alpha^n` for any integer `n`; `alpha^0` is exactly one.
    pub fn alpha_pow(&self, n: i64) -> Ball {
        self.alpha.pow_i(n)
    }
}

fn cubic(x: &Ball) -> Ball {
    x.pow_u(3).sub(x).sub(&Ball::one(x.prec()))
}

fn complex_cubic(z: &ComplexBall) -> ComplexBall {
    let prec = z.prec();
    z.pow_u(3).sub(z).sub(&ComplexBall::one(prec))
}

fn strip(b: &Ball) -> Ball {
    Ball::exact(b.mid().clone())
}

fn strip_c(z: &ComplexBall) -> ComplexBall {
    ComplexBall::new(strip(&z.re), strip(&z.im))
}

fn newton_iterations(prec: u32) -> usize {
    // quadratic convergence from a 50-bit seed, plus slack
    (prec as f64 / 50.0).log2().ceil().max(0.0) as usize + 4
}

fn newton_real(prec: u32) -> Ball {
    let mut x = Ball::from_f64(1.324_717_957_244_746, prec);
    let three = Ball::from_i64(3, prec);
    let one = Ball::one(prec);
    for _ in 0..newton_iterations(prec) {
        let f = cubic(&x);
        let df = three.mul(&x.sqr()).sub(&one);
        x = strip(&x.sub(&f.div(&df)));
    }
    x
}

fn newton_complex(prec: u32) -> ComplexBall {
    let mut z = ComplexBall::new(
        Ball::from_f64(-0.662_358_978_622_373, prec),
        Ball::from_f64(0.562_279_512_062_301_2, prec),
    );
    let three = Ball::from_i64(3, prec);
    let one = ComplexBall::one(prec);
    for _ in 0..newton_iterations(prec) {
        let f = complex_cubic(&z);
        let df = z.mul(&z).scale(&three).sub(&one);
        z = strip_c(&z.sub(&f.div(&df)));
    }
    z
}

struct Radicals {
    alpha: Ball,
    beta: ComplexBall,
    r1: Ball,
    r2: Ball,
}

fn radicals(prec: u32) -> Radicals {
    let s69 = Ball::from_i64(69, prec).sqrt();
    let twelve_s69 = s69.mul_i64(12);
    let c108 = Ball::from_i64(108, prec);
    let r1 = c108.add(&twelve_s69).cbrt();
    let r2 = c108.sub(&twelve_s69).cbrt();
    let sum = r1.add(&r2);
    let alpha = sum.div(&Ball::from_i64(6, prec));
    let twelve = Ball::from_i64(12, prec);
    let beta_re = sum.neg().div(&twelve);
    let beta_im = Ball::from_i64(3, prec).sqrt().mul(&r1.sub(&r2)).div(&twelve);
    Radicals {
        alpha,
        beta: ComplexBall::new(beta_re, beta_im),
        r1,
        r2,
    }
}

fn try_solve(ctx: &PrecisionContext) -> Option<PlasticRootSystem> {
    let prec = ctx.bits();
    let tol = ctx.tolerance().lower();
    let rad = radicals(prec);
    let alpha_it = newton_real(prec);
    let beta_it = newton_complex(prec);

    if rad.alpha.sub(&alpha_it).mag() >= tol || rad.beta.distance_upper(&beta_it) >= tol {
        return None;
    }
    let gamma = rad.beta.conj();
    let zero = ComplexBall::real(Ball::zero(prec));
    if cubic(&rad.alpha).mag() >= tol
        || complex_cubic(&rad.beta).distance_upper(&zero) >= tol
        || complex_cubic(&gamma).distance_upper(&zero) >= tol
    {
        return None;
    }
    Some(PlasticRootSystem {
        alpha: rad.alpha,
        beta: rad.beta,
        gamma,
        r1: rad.r1,
        r2: rad.r2,
        context: *ctx,
    })
}

/// Roots of `x^3 - x - 1` from the Cardano radicals, cross-checked against Newton refinement.
///
/// Escalates the precision until both routes agree within `ctx.tolerance()`.
pub fn solve_plastic_cubic(ctx: &PrecisionContext) -> Result<PlasticRootSystem> {
    for c in ctx.ladder() {
        if let Some(roots) = try_solve(&c) {
            return Ok(roots);
        }
    }
    Err(Error::precision(
        "radical and Newton roots of x^3 - x - 1 disagree",
        ctx.max_digits(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(digits: u32) -> PlasticRootSystem {
        solve_plastic_cubic(&PrecisionContext::with_digits(digits).unwrap()).unwrap()
    }

    #[test]
    fn alpha_envelope_and_leading_digits() {
        let r = roots(50);
        let p = r.prec();
        assert!(r.alpha.lt(&Ball::from_ratio(133, 100, p)));
        assert!(Ball::from_ratio(132, 100, p).lt(&r.alpha));
        assert!(r.alpha.to_decimal(17).starts_with("1.324717957244746"));
    }

    #[test]
    fn product_of_roots_is_one() {
        let r = roots(50);
        let prod = r.beta.mul(&r.gamma).scale(&r.alpha);
        assert!(prod.re.sub(&Ball::one(r.prec())).mag() < 1e-45);
        assert!(prod.im.mag() < 1e-45);
    }

    #[test]
    fn conjugate_modulus_is_inverse_sqrt_alpha() {
        let r = roots(50);
        let m = r.beta.abs();
        let target = r.alpha.sqrt().recip();
        assert!(m.sub(&target).mag() < 1e-40);
        assert!(Ball::from_ratio(86, 100, r.prec()).lt(&m));
        assert!(m.lt(&Ball::from_ratio(87, 100, r.prec())));
        assert!(r.gamma.is_conj_of(&r.beta));
    }

    #[test]
    fn radical_and_newton_agree_across_precisions() {
        for digits in [50, 100, 200, 400] {
            let ctx = PrecisionContext::with_digits(digits).unwrap();
            let r = solve_plastic_cubic(&ctx).unwrap();
            assert_eq!(r.context().decimal_digits(), digits);
            let tol = ctx.tolerance().lower();
            assert!(newton_real(ctx.bits()).sub(&r.alpha).mag() < tol);
            assert!(newton_complex(ctx.bits()).distance_upper(&r.beta) < tol);
            assert!(cubic(&r.alpha).mag() < tol);
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let lo = roots(50);
        let hi = roots(400);
        assert!(lo.alpha.overlaps(&hi.alpha));
        assert!(lo.beta.re.overlaps(&hi.beta.re));
        assert!(lo.beta.im.overlaps(&hi.beta.im));
        let moved = lo.alpha.sub(&hi.alpha).mag();
        let allowed = Float::with_val(64, lo.alpha.rad() + hi.alpha.rad()) * 2u32;
        assert!(moved <= allowed);
    }
}
