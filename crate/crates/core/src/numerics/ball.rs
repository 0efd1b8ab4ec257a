//! Midpoint-radius real arithmetic on top of MPFR.
//!
//! A [`Ball`] stores a midpoint rounded to nearest at the working precision and
//! a small-precision radius that is always rounded upward. Every operation
//! returns a ball that encloses all results of applying the exact operation to
//! points of the input balls.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Precision of the radius field, in bits.
const RAD_PREC: u32 = 64;

fn up<T>(val: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, val, Round::Up).0
}

fn down<T>(val: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, val, Round::Down).0
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

fn abs_down(x: &Float) -> Float {
    down(&*x.as_abs())
}

/// One unit in the last place of `x` at its own precision (zero for zero).
fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) => {
            let mut u = Float::with_val(RAD_PREC, 1);
            u <<= e - x.prec() as i32;
            u
        }
        None => Float::new(RAD_PREC),
    }
}

fn rounding_error(mid: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        Float::new(RAD_PREC)
    } else {
        ulp(mid)
    }
}

#[derive(Clone, PartialEq)]
pub struct Ball {
    mid: Float,
    rad: Float,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {}]",
            self.mid.to_string_radix(10, Some(30)),
            self.rad.to_string_radix(10, Some(3))
        )
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Ball {
    fn from_rounded(mid: Float, ord: Ordering) -> Ball {
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad }
    }

    /// Builds a ball from an explicit midpoint and radius; the radius is rounded up.
    pub fn with_radius(mid: Float, rad: &Float) -> Ball {
        Ball { mid, rad: abs_up(rad) }
    }

    pub fn exact(mid: Float) -> Ball {
        Ball {
            mid,
            rad: Float::new(RAD_PREC),
        }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Ball {
        Ball::exact(Float::with_val(prec, 1))
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        Ball::from_rounded(mid, ord)
    }

    pub fn from_f64(v: f64, prec: u32) -> Ball {
        assert!(v.is_finite(), "non-finite f64 cannot seed a ball");
        Ball::exact(Float::with_val(prec.max(53), v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        Ball::from_rounded(mid, ord)
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        Ball::from_rounded(mid, ord)
    }

    /// `num / den` as a ball.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Ball {
        Ball::from_rational(&Rational::from((num, den)), prec)
    }

    /// Enclosure of `10^exp`.
    pub fn pow10(exp: i32, prec: u32) -> Ball {
        Ball::from_i64(10, prec).pow_i(exp as i64)
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    /// Certified lower endpoint.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid - &self.rad, Round::Down).0
    }

    /// Certified upper endpoint.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on the absolute value of every point in the ball.
    pub fn mag(&self) -> Float {
        up(&abs_up(&self.mid) + &self.rad)
    }

    /// Lower bound on the absolute value of every point in the ball (zero if it straddles zero).
    pub fn mig(&self) -> Float {
        let m = down(&abs_down(&self.mid) - &self.rad);
        if m.is_sign_negative() {
            Float::new(RAD_PREC)
        } else {
            m
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    /// Whether the two balls intersect.
    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &Ball) -> bool {
        self.upper() < other.lower()
    }

    /// Certified `self <= other` (strictly separated or both exact and equal).
    pub fn le(&self, other: &Ball) -> bool {
        self.upper() <= other.lower()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Re-rounds the midpoint to a different precision.
    pub fn set_prec(&self, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        Ball {
            mid,
            rad: up(&self.rad + &err),
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: Float::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    pub fn abs(&self) -> Ball {
        Ball {
            mid: Float::with_val(self.prec(), &*self.mid.as_abs()),
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest);
        let rad = up(&up(&self.rad + &other.rad) + &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid - &other.mid, Round::Nearest);
        let rad = up(&up(&self.rad + &other.rad) + &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest);
        let t1 = up(&abs_up(&self.mid) * &other.rad);
        let t2 = up(&abs_up(&other.mid) * &self.rad);
        let t3 = up(&self.rad * &other.rad);
        let rad = up(&up(&up(&t1 + &t2) + &t3) + &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(k, self.prec()))
    }

    pub fn mul_integer(&self, k: &Integer) -> Ball {
        self.mul(&Ball::from_integer(k, self.prec()))
    }

    /// Division; `None` if the divisor ball contains zero.
    pub fn checked_div(&self, other: &Ball) -> Option<Ball> {
        let denom_low = other.mig();
        if denom_low <= 0 {
            return None;
        }
        let prec = self.prec().max(other.prec());
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest);
        // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
        let num = up(&self.rad + &up(&up(&abs_up(&mid) + &ulp(&mid)) * &other.rad));
        let rad = up(&up(&num / &denom_low) + &rounding_error(&mid, ord));
        Some(Ball { mid, rad })
    }

    /// Division; panics if the divisor ball contains zero.
    pub fn div(&self, other: &Ball) -> Ball {
        self.checked_div(other)
            .unwrap_or_else(|| panic!("ball division by a ball containing zero: {other:?}"))
    }

    pub fn recip(&self) -> Ball {
        Ball::one(self.prec()).div(self)
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn pow_u(&self, mut n: u64) -> Ball {
        let mut result = Ball::one(self.prec());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn pow_i(&self, n: i64) -> Ball {
        if n >= 0 {
            self.pow_u(n as u64)
        } else {
            self.pow_u(n.unsigned_abs()).recip()
        }
    }

    /// Square root; `None` unless the ball is certified positive.
    pub fn checked_sqrt(&self) -> Option<Ball> {
        let lo = down(&self.mid - &self.rad);
        if lo <= 0 {
            return None;
        }
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.sqrt_ref(), Round::Nearest);
        // |sqrt x - sqrt m| <= r / (sqrt(m - r) + sqrt m)
        let den = down(&down(lo.sqrt_ref()) + &down(self.mid.sqrt_ref()));
        let rad = up(&up(&self.rad / &den) + &rounding_error(&mid, ord));
        Some(Ball { mid, rad })
    }

    pub fn sqrt(&self) -> Ball {
        self.checked_sqrt()
            .unwrap_or_else(|| panic!("square root of a non-positive ball: {self:?}"))
    }

    /// Real cube root; `None` unless the ball is certified positive.
    pub fn checked_cbrt(&self) -> Option<Ball> {
        let lo = down(&self.mid - &self.rad);
        if lo <= 0 {
            return None;
        }
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.cbrt_ref(), Round::Nearest);
        // |cbrt x - cbrt m| <= r / (3 cbrt(m - r)^2)
        let c = down(lo.cbrt_ref());
        let den = down(&down(&c * &c) * 3u32);
        let rad = up(&up(&self.rad / &den) + &rounding_error(&mid, ord));
        Some(Ball { mid, rad })
    }

    pub fn cbrt(&self) -> Ball {
        self.checked_cbrt()
            .unwrap_or_else(|| panic!("cube root of a non-positive ball: {self:?}"))
    }

    /// Natural logarithm; `None` unless the ball is certified positive.
    pub fn checked_ln(&self) -> Option<Ball> {
        let lo = down(&self.mid - &self.rad);
        if lo <= 0 {
            return None;
        }
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.ln_ref(), Round::Nearest);
        let rad = up(&up(&self.rad / &lo) + &rounding_error(&mid, ord));
        Some(Ball { mid, rad })
    }

    pub fn ln(&self) -> Ball {
        self.checked_ln()
            .unwrap_or_else(|| panic!("logarithm of a non-positive ball: {self:?}"))
    }

    pub fn exp(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.exp_ref(), Round::Nearest);
        // |e^x - e^m| <= e^(m + r) r
        let top = up(up(&self.mid + &self.rad).exp_ref());
        let rad = up(&up(&top * &self.rad) + &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    /// Distance to the nearest integer. The map is 1-Lipschitz, so the radius carries over.
    pub fn dist_to_int(&self) -> Ball {
        let nearest = self.mid.to_integer().expect("finite midpoint");
        let (mut mid, ord) = Float::with_val_round(self.prec(), &self.mid - &nearest, Round::Nearest);
        mid.abs_mut();
        let rad = up(&self.rad + &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    /// `floor(x)` if it is the same for every point of the ball.
    pub fn certified_floor(&self) -> Option<Integer> {
        let lo = self.lower().to_integer_round(Round::Down)?.0;
        let hi = self.upper().to_integer_round(Round::Down)?.0;
        (lo == hi).then_some(lo)
    }

    /// `ceil(x)` of the upper endpoint: the smallest integer not below any point of the ball.
    pub fn ceil_upper(&self) -> Integer {
        self.upper().to_integer_round(Round::Up).expect("finite ball").0
    }

    /// The unique integer contained in the ball, if the ball contains exactly one and is narrower than 1/2.
    pub fn integer_inside(&self) -> Option<Integer> {
        if self.rad >= 0.25 {
            return None;
        }
        let n = self.mid.to_integer()?;
        let nf = Float::with_val(self.prec(), &n);
        self.contains(&nf).then_some(n)
    }

    /// Largest of two balls in the certified sense: a ball enclosing `max(x, y)`.
    pub fn max(&self, other: &Ball) -> Ball {
        if self.le(other) {
            other.clone()
        } else if other.le(self) {
            self.clone()
        } else {
            let hi = self.upper().max(&other.upper());
            let lo = self.lower().max(&other.lower());
            Ball::hull(&lo, &hi)
        }
    }

    /// Smallest ball with both endpoints inside.
    pub fn hull(lo: &Float, hi: &Float) -> Ball {
        let prec = lo.prec().max(hi.prec());
        let (mid, ord) = Float::with_val_round(prec, lo + hi, Round::Nearest);
        let mut mid = mid;
        mid /= 2u32;
        let half = up(&up(hi - lo) / 2u32);
        let rad = up(&half + &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    /// Decimal digits of the midpoint, mostly for diagnostics.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.mid.to_string_radix(10, Some(digits))
    }

    /// Lower bound on `-log10(rad)`; how many decimals of the midpoint are trustworthy.
    pub fn accurate_decimals(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::INFINITY;
        }
        let r = self.rad.to_f64();
        if r == 0.0 {
            // below f64 range; fall back to the binary exponent
            let e = self.rad.get_exp().unwrap_or(0) as f64;
            return -e * std::f64::consts::LOG10_2;
        }
        -r.log10()
    }

    /// `base^exponent` for non-negative integral powers, computed as `exp(e ln base)` for large e.
    pub fn powf(&self, exponent: &Ball) -> Ball {
        self.ln().mul(exponent).exp()
    }
}

/// `10^exp` as an MPFR value at the given precision (not certified; used for tolerances).
pub fn pow10_float(exp: i32, prec: u32) -> Float {
    Float::with_val(prec, Float::with_val(prec, 10).pow(exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn ball(v: f64) -> Ball {
        Ball::from_f64(v, P)
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let third = Ball::from_ratio(1, 3, P);
        let sum = third.add(&third).add(&third);
        assert!(sum.contains(&Float::with_val(P, 1)));
        let prod = third.mul_i64(3);
        assert!(prod.contains(&Float::with_val(P, 1)));
        let q = Ball::one(P).div(&Ball::from_i64(3, P));
        assert!(q.overlaps(&third));
    }

    #[test]
    fn transcendental_functions_enclose() {
        let two = Ball::from_i64(2, P);
        let s = two.sqrt();
        assert!(s.sqr().contains(&Float::with_val(P, 2)));
        let c = Ball::from_i64(27, P).cbrt();
        assert!(c.contains(&Float::with_val(P, 3)));
        let e = Ball::one(P).exp();
        assert!(e.ln().contains(&Float::with_val(P, 1)));
        let l = Ball::from_i64(10, P).ln();
        assert!((l.to_f64() - std::f64::consts::LN_10).abs() < 1e-15);
        assert!(l.accurate_decimals() > 70.0);
    }

    #[test]
    fn wide_balls_propagate_radius() {
        let x = Ball::with_radius(Float::with_val(P, 4), &Float::with_val(64, 0.5));
        let y = x.sqrt();
        assert!(y.contains(&Float::with_val(P, 3.55f64.sqrt())));
        assert!(y.contains(&Float::with_val(P, 4.45f64.sqrt())));
        let z = x.ln();
        assert!(z.contains(&Float::with_val(P, 3.55f64.ln())));
        assert!(z.contains(&Float::with_val(P, 4.45f64.ln())));
        let w = x.exp();
        assert!(w.contains(&Float::with_val(P, 4.45f64.exp())));
        let inv = x.recip();
        assert!(inv.contains(&Float::with_val(P, 1.0 / 3.55)));
    }

    #[test]
    fn partial_functions_reject_nonpositive() {
        let straddle = Ball::with_radius(Float::with_val(P, 0.1), &Float::with_val(64, 0.2));
        assert!(straddle.checked_ln().is_none());
        assert!(straddle.checked_sqrt().is_none());
        assert!(Ball::one(P).checked_div(&straddle).is_none());
        assert!(straddle.contains_zero());
    }

    #[test]
    fn distance_to_nearest_integer() {
        let d = ball(3.25).dist_to_int();
        assert!(d.contains(&Float::with_val(P, 0.25)));
        let d = ball(-2.875).dist_to_int();
        assert!(d.contains(&Float::with_val(P, 0.125)));
    }

    #[test]
    fn floors_and_integers() {
        assert_eq!(ball(7.5).certified_floor(), Some(Integer::from(7)));
        let near = Ball::with_radius(Float::with_val(P, 3), &Float::with_val(64, 1e-30));
        assert_eq!(near.certified_floor(), None);
        assert_eq!(near.integer_inside(), Some(Integer::from(3)));
        assert_eq!(ball(3.4).integer_inside(), None);
    }

    #[test]
    fn integer_powers() {
        let a = ball(1.5);
        assert!(a.pow_u(0).contains(&Float::with_val(P, 1)));
        assert!(a.pow_u(3).contains(&Float::with_val(P, 3.375)));
        assert!(a.pow_i(-2).overlaps(&Ball::from_ratio(4, 9, P)));
        let big = Ball::pow10(-395, 1400);
        assert!(big.is_positive());
        assert!(big.lt(&Ball::pow10(-394, 1400)));
    }
}
