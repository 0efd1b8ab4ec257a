//! Certified real/complex arithmetic and the roots of `x^3 - x - 1`.

mod ball;
mod complex;
mod roots;

pub use ball::{pow10_float, Ball};
pub use complex::ComplexBall;
pub use roots::{solve_plastic_cubic, PlasticRootSystem};

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extra decimal digits by which certified values may fall short of the working precision.
pub const GUARD_DIGITS: u32 = 5;
pub const MIN_DIGITS: u32 = 50;
pub const DEFAULT_MAX_DIGITS: u32 = 2000;
/// Working precision for continued fractions and reduction sweeps.
pub const REDUCTION_DIGITS: u32 = 400;

/// Binary guard bits added on top of the decimal working precision.
const GUARD_BITS: u32 = 64;

/// Working precision plus the cap that escalation may not exceed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    decimal_digits: u32,
    max_digits: u32,
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32, max_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DIGITS {
            return Err(Error::domain(format!(
                "working precision {decimal_digits} is below the minimum of {MIN_DIGITS} digits"
            )));
        }
        if max_digits < decimal_digits {
            return Err(Error::domain(format!(
                "precision cap {max_digits} is below the working precision {decimal_digits}"
            )));
        }
        Ok(PrecisionContext {
            decimal_digits,
            max_digits,
        })
    }

    /// Context with the default cap (or `digits` itself if that is larger).
    pub fn with_digits(digits: u32) -> Result<Self> {
        PrecisionContext::new(digits, digits.max(DEFAULT_MAX_DIGITS))
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn max_digits(&self) -> u32 {
        self.max_digits
    }

    /// MPFR precision in bits.
    pub fn bits(&self) -> u32 {
        (self.decimal_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Certification tolerance `10^(-digits + GUARD_DIGITS)`.
    pub fn tolerance(&self) -> Ball {
        Ball::pow10(-(self.decimal_digits as i32) + GUARD_DIGITS as i32, self.bits())
    }

    /// Same cap, doubled working precision; `None` once the cap is reached.
    pub fn escalate(&self) -> Option<Self> {
        if self.decimal_digits >= self.max_digits {
            return None;
        }
        Some(PrecisionContext {
            decimal_digits: (self.decimal_digits * 2).min(self.max_digits),
            max_digits: self.max_digits,
        })
    }

    /// This context followed by every escalation step up to the cap.
    pub fn ladder(&self) -> impl Iterator<Item = PrecisionContext> {
        std::iter::successors(Some(*self), |c| c.escalate())
    }

    /// Context at twice the precision, ignoring the cap; used for stability checks.
    pub fn doubled(&self) -> Self {
        PrecisionContext {
            decimal_digits: self.decimal_digits * 2,
            max_digits: self.max_digits.max(self.decimal_digits * 2),
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            decimal_digits: REDUCTION_DIGITS,
            max_digits: DEFAULT_MAX_DIGITS,
        }
    }
}

/// Precision-escalation gate: the two evaluations agree to within `tol`.
pub fn certify_stable(value_at_p: &Ball, value_at_2p: &Ball, tol: &Float) -> bool {
    let diff = value_at_p.sub(value_at_2p);
    diff.mag() < *tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validation() {
        assert!(PrecisionContext::new(49, 100).is_err());
        assert!(PrecisionContext::new(60, 59).is_err());
        let ctx = PrecisionContext::new(50, 200).unwrap();
        let steps: Vec<u32> = ctx.ladder().map(|c| c.decimal_digits()).collect();
        assert_eq!(steps, vec![50, 100, 200]);
        assert!(ctx.bits() >= 166 + 64);
    }

    #[test]
    fn certify_stable_examples() {
        let p = 200;
        let x = Ball::from_f64(0.7, p);
        assert!(certify_stable(&x, &x, &Float::with_val(p, 1e-30)));
        let one = Ball::from_f64(1.0, p);
        let two = Ball::from_f64(2.0, p);
        assert!(!certify_stable(&one, &two, &Float::with_val(p, 0.5)));
    }

    #[test]
    fn alpha_is_stable_between_50_and_100_digits() {
        let c50 = PrecisionContext::with_digits(50).unwrap();
        let c100 = c50.doubled();
        let a50 = solve_plastic_cubic(&c50).unwrap().alpha;
        let a100 = solve_plastic_cubic(&c100).unwrap().alpha;
        assert!(certify_stable(&a50, &a100, &pow10_float(-45, 256)));
    }
}
