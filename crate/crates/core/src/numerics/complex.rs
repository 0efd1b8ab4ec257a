use std::fmt;

use super::Ball;

/// Rectangular complex ball: independent enclosures of the real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> Self {
        let prec = re.prec();
        ComplexBall {
            re,
            im: Ball::zero(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        ComplexBall::real(Ball::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn add_real(&self, x: &Ball) -> Self {
        ComplexBall {
            re: self.re.add(x),
            im: self.im.clone(),
        }
    }

    pub fn scale(&self, x: &Ball) -> Self {
        ComplexBall {
            re: self.re.mul(x),
            im: self.im.mul(x),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexBall {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> Ball {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = o.norm_sqr();
        let num = self.mul(&o.conj());
        ComplexBall {
            re: num.re.div(&den),
            im: num.im.div(&den),
        }
    }

    pub fn pow_u(&self, mut n: u64) -> Self {
        let mut result = ComplexBall::one(self.prec());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Upper bound on |self - other| via the triangle inequality on components.
    pub fn distance_upper(&self, other: &Self) -> rug::Float {
        let d = self.sub(other);
        let s = d.re.abs().add(&d.im.abs());
        s.upper()
    }

    /// The ball is certified to be the complex conjugate of `other` up to both radii.
    pub fn is_conj_of(&self, other: &Self) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im.neg())
    }
}
