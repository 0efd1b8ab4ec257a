//! Logarithmic heights, Matveev's lower bound for linear forms in logarithms, and the
//! chain of Baker-type bounds that caps the largest index.

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::decimal::{integer_string, DecimalEnclosure};
use crate::error::{Error, Result};
use crate::numerics::{Ball, PrecisionContext};
use crate::padovan::BinetSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightProvenance {
    Rational,
    MinimalPolynomial,
    /// An upper bound obtained from the combination rules; never exact.
    CompositeBound,
}

#[derive(Debug, Clone)]
pub struct HeightValue {
    pub value: Ball,
    pub provenance: HeightProvenance,
}

/// `log max(|p|, q)` for `p/q` in lowest terms.
pub fn height_rational(p: &Integer, q: &Integer, prec: u32) -> Result<HeightValue> {
    if *q <= 0 {
        return Err(Error::domain(format!("denominator {q} must be positive")));
    }
    if Integer::from(p.gcd_ref(q)) != 1 {
        return Err(Error::domain(format!("{p}/{q} is not in lowest terms")));
    }
    let top = Integer::from(p.abs_ref()).max(q.clone());
    Ok(HeightValue {
        value: Ball::from_integer(&top, prec).ln(),
        provenance: HeightProvenance::Rational,
    })
}

/// `(log a0 + sum log max(|root|, 1)) / D` from certified magnitudes of all conjugates.
pub fn height_from_min_poly(leading: u64, root_magnitudes: &[Ball]) -> Result<HeightValue> {
    if leading == 0 || root_magnitudes.is_empty() {
        return Err(Error::domain(
            "need a positive leading coefficient and at least one root",
        ));
    }
    let prec = root_magnitudes[0].prec();
    let one = Ball::one(prec);
    let mut sum = Ball::from_integer(&Integer::from(leading), prec).ln();
    for m in root_magnitudes {
        if one.lt(m) {
            sum = sum.add(&m.ln());
        } else if !m.le(&one) {
            return Err(Error::precision(
                "conjugate magnitude straddles 1",
                (prec as f64 * std::f64::consts::LOG10_2) as u32,
            ));
        }
    }
    Ok(HeightValue {
        value: sum.div(&Ball::from_i64(root_magnitudes.len() as i64, prec)),
        provenance: HeightProvenance::MinimalPolynomial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightOp {
    /// `h(x1 + ... + xm) <= sum h(xi) + (m-1) log 2`.
    Sum,
    /// `h(x1 * ... * xm) <= sum h(xi)`, also for quotients.
    Product,
    /// `h(x^s) = |s| h(x)`, applied to the product of the inputs.
    Power(i64),
}

pub fn height_bound_combine(op: HeightOp, hs: &[HeightValue], prec: u32) -> HeightValue {
    let total = hs.iter().fold(Ball::zero(prec), |acc, h| acc.add(&h.value));
    let value = match op {
        HeightOp::Sum => {
            let extra = hs.len().saturating_sub(1) as i64;
            total.add(&Ball::from_i64(2, prec).ln().mul_i64(extra))
        }
        HeightOp::Product => total,
        HeightOp::Power(s) => total.mul_i64(s.abs()),
    };
    let provenance = match (op, hs) {
        (HeightOp::Power(_), [single]) => single.provenance,
        _ => HeightProvenance::CompositeBound,
    };
    HeightValue { value, provenance }
}

#[derive(Debug, Clone)]
pub struct MatveevInput {
    degree: u32,
    coefficient_bound: Ball,
    height_factors: Vec<Ball>,
}

impl MatveevInput {
    /// `height_factors[i]` must already dominate `max(D h(eta_i), |log eta_i|, 0.16)`.
    pub fn new(degree: u32, coefficient_bound: Ball, height_factors: Vec<Ball>) -> Result<Self> {
        let prec = coefficient_bound.prec();
        if degree == 0 || height_factors.is_empty() {
            return Err(Error::domain("degree and number of logarithms must be positive"));
        }
        if !Ball::one(prec).le(&coefficient_bound) {
            return Err(Error::domain("coefficient bound must be at least 1"));
        }
        let floor = Ball::from_ratio(16, 100, prec);
        if height_factors.iter().any(|a| !floor.le(a)) {
            return Err(Error::domain("every height factor must be at least 0.16"));
        }
        Ok(MatveevInput {
            degree,
            coefficient_bound,
            height_factors,
        })
    }

    pub fn len(&self) -> usize {
        self.height_factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.height_factors.is_empty()
    }
}

/// `1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)`.
pub fn matveev_constant(t: u32, degree: u32, prec: u32) -> Ball {
    let t_ball = Ball::from_i64(t as i64, prec);
    let d = Ball::from_i64(degree as i64, prec);
    Ball::from_ratio(14, 10, prec)
        .mul(&Ball::from_i64(30, prec).pow_u(t as u64 + 3))
        .mul(&t_ball.pow_u(4).mul(&t_ball.sqrt()))
        .mul(&d.sqr())
        .mul(&Ball::one(prec).add(&d.ln()))
}

/// Right-hand side of Matveev's inequality: `log |Lambda|` exceeds this whenever `Lambda != 0`.
pub fn matveev_lower_bound(inp: &MatveevInput) -> Ball {
    let prec = inp.coefficient_bound.prec();
    let product = inp.height_factors.iter().fold(Ball::one(prec), |acc, a| acc.mul(a));
    matveev_constant(inp.len() as u32, inp.degree, prec)
        .mul(&Ball::one(prec).add(&inp.coefficient_bound.ln()))
        .mul(&product)
        .neg()
}

/// Coefficient of `log B` once `1 + log B` is replaced by `2 log B` (valid for `B >= e`).
pub fn matveev_log_coefficient(degree: u32, height_factors: &[Ball]) -> Ball {
    let prec = height_factors[0].prec();
    let product = height_factors.iter().fold(Ball::one(prec), |acc, a| acc.mul(a));
    matveev_constant(height_factors.len() as u32, degree, prec)
        .mul_i64(2)
        .mul(&product)
}

/// Smallest largest index not covered by the exhaustive search.
pub const CHAIN_START: u32 = 501;

/// The three case constants: `n1 - n2 <= c1 log n1`, `n2 - n3 <= c2 (log n1)^2`,
/// `n1 <= c3 (log n1)^3`, plus the absolute bound they imply.
#[derive(Debug, Clone)]
pub struct BoundChain {
    pub c1: Ball,
    pub c2: Ball,
    pub c3: Ball,
    /// Height factor fed to Matveev in the second case, per `log n1`.
    pub case2_height_factor: Ball,
    /// Height factor fed to Matveev in the third case, per `(log n1)^2`.
    pub case3_height_factor: Ball,
    /// Constant handed to the final inversion: the larger of `c3` and the published value.
    pub c3_used: Ball,
    pub absolute_bound: Integer,
}

impl PartialEq for BoundChain {
    fn eq(&self, other: &Self) -> bool {
        BoundChainRecord::from(self.clone()) == BoundChainRecord::from(other.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundChainRecord {
    pub c1: DecimalEnclosure,
    pub c2: DecimalEnclosure,
    pub c3: DecimalEnclosure,
    pub case2_height_factor: DecimalEnclosure,
    pub case3_height_factor: DecimalEnclosure,
    pub c3_used: DecimalEnclosure,
    #[serde(with = "integer_string")]
    pub absolute_bound: Integer,
}

const RECORD_DIGITS: usize = 20;
const RECORD_PREC: u32 = 128;

impl From<BoundChain> for BoundChainRecord {
    fn from(c: BoundChain) -> Self {
        let enc = |b: &Ball| DecimalEnclosure::from_ball(b, RECORD_DIGITS);
        BoundChainRecord {
            c1: enc(&c.c1),
            c2: enc(&c.c2),
            c3: enc(&c.c3),
            case2_height_factor: enc(&c.case2_height_factor),
            case3_height_factor: enc(&c.case3_height_factor),
            c3_used: enc(&c.c3_used),
            absolute_bound: c.absolute_bound,
        }
    }
}

impl TryFrom<BoundChainRecord> for BoundChain {
    type Error = String;

    fn try_from(r: BoundChainRecord) -> std::result::Result<Self, String> {
        let ball = |e: &DecimalEnclosure| e.to_ball(RECORD_PREC);
        Ok(BoundChain {
            c1: ball(&r.c1)?,
            c2: ball(&r.c2)?,
            c3: ball(&r.c3)?,
            case2_height_factor: ball(&r.case2_height_factor)?,
            case3_height_factor: ball(&r.case3_height_factor)?,
            c3_used: ball(&r.c3_used)?,
            absolute_bound: r.absolute_bound,
        })
    }
}

impl Serialize for BoundChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoundChainRecord::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundChain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = BoundChainRecord::deserialize(d)?;
        BoundChain::try_from(record).map_err(serde::de::Error::custom)
    }
}

/// Published ceiling for the third-case constant, `1.94e42`.
pub fn published_c3(prec: u32) -> Ball {
    Ball::from_i64(194, prec).mul(&Ball::pow10(40, prec))
}

/// Bounds for the three heights `h(d/(9a))`, `h(10)`, `h(alpha)` used by every case.
struct BaseHeights {
    log10: Ball,
    log_alpha: Ball,
    /// `h(d) + h(9) + h(a)` maximised over `d`, i.e. `4 log 3 + log(23)/3`.
    eta_core: Ball,
}

fn base_heights(sys: &BinetSystem) -> Result<BaseHeights> {
    let prec = sys.prec();
    let roots = &sys.roots;
    let h_alpha = height_from_min_poly(1, &[roots.alpha.clone(), roots.beta.abs(), roots.gamma.abs()])?;
    let coeffs = &sys.coeffs;
    let h_a = height_from_min_poly(23, &[coeffs.a.abs(), coeffs.b.abs(), coeffs.c.abs()])?;
    let h_9 = height_rational(&Integer::from(9), &Integer::from(1), prec)?;
    let h_d = height_rational(&Integer::from(9), &Integer::from(1), prec)?;
    let eta_core = height_bound_combine(HeightOp::Product, &[h_d, h_9, h_a], prec).value;
    let log_alpha = roots.log_alpha();
    let from_poly = h_alpha.value.mul_i64(3);
    if !from_poly.overlaps(&log_alpha) {
        return Err(Error::precision(
            "h(alpha) disagrees with log(alpha)/3",
            roots.context().decimal_digits(),
        ));
    }
    Ok(BaseHeights {
        log10: Ball::from_i64(10, prec).ln(),
        log_alpha,
        eta_core,
    })
}

/// Derives the three case constants from first principles, for indices beyond [`CHAIN_START`].
pub fn case_bounds(ctx: &PrecisionContext) -> Result<BoundChain> {
    let sys = BinetSystem::new(ctx)?;
    let prec = sys.prec();
    let h = base_heights(&sys)?;
    let log_start = Ball::from_i64(CHAIN_START as i64 - 1, prec).ln();
    let ln = |v: i64| Ball::from_i64(v, prec).ln();
    // A_2 = log alpha is kept outside the Matveev coefficient and cancels against the left side
    let a1 = h.log10.mul_i64(3);

    // case 1: |Lambda_1| < 5 alpha^-(n1-n2) with A_3 = 15 log 3 >= 3 h(d/(9a))
    let a3 = ln(3).mul_i64(15);
    if !h.eta_core.mul_i64(3).le(&a3) {
        return Err(Error::domain("15 log 3 does not dominate 3 h(d/(9a))"));
    }
    let matveev1 = matveev_log_coefficient(3, &[a1.clone(), Ball::one(prec), a3]);
    let c1 = matveev1.add(&ln(5).div(&h.log_alpha.mul(&log_start)));

    // case 2: h(eta) <= core + k log alpha + log 2 with k <= c1 log n1
    let case2_height = h.eta_core.add(&ln(2)).div(&log_start).add(&c1.mul(&h.log_alpha));
    let a3 = case2_height.mul_i64(3);
    let matveev2 = matveev_log_coefficient(3, &[a1.clone(), Ball::one(prec), a3]);
    let c2 = matveev2.add(&ln(3).div(&h.log_alpha.mul(&log_start.sqr())));

    // case 3: h(eta) <= core + 2 log 2 + ((n1-n2) + 2(n2-n3)) log alpha
    let case3_height = h
        .eta_core
        .add(&ln(2).mul_i64(2))
        .div(&log_start.sqr())
        .add(&c1.mul(&h.log_alpha).div(&log_start))
        .add(&c2.mul(&h.log_alpha).mul_i64(2));
    let a3 = case3_height.mul_i64(3);
    let matveev3 = matveev_log_coefficient(3, &[a1, Ball::one(prec), a3]);
    let c3 = matveev3.add(&ln(5).div(&h.log_alpha.mul(&log_start.pow_u(3))));

    let c3_used = c3.max(&published_c3(prec));
    let absolute_bound = guzman_luca_bound(3, &c3_used)?.best().clone();
    Ok(BoundChain {
        c1,
        c2,
        c3,
        case2_height_factor: case2_height.mul_i64(3),
        case3_height_factor: case3_height.mul_i64(3),
        c3_used,
        absolute_bound,
    })
}

/// Checks `10^l d / 9 >= 100/9 > 1 > 3|b|`, the numeric step behind the nonvanishing arguments.
pub fn nonvanishing_witness(sys: &BinetSystem) -> bool {
    let prec = sys.prec();
    let one = Ball::one(prec);
    let smallest_repdigit_scale = Ball::from_ratio(100, 9, prec);
    one.lt(&smallest_repdigit_scale) && sys.coeffs.b.abs().mul_i64(3).lt(&one)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuzmanLucaBound {
    /// `ceil(2^r H (log H)^r)`.
    pub lemma: Integer,
    /// Smallest integer `L*` with `L > c (log L)^r` for every `L >= L*`.
    pub fixed_point: Integer,
}

impl GuzmanLucaBound {
    pub fn best(&self) -> &Integer {
        (&self.lemma).min(&self.fixed_point)
    }
}

const GL_PREC: u32 = 192;

/// Inverts `L <= c (log L)^r`.
pub fn guzman_luca_bound(r: u32, c: &Ball) -> Result<GuzmanLucaBound> {
    if r == 0 {
        return Err(Error::domain("r must be positive"));
    }
    let prec = GL_PREC;
    let c = c.set_prec(prec);
    let r_ball = Ball::from_i64(r as i64, prec);
    let threshold = r_ball.sqr().mul_i64(4).pow_u(r as u64);
    if !threshold.lt(&c) {
        return Err(Error::domain(format!(
            "H must exceed (4r^2)^r = {}",
            threshold.to_f64()
        )));
    }
    let lemma_value = Ball::from_i64(2, prec)
        .pow_u(r as u64)
        .mul(&c)
        .mul(&c.ln().pow_u(r as u64));
    let lemma = lemma_value.ceil_upper();

    let g = |l: &Ball| l.sub(&c.mul(&l.ln().pow_u(r as u64)));
    // descend from the lemma bound; the iteration is a contraction above the fixed point
    let mut l = lemma_value.clone();
    for _ in 0..200 {
        let next = c.mul(&l.ln().pow_u(r as u64));
        let done = next.sub(&l).mag() < 1e-6;
        l = Ball::exact(next.upper());
        if done {
            break;
        }
    }
    let mut candidate = l.ceil_upper();
    loop {
        let cand = Ball::from_integer(&candidate, prec);
        let slope = c.mul_i64(r as i64).mul(&cand.ln().pow_u(r as u64 - 1)).div(&cand);
        let increasing = slope.lt(&Ball::one(prec)) && Ball::from_i64(r as i64 - 1, prec).exp().lt(&cand);
        if g(&cand).is_positive() && increasing {
            break;
        }
        if candidate > lemma {
            return Err(Error::precision("fixed point of L = c (log L)^r not certified", 0));
        }
        candidate += 1;
    }
    Ok(GuzmanLucaBound {
        lemma,
        fixed_point: candidate,
    })
}

/// Absolute bound on the largest index: the Guzman-Luca inversion of the third case.
pub fn absolute_bound(ctx: &PrecisionContext) -> Result<Integer> {
    Ok(case_bounds(ctx)?.absolute_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use rug::Float;

    const P: u32 = 256;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(60).unwrap()
    }

    fn approx(b: &Ball, v: f64, rel: f64) -> bool {
        (b.to_f64() - v).abs() <= rel * v.abs()
    }

    #[test]
    fn rational_heights() {
        let h = height_rational(&Integer::from(10), &Integer::from(1), P).unwrap();
        assert!(h.value.contains(Ball::from_i64(10, P).ln().mid()) || approx(&h.value, 10f64.ln(), 1e-15));
        let h1 = height_rational(&Integer::from(1), &Integer::from(1), P).unwrap();
        assert!(h1.value.contains(&Float::with_val(P, 0)));
        let h9 = height_rational(&Integer::from(1), &Integer::from(9), P).unwrap();
        assert!(approx(&h9.value, 9f64.ln(), 1e-15));
        assert!(height_rational(&Integer::from(2), &Integer::from(4), P).is_err());
        assert!(height_rational(&Integer::from(2), &Integer::from(0), P).is_err());
    }

    #[test]
    fn minimal_polynomial_heights() {
        let sys = BinetSystem::new(&ctx()).unwrap();
        let r = &sys.roots;
        let h_alpha = height_from_min_poly(1, &[r.alpha.clone(), r.beta.abs(), r.gamma.abs()]).unwrap();
        assert!(h_alpha
            .value
            .overlaps(&r.log_alpha().div(&Ball::from_i64(3, sys.prec()))));
        let c = &sys.coeffs;
        let h_a = height_from_min_poly(23, &[c.a.clone(), c.b.abs(), c.c.abs()]).unwrap();
        assert!(approx(&h_a.value, 23f64.ln() / 3.0, 1e-14));
        let h7 = height_from_min_poly(1, &[Ball::from_i64(7, P)]).unwrap();
        assert!(approx(&h7.value, 7f64.ln(), 1e-15));
        let straddle = Ball::with_radius(Float::with_val(P, 1), &Float::with_val(64, 0.01));
        assert!(height_from_min_poly(1, &[straddle]).is_err());
    }

    #[test]
    fn combination_rules() {
        let sys = BinetSystem::new(&ctx()).unwrap();
        let p = sys.prec();
        let h = base_heights(&sys).unwrap();
        let five_log3 = Ball::from_i64(3, p).ln().mul_i64(5);
        assert!(h.eta_core.lt(&five_log3));
        let expected = Ball::from_i64(3, p)
            .ln()
            .mul_i64(4)
            .add(&Ball::from_i64(23, p).ln().div(&Ball::from_i64(3, p)));
        assert!(h.eta_core.overlaps(&expected));

        let x = HeightValue {
            value: Ball::from_ratio(7, 3, p),
            provenance: HeightProvenance::Rational,
        };
        let zero = height_bound_combine(HeightOp::Power(0), std::slice::from_ref(&x), p);
        assert!(zero.value.contains(&Float::with_val(p, 0)));
        let cube = height_bound_combine(HeightOp::Power(-3), std::slice::from_ref(&x), p);
        assert!(cube.value.contains(&Float::with_val(p, 7)));
        let sum = height_bound_combine(HeightOp::Sum, &[x.clone(), x], p);
        assert_eq!(sum.provenance, HeightProvenance::CompositeBound);
        assert!(approx(&sum.value, 14.0 / 3.0 + 2f64.ln(), 1e-14));
    }

    #[test]
    fn matveev_reproduces_published_coefficients() {
        let sys = BinetSystem::new(&ctx()).unwrap();
        let p = sys.prec();
        let a1 = Ball::from_i64(10, p).ln().mul_i64(3);
        let one = Ball::one(p);
        let case1 = matveev_log_coefficient(3, &[a1.clone(), one.clone(), Ball::from_i64(3, p).ln().mul_i64(15)]);
        assert!(approx(&case1, 6.16e14, 0.01), "{case1}");
        let case2 = matveev_log_coefficient(3, &[a1.clone(), one.clone(), Ball::from_f64(5.31e14, p)]);
        assert!(approx(&case2, 1.98e28, 0.01), "{case2}");
        let case3 = matveev_log_coefficient(3, &[a1, one, Ball::from_f64(5.16e28, p)]);
        assert!(approx(&case3, 1.92e42, 0.01), "{case3}");
    }

    #[test]
    fn matveev_input_validation() {
        let b = Ball::from_i64(100, P);
        assert!(MatveevInput::new(3, b.clone(), vec![Ball::from_ratio(1, 10, P)]).is_err());
        assert!(MatveevInput::new(3, Ball::from_ratio(1, 2, P), vec![Ball::one(P)]).is_err());
        assert!(MatveevInput::new(0, b.clone(), vec![Ball::one(P)]).is_err());
        let ok = MatveevInput::new(3, b, vec![Ball::one(P); 3]).unwrap();
        assert!(matveev_lower_bound(&ok).is_negative());
    }

    #[test]
    fn chain_constants() {
        let chain = case_bounds(&ctx()).unwrap();
        for (c, reference) in [(&chain.c1, 6.18e14), (&chain.c2, 2e28), (&chain.c3, 1.94e42)] {
            let v = c.upper().to_f64();
            assert!(v <= reference * 1.01 && v >= reference * 0.5, "{v} vs {reference}");
        }
        assert!(chain.c3_used.contains(published_c3(128).mid()) || chain.c3.le(&chain.c3_used));
        let two = Integer::from(2) * Integer::from(10).pow(48);
        let three = Integer::from(3) * Integer::from(10).pow(48);
        assert!(chain.absolute_bound >= two && chain.absolute_bound <= three);
        assert!(chain.absolute_bound > 500);
    }

    #[test]
    fn chain_serde_round_trip() {
        let chain = case_bounds(&ctx()).unwrap();
        let json = serde_json::to_string(&chain).unwrap();
        let back: BoundChain = serde_json::from_str(&json).unwrap();
        assert_eq!(back.absolute_bound, chain.absolute_bound);
        assert!(back.c3.overlaps(&chain.c3));
    }

    #[test]
    fn guzman_luca_examples() {
        let h = published_c3(P);
        let gl = guzman_luca_bound(3, &h).unwrap();
        let lemma = gl.lemma.to_f64();
        assert!((lemma / 1.433e49 - 1.0).abs() < 0.01, "{lemma}");
        let fp = gl.fixed_point.to_f64();
        assert!(fp < 2.7e48 * 1.02 && fp > 2.0e48, "{fp}");
        assert_eq!(gl.best(), &gl.fixed_point);

        let small = guzman_luca_bound(1, &Ball::from_i64(100, P)).unwrap();
        assert_eq!(small.lemma, 922);
        assert!(small.fixed_point < 922);
        assert!(guzman_luca_bound(3, &Ball::from_i64(1000, P)).is_err());
    }

    #[test]
    fn fixed_point_bracketing() {
        for (r, c) in [(1u32, 100.0), (2, 1e6), (3, 1.94e42)] {
            let cb = Ball::from_f64(c, P);
            let l = guzman_luca_bound(r, &cb).unwrap().fixed_point.to_f64();
            let f = |x: f64| c * x.ln().powi(r as i32);
            assert!(f(l) <= l * (1.0 + 1e-12));
            assert!(l <= 1.01 * f(1.01 * l));
        }
    }

    #[test]
    fn nonvanishing_numeric_witness() {
        let sys = BinetSystem::new(&ctx()).unwrap();
        assert!(nonvanishing_witness(&sys));
    }
}
