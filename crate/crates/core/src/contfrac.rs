//! Certified continued-fraction expansions, exact convergents and Legendre's criterion.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::decimal::integer_from_str;
use crate::error::{Error, Result};
use crate::numerics::{solve_plastic_cubic, Ball, PrecisionContext};

/// Default number of quotients expanded for `tau`.
pub const DEFAULT_DEPTH: usize = 160;

/// `tau = log 10 / log alpha`, approximately 8.1883.
pub fn tau(ctx: &PrecisionContext) -> Result<Ball> {
    let roots = solve_plastic_cubic(ctx)?;
    let log10 = Ball::from_i64(10, ctx.bits()).ln();
    Ok(log10.div(&roots.log_alpha()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExpansionRecord", into = "ExpansionRecord")]
pub struct ContinuedFractionExpansion {
    partial_quotients: Vec<Integer>,
    /// `(p_k, q_k)` for `k = 0..len`.
    convergents: Vec<(Integer, Integer)>,
}

impl ContinuedFractionExpansion {
    /// Builds the convergents from seeds `p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1`.
    pub fn from_quotients(partial_quotients: Vec<Integer>) -> Result<Self> {
        if partial_quotients.iter().skip(1).any(|a| *a < 1) {
            return Err(Error::domain("partial quotients after the first must be positive"));
        }
        let mut convergents = Vec::with_capacity(partial_quotients.len());
        let (mut p2, mut p1) = (Integer::from(0), Integer::from(1));
        let (mut q2, mut q1) = (Integer::from(1), Integer::from(0));
        for a in &partial_quotients {
            let p = Integer::from(a * &p1) + &p2;
            let q = Integer::from(a * &q1) + &q2;
            p2 = std::mem::replace(&mut p1, p.clone());
            q2 = std::mem::replace(&mut q1, q.clone());
            convergents.push((p, q));
        }
        Ok(ContinuedFractionExpansion {
            partial_quotients,
            convergents,
        })
    }

    pub fn partial_quotients(&self) -> &[Integer] {
        &self.partial_quotients
    }

    pub fn convergents(&self) -> &[(Integer, Integer)] {
        &self.convergents
    }

    pub fn convergent(&self, k: usize) -> Option<&(Integer, Integer)> {
        self.convergents.get(k)
    }

    pub fn certified_depth(&self) -> usize {
        self.partial_quotients.len()
    }

    /// Exact check of `p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)` at every index.
    pub fn determinant_law_holds(&self) -> bool {
        let mut prev = (Integer::from(1), Integer::from(0));
        for (k, (p, q)) in self.convergents.iter().enumerate() {
            let det = Integer::from(p * &prev.1) - Integer::from(&prev.0 * q);
            let expected = if k % 2 == 0 { -1 } else { 1 };
            if det != expected {
                return false;
            }
            prev = (p.clone(), q.clone());
        }
        true
    }

    /// Interval check of `|x - p_k/q_k| < 1/(q_k q_{k+1})` for every consecutive pair.
    pub fn convergent_bounds_hold(&self, x: &Ball) -> bool {
        let prec = x.prec();
        self.convergents.windows(2).all(|w| {
            let (p, q) = &w[0];
            let ratio = Ball::from_rational(&Rational::from((p.clone(), q.clone())), prec);
            let gap = Ball::from_integer(&Integer::from(q * &w[1].1), prec).recip();
            x.sub(&ratio).abs().lt(&gap)
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionRecord {
    partial_quotients: Vec<String>,
    convergents: Vec<[String; 2]>,
}

impl From<ContinuedFractionExpansion> for ExpansionRecord {
    fn from(cf: ContinuedFractionExpansion) -> Self {
        ExpansionRecord {
            partial_quotients: cf.partial_quotients.iter().map(|a| a.to_string()).collect(),
            convergents: cf
                .convergents
                .iter()
                .map(|(p, q)| [p.to_string(), q.to_string()])
                .collect(),
        }
    }
}

impl TryFrom<ExpansionRecord> for ContinuedFractionExpansion {
    type Error = String;

    fn try_from(r: ExpansionRecord) -> std::result::Result<Self, String> {
        let quotients = r
            .partial_quotients
            .iter()
            .map(|s| integer_from_str(s))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let cf = ContinuedFractionExpansion::from_quotients(quotients).map_err(|e| e.to_string())?;
        let listed = r
            .convergents
            .iter()
            .map(|[p, q]| Ok((integer_from_str(p)?, integer_from_str(q)?)))
            .collect::<std::result::Result<Vec<_>, String>>()?;
        if listed != cf.convergents {
            return Err("convergents do not follow from the partial quotients".into());
        }
        Ok(cf)
    }
}

/// Canonical expansion of a rational (last quotient at least 2 unless it is the only one).
fn rational_quotients(x: &Rational, limit: usize) -> Vec<Integer> {
    let (mut num, mut den) = x.clone().into_numer_denom();
    let mut out = Vec::new();
    while den != 0 && out.len() < limit {
        let (a, r) = num.div_rem_floor(den.clone());
        out.push(a);
        num = std::mem::replace(&mut den, r);
    }
    out
}

/// Quotients shared by every real in `[lo, hi]`.
///
/// Reals starting with `a_0, ..., a_k` form an open interval once the tail is
/// strictly greater than 1. A rational endpoint whose canonical expansion continues
/// past `a_k` has such a tail, so if both endpoints do, the whole ball lies inside.
fn certified_prefix(x: &Ball, limit: usize) -> Vec<Integer> {
    let (Some(lo), Some(hi)) = (x.lower().to_rational(), x.upper().to_rational()) else {
        return Vec::new();
    };
    let a = rational_quotients(&lo, limit + 1);
    let b = rational_quotients(&hi, limit + 1);
    let mut common = 0;
    while common < a.len().min(b.len()) && a[common] == b[common] {
        common += 1;
    }
    let certified = common.min(a.len() - 1).min(b.len() - 1).min(limit);
    a[..certified].to_vec()
}

/// Expands `x` to `depth` certified quotients, raising the precision as needed.
pub fn expand<F>(x: F, depth: usize, ctx: &PrecisionContext) -> Result<ContinuedFractionExpansion>
where
    F: Fn(&PrecisionContext) -> Result<Ball>,
{
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    let mut last_digits = ctx.decimal_digits();
    for level in ctx.ladder() {
        last_digits = level.decimal_digits();
        let value = x(&level)?;
        let quotients = certified_prefix(&value, depth);
        if quotients.len() >= depth {
            return ContinuedFractionExpansion::from_quotients(quotients);
        }
    }
    Err(Error::precision(
        format!("continued fraction to depth {depth}"),
        last_digits,
    ))
}

/// Smallest `k` with `q_k > threshold`.
pub fn first_convergent_exceeding(cf: &ContinuedFractionExpansion, threshold: &Integer) -> Result<usize> {
    cf.convergents.iter().position(|(_, q)| q > threshold).ok_or_else(|| {
        Error::DepthExhausted(format!(
            "no denominator above {threshold} within {} quotients",
            cf.certified_depth()
        ))
    })
}

/// `|tau - r/s| > 1/((a(M) + 2) s^2)` for all `0 < s < M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegendreBound {
    #[serde(with = "crate::decimal::integer_string")]
    pub modulus: Integer,
    /// First index with `q > modulus`.
    pub index: usize,
    /// `max(a_0, ..., a_index)`.
    #[serde(with = "crate::decimal::integer_string")]
    pub max_quotient: Integer,
}

impl LegendreBound {
    /// `1/((a(M) + 2) s^2)`.
    pub fn gap(&self, s: &Integer, prec: u32) -> Ball {
        let denom = Integer::from(&self.max_quotient + 2u32) * Integer::from(s.square_ref());
        Ball::from_integer(&denom, prec).recip()
    }
}

pub fn legendre_irrationality_bound(cf: &ContinuedFractionExpansion, modulus: &Integer) -> Result<LegendreBound> {
    let index = first_convergent_exceeding(cf, modulus)?;
    let max_quotient = cf.partial_quotients[..=index]
        .iter()
        .max()
        .cloned()
        .expect("index is within the expansion");
    Ok(LegendreBound {
        modulus: modulus.clone(),
        index,
        max_quotient,
    })
}

/// Outcome of the homogeneous branch for `|tau - r/s| < C / (B^w s)` with `0 < s < M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogeneousBound {
    /// Smallest `w` with `B^w > 2 C M`, from which `r/s` must be a convergent.
    pub convergent_threshold: u32,
    /// Largest `w` with `B^w < (a(M) + 2) C M`.
    pub legendre_bound: u32,
    /// Largest `w` the inequality allows: `max(convergent_threshold - 1, legendre_bound)`.
    pub bound: u32,
    #[serde(with = "crate::decimal::integer_string")]
    pub max_quotient: Integer,
}

/// Largest integer `w` with `log_base * w < log_x`.
fn largest_exponent_below(log_x: &Ball, log_base: &Ball) -> Result<u32> {
    let ratio = log_x.div(log_base);
    if !ratio.is_positive() {
        return Ok(0);
    }
    // w < ratio for the upper endpoint keeps the bound valid for every point of the ball
    let ceil = ratio.ceil_upper();
    let w = Integer::from(&ceil - 1u32);
    w.to_u32().ok_or_else(|| Error::domain("exponent bound out of range"))
}

pub fn homogeneous_reduce(
    cf: &ContinuedFractionExpansion,
    modulus: &Integer,
    rhs_scale: &Ball,
    log_base: &Ball,
) -> Result<HomogeneousBound> {
    if rhs_scale.is_negative() || !log_base.is_positive() {
        return Err(Error::domain("need C >= 0 and a base above 1"));
    }
    let legendre = legendre_irrationality_bound(cf, modulus)?;
    if rhs_scale.upper() <= 0 {
        return Ok(HomogeneousBound {
            convergent_threshold: 0,
            legendre_bound: 0,
            bound: 0,
            max_quotient: legendre.max_quotient,
        });
    }
    let prec = rhs_scale.prec();
    let m = Ball::from_integer(modulus, prec);
    let dna = rhs_scale.mul_i64(2).mul(&m).ln();
    let convergent_threshold = largest_exponent_below(&dna, log_base)? + 1;
    let a_plus_two = Ball::from_integer(&Integer::from(&legendre.max_quotient + 2u32), prec);
    let legendre_log = a_plus_two.mul(rhs_scale).mul(&m).ln();
    let legendre_bound = largest_exponent_below(&legendre_log, log_base)?;
    Ok(HomogeneousBound {
        convergent_threshold,
        legendre_bound,
        bound: legendre_bound.max(convergent_threshold.saturating_sub(1)),
        max_quotient: legendre.max_quotient,
    })
}
