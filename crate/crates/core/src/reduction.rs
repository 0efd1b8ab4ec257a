//! Baker-Davenport reduction of the three linear forms `|l tau - x + mu| < A alpha^-w`.
//!
//! The forms are written in the exponent `x` of the dominant Binet term; since
//! `a alpha^x` tracks `P_{x+1}`, a bound on the exponent bounds the index by one more.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::contfrac::{
    expand, first_convergent_exceeding, homogeneous_reduce, legendre_irrationality_bound, tau,
    ContinuedFractionExpansion, HomogeneousBound, DEFAULT_DEPTH,
};
use crate::decimal::{integer_string, DecimalEnclosure};
use crate::error::{Error, Result};
use crate::numerics::{Ball, PrecisionContext};
use crate::padovan::BinetSystem;
use crate::search::SEARCH_LIMIT;

/// Gaps below this are handled by the assumption that licenses the logarithm bridge.
pub const TECHNICAL_GAP: u32 = 20;
/// Deeper convergents tried after the first one with `q > 6M`.
const EXTRA_CONVERGENTS: usize = 12;
const ENCLOSURE_DIGITS: usize = 12;
/// Powers of alpha kept in memory; the sweeps need at most about 900.
const ALPHA_TABLE: usize = 1024;

#[derive(Debug, Clone)]
pub struct ReductionProblem {
    pub tau: Ball,
    pub mu: Ball,
    pub a_coeff: Ball,
    pub base: Ball,
    pub modulus: Integer,
}

impl ReductionProblem {
    pub fn new(tau: Ball, mu: Ball, a_coeff: Ball, base: Ball, modulus: Integer) -> Result<Self> {
        let prec = tau.prec();
        if !a_coeff.is_positive() {
            return Err(Error::domain("A must be positive"));
        }
        if !Ball::one(prec).lt(&base) {
            return Err(Error::domain("B must exceed 1"));
        }
        if modulus < 1 {
            return Err(Error::domain("M must be at least 1"));
        }
        Ok(ReductionProblem {
            tau,
            mu,
            a_coeff,
            base,
            modulus,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Bounded,
    EpsilonNonpositive,
}

#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub status: ReductionStatus,
    pub epsilon: Ball,
    pub w_bound: Option<u32>,
    /// Convergent index that produced `epsilon`.
    pub q_index: usize,
}

#[derive(Debug, Clone)]
struct ConvergentRow {
    index: usize,
    q: Integer,
    /// `M ||tau q||`.
    tau_term: Ball,
}

/// Precomputed convergent data shared by every `mu` in a sweep.
#[derive(Debug, Clone)]
pub struct DavenportEngine {
    modulus: Integer,
    rows: Vec<ConvergentRow>,
}

impl DavenportEngine {
    pub fn new(tau: &Ball, cf: &ContinuedFractionExpansion, modulus: &Integer) -> Result<Self> {
        let six_m = Integer::from(modulus * 6u32);
        let first = first_convergent_exceeding(cf, &six_m)?;
        let last = (first + EXTRA_CONVERGENTS).min(cf.certified_depth() - 1);
        let prec = tau.prec();
        let m = Ball::from_integer(modulus, prec);
        let rows = (first..=last)
            .map(|index| {
                let q = cf.convergents()[index].1.clone();
                let tau_term = tau.mul_integer(&q).dist_to_int().mul(&m);
                ConvergentRow { index, q, tau_term }
            })
            .collect::<Vec<_>>();
        if rows[0].tau_term.rad() > &1e-20 {
            return Err(Error::precision(
                "tau too coarse for ||tau q||",
                (prec as f64 * std::f64::consts::LOG10_2) as u32,
            ));
        }
        Ok(DavenportEngine {
            modulus: modulus.clone(),
            rows,
        })
    }

    pub fn modulus(&self) -> &Integer {
        &self.modulus
    }

    /// Index of the first convergent with `q > 6M`.
    pub fn first_index(&self) -> usize {
        self.rows[0].index
    }

    pub fn first_denominator(&self) -> &Integer {
        &self.rows[0].q
    }

    fn epsilon(&self, row: &ConvergentRow, mu: &Ball) -> Ball {
        mu.mul_integer(&row.q).dist_to_int().sub(&row.tau_term)
    }

    /// `epsilon` at the first convergent only.
    pub fn primary_epsilon(&self, mu: &Ball) -> Ball {
        self.epsilon(&self.rows[0], mu)
    }

    /// Lemma of Dujella and Petho: the first convergent with a certified positive
    /// `epsilon` gives `w < log(A q / epsilon) / log B`.
    pub fn reduce(&self, mu: &Ball, a_coeff: &Ball, log_base: &Ball) -> ReductionOutcome {
        for row in &self.rows {
            let eps = self.epsilon(row, mu);
            if eps.is_positive() {
                let w_bound = w_bound(a_coeff, &row.q, &eps, log_base);
                return ReductionOutcome {
                    status: ReductionStatus::Bounded,
                    epsilon: eps,
                    w_bound: Some(w_bound),
                    q_index: row.index,
                };
            }
        }
        ReductionOutcome {
            status: ReductionStatus::EpsilonNonpositive,
            epsilon: self.primary_epsilon(mu),
            w_bound: None,
            q_index: self.first_index(),
        }
    }
}

/// `ceil(log(A q / eps) / log B)` evaluated from the lower end of `eps`.
fn w_bound(a_coeff: &Ball, q: &Integer, eps: &Ball, log_base: &Ball) -> u32 {
    const P: u32 = 128;
    let eps_lo = Ball::exact(rug::Float::with_val(P, eps.lower()));
    let ratio = a_coeff.set_prec(P).mul(&Ball::from_integer(q, P)).div(&eps_lo);
    let w = ratio.ln().div(&log_base.set_prec(P)).ceil_upper();
    w.to_u32().unwrap_or(u32::MAX)
}

pub fn davenport_reduce(p: &ReductionProblem, cf: &ContinuedFractionExpansion) -> Result<ReductionOutcome> {
    let engine = DavenportEngine::new(&p.tau, cf, &p.modulus)?;
    Ok(engine.reduce(&p.mu, &p.a_coeff, &p.base.ln()))
}

/// Everything the three stages share: roots, `tau`, its expansion and the engine.
#[derive(Debug, Clone)]
pub struct ReductionSetup {
    pub context: PrecisionContext,
    pub system: BinetSystem,
    pub tau: Ball,
    pub expansion: ContinuedFractionExpansion,
    pub engine: DavenportEngine,
    log_alpha: Ball,
    /// `log(d/(9a)) / log alpha` for `d = 1..=9`.
    base_mu: Vec<Ball>,
    alpha_powers: Vec<Ball>,
}

impl ReductionSetup {
    pub fn new(ctx: &PrecisionContext, modulus: &Integer) -> Result<Self> {
        let system = BinetSystem::new(ctx)?;
        let tau_ball = tau(ctx)?;
        let expansion = expand(tau, DEFAULT_DEPTH, ctx)?;
        let engine = DavenportEngine::new(&tau_ball, &expansion, modulus)?;
        let prec = system.prec();
        let log_alpha = system.roots.log_alpha();
        let log_9a = Ball::from_i64(9, prec).mul(&system.coeffs.a).ln();
        let base_mu = (1..=9)
            .map(|d| Ball::from_i64(d, prec).ln().sub(&log_9a).div(&log_alpha))
            .collect();
        let mut alpha_powers = Vec::with_capacity(ALPHA_TABLE + 1);
        alpha_powers.push(Ball::one(prec));
        for k in 1..=ALPHA_TABLE {
            let next = alpha_powers[k - 1].mul(&system.roots.alpha);
            alpha_powers.push(next);
        }
        Ok(ReductionSetup {
            context: *ctx,
            system,
            tau: tau_ball,
            expansion,
            engine,
            log_alpha,
            base_mu,
            alpha_powers,
        })
    }

    pub fn log_alpha(&self) -> &Ball {
        &self.log_alpha
    }

    fn alpha_pow(&self, k: u32) -> Ball {
        match self.alpha_powers.get(k as usize) {
            Some(p) => p.clone(),
            None => self.system.roots.alpha_pow(k as i64),
        }
    }

    /// `log(sum_i alpha^{e_i}) / log alpha` with a leading `1`.
    fn shift(&self, exponents: &[u32]) -> Ball {
        let prec = self.system.prec();
        exponents
            .iter()
            .fold(Ball::one(prec), |acc, &e| acc.add(&self.alpha_pow(e)))
            .ln()
            .div(&self.log_alpha)
    }

    /// `mu` for a case of the given stage.
    pub fn mu(&self, stage: Stage, case: &StageCase) -> Ball {
        let base = &self.base_mu[case.d as usize - 1];
        match stage.shift_exponents(case) {
            None => base.clone(),
            Some(exps) => base.sub(&self.shift(&exps)),
        }
    }

    /// `rhs_numerator / log alpha`, the exact constant before rounding up to `A`.
    pub fn rhs_constant(&self, stage: Stage) -> Ball {
        Ball::from_i64(stage.rhs_numerator(), self.system.prec()).div(&self.log_alpha)
    }

    /// `ceil(rhs_numerator / log alpha)`.
    pub fn a_coeff(&self, stage: Stage) -> u32 {
        self.rhs_constant(stage).ceil_upper().to_u32().expect("small constant")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// `mu_d = log(d/(9a)) / log alpha`, bounds the first gap.
    First,
    /// `mu_{d,k} = log(d/(9a(1 + alpha^k))) / log alpha`, bounds the second gap.
    Second,
    /// `mu_{d,k,s} = log(d/(9a(1 + alpha^k + alpha^s))) / log alpha`, bounds the largest exponent.
    Third,
}

impl Stage {
    /// Numerator of the right-hand side after the logarithm bridge: 10, 6 and 10.
    pub fn rhs_numerator(self) -> i64 {
        match self {
            Stage::First | Stage::Third => 10,
            Stage::Second => 6,
        }
    }

    /// Published rounding of `rhs_numerator / log alpha`.
    pub fn published_a(self) -> u32 {
        match self {
            Stage::First | Stage::Third => 36,
            Stage::Second => 22,
        }
    }

    fn shift_exponents(self, case: &StageCase) -> Option<Vec<u32>> {
        match self {
            Stage::First => None,
            Stage::Second => Some(vec![case.k?]),
            Stage::Third => Some(vec![case.k?, case.s?]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageCase {
    pub d: u8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<u32>,
}

impl StageCase {
    pub fn first(d: u8) -> Self {
        StageCase { d, k: None, s: None }
    }

    pub fn second(d: u8, k: u32) -> Self {
        StageCase { d, k: Some(k), s: None }
    }

    pub fn third(d: u8, k: u32, s: u32) -> Self {
        StageCase {
            d,
            k: Some(k),
            s: Some(s),
        }
    }
}

/// A non-positive `epsilon` explained by an integral `mu` and closed by Legendre's criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionRecord {
    pub case: StageCase,
    pub epsilon: DecimalEnclosure,
    /// The integer `mu` equals.
    pub mu_integer: i64,
    pub resolution: HomogeneousBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonRecord {
    pub case: StageCase,
    pub epsilon: DecimalEnclosure,
    pub q_index: usize,
}

impl EpsilonRecord {
    pub fn value(&self) -> f64 {
        self.epsilon.to_f64()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageReport {
    pub stage: Stage,
    pub a_coeff: u32,
    pub cases: u64,
    /// Largest `w` over cases with a certified positive `epsilon`.
    pub main_bound: u32,
    pub main_argmax: StageCase,
    /// Smallest positive `epsilon` at the first convergent with `q > 6M`.
    pub min_epsilon_primary: Option<EpsilonRecord>,
    /// Smallest `epsilon` actually used, over all convergents.
    pub min_epsilon_used: Option<EpsilonRecord>,
    /// Number of cases settled at each convergent index.
    pub settled_at: BTreeMap<usize, u64>,
    pub exceptions: Vec<ExceptionRecord>,
    /// `max(main_bound, exception bounds)`.
    pub combined_bound: u32,
}

impl StageReport {
    /// Bound after adding back the gaps excluded by the technical assumption.
    pub fn reported_bound(&self) -> u32 {
        self.combined_bound.max(TECHNICAL_GAP)
    }
}

#[derive(Debug, Clone, Default)]
struct SweepAcc {
    cases: u64,
    max_w: Option<(u32, StageCase)>,
    min_primary: Option<(Ball, StageCase, usize)>,
    min_used: Option<(Ball, StageCase, usize)>,
    settled_at: BTreeMap<usize, u64>,
    exceptions: Vec<(StageCase, Ball, Ball)>,
}

fn prefer_max(a: Option<(u32, StageCase)>, b: Option<(u32, StageCase)>) -> Option<(u32, StageCase)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn prefer_min(
    a: Option<(Ball, StageCase, usize)>,
    b: Option<(Ball, StageCase, usize)>,
) -> Option<(Ball, StageCase, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => {
            let y_wins = y.0.mid() < x.0.mid() || (y.0.mid() == x.0.mid() && y.1 < x.1);
            Some(if y_wins { y } else { x })
        }
        (x, None) => x,
        (None, y) => y,
    }
}

impl SweepAcc {
    fn merge(mut self, other: SweepAcc) -> SweepAcc {
        self.cases += other.cases;
        self.max_w = prefer_max(self.max_w, other.max_w);
        self.min_primary = prefer_min(self.min_primary, other.min_primary);
        self.min_used = prefer_min(self.min_used, other.min_used);
        for (k, v) in other.settled_at {
            *self.settled_at.entry(k).or_default() += v;
        }
        self.exceptions.extend(other.exceptions);
        self
    }

    fn record(&mut self, setup: &ReductionSetup, stage: Stage, case: StageCase) {
        let mu = setup.mu(stage, &case);
        let a = Ball::from_i64(setup.a_coeff(stage) as i64, 128);
        let outcome = setup.engine.reduce(&mu, &a, &setup.log_alpha);
        self.cases += 1;
        match outcome.status {
            ReductionStatus::Bounded => {
                let w = outcome.w_bound.expect("bounded outcome has a bound");
                self.max_w = prefer_max(self.max_w.take(), Some((w, case)));
                *self.settled_at.entry(outcome.q_index).or_default() += 1;
                if outcome.q_index == setup.engine.first_index() {
                    self.min_primary = prefer_min(
                        self.min_primary.take(),
                        Some((outcome.epsilon.clone(), case, outcome.q_index)),
                    );
                }
                self.min_used = prefer_min(self.min_used.take(), Some((outcome.epsilon, case, outcome.q_index)));
            }
            ReductionStatus::EpsilonNonpositive => self.exceptions.push((case, mu, outcome.epsilon)),
        }
    }
}

fn enclose(b: &Ball) -> DecimalEnclosure {
    DecimalEnclosure::from_ball(b, ENCLOSURE_DIGITS)
}

/// Runs the engine over `cases`, resolving every non-positive `epsilon` or failing.
pub fn run_sweep(setup: &ReductionSetup, stage: Stage, cases: &[StageCase]) -> Result<StageReport> {
    let acc = cases
        .par_iter()
        .fold(SweepAcc::default, |mut acc, case| {
            acc.record(setup, stage, *case);
            acc
        })
        .reduce(SweepAcc::default, SweepAcc::merge);

    let mut raw_exceptions = acc.exceptions;
    raw_exceptions.sort_by_key(|e| e.0);
    let rhs = setup.rhs_constant(stage);
    let mut exceptions = Vec::with_capacity(raw_exceptions.len());
    for (case, mu, eps) in raw_exceptions {
        let Some(m) = mu.integer_inside() else {
            return Err(Error::UnresolvedException(format!(
                "{stage:?} case {case:?}: epsilon <= 0 at every convergent and mu = {} is not integral",
                mu.to_decimal(20)
            )));
        };
        let resolution = homogeneous_reduce(&setup.expansion, setup.engine.modulus(), &rhs, &setup.log_alpha)?;
        exceptions.push(ExceptionRecord {
            case,
            epsilon: enclose(&eps),
            mu_integer: m.to_i64().expect("small integer"),
            resolution,
        });
    }

    let (main_bound, main_argmax) = acc
        .max_w
        .unwrap_or((0, cases.first().copied().unwrap_or(StageCase::first(1))));
    let combined_bound = exceptions.iter().map(|e| e.resolution.bound).fold(main_bound, u32::max);
    let record = |m: Option<(Ball, StageCase, usize)>| {
        m.map(|(eps, case, q_index)| EpsilonRecord {
            case,
            epsilon: enclose(&eps),
            q_index,
        })
    };
    Ok(StageReport {
        stage,
        a_coeff: setup.a_coeff(stage),
        cases: acc.cases,
        main_bound,
        main_argmax,
        min_epsilon_primary: record(acc.min_primary),
        min_epsilon_used: record(acc.min_used),
        settled_at: acc.settled_at,
        exceptions,
        combined_bound,
    })
}

pub fn stage1(setup: &ReductionSetup) -> Result<StageReport> {
    let cases: Vec<StageCase> = (1..=9).map(StageCase::first).collect();
    run_sweep(setup, Stage::First, &cases)
}

/// Sweeps `k = n1 - n2` over `0..=first_gap_max`.
pub fn stage2(setup: &ReductionSetup, first_gap_max: u32) -> Result<StageReport> {
    let cases: Vec<StageCase> = (0..=first_gap_max)
        .flat_map(|k| (1..=9).map(move |d| StageCase::second(d, k)))
        .collect();
    run_sweep(setup, Stage::Second, &cases)
}

/// All `(k, s) = (n1 - n3, n2 - n3)` with `s <= second_gap_max` and `0 <= k - s <= first_gap_max`.
pub fn stage3_cases(first_gap_max: u32, second_gap_max: u32) -> Vec<StageCase> {
    (0..=second_gap_max)
        .flat_map(|s| (s..=s + first_gap_max).map(move |k| (k, s)))
        .flat_map(|(k, s)| (1..=9).map(move |d| StageCase::third(d, k, s)))
        .collect()
}

pub fn stage3(setup: &ReductionSetup, first_gap_max: u32, second_gap_max: u32) -> Result<StageReport> {
    run_sweep(setup, Stage::Third, &stage3_cases(first_gap_max, second_gap_max))
}

/// Checks `1/alpha^e = (3 alpha^2 - 1) / (alpha (alpha + 1)(alpha^11 + 1))` to the context tolerance.
pub fn verify_kap_identity(sys: &BinetSystem, exponent: u32) -> bool {
    let prec = sys.prec();
    let alpha = &sys.roots.alpha;
    let one = Ball::one(prec);
    let lhs = sys.roots.alpha_pow(-(exponent as i64));
    let rhs = alpha
        .sqr()
        .mul_i64(3)
        .sub(&one)
        .div(&alpha.mul(&alpha.add(&one)).mul(&alpha.pow_u(11).add(&one)));
    let tol = sys.roots.context().tolerance();
    lhs.sub(&rhs).abs().lt(&tol)
}

/// `mu_{9,11}` from the second-stage formula.
pub fn exceptional_mu(setup: &ReductionSetup) -> Ball {
    setup.mu(Stage::Second, &StageCase::second(9, 11))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergentSummary {
    pub index: usize,
    #[serde(with = "integer_string")]
    pub p: Integer,
    #[serde(with = "integer_string")]
    pub q: Integer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionCertificate {
    #[serde(with = "integer_string")]
    pub modulus: Integer,
    pub precision_digits: u32,
    /// First convergent with `q > 6M`.
    pub convergent: ConvergentSummary,
    /// `a(M)`: largest partial quotient up to the first `q > M`.
    #[serde(with = "integer_string")]
    pub max_quotient: Integer,
    pub stage1: StageReport,
    pub stage2: StageReport,
    pub stage3: StageReport,
    /// Bounds on `n1 - n2`, `n2 - n3` and the largest exponent, after the technical assumption.
    pub stage1_bound: u32,
    pub stage2_bound: u32,
    pub stage3_bound: u32,
    /// `stage3_bound + 1`: the dominant exponent trails the index by one.
    pub largest_index_bound: u32,
    pub search_threshold: u32,
    pub contradiction: bool,
}

pub fn run_full_reduction(ctx: &PrecisionContext, modulus: &Integer) -> Result<ReductionCertificate> {
    let setup = ReductionSetup::new(ctx, modulus)?;
    run_reduction_with(&setup)
}

pub fn run_reduction_with(setup: &ReductionSetup) -> Result<ReductionCertificate> {
    let s1 = stage1(setup)?;
    let b1 = s1.reported_bound();
    let s2 = stage2(setup, b1)?;
    let b2 = s2.reported_bound();
    let s3 = stage3(setup, b1, b2)?;
    let b3 = s3.reported_bound();
    let index = setup.engine.first_index();
    let (p, q) = setup.expansion.convergents()[index].clone();
    let legendre = legendre_irrationality_bound(&setup.expansion, setup.engine.modulus())?;
    let largest_index_bound = b3 + 1;
    Ok(ReductionCertificate {
        modulus: setup.engine.modulus().clone(),
        precision_digits: setup.context.decimal_digits(),
        convergent: ConvergentSummary { index, p, q },
        max_quotient: legendre.max_quotient,
        stage1: s1,
        stage2: s2,
        stage3: s3,
        stage1_bound: b1,
        stage2_bound: b2,
        stage3_bound: b3,
        largest_index_bound,
        search_threshold: SEARCH_LIMIT,
        contradiction: largest_index_bound <= SEARCH_LIMIT,
    })
}
