//! Exhaustive search for `P_{n1} + P_{n2} + P_{n3} = d (10^l - 1) / 9`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::decimal::integer_string;
use crate::error::{Error, Result};
use crate::numerics::{solve_plastic_cubic, Ball, PrecisionContext};
use crate::padovan::{canonical_index, is_canonical_index, padovan, padovan_table};
use crate::repdigit::{classify_repdigit, make_repdigit};

/// Indices up to this value are covered by exhaustive search; the reduction must land below it.
pub const SEARCH_LIMIT: u32 = 500;
/// Repdigit lengths searched alongside [`SEARCH_LIMIT`].
pub const SEARCH_LENGTH_LIMIT: u32 = 100;

/// The repdigits that are sums of three Padovan numbers.
pub const KNOWN_VALUES: [u32; 19] = [
    11, 22, 33, 44, 55, 66, 77, 88, 99, 111, 222, 333, 444, 555, 666, 888, 1111, 3333, 7777,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    #[serde(with = "integer_string")]
    pub value: Integer,
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub digit: u8,
    pub length: u32,
}

impl Solution {
    pub fn indices(&self) -> [u32; 3] {
        [self.n1, self.n2, self.n3]
    }
}

/// Recomputes both sides exactly and checks the ordering and index conventions.
pub fn verify_solution(s: &Solution) -> bool {
    let ordered = s.n1 >= s.n2 && s.n2 >= s.n3;
    let canonical = s.indices().iter().all(|&n| is_canonical_index(n));
    if !ordered || !canonical || s.length < 2 {
        return false;
    }
    let Ok(rep) = make_repdigit(s.digit as u32, s.length) else {
        return false;
    };
    let sum = padovan(s.n1) + padovan(s.n2) + padovan(s.n3);
    sum == s.value && *rep.value() == s.value
}

/// All solutions found under the given search bounds, grouped by value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RepresentationRecord", into = "RepresentationRecord")]
pub struct RepresentationSet {
    n_max: u32,
    l_max: u32,
    by_value: BTreeMap<Integer, Vec<Solution>>,
}

impl RepresentationSet {
    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn is_empty(&self) -> bool {
        self.by_value.is_empty()
    }

    /// Distinct values, ascending.
    pub fn values(&self) -> Vec<Integer> {
        self.by_value.keys().cloned().collect()
    }

    pub fn representations(&self, value: &Integer) -> &[Solution] {
        self.by_value.get(value).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn solutions(&self) -> impl Iterator<Item = &Solution> {
        self.by_value.values().flatten()
    }

    pub fn len_solutions(&self) -> usize {
        self.by_value.values().map(Vec::len).sum()
    }

    pub fn contains(&self, s: &Solution) -> bool {
        self.representations(&s.value).contains(s)
    }

    /// Whether the values are exactly the 19 known repdigits.
    pub fn matches_known_values(&self) -> bool {
        let expected: Vec<Integer> = KNOWN_VALUES.iter().map(|&v| Integer::from(v)).collect();
        self.values() == expected
    }

    fn from_solutions(n_max: u32, l_max: u32, solutions: impl IntoIterator<Item = Solution>) -> Self {
        let mut by_value: BTreeMap<Integer, Vec<Solution>> = BTreeMap::new();
        for s in solutions {
            by_value.entry(s.value.clone()).or_default().push(s);
        }
        for list in by_value.values_mut() {
            list.sort_by_key(|s| std::cmp::Reverse(s.indices()));
            list.dedup();
        }
        RepresentationSet { n_max, l_max, by_value }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepresentationRecord {
    n_max: u32,
    l_max: u32,
    values: Vec<ValueRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueRecord {
    #[serde(with = "integer_string")]
    value: Integer,
    digit: u8,
    length: u32,
    /// `[n1, n2, n3]` triples, descending.
    representations: Vec<[u32; 3]>,
}

impl From<RepresentationSet> for RepresentationRecord {
    fn from(set: RepresentationSet) -> Self {
        let values = set
            .by_value
            .into_iter()
            .map(|(value, sols)| ValueRecord {
                digit: sols[0].digit,
                length: sols[0].length,
                representations: sols.iter().map(Solution::indices).collect(),
                value,
            })
            .collect();
        RepresentationRecord {
            n_max: set.n_max,
            l_max: set.l_max,
            values,
        }
    }
}

impl TryFrom<RepresentationRecord> for RepresentationSet {
    type Error = String;

    fn try_from(r: RepresentationRecord) -> std::result::Result<Self, String> {
        let mut sols = Vec::new();
        for v in r.values {
            if v.representations.is_empty() {
                return Err(format!("value {} lists no representations", v.value));
            }
            for [n1, n2, n3] in v.representations {
                let s = Solution {
                    value: v.value.clone(),
                    n1,
                    n2,
                    n3,
                    digit: v.digit,
                    length: v.length,
                };
                if !verify_solution(&s) {
                    return Err(format!("({}, {n1}, {n2}, {n3}) is not a solution", v.value));
                }
                if n1 > r.n_max || v.length > r.l_max {
                    return Err(format!(
                        "({}, {n1}, {n2}, {n3}) lies outside the search bounds",
                        v.value
                    ));
                }
                sols.push(s);
            }
        }
        Ok(RepresentationSet::from_solutions(r.n_max, r.l_max, sols))
    }
}

/// Certified enclosure of `log alpha / log 10` as f64 endpoints.
fn log_ratio_bounds() -> (f64, f64) {
    static RATIO: OnceLock<(f64, f64)> = OnceLock::new();
    *RATIO.get_or_init(|| {
        let ctx = PrecisionContext::with_digits(60).expect("valid context");
        let roots = solve_plastic_cubic(&ctx).expect("roots at 60 digits");
        let ratio = roots.log_alpha().div(&Ball::from_i64(10, ctx.bits()).ln());
        let lo = ratio.lower().to_f64_round(rug::float::Round::Down);
        let hi = ratio.upper().to_f64_round(rug::float::Round::Up);
        (lo, hi)
    })
}

/// `log alpha / log 10`, approximately 0.122123.
pub fn log_ratio() -> f64 {
    let (lo, hi) = log_ratio_bounds();
    (lo + hi) / 2.0
}

/// Lengths forced by `alpha^(n1-3) <= P_{n1} <= N < 10^l` and `10^(l-1) <= N <= 3 P_{n1} < alpha^(n1+3)`.
pub fn growth_ell_window(n1: u32) -> (i64, i64) {
    // slack absorbs f64 rounding in the products below
    const SLACK: f64 = 1e-9;
    let (lo, hi) = log_ratio_bounds();
    let n1 = n1 as f64;
    let from_below = (n1 - 3.0) * lo - SLACK;
    let from_above = 1.0 + (n1 + 3.0) * hi + SLACK;
    (from_below.floor() as i64, from_above.ceil() as i64)
}

/// Lengths `l` that can occur together with largest index `n1`: the growth window,
/// widened to also cover `(n1-3)/5 < l < (n1+8)/5`.
pub fn ell_window(n1: u32) -> (i64, i64) {
    let (lo, hi) = growth_ell_window(n1);
    let envelope_lo = ((n1 as f64 - 3.0) / 5.0).floor() as i64;
    let envelope_hi = ((n1 as f64 + 8.0) / 5.0).ceil() as i64;
    (lo.min(envelope_lo), hi.max(envelope_hi))
}

struct SearchTables {
    values: Vec<Integer>,
    canonical: Vec<u32>,
    index_of: HashMap<Integer, u32>,
    /// `(value, digit, length)` sorted by value.
    repdigits: Vec<(Integer, u8, u32)>,
}

impl SearchTables {
    fn new(n_max: u32, l_max: u32) -> Self {
        let values = padovan_table(n_max);
        let canonical: Vec<u32> = (0..=n_max).filter(|&n| is_canonical_index(n)).collect();
        let index_of = canonical.iter().map(|&n| (values[n as usize].clone(), n)).collect();
        let mut repdigits = Vec::new();
        for length in 2..=l_max {
            for digit in 1..=9u32 {
                let r = make_repdigit(digit, length).expect("digit and length in range");
                repdigits.push((r.into_value(), digit as u8, length));
            }
        }
        repdigits.sort();
        SearchTables {
            values,
            canonical,
            index_of,
            repdigits,
        }
    }

    fn solutions_with_largest(&self, n1: u32, l_max: u32) -> Vec<Solution> {
        let (lo, hi) = ell_window(n1);
        let lo = lo.max(2) as u32;
        let hi = hi.min(l_max as i64);
        if hi < lo as i64 {
            return Vec::new();
        }
        let hi = hi as u32;
        let candidates: Vec<&(Integer, u8, u32)> = self
            .repdigits
            .iter()
            .filter(|(_, _, l)| (lo..=hi).contains(l))
            .collect();
        let p1 = &self.values[n1 as usize];
        let mut out = Vec::new();
        for &n2 in self.canonical.iter().take_while(|&&n| n <= n1) {
            let p2 = &self.values[n2 as usize];
            let partial = Integer::from(p1 + p2);
            let p2_cap = Integer::from(&partial + p2);
            for (value, digit, length) in candidates.iter().copied() {
                if *value < partial {
                    continue;
                }
                if *value > p2_cap {
                    break;
                }
                let rest = Integer::from(value - &partial);
                if let Some(&n3) = self.index_of.get(&rest) {
                    debug_assert!(n3 <= n2);
                    out.push(Solution {
                        value: value.clone(),
                        n1,
                        n2,
                        n3,
                        digit: *digit,
                        length: *length,
                    });
                }
            }
        }
        out
    }
}

fn check_bounds(n_max: u32, l_max: u32) -> Result<()> {
    if n_max < 5 {
        return Err(Error::domain(format!("n_max = {n_max} must be at least 5")));
    }
    if l_max < 2 {
        return Err(Error::domain(format!("l_max = {l_max} must be at least 2")));
    }
    Ok(())
}

/// Every solution with `n1 <= n_max` and `2 <= l <= l_max`, indices outside `{1, 2, 4}`.
///
/// The outer index runs in parallel; results are merged into a sorted map, so the
/// output does not depend on scheduling.
pub fn enumerate_solutions(n_max: u32, l_max: u32) -> Result<RepresentationSet> {
    check_bounds(n_max, l_max)?;
    let tables = SearchTables::new(n_max, l_max);
    let found: Vec<Solution> = tables
        .canonical
        .par_iter()
        .flat_map_iter(|&n1| tables.solutions_with_largest(n1, l_max))
        .collect();
    Ok(RepresentationSet::from_solutions(n_max, l_max, found))
}

/// Same as [`enumerate_solutions`], visiting the largest index in the given order.
pub fn enumerate_solutions_in_order(
    n_max: u32,
    l_max: u32,
    order: impl IntoIterator<Item = u32>,
) -> Result<RepresentationSet> {
    check_bounds(n_max, l_max)?;
    let tables = SearchTables::new(n_max, l_max);
    let found: Vec<Solution> = order
        .into_iter()
        .filter(|&n| n <= n_max && is_canonical_index(n))
        .flat_map(|n1| tables.solutions_with_largest(n1, l_max))
        .collect();
    Ok(RepresentationSet::from_solutions(n_max, l_max, found))
}

/// Plain triple loop over all indices with repdigit classification of each sum.
///
/// Shares no pruning with [`enumerate_solutions`]; aliases are collapsed afterwards.
pub fn naive_enumeration(n_max: u32, l_max: u32) -> Result<RepresentationSet> {
    check_bounds(n_max, l_max)?;
    let mut found = Vec::new();
    for n1 in 0..=n_max {
        for n2 in 0..=n1 {
            for n3 in 0..=n2 {
                let sum = padovan(n1) + padovan(n2) + padovan(n3);
                if let Some((digit, length)) = classify_repdigit(&sum) {
                    if length >= 2 && length <= l_max {
                        found.push(Solution {
                            value: sum,
                            n1: canonical_index(n1),
                            n2: canonical_index(n2),
                            n3: canonical_index(n3),
                            digit,
                            length,
                        });
                    }
                }
            }
        }
    }
    Ok(RepresentationSet::from_solutions(n_max, l_max, found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(value: u32, n1: u32, n2: u32, n3: u32, digit: u8, length: u32) -> Solution {
        Solution {
            value: Integer::from(value),
            n1,
            n2,
            n3,
            digit,
            length,
        }
    }

    #[test]
    fn window_examples() {
        let (lo, hi) = ell_window(500);
        assert!(lo <= 60 && hi >= 102, "window {lo}..{hi}");
        let (lo, _) = ell_window(3);
        assert!(lo <= 1);
        assert!((log_ratio() - 0.122123).abs() < 1e-6);
    }

    #[test]
    fn window_contains_every_length_that_occurs() {
        let set = naive_enumeration(60, 20).unwrap();
        for s in set.solutions() {
            let (lo, hi) = ell_window(s.n1);
            assert!(lo <= s.length as i64 && s.length as i64 <= hi, "{s:?}");
        }
    }

    #[test]
    fn verify_examples() {
        assert!(!verify_solution(&sol(111, 11, 10, 6, 1, 3)));
        assert!(verify_solution(&sol(11, 9, 6, 3, 1, 2)));
        assert!(!verify_solution(&sol(11, 9, 6, 1, 1, 2)));
        assert!(!verify_solution(&sol(11, 6, 9, 3, 1, 2)));
        assert!(!verify_solution(&sol(11, 9, 6, 3, 2, 2)));
    }

    #[test]
    fn small_range_still_reaches_eleven() {
        // 5 + 5 + 1 = 11 with indices (8, 8, 3)
        let set = enumerate_solutions(8, 2).unwrap();
        assert_eq!(set.values(), vec![Integer::from(11)]);
        assert!(set.contains(&sol(11, 8, 8, 3, 1, 2)));
        assert!(enumerate_solutions(6, 10).unwrap().is_empty());
        assert!(enumerate_solutions(4, 10).is_err());
        assert!(enumerate_solutions(10, 1).is_err());
    }

    #[test]
    fn production_matches_naive_oracle() {
        for n_max in [5, 8, 13, 30, 60] {
            let fast = enumerate_solutions(n_max, 30).unwrap();
            let slow = naive_enumeration(n_max, 30).unwrap();
            assert_eq!(fast, slow, "n_max = {n_max}");
        }
    }

    #[test]
    fn order_independence() {
        let fwd = enumerate_solutions_in_order(120, 30, 0..=120).unwrap();
        let rev = enumerate_solutions_in_order(120, 30, (0..=120).rev()).unwrap();
        let par = enumerate_solutions(120, 30).unwrap();
        assert_eq!(fwd, rev);
        assert_eq!(fwd, par);
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let set = enumerate_solutions(40, 10).unwrap();
        let json = serde_json::to_string(&set).unwrap();
        let back: RepresentationSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);
        let corrupted = json.replacen("\"11\"", "\"12\"", 1);
        assert!(serde_json::from_str::<RepresentationSet>(&corrupted).is_err());
    }
}
