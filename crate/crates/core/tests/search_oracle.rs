use padovan_core::search::{
    ell_window, enumerate_solutions, enumerate_solutions_in_order, naive_enumeration, verify_solution, KNOWN_VALUES,
    SEARCH_LENGTH_LIMIT, SEARCH_LIMIT,
};
use proptest::prelude::*;
use rug::Integer;

#[test]
fn default_search_finds_exactly_the_known_values() {
    let set = enumerate_solutions(SEARCH_LIMIT, SEARCH_LENGTH_LIMIT).unwrap();
    assert!(set.matches_known_values(), "{:?}", set.values());
    assert!(!set.values().contains(&Integer::from(777)));
    assert!(!set.values().contains(&Integer::from(999)));
    assert!(set.solutions().all(verify_solution));
    assert_eq!(set.values().len(), KNOWN_VALUES.len());
}

#[test]
fn largest_value_has_a_representation() {
    let set = enumerate_solutions(SEARCH_LIMIT, SEARCH_LENGTH_LIMIT).unwrap();
    let reps = set.representations(&Integer::from(7777));
    assert!(!reps.is_empty());
    for r in reps {
        assert!(r.n1 >= r.n2 && r.n2 >= r.n3);
    }
}

#[test]
fn pruned_search_equals_naive_oracle_up_to_60() {
    for n_max in 5..=60 {
        let fast = enumerate_solutions(n_max, 20).unwrap();
        let slow = naive_enumeration(n_max, 20).unwrap();
        assert_eq!(fast, slow, "n_max = {n_max}");
    }
}

#[test]
fn search_length_limit_covers_the_growth_window() {
    let (_, hi) = ell_window(SEARCH_LIMIT);
    assert!(hi <= 2 * SEARCH_LENGTH_LIMIT as i64);
    let sound_hi = padovan_core::search::growth_ell_window(SEARCH_LIMIT).1;
    assert!(sound_hi <= SEARCH_LENGTH_LIMIT as i64, "{sound_hi}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_agreement_for_random_bounds(n_max in 5u32..=60, l_max in 2u32..=15) {
        prop_assert_eq!(enumerate_solutions(n_max, l_max).unwrap(), naive_enumeration(n_max, l_max).unwrap());
    }

    #[test]
    fn visiting_order_does_not_matter(order in (5u32..=150).prop_flat_map(|n| Just((0..=n).collect::<Vec<u32>>()).prop_shuffle())) {
        let n_max = order.len() as u32 - 1;
        let shuffled = enumerate_solutions_in_order(n_max, 40, order).unwrap();
        prop_assert_eq!(shuffled, enumerate_solutions(n_max, 40).unwrap());
    }
}
