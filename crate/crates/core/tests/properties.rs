use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tilting_core::bigq::{tilting_dim, tilting_mult, tilting_mult_table, MultiplicityTable};
use tilting_core::classical::classical_mult;
use tilting_core::markov::{iterate, transition_kernel, Model};
use tilting_core::paths::{count_paths, StepKind, StepSet};
use tilting_core::smallq::{
    small_dim, small_mult_closed_table, small_mult_from_big, SmallMultiplicityTable,
};
use tilting_core::Level;

fn odd_level() -> impl Strategy<Value = Level> {
    (1i64..6).prop_map(|h| Level::new(2 * h + 1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplicities_vanish_off_parity(l in odd_level(), n in 0usize..60, k in 0usize..70) {
        let m = tilting_mult(l, n, k);
        if k > n || (n - k) % 2 == 1 {
            prop_assert!(m.is_zero());
        } else {
            prop_assert!(m >= BigInt::zero());
        }
    }

    #[test]
    fn multiplicities_bounded_by_classical(l in odd_level(), n in 0usize..60, k in 0usize..60) {
        prop_assert!(tilting_mult(l, n, k) <= classical_mult(n, k as i64));
    }

    #[test]
    fn top_weight_has_multiplicity_one(l in odd_level(), n in 0usize..80) {
        prop_assert_eq!(tilting_mult(l, n, n), BigInt::one());
    }

    #[test]
    fn closed_form_matches_paths(l in odd_level(), n in 0usize..40, k in 0usize..40) {
        let paths = count_paths(&StepSet::new(l, StepKind::Big), n, 0, k).unwrap();
        prop_assert_eq!(tilting_mult(l, n, k), paths);
    }

    #[test]
    fn dimensions_sum_to_power_of_two(l in odd_level(), n in 0usize..80) {
        let table = tilting_mult_table(l, n);
        let big: BigInt = table.entries.iter().map(|(k, m)| m * tilting_dim(l, *k)).sum();
        let small = small_mult_from_big(l, n);
        let small_sum: BigInt = small.entries.iter().map(|(i, m)| m * small_dim(l, *i)).sum();
        prop_assert_eq!(&big, &(BigInt::one() << n));
        prop_assert_eq!(&small_sum, &(BigInt::one() << n));
    }

    #[test]
    fn small_closed_form_matches_restriction(l in odd_level(), n in 0usize..50) {
        prop_assert_eq!(small_mult_closed_table(l, n), small_mult_from_big(l, n));
    }

    #[test]
    fn json_round_trip(l in odd_level(), n in 0usize..40) {
        let table = tilting_mult_table(l, n);
        prop_assert_eq!(MultiplicityTable::from_json(&table.to_json()).unwrap(), table);
        let small = small_mult_from_big(l, n);
        prop_assert_eq!(SmallMultiplicityTable::from_json(&small.to_json()).unwrap(), small);
    }

    #[test]
    fn markov_rows_preserve_mass(l in odd_level(), n in 0usize..20) {
        let kernel = transition_kernel(Model::SmallPlancherel, l, None).unwrap();
        let m = iterate(&kernel, &tilting_core::Measure::delta(0), n).unwrap();
        prop_assert_eq!(m.exact_total(), Some(num_rational::BigRational::one()));
    }
}
