use num_traits::Zero;
use proptest::prelude::*;

use shuffle_cumulants::algebra::scalar::frac;
use shuffle_cumulants::algebra::{Word, WordTable};
use shuffle_cumulants::hopf::iterated_reduced_left_positions;
use shuffle_cumulants::partitions::*;

const CATALAN: [usize; 10] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];

#[test]
fn nc_counts_match_filtered_bell_enumeration() {
    for n in 1..=8 {
        let all = enumerate_all(n).unwrap();
        let mut filtered: Vec<SetPartition> = all.iter().filter(|p| p.is_noncrossing()).cloned().collect();
        filtered.sort();
        assert_eq!(enumerate_nc(n).unwrap(), filtered, "n = {n}");
        assert_eq!(filtered.len(), CATALAN[n]);

        let mut irr: Vec<SetPartition> = filtered.iter().filter(|p| p.is_irreducible()).cloned().collect();
        irr.sort();
        assert_eq!(enumerate_irreducible_nc(n).unwrap(), irr, "n = {n}");
        assert_eq!(irr.len(), CATALAN[n - 1]);

        let mut interval: Vec<SetPartition> = all.into_iter().filter(|p| p.is_interval()).collect();
        interval.sort();
        assert_eq!(enumerate_interval(n).unwrap(), interval);
        assert_eq!(interval.len(), 1 << (n - 1));
    }
}

#[test]
fn hook_formula_matches_listed_labellings() {
    for n in 1..=7 {
        for p in enumerate_nc(n).unwrap() {
            let listed = p.monotone_labellings().unwrap().len() as u64;
            let s: u64 = (1..=p.block_count() as u64).product();
            assert_eq!(listed * p.tree_factorial().unwrap(), s, "{p}");
            assert_eq!(p.monotone_labelling_count().unwrap(), listed, "{p}");
        }
    }
}

#[test]
fn monotone_partitions_match_iterated_coproduct_terms() {
    for n in 1..=6 {
        for q in 1..=n {
            let mut terms = iterated_reduced_left_positions(n, q).unwrap();
            let mut labelled: Vec<_> = enumerate_monotone(n, q).unwrap().iter().map(|m| m.labelled_blocks()).collect();
            terms.sort();
            labelled.sort();
            assert_eq!(terms, labelled, "n = {n}, q = {q}");
        }
    }
}

#[test]
fn last_labelled_block_is_an_interval() {
    for n in 1..=6 {
        for q in 1..=n {
            for m in enumerate_monotone(n, q).unwrap() {
                let last = m.labelled_blocks().pop().unwrap();
                assert_eq!(last.last().unwrap() - last[0] + 1, last.len(), "{m}");
            }
        }
    }
}

fn table_strategy(generators: usize, degree: usize) -> impl Strategy<Value = WordTable> {
    let count: usize = (1..=degree).map(|d| generators.pow(d as u32)).sum();
    prop::collection::vec((-20i64..=20, 1i64..=6), count).prop_map(move |vals| {
        let mut it = vals.into_iter();
        WordTable::from_fn(generators, degree, |_| {
            let (p, q) = it.next().unwrap();
            frac(p, q)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn labelled_and_tree_factorial_sums_agree(t in table_strategy(2, 5)) {
        let mut sums = PartitionSums::new();
        for w in shuffle_cumulants::algebra::words_up_to(2, 5) {
            let a = sums.sum(&t, &w, Family::Monotone, Weight::One).unwrap();
            let b = sums.sum(&t, &w, Family::Nc, Weight::InverseTreeFactorial).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn sums_are_multilinear_in_a_single_block_value(t in table_strategy(1, 5)) {
        // with only the top value nonzero, every family returns it unchanged
        let w = Word::power(5);
        let top = t.get(&w).unwrap().clone();
        let only_top = WordTable::from_fn(1, 5, |v| if v.degree() == 5 { top.clone() } else { Zero::zero() });
        for family in [Family::Nc, Family::IrreducibleNc, Family::Interval, Family::Monotone] {
            prop_assert_eq!(&partition_sum(&only_top, &w, family, Weight::One).unwrap(), &top);
        }
    }

    #[test]
    fn display_parses_back(n in 1usize..=7, pick in any::<prop::sample::Index>()) {
        let all = enumerate_nc(n).unwrap();
        let p = &all[pick.index(all.len())];
        prop_assert_eq!(&SetPartition::parse(&p.to_string()).unwrap(), p);
    }
}
