use proptest::prelude::*;

use shuffle_cumulants::algebra::{bar_words_up_to, BarWord, LinComb, Word};
use shuffle_cumulants::hopf::*;

fn bar_word() -> impl Strategy<Value = BarWord> {
    prop::collection::vec(prop::collection::vec(0u8..3, 1..=3), 0..=3).prop_map(|factors| {
        BarWord::new(factors.into_iter().map(|f| Word::from_indices(&f)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coproduct_is_multiplicative(u in bar_word(), v in bar_word()) {
        prop_assume!(u.degree() + v.degree() <= 7);
        prop_assert_eq!(coproduct(&u.concat(&v)), multiply(&coproduct(&u), &coproduct(&v)));
    }

    #[test]
    fn left_half_is_multiplicative_on_the_right(u in bar_word(), v in bar_word()) {
        prop_assume!(!u.is_unit() && u.degree() + v.degree() <= 7);
        let uv = u.concat(&v);
        prop_assert_eq!(coproduct_left(&uv).unwrap(), multiply(&coproduct_left(&u).unwrap(), &coproduct(&v)));
        prop_assert_eq!(coproduct_right(&uv).unwrap(), multiply(&coproduct_right(&u).unwrap(), &coproduct(&v)));
    }

    #[test]
    fn coproduct_preserves_degree(u in bar_word()) {
        for ((l, r), _) in coproduct(&u).iter() {
            prop_assert_eq!(l.degree() + r.degree(), u.degree());
        }
    }
}

#[test]
fn halves_split_the_coproduct_up_to_degree_five() {
    for u in bar_words_up_to(2, 5).into_iter().filter(|u| !u.is_unit()) {
        let sum = coproduct_left(&u).unwrap().add(&coproduct_right(&u).unwrap());
        assert_eq!(sum, coproduct(&u), "{u}");
    }
}

#[test]
fn counit_sides() {
    for u in bar_words_up_to(2, 4) {
        let mut left = LinComb::new();
        let mut right = LinComb::new();
        for ((l, r), c) in coproduct(&u).iter() {
            if l.is_unit() {
                left.add_term(r.clone(), c.clone());
            }
            if r.is_unit() {
                right.add_term(l.clone(), c.clone());
            }
        }
        let id = LinComb::singleton(u.clone(), num_traits::One::one());
        assert_eq!(left, id);
        assert_eq!(right, id);
    }
}
