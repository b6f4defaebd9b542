mod common;

use common::{generator_map, raw_letters, word};
use proptest::prelude::*;
use relfree_core::{apply_hom, compose_hom, reduce, Letter, Word};

/// Cancels the rightmost adjacent inverse pair until none is left.
fn reduce_from_the_right(mut letters: Vec<Letter>) -> Vec<Letter> {
    loop {
        let hit = (1..letters.len()).rev().find(|&i| letters[i - 1].cancels(letters[i]));
        match hit {
            Some(i) => {
                letters.drain(i - 1..=i);
            }
            None => return letters,
        }
    }
}

fn is_reduced(w: &Word) -> bool {
    w.letters().windows(2).all(|p| !p[0].cancels(p[1]))
}

proptest! {
    #[test]
    fn reduction_is_confluent(letters in raw_letters(4, 40)) {
        let fast = reduce(letters.clone());
        prop_assert!(is_reduced(&fast));
        prop_assert!(fast.len() <= letters.len());
        let slow = reduce_from_the_right(letters);
        prop_assert_eq!(fast.letters(), slow.as_slice());
    }

    #[test]
    fn reduction_is_idempotent(letters in raw_letters(4, 40)) {
        let once = reduce(letters);
        prop_assert_eq!(reduce(once.letters().iter().copied()), once);
    }

    #[test]
    fn text_round_trip(w in word(6, 30)) {
        prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn group_laws(a in word(4, 20), b in word(4, 20), c in word(4, 20)) {
        prop_assert!(a.product(&a.inverse()).is_identity());
        prop_assert_eq!(a.product(&b).product(&c), a.product(&b.product(&c)));
        prop_assert_eq!(a.product(&b).inverse(), b.inverse().product(&a.inverse()));
    }

    #[test]
    fn cyclic_decomposition_recomposes(w in word(4, 30)) {
        let (u, c) = w.cyclic_decomposition();
        prop_assert_eq!(c.conjugate_by(&u), w);
        if c.len() >= 2 {
            let first = c.letters()[0];
            let last = *c.letters().last().unwrap();
            prop_assert!(!first.cancels(last));
        }
    }

    #[test]
    fn hom_is_multiplicative(f in generator_map(4, 6), u in word(4, 20), v in word(4, 20)) {
        let lhs = apply_hom(&f, &u.product(&v));
        let rhs = apply_hom(&f, &u).product(&apply_hom(&f, &v));
        prop_assert!(is_reduced(&lhs));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(apply_hom(&f, &u.inverse()), apply_hom(&f, &u).inverse());
    }

    #[test]
    fn composition_matches_sequential_application(
        f in generator_map(4, 5),
        g in generator_map(4, 5),
        w in word(5, 15),
    ) {
        let fg = compose_hom(&f, &g);
        prop_assert_eq!(apply_hom(&fg, &w), apply_hom(&f, &apply_hom(&g, &w)));
    }

    #[test]
    fn map_text_round_trip(f in generator_map(5, 6)) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<relfree_core::GeneratorMap>().unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<relfree_core::GeneratorMap>(&json).unwrap(), f);
    }
}
