mod common;

use common::{nontrivial_word, w};
use proptest::prelude::*;
use relfree_core::factorization::{
    extend_automorphism, free_factor_certificate, is_primitive_with, triangular_solve,
    BasisCertificate, FreeFactorOutcome, MoveAction, PrimitivityVerdict, WhiteheadConfig,
    WhiteheadMove, WitnessRecipe,
};
use relfree_core::stallings::fold;
use relfree_core::varieties::abelianize;
use relfree_core::{GeneratorMap, Letter, Sign, Word};

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Pos), Just(Sign::Neg)]
}

fn recipe() -> impl Strategy<Value = WitnessRecipe> {
    (1u32..=3, 1u32..=3, sign()).prop_flat_map(|(k, h, s)| {
        prop::collection::vec((1..=h, sign()), 0..=6).prop_map(move |letters| {
            let coding = Word::from_letters(letters.into_iter().map(|(i, sg)| Letter::new(i, sg)));
            WitnessRecipe::new(k, h, coding, s).unwrap()
        })
    })
}

fn whitehead_move(rank: u32) -> impl Strategy<Value = WhiteheadMove> {
    let action = prop_oneof![
        Just(MoveAction::Fix),
        Just(MoveAction::Right),
        Just(MoveAction::Left),
        Just(MoveAction::Conjugate),
    ];
    (0..rank, sign(), prop::collection::vec(action, rank as usize)).prop_map(
        |(index, s, actions)| WhiteheadMove {
            multiplier: Letter::new(index, s),
            actions,
        },
    )
}

/// A product of up to three Whitehead moves, with its inverse.
fn automorphism(rank: u32) -> impl Strategy<Value = (GeneratorMap, GeneratorMap)> {
    prop::collection::vec(whitehead_move(rank), 1..=3).prop_map(|moves| {
        let mut forward = GeneratorMap::identity();
        let mut backward = GeneratorMap::identity();
        for m in moves {
            forward = GeneratorMap::compose(&m.to_map(), &forward);
            backward = GeneratorMap::compose(&backward, &m.inverse().to_map());
        }
        (forward, backward)
    })
}

fn primitive(word: &Word, rank: u32) -> PrimitivityVerdict {
    is_primitive_with(word, rank, &WhiteheadConfig::default()).unwrap()
}

fn check_positive(word: &Word, rank: u32, verdict: &PrimitivityVerdict) {
    if let PrimitivityVerdict::Primitive { basis, .. } = verdict {
        assert_eq!(abelianize(word).content(), 1);
        assert!(basis.contains(word));
        let graph = fold(basis);
        assert_eq!(basis.len(), rank as usize);
        assert_eq!(graph.rank(), rank as usize);
        assert!((0..rank).all(|i| graph.contains(&Word::generator(i))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangular_solve_certifies(r in recipe(), n in 0u32..=8) {
        let cert = triangular_solve(&r, n);
        prop_assert_eq!(cert.ambient_rank, r.k() * n + r.h() + 1);
        prop_assert_eq!(cert.verify(), Ok(()));
        prop_assert_eq!(cert.check_extends(&r.family(n)), Ok(()));
    }

    #[test]
    fn free_factor_recognises_families(r in recipe(), n in 0u32..=5) {
        let family = r.family(n);
        let outcome = free_factor_certificate(&family, r.ambient_rank(n)).unwrap();
        let FreeFactorOutcome::Certified { certificate } = outcome else {
            return Err(TestCaseError::fail("witness family refused"));
        };
        prop_assert_eq!(certificate.verify(), Ok(()));
        prop_assert_eq!(certificate.check_extends(&family), Ok(()));
    }

    #[test]
    fn certificates_round_trip_through_json(r in recipe(), n in 0u32..=4) {
        let cert = triangular_solve(&r, n);
        let json = serde_json::to_string(&cert).unwrap();
        let back: BasisCertificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, cert);
    }

    #[test]
    fn primitivity_is_invariant(word in nontrivial_word(3, 8), (f, _) in automorphism(3)) {
        let image = f.apply(&word);
        let before = primitive(&word, 3);
        let after = primitive(&image, 3);
        prop_assert_eq!(before.is_primitive(), after.is_primitive());
        check_positive(&word, 3, &before);
        check_positive(&image, 3, &after);
    }

    #[test]
    fn images_of_generators_are_primitive((f, _) in automorphism(3), i in 0u32..3) {
        let image = f.apply(&Word::generator(i));
        let verdict = primitive(&image, 3);
        prop_assert!(verdict.is_primitive());
        check_positive(&image, 3, &verdict);
    }

    #[test]
    fn extensions_are_invertible((f, g) in automorphism(3)) {
        let ext = extend_automorphism(&f, 3, Some(&g)).unwrap();
        prop_assert_eq!(&ext, &extend_automorphism(&f, 3, None).unwrap());
        let ext_inv = extend_automorphism(&g, 3, None).unwrap();
        for i in 0..6 {
            prop_assert_eq!(
                GeneratorMap::compose(&ext, &ext_inv).image(i),
                Word::generator(i)
            );
        }
    }
}

#[test]
fn commutator_family_in_rank_two_is_not_primitive() {
    assert!(!primitive(&w("[x0, x1]"), 2).is_primitive());
    assert!(!primitive(&w("x0^2"), 2).is_primitive());
    assert!(primitive(&w("x0 x1^-2"), 2).is_primitive());
}
