#![allow(dead_code)]

use proptest::prelude::*;
use relfree_core::{GeneratorMap, Letter, Sign, Word};

pub fn letter(max_index: u32) -> impl Strategy<Value = Letter> {
    (0..max_index, any::<bool>()).prop_map(|(index, pos)| {
        Letter::new(index, if pos { Sign::Pos } else { Sign::Neg })
    })
}

/// Arbitrary, possibly unreduced, letter sequences.
pub fn raw_letters(max_index: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(max_index), 0..=max_len)
}

pub fn word(max_index: u32, max_len: usize) -> impl Strategy<Value = Word> {
    raw_letters(max_index, max_len).prop_map(Word::from_letters)
}

pub fn nontrivial_word(max_index: u32, max_len: usize) -> impl Strategy<Value = Word> {
    word(max_index, max_len).prop_filter("nontrivial", |w| !w.is_identity())
}

pub fn words(max_index: u32, max_len: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(word(max_index, max_len), count)
}

pub fn generator_map(max_index: u32, max_len: usize) -> impl Strategy<Value = GeneratorMap> {
    prop::collection::btree_map(0..max_index, word(max_index, max_len), 0..=max_index as usize)
        .prop_map(GeneratorMap::from_assignments)
}

pub fn w(text: &str) -> Word {
    Word::parse(text).unwrap()
}
