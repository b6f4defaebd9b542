//! Workload builders shared by the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relfree_core::{Letter, Sign, Word};

/// A reduced word of exactly `len` letters over `x_0 .. x_{rank-1}`.
pub fn random_word(rng: &mut ChaCha8Rng, rank: u32, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
        let letter = Letter::new(rng.gen_range(0..rank), sign);
        if letters.last().is_none_or(|last| !last.cancels(letter)) {
            letters.push(letter);
        }
    }
    Word::from_letters(letters)
}

/// `count` random generators of length `len`, reproducible from `seed`.
pub fn generator_set(seed: u64, rank: u32, count: usize, len: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_word(&mut rng, rank, len)).collect()
}

/// Words that are primitive in rank `rank`: images of `x_0` under random
/// products of elementary Nielsen moves.
pub fn primitive_words(seed: u64, rank: u32, count: usize, moves: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut basis: Vec<Word> = (0..rank).map(Word::generator).collect();
            for _ in 0..moves {
                let i = rng.gen_range(0..rank as usize);
                let mut j = rng.gen_range(0..rank as usize - 1);
                if j >= i {
                    j += 1;
                }
                let factor = if rng.gen_bool(0.5) { basis[j].clone() } else { basis[j].inverse() };
                basis[i] = if rng.gen_bool(0.5) {
                    basis[i].product(&factor)
                } else {
                    factor.product(&basis[i])
                };
            }
            basis.swap_remove(0)
        })
        .collect()
}
