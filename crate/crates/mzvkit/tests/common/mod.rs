//! Shared test helpers.

use std::collections::HashMap;

use mzvkit::coaction::d_r_word;
use mzvkit::Word;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ch(x: i8) -> char {
    match x {
        0 => '0',
        1 => '1',
        _ => 'm',
    }
}

/// Every cut of length r, keyed by "s|window|e" and the remaining letters.
pub fn brute(word: &[i8], r: usize) -> HashMap<(String, String), i64> {
    let padded: String = std::iter::once('0').chain(word.iter().map(|&x| ch(x))).chain(std::iter::once('1')).collect();
    let chars: Vec<char> = padded.chars().collect();
    let mut out = HashMap::new();
    for i in 0..chars.len() {
        let j = i + r + 1;
        if j >= chars.len() || chars[i] == chars[j] {
            continue;
        }
        let left = format!("{}|{}|{}", chars[i], chars[i + 1..j].iter().collect::<String>(), chars[j]);
        let right: String = chars[1..=i].iter().chain(chars[j..chars.len() - 1].iter()).collect();
        *out.entry((left, right)).or_insert(0) += 1;
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn fast(word: &[i8], r: usize) -> HashMap<(String, String), i64> {
    let ts = d_r_word(&Word(word.to_vec()), r).unwrap();
    ts.terms
        .iter()
        .map(|((l, rw), c)| {
            let s: String = l.letters.0.iter().map(|&x| ch(x)).collect();
            let key = (format!("{}|{}|{}", ch(l.start), s, ch(l.end)), rw.0.iter().map(|&x| ch(x)).collect());
            (key, c.to_integer().to_i64().unwrap())
        })
        .collect()
}

/// Deterministic sample of words over {0, 1, -1} with lengths 1..=10.
pub fn random_words(seed: u64, count: usize) -> Vec<Vec<i8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=10);
            (0..n).map(|_| [0i8, 1, -1][rng.gen_range(0..3)]).collect()
        })
        .collect()
}
