//! Property tests for the exact algebra and word combinatorics.

use mzvkit::exactalg::{
    bernoulli, binom, euler_number, in_row_span, int, nullspace, poly_substitute, rank, rat, MultiPoly, Rational,
};
use mzvkit::mzvword::{
    block_decomposition, block_degree, index_to_word, lift_divergent_word, shuffle, shuffle_regularize, stuffle,
    word_to_index, WordComb,
};
use mzvkit::{LinComb, SignedIndex, Word};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), small_rat()), 0..5).prop_map(move |terms| {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3).prop_map(int), cols), rows)
}

fn word(alphabet: Vec<i8>, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(alphabet), 0..=max_len).prop_map(Word)
}

fn index(max_depth: usize) -> impl Strategy<Value = SignedIndex> {
    prop::collection::vec((1i64..=3, any::<bool>()), 1..=max_depth)
        .prop_map(|v| SignedIndex::from_signed(&v.into_iter().map(|(k, neg)| if neg { -k } else { k }).collect::<Vec<_>>()))
}

fn comb_shuffle(a: &WordComb, w: &Word) -> WordComb {
    let mut out = WordComb::new();
    for (u, c) in a {
        for (x, d) in shuffle(u, w) {
            *out.entry(x).or_insert_with(Rational::zero) += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn lin_stuffle(a: &LinComb, b: &SignedIndex) -> LinComb {
    let mut out = LinComb::zero();
    for (m, c) in &a.terms {
        assert_eq!(m.len(), 1);
        out.add_scaled(&stuffle(&m[0], b).unwrap(), c);
    }
    out
}

#[test]
fn bernoulli_recurrence_to_60() {
    for n in 1..=60usize {
        let mut s = Rational::zero();
        for k in 0..=n {
            s += binom(n as i64 + 1, k as i64) * bernoulli(k);
        }
        assert!(s.is_zero(), "n={n}");
    }
}

#[test]
fn euler_numbers_odd_vanish_and_sech_recurrence() {
    for n in 0..=30usize {
        assert!(euler_number(2 * n + 1).is_zero());
    }
    for n in 1..=30usize {
        let mut s = BigInt::zero();
        for k in 0..=n {
            s += euler_number(2 * k) * binom(2 * n as i64, 2 * k as i64).numer();
        }
        assert!(s.is_zero(), "n={n}");
    }
}

proptest! {
    #[test]
    fn substitution_is_a_ring_map(p in poly(2), q in poly(2), a in poly(3), b in poly(3)) {
        let assign = [a, b];
        let sp = poly_substitute(&p, &assign).unwrap();
        let sq = poly_substitute(&q, &assign).unwrap();
        prop_assert_eq!(poly_substitute(&(&p * &q), &assign).unwrap(), &sp * &sq);
        prop_assert_eq!(poly_substitute(&(&p + &q), &assign).unwrap(), &sp + &sq);
    }

    #[test]
    fn nullspace_has_complementary_dimension(m in matrix(4, 6)) {
        let ns = nullspace(&m, 6);
        prop_assert_eq!(ns.len() + rank(&m, 6), 6);
        for v in &ns {
            for row in &m {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn row_combinations_stay_in_span(m in matrix(3, 5), c in prop::collection::vec(small_rat(), 3)) {
        let v: Vec<Rational> = (0..5).map(|j| m.iter().zip(&c).map(|(r, x)| &r[j] * x).sum()).collect();
        prop_assert!(in_row_span(&m, &v));
    }

    #[test]
    fn word_index_round_trip(w in word(vec![0, 1, -1], 12)) {
        prop_assume!(w.0.iter().any(|&x| x != 0));
        let (s, idx) = word_to_index(&w).unwrap();
        let (s2, w2) = index_to_word(&idx);
        prop_assert_eq!(w2, w);
        prop_assert_eq!(s * s2, 1);
    }

    #[test]
    fn blocks_sum_to_weight_plus_two(w in word(vec![0, 1], 14)) {
        let b = block_decomposition(&w).unwrap();
        prop_assert_eq!(b.iter().sum::<usize>(), w.len() + 2);
        let deg = block_degree(&w).unwrap();
        prop_assert_eq!(deg, b.len() - 1);
        prop_assert_eq!(deg % 2, w.len() % 2);
    }

    #[test]
    fn shuffle_commutative_associative(u in word(vec![0, 1, -1], 4), v in word(vec![0, 1, -1], 3), w in word(vec![0, 1, -1], 3)) {
        prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
        let left = comb_shuffle(&shuffle(&u, &v), &w);
        let mut right = WordComb::new();
        for (x, c) in shuffle(&v, &w) {
            for (y, d) in shuffle(&u, &x) {
                *right.entry(y).or_insert_with(Rational::zero) += &c * d;
            }
        }
        right.retain(|_, c| !c.is_zero());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn stuffle_commutative_associative(a in index(3), b in index(3), c in index(2)) {
        prop_assert_eq!(stuffle(&a, &b).unwrap(), stuffle(&b, &a).unwrap());
        let left = lin_stuffle(&stuffle(&a, &b).unwrap(), &c);
        let bc = stuffle(&b, &c).unwrap();
        let mut right = LinComb::zero();
        for (m, q) in &bc.terms {
            right.add_scaled(&stuffle(&a, &m[0]).unwrap(), q);
        }
        prop_assert_eq!(left, right);
    }

    #[test]
    fn lift_agrees_with_regularization(lead in 0u32..3, idx in index(3)) {
        prop_assume!(idx.tail_convergent());
        let with_lead = idx.clone().with_lead(lead);
        let (s, w) = index_to_word(&with_lead);
        let lifted = lift_divergent_word(&w).scale(&int(s));
        prop_assert_eq!(lifted.normalize(), shuffle_regularize(&with_lead).unwrap().normalize());
    }
}
