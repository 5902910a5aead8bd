//! Words over {0, 1, -1}, signed indices, shuffle/stuffle and regularisation.
//!
//! A word `w` stands for the iterated integral I(0; w; 1). The first index
//! part is the innermost summation variable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{bernoulli, binom, factorial, int, pow2, rat, sign_pow, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter -1 not allowed here")]
    AlternatingLetter,
    #[error("empty word")]
    Empty,
    #[error("leading zeros not allowed here")]
    LeadZeros,
    #[error("divergent index {0}")]
    Divergent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Word over {0, 1, -1}, read inside I(0; ...; 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<i8>);

impl Word {
    pub fn new(letters: Vec<i8>) -> Self {
        debug_assert!(letters.iter().all(|&a| (-1..=1).contains(&a)));
        Word(letters)
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_convergent(&self) -> bool {
        self.0.first().is_none_or(|&a| a != 0) && self.0.last().is_none_or(|&a| a != 1)
    }
    pub fn is_classical(&self) -> bool {
        self.0.iter().all(|&a| a != -1)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.0 {
            let c = match a {
                0 => '0',
                1 => '1',
                _ => 'm',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, WordError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                'm' => Ok(-1),
                _ => Err(WordError::Parse(format!("bad letter {c:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// ζ_ℓ(k_1^{ε_1}, …, k_d^{ε_d}).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SignedIndex {
    pub lead_zeros: u32,
    pub parts: Vec<(u32, i8)>,
}

impl SignedIndex {
    pub fn new(parts: Vec<(u32, i8)>) -> Self {
        SignedIndex { lead_zeros: 0, parts }
    }

    /// Build from signed integers: negative means barred.
    pub fn from_signed(parts: &[i64]) -> Self {
        SignedIndex::new(
            parts
                .iter()
                .map(|&k| (k.unsigned_abs() as u32, if k < 0 { -1 } else { 1 }))
                .collect(),
        )
    }

    pub fn with_lead(mut self, l: u32) -> Self {
        self.lead_zeros = l;
        self
    }

    pub fn weight(&self) -> u32 {
        self.lead_zeros + self.parts.iter().map(|p| p.0).sum::<u32>()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn tail_convergent(&self) -> bool {
        self.parts.last().is_none_or(|&p| p != (1, 1))
    }

    pub fn is_convergent(&self) -> bool {
        self.lead_zeros == 0 && self.tail_convergent() && self.parts.iter().all(|p| p.0 >= 1)
    }

    pub fn is_classical(&self) -> bool {
        self.parts.iter().all(|p| p.1 == 1)
    }

    pub fn signed(&self) -> Vec<i64> {
        self.parts.iter().map(|&(k, e)| k as i64 * e as i64).collect()
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta")?;
        if self.lead_zeros > 0 {
            write!(f, "[l={}]", self.lead_zeros)?;
        }
        let body: Vec<String> = self.signed().iter().map(|k| k.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for SignedIndex {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, WordError> {
        let bad = || WordError::Parse(s.to_string());
        let rest = s.trim().strip_prefix("zeta").ok_or_else(bad)?;
        let (lead, rest) = if let Some(r) = rest.strip_prefix("[l=") {
            let end = r.find(']').ok_or_else(bad)?;
            let l: u32 = r[..end].parse().map_err(|_| bad())?;
            (l, &r[end + 1..])
        } else {
            (0, rest)
        };
        let body = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let mut parts = Vec::new();
        if !body.is_empty() {
            for tok in body.split(',') {
                let k: i64 = tok.trim().parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                parts.push((k.unsigned_abs() as u32, if k < 0 { -1 } else { 1 }));
            }
        }
        Ok(SignedIndex { lead_zeros: lead, parts })
    }
}

/// ζ_ℓ(idx) = sign * I(0; word; 1).
pub fn index_to_word(idx: &SignedIndex) -> (i64, Word) {
    let d = idx.parts.len();
    let mut letters = vec![0i8; idx.lead_zeros as usize];
    let mut eta = vec![1i8; d + 1];
    for i in (0..d).rev() {
        eta[i] = eta[i + 1] * idx.parts[i].1;
    }
    for (i, &(k, _)) in idx.parts.iter().enumerate() {
        letters.push(eta[i]);
        letters.extend(std::iter::repeat_n(0, k as usize - 1));
    }
    (sign_pow(d as i64), Word(letters))
}

/// Inverse of [`index_to_word`].
pub fn word_to_index(w: &Word) -> Result<(i64, SignedIndex), WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    let lead = w.0.iter().take_while(|&&a| a == 0).count();
    let mut etas = Vec::new();
    let mut ks: Vec<u32> = Vec::new();
    for &a in &w.0[lead..] {
        if a == 0 {
            *ks.last_mut().unwrap() += 1;
        } else {
            etas.push(a);
            ks.push(1);
        }
    }
    let d = etas.len();
    let parts = (0..d)
        .map(|i| {
            let next = if i + 1 < d { etas[i + 1] } else { 1 };
            (ks[i], etas[i] * next)
        })
        .collect();
    Ok((sign_pow(d as i64), SignedIndex { lead_zeros: lead as u32, parts }))
}

fn extended(w: &Word) -> Result<Vec<i8>, WordError> {
    if !w.is_classical() {
        return Err(WordError::AlternatingLetter);
    }
    let mut e = Vec::with_capacity(w.len() + 2);
    e.push(0);
    e.extend_from_slice(&w.0);
    e.push(1);
    Ok(e)
}

/// Lengths of the maximal alternating blocks of 0·w·1.
pub fn block_decomposition(w: &Word) -> Result<Vec<usize>, WordError> {
    let e = extended(w)?;
    let mut blocks = Vec::new();
    let mut len = 1;
    for i in 1..e.len() {
        if e[i] == e[i - 1] {
            blocks.push(len);
            len = 1;
        } else {
            len += 1;
        }
    }
    blocks.push(len);
    Ok(blocks)
}

pub fn block_degree(w: &Word) -> Result<usize, WordError> {
    let e = extended(w)?;
    Ok(e.windows(2).filter(|p| p[0] == p[1]).count())
}

/// Duality: I(0;w;1) = sign * I(0;w';1).
pub fn dual_word(w: &Word) -> Result<(i64, Word), WordError> {
    if !w.is_classical() {
        return Err(WordError::AlternatingLetter);
    }
    let letters = w.0.iter().rev().map(|&a| 1 - a).collect();
    Ok((sign_pow(w.len() as i64), Word(letters)))
}

pub type WordComb = BTreeMap<Word, Rational>;

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Shuffle product of two words.
pub fn shuffle(u: &Word, v: &Word) -> WordComb {
    // counts of interleavings of suffixes, built back to front
    let (a, b) = (&u.0, &v.0);
    let (n, m) = (a.len(), b.len());
    let mut table: Vec<Vec<BTreeMap<Vec<i8>, u64>>> = vec![vec![BTreeMap::new(); m + 1]; n + 1];
    table[n][m].insert(Vec::new(), 1);
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            let mut cell: BTreeMap<Vec<i8>, u64> = BTreeMap::new();
            if i < n {
                for (w, c) in &table[i + 1][j] {
                    let mut x = Vec::with_capacity(w.len() + 1);
                    x.push(a[i]);
                    x.extend_from_slice(w);
                    *cell.entry(x).or_default() += c;
                }
            }
            if j < m {
                for (w, c) in &table[i][j + 1] {
                    let mut x = Vec::with_capacity(w.len() + 1);
                    x.push(b[j]);
                    x.extend_from_slice(w);
                    *cell.entry(x).or_default() += c;
                }
            }
            table[i][j] = cell;
        }
    }
    std::mem::take(&mut table[0][0])
        .into_iter()
        .map(|(w, c)| (Word(w), int(c as i64)))
        .collect()
}

fn merge_part(x: (u32, i8), y: (u32, i8)) -> (u32, i8) {
    (x.0 + y.0, x.1 * y.1)
}

/// Index parts with multiplicities.
type PartCounts = BTreeMap<Vec<(u32, i8)>, u64>;

fn stuffle_parts(a: &[(u32, i8)], b: &[(u32, i8)], memo: &mut HashMap<(usize, usize), PartCounts>) -> PartCounts {
    let key = (a.len(), b.len());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let mut out = PartCounts::new();
    if a.is_empty() || b.is_empty() {
        out.insert(if a.is_empty() { b.to_vec() } else { a.to_vec() }, 1);
    } else {
        // peel the outermost (last) part
        let (la, ra) = a.split_at(a.len() - 1);
        let (lb, rb) = b.split_at(b.len() - 1);
        let mut push = |sub: BTreeMap<Vec<(u32, i8)>, u64>, last: (u32, i8)| {
            for (mut w, c) in sub {
                w.push(last);
                *out.entry(w).or_default() += c;
            }
        };
        push(stuffle_parts(la, b, memo), ra[0]);
        push(stuffle_parts(a, lb, memo), rb[0]);
        push(stuffle_parts(la, lb, memo), merge_part(ra[0], rb[0]));
    }
    memo.insert(key, out.clone());
    out
}

/// Quasi-shuffle (stuffle) product.
pub fn stuffle(a: &SignedIndex, b: &SignedIndex) -> Result<LinComb, WordError> {
    if a.lead_zeros != 0 || b.lead_zeros != 0 {
        return Err(WordError::LeadZeros);
    }
    let mut memo = HashMap::new();
    let mut out = LinComb::zero();
    for (parts, c) in stuffle_parts(&a.parts, &b.parts, &mut memo) {
        out.add_index(SignedIndex::new(parts), int(c as i64));
    }
    Ok(out)
}

/// Shuffle-regularised (T = 0) value of ζ_ℓ(k_1, …, k_d).
pub fn shuffle_regularize(idx: &SignedIndex) -> Result<LinComb, WordError> {
    if !idx.tail_convergent() {
        return Err(WordError::Divergent(idx.to_string()));
    }
    let l = idx.lead_zeros as usize;
    let d = idx.parts.len();
    let mut out = LinComb::zero();
    if d == 0 {
        if l == 0 {
            out.add_monomial(Vec::new(), Rational::one());
        }
        return Ok(out);
    }
    let sign = int(sign_pow(l as i64));
    let mut dist = vec![0usize; d];
    // enumerate compositions of l into d non-negative parts
    fn rec(pos: usize, left: usize, dist: &mut Vec<usize>, idx: &SignedIndex, sign: &Rational, out: &mut LinComb) {
        let d = dist.len();
        if pos == d - 1 {
            dist[pos] = left;
            let mut coeff = sign.clone();
            let mut parts = Vec::with_capacity(d);
            for (j, &(k, e)) in idx.parts.iter().enumerate() {
                coeff *= binom(k as i64 + dist[j] as i64 - 1, dist[j] as i64);
                parts.push((k + dist[j] as u32, e));
            }
            out.add_index(SignedIndex::new(parts), coeff);
            return;
        }
        for i in 0..=left {
            dist[pos] = i;
            rec(pos + 1, left - i, dist, idx, sign, out);
        }
    }
    rec(0, l, &mut dist, idx, &sign, &mut out);
    Ok(out)
}

/// Express any word through convergent indices (shuffle regularisation, T = 0).
pub fn lift_divergent_word(w: &Word) -> LinComb {
    let mut memo = HashMap::new();
    lift_rec(w, &mut memo)
}

fn lift_rec(w: &Word, memo: &mut HashMap<Word, LinComb>) -> LinComb {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let result = if w.is_empty() {
        LinComb::one()
    } else if w.is_convergent() {
        let (s, idx) = word_to_index(w).expect("non-empty");
        LinComb::from_index(idx).scale(&int(s))
    } else {
        let n = w.len();
        let trailing = w.0.iter().rev().take_while(|&&a| a == 1).count();
        let (head, tail) = if trailing > 0 {
            let split = n - trailing;
            (Word(w.0[..split].to_vec()), Word(w.0[split..].to_vec()))
        } else {
            let lead = w.0.iter().take_while(|&&a| a == 0).count();
            (Word(w.0[..lead].to_vec()), Word(w.0[lead..].to_vec()))
        };
        if head.is_empty() || tail.is_empty() {
            // 1^b or 0^a
            LinComb::zero()
        } else {
            let mut acc = LinComb::zero();
            for (u, c) in shuffle(&head, &tail) {
                if &u == w {
                    debug_assert!(c.is_one());
                    continue;
                }
                acc = acc.add(&lift_rec(&u, memo).scale(&-c));
            }
            acc
        }
    };
    memo.insert(w.clone(), result.clone());
    result
}

/// ζ^r: each comma may be replaced by ⊕ at cost r.
pub fn interp_expand(idx: &SignedIndex, r: &Rational) -> Result<LinComb, WordError> {
    if idx.lead_zeros != 0 {
        return Err(WordError::LeadZeros);
    }
    let d = idx.parts.len();
    let mut out = LinComb::zero();
    if d == 0 {
        return Ok(LinComb::one());
    }
    for mask in 0u32..(1 << (d - 1)) {
        let mut parts = vec![idx.parts[0]];
        for (i, &p) in idx.parts.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                let last = parts.pop().unwrap();
                parts.push(merge_part(last, p));
            } else {
                parts.push(p);
            }
        }
        let merged = SignedIndex::new(parts);
        if !merged.is_convergent() {
            return Err(WordError::Divergent(merged.to_string()));
        }
        let c = num_traits::pow(r.clone(), mask.count_ones() as usize);
        out.add_index(merged, c);
    }
    Ok(out)
}

/// Product of convergent constants; sorted with repetition.
pub type Monomial = Vec<SignedIndex>;

/// Exact rational combination of monomials in zeta constants.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinComb {
    pub terms: BTreeMap<Monomial, Rational>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn one() -> Self {
        LinComb::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut out = LinComb::zero();
        out.add_monomial(Vec::new(), c);
        out
    }

    pub fn from_index(idx: SignedIndex) -> Self {
        let mut out = LinComb::zero();
        out.add_index(idx, Rational::one());
        out
    }

    /// ζ of signed integer arguments.
    pub fn zeta(parts: &[i64]) -> Self {
        LinComb::from_index(SignedIndex::from_signed(parts))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_index(&mut self, idx: SignedIndex, c: Rational) {
        self.add_monomial(vec![idx], c);
    }

    pub fn add_monomial(&mut self, mut m: Monomial, c: Rational) {
        m.sort();
        add_into(&mut self.terms, m, c);
    }

    pub fn add(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LinComb) -> LinComb {
        self.add(&other.scale(&int(-1)))
    }

    pub fn add_scaled(&mut self, other: &LinComb, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            add_into(&mut self.terms, m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend(mb.iter().cloned());
                out.add_monomial(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> LinComb {
        (0..e).fold(LinComb::one(), |acc, _| acc.mul(self))
    }

    pub fn coeff(&self, m: &[SignedIndex]) -> Rational {
        let mut key = m.to_vec();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_convergent(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|i| i.is_convergent()))
    }

    /// Every monomial's total weight, if homogeneous.
    pub fn weights(&self) -> std::collections::BTreeSet<u32> {
        self.terms.keys().map(|m| m.iter().map(|i| i.weight()).sum()).collect()
    }

    /// Apply a map to each factor and multiply out.
    pub fn map_factors(&self, f: &mut impl FnMut(&SignedIndex) -> LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (m, c) in &self.terms {
            let mut t = LinComb::constant(c.clone());
            for idx in m {
                t = t.mul(&f(idx));
            }
            for (m2, c2) in t.terms {
                add_into(&mut out.terms, m2, c2);
            }
        }
        out
    }

    /// Canonical shorthand: barred singles unbarred, even singles as powers of ζ(2),
    /// and ζ(k^ε,k^ε) split by stuffle. Repeated until stable.
    pub fn normalize(&self) -> LinComb {
        let mut cur = self.clone();
        loop {
            let next = cur.map_factors(&mut normalize_factor);
            if next == cur {
                return next;
            }
            cur = next;
        }
    }
}

/// ζ(2k) / ζ(2)^k as an exact rational.
pub fn even_zeta_ratio(k: u32) -> Rational {
    // ζ(2k) = (-1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!),  π^2 = 6 ζ(2)
    let b = bernoulli(2 * k as usize);
    let sign = int(sign_pow(k as i64 + 1));
    let pi_pow = num_traits::pow(int(6), k as usize) * pow2(2 * k as i64);
    sign * b * pi_pow / (int(2) * Rational::from_integer(factorial(2 * k as u64)))
}

fn normalize_factor(idx: &SignedIndex) -> LinComb {
    let z2 = SignedIndex::from_signed(&[2]);
    if idx.lead_zeros == 0 && idx.parts.len() == 1 {
        let (n, e) = idx.parts[0];
        if e == -1 && n >= 2 {
            // ζ(n̄) = -(1 - 2^{1-n}) ζ(n)
            let c = -(int(1) - pow2(1 - n as i64));
            return normalize_factor(&SignedIndex::new(vec![(n, 1)])).scale(&c);
        }
        if e == 1 && n >= 4 && n % 2 == 0 {
            let k = n / 2;
            let mut out = LinComb::zero();
            out.add_monomial(vec![z2; k as usize], even_zeta_ratio(k));
            return out;
        }
    }
    if idx.lead_zeros == 0 && idx.parts.len() == 2 && idx.parts[0] == idx.parts[1] && idx.is_convergent() {
        let (k, e) = idx.parts[0];
        let single = LinComb::from_index(SignedIndex::new(vec![(k, e)]));
        let doubled = LinComb::from_index(SignedIndex::new(vec![(2 * k, 1)]));
        return single.mul(&single).sub(&doubled).scale(&rat(1, 2));
    }
    LinComb::from_index(idx.clone())
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for idx in m {
                write!(f, "*{idx}")?;
            }
        }
        Ok(())
    }
}
