//! Numerical evaluation with explicit absolute error bounds.
//!
//! Main engine: split the path at 1/2, so each convergent word becomes a sum of
//! products of two nested series with ratio at most 1/2. A slow f64 nested-sum
//! oracle lives in [`oracle`] for cross-checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::RwLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{bernoulli, factorial, Rational};
use crate::mzvword::{index_to_word, LinComb, SignedIndex, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("divergent input {0}")]
    Divergent(String),
    #[error("could not reach 1e-{digits} for {what}")]
    PrecisionCap { what: String, digits: u32 },
    #[error("cache io: {0}")]
    Io(String),
}

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const MAX_GUARD: u32 = 1024;

/// Inflate an f64 bound slightly to absorb rounding in the bound itself.
fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 8.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

/// Fixed-point real `mant / 2^bits` with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BigReal {
    pub mant: BigInt,
    pub bits: u32,
    pub err: f64,
}

fn ulp(bits: u32) -> f64 {
    2f64.powi(-(bits as i32))
}

fn mant_to_f64(m: &BigInt, bits: u32) -> f64 {
    let nb = m.bits();
    if nb <= 1000 {
        m.to_f64().unwrap() * 2f64.powi(-(bits as i32))
    } else {
        let sh = nb - 900;
        (m >> sh).to_f64().unwrap() * 2f64.powi(sh as i32 - bits as i32)
    }
}

/// floor division with rounding to nearest.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if (r << 1u32) >= *d {
        q + 1
    } else {
        q
    }
}

fn shr_round(m: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (s - 1);
    (m + half) >> s
}

impl BigReal {
    pub fn zero(bits: u32) -> Self {
        BigReal { mant: BigInt::zero(), bits, err: 0.0 }
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        let num = q.numer() << bits;
        let (quo, rem) = num.div_mod_floor(q.denom());
        let exact = rem.is_zero();
        let mant = if exact { quo } else { div_round(&num, q.denom()) };
        BigReal { mant, bits, err: if exact { 0.0 } else { ulp(bits) } }
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        BigReal { mant: BigInt::from(n) << bits, bits, err: 0.0 }
    }

    pub fn to_f64(&self) -> f64 {
        mant_to_f64(&self.mant, self.bits)
    }

    /// Upper bound on |value|.
    pub fn abs_bound(&self) -> f64 {
        up(self.to_f64().abs() + self.err)
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        if bits >= self.bits {
            BigReal { mant: &self.mant << (bits - self.bits), bits, err: self.err }
        } else {
            BigReal { mant: shr_round(&self.mant, self.bits - bits), bits, err: up(self.err + ulp(bits)) }
        }
    }

    fn align(a: &BigReal, b: &BigReal) -> (BigReal, BigReal) {
        let bits = a.bits.max(b.bits);
        (a.with_bits(bits), b.with_bits(bits))
    }

    pub fn add(&self, other: &BigReal) -> BigReal {
        let (a, b) = Self::align(self, other);
        BigReal { mant: a.mant + b.mant, bits: a.bits, err: up(a.err + b.err) }
    }

    pub fn sub(&self, other: &BigReal) -> BigReal {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BigReal {
        BigReal { mant: -self.mant.clone(), bits: self.bits, err: self.err }
    }

    pub fn mul(&self, other: &BigReal) -> BigReal {
        let (a, b) = Self::align(self, other);
        let bits = a.bits;
        let prod = &a.mant * &b.mant;
        let mant = shr_round(&prod, bits);
        let (va, vb) = (a.to_f64().abs(), b.to_f64().abs());
        let err = va * b.err + vb * a.err + a.err * b.err + ulp(bits);
        BigReal { mant, bits, err: up(err) }
    }

    pub fn scale(&self, q: &Rational) -> BigReal {
        let num = &self.mant * q.numer();
        let mant = div_round(&num, q.denom());
        let qa = crate::exactalg::to_f64(q).abs();
        let exact = (&num % q.denom()).is_zero();
        BigReal { mant, bits: self.bits, err: up(qa * self.err + if exact { 0.0 } else { ulp(self.bits) }) }
    }

    pub fn pow(&self, e: u32) -> BigReal {
        let mut acc = BigReal::from_int(1, self.bits);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Decimal string with `places` fractional digits (rounded).
    pub fn to_decimal(&self, places: usize) -> String {
        let ten = BigInt::from(10).pow(places as u32);
        let scaled = &self.mant * &ten;
        let q = shr_round(&scaled, self.bits);
        let neg = q.sign() == Sign::Minus;
        let s = q.abs().to_string();
        let s = if s.len() <= places { format!("{}{}", "0".repeat(places + 1 - s.len()), s) } else { s };
        let (ip, fp) = s.split_at(s.len() - places);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    }

    /// Parse a decimal literal; error covers the decimal and binary roundings.
    pub fn from_decimal(s: &str, err: f64, bits: u32) -> Option<BigReal> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() && fp.is_empty() {
            return None;
        }
        let digits: String = format!("{ip}{fp}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let n = if neg { -n } else { n };
        let q = Rational::new(n, BigInt::from(10).pow(fp.len() as u32));
        let mut r = BigReal::from_rational(&q, bits);
        r.err = up(r.err + err);
        Some(r)
    }

    /// |self - other| + both errors <= tol.
    pub fn agrees(&self, other: &BigReal, tol: f64) -> bool {
        let d = self.sub(other);
        d.to_f64().abs() + d.err <= tol
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = ((self.bits as f64) / LOG2_10).floor() as usize;
        let places = places.clamp(1, 60);
        write!(f, "{} ± {:.1e}", self.to_decimal(places), self.err)
    }
}

pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

fn target_err(digits: u32) -> f64 {
    10f64.powi(-(digits as i32))
}

// ---------------------------------------------------------------------------
// nested series at x = 1/2

/// Letters of a series word: 0 or a nonzero point b in {1, -1, 2}.
type SeriesKey = (Vec<i8>, u32);

static SERIES_MEMO: RwLock<Option<HashMap<SeriesKey, BigReal>>> = RwLock::new(None);

fn memo_get(key: &SeriesKey) -> Option<BigReal> {
    SERIES_MEMO.read().unwrap().as_ref().and_then(|m| m.get(key).cloned())
}

fn memo_put(key: SeriesKey, v: BigReal) {
    let mut g = SERIES_MEMO.write().unwrap();
    g.get_or_insert_with(HashMap::new).insert(key, v);
}

/// Drop memoised series values (results never depend on the memo).
pub fn clear_memo() {
    *SERIES_MEMO.write().unwrap() = None;
}

/// Smallest N >= 4d with 3 (1+ln(N+1))^{d-1} 2^{-(N+1)} <= 2^{-(bits+2)}.
fn terms_needed(d: usize, bits: u32) -> usize {
    let mut n = (bits as usize + 4).max(4 * d);
    loop {
        let lg = (3.0f64).log2() + (d as f64 - 1.0) * (1.0 + ((n + 1) as f64).ln()).log2() - (n as f64 + 1.0);
        if lg <= -(bits as f64 + 2.0) {
            return n;
        }
        n += 8;
    }
}

/// I(0; letters; 1/2) for a word whose first letter is nonzero.
fn series_half(letters: &[i8], bits: u32) -> BigReal {
    if letters.is_empty() {
        return BigReal::from_int(1, bits);
    }
    let key = (letters.to_vec(), bits);
    if let Some(v) = memo_get(&key) {
        return v;
    }
    debug_assert!(letters[0] != 0);
    // (b_i, k_i)
    let mut parts: Vec<(i8, u32)> = Vec::new();
    for &a in letters {
        if a == 0 {
            parts.last_mut().unwrap().1 += 1;
        } else {
            parts.push((a, 1));
        }
    }
    let d = parts.len();
    let n_terms = terms_needed(d, bits);
    // working precision: extra guard to absorb accumulated rounding
    let guard = 2 * (64 - (n_terms as u64 * d as u64 + 1).leading_zeros()) + 8;
    let wb = bits + guard;
    let one = BigInt::one() << wb;
    // V_j(n) with per-slot error in ulps of wb
    let mut v: Vec<BigInt> = vec![BigInt::zero(); d];
    let mut ev: Vec<f64> = vec![0.0; d];
    let apply_y = |b: i8, m: BigInt, e: f64| -> (BigInt, f64) {
        match b {
            1 => (m, e),
            -1 => (-m, e),
            2 => (shr_round(&m, 1), e / 2.0 + 0.5),
            _ => unreachable!(),
        }
    };
    let (v1, e1) = apply_y(parts[0].0, one, 0.0);
    v[0] = v1;
    ev[0] = e1;
    let mut acc = BigInt::zero();
    let mut eacc = 0.0f64;
    let mut s_prev: Vec<BigInt> = vec![BigInt::zero(); d];
    let mut es_prev: Vec<f64> = vec![0.0; d];
    for n in 1..=n_terms {
        let nb = BigInt::from(n);
        for j in 0..d {
            let denom = num_traits::pow(nb.clone(), parts[j].1 as usize);
            s_prev[j] = div_round(&v[j], &denom);
            es_prev[j] = ev[j] / (n as f64).powi(parts[j].1 as i32) + 0.5;
        }
        // result += S_d(n) / 2^n
        acc += shr_round(&s_prev[d - 1], n as u32);
        eacc += es_prev[d - 1] * 2f64.powi(-(n as i32)) + 0.5;
        // advance V
        let (m, e) = apply_y(parts[0].0, std::mem::take(&mut v[0]), ev[0]);
        v[0] = m;
        ev[0] = e;
        for j in 1..d {
            let sum = std::mem::take(&mut v[j]) + &s_prev[j - 1];
            let (m, e) = apply_y(parts[j].0, sum, ev[j] + es_prev[j - 1]);
            v[j] = m;
            ev[j] = e;
        }
    }
    let tail = 3.0 * (1.0 + ((n_terms + 1) as f64).ln()).powi(d as i32 - 1) * 2f64.powi(-(n_terms as i32 + 1));
    let sign = if d % 2 == 1 { -1 } else { 1 };
    let mant = shr_round(&(acc * sign), guard);
    let err = up(eacc * ulp(wb) + tail + ulp(bits));
    let out = BigReal { mant, bits, err };
    memo_put(key, out.clone());
    out
}

/// I(0; w; 1) for a convergent word at working precision `bits`.
pub fn eval_word_bits(w: &Word, bits: u32) -> Result<BigReal, EvalError> {
    if !w.is_convergent() {
        return Err(EvalError::Divergent(w.to_string()));
    }
    let n = w.len();
    let mut total = BigReal::zero(bits);
    for k in 0..=n {
        let left = series_half(&w.0[..k], bits);
        // I(1/2; a_{k+1..n}; 1) = (-1)^{n-k} I(0; 1-a_n, …, 1-a_{k+1}; 1/2)
        let rev: Vec<i8> = w.0[k..].iter().rev().map(|&a| 1 - a).collect();
        let mut right = series_half(&rev, bits);
        if (n - k) % 2 == 1 {
            right = right.neg();
        }
        total = total.add(&left.mul(&right));
    }
    Ok(total)
}

/// Iterate precision until the error target is met.
fn refine<F>(what: &dyn Fn() -> String, digits: u32, f: F) -> Result<BigReal, EvalError>
where
    F: Fn(u32) -> Result<BigReal, EvalError>,
{
    let target = target_err(digits);
    let mut guard = 24;
    while guard <= MAX_GUARD {
        let r = f(bits_for_digits(digits) + guard)?;
        if r.err <= target {
            return Ok(r);
        }
        guard *= 2;
    }
    Err(EvalError::PrecisionCap { what: what(), digits })
}

static INDEX_MEMO: RwLock<BTreeMap<(SignedIndex, u32), BigReal>> = RwLock::new(BTreeMap::new());

/// Value of a convergent signed index to `digits` decimal digits.
pub fn eval_index(idx: &SignedIndex, digits: u32) -> Result<BigReal, EvalError> {
    if !idx.is_convergent() {
        return Err(EvalError::Divergent(idx.to_string()));
    }
    let key = (idx.clone(), digits);
    if let Some(v) = INDEX_MEMO.read().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let (sign, word) = index_to_word(idx);
    let r = refine(&|| idx.to_string(), digits, |bits| {
        let v = eval_word_bits(&word, bits)?;
        Ok(if sign < 0 { v.neg() } else { v })
    })?;
    INDEX_MEMO.write().unwrap().insert(key, r.clone());
    Ok(r)
}

/// Extra decimal digits needed so that coefficient growth stays below the target.
fn coeff_margin(c: &LinComb) -> u32 {
    let mut worst = 1.0f64;
    for (m, q) in &c.terms {
        let mag = crate::exactalg::to_f64(q).abs() * 2f64.powi(m.len() as i32);
        worst = worst.max(mag);
    }
    (worst * (c.terms.len().max(1) as f64)).log10().ceil().max(0.0) as u32 + 2
}

/// Decimal digits at which each factor of `c` is evaluated for a `digits`-digit result.
pub fn working_digits(c: &LinComb, digits: u32) -> u32 {
    digits + coeff_margin(c)
}

fn eval_lincomb_by(
    c: &LinComb,
    digits: u32,
    index: impl Fn(&SignedIndex, u32) -> Result<BigReal, EvalError>,
) -> Result<BigReal, EvalError> {
    let inner = working_digits(c, digits);
    let bits = bits_for_digits(inner) + 16;
    let mut total = BigReal::zero(bits);
    for (m, q) in &c.terms {
        let mut t = BigReal::from_int(1, bits);
        for idx in m {
            t = t.mul(&index(idx, inner)?.with_bits(bits));
        }
        total = total.add(&t.scale(q));
    }
    Ok(total)
}

/// Σ coeff · Π ζ(...), errors propagated.
pub fn eval_lincomb(c: &LinComb, digits: u32) -> Result<BigReal, EvalError> {
    eval_lincomb_by(c, digits, eval_index)
}

/// t(k_1, …, k_d) = 2^{-d} Σ_ε ε_1⋯ε_d ζ(ε◇k); depends only on the main engine.
pub fn eval_t(parts: &[u32], digits: u32) -> Result<BigReal, EvalError> {
    if parts.is_empty() || *parts.last().unwrap() < 2 || parts.contains(&0) {
        return Err(EvalError::Divergent(format!("t{parts:?}")));
    }
    let d = parts.len();
    let mut lc = LinComb::zero();
    for mask in 0u32..(1 << d) {
        let mut sign = 1i64;
        let p: Vec<(u32, i8)> = parts
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                if mask >> i & 1 == 1 {
                    sign = -sign;
                    (k, -1)
                } else {
                    (k, 1)
                }
            })
            .collect();
        lc.add_index(SignedIndex::new(p), Rational::new(BigInt::from(sign), BigInt::one() << d));
    }
    eval_lincomb(&lc, digits)
}

// ---------------------------------------------------------------------------
// constants

fn atan_inv(x: u64, bits: u32) -> BigReal {
    // Σ (-1)^k / ((2k+1) x^{2k+1})
    let guard = 16;
    let wb = bits + guard;
    let x2 = BigInt::from(x * x);
    let mut power = div_round(&(BigInt::one() << wb), &BigInt::from(x));
    let mut acc = BigInt::zero();
    let mut k = 0u64;
    let mut terms = 0f64;
    while !power.is_zero() {
        let t = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            acc += t;
        } else {
            acc -= t;
        }
        power = &power / &x2;
        k += 1;
        terms += 1.0;
    }
    let err = (2.0 * terms + 2.0) * ulp(wb) + ulp(bits);
    BigReal { mant: shr_round(&acc, guard), bits, err: up(err) }
}

pub fn pi(bits: u32) -> BigReal {
    atan_inv(5, bits).scale(&Rational::from_integer(16.into())).sub(&atan_inv(239, bits).scale(&Rational::from_integer(4.into())))
}

pub fn pi_power(k: u32, digits: u32) -> BigReal {
    refine_infallible(digits, |bits| pi(bits).pow(k))
}

fn refine_infallible<F: Fn(u32) -> BigReal>(digits: u32, f: F) -> BigReal {
    refine(&|| "constant".into(), digits, |b| Ok(f(b))).expect("constant evaluation converges")
}

pub fn log2(digits: u32) -> BigReal {
    refine_infallible(digits, |bits| {
        let guard = 16;
        let wb = bits + guard;
        let mut acc = BigInt::zero();
        let mut k = 1u32;
        loop {
            let t = (BigInt::one() << wb) / (BigInt::from(k) << k);
            if t.is_zero() {
                break;
            }
            acc += t;
            k += 1;
        }
        // truncation: Σ_{j>=k} 1/(j 2^j) <= 2^{1-k}
        let err = (k as f64 + 1.0) * ulp(wb) + 2f64.powi(1 - k as i32) + ulp(bits);
        BigReal { mant: shr_round(&acc, guard), bits, err: up(err) }
    })
}

/// ζ(n), n >= 2. Even n through Bernoulli numbers.
pub fn zeta_single(n: u32, digits: u32) -> Result<BigReal, EvalError> {
    if n < 2 {
        return Err(EvalError::Divergent(format!("zeta({n})")));
    }
    if n.is_multiple_of(2) {
        // |B_n| (2π)^n / (2 n!)
        let b = bernoulli(n as usize).abs();
        let c = b * Rational::from_integer(BigInt::one() << n) / Rational::from_integer(factorial(n as u64) * 2);
        let margin = crate::exactalg::to_f64(&c).log10().max(0.0).ceil() as u32 + 2;
        return Ok(pi_power(n, digits + margin).scale(&c));
    }
    eval_index(&SignedIndex::new(vec![(n, 1)]), digits)
}

/// ζ(n̄) = -(1 - 2^{1-n}) ζ(n); ζ(1̄) = -log 2.
pub fn zeta_single_alt(n: u32, digits: u32) -> Result<BigReal, EvalError> {
    if n == 0 {
        return Err(EvalError::Divergent("zeta(-0)".into()));
    }
    if n == 1 {
        return Ok(log2(digits).neg());
    }
    let c = -(Rational::one() - crate::exactalg::pow2(1 - n as i64));
    Ok(zeta_single(n, digits + 1)?.scale(&c))
}

// ---------------------------------------------------------------------------
// persistent cache

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CacheEntry {
    pub value: String,
    pub err: String,
    pub digits: u32,
}

/// Advisory constant cache; a bad entry is recomputed.
#[derive(Debug, Default)]
pub struct ConstCache {
    entries: RwLock<BTreeMap<String, CacheEntry>>,
}

impl ConstCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, EvalError> {
        if !path.exists() {
            return Ok(Self::new());
        }
        let text = std::fs::read_to_string(path).map_err(|e| EvalError::Io(e.to_string()))?;
        // an unreadable document is treated as empty
        let entries: BTreeMap<String, CacheEntry> = serde_json::from_str(&text).unwrap_or_default();
        Ok(ConstCache { entries: RwLock::new(entries) })
    }

    pub fn save(&self, path: &Path) -> Result<(), EvalError> {
        let text = serde_json::to_string_pretty(&*self.entries.read().unwrap()).map_err(|e| EvalError::Io(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| EvalError::Io(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> BTreeMap<String, CacheEntry> {
        self.entries.read().unwrap().clone()
    }

    pub fn insert_raw(&self, key: String, e: CacheEntry) {
        self.entries.write().unwrap().insert(key, e);
    }

    fn lookup(&self, key: &str, digits: u32) -> Option<BigReal> {
        let g = self.entries.read().unwrap();
        let e = g.get(key)?;
        if e.digits < digits {
            return None;
        }
        let err: f64 = e.err.parse().ok()?;
        if !(err.is_finite() && err >= 0.0 && err <= target_err(digits)) {
            return None;
        }
        let bits = bits_for_digits(digits) + 24;
        let places = e.value.split_once('.').map(|(_, f)| f.len()).unwrap_or(0) as i32;
        let r = BigReal::from_decimal(&e.value, up(err + 0.5 * 10f64.powi(-places)), bits)?;
        if r.err > target_err(digits) {
            return None;
        }
        Some(r)
    }

    pub fn get_or_eval(&self, idx: &SignedIndex, digits: u32) -> Result<BigReal, EvalError> {
        let key = idx.to_string();
        if let Some(v) = self.lookup(&key, digits) {
            return Ok(v);
        }
        let v = eval_index(idx, digits + 2)?;
        let entry = CacheEntry {
            value: v.to_decimal(digits as usize + 6),
            err: format!("{:e}", v.err),
            digits,
        };
        self.entries.write().unwrap().insert(key, entry);
        Ok(v)
    }

    /// As [`eval_lincomb`], with every factor read through the cache.
    pub fn eval_lincomb(&self, c: &LinComb, digits: u32) -> Result<BigReal, EvalError> {
        eval_lincomb_by(c, digits, |idx, d| self.get_or_eval(idx, d))
    }
}

// ---------------------------------------------------------------------------

/// Direct truncated nested sums in f64, depth <= 3. Independent of the main engine.
pub mod oracle {
    use super::SignedIndex;

    /// (value, error bound).
    #[derive(Clone, Copy, Debug)]
    pub struct Approx {
        pub value: f64,
        pub err: f64,
    }

    struct Neumaier {
        sum: f64,
        c: f64,
        abs: f64,
    }

    impl Neumaier {
        fn new() -> Self {
            Neumaier { sum: 0.0, c: 0.0, abs: 0.0 }
        }
        fn add(&mut self, x: f64) {
            let t = self.sum + x;
            if self.sum.abs() >= x.abs() {
                self.c += (self.sum - t) + x;
            } else {
                self.c += (x - t) + self.sum;
            }
            self.sum = t;
            self.abs += x.abs();
        }
        fn value(&self) -> f64 {
            self.sum + self.c
        }
    }

    /// Σ_{n>N} ε^n / n^k; returns (midpoint, radius).
    fn tail1(eps: i8, k: u32, n: u64) -> (f64, f64) {
        let nf = n as f64;
        let kf = k as f64;
        if eps == 1 {
            assert!(k >= 2);
            let v = nf.powf(1.0 - kf) / (kf - 1.0) - 0.5 * nf.powf(-kf) + kf / 12.0 * nf.powf(-kf - 1.0);
            let r = kf * (kf + 1.0) * (kf + 2.0) / 720.0 * nf.powf(-kf - 3.0);
            (v, 2.0 * r)
        } else {
            let m = nf + 1.0;
            let f0 = m.powf(-kf);
            let f1 = (m + 1.0).powf(-kf);
            let sgn = if (n + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            (sgn * (f0 / 2.0 + (f0 - f1) / 4.0), (f0 - f1) / 4.0)
        }
    }

    /// ∫_{ln N}^∞ (1+u)^j e^{(1-s)u} du.
    fn log_power_tail(j: u32, s: f64, n: u64) -> f64 {
        let l = (n as f64).ln();
        let mut acc = 0.0;
        let mut falling = 1.0;
        for i in 0..=j {
            if i > 0 {
                falling *= (j - i + 1) as f64;
            }
            acc += falling * (1.0 + l).powi((j - i) as i32) / (s - 1.0).powi(i as i32 + 1);
        }
        ((1.0 - s) * l).exp() * acc
    }

    /// Value of a convergent index of depth <= 3 from N-term nested sums.
    pub fn eval_direct(idx: &SignedIndex, n: u64) -> Approx {
        assert!(idx.is_convergent() && (1..=3).contains(&idx.depth()), "oracle: depth 1..3 convergent only");
        let parts = &idx.parts;
        let d = parts.len();
        // running nested partial sums A_j(n) = Σ_{n_1<…<n_j<n}
        let mut acc: Vec<Neumaier> = (0..d).map(|_| Neumaier::new()).collect();
        let mut prev = vec![0f64; d + 1];
        prev[0] = 1.0;
        for m in 1..=n {
            let mf = m as f64;
            // update from outermost inwards so inner sums still hold values for indices < m
            for j in (0..d).rev() {
                let (k, e) = parts[j];
                let sign = if e == -1 && m % 2 == 1 { -1.0 } else { 1.0 };
                let base = if j == 0 { 1.0 } else { prev[j] };
                acc[j].add(sign * base / mf.powi(k as i32));
            }
            for j in 0..d {
                prev[j + 1] = acc[j].value();
            }
        }
        let head = acc[d - 1].value();
        let (k, eps) = parts[d - 1];
        // rounding: compensated sums, a few ulps per term
        let u = f64::EPSILON;
        let abs_outer = acc[d - 1].abs;
        let mut rounding = 8.0 * u * abs_outer + 4.0 * u * (n as f64) * u * abs_outer;
        for a in acc.iter().take(d - 1) {
            rounding += 8.0 * u * a.abs * abs_outer;
        }
        // tail: A(N+1) tail1 + R
        let a_next = if d == 1 { 1.0 } else { prev[d - 1] };
        let (t1, t1err) = tail1(eps, k, n);
        let mut err = rounding + a_next.abs() * t1err;
        if d >= 2 {
            let kp = parts[d - 2].0;
            let (mut a, mut c) = (0u32, 0i32);
            for p in parts.iter().take(d - 2) {
                if p.0 == 1 {
                    a += 1;
                } else {
                    c += 1;
                }
            }
            let (s, factor) = if eps == 1 {
                ((kp + k - 1) as f64, 1.0 / (k as f64 - 1.0))
            } else {
                ((kp + k) as f64, 1.0)
            };
            err += 2f64.powi(c) * factor * log_power_tail(a, s, n);
        }
        Approx { value: head + a_next * t1, err: err * 1.01 }
    }

    /// Odd-denominator nested sum t(k_1, …, k_d), depth <= 2, with a crude tail bound.
    pub fn eval_t_direct(parts: &[u32], n: u64) -> Approx {
        let d = parts.len();
        assert!((1..=2).contains(&d) && *parts.last().unwrap() >= 2);
        let mut inner = Neumaier::new();
        let mut outer = Neumaier::new();
        for m in 1..=n {
            let o = (2 * m - 1) as f64;
            if d == 1 {
                outer.add(1.0 / o.powi(parts[0] as i32));
            } else {
                outer.add(inner.value() / o.powi(parts[1] as i32));
                inner.add(1.0 / o.powi(parts[0] as i32));
            }
        }
        let k = *parts.last().unwrap() as f64;
        // Σ_{m>N} 1/(2m-1)^k between integrals
        let lo = (2.0 * n as f64 + 1.0).powf(1.0 - k) / (2.0 * (k - 1.0));
        let hi = (2.0 * n as f64 - 1.0).powf(1.0 - k) / (2.0 * (k - 1.0));
        let a = if d == 1 { 1.0 } else { inner.value() };
        let mut err = a * (hi - lo) / 2.0 + 16.0 * f64::EPSILON * outer.abs * a.max(1.0);
        let mut value = outer.value() + a * (hi + lo) / 2.0;
        if d == 2 {
            // pairs N < m1 < m2: 0 <= extra <= (2N-1)^{2-k0-k1} / (4 (k0+k1-2)(k1-1))
            let k0 = parts[0] as f64;
            let extra = (2.0 * n as f64 - 1.0).powf(2.0 - k0 - k) / (4.0 * (k0 + k - 2.0) * (k - 1.0));
            value += extra / 2.0;
            err += extra / 2.0;
        }
        Approx { value, err }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn z(p: &[i64]) -> SignedIndex {
        SignedIndex::from_signed(p)
    }

    #[test]
    fn zeta2_engine() {
        let v = eval_index(&z(&[2]), 30).unwrap();
        assert!(v.err <= 1e-30);
        assert_eq!(&v.to_decimal(20)[..17], "1.644934066848226");
        let alt = eval_index(&z(&[-2]), 20).unwrap();
        assert_eq!(&alt.to_decimal(16)[..17], "-0.82246703342411");
        let l = eval_index(&z(&[-1]), 20).unwrap();
        assert_eq!(&l.to_decimal(16)[..17], "-0.69314718055994");
    }

    #[test]
    fn constants_consistent() {
        let p = pi(200);
        assert_eq!(&p.to_decimal(35)[..32], "3.141592653589793238462643383279");
        let z2 = eval_index(&z(&[2]), 40).unwrap();
        let viapi = pi_power(2, 40).scale(&rat(1, 6));
        assert!(z2.agrees(&viapi, 1e-38));
        let z4 = zeta_single(4, 40).unwrap();
        assert!(z4.agrees(&eval_index(&z(&[4]), 40).unwrap(), 1e-38));
        let a2 = zeta_single_alt(2, 40).unwrap();
        assert!(a2.agrees(&pi_power(2, 40).scale(&rat(-1, 12)), 1e-38));
        let l = log2(40);
        assert!(l.neg().agrees(&eval_index(&z(&[-1]), 40).unwrap(), 1e-38));
    }

    #[test]
    fn euler_relation() {
        // ζ(1,2) = ζ(3)
        let a = eval_index(&z(&[1, 2]), 40).unwrap();
        let b = eval_index(&z(&[3]), 40).unwrap();
        assert!(a.agrees(&b, 1e-38));
    }

    #[test]
    fn lincomb_examples() {
        let c = LinComb::zeta(&[2, 2]).scale(&int(2)).add(&LinComb::zeta(&[1, 3]).scale(&int(4)));
        let v = eval_lincomb(&c, 30).unwrap();
        let z2 = eval_index(&z(&[2]), 30).unwrap();
        assert!(v.agrees(&z2.mul(&z2), 1e-28));
        assert_eq!(&v.to_decimal(6), "2.705808");
        let k = eval_lincomb(&LinComb::constant(rat(3, 2)), 20).unwrap();
        assert_eq!(k.err, 0.0);
        assert_eq!(k.to_f64(), 1.5);
    }

    #[test]
    fn t_values() {
        let t2 = eval_t(&[2], 30).unwrap();
        assert!(t2.agrees(&pi_power(2, 30).scale(&rat(1, 8)), 1e-28));
        let t22 = eval_t(&[2, 2], 30).unwrap();
        assert!(t22.agrees(&pi_power(4, 30).scale(&rat(1, 384)), 1e-28));
        let t3 = eval_t(&[3], 30).unwrap();
        assert_eq!(&t3.to_decimal(9), "1.051799790");
        assert!(eval_t(&[2, 1], 10).is_err());
    }

    #[test]
    fn decimal_round_trip() {
        let v = eval_index(&z(&[3]), 30).unwrap();
        let s = v.to_decimal(40);
        let back = BigReal::from_decimal(&s, v.err, 200).unwrap();
        assert!(back.agrees(&v, 1e-29));
    }

    #[test]
    fn oracle_depth1() {
        let a = oracle::eval_direct(&z(&[2]), 20_000);
        assert!((a.value - std::f64::consts::PI.powi(2) / 6.0).abs() <= a.err);
        assert!(a.err < 1e-12);
        let b = oracle::eval_direct(&z(&[-1]), 20_000);
        assert!((b.value + std::f64::consts::LN_2).abs() <= b.err);
    }

    #[test]
    fn divergent_rejected() {
        assert!(eval_index(&z(&[2, 1]), 10).is_err());
        assert!(eval_index(&z(&[2]).with_lead(1), 10).is_err());
    }
}
