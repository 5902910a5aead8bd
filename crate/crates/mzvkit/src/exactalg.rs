//! Exact rationals, sparse multivariate polynomials and a few special numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgError {
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VarMismatch { expected: usize, got: usize },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// 2^e as a rational, e may be negative.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << (e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());
static EULER: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

const MEMO_INITIAL: usize = 64;

/// B_n, with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(v) = BERNOULLI.read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = BERNOULLI.write().unwrap();
    let target = n.max(MEMO_INITIAL);
    while table.len() <= target {
        let m = table.len();
        if m == 0 {
            table.push(Rational::one());
            continue;
        }
        // sum_{k<m} binom(m+1,k) B_k + (m+1) B_m = 0
        let mut acc = Rational::zero();
        let mut c = BigInt::one();
        for (k, bk) in table.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * Rational::from_integer(c.clone());
            }
            c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table[n].clone()
}

/// Coefficient of t^n/n! in sech t.
pub fn euler_number(n: usize) -> BigInt {
    if let Some(v) = EULER.read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = EULER.write().unwrap();
    let target = n.max(MEMO_INITIAL);
    while table.len() <= target {
        let m = table.len();
        if m % 2 == 1 {
            table.push(BigInt::zero());
            continue;
        }
        if m == 0 {
            table.push(BigInt::one());
            continue;
        }
        // cosh * sech = 1:  sum_k binom(m, 2k) E_{2k} = 0
        let mut acc = BigInt::zero();
        for k in (0..m).step_by(2) {
            acc += binom_big(m as u64, k as u64) * &table[k];
        }
        table.push(-acc);
    }
    table[n].clone()
}

fn binom_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Generalised binomial coefficient; negative upper index allowed.
pub fn binom(n: i64, k: i64) -> Rational {
    Rational::from_integer(binom_int(n, k))
}

pub fn binom_int(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        binom_big(n as u64, k as u64)
    } else {
        let v = binom_big((-n + k - 1) as u64, k as u64);
        if k % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// Sparse polynomial over Q keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The i-th coordinate function.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Sum of c_i * x_i; handy for linear forms.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, int(c));
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative in variable i.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * int(e[i] as i64));
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*x{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

fn merge(a: &MultiPoly, b: &MultiPoly, sign: i64) -> MultiPoly {
    assert_eq!(a.nvars, b.nvars, "variable count mismatch");
    let mut out = a.clone();
    for (k, v) in &b.terms {
        out.add_term(k.clone(), if sign < 0 { -v.clone() } else { v.clone() });
    }
    out
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, 1)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, -1)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly { nvars: self.nvars, terms: acc }
    }
}

/// Replace x_i by assignment[i].
pub fn poly_substitute(p: &MultiPoly, assignment: &[MultiPoly]) -> Result<MultiPoly, AlgError> {
    if assignment.len() != p.nvars {
        return Err(AlgError::VarMismatch { expected: p.nvars, got: assignment.len() });
    }
    let target = assignment.first().map(|q| q.nvars).unwrap_or(0);
    if let Some(bad) = assignment.iter().find(|q| q.nvars != target) {
        return Err(AlgError::VarMismatch { expected: target, got: bad.nvars });
    }
    // cache powers per variable
    let mut powers: Vec<Vec<MultiPoly>> = assignment.iter().map(|q| vec![MultiPoly::one(q.nvars), q.clone()]).collect();
    let mut out = MultiPoly::zero(target);
    for (e, c) in &p.terms {
        let mut t = MultiPoly::constant(target, c.clone());
        for (i, &k) in e.iter().enumerate() {
            let k = k as usize;
            while powers[i].len() <= k {
                let next = &powers[i][powers[i].len() - 1] * &assignment[i];
                powers[i].push(next);
            }
            t = &t * &powers[i][k];
        }
        out = &out + &t;
    }
    Ok(out)
}

/// Small helper: rational to f64 (lossy).
pub fn to_f64(q: &Rational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // shift both to a manageable range
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900) as usize;
        let n = (q.numer() >> shift).to_f64().unwrap();
        let d = (q.denom() >> shift).to_f64().unwrap();
        n / d
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

/// Echelon form from fraction-free elimination: integer rows, each primitive.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free Gaussian elimination; rows are cleared of denominators first.
pub fn echelon(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    for r in &mut m {
        make_primitive(r);
    }
    let mut pivots = Vec::new();
    let mut k = 0;
    for c in 0..ncols {
        let Some(p) = (k..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(k, p);
        let (top, below) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let piv = &pivot_row[c];
        for row in below {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                *x = piv * &*x - &f * p;
            }
            make_primitive(row);
        }
        pivots.push(c);
        k += 1;
        if k == m.len() {
            break;
        }
    }
    m.truncate(k);
    Echelon { rows: m, pivots, ncols }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    echelon(rows, ncols).pivots.len()
}

/// Reduced row echelon form over Q: nonzero rows with pivot 1, and the pivot columns.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let e = echelon(rows, ncols);
    let mut r: Vec<Vec<Rational>> = e
        .rows
        .iter()
        .zip(&e.pivots)
        .map(|(row, &c)| {
            let p = Rational::from_integer(row[c].clone());
            row.iter().map(|x| Rational::from_integer(x.clone()) / &p).collect()
        })
        .collect();
    for k in (0..r.len()).rev() {
        let c = e.pivots[k];
        let (above, rest) = r.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                *x -= p * &f;
            }
        }
    }
    (r, e.pivots)
}

/// Basis of { x : A x = 0 }.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows, ncols);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (k, &c) in pivots.iter().enumerate() {
            v[c] = -r[k][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Whether v lies in the row span.
pub fn in_row_span(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let n = v.len();
    let base = rank(rows, n);
    let mut all = rows.to_vec();
    all.push(v.to_vec());
    rank(&all, n) == base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        // past the initial memo size
        assert_eq!(bernoulli(81), int(0));
    }

    #[test]
    fn bernoulli_recurrence() {
        for n in 1..=60i64 {
            let s: Rational = (0..=n).map(|k| binom(n + 1, k) * bernoulli(k as usize)).sum();
            assert!(s.is_zero(), "n={n}");
        }
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_number(0), BigInt::from(1));
        assert_eq!(euler_number(2), BigInt::from(-1));
        assert_eq!(euler_number(4), BigInt::from(5));
        assert_eq!(euler_number(6), BigInt::from(-61));
        assert_eq!(euler_number(7), BigInt::from(0));
    }

    #[test]
    fn binom_values() {
        assert_eq!(binom(5, 2), int(10));
        assert_eq!(binom(3, 7), int(0));
        assert_eq!(binom(-2, 3), int(-4));
        assert_eq!(binom(4, -1), int(0));
        assert_eq!(binom(0, 0), int(1));
        assert_eq!(binom(-1, 0), int(1));
    }

    #[test]
    fn substitute_examples() {
        let x1 = MultiPoly::var(2, 0);
        let x2 = MultiPoly::var(2, 1);
        let p = &x1 * &x2;
        assert_eq!(poly_substitute(&p, &[x2.clone(), x1.clone()]).unwrap(), p);

        let q = MultiPoly::var(1, 0).pow(2);
        let s = &x1 + &x2;
        let expect = &(&x1.pow(2) + &(&x1 * &x2).scale(&int(2))) + &x2.pow(2);
        assert_eq!(poly_substitute(&q, &[s]).unwrap(), expect);

        let y = [MultiPoly::var(3, 0), MultiPoly::var(3, 1), MultiPoly::var(3, 2)];
        let d = &y[0] - &y[1];
        let cyc = poly_substitute(&d, &[y[1].clone(), y[2].clone(), y[0].clone()]).unwrap();
        assert_eq!(cyc, &y[1] - &y[2]);

        assert!(poly_substitute(&d, &[y[0].clone()]).is_err());
    }

    #[test]
    fn add_cancels_to_empty() {
        let x = MultiPoly::var(2, 0);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn nullspace_small() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)], vec![int(1), int(0), int(1)]];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: Rational = r.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert!(in_row_span(&rows, &[int(3), int(2), int(5)]));
        assert!(!in_row_span(&rows, &[int(0), int(0), int(1)]));
    }

    #[test]
    fn rank_with_fractions() {
        let rows = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]];
        assert_eq!(rank(&rows, 2), 1);
        assert_eq!(nullspace(&rows, 2).len(), 1);
    }
}
