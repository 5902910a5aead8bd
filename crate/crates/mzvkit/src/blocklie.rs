//! Exact linear algebra on the block-degree-2 spaces V_n ⊂ Q[x1,x2,x3]: the even
//! projector, η-decomposition, even period polynomials and the kernel-period map.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactalg::{bernoulli, binom, int, nullspace, poly_substitute, rank, rref, sign_pow, MultiPoly, Rational};
use crate::mzvword::{block_decomposition, index_to_word, SignedIndex};

#[derive(Debug, Error, PartialEq)]
pub enum BlockError {
    #[error("out of range: {0}")]
    Range(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
}

/// How Relation 3 is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation3 {
    /// f lies in the span of (x1 ± x2)^i (x2 ± x3)^j, i + j = 2n.
    Span,
    /// L f = 0 with L = ((∂1+∂3)² - ∂2²)((∂1-∂3)² - ∂2²); same kernel, used as a cross-check.
    Differential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VSpace {
    pub n: u32,
    /// Reduced echelon basis in graded-lex order, leading coefficient 1.
    pub basis: Vec<MultiPoly>,
}

impl VSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaDecomp {
    pub n: u32,
    /// η_{i,j} for i + j = 2n.
    pub eta: BTreeMap<(u32, u32), Rational>,
    /// α_{2i,0,2j} = 4 η_{2i,2j} for every even pair.
    pub alpha_bridge: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodSpace {
    /// Half the degree.
    pub n: u32,
    pub basis: Vec<MultiPoly>,
}

// ---------------------------------------------------------------------------
// coordinates

/// Exponent vectors of degree d in `nvars` variables, graded-lex descending.
fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for mut rest in monomials(nvars - 1, d - i) {
            rest.insert(0, i);
            out.push(rest);
        }
    }
    out
}

struct Coords {
    mons: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    nvars: usize,
}

impl Coords {
    fn new(nvars: usize, d: u32) -> Self {
        let mons = monomials(nvars, d);
        let index = mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Coords { mons, index, nvars }
    }

    fn vec(&self, p: &MultiPoly) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.mons.len()];
        for (e, c) in &p.terms {
            v[self.index[e]] = c.clone();
        }
        v
    }

    fn poly(&self, v: &[Rational]) -> MultiPoly {
        let mut p = MultiPoly::zero(self.nvars);
        for (m, c) in self.mons.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

fn lin(c: &[i64]) -> MultiPoly {
    MultiPoly::linear(c)
}

/// Permute/sign variables: x_i -> sign_i * x_{perm_i} (exponent bookkeeping only).
fn permute(p: &MultiPoly, perm: [usize; 3], signs: [i64; 3]) -> MultiPoly {
    let mut out = MultiPoly::zero(3);
    for (e, c) in &p.terms {
        let mut ne = vec![0u32; 3];
        let mut s = 1;
        for i in 0..3 {
            ne[perm[i]] += e[i];
            if signs[i] < 0 && e[i] % 2 == 1 {
                s = -s;
            }
        }
        out.add_term(ne, c * int(s));
    }
    out
}

/// The spanning set of Relation 3.
fn span_set(n: u32) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for i in 0..=2 * n {
        let j = 2 * n - i;
        for e in [1, -1] {
            for d in [1, -1] {
                out.push(&lin(&[1, e, 0]).pow(i) * &lin(&[0, 1, d]).pow(j));
            }
        }
    }
    out
}

/// L = Σ ∂i⁴ - 2 Σ_{i<j} ∂i² ∂j².
pub fn relation3_operator(f: &MultiPoly) -> MultiPoly {
    let d2: Vec<MultiPoly> = (0..3).map(|i| f.derivative(i).derivative(i)).collect();
    let mut out = MultiPoly::zero(3);
    for (i, d) in d2.iter().enumerate() {
        out = &out + &d.derivative(i).derivative(i);
        for j in i + 1..3 {
            out = &out - &d.derivative(j).derivative(j).scale(&int(2));
        }
    }
    out
}

fn rel1_cyclic(f: &MultiPoly) -> MultiPoly {
    // f(x2,x3,x1): exponent of x1 moves to slot 3, etc.
    &permute(f, [2, 0, 1], [1, 1, 1]) - f
}

fn rel1_reversal(f: &MultiPoly) -> MultiPoly {
    &permute(f, [2, 1, 0], [1, 1, 1]) + f
}

/// ½(f(0,y,z) - f(0,y,-z)) - f(-y,y,z) + f(y,-z,z), as a polynomial in (y, z).
fn rel2(f: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(2);
    for (e, c) in &f.terms {
        let (i, j, k) = (e[0], e[1], e[2]);
        if i == 0 && k % 2 == 1 {
            out.add_term(vec![j, k], c.clone());
        }
        out.add_term(vec![i + j, k], -c * int(sign_pow(i as i64)));
        out.add_term(vec![i, j + k], c * int(sign_pow(j as i64)));
    }
    out
}

/// Which of Relations 1-3 a polynomial satisfies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub homogeneous: bool,
    pub rel1_cyclic: bool,
    pub rel1_reversal: bool,
    pub rel2: bool,
    pub rel3_span: bool,
    pub rel3_differential: bool,
}

impl RelationReport {
    pub fn all(&self) -> bool {
        self.homogeneous && self.rel1_cyclic && self.rel1_reversal && self.rel2 && self.rel3_span && self.rel3_differential
    }
}

/// Independent re-check of an element of V_n.
pub fn check_relations(f: &MultiPoly, n: u32) -> RelationReport {
    let homogeneous = f.terms.keys().all(|e| e.iter().sum::<u32>() == 2 * n);
    let coords = Coords::new(3, 2 * n);
    let rows: Vec<Vec<Rational>> = span_set(n).iter().map(|p| coords.vec(p)).collect();
    let rel3_span = homogeneous && crate::exactalg::in_row_span(&rows, &coords.vec(f));
    RelationReport {
        homogeneous,
        rel1_cyclic: rel1_cyclic(f).is_zero(),
        rel1_reversal: rel1_reversal(f).is_zero(),
        rel2: rel2(f).is_zero(),
        rel3_span,
        rel3_differential: relation3_operator(f).is_zero(),
    }
}

/// Subspace of the span of `cands` killed by the linear maps `cons`.
fn constrained_span(cands: &[MultiPoly], cons: &[&dyn Fn(&MultiPoly) -> MultiPoly], coords: &Coords) -> Vec<MultiPoly> {
    // constraint matrix: rows indexed by (constraint, output monomial), columns by candidate
    let mut rows: BTreeMap<(usize, Vec<u32>), Vec<Rational>> = BTreeMap::new();
    for (col, b) in cands.iter().enumerate() {
        for (ci, c) in cons.iter().enumerate() {
            for (e, q) in &c(b).terms {
                rows.entry((ci, e.clone())).or_insert_with(|| vec![Rational::zero(); cands.len()])[col] = q.clone();
            }
        }
    }
    let rows: Vec<Vec<Rational>> = rows.into_values().collect();
    let ns = nullspace(&rows, cands.len());
    let vecs: Vec<Vec<Rational>> = ns
        .iter()
        .map(|v| {
            let mut acc = vec![Rational::zero(); coords.mons.len()];
            for (c, b) in v.iter().zip(cands) {
                if c.is_zero() {
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(coords.vec(b)) {
                    *a += c * x;
                }
            }
            acc
        })
        .collect();
    normalized_basis(&vecs, coords)
}

fn normalized_basis(vecs: &[Vec<Rational>], coords: &Coords) -> Vec<MultiPoly> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let (r, _) = rref(vecs, coords.mons.len());
    r.iter().map(|v| coords.poly(v)).collect()
}

const PERMS: [([usize; 3], i64); 6] =
    [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([2, 1, 0], -1), ([0, 2, 1], -1), ([1, 0, 2], -1)];

/// Strictly decreasing exponent triples of degree d: coordinates on alternating polynomials.
fn alt_monomials(d: u32) -> Vec<[u32; 3]> {
    monomials(3, d).into_iter().filter(|e| e[0] > e[1] && e[1] > e[2]).map(|e| [e[0], e[1], e[2]]).collect()
}

/// Coordinates of the alternating projection Σ_σ sgn(σ) p∘σ.
fn alt_vec(p: &MultiPoly, alts: &[[u32; 3]]) -> Vec<Rational> {
    alts.iter()
        .map(|e| {
            PERMS
                .iter()
                .map(|(perm, sg)| p.coeff(&[e[perm[0]], e[perm[1]], e[perm[2]]]) * int(*sg))
                .sum()
        })
        .collect()
}

fn alt_poly(v: &[Rational], alts: &[[u32; 3]]) -> MultiPoly {
    let mut p = MultiPoly::zero(3);
    for (c, e) in v.iter().zip(alts) {
        if c.is_zero() {
            continue;
        }
        for (perm, sg) in PERMS {
            p.add_term(vec![e[perm[0]], e[perm[1]], e[perm[2]]], c * int(sg));
        }
    }
    p
}

/// V_n with Relation 3 in the normative span form.
pub fn build_vn(n: u32) -> Result<VSpace, BlockError> {
    build_vn_with(n, Relation3::Span)
}

/// Relation 1 makes f alternating under S3, so candidates are built in alternating
/// coordinates; Relation 3 (either form) is symmetric, and Relation 2 is imposed as rows.
pub fn build_vn_with(n: u32, rel3: Relation3) -> Result<VSpace, BlockError> {
    if n < 1 {
        return Err(BlockError::Range(format!("n = {n}")));
    }
    let coords = Coords::new(3, 2 * n);
    let alts = alt_monomials(2 * n);
    let to_polys = |rows: Vec<Vec<Rational>>| rows.iter().map(|v| alt_poly(v, &alts)).collect::<Vec<_>>();
    let cands: Vec<MultiPoly> = match rel3 {
        Relation3::Span => {
            let vecs: Vec<Vec<Rational>> = span_set(n).iter().map(|p| alt_vec(p, &alts)).collect();
            let e = crate::exactalg::echelon(&vecs, alts.len());
            to_polys(e.rows.into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect())
        }
        Relation3::Differential => {
            let all: Vec<MultiPoly> = (0..alts.len())
                .map(|i| {
                    let mut v = vec![Rational::zero(); alts.len()];
                    v[i] = Rational::one();
                    alt_poly(&v, &alts)
                })
                .collect();
            let op: &dyn Fn(&MultiPoly) -> MultiPoly = &relation3_operator;
            constrained_span(&all, &[op], &coords)
        }
    };
    let cons: [&dyn Fn(&MultiPoly) -> MultiPoly; 1] = [&rel2];
    Ok(VSpace { n, basis: constrained_span(&cands, &cons, &coords) })
}

/// Keep the monomials with every exponent even.
pub fn project_pe(f: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(f.nvars);
    for (e, c) in &f.terms {
        if e.iter().all(|x| x % 2 == 0) {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// Basis of P_e V_n.
pub fn image_pe(v: &VSpace) -> Vec<MultiPoly> {
    let coords = Coords::new(3, 2 * v.n);
    let vecs: Vec<Vec<Rational>> = v.basis.iter().map(|f| coords.vec(&project_pe(f))).collect();
    normalized_basis(&vecs, &coords)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsCheck {
    pub n: u32,
    pub dim_v: usize,
    pub dim_im: usize,
    pub dim_ker: usize,
    pub expected_im: usize,
    pub expected_ker: usize,
    pub pass: bool,
}

pub fn dims_of(v: &VSpace) -> DimsCheck {
    let n = v.n;
    let dim_im = image_pe(v).len();
    let dim_ker = v.dim() - dim_im;
    let expected_im = (n / 3) as usize;
    let expected_ker = ((n - 1) / 2) as usize;
    DimsCheck { n, dim_v: v.dim(), dim_im, dim_ker, expected_im, expected_ker, pass: dim_im == expected_im && dim_ker == expected_ker }
}

/// Ranks of P_e on V_n against ⌊n/3⌋ and ⌊(n-1)/2⌋.
pub fn dims_check(n: u32) -> Result<DimsCheck, BlockError> {
    Ok(dims_of(&build_vn(n)?))
}

// ---------------------------------------------------------------------------
// η-decomposition

fn four_term(i: u32, j: u32) -> MultiPoly {
    let s = int(sign_pow(i as i64));
    let a = lin(&[1, -1, 0]).pow(i);
    let b = lin(&[1, 1, 0]).pow(i).scale(&s);
    let c = lin(&[0, 1, -1]).pow(j);
    let d = lin(&[0, 1, 1]).pow(j);
    &(&(&a * &c) + &(&b * &c)) + &(&(&a * &d) + &(&b * &d))
}

/// Solve f = Σ η_{i,j} (four-term element) with antisymmetry and the Bernoulli recursion
/// (2a+1) η_{2a+1,2b-1} = 2 Σ_s C(2a+2s,2a) B_{2s} η_{2a+2s,2b-2s} imposed.
pub fn eta_decompose(f: &MultiPoly, n: u32) -> Result<EtaDecomp, BlockError> {
    eta_decompose_with(f, n, 1)
}

/// `bern_sign` = -1 inserts (-1)^s in the recursion; kept to record that this variant is inconsistent.
pub fn eta_decompose_with(f: &MultiPoly, n: u32, bern_sign: i64) -> Result<EtaDecomp, BlockError> {
    if n < 1 {
        return Err(BlockError::Range(format!("n = {n}")));
    }
    if project_pe(f) != *f || f.terms.keys().any(|e| e.iter().sum::<u32>() != 2 * n) {
        return Err(BlockError::Range("f is not an even homogeneous polynomial of degree 2n".into()));
    }
    let m = 2 * n as usize + 1;
    let coords = Coords::new(3, 2 * n);
    // augmented matrix [A | b]
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let cols: Vec<Vec<Rational>> = (0..=2 * n).map(|i| coords.vec(&four_term(i, 2 * n - i))).collect();
    let target = coords.vec(f);
    for r in 0..coords.mons.len() {
        let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
        row.push(target[r].clone());
        rows.push(row);
    }
    let unit = |entries: &[(usize, Rational)]| {
        let mut row = vec![Rational::zero(); m + 1];
        for (k, c) in entries {
            row[*k] += c;
        }
        row
    };
    for i in 0..m {
        rows.push(unit(&[(i, int(1)), (m - 1 - i, int(1))]));
    }
    for a in 0..n as usize {
        let b = n as usize - a;
        let mut e = vec![(2 * a + 1, int(2 * a as i64 + 1))];
        for s in 0..=b {
            let sg = if bern_sign < 0 { sign_pow(s as i64) } else { 1 };
            let c = int(-2 * sg) * binom((2 * a + 2 * s) as i64, 2 * a as i64) * bernoulli(2 * s);
            e.push((2 * a + 2 * s, c));
        }
        rows.push(unit(&e));
    }
    let base = rank(&rows.iter().map(|r| r[..m].to_vec()).collect::<Vec<_>>(), m);
    if rank(&rows, m + 1) != base {
        return Err(BlockError::Inconsistent(format!("n = {n}")));
    }
    // one particular solution: nullspace of [A | b] with last coordinate -1
    let ns = nullspace(&rows, m + 1);
    let v = ns
        .iter()
        .find(|v| !v[m].is_zero())
        .map(|v| {
            let s = -v[m].clone();
            v[..m].iter().map(|x| x / &s).collect::<Vec<_>>()
        })
        .unwrap_or_else(|| vec![Rational::zero(); m]);
    let eta: BTreeMap<(u32, u32), Rational> = (0..m).map(|i| ((i as u32, 2 * n - i as u32), v[i].clone())).collect();
    let alpha_bridge = (0..=n).all(|i| {
        let (p, q) = (2 * i, 2 * n - 2 * i);
        f.coeff(&[p, 0, q]) == int(4) * &eta[&(p, q)]
    });
    Ok(EtaDecomp { n, eta, alpha_bridge })
}

// ---------------------------------------------------------------------------
// period polynomials

fn xy_monomial(a: u32, b: u32) -> MultiPoly {
    MultiPoly::monomial(vec![a, b], Rational::one())
}

/// P(X,Y) + s·(P(X,X+Y) + P(X+Y,Y)).
fn three_term_signed(p: &MultiPoly, s: i64) -> MultiPoly {
    let x = lin(&[1, 0]);
    let y = lin(&[0, 1]);
    let xy = lin(&[1, 1]);
    let a = poly_substitute(p, &[x, xy.clone()]).expect("two variables");
    let b = poly_substitute(p, &[xy, y]).expect("two variables");
    p + &(&a + &b).scale(&int(s))
}

/// P(X,Y) - P(X,X+Y) - P(X+Y,Y); with all plus signs the relation sends x²y²(x²-y²)³ to twice itself.
pub fn three_term(p: &MultiPoly) -> MultiPoly {
    three_term_signed(p, -1)
}

/// The all-plus variant.
pub fn three_term_plus(p: &MultiPoly) -> MultiPoly {
    three_term_signed(p, 1)
}

/// Membership in W_{2n}^+ checked condition by condition.
pub fn is_even_period_poly(p: &MultiPoly, n: u32) -> bool {
    let homog_even = p.terms.keys().all(|e| e[0] + e[1] == 2 * n && e[0] % 2 == 0 && e[1] % 2 == 0);
    let axes = p.terms.keys().all(|e| e[0] != 0 && e[1] != 0);
    let swapped = {
        let mut q = MultiPoly::zero(2);
        for (e, c) in &p.terms {
            q.add_term(vec![e[1], e[0]], c.clone());
        }
        q
    };
    homog_even && axes && (p + &swapped).is_zero() && three_term(p).is_zero()
}

/// Even period polynomials of degree `two_n`.
pub fn build_w_plus(two_n: u32) -> Result<PeriodSpace, BlockError> {
    if two_n < 2 || two_n % 2 == 1 {
        return Err(BlockError::Range(format!("degree {two_n}")));
    }
    let n = two_n / 2;
    let coords = Coords::new(2, two_n);
    let cands: Vec<MultiPoly> = (1..n).map(|i| xy_monomial(2 * i, two_n - 2 * i)).collect();
    let swap = |p: &MultiPoly| {
        let mut q = p.clone();
        for (e, c) in &p.terms {
            q.add_term(vec![e[1], e[0]], c.clone());
        }
        q
    };
    let cons: [&dyn Fn(&MultiPoly) -> MultiPoly; 2] = [&swap, &three_term];
    Ok(PeriodSpace { n, basis: constrained_span(&cands, &cons, &coords) })
}

/// dim S_weight by the case formula in n = (weight-2)/2, fractions floored.
pub fn cusp_dim(weight: u32) -> Result<usize, BlockError> {
    if weight < 4 || weight % 2 == 1 {
        return Err(BlockError::Range(format!("weight {weight}")));
    }
    let n = (weight - 2) / 2;
    let base = n / 6;
    let d = match n % 6 {
        0 => base - 1,
        5 => base + 1,
        _ => base,
    };
    debug_assert_eq!((n as i64 - 1).div_euclid(2) - d as i64, (n / 3) as i64);
    Ok(d as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelPeriod {
    pub n: u32,
    /// (k, ℓ) with k + ℓ = n, 1 <= k < ℓ.
    pub pairs: Vec<(u32, u32)>,
    /// Columns are the pairs; rows are monomials X^i Y^{2n-i}.
    #[serde(skip)]
    pub matrix: Vec<Vec<Rational>>,
    #[serde(skip)]
    pub kernel: Vec<Vec<Rational>>,
    pub rank: usize,
    pub dim_kernel: usize,
    pub dim_w_plus: usize,
    pub cusp_dim: usize,
    pub dim_im_pe: usize,
    pub kernel_in_w_plus: bool,
    pub dims_agree: bool,
    pub rank_bound: bool,
    pub pass: bool,
}

fn q_poly(k: u32, l: u32) -> MultiPoly {
    &xy_monomial(2 * k, 2 * l) - &xy_monomial(2 * l, 2 * k)
}

/// a ↦ Σ a_{k,ℓ} [Q(X,Y) + Q(X,X+Y) + Q(X+Y,Y)], its kernel, and the three assertions.
pub fn kernel_period_map(n: u32) -> Result<KernelPeriod, BlockError> {
    if n < 2 {
        return Err(BlockError::Range(format!("n = {n}")));
    }
    let pairs: Vec<(u32, u32)> = (1..n).map(|k| (k, n - k)).filter(|(k, l)| k < l).collect();
    let coords = Coords::new(2, 2 * n);
    let images: Vec<Vec<Rational>> = pairs.iter().map(|&(k, l)| coords.vec(&three_term(&q_poly(k, l)))).collect();
    let matrix: Vec<Vec<Rational>> = (0..coords.mons.len()).map(|r| images.iter().map(|c| c[r].clone()).collect()).collect();
    let kernel = if pairs.is_empty() { Vec::new() } else { nullspace(&matrix, pairs.len()) };
    let rank_a = pairs.len() - kernel.len();
    let combo = |a: &[Rational]| {
        let mut p = MultiPoly::zero(2);
        for (c, &(k, l)) in a.iter().zip(&pairs) {
            p = &p + &q_poly(k, l).scale(c);
        }
        p
    };
    let w = build_w_plus(2 * n)?;
    // (a) kernel -> W+, and every W+ element comes from the kernel
    let forward = kernel.iter().all(|a| is_even_period_poly(&combo(a), n));
    let backward = w.basis.iter().all(|p| {
        let a: Vec<Rational> = pairs.iter().map(|&(k, l)| p.coeff(&[2 * k, 2 * l])).collect();
        combo(&a) == *p && three_term(p).is_zero()
    });
    let cusp = cusp_dim(2 * n + 2)?;
    let dims_agree = kernel.len() == w.basis.len() && w.basis.len() == cusp;
    let dim_im_pe = dims_check(n)?.dim_im;
    let expected = ((n - 1) / 2) as usize - cusp;
    let rank_bound = rank_a <= dim_im_pe && rank_a == expected && expected == (n / 3) as usize;
    let kernel_in_w_plus = forward && backward;
    Ok(KernelPeriod {
        n,
        pairs,
        matrix,
        rank: rank_a,
        dim_kernel: kernel.len(),
        kernel,
        dim_w_plus: w.basis.len(),
        cusp_dim: cusp,
        dim_im_pe,
        kernel_in_w_plus,
        dims_agree,
        rank_bound,
        pass: kernel_in_w_plus && dims_agree && rank_bound,
    })
}

// ---------------------------------------------------------------------------
// pairing with double zetas

#[derive(Clone, Debug, PartialEq)]
pub struct PairingFunctional {
    pub a: u32,
    pub n: u32,
    /// Nonzero values on degree-(2n+2) monomials from the block-decomposition pairing.
    pub from_blocks: BTreeMap<Vec<u32>, Rational>,
    /// The closed form ¼ δ_{i=2n-2a+2, j=0, k=2a}.
    pub closed: BTreeMap<Vec<u32>, Rational>,
    /// Whether the two agree monomial by monomial (they do not: the per-s pairs leave
    /// x1^{2s+1} x3^{2n-2s+1} and x1^{2s+2} x3^{2n-2s} terms).
    pub monomialwise: bool,
    /// Agreement on every basis element of V_{n+1}.
    pub pass: bool,
}

fn apply_map(m: &BTreeMap<Vec<u32>, Rational>, f: &MultiPoly) -> Rational {
    f.terms.iter().map(|(e, c)| c * m.get(e).cloned().unwrap_or_else(Rational::zero)).sum()
}

impl PairingFunctional {
    /// The closed form applied to f.
    pub fn apply(&self, f: &MultiPoly) -> Rational {
        apply_map(&self.closed, f)
    }

    pub fn apply_blocks(&self, f: &MultiPoly) -> Rational {
        apply_map(&self.from_blocks, f)
    }
}

/// ⟨I(0;w;1), x1^i x2^j x3^k⟩ = δ_{ℓ=(i+2,j+1,k+1)} - δ_{ℓ=(i+1,j+1,k+2)} for block data ℓ of 0w1.
pub fn block_pairing(blocks: &[usize], e: &[u32]) -> Rational {
    if blocks.len() != 3 {
        return Rational::zero();
    }
    let l: Vec<u32> = blocks.iter().map(|&x| x as u32).collect();
    let mut v = Rational::zero();
    if l == [e[0] + 2, e[1] + 1, e[2] + 1] {
        v += int(1);
    }
    if l == [e[0] + 1, e[1] + 1, e[2] + 2] {
        v -= int(1);
    }
    v
}

/// The functional of ζ^l(2a+1, 2n-2a+3) on V_{n+1}, via
/// ζ^l(2a+1,2n-2a+3) = (-1)^n/4 Σ_{s=a}^{n-a} ζ^l({2}^s,4,{2}^{n-s}).
pub fn pairing_functional(a: u32, n: u32) -> Result<PairingFunctional, BlockError> {
    if 2 * a > n {
        return Err(BlockError::Range(format!("need 0 <= 2a <= n, got a={a}, n={n}")));
    }
    let quarter = Rational::new(1.into(), 4.into());
    let mut from_blocks = BTreeMap::new();
    let words: Vec<(i64, Vec<usize>)> = (a..=n - a)
        .map(|s| {
            let idx = SignedIndex::from_signed(&crate::identities::twos_around(s as usize, 4, (n - s) as usize));
            let (sg, w) = index_to_word(&idx);
            (sg, block_decomposition(&w).expect("classical word"))
        })
        .collect();
    for e in monomials(3, 2 * n + 2) {
        let mut v = Rational::zero();
        for (sg, bl) in &words {
            v += block_pairing(bl, &e) * int(*sg);
        }
        let v = v * int(sign_pow(n as i64)) * &quarter;
        if !v.is_zero() {
            from_blocks.insert(e, v);
        }
    }
    let mut closed = BTreeMap::new();
    closed.insert(vec![2 * n - 2 * a + 2, 0, 2 * a], quarter);
    let monomialwise = from_blocks == closed;
    let v = build_vn(n + 1)?;
    let pass = v.basis.iter().all(|f| apply_map(&from_blocks, f) == apply_map(&closed, f));
    Ok(PairingFunctional { a, n, from_blocks, closed, monomialwise, pass })
}

// ---------------------------------------------------------------------------
// golden files

fn poly_json(p: &MultiPoly) -> Value {
    let m: serde_json::Map<String, Value> = p
        .terms
        .iter()
        .rev()
        .map(|(e, c)| (e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), Value::String(c.to_string())))
        .collect();
    Value::Object(m)
}

/// Golden record for one n: dimensions and normalized bases.
pub fn golden_json(n: u32) -> Result<Value, BlockError> {
    let v = build_vn(n)?;
    let d = dims_of(&v);
    let w = build_w_plus(2 * n)?;
    Ok(json!({
        "n": n,
        "dim_v": d.dim_v,
        "dim_im_pe": d.dim_im,
        "dim_ker_pe": d.dim_ker,
        "dim_w_plus": w.basis.len(),
        "cusp_dim": cusp_dim(2 * n + 2)?,
        "basis": v.basis.iter().map(poly_json).collect::<Vec<_>>(),
        "im_pe_basis": image_pe(&v).iter().map(poly_json).collect::<Vec<_>>(),
        "w_plus_basis": w.basis.iter().map(poly_json).collect::<Vec<_>>(),
    }))
}

/// One row per n of the dimension table, computed concurrently.
pub fn dims_table(n_max: u32) -> Vec<DimsCheck> {
    let ns: Vec<u32> = (1..=n_max).collect();
    crate::par::map(&ns, |&n| dims_check(n).expect("n >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(e: [u32; 3]) -> MultiPoly {
        MultiPoly::monomial(e.to_vec(), Rational::one())
    }

    #[test]
    fn projector_examples() {
        assert_eq!(project_pe(&x([2, 2, 2])), x([2, 2, 2]));
        assert!(project_pe(&x([3, 1, 2])).is_zero());
    }

    #[test]
    fn small_dims() {
        for (n, im, ker) in [(1, 0, 0), (3, 1, 1), (5, 1, 2), (6, 2, 2), (7, 2, 3)] {
            let d = dims_check(n).unwrap();
            assert_eq!((d.dim_im, d.dim_ker), (im, ker), "n={n}");
            assert!(d.pass);
        }
    }

    #[test]
    fn differential_form_agrees() {
        for n in 1..=6 {
            assert_eq!(build_vn(n).unwrap(), build_vn_with(n, Relation3::Differential).unwrap(), "n={n}");
        }
    }

    #[test]
    fn basis_satisfies_relations() {
        for n in [3, 5] {
            for f in build_vn(n).unwrap().basis {
                assert!(check_relations(&f, n).all());
                let fe = project_pe(&f);
                assert!(check_relations(&fe, n).all());
                assert!(check_relations(&(&f - &fe), n).all());
            }
        }
        // a non-member
        assert!(!check_relations(&x([6, 0, 0]), 3).all());
    }

    #[test]
    fn eta_n3() {
        let v = build_vn(3).unwrap();
        let im = image_pe(&v);
        assert_eq!(im.len(), 1);
        let e = eta_decompose(&im[0], 3).unwrap();
        assert!(e.alpha_bridge);
        for ((i, j), c) in &e.eta {
            assert_eq!(*c, -e.eta[&(*j, *i)].clone());
        }
        // (-1)^s in the recursion makes the system unsolvable
        assert!(matches!(eta_decompose_with(&im[0], 3, -1), Err(BlockError::Inconsistent(_))));
        let z = eta_decompose(&MultiPoly::zero(3), 3).unwrap();
        assert!(z.eta.values().all(|c| c.is_zero()));
    }

    #[test]
    fn period_polys() {
        assert_eq!(build_w_plus(8).unwrap().basis.len(), 0);
        let w = build_w_plus(10).unwrap();
        assert_eq!(w.basis.len(), 1);
        let d = &lin(&[1, 0]).pow(2) - &lin(&[0, 1]).pow(2);
        let expect = &MultiPoly::monomial(vec![2, 2], Rational::one()) * &d.pow(3);
        assert_eq!(w.basis[0], expect);
        assert!(build_w_plus(9).is_err());
        assert_eq!(three_term_plus(&expect), expect.scale(&int(2)));
    }

    #[test]
    fn cusp_values() {
        assert_eq!(cusp_dim(12).unwrap(), 1);
        assert_eq!(cusp_dim(10).unwrap(), 0);
        assert_eq!(cusp_dim(24).unwrap(), 2);
        assert!(cusp_dim(13).is_err());
    }

    #[test]
    fn kernel_period_small() {
        let k = kernel_period_map(5).unwrap();
        assert_eq!((k.pairs.len(), k.dim_kernel, k.rank), (2, 1, 1));
        assert!(k.pass);
        assert_eq!(kernel_period_map(4).unwrap().dim_kernel, 0);
        let k2 = kernel_period_map(2).unwrap();
        assert!(k2.pairs.is_empty() && k2.pass);
    }

    #[test]
    fn pairing_examples() {
        let p = pairing_functional(1, 4).unwrap();
        assert!(p.pass);
        assert!(!p.monomialwise);
        assert_eq!(p.apply(&x([8, 0, 2])), Rational::new(1.into(), 4.into()));
        assert!(p.apply(&x([7, 1, 2])).is_zero());
        assert!(pairing_functional(3, 4).is_err());
    }
}
