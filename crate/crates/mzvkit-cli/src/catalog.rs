//! Identity ids known to the CLI, their parameters, and how each instance is checked.

use std::collections::BTreeMap;

use mzvkit::blocklie;
use mzvkit::coaction::{self, Family, FAMILIES};
use mzvkit::identities::{self as ids, CheckKind, IdentityInstance};

/// Parameter name to inclusive range.
pub type Ranges = BTreeMap<String, (i64, i64)>;

pub struct Entry {
    pub id: String,
    /// Names of the range flags the id accepts, in parameter order.
    pub params: &'static [&'static str],
    /// Parameters that default to "every valid value" when omitted.
    pub optional: &'static [&'static str],
    pub exact: bool,
    pub description: String,
}

/// One unit of work.
#[derive(Clone, Debug)]
pub enum Job {
    Identity(IdentityInstance),
    Binomial { k: u32, l: u32, r: u32 },
    ModProducts { a: u32, b: u32 },
    Family { f: Family, a: u32, b: u32, r: u32 },
    Dims(u32),
    WPlus(u32),
    KernelPeriod(u32),
    Eta(u32),
    Pairing { a: u32, n: u32 },
}

fn identity_params(id: &str) -> &'static [&'static str] {
    match id {
        "parity3" => &["alpha", "beta", "gamma"],
        "zeta1bar-red" => &["b"],
        "dihedral-even" | "dihedral-odd" | "galois-evbar" | "t-even-even" => &["k", "l"],
        "gen-doubling" => &["s", "t"],
        "double-telescope" => &["a", "n"],
        "t39" => &[],
        _ => &["a", "b"],
    }
}

pub fn entries() -> Vec<Entry> {
    let mut v: Vec<Entry> = ids::IDS
        .iter()
        .map(|&id| Entry {
            id: id.to_string(),
            params: identity_params(id),
            optional: &[],
            exact: matches!(id, "z2242-modprod" | "double-telescope"),
            description: ids::describe(id).unwrap_or_default().to_string(),
        })
        .collect();
    let mut push = |id: String, params, optional, description: &str| {
        v.push(Entry { id, params, optional, exact: true, description: description.to_string() })
    };
    push("lemma-binomial".into(), &["k", "l", "r"], &["r"], "binomial identities (i) and (ii) behind the depth-2 coaction");
    push("mod-products-coaction".into(), &["a", "b"], &[], "binomial form and coaction residual of zeta({2}^a,4,{2}^b) mod products");
    for f in FAMILIES {
        push(format!("dr-{}", f.name()), &["a", "b", "r"], &["r"], "D_{2r+1} of the family against its closed form");
    }
    push("dims".into(), &["n"], &[], "dim im P_e = floor(n/3), dim ker P_e = floor((n-1)/2)");
    push("w-plus".into(), &["n"], &[], "dim of even period polynomials of degree 2n equals dim S_{2n+2}");
    push("kernel-period".into(), &["n"], &[], "kernel of the double-zeta period map against W+ and cusp forms");
    push("eta-decomp".into(), &["n"], &[], "every element of im P_e admits an eta decomposition");
    push("pairing".into(), &["a", "n"], &[], "block-decomposition pairing against the closed functional on V_{n+1}");
    v
}

pub fn find(id: &str) -> Option<Entry> {
    entries().into_iter().find(|e| e.id == id)
}

/// Instances used when no range flag is given.
pub fn catalogue(id: &str) -> Result<Vec<Job>, String> {
    if let Some(f) = id.strip_prefix("dr-") {
        let f: Family = f.parse().map_err(|e: coaction::CoactionError| e.to_string())?;
        return Ok(coaction::family_cases(3)
            .into_iter()
            .filter(|c| c.0 == f)
            .map(|(f, a, b, r)| Job::Family { f, a, b, r })
            .collect());
    }
    Ok(match id {
        "lemma-binomial" => {
            let mut v = Vec::new();
            for k in 1..=10 {
                for l in 1..=10 {
                    v.extend(coaction::lemma_binomial_range(k, l).into_iter().map(|r| Job::Binomial { k, l, r }));
                }
            }
            v
        }
        "mod-products-coaction" => (0..=3).flat_map(|a| (0..=3).map(move |b| Job::ModProducts { a, b })).collect(),
        "dims" => (1..=18).map(Job::Dims).collect(),
        "w-plus" => (1..=30).map(Job::WPlus).collect(),
        "kernel-period" => (2..=14).map(Job::KernelPeriod).collect(),
        "eta-decomp" => (1..=10).map(Job::Eta).collect(),
        "pairing" => (0..=8).flat_map(|n| (0..=n / 2).map(move |a| Job::Pairing { a, n })).collect(),
        _ => ids::instances(id).map_err(|e| e.to_string())?.into_iter().map(Job::Identity).collect(),
    })
}

fn nonneg(name: &str, x: i64) -> Result<u32, String> {
    u32::try_from(x).map_err(|_| format!("--{name} must be non-negative, got {x}"))
}

fn product(entry: &Entry, ranges: &Ranges) -> Result<Vec<BTreeMap<&'static str, i64>>, String> {
    let mut points = vec![BTreeMap::new()];
    for &p in entry.params {
        let Some(&(lo, hi)) = ranges.get(p) else {
            if entry.optional.contains(&p) {
                continue;
            }
            return Err(format!("{} needs --{p} when any range is given", entry.id));
        };
        points = points
            .into_iter()
            .flat_map(|pt| {
                (lo..=hi).map(move |x| {
                    let mut q = pt.clone();
                    q.insert(p, x);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Instances for explicit ranges; every point must satisfy the id's preconditions.
pub fn from_ranges(entry: &Entry, ranges: &Ranges) -> Result<Vec<Job>, String> {
    let mut jobs = Vec::new();
    for pt in product(entry, ranges)? {
        let g = |p: &str| nonneg(p, pt[p]);
        let id = entry.id.as_str();
        let err = |e: &dyn std::fmt::Display| format!("{id}: {e}");
        if let Some(f) = id.strip_prefix("dr-") {
            let f: Family = f.parse().map_err(|e: coaction::CoactionError| e.to_string())?;
            let (a, b) = (g("a")?, g("b")?);
            let rs: Vec<u32> = match pt.get("r") {
                Some(_) => vec![g("r")?],
                None => (0..f.weight(a, b)).filter(|r| 2 * r + 1 < f.weight(a, b)).collect(),
            };
            for r in rs {
                coaction::verify_family_dr(f, a, b, r).map_err(|e| err(&e))?;
                jobs.push(Job::Family { f, a, b, r });
            }
            continue;
        }
        match id {
            "lemma-binomial" => {
                let (k, l) = (g("k")?, g("l")?);
                let rs = match pt.get("r") {
                    Some(_) => vec![g("r")?],
                    None => coaction::lemma_binomial_range(k, l),
                };
                for r in rs {
                    coaction::verify_lemma_binomial(k, l, r).map_err(|e| err(&e))?;
                    jobs.push(Job::Binomial { k, l, r });
                }
            }
            "mod-products-coaction" => jobs.push(Job::ModProducts { a: g("a")?, b: g("b")? }),
            "dims" | "w-plus" | "kernel-period" | "eta-decomp" => {
                let n = g("n")?;
                let min = if id == "kernel-period" { 2 } else { 1 };
                if n < min {
                    return Err(format!("{id}: needs n >= {min}, got {n}"));
                }
                jobs.push(match id {
                    "dims" => Job::Dims(n),
                    "w-plus" => Job::WPlus(n),
                    "kernel-period" => Job::KernelPeriod(n),
                    _ => Job::Eta(n),
                });
            }
            "pairing" => {
                let (a, n) = (g("a")?, g("n")?);
                if 2 * a > n {
                    return Err(format!("pairing: needs 2a <= n, got a={a}, n={n}"));
                }
                jobs.push(Job::Pairing { a, n });
            }
            _ => jobs.extend(identity_from_params(id, &pt).map_err(|e| err(&e))?.into_iter().map(Job::Identity)),
        }
    }
    Ok(jobs)
}

fn identity_from_params(id: &str, pt: &BTreeMap<&str, i64>) -> Result<Vec<IdentityInstance>, String> {
    let g = |p: &str| nonneg(p, pt[p]);
    let e = |x: ids::IdentityError| x.to_string();
    let one = |x: IdentityInstance| vec![x];
    Ok(match id {
        "stuffle-antipode-2242" => one(ids::stuffle_antipode_2242(g("a")?, g("b")?)),
        "two-one-2242" => one(ids::two_one_2242(g("a")?, g("b")?)),
        "parity3" => one(ids::parity3_instance(pt["alpha"], pt["beta"], pt["gamma"]).map_err(e)?),
        "zeta1bar-red" => one(ids::zeta1_bar_reduction(g("b")?)),
        "full1" => one(ids::full_reduction_1(g("a")?, g("b")?)),
        "full2" => one(ids::full_reduction_2(g("a")?, g("b")?)),
        "dihedral-even" => one(ids::dihedral_even(g("k")?, g("l")?).map_err(e)?),
        "dihedral-odd" => {
            let (k, l) = (g("k")?, g("l")?);
            if k + l == 0 {
                return Err("needs k + l > 0".into());
            }
            one(ids::dihedral_odd(k, l))
        }
        "gen-doubling" => {
            let (s, t) = (g("s")?, g("t")?);
            vec![ids::generalized_doubling(s, t).map_err(e)?, ids::generalized_doubling_alt(s, t).map_err(e)?]
        }
        "galois-evbar" => one(ids::galois_descent_evbar(g("k")?, g("l")?).map_err(e)?),
        "zetastar-2242" => one(ids::zetastar_2242_closed(g("a")?, g("b")?)),
        "zeta-2242" => one(ids::zeta_2242_closed(g("a")?, g("b")?)),
        "z2242-modprod" => one(ids::z2242_modprod_instance(g("a")?, g("b")?)),
        "double-telescope" => one(ids::telescope_instance(g("a")?, g("n")?).map_err(e)?),
        "t-expand" => one(ids::t_expand(g("a")?, g("b")?).map_err(e)?),
        "t-even-even" => one(ids::t_even_even(g("k")?, g("l")?).map_err(e)?),
        "t-odd-even" => one(ids::t_odd_even(g("a")?, g("b")?).map_err(e)?),
        "t-even-odd" => one(ids::t_even_odd(g("a")?, g("b")?).map_err(e)?),
        "t39" => one(ids::t39_testvector()),
        other => return Err(format!("unknown identity id: {other}")),
    })
}

impl Job {
    pub fn id(&self) -> String {
        match self {
            Job::Identity(i) => i.id.clone(),
            Job::Binomial { .. } => "lemma-binomial".into(),
            Job::ModProducts { .. } => "mod-products-coaction".into(),
            Job::Family { f, .. } => format!("dr-{}", f.name()),
            Job::Dims(_) => "dims".into(),
            Job::WPlus(_) => "w-plus".into(),
            Job::KernelPeriod(_) => "kernel-period".into(),
            Job::Eta(_) => "eta-decomp".into(),
            Job::Pairing { .. } => "pairing".into(),
        }
    }

    /// (name, value) pairs in parameter order.
    pub fn params(&self) -> Vec<(&'static str, i64)> {
        match self {
            Job::Identity(i) => {
                let mut names: Vec<&'static str> = identity_params(&i.id).to_vec();
                if i.id == "gen-doubling" {
                    names.push("form");
                }
                names.into_iter().zip(i.params.iter().copied()).collect()
            }
            &Job::Binomial { k, l, r } => vec![("k", k.into()), ("l", l.into()), ("r", r.into())],
            &Job::ModProducts { a, b } => vec![("a", a.into()), ("b", b.into())],
            &Job::Family { a, b, r, .. } => vec![("a", a.into()), ("b", b.into()), ("r", r.into())],
            &Job::Dims(n) | &Job::WPlus(n) | &Job::KernelPeriod(n) | &Job::Eta(n) => vec![("n", n.into())],
            &Job::Pairing { a, n } => vec![("a", a.into()), ("n", n.into())],
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Job::Identity(i) => i.kind() == CheckKind::Exact,
            _ => true,
        }
    }

    /// (lhs, rhs, pass) for exact jobs.
    pub fn run_exact(&self) -> Result<(String, String, bool), String> {
        let s = |e: &dyn std::fmt::Display| e.to_string();
        Ok(match self {
            Job::Identity(i) => (i.lhs.to_string(), i.rhs.to_string(), i.holds_exactly()),
            &Job::Binomial { k, l, r } => {
                let c = coaction::verify_lemma_binomial(k, l, r).map_err(|e| s(&e))?;
                (format!("{}; {}", c.lhs_i, c.lhs_ii), format!("{}; {}", c.rhs_i, c.rhs_ii), c.pass)
            }
            &Job::ModProducts { a, b } => {
                let c = coaction::verify_mod_products_2242(a, b);
                let diffs: Vec<String> = c.per_r.iter().map(|(r, d, res)| format!("r={r}: {d}, {res}")).collect();
                (diffs.join("; "), "0".into(), c.pass)
            }
            &Job::Family { f, a, b, r } => {
                let c = coaction::verify_family_dr(f, a, b, r).map_err(|e| s(&e))?;
                (c.computed.to_string(), c.expected.to_string(), c.pass)
            }
            &Job::Dims(n) => {
                let d = blocklie::dims_check(n).map_err(|e| s(&e))?;
                (format!("im={} ker={}", d.dim_im, d.dim_ker), format!("im={} ker={}", d.expected_im, d.expected_ker), d.pass)
            }
            &Job::WPlus(n) => {
                let w = blocklie::build_w_plus(2 * n).map_err(|e| s(&e))?;
                let c = blocklie::cusp_dim(2 * n + 2).map_err(|e| s(&e))?;
                (w.basis.len().to_string(), c.to_string(), w.basis.len() == c)
            }
            &Job::KernelPeriod(n) => {
                let k = blocklie::kernel_period_map(n).map_err(|e| s(&e))?;
                (
                    format!("ker={} in_w_plus={} rank_bound={}", k.dim_kernel, k.kernel_in_w_plus, k.rank_bound),
                    format!("w_plus={} cusp={} im_pe={}", k.dim_w_plus, k.cusp_dim, k.dim_im_pe),
                    k.pass,
                )
            }
            &Job::Eta(n) => {
                let v = blocklie::build_vn(n).map_err(|e| s(&e))?;
                let im = blocklie::image_pe(&v);
                let mut ok = 0;
                for f in &im {
                    if blocklie::eta_decompose(f, n).map(|e| e.alpha_bridge).unwrap_or(false) {
                        ok += 1;
                    }
                }
                (format!("solved={ok}"), format!("dim_im_pe={}", im.len()), ok == im.len())
            }
            &Job::Pairing { a, n } => {
                let p = blocklie::pairing_functional(a, n).map_err(|e| s(&e))?;
                (
                    format!("{} terms, monomialwise={}", p.from_blocks.len(), p.monomialwise),
                    format!("{} terms", p.closed.len()),
                    p.pass,
                )
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranges(pairs: &[(&str, i64, i64)]) -> Ranges {
        pairs.iter().map(|&(k, lo, hi)| (k.to_string(), (lo, hi))).collect()
    }

    #[test]
    fn grid_from_ranges() {
        let e = find("zeta-2242").unwrap();
        let jobs = from_ranges(&e, &ranges(&[("a", 0, 2), ("b", 0, 2)])).unwrap();
        assert_eq!(jobs.len(), 9);
        assert_eq!(jobs[4].params(), vec![("a", 1), ("b", 1)]);
    }

    #[test]
    fn missing_and_invalid_params() {
        let e = find("zeta-2242").unwrap();
        assert!(from_ranges(&e, &ranges(&[("a", 0, 2)])).is_err());
        assert!(from_ranges(&e, &ranges(&[("a", -1, 0), ("b", 0, 0)])).is_err());
        let p = find("pairing").unwrap();
        assert!(from_ranges(&p, &ranges(&[("a", 2, 2), ("n", 3, 3)])).is_err());
    }

    #[test]
    fn optional_r_expands() {
        let e = find("lemma-binomial").unwrap();
        let jobs = from_ranges(&e, &ranges(&[("k", 2, 2), ("l", 2, 2)])).unwrap();
        assert_eq!(jobs.len(), coaction::lemma_binomial_range(2, 2).len());
        let d = find("dr-z2242").unwrap();
        let jobs = from_ranges(&d, &ranges(&[("a", 1, 1), ("b", 0, 0)])).unwrap();
        // weight 6: r = 0, 1, 2
        assert_eq!(jobs.len(), 3);
    }

    #[test]
    fn gen_doubling_has_both_forms() {
        let e = find("gen-doubling").unwrap();
        let jobs = from_ranges(&e, &ranges(&[("s", 2, 2), ("t", 4, 4)])).unwrap();
        let forms: Vec<i64> = jobs.iter().map(|j| j.params()[2].1).collect();
        assert_eq!(forms, vec![1, 2]);
    }

    #[test]
    fn every_entry_has_a_catalogue() {
        for e in entries() {
            assert!(!catalogue(&e.id).unwrap().is_empty(), "{}", e.id);
        }
    }
}
