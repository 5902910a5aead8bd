//! Block-Lie spaces: golden files, independent oracles and property checks.
//! Set MZVKIT_BLESS=1 to rewrite the golden files.

use std::path::PathBuf;

use mzvkit::blocklie::{
    build_vn, build_w_plus, check_relations, cusp_dim, dims_check, eta_decompose, golden_json, image_pe,
    kernel_period_map, pairing_functional, project_pe,
};
use mzvkit::exactalg::{int, MultiPoly};
use proptest::prelude::*;

fn golden_path(n: u32) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("blocklie_n{n:02}.json"))
}

#[test]
fn golden_files() {
    let bless = std::env::var("MZVKIT_BLESS").is_ok();
    for n in 1..=10 {
        let got = golden_json(n).unwrap();
        let path = golden_path(n);
        if bless {
            std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let want: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(got, want, "n={n}");
    }
}

/// dim S_k from the classical formula in k.
fn cusp_dim_classical(k: u32) -> usize {
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

#[test]
fn cusp_dim_matches_classical_formula() {
    for k in (4..=200).step_by(2) {
        assert_eq!(cusp_dim(k).unwrap(), cusp_dim_classical(k), "weight {k}");
        let n = (k - 2) / 2;
        assert_eq!(((n as usize).saturating_sub(1)) / 2 - cusp_dim(k).unwrap(), (n / 3) as usize);
    }
}

#[test]
fn period_polys_match_cusp_dims() {
    for n in 1..=30 {
        let w = build_w_plus(2 * n).unwrap();
        assert_eq!(w.basis.len(), cusp_dim(2 * n + 2).unwrap(), "2n={}", 2 * n);
        for p in &w.basis {
            assert!(mzvkit::blocklie::is_even_period_poly(p, n));
        }
    }
}

#[test]
fn kernel_period_up_to_14() {
    for n in 2..=14 {
        let k = kernel_period_map(n).unwrap();
        assert!(k.pass, "n={n}: {k:?}");
    }
    assert_eq!(kernel_period_map(5).unwrap().dim_kernel, 1);
    assert_eq!(kernel_period_map(11).unwrap().dim_kernel, 2);
}

#[test]
fn eta_system_solvable_up_to_10() {
    for n in 1..=10 {
        let v = build_vn(n).unwrap();
        for f in image_pe(&v) {
            let e = eta_decompose(&f, n).unwrap();
            assert!(e.alpha_bridge, "n={n}");
        }
    }
}

#[test]
fn projector_closure_and_relations() {
    for n in 1..=9 {
        let v = build_vn(n).unwrap();
        for f in &v.basis {
            let fe = project_pe(f);
            assert!(check_relations(f, n).all());
            assert!(check_relations(&fe, n).all());
            assert!(check_relations(&(f - &fe), n).all());
        }
    }
}

#[test]
fn pairing_on_v() {
    for n in 0..=8 {
        for a in 0..=n / 2 {
            assert!(pairing_functional(a, n).unwrap().pass, "a={a} n={n}");
        }
    }
}

#[test]
fn dims_small_table() {
    for (n, im, ker) in [(3, 1, 1), (5, 1, 2), (6, 2, 2), (7, 2, 3)] {
        let d = dims_check(n).unwrap();
        assert_eq!((d.dim_im, d.dim_ker), (im, ker));
    }
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..5, 0u32..5), -20i64..20), 0..12).prop_map(|terms| {
        let mut p = MultiPoly::zero(3);
        for ((i, j), c) in terms {
            // homogeneous of degree 8
            if i + j <= 8 {
                p.add_term(vec![i, j, 8 - i - j], int(c));
            }
        }
        p
    })
}

proptest! {
    #[test]
    fn pe_idempotent_and_linear(f in arb_poly(), g in arb_poly(), c in -5i64..5) {
        let pf = project_pe(&f);
        prop_assert_eq!(project_pe(&pf), pf.clone());
        let lhs = project_pe(&(&f + &g.scale(&int(c))));
        let rhs = &pf + &project_pe(&g).scale(&int(c));
        prop_assert_eq!(lhs, rhs);
    }
}
