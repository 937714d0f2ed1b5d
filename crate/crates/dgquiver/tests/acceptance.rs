//! Acceptance suite: one test per criterion, exact checks throughout.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion detail lines; the test names themselves give the
//! pass/fail line per criterion.

use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use dgquiver::chains::{arrow_walk_chain, harada_sai_check, nonzero_path_search};
use dgquiver::decompose::derived_iso;
use dgquiver::derived::{ar_translate, check_gorenstein, fixed_point_check};
use dgquiver::dga::DGAlgebra;
use dgquiver::format::{
    emit_canonical, parse_json, Certifications, DgaSpecFile, FragmentJson, ModuleSpecFile,
};
use dgquiver::module::{DGModule, Side};
use dgquiver::quiver::{
    analyze_shape, beta_per_row, build_component, count_components, label_symmetry_check,
    mesh_beta_check, no_loops_check, BuiltComponent, ShapeVerdict,
};
use dgquiver::resolution::{beta, resolve_compact, tor_kk_growth};
use dgquiver::sample::random_perfect_module;
use dgquiver::scalar::FieldKind;
use dgquiver::tensor::{tensor_bimodule, DGBimodule};
use dgquiver::translation::{
    additive_function_check, tree_from_fragment, zt_build, zt_quotient, GroupElement, LabelledTree,
};

fn sphere(d: i64) -> Arc<DGAlgebra> {
    DGAlgebra::sphere(d, FieldKind::Rational).unwrap()
}

fn regular(d: i64) -> Arc<DGModule> {
    Arc::new(DGModule::regular(&sphere(d), Side::Left))
}

/// Radius-3 and radius-4 windows over the 2- and 3-sphere models, built once.
fn fragments() -> &'static Mutex<Vec<((i64, usize), BuiltComponent)>> {
    static CELL: OnceLock<Mutex<Vec<((i64, usize), BuiltComponent)>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for d in [2i64, 3] {
            for radius in [3usize, 4] {
                let built = build_component(&sphere(d), &regular(d), radius)
                    .expect("sphere component builds");
                out.push(((d, radius), built));
            }
        }
        Mutex::new(out)
    })
}

fn pass(line: &str) {
    println!("PASS {line}");
}

#[test]
fn criterion_01_sphere_component_count() {
    for (d, expected) in [(2i64, 1usize), (3, 2), (4, 3)] {
        let t0 = Instant::now();
        let got = count_components(&sphere(d), 6).unwrap();
        let elapsed = t0.elapsed();
        assert_eq!(got, expected, "sphere d={d}");
        assert!(elapsed < Duration::from_secs(10), "d={d} took {elapsed:?}");
        pass(&format!(
            "criterion 1: sphere d={d} has {got} component(s) (= d-1) in {elapsed:.2?}"
        ));
    }
}

#[test]
fn criterion_02_za_infinity_consistency() {
    let t0 = Instant::now();
    let guard = fragments().lock().unwrap();
    for d in [2i64, 3] {
        let mut verdicts = Vec::new();
        for radius in [3usize, 4] {
            let built = guard
                .iter()
                .find(|((dd, r), _)| *dd == d && *r == radius)
                .map(|(_, b)| b)
                .unwrap();
            let f = &built.fragment;
            assert!(
                f.arrows.iter().all(|a| (a.a, a.b) == (1, 1)),
                "labels all (1,1)"
            );
            let verdict = analyze_shape(f);
            assert!(
                verdict.is_consistent(),
                "d={d} radius={radius}: {verdict:?}"
            );
            // Exactly one end row: row 0 exists and every row-0 vertex lies
            // on one τ-orbit, which analyze_shape already enforces; check
            // row 0 is present.
            assert!(f.vertices.iter().any(|v| v.row == 0));
            verdicts.push(verdict.is_consistent());
        }
        assert_eq!(
            verdicts[0], verdicts[1],
            "verdict stable from radius 3 to 4"
        );
        pass(&format!(
            "criterion 2: sphere d={d} windows are ZA∞-consistent, stable 3→4"
        ));
    }
    assert!(t0.elapsed() < Duration::from_secs(60));
}

#[test]
fn criterion_03_mesh_beta_additivity() {
    let guard = fragments().lock().unwrap();
    for ((d, radius), built) in guard.iter() {
        mesh_beta_check(&built.fragment)
            .unwrap_or_else(|w| panic!("mesh additivity failed (d={d}, r={radius}): {w}"));
    }
    pass("criterion 3: β(τN) + β(N) = β(Y) at every interior mesh, exactly");
}

#[test]
fn criterion_04_beta_tau_invariance() {
    let r = sphere(2);
    for seed in 0..20u64 {
        let m = random_perfect_module(&r, seed).unwrap();
        let t = ar_translate(&m).unwrap();
        assert_eq!(beta(&m).unwrap(), beta(&t).unwrap(), "seed {seed}");
    }
    pass("criterion 4: β(τM) = β(M) for 20 random perfect modules over the 2-sphere");
}

#[test]
fn criterion_05_label_symmetry_with_fault_injection() {
    let guard = fragments().lock().unwrap();
    for ((d, radius), built) in guard.iter() {
        label_symmetry_check(&built.fragment)
            .unwrap_or_else(|w| panic!("label symmetry failed (d={d}, r={radius}): {w}"));
    }
    // Fault injection: a corrupted label must be reported with a witness.
    let built = &guard[0].1;
    let mut corrupted = built.fragment.clone();
    let idx = corrupted
        .arrows
        .iter()
        .position(|a| {
            let partnered = corrupted.tau.iter().any(|&(from, _)| from == a.dst);
            partnered
        })
        .expect("an arrow with τ-partner exists");
    corrupted.arrows[idx].a = 7;
    let caught = label_symmetry_check(&corrupted).is_err() || mesh_beta_check(&corrupted).is_err();
    assert!(caught, "corrupted label must be detected");
    pass("criterion 5: label symmetry holds on interior meshes; corrupted label detected");
}

#[test]
fn criterion_06_resolution_dimension_identity() {
    for d in [2i64, 3, 4] {
        let r = sphere(d);
        for seed in 0..20u64 {
            let m = random_perfect_module(&r, seed).unwrap();
            let res = resolve_compact(&m).unwrap();
            assert_eq!(
                res.module().dim(),
                res.beta() * r.dim(),
                "dim F = β·dim R (d={d}, seed {seed})"
            );
        }
    }
    pass("criterion 6: dim_k F = β(M)·dim_k R for 20 random modules over each sphere model");
}

#[test]
fn criterion_07_harada_sai() {
    let t0 = Instant::now();
    let r = sphere(2);
    let reg = regular(2);
    let mut built = build_component(&r, &reg, 2).unwrap();
    let seed_vertex = built.vertex_ids[0];
    // β ≤ 2 and dim R = 2 give p = 4: chains of length 15 must vanish.
    for seed in 0..10u64 {
        let (route, maps) =
            arrow_walk_chain(&mut built.explorer, seed_vertex, 15, 2, seed).unwrap();
        let report = harada_sai_check(&maps).unwrap();
        assert_eq!(report.p, 4);
        assert_eq!(report.bound, 15);
        assert!(report.verdict, "chain {seed} along {route:?}: {report:?}");
        assert!(
            report.observed_vanishing.unwrap_or(usize::MAX) <= report.bound,
            "chain {seed} vanishes within the bound"
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "{elapsed:?}");
    pass(&format!(
        "criterion 7: 10 chains of 15 non-isomorphisms vanish within 2^4-1 ({elapsed:.2?})"
    ));
}

#[test]
fn criterion_08_nonzero_paths() {
    let r = sphere(2);
    let reg = regular(2);
    let mut built = build_component(&r, &reg, 1).unwrap();
    let seed_vertex = built.vertex_ids[0];
    for q in 1..=6usize {
        let path = nonzero_path_search(&mut built.explorer, seed_vertex, q).unwrap();
        assert_eq!(path.maps.len(), q);
        // The constructor certifies both the path composite and its pairing
        // with the residue-module witness; reaching here means both held.
    }
    pass("criterion 8: nonzero paths of irreducible morphisms found for q = 1..6");
}

#[test]
fn criterion_09_non_compactness_of_k() {
    for d in [2i64, 3] {
        let g = tor_kk_growth(&sphere(d), &[2, 4, 6]).unwrap();
        assert!(g[0] < g[1] && g[1] < g[2], "sphere d={d}: {g:?}");
    }
    let trivial = DGAlgebra::trivial(FieldKind::Rational);
    let g = tor_kk_growth(&trivial, &[2, 4, 6]).unwrap();
    assert_eq!(g, vec![1, 1, 1]);
    pass("criterion 9: residue-module resolution census grows strictly over spheres, constant over k");
}

#[test]
fn criterion_10_gorenstein_detection() {
    for d in [2i64, 3, 4] {
        let report = check_gorenstein(&sphere(d)).unwrap();
        assert_eq!(report.left_shift, Some(d), "left shift for d={d}");
        assert_eq!(report.right_shift, Some(d), "right shift for d={d}");
    }
    let non_gorenstein =
        DGAlgebra::square_zero(FieldKind::Rational, &[("x".into(), 2), ("y".into(), 2)]).unwrap();
    let report = check_gorenstein(&non_gorenstein).unwrap();
    assert_eq!(report.left_shift, None);
    assert_eq!(report.right_shift, None);
    pass("criterion 10: duality shift = d on both sides for spheres, absent for k⟨x,y⟩/(x,y)²");
}

#[test]
fn criterion_11_fixed_point_freeness() {
    let mut guard = fragments().lock().unwrap();
    let mut checked = 0usize;
    for ((_, radius), built) in guard.iter_mut() {
        if *radius != 4 {
            continue;
        }
        let report = built.explorer.report().clone();
        for i in 0..built.vertex_ids.len() {
            let v = built.vertex_ids[i];
            let m = Arc::clone(built.explorer.module(v));
            for p in [-3i64, -2, -1, 1, 2, 3] {
                let fp = fixed_point_check(&m, p, &report).unwrap();
                assert!(fp.fixed_point_free, "vertex {i}, power {p}");
                // The degree certificate must agree with the exact test.
                if fp.by_degree_argument {
                    let translated = dgquiver::derived::ar_translate_power(&m, p, &report).unwrap();
                    assert!(derived_iso(&m, &translated).unwrap().is_none());
                }
                checked += 1;
            }
        }
    }
    pass(&format!(
        "criterion 11: τ^p has no fixed points for 1 ≤ |p| ≤ 3 ({checked} checks)"
    ));
}

#[test]
fn criterion_12_inf_degree_formula() {
    for (d, seeds) in [(2i64, 0..10u64), (3, 0..10u64)] {
        let r = sphere(d);
        let dr = DGBimodule::dual_regular(&r);
        let inf_dr = dr.as_left().inf_cohomology().unwrap();
        for seed in seeds {
            let m = random_perfect_module(&r, seed).unwrap();
            let res = resolve_compact(&m).unwrap();
            let derived_tensor = tensor_bimodule(&dr, res.module()).unwrap();
            let lhs = derived_tensor.inf_cohomology().unwrap();
            let rhs = inf_dr + m.inf_cohomology().unwrap();
            assert_eq!(lhs, rhs, "d={d}, seed {seed}");
        }
    }
    pass("criterion 12: inf H(DR ⊗ᴸ M) = inf H(DR) + inf H(M) for 20 random modules, exactly");
}

#[test]
fn criterion_13_combinatorial_layer() {
    // Covering and admissibility on A3 and A4 windows with a shift quotient.
    for n in [3usize, 4] {
        let values: Vec<u64> = (0..n).map(|i| (i + 1) as u64).collect();
        let tree = LabelledTree::path(&values, false).unwrap();
        let zt = zt_build(&tree, 0, 3).unwrap();
        let trivial = zt_quotient(&zt, &GroupElement::identity(&tree)).unwrap();
        trivial.covering_check(&zt).unwrap();
        assert!(trivial.tau_fixed_point().is_none());
        let quotient = zt_quotient(&zt, &GroupElement::pure_shift(&tree, 1)).unwrap();
        quotient.covering_check(&zt).unwrap();
        assert!(quotient.tau_fixed_point().is_some());
    }
    // A∞ windows: nontrivial admissible shifts force τ-fixed points and are
    // rejected as AR-component shapes.
    let tree = LabelledTree::path(&[1, 2, 3, 4, 5, 6, 7], true).unwrap();
    let zt = zt_build(&tree, 0, 4).unwrap();
    for m in [1i64, 2, 3] {
        let q = zt_quotient(&zt, &GroupElement::pure_shift(&tree, m)).unwrap();
        let fp = q.tau_fixed_point();
        assert!(fp.is_some(), "shift {m} creates a τ-fixed point");
    }
    // The additive function from computed fragments passes on the tree; the
    // β profile grows strictly row by row away from the quiver end.
    let guard = fragments().lock().unwrap();
    for d in [2i64, 3] {
        let built = guard
            .iter()
            .find(|((dd, r), _)| *dd == d && *r == 4)
            .map(|(_, b)| b)
            .unwrap();
        let tree = tree_from_fragment(&built.fragment).unwrap();
        let verdict = additive_function_check(&tree);
        assert!(verdict.passed(), "d={d}: {verdict:?}");
        let rows = beta_per_row(&built.fragment).unwrap();
        for (i, b) in rows.iter().enumerate() {
            assert_eq!(*b, i + 1, "d={d}");
        }
    }
    pass("criterion 13: covering/admissibility suites pass; A∞ shifts rejected via τ-fixed points");
}

#[test]
fn criterion_14_determinism_and_round_trip() {
    // Byte-identical repeated emission of every file format.
    let r = sphere(2);
    let alg_file = DgaSpecFile::from_algebra(&r);
    let alg_text = emit_canonical(&alg_file).unwrap();
    assert_eq!(alg_text, emit_canonical(&alg_file).unwrap());
    let alg_parsed: DgaSpecFile = parse_json(&alg_text).unwrap();
    assert_eq!(alg_parsed, alg_file);

    let m = DGModule::regular(&r, Side::Left).suspend(2);
    let mod_file = ModuleSpecFile::from_module(&m, "sphere2.json");
    let mod_text = emit_canonical(&mod_file).unwrap();
    let mod_parsed: ModuleSpecFile = parse_json(&mod_text).unwrap();
    assert_eq!(mod_parsed, mod_file);
    assert_eq!(mod_text, emit_canonical(&mod_parsed).unwrap());

    // Fragments: two independent builds yield identical bytes.
    let f1 = build_component(&r, &regular(2), 2).unwrap().fragment;
    let f2 = build_component(&r, &regular(2), 2).unwrap().fragment;
    let certs = |f: &dgquiver::quiver::ARQuiverFragment| Certifications {
        no_loops: no_loops_check(f).is_ok(),
        label_symmetry: label_symmetry_check(f).is_ok(),
        mesh_beta: mesh_beta_check(f).is_ok(),
        za_infinity_consistent: matches!(analyze_shape(f), ShapeVerdict::Consistent { .. }),
    };
    let t1 = emit_canonical(&FragmentJson::from_fragment(&f1, certs(&f1))).unwrap();
    let t2 = emit_canonical(&FragmentJson::from_fragment(&f2, certs(&f2))).unwrap();
    assert_eq!(t1, t2, "independent builds are byte-identical");

    let frag_parsed: FragmentJson = parse_json(&t1).unwrap();
    let back = frag_parsed.to_fragment().unwrap();
    assert_eq!(back, f1, "fragment JSON round-trips losslessly");
    pass("criterion 14: byte-identical repeated runs; parse∘emit identity on all formats");
}
