//! Acceptance suite: one pass/fail line per criterion. Exact-arithmetic
//! checks carry zero tolerance; floating-point checks use the stated
//! tolerances.

use hyperpoly::claims::{check_ws, expand_v_s, spanning_check, transition_matrix};
use hyperpoly::combinat::{Alpha, Subset};
use hyperpoly::coregeom::{
    classify_intersection, core_components, emit_core_graph, euler_cross_check, GraphFormat,
    GraphScope, IntersectionClass,
};
use hyperpoly::error::Error;
use hyperpoly::ideal::GradedIdeal;
use hyperpoly::intersection::intersection_form;
use hyperpoly::momentmap::{
    group_act, is_stable, mat_adjoint, mat_mul, moment_residual, mu_complex, mu_real,
    point_from_polygon_pair, polygon_pair_from_point, random_rotation, sample_polygon_pair,
    GroupElement,
};
use hyperpoly::poly::PolyRing;
use hyperpoly::presentations::{
    core_ordinary_ideal, equivariant_ideal, freeness_check, konno_ideal, relabel_to_contain_one,
};
use hyperpoly::selftest;
use hyperpoly::QPoly;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alpha(lens: &[&str]) -> Alpha {
    Alpha::validate(lens).unwrap()
}

fn subset(elems: &[usize], n: usize) -> Subset {
    Subset::from_elements(elems, n).unwrap()
}

fn bvar(ring: &std::sync::Arc<PolyRing>, i: usize) -> QPoly {
    QPoly::var_named(ring, &format!("b{i}"))
}

fn criterion_1() -> Result<(), String> {
    let a = alpha(&["1", "1", "3", "3", "3"]);
    if a.shorts_geq2().len() != 10 {
        return Err(format!("expected 10 shorts of size >= 2, got {}", a.shorts_geq2().len()));
    }
    if a.nonempty_shorts().len() != 15 {
        return Err(format!("expected 15 nonempty shorts, got {}", a.nonempty_shorts().len()));
    }
    match Alpha::validate(&["1", "1", "1", "1"]) {
        Err(Error::NonGenericAlpha { witness }) if witness == vec![1, 2] => Ok(()),
        other => Err(format!("expected NonGenericAlpha witness {{1,2}}, got {other:?}")),
    }
}

fn criterion_2() -> Result<(), String> {
    for (lens, dims) in [
        (vec!["1", "1", "3", "3", "3"], vec![1usize, 5, 11]),
        (vec!["1", "1", "1", "2"], vec![1, 4]),
    ] {
        let a = alpha(&lens);
        let table = konno_ideal(&a).betti(a.n() - 2).map_err(|e| e.to_string())?;
        if table.trimmed() != dims {
            return Err(format!("Hilbert table {:?}, expected {dims:?}", table.trimmed()));
        }
        let top = *table.trimmed().last().unwrap();
        let components = core_components(&a).len();
        if top != components {
            return Err(format!("top dimension {top} != {components} core components"));
        }
    }
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    for a in selftest::battery() {
        let report = freeness_check(&a, None, None).map_err(|e| e.to_string())?;
        if !report.free {
            return Err(format!(
                "equivariant ring not free for alpha = {:?} (diverges at {:?})",
                a.lengths(),
                report.first_divergence
            ));
        }
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    for a in selftest::battery() {
        let specialized = equivariant_ideal(&a)
            .specialize_x_to_zero()
            .map_err(|e| e.to_string())?;
        let comparison = specialized
            .ideal()
            .slices_equal(konno_ideal(&a).ideal(), a.n().saturating_sub(2))
            .map_err(|e| e.to_string())?;
        if !comparison.equal {
            return Err(format!(
                "x -> 0 slice mismatch for alpha = {:?} at degree {:?}",
                a.lengths(),
                comparison.first_divergence
            ));
        }
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    // Closed form of the v_S expansion for every proper nonempty S, n <= 7.
    for n in 3..=7usize {
        for mask in 1..(1u32 << n) - 1 {
            expand_v_s(Subset::from_mask(mask, n)).map_err(|e| e.to_string())?;
        }
    }
    for a in selftest::claims_battery() {
        for t in a.nonempty_shorts() {
            if t.contains(1) {
                check_ws(&a, t).map_err(|e| e.to_string())?;
            }
        }
        let tri = transition_matrix(&a).map_err(|e| e.to_string())?;
        let want = (1usize << (a.n() - 1)) - 1;
        if tri.size() != want {
            return Err(format!("transition matrix size {} != {want}", tri.size()));
        }
        if !spanning_check(&a).map_err(|e| e.to_string())? {
            return Err("spanning check failed".to_string());
        }
    }
    // A violated claim is the exit-2 regression signal.
    if Error::ClaimViolation(String::new()).exit_code() != 2 {
        return Err("ClaimViolation must map to exit code 2".to_string());
    }
    Ok(())
}

fn criterion_6() -> Result<(), String> {
    let a = alpha(&["1", "1", "3", "3", "3"]);
    let ring = PolyRing::b_ring(5);
    let b = |i: usize| bvar(&ring, i);

    // Blow-up of CP^2 at three points: U_S for S = {1,2}.
    let s = subset(&[1, 2], 5);
    let table = core_ordinary_ideal(&a, s)
        .map_err(|e| e.to_string())?
        .betti(3)
        .map_err(|e| e.to_string())?;
    if table.trimmed() != vec![1, 4, 1] {
        return Err(format!("U_{{1,2}} Betti {:?}, expected [1,4,1]", table.trimmed()));
    }
    let basis = vec![
        b(1).sub(&b(3)).unwrap().sub(&b(4)).unwrap().sub(&b(5)).unwrap(),
        b(3),
        b(4),
        b(5),
    ];
    let form = intersection_form(&a, s, &basis).map_err(|e| e.to_string())?;
    let diag: Vec<String> = (0..4).map(|i| form.gram[i][i].to_string()).collect();
    if diag != vec!["1", "-1", "-1", "-1"] || form.blow_up_points != Some(3) {
        return Err(format!("U_{{1,2}} form diagonal {diag:?}, expected [1,-1,-1,-1]"));
    }

    // The unnamed surface Q[b1,b2]/<b1^2, b2(b1-b2)>: U_S for S = {1,3}.
    let s = subset(&[1, 3], 5);
    let pres = core_ordinary_ideal(&a, s).map_err(|e| e.to_string())?;
    let model = GradedIdeal::new(
        ring.clone(),
        vec![
            b(3).sub(&b(1)).unwrap(),
            b(4),
            b(5),
            b(1).mul(&b(1)).unwrap(),
            b(2).mul(&b(1).sub(&b(2)).unwrap()).unwrap(),
        ],
        None,
    )
    .map_err(|e| e.to_string())?;
    let comparison = pres.ideal().slices_equal(&model, 3).map_err(|e| e.to_string())?;
    if !comparison.equal {
        return Err(format!(
            "U_{{1,3}} ideal diverges from the 2-variable model at degree {:?}",
            comparison.first_divergence
        ));
    }
    let table = pres.betti(3).map_err(|e| e.to_string())?;
    if table.trimmed() != vec![1, 2, 1] {
        return Err(format!("U_{{1,3}} Betti {:?}, expected [1,2,1]", table.trimmed()));
    }
    let form = intersection_form(&a, s, &[b(2), b(1).sub(&b(2)).unwrap()])
        .map_err(|e| e.to_string())?;
    let diag: Vec<String> = (0..2).map(|i| form.gram[i][i].to_string()).collect();
    if diag != vec!["-1", "1"] {
        return Err(format!("U_{{1,3}} form diagonal {diag:?}, expected [-1,1]"));
    }

    // Maximal short subset: H*(U_S) = Q[b1]/<b1^{n-2}>, conjecturally CP^{n-3}.
    let s = subset(&[1, 2, 3], 5);
    let pres = core_ordinary_ideal(&a, s).map_err(|e| e.to_string())?;
    let model = GradedIdeal::new(
        ring.clone(),
        vec![
            b(2).sub(&b(1)).unwrap(),
            b(3).sub(&b(1)).unwrap(),
            b(4),
            b(5),
            b(1).pow(3),
        ],
        None,
    )
    .map_err(|e| e.to_string())?;
    let comparison = pres.ideal().slices_equal(&model, 3).map_err(|e| e.to_string())?;
    if !comparison.equal {
        return Err(format!(
            "maximal-short ideal diverges from <b1^3> at degree {:?}",
            comparison.first_divergence
        ));
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    let flagship = alpha(&["1", "1", "3", "3", "3"]);
    let expect = [
        (subset(&[1, 2], 5), (6usize, 2usize, 4usize)),
        (subset(&[1, 3], 5), (4, 2, 2)),
        (subset(&[1, 2, 3], 5), (3, 1, 1)),
    ];
    for (s, (us, ms, supersets)) in expect {
        let check = euler_cross_check(&flagship, s).map_err(|e| e.to_string())?;
        if (check.euler_us, check.euler_ms, check.short_supersets) != (us, ms, supersets) {
            return Err(format!(
                "U_{s}: got ({}, {}, {}), expected ({us}, {ms}, {supersets})",
                check.euler_us, check.euler_ms, check.short_supersets
            ));
        }
    }
    for a in selftest::battery() {
        for s in a.shorts_geq2() {
            let r = relabel_to_contain_one(&a, s).map_err(|e| e.to_string())?;
            // euler_cross_check verifies the identity internally.
            euler_cross_check(&r.alpha, r.subset).map_err(|e| {
                format!("alpha = {:?}, S = {s}: {e}", a.lengths())
            })?;
        }
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    let a = alpha(&["1", "1", "3", "3", "3"]);
    let graph = emit_core_graph(&a, GraphScope::Component(subset(&[1, 2], 5)), GraphFormat::Json)
        .map_err(|e| e.to_string())?;
    let graph: serde_json::Value = serde_json::from_str(&graph).unwrap();
    let nodes = graph["nodes"].as_array().unwrap().len();
    let edges = graph["edges"].as_array().unwrap().len();
    if (nodes, edges) != (5, 4) {
        return Err(format!("component graph has {nodes} nodes / {edges} edges, expected 5 / 4"));
    }

    for a in selftest::battery() {
        let shorts = a.shorts_geq2();
        for (i, &s) in shorts.iter().enumerate() {
            for &t in &shorts[i + 1..] {
                let class = classify_intersection(&a, s, t).map_err(|e| e.to_string())?;
                let expected = if s.intersection(t).is_empty() {
                    "POLYGON_SUBSPACE"
                } else if a.is_long(s.union(t)).map_err(|e| e.to_string())? {
                    "EMPTY"
                } else {
                    "SUBBUNDLE_IN_U_UNION"
                };
                if class.label() != expected {
                    return Err(format!(
                        "classify({s}, {t}) = {}, expected {expected}",
                        class.label()
                    ));
                }
                if let IntersectionClass::SubbundleInUUnion { union } = class {
                    if union != s.union(t) {
                        return Err(format!("wrong union subset for ({s}, {t})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    for a in selftest::momentmap_battery() {
        for s in a.shorts_geq2() {
            for _ in 0..1000 {
                let data = sample_polygon_pair(&a, s, &mut rng).map_err(|e| e.to_string())?;
                let (x, u_rot) =
                    point_from_polygon_pair(&a, s, &data, 1e-9).map_err(|e| e.to_string())?;
                if moment_residual(&a, &x) > 1e-9 {
                    return Err(format!("moment residual {:e}", moment_residual(&a, &x)));
                }
                // The forward map revalidates conditions (1)-(5) and the norm
                // identity ||u_i||^2 = |q_i|^2(|q_i|^2 - 2 a_i) internally.
                let back =
                    polygon_pair_from_point(&a, s, &x, 1e-7).map_err(|e| e.to_string())?;
                let residual = back.distance(&data.rotate(&u_rot));
                if residual > 1e-9 {
                    return Err(format!("round-trip residual {residual:e}"));
                }
                if !is_stable(&a, &x, 1e-9).stable {
                    return Err(format!("sampled point of U_{s} judged unstable"));
                }
            }
        }
    }

    // Equivariance of both moment maps under 100 random compact elements.
    for _ in 0..100 {
        let q = (0..5)
            .map(|_| {
                [
                    Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                    Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                ]
            })
            .collect();
        let p = (0..5)
            .map(|_| {
                [
                    Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                    Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                ]
            })
            .collect();
        let x = hyperpoly::momentmap::PointPQ::new(q, p).map_err(|e| e.to_string())?;
        let g = GroupElement {
            a: random_rotation(&mut rng),
            e: (0..5)
                .map(|_| {
                    let t = rng.gen::<f64>() * std::f64::consts::TAU;
                    Complex::new(t.cos(), t.sin())
                })
                .collect(),
        };
        let y = group_act(&x, &g, 1e-12).map_err(|e| e.to_string())?;
        let (su2, u1) = mu_real(&x);
        let (su2_g, u1_g) = mu_real(&y);
        if su2_g.sub(&su2.rotate(&g.a)).norm() > 1e-9 {
            return Err("mu_real does not transform coadjointly".to_string());
        }
        for (before, after) in u1.iter().zip(&u1_g) {
            if (before - after).abs() > 1e-9 {
                return Err("mu_real u(1) parts not invariant".to_string());
            }
        }
        let (slc, _) = mu_complex(&x);
        let (slc_g, _) = mu_complex(&y);
        let expected = mat_mul(&mat_adjoint(&g.a), &mat_mul(&slc, &g.a));
        for (row, erow) in slc_g.iter().zip(&expected) {
            for (value, e) in row.iter().zip(erow) {
                if (value - e).norm() > 1e-9 {
                    return Err("mu_complex does not transform coadjointly".to_string());
                }
            }
        }
    }

    // Stability verdicts against the symbolic classification: straight class
    // C with p supported inside it is unstable exactly when C is long.
    let a = alpha(&["1", "1", "3", "3", "3"]);
    let mut agreements = 0usize;
    let mut cases = 0usize;
    for mask in 3u32..31 {
        let class = Subset::from_mask(mask, 5);
        if class.len() < 2 {
            continue;
        }
        // All q in the class proportional, the rest in general position.
        let mut q: Vec<[Complex<f64>; 2]> = (0..5)
            .map(|i| [Complex::new(1.0, 0.0), Complex::new(7.0 + i as f64, 3.0)])
            .collect();
        for i in class.elements() {
            q[i - 1] = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)];
        }
        let x = hyperpoly::momentmap::PointPQ::zero_section(q);
        let report = is_stable(&a, &x, 1e-9);
        let expected = a.is_short(class).map_err(|e| e.to_string())?;
        cases += 1;
        if report.stable == expected {
            agreements += 1;
        }
    }
    if agreements != cases {
        return Err(format!("stability agreed on {agreements}/{cases} cases"));
    }
    Ok(())
}

fn criterion_10() -> Result<(), String> {
    let first = serde_json::to_string_pretty(&selftest::run(42).map_err(|e| e.to_string())?)
        .unwrap();
    let second = serde_json::to_string_pretty(&selftest::run(42).map_err(|e| e.to_string())?)
        .unwrap();
    if first.as_bytes() != second.as_bytes() {
        return Err("selftest output differs between runs with the same seed".to_string());
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<(), String>)> = vec![
        ("1: genericity and short-subset counts", criterion_1),
        ("2: H*(X) Hilbert tables and top dimension", criterion_2),
        ("3: equivariant freeness over the battery", criterion_3),
        ("4: x -> 0 slice equality over the battery", criterion_4),
        ("5: claims suite (closed form, telescoping, triangularity, spanning)", criterion_5),
        ("6: core component rings and intersection forms", criterion_6),
        ("7: Euler fixed-point cross-check", criterion_7),
        ("8: core-incidence geometry", criterion_8),
        ("9: moment-map numerics", criterion_9),
        ("10: selftest determinism", criterion_10),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("criterion {name}: pass"),
            Err(message) => {
                println!("criterion {name}: FAIL ({message})");
                failures.push(format!("{name}: {message}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
