//! Deterministic self-test: an exhaustive sweep over a fixed battery of
//! generic edge-length vectors with n ≤ 6, exercising every layer of the
//! crate and reporting the results as a single JSON document.
//!
//! The output is a pure function of the seed, so two runs with the same seed
//! are byte-identical; the CLI `selftest` subcommand relies on this for its
//! determinism guarantee.

use crate::claims::{check_ws, expand_v_s, spanning_check, transition_matrix};
use crate::combinat::{Alpha, Subset};
use crate::coregeom::{emit_core_graph, euler_cross_check, GraphFormat, GraphScope};
use crate::error::Error;
use crate::momentmap::{
    is_stable, moment_residual, point_from_polygon_pair, polygon_pair_from_point,
    sample_polygon_pair,
};
use crate::presentations::{
    equivariant_ideal, freeness_check, konno_ideal, relabel_to_contain_one,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The fixed battery: 12 generic α-vectors covering 3 ≤ n ≤ 6. Integer
/// lengths with odd total are generic for free.
pub fn battery() -> Vec<Alpha> {
    [
        vec!["1", "1", "1"],
        vec!["1", "2", "4"],
        vec!["1", "1", "1", "2"],
        vec!["1", "1", "3", "4"],
        vec!["1", "2", "3", "5"],
        vec!["1", "1", "1", "1", "1"],
        vec!["1", "1", "1", "2", "4"],
        vec!["1", "2", "2", "2", "2"],
        vec!["1", "1", "3", "3", "3"],
        vec!["1", "1", "1", "1", "1", "2"],
        vec!["1", "1", "1", "1", "2", "3"],
        vec!["1", "2", "2", "3", "3", "4"],
    ]
    .iter()
    .map(|lens| Alpha::validate(lens).expect("battery entries are generic"))
    .collect()
}

/// Battery extension for the claims suite, reaching n = 7.
pub fn claims_battery() -> Vec<Alpha> {
    let mut out = battery();
    out.push(Alpha::validate(&["1"; 7]).expect("odd total is generic"));
    out
}

/// Reduced battery for the floating-point sweeps.
pub fn momentmap_battery() -> Vec<Alpha> {
    vec![
        Alpha::validate(&["1", "1", "1", "2"]).unwrap(),
        Alpha::validate(&["1", "1", "3", "3", "3"]).unwrap(),
    ]
}

fn alpha_strings(a: &Alpha) -> Vec<String> {
    a.lengths().iter().map(|r| r.to_string()).collect()
}

/// Runs the full sweep. The report is deterministic per seed.
pub fn run(seed: u64) -> Result<serde_json::Value, Error> {
    let mut alphas = Vec::new();
    for a in battery() {
        alphas.push(sweep_alpha(&a)?);
    }

    // Claim "vs" is α-independent: check the closed form for every proper
    // nonempty S ⊆ {1,…,n}, n ≤ 7.
    let mut vs_checked = 0usize;
    for n in 3..=7 {
        for mask in 1..(1u32 << n) - 1 {
            expand_v_s(Subset::from_mask(mask, n))?;
            vs_checked += 1;
        }
    }

    let mut momentmap = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for a in momentmap_battery() {
        for s in a.shorts_geq2() {
            momentmap.push(sweep_momentmap(&a, s, 50, &mut rng)?);
        }
    }

    Ok(serde_json::json!({
        "seed": seed,
        "alphas": alphas,
        "claims_vs": { "max_n": 7, "subsets_checked": vs_checked },
        "momentmap": momentmap,
    }))
}

fn sweep_alpha(a: &Alpha) -> Result<serde_json::Value, Error> {
    let n = a.n();
    let konno = konno_ideal(a);
    let betti = konno.betti(n.saturating_sub(2))?;

    let freeness = freeness_check(a, None, None)?;
    if !freeness.free {
        return Err(Error::ClaimViolation(format!(
            "equivariant ring is not free over Q[x] for alpha = ({})",
            alpha_strings(a).join(",")
        )));
    }
    let slice = equivariant_ideal(a)
        .specialize_x_to_zero()?
        .ideal()
        .slices_equal(konno.ideal(), n.saturating_sub(2))?;
    if !slice.equal {
        return Err(Error::ClaimViolation(format!(
            "x -> 0 specialization diverges from the ordinary presentation at degree {:?}",
            slice.first_divergence
        )));
    }

    let tri = transition_matrix(a)?;
    let spanning = spanning_check(a)?;
    for t in a.nonempty_shorts() {
        if t.contains(1) && t.len() >= 1 {
            check_ws(a, t)?;
        }
    }

    let mut core = Vec::new();
    for s in a.shorts_geq2() {
        let relabeling = relabel_to_contain_one(a, s)?;
        let check = euler_cross_check(&relabeling.alpha, relabeling.subset)?;
        core.push(serde_json::json!({
            "s": s,
            "euler_us": check.euler_us,
            "euler_ms": check.euler_ms,
            "short_supersets": check.short_supersets,
        }));
    }
    let graph = emit_core_graph(a, GraphScope::Global, GraphFormat::Json)?;
    let graph: serde_json::Value =
        serde_json::from_str(&graph).map_err(|e| Error::Io(e.to_string()))?;
    let count = |key: &str| graph.get(key).and_then(|v| v.as_array()).map(|v| v.len());

    Ok(serde_json::json!({
        "alpha": alpha_strings(a),
        "shorts": {
            "nonempty": a.nonempty_shorts().len(),
            "size_geq2": a.shorts_geq2().len(),
        },
        "x_betti": { "dims": betti.trimmed(), "euler": betti.euler() },
        "equivariant_free": freeness.free,
        "slice_equality": slice.equal,
        "claims": { "transition_size": tri.size(), "spanning": spanning },
        "core": core,
        "core_graph": { "nodes": count("nodes"), "edges": count("edges") },
    }))
}

fn sweep_momentmap(
    a: &Alpha,
    s: Subset,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<serde_json::Value, Error> {
    let mut max_residual = 0.0f64;
    let mut max_moment = 0.0f64;
    let mut stable_agreements = 0usize;
    for _ in 0..samples {
        let data = sample_polygon_pair(a, s, rng)?;
        let (x, u_rot) = point_from_polygon_pair(a, s, &data, 1e-9)?;
        max_moment = max_moment.max(moment_residual(a, &x));
        let back = polygon_pair_from_point(a, s, &x, 1e-7)?;
        max_residual = max_residual.max(back.distance(&data.rotate(&u_rot)));
        // S is short, so the sampled points must be stable.
        if is_stable(a, &x, 1e-9).stable {
            stable_agreements += 1;
        }
    }
    if max_residual > 1e-9 || max_moment > 1e-9 {
        return Err(Error::ClaimViolation(format!(
            "round-trip residual {max_residual:e} / moment residual {max_moment:e} exceeds 1e-9"
        )));
    }
    if stable_agreements != samples {
        return Err(Error::ClaimViolation(format!(
            "{} of {samples} sampled points judged unstable on a short S",
            samples - stable_agreements
        )));
    }
    Ok(serde_json::json!({
        "alpha": alpha_strings(a),
        "s": s,
        "samples": samples,
        "max_roundtrip_residual": max_residual,
        "max_moment_residual": max_moment,
        "stable_agreements": stable_agreements,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_generic_and_sized() {
        assert_eq!(battery().len(), 12);
        assert!(battery().iter().all(|a| a.n() <= 6));
        assert_eq!(claims_battery().last().unwrap().n(), 7);
    }

    #[test]
    fn run_is_deterministic_per_seed() {
        let a = serde_json::to_string(&run(7).unwrap()).unwrap();
        let b = serde_json::to_string(&run(7).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = serde_json::to_string(&run(8).unwrap()).unwrap();
        assert_ne!(a, c);
    }
}
