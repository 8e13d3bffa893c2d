//! Core components of X(α), their fixed loci and pairwise intersections,
//! Euler-characteristic cross-checks, and the core-incidence graph.

use crate::combinat::{Alpha, Subset};
use crate::error::Error;
use crate::presentations::{core_ordinary_ideal, polygon_subspace_kernel};
use serde::Serialize;
use std::fmt::Write as _;

/// One irreducible component of the core 𝔏 = M ∪ ⋃ U_S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreComponent {
    pub kind: ComponentKind,
    /// The short subset S for U_S; absent for M.
    pub subset: Option<Subset>,
    pub complex_dimension: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    M,
    #[serde(rename = "U_S")]
    US,
}

/// A fixed locus inside a core component U_S.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedLocus {
    pub kind: FixedLocusKind,
    /// The short superset T for the CP^{|S|-2} loci; absent for M_S.
    pub t: Option<Subset>,
    pub model: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedLocusKind {
    #[serde(rename = "M_S")]
    MS,
    #[serde(rename = "XT_CAP_US")]
    XtCapUs,
}

/// M plus one U_S per short subset of size >= 2, all of complex dimension
/// n - 3.
pub fn core_components(a: &Alpha) -> Vec<CoreComponent> {
    let dim = a.n() - 3;
    let mut out = vec![CoreComponent {
        kind: ComponentKind::M,
        subset: None,
        complex_dimension: dim,
    }];
    for s in a.shorts_geq2() {
        out.push(CoreComponent {
            kind: ComponentKind::US,
            subset: Some(s),
            complex_dimension: dim,
        });
    }
    out
}

fn check_core_member(a: &Alpha, s: Subset) -> Result<(), Error> {
    if !a.is_short(s)? {
        return Err(Error::NotShort(s.elements()));
    }
    if s.len() < 2 {
        return Err(Error::SubsetTooSmall {
            needed: 2,
            got: s.len(),
        });
    }
    Ok(())
}

/// Short supersets T ⊇ S (including T = S), in cardinality-then-lex order.
pub fn short_supersets(a: &Alpha, s: Subset) -> Vec<Subset> {
    a.nonempty_shorts()
        .into_iter()
        .filter(|t| s.is_subset_of(*t))
        .collect()
}

/// Fixed loci of the circle action inside U_S: the polygon space M_S at the
/// bottom, and one CP^{|S|-2} for every short T ⊇ S.
pub fn fixed_loci(a: &Alpha, s: Subset) -> Result<Vec<FixedLocus>, Error> {
    check_core_member(a, s)?;
    let edges: Vec<String> = s
        .complement()
        .elements()
        .iter()
        .map(|&j| a.length(j).to_string())
        .collect();
    let merged: crate::Rat = s.elements().iter().map(|&i| a.length(i).clone()).sum();
    let mut out = vec![FixedLocus {
        kind: FixedLocusKind::MS,
        t: None,
        model: format!(
            "polygon space with edges ({}, {})",
            edges.join(", "),
            merged
        ),
    }];
    for t in short_supersets(a, s) {
        out.push(FixedLocus {
            kind: FixedLocusKind::XtCapUs,
            t: Some(t),
            model: format!("CP^{}", s.len() - 2),
        });
    }
    Ok(out)
}

/// How two distinct core components U_S, U_T meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IntersectionClass {
    /// Disjoint index sets: the intersection is M_S ∩ M_T.
    PolygonSubspace,
    /// Overlapping index sets with S ∪ T long.
    Empty,
    /// Overlapping index sets with S ∪ T short: the intersection sits
    /// inside U_{S∪T}.
    SubbundleInUUnion { union: Subset },
}

impl IntersectionClass {
    pub fn label(&self) -> &'static str {
        match self {
            IntersectionClass::PolygonSubspace => "POLYGON_SUBSPACE",
            IntersectionClass::Empty => "EMPTY",
            IntersectionClass::SubbundleInUUnion { .. } => "SUBBUNDLE_IN_U_UNION",
        }
    }

    pub fn description(&self) -> String {
        match self {
            IntersectionClass::PolygonSubspace => {
                "U_S ∩ U_T = M_S ∩ M_T, a polygon subspace of both".to_string()
            }
            IntersectionClass::Empty => "U_S ∩ U_T = ∅".to_string(),
            IntersectionClass::SubbundleInUUnion { union } => format!(
                "U_S ∩ U_T is a subbundle carried inside U_{union} (p_j = 0 outside S ∩ T)"
            ),
        }
    }
}

/// The intersection trichotomy for a pair of distinct core components.
pub fn classify_intersection(
    a: &Alpha,
    s: Subset,
    t: Subset,
) -> Result<IntersectionClass, Error> {
    if s == t {
        return Err(Error::PreconditionViolated(
            "the two subsets must be distinct".to_string(),
        ));
    }
    classify_family(a, &[s, t])
}

/// The same trichotomy for a family of core components: the rule depends
/// only on the common intersection and the overall union.
pub fn classify_family(a: &Alpha, subsets: &[Subset]) -> Result<IntersectionClass, Error> {
    if subsets.len() < 2 {
        return Err(Error::PreconditionViolated(
            "need at least two subsets".to_string(),
        ));
    }
    let mut common = Subset::full(a.n());
    let mut union = Subset::empty(a.n());
    for &s in subsets {
        check_core_member(a, s)?;
        common = common.intersection(s);
        union = union.union(s);
    }
    if common.is_empty() {
        Ok(IntersectionClass::PolygonSubspace)
    } else if a.is_long(union)? {
        Ok(IntersectionClass::Empty)
    } else {
        Ok(IntersectionClass::SubbundleInUUnion { union })
    }
}

/// Both sides of the fixed-point Euler identity for U_S.
#[derive(Debug, Clone, Serialize)]
pub struct EulerCrossCheck {
    pub euler_us: usize,
    pub euler_ms: usize,
    pub short_supersets: usize,
    pub fixed_point_sum: usize,
}

/// Checks χ(U_S) = χ(M_S) + (|S|-1) · #{short T ⊇ S}: each CP^{|S|-2} fixed
/// locus contributes |S|-1 and the cells are even-dimensional. Requires
/// 1 ∈ S (relabel first).
pub fn euler_cross_check(a: &Alpha, s: Subset) -> Result<EulerCrossCheck, Error> {
    let max_degree = a.n();
    let euler_us = core_ordinary_ideal(a, s)?.betti(max_degree)?.euler();
    let euler_ms = polygon_subspace_kernel(a, s)?
        .specialize_x_to_zero()?
        .betti(max_degree)?
        .euler();
    let supersets = short_supersets(a, s).len();
    let fixed_point_sum = euler_ms + (s.len() - 1) * supersets;
    if euler_us != fixed_point_sum {
        return Err(Error::ClaimViolation(format!(
            "χ(U_S) = {euler_us} but fixed loci give {euler_ms} + ({} - 1)·{supersets} = {fixed_point_sum} for S = {s}",
            s.len()
        )));
    }
    Ok(EulerCrossCheck {
        euler_us,
        euler_ms,
        short_supersets: supersets,
        fixed_point_sum,
    })
}

/// Which slice of the core to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphScope {
    Global,
    Component(Subset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Serialize)]
struct GraphNode {
    id: String,
    dim: usize,
}

#[derive(Debug, Clone, Serialize)]
struct GraphEdge {
    a: String,
    b: String,
    kind: String,
}

fn core_graph(a: &Alpha, scope: GraphScope) -> Result<(Vec<GraphNode>, Vec<GraphEdge>), Error> {
    let n = a.n();
    match scope {
        GraphScope::Global => {
            let dim = n - 3;
            let shorts = a.shorts_geq2();
            let mut nodes = vec![GraphNode {
                id: "M".to_string(),
                dim,
            }];
            let mut edges = Vec::new();
            for s in &shorts {
                let id = format!("U_S_{}", s.id_fragment());
                // U_S meets M in the polygon subspace M_S.
                edges.push(GraphEdge {
                    a: "M".to_string(),
                    b: id.clone(),
                    kind: "POLYGON_SUBSPACE".to_string(),
                });
                nodes.push(GraphNode { id, dim });
            }
            for (i, &s) in shorts.iter().enumerate() {
                for &t in &shorts[i + 1..] {
                    let class = classify_intersection(a, s, t)?;
                    if class == IntersectionClass::Empty {
                        continue;
                    }
                    edges.push(GraphEdge {
                        a: format!("U_S_{}", s.id_fragment()),
                        b: format!("U_S_{}", t.id_fragment()),
                        kind: class.label().to_string(),
                    });
                }
            }
            Ok((nodes, edges))
        }
        GraphScope::Component(s) => {
            check_core_member(a, s)?;
            let ms_id = format!("M_S_{}", s.id_fragment());
            let mut nodes = vec![GraphNode {
                id: ms_id.clone(),
                dim: n - s.len() - 2,
            }];
            let mut edges = Vec::new();
            for t in short_supersets(a, s) {
                let id = format!("XT_{}", t.id_fragment());
                // The closure of the flow within U_S (T = S) or of
                // U_S ∩ U_T (T ⊋ S) touches M_S.
                edges.push(GraphEdge {
                    a: ms_id.clone(),
                    b: id.clone(),
                    kind: if t == s { "FLOW" } else { "TOUCHES_AT_M_T" }.to_string(),
                });
                nodes.push(GraphNode {
                    id,
                    dim: s.len() - 2,
                });
            }
            Ok((nodes, edges))
        }
    }
}

/// Renders the core-incidence graph in DOT or JSON with deterministic node
/// ordering.
pub fn emit_core_graph(a: &Alpha, scope: GraphScope, format: GraphFormat) -> Result<String, Error> {
    let (nodes, edges) = core_graph(a, scope)?;
    match format {
        GraphFormat::Json => Ok(serde_json::to_string_pretty(&serde_json::json!({
            "nodes": nodes,
            "edges": edges,
        }))
        .expect("serializable")),
        GraphFormat::Dot => {
            let mut out = String::from("graph core {\n");
            for node in &nodes {
                writeln!(out, "  {} [dim={}];", node.id, node.dim).unwrap();
            }
            for edge in &edges {
                writeln!(out, "  {} -- {} [kind=\"{}\"];", edge.a, edge.b, edge.kind).unwrap();
            }
            out.push_str("}\n");
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(lens: &[&str]) -> Alpha {
        Alpha::validate(lens).unwrap()
    }

    fn subset(elems: &[usize], n: usize) -> Subset {
        Subset::from_elements(elems, n).unwrap()
    }

    #[test]
    fn core_component_counts() {
        assert_eq!(core_components(&alpha(&["1", "1", "3", "3", "3"])).len(), 11);
        assert_eq!(core_components(&alpha(&["1", "1", "1", "2"])).len(), 4);
        assert_eq!(core_components(&alpha(&["1", "2", "2"])).len(), 1);
    }

    #[test]
    fn component_count_matches_top_betti() {
        for lens in [
            vec!["1", "1", "1", "2"],
            vec!["1", "1", "3", "3", "3"],
            vec!["1", "2", "3", "4", "5"],
        ] {
            let a = Alpha::validate(&lens).unwrap();
            let table = crate::presentations::konno_ideal(&a).betti(a.n() - 3).unwrap();
            assert_eq!(core_components(&a).len(), table.dims[a.n() - 3]);
        }
    }

    #[test]
    fn fixed_loci_examples() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let loci = fixed_loci(&a, subset(&[1, 2], 5)).unwrap();
        assert_eq!(loci.len(), 5);
        assert_eq!(loci[0].kind, FixedLocusKind::MS);
        let ts: Vec<Vec<usize>> = loci[1..]
            .iter()
            .map(|l| l.t.unwrap().elements())
            .collect();
        assert_eq!(
            ts,
            vec![vec![1, 2], vec![1, 2, 3], vec![1, 2, 4], vec![1, 2, 5]]
        );
        for l in &loci[1..] {
            assert_eq!(l.model, "CP^0");
        }

        let loci = fixed_loci(&a, subset(&[1, 2, 3], 5)).unwrap();
        assert_eq!(loci.len(), 2);
        assert_eq!(loci[1].model, "CP^1");

        let loci = fixed_loci(&a, subset(&[1, 3], 5)).unwrap();
        assert_eq!(loci.len(), 3);

        assert!(matches!(
            fixed_loci(&a, subset(&[3, 4], 5)),
            Err(Error::NotShort(_))
        ));
        assert!(matches!(
            fixed_loci(&a, subset(&[1], 5)),
            Err(Error::SubsetTooSmall { .. })
        ));
    }

    #[test]
    fn classify_intersection_examples() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let got = classify_intersection(&a, subset(&[1, 2], 5), subset(&[1, 3], 5)).unwrap();
        assert_eq!(
            got,
            IntersectionClass::SubbundleInUUnion {
                union: subset(&[1, 2, 3], 5)
            }
        );
        assert_eq!(
            classify_intersection(&a, subset(&[1, 3], 5), subset(&[1, 4], 5)).unwrap(),
            IntersectionClass::Empty
        );
        assert_eq!(
            classify_intersection(&a, subset(&[1, 3], 5), subset(&[2, 4], 5)).unwrap(),
            IntersectionClass::PolygonSubspace
        );
    }

    #[test]
    fn classify_is_symmetric_and_rejects_equal() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let shorts = a.shorts_geq2();
        for &s in &shorts {
            for &t in &shorts {
                if s == t {
                    assert!(classify_intersection(&a, s, t).is_err());
                } else {
                    assert_eq!(
                        classify_intersection(&a, s, t).unwrap(),
                        classify_intersection(&a, t, s).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn classify_family_triple() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        // {1,2}, {1,3}, {1,4}: common = {1}, union = {1,2,3,4} long -> empty.
        let got = classify_family(
            &a,
            &[subset(&[1, 2], 5), subset(&[1, 3], 5), subset(&[1, 4], 5)],
        )
        .unwrap();
        assert_eq!(got, IntersectionClass::Empty);
    }

    #[test]
    fn euler_cross_check_examples() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let r = euler_cross_check(&a, subset(&[1, 2], 5)).unwrap();
        assert_eq!((r.euler_us, r.euler_ms, r.short_supersets), (6, 2, 4));

        let r = euler_cross_check(&a, subset(&[1, 3], 5)).unwrap();
        assert_eq!((r.euler_us, r.euler_ms, r.short_supersets), (4, 2, 2));

        let r = euler_cross_check(&a, subset(&[1, 2, 3], 5)).unwrap();
        assert_eq!((r.euler_us, r.euler_ms, r.short_supersets), (3, 1, 1));
    }

    #[test]
    fn component_graph_matches_figure() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let dot = emit_core_graph(
            &a,
            GraphScope::Component(subset(&[1, 2], 5)),
            GraphFormat::Dot,
        )
        .unwrap();
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.contains("M_S_1_2"));
        assert!(dot.contains("XT_1_2_3"));
        let json: serde_json::Value = serde_json::from_str(
            &emit_core_graph(
                &a,
                GraphScope::Component(subset(&[1, 2], 5)),
                GraphFormat::Json,
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(json["nodes"].as_array().unwrap().len(), 5);
        assert_eq!(json["edges"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn global_graph_examples() {
        let a = alpha(&["1", "1", "1", "2"]);
        let json: serde_json::Value = serde_json::from_str(
            &emit_core_graph(&a, GraphScope::Global, GraphFormat::Json).unwrap(),
        )
        .unwrap();
        assert_eq!(json["nodes"].as_array().unwrap().len(), 4);
        // Every U_S meets M.
        let edges = json["edges"].as_array().unwrap();
        let m_edges = edges
            .iter()
            .filter(|e| e["a"] == "M")
            .count();
        assert_eq!(m_edges, 3);

        let dot = emit_core_graph(&alpha(&["1", "2", "2"]), GraphScope::Global, GraphFormat::Dot)
            .unwrap();
        assert!(dot.contains("M [dim=0];"));
        assert!(!dot.contains("--"));
    }

    #[test]
    fn graph_output_is_deterministic() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let one = emit_core_graph(&a, GraphScope::Global, GraphFormat::Dot).unwrap();
        let two = emit_core_graph(&a, GraphScope::Global, GraphFormat::Dot).unwrap();
        assert_eq!(one, two);
    }
}
