//! Ring presentations for X(α) and the core components U_S, with the derived
//! invariants: Betti numbers, Euler characteristics, freeness checks.
//!
//! All quotients are of the form Q[vars]/I with I a [`GradedIdeal`]; Betti
//! numbers are Hilbert-function dimensions of the quotient, read in
//! algebraic degree (cohomological degree is twice that).

use crate::combinat::{Alpha, Subset};
use crate::error::Error;
use crate::ideal::{GradedIdeal, HilbertTable};
use crate::poly::PolyRing;
use crate::{QPoly, Rat};
use serde::Serialize;
use std::sync::Arc;

/// Which construction produced a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "KONNO_I")]
    KonnoI,
    #[serde(rename = "MAIN_J")]
    MainJ,
    #[serde(rename = "EQCORE_J_S")]
    EqcoreJS,
    #[serde(rename = "ORDCORE_I_S")]
    OrdcoreIS,
    #[serde(rename = "POLS_KER")]
    PolsKer,
    #[serde(rename = "DERIVED")]
    Derived,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::KonnoI => "KONNO_I",
            Provenance::MainJ => "MAIN_J",
            Provenance::EqcoreJS => "EQCORE_J_S",
            Provenance::OrdcoreIS => "ORDCORE_I_S",
            Provenance::PolsKer => "POLS_KER",
            Provenance::Derived => "DERIVED",
        }
    }
}

/// A graded ideal together with where it came from: the presented quotient
/// ring is `ring / ideal`.
#[derive(Debug, Clone)]
pub struct Presentation {
    ideal: GradedIdeal<Rat>,
    provenance: Provenance,
    alpha: Alpha,
    subset: Option<Subset>,
}

impl Presentation {
    pub fn ring(&self) -> &Arc<PolyRing> {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &GradedIdeal<Rat> {
        &self.ideal
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn subset(&self) -> Option<Subset> {
        self.subset
    }

    /// Default degree bound for Hilbert computations: every quotient here
    /// vanishes above algebraic degree n-2 except for the free x-direction.
    pub fn default_max_degree(&self) -> usize {
        self.alpha.n()
    }

    /// Betti numbers of the quotient: dims of the graded pieces up to
    /// `max_degree` (algebraic).
    pub fn betti(&self, max_degree: usize) -> Result<HilbertTable, Error> {
        self.ideal.hilbert_function(max_degree)
    }

    /// Image of an equivariant presentation under x -> 0, as an ideal in the
    /// ring without x.
    pub fn specialize_x_to_zero(&self) -> Result<Presentation, Error> {
        let target = PolyRing::new(
            self.ring()
                .vars()
                .iter()
                .filter(|(name, _)| name != "x")
                .cloned()
                .collect(),
        );
        let ideal = self.ideal.eliminate_variable("x", &target)?;
        Ok(Presentation {
            ideal,
            provenance: Provenance::Derived,
            alpha: self.alpha.clone(),
            subset: self.subset,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring().vars().iter()
                .map(|(name, deg)| serde_json::json!({"name": name, "degree": deg}))
                .collect::<Vec<_>>(),
            "generators": self.ideal.generators().iter()
                .map(|g| g.to_json())
                .collect::<Vec<_>>(),
            "truncation_degree": self.ideal.truncation(),
            "provenance": self.provenance.tag(),
            "alpha": self.alpha.lengths().iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>(),
            "subset": self.subset.map(|s| s.elements()),
        })
    }
}

fn var(ring: &Arc<PolyRing>, name: &str) -> QPoly {
    QPoly::var_named(ring, name)
}

fn bvar(ring: &Arc<PolyRing>, i: usize) -> QPoly {
    var(ring, &format!("b{i}"))
}

fn cvar(ring: &Arc<PolyRing>, i: usize) -> QPoly {
    var(ring, &format!("c{i}"))
}

/// p - c_i^2 for i = 1..n.
fn anomaly_relations(ring: &Arc<PolyRing>, n: usize) -> Vec<QPoly> {
    let p = var(ring, "p");
    (1..=n)
        .map(|i| p.sub(&cvar(ring, i).pow(2)).unwrap())
        .collect()
}

/// The ideal of H*(X(α)): Q[c_1..c_n, p] modulo {p - c_i^2} and everything
/// of algebraic degree >= n-2.
pub fn konno_ideal(a: &Alpha) -> Presentation {
    let n = a.n();
    let ring = PolyRing::cp_ring(n);
    let gens = anomaly_relations(&ring, n);
    Presentation {
        ideal: GradedIdeal::new(ring, gens, Some(n - 2)).expect("homogeneous by construction"),
        provenance: Provenance::KonnoI,
        alpha: a.clone(),
        subset: None,
    }
}

/// The ideal of H*_{S^1}(X(α)): Q[c_1..c_n, p, x] modulo {p - c_i^2} and one
/// degree-(n-2) relation per nonempty short subset S:
/// Π_{j∈S̄^c}(c_j + c_{n_S}) · Π_{i∈S̄}(c_i + x).
pub fn equivariant_ideal(a: &Alpha) -> Presentation {
    let n = a.n();
    let ring = PolyRing::cpx_ring(n);
    let x = var(&ring, "x");
    let mut gens = anomaly_relations(&ring, n);
    for s in a.nonempty_shorts() {
        let m = s.markers().expect("short subsets are nonempty and proper");
        let mut g = QPoly::one(&ring);
        for j in m.sc_bar.elements() {
            g = g.mul(&cvar(&ring, j).add(&cvar(&ring, m.n_s)).unwrap()).unwrap();
        }
        for i in m.s_bar.elements() {
            g = g.mul(&cvar(&ring, i).add(&x).unwrap()).unwrap();
        }
        gens.push(g);
    }
    Presentation {
        ideal: GradedIdeal::new(ring, gens, None).expect("homogeneous by construction"),
        provenance: Provenance::MainJ,
        alpha: a.clone(),
        subset: None,
    }
}

fn check_core_subset(a: &Alpha, s: Subset, min_size: usize) -> Result<(), Error> {
    if !a.is_short(s)? {
        return Err(Error::NotShort(s.elements()));
    }
    if s.len() < min_size {
        return Err(Error::SubsetTooSmall {
            needed: min_size,
            got: s.len(),
        });
    }
    if !s.contains(1) {
        return Err(Error::RequiresOneInS);
    }
    Ok(())
}

/// Families (1) b_1 - b_i for i ∈ S\{1} and (2) b_j(b_1 - b_j) for j ∈ S^c.
fn core_linear_and_quadric(ring: &Arc<PolyRing>, s: Subset) -> Vec<QPoly> {
    let b1 = bvar(ring, 1);
    let mut gens = Vec::new();
    for i in s.elements() {
        if i != 1 {
            gens.push(b1.sub(&bvar(ring, i)).unwrap());
        }
    }
    for j in s.complement().elements() {
        let bj = bvar(ring, j);
        gens.push(bj.mul(&b1.sub(&bj).unwrap()).unwrap());
    }
    gens
}

/// Family (3): Π_{j∈R} b_j over R ⊆ S^c with R ∪ S long. Only the minimal
/// such R unless `all` is set (non-minimal products are multiples).
fn long_completion_products(
    a: &Alpha,
    ring: &Arc<PolyRing>,
    s: Subset,
    all: bool,
) -> Vec<QPoly> {
    let mut gens = Vec::new();
    for r in s.complement().subsets() {
        if !a.is_long(r.union(s)).unwrap() {
            continue;
        }
        // R ∪ S long is upward closed in R, so minimality is a one-step check.
        let minimal = r
            .elements()
            .iter()
            .all(|&j| a.is_short(r.remove(j).union(s)).unwrap());
        if !(all || minimal) {
            continue;
        }
        let mut g = QPoly::one(ring);
        for j in r.elements() {
            g = g.mul(&bvar(ring, j)).unwrap();
        }
        gens.push(g);
    }
    gens
}

/// Long subsets L ⊆ S^c, in increasing mask order.
fn long_subsets_of_complement(a: &Alpha, s: Subset) -> Vec<Subset> {
    s.complement()
        .subsets()
        .into_iter()
        .filter(|l| a.is_long(*l).unwrap())
        .collect()
}

/// (Π_{j∈L}(b_j - b_1) - Π_{j∈L} b_j) / b_1. Exact: the b_1-free parts of
/// the two products cancel.
fn long_difference_quotient(ring: &Arc<PolyRing>, l: Subset) -> QPoly {
    let b1 = bvar(ring, 1);
    let mut shifted = QPoly::one(ring);
    let mut plain = QPoly::one(ring);
    for j in l.elements() {
        let bj = bvar(ring, j);
        shifted = shifted.mul(&bj.sub(&b1).unwrap()).unwrap();
        plain = plain.mul(&bj).unwrap();
    }
    shifted
        .sub(&plain)
        .unwrap()
        .divide_by_variable(ring.var_index("b1").unwrap())
        .expect("constant-in-b1 terms cancel")
}

/// The ideal of H*_{S^1}(U_S) in Q[b_1..b_n, x]; requires S short, |S| >= 2,
/// 1 ∈ S.
pub fn core_equivariant_ideal(a: &Alpha, s: Subset) -> Result<Presentation, Error> {
    core_equivariant_ideal_with(a, s, false)
}

/// As [`core_equivariant_ideal`], with `all_family3` restoring the redundant
/// non-minimal family-3 generators.
pub fn core_equivariant_ideal_with(
    a: &Alpha,
    s: Subset,
    all_family3: bool,
) -> Result<Presentation, Error> {
    check_core_subset(a, s, 2)?;
    let ring = PolyRing::bx_ring(a.n());
    let b1x = bvar(&ring, 1).add(&var(&ring, "x")).unwrap();
    let prefactor = b1x.pow(s.len() - 1);
    let mut gens = core_linear_and_quadric(&ring, s);
    gens.extend(long_completion_products(a, &ring, s, all_family3));
    for l in long_subsets_of_complement(a, s) {
        gens.push(prefactor.mul(&long_difference_quotient(&ring, l)).unwrap());
    }
    Ok(Presentation {
        ideal: GradedIdeal::new(ring, gens, None)?,
        provenance: Provenance::EqcoreJS,
        alpha: a.clone(),
        subset: Some(s),
    })
}

/// The ideal of H*(U_S) in Q[b_1..b_n]; requires S short, |S| >= 2, 1 ∈ S.
pub fn core_ordinary_ideal(a: &Alpha, s: Subset) -> Result<Presentation, Error> {
    core_ordinary_ideal_with(a, s, false)
}

/// As [`core_ordinary_ideal`], with `all_family3` restoring the redundant
/// non-minimal family-3 generators.
pub fn core_ordinary_ideal_with(
    a: &Alpha,
    s: Subset,
    all_family3: bool,
) -> Result<Presentation, Error> {
    check_core_subset(a, s, 2)?;
    let ring = PolyRing::b_ring(a.n());
    let b1 = bvar(&ring, 1);
    let prefactor = b1.pow(s.len() - 2);
    let mut gens = core_linear_and_quadric(&ring, s);
    gens.extend(long_completion_products(a, &ring, s, all_family3));
    for l in long_subsets_of_complement(a, s) {
        let mut g = prefactor.clone();
        for j in l.elements() {
            g = g.mul(&bvar(&ring, j).sub(&b1).unwrap()).unwrap();
        }
        gens.push(g);
    }
    Ok(Presentation {
        ideal: GradedIdeal::new(ring, gens, None)?,
        provenance: Provenance::OrdcoreIS,
        alpha: a.clone(),
        subset: Some(s),
    })
}

/// The kernel of the restriction to the polygon subspace M_S, in
/// Q[b_1..b_n, x]; requires S short, 1 ∈ S (singletons allowed). The long-L
/// relations enter without the (b_1+x)-power carried by the U_S ideal: on
/// M_S the divided difference itself already restricts to zero.
pub fn polygon_subspace_kernel(a: &Alpha, s: Subset) -> Result<Presentation, Error> {
    check_core_subset(a, s, 1)?;
    let ring = PolyRing::bx_ring(a.n());
    let mut gens = core_linear_and_quadric(&ring, s);
    gens.extend(long_completion_products(a, &ring, s, false));
    for l in long_subsets_of_complement(a, s) {
        gens.push(long_difference_quotient(&ring, l));
    }
    Ok(Presentation {
        ideal: GradedIdeal::new(ring, gens, None)?,
        provenance: Provenance::PolsKer,
        alpha: a.clone(),
        subset: Some(s),
    })
}

/// Result of the x-freeness comparison between an equivariant quotient and
/// its x -> 0 fiber.
#[derive(Debug, Clone, Serialize)]
pub struct FreenessReport {
    pub free: bool,
    pub first_divergence: Option<usize>,
    pub equivariant_dims: Vec<usize>,
    pub expected_dims: Vec<usize>,
}

/// Checks dims_d(equivariant) = Σ_{k<=d} dims_k(ordinary), i.e. the
/// equivariant ring is a free module over Q[x] with the ordinary ring as
/// fiber.
pub fn freeness_between(
    equivariant: &Presentation,
    ordinary: &Presentation,
    max_degree: usize,
) -> Result<FreenessReport, Error> {
    let eq_dims = equivariant.betti(max_degree)?.dims;
    let expected = ordinary.betti(max_degree)?.partial_sums();
    let first_divergence = eq_dims
        .iter()
        .zip(&expected)
        .position(|(a, b)| a != b);
    Ok(FreenessReport {
        free: first_divergence.is_none(),
        first_divergence,
        equivariant_dims: eq_dims,
        expected_dims: expected,
    })
}

/// Freeness check for X(α) (no subset) or U_S (subset given), comparing the
/// equivariant presentation against the ordinary one up to `max_degree`
/// (default n).
pub fn freeness_check(
    a: &Alpha,
    s: Option<Subset>,
    max_degree: Option<usize>,
) -> Result<FreenessReport, Error> {
    let max_degree = max_degree.unwrap_or(a.n());
    match s {
        None => freeness_between(&equivariant_ideal(a), &konno_ideal(a), max_degree),
        Some(s) => freeness_between(
            &core_equivariant_ideal(a, s)?,
            &core_ordinary_ideal(a, s)?,
            max_degree,
        ),
    }
}

/// A relabeling bringing 1 into the subset: new index i carries the data of
/// old index perm[i-1].
#[derive(Debug, Clone)]
pub struct Relabeling {
    pub perm: Vec<usize>,
    pub alpha: Alpha,
    pub subset: Subset,
}

impl Relabeling {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i + 1)
    }
}

/// Swaps index 1 with min(S) when 1 ∉ S, recording the permutation; the
/// identity relabeling otherwise.
pub fn relabel_to_contain_one(a: &Alpha, s: Subset) -> Result<Relabeling, Error> {
    if s.n() != a.n() {
        return Err(Error::DimensionMismatch(s.n(), a.n()));
    }
    let m = s.min_element().ok_or(Error::EmptySubset)?;
    let mut perm: Vec<usize> = (1..=a.n()).collect();
    if !s.contains(1) {
        perm.swap(0, m - 1);
    }
    let alpha = a.permuted(&perm)?;
    let elements: Vec<usize> = (1..=a.n())
        .filter(|&i| s.contains(perm[i - 1]))
        .collect();
    let subset = Subset::from_elements(&elements, a.n())?;
    Ok(Relabeling { perm, alpha, subset })
}
