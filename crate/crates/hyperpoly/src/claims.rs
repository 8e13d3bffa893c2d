//! The b_A basis of the top degree, the classes v_S, w_T, x_S, and the
//! triangular transition matrix between them.
//!
//! All expansions happen in Q[b_1..b_n]/(b_k^2 - b_1 b_k : k >= 2); the
//! rewrite b_k^2 -> b_1 b_k is terminating and confluent, so reduction is a
//! single pass over monomials.

use crate::combinat::{Alpha, Subset};
use crate::error::Error;
use crate::poly::{Monomial, PolyRing};
use crate::scalar::Scalar;
use crate::{QPoly, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

fn bvar(ring: &Arc<PolyRing>, i: usize) -> QPoly {
    QPoly::var_named(ring, &format!("b{i}"))
}

fn rat(v: i64) -> Rat {
    <Rat as Scalar>::from_integer(v)
}

fn pow2(e: usize) -> Rat {
    rat(1i64 << e)
}

fn sign(e: usize) -> Rat {
    if e % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

/// Normal form under b_k^2 -> b_1 b_k for k >= 2: each monomial moves all
/// repeated factors of the higher variables onto b_1 in one shot.
pub fn multilinear_reduce(f: &QPoly) -> QPoly {
    let ring = f.ring();
    let mut out = QPoly::zero(ring);
    for (m, c) in f.terms() {
        let mut exps = m.0.clone();
        for k in 1..exps.len() {
            if exps[k] > 1 {
                exps[0] += exps[k] - 1;
                exps[k] = 1;
            }
        }
        out = out
            .add(&QPoly::monomial(ring, Monomial(exps), c.clone()))
            .unwrap();
    }
    out
}

/// {2,...,n} as a subset.
fn tail_set(n: usize) -> Subset {
    Subset::full(n).remove(1)
}

fn check_basis_index(a: Subset) -> Result<(), Error> {
    if a.contains(1) {
        return Err(Error::IndexOutOfRange(1));
    }
    if a == tail_set(a.n()) {
        return Err(Error::NotProper);
    }
    Ok(())
}

/// b_A = (-1)^{|A|} b_1^{n-2-|A|} Π_{k∈A} b_k for A ⊊ {2,...,n}.
pub fn basis_element_b_a(a: Subset) -> Result<QPoly, Error> {
    check_basis_index(a)?;
    let n = a.n();
    let ring = PolyRing::b_ring(n);
    let mut g = bvar(&ring, 1).pow(n - 2 - a.len());
    for k in a.elements() {
        g = g.mul(&bvar(&ring, k))?;
    }
    Ok(g.scale(&sign(a.len())))
}

/// v_S = (-1)^n Π_{j∈S̄^c}(b_j + b_{n_S} - b_1) · Π_{i∈S̄}(2b_i - b_1).
pub fn v_s(s: Subset) -> Result<QPoly, Error> {
    let m = s.markers()?;
    let n = s.n();
    let ring = PolyRing::b_ring(n);
    let b1 = bvar(&ring, 1);
    let bn = bvar(&ring, m.n_s);
    let mut g = QPoly::constant(&ring, sign(n));
    for j in m.sc_bar.elements() {
        g = g.mul(&bvar(&ring, j).add(&bn)?.sub(&b1)?)?;
    }
    for i in m.s_bar.elements() {
        g = g.mul(&bvar(&ring, i).scale(&rat(2)).sub(&b1)?)?;
    }
    Ok(g)
}

/// v_S in the c-variables: (-1)^n / 2^{|S̄^c|} · Π_{j∈S̄^c}(c_j + c_{n_S}) ·
/// Π_{i∈S̄} c_i, in Q[c_1..c_n].
pub fn v_s_c_form(s: Subset) -> Result<QPoly, Error> {
    let m = s.markers()?;
    let n = s.n();
    let ring = PolyRing::new((1..=n).map(|i| (format!("c{i}"), 1)).collect());
    let c = |i: usize| QPoly::var_named(&ring, &format!("c{i}"));
    let mut g = QPoly::constant(&ring, sign(n) / pow2(m.sc_bar.len()));
    for j in m.sc_bar.elements() {
        g = g.mul(&c(j).add(&c(m.n_s))?)?;
    }
    for i in m.s_bar.elements() {
        g = g.mul(&c(i))?;
    }
    Ok(g)
}

/// Reads a homogeneous degree-(n-2) class as coordinates on the b_A basis,
/// reducing modulo b_k^2 = b_1 b_k first. Every proper A ⊊ {2..n} appears in
/// the map, zeros included.
pub fn expand_on_basis(f: &QPoly) -> Result<BTreeMap<Subset, Rat>, Error> {
    let n = f.ring().num_vars();
    if !f.is_zero() && f.homogeneous_degree() != Some(n - 2) {
        return Err(Error::NotHomogeneous);
    }
    let reduced = multilinear_reduce(f);
    let mut coeffs: BTreeMap<Subset, Rat> = proper_basis_subsets(n)
        .into_iter()
        .map(|a| (a, Rat::zero()))
        .collect();
    for (m, c) in reduced.terms() {
        let elements: Vec<usize> = (2..=n).filter(|&k| m.0[k - 1] == 1).collect();
        let a = Subset::from_elements(&elements, n)?;
        // b_A carries the sign (-1)^{|A|}, the raw monomial does not.
        let entry = coeffs.get_mut(&a).ok_or(Error::NotProper)?;
        *entry = entry.clone() + c.clone() * sign(a.len());
    }
    Ok(coeffs)
}

/// Proper subsets of {2,...,n}, cardinality ascending then lexicographic:
/// the row order of the transition matrix.
pub fn proper_basis_subsets(n: usize) -> Vec<Subset> {
    let mut out: Vec<Subset> = tail_set(n)
        .subsets()
        .into_iter()
        .filter(|a| *a != tail_set(n))
        .collect();
    out.sort_by_key(|a| (a.len(), a.elements()));
    out
}

/// Closed-form coefficient of b_A in v_S.
pub fn vs_closed_coeff(s: Subset, a: Subset) -> Rat {
    let m = s.markers().expect("S nonempty and proper");
    if s.contains(1) {
        if s.complement().is_subset_of(a) {
            Rat::zero()
        } else {
            pow2(a.intersection(m.s_bar).len())
        }
    } else if m.sc_bar.is_subset_of(a) && !a.contains(m.m_s) {
        pow2(a.intersection(m.s_bar).len())
    } else {
        Rat::zero()
    }
}

fn compare_with_closed_form(
    coeffs: &BTreeMap<Subset, Rat>,
    s: Subset,
    label: &str,
    closed: impl Fn(Subset) -> Rat,
) -> Result<(), Error> {
    for (&a, got) in coeffs {
        let want = closed(a);
        if *got != want {
            return Err(Error::ClaimViolation(format!(
                "{label} for S={s}: coefficient of b_A at A={a} is {got}, closed form gives {want}"
            )));
        }
    }
    Ok(())
}

/// Expands v_S on the b_A basis and verifies the closed-form coefficients.
pub fn expand_v_s(s: Subset) -> Result<BTreeMap<Subset, Rat>, Error> {
    let coeffs = expand_on_basis(&v_s(s)?)?;
    compare_with_closed_form(&coeffs, s, "v_S expansion", |a| vs_closed_coeff(s, a))?;
    Ok(coeffs)
}

/// w_T = v_T + Σ_{k=1}^{|T|-1} 2^{k-1} v_{T_k}, where T_k drops the k
/// smallest elements of T. Requires T short with 1 ∈ T.
pub fn w_t(alpha: &Alpha, t: Subset) -> Result<QPoly, Error> {
    if !t.contains(1) {
        return Err(Error::RequiresOneInS);
    }
    if !alpha.is_short(t)? {
        return Err(Error::NotShort(t.elements()));
    }
    let mut w = v_s(t)?;
    let mut tk = t;
    for k in 1..t.len() {
        tk = tk.remove(tk.min_element().unwrap());
        w = w.add(&v_s(tk)?.scale(&pow2(k - 1)))?;
    }
    Ok(w)
}

/// Verifies that w_T reduces to Σ_A 2^{|A ∩ T̄|} b_A over all proper A.
pub fn check_ws(alpha: &Alpha, t: Subset) -> Result<(), Error> {
    let coeffs = expand_on_basis(&w_t(alpha, t)?)?;
    let t_bar = t.remove(1);
    compare_with_closed_form(&coeffs, t, "w_T expansion", |a| {
        pow2(a.intersection(t_bar).len())
    })
}

/// x_S = Σ_{1∈T⊆S} (-1)^{|S|+|T|} w_T when 1 ∈ S, and x_S = v_S otherwise.
pub fn x_s(alpha: &Alpha, s: Subset) -> Result<QPoly, Error> {
    if !alpha.is_short(s)? {
        return Err(Error::NotShort(s.elements()));
    }
    if !s.contains(1) {
        return v_s(s);
    }
    let ring = PolyRing::b_ring(s.n());
    let mut x = QPoly::zero(&ring);
    for rest in s.remove(1).subsets() {
        let t = rest.insert(1);
        let term = w_t(alpha, t)?.scale(&sign(s.len() + t.len()));
        x = x.add(&term)?;
    }
    Ok(x)
}

/// S(A) = A^c when A^c (complement inside {2..n}) is short, A ∪ {1}
/// otherwise; a bijection from proper subsets of {2..n} onto nonempty
/// shorts.
pub fn subset_for_row(alpha: &Alpha, a: Subset) -> Result<Subset, Error> {
    check_basis_index(a)?;
    let a_c = tail_set(a.n()).minus(a);
    if alpha.is_short(a_c)? {
        Ok(a_c)
    } else {
        Ok(a.insert(1))
    }
}

/// The transition matrix Q: entry (r, c) is the coefficient of b_{A_r} in
/// x_{S(A_c)}, rows and columns both in cardinality-then-lex order on A.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub row_subsets: Vec<Subset>,
    pub column_subsets: Vec<Subset>,
    pub entries: Vec<Vec<Rat>>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.row_subsets.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.row_subsets.iter().map(|a| a.elements()).collect::<Vec<_>>(),
            "columns": self.column_subsets.iter().map(|s| s.elements()).collect::<Vec<_>>(),
            "entries": self.entries.iter()
                .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Builds Q and verifies it is lower triangular with unit diagonal.
pub fn transition_matrix(alpha: &Alpha) -> Result<TransitionMatrix, Error> {
    let n = alpha.n();
    let rows = proper_basis_subsets(n);
    let m = rows.len();
    let mut column_subsets = Vec::with_capacity(m);
    let mut columns = Vec::with_capacity(m);
    for &a in &rows {
        let s = subset_for_row(alpha, a)?;
        columns.push(expand_on_basis(&x_s(alpha, s)?)?);
        column_subsets.push(s);
    }
    let mut entries = vec![vec![Rat::zero(); m]; m];
    for (c, coeffs) in columns.iter().enumerate() {
        for (r, a) in rows.iter().enumerate() {
            entries[r][c] = coeffs[a].clone();
        }
    }
    for c in 0..m {
        if entries[c][c] != rat(1) {
            return Err(Error::ClaimViolation(format!(
                "transition matrix diagonal at A={} is {}, expected 1",
                rows[c], entries[c][c]
            )));
        }
        for r in 0..c {
            if !entries[r][c].is_zero() {
                return Err(Error::ClaimViolation(format!(
                    "transition matrix entry above the diagonal at row A={}, column S={} is {}",
                    rows[r], column_subsets[c], entries[r][c]
                )));
            }
        }
    }
    Ok(TransitionMatrix {
        row_subsets: rows,
        column_subsets,
        entries,
    })
}

/// Verifies that {v_S : ∅ ≠ S short} spans the degree-(n-2) slice of the
/// multilinear quotient by row reduction, and that the transition-matrix
/// route agrees.
pub fn spanning_check(alpha: &Alpha) -> Result<bool, Error> {
    let n = alpha.n();
    let rank = vs_span_rank(alpha)?;
    let want = (1usize << (n - 1)) - 1;
    if rank != want {
        return Err(Error::ClaimViolation(format!(
            "v_S classes span a rank-{rank} subspace of the {want}-dimensional top slice"
        )));
    }
    // The triangularity route must agree; any failure surfaces as its own
    // claim violation.
    transition_matrix(alpha)?;
    Ok(true)
}

/// Rank of the span of the reduced v_S classes inside the top slice.
fn vs_span_rank(alpha: &Alpha) -> Result<usize, Error> {
    let n = alpha.n();
    let basis = proper_basis_subsets(n);
    let index: BTreeMap<Subset, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, i))
        .collect();
    let mut space = crate::linalg::RowSpace::new(basis.len());
    for s in alpha.nonempty_shorts() {
        let coeffs = expand_on_basis(&v_s(s)?)?;
        let row = coeffs
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(a, v)| (index[&a], v))
            .collect();
        space.insert(row);
    }
    Ok(space.rank())
}
