//! Sparse exact multivariate polynomials over a named, graded variable set.
//!
//! Algebraic degree is the weighted exponent sum; cohomological degree is
//! twice the algebraic degree throughout the crate.

use crate::error::Error;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Ordered, graded variable set: (name, algebraic degree) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<(String, usize)>,
}

/// Exponent vector aligned to the ring's variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u16>);

/// Sparse polynomial: monomial -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<T: Scalar> {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, T>,
}

impl PolyRing {
    pub fn new(vars: Vec<(String, usize)>) -> Arc<PolyRing> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, deg) in &vars {
            assert!(*deg >= 1, "variable degree must be >= 1");
            assert!(seen.insert(name.clone()), "duplicate variable name {name}");
        }
        Arc::new(PolyRing { vars })
    }

    /// Q[b_1,...,b_n], all of algebraic degree 1.
    pub fn b_ring(n: usize) -> Arc<PolyRing> {
        PolyRing::new((1..=n).map(|i| (format!("b{i}"), 1)).collect())
    }

    /// Q[b_1,...,b_n,x].
    pub fn bx_ring(n: usize) -> Arc<PolyRing> {
        let mut vars: Vec<(String, usize)> = (1..=n).map(|i| (format!("b{i}"), 1)).collect();
        vars.push(("x".to_string(), 1));
        PolyRing::new(vars)
    }

    /// Q[c_1,...,c_n,p] with deg p = 2.
    pub fn cp_ring(n: usize) -> Arc<PolyRing> {
        let mut vars: Vec<(String, usize)> = (1..=n).map(|i| (format!("c{i}"), 1)).collect();
        vars.push(("p".to_string(), 2));
        PolyRing::new(vars)
    }

    /// Q[c_1,...,c_n,p,x] with deg p = 2.
    pub fn cpx_ring(n: usize) -> Arc<PolyRing> {
        let mut vars: Vec<(String, usize)> = (1..=n).map(|i| (format!("c{i}"), 1)).collect();
        vars.push(("p".to_string(), 2));
        vars.push(("x".to_string(), 1));
        PolyRing::new(vars)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[(String, usize)] {
        &self.vars
    }

    pub fn var_name(&self, idx: usize) -> &str {
        &self.vars[idx].0
    }

    pub fn var_degree(&self, idx: usize) -> usize {
        self.vars[idx].1
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(v, _)| v == name)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> usize {
        m.0.iter()
            .zip(&self.vars)
            .map(|(e, (_, d))| *e as usize * d)
            .sum()
    }

    /// All monomials of algebraic degree `d`, in a fixed deterministic order.
    /// Errors if more than `budget` monomials would be produced.
    pub fn monomials_of_degree(&self, d: usize, budget: usize) -> Result<Vec<Monomial>, Error> {
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.vars.len()];
        self.enumerate(0, d, &mut exps, &mut out, budget)?;
        Ok(out)
    }

    fn enumerate(
        &self,
        var: usize,
        remaining: usize,
        exps: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
        budget: usize,
    ) -> Result<(), Error> {
        if var == self.vars.len() {
            if remaining == 0 {
                if out.len() >= budget {
                    return Err(Error::DegreeBoundExceeded {
                        degree: self.monomial_degree(&Monomial(exps.clone())),
                        count: out.len() + 1,
                        budget,
                    });
                }
                out.push(Monomial(exps.clone()));
            }
            return Ok(());
        }
        let w = self.vars[var].1;
        for e in 0..=(remaining / w) {
            exps[var] = e as u16;
            self.enumerate(var + 1, remaining - e * w, exps, out, budget)?;
        }
        exps[var] = 0;
        Ok(())
    }
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: T) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; ring.num_vars()]), c);
        }
        p
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, T::one())
    }

    pub fn var(ring: &Arc<PolyRing>, idx: usize) -> Self {
        let mut exps = vec![0u16; ring.num_vars()];
        exps[idx] = 1;
        let mut p = Self::zero(ring);
        p.terms.insert(Monomial(exps), T::one());
        p
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Self {
        Self::var(ring, ring.var_index(name).expect("unknown variable"))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: T) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    fn check_ring(&self, other: &Self) -> Result<(), Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn insert_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(&self.ring);
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let exps: Vec<u16> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.insert_term(Monomial(exps), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..e {
            out = out.mul(self).unwrap();
        }
        out
    }

    /// Sets one variable to zero.
    pub fn substitute_to_zero(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == 0 {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Reinterprets the polynomial in `target` by substituting each source
    /// variable with the image polynomial of the same index.
    pub fn substitute(
        &self,
        target: &Arc<PolyRing>,
        images: &[Polynomial<T>],
    ) -> Result<Polynomial<T>, Error> {
        if images.len() != self.ring.num_vars() {
            return Err(Error::RingMismatch);
        }
        for img in images {
            if img.ring != *target {
                return Err(Error::RingMismatch);
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (var, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[var].pow(e as usize))?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Drops a variable from the ring entirely. The polynomial must not use it.
    pub fn project_to(&self, target: &Arc<PolyRing>) -> Result<Polynomial<T>, Error> {
        let map: Vec<Option<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|(name, _)| target.var_index(name))
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.num_vars()];
            for (var, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    match map[var] {
                        Some(t) => exps[t] = e,
                        None => return Err(Error::RingMismatch),
                    }
                }
            }
            out.insert_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by a single variable; every monomial must contain it.
    pub fn divide_by_variable(&self, var: usize) -> Result<Polynomial<T>, Error> {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == 0 {
                return Err(Error::NotDivisible(self.ring.var_name(var).to_string()));
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.terms.insert(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Algebraic degree if homogeneous, None for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for (m, _) in &self.terms {
            let d = self.ring.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Terms in canonical graded-lex order (degree ascending, then exponent
    /// vector lexicographic).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &T)> {
        let mut terms: Vec<(&Monomial, &T)> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (self.ring.monomial_degree(m), (*m).clone()));
        terms
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "monomial": m.0,
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let is_const = m.0.iter().all(|&e| e == 0);
            if is_const || !c.is_one() {
                write!(f, "{c}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (var, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    write!(f, "{}", self.ring.var_name(var))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
