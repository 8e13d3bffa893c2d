//! Graded ideals and degree-wise linear algebra: Hilbert functions, slice
//! comparison, normal forms.

use crate::error::Error;
use crate::linalg::{RowSpace, SparseRow};
use crate::poly::{Monomial, PolyRing, Polynomial};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_MONOMIAL_BUDGET: usize = 200_000;

/// Per-degree monomial budget, overridable via HYPERPOLY_MONOMIAL_BUDGET.
pub fn monomial_budget() -> usize {
    std::env::var("HYPERPOLY_MONOMIAL_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MONOMIAL_BUDGET)
}

/// Homogeneous generators plus an optional truncation degree `t`: the ideal
/// then additionally contains every element of algebraic degree >= t.
#[derive(Debug, Clone)]
pub struct GradedIdeal<T: Scalar> {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial<T>>,
    truncation: Option<usize>,
}

/// Dimensions of the graded pieces of a quotient ring, indexed by algebraic
/// degree. All cohomology here sits in even degree, so the Euler
/// characteristic is the plain sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertTable {
    pub dims: Vec<usize>,
}

/// Result of comparing two ideals degree by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceComparison {
    pub equal: bool,
    pub first_divergence: Option<usize>,
}

impl HilbertTable {
    pub fn euler(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Dims with trailing zeros removed; the shape quoted in reports.
    pub fn trimmed(&self) -> Vec<usize> {
        let mut dims = self.dims.clone();
        while dims.len() > 1 && dims.last() == Some(&0) {
            dims.pop();
        }
        dims
    }

    /// Poincaré polynomial Σ dims[d] t^{2d} as a display string.
    pub fn poincare(&self) -> String {
        let mut parts = Vec::new();
        for (d, &dim) in self.dims.iter().enumerate() {
            if dim == 0 {
                continue;
            }
            let part = match (d, dim) {
                (0, dim) => format!("{dim}"),
                (d, 1) => format!("t^{}", 2 * d),
                (d, dim) => format!("{dim}t^{}", 2 * d),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Partial sums; the Hilbert table of a free extension by one degree-1
    /// variable.
    pub fn partial_sums(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|&d| {
                acc += d;
                acc
            })
            .collect()
    }
}

impl<T: Scalar> GradedIdeal<T> {
    pub fn new(
        ring: Arc<PolyRing>,
        generators: Vec<Polynomial<T>>,
        truncation: Option<usize>,
    ) -> Result<Self, Error> {
        for g in &generators {
            if g.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            if !g.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
        }
        if let Some(t) = truncation {
            assert!(t >= 1, "truncation degree must be >= 1");
        }
        Ok(GradedIdeal {
            ring,
            generators,
            truncation,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<T>] {
        &self.generators
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// Row space of the degree-`d` slice together with the monomial basis of
    /// that degree.
    pub fn slice(&self, d: usize) -> Result<(Vec<Monomial>, RowSpace<T>), Error> {
        let budget = monomial_budget();
        let monomials = self.ring.monomials_of_degree(d, budget)?;
        let index: BTreeMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut space = RowSpace::new(monomials.len());
        if self.truncation.is_some_and(|t| d >= t) {
            for col in 0..monomials.len() {
                let mut row = SparseRow::new();
                row.insert(col, T::one());
                space.insert(row);
            }
            return Ok((monomials, space));
        }
        for g in &self.generators {
            let Some(dg) = g.homogeneous_degree() else {
                continue; // zero generator
            };
            if dg > d {
                continue;
            }
            for m in self.ring.monomials_of_degree(d - dg, budget)? {
                let shifted = Polynomial::monomial(&self.ring, m, T::one());
                let product = shifted.mul(g)?;
                let mut row = SparseRow::new();
                for (mono, coeff) in product.terms() {
                    row.insert(index[mono], coeff.clone());
                }
                space.insert(row);
            }
        }
        Ok((monomials, space))
    }

    /// dims[d] = #monomials(d) - rank(slice d) for d = 0..=max_degree.
    pub fn hilbert_function(&self, max_degree: usize) -> Result<HilbertTable, Error> {
        let mut dims = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let (monomials, space) = self.slice(d)?;
            dims.push(monomials.len() - space.rank());
        }
        Ok(HilbertTable { dims })
    }

    /// Degree-wise row-space comparison with the first divergence degree.
    pub fn slices_equal(&self, other: &Self, max_degree: usize) -> Result<SliceComparison, Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        for d in 0..=max_degree {
            let (_, a) = self.slice(d)?;
            let (_, b) = other.slice(d)?;
            if !a.space_eq(&b) {
                return Ok(SliceComparison {
                    equal: false,
                    first_divergence: Some(d),
                });
            }
        }
        Ok(SliceComparison {
            equal: true,
            first_divergence: None,
        })
    }

    /// Coordinates of `f` modulo the degree slice, on the monomials without
    /// a pivot. The zero vector iff `f` lies in the slice.
    pub fn normal_form(&self, f: &Polynomial<T>) -> Result<(Vec<Monomial>, Vec<T>), Error> {
        if f.is_zero() {
            return Ok((Vec::new(), Vec::new()));
        }
        let d = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        let (monomials, space) = self.slice(d)?;
        let index: BTreeMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut row = SparseRow::new();
        for (mono, coeff) in f.terms() {
            row.insert(index[mono], coeff.clone());
        }
        let reduced = space.reduce(row);
        let free = space.free_columns();
        let basis: Vec<Monomial> = free.iter().map(|&c| monomials[c].clone()).collect();
        let coords: Vec<T> = free
            .iter()
            .map(|c| reduced.get(c).cloned().unwrap_or_else(T::zero))
            .collect();
        Ok((basis, coords))
    }

    /// Image ideal under x -> 0, re-expressed in `target` (same variables
    /// minus the killed one).
    pub fn eliminate_variable(
        &self,
        var_name: &str,
        target: &Arc<PolyRing>,
    ) -> Result<GradedIdeal<T>, Error> {
        let var = self
            .ring
            .var_index(var_name)
            .ok_or(Error::RingMismatch)?;
        let mut gens = Vec::new();
        for g in &self.generators {
            let img = g.substitute_to_zero(var).project_to(target)?;
            if !img.is_zero() {
                gens.push(img);
            }
        }
        GradedIdeal::new(target.clone(), gens, self.truncation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, Rat};

    fn b(ring: &Arc<PolyRing>, i: usize) -> QPoly {
        QPoly::var_named(ring, &format!("b{i}"))
    }

    /// b_k^2 - b_1 b_k for k = 2..n.
    fn multilinear_rewrite_ideal(n: usize) -> GradedIdeal<Rat> {
        let ring = PolyRing::b_ring(n);
        let gens = (2..=n)
            .map(|k| {
                b(&ring, k)
                    .pow(2)
                    .sub(&b(&ring, 1).mul(&b(&ring, k)).unwrap())
                    .unwrap()
            })
            .collect();
        GradedIdeal::new(ring, gens, None).unwrap()
    }

    #[test]
    fn hilbert_of_rewrite_ideal_degree_two() {
        let ideal = multilinear_rewrite_ideal(5);
        let table = ideal.hilbert_function(2).unwrap();
        // 15 degree-2 monomials minus rank 4
        assert_eq!(table.dims, vec![1, 5, 11]);
    }

    #[test]
    fn hilbert_zero_ideal_one_variable() {
        let ring = PolyRing::b_ring(1);
        let ideal = GradedIdeal::<Rat>::new(ring, vec![], None).unwrap();
        assert_eq!(ideal.hilbert_function(3).unwrap().dims, vec![1, 1, 1, 1]);
    }

    #[test]
    fn hilbert_truncation_only() {
        let ring = PolyRing::b_ring(3);
        let ideal = GradedIdeal::<Rat>::new(ring, vec![], Some(1)).unwrap();
        assert_eq!(ideal.hilbert_function(2).unwrap().dims, vec![1, 0, 0]);
    }

    #[test]
    fn hilbert_zero_ideal_closed_form() {
        // dims[d] = C(d + v - 1, v - 1) for v degree-1 variables
        for v in 1..=3usize {
            let ring = PolyRing::b_ring(v);
            let ideal = GradedIdeal::<Rat>::new(ring, vec![], None).unwrap();
            let table = ideal.hilbert_function(6).unwrap();
            for d in 0..=6usize {
                let mut expect = 1usize;
                for k in 0..(v - 1) {
                    expect = expect * (d + k + 1);
                }
                for k in 1..v {
                    expect /= k;
                }
                assert_eq!(table.dims[d], expect, "v={v} d={d}");
            }
        }
    }

    #[test]
    fn adding_generators_never_increases_dims() {
        let ring = PolyRing::b_ring(3);
        let small = GradedIdeal::<Rat>::new(ring.clone(), vec![b(&ring, 1).pow(2)], None).unwrap();
        let big = GradedIdeal::<Rat>::new(
            ring.clone(),
            vec![b(&ring, 1).pow(2), b(&ring, 2).mul(&b(&ring, 3)).unwrap()],
            None,
        )
        .unwrap();
        let zero = GradedIdeal::<Rat>::new(ring, vec![], None).unwrap();
        let t_small = small.hilbert_function(5).unwrap();
        let t_big = big.hilbert_function(5).unwrap();
        let t_zero = zero.hilbert_function(5).unwrap();
        for d in 0..=5 {
            assert!(t_big.dims[d] <= t_small.dims[d]);
            assert!(t_small.dims[d] <= t_zero.dims[d]);
        }
    }

    #[test]
    fn slices_equal_examples() {
        let ring = PolyRing::b_ring(2);
        let two = Rat::from_integer(2.into());
        let i1 = GradedIdeal::new(ring.clone(), vec![b(&ring, 1)], None).unwrap();
        let i2 = GradedIdeal::new(ring.clone(), vec![b(&ring, 1).scale(&two)], None).unwrap();
        assert!(i1.slices_equal(&i2, 4).unwrap().equal);

        let j1 = GradedIdeal::new(ring.clone(), vec![b(&ring, 1).pow(2)], None).unwrap();
        let j2 = GradedIdeal::new(
            ring.clone(),
            vec![b(&ring, 1).mul(&b(&ring, 2)).unwrap()],
            None,
        )
        .unwrap();
        let cmp = j1.slices_equal(&j2, 4).unwrap();
        assert!(!cmp.equal);
        assert_eq!(cmp.first_divergence, Some(2));
    }

    #[test]
    fn normal_form_examples() {
        let ring = PolyRing::b_ring(2);
        let gen = b(&ring, 2)
            .pow(2)
            .sub(&b(&ring, 1).mul(&b(&ring, 2)).unwrap())
            .unwrap();
        let ideal = GradedIdeal::new(ring.clone(), vec![gen.clone()], None).unwrap();

        // b_2^2 reduces to b_1 b_2
        let (basis, coords) = ideal.normal_form(&b(&ring, 2).pow(2)).unwrap();
        let b1b2 = b(&ring, 1).mul(&b(&ring, 2)).unwrap();
        let nonzero: Vec<_> = basis
            .iter()
            .zip(&coords)
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .collect();
        assert_eq!(nonzero.len(), 1);
        let expect_mono = b1b2.terms().next().unwrap().0.clone();
        assert_eq!(nonzero[0].0, &expect_mono);
        assert_eq!(nonzero[0].1, &Rat::from_integer(1.into()));

        // the generator itself reduces to zero
        let (_, coords) = ideal.normal_form(&gen).unwrap();
        assert!(coords.iter().all(num_traits::Zero::is_zero));

        // inhomogeneous input is rejected
        let f = b(&ring, 1).add(&b(&ring, 1).pow(2)).unwrap();
        assert!(matches!(ideal.normal_form(&f), Err(Error::NotHomogeneous)));
    }
}
