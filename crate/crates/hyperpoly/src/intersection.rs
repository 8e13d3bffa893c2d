//! Intersection form on the top cohomology of a core component surface.
//!
//! The pairing ∫(β_k β_l) is computed in the quotient by the U_S ideal. The
//! normalization ∫(-b_1 b_j) = 1, with j the smallest index in S^c keeping
//! S ∪ {j} short, pins the top class only in the surface case (n = 5,
//! |S| = 2); outside that case the pairing is reported up to an unknown
//! positive scale.

use crate::combinat::{Alpha, Subset};
use crate::error::Error;
use crate::linalg::RowSpace;
use crate::presentations::{core_ordinary_ideal, Presentation};
use crate::{QPoly, Rat};
use num_traits::{One, Zero};

/// Signature of a rational symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Clone)]
pub struct IntersectionForm {
    pub gram: Vec<Vec<Rat>>,
    pub signature: Signature,
    /// Set to k when the form is congruent to diag(1, -1, ..., -1) with k
    /// minus signs: the profile of CP^2 blown up at k points.
    pub blow_up_points: Option<usize>,
    /// False when the overall positive scale of the pairing is not pinned
    /// down by the surface normalization.
    pub normalized: bool,
}

impl IntersectionForm {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "gram": self.gram.iter()
                .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "signature": {
                "positive": self.signature.positive,
                "negative": self.signature.negative,
                "zero": self.signature.zero,
            },
            "blow_up_points": self.blow_up_points,
            "normalized": self.normalized,
        })
    }
}

/// Normalized intersection form; requires the surface case n = 5, |S| = 2.
pub fn intersection_form(
    a: &Alpha,
    s: Subset,
    basis: &[QPoly],
) -> Result<IntersectionForm, Error> {
    if a.n() != 5 || s.len() != 2 {
        return Err(Error::NotASurface);
    }
    intersection_form_with(a, s, basis, true)
}

/// Intersection pairing up to an unknown positive scale: the top-degree
/// functional is taken to be the coordinate on the 1-dimensional top slice.
pub fn intersection_form_unnormalized(
    a: &Alpha,
    s: Subset,
    basis: &[QPoly],
) -> Result<IntersectionForm, Error> {
    intersection_form_with(a, s, basis, false)
}

fn intersection_form_with(
    a: &Alpha,
    s: Subset,
    basis: &[QPoly],
    normalized: bool,
) -> Result<IntersectionForm, Error> {
    let pres = core_ordinary_ideal(a, s)?;
    let top_degree = a.n() - 3;
    let dims = pres.betti(top_degree)?.dims;
    if dims[top_degree] != 1 {
        return Err(Error::DegenerateTopDegree(dims[top_degree]));
    }
    let scale = if normalized {
        top_normalization(a, s, &pres)?
    } else {
        Rat::one()
    };

    check_basis_independent(&pres, basis)?;

    let m = basis.len();
    let mut gram = vec![vec![Rat::zero(); m]; m];
    for k in 0..m {
        for l in k..m {
            let product = basis[k].mul(&basis[l])?;
            let value = top_coordinate(&pres, &product)? / scale.clone();
            gram[k][l] = value.clone();
            gram[l][k] = value;
        }
    }

    let signature = congruence_signature(&gram);
    let blow_up_points = (signature.zero == 0
        && signature.positive == 1
        && signature.negative + 1 == m)
        .then_some(signature.negative);
    Ok(IntersectionForm {
        gram,
        signature,
        blow_up_points,
        normalized,
    })
}

/// Coordinate of -b_1 b_j on the top class, with j = min{j ∈ S^c : S∪{j}
/// short}; transversality of the corresponding curves makes this +1.
fn top_normalization(a: &Alpha, s: Subset, pres: &Presentation) -> Result<Rat, Error> {
    let j = s
        .complement()
        .elements()
        .into_iter()
        .find(|&j| a.is_short(s.insert(j)).unwrap())
        .ok_or_else(|| {
            Error::PreconditionViolated("no j in S^c with S ∪ {j} short".to_string())
        })?;
    let ring = pres.ring();
    let b1 = QPoly::var_named(ring, "b1");
    let bj = QPoly::var_named(ring, &format!("b{j}"));
    let value = top_coordinate(pres, &b1.mul(&bj)?.neg())?;
    if value.is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "-b1*b{j} vanishes in the top degree"
        )));
    }
    Ok(value)
}

/// Coordinate of a top-degree class on the 1-dimensional top slice.
fn top_coordinate(pres: &Presentation, f: &QPoly) -> Result<Rat, Error> {
    let (_, coords) = pres.ideal().normal_form(f)?;
    debug_assert!(coords.len() <= 1);
    Ok(coords.into_iter().next().unwrap_or_else(Rat::zero))
}

fn check_basis_independent(pres: &Presentation, basis: &[QPoly]) -> Result<(), Error> {
    let mut space: Option<RowSpace<Rat>> = None;
    for beta in basis {
        if beta.homogeneous_degree() != Some(1) {
            return Err(Error::PreconditionViolated(
                "basis classes must be homogeneous of algebraic degree 1".to_string(),
            ));
        }
        let (_, coords) = pres.ideal().normal_form(beta)?;
        let space = space.get_or_insert_with(|| RowSpace::new(coords.len()));
        let row = coords
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if !space.insert(row) {
            return Err(Error::BasisNotIndependent);
        }
    }
    Ok(())
}

/// Inertia of a symmetric rational matrix by congruence diagonalization.
fn congruence_signature(gram: &[Vec<Rat>]) -> Signature {
    let m = gram.len();
    let mut g: Vec<Vec<Rat>> = gram.to_vec();
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for i in 0..m {
        if g[i][i].is_zero() {
            if let Some(j) = (i + 1..m).find(|&j| !g[j][j].is_zero()) {
                g.swap(i, j);
                for row in g.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..m).find(|&j| !g[i][j].is_zero()) {
                // Both diagonals vanish; adding row/column j makes the
                // diagonal entry 2 g[i][j] != 0.
                for c in 0..m {
                    let v = g[j][c].clone();
                    g[i][c] += v;
                }
                for r in 0..m {
                    let v = g[r][j].clone();
                    g[r][i] += v;
                }
            }
        }
        let pivot = g[i][i].clone();
        if pivot.is_zero() {
            sig.zero += 1;
            continue;
        }
        for j in i + 1..m {
            if g[j][i].is_zero() {
                continue;
            }
            let f = g[j][i].clone() / pivot.clone();
            for c in 0..m {
                let v = f.clone() * g[i][c].clone();
                g[j][c] -= v;
            }
            for r in 0..m {
                let v = f.clone() * g[r][i].clone();
                g[r][j] -= v;
            }
        }
        if pivot > Rat::zero() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::scalar::Scalar;

    fn alpha(lens: &[&str]) -> Alpha {
        Alpha::validate(lens).unwrap()
    }

    fn subset(elems: &[usize], n: usize) -> Subset {
        Subset::from_elements(elems, n).unwrap()
    }

    fn b(ring: &std::sync::Arc<PolyRing>, i: usize) -> QPoly {
        QPoly::var_named(ring, &format!("b{i}"))
    }

    fn diagonal(form: &IntersectionForm) -> Vec<i64> {
        form.gram
            .iter()
            .enumerate()
            .map(|(i, row)| {
                assert!(row
                    .iter()
                    .enumerate()
                    .all(|(j, v)| i == j || v.is_zero()));
                let v = &row[i];
                assert!(v.is_integer());
                let digits: String = v.to_string();
                digits.parse().unwrap()
            })
            .collect()
    }

    #[test]
    fn three_point_blow_up() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let ring = PolyRing::b_ring(5);
        let basis = vec![
            b(&ring, 1)
                .sub(&b(&ring, 3))
                .unwrap()
                .sub(&b(&ring, 4))
                .unwrap()
                .sub(&b(&ring, 5))
                .unwrap(),
            b(&ring, 3),
            b(&ring, 4),
            b(&ring, 5),
        ];
        let form = intersection_form(&a, subset(&[1, 2], 5), &basis).unwrap();
        assert_eq!(diagonal(&form), vec![1, -1, -1, -1]);
        assert_eq!(
            form.signature,
            Signature {
                positive: 1,
                negative: 3,
                zero: 0
            }
        );
        assert_eq!(form.blow_up_points, Some(3));
        assert!(form.normalized);
    }

    #[test]
    fn one_point_blow_up() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let ring = PolyRing::b_ring(5);
        let basis = vec![b(&ring, 2), b(&ring, 1).sub(&b(&ring, 2)).unwrap()];
        let form = intersection_form(&a, subset(&[1, 3], 5), &basis).unwrap();
        assert_eq!(diagonal(&form), vec![-1, 1]);
        assert_eq!(form.blow_up_points, Some(1));

        // Same pairing in the reversed basis order.
        let basis = vec![b(&ring, 1).sub(&b(&ring, 2)).unwrap(), b(&ring, 2)];
        let form = intersection_form(&a, subset(&[1, 3], 5), &basis).unwrap();
        assert_eq!(diagonal(&form), vec![1, -1]);
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let ring = PolyRing::b_ring(5);
        let basis = vec![b(&ring, 3), b(&ring, 3)];
        assert!(matches!(
            intersection_form(&a, subset(&[1, 2], 5), &basis),
            Err(Error::BasisNotIndependent)
        ));
    }

    #[test]
    fn normalized_mode_requires_surface() {
        let a = alpha(&["1", "1", "3", "3", "3"]);
        let ring = PolyRing::b_ring(5);
        assert!(matches!(
            intersection_form(&a, subset(&[1, 2, 3], 5), &[b(&ring, 1)]),
            Err(Error::NotASurface)
        ));
        // The unnormalized pairing is still available there.
        let form =
            intersection_form_unnormalized(&a, subset(&[1, 2, 3], 5), &[b(&ring, 1)]).unwrap();
        assert!(!form.normalized);
        assert_eq!(form.gram.len(), 1);
        assert!(!form.gram[0][0].is_zero());
    }

    #[test]
    fn signature_handles_hyperbolic_block() {
        let z = Rat::zero;
        let one = || <Rat as Scalar>::from_integer(1);
        let gram = vec![vec![z(), one()], vec![one(), z()]];
        assert_eq!(
            congruence_signature(&gram),
            Signature {
                positive: 1,
                negative: 1,
                zero: 0
            }
        );
        let gram = vec![vec![z(), z()], vec![z(), one()]];
        assert_eq!(
            congruence_signature(&gram),
            Signature {
                positive: 1,
                negative: 0,
                zero: 1
            }
        );
    }
}
