//! Floating-point side of the story: the group action on T*C^{2n}, the real
//! and complex moment maps, the stability test, the Morse function Φ, and the
//! polygon-pair correspondence for core components, in both directions.
//!
//! Conventions: q_i are complex column 2-vectors, p_i complex row 2-vectors.
//! Traceless Hermitian 2×2 matrices are identified with R³ via
//! M(x,y,z) = [[z, x−iy], [x+iy, −z]], and carry the metric A·B = ½ tr AB,
//! under which ‖M(x,y,z)‖² = x² + y² + z².

use crate::combinat::{Alpha, Subset};
use crate::error::Error;
use num_complex::Complex;
use num_traits::{Float, ToPrimitive};

/// 2×2 complex matrix, rows of columns.
pub type CMat2<F> = [[Complex<F>; 2]; 2];

/// An element of T*C^{2n}: n column vectors q_i and n row vectors p_i.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPQ<F: Float> {
    pub q: Vec<[Complex<F>; 2]>,
    pub p: Vec<[Complex<F>; 2]>,
}

impl<F: Float> PointPQ<F> {
    pub fn new(q: Vec<[Complex<F>; 2]>, p: Vec<[Complex<F>; 2]>) -> Result<Self, Error> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch(q.len(), p.len()));
        }
        let finite = |v: &[[Complex<F>; 2]]| {
            v.iter()
                .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        };
        if !finite(&q) || !finite(&p) {
            return Err(Error::PreconditionViolated(
                "point entries must be finite".to_string(),
            ));
        }
        Ok(PointPQ { q, p })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// Zero cotangent fibre: p = 0 over the given q.
    pub fn zero_section(q: Vec<[Complex<F>; 2]>) -> Self {
        let zero = Complex::new(F::zero(), F::zero());
        let p = vec![[zero, zero]; q.len()];
        PointPQ { q, p }
    }
}

impl PointPQ<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        let dump = |v: &[[Complex<f64>; 2]]| {
            v.iter()
                .map(|c| c.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        serde_json::json!({ "q": dump(&self.q), "p": dump(&self.p) })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, Error> {
        let parse = |key: &str| -> Result<Vec<[Complex<f64>; 2]>, Error> {
            let bad = || Error::ParseError(format!("point field {key:?}"));
            let rows = value.get(key).and_then(|v| v.as_array()).ok_or_else(bad)?;
            rows.iter()
                .map(|row| {
                    let pair = row.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                    let mut out = [Complex::new(0.0, 0.0); 2];
                    for (slot, entry) in out.iter_mut().zip(pair) {
                        let re_im = entry.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
                        let re = re_im[0].as_f64().ok_or_else(bad)?;
                        let im = re_im[1].as_f64().ok_or_else(bad)?;
                        *slot = Complex::new(re, im);
                    }
                    Ok(out)
                })
                .collect()
        };
        PointPQ::new(parse("q")?, parse("p")?)
    }
}

/// An element [A; e_1,…,e_n] of the gauge group, acting on the right.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<F: Float> {
    pub a: CMat2<F>,
    pub e: Vec<Complex<F>>,
}

impl<F: Float> GroupElement<F> {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            a: mat_identity(),
            e: vec![Complex::new(F::one(), F::zero()); n],
        }
    }

    /// Whether the element lies in the compact group: A unitary, |e_i| = 1.
    pub fn is_compact(&self, tol: F) -> bool {
        let aa = mat_mul(&mat_adjoint(&self.a), &self.a);
        let unitary = mat_sub(&aa, &mat_identity())
            .iter()
            .flatten()
            .all(|z| z.norm() <= tol);
        unitary && self.e.iter().all(|e| (e.norm() - F::one()).abs() <= tol)
    }

    /// |det A − 1| must stay within tolerance for a bona fide group element.
    pub fn det_defect(&self) -> F {
        (mat_det(&self.a) - Complex::new(F::one(), F::zero())).norm()
    }
}

/// A traceless Hermitian 2×2 matrix, stored as its 3 real coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Vector<F: Float> {
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Float> Su2Vector<F> {
    pub fn new(x: F, y: F, z: F) -> Self {
        Su2Vector { x, y, z }
    }

    pub fn zero() -> Self {
        Su2Vector::new(F::zero(), F::zero(), F::zero())
    }

    /// Matrix form [[z, x−iy], [x+iy, −z]].
    pub fn to_matrix(&self) -> CMat2<F> {
        let off = Complex::new(self.x, -self.y);
        [
            [Complex::new(self.z, F::zero()), off],
            [off.conj(), Complex::new(-self.z, F::zero())],
        ]
    }

    /// Coordinates of the traceless part of a (nearly) Hermitian matrix.
    pub fn from_matrix(m: &CMat2<F>) -> Self {
        let half = F::from(0.5).unwrap();
        Su2Vector {
            x: (m[0][1].re + m[1][0].re) * half,
            y: (m[1][0].im - m[0][1].im) * half,
            z: (m[0][0].re - m[1][1].re) * half,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Su2Vector::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Su2Vector::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn scale(&self, c: F) -> Self {
        Su2Vector::new(self.x * c, self.y * c, self.z * c)
    }

    /// The trace-form inner product ½ tr(AB) = x₁x₂ + y₁y₂ + z₁z₂.
    pub fn dot(&self, other: &Self) -> F {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Su2Vector::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(&self) -> F {
        self.dot(self)
    }

    pub fn norm(&self) -> F {
        self.norm_sq().sqrt()
    }

    /// Conjugated vector u^† M u, still traceless Hermitian for unitary u.
    pub fn rotate(&self, u: &CMat2<F>) -> Self {
        let m = mat_mul(&mat_adjoint(u), &mat_mul(&self.to_matrix(), u));
        Su2Vector::from_matrix(&m)
    }
}

impl Su2Vector<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.x, self.y, self.z])
    }
}

/// The (u, v, w) data of a polygon pair supported on a core component U_S.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonPairData<F: Float> {
    pub s: Subset,
    /// u_i for i ∈ S, in increasing index order.
    pub u: Vec<Su2Vector<F>>,
    /// v_j for j ∈ S^c, in increasing index order.
    pub v: Vec<Su2Vector<F>>,
    pub w: Su2Vector<F>,
}

impl<F: Float> PolygonPairData<F> {
    /// Checks conditions (1)–(5): closure of (w, v_j), Σu_i = 0, u_i ⊥ w,
    /// ‖v_j‖ = α_j, ‖w‖ = Σ_S √(α_i² + ‖u_i‖²).
    pub fn validate(&self, a: &Alpha, tol: F) -> Result<(), Error> {
        let alpha = alpha_floats::<F>(a);
        let s_elems = self.s.elements();
        let sc_elems = self.s.complement().elements();
        if self.u.len() != s_elems.len() || self.v.len() != sc_elems.len() {
            return Err(Error::DimensionMismatch(self.u.len(), s_elems.len()));
        }

        let mut closure = self.w;
        for v in &self.v {
            closure = closure.add(v);
        }
        check_condition(1, closure.norm(), tol)?;

        let mut u_sum = Su2Vector::zero();
        for u in &self.u {
            u_sum = u_sum.add(u);
        }
        check_condition(2, u_sum.norm(), tol)?;

        let r3 = self
            .u
            .iter()
            .map(|u| u.dot(&self.w).abs())
            .fold(F::zero(), F::max);
        check_condition(3, r3, tol)?;

        let r4 = self
            .v
            .iter()
            .zip(&sc_elems)
            .map(|(v, &j)| (v.norm() - alpha[j - 1]).abs())
            .fold(F::zero(), F::max);
        check_condition(4, r4, tol)?;

        let expected: F = self
            .u
            .iter()
            .zip(&s_elems)
            .map(|(u, &i)| (alpha[i - 1] * alpha[i - 1] + u.norm_sq()).sqrt())
            .fold(F::zero(), |acc, t| acc + t);
        check_condition(5, (self.w.norm() - expected).abs(), tol)?;
        Ok(())
    }

    /// Applies M ↦ U^† M U to every constituent vector.
    pub fn rotate(&self, u: &CMat2<F>) -> Self {
        PolygonPairData {
            s: self.s,
            u: self.u.iter().map(|t| t.rotate(u)).collect(),
            v: self.v.iter().map(|t| t.rotate(u)).collect(),
            w: self.w.rotate(u),
        }
    }

    /// Largest componentwise deviation from another data set.
    pub fn distance(&self, other: &Self) -> F {
        let mut d = self.w.sub(&other.w).norm();
        for (a, b) in self.u.iter().zip(&other.u) {
            d = d.max(a.sub(b).norm());
        }
        for (a, b) in self.v.iter().zip(&other.v) {
            d = d.max(a.sub(b).norm());
        }
        d
    }
}

impl PolygonPairData<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": self.s,
            "u": self.u.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "v": self.v.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "w": self.w.to_json(),
        })
    }
}

fn check_condition<F: Float>(index: usize, residual: F, tol: F) -> Result<(), Error> {
    if residual > tol {
        return Err(Error::ConditionViolated {
            index,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn alpha_floats<F: Float>(a: &Alpha) -> Vec<F> {
    a.lengths()
        .iter()
        .map(|r| {
            let n = r.numer().to_f64().expect("edge length fits in f64");
            let d = r.denom().to_f64().expect("edge length fits in f64");
            F::from(n / d).unwrap()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// 2×2 matrix helpers.

pub fn mat_identity<F: Float>() -> CMat2<F> {
    let one = Complex::new(F::one(), F::zero());
    let zero = Complex::new(F::zero(), F::zero());
    [[one, zero], [zero, one]]
}

pub fn mat_mul<F: Float>(a: &CMat2<F>, b: &CMat2<F>) -> CMat2<F> {
    let mut out = [[Complex::new(F::zero(), F::zero()); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_adjoint<F: Float>(a: &CMat2<F>) -> CMat2<F> {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn mat_det<F: Float>(a: &CMat2<F>) -> Complex<F> {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat_sub<F: Float>(a: &CMat2<F>, b: &CMat2<F>) -> CMat2<F> {
    let mut out = *a;
    for (row, brow) in out.iter_mut().zip(b) {
        for (entry, bv) in row.iter_mut().zip(brow) {
            *entry = *entry - *bv;
        }
    }
    out
}

/// M − (tr M / 2)·I.
pub fn traceless<F: Float>(m: &CMat2<F>) -> CMat2<F> {
    let half = Complex::new(F::from(0.5).unwrap(), F::zero());
    let t = (m[0][0] + m[1][1]) * half;
    let mut out = *m;
    out[0][0] = out[0][0] - t;
    out[1][1] = out[1][1] - t;
    out
}

/// Column q times row p, a rank-one 2×2 matrix.
pub fn col_times_row<F: Float>(q: &[Complex<F>; 2], p: &[Complex<F>; 2]) -> CMat2<F> {
    [[q[0] * p[0], q[0] * p[1]], [q[1] * p[0], q[1] * p[1]]]
}

fn mat_times_col<F: Float>(a: &CMat2<F>, q: &[Complex<F>; 2]) -> [Complex<F>; 2] {
    [
        a[0][0] * q[0] + a[0][1] * q[1],
        a[1][0] * q[0] + a[1][1] * q[1],
    ]
}

fn row_times_mat<F: Float>(p: &[Complex<F>; 2], a: &CMat2<F>) -> [Complex<F>; 2] {
    [
        p[0] * a[0][0] + p[1] * a[1][0],
        p[0] * a[0][1] + p[1] * a[1][1],
    ]
}

fn vec_norm_sq<F: Float>(v: &[Complex<F>; 2]) -> F {
    v[0].norm_sqr() + v[1].norm_sqr()
}

// ---------------------------------------------------------------------------
// Group action and moment maps.

/// Right action (p,q)·[A;e] = ((e_i⁻¹ p_i A)_i, (A⁻¹ q_i e_i)_i).
pub fn group_act<F: Float>(
    x: &PointPQ<F>,
    g: &GroupElement<F>,
    tol: F,
) -> Result<PointPQ<F>, Error> {
    if g.e.len() != x.n() {
        return Err(Error::DimensionMismatch(g.e.len(), x.n()));
    }
    let det = mat_det(&g.a);
    if det.norm() <= tol {
        return Err(Error::SingularGroupElement);
    }
    let inv_scale = det.inv();
    let a_inv = [
        [g.a[1][1] * inv_scale, -g.a[0][1] * inv_scale],
        [-g.a[1][0] * inv_scale, g.a[0][0] * inv_scale],
    ];
    let mut q = Vec::with_capacity(x.n());
    let mut p = Vec::with_capacity(x.n());
    for i in 0..x.n() {
        if g.e[i].norm() <= tol {
            return Err(Error::SingularGroupElement);
        }
        let qe = mat_times_col(&a_inv, &x.q[i]);
        q.push([qe[0] * g.e[i], qe[1] * g.e[i]]);
        let e_inv = g.e[i].inv();
        let pe = row_times_mat(&x.p[i], &g.a);
        p.push([pe[0] * e_inv, pe[1] * e_inv]);
    }
    Ok(PointPQ { q, p })
}

/// Real moment map: su(2)*-part ½Σ[(q_iq_i*)₀ − (p_i*p_i)₀] as an Su2Vector
/// (the matrix form carries the extra factor √−1), and u(1)-parts
/// ½(|q_i|² − |p_i|²).
pub fn mu_real<F: Float>(x: &PointPQ<F>) -> (Su2Vector<F>, Vec<F>) {
    let half = F::from(0.5).unwrap();
    let mut su2 = Su2Vector::zero();
    let mut u1 = Vec::with_capacity(x.n());
    for (q, p) in x.q.iter().zip(&x.p) {
        let qq = traceless(&col_times_row(q, &[q[0].conj(), q[1].conj()]));
        let pp = traceless(&col_times_row(&[p[0].conj(), p[1].conj()], p));
        su2 = su2.add(&Su2Vector::from_matrix(&mat_sub(&qq, &pp)));
        u1.push((vec_norm_sq(q) - vec_norm_sq(p)) * half);
    }
    (su2.scale(half), u1)
}

/// Complex moment map: sl(2,C)*-part −Σ(q_ip_i)₀ and components √−1·p_iq_i.
pub fn mu_complex<F: Float>(x: &PointPQ<F>) -> (CMat2<F>, Vec<Complex<F>>) {
    let zero = Complex::new(F::zero(), F::zero());
    let mut part = [[zero; 2]; 2];
    let mut comps = Vec::with_capacity(x.n());
    for (q, p) in x.q.iter().zip(&x.p) {
        let qp = traceless(&col_times_row(q, p));
        for (row, qrow) in part.iter_mut().zip(&qp) {
            for (entry, qv) in row.iter_mut().zip(qrow) {
                *entry = *entry - *qv;
            }
        }
        let dot = p[0] * q[0] + p[1] * q[1];
        comps.push(Complex::new(F::zero(), F::one()) * dot);
    }
    (part, comps)
}

/// Distance of x from the level set μ_R = (α, 0), μ_C = 0.
pub fn moment_residual<F: Float>(a: &Alpha, x: &PointPQ<F>) -> F {
    let alpha = alpha_floats::<F>(a);
    let (su2, u1) = mu_real(x);
    let (slc, comps) = mu_complex(x);
    let mut r = su2.norm();
    for (value, target) in u1.iter().zip(&alpha) {
        r = r.max((*value - *target).abs());
    }
    for row in &slc {
        for entry in row {
            r = r.max(entry.norm());
        }
    }
    for c in &comps {
        r = r.max(c.norm());
    }
    r
}

/// The circle moment map Φ = ½ Σ |p_i|².
pub fn phi_moment<F: Float>(x: &PointPQ<F>) -> F {
    let half = F::from(0.5).unwrap();
    x.p.iter()
        .map(vec_norm_sq)
        .fold(F::zero(), |acc, t| acc + t)
        * half
}

// ---------------------------------------------------------------------------
// Stability.

/// Why a point fails stability.
#[derive(Debug, Clone, PartialEq)]
pub enum StabilityWitness {
    /// q_i vanishes (1-based index).
    ZeroQ(usize),
    /// A straight subset, with p = 0 outside it, that is long.
    LongStraight(Subset),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    pub witness: Option<StabilityWitness>,
    /// Proportionality classes of the q_i (each a maximal straight subset).
    pub straight_classes: Vec<Subset>,
}

/// Stability test: every q_i nonzero, and every straight subset carrying all
/// the nonvanishing p's must be short.
pub fn is_stable<F: Float>(a: &Alpha, x: &PointPQ<F>, tol: F) -> StabilityReport {
    let n = x.n();
    for (i, q) in x.q.iter().enumerate() {
        if vec_norm_sq(q).sqrt() <= tol {
            return StabilityReport {
                stable: false,
                witness: Some(StabilityWitness::ZeroQ(i + 1)),
                straight_classes: Vec::new(),
            };
        }
    }

    // Union-find over proportionality: |det(q_i q_j)| ≤ tol·|q_i||q_j|.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let det = x.q[i][0] * x.q[j][1] - x.q[i][1] * x.q[j][0];
            let scale = vec_norm_sq(&x.q[i]).sqrt() * vec_norm_sq(&x.q[j]).sqrt();
            if det.norm() <= tol * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: Vec<Subset> = Vec::new();
    for root in 0..n {
        if find(&mut parent, root) == root {
            let mut class = Subset::empty(n);
            for i in 0..n {
                if find(&mut parent, i) == root {
                    class = class.insert(i + 1);
                }
            }
            classes.push(class);
        }
    }
    classes.sort();

    // A straight S with p ≈ 0 on S^c lies inside one class C and forces
    // p ≈ 0 on C∖S as well; since longness is monotone it suffices to test
    // each full class.
    let supported: Subset = (0..n)
        .filter(|&i| vec_norm_sq(&x.p[i]).sqrt() > tol)
        .fold(Subset::empty(n), |acc, i| acc.insert(i + 1));
    for &class in &classes {
        if supported.is_subset_of(class) && !class.is_full() {
            if a.is_long(class).unwrap_or(false) {
                return StabilityReport {
                    stable: false,
                    witness: Some(StabilityWitness::LongStraight(class)),
                    straight_classes: classes,
                };
            }
        } else if class.is_full() && supported.is_subset_of(class) {
            // The full set is always long (its complement is empty).
            return StabilityReport {
                stable: false,
                witness: Some(StabilityWitness::LongStraight(class)),
                straight_classes: classes,
            };
        }
    }
    StabilityReport {
        stable: true,
        witness: None,
        straight_classes: classes,
    }
}

// ---------------------------------------------------------------------------
// The polygon-pair correspondence.

/// Forward direction: extract (u, v, w) from a point of μ⁻¹(level) with S
/// straight and p supported on S.
pub fn polygon_pair_from_point<F: Float>(
    a: &Alpha,
    s: Subset,
    x: &PointPQ<F>,
    tol: F,
) -> Result<PolygonPairData<F>, Error> {
    if x.n() != a.n() {
        return Err(Error::DimensionMismatch(x.n(), a.n()));
    }
    let residual = moment_residual(a, x);
    if residual > tol {
        return Err(Error::PreconditionViolated(format!(
            "moment-map residual {:e} exceeds tolerance",
            residual.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let s_elems = s.elements();
    for (k, &i) in s_elems.iter().enumerate() {
        for &j in &s_elems[k + 1..] {
            let (qi, qj) = (&x.q[i - 1], &x.q[j - 1]);
            let det = qi[0] * qj[1] - qi[1] * qj[0];
            let scale = vec_norm_sq(qi).sqrt() * vec_norm_sq(qj).sqrt();
            if det.norm() > tol * scale {
                return Err(Error::PreconditionViolated(format!(
                    "S is not straight: q_{i}, q_{j} have residual {:e}",
                    det.norm().to_f64().unwrap_or(f64::NAN)
                )));
            }
        }
    }
    for j in s.complement().elements() {
        let pnorm = vec_norm_sq(&x.p[j - 1]).sqrt();
        if pnorm > tol {
            return Err(Error::PreconditionViolated(format!(
                "p_{j} has norm {:e} but must vanish outside S",
                pnorm.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }

    let alpha = alpha_floats::<F>(a);
    let two = F::from(2.0).unwrap();
    let mut u = Vec::new();
    let mut w = Su2Vector::zero();
    for &i in &s_elems {
        let (q, p) = (&x.q[i - 1], &x.p[i - 1]);
        // u_i = q_ip_i + p_i*q_i* is Hermitian with trace 2·Re(p·q) ≈ 0 on
        // the μ_C level set; the traceless projection absorbs the residue.
        let qp = col_times_row(q, p);
        let sum = [
            [qp[0][0] + qp[0][0].conj(), qp[0][1] + qp[1][0].conj()],
            [qp[1][0] + qp[0][1].conj(), qp[1][1] + qp[1][1].conj()],
        ];
        let ui = Su2Vector::from_matrix(&traceless(&sum));
        let qq = traceless(&col_times_row(q, &[q[0].conj(), q[1].conj()]));
        let pp = traceless(&col_times_row(&[p[0].conj(), p[1].conj()], p));
        w = w.add(&Su2Vector::from_matrix(&mat_sub(&qq, &pp)));
        u.push(ui);
        // The identity ‖u_i‖² = |q_i|²(|q_i|² − 2α_i) holds on the level set.
        let qn = vec_norm_sq(q);
        let identity_residual = (ui.norm_sq() - qn * (qn - two * alpha[i - 1])).abs();
        if identity_residual > tol {
            return Err(Error::PreconditionViolated(format!(
                "norm identity for u_{i} off by {:e}",
                identity_residual.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    let v = s
        .complement()
        .elements()
        .into_iter()
        .map(|j| {
            let q = &x.q[j - 1];
            Su2Vector::from_matrix(&traceless(&col_times_row(q, &[q[0].conj(), q[1].conj()])))
        })
        .collect();

    let data = PolygonPairData { s, u, v, w };
    data.validate(a, tol)?;
    Ok(data)
}

/// Inverse direction: the gauge-fixed point over given polygon-pair data.
/// Returns the point together with the unitary U used to rotate w onto the
/// positive z-axis; the forward map of the point reproduces data.rotate(&U).
pub fn point_from_polygon_pair<F: Float>(
    a: &Alpha,
    s: Subset,
    data: &PolygonPairData<F>,
    tol: F,
) -> Result<(PointPQ<F>, CMat2<F>), Error> {
    if data.s != s {
        return Err(Error::PreconditionViolated(
            "subset mismatch between S and data".to_string(),
        ));
    }
    data.validate(a, tol)?;
    let r = data.w.norm();
    if r <= tol {
        return Err(Error::ZeroW);
    }

    // U = [ψ φ] with ψ the +‖w‖ eigenvector of the matrix form of w; then
    // U^† w U = ‖w‖·diag(1,−1).
    let psi = spinor_square_root(&data.w.scale(F::one() / (F::from(2.0).unwrap() * r)));
    let u_rot: CMat2<F> = [
        [psi[0], -psi[1].conj()],
        [psi[1], psi[0].conj()],
    ];
    let rotated = data.rotate(&u_rot);

    let alpha = alpha_floats::<F>(a);
    let zero = Complex::new(F::zero(), F::zero());
    let mut q = vec![[zero, zero]; a.n()];
    let mut p = vec![[zero, zero]; a.n()];

    for (u_i, &i) in rotated.u.iter().zip(&s.elements()) {
        // In the rotated frame u_i ⊥ ẑ, so u_i = offdiag(λ_i, λ̄_i).
        let lambda = Complex::new(u_i.x, -u_i.y);
        let ai = alpha[i - 1];
        let a_norm = (ai + (ai * ai + lambda.norm_sqr()).sqrt()).sqrt();
        q[i - 1] = [Complex::new(a_norm, F::zero()), zero];
        p[i - 1] = [zero, lambda / a_norm];
    }
    for (v_j, &j) in rotated.v.iter().zip(&s.complement().elements()) {
        q[j - 1] = spinor_square_root(v_j);
    }
    Ok((PointPQ { q, p }, u_rot))
}

/// The spinor q with (qq*)₀ = v and first nonvanishing component real
/// positive; |q|² = 2‖v‖.
fn spinor_square_root<F: Float>(v: &Su2Vector<F>) -> [Complex<F>; 2] {
    let r = v.norm();
    let top = (r + v.z).max(F::zero());
    let bottom = (r - v.z).max(F::zero());
    if top >= bottom {
        let q1 = top.sqrt();
        if q1 == F::zero() {
            return [Complex::new(F::zero(), F::zero()); 2];
        }
        // q1 q̄2 = x − iy with q1 real: q2 = (x + iy)/q1.
        [
            Complex::new(q1, F::zero()),
            Complex::new(v.x / q1, v.y / q1),
        ]
    } else {
        let q2 = bottom.sqrt();
        // q̄1 q2 = x + iy would fix q1 up to the same phase convention; the
        // first nonvanishing component here is q2 unless x−iy ≠ 0 lifts q1.
        let q1 = Complex::new(v.x / q2, -v.y / q2);
        if q1.norm() > F::zero() {
            // Rotate the common phase so that q1 becomes real positive.
            let phase = q1 / Complex::new(q1.norm(), F::zero());
            let inv = phase.conj();
            [q1 * inv, Complex::new(q2, F::zero()) * inv]
        } else {
            [q1, Complex::new(q2, F::zero())]
        }
    }
}

// ---------------------------------------------------------------------------
// Seeded sampling of valid polygon-pair data (used by the self-test and the
// CLI round-trip command).

use rand::Rng;

/// A Haar-ish random SU(2) element from a random unit quaternion.
pub fn random_rotation<R: Rng>(rng: &mut R) -> CMat2<f64> {
    let sample = |rng: &mut R| -> f64 { rng.gen::<f64>() * 2.0 - 1.0 };
    loop {
        let (a, b, c, d) = (sample(rng), sample(rng), sample(rng), sample(rng));
        let n = (a * a + b * b + c * c + d * d).sqrt();
        if n > 1e-3 && n <= 1.0 {
            let (a, b, c, d) = (a / n, b / n, c / n, d / n);
            return [
                [Complex::new(a, b), Complex::new(c, d)],
                [Complex::new(-c, d), Complex::new(a, -b)],
            ];
        }
    }
}

/// Draws polygon-pair data satisfying conditions (1)–(5) exactly (to rounding)
/// for a short subset S of size ≥ 2, in a uniformly rotated frame.
pub fn sample_polygon_pair<R: Rng>(
    a: &Alpha,
    s: Subset,
    rng: &mut R,
) -> Result<PolygonPairData<f64>, Error> {
    if !a.is_short(s)? {
        return Err(Error::NotShort(s.elements()));
    }
    if s.len() < 2 {
        return Err(Error::SubsetTooSmall {
            needed: 2,
            got: s.len(),
        });
    }
    let alpha = alpha_floats::<f64>(a);
    let s_elems = s.elements();
    let sc_elems = s.complement().elements();
    let sc_lengths: Vec<f64> = sc_elems.iter().map(|&j| alpha[j - 1]).collect();
    let sc_total: f64 = sc_lengths.iter().sum();
    let sc_max = sc_lengths.iter().cloned().fold(0.0, f64::max);
    let s_total: f64 = s_elems.iter().map(|&i| alpha[i - 1]).sum();

    // Pick a feasible target for ‖w‖: the polygon (w, v_j) must close, and
    // condition (5) bounds ‖w‖ below by Σ_S α_i.
    let lo = s_total.max(2.0 * sc_max - sc_total);
    let hi = sc_total;
    debug_assert!(lo < hi + 1e-12);
    let r_target = lo + rng.gen::<f64>() * 0.8 * (hi - lo).max(0.0);

    // Raw λ's in the plane ⊥ ẑ with Σλ = 0, then a global scale chosen by
    // bisection so that Σ √(α_i² + |λ_i|²) = r_target.
    let mut lambdas: Vec<Complex<f64>> = Vec::new();
    let mut sum = Complex::new(0.0, 0.0);
    for _ in 0..s_elems.len() - 1 {
        let l = Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        sum += l;
        lambdas.push(l);
    }
    lambdas.push(-sum);
    let r_of = |scale: f64| -> f64 {
        s_elems
            .iter()
            .zip(&lambdas)
            .map(|(&i, l)| {
                let ai = alpha[i - 1];
                (ai * ai + scale * scale * l.norm_sqr()).sqrt()
            })
            .sum()
    };
    let scale = if r_of(0.0) >= r_target {
        0.0
    } else {
        let mut top = 1.0;
        while r_of(top) < r_target {
            top *= 2.0;
        }
        let mut bottom = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (bottom + top);
            if r_of(mid) < r_target {
                bottom = mid;
            } else {
                top = mid;
            }
        }
        0.5 * (bottom + top)
    };
    let r = r_of(scale);
    let u: Vec<Su2Vector<f64>> = lambdas
        .iter()
        .map(|l| Su2Vector::new(scale * l.re, -scale * l.im, 0.0))
        .collect();
    let w = Su2Vector::new(0.0, 0.0, r);

    // Close the v-polygon against the fixed target −w by sequential sampling.
    let v = sample_closed_chain(&sc_lengths, &w.scale(-1.0), rng)?;

    let data = PolygonPairData { s, u, v, w };
    // Leave the canonical frame through a random rotation.
    let rot = random_rotation(rng);
    Ok(data.rotate(&rot))
}

/// Vectors v_1,…,v_k of prescribed lengths summing to `target`.
fn sample_closed_chain<R: Rng>(
    lengths: &[f64],
    target: &Su2Vector<f64>,
    rng: &mut R,
) -> Result<Vec<Su2Vector<f64>>, Error> {
    let mut out = Vec::with_capacity(lengths.len());
    let mut t = *target;
    for (idx, &len) in lengths.iter().enumerate() {
        let rest: f64 = lengths[idx + 1..].iter().sum();
        if idx + 1 == lengths.len() {
            if (t.norm() - len).abs() > 1e-6 {
                return Err(Error::PreconditionViolated(format!(
                    "polygon closure infeasible: leftover {:e} for edge {:e}",
                    t.norm(),
                    len
                )));
            }
            out.push(t);
            break;
        }
        let rest_max = lengths[idx + 1..].iter().cloned().fold(0.0, f64::max);
        let tn = t.norm();
        // Feasible distances d = |t − v| for the remaining chain: the chain
        // with edges lengths[idx+1..] must close a gap of d.
        let d_lo = (tn - len).abs().max(2.0 * rest_max - rest).max(0.0);
        let d_hi = (tn + len).min(rest);
        if d_lo > d_hi + 1e-9 {
            return Err(Error::PreconditionViolated(
                "polygon closure infeasible".to_string(),
            ));
        }
        let d = d_lo + rng.gen::<f64>() * (d_hi - d_lo).max(0.0);
        let v = if tn <= 1e-12 {
            random_direction(rng).scale(len)
        } else {
            let cos = ((tn * tn + len * len - d * d) / (2.0 * tn * len)).clamp(-1.0, 1.0);
            let sin = (1.0 - cos * cos).max(0.0).sqrt();
            let t_hat = t.scale(1.0 / tn);
            let (e1, e2) = orthonormal_frame(&t_hat);
            let phi = rng.gen::<f64>() * std::f64::consts::TAU;
            t_hat
                .scale(len * cos)
                .add(&e1.scale(len * sin * phi.cos()))
                .add(&e2.scale(len * sin * phi.sin()))
        };
        t = t.sub(&v);
        out.push(v);
    }
    Ok(out)
}

fn random_direction<R: Rng>(rng: &mut R) -> Su2Vector<f64> {
    loop {
        let v = Su2Vector::new(
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v.scale(1.0 / n);
        }
    }
}

fn orthonormal_frame(unit: &Su2Vector<f64>) -> (Su2Vector<f64>, Su2Vector<f64>) {
    let pick = if unit.x.abs() < 0.9 {
        Su2Vector::new(1.0, 0.0, 0.0)
    } else {
        Su2Vector::new(0.0, 1.0, 0.0)
    };
    let e1 = {
        let c = unit.cross(&pick);
        c.scale(1.0 / c.norm())
    };
    let e2 = unit.cross(&e1);
    (e1, e2)
}
