//! Exact incidence and interpolation in the projective plane over Q.
//!
//! Plane curves of degree `d` are coefficient vectors over the degree-`d`
//! monomials in graded-lexicographic order (`x^d, x^(d-1)y, x^(d-1)z, ...`).
//! A multiplicity condition becomes a block of rows of the interpolation
//! matrix; the projective dimension of a linear system is the number of
//! monomials minus one minus the rank of that matrix.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, q, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{det_rational, kernel_basis, rank_fraction_free, rank_rational};
use crate::poly::{Exp3, Poly3, UPoly};

/// A point of P^2 with rational homogeneous coordinates, scaled so that the
/// last nonzero coordinate is one. Equality is therefore projective equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    coords: [Q; 3],
}

impl fmt::Debug for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", c.join(":"))
    }
}

impl PlanePoint {
    pub fn new(x: Q, y: Q, z: Q) -> Result<Self> {
        let mut coords = [x, y, z];
        let Some(k) = (0..3).rev().find(|&i| !coords[i].is_zero()) else {
            return Err(Error::InvalidPoint("all homogeneous coordinates are zero".into()));
        };
        let s = coords[k].clone();
        for c in coords.iter_mut() {
            *c = &*c / &s;
        }
        Ok(PlanePoint { coords })
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        PlanePoint::new(q(x), q(y), q(z)).expect("nonzero point")
    }

    pub fn coords(&self) -> &[Q; 3] {
        &self.coords
    }

    /// Index of the normalized coordinate and the two remaining indices in
    /// increasing order, which serve as affine chart coordinates.
    pub fn chart(&self) -> (usize, usize, usize) {
        let k = (0..3).rev().find(|&i| !self.coords[i].is_zero()).unwrap();
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        (k, others[0], others[1])
    }

    /// The point `p + lambda*v` as a homogeneous vector, if nonzero.
    pub fn offset(&self, v: &[Q; 3], lambda: &Q) -> Result<PlanePoint> {
        PlanePoint::new(
            &self.coords[0] + lambda * &v[0],
            &self.coords[1] + lambda * &v[1],
            &self.coords[2] + lambda * &v[2],
        )
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::arith::serde_qvec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = crate::arith::serde_qvec::deserialize(d)?;
        let [x, y, z]: [Q; 3] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("a plane point needs three coordinates"))?;
        PlanePoint::new(x, y, z).map_err(serde::de::Error::custom)
    }
}

/// A tangent direction `(u:v)` at a plane point, expressed in that point's
/// affine chart (see [`PlanePoint::chart`]), normalized like a point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub u: Q,
    pub v: Q,
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}:{}>", format_rational(&self.u), format_rational(&self.v))
    }
}

impl Direction {
    pub fn new(u: Q, v: Q) -> Result<Self> {
        if !v.is_zero() {
            Ok(Direction { u: &u / &v, v: Q::one() })
        } else if !u.is_zero() {
            Ok(Direction { u: Q::one(), v: Q::zero() })
        } else {
            Err(Error::InvalidPoint("zero tangent direction".into()))
        }
    }

    pub fn from_i64(u: i64, v: i64) -> Self {
        Direction::new(q(u), q(v)).expect("nonzero direction")
    }

    /// Direction of the line from `base` towards the distinct point `p`.
    pub fn between(base: &PlanePoint, p: &PlanePoint) -> Result<Self> {
        let (k, i, j) = base.chart();
        let pk = &p.coords[k];
        let vi = &p.coords[i] - pk * &base.coords[i];
        let vj = &p.coords[j] - pk * &base.coords[j];
        Direction::new(vi, vj).map_err(|_| Error::InvalidPoint(format!("{p:?} coincides with {base:?}")))
    }

    /// Homogeneous tangent vector `u*e_i + v*e_j` at `base`.
    pub fn vector(&self, base: &PlanePoint) -> [Q; 3] {
        let (_, i, j) = base.chart();
        let mut w = [Q::zero(), Q::zero(), Q::zero()];
        w[i] = self.u.clone();
        w[j] = self.v.clone();
        w
    }

    /// A vector completing [`Direction::vector`] to a basis of the chart.
    pub fn complement(&self, base: &PlanePoint) -> [Q; 3] {
        let (_, i, j) = base.chart();
        let mut n = [Q::zero(), Q::zero(), Q::zero()];
        if self.u.is_zero() {
            n[i] = Q::one();
        } else {
            n[j] = Q::one();
        }
        n
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::arith::serde_qvec::serialize(&[self.u.clone(), self.v.clone()], s)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = crate::arith::serde_qvec::deserialize(d)?;
        let [u, w]: [Q; 2] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("a direction needs two coordinates"))?;
        Direction::new(u, w).map_err(serde::de::Error::custom)
    }
}

/// Where a multiplicity condition is imposed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Locus {
    Proper(PlanePoint),
    /// The point infinitely near `base` in `direction`, on the first-order
    /// neighbourhood of a point carrying multiplicity `base_multiplicity`.
    InfNear { base: PlanePoint, direction: Direction, base_multiplicity: u32 },
}

impl Locus {
    pub fn base(&self) -> &PlanePoint {
        match self {
            Locus::Proper(p) => p,
            Locus::InfNear { base, .. } => base,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultCondition {
    pub locus: Locus,
    pub multiplicity: u32,
}

impl MultCondition {
    pub fn point(p: &PlanePoint, multiplicity: u32) -> Self {
        MultCondition { locus: Locus::Proper(p.clone()), multiplicity }
    }

    pub fn simple(p: &PlanePoint) -> Self {
        MultCondition::point(p, 1)
    }

    /// Passing through the point infinitely near `base` in direction `dir`,
    /// for curves with multiplicity `base_multiplicity` at `base`. The base
    /// multiplicity itself is imposed as part of this condition.
    pub fn inf_near(base: &PlanePoint, dir: &Direction, base_multiplicity: u32) -> Self {
        MultCondition {
            locus: Locus::InfNear { base: base.clone(), direction: dir.clone(), base_multiplicity },
            multiplicity: 1,
        }
    }

    /// Number of linear conditions this condition is expected to impose.
    pub fn expected_conditions(&self) -> usize {
        let m = self.multiplicity as usize;
        match &self.locus {
            Locus::Proper(_) => m * (m + 1) / 2,
            Locus::InfNear { .. } => m * (m + 1) / 2,
        }
    }
}

/// Exponents of the degree-`d` monomials in graded-lexicographic order.
pub fn monomials(d: u32) -> Vec<Exp3> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=(d - a)).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

pub fn num_monomials(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

fn binom(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = Z::one();
    for t in 0..k {
        acc = acc * Z::from(n - t) / Z::from(t + 1);
    }
    Q::from_integer(acc)
}

/// A plane curve: a form of the given degree with coefficients over
/// [`monomials`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Form {
    pub degree: u32,
    #[serde(with = "crate::arith::serde_qvec")]
    pub coeffs: Vec<Q>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        let terms: Vec<String> = monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let mut s = format_rational(c);
                for (k, &p) in e.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => s.push_str(&format!("*{}", names[k])),
                        _ => s.push_str(&format!("*{}^{}", names[k], p)),
                    }
                }
                s
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Form {
    pub fn new(degree: u32, coeffs: Vec<Q>) -> Self {
        assert_eq!(coeffs.len(), num_monomials(degree), "coefficient count for degree {degree}");
        Form { degree, coeffs }
    }

    pub fn from_poly3(degree: u32, p: &Poly3) -> Self {
        let coeffs = monomials(degree).iter().map(|e| p.coeff(e)).collect();
        Form { degree, coeffs }
    }

    pub fn to_poly3(&self) -> Poly3 {
        let mut acc = Poly3::zero();
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            acc = &acc + &Poly3::monomial(*e, c.clone());
        }
        acc
    }

    /// Linear form `a*x + b*y + c*z`.
    pub fn linear(a: Q, b: Q, c: Q) -> Self {
        Form { degree: 1, coeffs: vec![a, b, c] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, p: &[Q; 3]) -> Q {
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| {
                c * num_traits::pow(p[0].clone(), e[0] as usize)
                    * num_traits::pow(p[1].clone(), e[1] as usize)
                    * num_traits::pow(p[2].clone(), e[2] as usize)
            })
            .sum()
    }

    pub fn vanishes_at(&self, p: &PlanePoint) -> bool {
        self.eval(p.coords()).is_zero()
    }

    /// Substitute polynomial coordinates.
    pub fn compose(&self, coords: &[Poly3; 3]) -> Poly3 {
        compose_monomials(self.degree, coords)
            .into_iter()
            .zip(&self.coeffs)
            .fold(Poly3::zero(), |acc, (m, c)| &acc + &m.scale(c))
    }

    /// Order of vanishing at a proper point (`degree + 1` for the zero form).
    pub fn multiplicity_at(&self, p: &PlanePoint) -> u32 {
        for m in 0..=self.degree {
            let rows = taylor_rows(self.degree, p, m + 1);
            let order_m = &rows[(m * (m + 1) / 2) as usize..];
            let nonzero = order_m
                .iter()
                .any(|row| !row.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum::<Q>().is_zero());
            if nonzero {
                return m;
            }
        }
        self.degree + 1
    }

    /// Whether the curve passes through the point infinitely near `base` in
    /// direction `dir`: it passes through `base` with some multiplicity `m`
    /// and its degree-`m` initial form vanishes on the direction.
    pub fn contains_inf_near(&self, base: &PlanePoint, dir: &Direction) -> bool {
        let m = self.multiplicity_at(base);
        if m == 0 || m > self.degree {
            return m > self.degree;
        }
        let w = dir.vector(base);
        let coords: [Poly3; 3] =
            std::array::from_fn(|c| &Poly3::constant(base.coords()[c].clone()) + &Poly3::var(0).scale(&w[c]));
        self.compose(&coords).coeff(&[m, 0, 0]).is_zero()
    }

    /// Whether the line `self` (degree 1) passes through `base` tangent to `dir`.
    pub fn line_tangent_to(&self, base: &PlanePoint, dir: &Direction) -> bool {
        debug_assert_eq!(self.degree, 1);
        let w = dir.vector(base);
        self.vanishes_at(base) && self.eval(&w).is_zero()
    }

    /// Rescale to a primitive integer vector with positive leading entry.
    pub fn normalized(&self) -> Form {
        let ints = crate::arith::primitive_integer_row(&self.coeffs);
        let mut coeffs: Vec<Q> = ints.into_iter().map(Q::from_integer).collect();
        if let Some(lead) = coeffs.iter().find(|c| !c.is_zero()) {
            if lead < &Q::zero() {
                coeffs.iter_mut().for_each(|c| *c = -c.clone());
            }
        }
        Form { degree: self.degree, coeffs }
    }

    pub fn mul(&self, o: &Form) -> Form {
        Form::from_poly3(self.degree + o.degree, &(&self.to_poly3() * &o.to_poly3()))
    }

    /// Exact quotient by another form, if it divides.
    pub fn div_exact(&self, o: &Form) -> Option<Form> {
        if o.degree > self.degree {
            return None;
        }
        let d = self.degree - o.degree;
        // Solve the linear system q*o = self for the coefficients of q.
        let mons = monomials(d);
        let target = monomials(self.degree);
        let op = o.to_poly3();
        let cols: Vec<Poly3> = mons.iter().map(|e| &Poly3::monomial(*e, Q::one()) * &op).collect();
        let mut rows: Vec<Vec<Q>> = target
            .iter()
            .map(|e| {
                let mut r: Vec<Q> = cols.iter().map(|c| c.coeff(e)).collect();
                r.push(-self.to_poly3().coeff(e));
                r
            })
            .collect();
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let k = kernel_basis(&rows, mons.len() + 1);
        let v = k.iter().find(|v| !v[mons.len()].is_zero())?;
        let scale = v[mons.len()].recip();
        Some(Form { degree: d, coeffs: v[..mons.len()].iter().map(|x| x * &scale).collect() })
    }
}

/// All degree-`d` monomials evaluated at polynomial coordinates.
fn compose_monomials(d: u32, coords: &[Poly3; 3]) -> Vec<Poly3> {
    let pows: Vec<Vec<Poly3>> = coords
        .iter()
        .map(|c| {
            std::iter::successors(Some(Poly3::constant(Q::one())), |p| Some(p * c))
                .take(d as usize + 1)
                .collect()
        })
        .collect();
    monomials(d)
        .iter()
        .map(|e| &(&pows[0][e[0] as usize] * &pows[1][e[1] as usize]) * &pows[2][e[2] as usize])
        .collect()
}

/// Rows expressing the Taylor coefficients of order `< m` at a proper point,
/// in the local affine chart of that point. Rows are grouped by order.
fn taylor_rows(d: u32, p: &PlanePoint, m: u32) -> Vec<Vec<Q>> {
    let (k, i, j) = p.chart();
    let c = p.coords();
    let mons = monomials(d);
    let mut rows = Vec::new();
    for order in 0..m {
        for a in (0..=order).rev() {
            let b = order - a;
            let row = mons
                .iter()
                .map(|e| {
                    if e[i] < a || e[j] < b {
                        return Q::zero();
                    }
                    binom(e[i], a)
                        * binom(e[j], b)
                        * num_traits::pow(c[i].clone(), (e[i] - a) as usize)
                        * num_traits::pow(c[j].clone(), (e[j] - b) as usize)
                        * num_traits::pow(c[k].clone(), e[k] as usize)
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Rows for a point infinitely near `base` in direction `dir`: after the
/// substitution `base + u*(w + s*n)` the coefficient of `u^(m0+a) s^b`
/// must vanish for `a + b < m1`, together with multiplicity `m0` at `base`.
fn inf_near_rows(d: u32, base: &PlanePoint, dir: &Direction, m0: u32, m1: u32) -> Vec<Vec<Q>> {
    let mut rows = taylor_rows(d, base, m0);
    let w = dir.vector(base);
    let n = dir.complement(base);
    let u = Poly3::var(0);
    let us = &Poly3::var(0) * &Poly3::var(1);
    let coords: [Poly3; 3] = std::array::from_fn(|c| {
        &(&Poly3::constant(base.coords()[c].clone()) + &u.scale(&w[c])) + &us.scale(&n[c])
    });
    let subs = compose_monomials(d, &coords);
    for order in 0..m1 {
        for a in (0..=order).rev() {
            let b = order - a;
            rows.push(subs.iter().map(|s| s.coeff(&[m0 + a, b, 0])).collect());
        }
    }
    rows
}

fn check_condition(c: &MultCondition) -> Result<()> {
    if c.multiplicity > 3 {
        return Err(Error::UnsupportedCondition(format!("multiplicity {} exceeds 3", c.multiplicity)));
    }
    if let Locus::InfNear { base_multiplicity, .. } = &c.locus {
        if c.multiplicity > (*base_multiplicity).max(1) {
            return Err(Error::UnsupportedCondition(
                "infinitely near multiplicity exceeds the base multiplicity".into(),
            ));
        }
    }
    Ok(())
}

/// The interpolation matrix: one row per linear condition, one column per
/// monomial of degree `d`.
pub fn interpolation_matrix(d: u32, conditions: &[MultCondition]) -> Vec<Vec<Q>> {
    let mut rows = Vec::new();
    for c in conditions {
        match &c.locus {
            Locus::Proper(p) => rows.extend(taylor_rows(d, p, c.multiplicity)),
            Locus::InfNear { base, direction, base_multiplicity } => {
                rows.extend(inf_near_rows(d, base, direction, *base_multiplicity, c.multiplicity))
            }
        }
    }
    rows
}

/// A linear system of plane curves with assigned conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneLinearSystem {
    pub degree: u32,
    pub conditions: Vec<MultCondition>,
    pub rank: usize,
    /// Projective dimension; `-1` means empty.
    pub dim: i64,
    /// Basis of the system, in reduced echelon form over the monomials.
    pub basis: Vec<Form>,
}

impl PlaneLinearSystem {
    pub fn expected_dim(&self) -> i64 {
        num_monomials(self.degree) as i64 - 1 - self.conditions.iter().map(|c| c.expected_conditions() as i64).sum::<i64>()
    }

    /// The member whose coefficient vector has the earliest leading entry,
    /// scaled to a primitive integer vector with positive leading entry.
    pub fn representative(&self) -> Option<Form> {
        self.basis.first().map(Form::normalized)
    }
}

/// Build the linear system, allowing any base multiplicity for infinitely
/// near conditions (base multiplicity zero means passing through the base).
pub(crate) fn system_general(d: u32, conditions: &[MultCondition]) -> Result<PlaneLinearSystem> {
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    for c in conditions {
        check_condition(c)?;
    }
    let rows = interpolation_matrix(d, conditions);
    let n = num_monomials(d);
    let rank = if rows.is_empty() { 0 } else { rank_fraction_free(&rows) };
    let basis = if rows.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![Q::zero(); n];
                v[i] = Q::one();
                Form { degree: d, coeffs: v }
            })
            .collect()
    } else {
        kernel_basis(&rows, n).into_iter().map(|v| Form { degree: d, coeffs: v }).collect::<Vec<_>>()
    };
    let dim = n as i64 - 1 - rank as i64;
    if basis.len() as i64 != dim + 1 {
        return Err(Error::Internal(format!(
            "kernel of size {} disagrees with rank {rank} in degree {d}",
            basis.len()
        )));
    }
    Ok(PlaneLinearSystem { degree: d, conditions: conditions.to_vec(), rank, dim, basis })
}

fn check_public(conditions: &[MultCondition]) -> Result<()> {
    for c in conditions {
        if let Locus::InfNear { base_multiplicity, .. } = &c.locus {
            if !(1..=2).contains(base_multiplicity) {
                return Err(Error::UnsupportedCondition(format!(
                    "infinitely near condition over a base point of multiplicity {base_multiplicity}"
                )));
            }
        }
    }
    Ok(())
}

pub fn linear_system(d: u32, conditions: &[MultCondition]) -> Result<PlaneLinearSystem> {
    check_public(conditions)?;
    system_general(d, conditions)
}

/// Projective dimension of the system of degree-`d` curves satisfying the
/// conditions; `-1` if no curve does.
pub fn linear_system_dim(d: u32, conditions: &[MultCondition]) -> Result<i64> {
    Ok(linear_system(d, conditions)?.dim)
}

/// Same dimension computed by Gauss-Jordan elimination instead of the
/// fraction-free route.
pub fn linear_system_dim_gauss(d: u32, conditions: &[MultCondition]) -> Result<i64> {
    check_public(conditions)?;
    let rows = interpolation_matrix(d, conditions);
    Ok(num_monomials(d) as i64 - 1 - rank_rational(&rows) as i64)
}

pub fn collinear(p: &PlanePoint, q: &PlanePoint, r: &PlanePoint) -> bool {
    det_rational(&[p.coords.to_vec(), q.coords.to_vec(), r.coords.to_vec()]).is_zero()
}

/// The line through two distinct points (cross product of coordinates).
pub fn line_through(p: &PlanePoint, q: &PlanePoint) -> Result<Form> {
    let a = p.coords();
    let b = q.coords();
    let l = Form::linear(
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    );
    if l.is_zero() {
        return Err(Error::InvalidPoint(format!("{p:?} and {q:?} coincide")));
    }
    Ok(l.normalized())
}

/// The line through `base` in direction `dir`.
pub fn tangent_line(base: &PlanePoint, dir: &Direction) -> Form {
    let w = dir.vector(base);
    let other = PlanePoint::new(
        &base.coords[0] + &w[0],
        &base.coords[1] + &w[1],
        &base.coords[2] + &w[2],
    )
    .expect("tangent vector is independent of the base");
    line_through(base, &other).expect("distinct points")
}

/// Rank of the symmetric matrix of a conic: 3 irreducible, 2 line pair,
/// 1 double line.
pub fn rank_class(conic: &Form) -> u8 {
    assert_eq!(conic.degree, 2);
    conic_matrix_rank(conic) as u8
}

fn conic_symmetric_matrix(conic: &Form) -> Vec<Vec<Q>> {
    let c = &conic.coeffs;
    let h = Q::new(Z::one(), Z::from(2));
    // x^2, xy, xz, y^2, yz, z^2
    vec![
        vec![c[0].clone(), &c[1] * &h, &c[2] * &h],
        vec![&c[1] * &h, c[3].clone(), &c[4] * &h],
        vec![&c[2] * &h, &c[4] * &h, c[5].clone()],
    ]
}

fn conic_matrix_rank(conic: &Form) -> usize {
    rank_rational(&conic_symmetric_matrix(conic))
}

pub fn conic_determinant(conic: &Form) -> Q {
    det_rational(&conic_symmetric_matrix(conic))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicSystem {
    pub dim: i64,
    pub representative: Option<Form>,
    pub rank_class: Option<u8>,
}

/// Conics through simple points and first-order tangency conditions.
pub fn conic_through(conditions: &[MultCondition]) -> Result<ConicSystem> {
    if conditions.iter().any(|c| c.multiplicity != 1) {
        return Err(Error::UnsupportedCondition("conic_through takes simple conditions".into()));
    }
    let sys = linear_system(2, conditions)?;
    let representative = sys.representative();
    let rank_class = representative.as_ref().map(rank_class);
    Ok(ConicSystem { dim: sys.dim, representative, rank_class })
}

/// Rational linear factors of a ternary form, each normalized, without
/// repetition.
pub fn linear_factors(f: &Form) -> Vec<Form> {
    if f.is_zero() || f.degree == 0 {
        return vec![];
    }
    if f.degree == 1 {
        return vec![f.normalized()];
    }
    let mut out: Vec<Form> = Vec::new();
    let mut push = |l: Form| {
        let l = l.normalized();
        if !out.contains(&l) {
            out.push(l);
        }
    };
    let p = f.to_poly3();
    let d = f.degree;
    // z divides f
    if p.terms().all(|(e, _)| e[2] >= 1) {
        push(Form::linear(q(0), q(0), q(1)));
    }
    // Points at infinity of candidate lines: roots of f(x, y, 0).
    let at_inf: Vec<([Q; 3], bool)> = {
        let g = UPoly::new((0..=d).map(|b| p.coeff(&[d - b, b, 0])).collect());
        if g.is_zero() {
            vec![]
        } else {
            let mut v: Vec<([Q; 3], bool)> =
                g.rational_roots().into_iter().map(|t| ([q(1), t, q(0)], false)).collect();
            if g.degree().unwrap() < d as usize {
                v.push(([q(0), q(1), q(0)], true));
            }
            v
        }
    };
    for (r, vertical) in at_inf {
        // Lines through r other than z = 0 meet x = 0 (or y = 0 when r is
        // the point (0:1:0)) at an affine point depending on one parameter.
        let lam = Poly3::var(0);
        let par = Poly3::var(2);
        let coords: [Poly3; 3] = if vertical {
            [&lam.scale(&r[0]) + &par, lam.scale(&r[1]), Poly3::constant(q(1))]
        } else {
            [lam.scale(&r[0]), &lam.scale(&r[1]) + &par, Poly3::constant(q(1))]
        };
        let sub = f.compose(&coords);
        let mut g = UPoly::zero();
        for k in 0..=d {
            g = g.gcd(&sub.coeff01(k, 0));
        }
        if g.is_zero() {
            continue;
        }
        for y0 in g.rational_roots() {
            // The line through r and the affine point.
            let a = PlanePoint::new(r[0].clone(), r[1].clone(), r[2].clone()).unwrap();
            let b = if vertical {
                PlanePoint::new(y0, q(0), q(1)).unwrap()
            } else {
                PlanePoint::new(q(0), y0, q(1)).unwrap()
            };
            push(line_through(&a, &b).unwrap());
        }
    }
    out
}

fn hessian_proportional(f: &Form) -> bool {
    let p = f.to_poly3();
    let h: Vec<Vec<Poly3>> = (0..3).map(|i| (0..3).map(|j| p.partial(i).partial(j)).collect()).collect();
    let det = &(&(&h[0][0] * &(&(&h[1][1] * &h[2][2]) - &(&h[1][2] * &h[2][1])))
        - &(&h[0][1] * &(&(&h[1][0] * &h[2][2]) - &(&h[1][2] * &h[2][0]))))
        + &(&h[0][2] * &(&(&h[1][0] * &h[2][1]) - &(&h[1][1] * &h[2][0])));
    if det.is_zero() {
        return true;
    }
    let (e, c) = p.terms().next().unwrap();
    let lambda = det.coeff(e) / c;
    (&det - &p.scale(&lambda)).is_zero()
}

/// Exact irreducibility over the complex numbers for forms of degree at most 3.
///
/// A rational cubic that splits over C either has a rational line
/// component or is a union of three conjugate lines; in the latter case its
/// Hessian is a multiple of the cubic, which never happens for an
/// irreducible cubic.
pub fn form_is_irreducible(f: &Form) -> Result<bool> {
    match f.degree {
        1 => Ok(!f.is_zero()),
        2 => Ok(rank_class(f) == 3),
        3 => Ok(linear_factors(f).is_empty() && !hessian_proportional(f)),
        d => Err(Error::UnsupportedCondition(format!("irreducibility test in degree {d}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// An irreducible member exists; one is exhibited.
    Yes(Form),
    /// Every member contains the given fixed curve.
    NoForcedComponent(Form),
    /// Every member is a union of lines through a point of full multiplicity.
    AllReducible,
    Empty,
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }
}

/// Conditions left on the residual curve after removing component `comp`
/// (a line or conic) that passes simply through each of its points.
fn residual_conditions(comp: &Form, conditions: &[MultCondition]) -> Vec<MultCondition> {
    let mut out = Vec::new();
    for c in conditions {
        match &c.locus {
            Locus::Proper(p) => {
                let m = if comp.vanishes_at(p) { c.multiplicity - 1 } else { c.multiplicity };
                if m > 0 {
                    out.push(MultCondition::point(p, m));
                }
            }
            Locus::InfNear { base, direction, base_multiplicity } => {
                if !comp.vanishes_at(base) {
                    out.push(c.clone());
                    continue;
                }
                let m0 = base_multiplicity.saturating_sub(1);
                let w = direction.vector(base);
                // The component passes through the infinitely near point iff
                // its own tangent at base contains w.
                let tangent = comp_tangent_contains(comp, base, &w);
                let m1 = if tangent { c.multiplicity - 1 } else { c.multiplicity };
                if m1 > 0 {
                    out.push(MultCondition {
                        locus: Locus::InfNear { base: base.clone(), direction: direction.clone(), base_multiplicity: m0 },
                        multiplicity: m1,
                    });
                } else if m0 > 0 {
                    out.push(MultCondition::point(base, m0));
                }
            }
        }
    }
    out
}

fn comp_tangent_contains(comp: &Form, base: &PlanePoint, w: &[Q; 3]) -> bool {
    // Directional derivative of comp at base along w vanishes.
    let p = comp.to_poly3();
    let g: Q = (0..3)
        .map(|i| {
            let d = Form::from_poly3(comp.degree - 1, &p.partial(i));
            d.eval(base.coords()) * &w[i]
        })
        .sum();
    g.is_zero()
}

fn random_member(sys: &PlaneLinearSystem, rng: &mut ChaCha8Rng) -> Form {
    let mut coeffs = vec![Q::zero(); num_monomials(sys.degree)];
    for b in &sys.basis {
        let c = q(rng.gen_range(-97..=97));
        for (x, y) in coeffs.iter_mut().zip(&b.coeffs) {
            *x += &c * y;
        }
    }
    Form { degree: sys.degree, coeffs }
}

fn candidate_components(d: u32, conditions: &[MultCondition]) -> Vec<Form> {
    let mut pts: Vec<PlanePoint> = Vec::new();
    for c in conditions {
        let b = c.locus.base().clone();
        if !pts.contains(&b) {
            pts.push(b);
        }
    }
    let mut cands: Vec<Form> = Vec::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let l = line_through(&pts[i], &pts[j]).unwrap();
            if !cands.contains(&l) {
                cands.push(l);
            }
        }
    }
    for c in conditions {
        if let Locus::InfNear { base, direction, .. } = &c.locus {
            let l = tangent_line(base, direction);
            if !cands.contains(&l) {
                cands.push(l);
            }
        }
    }
    if d == 3 {
        use itertools::Itertools;
        let simple: Vec<MultCondition> = conditions
            .iter()
            .map(|c| match &c.locus {
                Locus::Proper(p) => MultCondition::simple(p),
                Locus::InfNear { base, direction, .. } => MultCondition::inf_near(base, direction, 1),
            })
            .collect();
        for subset in simple.iter().cloned().combinations(5.min(simple.len())) {
            if let Ok(sys) = system_general(2, &subset) {
                if sys.dim == 0 {
                    let c = sys.representative().unwrap();
                    if rank_class(&c) == 3 && !cands.contains(&c) {
                        cands.push(c);
                    }
                }
            }
        }
    }
    cands
}

/// Decide whether the system of degree `d <= 3` curves with the given
/// conditions has an irreducible member.
pub fn irreducible_member_through(d: u32, conditions: &[MultCondition]) -> Result<Membership> {
    if d > 3 {
        return Err(Error::UnsupportedCondition(format!("irreducibility in degree {d}")));
    }
    irreducible_member_general(d, conditions)
}

pub(crate) fn irreducible_member_general(d: u32, conditions: &[MultCondition]) -> Result<Membership> {
    if d > 3 {
        return Err(Error::UnsupportedCondition(format!("irreducibility in degree {d}")));
    }
    let sys = system_general(d, conditions)?;
    if sys.dim < 0 {
        return Ok(Membership::Empty);
    }
    let rep = sys.representative().unwrap();
    if d >= 2 && conditions.iter().any(|c| matches!(c.locus, Locus::Proper(_)) && c.multiplicity >= d) {
        return Ok(Membership::AllReducible);
    }
    if d == 1 {
        return Ok(Membership::Yes(rep));
    }
    if sys.dim == 0 {
        if form_is_irreducible(&rep)? {
            return Ok(Membership::Yes(rep));
        }
        let comp = match d {
            2 => linear_factors(&rep).into_iter().next().unwrap_or(rep),
            _ => linear_factors(&rep).into_iter().next().unwrap_or(rep),
        };
        return Ok(Membership::NoForcedComponent(comp));
    }
    if form_is_irreducible(&rep)? {
        return Ok(Membership::Yes(rep));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de ^ sys.basis.len() as u64);
    for _ in 0..8 {
        let f = random_member(&sys, &mut rng);
        if !f.is_zero() && form_is_irreducible(&f)? {
            return Ok(Membership::Yes(f.normalized()));
        }
    }
    for comp in candidate_components(d, conditions) {
        if comp.degree >= d {
            continue;
        }
        let res = residual_conditions(&comp, conditions);
        let rsys = system_general(d - comp.degree, &res)?;
        if rsys.dim == sys.dim {
            return Ok(Membership::NoForcedComponent(comp));
        }
    }
    Err(Error::Internal(format!(
        "degree {d} system of dimension {} has only reducible sampled members and no fixed component",
        sys.dim
    )))
}
