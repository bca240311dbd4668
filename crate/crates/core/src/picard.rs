//! Picard-lattice arithmetic for the plane blown up at `q0, q1, ..., q_mu`.
//!
//! A class is stored in the total-transform basis `(h; e0, e1, ..., e_mu)` as
//! `a*h - m0*e0 - sum(m_i*e_i)`, so the intersection form is diagonal:
//! `D.D' = a*a' - m0*m0' - sum(m_i*m_i')`. The exceptional curve over `q_i`
//! is the class with `m_i = -1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of blown-up points besides `q0` for which the lattice is used.
pub const MAX_MU: usize = 11;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DivisorClass {
    pub a: i64,
    pub m0: i64,
    pub m: Vec<i64>,
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {}, [{}])", self.a, self.m0, ms.join(","))
    }
}

impl TryFrom<Vec<i64>> for DivisorClass {
    type Error = String;
    fn try_from(v: Vec<i64>) -> std::result::Result<Self, String> {
        if v.len() < 2 {
            return Err("a divisor class needs at least [a, m0]".into());
        }
        Ok(DivisorClass { a: v[0], m0: v[1], m: v[2..].to_vec() })
    }
}

impl From<DivisorClass> for Vec<i64> {
    fn from(d: DivisorClass) -> Vec<i64> {
        let mut v = vec![d.a, d.m0];
        v.extend(d.m);
        v
    }
}

impl DivisorClass {
    pub fn new(a: i64, m0: i64, m: Vec<i64>) -> Self {
        DivisorClass { a, m0, m }
    }

    pub fn zero(mu: usize) -> Self {
        DivisorClass { a: 0, m0: 0, m: vec![0; mu] }
    }

    pub fn mu(&self) -> usize {
        self.m.len()
    }

    /// Pullback of the line class.
    pub fn line(mu: usize) -> Self {
        DivisorClass { a: 1, m0: 0, m: vec![0; mu] }
    }

    /// Exceptional class over `q_i`; `i = 0` gives the total transform of
    /// the exceptional curve over `q0`.
    pub fn exceptional(mu: usize, i: usize) -> Self {
        let mut d = DivisorClass::zero(mu);
        if i == 0 {
            d.m0 = -1;
        } else {
            d.m[i - 1] = -1;
        }
        d
    }

    /// Fiber class `f = h - e0`.
    pub fn fiber(mu: usize) -> Self {
        DivisorClass { a: 1, m0: 1, m: vec![0; mu] }
    }

    pub fn canonical(mu: usize) -> Self {
        DivisorClass { a: -3, m0: -1, m: vec![-1; mu] }
    }

    pub fn anticanonical(mu: usize) -> Self {
        -DivisorClass::canonical(mu)
    }

    /// Proper transform of the (-1)-section of F1 through the listed
    /// (1-based) centers: `e0 - sum e_i`.
    pub fn section(mu: usize, on_section: &[usize]) -> Self {
        let mut d = DivisorClass::exceptional(mu, 0);
        for &i in on_section {
            d.m[i - 1] = 1;
        }
        d
    }

    /// Class `a*h - m0*e0 - sum over `points` of e_i` (1-based indices).
    pub fn through(mu: usize, a: i64, m0: i64, points: &[usize]) -> Self {
        let mut d = DivisorClass { a, m0, m: vec![0; mu] };
        for &i in points {
            d.m[i - 1] = 1;
        }
        d
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.mu() != other.mu() {
            return Err(Error::DimensionMismatch { left: self.mu(), right: other.mu() });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Self) -> Result<i64> {
        self.check_same(other)?;
        Ok(self.a * other.a - self.m0 * other.m0 - self.m.iter().zip(&other.m).map(|(x, y)| x * y).sum::<i64>())
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self).expect("same lattice")
    }

    /// `1 + D.(D + K)/2`.
    pub fn arithmetic_genus(&self) -> i64 {
        let k = DivisorClass::canonical(self.mu());
        let dk = self.intersect(&(self + &k)).expect("same lattice");
        assert!(dk % 2 == 0, "adjunction parity violated for {self:?}");
        1 + dk / 2
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.m0 == 0 && self.m.iter().all(|&x| x == 0)
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.clone().into()
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        assert_eq!(self.mu(), o.mu(), "lattice mismatch");
        DivisorClass {
            a: self.a + o.a,
            m0: self.m0 + o.m0,
            m: self.m.iter().zip(&o.m).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        &self + &o
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        self + &(-o.clone())
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        &self - &o
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { a: -self.a, m0: -self.m0, m: self.m.iter().map(|x| -x).collect() }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        DivisorClass { a: self * d.a, m0: self * d.m0, m: d.m.iter().map(|x| self * x).collect() }
    }
}

/// The polarization, canonical class, fiber and anticanonical class of a
/// genus-`g` conic fibration obtained from F1 by `mu` blow-ups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardClasses {
    pub l: DivisorClass,
    pub k: DivisorClass,
    pub f: DivisorClass,
    pub anti_k: DivisorClass,
}

pub fn standard_classes(g: i64, mu: usize) -> Result<StandardClasses> {
    if g < 1 {
        return Err(Error::Domain(format!("genus must be at least 1, got {g}")));
    }
    if mu > MAX_MU {
        return Err(Error::MuOutOfRange(mu));
    }
    let l = DivisorClass { a: g + 2, m0: g, m: vec![1; mu] };
    let k = DivisorClass::canonical(mu);
    let f = DivisorClass::fiber(mu);
    let anti_k = DivisorClass::anticanonical(mu);
    debug_assert!((&(&l - &anti_k) - &((g - 1) * &f)).is_zero());
    Ok(StandardClasses { l, k, f, anti_k })
}

/// Polarization `(g+2; g, 1, ..., 1)`.
pub fn polarization(g: i64, mu: usize) -> DivisorClass {
    DivisorClass { a: g + 2, m0: g, m: vec![1; mu] }
}

/// A class `a_s*s + a_f*f` on the Hirzebruch surface F_e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HirzebruchClass {
    pub e: u32,
    pub a_s: i64,
    pub a_f: i64,
}

impl HirzebruchClass {
    pub fn new(e: u32, a_s: i64, a_f: i64) -> Self {
        HirzebruchClass { e, a_s, a_f }
    }

    pub fn intersect(&self, o: &Self) -> Result<i64> {
        if self.e != o.e {
            return Err(Error::Domain(format!("classes on F_{} and F_{}", self.e, o.e)));
        }
        let e = self.e as i64;
        Ok(-e * self.a_s * o.a_s + self.a_s * o.a_f + self.a_f * o.a_s)
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self).unwrap()
    }

    pub fn canonical(e: u32) -> Self {
        HirzebruchClass { e, a_s: -2, a_f: -(e as i64) - 2 }
    }

    /// Ample, equivalently very ample: `a_s > 0` and `a_f > a_s*e`.
    pub fn is_ample(&self) -> bool {
        self.a_s > 0 && self.a_f > self.a_s * self.e as i64
    }

    pub fn arithmetic_genus(&self) -> i64 {
        let k = HirzebruchClass::canonical(self.e);
        let sum = HirzebruchClass { e: self.e, a_s: self.a_s + k.a_s, a_f: self.a_f + k.a_f };
        1 + self.intersect(&sum).unwrap() / 2
    }
}

/// Express `a_s*s + a_f*f - sum(mults_i * e_i)` on F1 blown up at `mu`
/// points in the plane basis, using `s = e0` and `f = h - e0`.
pub fn from_hirzebruch(c: &HirzebruchClass, mults: &[i64]) -> Result<DivisorClass> {
    if c.e != 1 {
        return Err(Error::UnsupportedCondition(format!(
            "F_{} has no plane model; normalize to F_1 with elementary transformations first",
            c.e
        )));
    }
    Ok(DivisorClass { a: c.a_f, m0: c.a_f - c.a_s, m: mults.to_vec() })
}

/// A class on F_e blown up at `mu` points, in the basis
/// `(s, f, e_1, ..., e_mu)` of pullbacks and exceptional curves:
/// `a_s*s + a_f*f - sum(m_i*e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeClass {
    pub a_s: i64,
    pub a_f: i64,
    pub m: Vec<i64>,
}

impl FeClass {
    pub fn new(a_s: i64, a_f: i64, m: Vec<i64>) -> Self {
        FeClass { a_s, a_f, m }
    }

    /// Intersection form on the blow-up of F_e.
    pub fn intersect(&self, o: &Self, e: u32) -> Result<i64> {
        if self.m.len() != o.m.len() {
            return Err(Error::DimensionMismatch { left: self.m.len(), right: o.m.len() });
        }
        let e = e as i64;
        Ok(-e * self.a_s * o.a_s + self.a_s * o.a_f + self.a_f * o.a_s
            - self.m.iter().zip(&o.m).map(|(x, y)| x * y).sum::<i64>())
    }

    pub fn canonical(e: u32, mu: usize) -> Self {
        FeClass { a_s: -2, a_f: -(e as i64) - 2, m: vec![-1; mu] }
    }

    /// `2s + (g+e+1)f - sum e_i`.
    pub fn polarization(e: u32, g: i64, mu: usize) -> Self {
        FeClass { a_s: 2, a_f: g + e as i64 + 1, m: vec![1; mu] }
    }

    pub fn fiber(mu: usize) -> Self {
        FeClass { a_s: 0, a_f: 1, m: vec![0; mu] }
    }

    /// Proper transform of the minimal section through the listed 0-based centers.
    pub fn section(mu: usize, on_section: &[usize]) -> Self {
        let mut m = vec![0; mu];
        for &i in on_section {
            m[i] = 1;
        }
        FeClass { a_s: 1, a_f: 0, m }
    }
}
