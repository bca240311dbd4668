//! Polynomials over the rationals.
//!
//! [`UPoly`] is a dense univariate polynomial with gcd, square-free
//! decomposition and exact real-root isolation (Sturm sequences). [`Poly3`]
//! is a sparse polynomial in three variables used for blow-up chart
//! substitutions, where the first two variables are local coordinates and
//! the third is a curve parameter.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, Q, Z};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    /// Coefficients from degree 0 upwards; no trailing zeros.
    coeffs: Vec<Q>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("{}*t", format_rational(c)),
                _ => format!("{}*t^{}", format_rational(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: Q) -> Self {
        UPoly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        UPoly::new(vec![Q::zero(), Q::one()])
    }

    /// `t - r`.
    pub fn linear_root(r: &Q) -> Self {
        UPoly::new(vec![-r.clone(), Q::one()])
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        UPoly::new(cs.iter().map(|&c| Q::from_integer(Z::from(c))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> Self {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(Z::from(i)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (UPoly::zero(), self.clone());
        }
        let lead_inv = d.lead().recip();
        let mut quo = vec![Q::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let v = &c * dc;
                    rem[k + j] -= v;
                }
            }
            quo[k] = c;
        }
        (UPoly::new(quo), UPoly::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::constant(Q::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Monic square-free part (product of the distinct irreducible factors).
    pub fn square_free(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UPoly::constant(Q::one());
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Remove every factor `t - r` from `self`, returning the multiplicity.
    pub fn deflate(&self, r: &Q) -> (UPoly, usize) {
        let lin = UPoly::linear_root(r);
        let mut p = self.clone();
        let mut mult = 0;
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            mult += 1;
        }
        (p, mult)
    }

    /// Substitute `t -> t + shift`.
    pub fn shift(&self, shift: &Q) -> UPoly {
        let mut acc = UPoly::zero();
        let base = UPoly::new(vec![shift.clone(), Q::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &base) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// Sturm sequence of a square-free polynomial.
    fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }

    fn sign_variations(seq: &[UPoly], x: &Q) -> usize {
        let signs: Vec<i8> = seq
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Cauchy bound: every root has absolute value strictly below it.
    pub fn root_bound(&self) -> Q {
        let lead = self.lead();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / &lead).abs())
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }

    /// Disjoint half-open intervals `(lo, hi]`, each containing exactly one
    /// real root of the square-free part, in increasing order.
    pub fn isolate_real_roots(&self) -> Vec<(Q, Q)> {
        let p = self.square_free();
        if p.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let seq = p.sturm_sequence();
        let b = p.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_variations(&seq, &lo) - Self::sign_variations(&seq, &hi);
            match n {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / Q::from_integer(Z::from(2));
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Shrink an isolating interval `(lo, hi]` until its width is at most `w`.
    pub fn refine_root(&self, lo: &Q, hi: &Q, w: &Q) -> (Q, Q) {
        let p = self.square_free();
        let seq = p.sturm_sequence();
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        while &(&hi - &lo) > w {
            if p.eval(&hi).is_zero() {
                return (hi.clone(), hi);
            }
            let mid = (&lo + &hi) / Q::from_integer(Z::from(2));
            let left = Self::sign_variations(&seq, &lo) - Self::sign_variations(&seq, &mid);
            if left == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }

    /// All rational roots, in increasing order, without multiplicity.
    ///
    /// A rational root `r` of a primitive integer polynomial with leading
    /// coefficient `a` satisfies `a*r ∈ Z`, so each isolating interval is
    /// refined until `a*(hi - lo) < 1` and the single integer candidate is
    /// tested exactly.
    pub fn rational_roots(&self) -> Vec<Q> {
        let p = self.square_free();
        if p.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let ints = crate::arith::primitive_integer_row(p.coeffs());
        let a = Q::from_integer(ints.last().unwrap().abs());
        let width = (Q::from_integer(Z::from(2)) * &a).recip();
        let mut roots = Vec::new();
        for (lo, hi) in p.isolate_real_roots() {
            let (lo, hi) = p.refine_root(&lo, &hi, &width);
            if p.eval(&hi).is_zero() {
                roots.push(hi);
                continue;
            }
            let y = (&a * &hi).floor();
            for cand in [y.clone(), y + Q::one()] {
                let r = &cand / &a;
                if r > lo && r <= hi && p.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = vec![Q::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            v[i] += c;
        }
        UPoly::new(v)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        self + &(-o)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }
}

/// Exponent vector for [`Poly3`].
pub type Exp3 = [u32; 3];

/// Sparse polynomial in three variables `(x0, x1, x2)`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Poly3 {
    terms: BTreeMap<Exp3, Q>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Poly3::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly3::zero();
        if !c.is_zero() {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Poly3::monomial(e, Q::one())
    }

    pub fn monomial(e: Exp3, c: Q) -> Self {
        let mut p = Poly3::zero();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Embed a univariate polynomial as a polynomial in variable `i`.
    pub fn from_upoly(u: &UPoly, i: usize) -> Self {
        let mut p = Poly3::zero();
        for (k, c) in u.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = [0; 3];
                e[i] = k as u32;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp3, &Q)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly3::zero();
        }
        Poly3 { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly3::constant(Q::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Divide by `x_var^k`; `None` if some term has lower degree in `x_var`.
    pub fn div_var_pow(&self, var: usize, k: u32) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] < k {
                return None;
            }
            let mut e2 = *e;
            e2[var] -= k;
            out.insert(e2, c.clone());
        }
        Some(Poly3 { terms: out })
    }

    /// Replace `x0` and `x1` by the given polynomials, keeping `x2`.
    pub fn subst01(&self, p0: &Poly3, p1: &Poly3) -> Self {
        let max0 = self.terms.keys().map(|e| e[0]).max().unwrap_or(0);
        let max1 = self.terms.keys().map(|e| e[1]).max().unwrap_or(0);
        let pow0: Vec<Poly3> = std::iter::successors(Some(Poly3::constant(Q::one())), |p| Some(p * p0))
            .take(max0 as usize + 1)
            .collect();
        let pow1: Vec<Poly3> = std::iter::successors(Some(Poly3::constant(Q::one())), |p| Some(p * p1))
            .take(max1 as usize + 1)
            .collect();
        let mut acc = Poly3::zero();
        for (e, c) in &self.terms {
            let t = &(&pow0[e[0] as usize] * &pow1[e[1] as usize]) * &Poly3::monomial([0, 0, e[2]], c.clone());
            acc = &acc + &t;
        }
        acc
    }

    /// Coefficient of `x0^a x1^b` as a polynomial in `x2`.
    pub fn coeff01(&self, a: u32, b: u32) -> UPoly {
        let deg = self
            .terms
            .keys()
            .filter(|e| e[0] == a && e[1] == b)
            .map(|e| e[2])
            .max();
        let Some(deg) = deg else {
            return UPoly::zero();
        };
        let mut v = vec![Q::zero(); deg as usize + 1];
        for (e, c) in &self.terms {
            if e[0] == a && e[1] == b {
                v[e[2] as usize] = c.clone();
            }
        }
        UPoly::new(v)
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = *e;
                e2[var] -= 1;
                out.insert(e2, c * Q::from_integer(Z::from(e[var])));
            }
        }
        Poly3 { terms: out }
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn coeff(&self, e: &Exp3) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    /// Substitute a value for `x2`.
    pub fn eval2(&self, t: &Q) -> Self {
        let mut acc: BTreeMap<Exp3, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = c * num_traits::pow(t.clone(), e[2] as usize);
            let k = [e[0], e[1], 0];
            let entry = acc.entry(k).or_insert_with(Q::zero);
            *entry += v;
        }
        acc.retain(|_, c| !c.is_zero());
        Poly3 { terms: acc }
    }
}

impl Add for &Poly3 {
    type Output = Poly3;
    fn add(self, o: &Poly3) -> Poly3 {
        let mut t = self.terms.clone();
        for (e, c) in &o.terms {
            let entry = t.entry(*e).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                t.remove(e);
            }
        }
        Poly3 { terms: t }
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;
    fn sub(self, o: &Poly3) -> Poly3 {
        self + &o.scale(&-Q::one())
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;
    fn mul(self, o: &Poly3) -> Poly3 {
        let mut t: BTreeMap<Exp3, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let entry = t.entry(e).or_insert_with(Q::zero);
                *entry += c1 * c2;
            }
        }
        t.retain(|_, c| !c.is_zero());
        Poly3 { terms: t }
    }
}
