//! Exact dense linear algebra.
//!
//! Two independent elimination routes are provided for rank: fraction-free
//! Bareiss elimination over an integral domain (integers after clearing
//! denominators, or univariate polynomials), and classical Gauss-Jordan
//! elimination over the rationals. Kernels and representatives come from the
//! rational route.

use num_traits::{One, Signed, Zero};

use crate::arith::{primitive_integer_row, Q, Z};
use crate::poly::UPoly;

/// Integral domain with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other`, which the caller guarantees to be exact.
    fn exact_div(&self, other: &Self) -> Self;
}

impl ExactRing for Z {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)), "inexact Bareiss division");
        self / other
    }
}

impl ExactRing for UPoly {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn one() -> Self {
        UPoly::constant(Q::one())
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        let (quo, rem) = self.div_rem(other);
        debug_assert!(rem.is_zero(), "inexact Bareiss division");
        quo
    }
}

/// In-place Bareiss forward elimination; returns the rank and the number of
/// row swaps performed.
fn bareiss<R: ExactRing>(m: &mut [Vec<R>]) -> (usize, usize) {
    let nrows = m.len();
    if nrows == 0 {
        return (0, 0);
    }
    let ncols = m[0].len();
    let mut prev = R::one();
    let mut r = 0;
    let mut swaps = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        for i in (r + 1)..nrows {
            for j in (c + 1)..ncols {
                let v = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = v.exact_div(&prev);
            }
            m[i][c] = R::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    (r, swaps)
}

/// Rank over the fraction field of `R` by fraction-free elimination.
pub fn rank_bareiss<R: ExactRing>(rows: &[Vec<R>]) -> usize {
    let mut m = rows.to_vec();
    bareiss(&mut m).0
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn det_bareiss<R: ExactRing>(rows: &[Vec<R>]) -> R {
    let n = rows.len();
    if n == 0 {
        return R::one();
    }
    let mut m = rows.to_vec();
    // Bareiss: the last pivot is the determinant when the matrix is full rank.
    let (rank, swaps) = bareiss(&mut m);
    if rank < n {
        return R::zero();
    }
    let d = m[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

/// Rank of a rational matrix: rows are cleared to primitive integer rows and
/// reduced fraction-free.
pub fn rank_fraction_free(rows: &[Vec<Q>]) -> usize {
    let ints: Vec<Vec<Z>> = rows.iter().map(|r| primitive_integer_row(r)).collect();
    rank_bareiss(&ints)
}

/// Reduced row echelon form over the rationals. Returns the nonzero rows and
/// their pivot columns.
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return (vec![], vec![]);
    }
    let ncols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Pick the pivot of largest absolute value among candidates; any
        // nonzero choice is exact, this only keeps entries small.
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()).then(b.cmp(&a)))
        else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank by Gauss-Jordan elimination over the rationals.
pub fn rank_rational(rows: &[Vec<Q>]) -> usize {
    rref(rows).1.len()
}

/// A basis of the right kernel `{v : M v = 0}`, itself in reduced echelon
/// form so that the first vector has the smallest leading index.
pub fn kernel_basis(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[f] = Q::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[f].clone();
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return basis;
    }
    rref(&basis).0
}

/// Rational determinant via Gauss-Jordan.
pub fn det_rational(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for i in (c + 1)..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    det
}

/// Rank of a matrix with univariate polynomial entries, over the field of
/// rational functions.
pub fn poly_rank(rows: &[Vec<UPoly>]) -> usize {
    rank_bareiss(rows)
}

/// All `k x k` minors of a polynomial matrix.
pub fn poly_minors(rows: &[Vec<UPoly>], k: usize) -> Vec<UPoly> {
    use itertools::Itertools;
    let nrows = rows.len();
    if nrows == 0 || k == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut out = Vec::new();
    for rs in (0..nrows).combinations(k) {
        for cs in (0..ncols).combinations(k) {
            let sub: Vec<Vec<UPoly>> =
                rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            out.push(det_bareiss(&sub));
        }
    }
    out
}
