//! Second fundamental form of the embedding given by `|L|`.
//!
//! Sections of `L` are plane quartics with a double point at `q0` through
//! the configuration. At a surface point we pull the sections back to a
//! local chart, divide by the equations of the exceptional curves through
//! the point and read off the 2-jets; the rank of that `(N+1) x 6` matrix is
//! the rank of the osculating map `j_x`. The inflectional locus is where it
//! falls below its generic value.
//!
//! Along a line the jets are polynomial in a parameter `tau`, so the generic
//! rank and the parameters where it drops are found symbolically, with the
//! points where the plane model is not a chart of the surface treated one by
//! one.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, q, Q};
use crate::config::{PointConfig, PointSpec};
use crate::error::{Error, Result};
use crate::linalg::{poly_minors, poly_rank, rank_fraction_free};
use crate::lines::{LineKind, LineRecord};
use crate::plane::{system_general, Direction, Form, MultCondition, PlanePoint};
use crate::poly::{Poly3, UPoly};
use crate::positivity::{check_very_ample, Verdict};

/// Monomials `x0^a x1^b` of a 2-jet, in the order used for jet rows.
const JET: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];

/// A point of the blown-up surface.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfacePoint {
    /// A plane point other than `q0` and the configuration points.
    Plane { point: PlanePoint },
    /// A point on the exceptional curve over `q0` (`center = 0`) or over a
    /// configuration point (1-based). Over a point of the section the
    /// direction lives in the chart `(alpha, beta)` of the first blow-up,
    /// where `a + b*i = alpha*(v + beta*n)`.
    Exceptional { center: usize, direction: Direction },
}

impl fmt::Debug for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfacePoint::Plane { point } => write!(f, "{point:?}"),
            SurfacePoint::Exceptional { center, direction } => write!(f, "E{center}{direction:?}"),
        }
    }
}

impl SurfacePoint {
    pub fn plane(p: PlanePoint) -> Self {
        SurfacePoint::Plane { point: p }
    }

    pub fn exceptional(center: usize, direction: Direction) -> Self {
        SurfacePoint::Exceptional { center, direction }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetRank {
    pub point: SurfacePoint,
    pub rank: usize,
    /// Projective dimension of the sections vanishing to order three at the
    /// point, `N - rank`.
    pub osc_system_dim: i64,
    pub generic_rank: usize,
    pub is_inflection: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericRank {
    pub rank: usize,
    /// True when the rank reached its upper bound `min(N+1, 6)`.
    pub certified: bool,
    pub samples: usize,
}

/// Truncated power series in `eps` around a parameter value.
#[derive(Clone, Debug)]
struct Series(Vec<Q>);

const PREC: usize = 24;

impl Series {
    fn at(p: &UPoly, t0: &Q) -> Series {
        let mut c: Vec<Q> = p.shift(t0).coeffs().to_vec();
        c.resize(PREC, Q::zero());
        c.truncate(PREC);
        Series(c)
    }

    fn constant(c: Q, len: usize) -> Series {
        let mut v = vec![Q::zero(); len];
        v[0] = c;
        Series(v)
    }

    fn val(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    fn sub(&self, o: &Series) -> Series {
        let n = self.0.len().min(o.0.len());
        Series((0..n).map(|i| &self.0[i] - &o.0[i]).collect())
    }

    fn scale(&self, c: &Q) -> Series {
        Series(self.0.iter().map(|x| x * c).collect())
    }

    /// `self / o`, valid when `val(self) >= val(o)`; loses `val(o)` terms.
    fn div(&self, o: &Series) -> Result<Series> {
        let k = o.val().ok_or_else(|| Error::Internal("division by a zero series".into()))?;
        if self.val().is_some_and(|v| v < k) {
            return Err(Error::Internal("series quotient has a pole".into()));
        }
        let a = &self.0[k.min(self.0.len())..];
        let b = &o.0[k..];
        let n = a.len().min(b.len());
        let mut out: Vec<Q> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = a[i].clone();
            for j in 0..i {
                s -= &out[j] * &b[i - j];
            }
            out.push(s / &b[0]);
        }
        Ok(Series(out))
    }
}

/// Lowest-order direction of a pair of series vanishing at the origin.
fn series_direction(a: &Series, b: &Series) -> Result<Direction> {
    let (va, vb) = (a.val(), b.val());
    match (va, vb) {
        (None, None) => Err(Error::Internal("branch does not move: raise the series precision".into())),
        (Some(0), _) | (_, Some(0)) => Err(Error::Internal("branch does not pass through the center".into())),
        (Some(x), None) => Direction::new(a.0[x].clone(), Q::zero()),
        (None, Some(y)) => Direction::new(Q::zero(), b.0[y].clone()),
        (Some(x), Some(y)) if x < y => Direction::new(a.0[x].clone(), Q::zero()),
        (Some(x), Some(y)) if y < x => Direction::new(Q::zero(), b.0[y].clone()),
        (Some(x), Some(_)) => Direction::new(a.0[x].clone(), b.0[x].clone()),
    }
}

fn cpoly(c: &Q) -> Poly3 {
    Poly3::constant(c.clone())
}

fn qvec_poly(v: &[Q; 3]) -> [Poly3; 3] {
    std::array::from_fn(|c| cpoly(&v[c]))
}

/// A homogeneous vector `u*e_i + w*e_j` in the chart of `base`.
fn chart_vector(base: &PlanePoint, u: &Poly3, w: &Poly3) -> [Poly3; 3] {
    let (_, i, j) = base.chart();
    let mut out = [Poly3::zero(), Poly3::zero(), Poly3::zero()];
    out[i] = u.clone();
    out[j] = w.clone();
    out
}

fn add3(a: &[Poly3; 3], b: &[Poly3; 3]) -> [Poly3; 3] {
    std::array::from_fn(|c| &a[c] + &b[c])
}

fn mul3(s: &Poly3, a: &[Poly3; 3]) -> [Poly3; 3] {
    std::array::from_fn(|c| s * &a[c])
}

/// A local chart of the surface: homogeneous plane coordinates as
/// polynomials in the chart variables `x0, x1` (and the line parameter `x2`),
/// and the monomial `x0^a x1^b` cut out by the exceptional curves.
struct Chart {
    coords: [Poly3; 3],
    divide: (u32, u32),
}

/// One blow-up at `base`: `point = base + x0*(d + x1*n)`.
fn one_step(base: &PlanePoint, d: &[Poly3; 3], n: &[Poly3; 3], m: u32) -> Chart {
    let x0 = Poly3::var(0);
    let x1 = Poly3::var(1);
    let step = add3(d, &mul3(&x1, n));
    Chart { coords: add3(&qvec_poly(base.coords()), &mul3(&x0, &step)), divide: (m, 0) }
}

/// Two blow-ups: `q0 + alpha*(v + beta*n)` with
/// `(alpha, beta) = x0*(d1 + x1*n1)`.
fn two_step(q0: &PlanePoint, v: &Direction, d1: [Poly3; 2], n1: [Poly3; 2], alpha_vanishes: bool) -> Chart {
    let x0 = Poly3::var(0);
    let x1 = Poly3::var(1);
    let alpha = &x0 * &(&d1[0] + &(&x1 * &n1[0]));
    let beta = &x0 * &(&d1[1] + &(&x1 * &n1[1]));
    let vv = qvec_poly(&v.vector(q0));
    let nv = qvec_poly(&v.complement(q0));
    let step = add3(&vv, &mul3(&beta, &nv));
    Chart {
        coords: add3(&qvec_poly(q0.coords()), &mul3(&alpha, &step)),
        divide: (3, if alpha_vanishes { 2 } else { 0 }),
    }
}

/// How a line of the surface is parametrized by `tau`.
#[derive(Clone, Debug)]
enum LineModel {
    /// Image in the plane, `tau -> P(tau)`.
    Plane([UPoly; 3]),
    /// Exceptional curve over `q0` or a proper point: direction `(1:tau)`.
    OneStep(usize),
    /// Exceptional curve over the point of the section: direction `(1:tau)`
    /// in the `(alpha, beta)` chart.
    TwoStep,
}

/// Precomputed sections of `L` for a very ample configuration.
pub struct Osculator<'a> {
    cfg: &'a PointConfig,
    basis: Vec<Form>,
    hessians: Vec<[[Poly3; 3]; 3]>,
    generic: Option<GenericRank>,
}

impl<'a> Osculator<'a> {
    pub fn new(cfg: &'a PointConfig) -> Result<Self> {
        let cert = check_very_ample(cfg)?;
        if cert.verdict != Verdict::VeryAmple {
            return Err(Error::Precondition(format!("L is not very ample ({})", cert.condition)));
        }
        if cfg.minimal_e.is_some() {
            return Err(Error::Domain("jets are computed in the plane model only".into()));
        }
        let all: Vec<usize> = (1..=cfg.mu()).collect();
        let sys = system_general(4, &cfg.conditions(&all, 2))?;
        let basis = sys.basis;
        let hessians = basis
            .iter()
            .map(|f| {
                let p = f.to_poly3();
                std::array::from_fn(|a| std::array::from_fn(|b| p.partial(a).partial(b)))
            })
            .collect();
        Ok(Osculator { cfg, basis, hessians, generic: None })
    }

    /// `N = h^0(L) - 1`.
    pub fn n(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn basis(&self) -> &[Form] {
        &self.basis
    }

    fn rank_bound(&self) -> usize {
        self.basis.len().min(6)
    }

    fn chart_rows(&self, chart: &Chart) -> Result<Vec<Vec<UPoly>>> {
        self.basis
            .iter()
            .map(|f| {
                let p = f.compose(&chart.coords);
                let p = p
                    .div_var_pow(0, chart.divide.0)
                    .and_then(|p| p.div_var_pow(1, chart.divide.1))
                    .ok_or_else(|| Error::Internal("a section does not vanish on an exceptional curve".into()))?;
                Ok(JET.iter().map(|&(a, b)| p.coeff01(a, b)).collect())
            })
            .collect()
    }

    fn constant_rank(rows: &[Vec<UPoly>]) -> usize {
        let m: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|p| p.coeffs().first().cloned().unwrap_or_else(Q::zero)).collect())
            .collect();
        rank_fraction_free(&m)
    }

    fn on_section(&self) -> Option<(usize, Direction)> {
        self.cfg.on_section().map(|(i, d)| (i, d.clone()))
    }

    /// Charts centered at a surface point; the second one is used as a
    /// consistency check.
    fn point_charts(&self, x: &SurfacePoint) -> Result<Vec<Chart>> {
        let q0 = &self.cfg.q0;
        match x {
            SurfacePoint::Plane { point } => {
                if point == q0 {
                    return Err(Error::InvalidPoint("q0 is blown up; name a point of its exceptional curve".into()));
                }
                if let Some((i, _)) = self.cfg.proper_points().into_iter().find(|(_, p)| *p == point) {
                    return Err(Error::InvalidPoint(format!("point {i} is blown up")));
                }
                let u = Poly3::var(0);
                let w = Poly3::var(1);
                let c = add3(&qvec_poly(point.coords()), &chart_vector(point, &u, &w));
                let c2 = add3(&qvec_poly(point.coords()), &chart_vector(point, &(&u + &w), &w));
                Ok(vec![Chart { coords: c, divide: (0, 0) }, Chart { coords: c2, divide: (0, 0) }])
            }
            SurfacePoint::Exceptional { center, direction } => {
                let mu = self.cfg.mu();
                if *center > mu {
                    return Err(Error::InvalidPoint(format!("no configuration point {center}")));
                }
                let (base, m) = if *center == 0 {
                    if let Some((s, v)) = self.on_section() {
                        if *direction == v {
                            return Err(Error::InvalidPoint(format!(
                                "direction {direction:?} at q0 is blown up as point {s}"
                            )));
                        }
                    }
                    (q0.clone(), 2)
                } else {
                    match self.cfg.point(*center) {
                        PointSpec::Proper(p) => (p.clone(), 1),
                        PointSpec::OnSection(v) => {
                            let d1 = [cpoly(&direction.u), cpoly(&direction.v)];
                            let n1 = if direction.u.is_zero() {
                                [Poly3::constant(Q::one()), Poly3::zero()]
                            } else {
                                [Poly3::zero(), Poly3::constant(Q::one())]
                            };
                            let n2 = [&n1[0] + &d1[0], &n1[1] + &d1[1]];
                            let z = direction.u.is_zero();
                            return Ok(vec![
                                two_step(q0, v, d1.clone(), n1, z),
                                two_step(q0, v, d1, n2, z),
                            ]);
                        }
                    }
                };
                let d = qvec_poly(&direction.vector(&base));
                let n = qvec_poly(&direction.complement(&base));
                let n2 = add3(&n, &d);
                Ok(vec![one_step(&base, &d, &n, m), one_step(&base, &d, &n2, m)])
            }
        }
    }

    /// Rank of the osculating map at a surface point.
    pub fn rank_at(&self, x: &SurfacePoint) -> Result<usize> {
        let charts = self.point_charts(x)?;
        let ranks: Vec<usize> = charts
            .iter()
            .map(|c| self.chart_rows(c).map(|r| Self::constant_rank(&r)))
            .collect::<Result<_>>()?;
        if ranks.iter().any(|&r| r != ranks[0]) {
            return Err(Error::Internal(format!("charts at {x:?} disagree on the jet rank: {ranks:?}")));
        }
        if let SurfacePoint::Plane { point } = x {
            let dim = self.triple_point_dim(point)?;
            if dim != self.n() as i64 - ranks[0] as i64 {
                return Err(Error::Internal(format!(
                    "jet rank {} at {x:?} disagrees with a triple-point system of dimension {dim}",
                    ranks[0]
                )));
            }
        }
        Ok(ranks[0])
    }

    /// Dimension of the sections with a triple point at a plane point.
    pub fn triple_point_dim(&self, p: &PlanePoint) -> Result<i64> {
        let all: Vec<usize> = (1..=self.cfg.mu()).collect();
        let mut conds = self.cfg.conditions(&all, 2);
        conds.push(MultCondition::point(p, 3));
        Ok(system_general(4, &conds)?.dim)
    }

    /// Generic rank of the osculating map, from seeded random plane points.
    pub fn generic_rank(&mut self, seed: u64) -> Result<GenericRank> {
        if let Some(g) = self.generic {
            return Ok(g);
        }
        let bound = self.rank_bound();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0;
        let mut samples = 0;
        while samples < 24 && best < bound {
            let p = PlanePoint::from_i64(rng.gen_range(-40..=40), rng.gen_range(-40..=40), rng.gen_range(1..=7));
            if self.point_charts(&SurfacePoint::plane(p.clone())).is_err() {
                continue;
            }
            samples += 1;
            best = best.max(self.rank_at(&SurfacePoint::plane(p))?);
        }
        let g = GenericRank { rank: best, certified: best == bound, samples };
        self.generic = Some(g);
        Ok(g)
    }

    pub fn jet_rank(&mut self, x: &SurfacePoint) -> Result<JetRank> {
        let rank = self.rank_at(x)?;
        let generic = self.generic_rank(0)?.rank;
        Ok(JetRank {
            point: x.clone(),
            rank,
            osc_system_dim: self.n() as i64 - rank as i64,
            generic_rank: generic,
            is_inflection: rank < generic,
        })
    }

    fn line_rows(&self, model: &LineModel) -> Result<Vec<Vec<UPoly>>> {
        let tau = Poly3::var(2);
        let one = Poly3::constant(Q::one());
        match model {
            LineModel::Plane(p) => {
                let coords: [Poly3; 3] = std::array::from_fn(|c| Poly3::from_upoly(&p[c], 2));
                Ok(self
                    .hessians
                    .iter()
                    .map(|h| {
                        [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
                            .iter()
                            .map(|&(a, b)| Form::from_poly3(2, &h[a][b]).compose(&coords).coeff01(0, 0))
                            .collect()
                    })
                    .collect())
            }
            LineModel::OneStep(center) => {
                let (base, m) = if *center == 0 {
                    (self.cfg.q0.clone(), 2)
                } else {
                    match self.cfg.point(*center) {
                        PointSpec::Proper(p) => (p.clone(), 1),
                        PointSpec::OnSection(_) => return Err(Error::Internal("one-step chart on the section".into())),
                    }
                };
                let d = chart_vector(&base, &one, &tau);
                let n = chart_vector(&base, &Poly3::zero(), &one);
                self.chart_rows(&one_step(&base, &d, &n, m))
            }
            LineModel::TwoStep => {
                let (_, v) = self.on_section().ok_or_else(|| Error::Internal("no point on the section".into()))?;
                self.chart_rows(&two_step(&self.cfg.q0, &v, [one.clone(), tau], [Poly3::zero(), one], false))
            }
        }
    }

    /// The surface point at a finite parameter, or at infinity for `None`.
    fn point_at(&self, model: &LineModel, t: Option<&Q>) -> Result<SurfacePoint> {
        match model {
            LineModel::Plane(p) => match t {
                Some(t0) => self.identify(p, t0),
                None => {
                    let deg = p.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
                    let rev: [UPoly; 3] = std::array::from_fn(|c| {
                        let mut v = p[c].coeffs().to_vec();
                        v.resize(deg + 1, Q::zero());
                        v.reverse();
                        UPoly::new(v)
                    });
                    self.identify(&rev, &Q::zero())
                }
            },
            LineModel::OneStep(center) => {
                let dir = match t {
                    Some(t0) => Direction::new(Q::one(), t0.clone())?,
                    None => Direction::from_i64(0, 1),
                };
                if *center == 0 {
                    if let Some((s, v)) = self.on_section() {
                        if dir == v {
                            // the proper transform of the exceptional curve
                            // over q0 meets the next one along alpha = 0
                            return Ok(SurfacePoint::exceptional(s, Direction::from_i64(0, 1)));
                        }
                    }
                }
                Ok(SurfacePoint::exceptional(*center, dir))
            }
            LineModel::TwoStep => {
                let (s, _) = self.on_section().unwrap();
                let dir = match t {
                    Some(t0) => Direction::new(Q::one(), t0.clone())?,
                    None => Direction::from_i64(0, 1),
                };
                Ok(SurfacePoint::exceptional(s, dir))
            }
        }
    }

    /// The surface point over `P(t0)`, following the branch through the
    /// blow-ups when `P(t0)` is a base point.
    fn identify(&self, p: &[UPoly; 3], t0: &Q) -> Result<SurfacePoint> {
        let val: Vec<Q> = p.iter().map(|c| c.eval(t0)).collect();
        let pt = PlanePoint::new(val[0].clone(), val[1].clone(), val[2].clone())?;
        let q0 = &self.cfg.q0;
        let center = if &pt == q0 {
            0
        } else if let Some((i, _)) = self.cfg.proper_points().into_iter().find(|(_, b)| **b == pt) {
            i
        } else {
            return Ok(SurfacePoint::plane(pt));
        };
        let base = if center == 0 { q0.clone() } else { pt };
        let (k, i, j) = base.chart();
        let s: Vec<Series> = p.iter().map(|c| Series::at(c, t0)).collect();
        let len = s[k].0.len();
        let a = s[i].div(&s[k])?.sub(&Series::constant(base.coords()[i].clone(), len));
        let b = s[j].div(&s[k])?.sub(&Series::constant(base.coords()[j].clone(), len));
        let d = series_direction(&a, &b)?;
        if center != 0 {
            return Ok(SurfacePoint::exceptional(center, d));
        }
        match self.on_section() {
            Some((sidx, v)) if d == v => {
                let (alpha, beta) = if !v.u.is_zero() {
                    let alpha = a.scale(&v.u.recip());
                    let rest = b.sub(&alpha.scale(&v.v));
                    (alpha.clone(), rest.div(&alpha)?)
                } else {
                    let alpha = b.clone();
                    (alpha.clone(), a.div(&alpha)?)
                };
                let n = alpha.0.len().min(beta.0.len());
                let alpha = Series(alpha.0[..n].to_vec());
                let beta = Series(beta.0[..n].to_vec());
                Ok(SurfacePoint::exceptional(sidx, series_direction(&alpha, &beta)?))
            }
            _ => Ok(SurfacePoint::exceptional(0, d)),
        }
    }

    /// Finite parameters where the line's plane model is not a chart.
    fn special_parameters(&self, model: &LineModel) -> Result<Vec<Q>> {
        match model {
            LineModel::Plane(p) => {
                let mut bases = vec![self.cfg.q0.clone()];
                bases.extend(self.cfg.proper_points().into_iter().map(|(_, b)| b.clone()));
                let mut out = Vec::new();
                for b in &bases {
                    let c: Vec<UPoly> = (0..3).map(|r| UPoly::constant(b.coords()[r].clone())).collect();
                    let cross = [
                        &(&p[1] * &c[2]) - &(&p[2] * &c[1]),
                        &(&p[2] * &c[0]) - &(&p[0] * &c[2]),
                        &(&p[0] * &c[1]) - &(&p[1] * &c[0]),
                    ];
                    let g = cross.iter().fold(UPoly::zero(), |acc, x| acc.gcd(x));
                    if g.is_zero() {
                        return Err(Error::Internal("a line is constant at a base point".into()));
                    }
                    let mut rest = g.square_free();
                    for r in g.rational_roots() {
                        rest = rest.deflate(&r).0;
                        out.push(r);
                    }
                    if rest.degree().unwrap_or(0) > 0 {
                        return Err(Error::Internal(format!(
                            "the line meets {b:?} at irrational parameters"
                        )));
                    }
                }
                out.sort();
                out.dedup();
                Ok(out)
            }
            LineModel::OneStep(0) => match self.on_section() {
                Some((_, v)) if !v.u.is_zero() => Ok(vec![&v.v / &v.u]),
                _ => Ok(vec![]),
            },
            _ => Ok(vec![]),
        }
    }

    fn analyze(&mut self, id: &str, model: LineModel, seed: u64) -> Result<InflectionReport> {
        let generic = self.generic_rank(seed)?;
        let rows = self.line_rows(&model)?;
        let line_rank = poly_rank(&rows);
        let mut drops = Vec::new();
        let mut gcd = UPoly::zero();
        for m in poly_minors(&rows, line_rank) {
            gcd = gcd.gcd(&m);
        }
        let mut rest = if gcd.is_zero() { UPoly::constant(Q::one()) } else { gcd.square_free() };
        let push_if_drop = |this: &Self, t: Option<Q>, drops: &mut Vec<DropParameter>| -> Result<()> {
            let point = this.point_at(&model, t.as_ref())?;
            let rank = this.rank_at(&point)?;
            if rank < line_rank {
                drops.push(DropParameter {
                    parameter: match t {
                        Some(t) => ParamValue::Rational { value: t },
                        None => ParamValue::Infinity,
                    },
                    point: Some(point),
                    rank,
                });
            }
            Ok(())
        };
        for t in self.special_parameters(&model)? {
            rest = rest.deflate(&t).0;
            push_if_drop(self, Some(t), &mut drops)?;
        }
        for t in rest.rational_roots() {
            rest = rest.deflate(&t).0;
            let before = drops.len();
            push_if_drop(self, Some(t.clone()), &mut drops)?;
            if drops.len() == before {
                return Err(Error::Internal(format!(
                    "minors vanish at {} but the jet rank does not drop there",
                    format_rational(&t)
                )));
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            drops.push(DropParameter {
                parameter: ParamValue::Algebraic {
                    factor: rest.coeffs().to_vec(),
                    real_roots: rest
                        .isolate_real_roots()
                        .into_iter()
                        .map(|(lo, hi)| Interval { lo, hi })
                        .collect(),
                },
                point: None,
                rank: line_rank - 1,
            });
        }
        push_if_drop(self, None, &mut drops)?;
        drops.sort_by(|a, b| a.parameter.sort_key().cmp(&b.parameter.sort_key()));
        Ok(InflectionReport {
            line_id: id.to_string(),
            n: self.n(),
            generic_rank: generic.rank,
            line_rank,
            contained: line_rank < generic.rank,
            imported: false,
            drops,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::arith::serde_q")]
    pub lo: Q,
    #[serde(with = "crate::arith::serde_q")]
    pub hi: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamValue {
    Rational {
        #[serde(with = "crate::arith::serde_q")]
        value: Q,
    },
    Infinity,
    /// Roots of an irreducible-over-Q factor without rational roots; the
    /// real ones are isolated in `(lo, hi]`.
    Algebraic {
        #[serde(with = "crate::arith::serde_qvec")]
        factor: Vec<Q>,
        real_roots: Vec<Interval>,
    },
}

impl ParamValue {
    fn sort_key(&self) -> (u8, Q) {
        match self {
            ParamValue::Rational { value } => (0, value.clone()),
            ParamValue::Infinity => (1, Q::zero()),
            ParamValue::Algebraic { .. } => (2, Q::zero()),
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            ParamValue::Rational { value } => Some(value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropParameter {
    pub parameter: ParamValue,
    pub point: Option<SurfacePoint>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflectionReport {
    pub line_id: String,
    pub n: usize,
    pub generic_rank: usize,
    /// Rank of the osculating map at a general point of the line.
    pub line_rank: usize,
    /// Whether the line lies in the inflectional locus.
    pub contained: bool,
    /// True when the answer comes from the dimension count `N >= 5` rather
    /// than a computation.
    pub imported: bool,
    pub drops: Vec<DropParameter>,
}

/// Rank of the osculating map at a point.
pub fn jet_rank(cfg: &PointConfig, x: &SurfacePoint) -> Result<JetRank> {
    Osculator::new(cfg)?.jet_rank(x)
}

pub fn generic_jet_rank(cfg: &PointConfig, seed: u64) -> Result<GenericRank> {
    Osculator::new(cfg)?.generic_rank(seed)
}

/// `tau -> C3(w) q0 - C2(w) w` for `w = e_i + tau e_j`, where
/// `F(q0 + lambda w) = lambda^m C_m(w) + lambda^(m+1) C_(m+1)(w)`: the
/// rational parametrization of a curve with a point of multiplicity `m` at
/// `q0` and degree `m + 1`.
fn pencil_parametrization(f: &Form, q0: &PlanePoint, m: u32) -> Result<[UPoly; 3]> {
    let (_, i, j) = q0.chart();
    let lam = Poly3::var(0);
    let w = chart_vector(q0, &Poly3::constant(Q::one()), &Poly3::var(2));
    let coords = add3(&qvec_poly(q0.coords()), &mul3(&lam, &w));
    let g = f.compose(&coords);
    let cm = g.coeff01(m, 0);
    let cm1 = g.coeff01(m + 1, 0);
    if cm1.is_zero() {
        return Err(Error::Internal("curve is not of the expected degree along lines through q0".into()));
    }
    let wv: [UPoly; 3] = std::array::from_fn(|c| {
        if c == i {
            UPoly::constant(Q::one())
        } else if c == j {
            UPoly::t()
        } else {
            UPoly::zero()
        }
    });
    let p: [UPoly; 3] =
        std::array::from_fn(|c| &cm1.scale(&q0.coords()[c]) - &(&cm * &wv[c]));
    Ok(reduce(p))
}

/// Remove the common factor of the coordinates.
fn reduce(p: [UPoly; 3]) -> [UPoly; 3] {
    let g = p.iter().fold(UPoly::zero(), |acc, x| acc.gcd(x));
    if g.degree().unwrap_or(0) == 0 {
        return p;
    }
    std::array::from_fn(|c| p[c].div_rem(&g).0)
}

fn line_model(cfg: &PointConfig, rec: &LineRecord) -> Result<LineModel> {
    let q0 = &cfg.q0;
    let lin = |a: &[Q; 3], b: &[Q; 3]| -> [UPoly; 3] {
        std::array::from_fn(|c| UPoly::new(vec![a[c].clone(), b[c].clone()]))
    };
    match rec.kind {
        LineKind::FiberComponentE => {
            let i = rec.incident_points[0];
            Ok(match cfg.point(i) {
                PointSpec::Proper(_) => LineModel::OneStep(i),
                PointSpec::OnSection(_) => LineModel::TwoStep,
            })
        }
        LineKind::FiberComponentF => {
            let i = rec.incident_points[0];
            let d = match cfg.point(i) {
                PointSpec::Proper(p) => Direction::between(q0, p)?,
                PointSpec::OnSection(d) => d.clone(),
            };
            Ok(LineModel::Plane(lin(&d.vector(q0), q0.coords())))
        }
        LineKind::TransverseA => Ok(LineModel::OneStep(0)),
        LineKind::TransverseB => {
            let pts: Vec<&PlanePoint> = rec
                .incident_points
                .iter()
                .filter_map(|&i| match cfg.point(i) {
                    PointSpec::Proper(p) => Some(p),
                    PointSpec::OnSection(_) => None,
                })
                .collect();
            if pts.len() < 2 {
                return Err(Error::Internal("transverse line with fewer than two plane points".into()));
            }
            Ok(LineModel::Plane(lin(pts[0].coords(), pts[1].coords())))
        }
        LineKind::TransverseC | LineKind::TransverseD => {
            let f = rec.plane_curve.as_ref().ok_or_else(|| Error::Internal("line without a plane curve".into()))?;
            let m = if rec.kind == LineKind::TransverseC { 1 } else { 2 };
            Ok(LineModel::Plane(pencil_parametrization(f, q0, m)?))
        }
        LineKind::MinimalF2Section => Err(Error::Domain("the section of F_2 has no plane model".into())),
    }
}

/// Whether a line lies in the inflectional locus, with the parameters where
/// the osculating rank drops along it.
///
/// For `N >= 5` every line lies in the locus for dimension reasons and no
/// computation is made.
pub fn line_in_inflectional_locus(cfg: &PointConfig, rec: &LineRecord, seed: u64) -> Result<InflectionReport> {
    let n = (2 * cfg.genus + 7) as usize - cfg.mu();
    if cfg.minimal_e.is_some() || n >= 5 {
        let cert = check_very_ample(cfg)?;
        if cert.verdict != Verdict::VeryAmple {
            return Err(Error::Precondition(format!("L is not very ample ({})", cert.condition)));
        }
        return Ok(InflectionReport {
            line_id: rec.id.clone(),
            n,
            generic_rank: 6,
            line_rank: 0,
            contained: true,
            imported: true,
            drops: vec![],
        });
    }
    let mut osc = Osculator::new(cfg)?;
    let model = line_model(cfg, rec)?;
    osc.analyze(&rec.id, model, seed)
}

/// Whether the points off a transverse line `gamma` impose independent
/// conditions on `|s + (3 - alpha) f|` (seven blown-up points only).
pub fn independent_conditions(cfg: &PointConfig, rec: &LineRecord) -> Result<bool> {
    if cfg.mu() != 7 {
        return Err(Error::Precondition(format!("needs seven points, found {}", cfg.mu())));
    }
    let alpha = rec
        .alpha
        .ok_or_else(|| Error::Domain(format!("line {} is not transverse", rec.id)))?;
    if alpha >= 3 {
        return Ok(true);
    }
    let rest: Vec<usize> = (1..=7).filter(|i| !rec.incident_points.contains(i)).collect();
    let d = (3 - alpha) as u32;
    let sys = system_general(d, &cfg.conditions(&rest, (2 - alpha) as u32))?;
    let full = 6 - 2 * alpha;
    Ok(sys.dim == full - rest.len() as i64)
}

/// Seeded random plane points, avoiding the configuration.
pub fn random_plane_points(cfg: &PointConfig, count: usize, seed: u64) -> Vec<PlanePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let bad: Vec<PlanePoint> = std::iter::once(cfg.q0.clone())
        .chain(cfg.proper_points().into_iter().map(|(_, p)| p.clone()))
        .collect();
    while out.len() < count {
        let p = PlanePoint::new(
            q(rng.gen_range(-30..=30)),
            q(rng.gen_range(-30..=30)),
            q(rng.gen_range(1..=5)),
        )
        .unwrap();
        if !bad.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Parameters of the rank drops that are rational, in increasing order.
pub fn rational_drops(report: &InflectionReport) -> Vec<Q> {
    report
        .drops
        .iter()
        .filter_map(|d| d.parameter.as_rational().cloned())
        .sorted()
        .collect()
}
