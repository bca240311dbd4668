//! Lines of `(X, L)`: curves `C` with `L.C = 1`.
//!
//! Every singular fiber contributes two lines, the exceptional curve `e_i`
//! and the residual component `f - e_i`. Lines transverse to the fibers
//! have self-intersection -2 and come from a section `gamma` of `|s + alpha f|`
//! on F_1 through `2*alpha + 1` of the points, for `alpha` from 0 to 3.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::config::{PointConfig, PointSpec};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, HirzebruchClass};
use crate::plane::{collinear, irreducible_member_general, line_through, Form, Membership};
use crate::positivity::{check_very_ample, point_on_curve, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LineKind {
    FiberComponentE,
    FiberComponentF,
    TransverseA,
    TransverseB,
    TransverseC,
    TransverseD,
    MinimalF2Section,
}

impl LineKind {
    pub fn is_transverse(self) -> bool {
        matches!(
            self,
            LineKind::TransverseA | LineKind::TransverseB | LineKind::TransverseC | LineKind::TransverseD
        )
    }
}

/// Class of a line: in the plane-model lattice, or on a minimal F_e.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineClass {
    Plane(DivisorClass),
    Hirzebruch(HirzebruchClass),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRecord {
    pub id: String,
    pub kind: LineKind,
    pub cls: LineClass,
    /// 1-based indices of the configuration points on the line's image.
    pub incident_points: Vec<usize>,
    pub plane_curve: Option<Form>,
    pub alpha: Option<i64>,
    pub epsilon: Option<i64>,
}

impl LineRecord {
    pub fn plane_class(&self) -> Option<&DivisorClass> {
        match &self.cls {
            LineClass::Plane(d) => Some(d),
            LineClass::Hirzebruch(_) => None,
        }
    }
}

/// Intersection numbers of a line with `L`, itself, `-K` and `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineNumbers {
    pub degree: i64,
    pub self_intersection: i64,
    pub anticanonical: i64,
    pub fiber: i64,
}

pub fn line_numbers(cfg: &PointConfig, rec: &LineRecord) -> Result<LineNumbers> {
    match &rec.cls {
        LineClass::Plane(c) => {
            let mu = cfg.mu();
            Ok(LineNumbers {
                degree: c.intersect(&cfg.polarization())?,
                self_intersection: c.self_intersection(),
                anticanonical: c.intersect(&DivisorClass::anticanonical(mu))?,
                fiber: c.intersect(&DivisorClass::fiber(mu))?,
            })
        }
        LineClass::Hirzebruch(c) => {
            let e = c.e;
            let l = HirzebruchClass::new(e, 2, cfg.genus + e as i64 + 1);
            let k = HirzebruchClass::canonical(e);
            Ok(LineNumbers {
                degree: c.intersect(&l)?,
                self_intersection: c.self_intersection(),
                anticanonical: -c.intersect(&k)?,
                fiber: c.intersect(&HirzebruchClass::new(e, 0, 1))?,
            })
        }
    }
}

/// The two components of every singular fiber.
pub fn singular_fiber_lines(cfg: &PointConfig) -> Result<Vec<LineRecord>> {
    cfg.validate()?;
    let mu = cfg.mu();
    let mut out = Vec::with_capacity(2 * mu);
    for i in 1..=mu {
        out.push(LineRecord {
            id: format!("E{i}"),
            kind: LineKind::FiberComponentE,
            cls: LineClass::Plane(DivisorClass::exceptional(mu, i)),
            incident_points: vec![i],
            plane_curve: None,
            alpha: None,
            epsilon: None,
        });
        let mut f = DivisorClass::fiber(mu);
        f.m[i - 1] = 1;
        let curve = match cfg.point(i) {
            PointSpec::Proper(p) => line_through(&cfg.q0, p)?,
            PointSpec::OnSection(d) => crate::plane::tangent_line(&cfg.q0, d),
        };
        out.push(LineRecord {
            id: format!("F{i}"),
            kind: LineKind::FiberComponentF,
            cls: LineClass::Plane(f),
            incident_points: vec![i],
            plane_curve: Some(curve),
            alpha: None,
            epsilon: None,
        });
    }
    Ok(out)
}

fn transverse(kind: LineKind, cls: DivisorClass, pts: Vec<usize>, curve: Option<Form>, alpha: i64) -> LineRecord {
    LineRecord {
        id: String::new(),
        kind,
        cls: LineClass::Plane(cls),
        incident_points: pts,
        plane_curve: curve,
        alpha: Some(alpha),
        epsilon: Some(2 * alpha + 1),
    }
}

fn unverified_transverse_lines(cfg: &PointConfig) -> Result<Vec<LineRecord>> {
    let mu = cfg.mu();
    let mut out = Vec::new();
    if let Some(e) = cfg.minimal_e {
        if e == 2 {
            out.push(LineRecord {
                id: "S".into(),
                kind: LineKind::MinimalF2Section,
                cls: LineClass::Hirzebruch(HirzebruchClass::new(2, 1, 0)),
                incident_points: vec![],
                plane_curve: None,
                alpha: None,
                epsilon: None,
            });
        }
        return Ok(out);
    }
    // a) the section itself, through the single point on it
    if cfg.t() == 1 {
        let mut r = transverse(LineKind::TransverseA, cfg.sigma(), cfg.on_section_indices(), None, 0);
        r.id = "S".into();
        out.push(r);
    }
    let mut curves: Vec<Form> = Vec::new();
    // b) lines missing q0 through three points
    let proper = cfg.proper_points();
    for (a, b, c) in proper.iter().tuple_combinations() {
        if !collinear(a.1, b.1, c.1) {
            continue;
        }
        let l = line_through(a.1, b.1)?;
        if l.vanishes_at(&cfg.q0) || curves.contains(&l) {
            continue;
        }
        let on: Vec<usize> = (1..=mu).filter(|&j| point_on_curve(cfg, j, &l)).collect();
        curves.push(l.clone());
        out.push(transverse(LineKind::TransverseB, DivisorClass::through(mu, 1, 0, &on), on, Some(l), 1));
    }
    // c) irreducible conics through q0 and five points
    for subset in (1..=mu).combinations(5) {
        let conds = cfg.conditions(&subset, 1);
        let sys = crate::plane::system_general(2, &conds)?;
        if sys.dim < 0 {
            continue;
        }
        if sys.dim > 0 {
            return Err(Error::Internal(format!("a pencil of conics through q0 and points {subset:?}")));
        }
        let f = sys.representative().unwrap();
        if crate::plane::rank_class(&f) != 3 || curves.contains(&f) {
            continue;
        }
        let on: Vec<usize> = (1..=mu).filter(|&j| point_on_curve(cfg, j, &f)).collect();
        curves.push(f.clone());
        out.push(transverse(LineKind::TransverseC, DivisorClass::through(mu, 2, 1, &on), on, Some(f), 2));
    }
    // d) an irreducible cubic with a node at q0 through all seven points
    if mu == 7 {
        let all: Vec<usize> = (1..=7).collect();
        if let Membership::Yes(f) = irreducible_member_general(3, &cfg.conditions(&all, 2))? {
            out.push(transverse(LineKind::TransverseD, DivisorClass::through(mu, 3, 2, &all), all, Some(f), 3));
        }
    }
    let mut k = 0;
    for r in out.iter_mut() {
        if r.id.is_empty() {
            k += 1;
            r.id = format!("T{k}");
        }
    }
    Ok(out)
}

/// All lines transverse to the fibers; requires `L` very ample.
pub fn find_transverse_lines(cfg: &PointConfig) -> Result<Vec<LineRecord>> {
    let cert = check_very_ample(cfg)?;
    if cert.verdict != Verdict::VeryAmple {
        return Err(Error::Precondition(format!(
            "L is not very ample: {}",
            serde_json::to_string(&cert).unwrap()
        )));
    }
    let out = unverified_transverse_lines(cfg)?;
    for r in &out {
        if let (Some(alpha), LineClass::Plane(_)) = (r.alpha, &r.cls) {
            if r.incident_points.len() as i64 != 2 * alpha + 1 {
                return Err(Error::Internal(format!(
                    "line {} of case alpha = {alpha} meets {} points",
                    r.id,
                    r.incident_points.len()
                )));
            }
        }
    }
    Ok(out)
}

/// Every line of a very ample configuration: fiber components, then the
/// transverse lines.
pub fn all_lines(cfg: &PointConfig) -> Result<Vec<LineRecord>> {
    let mut out = singular_fiber_lines(cfg)?;
    out.extend(find_transverse_lines(cfg)?);
    Ok(out)
}

pub fn find_line(cfg: &PointConfig, id: &str) -> Result<LineRecord> {
    all_lines(cfg)?
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::Domain(format!("no line with id '{id}'")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanRelation {
    pub sigma_dot_c: i64,
    /// `sigma.C = 2`, which happens only for the nodal-cubic line with no
    /// point on the section.
    pub castelnuovo: bool,
}

/// Intersection of a transverse line with the section; `None` for the
/// section itself and for non-transverse lines.
pub fn section_span_relation(cfg: &PointConfig, rec: &LineRecord) -> Result<Option<SpanRelation>> {
    if !rec.kind.is_transverse() || rec.kind == LineKind::TransverseA {
        return Ok(None);
    }
    let c = rec.plane_class().ok_or_else(|| Error::Domain("line without a plane class".into()))?;
    let sigma_dot_c = cfg.sigma().intersect(c)?;
    Ok(Some(SpanRelation { sigma_dot_c, castelnuovo: sigma_dot_c == 2 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::PlanePoint;

    fn p(x: i64, y: i64) -> PointSpec {
        PointSpec::Proper(PlanePoint::from_i64(x, y, 1))
    }

    #[test]
    fn fiber_lines() {
        let cfg = PointConfig::genus2(vec![p(1, 3), p(-2, 5), p(4, -1)]);
        let ls = singular_fiber_lines(&cfg).unwrap();
        assert_eq!(ls.len(), 6);
        for r in &ls {
            let n = line_numbers(&cfg, r).unwrap();
            assert_eq!(n.degree, 1);
            assert_eq!(n.self_intersection, -1);
            assert_eq!(n.anticanonical, 1);
            assert_eq!(n.fiber, 0);
        }
        let e1 = ls[0].plane_class().unwrap();
        let f1 = ls[1].plane_class().unwrap();
        assert_eq!(e1.intersect(f1).unwrap(), 1);
    }

    #[test]
    fn three_on_a_line() {
        let cfg = PointConfig::genus2(vec![p(1, 1), p(2, 1), p(-3, 1), p(4, -7), p(-5, -2)]);
        let ls = find_transverse_lines(&cfg).unwrap();
        assert_eq!(ls.len(), 1);
        let r = &ls[0];
        assert_eq!(r.kind, LineKind::TransverseB);
        assert_eq!(r.incident_points, vec![1, 2, 3]);
        let n = line_numbers(&cfg, r).unwrap();
        assert_eq!((n.degree, n.self_intersection, n.anticanonical, n.fiber), (1, -2, 0, 1));
        let s = section_span_relation(&cfg, r).unwrap().unwrap();
        assert_eq!(s.sigma_dot_c, 0);
    }

    #[test]
    fn minimal_f2() {
        let cfg = PointConfig::minimal(2, 2);
        let ls = find_transverse_lines(&cfg).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(ls[0].cls, LineClass::Hirzebruch(HirzebruchClass::new(2, 1, 0)));
        let n = line_numbers(&cfg, &ls[0]).unwrap();
        assert_eq!((n.degree, n.self_intersection), (1, -2));
        assert!(find_transverse_lines(&PointConfig::minimal(2, 1)).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_very_ample() {
        let cfg = PointConfig::genus2(vec![p(1, 1), p(2, 1), p(3, 1), p(-1, 1)]);
        assert!(matches!(find_transverse_lines(&cfg), Err(Error::Precondition(_))));
    }
}
