//! Blow-up data: points of F_1 on distinct fibers, seen in the plane model
//! where F_1 is P^2 blown up at `q0` and the fibers are the lines through
//! `q0`. A point on the (-1)-section is a tangent direction at `q0`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, q, Q};
use crate::error::{Error, Result};
use crate::picard::{self, DivisorClass, FeClass, MAX_MU};
use crate::plane::{Direction, MultCondition, PlanePoint};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointSpec {
    Proper(PlanePoint),
    /// The point of the (-1)-section over the fiber with this direction at `q0`.
    OnSection(Direction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    pub genus: i64,
    pub q0: PlanePoint,
    pub points: Vec<PointSpec>,
    /// For `mu = 0` only: the Hirzebruch invariant of a minimal model other
    /// than the plane model of F_1.
    pub minimal_e: Option<u32>,
}

impl PointConfig {
    /// Build a configuration, dropping projective duplicates (the first
    /// occurrence is kept).
    pub fn new(genus: i64, q0: PlanePoint, points: Vec<PointSpec>) -> Self {
        let mut uniq: Vec<PointSpec> = Vec::with_capacity(points.len());
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        PointConfig { genus, q0, points: uniq, minimal_e: None }
    }

    pub fn genus2(points: Vec<PointSpec>) -> Self {
        PointConfig::new(2, PlanePoint::from_i64(0, 0, 1), points)
    }

    /// The minimal surface F_e with polarization `2s + (g+e+1)f`.
    pub fn minimal(genus: i64, e: u32) -> Self {
        PointConfig { genus, q0: PlanePoint::from_i64(0, 0, 1), points: vec![], minimal_e: Some(e) }
    }

    pub fn mu(&self) -> usize {
        self.points.len()
    }

    /// Number of points on the (-1)-section.
    pub fn t(&self) -> usize {
        self.points.iter().filter(|p| matches!(p, PointSpec::OnSection(_))).count()
    }

    /// 1-based indices of points on the section.
    pub fn on_section_indices(&self) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, PointSpec::OnSection(_)))
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn on_section(&self) -> Option<(usize, &Direction)> {
        self.points.iter().enumerate().find_map(|(i, p)| match p {
            PointSpec::OnSection(d) => Some((i + 1, d)),
            PointSpec::Proper(_) => None,
        })
    }

    /// 1-based indices and coordinates of the proper points.
    pub fn proper_points(&self) -> Vec<(usize, &PlanePoint)> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| match p {
                PointSpec::Proper(x) => Some((i + 1, x)),
                PointSpec::OnSection(_) => None,
            })
            .collect()
    }

    pub fn point(&self, index: usize) -> &PointSpec {
        &self.points[index - 1]
    }

    /// Plane conditions for passing through the listed (1-based) points. A
    /// point on the section becomes a tangency condition at `q0` for curves
    /// of multiplicity `q0_mult` there.
    pub fn conditions(&self, indices: &[usize], q0_mult: u32) -> Vec<MultCondition> {
        let mut out = Vec::new();
        if q0_mult > 0 {
            out.push(MultCondition::point(&self.q0, q0_mult));
        }
        for &i in indices {
            match self.point(i) {
                PointSpec::Proper(p) => out.push(MultCondition::simple(p)),
                PointSpec::OnSection(d) => out.push(MultCondition::inf_near(&self.q0, d, q0_mult)),
            }
        }
        out
    }

    pub fn polarization(&self) -> DivisorClass {
        picard::polarization(self.genus, self.mu())
    }

    /// Proper transform of the (-1)-section.
    pub fn sigma(&self) -> DivisorClass {
        DivisorClass::section(self.mu(), &self.on_section_indices())
    }

    /// Check the distinct-fiber, section-count and range conditions.
    pub fn validate(&self) -> Result<()> {
        if self.genus < 1 {
            return Err(Error::Domain(format!("genus {} < 1", self.genus)));
        }
        if self.mu() > MAX_MU {
            return Err(Error::MuOutOfRange(self.mu()));
        }
        if let Some(e) = self.minimal_e {
            if self.mu() != 0 {
                return Err(Error::Domain("a minimal model carries no blown-up points".into()));
            }
            if e as i64 > self.genus {
                return Err(Error::Domain(format!("F_{e} is not a minimal model for genus {}", self.genus)));
            }
        }
        // Fiber of each point, as a direction at q0.
        let mut fibers: Vec<(usize, Direction)> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let dir = match p {
                PointSpec::Proper(x) => {
                    if x == &self.q0 {
                        return Err(Error::PointAtBase(i + 1));
                    }
                    Direction::between(&self.q0, x)?
                }
                PointSpec::OnSection(d) => d.clone(),
            };
            if let Some((j, _)) = fibers.iter().find(|(_, d)| d == &dir) {
                return Err(Error::SameFiber(*j, i + 1));
            }
            fibers.push((i + 1, dir));
        }
        let on = self.on_section_indices();
        if on.len() as i64 > (self.genus - 1).max(0) {
            return Err(Error::TwoOnSection(on));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> = self
            .points
            .iter()
            .map(|p| match p {
                PointSpec::Proper(x) => {
                    json!({"kind": "proper", "coords": x.coords().iter().map(format_rational).collect::<Vec<_>>()})
                }
                PointSpec::OnSection(d) => {
                    json!({"kind": "on_section", "direction": [format_rational(&d.u), format_rational(&d.v)]})
                }
            })
            .collect();
        let mut v = json!({
            "genus": self.genus,
            "q0": self.q0.coords().iter().map(format_rational).collect::<Vec<_>>(),
            "points": pts,
        });
        if let Some(e) = self.minimal_e {
            v["minimal_e"] = json!(e);
        }
        v
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)
            .map_err(|e| Error::Parse { field: "<document>".into(), message: e.to_string() })?;
        PointConfig::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err("<document>", "expected a JSON object"))?;
        for key in obj.keys() {
            if !["genus", "q0", "points", "minimal_e"].contains(&key.as_str()) {
                return Err(parse_err(key, "unknown field"));
            }
        }
        let genus = match obj.get("genus") {
            None => 2,
            Some(g) => g.as_i64().ok_or_else(|| parse_err("genus", "expected an integer"))?,
        };
        let q0 = match obj.get("q0") {
            None => PlanePoint::from_i64(0, 0, 1),
            Some(c) => parse_point(c, "q0")?,
        };
        let raw = obj
            .get("points")
            .ok_or_else(|| parse_err("points", "missing"))?
            .as_array()
            .ok_or_else(|| parse_err("points", "expected an array"))?;
        let mut points = Vec::with_capacity(raw.len());
        for (i, p) in raw.iter().enumerate() {
            let field = format!("points[{i}]");
            let po = p.as_object().ok_or_else(|| parse_err(&field, "expected an object"))?;
            let kind = po
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err(&format!("{field}.kind"), "missing point kind"))?;
            let spec = match kind {
                "proper" => PointSpec::Proper(parse_point(
                    po.get("coords").ok_or_else(|| parse_err(&format!("{field}.coords"), "missing"))?,
                    &format!("{field}.coords"),
                )?),
                "on_section" => PointSpec::OnSection(parse_direction(
                    po.get("direction")
                        .ok_or_else(|| parse_err(&format!("{field}.direction"), "missing"))?,
                    &format!("{field}.direction"),
                )?),
                "infinitely_near" => {
                    let depth = po.get("depth").map(|d| d.as_u64()).unwrap_or(Some(1));
                    if depth != Some(1) {
                        return Err(Error::DepthTooDeep(i + 1));
                    }
                    let base = match po.get("base") {
                        None => q0.clone(),
                        Some(b) => parse_point(b, &format!("{field}.base"))?,
                    };
                    if base != q0 {
                        return Err(Error::DepthTooDeep(i + 1));
                    }
                    PointSpec::OnSection(parse_direction(
                        po.get("direction")
                            .ok_or_else(|| parse_err(&format!("{field}.direction"), "missing"))?,
                        &format!("{field}.direction"),
                    )?)
                }
                other => return Err(parse_err(&format!("{field}.kind"), &format!("unknown kind '{other}'"))),
            };
            points.push(spec);
        }
        let mut cfg = PointConfig::new(genus, q0, points);
        if let Some(e) = obj.get("minimal_e") {
            let e = e.as_u64().ok_or_else(|| parse_err("minimal_e", "expected a non-negative integer"))?;
            cfg.minimal_e = Some(e as u32);
        }
        Ok(cfg)
    }
}

fn parse_err(field: &str, message: &str) -> Error {
    Error::Parse { field: field.to_string(), message: message.to_string() }
}

fn parse_rationals(v: &Value, field: &str, n: usize) -> Result<Vec<Q>> {
    let arr = v.as_array().ok_or_else(|| parse_err(field, "expected an array"))?;
    if arr.len() != n {
        return Err(parse_err(field, &format!("expected {n} entries, found {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(k, x)| {
            let f = format!("{field}[{k}]");
            match x {
                Value::String(s) => parse_rational(s).map_err(|m| parse_err(&f, &m)),
                Value::Number(num) if num.is_i64() || num.is_u64() => Ok(parse_rational(&num.to_string()).unwrap()),
                Value::Number(num) => Err(parse_err(&f, &format!("floating-point value {num} is not exact"))),
                other => Err(parse_err(&f, &format!("expected a rational, found {other}"))),
            }
        })
        .collect()
}

fn parse_point(v: &Value, field: &str) -> Result<PlanePoint> {
    let c = parse_rationals(v, field, 3)?;
    let [x, y, z]: [Q; 3] = c.try_into().unwrap();
    PlanePoint::new(x, y, z).map_err(|e| parse_err(field, &e.to_string()))
}

fn parse_direction(v: &Value, field: &str) -> Result<Direction> {
    let c = parse_rationals(v, field, 2)?;
    let [u, w]: [Q; 2] = c.try_into().unwrap();
    Direction::new(u, w).map_err(|e| parse_err(field, &e.to_string()))
}

/// Random valid genus-2 configuration with `mu` points, `t` of them on the
/// section, coordinates drawn from the integers in `[-height, height]`.
/// Small heights make special positions (collinear quadruples, points on
/// common conics) frequent. The height must leave room for `mu` distinct
/// fibers through q0, otherwise this never returns.
pub fn random_config<R: Rng>(rng: &mut R, mu: usize, t: usize, height: i64) -> PointConfig {
    assert!(t <= 1 && t <= mu && mu <= MAX_MU);
    loop {
        let mut pts = Vec::with_capacity(mu);
        for k in 0..mu {
            if k < t {
                pts.push(PointSpec::OnSection(Direction::from_i64(
                    rng.gen_range(-height..=height),
                    rng.gen_range(1..=height.max(1)),
                )));
            } else {
                let x = rng.gen_range(-height..=height);
                let y = rng.gen_range(-height..=height);
                pts.push(PointSpec::Proper(PlanePoint::new(q(x), q(y), q(1)).unwrap()));
            }
        }
        let cfg = PointConfig::genus2(pts);
        if cfg.mu() == mu && cfg.validate().is_ok() {
            return cfg;
        }
    }
}

/// Abstract blow-up datum on F_e: which of the `mu` centers lie on the
/// minimal section.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElmDatum {
    pub e: u32,
    pub mu: usize,
    pub on_section: Vec<bool>,
}

impl ElmDatum {
    pub fn new(e: u32, on_section: Vec<bool>) -> Self {
        ElmDatum { e, mu: on_section.len(), on_section }
    }

    pub fn from_config(cfg: &PointConfig) -> Self {
        ElmDatum::new(1, cfg.points.iter().map(|p| matches!(p, PointSpec::OnSection(_))).collect())
    }

    pub fn t(&self) -> usize {
        self.on_section.iter().filter(|&&b| b).count()
    }

    /// Proper transform of the minimal section.
    pub fn section_class(&self) -> FeClass {
        let idx: Vec<usize> = (0..self.mu).filter(|&i| self.on_section[i]).collect();
        FeClass::section(self.mu, &idx)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElmKind {
    /// Center on the section: F_e to F_(e+1).
    Raise,
    /// Center off the section: F_e to F_(e-1).
    Lower,
}

/// The lattice map of one elementary transformation, written in the bases
/// `(s, f, e_1, ..., e_mu)` before and after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElmMap {
    pub kind: ElmKind,
    /// 0-based center.
    pub center: usize,
    pub mu: usize,
}

impl ElmMap {
    pub fn apply(&self, c: &FeClass) -> Result<FeClass> {
        if c.m.len() != self.mu {
            return Err(Error::DimensionMismatch { left: c.m.len(), right: self.mu });
        }
        let (a, b, m) = (c.a_s, c.a_f, c.m[self.center]);
        let mut out = c.clone();
        match self.kind {
            ElmKind::Raise => {
                out.a_f = a + b - m;
                out.m[self.center] = a - m;
            }
            ElmKind::Lower => {
                out.a_f = b - m;
                out.m[self.center] = a - m;
            }
        }
        Ok(out)
    }

    /// The elementary transformation centered at the new point, which
    /// undoes this one.
    pub fn inverse(&self) -> ElmMap {
        let kind = match self.kind {
            ElmKind::Raise => ElmKind::Lower,
            ElmKind::Lower => ElmKind::Raise,
        };
        ElmMap { kind, ..*self }
    }

    /// Images of the basis `s, f, e_1, ...` as rows.
    pub fn matrix(&self) -> Vec<FeClass> {
        let mut basis = vec![FeClass::new(1, 0, vec![0; self.mu]), FeClass::new(0, 1, vec![0; self.mu])];
        for i in 0..self.mu {
            let mut m = vec![0; self.mu];
            m[i] = -1;
            basis.push(FeClass::new(0, 0, m));
        }
        basis.iter().map(|b| self.apply(b).unwrap()).collect()
    }
}

/// Lattice map of the elementary transformation at `center` (0-based),
/// which must lie on the minimal section.
pub fn elm_classes(d: &ElmDatum, center: usize) -> Result<ElmMap> {
    if center >= d.mu || !d.on_section[center] {
        return Err(Error::InvalidCenter(center + 1));
    }
    Ok(ElmMap { kind: ElmKind::Raise, center, mu: d.mu })
}

/// Datum after the elementary transformation at an on-section center.
pub fn elm_datum(d: &ElmDatum, center: usize) -> Result<ElmDatum> {
    elm_classes(d, center)?;
    let mut out = d.clone();
    out.e += 1;
    out.on_section[center] = false;
    Ok(out)
}

/// Elementary transformation at a center off the section, lowering `e`.
pub fn elm_lower(d: &ElmDatum, center: usize) -> Result<(ElmDatum, ElmMap)> {
    if center >= d.mu || d.on_section[center] || d.e == 0 {
        return Err(Error::InvalidCenter(center + 1));
    }
    let mut out = d.clone();
    out.e -= 1;
    out.on_section[center] = true;
    Ok((out, ElmMap { kind: ElmKind::Lower, center, mu: d.mu }))
}

/// Apply a raise or lower step as appropriate for the center.
pub fn elm_step(d: &ElmDatum, center: usize) -> Result<(ElmDatum, ElmMap)> {
    if center >= d.mu {
        return Err(Error::InvalidCenter(center + 1));
    }
    if d.on_section[center] {
        Ok((elm_datum(d, center)?, elm_classes(d, center)?))
    } else {
        elm_lower(d, center)
    }
}

/// Bring a datum to e = 1 by elementary transformations. On F_0 every point
/// lies on a section of square zero, so the first center is declared on the
/// section before raising.
pub fn normalize_to_f1(d: &ElmDatum) -> Result<(ElmDatum, Vec<ElmMap>)> {
    let mut cur = d.clone();
    let mut steps = Vec::new();
    while cur.e > 1 {
        let c = (0..cur.mu)
            .find(|&i| !cur.on_section[i])
            .ok_or_else(|| Error::Precondition(format!("F_{} with every center on the section", cur.e)))?;
        let (next, map) = elm_lower(&cur, c)?;
        steps.push(map);
        cur = next;
    }
    if cur.e == 0 {
        if cur.mu == 0 {
            return Err(Error::Precondition("F_0 without centers has no elementary transformation".into()));
        }
        if !cur.on_section.iter().any(|&b| b) {
            cur.on_section[0] = true;
        }
        let c = cur.on_section.iter().position(|&b| b).unwrap();
        steps.push(elm_classes(&cur, c)?);
        cur = elm_datum(&cur, c)?;
    }
    Ok((cur, steps))
}
