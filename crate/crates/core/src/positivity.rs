//! Ampleness and very ampleness of `L = -K + F` for genus-2 conic
//! fibrations given by point configurations, with witness certificates.
//!
//! For at most seven points, `L` is ample exactly when at most one point is
//! on the (-1)-section, no four points are collinear and no irreducible
//! conic through `q0` contains six of the points. It is very ample unless,
//! in addition, all seven points lie on an irreducible conic missing `q0`.
//! Beyond seven points only necessary conditions are checked.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::config::{PointConfig, PointSpec};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, MAX_MU};
use crate::plane::{
    self, collinear, irreducible_member_general, line_through, Form, Locus, Membership, MultCondition,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Ample,
    VeryAmple,
    NotAmple,
    AmpleNotVeryAmple,
    NotVeryAmple,
    Undecided,
}

impl Verdict {
    pub fn is_positive(self) -> bool {
        matches!(self, Verdict::Ample | Verdict::VeryAmple)
    }

    pub fn is_rejection(self) -> bool {
        matches!(self, Verdict::NotAmple | Verdict::AmpleNotVeryAmple | Verdict::NotVeryAmple)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConditionTag {
    None,
    FourOnLine,
    SixOnConicThroughQ0,
    SevenOnConicMissingQ0,
    EightOnConicMissingQ0,
    NodalCubic,
    TTooLarge,
    MuTooLarge,
    BeyondCharacterization,
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        write!(f, "{}", s.as_str().unwrap())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Ample,
    VeryAmple,
}

/// Which class a witness curve is paired with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairedWith {
    L,
    AntiK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub level: Level,
    pub condition: ConditionTag,
    pub witness_points: Vec<usize>,
    pub witness_class: Option<DivisorClass>,
    pub paired_with: Option<PairedWith>,
    pub pairing: Option<i64>,
    pub citation: String,
}

impl Certificate {
    fn positive(level: Level, verdict: Verdict, citation: &str) -> Self {
        Certificate {
            verdict,
            level,
            condition: ConditionTag::None,
            witness_points: vec![],
            witness_class: None,
            paired_with: None,
            pairing: None,
            citation: citation.to_string(),
        }
    }

    fn witness(
        level: Level,
        verdict: Verdict,
        condition: ConditionTag,
        points: Vec<usize>,
        class: DivisorClass,
        against: &DivisorClass,
        paired_with: PairedWith,
        citation: &str,
    ) -> Self {
        let pairing = class.intersect(against).expect("same lattice");
        Certificate {
            verdict,
            level,
            condition,
            witness_points: points,
            witness_class: Some(class),
            paired_with: Some(paired_with),
            pairing: Some(pairing),
            citation: citation.to_string(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }
}

const CITE_FOUR: &str = "four points on a line missing q0 give a curve C of class h - e_i - e_j - e_k - e_l with L.C = 0, so L is not ample";
const CITE_SIX: &str = "six points on an irreducible conic through q0 give a curve C of class 2h - e0 - (six e_i) with L.C <= 0, so L is not ample";
const CITE_T: &str = "with two or more points on the (-1)-section its proper transform sigma has L.sigma = 2 - t <= 0, so L is not ample";
const CITE_EIGHT: &str = "eight points on an irreducible conic missing q0 give a curve C of class 2h - (eight e_i) with L.C = 0, so L is not ample";
const CITE_CUBIC: &str = "an irreducible cubic through q0 with a node at one point and passing through eight others has L.C = 0, so L is not ample";
const CITE_SEVEN: &str = "seven points on an irreducible conic missing q0 give a curve C with -K.C = -1; -K is not nef, so L = -K + F is not very ample although it is ample";
const CITE_MU: &str = "a very ample genus-2 conic fibration has degree L^2 = 12 - mu >= 5, so mu <= 7";
const CITE_AMPLE: &str = "at most one point on the (-1)-section, no four points on a line and no six on an irreducible conic through q0";
const CITE_VERY: &str = "ample, and the seven points (if mu = 7 and t = 0) do not lie on an irreducible conic missing q0";
const CITE_MINIMAL: &str = "the minimal model F_e with 2s + (e+3)f satisfies the Hirzebruch ampleness inequality, hence is very ample";
const CITE_UNDECIDED: &str = "for eight or more points only necessary conditions are checked, and all of them hold";

fn require_genus2(cfg: &PointConfig) -> Result<()> {
    if cfg.genus != 2 {
        return Err(Error::UnsupportedGenus(cfg.genus));
    }
    Ok(())
}

/// Validate, turning a second on-section point into a rejection instead of
/// an error.
fn validate_or_t_rejection(cfg: &PointConfig, level: Level) -> Result<Option<Certificate>> {
    require_genus2(cfg)?;
    match cfg.validate() {
        Ok(()) => Ok(None),
        Err(Error::TwoOnSection(idx)) => {
            let sigma = cfg.sigma();
            Ok(Some(Certificate::witness(
                level,
                Verdict::NotAmple,
                ConditionTag::TTooLarge,
                idx,
                sigma,
                &cfg.polarization(),
                PairedWith::L,
                CITE_T,
            )))
        }
        Err(e) => Err(e),
    }
}

/// Whether configuration point `j` lies on the curve `f`.
pub fn point_on_curve(cfg: &PointConfig, j: usize, f: &Form) -> bool {
    match cfg.point(j) {
        PointSpec::Proper(p) => f.vanishes_at(p),
        PointSpec::OnSection(d) => f.contains_inf_near(&cfg.q0, d),
    }
}

fn points_on(cfg: &PointConfig, f: &Form) -> Vec<usize> {
    (1..=cfg.mu()).filter(|&j| point_on_curve(cfg, j, f)).collect()
}

/// Indices of all proper points on the first line (in index order) that
/// carries at least four of them.
pub fn four_on_line(cfg: &PointConfig) -> Option<Vec<usize>> {
    let pts = cfg.proper_points();
    for (a, b) in pts.iter().tuple_combinations() {
        let on: Vec<usize> =
            pts.iter().filter(|(_, p)| collinear(a.1, b.1, p)).map(|(i, _)| *i).collect();
        if on.len() >= 4 {
            return Some(on);
        }
    }
    None
}

/// An irreducible conic through `q0` containing at least `k` of the points.
pub fn conic_through_q0_with(cfg: &PointConfig, k: usize) -> Result<Option<(Vec<usize>, Form)>> {
    for subset in (1..=cfg.mu()).combinations(k) {
        let conds = cfg.conditions(&subset, 1);
        if let Membership::Yes(f) = irreducible_member_general(2, &conds)? {
            return Ok(Some((points_on(cfg, &f), f)));
        }
    }
    Ok(None)
}

/// An irreducible conic missing `q0` through at least `k` proper points.
pub fn conic_missing_q0_with(cfg: &PointConfig, k: usize) -> Result<Option<(Vec<usize>, Form)>> {
    let proper: Vec<usize> = cfg.proper_points().iter().map(|(i, _)| *i).collect();
    for subset in proper.iter().copied().combinations(k) {
        let conds = cfg.conditions(&subset, 0);
        if let Membership::Yes(f) = irreducible_member_general(2, &conds)? {
            if !f.vanishes_at(&cfg.q0) {
                return Ok(Some((points_on(cfg, &f), f)));
            }
        }
    }
    Ok(None)
}

/// An irreducible cubic through `q0` with a double point at a proper `q_i`
/// and passing through eight further points.
pub fn nodal_cubic(cfg: &PointConfig) -> Result<Option<(usize, Vec<usize>, Form)>> {
    for (i, qi) in cfg.proper_points() {
        let others: Vec<usize> = (1..=cfg.mu()).filter(|&j| j != i).collect();
        for subset in others.iter().copied().combinations(8) {
            let mut conds = cfg.conditions(&subset, 1);
            conds.push(MultCondition::point(qi, 2));
            if let Membership::Yes(f) = irreducible_member_general(3, &conds)? {
                return Ok(Some((i, subset, f)));
            }
        }
    }
    Ok(None)
}

fn with_points(mu: usize, a: i64, m0: i64, points: &[usize]) -> DivisorClass {
    DivisorClass::through(mu, a, m0, points)
}

/// Decide ampleness of `L` (exactly for `mu <= 7`, one-sided beyond).
pub fn check_ample(cfg: &PointConfig) -> Result<Certificate> {
    let level = Level::Ample;
    if let Some(c) = validate_or_t_rejection(cfg, level)? {
        return Ok(c);
    }
    if cfg.minimal_e.is_some() {
        return Ok(Certificate::positive(level, Verdict::Ample, CITE_MINIMAL));
    }
    if let Some(c) = ample_obstruction(cfg, level)? {
        return Ok(c);
    }
    if cfg.mu() <= 7 {
        Ok(Certificate::positive(level, Verdict::Ample, CITE_AMPLE))
    } else {
        let mut c = Certificate::positive(level, Verdict::Undecided, CITE_UNDECIDED);
        c.condition = ConditionTag::BeyondCharacterization;
        Ok(c)
    }
}

fn ample_obstruction(cfg: &PointConfig, level: Level) -> Result<Option<Certificate>> {
    let mu = cfg.mu();
    let l = cfg.polarization();
    if let Some(on) = four_on_line(cfg) {
        let c = with_points(mu, 1, 0, &on);
        return Ok(Some(Certificate::witness(
            level,
            Verdict::NotAmple,
            ConditionTag::FourOnLine,
            on,
            c,
            &l,
            PairedWith::L,
            CITE_FOUR,
        )));
    }
    if let Some((on, _)) = conic_through_q0_with(cfg, 6)? {
        let c = with_points(mu, 2, 1, &on);
        return Ok(Some(Certificate::witness(
            level,
            Verdict::NotAmple,
            ConditionTag::SixOnConicThroughQ0,
            on,
            c,
            &l,
            PairedWith::L,
            CITE_SIX,
        )));
    }
    if mu >= 8 {
        if let Some((on, _)) = conic_missing_q0_with(cfg, 8)? {
            let c = with_points(mu, 2, 0, &on);
            return Ok(Some(Certificate::witness(
                level,
                Verdict::NotAmple,
                ConditionTag::EightOnConicMissingQ0,
                on,
                c,
                &l,
                PairedWith::L,
                CITE_EIGHT,
            )));
        }
    }
    if mu >= 9 {
        if let Some((node, through, _)) = nodal_cubic(cfg)? {
            let mut c = with_points(mu, 3, 1, &through);
            c.m[node - 1] = 2;
            let mut pts = through.clone();
            pts.push(node);
            pts.sort_unstable();
            return Ok(Some(Certificate::witness(
                level,
                Verdict::NotAmple,
                ConditionTag::NodalCubic,
                pts,
                c,
                &l,
                PairedWith::L,
                CITE_CUBIC,
            )));
        }
    }
    Ok(None)
}

/// Whether the configuration is the exceptional one: seven points, none on
/// the section, all on an irreducible conic missing `q0`.
pub fn is_special_configuration(cfg: &PointConfig) -> Result<bool> {
    Ok(special_conic(cfg)?.is_some())
}

fn special_conic(cfg: &PointConfig) -> Result<Option<Form>> {
    if cfg.mu() != 7 || cfg.t() != 0 {
        return Ok(None);
    }
    let all: Vec<usize> = (1..=7).collect();
    match irreducible_member_general(2, &cfg.conditions(&all, 0))? {
        Membership::Yes(f) if !f.vanishes_at(&cfg.q0) => Ok(Some(f)),
        _ => Ok(None),
    }
}

/// Decide very ampleness of `L`.
pub fn check_very_ample(cfg: &PointConfig) -> Result<Certificate> {
    let level = Level::VeryAmple;
    if let Some(c) = validate_or_t_rejection(cfg, level)? {
        return Ok(c);
    }
    if cfg.minimal_e.is_some() {
        return Ok(Certificate::positive(level, Verdict::VeryAmple, CITE_MINIMAL));
    }
    if let Some(c) = ample_obstruction(cfg, level)? {
        return Ok(c);
    }
    let mu = cfg.mu();
    if mu >= 8 {
        let l = cfg.polarization();
        return Ok(Certificate::witness(
            level,
            Verdict::NotVeryAmple,
            ConditionTag::MuTooLarge,
            vec![],
            l.clone(),
            &l,
            PairedWith::L,
            CITE_MU,
        ));
    }
    if special_conic(cfg)?.is_some() {
        let c = with_points(mu, 2, 0, &(1..=7).collect::<Vec<_>>());
        return Ok(Certificate::witness(
            level,
            Verdict::AmpleNotVeryAmple,
            ConditionTag::SevenOnConicMissingQ0,
            (1..=7).collect(),
            c,
            &DivisorClass::anticanonical(mu),
            PairedWith::AntiK,
            CITE_SEVEN,
        ));
    }
    Ok(Certificate::positive(level, Verdict::VeryAmple, CITE_VERY))
}

pub fn check(cfg: &PointConfig, level: Level) -> Result<Certificate> {
    match level {
        Level::Ample => check_ample(cfg),
        Level::VeryAmple => check_very_ample(cfg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Undecided,
}

/// A curve with negative anticanonical degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiKWitness {
    pub condition: ConditionTag,
    pub points: Vec<usize>,
    pub class: DivisorClass,
    pub pairing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiKReport {
    pub nef: TriState,
    pub big: TriState,
    pub witness: Option<AntiKWitness>,
}

/// Nefness and bigness of `-K` through the incidence conditions on
/// `q0, q1, ..., q_mu`: no four on a line, no seven on a conic.
pub fn antik_nef_big(cfg: &PointConfig) -> Result<AntiKReport> {
    require_genus2(cfg)?;
    let mu = cfg.mu();
    if mu > MAX_MU {
        return Err(Error::MuOutOfRange(mu));
    }
    if mu >= 8 {
        return Ok(AntiKReport { nef: TriState::Undecided, big: TriState::Undecided, witness: None });
    }
    let ak = DivisorClass::anticanonical(mu);
    let no = |condition, points: Vec<usize>, class: DivisorClass| {
        let pairing = class.intersect(&ak).unwrap();
        Ok(AntiKReport {
            nef: TriState::No,
            big: TriState::No,
            witness: Some(AntiKWitness { condition, points, class, pairing }),
        })
    };
    if cfg.t() >= 2 {
        return no(ConditionTag::TTooLarge, cfg.on_section_indices(), cfg.sigma());
    }
    if let Some(on) = four_on_line(cfg) {
        let c = with_points(mu, 1, 0, &on);
        return no(ConditionTag::FourOnLine, on, c);
    }
    if let Some((on, _)) = conic_through_q0_with(cfg, 6)? {
        let c = with_points(mu, 2, 1, &on);
        return no(ConditionTag::SixOnConicThroughQ0, on, c);
    }
    if let Some((on, _)) = conic_missing_q0_with(cfg, 7)? {
        let c = with_points(mu, 2, 0, &on);
        return no(ConditionTag::SevenOnConicMissingQ0, on, c);
    }
    Ok(AntiKReport { nef: TriState::Yes, big: TriState::Yes, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointReport {
    pub m: i64,
    pub class: DivisorClass,
    pub self_intersection: i64,
    pub verdict: Verdict,
}

/// Positivity of `A_m = -K + mF`, which equals `L` for `m = 1`.
pub fn adjoint_positivity(cfg: &PointConfig, m: i64) -> Result<AdjointReport> {
    if m <= 0 {
        return Err(Error::Domain(format!("adjoint twist m = {m} must be positive")));
    }
    let mu = cfg.mu();
    let class = &DivisorClass::anticanonical(mu) + &(m * &DivisorClass::fiber(mu));
    let self_intersection = class.self_intersection();
    let report = antik_nef_big(cfg)?;
    let verdict = match (report.nef, report.big) {
        (TriState::Yes, TriState::Yes) => Verdict::VeryAmple,
        (TriState::Yes, _) => Verdict::Ample,
        _ => Verdict::Undecided,
    };
    Ok(AdjointReport { m, class, self_intersection, verdict })
}

/// `x(x - y + 3) + y(4 - x) - 3`: the largest number of points allowed on
/// an irreducible curve of `|xs + yf|` by the comparison criterion.
pub fn bese_bound(x: i64, y: i64) -> Result<i64> {
    if !(0..=4).contains(&x) || !(0..=3).contains(&y) || (x == 0 && y == 0) {
        return Err(Error::Domain(format!("(x, y) = ({x}, {y}) outside 0..=4 x 0..=3 minus the origin")));
    }
    Ok(x * (x - y + 3) + y * (4 - x) - 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeseCheck {
    pub x: i64,
    pub y: i64,
    pub bound: i64,
    pub passes: bool,
    /// Points of a violating subset, if any.
    pub violating_points: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Agreement {
    Agree,
    BesePassCharacterizationReject,
    BeseRejectCharacterizationAccept,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeseReport {
    pub checks: Vec<BeseCheck>,
    pub bese_pass: bool,
    pub certificate: Certificate,
    pub agreement: Agreement,
}

/// Whether the given points lie on an irreducible member of `|xs + yf|`.
fn on_irreducible_member(cfg: &PointConfig, x: i64, y: i64, subset: &[usize]) -> Result<bool> {
    if x > y {
        // (x - y)s + (a curve of degree y) is irreducible only for s itself.
        return Ok(x == 1 && y == 0 && subset.iter().all(|&i| matches!(cfg.point(i), PointSpec::OnSection(_))));
    }
    let d = y as u32;
    let m0 = (y - x) as u32;
    if m0 == 0 && subset.iter().any(|&i| matches!(cfg.point(i), PointSpec::OnSection(_))) {
        // A curve missing q0 never meets the exceptional curve over it.
        return Ok(false);
    }
    let conds = cfg.conditions(subset, m0);
    let member = irreducible_member_general(d, &conds)?;
    let Membership::Yes(f) = member else {
        return Ok(false);
    };
    if f.multiplicity_at(&cfg.q0) == m0 {
        return Ok(true);
    }
    // The exhibited member is too singular at q0; members of multiplicity
    // exactly m0 exist unless the whole system is more singular there, and
    // then irreducible ones are dense among them.
    let higher: Vec<MultCondition> = conds
        .iter()
        .filter(|c| !matches!(c.locus, Locus::InfNear { .. }) && c.locus.base() != &cfg.q0)
        .cloned()
        .chain(std::iter::once(MultCondition::point(&cfg.q0, m0 + 1)))
        .collect();
    let full = plane::system_general(d, &conds)?.dim;
    let high = plane::system_general(d, &higher)?.dim;
    Ok(high < full)
}

/// Evaluate the comparison criterion over the admissible `(x, y)` grid and
/// compare with the very-ampleness verdict.
pub fn bese_vs_paper(cfg: &PointConfig) -> Result<BeseReport> {
    let certificate = check_very_ample(cfg)?;
    let mu = cfg.mu() as i64;
    let mut checks = Vec::new();
    for x in 0..=4 {
        for y in 0..=3 {
            if x == 0 && y == 0 {
                continue;
            }
            let bound = bese_bound(x, y)?;
            let mut check = BeseCheck { x, y, bound, passes: true, violating_points: vec![] };
            if bound < mu && (x <= 1 || y >= x) {
                for subset in (1..=cfg.mu()).combinations(bound as usize + 1) {
                    if on_irreducible_member(cfg, x, y, &subset)? {
                        check.passes = false;
                        check.violating_points = subset;
                        break;
                    }
                }
            }
            checks.push(check);
        }
    }
    let bese_pass = checks.iter().all(|c| c.passes);
    let characterization_pass = certificate.verdict == Verdict::VeryAmple;
    let agreement = match (bese_pass, characterization_pass) {
        (true, false) => Agreement::BesePassCharacterizationReject,
        (false, true) => Agreement::BeseRejectCharacterizationAccept,
        _ => Agreement::Agree,
    };
    Ok(BeseReport { checks, bese_pass, certificate, agreement })
}

/// Re-check a certificate against a configuration: the verdict must be
/// reproduced and every witness must be confirmed independently.
pub fn verify_certificate(cfg: &PointConfig, cert: &Certificate) -> Result<()> {
    let fail = |msg: String| Err(Error::Precondition(format!("certificate rejected: {msg}")));
    let fresh = check(cfg, cert.level)?;
    if fresh.verdict != cert.verdict || fresh.condition != cert.condition {
        return fail(format!(
            "recomputed {:?}/{} but the certificate states {:?}/{}",
            fresh.verdict, fresh.condition, cert.verdict, cert.condition
        ));
    }
    if !cert.verdict.is_rejection() {
        if cert.witness_class.is_some() {
            return fail("a positive verdict carries no witness class".into());
        }
        return Ok(());
    }
    let mu = cfg.mu();
    let Some(class) = &cert.witness_class else {
        return fail("rejection without a witness class".into());
    };
    if class.mu() != mu {
        return fail(format!("witness lattice has {} points, configuration {mu}", class.mu()));
    }
    let pts = &cert.witness_points;
    if pts.iter().any(|&i| i == 0 || i > mu) {
        return fail("witness point index out of range".into());
    }
    let target = match cert.paired_with {
        Some(PairedWith::L) => cfg.polarization(),
        Some(PairedWith::AntiK) => DivisorClass::anticanonical(mu),
        None => return fail("missing pairing target".into()),
    };
    let pairing = class.intersect(&target)?;
    if Some(pairing) != cert.pairing {
        return fail(format!("pairing recomputes to {pairing}, certificate states {:?}", cert.pairing));
    }
    let proper = |i: usize| match cfg.point(i) {
        PointSpec::Proper(p) => Some(p.clone()),
        PointSpec::OnSection(_) => None,
    };
    let incidence_ok = match cert.condition {
        ConditionTag::FourOnLine => {
            let ps: Option<Vec<_>> = pts.iter().map(|&i| proper(i)).collect();
            match ps {
                Some(ps) if ps.len() >= 4 => {
                    let l = line_through(&ps[0], &ps[1])?;
                    !l.vanishes_at(&cfg.q0)
                        && ps.iter().skip(2).all(|p| collinear(&ps[0], &ps[1], p))
                        && *class == with_points(mu, 1, 0, pts)
                }
                _ => false,
            }
        }
        ConditionTag::SixOnConicThroughQ0 => {
            pts.len() >= 6
                && irreducible_member_general(2, &cfg.conditions(pts, 1))?.is_yes()
                && *class == with_points(mu, 2, 1, pts)
        }
        ConditionTag::SevenOnConicMissingQ0 | ConditionTag::EightOnConicMissingQ0 => {
            let need = if cert.condition == ConditionTag::SevenOnConicMissingQ0 { 7 } else { 8 };
            pts.len() >= need
                && pts.iter().all(|&i| proper(i).is_some())
                && matches!(irreducible_member_general(2, &cfg.conditions(pts, 0))?,
                            Membership::Yes(f) if !f.vanishes_at(&cfg.q0))
                && *class == with_points(mu, 2, 0, pts)
        }
        ConditionTag::NodalCubic => {
            let nodes: Vec<usize> = (1..=mu).filter(|&i| class.m[i - 1] == 2).collect();
            nodes.len() == 1 && pts.len() == 9 && {
                let node = nodes[0];
                let through: Vec<usize> = pts.iter().copied().filter(|&i| i != node).collect();
                let mut conds = cfg.conditions(&through, 1);
                match proper(node) {
                    Some(p) => {
                        conds.push(MultCondition::point(&p, 2));
                        irreducible_member_general(3, &conds)?.is_yes()
                    }
                    None => false,
                }
            }
        }
        ConditionTag::TTooLarge => {
            pts.len() >= 2 && pts.iter().all(|&i| matches!(cfg.point(i), PointSpec::OnSection(_))) && *class == cfg.sigma()
        }
        ConditionTag::MuTooLarge => mu >= 8 && *class == cfg.polarization(),
        ConditionTag::None | ConditionTag::BeyondCharacterization => false,
    };
    if !incidence_ok {
        return fail(format!("the incidence {} does not hold for points {pts:?}", cert.condition));
    }
    let sign_ok = match (cert.paired_with, cert.condition) {
        (_, ConditionTag::MuTooLarge) => pairing <= 4,
        (Some(PairedWith::L), _) => pairing <= 0,
        (Some(PairedWith::AntiK), _) => pairing < 0,
        _ => false,
    };
    if !sign_ok {
        return fail(format!("pairing {pairing} has the wrong sign"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{Direction, PlanePoint};

    fn p(x: i64, y: i64) -> PointSpec {
        PointSpec::Proper(PlanePoint::from_i64(x, y, 1))
    }

    fn generic(mu: usize) -> PointConfig {
        let all = [p(1, 3), p(-2, 5), p(4, -1), p(3, 7), p(-5, -2), p(6, 1), p(2, -9), p(-7, 4), p(9, 2), p(5, -8), p(-3, -11)];
        PointConfig::genus2(all[..mu].to_vec())
    }

    #[test]
    fn four_collinear_rejected() {
        let cfg = PointConfig::genus2(vec![p(1, 1), p(2, 1), p(3, 1), p(-1, 1), p(4, 7)]);
        let c = check_ample(&cfg).unwrap();
        assert_eq!(c.verdict, Verdict::NotAmple);
        assert_eq!(c.condition, ConditionTag::FourOnLine);
        assert_eq!(c.witness_class.as_ref().unwrap().to_vec(), vec![1, 0, 1, 1, 1, 1, 0]);
        assert_eq!(c.pairing, Some(0));
        verify_certificate(&cfg, &c).unwrap();
    }

    #[test]
    fn two_on_section_rejected() {
        let cfg = PointConfig::genus2(vec![
            PointSpec::OnSection(Direction::from_i64(1, 0)),
            PointSpec::OnSection(Direction::from_i64(0, 1)),
            p(1, 1),
        ]);
        let c = check_ample(&cfg).unwrap();
        assert_eq!(c.verdict, Verdict::NotAmple);
        assert_eq!(c.condition, ConditionTag::TTooLarge);
        assert_eq!(c.pairing, Some(0));
        verify_certificate(&cfg, &c).unwrap();
    }

    #[test]
    fn generic_points_ample() {
        for mu in 0..=7 {
            let cfg = generic(mu);
            assert_eq!(check_ample(&cfg).unwrap().verdict, Verdict::Ample, "mu = {mu}");
            assert_eq!(check_very_ample(&cfg).unwrap().verdict, Verdict::VeryAmple, "mu = {mu}");
        }
        let c = check_very_ample(&generic(8)).unwrap();
        assert_eq!(c.verdict, Verdict::NotVeryAmple);
        assert_eq!(c.condition, ConditionTag::MuTooLarge);
        assert_eq!(check_ample(&generic(9)).unwrap().verdict, Verdict::Undecided);
    }

    #[test]
    fn special_configuration() {
        // seven points on the parabola y = x^2 + 1, which misses q0
        let cfg = PointConfig::genus2([0, 2, 3, -1, -2, -3, 4].iter().map(|&t| p(t, t * t + 1)).collect());
        assert_eq!(check_ample(&cfg).unwrap().verdict, Verdict::Ample);
        let c = check_very_ample(&cfg).unwrap();
        assert_eq!(c.verdict, Verdict::AmpleNotVeryAmple);
        assert_eq!(c.condition, ConditionTag::SevenOnConicMissingQ0);
        assert_eq!(c.pairing, Some(-1));
        verify_certificate(&cfg, &c).unwrap();
        let r = antik_nef_big(&cfg).unwrap();
        assert_eq!(r.nef, TriState::No);
        assert_eq!(r.witness.unwrap().pairing, -1);
        let b = bese_vs_paper(&cfg).unwrap();
        assert!(b.bese_pass);
        assert_eq!(b.agreement, Agreement::BesePassCharacterizationReject);
    }

    #[test]
    fn bese_values() {
        assert_eq!(bese_bound(1, 1).unwrap(), 3);
        assert_eq!(bese_bound(2, 2).unwrap(), 7);
        assert_eq!(bese_bound(1, 2).unwrap(), 5);
        assert_eq!(bese_bound(1, 3).unwrap(), 7);
        assert_eq!(bese_bound(0, 1).unwrap(), 1);
        assert!(bese_bound(0, 0).is_err());
        assert!(bese_bound(5, 1).is_err());
    }

    #[test]
    fn adjoint_classes() {
        let cfg = generic(0);
        let r = adjoint_positivity(&cfg, 1).unwrap();
        assert_eq!(r.verdict, Verdict::VeryAmple);
        assert_eq!(r.class, cfg.polarization());
        for mu in [0usize, 3, 7] {
            for m in 1..4 {
                let r = adjoint_positivity(&generic(mu), m).unwrap();
                assert_eq!(r.self_intersection, 8 - mu as i64 + 4 * m);
            }
        }
        assert!(adjoint_positivity(&cfg, 0).is_err());
    }

    #[test]
    fn wrong_genus() {
        let mut cfg = generic(2);
        cfg.genus = 3;
        assert_eq!(check_ample(&cfg), Err(Error::UnsupportedGenus(3)));
    }
}
