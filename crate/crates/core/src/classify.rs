//! Numerical invariants of polarized conic fibrations of genus `g` and the
//! bounds on the number of blown-up points for each positivity level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::HirzebruchClass;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub minimal: bool,
    /// Hirzebruch invariant of the minimal model; 1 for blow-ups of F_1.
    pub e: u32,
    pub mu: usize,
    pub g: i64,
    pub d: i64,
    #[serde(rename = "Ksq")]
    pub ksq: i64,
    pub expected_h0: i64,
    #[serde(rename = "expected_N")]
    pub expected_n: i64,
    /// Polarization `2s + (g+e+1)f` on a minimal model.
    pub class: Option<HirzebruchClass>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundLevel {
    Ample,
    AmpleSpanned,
    VeryAmple,
}

/// A bound on `mu`, or the admission that none is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MuBound {
    Known { bound: usize },
    Undecided,
}

impl MuBound {
    pub fn value(self) -> Option<usize> {
        match self {
            MuBound::Known { bound } => Some(bound),
            MuBound::Undecided => None,
        }
    }
}

fn check_genus(g: i64) -> Result<()> {
    if g < 1 {
        return Err(Error::UnsupportedGenus(g));
    }
    Ok(())
}

/// The minimal models `(F_e, 2s + (g+e+1)f)`, `0 <= e <= g`.
pub fn enumerate_minimal(g: i64) -> Result<Vec<ClassificationEntry>> {
    check_genus(g)?;
    Ok((0..=g as u32)
        .map(|e| {
            let class = HirzebruchClass::new(e, 2, g + e as i64 + 1);
            let d = class.self_intersection();
            let h0 = 3 * (g + 2);
            ClassificationEntry {
                minimal: true,
                e,
                mu: 0,
                g,
                d,
                ksq: 8,
                expected_h0: h0,
                expected_n: h0 - 1,
                class: Some(class),
            }
        })
        .collect())
}

/// Invariants of F_1 blown up at `mu` points with `L = 2s + (g+2)f - sum e_i`.
pub fn invariants(g: i64, mu: usize) -> Result<ClassificationEntry> {
    check_genus(g)?;
    let max = mu_bound(g, BoundLevel::Ample)?.value().unwrap();
    if mu > max {
        return Err(Error::Domain(format!("mu = {mu} exceeds 4g + 3 = {max}")));
    }
    let mu_i = mu as i64;
    let h0 = 3 * (g + 2) - mu_i;
    Ok(ClassificationEntry {
        minimal: false,
        e: 1,
        mu,
        g,
        d: 4 * (g + 1) - mu_i,
        ksq: 8 - mu_i,
        expected_h0: h0,
        expected_n: h0 - 1,
        class: None,
    })
}

/// Largest `mu` compatible with the given positivity level.
pub fn mu_bound(g: i64, level: BoundLevel) -> Result<MuBound> {
    check_genus(g)?;
    let bound = match level {
        BoundLevel::Ample => 4 * g + 3,
        BoundLevel::AmpleSpanned if g == 1 => 6,
        BoundLevel::AmpleSpanned => 4 * g + 1,
        BoundLevel::VeryAmple => match g {
            1 => 4 * 2 - 3,
            2 => 4 * 3 - 5,
            3 => 9,
            _ => return Ok(MuBound::Undecided),
        },
    };
    Ok(MuBound::Known { bound: bound as usize })
}

/// `h^0(2s + beta f)` on F_e, for `beta > 2e`.
pub fn h0_conic_bundle(e: i64, beta: i64) -> Result<i64> {
    if beta <= 2 * e {
        return Err(Error::Precondition(format!("needs beta > 2e, got beta = {beta}, e = {e}")));
    }
    Ok(3 * (beta - e + 1))
}
