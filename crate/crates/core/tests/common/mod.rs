#![allow(dead_code)]

use conicfib::arith::{q, qf, Q};
use conicfib::linalg::rank_rational;
use conicfib::plane::{interpolation_matrix, linear_system_dim, Locus, MultCondition};
use conicfib::{Direction, DivisorClass, PlanePoint, PointConfig, PointSpec, SurfacePoint};

pub fn p(x: i64, y: i64) -> PointSpec {
    PointSpec::Proper(PlanePoint::from_i64(x, y, 1))
}

pub fn generic(mu: usize) -> PointConfig {
    let all = [p(1, 3), p(-2, 5), p(4, -1), p(3, 7), p(-5, -2), p(6, 1), p(2, -9), p(-7, 4), p(9, 2), p(5, -8), p(-3, -11)];
    PointConfig::genus2(all[..mu].to_vec())
}

/// Point of the nodal cubic `y^2 z = x^2 (x + z)` on the line of slope `t`
/// through the node.
pub fn cubic_point(t: &Q) -> PlanePoint {
    let x = t * t - q(1);
    let y = &x * t;
    PlanePoint::new(x, y, q(1)).unwrap()
}

/// Parameters of the six proper points of the worked configuration.
pub fn example_params() -> Vec<Q> {
    vec![q(2), q(-2), q(3), q(-3), qf(1, 2), qf(-1, 2)]
}

/// Seven points on the nodal cubic with its node at q0: six proper points
/// and the point of the section along the branch of slope 1.
pub fn example_config() -> PointConfig {
    let mut pts: Vec<PointSpec> = example_params().iter().map(|t| PointSpec::Proper(cubic_point(t))).collect();
    pts.push(PointSpec::OnSection(Direction::from_i64(1, 1)));
    PointConfig::genus2(pts)
}

/// Seven points on the parabola `y = x^2 + 1`, which misses q0.
pub fn special_config() -> PointConfig {
    PointConfig::genus2([0, 2, 3, -1, -2, -3, 4].iter().map(|&t| p(t, t * t + 1)).collect())
}

fn l_dot(mu: usize, a: i64, m0: i64, ms: &[i64]) -> i64 {
    let _ = mu;
    4 * a - 2 * m0 - ms.iter().sum::<i64>()
}

/// Conditions for `a h - m0 e0 - sum m_i e_i` to be effective. A point on
/// the section with `m_s > m0` is unloaded onto q0: a curve with
/// multiplicity `k` at q0 and `j` at the infinitely near point works iff
/// `k + j >= m0 + m_s`, and with `j <= k` that is the same as requiring
/// `ceil((m0+m_s)/2)` and `m0 + m_s - ceil(..)`.
fn effectivity_conditions(cfg: &PointConfig, m0: i64, ms: &[i64]) -> Vec<MultCondition> {
    let mut out = Vec::new();
    let mut q0_done = false;
    for (k, spec) in cfg.points.iter().enumerate() {
        if ms[k] == 0 {
            continue;
        }
        match spec {
            PointSpec::Proper(x) => out.push(MultCondition::point(x, ms[k] as u32)),
            PointSpec::OnSection(d) => {
                let total = m0 + ms[k];
                let base = (total + 1) / 2;
                let rest = total - base;
                q0_done = true;
                if rest == 0 {
                    out.push(MultCondition::point(&cfg.q0, base as u32));
                } else {
                    out.push(MultCondition {
                        locus: Locus::InfNear {
                            base: cfg.q0.clone(),
                            direction: d.clone(),
                            base_multiplicity: base as u32,
                        },
                        multiplicity: rest as u32,
                    });
                }
            }
        }
    }
    if !q0_done && m0 > 0 {
        out.push(MultCondition::point(&cfg.q0, m0 as u32));
    }
    out
}

fn effective(cfg: &PointConfig, a: i64, m0: i64, ms: &[i64]) -> bool {
    linear_system_dim(a as u32, &effectivity_conditions(cfg, m0, ms)).unwrap() >= 0
}

fn dfs(cfg: &PointConfig, a: i64, m0: i64, ms: &mut Vec<i64>, i: usize, target: i64) -> bool {
    let sum: i64 = ms.iter().sum();
    if sum >= target {
        return true;
    }
    let mu = ms.len();
    if i == mu || sum + 2 * ((mu - i) as i64) < target {
        return false;
    }
    for v in [2, 1] {
        ms[i] = v;
        if effective(cfg, a, m0, ms) && dfs(cfg, a, m0, ms, i + 1, target) {
            return true;
        }
    }
    ms[i] = 0;
    dfs(cfg, a, m0, ms, i + 1, target)
}

/// Brute-force ampleness: search classes with degree at most 4 and
/// multiplicities at most 2 for an effective one with `L.C <= 0`.
pub fn oracle_witness(cfg: &PointConfig) -> Option<DivisorClass> {
    let mu = cfg.mu();
    // classes e0 - sum of on-section e_i: effective exactly for subsets of
    // the points on the section
    let on = cfg.on_section_indices();
    if on.len() >= 2 {
        let mut m = vec![0; mu];
        for &i in &on {
            m[i - 1] = 1;
        }
        return Some(DivisorClass::new(0, -1, m));
    }
    for a in 1..=4i64 {
        for m0 in 0..=a.min(2) {
            let target = l_dot(mu, a, m0, &vec![0; mu]);
            let mut ms = vec![0; mu];
            if dfs(cfg, a, m0, &mut ms, 0, target) {
                return Some(DivisorClass::new(a, m0, ms));
            }
        }
    }
    None
}

/// Rank of the osculating map at a point of an exceptional curve over q0 or
/// a proper point, from a plane interpolation count: sections vanishing to
/// order three there are quartics with one more order of contact in that
/// direction, written as an unloaded infinitely near condition.
pub fn rank_by_interpolation(cfg: &PointConfig, x: &SurfacePoint) -> Option<i64> {
    let all: Vec<usize> = (1..=cfg.mu()).collect();
    let mut conds = cfg.conditions(&all, 2);
    let n = 11 - cfg.mu() as i64;
    let extra = match x {
        SurfacePoint::Plane { point } => MultCondition::point(point, 3),
        SurfacePoint::Exceptional { center: 0, direction } => MultCondition {
            locus: Locus::InfNear { base: cfg.q0.clone(), direction: direction.clone(), base_multiplicity: 3 },
            multiplicity: 2,
        },
        SurfacePoint::Exceptional { center, direction } => match cfg.point(*center) {
            PointSpec::Proper(b) => MultCondition {
                locus: Locus::InfNear { base: b.clone(), direction: direction.clone(), base_multiplicity: 2 },
                multiplicity: 2,
            },
            PointSpec::OnSection(_) => return None,
        },
    };
    conds.push(extra);
    let rows = interpolation_matrix(4, &conds);
    let dim = 15 - 1 - rank_rational(&rows) as i64;
    Some(n - dim)
}
