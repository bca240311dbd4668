//! Shared fixtures for the benchmarks.

use conicfib::arith::{q, qf, Q};
use conicfib::{Direction, PlanePoint, PointConfig, PointSpec};

fn cubic_point(t: &Q) -> PointSpec {
    let x = t * t - q(1);
    let y = &x * t;
    PointSpec::Proper(PlanePoint::new(x, y, q(1)).unwrap())
}

/// Six points on the nodal cubic with node at q0, plus the branch direction
/// of slope 1 on the section.
pub fn nodal_cubic_config() -> PointConfig {
    let mut pts: Vec<PointSpec> =
        [q(2), q(-2), q(3), q(-3), qf(1, 2), qf(-1, 2)].iter().map(cubic_point).collect();
    pts.push(PointSpec::OnSection(Direction::from_i64(1, 1)));
    PointConfig::genus2(pts)
}

/// The first `mu` of a fixed list of points with no special position.
pub fn generic_config(mu: usize) -> PointConfig {
    let all = [(1, 3), (-2, 5), (4, -1), (3, 7), (-5, -2), (6, 1), (2, -9), (-7, 4)];
    PointConfig::genus2(all[..mu].iter().map(|&(x, y)| PointSpec::Proper(PlanePoint::from_i64(x, y, 1))).collect())
}
