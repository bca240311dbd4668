//! One line per acceptance criterion. Every criterion must pass except
//! those listed in `KNOWN_RED`, whose analysis lives with the project notes;
//! the test fails if the set of failures changes in either direction.

mod common;

use std::collections::BTreeSet;

use conicfib::arith::{format_rational, q, Q};
use conicfib::classify::invariants;
use conicfib::config::{elm_step, normalize_to_f1, random_config};
use conicfib::lines::{find_transverse_lines, line_numbers, LineKind};
use conicfib::osculation::{line_in_inflectional_locus, rational_drops, Osculator};
use conicfib::picard::standard_classes;
use conicfib::plane::{linear_system_dim, MultCondition};
use conicfib::positivity::{bese_vs_paper, check_ample, check_very_ample, Agreement};
use conicfib::{
    ConditionTag, Direction, ElmDatum, FeClass, HirzebruchClass, LineClass, PointConfig, PointSpec,
    SurfacePoint, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const KNOWN_RED: &[u32] = &[6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn lattice() -> Outcome {
    for mu in 0..=11usize {
        let s = standard_classes(2, mu).unwrap();
        let ok = s.l.self_intersection() == 12 - mu as i64
            && s.k.self_intersection() == 8 - mu as i64
            && s.l == &s.anti_k + &s.f;
        if !ok {
            return outcome(false, format!("mu = {mu}"));
        }
    }
    outcome(true, "mu = 0..11: L^2 = 12 - mu, K^2 = 8 - mu, L = -K + F")
}

fn planted() -> Outcome {
    let mut bad = Vec::new();
    let four = PointConfig::genus2(vec![p(1, 1), p(2, 1), p(3, 1), p(-1, 1), p(4, 7)]);
    let c = check_ample(&four).unwrap();
    if c.verdict != Verdict::NotAmple || c.condition != ConditionTag::FourOnLine || c.pairing != Some(0) {
        bad.push("four collinear");
    }
    let six = PointConfig::genus2([1, 2, 3, -1, -2, -3].iter().map(|&t| p(t, t * t)).collect());
    let c = check_ample(&six).unwrap();
    if c.verdict != Verdict::NotAmple || c.condition != ConditionTag::SixOnConicThroughQ0 || c.pairing != Some(0) {
        bad.push("six on a conic through q0");
    }
    let two = PointConfig::genus2(vec![
        PointSpec::OnSection(Direction::from_i64(1, 0)),
        PointSpec::OnSection(Direction::from_i64(0, 1)),
        p(1, 1),
    ]);
    if check_ample(&two).unwrap().verdict != Verdict::NotAmple {
        bad.push("t = 2");
    }
    let c = check_very_ample(&special_config()).unwrap();
    if c.verdict != Verdict::AmpleNotVeryAmple || c.pairing != Some(-1) {
        bad.push("seven on a conic missing q0");
    }
    if check_very_ample(&generic(8)).unwrap().verdict != Verdict::NotVeryAmple {
        bad.push("mu = 8");
    }
    if bad.is_empty() {
        outcome(true, "five planted violations give the exact verdicts and pairings")
    } else {
        outcome(false, format!("wrong verdict: {bad:?}"))
    }
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut rejected, mut disagreements) = (0, Vec::new());
    let n = 500;
    for k in 0..n {
        let mu = rng.gen_range(0..=7);
        let t = if mu > 0 { rng.gen_range(0..=1) } else { 0 };
        let height = rng.gen_range(2..=3);
        let cfg = random_config(&mut rng, mu, t, height);
        let verdict = check_ample(&cfg).unwrap().verdict;
        let witness = oracle_witness(&cfg);
        if witness.is_some() {
            rejected += 1;
        }
        if (verdict == Verdict::Ample) != witness.is_none() {
            disagreements.push(k);
        }
    }
    let ex = check_ample(&example_config()).unwrap().verdict == Verdict::Ample && oracle_witness(&example_config()).is_none();
    // degenerate positions are rare at random, so the planted ones are added
    let planted = [
        PointConfig::genus2(vec![p(1, 1), p(2, 1), p(3, 1), p(-1, 1), p(4, 7)]),
        PointConfig::genus2([1, 2, 3, -1, -2, -3].iter().map(|&t| p(t, t * t)).collect()),
        PointConfig::genus2(vec![p(1, 1), p(2, 1), p(3, 1), p(-1, 1)]),
        PointConfig::genus2(vec![
            PointSpec::OnSection(Direction::from_i64(1, 0)),
            p(1, 1),
            p(2, 4),
            p(-1, 1),
            p(-2, 4),
            p(3, 9),
        ]),
        special_config(),
    ];
    let planted_agree = planted
        .iter()
        .filter(|c| (check_ample(c).unwrap().verdict == Verdict::Ample) == oracle_witness(c).is_none())
        .count();
    outcome(
        disagreements.is_empty() && ex && planted_agree == planted.len(),
        format!(
            "{n} configurations ({rejected} not ample), disagreements {disagreements:?}; planted agree {planted_agree}/{}; worked example agrees: {ex}",
            planted.len()
        ),
    )
}

fn bese() -> Outcome {
    let special = bese_vs_paper(&special_config()).unwrap();
    let special_ok = special.bese_pass && special.agreement == Agreement::BesePassCharacterizationReject;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut discrepancies = 0;
    for _ in 0..100 {
        let t = rng.gen_range(0..=1);
        let cfg = random_config(&mut rng, 7, t, 40);
        if bese_vs_paper(&cfg).unwrap().agreement != Agreement::Agree {
            discrepancies += 1;
        }
    }
    outcome(
        special_ok && discrepancies == 0,
        format!("special configuration Bese-pass/characterization-reject: {special_ok}; generic discrepancies: {discrepancies}/100"),
    )
}

fn planted_line(cfg: &PointConfig, kind: LineKind) -> bool {
    let Ok(ls) = find_transverse_lines(cfg) else {
        return false;
    };
    if ls.len() != 1 || ls[0].kind != kind {
        return false;
    }
    let n = line_numbers(cfg, &ls[0]).unwrap();
    n.degree == 1 && n.self_intersection == -2 && n.anticanonical == 0
}

fn transverse() -> Outcome {
    let mut failed = Vec::new();
    let mut a: Vec<PointSpec> = generic(6).points;
    a.push(PointSpec::OnSection(Direction::from_i64(1, 1)));
    if !planted_line(&PointConfig::genus2(a), LineKind::TransverseA) {
        failed.push("a");
    }
    let b = PointConfig::genus2(vec![p(1, 1), p(2, 1), p(-3, 1), p(4, -7), p(-5, -2), p(3, 8), p(-6, 5)]);
    if !planted_line(&b, LineKind::TransverseB) {
        failed.push("b");
    }
    let mut c: Vec<PointSpec> = [1, 2, -1, -2, 3].iter().map(|&t| p(t, t * t)).collect();
    c.extend([p(4, -7), p(-5, -2)]);
    if !planted_line(&PointConfig::genus2(c), LineKind::TransverseC) {
        failed.push("c");
    }
    let d = PointConfig::genus2([2, 3, 4, 5, 6, 7, 8].iter().map(|&t| PointSpec::Proper(cubic_point(&q(t)))).collect());
    if !planted_line(&d, LineKind::TransverseD) {
        failed.push("d");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut with_lines = 0;
    for _ in 0..20 {
        let cfg = random_config(&mut rng, 7, 0, 1000);
        if check_very_ample(&cfg).unwrap().verdict == Verdict::VeryAmple && !find_transverse_lines(&cfg).unwrap().is_empty() {
            with_lines += 1;
        }
    }
    let f2 = find_transverse_lines(&PointConfig::minimal(2, 2)).unwrap();
    let f2_ok = f2.len() == 1 && f2[0].cls == LineClass::Hirzebruch(HirzebruchClass::new(2, 1, 0));
    outcome(
        failed.is_empty() && with_lines == 0 && f2_ok,
        format!("planted cases failing: {failed:?}; generic configurations with lines: {with_lines}/20; F_2 section: {f2_ok}"),
    )
}

fn fmt_params(v: &[Q]) -> String {
    let s: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", s.join(", "))
}

fn example() -> Outcome {
    let cfg = example_config();
    let mut notes = Vec::new();
    let mut hard_ok = true;
    let va = check_very_ample(&cfg).unwrap().verdict == Verdict::VeryAmple;
    let inv = invariants(2, 7).unwrap();
    let osc = Osculator::new(&cfg).unwrap();
    let dn = inv.d == 5 && osc.n() == 4 && cfg.polarization().self_intersection() == 5;
    hard_ok &= va && dn;
    let lines = find_transverse_lines(&cfg).unwrap();
    let s = lines.iter().find(|r| r.kind == LineKind::TransverseA);
    let c = lines.iter().find(|r| r.kind == LineKind::TransverseD);
    hard_ok &= s.is_some() && c.is_some();
    let (Some(s), Some(c)) = (s, c) else {
        return outcome(false, "missing a transverse line");
    };
    let rc = line_in_inflectional_locus(&cfg, c, 0).unwrap();
    let rs = line_in_inflectional_locus(&cfg, s, 0).unwrap();
    hard_ok &= !rc.contained && !rs.contained && rc.generic_rank == 5;
    let dc = rational_drops(&rc);
    let ds = rational_drops(&rs);
    let expected = vec![q(-1), q(1)];
    let contains_y = expected.iter().all(|t| dc.contains(t) && ds.contains(t));
    hard_ok &= contains_y;
    let exactly = dc == expected && ds == expected && rc.drops.len() == 2 && rs.drops.len() == 2;

    // y1 = C meets the section's transform, y2 and y3 lie on e_7
    let y = [
        SurfacePoint::exceptional(0, Direction::from_i64(-1, 1)),
        rc.drops.iter().find(|d| d.parameter.as_rational() == Some(&q(1))).and_then(|d| d.point.clone()).unwrap(),
        SurfacePoint::exceptional(7, Direction::from_i64(0, 1)),
    ];
    let ranks: Vec<usize> = y.iter().map(|x| osc.rank_at(x).unwrap()).collect();
    hard_ok &= ranks.iter().all(|&r| r < 5);
    hard_ok &= rank_by_interpolation(&cfg, &y[0]) == Some(ranks[0] as i64);

    // every extra drop on C is a point of some e_i, where the interpolation
    // count confirms a section vanishing to order three
    let mut extra_confirmed = 0;
    for d in rc.drops.iter().filter(|d| !expected.contains(d.parameter.as_rational().unwrap_or(&q(99)))) {
        let pt = d.point.as_ref().unwrap();
        if let Some(r) = rank_by_interpolation(&cfg, pt) {
            if r == d.rank as i64 && r < 5 {
                extra_confirmed += 1;
            }
        }
    }
    notes.push(format!("drops on C {} and on s~ {}", fmt_params(&dc), fmt_params(&ds)));
    notes.push(format!("ranks at y1,y2,y3 {ranks:?}"));
    notes.push(format!("extra drops on C confirmed by interpolation: {extra_confirmed}"));
    let pass = hard_ok && exactly;
    if hard_ok && !exactly {
        notes.push("very ample, d = 5, N = 4, both lines, not contained, y1..y3 drop: all hold; the 'exactly {y1,y2}/{y1,y3}' clause does not".into());
    }
    outcome(pass, notes.join("; "))
}

fn elm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..100 {
        let mu = rng.gen_range(1..=6);
        let e = rng.gen_range(0..=3u32);
        let flags: Vec<bool> = (0..mu).map(|_| rng.gen_bool(0.4)).collect();
        let mut d = ElmDatum::new(e, flags);
        let mut maps = Vec::new();
        let mut es = vec![d.e];
        for _ in 0..rng.gen_range(1..=6) {
            let c = rng.gen_range(0..mu);
            if let Ok((next, m)) = elm_step(&d, c) {
                maps.push(m);
                d = next;
                es.push(d.e);
            }
        }
        let probe: Vec<FeClass> = (0..5)
            .map(|_| {
                FeClass::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5), (0..mu).map(|_| rng.gen_range(-3..=3)).collect())
            })
            .collect();
        for x in &probe {
            let mut y = x.clone();
            for m in &maps {
                y = m.apply(&y).unwrap();
            }
            for m in maps.iter().rev() {
                y = m.inverse().apply(&y).unwrap();
            }
            if &y != x {
                bad += 1;
            }
            for z in &probe {
                let mut xx = x.clone();
                let mut zz = z.clone();
                let before = x.intersect(z, es[0]).unwrap();
                for (k, m) in maps.iter().enumerate() {
                    xx = m.apply(&xx).unwrap();
                    zz = m.apply(&zz).unwrap();
                    if xx.intersect(&zz, es[k + 1]).unwrap() != before {
                        bad += 1;
                    }
                }
            }
        }
    }
    let mut degree_bad = 0;
    for k in 0..50 {
        let t = k % 2;
        let cfg = random_config(&mut rng, 1 + k % 7, t, 10);
        let mu = cfg.mu();
        let before = cfg.sigma().intersect(&cfg.polarization()).unwrap();
        if before != 2 - cfg.t() as i64 {
            degree_bad += 1;
        }
        let mut d = ElmDatum::from_config(&cfg);
        let mut l = FeClass::polarization(1, 2, mu);
        for _ in 0..3 {
            let c = rng.gen_range(0..mu);
            if let Ok((next, m)) = elm_step(&d, c) {
                l = m.apply(&l).unwrap();
                d = next;
            }
        }
        let (nd, maps) = normalize_to_f1(&d).unwrap();
        for m in &maps {
            l = m.apply(&l).unwrap();
        }
        if nd.e != 1 || nd.section_class().intersect(&l, 1).unwrap() != 2 - nd.t() as i64 {
            degree_bad += 1;
        }
    }
    outcome(
        bad == 0 && degree_bad == 0,
        format!("100 chains: {bad} identity/isometry failures; sigma.L = 2 - t failures: {degree_bad}/50"),
    )
}

fn osculation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut checked, mut mismatches, mut generic_bad) = (0, 0, 0);
    let mut configs = 0;
    while checked < 200 {
        let t = rng.gen_range(0..=1);
        let cfg = random_config(&mut rng, 7, t, 30);
        if check_very_ample(&cfg).unwrap().verdict != Verdict::VeryAmple {
            continue;
        }
        configs += 1;
        let mut osc = Osculator::new(&cfg).unwrap();
        if osc.generic_rank(configs).unwrap().rank != 5 {
            generic_bad += 1;
        }
        let all: Vec<usize> = (1..=7).collect();
        for x in conicfib::osculation::random_plane_points(&cfg, 20, configs) {
            let r = osc.rank_at(&SurfacePoint::plane(x.clone())).unwrap() as i64;
            let mut conds = cfg.conditions(&all, 2);
            conds.push(MultCondition::point(&x, 3));
            let dim = linear_system_dim(4, &conds).unwrap();
            if r != osc.n() as i64 - dim || r > 5 {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    outcome(
        mismatches == 0 && generic_bad == 0,
        format!("{checked} points on {configs} configurations: {mismatches} mismatches; generic rank != 5 on {generic_bad}"),
    )
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "lattice suite", lattice),
        (2, "planted violations", planted),
        (3, "oracle equivalence", oracle),
        (4, "Bese discrepancy", bese),
        (5, "transverse line cases", transverse),
        (6, "worked nodal-cubic example", example),
        (7, "elm involution", elm),
        (8, "osculation consistency", osculation),
    ];
    let mut failed = BTreeSet::new();
    for (n, name, f) in criteria {
        let o = f();
        println!("criterion {n} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.insert(n);
        }
    }
    let known: BTreeSet<u32> = KNOWN_RED.iter().copied().collect();
    if failed != known {
        eprintln!("failing criteria {failed:?} differ from the documented ones {known:?}");
        std::process::exit(1);
    }
    println!("acceptance: failures match the documented set {known:?}");
}
