mod common;

use conicfib::arith::{format_rational, parse_rational, q, qf, Q};
use conicfib::config::random_config;
use conicfib::linalg::{det_rational, kernel_basis, rank_fraction_free, rank_rational};
use conicfib::poly::UPoly;
use conicfib::positivity::{check, check_ample, verify_certificate};
use conicfib::{Direction, DivisorClass, Level, PlanePoint, PointConfig, PointSpec, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn class(mu: usize) -> impl Strategy<Value = DivisorClass> {
    (-6i64..=6, -6i64..=6, prop::collection::vec(-4i64..=4, mu)).prop_map(|(a, m0, m)| DivisorClass::new(a, m0, m))
}

fn matrix() -> impl Strategy<Value = Vec<Vec<Q>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-4i64..=4).prop_map(q), c), r)
    })
}

fn roots() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-9i64..=9, 1i64..=4).prop_map(|(n, d)| qf(n, d)), 1..5)
}

/// Integer matrices with determinant 1 from products of elementary moves.
fn unimodular() -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6).prop_map(|moves| {
        let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for (i, j, k) in moves {
            if i != j {
                for c in 0..3 {
                    m[i][c] += k * m[j][c];
                }
            }
        }
        m
    })
}

fn transform(m: &[[i64; 3]; 3], p: &PlanePoint) -> PlanePoint {
    let c = p.coords();
    let img: Vec<Q> = (0..3).map(|i| (0..3).map(|j| q(m[i][j]) * &c[j]).sum()).collect();
    PlanePoint::new(img[0].clone(), img[1].clone(), img[2].clone()).unwrap()
}

fn transform_config(m: &[[i64; 3]; 3], cfg: &PointConfig) -> PointConfig {
    let pts = cfg
        .points
        .iter()
        .map(|s| match s {
            PointSpec::Proper(x) => PointSpec::Proper(transform(m, x)),
            PointSpec::OnSection(_) => unreachable!(),
        })
        .collect();
    PointConfig::new(2, transform(m, &cfg.q0), pts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_is_symmetric_and_bilinear(x in class(5), y in class(5), z in class(5), k in -3i64..=3) {
        prop_assert_eq!(x.intersect(&y).unwrap(), y.intersect(&x).unwrap());
        let lhs = (&(k * &x) + &y).intersect(&z).unwrap();
        prop_assert_eq!(lhs, k * x.intersect(&z).unwrap() + y.intersect(&z).unwrap());
    }

    #[test]
    fn adjunction_parity_holds(x in class(7)) {
        let k = DivisorClass::canonical(7);
        prop_assert_eq!((x.self_intersection() + x.intersect(&k).unwrap()).rem_euclid(2), 0);
        let _ = x.arithmetic_genus();
    }

    #[test]
    fn rational_text_round_trips(n in -10_000i64..10_000, d in 1i64..500) {
        let x = qf(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn rank_agrees_across_eliminations(m in matrix()) {
        let r = rank_rational(&m);
        prop_assert_eq!(r, rank_fraction_free(&m));
        let ncols = m[0].len();
        let ker = kernel_basis(&m, ncols);
        prop_assert_eq!(ker.len(), ncols - r);
        for v in &ker {
            for row in &m {
                let dot: Q = row.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert_eq!(dot, q(0));
            }
        }
        if m.len() == ncols {
            prop_assert_eq!(det_rational(&m) == q(0), r < ncols);
        }
    }

    #[test]
    fn polynomial_roots_are_recovered(rs in roots()) {
        let p = rs.iter().fold(UPoly::constant(q(1)), |acc, r| &acc * &UPoly::linear_root(r));
        let found = p.rational_roots();
        for r in &rs {
            prop_assert!(found.contains(r));
            prop_assert_eq!(p.eval(r), q(0));
        }
        let (quot, rem) = p.div_rem(&UPoly::linear_root(&rs[0]));
        prop_assert!(rem.is_zero());
        prop_assert_eq!(&quot * &UPoly::linear_root(&rs[0]), p.clone());
        let g = p.gcd(&p.derivative());
        prop_assert!(p.div_rem(&g).1.is_zero());
    }

    #[test]
    fn ampleness_is_projectively_invariant(seed in any::<u64>(), mu in 3usize..=7, m in unimodular()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = random_config(&mut rng, mu, 0, 3);
        let moved = transform_config(&m, &cfg);
        prop_assert_eq!(check_ample(&cfg).unwrap().verdict, check_ample(&moved).unwrap().verdict);
    }

    #[test]
    fn certificates_verify(seed in any::<u64>(), mu in 0usize..=9, t in 0usize..=1, height in 3i64..=5) {
        let t = t.min(mu);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = random_config(&mut rng, mu, t, height);
        for level in [Level::Ample, Level::VeryAmple] {
            let cert = check(&cfg, level).unwrap();
            prop_assert!(verify_certificate(&cfg, &cert).is_ok(), "{:?}", cert);
        }
    }

    #[test]
    fn configuration_json_round_trips(seed in any::<u64>(), mu in 0usize..=11, t in 0usize..=1) {
        let t = t.min(mu);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = random_config(&mut rng, mu, t, 50);
        let back = PointConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let cfg = common::special_config();
    let mut cert = check(&cfg, Level::VeryAmple).unwrap();
    assert_eq!(cert.verdict, Verdict::AmpleNotVeryAmple);
    assert!(verify_certificate(&cfg, &cert).is_ok());
    cert.witness_points.pop();
    assert!(verify_certificate(&cfg, &cert).is_err());

    let generic = common::generic(7);
    let mut fake = check(&cfg, Level::VeryAmple).unwrap();
    fake.pairing = Some(0);
    assert!(verify_certificate(&generic, &fake).is_err());
}

#[test]
fn on_section_points_can_be_rescaled() {
    let a = PointConfig::genus2(vec![PointSpec::OnSection(Direction::from_i64(2, 4)), common::p(1, 5)]);
    let b = PointConfig::genus2(vec![PointSpec::OnSection(Direction::from_i64(-1, -2)), common::p(1, 5)]);
    assert_eq!(a, b);
    assert_eq!(a.t(), 1);
}
