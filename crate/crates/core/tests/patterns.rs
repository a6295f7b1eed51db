use boxgt::constructions::*;
use boxgt::geometry::Config;
use boxgt::patterns::*;
use boxgt::setsystem::{SubsetMode, VerifyOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn square_sweep() -> impl Iterator<Item = (usize, usize)> {
    (1..=5).flat_map(|p| (1..=5).map(move |q| (p, q)))
}

#[test]
fn z_constant_is_the_smallest_that_works_up_to_five_by_five() {
    let mut needed = 0u128;
    for (p, q) in square_sweep() {
        let z = brute_pattern_free_max(&[p, q], PatternKind::ZShape).unwrap() as u128;
        needed = needed.max(z.div_ceil((p + q) as u128));
    }
    assert_eq!(needed, C_Z);
}

#[test]
fn oracle_values() {
    assert_eq!(
        brute_pattern_free_max(&[2, 2], PatternKind::InducedRectangle).unwrap(),
        3
    );
    let three = brute_pattern_free_max(&[3, 3], PatternKind::InducedRectangle).unwrap();
    assert_eq!(three, 6);
    assert!(three as u128 <= weight(&[3, 3], Scheme::Zar).unwrap());
    assert_eq!(weight(&[3, 3], Scheme::Zar).unwrap(), 9);
    assert_eq!(brute_pattern_free_max(&[5, 5], PatternKind::ZShape).unwrap(), 13);
    assert_eq!(brute_pattern_free_max(&[3, 3, 3], PatternKind::Star(3)).unwrap(), 15);
    let star2 = brute_pattern_free_max(&[2, 2], PatternKind::Star(2)).unwrap();
    assert_eq!(star2, 2);
    assert!(star2 as u128 <= weight(&[2, 2], Scheme::Star).unwrap());
}

#[test]
fn oracle_is_dominated_by_weights() {
    for (p, q) in square_sweep() {
        for (kind, scheme) in [
            (PatternKind::InducedRectangle, Scheme::Zar),
            (PatternKind::ZShape, Scheme::ZShape),
            (PatternKind::Star(2), Scheme::Star),
        ] {
            let brute = brute_pattern_free_max(&[p, q], kind).unwrap() as u128;
            assert!(
                brute <= weight(&[p as u64, q as u64], scheme).unwrap(),
                "{kind:?} {p}x{q}"
            );
        }
    }
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                let brute = brute_pattern_free_max(&[a, b, c], PatternKind::Star(3)).unwrap() as u128;
                assert!(brute <= weight(&[a as u64, b as u64, c as u64], Scheme::Star).unwrap());
            }
        }
    }
}

#[test]
fn oracle_budget_is_enforced() {
    assert!(matches!(
        brute_pattern_free_max(&[4, 4, 2], PatternKind::Star(3)),
        Err(boxgt::Error::Budget { .. })
    ));
    assert!(brute_pattern_free_max(&[3, 3], PatternKind::Star(3)).is_err());
}

fn random_points(rng: &mut ChaCha8Rng, count: usize, side: i64, d: usize) -> Vec<GridPoint> {
    (0..count)
        .map(|_| (0..d).map(|_| rng.gen_range(1..=side)).collect())
        .collect()
}

#[test]
fn coverings_are_valid_and_within_their_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, k) in [(8u64, 2u64), (27, 3)] {
        let hard = hard_instance(k);
        let random = random_points(&mut rng, n as usize, n as i64, 2);
        for v in [vec![], hard.clone(), random] {
            for scheme in [Scheme::Zar, Scheme::ZShape, Scheme::Star] {
                let cov = cover(n, 2, &v, scheme).unwrap();
                let report = covering_check(&cov, &v).unwrap().unwrap();
                assert_eq!(report.total, report.weights.iter().sum::<u128>());
                assert!(report.total <= cover_bound(n, 2, v.len(), scheme), "{scheme:?} n = {n}");
            }
        }
        let star = random_points(&mut rng, 2 * n as usize, n as i64, 3);
        for v in [vec![], star] {
            let cov = cover(n, 3, &v, Scheme::Star).unwrap();
            let report = covering_check(&cov, &v).unwrap().unwrap();
            assert!(report.total <= cover_bound(n, 3, v.len(), Scheme::Star));
        }
    }
}

#[test]
fn hard_instance_covering_at_twenty_seven() {
    let v = hard_instance(3);
    assert_eq!(v.len(), 27);
    let cov = cover(27, 2, &v, Scheme::Zar).unwrap();
    let report = covering_check(&cov, &v).unwrap().unwrap();
    assert!(report.total <= 4 * 3u128.pow(5));
    // every point lies on a tile boundary, so no tile is split
    assert_eq!(cov.boxes().len(), 27);
}

#[test]
fn too_many_points_are_rejected() {
    let v: Vec<GridPoint> = (1..=9).map(|i| vec![i % 8 + 1, i / 8 + 1]).collect();
    assert!(cover(8, 2, &v, Scheme::Zar).is_err());
    assert!(cover(8, 2, &[vec![9, 1]], Scheme::Zar).is_err());
    assert!(cover(8, 3, &[], Scheme::Zar).is_err());
}

#[test]
fn split_axis_is_configurable() {
    let v = vec![vec![5, 2]];
    let opts = CoverOptions { split_axis: 1 };
    let cov = cover_with(27, 2, &v, Scheme::Zar, &opts).unwrap();
    assert_eq!(cov.boxes().len(), 28);
    let split: Vec<&GridBox> = cov
        .boxes()
        .iter()
        .filter(|b| b.lo[0] == 1 && b.lo[1] <= 2 && b.hi[1] <= 3)
        .collect();
    assert_eq!(split.len(), 2);
    assert!(covering_check(&cov, &v).unwrap().is_ok());
}

fn verified_library() -> Vec<Config> {
    let base = single_defective_grid(3).unwrap();
    vec![
        grid_lines(2, 2).unwrap(),
        grid_lines(3, 2).unwrap(),
        embed_grid_lines_2d(3, 3).unwrap(),
        embed_grid_lines_2d(2, 4).unwrap(),
        single_defective_grid(4).unwrap(),
        disjoint_boxes(4, 2).unwrap(),
        long_rect_step(&base, 2).unwrap(),
        long_rect_step(&base, 3).unwrap(),
        long_rect_step(&long_rect_step(&base, 1).unwrap(), 1).unwrap(),
        long_rect_step(&hyperplane_config(2, 2, 5).unwrap(), 1).unwrap(),
        disjoint_boxes(5, 3).unwrap(),
    ]
}

#[test]
fn separability_implies_stabbing() {
    let opts = VerifyOptions::default();
    let (mut two, mut three, mut semi) = (0, 0, 0);
    for c in verified_library() {
        let sys = c.induce().unwrap();
        let m = sys.item_count();
        let sep = |t: usize| m > t && sys.verify_separable(t, SubsetMode::Exactly, &opts).unwrap().holds();
        if c.dim() == 2 && sep(2) {
            assert!(stabs_config(&c, PatternKind::InducedRectangle).unwrap().holds());
            two += 1;
        }
        if c.dim() == 2 && sep(3) {
            assert!(stabs_config(&c, PatternKind::ZShape).unwrap().holds());
            three += 1;
        }
        let d = c.dim();
        if m > d && sys.verify_disjunct(d, &opts).unwrap().holds() {
            assert!(stabs_config(&c, PatternKind::Star(d)).unwrap().holds());
            semi += 1;
        }
    }
    assert!(two >= 4 && three >= 2 && semi >= 3, "{two} {three} {semi}");
}

#[test]
fn non_separable_grid_is_not_stabbed() {
    let c = grid_lines(2, 2).unwrap();
    assert!(!stabs_config(&c, PatternKind::InducedRectangle).unwrap().holds());
}

#[test]
fn pigeonhole_holds_for_stabbed_configs() {
    for c in verified_library().into_iter().filter(|c| c.dim() == 2) {
        let grid = c.compress_to_grid().unwrap();
        let points = grid.points_i64().unwrap();
        let n = (4 * c.boxes().len()) as u64;
        let corners: Vec<GridPoint> = grid
            .boxes()
            .iter()
            .flat_map(|b| b.corners())
            .map(|p| p.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        let mut v = corners.clone();
        v.sort();
        v.dedup();
        if v.len() as u64 > n {
            continue;
        }
        let cov = cover(n, 2, &v, Scheme::Zar).unwrap();
        let report = covering_check(&cov, &v).unwrap().unwrap();
        match pigeonhole_check(&points, &cov, &report).unwrap() {
            Pigeonhole::WithinBound { .. } | Pigeonhole::PatternInBox { .. } => {}
            other => panic!("weights undercount: {other:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covers_are_always_valid(
        k in 1u64..=3,
        seed in any::<u64>(),
        scheme in prop_oneof![Just(Scheme::Zar), Just(Scheme::ZShape), Just(Scheme::Star)],
        fill in 0usize..=100,
    ) {
        let n = k * k * k;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = (n as usize * fill) / 100;
        let v = random_points(&mut rng, count, n as i64, 2);
        let cov = cover(n, 2, &v, scheme).unwrap();
        let report = covering_check(&cov, &v).unwrap();
        prop_assert!(report.is_ok());
        prop_assert!(report.unwrap().total <= cover_bound(n, 2, v.len(), scheme));
    }

    #[test]
    fn found_patterns_have_the_right_shape(pts in proptest::collection::vec((1i64..6, 1i64..6), 0..16)) {
        let pts: Vec<GridPoint> = pts.iter().map(|&(x, y)| vec![x, y]).collect();
        if let Some(r) = find_pattern(&pts, PatternKind::InducedRectangle).unwrap() {
            prop_assert_eq!(r[0][0], r[1][0]);
            prop_assert_eq!(r[2][0], r[3][0]);
            prop_assert_eq!(r[0][1], r[2][1]);
            prop_assert_eq!(r[1][1], r[3][1]);
            prop_assert!(r[0][0] < r[2][0] && r[0][1] < r[1][1]);
        }
        if let Some(z) = find_pattern(&pts, PatternKind::ZShape).unwrap() {
            let (w, x, y, zz) = (&z[0], &z[1], &z[2], &z[3]);
            prop_assert!(w[0] < x[0] && x[0] == y[0] && y[0] < zz[0]);
            prop_assert!(w[1] == x[1] && x[1] < y[1] && y[1] == zz[1]);
        }
        if let Some(s) = find_pattern(&pts, PatternKind::Star(2)).unwrap() {
            prop_assert!(s[1][1] == s[0][1] && s[1][0] != s[0][0]);
            prop_assert!(s[2][0] == s[0][0] && s[2][1] != s[0][1]);
        }
        // pattern-free sets never exceed the oracle
        let mut distinct = pts.clone();
        distinct.sort();
        distinct.dedup();
        if find_pattern(&distinct, PatternKind::InducedRectangle).unwrap().is_none() {
            prop_assert!(distinct.len() <= brute_pattern_free_max(&[5, 5], PatternKind::InducedRectangle).unwrap());
        }
    }
}

#[test]
fn hard_instance_forces_short_boxes() {
    assert_eq!(hard_instance(2).len(), 8);
    assert_eq!(hard_instance_counterexample(2), None);
    assert_eq!(hard_instance_counterexample(3), None);
}
