use super::branch::push_interval_along_word;
use super::*;
use crate::map::{LorenzMap, OrbitStart, StandardMap};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn demo_map() -> StandardMap {
    StandardMap::new(0.8, 0.7, 0.5, 2.0).unwrap()
}

fn tuned(depth: usize) -> (StandardMap, Vec<RenormResult>) {
    let out = tune_parameters(0.5, 2.0, &vec![(2, 2); depth], TuneOptions::default())
        .expect("tuning should reach the requested depth");
    (out.map, out.cascade)
}

#[test]
fn fixed_points_are_single_symbol_boundary_roots() {
    let f = demo_map();
    let p = find_periodic_boundary(&f, &"0".parse().unwrap()).unwrap();
    assert_eq!(p, 0.0);
    let q = find_periodic_boundary(&f, &"1".parse().unwrap()).unwrap();
    assert_eq!(q, 1.0);
}

#[test]
fn monotone_type_words() {
    let t = CombinatorialType::monotone(2, 3);
    assert_eq!(t.word_minus().to_string(), "011");
    assert_eq!(t.word_plus().to_string(), "1000");
    assert_eq!(t.as_monotone(), Some((2, 3)));
    assert_eq!(t.times(), (3, 4));
    // right word must start with 1
    assert!(CombinatorialType::new("01".parse().unwrap(), "010".parse().unwrap()).is_err());
    // words shorter than 2 are no return words
    assert!(CombinatorialType::new("0".parse().unwrap(), "10".parse().unwrap()).is_err());
    let nm = CombinatorialType::new("01".parse().unwrap(), "101".parse().unwrap()).unwrap();
    assert_eq!(nm.as_monotone(), None);
}

#[test]
fn nearly_trivial_map_is_not_renormalizable() {
    // left critical value barely above c: every return collapses to one side
    let f = StandardMap::new(0.505, 0.7, 0.5, 2.0).unwrap();
    let err = detect_type(&f, 10).unwrap_err();
    assert!(matches!(err, RenormError::NotRenormalizable { .. }));
    let direct = find_renorm_interval(&f, &CombinatorialType::monotone(1, 1));
    assert!(direct.is_err());
}

#[test]
fn tuned_depth1_certificate() {
    let (f, cascade) = tuned(1);
    assert_eq!(cascade.len(), 1);
    let r = &cascade[0];
    assert_eq!(r.combinatorics.as_monotone(), Some((2, 2)));
    let (p, q) = (r.window.lo, r.window.hi);
    assert!(p < 0.5 && 0.5 < q);

    // boundary periodicity by independent 3-fold direct iteration
    let mut x = p;
    for _ in 0..3 {
        x = f.eval(x).unwrap();
    }
    assert!((x - p).abs() < 1e-12, "left residual {:e}", (x - p).abs());
    let mut y = q;
    for _ in 0..3 {
        y = f.eval(y).unwrap();
    }
    assert!((y - q).abs() < 1e-12);

    // itineraries of the boundary roots
    assert_eq!(
        crate::map::itinerary_of(&f, OrbitStart::Point(p), 3).to_string(),
        "011"
    );
    assert_eq!(
        crate::map::itinerary_of(&f, OrbitStart::Point(q), 3).to_string(),
        "100"
    );

    // no monotone type of smaller total length certifies
    for (a, b) in [(1, 1), (1, 2), (2, 1)] {
        assert!(
            find_renorm_interval(&f, &CombinatorialType::monotone(a, b)).is_err(),
            "({a},{b}) unexpectedly succeeded"
        );
    }

    // intermediate iterates of both window halves avoid the window
    let wm = r.combinatorics.word_minus();
    let imgs = push_interval_along_word(&f, crate::Interval::new(p, 0.5), wm).unwrap();
    for img in &imgs[..imgs.len() - 1] {
        assert!(!img.overlaps_interior(&r.window));
    }
    // and the final return lands back inside
    assert!(r.window.contains_interval(imgs.last().unwrap()));
}

#[test]
fn renormalized_map_fixes_endpoints_and_straddles() {
    let (_, cascade) = tuned(1);
    let rf = &cascade[0].renormalized;
    let r0 = rf.eval(0.0).unwrap();
    let r1 = rf.eval(1.0).unwrap();
    assert!(r0.abs() < 1e-10, "Rf(0) = {r0:e}");
    assert!((r1 - 1.0).abs() < 1e-10);
    let c = rf.singular_point();
    let (c1m, c1p) = rf.critical_values();
    assert!(c1p < c && c < c1m, "renormalization must be non-trivial");
}

#[test]
fn renormalization_matches_direct_iteration() {
    let (f, cascade) = tuned(1);
    let r = &cascade[0];
    let rf = &r.renormalized;
    let window = r.window;
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 100 {
        let x: f64 = rng.gen_range(0.0..1.0);
        let Some(side) = rf.side_of(x) else { continue };
        let steps = match side {
            crate::map::Side::Left => 3,
            crate::map::Side::Right => 3,
        };
        let mut y = window.from_unit(x);
        let mut ok = true;
        for _ in 0..steps {
            match f.eval(y) {
                Ok(z) => y = z,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let direct = window.to_unit(y);
        let via = rf.eval(x).unwrap();
        let denom = direct.abs().max(1.0);
        assert!(
            (via - direct).abs() / denom < 1e-10,
            "x={x} via={via} direct={direct}"
        );
        checked += 1;
    }
}

#[test]
fn prerenormalization_shares_the_iteration_path() {
    let (f, cascade) = tuned(1);
    let r = &cascade[0];
    let pf = PreRenorm::new(&f, r);

    // boundary root is fixed by the return
    let p = r.window.lo;
    let back = pf.eval(p, crate::map::Side::Left).unwrap();
    assert!((back - p).abs() < 1e-12);

    // limit at the singular point equals the direct critical-value orbit
    let c = f.singular_point();
    let at_c = pf.eval(c, crate::map::Side::Left).unwrap();
    let mut y = f.eval_side(c, crate::map::Side::Left).unwrap();
    for _ in 0..2 {
        y = f.eval(y).unwrap();
    }
    assert_eq!(at_c, y);

    // interior points: bitwise equality with direct iteration
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut checked = 0;
    while checked < 100 {
        let x = rng.gen_range(r.window.lo..c);
        if f.side_of(x).is_none() {
            continue;
        }
        let via = pf.eval(x, crate::map::Side::Left).unwrap();
        let mut y = x;
        let mut ok = true;
        for _ in 0..3 {
            match f.eval(y) {
                Ok(z) => y = z,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        assert_eq!(via, y, "x={x}");
        checked += 1;
    }
}

#[test]
fn double_renormalization_round_trip() {
    let (_, cascade) = tuned(2);
    assert_eq!(cascade.len(), 2);
    // the depth-2 window nests inside the depth-1 window in base coordinates
    let w1 = cascade[0].renormalized.window();
    let w2 = cascade[1].renormalized.window();
    assert!(w1.contains_interval(&w2));
    assert!(w2.len() < w1.len());
    // flattened return times follow the composition rule
    assert_eq!(cascade[0].renormalized.left_time(), 3);
    assert_eq!(cascade[1].renormalized.left_time(), 9);
    assert_eq!(cascade[1].renormalized.right_time(), 9);
    // the renormalization of the depth-1 map detects as (2,2) again
    let detected = detect_type(&cascade[0].renormalized, 6).unwrap();
    assert_eq!(detected.combinatorics.as_monotone(), Some((2, 2)));
}

#[test]
fn detect_type_prefers_smallest_total_length() {
    // tuned (2,2): detect_type must not report (1,1), (1,2), (2,1)
    let (f, _) = tuned(1);
    let r = detect_type(&f, 20).unwrap();
    assert_eq!(r.combinatorics.as_monotone(), Some((2, 2)));
}

#[test]
fn tune_with_empty_target_returns_any_nontrivial_map() {
    let out = tune_parameters(0.5, 2.0, &[], TuneOptions::default()).unwrap();
    assert_eq!(out.cascade.len(), 0);
    assert_eq!(out.certifications, 0);
    let (c1m, c1p) = out.map.critical_values();
    assert!(c1p < 0.5 && 0.5 < c1m);
}

#[test]
fn tune_rejects_degenerate_types() {
    assert!(matches!(
        tune_parameters(0.5, 2.0, &[(0, 1)], TuneOptions::default()),
        Err(TuneError::BadRequest(_))
    ));
}

#[test]
fn tune_budget_exhaustion_reports_deepest() {
    let err = tune_parameters(
        0.5,
        2.0,
        &[(2, 2); 4],
        TuneOptions {
            budget: 40,
            ..TuneOptions::default()
        },
    )
    .unwrap_err();
    match err {
        TuneError::BudgetExhausted { deepest, wanted, .. } => {
            assert!(deepest < 4);
            assert_eq!(wanted, 4);
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn certify_cascade_round_trip() {
    let (f, cascade) = tuned(2);
    let again = certify_cascade(&f, &[(2, 2); 2]).unwrap();
    assert_eq!(again.len(), 2);
    assert_eq!(again[0].window.lo, cascade[0].window.lo);
    assert_eq!(again[1].renormalized.window().lo, cascade[1].renormalized.window().lo);
}

#[test]
#[ignore = "depth-4 tuning timing probe; run explicitly"]
fn tune_depth4_probe() {
    let t0 = std::time::Instant::now();
    let out = tune_parameters(0.5, 2.0, &[(2, 2); 4], TuneOptions::default()).unwrap();
    eprintln!(
        "depth-4 tune: u={} v={} diam={:e} certs={} wall={:?}",
        crate::fmt_g17(out.map.u()),
        crate::fmt_g17(out.map.v()),
        out.rect_diameter,
        out.certifications,
        t0.elapsed()
    );
    for (i, r) in out.cascade.iter().enumerate() {
        eprintln!(
            "  level {}: window=[{}, {}] times=({}, {}) residuals=({:e}, {:e})",
            i + 1,
            crate::fmt_g17(r.renormalized.window().lo),
            crate::fmt_g17(r.renormalized.window().hi),
            r.renormalized.left_time(),
            r.renormalized.right_time(),
            r.residual_left,
            r.residual_right
        );
    }
}
