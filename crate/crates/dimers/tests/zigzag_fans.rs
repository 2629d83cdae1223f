//! Zig-zag paths, geometric consistency, fans and extremal / external
//! perfect matchings.

use std::collections::{BTreeMap, BTreeSet};

use dimers::fans::ZigZagFans;
use dimers::fixtures;
use dimers::lattice::{self, V2};
use dimers::matchings::{enumerate_matchings, PerfectMatching};
use dimers::polygon::{polygon, PointKind};
use dimers::zigzag::{geometric_check, properly_ordered, zigzag_paths, GeomFailure};
use dimers::TorusGraph;

fn geometrically_consistent() -> Vec<(&'static str, TorusGraph)> {
    fixtures::all_valid()
        .into_iter()
        .filter(|(_, g)| geometric_check(&zigzag_paths(g.quiver())).verdict)
        .collect()
}

#[test]
fn memeg_paths_and_fans() {
    let g = fixtures::memeg();
    let q = g.quiver();
    let paths = zigzag_paths(q);
    let mut classes: Vec<V2> = paths.iter().map(|p| p.class).collect();
    classes.sort();
    assert_eq!(classes, vec![[-1, -1], [0, -1], [0, 1], [0, 1], [1, 0]]);
    assert!(geometric_check(&paths).verdict);

    let ms = enumerate_matchings(&g);
    let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
    assert_eq!(fans.global.rays.len(), 4);
    for lf in &fans.local {
        let sides = q.faces()[lf.face].boundary.len();
        match sides {
            4 => assert_eq!(lf.fan.rays.len(), 4),
            3 => assert_eq!(lf.fan.rays.len(), 3),
            _ => panic!("unexpected face size {sides}"),
        }
    }
}

#[test]
fn memeg_extremal_matching_of_the_fourth_quadrant() {
    let g = fixtures::memeg();
    let ms = enumerate_matchings(&g);
    let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
    let i = fans
        .global
        .cones()
        .iter()
        .position(|&c| c == ([0, -1], [1, 0]))
        .unwrap();
    let p = fans.extremal_matching(i).unwrap().matching;
    let eta3 = &fans.paths[fans.representatives([1, 0])[0]];
    let eta4 = &fans.paths[fans.representatives([0, -1])[0]];
    let expected: BTreeSet<usize> = eta3.zigs().into_iter().chain(eta4.zags()).collect();
    let on_paths: BTreeSet<usize> = eta3
        .arrows
        .iter()
        .chain(&eta4.arrows)
        .copied()
        .filter(|&a| p.contains(a))
        .collect();
    assert_eq!(on_paths, expected);
    assert_eq!(p.support.iter().copied().collect::<BTreeSet<_>>(), expected);
}

#[test]
fn memeg_external_multiplicities_are_binomial() {
    let g = fixtures::memeg();
    let ms = enumerate_matchings(&g);
    let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
    assert_eq!(fans.representatives([0, 1]).len(), 2);
    let ext = fans.external_matchings([0, 1]).unwrap();
    let mut by_class: BTreeMap<V2, usize> = BTreeMap::new();
    for m in &ext {
        *by_class.entry(m.class).or_default() += 1;
    }
    // Order the classes along the edge and compare with enumeration.
    let counts: Vec<usize> = by_class.values().copied().collect();
    assert_eq!(counts, vec![1, 2, 1]);
    let poly = polygon(&ms).unwrap();
    for (c, k) in &by_class {
        assert_eq!(poly.points[c], *k);
        assert_ne!(poly.kind(*c), Some(PointKind::Interior));
    }
}

#[test]
fn geometric_failures_are_named() {
    // Squares and octagons: antiparallel flows share arrows, so their lifts
    // meet once in every period.
    let g = fixtures::examplestp();
    let paths = zigzag_paths(g.quiver());
    let r = geometric_check(&paths);
    assert!(!r.verdict);
    for f in &r.failures {
        match *f {
            GeomFailure::ParallelShare { a, b, .. } => {
                assert_eq!(paths[a].class, lattice::neg(paths[b].class))
            }
            ref other => panic!("unexpected failure {other:?}"),
        }
    }
    // The non-minimal conifold: two lifts meet three times.
    let g = fixtures::nonminimal_conifold();
    let r = geometric_check(&zigzag_paths(g.quiver()));
    assert!(r
        .failures
        .iter()
        .any(|f| matches!(f, GeomFailure::CosetCount { count: 3, .. })));
    for g in [fixtures::hexagonal(), fixtures::conifold()] {
        assert!(geometric_check(&zigzag_paths(g.quiver())).verdict);
    }
}

#[test]
fn properly_ordered_on_consistent_models() {
    for (name, g) in geometrically_consistent() {
        let q = g.quiver();
        assert_eq!(properly_ordered(q, &zigzag_paths(q)), Ok(true), "{name}");
    }
}

#[test]
fn intersection_numbers_equal_class_determinants() {
    for (name, g) in fixtures::all_valid() {
        let paths = zigzag_paths(g.quiver());
        for p in &paths {
            for r in &paths {
                assert_eq!(
                    dimers::surface::signed_intersection(p, r),
                    lattice::wedge(p.class, r.class),
                    "{name}"
                );
            }
        }
    }
}

/// Extremal matchings correspond bijectively to polygon vertices, each of
/// multiplicity one; each is the unique matching vanishing on the boundary
/// systems of its two rays; adjacent cones differ by exchanging zigs and
/// zags of the separating ray.
#[test]
fn extremal_suite_on_consistent_models() {
    let consistent = geometrically_consistent();
    assert!(consistent.len() >= 3);
    for (name, g) in consistent {
        let ms = enumerate_matchings(&g);
        let poly = polygon(&ms).unwrap();
        let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
        let ext = fans.extremal_matchings().unwrap();
        let mut classes: Vec<V2> = ext.iter().map(|e| e.matching.class).collect();
        classes.sort();
        let mut vertices = poly.vertices.clone();
        vertices.sort();
        assert_eq!(classes, vertices, "{name}");
        for v in &vertices {
            assert_eq!(poly.points[v], 1, "{name}");
        }
        for e in &ext {
            let (lo, hi) = e.cone;
            let (s1, s2) = (fans.boundary_system(lo), fans.boundary_system(hi));
            assert_eq!(e.matching.eval_chain(&s1), 0, "{name}");
            assert_eq!(e.matching.eval_chain(&s2), 0, "{name}");
            let vanishing: Vec<&PerfectMatching> = ms
                .iter()
                .filter(|m| m.eval_chain(&s1) == 0 && m.eval_chain(&s2) == 0)
                .collect();
            assert_eq!(vanishing, vec![&e.matching], "{name}");
        }
        for &ray in &fans.global.rays {
            let before = &ext[fans.cone_before(ray).unwrap()].matching;
            let after = &ext[fans.cone_after(ray).unwrap()].matching;
            let reps = fans.representatives(ray);
            let zigs: BTreeSet<usize> = reps.iter().flat_map(|&i| fans.paths[i].zigs()).collect();
            let zags: BTreeSet<usize> = reps.iter().flat_map(|&i| fans.paths[i].zags()).collect();
            let mut s: BTreeSet<usize> = before.support.iter().copied().collect();
            assert!(zigs.is_subset(&s), "{name}");
            s.retain(|a| !zigs.contains(a));
            s.extend(&zags);
            assert_eq!(
                s.into_iter().collect::<Vec<_>>(),
                after.support,
                "{name} ray {ray:?}"
            );
        }
    }
}

#[test]
fn externals_fill_polygon_edges() {
    for (name, g) in geometrically_consistent() {
        let ms = enumerate_matchings(&g);
        let poly = polygon(&ms).unwrap();
        let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
        let mut boundary: BTreeMap<V2, usize> = BTreeMap::new();
        for &ray in &fans.global.rays {
            let ext = fans.external_matchings(ray).unwrap();
            let k = fans.representatives(ray).len();
            assert_eq!(ext.len(), 1 << k, "{name}");
            for m in ext {
                *boundary.entry(m.class).or_default() += 1;
            }
        }
        // Vertices are counted by both incident edges.
        for (p, &m) in &poly.points {
            match poly.kind(*p) {
                Some(PointKind::Vertex) => assert_eq!(boundary[p], 2 * m, "{name}"),
                Some(PointKind::Edge) => assert_eq!(boundary[p], m, "{name}"),
                _ => assert!(!boundary.contains_key(p), "{name}"),
            }
        }
    }
}
