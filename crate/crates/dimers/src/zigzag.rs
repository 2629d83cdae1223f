//! Zig-zag paths, their homology classes and boundary flows, and an exact
//! decision procedure for geometric consistency.
//!
//! A zig-zag path alternates between turning maximally right and
//! maximally left: after a zig `a` comes the next arrow of `a`'s black
//! face (a zag), and after a zag comes the next arrow of its white face.
//! Each arrow is a zig of exactly one path and a zag of exactly one path.
//!
//! Geometric consistency asks that the lifts of the paths to the universal
//! cover ("flows") never meet themselves, that flows with independent
//! classes meet in exactly one arrow and that parallel flows never meet.
//! These conditions are decided by counting shared arrows per coset of the
//! lattice spanned by the two classes, which avoids any search in the
//! universal cover.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::{self, V2};
use crate::surface::Quiver;

/// Errors from zig-zag computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZigZagError {
    /// A path has zero homology class.
    #[error("zig-zag path {0} has zero class; the normal polygon is undefined")]
    ZeroClass(usize),
}

/// A zig-zag path: one period of arrows, starting with a zig.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigZagPath {
    /// Arrows `a_0 … a_{ℓ−1}`; even positions are zigs, odd positions zags.
    pub arrows: Vec<usize>,
    /// Cumulative offsets `c_0 = 0, c_{i+1} = c_i + offset(a_i)` for `i < ℓ`.
    pub cumulative: Vec<V2>,
    /// Homology class `u = c_ℓ`.
    pub class: V2,
}

impl ZigZagPath {
    /// Period length `ℓ`.
    pub fn period(&self) -> usize {
        self.arrows.len()
    }

    /// Arrows at even positions.
    pub fn zigs(&self) -> Vec<usize> {
        self.arrows.iter().step_by(2).copied().collect()
    }

    /// Arrows at odd positions.
    pub fn zags(&self) -> Vec<usize> {
        self.arrows.iter().skip(1).step_by(2).copied().collect()
    }
}

/// All zig-zag paths, ordered by their first (least) zig.
pub fn zigzag_paths(q: &Quiver) -> Vec<ZigZagPath> {
    let n = q.num_arrows();
    let mut seen = [vec![false; n], vec![false; n]];
    let mut out = Vec::new();
    for a0 in 0..n {
        if seen[0][a0] {
            continue;
        }
        let mut seq = Vec::new();
        let (mut a, mut parity) = (a0, 0usize);
        loop {
            seen[parity][a] = true;
            seq.push(a);
            a = if parity == 0 {
                q.next_in_black(a)
            } else {
                q.next_in_white(a)
            };
            parity ^= 1;
            if a == a0 && parity == 0 {
                break;
            }
        }
        // Canonical rotation: least arrow id among even positions.
        let start = (0..seq.len()).step_by(2).min_by_key(|&i| seq[i]).unwrap();
        seq.rotate_left(start);
        let mut cumulative = Vec::with_capacity(seq.len());
        let mut c = lattice::ZERO;
        for &x in &seq {
            cumulative.push(c);
            c = lattice::add(c, q.arrow(x).offset);
        }
        out.push(ZigZagPath {
            arrows: seq,
            cumulative,
            class: c,
        });
    }
    out.sort_by_key(|p| p.arrows[0]);
    out
}

/// One way in which geometric consistency fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeomFailure {
    /// An arrow occurs twice (positions `i`, `j`) within one period.
    SelfIntersection {
        /// Path index.
        path: usize,
        /// First position.
        i: usize,
        /// Second position.
        j: usize,
    },
    /// The class is not primitive.
    NonPrimitiveClass {
        /// Path index.
        path: usize,
    },
    /// The class is zero.
    ZeroClass {
        /// Path index.
        path: usize,
    },
    /// Two paths with linearly dependent classes share an arrow.
    ParallelShare {
        /// First path.
        a: usize,
        /// Second path.
        b: usize,
        /// Shared arrow.
        arrow: usize,
    },
    /// Two lifts of independent paths meet `count ≠ 1` times; the coset of
    /// `Z²/(Zu + Zu′)` identifies the relative position of the lifts.
    CosetCount {
        /// First path.
        a: usize,
        /// Second path.
        b: usize,
        /// Coset representative (reduced).
        coset: V2,
        /// Number of meetings.
        count: usize,
    },
}

/// Exhaustive verdict of the geometric-consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeomReport {
    /// True when there are no failures.
    pub verdict: bool,
    /// All failures found.
    pub failures: Vec<GeomFailure>,
}

/// Hermite basis `(a, b), (0, d)` (`a, d > 0`, `0 ≤ b < d`) of the lattice
/// spanned by two independent vectors.
pub(crate) struct Sublattice {
    a: i64,
    b: i64,
    d: i64,
}

impl Sublattice {
    pub(crate) fn new(u: V2, v: V2) -> Sublattice {
        let (mut r1, mut r2) = (u, v);
        while r2[0] != 0 {
            let k = r1[0].div_euclid(r2[0]);
            r1 = lattice::sub(r1, lattice::scale(k, r2));
            std::mem::swap(&mut r1, &mut r2);
        }
        if r1[0] < 0 {
            r1 = lattice::neg(r1);
        }
        let d = r2[1].abs();
        assert!(
            r1[0] > 0 && d > 0,
            "sublattice generators must be independent"
        );
        Sublattice {
            a: r1[0],
            b: r1[1].rem_euclid(d),
            d,
        }
    }

    /// Index in `Z²`.
    pub(crate) fn index(&self) -> i64 {
        self.a * self.d
    }

    /// Canonical representative with `0 ≤ x < a`, `0 ≤ y < d`.
    pub(crate) fn reduce(&self, v: V2) -> V2 {
        let k = v[0].div_euclid(self.a);
        let y = v[1] - k * self.b;
        [v[0] - k * self.a, y.rem_euclid(self.d)]
    }

    /// All canonical representatives.
    pub(crate) fn cosets(&self) -> Vec<V2> {
        (0..self.a)
            .flat_map(|x| (0..self.d).map(move |y| [x, y]))
            .collect()
    }
}

/// Decides geometric consistency of a complete list of zig-zag paths.
pub fn geometric_check(paths: &[ZigZagPath]) -> GeomReport {
    let mut failures = Vec::new();
    for (p, z) in paths.iter().enumerate() {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &a) in z.arrows.iter().enumerate() {
            if let Some(&j) = first.get(&a) {
                failures.push(GeomFailure::SelfIntersection {
                    path: p,
                    i: j,
                    j: i,
                });
            } else {
                first.insert(a, i);
            }
        }
        if z.class == lattice::ZERO {
            failures.push(GeomFailure::ZeroClass { path: p });
        } else if !lattice::is_primitive(z.class) {
            failures.push(GeomFailure::NonPrimitiveClass { path: p });
        }
    }
    for p in 0..paths.len() {
        for r in p + 1..paths.len() {
            let (x, y) = (&paths[p], &paths[r]);
            let shared: Vec<(usize, usize)> = (0..x.period())
                .flat_map(|i| (0..y.period()).map(move |j| (i, j)))
                .filter(|&(i, j)| x.arrows[i] == y.arrows[j])
                .collect();
            if lattice::wedge(x.class, y.class) == 0 {
                let mut arrows: Vec<usize> = shared.iter().map(|&(i, _)| x.arrows[i]).collect();
                arrows.sort_unstable();
                arrows.dedup();
                for arrow in arrows {
                    failures.push(GeomFailure::ParallelShare { a: p, b: r, arrow });
                }
                continue;
            }
            let lat = Sublattice::new(x.class, y.class);
            debug_assert_eq!(lat.index(), lattice::wedge(x.class, y.class).abs());
            let mut count: BTreeMap<V2, usize> = lat.cosets().into_iter().map(|c| (c, 0)).collect();
            for &(i, j) in &shared {
                *count
                    .get_mut(&lat.reduce(lattice::sub(x.cumulative[i], y.cumulative[j])))
                    .unwrap() += 1;
            }
            for (coset, c) in count {
                if c != 1 {
                    failures.push(GeomFailure::CosetCount {
                        a: p,
                        b: r,
                        coset,
                        count: c,
                    });
                }
            }
        }
    }
    GeomReport {
        verdict: failures.is_empty(),
        failures,
    }
}

/// The black and white boundary flows of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFlows {
    /// Closed path replacing each zig–zag pair by the rest of its black face.
    pub black: Vec<usize>,
    /// Closed path replacing each zag–zig pair by the rest of its white face.
    pub white: Vec<usize>,
}

/// Boundary flows of a path; both have class `−u`.
pub fn boundary_flows(q: &Quiver, z: &ZigZagPath) -> BoundaryFlows {
    let l = z.period();
    let m = l / 2;
    let piece = |f: usize, second: usize| -> Vec<usize> {
        // Arrows of ∂f strictly after `second` and strictly before its predecessor.
        let b = &q.faces()[f].boundary;
        let k = b.len();
        let ps = q.position_in_face(f, second);
        (1..k - 1).map(|t| b[(ps + t) % k]).collect()
    };
    let mut black = Vec::new();
    let mut white = Vec::new();
    for n in (0..m).rev() {
        let (a0, a1) = (z.arrows[2 * n], z.arrows[2 * n + 1]);
        black.extend(piece(q.black_face(a0), a1));
        let (b0, b1) = (z.arrows[2 * n + 1], z.arrows[(2 * n + 2) % l]);
        white.extend(piece(q.white_face(b0), b1));
    }
    let flows = BoundaryFlows { black, white };
    debug_assert_eq!(q.path_offset(&flows.black), lattice::neg(z.class));
    debug_assert_eq!(q.path_offset(&flows.white), lattice::neg(z.class));
    flows
}

/// Twice the area of the polygon whose edges are the classes of the paths
/// (with repetition), i.e. of the normal polygon rotated by a right angle.
pub fn normal_polygon_doubled_area(paths: &[ZigZagPath]) -> Result<i64, ZigZagError> {
    if let Some(p) = paths.iter().position(|z| z.class == lattice::ZERO) {
        return Err(ZigZagError::ZeroClass(p));
    }
    let classes: Vec<V2> = paths.iter().map(|z| z.class).collect();
    Ok(lattice::doubled_area(&lattice::polygon_from_edges(
        &classes,
    )))
}

/// Properly ordered: `|Q0|` equals twice the normal polygon's area, and the
/// cone tags of every local zig-zag fan occur around the face boundary in
/// the cyclic order of the fan (in one of the two orientations).
pub fn properly_ordered(q: &Quiver, paths: &[ZigZagPath]) -> Result<bool, ZigZagError> {
    let area = normal_polygon_doubled_area(paths)?;
    if area != q.num_nodes() as i64 {
        return Ok(false);
    }
    for f in 0..q.num_faces() {
        if face_order_step(q, paths, f).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The step `s = ±1` such that consecutive cone tags of the local fan at
/// `f` are `s` apart along `∂f`, if such a step exists.
pub fn face_order_step(q: &Quiver, paths: &[ZigZagPath], f: usize) -> Option<i64> {
    let fan = crate::fans::local_fan(q, paths, f).ok()?;
    let k = q.faces()[f].boundary.len() as i64;
    let m = fan.tags.len();
    if m as i64 != k {
        return None;
    }
    let pos: Vec<i64> = fan
        .tags
        .iter()
        .map(|&a| q.position_in_face(f, a) as i64)
        .collect();
    let steps: Vec<i64> = (0..m)
        .map(|i| (pos[(i + 1) % m] - pos[i]).rem_euclid(k))
        .collect();
    if steps.iter().all(|&s| s == 1 % k) {
        Some(1)
    } else if steps.iter().all(|&s| s == (k - 1) % k) {
        Some(-1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn each_arrow_is_zig_once_and_zag_once() {
        for (name, g) in fixtures::all_valid() {
            let q = g.quiver();
            let ps = zigzag_paths(q);
            let mut zig = vec![0; q.num_arrows()];
            let mut zag = vec![0; q.num_arrows()];
            for p in &ps {
                assert_eq!(p.period() % 2, 0);
                p.zigs().iter().for_each(|&a| zig[a] += 1);
                p.zags().iter().for_each(|&a| zag[a] += 1);
            }
            assert!(zig.iter().chain(&zag).all(|&c| c == 1), "{name}");
            assert_eq!(
                ps.iter().map(|p| p.period()).sum::<usize>(),
                2 * q.num_arrows()
            );
        }
    }

    #[test]
    fn alternation_invariant() {
        for (_, g) in fixtures::all_valid() {
            let q = g.quiver();
            for p in zigzag_paths(q) {
                let l = p.period();
                for n in 0..l / 2 {
                    assert_eq!(
                        q.black_face(p.arrows[2 * n]),
                        q.black_face(p.arrows[2 * n + 1])
                    );
                    assert_eq!(
                        q.white_face(p.arrows[2 * n + 1]),
                        q.white_face(p.arrows[(2 * n + 2) % l])
                    );
                }
                assert!(q.is_path(&p.arrows));
            }
        }
    }

    #[test]
    fn sublattice_reduction() {
        let l = Sublattice::new([2, 1], [0, 3]);
        assert_eq!(l.index(), 6);
        assert_eq!(l.reduce([2, 1]), [0, 0]);
        assert_eq!(l.reduce([4, 5]), [0, 0]);
        assert_eq!(l.cosets().len(), 6);
        let l = Sublattice::new([1, 0], [-1, -1]);
        assert_eq!(l.index(), 1);
    }

    #[test]
    fn boundary_flows_have_opposite_class() {
        for (name, g) in fixtures::all_valid() {
            let q = g.quiver();
            for p in zigzag_paths(q) {
                let b = boundary_flows(q, &p);
                for c in [&b.black, &b.white] {
                    assert!(q.is_path(c), "{name}");
                    assert_eq!(q.path_offset(c), lattice::neg(p.class), "{name}");
                }
            }
        }
    }
}
