//! The perfect-matching polygon: lattice points with multiplicities, the
//! convex hull by gift wrapping, external/extremal flags and a normal form
//! under affine unimodular maps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::lattice::{self, V2};
use crate::matchings::PerfectMatching;

/// Errors from polygon construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    /// No points were supplied.
    #[error("no perfect matchings")]
    Empty,
}

/// Position of a lattice point relative to the polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// A vertex of the hull (extremal).
    Vertex,
    /// On the boundary but not a vertex (external).
    Edge,
    /// In the interior.
    Interior,
}

/// The polygon with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMPolygon {
    /// Multiplicity of each occupied lattice point.
    pub points: BTreeMap<V2, usize>,
    /// Hull vertices, anticlockwise, starting at the least point.
    pub vertices: Vec<V2>,
    /// Indices (into the input list) of the matchings at each point.
    pub matchings_by_point: BTreeMap<V2, Vec<usize>>,
}

/// Builds the polygon of a list of matchings.
pub fn polygon(matchings: &[PerfectMatching]) -> Result<PMPolygon, PolygonError> {
    if matchings.is_empty() {
        return Err(PolygonError::Empty);
    }
    let mut points = BTreeMap::new();
    let mut by = BTreeMap::new();
    for (i, m) in matchings.iter().enumerate() {
        *points.entry(m.class).or_insert(0) += 1;
        by.entry(m.class).or_insert_with(Vec::new).push(i);
    }
    let pts: Vec<V2> = points.keys().copied().collect();
    let vertices = convex_hull(&pts);
    let poly = PMPolygon {
        points,
        vertices,
        matchings_by_point: by,
    };
    debug_assert!(pts.iter().all(|&p| poly.kind(p).is_some()));
    Ok(poly)
}

/// Convex hull vertices (anticlockwise, starting from the least point in
/// `(x, y)` order) by gift wrapping.  Collinear boundary points are not
/// vertices.  Degenerate inputs give one or two vertices.
pub fn convex_hull(points: &[V2]) -> Vec<V2> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let start = pts[0];
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        // Choose the point making every other point lie to the left of (or on) cur → next,
        // preferring the farthest among collinear candidates.
        let mut next = if pts[0] == cur { pts[1] } else { pts[0] };
        for &p in &pts {
            if p == cur {
                continue;
            }
            let w = lattice::wedge(lattice::sub(next, cur), lattice::sub(p, cur));
            let farther = {
                let a = lattice::sub(p, cur);
                let b = lattice::sub(next, cur);
                lattice::dot(a, a) > lattice::dot(b, b)
            };
            if w < 0 || (w == 0 && farther) {
                next = p;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
        if hull.len() > pts.len() {
            break;
        }
    }
    hull
}

impl PMPolygon {
    /// Classifies a lattice point; `None` if it lies outside the hull.
    pub fn kind(&self, p: V2) -> Option<PointKind> {
        classify(&self.vertices, p)
    }

    /// Total number of matchings represented.
    pub fn total(&self) -> usize {
        self.points.values().sum()
    }

    /// Twice the area of the hull.
    pub fn doubled_area(&self) -> i64 {
        lattice::doubled_area(&self.vertices)
    }

    /// Normal form of the points with multiplicities.
    pub fn normal_form(&self) -> Vec<(V2, usize)> {
        normal_form(
            &self
                .points
                .iter()
                .map(|(&p, &m)| (p, m))
                .collect::<Vec<_>>(),
        )
    }

    /// Text listing: `x y multiplicity [V|E]`, sorted by `(x, y)`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (&p, &m) in &self.points {
            let flag = match self.kind(p) {
                Some(PointKind::Vertex) => " V",
                Some(PointKind::Edge) => " E",
                _ => "",
            };
            let _ = writeln!(s, "{} {} {}{}", p[0], p[1], m, flag);
        }
        s
    }
}

fn on_segment(a: V2, b: V2, p: V2) -> bool {
    lattice::wedge(lattice::sub(b, a), lattice::sub(p, a)) == 0
        && lattice::dot(lattice::sub(p, a), lattice::sub(p, b)) <= 0
}

/// Classifies `p` against an anticlockwise hull given by its vertices.
pub fn classify(vertices: &[V2], p: V2) -> Option<PointKind> {
    if vertices.contains(&p) {
        return Some(PointKind::Vertex);
    }
    let n = vertices.len();
    match n {
        0 | 1 => None,
        2 => on_segment(vertices[0], vertices[1], p).then_some(PointKind::Edge),
        _ => {
            let mut boundary = false;
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let w = lattice::wedge(lattice::sub(b, a), lattice::sub(p, a));
                if w < 0 {
                    return None;
                }
                if w == 0 && on_segment(a, b, p) {
                    boundary = true;
                }
            }
            Some(if boundary {
                PointKind::Edge
            } else {
                PointKind::Interior
            })
        }
    }
}

/// Normal form of a weighted point set under `GL(2, Z) ⋉ Z²`: the
/// lexicographically least sorted list among the images obtained by moving
/// a hull vertex to the origin, one of its hull edges onto the positive
/// x-axis, the set into the upper half-plane, and fixing the remaining shear
/// by the other neighbouring hull vertex.
pub fn normal_form(points: &[(V2, usize)]) -> Vec<(V2, usize)> {
    let pts: Vec<V2> = points.iter().map(|(p, _)| *p).collect();
    let hull = convex_hull(&pts);
    let apply = |f: &dyn Fn(V2) -> V2| {
        let mut v: Vec<(V2, usize)> = points.iter().map(|&(p, m)| (f(p), m)).collect();
        v.sort();
        v
    };
    match hull.len() {
        0 => Vec::new(),
        1 => apply(&|p| lattice::sub(p, hull[0])),
        n => {
            let mut best: Option<Vec<(V2, usize)>> = None;
            for i in 0..n {
                let v = hull[i];
                let nb = [hull[(i + 1) % n], hull[(i + n - 1) % n]];
                for k in 0..2 {
                    let w = nb[k];
                    let u = nb[1 - k];
                    let d = lattice::sub(w, v);
                    let g = lattice::content(d);
                    let (a, b) = (d[0] / g, d[1] / g);
                    let (_, x, y) = lattice::ext_gcd(a, b);
                    let m = |p: V2| [x * p[0] + y * p[1], -b * p[0] + a * p[1]];
                    let mut flip = 1;
                    if pts.iter().any(|&p| m(lattice::sub(p, v))[1] < 0) {
                        flip = -1;
                    }
                    let base = |p: V2| {
                        let q = m(lattice::sub(p, v));
                        [q[0], flip * q[1]]
                    };
                    let uu = base(u);
                    let shear = if uu[1] != 0 {
                        -uu[0].div_euclid(uu[1])
                    } else {
                        0
                    };
                    let cand = apply(&|p| {
                        let q = base(p);
                        [q[0] + shear * q[1], q[1]]
                    });
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
            best.unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(p: &[V2]) -> Vec<(V2, usize)> {
        p.iter().map(|&x| (x, 1)).collect()
    }

    #[test]
    fn hull_skips_collinear_points() {
        let h = convex_hull(&[[0, 0], [1, 0], [2, 0], [2, 2], [0, 2], [1, 1], [0, 1]]);
        assert_eq!(h, vec![[0, 0], [2, 0], [2, 2], [0, 2]]);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull(&[[3, 4]]), vec![[3, 4]]);
        assert_eq!(convex_hull(&[[0, 0], [1, 1], [2, 2]]), vec![[0, 0], [2, 2]]);
    }

    #[test]
    fn classify_points() {
        let h = vec![[0, 0], [2, 0], [2, 2], [0, 2]];
        assert_eq!(classify(&h, [1, 0]), Some(PointKind::Edge));
        assert_eq!(classify(&h, [1, 1]), Some(PointKind::Interior));
        assert_eq!(classify(&h, [3, 1]), None);
        assert_eq!(classify(&h, [2, 2]), Some(PointKind::Vertex));
    }

    #[test]
    fn normal_form_is_invariant() {
        let tri = ones(&[[0, 0], [1, 0], [0, 1]]);
        let moved = ones(&[[5, 3], [4, 3], [6, 2]]);
        assert_eq!(normal_form(&tri), normal_form(&moved));
        assert_eq!(normal_form(&tri), ones(&[[0, 0], [0, 1], [1, 0]]));
        let sq = ones(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        let par = ones(&[[0, 0], [1, 1], [1, 2], [2, 3]]);
        assert_eq!(normal_form(&sq), normal_form(&par));
        assert_ne!(normal_form(&sq), normal_form(&tri));
    }

    #[test]
    fn normal_form_respects_multiplicity() {
        let a = vec![([0, 0], 2), ([1, 0], 1), ([0, 1], 1)];
        let b = vec![([0, 0], 1), ([1, 0], 2), ([0, 1], 1)];
        assert_eq!(normal_form(&a), normal_form(&b));
        let c = vec![([0, 0], 1), ([1, 0], 1), ([2, 0], 1)];
        let d = vec![([0, 0], 1), ([1, 1], 1), ([2, 2], 1)];
        assert_eq!(normal_form(&c), normal_form(&d));
    }
}
