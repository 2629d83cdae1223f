//! Small exact helpers for the lattice `Z²`: vector arithmetic, the
//! intersection form, primitivity and an exact angular order.

use std::cmp::Ordering;

/// A vector in `Z²`.
pub type V2 = [i64; 2];

/// The zero vector.
pub const ZERO: V2 = [0, 0];

/// Componentwise sum.
pub fn add(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

/// Componentwise difference `a − b`.
pub fn sub(a: V2, b: V2) -> V2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Negation.
pub fn neg(a: V2) -> V2 {
    [-a[0], -a[1]]
}

/// Scalar multiple.
pub fn scale(k: i64, a: V2) -> V2 {
    [k * a[0], k * a[1]]
}

/// Euclidean dot product.
pub fn dot(a: V2, b: V2) -> i64 {
    a[0] * b[0] + a[1] * b[1]
}

/// The intersection form `a ∧ b = a_x b_y − a_y b_x`.
pub fn wedge(a: V2, b: V2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Non-negative gcd of the two coordinates (0 for the zero vector).
pub fn content(a: V2) -> i64 {
    num_integer::gcd(a[0], a[1])
}

/// True when `a` is nonzero and its coordinates are coprime.
pub fn is_primitive(a: V2) -> bool {
    content(a) == 1
}

/// Half-plane index used by [`angle_cmp`]: 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half(a: V2) -> u8 {
    if a[1] > 0 || (a[1] == 0 && a[0] > 0) {
        0
    } else {
        1
    }
}

/// Exact comparison of the polar angles of two nonzero vectors, measured
/// anticlockwise from the positive x-axis in `[0, 2π)`.
pub fn angle_cmp(a: V2, b: V2) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&wedge(a, b)))
}

/// Sorts nonzero vectors anticlockwise by angle and removes exact duplicates.
pub fn sort_by_angle(mut v: Vec<V2>) -> Vec<V2> {
    v.sort_by(|a, b| angle_cmp(*a, *b).then_with(|| a.cmp(b)));
    v.dedup();
    v
}

/// True when the anticlockwise angle from `a` to `b` is strictly less than π.
pub fn ccw_within_pi(a: V2, b: V2) -> bool {
    wedge(a, b) > 0
}

/// Twice the signed area of a closed polygon given by its vertices.
pub fn doubled_area(poly: &[V2]) -> i64 {
    let n = poly.len();
    (0..n).map(|i| wedge(poly[i], poly[(i + 1) % n])).sum()
}

/// The polygon whose edge vectors are the given vectors sorted by angle
/// (with repetition); returns the vertex sequence starting at the origin.
///
/// The vectors must sum to zero for the polygon to close up.
pub fn polygon_from_edges(edges: &[V2]) -> Vec<V2> {
    let mut e = edges.to_vec();
    e.sort_by(|a, b| angle_cmp(*a, *b).then_with(|| a.cmp(b)));
    let mut pts = Vec::with_capacity(e.len());
    let mut cur = ZERO;
    for v in e {
        pts.push(cur);
        cur = add(cur, v);
    }
    pts
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = num_integer::Integer::extended_gcd(&a, &b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
