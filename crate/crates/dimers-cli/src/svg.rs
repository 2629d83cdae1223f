//! SVG drawings of dimer models.
//!
//! Vertices are placed by a periodic Tutte embedding: every vertex sits at
//! the barycentre of its neighbours' lifts, with the period lattice fixed to
//! the unit square.  The drawing repeats the fundamental domain over a
//! window of `tiles × tiles` copies.  The layout is cosmetic only.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use dimers::matchings::PerfectMatching;
use dimers::zigzag::ZigZagPath;
use dimers::{Color, TorusGraph};

/// Pixels per period.
const SCALE: f64 = 160.0;
/// Margin around the drawing, in pixels.
const MARGIN: f64 = 24.0;

/// Optional layers drawn over the tiling.
#[derive(Debug, Clone, Copy, Default)]
pub struct Layers<'a> {
    /// Draw quiver arrows.
    pub quiver: bool,
    /// Thicken the edges of this matching.
    pub matching: Option<&'a PerfectMatching>,
    /// Draw one period of this zig-zag path.
    pub zigzag: Option<&'a ZigZagPath>,
}

type P = [f64; 2];

fn add(a: P, b: P) -> P {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

fn lift(v: [i64; 2]) -> P {
    [v[0] as f64, v[1] as f64]
}

/// Geometry of a model in period units.
#[derive(Debug, Clone)]
pub struct Layout {
    /// Position of each vertex in the fundamental copy.
    pub vertex: Vec<P>,
    /// For each arrow: tail and head points, relative to the fundamental
    /// copy of the black end of its edge.
    pub arrow: Vec<(P, P)>,
}

/// The periodic Tutte embedding of `g` and the induced quiver geometry.
pub fn layout(g: &TorusGraph) -> Layout {
    let nv = g.num_vertices();
    let edges = g.edges();
    // Harmonic condition Σ (p_w + s − p_v) = 0 with p_0 pinned at the origin.
    let mut lap = DMatrix::<f64>::zeros(nv, nv);
    let mut rhs = DMatrix::<f64>::zeros(nv, 2);
    for e in edges {
        let (b, w) = (e.black, e.white);
        let o = lift(e.offset);
        lap[(b, b)] += 1.0;
        lap[(w, w)] += 1.0;
        lap[(b, w)] -= 1.0;
        lap[(w, b)] -= 1.0;
        for k in 0..2 {
            rhs[(b, k)] += o[k];
            rhs[(w, k)] -= o[k];
        }
    }
    let mut vertex = vec![[0.0, 0.0]; nv];
    if nv > 1 {
        let m = lap.view((1, 1), (nv - 1, nv - 1)).into_owned();
        let lu = m.lu();
        for k in 0..2 {
            let b = DVector::from_iterator(nv - 1, (1..nv).map(|v| rhs[(v, k)]));
            if let Some(x) = lu.solve(&b) {
                for v in 1..nv {
                    vertex[v][k] = x[v - 1];
                }
            }
        }
    }
    // Face centroids in their own lifts, and the copy of each dart's start
    // vertex in that lift.
    let nd = 2 * edges.len();
    let start = |d: usize| {
        let e = edges[d / 2];
        if d.is_multiple_of(2) {
            e.black
        } else {
            e.white
        }
    };
    let shift = |d: usize| {
        let o = edges[d / 2].offset;
        if d.is_multiple_of(2) {
            o
        } else {
            [-o[0], -o[1]]
        }
    };
    let mut copy = vec![[0i64; 2]; nd];
    let mut centroid = vec![[0.0, 0.0]; g.num_faces()];
    for (f, cyc) in g.face_darts().iter().enumerate() {
        let mut k = [0i64; 2];
        let mut c = [0.0, 0.0];
        for &d in cyc {
            copy[d] = k;
            c = add(c, add(vertex[start(d)], lift(k)));
            let s = shift(d);
            k = [k[0] + s[0], k[1] + s[1]];
        }
        let n = cyc.len() as f64;
        centroid[f] = [c[0] / n, c[1] / n];
    }
    let arrow = (0..edges.len())
        .map(|e| {
            let (db, dw) = (2 * e, 2 * e + 1);
            let head = sub(centroid[g.face_of_dart(db)], lift(copy[db]));
            let tail = add(
                sub(centroid[g.face_of_dart(dw)], lift(copy[dw])),
                lift(edges[e].offset),
            );
            (tail, head)
        })
        .collect();
    Layout { vertex, arrow }
}

/// The polyline of one period of a zig-zag path, in period units, starting
/// at the tail of its first arrow.  It has `period + 1` points and its end
/// is its start translated by the class of the path.
pub fn zigzag_polyline(lay: &Layout, z: &ZigZagPath) -> Vec<P> {
    let mut pts = Vec::with_capacity(z.period() + 1);
    let (t0, h0) = lay.arrow[z.arrows[0]];
    pts.push(t0);
    pts.push(h0);
    for &a in &z.arrows[1..] {
        let (t, h) = lay.arrow[a];
        let prev = *pts.last().unwrap();
        let k = sub(prev, t);
        let k = [k[0].round(), k[1].round()];
        pts.push(add(h, k));
    }
    pts
}

/// Renders a model with the requested layers over `tiles × tiles` copies
/// of the fundamental domain.
pub fn emit_svg(g: &TorusGraph, layers: &Layers, tiles: usize) -> String {
    let lay = layout(g);
    let tiles = tiles.max(1);
    let copies: Vec<P> = (0..tiles)
        .flat_map(|i| (0..tiles).map(move |j| [i as f64, j as f64]))
        .collect();
    // Bounding box of everything drawn.
    let mut pts: Vec<P> = Vec::new();
    for c in &copies {
        for e in g.edges() {
            pts.push(add(lay.vertex[e.black], *c));
            pts.push(add(add(lay.vertex[e.white], lift(e.offset)), *c));
        }
    }
    let zig = layers.zigzag.map(|z| {
        let base = lay.vertex[g.edges()[z.arrows[0]].black];
        zigzag_polyline(&lay, z)
            .into_iter()
            .map(|p| add(p, base))
            .collect::<Vec<P>>()
    });
    if let Some(z) = &zig {
        pts.extend(z.iter().copied());
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let width = (hi[0] - lo[0]) * SCALE + 2.0 * MARGIN;
    let height = (hi[1] - lo[1]) * SCALE + 2.0 * MARGIN;
    let px = |p: P| -> (f64, f64) {
        (
            MARGIN + (p[0] - lo[0]) * SCALE,
            MARGIN + (hi[1] - p[1]) * SCALE,
        )
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    s.push_str(concat!(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" ",
        "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#1f77b4\"/></marker></defs>\n",
        "<style>.edge{stroke:#444;stroke-width:2}.matched{stroke:#000;stroke-width:7}",
        ".black{fill:#000;stroke:#000}.white{fill:#fff;stroke:#000;stroke-width:2}",
        ".arrow{stroke:#1f77b4;stroke-width:1.5}",
        ".zigzag{fill:none;stroke:#d62728;stroke-width:3}</style>\n"
    ));
    let line = |s: &mut String, class: &str, a: P, b: P, extra: &str| {
        let ((x1, y1), (x2, y2)) = (px(a), px(b));
        let _ = writeln!(
            s,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"{extra}/>"#
        );
    };
    s.push_str("<g id=\"tiling\">\n");
    for c in &copies {
        for (i, e) in g.edges().iter().enumerate() {
            let matched = layers.matching.is_some_and(|m| m.contains(i));
            let class = if matched { "edge matched" } else { "edge" };
            let a = add(lay.vertex[e.black], *c);
            let b = add(add(lay.vertex[e.white], lift(e.offset)), *c);
            line(&mut s, class, a, b, "");
        }
    }
    if layers.quiver {
        for c in &copies {
            for &(t, h) in &lay.arrow {
                // Arrows are placed relative to the black end of their edge.
                line(
                    &mut s,
                    "arrow",
                    add(t, *c),
                    add(h, *c),
                    r#" marker-end="url(#head)""#,
                );
            }
        }
    }
    for c in &copies {
        for (v, &p) in lay.vertex.iter().enumerate() {
            let (x, y) = px(add(p, *c));
            let class = match g.color(v) {
                Color::Black => "black",
                Color::White => "white",
            };
            let _ = writeln!(
                s,
                r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="6"/>"#
            );
        }
    }
    s.push_str("</g>\n");
    if let Some(z) = zig {
        let coords: Vec<String> = z
            .iter()
            .map(|&p| {
                let (x, y) = px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="zigzag" data-points="{}" points="{}"/>"#,
            z.len(),
            coords.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use dimers::fixtures;
    use dimers::matchings::enumerate_matchings;
    use dimers::zigzag::zigzag_paths;

    #[test]
    fn vertices_are_barycentres() {
        for (name, g) in fixtures::all_valid() {
            let lay = layout(&g);
            for v in 0..g.num_vertices() {
                let mut sum = [0.0, 0.0];
                let rot = g.rotation(v);
                for &e in rot {
                    let ed = g.edges()[e];
                    let p = if ed.black == v {
                        add(lay.vertex[ed.white], lift(ed.offset))
                    } else {
                        sub(lay.vertex[ed.black], lift(ed.offset))
                    };
                    sum = add(sum, p);
                }
                let n = rot.len() as f64;
                let d = sub([sum[0] / n, sum[1] / n], lay.vertex[v]);
                assert!(d[0].abs() < 1e-9 && d[1].abs() < 1e-9, "{name} vertex {v}");
            }
        }
    }

    #[test]
    fn zigzag_polylines_close_up_to_their_class() {
        for (name, g) in fixtures::all_valid() {
            let lay = layout(&g);
            for z in zigzag_paths(g.quiver()) {
                let pts = zigzag_polyline(&lay, &z);
                assert_eq!(pts.len(), z.period() + 1);
                let d = sub(*pts.last().unwrap(), pts[0]);
                let k = lift(z.class);
                assert!(
                    (d[0] - k[0]).abs() < 1e-9 && (d[1] - k[1]).abs() < 1e-9,
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn element_counts() {
        let g = fixtures::hexagonal();
        let ms = enumerate_matchings(&g);
        let layers = Layers {
            matching: Some(&ms[0]),
            ..Layers::default()
        };
        let svg = emit_svg(&g, &layers, 3);
        assert_eq!(svg.matches(r#"class="edge matched""#).count(), 9);
        assert_eq!(svg.matches(r#"class="edge""#).count(), 18);
        assert_eq!(svg.matches("<circle").count(), 18);
        let plain = emit_svg(&g, &Layers::default(), 1);
        assert!(plain.starts_with("<svg") && plain.trim_end().ends_with("</svg>"));
        assert_eq!(plain.matches("matched").count(), 1); // the style rule only
        assert_eq!(plain.matches("<polyline").count(), 0);
    }
}
