//! Dimer models on the torus and their dual quivers.
//!
//! A [`TorusGraph`] is a bipartite graph with a counterclockwise rotation
//! system and an integer translation on every edge: edge `e` joins the copy
//! `k` of its black end to the copy `k + offset(e)` of its white end in the
//! universal cover.  Half-edges ("darts") are numbered `2e` (black end) and
//! `2e + 1` (white end).  Faces are traced with the face on the left of each
//! dart, and the graph is accepted only if it is a cell decomposition of the
//! torus whose faces are discs.
//!
//! The dual [`Quiver`] has one vertex per dimer face, one arrow per edge and
//! one face per dimer vertex.  Arrows are oriented so that the black end of
//! the dual edge lies on their left; faces dual to black vertices are then
//! anticlockwise and faces dual to white vertices clockwise.  Arrow ids equal
//! edge ids and quiver face ids equal dimer vertex ids.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::DimerError;
use crate::lattice::{self, V2};
use crate::map::{RotationMap, TraceError, TracedFaces};
use crate::zigzag::{zigzag_paths, ZigZagPath};

/// Colour of a dimer vertex (equivalently, of the dual quiver face).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    /// Black vertex; its dual face is anticlockwise.
    Black,
    /// White vertex; its dual face is clockwise.
    White,
}

impl Color {
    /// The other colour.
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    /// The letter used in the text format.
    pub fn letter(self) -> char {
        match self {
            Color::Black => 'B',
            Color::White => 'W',
        }
    }
}

/// An edge of a dimer model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// The black endpoint.
    pub black: usize,
    /// The white endpoint.
    pub white: usize,
    /// Copy of the white end relative to the copy of the black end.
    pub offset: V2,
}

/// A validated dimer model on the torus.
#[derive(Debug, Clone)]
pub struct TorusGraph {
    colors: Vec<Color>,
    edges: Vec<Edge>,
    rot: Vec<Vec<usize>>,
    faces: TracedFaces,
    quiver: Quiver,
}

/// An arrow of the dual quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    /// Tail vertex.
    pub tail: usize,
    /// Head vertex.
    pub head: usize,
    /// The dual dimer edge (equal to the arrow id).
    pub edge: usize,
    /// Translation of the head's copy relative to the tail's copy.
    pub offset: V2,
}

/// A face of the dual quiver, dual to a dimer vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverFace {
    /// Colour of the dual dimer vertex.
    pub color: Color,
    /// Boundary as a composable cyclic list of arrow ids.
    pub boundary: Vec<usize>,
}

/// The quiver dual to a dimer model, with its faces and a homology basis.
#[derive(Debug, Clone)]
pub struct Quiver {
    nodes: usize,
    arrows: Vec<Arrow>,
    faces: Vec<QuiverFace>,
    black_face: Vec<usize>,
    white_face: Vec<usize>,
    black_pos: Vec<usize>,
    white_pos: Vec<usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    gamma: [Vec<i64>; 2],
}

/// The superpotential: one signed cyclic term per quiver face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superpotential {
    /// `(sign, cyclic arrow list)`; sign `+1` for black faces.
    pub terms: Vec<(i8, Vec<usize>)>,
}

/// The F-term relation attached to an arrow: `p_plus = p_minus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTerm {
    /// The arrow.
    pub arrow: usize,
    /// Black-face path from `head(arrow)` to `tail(arrow)`.
    pub plus: Vec<usize>,
    /// White-face path from `head(arrow)` to `tail(arrow)`.
    pub minus: Vec<usize>,
}

impl TorusGraph {
    /// Builds and validates a dimer model from colours, edges and a
    /// counterclockwise rotation (edge ids) per vertex.
    pub fn new(
        colors: Vec<Color>,
        edges: Vec<Edge>,
        rot: Vec<Vec<usize>>,
    ) -> Result<Self, DimerError> {
        let nv = colors.len();
        if edges.is_empty() {
            return Err(DimerError::Invalid("no edges".into()));
        }
        if rot.len() != nv {
            return Err(DimerError::Invalid(
                "one rotation per vertex is required".into(),
            ));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.black >= nv || e.white >= nv {
                return Err(DimerError::Invalid(format!(
                    "edge {i} has an unknown endpoint"
                )));
            }
            if colors[e.black] != Color::Black || colors[e.white] != Color::White {
                return Err(DimerError::Bipartite(format!(
                    "edge {i} must join a black vertex to a white vertex"
                )));
            }
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            incident[e.black].push(i);
            incident[e.white].push(i);
        }
        for v in 0..nv {
            let mut a = incident[v].clone();
            let mut b = rot[v].clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(DimerError::Invalid(format!(
                    "rotation at vertex {v} must list exactly its incident edges once each"
                )));
            }
            if a.len() < 2 {
                return Err(DimerError::Invalid(format!("vertex {v} has valence < 2")));
            }
        }
        let map = build_map(&colors, &edges, &rot);
        if !map.connected() {
            return Err(DimerError::Disconnected);
        }
        let faces = map.trace().map_err(|TraceError::NonContractibleFace(d)| {
            DimerError::Topology(format!(
                "the face through edge {} does not close up in the plane",
                d / 2
            ))
        })?;
        let euler = nv as i64 - edges.len() as i64 + faces.cycles.len() as i64;
        if euler != 0 {
            return Err(DimerError::Topology(format!(
                "Euler characteristic {euler}; the surface is not a torus"
            )));
        }
        let index = map.cycle_lattice_index();
        if index != 1 {
            return Err(DimerError::Topology(format!(
                "cycle translations generate a sublattice of index {index}, not Z²"
            )));
        }
        let quiver = Quiver::from_dimer(&colors, &edges, &rot, &faces)?;
        check_orientation(&quiver)?;
        Ok(TorusGraph {
            colors,
            edges,
            rot,
            faces,
            quiver,
        })
    }

    /// Number of dimer vertices.
    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    /// Number of dimer edges.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of dimer faces.
    pub fn num_faces(&self) -> usize {
        self.faces.cycles.len()
    }

    /// Vertex colours.
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Colour of a vertex.
    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// All edges.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Counterclockwise rotation (edge ids) at a vertex.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    /// Ids of the black vertices in increasing order.
    pub fn black_vertices(&self) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == Color::Black)
            .collect()
    }

    /// Ids of the white vertices in increasing order.
    pub fn white_vertices(&self) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == Color::White)
            .collect()
    }

    /// The endpoint of edge `e` other than `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let ed = self.edges[e];
        if ed.black == v {
            ed.white
        } else {
            ed.black
        }
    }

    /// The faces as cycles of darts (`2e` = black end of `e`, `2e+1` = white end).
    pub fn face_darts(&self) -> &[Vec<usize>] {
        &self.faces.cycles
    }

    /// Face on the left of a dart.
    pub fn face_of_dart(&self, d: usize) -> usize {
        self.faces.face_of[d]
    }

    /// The dual quiver (computed at construction).
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Serialises the model in the DIMER text format.
    pub fn to_text(&self, comment: Option<&str>) -> String {
        let mut s = String::from("DIMER 1\n");
        if let Some(c) = comment {
            for line in c.lines() {
                let _ = writeln!(s, "# {line}");
            }
        }
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(s, "vertex {v} {}", c.letter());
        }
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(
                s,
                "edge {i} {} {} {} {}",
                e.black, e.white, e.offset[0], e.offset[1]
            );
        }
        for (v, r) in self.rot.iter().enumerate() {
            let ids: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "rot {v} {}", ids.join(" "));
        }
        s
    }
}

/// Signed count of the arrows shared by two zig-zag paths: `+1` for an
/// arrow that is a zag of `p` and a zig of `r`, `−1` for the reverse.
pub fn signed_intersection(p: &ZigZagPath, r: &ZigZagPath) -> i64 {
    let mut s = 0;
    for (i, a) in p.arrows.iter().enumerate() {
        for (j, b) in r.arrows.iter().enumerate() {
            if a == b {
                s += match (i % 2, j % 2) {
                    (1, 0) => 1,
                    (0, 1) => -1,
                    _ => 0,
                };
            }
        }
    }
    s
}

/// The algebraic intersection number of two closed curves on the torus is
/// the wedge of their classes in a positively oriented basis.  Zig-zag
/// paths cross transversally at shared arrows, so comparing the signed
/// counts with the wedges detects offsets given in a mirrored basis.
fn check_orientation(q: &Quiver) -> Result<(), DimerError> {
    let paths = zigzag_paths(q);
    for (i, p) in paths.iter().enumerate() {
        for r in &paths[i + 1..] {
            let w = lattice::wedge(p.class, r.class);
            let s = signed_intersection(p, r);
            if s != w {
                return Err(DimerError::Topology(if s == -w {
                    "edge offsets are given in a basis of opposite orientation to the rotation system".into()
                } else {
                    "zig-zag intersection numbers disagree with their classes".into()
                }));
            }
        }
    }
    Ok(())
}

fn build_map(colors: &[Color], edges: &[Edge], rot: &[Vec<usize>]) -> RotationMap {
    let nd = 2 * edges.len();
    let mut vertex = vec![0; nd];
    let mut twin = vec![0; nd];
    let mut shift = vec![lattice::ZERO; nd];
    for (i, e) in edges.iter().enumerate() {
        vertex[2 * i] = e.black;
        vertex[2 * i + 1] = e.white;
        twin[2 * i] = 2 * i + 1;
        twin[2 * i + 1] = 2 * i;
        shift[2 * i] = e.offset;
        shift[2 * i + 1] = lattice::neg(e.offset);
    }
    let drot = rot
        .iter()
        .enumerate()
        .map(|(v, r)| {
            let side = usize::from(colors[v] == Color::White);
            r.iter().map(|&e| 2 * e + side).collect()
        })
        .collect();
    RotationMap::new(vertex, twin, shift, drot)
}

/// Parses the DIMER text format into a validated model.
///
/// Vertex and edge ids may be arbitrary non-negative integers; they are
/// renumbered `0..n` in increasing order.
pub fn load(text: &str) -> Result<TorusGraph, DimerError> {
    let mut header = false;
    let mut verts: BTreeMap<u64, (Color, usize)> = BTreeMap::new();
    let mut raw_edges: BTreeMap<u64, (u64, u64, V2, usize)> = BTreeMap::new();
    let mut raw_rot: BTreeMap<u64, (Vec<u64>, usize)> = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if !header {
            if tok == ["DIMER", "1"] {
                header = true;
                continue;
            }
            return Err(DimerError::parse(ln, "expected header `DIMER 1`"));
        }
        let int = |s: &str| -> Result<u64, DimerError> {
            s.parse::<u64>()
                .map_err(|_| DimerError::parse(ln, format!("expected an id, found `{s}`")))
        };
        let sint = |s: &str| -> Result<i64, DimerError> {
            s.parse::<i64>()
                .map_err(|_| DimerError::parse(ln, format!("expected an integer, found `{s}`")))
        };
        match tok[0] {
            "vertex" => {
                if tok.len() != 3 {
                    return Err(DimerError::parse(ln, "usage: vertex <id> <B|W>"));
                }
                let c = match tok[2] {
                    "B" => Color::Black,
                    "W" => Color::White,
                    other => {
                        return Err(DimerError::parse(ln, format!("unknown colour `{other}`")))
                    }
                };
                if verts.insert(int(tok[1])?, (c, ln)).is_some() {
                    return Err(DimerError::parse(ln, "duplicate vertex id"));
                }
            }
            "edge" => {
                if tok.len() != 6 {
                    return Err(DimerError::parse(
                        ln,
                        "usage: edge <id> <black> <white> <dx> <dy>",
                    ));
                }
                let rec = (
                    int(tok[2])?,
                    int(tok[3])?,
                    [sint(tok[4])?, sint(tok[5])?],
                    ln,
                );
                if raw_edges.insert(int(tok[1])?, rec).is_some() {
                    return Err(DimerError::parse(ln, "duplicate edge id"));
                }
            }
            "rot" => {
                if tok.len() < 2 {
                    return Err(DimerError::parse(ln, "usage: rot <vertex> <edge>..."));
                }
                let ids = tok[2..]
                    .iter()
                    .map(|s| int(s))
                    .collect::<Result<Vec<_>, _>>()?;
                if raw_rot.insert(int(tok[1])?, (ids, ln)).is_some() {
                    return Err(DimerError::parse(ln, "duplicate rotation for vertex"));
                }
            }
            other => return Err(DimerError::parse(ln, format!("unknown record `{other}`"))),
        }
    }
    if !header {
        return Err(DimerError::parse(0, "missing header `DIMER 1`"));
    }
    if raw_edges.is_empty() {
        return Err(DimerError::parse(0, "empty edge list"));
    }
    let vid: BTreeMap<u64, usize> = verts.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let eid: BTreeMap<u64, usize> = raw_edges.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let colors: Vec<Color> = verts.values().map(|(c, _)| *c).collect();
    let mut edges = Vec::with_capacity(raw_edges.len());
    for &(b, w, off, ln) in raw_edges.values() {
        let bi = *vid
            .get(&b)
            .ok_or_else(|| DimerError::parse(ln, format!("unknown vertex {b}")))?;
        let wi = *vid
            .get(&w)
            .ok_or_else(|| DimerError::parse(ln, format!("unknown vertex {w}")))?;
        if colors[bi] != Color::Black || colors[wi] != Color::White {
            return Err(DimerError::Bipartite(format!(
                "line {ln}: edge must list a black vertex then a white vertex"
            )));
        }
        edges.push(Edge {
            black: bi,
            white: wi,
            offset: off,
        });
    }
    let mut rot = vec![Vec::new(); colors.len()];
    for (v, (ids, ln)) in &raw_rot {
        let vi = *vid
            .get(v)
            .ok_or_else(|| DimerError::parse(*ln, format!("unknown vertex {v}")))?;
        for id in ids {
            let e = *eid
                .get(id)
                .ok_or_else(|| DimerError::parse(*ln, format!("unknown edge {id}")))?;
            rot[vi].push(e);
        }
    }
    for (v, (_, ln)) in &verts {
        if !raw_rot.contains_key(v) {
            return Err(DimerError::parse(
                *ln,
                format!("vertex {v} has no rotation"),
            ));
        }
    }
    TorusGraph::new(colors, edges, rot)
}

/// The dual quiver of a model.
pub fn dualize(g: &TorusGraph) -> Quiver {
    g.quiver.clone()
}

impl Quiver {
    fn from_dimer(
        colors: &[Color],
        edges: &[Edge],
        rot: &[Vec<usize>],
        faces: &TracedFaces,
    ) -> Result<Quiver, DimerError> {
        let nodes = faces.cycles.len();
        let arrows: Vec<Arrow> = edges
            .iter()
            .enumerate()
            .map(|(e, ed)| {
                let (db, dw) = (2 * e, 2 * e + 1);
                let k_head = faces.copy[db];
                let k_tail = lattice::sub(faces.copy[dw], ed.offset);
                Arrow {
                    tail: faces.face_of[dw],
                    head: faces.face_of[db],
                    edge: e,
                    offset: lattice::sub(k_tail, k_head),
                }
            })
            .collect();
        let qfaces: Vec<QuiverFace> = colors
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                let mut boundary = rot[v].clone();
                if c == Color::White {
                    boundary.reverse();
                }
                QuiverFace { color: c, boundary }
            })
            .collect();
        let na = arrows.len();
        let mut black_face = vec![0; na];
        let mut white_face = vec![0; na];
        let mut black_pos = vec![0; na];
        let mut white_pos = vec![0; na];
        for (f, qf) in qfaces.iter().enumerate() {
            let k = qf.boundary.len();
            let mut sum = lattice::ZERO;
            for (i, &a) in qf.boundary.iter().enumerate() {
                let nxt = qf.boundary[(i + 1) % k];
                if arrows[a].head != arrows[nxt].tail {
                    return Err(DimerError::Topology(format!(
                        "face {f} boundary is not composable"
                    )));
                }
                sum = lattice::add(sum, arrows[a].offset);
                match qf.color {
                    Color::Black => {
                        black_face[a] = f;
                        black_pos[a] = i;
                    }
                    Color::White => {
                        white_face[a] = f;
                        white_pos[a] = i;
                    }
                }
            }
            if sum != lattice::ZERO {
                return Err(DimerError::Topology(format!(
                    "face {f} boundary has nonzero translation"
                )));
            }
        }
        let mut out = vec![Vec::new(); nodes];
        let mut inc = vec![Vec::new(); nodes];
        for (i, a) in arrows.iter().enumerate() {
            out[a.tail].push(i);
            inc[a.head].push(i);
        }
        let mut q = Quiver {
            nodes,
            arrows,
            faces: qfaces,
            black_face,
            white_face,
            black_pos,
            white_pos,
            out,
            inc,
            gamma: [Vec::new(), Vec::new()],
        };
        if !q.strongly_connected() {
            return Err(DimerError::Topology(
                "dual quiver is not strongly connected".into(),
            ));
        }
        q.gamma = q.homology_basis()?;
        Ok(q)
    }

    fn strongly_connected(&self) -> bool {
        let reach = |fwd: bool| {
            let mut seen = vec![false; self.nodes];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(v) = stack.pop() {
                let list = if fwd { &self.out[v] } else { &self.inc[v] };
                for &a in list {
                    let w = if fwd {
                        self.arrows[a].head
                    } else {
                        self.arrows[a].tail
                    };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        self.nodes > 0 && reach(true) && reach(false)
    }

    /// Integer chains over arrows representing cycles with translations
    /// `(1,0)` and `(0,1)`, from fundamental cycles of a spanning tree
    /// combined by Euclidean reduction.
    fn homology_basis(&self) -> Result<[Vec<i64>; 2], DimerError> {
        let na = self.arrows.len();
        let mut pos: Vec<Option<V2>> = vec![None; self.nodes];
        let mut chain_to: Vec<Vec<i64>> = vec![vec![0; na]; self.nodes];
        let mut tree = vec![false; na];
        pos[0] = Some(lattice::ZERO);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let pv = pos[v].unwrap();
            for &a in self.out[v].iter().chain(self.inc[v].iter()) {
                let ar = self.arrows[a];
                let (w, pw, sign) = if ar.tail == v {
                    (ar.head, lattice::add(pv, ar.offset), 1)
                } else {
                    (ar.tail, lattice::sub(pv, ar.offset), -1)
                };
                if pos[w].is_none() {
                    pos[w] = Some(pw);
                    tree[a] = true;
                    let mut c = chain_to[v].clone();
                    c[a] += sign;
                    chain_to[w] = c;
                    queue.push_back(w);
                }
            }
        }
        let mut rows: Vec<(Vec<i64>, V2)> = Vec::new();
        for (a, ar) in self.arrows.iter().enumerate() {
            if tree[a] {
                continue;
            }
            let t = lattice::sub(
                lattice::add(pos[ar.tail].unwrap(), ar.offset),
                pos[ar.head].unwrap(),
            );
            if t == lattice::ZERO {
                continue;
            }
            let mut c = chain_to[ar.tail].clone();
            c[a] += 1;
            for (x, y) in c.iter_mut().zip(&chain_to[ar.head]) {
                *x -= y;
            }
            rows.push((c, t));
        }
        let reduce = |rows: &mut Vec<(Vec<i64>, V2)>, col: usize| -> Option<(Vec<i64>, V2)> {
            loop {
                let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1[col] != 0).collect();
                if nz.is_empty() {
                    return None;
                }
                let p = *nz.iter().min_by_key(|&&i| rows[i].1[col].abs()).unwrap();
                if nz.len() == 1 {
                    return Some(rows.remove(p));
                }
                let pivot = rows[p].clone();
                for &i in &nz {
                    if i == p {
                        continue;
                    }
                    let q = rows[i].1[col] / pivot.1[col];
                    for (x, y) in rows[i].0.iter_mut().zip(&pivot.0) {
                        *x -= q * y;
                    }
                    rows[i].1 = lattice::sub(rows[i].1, lattice::scale(q, pivot.1));
                }
            }
        };
        let bad = || DimerError::Topology("arrow cycles do not generate Z²".into());
        let mut rx = reduce(&mut rows, 0).ok_or_else(bad)?;
        let mut ry = reduce(&mut rows, 1).ok_or_else(bad)?;
        if rx.1[0].abs() != 1 || ry.1[1].abs() != 1 {
            return Err(bad());
        }
        let normalize = |r: &mut (Vec<i64>, V2), col: usize| {
            if r.1[col] < 0 {
                r.0.iter_mut().for_each(|x| *x = -*x);
                r.1 = lattice::neg(r.1);
            }
        };
        normalize(&mut rx, 0);
        normalize(&mut ry, 1);
        let q = rx.1[1];
        for (x, y) in rx.0.iter_mut().zip(&ry.0) {
            *x -= q * y;
        }
        rx.1 = lattice::sub(rx.1, lattice::scale(q, ry.1));
        debug_assert_eq!(rx.1, [1, 0]);
        debug_assert_eq!(ry.1, [0, 1]);
        Ok([rx.0, ry.0])
    }

    /// Number of quiver vertices `|Q0|`.
    pub fn num_nodes(&self) -> usize {
        self.nodes
    }

    /// Number of arrows `|Q1|`.
    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Number of faces `|Q2|`.
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// All arrows.
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// One arrow.
    pub fn arrow(&self, a: usize) -> Arrow {
        self.arrows[a]
    }

    /// All faces (index = dual dimer vertex).
    pub fn faces(&self) -> &[QuiverFace] {
        &self.faces
    }

    /// Arrows leaving vertex `v`.
    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Arrows entering vertex `v`.
    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// The black face containing arrow `a`.
    pub fn black_face(&self, a: usize) -> usize {
        self.black_face[a]
    }

    /// The white face containing arrow `a`.
    pub fn white_face(&self, a: usize) -> usize {
        self.white_face[a]
    }

    /// The arrow after `a` in the boundary of its black face.
    pub fn next_in_black(&self, a: usize) -> usize {
        let b = &self.faces[self.black_face[a]].boundary;
        b[(self.black_pos[a] + 1) % b.len()]
    }

    /// The arrow after `a` in the boundary of its white face.
    pub fn next_in_white(&self, a: usize) -> usize {
        let b = &self.faces[self.white_face[a]].boundary;
        b[(self.white_pos[a] + 1) % b.len()]
    }

    /// Position of `a` in the boundary of the face `f` (which must contain it).
    pub fn position_in_face(&self, f: usize, a: usize) -> usize {
        match self.faces[f].color {
            Color::Black => self.black_pos[a],
            Color::White => self.white_pos[a],
        }
    }

    /// Homology basis chains `[γx, γy]`: integer combinations of arrows
    /// forming cycles with translations `(1,0)` and `(0,1)`.
    pub fn gamma(&self) -> &[Vec<i64>; 2] {
        &self.gamma
    }

    /// True when consecutive arrows compose (the empty path is valid).
    pub fn is_path(&self, p: &[usize]) -> bool {
        p.windows(2)
            .all(|w| self.arrows[w[0]].head == self.arrows[w[1]].tail)
    }

    /// Sum of arrow offsets along a sequence of arrows.
    pub fn path_offset(&self, p: &[usize]) -> V2 {
        p.iter().fold(lattice::ZERO, |s, &a| {
            lattice::add(s, self.arrows[a].offset)
        })
    }

    /// Translation of an integer chain over arrows.
    pub fn chain_offset(&self, c: &[i64]) -> V2 {
        c.iter()
            .zip(&self.arrows)
            .fold(lattice::ZERO, |s, (&k, a)| {
                lattice::add(s, lattice::scale(k, a.offset))
            })
    }

    /// Sub-path of a face boundary strictly after `a` and strictly before
    /// `a` again, i.e. from `head(a)` back to `tail(a)`.
    pub fn face_complement(&self, f: usize, a: usize) -> Vec<usize> {
        let b = &self.faces[f].boundary;
        let i = self.position_in_face(f, a);
        (1..b.len()).map(|k| b[(i + k) % b.len()]).collect()
    }

    /// Boundary of face `f` as a closed path starting at vertex `v`, if
    /// the boundary passes through `v`.
    pub fn face_loop_at(&self, f: usize, v: usize) -> Option<Vec<usize>> {
        let b = &self.faces[f].boundary;
        let i = b.iter().position(|&a| self.arrows[a].tail == v)?;
        Some((0..b.len()).map(|k| b[(i + k) % b.len()]).collect())
    }
}

/// The superpotential `W = Σ_f ± ∂f`, each term rotated to start at its
/// least arrow id.
pub fn superpotential(q: &Quiver) -> Superpotential {
    let terms = q
        .faces
        .iter()
        .map(|f| {
            let i = (0..f.boundary.len())
                .min_by_key(|&i| f.boundary[i])
                .unwrap();
            let mut t = f.boundary.clone();
            t.rotate_left(i);
            (if f.color == Color::Black { 1 } else { -1 }, t)
        })
        .collect();
    Superpotential { terms }
}

/// The F-term relations `p_a^+ = p_a^−`, one per arrow in id order.
pub fn fterm_relations(q: &Quiver) -> Vec<FTerm> {
    (0..q.num_arrows())
        .map(|a| FTerm {
            arrow: a,
            plus: q.face_complement(q.black_face(a), a),
            minus: q.face_complement(q.white_face(a), a),
        })
        .collect()
}

/// Splits vertex `v` by moving the rotation arc `rot[v][start .. start+len]`
/// (cyclically) to a new vertex of the same colour, joined to `v` through a
/// new bivalent vertex of the opposite colour.
pub fn split_vertex(
    g: &TorusGraph,
    v: usize,
    start: usize,
    len: usize,
) -> Result<TorusGraph, DimerError> {
    if v >= g.num_vertices() {
        return Err(DimerError::Invalid(format!("no vertex {v}")));
    }
    let r = &g.rot[v];
    let deg = r.len();
    if len == 0 || len >= deg {
        return Err(DimerError::Invalid(format!(
            "arc length must lie between 1 and {} at vertex {v}",
            deg - 1
        )));
    }
    let arc: Vec<usize> = (0..len).map(|k| r[(start + k) % deg]).collect();
    let rest: Vec<usize> = (len..deg).map(|k| r[(start + k) % deg]).collect();
    let mut colors = g.colors.clone();
    let mut edges = g.edges.clone();
    let mut rot = g.rot.clone();
    let c = colors[v];
    let vp = colors.len();
    colors.push(c);
    let u = colors.len();
    colors.push(c.opposite());
    let e1 = edges.len();
    let e2 = e1 + 1;
    for &e in &arc {
        match c {
            Color::Black => edges[e].black = vp,
            Color::White => edges[e].white = vp,
        }
    }
    let mk = |x: usize, y: usize| match c {
        Color::Black => Edge {
            black: x,
            white: y,
            offset: lattice::ZERO,
        },
        Color::White => Edge {
            black: y,
            white: x,
            offset: lattice::ZERO,
        },
    };
    edges.push(mk(v, u));
    edges.push(mk(vp, u));
    let mut rv = rest;
    rv.push(e1);
    rot[v] = rv;
    let mut rvp = arc;
    rvp.push(e2);
    rot.push(rvp);
    rot.push(vec![e1, e2]);
    TorusGraph::new(colors, edges, rot)
}

/// Removes a bivalent vertex `u`, merging its two neighbours.  Refuses when
/// both edges at `u` lead to the same vertex.
pub fn contract_bivalent(g: &TorusGraph, u: usize) -> Result<TorusGraph, DimerError> {
    if u >= g.num_vertices() || g.rot[u].len() != 2 {
        return Err(DimerError::Invalid(format!("vertex {u} is not bivalent")));
    }
    let (e1, e2) = (g.rot[u][0], g.rot[u][1]);
    let v1 = g.other_end(e1, u);
    let v2 = g.other_end(e2, u);
    if v1 == v2 {
        return Err(DimerError::Invalid(format!(
            "both edges at bivalent vertex {u} lead to vertex {v1}; it cannot be removed"
        )));
    }
    let (o1, o2) = (g.edges[e1].offset, g.edges[e2].offset);
    // Copy of v2 relative to v1 when u sits in copy 0.
    let s = match g.colors[u] {
        Color::White => lattice::sub(o1, o2),
        Color::Black => lattice::sub(o2, o1),
    };
    let v2_black = g.colors[v2] == Color::Black;
    let mut edges = g.edges.clone();
    for &e in &g.rot[v2] {
        if e == e2 {
            continue;
        }
        if v2_black {
            edges[e].black = v1;
            edges[e].offset = lattice::add(edges[e].offset, s);
        } else {
            edges[e].white = v1;
            edges[e].offset = lattice::sub(edges[e].offset, s);
        }
    }
    let r2 = &g.rot[v2];
    let i2 = r2.iter().position(|&e| e == e2).unwrap();
    let moved: Vec<usize> = (1..r2.len()).map(|k| r2[(i2 + k) % r2.len()]).collect();
    let mut rot = g.rot.clone();
    let i1 = rot[v1].iter().position(|&e| e == e1).unwrap();
    rot[v1].splice(i1..=i1, moved);
    // Renumber, dropping vertices u, v2 and edges e1, e2.
    let vmap: Vec<Option<usize>> = {
        let mut next = 0;
        (0..g.num_vertices())
            .map(|x| {
                if x == u || x == v2 {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let emap: Vec<Option<usize>> = {
        let mut next = 0;
        (0..g.num_edges())
            .map(|x| {
                if x == e1 || x == e2 {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let colors = (0..g.num_vertices())
        .filter(|x| vmap[*x].is_some())
        .map(|x| g.colors[x])
        .collect();
    let new_edges = (0..g.num_edges())
        .filter(|x| emap[*x].is_some())
        .map(|x| Edge {
            black: vmap[edges[x].black].unwrap(),
            white: vmap[edges[x].white].unwrap(),
            offset: edges[x].offset,
        })
        .collect();
    let new_rot = (0..g.num_vertices())
        .filter(|x| vmap[*x].is_some())
        .map(|x| rot[x].iter().map(|&e| emap[e].unwrap()).collect())
        .collect();
    TorusGraph::new(colors, new_edges, new_rot)
}

/// Decides whether two models are isomorphic as colour-preserving maps on
/// the torus, up to relabelling, a change of fundamental domain and an
/// orientation-preserving change of lattice basis.
pub fn isomorphic(g: &TorusGraph, h: &TorusGraph) -> bool {
    if g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() {
        return false;
    }
    let mg = build_map(&g.colors, &g.edges, &g.rot);
    let mh = build_map(&h.colors, &h.edges, &h.rot);
    let nd = mg.darts();
    let d0 = 0;
    for cand in 0..nd {
        if g.colors[mg.vertex[d0]] != h.colors[mh.vertex[cand]] {
            continue;
        }
        if let Some(phi) = extend_dart_map(&mg, &mh, d0, cand) {
            if translations_compatible(&mg, &mh, &phi) {
                return true;
            }
        }
    }
    false
}

fn extend_dart_map(mg: &RotationMap, mh: &RotationMap, d0: usize, c0: usize) -> Option<Vec<usize>> {
    let nd = mg.darts();
    let mut phi = vec![usize::MAX; nd];
    let mut used = vec![false; nd];
    let mut stack = vec![(d0, c0)];
    while let Some((d, c)) = stack.pop() {
        if phi[d] != usize::MAX {
            if phi[d] != c {
                return None;
            }
            continue;
        }
        if used[c] || mg.rot[mg.vertex[d]].len() != mh.rot[mh.vertex[c]].len() {
            return None;
        }
        phi[d] = c;
        used[c] = true;
        stack.push((mg.twin[d], mh.twin[c]));
        stack.push((mg.ccw_next(d), mh.ccw_next(c)));
    }
    Some(phi)
}

fn translations_compatible(mg: &RotationMap, mh: &RotationMap, phi: &[usize]) -> bool {
    // Positions from a spanning tree in g; transport to h via phi.
    let nv = mg.rot.len();
    let mut pg: Vec<Option<V2>> = vec![None; nv];
    let mut ph: Vec<Option<V2>> = vec![None; nv];
    let root = mg.vertex[0];
    pg[root] = Some(lattice::ZERO);
    ph[root] = Some(lattice::ZERO);
    let mut stack = vec![root];
    let mut pairs: Vec<(V2, V2)> = Vec::new();
    while let Some(v) = stack.pop() {
        for &d in &mg.rot[v] {
            let w = mg.vertex[mg.twin[d]];
            let tg = lattice::add(pg[v].unwrap(), mg.shift[d]);
            let th = lattice::add(ph[v].unwrap(), mh.shift[phi[d]]);
            match pg[w] {
                None => {
                    pg[w] = Some(tg);
                    ph[w] = Some(th);
                    stack.push(w);
                }
                Some(q) => pairs.push((lattice::sub(tg, q), lattice::sub(th, ph[w].unwrap()))),
            }
        }
    }
    // Find an integral A with det 1 and A t_g = t_h for all pairs.
    let mut basis = None;
    'outer: for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if lattice::wedge(pairs[i].0, pairs[j].0) != 0 {
                basis = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i, j)) = basis else { return false };
    let (t1, t2, s1, s2) = (pairs[i].0, pairs[j].0, pairs[i].1, pairs[j].1);
    let det = lattice::wedge(t1, t2);
    // A = S T^{-1}, T = [t1 t2] as columns.
    let num = [
        [
            s1[0] * t2[1] - s2[0] * t1[1],
            -s1[0] * t2[0] + s2[0] * t1[0],
        ],
        [
            s1[1] * t2[1] - s2[1] * t1[1],
            -s1[1] * t2[0] + s2[1] * t1[0],
        ],
    ];
    if num.iter().flatten().any(|x| x % det != 0) {
        return false;
    }
    let a = [
        [num[0][0] / det, num[0][1] / det],
        [num[1][0] / det, num[1][1] / det],
    ];
    if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 1 {
        return false;
    }
    pairs.iter().all(|(t, s)| {
        [
            a[0][0] * t[0] + a[0][1] * t[1],
            a[1][0] * t[0] + a[1][1] * t[1],
        ] == *s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn hexagonal_counts() {
        let g = fixtures::hexagonal();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (2, 3, 1));
        let q = dualize(&g);
        assert_eq!((q.num_nodes(), q.num_arrows(), q.num_faces()), (1, 3, 2));
    }

    #[test]
    fn gamma_translations_are_standard() {
        for (name, g) in fixtures::all_valid() {
            let q = g.quiver();
            assert_eq!(q.chain_offset(&q.gamma()[0]), [1, 0], "{name}");
            assert_eq!(q.chain_offset(&q.gamma()[1]), [0, 1], "{name}");
        }
    }

    #[test]
    fn gamma_chains_are_cycles() {
        for (_, g) in fixtures::all_valid() {
            let q = g.quiver();
            for c in q.gamma() {
                let mut bal = vec![0i64; q.num_nodes()];
                for (a, &k) in c.iter().enumerate() {
                    bal[q.arrow(a).tail] -= k;
                    bal[q.arrow(a).head] += k;
                }
                assert!(bal.iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn arrows_lie_in_one_black_and_one_white_face() {
        for (_, g) in fixtures::all_valid() {
            let q = g.quiver();
            let mut seen = vec![(0, 0); q.num_arrows()];
            for f in q.faces() {
                for &a in &f.boundary {
                    match f.color {
                        Color::Black => seen[a].0 += 1,
                        Color::White => seen[a].1 += 1,
                    }
                }
            }
            assert!(seen.iter().all(|&s| s == (1, 1)));
        }
    }

    #[test]
    fn rejects_empty_and_malformed() {
        assert!(matches!(
            load("DIMER 1\nvertex 0 B\nvertex 1 W\n"),
            Err(DimerError::Parse { .. })
        ));
        assert!(matches!(load("DIMR 1\n"), Err(DimerError::Parse { .. })));
        assert!(matches!(
            load("DIMER 1\nedge 0 0 1 0\n"),
            Err(DimerError::Parse { .. })
        ));
    }

    #[test]
    fn mirrored_offsets_are_rejected() {
        let g = fixtures::conifold();
        let mirrored: Vec<Edge> = g
            .edges()
            .iter()
            .map(|e| Edge {
                offset: [e.offset[1], e.offset[0]],
                ..*e
            })
            .collect();
        let rot = (0..g.num_vertices())
            .map(|v| g.rotation(v).to_vec())
            .collect();
        let r = TorusGraph::new(g.colors().to_vec(), mirrored, rot);
        assert!(matches!(r, Err(DimerError::Topology(_))));
    }

    #[test]
    fn cube_is_a_sphere() {
        assert!(matches!(load(fixtures::CUBE), Err(DimerError::Topology(_))));
    }

    #[test]
    fn text_round_trip() {
        for (_, g) in fixtures::all_valid() {
            let h = load(&g.to_text(Some("round trip"))).unwrap();
            assert_eq!(h.edges(), g.edges());
            assert_eq!(h.to_text(None), g.to_text(None));
        }
    }
}
