//! Dimer models from configurations of oriented curves on the torus.
//!
//! A [`CurvePattern`] is a 4-valent map on the torus whose vertices are
//! transversal double crossings of closed oriented curves.  Its darts are
//! segment ends: dart `2s` is the start of segment `s` (leaving its `from`
//! crossing) and dart `2s + 1` its end (arriving at its `to` crossing).  The
//! cells of the arrangement come in three kinds: anticlockwise cells (every
//! boundary segment runs counterclockwise around the cell), clockwise cells,
//! and alternating cells.  A *good* pattern turns into a dimer model whose
//! black and white vertices are the anticlockwise and clockwise cells, whose
//! faces are the alternating cells, and whose edges are the crossings; its
//! zig-zag paths are the curves.
//!
//! The module builds the square base patterns, validates patterns, converts
//! them into dimer models, and implements the (unrepaired) merging move that
//! fuses two curves crossing exactly once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::error::DimerError;
use crate::lattice::{self, V2};
use crate::map::{RotationMap, TraceError};
use crate::surface::{Color, Edge, TorusGraph};
use crate::zigzag::{geometric_check, GeomFailure, ZigZagPath};

/// Errors raised while reading, building or transforming a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    /// Malformed input text.
    #[error("parse error on line {line}: {msg}")]
    Parse {
        /// One-based line number (0 when the problem is not tied to a line).
        line: usize,
        /// Description of the problem.
        msg: String,
    },
    /// The records do not describe a 4-valent arrangement of closed curves.
    #[error("invalid pattern: {0}")]
    Invalid(String),
    /// The pattern is not good, so it does not define a dimer model.
    #[error("pattern is not good: {0}")]
    NotGood(String),
    /// The merging move does not apply at the requested crossing.
    #[error("merging move refused: {0}")]
    MergeRefused(String),
    /// The derived dimer model was rejected.
    #[error("derived dimer model is invalid: {0}")]
    Dimer(#[from] DimerError),
}

/// One end of a segment, as seen from the crossing it touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegEnd {
    /// The segment starts here.
    Out(usize),
    /// The segment ends here.
    In(usize),
}

impl SegEnd {
    /// The segment id.
    pub fn segment(self) -> usize {
        match self {
            SegEnd::Out(s) | SegEnd::In(s) => s,
        }
    }

    fn dart(self) -> usize {
        match self {
            SegEnd::Out(s) => 2 * s,
            SegEnd::In(s) => 2 * s + 1,
        }
    }
}

impl fmt::Display for SegEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegEnd::Out(s) => write!(f, "+{s}"),
            SegEnd::In(s) => write!(f, "-{s}"),
        }
    }
}

/// A piece of a curve between two consecutive crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    /// The curve it belongs to.
    pub curve: usize,
    /// Crossing where it starts.
    pub from: usize,
    /// Crossing where it ends.
    pub to: usize,
    /// Copy of `to` relative to the copy of `from`.
    pub offset: V2,
}

/// A closed oriented curve: its segments in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    /// Segment ids in the order of traversal.
    pub segments: Vec<usize>,
}

/// Orientation type of a cell of the arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    /// Every boundary segment runs counterclockwise around the cell.
    Anticlockwise,
    /// Every boundary segment runs clockwise around the cell.
    Clockwise,
    /// Boundary segments alternate in orientation.
    Alternating,
    /// Anything else.
    Mixed,
}

/// A cell of the arrangement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Boundary darts, counterclockwise around the cell.
    pub darts: Vec<usize>,
    /// Copy of each dart's crossing in the cell's lift.
    pub copies: Vec<V2>,
    /// Orientation type.
    pub kind: CellKind,
}

/// A configuration of closed oriented curves on the torus meeting in
/// transversal double crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePattern {
    crossings: Vec<[SegEnd; 4]>,
    segments: Vec<Segment>,
    curves: Vec<Curve>,
}

/// One reason why a pattern is not good.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternFailure {
    /// The two ends of a curve at a crossing are not opposite each other.
    NotTransversal {
        /// The crossing.
        crossing: usize,
    },
    /// A crossing is not a meeting of exactly two distinct curves.
    NotDouble {
        /// The crossing.
        crossing: usize,
    },
    /// A curve has zero class.
    ZeroClass {
        /// The curve.
        curve: usize,
    },
    /// A curve has a non-primitive class.
    NonPrimitive {
        /// The curve.
        curve: usize,
    },
    /// The arrangement is not a cell decomposition of the torus.
    Cells(String),
    /// Two consecutive crossings along a curve have the same sign.
    NotAlternating {
        /// The curve.
        curve: usize,
        /// Position (segment index) of the second crossing of the pair.
        position: usize,
    },
    /// A cell is neither oriented nor alternating.
    MixedCell {
        /// The cell.
        cell: usize,
    },
    /// The lifts of the curves meet in the wrong way.
    Lift(GeomFailure),
}

impl fmt::Display for PatternFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternFailure::NotTransversal { crossing } => {
                write!(f, "crossing {crossing} is not transversal")
            }
            PatternFailure::NotDouble { crossing } => {
                write!(
                    f,
                    "crossing {crossing} is not a double crossing of two curves"
                )
            }
            PatternFailure::ZeroClass { curve } => write!(f, "curve {curve} has zero class"),
            PatternFailure::NonPrimitive { curve } => {
                write!(f, "curve {curve} has a non-primitive class")
            }
            PatternFailure::Cells(msg) => write!(f, "{msg}"),
            PatternFailure::NotAlternating { curve, position } => write!(
                f,
                "crossing signs along curve {curve} do not alternate at segment {position}"
            ),
            PatternFailure::MixedCell { cell } => {
                write!(f, "cell {cell} is neither oriented nor alternating")
            }
            PatternFailure::Lift(g) => write!(f, "lifted curves: {g:?}"),
        }
    }
}

/// Verdict of [`validate_pattern`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternReport {
    /// True when there are no failures.
    pub good: bool,
    /// All failures found.
    pub failures: Vec<PatternFailure>,
}

/// Result of the merging move; the output is not validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merged {
    /// The new pattern.
    pub pattern: CurvePattern,
    /// Always true: the repairing moves are not applied, so the pattern may
    /// need repair before it is good.
    pub unrepaired: bool,
    /// Id of the merged curve in the new pattern.
    pub curve: usize,
}

impl CurvePattern {
    /// Builds a pattern from the counterclockwise segment ends at every
    /// crossing and the segment records.  Curves are traced by continuing
    /// straight through each crossing; they are numbered in the order of
    /// their least segment id.
    pub fn new(crossings: Vec<[SegEnd; 4]>, segments: Vec<Segment>) -> Result<Self, PatternError> {
        let nc = crossings.len();
        let ns = segments.len();
        if ns == 0 {
            return Err(PatternError::Invalid("no segments".into()));
        }
        let mut seen = vec![[false; 2]; ns];
        for (x, ends) in crossings.iter().enumerate() {
            for &e in ends {
                let s = e.segment();
                if s >= ns {
                    return Err(PatternError::Invalid(format!(
                        "crossing {x} refers to unknown segment {s}"
                    )));
                }
                let (side, at) = match e {
                    SegEnd::Out(_) => (0, segments[s].from),
                    SegEnd::In(_) => (1, segments[s].to),
                };
                if at != x {
                    return Err(PatternError::Invalid(format!(
                        "segment {s} does not {} at crossing {x}",
                        if side == 0 { "start" } else { "end" }
                    )));
                }
                if std::mem::replace(&mut seen[s][side], true) {
                    return Err(PatternError::Invalid(format!(
                        "segment end {e} listed twice"
                    )));
                }
            }
        }
        if let Some(s) = seen.iter().position(|b| *b != [true, true]) {
            return Err(PatternError::Invalid(format!(
                "segment {s} is missing from a crossing"
            )));
        }
        for (s, seg) in segments.iter().enumerate() {
            if seg.from >= nc || seg.to >= nc {
                return Err(PatternError::Invalid(format!(
                    "segment {s} has an unknown endpoint"
                )));
            }
        }
        let mut p = CurvePattern {
            crossings,
            segments,
            curves: Vec::new(),
        };
        p.trace_curves()?;
        Ok(p)
    }

    /// Builds a pattern and checks that the given curves agree with the
    /// traced ones (up to numbering and cyclic rotation).
    pub fn with_curves(
        crossings: Vec<[SegEnd; 4]>,
        segments: Vec<Segment>,
        curves: &[Vec<usize>],
    ) -> Result<Self, PatternError> {
        let mut p = CurvePattern::new(crossings, segments)?;
        let canon = |c: &[usize]| {
            let k = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
            let mut v = c.to_vec();
            v.rotate_left(k);
            v
        };
        let mut given: Vec<Vec<usize>> = curves.iter().map(|c| canon(c)).collect();
        let mut traced: Vec<Vec<usize>> = p.curves.iter().map(|c| canon(&c.segments)).collect();
        given.sort();
        traced.sort();
        if given != traced {
            return Err(PatternError::Invalid(
                "curve records disagree with the segments traced through the crossings".into(),
            ));
        }
        // Keep the caller's numbering of curves.
        p.curves = curves
            .iter()
            .map(|c| Curve {
                segments: c.clone(),
            })
            .collect();
        for (i, c) in p.curves.iter().enumerate() {
            for &s in &c.segments {
                p.segments[s].curve = i;
            }
        }
        Ok(p)
    }

    fn trace_curves(&mut self) -> Result<(), PatternError> {
        let ns = self.segments.len();
        let mut curve_of = vec![usize::MAX; ns];
        let mut curves = Vec::new();
        for s0 in 0..ns {
            if curve_of[s0] != usize::MAX {
                continue;
            }
            let mut segs = Vec::new();
            let mut s = s0;
            loop {
                curve_of[s] = curves.len();
                segs.push(s);
                s = self.straight_on(s)?;
                if s == s0 {
                    break;
                }
                if curve_of[s] != usize::MAX {
                    return Err(PatternError::Invalid(format!(
                        "the curve through segment {s0} does not close up"
                    )));
                }
            }
            curves.push(Curve { segments: segs });
        }
        for (s, &c) in curve_of.iter().enumerate() {
            self.segments[s].curve = c;
        }
        self.curves = curves;
        Ok(())
    }

    /// The segment continuing `s` straight through its end crossing.
    fn straight_on(&self, s: usize) -> Result<usize, PatternError> {
        let x = self.segments[s].to;
        let ends = &self.crossings[x];
        let i = ends.iter().position(|&e| e == SegEnd::In(s)).unwrap();
        match ends[(i + 2) % 4] {
            SegEnd::Out(t) => Ok(t),
            SegEnd::In(_) => Err(PatternError::Invalid(format!(
                "crossing {x} is not transversal: the end opposite segment {s} is incoming"
            ))),
        }
    }

    /// Number of crossings.
    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Counterclockwise segment ends at crossing `x`.
    pub fn crossing(&self, x: usize) -> [SegEnd; 4] {
        self.crossings[x]
    }

    /// All segments.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// All curves.
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    /// Homology class of a curve.
    pub fn class(&self, c: usize) -> V2 {
        self.curves[c].segments.iter().fold(lattice::ZERO, |k, &s| {
            lattice::add(k, self.segments[s].offset)
        })
    }

    /// Homology classes of all curves.
    pub fn classes(&self) -> Vec<V2> {
        (0..self.curves.len()).map(|c| self.class(c)).collect()
    }

    /// Curves as flows: the crossings they pass through (starting at the
    /// start of their first segment) with cumulative offsets, in the shape
    /// used by the zig-zag algorithms.  Shared "arrows" are shared crossings.
    pub fn flows(&self) -> Vec<ZigZagPath> {
        self.curves
            .iter()
            .map(|c| {
                let mut arrows = Vec::with_capacity(c.segments.len());
                let mut cumulative = Vec::with_capacity(c.segments.len());
                let mut k = lattice::ZERO;
                for &s in &c.segments {
                    arrows.push(self.segments[s].from);
                    cumulative.push(k);
                    k = lattice::add(k, self.segments[s].offset);
                }
                ZigZagPath {
                    arrows,
                    cumulative,
                    class: k,
                }
            })
            .collect()
    }

    /// Sign of the crossing where segment `s` starts, seen from its curve:
    /// `+1` when the other curve crosses from right to left.
    pub fn sign_at_start(&self, s: usize) -> i8 {
        let ends = &self.crossings[self.segments[s].from];
        let i = ends.iter().position(|&e| e == SegEnd::Out(s)).unwrap();
        match ends[(i + 1) % 4] {
            SegEnd::Out(_) => 1,
            SegEnd::In(_) => -1,
        }
    }

    fn rotation_map(&self) -> RotationMap {
        let nd = 2 * self.segments.len();
        let mut vertex = vec![0; nd];
        let mut twin = vec![0; nd];
        let mut shift = vec![lattice::ZERO; nd];
        for (s, seg) in self.segments.iter().enumerate() {
            vertex[2 * s] = seg.from;
            vertex[2 * s + 1] = seg.to;
            twin[2 * s] = 2 * s + 1;
            twin[2 * s + 1] = 2 * s;
            shift[2 * s] = seg.offset;
            shift[2 * s + 1] = lattice::neg(seg.offset);
        }
        let rot = self
            .crossings
            .iter()
            .map(|ends| ends.iter().map(|e| e.dart()).collect())
            .collect();
        RotationMap::new(vertex, twin, shift, rot)
    }

    /// The cells of the arrangement, traced with the cell on the left of
    /// each dart.  Fails unless the arrangement is a connected cell
    /// decomposition of the torus whose closed walks span `Z²`.
    pub fn cells(&self) -> Result<Vec<Cell>, PatternFailure> {
        let map = self.rotation_map();
        if !map.connected() {
            return Err(PatternFailure::Cells(
                "the arrangement is disconnected".into(),
            ));
        }
        let traced = map.trace().map_err(|TraceError::NonContractibleFace(d)| {
            PatternFailure::Cells(format!(
                "the cell along segment {} does not close up in the plane",
                d / 2
            ))
        })?;
        let euler =
            self.crossings.len() as i64 - self.segments.len() as i64 + traced.cycles.len() as i64;
        if euler != 0 {
            return Err(PatternFailure::Cells(format!(
                "Euler characteristic {euler}; the cells do not decompose a torus"
            )));
        }
        let index = map.cycle_lattice_index();
        if index != 1 {
            return Err(PatternFailure::Cells(format!(
                "cycle translations generate a sublattice of index {index}, not Z²"
            )));
        }
        Ok(traced
            .cycles
            .iter()
            .map(|cyc| {
                let forward: Vec<bool> = cyc.iter().map(|d| d % 2 == 0).collect();
                let n = forward.len();
                let kind = if forward.iter().all(|&f| f) {
                    CellKind::Anticlockwise
                } else if forward.iter().all(|&f| !f) {
                    CellKind::Clockwise
                } else if n.is_multiple_of(2) && (0..n).all(|i| forward[i] != forward[(i + 1) % n])
                {
                    CellKind::Alternating
                } else {
                    CellKind::Mixed
                };
                Cell {
                    darts: cyc.clone(),
                    copies: cyc.iter().map(|&d| traced.copy[d]).collect(),
                    kind,
                }
            })
            .collect())
    }

    /// Serialises the pattern in the PATTERN text format.
    pub fn to_text(&self, comment: Option<&str>) -> String {
        let mut s = String::from("PATTERN 1\n");
        if let Some(c) = comment {
            for line in c.lines() {
                let _ = writeln!(s, "# {line}");
            }
        }
        for (x, ends) in self.crossings.iter().enumerate() {
            let _ = writeln!(
                s,
                "crossing {x} {} {} {} {}",
                ends[0], ends[1], ends[2], ends[3]
            );
        }
        for (i, seg) in self.segments.iter().enumerate() {
            let _ = writeln!(
                s,
                "segment {i} {} {} {} {} {}",
                seg.curve, seg.from, seg.to, seg.offset[0], seg.offset[1]
            );
        }
        for (c, curve) in self.curves.iter().enumerate() {
            let ids: Vec<String> = curve.segments.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "curve {c} {}", ids.join(" "));
        }
        s
    }
}

/// The square base pattern: `n` curves of each class `(±1, 0)`, `(0, ±1)`
/// on a `2n × 2n` grid.  Vertical curve `i` runs up for even `i` and down
/// for odd `i`; horizontal curve `j` runs right for even `j` and left for odd
/// `j`.  Crossing `(i, j)` has id `2n·j + i`.
pub fn square_pattern(n: usize) -> CurvePattern {
    assert!(n >= 1, "square_pattern needs n ≥ 1");
    let m = 2 * n;
    let id = |i: usize, j: usize| m * j + i;
    let mut segments = Vec::with_capacity(2 * m * m);
    // Vertical curve i: segment between rows j and j + 1 (mod m), id m·i + j.
    for i in 0..m {
        for j in 0..m {
            let (lo, hi) = (id(i, j), id(i, (j + 1) % m));
            let wrap = if j + 1 == m { 1 } else { 0 };
            let seg = if i % 2 == 0 {
                Segment {
                    curve: 0,
                    from: lo,
                    to: hi,
                    offset: [0, wrap],
                }
            } else {
                Segment {
                    curve: 0,
                    from: hi,
                    to: lo,
                    offset: [0, -wrap],
                }
            };
            segments.push(seg);
        }
    }
    // Horizontal curve j: segment between columns i and i + 1, id m² + m·j + i.
    for j in 0..m {
        for i in 0..m {
            let (lo, hi) = (id(i, j), id((i + 1) % m, j));
            let wrap = if i + 1 == m { 1 } else { 0 };
            let seg = if j % 2 == 0 {
                Segment {
                    curve: 0,
                    from: lo,
                    to: hi,
                    offset: [wrap, 0],
                }
            } else {
                Segment {
                    curve: 0,
                    from: hi,
                    to: lo,
                    offset: [-wrap, 0],
                }
            };
            segments.push(seg);
        }
    }
    let vert = |i: usize, j: usize| m * i + j;
    let horiz = |i: usize, j: usize| m * m + m * j + i;
    let mut crossings = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            // Segment ends in the directions east, north, west, south.
            let below = vert(i, (j + m - 1) % m);
            let above = vert(i, j);
            let left = horiz((i + m - 1) % m, j);
            let right = horiz(i, j);
            let (north, south) = if i % 2 == 0 {
                (SegEnd::Out(above), SegEnd::In(below))
            } else {
                (SegEnd::In(above), SegEnd::Out(below))
            };
            let (east, west) = if j % 2 == 0 {
                (SegEnd::Out(right), SegEnd::In(left))
            } else {
                (SegEnd::In(right), SegEnd::Out(left))
            };
            crossings.push([east, north, west, south]);
        }
    }
    CurvePattern::new(crossings, segments).expect("the square grid is a valid arrangement")
}

/// Checks that a pattern is good: transversal double crossings, closed
/// curves with primitive non-zero classes, a cell decomposition of the
/// torus, alternating crossing signs along every curve, oriented or
/// alternating cells only, and lifts meeting as zig-zag paths of a
/// geometrically consistent model do.
pub fn validate_pattern(c: &CurvePattern) -> PatternReport {
    let mut failures = Vec::new();
    for (x, ends) in c.crossings.iter().enumerate() {
        let curves: BTreeSet<usize> = ends.iter().map(|e| c.segments[e.segment()].curve).collect();
        if curves.len() != 2 {
            failures.push(PatternFailure::NotDouble { crossing: x });
        }
        let transversal = (0..2).all(|i| {
            let (a, b) = (ends[i], ends[i + 2]);
            c.segments[a.segment()].curve == c.segments[b.segment()].curve
                && matches!(
                    (a, b),
                    (SegEnd::Out(_), SegEnd::In(_)) | (SegEnd::In(_), SegEnd::Out(_))
                )
        });
        if !transversal {
            failures.push(PatternFailure::NotTransversal { crossing: x });
        }
    }
    for (i, k) in c.classes().into_iter().enumerate() {
        if k == lattice::ZERO {
            failures.push(PatternFailure::ZeroClass { curve: i });
        } else if !lattice::is_primitive(k) {
            failures.push(PatternFailure::NonPrimitive { curve: i });
        }
    }
    match c.cells() {
        Ok(cells) => {
            for (i, cell) in cells.iter().enumerate() {
                if cell.kind == CellKind::Mixed {
                    failures.push(PatternFailure::MixedCell { cell: i });
                }
            }
        }
        Err(f) => failures.push(f),
    }
    for (i, curve) in c.curves.iter().enumerate() {
        let segs = &curve.segments;
        let n = segs.len();
        for p in 0..n {
            if c.sign_at_start(segs[p]) == c.sign_at_start(segs[(p + 1) % n]) {
                failures.push(PatternFailure::NotAlternating {
                    curve: i,
                    position: (p + 1) % n,
                });
            }
        }
    }
    // Self-meetings are already reported as non-double crossings, and zero
    // or non-primitive classes above.
    for g in geometric_check(&c.flows()).failures {
        if matches!(
            g,
            GeomFailure::ParallelShare { .. } | GeomFailure::CosetCount { .. }
        ) {
            failures.push(PatternFailure::Lift(g));
        }
    }
    PatternReport {
        good: failures.is_empty(),
        failures,
    }
}

/// Converts a good pattern into a dimer model: anticlockwise cells become
/// black vertices, clockwise cells white vertices, and every crossing the
/// edge joining the oriented cells at its two oriented corners.
pub fn pattern_to_dimer(c: &CurvePattern) -> Result<TorusGraph, PatternError> {
    let report = validate_pattern(c);
    if !report.good {
        let msgs: Vec<String> = report.failures.iter().map(|f| f.to_string()).collect();
        return Err(PatternError::NotGood(msgs.join("; ")));
    }
    let cells = c
        .cells()
        .map_err(|f| PatternError::NotGood(f.to_string()))?;
    let mut vertex_of_cell = vec![usize::MAX; cells.len()];
    let mut colors = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        let color = match cell.kind {
            CellKind::Anticlockwise => Color::Black,
            CellKind::Clockwise => Color::White,
            CellKind::Alternating => continue,
            CellKind::Mixed => {
                return Err(PatternError::NotGood(format!(
                    "cell {i} is neither oriented nor alternating"
                )))
            }
        };
        vertex_of_cell[i] = colors.len();
        colors.push(color);
    }
    // Corner of each crossing in each oriented cell, with the crossing's
    // copy in the cell's lift.
    let nx = c.num_crossings();
    let mut corner: Vec<[Option<(usize, V2)>; 2]> = vec![[None, None]; nx];
    let mut rot = vec![Vec::new(); colors.len()];
    for (i, cell) in cells.iter().enumerate() {
        let v = vertex_of_cell[i];
        if v == usize::MAX {
            continue;
        }
        let side = usize::from(colors[v] == Color::White);
        for (&d, &k) in cell.darts.iter().zip(&cell.copies) {
            let s = &c.segments[d / 2];
            let x = if d % 2 == 0 { s.from } else { s.to };
            if corner[x][side].replace((v, k)).is_some() {
                return Err(PatternError::NotGood(format!(
                    "crossing {x} has two corners of the same orientation"
                )));
            }
            rot[v].push(x);
        }
    }
    let mut edges = Vec::with_capacity(nx);
    for (x, sides) in corner.iter().enumerate() {
        match *sides {
            [Some((b, kb)), Some((w, kw))] => edges.push(Edge {
                black: b,
                white: w,
                offset: lattice::sub(kb, kw),
            }),
            _ => {
                return Err(PatternError::NotGood(format!(
                    "crossing {x} lacks an oriented corner of each kind"
                )))
            }
        }
    }
    Ok(TorusGraph::new(colors, edges, rot)?)
}

/// The merging move at crossing `x`: the two curves through `x` are cut
/// there and reconnected, so that the crossing disappears and the two
/// curves become one whose class is the sum of theirs.  The curves must
/// meet only at `x`.  The result is not repaired and may not be good.
pub fn merging_move(c: &CurvePattern, x: usize) -> Result<Merged, PatternError> {
    if x >= c.num_crossings() {
        return Err(PatternError::MergeRefused(format!("no crossing {x}")));
    }
    let ends = c.crossings[x];
    let curve_of = |e: SegEnd| c.segments[e.segment()].curve;
    let (ca, cb) = (curve_of(ends[0]), curve_of(ends[1]));
    if ca == cb || curve_of(ends[2]) != ca || curve_of(ends[3]) != cb {
        return Err(PatternError::MergeRefused(format!(
            "crossing {x} is not a transversal crossing of two curves"
        )));
    }
    let meetings = c
        .crossings
        .iter()
        .filter(|e| {
            let s: BTreeSet<usize> = e.iter().map(|&t| curve_of(t)).collect();
            s.contains(&ca) && s.contains(&cb)
        })
        .count();
    if meetings != 1 {
        return Err(PatternError::MergeRefused(format!(
            "curves {ca} and {cb} cross {meetings} times"
        )));
    }
    let find = |curve: usize, out: bool| -> usize {
        ends.iter()
            .find(|&&e| curve_of(e) == curve && matches!(e, SegEnd::Out(_)) == out)
            .unwrap()
            .segment()
    };
    let (a_in, a_out, b_in, b_out) = (
        find(ca, false),
        find(ca, true),
        find(cb, false),
        find(cb, true),
    );
    if a_in == a_out && b_in == b_out {
        return Err(PatternError::MergeRefused(
            "the merged curve would have no crossings".into(),
        ));
    }
    let mut segs: Vec<Option<Segment>> = c.segments.iter().copied().map(Some).collect();
    let mut crossings: Vec<Option<[SegEnd; 4]>> = c.crossings.iter().copied().map(Some).collect();
    crossings[x] = None;
    // Fuse `first` (ending at x) with `second` (starting at x) into `first`.
    let mut fuse = |first: usize, second: usize, crossings: &mut Vec<Option<[SegEnd; 4]>>| {
        let s2 = segs[second].take().unwrap();
        let s1 = segs[first].as_mut().unwrap();
        s1.to = s2.to;
        s1.offset = lattice::add(s1.offset, s2.offset);
        if let Some(e) = crossings[s2.to].as_mut() {
            for t in e.iter_mut() {
                if *t == SegEnd::In(second) {
                    *t = SegEnd::In(first);
                }
            }
        }
    };
    // When `b` is a single loop through x it is absorbed into `a_in` first.
    let b_in_alias = if b_in == b_out { a_in } else { b_in };
    fuse(a_in, b_out, &mut crossings);
    fuse(b_in_alias, a_out, &mut crossings);
    // Renumber segments and crossings.
    let seg_id: BTreeMap<usize, usize> = segs
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_some())
        .enumerate()
        .map(|(new, (old, _))| (old, new))
        .collect();
    let x_id = |old: usize| if old > x { old - 1 } else { old };
    let new_segments: Vec<Segment> = segs
        .into_iter()
        .flatten()
        .map(|s| Segment {
            curve: 0,
            from: x_id(s.from),
            to: x_id(s.to),
            offset: s.offset,
        })
        .collect();
    let new_crossings: Vec<[SegEnd; 4]> = crossings
        .into_iter()
        .flatten()
        .map(|e| {
            e.map(|t| match t {
                SegEnd::Out(s) => SegEnd::Out(seg_id[&s]),
                SegEnd::In(s) => SegEnd::In(seg_id[&s]),
            })
        })
        .collect();
    let pattern = CurvePattern::new(new_crossings, new_segments)?;
    let curve = pattern.segments[seg_id[&b_in_alias]].curve;
    Ok(Merged {
        pattern,
        unrepaired: true,
        curve,
    })
}

/// Parses the PATTERN text format.
///
/// ```text
/// PATTERN 1
/// crossing <id> <end> <end> <end> <end>    # counterclockwise; +s leaves, -s arrives
/// segment <id> <curve> <from> <to> <dx> <dy>
/// curve <id> <segment>...
/// ```
///
/// Ids may be arbitrary non-negative integers; they are renumbered `0..n`
/// in increasing order.  Curve records are optional; when present they must
/// agree with the curves traced through the crossings.
pub fn parse_pattern(text: &str) -> Result<CurvePattern, PatternError> {
    let perr = |line: usize, msg: String| PatternError::Parse { line, msg };
    let mut header = false;
    let mut raw_x: BTreeMap<u64, ([(bool, u64); 4], usize)> = BTreeMap::new();
    let mut raw_s: BTreeMap<u64, (u64, u64, u64, V2, usize)> = BTreeMap::new();
    let mut raw_c: BTreeMap<u64, (Vec<u64>, usize)> = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if !header {
            if tok == ["PATTERN", "1"] {
                header = true;
                continue;
            }
            return Err(perr(ln, "expected header `PATTERN 1`".into()));
        }
        let int = |s: &str| -> Result<u64, PatternError> {
            s.parse::<u64>()
                .map_err(|_| perr(ln, format!("expected an id, found `{s}`")))
        };
        let sint = |s: &str| -> Result<i64, PatternError> {
            s.parse::<i64>()
                .map_err(|_| perr(ln, format!("expected an integer, found `{s}`")))
        };
        match tok[0] {
            "crossing" => {
                if tok.len() != 6 {
                    return Err(perr(ln, "usage: crossing <id> ±s ±s ±s ±s".into()));
                }
                let mut ends = [(false, 0); 4];
                for (k, t) in tok[2..].iter().enumerate() {
                    let out = match t.as_bytes().first() {
                        Some(b'+') => true,
                        Some(b'-') => false,
                        _ => {
                            return Err(perr(ln, format!("segment end `{t}` needs a sign + or -")))
                        }
                    };
                    ends[k] = (out, int(&t[1..])?);
                }
                if raw_x.insert(int(tok[1])?, (ends, ln)).is_some() {
                    return Err(perr(ln, "duplicate crossing id".into()));
                }
            }
            "segment" => {
                if tok.len() != 7 {
                    return Err(perr(
                        ln,
                        "usage: segment <id> <curve> <from> <to> <dx> <dy>".into(),
                    ));
                }
                let rec = (
                    int(tok[2])?,
                    int(tok[3])?,
                    int(tok[4])?,
                    [sint(tok[5])?, sint(tok[6])?],
                    ln,
                );
                if raw_s.insert(int(tok[1])?, rec).is_some() {
                    return Err(perr(ln, "duplicate segment id".into()));
                }
            }
            "curve" => {
                if tok.len() < 3 {
                    return Err(perr(ln, "usage: curve <id> <segment>...".into()));
                }
                let ids = tok[2..]
                    .iter()
                    .map(|s| int(s))
                    .collect::<Result<Vec<_>, _>>()?;
                if raw_c.insert(int(tok[1])?, (ids, ln)).is_some() {
                    return Err(perr(ln, "duplicate curve id".into()));
                }
            }
            other => return Err(perr(ln, format!("unknown record `{other}`"))),
        }
    }
    if !header {
        return Err(perr(0, "missing header `PATTERN 1`".into()));
    }
    let xid: BTreeMap<u64, usize> = raw_x.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let sid: BTreeMap<u64, usize> = raw_s.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let cid: BTreeMap<u64, usize> = raw_c.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut segments = Vec::with_capacity(raw_s.len());
    for &(curve, from, to, offset, ln) in raw_s.values() {
        let look = |k: u64| {
            xid.get(&k)
                .copied()
                .ok_or_else(|| perr(ln, format!("unknown crossing {k}")))
        };
        let curve = if raw_c.is_empty() {
            0
        } else {
            *cid.get(&curve)
                .ok_or_else(|| perr(ln, format!("unknown curve {curve}")))?
        };
        segments.push(Segment {
            curve,
            from: look(from)?,
            to: look(to)?,
            offset,
        });
    }
    let mut crossings = Vec::with_capacity(raw_x.len());
    for (ends, ln) in raw_x.values() {
        let mut out = [SegEnd::Out(0); 4];
        for (k, &(o, s)) in ends.iter().enumerate() {
            let s = *sid
                .get(&s)
                .ok_or_else(|| perr(*ln, format!("unknown segment {s}")))?;
            out[k] = if o { SegEnd::Out(s) } else { SegEnd::In(s) };
        }
        crossings.push(out);
    }
    if raw_c.is_empty() {
        return CurvePattern::new(crossings, segments);
    }
    let mut curves = Vec::with_capacity(raw_c.len());
    for (c, (ids, ln)) in &raw_c {
        let mut v = Vec::with_capacity(ids.len());
        for s in ids {
            let si = *sid
                .get(s)
                .ok_or_else(|| perr(*ln, format!("unknown segment {s}")))?;
            if segments[si].curve != cid[c] {
                return Err(perr(
                    *ln,
                    format!("segment {s} is recorded on a different curve"),
                ));
            }
            v.push(si);
        }
        curves.push(v);
    }
    CurvePattern::with_curves(crossings, segments, &curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zigzag::{normal_polygon_doubled_area, zigzag_paths};

    #[test]
    fn square_pattern_counts() {
        for n in 1..=3 {
            let p = square_pattern(n);
            assert_eq!(p.num_crossings(), 4 * n * n);
            assert_eq!(p.curves().len(), 4 * n);
            let mut classes = p.classes();
            classes.sort();
            let mut expected = Vec::new();
            for k in [[-1, 0], [0, -1], [0, 1], [1, 0]] {
                expected.extend(std::iter::repeat_n(k, n));
            }
            expected.sort();
            assert_eq!(classes, expected);
            let cells = p.cells().unwrap();
            let count = |k| cells.iter().filter(|c| c.kind == k).count();
            assert_eq!(count(CellKind::Anticlockwise), n * n);
            assert_eq!(count(CellKind::Clockwise), n * n);
            assert_eq!(count(CellKind::Alternating), 2 * n * n);
        }
    }

    #[test]
    fn square_patterns_are_good() {
        for n in 1..=3 {
            let r = validate_pattern(&square_pattern(n));
            assert!(r.good, "{n}: {:?}", r.failures);
        }
    }

    #[test]
    fn square_pattern_gives_dimer_with_matching_zigzags() {
        for n in 1..=3 {
            let p = square_pattern(n);
            let g = pattern_to_dimer(&p).unwrap();
            assert_eq!(g.num_vertices(), 2 * n * n);
            assert_eq!(g.num_edges(), 4 * n * n);
            assert_eq!(g.quiver().num_nodes(), 2 * n * n);
            let mut zz: Vec<V2> = zigzag_paths(g.quiver()).iter().map(|z| z.class).collect();
            let mut cc = p.classes();
            zz.sort();
            cc.sort();
            assert_eq!(zz, cc);
        }
    }

    #[test]
    fn text_round_trip() {
        let p = square_pattern(2);
        let q = parse_pattern(&p.to_text(Some("square"))).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_pattern(""), Err(PatternError::Parse { .. })));
        assert!(matches!(
            parse_pattern("PATTERN 1\ncrossing 0 0 +1 -0 -1\n"),
            Err(PatternError::Parse { line: 2, .. })
        ));
        let mut text = square_pattern(1).to_text(None);
        text = text.replace("curve 0 ", "curve 0 1 ");
        assert!(parse_pattern(&text).is_err());
    }

    #[test]
    fn contractible_curve_fails() {
        // A contractible loop through one crossing with an essential curve.
        let segs = vec![
            Segment {
                curve: 0,
                from: 0,
                to: 0,
                offset: [0, 0],
            },
            Segment {
                curve: 0,
                from: 0,
                to: 0,
                offset: [1, 0],
            },
        ];
        let p = CurvePattern::new(
            vec![[SegEnd::Out(0), SegEnd::Out(1), SegEnd::In(0), SegEnd::In(1)]],
            segs,
        )
        .unwrap();
        assert_eq!(p.curves().len(), 2);
        assert!(p.classes().contains(&[0, 0]));
        let r = validate_pattern(&p);
        assert!(!r.good);
        assert!(r
            .failures
            .iter()
            .any(|f| matches!(f, PatternFailure::ZeroClass { .. })));
    }

    #[test]
    fn merging_the_smallest_square_gives_the_hexagonal_model() {
        let p = square_pattern(1);
        // Crossing 0 joins vertical curve 0 (up) and horizontal curve 0 (right).
        let m = merging_move(&p, 0).unwrap();
        assert!(m.unrepaired);
        let q = &m.pattern;
        assert_eq!(q.num_crossings(), p.num_crossings() - 1);
        assert_eq!(q.curves().len(), p.curves().len() - 1);
        assert_eq!(q.class(m.curve), [1, 1]);
        let before = normal_polygon_doubled_area(&p.flows()).unwrap();
        let after = normal_polygon_doubled_area(&q.flows()).unwrap();
        assert_eq!(before - after, 1);
        // Here no repair is needed: three curves meeting pairwise once.
        assert!(validate_pattern(q).good);
        let g = pattern_to_dimer(q).unwrap();
        assert_eq!(
            (g.num_vertices(), g.num_edges(), g.quiver().num_nodes()),
            (2, 3, 1)
        );
    }

    #[test]
    fn merging_move_on_larger_squares() {
        for n in 2..=3 {
            let p = square_pattern(n);
            let before = normal_polygon_doubled_area(&p.flows()).unwrap();
            for x in 0..p.num_crossings() {
                let m = merging_move(&p, x).unwrap();
                let q = &m.pattern;
                assert_eq!(q.num_crossings(), p.num_crossings() - 1);
                let after = normal_polygon_doubled_area(&q.flows()).unwrap();
                assert_eq!(before - after, 1);
                let k = q.class(m.curve);
                assert!(k[0].abs() == 1 && k[1].abs() == 1);
                // A single merge keeps crossing signs alternating; these
                // outputs happen to be good and give consistent models.
                assert!(validate_pattern(q).good, "n={n} x={x}");
                let g = pattern_to_dimer(q).unwrap();
                assert_eq!(g.quiver().num_nodes() as i64, after);
            }
        }
    }

    #[test]
    fn merging_refuses_multiple_crossings() {
        // After merging a vertical and a horizontal curve, and then the
        // result with a second vertical curve, the merged curve meets every
        // other horizontal curve twice.
        let p = square_pattern(2);
        let once = merging_move(&p, 0).unwrap();
        let c = once.curve;
        let q = once.pattern;
        let x = (0..q.num_crossings())
            .find(|&x| {
                let ends = q.crossing(x);
                let k: Vec<V2> = ends
                    .iter()
                    .map(|e| q.class(q.segments()[e.segment()].curve))
                    .collect();
                ends.iter().any(|e| q.segments()[e.segment()].curve == c) && k.contains(&[0, -1])
            })
            .unwrap();
        let twice = merging_move(&q, x).unwrap().pattern;
        let refused = (0..twice.num_crossings())
            .filter(|&x| matches!(merging_move(&twice, x), Err(PatternError::MergeRefused(_))))
            .count();
        assert!(refused > 0);
        // The repeated merge is no longer good: parallel lifts now meet.
        let r = validate_pattern(&twice);
        assert!(!r.good);
        assert!(r
            .failures
            .iter()
            .any(|f| matches!(f, PatternFailure::Lift(_))));
    }
}
