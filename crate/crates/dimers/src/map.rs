//! A generic periodic rotation system ("combinatorial map" on the torus).
//!
//! Darts are half-edges.  Each dart knows its start vertex, its twin (the
//! other half of the same edge) and the lattice translation picked up when
//! it is traversed from its start vertex to the twin's start vertex.  The
//! counterclockwise cyclic order of darts at each vertex determines the
//! faces.  Faces are traced with the face on the left: the successor of a
//! dart `d` is the dart preceding `twin(d)` in the counterclockwise order at
//! the far vertex.  Every face is lifted to the universal cover, which
//! records, for every dart, the fundamental-domain copy of its start vertex
//! in the lift of its face anchored at the face's first dart.

use crate::lattice::{self, V2};

/// A rotation system with lattice translations on darts.
#[derive(Debug, Clone)]
pub(crate) struct RotationMap {
    pub vertex: Vec<usize>,
    pub twin: Vec<usize>,
    pub shift: Vec<V2>,
    pub rot: Vec<Vec<usize>>,
    pub pos: Vec<usize>,
}

/// Faces traced from a [`RotationMap`].
#[derive(Debug, Clone)]
pub(crate) struct TracedFaces {
    /// Each face as the cyclic sequence of darts bounding it (face on the left).
    pub cycles: Vec<Vec<usize>>,
    /// Face index of each dart.
    pub face_of: Vec<usize>,
    /// Copy of the dart's start vertex in its face's lift.
    pub copy: Vec<V2>,
}

/// Failure to trace a map into contractible faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TraceError {
    /// The face starting at this dart does not close up in the universal cover.
    NonContractibleFace(usize),
}

impl RotationMap {
    /// Builds a map; `rot[v]` must list exactly the darts whose vertex is `v`.
    pub fn new(vertex: Vec<usize>, twin: Vec<usize>, shift: Vec<V2>, rot: Vec<Vec<usize>>) -> Self {
        let mut pos = vec![usize::MAX; vertex.len()];
        for r in &rot {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
            }
        }
        RotationMap {
            vertex,
            twin,
            shift,
            rot,
            pos,
        }
    }

    /// Number of darts.
    pub fn darts(&self) -> usize {
        self.vertex.len()
    }

    /// The dart following `d` in the counterclockwise order at its vertex.
    pub fn ccw_next(&self, d: usize) -> usize {
        let r = &self.rot[self.vertex[d]];
        r[(self.pos[d] + 1) % r.len()]
    }

    /// The dart preceding `d` in the counterclockwise order at its vertex.
    pub fn ccw_prev(&self, d: usize) -> usize {
        let r = &self.rot[self.vertex[d]];
        r[(self.pos[d] + r.len() - 1) % r.len()]
    }

    /// Face successor (face kept on the left).
    pub fn face_next(&self, d: usize) -> usize {
        self.ccw_prev(self.twin[d])
    }

    /// Traces all faces and lifts them to the universal cover.
    pub fn trace(&self) -> Result<TracedFaces, TraceError> {
        let n = self.darts();
        let mut face_of = vec![usize::MAX; n];
        let mut copy = vec![lattice::ZERO; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = cycles.len();
            let mut cyc = Vec::new();
            let mut d = start;
            let mut k = lattice::ZERO;
            loop {
                face_of[d] = f;
                copy[d] = k;
                cyc.push(d);
                k = lattice::add(k, self.shift[d]);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            if k != lattice::ZERO {
                return Err(TraceError::NonContractibleFace(start));
            }
            cycles.push(cyc);
        }
        Ok(TracedFaces {
            cycles,
            face_of,
            copy,
        })
    }

    /// Connected-component check over the underlying graph.
    pub fn connected(&self) -> bool {
        let nv = self.rot.len();
        if nv == 0 {
            return false;
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.rot[v] {
                let w = self.vertex[self.twin[d]];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Index of the sublattice of `Z²` generated by the translations of
    /// closed walks (0 when they do not span a rank-two lattice).
    pub fn cycle_lattice_index(&self) -> i64 {
        let nv = self.rot.len();
        let mut p: Vec<Option<V2>> = vec![None; nv];
        if nv == 0 {
            return 0;
        }
        p[0] = Some(lattice::ZERO);
        let mut stack = vec![0];
        let mut gens: Vec<V2> = Vec::new();
        while let Some(v) = stack.pop() {
            for &d in &self.rot[v] {
                let w = self.vertex[self.twin[d]];
                let pw = lattice::add(p[v].unwrap(), self.shift[d]);
                match p[w] {
                    None => {
                        p[w] = Some(pw);
                        stack.push(w);
                    }
                    Some(q) => {
                        let t = lattice::sub(pw, q);
                        if t != lattice::ZERO {
                            gens.push(t);
                        }
                    }
                }
            }
        }
        lattice_index(&gens)
    }
}

/// Index in `Z²` of the lattice generated by `gens` (0 if rank < 2).
pub(crate) fn lattice_index(gens: &[V2]) -> i64 {
    let mut g = 0i64;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            g = num_integer::gcd(g, lattice::wedge(gens[i], gens[j]));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One vertex with two loops on the torus: the standard square map.
    fn square() -> RotationMap {
        // darts: 0 = x out, 1 = x in, 2 = y out, 3 = y in
        RotationMap::new(
            vec![0; 4],
            vec![1, 0, 3, 2],
            vec![[1, 0], [-1, 0], [0, 1], [0, -1]],
            vec![vec![0, 2, 1, 3]],
        )
    }

    #[test]
    fn square_has_one_face_of_length_four() {
        let m = square();
        let f = m.trace().unwrap();
        assert_eq!(f.cycles.len(), 1);
        assert_eq!(f.cycles[0].len(), 4);
        assert_eq!(m.cycle_lattice_index(), 1);
    }

    #[test]
    fn wrong_rotation_gives_noncontractible_faces() {
        let mut m = square();
        m = RotationMap::new(m.vertex, m.twin, m.shift, vec![vec![0, 1, 2, 3]]);
        assert!(m.trace().is_err());
    }
}
