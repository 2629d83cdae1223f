//! Local and global zig-zag fans, extremal perfect matchings `P(σ)`,
//! systems of boundary paths `S(γ)` and external matchings obtained by
//! resonating along zig-zag paths.
//!
//! For a face `f`, the local fan has one ray for each zig-zag path meeting
//! `∂f`; each two-dimensional cone is tagged by the boundary arrow where the
//! representatives of its two rays cross.  For a cone `σ` of the global fan,
//! every face selects the tag of the local cone containing `σ`, and the
//! selections over black faces form the perfect matching `P(σ)`.  If `γ⁺`
//! is the anticlockwise and `γ⁻` the clockwise ray of `σ`, then `P(σ)`
//! contains every zig of `γ⁺` and every zag of `γ⁻`.

use thiserror::Error;

use crate::lattice::{self, V2};
use crate::matchings::{MatchingError, PerfectMatching};
use crate::surface::{Color, Quiver, TorusGraph};
use crate::zigzag::{self, ZigZagPath};

/// Errors from fan constructions; they signal inconsistent input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    /// The model violates a consequence of geometric consistency.
    #[error("fan construction failed: {0}")]
    Inconsistent(String),
    /// A resonance precondition failed.
    #[error("cannot resonate: {0}")]
    CannotResonate(String),
    /// A produced support is not a perfect matching.
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// A complete fan in `R²` given by anticlockwise primitive rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan2D {
    /// Rays sorted anticlockwise from the positive x-axis.
    pub rays: Vec<V2>,
}

impl Fan2D {
    /// Cones as pairs `(clockwise ray, anticlockwise ray)`.
    pub fn cones(&self) -> Vec<(V2, V2)> {
        let n = self.rays.len();
        (0..n)
            .map(|i| (self.rays[i], self.rays[(i + 1) % n]))
            .collect()
    }

    /// Index of the cone containing the direction `v` in its interior.
    pub fn cone_containing(&self, v: V2) -> Option<usize> {
        let n = self.rays.len();
        (0..n).find(|&i| {
            let (a, b) = (self.rays[i], self.rays[(i + 1) % n]);
            lattice::wedge(a, v) > 0 && lattice::wedge(v, b) > 0
        })
    }

    fn check(&self) -> Result<(), FanError> {
        let n = self.rays.len();
        if n < 3 {
            return Err(FanError::Inconsistent(format!(
                "fan with {n} rays is not complete"
            )));
        }
        for (a, b) in self.cones() {
            if lattice::wedge(a, b) <= 0 {
                return Err(FanError::Inconsistent(format!(
                    "cone {a:?}, {b:?} is not strictly convex"
                )));
            }
        }
        Ok(())
    }
}

/// A direction in the interior of the anticlockwise cone from `a` to `b`.
pub fn interior_direction(a: V2, b: V2) -> V2 {
    match lattice::wedge(a, b).signum() {
        1 => lattice::add(a, b),
        0 => [-a[1], a[0]],
        _ => lattice::neg(lattice::add(a, b)),
    }
}

/// The local zig-zag fan of a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFan {
    /// The face.
    pub face: usize,
    /// The fan.
    pub fan: Fan2D,
    /// Representative path (index) for each ray.
    pub reps: Vec<usize>,
    /// Tag arrow of cone `i` (between rays `i` and `i + 1`).
    pub tags: Vec<usize>,
}

/// Local fan of face `f`.
pub fn local_fan(q: &Quiver, paths: &[ZigZagPath], f: usize) -> Result<LocalFan, FanError> {
    let boundary = &q.faces()[f].boundary;
    let mut meet: Vec<(V2, usize)> = paths
        .iter()
        .enumerate()
        .filter(|(_, p)| p.arrows.iter().any(|a| boundary.contains(a)))
        .map(|(i, p)| (p.class, i))
        .collect();
    if meet.iter().any(|(c, _)| *c == lattice::ZERO) {
        return Err(FanError::Inconsistent(format!(
            "a path meeting face {f} has zero class"
        )));
    }
    meet.sort_by(|a, b| lattice::angle_cmp(a.0, b.0).then_with(|| a.cmp(b)));
    for w in meet.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(FanError::Inconsistent(format!(
                "parallel paths {} and {} both meet face {f}",
                w[0].1, w[1].1
            )));
        }
    }
    let fan = Fan2D {
        rays: meet.iter().map(|m| m.0).collect(),
    };
    fan.check()?;
    let reps: Vec<usize> = meet.iter().map(|m| m.1).collect();
    let n = reps.len();
    let mut tags = Vec::with_capacity(n);
    for i in 0..n {
        let (x, y) = (&paths[reps[i]], &paths[reps[(i + 1) % n]]);
        let shared: Vec<usize> = boundary
            .iter()
            .copied()
            .filter(|a| x.arrows.contains(a) && y.arrows.contains(a))
            .collect();
        if shared.len() != 1 {
            return Err(FanError::Inconsistent(format!(
                "paths {} and {} share {} arrows of face {f}",
                reps[i],
                reps[(i + 1) % n],
                shared.len()
            )));
        }
        tags.push(shared[0]);
    }
    Ok(LocalFan {
        face: f,
        fan,
        reps,
        tags,
    })
}

/// Global zig-zag fan: the distinct classes of all paths.
pub fn global_fan(paths: &[ZigZagPath]) -> Result<Fan2D, FanError> {
    if let Some(p) = paths.iter().find(|p| !lattice::is_primitive(p.class)) {
        return Err(FanError::Inconsistent(format!(
            "class {:?} is not primitive",
            p.class
        )));
    }
    let fan = Fan2D {
        rays: lattice::sort_by_angle(paths.iter().map(|p| p.class).collect()),
    };
    fan.check()?;
    Ok(fan)
}

/// Direction of a resonance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    /// Replace the zigs of the path by its zags.
    ZigToZag,
    /// Replace the zags of the path by its zigs.
    ZagToZig,
}

/// `π − Zig(η) + Zag(η)` (or the reverse), checked to be a perfect matching.
pub fn resonate(
    g: &TorusGraph,
    pi: &PerfectMatching,
    path: &ZigZagPath,
    dir: Resonance,
    reference: &[usize],
) -> Result<PerfectMatching, FanError> {
    let (remove, add) = match dir {
        Resonance::ZigToZag => (path.zigs(), path.zags()),
        Resonance::ZagToZig => (path.zags(), path.zigs()),
    };
    if let Some(a) = remove.iter().find(|&&a| !pi.contains(a)) {
        return Err(FanError::CannotResonate(format!(
            "arrow {a} is not in the matching"
        )));
    }
    if let Some(a) = add.iter().find(|&&a| pi.contains(a)) {
        return Err(FanError::CannotResonate(format!(
            "arrow {a} would be used twice"
        )));
    }
    let mut s: Vec<usize> = pi
        .support
        .iter()
        .copied()
        .filter(|a| !remove.contains(a))
        .collect();
    s.extend(add);
    Ok(PerfectMatching::new(g, s, reference)?)
}

/// An extremal perfect matching `P(σ)` with its per-face selections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalMatching {
    /// The cone `(clockwise ray, anticlockwise ray)`.
    pub cone: (V2, V2),
    /// The matching.
    pub matching: PerfectMatching,
    /// The arrow selected at each face.
    pub choice: Vec<usize>,
}

/// Zig-zag fans of a geometrically consistent model.
#[derive(Debug, Clone)]
pub struct ZigZagFans<'a> {
    g: &'a TorusGraph,
    reference: Vec<usize>,
    /// All zig-zag paths.
    pub paths: Vec<ZigZagPath>,
    /// Local fan of every face.
    pub local: Vec<LocalFan>,
    /// The global fan.
    pub global: Fan2D,
}

impl<'a> ZigZagFans<'a> {
    /// Builds all fans; classes of matchings are taken relative to `reference`.
    pub fn new(g: &'a TorusGraph, reference: &[usize]) -> Result<Self, FanError> {
        let q = g.quiver();
        let paths = zigzag::zigzag_paths(q);
        let global = global_fan(&paths)?;
        let local = (0..q.num_faces())
            .map(|f| local_fan(q, &paths, f))
            .collect::<Result<Vec<_>, _>>()?;
        for lf in &local {
            if !lf.fan.rays.iter().all(|r| global.rays.contains(r)) {
                return Err(FanError::Inconsistent(
                    "global fan does not refine a local fan".into(),
                ));
            }
        }
        Ok(ZigZagFans {
            g,
            reference: reference.to_vec(),
            paths,
            local,
            global,
        })
    }

    /// Indices of the paths whose class is `ray`.
    pub fn representatives(&self, ray: V2) -> Vec<usize> {
        (0..self.paths.len())
            .filter(|&i| self.paths[i].class == ray)
            .collect()
    }

    /// `P(σ)` for the cone of the global fan with index `i`.
    pub fn extremal_matching(&self, i: usize) -> Result<ExtremalMatching, FanError> {
        let cone = self.global.cones()[i];
        let v = interior_direction(cone.0, cone.1);
        let q = self.g.quiver();
        let mut choice = Vec::with_capacity(self.local.len());
        for lf in &self.local {
            let c = lf.fan.cone_containing(v).ok_or_else(|| {
                FanError::Inconsistent(format!("no local cone at face {} contains {v:?}", lf.face))
            })?;
            choice.push(lf.tags[c]);
        }
        let pick = |col: Color| {
            let mut s: Vec<usize> = (0..q.num_faces())
                .filter(|&f| q.faces()[f].color == col)
                .map(|f| choice[f])
                .collect();
            s.sort_unstable();
            s
        };
        let (black, white) = (pick(Color::Black), pick(Color::White));
        if black != white {
            return Err(FanError::Inconsistent(
                "black and white selections differ".into(),
            ));
        }
        let matching = PerfectMatching::new(self.g, black, &self.reference)?;
        Ok(ExtremalMatching {
            cone,
            matching,
            choice,
        })
    }

    /// `P(σ)` for every cone, in cone order.
    pub fn extremal_matchings(&self) -> Result<Vec<ExtremalMatching>, FanError> {
        (0..self.global.rays.len())
            .map(|i| self.extremal_matching(i))
            .collect()
    }

    /// The system of boundary paths `S(γ)`: the sum over representatives of
    /// both boundary flows, as a chain over arrows (class `−2k·γ` for `k`
    /// representatives).
    pub fn boundary_system(&self, ray: V2) -> Vec<i64> {
        let q = self.g.quiver();
        let mut s = vec![0; q.num_arrows()];
        for i in self.representatives(ray) {
            let b = zigzag::boundary_flows(q, &self.paths[i]);
            for &a in b.black.iter().chain(&b.white) {
                s[a] += 1;
            }
        }
        s
    }

    /// Index of the cone whose anticlockwise ray is `ray`.
    pub fn cone_before(&self, ray: V2) -> Option<usize> {
        let n = self.global.rays.len();
        let k = self.global.rays.iter().position(|&r| r == ray)?;
        Some((k + n - 1) % n)
    }

    /// Index of the cone whose clockwise ray is `ray`.
    pub fn cone_after(&self, ray: V2) -> Option<usize> {
        self.global.rays.iter().position(|&r| r == ray)
    }

    /// All `2^r` matchings obtained from `P(σ⁺)` (the cone clockwise-bounded
    /// by `ray`, which contains the zags of `ray`) by resonating zags to zigs
    /// along subsets of the `r` representatives of `ray`.
    pub fn external_matchings(&self, ray: V2) -> Result<Vec<PerfectMatching>, FanError> {
        let i = self
            .cone_after(ray)
            .ok_or_else(|| FanError::Inconsistent(format!("{ray:?} is not a ray")))?;
        let start = self.extremal_matching(i)?.matching;
        let reps = self.representatives(ray);
        let mut out = Vec::with_capacity(1 << reps.len());
        for mask in 0u32..(1 << reps.len()) {
            let mut m = start.clone();
            for (k, &p) in reps.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    m = resonate(
                        self.g,
                        &m,
                        &self.paths[p],
                        Resonance::ZagToZig,
                        &self.reference,
                    )?;
                }
            }
            out.push(m);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matchings::enumerate_matchings;

    #[test]
    fn interior_directions() {
        assert_eq!(interior_direction([1, 0], [0, 1]), [1, 1]);
        assert_eq!(interior_direction([1, 0], [-1, 0]), [0, 1]);
        assert_eq!(interior_direction([1, 0], [0, -1]), [-1, 1]);
    }

    #[test]
    fn hexagonal_local_fan_tags_all_arrows() {
        let g = fixtures::hexagonal();
        let q = g.quiver();
        let paths = zigzag::zigzag_paths(q);
        for f in 0..q.num_faces() {
            let lf = local_fan(q, &paths, f).unwrap();
            assert_eq!(lf.fan.rays.len(), 3);
            let mut t = lf.tags.clone();
            t.sort_unstable();
            assert_eq!(t, vec![0, 1, 2]);
        }
    }

    #[test]
    fn tag_is_zig_of_anticlockwise_representative() {
        for g in [
            fixtures::hexagonal(),
            fixtures::conifold(),
            fixtures::memeg(),
        ] {
            let q = g.quiver();
            let paths = zigzag::zigzag_paths(q);
            for f in 0..q.num_faces() {
                let lf = local_fan(q, &paths, f).unwrap();
                let n = lf.reps.len();
                for i in 0..n {
                    let ccw = &paths[lf.reps[(i + 1) % n]];
                    let cw = &paths[lf.reps[i]];
                    assert!(ccw.zigs().contains(&lf.tags[i]));
                    assert!(cw.zags().contains(&lf.tags[i]));
                }
            }
        }
    }

    #[test]
    fn hexagonal_extremal_matchings_are_all_matchings() {
        let g = fixtures::hexagonal();
        let ms = enumerate_matchings(&g);
        let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
        let mut got: Vec<PerfectMatching> = fans
            .extremal_matchings()
            .unwrap()
            .into_iter()
            .map(|e| e.matching)
            .collect();
        got.sort();
        assert_eq!(got, ms);
    }

    #[test]
    fn resonance_round_trip() {
        let g = fixtures::conifold();
        let ms = enumerate_matchings(&g);
        let fans = ZigZagFans::new(&g, &ms[0].support).unwrap();
        let ray = fans.global.rays[0];
        let i = fans.cone_after(ray).unwrap();
        let p = fans.extremal_matching(i).unwrap().matching;
        let z = &fans.paths[fans.representatives(ray)[0]];
        let there = resonate(&g, &p, z, Resonance::ZagToZig, &ms[0].support).unwrap();
        let back = resonate(&g, &there, z, Resonance::ZigToZag, &ms[0].support).unwrap();
        assert_eq!(back, p);
        assert!(resonate(&g, &p, z, Resonance::ZigToZag, &ms[0].support).is_err());
    }
}
