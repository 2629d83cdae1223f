//! Perfect matchings: exhaustive enumeration, Hall and non-degeneracy
//! tests, relative homology classes and integral Birkhoff–von Neumann
//! decomposition.
//!
//! Through duality a matching is also a 0/1 weight on quiver arrows whose
//! sum around every quiver face is 1; arrow ids equal edge ids, so the
//! support is the same set of integers in either picture.

use thiserror::Error;

use crate::lattice::V2;
use crate::surface::{Quiver, TorusGraph};

/// Errors from matching operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    /// The weight vector does not have constant coboundary.
    #[error("weights are not a multiple of the all-ones coboundary: {0}")]
    NotBalanced(String),
    /// A maximum-matching step failed inside the decomposition.
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    /// A support does not define a perfect matching.
    #[error("not a perfect matching: {0}")]
    NotPerfect(String),
}

/// A perfect matching with its class relative to a reference matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    /// Support: sorted edge (= arrow) ids.
    pub support: Vec<usize>,
    /// Relative homology class `(⟨π−π0, γx⟩, ⟨π−π0, γy⟩)`.
    pub class: V2,
}

impl PerfectMatching {
    /// Builds a matching from its support, checking perfectness, with class
    /// relative to `reference`.
    pub fn new(
        g: &TorusGraph,
        mut support: Vec<usize>,
        reference: &[usize],
    ) -> Result<Self, MatchingError> {
        support.sort_unstable();
        support.dedup();
        if !is_perfect(g, &support) {
            return Err(MatchingError::NotPerfect(format!("{support:?}")));
        }
        let class = pm_class(&support, reference, g.quiver());
        Ok(PerfectMatching { support, class })
    }

    /// The matching as a 0/1 vector over arrows.
    pub fn indicator(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &e in &self.support {
            v[e] = 1;
        }
        v
    }

    /// Whether arrow `a` is in the support.
    pub fn contains(&self, a: usize) -> bool {
        self.support.binary_search(&a).is_ok()
    }

    /// Pairing with an integer chain over arrows.
    pub fn eval_chain(&self, c: &[i64]) -> i64 {
        self.support.iter().map(|&e| c[e]).sum()
    }
}

/// True when `support` covers every dimer vertex exactly once.
pub fn is_perfect(g: &TorusGraph, support: &[usize]) -> bool {
    let mut cover = vec![0u32; g.num_vertices()];
    for &e in support {
        if e >= g.num_edges() {
            return false;
        }
        let ed = g.edges()[e];
        cover[ed.black] += 1;
        cover[ed.white] += 1;
    }
    cover.iter().all(|&c| c == 1)
}

/// Relative class `(⟨π−π0, γx⟩, ⟨π−π0, γy⟩)` of two supports.
pub fn pm_class(pi: &[usize], pi0: &[usize], q: &Quiver) -> V2 {
    let g = q.gamma();
    let ev = |s: &[usize], c: &[i64]| s.iter().map(|&e| c[e]).sum::<i64>();
    [
        ev(pi, &g[0]) - ev(pi0, &g[0]),
        ev(pi, &g[1]) - ev(pi0, &g[1]),
    ]
}

/// All perfect matchings, sorted by support; classes are relative to the
/// first (lexicographically least) one.
pub fn enumerate_matchings(g: &TorusGraph) -> Vec<PerfectMatching> {
    let blacks = g.black_vertices();
    if blacks.len() != g.white_vertices().len() {
        return Vec::new();
    }
    let mut used = vec![false; g.num_vertices()];
    let mut cur = Vec::with_capacity(blacks.len());
    let mut found: Vec<Vec<usize>> = Vec::new();
    fn rec(
        g: &TorusGraph,
        blacks: &[usize],
        i: usize,
        used: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == blacks.len() {
            let mut s = cur.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        for &e in g.rotation(blacks[i]) {
            let w = g.edges()[e].white;
            if !used[w] {
                used[w] = true;
                cur.push(e);
                rec(g, blacks, i + 1, used, cur, out);
                cur.pop();
                used[w] = false;
            }
        }
    }
    rec(g, &blacks, 0, &mut used, &mut cur, &mut found);
    found.sort();
    found.dedup();
    let Some(pi0) = found.first().cloned() else {
        return Vec::new();
    };
    let q = g.quiver();
    found
        .into_iter()
        .map(|s| {
            let class = pm_class(&s, &pi0, q);
            PerfectMatching { support: s, class }
        })
        .collect()
}

/// Maximum matching (Kuhn's augmenting paths) on the edges allowed by
/// `allowed`, ignoring vertices marked in `removed`.  Returns the matched
/// edge at each black vertex (or `None`).
pub(crate) fn max_matching(
    g: &TorusGraph,
    allowed: &dyn Fn(usize) -> bool,
    removed: &[bool],
) -> Vec<Option<usize>> {
    let nv = g.num_vertices();
    let mut mate_w: Vec<Option<usize>> = vec![None; nv];
    let mut mate_b: Vec<Option<usize>> = vec![None; nv];
    fn augment(
        g: &TorusGraph,
        b: usize,
        allowed: &dyn Fn(usize) -> bool,
        removed: &[bool],
        seen: &mut [bool],
        mate_w: &mut [Option<usize>],
        mate_b: &mut [Option<usize>],
    ) -> bool {
        for &e in g.rotation(b) {
            if !allowed(e) {
                continue;
            }
            let w = g.edges()[e].white;
            if removed[w] || seen[w] {
                continue;
            }
            seen[w] = true;
            let free = match mate_w[w] {
                None => true,
                Some(e2) => augment(
                    g,
                    g.edges()[e2].black,
                    allowed,
                    removed,
                    seen,
                    mate_w,
                    mate_b,
                ),
            };
            if free {
                mate_w[w] = Some(e);
                mate_b[b] = Some(e);
                return true;
            }
        }
        false
    }
    for b in g.black_vertices() {
        if removed[b] {
            continue;
        }
        let mut seen = vec![false; nv];
        augment(g, b, allowed, removed, &mut seen, &mut mate_w, &mut mate_b);
    }
    mate_b
}

/// Outcome of Hall's marriage test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HallVerdict {
    /// A perfect matching exists.
    Pass,
    /// Different numbers of black and white vertices.
    Imbalance {
        /// Number of black vertices.
        black: usize,
        /// Number of white vertices.
        white: usize,
    },
    /// A minimal set of black vertices with fewer neighbours than members.
    Deficient {
        /// The black vertices.
        black: Vec<usize>,
        /// Their white neighbours.
        neighbours: Vec<usize>,
    },
}

impl HallVerdict {
    /// True for [`HallVerdict::Pass`].
    pub fn passed(&self) -> bool {
        matches!(self, HallVerdict::Pass)
    }
}

fn neighbours(g: &TorusGraph, set: &[usize]) -> Vec<usize> {
    let mut n: Vec<usize> = set
        .iter()
        .flat_map(|&b| g.rotation(b).iter().map(|&e| g.edges()[e].white))
        .collect();
    n.sort_unstable();
    n.dedup();
    n
}

/// Hall's condition: passes, or returns an imbalance or a deficient set.
pub fn hall_check(g: &TorusGraph) -> HallVerdict {
    let blacks = g.black_vertices();
    let whites = g.white_vertices();
    if blacks.len() != whites.len() {
        return HallVerdict::Imbalance {
            black: blacks.len(),
            white: whites.len(),
        };
    }
    let removed = vec![false; g.num_vertices()];
    let mate = max_matching(g, &|_| true, &removed);
    let Some(&free) = blacks.iter().find(|&&b| mate[b].is_none()) else {
        return HallVerdict::Pass;
    };
    // Black vertices reachable from `free` by alternating paths form a deficient set.
    let mut mate_w = vec![None; g.num_vertices()];
    for &b in &blacks {
        if let Some(e) = mate[b] {
            mate_w[g.edges()[e].white] = Some(b);
        }
    }
    let mut in_set = vec![false; g.num_vertices()];
    in_set[free] = true;
    let mut stack = vec![free];
    while let Some(b) = stack.pop() {
        for &e in g.rotation(b) {
            let w = g.edges()[e].white;
            if let Some(b2) = mate_w[w] {
                if !in_set[b2] {
                    in_set[b2] = true;
                    stack.push(b2);
                }
            }
        }
    }
    let mut set: Vec<usize> = blacks.iter().copied().filter(|&b| in_set[b]).collect();
    // Greedily shrink to an inclusion-minimal deficient set.
    let mut i = 0;
    while i < set.len() {
        let mut trial = set.clone();
        trial.remove(i);
        if !trial.is_empty() && neighbours(g, &trial).len() < trial.len() {
            set = trial;
        } else {
            i += 1;
        }
    }
    let neighbours = neighbours(g, &set);
    HallVerdict::Deficient {
        black: set,
        neighbours,
    }
}

/// Per-edge result of the non-degeneracy test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegeneracyReport {
    /// For each edge, whether some perfect matching contains it.
    pub in_some_matching: Vec<bool>,
    /// Edges contained in every perfect matching.
    pub forced: Vec<usize>,
}

impl NondegeneracyReport {
    /// True when every edge lies in some perfect matching.
    pub fn passed(&self) -> bool {
        self.in_some_matching.iter().all(|&x| x)
    }

    /// Edges lying in no perfect matching.
    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.in_some_matching.len())
            .filter(|&e| !self.in_some_matching[e])
            .collect()
    }
}

fn has_perfect(g: &TorusGraph, allowed: &dyn Fn(usize) -> bool, removed: &[bool]) -> bool {
    let mate = max_matching(g, allowed, removed);
    g.black_vertices()
        .iter()
        .all(|&b| removed[b] || mate[b].is_some())
}

/// Tests every edge for membership in some perfect matching, using one
/// maximum-matching computation per edge.
pub fn nondegeneracy_check(g: &TorusGraph) -> NondegeneracyReport {
    let ne = g.num_edges();
    let balanced = g.black_vertices().len() == g.white_vertices().len();
    let none = vec![false; g.num_vertices()];
    let any = balanced && has_perfect(g, &|_| true, &none);
    let mut in_some = vec![false; ne];
    let mut forced = Vec::new();
    if !any {
        return NondegeneracyReport {
            in_some_matching: in_some,
            forced,
        };
    }
    for (e, flag) in in_some.iter_mut().enumerate() {
        let ed = g.edges()[e];
        let mut removed = vec![false; g.num_vertices()];
        removed[ed.black] = true;
        removed[ed.white] = true;
        *flag = has_perfect(g, &|_| true, &removed);
        if !has_perfect(g, &|x| x != e, &none) {
            forced.push(e);
        }
    }
    NondegeneracyReport {
        in_some_matching: in_some,
        forced,
    }
}

/// Decomposes a non-negative integer weight on edges whose sum at every
/// dimer vertex is the same `k` into `k` perfect matchings (classes relative
/// to `reference`), by repeatedly extracting a perfect matching of the
/// support and subtracting it.
pub fn bvn_decompose(
    g: &TorusGraph,
    v: &[u64],
    reference: &[usize],
) -> Result<Vec<PerfectMatching>, MatchingError> {
    if v.len() != g.num_edges() {
        return Err(MatchingError::NotBalanced("wrong length".into()));
    }
    let mut sums = vec![0u64; g.num_vertices()];
    for (e, &x) in v.iter().enumerate() {
        sums[g.edges()[e].black] += x;
        sums[g.edges()[e].white] += x;
    }
    let k = sums[0];
    if sums.iter().any(|&s| s != k) {
        return Err(MatchingError::NotBalanced(format!("vertex sums {sums:?}")));
    }
    let mut rest = v.to_vec();
    let removed = vec![false; g.num_vertices()];
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let r = rest.clone();
        let mate = max_matching(g, &|e| r[e] > 0, &removed);
        let mut support = Vec::new();
        for b in g.black_vertices() {
            let e = mate[b]
                .ok_or_else(|| MatchingError::Decomposition("Hall condition failed".into()))?;
            support.push(e);
        }
        for &e in &support {
            rest[e] -= 1;
        }
        out.push(PerfectMatching::new(g, support, reference)?);
    }
    Ok(out)
}

/// Sum of matchings as an integer vector over arrows.
pub fn sum_of(matchings: &[PerfectMatching], n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    for m in matchings {
        for &e in &m.support {
            v[e] += 1;
        }
    }
    v
}
