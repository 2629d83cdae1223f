//! The superpotential algebra `A` and the toric algebra `B = C[M⁺]`.
//!
//! A path `p` from `i` to `j` has a class in the lattice `M` recorded by
//! four coordinates: its endpoints, its homology (the sum of arrow offsets)
//! and its degree `⟨π0, p⟩` against the reference perfect matching.  These
//! coordinates are injective on `M_ij`, and every perfect matching can be
//! evaluated on them through a fixed base path `β_ij`:
//!
//! `⟨π, m⟩ = ⟨π, β_ij⟩ + (deg m − deg β_ij) + c_π · (hom m − hom β_ij)`
//!
//! where `c_π` is the class of `π − π0`.  The cone `M⁺_ij` consists of the
//! classes on which every perfect matching is non-negative.
//!
//! Algebraic consistency (the map `p ↦ class(p)` from `A` to `B` being an
//! isomorphism) is verified degree by degree: every lattice point must be
//! the class of some path (surjectivity), and all paths with one class must
//! be connected by F-term substitutions (injectivity).  Once a basis of `A`
//! is known to be given by lattice points, the one-sided Calabi–Yau complex
//!
//! `0 ← T1⊗A ← T2⊗A ← T3⊗A ← 0`
//!
//! becomes a sequence of integer matrices whose exactness is checked with
//! exact ranks.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::lattice::{self, V2};
use crate::linalg::{self, Echelon, SparseVec};
use crate::matchings::{enumerate_matchings, pm_class, PerfectMatching};
use crate::surface::{fterm_relations, FTerm, Quiver, TorusGraph};
use crate::symmetry::{default_r_symmetry, WeightFunction};

/// Errors from the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Lattice coordinates need at least one perfect matching.
    #[error("the model has no perfect matchings")]
    NoMatchings,
    /// The grading is not a strictly positive R-symmetry.
    #[error("invalid grading: {0}")]
    BadGrading(String),
    /// Consecutive arrows do not compose.
    #[error("arrows do not form a path: {0:?}")]
    NotComposable(Vec<usize>),
    /// The perfect-matching polygon is not two-dimensional, so graded
    /// pieces of `M⁺` are infinite.
    #[error("graded pieces of M+ are unbounded (degenerate matching polygon)")]
    Unbounded,
    /// Lattice points are not a basis of `A` in the degrees required.
    #[error("algebraic consistency fails at or below degree {degree}: {reason}")]
    BasisInconsistent {
        /// Degree bound that was being verified.
        degree: i64,
        /// The first counterexample found.
        reason: String,
    },
}

/// A class in `M`: endpoints, homology and reference degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathClass {
    /// Start vertex.
    pub tail: usize,
    /// End vertex.
    pub head: usize,
    /// Sum of arrow offsets.
    pub hom: V2,
    /// Pairing with the reference matching `π0`.
    pub deg: i64,
}

impl PathClass {
    /// The class of the trivial path at `i`.
    pub fn identity(i: usize) -> PathClass {
        PathClass {
            tail: i,
            head: i,
            hom: lattice::ZERO,
            deg: 0,
        }
    }

    /// The class of `self` followed by `other`, if the endpoints match.
    pub fn then(&self, other: &PathClass) -> Option<PathClass> {
        (self.head == other.tail).then(|| PathClass {
            tail: self.tail,
            head: other.head,
            hom: lattice::add(self.hom, other.hom),
            deg: self.deg + other.deg,
        })
    }

    /// The difference `self − other` of two classes with the same endpoints
    /// as a loop class `(hom, deg)`.
    pub fn minus(&self, other: &PathClass) -> Option<(V2, i64)> {
        (self.tail == other.tail && self.head == other.head)
            .then(|| (lattice::sub(self.hom, other.hom), self.deg - other.deg))
    }

    /// The class shifted by a loop class `(hom, deg)`.
    pub fn plus_loop(&self, hom: V2, deg: i64) -> PathClass {
        PathClass {
            hom: lattice::add(self.hom, hom),
            deg: self.deg + deg,
            ..*self
        }
    }
}

/// A strictly positive integral R-symmetry: arrow weights whose sum around
/// every face is `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    /// Weight of each arrow.
    pub weights: Vec<i64>,
    /// Common face sum.
    pub lambda: i64,
}

impl Grading {
    /// The primitive integral multiple of a rational weight function.
    pub fn from_weight(w: &WeightFunction) -> Grading {
        let (weights, lambda) = w.integral();
        Grading { weights, lambda }
    }

    /// The sum of the given matchings, divided by the gcd of its weights.
    pub fn from_matchings<'m>(
        q: &Quiver,
        ms: impl IntoIterator<Item = &'m PerfectMatching>,
    ) -> Grading {
        let mut weights = vec![0i64; q.num_arrows()];
        let mut lambda = 0;
        for m in ms {
            for &a in &m.support {
                weights[a] += 1;
            }
            lambda += 1;
        }
        let g = weights
            .iter()
            .fold(lambda, |acc, &x| num_integer::gcd(acc, x));
        if g > 1 {
            weights.iter_mut().for_each(|x| *x /= g);
            lambda /= g;
        }
        Grading { weights, lambda }
    }

    /// Checks positivity and constant face sums.
    pub fn validate(&self, q: &Quiver) -> Result<(), AlgebraError> {
        if self.weights.len() != q.num_arrows() {
            return Err(AlgebraError::BadGrading(format!(
                "{} weights for {} arrows",
                self.weights.len(),
                q.num_arrows()
            )));
        }
        if let Some(a) = self.weights.iter().position(|&w| w <= 0) {
            return Err(AlgebraError::BadGrading(format!(
                "arrow {a} has non-positive weight"
            )));
        }
        for (f, face) in q.faces().iter().enumerate() {
            let s: i64 = face.boundary.iter().map(|&a| self.weights[a]).sum();
            if s != self.lambda {
                return Err(AlgebraError::BadGrading(format!(
                    "face {f} sums to {s}, not {}",
                    self.lambda
                )));
            }
        }
        Ok(())
    }

    /// Degree of a concrete path.
    pub fn path_degree(&self, p: &[usize]) -> i64 {
        p.iter().map(|&a| self.weights[a]).sum()
    }
}

/// The lattice points of `M⁺_ij` of one R-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPiece {
    /// Start vertex.
    pub i: usize,
    /// End vertex.
    pub j: usize,
    /// R-degree.
    pub degree: i64,
    /// The lattice points, sorted.
    pub basis: Vec<PathClass>,
}

/// Verification data for one piece `e_i A e_j` of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    /// Start vertex.
    pub i: usize,
    /// End vertex.
    pub j: usize,
    /// R-degree.
    pub degree: i64,
    /// Number of lattice points of `M⁺_ij` in this degree.
    pub lattice_points: usize,
    /// Number of distinct classes of paths (= number of F-term classes when
    /// injectivity holds).
    pub path_classes: usize,
    /// Number of F-term equivalence classes of paths.
    pub fterm_classes: usize,
    /// Every lattice point is the class of a path.
    pub surjective: bool,
    /// Paths with equal class are F-term equivalent.
    pub injective: bool,
}

/// The first failure found by [`ToricAlgebra::algebraic_consistency`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A lattice point of `M⁺` with no representative path.
    Surjectivity {
        /// The class without a path.
        class: PathClass,
        /// Its R-degree.
        degree: i64,
    },
    /// Two paths with the same class that are not F-term equivalent.
    Injectivity {
        /// The shared class.
        class: PathClass,
        /// Its R-degree.
        degree: i64,
        /// A path.
        first: Vec<usize>,
        /// A path with the same class outside the F-term class of `first`.
        second: Vec<usize>,
    },
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Counterexample::Surjectivity { class, degree } => write!(
                f,
                "no path from {} to {} with homology {:?} and degree {} (R-degree {degree})",
                class.tail, class.head, class.hom, class.deg
            ),
            Counterexample::Injectivity { class, degree, first, second } => write!(
                f,
                "paths {first:?} and {second:?} from {} to {} share a class (R-degree {degree}) but are not F-term equivalent",
                class.tail, class.head
            ),
        }
    }
}

/// Outcome of the bounded algebraic-consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyVerdict {
    /// The degree bound that was checked.
    pub max_degree: i64,
    /// One report per `(i, j, d)`.
    pub pieces: Vec<PieceReport>,
    /// The first surjectivity failure and the first injectivity failure,
    /// in that order, when they exist.
    pub counterexamples: Vec<Counterexample>,
}

impl ConsistencyVerdict {
    /// The first surjectivity failure.
    pub fn surjectivity_failure(&self) -> Option<&Counterexample> {
        self.counterexamples
            .iter()
            .find(|c| matches!(c, Counterexample::Surjectivity { .. }))
    }

    /// The first injectivity failure.
    pub fn injectivity_failure(&self) -> Option<&Counterexample> {
        self.counterexamples
            .iter()
            .find(|c| matches!(c, Counterexample::Injectivity { .. }))
    }

    /// True when no counterexample was found up to the bound.
    pub fn consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// One graded piece `(target j, total degree d)` of the one-sided complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cy3Piece {
    /// Target vertex.
    pub j: usize,
    /// Total degree.
    pub degree: i64,
    /// Dimension of `T2 ⊗ A` in this piece.
    pub dim_t2: usize,
    /// Dimension of `T3 ⊗ A` in this piece.
    pub dim_t3: usize,
    /// Rank of `F(μ2)` restricted to this piece.
    pub rank_f2: usize,
    /// Rank of `F(μ3)` restricted to this piece.
    pub rank_f3: usize,
    /// `F(μ2) ∘ F(μ3) = 0`.
    pub composite_zero: bool,
}

impl Cy3Piece {
    /// Exactness at `T3 ⊗ A` and `T2 ⊗ A`.
    pub fn exact(&self) -> bool {
        self.composite_zero
            && self.rank_f3 == self.dim_t3
            && self.rank_f2 + self.rank_f3 == self.dim_t2
    }
}

/// Result of the bounded Calabi–Yau check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cy3Report {
    /// Bound on the `A`-degree in the `T3 ⊗ A` slot.
    pub max_degree: i64,
    /// Every checked piece.
    pub pieces: Vec<Cy3Piece>,
}

impl Cy3Report {
    /// True when every checked piece is exact.
    pub fn exact(&self) -> bool {
        self.pieces.iter().all(Cy3Piece::exact)
    }
}

/// A generator of the centre `M_o⁺` found up to a degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CentralGenerator {
    /// Central degree (R-degree divided by the gcd of central R-degrees).
    pub degree: i64,
    /// Homology of the loop class.
    pub hom: V2,
    /// Reference degree of the loop class.
    pub deg: i64,
}

/// The lattice model of a dimer model's algebra for a fixed grading.
#[derive(Debug, Clone)]
pub struct ToricAlgebra<'a> {
    q: &'a Quiver,
    matchings: Vec<PerfectMatching>,
    /// Classes of `π − π0` (same order as `matchings`).
    classes: Vec<V2>,
    grading: Grading,
    r_class: V2,
    arrow_class: Vec<PathClass>,
    base: Vec<Vec<Vec<usize>>>,
    base_class: Vec<Vec<PathClass>>,
    base_eval: Vec<Vec<Vec<i64>>>,
    base_r: Vec<Vec<i64>>,
    relations: Vec<FTerm>,
}

impl<'a> ToricAlgebra<'a> {
    /// Builds the lattice model for `g` with the given grading.
    pub fn new(g: &'a TorusGraph, grading: Grading) -> Result<ToricAlgebra<'a>, AlgebraError> {
        let q = g.quiver();
        grading.validate(q)?;
        let matchings = enumerate_matchings(g);
        if matchings.is_empty() {
            return Err(AlgebraError::NoMatchings);
        }
        let pi0 = matchings[0].support.clone();
        let classes: Vec<V2> = matchings
            .iter()
            .map(|m| pm_class(&m.support, &pi0, q))
            .collect();
        let gamma = q.gamma();
        let r_cochain: Vec<i64> = (0..q.num_arrows())
            .map(|a| grading.weights[a] - grading.lambda * i64::from(matchings[0].contains(a)))
            .collect();
        let pair = |c: &[i64]| r_cochain.iter().zip(c).map(|(x, y)| x * y).sum::<i64>();
        let r_class = [pair(&gamma[0]), pair(&gamma[1])];
        let arrow_class: Vec<PathClass> = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| PathClass {
                tail: ar.tail,
                head: ar.head,
                hom: ar.offset,
                deg: i64::from(matchings[0].contains(a)),
            })
            .collect();
        let n = q.num_nodes();
        let base: Vec<Vec<Vec<usize>>> = (0..n).map(|i| shortest_paths(q, i)).collect();
        let mut alg = ToricAlgebra {
            q,
            matchings,
            classes,
            grading,
            r_class,
            arrow_class,
            base,
            base_class: Vec::new(),
            base_eval: Vec::new(),
            base_r: Vec::new(),
            relations: fterm_relations(q),
        };
        alg.base_class = (0..n)
            .map(|i| (0..n).map(|j| alg.walk(i, &alg.base[i][j])).collect())
            .collect();
        alg.base_eval = alg
            .matchings
            .iter()
            .map(|m| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                alg.base[i][j].iter().filter(|&&a| m.contains(a)).count() as i64
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        alg.base_r = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| alg.grading.path_degree(&alg.base[i][j]))
                    .collect()
            })
            .collect();
        Ok(alg)
    }

    /// The lattice model graded by the sum of all perfect matchings, divided
    /// by the gcd of its weights.
    pub fn with_default_grading(g: &'a TorusGraph) -> Result<ToricAlgebra<'a>, AlgebraError> {
        let ms = enumerate_matchings(g);
        let w = default_r_symmetry(g.quiver(), &ms)
            .map_err(|e| AlgebraError::BadGrading(e.to_string()))?;
        ToricAlgebra::new(g, Grading::from_weight(&w))
    }

    fn walk(&self, i: usize, p: &[usize]) -> PathClass {
        p.iter().fold(PathClass::identity(i), |c, &a| {
            c.then(&self.arrow_class[a]).expect("base paths compose")
        })
    }

    /// The quiver.
    pub fn quiver(&self) -> &Quiver {
        self.q
    }

    /// The grading in use.
    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    /// All perfect matchings; the first is the reference `π0`.
    pub fn matchings(&self) -> &[PerfectMatching] {
        &self.matchings
    }

    /// The fixed base path `β_ij`.
    pub fn base_path(&self, i: usize, j: usize) -> &[usize] {
        &self.base[i][j]
    }

    /// The class of a single arrow.
    pub fn arrow_class(&self, a: usize) -> PathClass {
        self.arrow_class[a]
    }

    /// The class of a path; `start` fixes the vertex of an empty path.
    pub fn path_class(&self, start: usize, p: &[usize]) -> Result<PathClass, AlgebraError> {
        if p.first().is_some_and(|&a| self.q.arrow(a).tail != start) || !self.q.is_path(p) {
            return Err(AlgebraError::NotComposable(p.to_vec()));
        }
        Ok(self.walk(start, p))
    }

    /// The face-boundary class `□` based at `i`.
    pub fn box_class(&self, i: usize) -> PathClass {
        PathClass {
            tail: i,
            head: i,
            hom: lattice::ZERO,
            deg: 1,
        }
    }

    fn eval_index(&self, k: usize, m: &PathClass) -> i64 {
        let b = &self.base_class[m.tail][m.head];
        self.base_eval[k][m.tail][m.head]
            + (m.deg - b.deg)
            + lattice::dot(self.classes[k], lattice::sub(m.hom, b.hom))
    }

    /// `⟨π, m⟩` for a perfect matching `π` of this model.
    pub fn pm_eval(&self, pi: &PerfectMatching, m: &PathClass) -> i64 {
        let b = &self.base_class[m.tail][m.head];
        let on_base = self.base[m.tail][m.head]
            .iter()
            .filter(|&&a| pi.contains(a))
            .count() as i64;
        let c = pm_class(&pi.support, &self.matchings[0].support, self.q);
        on_base + (m.deg - b.deg) + lattice::dot(c, lattice::sub(m.hom, b.hom))
    }

    /// The R-degree `⟨R, m⟩`.
    pub fn r_degree(&self, m: &PathClass) -> i64 {
        let b = &self.base_class[m.tail][m.head];
        self.base_r[m.tail][m.head]
            + self.grading.lambda * (m.deg - b.deg)
            + lattice::dot(self.r_class, lattice::sub(m.hom, b.hom))
    }

    /// Whether every perfect matching is non-negative on `m`.
    pub fn in_m_plus(&self, m: &PathClass) -> bool {
        (0..self.matchings.len()).all(|k| self.eval_index(k, m) >= 0)
    }

    /// All lattice points of `M⁺_ij` with R-degree at most `max_degree`,
    /// one piece per degree `0..=max_degree`.
    pub fn lattice_points(
        &self,
        i: usize,
        j: usize,
        max_degree: i64,
    ) -> Result<Vec<GradedPiece>, AlgebraError> {
        let lambda = self.grading.lambda;
        let b = self.base_class[i][j];
        let rb = self.base_r[i][j];
        // With u = hom − hom β and e = deg − deg β, the R-degree is
        // rb + λe + r·u and the matching π gives ⟨π,β⟩ + e + c_π·u ≥ 0.
        // Eliminating e: (λc_π − r)·u ≥ −(λ⟨π,β⟩ + d − rb).
        let mut halfplanes: BTreeMap<V2, i64> = BTreeMap::new();
        for k in 0..self.matchings.len() {
            let n = lattice::sub(lattice::scale(lambda, self.classes[k]), self.r_class);
            let k0 = lambda * self.base_eval[k][i][j] - rb;
            let e = halfplanes.entry(n).or_insert(k0);
            *e = (*e).min(k0);
        }
        let constraints: Vec<(V2, i64)> = halfplanes.into_iter().collect();
        if !bounded(&constraints) {
            return Err(AlgebraError::Unbounded);
        }
        let mut pieces: Vec<GradedPiece> = (0..=max_degree)
            .map(|d| GradedPiece {
                i,
                j,
                degree: d,
                basis: Vec::new(),
            })
            .collect();
        let Some((lo, hi)) = bounding_box(&constraints, max_degree) else {
            return Ok(pieces);
        };
        for ux in lo[0]..=hi[0] {
            for uy in lo[1]..=hi[1] {
                let u = [ux, uy];
                let ru = lattice::dot(self.r_class, u);
                for d in 0..=max_degree {
                    let num = d - rb - ru;
                    if num.rem_euclid(lambda) != 0 {
                        continue;
                    }
                    if constraints
                        .iter()
                        .all(|&(n, k0)| lattice::dot(n, u) + k0 + d >= 0)
                    {
                        let m = PathClass {
                            tail: i,
                            head: j,
                            hom: lattice::add(b.hom, u),
                            deg: b.deg + num / lambda,
                        };
                        debug_assert!(self.in_m_plus(&m) && self.r_degree(&m) == d);
                        pieces[d as usize].basis.push(m);
                    }
                }
            }
        }
        for p in &mut pieces {
            p.basis.sort();
        }
        Ok(pieces)
    }

    /// Every path starting at `i` with R-degree at most `max_degree`,
    /// including the empty path.
    pub fn paths_from(&self, i: usize, max_degree: i64) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.extend_paths(i, max_degree, &mut cur, &mut out);
        out
    }

    fn extend_paths(&self, v: usize, budget: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for &a in self.q.out_arrows(v) {
            let w = self.grading.weights[a];
            if w <= budget {
                cur.push(a);
                self.extend_paths(self.q.arrow(a).head, budget - w, cur, out);
                cur.pop();
            }
        }
    }

    /// All paths reachable from `p` by single F-term substitutions
    /// `q1 p_a^± q2 → q1 p_a^∓ q2`.
    pub fn fterm_closure(&self, p: &[usize]) -> BTreeSet<Vec<usize>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(p.to_vec());
        queue.push_back(p.to_vec());
        while let Some(cur) = queue.pop_front() {
            for next in self.substitutions(&cur) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    fn substitutions(&self, p: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for rel in &self.relations {
            for (from, to) in [(&rel.plus, &rel.minus), (&rel.minus, &rel.plus)] {
                let l = from.len();
                if l == 0 || l > p.len() {
                    continue;
                }
                for s in 0..=p.len() - l {
                    if p[s..s + l] == from[..] {
                        let mut r = Vec::with_capacity(p.len() - l + to.len());
                        r.extend_from_slice(&p[..s]);
                        r.extend_from_slice(to);
                        r.extend_from_slice(&p[s + l..]);
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    /// Checks surjectivity and injectivity of `A → B` in every piece
    /// `e_i A e_j` of R-degree at most `max_degree`.
    pub fn algebraic_consistency(
        &self,
        max_degree: i64,
    ) -> Result<ConsistencyVerdict, AlgebraError> {
        let n = self.q.num_nodes();
        let mut pieces = Vec::new();
        let mut surj_failure = None;
        let mut inj_failure = None;
        for i in 0..n {
            // Group all paths from i by class.
            let mut groups: HashMap<PathClass, Vec<Vec<usize>>> = HashMap::new();
            for p in self.paths_from(i, max_degree) {
                let c = self.walk(i, &p);
                groups.entry(c).or_default().push(p);
            }
            for j in 0..n {
                let lattice = self.lattice_points(i, j, max_degree)?;
                for piece in lattice {
                    let d = piece.degree;
                    let mut surjective = true;
                    let mut injective = true;
                    let mut fterm_classes = 0;
                    let mut path_classes = 0;
                    let mut classes_here: Vec<&PathClass> = groups
                        .keys()
                        .filter(|c| c.head == j && self.r_degree(c) == d)
                        .collect();
                    classes_here.sort();
                    let lattice_set: HashSet<&PathClass> = piece.basis.iter().collect();
                    for c in &classes_here {
                        assert!(lattice_set.contains(c), "path class {c:?} outside M+");
                    }
                    for m in &piece.basis {
                        let Some(ps) = groups.get(m) else {
                            surjective = false;
                            surj_failure.get_or_insert(Counterexample::Surjectivity {
                                class: *m,
                                degree: d,
                            });
                            continue;
                        };
                        path_classes += 1;
                        let mut remaining: BTreeSet<&Vec<usize>> = ps.iter().collect();
                        let mut first_rep: Option<Vec<usize>> = None;
                        while let Some(&p) = remaining.iter().next() {
                            let closure = self.fterm_closure(p);
                            for r in &closure {
                                assert_eq!(
                                    self.walk(i, r),
                                    *m,
                                    "F-term substitution changed the class"
                                );
                                remaining.remove(r);
                            }
                            fterm_classes += 1;
                            match &first_rep {
                                None => first_rep = Some(p.clone()),
                                Some(f) => {
                                    injective = false;
                                    inj_failure.get_or_insert(Counterexample::Injectivity {
                                        class: *m,
                                        degree: d,
                                        first: f.clone(),
                                        second: p.clone(),
                                    });
                                }
                            }
                        }
                    }
                    pieces.push(PieceReport {
                        i,
                        j,
                        degree: d,
                        lattice_points: piece.basis.len(),
                        path_classes,
                        fterm_classes,
                        surjective,
                        injective,
                    });
                }
            }
        }
        Ok(ConsistencyVerdict {
            max_degree,
            pieces,
            counterexamples: surj_failure.into_iter().chain(inj_failure).collect(),
        })
    }

    /// A path from `i` to `j` with homology `hom` avoiding every arrow of
    /// `pi`, searched among lifts whose homology stays within `window` of
    /// the box spanned by `0` and `hom`.  `None` means "not found in the
    /// window", not "does not exist".
    pub fn avoid_path(
        &self,
        i: usize,
        j: usize,
        hom: V2,
        pi: &PerfectMatching,
        window: i64,
    ) -> Option<Vec<usize>> {
        let lo = [hom[0].min(0) - window, hom[1].min(0) - window];
        let hi = [hom[0].max(0) + window, hom[1].max(0) + window];
        let inside = |h: V2| (0..2).all(|k| lo[k] <= h[k] && h[k] <= hi[k]);
        let mut prev: HashMap<(usize, V2), (usize, V2, usize)> = HashMap::new();
        let start = (i, lattice::ZERO);
        let mut queue = VecDeque::from([start]);
        let mut seen: HashSet<(usize, V2)> = HashSet::from([start]);
        while let Some((v, h)) = queue.pop_front() {
            if (v, h) == (j, hom) {
                let mut path = Vec::new();
                let mut cur = (v, h);
                while cur != start {
                    let (pv, ph, a) = prev[&cur];
                    path.push(a);
                    cur = (pv, ph);
                }
                path.reverse();
                return Some(path);
            }
            for &a in self.q.out_arrows(v) {
                if pi.contains(a) {
                    continue;
                }
                let ar = self.q.arrow(a);
                let nh = lattice::add(h, ar.offset);
                let next = (ar.head, nh);
                if inside(nh) && seen.insert(next) {
                    prev.insert(next, (v, h, a));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// Bounded check of exactness of the one-sided complex at `T3 ⊗ A` and
    /// `T2 ⊗ A`, in every piece `(j, d)` with total degree
    /// `d ≤ max_degree + λ`.  Bases of `A` are lattice points, so algebraic
    /// consistency is verified first up to the degree needed.
    pub fn cy3_check(&self, max_degree: i64) -> Result<Cy3Report, AlgebraError> {
        let lambda = self.grading.lambda;
        let max_w = *self
            .grading
            .weights
            .iter()
            .max()
            .expect("quiver has arrows");
        let needed = max_degree + max_w;
        let verdict = self.algebraic_consistency(needed)?;
        if let Some(c) = verdict.counterexamples.first() {
            return Err(AlgebraError::BasisInconsistent {
                degree: needed,
                reason: c.to_string(),
            });
        }
        let n = self.q.num_nodes();
        let na = self.q.num_arrows();
        let mut pieces = Vec::new();
        for j in 0..n {
            let lat: Vec<Vec<GradedPiece>> = (0..n)
                .map(|i| self.lattice_points(i, j, needed))
                .collect::<Result<_, _>>()?;
            let at = |i: usize, d: i64| -> &[PathClass] {
                if d < 0 || d > needed {
                    &[]
                } else {
                    &lat[i][d as usize].basis
                }
            };
            for d in 0..=max_degree + lambda {
                // T3 ⊗ A: W_v ⊗ m with m ∈ M⁺_{v j} of degree d − λ.
                let t3: Vec<(usize, PathClass)> = (0..n)
                    .flat_map(|v| at(v, d - lambda).iter().map(move |m| (v, *m)))
                    .collect();
                // T2 ⊗ A: R_a ⊗ m with m ∈ M⁺_{tail a, j} of degree d − λ + R(a).
                let t2: Vec<(usize, PathClass)> = (0..na)
                    .flat_map(|a| {
                        at(self.q.arrow(a).tail, d - lambda + self.grading.weights[a])
                            .iter()
                            .map(move |m| (a, *m))
                    })
                    .collect();
                let t2_index: HashMap<(usize, PathClass), usize> =
                    t2.iter().enumerate().map(|(k, x)| (*x, k)).collect();
                let mut t1_index: HashMap<(usize, PathClass), usize> = HashMap::new();
                let f3: Vec<SparseVec> = t3
                    .iter()
                    .map(|&(v, m)| {
                        linalg::sparse(self.q.in_arrows(v).iter().map(|&b| {
                            let c = self.arrow_class[b].then(&m).expect("arrow ends at v");
                            (t2_index[&(b, c)], -1)
                        }))
                    })
                    .collect();
                let f2_column =
                    |a: usize, m: PathClass, t1: &mut HashMap<(usize, PathClass), usize>| {
                        let mut entries = Vec::new();
                        let faces = [(self.q.black_face(a), 1i64), (self.q.white_face(a), -1i64)];
                        for (f, sign) in faces {
                            let comp = self.q.face_complement(f, a);
                            let first = comp[0];
                            let rest = self.walk(self.q.arrow(first).head, &comp[1..]);
                            let y = rest.then(&m).expect("relation ends at tail(a)");
                            let len = t1.len();
                            let k = *t1.entry((first, y)).or_insert(len);
                            entries.push((k, sign));
                        }
                        linalg::sparse(entries)
                    };
                let f2: Vec<SparseVec> = t2
                    .iter()
                    .map(|&(a, m)| f2_column(a, m, &mut t1_index))
                    .collect();
                // Composite F(μ2) ∘ F(μ3) on every basis vector of T3 ⊗ A.
                let composite_zero = f3.iter().all(|col| {
                    let mut acc: BTreeMap<usize, num_bigint::BigInt> = BTreeMap::new();
                    for (&k, x) in col {
                        for (&r, y) in &f2[k] {
                            *acc.entry(r).or_default() += x * y;
                        }
                    }
                    acc.values().all(num_traits::Zero::is_zero)
                });
                let rank_f3 = linalg::rank(f3.iter().cloned());
                let mut e = Echelon::new();
                for col in &f2 {
                    e.insert(col.clone());
                }
                pieces.push(Cy3Piece {
                    j,
                    degree: d,
                    dim_t2: t2.len(),
                    dim_t3: t3.len(),
                    rank_f2: e.rank(),
                    rank_f3,
                    composite_zero,
                });
            }
        }
        Ok(Cy3Report { max_degree, pieces })
    }

    /// The gcd `g` of R-degrees of central (loop) classes; central degree
    /// is R-degree divided by `g`.
    pub fn central_step(&self) -> i64 {
        let g = num_integer::gcd(self.r_class[0], self.r_class[1]);
        num_integer::gcd(g, self.grading.lambda)
    }

    /// Elements of `M_o⁺` of central degree at most `max_degree` that are
    /// not sums of two non-zero elements of `M_o⁺` — the Hilbert basis of
    /// the centre truncated at the bound.
    pub fn center_generators(
        &self,
        max_degree: i64,
    ) -> Result<Vec<CentralGenerator>, AlgebraError> {
        let step = self.central_step();
        let pieces = self.lattice_points(0, 0, max_degree * step)?;
        let elems: Vec<(i64, PathClass)> = pieces
            .iter()
            .filter(|p| p.degree > 0)
            .flat_map(|p| p.basis.iter().map(move |m| (p.degree, *m)))
            .collect();
        let mut gens = Vec::new();
        for (d, m) in &elems {
            let decomposable = elems.iter().any(|(d2, k)| {
                d2 < d && {
                    let (h, e) = m.minus(k).expect("loops at 0");
                    self.in_m_plus(&PathClass {
                        tail: 0,
                        head: 0,
                        hom: h,
                        deg: e,
                    })
                }
            });
            if !decomposable {
                debug_assert_eq!(d % step, 0);
                gens.push(CentralGenerator {
                    degree: d / step,
                    hom: m.hom,
                    deg: m.deg,
                });
            }
        }
        gens.sort();
        Ok(gens)
    }
}

/// Shortest paths (by arrow count) from `i` to every vertex.
fn shortest_paths(q: &Quiver, i: usize) -> Vec<Vec<usize>> {
    let n = q.num_nodes();
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[i] = true;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        for &a in q.out_arrows(v) {
            let w = q.arrow(a).head;
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some(a);
                queue.push_back(w);
            }
        }
    }
    (0..n)
        .map(|j| {
            let mut p = Vec::new();
            let mut v = j;
            while let Some(a) = prev[v] {
                p.push(a);
                v = q.arrow(a).tail;
            }
            p.reverse();
            p
        })
        .collect()
}

/// Whether `{u : n·u ≥ −k for all (n, k)}` is bounded: no non-zero
/// recession direction.  Extreme recession directions are perpendicular to
/// some normal, so it suffices to test those.
fn bounded(constraints: &[(V2, i64)]) -> bool {
    let normals: Vec<V2> = constraints
        .iter()
        .map(|c| c.0)
        .filter(|&n| n != lattice::ZERO)
        .collect();
    !normals.is_empty()
        && normals.iter().all(|&n| {
            let p = [-n[1], n[0]];
            [p, lattice::neg(p)]
                .iter()
                .all(|&v| normals.iter().any(|&m| lattice::dot(m, v) < 0))
        })
}

/// Integer bounding box of `{u : n·u + k + d ≥ 0}` at `d = max_degree`
/// (which contains the regions of all smaller degrees), from the feasible
/// pairwise intersections of boundary lines.  `None` if empty.
fn bounding_box(constraints: &[(V2, i64)], max_degree: i64) -> Option<(V2, V2)> {
    let rhs = |k: i64| -(k + max_degree);
    let mut lo = [i64::MAX; 2];
    let mut hi = [i64::MIN; 2];
    let mut any = false;
    for (x, &(n1, k1)) in constraints.iter().enumerate() {
        for &(n2, k2) in &constraints[x + 1..] {
            let det = lattice::wedge(n1, n2) as i128;
            if det == 0 {
                continue;
            }
            // Cramer: n1·u = b1, n2·u = b2.
            let (b1, b2) = (rhs(k1) as i128, rhs(k2) as i128);
            let nx = b1 * n2[1] as i128 - b2 * n1[1] as i128;
            let ny = n1[0] as i128 * b2 - n2[0] as i128 * b1;
            // Feasibility of u = (nx, ny)/det, exactly.
            let feasible = constraints.iter().all(|&(m, k)| {
                let lhs = m[0] as i128 * nx + m[1] as i128 * ny;
                let bound = rhs(k) as i128 * det;
                if det > 0 {
                    lhs >= bound
                } else {
                    lhs <= bound
                }
            });
            if feasible {
                any = true;
                for (c, num) in [nx, ny].into_iter().enumerate() {
                    let f = num_integer::Integer::div_floor(&num, &det) as i64;
                    let cl = -(num_integer::Integer::div_floor(&-num, &det) as i64);
                    lo[c] = lo[c].min(f);
                    hi[c] = hi[c].max(cl);
                }
            }
        }
    }
    any.then_some((lo, hi))
}
