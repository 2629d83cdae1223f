//! R-symmetries: weight functions on arrows with constant coboundary, the
//! anomaly-free condition, rhombus-angle solutions and the consistency
//! report that collects the ladder of checks.
//!
//! The anomaly-free system, for weights `R` of degree `λ`, is
//!
//! * `Σ_{a ∈ ∂f} R_a = λ` for every face `f`, and
//! * `Σ_{a ∈ H_v} R_a + Σ_{a ∈ T_v} R_a = λ (|H_v| − 1)` for every vertex
//!   `v`, where `H_v`/`T_v` are the arrows with head/tail `v` (a loop
//!   contributes through both of its ends).
//!
//! Summing the vertex equations and comparing with the face equations
//! shows that the system can only be solved when `|Q0| − |Q1| + |Q2| = 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lp::{q, LinearProgram, LpOutcome, Relation, Q};
use crate::matchings::PerfectMatching;
use crate::surface::Quiver;

/// Errors from symmetry constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    /// Some arrow lies in no perfect matching (or there are none).
    #[error("no R-symmetry from matchings: {0}")]
    NoRSymmetry(String),
}

/// A rational weight on arrows whose sum around every face is `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    /// Weight of each arrow.
    pub weights: Vec<Q>,
    /// Common face sum `λ`.
    pub degree: Q,
}

impl WeightFunction {
    /// Builds an integral weight function, computing the degree from the
    /// first face; `None` if the face sums are not all equal.
    pub fn from_integers(qv: &Quiver, w: &[i64]) -> Option<WeightFunction> {
        let sums: Vec<i64> = qv
            .faces()
            .iter()
            .map(|f| f.boundary.iter().map(|&a| w[a]).sum())
            .collect();
        if sums.iter().any(|&s| s != sums[0]) {
            return None;
        }
        Some(WeightFunction {
            weights: w.iter().map(|&x| q(x)).collect(),
            degree: q(sums[0]),
        })
    }

    /// Whether every face sums to the degree.
    pub fn is_valid(&self, qv: &Quiver) -> bool {
        qv.faces()
            .iter()
            .all(|f| f.boundary.iter().map(|&a| &self.weights[a]).sum::<Q>() == self.degree)
    }

    /// Whether all weights are strictly positive.
    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(|w| w.is_positive())
    }

    /// Residuals of the vertex (anomaly) equations; all zero when anomaly-free.
    pub fn anomaly_residuals(&self, qv: &Quiver) -> Vec<Q> {
        (0..qv.num_nodes())
            .map(|v| {
                let s: Q = qv
                    .in_arrows(v)
                    .iter()
                    .chain(qv.out_arrows(v))
                    .map(|&a| self.weights[a].clone())
                    .sum();
                s - &self.degree * q(qv.in_arrows(v).len() as i64 - 1)
            })
            .collect()
    }

    /// Whether the anomaly equations hold.
    pub fn is_anomaly_free(&self, qv: &Quiver) -> bool {
        self.is_valid(qv) && self.anomaly_residuals(qv).iter().all(|r| r.is_zero())
    }

    /// The rescaled function of the given degree.
    pub fn scaled_to(&self, degree: &Q) -> WeightFunction {
        let f = degree / &self.degree;
        WeightFunction {
            weights: self.weights.iter().map(|w| w * &f).collect(),
            degree: degree.clone(),
        }
    }

    /// The least positive integer multiple with integer weights, divided by
    /// the gcd of its weights: `(weights, degree)`.
    pub fn integral(&self) -> (Vec<i64>, i64) {
        let l = self
            .weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let ints: Vec<BigInt> = self
            .weights
            .iter()
            .map(|w| (w * Q::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let g = if g.is_zero() { BigInt::one() } else { g };
        let deg = (&self.degree * Q::from_integer(l)).to_integer() / &g;
        (
            ints.iter()
                .map(|x| (x / &g).to_i64().expect("weight fits in i64"))
                .collect(),
            deg.to_i64().expect("degree fits in i64"),
        )
    }

    /// Rhombus angles divided by π (equal to the weights at degree 2).
    pub fn angles_over_pi(&self) -> Vec<Q> {
        self.scaled_to(&q(2)).weights
    }
}

/// Euler characteristic test `|Q0| − |Q1| + |Q2| = 0`.
pub fn euler_check(qv: &Quiver) -> bool {
    qv.num_nodes() as i64 - qv.num_arrows() as i64 + qv.num_faces() as i64 == 0
}

/// The R-symmetry `Σ π` over all perfect matchings, of degree `#matchings`.
pub fn default_r_symmetry(
    qv: &Quiver,
    matchings: &[PerfectMatching],
) -> Result<WeightFunction, SymmetryError> {
    if matchings.is_empty() {
        return Err(SymmetryError::NoRSymmetry(
            "there are no perfect matchings".into(),
        ));
    }
    let v = crate::matchings::sum_of(matchings, qv.num_arrows());
    if let Some(a) = v.iter().position(|&x| x == 0) {
        return Err(SymmetryError::NoRSymmetry(format!(
            "arrow {a} lies in no perfect matching"
        )));
    }
    Ok(WeightFunction {
        weights: v.iter().map(|&x| q(x)).collect(),
        degree: q(matchings.len() as i64),
    })
}

/// Quiver data used by the anomaly LP.
pub(crate) struct AnomalyData<'a> {
    pub nodes: usize,
    pub arrows: Vec<(usize, usize)>,
    pub faces: Vec<&'a [usize]>,
}

impl<'a> AnomalyData<'a> {
    fn of(qv: &'a Quiver) -> Self {
        AnomalyData {
            nodes: qv.num_nodes(),
            arrows: qv.arrows().iter().map(|a| (a.tail, a.head)).collect(),
            faces: qv.faces().iter().map(|f| f.boundary.as_slice()).collect(),
        }
    }

    /// Solves the anomaly system at degree 2 maximising the least weight
    /// (and, if `rhombic`, the least `1 − R_a`).  Returns weights when the
    /// optimum margin is positive.
    pub fn solve(&self, rhombic: bool) -> Option<Vec<Q>> {
        let n = self.arrows.len();
        let t = n;
        let mut lp = LinearProgram::new(n + 1);
        lp.objective[t] = q(1);
        for f in &self.faces {
            let terms: Vec<(usize, Q)> = f.iter().map(|&a| (a, q(1))).collect();
            lp.add(&terms, Relation::Eq, q(2));
        }
        for v in 0..self.nodes {
            let mut terms = Vec::new();
            let mut heads = 0;
            for (a, &(tl, hd)) in self.arrows.iter().enumerate() {
                if hd == v {
                    terms.push((a, q(1)));
                    heads += 1;
                }
                if tl == v {
                    terms.push((a, q(1)));
                }
            }
            lp.add(&terms, Relation::Eq, q(2 * (heads - 1)));
        }
        for a in 0..n {
            lp.add(&[(a, q(1)), (t, q(-1))], Relation::Ge, q(0));
            if rhombic {
                lp.add(&[(a, q(1)), (t, q(1))], Relation::Le, q(1));
            }
        }
        lp.add(&[(t, q(1))], Relation::Le, q(1));
        match lp.solve() {
            LpOutcome::Optimal { x, value } if value.is_positive() => Some(x[..n].to_vec()),
            _ => None,
        }
    }
}

/// An anomaly-free R-symmetry normalised to degree 2, with maximal least
/// weight; `None` when none exists.
pub fn find_anomaly_free(qv: &Quiver) -> Option<WeightFunction> {
    if !euler_check(qv) {
        return None;
    }
    AnomalyData::of(qv).solve(false).map(|w| WeightFunction {
        weights: w,
        degree: q(2),
    })
}

/// An anomaly-free R-symmetry of degree 2 with every weight in `(0, 1)`
/// (rhombus angles `π R_a`); `None` when none exists.
pub fn find_rhombic(qv: &Quiver) -> Option<WeightFunction> {
    if !euler_check(qv) {
        return None;
    }
    AnomalyData::of(qv).solve(true).map(|w| WeightFunction {
        weights: w,
        degree: q(2),
    })
}

/// The ladder of consistency conditions with witnesses.
#[derive(Debug, Clone, Default)]
pub struct ConsistencyReport {
    /// Every edge lies in some perfect matching.
    pub nondegenerate: bool,
    /// `|Q0| − |Q1| + |Q2| = 0`.
    pub euler_ok: bool,
    /// An integral R-symmetry (sum of all matchings), if non-degenerate.
    pub r_symmetry: Option<WeightFunction>,
    /// An anomaly-free R-symmetry of degree 2.
    pub anomaly_free_r: Option<WeightFunction>,
    /// An anomaly-free R-symmetry with all weights in `(0, 1)`.
    pub rhombic_r: Option<WeightFunction>,
    /// Geometric consistency verdict, once computed.
    pub geometric: Option<bool>,
    /// Degree up to which algebraic consistency was verified.
    pub algebraic_up_to: Option<u32>,
}

impl ConsistencyReport {
    /// Fills the matching- and LP-based rungs.
    pub fn compute(g: &crate::surface::TorusGraph) -> ConsistencyReport {
        let qv = g.quiver();
        let ms = crate::matchings::enumerate_matchings(g);
        let nondegenerate = crate::matchings::nondegeneracy_check(g).passed();
        let r_symmetry = if nondegenerate {
            default_r_symmetry(qv, &ms).ok()
        } else {
            None
        };
        let anomaly_free_r = find_anomaly_free(qv);
        let rhombic_r = if anomaly_free_r.is_some() {
            find_rhombic(qv)
        } else {
            None
        };
        ConsistencyReport {
            nondegenerate,
            euler_ok: euler_check(qv),
            r_symmetry,
            anomaly_free_r,
            rhombic_r,
            geometric: None,
            algebraic_up_to: None,
        }
    }
}
