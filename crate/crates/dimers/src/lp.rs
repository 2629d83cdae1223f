//! Exact linear programming over the rationals: a dense two-phase simplex
//! method with Bland's anti-cycling rule.
//!
//! Problems have the form: maximise `c·x` subject to linear constraints
//! (`≤`, `≥`, `=`) and `x ≥ 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number used throughout.
pub type Q = BigRational;

/// Shorthand for an integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for a fraction.
pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `a·x ≤ b`
    Le,
    /// `a·x ≥ b`
    Ge,
    /// `a·x = b`
    Eq,
}

/// A linear constraint `coeffs · x (rel) rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    /// Dense coefficients, one per variable.
    pub coeffs: Vec<Q>,
    /// Sense.
    pub rel: Relation,
    /// Right-hand side.
    pub rhs: Q,
}

/// A linear program over non-negative variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Number of variables.
    pub num_vars: usize,
    /// Constraints.
    pub constraints: Vec<Constraint>,
    /// Objective to maximise.
    pub objective: Vec<Q>,
}

/// Result of solving a linear program.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// An optimal vertex and the optimal value.
    Optimal {
        /// Optimal point.
        x: Vec<Q>,
        /// Optimal objective value.
        value: Q,
    },
    /// No feasible point.
    Infeasible,
    /// The objective is unbounded above.
    Unbounded,
}

impl LinearProgram {
    /// An empty program with `n` variables and zero objective.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            num_vars: n,
            constraints: Vec::new(),
            objective: vec![Q::zero(); n],
        }
    }

    /// Adds a constraint given sparsely as `(variable, coefficient)` pairs.
    pub fn add(&mut self, terms: &[(usize, Q)], rel: Relation, rhs: Q) {
        let mut coeffs = vec![Q::zero(); self.num_vars];
        for (i, c) in terms {
            coeffs[*i] += c;
        }
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Solves the program exactly.
    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>, // each row: coefficients for all columns, then rhs
    basis: Vec<usize>,
    ncols: usize,
    nvars: usize,
    artificial_start: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let mut slack_count = 0;
        let mut art_count = 0;
        let mut norm: Vec<(Vec<Q>, Relation, Q)> = Vec::with_capacity(m);
        for c in &lp.constraints {
            let (mut a, mut rel, mut b) = (c.coeffs.clone(), c.rel, c.rhs.clone());
            if b.is_negative() {
                a.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            match rel {
                Relation::Le => slack_count += 1,
                Relation::Ge => {
                    slack_count += 1;
                    art_count += 1
                }
                Relation::Eq => art_count += 1,
            }
            norm.push((a, rel, b));
        }
        let artificial_start = n + slack_count;
        let ncols = artificial_start + art_count;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut t) = (n, artificial_start);
        for (a, rel, b) in norm {
            let mut row = vec![Q::zero(); ncols + 1];
            row[..n].clone_from_slice(&a);
            match rel {
                Relation::Le => {
                    row[s] = Q::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Q::one();
                    s += 1;
                    row[t] = Q::one();
                    basis.push(t);
                    t += 1;
                }
                Relation::Eq => {
                    row[t] = Q::one();
                    basis.push(t);
                    t += 1;
                }
            }
            row[ncols] = b;
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            ncols,
            nvars: n,
            artificial_start,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &p;
                }
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` (length ncols) for the current basis.
    fn reduced(&self, cost: &[Q]) -> Vec<Q> {
        let mut red = cost.to_vec();
        red.push(Q::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.ncols {
                if !row[j].is_zero() {
                    red[j] -= cb * &row[j];
                }
            }
        }
        red
    }

    /// Maximises `cost` over allowed columns with Bland's rule.
    fn optimise(&mut self, cost: &[Q], allowed: usize) -> Step {
        loop {
            let red = self.reduced(cost);
            let Some(enter) = (0..allowed).find(|&j| red[j].is_positive()) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[self.ncols] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return Step::Unbounded;
            };
            self.pivot(r, enter);
        }
    }

    fn run(mut self, objective: &[Q]) -> LpOutcome {
        if self.artificial_start < self.ncols {
            let mut c1 = vec![Q::zero(); self.ncols];
            for x in c1.iter_mut().skip(self.artificial_start) {
                *x = -Q::one();
            }
            self.optimise(&c1, self.ncols);
            let infeas: Q = (0..self.rows.len())
                .filter(|&i| self.basis[i] >= self.artificial_start)
                .map(|i| self.rows[i][self.ncols].clone())
                .sum();
            if infeas.is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.artificial_start {
                    if let Some(j) =
                        (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero())
                    {
                        self.pivot(i, j);
                        i += 1;
                    } else {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut c2 = vec![Q::zero(); self.ncols];
        c2[..self.nvars].clone_from_slice(objective);
        match self.optimise(&c2, self.artificial_start) {
            Step::Unbounded => LpOutcome::Unbounded,
            Step::Optimal => {
                let mut x = vec![Q::zero(); self.nvars];
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < self.nvars {
                        x[b] = self.rows[i][self.ncols].clone();
                    }
                }
                let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
                LpOutcome::Optimal { x, value }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(3), q(5)];
        lp.add(&[(0, q(1))], Relation::Le, q(4));
        lp.add(&[(1, q(2))], Relation::Le, q(12));
        lp.add(&[(0, q(3)), (1, q(2))], Relation::Le, q(18));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: vec![q(2), q(6)],
                value: q(36)
            }
        );
    }

    #[test]
    fn equality_and_infeasibility() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(1), q(0)];
        lp.add(&[(0, q(1)), (1, q(1))], Relation::Eq, q(1));
        lp.add(&[(0, q(3))], Relation::Le, q(1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: vec![frac(1, 3), frac(2, 3)],
                value: frac(1, 3)
            }
        );
        lp.add(&[(1, q(1))], Relation::Ge, q(2));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_and_redundant() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(1), q(1)];
        lp.add(&[(0, q(1)), (1, q(-1))], Relation::Eq, q(0));
        lp.add(&[(0, q(2)), (1, q(-2))], Relation::Eq, q(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs() {
        // x - y ≤ -1 with max -x - y → x = 0, y = 1
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(-1), q(-1)];
        lp.add(&[(0, q(1)), (1, q(-1))], Relation::Le, q(-1));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                x: vec![q(0), q(1)],
                value: q(-1)
            }
        );
    }
}
