//! The consistency ladder printed by `dimers report`.
//!
//! Rungs are evaluated in a fixed order; each records a witness or a
//! counterexample in its summary, never just a boolean.

use dimers::algebra::ToricAlgebra;
use dimers::matchings::{enumerate_matchings, hall_check, nondegeneracy_check, HallVerdict};
use dimers::symmetry::{default_r_symmetry, euler_check, find_anomaly_free, WeightFunction};
use dimers::zigzag::{
    geometric_check, normal_polygon_doubled_area, properly_ordered, zigzag_paths, GeomFailure,
};
use dimers::TorusGraph;

use crate::output::Record;

/// Names of the rungs, in evaluation order, for degree bound `d`.
pub fn rung_names(d: u32) -> Vec<String> {
    let mut v: Vec<String> = [
        "load",
        "euler",
        "hall",
        "nondegeneracy",
        "R-symmetry",
        "anomaly-free",
        "geometric",
        "properly-ordered",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    v.push(format!("algebraic({d})"));
    v.push(format!("cy3({d})"));
    v
}

/// One rung of the ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rung {
    /// Rung name.
    pub name: String,
    /// Verdict.
    pub pass: bool,
    /// Witness or counterexample.
    pub summary: String,
}

impl Rung {
    fn new(name: &str, pass: bool, summary: impl Into<String>) -> Rung {
        Rung {
            name: name.to_string(),
            pass,
            summary: summary.into(),
        }
    }

    /// The output record `RUNG name PASS|FAIL summary`.
    pub fn record(&self) -> Record {
        Record::new("rung")
            .word("name", self.name.clone())
            .status(self.pass)
            .text("summary", self.summary.clone())
    }
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

fn weights(w: &WeightFunction) -> String {
    let items: Vec<String> = w.weights.iter().map(|x| x.to_string()).collect();
    format!("[{}] with face sum {}", items.join(","), w.degree)
}

/// A short description of a geometric-consistency failure.
pub fn describe_failure(f: &GeomFailure) -> String {
    match f {
        GeomFailure::SelfIntersection { path, i, j } => {
            format!("path {path} meets itself at positions {i} and {j}")
        }
        GeomFailure::NonPrimitiveClass { path } => format!("path {path} has a non-primitive class"),
        GeomFailure::ZeroClass { path } => format!("path {path} has zero class"),
        GeomFailure::ParallelShare { a, b, arrow } => {
            format!("parallel paths {a} and {b} share arrow {arrow}")
        }
        GeomFailure::CosetCount { a, b, coset, count } => format!(
            "lifts of paths {a} and {b} in coset ({},{}) meet {count} times",
            coset[0], coset[1]
        ),
    }
}

/// Evaluates every rung after `load` for a loaded model.
pub fn ladder(g: &TorusGraph, d: u32) -> Vec<Rung> {
    let names = rung_names(d);
    let q = g.quiver();
    let mut out = Vec::new();

    let (n, a, f) = (q.num_nodes(), q.num_arrows(), q.num_faces());
    let chi = n as i64 - a as i64 + f as i64;
    out.push(Rung::new(
        "euler",
        euler_check(q),
        format!("Q0-Q1+Q2 = {n}-{a}+{f} = {chi}"),
    ));

    let ms = enumerate_matchings(g);
    out.push(match hall_check(g) {
        HallVerdict::Pass => Rung::new("hall", true, format!("{} perfect matchings", ms.len())),
        HallVerdict::Imbalance { black, white } => Rung::new(
            "hall",
            false,
            format!("{black} black but {white} white vertices"),
        ),
        HallVerdict::Deficient { black, neighbours } => Rung::new(
            "hall",
            false,
            format!(
                "black vertices {} have only the white neighbours {}",
                list(&black),
                list(&neighbours)
            ),
        ),
    });

    let nd = nondegeneracy_check(g);
    out.push(if nd.passed() {
        Rung::new(
            "nondegeneracy",
            true,
            "every edge lies in a perfect matching",
        )
    } else {
        Rung::new(
            "nondegeneracy",
            false,
            format!(
                "edges {} lie in no perfect matching; edges {} lie in every one",
                list(&nd.unmatched()),
                list(&nd.forced)
            ),
        )
    });

    out.push(if nd.passed() {
        match default_r_symmetry(q, &ms) {
            Ok(w) => Rung::new(
                "R-symmetry",
                true,
                format!("sum of {} matchings: {}", ms.len(), weights(&w)),
            ),
            Err(e) => Rung::new("R-symmetry", false, e.to_string()),
        }
    } else {
        Rung::new(
            "R-symmetry",
            false,
            "degenerate: some edge lies in no perfect matching",
        )
    });

    out.push(match find_anomaly_free(q) {
        Some(w) => Rung::new("anomaly-free", true, format!("R = {}", weights(&w))),
        None => Rung::new("anomaly-free", false, "no anomaly-free R-symmetry exists"),
    });

    let paths = zigzag_paths(q);
    let geo = geometric_check(&paths);
    out.push(if geo.verdict {
        Rung::new(
            "geometric",
            true,
            format!("{} zig-zag paths meet as required", paths.len()),
        )
    } else {
        let first: Vec<String> = geo.failures.iter().take(3).map(describe_failure).collect();
        Rung::new(
            "geometric",
            false,
            format!("{} failures: {}", geo.failures.len(), first.join("; ")),
        )
    });

    out.push(match properly_ordered(q, &paths) {
        Ok(true) => Rung::new(
            "properly-ordered",
            true,
            format!("|Q0| = {n} = twice the normal polygon area; face orders match"),
        ),
        Ok(false) => {
            let area = normal_polygon_doubled_area(&paths).unwrap_or(0);
            Rung::new(
                "properly-ordered",
                false,
                if area as usize != n {
                    format!("|Q0| = {n} but twice the normal polygon area is {area}")
                } else {
                    "some face boundary is not crossed in fan order".to_string()
                },
            )
        }
        Err(e) => Rung::new("properly-ordered", false, e.to_string()),
    });

    let (alg, cy3) = (&names[8], &names[9]);
    let max = i64::from(d);
    match ToricAlgebra::with_default_grading(g) {
        Err(e) => {
            out.push(Rung::new(alg, false, e.to_string()));
            out.push(Rung::new(cy3, false, format!("no algebra: {e}")));
        }
        Ok(t) => {
            let lambda = t.grading().lambda;
            match t.algebraic_consistency(max) {
                Err(e) => out.push(Rung::new(alg, false, e.to_string())),
                Ok(v) if v.consistent() => out.push(Rung::new(
                    alg,
                    true,
                    format!(
                        "{} pieces up to R-degree {max} (face sum {lambda}) match lattice points",
                        v.pieces.len()
                    ),
                )),
                Ok(v) => {
                    let ce: Vec<String> = v.counterexamples.iter().map(|c| c.to_string()).collect();
                    out.push(Rung::new(alg, false, ce.join("; ")));
                }
            }
            out.push(match t.cy3_check(max) {
                Ok(r) if r.exact() => Rung::new(
                    cy3,
                    true,
                    format!("{} graded pieces exact", r.pieces.len()),
                ),
                Ok(r) => {
                    let bad = r.pieces.iter().find(|p| !p.exact()).expect("some piece fails");
                    Rung::new(
                        cy3,
                        false,
                        format!(
                            "piece j={} degree {}: dim T2 {}, dim T3 {}, rank F2 {}, rank F3 {}, composite zero {}",
                            bad.j,
                            bad.degree,
                            bad.dim_t2,
                            bad.dim_t3,
                            bad.rank_f2,
                            bad.rank_f3,
                            bad.composite_zero
                        ),
                    )
                }
                Err(e) => Rung::new(cy3, false, e.to_string()),
            });
        }
    }
    debug_assert!(out.iter().zip(&names[1..]).all(|(r, n)| &r.name == n));
    out
}

/// The `load` rung for a successfully loaded model.
pub fn load_rung(g: &TorusGraph) -> Rung {
    let q = g.quiver();
    Rung::new(
        "load",
        true,
        format!(
            "{} vertices, {} edges, {} faces; quiver with {} nodes and {} arrows",
            g.num_vertices(),
            g.num_edges(),
            g.num_faces(),
            q.num_nodes(),
            q.num_arrows()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use dimers::fixtures;

    #[test]
    fn hexagonal_passes_everything() {
        let g = fixtures::hexagonal();
        let rungs = ladder(&g, 3);
        assert_eq!(rungs.len(), 9);
        for r in &rungs {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn examplestp_fails_only_geometric_rungs() {
        let g = fixtures::examplestp();
        let rungs = ladder(&g, 2);
        let failed: Vec<&str> = rungs
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.name.as_str())
            .collect();
        assert!(failed.contains(&"geometric"), "{rungs:?}");
        assert!(rungs.iter().any(|r| r.name == "anomaly-free" && r.pass));
    }

    #[test]
    fn degenerate_names_unmatched_edges() {
        let g = fixtures::degenerate();
        let r = ladder(&g, 1);
        let nd = r.iter().find(|r| r.name == "nondegeneracy").unwrap();
        assert!(!nd.pass);
        assert!(nd.summary.contains("lie in every one"));
    }
}
