//! Bundled models drawn from standard examples: regular tilings, the
//! conifold and a non-minimal variant, unbalanced, matching-free and
//! degenerate tilings, a consistent but not geometrically consistent tiling,
//! a five-zig-zag example and a tiling whose algebra is not toric-consistent.

use crate::surface::{load, TorusGraph};

/// Text of the regular hexagonal tiling.
pub const HEXAGONAL: &str = include_str!("../fixtures/hexagonal.dimer");
/// Text of the square tiling (conifold).
pub const CONIFOLD: &str = include_str!("../fixtures/conifold.dimer");
/// Text of the square tiling with one black vertex split in two.
pub const NONMINIMAL_CONIFOLD: &str = include_str!("../fixtures/nonminimal_conifold.dimer");
/// Text of the unbalanced tiling by three rhombi.
pub const THREE_RHOMBI: &str = include_str!("../fixtures/three_rhombi.dimer");
/// Text of the cube graph, a tiling of the sphere (rejected by [`load`]).
pub const CUBE: &str = include_str!("../fixtures/cube.dimer");
/// Text of a balanced tiling without perfect matchings.
pub const BALWNOPM: &str = include_str!("../fixtures/balwnopm.dimer");
/// Text of a degenerate tiling with an edge in every perfect matching.
pub const DEGENERATE: &str = include_str!("../fixtures/degenerate.dimer");
/// Text of the square–octagon tiling (consistent, not geometrically consistent).
pub const EXAMPLESTP: &str = include_str!("../fixtures/examplestp.dimer");
/// Text of the tiling with five zig-zag paths.
pub const MEMEG: &str = include_str!("../fixtures/memeg.dimer");
/// Text of a tiling whose algebra is not algebraically consistent.
pub const NOT_ALGEBRAIC: &str = include_str!("../fixtures/not_algebraic.dimer");

fn get(text: &str) -> TorusGraph {
    load(text).expect("bundled fixture must load")
}

/// The regular hexagonal tiling.
pub fn hexagonal() -> TorusGraph {
    get(HEXAGONAL)
}

/// The conifold square tiling.
pub fn conifold() -> TorusGraph {
    get(CONIFOLD)
}

/// The non-minimal conifold.
pub fn nonminimal_conifold() -> TorusGraph {
    get(NONMINIMAL_CONIFOLD)
}

/// The unbalanced three-rhombus tiling.
pub fn three_rhombi() -> TorusGraph {
    get(THREE_RHOMBI)
}

/// The tiling without perfect matchings.
pub fn balwnopm() -> TorusGraph {
    get(BALWNOPM)
}

/// The degenerate tiling.
pub fn degenerate() -> TorusGraph {
    get(DEGENERATE)
}

/// The square–octagon tiling.
pub fn examplestp() -> TorusGraph {
    get(EXAMPLESTP)
}

/// The five-zig-zag tiling.
pub fn memeg() -> TorusGraph {
    get(MEMEG)
}

/// The tiling whose algebra is not algebraically consistent.
pub fn not_algebraic() -> TorusGraph {
    get(NOT_ALGEBRAIC)
}

/// Every bundled model that loads, with its name.
pub fn all_valid() -> Vec<(&'static str, TorusGraph)> {
    vec![
        ("hexagonal", hexagonal()),
        ("conifold", conifold()),
        ("nonminimal_conifold", nonminimal_conifold()),
        ("three_rhombi", three_rhombi()),
        ("balwnopm", balwnopm()),
        ("degenerate", degenerate()),
        ("examplestp", examplestp()),
        ("memeg", memeg()),
        ("not_algebraic", not_algebraic()),
    ]
}
