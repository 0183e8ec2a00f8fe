#![allow(dead_code)]

use refined_chord::cli::parse_degree;
use refined_chord::Degree;

/// Degrees with at most 8 ends used to cross-check the recursion against the
/// direct count.
pub const CORPUS: &[&str] = &[
    // plane families N_d(λ)
    "P2:1",
    "P2:2",
    "P2:2:2",
    "P2:3:2,1",
    "P2:3:3",
    // non-primitive vectors
    "(0,-2),(-1,1),(1,1)",
    "(-2,0),(0,-2),(2,2)",
    "(-1,0),(0,-3),(1,3)",
    "(3,0),(0,3),(-3,-3)",
    "(-2,0),(-1,0),(0,-3),(3,3)",
    "(-1,0)^2,(0,-4),(1,2)^2",
    // other polygons
    "P1xP1:1,1",
    "P1xP1:1,2",
    "P1xP1:2,2",
    "(2,1),(-1,1),(-1,-2),(0,-1),(0,1)",
    "(-1,0)^2,(0,-2),(0,-1),(1,1)^2,(0,1)",
    "(1,0)^2,(-2,0),(0,1),(0,-1)",
    "(1,0),(0,1),(-1,-1),(-1,0),(0,-1),(1,1)",
    "(1,2),(-2,-1),(1,-1)",
];

pub fn corpus() -> Vec<(&'static str, Degree)> {
    CORPUS
        .iter()
        .map(|&s| (s, parse_degree(s).unwrap()))
        .collect()
}

pub fn is_cp2_family(d: &Degree) -> bool {
    d.vectors()
        .iter()
        .all(|v| (v.x, v.y) == (-1, 0) || (v.x, v.y) == (1, 1) || (v.x == 0 && v.y < 0))
}

pub fn has_non_primitive(d: &Degree) -> bool {
    d.vectors().iter().any(|v| num_integer::gcd(v.x, v.y) > 1)
}
