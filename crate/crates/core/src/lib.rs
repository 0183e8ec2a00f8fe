//! Refined tropical boundary invariants `N_Δ(q)` of plane lattice degrees.
//!
//! A degree `Δ` is a multiset of lattice vectors summing to zero. Its
//! invariant counts rational tropical curves with ends in the directions of
//! `Δ` and prescribed end moments, each weighted by its refined
//! (Block–Göttsche) multiplicity, and lies in `Z[q^{±1/2}]`.
//!
//! Two independent computations are provided:
//!
//! * [`refined_invariant`], the chord recursion, which splits a curve along the
//!   path between two chosen ends and recurses on smaller degrees;
//! * [`oracle_invariant`], a brute-force count over every labeled trivalent
//!   tree at a random generic moment configuration.
//!
//! ```
//! use refined_chord::{refined_invariant, Degree, InvariantOptions, NoCache};
//!
//! let cubic = Degree::triangle(3).unwrap();
//! let n = refined_invariant(&cubic, &InvariantOptions::new(&NoCache)).unwrap();
//! assert_eq!(n.to_string(), "q + 7 + q^-1");
//! ```

pub mod chord;
pub mod cli;
pub mod lattice;
pub mod oracle;
pub mod poly;
pub mod store;

pub use chord::{
    default_ends, end_pairs, enumerate_decompositions, refined_invariant, ChordDecomposition,
    ChordError, InvariantOptions,
};
pub use lattice::{omega, Degree, DegreeError, LatticeVector};
pub use oracle::{
    enumerate_trees, oracle_invariant, solve_type, tree_count, CombinatorialTree, MomentConfig,
    OracleError, OracleOptions, Rational,
};
pub use poly::{q_analog, q_difference, PolyError, RefinedPolynomial};
pub use store::{CacheError, MemoCache, MemoStore, NoCache};
