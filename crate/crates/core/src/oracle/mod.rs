//! Brute-force count of rational tropical curves with prescribed end moments.
//!
//! End `j` of the degree is pinned to the line `{p : ω(n_j, p) = μ_j}`. For
//! each labeled trivalent tree the moments are linear in the root position and
//! the `m - 3` bounded edge lengths; a tree contributes a curve when that
//! square system has a unique solution with all lengths positive. Summing the
//! refined multiplicities of those curves gives the invariant, independently
//! of the chord recursion.

pub mod linalg;
pub mod trees;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{omega, Degree, LatticeVector};
use crate::poly::{q_analog, RefinedPolynomial};
use linalg::{solve_integer_system, SolveOutcome};
pub use trees::{enumerate_trees, tree_count, CombinatorialTree, TreeTopology};

pub type Rational = BigRational;

/// Default bound on `m` for [`oracle_invariant`].
pub const DEFAULT_MAX_ENDS: usize = 10;
/// Moments are drawn uniformly from `[-MOMENT_RANGE, MOMENT_RANGE]`.
pub const MOMENT_RANGE: i64 = 1_000_000;
pub const MAX_REDRAWS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("degree has {0} ends; the oracle needs at least 3")]
    TooFew(usize),
    #[error("degree has {m} ends, above the oracle guard of {max}")]
    TooLarge { m: usize, max: usize },
    #[error("moments do not satisfy Menelaus (sum is {0})")]
    Menelaus(String),
    #[error("moment configuration has {got} entries, degree has {want} ends")]
    WrongLength { got: usize, want: usize },
    #[error("moment configuration is not generic")]
    Degenerate,
    #[error("no generic moment configuration found in {MAX_REDRAWS} draws")]
    GenericityFailure,
    #[error("flat vertex in a solved curve")]
    FlatVertex,
}

/// One moment per labeled end, summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentConfig {
    mu: Vec<Rational>,
}

impl MomentConfig {
    pub fn new(mu: Vec<Rational>) -> Result<Self, OracleError> {
        let total: Rational = mu.iter().sum();
        if !total.is_zero() {
            return Err(OracleError::Menelaus(total.to_string()));
        }
        Ok(MomentConfig { mu })
    }

    /// Takes moments for all ends but the last; the last closes the sum.
    pub fn from_partial(partial: impl IntoIterator<Item = Rational>) -> Self {
        let mut mu: Vec<Rational> = partial.into_iter().collect();
        let last = -mu.iter().sum::<Rational>();
        mu.push(last);
        MomentConfig { mu }
    }

    /// The moments of the curve through a single point: every end passes
    /// through `p`. Maximally degenerate.
    pub fn through_point(degree: &Degree, p: (i64, i64)) -> Self {
        let p = LatticeVector::new(p.0, p.1);
        MomentConfig {
            mu: degree
                .vectors()
                .iter()
                .map(|&n| Rational::from_integer(omega(n, p).into()))
                .collect(),
        }
    }

    pub fn moments(&self) -> &[Rational] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

/// A solved curve: lengths of the bounded edges in the order of
/// [`CombinatorialTree::bounded_edges`], and the root vertex position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub lengths: Vec<Rational>,
    pub root: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TypeOutcome {
    Curve(Solution),
    /// Formal solution outside the open orthant; `on_boundary` when some
    /// length is exactly zero.
    Outside {
        on_boundary: bool,
    },
    Singular {
        consistent: bool,
    },
}

impl TypeOutcome {
    fn is_degenerate(&self) -> bool {
        matches!(
            self,
            TypeOutcome::Outside { on_boundary: true } | TypeOutcome::Singular { consistent: true }
        )
    }
}

fn solve_type_outcome(t: &CombinatorialTree, mu: &MomentConfig) -> TypeOutcome {
    let m = t.ends().len();
    assert_eq!(mu.len(), m, "one moment per end");
    let edges = t.bounded_edges();
    let mut column = vec![usize::MAX; 2 * m - 2];
    for (i, &v) in edges.iter().enumerate() {
        column[v] = 2 + i;
    }
    // common denominator so the system is integral
    let denom = mu.moments().iter().fold(BigInt::one(), |acc, q| {
        num_integer::lcm(acc, q.denom().clone())
    });

    let n = m - 1;
    let mut a = vec![vec![BigInt::zero(); n]; n];
    let mut b = Vec::with_capacity(n);
    for j in 1..m {
        let row = &mut a[j - 1];
        let normal = t.ends()[j];
        // ω(n, (X, Y)) = n.x·Y − n.y·X
        row[0] = BigInt::from(-normal.y);
        row[1] = BigInt::from(normal.x);
        let mut v = t.parent(j);
        while v != t.root() {
            row[column[v]] = BigInt::from(omega(normal, t.slope[v]));
            v = t.parent(v);
        }
        let scaled = &mu.moments()[j] * Rational::from_integer(denom.clone());
        b.push(scaled.to_integer());
    }

    match solve_integer_system(&a, &b) {
        SolveOutcome::Singular { consistent } => TypeOutcome::Singular { consistent },
        SolveOutcome::Unique(x) => {
            let scale = Rational::from_integer(denom);
            let mut x = x.into_iter().map(|v| v / &scale);
            let root = (x.next().unwrap(), x.next().unwrap());
            let lengths: Vec<Rational> = x.collect();
            if lengths.iter().all(|l| l.is_positive()) {
                TypeOutcome::Curve(Solution { lengths, root })
            } else {
                TypeOutcome::Outside {
                    on_boundary: lengths.iter().any(|l| l.is_zero()),
                }
            }
        }
    }
}

/// The curve of type `t` with moments `mu`, if one exists: the evaluation
/// system must be invertible and every bounded length strictly positive.
pub fn solve_type(t: &CombinatorialTree, mu: &MomentConfig) -> Option<Solution> {
    match solve_type_outcome(t, mu) {
        TypeOutcome::Curve(s) => Some(s),
        _ => None,
    }
}

/// `∏_V [m_V]_q` over the internal vertices.
pub fn refined_multiplicity(t: &CombinatorialTree) -> Result<RefinedPolynomial, OracleError> {
    let mut acc = RefinedPolynomial::one();
    for v in t.internal_vertices() {
        let mult = t.vertex_multiplicity(v);
        if mult == 0 {
            return Err(OracleError::FlatVertex);
        }
        acc = &acc * &q_analog(mult);
    }
    Ok(acc)
}

/// Complex multiplicity `∏_V |ω(u, v)|`.
pub fn complex_multiplicity(t: &CombinatorialTree) -> u128 {
    t.internal_vertices()
        .map(|v| t.vertex_multiplicity(v) as u128)
        .product()
}

/// Vertex positions of a solved curve, indexed by vertex id (leaves unused).
pub fn vertex_positions(
    t: &CombinatorialTree,
    sol: &Solution,
) -> Vec<Option<(Rational, Rational)>> {
    let mut pos: Vec<Option<(Rational, Rational)>> = vec![None; 2 * t.ends().len() - 2];
    pos[t.root()] = Some(sol.root.clone());
    let lengths: std::collections::HashMap<usize, &Rational> =
        t.bounded_edges().into_iter().zip(&sol.lengths).collect();
    for &v in &t.rooted.order {
        if v == t.root() || v < t.ends().len() {
            continue;
        }
        let (px, py) = pos[t.parent(v)].clone().expect("parents come first");
        let l = lengths[&v];
        let s = t.slope[v];
        pos[v] = Some((
            px + l * Rational::from_integer(s.x.into()),
            py + l * Rational::from_integer(s.y.into()),
        ));
    }
    pos
}

/// Checks a solution exactly: positive lengths, balancing at every vertex,
/// every end (including the first, which is not in the solved system) on its
/// prescribed line, and the moments of the curve summing to zero.
pub fn verify_solution(
    t: &CombinatorialTree,
    mu: &MomentConfig,
    sol: &Solution,
) -> Result<(), String> {
    if !t.is_balanced() {
        return Err("unbalanced vertex".into());
    }
    if sol.lengths.len() != t.bounded_edges().len() || sol.lengths.iter().any(|l| !l.is_positive())
    {
        return Err("nonpositive or missing length".into());
    }
    let pos = vertex_positions(t, sol);
    let mut curve_total = Rational::zero();
    for (j, &n) in t.ends().iter().enumerate() {
        let (x, y) = pos[t.parent(j)].clone().ok_or("unplaced vertex")?;
        let moment =
            Rational::from_integer(n.x.into()) * y - Rational::from_integer(n.y.into()) * x;
        if moment != mu.moments()[j] {
            return Err(format!("end {j}: moment {moment} != {}", mu.moments()[j]));
        }
        curve_total += moment;
    }
    if !curve_total.is_zero() {
        return Err(format!("Menelaus residue {curve_total}"));
    }
    Ok(())
}

fn check_size(d: &Degree, max_ends: usize) -> Result<(), OracleError> {
    match d.len() {
        m if m < 3 => Err(OracleError::TooFew(m)),
        m if m > max_ends => Err(OracleError::TooLarge { m, max: max_ends }),
        _ => Ok(()),
    }
}

/// Sums the refined multiplicity over all curves with moments `mu`.
///
/// Fails with [`OracleError::Degenerate`] if some type reaches a length of
/// exactly zero or some singular type has `mu` in its image.
pub fn count_curves(d: &Degree, mu: &MomentConfig) -> Result<RefinedPolynomial, OracleError> {
    let m = d.len();
    if m < 3 {
        return Err(OracleError::TooFew(m));
    }
    if mu.len() != m {
        return Err(OracleError::WrongLength {
            got: mu.len(),
            want: m,
        });
    }
    (0..tree_count(m))
        .into_par_iter()
        .map(|i| {
            let t = CombinatorialTree::new(TreeTopology::from_index(m, i), d);
            match solve_type_outcome(&t, mu) {
                TypeOutcome::Curve(_) => refined_multiplicity(&t),
                o if o.is_degenerate() => Err(OracleError::Degenerate),
                _ => Ok(RefinedPolynomial::zero()),
            }
        })
        .try_reduce(RefinedPolynomial::zero, |a, b| Ok(a + b))
}

/// Every solved curve for `mu`, in tree-index order.
pub fn solve_all(
    d: &Degree,
    mu: &MomentConfig,
) -> Result<Vec<(CombinatorialTree, Solution)>, OracleError> {
    let m = d.len();
    if m < 3 {
        return Err(OracleError::TooFew(m));
    }
    let mut out = Vec::new();
    for t in enumerate_trees(m) {
        let t = CombinatorialTree::new(t, d);
        match solve_type_outcome(&t, mu) {
            TypeOutcome::Curve(s) => out.push((t, s)),
            o if o.is_degenerate() => return Err(OracleError::Degenerate),
            _ => {}
        }
    }
    Ok(out)
}

/// Integer moments for ends `1..m-1` uniform in `±MOMENT_RANGE`, last one
/// closing the sum. Deterministic in `seed`.
pub fn draw_moments(d: &Degree, seed: u64) -> MomentConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MomentConfig::from_partial(
        (1..d.len())
            .map(|_| Rational::from_integer(rng.gen_range(-MOMENT_RANGE..=MOMENT_RANGE).into())),
    )
}

/// First configuration from `draw(seed), draw(seed + 1), …` that passes the
/// genericity check, together with its count.
pub fn first_generic<F>(
    d: &Degree,
    seed: u64,
    mut draw: F,
) -> Result<(MomentConfig, RefinedPolynomial), OracleError>
where
    F: FnMut(u64) -> MomentConfig,
{
    for k in 0..MAX_REDRAWS {
        let mu = draw(seed.wrapping_add(k));
        match count_curves(d, &mu) {
            Ok(count) => return Ok((mu, count)),
            Err(OracleError::Degenerate) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(OracleError::GenericityFailure)
}

pub fn sample_generic_moments(d: &Degree, seed: u64) -> Result<MomentConfig, OracleError> {
    check_size(d, usize::MAX)?;
    first_generic(d, seed, |s| draw_moments(d, s)).map(|(mu, _)| mu)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub max_ends: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_ends: DEFAULT_MAX_ENDS,
        }
    }
}

impl OracleOptions {
    pub fn unbounded() -> Self {
        OracleOptions {
            max_ends: usize::MAX,
        }
    }
}

/// The invariant counted directly at a generic moment configuration.
pub fn oracle_invariant(
    d: &Degree,
    seed: u64,
    opts: OracleOptions,
) -> Result<RefinedPolynomial, OracleError> {
    check_size(d, opts.max_ends)?;
    first_generic(d, seed, |s| draw_moments(d, s)).map(|(_, count)| count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn poly(terms: &[(i64, i64)]) -> RefinedPolynomial {
        RefinedPolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn line_through_three_moments() {
        let line = Degree::triangle(1).unwrap();
        // ends sorted: (-1,0), (0,-1), (1,1)
        let mu = MomentConfig::new(vec![q(1), q(2), q(-3)]).unwrap();
        let t = CombinatorialTree::new(TreeTopology::from_index(3, 0), &line);
        let sol = solve_type(&t, &mu).unwrap();
        assert!(sol.lengths.is_empty());
        // ω((0,-1),(x,y)) = x = 2 and ω((1,1),(x,y)) = y - x = -3
        assert_eq!(sol.root, (q(2), q(-1)));
        verify_solution(&t, &mu, &sol).unwrap();
    }

    #[test]
    fn menelaus_is_enforced() {
        assert!(matches!(
            MomentConfig::new(vec![q(1), q(2), q(3)]),
            Err(OracleError::Menelaus(_))
        ));
        let d = Degree::triangle(1).unwrap();
        for seed in 0..5 {
            let mu = draw_moments(&d, seed);
            assert!(mu.moments().iter().sum::<Rational>().is_zero());
            assert_eq!(mu, draw_moments(&d, seed));
        }
    }

    #[test]
    fn zero_slope_type_is_singular() {
        // {(1,0),(-1,0),(0,1),(0,-1)} with (1,0),(-1,0) paired has a zero edge
        let d = Degree::rectangle(1, 1).unwrap();
        let mu = draw_moments(&d, 3);
        let mut saw_zero_slope = false;
        for t in enumerate_trees(4) {
            let ct = CombinatorialTree::new(t, &d);
            if ct.has_zero_slope() {
                saw_zero_slope = true;
                assert_eq!(solve_type(&ct, &mu), None);
                assert!(matches!(
                    solve_type_outcome(&ct, &mu),
                    TypeOutcome::Singular { .. }
                ));
            }
        }
        assert!(saw_zero_slope);
    }

    #[test]
    fn negative_lengths_give_no_curve() {
        let d = Degree::rectangle(1, 1).unwrap();
        let mu = draw_moments(&d, 0);
        let outcomes: Vec<_> = enumerate_trees(4)
            .map(|t| solve_type_outcome(&CombinatorialTree::new(t, &d), &mu))
            .collect();
        let curves = outcomes
            .iter()
            .filter(|o| matches!(o, TypeOutcome::Curve(_)))
            .count();
        let outside = outcomes
            .iter()
            .filter(|o| matches!(o, TypeOutcome::Outside { on_boundary: false }))
            .count();
        assert_eq!(curves, 1);
        assert_eq!(outside, 1);
    }

    #[test]
    fn multiplicity_examples() {
        let line = Degree::triangle(1).unwrap();
        let t = CombinatorialTree::new(TreeTopology::from_index(3, 0), &line);
        assert_eq!(refined_multiplicity(&t).unwrap(), RefinedPolynomial::one());

        let d = Degree::new(vec![v(-1, 0), v(0, -2), v(1, 2)]).unwrap();
        let t = CombinatorialTree::new(TreeTopology::from_index(3, 0), &d);
        assert_eq!(refined_multiplicity(&t).unwrap(), poly(&[(1, 1), (-1, 1)]));

        // (1,0) and (0,3) meet at a vertex of multiplicity 3, the other
        // vertex has multiplicity 1
        let d = Degree::new(vec![v(1, 0), v(0, 3), v(-1, -2), v(0, -1)]).unwrap();
        let t = enumerate_trees(4)
            .map(|t| CombinatorialTree::new(t, &d))
            .find(|t| {
                let mut mults: Vec<i64> = t
                    .internal_vertices()
                    .map(|x| t.vertex_multiplicity(x))
                    .collect();
                mults.sort();
                mults == [1, 3]
            })
            .unwrap();
        assert_eq!(complex_multiplicity(&t), 3);
        assert_eq!(
            refined_multiplicity(&t).unwrap(),
            poly(&[(2, 1), (0, 1), (-2, 1)])
        );
    }

    #[test]
    fn flat_vertex_is_an_error() {
        let d = Degree::rectangle(1, 1).unwrap();
        let flat = enumerate_trees(4)
            .map(|t| CombinatorialTree::new(t, &d))
            .find(|t| t.has_zero_slope())
            .unwrap();
        assert_eq!(refined_multiplicity(&flat), Err(OracleError::FlatVertex));
    }

    #[test]
    fn degenerate_configuration_is_rejected() {
        let d = Degree::rectangle(1, 1).unwrap();
        let mu = MomentConfig::through_point(&d, (0, 0));
        assert_eq!(count_curves(&d, &mu), Err(OracleError::Degenerate));
        // redraw: the first draw is degenerate, the next is not
        let (picked, count) = first_generic(&d, 10, |s| {
            if s == 10 {
                MomentConfig::through_point(&d, (5, -7))
            } else {
                draw_moments(&d, s)
            }
        })
        .unwrap();
        assert_eq!(picked, draw_moments(&d, 11));
        assert_eq!(count, RefinedPolynomial::one());
        // never generic
        assert_eq!(
            first_generic(&d, 0, |_| MomentConfig::through_point(&d, (1, 1))),
            Err(OracleError::GenericityFailure)
        );
    }

    #[test]
    fn guard_and_small_inputs() {
        let seg = Degree::new(vec![v(1, 0), v(-1, 0)]).unwrap();
        assert_eq!(
            oracle_invariant(&seg, 0, OracleOptions::default()),
            Err(OracleError::TooFew(2))
        );
        let big = Degree::triangle(4).unwrap();
        assert_eq!(
            oracle_invariant(&big, 0, OracleOptions::default()),
            Err(OracleError::TooLarge { m: 12, max: 10 })
        );
    }

    #[test]
    fn small_values() {
        let opts = OracleOptions::default();
        assert_eq!(
            oracle_invariant(&Degree::triangle(1).unwrap(), 0, opts).unwrap(),
            RefinedPolynomial::one()
        );
        assert_eq!(
            oracle_invariant(&Degree::cp2(2, &[2]).unwrap(), 0, opts).unwrap(),
            poly(&[(1, 1), (-1, 1)])
        );
    }
}
