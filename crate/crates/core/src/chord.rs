//! The chord recursion.
//!
//! Fix two ends `v1` and `vm` of a degree `Δ`. Every rational solution curve
//! has a unique path (the chord) from `v1` to `vm`; cutting it off leaves
//! sub-curves `Γ_1, …, Γ_p` hanging off the chord in order. The ends of `Γ_i`
//! form a block `Δ̃_i`, and together the blocks are an ordered partition of
//! `Δ ∖ {v1, vm}`. With
//!
//! * `u_i = −Σ Δ̃_i`, the slope of the edge joining `Γ_i` to the chord,
//! * `w_1 = −v1`, `w_{i+1} = w_i + u_i`, the slopes along the chord,
//! * `σ_i = ω(w_i, w_{i+1})`, the signed multiplicity at the `i`-th chord vertex,
//!
//! the invariant is the sum over admissible partitions of
//! `∏ [|σ_i|]_q · N(Δ̃_i ⊔ {u_i})`. A partition is admissible when `σ_i ≠ 0`,
//! `σ_i > 0` forces `|Δ̃_i| = 1`, and `ω(σ_i u_i, σ_{i+1} u_{i+1}) ≥ 0` for
//! consecutive blocks. Partitions that differ only by reordering a run of
//! consecutive blocks with colinear `u_i` count once.
//!
//! The ends are labeled (each carries its own moment), so partitions are of
//! the labeled ends. The enumeration walks multiset blocks and attaches to each
//! canonical multiset sequence the number of labeled classes it stands for.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{omega, Degree, LatticeVector};
use crate::poly::{q_analog, RefinedPolynomial};
use crate::store::MemoStore;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error("vector {0} is not an available end of the degree")]
    VectorNotInDegree(LatticeVector),
    #[error("block sums to zero")]
    DegenerateBlock,
    #[error("degree {0} has two vectors; it is the base case and has no chord decompositions")]
    BaseCase(String),
}

/// One admissible ordered partition of `Δ ∖ {v1, vm}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordDecomposition {
    /// Blocks `Δ̃_i` in chord order, each sorted.
    pub blocks: Vec<Vec<LatticeVector>>,
    pub u: Vec<LatticeVector>,
    /// `w_1, …, w_{p+1}`; the last entry equals `vm`.
    pub w: Vec<LatticeVector>,
    pub sigma: Vec<i64>,
    /// Number of labeled partition classes this multiset sequence represents.
    pub multiplicity: BigInt,
}

impl ChordDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `∏ [|σ_i|]_q` times the label multiplicity, without sub-invariants.
    pub fn vertex_weight(&self) -> RefinedPolynomial {
        let product: RefinedPolynomial = self.sigma.iter().map(|s| q_analog(s.abs())).product();
        product.scale(&self.multiplicity)
    }

    /// Sub-degrees `Δ̃_i ⊔ {u_i}` of the non-singleton blocks.
    pub fn sub_degrees(&self) -> Vec<Degree> {
        self.blocks
            .iter()
            .filter(|b| b.len() > 1)
            .map(|b| sub_degree(b).expect("admissible blocks have nonzero sum"))
            .collect()
    }
}

/// `Δ̃ ⊔ {−Σ Δ̃}`, the degree of the sub-curve with its joining edge extended.
pub fn sub_degree(block: &[LatticeVector]) -> Result<Degree, ChordError> {
    let sum: LatticeVector = block.iter().sum();
    if sum.is_zero() {
        return Err(ChordError::DegenerateBlock);
    }
    let mut vectors = block.to_vec();
    vectors.push(-sum);
    Degree::new(vectors).map_err(|_| ChordError::DegenerateBlock)
}

/// True iff inside every maximal run of consecutive blocks with pairwise
/// colinear `u`, the blocks are in nondecreasing lexicographic order.
pub fn canonical_representative(blocks: &[Vec<LatticeVector>]) -> bool {
    let u: Vec<LatticeVector> = blocks
        .iter()
        .map(|b| -b.iter().sum::<LatticeVector>())
        .collect();
    (1..blocks.len())
        .all(|i| !u[i - 1].is_colinear(u[i]) || blocks[i - 1].as_slice() <= blocks[i].as_slice())
}

/// The default end pair: the one leaving the fewest distinct vectors in
/// `Δ ∖ {v1, vm}`, ties broken by sorted order. Requires `|Δ| ≥ 3`.
pub fn default_ends(d: &Degree) -> (LatticeVector, LatticeVector) {
    let groups = d.grouped();
    let distinct = groups.len();
    let mut best: Option<(usize, LatticeVector, LatticeVector)> = None;
    for (i, &(a, ka)) in groups.iter().enumerate() {
        for &(b, kb) in &groups[i..] {
            let left = if a == b {
                if ka < 2 {
                    continue;
                }
                distinct - usize::from(ka == 2)
            } else {
                distinct - usize::from(ka == 1) - usize::from(kb == 1)
            };
            if best.is_none_or(|(l, _, _)| left < l) {
                best = Some((left, a, b));
            }
        }
    }
    let (_, a, b) = best.expect("a degree has at least two vectors");
    (a, b)
}

/// Every ordered end pair `(v1, vm)` that can be removed from `d`.
pub fn end_pairs(d: &Degree) -> Vec<(LatticeVector, LatticeVector)> {
    let groups = d.grouped();
    let mut out = Vec::new();
    for &(a, ka) in &groups {
        for &(b, _) in &groups {
            if a != b || ka >= 2 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Partial state of the depth-first search.
#[derive(Clone)]
struct Prefix {
    remaining: Vec<usize>,
    left: usize,
    w: LatticeVector,
    blocks: Vec<Vec<LatticeVector>>,
    counts: Vec<Vec<usize>>,
    u: Vec<LatticeVector>,
    ws: Vec<LatticeVector>,
    sigma: Vec<i64>,
}

struct Enumerator {
    pool: Vec<LatticeVector>,
    total: Vec<usize>,
    vm: LatticeVector,
}

impl Enumerator {
    fn new(d: &Degree, v1: LatticeVector, vm: LatticeVector) -> Result<(Self, Prefix), ChordError> {
        if d.len() < 3 {
            return Err(ChordError::BaseCase(d.to_string()));
        }
        let mut groups = d.grouped();
        for v in [v1, vm] {
            match groups.iter_mut().find(|(w, k)| *w == v && *k > 0) {
                Some((_, k)) => *k -= 1,
                None => return Err(ChordError::VectorNotInDegree(v)),
            }
        }
        groups.retain(|&(_, k)| k > 0);
        let (pool, total): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
        let left = total.iter().sum();
        let start = Prefix {
            remaining: total.clone(),
            left,
            w: -v1,
            blocks: Vec::new(),
            counts: Vec::new(),
            u: Vec::new(),
            ws: vec![-v1],
            sigma: Vec::new(),
        };
        Ok((Enumerator { pool, total, vm }, start))
    }

    /// Admissible one-block extensions of `prefix`.
    fn extensions(&self, prefix: &Prefix) -> Vec<Prefix> {
        let mut out = Vec::new();
        let n = self.pool.len();
        let mut take = vec![0usize; n];
        loop {
            // odometer over sub-multisets of the remaining pool
            let mut i = 0;
            while i < n {
                if take[i] < prefix.remaining[i] {
                    take[i] += 1;
                    break;
                }
                take[i] = 0;
                i += 1;
            }
            if i == n {
                return out;
            }
            if let Some(next) = self.extend(prefix, &take) {
                out.push(next);
            }
        }
    }

    fn extend(&self, prefix: &Prefix, take: &[usize]) -> Option<Prefix> {
        let size: usize = take.iter().sum();
        let sum: LatticeVector = take
            .iter()
            .zip(&self.pool)
            .map(|(&k, &v)| k as i64 * v)
            .sum();
        let u = -sum;
        if u.is_zero() {
            return None;
        }
        let w_next = prefix.w + u;
        let sigma = omega(prefix.w, w_next);
        if sigma == 0 || (sigma > 0 && size > 1) {
            return None;
        }
        let block: Vec<LatticeVector> = take
            .iter()
            .zip(&self.pool)
            .flat_map(|(&k, &v)| std::iter::repeat_n(v, k))
            .collect();
        if let (Some(&pu), Some(&ps), Some(pb)) =
            (prefix.u.last(), prefix.sigma.last(), prefix.blocks.last())
        {
            let turn = omega(pu, u);
            if (ps.signum() * sigma.signum() * turn.signum()) < 0 {
                return None;
            }
            if turn == 0 && block.as_slice().cmp(pb.as_slice()) == Ordering::Less {
                return None;
            }
        }
        let mut next = prefix.clone();
        for (r, &k) in next.remaining.iter_mut().zip(take) {
            *r -= k;
        }
        next.left -= size;
        next.w = w_next;
        next.blocks.push(block);
        next.counts.push(take.to_vec());
        next.u.push(u);
        next.ws.push(w_next);
        next.sigma.push(sigma);
        Some(next)
    }

    fn dfs(&self, prefix: Prefix, visit: &mut dyn FnMut(ChordDecomposition)) {
        if prefix.left == 0 {
            visit(self.finish(prefix));
            return;
        }
        for next in self.extensions(&prefix) {
            self.dfs(next, visit);
        }
    }

    fn finish(&self, prefix: Prefix) -> ChordDecomposition {
        assert_eq!(prefix.w, self.vm, "chord slopes must telescope to vm");
        let multiplicity = self.label_multiplicity(&prefix);
        ChordDecomposition {
            blocks: prefix.blocks,
            u: prefix.u,
            w: prefix.ws,
            sigma: prefix.sigma,
            multiplicity,
        }
    }

    /// Labeled realizations of the block sequence, divided by the
    /// permutations of identical blocks inside each colinear run.
    fn label_multiplicity(&self, prefix: &Prefix) -> BigInt {
        let mut numer = BigInt::one();
        for &t in &self.total {
            numer *= factorial(t);
        }
        let mut denom = BigInt::one();
        for c in prefix.counts.iter().flatten() {
            denom *= factorial(*c);
        }
        let mut start = 0;
        let p = prefix.blocks.len();
        while start < p {
            let mut end = start + 1;
            while end < p && prefix.u[end - 1].is_colinear(prefix.u[end]) {
                end += 1;
            }
            // canonical order makes identical blocks adjacent in a run
            let mut i = start;
            while i < end {
                let mut j = i + 1;
                while j < end && prefix.blocks[j] == prefix.blocks[i] {
                    j += 1;
                }
                denom *= factorial(j - i);
                i = j;
            }
            start = end;
        }
        debug_assert!((&numer % &denom) == BigInt::from(0));
        numer / denom
    }
}

fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Visits one representative of every reordering class of admissible
/// decompositions, depth first with incremental pruning.
pub fn for_each_decomposition(
    d: &Degree,
    v1: LatticeVector,
    vm: LatticeVector,
    mut visit: impl FnMut(ChordDecomposition),
) -> Result<(), ChordError> {
    let (en, start) = Enumerator::new(d, v1, vm)?;
    en.dfs(start, &mut visit);
    Ok(())
}

pub fn enumerate_decompositions(
    d: &Degree,
    v1: LatticeVector,
    vm: LatticeVector,
) -> Result<Vec<ChordDecomposition>, ChordError> {
    let mut out = Vec::new();
    for_each_decomposition(d, v1, vm, |dec| out.push(dec))?;
    Ok(out)
}

#[derive(Clone, Copy)]
pub struct InvariantOptions<'a> {
    /// Ends for the top-level chord; sub-degrees always use [`default_ends`].
    pub ends: Option<(LatticeVector, LatticeVector)>,
    pub cache: &'a dyn MemoStore,
    /// Fan the first block choice out over the rayon pool.
    pub parallel: bool,
}

impl<'a> InvariantOptions<'a> {
    pub fn new(cache: &'a dyn MemoStore) -> Self {
        InvariantOptions {
            ends: None,
            cache,
            parallel: true,
        }
    }

    pub fn with_ends(mut self, v1: LatticeVector, vm: LatticeVector) -> Self {
        self.ends = Some((v1, vm));
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

/// The refined tropical boundary invariant of `d`.
pub fn refined_invariant(
    d: &Degree,
    opts: &InvariantOptions<'_>,
) -> Result<RefinedPolynomial, ChordError> {
    if d.len() == 2 {
        return Ok(RefinedPolynomial::one());
    }
    let key = d.canonical_key();
    if opts.ends.is_none() {
        if let Some(hit) = opts.cache.get(&key) {
            return Ok(hit);
        }
    }
    let (v1, vm) = opts.ends.unwrap_or_else(|| default_ends(d));
    let (en, start) = Enumerator::new(d, v1, vm)?;
    let sub_opts = InvariantOptions {
        ends: None,
        ..*opts
    };

    let branch = |prefix: Prefix| -> RefinedPolynomial {
        let mut acc = RefinedPolynomial::zero();
        en.dfs(prefix, &mut |dec| {
            let mut term = dec.vertex_weight();
            for sub in dec.sub_degrees() {
                assert!(sub.len() < d.len());
                let n = refined_invariant(&sub, &sub_opts)
                    .expect("sub-degrees of an admissible decomposition are valid");
                term = &term * &n;
            }
            acc += &term;
        });
        acc
    };

    let result = if opts.parallel {
        en.extensions(&start).into_par_iter().map(branch).sum()
    } else {
        branch(start)
    };
    opts.cache.insert(key, result.clone());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{MemoCache, NoCache};

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn poly(terms: &[(i64, i64)]) -> RefinedPolynomial {
        RefinedPolynomial::from_terms(terms.iter().copied())
    }

    #[test]
    fn sub_degree_examples() {
        assert_eq!(
            sub_degree(&[v(0, -1)]).unwrap(),
            Degree::new(vec![v(0, -1), v(0, 1)]).unwrap()
        );
        assert_eq!(
            sub_degree(&[v(-1, 0), v(0, -1)]).unwrap(),
            Degree::new(vec![v(-1, 0), v(0, -1), v(1, 1)]).unwrap()
        );
        assert_eq!(
            sub_degree(&[v(1, 0), v(-1, 0)]),
            Err(ChordError::DegenerateBlock)
        );
    }

    #[test]
    fn line_has_single_decomposition() {
        let line = Degree::triangle(1).unwrap();
        let decs = enumerate_decompositions(&line, v(-1, 0), v(1, 1)).unwrap();
        assert_eq!(decs.len(), 1);
        let dec = &decs[0];
        assert_eq!(dec.blocks, vec![vec![v(0, -1)]]);
        assert_eq!(dec.u, vec![v(0, 1)]);
        assert_eq!(dec.w, vec![v(1, 0), v(1, 1)]);
        assert_eq!(dec.sigma, vec![1]);
        assert_eq!(dec.multiplicity, BigInt::one());
    }

    #[test]
    fn conic_with_double_contact() {
        let d = Degree::cp2(2, &[2]).unwrap();
        let total: RefinedPolynomial = enumerate_decompositions(&d, v(-1, 0), v(1, 1))
            .unwrap()
            .into_iter()
            .map(|dec| {
                let subs: RefinedPolynomial = dec
                    .sub_degrees()
                    .iter()
                    .map(|s| refined_invariant(s, &InvariantOptions::new(&NoCache)).unwrap())
                    .product();
                &dec.vertex_weight() * &subs
            })
            .sum();
        assert_eq!(total, poly(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn base_case_is_not_enumerated() {
        let seg = Degree::new(vec![v(1, 0), v(-1, 0)]).unwrap();
        assert!(matches!(
            enumerate_decompositions(&seg, v(1, 0), v(-1, 0)),
            Err(ChordError::BaseCase(_))
        ));
        assert_eq!(
            refined_invariant(&seg, &InvariantOptions::new(&NoCache)).unwrap(),
            RefinedPolynomial::one()
        );
    }

    #[test]
    fn missing_end_is_rejected() {
        let line = Degree::triangle(1).unwrap();
        assert_eq!(
            enumerate_decompositions(&line, v(-1, 0), v(-1, 0)),
            Err(ChordError::VectorNotInDegree(v(-1, 0)))
        );
        assert_eq!(
            enumerate_decompositions(&line, v(2, 0), v(1, 1)),
            Err(ChordError::VectorNotInDegree(v(2, 0)))
        );
    }

    #[test]
    fn canonical_representative_examples() {
        let s = vec![v(0, -1)];
        assert!(canonical_representative(&[s.clone(), s.clone()]));
        // u = (0,1) and (0,2): colinear, so order matters
        let a = vec![v(0, -1)];
        let b = vec![v(0, -2)];
        assert!(b < a);
        assert!(!canonical_representative(&[a.clone(), b.clone()]));
        assert!(canonical_representative(&[b.clone(), a.clone()]));
        // non-colinear u: any order
        let c = vec![v(-1, 0)];
        assert!(canonical_representative(&[a.clone(), c.clone()]));
        assert!(canonical_representative(&[c, a]));
    }

    #[test]
    fn enumerated_decompositions_are_admissible_and_canonical() {
        for d in [
            Degree::triangle(3).unwrap(),
            Degree::cp2(3, &[2, 1]).unwrap(),
            Degree::rectangle(2, 2).unwrap(),
        ] {
            for (v1, vm) in end_pairs(&d) {
                for dec in enumerate_decompositions(&d, v1, vm).unwrap() {
                    assert_eq!(*dec.w.last().unwrap(), vm);
                    assert!(canonical_representative(&dec.blocks));
                    let mut union: Vec<_> = dec.blocks.concat();
                    union.push(v1);
                    union.push(vm);
                    assert_eq!(Degree::new(union).unwrap(), d);
                    for i in 0..dec.len() {
                        assert_ne!(dec.sigma[i], 0);
                        assert!(dec.sigma[i] < 0 || dec.blocks[i].len() == 1);
                        assert_eq!(dec.sigma[i], omega(dec.w[i], dec.w[i + 1]));
                        if i > 0 {
                            let pair =
                                omega(dec.sigma[i - 1] * dec.u[i - 1], dec.sigma[i] * dec.u[i]);
                            assert!(pair >= 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn default_ends_prefers_fewest_distinct() {
        let d = Degree::cp2(3, &[2, 1]).unwrap();
        // removing (0,-2) and (0,-1) leaves only two distinct vectors
        assert_eq!(default_ends(&d), (v(0, -2), v(0, -1)));
        let line = Degree::triangle(1).unwrap();
        assert_eq!(default_ends(&line), (v(-1, 0), v(0, -1)));
    }

    #[test]
    fn small_plane_values() {
        let cache = MemoCache::new();
        let opts = InvariantOptions::new(&cache);
        let n = |d: i64, l: &[i64]| refined_invariant(&Degree::cp2(d, l).unwrap(), &opts).unwrap();
        assert_eq!(n(1, &[1]), RefinedPolynomial::one());
        assert_eq!(n(2, &[1, 1]), RefinedPolynomial::one());
        assert_eq!(n(2, &[2]), poly(&[(1, 1), (-1, 1)]));
        assert_eq!(n(3, &[1, 1, 1]), poly(&[(2, 1), (0, 7), (-2, 1)]));
    }

    #[test]
    fn cache_and_parallelism_are_transparent() {
        let d = Degree::triangle(4).unwrap();
        let cache = MemoCache::new();
        let a = refined_invariant(&d, &InvariantOptions::new(&cache)).unwrap();
        let b = refined_invariant(&d, &InvariantOptions::new(&NoCache).sequential()).unwrap();
        let c = refined_invariant(&d, &InvariantOptions::new(&cache)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(cache.len() > 1);
    }
}
