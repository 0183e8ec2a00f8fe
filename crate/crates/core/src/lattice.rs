//! Lattice vectors in `N = Z^2`, the symplectic form, and degrees.
//!
//! A [`Degree`] is a multiset of nonzero lattice vectors summing to zero. It is
//! stored as a sorted list, so two degrees are equal exactly when they are
//! equal as multisets, and [`Degree::canonical_key`] is a plain serialization
//! of that sorted list.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

/// Upper bound on `Σ (|x| + |y|)` over a degree.
///
/// Every partial sum of vectors then has coordinates below `2^30`, and the
/// determinant of two such sums stays below `2^61`.
pub const COORDINATE_BUDGET: i64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("vectors sum to {0}, not (0,0)")]
    NonZeroSum(LatticeVector),
    #[error("degree contains the zero vector")]
    ZeroVector,
    #[error("a degree needs at least 2 vectors, got {0}")]
    TooSmall(usize),
    #[error("coordinates too large: total magnitude exceeds {COORDINATE_BUDGET}")]
    TooLarge,
    #[error("bad partition {parts:?} of {d}")]
    BadPartition { d: i64, parts: Vec<i64> },
}

/// An integer vector `x·e1 + y·e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVector { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// True when `self` and `other` span at most a line.
    pub fn is_colinear(self, other: LatticeVector) -> bool {
        omega(self, other) == 0
    }

    fn magnitude(self) -> i64 {
        self.x
            .saturating_abs()
            .saturating_add(self.y.saturating_abs())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for LatticeVector {
    fn add_assign(&mut self, rhs: LatticeVector) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.x, -self.y)
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self * v.x, self * v.y)
    }
}

impl std::iter::Sum for LatticeVector {
    fn sum<I: Iterator<Item = LatticeVector>>(iter: I) -> LatticeVector {
        iter.fold(LatticeVector::ZERO, Add::add)
    }
}

impl<'a> std::iter::Sum<&'a LatticeVector> for LatticeVector {
    fn sum<I: Iterator<Item = &'a LatticeVector>>(iter: I) -> LatticeVector {
        iter.copied().sum()
    }
}

/// The volume form `ω(u, v) = u.x·v.y − u.y·v.x`.
pub fn omega(u: LatticeVector, v: LatticeVector) -> i64 {
    u.x * v.y - u.y * v.x
}

/// A multiset of nonzero lattice vectors with zero sum, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree {
    vectors: Vec<LatticeVector>,
}

impl Degree {
    /// Validates `vectors` and stores them in lexicographic `(x, y)` order.
    pub fn new(mut vectors: Vec<LatticeVector>) -> Result<Self, DegreeError> {
        if vectors.len() < 2 {
            return Err(DegreeError::TooSmall(vectors.len()));
        }
        if vectors.iter().any(|v| v.is_zero()) {
            return Err(DegreeError::ZeroVector);
        }
        let total = vectors
            .iter()
            .try_fold(0i64, |acc, v| acc.checked_add(v.magnitude()))
            .filter(|&t| t <= COORDINATE_BUDGET);
        if total.is_none() {
            return Err(DegreeError::TooLarge);
        }
        let sum: LatticeVector = vectors.iter().sum();
        if !sum.is_zero() {
            return Err(DegreeError::NonZeroSum(sum));
        }
        vectors.sort_unstable();
        Ok(Degree { vectors })
    }

    /// The plane degree `{(-1,0)^d, (1,1)^d}` plus one `(0,-λ_j)` per part.
    ///
    /// Parts may be given in any order; they are sorted nonincreasingly.
    pub fn cp2(d: i64, partition: &[i64]) -> Result<Self, DegreeError> {
        let bad = || DegreeError::BadPartition {
            d,
            parts: partition.to_vec(),
        };
        if d <= 0 || partition.iter().any(|&p| p <= 0) {
            return Err(bad());
        }
        if partition.iter().try_fold(0i64, |a, &p| a.checked_add(p)) != Some(d) {
            return Err(bad());
        }
        let d_us = usize::try_from(d).map_err(|_| bad())?;
        let mut vectors = Vec::with_capacity(2 * d_us + partition.len());
        vectors.extend(std::iter::repeat_n(LatticeVector::new(-1, 0), d_us));
        vectors.extend(std::iter::repeat_n(LatticeVector::new(1, 1), d_us));
        vectors.extend(partition.iter().map(|&p| LatticeVector::new(0, -p)));
        Degree::new(vectors)
    }

    /// The degree `{(-1,0)^d, (0,-1)^d, (1,1)^d}` of plane curves of degree `d`.
    pub fn triangle(d: i64) -> Result<Self, DegreeError> {
        let ones = vec![1; usize::try_from(d.max(0)).unwrap_or(0)];
        Degree::cp2(d, &ones)
    }

    /// The rectangle degree `{(-1,0)^b, (1,0)^b, (0,-1)^a, (0,1)^a}`.
    pub fn rectangle(a: i64, b: i64) -> Result<Self, DegreeError> {
        let (a, b) = (
            usize::try_from(a).map_err(|_| DegreeError::TooSmall(0))?,
            usize::try_from(b).map_err(|_| DegreeError::TooSmall(0))?,
        );
        let mut vectors = Vec::with_capacity(2 * (a + b));
        for (v, k) in [
            (LatticeVector::new(-1, 0), b),
            (LatticeVector::new(1, 0), b),
            (LatticeVector::new(0, -1), a),
            (LatticeVector::new(0, 1), a),
        ] {
            vectors.extend(std::iter::repeat_n(v, k));
        }
        Degree::new(vectors)
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    /// Number of vectors, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Always false: a degree has at least two vectors.
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn multiplicity(&self, v: LatticeVector) -> usize {
        self.vectors.iter().filter(|&&w| w == v).count()
    }

    /// Distinct vectors with their multiplicities, in sorted order.
    pub fn grouped(&self) -> Vec<(LatticeVector, usize)> {
        let mut out: Vec<(LatticeVector, usize)> = Vec::new();
        for &v in &self.vectors {
            match out.last_mut() {
                Some((w, k)) if *w == v => *k += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// The memoization key: sorted vectors rendered `(x,y)` and joined by `;`.
    pub fn canonical_key(&self) -> String {
        let mut key = String::with_capacity(self.vectors.len() * 6);
        for (i, v) in self.vectors.iter().enumerate() {
            if i > 0 {
                key.push(';');
            }
            key.push_str(&v.to_string());
        }
        key
    }
}

/// Vector-list form, e.g. `(-1,0)^2,(0,-2),(1,1)^2`.
impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, k)) in self.grouped().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(v(1, 0), v(0, 1)), 1);
        assert_eq!(omega(v(2, 1), v(2, 1)), 0);
        assert_eq!(omega(v(-1, 0), v(1, 1)), -1);
    }

    #[test]
    fn make_degree_examples() {
        let line = Degree::new(vec![v(-1, 0), v(0, -1), v(1, 1)]).unwrap();
        assert_eq!(line.len(), 3);
        assert_eq!(
            Degree::new(vec![v(-1, 0), v(1, 1)]),
            Err(DegreeError::NonZeroSum(v(0, 1)))
        );
        assert_eq!(Degree::new(vec![v(1, 0), v(-1, 0)]).unwrap().len(), 2);
        assert_eq!(
            Degree::new(vec![v(0, 0), v(0, 0)]),
            Err(DegreeError::ZeroVector)
        );
        assert_eq!(Degree::new(vec![]), Err(DegreeError::TooSmall(0)));
        assert_eq!(
            Degree::new(vec![v(1 << 40, 0), v(-(1 << 40), 0)]),
            Err(DegreeError::TooLarge)
        );
    }

    #[test]
    fn canonical_key_examples() {
        let a = Degree::new(vec![v(1, 1), v(-1, 0), v(0, -1)]).unwrap();
        let b = Degree::new(vec![v(0, -1), v(1, 1), v(-1, 0)]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(a.canonical_key(), "(-1,0);(0,-1);(1,1)");

        let c = Degree::new(vec![v(0, -2), v(-1, 0), v(-1, 0), v(1, 1), v(1, 1)]).unwrap();
        let d = Degree::new(vec![
            v(0, -1),
            v(0, -1),
            v(-1, 0),
            v(-1, 0),
            v(1, 1),
            v(1, 1),
        ])
        .unwrap();
        assert_ne!(c.canonical_key(), d.canonical_key());
    }

    #[test]
    fn cp2_examples() {
        let d3 = Degree::cp2(3, &[1, 1, 1]).unwrap();
        assert_eq!(d3.to_string(), "(-1,0)^3,(0,-1)^3,(1,1)^3");
        assert_eq!(d3, Degree::triangle(3).unwrap());
        let d2 = Degree::cp2(2, &[2]).unwrap();
        assert_eq!(d2.to_string(), "(-1,0)^2,(0,-2),(1,1)^2");
        // unsorted partitions are accepted
        assert!(matches!(
            Degree::cp2(2, &[1, 2]),
            Err(DegreeError::BadPartition { .. })
        ));
        assert_eq!(
            Degree::cp2(3, &[1, 2]).unwrap(),
            Degree::cp2(3, &[2, 1]).unwrap()
        );
        assert!(matches!(
            Degree::cp2(3, &[2, 0, 1]),
            Err(DegreeError::BadPartition { .. })
        ));
    }

    #[test]
    fn rectangle_is_symmetric() {
        let r = Degree::rectangle(1, 2).unwrap();
        assert_eq!(r.to_string(), "(-1,0)^2,(0,-1),(0,1),(1,0)^2");
    }

    #[test]
    fn key_is_collision_free_on_small_corpus() {
        use std::collections::HashMap;
        // all zero-sum multisets of size 3..=4 drawn from a small box
        let pool: Vec<LatticeVector> = (-4..=4)
            .flat_map(|x| (-4..=4).map(move |y| v(x, y)))
            .filter(|w| !w.is_zero())
            .collect();
        let mut seen: HashMap<String, Degree> = HashMap::new();
        let n = pool.len();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let three = vec![pool[i], pool[j], pool[k]];
                    if let Ok(d) = Degree::new(three) {
                        let prev = seen.insert(d.canonical_key(), d.clone());
                        assert!(prev.is_none_or(|p| p == d));
                    }
                    for l in k..n {
                        let four = vec![pool[i], pool[j], pool[k], pool[l]];
                        if let Ok(d) = Degree::new(four) {
                            let prev = seen.insert(d.canonical_key(), d.clone());
                            assert!(prev.is_none_or(|p| p == d));
                        }
                    }
                }
            }
        }
        // pairs {v,-v} too
        for &w in &pool {
            let d = Degree::new(vec![w, -w]).unwrap();
            let prev = seen.insert(d.canonical_key(), d.clone());
            assert!(prev.is_none_or(|p| p == d));
        }
        assert!(seen.len() >= 10_000, "corpus too small: {}", seen.len());
    }

    fn small_vec() -> impl Strategy<Value = LatticeVector> {
        (-50i64..50, -50i64..50).prop_map(|(x, y)| v(x, y))
    }

    proptest! {
        #[test]
        fn omega_bilinear_antisymmetric(
            u in small_vec(), w in small_vec(), z in small_vec(),
            a in -20i64..20, b in -20i64..20,
        ) {
            prop_assert_eq!(omega(a * u + b * w, z), a * omega(u, z) + b * omega(w, z));
            prop_assert_eq!(omega(u, w), -omega(w, u));
        }

        #[test]
        fn degree_ignores_input_order(
            mut vs in prop::collection::vec(small_vec().prop_filter("nonzero", |w| !w.is_zero()), 1..8),
            seed in any::<u64>(),
        ) {
            let close: LatticeVector = -vs.iter().sum::<LatticeVector>();
            prop_assume!(!close.is_zero());
            vs.push(close);
            let original = Degree::new(vs.clone()).unwrap();
            // deterministic shuffle
            let mut s = seed;
            for i in (1..vs.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                vs.swap(i, (s >> 33) as usize % (i + 1));
            }
            let shuffled = Degree::new(vs).unwrap();
            prop_assert_eq!(original.canonical_key(), shuffled.canonical_key());
            prop_assert_eq!(original, shuffled);
        }
    }
}
