//! Exact linear solves over the integers.
//!
//! Forward elimination is fraction-free (Bareiss): every intermediate entry is
//! a minor of the augmented matrix, so each division is exact and no gcds are
//! taken. Back substitution then runs over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The unique solution of a nonsingular square system.
    Unique(Vec<BigRational>),
    /// Singular matrix; `consistent` tells whether the right-hand side lies
    /// in the column span.
    Singular { consistent: bool },
}

/// Solves `a · x = b` for a square integer matrix `a`.
pub fn solve_integer_system(a: &[Vec<BigInt>], b: &[BigInt]) -> SolveOutcome {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length");
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut prev_pivot = BigInt::one();
    let mut rank = 0usize;
    let mut pivot_cols = Vec::with_capacity(n);
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..n {
            for c in col + 1..=n {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v.div_floor(&prev_pivot);
            }
            m[r][col] = BigInt::zero();
        }
        prev_pivot = m[rank][col].clone();
        pivot_cols.push(col);
        rank += 1;
    }

    if rank < n {
        let consistent = (rank..n).all(|r| m[r][n].is_zero());
        return SolveOutcome::Singular { consistent };
    }

    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    SolveOutcome::Unique(x)
}
