//! Dense integer matrices and their exact rank over `Q` or a prime field.
//!
//! Every matrix built by this crate has integer entries, so one
//! representation serves both fields: over `Q` the rank comes from
//! fraction-free (Bareiss) elimination on the integers, over `F_p` from plain
//! Gaussian elimination on the reductions mod `p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `2^31 - 1`, the default prime for randomized rank checks.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// The field a rank is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn default_prime() -> Self {
        Field::Prime(DEFAULT_PRIME)
    }

    /// Builds `F_p`, rejecting composites and primes of 2^32 or more.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a prime below 2^32"
            )));
        }
        Ok(Field::Prime(p))
    }

    /// Characteristic, with 0 for `Q`.
    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Dense row-major matrix with integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().map(Into::into).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Appends the rows of `other`, which must have the same width.
    pub fn stack(&mut self, other: &ExactMatrix) -> Result<()> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::InvalidArgument(format!(
                "cannot stack {}-column rows onto a {}-column matrix",
                other.cols, self.cols
            )));
        }
        if self.rows == 0 {
            self.cols = other.cols;
        }
        self.rows += other.rows;
        self.data.extend_from_slice(&other.data);
        Ok(())
    }

    pub fn rank(&self, field: Field) -> usize {
        match field {
            Field::Rationals => self.rank_rational(),
            Field::Prime(p) => self.rank_mod(p),
        }
    }

    pub fn nullity(&self, field: Field) -> usize {
        self.cols - self.rank(field)
    }

    /// Rank over `Q` by Bareiss elimination; all divisions are exact.
    pub fn rank_rational(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| self.row(r).to_vec()).collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            let (head, tail) = a.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                let factor = row[col].clone();
                for j in col + 1..cols {
                    let num = &row[j] * &pivot_row[col] - &factor * &pivot_row[j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss step left a remainder");
                    row[j] = q;
                }
                row[col] = BigInt::zero();
            }
            prev = pivot_row[col].clone();
            rank += 1;
        }
        rank
    }

    /// Rank over `F_p` of the reduction mod `p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        let modulus = BigInt::from(p);
        let mut a: Vec<Vec<u64>> = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| {
                        x.mod_floor(&modulus)
                            .to_u64()
                            .expect("residue fits in u64")
                    })
                    .collect()
            })
            .collect();
        rank_mod_p(&mut a, p)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// In-place row reduction over `F_p`; entries must already be reduced.
pub(crate) fn rank_mod_p(a: &mut [Vec<u64>], p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = inv_mod(a[rank][col], p);
        for j in col..cols {
            a[rank][j] = mul_mod(a[rank][j], inv, p);
        }
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let sub = mul_mod(factor, pivot_row[j], p);
                row[j] = (row[j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    /// Rank over Q by textbook elimination on rationals; independent of the
    /// Bareiss path.
    fn rational_rank_oracle(rows: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[rank][col];
                    for j in 0..cols {
                        let t = &f * &a[rank][j];
                        a[r][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(ExactMatrix::identity(3).rank(Field::Rationals), 3);
        assert_eq!(ExactMatrix::identity(3).rank(Field::default_prime()), 3);
        assert_eq!(ExactMatrix::zeros(3, 4).rank(Field::Rationals), 0);
        assert_eq!(ExactMatrix::zeros(0, 5).rank(Field::Rationals), 0);
        assert_eq!(ExactMatrix::zeros(0, 5).nullity(Field::Rationals), 5);
    }

    #[test]
    fn prime_field_can_drop_rank() {
        let m = ExactMatrix::from_rows(&[vec![1i64, 1], vec![1, 8]]).unwrap();
        assert_eq!(m.rank(Field::Rationals), 2);
        assert_eq!(m.rank(Field::Prime(7)), 1);
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(Field::prime(15).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(1 << 33).is_err());
        assert_eq!(Field::prime(DEFAULT_PRIME).unwrap(), Field::default_prime());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(ExactMatrix::from_rows(&[vec![1i64], vec![1, 2]]).is_err());
    }

    proptest! {
        #[test]
        fn bareiss_matches_rational_oracle(
            rows in prop::collection::vec(prop::collection::vec(-4i64..5, 5), 0..6)
        ) {
            let m = ExactMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(m.rank_rational(), rational_rank_oracle(&rows));
        }

        #[test]
        fn prime_rank_never_exceeds_rational(
            rows in prop::collection::vec(prop::collection::vec(-30i64..30, 4), 1..6),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11])
        ) {
            let m = ExactMatrix::from_rows(&rows).unwrap();
            prop_assert!(m.rank_mod(p) <= m.rank_rational());
        }
    }
}
