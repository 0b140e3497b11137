//! Borel–Moore homology with sign-twisted coefficients `±Q` of unordered
//! configuration spaces `B(Z, k)`, for `Z` stratified by affine cells.
//!
//! A configuration contributes only when its points occupy distinct cells,
//! so `B(Z, k)` has one class per `k`-element set of cells `S`: the class
//! `Q(|S|)` in degree `2|S|`, where `|S|` is the total dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::GradedTate;

/// A space given by the complex dimensions of its affine cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStratification {
    pub cells: Vec<u32>,
}

impl CellStratification {
    pub fn new(cells: Vec<u32>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidArgument("a stratification needs at least one cell".into()));
        }
        Ok(Self { cells })
    }

    /// `F_n = (A^2 ∪ A^1) ∪ (A^1 ∪ A^0)`, for every `n`.
    pub fn hirzebruch() -> Self {
        Self { cells: vec![2, 1, 1, 0] }
    }

    /// `P^m = A^m ∪ ... ∪ A^0`.
    pub fn projective(m: u32) -> Self {
        Self { cells: (0..=m).rev().collect() }
    }
}

/// `H̄_•(B(Z, k); ±Q)` for the cell decomposition `cells`.
pub fn twisted_bm_config(cells: &CellStratification, k: usize) -> GradedTate {
    // by_size[j][s] = number of j-element subsets with total dimension s
    let mut by_size: Vec<Vec<u64>> = vec![vec![1]];
    for &m in &cells.cells {
        let m = m as usize;
        let mut next = by_size.clone();
        next.push(Vec::new());
        for (j, row) in by_size.iter().enumerate() {
            let target = &mut next[j + 1];
            if target.len() < row.len() + m {
                target.resize(row.len() + m, 0);
            }
            for (s, &c) in row.iter().enumerate() {
                target[s + m] += c;
            }
        }
        by_size = next;
    }
    let mut out = GradedTate::zero();
    if let Some(row) = by_size.get(k) {
        for (s, &c) in row.iter().enumerate() {
            out.add(2 * s as i64, s as i64, c);
        }
    }
    out
}

/// `H̄_•(B(P^(m-1), k); ±Q)`, which is `H_{•-k(k-1)}` of the Grassmannian
/// `G(k, C^m)` with the matching weights.
pub fn grassmannian_bm(k: usize, m: usize) -> GradedTate {
    // Gaussian binomial [m, k]_q by the q-Pascal rule
    // [m, k] = [m-1, k-1] + q^k [m-1, k]
    let mut table: Vec<Vec<Vec<u64>>> = vec![vec![vec![1]]];
    for row in 1..=m {
        let mut cur = vec![vec![1u64]];
        for j in 1..=row.min(k) {
            let mut coeffs = table[row - 1][j - 1].clone();
            if let Some(prev) = table[row - 1].get(j) {
                if coeffs.len() < prev.len() + j {
                    coeffs.resize(prev.len() + j, 0);
                }
                for (e, &c) in prev.iter().enumerate() {
                    coeffs[e + j] += c;
                }
            }
            cur.push(coeffs);
        }
        table.push(cur);
    }
    let mut out = GradedTate::zero();
    let Some(poly) = table[m].get(k) else {
        return out;
    };
    let shift = (k * k.saturating_sub(1)) as i64;
    for (j, &c) in poly.iter().enumerate() {
        out.add(shift + 2 * j as i64, shift / 2 + j as i64, c);
    }
    out
}
