//! Finitely supported bigraded vector spaces whose pieces are sums of Tate
//! twists.
//!
//! A [`GradedTate`] records multiplicities of `Q(k)` in each degree. One type
//! serves both sides of Alexander duality: a cohomology class `Q(-k)` in
//! degree `i` is stored as `(i, -k)`, a Borel–Moore class `Q(k)` in degree
//! `j` as `(j, k)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(degree, weight, multiplicity)` record of the canonical serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateClass {
    pub degree: i64,
    pub weight: i64,
    pub mult: u64,
}

/// Multiset of `(degree, weight)` pairs with positive multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedTate {
    entries: BTreeMap<(i64, i64), u64>,
}

impl GradedTate {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Q` in degree 0.
    pub fn unit() -> Self {
        Self::single(0, 0)
    }

    pub fn single(degree: i64, weight: i64) -> Self {
        let mut g = Self::zero();
        g.add(degree, weight, 1);
        g
    }

    /// Builds a space from `(degree, weight, multiplicity)` triples; repeated
    /// keys accumulate and zero multiplicities are dropped.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64, u64)>,
    {
        let mut g = Self::zero();
        for (d, w, m) in entries {
            g.add(d, w, m);
        }
        g
    }

    /// Shorthand for spaces where every class has multiplicity one.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        Self::from_entries(pairs.into_iter().map(|(d, w)| (d, w, 1)))
    }

    pub fn add(&mut self, degree: i64, weight: i64, mult: u64) {
        if mult > 0 {
            *self.entries.entry((degree, weight)).or_insert(0) += mult;
        }
    }

    pub fn get(&self, degree: i64, weight: i64) -> u64 {
        self.entries.get(&(degree, weight)).copied().unwrap_or(0)
    }

    /// Total multiplicity in `degree`, summed over weights.
    pub fn degree_dim(&self, degree: i64) -> u64 {
        self.entries
            .range((degree, i64::MIN)..=(degree, i64::MAX))
            .map(|(_, &m)| m)
            .sum()
    }

    /// The weight pieces present in `degree`, ascending by weight.
    pub fn in_degree(&self, degree: i64) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.entries
            .range((degree, i64::MIN)..=(degree, i64::MAX))
            .map(|(&(_, w), &m)| (w, m))
    }

    /// Entries in ascending `(degree, weight)` order.
    pub fn iter(&self) -> impl Iterator<Item = TateClass> + '_ {
        self.entries.iter().map(|(&(degree, weight), &mult)| TateClass {
            degree,
            weight,
            mult,
        })
    }

    pub fn classes(&self) -> Vec<TateClass> {
        self.iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn total_dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries.keys().next().map(|&(d, _)| d)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries.keys().next_back().map(|&(d, _)| d)
    }

    /// `Σ (-1)^degree · mult`.
    pub fn euler_characteristic(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&(d, _), &m)| if d.rem_euclid(2) == 0 { m as i64 } else { -(m as i64) })
            .sum()
    }

    /// Keeps only entries with `degree <= max_degree`.
    pub fn truncate(&self, max_degree: i64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(&(d, _), _)| d <= max_degree)
                .map(|(&k, &m)| (k, m))
                .collect(),
        }
    }

    /// Keeps only entries with `degree >= min_degree`.
    pub fn truncate_below(&self, min_degree: i64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(&(d, _), _)| d >= min_degree)
                .map(|(&k, &m)| (k, m))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(d, w), &m) in &other.entries {
            out.add(d, w, m);
        }
        out
    }

    /// Convolution of the two supports.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(d1, w1), &m1) in &self.entries {
            for (&(d2, w2), &m2) in &other.entries {
                out.add(d1 + d2, w1 + w2, m1 * m2);
            }
        }
        out
    }

    pub fn tensor_all<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a GradedTate>,
    {
        factors
            .into_iter()
            .fold(Self::unit(), |acc, f| acc.tensor(f))
    }

    /// Shifts every entry by `(d_degree, d_weight)`.
    pub fn twist_shift(&self, d_degree: i64, d_weight: i64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(&(d, w), &m)| ((d + d_degree, w + d_weight), m))
                .collect(),
        }
    }

    /// Exact quotient `q` with `q ⊗ fiber = self`.
    pub fn divide(&self, fiber: &Self) -> Result<Self> {
        let top = match self.max_degree() {
            Some(t) => t,
            None => return Ok(Self::zero()),
        };
        let q = self.divide_within(fiber, top)?;
        if &q.tensor(fiber) != self {
            return Err(Error::NotDivisible(format!(
                "remainder left above degree {top} when dividing by {fiber}"
            )));
        }
        Ok(q)
    }

    /// Quotient valid through `max_degree`: the unique `q`, supported in
    /// degrees `<= max_degree`, with `(q ⊗ fiber)` and `self` agreeing in all
    /// degrees `<= max_degree`.
    ///
    /// The fiber's degree-0 part must be exactly `Q` and it may not have
    /// classes in negative degree.
    pub fn divide_within(&self, fiber: &Self, max_degree: i64) -> Result<Self> {
        let degree_zero: Vec<(i64, u64)> = fiber.in_degree(0).collect();
        if degree_zero != [(0, 1)] || fiber.min_degree() != Some(0) {
            return Err(Error::InvalidArgument(format!(
                "fiber {fiber} must start with Q in degree 0"
            )));
        }
        let mut residual: BTreeMap<(i64, i64), i128> = self
            .truncate(max_degree)
            .entries
            .into_iter()
            .map(|(k, m)| (k, m as i128))
            .collect();
        let mut quotient = Self::zero();
        while let Some((&(d, w), &m)) = residual.iter().next() {
            if m < 0 {
                return Err(Error::NotDivisible(format!(
                    "class ({d}, {w}) would need multiplicity {m} after dividing by {fiber}"
                )));
            }
            quotient.add(d, w, m as u64);
            for (&(fd, fw), &fm) in &fiber.entries {
                if d + fd > max_degree {
                    continue;
                }
                let key = (d + fd, w + fw);
                let slot = residual.entry(key).or_insert(0);
                *slot -= m * fm as i128;
                if *slot == 0 {
                    residual.remove(&key);
                }
            }
        }
        Ok(quotient)
    }
}

fn fmt_tate(f: &mut fmt::Formatter<'_>, weight: i64, mult: u64) -> fmt::Result {
    if mult != 1 {
        write!(f, "{mult}")?;
    }
    if weight == 0 {
        write!(f, "Q")
    } else {
        write!(f, "Q({weight})")
    }
}

impl fmt::Display for GradedTate {
    /// `deg 4: Q(2); deg 6: 2Q(3)`; the zero space prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let mut current: Option<i64> = None;
        for (&(d, w), &m) in &self.entries {
            if current == Some(d) {
                write!(f, " + ")?;
            } else {
                if current.is_some() {
                    write!(f, "; ")?;
                }
                write!(f, "deg {d}: ")?;
                current = Some(d);
            }
            fmt_tate(f, w, m)?;
        }
        Ok(())
    }
}

impl Serialize for GradedTate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for class in self.iter() {
            seq.serialize_element(&class)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for GradedTate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TateClass>::deserialize(deserializer)?;
        Ok(Self::from_entries(
            records.into_iter().map(|c| (c.degree, c.weight, c.mult)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2() -> GradedTate {
        GradedTate::from_pairs([(0, 0), (1, -1), (3, -2), (4, -3)])
    }

    fn quotient_profile() -> GradedTate {
        GradedTate::from_pairs([(0, 0), (3, -2), (5, -3), (8, -5)])
    }

    #[test]
    fn tensor_unit_and_single_entries() {
        let a = GradedTate::from_entries([(2, -1, 3), (5, 0, 1)]);
        assert_eq!(a.tensor(&GradedTate::unit()), a);
        assert_eq!(
            GradedTate::single(2, -1).tensor(&GradedTate::single(3, -2)),
            GradedTate::single(5, -3)
        );
    }

    #[test]
    fn framed_stratum_tensor() {
        let stratum = GradedTate::from_pairs([(0, 0), (2, -1), (5, -3), (7, -4)]);
        let sl2 = GradedTate::from_pairs([(0, 0), (3, -2)]);
        let expected = GradedTate::from_entries([
            (0, 0, 1),
            (2, -1, 1),
            (3, -2, 1),
            (5, -3, 2),
            (7, -4, 1),
            (8, -5, 1),
            (10, -6, 1),
        ]);
        assert_eq!(stratum.tensor(&sl2), expected);
    }

    #[test]
    fn twist_shift_moves_every_entry() {
        assert_eq!(
            GradedTate::unit().twist_shift(2, -1),
            GradedTate::single(2, -1)
        );
        let a = GradedTate::from_entries([(0, 0, 1), (2, 1, 2), (4, 2, 1)]);
        assert_eq!(a.twist_shift(0, 0), a);
    }

    #[test]
    fn divide_gl2_profile() {
        let total = quotient_profile().tensor(&gl2());
        assert_eq!(total.total_dim(), 16);
        assert_eq!(total.divide(&gl2()).unwrap(), quotient_profile());
    }

    #[test]
    fn divide_rejects_missing_degree_one() {
        let total = GradedTate::from_pairs([(0, 0), (1, -1)]);
        let fiber = GradedTate::from_pairs([(0, 0), (2, -1)]);
        assert!(matches!(
            total.divide(&fiber),
            Err(Error::NotDivisible(_))
        ));
    }

    #[test]
    fn divide_rejects_fiber_without_unit() {
        let fiber = GradedTate::from_pairs([(1, -1)]);
        assert!(matches!(
            GradedTate::unit().divide(&fiber),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn divide_within_ignores_classes_above_window() {
        let total = quotient_profile().tensor(&gl2()).truncate(4);
        let q = total.divide_within(&gl2(), 4).unwrap();
        assert_eq!(q, quotient_profile().truncate(4));
        // the full division sees the truncation as a defect
        assert!(total.divide(&gl2()).is_err());
    }

    #[test]
    fn display_matches_cli_text() {
        let g = GradedTate::from_entries([(4, 2, 1), (6, 3, 2), (8, 4, 1)]);
        assert_eq!(g.to_string(), "deg 4: Q(2); deg 6: 2Q(3); deg 8: Q(4)");
        assert_eq!(GradedTate::zero().to_string(), "0");
        assert_eq!(
            GradedTate::from_pairs([(0, 0), (5, -3), (5, -4)]).to_string(),
            "deg 0: Q; deg 5: Q(-4) + Q(-3)"
        );
    }

    #[test]
    fn euler_characteristic_counts_signs() {
        assert_eq!(gl2().euler_characteristic(), 0);
        assert_eq!(quotient_profile().euler_characteristic(), 0);
        assert_eq!(
            GradedTate::from_pairs([(0, 0), (5, -3)]).euler_characteristic(),
            0
        );
        assert_eq!(
            GradedTate::from_entries([(2, 1, 2), (4, 2, 1)]).euler_characteristic(),
            3
        );
    }
}
