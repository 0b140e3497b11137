//! Graded pieces of `Q[n1, m1, c2]/I` for the ideal `I` of relations on a
//! Maroni stratum, computed by Macaulay truncation: in degree `t` the
//! relations are spanned by `μ·G` for generators `G` and monomials `μ` of
//! complementary degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Field};
use crate::surface::StratumInfo;

/// Exponents `(a, b, c)` of `n1^a m1^b c2^c`.
pub type Exponents = (u32, u32, u32);

/// `deg n1 = deg m1 = 1`, `deg c2 = 2`.
pub fn monomial_degree(e: Exponents) -> u32 {
    e.0 + e.1 + 2 * e.2
}

/// All monomials of degree `t`, by descending power of `n1` then `m1`.
pub fn monomials_of_degree(t: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for c in 0..=t / 2 {
        let rest = t - 2 * c;
        for a in (0..=rest).rev() {
            out.push((a, rest - a, c));
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// A polynomial in `n1, m1, c2` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedPolynomial {
    terms: BTreeMap<Exponents, BigRational>,
}

impl GradedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, BigRational::from_integer(c.into()));
        }
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: BigRational) {
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coefficient(&self, e: Exponents) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, or `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|&e| monomial_degree(e));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn mul_monomial(&self, m: Exponents) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b, c), v)| ((a + m.0, b + m.1, c + m.2), v.clone()))
                .collect(),
        }
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b, c), coeff) in self.terms.iter().rev() {
            let sign = if coeff.is_negative() { "-" } else { "+" };
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = coeff.abs();
            let mut factors = Vec::new();
            for (name, e) in [("n1", a), ("m1", b), ("c2", c)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() || !abs.is_one() {
                write!(f, "{abs}")?;
                if !factors.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for GradedPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // [[a, b, c, "coefficient"], ...] in descending monomial order
        let rows: Vec<(u32, u32, u32, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(&(a, b, c), v)| (a, b, c, v.to_string()))
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<(u32, u32, u32, String)> = Vec::deserialize(d)?;
        let mut p = Self::zero();
        for (a, b, c, v) in rows {
            let q: BigRational = v.parse().map_err(serde::de::Error::custom)?;
            p.add_term((a, b, c), q);
        }
        Ok(p)
    }
}

/// The ideal of relations on the stratum `N_n` of `T_g`, with splitting type
/// `(a, b)`, `b - a = n`, `a + b = g + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TschirnhausenIdeal {
    pub a: i64,
    pub b: i64,
    pub g: i64,
    pub generators: Vec<GradedPolynomial>,
    pub n: i64,
}

impl TschirnhausenIdeal {
    pub fn generator_degrees(&self) -> Vec<Option<u32>> {
        self.generators.iter().map(GradedPolynomial::degree).collect()
    }
}

/// The four generators of `I` for the stratum `(g, n)`, `n >= 1`.
pub fn ideal_generators(g: i64, n: i64) -> Result<TschirnhausenIdeal> {
    StratumInfo::new(g, n)?;
    if n < 1 {
        return Err(Error::InvalidStratum("the ideal is defined for n >= 1".into()));
    }
    let b = (g + n + 2) / 2;
    let a = (g - n + 2) / 2;
    debug_assert_eq!((b - a, a + b), (n, g + 2));
    const N1: Exponents = (1, 0, 0);
    const M1: Exponents = (0, 1, 0);
    let sq = |e: Exponents| (2 * e.0, 2 * e.1, 0);
    const N1M1: Exponents = (1, 1, 0);
    const C2: Exponents = (0, 0, 1);

    let g1 = GradedPolynomial::from_terms([(N1, -9 * b + 8 * g + 12), (M1, 9 * b - g - 6)]);
    let g2 = GradedPolynomial::from_terms([
        (sq(N1), 4),
        (N1M1, -1),
        (sq(M1), 4),
        (C2, -9 * b * b + 9 * b * g - 4 * g * g + 18 * b - 12 * g - 8),
    ]);
    let g3 = GradedPolynomial::from_terms([
        (sq(N1), -12 * b + 12 * g + 20),
        (N1M1, -2),
        (sq(M1), 12 * b - 4),
        (
            C2,
            -12 * b * b * g + 12 * b * g * g - 4 * g * g * g - 18 * b * b + 42 * b * g - 20 * g * g + 36 * b
                - 32 * g
                - 16,
        ),
    ]);
    let g4 = GradedPolynomial::from_terms([
        ((3, 0, 0), 4),
        ((0, 3, 0), 4),
        ((1, 0, 1), -12 * b * b + 24 * b * g - 12 * g * g + 42 * b - 40 * g - 32),
        ((0, 1, 1), -12 * b * b + 6 * b + 2 * g + 4),
    ]);
    Ok(TschirnhausenIdeal {
        a,
        b,
        g,
        generators: vec![g1, g2, g3, g4],
        n,
    })
}

/// The degree-`t` Macaulay matrix: one row per product `μ·G`, one column per
/// monomial of degree `t`. Rational entries are cleared of denominators row
/// by row.
pub fn macaulay_matrix(ideal: &TschirnhausenIdeal, t: u32) -> ExactMatrix {
    let columns = monomials_of_degree(t);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for gen in &ideal.generators {
        let Some(e) = gen.degree() else { continue };
        if e > t {
            continue;
        }
        for mu in monomials_of_degree(t - e) {
            let product = gen.mul_monomial(mu);
            let coeffs: Vec<BigRational> = columns.iter().map(|&m| product.coefficient(m)).collect();
            let lcm = coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
            rows.push(coeffs.iter().map(|c| (c * &lcm).to_integer()).collect());
        }
    }
    if rows.is_empty() {
        return ExactMatrix::zeros(0, columns.len());
    }
    ExactMatrix::from_rows(&rows).expect("rows share the monomial count")
}

/// `dim (Q[n1, m1, c2]/I)_t` for `t = 0..=up_to`, exact over `Q`.
pub fn truncated_quotient_dims(ideal: &TschirnhausenIdeal, up_to: u32) -> Vec<usize> {
    (0..=up_to)
        .map(|t| {
            let m = macaulay_matrix(ideal, t);
            m.cols() - m.rank(Field::Rationals)
        })
        .collect()
}

/// Same dimensions with ranks over `F_p`; a prime can only overestimate.
pub fn truncated_quotient_dims_mod(ideal: &TschirnhausenIdeal, up_to: u32, p: u64) -> Vec<usize> {
    (0..=up_to)
        .map(|t| {
            let m = macaulay_matrix(ideal, t);
            m.cols() - m.rank(Field::Prime(p))
        })
        .collect()
}

/// Ranks of multiplication by the Euler class `ξ` from base degree `j` to
/// `j + 2`, for the degrees where they are prescribed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerRanks {
    pub ranks: BTreeMap<i64, u64>,
}

impl EulerRanks {
    pub fn new<I: IntoIterator<Item = (i64, u64)>>(ranks: I) -> Self {
        Self {
            ranks: ranks.into_iter().collect(),
        }
    }

    pub fn get(&self, j: i64) -> Option<u64> {
        self.ranks.get(&j).copied()
    }

    /// Ranks read off from `dim A^1` and `dim A^2`: `ξ` is a nonzero multiple
    /// of `κ_1`, `ξ^2` spans `A^2`, and the degree-5 class must hit degree 7.
    pub fn from_chow_dims(dims: &[usize]) -> Result<Self> {
        if dims.len() < 3 {
            return Err(Error::InvalidArgument("need quotient dimensions through degree 2".into()));
        }
        Ok(Self::new([
            (0, u64::from(dims[1] >= 1)),
            (2, dims[2] as u64),
            (5, 1),
        ]))
    }
}

/// Euler-class ranks for the stratum `(g, n)`, `n >= 1`.
pub fn euler_ranks(g: i64, n: i64) -> Result<EulerRanks> {
    let ideal = ideal_generators(g, n)?;
    EulerRanks::from_chow_dims(&truncated_quotient_dims(&ideal, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn first_generator_for_genus_eleven() {
        let ideal = ideal_generators(11, 1).unwrap();
        assert_eq!((ideal.a, ideal.b), (6, 7));
        // -63 + 88 + 12 = 37, 63 - 11 - 6 = 46
        let g1 = &ideal.generators[0];
        assert_eq!(g1.coefficient((1, 0, 0)), int(37));
        assert_eq!(g1.coefficient((0, 1, 0)), int(46));
        assert_eq!(g1.to_string(), "37*n1 + 46*m1");
    }

    #[test]
    fn degrees_and_integrality() {
        for g in 5..=40 {
            for n in (1..=(g + 2) / 3).filter(|n| (g - n) % 2 == 0) {
                let ideal = ideal_generators(g, n).unwrap();
                assert_eq!(ideal.generator_degrees(), vec![Some(1), Some(2), Some(2), Some(3)]);
                assert!(ideal.generators.iter().all(GradedPolynomial::is_integral));
                assert!(!ideal.generators[0].is_zero());
            }
        }
    }

    #[test]
    fn invalid_strata() {
        assert!(matches!(ideal_generators(10, 1), Err(Error::InvalidStratum(_))));
        assert!(matches!(ideal_generators(10, 0), Err(Error::InvalidStratum(_))));
    }

    #[test]
    fn monomial_counts() {
        let counts: Vec<usize> = (0..6).map(|t| monomials_of_degree(t).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 6, 9, 12]);
        assert_eq!(monomials_of_degree(2), vec![(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)]);
    }

    #[test]
    fn quotient_dims_genus_eleven() {
        let ideal = ideal_generators(11, 1).unwrap();
        let dims = truncated_quotient_dims(&ideal, 3);
        assert_eq!(&dims[..3], &[1, 1, 0]);
        let m2 = macaulay_matrix(&ideal, 2);
        assert_eq!((m2.rows(), m2.cols(), m2.rank(Field::Rationals)), (4, 4, 4));
    }

    #[test]
    fn euler_rank_examples() {
        let expected = EulerRanks::new([(0, 1), (2, 0), (5, 1)]);
        assert_eq!(euler_ranks(11, 1).unwrap(), expected);
        assert_eq!(euler_ranks(20, 2).unwrap(), expected);
        assert_eq!(
            EulerRanks::from_chow_dims(&[1, 1, 1]).unwrap(),
            EulerRanks::new([(0, 1), (2, 1), (5, 1)])
        );
        assert!(EulerRanks::from_chow_dims(&[1, 1]).is_err());
    }

    #[test]
    fn prime_field_agrees_in_degree_two() {
        for (g, n) in [(11, 1), (20, 2), (40, 4), (39, 13)] {
            let ideal = ideal_generators(g, n).unwrap();
            assert_eq!(
                truncated_quotient_dims_mod(&ideal, 2, crate::linalg::DEFAULT_PRIME),
                truncated_quotient_dims(&ideal, 2)
            );
        }
    }

    #[test]
    fn polynomial_json_round_trip() {
        let ideal = ideal_generators(20, 2).unwrap();
        let text = serde_json::to_string(&ideal).unwrap();
        let back: TschirnhausenIdeal = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ideal);
    }

    proptest! {
        #[test]
        fn mul_monomial_shifts_degree(a in 0u32..3, b in 0u32..3, c in 0u32..3) {
            let ideal = ideal_generators(20, 2).unwrap();
            for gen in &ideal.generators {
                let shifted = gen.mul_monomial((a, b, c));
                prop_assert_eq!(shifted.degree(), gen.degree().map(|d| d + a + b + 2 * c));
            }
        }
    }
}
