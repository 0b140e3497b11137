//! Sections of `O(hE_n + dF_n)` on the Hirzebruch surface `F_n` and the
//! Maroni stratification of trigonal curves.
//!
//! For `n >= 1` sections are weighted polynomials `Σ f_c(x, y) z^c` with
//! `deg x = deg y = 1`, `deg z = n` and total degree `d`, where `0 <= c <= h`.
//! For `n = 0` the surface is `P^1 × P^1` and sections are bihomogeneous of
//! bidegree `(h, d)` in `(x_0, x_1; y_0, y_1)`; the fibers of the ruling are
//! the lines `[y_0 : y_1] = const`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The linear system `|hE_n + dF_n|` on `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub n: u32,
    pub h: u32,
    pub d: i64,
}

impl SurfaceSpec {
    pub fn new(n: u32, h: u32, d: i64) -> Result<Self> {
        let spec = Self { n, h, d };
        spec.validate()?;
        Ok(spec)
    }

    /// The trigonal case `h = 3`.
    pub fn trigonal(n: u32, d: i64) -> Result<Self> {
        Self::new(n, 3, d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.h < 3 {
            return Err(Error::InvalidSpec(format!("h = {} must be at least 3", self.h)));
        }
        if self.d < self.hn() {
            return Err(Error::InvalidSpec(format!(
                "d = {} is below h·n = {}",
                self.d,
                self.hn()
            )));
        }
        Ok(())
    }

    pub fn hn(&self) -> i64 {
        self.h as i64 * self.n as i64
    }

    /// Genus of a smooth member when `h = 3`: `g = 2d - 3n - 2`.
    pub fn genus(&self) -> i64 {
        2 * self.d - 3 * self.n as i64 - 2
    }
}

/// An exponent vector of a basis section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub enum Monomial {
    /// `x^a y^b z^c` with `a + b + c·n = d`.
    Weighted { a: u32, b: u32, c: u32 },
    /// `x_0^a0 x_1^a1 y_0^b0 y_1^b1` with `a0 + a1 = h`, `b0 + b1 = d`.
    Bidegree { a0: u32, a1: u32, b0: u32, b1: u32 },
}

impl Monomial {
    /// Exponents as a flat tuple, the JSON export format.
    pub fn exponents(&self) -> Vec<u32> {
        match *self {
            Monomial::Weighted { a, b, c } => vec![a, b, c],
            Monomial::Bidegree { a0, a1, b0, b1 } => vec![a0, a1, b0, b1],
        }
    }
}

impl From<Monomial> for Vec<u32> {
    fn from(m: Monomial) -> Self {
        m.exponents()
    }
}

impl TryFrom<Vec<u32>> for Monomial {
    type Error = String;

    fn try_from(v: Vec<u32>) -> std::result::Result<Self, String> {
        match v[..] {
            [a, b, c] => Ok(Monomial::Weighted { a, b, c }),
            [a0, a1, b0, b1] => Ok(Monomial::Bidegree { a0, a1, b0, b1 }),
            _ => Err(format!("expected 3 or 4 exponents, got {}", v.len())),
        }
    }
}

/// `dim H^0(F_n, O(hE_n + dF_n))`.
pub fn section_dimension(spec: &SurfaceSpec) -> Result<i64> {
    spec.validate()?;
    let d = spec.d;
    if spec.n == 0 {
        return Ok((spec.h as i64 + 1) * (d + 1));
    }
    let n = spec.n as i64;
    Ok((0..=spec.h as i64).map(|c| d - c * n + 1).sum())
}

/// Monomial basis ordered by descending `c`, then descending `a`
/// (for `n = 0`: descending `a0`, then descending `b0`).
pub fn monomial_basis(spec: &SurfaceSpec) -> Result<Vec<Monomial>> {
    spec.validate()?;
    let d = spec.d as u32;
    let h = spec.h;
    let mut out = Vec::new();
    if spec.n == 0 {
        for a0 in (0..=h).rev() {
            for b0 in (0..=d).rev() {
                out.push(Monomial::Bidegree {
                    a0,
                    a1: h - a0,
                    b0,
                    b1: d - b0,
                });
            }
        }
        return Ok(out);
    }
    for c in (0..=h).rev() {
        let rest = d - c * spec.n;
        for a in (0..=rest).rev() {
            out.push(Monomial::Weighted { a, b: rest - a, c });
        }
    }
    Ok(out)
}

/// One stratum `N_n` of the Maroni stratification of `T_g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumInfo {
    pub codim: i64,
    pub d: i64,
    pub dim: i64,
    pub g: i64,
    pub n: i64,
}

impl StratumInfo {
    pub fn new(g: i64, n: i64) -> Result<Self> {
        if g < 0 || n < 0 || (g - n).rem_euclid(2) != 0 || 3 * n > g + 2 {
            return Err(Error::InvalidStratum(format!(
                "no Maroni stratum n = {n} in genus {g}"
            )));
        }
        let delta = i64::from(n == 0);
        Ok(Self {
            codim: (n - 1).max(0),
            d: (g + 3 * n + 2) / 2,
            dim: 2 * g + 2 - n - delta,
            g,
            n,
        })
    }

    pub fn surface(&self) -> SurfaceSpec {
        SurfaceSpec {
            n: self.n as u32,
            h: 3,
            d: self.d,
        }
    }
}

/// All strata of `T_g`, ascending in `n`.
pub fn maroni_strata(g: i64) -> Result<Vec<StratumInfo>> {
    if g < 5 {
        return Err(Error::InvalidStratum(format!(
            "genus {g} is below 5, where trigonal curves need not be Hurwitz covers"
        )));
    }
    let first = g.rem_euclid(2);
    (first..=(g + 2) / 3)
        .step_by(2)
        .map(|n| StratumInfo::new(g, n))
        .collect()
}
