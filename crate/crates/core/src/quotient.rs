//! From the cohomology of `X_{d,n}` to the cohomology of the Maroni strata.
//!
//! For `n >= 1` the stratum is `X_{d,n}/(C* × GL_2)`. Leray–Hirsch removes
//! the `GL_2` factor by exact division; the remaining `C*` is handled by the
//! Gysin sequence of the bundle `X/GL_2 → X/(C* × GL_2)`, whose Euler class
//! ranks must be supplied (see [`crate::chow`]). For `n = 0` the group is
//! isogenous to `C* × SL_2 × SL_2` and division suffices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chow::{euler_ranks, EulerRanks};
use crate::error::{Error, Result};
use crate::graded::GradedTate;
use crate::surface::{StratumInfo, SurfaceSpec};
use crate::vassiliev::{cutoff, stable_cohomology_sections, stable_cohomology_window};

pub fn h_cstar() -> GradedTate {
    GradedTate::from_pairs([(0, 0), (1, -1)])
}

pub fn h_sl2() -> GradedTate {
    GradedTate::from_pairs([(0, 0), (3, -2)])
}

pub fn h_gl2() -> GradedTate {
    GradedTate::from_pairs([(0, 0), (1, -1), (3, -2), (4, -3)])
}

/// `C* × SL_2 × SL_2`, the reductive part of the automorphism group of `F_0`.
pub fn h_g0() -> GradedTate {
    GradedTate::tensor_all([&h_cstar(), &h_sl2(), &h_sl2()])
}

/// `H^•(X_{d,n}/GL_2)` in the stable range: `Q, Q(-2), Q(-3), Q(-5)` in
/// degrees 0, 3, 5, 8.
pub fn quotient_profile() -> GradedTate {
    GradedTate::from_pairs([(0, 0), (3, -2), (5, -3), (8, -5)])
}

/// `H^•(N_n)` for `n >= 1` in the stable range.
pub fn stratum_profile() -> GradedTate {
    GradedTate::from_pairs([(0, 0), (2, -1), (5, -3), (7, -4)])
}

/// `H^•(N_0)` in the stable range.
pub fn stratum0_profile() -> GradedTate {
    GradedTate::from_pairs([(0, 0), (5, -3)])
}

fn require_gl2_case(spec: &SurfaceSpec) -> Result<()> {
    if spec.n == 0 || spec.h != 3 {
        return Err(Error::InvalidSpec(format!(
            "the GL_2 quotient needs n >= 1 and h = 3, got {spec:?}"
        )));
    }
    Ok(())
}

/// `H^•(X_{d,n}/GL_2)` through `⌊(d - 3n)/2⌋`; requires `N >= 5`.
pub fn x_mod_gl2(spec: &SurfaceSpec) -> Result<(GradedTate, i64)> {
    require_gl2_case(spec)?;
    let (total, top) = stable_cohomology_sections(spec)?;
    Ok((total.divide_within(&h_gl2(), top)?, top))
}

/// [`x_mod_gl2`] built from [`stable_cohomology_window`], for any `d >= 3n`.
pub fn x_mod_gl2_window(spec: &SurfaceSpec) -> Result<(GradedTate, i64)> {
    require_gl2_case(spec)?;
    let (total, top) = stable_cohomology_window(spec)?;
    Ok((total.divide_within(&h_gl2(), top)?, top))
}

/// A solution of the Gysin sequence: the base cohomology and the rank of
/// `ξ` out of each `(degree, weight)` of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GysinSolution {
    pub base: GradedTate,
    pub max_degree: i64,
    /// `(j, u) → rank of ξ: B^j_u → B^{j+2}_{u-1}`.
    pub xi_ranks: BTreeMap<(i64, i64), u64>,
}

impl GysinSolution {
    /// Total rank of `ξ` out of degree `j`.
    pub fn rank_from(&self, j: i64) -> u64 {
        self.xi_ranks.range((j, i64::MIN)..=(j, i64::MAX)).map(|(_, r)| r).sum()
    }
}

/// Cohomology of the total space given the base and the ranks of `ξ`:
/// `E^j = coker(ξ: B^{j-2} → B^j) ⊕ ker(ξ: B^{j-1} → B^{j+1})(-1)`.
pub fn gysin_total(base: &GradedTate, xi_ranks: &BTreeMap<(i64, i64), u64>, max_degree: i64) -> Result<GradedTate> {
    let rho = |j: i64, u: i64| xi_ranks.get(&(j, u)).copied().unwrap_or(0);
    let mut out = GradedTate::zero();
    for (&(j, u), &r) in xi_ranks {
        if r > base.get(j, u) || (j + 2 <= max_degree && r > base.get(j + 2, u - 1)) {
            return Err(Error::Inconsistent(format!(
                "ξ cannot have rank {r} from ({j}, {u}) to ({}, {})",
                j + 2,
                u - 1
            )));
        }
    }
    for c in base.iter() {
        let (j, w) = (c.degree, c.weight);
        if j <= max_degree {
            out.add(j, w, c.mult - rho(j - 2, w + 1));
        }
        if j < max_degree {
            out.add(j + 1, w - 1, c.mult - rho(j, w));
        }
    }
    Ok(out)
}

/// Solves for the base `B` of a `C*`-bundle with total cohomology `total`
/// through `max_degree`.
///
/// Ranks of `ξ` listed in `ranks` are imposed; elsewhere the smallest rank
/// compatible with exactness is used. The base is determined degree by
/// degree from `B^j_w = T^j_w + ρ_{j-2}(w+1) - B^{j-1}_{w+1} + ρ_{j-1}(w+1)`.
pub fn solve_circle_gysin(total: &GradedTate, ranks: &EulerRanks, max_degree: i64) -> Result<GysinSolution> {
    if total.in_degree(0).collect::<Vec<_>>() != [(0, 1)] || total.min_degree() != Some(0) {
        return Err(Error::InvalidArgument(format!(
            "total space must be connected with H^0 = Q, got {total}"
        )));
    }
    let total = total.truncate(max_degree);
    let mut base = GradedTate::zero();
    let mut xi: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    let rho = |xi: &BTreeMap<(i64, i64), u64>, j: i64, u: i64| xi.get(&(j, u)).copied().unwrap_or(0) as i64;

    for j in 0..=max_degree {
        // choose ρ_{j-1}: B^{j-1}_u → B^{j+1}_{u-1}
        let k = j - 1;
        let sources: Vec<(i64, u64)> = base.in_degree(k).collect();
        let mut forced: BTreeMap<i64, u64> = BTreeMap::new();
        for &(u, m) in &sources {
            // B^j_{u-1} >= 0 forces ρ_{j-1}(u) >= B^{j-1}_u - T^j_{u-1} - ρ_{j-2}(u)
            let need = m as i64 - total.get(j, u - 1) as i64 - rho(&xi, j - 2, u);
            forced.insert(u, need.max(0) as u64);
        }
        let mut chosen = forced.clone();
        if let Some(r) = ranks.get(k) {
            let floor: u64 = forced.values().sum();
            if r < floor {
                return Err(Error::Inconsistent(format!(
                    "ξ from degree {k} must have rank at least {floor}, not {r}"
                )));
            }
            let mut extra = r - floor;
            if extra > 0 {
                let room: Vec<(i64, u64)> = sources
                    .iter()
                    .map(|&(u, m)| (u, m - forced[&u]))
                    .filter(|&(_, s)| s > 0)
                    .collect();
                match room[..] {
                    [(u, slack)] if slack >= extra => {
                        *chosen.get_mut(&u).expect("weight present") += extra;
                        extra = 0;
                    }
                    [] | [_] => {}
                    _ => {
                        return Err(Error::Inconsistent(format!(
                            "rank {r} of ξ from degree {k} does not determine its weights"
                        )))
                    }
                }
                if extra > 0 {
                    return Err(Error::Inconsistent(format!(
                        "ξ from degree {k} cannot have rank {r}"
                    )));
                }
            }
        }
        for (&u, &r) in &chosen {
            if r > 0 {
                xi.insert((k, u), r);
            }
        }

        // B^j_w
        let mut weights: Vec<i64> = total.in_degree(j).map(|(w, _)| w).collect();
        weights.extend(base.in_degree(j - 1).map(|(u, _)| u - 1));
        weights.extend(xi.keys().filter(|&&(jj, _)| jj == j - 2).map(|&(_, u)| u - 1));
        weights.sort_unstable();
        weights.dedup();
        for w in weights {
            let b = total.get(j, w) as i64 + rho(&xi, j - 2, w + 1) - base.get(j - 1, w + 1) as i64
                + rho(&xi, j - 1, w + 1);
            if b < 0 {
                return Err(Error::Inconsistent(format!("negative multiplicity at ({j}, {w})")));
            }
            // the cokernel of ξ into (j, w) must fit inside T
            if rho(&xi, j - 2, w + 1) > b {
                return Err(Error::Inconsistent(format!("ξ into ({j}, {w}) exceeds the base")));
            }
            base.add(j, w, b as u64);
        }
    }

    // explicit ranks beyond what the window can see are ignored; inside it
    // they must match what was imposed
    for (&k, &r) in &ranks.ranks {
        if k < max_degree {
            let got: u64 = xi.range((k, i64::MIN)..=(k, i64::MAX)).map(|(_, v)| v).sum();
            if got != r {
                return Err(Error::Inconsistent(format!("ξ from degree {k} has rank {got}, expected {r}")));
            }
        }
    }
    let solution = GysinSolution {
        base,
        max_degree,
        xi_ranks: xi,
    };
    let rebuilt = gysin_total(&solution.base, &solution.xi_ranks, max_degree)?;
    if rebuilt != total {
        return Err(Error::Inconsistent(format!(
            "reconstruction gives {rebuilt}, expected {total}"
        )));
    }
    Ok(solution)
}

fn stratum_spec(n: i64, g: i64) -> Result<(StratumInfo, SurfaceSpec)> {
    let info = StratumInfo::new(g, n)?;
    Ok((info, info.surface()))
}

/// Top degree of the range in which the stratum's cohomology is known:
/// `⌊(g - 3n + 2)/4⌋` (`⌊(g + 2)/4⌋` for `n = 0`), and only degree 0 when
/// the first column of the Vassiliev page is already the unverified tail.
pub fn stratum_window(n: i64, g: i64) -> Result<i64> {
    let (_, spec) = stratum_spec(n, g)?;
    let top = (g - 3 * n + 2).div_euclid(4);
    let first_unverified = cutoff(&spec);
    Ok(if first_unverified < 2 { top.min(first_unverified - 1) } else { top })
}

/// Cohomology of `N_n ⊂ T_g` through [`stratum_window`], without requiring
/// the stratum to be deep inside the stable range.
pub fn stratum_cohomology_window(n: i64, g: i64) -> Result<(GradedTate, i64)> {
    let (_, spec) = stratum_spec(n, g)?;
    let top = stratum_window(n, g)?;
    if top < 0 {
        return Ok((GradedTate::zero(), top));
    }
    if n == 0 {
        let (total, _) = stable_cohomology_window(&spec)?;
        return Ok((total.divide_within(&h_g0(), top)?, top));
    }
    let (quotient, _) = x_mod_gl2_window(&spec)?;
    let ranks = euler_ranks(g, n)?;
    let solution = solve_circle_gysin(&quotient.truncate(top), &ranks, top)?;
    Ok((solution.base, top))
}

fn require_first_columns(n: i64, g: i64) -> Result<()> {
    let (_, spec) = stratum_spec(n, g)?;
    if cutoff(&spec) < 2 {
        return Err(Error::RangeViolation(format!(
            "N = {} for the stratum n = {n} of genus {g}: the codimension bound fails from two points on",
            cutoff(&spec)
        )));
    }
    Ok(())
}

/// `H^•(N_n)` for the Maroni stratum `n` of `T_g`, with its range.
pub fn stratum_cohomology(n: i64, g: i64) -> Result<(GradedTate, i64)> {
    require_first_columns(n, g)?;
    stratum_cohomology_window(n, g)
}

/// Window of [`framed_stratum_cohomology_window`]: `⌊d/2⌋` for `n = 0`.
pub fn framed_window(n: i64, g: i64) -> Result<i64> {
    if n == 0 {
        let (_, spec) = stratum_spec(n, g)?;
        let top = spec.d.div_euclid(2);
        let first_unverified = cutoff(&spec);
        return Ok(if first_unverified < 2 { top.min(first_unverified - 1) } else { top });
    }
    stratum_window(n, g)
}

/// Cohomology of the `SL_2`-cover `N_n^†`, without the range requirement.
pub fn framed_stratum_cohomology_window(n: i64, g: i64) -> Result<(GradedTate, i64)> {
    let top = framed_window(n, g)?;
    if top < 0 {
        return Ok((GradedTate::zero(), top));
    }
    if n == 0 {
        let (_, spec) = stratum_spec(n, g)?;
        let (total, _) = stable_cohomology_window(&spec)?;
        // C* × SL_2 has the cohomology of GL_2
        let fiber = h_cstar().tensor(&h_sl2());
        return Ok((total.divide_within(&fiber, top)?, top));
    }
    let (base, _) = stratum_cohomology_window(n, g)?;
    Ok((base.tensor(&h_sl2()).truncate(top), top))
}

/// `H^•(N_n^†)` with its range.
pub fn framed_stratum_cohomology(n: i64, g: i64) -> Result<(GradedTate, i64)> {
    require_first_columns(n, g)?;
    framed_stratum_cohomology_window(n, g)
}

/// Two-row rendering of the Gysin spectral sequence: row 1 is `B ⊗ H^1(C*)`,
/// row 0 is `B`, with the nonzero `ξ` arrows listed underneath.
pub fn render_gysin_text(solution: &GysinSolution) -> String {
    let top = solution.max_degree;
    let cell = |g: &GradedTate, j: i64| {
        g.in_degree(j)
            .map(|(w, m)| {
                let q = if w == 0 { "Q".to_string() } else { format!("Q({w})") };
                if m == 1 {
                    q
                } else {
                    format!("{q}^{m}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let row1 = solution.base.twist_shift(0, -1);
    let mut cols: Vec<[String; 3]> = (0..=top)
        .map(|j| [cell(&row1, j), cell(&solution.base, j), j.to_string()])
        .collect();
    let widths: Vec<usize> = cols
        .iter_mut()
        .map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(1))
        .collect();
    let mut out = String::new();
    for (r, label) in ["1", "0"].iter().enumerate() {
        let line: Vec<String> = cols.iter().zip(&widths).map(|(c, w)| format!("{:<w$}", c[r])).collect();
        let _ = writeln!(out, "{label} | {}", line.join("  ").trim_end());
    }
    let total_width: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
    let _ = writeln!(out, "--+-{}", "-".repeat(total_width));
    let footer: Vec<String> = cols.iter().zip(&widths).map(|(c, w)| format!("{:<w$}", c[2])).collect();
    let _ = writeln!(out, "  | {}", footer.join("  ").trim_end());
    for (&(j, u), &r) in &solution.xi_ranks {
        let _ = writeln!(out, "d2: ({j}, 1) Q({}) -> ({}, 0) Q({}) rank {r}", u - 1, j + 2, u - 1);
    }
    out
}

pub fn render_gysin_latex(solution: &GysinSolution) -> String {
    let top = solution.max_degree;
    let cell = |g: &GradedTate, j: i64| {
        g.in_degree(j)
            .map(|(w, m)| {
                let q = if w == 0 { "$\\mathbf{Q}$".to_string() } else { format!("$\\mathbf{{Q}}({w})$") };
                if m == 1 {
                    q
                } else {
                    format!("{q}$^{m}$")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let row1 = solution.base.twist_shift(0, -1);
    let mut out = format!("\\begin{{tabular}}{{ c|{} }}\n", "c".repeat(top as usize + 2));
    let r1: Vec<String> = (0..=top).map(|j| cell(&row1, j)).collect();
    let r0: Vec<String> = (0..=top).map(|j| cell(&solution.base, j)).collect();
    let _ = writeln!(out, "\t$1$&{}&\\\\", r1.join("&"));
    let _ = writeln!(out, "\t$0$&{}&\\\\", r0.join("&"));
    let labels: Vec<String> = (0..=top).map(|j| format!("${j}$")).collect();
    let _ = writeln!(out, "\t\\hline\n\t&{}&$\\dots$\n\\end{{tabular}}", labels.join("&"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table2_ranks() -> EulerRanks {
        EulerRanks::new([(0, 1), (2, 0), (5, 1)])
    }

    #[test]
    fn group_constants() {
        assert_eq!(
            [h_cstar(), h_sl2(), h_gl2(), h_g0()].map(|g| g.total_dim()),
            [2, 2, 4, 8]
        );
        assert_eq!(h_gl2(), h_cstar().tensor(&h_sl2()));
        assert_eq!(
            h_g0(),
            GradedTate::from_entries([
                (0, 0, 1),
                (1, -1, 1),
                (3, -2, 2),
                (4, -3, 2),
                (6, -4, 1),
                (7, -5, 1)
            ])
        );
    }

    #[test]
    fn x_mod_gl2_examples() {
        let (q, top) = x_mod_gl2(&SurfaceSpec::trigonal(1, 25).unwrap()).unwrap();
        assert_eq!(top, 11);
        assert_eq!(q, quotient_profile());
        let (q, top) = x_mod_gl2(&SurfaceSpec::trigonal(2, 30).unwrap()).unwrap();
        assert_eq!((q, top), (quotient_profile(), 12));
        let a = GradedTate::from_pairs([(0, 0), (2, -1), (6, -3)]);
        assert_eq!(a.tensor(&h_gl2()).divide(&h_gl2()).unwrap(), a);
        assert!(x_mod_gl2(&SurfaceSpec::trigonal(0, 20).unwrap()).is_err());
    }

    #[test]
    fn gysin_table_two() {
        let s = solve_circle_gysin(&quotient_profile(), &table2_ranks(), 9).unwrap();
        assert_eq!(s.base, stratum_profile());
        assert_eq!(s.rank_from(0), 1);
        assert_eq!(s.rank_from(2), 0);
        assert_eq!(s.rank_from(5), 1);
        assert_eq!(s.xi_ranks.len(), 2);
    }

    #[test]
    fn gysin_table_three() {
        let ranks = EulerRanks::new([(0, 1), (2, 1), (5, 1)]);
        let s = solve_circle_gysin(&quotient_profile(), &ranks, 9).unwrap();
        assert_eq!(
            s.base,
            GradedTate::from_pairs([(0, 0), (2, -1), (3, -2), (4, -2), (5, -3), (7, -4)])
        );
        assert_eq!(s.rank_from(3), 1);
    }

    #[test]
    fn gysin_trivial_bundle() {
        let s = solve_circle_gysin(&h_cstar(), &EulerRanks::new([(0, 0)]), 6).unwrap();
        assert_eq!(s.base, GradedTate::unit());
    }

    #[test]
    fn gysin_rejects_impossible_ranks() {
        // ξ from degree 0 is forced to be injective by the missing class in degree 1
        let err = solve_circle_gysin(&quotient_profile(), &EulerRanks::new([(0, 0)]), 9).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
        let err = solve_circle_gysin(&quotient_profile(), &EulerRanks::new([(0, 2)]), 9).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
        assert!(solve_circle_gysin(&GradedTate::single(1, -1), &EulerRanks::default(), 3).is_err());
    }

    #[test]
    fn gysin_reconstruction() {
        let s = solve_circle_gysin(&quotient_profile(), &table2_ranks(), 9).unwrap();
        assert_eq!(gysin_total(&s.base, &s.xi_ranks, 9).unwrap(), quotient_profile());
    }

    #[test]
    fn stratum_examples() {
        assert_eq!(stratum_cohomology(2, 20).unwrap(), (stratum_profile().truncate(4), 4));
        assert_eq!(stratum_cohomology(0, 20).unwrap(), (stratum0_profile(), 5));
        assert!(matches!(stratum_cohomology(1, 5), Err(Error::RangeViolation(_))));
        assert!(stratum_cohomology(1, 10).is_err());
        let (h, top) = stratum_cohomology(1, 41).unwrap();
        assert_eq!((h, top), (stratum_profile(), 10));
    }

    #[test]
    fn framed_examples() {
        let (h, top) = framed_stratum_cohomology(1, 21).unwrap();
        assert_eq!(top, 5);
        let full = GradedTate::from_entries([
            (0, 0, 1),
            (2, -1, 1),
            (3, -2, 1),
            (5, -3, 2),
            (7, -4, 1),
            (8, -5, 1),
            (10, -6, 1),
        ]);
        assert_eq!(full, stratum_profile().tensor(&h_sl2()));
        assert_eq!(h, full.truncate(5));
        let (h, top) = framed_stratum_cohomology(1, 41).unwrap();
        assert_eq!((h, top), (full.truncate(10), 10));
        let (h, top) = framed_stratum_cohomology(0, 20).unwrap();
        assert_eq!((h, top), (quotient_profile().truncate(5), 5));
        let (h, _) = framed_stratum_cohomology(0, 40).unwrap();
        assert_eq!(h, quotient_profile());
    }

    #[test]
    fn windows_for_high_strata() {
        // (n = 6, g = 20): d = 20, N = 1
        assert_eq!(stratum_window(6, 20).unwrap(), 0);
        assert_eq!(stratum_cohomology_window(6, 20).unwrap(), (GradedTate::unit(), 0));
        assert!(stratum_cohomology(6, 20).is_err());
        // (n = 7, g = 19): d = 21 = 3n, N = 0
        assert_eq!(stratum_cohomology_window(7, 19).unwrap().1, -1);
    }

    #[test]
    fn gysin_renderers() {
        let s = solve_circle_gysin(&quotient_profile(), &table2_ranks(), 8).unwrap();
        let text = render_gysin_text(&s);
        assert!(text.lines().next().unwrap().starts_with("1 | Q(-1)"));
        assert!(text.contains("d2: (0, 1) Q(-1) -> (2, 0) Q(-1) rank 1"));
        assert!(text.contains("d2: (5, 1) Q(-4) -> (7, 0) Q(-4) rank 1"));
        let latex = render_gysin_latex(&s);
        assert!(latex.contains("$1$&$\\mathbf{Q}(-1)$&&$\\mathbf{Q}(-2)$&&&$\\mathbf{Q}(-4)$&&$\\mathbf{Q}(-5)$&&\\\\"));
    }
}
