//! The first columns of Vassiliev's spectral sequence for the discriminant
//! `Σ_{d,n} ⊂ V_{d,n}` and the stable cohomology of `X_{d,n} = V_{d,n} \ Σ_{d,n}`.
//!
//! Column `i` collects the sections singular at `i` points; its entries are
//! `H̄_•(B(F_n, i); ±Q)` shifted into BM degree `2(v - 3i) + (i - 1)` and
//! twisted by `Q(v - 3i)`. Alexander duality turns a BM class of degree `t`
//! and weight `w` into a cohomology class of degree `2v - 1 - t` and weight
//! `w - v`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::confspace::{twisted_bm_config, CellStratification};
use crate::error::{Error, Result};
use crate::graded::GradedTate;
use crate::surface::{section_dimension, SurfaceSpec};

/// Columns computed from configuration spaces; from five points on the
/// columns vanish inside the verified range.
pub const COMPUTED_COLUMNS: usize = 4;

/// Smallest cutoff for which every computed column is in the verified range.
pub const MIN_CUTOFF: i64 = 5;

/// The `E^1` page, columns `1..=4`, with BM total degrees `p + q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VassilievPage {
    pub columns: BTreeMap<usize, GradedTate>,
    #[serde(rename = "cutoffN")]
    pub cutoff_n: i64,
    pub spec: SurfaceSpec,
    pub v: i64,
    #[serde(rename = "validBMDegreeFrom")]
    pub valid_bm_degree_from: i64,
}

impl VassilievPage {
    /// Column `p`; empty for `p >= 5` and for columns that were not computed.
    pub fn column(&self, p: usize) -> GradedTate {
        self.columns.get(&p).cloned().unwrap_or_default()
    }

    /// All entries dualized to cohomology of `X_{d,n}`, plus `H^0 = Q`.
    pub fn dual(&self) -> GradedTate {
        let mut out = GradedTate::unit();
        for col in self.columns.values() {
            for c in col.iter() {
                out.add(2 * self.v - 1 - c.degree, c.weight - self.v, c.mult);
            }
        }
        out
    }

    /// Text rendering in the layout of the printed table: one row per
    /// `q = 2v - 3, ..., 2v - 18`, entries written relative to `v`.
    pub fn render_text(&self) -> String {
        render(self, Layout::Text)
    }

    pub fn render_latex(&self) -> String {
        render(self, Layout::Latex)
    }
}

/// `N = ⌊(d - hn + 1)/2⌋`, the number of points for which the codimension
/// bound holds.
pub fn cutoff(spec: &SurfaceSpec) -> i64 {
    (spec.d - spec.hn() + 1).div_euclid(2)
}

/// Top cohomological degree of the stable range, `⌊(g + (3 - 2h)n + 2)/4⌋`
/// with `g = 2d - 3n - 2`, which simplifies to `⌊(d - hn)/2⌋`.
pub fn max_stable_degree(spec: &SurfaceSpec) -> i64 {
    let g = spec.genus();
    let top = (g + (3 - 2 * spec.h as i64) * spec.n as i64 + 2).div_euclid(4);
    debug_assert_eq!(top, (spec.d - spec.hn()).div_euclid(2));
    top
}

fn page_columns(v: i64, up_to: usize) -> BTreeMap<usize, GradedTate> {
    let cells = CellStratification::hirzebruch();
    (1..=up_to)
        .map(|i| {
            let k = i as i64;
            let col = twisted_bm_config(&cells, i).twist_shift(2 * (v - 3 * k) + (k - 1), v - 3 * k);
            (i, col)
        })
        .collect()
}

fn range_check(spec: &SurfaceSpec) -> Result<()> {
    spec.validate()?;
    let n = cutoff(spec);
    if n < MIN_CUTOFF {
        return Err(Error::RangeViolation(format!(
            "N = ⌊(d - hn + 1)/2⌋ = {n} is below {MIN_CUTOFF} for {spec:?}"
        )));
    }
    Ok(())
}

/// Columns `1..=4` of the `E^1` page; requires `N >= 5`.
pub fn e1_page(spec: &SurfaceSpec) -> Result<VassilievPage> {
    range_check(spec)?;
    let v = section_dimension(spec)?;
    let n = cutoff(spec);
    Ok(VassilievPage {
        columns: page_columns(v, COMPUTED_COLUMNS),
        cutoff_n: n,
        spec: *spec,
        v,
        valid_bm_degree_from: 2 * v - n,
    })
}

/// Stable cohomology of `X_{d,n}` through `maxDegree`; requires `N >= 5`.
pub fn stable_cohomology_sections(spec: &SurfaceSpec) -> Result<(GradedTate, i64)> {
    let page = e1_page(spec)?;
    let top = max_stable_degree(spec);
    Ok((page.dual().truncate(top), top))
}

/// Like [`stable_cohomology_sections`] but for any `d >= hn`: only the
/// columns `i <= min(4, N)` inside the verified range are used, and the
/// result is cut at `maxDegree`. Below `N = 5` the window is small enough
/// that the missing columns could only contribute above it.
pub fn stable_cohomology_window(spec: &SurfaceSpec) -> Result<(GradedTate, i64)> {
    spec.validate()?;
    let v = section_dimension(spec)?;
    let n = cutoff(spec).clamp(0, COMPUTED_COLUMNS as i64) as usize;
    let page = VassilievPage {
        columns: page_columns(v, n),
        cutoff_n: cutoff(spec),
        spec: *spec,
        v,
        valid_bm_degree_from: 2 * v - cutoff(spec),
    };
    let top = max_stable_degree(spec);
    Ok((page.dual().truncate(top), top))
}

#[derive(Clone, Copy)]
enum Layout {
    Text,
    Latex,
}

fn offset(base: &str, k: i64, latex: bool) -> String {
    let var = if latex { "v_{d,n}" } else { "v" };
    match k.cmp(&0) {
        std::cmp::Ordering::Equal => format!("{base}{var}"),
        std::cmp::Ordering::Less => format!("{base}{var}-{}", -k),
        std::cmp::Ordering::Greater => format!("{base}{var}+{k}"),
    }
}

fn cell(col: &GradedTate, t: i64, v: i64, latex: bool) -> String {
    col.in_degree(t)
        .map(|(w, m)| {
            let twist = offset("", w - v, latex);
            match (latex, m) {
                (true, 1) => format!("$\\mathbf{{Q}}({twist})$"),
                (true, m) => format!("$\\mathbf{{Q}}({twist})^{m}$"),
                (false, 1) => format!("Q({twist})"),
                (false, m) => format!("Q({twist})^{m}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render(page: &VassilievPage, layout: Layout) -> String {
    let latex = matches!(layout, Layout::Latex);
    let v = page.v;
    let ncols = COMPUTED_COLUMNS;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for back in 3..=18 {
        let q = 2 * v - back;
        let label = if latex {
            format!("${}$", offset("2", -back, true))
        } else {
            offset("2", -back, false)
        };
        let mut row = vec![label];
        for p in 1..=ncols {
            row.push(cell(&page.column(p), q + p as i64, v, latex));
        }
        rows.push(row);
    }
    let mut out = String::new();
    if latex {
        out.push_str("\\begin{tabular}{ c|ccccc }\n");
        for row in &rows {
            let _ = writeln!(out, "\t{}&\\\\", row.join("&"));
        }
        out.push_str("\t\\hline\n\t&1&2&3&4&$\\dots$\n\\end{tabular}\n");
        return out;
    }
    let widths: Vec<usize> = (0..=ncols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0).max(1))
        .collect();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        let _ = writeln!(out, "{} | {}", line[0], line[1..].join("  ").trim_end());
    }
    let footer: Vec<String> = (1..=ncols).zip(&widths[1..]).map(|(p, w)| format!("{p:<w$}")).collect();
    let _ = writeln!(out, "{} + {}", "-".repeat(widths[0]), "-".repeat(footer.join("  ").len()));
    let _ = writeln!(out, "{} | {}  ...", " ".repeat(widths[0]), footer.join("  ").trim_end());
    out
}
