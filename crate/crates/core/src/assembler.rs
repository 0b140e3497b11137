//! The spectral sequence of the Maroni stratification of `T_g` (or of its
//! `SL_2`-cover `T_g^†`) in Borel–Moore homology, twisted so that the
//! fundamental class sits in degree 0.
//!
//! The stratum `N_n` with index `k` (ascending `n`) sits in column `p = -k`.
//! A class of `H^j(N_n)` of weight `ω` lands at `q = -(j + 2c) + k` with
//! weight `ω - c`, where `c` is the codimension. All differentials between
//! classes of equal weight in adjacent total degrees have rank one, so the
//! limit is read off from a maximum matching.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::GradedTate;
use crate::quotient::{framed_stratum_cohomology_window, framed_window, stratum_cohomology_window, stratum_window};
use crate::surface::{maroni_strata, StratumInfo};

/// Smallest genus for which every stratum is handled by the pipeline.
pub const MIN_GENUS: i64 = 8;

/// One column of the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaroniColumn {
    /// `H^•(N_n)` (or `H^•(N_n^†)`) through `window`.
    pub cohomology: GradedTate,
    /// Entries keyed by `(q, weight)`.
    pub entries: GradedTate,
    pub p: i64,
    pub stratum: StratumInfo,
    /// Top cohomological degree known for the stratum.
    pub window: i64,
}

impl MaroniColumn {
    /// Lowest total degree `p + q` at which the column is fully known.
    pub fn known_from_total(&self) -> i64 {
        -(self.window + 2 * self.stratum.codim)
    }

    /// Lowest `q` at which the column is fully known.
    pub fn known_from_q(&self) -> i64 {
        self.known_from_total() - self.p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaroniTable {
    pub columns: Vec<MaroniColumn>,
    pub framed: bool,
    pub g: i64,
    /// `W = min_k(window_k + 2c_k)`: every column is known in total degrees
    /// `>= -W`.
    pub stable_window: i64,
}

impl MaroniTable {
    /// All entries as `(p, q, weight, mult)`.
    pub fn cells(&self) -> Vec<(i64, i64, i64, u64)> {
        self.columns
            .iter()
            .flat_map(|col| col.entries.iter().map(move |c| (col.p, c.degree, c.weight, c.mult)))
            .collect()
    }

    pub fn render_text(&self, q_min: i64) -> String {
        render(self, q_min, false)
    }

    pub fn render_latex(&self, q_min: i64) -> String {
        render(self, q_min, true)
    }
}

fn require_genus(g: i64) -> Result<()> {
    if g < MIN_GENUS {
        return Err(Error::RangeViolation(format!("genus {g} is below {MIN_GENUS}")));
    }
    Ok(())
}

/// Places the stratum cohomologies of `T_g` (or `T_g^†`) into the table.
pub fn build_maroni_table(g: i64, framed: bool) -> Result<MaroniTable> {
    require_genus(g)?;
    let strata = maroni_strata(g)?;
    let mut columns = Vec::with_capacity(strata.len());
    for (k, stratum) in strata.into_iter().enumerate() {
        let k = k as i64;
        let (cohomology, window) = if framed {
            let w = framed_window(stratum.n, g)?;
            (framed_stratum_cohomology_window(stratum.n, g)?.0, w)
        } else {
            let w = stratum_window(stratum.n, g)?;
            (stratum_cohomology_window(stratum.n, g)?.0, w)
        };
        let c = stratum.codim;
        let mut entries = GradedTate::zero();
        for class in cohomology.iter() {
            entries.add(-(class.degree + 2 * c) + k, class.weight - c, class.mult);
        }
        columns.push(MaroniColumn {
            cohomology,
            entries,
            p: -k,
            stratum,
            window,
        });
    }
    let stable_window = columns
        .iter()
        .map(|col| col.window + 2 * col.stratum.codim)
        .min()
        .expect("every genus has a stratum");
    Ok(MaroniTable {
        columns,
        framed,
        g,
        stable_window,
    })
}

/// A table position with its weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub p: i64,
    pub q: i64,
    pub weight: i64,
}

impl Cell {
    pub fn total(&self) -> i64 {
        self.p + self.q
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    /// `(source, target)` of each rank-one differential.
    pub pairs: Vec<(Cell, Cell)>,
    pub stable_window: i64,
    /// Surviving classes by total degree `p + q`, for totals `> -W`.
    pub survivors: GradedTate,
}

/// Whether a differential can run from `a` to `b`: `d^1: (p, q) → (p-1, q)`
/// or `d^2: (p, q) → (p-2, q+1)`, between classes of equal weight.
pub fn differential_between(a: &Cell, b: &Cell) -> bool {
    a.weight == b.weight && ((b.p, b.q) == (a.p - 1, a.q) || (b.p, b.q) == (a.p - 2, a.q + 1))
}

struct Search<'a> {
    nodes: &'a [Cell],
    matched: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: usize,
    best_pairs: Vec<(usize, usize)>,
    survivor_sets: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, from: usize) {
        let Some(i) = (from..self.nodes.len()).find(|&i| !self.matched[i]) else {
            self.record();
            return;
        };
        // prune: even matching all remaining nodes cannot reach the best size
        let free = self.matched.iter().filter(|m| !**m).count();
        if self.current.len() + free / 2 < self.best {
            return;
        }
        self.matched[i] = true;
        for j in i + 1..self.nodes.len() {
            if self.matched[j] {
                continue;
            }
            let (a, b) = (&self.nodes[i], &self.nodes[j]);
            let pair = if differential_between(a, b) {
                Some((i, j))
            } else if differential_between(b, a) {
                Some((j, i))
            } else {
                None
            };
            if let Some(pair) = pair {
                self.matched[j] = true;
                self.current.push(pair);
                self.run(i + 1);
                self.current.pop();
                self.matched[j] = false;
            }
        }
        self.matched[i] = false;
        // leave node i unmatched
        self.matched[i] = true;
        self.run(i + 1);
        self.matched[i] = false;
    }

    fn record(&mut self) {
        let size = self.current.len();
        if size < self.best {
            return;
        }
        let mut used = vec![false; self.nodes.len()];
        for &(a, b) in &self.current {
            used[a] = true;
            used[b] = true;
        }
        let survivors: Vec<usize> = (0..self.nodes.len()).filter(|&i| !used[i]).collect();
        if size > self.best {
            self.best = size;
            self.best_pairs = self.current.clone();
            self.survivor_sets.clear();
        }
        self.survivor_sets.push(survivors);
    }
}

/// Cancels classes in rank-one pairs and reports what survives.
///
/// Classes with total degree `>= -W` take part; within each weight a maximum
/// matching along `d^1`/`d^2` is chosen. Survivors in totals `> -W` must be
/// the same for every maximum matching, otherwise the cancellation pattern
/// is not determined and [`Error::MatchingFailure`] is returned.
pub fn cancel_and_extract(table: &MaroniTable) -> Result<CancellationReport> {
    let w = table.stable_window;
    let mut by_weight: BTreeMap<i64, Vec<Cell>> = BTreeMap::new();
    for (p, q, weight, mult) in table.cells() {
        if p + q < -w {
            continue;
        }
        for _ in 0..mult {
            by_weight.entry(weight).or_default().push(Cell { p, q, weight });
        }
    }
    let mut pairs = Vec::new();
    let mut survivors = GradedTate::zero();
    for (weight, mut nodes) in by_weight.into_iter().rev() {
        nodes.sort_by(|a, b| b.cmp(a));
        let mut search = Search {
            nodes: &nodes,
            matched: vec![false; nodes.len()],
            current: Vec::new(),
            best: 0,
            best_pairs: Vec::new(),
            survivor_sets: Vec::new(),
        };
        search.run(0);
        let visible = |set: &Vec<usize>| -> Vec<i64> {
            let mut t: Vec<i64> = set.iter().map(|&i| nodes[i].total()).filter(|&t| t > -w).collect();
            t.sort_unstable();
            t
        };
        let first = visible(&search.survivor_sets[0]);
        if search.survivor_sets.iter().any(|s| visible(s) != first) {
            return Err(Error::MatchingFailure(format!(
                "weight {weight} in genus {}: survivors depend on the choice of matching",
                table.g
            )));
        }
        for t in first {
            survivors.add(t, weight, 1);
        }
        let mut chosen: Vec<(Cell, Cell)> = search.best_pairs.iter().map(|&(a, b)| (nodes[a], nodes[b])).collect();
        chosen.sort();
        pairs.extend(chosen);
    }
    for (a, b) in &pairs {
        debug_assert!(differential_between(a, b) && a.total() == b.total() + 1 && b.p < a.p);
    }
    Ok(CancellationReport {
        pairs,
        stable_window: w,
        survivors,
    })
}

/// Range in which the stable answer holds: `i < bound` when `strict`,
/// `i <= bound` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableRange {
    pub bound: i64,
    /// The unrounded minimum, as `(numerator, denominator)` in lowest terms.
    pub exact: (i64, i64),
    pub strict: bool,
}

impl StableRange {
    pub fn contains(&self, i: i64) -> bool {
        if self.strict {
            i < self.bound
        } else {
            i <= self.bound
        }
    }

    /// Largest degree inside the range.
    pub fn top(&self) -> i64 {
        if self.strict {
            self.bound - 1
        } else {
            self.bound
        }
    }
}

/// `min_n [2·codim N_n + (g - 3n + 4)/4] - 1` as an exact rational.
pub fn stable_range_exact(g: i64) -> Result<Ratio<i64>> {
    require_genus(g)?;
    let strata = maroni_strata(g)?;
    let exact = strata
        .iter()
        .map(|s| Ratio::from_integer(2 * s.codim) + Ratio::new(g - 3 * s.n + 4, 4))
        .min()
        .expect("every genus has a stratum")
        - 1;
    let expected = if g % 2 == 0 { Ratio::new(g, 4) } else { Ratio::new(g - 3, 4) };
    if exact != expected {
        return Err(Error::Inconsistent(format!(
            "stable range for genus {g} is {exact}, expected {expected}"
        )));
    }
    Ok(exact)
}

/// The stable range of `T_g`: `i < R` for the exact minimum `R`. For even
/// `g` this is `i <= ⌊R⌋` when `R` is not an integer; for odd `g` the bound
/// is `i < ⌊R⌋`. For `T_g^†` the range is `i < ⌊g/4⌋`.
pub fn stable_range(g: i64, framed: bool) -> Result<StableRange> {
    let exact = stable_range_exact(g)?;
    if framed {
        return Ok(StableRange {
            bound: g.div_euclid(4),
            exact: (g.div_euclid(4), 1),
            strict: true,
        });
    }
    Ok(StableRange {
        bound: exact.floor().to_integer(),
        exact: (*exact.numer(), *exact.denom()),
        strict: exact.is_integer() || g % 2 != 0,
    })
}

/// End-to-end stable cohomology of `T_g` or `T_g^†`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableCohomology {
    pub cancellation: CancellationReport,
    pub classes: GradedTate,
    pub framed: bool,
    pub g: i64,
    pub range: StableRange,
}

pub fn stable_cohomology(g: i64, framed: bool) -> Result<StableCohomology> {
    let table = build_maroni_table(g, framed)?;
    let cancellation = cancel_and_extract(&table)?;
    let range = stable_range(g, framed)?;
    // survivors are trustworthy for i < W
    if range.top() >= table.stable_window {
        return Err(Error::RangeViolation(format!(
            "stable range reaches degree {} but the strata are only known below {}",
            range.top(),
            table.stable_window
        )));
    }
    let mut classes = GradedTate::zero();
    for c in cancellation.survivors.iter() {
        let i = -c.degree;
        if range.contains(i) {
            classes.add(i, c.weight, c.mult);
        }
    }
    Ok(StableCohomology {
        cancellation,
        classes,
        framed,
        g,
        range,
    })
}

fn render(table: &MaroniTable, q_min: i64, latex: bool) -> String {
    let cols: Vec<&MaroniColumn> = table.columns.iter().rev().collect();
    let dagger = if table.framed { if latex { "^\\dagger" } else { "†" } } else { "" };
    let q_class = |w: i64, m: u64| -> String {
        let base = match (latex, w) {
            (true, 0) => "$\\mathbf{Q}$".to_string(),
            (true, w) => format!("$\\mathbf{{Q}}({w})$"),
            (false, 0) => "Q".to_string(),
            (false, w) => format!("Q({w})"),
        };
        if m == 1 {
            base
        } else {
            format!("{m}{base}")
        }
    };
    let mut rows: Vec<Vec<String>> = Vec::new();
    let header: Vec<String> = cols
        .iter()
        .map(|c| {
            if latex {
                format!("$N{dagger}_{{{}}}$", c.stratum.n)
            } else {
                format!("N{dagger}_{}", c.stratum.n)
            }
        })
        .collect();
    let labels: Vec<String> = cols.iter().map(|c| if latex { format!("${}$", c.p) } else { c.p.to_string() }).collect();
    for q in (q_min..=0).rev() {
        let mut row: Vec<String> = cols
            .iter()
            .map(|c| {
                if q < c.known_from_q() {
                    return if latex { "$\\dots$".into() } else { "...".into() };
                }
                c.entries
                    .in_degree(q)
                    .map(|(w, m)| q_class(w, m))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        row.push(if latex { format!("${q}$") } else { q.to_string() });
        rows.push(row);
    }
    let mut out = String::new();
    if latex {
        let _ = writeln!(out, "\\begin{{tabular}}{{ {}|c}}", "c".repeat(cols.len()));
        let _ = writeln!(out, "\t{}&\\\\", header.join("&"));
        let _ = writeln!(out, "\t{}&\\\\", labels.join("&"));
        out.push_str("\t\\hline\n");
        for row in &rows {
            let _ = writeln!(out, "\t{}\\\\", row.join("&"));
        }
        out.push_str("\\end{tabular}\n");
        return out;
    }
    let n = cols.len();
    let widths: Vec<usize> = (0..n)
        .map(|i| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([header[i].chars().count(), labels[i].chars().count()])
                .max()
                .unwrap_or(1)
        })
        .collect();
    let line = |cells: &[String], tail: &str| -> String {
        let body: Vec<String> = cells.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        format!("{} | {tail}", body.join("  "))
    };
    let _ = writeln!(out, "{}", line(&header, "").trim_end());
    let _ = writeln!(out, "{}", line(&labels, "").trim_end());
    let total: usize = widths.iter().sum::<usize>() + 2 * n.saturating_sub(1);
    let _ = writeln!(out, "{}-+----", "-".repeat(total));
    for row in &rows {
        let _ = writeln!(out, "{}", line(&row[..n], &row[n]));
    }
    out
}
