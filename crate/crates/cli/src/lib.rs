//! Argument parsing, dispatch and output formatting for the `trigonal` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use trigonal_core::assembler::{build_maroni_table, stable_cohomology, Cell, StableCohomology};
use trigonal_core::chow::{euler_ranks, ideal_generators, truncated_quotient_dims, EulerRanks, TschirnhausenIdeal};
use trigonal_core::confspace::{twisted_bm_config, CellStratification};
use trigonal_core::evalmap::{paired_fiber_codimension, verify_codimension, CodimMode};
use trigonal_core::quotient::{
    framed_stratum_cohomology, render_gysin_latex, render_gysin_text, solve_circle_gysin, stratum_cohomology,
    x_mod_gl2_window,
};
use trigonal_core::vassiliev::e1_page;
use trigonal_core::{Error, Field, GradedTate, StratumInfo, SurfaceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RANGE: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;

/// Rows shown when rendering the Maroni table.
const TABLE_DEPTH: i64 = -13;

const CONFIGURATION: &str =
    "configuration spaces: only square-free distributions of points over the cells contribute";
const E1_DEGENERATION: &str = "Vassiliev spectral sequence: no differentials leave the E1 page in the stable range";
const LERAY_HIRSCH: &str = "Leray-Hirsch: the orbit map restricts surjectively in cohomology";
const RANK_ONE: &str = "Maroni stratification: differentials between classes of equal weight have rank one";

#[derive(Debug, Parser)]
#[command(name = "trigonal", version, about = "Stable cohomology of trigonal curve moduli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
    Latex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stable cohomology of T_g, with the Maroni table.
    Stable(GenusArgs),
    /// Stable cohomology of the SL_2-cover of T_g.
    Framed(GenusArgs),
    /// Cohomology of a single Maroni stratum.
    Stratum(StratumArgs),
    /// E1 page of the Vassiliev spectral sequence for |hE_n + dF_n|.
    #[command(name = "e1-page")]
    E1Page(SurfaceArgs),
    /// Rank of the evaluation map at sampled point configurations.
    #[command(name = "verify-codim")]
    VerifyCodim(CodimArgs),
    /// Graded pieces of the Chow ring presentation of a stratum.
    Chow(ChowArgs),
    /// Twisted Borel-Moore homology of unordered configuration spaces.
    Confspace(ConfArgs),
}

#[derive(Debug, Args)]
pub struct GenusArgs {
    #[arg(long)]
    pub genus: i64,
}

#[derive(Debug, Args)]
pub struct StratumArgs {
    #[arg(long)]
    pub genus: i64,
    #[arg(long)]
    pub n: i64,
    /// Cohomology of the SL_2-cover of the stratum.
    #[arg(long)]
    pub framed: bool,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub h: u32,
    #[arg(long)]
    pub d: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Generic,
    Sharpness,
    Paired,
}

#[derive(Debug, Args)]
pub struct CodimArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Number of points (generic and sharpness modes).
    #[arg(long = "N")]
    pub points: Option<usize>,
    /// Number of fibers carrying two points (paired mode).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Generic)]
    pub mode: Mode,
    /// Finite field for the ranks; generic mode escalates to Q on failure.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timed: bool,
}

#[derive(Debug, Args)]
pub struct ChowArgs {
    #[arg(long)]
    pub genus: i64,
    #[arg(long)]
    pub n: i64,
    /// Highest degree of the quotient to compute.
    #[arg(long = "degree", default_value_t = 2)]
    pub degree: u32,
}

#[derive(Debug, Args)]
pub struct ConfArgs {
    /// Complex dimensions of the affine cells, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,1,1,0")]
    pub cells: Vec<u32>,
    #[arg(long)]
    pub k: usize,
}

/// A JSON document as emitted by every subcommand.
#[derive(Debug, Serialize)]
pub struct Document<T: Serialize> {
    pub assumptions: Vec<&'static str>,
    pub command: &'static str,
    pub parameters: BTreeMap<&'static str, Value>,
    pub result: T,
}

/// What a subcommand printed and the status to exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stderr: String,
    pub stdout: String,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_consistency_failure() {
        EXIT_CONSISTENCY
    } else {
        EXIT_RANGE
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok((stdout, code)) => Outcome {
            code,
            stderr: String::new(),
            stdout,
        },
        Err(err) => Outcome {
            code: exit_code(&err),
            stderr: format!("error: {err}\n"),
            stdout: String::new(),
        },
    }
}

fn json<T: Serialize>(
    command: &'static str,
    assumptions: &[&'static str],
    parameters: BTreeMap<&'static str, Value>,
    result: &T,
) -> String {
    let doc = Document {
        assumptions: assumptions.to_vec(),
        command,
        parameters,
        result,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
    s.push('\n');
    s
}

macro_rules! params {
    ($($k:literal => $v:expr),* $(,)?) => {{
        let mut m = BTreeMap::new();
        $(m.insert($k, serde_json::json!($v));)*
        m
    }};
}

fn dispatch(cli: &Cli) -> trigonal_core::Result<(String, i32)> {
    let out = cli.output;
    match &cli.command {
        Command::Stable(a) => stable(a.genus, false, out),
        Command::Framed(a) => stable(a.genus, true, out),
        Command::Stratum(a) => stratum(a, out),
        Command::E1Page(a) => {
            let spec = SurfaceSpec::new(a.n, a.h, a.d)?;
            let page = e1_page(&spec)?;
            let text = match out {
                Output::Json => json("e1-page", &[CONFIGURATION], params!("n" => a.n, "h" => a.h, "d" => a.d), &page),
                Output::Text => page.render_text(),
                Output::Latex => page.render_latex(),
            };
            Ok((text, EXIT_OK))
        }
        Command::VerifyCodim(a) => verify(a, out),
        Command::Chow(a) => chow(a, out),
        Command::Confspace(a) => {
            let cells = CellStratification::new(a.cells.clone())?;
            let h = twisted_bm_config(&cells, a.k);
            let text = match out {
                Output::Json => json("confspace", &[CONFIGURATION], params!("cells" => a.cells, "k" => a.k), &h),
                Output::Text => format!("{h}\n"),
                Output::Latex => latex_classes(&h),
            };
            Ok((text, EXIT_OK))
        }
    }
}

#[derive(Debug, Serialize)]
struct StableResult<'a> {
    bound: i64,
    cancellations: &'a [(Cell, Cell)],
    classes: &'a GradedTate,
    /// Unrounded bound as `[numerator, denominator]`.
    exact_bound: [i64; 2],
    genus: i64,
    stable_window: i64,
    strict: bool,
    survivors: &'a GradedTate,
}

fn stable_result(s: &StableCohomology) -> StableResult<'_> {
    StableResult {
        bound: s.range.bound,
        cancellations: &s.cancellation.pairs,
        classes: &s.classes,
        exact_bound: [s.range.exact.0, s.range.exact.1],
        genus: s.g,
        stable_window: s.cancellation.stable_window,
        strict: s.range.strict,
        survivors: &s.cancellation.survivors,
    }
}

fn range_text(bound: i64, strict: bool) -> String {
    if strict {
        format!("i < {bound}")
    } else {
        format!("i <= {bound}")
    }
}

fn stable(g: i64, framed: bool, out: Output) -> trigonal_core::Result<(String, i32)> {
    let s = stable_cohomology(g, framed)?;
    let name = if framed { "framed" } else { "stable" };
    let text = match out {
        Output::Json => json(
            name,
            &[CONFIGURATION, E1_DEGENERATION, LERAY_HIRSCH, RANK_ONE],
            params!("genus" => g),
            &stable_result(&s),
        ),
        Output::Text => {
            let table = build_maroni_table(g, framed)?;
            let space = if framed { "T_g†" } else { "T_g" };
            let mut t = String::new();
            let _ = writeln!(t, "H^i({space}), g = {g}, {}: {}", range_text(s.range.bound, s.range.strict), s.classes);
            let _ = writeln!(t);
            t.push_str(&table.render_text(TABLE_DEPTH));
            let _ = writeln!(t);
            for (a, b) in &s.cancellation.pairs {
                let _ = writeln!(t, "({}, {}) -> ({}, {})  Q({})", a.p, a.q, b.p, b.q, a.weight);
            }
            t
        }
        Output::Latex => build_maroni_table(g, framed)?.render_latex(TABLE_DEPTH),
    };
    Ok((text, EXIT_OK))
}

#[derive(Debug, Serialize)]
struct StratumResult<'a> {
    classes: &'a GradedTate,
    codim: i64,
    dim: i64,
    framed: bool,
    genus: i64,
    max_degree: i64,
    n: i64,
}

fn stratum(a: &StratumArgs, out: Output) -> trigonal_core::Result<(String, i32)> {
    let info = StratumInfo::new(a.genus, a.n)?;
    let (classes, top) = if a.framed {
        framed_stratum_cohomology(a.n, a.genus)?
    } else {
        stratum_cohomology(a.n, a.genus)?
    };
    let result = StratumResult {
        classes: &classes,
        codim: info.codim,
        dim: info.dim,
        framed: a.framed,
        genus: a.genus,
        max_degree: top,
        n: a.n,
    };
    let gysin = || -> trigonal_core::Result<Option<_>> {
        if a.n == 0 || a.framed {
            return Ok(None);
        }
        let (quotient, _) = x_mod_gl2_window(&info.surface())?;
        Ok(Some(solve_circle_gysin(&quotient.truncate(top), &euler_ranks(a.genus, a.n)?, top)?))
    };
    let text = match out {
        Output::Json => json(
            "stratum",
            &[CONFIGURATION, E1_DEGENERATION, LERAY_HIRSCH],
            params!("genus" => a.genus, "n" => a.n, "framed" => a.framed),
            &result,
        ),
        Output::Text => {
            let mut t = format!("H^i(N_{}), g = {}, i <= {top}: {classes}\n", a.n, a.genus);
            if let Some(s) = gysin()? {
                t.push('\n');
                t.push_str(&render_gysin_text(&s));
            }
            t
        }
        Output::Latex => match gysin()? {
            Some(s) => render_gysin_latex(&s),
            None => latex_classes(&classes),
        },
    };
    Ok((text, EXIT_OK))
}

fn verify(a: &CodimArgs, out: Output) -> trigonal_core::Result<(String, i32)> {
    let spec = SurfaceSpec::new(a.surface.n, a.surface.h, a.surface.d)?;
    let field = match a.prime {
        Some(p) => Field::prime(p)?,
        None => Field::default_prime(),
    };
    if out == Output::Latex {
        return Err(Error::InvalidArgument("verify-codim has no LaTeX output".into()));
    }
    let base = params!(
        "n" => spec.n,
        "h" => spec.h,
        "d" => spec.d,
        "seed" => a.seed,
        "mode" => format!("{:?}", a.mode).to_lowercase(),
        "field" => field,
    );
    let (text, passed) = match a.mode {
        Mode::Paired => {
            let k = a.k.ok_or_else(|| Error::InvalidArgument("paired mode needs --k".into()))?;
            let r = paired_fiber_codimension(&spec, k, field, a.seed)?;
            let mut p = base;
            p.insert("k", k.into());
            let text = match out {
                Output::Json => json("verify-codim", &[], p, &r),
                _ => format!(
                    "paired fibers: k = {k}, codimension {} (expected {}), kernel {}\n",
                    r.codim, r.expected_codim, r.kernel_dim
                ),
            };
            (text, r.passed())
        }
        Mode::Generic | Mode::Sharpness => {
            let points = a.points.ok_or_else(|| Error::InvalidArgument("--N is required".into()))?;
            let mode = if a.mode == Mode::Generic { CodimMode::Generic } else { CodimMode::Sharpness };
            let r = verify_codimension(&spec, points, a.trials, a.seed, mode, field, a.timed)?;
            let mut p = base;
            p.insert("N", points.into());
            p.insert("trials", a.trials.into());
            let text = match out {
                Output::Json => json("verify-codim", &[], p, &r),
                _ => format!(
                    "N = {points}, v = {}: rank {}..{} of {} over {} trials, {} failures, {} escalations\n",
                    r.v, r.min_rank, r.max_rank, r.expected_rank, r.trials, r.failures, r.escalations
                ),
            };
            (text, r.passed())
        }
    };
    Ok((text, if passed { EXIT_OK } else { EXIT_CONSISTENCY }))
}

#[derive(Debug, Serialize)]
struct ChowResult<'a> {
    dims: &'a [usize],
    euler_ranks: &'a EulerRanks,
    ideal: &'a TschirnhausenIdeal,
}

fn chow(a: &ChowArgs, out: Output) -> trigonal_core::Result<(String, i32)> {
    let ideal = ideal_generators(a.genus, a.n)?;
    let dims = truncated_quotient_dims(&ideal, a.degree);
    let ranks = euler_ranks(a.genus, a.n)?;
    let text = match out {
        Output::Json => json(
            "chow",
            &[],
            params!("genus" => a.genus, "n" => a.n, "degree" => a.degree),
            &ChowResult {
                dims: &dims,
                euler_ranks: &ranks,
                ideal: &ideal,
            },
        ),
        Output::Text => {
            let mut t = format!("N_{} in genus {}: (a, b) = ({}, {})\n", a.n, a.genus, ideal.a, ideal.b);
            for (i, gen) in ideal.generators.iter().enumerate() {
                let _ = writeln!(t, "f{} = {gen}", i + 1);
            }
            let dims: Vec<String> = dims.iter().map(ToString::to_string).collect();
            let _ = writeln!(t, "dim A^t for t = 0..{}: {}", a.degree, dims.join(", "));
            t
        }
        Output::Latex => {
            let mut t = String::from("\\begin{tabular}{c|c}\n\t$t$&$\\dim A^t$\\\\\n\t\\hline\n");
            for (i, d) in dims.iter().enumerate() {
                let _ = writeln!(t, "\t${i}$&${d}$\\\\");
            }
            t.push_str("\\end{tabular}\n");
            t
        }
    };
    Ok((text, EXIT_OK))
}

/// One row per degree: `$i$&$\mathbf{Q}(w)\oplus\dots$\\`.
pub fn latex_classes(h: &GradedTate) -> String {
    let mut t = String::from("\\begin{tabular}{c|l}\n");
    let mut degrees: Vec<i64> = h.iter().map(|c| c.degree).collect();
    degrees.dedup();
    for d in degrees {
        let cells: Vec<String> = h
            .in_degree(d)
            .map(|(w, m)| {
                let q = if w == 0 { "\\mathbf{Q}".to_string() } else { format!("\\mathbf{{Q}}({w})") };
                if m == 1 {
                    q
                } else {
                    format!("{q}^{{{m}}}")
                }
            })
            .collect();
        let _ = writeln!(t, "\t${d}$&${}$\\\\", cells.join("\\oplus "));
    }
    t.push_str("\\end{tabular}\n");
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("trigonal").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn confspace_text() {
        let o = run(&parse(&["confspace", "--cells", "2,1,1,0", "--k", "3"]));
        assert_eq!(o.stdout, "deg 4: Q(2); deg 6: 2Q(3); deg 8: Q(4)\n");
        assert_eq!(o.code, EXIT_OK);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&parse(&["stable", "--genus", "6"])).code, EXIT_RANGE);
        assert_eq!(run(&parse(&["stratum", "--genus", "5", "--n", "1"])).code, EXIT_RANGE);
        assert_eq!(exit_code(&Error::MatchingFailure(String::new())), EXIT_CONSISTENCY);
        assert_eq!(exit_code(&Error::NotDivisible(String::new())), EXIT_CONSISTENCY);
        assert_eq!(exit_code(&Error::InvalidSpec(String::new())), EXIT_RANGE);
    }

    #[test]
    fn paired_needs_k() {
        let o = run(&parse(&["verify-codim", "--n", "0", "--d", "5", "--mode", "paired"]));
        assert_eq!(o.code, EXIT_RANGE);
        assert!(o.stderr.contains("--k"));
    }

    #[test]
    fn latex_class_rows() {
        let h = GradedTate::from_entries([(0, 0, 1), (6, 3, 2)]);
        assert_eq!(
            latex_classes(&h),
            "\\begin{tabular}{c|l}\n\t$0$&$\\mathbf{Q}$\\\\\n\t$6$&$\\mathbf{Q}(3)^{2}$\\\\\n\\end{tabular}\n"
        );
    }
}
