//! Randomized exact verification that singularity at `N` points imposes
//! `3N` independent conditions on sections of `O(hE_n + dF_n)`.
//!
//! Each point contributes three rows to an evaluation matrix whose columns
//! are the monomial basis of the section space:
//!
//! * a point `(x, y, z)` of `F_n \ E_n` gives the three partials of `f`;
//! * a point `[x0 : y0]` of `E_n` gives `∂α/∂x0`, `∂α/∂y0` and `β`, where
//!   `α` and `β` are the coefficients of `z^h` and `z^(h-1)`;
//! * a point of `P^1 × P^1` gives `∂/∂x0`, `∂/∂x1` and one `y`-partial.
//!
//! Coordinates are integers, so the same matrix can be ranked over `F_p` and
//! over `Q`. Trials run over `F_p` first and any rank drop is rechecked over
//! `Q`, which is the ground truth.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Field};
use crate::surface::{monomial_basis, section_dimension, Monomial, SurfaceSpec};

/// A point of `F_n` in one of the coordinate charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "chart", rename_all = "snake_case")]
pub enum SurfacePoint {
    /// `(x, y, z)` in the weighted chart; `(x, y) != (0, 0)`.
    OffE { x: i64, y: i64, z: i64 },
    /// `[x0 : y0]` on the exceptional section `E_n`.
    OnE { x0: i64, y0: i64 },
    /// `([X0 : X1], [Y0 : Y1])` on `P^1 × P^1`.
    PQ { x0: i64, x1: i64, y0: i64, y1: i64 },
}

impl SurfacePoint {
    /// Homogeneous coordinates of the fiber of the ruling through the point.
    pub fn fiber(&self) -> (i64, i64) {
        match *self {
            SurfacePoint::OffE { x, y, .. } => (x, y),
            SurfacePoint::OnE { x0, y0 } => (x0, y0),
            SurfacePoint::PQ { y0, y1, .. } => (y0, y1),
        }
    }
}

/// Whether two points of `P^1` agree, over `Q` or mod `p`.
fn same_projective(a: (i64, i64), b: (i64, i64), field: Field) -> bool {
    let lhs = BigInt::from(a.0) * b.1;
    let rhs = BigInt::from(a.1) * b.0;
    match field {
        Field::Rationals => lhs == rhs,
        Field::Prime(p) => {
            let diff: BigInt = lhs - rhs;
            (diff % BigInt::from(p)).is_zero()
        }
    }
}

/// How many points a single fiber may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Admissibility {
    /// At most one point per fiber.
    Generic,
    /// At most two points per fiber.
    Paired,
}

/// An ordered list of points together with the fibers they lie on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<SurfacePoint>,
}

impl PointConfiguration {
    pub fn new(points: Vec<SurfacePoint>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ruling_lines(&self) -> Vec<(i64, i64)> {
        self.points.iter().map(SurfacePoint::fiber).collect()
    }

    /// Checks pairwise distinctness and the per-fiber point bound.
    pub fn check_admissible(&self, spec: &SurfaceSpec, mode: Admissibility, field: Field) -> Result<()> {
        let cap = match mode {
            Admissibility::Generic => 1,
            Admissibility::Paired => 2,
        };
        for (i, p) in self.points.iter().enumerate() {
            check_chart(p, spec)?;
            let mut on_fiber = 1;
            for q in &self.points[..i] {
                if same_point(p, q, spec.n, field) {
                    return Err(Error::InvalidArgument(format!("repeated point {p:?}")));
                }
                if same_projective(p.fiber(), q.fiber(), field) {
                    on_fiber += 1;
                }
            }
            if on_fiber > cap {
                return Err(Error::InvalidArgument(format!(
                    "{on_fiber} points on the fiber of {p:?}, at most {cap} allowed"
                )));
            }
        }
        Ok(())
    }
}

fn same_point(a: &SurfacePoint, b: &SurfacePoint, n: u32, field: Field) -> bool {
    use SurfacePoint::*;
    match (*a, *b) {
        (OnE { x0, y0 }, OnE { x0: u0, y0: v0 }) => same_projective((x0, y0), (u0, v0), field),
        (PQ { x0, x1, y0, y1 }, PQ { x0: a0, x1: a1, y0: b0, y1: b1 }) => {
            same_projective((x0, x1), (a0, a1), field) && same_projective((y0, y1), (b0, b1), field)
        }
        (OffE { x, y, z }, OffE { x: u, y: v, z: w }) => {
            if !same_projective((x, y), (u, v), field) {
                return false;
            }
            // (u, v, w) = (λx, λy, λ^n z) with λ = u/x (or v/y)
            let (num, den) = if x != 0 { (u, x) } else { (v, y) };
            let lhs = BigInt::from(w) * BigInt::from(den).pow(n);
            let rhs = BigInt::from(z) * BigInt::from(num).pow(n);
            match field {
                Field::Rationals => lhs == rhs,
                Field::Prime(p) => ((lhs - rhs) % BigInt::from(p)).is_zero(),
            }
        }
        _ => false,
    }
}

fn check_chart(p: &SurfacePoint, spec: &SurfaceSpec) -> Result<()> {
    match (*p, spec.n) {
        (SurfacePoint::PQ { x0, x1, y0, y1 }, 0) => {
            if (x0, x1) == (0, 0) || (y0, y1) == (0, 0) {
                return Err(Error::BadChart(format!("{p:?} has a zero projective factor")));
            }
        }
        (SurfacePoint::OffE { x, y, .. }, n) if n > 0 => {
            if (x, y) == (0, 0) {
                return Err(Error::BadChart(format!("{p:?} lies on E_n")));
            }
        }
        (SurfacePoint::OnE { x0, y0 }, n) if n > 0 => {
            if (x0, y0) == (0, 0) {
                return Err(Error::BadChart(format!("{p:?} is not a point of E_n")));
            }
        }
        _ => {
            return Err(Error::BadChart(format!(
                "{p:?} is not a coordinate chart of F_{}",
                spec.n
            )))
        }
    }
    Ok(())
}

fn check_char(spec: &SurfaceSpec, field: Field) -> Result<()> {
    let needed = (spec.h as u64).max(spec.d as u64);
    match field {
        Field::Prime(p) if p <= needed => Err(Error::CharTooSmall { p, needed }),
        _ => Ok(()),
    }
}

/// `k · base^(exp - 1)`-style term: `coeff · Π base_i^exp_i`, zero when a
/// derivative killed the monomial.
fn term(coeff: u32, factors: &[(i64, i64)]) -> BigInt {
    if coeff == 0 || factors.iter().any(|&(_, e)| e < 0) {
        return BigInt::zero();
    }
    factors.iter().fold(BigInt::from(coeff), |acc, &(b, e)| {
        acc * BigInt::from(b).pow(e as u32)
    })
}

/// The three condition rows contributed by one point.
fn point_rows(p: &SurfacePoint, basis: &[Monomial], h: u32) -> [Vec<BigInt>; 3] {
    let mut rows: [Vec<BigInt>; 3] = Default::default();
    for m in basis {
        let vals: [BigInt; 3] = match (*p, *m) {
            (SurfacePoint::OffE { x, y, z }, Monomial::Weighted { a, b, c }) => {
                let (a, b, c) = (a as i64, b as i64, c as i64);
                [
                    term(a as u32, &[(x, a - 1), (y, b), (z, c)]),
                    term(b as u32, &[(x, a), (y, b - 1), (z, c)]),
                    term(c as u32, &[(x, a), (y, b), (z, c - 1)]),
                ]
            }
            (SurfacePoint::OnE { x0, y0 }, Monomial::Weighted { a, b, c }) => {
                let (ai, bi) = (a as i64, b as i64);
                if c == h {
                    [
                        term(a, &[(x0, ai - 1), (y0, bi)]),
                        term(b, &[(x0, ai), (y0, bi - 1)]),
                        BigInt::zero(),
                    ]
                } else if c + 1 == h {
                    [BigInt::zero(), BigInt::zero(), term(1, &[(x0, ai), (y0, bi)])]
                } else {
                    [BigInt::zero(), BigInt::zero(), BigInt::zero()]
                }
            }
            (SurfacePoint::PQ { x0, x1, y0, y1 }, Monomial::Bidegree { a0, a1, b0, b1 }) => {
                let (e0, e1, f0, f1) = (a0 as i64, a1 as i64, b0 as i64, b1 as i64);
                // Euler's relations make one y-partial redundant; drop the one
                // whose coordinate is nonzero at the point.
                let y_row = if y1 != 0 {
                    term(b0, &[(x0, e0), (x1, e1), (y0, f0 - 1), (y1, f1)])
                } else {
                    term(b1, &[(x0, e0), (x1, e1), (y0, f0), (y1, f1 - 1)])
                };
                [
                    term(a0, &[(x0, e0 - 1), (x1, e1), (y0, f0), (y1, f1)]),
                    term(a1, &[(x0, e0), (x1, e1 - 1), (y0, f0), (y1, f1)]),
                    y_row,
                ]
            }
            _ => unreachable!("chart checked before building rows"),
        };
        for (row, v) in rows.iter_mut().zip(vals) {
            row.push(v);
        }
    }
    rows
}

/// The `3N × v` evaluation matrix of `config`; its kernel is the space of
/// sections singular at every point.
pub fn evaluation_matrix(config: &PointConfiguration, spec: &SurfaceSpec, field: Field) -> Result<ExactMatrix> {
    spec.validate()?;
    check_char(spec, field)?;
    let basis = monomial_basis(spec)?;
    let mut rows = Vec::with_capacity(3 * config.len());
    for p in &config.points {
        check_chart(p, spec)?;
        rows.extend(point_rows(p, &basis, spec.h));
    }
    if rows.is_empty() {
        return Ok(ExactMatrix::zeros(0, basis.len()));
    }
    ExactMatrix::from_rows(&rows)
}

pub fn exact_rank(m: &ExactMatrix, field: Field) -> usize {
    m.rank(field)
}

/// Rank over `field`, rechecked over `Q` when it falls short of `expected`.
/// Returns the trusted rank and whether the recheck ran.
fn rank_with_escalation(m: &ExactMatrix, field: Field, expected: usize) -> (usize, bool) {
    let r = m.rank(field);
    if r >= expected || field == Field::Rationals {
        (r, false)
    } else {
        (m.rank_rational(), true)
    }
}

/// Verification mode for [`verify_codimension`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodimMode {
    /// Random points on distinct fibers; every trial must reach rank `3N`.
    Generic,
    /// All points on `E_n` below the degree bound; some trial must drop rank.
    Sharpness,
}

/// Sampling knobs for a single configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingOptions {
    /// Place every point on `E_n` (needs `n >= 1`).
    pub force_on_e: bool,
    /// Points per fiber: 1 for generic configurations, 2 for paired ones.
    pub per_fiber: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            force_on_e: false,
            per_fiber: 1,
        }
    }
}

/// Derives the seed of trial `index` from the run seed (splitmix64 mixing).
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn nonzero_pair(rng: &mut ChaCha8Rng, p: u64) -> (i64, i64) {
    loop {
        let a = rng.gen_range(0..p) as i64;
        let b = rng.gen_range(0..p) as i64;
        if (a, b) != (0, 0) {
            return (a, b);
        }
    }
}

/// Samples `count` points with coordinates uniform in `[0, p)`, `per_fiber`
/// points on each of `count / per_fiber` distinct fibers.
pub fn sample_configuration(
    spec: &SurfaceSpec,
    count: usize,
    p: u64,
    seed: u64,
    opts: SamplingOptions,
) -> Result<PointConfiguration> {
    if opts.force_on_e && spec.n == 0 {
        return Err(Error::InvalidArgument("F_0 has no exceptional section".into()));
    }
    if opts.per_fiber == 0 || !count.is_multiple_of(opts.per_fiber) {
        return Err(Error::InvalidArgument(format!(
            "{count} points cannot fill fibers with {} points each",
            opts.per_fiber
        )));
    }
    if opts.force_on_e && opts.per_fiber > 1 {
        return Err(Error::InvalidArgument("E_n meets each fiber once".into()));
    }
    let field = Field::Prime(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<SurfacePoint> = Vec::with_capacity(count);
    let mut fibers: Vec<(i64, i64)> = Vec::new();
    while points.len() < count {
        let on_e = spec.n > 0 && (opts.force_on_e || rng.gen_range(0..p) == 0);
        let fiber = nonzero_pair(&mut rng, p);
        if fibers.iter().any(|&f| same_projective(f, fiber, field)) {
            continue;
        }
        let mut group = Vec::with_capacity(opts.per_fiber);
        while group.len() < opts.per_fiber {
            let candidate = if on_e {
                SurfacePoint::OnE { x0: fiber.0, y0: fiber.1 }
            } else if spec.n == 0 {
                let (x0, x1) = nonzero_pair(&mut rng, p);
                SurfacePoint::PQ { x0, x1, y0: fiber.0, y1: fiber.1 }
            } else {
                let z = rng.gen_range(0..p) as i64;
                SurfacePoint::OffE { x: fiber.0, y: fiber.1, z }
            };
            if group.iter().any(|q| same_point(&candidate, q, spec.n, field)) {
                continue;
            }
            group.push(candidate);
        }
        fibers.push(fiber);
        points.extend(group);
    }
    Ok(PointConfiguration::new(points))
}

/// Outcome of [`verify_codimension`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    /// Trials whose matrix needed the rational recheck.
    pub escalations: u64,
    /// Wall-clock milliseconds; only filled in when timing was requested.
    pub elapsed_ms: Option<u64>,
    pub expected_rank: usize,
    pub failures: u64,
    pub field: Field,
    pub max_rank: usize,
    pub min_rank: usize,
    pub mode: CodimMode,
    #[serde(rename = "N")]
    pub points: usize,
    /// Trials with rank below `3N` over `Q`.
    pub rank_deficient: u64,
    pub seed: u64,
    pub seeds_of_failures: Vec<u64>,
    pub spec: SurfaceSpec,
    pub trials: u64,
    pub v: i64,
}

impl CodimReport {
    /// Generic mode passes with zero failures; the sharpness probe passes
    /// when at least one configuration drops rank.
    pub fn passed(&self) -> bool {
        match self.mode {
            CodimMode::Generic => self.failures == 0,
            CodimMode::Sharpness => self.rank_deficient > 0,
        }
    }
}

/// Runs `trials` seeded rank checks of the evaluation map at `points` points.
///
/// Generic mode refuses specs below `d >= 2N + hn - 1`. Sharpness mode
/// requires `n >= 1` and `d <= 2N + hn - 2`, places every point on `E_n`,
/// and ranks over `Q`.
pub fn verify_codimension(
    spec: &SurfaceSpec,
    points: usize,
    trials: u64,
    seed: u64,
    mode: CodimMode,
    field: Field,
    timed: bool,
) -> Result<CodimReport> {
    spec.validate()?;
    let start = Instant::now();
    let bound = 2 * points as i64 + spec.hn() - 1;
    let p = match field {
        Field::Prime(p) => p,
        Field::Rationals => crate::linalg::DEFAULT_PRIME,
    };
    let (opts, rank_field) = match mode {
        CodimMode::Generic => {
            if spec.d < bound {
                return Err(Error::RangeViolation(format!(
                    "d = {} is below 2N + hn - 1 = {bound}",
                    spec.d
                )));
            }
            (SamplingOptions::default(), field)
        }
        CodimMode::Sharpness => {
            if spec.n == 0 {
                return Err(Error::RangeViolation("the sharpness probe needs n >= 1".into()));
            }
            if spec.d >= bound {
                return Err(Error::RangeViolation(format!(
                    "the sharpness probe needs d < 2N + hn - 1 = {bound}, got {}",
                    spec.d
                )));
            }
            let opts = SamplingOptions {
                force_on_e: true,
                per_fiber: 1,
            };
            (opts, Field::Rationals)
        }
    };
    check_char(spec, Field::Prime(p))?;
    let expected = 3 * points;

    let outcomes: Vec<Result<(u64, usize, bool)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t);
            let config = sample_configuration(spec, points, p, s, opts)?;
            let m = evaluation_matrix(&config, spec, rank_field)?;
            let (rank, escalated) = rank_with_escalation(&m, rank_field, expected);
            Ok((s, rank, escalated))
        })
        .collect();

    let mut report = CodimReport {
        escalations: 0,
        elapsed_ms: None,
        expected_rank: expected,
        failures: 0,
        field: rank_field,
        max_rank: 0,
        min_rank: usize::MAX,
        mode,
        points,
        rank_deficient: 0,
        seed,
        seeds_of_failures: Vec::new(),
        spec: *spec,
        trials,
        v: section_dimension(spec)?,
    };
    for outcome in outcomes {
        let (s, rank, escalated) = outcome?;
        report.escalations += u64::from(escalated);
        report.min_rank = report.min_rank.min(rank);
        report.max_rank = report.max_rank.max(rank);
        if rank < expected {
            report.rank_deficient += 1;
            if mode == CodimMode::Generic {
                report.failures += 1;
                report.seeds_of_failures.push(s);
            }
        }
    }
    if trials == 0 {
        report.min_rank = 0;
    }
    if timed {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Outcome of [`paired_fiber_codimension`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedReport {
    pub codim: usize,
    /// For `h = 3`: whether every singular section is `ℓ_1⋯ℓ_k · g`, checked
    /// by comparing the kernel with the multiples of the fiber equations.
    pub divisible_by_fibers: Option<bool>,
    pub expected_codim: usize,
    /// `4(d-k) + 4 - 6n - 2k` for `h = 3`.
    pub expected_kernel_dim: Option<i64>,
    pub field: Field,
    pub k: usize,
    pub kernel_dim: usize,
    pub seed: u64,
    pub spec: SurfaceSpec,
    pub v: i64,
}

impl PairedReport {
    pub fn passed(&self) -> bool {
        self.codim == self.expected_codim
            && self.divisible_by_fibers.unwrap_or(true)
            && self
                .expected_kernel_dim
                .is_none_or(|e| e == self.kernel_dim as i64)
    }
}

/// Multiplies each basis section of degree `d - k` by the product of the
/// fiber equations, giving a `v_d × v_{d-k}` matrix.
fn fiber_multiplication(spec: &SurfaceSpec, fibers: &[(i64, i64)]) -> Result<ExactMatrix> {
    let k = fibers.len() as i64;
    let small = SurfaceSpec { d: spec.d - k, ..*spec };
    let source = monomial_basis(&small)?;
    let target = monomial_basis(spec)?;
    // product of ℓ_i = y_i·s - x_i·t as a polynomial in (s, t), by s-degree
    let mut product: Vec<BigInt> = vec![BigInt::one()];
    for &(xi, yi) in fibers {
        let mut next = vec![BigInt::zero(); product.len() + 1];
        for (j, c) in product.iter().enumerate() {
            next[j + 1] += c * BigInt::from(yi);
            next[j] -= c * BigInt::from(xi);
        }
        product = next;
    }
    let index = |m: &Monomial| target.iter().position(|t| t == m).expect("target monomial");
    let mut out = ExactMatrix::zeros(target.len(), source.len());
    for (col, m) in source.iter().enumerate() {
        for (j, c) in product.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, rest) = (j as u32, k as u32 - j as u32);
            let shifted = match *m {
                Monomial::Weighted { a, b, c } => Monomial::Weighted { a: a + j, b: b + rest, c },
                Monomial::Bidegree { a0, a1, b0, b1 } => Monomial::Bidegree {
                    a0,
                    a1,
                    b0: b0 + j,
                    b1: b1 + rest,
                },
            };
            let row = index(&shifted);
            let value = out.get(row, col) + c;
            out.set(row, col, value);
        }
    }
    Ok(out)
}

fn multiply(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = BigInt::zero();
            for l in 0..a.cols() {
                if !a.get(i, l).is_zero() && !b.get(l, j).is_zero() {
                    acc += a.get(i, l) * b.get(l, j);
                }
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Checks the codimension `6k` of sections singular at `k` pairs of points,
/// each pair on its own fiber.
///
/// Requires `d >= (3/2)(k + n) - 1`, where the space of such sections is
/// nonempty.
pub fn paired_fiber_codimension(spec: &SurfaceSpec, k: usize, field: Field, seed: u64) -> Result<PairedReport> {
    spec.validate()?;
    if 2 * spec.d < 3 * (k as i64 + spec.n as i64) - 2 {
        return Err(Error::RangeViolation(format!(
            "d = {} is below (3/2)(k + n) - 1 for k = {k}",
            spec.d
        )));
    }
    let p = match field {
        Field::Prime(p) => p,
        Field::Rationals => crate::linalg::DEFAULT_PRIME,
    };
    check_char(spec, Field::Prime(p))?;
    let opts = SamplingOptions {
        force_on_e: false,
        per_fiber: 2,
    };
    let config = sample_configuration(spec, 2 * k, p, seed, opts)?;
    config.check_admissible(spec, Admissibility::Paired, Field::Prime(p))?;
    let m = evaluation_matrix(&config, spec, field)?;
    let expected = 6 * k;
    let (rank, escalated) = rank_with_escalation(&m, field, expected);
    let used = if escalated { Field::Rationals } else { field };
    let v = section_dimension(spec)?;
    let kernel_dim = m.cols() - rank;
    assert_eq!(rank + kernel_dim, v as usize);

    let (expected_kernel_dim, divisible_by_fibers) = if spec.h == 3 {
        let closed = 4 * (spec.d - k as i64) + 4 - 6 * spec.n as i64 - 2 * k as i64;
        let fibers: Vec<(i64, i64)> = config.points.iter().step_by(2).map(SurfacePoint::fiber).collect();
        let lift = fiber_multiplication(spec, &fibers)?;
        let restricted = multiply(&m, &lift);
        // dim of {L·g : L·g singular at the points} inside the kernel
        let inside = lift.cols() - restricted.rank(used);
        let inside = if inside > kernel_dim { lift.cols() - restricted.rank_rational() } else { inside };
        (Some(closed), Some(inside == kernel_dim))
    } else {
        (None, None)
    };

    Ok(PairedReport {
        codim: rank,
        divisible_by_fibers,
        expected_codim: expected,
        expected_kernel_dim,
        field: used,
        k,
        kernel_dim,
        seed,
        spec: *spec,
        v,
    })
}
