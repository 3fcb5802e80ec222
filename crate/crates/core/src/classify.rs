//! Finite-truncation convergence classifiers for double series and double
//! sequences.
//!
//! A numeric classifier cannot decide limits, so every verdict here is
//! trinary and carries the truncation caps it was computed at. The scheme is
//! shared by all classifiers: deviations are measured past a ladder of
//! geometrically spaced threshold candidates κ; the verdict is
//!
//! * `Converges` at the smallest κ whose tail deviation falls below ε,
//! * `Diverges` when every probed κ shows a deviation above ε **and** the
//!   deviation does not shrink across at least three candidates (this
//!   separates genuine oscillation from slow convergence),
//! * `Inconclusive` otherwise.
//!
//! Pringsheim convergence is probed on the region min{m,n} > κ, regular
//! convergence on rectangular block sums anchored at max{m,n} > κ
//! (including all single-row and single-column strips, which is what makes
//! regular convergence imply convergence of every row and column series),
//! and absolute convergence on tails and growth windows of the monotone
//! table of Σ |a_{j,k}|.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::series::{abs_partial_sum, PrefixSumTable, SeriesError, TermSource};
use crate::verdict::{dec, Status, Verdict, Witness};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fraction by which the tail deviation must drop between the first and the
/// last κ candidate for a non-convergent scan to still count as "shrinking"
/// (and therefore stay Inconclusive rather than Diverges).
const SHRINK_FACTOR: f64 = 0.5;

/// Minimum number of κ candidates a divergence verdict must persist across.
const PERSISTENCE: usize = 3;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("invalid classifier configuration: {0}")]
    InvalidConfig(String),
    #[error("{op} requires regular convergence (classifier returned {:?})", verdict.status)]
    PreconditionNotMet { op: &'static str, verdict: Verdict },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassifierConfig {
    /// Target ε of the defining inequalities.
    #[serde(serialize_with = "dec::f64_str")]
    pub eps: f64,
    /// Smallest threshold candidate.
    pub probe_floor: usize,
    pub cap_m: usize,
    pub cap_n: usize,
    /// Number of random block probes for the regular classifier.
    pub sample_budget: usize,
    pub seed: u64,
    /// Running absolute total above this bound is reported as divergence.
    #[serde(serialize_with = "dec::f64_str")]
    pub blowup_bound: f64,
    /// Largest row/column index examined by [`row_col_verdicts`]; rows and
    /// columns whose action sits at the truncation horizon cannot be told
    /// apart from divergent ones, so callers keep this inside the caps.
    /// `None` examines everything up to the caps.
    pub report_range: Option<usize>,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            eps: 1e-2,
            probe_floor: 4,
            cap_m: 128,
            cap_n: 128,
            sample_budget: 256,
            seed: 0,
            blowup_bound: 1e12,
            report_range: None,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<(), ClassifyError> {
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(ClassifyError::InvalidConfig(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if self.probe_floor == 0 || self.probe_floor >= self.cap_m.min(self.cap_n) {
            return Err(ClassifyError::InvalidConfig(format!(
                "probe_floor {} must lie in 1..min(cap_m, cap_n) = {}",
                self.probe_floor,
                self.cap_m.min(self.cap_n)
            )));
        }
        if self.sample_budget == 0 {
            return Err(ClassifyError::InvalidConfig(
                "sample_budget must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn check_table(&self, table: &PrefixSumTable) -> Result<(), ClassifyError> {
        if table.cap_m() < self.cap_m || table.cap_n() < self.cap_n {
            return Err(ClassifyError::InvalidConfig(format!(
                "table caps ({}, {}) are smaller than config caps ({}, {})",
                table.cap_m(),
                table.cap_n(),
                self.cap_m,
                self.cap_n
            )));
        }
        Ok(())
    }

    /// Geometric threshold candidates. The base ladder doubles from
    /// `probe_floor` up to half the smaller cap (so the probed tail region
    /// stays substantial); the extended ladder appends 3/4 and 7/8 of the
    /// cap for notions whose probe regions keep whole rows in play.
    fn kappa_ladder(&self, extended: bool) -> Vec<usize> {
        let cap = self.cap_m.min(self.cap_n);
        let mut v = Vec::new();
        let mut k = self.probe_floor.max(1);
        while k <= cap / 2 {
            v.push(k);
            k *= 2;
        }
        if extended {
            for frac in [(3usize, 4usize), (7, 8)] {
                let c = cap * frac.0 / frac.1;
                if v.last().is_none_or(|&l| c > l) && c < cap {
                    v.push(c);
                }
            }
        }
        if v.is_empty() {
            v.push(self.probe_floor);
        }
        v
    }
}

/// One threshold candidate's worth of evidence.
struct Scan {
    threshold: f64,
    deviation: f64,
    witness: Option<Witness>,
}

/// Shared Converges / Diverges / Inconclusive decision over a ladder scan.
fn decide(scans: &[Scan], eps: f64, limit: Complex64) -> Verdict {
    for s in scans {
        if s.deviation < eps {
            return Verdict::converges(limit, s.deviation, s.threshold);
        }
    }
    let last = scans.last().expect("ladder is never empty");
    if scans.len() >= PERSISTENCE && last.deviation >= SHRINK_FACTOR * scans[0].deviation {
        if let Some(w) = last.witness {
            return Verdict::diverges(last.deviation, Some(last.threshold), w);
        }
    }
    Verdict::inconclusive(last.deviation)
}

/// Pringsheim classification: do the partial sums s_{m,n} cluster once
/// min{m,n} passes some κ? The cluster value is taken at the caps corner.
pub fn classify_pringsheim(
    table: &PrefixSumTable,
    cfg: &ClassifierConfig,
) -> Result<Verdict, ClassifyError> {
    cfg.validate()?;
    cfg.check_table(table)?;
    let limit = table.partial_sum(cfg.cap_m as i64, cfg.cap_n as i64)?;
    let mut scans = Vec::new();
    for kappa in cfg.kappa_ladder(false) {
        let mut dev = 0.0;
        let mut witness = None;
        for m in (kappa + 1)..=cfg.cap_m {
            for n in (kappa + 1)..=cfg.cap_n {
                let gap = (table.partial_sum(m as i64, n as i64)? - limit).norm();
                if gap > dev {
                    dev = gap;
                    witness = Some(Witness::PartialSum {
                        m: m as i64,
                        n: n as i64,
                        gap,
                    });
                }
            }
        }
        scans.push(Scan {
            threshold: kappa as f64,
            deviation: dev,
            witness,
        });
    }
    Ok(decide(&scans, cfg.eps, limit))
}

struct BlockProbe {
    m: i64,
    n: i64,
    m_hi: i64,
    n_hi: i64,
    anchor_max: usize,
    magnitude: f64,
}

fn geometric_indices(cap: usize, floor: usize) -> Vec<usize> {
    let mut v = vec![0, 1];
    let mut g = 2;
    while g <= cap {
        v.push(g);
        g *= 2;
    }
    for frac in [(3usize, 4usize), (7, 8)] {
        v.push(cap * frac.0 / frac.1);
    }
    v.push(cap);
    v.push(floor);
    v.sort_unstable();
    v.dedup();
    v.retain(|&x| x <= cap);
    v
}

/// The deterministic probe lattice for regular convergence: blocks anchored
/// at geometrically spaced (m, n) with geometrically spaced extents, every
/// single-row and single-column strip to the caps, and `sample_budget`
/// seeded random blocks.
fn regular_probes(
    table: &PrefixSumTable,
    cfg: &ClassifierConfig,
) -> Result<Vec<BlockProbe>, ClassifyError> {
    let mut probes = Vec::new();
    let mut push = |m: i64, n: i64, m_hi: i64, n_hi: i64| -> Result<(), ClassifyError> {
        let magnitude = table.block_sum(m, n, m_hi, n_hi)?.norm();
        probes.push(BlockProbe {
            m,
            n,
            m_hi,
            n_hi,
            anchor_max: (m.max(n)) as usize,
            magnitude,
        });
        Ok(())
    };

    let anchors_m = geometric_indices(cfg.cap_m, cfg.probe_floor);
    let anchors_n = geometric_indices(cfg.cap_n, cfg.probe_floor);
    for &m in &anchors_m {
        let mut ext_m: Vec<usize> = anchors_m.iter().copied().filter(|&x| x >= m).collect();
        if m < cfg.cap_m {
            ext_m.push(m + 1);
        }
        ext_m.sort_unstable();
        ext_m.dedup();
        for &n in &anchors_n {
            let mut ext_n: Vec<usize> = anchors_n.iter().copied().filter(|&x| x >= n).collect();
            if n < cfg.cap_n {
                ext_n.push(n + 1);
            }
            ext_n.sort_unstable();
            ext_n.dedup();
            for &mh in &ext_m {
                for &nh in &ext_n {
                    push(m as i64, n as i64, mh as i64, nh as i64)?;
                }
            }
        }
    }

    // Single-row and single-column strips (M = m, N = n in the block
    // criterion), which tie regular convergence to row/column convergence.
    for j in 0..=cfg.cap_m {
        for &n in &anchors_n {
            push(j as i64, n as i64, j as i64, cfg.cap_n as i64)?;
        }
    }
    for k in 0..=cfg.cap_n {
        for &m in &anchors_m {
            push(m as i64, k as i64, cfg.cap_m as i64, k as i64)?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.sample_budget {
        let m = rng.gen_range(0..=cfg.cap_m);
        let m_hi = rng.gen_range(m..=cfg.cap_m);
        let n = rng.gen_range(0..=cfg.cap_n);
        let n_hi = rng.gen_range(n..=cfg.cap_n);
        push(m as i64, n as i64, m_hi as i64, n_hi as i64)?;
    }
    Ok(probes)
}

/// Regular-convergence classification: are all probed rectangular block sums
/// anchored past κ in max{m,n} below ε?
pub fn classify_regular(
    table: &PrefixSumTable,
    cfg: &ClassifierConfig,
) -> Result<Verdict, ClassifyError> {
    cfg.validate()?;
    cfg.check_table(table)?;
    let probes = regular_probes(table, cfg)?;
    let limit = table.partial_sum(cfg.cap_m as i64, cfg.cap_n as i64)?;
    let mut scans = Vec::new();
    for kappa in cfg.kappa_ladder(true) {
        let mut dev = 0.0;
        let mut witness = None;
        for p in &probes {
            if p.anchor_max > kappa && p.magnitude > dev {
                dev = p.magnitude;
                witness = Some(Witness::Block {
                    m: p.m,
                    n: p.n,
                    m_hi: p.m_hi,
                    n_hi: p.n_hi,
                    magnitude: p.magnitude,
                });
            }
        }
        scans.push(Scan {
            threshold: kappa as f64,
            deviation: dev,
            witness,
        });
    }
    Ok(decide(&scans, cfg.eps, limit))
}

/// Absolute-convergence classification over a table of Σ |a_{j,k}| (built
/// with [`PrefixSumTable::build_abs`]). Converges when the mass outside the
/// κ-square is below ε; diverges when the running total blows past the
/// configured bound or keeps growing by more than ε over every geometric
/// window along the diagonal ray.
pub fn classify_absolute(
    abs_table: &PrefixSumTable,
    cfg: &ClassifierConfig,
) -> Result<Verdict, ClassifyError> {
    cfg.validate()?;
    cfg.check_table(abs_table)?;
    let diag = |k: usize| -> Result<f64, ClassifyError> {
        Ok(abs_partial_sum(
            abs_table,
            k.min(cfg.cap_m) as i64,
            k.min(cfg.cap_n) as i64,
        )?)
    };
    let total = abs_partial_sum(abs_table, cfg.cap_m as i64, cfg.cap_n as i64)?;
    if total > cfg.blowup_bound {
        return Ok(Verdict::diverges(
            total,
            None,
            Witness::PartialSum {
                m: cfg.cap_m as i64,
                n: cfg.cap_n as i64,
                gap: total,
            },
        ));
    }

    let ladder = cfg.kappa_ladder(true);
    let mut tails = Vec::with_capacity(ladder.len());
    for &kappa in &ladder {
        let tail = total - diag(kappa)?;
        if tail < cfg.eps {
            return Ok(Verdict::converges(
                Complex64::new(total, 0.0),
                tail,
                kappa as f64,
            ));
        }
        tails.push(tail);
    }

    // Growth windows along the diagonal: d(κ_{i+1}) − d(κ_i), closing with
    // the window up to the caps corner.
    let mut windows = Vec::with_capacity(ladder.len());
    for i in 0..ladder.len() {
        let lo = diag(ladder[i])?;
        let hi = if i + 1 < ladder.len() {
            diag(ladder[i + 1])?
        } else {
            total
        };
        windows.push(hi - lo);
    }
    if windows.len() >= PERSISTENCE && windows.iter().all(|&w| w > cfg.eps) {
        let last = *windows.last().unwrap();
        return Ok(Verdict::diverges(
            last,
            Some(*ladder.last().unwrap() as f64),
            Witness::PartialSum {
                m: cfg.cap_m as i64,
                n: cfg.cap_n as i64,
                gap: last,
            },
        ));
    }
    Ok(Verdict::inconclusive(*tails.last().unwrap()))
}

/// Cauchy-style classification of a single series from its partial sums.
///
/// Converges when the last partial sum sitting more than ε from the final
/// value is at least two entries before the horizon (the oscillation died
/// inside the observed window); otherwise the oscillation runs into the
/// horizon and the geometric persistence scan decides between divergence
/// and an inconclusive truncation.
fn classify_single(partials: &[Complex64], cfg: &ClassifierConfig) -> Verdict {
    let cap = partials.len() - 1;
    let limit = partials[cap];
    let gaps: Vec<f64> = partials.iter().map(|s| (s - limit).norm()).collect();
    match gaps.iter().rposition(|&g| g >= cfg.eps) {
        None => {
            let residual = gaps.iter().fold(0.0f64, |a, &b| a.max(b));
            return Verdict::converges(limit, residual, 0.0);
        }
        Some(last_off) if last_off + 2 <= cap => {
            let residual = gaps[last_off + 1..].iter().fold(0.0f64, |a, &b| a.max(b));
            return Verdict::converges(limit, residual, last_off as f64);
        }
        Some(_) => {}
    }
    let mut ladder: Vec<usize> = Vec::new();
    let mut k = cfg.probe_floor.max(1);
    while k <= cap / 2 {
        ladder.push(k);
        k *= 2;
    }
    if ladder.is_empty() {
        ladder.push(cap.saturating_sub(1).max(1));
    }
    let mut scans = Vec::new();
    for &kappa in &ladder {
        let mut dev = 0.0;
        let mut witness = None;
        for (idx, &gap) in gaps.iter().enumerate().skip(kappa + 1) {
            if gap > dev {
                dev = gap;
                witness = Some(Witness::Term {
                    index: idx as i64,
                    gap,
                });
            }
        }
        scans.push(Scan {
            threshold: kappa as f64,
            deviation: dev,
            witness,
        });
    }
    let verdict = decide(&scans, cfg.eps, limit);
    if verdict.status != Status::Inconclusive {
        return verdict;
    }
    // A decaying transient can mask a persistent oscillation in the ladder
    // maxima. Within the top probe region, repeated exceedances of ε with a
    // dip back below ε/2 in between are oscillation, not slow convergence.
    let top = *ladder.last().unwrap() + 1;
    let region = &gaps[top..];
    let first_hi = region.iter().position(|&g| g >= cfg.eps);
    let last_hi = region.iter().rposition(|&g| g >= cfg.eps);
    if let (Some(a), Some(b)) = (first_hi, last_hi) {
        if b > a && region[a..=b].iter().any(|&g| g <= cfg.eps / 2.0) {
            let dev = region.iter().fold(0.0f64, |acc, &g| acc.max(g));
            return Verdict::diverges(
                dev,
                Some((top - 1) as f64),
                Witness::Term {
                    index: (top + b) as i64,
                    gap: region[b],
                },
            );
        }
    }
    verdict
}

#[derive(Debug, Clone, Serialize)]
pub struct RowColReport {
    pub rows: Vec<Verdict>,
    pub cols: Vec<Verdict>,
}

impl RowColReport {
    pub fn all_converge(&self) -> bool {
        self.rows
            .iter()
            .chain(&self.cols)
            .all(Verdict::is_converges)
    }

    pub fn any_diverges(&self) -> bool {
        self.rows.iter().chain(&self.cols).any(Verdict::is_diverges)
    }
}

/// Per-row and per-column single-series verdicts. Rows and columns are
/// examined up to `report_range` (the caps by default); partial sums always
/// run to the full caps.
pub fn row_col_verdicts(
    source: &TermSource,
    cfg: &ClassifierConfig,
) -> Result<RowColReport, ClassifyError> {
    cfg.validate()?;
    let row_top = cfg.report_range.unwrap_or(cfg.cap_m).min(cfg.cap_m);
    let col_top = cfg.report_range.unwrap_or(cfg.cap_n).min(cfg.cap_n);
    let mut rows = Vec::with_capacity(row_top + 1);
    for j in 0..=row_top {
        let mut acc = ZERO;
        let partials: Vec<Complex64> = (0..=cfg.cap_n)
            .map(|k| {
                acc += source.term(j as i64, k as i64);
                acc
            })
            .collect();
        rows.push(classify_single(&partials, cfg));
    }
    let mut cols = Vec::with_capacity(col_top + 1);
    for k in 0..=col_top {
        let mut acc = ZERO;
        let partials: Vec<Complex64> = (0..=cfg.cap_m)
            .map(|j| {
                acc += source.term(j as i64, k as i64);
                acc
            })
            .collect();
        cols.push(classify_single(&partials, cfg));
    }
    Ok(RowColReport { rows, cols })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuccessiveSumReport {
    /// Σ_j (Σ_k a_{j,k}) at the caps, rows summed first.
    #[serde(serialize_with = "dec::complex")]
    pub row_route: Complex64,
    /// Σ_k (Σ_j a_{j,k}) at the caps, columns summed first.
    #[serde(serialize_with = "dec::complex")]
    pub col_route: Complex64,
    /// The Pringsheim estimate s at the caps corner, out of the prefix table.
    #[serde(serialize_with = "dec::complex")]
    pub pringsheim: Complex64,
    /// |row−col|, |row−pringsheim|, |col−pringsheim|.
    #[serde(serialize_with = "dec::f64_slice")]
    pub gaps: [f64; 3],
    #[serde(serialize_with = "dec::f64_str")]
    pub tolerance: f64,
    pub passed: bool,
}

/// Verify that the sum of a regularly convergent series can be computed by
/// successive summation: the row route, the column route and the Pringsheim
/// corner must agree within 4ε (two chained 2ε estimates).
pub fn successive_sum_check(
    table: &PrefixSumTable,
    cfg: &ClassifierConfig,
) -> Result<SuccessiveSumReport, ClassifyError> {
    let regular = classify_regular(table, cfg)?;
    if regular.status != Status::Converges {
        return Err(ClassifyError::PreconditionNotMet {
            op: "successive_sum_check",
            verdict: regular,
        });
    }
    let src = table.source();
    let mut row_route = ZERO;
    for j in 0..=cfg.cap_m {
        let mut r = ZERO;
        for k in 0..=cfg.cap_n {
            r += src.term(j as i64, k as i64);
        }
        row_route += r;
    }
    let mut col_route = ZERO;
    for k in 0..=cfg.cap_n {
        let mut c = ZERO;
        for j in 0..=cfg.cap_m {
            c += src.term(j as i64, k as i64);
        }
        col_route += c;
    }
    let pringsheim = table.partial_sum(cfg.cap_m as i64, cfg.cap_n as i64)?;
    let gaps = [
        (row_route - col_route).norm(),
        (row_route - pringsheim).norm(),
        (col_route - pringsheim).norm(),
    ];
    let tolerance = 4.0 * cfg.eps;
    let passed = gaps.iter().all(|&g| g <= tolerance);
    Ok(SuccessiveSumReport {
        row_route,
        col_route,
        pringsheim,
        gaps,
        tolerance,
        passed,
    })
}

/// A double sequence s_{m,n}, m, n ≥ 0, given by a deterministic callable.
#[derive(Clone)]
pub struct DoubleSequence {
    eval: Arc<dyn Fn(i64, i64) -> Complex64 + Send + Sync>,
}

impl DoubleSequence {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    {
        DoubleSequence { eval: Arc::new(f) }
    }

    pub fn new_real<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> f64 + Send + Sync + 'static,
    {
        Self::new(move |m, n| Complex64::new(f(m, n), 0.0))
    }

    pub fn value(&self, m: i64, n: i64) -> Complex64 {
        (self.eval)(m, n)
    }

    /// The second-difference terms whose prefix sums reproduce the sequence
    /// (with the s_{m,n} = 0 convention on min{m,n} = −1).
    pub fn difference_source(&self) -> TermSource {
        let eval = self.eval.clone();
        TermSource::nat(move |m, n| {
            let s = |a: i64, b: i64| if a < 0 || b < 0 { ZERO } else { eval(a, b) };
            s(m, n) - s(m - 1, n) - s(m, n - 1) + s(m - 1, n - 1)
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IteratedLimitReport {
    /// lim_m (lim_n s_{m,n}) estimate.
    #[serde(serialize_with = "dec::complex")]
    pub iterated_mn: Complex64,
    /// lim_n (lim_m s_{m,n}) estimate.
    #[serde(serialize_with = "dec::complex")]
    pub iterated_nm: Complex64,
    /// s at the caps corner.
    #[serde(serialize_with = "dec::complex")]
    pub pringsheim: Complex64,
    /// Pairwise gaps: |mn−nm|, |mn−pringsheim|, |nm−pringsheim|.
    #[serde(serialize_with = "dec::f64_slice")]
    pub gaps: [f64; 3],
    #[serde(serialize_with = "dec::f64_str")]
    pub tolerance: f64,
    /// Every inner and outer horizon stabilized within ε.
    pub stabilized: bool,
}

fn horizon_ladder(floor: usize, cap: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut h = floor.max(2);
    while h < cap {
        v.push(h);
        h *= 2;
    }
    v.push(cap);
    v
}

/// Iterated-limit identity check for a regularly convergent double sequence:
/// estimates lim_m(lim_n s), lim_n(lim_m s) and the Pringsheim value, and
/// reports the pairwise gaps. Regular convergence is established first via
/// the second-difference criterion; anything else is a precondition error.
pub fn sequence_iterated_limits(
    seq: &DoubleSequence,
    cfg: &ClassifierConfig,
) -> Result<IteratedLimitReport, ClassifyError> {
    cfg.validate()?;
    let table = PrefixSumTable::build(&seq.difference_source(), cfg.cap_m, cfg.cap_n)?;
    let regular = classify_regular(&table, cfg)?;
    if regular.status != Status::Converges {
        return Err(ClassifyError::PreconditionNotMet {
            op: "sequence_iterated_limits",
            verdict: regular,
        });
    }

    let m_horizons = horizon_ladder(cfg.probe_floor, cfg.cap_m);
    let n_horizons = horizon_ladder(cfg.probe_floor, cfg.cap_n);
    let mut stabilized = true;

    // Stabilized value of a horizon trace: the value at the largest horizon,
    // flagged if the last step still moved by ε or more.
    let mut settle = |values: &[Complex64]| -> Complex64 {
        if values.len() >= 2 {
            let delta = (values[values.len() - 1] - values[values.len() - 2]).norm();
            if delta >= cfg.eps {
                stabilized = false;
            }
        }
        *values.last().unwrap()
    };

    let inner_rows: Vec<Complex64> = m_horizons
        .iter()
        .map(|&m| {
            let trace: Vec<Complex64> = n_horizons
                .iter()
                .map(|&n| seq.value(m as i64, n as i64))
                .collect();
            settle(&trace)
        })
        .collect();
    let iterated_mn = settle(&inner_rows);

    let inner_cols: Vec<Complex64> = n_horizons
        .iter()
        .map(|&n| {
            let trace: Vec<Complex64> = m_horizons
                .iter()
                .map(|&m| seq.value(m as i64, n as i64))
                .collect();
            settle(&trace)
        })
        .collect();
    let iterated_nm = settle(&inner_cols);

    let pringsheim = seq.value(cfg.cap_m as i64, cfg.cap_n as i64);
    let gaps = [
        (iterated_mn - iterated_nm).norm(),
        (iterated_mn - pringsheim).norm(),
        (iterated_nm - pringsheim).norm(),
    ];
    Ok(IteratedLimitReport {
        iterated_mn,
        iterated_nm,
        pringsheim,
        gaps,
        tolerance: 4.0 * cfg.eps,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{fixture, FixtureId};

    fn cfg(eps: f64, caps: usize) -> ClassifierConfig {
        ClassifierConfig {
            eps,
            cap_m: caps,
            cap_n: caps,
            ..ClassifierConfig::default()
        }
    }

    fn table_of(id: FixtureId, caps: usize) -> PrefixSumTable {
        fixture(id).table(caps, caps).unwrap().unwrap()
    }

    #[test]
    fn config_validation() {
        let c = ClassifierConfig {
            probe_floor: 500,
            ..ClassifierConfig::default()
        };
        assert!(matches!(
            classify_pringsheim(&table_of(FixtureId::Ex1, 128), &c),
            Err(ClassifyError::InvalidConfig(_))
        ));
        let c = cfg(1e-2, 256);
        assert!(matches!(
            classify_pringsheim(&table_of(FixtureId::Ex1, 128), &c),
            Err(ClassifyError::InvalidConfig(_))
        ));
    }

    #[test]
    fn ex1_pringsheim_converges_to_zero_even_at_tight_eps() {
        let v = classify_pringsheim(&table_of(FixtureId::Ex1, 64), &cfg(1e-9, 64)).unwrap();
        assert_eq!(v.status, Status::Converges);
        assert_eq!(v.limit.unwrap(), ZERO);
        assert_eq!(v.residual, 0.0);
    }

    #[test]
    fn ex2_pringsheim_diverges_with_diagonal_witness() {
        let v = classify_pringsheim(&table_of(FixtureId::Ex2, 64), &cfg(0.5, 64)).unwrap();
        assert_eq!(v.status, Status::Diverges);
        match v.witness.unwrap() {
            Witness::PartialSum { m, n, gap } => {
                assert_eq!(m, n, "first maximal gap sits on the diagonal");
                assert_eq!(gap, 1.0);
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn ex4_pringsheim_diverges() {
        let v = classify_pringsheim(&table_of(FixtureId::Ex4, 64), &cfg(0.5, 64)).unwrap();
        assert_eq!(v.status, Status::Diverges);
    }

    #[test]
    fn ex5_regular_converges_at_documented_config() {
        let v = classify_regular(&table_of(FixtureId::Ex5, 128), &cfg(1e-2, 128)).unwrap();
        assert_eq!(v.status, Status::Converges);
        assert!(v.limit.unwrap().norm() <= 1e-2);
    }

    #[test]
    fn ex1_regular_diverges_on_unbounded_cells() {
        let v = classify_regular(&table_of(FixtureId::Ex1, 64), &cfg(0.5, 64)).unwrap();
        assert_eq!(v.status, Status::Diverges);
        assert!(v.witness.unwrap().magnitude() > 0.5);
    }

    #[test]
    fn ex3_regular_diverges_on_row_blocks() {
        let v = classify_regular(&table_of(FixtureId::Ex3, 64), &cfg(0.5, 64)).unwrap();
        assert_eq!(v.status, Status::Diverges);
    }

    #[test]
    fn ex5_absolute_diverges_harmonically() {
        let fx = fixture(FixtureId::Ex5);
        let abs = PrefixSumTable::build_abs(fx.source().unwrap(), 128, 128).unwrap();
        let v = classify_absolute(&abs, &cfg(1e-2, 128)).unwrap();
        assert_eq!(v.status, Status::Diverges);
    }

    #[test]
    fn zero_source_is_absolutely_convergent() {
        let src = TermSource::nat_real(|_, _| 0.0);
        let abs = PrefixSumTable::build_abs(&src, 64, 64).unwrap();
        let v = classify_absolute(&abs, &cfg(1e-2, 64)).unwrap();
        assert_eq!(v.status, Status::Converges);
        assert_eq!(v.limit.unwrap(), ZERO);
    }

    #[test]
    fn geometric_source_absolute_limit_is_four() {
        let src = TermSource::nat_real(|j, k| 0.5f64.powi((j + k) as i32));
        let abs = PrefixSumTable::build_abs(&src, 64, 64).unwrap();
        let v = classify_absolute(&abs, &cfg(1e-2, 64)).unwrap();
        assert_eq!(v.status, Status::Converges);
        assert!((v.limit.unwrap().re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ex2_rows_and_columns_all_converge() {
        // Rows and columns whose two nonzero terms straddle the horizon are
        // indistinguishable from divergent ones, so the examined range stays
        // inside the caps.
        let mut c = cfg(0.5, 64);
        c.report_range = Some(48);
        let fx = fixture(FixtureId::Ex2);
        let report = row_col_verdicts(fx.source().unwrap(), &c).unwrap();
        assert_eq!(report.rows.len(), 49);
        assert!(report.all_converge());
    }

    #[test]
    fn ex3_every_row_diverges_at_scale_matched_eps() {
        // Row j oscillates forever with amplitude 1/(1+floor(j/2)) >= 1/33
        // up to cap 64, so eps = 0.02 sees every row diverge.
        let fx = fixture(FixtureId::Ex3);
        let report = row_col_verdicts(fx.source().unwrap(), &cfg(0.02, 64)).unwrap();
        assert!(report.rows.iter().all(Verdict::is_diverges));
        assert!(report.cols.iter().all(Verdict::is_diverges));
    }

    #[test]
    fn ex1_row_zero_diverges() {
        let fx = fixture(FixtureId::Ex1);
        let report = row_col_verdicts(fx.source().unwrap(), &cfg(0.5, 64)).unwrap();
        assert!(report.rows[0].is_diverges());
        assert!(!report.all_converge());
    }

    #[test]
    fn successive_sums_agree_on_ex5() {
        let table = table_of(FixtureId::Ex5, 256);
        let r = successive_sum_check(&table, &cfg(1e-2, 256)).unwrap();
        assert!(r.passed);
        assert!(r.gaps.iter().all(|&g| g < 1e-6), "gaps {:?}", r.gaps);
        assert!(r.row_route.norm() < 1e-2);
    }

    #[test]
    fn successive_sums_refuse_non_regular_input() {
        let table = table_of(FixtureId::Ex3, 64);
        match successive_sum_check(&table, &cfg(0.5, 64)) {
            Err(ClassifyError::PreconditionNotMet { op, verdict }) => {
                assert_eq!(op, "successive_sum_check");
                assert_eq!(verdict.status, Status::Diverges);
            }
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn successive_sums_exact_on_zero_source() {
        let src = TermSource::nat_real(|_, _| 0.0);
        let table = PrefixSumTable::build(&src, 64, 64).unwrap();
        let r = successive_sum_check(&table, &cfg(1e-3, 64)).unwrap();
        assert_eq!(r.gaps, [0.0, 0.0, 0.0]);
        assert_eq!(r.row_route, ZERO);
    }

    #[test]
    fn iterated_limits_of_product_sequence() {
        let seq = DoubleSequence::new_real(|m, n| {
            (1.0 - 0.5f64.powi(m as i32)) * (1.0 - 0.5f64.powi(n as i32))
        });
        let r = sequence_iterated_limits(&seq, &cfg(1e-2, 40)).unwrap();
        assert!(r.stabilized);
        for v in [r.iterated_mn, r.iterated_nm, r.pringsheim] {
            assert!((v.re - 1.0).abs() < 1e-6, "{v}");
        }
        assert!(r.gaps.iter().all(|&g| g <= r.tolerance));
    }

    #[test]
    fn iterated_limits_of_constant_sequence() {
        let seq = DoubleSequence::new_real(|_, _| 2.5);
        let r = sequence_iterated_limits(&seq, &cfg(1e-3, 32)).unwrap();
        assert_eq!(r.iterated_mn.re, 2.5);
        assert_eq!(r.iterated_nm.re, 2.5);
        assert_eq!(r.gaps, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn iterated_limits_of_ex5_partial_sums() {
        let fx = fixture(FixtureId::Ex5);
        let src = fx.source().unwrap().clone();
        let table = PrefixSumTable::build(&src, 256, 256).unwrap();
        let table = std::sync::Arc::new(table);
        let seq = DoubleSequence::new(move |m, n| table.partial_sum(m, n).unwrap());
        let r = sequence_iterated_limits(&seq, &cfg(1e-2, 256)).unwrap();
        for v in [r.iterated_mn, r.iterated_nm, r.pringsheim] {
            assert!(v.norm() <= 4.0 * 1e-2, "{v}");
        }
        assert!(r.gaps.iter().all(|&g| g <= r.tolerance));
    }

    #[test]
    fn iterated_limits_refuse_oscillating_sequences() {
        // Partial sums of the shifted-blocks source oscillate forever; the
        // second-difference criterion rejects them.
        let fx = fixture(FixtureId::Ex2);
        let src = fx.source().unwrap().clone();
        let table = std::sync::Arc::new(PrefixSumTable::build(&src, 64, 64).unwrap());
        let seq = DoubleSequence::new(move |m, n| table.partial_sum(m, n).unwrap());
        match sequence_iterated_limits(&seq, &cfg(0.5, 64)) {
            Err(ClassifyError::PreconditionNotMet { op, .. }) => {
                assert_eq!(op, "sequence_iterated_limits");
            }
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn verdicts_are_deterministic() {
        let table = table_of(FixtureId::Ex5, 64);
        let c = cfg(1e-2, 64);
        let a = classify_regular(&table, &c).unwrap();
        let b = classify_regular(&table, &c).unwrap();
        assert_eq!(a, b);
    }
}
