//! Convergence classification for double integrals over the first quadrant
//! and numerical verification of successive integration for regularly
//! convergent integrals.
//!
//! The classifiers mirror the series ones: Pringsheim convergence is probed
//! on partial integrals I(x,y) past min{x,y} > ρ, regular convergence on
//! rectangle integrals anchored past max{x,y} > ρ (with boundary-anchored
//! strips included). Probe coordinates combine a geometric grid with the
//! integrand's own breakpoints, because step integrands achieve their
//! extreme strip values exactly at cell or block boundaries.
//!
//! For a regularly convergent integral the iterated limits
//!
//! ```text
//! I₁(A) = lim_{y→∞} ∫₀ᴬ ( ∫₀ʸ f(u,v) dv ) du
//! I₂(B) = lim_{x→∞} ∫₀ᴮ ( ∫₀ˣ f(u,v) du ) dv
//! ```
//!
//! exist uniformly and satisfy lim_A I₁(A) = lim_B I₂(B) = lim I(x,y);
//! [`fubini_check`] estimates all three, verifies the finite-rectangle
//! identity on random rectangles by actually iterating the integrals both
//! ways, and refuses (rather than warns) when regular convergence is not
//! established — the identity genuinely fails without it.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::integral::{
    horizontal_strip, iterated_rect, vertical_strip, Axis, IntegralError, Integrand,
    IterationOrder, RectRegion,
};
use crate::verdict::{dec, Status, Verdict, Witness};

const SHRINK_FACTOR: f64 = 0.5;
const PERSISTENCE: usize = 3;

#[derive(Debug, Error)]
pub enum FubiniError {
    #[error("invalid integral classifier configuration: {0}")]
    InvalidConfig(String),
    #[error("regular convergence hypothesis rejected (classifier returned {:?})", verdict.status)]
    HypothesisRejected { verdict: Verdict },
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralClassifierConfig {
    #[serde(serialize_with = "dec::f64_str")]
    pub eps: f64,
    /// Truncation horizon along u.
    #[serde(serialize_with = "dec::f64_str")]
    pub x_cap: f64,
    /// Truncation horizon along v.
    #[serde(serialize_with = "dec::f64_str")]
    pub y_cap: f64,
    /// Geometric probe grid factor (> 1).
    #[serde(serialize_with = "dec::f64_str")]
    pub grid: f64,
    pub sample_budget: usize,
    pub seed: u64,
    /// Worker threads for the independent per-horizon curve evaluations;
    /// results are identical to the serial run.
    #[serde(skip)]
    pub threads: usize,
}

impl Default for IntegralClassifierConfig {
    fn default() -> Self {
        IntegralClassifierConfig {
            eps: 1e-2,
            x_cap: 1024.0,
            y_cap: 1024.0,
            grid: 2.0,
            sample_budget: 128,
            seed: 0,
            threads: 1,
        }
    }
}

impl IntegralClassifierConfig {
    pub fn validate(&self) -> Result<(), FubiniError> {
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(FubiniError::InvalidConfig(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if !(self.x_cap.is_finite()
            && self.y_cap.is_finite()
            && self.x_cap > 1.0
            && self.y_cap > 1.0)
        {
            return Err(FubiniError::InvalidConfig("caps must exceed 1".to_string()));
        }
        if !self.grid.is_finite() || self.grid <= 1.0 {
            return Err(FubiniError::InvalidConfig(
                "grid factor must exceed 1".to_string(),
            ));
        }
        if self.sample_budget == 0 {
            return Err(FubiniError::InvalidConfig(
                "sample_budget must be at least 1".to_string(),
            ));
        }
        Ok(())
    }

    fn min_cap(&self) -> f64 {
        self.x_cap.min(self.y_cap)
    }

    /// Geometric threshold candidates 1, g, g², … up to half the smaller cap.
    fn rho_ladder(&self) -> Vec<f64> {
        let mut v = Vec::new();
        let mut r = 1.0;
        while r <= self.min_cap() / 2.0 {
            v.push(r);
            r *= self.grid;
        }
        if v.is_empty() {
            v.push(1.0);
        }
        v
    }
}

/// Probe coordinates along one axis: the geometric grid, its midpoints, and
/// the integrand's salient boundaries (cell edges near the grid points for
/// cell grids, all block edges for the dyadic field). `fine_floor` bounds
/// how small the salient boundaries go; it comes from the global caps, not
/// from `hi`, so band probes within [0, c] still see the thin dyadic scales
/// that matter out to the sweep horizon.
fn axis_coords(f: &Integrand, axis: Axis, hi: f64, grid: f64, fine_floor: f64) -> Vec<f64> {
    let mut coords = Vec::new();
    let mut g = 1.0;
    while g <= hi {
        coords.push(g);
        let mid = 1.5 * g;
        if mid <= hi {
            coords.push(mid);
        }
        g *= grid;
    }
    coords.push(hi);
    match f {
        Integrand::CellGrid(_) => {
            let mut salient = Vec::new();
            for base in coords.clone() {
                let fl = base.floor();
                for c in [fl - 1.0, fl, fl + 0.5, fl + 1.0, fl + 2.0] {
                    if c > 0.0 && c <= hi {
                        salient.push(c);
                    }
                }
            }
            let mut small = 0.5;
            while small <= hi.min(8.0) {
                salient.push(small);
                small += 0.5;
            }
            coords.extend(salient);
        }
        Integrand::DyadicBlocks => {
            let lo = fine_floor.max(f64::MIN_POSITIVE);
            let mut edges = f.breakpoints(axis, lo, hi);
            // Midpoints between adjacent block edges catch mass that sits
            // strictly inside a half-block.
            let mids: Vec<f64> = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            edges.extend(mids);
            coords.extend(edges);
        }
        Integrand::Callable(_) => {}
    }
    coords.retain(|&c| c > 0.0 && c <= hi);
    coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
    coords.dedup();
    coords
}

fn fine_floor(cfg: &IntegralClassifierConfig) -> f64 {
    1.0 / (4.0 * cfg.x_cap.max(cfg.y_cap))
}

struct Slots<'a> {
    ladder: &'a [f64],
    dev: Vec<f64>,
    witness: Vec<Option<Witness>>,
}

impl<'a> Slots<'a> {
    fn new(ladder: &'a [f64]) -> Self {
        Slots {
            ladder,
            dev: vec![0.0; ladder.len()],
            witness: vec![None; ladder.len()],
        }
    }

    fn update(&mut self, anchor: f64, magnitude: f64, witness: impl Fn() -> Witness) {
        for (i, &rho) in self.ladder.iter().enumerate() {
            if anchor > rho && magnitude > self.dev[i] {
                self.dev[i] = magnitude;
                self.witness[i] = Some(witness());
            }
        }
    }

    fn decide(&self, eps: f64, limit: Complex64) -> Verdict {
        for (i, &rho) in self.ladder.iter().enumerate() {
            if self.dev[i] < eps {
                return Verdict::converges(limit, self.dev[i], rho);
            }
        }
        let last = self.ladder.len() - 1;
        if self.ladder.len() >= PERSISTENCE && self.dev[last] >= SHRINK_FACTOR * self.dev[0] {
            if let Some(w) = self.witness[last] {
                return Verdict::diverges(self.dev[last], Some(self.ladder[last]), w);
            }
        }
        Verdict::inconclusive(self.dev[last])
    }
}

/// Pringsheim classification of ∫∫ f: do the partial integrals I(x,y)
/// cluster once min{x,y} passes some ρ? The cluster value is I at the caps.
pub fn classify_integral_pringsheim(
    f: &Integrand,
    cfg: &IntegralClassifierConfig,
) -> Result<Verdict, FubiniError> {
    cfg.validate()?;
    let limit = f.partial_integral(cfg.x_cap, cfg.y_cap)?;
    let ladder = cfg.rho_ladder();
    let mut slots = Slots::new(&ladder);
    let xs = axis_coords(f, Axis::U, cfg.x_cap, cfg.grid, fine_floor(cfg));
    let ys = axis_coords(f, Axis::V, cfg.y_cap, cfg.grid, fine_floor(cfg));
    let visit = |x: f64, y: f64, slots: &mut Slots| -> Result<(), FubiniError> {
        let gap = (f.partial_integral(x, y)? - limit).norm();
        slots.update(x.min(y), gap, || Witness::Point { x, y, gap });
        Ok(())
    };
    for &x in &xs {
        for &y in &ys {
            visit(x, y, &mut slots)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.sample_budget {
        let x = rng.gen_range(0.0..cfg.x_cap);
        let y = rng.gen_range(0.0..cfg.y_cap);
        visit(x, y, &mut slots)?;
    }
    Ok(slots.decide(cfg.eps, limit))
}

/// Intervals probed along one axis: each anchor paired with the next few
/// coordinates above it and with the cap.
fn axis_intervals(coords: &[f64], cap: f64) -> Vec<(f64, f64)> {
    let mut anchors = vec![0.0];
    anchors.extend_from_slice(coords);
    let mut intervals = Vec::new();
    for (i, &a) in anchors.iter().enumerate() {
        let mut exts: Vec<f64> = anchors[i + 1..].iter().copied().take(6).collect();
        exts.push(cap);
        exts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        exts.dedup();
        for e in exts {
            if e > a {
                intervals.push((a, e));
            }
        }
    }
    intervals
}

/// Regular-convergence classification of ∫∫ f: are all probed rectangle
/// integrals anchored past ρ in max{x,y} below ε?
pub fn classify_integral_regular(
    f: &Integrand,
    cfg: &IntegralClassifierConfig,
) -> Result<Verdict, FubiniError> {
    cfg.validate()?;
    let limit = f.partial_integral(cfg.x_cap, cfg.y_cap)?;
    let ladder = cfg.rho_ladder();
    let mut slots = Slots::new(&ladder);
    let xs = axis_coords(f, Axis::U, cfg.x_cap, cfg.grid, fine_floor(cfg));
    let ys = axis_coords(f, Axis::V, cfg.y_cap, cfg.grid, fine_floor(cfg));
    let u_intervals = axis_intervals(&xs, cfg.x_cap);
    let v_intervals = axis_intervals(&ys, cfg.y_cap);
    let visit = |x: f64, x1: f64, y: f64, y1: f64, slots: &mut Slots| -> Result<(), FubiniError> {
        let r = RectRegion { x, x1, y, y1 };
        let magnitude = f.rect_integral(&r)?.norm();
        slots.update(x.max(y), magnitude, || Witness::Rect {
            x,
            x1,
            y,
            y1,
            magnitude,
        });
        Ok(())
    };
    for &(x, x1) in &u_intervals {
        for &(y, y1) in &v_intervals {
            visit(x, x1, y, y1, &mut slots)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.sample_budget {
        let x = rng.gen_range(0.0..cfg.x_cap);
        let x1 = rng.gen_range(x..=cfg.x_cap);
        let y = rng.gen_range(0.0..cfg.y_cap);
        let y1 = rng.gen_range(y..=cfg.y_cap);
        visit(x, x1, y, y1, &mut slots)?;
    }
    Ok(slots.decide(cfg.eps, limit))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StripOrientation {
    /// ∫₀^{x1} ∫_y^{y1} f as x1 → ∞, bands (y, y1) within [0, c].
    Horizontal,
    /// ∫_x^{x1} ∫₀^{y1} f as y1 → ∞, bands (x, x1) within [0, c].
    Vertical,
}

/// One ρ candidate with the sup deviation observed past it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupEntry {
    #[serde(serialize_with = "dec::f64_str")]
    pub rho: f64,
    #[serde(serialize_with = "dec::f64_str")]
    pub sup_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StripUniformityReport {
    pub orientation: StripOrientation,
    #[serde(serialize_with = "dec::f64_str")]
    pub c: f64,
    /// Smallest probed ρ past which every band's strip integral stays within
    /// ε of its horizon value; `None` if no probed ρ works.
    #[serde(serialize_with = "dec::f64_opt")]
    pub rho: Option<f64>,
    /// (ρ candidate, sup deviation past it) pairs.
    pub sup_table: Vec<SupEntry>,
    /// Sup deviation past the largest probed ρ — the deviation that refuses
    /// to go away.
    #[serde(serialize_with = "dec::f64_str")]
    pub persistent_deviation: f64,
    /// Every individual band stabilized at the top of the sweep (pointwise
    /// limits exist at probe resolution even if not uniformly).
    pub pointwise_stabilizes: bool,
}

/// Probe the locally uniform existence of strip-integral limits: over all
/// probed bands within [0, c], find the smallest ρ such that the strip
/// integral at any sweep point past ρ stays within ε of its value at the
/// far horizon.
pub fn strip_uniformity(
    f: &Integrand,
    c: f64,
    cfg: &IntegralClassifierConfig,
    orientation: StripOrientation,
) -> Result<StripUniformityReport, FubiniError> {
    cfg.validate()?;
    if !c.is_finite() || c <= 0.0 {
        return Err(FubiniError::InvalidConfig(format!(
            "strip band bound c must be positive, got {c}"
        )));
    }
    let (band_axis, sweep_axis, sweep_cap) = match orientation {
        StripOrientation::Horizontal => (Axis::V, Axis::U, cfg.x_cap),
        StripOrientation::Vertical => (Axis::U, Axis::V, cfg.y_cap),
    };

    let mut band_coords: Vec<f64> = axis_coords(
        f,
        band_axis,
        c.min(cfg.min_cap()),
        cfg.grid,
        fine_floor(cfg),
    )
    .into_iter()
    .filter(|&v| v <= c)
    .collect();
    band_coords.push(0.0);
    band_coords.push(c);
    band_coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
    band_coords.dedup();

    let mut sweep = axis_coords(f, sweep_axis, sweep_cap, cfg.grid, fine_floor(cfg));
    sweep.extend(f.breakpoints(sweep_axis, 0.0, sweep_cap));
    sweep.retain(|&v| v > 0.0 && v <= sweep_cap);
    sweep.push(sweep_cap);
    sweep.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sweep.dedup();

    let mut pairs = Vec::new();
    for i in 0..band_coords.len() {
        for j in (i + 1)..band_coords.len() {
            pairs.push((band_coords[i], band_coords[j]));
        }
    }
    // Keep the probe budget bounded for dense band sets.
    let stride = pairs.len() / 4000 + 1;
    let pairs: Vec<(f64, f64)> = pairs.into_iter().step_by(stride).collect();

    let strip_value = |t: f64, lo: f64, hi: f64| -> Result<Complex64, FubiniError> {
        Ok(match orientation {
            StripOrientation::Horizontal => horizontal_strip(f, t, lo, hi)?,
            StripOrientation::Vertical => vertical_strip(f, lo, hi, t)?,
        })
    };

    let ladder = cfg.rho_ladder();
    let mut sup = vec![0.0f64; ladder.len()];
    let mut pointwise = true;
    for &(lo, hi) in &pairs {
        let reference = strip_value(sweep_cap, lo, hi)?;
        // Suffix maxima over the sweep let every ρ read off its sup.
        let devs: Vec<f64> = sweep
            .iter()
            .map(|&t| Ok((strip_value(t, lo, hi)? - reference).norm()))
            .collect::<Result<_, FubiniError>>()?;
        if devs.len() >= 2 && devs[devs.len() - 2] >= cfg.eps {
            pointwise = false;
        }
        let mut suffix = vec![0.0f64; devs.len() + 1];
        for i in (0..devs.len()).rev() {
            suffix[i] = devs[i].max(suffix[i + 1]);
        }
        for (s, &rho) in sup.iter_mut().zip(&ladder) {
            let idx = sweep.partition_point(|&t| t <= rho);
            *s = s.max(suffix[idx]);
        }
    }

    let rho = ladder
        .iter()
        .zip(&sup)
        .find(|(_, &s)| s < cfg.eps)
        .map(|(&r, _)| r);
    let persistent_deviation = *sup.last().unwrap();
    Ok(StripUniformityReport {
        orientation,
        c,
        rho,
        sup_table: ladder
            .iter()
            .zip(&sup)
            .map(|(&rho, &sup_deviation)| SupEntry { rho, sup_deviation })
            .collect(),
        persistent_deviation,
        pointwise_stabilizes: pointwise,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularCharacterization {
    pub pringsheim: Verdict,
    pub horizontal: Vec<StripUniformityReport>,
    pub vertical: Vec<StripUniformityReport>,
    /// Pringsheim convergence plus uniform strips at every probed level —
    /// the characterization of regular convergence.
    pub regular_equivalent: bool,
    /// Pringsheim holds and every band stabilizes pointwise, yet some level
    /// fails uniformity (the dyadic-field failure mode).
    pub pointwise_but_not_uniform: bool,
}

/// Characterize regular convergence as Pringsheim convergence plus locally
/// uniform strip limits, probing uniformity at a few band levels c.
pub fn characterize_regular(
    f: &Integrand,
    cfg: &IntegralClassifierConfig,
) -> Result<RegularCharacterization, FubiniError> {
    cfg.validate()?;
    let pringsheim = classify_integral_pringsheim(f, cfg)?;
    let quarter = cfg.min_cap() / 4.0;
    let mut levels = vec![1.0];
    for c in [4.0, 16.0] {
        if c <= quarter {
            levels.push(c);
        }
    }
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for &c in &levels {
        horizontal.push(strip_uniformity(f, c, cfg, StripOrientation::Horizontal)?);
        vertical.push(strip_uniformity(f, c, cfg, StripOrientation::Vertical)?);
    }
    let uniform = horizontal.iter().chain(&vertical).all(|r| r.rho.is_some());
    let pointwise = horizontal
        .iter()
        .chain(&vertical)
        .all(|r| r.pointwise_stabilizes);
    let converged = pringsheim.status == Status::Converges;
    Ok(RegularCharacterization {
        pringsheim,
        horizontal,
        vertical,
        regular_equivalent: converged && uniform,
        pointwise_but_not_uniform: converged && pointwise && !uniform,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    /// The frozen outer coordinate (A for I₁, B for I₂).
    #[serde(serialize_with = "dec::f64_str")]
    pub coord: f64,
    /// Value at the largest horizon (the limit estimate candidate).
    #[serde(serialize_with = "dec::complex")]
    pub estimate: Complex64,
    /// The estimate, only when the horizon trace stabilized within ε.
    #[serde(serialize_with = "dec::complex_opt")]
    pub limit: Option<Complex64>,
    /// |value at top horizon − value at previous horizon|.
    #[serde(serialize_with = "dec::f64_str")]
    pub last_delta: f64,
    pub stabilized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IteratedCurve {
    pub points: Vec<CurvePoint>,
    /// Sup over the curve of the last horizon step — the finite-scale
    /// surrogate for uniformity of the inner limits.
    #[serde(serialize_with = "dec::f64_str")]
    pub sup_last_delta: f64,
}

fn horizon_grid(grid: f64, cap: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut h = 1.0;
    while h < cap {
        v.push(h);
        h *= grid;
    }
    v.push(cap);
    v
}

fn curve_point(
    f: &Integrand,
    coord: f64,
    horizons: &[f64],
    inner: Axis,
    eps: f64,
) -> Result<CurvePoint, FubiniError> {
    let trace: Vec<Complex64> = horizons
        .iter()
        .map(|&h| {
            Ok(match inner {
                Axis::V => f.partial_integral(coord, h)?,
                Axis::U => f.partial_integral(h, coord)?,
            })
        })
        .collect::<Result<_, FubiniError>>()?;
    let estimate = *trace.last().unwrap();
    let last_delta = if trace.len() >= 2 {
        (trace[trace.len() - 1] - trace[trace.len() - 2]).norm()
    } else {
        f64::INFINITY
    };
    let stabilized = last_delta < eps;
    Ok(CurvePoint {
        coord,
        estimate,
        limit: if stabilized { Some(estimate) } else { None },
        last_delta,
        stabilized,
    })
}

fn curve(
    f: &Integrand,
    grid_points: &[f64],
    horizons: &[f64],
    inner: Axis,
    eps: f64,
    threads: usize,
) -> Result<IteratedCurve, FubiniError> {
    let points: Vec<CurvePoint> = if threads > 1 && grid_points.len() > 1 {
        let chunk = grid_points.len().div_ceil(threads);
        let results: Vec<Result<Vec<CurvePoint>, FubiniError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = grid_points
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|&a| curve_point(f, a, horizons, inner, eps))
                            .collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut all = Vec::with_capacity(grid_points.len());
        for r in results {
            all.extend(r?);
        }
        all
    } else {
        grid_points
            .iter()
            .map(|&a| curve_point(f, a, horizons, inner, eps))
            .collect::<Result<_, _>>()?
    };
    let sup_last_delta = points.iter().map(|p| p.last_delta).fold(0.0f64, f64::max);
    Ok(IteratedCurve {
        points,
        sup_last_delta,
    })
}

/// Estimate I₁(A) = lim_y I(A, y) for each A in the grid by sweeping
/// geometric y horizons up to y_cap. Entries that fail to stabilize carry
/// `limit: None` — the estimate is reported but not presented as a limit.
pub fn iterated_limit_i1(
    f: &Integrand,
    a_grid: &[f64],
    cfg: &IntegralClassifierConfig,
) -> Result<IteratedCurve, FubiniError> {
    cfg.validate()?;
    if a_grid.is_empty() {
        return Err(FubiniError::InvalidConfig("A grid is empty".to_string()));
    }
    if a_grid
        .iter()
        .any(|&a| !a.is_finite() || a <= 0.0 || a > cfg.x_cap)
    {
        return Err(FubiniError::InvalidConfig(
            "A grid must lie in (0, x_cap]".to_string(),
        ));
    }
    let horizons = horizon_grid(cfg.grid, cfg.y_cap);
    curve(f, a_grid, &horizons, Axis::V, cfg.eps, cfg.threads)
}

/// Symmetric counterpart: I₂(B) = lim_x I(x, B) over the B grid.
pub fn iterated_limit_i2(
    f: &Integrand,
    b_grid: &[f64],
    cfg: &IntegralClassifierConfig,
) -> Result<IteratedCurve, FubiniError> {
    cfg.validate()?;
    if b_grid.is_empty() {
        return Err(FubiniError::InvalidConfig("B grid is empty".to_string()));
    }
    if b_grid
        .iter()
        .any(|&b| !b.is_finite() || b <= 0.0 || b > cfg.y_cap)
    {
        return Err(FubiniError::InvalidConfig(
            "B grid must lie in (0, y_cap]".to_string(),
        ));
    }
    let horizons = horizon_grid(cfg.grid, cfg.x_cap);
    curve(f, b_grid, &horizons, Axis::U, cfg.eps, cfg.threads)
}

/// Configuration for [`fubini_check`]: the classifier settings used to
/// establish the regular-convergence hypothesis, and the (possibly tighter)
/// ε used for curve stabilization and the residual tolerance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FubiniConfig {
    pub classify: IntegralClassifierConfig,
    #[serde(serialize_with = "dec::f64_str")]
    pub residual_eps: f64,
}

impl FubiniConfig {
    pub fn from_classifier(classify: IntegralClassifierConfig) -> Self {
        FubiniConfig {
            residual_eps: classify.eps,
            classify,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Residuals {
    #[serde(serialize_with = "dec::f64_str")]
    pub i1_vs_i2: f64,
    #[serde(serialize_with = "dec::f64_str")]
    pub i1_vs_pringsheim: f64,
    #[serde(serialize_with = "dec::f64_str")]
    pub i2_vs_pringsheim: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.i1_vs_i2
            .max(self.i1_vs_pringsheim)
            .max(self.i2_vs_pringsheim)
    }
}

/// Absolute marginal mass ∫ |f| along one frozen coordinate, reported at
/// probe resolution (a diagnostic, not a decision about integrability).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MarginalSample {
    #[serde(serialize_with = "dec::f64_str")]
    pub at: f64,
    #[serde(serialize_with = "dec::f64_str")]
    pub abs_mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FubiniReport {
    pub i1_curve: Vec<CurvePoint>,
    pub i2_curve: Vec<CurvePoint>,
    #[serde(serialize_with = "dec::complex")]
    pub i1_limit: Complex64,
    #[serde(serialize_with = "dec::complex")]
    pub i2_limit: Complex64,
    /// I at the caps corner.
    #[serde(serialize_with = "dec::complex")]
    pub pringsheim: Complex64,
    pub residuals: Residuals,
    #[serde(serialize_with = "dec::f64_str")]
    pub tolerance: f64,
    pub within_tolerance: bool,
    /// Both curves and their outer limits stabilized.
    pub stabilized: bool,
    /// Sup of the last horizon steps over each curve.
    #[serde(serialize_with = "dec::f64_str")]
    pub i1_sup_delta: f64,
    #[serde(serialize_with = "dec::f64_str")]
    pub i2_sup_delta: f64,
    /// Largest disagreement between the two iteration orders and the direct
    /// rectangle integral over the random finite rectangles.
    #[serde(serialize_with = "dec::f64_str")]
    pub finite_fubini_max_gap: f64,
    pub marginal_abs_u: Vec<MarginalSample>,
    pub marginal_abs_v: Vec<MarginalSample>,
}

/// ∫ |f| along a line at probe resolution, decomposed at breakpoints.
fn marginal_abs(f: &Integrand, axis: Axis, fixed: f64, hi: f64) -> Result<f64, FubiniError> {
    match f {
        Integrand::Callable(_) => {
            // Coarse fixed mesh; reported, never used for verdicts.
            let n = (hi.ceil() as usize * 4).clamp(16, 1 << 16);
            let h = hi / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let t = (i as f64 + 0.5) * h;
                let v = match axis {
                    Axis::U => f.value(t, fixed)?,
                    Axis::V => f.value(fixed, t)?,
                };
                acc += v.norm() * h;
            }
            Ok(acc)
        }
        _ => {
            let mut cuts = f.breakpoints(axis, 0.0, hi);
            cuts.push(0.0);
            cuts.push(hi);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            let mut acc = 0.0;
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b <= a {
                    continue;
                }
                let mid = 0.5 * (a + b);
                let v = match axis {
                    Axis::U => f.value(mid, fixed)?,
                    Axis::V => f.value(fixed, mid)?,
                };
                acc += v.norm() * (b - a);
            }
            Ok(acc)
        }
    }
}

/// Verify successive integration for a regularly convergent double integral:
/// estimate lim I₁, lim I₂ and the Pringsheim value, check the three pairwise
/// residuals against 4ε, and verify the finite-rectangle iterated-integral
/// identity on random rectangles. Refuses with the divergence witness when
/// the regular-convergence hypothesis fails.
pub fn fubini_check(f: &Integrand, cfg: &FubiniConfig) -> Result<FubiniReport, FubiniError> {
    cfg.classify.validate()?;
    if !cfg.residual_eps.is_finite() || cfg.residual_eps <= 0.0 {
        return Err(FubiniError::InvalidConfig(
            "residual_eps must be positive".to_string(),
        ));
    }
    let regular = classify_integral_regular(f, &cfg.classify)?;
    if regular.status != Status::Converges {
        return Err(FubiniError::HypothesisRejected { verdict: regular });
    }

    let ccfg = IntegralClassifierConfig {
        eps: cfg.residual_eps,
        ..cfg.classify
    };
    let a_grid = horizon_grid(ccfg.grid, ccfg.x_cap);
    let b_grid = horizon_grid(ccfg.grid, ccfg.y_cap);
    let i1 = iterated_limit_i1(f, &a_grid, &ccfg)?;
    let i2 = iterated_limit_i2(f, &b_grid, &ccfg)?;

    let outer_settle = |curve: &IteratedCurve| -> (Complex64, bool) {
        let pts = &curve.points;
        let last = pts.last().unwrap();
        let mut ok = pts.iter().all(|p| p.stabilized);
        if pts.len() >= 2 {
            let step = (last.estimate - pts[pts.len() - 2].estimate).norm();
            ok = ok && step < cfg.residual_eps;
        }
        (last.estimate, ok)
    };
    let (i1_limit, i1_ok) = outer_settle(&i1);
    let (i2_limit, i2_ok) = outer_settle(&i2);
    let pringsheim = f.partial_integral(ccfg.x_cap, ccfg.y_cap)?;

    let residuals = Residuals {
        i1_vs_i2: (i1_limit - i2_limit).norm(),
        i1_vs_pringsheim: (i1_limit - pringsheim).norm(),
        i2_vs_pringsheim: (i2_limit - pringsheim).norm(),
    };
    let tolerance = 4.0 * cfg.residual_eps;

    // Finite-rectangle identity: both iteration orders against the direct
    // rectangle integral, on random rectangles inside the caps.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.classify.seed.wrapping_add(1));
    let reach_x = cfg.classify.x_cap.min(64.0);
    let reach_y = cfg.classify.y_cap.min(64.0);
    let mut finite_fubini_max_gap = 0.0f64;
    for _ in 0..10 {
        let x = rng.gen_range(0.0..reach_x);
        let x1 = rng.gen_range(x..=reach_x);
        let y = rng.gen_range(0.0..reach_y);
        let y1 = rng.gen_range(y..=reach_y);
        let r = RectRegion { x, x1, y, y1 };
        let direct = f.rect_integral(&r)?;
        let inner_v = iterated_rect(f, &r, IterationOrder::InnerV)?;
        let inner_u = iterated_rect(f, &r, IterationOrder::InnerU)?;
        finite_fubini_max_gap = finite_fubini_max_gap
            .max((direct - inner_v).norm())
            .max((direct - inner_u).norm());
    }

    let sample_points = [0.5, 1.5, 2.5, 3.5];
    let mut marginal_abs_u = Vec::new();
    let mut marginal_abs_v = Vec::new();
    for &t in &sample_points {
        marginal_abs_u.push(MarginalSample {
            at: t,
            abs_mass: marginal_abs(f, Axis::U, t, cfg.classify.x_cap)?,
        });
        marginal_abs_v.push(MarginalSample {
            at: t,
            abs_mass: marginal_abs(f, Axis::V, t, cfg.classify.y_cap)?,
        });
    }

    let within_tolerance = residuals.max() <= tolerance;
    Ok(FubiniReport {
        i1_sup_delta: i1.sup_last_delta,
        i2_sup_delta: i2.sup_last_delta,
        i1_curve: i1.points,
        i2_curve: i2.points,
        i1_limit,
        i2_limit,
        pringsheim,
        residuals,
        tolerance,
        within_tolerance,
        stabilized: i1_ok && i2_ok,
        finite_fubini_max_gap,
        marginal_abs_u,
        marginal_abs_v,
    })
}
