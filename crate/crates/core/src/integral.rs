//! Integrand representations and exact / quadrature evaluation of rectangular
//! partial integrals I(x,y) = ∫₀ˣ∫₀ʸ f(u,v) du dv over the closed first
//! quadrant, together with rectangle and strip integrals.
//!
//! Three integrand shapes are supported:
//!
//! * [`Integrand::CellGrid`] — a unit-cell step function f(u,v) = a_{j,k} on
//!   [j, j+1) × [k, k+1), backed by a [`PrefixSumTable`]. Partial integrals
//!   are computed exactly as cell-area weighted sums (prefix corner plus the
//!   two fractional boundary strips plus the fractional corner cell); no
//!   sampling is involved.
//! * [`Integrand::DyadicBlocks`] — a parameter-free ±1 checkerboard field:
//!   for each scale k ≥ 0 the rectangle [2ᵏ, 2ᵏ⁺¹) × (2⁻ᵏ⁻¹, 2⁻ᵏ] splits
//!   into four sub-blocks of area 1/8 signed in checker pattern, and the
//!   whole picture is mirrored across the diagonal so f(u,v) = f(v,u).
//!   Blocks get exponentially thin, so evaluation is analytic (signed
//!   interval intersections), never sampled.
//! * [`Integrand::Callable`] — an arbitrary value function integrated by a
//!   per-cell product rule with dyadic refinement until successive estimates
//!   agree to `rel_tol`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::series::{IndexDomain, PrefixSumTable, SeriesError, TermSource};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub type ValueFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

#[derive(Debug, Error)]
pub enum IntegralError {
    #[error("negative coordinate {name} = {value}")]
    NegativeCoordinate { name: &'static str, value: f64 },
    #[error("coordinate {name} = {value} exceeds the evaluable range {max}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        max: f64,
    },
    #[error("invalid rectangle ({x},{x1})x({y},{y1}): require 0 <= x <= x1 and 0 <= y <= y1")]
    InvalidRect { x: f64, x1: f64, y: f64, y1: f64 },
    #[error(
        "quadrature failed to meet rel_tol {requested:e} at max refinement (best delta {achieved:e})"
    )]
    ToleranceNotMet {
        best: Complex64,
        achieved: f64,
        requested: f64,
    },
    #[error("cell embedding is only defined for NatSquare sources")]
    UnsupportedDomain,
    #[error("plane integrand is missing its {which} quadrant")]
    MissingQuadrant { which: &'static str },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    Midpoint,
    /// Two-point Gauss–Legendre product rule per sub-cell.
    GaussTwoPoint,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    /// Sub-cells per unit length at refinement level 0.
    pub base_cells: u32,
    /// Maximum number of mesh halvings.
    pub max_refinements: u32,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadRule::GaussTwoPoint,
            base_cells: 1,
            max_refinements: 12,
            rel_tol: 1e-10,
        }
    }
}

/// An axis-aligned rectangle [x, x1] × [y, y1] in the closed first quadrant.
/// Degenerate rectangles (x = x1 or y = y1) are allowed and integrate to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectRegion {
    pub x: f64,
    pub x1: f64,
    pub y: f64,
    pub y1: f64,
}

impl RectRegion {
    pub fn new(x: f64, x1: f64, y: f64, y1: f64) -> Result<Self, IntegralError> {
        if !(x >= 0.0 && y >= 0.0 && x <= x1 && y <= y1) {
            return Err(IntegralError::InvalidRect { x, x1, y, y1 });
        }
        Ok(RectRegion { x, x1, y, y1 })
    }

    pub fn is_degenerate(&self) -> bool {
        self.x == self.x1 || self.y == self.y1
    }
}

#[derive(Clone)]
pub struct CellGrid {
    table: Arc<PrefixSumTable>,
}

#[derive(Clone)]
pub struct CallableIntegrand {
    f: ValueFn,
    spec: QuadratureSpec,
}

#[derive(Clone)]
pub enum Integrand {
    CellGrid(CellGrid),
    DyadicBlocks,
    Callable(CallableIntegrand),
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrand::CellGrid(g) => f
                .debug_struct("CellGrid")
                .field("cap_m", &g.table.cap_m())
                .field("cap_n", &g.table.cap_n())
                .finish(),
            Integrand::DyadicBlocks => f.write_str("DyadicBlocks"),
            Integrand::Callable(c) => f.debug_struct("Callable").field("spec", &c.spec).finish(),
        }
    }
}

/// Embed a ℕ²-indexed term source as the step function f(u,v) = a_{j,k} on
/// [j, j+1) × [k, k+1), cached up to the given caps. For integer arguments,
/// `partial_integral(m, n)` then equals the series partial sum s_{m−1,n−1}
/// exactly.
pub fn cell_embed(
    source: &TermSource,
    cap_m: usize,
    cap_n: usize,
) -> Result<Integrand, IntegralError> {
    if source.domain() != IndexDomain::NatSquare {
        return Err(IntegralError::UnsupportedDomain);
    }
    let table = PrefixSumTable::build(source, cap_m, cap_n)?;
    Ok(Integrand::CellGrid(CellGrid {
        table: Arc::new(table),
    }))
}

/// Wrap an already-built prefix table as a cell-grid integrand.
pub fn cell_grid(table: Arc<PrefixSumTable>) -> Integrand {
    Integrand::CellGrid(CellGrid { table })
}

pub fn callable<F>(f: F, spec: QuadratureSpec) -> Integrand
where
    F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
{
    Integrand::Callable(CallableIntegrand {
        f: Arc::new(f),
        spec,
    })
}

impl CellGrid {
    pub fn table(&self) -> &PrefixSumTable {
        &self.table
    }

    fn max_x(&self) -> f64 {
        (self.table.cap_m() + 1) as f64
    }

    fn max_y(&self) -> f64 {
        (self.table.cap_n() + 1) as f64
    }

    /// Exact I(x,y): complete-cell prefix corner plus fractional strips.
    fn partial_integral(&self, x: f64, y: f64) -> Result<Complex64, IntegralError> {
        if x == 0.0 || y == 0.0 {
            return Ok(ZERO);
        }
        let complete_x = x.floor();
        let complete_y = y.floor();
        let frac_x = x - complete_x;
        let frac_y = y - complete_y;
        let lm = complete_x as i64 - 1;
        let ln = complete_y as i64 - 1;
        let base = self.table.partial_sum(lm, ln)?;
        let mut total = base;
        if frac_x > 0.0 {
            let row = self.table.partial_sum(complete_x as i64, ln)? - base;
            total += frac_x * row;
        }
        if frac_y > 0.0 {
            let col = self.table.partial_sum(lm, complete_y as i64)? - base;
            total += frac_y * col;
        }
        if frac_x > 0.0 && frac_y > 0.0 {
            total += frac_x * frac_y * self.table.term(complete_x as i64, complete_y as i64);
        }
        Ok(total)
    }
}

/// Signed area of the sub-diagonal dyadic blocks inside [xa, xb] × [ya, yb].
///
/// For scale k the u range [2ᵏ, 2ᵏ⁺¹) splits at 1.5·2ᵏ and the v range
/// (2⁻ᵏ⁻¹, 2⁻ᵏ] splits at 0.75·2⁻ᵏ; signs are +1 on (first, top) and
/// (second, bottom), −1 on the other two, which factors as
/// (u₁ − u₂)(v_top − v_bot).
fn dyadic_lower_area(xa: f64, xb: f64, ya: f64, yb: f64) -> f64 {
    if xb <= 1.0 || yb <= 0.0 {
        return 0.0;
    }
    let overlap = |lo: f64, hi: f64, a: f64, b: f64| (hi.min(b) - lo.max(a)).max(0.0);
    let kmax = xb.log2().ceil() as i32 + 1;
    let mut total = 0.0;
    for k in 0..=kmax {
        let p = 2f64.powi(k);
        let q = 2f64.powi(-k);
        let u1 = overlap(p, 1.5 * p, xa, xb);
        let u2 = overlap(1.5 * p, 2.0 * p, xa, xb);
        let v_top = overlap(0.75 * q, q, ya, yb);
        let v_bot = overlap(0.5 * q, 0.75 * q, ya, yb);
        total += (u1 - u2) * (v_top - v_bot);
    }
    total
}

/// Pointwise value of the dyadic-block field on the closed lower half
/// {0 ≤ v ≤ u}; the field is extended to the rest of the quadrant by
/// f(u,v) = f(v,u).
fn dyadic_lower_value(u: f64, v: f64) -> f64 {
    if u < 1.0 || v <= 0.0 {
        return 0.0;
    }
    let mut k = u.log2().floor() as i32;
    // Guard against rounding at powers of two.
    if 2f64.powi(k + 1) <= u {
        k += 1;
    } else if 2f64.powi(k) > u {
        k -= 1;
    }
    if k < 0 {
        return 0.0;
    }
    let p = 2f64.powi(k);
    let q = 2f64.powi(-k);
    if !(v > 0.5 * q && v <= q) {
        return 0.0;
    }
    let first_u = u < 1.5 * p;
    let top_v = v > 0.75 * q;
    if first_u == top_v {
        1.0
    } else {
        -1.0
    }
}

fn dyadic_value(u: f64, v: f64) -> f64 {
    if v <= u {
        dyadic_lower_value(u, v)
    } else {
        dyadic_lower_value(v, u)
    }
}

fn dyadic_rect(r: &RectRegion) -> f64 {
    dyadic_lower_area(r.x, r.x1, r.y, r.y1) + dyadic_lower_area(r.y, r.y1, r.x, r.x1)
}

/// Composite 1-D rule over [lo, hi] with n sub-intervals.
fn composite_1d<G: Fn(f64) -> Complex64>(
    g: &G,
    lo: f64,
    hi: f64,
    n: usize,
    rule: QuadRule,
) -> Complex64 {
    let h = (hi - lo) / n as f64;
    let mut acc = ZERO;
    match rule {
        QuadRule::Midpoint => {
            for i in 0..n {
                acc += g(lo + (i as f64 + 0.5) * h);
            }
            acc * h
        }
        QuadRule::GaussTwoPoint => {
            let off = h / (2.0 * 3f64.sqrt());
            for i in 0..n {
                let c = lo + (i as f64 + 0.5) * h;
                acc += g(c - off) + g(c + off);
            }
            acc * (h / 2.0)
        }
    }
}

/// 1-D integral with dyadic refinement until successive estimates differ by
/// less than `rel_tol` (relative to max(1, |estimate|)).
fn quad_1d<G: Fn(f64) -> Complex64>(
    g: &G,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, IntegralError> {
    if hi <= lo {
        return Ok(ZERO);
    }
    let base = (((hi - lo) * spec.base_cells as f64).ceil() as usize).max(1);
    let mut prev: Option<Complex64> = None;
    for r in 0..=spec.max_refinements {
        let n = base << r;
        if n > 1 << 22 {
            break;
        }
        let est = composite_1d(g, lo, hi, n, spec.rule);
        if let Some(p) = prev {
            let delta = (est - p).norm();
            if delta <= spec.rel_tol * est.norm().max(1.0) {
                return Ok(est);
            }
        }
        prev = Some(est);
    }
    let best = prev.unwrap_or(ZERO);
    Err(IntegralError::ToleranceNotMet {
        best,
        achieved: f64::NAN,
        requested: spec.rel_tol,
    })
}

impl CallableIntegrand {
    fn rect(&self, r: &RectRegion) -> Result<Complex64, IntegralError> {
        if r.is_degenerate() {
            return Ok(ZERO);
        }
        let nx0 = (((r.x1 - r.x) * self.spec.base_cells as f64).ceil() as usize).max(1);
        let ny0 = (((r.y1 - r.y) * self.spec.base_cells as f64).ceil() as usize).max(1);
        let mut prev: Option<Complex64> = None;
        let mut last_delta = f64::NAN;
        for refine in 0..=self.spec.max_refinements {
            let nx = nx0 << refine;
            let ny = ny0 << refine;
            if nx.saturating_mul(ny) > 1 << 24 {
                break;
            }
            let est = self.composite(r, nx, ny);
            if let Some(p) = prev {
                last_delta = (est - p).norm();
                if last_delta <= self.spec.rel_tol * est.norm().max(1.0) {
                    return Ok(est);
                }
            }
            prev = Some(est);
        }
        Err(IntegralError::ToleranceNotMet {
            best: prev.unwrap_or(ZERO),
            achieved: last_delta,
            requested: self.spec.rel_tol,
        })
    }

    fn composite(&self, r: &RectRegion, nx: usize, ny: usize) -> Complex64 {
        let hx = (r.x1 - r.x) / nx as f64;
        let hy = (r.y1 - r.y) / ny as f64;
        let mut acc = ZERO;
        match self.spec.rule {
            QuadRule::Midpoint => {
                for i in 0..nx {
                    let u = r.x + (i as f64 + 0.5) * hx;
                    for j in 0..ny {
                        let v = r.y + (j as f64 + 0.5) * hy;
                        acc += (self.f)(u, v);
                    }
                }
                acc * (hx * hy)
            }
            QuadRule::GaussTwoPoint => {
                let ox = hx / (2.0 * 3f64.sqrt());
                let oy = hy / (2.0 * 3f64.sqrt());
                for i in 0..nx {
                    let cu = r.x + (i as f64 + 0.5) * hx;
                    for j in 0..ny {
                        let cv = r.y + (j as f64 + 0.5) * hy;
                        acc += (self.f)(cu - ox, cv - oy)
                            + (self.f)(cu - ox, cv + oy)
                            + (self.f)(cu + ox, cv - oy)
                            + (self.f)(cu + ox, cv + oy);
                    }
                }
                acc * (hx * hy / 4.0)
            }
        }
    }
}

impl Integrand {
    /// Pointwise value f(u, v).
    pub fn value(&self, u: f64, v: f64) -> Result<Complex64, IntegralError> {
        if u < 0.0 {
            return Err(IntegralError::NegativeCoordinate {
                name: "u",
                value: u,
            });
        }
        if v < 0.0 {
            return Err(IntegralError::NegativeCoordinate {
                name: "v",
                value: v,
            });
        }
        match self {
            Integrand::CellGrid(g) => {
                if u >= g.max_x() {
                    return Err(IntegralError::OutOfRange {
                        name: "u",
                        value: u,
                        max: g.max_x(),
                    });
                }
                if v >= g.max_y() {
                    return Err(IntegralError::OutOfRange {
                        name: "v",
                        value: v,
                        max: g.max_y(),
                    });
                }
                Ok(g.table.term(u.floor() as i64, v.floor() as i64))
            }
            Integrand::DyadicBlocks => Ok(Complex64::new(dyadic_value(u, v), 0.0)),
            Integrand::Callable(c) => Ok((c.f)(u, v)),
        }
    }

    /// Rectangular partial integral I(x, y) = ∫₀ˣ∫₀ʸ f(u,v) du dv.
    pub fn partial_integral(&self, x: f64, y: f64) -> Result<Complex64, IntegralError> {
        if x < 0.0 {
            return Err(IntegralError::NegativeCoordinate {
                name: "x",
                value: x,
            });
        }
        if y < 0.0 {
            return Err(IntegralError::NegativeCoordinate {
                name: "y",
                value: y,
            });
        }
        match self {
            Integrand::CellGrid(g) => {
                if x > g.max_x() {
                    return Err(IntegralError::OutOfRange {
                        name: "x",
                        value: x,
                        max: g.max_x(),
                    });
                }
                if y > g.max_y() {
                    return Err(IntegralError::OutOfRange {
                        name: "y",
                        value: y,
                        max: g.max_y(),
                    });
                }
                g.partial_integral(x, y)
            }
            Integrand::DyadicBlocks => Ok(Complex64::new(
                dyadic_rect(&RectRegion {
                    x: 0.0,
                    x1: x,
                    y: 0.0,
                    y1: y,
                }),
                0.0,
            )),
            Integrand::Callable(c) => c.rect(&RectRegion {
                x: 0.0,
                x1: x,
                y: 0.0,
                y1: y,
            }),
        }
    }

    /// ∫ over the rectangle, as the four-corner combination of partial
    /// integrals (exact for step integrands).
    pub fn rect_integral(&self, r: &RectRegion) -> Result<Complex64, IntegralError> {
        if r.is_degenerate() {
            return Ok(ZERO);
        }
        match self {
            Integrand::DyadicBlocks => Ok(Complex64::new(dyadic_rect(r), 0.0)),
            Integrand::Callable(c) => c.rect(r),
            Integrand::CellGrid(_) => Ok(self.partial_integral(r.x1, r.y1)?
                - self.partial_integral(r.x, r.y1)?
                - self.partial_integral(r.x1, r.y)?
                + self.partial_integral(r.x, r.y)?),
        }
    }

    /// Coordinates in [lo, hi] where the integrand may change value along
    /// the given axis (cell edges, dyadic block edges). Empty for callables.
    pub fn breakpoints(&self, axis: Axis, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match self {
            Integrand::CellGrid(g) => {
                let cap = match axis {
                    Axis::U => g.max_x(),
                    Axis::V => g.max_y(),
                };
                let top = hi.min(cap);
                let mut j = lo.ceil().max(0.0);
                while j <= top {
                    out.push(j);
                    j += 1.0;
                }
            }
            Integrand::DyadicBlocks => {
                for k in 0..=60 {
                    let p = 2f64.powi(k);
                    for c in [p, 1.5 * p, 2.0 * p] {
                        if c >= lo && c <= hi {
                            out.push(c);
                        }
                    }
                    let q = 2f64.powi(-k);
                    for c in [0.5 * q, 0.75 * q, q] {
                        if c >= lo && c <= hi {
                            out.push(c);
                        }
                    }
                    if p > hi * 2.0 && q < lo.max(f64::MIN_POSITIVE) {
                        break;
                    }
                }
                out.sort_by(|a, b| a.partial_cmp(b).unwrap());
                out.dedup();
            }
            Integrand::Callable(_) => {}
        }
        out
    }

    pub fn quad_spec(&self) -> Option<&QuadratureSpec> {
        match self {
            Integrand::Callable(c) => Some(&c.spec),
            _ => None,
        }
    }

    /// ∫ along a line at fixed u (axis = V) or fixed v (axis = U), exact for
    /// step integrands by decomposing at the breakpoints.
    pub fn line_integral(
        &self,
        axis: Axis,
        fixed: f64,
        lo: f64,
        hi: f64,
    ) -> Result<Complex64, IntegralError> {
        if hi <= lo {
            return Ok(ZERO);
        }
        match self {
            Integrand::Callable(c) => {
                let f = c.f.clone();
                let g = move |t: f64| match axis {
                    Axis::V => f(fixed, t),
                    Axis::U => f(t, fixed),
                };
                quad_1d(&g, lo, hi, &c.spec)
            }
            _ => {
                let mut cuts = self.breakpoints(
                    match axis {
                        Axis::V => Axis::V,
                        Axis::U => Axis::U,
                    },
                    lo,
                    hi,
                );
                cuts.push(lo);
                cuts.push(hi);
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cuts.dedup();
                let mut acc = ZERO;
                for w in cuts.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    if b <= a {
                        continue;
                    }
                    let mid = 0.5 * (a + b);
                    let val = match axis {
                        Axis::V => self.value(fixed, mid)?,
                        Axis::U => self.value(mid, fixed)?,
                    };
                    acc += (b - a) * val;
                }
                Ok(acc)
            }
        }
    }
}

/// ∫₀^{x1} ∫_y^{y1} f(u,v) du dv — the horizontal strip integral.
pub fn horizontal_strip(
    f: &Integrand,
    x1: f64,
    y: f64,
    y1: f64,
) -> Result<Complex64, IntegralError> {
    let r = RectRegion::new(0.0, x1, y, y1)?;
    f.rect_integral(&r)
}

/// ∫_x^{x1} ∫₀^{y1} f(u,v) du dv — the vertical strip integral.
pub fn vertical_strip(f: &Integrand, x: f64, x1: f64, y1: f64) -> Result<Complex64, IntegralError> {
    let r = RectRegion::new(x, x1, 0.0, y1)?;
    f.rect_integral(&r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOrder {
    /// ∫ du of ( ∫ f(u,·) dv ): inner integral over v.
    InnerV,
    /// ∫ dv of ( ∫ f(·,v) du ): inner integral over u.
    InnerU,
}

/// Iterated (successive) integration over a bounded rectangle, an
/// independent evaluation route from [`Integrand::rect_integral`]: the outer
/// axis is decomposed at the integrand's breakpoints and the inner integral
/// is a line integral at each piece.
pub fn iterated_rect(
    f: &Integrand,
    r: &RectRegion,
    order: IterationOrder,
) -> Result<Complex64, IntegralError> {
    if r.is_degenerate() {
        return Ok(ZERO);
    }
    let (outer_axis, inner_axis, olo, ohi, ilo, ihi) = match order {
        IterationOrder::InnerV => (Axis::U, Axis::V, r.x, r.x1, r.y, r.y1),
        IterationOrder::InnerU => (Axis::V, Axis::U, r.y, r.y1, r.x, r.x1),
    };
    match f {
        Integrand::Callable(c) => {
            let spec = c.spec;
            let inner_spec = QuadratureSpec {
                rel_tol: spec.rel_tol * 0.25,
                ..spec
            };
            let cc = c.f.clone();
            let g = move |t: f64| {
                let h = |s: f64| match inner_axis {
                    Axis::V => cc(t, s),
                    Axis::U => cc(s, t),
                };
                quad_1d(&h, ilo, ihi, &inner_spec).unwrap_or(ZERO)
            };
            quad_1d(&g, olo, ohi, &spec)
        }
        _ => {
            let mut cuts = f.breakpoints(outer_axis, olo, ohi);
            cuts.push(olo);
            cuts.push(ohi);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            let mut acc = ZERO;
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b <= a {
                    continue;
                }
                let mid = 0.5 * (a + b);
                acc += (b - a) * f.line_integral(inner_axis, mid, ilo, ihi)?;
            }
            Ok(acc)
        }
    }
}

/// An integrand over the full plane, stored as four quadrant integrands
/// sharing the axes: `f(u,v)` is `pp(u,v)` for u,v ≥ 0, `np(−u,v)` for
/// u < 0 ≤ v, `pn(u,−v)` for v < 0 ≤ u and `nn(−u,−v)` otherwise.
pub struct PlaneIntegrand {
    pp: Option<Integrand>,
    np: Option<Integrand>,
    pn: Option<Integrand>,
    nn: Option<Integrand>,
}

impl PlaneIntegrand {
    pub fn new(pp: Integrand, np: Integrand, pn: Integrand, nn: Integrand) -> Self {
        PlaneIntegrand {
            pp: Some(pp),
            np: Some(np),
            pn: Some(pn),
            nn: Some(nn),
        }
    }

    pub fn from_parts(
        pp: Option<Integrand>,
        np: Option<Integrand>,
        pn: Option<Integrand>,
        nn: Option<Integrand>,
    ) -> Self {
        PlaneIntegrand { pp, np, pn, nn }
    }

    /// Even reflection of a quadrant integrand into all four quadrants.
    pub fn even_reflection(f: Integrand) -> Self {
        PlaneIntegrand::new(f.clone(), f.clone(), f.clone(), f)
    }

    fn quadrants(&self) -> Result<[&Integrand; 4], IntegralError> {
        fn get<'a>(
            q: &'a Option<Integrand>,
            which: &'static str,
        ) -> Result<&'a Integrand, IntegralError> {
            q.as_ref().ok_or(IntegralError::MissingQuadrant { which })
        }
        Ok([
            get(&self.pp, "pp")?,
            get(&self.np, "np")?,
            get(&self.pn, "pn")?,
            get(&self.nn, "nn")?,
        ])
    }

    /// Symmetric rectangular partial integral ∫_{−x}^{x} ∫_{−y}^{y} f.
    pub fn symmetric_partial_integral(&self, x: f64, y: f64) -> Result<Complex64, IntegralError> {
        let quads = self.quadrants()?;
        let mut acc = ZERO;
        for q in quads {
            acc += q.partial_integral(x, y)?;
        }
        Ok(acc)
    }

    /// ∫ over the annulus {x < |u| < x1} × {y < |v| < y1}, decomposed into
    /// the four quadrant rectangles.
    pub fn annulus_integral(
        &self,
        x: f64,
        x1: f64,
        y: f64,
        y1: f64,
    ) -> Result<Complex64, IntegralError> {
        let r = RectRegion::new(x, x1, y, y1)?;
        let quads = self.quadrants()?;
        let mut acc = ZERO;
        for q in quads {
            acc += q.rect_integral(&r)?;
        }
        Ok(acc)
    }
}
