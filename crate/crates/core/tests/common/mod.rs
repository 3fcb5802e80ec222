//! Brute-force oracles shared by the integration suites.
//!
//! Everything here computes by direct enumeration against the pointwise
//! term / value callables, independent of the prefix-table and signed-area
//! paths under test.

// Each test binary compiles this module separately and uses its own subset.
#![allow(dead_code)]

use bilimit_core::integral::{Axis, Integrand, RectRegion};
use bilimit_core::series::TermSource;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn brute_partial_sum(src: &TermSource, m: i64, n: i64) -> Complex64 {
    if m < 0 || n < 0 {
        return ZERO;
    }
    let mut acc = ZERO;
    for j in 0..=m {
        for k in 0..=n {
            acc += src.term(j, k);
        }
    }
    acc
}

pub fn brute_block_sum(src: &TermSource, m: i64, n: i64, m_hi: i64, n_hi: i64) -> Complex64 {
    let mut acc = ZERO;
    for j in m..=m_hi {
        for k in n..=n_hi {
            acc += src.term(j, k);
        }
    }
    acc
}

pub fn brute_abs_partial(src: &TermSource, m: i64, n: i64) -> f64 {
    let mut acc = 0.0;
    for j in 0..=m {
        for k in 0..=n {
            acc += src.term(j, k).norm();
        }
    }
    acc
}

/// I(x, y) for a unit-cell step source by direct cell-area summation.
pub fn brute_cell_partial_integral(src: &TermSource, x: f64, y: f64) -> Complex64 {
    let mut acc = ZERO;
    let jm = x.ceil() as i64;
    let km = y.ceil() as i64;
    for j in 0..jm {
        for k in 0..km {
            let lu = (x - j as f64).clamp(0.0, 1.0);
            let lv = (y - k as f64).clamp(0.0, 1.0);
            acc += src.term(j, k) * lu * lv;
        }
    }
    acc
}

/// ∫ over a rectangle by decomposing at the integrand's breakpoints along
/// both axes and evaluating the pointwise value at cellette centers. Exact
/// for step integrands; independent of the signed-area arithmetic.
pub fn brute_rect_via_values(f: &Integrand, r: &RectRegion) -> Complex64 {
    let cuts = |axis: Axis, lo: f64, hi: f64| {
        let mut c = f.breakpoints(axis, lo, hi);
        c.push(lo);
        c.push(hi);
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        c.dedup();
        c
    };
    let us = cuts(Axis::U, r.x, r.x1);
    let vs = cuts(Axis::V, r.y, r.y1);
    let mut acc = ZERO;
    for uw in us.windows(2) {
        if uw[1] <= uw[0] {
            continue;
        }
        let umid = 0.5 * (uw[0] + uw[1]);
        for vw in vs.windows(2) {
            if vw[1] <= vw[0] {
                continue;
            }
            let vmid = 0.5 * (vw[0] + vw[1]);
            acc += f.value(umid, vmid).unwrap() * (uw[1] - uw[0]) * (vw[1] - vw[0]);
        }
    }
    acc
}

/// Same decomposition, summing |f|.
pub fn brute_rect_abs_via_values(f: &Integrand, r: &RectRegion) -> f64 {
    let cuts = |axis: Axis, lo: f64, hi: f64| {
        let mut c = f.breakpoints(axis, lo, hi);
        c.push(lo);
        c.push(hi);
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        c.dedup();
        c
    };
    let us = cuts(Axis::U, r.x, r.x1);
    let vs = cuts(Axis::V, r.y, r.y1);
    let mut acc = 0.0;
    for uw in us.windows(2) {
        if uw[1] <= uw[0] {
            continue;
        }
        let umid = 0.5 * (uw[0] + uw[1]);
        for vw in vs.windows(2) {
            if vw[1] <= vw[0] {
                continue;
            }
            let vmid = 0.5 * (vw[0] + vw[1]);
            acc += f.value(umid, vmid).unwrap().norm() * (uw[1] - uw[0]) * (vw[1] - vw[0]);
        }
    }
    acc
}

/// A sparse random source over a small index box, for exactness properties.
pub fn random_sparse_source(seed: u64, box_side: i64, entries: usize) -> TermSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<(i64, i64, f64)> = Vec::with_capacity(entries);
    for _ in 0..entries {
        let j = rng.gen_range(0..=box_side);
        let k = rng.gen_range(0..=box_side);
        let v = rng.gen_range(-2.0..2.0);
        cells.push((j, k, v));
    }
    TermSource::nat_real(move |j, k| {
        cells
            .iter()
            .filter(|&&(a, b, _)| a == j && b == k)
            .map(|&(_, _, v)| v)
            .sum()
    })
}

/// Nonnegative source that converges crisply: c · r^(j+k).
pub fn random_geometric_source(seed: u64) -> TermSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: f64 = rng.gen_range(0.5..2.0);
    let r: f64 = rng.gen_range(0.25..0.55);
    TermSource::nat_real(move |j, k| c * r.powi((j + k) as i32))
}

/// Nonnegative source that diverges crisply: a floor plus mild variation.
pub fn random_floor_source(seed: u64) -> TermSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: f64 = rng.gen_range(0.05..0.5);
    let w: f64 = rng.gen_range(0.0..0.5);
    TermSource::nat_real(move |j, k| c * (1.0 + w * (((j * 31 + k * 17) % 7) as f64 / 7.0)))
}
