//! Terms, rectangular partial sums, block sums, and row/column partial sums
//! of double series indexed by ℕ² or ℤ².
//!
//! The central object is [`PrefixSumTable`], a dense cache of the rectangular
//! partial sums s_{m,n} = Σ_{j≤m} Σ_{k≤n} a_{j,k} up to explicit caps, with
//! the boundary convention s_{m,n} = 0 whenever min{m,n} = −1. Block sums
//! over [m, M] × [n, N] come out of the table in O(1) by the four-corner
//! inclusion–exclusion identity
//!
//! ```text
//! Σ_{j=m..M} Σ_{k=n..N} a_{j,k} = s_{M,N} − s_{m−1,N} − s_{M,n−1} + s_{m−1,n−1}.
//! ```
//!
//! ℤ²-indexed sources are handled by [`SymmetricTable`], four quadrant tables
//! sharing the axes so that the j = 0 and k = 0 lines are counted exactly
//! once in symmetric partial sums Σ_{|j|≤m} Σ_{|k|≤n} a_{j,k}.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub type TermFn = Arc<dyn Fn(i64, i64) -> Complex64 + Send + Sync>;
pub type OracleFn = Arc<dyn Fn(i64, i64) -> Option<Complex64> + Send + Sync>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexDomain {
    /// Terms indexed by (j, k) with j, k ≥ 0.
    NatSquare,
    /// Terms indexed by (j, k) ranging over all of ℤ².
    IntSquare,
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("index {index} on the {axis} axis exceeds the table cap {cap}")]
    IndexOutOfCap {
        axis: &'static str,
        index: i64,
        cap: usize,
    },
    #[error("index {index} on the {axis} axis is below the boundary row -1")]
    IndexBelowBoundary { axis: &'static str, index: i64 },
    #[error("invalid block range: require m <= M and n <= N, got ({m},{n})..({m_hi},{n_hi})")]
    InvalidRange {
        m: i64,
        n: i64,
        m_hi: i64,
        n_hi: i64,
    },
    #[error("operation requires a source indexed by {expected:?}")]
    DomainMismatch { expected: IndexDomain },
    #[error("negative index {index} on the {axis} axis")]
    NegativeIndex { axis: &'static str, index: i64 },
}

/// A generator of complex terms a_{j,k}.
///
/// The term callable must be deterministic and effect-free: repeated calls
/// with equal arguments return equal values. Sources over `NatSquare` are
/// only ever queried with j ≥ 0 and k ≥ 0. An optional closed-form
/// partial-sum oracle can be attached where one is known.
#[derive(Clone)]
pub struct TermSource {
    domain: IndexDomain,
    term: TermFn,
    oracle: Option<OracleFn>,
}

impl TermSource {
    pub fn nat<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    {
        TermSource {
            domain: IndexDomain::NatSquare,
            term: Arc::new(f),
            oracle: None,
        }
    }

    /// Real-valued convenience constructor over ℕ².
    pub fn nat_real<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> f64 + Send + Sync + 'static,
    {
        Self::nat(move |j, k| Complex64::new(f(j, k), 0.0))
    }

    pub fn int_plane<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    {
        TermSource {
            domain: IndexDomain::IntSquare,
            term: Arc::new(f),
            oracle: None,
        }
    }

    pub fn int_plane_real<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> f64 + Send + Sync + 'static,
    {
        Self::int_plane(move |j, k| Complex64::new(f(j, k), 0.0))
    }

    /// Attach a closed-form partial-sum oracle; `None` marks index pairs the
    /// closed form does not cover.
    pub fn with_oracle<F>(mut self, f: F) -> Self
    where
        F: Fn(i64, i64) -> Option<Complex64> + Send + Sync + 'static,
    {
        self.oracle = Some(Arc::new(f));
        self
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn term(&self, j: i64, k: i64) -> Complex64 {
        debug_assert!(
            self.domain == IndexDomain::IntSquare || (j >= 0 && k >= 0),
            "NatSquare source queried at ({j},{k})"
        );
        (self.term)(j, k)
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    pub fn oracle_partial_sum(&self, m: i64, n: i64) -> Option<Complex64> {
        self.oracle.as_ref().and_then(|f| f(m, n))
    }

    /// The source of absolute values |a_{j,k}| (real, oracle dropped).
    pub fn abs(&self) -> TermSource {
        let term = self.term.clone();
        TermSource {
            domain: self.domain,
            term: Arc::new(move |j, k| Complex64::new(term(j, k).norm(), 0.0)),
            oracle: None,
        }
    }
}

impl fmt::Debug for TermSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TermSource")
            .field("domain", &self.domain)
            .field("oracle", &self.oracle.is_some())
            .finish()
    }
}

/// Dense cache of rectangular partial sums s_{m,n} for 0 ≤ m ≤ cap_m,
/// 0 ≤ n ≤ cap_n, built by the recurrence
/// s_{m,n} = s_{m−1,n} + s_{m,n−1} − s_{m−1,n−1} + a_{m,n}.
///
/// A built table is immutable and safe for concurrent reads.
pub struct PrefixSumTable {
    source: TermSource,
    cap_m: usize,
    cap_n: usize,
    cells: Vec<Complex64>,
}

impl PrefixSumTable {
    pub fn build(source: &TermSource, cap_m: usize, cap_n: usize) -> Result<Self, SeriesError> {
        if source.domain() != IndexDomain::NatSquare {
            return Err(SeriesError::DomainMismatch {
                expected: IndexDomain::NatSquare,
            });
        }
        let w = cap_n + 1;
        let mut cells = vec![ZERO; (cap_m + 1) * w];
        for m in 0..=cap_m {
            for n in 0..=cap_n {
                let a = source.term(m as i64, n as i64);
                let up = if m > 0 { cells[(m - 1) * w + n] } else { ZERO };
                let left = if n > 0 { cells[m * w + n - 1] } else { ZERO };
                let diag = if m > 0 && n > 0 {
                    cells[(m - 1) * w + n - 1]
                } else {
                    ZERO
                };
                cells[m * w + n] = up + left - diag + a;
            }
        }
        Ok(PrefixSumTable {
            source: source.clone(),
            cap_m,
            cap_n,
            cells,
        })
    }

    /// Table of Σ |a_{j,k}|, for absolute-convergence probes.
    pub fn build_abs(source: &TermSource, cap_m: usize, cap_n: usize) -> Result<Self, SeriesError> {
        Self::build(&source.abs(), cap_m, cap_n)
    }

    pub fn cap_m(&self) -> usize {
        self.cap_m
    }

    pub fn cap_n(&self) -> usize {
        self.cap_n
    }

    pub fn source(&self) -> &TermSource {
        &self.source
    }

    pub fn term(&self, j: i64, k: i64) -> Complex64 {
        self.source.term(j, k)
    }

    /// The cached rectangular partial sum s_{m,n}, honoring the boundary
    /// convention s_{m,n} = 0 when min{m,n} = −1.
    pub fn partial_sum(&self, m: i64, n: i64) -> Result<Complex64, SeriesError> {
        if m < -1 {
            return Err(SeriesError::IndexBelowBoundary {
                axis: "m",
                index: m,
            });
        }
        if n < -1 {
            return Err(SeriesError::IndexBelowBoundary {
                axis: "n",
                index: n,
            });
        }
        if m == -1 || n == -1 {
            return Ok(ZERO);
        }
        let (m, n) = (m as usize, n as usize);
        if m > self.cap_m {
            return Err(SeriesError::IndexOutOfCap {
                axis: "m",
                index: m as i64,
                cap: self.cap_m,
            });
        }
        if n > self.cap_n {
            return Err(SeriesError::IndexOutOfCap {
                axis: "n",
                index: n as i64,
                cap: self.cap_n,
            });
        }
        Ok(self.cells[m * (self.cap_n + 1) + n])
    }

    /// Σ_{j=m..m_hi} Σ_{k=n..n_hi} a_{j,k} via the four-corner identity.
    pub fn block_sum(
        &self,
        m: i64,
        n: i64,
        m_hi: i64,
        n_hi: i64,
    ) -> Result<Complex64, SeriesError> {
        if m > m_hi || n > n_hi {
            return Err(SeriesError::InvalidRange { m, n, m_hi, n_hi });
        }
        if m < 0 {
            return Err(SeriesError::NegativeIndex {
                axis: "m",
                index: m,
            });
        }
        if n < 0 {
            return Err(SeriesError::NegativeIndex {
                axis: "n",
                index: n,
            });
        }
        Ok(self.partial_sum(m_hi, n_hi)?
            - self.partial_sum(m - 1, n_hi)?
            - self.partial_sum(m_hi, n - 1)?
            + self.partial_sum(m - 1, n - 1)?)
    }
}

impl fmt::Debug for PrefixSumTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrefixSumTable")
            .field("cap_m", &self.cap_m)
            .field("cap_n", &self.cap_n)
            .finish()
    }
}

/// Σ_{j≤m} Σ_{k≤n} |a_{j,k}| out of a table built with
/// [`PrefixSumTable::build_abs`]. Monotone nondecreasing along both axes.
pub fn abs_partial_sum(table: &PrefixSumTable, m: i64, n: i64) -> Result<f64, SeriesError> {
    let s = table.partial_sum(m, n)?;
    debug_assert_eq!(s.im, 0.0, "abs table holds real cells");
    Ok(s.re)
}

/// Partial sum of the j-th row series: Σ_{k=0..n_max} a_{j,k}.
pub fn row_partial(source: &TermSource, j: i64, n_max: i64) -> Complex64 {
    (0..=n_max).map(|k| source.term(j, k)).sum()
}

/// Partial sum of the k-th column series: Σ_{j=0..m_max} a_{j,k}.
pub fn col_partial(source: &TermSource, k: i64, m_max: i64) -> Complex64 {
    (0..=m_max).map(|j| source.term(j, k)).sum()
}

/// Four quadrant prefix tables over a ℤ²-indexed source, sharing axes.
///
/// Quadrant reindexing: `pp` holds a_{j,k} for j,k ≥ 0; `np` holds
/// a_{−1−j,k}; `pn` holds a_{j,−1−k}; `nn` holds a_{−1−j,−1−k}. The axis
/// lines j = 0 and k = 0 live only in `pp`, so symmetric sums count them
/// exactly once.
pub struct SymmetricTable {
    pp: PrefixSumTable,
    np: PrefixSumTable,
    pn: PrefixSumTable,
    nn: PrefixSumTable,
}

impl SymmetricTable {
    pub fn build(source: &TermSource, cap_m: usize, cap_n: usize) -> Result<Self, SeriesError> {
        if source.domain() != IndexDomain::IntSquare {
            return Err(SeriesError::DomainMismatch {
                expected: IndexDomain::IntSquare,
            });
        }
        let quad = |sj: bool, sk: bool| {
            let term = source.term.clone();
            TermSource::nat(move |j, k| {
                let jj = if sj { -1 - j } else { j };
                let kk = if sk { -1 - k } else { k };
                term(jj, kk)
            })
        };
        Ok(SymmetricTable {
            pp: PrefixSumTable::build(&quad(false, false), cap_m, cap_n)?,
            np: PrefixSumTable::build(&quad(true, false), cap_m, cap_n)?,
            pn: PrefixSumTable::build(&quad(false, true), cap_m, cap_n)?,
            nn: PrefixSumTable::build(&quad(true, true), cap_m, cap_n)?,
        })
    }

    /// Σ_{|j|≤m} Σ_{|k|≤n} a_{j,k}.
    pub fn symmetric_partial_sum(&self, m: i64, n: i64) -> Result<Complex64, SeriesError> {
        if m < 0 {
            return Err(SeriesError::NegativeIndex {
                axis: "m",
                index: m,
            });
        }
        if n < 0 {
            return Err(SeriesError::NegativeIndex {
                axis: "n",
                index: n,
            });
        }
        // np rows 0..m-1 are j = -1..-m; likewise for the other quadrants.
        Ok(self.pp.partial_sum(m, n)?
            + self.np.partial_sum(m - 1, n)?
            + self.pn.partial_sum(m, n - 1)?
            + self.nn.partial_sum(m - 1, n - 1)?)
    }
}

/// One-off symmetric rectangular partial sum Σ_{|j|≤m} Σ_{|k|≤n} a_{j,k},
/// building the quadrant tables on demand.
pub fn symmetric_partial_sum(
    source: &TermSource,
    m: i64,
    n: i64,
) -> Result<Complex64, SeriesError> {
    if m < 0 {
        return Err(SeriesError::NegativeIndex {
            axis: "m",
            index: m,
        });
    }
    if n < 0 {
        return Err(SeriesError::NegativeIndex {
            axis: "n",
            index: n,
        });
    }
    let table = SymmetricTable::build(source, m as usize, n as usize)?;
    table.symmetric_partial_sum(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric() -> TermSource {
        TermSource::nat_real(|j, k| 0.5f64.powi((j + k) as i32))
    }

    #[test]
    fn boundary_rows_are_zero() {
        let table = PrefixSumTable::build(&geometric(), 8, 8).unwrap();
        assert_eq!(table.partial_sum(-1, 5).unwrap(), ZERO);
        assert_eq!(table.partial_sum(3, -1).unwrap(), ZERO);
        assert_eq!(table.partial_sum(-1, -1).unwrap(), ZERO);
    }

    #[test]
    fn partial_sum_matches_direct_summation() {
        let src = geometric();
        let table = PrefixSumTable::build(&src, 16, 16).unwrap();
        for m in 0..=16i64 {
            for n in 0..=16i64 {
                let direct: Complex64 = (0..=m)
                    .flat_map(|j| (0..=n).map(move |k| (j, k)))
                    .map(|(j, k)| src.term(j, k))
                    .sum();
                let cached = table.partial_sum(m, n).unwrap();
                assert!((cached - direct).norm() < 1e-12, "({m},{n})");
            }
        }
    }

    #[test]
    fn out_of_cap_names_the_cap() {
        let table = PrefixSumTable::build(&geometric(), 4, 6).unwrap();
        let err = table.partial_sum(5, 0).unwrap_err();
        assert!(matches!(
            err,
            SeriesError::IndexOutOfCap {
                axis: "m",
                index: 5,
                cap: 4
            }
        ));
        let err = table.partial_sum(0, 9).unwrap_err();
        assert!(err.to_string().contains("cap 6"));
    }

    #[test]
    fn index_below_boundary_rejected() {
        let table = PrefixSumTable::build(&geometric(), 4, 4).unwrap();
        assert!(matches!(
            table.partial_sum(-2, 0),
            Err(SeriesError::IndexBelowBoundary { axis: "m", .. })
        ));
    }

    #[test]
    fn single_cell_block_is_the_term() {
        let src = geometric();
        let table = PrefixSumTable::build(&src, 8, 8).unwrap();
        let b = table.block_sum(2, 3, 2, 3).unwrap();
        assert!((b - src.term(2, 3)).norm() < 1e-15);
    }

    #[test]
    fn invalid_block_range_rejected() {
        let table = PrefixSumTable::build(&geometric(), 8, 8).unwrap();
        assert!(matches!(
            table.block_sum(5, 0, 3, 8),
            Err(SeriesError::InvalidRange { .. })
        ));
        assert!(matches!(
            table.block_sum(-1, 0, 3, 8),
            Err(SeriesError::NegativeIndex { .. })
        ));
    }

    #[test]
    fn abs_table_is_monotone() {
        let src = TermSource::nat_real(|j, k| if (j + k) % 2 == 0 { 1.0 } else { -1.0 });
        let table = PrefixSumTable::build_abs(&src, 12, 12).unwrap();
        let mut prev = -1.0;
        for m in 0..=12i64 {
            let v = abs_partial_sum(&table, m, 12).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn row_partial_single_term() {
        let src = geometric();
        assert_eq!(row_partial(&src, 3, 0), src.term(3, 0));
        assert_eq!(col_partial(&src, 5, 0), src.term(0, 5));
    }

    #[test]
    fn prefix_table_rejects_int_square_sources() {
        let src = TermSource::int_plane_real(|_, _| 1.0);
        assert!(matches!(
            PrefixSumTable::build(&src, 4, 4),
            Err(SeriesError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn symmetric_sum_of_origin_delta() {
        let src = TermSource::int_plane_real(|j, k| if j == 0 && k == 0 { 1.0 } else { 0.0 });
        let s = symmetric_partial_sum(&src, 3, 3).unwrap();
        assert_eq!(s.re, 1.0);
    }

    #[test]
    fn symmetric_sum_of_odd_source_cancels() {
        let src = TermSource::int_plane_real(|j, _| (j.signum()) as f64);
        let s = symmetric_partial_sum(&src, 5, 5).unwrap();
        assert_eq!(s.re, 0.0);
    }

    #[test]
    fn symmetric_sum_counts_lattice_points_once() {
        let src = TermSource::int_plane_real(|j, k| {
            if j.abs() <= 1 && k.abs() <= 1 {
                1.0
            } else {
                0.0
            }
        });
        let s = symmetric_partial_sum(&src, 1, 1).unwrap();
        assert_eq!(s.re, 9.0);
        let s = symmetric_partial_sum(&src, 4, 4).unwrap();
        assert_eq!(s.re, 9.0);
    }

    #[test]
    fn symmetric_table_rejects_nat_sources() {
        let src = TermSource::nat_real(|_, _| 1.0);
        assert!(matches!(
            symmetric_partial_sum(&src, 2, 2),
            Err(SeriesError::DomainMismatch { .. })
        ));
    }
}
