//! Classifier verdicts and their JSON encoding.
//!
//! Every classifier in this crate returns a [`Verdict`]: a trinary status
//! plus the evidence that produced it (estimated limit, the largest residual
//! oscillation observed past the chosen threshold, and a witness for
//! divergence). Floating-point payloads serialize as decimal strings with
//! 17 significant digits so reports round-trip bit-exactly.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Serialization helpers: `f64` as a 17-significant-digit decimal string.
pub mod dec {
    use super::*;

    pub fn string(x: f64) -> String {
        format!("{:.16e}", x)
    }

    pub fn f64_str<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&string(*x))
    }

    pub fn f64_slice<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|&x| string(x)))
    }

    pub fn f64_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&string(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &string(z.re))?;
        st.serialize_field("im", &string(z.im))?;
        st.end()
    }

    pub fn complex_opt<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        struct Wrap(Complex64);
        impl Serialize for Wrap {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                complex(&self.0, s)
            }
        }
        match z {
            Some(v) => s.serialize_some(&Wrap(*v)),
            None => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converges,
    Diverges,
    Inconclusive,
}

/// Location where the defining inequality of a convergence notion failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A partial sum s_{m,n} that stays `gap` away from the cluster value.
    PartialSum {
        m: i64,
        n: i64,
        #[serde(serialize_with = "dec::f64_str")]
        gap: f64,
    },
    /// A block sum over j in [m, m_hi], k in [n, n_hi] of persistent size.
    Block {
        m: i64,
        n: i64,
        m_hi: i64,
        n_hi: i64,
        #[serde(serialize_with = "dec::f64_str")]
        magnitude: f64,
    },
    /// A single-series partial sum (row or column) off its cluster value.
    Term {
        index: i64,
        #[serde(serialize_with = "dec::f64_str")]
        gap: f64,
    },
    /// A partial-integral corner I(x, y) off the cluster value.
    Point {
        #[serde(serialize_with = "dec::f64_str")]
        x: f64,
        #[serde(serialize_with = "dec::f64_str")]
        y: f64,
        #[serde(serialize_with = "dec::f64_str")]
        gap: f64,
    },
    /// A rectangle integral of persistent mass.
    Rect {
        #[serde(serialize_with = "dec::f64_str")]
        x: f64,
        #[serde(serialize_with = "dec::f64_str")]
        x1: f64,
        #[serde(serialize_with = "dec::f64_str")]
        y: f64,
        #[serde(serialize_with = "dec::f64_str")]
        y1: f64,
        #[serde(serialize_with = "dec::f64_str")]
        magnitude: f64,
    },
}

impl Witness {
    /// The deviation carried by the witness, whatever its shape.
    pub fn magnitude(&self) -> f64 {
        match *self {
            Witness::PartialSum { gap, .. } => gap,
            Witness::Block { magnitude, .. } => magnitude,
            Witness::Term { gap, .. } => gap,
            Witness::Point { gap, .. } => gap,
            Witness::Rect { magnitude, .. } => magnitude,
        }
    }
}

/// Outcome of a finite-truncation convergence probe.
///
/// `Converges` carries the estimated limit and the residual (largest
/// deviation observed past `threshold`); `Diverges` carries a witness whose
/// oscillation persisted across the probed thresholds; `Inconclusive` means
/// the truncation was too short to tell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(serialize_with = "dec::complex_opt")]
    pub limit: Option<Complex64>,
    #[serde(serialize_with = "dec::f64_str")]
    pub residual: f64,
    #[serde(serialize_with = "dec::f64_opt")]
    pub threshold: Option<f64>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn converges(limit: Complex64, residual: f64, threshold: f64) -> Self {
        Verdict {
            status: Status::Converges,
            limit: Some(limit),
            residual,
            threshold: Some(threshold),
            witness: None,
        }
    }

    pub fn diverges(residual: f64, threshold: Option<f64>, witness: Witness) -> Self {
        Verdict {
            status: Status::Diverges,
            limit: None,
            residual,
            threshold,
            witness: Some(witness),
        }
    }

    pub fn inconclusive(residual: f64) -> Self {
        Verdict {
            status: Status::Inconclusive,
            limit: None,
            residual,
            threshold: None,
            witness: None,
        }
    }

    pub fn is_converges(&self) -> bool {
        self.status == Status::Converges
    }

    pub fn is_diverges(&self) -> bool {
        self.status == Status::Diverges
    }
}
