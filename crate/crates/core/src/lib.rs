//! Finite-truncation convergence analysis for double series and double
//! integrals over the closed first quadrant.
//!
//! A double series Σ Σ a_{j,k} (or a double integral ∫∫ f du dv) can converge
//! in several inequivalent senses once both indices are allowed to grow
//! independently:
//!
//! * **Pringsheim**: the rectangular partial sums s_{m,n} approach a limit
//!   once min{m,n} is large.
//! * **Regular**: every rectangular block sum anchored past a threshold in
//!   max{m,n} is small; equivalently, Pringsheim convergence plus convergence
//!   of every row and column series.
//! * **Absolute**: Σ Σ |a_{j,k}| is finite.
//!
//! The crate provides exact arithmetic over truncated double series
//! ([`series`]), trinary classifiers for the three convergence modes
//! ([`classify`]), exact and quadrature-based evaluation of rectangular
//! partial integrals ([`integral`]), the analogous integral classifiers
//! together with a numerical check of the iterated-limit (successive
//! integration) identity for regularly convergent integrals ([`fubini`]),
//! and a zoo of counterexample fixtures with known verdicts ([`zoo`]).
//!
//! Everything operates on explicit finite truncations with declared caps;
//! verdicts are `Converges` / `Diverges` / `Inconclusive`, never a pretense
//! of having evaluated an infinite sum.

pub mod classify;
pub mod fubini;
pub mod integral;
pub mod series;
pub mod verdict;
pub mod zoo;

pub use classify::{ClassifierConfig, ClassifyError};
pub use fubini::{FubiniConfig, FubiniError, FubiniReport, IntegralClassifierConfig};
pub use integral::{IntegralError, Integrand, QuadratureSpec, RectRegion};
pub use series::{IndexDomain, PrefixSumTable, SeriesError, TermSource};
pub use verdict::{Status, Verdict, Witness};
