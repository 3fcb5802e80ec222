//! Catalog of parameter-free counterexample fixtures.
//!
//! Each fixture bundles a closed-form term generator, a closed-form
//! partial-sum oracle where one is known, and the expected classifier
//! verdicts. Together they separate the three convergence modes of double
//! series (Pringsheim / regular / absolute) and the two of double integrals
//! (Pringsheim / regular):
//!
//! | id   | separates                                                     |
//! |------|---------------------------------------------------------------|
//! | ex1  | Pringsheim convergence with unbounded terms                   |
//! | ex2  | convergent rows/columns without Pringsheim convergence        |
//! | ex3  | Pringsheim convergence with every row and column divergent    |
//! | ex4  | vanishing inner blocks without Pringsheim convergence         |
//! | ex5  | regular convergence without absolute convergence              |
//! | fig6 | regularly convergent series whose |terms| are not summable    |
//! | ex6  | regularly convergent integral of a non-integrable step field  |
//! | ex7  | Pringsheim integral with pointwise but non-uniform strip decay|

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::integral::{cell_grid, IntegralError, Integrand};
use crate::series::{PrefixSumTable, SeriesError, TermSource};
use crate::verdict::{dec, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Fig6,
    Ex6,
    Ex7,
}

impl FixtureId {
    pub const ALL: [FixtureId; 8] = [
        FixtureId::Ex1,
        FixtureId::Ex2,
        FixtureId::Ex3,
        FixtureId::Ex4,
        FixtureId::Ex5,
        FixtureId::Fig6,
        FixtureId::Ex6,
        FixtureId::Ex7,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FixtureId::Ex1 => "ex1",
            FixtureId::Ex2 => "ex2",
            FixtureId::Ex3 => "ex3",
            FixtureId::Ex4 => "ex4",
            FixtureId::Ex5 => "ex5",
            FixtureId::Fig6 => "fig6",
            FixtureId::Ex6 => "ex6",
            FixtureId::Ex7 => "ex7",
        }
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFixture(pub String);

impl fmt::Display for UnknownFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown fixture id `{}` (expected one of ex1..ex5, fig6, ex6, ex7)",
            self.0
        )
    }
}

impl std::error::Error for UnknownFixture {}

impl FromStr for FixtureId {
    type Err = UnknownFixture;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Ok(FixtureId::Ex1),
            "ex2" => Ok(FixtureId::Ex2),
            "ex3" => Ok(FixtureId::Ex3),
            "ex4" => Ok(FixtureId::Ex4),
            "ex5" => Ok(FixtureId::Ex5),
            "fig6" => Ok(FixtureId::Fig6),
            "ex6" => Ok(FixtureId::Ex6),
            "ex7" => Ok(FixtureId::Ex7),
            other => Err(UnknownFixture(other.to_string())),
        }
    }
}

/// Expected status (and limit, where one is claimed) of a single classifier.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExpectedVerdict {
    pub status: Status,
    #[serde(serialize_with = "dec::complex_opt")]
    pub limit: Option<Complex64>,
}

impl ExpectedVerdict {
    fn converges(limit: f64) -> Self {
        ExpectedVerdict {
            status: Status::Converges,
            limit: Some(Complex64::new(limit, 0.0)),
        }
    }

    fn diverges() -> Self {
        ExpectedVerdict {
            status: Status::Diverges,
            limit: None,
        }
    }
}

/// Verdict record a fixture is expected to reproduce. Fields are `None`
/// where the fixture makes no claim.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Expected {
    pub series_pringsheim: Option<ExpectedVerdict>,
    pub series_regular: Option<ExpectedVerdict>,
    pub series_absolute: Option<ExpectedVerdict>,
    pub rows_cols_all_converge: Option<bool>,
    pub integral_pringsheim: Option<ExpectedVerdict>,
    pub integral_regular: Option<ExpectedVerdict>,
}

pub struct Fixture {
    pub id: FixtureId,
    pub title: &'static str,
    /// How the closed form was obtained and what pins it down.
    pub notes: &'static str,
    source: Option<TermSource>,
    pub expected: Expected,
}

impl Fixture {
    /// The term source, for fixtures that are double series (all but ex7).
    pub fn source(&self) -> Option<&TermSource> {
        self.source.as_ref()
    }

    pub fn table(&self, cap_m: usize, cap_n: usize) -> Option<Result<PrefixSumTable, SeriesError>> {
        self.source
            .as_ref()
            .map(|s| PrefixSumTable::build(s, cap_m, cap_n))
    }

    /// The fixture as an integrand: the unit-cell embedding of its series
    /// for ex1..fig6 and ex6, the dyadic-block field for ex7.
    pub fn integrand(
        &self,
        cap_m: usize,
        cap_n: usize,
    ) -> Option<Result<Integrand, IntegralError>> {
        if self.id == FixtureId::Ex7 {
            return Some(Ok(Integrand::DyadicBlocks));
        }
        self.source.as_ref().map(|s| {
            PrefixSumTable::build(s, cap_m, cap_n)
                .map(|t| cell_grid(Arc::new(t)))
                .map_err(IntegralError::from)
        })
    }
}

fn ex1_term(j: i64, k: i64) -> f64 {
    if j.min(k) <= 1 {
        let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
        sign * (j.max(k) / 2 + 1) as f64
    } else {
        0.0
    }
}

fn ex2_term(j: i64, k: i64) -> f64 {
    if j / 2 == k / 2 {
        if (j + k) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else {
        0.0
    }
}

fn ex3_term(j: i64, k: i64) -> f64 {
    let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
    sign / (1 + (j / 2).min(k / 2)) as f64
}

fn ex4_term(j: i64, k: i64) -> f64 {
    if k == 0 {
        if j % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else if j == 0 {
        if k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else {
        0.0
    }
}

fn ex5_term(j: i64, k: i64) -> f64 {
    if k == j {
        1.0 / (j + 1) as f64
    } else if k == j + 1 {
        -1.0 / (j + 1) as f64
    } else {
        0.0
    }
}

fn fig6_term(j: i64, k: i64) -> f64 {
    let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
    sign / (j / 2 + k / 2 + 1) as f64
}

fn re(x: f64) -> Option<Complex64> {
    Some(Complex64::new(x, 0.0))
}

/// Closed-form s_{m,n} where the fixture states one; `None` elsewhere.
pub fn oracle_partial_sum(id: FixtureId, m: i64, n: i64) -> Option<Complex64> {
    if m < 0 || n < 0 {
        return None;
    }
    match id {
        FixtureId::Ex1 => {
            if m.min(n) >= 1 {
                re(0.0)
            } else {
                None
            }
        }
        FixtureId::Ex2 => {
            if m == n {
                re(if m % 2 == 0 { 1.0 } else { 0.0 })
            } else {
                None
            }
        }
        FixtureId::Ex3 => {
            if m % 2 == 0 && n % 2 == 0 {
                re(2.0 / (2 + m.min(n)) as f64)
            } else {
                re(0.0)
            }
        }
        _ => None,
    }
}

/// Construct the fixture with the given id.
pub fn fixture(id: FixtureId) -> Fixture {
    match id {
        FixtureId::Ex1 => Fixture {
            id,
            title: "unbounded checkerboard edges",
            notes: "a(j,k) = (-1)^(j+k) * (floor(max(j,k)/2)+1) when min(j,k) <= 1, else 0; \
                    rows 0 and 1 alternate in column pairs while higher rows carry the pattern \
                    only in columns 0 and 1, so s(m,n) = 0 once min(m,n) >= 1 although the \
                    terms are unbounded",
            source: Some(
                TermSource::nat_real(ex1_term)
                    .with_oracle(|m, n| oracle_partial_sum(FixtureId::Ex1, m, n)),
            ),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                series_regular: Some(ExpectedVerdict::diverges()),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(false),
                integral_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                integral_regular: Some(ExpectedVerdict::diverges()),
            },
        },
        FixtureId::Ex2 => Fixture {
            id,
            title: "shifted 2x2 unit blocks along the diagonal",
            notes: "a(j,k) = (-1)^(j+k) when floor(j/2) = floor(k/2), else 0; every row and \
                    column holds exactly two cancelling terms, yet the diagonal partial sums \
                    alternate between 1 and 0 forever",
            source: Some(
                TermSource::nat_real(ex2_term)
                    .with_oracle(|m, n| oracle_partial_sum(FixtureId::Ex2, m, n)),
            ),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::diverges()),
                series_regular: Some(ExpectedVerdict::diverges()),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(true),
                integral_pringsheim: None,
                integral_regular: None,
            },
        },
        FixtureId::Ex3 => Fixture {
            id,
            title: "checkerboard with harmonically shrinking plateaus",
            notes: "a(j,k) = (-1)^(j+k) / (1 + min(floor(j/2), floor(k/2))); \
                    s(m,n) = 2/(2+min(m,n)) when m and n are both even, else 0, so the double \
                    limit is 0 while every single row and column oscillates forever",
            source: Some(
                TermSource::nat_real(ex3_term)
                    .with_oracle(|m, n| oracle_partial_sum(FixtureId::Ex3, m, n)),
            ),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                series_regular: Some(ExpectedVerdict::diverges()),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(false),
                integral_pringsheim: None,
                integral_regular: None,
            },
        },
        FixtureId::Ex4 => Fixture {
            id,
            title: "alternating first row and first column",
            notes: "a(j,0) = (-1)^j, a(0,k) = (-1)^k, 0 elsewhere; every block sum with \
                    min anchor >= 1 vanishes identically, yet s(m,n) cycles through 1, 0, -1 \
                    with the parities of m and n",
            source: Some(TermSource::nat_real(ex4_term)),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::diverges()),
                series_regular: Some(ExpectedVerdict::diverges()),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(false),
                integral_pringsheim: Some(ExpectedVerdict::diverges()),
                integral_regular: Some(ExpectedVerdict::diverges()),
            },
        },
        FixtureId::Ex5 => Fixture {
            id,
            title: "two-term telescoping rows on the diagonal",
            notes: "a(j,j) = 1/(j+1), a(j,j+1) = -1/(j+1), 0 elsewhere; each row telescopes \
                    to 0 so the series converges regularly, but the absolute values sum to \
                    twice the harmonic series",
            source: Some(TermSource::nat_real(ex5_term)),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                series_regular: Some(ExpectedVerdict::converges(0.0)),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(true),
                integral_pringsheim: None,
                integral_regular: None,
            },
        },
        FixtureId::Fig6 => Fixture {
            id,
            title: "paired harmonic checkerboard",
            notes: "a(j,k) = (-1)^(j+k) / (floor(j/2) + floor(k/2) + 1); adjacent rows and \
                    columns cancel in pairs, giving regular convergence to 0, while every \
                    single row of absolute values is harmonic",
            source: Some(TermSource::nat_real(fig6_term)),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                series_regular: Some(ExpectedVerdict::converges(0.0)),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(true),
                integral_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                integral_regular: Some(ExpectedVerdict::converges(0.0)),
            },
        },
        FixtureId::Ex6 => Fixture {
            id,
            title: "unit-cell embedding of the paired harmonic checkerboard",
            notes: "the fig6 terms as a step function on unit cells: the integral converges \
                    regularly although |f| is not integrable and no marginal of |f| is \
                    integrable either",
            source: Some(TermSource::nat_real(fig6_term)),
            expected: Expected {
                series_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                series_regular: Some(ExpectedVerdict::converges(0.0)),
                series_absolute: Some(ExpectedVerdict::diverges()),
                rows_cols_all_converge: Some(true),
                integral_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                integral_regular: Some(ExpectedVerdict::converges(0.0)),
            },
        },
        FixtureId::Ex7 => Fixture {
            id,
            title: "dyadic four-block checkerboard field",
            notes:
                "±1 checkerboard quadruples of area 1/8 on [2^k, 2^(k+1)) x (2^(-k-1), 2^(-k)], \
                    mirrored across the diagonal; partial integrals vanish once min(x,y) >= 1, \
                    every strip integral tends to 0 pointwise, but a mass-1/8 strip recurs at \
                    every dyadic scale so the decay is not locally uniform",
            source: None,
            expected: Expected {
                series_pringsheim: None,
                series_regular: None,
                series_absolute: None,
                rows_cols_all_converge: None,
                integral_pringsheim: Some(ExpectedVerdict::converges(0.0)),
                integral_regular: Some(ExpectedVerdict::diverges()),
            },
        },
    }
}
