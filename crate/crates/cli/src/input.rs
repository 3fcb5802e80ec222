//! Input resolution: fixtures by id, and sparse CSV term files.
//!
//! The term file format is a sparse CSV with header `j,k,re,im`; unlisted
//! terms are 0 and indices must be nonnegative. Duplicate cells accumulate.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use bilimit_core::integral::{cell_grid, Integrand};
use bilimit_core::series::{PrefixSumTable, TermSource};
use bilimit_core::zoo::{fixture, FixtureId};
use num_complex::Complex64;

use crate::CliError;

pub fn parse_terms_csv(path: &Path) -> Result<TermSource, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((no, l)) => break (no, l),
            None => {
                return Err(CliError::Input(format!(
                    "{}: empty input (expected header j,k,re,im)",
                    path.display()
                )))
            }
        }
    };
    if !header.1.trim().eq_ignore_ascii_case("j,k,re,im") {
        return Err(CliError::Input(format!(
            "{} line {}: expected header `j,k,re,im`, got `{}`",
            path.display(),
            header.0 + 1,
            header.1.trim()
        )));
    }
    let mut cells: HashMap<(i64, i64), Complex64> = HashMap::new();
    let mut rows = 0usize;
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = no + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(CliError::Input(format!(
                "{} line {lineno}: expected 4 fields, got {}",
                path.display(),
                fields.len()
            )));
        }
        let bad = |what: &str, val: &str| {
            CliError::Input(format!(
                "{} line {lineno}: invalid {what} `{val}`",
                path.display()
            ))
        };
        let j: i64 = fields[0].parse().map_err(|_| bad("index j", fields[0]))?;
        let k: i64 = fields[1].parse().map_err(|_| bad("index k", fields[1]))?;
        if j < 0 || k < 0 {
            return Err(CliError::Input(format!(
                "{} line {lineno}: indices must be nonnegative",
                path.display()
            )));
        }
        let re: f64 = fields[2].parse().map_err(|_| bad("re value", fields[2]))?;
        let im: f64 = fields[3].parse().map_err(|_| bad("im value", fields[3]))?;
        *cells.entry((j, k)).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(re, im);
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Input(format!(
            "{}: no term rows found",
            path.display()
        )));
    }
    let cells = Arc::new(cells);
    Ok(TermSource::nat(move |j, k| {
        cells
            .get(&(j, k))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }))
}

pub fn fixture_source(id: FixtureId) -> Result<TermSource, CliError> {
    fixture(id)
        .source()
        .cloned()
        .ok_or_else(|| CliError::Input(format!("fixture {id} has no series terms")))
}

/// Resolve a series input: `--fixture` or `--terms`, exactly one.
pub fn resolve_source(
    fixture_id: Option<FixtureId>,
    terms: Option<&Path>,
) -> Result<(String, TermSource), CliError> {
    match (fixture_id, terms) {
        (Some(id), None) => Ok((format!("fixture:{id}"), fixture_source(id)?)),
        (None, Some(path)) => Ok((format!("terms:{}", path.display()), parse_terms_csv(path)?)),
        _ => Err(CliError::Input(
            "provide exactly one of --fixture or --terms".to_string(),
        )),
    }
}

const MAX_TABLE_CELLS: usize = 1 << 26;

pub fn build_table(
    source: &TermSource,
    cap_m: usize,
    cap_n: usize,
) -> Result<PrefixSumTable, CliError> {
    if (cap_m + 1).saturating_mul(cap_n + 1) > MAX_TABLE_CELLS {
        return Err(CliError::Input(format!(
            "caps ({cap_m}, {cap_n}) exceed the dense-table budget"
        )));
    }
    PrefixSumTable::build(source, cap_m, cap_n).map_err(|e| CliError::Input(e.to_string()))
}

/// Resolve an integrand input: a fixture id (unit-cell embedding, or the
/// dyadic field for ex7) or a `--cells` CSV embedded as a unit-cell grid.
pub fn resolve_integrand(
    fixture_id: Option<FixtureId>,
    cells: Option<&Path>,
    x_cap: f64,
    y_cap: f64,
) -> Result<(String, Integrand), CliError> {
    let cap_m = x_cap.ceil() as usize;
    let cap_n = y_cap.ceil() as usize;
    match (fixture_id, cells) {
        (Some(FixtureId::Ex7), None) => Ok(("fixture:ex7".to_string(), Integrand::DyadicBlocks)),
        (Some(id), None) => {
            let src = fixture_source(id)?;
            let table = build_table(&src, cap_m, cap_n)?;
            Ok((format!("fixture:{id}"), cell_grid(Arc::new(table))))
        }
        (None, Some(path)) => {
            let src = parse_terms_csv(path)?;
            let table = build_table(&src, cap_m, cap_n)?;
            Ok((
                format!("cells:{}", path.display()),
                cell_grid(Arc::new(table)),
            ))
        }
        _ => Err(CliError::Input(
            "provide exactly one of --fixture or --cells".to_string(),
        )),
    }
}
