//! Critical respondent counts `n_critical` and the tables built from them.
//!
//! `n_critical` is the smallest count strictly above the chance mean `N·p`
//! whose point probability is at most the cut level λ. Above the mean the
//! pmf is strictly decreasing, so the first hit of an upward scan is the
//! answer and every larger count also passes.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::binomial::{BinomialParams, PmfCursor};
use crate::decimal::format_exact;
use crate::error::{BcvError, Result};
use crate::probability::ExactProbability;
use crate::reference::{SCALE3_REFERENCE, SCALE4_REFERENCE};

/// Largest panel size the table generators accept.
pub const MAX_TABLE_PANEL: u64 = 10_000;

/// Cut level λ: the largest chance probability still treated as agreement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutLevel(ExactProbability);

impl CutLevel {
    pub fn new(lambda: ExactProbability) -> Result<Self> {
        if lambda.is_zero() || lambda.is_one() {
            return Err(BcvError::domain(format!(
                "cut level {lambda} must lie strictly between 0 and 1"
            )));
        }
        Ok(CutLevel(lambda))
    }

    /// λ = 1/20.
    pub fn five_percent() -> Self {
        CutLevel(ExactProbability::from_ratio(1, 20).expect("valid"))
    }

    /// λ = 1/100.
    pub fn one_percent() -> Self {
        CutLevel(ExactProbability::from_ratio(1, 100).expect("valid"))
    }

    pub fn value(&self) -> &ExactProbability {
        &self.0
    }
}

impl fmt::Display for CutLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_exact(self.0.as_ratio(), 12))
    }
}

impl FromStr for CutLevel {
    type Err = BcvError;

    fn from_str(s: &str) -> Result<Self> {
        CutLevel::new(s.parse()?)
    }
}

impl Serialize for CutLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Knobs that move the generated values away from the bare rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CriticalOptions {
    /// Raise every attainable `n_critical` to at least this many respondents.
    pub min_floor: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalValue {
    #[serde(rename = "N")]
    pub trials: u64,
    pub p: ExactProbability,
    pub lambda: CutLevel,
    /// `None` when no count in `(N·p, N]` reaches the cut level.
    pub n_critical: Option<u64>,
    /// The value was lifted by [`CriticalOptions::min_floor`].
    pub floor_applied: bool,
}

impl CriticalValue {
    pub fn attainable(&self) -> bool {
        self.n_critical.is_some()
    }
}

/// Smallest `n > N·p` with `pmf(n; N, p) ≤ λ`.
pub fn bcv_n_critical(trials: u64, p: &ExactProbability, lambda: &CutLevel) -> Result<CriticalValue> {
    bcv_n_critical_with(trials, p, lambda, CriticalOptions::default())
}

pub fn bcv_n_critical_with(
    trials: u64,
    p: &ExactProbability,
    lambda: &CutLevel,
    options: CriticalOptions,
) -> Result<CriticalValue> {
    let params = BinomialParams::new(trials, p.clone())?;
    let mut n_critical = search_above_mean(&params, lambda.value());
    let mut floor_applied = false;
    if let (Some(n), Some(floor)) = (n_critical, options.min_floor) {
        if floor > n {
            floor_applied = true;
            n_critical = (floor <= trials).then_some(floor);
        }
    }
    Ok(CriticalValue {
        trials,
        p: p.clone(),
        lambda: lambda.clone(),
        n_critical,
        floor_applied,
    })
}

fn search_above_mean(params: &BinomialParams, lambda: &ExactProbability) -> Option<u64> {
    let start = params.floor_mean() + 1;
    if start > params.trials() {
        return None;
    }
    let mut cursor = PmfCursor::new(params, start).expect("start lies in the support");
    loop {
        if cursor.at_most(lambda) {
            return Some(cursor.position());
        }
        if !cursor.step_up() {
            return None;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalRow {
    #[serde(rename = "N")]
    pub trials: u64,
    /// One entry per cut level, in the table's λ order.
    pub values: Vec<CriticalValue>,
}

/// `n_critical` for a run of panel sizes at one `p` and several λ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalTable {
    pub p: ExactProbability,
    pub lambdas: Vec<CutLevel>,
    pub rows: Vec<CriticalRow>,
}

impl CriticalTable {
    pub fn row(&self, trials: u64) -> Option<&CriticalRow> {
        self.rows
            .binary_search_by_key(&trials, |r| r.trials)
            .ok()
            .map(|i| &self.rows[i])
    }

    /// Rows whose panel size falls in `range`.
    pub fn restrict(&self, range: RangeInclusive<u64>) -> CriticalTable {
        CriticalTable {
            p: self.p.clone(),
            lambdas: self.lambdas.clone(),
            rows: self
                .rows
                .iter()
                .filter(|r| range.contains(&r.trials))
                .cloned()
                .collect(),
        }
    }

    /// Keeps only the listed cut levels, in the given order. Levels the
    /// table lacks are dropped.
    pub fn select_lambdas(&self, lambdas: &[CutLevel]) -> CriticalTable {
        let idx: Vec<usize> = lambdas
            .iter()
            .filter_map(|l| self.lambdas.iter().position(|m| m == l))
            .collect();
        CriticalTable {
            p: self.p.clone(),
            lambdas: idx.iter().map(|&i| self.lambdas[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| CriticalRow {
                    trials: r.trials,
                    values: idx.iter().map(|&i| r.values[i].clone()).collect(),
                })
                .collect(),
        }
    }
}

pub fn validate_range(range: &RangeInclusive<u64>) -> Result<()> {
    if range.start() > range.end() {
        return Err(BcvError::domain(format!(
            "empty panel range {}:{}",
            range.start(),
            range.end()
        )));
    }
    if *range.start() < 1 || *range.end() > MAX_TABLE_PANEL {
        return Err(BcvError::domain(format!(
            "panel range {}:{} must lie within 1:{MAX_TABLE_PANEL}",
            range.start(),
            range.end()
        )));
    }
    Ok(())
}

/// Builds the table in parallel over `N`; row order is always ascending `N`.
pub fn generate_table(
    range: RangeInclusive<u64>,
    p: &ExactProbability,
    lambdas: &[CutLevel],
    options: CriticalOptions,
) -> Result<CriticalTable> {
    validate_range(&range)?;
    BinomialParams::new(1, p.clone())?;
    let rows = range
        .into_par_iter()
        .map(|trials| {
            let values = lambdas
                .iter()
                .map(|l| bcv_n_critical_with(trials, p, l, options))
                .collect::<Result<Vec<_>>>()?;
            Ok(CriticalRow { trials, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalTable {
        p: p.clone(),
        lambdas: lambdas.to_vec(),
        rows,
    })
}

/// One cell where two tables disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    #[serde(rename = "N")]
    pub trials: u64,
    pub lambda: CutLevel,
    pub generated: Option<u64>,
    pub reference: Option<u64>,
}

/// Cell-by-cell comparison of two tables with the same `p`, λ columns and rows.
pub fn discrepancy_report(generated: &CriticalTable, reference: &CriticalTable) -> Result<Vec<Discrepancy>> {
    if generated.p != reference.p {
        return Err(BcvError::ShapeMismatch(format!(
            "tables use p = {} and p = {}",
            generated.p, reference.p
        )));
    }
    if generated.lambdas != reference.lambdas {
        return Err(BcvError::ShapeMismatch("cut-level columns differ".into()));
    }
    if generated.rows.len() != reference.rows.len()
        || generated
            .rows
            .iter()
            .zip(&reference.rows)
            .any(|(g, r)| g.trials != r.trials)
    {
        return Err(BcvError::ShapeMismatch("panel-size rows differ".into()));
    }
    let mut out = Vec::new();
    for (g, r) in generated.rows.iter().zip(&reference.rows) {
        for (gv, rv) in g.values.iter().zip(&r.values) {
            if gv.n_critical != rv.n_critical {
                out.push(Discrepancy {
                    trials: g.trials,
                    lambda: gv.lambda.clone(),
                    generated: gv.n_critical,
                    reference: rv.n_critical,
                });
            }
        }
    }
    Ok(out)
}

/// The bundled printed table for `p = 1/3` or `p = 1/4` (N = 5..=100,
/// λ ∈ {1/20, 1/100}); `None` for any other `p`.
pub fn reference_table(p: &ExactProbability) -> Option<CriticalTable> {
    let data: &[[u64; 3]] = if *p == ExactProbability::from_ratio(1, 3).ok()? {
        &SCALE3_REFERENCE
    } else if *p == ExactProbability::from_ratio(1, 4).ok()? {
        &SCALE4_REFERENCE
    } else {
        return None;
    };
    let lambdas = vec![CutLevel::five_percent(), CutLevel::one_percent()];
    let rows = data
        .iter()
        .map(|&[trials, a, b]| CriticalRow {
            trials,
            values: [a, b]
                .iter()
                .zip(&lambdas)
                .map(|(&n, l)| CriticalValue {
                    trials,
                    p: p.clone(),
                    lambda: l.clone(),
                    n_critical: Some(n),
                    floor_applied: false,
                })
                .collect(),
        })
        .collect();
    Some(CriticalTable {
        p: p.clone(),
        lambdas,
        rows,
    })
}
