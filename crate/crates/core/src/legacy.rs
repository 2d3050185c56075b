//! Earlier content-validity methods, kept for side-by-side comparison:
//! Lawshe's content validity ratio with its printed `CVR_min` thresholds,
//! the normal-approximation critical count, and the exact one-tailed
//! binomial count at `p = 1/2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::binomial::{BinomialParams, PmfCursor};
use crate::critical::{bcv_n_critical_with, CriticalOptions, CutLevel, MAX_TABLE_PANEL};
use crate::decimal::format_significant_signed;
use crate::error::{BcvError, Result};
use crate::probability::ExactProbability;
use crate::reference::COMPARISON_REFERENCE;

/// Lawshe's content validity ratio `(n - N/2) / (N/2)`, held exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CvrValue(Ratio<i64>);

impl CvrValue {
    pub fn new(value: Ratio<i64>) -> Result<Self> {
        if value < Ratio::from_integer(-1) || value > Ratio::from_integer(1) {
            return Err(BcvError::domain(format!("CVR {value} lies outside [-1, 1]")));
        }
        Ok(CvrValue(value))
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let wide = Ratio::new(BigInt::from(*self.0.numer()), BigInt::from(*self.0.denom()));
        format_significant_signed(&wide, digits)
    }
}

impl fmt::Display for CvrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for CvrValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn cvr(n_essential: u64, trials: u64) -> Result<CvrValue> {
    if trials == 0 {
        return Err(BcvError::domain("CVR needs at least one panelist"));
    }
    if n_essential > trials {
        return Err(BcvError::domain(format!(
            "{n_essential} essential ratings exceed the panel of {trials}"
        )));
    }
    let n = i64::try_from(n_essential).map_err(|_| BcvError::domain("count too large"))?;
    let total = i64::try_from(trials).map_err(|_| BcvError::domain("panel too large"))?;
    // (n - N/2) / (N/2) = (2n - N) / N
    CvrValue::new(Ratio::new(2 * n - total, total))
}

/// Published `CVR_min` thresholds keyed by panel size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawsheMinTable(BTreeMap<u64, Ratio<i64>>);

impl LawsheMinTable {
    /// The six printed thresholds; other panel sizes are deliberately absent.
    pub fn published() -> Self {
        let hundredths = |v: i64| Ratio::new(v, 100);
        LawsheMinTable(BTreeMap::from([
            (5, hundredths(99)),
            (6, hundredths(99)),
            (7, hundredths(99)),
            (8, hundredths(75)),
            (9, hundredths(78)),
            (40, hundredths(29)),
        ]))
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u64, Ratio<i64>)>) -> Self {
        LawsheMinTable(entries.into_iter().collect())
    }

    pub fn get(&self, trials: u64) -> Option<Ratio<i64>> {
        self.0.get(&trials).copied()
    }

    pub fn covers(&self, trials: u64) -> bool {
        self.0.contains_key(&trials)
    }
}

impl Default for LawsheMinTable {
    fn default() -> Self {
        Self::published()
    }
}

/// `cvr ≥ CVR_min(N)`; panel sizes missing from the table are a lookup error.
pub fn lawshe_retain(cvr: CvrValue, trials: u64, table: &LawsheMinTable) -> Result<bool> {
    let min = table
        .get(trials)
        .ok_or_else(|| BcvError::Lookup(format!("no CVR_min entry for a panel of {trials}")))?;
    Ok(cvr.value() >= min)
}

fn check_alpha(alpha: &ExactProbability) -> Result<()> {
    if alpha.is_zero() || *alpha > ExactProbability::from_ratio(1, 2).expect("valid") {
        return Err(BcvError::domain(format!("significance {alpha} must lie in (0, 1/2]")));
    }
    Ok(())
}

/// One-tailed standard-normal quantile `z(α)`, pinned to four decimals
/// (`z(0.05) = 1.6449`).
pub fn one_tailed_z(alpha: &ExactProbability) -> Result<f64> {
    check_alpha(alpha)?;
    let normal = Normal::standard();
    let z = normal.inverse_cdf(1.0 - alpha.to_f64());
    Ok((z * 1e4).round() / 1e4)
}

/// Normal-approximation critical count `N/2 + z(α)·√(N/4)`, rounded to the
/// nearest integer with ties away from zero.
pub fn wilson_n_critical(trials: u64, alpha: &ExactProbability) -> Result<u64> {
    wilson_n_critical_with_z(trials, one_tailed_z(alpha)?)
}

pub fn wilson_n_critical_with_z(trials: u64, z: f64) -> Result<u64> {
    if trials == 0 {
        return Err(BcvError::domain("panel size must be at least 1"));
    }
    let n = trials as f64;
    let x = n / 2.0 + z * (n / 4.0).sqrt();
    Ok(x.round() as u64)
}

/// Smallest `n` whose exact upper tail at `p = 1/2` is at most `α`;
/// `None` when even `n = N` fails.
pub fn ayre_n_critical(trials: u64, alpha: &ExactProbability) -> Result<Option<u64>> {
    check_alpha(alpha)?;
    let params = BinomialParams::new(trials, ExactProbability::from_ratio(1, 2)?)?;
    Ok(smallest_tail_at_most(&params, alpha))
}

/// Scans down from `N`, accumulating the tail until it exceeds `α`.
pub(crate) fn smallest_tail_at_most(params: &BinomialParams, alpha: &ExactProbability) -> Option<u64> {
    let mut cursor = PmfCursor::new(params, params.trials()).expect("N is in the support");
    let bound = alpha.numer() * cursor.denominator();
    let mut tail = BigUint::zero();
    loop {
        tail += cursor.term();
        if &tail * alpha.denom() > bound {
            let n = cursor.position();
            return (n < params.trials()).then_some(n + 1);
        }
        if !cursor.step_down() {
            return Some(0);
        }
    }
}

/// Settings for [`comparison_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonConfig {
    pub wilson_alpha: ExactProbability,
    pub ayre_alpha: ExactProbability,
    pub options: CriticalOptions,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        let five = ExactProbability::from_ratio(1, 20).expect("valid");
        ComparisonConfig {
            wilson_alpha: five.clone(),
            ayre_alpha: five,
            options: CriticalOptions::default(),
        }
    }
}

/// One row of the method comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    #[serde(rename = "N")]
    pub trials: u64,
    pub bcv_p3_l05: Option<u64>,
    pub bcv_p3_l01: Option<u64>,
    pub bcv_p4_l05: Option<u64>,
    pub bcv_p4_l01: Option<u64>,
    pub wilson: u64,
    pub ayre: Option<u64>,
}

impl ComparisonRow {
    /// Cells in column order.
    pub fn cells(&self) -> [Option<u64>; 6] {
        [
            self.bcv_p3_l05,
            self.bcv_p3_l01,
            self.bcv_p4_l05,
            self.bcv_p4_l01,
            Some(self.wilson),
            self.ayre,
        ]
    }
}

pub const COMPARISON_COLUMNS: [&str; 6] = [
    "bcv_p1/3_l0.05",
    "bcv_p1/3_l0.01",
    "bcv_p1/4_l0.05",
    "bcv_p1/4_l0.01",
    "wilson",
    "ayre",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonTable {
    pub wilson_alpha: ExactProbability,
    pub ayre_alpha: ExactProbability,
    pub rows: Vec<ComparisonRow>,
}

pub fn comparison_table(range: RangeInclusive<u64>, config: &ComparisonConfig) -> Result<ComparisonTable> {
    if range.start() > range.end() || *range.start() < 5 || *range.end() > MAX_TABLE_PANEL {
        return Err(BcvError::domain(format!(
            "comparison range {}:{} must lie within 5:{MAX_TABLE_PANEL}",
            range.start(),
            range.end()
        )));
    }
    let third = ExactProbability::from_ratio(1, 3)?;
    let quarter = ExactProbability::from_ratio(1, 4)?;
    let five = CutLevel::five_percent();
    let one = CutLevel::one_percent();
    let wilson_z = one_tailed_z(&config.wilson_alpha)?;
    check_alpha(&config.ayre_alpha)?;
    let opts = config.options;

    let rows = range
        .into_par_iter()
        .map(|trials| {
            let bcv =
                |p: &ExactProbability, l: &CutLevel| bcv_n_critical_with(trials, p, l, opts).map(|v| v.n_critical);
            Ok(ComparisonRow {
                trials,
                bcv_p3_l05: bcv(&third, &five)?,
                bcv_p3_l01: bcv(&third, &one)?,
                bcv_p4_l05: bcv(&quarter, &five)?,
                bcv_p4_l01: bcv(&quarter, &one)?,
                wilson: wilson_n_critical_with_z(trials, wilson_z)?,
                ayre: ayre_n_critical(trials, &config.ayre_alpha)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonTable {
        wilson_alpha: config.wilson_alpha.clone(),
        ayre_alpha: config.ayre_alpha.clone(),
        rows,
    })
}

/// The bundled printed comparison (N = 5..=40, both legacy columns at α = 0.05).
pub fn reference_comparison_table() -> ComparisonTable {
    let five = ExactProbability::from_ratio(1, 20).expect("valid");
    ComparisonTable {
        wilson_alpha: five.clone(),
        ayre_alpha: five,
        rows: COMPARISON_REFERENCE
            .iter()
            .map(|&[trials, a, b, c, d, wilson, ayre]| ComparisonRow {
                trials,
                bcv_p3_l05: Some(a),
                bcv_p3_l01: Some(b),
                bcv_p4_l05: Some(c),
                bcv_p4_l01: Some(d),
                wilson,
                ayre: Some(ayre),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonDiscrepancy {
    #[serde(rename = "N")]
    pub trials: u64,
    pub column: &'static str,
    pub generated: Option<u64>,
    pub reference: Option<u64>,
}

/// Mismatching cells over the panel sizes both tables contain.
pub fn comparison_discrepancies(
    generated: &ComparisonTable,
    reference: &ComparisonTable,
) -> Vec<ComparisonDiscrepancy> {
    let by_n: BTreeMap<u64, &ComparisonRow> = reference.rows.iter().map(|r| (r.trials, r)).collect();
    let mut out = Vec::new();
    for g in &generated.rows {
        let Some(r) = by_n.get(&g.trials) else { continue };
        for ((gv, rv), column) in g.cells().into_iter().zip(r.cells()).zip(COMPARISON_COLUMNS) {
            if gv != rv {
                out.push(ComparisonDiscrepancy {
                    trials: g.trials,
                    column,
                    generated: gv,
                    reference: rv,
                });
            }
        }
    }
    out
}
