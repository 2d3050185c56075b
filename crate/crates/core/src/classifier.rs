//! Four-way item verdicts.
//!
//! An item is *validated as essential* when `n_E > N·p` and
//! `pmf(n_E; N, p) ≤ λ`, and *validated as unnecessary* under the same test
//! on `n_U`. The pair of flags selects one of four statuses. The count path
//! ([`classify_by_count`]) compares against `n_critical` instead and must
//! always land on the same status.

use std::fmt;

use serde::Serialize;

use crate::binomial::{pmf, BinomialParams};
use crate::critical::{bcv_n_critical, CriticalValue, CutLevel};
use crate::error::{BcvError, Result};
use crate::legacy::{ayre_n_critical, cvr, lawshe_retain, wilson_n_critical, CvrValue, LawsheMinTable};
use crate::probability::ExactProbability;
use crate::survey::{ItemTally, Scale};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ValidationStatus {
    /// Essential, not unnecessary.
    #[serde(rename = "A")]
    Retain,
    /// Both essential and unnecessary.
    #[serde(rename = "B")]
    StrongParadox,
    /// Neither.
    #[serde(rename = "C")]
    WeakParadox,
    /// Unnecessary, not essential.
    #[serde(rename = "D")]
    Discard,
}

impl ValidationStatus {
    pub const ALL: [ValidationStatus; 4] = [
        ValidationStatus::Retain,
        ValidationStatus::StrongParadox,
        ValidationStatus::WeakParadox,
        ValidationStatus::Discard,
    ];

    pub fn from_flags(essential: bool, unnecessary: bool) -> Self {
        match (essential, unnecessary) {
            (true, false) => ValidationStatus::Retain,
            (true, true) => ValidationStatus::StrongParadox,
            (false, false) => ValidationStatus::WeakParadox,
            (false, true) => ValidationStatus::Discard,
        }
    }

    pub fn code(self) -> char {
        match self {
            ValidationStatus::Retain => 'A',
            ValidationStatus::StrongParadox => 'B',
            ValidationStatus::WeakParadox => 'C',
            ValidationStatus::Discard => 'D',
        }
    }

    /// Short action keyword.
    pub fn action(self) -> &'static str {
        match self {
            ValidationStatus::Retain => "retain",
            ValidationStatus::StrongParadox => "review",
            ValidationStatus::WeakParadox => "review",
            ValidationStatus::Discard => "discard",
        }
    }

    pub fn recommendation(self) -> &'static str {
        match self {
            ValidationStatus::Retain => "retain: validated as essential and not as unnecessary",
            ValidationStatus::StrongParadox => {
                "strong paradox: validated as both essential and unnecessary; review the panel"
            }
            ValidationStatus::WeakParadox => {
                "weak paradox: validated as neither essential nor unnecessary; review the panel"
            }
            ValidationStatus::Discard => "discard: validated as unnecessary and not as essential",
        }
    }
}

impl fmt::Display for ValidationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Critical count from an earlier method plus the verdict it implies for `n_E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdVerdict {
    pub n_critical: Option<u64>,
    pub retain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawsheVerdict {
    pub cvr_min: String,
    pub retain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegacyVerdicts {
    /// Only present for panel sizes the printed `CVR_min` table covers.
    pub lawshe: Option<LawsheVerdict>,
    pub wilson: ThresholdVerdict,
    pub ayre: ThresholdVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemDecision {
    pub item_id: String,
    pub tally: ItemTally,
    pub lambda: CutLevel,
    pub p: ExactProbability,
    pub prob_essential: ExactProbability,
    pub prob_unnecessary: ExactProbability,
    pub n_critical: CriticalValue,
    pub essential_validated: bool,
    pub unnecessary_validated: bool,
    pub status: ValidationStatus,
    pub cvr: CvrValue,
    pub legacy: LegacyVerdicts,
}

/// Result of classifying one item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Decided(Box<ItemDecision>),
    /// Nobody gave a substantive answer, so there is no distribution to test.
    NoData(ItemTally),
}

impl Classification {
    pub fn status(&self) -> Option<ValidationStatus> {
        match self {
            Classification::Decided(d) => Some(d.status),
            Classification::NoData(_) => None,
        }
    }

    pub fn tally(&self) -> &ItemTally {
        match self {
            Classification::Decided(d) => &d.tally,
            Classification::NoData(t) => t,
        }
    }
}

/// Significance level used for the normal-approximation and exact
/// `p = 1/2` comparison verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegacySettings {
    pub alpha: ExactProbability,
    pub lawshe: LawsheMinTable,
}

impl Default for LegacySettings {
    fn default() -> Self {
        LegacySettings {
            alpha: ExactProbability::from_ratio(1, 20).expect("valid"),
            lawshe: LawsheMinTable::published(),
        }
    }
}

fn side_validated(count: u64, tally: &ItemTally, p: &ExactProbability, lambda: &CutLevel) -> Result<bool> {
    if tally.trials == 0 {
        return Err(BcvError::Undecidable(tally.item_id.clone()));
    }
    let params = BinomialParams::new(tally.trials, p.clone())?;
    Ok(params.above_mean(count) && pmf(count, &params)? <= *lambda.value())
}

pub fn validate_essential(tally: &ItemTally, p: &ExactProbability, lambda: &CutLevel) -> Result<bool> {
    side_validated(tally.n_essential, tally, p, lambda)
}

pub fn validate_unnecessary(tally: &ItemTally, p: &ExactProbability, lambda: &CutLevel) -> Result<bool> {
    side_validated(tally.n_unnecessary, tally, p, lambda)
}

pub fn classify(tally: &ItemTally, scale: Scale, lambda: &CutLevel) -> Result<Classification> {
    classify_with(tally, scale, lambda, &LegacySettings::default())
}

pub fn classify_with(
    tally: &ItemTally,
    scale: Scale,
    lambda: &CutLevel,
    legacy: &LegacySettings,
) -> Result<Classification> {
    if scale == Scale::S3 && tally.n_not_answered > 0 {
        return Err(BcvError::Configuration(format!(
            "item `{}` has NA responses but the scale is S3",
            tally.item_id
        )));
    }
    if tally.trials != tally.n_essential + tally.n_important + tally.n_unnecessary {
        return Err(BcvError::Configuration(format!(
            "item `{}` has an inconsistent panel size",
            tally.item_id
        )));
    }
    if tally.trials == 0 {
        return Ok(Classification::NoData(tally.clone()));
    }

    let p = scale.p();
    let params = BinomialParams::new(tally.trials, p.clone())?;
    let essential_validated = validate_essential(tally, &p, lambda)?;
    let unnecessary_validated = validate_unnecessary(tally, &p, lambda)?;
    let n_critical = bcv_n_critical(tally.trials, &p, lambda)?;
    let cvr_value = cvr(tally.n_essential, tally.trials)?;

    let lawshe = match legacy.lawshe.get(tally.trials) {
        Some(min) => Some(LawsheVerdict {
            cvr_min: min.to_string(),
            retain: lawshe_retain(cvr_value, tally.trials, &legacy.lawshe)?,
        }),
        None => None,
    };
    let wilson_n = wilson_n_critical(tally.trials, &legacy.alpha)?;
    let ayre_n = ayre_n_critical(tally.trials, &legacy.alpha)?;

    Ok(Classification::Decided(Box::new(ItemDecision {
        item_id: tally.item_id.clone(),
        tally: tally.clone(),
        lambda: lambda.clone(),
        prob_essential: pmf(tally.n_essential, &params)?,
        prob_unnecessary: pmf(tally.n_unnecessary, &params)?,
        p,
        n_critical,
        essential_validated,
        unnecessary_validated,
        status: ValidationStatus::from_flags(essential_validated, unnecessary_validated),
        cvr: cvr_value,
        legacy: LegacyVerdicts {
            lawshe,
            wilson: ThresholdVerdict {
                n_critical: Some(wilson_n),
                retain: tally.n_essential >= wilson_n,
            },
            ayre: ThresholdVerdict {
                n_critical: ayre_n,
                retain: ayre_n.is_some_and(|n| tally.n_essential >= n),
            },
        },
    })))
}

/// Status from raw counts: a side is validated when its count is above the
/// mean and at least `n_critical`.
pub fn classify_by_count(tally: &ItemTally, n_critical: &CriticalValue) -> Result<ValidationStatus> {
    if n_critical.trials != tally.trials {
        return Err(BcvError::Configuration(format!(
            "critical value computed for N = {} applied to item `{}` with N = {}",
            n_critical.trials, tally.item_id, tally.trials
        )));
    }
    if tally.trials == 0 {
        return Err(BcvError::Undecidable(tally.item_id.clone()));
    }
    let params = BinomialParams::new(tally.trials, n_critical.p.clone())?;
    let passes = |count: u64| {
        n_critical
            .n_critical
            .is_some_and(|c| count >= c && params.above_mean(count))
    };
    Ok(ValidationStatus::from_flags(
        passes(tally.n_essential),
        passes(tally.n_unnecessary),
    ))
}
