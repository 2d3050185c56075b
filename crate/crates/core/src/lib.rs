//! Binomial cut-level content validity.
//!
//! Decides whether an expert panel's "essential" or "unnecessary" ratings of
//! a questionnaire item are more concentrated than random answering would
//! produce, using exact binomial point probabilities against a cut level λ.
//! All probabilities are exact rationals; floating point is only used for
//! rendering and for the explicit `*_float` helpers.
//!
//! ```
//! use bcv_core::{bcv_n_critical, CutLevel, ExactProbability};
//!
//! let p = ExactProbability::from_ratio(1, 3).unwrap();
//! let v = bcv_n_critical(20, &p, &CutLevel::five_percent()).unwrap();
//! assert_eq!(v.n_critical, Some(11));
//! ```

pub mod binomial;
pub mod classifier;
pub mod critical;
pub mod decimal;
pub mod error;
pub mod legacy;
pub mod probability;
pub mod reference;
pub mod survey;

pub use binomial::{
    binomial_coefficient, ln_pmf_float, pmf, pmf_float, pmf_series, upper_tail, BinomialParams, PmfCursor,
};
pub use classifier::{
    classify, classify_by_count, classify_with, validate_essential, validate_unnecessary, Classification, ItemDecision,
    LegacySettings, LegacyVerdicts, ValidationStatus,
};
pub use critical::{
    bcv_n_critical, bcv_n_critical_with, discrepancy_report, generate_table, reference_table, CriticalOptions,
    CriticalTable, CriticalValue, CutLevel, Discrepancy, MAX_TABLE_PANEL,
};
pub use error::{BcvError, Result};
pub use legacy::{
    ayre_n_critical, comparison_table, cvr, lawshe_retain, wilson_n_critical, ComparisonConfig, ComparisonTable,
    CvrValue, LawsheMinTable,
};
pub use probability::ExactProbability;
pub use survey::{parse_survey, tally, tally_all, ItemTally, ResponseOption, Scale, Survey};
