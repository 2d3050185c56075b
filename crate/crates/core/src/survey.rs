//! Expert-panel survey input and per-item tallies.
//!
//! Input is long-format CSV with the exact header
//! `respondent_id,item_id,response`, one rating per line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use log::debug;
use serde::Serialize;

use crate::error::{BcvError, Result};
use crate::probability::ExactProbability;

pub const SURVEY_HEADER: [&str; 3] = ["respondent_id", "item_id", "response"];

/// Response scale offered to the panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Scale {
    /// Essential / important but not essential / unnecessary.
    S3,
    /// `S3` plus a "cannot or will not answer" option.
    S4,
}

impl Scale {
    pub fn n_options(self) -> u64 {
        match self {
            Scale::S3 => 3,
            Scale::S4 => 4,
        }
    }

    /// Chance probability of any single option, `1 / n_options`.
    pub fn p(self) -> ExactProbability {
        ExactProbability::from_ratio(1, self.n_options()).expect("valid")
    }

    pub fn allows(self, option: ResponseOption) -> bool {
        option != ResponseOption::NotAnswered || self == Scale::S4
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::S3 => "S3",
            Scale::S4 => "S4",
        })
    }
}

impl FromStr for Scale {
    type Err = BcvError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "3" | "S3" => Ok(Scale::S3),
            "4" | "S4" => Ok(Scale::S4),
            _ => Err(BcvError::domain(format!("unknown scale `{s}` (expected 3 or 4)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ResponseOption {
    Essential,
    ImportantNotEssential,
    Unnecessary,
    NotAnswered,
}

impl ResponseOption {
    /// Case-insensitive token lookup: `E`/`ESSENTIAL`, `I`/`IMPORTANT`,
    /// `U`/`UNNECESSARY`, `NA`.
    pub fn from_token(token: &str) -> Option<Self> {
        let upper = token.trim().to_ascii_uppercase();
        let option = match upper.as_str() {
            "E" | "ESSENTIAL" => ResponseOption::Essential,
            "I" | "IMPORTANT" => ResponseOption::ImportantNotEssential,
            "U" | "UNNECESSARY" => ResponseOption::Unnecessary,
            "NA" => ResponseOption::NotAnswered,
            _ => return None,
        };
        if token != option.token() {
            debug!("canonicalized response token `{token}` to `{}`", option.token());
        }
        Some(option)
    }

    pub fn token(self) -> &'static str {
        match self {
            ResponseOption::Essential => "E",
            ResponseOption::ImportantNotEssential => "I",
            ResponseOption::Unnecessary => "U",
            ResponseOption::NotAnswered => "NA",
        }
    }
}

/// Per-item counts. `trials` is the effective panel size: respondents who
/// chose one of the three substantive options.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemTally {
    pub item_id: String,
    pub n_essential: u64,
    pub n_important: u64,
    pub n_unnecessary: u64,
    pub n_not_answered: u64,
    #[serde(rename = "N")]
    pub trials: u64,
}

impl ItemTally {
    /// Tally from raw counts; `N` is derived.
    pub fn new(
        item_id: impl Into<String>,
        n_essential: u64,
        n_important: u64,
        n_unnecessary: u64,
        n_not_answered: u64,
    ) -> Self {
        ItemTally {
            item_id: item_id.into(),
            n_essential,
            n_important,
            n_unnecessary,
            n_not_answered,
            trials: n_essential + n_important + n_unnecessary,
        }
    }

    fn record(&mut self, option: ResponseOption) {
        match option {
            ResponseOption::Essential => self.n_essential += 1,
            ResponseOption::ImportantNotEssential => self.n_important += 1,
            ResponseOption::Unnecessary => self.n_unnecessary += 1,
            ResponseOption::NotAnswered => self.n_not_answered += 1,
        }
        self.trials = self.n_essential + self.n_important + self.n_unnecessary;
    }
}

/// Validated panel responses. Items and respondents are kept in identifier
/// order, so nothing downstream depends on input row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survey {
    scale: Scale,
    items: BTreeSet<String>,
    responses: BTreeMap<(String, String), ResponseOption>,
}

impl Survey {
    pub fn new(scale: Scale) -> Self {
        Survey {
            scale,
            items: BTreeSet::new(),
            responses: BTreeMap::new(),
        }
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn items(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(String::as_str)
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn response_count(&self) -> usize {
        self.responses.len()
    }

    /// Adds one rating. `line` is only used for error messages.
    pub fn insert(&mut self, respondent: &str, item: &str, option: ResponseOption, line: u64) -> Result<()> {
        if !self.scale.allows(option) {
            return Err(BcvError::ScaleViolation {
                line,
                token: option.token().to_string(),
                scale: self.scale.to_string(),
            });
        }
        let key = (respondent.to_string(), item.to_string());
        if self.responses.contains_key(&key) {
            return Err(BcvError::Duplicate {
                line,
                respondent: respondent.to_string(),
                item: item.to_string(),
            });
        }
        self.items.insert(item.to_string());
        self.responses.insert(key, option);
        Ok(())
    }

    /// Writes the survey back out as canonical long-format CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| BcvError::domain(format!("write failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SURVEY_HEADER).map_err(io)?;
        for ((respondent, item), option) in &self.responses {
            w.write_record([respondent.as_str(), item.as_str(), option.token()])
                .map_err(io)?;
        }
        w.flush().map_err(|e| BcvError::domain(format!("write failed: {e}")))?;
        Ok(())
    }
}

/// Parses long-format survey CSV against `scale`.
///
/// A header-only (or completely empty) input is a survey with no items.
pub fn parse_survey<R: Read>(input: R, scale: Scale) -> Result<Survey> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let mut survey = Survey::new(scale);
    let mut records = reader.records();

    match records.next() {
        None => return Ok(survey),
        Some(header) => {
            let header = header.map_err(|e| csv_error(e, 1))?;
            if header.iter().ne(SURVEY_HEADER) {
                return Err(BcvError::Parse {
                    line: 1,
                    message: format!(
                        "expected header `{}`, found `{}`",
                        SURVEY_HEADER.join(","),
                        header.iter().collect::<Vec<_>>().join(",")
                    ),
                });
            }
        }
    }

    for record in records {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 3 {
            return Err(BcvError::Parse {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let (respondent, item, token) = (&record[0], &record[1], &record[2]);
        if respondent.is_empty() || item.is_empty() {
            return Err(BcvError::Parse {
                line,
                message: "empty respondent or item identifier".into(),
            });
        }
        let option = ResponseOption::from_token(token).ok_or_else(|| BcvError::Parse {
            line,
            message: format!("unknown response `{token}`"),
        })?;
        survey.insert(respondent, item, option, line)?;
    }
    Ok(survey)
}

fn csv_error(e: csv::Error, fallback_line: u64) -> BcvError {
    let line = e.position().map_or(fallback_line, |p| p.line());
    BcvError::Parse {
        line,
        message: e.to_string(),
    }
}

/// Counts for one item; `N` excludes "not answered".
pub fn tally(survey: &Survey, item_id: &str) -> Result<ItemTally> {
    if !survey.items.contains(item_id) {
        return Err(BcvError::Lookup(format!("no item `{item_id}` in the survey")));
    }
    let mut t = ItemTally::new(item_id, 0, 0, 0, 0);
    for ((_, item), option) in &survey.responses {
        if item == item_id {
            t.record(*option);
        }
    }
    Ok(t)
}

/// Tallies for every item, in item-identifier order.
pub fn tally_all(survey: &Survey) -> Vec<ItemTally> {
    let mut by_item: BTreeMap<&str, ItemTally> = survey
        .items
        .iter()
        .map(|i| (i.as_str(), ItemTally::new(i.as_str(), 0, 0, 0, 0)))
        .collect();
    for ((_, item), option) in &survey.responses {
        by_item
            .get_mut(item.as_str())
            .expect("items and responses stay in sync")
            .record(*option);
    }
    by_item.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, scale: Scale) -> Result<Survey> {
        parse_survey(text.as_bytes(), scale)
    }

    #[test]
    fn header_only_is_empty() {
        let s = parse("respondent_id,item_id,response\n", Scale::S3).unwrap();
        assert_eq!(s.item_count(), 0);
        assert_eq!(parse("", Scale::S3).unwrap().item_count(), 0);
    }

    #[test]
    fn counts_twenty_respondents() {
        let mut text = String::from("respondent_id,item_id,response\n");
        for r in 0..20 {
            let token = match r {
                0..=11 => "E",
                12..=17 => "I",
                _ => "U",
            };
            text.push_str(&format!("r{r},q1,{token}\n"));
        }
        let s = parse(&text, Scale::S3).unwrap();
        assert_eq!(tally(&s, "q1").unwrap(), ItemTally::new("q1", 12, 6, 2, 0));
        assert_eq!(tally(&s, "q1").unwrap().trials, 20);
    }

    #[test]
    fn not_answered_rejected_on_three_option_scale() {
        let err = parse("respondent_id,item_id,response\na,q1,E\nb,q1,NA\n", Scale::S3).unwrap_err();
        assert!(matches!(err, BcvError::ScaleViolation { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn not_answered_excluded_from_panel_size() {
        let s = parse(
            "respondent_id,item_id,response\na,q,E\nb,q,na\nc,q,NA\nd,q,unnecessary\n",
            Scale::S4,
        )
        .unwrap();
        let t = tally(&s, "q").unwrap();
        assert_eq!(
            (t.n_essential, t.n_important, t.n_unnecessary, t.n_not_answered),
            (1, 0, 1, 2)
        );
        assert_eq!(t.trials, 2);
    }

    #[test]
    fn tokens_are_case_insensitive() {
        for (tok, opt) in [
            ("e", ResponseOption::Essential),
            ("Essential", ResponseOption::Essential),
            ("important", ResponseOption::ImportantNotEssential),
            ("I", ResponseOption::ImportantNotEssential),
            ("Unnecessary", ResponseOption::Unnecessary),
            ("nA", ResponseOption::NotAnswered),
        ] {
            assert_eq!(ResponseOption::from_token(tok), Some(opt));
        }
        assert_eq!(ResponseOption::from_token("maybe"), None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("respondent_id,item_id,response\na,q,E\nb,q,maybe\n", Scale::S3).unwrap_err();
        assert_eq!(
            err,
            BcvError::Parse {
                line: 3,
                message: "unknown response `maybe`".into()
            }
        );
        let err = parse("respondent_id,item_id,response\na,q,E\na,q,U\n", Scale::S3).unwrap_err();
        assert!(matches!(err, BcvError::Duplicate { line: 3, .. }));
        let err = parse("respondent,item,response\n", Scale::S3).unwrap_err();
        assert!(matches!(err, BcvError::Parse { line: 1, .. }));
        let err = parse("respondent_id,item_id,response\na,q\n", Scale::S3).unwrap_err();
        assert!(matches!(err, BcvError::Parse { line: 2, .. }));
    }

    #[test]
    fn tally_lookup_and_empty_item() {
        let s = Survey::new(Scale::S3);
        assert!(matches!(tally(&s, "x"), Err(BcvError::Lookup(_))));
        let t = ItemTally::new("x", 0, 0, 0, 0);
        assert_eq!(t.trials, 0);
    }

    #[test]
    fn dropouts_are_allowed() {
        let s = parse("respondent_id,item_id,response\na,q1,E\na,q2,E\nb,q1,U\n", Scale::S3).unwrap();
        let all = tally_all(&s);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].trials, 2);
        assert_eq!(all[1].trials, 1);
    }

    #[test]
    fn scale_parsing() {
        assert_eq!("3".parse::<Scale>().unwrap(), Scale::S3);
        assert_eq!("s4".parse::<Scale>().unwrap(), Scale::S4);
        assert!("5".parse::<Scale>().is_err());
        assert_eq!(Scale::S4.p(), ExactProbability::from_ratio(1, 4).unwrap());
    }
}
