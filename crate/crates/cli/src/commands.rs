use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;

use bcv_core::decimal::{format_significant, SIGNIFICANT_DIGITS};
use bcv_core::legacy::{comparison_discrepancies, reference_comparison_table, COMPARISON_COLUMNS};
use bcv_core::{
    classify, comparison_table, discrepancy_report, generate_table, parse_survey, pmf_series, reference_table,
    tally_all, BinomialParams, Classification, ComparisonConfig, CriticalOptions, ExactProbability,
};

use crate::config::{CommandKind, RunConfig};
use crate::error::CliError;
use crate::render::{Cell, Report};

fn decimal(p: &ExactProbability) -> Cell {
    Cell::Text(format_significant(p.as_ratio(), SIGNIFICANT_DIGITS))
}

fn exact(p: &ExactProbability) -> Cell {
    Cell::Text(p.to_string())
}

/// Runs the configured command and renders its report.
pub fn run(config: &RunConfig) -> Result<String, CliError> {
    let report = match config.command {
        CommandKind::Tables => run_tables(config)?,
        CommandKind::Classify => run_classify(config)?,
        CommandKind::Compare => run_compare(config)?,
        CommandKind::Distribution => run_distribution(config)?,
    };
    report.render(config.format)
}

pub fn run_tables(config: &RunConfig) -> Result<Report, CliError> {
    let p = config.scale.p();
    let options = CriticalOptions {
        min_floor: config.min_floor,
    };
    let table = generate_table(config.range.clone(), &p, &config.lambdas, options)?;

    let mut columns = vec!["N", "lambda", "p", "n_critical", "attainable"];
    if config.verify {
        columns.extend(["reference_n_critical", "discrepancy"]);
    }
    let mut report = Report::new(&columns);

    // (N, λ index) cells that disagree with the bundled reference
    let mut mismatched = BTreeSet::new();
    let reference = if config.verify { reference_table(&p) } else { None };
    if let Some(reference) = &reference {
        let lo = (*config.range.start()).max(reference.rows[0].trials);
        let hi = (*config.range.end()).min(reference.rows[reference.rows.len() - 1].trials);
        let shared: Vec<_> = config
            .lambdas
            .iter()
            .filter(|l| reference.lambdas.contains(l))
            .cloned()
            .collect();
        if lo <= hi && !shared.is_empty() {
            let generated = table.restrict(lo..=hi).select_lambdas(&shared);
            let expected = reference.restrict(lo..=hi).select_lambdas(&shared);
            for d in discrepancy_report(&generated, &expected)? {
                mismatched.insert((d.trials, d.lambda));
            }
        }
    }

    for row in &table.rows {
        for v in &row.values {
            let mut cells = vec![
                Cell::Int(row.trials),
                Cell::Text(v.lambda.to_string()),
                exact(&v.p),
                Cell::from(v.n_critical),
                Cell::Bool(v.attainable()),
            ];
            if config.verify {
                let reference_value = reference
                    .as_ref()
                    .and_then(|r| {
                        let i = r.lambdas.iter().position(|l| *l == v.lambda)?;
                        r.row(row.trials).map(|rr| rr.values[i].n_critical)
                    })
                    .flatten();
                cells.push(Cell::from(reference_value));
                cells.push(Cell::Bool(mismatched.contains(&(row.trials, v.lambda.clone()))));
            }
            report.push(cells);
        }
    }
    Ok(report)
}

pub const CLASSIFY_COLUMNS: [&str; 23] = [
    "item_id",
    "n_E",
    "n_I",
    "n_U",
    "n_NA",
    "N",
    "prob_E",
    "prob_U",
    "prob_E_exact",
    "prob_U_exact",
    "n_critical",
    "essential_validated",
    "unnecessary_validated",
    "status",
    "recommendation",
    "explanation",
    "cvr",
    "lawshe_cvr_min",
    "lawshe",
    "wilson_n_critical",
    "wilson",
    "ayre_n_critical",
    "ayre",
];

fn verdict(retain: bool) -> Cell {
    Cell::from(if retain { "retain" } else { "discard" })
}

pub fn run_classify(config: &RunConfig) -> Result<Report, CliError> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("classify needs --input".into()))?;
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let survey = parse_survey(BufReader::new(file), config.scale)?;
    let lambda = &config.lambdas[0];

    let mut report = Report::new(&CLASSIFY_COLUMNS);
    for tally in tally_all(&survey) {
        let counts = [
            Cell::Text(tally.item_id.clone()),
            Cell::Int(tally.n_essential),
            Cell::Int(tally.n_important),
            Cell::Int(tally.n_unnecessary),
            Cell::Int(tally.n_not_answered),
            Cell::Int(tally.trials),
        ];
        let mut row: Vec<Cell> = counts.into();
        match classify(&tally, config.scale, lambda)? {
            Classification::NoData(_) => {
                row.extend(std::iter::repeat_n(Cell::Missing, 7));
                row.push(Cell::from("no-data"));
                row.push(Cell::from("review"));
                row.push(Cell::from("no substantive responses"));
                row.extend(std::iter::repeat_n(Cell::Missing, 7));
            }
            Classification::Decided(d) => {
                let (lawshe_min, lawshe) = match &d.legacy.lawshe {
                    Some(l) => (Cell::Text(l.cvr_min.clone()), verdict(l.retain)),
                    None => (Cell::Missing, Cell::Missing),
                };
                row.extend([
                    decimal(&d.prob_essential),
                    decimal(&d.prob_unnecessary),
                    exact(&d.prob_essential),
                    exact(&d.prob_unnecessary),
                    Cell::from(d.n_critical.n_critical),
                    Cell::Bool(d.essential_validated),
                    Cell::Bool(d.unnecessary_validated),
                    Cell::Text(d.status.code().to_string()),
                    Cell::from(d.status.action()),
                    Cell::from(d.status.recommendation()),
                    Cell::Text(d.cvr.to_decimal(SIGNIFICANT_DIGITS)),
                    lawshe_min,
                    lawshe,
                    Cell::from(d.legacy.wilson.n_critical),
                    verdict(d.legacy.wilson.retain),
                    Cell::from(d.legacy.ayre.n_critical),
                    verdict(d.legacy.ayre.retain),
                ]);
            }
        }
        report.push(row);
    }
    Ok(report)
}

pub fn run_compare(config: &RunConfig) -> Result<Report, CliError> {
    let settings = ComparisonConfig {
        wilson_alpha: config.wilson_alpha.clone(),
        ayre_alpha: config.ayre_alpha.clone(),
        options: CriticalOptions {
            min_floor: config.min_floor,
        },
    };
    let table = comparison_table(config.range.clone(), &settings)?;
    let mut columns = vec!["N"];
    columns.extend(COMPARISON_COLUMNS);
    if config.verify {
        columns.push("reference_mismatch");
    }
    let mut report = Report::new(&columns);

    let reference = reference_comparison_table();
    let diffs = if config.verify {
        comparison_discrepancies(&table, &reference)
    } else {
        Vec::new()
    };
    let covered = |n: u64| reference.rows.iter().any(|r| r.trials == n);

    for row in &table.rows {
        let mut cells = vec![Cell::Int(row.trials)];
        cells.extend(row.cells().into_iter().map(Cell::from));
        if config.verify {
            if covered(row.trials) {
                let cols: Vec<&str> = diffs
                    .iter()
                    .filter(|d| d.trials == row.trials)
                    .map(|d| d.column)
                    .collect();
                cells.push(Cell::Text(cols.join(";")));
            } else {
                cells.push(Cell::Missing);
            }
        }
        report.push(cells);
    }
    Ok(report)
}

pub fn run_distribution(config: &RunConfig) -> Result<Report, CliError> {
    let trials = *config.range.start();
    let params = BinomialParams::new(trials, config.scale.p())?;
    let mut report = Report::new(&["n", "probability", "exact"]);
    for (n, prob) in pmf_series(&params) {
        report.push(vec![Cell::Int(n), decimal(&prob), exact(&prob)]);
    }
    Ok(report)
}
