//! CSV tables: ranked layouts, convergence logs and generic decision matrices.

use kennelgrid_core::model::CriteriaVector;
use kennelgrid_core::topsis::RankedPopulation;
use kennelgrid_core::{Generation, GenerationLog};

use crate::error::CliError;

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory writer flushes");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub const RANKING_HEADER: [&str; 8] = [
    "id",
    "AC",
    "LSP",
    "ASP",
    "CF",
    "IC",
    "score",
    "score_rescaled",
];

/// One row per chromosome, best first.
pub fn ranking_csv(generation: &Generation) -> String {
    let mut w = writer();
    w.write_record(RANKING_HEADER).unwrap();
    for ((chrom, c), row) in generation
        .population
        .iter()
        .zip(&generation.criteria)
        .zip(&generation.ranking.rows)
    {
        w.write_record([
            chrom.id.to_string(),
            c.ac.to_string(),
            c.lsp.to_string(),
            c.asp.to_string(),
            c.cf.to_string(),
            c.ic.to_string(),
            row.closeness.to_string(),
            generation.ranking.rescaled(row).to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// Parses one data row of a ranking table back into its id and criteria.
pub fn parse_ranking_row(record: &csv::StringRecord) -> Result<(String, CriteriaVector), CliError> {
    let field = |i: usize| {
        record
            .get(i)
            .ok_or_else(|| CliError::Validation(format!("missing column {i}")))
    };
    let int = |i: usize| -> Result<usize, CliError> {
        field(i)?
            .parse()
            .map_err(|_| CliError::Validation(format!("column {i} is not an integer")))
    };
    let real = |i: usize| -> Result<f64, CliError> {
        field(i)?
            .parse()
            .map_err(|_| CliError::Validation(format!("column {i} is not a number")))
    };
    Ok((
        field(0)?.to_string(),
        CriteriaVector {
            ac: int(1)?,
            lsp: int(2)?,
            asp: real(3)?,
            cf: real(4)?,
            ic: int(5)?,
        },
    ))
}

/// Per-generation best, mean and median of every criterion.
pub fn convergence_csv(logs: &[GenerationLog]) -> String {
    let mut w = writer();
    let mut header = vec![
        "iteration".to_string(),
        "best_id".into(),
        "best_score".into(),
    ];
    for name in CriteriaVector::NAMES {
        for stat in ["best", "mean", "median"] {
            header.push(format!("{name}_{stat}"));
        }
    }
    w.write_record(&header).unwrap();
    for log in logs {
        let mut rec = vec![
            log.iteration.to_string(),
            log.best_id.to_string(),
            log.best_closeness.to_string(),
        ];
        for s in &log.criteria {
            rec.extend([s.best.to_string(), s.mean.to_string(), s.median.to_string()]);
        }
        w.write_record(&rec).unwrap();
    }
    finish(w)
}

/// A decision matrix read from CSV: an id column followed by numeric criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub criteria: Vec<String>,
    pub rows: Vec<(String, Vec<f64>)>,
}

pub fn read_matrix(text: &str) -> Result<Matrix, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| CliError::Validation(format!("matrix header: {e}")))?
        .clone();
    if header.len() < 2 {
        return Err(CliError::Validation(
            "matrix needs an id column and at least one criterion".into(),
        ));
    }
    let criteria: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| CliError::Validation(format!("matrix line {line}: {e}")))?;
        let values = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    CliError::Validation(format!("matrix line {line}: `{v}` is not a number"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((rec.get(0).unwrap_or_default().to_string(), values));
    }
    if rows.is_empty() {
        return Err(CliError::Validation("matrix has no rows".into()));
    }
    Ok(Matrix { criteria, rows })
}

/// The ranked matrix with raw and max-rescaled closeness columns.
pub fn ranked_matrix_csv(criteria: &[String], ranked: &RankedPopulation<String>) -> String {
    let mut w = writer();
    let mut header = vec!["rank".to_string(), "id".into()];
    header.extend(criteria.iter().cloned());
    header.extend(["score".into(), "score_rescaled".into()]);
    w.write_record(&header).unwrap();
    for (k, row) in ranked.rows.iter().enumerate() {
        let mut rec = vec![(k + 1).to_string(), row.id.clone()];
        rec.extend(row.values.iter().map(f64::to_string));
        rec.extend([row.closeness.to_string(), ranked.rescaled(row).to_string()]);
        w.write_record(&rec).unwrap();
    }
    finish(w)
}
