//! Full criteria evaluation of layouts.

use crate::access::{access_metrics, field_or_unreachable};
use crate::confrontation::cf_score;
use crate::model::{Chromosome, CriteriaVector, ModelError, Shelter};
use crate::par;

/// AC, LSP, ASP, CF and IC of one layout.
pub fn evaluate(chrom: &Chromosome, shelter: &Shelter) -> Result<CriteriaVector, ModelError> {
    let grid = shelter.rasterize(chrom)?;
    let field = field_or_unreachable(&grid, shelter);
    let access = access_metrics(chrom, &field, shelter);
    Ok(CriteriaVector {
        ac: access.ac,
        lsp: access.lsp,
        asp: access.asp,
        cf: cf_score(chrom, &grid, shelter),
        ic: access.ic,
    })
}

/// Evaluates every chromosome, in parallel when the `parallel` feature is on.
pub fn evaluate_population(
    shelter: &Shelter,
    population: &[Chromosome],
) -> Result<Vec<CriteriaVector>, ModelError> {
    par::map_indexed(population, |_, c| evaluate(c, shelter))
        .into_iter()
        .collect()
}

/// Single-threaded [`evaluate_population`].
pub fn evaluate_population_serial(
    shelter: &Shelter,
    population: &[Chromosome],
) -> Result<Vec<CriteriaVector>, ModelError> {
    population.iter().map(|c| evaluate(c, shelter)).collect()
}
