//! The subcommands, as library functions returning their output.

use std::fs;
use std::path::{Path, PathBuf};

use kennelgrid_core::model::CriteriaVector;
use kennelgrid_core::placement::{
    audit, count_placements_brute_force, count_placements_closed_form,
};
use kennelgrid_core::topsis::{self, CriterionSpec};
use kennelgrid_core::{evaluate, evolve, Evolution, GaError};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::layout::LayoutFile;
use crate::render::render_svg;
use crate::report::{convergence_csv, ranked_matrix_csv, ranking_csv, read_matrix};

pub const OUTPUT_FILES: [&str; 4] = [
    "ranking.csv",
    "best_layout.json",
    "convergence.csv",
    "best_layout.svg",
];

fn ga_error(e: GaError) -> CliError {
    match e {
        GaError::InvalidConfig(msg) => CliError::Validation(msg),
        other => CliError::Internal(other.to_string()),
    }
}

#[derive(Debug, Clone, Default)]
pub struct OptimizeOverrides {
    pub seed: Option<u64>,
    pub iterations: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct OptimizeOutcome {
    pub out_dir: PathBuf,
    pub evolution: Evolution,
}

/// Writes every file or none: on failure the files already written are removed.
fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, body) {
            for p in written.iter().chain(std::iter::once(&path)) {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::io(&path, e));
        }
        written.push(path);
    }
    Ok(())
}

/// Runs the search and writes the ranking, best layout (JSON and SVG) and
/// convergence log into the output directory.
pub fn cmd_optimize(
    config: &ScenarioConfig,
    overrides: &OptimizeOverrides,
) -> Result<OptimizeOutcome, CliError> {
    let mut cfg = config.clone();
    if let Some(seed) = overrides.seed {
        cfg.ga.seed = seed;
    }
    if let Some(n) = overrides.iterations {
        cfg.ga.iterations = n;
    }
    if let Some(out) = &overrides.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    let shelter = cfg.shelter()?;
    let ga = cfg.ga_config();
    log::info!(
        "optimizing {}: {}x{} cells, {} cages requested, {} iterations, seed {}",
        cfg.name.as_deref().unwrap_or("scenario"),
        shelter.dims().x,
        shelter.dims().y,
        shelter.requested_cages(),
        ga.iterations,
        ga.seed
    );
    let evolution = evolve(&shelter, &ga).map_err(ga_error)?;
    let generation = &evolution.final_generation;
    let (best, criteria) = generation.best();
    audit(best, &shelter)
        .map_err(|v| CliError::Internal(format!("best layout {}: {v}", best.id)))?;

    let files = [
        (OUTPUT_FILES[0], ranking_csv(generation)),
        (
            OUTPUT_FILES[1],
            LayoutFile::from_chromosome(best, &shelter, Some(*criteria)).to_json(),
        ),
        (OUTPUT_FILES[2], convergence_csv(&evolution.logs)),
        (OUTPUT_FILES[3], render_svg(&shelter, best, &cfg.render)),
    ];
    write_all(&cfg.output_dir, &files)?;
    log::info!("wrote results to {}", cfg.output_dir.display());
    Ok(OptimizeOutcome {
        out_dir: cfg.output_dir,
        evolution,
    })
}

/// Criteria of a given layout. Layouts that break placement rules are still
/// scored, with a warning.
pub fn cmd_evaluate(
    config: &ScenarioConfig,
    layout: &LayoutFile,
) -> Result<CriteriaVector, CliError> {
    let shelter = config.shelter()?;
    let chrom = layout.to_chromosome(&shelter)?;
    if let Err(v) = audit(&chrom, &shelter) {
        log::warn!("layout is not feasible: {v}");
    }
    evaluate(&chrom, &shelter).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn parse_weights(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|w| {
            let w = w.trim();
            w.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Validation(format!("weight `{w}` is not a number")))
        })
        .collect()
}

/// Ranks an arbitrary decision matrix given as CSV text.
pub fn cmd_rank(matrix_csv: &str, weights: &[f64]) -> Result<String, CliError> {
    let matrix = read_matrix(matrix_csv)?;
    if weights.len() != matrix.criteria.len() {
        return Err(CliError::Validation(format!(
            "{} weights given for {} criteria",
            weights.len(),
            matrix.criteria.len()
        )));
    }
    let criteria: Vec<CriterionSpec> = matrix
        .criteria
        .iter()
        .zip(weights)
        .map(|(name, &w)| CriterionSpec::new(name.clone(), w))
        .collect();
    let ranked =
        topsis::rank(matrix.rows, &criteria).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(ranked_matrix_csv(&matrix.criteria, &ranked))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlacementCount {
    pub closed_form: u64,
    pub brute_force: u64,
}

impl PlacementCount {
    pub fn agree(&self) -> bool {
        self.closed_form == self.brute_force
    }

    pub fn report(&self) -> String {
        format!(
            "closed_form: {}\nbrute_force: {}\nagree: {}\n",
            self.closed_form,
            self.brute_force,
            self.agree()
        )
    }
}

/// Single-cage placement counts of the shelter with doors and columns removed.
pub fn cmd_count_placements(config: &ScenarioConfig) -> PlacementCount {
    PlacementCount {
        closed_form: count_placements_closed_form(&config.shelter),
        brute_force: count_placements_brute_force(&config.shelter),
    }
}

pub fn cmd_render(config: &ScenarioConfig, layout: &LayoutFile) -> Result<String, CliError> {
    let shelter = config.shelter()?;
    let chrom = layout.to_chromosome(&shelter)?;
    Ok(render_svg(&shelter, &chrom, &config.render))
}
