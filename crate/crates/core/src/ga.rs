//! Genetic search over layouts with TOPSIS closeness as fitness.
//!
//! Each generation is evaluated and ranked; the best `elite_fraction`
//! survive unchanged, the rest is replaced by crossover pairs and mutation
//! children whose parents are drawn by roulette wheel on closeness.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fitness::evaluate_population;
use crate::model::{Chromosome, ChromosomeId, CriteriaVector, ModelError, Shelter};
use crate::par;
use crate::placement::{
    fill_grid, is_feasible, LayoutGrid, StrategyMix, StrategySampler, DEFAULT_MAX_ATTEMPTS,
};
use crate::rng::{substream, Stream};
use crate::topsis::{self, layout_criteria, CriterionSpec, RankedPopulation, TopsisError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error("mutation needs a parent with at least two cages, got {len}")]
    DegenerateParent { len: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Topsis(#[from] TopsisError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_children: usize,
    pub mutation_children: usize,
    pub elite_fraction: f64,
    pub iterations: usize,
    pub strategy_mix: StrategyMix,
    /// Signed weights for AC, LSP, ASP, CF, IC.
    pub criteria: Vec<CriterionSpec>,
    pub seed: u64,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
}

fn default_max_attempts() -> usize {
    DEFAULT_MAX_ATTEMPTS
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 24,
            crossover_children: 6,
            mutation_children: 6,
            elite_fraction: 0.5,
            iterations: 50,
            strategy_mix: StrategyMix::default(),
            criteria: layout_criteria([0.44, -0.04, -0.04, -0.44, -0.04]),
            seed: 0,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

impl GaConfig {
    pub fn elite_count(&self) -> usize {
        (self.elite_fraction * self.population_size as f64 + 1e-9).floor() as usize
    }

    pub fn policy(&self) -> PlacementPolicy {
        PlacementPolicy {
            mix: self.strategy_mix,
            max_attempts: self.max_attempts,
        }
    }

    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |m: String| Err(GaError::InvalidConfig(m));
        if self.population_size == 0 {
            return bad("population_size must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.elite_fraction) {
            return bad("elite_fraction must lie in [0, 1]".into());
        }
        let elites = self.elite_count();
        if elites + self.crossover_children + self.mutation_children != self.population_size {
            return bad(format!(
                "{elites} elites + {} crossover + {} mutation children must equal population_size {}",
                self.crossover_children, self.mutation_children, self.population_size
            ));
        }
        if !self.crossover_children.is_multiple_of(2) {
            return bad("crossover_children must be even".into());
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be positive".into());
        }
        self.strategy_mix
            .validate()
            .map_err(|e| GaError::InvalidConfig(e.to_string()))?;
        if self.criteria.len() != 5 {
            return bad(format!("expected 5 criteria, got {}", self.criteria.len()));
        }
        if self.criteria.iter().any(|c| !c.weight.is_finite()) {
            return bad("criterion weights must be finite".into());
        }
        let mass = topsis::weight_mass(&self.criteria);
        if (mass - 1.0).abs() > 1e-9 {
            return bad(format!(
                "absolute criterion weights sum to {mass}, expected 1"
            ));
        }
        Ok(())
    }
}

/// How new cages are placed when filling or repairing a layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementPolicy {
    pub mix: StrategyMix,
    pub max_attempts: usize,
}

impl Default for PlacementPolicy {
    fn default() -> Self {
        PlacementPolicy {
            mix: StrategyMix::default(),
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

impl PlacementPolicy {
    fn sampler(&self) -> StrategySampler {
        self.mix.sampler()
    }
}

/// Best, mean and median of one criterion over a population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionStats {
    pub best: f64,
    pub mean: f64,
    pub median: f64,
}

impl CriterionStats {
    fn of(mut values: Vec<f64>, benefit: bool) -> Self {
        values.sort_by(f64::total_cmp);
        let n = values.len();
        if n == 0 {
            return CriterionStats {
                best: 0.0,
                mean: 0.0,
                median: 0.0,
            };
        }
        let best = if benefit { values[n - 1] } else { values[0] };
        let mean = values.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            (values[n / 2 - 1] + values[n / 2]) / 2.0
        };
        CriterionStats { best, mean, median }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationLog {
    pub iteration: usize,
    pub best_id: ChromosomeId,
    pub best_closeness: f64,
    /// Stats for AC, LSP, ASP, CF, IC. "Best" follows each criterion's
    /// direction.
    pub criteria: [CriterionStats; 5],
}

/// One evaluated and ranked generation. `population[k]` and `criteria[k]`
/// belong to `ranking.rows[k]`.
#[derive(Debug, Clone)]
pub struct Generation {
    pub iteration: usize,
    pub population: Vec<Chromosome>,
    pub criteria: Vec<CriteriaVector>,
    pub ranking: RankedPopulation<ChromosomeId>,
}

impl Generation {
    pub fn log(&self, criteria: &[CriterionSpec]) -> GenerationLog {
        let stats = std::array::from_fn(|j| {
            let values = self.criteria.iter().map(|c| c.to_array()[j]).collect();
            CriterionStats::of(values, criteria[j].is_benefit())
        });
        let best = self.ranking.best().expect("generation is never empty");
        GenerationLog {
            iteration: self.iteration,
            best_id: best.id,
            best_closeness: best.closeness,
            criteria: stats,
        }
    }

    pub fn best(&self) -> (&Chromosome, &CriteriaVector) {
        (&self.population[0], &self.criteria[0])
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub final_generation: Generation,
    /// One entry per evaluated generation, the initial one included.
    pub logs: Vec<GenerationLog>,
}

/// Hands out run-scoped chromosome ids.
#[derive(Debug, Clone, Default)]
pub struct IdCounter(u64);

impl IdCounter {
    pub fn next_id(&mut self) -> ChromosomeId {
        self.0 += 1;
        ChromosomeId(self.0)
    }
}

/// `population_size` layouts, each filled from empty on its own substream.
pub fn init_population(shelter: &Shelter, cfg: &GaConfig, ids: &mut IdCounter) -> Vec<Chromosome> {
    let policy = cfg.policy();
    let sampler = policy.sampler();
    let slots: Vec<ChromosomeId> = (0..cfg.population_size).map(|_| ids.next_id()).collect();
    par::map_indexed(&slots, |i, &id| {
        let mut rng = substream(cfg.seed, Stream::Init, 0, i as u64);
        let mut grid = LayoutGrid::new(shelter);
        fill_grid(&mut grid, shelter, &sampler, &mut rng, policy.max_attempts);
        Chromosome::new(id, grid.into_placements())
    })
}

/// Roulette-wheel draw over closeness; uniform when every closeness is 0.
/// Returns the row position in `ranked`.
pub fn roulette_select<I, R: Rng + ?Sized>(ranked: &RankedPopulation<I>, rng: &mut R) -> usize {
    assert!(!ranked.is_empty(), "cannot select from an empty ranking");
    let total: f64 = ranked.rows.iter().map(|r| r.closeness).sum();
    if total <= 0.0 {
        return rng.gen_range(0..ranked.len());
    }
    let mut ticket = rng.gen::<f64>() * total;
    for (k, row) in ranked.rows.iter().enumerate() {
        if ticket < row.closeness {
            return k;
        }
        ticket -= row.closeness;
    }
    // rounding left the ticket past the end: take the last row with weight
    ranked
        .rows
        .iter()
        .rposition(|r| r.closeness > 0.0)
        .expect("positive total")
}

/// Drops genes that clash with earlier kept genes or are infeasible, then
/// tops the layout back up toward the requested count.
pub fn repair<R: Rng + ?Sized>(
    chrom: Chromosome,
    shelter: &Shelter,
    policy: &PlacementPolicy,
    rng: &mut R,
) -> Chromosome {
    let mut grid = LayoutGrid::new(shelter);
    for &p in &chrom.placements {
        if grid.len() >= shelter.requested_cages() {
            break;
        }
        if is_feasible(p, &grid, shelter) {
            grid.stamp(p, shelter);
        }
    }
    fill_grid(
        &mut grid,
        shelter,
        &policy.sampler(),
        rng,
        policy.max_attempts,
    );
    Chromosome::new(chrom.id, grid.into_placements())
}

/// Cuts both parents along a random axis at a random interior coordinate
/// and swaps the parts. A cage goes with the side its lower-left corner is
/// on. Children keep the ids of their first parent; callers reassign them.
pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    shelter: &Shelter,
    policy: &PlacementPolicy,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let dims = shelter.dims();
    let along_x = rng.gen_bool(0.5);
    let extent = if along_x { dims.x } else { dims.y };
    let cut = rng.gen_range(1..extent.max(2));
    let coord = |p: &crate::model::Placement| if along_x { p.x } else { p.y };
    let splice = |low: &Chromosome, high: &Chromosome| -> Vec<_> {
        low.placements
            .iter()
            .filter(|p| coord(p) < cut)
            .chain(high.placements.iter().filter(|p| coord(p) >= cut))
            .copied()
            .collect()
    };
    let ab = Chromosome::new(a.id, splice(a, b));
    let ba = Chromosome::new(b.id, splice(b, a));
    let ab = repair(ab, shelter, policy, rng);
    let ba = repair(ba, shelter, policy, rng);
    (ab, ba)
}

/// Keeps a uniform random subset of `k ∈ {1, …, len − 1}` genes (gene order
/// preserved) and refills the rest.
pub fn mutate<R: Rng + ?Sized>(
    parent: &Chromosome,
    shelter: &Shelter,
    policy: &PlacementPolicy,
    rng: &mut R,
) -> Result<Chromosome, GaError> {
    let len = parent.len();
    if len < 2 {
        return Err(GaError::DegenerateParent { len });
    }
    let k = rng.gen_range(1..len);
    let mut keep = index::sample(rng, len, k).into_vec();
    keep.sort_unstable();
    let kept: Vec<_> = keep.into_iter().map(|i| parent.placements[i]).collect();
    let mut grid = LayoutGrid::from_placements(shelter, &kept);
    fill_grid(
        &mut grid,
        shelter,
        &policy.sampler(),
        rng,
        policy.max_attempts,
    );
    Ok(Chromosome::new(parent.id, grid.into_placements()))
}

/// Evaluates and ranks a population; the returned generation lists
/// chromosomes best first.
pub fn assess(
    shelter: &Shelter,
    criteria: &[CriterionSpec],
    iteration: usize,
    population: Vec<Chromosome>,
) -> Result<Generation, GaError> {
    let scores = evaluate_population(shelter, &population)?;
    let ranking = topsis::rank(
        population
            .iter()
            .zip(&scores)
            .map(|(c, s)| (c.id, s.to_array()))
            .collect(),
        criteria,
    )?;
    let mut slots: Vec<Option<Chromosome>> = population.into_iter().map(Some).collect();
    let mut ordered = Vec::with_capacity(slots.len());
    let mut ordered_scores = Vec::with_capacity(slots.len());
    for row in &ranking.rows {
        ordered.push(slots[row.index].take().expect("each row used once"));
        ordered_scores.push(scores[row.index]);
    }
    Ok(Generation {
        iteration,
        population: ordered,
        criteria: ordered_scores,
        ranking,
    })
}

/// Builds the next population from a ranked generation.
pub fn next_population(
    shelter: &Shelter,
    cfg: &GaConfig,
    current: &Generation,
    ids: &mut IdCounter,
) -> Vec<Chromosome> {
    let policy = cfg.policy();
    let t = current.iteration as u64;
    let elites = cfg.elite_count().min(current.population.len());
    let mut next: Vec<Chromosome> = current.population[..elites].to_vec();

    let mut select = substream(cfg.seed, Stream::Selection, t, 0);
    let pairs: Vec<(usize, usize)> = (0..cfg.crossover_children / 2)
        .map(|_| {
            let a = roulette_select(&current.ranking, &mut select);
            let b = roulette_select(&current.ranking, &mut select);
            (a, b)
        })
        .collect();
    let singles: Vec<usize> = (0..cfg.mutation_children)
        .map(|_| roulette_select(&current.ranking, &mut select))
        .collect();

    let pop = &current.population;
    let crossed = par::map_indexed(&pairs, |k, &(a, b)| {
        let mut rng = substream(cfg.seed, Stream::Crossover, t, k as u64);
        crossover(&pop[a], &pop[b], shelter, &policy, &mut rng)
    });
    let mutated = par::map_indexed(&singles, |k, &p| {
        let mut rng = substream(cfg.seed, Stream::Mutation, t, k as u64);
        match mutate(&pop[p], shelter, &policy, &mut rng) {
            Ok(child) => child,
            Err(_) => {
                let mut grid = LayoutGrid::new(shelter);
                fill_grid(
                    &mut grid,
                    shelter,
                    &policy.sampler(),
                    &mut rng,
                    policy.max_attempts,
                );
                Chromosome::new(pop[p].id, grid.into_placements())
            }
        }
    });

    let children = crossed
        .into_iter()
        .flat_map(|(ab, ba)| [ab, ba])
        .chain(mutated);
    for mut child in children {
        child.id = ids.next_id();
        next.push(child);
    }
    next
}

/// Runs the search, calling `observe` on every evaluated generation.
pub fn evolve_with<F: FnMut(&Generation)>(
    shelter: &Shelter,
    cfg: &GaConfig,
    mut observe: F,
) -> Result<Evolution, GaError> {
    cfg.validate()?;
    let mut ids = IdCounter::default();
    let mut population = init_population(shelter, cfg, &mut ids);
    let mut logs = Vec::with_capacity(cfg.iterations + 1);
    let mut iteration = 0;
    loop {
        let generation = assess(shelter, &cfg.criteria, iteration, population)?;
        let log = generation.log(&cfg.criteria);
        log::info!(
            "generation {iteration}: best {} (C* {:.4}), best AC {}",
            log.best_id,
            log.best_closeness,
            log.criteria[0].best
        );
        logs.push(log);
        observe(&generation);
        if iteration == cfg.iterations {
            return Ok(Evolution {
                final_generation: generation,
                logs,
            });
        }
        population = next_population(shelter, cfg, &generation, &mut ids);
        iteration += 1;
    }
}

pub fn evolve(shelter: &Shelter, cfg: &GaConfig) -> Result<Evolution, GaError> {
    evolve_with(shelter, cfg, |_| {})
}
