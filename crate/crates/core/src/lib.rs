//! Cage layout synthesis for animal shelters.
//!
//! A shelter floor is discretized into square cells. Candidate layouts are
//! sequences of cage placements, built by stochastic placement strategies
//! and improved by a genetic search. Each layout is scored on five criteria
//! (accessible cages, longest and average entrance path, confrontation
//! score, inaccessible cages) and populations are ranked with TOPSIS.
//!
//! With the default `parallel` feature, population evaluation and offspring
//! generation run on rayon; results are identical either way.

pub mod access;
pub mod confrontation;
pub mod fitness;
pub mod ga;
pub mod model;
pub mod par;
pub mod placement;
pub mod rng;
pub mod topsis;

pub use fitness::{evaluate, evaluate_population};
pub use ga::{evolve, Evolution, GaConfig, GaError, Generation, GenerationLog};
pub use model::{
    CageSpec, Chromosome, ChromosomeId, ColumnSpec, CriteriaVector, DoorSpec, Orientation,
    Placement, Shelter, ShelterSpec, Wall,
};
pub use placement::{Strategy, StrategyMix};
pub use topsis::{CriterionSpec, RankedPopulation};
