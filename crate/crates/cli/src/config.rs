//! Scenario configuration: the shelter, search settings, criterion weights
//! and output options of one optimization run.

use std::path::{Path, PathBuf};

use kennelgrid_core::ga::GaConfig;
use kennelgrid_core::topsis::layout_criteria;
use kennelgrid_core::{GaError, Shelter, ShelterSpec, StrategyMix};
use serde::{Deserialize, Serialize};

use crate::error::{parse_json, read_file, CliError};

/// Signed criterion weights. A negative weight marks a criterion to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub ac: f64,
    pub lsp: f64,
    pub asp: f64,
    pub cf: f64,
    pub ic: f64,
}

impl Weights {
    pub fn from_array([ac, lsp, asp, cf, ic]: [f64; 5]) -> Self {
        Weights {
            ac,
            lsp,
            asp,
            cf,
            ic,
        }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.ac, self.lsp, self.asp, self.cf, self.ic]
    }
}

impl Default for Weights {
    fn default() -> Self {
        Weights::from_array([0.44, -0.04, -0.04, -0.44, -0.04])
    }
}

/// Search settings; criterion weights live in [`ScenarioConfig::weights`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaSettings {
    pub population_size: usize,
    pub crossover_children: usize,
    pub mutation_children: usize,
    pub elite_fraction: f64,
    pub iterations: usize,
    pub strategy_mix: StrategyMix,
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for GaSettings {
    fn default() -> Self {
        let d = GaConfig::default();
        GaSettings {
            population_size: d.population_size,
            crossover_children: d.crossover_children,
            mutation_children: d.mutation_children,
            elite_fraction: d.elite_fraction,
            iterations: d.iterations,
            strategy_mix: d.strategy_mix,
            seed: d.seed,
            max_attempts: d.max_attempts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderOptions {
    pub px_per_cell: u32,
    pub show_paths: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            px_per_cell: 12,
            show_paths: false,
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub shelter: ShelterSpec,
    #[serde(default)]
    pub ga: GaSettings,
    #[serde(default)]
    pub weights: Weights,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub render: RenderOptions,
}

impl ScenarioConfig {
    pub fn ga_config(&self) -> GaConfig {
        let g = &self.ga;
        GaConfig {
            population_size: g.population_size,
            crossover_children: g.crossover_children,
            mutation_children: g.mutation_children,
            elite_fraction: g.elite_fraction,
            iterations: g.iterations,
            strategy_mix: g.strategy_mix,
            criteria: layout_criteria(self.weights.to_array()),
            seed: g.seed,
            max_attempts: g.max_attempts,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.shelter
            .validate()
            .map_err(|e| CliError::Validation(e.to_string()))?;
        if self.shelter.requested_cages == 0 {
            return Err(CliError::Validation(
                "shelter.requested_cages must be >= 1".into(),
            ));
        }
        if self.weights.to_array().iter().any(|w| !w.is_finite()) {
            return Err(CliError::Validation("weights must be finite".into()));
        }
        self.ga_config().validate().map_err(|e| match e {
            GaError::InvalidConfig(msg) => CliError::Validation(msg),
            other => CliError::Validation(other.to_string()),
        })?;
        if self.render.px_per_cell == 0 {
            return Err(CliError::Validation(
                "render.px_per_cell must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn shelter(&self) -> Result<Shelter, CliError> {
        Shelter::new(self.shelter.clone()).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a configuration held in memory. `path` is only used
/// in error messages.
pub fn parse_config(text: &str, path: &Path) -> Result<ScenarioConfig, CliError> {
    let cfg: ScenarioConfig = parse_json(text, path)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    parse_config(&read_file(path)?, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "shelter": {
            "length_m": 10.0, "width_m": 12.5, "resolution_m": 0.5,
            "cage": {"length_m": 1.5, "width_m": 0.75, "clearance_m": 2.5},
            "requested_cages": 20
        }
    }"#;

    #[test]
    fn defaults_fill_missing_sections() {
        let cfg = parse_config(MINIMAL, Path::new("m.json")).unwrap();
        assert_eq!(cfg.ga, GaSettings::default());
        assert_eq!(cfg.weights, Weights::default());
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        assert_eq!(cfg.ga_config().population_size, 24);
    }

    #[test]
    fn round_trips_through_json() {
        let mut cfg = parse_config(MINIMAL, Path::new("m.json")).unwrap();
        cfg.name = Some("desk".into());
        cfg.weights = Weights::from_array([0.9, -0.02, -0.02, -0.03, -0.03]);
        cfg.ga.strategy_mix = StrategyMix::from_weights([0.05, 0.0, 0.35, 0.3, 0.3]);
        let back = parse_config(&cfg.to_json(), Path::new("m.json")).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn weight_mass_must_be_one() {
        let text = MINIMAL.replace(
            "\"requested_cages\": 20\n        }",
            "\"requested_cages\": 20\n        },\n        \"weights\": {\"ac\": 0.5, \"lsp\": -0.1, \"asp\": -0.1, \"cf\": -0.1, \"ic\": -0.1}",
        );
        let err = parse_config(&text, Path::new("w.json")).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let text = MINIMAL.replace("\"width_m\": 0.75", "\"width_m\": \"wide\"");
        match parse_config(&text, Path::new("bad.json")).unwrap_err() {
            CliError::Parse { line, field, .. } => {
                assert_eq!(line, 4);
                assert_eq!(field, "shelter.cage.width_m");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = MINIMAL.replace(
            "\"requested_cages\"",
            "\"requested_cage\": 3, \"requested_cages\"",
        );
        assert!(matches!(
            parse_config(&text, Path::new("u.json")).unwrap_err(),
            CliError::Parse { .. }
        ));
    }
}
