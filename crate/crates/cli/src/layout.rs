//! On-disk layout: each cage in grid cells and in meters.

use std::path::Path;

use kennelgrid_core::model::CriteriaVector;
use kennelgrid_core::{Chromosome, ChromosomeId, Orientation, Placement, Shelter};
use serde::{Deserialize, Serialize};

use crate::error::{parse_json, read_file, CliError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CageEntry {
    /// Lower-left body cell.
    pub x: i32,
    pub y: i32,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_m: Option<f64>,
    /// Body extent along `x`, meters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_x_m: Option<f64>,
    /// Body extent along `y`, meters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_y_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// Cell size the cell coordinates refer to. Checked against the config
    /// when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution_m: Option<f64>,
    pub cages: Vec<CageEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria: Option<CriteriaVector>,
}

impl LayoutFile {
    pub fn from_chromosome(
        chrom: &Chromosome,
        shelter: &Shelter,
        criteria: Option<CriteriaVector>,
    ) -> Self {
        let r = shelter.resolution();
        let cages = chrom
            .placements
            .iter()
            .map(|p| {
                let body = p.body(shelter.cage());
                CageEntry {
                    x: p.x,
                    y: p.y,
                    orientation: p.orientation,
                    x_m: Some(p.x as f64 * r),
                    y_m: Some(p.y as f64 * r),
                    size_x_m: Some((body.x1 - body.x0) as f64 * r),
                    size_y_m: Some((body.y1 - body.y0) as f64 * r),
                }
            })
            .collect();
        LayoutFile {
            id: Some(chrom.id.to_string()),
            resolution_m: Some(r),
            cages,
            criteria,
        }
    }

    /// Cell placements, after checking the file was written for this grid.
    pub fn to_chromosome(&self, shelter: &Shelter) -> Result<Chromosome, CliError> {
        if let Some(r) = self.resolution_m {
            if (r - shelter.resolution()).abs() > 1e-9 {
                return Err(CliError::Validation(format!(
                    "layout uses resolution {r} m but the shelter uses {} m",
                    shelter.resolution()
                )));
            }
        }
        let placements = self
            .cages
            .iter()
            .map(|c| Placement::new(c.x, c.y, c.orientation))
            .collect();
        Ok(Chromosome::new(ChromosomeId(0), placements))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("layout serializes");
        s.push('\n');
        s
    }
}

pub fn load_layout(path: &Path) -> Result<LayoutFile, CliError> {
    parse_json(&read_file(path)?, path)
}
