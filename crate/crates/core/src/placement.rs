//! Cage footprints, the feasibility predicate, the five placement
//! strategies, layout filling and placement counting.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    CageCells, CellRect, CellState, Chromosome, Coord, GridDims, OccupancyGrid, Orientation,
    Placement, Shelter, ShelterSpec,
};

/// Uniform draws tried by [`place_total_random`] before it falls back to
/// enumerating every candidate.
const REJECTION_TRIES: usize = 64;

/// Default number of consecutive failed attempts before `fill_layout` gives up.
pub const DEFAULT_MAX_ATTEMPTS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlacementError {
    #[error("placement ({x}, {y}, {orientation}) does not fit inside the grid")]
    OutOfBounds {
        x: i32,
        y: i32,
        orientation: Orientation,
    },
    #[error("invalid strategy mix: {0}")]
    InvalidMix(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    TotalRandomness,
    Confrontation,
    Neighbourhood,
    BackToBack,
    Aligned,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::TotalRandomness,
        Strategy::Confrontation,
        Strategy::Neighbourhood,
        Strategy::BackToBack,
        Strategy::Aligned,
    ];
}

/// Relative weights of the placement strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyMix {
    #[serde(default)]
    pub total_randomness: f64,
    #[serde(default)]
    pub confrontation: f64,
    #[serde(default)]
    pub neighbourhood: f64,
    #[serde(default)]
    pub back_to_back: f64,
    #[serde(default)]
    pub aligned: f64,
}

impl Default for StrategyMix {
    /// Equal weight on all five strategies.
    fn default() -> Self {
        StrategyMix {
            total_randomness: 0.2,
            confrontation: 0.2,
            neighbourhood: 0.2,
            back_to_back: 0.2,
            aligned: 0.2,
        }
    }
}

impl StrategyMix {
    /// A mix that always uses one strategy.
    pub fn only(strategy: Strategy) -> Self {
        let mut w = [0.0; 5];
        w[strategy as usize] = 1.0;
        StrategyMix::from_weights(w)
    }

    pub fn from_weights(w: [f64; 5]) -> Self {
        StrategyMix {
            total_randomness: w[0],
            confrontation: w[1],
            neighbourhood: w[2],
            back_to_back: w[3],
            aligned: w[4],
        }
    }

    /// Weights in [`Strategy::ALL`] order.
    pub fn weights(&self) -> [f64; 5] {
        [
            self.total_randomness,
            self.confrontation,
            self.neighbourhood,
            self.back_to_back,
            self.aligned,
        ]
    }

    pub fn validate(&self) -> Result<(), PlacementError> {
        let w = self.weights();
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(PlacementError::InvalidMix(
                "strategy weights must be finite and non-negative".into(),
            ));
        }
        if w.iter().all(|v| *v == 0.0) {
            return Err(PlacementError::InvalidMix(
                "at least one strategy weight must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Weights scaled to sum to one.
    pub fn normalized(&self) -> [f64; 5] {
        let w = self.weights();
        let total: f64 = w.iter().sum();
        w.map(|v| v / total)
    }

    pub fn sampler(&self) -> StrategySampler {
        StrategySampler {
            index: WeightedIndex::new(self.normalized()).expect("validated strategy mix"),
        }
    }
}

/// Draws strategies according to a [`StrategyMix`].
#[derive(Debug, Clone)]
pub struct StrategySampler {
    index: WeightedIndex<f64>,
}

impl StrategySampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Strategy {
        Strategy::ALL[self.index.sample(rng)]
    }
}

/// Cells claimed by one cage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Footprint {
    pub body: CellRect,
    /// `clr × wid` block in front of the door; empty when the clearance is zero.
    pub clearance: CellRect,
    /// Cell directly in front of the door's center. Outside the grid only
    /// when the clearance depth is zero and the door faces a wall.
    pub access: Coord,
}

/// Footprint geometry without any bounds check.
pub fn footprint_cells(p: Placement, cage: CageCells) -> Footprint {
    let body = p.body(cage);
    let mid = (cage.wid - 1) / 2;
    let (clearance, access) = match p.orientation {
        Orientation::Up => (
            CellRect {
                x0: body.x0,
                y0: body.y1,
                x1: body.x1,
                y1: body.y1 + cage.clr,
            },
            Coord::new(body.x0 + mid, body.y1),
        ),
        Orientation::Down => (
            CellRect {
                x0: body.x0,
                y0: body.y0 - cage.clr,
                x1: body.x1,
                y1: body.y0,
            },
            Coord::new(body.x0 + mid, body.y0 - 1),
        ),
        Orientation::Right => (
            CellRect {
                x0: body.x1,
                y0: body.y0,
                x1: body.x1 + cage.clr,
                y1: body.y1,
            },
            Coord::new(body.x1, body.y0 + mid),
        ),
        Orientation::Left => (
            CellRect {
                x0: body.x0 - cage.clr,
                y0: body.y0,
                x1: body.x0,
                y1: body.y1,
            },
            Coord::new(body.x0 - 1, body.y0 + mid),
        ),
    };
    Footprint {
        body,
        clearance,
        access,
    }
}

/// Footprint of `p`, rejecting bodies or clearances that leave the grid.
pub fn footprint(p: Placement, shelter: &Shelter) -> Result<Footprint, PlacementError> {
    let fp = footprint_cells(p, shelter.cage());
    if fp.body.within(shelter.dims()) && fp.clearance.within(shelter.dims()) {
        Ok(fp)
    } else {
        Err(PlacementError::OutOfBounds {
            x: p.x,
            y: p.y,
            orientation: p.orientation,
        })
    }
}

/// Occupancy plus the clearance zones already claimed by placed cages.
#[derive(Debug, Clone)]
pub struct LayoutGrid {
    occupancy: OccupancyGrid,
    reserved: Vec<u16>,
    placements: Vec<Placement>,
}

impl LayoutGrid {
    pub fn new(shelter: &Shelter) -> Self {
        let occupancy = shelter.base_grid().clone();
        let reserved = vec![0; occupancy.cells().len()];
        LayoutGrid {
            occupancy,
            reserved,
            placements: Vec::new(),
        }
    }

    /// Stamps `placements` without checking them. Callers pass layouts that
    /// are already known to be feasible.
    pub fn from_placements(shelter: &Shelter, placements: &[Placement]) -> Self {
        let mut grid = LayoutGrid::new(shelter);
        for &p in placements {
            grid.stamp(p, shelter);
        }
        grid
    }

    pub fn stamp(&mut self, p: Placement, shelter: &Shelter) {
        let fp = footprint_cells(p, shelter.cage());
        for c in fp.body.cells() {
            self.occupancy.set(c, CellState::CageBody);
        }
        for c in fp.clearance.cells() {
            if self.occupancy.in_bounds(c) {
                let i = self.occupancy.index(c);
                self.reserved[i] += 1;
            }
        }
        self.placements.push(p);
    }

    pub fn occupancy(&self) -> &OccupancyGrid {
        &self.occupancy
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    #[inline]
    fn is_reserved(&self, c: Coord) -> bool {
        self.occupancy.in_bounds(c) && self.reserved[self.occupancy.index(c)] > 0
    }

    pub fn into_placements(self) -> Vec<Placement> {
        self.placements
    }
}

/// True iff `p` fits into `grid`:
/// - body cells in bounds, free, outside every door apron and outside every
///   clearance zone already claimed;
/// - clearance cells in bounds and free of cage bodies and obstacles.
///
/// Clearance zones of different cages may overlap.
pub fn is_feasible(p: Placement, grid: &LayoutGrid, shelter: &Shelter) -> bool {
    let Ok(fp) = footprint(p, shelter) else {
        return false;
    };
    let occ = grid.occupancy();
    let body_ok = fp
        .body
        .cells()
        .all(|c| occ.get(c) == CellState::Free && !grid.is_reserved(c) && !shelter.in_apron(c));
    body_ok && fp.clearance.cells().all(|c| occ.get(c) == CellState::Free)
}

fn random_triple<R: Rng + ?Sized>(dims: GridDims, rng: &mut R) -> Placement {
    Placement::new(
        rng.gen_range(0..dims.x),
        rng.gen_range(0..dims.y),
        Orientation::ALL[rng.gen_range(0..4)],
    )
}

/// All feasible `(x, y, orientation)` triples, in scan order.
pub fn feasible_placements(grid: &LayoutGrid, shelter: &Shelter) -> Vec<Placement> {
    let dims = shelter.dims();
    let mut out = Vec::new();
    for y in 0..dims.y {
        for x in 0..dims.x {
            for o in Orientation::ALL {
                let p = Placement::new(x, y, o);
                if is_feasible(p, grid, shelter) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Uniform draw from all feasible placements, or `None` if there are none.
///
/// Rejection sampling over the full triple space first; if that keeps
/// missing, enumerate. Both stages are uniform over the feasible set.
pub fn place_total_random<R: Rng + ?Sized>(
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    let dims = shelter.dims();
    if dims.x <= 0 || dims.y <= 0 {
        return None;
    }
    for _ in 0..REJECTION_TRIES {
        let p = random_triple(dims, rng);
        if is_feasible(p, grid, shelter) {
            return Some(p);
        }
    }
    let all = feasible_placements(grid, shelter);
    if all.is_empty() {
        None
    } else {
        Some(all[rng.gen_range(0..all.len())])
    }
}

/// Candidate slots a relative strategy considers around `anchor`, before
/// feasibility filtering. Empty for [`Strategy::TotalRandomness`].
pub fn relative_slots(strategy: Strategy, anchor: Placement, cage: CageCells) -> Vec<Placement> {
    let b = anchor.body(cage);
    let o = anchor.orientation;
    let (len, wid, clr) = (cage.len, cage.wid, cage.clr);
    match strategy {
        Strategy::TotalRandomness => Vec::new(),
        // door to door across the shared clearance
        Strategy::Confrontation => {
            let at = match o {
                Orientation::Up => (b.x0, b.y1 + clr),
                Orientation::Down => (b.x0, b.y0 - clr - len),
                Orientation::Right => (b.x1 + clr, b.y0),
                Orientation::Left => (b.x0 - clr - len, b.y0),
            };
            vec![Placement::new(at.0, at.1, o.opposite())]
        }
        Strategy::Neighbourhood => {
            if o.is_vertical() {
                vec![
                    Placement::new(b.x0 - wid, b.y0, o),
                    Placement::new(b.x1, b.y0, o),
                ]
            } else {
                vec![
                    Placement::new(b.x0, b.y0 - wid, o),
                    Placement::new(b.x0, b.y1, o),
                ]
            }
        }
        // rear walls touching
        Strategy::BackToBack => {
            let at = match o {
                Orientation::Up => (b.x0, b.y0 - len),
                Orientation::Down => (b.x0, b.y1),
                Orientation::Right => (b.x0 - len, b.y0),
                Orientation::Left => (b.x1, b.y0),
            };
            vec![Placement::new(at.0, at.1, o.opposite())]
        }
        // new clearance ends at the anchor's rear wall
        Strategy::Aligned => {
            let at = match o {
                Orientation::Up => (b.x0, b.y0 - clr - len),
                Orientation::Down => (b.x0, b.y1 + clr),
                Orientation::Right => (b.x0 - clr - len, b.y0),
                Orientation::Left => (b.x1 + clr, b.y0),
            };
            vec![Placement::new(at.0, at.1, o)]
        }
    }
}

/// Picks an anchor uniformly among placed cages that have at least one
/// feasible slot, then a slot uniformly among that anchor's feasible slots.
pub fn place_relative<R: Rng + ?Sized>(
    strategy: Strategy,
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    let cage = shelter.cage();
    let options: Vec<Vec<Placement>> = grid
        .placements()
        .iter()
        .map(|&anchor| {
            relative_slots(strategy, anchor, cage)
                .into_iter()
                .filter(|&p| is_feasible(p, grid, shelter))
                .collect::<Vec<_>>()
        })
        .filter(|slots| !slots.is_empty())
        .collect();
    if options.is_empty() {
        return None;
    }
    let slots = &options[rng.gen_range(0..options.len())];
    Some(slots[rng.gen_range(0..slots.len())])
}

pub fn place_confrontation<R: Rng + ?Sized>(
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    place_relative(Strategy::Confrontation, grid, shelter, rng)
}

pub fn place_neighbourhood<R: Rng + ?Sized>(
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    place_relative(Strategy::Neighbourhood, grid, shelter, rng)
}

pub fn place_back_to_back<R: Rng + ?Sized>(
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    place_relative(Strategy::BackToBack, grid, shelter, rng)
}

pub fn place_aligned<R: Rng + ?Sized>(
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    place_relative(Strategy::Aligned, grid, shelter, rng)
}

pub fn place_with<R: Rng + ?Sized>(
    strategy: Strategy,
    grid: &LayoutGrid,
    shelter: &Shelter,
    rng: &mut R,
) -> Option<Placement> {
    match strategy {
        Strategy::TotalRandomness => place_total_random(grid, shelter, rng),
        other => place_relative(other, grid, shelter, rng),
    }
}

/// Adds cages to `grid` one by one until the requested count is reached or
/// `max_attempts` consecutive attempts fail. The first cage of an empty
/// layout always uses total randomness.
pub fn fill_grid<R: Rng + ?Sized>(
    grid: &mut LayoutGrid,
    shelter: &Shelter,
    sampler: &StrategySampler,
    rng: &mut R,
    max_attempts: usize,
) {
    let target = shelter.requested_cages();
    let mut failures = 0;
    while grid.len() < target && failures < max_attempts {
        let strategy = if grid.is_empty() {
            Strategy::TotalRandomness
        } else {
            sampler.sample(rng)
        };
        match place_with(strategy, grid, shelter, rng) {
            Some(p) => {
                grid.stamp(p, shelter);
                failures = 0;
            }
            // nothing fits anywhere, so no relative slot can fit either
            None if strategy == Strategy::TotalRandomness => break,
            None => failures += 1,
        }
    }
}

/// Completes a feasible partial layout. The result may hold fewer cages
/// than requested when the shelter runs out of room.
pub fn fill_layout<R: Rng + ?Sized>(
    partial: Chromosome,
    shelter: &Shelter,
    mix: &StrategyMix,
    rng: &mut R,
    max_attempts: usize,
) -> Chromosome {
    let mut grid = LayoutGrid::from_placements(shelter, &partial.placements);
    fill_grid(&mut grid, shelter, &mix.sampler(), rng, max_attempts);
    Chromosome::new(partial.id, grid.into_placements())
}

fn positive(v: i64) -> u64 {
    v.max(0) as u64
}

/// Closed-form placement count for an obstacle-free shelter:
/// `2(x − len − clr + 1)(y − wid + 1) + 2(x − wid + 1)(y − len − clr + 1)`.
pub fn count_placements_closed_form(spec: &ShelterSpec) -> u64 {
    let dims = spec.grid_dims();
    let c = spec.cage_cells();
    let (x, y) = (dims.x as i64, dims.y as i64);
    let (len, wid, clr) = (c.len as i64, c.wid as i64, c.clr as i64);
    2 * positive(x - len - clr + 1) * positive(y - wid + 1)
        + 2 * positive(x - wid + 1) * positive(y - len - clr + 1)
}

/// Exhaustive count of feasible single-cage placements with doors and
/// columns removed.
pub fn count_placements_brute_force(spec: &ShelterSpec) -> u64 {
    let mut bare = spec.clone();
    bare.doors.clear();
    bare.columns.clear();
    let shelter = Shelter::build(bare);
    let grid = LayoutGrid::new(&shelter);
    feasible_placements(&grid, &shelter).len() as u64
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditViolation {
    #[error("layout holds {found} cages but only {requested} were requested")]
    TooMany { found: usize, requested: usize },
    #[error("cage {index} leaves the grid")]
    OutOfBounds { index: usize },
    #[error("cage {index} body overlaps an obstacle")]
    OnObstacle { index: usize },
    #[error("cages {a} and {b} overlap")]
    Overlap { a: usize, b: usize },
    #[error("clearance of cage {index} is blocked by cage {by}")]
    ClearanceBlocked { index: usize, by: usize },
    #[error("clearance of cage {index} is blocked by an obstacle")]
    ClearanceObstacle { index: usize },
    #[error("cage {index} covers a door apron")]
    Apron { index: usize },
}

/// Whole-layout feasibility audit, written independently of the incremental
/// checks in [`is_feasible`].
pub fn audit(chrom: &Chromosome, shelter: &Shelter) -> Result<(), AuditViolation> {
    let requested = shelter.requested_cages();
    if chrom.len() > requested {
        return Err(AuditViolation::TooMany {
            found: chrom.len(),
            requested,
        });
    }
    let dims = shelter.dims();
    let base = shelter.base_grid();
    let fps: Vec<Footprint> = chrom
        .placements
        .iter()
        .map(|&p| footprint_cells(p, shelter.cage()))
        .collect();
    for (i, fp) in fps.iter().enumerate() {
        if !fp.body.within(dims) || !fp.clearance.within(dims) {
            return Err(AuditViolation::OutOfBounds { index: i });
        }
        if fp.body.cells().any(|c| base.get(c) != CellState::Free) {
            return Err(AuditViolation::OnObstacle { index: i });
        }
        if fp.clearance.cells().any(|c| base.get(c) != CellState::Free) {
            return Err(AuditViolation::ClearanceObstacle { index: i });
        }
        if fp.body.cells().any(|c| shelter.in_apron(c)) {
            return Err(AuditViolation::Apron { index: i });
        }
    }
    for (i, a) in fps.iter().enumerate() {
        for (j, b) in fps.iter().enumerate() {
            if i == j {
                continue;
            }
            if i < j && a.body.intersects(&b.body) {
                return Err(AuditViolation::Overlap { a: i, b: j });
            }
            if a.clearance.intersects(&b.body) {
                return Err(AuditViolation::ClearanceBlocked { index: i, by: j });
            }
        }
    }
    Ok(())
}
