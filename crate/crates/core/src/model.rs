//! Problem-instance and solution types shared by every other module.
//!
//! Coordinates are cell indices with the origin at the shelter's south-west
//! corner: `x` grows east, `y` grows north. Anything outside the grid is an
//! implicit wall.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used when converting meters to whole cells, so that
/// `4.2 / 1.4` counts as exactly three cells.
const CELL_EPS: f64 = 1e-9;

/// `⌈a / r⌉` with a small tolerance against floating-point noise.
pub fn cells_ceil(a: f64, r: f64) -> i32 {
    let q = a / r;
    let nearest = q.round();
    if (q - nearest).abs() < CELL_EPS {
        nearest as i32
    } else {
        q.ceil() as i32
    }
}

/// `⌊a / r⌋` with the same tolerance as [`cells_ceil`].
pub fn cells_floor(a: f64, r: f64) -> i32 {
    let q = a / r;
    let nearest = q.round();
    if (q - nearest).abs() < CELL_EPS {
        nearest as i32
    } else {
        q.floor() as i32
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid shelter: {0}")]
    Invalid(String),
    #[error("cage bodies overlap at cell ({x}, {y})")]
    Overlap { x: i32, y: i32 },
    #[error("placement {index} lies outside the grid")]
    OutOfBounds { index: usize },
}

/// The direction a cage door faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Up,
    Down,
    Left,
    Right,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::Up,
        Orientation::Down,
        Orientation::Left,
        Orientation::Right,
    ];

    pub fn opposite(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }

    /// Unit step on the grid in the facing direction.
    pub fn step(self) -> (i32, i32) {
        match self {
            Orientation::Up => (0, 1),
            Orientation::Down => (0, -1),
            Orientation::Left => (-1, 0),
            Orientation::Right => (1, 0),
        }
    }

    /// True when the cage's long axis runs along `y`.
    pub fn is_vertical(self) -> bool {
        matches!(self, Orientation::Up | Orientation::Down)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Orientation::Up => "up",
            Orientation::Down => "down",
            Orientation::Left => "left",
            Orientation::Right => "right",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wall {
    North,
    South,
    East,
    West,
}

/// A shelter entrance. `offset_m` is measured from the wall's west end
/// (north/south walls) or south end (east/west walls).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoorSpec {
    pub wall: Wall,
    pub offset_m: f64,
    pub width_m: f64,
}

/// Cage dimensions. The door sits centered on one short end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CageSpec {
    pub length_m: f64,
    pub width_m: f64,
    /// Free depth required in front of the door.
    pub clearance_m: f64,
}

/// Axis-aligned rectangular obstacle, lower-left corner at (`x_m`, `y_m`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnSpec {
    pub x_m: f64,
    pub y_m: f64,
    /// Extent along `x`.
    pub length_m: f64,
    /// Extent along `y`.
    pub width_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShelterSpec {
    /// Extent along `x` (east-west), meters.
    pub length_m: f64,
    /// Extent along `y` (north-south), meters.
    pub width_m: f64,
    pub resolution_m: f64,
    #[serde(default)]
    pub doors: Vec<DoorSpec>,
    #[serde(default)]
    pub columns: Vec<ColumnSpec>,
    pub cage: CageSpec,
    pub requested_cages: usize,
}

/// Grid size in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDims {
    pub x: i32,
    pub y: i32,
}

impl GridDims {
    pub fn cell_count(self) -> usize {
        (self.x.max(0) as usize) * (self.y.max(0) as usize)
    }
}

/// Cage footprint in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CageCells {
    pub len: i32,
    pub wid: i32,
    pub clr: i32,
}

/// Grid dimensions of a shelter: `(⌈m/r⌉, ⌈n/r⌉)`.
pub fn derive_grid_dims(spec: &ShelterSpec) -> GridDims {
    GridDims {
        x: cells_ceil(spec.length_m, spec.resolution_m),
        y: cells_ceil(spec.width_m, spec.resolution_m),
    }
}

impl CageSpec {
    pub fn cells(&self, resolution_m: f64) -> CageCells {
        CageCells {
            len: cells_ceil(self.length_m, resolution_m),
            wid: cells_ceil(self.width_m, resolution_m),
            clr: cells_ceil(self.clearance_m, resolution_m),
        }
    }
}

impl DoorSpec {
    fn wall_length(&self, spec: &ShelterSpec) -> f64 {
        match self.wall {
            Wall::North | Wall::South => spec.length_m,
            Wall::East | Wall::West => spec.width_m,
        }
    }

    /// Half-open range of cells along the wall covered by the door.
    pub fn cell_span(&self, spec: &ShelterSpec) -> (i32, i32) {
        let dims = derive_grid_dims(spec);
        let wall_cells = match self.wall {
            Wall::North | Wall::South => dims.x,
            Wall::East | Wall::West => dims.y,
        };
        let r = spec.resolution_m;
        let start = cells_floor(self.offset_m, r).clamp(0, wall_cells);
        let end = cells_ceil(self.offset_m + self.width_m, r).clamp(start, wall_cells);
        (start, end)
    }

    /// Cells within `depth` rows of the door, measured inward from its wall.
    pub fn inner_cells(&self, spec: &ShelterSpec, depth: i32) -> Vec<Coord> {
        let dims = derive_grid_dims(spec);
        let (start, end) = self.cell_span(spec);
        let depth = depth.min(match self.wall {
            Wall::North | Wall::South => dims.y,
            Wall::East | Wall::West => dims.x,
        });
        let mut out = Vec::new();
        for d in 0..depth {
            for s in start..end {
                let c = match self.wall {
                    Wall::South => Coord::new(s, d),
                    Wall::North => Coord::new(s, dims.y - 1 - d),
                    Wall::West => Coord::new(d, s),
                    Wall::East => Coord::new(dims.x - 1 - d, s),
                };
                out.push(c);
            }
        }
        out
    }
}

impl ColumnSpec {
    pub fn cell_rect(&self, r: f64) -> CellRect {
        CellRect {
            x0: cells_floor(self.x_m, r),
            y0: cells_floor(self.y_m, r),
            x1: cells_ceil(self.x_m + self.length_m, r),
            y1: cells_ceil(self.y_m + self.width_m, r),
        }
    }
}

impl ShelterSpec {
    pub fn grid_dims(&self) -> GridDims {
        derive_grid_dims(self)
    }

    pub fn cage_cells(&self) -> CageCells {
        self.cage.cells(self.resolution_m)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::Invalid(msg));
        let finite = [
            self.length_m,
            self.width_m,
            self.resolution_m,
            self.cage.length_m,
            self.cage.width_m,
            self.cage.clearance_m,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("all dimensions must be finite".into());
        }
        if self.resolution_m <= 0.0 {
            return bad("resolution_m must be > 0".into());
        }
        if self.length_m <= 0.0 || self.width_m <= 0.0 {
            return bad("shelter length_m and width_m must be > 0".into());
        }
        if self.cage.length_m <= 0.0 || self.cage.width_m <= 0.0 {
            return bad("cage length_m and width_m must be > 0".into());
        }
        if self.cage.clearance_m < 0.0 {
            return bad("cage clearance_m must be >= 0".into());
        }
        let dims = self.grid_dims();
        let cage = self.cage_cells();
        if dims.x.max(dims.y) < cage.len || dims.x.min(dims.y) < cage.wid {
            return bad(format!(
                "grid {}x{} cells cannot hold a {}x{} cage",
                dims.x, dims.y, cage.len, cage.wid
            ));
        }
        for (i, door) in self.doors.iter().enumerate() {
            if door.offset_m < 0.0
                || door.offset_m + door.width_m > door.wall_length(self) + CELL_EPS
            {
                return bad(format!("door {i} does not fit on its wall"));
            }
            if door.width_m + CELL_EPS < self.resolution_m {
                return bad(format!("door {i} is narrower than one cell"));
            }
        }
        for (i, a) in self.doors.iter().enumerate() {
            for (j, b) in self.doors.iter().enumerate().skip(i + 1) {
                if a.wall == b.wall
                    && a.offset_m < b.offset_m + b.width_m - CELL_EPS
                    && b.offset_m < a.offset_m + a.width_m - CELL_EPS
                {
                    return bad(format!("doors {i} and {j} overlap"));
                }
            }
        }
        for (i, c) in self.columns.iter().enumerate() {
            if c.length_m <= 0.0
                || c.width_m <= 0.0
                || c.x_m < 0.0
                || c.y_m < 0.0
                || c.x_m + c.length_m > self.length_m + CELL_EPS
                || c.y_m + c.width_m > self.width_m + CELL_EPS
            {
                return bad(format!("column {i} does not lie inside the shelter"));
            }
        }
        Ok(())
    }
}

/// A grid cell coordinate. May be negative or past the grid while a
/// candidate is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }
}

/// Half-open rectangle of cells `[x0, x1) × [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellRect {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

impl CellRect {
    pub fn is_empty(&self) -> bool {
        self.x1 <= self.x0 || self.y1 <= self.y0
    }

    pub fn area(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            ((self.x1 - self.x0) * (self.y1 - self.y0)) as usize
        }
    }

    pub fn within(&self, dims: GridDims) -> bool {
        self.is_empty() || (self.x0 >= 0 && self.y0 >= 0 && self.x1 <= dims.x && self.y1 <= dims.y)
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= self.x0 && c.x < self.x1 && c.y >= self.y0 && c.y < self.y1
    }

    pub fn intersects(&self, other: &CellRect) -> bool {
        !self.is_empty()
            && !other.is_empty()
            && self.x0 < other.x1
            && other.x0 < self.x1
            && self.y0 < other.y1
            && other.y0 < self.y1
    }

    pub fn cells(&self) -> impl Iterator<Item = Coord> + '_ {
        let (x0, x1) = (self.x0, self.x1.max(self.x0));
        (self.y0..self.y1.max(self.y0)).flat_map(move |y| (x0..x1).map(move |x| Coord::new(x, y)))
    }
}

/// One gene: a cage's lower-left body corner and door direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub x: i32,
    pub y: i32,
    pub orientation: Orientation,
}

impl Placement {
    pub const fn new(x: i32, y: i32, orientation: Orientation) -> Self {
        Placement { x, y, orientation }
    }

    /// Body rectangle for a cage of the given cell size.
    pub fn body(&self, cage: CageCells) -> CellRect {
        let (sx, sy) = if self.orientation.is_vertical() {
            (cage.wid, cage.len)
        } else {
            (cage.len, cage.wid)
        };
        CellRect {
            x0: self.x,
            y0: self.y,
            x1: self.x + sx,
            y1: self.y + sy,
        }
    }
}

/// Run-scoped chromosome label, printed as `a<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChromosomeId(pub u64);

impl fmt::Display for ChromosomeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    pub id: ChromosomeId,
    pub placements: Vec<Placement>,
}

impl Chromosome {
    pub fn new(id: ChromosomeId, placements: Vec<Placement>) -> Self {
        Chromosome { id, placements }
    }

    pub fn empty(id: ChromosomeId) -> Self {
        Chromosome::new(id, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellState {
    Free,
    CageBody,
    Obstacle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyGrid {
    dims: GridDims,
    cells: Vec<CellState>,
}

impl OccupancyGrid {
    pub fn new(dims: GridDims) -> Self {
        OccupancyGrid {
            dims,
            cells: vec![CellState::Free; dims.cell_count()],
        }
    }

    /// Grid with the shelter's columns marked as obstacles.
    pub fn with_columns(spec: &ShelterSpec) -> Self {
        let mut grid = OccupancyGrid::new(spec.grid_dims());
        for column in &spec.columns {
            let rect = column.cell_rect(spec.resolution_m);
            for c in rect.cells() {
                grid.set(c, CellState::Obstacle);
            }
        }
        grid
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.x >= 0 && c.y >= 0 && c.x < self.dims.x && c.y < self.dims.y
    }

    #[inline]
    pub fn index(&self, c: Coord) -> usize {
        c.y as usize * self.dims.x as usize + c.x as usize
    }

    /// Cell state; anything outside the grid reads as an obstacle.
    #[inline]
    pub fn get(&self, c: Coord) -> CellState {
        if self.in_bounds(c) {
            self.cells[self.index(c)]
        } else {
            CellState::Obstacle
        }
    }

    /// Sets an in-bounds cell. Out-of-bounds writes are ignored.
    pub fn set(&mut self, c: Coord, state: CellState) {
        if self.in_bounds(c) {
            let i = self.index(c);
            self.cells[i] = state;
        }
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|&&s| s == state).count()
    }

    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }
}

/// Rasterizes cage bodies and columns into an occupancy grid. Clearance
/// zones stay free; they restrict placement, not movement.
pub fn rasterize(chrom: &Chromosome, spec: &ShelterSpec) -> Result<OccupancyGrid, ModelError> {
    let mut grid = OccupancyGrid::with_columns(spec);
    let cage = spec.cage_cells();
    for (index, p) in chrom.placements.iter().enumerate() {
        let body = p.body(cage);
        if !body.within(grid.dims()) {
            return Err(ModelError::OutOfBounds { index });
        }
        for c in body.cells() {
            if grid.get(c) == CellState::CageBody {
                return Err(ModelError::Overlap { x: c.x, y: c.y });
            }
            grid.set(c, CellState::CageBody);
        }
    }
    Ok(grid)
}

/// A validated shelter with its derived cell-level data: grid size, cage
/// footprint, column obstacles, door aprons and entrance cells.
#[derive(Debug, Clone)]
pub struct Shelter {
    spec: ShelterSpec,
    dims: GridDims,
    cage: CageCells,
    base: OccupancyGrid,
    apron: Vec<bool>,
    entrances: Vec<Coord>,
}

impl Shelter {
    pub fn new(spec: ShelterSpec) -> Result<Self, ModelError> {
        spec.validate()?;
        Ok(Shelter::build(spec))
    }

    /// Skips validation; only `resolution_m > 0` is assumed. Used where a
    /// cage larger than the grid must still be representable.
    pub(crate) fn build(spec: ShelterSpec) -> Self {
        let dims = spec.grid_dims();
        let cage = spec.cage_cells();
        let base = OccupancyGrid::with_columns(&spec);
        let mut apron = vec![false; dims.cell_count()];
        for door in &spec.doors {
            for c in door.inner_cells(&spec, cage.clr) {
                apron[base.index(c)] = true;
            }
        }
        let entrances = crate::access::entrance_cells(&spec);
        Shelter {
            spec,
            dims,
            cage,
            base,
            apron,
            entrances,
        }
    }

    /// The same shelter with doors and columns removed.
    pub fn without_obstacles(&self) -> Shelter {
        let mut spec = self.spec.clone();
        spec.doors.clear();
        spec.columns.clear();
        Shelter::build(spec)
    }

    pub fn spec(&self) -> &ShelterSpec {
        &self.spec
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn cage(&self) -> CageCells {
        self.cage
    }

    pub fn resolution(&self) -> f64 {
        self.spec.resolution_m
    }

    pub fn requested_cages(&self) -> usize {
        self.spec.requested_cages
    }

    /// Occupancy grid holding only the column obstacles.
    pub fn base_grid(&self) -> &OccupancyGrid {
        &self.base
    }

    /// True if cage bodies may not cover `c` because it is in front of a door.
    #[inline]
    pub fn in_apron(&self, c: Coord) -> bool {
        self.base.in_bounds(c) && self.apron[self.base.index(c)]
    }

    pub fn entrances(&self) -> &[Coord] {
        &self.entrances
    }

    pub fn rasterize(&self, chrom: &Chromosome) -> Result<OccupancyGrid, ModelError> {
        rasterize(chrom, &self.spec)
    }
}

/// The five criteria of one layout, in table order AC, LSP, ASP, CF, IC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriteriaVector {
    pub ac: usize,
    pub lsp: usize,
    pub asp: f64,
    pub cf: f64,
    pub ic: usize,
}

impl CriteriaVector {
    pub const NAMES: [&'static str; 5] = ["AC", "LSP", "ASP", "CF", "IC"];

    pub fn to_array(&self) -> [f64; 5] {
        [
            self.ac as f64,
            self.lsp as f64,
            self.asp,
            self.cf,
            self.ic as f64,
        ]
    }
}
