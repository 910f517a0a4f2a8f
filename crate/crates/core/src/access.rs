//! Movement graph over free cells, shortest paths from the shelter
//! entrances, and the accessibility criteria AC, IC, LSP and ASP.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{CellState, Chromosome, Coord, GridDims, OccupancyGrid, Shelter, ShelterSpec};
use crate::placement::footprint_cells;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AccessError {
    #[error("every entrance cell is blocked")]
    NoEntrance,
}

/// Interior cells directly inside each door span, deduplicated and sorted.
pub fn entrance_cells(spec: &ShelterSpec) -> Vec<Coord> {
    let mut cells: Vec<Coord> = spec
        .doors
        .iter()
        .flat_map(|d| d.inner_cells(spec, 1))
        .collect();
    cells.sort_unstable_by_key(|c| (c.y, c.x));
    cells.dedup();
    cells
}

/// Which cells staff can walk through. With `radius = 0` a cell is passable
/// iff it is free; larger radii also require every in-grid cell within that
/// Chebyshev distance to be free.
pub fn passability(grid: &OccupancyGrid, radius: i32) -> Vec<bool> {
    let dims = grid.dims();
    let mut out = Vec::with_capacity(dims.cell_count());
    for y in 0..dims.y {
        for x in 0..dims.x {
            let c = Coord::new(x, y);
            let mut ok = grid.get(c) == CellState::Free;
            if ok && radius > 0 {
                'scan: for dy in -radius..=radius {
                    for dx in -radius..=radius {
                        let n = Coord::new(x + dx, y + dy);
                        if grid.in_bounds(n) && grid.get(n) != CellState::Free {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
            }
            out.push(ok);
        }
    }
    out
}

/// Per-cell entrance distance in unit steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    dims: GridDims,
    dist: Vec<u32>,
}

impl DistanceField {
    const UNREACHABLE: u32 = u32::MAX;

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    /// Distance to the nearest entrance, `None` if unreachable or off-grid.
    pub fn get(&self, c: Coord) -> Option<u32> {
        if c.x < 0 || c.y < 0 || c.x >= self.dims.x || c.y >= self.dims.y {
            return None;
        }
        let d = self.dist[c.y as usize * self.dims.x as usize + c.x as usize];
        (d != Self::UNREACHABLE).then_some(d)
    }

    /// A shortest path from `from` back to an entrance, `from` first.
    pub fn path_to_entrance(&self, from: Coord) -> Option<Vec<Coord>> {
        let mut d = self.get(from)?;
        let mut path = vec![from];
        let mut cur = from;
        while d > 0 {
            cur = NEIGHBOURS
                .iter()
                .map(|(dx, dy)| Coord::new(cur.x + dx, cur.y + dy))
                .find(|&n| self.get(n) == Some(d - 1))
                .expect("a reachable cell has a predecessor one step closer");
            path.push(cur);
            d -= 1;
        }
        Some(path)
    }
}

const NEIGHBOURS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Multi-source breadth-first search over the 4-connected graph of free cells.
pub fn build_distance_field(
    grid: &OccupancyGrid,
    entrances: &[Coord],
) -> Result<DistanceField, AccessError> {
    build_distance_field_with(grid, entrances, 0)
}

/// As [`build_distance_field`], with a dilation radius for passability.
pub fn build_distance_field_with(
    grid: &OccupancyGrid,
    entrances: &[Coord],
    radius: i32,
) -> Result<DistanceField, AccessError> {
    let dims = grid.dims();
    let open = passability(grid, radius);
    let mut dist = vec![DistanceField::UNREACHABLE; dims.cell_count()];
    let mut queue = VecDeque::new();
    for &e in entrances {
        if grid.in_bounds(e) {
            let i = grid.index(e);
            if open[i] && dist[i] != 0 {
                dist[i] = 0;
                queue.push_back(e);
            }
        }
    }
    if queue.is_empty() {
        return Err(AccessError::NoEntrance);
    }
    while let Some(c) = queue.pop_front() {
        let next = dist[grid.index(c)] + 1;
        for (dx, dy) in NEIGHBOURS {
            let n = Coord::new(c.x + dx, c.y + dy);
            if !grid.in_bounds(n) {
                continue;
            }
            let i = grid.index(n);
            if open[i] && dist[i] == DistanceField::UNREACHABLE {
                dist[i] = next;
                queue.push_back(n);
            }
        }
    }
    Ok(DistanceField { dims, dist })
}

/// AC, IC, LSP and ASP of one layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessMetrics {
    pub ac: usize,
    pub ic: usize,
    pub lsp: usize,
    pub asp: f64,
}

/// Reads each cage's entrance distance at its access cell. With no
/// accessible cage, LSP and ASP are set to the grid's cell count.
pub fn access_metrics(
    chrom: &Chromosome,
    field: &DistanceField,
    shelter: &Shelter,
) -> AccessMetrics {
    let distances: Vec<Option<u32>> = chrom
        .placements
        .iter()
        .map(|&p| field.get(footprint_cells(p, shelter.cage()).access))
        .collect();
    metrics_from_distances(&distances, shelter.dims())
}

pub(crate) fn metrics_from_distances(distances: &[Option<u32>], dims: GridDims) -> AccessMetrics {
    let reached: Vec<u32> = distances.iter().flatten().copied().collect();
    let ac = reached.len();
    let ic = distances.len() - ac;
    if ac == 0 {
        let sentinel = dims.cell_count();
        return AccessMetrics {
            ac,
            ic,
            lsp: sentinel,
            asp: sentinel as f64,
        };
    }
    let lsp = *reached.iter().max().unwrap() as usize;
    let asp = reached.iter().map(|&d| d as f64).sum::<f64>() / ac as f64;
    AccessMetrics { ac, ic, lsp, asp }
}

/// Distance field for a rasterized layout; an unreachable entrance set
/// yields a field where every cell is unreachable.
pub fn field_or_unreachable(grid: &OccupancyGrid, shelter: &Shelter) -> DistanceField {
    build_distance_field(grid, shelter.entrances()).unwrap_or_else(|_| DistanceField {
        dims: grid.dims(),
        dist: vec![DistanceField::UNREACHABLE; grid.dims().cell_count()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CageSpec, ChromosomeId, DoorSpec, Orientation, Placement, Wall};

    fn grid_from(rows: &[&str]) -> OccupancyGrid {
        // rows listed north to south
        let dims = GridDims {
            x: rows[0].len() as i32,
            y: rows.len() as i32,
        };
        let mut g = OccupancyGrid::new(dims);
        for (k, row) in rows.iter().enumerate() {
            let y = dims.y - 1 - k as i32;
            for (x, ch) in row.chars().enumerate() {
                let s = match ch {
                    '#' => CellState::Obstacle,
                    'C' => CellState::CageBody,
                    _ => CellState::Free,
                };
                g.set(Coord::new(x as i32, y), s);
            }
        }
        g
    }

    #[test]
    fn manhattan_on_empty_grid() {
        let g = OccupancyGrid::new(GridDims { x: 3, y: 3 });
        let f = build_distance_field(&g, &[Coord::new(0, 0)]).unwrap();
        assert_eq!(f.get(Coord::new(2, 2)), Some(4));
        assert_eq!(f.get(Coord::new(0, 0)), Some(0));
        assert_eq!(f.get(Coord::new(3, 0)), None);
    }

    #[test]
    fn wall_splits_the_grid() {
        let g = grid_from(&["..#..", "..#..", "..#.."]);
        let f = build_distance_field(&g, &[Coord::new(0, 0)]).unwrap();
        assert_eq!(f.get(Coord::new(1, 2)), Some(3));
        assert_eq!(f.get(Coord::new(3, 0)), None);
        assert_eq!(f.get(Coord::new(2, 0)), None);
    }

    #[test]
    fn blocked_entrances_error() {
        let g = grid_from(&["...", "#.."]);
        assert_eq!(
            build_distance_field(&g, &[Coord::new(0, 0)]),
            Err(AccessError::NoEntrance)
        );
        // blocked entrances are dropped, the rest still work
        let f = build_distance_field(&g, &[Coord::new(0, 0), Coord::new(2, 0)]).unwrap();
        assert_eq!(f.get(Coord::new(0, 1)), Some(3));
    }

    #[test]
    fn path_follows_distances() {
        let g = grid_from(&["....", ".##.", "...."]);
        let f = build_distance_field(&g, &[Coord::new(0, 0)]).unwrap();
        let path = f.path_to_entrance(Coord::new(3, 2)).unwrap();
        assert_eq!(path.len() as u32, f.get(Coord::new(3, 2)).unwrap() + 1);
        assert_eq!(*path.last().unwrap(), Coord::new(0, 0));
        for w in path.windows(2) {
            assert_eq!((w[0].x - w[1].x).abs() + (w[0].y - w[1].y).abs(), 1);
        }
    }

    #[test]
    fn dilation_blocks_cells_near_obstacles() {
        let g = grid_from(&[".....", "..#..", "....."]);
        let open = passability(&g, 1);
        assert!(!open[g.index(Coord::new(1, 1))]);
        assert!(open[g.index(Coord::new(0, 1))]);
        assert!(passability(&g, 0)[g.index(Coord::new(1, 1))]);
    }

    #[test]
    fn entrance_cells_examples() {
        let mut spec = crate::model::ShelterSpec {
            length_m: 5.0,
            width_m: 5.0,
            resolution_m: 1.0,
            doors: vec![DoorSpec {
                wall: Wall::South,
                offset_m: 0.0,
                width_m: 1.0,
            }],
            columns: vec![],
            cage: CageSpec {
                length_m: 1.0,
                width_m: 1.0,
                clearance_m: 1.0,
            },
            requested_cages: 1,
        };
        assert_eq!(entrance_cells(&spec), vec![Coord::new(0, 0)]);
        spec.doors[0].width_m = 2.0;
        assert_eq!(entrance_cells(&spec).len(), 2);
    }

    fn corridor_shelter() -> Shelter {
        Shelter::new(crate::model::ShelterSpec {
            length_m: 6.0,
            width_m: 6.0,
            resolution_m: 1.0,
            doors: vec![DoorSpec {
                wall: Wall::South,
                offset_m: 2.0,
                width_m: 2.0,
            }],
            columns: vec![],
            cage: CageSpec {
                length_m: 1.0,
                width_m: 1.0,
                clearance_m: 1.0,
            },
            requested_cages: 8,
        })
        .unwrap()
    }

    #[test]
    fn cages_next_to_door_have_unit_paths() {
        let shelter = corridor_shelter();
        // access cells (1,0) and (4,0) sit right beside the entrance cells
        let chrom = Chromosome::new(
            ChromosomeId(0),
            vec![
                Placement::new(0, 0, Orientation::Right),
                Placement::new(5, 0, Orientation::Left),
            ],
        );
        let grid = shelter.rasterize(&chrom).unwrap();
        let field = build_distance_field(&grid, shelter.entrances()).unwrap();
        let m = access_metrics(&chrom, &field, &shelter);
        assert_eq!((m.ac, m.ic, m.lsp), (2, 0, 1));
        assert_eq!(m.asp, 1.0);
    }

    #[test]
    fn boxed_in_cage_is_inaccessible() {
        let shelter = corridor_shelter();
        // cage at (0,5) faces down into (0,4); its neighbours wall it in
        let chrom = Chromosome::new(
            ChromosomeId(0),
            vec![
                Placement::new(0, 5, Orientation::Down),
                Placement::new(0, 3, Orientation::Right),
                Placement::new(1, 4, Orientation::Right),
            ],
        );
        let grid = shelter.rasterize(&chrom).unwrap();
        let field = build_distance_field(&grid, shelter.entrances()).unwrap();
        let m = access_metrics(&chrom, &field, &shelter);
        assert!(m.ic >= 1);
        assert_eq!(m.ac + m.ic, 3);
    }

    #[test]
    fn no_accessible_cage_uses_sentinel() {
        let m = metrics_from_distances(&[None, None], GridDims { x: 4, y: 5 });
        assert_eq!((m.ac, m.ic, m.lsp), (0, 2, 20));
        assert_eq!(m.asp, 20.0);
        let m = metrics_from_distances(&[], GridDims { x: 4, y: 5 });
        assert_eq!((m.ac, m.ic), (0, 0));
    }
}
