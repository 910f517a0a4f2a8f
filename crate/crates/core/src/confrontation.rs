//! Line-of-sight between cage doors and the confrontation score CF.
//!
//! Two cages see each other when their orientations differ and the segment
//! joining the centers of their access cells touches no cage body and no
//! obstacle. Touching includes grazing a cell corner.

use crate::model::{CellState, Chromosome, Coord, OccupancyGrid, Placement, Shelter};
use crate::placement::footprint_cells;

/// Every cell the segment between the centers of `a` and `b` touches, in
/// traversal order. When the segment passes exactly through a grid corner
/// both side cells are included.
pub fn supercover(a: Coord, b: Coord) -> Vec<Coord> {
    let dx = (b.x - a.x).abs() as i64;
    let dy = (b.y - a.y).abs() as i64;
    let sx = (b.x - a.x).signum();
    let sy = (b.y - a.y).signum();
    let mut cells = Vec::with_capacity((dx + dy + 1) as usize);
    let mut cur = a;
    cells.push(cur);
    let (mut ix, mut iy) = (0i64, 0i64);
    while ix < dx || iy < dy {
        // compare where the segment next crosses a vertical vs a horizontal grid line
        let decision = (1 + 2 * ix) * dy - (1 + 2 * iy) * dx;
        if decision == 0 {
            cells.push(Coord::new(cur.x + sx, cur.y));
            cells.push(Coord::new(cur.x, cur.y + sy));
            cur = Coord::new(cur.x + sx, cur.y + sy);
            ix += 1;
            iy += 1;
        } else if decision < 0 {
            cur = Coord::new(cur.x + sx, cur.y);
            ix += 1;
        } else {
            cur = Coord::new(cur.x, cur.y + sy);
            iy += 1;
        }
        cells.push(cur);
    }
    cells
}

/// True iff `a` and `b` can see each other through the grid. The two
/// access cells themselves are exempt from the blocking test, but both must
/// be free in-grid cells.
pub fn line_of_sight(a: Coord, b: Coord, grid: &OccupancyGrid) -> bool {
    if grid.get(a) != CellState::Free || grid.get(b) != CellState::Free {
        return false;
    }
    supercover(a, b)
        .into_iter()
        .filter(|&c| c != a && c != b)
        .all(|c| grid.get(c) == CellState::Free)
}

/// Eye contact between two cages: different door directions and a clear
/// line between their access cells. Cages sharing one access cell have no
/// defined sight line and never count.
pub fn has_eye_contact(
    i: Placement,
    j: Placement,
    grid: &OccupancyGrid,
    shelter: &Shelter,
) -> bool {
    if i.orientation == j.orientation {
        return false;
    }
    let cage = shelter.cage();
    let a = footprint_cells(i, cage).access;
    let b = footprint_cells(j, cage).access;
    a != b && line_of_sight(a, b, grid)
}

/// Euclidean distance in meters between the centers of two cells.
pub fn access_distance_m(a: Coord, b: Coord, resolution_m: f64) -> f64 {
    let dx = (a.x - b.x) as f64;
    let dy = (a.y - b.y) as f64;
    dx.hypot(dy) * resolution_m
}

/// `CF = Σ_{i≠j} s_ij / l_ij` over ordered pairs, where `s_ij` is eye
/// contact and `l_ij` the access-point distance in meters.
pub fn cf_score(chrom: &Chromosome, grid: &OccupancyGrid, shelter: &Shelter) -> f64 {
    let cage = shelter.cage();
    let access: Vec<(Coord, Placement)> = chrom
        .placements
        .iter()
        .map(|&p| (footprint_cells(p, cage).access, p))
        .collect();
    let mut half = 0.0;
    for (k, &(a, pa)) in access.iter().enumerate() {
        for &(b, pb) in &access[k + 1..] {
            if pa.orientation == pb.orientation || a == b {
                continue;
            }
            if line_of_sight(a, b, grid) {
                half += 1.0 / access_distance_m(a, b, shelter.resolution());
            }
        }
    }
    2.0 * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CageSpec, ChromosomeId, ColumnSpec, GridDims, Orientation, ShelterSpec};

    #[test]
    fn supercover_straight_and_diagonal() {
        assert_eq!(
            supercover(Coord::new(0, 0), Coord::new(3, 0)),
            (0..4).map(|x| Coord::new(x, 0)).collect::<Vec<_>>()
        );
        let diag = supercover(Coord::new(0, 0), Coord::new(2, 2));
        assert_eq!(diag.len(), 7);
        assert!(diag.contains(&Coord::new(1, 0)));
        assert!(diag.contains(&Coord::new(0, 1)));
        // passes exactly through the grid corner (2, 1)
        let shallow = supercover(Coord::new(0, 0), Coord::new(3, 1));
        let expected =
            [(0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (3, 1)].map(|(x, y)| Coord::new(x, y));
        assert_eq!(shallow, expected);
    }

    #[test]
    fn supercover_is_symmetric_as_a_set() {
        for (a, b) in [
            ((0, 0), (5, 3)),
            ((2, 7), (-3, 1)),
            ((0, 0), (4, 4)),
            ((1, 1), (1, -6)),
        ] {
            let mut f = supercover(Coord::new(a.0, a.1), Coord::new(b.0, b.1));
            let mut r = supercover(Coord::new(b.0, b.1), Coord::new(a.0, a.1));
            f.sort();
            r.sort();
            assert_eq!(f, r);
        }
    }

    fn shelter(columns: Vec<ColumnSpec>) -> Shelter {
        Shelter::new(ShelterSpec {
            length_m: 10.0,
            width_m: 10.0,
            resolution_m: 1.0,
            doors: vec![],
            columns,
            cage: CageSpec {
                length_m: 2.0,
                width_m: 1.0,
                clearance_m: 2.0,
            },
            requested_cages: 10,
        })
        .unwrap()
    }

    fn facing_pair() -> Chromosome {
        // Up cage body y 0..2 access (4,2); Down cage body y 4..6 access (4,3)
        Chromosome::new(
            ChromosomeId(0),
            vec![
                Placement::new(4, 0, Orientation::Up),
                Placement::new(4, 4, Orientation::Down),
            ],
        )
    }

    #[test]
    fn facing_cages_see_each_other() {
        let s = shelter(vec![]);
        let c = facing_pair();
        let grid = s.rasterize(&c).unwrap();
        assert!(has_eye_contact(c.placements[0], c.placements[1], &grid, &s));
        assert!(has_eye_contact(c.placements[1], c.placements[0], &grid, &s));
        assert!((cf_score(&c, &grid, &s) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn column_between_blocks_sight() {
        // a longer aisle with a column in the middle of it
        let s = shelter(vec![ColumnSpec {
            x_m: 4.0,
            y_m: 4.0,
            length_m: 1.0,
            width_m: 1.0,
        }]);
        let c = Chromosome::new(
            ChromosomeId(0),
            vec![
                Placement::new(4, 0, Orientation::Up),
                Placement::new(4, 8, Orientation::Down),
            ],
        );
        let grid = s.rasterize(&c).unwrap();
        assert!(!has_eye_contact(
            c.placements[0],
            c.placements[1],
            &grid,
            &s
        ));
        assert_eq!(cf_score(&c, &grid, &s), 0.0);
    }

    #[test]
    fn same_orientation_never_counts() {
        let s = shelter(vec![]);
        let c = Chromosome::new(
            ChromosomeId(0),
            vec![
                Placement::new(1, 0, Orientation::Up),
                Placement::new(6, 0, Orientation::Up),
            ],
        );
        let grid = s.rasterize(&c).unwrap();
        assert!(!has_eye_contact(
            c.placements[0],
            c.placements[1],
            &grid,
            &s
        ));
        assert_eq!(cf_score(&c, &grid, &s), 0.0);
    }

    #[test]
    fn trivial_layouts_score_zero() {
        let s = shelter(vec![]);
        let one = Chromosome::new(ChromosomeId(0), vec![Placement::new(1, 0, Orientation::Up)]);
        let grid = s.rasterize(&one).unwrap();
        assert_eq!(cf_score(&one, &grid, &s), 0.0);
        let none = Chromosome::empty(ChromosomeId(1));
        assert_eq!(
            cf_score(&none, &OccupancyGrid::new(GridDims { x: 10, y: 10 }), &s),
            0.0
        );
    }

    #[test]
    fn corner_graze_blocks() {
        let mut g = OccupancyGrid::new(GridDims { x: 3, y: 3 });
        g.set(Coord::new(1, 0), CellState::Obstacle);
        assert!(!line_of_sight(Coord::new(0, 0), Coord::new(2, 2), &g));
        let g = OccupancyGrid::new(GridDims { x: 3, y: 3 });
        assert!(line_of_sight(Coord::new(0, 0), Coord::new(2, 2), &g));
    }
}
