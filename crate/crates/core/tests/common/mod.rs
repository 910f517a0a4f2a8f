#![allow(dead_code)]

use kennelgrid_core::model::{CageSpec, ColumnSpec, DoorSpec, Shelter, ShelterSpec, Wall};

pub fn desk_cage() -> CageSpec {
    CageSpec {
        length_m: 1.5,
        width_m: 0.75,
        clearance_m: 2.5,
    }
}

/// 10 × 12.5 m room, three doors, twenty small cages.
pub fn desk_spec() -> ShelterSpec {
    ShelterSpec {
        length_m: 10.0,
        width_m: 12.5,
        resolution_m: 0.5,
        doors: vec![
            DoorSpec {
                wall: Wall::South,
                offset_m: 4.0,
                width_m: 1.0,
            },
            DoorSpec {
                wall: Wall::West,
                offset_m: 8.0,
                width_m: 1.0,
            },
            DoorSpec {
                wall: Wall::North,
                offset_m: 6.0,
                width_m: 1.0,
            },
        ],
        columns: vec![],
        cage: desk_cage(),
        requested_cages: 20,
    }
}

pub fn desk_shelter() -> Shelter {
    Shelter::new(desk_spec()).unwrap()
}

/// Small hall with two columns, used where obstacles matter.
pub fn pillared_spec(requested: usize) -> ShelterSpec {
    ShelterSpec {
        length_m: 14.0,
        width_m: 11.0,
        resolution_m: 0.5,
        doors: vec![
            DoorSpec {
                wall: Wall::South,
                offset_m: 2.0,
                width_m: 1.0,
            },
            DoorSpec {
                wall: Wall::East,
                offset_m: 6.0,
                width_m: 1.5,
            },
        ],
        columns: vec![
            ColumnSpec {
                x_m: 5.0,
                y_m: 4.0,
                length_m: 1.0,
                width_m: 1.0,
            },
            ColumnSpec {
                x_m: 9.5,
                y_m: 7.0,
                length_m: 0.5,
                width_m: 1.5,
            },
        ],
        cage: desk_cage(),
        requested_cages: requested,
    }
}
