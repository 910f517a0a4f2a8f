//! SVG floor plans. North is up: grid row 0 is drawn at the bottom.

use std::fmt::Write;

use kennelgrid_core::access::field_or_unreachable;
use kennelgrid_core::model::{CellRect, Coord};
use kennelgrid_core::placement::footprint_cells;
use kennelgrid_core::{Chromosome, Orientation, Shelter, Wall};

use crate::config::RenderOptions;

const STYLE: &str = "\
.floor{fill:#fafafa;stroke:none}\
.outline{fill:none;stroke:#222;stroke-width:2}\
.door{stroke:#2a7;stroke-width:4}\
.column{fill:#555}\
.cage{fill:#cfe0f5;stroke:#345;stroke-width:1}\
.door-edge{stroke:#c33;stroke-width:3}\
.path{fill:none;stroke:#e90;stroke-width:1;stroke-opacity:.7}";

struct Canvas {
    px: f64,
    height_cells: i32,
}

impl Canvas {
    fn x(&self, cx: f64) -> f64 {
        cx * self.px
    }

    fn y(&self, cy: f64) -> f64 {
        (self.height_cells as f64 - cy) * self.px
    }

    fn rect(&self, out: &mut String, class: &str, r: CellRect) {
        writeln!(
            out,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}"/>"#,
            self.x(r.x0 as f64),
            self.y(r.y1 as f64),
            (r.x1 - r.x0) as f64 * self.px,
            (r.y1 - r.y0) as f64 * self.px
        )
        .unwrap();
    }

    fn line(&self, out: &mut String, class: &str, (x0, y0): (f64, f64), (x1, y1): (f64, f64)) {
        writeln!(
            out,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            self.x(x0),
            self.y(y0),
            self.x(x1),
            self.y(y1)
        )
        .unwrap();
    }
}

/// Renders the shelter outline, doors, columns and every cage of `chrom`,
/// each cage with a mark on its door edge.
pub fn render_svg(shelter: &Shelter, chrom: &Chromosome, opts: &RenderOptions) -> String {
    let dims = shelter.dims();
    let spec = shelter.spec();
    let canvas = Canvas {
        px: opts.px_per_cell as f64,
        height_cells: dims.y,
    };
    let (w, h) = (dims.x as f64 * canvas.px, dims.y as f64 * canvas.px);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(out, "<style>{STYLE}</style>").unwrap();
    let grid = CellRect {
        x0: 0,
        y0: 0,
        x1: dims.x,
        y1: dims.y,
    };
    canvas.rect(&mut out, "floor", grid);

    for col in &spec.columns {
        canvas.rect(&mut out, "column", col.cell_rect(spec.resolution_m));
    }

    let cage = shelter.cage();
    for &p in &chrom.placements {
        let b = p.body(cage);
        canvas.rect(&mut out, "cage", b);
        let (x0, y0, x1, y1) = (b.x0 as f64, b.y0 as f64, b.x1 as f64, b.y1 as f64);
        let (a, z) = match p.orientation {
            Orientation::Up => ((x0, y1), (x1, y1)),
            Orientation::Down => ((x0, y0), (x1, y0)),
            Orientation::Right => ((x1, y0), (x1, y1)),
            Orientation::Left => ((x0, y0), (x0, y1)),
        };
        canvas.line(&mut out, "door-edge", a, z);
    }

    if opts.show_paths && !chrom.is_empty() {
        if let Ok(occ) = shelter.rasterize(chrom) {
            let field = field_or_unreachable(&occ, shelter);
            for &p in &chrom.placements {
                let access = footprint_cells(p, cage).access;
                let Some(path) = field.path_to_entrance(access) else {
                    continue;
                };
                let points: Vec<String> = path
                    .iter()
                    .map(|c: &Coord| {
                        format!(
                            "{},{}",
                            canvas.x(c.x as f64 + 0.5),
                            canvas.y(c.y as f64 + 0.5)
                        )
                    })
                    .collect();
                writeln!(
                    out,
                    r#"<polyline class="path" points="{}"/>"#,
                    points.join(" ")
                )
                .unwrap();
            }
        }
    }

    canvas.rect(&mut out, "outline", grid);
    for door in &spec.doors {
        let (s, e) = door.cell_span(spec);
        let (s, e) = (s as f64, e as f64);
        let (xw, yh) = (dims.x as f64, dims.y as f64);
        let (a, z) = match door.wall {
            Wall::South => ((s, 0.0), (e, 0.0)),
            Wall::North => ((s, yh), (e, yh)),
            Wall::West => ((0.0, s), (0.0, e)),
            Wall::East => ((xw, s), (xw, e)),
        };
        canvas.line(&mut out, "door", a, z);
    }
    out.push_str("</svg>\n");
    out
}
