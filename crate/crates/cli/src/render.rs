//! SVG drawing of a packing: strip outline, one rectangle per item and a
//! rule at the packing height. One unit is `SCALE` pixels; y grows upwards
//! in the strip and downwards in the picture.

use std::fmt::Write as _;

use stripack::geom::{packing_height, Instance, Packing};

pub const SCALE: i64 = 10;
const MARGIN: i64 = 20;

fn color(id: u32) -> String {
    // golden-angle hues
    let hue = (id as u64 * 137) % 360;
    format!("hsl({hue},55%,65%)")
}

pub fn render_svg(instance: &Instance, packing: &Packing) -> String {
    let height = packing_height(instance, packing);
    let (w, h) = (instance.width() * SCALE, height.max(1) * SCALE);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w + 2 * MARGIN + 60,
        h + 2 * MARGIN,
        w + 2 * MARGIN + 60,
        h + 2 * MARGIN
    );
    let _ = writeln!(s, r#"<g transform="translate({MARGIN},{MARGIN})">"#);
    let mut ps = packing.placements.clone();
    ps.sort_by_key(|p| p.id);
    for p in ps {
        let Some(it) = instance.item(p.id) else { continue };
        let _ = writeln!(
            s,
            r#"<rect class="item" data-id="{}" x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="black" stroke-width="0.5"/>"#,
            p.id,
            p.x * SCALE,
            h - (p.y + it.h) * SCALE,
            it.w * SCALE,
            it.h * SCALE,
            color(p.id.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect class="strip" x="0" y="0" width="{w}" height="{h}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line class="height" x1="0" y1="0" x2="{}" y2="0" stroke="red" stroke-dasharray="4 2"/>"#,
        w + 10
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="4" font-family="monospace" font-size="12">h={height}</text>"#,
        w + 14
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
