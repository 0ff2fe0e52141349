//! Static SVG export of a dataset's trajectories.
//!
//! One `<polyline>` per pedestrian (a `<circle>` when it has a single
//! observation), data +Y pointing up the page, optional trap outline.
//! Output depends only on the inputs, so it can be golden-file tested.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::ntxy::NtxyDataset;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub margin: f64,
    pub trap: Option<Rect>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 800,
            height: 600,
            margin: 20.0,
            trap: None,
        }
    }
}

/// Stroke colour for a pedestrian id: hues spaced by the golden angle.
pub fn pedestrian_color(id: u32) -> String {
    let hue = (f64::from(id) * 137.507_764) % 360.0;
    format!("hsl({hue:.1},70%,40%)")
}

struct Frame {
    origin: Vec2,
    scale: f64,
    offset: Vec2,
    height: f64,
}

impl Frame {
    fn fit(bounds: Rect, opts: &PlotOptions) -> Frame {
        let avail_w = f64::from(opts.width) - 2.0 * opts.margin;
        let avail_h = f64::from(opts.height) - 2.0 * opts.margin;
        let sx = if bounds.width() > 0.0 {
            avail_w / bounds.width()
        } else {
            f64::INFINITY
        };
        let sy = if bounds.height() > 0.0 {
            avail_h / bounds.height()
        } else {
            f64::INFINITY
        };
        let scale = match sx.min(sy) {
            s if s.is_finite() && s > 0.0 => s,
            _ => 1.0,
        };
        let offset = Vec2::new(
            opts.margin + (avail_w - bounds.width() * scale) / 2.0,
            opts.margin + (avail_h - bounds.height() * scale) / 2.0,
        );
        Frame {
            origin: bounds.min,
            scale,
            offset,
            height: f64::from(opts.height),
        }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let x = self.offset.x + (p.x - self.origin.x) * self.scale;
        let y = self.height - (self.offset.y + (p.y - self.origin.y) * self.scale);
        (x, y)
    }
}

fn coord(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn render_svg(dataset: &NtxyDataset, opts: &PlotOptions) -> Result<String> {
    if dataset.is_empty() {
        return Err(Error::NoPedestrians);
    }
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut extend = |p: Vec2| {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    };
    for r in dataset.records() {
        extend(Vec2::new(r.x, r.y));
    }
    if let Some(trap) = opts.trap {
        extend(trap.min);
        extend(trap.max);
    }
    let frame = Frame::fit(Rect { min: lo, max: hi }, opts);

    let (w, h) = (opts.width, opts.height);
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    if let Some(trap) = opts.trap {
        let (x0, y0) = frame.map(Vec2::new(trap.min.x, trap.max.y));
        let (x1, y1) = frame.map(Vec2::new(trap.max.x, trap.min.y));
        writeln!(
            svg,
            r##"<rect class="trap" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#888888" stroke-dasharray="6 3"/>"##,
            coord(x0),
            coord(y0),
            coord(x1 - x0),
            coord(y1 - y0)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<g class="trajectories" fill="none" stroke-width="1.5">"#
    )
    .unwrap();
    for t in dataset.trajectories() {
        let id = t.pedestrian_id().0;
        let color = pedestrian_color(id);
        if t.observation_count() == 1 {
            let (cx, cy) = frame.map(t.first_position());
            writeln!(
                svg,
                r#"<circle data-id="{id}" cx="{}" cy="{}" r="2.5" fill="{color}" stroke="none"><title>pedestrian {id}</title></circle>"#,
                coord(cx),
                coord(cy)
            )
            .unwrap();
        } else {
            let points: Vec<String> = t
                .points()
                .iter()
                .map(|p| {
                    let (x, y) = frame.map(p.position);
                    format!("{},{}", coord(x), coord(y))
                })
                .collect();
            writeln!(
                svg,
                r#"<polyline data-id="{id}" stroke="{color}" points="{}"><title>pedestrian {id}</title></polyline>"#,
                points.join(" ")
            )
            .unwrap();
        }
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
