//! Schematic SVG route maps, one per working day.
//!
//! Coordinates are projected equirectangularly (longitude scaled by the
//! cosine of the mean latitude) into a fixed view box. Without coordinates
//! the points are spread on a circle around the depot; without depot
//! coordinates the depot sits at the centroid of the points.

use std::fmt::Write;

use wastecol_core::model::{Problem, Schedule, DAY_NAMES};

use crate::report::fmt2;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MAP: f64 = 560.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];

/// Screen positions of the depot (index 0) and points.
fn layout(problem: &Problem) -> Vec<(f64, f64)> {
    let inst = &problem.instance;
    let n = inst.n_points();
    let geo: Vec<(f64, f64)> = if inst.coords().len() == n {
        let mut pts = Vec::with_capacity(n + 1);
        let depot = inst.depot_coords().unwrap_or_else(|| {
            let (a, o) = inst.coords().iter().fold((0.0, 0.0), |s, c| (s.0 + c.0, s.1 + c.1));
            (a / n as f64, o / n as f64)
        });
        pts.push(depot);
        pts.extend_from_slice(inst.coords());
        let mean_lat = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let k = mean_lat.to_radians().cos();
        pts.iter().map(|&(lat, lon)| (lon * k, -lat)).collect()
    } else {
        let mut pts = vec![(0.0, 0.0)];
        pts.extend((0..n).map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            (a.cos(), a.sin())
        }));
        pts
    };
    let (min_x, max_x) = geo.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let (min_y, max_y) = geo.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let s = (MAP - 2.0 * MARGIN) / span;
    geo.iter().map(|&(x, y)| (MARGIN + (x - min_x) * s, MARGIN + (y - min_y) * s)).collect()
}

/// One SVG document per working day, as `(day index, svg text)`.
pub fn render_routes(schedule: &Schedule, problem: &Problem) -> Vec<(usize, String)> {
    let pos = layout(problem);
    problem
        .horizon
        .working_days()
        .map(|day| (day, render_day(schedule, problem, day, &pos)))
        .collect()
}

fn render_day(schedule: &Schedule, problem: &Problem, day: usize, pos: &[(f64, f64)]) -> String {
    let mut s = String::new();
    let name = DAY_NAMES.get(day).copied().unwrap_or("day");
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<title>{} {}</title>", escape(problem.instance.name()), name);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let routes = schedule.routes.get(day).map(Vec::as_slice).unwrap_or(&[]);
    for (r, route) in routes.iter().enumerate() {
        let pts: Vec<String> = std::iter::once(0)
            .chain(route.iter().copied())
            .chain(std::iter::once(0))
            .map(|i| format!("{:.1},{:.1}", pos[i].0, pos[i].1))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="route" data-route="{}" data-points="{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            r + 1,
            route.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
            pts.join(" "),
            PALETTE[r % PALETTE.len()]
        );
    }
    let (dx, dy) = pos[0];
    let _ = writeln!(
        s,
        r#"<rect class="depot" x="{:.1}" y="{:.1}" width="12" height="12" fill="black"/>"#,
        dx - 6.0,
        dy - 6.0
    );
    for (i, &(x, y)) in pos.iter().enumerate().skip(1) {
        let _ = writeln!(s, r##"<circle class="point" cx="{x:.1}" cy="{y:.1}" r="5" fill="#444"/>"##);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="11">{i}</text>"#, x + 7.0, y - 4.0);
    }
    let _ = writeln!(s, r#"<g class="legend" font-size="13">"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, MAP + 10.0, 40, name);
    for (r, route) in routes.iter().enumerate() {
        let y = 65.0 + 22.0 * r as f64;
        let time = schedule.route_times.get(day).and_then(|t| t.get(r)).copied().unwrap_or(f64::NAN);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="3"/>"#,
            MAP + 10.0,
            y - 4.0,
            MAP + 34.0,
            y - 4.0,
            PALETTE[r % PALETTE.len()]
        );
        let _ = writeln!(s, r#"<text x="{}" y="{y}">R{} ({} pts): {} min</text>"#, MAP + 40.0, r + 1, route.len(), fmt2(time));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
