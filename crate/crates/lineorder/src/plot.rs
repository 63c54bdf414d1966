//! Plot export for height witnesses: a CSV of vertex and edge records and an
//! SVG with one panel per generator. Each panel shows the fibre twice, at
//! the source and target ends of the edges, so a crossing pair is drawn as
//! two segments that intersect.

use std::fmt::Write;

use lineorder_core::bundle::{Edge, HeightWitness, Verdict};
use lineorder_core::realization::Height;
use num_traits::ToPrimitive;

use crate::doc::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    Svg,
}

impl PlotFormat {
    /// By file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(PlotFormat::Csv),
            "svg" => Some(PlotFormat::Svg),
            _ => None,
        }
    }
}

pub fn export_plot(w: &HeightWitness, format: PlotFormat) -> String {
    match format {
        PlotFormat::Csv => to_csv(w),
        PlotFormat::Svg => to_svg(w),
    }
}

fn height(w: &HeightWitness, v: usize) -> &Height {
    w.heights.height(v).expect("certified witnesses have all heights")
}

fn exact(h: &Height) -> String {
    Rat::from(h).display()
}

fn approx(h: &Height) -> f64 {
    h.to_f64().unwrap_or(f64::NAN)
}

fn marked_edge(w: &HeightWitness, e: &Edge) -> bool {
    matches!(w.verdict, Verdict::Crossing(a, b) if a == *e || b == *e)
}

fn marked_vertex(w: &HeightWitness, v: usize) -> bool {
    matches!(w.verdict, Verdict::EqualHeights(a, b) if a == v || b == v)
}

/// One `vertex` row per point and one `edge` row per edge; `marked` flags
/// the refuting pair.
pub fn to_csv(w: &HeightWitness) -> String {
    let names = w.graph.ctx().names();
    let mut out = String::from("record,id,label,source,target,height,y,target_height,target_y,marked\n");
    for v in 0..w.graph.vertices().len() {
        let h = height(w, v);
        writeln!(
            out,
            "vertex,{v},,,,{},{:.6},,,{}",
            exact(h),
            approx(h),
            u8::from(marked_vertex(w, v))
        )
        .unwrap();
    }
    for (i, e) in w.graph.edges().iter().enumerate() {
        let (hs, ht) = (height(w, e.source), height(w, e.target));
        writeln!(
            out,
            "edge,{i},{},{},{},{},{:.6},{},{:.6},{}",
            names[e.label as usize],
            e.source,
            e.target,
            exact(hs),
            approx(hs),
            exact(ht),
            approx(ht),
            u8::from(marked_edge(w, e))
        )
        .unwrap();
    }
    out
}

const PANEL: f64 = 180.0;
const SPAN: f64 = 120.0;
const TOP: f64 = 40.0;
const PLOT_HEIGHT: f64 = 360.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn to_svg(w: &HeightWitness) -> String {
    let k = w.graph.ctx().generator_count() as usize;
    let names = w.graph.ctx().names();
    let n = w.graph.vertices().len();
    let hs: Vec<f64> = (0..n).map(|v| approx(height(w, v))).collect();
    let lo = hs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = hs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let y = |h: f64| {
        if hi > lo {
            TOP + PLOT_HEIGHT * (hi - h) / (hi - lo)
        } else {
            TOP + PLOT_HEIGHT / 2.0
        }
    };
    let width = PANEL * k.max(1) as f64;
    let total = TOP * 2.0 + PLOT_HEIGHT;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{total:.0}" viewBox="0 0 {width:.0} {total:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (s, name) in names.iter().enumerate().take(k) {
        let x0 = PANEL * s as f64 + (PANEL - SPAN) / 2.0;
        let x1 = x0 + SPAN;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            (x0 + x1) / 2.0,
            TOP / 2.0,
            escape(name)
        )
        .unwrap();
        for x in [x0, x1] {
            writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{:.2}" stroke="#999"/>"##,
                TOP + PLOT_HEIGHT
            )
            .unwrap();
        }
        for e in w.graph.edges_labelled(s as u32) {
            let (colour, width, class) = if marked_edge(w, e) {
                ("#d00", 2.5, "edge crossing")
            } else {
                ("#246", 1.0, "edge")
            };
            writeln!(
                out,
                r#"<line class="{class}" x1="{x0:.2}" y1="{:.2}" x2="{x1:.2}" y2="{:.2}" stroke="{colour}" stroke-width="{width}"/>"#,
                y(hs[e.source]),
                y(hs[e.target])
            )
            .unwrap();
        }
        for (v, &h) in hs.iter().enumerate() {
            let (fill, class) = if marked_vertex(w, v) {
                ("#d00", "vertex equal")
            } else {
                ("#000", "vertex")
            };
            for x in [x0, x1] {
                writeln!(
                    out,
                    r#"<circle class="{class}" cx="{x:.2}" cy="{:.2}" r="2.5" fill="{fill}"/>"#,
                    y(h)
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
