use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::format::format_proportion;
use super::tables::csv_field;
use crate::error::{Error, Result};
use crate::sampling::LabelDistribution;

/// Colour of the normal class in every chart.
pub const NORMAL_COLOR: &str = "blue";

/// Upper bound on markers drawn in one scatter plot.
pub const MAX_MARKERS: usize = 5000;

const PALETTE: [&str; 23] = [
    "orange",
    "green",
    "red",
    "purple",
    "brown",
    "hotpink",
    "gray",
    "olive",
    "darkcyan",
    "gold",
    "teal",
    "maroon",
    "lime",
    "coral",
    "indigo",
    "khaki",
    "salmon",
    "sienna",
    "orchid",
    "tan",
    "crimson",
    "darkgreen",
    "slategray",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    Pie,
    Scatter3dProjection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub kind: PlotKind,
    /// File holding the plotted data (fractions CSV or point cloud CSV).
    pub data_path: PathBuf,
    pub width: u32,
    pub height: u32,
    /// Class name to colour, in legend order.
    pub color_map: Vec<(String, String)>,
}

impl PlotSpec {
    pub fn new(kind: PlotKind, data_path: impl Into<PathBuf>) -> Self {
        Self {
            kind,
            data_path: data_path.into(),
            width: 800,
            height: 600,
            color_map: Vec::new(),
        }
    }

    pub fn with_colors(mut self, color_map: Vec<(String, String)>) -> Self {
        self.color_map = color_map;
        self
    }

    fn color_of(&self, class: &str) -> &str {
        self.color_map
            .iter()
            .find(|(c, _)| c == class)
            .map_or("black", |(_, col)| col.as_str())
    }
}

/// Normal classes first (blue), then the remaining classes in the given
/// order, drawn from a fixed palette.
pub fn class_colors<'a>(
    classes: impl IntoIterator<Item = &'a str>,
    normal_classes: &[&str],
) -> Vec<(String, String)> {
    let classes: Vec<&str> = classes.into_iter().collect();
    let mut out: Vec<(String, String)> = classes
        .iter()
        .filter(|c| normal_classes.contains(c))
        .map(|c| (c.to_string(), NORMAL_COLOR.to_owned()))
        .collect();
    for (i, c) in classes
        .iter()
        .filter(|c| !normal_classes.contains(c))
        .enumerate()
    {
        let color = match PALETTE.get(i) {
            Some(p) => (*p).to_owned(),
            None => format!("hsl({},70%,45%)", (i * 47) % 360),
        };
        out.push((c.to_string(), color));
    }
    out
}

/// `(class, fraction, colour)` rows: normal classes first, the rest by
/// count descending then name.
pub fn pie_fractions(
    dist: &LabelDistribution,
    display_name: impl Fn(&str) -> String,
    normal_classes: &[&str],
) -> Vec<(String, f64, String)> {
    let mut keys: Vec<(&String, &u64)> = dist.counts.iter().collect();
    keys.sort_by(|a, b| {
        let an = normal_classes.contains(&a.0.as_str());
        let bn = normal_classes.contains(&b.0.as_str());
        bn.cmp(&an).then(b.1.cmp(a.1)).then(a.0.cmp(b.0))
    });
    let colors = class_colors(keys.iter().map(|(k, _)| k.as_str()), normal_classes);
    keys.iter()
        .zip(colors)
        .map(|((k, _), (_, color))| (display_name(k), dist.proportion(k), color))
        .collect()
}

pub fn pie_fractions_csv(rows: &[(String, f64, String)]) -> String {
    let mut out = String::from("class_name,fraction,color\n");
    for (name, fraction, color) in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            csv_field(name),
            format_proportion(*fraction),
            color
        );
    }
    out
}

/// Writes the pie-chart fractions CSV for `dist`.
pub fn emit_pie_fractions(
    dist: &LabelDistribution,
    display_name: impl Fn(&str) -> String,
    normal_classes: &[&str],
    path: impl AsRef<Path>,
) -> Result<Vec<(String, f64, String)>> {
    let rows = pie_fractions(dist, display_name, normal_classes);
    write_text(path, &pie_fractions_csv(&rows))?;
    Ok(rows)
}

fn svg_header(out: &mut String, spec: &PlotSpec, desc: &str) {
    let (w, h) = (spec.width, spec.height);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, "<desc>{}</desc>", xml_escape(desc));
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
    );
}

fn legend(out: &mut String, entries: &[(&str, &str)], x: f64, y: f64) {
    let _ = writeln!(
        out,
        r#"<g class="legend" font-family="sans-serif" font-size="12">"#
    );
    for (i, (name, color)) in entries.iter().enumerate() {
        let ty = y + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            ty,
            x + 15.0,
            ty + 9.0,
            xml_escape(name)
        );
    }
    let _ = writeln!(out, "</g>");
}

/// A static pie chart of the given fractions.
pub fn render_pie_svg(rows: &[(String, f64, String)], spec: &PlotSpec) -> String {
    let mut out = String::new();
    svg_header(
        &mut out,
        spec,
        &format!("source: {}", file_label(&spec.data_path)),
    );
    let cx = spec.height as f64 / 2.0;
    let cy = cx;
    let r = cx - 20.0;
    let mut angle = -PI / 2.0;
    let _ = writeln!(
        out,
        r#"<g class="slices" stroke="white" stroke-width="0.5">"#
    );
    for (_, fraction, color) in rows {
        if *fraction >= 1.0 {
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="{color}"/>"#
            );
            continue;
        }
        if *fraction <= 0.0 {
            continue;
        }
        let end = angle + 2.0 * PI * fraction;
        let large = u8::from(*fraction > 0.5);
        let _ = writeln!(
            out,
            r#"<path d="M {cx:.2} {cy:.2} L {:.2} {:.2} A {r:.2} {r:.2} 0 {large} 1 {:.2} {:.2} Z" fill="{color}"/>"#,
            cx + r * angle.cos(),
            cy + r * angle.sin(),
            cx + r * end.cos(),
            cy + r * end.sin()
        );
        angle = end;
    }
    let _ = writeln!(out, "</g>");
    let entries: Vec<(&str, &str)> = rows
        .iter()
        .map(|(n, _, c)| (n.as_str(), c.as_str()))
        .collect();
    legend(&mut out, &entries, spec.height as f64 + 10.0, 20.0);
    out.push_str("</svg>\n");
    out
}

/// Writes a point cloud as CSV with columns `pc1..pck,label`.
pub fn write_point_cloud(
    points: ArrayView2<'_, f64>,
    labels: &[impl AsRef<str>],
    path: impl AsRef<Path>,
) -> Result<()> {
    if points.nrows() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points but {} labels",
            points.nrows(),
            labels.len()
        )));
    }
    let mut out = String::new();
    for i in 1..=points.ncols() {
        let _ = write!(out, "pc{i},");
    }
    out.push_str("label\n");
    for (row, label) in points.outer_iter().zip(labels) {
        for v in row {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", csv_field(label.as_ref()));
    }
    write_text(path, &out)
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

/// Orthographic view of 3-D points: `pc1` across, `pc2` up, `pc3` as marker
/// size. Clouds larger than [`MAX_MARKERS`] are thinned by a uniform stride.
pub fn render_scatter_svg(
    points: ArrayView2<'_, f64>,
    labels: &[impl AsRef<str>],
    spec: &PlotSpec,
) -> Result<String> {
    let n = points.nrows();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "scatter plot needs at least one point".into(),
        ));
    }
    if points.ncols() != 3 {
        return Err(Error::InvalidArgument(format!(
            "scatter plot needs 3 coordinates, got {}",
            points.ncols()
        )));
    }
    if labels.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{n} points but {} labels",
            labels.len()
        )));
    }
    let stride = n.div_ceil(MAX_MARKERS);
    let drawn: Vec<usize> = (0..n).step_by(stride).collect();

    let (left, right, top, bottom) = (60.0, 170.0, 30.0, 50.0);
    let (w, h) = (spec.width as f64, spec.height as f64);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let (x0, x1) = extent(drawn.iter().map(|&i| points[[i, 0]]));
    let (y0, y1) = extent(drawn.iter().map(|&i| points[[i, 1]]));
    let (z0, z1) = extent(drawn.iter().map(|&i| points[[i, 2]]));

    let mut out = String::new();
    svg_header(
        &mut out,
        spec,
        &format!(
            "source: {}; {} of {} points; x=pc1 y=pc2 size=pc3",
            file_label(&spec.data_path),
            drawn.len(),
            n
        ),
    );
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="black" font-family="sans-serif" font-size="12"><line x1="{left}" y1="{0}" x2="{1}" y2="{0}"/><line x1="{left}" y1="{top}" x2="{left}" y2="{0}"/><text x="{2}" y="{3}" stroke="none" text-anchor="middle">PC1</text><text x="15" y="{4}" stroke="none" text-anchor="middle">PC2</text></g>"#,
        top + ph,
        left + pw,
        left + pw / 2.0,
        h - 15.0,
        top + ph / 2.0,
    );
    let _ = writeln!(out, r#"<g class="markers" fill-opacity="0.6">"#);
    for &i in &drawn {
        let cx = left + (points[[i, 0]] - x0) / (x1 - x0) * pw;
        let cy = top + ph - (points[[i, 1]] - y0) / (y1 - y0) * ph;
        let r = 1.5 + 3.5 * (points[[i, 2]] - z0) / (z1 - z0);
        let color = spec.color_of(labels[i].as_ref());
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.2}" fill="{color}"/>"#
        );
    }
    let _ = writeln!(out, "</g>");

    let present: HashSet<&str> = drawn.iter().map(|&i| labels[i].as_ref()).collect();
    let mut entries: Vec<(&str, &str)> = spec
        .color_map
        .iter()
        .filter(|(c, _)| present.contains(c.as_str()))
        .map(|(c, col)| (c.as_str(), col.as_str()))
        .collect();
    let mut unmapped: Vec<&str> = present
        .iter()
        .copied()
        .filter(|c| !spec.color_map.iter().any(|(m, _)| m == c))
        .collect();
    unmapped.sort_unstable();
    entries.extend(unmapped.into_iter().map(|c| (c, "black")));
    legend(&mut out, &entries, w - right + 15.0, top);
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_scatter_svg(
    points: ArrayView2<'_, f64>,
    labels: &[impl AsRef<str>],
    spec: &PlotSpec,
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = render_scatter_svg(points, labels, spec)?;
    write_text(path, &svg)
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub(crate) fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
