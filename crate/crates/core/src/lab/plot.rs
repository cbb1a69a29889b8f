//! Standalone SVG line plots of result tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::record::Table;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

#[derive(Clone, Debug, PartialEq)]
pub struct PlotOptions {
    pub x: String,
    pub y: String,
    pub group_by: Vec<String>,
    pub log_y: bool,
    /// Column drawn dashed on top of each group, e.g. `bound`.
    pub overlay: Option<String>,
    pub title: Option<String>,
}

impl PlotOptions {
    pub fn new(x: &str, y: &str) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
            group_by: Vec::new(),
            log_y: false,
            overlay: None,
            title: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoint {
    pub x: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<SeriesPoint>,
    /// `(x, mean overlay value)`.
    pub overlay: Vec<(f64, f64)>,
}

fn parse_cell(table: &Table, row: usize, col: usize) -> Result<Option<f64>> {
    let cell = &table.rows[row][col];
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>().map(Some).map_err(|_| Error::Parse {
        line: row + 2,
        message: format!("column `{}` holds non-numeric `{cell}`", table.header[col]),
    })
}

fn stats(v: &[f64]) -> (f64, f64, f64) {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    (s.iter().sum::<f64>() / s.len() as f64, s[0], s[s.len() - 1])
}

/// Groups rows and reduces repeated `x` values to mean, min and max.
pub fn series(table: &Table, opts: &PlotOptions) -> Result<Vec<Series>> {
    let xc = table.column(&opts.x)?;
    let yc = table.column(&opts.y)?;
    let gcs: Vec<usize> = opts.group_by.iter().map(|g| table.column(g)).collect::<Result<_>>()?;
    let oc = opts.overlay.as_deref().map(|o| table.column(o)).transpose()?;

    type Acc = BTreeMap<u64, (f64, Vec<f64>, Vec<f64>)>;
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Acc> = BTreeMap::new();
    for r in 0..table.rows.len() {
        let Some(x) = parse_cell(table, r, xc)? else { continue };
        let name = if gcs.is_empty() {
            opts.y.clone()
        } else {
            gcs.iter()
                .map(|&c| format!("{}={}", table.header[c], table.rows[r][c]))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let acc = groups.entry(name.clone()).or_insert_with(|| {
            order.push(name);
            Acc::new()
        });
        // Order-preserving key for finite floats.
        let key = if x >= 0.0 { x.to_bits() ^ (1 << 63) } else { !x.to_bits() };
        let e = acc.entry(key).or_insert((x, Vec::new(), Vec::new()));
        if let Some(y) = parse_cell(table, r, yc)? {
            e.1.push(y);
        }
        if let Some(c) = oc {
            if let Some(o) = parse_cell(table, r, c)? {
                e.2.push(o);
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|name| {
            let acc = &groups[&name];
            let points = acc
                .values()
                .filter(|(_, ys, _)| !ys.is_empty())
                .map(|(x, ys, _)| {
                    let (mean, min, max) = stats(ys);
                    SeriesPoint { x: *x, mean, min, max }
                })
                .collect();
            let overlay = acc
                .values()
                .filter(|(_, _, os)| !os.is_empty())
                .map(|(x, _, os)| (*x, stats(os).0))
                .collect();
            Series { name, points, overlay }
        })
        .collect())
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
    floor: f64,
}

impl Axis {
    fn map(&self, v: f64, a: f64, b: f64) -> f64 {
        let t = |v: f64| if self.log { v.max(self.floor).log10() } else { v };
        let (lo, hi) = (t(self.lo), t(self.hi));
        a + (t(v) - lo) / (hi - lo) * (b - a)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.log10().floor() as i32, self.hi.log10().ceil() as i32);
            let step = ((b - a) / 6).max(1);
            (a..=b).step_by(step as usize).map(|e| 10f64.powi(e)).filter(|v| *v >= self.lo * 0.999 && *v <= self.hi * 1.001).collect()
        } else {
            (0..=5).map(|k| self.lo + (self.hi - self.lo) * k as f64 / 5.0).collect()
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s.is_empty() || s == "-" { "0".into() } else { s.to_string() }
    }
}

fn axis_range(values: impl Iterator<Item = f64>, log: bool) -> Axis {
    let vals: Vec<f64> = values.filter(|v| v.is_finite()).collect();
    let pos_min = vals.iter().copied().filter(|v| *v > 0.0).fold(f64::INFINITY, f64::min);
    let floor = if pos_min.is_finite() { pos_min / 10.0 } else { 1e-12 };
    let (mut lo, mut hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if log {
        lo = lo.max(floor);
        hi = hi.max(lo);
        if hi / lo < 10.0 {
            lo /= 3.0;
            hi *= 3.0;
        }
    } else if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    } else {
        let pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    Axis { lo, hi, log, floor }
}

/// Renders `opts.y` against `opts.x`: one polyline per group, a shaded
/// min–max band, optional dashed overlay. Same input, same bytes.
pub fn plot_svg(table: &Table, opts: &PlotOptions) -> Result<String> {
    let all = series(table, opts)?;
    let xs = all.iter().flat_map(|s| s.points.iter().map(|p| p.x).chain(s.overlay.iter().map(|o| o.0)));
    let x_axis = axis_range(xs, false);
    let ys = all.iter().flat_map(|s| {
        s.points
            .iter()
            .flat_map(|p| [p.min, p.max])
            .chain(s.overlay.iter().map(|o| o.1))
    });
    let y_axis = axis_range(ys, opts.log_y);
    let (x0, x1) = (MARGIN_L, WIDTH - MARGIN_R);
    let (y0, y1) = (HEIGHT - MARGIN_B, MARGIN_T);
    let px = |v: f64| x_axis.map(v, x0, x1);
    let py = |v: f64| y_axis.map(v, y0, y1);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if let Some(t) = &opts.title {
        let _ = writeln!(s, r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (x0 + x1) / 2.0, escape(t));
    }
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.1},{y1:.1} L{x0:.1},{y0:.1} L{x1:.1},{y0:.1}" fill="none" stroke="black"/>"#
    );
    for t in x_axis.ticks() {
        let x = px(t);
        let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{y0:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, y0 + 18.0, fmt_num(t));
    }
    for t in y_axis.ticks() {
        let y = py(t);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{y:.1}" x2="{x0:.1}" y2="{y:.1}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, fmt_num(t));
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, HEIGHT - 12.0, escape(&opts.x));
    let ylabel = if opts.log_y { format!("{} (log)", opts.y) } else { opts.y.clone() };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&ylabel)
    );

    for (k, ser) in all.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(s, r#"<g class="series" data-name="{}">"#, escape(&ser.name));
        if ser.points.len() > 1 && ser.points.iter().any(|p| p.max > p.min) {
            let upper = ser.points.iter().map(|p| format!("{:.2},{:.2}", px(p.x), py(p.max)));
            let lower = ser.points.iter().rev().map(|p| format!("{:.2},{:.2}", px(p.x), py(p.min)));
            let pts: Vec<String> = upper.chain(lower).collect();
            let _ = writeln!(s, r#"<polygon class="band" points="{}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#, pts.join(" "));
        }
        if ser.points.len() > 1 {
            let pts: Vec<String> = ser.points.iter().map(|p| format!("{:.2},{:.2}", px(p.x), py(p.mean))).collect();
            let _ = writeln!(s, r#"<polyline class="data" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, pts.join(" "));
        }
        for p in &ser.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(p.x), py(p.mean));
        }
        if !ser.overlay.is_empty() {
            let pts: Vec<String> = ser.overlay.iter().map(|(x, v)| format!("{:.2},{:.2}", px(*x), py(*v))).collect();
            let _ = writeln!(
                s,
                r#"<polyline class="overlay" points="{}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                pts.join(" ")
            );
        }
        let ly = MARGIN_T + 10.0 + 18.0 * k as f64;
        let lx = x1 + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#, lx + 18.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 24.0, ly + 4.0, escape(&ser.name));
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[[&str; 4]]) -> Table {
        let mut t = Table::new(&["L", "N", "div", "bound"]);
        for r in rows {
            t.push(r.iter().map(|c| c.to_string()).collect());
        }
        t
    }

    #[test]
    fn single_point_group() {
        let t = table(&[["1", "1", "0.5", "1"]]);
        let svg = plot_svg(&t, &PlotOptions::new("L", "div")).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn groups_bands_and_overlay() {
        let t = table(&[
            ["1", "1", "0.4", "1"],
            ["1", "1", "0.6", "1"],
            ["2", "1", "0.1", "0.5"],
            ["1", "2", "1.2", "2"],
            ["2", "2", "", "1"],
        ]);
        let mut o = PlotOptions::new("L", "div");
        o.group_by = vec!["N".into()];
        o.overlay = Some("bound".into());
        o.log_y = true;
        let s = series(&t, &o).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].points[0], SeriesPoint { x: 1.0, mean: 0.5, min: 0.4, max: 0.6 });
        assert_eq!(s[1].points.len(), 1);
        assert_eq!(s[1].overlay.len(), 2);
        let a = plot_svg(&t, &o).unwrap();
        assert_eq!(a, plot_svg(&t, &o).unwrap());
        assert!(a.contains(r#"class="band""#) && a.contains(r#"class="overlay""#));
    }

    #[test]
    fn missing_column_errors() {
        let t = table(&[["1", "1", "0.5", "1"]]);
        assert!(plot_svg(&t, &PlotOptions::new("L", "nope")).is_err());
    }
}
