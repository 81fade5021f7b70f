//! Static SVG phase diagrams from trial CSVs: δ on the x-axis, one series
//! per n.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;

use crate::config::parse_rational;
use crate::error::{LabError, Result};
use crate::record::{BLOWUP, NA};
use crate::sweep::lower_median;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Fraction of satisfiable trials.
    SatFraction,
    /// Median `twUpper`.
    TwRegime,
    /// Median `obddSize` on a log scale.
    ObddSizeMedian,
    /// Fraction of trials with `thetaPrefix ≥ 2/3`.
    ThetaFraction,
}

impl PlotKind {
    pub fn name(self) -> &'static str {
        match self {
            PlotKind::SatFraction => "satFraction",
            PlotKind::TwRegime => "twRegime",
            PlotKind::ObddSizeMedian => "obddSizeMedian",
            PlotKind::ThetaFraction => "thetaFraction",
        }
    }

    fn column(self) -> &'static str {
        match self {
            PlotKind::SatFraction => "satisfiable",
            PlotKind::TwRegime => "twUpper",
            PlotKind::ObddSizeMedian => "obddSize",
            PlotKind::ThetaFraction => "thetaPrefix",
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            PlotKind::SatFraction => "fraction satisfiable",
            PlotKind::TwRegime => "median twUpper",
            PlotKind::ObddSizeMedian => "median OBDD size (log10)",
            PlotKind::ThetaFraction => "fraction θ(F≤k, F>k) ≥ 2/3",
        }
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [PlotKind::SatFraction, PlotKind::TwRegime, PlotKind::ObddSizeMedian, PlotKind::ThetaFraction]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown plot kind `{s}` (expected satFraction, twRegime, obddSizeMedian or thetaFraction)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub delta: Ratio<u64>,
    pub y: f64,
    /// The median is BLOWUP; `y` is the ceiling.
    pub blowup: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub n: usize,
    pub points: Vec<Point>,
}

/// Aggregates the rows of a trial CSV for `kind`. Rows whose value is `NA`
/// are left out; a cell with no remaining rows gets no point.
pub fn series_from_csv(text: &str, kind: PlotKind, ceiling: Option<f64>) -> Result<Vec<Series>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| LabError::input("<csv>", e))?.clone();
    let required = ["n", "delta", kind.column()];
    let index = |name: &str| headers.iter().position(|h| h == name);
    let missing: Vec<String> = required.iter().filter(|c| index(c).is_none()).map(|c| c.to_string()).collect();
    if !missing.is_empty() {
        return Err(LabError::Schema { missing });
    }
    let (ni, di, vi) = (index("n").unwrap(), index("delta").unwrap(), index(kind.column()).unwrap());

    let mut cells: BTreeMap<(usize, Ratio<u64>), Vec<String>> = BTreeMap::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| LabError::input("<csv>", e))?;
        let bad = |what: &str| LabError::input("<csv>", format!("row {}: bad {what}", line + 2));
        let n: usize = row.get(ni).and_then(|s| s.parse().ok()).ok_or_else(|| bad("n"))?;
        let delta = row.get(di).and_then(|s| parse_rational(s).ok()).ok_or_else(|| bad("delta"))?;
        let value = row.get(vi).ok_or_else(|| bad(kind.column()))?;
        if value != NA {
            cells.entry((n, delta)).or_default().push(value.to_string());
        }
    }

    let mut by_n: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    for ((n, delta), values) in cells {
        let point = aggregate(kind, &values, ceiling).map_err(|v| LabError::input("<csv>", format!("bad {} value `{v}`", kind.column())))?;
        if let Some((y, blowup)) = point {
            by_n.entry(n).or_default().push(Point { delta, y, blowup });
        }
    }
    Ok(by_n.into_iter().map(|(n, points)| Series { n, points }).collect())
}

fn aggregate(kind: PlotKind, values: &[String], ceiling: Option<f64>) -> std::result::Result<Option<(f64, bool)>, String> {
    let share = |pred: &dyn Fn(&str) -> std::result::Result<bool, String>| -> std::result::Result<f64, String> {
        let mut hits = 0usize;
        for v in values {
            hits += usize::from(pred(v)?);
        }
        Ok(hits as f64 / values.len() as f64)
    };
    Ok(Some(match kind {
        PlotKind::SatFraction => (
            share(&|v| match v {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(v.to_string()),
            })?,
            false,
        ),
        PlotKind::ThetaFraction => (
            share(&|v| {
                let t = parse_rational(v).map_err(|_| v.to_string())?;
                // Six printed decimals: 0.666667 is the first value at or above 2/3.
                Ok(t >= Ratio::new(666_667, 1_000_000))
            })?,
            false,
        ),
        PlotKind::TwRegime => {
            let xs: Vec<u64> = values.iter().map(|v| v.parse().map_err(|_| v.clone())).collect::<std::result::Result<_, _>>()?;
            (lower_median(xs).unwrap() as f64, false)
        }
        PlotKind::ObddSizeMedian => {
            let keyed: Vec<(bool, u64)> = values
                .iter()
                .map(|v| if v == BLOWUP { Ok((true, 0)) } else { v.parse().map(|x| (false, x)).map_err(|_| v.clone()) })
                .collect::<std::result::Result<_, _>>()?;
            match lower_median(keyed).unwrap() {
                (true, _) => (ceiling.unwrap_or(f64::INFINITY), true),
                (false, x) => (x as f64, false),
            }
        }
    }))
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Renders `series` as a static SVG. BLOWUP medians sit on a dashed ceiling
/// line and are drawn as crosses.
pub fn render_svg(kind: PlotKind, series: &[Series], title: &str) -> String {
    let log = kind == PlotKind::ObddSizeMedian;
    let ty = |y: f64| if log { y.max(1.0).log10() } else { y };
    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| ratio_f64(p.delta))).collect();
    let (mut x0, mut x1) = (xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let finite: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| ty(p.y))).filter(|y| y.is_finite()).collect();
    let (y0, mut y1) = match kind {
        PlotKind::SatFraction | PlotKind::ThetaFraction => (0.0, 1.0),
        _ => (0.0, finite.iter().copied().fold(1.0, f64::max)),
    };
    let has_blowup = series.iter().any(|s| s.points.iter().any(|p| p.blowup));
    if has_blowup && kind == PlotKind::ObddSizeMedian && finite.is_empty() {
        y1 = 1.0;
    }
    if kind == PlotKind::TwRegime {
        y1 = y1.ceil();
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + plot_h - (y.min(y1) - y0) / (y1 - y0) * plot_h;

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(w, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, fmt_num(WIDTH / 2.0), escape(title)).unwrap();
    writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        fmt_num(plot_w),
        fmt_num(plot_h)
    )
    .unwrap();
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let y = y0 + (y1 - y0) * i as f64 / 5.0;
        let (sx, sy) = (fmt_num(px(x)), fmt_num(py(y)));
        writeln!(w, r#"<line x1="{sx}" y1="{}" x2="{sx}" y2="{}" stroke="black"/>"#, fmt_num(TOP + plot_h), fmt_num(TOP + plot_h + 5.0)).unwrap();
        writeln!(w, r#"<text x="{sx}" y="{}" text-anchor="middle">{}</text>"#, fmt_num(TOP + plot_h + 18.0), fmt_num(x)).unwrap();
        writeln!(w, r#"<line x1="{}" y1="{sy}" x2="{LEFT}" y2="{sy}" stroke="black"/>"#, fmt_num(LEFT - 5.0)).unwrap();
        writeln!(w, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, fmt_num(LEFT - 8.0), fmt_num(py(y) + 4.0), fmt_num(y)).unwrap();
    }
    writeln!(w, r#"<text x="{}" y="{}" text-anchor="middle">δ = m/n</text>"#, fmt_num(LEFT + plot_w / 2.0), fmt_num(HEIGHT - 12.0)).unwrap();
    writeln!(
        w,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        fmt_num(TOP + plot_h / 2.0),
        fmt_num(TOP + plot_h / 2.0),
        escape(kind.y_label())
    )
    .unwrap();
    if has_blowup {
        let sy = fmt_num(py(y1));
        writeln!(w, r#"<line x1="{LEFT}" y1="{sy}" x2="{}" y2="{sy}" stroke="gray" stroke-dasharray="4 3"/>"#, fmt_num(LEFT + plot_w)).unwrap();
        writeln!(w, r#"<text x="{}" y="{}" fill="gray">BLOWUP</text>"#, fmt_num(LEFT + plot_w + 6.0), fmt_num(py(y1) + 4.0)).unwrap();
    }
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<(f64, f64)> = s
            .points
            .iter()
            .map(|p| (px(ratio_f64(p.delta)), if p.blowup { py(y1) } else { py(ty(p.y)) }))
            .collect();
        let path: Vec<String> = coords.iter().map(|(x, y)| format!("{},{}", fmt_num(*x), fmt_num(*y))).collect();
        writeln!(w, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" ")).unwrap();
        for (p, (x, y)) in s.points.iter().zip(&coords) {
            if p.blowup {
                let d = format!(
                    "M{},{} L{},{} M{},{} L{},{}",
                    fmt_num(x - 4.0),
                    fmt_num(y - 4.0),
                    fmt_num(x + 4.0),
                    fmt_num(y + 4.0),
                    fmt_num(x - 4.0),
                    fmt_num(y + 4.0),
                    fmt_num(x + 4.0),
                    fmt_num(y - 4.0)
                );
                writeln!(w, r#"<path d="{d}" stroke="{color}" stroke-width="2"/>"#).unwrap();
            } else {
                writeln!(w, r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#, fmt_num(*x), fmt_num(*y)).unwrap();
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 10.0;
        writeln!(w, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#, fmt_num(lx), fmt_num(ly), fmt_num(lx + 20.0), fmt_num(ly)).unwrap();
        writeln!(w, r#"<text x="{}" y="{}">n = {}</text>"#, fmt_num(lx + 26.0), fmt_num(ly + 4.0), s.n).unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Reads a trial CSV and renders `kind`. `capacity` places BLOWUP medians
/// of `obddSizeMedian` at the node capacity.
pub fn plot(csv_path: &Path, kind: PlotKind, capacity: Option<usize>) -> Result<String> {
    let text = std::fs::read_to_string(csv_path).map_err(|e| LabError::io(csv_path, e))?;
    let series = series_from_csv(&text, kind, capacity.map(|c| c as f64)).map_err(|e| match e {
        LabError::Input { message, .. } => LabError::input(csv_path, message),
        e => e,
    })?;
    Ok(render_svg(kind, &series, kind.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_a_schema_error() {
        match series_from_csv("", PlotKind::SatFraction, None) {
            Err(LabError::Schema { missing }) => assert_eq!(missing, ["n", "delta", "satisfiable"]),
            other => panic!("{other:?}"),
        }
        match series_from_csv("n,delta,twUpper\n", PlotKind::ThetaFraction, None) {
            Err(LabError::Schema { missing }) => assert_eq!(missing, ["thetaPrefix"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn aggregates_per_cell() {
        let csv = "n,delta,satisfiable,obddSize,thetaPrefix\n\
                   10,0.5,1,7,0.666667\n10,0.5,0,BLOWUP,0.666666\n10,0.5,1,BLOWUP,NA\n\
                   20,0.5,NA,3,1.000000\n10,1/3,0,5,0.000000\n";
        let sat = series_from_csv(csv, PlotKind::SatFraction, None).unwrap();
        assert_eq!(sat.len(), 1);
        assert_eq!(sat[0].points.len(), 2);
        assert_eq!(sat[0].points[0].delta, Ratio::new(1, 3));
        assert_eq!(sat[0].points[1].y, 2.0 / 3.0);
        let sizes = series_from_csv(csv, PlotKind::ObddSizeMedian, Some(1024.0)).unwrap();
        let p = &sizes[0].points[1];
        assert!(p.blowup && p.y == 1024.0);
        assert_eq!(sizes[1].points[0].y, 3.0);
        let theta = series_from_csv(csv, PlotKind::ThetaFraction, None).unwrap();
        assert_eq!(theta[0].points[1].y, 0.5);
    }

    #[test]
    fn svg_is_static() {
        let s = vec![Series { n: 5, points: vec![Point { delta: Ratio::new(1, 2), y: 0.5, blowup: false }] }];
        let svg = render_svg(PlotKind::SatFraction, &s, "t");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("<script"));
        assert!(svg.contains("n = 5"));
    }
}
