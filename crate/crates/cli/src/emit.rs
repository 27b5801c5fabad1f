//! CSV, JSON and SVG output of result tables.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qcfem_core::analysis::{ConvergenceRecord, InterpolationRecord};
use serde_json::{Map, Value};

/// Scientific notation with four significant digits and a signed two-digit
/// exponent, e.g. `3.231e-01`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.3e}");
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

/// Value of [`sci`] read back, so JSON carries the same digits as CSV.
fn rounded(x: f64) -> f64 {
    sci(x).parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Blank,
}

impl Cell {
    fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Blank, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => sci(*x),
            Cell::Blank => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) if x.is_finite() => Value::from(rounded(*x)),
            _ => Value::Null,
        }
    }
}

/// A rectangular table with named columns.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub const CONVERGENCE_COLUMNS: [&str; 14] = [
    "level",
    "h",
    "ndofs",
    "err_l2",
    "rate_l2",
    "err_curl",
    "rate_curl",
    "err_curl_h1",
    "rate_curl_h1",
    "err_energy",
    "rate_energy",
    "p_norm",
    "solver_iters",
    "seconds",
];

pub const INTERPOLATION_COLUMNS: [&str; 14] = [
    "level",
    "h",
    "ndofs",
    "err_l2_R",
    "rate_l2_R",
    "err_curl_R",
    "rate_curl_R",
    "err_curl_h1_R",
    "rate_curl_h1_R",
    "err_l2_I",
    "rate_l2_I",
    "err_curl_I",
    "rate_curl_I",
    "seconds",
];

pub fn convergence_table(records: &[ConvergenceRecord], timing: bool) -> Table {
    let rows = records
        .iter()
        .map(|r| {
            let e = &r.errors;
            let rate = |f: fn(&qcfem_core::analysis::Rates) -> f64| Cell::opt(r.rates.as_ref().map(f));
            vec![
                Cell::Int(r.level as u64),
                Cell::Num(r.h),
                Cell::Int(r.ndofs as u64),
                Cell::Num(e.l2),
                rate(|x| x.l2),
                Cell::Num(e.curl_l2),
                rate(|x| x.curl),
                Cell::Num(e.curl_h1),
                rate(|x| x.curl_h1),
                Cell::Num(e.energy),
                rate(|x| x.energy),
                Cell::Num(r.p_norm),
                Cell::Int(r.solver.iterations as u64),
                if timing { Cell::Num(r.seconds) } else { Cell::Blank },
            ]
        })
        .collect();
    Table {
        columns: CONVERGENCE_COLUMNS.to_vec(),
        rows,
    }
}

pub fn interpolation_table(records: &[InterpolationRecord], timing: bool) -> Table {
    let rows = records
        .iter()
        .map(|r| {
            let rr = |f: fn(&qcfem_core::analysis::Rates) -> f64| Cell::opt(r.r_rates.as_ref().map(f));
            let ir = |f: fn(&qcfem_core::analysis::Rates) -> f64| Cell::opt(r.i_rates.as_ref().map(f));
            vec![
                Cell::Int(r.level as u64),
                Cell::Num(r.h),
                Cell::Int(r.ndofs as u64),
                Cell::Num(r.r_errors.l2),
                rr(|x| x.l2),
                Cell::Num(r.r_errors.curl_l2),
                rr(|x| x.curl),
                Cell::Num(r.r_errors.curl_h1),
                rr(|x| x.curl_h1),
                Cell::Num(r.i_errors.l2),
                ir(|x| x.l2),
                Cell::Num(r.i_errors.curl_l2),
                ir(|x| x.curl),
                if timing { Cell::Num(r.seconds) } else { Cell::Blank },
            ]
        })
        .collect();
    Table {
        columns: INTERPOLATION_COLUMNS.to_vec(),
        rows,
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self.columns.iter().zip(row).map(|(k, c)| (k.to_string(), c.json())).collect();
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("table serializes");
        s.push('\n');
        s
    }

    /// Column as positive floats, for plotting.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Num(x) => x,
                    Cell::Int(i) => i as f64,
                    Cell::Blank => f64::NAN,
                })
                .collect(),
        )
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Log-log plot of each series against `h` (base-2 horizontal, base-10
/// vertical axis) with dashed reference slopes of order 1/2, 1 and 2.
pub fn svg_plot(title: &str, h: &[f64], series: &[(&str, Vec<f64>)]) -> String {
    let (w, ht) = (640.0, 480.0);
    let (ml, mr, mt, mb) = (80.0, 170.0, 40.0, 60.0);
    let xs: Vec<f64> = h.iter().map(|v| -v.log2()).collect();
    let guides = [(0.5, "O(h^1/2)"), (1.0, "O(h)"), (2.0, "O(h^2)")];

    // Anchor guides half a decade below the smallest first-level error.
    let first_min = series
        .iter()
        .filter_map(|(_, v)| v.first().copied())
        .filter(|v| *v > 0.0 && v.is_finite())
        .fold(f64::INFINITY, f64::min);
    let anchor = if first_min.is_finite() { first_min / 3.0 } else { 1.0 };
    let guide_pts: Vec<(f64, f64)> = guides
        .iter()
        .map(|(s, _)| {
            let span = (h[0] / h[h.len() - 1]).max(1.0);
            (anchor, anchor / span.powf(*s))
        })
        .collect();

    let mut logs: Vec<f64> = series
        .iter()
        .flat_map(|(_, v)| v.iter().copied())
        .filter(|v| *v > 0.0 && v.is_finite())
        .map(f64::log10)
        .collect();
    logs.extend(guide_pts.iter().flat_map(|(a, b)| [a.log10(), b.log10()]));
    let ylo = logs.iter().cloned().fold(f64::INFINITY, f64::min).floor();
    let mut yhi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil();
    if yhi <= ylo {
        yhi = ylo + 1.0;
    }
    let xlo = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 0.25;
    let mut xhi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.25;
    if xhi <= xlo {
        xhi = xlo + 1.0;
    }
    let px = |x: f64| ml + (x - xlo) / (xhi - xlo) * (w - ml - mr);
    let py = |ly: f64| mt + (yhi - ly) / (yhi - ylo) * (ht - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{ht}" viewBox="0 0 {w} {ht}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{ht}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, escape(title));
    let (x0, x1, y0, y1) = (px(xlo), px(xhi), py(ylo), py(yhi));
    let _ = writeln!(s, r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    for d in (ylo as i64)..=(yhi as i64) {
        let y = py(d as f64);
        let _ = writeln!(s, r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="#ddd"/>"##);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{d}</text>"#, x0 - 6.0, y + 4.0);
    }
    for (&x, &hv) in xs.iter().zip(h) {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">1/{}</text>"#, px(x), y0 + 18.0, (1.0 / hv).round());
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">h</text>"#, (x0 + x1) / 2.0, ht - 16.0);
    let _ = writeln!(s, r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">error</text>"#, (y0 + y1) / 2.0, (y0 + y1) / 2.0);

    let (gx0, gx1) = (px(xs[0]), px(xs[xs.len() - 1]));
    for ((_, label), (a, b)) in guides.iter().zip(&guide_pts) {
        let (ga, gb) = (py(a.log10()), py(b.log10()));
        let _ = writeln!(s, r##"<line x1="{gx0:.1}" y1="{ga:.1}" x2="{gx1:.1}" y2="{gb:.1}" stroke="#888" stroke-dasharray="5,4"/>"##);
        let _ = writeln!(s, r##"<text x="{:.1}" y="{:.1}" fill="#666">{}</text>"##, gx1 + 4.0, gb + 4.0, escape(label));
    }

    for (i, (name, v)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(v)
            .filter(|(_, y)| **y > 0.0 && y.is_finite())
            .map(|(x, y)| format!("{:.1},{:.1}", px(*x), py(y.log10())))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
        for p in &pts {
            let (cx, cy) = p.split_once(',').expect("point");
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#);
        }
        let ly = mt + 16.0 + 18.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#, w - mr + 20.0, w - mr + 44.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, w - mr + 50.0, ly + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn convergence_svg(title: &str, table: &Table) -> String {
    let h = table.column("h").unwrap_or_default();
    let series: Vec<(&str, Vec<f64>)> = ["err_l2", "err_curl", "err_curl_h1", "err_energy"]
        .iter()
        .map(|c| (*c, table.column(c).unwrap_or_default()))
        .collect();
    svg_plot(title, &h, &series)
}

pub fn interpolation_svg(title: &str, table: &Table) -> String {
    let h = table.column("h").unwrap_or_default();
    let series: Vec<(&str, Vec<f64>)> = ["err_l2_R", "err_curl_R", "err_l2_I", "err_curl_I"]
        .iter()
        .map(|c| (*c, table.column(c).unwrap_or_default()))
        .collect();
    svg_plot(title, &h, &series)
}

/// `<prefix>.<ext>`, keeping any dots already in the prefix.
pub fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)
}
