//! CSV and SVG emission.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use entropic_core::LogBase;

use crate::{CliError, Result};

/// A sweep result: parameter columns followed by value columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub param_names: Vec<String>,
    pub columns: Vec<String>,
    /// Each row holds `param_names.len() + columns.len()` cells.
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn header(&self) -> Vec<&str> {
        self.param_names
            .iter()
            .chain(&self.columns)
            .map(String::as_str)
            .collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header().iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `{:.16e}` keeps 17 significant digits, enough to round-trip every f64.
pub fn format_cell(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_csv<W: Write>(table: &Table, out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(table.header())?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| format_cell(x)))?;
    }
    w.flush()
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn write_csv(table: &Table, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(io_err(p))?;
            emit_csv(table, std::io::BufWriter::new(file)).map_err(io_err(p))
        }
        None => emit_csv(table, std::io::stdout().lock()).map_err(io_err(Path::new("<stdout>"))),
    }
}

/// Inverse of [`emit_csv`]; `n_params` leading columns are parameters.
pub fn parse_csv(text: &str, n_params: usize) -> std::result::Result<Table, String> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    if header.len() < n_params {
        return Err(format!("header has {} columns, expected at least {n_params}", header.len()));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        rows.push(
            rec.iter()
                .map(|c| c.parse::<f64>().map_err(|e| format!("cell {c:?}: {e}")))
                .collect::<std::result::Result<Vec<_>, _>>()?,
        );
    }
    Ok(Table {
        param_names: header[..n_params].to_vec(),
        columns: header[n_params..].to_vec(),
        rows,
    })
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

/// A static line chart: x is the first parameter column, one polyline per value
/// column. Non-finite cells break the line.
pub fn emit_svg_lines(table: &Table, log_base: LogBase, title: &str, notes: &[String]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const L: f64 = 80.0;
    const R: f64 = 200.0;
    const T: f64 = 50.0;
    const B: f64 = 60.0;
    let (pw, ph) = (W - L - R, H - T - B);

    let n_params = table.param_names.len();
    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let finite = |v: &f64| v.is_finite();
    let (x_lo, x_hi) = xs.iter().filter(|v| finite(v)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (mut y_lo, mut y_hi) = table
        .rows
        .iter()
        .flat_map(|r| r[n_params..].iter())
        .filter(|v| finite(v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (0.0, 1.0);
    }
    if y_hi - y_lo < 1e-12 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
    let sx = |x: f64| L + (x - x_lo) / x_span * pw;
    let sy = |y: f64| T + (y_hi - y) / (y_hi - y_lo) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    if !notes.is_empty() {
        let _ = writeln!(s, "<desc>{}</desc>", escape(&notes.join("\n")));
    }
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="25" text-anchor="middle" font-size="14">{}</text>"#, L + pw / 2.0, escape(title));

    // Axes, grid and tick labels.
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1" fill="none">"#);
    let _ = writeln!(s, r#"<line x1="{L}" y1="{}" x2="{}" y2="{}"/>"#, T + ph, L + pw, T + ph);
    let _ = writeln!(s, r#"<line x1="{L}" y1="{T}" x2="{L}" y2="{}"/>"#, T + ph);
    let _ = writeln!(s, "</g>");
    for x in ticks(x_lo.min(x_hi), x_hi.max(x_lo)) {
        let px = sx(x);
        let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{T}" x2="{px:.2}" y2="{}" stroke="#ddd"/>"##, T + ph);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{}" text-anchor="middle">{x:.3}</text>"#, T + ph + 18.0);
    }
    for y in ticks(y_lo, y_hi) {
        let py = sy(y);
        let _ = writeln!(s, r##"<line x1="{L}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="#ddd"/>"##, L + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{y:.4}</text>"#, L - 6.0, py + 4.0);
    }
    if y_lo < 0.0 && y_hi > 0.0 {
        let _ = writeln!(s, r#"<line x1="{L}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="black" stroke-dasharray="4 3"/>"#, sy(0.0), L + pw);
    }
    let x_name = table.param_names.first().map(String::as_str).unwrap_or("x");
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, L + pw / 2.0, H - 15.0, escape(x_name));
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">value (log base {1}, {2})</text>"#,
        T + ph / 2.0,
        log_base,
        log_base.unit()
    );

    for (c, name) in table.columns.iter().enumerate() {
        let color = PALETTE[c % PALETTE.len()];
        let mut segments: Vec<Vec<String>> = vec![vec![]];
        for row in &table.rows {
            let (x, y) = (row[0], row[n_params + c]);
            if x.is_finite() && y.is_finite() {
                segments.last_mut().expect("nonempty").push(format!("{:.2},{:.2}", sx(x), sy(y)));
            } else if !segments.last().expect("nonempty").is_empty() {
                segments.push(vec![]);
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                seg.join(" ")
            );
        }
        let ly = T + 10.0 + 20.0 * c as f64;
        let lx = L + pw + 15.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 25.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, ly + 4.0, escape(name));
    }
    let _ = writeln!(s, "</svg>");
    s
}

pub fn write_svg(table: &Table, log_base: LogBase, title: &str, notes: &[String], path: &Path) -> Result<()> {
    std::fs::write(path, emit_svg_lines(table, log_base, title, notes)).map_err(io_err(path))
}
