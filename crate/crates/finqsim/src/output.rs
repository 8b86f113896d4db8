//! CSV and SVG emitters.
//!
//! CSV numbers use `{:.16e}` (17 significant digits, round-trip exact) and
//! LF line endings. SVGs are standalone with a fixed 800×600 viewBox.
//! Heatmaps use one of two fixed colormaps:
//! - sequential: linear interpolation through #440154, #3b528b, #21918c,
//!   #5ec962, #fde725 (low to high), applied to log10 z;
//! - diverging, for signed data: #2166ac at −max|z|, #f7f7f7 at 0, #b2182b
//!   at +max|z|, with the zero level traced as a black contour.
//!
//! Log axes span at most [`LOG_DECADES`] decades below the largest value;
//! smaller points are left out of the path.

use crate::error::{CliError, CliResult};
use nalgebra::DMatrix;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// `{:.16e}`, with −0 printed as 0.
pub fn fmt_num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| Cell::Num(v)).collect());
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        self.rows
            .iter()
            .map(|r| match r[k] {
                Cell::Num(v) => Some(v),
                Cell::Text(_) => None,
            })
            .collect()
    }

    /// Rows holding a NaN or infinite number.
    pub fn check_finite(&self, what: &str) -> CliResult<()> {
        let bad: Vec<usize> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.iter().any(|c| matches!(c, Cell::Num(v) if !v.is_finite())))
            .map(|(i, _)| i)
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::NonFinite { what: what.to_string(), indices: bad })
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => fmt_num(*v),
                    Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Fails early when `path` cannot be created because its directory is
/// missing or is not a directory.
pub fn check_writable(path: &Path) -> CliResult<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    if !parent.is_dir() {
        return Err(CliError::Write { path: path.display().to_string(), reason: format!("{} is not a directory", parent.display()) });
    }
    if path.is_dir() {
        return Err(CliError::Write { path: path.display().to_string(), reason: "is a directory".into() });
    }
    Ok(())
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    check_writable(path)?;
    std::fs::write(path, contents).map_err(|e| CliError::Write { path: path.display().to_string(), reason: e.to_string() })
}

/// Writes to stdout. A closed pipe (`| head`) ends output quietly.
pub fn print(text: &str) -> CliResult<()> {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Write { path: "<stdout>".into(), reason: e.to_string() }),
        _ => Ok(()),
    }
}

/// `prefix` with `ext` appended (`out/fig` → `out/fig.csv`).
pub fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 100.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 80.0;
pub const LOG_DECADES: f64 = 15.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    /// Label including units, e.g. `Gamma (meV)`.
    pub label: String,
    pub log: bool,
}

impl Axis {
    pub fn linear(label: &str) -> Self {
        Axis { label: label.to_string(), log: false }
    }

    pub fn log(label: &str) -> Self {
        Axis { label: label.to_string(), log: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn finite_check(what: &str, values: &[f64]) -> CliResult<()> {
    let bad: Vec<usize> = values.iter().enumerate().filter(|(_, v)| !v.is_finite()).map(|(i, _)| i).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::NonFinite { what: what.to_string(), indices: bad })
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Short tick label with at most four significant digits.
pub fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let digits = (3 - a.log10().floor() as i32).max(0) as usize;
        let s = format!("{v:.digits$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.2e}")
    }
}

/// Maps data to pixels along one axis.
#[derive(Debug, Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    p0: f64,
    p1: f64,
    log: bool,
}

impl Scale {
    fn new(mut lo: f64, mut hi: f64, p0: f64, p1: f64, log: bool) -> Self {
        if log {
            lo = lo.log10();
            hi = hi.log10();
        }
        if hi <= lo {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            lo -= pad;
            hi += pad;
        }
        Scale { lo, hi, p0, p1, log }
    }

    fn map(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let step = ((b - a) / 6 + 1).max(1);
            let mut t: Vec<f64> = (a..=b).step_by(step as usize).map(|e| 10f64.powi(e)).collect();
            if t.is_empty() {
                t = vec![10f64.powf(self.lo), 10f64.powf(self.hi)];
            }
            t
        } else {
            (0..5).map(|i| self.lo + (self.hi - self.lo) * i as f64 / 4.0).collect()
        }
    }
}

fn frame(out: &mut String, title: &str, x: &Axis, y: &Axis, sx: &Scale, sy: &Scale) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(out, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    for t in sx.ticks() {
        let px = sx.map(t);
        let _ = writeln!(out, r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/>"#, y0 + 6.0);
        let _ = writeln!(out, r#"<text x="{px:.2}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, y0 + 22.0, tick_label(t));
    }
    for t in sy.ticks() {
        let py = sy.map(t);
        let _ = writeln!(out, r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#, x0 - 6.0);
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}" font-size="12" text-anchor="end">{}</text>"#, x0 - 9.0, py + 4.0, tick_label(t));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="15" text-anchor="middle">{}</text>"#, 0.5 * (x0 + x1), HEIGHT - 25.0, escape(&x.label));
    let _ = writeln!(
        out,
        r#"<text x="25" y="{0}" font-size="15" text-anchor="middle" transform="rotate(-90 25 {0})">{1}</text>"#,
        0.5 * (y0 + y1),
        escape(&y.label)
    );
    let _ = writeln!(out, r#"<text x="{}" y="30" font-size="16" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
}

fn open_svg() -> String {
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n")
}

/// One `<path>` per series. On a log axis, non-positive points are
/// skipped and break the line.
pub fn line_plot(title: &str, series: &[Series], x: &Axis, y: &Axis) -> CliResult<String> {
    if series.is_empty() {
        return Err(CliError::Usage("line plot needs at least one series".into()));
    }
    for s in series {
        finite_check(&format!("series {} x", s.label), &s.x)?;
        finite_check(&format!("series {} y", s.label), &s.y)?;
        if s.x.len() != s.y.len() {
            return Err(CliError::Usage(format!("series {}: x and y lengths differ", s.label)));
        }
    }
    let positive = |v: f64, log: bool| !log || v > 0.0;
    let xs: Vec<f64> = series.iter().flat_map(|s| s.x.iter().copied()).filter(|&v| positive(v, x.log)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.y.iter().copied()).filter(|&v| positive(v, y.log)).collect();
    if xs.is_empty() || ys.is_empty() {
        return Err(CliError::Usage(format!("{title}: nothing to plot on the chosen axes")));
    }
    let bounds = |v: &[f64]| v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    let (mut xl, xh) = bounds(&xs);
    let (mut yl, yh) = bounds(&ys);
    if x.log {
        xl = xl.max(xh * 10f64.powf(-LOG_DECADES));
    }
    if y.log {
        yl = yl.max(yh * 10f64.powf(-LOG_DECADES));
    }
    let keep = |v: f64, log: bool, lo: f64| !log || v >= lo;
    let sx = Scale::new(xl, xh, LEFT, WIDTH - RIGHT, x.log);
    let sy = Scale::new(yl, yh, HEIGHT - BOTTOM, TOP, y.log);
    let mut out = open_svg();
    frame(&mut out, title, x, y, &sx, &sy);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        let mut pen_down = false;
        for (&a, &b) in s.x.iter().zip(&s.y) {
            if !keep(a, x.log, xl) || !keep(b, y.log, yl) {
                pen_down = false;
                continue;
            }
            let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, sx.map(a), sy.map(b));
            pen_down = true;
        }
        let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, d.trim_end());
        let ly = TOP + 15.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 10.0;
        let _ = writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 18.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, lx + 22.0, ly + 4.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

const SEQUENTIAL: [(u8, u8, u8); 5] = [(0x44, 0x01, 0x54), (0x3b, 0x52, 0x8b), (0x21, 0x91, 0x8c), (0x5e, 0xc9, 0x62), (0xfd, 0xe7, 0x25)];
const DIVERGING: [(u8, u8, u8); 3] = [(0x21, 0x66, 0xac), (0xf7, 0xf7, 0xf7), (0xb2, 0x18, 0x2b)];

fn interpolate(stops: &[(u8, u8, u8)], t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (stops.len() - 1) as f64;
    let k = (t.floor() as usize).min(stops.len() - 2);
    let f = t - k as f64;
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
    let (a, b) = (stops[k], stops[k + 1]);
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// How heatmap values map to colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorScale {
    /// Sequential map on log10 z; needs z > 0.
    Log,
    Diverging,
}

/// Colour of `v` under the documented colormaps. `lo` and `hi` are the data
/// bounds, already in log10 for [`ColorScale::Log`].
pub fn colormap(v: f64, lo: f64, hi: f64, diverging: bool) -> String {
    if diverging {
        let m = lo.abs().max(hi.abs());
        let t = if m > 0.0 { 0.5 + 0.5 * v / m } else { 0.5 };
        interpolate(&DIVERGING, t)
    } else {
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        interpolate(&SEQUENTIAL, t)
    }
}

/// Heatmap of `z` with rows along `ys` and columns along `xs`. Grids must be
/// ascending. With a diverging scale, the zero level is drawn as a contour
/// along the cell edges where the sign changes.
#[allow(clippy::too_many_arguments)]
pub fn heatmap(title: &str, xs: &[f64], ys: &[f64], z: &DMatrix<f64>, x: &Axis, y: &Axis, z_label: &str, scale: ColorScale) -> CliResult<String> {
    let diverging = scale == ColorScale::Diverging;
    if z.nrows() != ys.len() || z.ncols() != xs.len() || xs.is_empty() || ys.is_empty() {
        return Err(CliError::Usage(format!("{title}: grid and matrix shapes differ")));
    }
    finite_check(&format!("{title} x grid"), xs)?;
    finite_check(&format!("{title} y grid"), ys)?;
    let flat: Vec<f64> = (0..z.nrows()).flat_map(|r| (0..z.ncols()).map(move |c| (r, c))).map(|(r, c)| z[(r, c)]).collect();
    finite_check(&format!("{title} values (row-major)"), &flat)?;
    let z = if scale == ColorScale::Log {
        let bad: Vec<usize> = flat.iter().enumerate().filter(|(_, v)| **v <= 0.0).map(|(i, _)| i).collect();
        if !bad.is_empty() {
            return Err(CliError::Usage(format!("{title}: log colour scale needs z > 0; offending indices {bad:?}")));
        }
        z.map(f64::log10)
    } else {
        z.clone()
    };
    let flat: Vec<f64> = z.iter().copied().collect();
    let (lo, hi) = flat.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));

    // Cell edges halfway between grid points.
    let edges = |g: &[f64]| -> Vec<f64> {
        if g.len() == 1 {
            return vec![g[0] - 0.5, g[0] + 0.5];
        }
        let mut e = vec![g[0] - 0.5 * (g[1] - g[0])];
        e.extend(g.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        e.push(g[g.len() - 1] + 0.5 * (g[g.len() - 1] - g[g.len() - 2]));
        e
    };
    let (ex, ey) = (edges(xs), edges(ys));
    let sx = Scale::new(ex[0], ex[ex.len() - 1], LEFT, WIDTH - RIGHT, x.log);
    let sy = Scale::new(ey[0], ey[ey.len() - 1], HEIGHT - BOTTOM, TOP, y.log);
    let mut out = open_svg();
    out.push_str("<g shape-rendering=\"crispEdges\">\n");
    for r in 0..ys.len() {
        for c in 0..xs.len() {
            let (px0, px1) = (sx.map(ex[c]), sx.map(ex[c + 1]));
            let (py0, py1) = (sy.map(ey[r + 1]), sy.map(ey[r]));
            let _ = writeln!(
                out,
                r#"<rect x="{px0:.2}" y="{py0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                px1 - px0 + 0.05,
                py1 - py0 + 0.05,
                colormap(z[(r, c)], lo, hi, diverging)
            );
        }
    }
    out.push_str("</g>\n");
    if diverging {
        let mut d = String::new();
        for r in 0..ys.len() {
            for c in 0..xs.len() {
                if c + 1 < xs.len() && z[(r, c)].signum() != z[(r, c + 1)].signum() {
                    let px = sx.map(ex[c + 1]);
                    let _ = write!(d, "M{px:.2},{:.2} L{px:.2},{:.2} ", sy.map(ey[r]), sy.map(ey[r + 1]));
                }
                if r + 1 < ys.len() && z[(r, c)].signum() != z[(r + 1, c)].signum() {
                    let py = sy.map(ey[r + 1]);
                    let _ = write!(d, "M{:.2},{py:.2} L{:.2},{py:.2} ", sx.map(ex[c]), sx.map(ex[c + 1]));
                }
            }
        }
        if !d.is_empty() {
            let _ = writeln!(out, r#"<path class="zero-contour" d="{}" fill="none" stroke="black" stroke-width="1"/>"#, d.trim_end());
        }
    }
    frame(&mut out, title, x, y, &sx, &sy);
    // Colour bar.
    let (bx, bw, b0, b1) = (WIDTH - RIGHT + 20.0, 18.0, HEIGHT - BOTTOM, TOP);
    let n = 64;
    for k in 0..n {
        let t0 = k as f64 / n as f64;
        let v = if diverging {
            let m = lo.abs().max(hi.abs());
            -m + 2.0 * m * (t0 + 0.5 / n as f64)
        } else {
            lo + (hi - lo) * (t0 + 0.5 / n as f64)
        };
        let h = (b0 - b1) / n as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{:.2}" width="{bw}" height="{:.2}" fill="{}"/>"#,
            b0 - (k + 1) as f64 * h,
            h + 0.05,
            colormap(v, lo, hi, diverging)
        );
    }
    let (vlo, vhi) = if diverging {
        let m = lo.abs().max(hi.abs());
        (-m, m)
    } else {
        (lo, hi)
    };
    let show = |v: f64| if scale == ColorScale::Log { tick_label(10f64.powf(v)) } else { tick_label(v) };
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, bx + bw + 4.0, b0, show(vlo));
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, bx + bw + 4.0, b1 + 8.0, show(vhi));
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, bx + 9.0, b1 - 10.0, escape(z_label));
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_doubles() {
        let mut t = Table::new(&["a", "b"]);
        let v = [0.1 + 0.2, std::f64::consts::PI];
        t.push_nums(&v);
        let csv = t.to_csv();
        assert!(!csv.contains('\r'));
        let row = csv.lines().nth(1).unwrap();
        let back: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(back, v);
    }

    #[test]
    fn non_finite_rows_are_listed() {
        let mut t = Table::new(&["a"]);
        for v in [1.0, f64::NAN, 2.0, f64::INFINITY] {
            t.push_nums(&[v]);
        }
        match t.check_finite("t") {
            Err(CliError::NonFinite { indices, .. }) => assert_eq!(indices, vec![1, 3]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_series_is_one_path() {
        let s = Series { label: "s".into(), x: vec![0.0, 1.0, 2.0], y: vec![1.0, 0.0, 1.0] };
        let svg = line_plot("t", &[s], &Axis::linear("x (nm)"), &Axis::linear("y (eV)")).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
        assert!(svg.contains("x (nm)") && svg.contains("y (eV)"));
    }

    #[test]
    fn svg_rejects_non_finite() {
        let s = Series { label: "s".into(), x: vec![0.0, 1.0], y: vec![f64::NAN, 0.0] };
        assert!(matches!(line_plot("t", &[s], &Axis::linear("x"), &Axis::linear("y")), Err(CliError::NonFinite { indices, .. }) if indices == vec![0]));
        let z = DMatrix::from_row_slice(1, 2, &[1.0, f64::INFINITY]);
        assert!(matches!(
            heatmap("h", &[0.0, 1.0], &[0.0], &z, &Axis::linear("x"), &Axis::linear("y"), "z", ColorScale::Log),
            Err(CliError::NonFinite { indices, .. }) if indices == vec![1]
        ));
    }

    #[test]
    fn diverging_map_draws_zero_contour() {
        let z = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, -1.0]);
        let svg = heatmap("h", &[0.0, 1.0], &[0.0, 1.0], &z, &Axis::linear("x"), &Axis::linear("y"), "z", ColorScale::Diverging).unwrap();
        assert!(heatmap("h", &[0.0, 1.0], &[0.0, 1.0], &z, &Axis::linear("x"), &Axis::linear("y"), "z", ColorScale::Log).is_err());
        assert!(svg.contains("zero-contour"));
        assert_eq!(colormap(0.0, -1.0, 1.0, true), "#f7f7f7");
        assert_eq!(colormap(1.0, 0.0, 1.0, false), "#fde725");
    }

    #[test]
    fn tick_labels_are_short() {
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(28.0), "28");
        assert_eq!(tick_label(1.5e-6), "1.50e-6");
    }
}
