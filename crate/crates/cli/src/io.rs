//! Output files: CSV tables and a minimal SVG writer, both written atomically.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

/// A CSV table held in memory until it is written out in one piece.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are utf-8")
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Coordinates joined by spaces, for a single CSV field.
pub fn point(p: &[f64]) -> String {
    p.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Files produced by one run, written together at the end.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn table(&mut self, name: &str, table: &Table) {
        self.files.push((name.to_string(), table.to_csv().into_bytes()));
    }

    pub fn text(&mut self, name: &str, text: String) {
        self.files.push((name.to_string(), text.into_bytes()));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn write_all(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            write_atomic(&path, bytes)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// SVG 1.1 document with polylines and circles in data coordinates.
#[derive(Debug, Clone)]
pub struct Svg {
    items: Vec<Item>,
}

#[derive(Debug, Clone)]
enum Item {
    Polyline { points: Vec<[f64; 2]>, stroke: &'static str, closed: bool },
    Circle { center: [f64; 2], radius_px: f64, fill: &'static str },
}

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 20.0;

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn polyline(&mut self, points: &[Vec<f64>], stroke: &'static str, closed: bool) {
        let points = points.iter().map(|p| [p[0], p[1]]).collect();
        self.items.push(Item::Polyline { points, stroke, closed });
    }

    pub fn circle(&mut self, center: &[f64], radius_px: f64, fill: &'static str) {
        self.items.push(Item::Circle { center: [center[0], center[1]], radius_px, fill });
    }

    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut grow = |p: &[f64; 2]| {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        };
        for item in &self.items {
            match item {
                Item::Polyline { points, .. } => points.iter().for_each(&mut grow),
                Item::Circle { center, .. } => grow(center),
            }
        }
        if !lo[0].is_finite() {
            return ([0.0, 0.0], [1.0, 1.0]);
        }
        (lo, hi)
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let s = (CANVAS - 2.0 * MARGIN) / span;
        // y grows upwards in data coordinates
        let map = |p: &[f64; 2]| (MARGIN + (p[0] - lo[0]) * s, CANVAS - MARGIN - (p[1] - lo[1]) * s);
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
        );
        for item in &self.items {
            match item {
                Item::Polyline { points, stroke, closed } => {
                    let coords: Vec<String> = points
                        .iter()
                        .map(|p| {
                            let (x, y) = map(p);
                            format!("{x:.3},{y:.3}")
                        })
                        .collect();
                    let tag = if *closed { "polygon" } else { "polyline" };
                    let _ = writeln!(
                        out,
                        "  <{tag} points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>",
                        coords.join(" ")
                    );
                }
                Item::Circle { center, radius_px, fill } => {
                    let (x, y) = map(center);
                    let _ = writeln!(out, "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{radius_px}\" fill=\"{fill}\"/>");
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}
