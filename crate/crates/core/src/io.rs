//! File formats shared with the command-line tool.
//!
//! All CSV output is comma-separated with LF line endings, a header row and
//! floats printed by [`fmt_f64`].

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::combinatorics::{EntringerTable, LinearExtensionTable};
use crate::geometry::Point3;
use crate::{Error, Result};

/// 17 significant digits in the style of C's `%.17g`: fixed notation for
/// decimal exponents in `[-4, 17)`, otherwise `d.ddde±XX`, trailing zeros
/// removed. Every `f64` round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse '{field}' as a number")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonFormat {
    /// Header `x,y,z`, then one block of `n` rows per polygon with blocks
    /// separated by a blank line.
    Csv,
    /// One JSON object per line: `n`, `vertices`, `seed`, `index`.
    Jsonl,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonRecord {
    pub n: usize,
    pub vertices: Vec<[f64; 3]>,
    pub seed: u64,
    pub index: u64,
}

/// Streams polygons in either format.
pub struct PolygonWriter<W: Write> {
    out: W,
    format: PolygonFormat,
    written: u64,
}

impl<W: Write> PolygonWriter<W> {
    pub fn new(out: W, format: PolygonFormat) -> Result<Self> {
        let mut out = out;
        if format == PolygonFormat::Csv {
            out.write_all(b"x,y,z\n")?;
        }
        Ok(Self {
            out,
            format,
            written: 0,
        })
    }

    /// Continues a stream that already holds `written` polygons (and the
    /// header): used to fill per-worker buffers that are concatenated later.
    pub fn resume(out: W, format: PolygonFormat, written: u64) -> Self {
        Self { out, format, written }
    }

    pub fn write(&mut self, vertices: &[Point3], seed: u64, index: u64) -> Result<()> {
        match self.format {
            PolygonFormat::Csv => {
                if self.written > 0 {
                    self.out.write_all(b"\n")?;
                }
                for v in vertices {
                    writeln!(self.out, "{},{},{}", fmt_f64(v.x), fmt_f64(v.y), fmt_f64(v.z))?;
                }
            }
            PolygonFormat::Jsonl => {
                let record = PolygonRecord {
                    n: vertices.len(),
                    vertices: vertices.iter().map(|v| [v.x, v.y, v.z]).collect(),
                    seed,
                    index,
                };
                serde_json::to_writer(&mut self.out, &record)?;
                self.out.write_all(b"\n")?;
            }
        }
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Reads every polygon from a file in the given format.
pub fn read_polygons<R: BufRead>(input: R, format: PolygonFormat) -> Result<Vec<Vec<Point3>>> {
    match format {
        PolygonFormat::Csv => read_polygons_csv(input),
        PolygonFormat::Jsonl => read_polygons_jsonl(input),
    }
}

fn read_polygons_csv<R: BufRead>(input: R) -> Result<Vec<Vec<Point3>>> {
    let mut polygons = Vec::new();
    let mut current = Vec::new();
    let mut header_seen = false;
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if !header_seen {
            if line.is_empty() {
                continue;
            }
            if line.replace(' ', "") != "x,y,z" {
                return Err(Error::Parse(format!("line {}: expected header x,y,z", k + 1)));
            }
            header_seen = true;
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                polygons.push(std::mem::take(&mut current));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 fields, found {}", k + 1, fields.len())));
        }
        current.push(Point3::new(
            parse_f64(fields[0], k + 1)?,
            parse_f64(fields[1], k + 1)?,
            parse_f64(fields[2], k + 1)?,
        ));
    }
    if !current.is_empty() {
        polygons.push(current);
    }
    Ok(polygons)
}

fn read_polygons_jsonl<R: BufRead>(input: R) -> Result<Vec<Vec<Point3>>> {
    let mut polygons = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PolygonRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", k + 1)))?;
        if rec.vertices.len() != rec.n {
            return Err(Error::Parse(format!(
                "line {}: n = {} but {} vertices",
                k + 1,
                rec.n,
                rec.vertices.len()
            )));
        }
        polygons.push(rec.vertices.iter().map(|v| Point3::new(v[0], v[1], v[2])).collect());
    }
    Ok(polygons)
}

fn numbered_header(prefix: &str, m: usize) -> impl Iterator<Item = String> + '_ {
    (1..=m).map(move |i| format!("{prefix}_{i}"))
}

/// Rows `d_1..d_m, theta_1..theta_m`, one per polygon, all with the same `m`.
pub fn write_action_angle_csv<'a, W: Write>(
    out: W,
    m: usize,
    rows: impl IntoIterator<Item = (&'a [f64], &'a [f64])>,
) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(numbered_header("d", m).chain(numbered_header("theta", m)))?;
    for (d, theta) in rows {
        if d.len() != m || theta.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: d.len().max(theta.len()),
            });
        }
        w.write_record(d.iter().chain(theta).map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_action_angle_csv`]: `(d, theta)` per row.
pub fn read_action_angle_csv<R: std::io::Read>(input: R) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let cols = headers.len();
    let m = cols / 2;
    let expected: Vec<String> = numbered_header("d", m).chain(numbered_header("theta", m)).collect();
    if cols % 2 != 0 || m == 0 || headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Parse(
            "action-angle header must be d_1..d_m,theta_1..theta_m".into(),
        ));
    }
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|f| parse_f64(f, k + 2))
            .collect::<Result<Vec<f64>>>()?;
        let theta = vals[m..].to_vec();
        let mut d = vals;
        d.truncate(m);
        rows.push((d, theta));
    }
    Ok(rows)
}

/// Rows `d_1..d_m`, one per sample.
pub struct DiagonalWriter<W: Write> {
    w: csv::Writer<W>,
}

impl<W: Write> DiagonalWriter<W> {
    pub fn new(out: W, m: usize) -> Result<Self> {
        let mut w = csv_writer(out);
        w.write_record(numbered_header("d", m))?;
        Ok(Self { w })
    }

    pub fn write(&mut self, d: &[f64]) -> Result<()> {
        self.w.write_record(d.iter().map(|&x| fmt_f64(x)))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.w.flush()?;
        Ok(())
    }
}

/// `n,k,value` for every Entringer number in the table.
pub fn write_entringer_csv<W: Write>(out: W, table: &EntringerTable) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "k", "value"])?;
    for (n, row) in table.rows().iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            w.write_record([n.to_string(), k.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `n,i,value` for every `e(Z_{n,i})` in the table.
pub fn write_extensions_csv<W: Write>(out: W, table: &LinearExtensionTable) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["n", "i", "value"])?;
    for (n, i, v) in table.entries() {
        w.write_record([n.to_string(), i.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a header and rows of preformatted fields.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// `(n, mean)` pairs from a CSV with columns `n` and `mean_turning_angle`;
/// a two-column file with any header is read positionally.
pub fn read_fit_points<R: std::io::Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let (ni, yi) = match (find("n"), find("mean_turning_angle")) {
        (Some(a), Some(b)) => (a, b),
        _ if headers.len() == 2 => (0, 1),
        _ => {
            return Err(Error::Parse(
                "fit input needs columns n and mean_turning_angle".into(),
            ))
        }
    };
    let mut points = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let get = |i: usize| {
            rec.get(i)
                .ok_or_else(|| Error::Parse(format!("line {}: missing column", k + 2)))
                .and_then(|f| parse_f64(f, k + 2))
        };
        points.push((get(ni)?, get(yi)?));
    }
    Ok(points)
}
