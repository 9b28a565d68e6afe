//! Output formats.
//!
//! * OBJ: `v x y z` per grid node in row-major order (u fastest), then two
//!   triangles per cell, 1-based, counter-clockwise in the (u, v) orientation.
//! * CSV: a header row, then one record per sample; floats in shortest
//!   round-trip form.
//! * JSON: objects carry `"schema": 1` at the top level.
//!
//! Writers only format; every number is computed before they are called, so
//! identical input gives identical bytes.

use std::io::{self, Write};

use serde_json::Value;

pub const SCHEMA: u64 = 1;

/// Triangulated `nu × nv` node grid.
pub fn write_obj<W: Write>(mut w: W, nu: usize, nv: usize, vertices: &[[f64; 3]]) -> io::Result<()> {
    if vertices.len() != nu * nv {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "vertex count does not match the grid"));
    }
    writeln!(w, "# dmin grid mesh {nu}x{nv}")?;
    for [x, y, z] in vertices {
        writeln!(w, "v {x:?} {y:?} {z:?}")?;
    }
    for j in 0..nv.saturating_sub(1) {
        for i in 0..nu.saturating_sub(1) {
            let k00 = j * nu + i + 1;
            let (k10, k01, k11) = (k00 + 1, k00 + nu, k00 + nu + 1);
            writeln!(w, "f {k00} {k10} {k11}")?;
            writeln!(w, "f {k00} {k11} {k01}")?;
        }
    }
    w.flush()
}

/// Header plus rows of preformatted fields.
pub fn write_csv<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_io)?;
    for row in rows {
        out.write_record(&row).map_err(csv_io)?;
    }
    out.flush()
}

// Keeps the io error kind, which the generic conversion loses.
fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Shortest round-trip text, in exponent form for very small or large
/// magnitudes; empty for NaN so CSV readers see a missing value.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:?}")
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write>(mut w: W, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

/// Grid-sampled prescribed forms read from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FormsTable {
    pub us: Vec<f64>,
    pub vs: Vec<f64>,
    /// Row-major, `u` fastest.
    pub h: [Vec<f64>; 3],
}

/// Reads columns `u, v, h11, h12, h22` (any order, by header name). Rows may
/// come in any order but must cover a full tensor grid exactly once.
pub fn read_forms_csv<R: io::Read>(r: R) -> Result<FormsTable, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| format!("missing column `{name}`"))
    };
    let idx = [col("u")?, col("v")?, col("h11")?, col("h12")?, col("h22")?];
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let mut vals = [0.0; 5];
        for (slot, &k) in vals.iter_mut().zip(&idx) {
            let field = rec.get(k).ok_or_else(|| format!("record {}: too few fields", line + 1))?;
            *slot = field.parse().map_err(|e| format!("record {}: `{field}`: {e}", line + 1))?;
        }
        rows.push(vals);
    }
    let axis = |k: usize| {
        let mut a: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        a.sort_by(f64::total_cmp);
        a.dedup();
        a
    };
    let (us, vs) = (axis(0), axis(1));
    if us.len() * vs.len() != rows.len() {
        return Err(format!("{} records do not form a full {}x{} grid", rows.len(), us.len(), vs.len()));
    }
    let mut h = [vec![f64::NAN; rows.len()], vec![f64::NAN; rows.len()], vec![f64::NAN; rows.len()]];
    for r in &rows {
        let i = us.binary_search_by(|x| x.total_cmp(&r[0])).unwrap();
        let j = vs.binary_search_by(|x| x.total_cmp(&r[1])).unwrap();
        let k = j * us.len() + i;
        if !h[0][k].is_nan() {
            return Err(format!("duplicate sample at ({}, {})", r[0], r[1]));
        }
        for c in 0..3 {
            h[c][k] = r[2 + c];
        }
    }
    Ok(FormsTable { us, vs, h })
}

/// Checks that sorted axis values are equally spaced.
pub fn uniform(axis: &[f64]) -> bool {
    if axis.len() < 2 {
        return false;
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    axis.iter().enumerate().all(|(k, x)| (x - (axis[0] + k as f64 * step)).abs() <= 1e-9 * (1.0 + x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn obj_indices_and_orientation() {
        let verts: Vec<[f64; 3]> = (0..6).map(|k| [(k % 3) as f64, (k / 3) as f64, 0.0]).collect();
        let mut buf = Vec::new();
        write_obj(&mut buf, 3, 2, &verts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let faces: Vec<[usize; 3]> = text
            .lines()
            .filter_map(|l| l.strip_prefix("f "))
            .map(|l| {
                let v: Vec<usize> = l.split(' ').map(|x| x.parse().unwrap()).collect();
                [v[0], v[1], v[2]]
            })
            .collect();
        assert_eq!(faces, vec![[1, 2, 5], [1, 5, 4], [2, 3, 6], [2, 6, 5]]);
        // Signed area in the (u, v) plane is positive for every face.
        for f in faces {
            let p = f.map(|k| verts[k - 1]);
            let area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
            assert!(area > 0.0);
        }
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 6);
    }

    #[test]
    fn obj_rejects_wrong_count() {
        assert!(write_obj(Vec::new(), 3, 3, &[[0.0; 3]; 4]).is_err());
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1e-300, 1.0 / 3.0, 12345.678, f64::INFINITY] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::NAN), "");
        assert_eq!(num(1.1102230246251565e-16), "1.1102230246251565e-16");
    }

    #[test]
    fn forms_csv_any_order() {
        let src = "v,u,h11,h12,h22\n0,1,3,0,0\n0,0,1,0,0\n1,0,2,0,0\n1,1,4,0,0\n";
        let t = read_forms_csv(src.as_bytes()).unwrap();
        assert_eq!(t.us, vec![0.0, 1.0]);
        assert_eq!(t.h[0], vec![1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn forms_csv_errors() {
        assert!(read_forms_csv("u,v,h11,h12\n0,0,1,1\n".as_bytes()).unwrap_err().contains("h22"));
        let partial = "u,v,h11,h12,h22\n0,0,1,0,0\n1,0,1,0,0\n0,1,1,0,0\n";
        assert!(read_forms_csv(partial.as_bytes()).unwrap_err().contains("full"));
        let dup = "u,v,h11,h12,h22\n0,0,1,0,0\n0,0,1,0,0\n1,1,1,0,0\n1,0,1,0,0\n";
        assert!(read_forms_csv(dup.as_bytes()).is_err());
    }

    #[test]
    fn uniform_axes() {
        assert!(uniform(&[0.0, 0.5, 1.0]));
        assert!(!uniform(&[0.0, 0.4, 1.0]));
    }
}
