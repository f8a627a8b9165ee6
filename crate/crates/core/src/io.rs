//! File formats: sampled curves, frame paths, phase portraits, directrices,
//! stereographic images and knots as CSV; polylines, link diagrams and
//! summaries as JSON.

use crate::curves::TimelikeCurve;
use crate::error::{Error, Result};
use crate::frames::MobiusFrame;
use crate::geometry::EinsteinPoint;
use crate::knots::SpatialKnot;
use crate::symplectic::S3Path;
use nalgebra::Vector3;
use serde::Serialize;
use std::fs::File;
use std::path::Path;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Usage(format!("{}: {e}", path.display()))
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|e| io_err(path, e))
}

fn write_rows(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|x| format!("{x:.17e}"))).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Reads a numeric CSV with the given header; returns the rows.
pub fn read_table(path: &Path, expected: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| io_err(path, e))?;
    let found: Vec<String> = r.headers().map_err(|e| io_err(path, e))?.iter().map(str::to_string).collect();
    if found != expected {
        return Err(Error::Usage(format!("{}: header {found:?}, expected {expected:?}", path.display())));
    }
    let mut rows = vec![];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| io_err(path, format!("row {}: {e}", line + 2))))
            .collect::<Result<Vec<f64>>>()?;
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("{}: non-finite value in row {}", path.display(), line + 2)));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub const CURVE_HEADER: [&str; 6] = ["t", "x0", "x1", "x2", "x3", "x4"];

/// Sampled curve `t,x0..x4` in Poincaré components.
pub fn write_curve_csv(path: &Path, samples: &[(f64, EinsteinPoint)]) -> Result<()> {
    write_rows(path, &header(&CURVE_HEADER), samples.iter().map(|(t, p)| std::iter::once(*t).chain(p.x).collect()))
}

/// Reads `t,x0..x4` samples; `t` must increase strictly.
pub fn read_curve_csv(path: &Path) -> Result<(Vec<f64>, Vec<[f64; 5]>)> {
    let rows = read_table(path, &CURVE_HEADER)?;
    let ts: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    if ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!("{}: t is not strictly increasing", path.display())));
    }
    let xs = rows.iter().map(|r| [r[1], r[2], r[3], r[4], r[5]]).collect();
    Ok((ts, xs))
}

/// Curve through the samples of a `t,x0..x4` file.
pub fn load_curve(path: &Path, periodic: bool) -> Result<TimelikeCurve> {
    let (ts, xs) = read_curve_csv(path)?;
    TimelikeCurve::from_samples(ts, xs, periodic)
}

/// Frame path `u,M00..M44,k,h` (row-major frame entries).
pub fn write_frame_csv(path: &Path, u: &[f64], frames: &[MobiusFrame], k: &[f64], h: &[f64]) -> Result<()> {
    let mut names = vec!["u".to_string()];
    for i in 0..5 {
        for j in 0..5 {
            names.push(format!("M{i}{j}"));
        }
    }
    names.push("k".into());
    names.push("h".into());
    let rows = (0..u.len()).map(|n| {
        let mut row = vec![u[n]];
        for i in 0..5 {
            for j in 0..5 {
                row.push(frames[n].m[(i, j)]);
            }
        }
        row.push(k[n]);
        row.push(h[n]);
        row
    });
    write_rows(path, &names, rows)
}

/// Phase portrait `u,k,kdot`.
pub fn write_phase_csv(path: &Path, u: &[f64], k: &[f64], kdot: &[f64]) -> Result<()> {
    write_rows(path, &header(&["u", "k", "kdot"]), (0..u.len()).map(|i| vec![u[i], k[i], kdot[i]]))
}

/// Curvature profile `u,t,k,h`.
pub fn write_profile_csv(path: &Path, u: &[f64], t: &[f64], k: &[f64], h: &[f64]) -> Result<()> {
    write_rows(path, &header(&["u", "t", "k", "h"]), (0..u.len()).map(|i| vec![u[i], t[i], k[i], h[i]]))
}

/// Strain profile `t,density,strain`.
pub fn write_strain_csv(path: &Path, t: &[f64], density: &[f64], strain: &[f64]) -> Result<()> {
    write_rows(path, &header(&["t", "density", "strain"]), (0..t.len()).map(|i| vec![t[i], density[i], strain[i]]))
}

pub const DIRECTRIX_HEADER: [&str; 5] = ["u", "y1", "y2", "y3", "y4"];

/// Directrix `u,y1..y4`.
pub fn write_directrix_csv(path: &Path, d: &S3Path) -> Result<()> {
    write_rows(path, &header(&DIRECTRIX_HEADER), d.u.iter().zip(&d.points).map(|(u, p)| std::iter::once(*u).chain(*p).collect()))
}

/// Reads a closed path on S³ from `u,y1..y4` samples on a uniform grid
/// covering one period; velocities come from periodic differences.
pub fn read_directrix_csv(path: &Path) -> Result<(S3Path, f64)> {
    let rows = read_table(path, &DIRECTRIX_HEADER)?;
    let n = rows.len();
    if n < 8 {
        return Err(Error::Domain(format!("{}: need at least 8 samples", path.display())));
    }
    let period = uniform_period(path, &rows.iter().map(|r| r[0]).collect::<Vec<_>>())?;
    let points: Vec<[f64; 4]> = rows
        .iter()
        .map(|r| {
            let norm = (r[1] * r[1] + r[2] * r[2] + r[3] * r[3] + r[4] * r[4]).sqrt();
            [r[1] / norm, r[2] / norm, r[3] / norm, r[4] / norm]
        })
        .collect();
    let h = period / n as f64;
    let at = |i: isize| points[i.rem_euclid(n as isize) as usize];
    let velocities = (0..n as isize)
        .map(|i| {
            let (a, b, c, d) = (at(i - 2), at(i - 1), at(i + 1), at(i + 2));
            let mut v = [0.0; 4];
            for j in 0..4 {
                v[j] = (a[j] - 8.0 * b[j] + 8.0 * c[j] - d[j]) / (12.0 * h);
            }
            v
        })
        .collect();
    Ok((S3Path { u: rows.iter().map(|r| r[0]).collect(), points, velocities }, period))
}

/// Stereographic image `u,X,Y,Z`.
pub fn write_stereo_csv(path: &Path, u: &[f64], points: &[Vector3<f64>]) -> Result<()> {
    write_rows(path, &header(&["u", "X", "Y", "Z"]), u.iter().zip(points).map(|(u, p)| vec![*u, p.x, p.y, p.z]))
}

pub const KNOT_HEADER: [&str; 4] = ["t", "x", "y", "z"];

/// Knot samples `t,x,y,z` over one period.
pub fn write_knot_csv(path: &Path, k: &SpatialKnot) -> Result<()> {
    write_rows(path, &header(&KNOT_HEADER), k.points.iter().enumerate().map(|(i, p)| vec![k.param(i), p.x, p.y, p.z]))
}

// Period of uniformly spaced samples of a closed curve, the last sample
// being one step before the first.
fn uniform_period(path: &Path, t: &[f64]) -> Result<f64> {
    let n = t.len();
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    if !(h > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
        return Err(Error::Domain(format!("{}: samples must be uniformly spaced in the parameter", path.display())));
    }
    Ok(h * n as f64)
}

/// Reads a closed knot from uniformly spaced `t,x,y,z` samples covering one
/// period; tangents come from periodic differences.
pub fn read_knot_csv(path: &Path) -> Result<SpatialKnot> {
    let rows = read_table(path, &KNOT_HEADER)?;
    if rows.len() < 8 {
        return Err(Error::Domain(format!("{}: need at least 8 samples", path.display())));
    }
    let period = uniform_period(path, &rows.iter().map(|r| r[0]).collect::<Vec<_>>())?;
    SpatialKnot::from_points(period, rows.iter().map(|r| Vector3::new(r[1], r[2], r[3])).collect())
}

/// Pretty-printed JSON.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    serde_json::to_writer_pretty(f, value).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{torus_knot, TorusKind};

    #[test]
    fn knot_round_trip() {
        let dir = std::env::temp_dir().join(format!("timelike-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let k = torus_knot(TorusKind::Standard, 2, 3, 256).unwrap();
        let p = dir.join("k.csv");
        write_knot_csv(&p, &k).unwrap();
        let back = read_knot_csv(&p).unwrap();
        assert!((back.period - k.period).abs() < 1e-12);
        let d = back.points.iter().zip(&k.points).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(d < 1e-15);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn header_mismatch_is_usage_error() {
        let dir = std::env::temp_dir().join(format!("timelike-io-h-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("bad.csv");
        std::fs::write(&p, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_knot_csv(&p), Err(Error::Usage(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
