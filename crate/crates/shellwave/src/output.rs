//! Artifact writers and readers: CSV snapshots, sensor traces, profiles,
//! PGM heatmaps and the run manifest.
//!
//! Snapshot format: one comment header
//! `# component=<name> time=<s> nx=<..> ny=<..> dx=<m> dy=<m> origin=<x0,y0>`
//! followed by `x,y,value` rows in row-major order. Floats are written
//! with Rust's shortest round-trip formatting, so identical runs produce
//! byte-identical files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::postprocess::{FieldGeometry, ScalarField2D};

pub fn write_snapshot_csv(path: &Path, field: &ScalarField2D) -> Result<()> {
    let g = &field.geometry;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "# component={} time={} nx={} ny={} dx={} dy={} origin={},{}",
        field.component, field.time, g.nx, g.ny, g.dx, g.dy, g.origin.0, g.origin.1
    )?;
    for j in 0..g.ny {
        for i in 0..g.nx {
            writeln!(w, "{},{},{}", g.x(i), g.y(j), field.value(i, j))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Parses a snapshot written by [`write_snapshot_csv`]. Values are taken
/// from the header dimensions; the x,y columns are not re-derived.
pub fn read_snapshot_csv(path: &Path) -> Result<ScalarField2D> {
    let file = File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| bad_snapshot(path, "empty file"))??;
    let header = header
        .strip_prefix("# ")
        .ok_or_else(|| bad_snapshot(path, "missing `# ` header"))?;

    let mut component = String::new();
    let mut time = 0.0f64;
    let mut nx = 0usize;
    let mut ny = 0usize;
    let mut dx = 0.0f64;
    let mut dy = 0.0f64;
    let mut origin = (0.0f64, 0.0f64);
    for token in header.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| bad_snapshot(path, "malformed header token"))?;
        match key {
            "component" => component = value.to_string(),
            "time" => time = parse_f64(path, value)?,
            "nx" => nx = parse_f64(path, value)? as usize,
            "ny" => ny = parse_f64(path, value)? as usize,
            "dx" => dx = parse_f64(path, value)?,
            "dy" => dy = parse_f64(path, value)?,
            "origin" => {
                let (a, b) = value
                    .split_once(',')
                    .ok_or_else(|| bad_snapshot(path, "malformed origin"))?;
                origin = (parse_f64(path, a)?, parse_f64(path, b)?);
            }
            _ => return Err(bad_snapshot(path, "unknown header key")),
        }
    }
    if nx < 2 || ny < 2 {
        return Err(bad_snapshot(path, "header dimensions missing or too small"));
    }

    let geometry = FieldGeometry {
        nx,
        ny,
        dx,
        dy,
        origin,
    };
    let mut field = ScalarField2D::zeros(geometry, component, time);
    let mut idx = 0usize;
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let value = line
            .rsplit_once(',')
            .ok_or_else(|| bad_snapshot(path, "malformed data row"))?
            .1;
        if idx >= field.values.len() {
            return Err(bad_snapshot(path, "more rows than nx*ny"));
        }
        field.values[idx] = parse_f64(path, value)?;
        idx += 1;
    }
    if idx != field.values.len() {
        return Err(bad_snapshot(path, "fewer rows than nx*ny"));
    }
    Ok(field)
}

fn bad_snapshot(path: &Path, message: &str) -> Error {
    Error::Scenario {
        path: path.display().to_string(),
        message: format!("snapshot: {message}"),
    }
}

fn parse_f64(path: &Path, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| bad_snapshot(path, "number parse failure"))
}

pub fn write_sensor_csv(path: &Path, samples: &[(f64, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,value")?;
    for (t, v) in samples {
        writeln!(w, "{t},{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile_csv(path: &Path, profile: &[(f64, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "station,value")?;
    for (s, v) in profile {
        writeln!(w, "{s},{v}")?;
    }
    w.flush()?;
    Ok(())
}

/// 8-bit binary PGM with linear min-max normalization; the mapping is
/// recorded in a `.txt` sidecar. For eyeballing only, never parsed.
pub fn write_pgm_heatmap(path: &Path, field: &ScalarField2D) -> Result<()> {
    let g = &field.geometry;
    let (lo, hi) = field.min_max();
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n255\n", g.nx, g.ny)?;
    // Image rows run top to bottom; grid rows bottom to top.
    for j in (0..g.ny).rev() {
        for i in 0..g.nx {
            let t = (field.value(i, j) - lo) / span;
            let byte = (t * 255.0).round().clamp(0.0, 255.0) as u8;
            w.write_all(&[byte])?;
        }
    }
    w.flush()?;

    let sidecar = path.with_extension("pgm.txt");
    let mut s = BufWriter::new(File::create(&sidecar)?);
    writeln!(s, "component={} time={}", field.component, field.time)?;
    writeln!(s, "min={lo}")?;
    writeln!(s, "max={hi}")?;
    writeln!(s, "mapping=linear value->(value-min)/(max-min)*255")?;
    s.flush()?;
    Ok(())
}

/// Record of everything one `run` invocation produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    /// SHA-256 of the scenario file bytes.
    pub scenario_hash: String,
    pub code_version: String,
    pub wall_clock_seconds: f64,
    /// Paths relative to the output directory; includes the manifest
    /// itself.
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json)?;
        Ok(())
    }
}
