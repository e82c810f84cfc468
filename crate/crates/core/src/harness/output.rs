//! CSV writers. Reals are written in scientific notation with 17 significant
//! digits so every `f64` round-trips; separator `,`, line ending LF, boundary
//! rows ordered time-major (`j` outer, `i` inner), indices 1-based.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::SpaceTimeGrid;
use crate::potentials::{BoundaryField, InteriorSamples};

use super::experiment::ConvergenceRow;

pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Columns `i,j,zeta,t,x1,x2,<value_name>[,<extra>...]`.
fn write_boundary_table(
    path: &Path,
    grid: &SpaceTimeGrid<f64>,
    columns: &[(&str, &BoundaryField<f64>)],
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["i", "j", "zeta", "t", "x1", "x2"];
    header.extend(columns.iter().map(|(name, _)| *name));
    w.write_record(&header)?;
    for j in 0..grid.n_time() {
        for i in 0..grid.n_space() {
            let p = grid.points()[i];
            let mut row = vec![
                (i + 1).to_string(),
                (j + 1).to_string(),
                fmt17(grid.zeta()[i]),
                fmt17(grid.times()[j]),
                fmt17(p.x),
                fmt17(p.y),
            ];
            row.extend(columns.iter().map(|(_, f)| fmt17(f.get(i, j))));
            w.write_record(&row)?;
        }
    }
    finish(w, path)
}

/// `i,j,zeta,t,x1,x2,flux[,reference,abs_error]`.
pub fn write_flux_csv(
    path: &Path,
    grid: &SpaceTimeGrid<f64>,
    flux: &BoundaryField<f64>,
    reference: Option<&BoundaryField<f64>>,
) -> Result<()> {
    match reference {
        None => write_boundary_table(path, grid, &[("flux", flux)]),
        Some(r) => {
            let abs_error = flux.combine(1.0, r, -1.0)?.map(f64::abs);
            write_boundary_table(
                path,
                grid,
                &[("flux", flux), ("reference", r), ("abs_error", &abs_error)],
            )
        }
    }
}

/// `i,j,zeta,t,x1,x2,g[,flux]`.
pub fn write_boundary_data_csv(
    path: &Path,
    grid: &SpaceTimeGrid<f64>,
    g: &BoundaryField<f64>,
    flux: Option<&BoundaryField<f64>>,
) -> Result<()> {
    match flux {
        None => write_boundary_table(path, grid, &[("g", g)]),
        Some(f) => write_boundary_table(path, grid, &[("g", g), ("flux", f)]),
    }
}

/// `x1,x2,t,u[,reference,abs_error]`.
pub fn write_field_csv(
    path: &Path,
    samples: &InteriorSamples<f64>,
    reference: Option<&[f64]>,
) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["x1", "x2", "t", "u"];
    if reference.is_some() {
        header.extend(["reference", "abs_error"]);
    }
    w.write_record(&header)?;
    for (n, s) in samples.samples.iter().enumerate() {
        let mut row = vec![
            fmt17(s.point.x),
            fmt17(s.point.y),
            fmt17(s.time),
            fmt17(s.value),
        ];
        if let Some(r) = reference {
            row.push(fmt17(r[n]));
            row.push(fmt17((s.value - r[n]).abs()));
        }
        w.write_record(&row)?;
    }
    finish(w, path)
}

/// `n_space,n_time,l2_error,max_error,relative_l2,wall_time_seconds`.
pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "n_space",
        "n_time",
        "l2_error",
        "max_error",
        "relative_l2",
        "wall_time_seconds",
    ])?;
    for r in rows {
        w.write_record([
            r.n_space.to_string(),
            r.n_time.to_string(),
            fmt17(r.metrics.l2_error),
            fmt17(r.metrics.max_error),
            fmt17(r.metrics.relative_l2),
            fmt17(r.wall_time_seconds),
        ])?;
    }
    finish(w, path)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n").map_err(|e| Error::io(path, e))
}
