use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpaceTimeGrid;
use crate::inverse::{reconstruct_field, reconstruct_flux, ErrorMetrics, ReconstructionResult};
use crate::potentials::BoundaryField;
use crate::synthetic::{point_source_flux, PointSourceSolution};

use super::config::{ExperimentConfig, FieldFlux};
use super::output::{write_boundary_data_csv, write_field_csv, write_flux_csv, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub samples: usize,
    /// Targets that sit on boundary nodes, where the representation jumps.
    pub boundary_targets: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Reconstruction time only, excluding data generation and IO.
    pub wall_time_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<ErrorMetrics<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSummary>,
    pub outputs: Vec<PathBuf>,
}

/// One level of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_space: usize,
    pub n_time: usize,
    pub metrics: ErrorMetrics<f64>,
    pub wall_time_seconds: f64,
}

struct FluxRun {
    grid: SpaceTimeGrid<f64>,
    g: BoundaryField<f64>,
    result: ReconstructionResult<f64>,
    reference: Option<(PointSourceSolution<f64>, BoundaryField<f64>)>,
    wall_time_seconds: f64,
}

fn run_flux(config: &ExperimentConfig) -> Result<FluxRun> {
    config.validate()?;
    let grid = config.grid()?;
    let g = config.data.dirichlet(&grid)?;
    let reference = match &config.reference {
        Some(spec) => {
            let ps = spec.solution(grid.curve())?;
            let flux = point_source_flux(&ps, &grid)?;
            Some((ps, flux))
        }
        None => None,
    };

    let start = Instant::now();
    let mut result = reconstruct_flux(&grid, &g, config.context())?;
    let wall_time_seconds = start.elapsed().as_secs_f64();

    if let Some((_, flux)) = &reference {
        result = result.with_reference(flux)?;
    }
    Ok(FluxRun {
        grid,
        g,
        result,
        reference,
        wall_time_seconds,
    })
}

/// Generates the Dirichlet data (and the exact flux when one exists) and writes
/// them to `output.boundary_csv`.
pub fn run_direct(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let grid = config.grid()?;
    let start = Instant::now();
    let g = config.data.dirichlet(&grid)?;
    let flux = config.data.exact_flux(&grid)?;
    let wall_time_seconds = start.elapsed().as_secs_f64();

    let mut outputs = Vec::new();
    if let Some(path) = &config.output.boundary_csv {
        write_boundary_data_csv(path, &grid, &g, flux.as_ref())?;
        outputs.push(path.clone());
    }
    finish_report(config, wall_time_seconds, None, None, outputs)
}

/// Builds the grid, generates `g`, reconstructs the flux (full or partial by
/// `zeta_max`), optionally rebuilds the interior field, computes metrics against
/// the reference and writes the configured outputs.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let run = run_flux(config)?;
    let mut outputs = Vec::new();

    if let Some(path) = &config.output.flux_csv {
        let reference = run.reference.as_ref().map(|(_, f)| f);
        write_flux_csv(path, &run.grid, &run.result.flux, reference)?;
        outputs.push(path.clone());
    }

    let mut field = None;
    if !config.targets.is_empty() {
        let density = match config.field_flux {
            FieldFlux::Reconstructed => &run.result.flux,
            FieldFlux::Reference => run
                .reference
                .as_ref()
                .map(|(_, f)| f)
                .ok_or(Error::MissingReference("field_flux = reference"))?,
        };
        let targets = config.targets();
        let samples = reconstruct_field(&run.grid, density, &run.g, &targets, config.context())?;
        let exact: Option<Vec<f64>> = run
            .reference
            .as_ref()
            .map(|(ps, _)| targets.iter().map(|&(p, t)| ps.value(p, t)).collect());
        let max_abs_error = exact.as_ref().map(|e| {
            samples
                .samples
                .iter()
                .zip(e)
                .map(|(s, r)| (s.value - r).abs())
                .fold(0.0, f64::max)
        });
        if let Some(path) = &config.output.field_csv {
            write_field_csv(path, &samples, exact.as_deref())?;
            outputs.push(path.clone());
        }
        field = Some(FieldSummary {
            samples: samples.len(),
            boundary_targets: samples.boundary_count(),
            max_abs_error,
        });
    }

    finish_report(
        config,
        run.wall_time_seconds,
        run.result.metrics,
        field,
        outputs,
    )
}

fn finish_report(
    config: &ExperimentConfig,
    wall_time_seconds: f64,
    metrics: Option<ErrorMetrics<f64>>,
    field: Option<FieldSummary>,
    mut outputs: Vec<PathBuf>,
) -> Result<ExperimentReport> {
    if let Some(path) = &config.output.report_json {
        outputs.push(path.clone());
    }
    let report = ExperimentReport {
        config: config.clone(),
        wall_time_seconds,
        metrics,
        field,
        outputs,
    };
    if let Some(path) = &config.output.report_json {
        write_json(path, &report)?;
    }
    Ok(report)
}

/// Runs the reconstruction of `base` at each `(n_space, n_time)` level and
/// records its error against the reference. No files are written.
pub fn convergence_study(
    base: &ExperimentConfig,
    levels: &[(usize, usize)],
) -> Result<Vec<ConvergenceRow>> {
    if base.reference.is_none() {
        return Err(Error::MissingReference("a convergence study"));
    }
    levels
        .iter()
        .map(|&(n_space, n_time)| {
            let config = ExperimentConfig {
                n_space,
                n_time,
                ..base.clone()
            };
            let run = run_flux(&config)?;
            let metrics = run
                .result
                .metrics
                .ok_or(Error::MissingReference("a convergence study"))?;
            Ok(ConvergenceRow {
                n_space,
                n_time,
                metrics,
                wall_time_seconds: run.wall_time_seconds,
            })
        })
        .collect()
}

/// Parses `"16x32,32x64"` into `[(16, 32), (32, 64)]`. An empty string gives no levels.
pub fn parse_levels(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (a, b) = item
                .split_once(['x', 'X'])
                .ok_or_else(|| Error::invalid(format!("level `{item}` is not of the form NxM")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad count in level `{item}`")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}
