//! Flux reconstruction from Dirichlet data by explicit hypersingular quadrature.
//!
//! The flux at boundary node `(i, j)` is
//!
//! ```text
//! phi(i, j) = -h h' sum_k sum_{l<j} d^2 G / d nu(x) d nu(y) (gamma_i - gamma_k, t_j - t_l) g(k, l) |gamma'_k|
//! ```
//!
//! evaluated directly, without a linear solve and without regularization. On an
//! arc `zeta in [0, zeta*]` the same sum runs over the arc nodes only, which is the
//! full-boundary sum with the data extended by zero.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpaceTimeGrid;
use crate::kernels::{hypersingular_kernel, KernelEvalContext, KernelMode};
use crate::potentials::{
    causal_apply, check_target_time, outside_error, representation_at, BoundaryField,
    InteriorSample, InteriorSamples,
};
use crate::scalar::{Scalar, Vec2};

/// Discrete error norms of a candidate against a reference field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics<T> {
    /// `sqrt(sum h h' |gamma'_i| (c - r)^2)`.
    pub l2_error: T,
    pub max_error: T,
    /// `l2_error` divided by the weighted norm of the reference.
    pub relative_l2: T,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult<T> {
    pub grid: SpaceTimeGrid<T>,
    pub flux: BoundaryField<T>,
    pub mode: KernelMode,
    pub metrics: Option<ErrorMetrics<T>>,
}

impl<T: Scalar> ReconstructionResult<T> {
    /// Attaches error metrics against `reference`.
    pub fn with_reference(mut self, reference: &BoundaryField<T>) -> Result<Self> {
        self.metrics = Some(error_metrics(&self.grid, &self.flux, reference)?);
        Ok(self)
    }
}

fn flux_quadrature<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    g: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> BoundaryField<T> {
    let w = grid.cell_weight();
    let (points, normals, tangents, speeds) = (
        grid.points(),
        grid.normals(),
        grid.tangents(),
        grid.speeds(),
    );
    match ctx.mode {
        KernelMode::Corrected => causal_apply(grid, g, |i, k, tau| {
            -w * speeds[k]
                * hypersingular_kernel(points[i] - points[k], tau, normals[i], normals[k], ctx)
        }),
        // Literal mode projects on the unit tangent at the target and on the
        // raw derivative gamma'(zeta_k) at the source, which absorbs |gamma'_k|.
        KernelMode::PaperLiteral => causal_apply(grid, g, |i, k, tau| {
            let unit_tangent = tangents[i] * speeds[i].recip();
            -w * hypersingular_kernel(points[i] - points[k], tau, unit_tangent, tangents[k], ctx)
        }),
    }
}

/// Reconstructs the flux on the whole boundary (`zeta_max = 1`).
pub fn reconstruct_flux_full<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    g: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<ReconstructionResult<T>> {
    if !grid.is_full_boundary() {
        return Err(Error::PartialGridSupplied {
            zeta_max: grid.zeta_max().to_f64().unwrap_or(f64::NAN),
        });
    }
    g.check_grid(grid)?;
    Ok(ReconstructionResult {
        grid: grid.clone(),
        flux: flux_quadrature(grid, g, ctx),
        mode: ctx.mode,
        metrics: None,
    })
}

/// Reconstructs the flux on the measured arc `zeta in (0, zeta*]`, `zeta* < 1`.
pub fn reconstruct_flux_partial<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    g_on_arc: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<ReconstructionResult<T>> {
    if grid.is_full_boundary() {
        return Err(Error::FullGridSupplied);
    }
    g_on_arc.check_grid(grid)?;
    Ok(ReconstructionResult {
        grid: grid.clone(),
        flux: flux_quadrature(grid, g_on_arc, ctx),
        mode: ctx.mode,
        metrics: None,
    })
}

/// Full or partial reconstruction depending on the grid's `zeta_max`.
pub fn reconstruct_flux<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    g: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<ReconstructionResult<T>> {
    if grid.is_full_boundary() {
        reconstruct_flux_full(grid, g, ctx)
    } else {
        reconstruct_flux_partial(grid, g, ctx)
    }
}

fn boundary_node_hit<T: Scalar>(grid: &SpaceTimeGrid<T>, p: Vec2<T>) -> bool {
    let tol = T::lit(1e-12) * (T::one() + p.norm());
    grid.points().iter().any(|&y| (p - y).norm() <= tol)
}

/// Temperature from the boundary representation `u = S phi - D g`, with the
/// flux as single-layer density and the Dirichlet data as double-layer density.
///
/// Targets on a boundary node are evaluated and flagged; other targets must be
/// strictly inside the domain.
pub fn reconstruct_field<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    flux: &BoundaryField<T>,
    g: &BoundaryField<T>,
    targets: &[(Vec2<T>, T)],
    ctx: KernelEvalContext,
) -> Result<InteriorSamples<T>> {
    flux.check_grid(grid)?;
    g.check_grid(grid)?;
    let mut flags = Vec::with_capacity(targets.len());
    for &(p, t) in targets {
        check_target_time(grid, t)?;
        let on_boundary = boundary_node_hit(grid, p);
        if !on_boundary && !grid.curve().contains(p) {
            return Err(outside_error(p));
        }
        flags.push(on_boundary);
    }
    let samples = targets
        .par_iter()
        .zip(flags)
        .map(|(&(point, time), on_boundary)| InteriorSample {
            point,
            time,
            value: representation_at(grid, flux, g, point, time, ctx),
            on_boundary,
        })
        .collect();
    Ok(InteriorSamples { samples })
}

/// Curve-weighted discrete L2 error, max error and relative L2 error.
pub fn error_metrics<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    candidate: &BoundaryField<T>,
    reference: &BoundaryField<T>,
) -> Result<ErrorMetrics<T>> {
    candidate.check_same_shape(reference)?;
    reference.check_grid(grid)?;
    let w = grid.cell_weight();
    let mut err_sq = T::zero();
    let mut ref_sq = T::zero();
    let mut max_error = T::zero();
    for j in 0..grid.n_time() {
        for i in 0..grid.n_space() {
            let wi = w * grid.speeds()[i];
            let (c, r) = (candidate.get(i, j), reference.get(i, j));
            err_sq += wi * (c - r) * (c - r);
            ref_sq += wi * r * r;
            max_error = max_error.max((c - r).abs());
        }
    }
    if !(ref_sq > T::zero()) {
        return Err(Error::ZeroReference);
    }
    let l2_error = err_sq.sqrt();
    Ok(ErrorMetrics {
        l2_error,
        max_error,
        relative_l2: l2_error / ref_sq.sqrt(),
    })
}
