//! Manufactured Cauchy data and the causal second-kind boundary solve.
//!
//! The reference solution is the heat kernel released from a point `x0` outside
//! the domain, `u(x, t) = G(x - x0, t)`. It solves the heat equation in the domain
//! with zero initial data there, so its traces are consistent Cauchy data.

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, SpaceTimeGrid};
use crate::kernels::{g_fundamental, g_gradient, KernelEvalContext};
use crate::potentials::{
    apply_blocks, single_layer_apply, BoundaryField, LayerKind, LayerOperator,
};
use crate::scalar::{Scalar, Vec2};

/// Minimum distance between the source and the boundary.
pub const SOURCE_MARGIN: f64 = 0.5;

/// Heat kernel centred at an exterior source point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSourceSolution<T> {
    x0: Vec2<T>,
}

impl<T: Scalar> PointSourceSolution<T> {
    /// Validates that `x0` lies outside `curve` with at least [`SOURCE_MARGIN`] clearance.
    pub fn new(x0: Vec2<T>, curve: &BoundaryCurve<T>) -> Result<Self> {
        let ps = Self { x0 };
        ps.validate(curve)?;
        Ok(ps)
    }

    pub fn source(&self) -> Vec2<T> {
        self.x0
    }

    pub fn validate(&self, curve: &BoundaryCurve<T>) -> Result<()> {
        let (x, y) = (
            self.x0.x.to_f64().unwrap_or(f64::NAN),
            self.x0.y.to_f64().unwrap_or(f64::NAN),
        );
        if !self.x0.is_finite() || curve.contains(self.x0) {
            return Err(Error::SourceInsideDomain { x, y });
        }
        let distance = curve.distance_to(self.x0);
        if !(distance >= T::lit(SOURCE_MARGIN)) {
            return Err(Error::SourceTooClose {
                distance: distance.to_f64().unwrap_or(f64::NAN),
                margin: SOURCE_MARGIN,
            });
        }
        Ok(())
    }

    /// `u(x, t)`.
    pub fn value(&self, x: Vec2<T>, t: T) -> T {
        g_fundamental(x - self.x0, t)
    }

    /// `grad u(x, t) . nu`.
    pub fn normal_flux(&self, x: Vec2<T>, t: T, nu: Vec2<T>) -> T {
        nu.dot(g_gradient(x - self.x0, t))
    }
}

/// Dirichlet trace `g(i, j) = G(gamma(zeta_i) - x0, t_j)`.
pub fn point_source_trace<T: Scalar>(
    ps: &PointSourceSolution<T>,
    grid: &SpaceTimeGrid<T>,
) -> Result<BoundaryField<T>> {
    ps.validate(grid.curve())?;
    Ok(BoundaryField::from_fn(grid, |i, j| {
        ps.value(grid.points()[i], grid.times()[j])
    }))
}

/// Neumann trace `phi(i, j) = nu(zeta_i) . grad G(gamma(zeta_i) - x0, t_j)`.
pub fn point_source_flux<T: Scalar>(
    ps: &PointSourceSolution<T>,
    grid: &SpaceTimeGrid<T>,
) -> Result<BoundaryField<T>> {
    ps.validate(grid.curve())?;
    Ok(BoundaryField::from_fn(grid, |i, j| {
        ps.normal_flux(grid.points()[i], grid.times()[j], grid.normals()[i])
    }))
}

/// Dirichlet data `g(x, t) = 2 |x| cos(3t)`.
pub fn paper_example_dirichlet<T: Scalar>(grid: &SpaceTimeGrid<T>) -> BoundaryField<T> {
    BoundaryField::from_fn(grid, |i, j| {
        T::lit(2.0) * grid.points()[i].norm() * (T::lit(3.0) * grid.times()[j]).cos()
    })
}

fn double_layer_blocks<T: Scalar>(grid: &SpaceTimeGrid<T>, ctx: KernelEvalContext) -> Vec<Vec<T>> {
    let op = LayerOperator::new(grid, LayerKind::DoubleLayer, ctx);
    (1..grid.n_time()).map(|lag| op.time_block(lag)).collect()
}

/// Solves `(I/2 + D) density = S phi` by forward substitution in time.
///
/// The diagonal time block of `D` is zero, so
/// `density_j = 2 [(S phi)_j - sum_{l<j} D_{j-l} density_l]`.
pub fn solve_second_kind<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    phi: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<BoundaryField<T>> {
    phi.check_grid(grid)?;
    let (n, m) = grid.shape();
    let rhs = single_layer_apply(grid, phi, ctx)?;
    let blocks = double_layer_blocks(grid, ctx);

    let two = T::lit(2.0);
    let mut density = BoundaryField::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            let mut acc = rhs.get(i, j);
            for l in 0..j {
                let block = &blocks[j - l - 1];
                for k in 0..n {
                    acc -= block[i * n + k] * density.get(k, l);
                }
            }
            density.set(i, j, two * acc);
        }
    }
    Ok(density)
}

/// `(I/2 + D) density` using the same time blocks as [`solve_second_kind`].
pub fn second_kind_operator<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    density: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<BoundaryField<T>> {
    density.check_grid(grid)?;
    let blocks = double_layer_blocks(grid, ctx);
    apply_blocks(&blocks, density).combine(T::one(), density, T::lit(0.5))
}
