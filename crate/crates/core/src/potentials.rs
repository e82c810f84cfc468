//! Rectangle-rule discretization of the boundary heat operators.
//!
//! Every operator is a causal space-time sum
//!
//! ```text
//! out(i, j) = sum_{k=1..N} sum_{l<j} h h' |gamma'(zeta_k)| kernel(gamma_i - gamma_k, t_j - t_l) rho(k, l)
//! ```
//!
//! Kernels vanish for `t_j - t_l <= 0`, so each operator is block lower
//! triangular in time with a zero diagonal block. On a uniform time grid the
//! blocks depend only on the lag `j - l`, which `apply` exploits by building one
//! `N x N` block per lag.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::SpaceTimeGrid;
use crate::kernels::{
    g_fundamental, hypersingular_kernel, normal_derivative_x, normal_derivative_y,
    KernelEvalContext,
};
use crate::scalar::{Scalar, Vec2};

/// Values on the space-time nodes, indexed by `(space node, time node)`.
///
/// Storage is time-major: all space nodes of time level 0 come first.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField<T> {
    n_space: usize,
    n_time: usize,
    values: Vec<T>,
}

impl<T: Scalar> BoundaryField<T> {
    pub fn zeros(n_space: usize, n_time: usize) -> Self {
        Self {
            n_space,
            n_time,
            values: vec![T::zero(); n_space * n_time],
        }
    }

    pub fn zeros_on(grid: &SpaceTimeGrid<T>) -> Self {
        Self::zeros(grid.n_space(), grid.n_time())
    }

    pub fn from_fn(grid: &SpaceTimeGrid<T>, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let (n, m) = grid.shape();
        let mut values = Vec::with_capacity(n * m);
        for j in 0..m {
            for i in 0..n {
                values.push(f(i, j));
            }
        }
        Self {
            n_space: n,
            n_time: m,
            values,
        }
    }

    /// Wraps time-major values, rejecting wrong lengths and non-finite entries.
    pub fn from_values(n_space: usize, n_time: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n_space * n_time {
            return Err(Error::invalid(format!(
                "expected {} values for a {n_space} x {n_time} field, got {}",
                n_space * n_time,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                i: pos % n_space,
                j: pos / n_space,
            });
        }
        Ok(Self {
            n_space,
            n_time,
            values,
        })
    }

    /// Unit value at node `(k, l)`, zero elsewhere.
    pub fn impulse(grid: &SpaceTimeGrid<T>, k: usize, l: usize) -> Self {
        let mut f = Self::zeros_on(grid);
        f.set(k, l, T::one());
        f
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_space, self.n_time)
    }

    pub fn n_space(&self) -> usize {
        self.n_space
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.n_space + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.values[j * self.n_space + i] = value;
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Space values at time level `j`.
    pub fn time_slice(&self, j: usize) -> &[T] {
        &self.values[j * self.n_space..(j + 1) * self.n_space]
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            n_space: self.n_space,
            n_time: self.n_time,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            n_space: self.n_space,
            n_time: self.n_time,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        })
    }

    /// Cyclic shift in the space index: `out(i, j) = self(i - m mod N, j)`.
    pub fn shift_space(&self, m: usize) -> Self {
        let n = self.n_space;
        let mut out = Self::zeros(n, self.n_time);
        for j in 0..self.n_time {
            for i in 0..n {
                out.set((i + m) % n, j, self.get(i, j));
            }
        }
        out
    }

    /// Copy with every time level after `j` (0-based) set to zero.
    pub fn truncated_after(&self, j: usize) -> Self {
        let mut out = self.clone();
        let start = ((j + 1) * self.n_space).min(out.values.len());
        out.values[start..].iter_mut().for_each(|v| *v = T::zero());
        out
    }

    pub fn check_grid(&self, grid: &SpaceTimeGrid<T>) -> Result<()> {
        if self.shape() != grid.shape() {
            return Err(Error::GridMismatch {
                expected: grid.shape(),
                found: self.shape(),
            });
        }
        Ok(())
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(self.shape(), other.shape()));
        }
        Ok(())
    }
}

/// The four boundary heat operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerKind {
    /// `S`, kernel `G`.
    SingleLayer,
    /// `D`, kernel `d G / d nu(y)`.
    DoubleLayer,
    /// `D'`, kernel `d G / d nu(x)`.
    AdjointDoubleLayer,
    /// `H`, kernel `-d^2 G / d nu(x) d nu(y)`.
    Hypersingular,
}

impl LayerKind {
    pub const ALL: [LayerKind; 4] = [
        LayerKind::SingleLayer,
        LayerKind::DoubleLayer,
        LayerKind::AdjointDoubleLayer,
        LayerKind::Hypersingular,
    ];
}

/// Discrete boundary operator bound to a grid.
#[derive(Debug, Clone, Copy)]
pub struct LayerOperator<'g, T> {
    grid: &'g SpaceTimeGrid<T>,
    kind: LayerKind,
    ctx: KernelEvalContext,
}

impl<'g, T: Scalar> LayerOperator<'g, T> {
    pub fn new(grid: &'g SpaceTimeGrid<T>, kind: LayerKind, ctx: KernelEvalContext) -> Self {
        Self { grid, kind, ctx }
    }

    pub fn kind(&self) -> LayerKind {
        self.kind
    }

    /// Quadrature-weighted coefficient coupling target node `i` to source node `k`
    /// at time difference `tau`.
    #[inline]
    pub fn entry(&self, i: usize, k: usize, tau: T) -> T {
        let g = self.grid;
        let d = g.points()[i] - g.points()[k];
        let w = g.cell_weight() * g.speeds()[k];
        let kernel = match self.kind {
            LayerKind::SingleLayer => g_fundamental(d, tau),
            LayerKind::DoubleLayer => normal_derivative_y(d, tau, g.normals()[k], self.ctx),
            LayerKind::AdjointDoubleLayer => normal_derivative_x(d, tau, g.normals()[i], self.ctx),
            LayerKind::Hypersingular => {
                -hypersingular_kernel(d, tau, g.normals()[i], g.normals()[k], self.ctx)
            }
        };
        w * kernel
    }

    /// Row-major `N x N` block coupling time level `l` to level `l + lag`.
    pub fn time_block(&self, lag: usize) -> Vec<T> {
        let tau = self.grid.lag_time(lag);
        lag_block(self.grid.n_space(), tau, |i, k, tau| self.entry(i, k, tau))
    }

    /// Dense `(N N') x (N N')` matrix acting on time-major vectors, row-major.
    pub fn assemble(&self) -> Vec<T> {
        let (n, m) = self.grid.shape();
        let size = n * m;
        let mut a = vec![T::zero(); size * size];
        for lag in 1..m {
            let block = self.time_block(lag);
            for l in 0..m - lag {
                let j = l + lag;
                for i in 0..n {
                    let row = (j * n + i) * size + l * n;
                    a[row..row + n].copy_from_slice(&block[i * n..(i + 1) * n]);
                }
            }
        }
        a
    }

    pub fn apply(&self, density: &BoundaryField<T>) -> Result<BoundaryField<T>> {
        density.check_grid(self.grid)?;
        Ok(causal_apply(self.grid, density, |i, k, tau| {
            self.entry(i, k, tau)
        }))
    }
}

fn lag_block<T: Scalar>(n: usize, tau: T, entry: impl Fn(usize, usize, T) -> T) -> Vec<T> {
    let mut block = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            block.push(entry(i, k, tau));
        }
    }
    block
}

/// Applies the causal block-Toeplitz sum defined by `entry(i, k, tau)` to `density`.
///
/// Lag 0 is skipped: all kernels vanish at `tau = 0`.
pub(crate) fn causal_apply<T, F>(
    grid: &SpaceTimeGrid<T>,
    density: &BoundaryField<T>,
    entry: F,
) -> BoundaryField<T>
where
    T: Scalar,
    F: Fn(usize, usize, T) -> T + Sync,
{
    let (n, m) = grid.shape();
    let blocks: Vec<Vec<T>> = (1..m)
        .into_par_iter()
        .map(|lag| lag_block(n, grid.lag_time(lag), &entry))
        .collect();
    apply_blocks(&blocks, density)
}

/// `out_j = sum_{l<j} blocks[j - l - 1] rho_l`.
pub(crate) fn apply_blocks<T: Scalar>(
    blocks: &[Vec<T>],
    density: &BoundaryField<T>,
) -> BoundaryField<T> {
    let (n, m) = density.shape();
    let mut out = BoundaryField::zeros(n, m);
    out.values
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, row)| {
            for l in 0..j {
                let block = &blocks[j - l - 1];
                let rho = density.time_slice(l);
                for (i, out_i) in row.iter_mut().enumerate() {
                    let coeffs = &block[i * n..(i + 1) * n];
                    let mut acc = T::zero();
                    for (c, r) in coeffs.iter().zip(rho) {
                        acc += *c * *r;
                    }
                    *out_i += acc;
                }
            }
        });
    out
}

/// `S q`.
pub fn single_layer_apply<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    q: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<BoundaryField<T>> {
    LayerOperator::new(grid, LayerKind::SingleLayer, ctx).apply(q)
}

/// `D phi`.
pub fn double_layer_apply<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    density: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<BoundaryField<T>> {
    LayerOperator::new(grid, LayerKind::DoubleLayer, ctx).apply(density)
}

/// `D' q`.
pub fn adjoint_double_layer_apply<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    q: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<BoundaryField<T>> {
    LayerOperator::new(grid, LayerKind::AdjointDoubleLayer, ctx).apply(q)
}

/// `H phi`.
pub fn hypersingular_apply<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    density: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<BoundaryField<T>> {
    LayerOperator::new(grid, LayerKind::Hypersingular, ctx).apply(density)
}

/// A field value at a point and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorSample<T> {
    pub point: Vec2<T>,
    pub time: T,
    pub value: T,
    /// Target coincides with a boundary node, where layer potentials jump.
    pub on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InteriorSamples<T> {
    pub samples: Vec<InteriorSample<T>>,
}

impl<T: Scalar> InteriorSamples<T> {
    pub fn values(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.value).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn boundary_count(&self) -> usize {
        self.samples.iter().filter(|s| s.on_boundary).count()
    }
}

/// `u(x, t) = (S q)(x, t) - (D phi)(x, t)` summed with the boundary rectangle rule.
pub(crate) fn representation_at<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    single_density: &BoundaryField<T>,
    double_density: &BoundaryField<T>,
    x: Vec2<T>,
    t: T,
    ctx: KernelEvalContext,
) -> T {
    let w = grid.cell_weight();
    let mut acc = T::zero();
    for (l, &tl) in grid.times().iter().enumerate() {
        let tau = t - tl;
        if !(tau > T::zero()) {
            break;
        }
        for k in 0..grid.n_space() {
            let d = x - grid.points()[k];
            let g = g_fundamental(d, tau);
            let dg = normal_derivative_y(d, tau, grid.normals()[k], ctx);
            acc += w
                * grid.speeds()[k]
                * (g * single_density.get(k, l) - dg * double_density.get(k, l));
        }
    }
    acc
}

pub(crate) fn check_target_time<T: Scalar>(grid: &SpaceTimeGrid<T>, t: T) -> Result<()> {
    if !(t > T::zero() && t <= grid.final_time()) {
        return Err(Error::invalid(format!(
            "target time {t} outside (0, {}]",
            grid.final_time()
        )));
    }
    Ok(())
}

pub(crate) fn outside_error<T: Scalar>(p: Vec2<T>) -> Error {
    Error::PointOutsideDomain {
        x: p.x.to_f64().unwrap_or(f64::NAN),
        y: p.y.to_f64().unwrap_or(f64::NAN),
    }
}

/// Evaluates `S q - D phi` at targets strictly inside the domain.
pub fn evaluate_interior<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    q: &BoundaryField<T>,
    phi_density: &BoundaryField<T>,
    targets: &[(Vec2<T>, T)],
    ctx: KernelEvalContext,
) -> Result<InteriorSamples<T>> {
    q.check_grid(grid)?;
    phi_density.check_grid(grid)?;
    for &(p, t) in targets {
        check_target_time(grid, t)?;
        if !grid.curve().contains(p) {
            return Err(outside_error(p));
        }
    }
    let samples = targets
        .par_iter()
        .map(|&(point, time)| InteriorSample {
            point,
            time,
            value: representation_at(grid, q, phi_density, point, time, ctx),
            on_boundary: false,
        })
        .collect();
    Ok(InteriorSamples { samples })
}

/// Max-norms of the two boundary identities
/// `r1 = S q + (I/2 - D) phi_density - g` and `r2 = (I/2 + D') q + H phi_density - phi`.
pub fn cauchy_residuals<T: Scalar>(
    grid: &SpaceTimeGrid<T>,
    q: &BoundaryField<T>,
    phi_density: &BoundaryField<T>,
    g: &BoundaryField<T>,
    phi: &BoundaryField<T>,
    ctx: KernelEvalContext,
) -> Result<(T, T)> {
    for f in [q, phi_density, g, phi] {
        f.check_grid(grid)?;
    }
    let half = T::lit(0.5);
    let sq = single_layer_apply(grid, q, ctx)?;
    let dphi = double_layer_apply(grid, phi_density, ctx)?;
    let dq = adjoint_double_layer_apply(grid, q, ctx)?;
    let hphi = hypersingular_apply(grid, phi_density, ctx)?;

    let mut r1 = T::zero();
    let mut r2 = T::zero();
    for idx in 0..g.values().len() {
        let a = sq.values[idx] + half * phi_density.values[idx] - dphi.values[idx] - g.values[idx];
        let b = half * q.values[idx] + dq.values[idx] + hphi.values[idx] - phi.values[idx];
        r1 = r1.max(a.abs());
        r2 = r2.max(b.abs());
    }
    Ok((r1, r2))
}
