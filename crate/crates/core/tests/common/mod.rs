#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use heatflux::geometry::{make_grid, BoundaryCurve, TrigSeries};
use heatflux::inverse::reconstruct_field;
use heatflux::potentials::BoundaryField;
use heatflux::synthetic::{point_source_flux, point_source_trace, PointSourceSolution};
use heatflux::{KernelEvalContext, SpaceTimeGrid, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FINAL_TIME: f64 = 10.0;
pub const INTERIOR_ORACLE: f64 = 1.303_050_464_137_108_1e-2;

/// `(a cos 2 pi z, b sin 2 pi z)`.
pub fn ellipse(a: f64, b: f64) -> BoundaryCurve<f64> {
    BoundaryCurve::trigonometric(
        TrigSeries::new(0.0, vec![a], vec![]),
        TrigSeries::new(0.0, vec![], vec![b]),
    )
    .unwrap()
}

pub fn circle_grid(n: usize, m: usize) -> SpaceTimeGrid {
    make_grid(BoundaryCurve::unit_circle(), n, m, FINAL_TIME, 1.0).unwrap()
}

pub fn random_field(grid: &SpaceTimeGrid, seed: u64) -> BoundaryField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BoundaryField::from_fn(grid, |_, _| rng.random_range(-1.0..1.0))
}

pub fn source() -> PointSourceSolution<f64> {
    PointSourceSolution::new(Vec2::new(2.0, 0.0), &BoundaryCurve::unit_circle()).unwrap()
}

pub fn max_abs_diff(a: &BoundaryField<f64>, b: &BoundaryField<f64>) -> f64 {
    a.combine(1.0, b, -1.0).unwrap().max_abs()
}

/// `max |a - b| / max |b|`, or the absolute difference when `b` vanishes.
pub fn relative_diff(a: &BoundaryField<f64>, b: &BoundaryField<f64>) -> f64 {
    let scale = b.max_abs();
    let diff = max_abs_diff(a, b);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Double loop over the literal explicit flux scheme on the ellipse
/// `(a cos 2 pi z, b sin 2 pi z)`, written from the closed-form parametrization.
///
/// Space nodes `z_k = zeta_max (k + 1) / m`, times `t_l = T (l + 1) / mp`,
/// `g` time-major. Prefactor `T zeta_max / (4 m mp)`.
pub fn literal_scheme(
    a: f64,
    b: f64,
    zeta_max: f64,
    m: usize,
    mp: usize,
    final_time: f64,
    g: &[f64],
) -> Vec<f64> {
    let gamma = |z: f64| [a * (TAU * z).cos(), b * (TAU * z).sin()];
    let dgamma = |z: f64| [-TAU * a * (TAU * z).sin(), TAU * b * (TAU * z).cos()];
    let z = |k: usize| zeta_max * (k + 1) as f64 / m as f64;
    let t = |l: usize| final_time * (l + 1) as f64 / mp as f64;
    let prefactor = final_time * zeta_max / (m as f64 * mp as f64) / 4.0;

    let mut out = vec![0.0; m * mp];
    for j in 0..mp {
        for i in 0..m {
            let xi = gamma(z(i));
            let ti = dgamma(z(i));
            let len = (ti[0] * ti[0] + ti[1] * ti[1]).sqrt();
            let unit = [ti[0] / len, ti[1] / len];
            let mut sum = 0.0;
            for k in 0..m {
                let yk = gamma(z(k));
                let tk = dgamma(z(k));
                for l in 0..mp {
                    let dt = t(j) - t(l);
                    if dt <= 0.0 {
                        continue;
                    }
                    let diff = [xi[0] - yk[0], xi[1] - yk[1]];
                    let proj = tk[0] * (yk[0] - xi[0]) + tk[1] * (yk[1] - xi[1]);
                    let bracket = [
                        -tk[0] + 2.0 * proj * diff[0] / dt,
                        -tk[1] + 2.0 * proj * diff[1] / dt,
                    ];
                    let dist_sq = diff[0] * diff[0] + diff[1] * diff[1];
                    sum += g[l * m + k] / (dt * dt)
                        * (unit[0] * bracket[0] + unit[1] * bracket[1])
                        * (-dist_sq / dt).exp();
                }
            }
            out[j * m + i] = prefactor * sum;
        }
    }
    out
}

/// Worst relative deviation from `op(2a + 3b) = 2 op(a) + 3 op(b)`.
pub fn linearity_error(
    grid: &SpaceTimeGrid,
    seed: u64,
    op: impl Fn(&BoundaryField<f64>) -> BoundaryField<f64>,
) -> f64 {
    let a = random_field(grid, seed);
    let b = random_field(grid, seed + 1);
    let lhs = op(&a.combine(2.0, &b, 3.0).unwrap());
    let rhs = op(&a).combine(2.0, &op(&b), 3.0).unwrap();
    relative_diff(&lhs, &rhs)
}

/// Whether perturbing the input at time levels `>= j` leaves every output level
/// `<= j` bitwise unchanged, for every `j`.
pub fn causality_exact(
    grid: &SpaceTimeGrid,
    seed: u64,
    op: impl Fn(&BoundaryField<f64>) -> BoundaryField<f64>,
) -> bool {
    let (n, m) = grid.shape();
    let base = random_field(grid, seed);
    let noise = random_field(grid, seed + 7);
    let out = op(&base);
    (0..m).all(|j0| {
        let mut perturbed = base.clone();
        for j in j0..m {
            for i in 0..n {
                perturbed.set(i, j, base.get(i, j) + noise.get(i, j));
            }
        }
        let changed = op(&perturbed);
        (0..=j0).all(|j| (0..n).all(|i| changed.get(i, j) == out.get(i, j)))
    })
}

/// Worst relative deviation from `op(shift g) = shift op(g)` over several shifts.
pub fn equivariance_error(
    grid: &SpaceTimeGrid,
    seed: u64,
    op: impl Fn(&BoundaryField<f64>) -> BoundaryField<f64>,
) -> f64 {
    let g = random_field(grid, seed);
    let out = op(&g);
    let n = grid.n_space();
    [1, n / 4, n / 2, n - 1]
        .into_iter()
        .filter(|&s| s > 0 && s < n)
        .map(|s| relative_diff(&op(&g.shift_space(s)), &out.shift_space(s)))
        .fold(0.0, f64::max)
}

/// `|u(0, 0, 5) - exact|` from the representation formula with the exact
/// point-source flux and trace, at each `(N, N')` level.
pub fn interior_errors(levels: &[(usize, usize)], ctx: KernelEvalContext) -> Vec<f64> {
    let ps = source();
    levels
        .iter()
        .map(|&(n, m)| {
            let grid = circle_grid(n, m);
            let flux = point_source_flux(&ps, &grid).unwrap();
            let g = point_source_trace(&ps, &grid).unwrap();
            let u =
                reconstruct_field(&grid, &flux, &g, &[(Vec2::new(0.0, 0.0), 5.0)], ctx).unwrap();
            (u.samples[0].value - INTERIOR_ORACLE).abs()
        })
        .collect()
}

/// `e^{-0.2} / (20 pi)` recomputed, to guard the constant above.
pub fn interior_oracle_recomputed() -> f64 {
    (-0.2f64).exp() / (20.0 * PI)
}
