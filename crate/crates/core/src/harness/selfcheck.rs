//! Finite-difference and quadrature checks of the heat kernels at fixed seeds.
//!
//! Derivative checks compare against central differences of `g_fundamental`
//! alone, so they do not share code paths with the closed forms under test.
//! Relative errors are measured against the magnitude of the full derivative
//! (gradient norm, or Hessian Frobenius norm), which stays well defined where a
//! directional derivative happens to vanish.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::kernels::{
    g_fundamental, g_gradient, hypersingular_kernel, normal_derivative_x, normal_derivative_y,
    KernelEvalContext,
};
use crate::scalar::Vec2;

pub const FIRST_DERIVATIVE_TOL: f64 = 1e-6;
pub const SECOND_DERIVATIVE_TOL: f64 = 1e-4;
pub const HEAT_RESIDUAL_TOL: f64 = 1e-6;
pub const MASS_TOL: f64 = 1e-6;
pub const SYMMETRY_TOL: f64 = 1e-12;

const SEED: u64 = 0x5eed_4ea7;
const DERIVATIVE_SAMPLES: usize = 50;
const CAUSALITY_SAMPLES: usize = 1000;
const MIN_TAU: f64 = 0.2;
const MAX_TAU: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub worst_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheckSummary {
    pub checks: Vec<CheckOutcome>,
}

impl SelfCheckSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome(
    name: &'static str,
    worst_error: f64,
    tolerance: f64,
    samples: usize,
    start: Instant,
) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: samples > 0 && worst_error <= tolerance,
        worst_error,
        tolerance,
        samples,
        seconds: start.elapsed().as_secs_f64(),
    }
}

struct Sample {
    d: Vec2<f64>,
    tau: f64,
    nu_a: Vec2<f64>,
    nu_b: Vec2<f64>,
}

fn unit(angle: f64) -> Vec2<f64> {
    Vec2::new(angle.cos(), angle.sin())
}

fn samples(seed: u64, count: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.random_range(0.0..2.0f64);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            Sample {
                d: unit(theta) * r,
                tau: rng.random_range(MIN_TAU..MAX_TAU),
                nu_a: unit(rng.random_range(0.0..std::f64::consts::TAU)),
                nu_b: unit(rng.random_range(0.0..std::f64::consts::TAU)),
            }
        })
        .collect()
}

fn gradient_scale(d: Vec2<f64>, tau: f64) -> f64 {
    g_fundamental(d, tau) * d.norm() / (2.0 * tau)
}

/// Frobenius norm of the Hessian of `G`, from its closed form
/// `G [d d^T / (4 tau^2) - I / (2 tau)]`.
fn hessian_scale(d: Vec2<f64>, tau: f64) -> f64 {
    let g = g_fundamental(d, tau);
    let a = d.norm_sq() / (4.0 * tau * tau);
    let b = 1.0 / (2.0 * tau);
    g * ((a - b) * (a - b) + b * b).sqrt()
}

/// `g_gradient` against central differences of `G` (step 1e-5).
pub fn check_gradient(seed: u64, count: usize) -> CheckOutcome {
    let start = Instant::now();
    let eps = 1e-5;
    let mut worst = 0.0f64;
    for s in samples(seed, count) {
        let ex = Vec2::new(eps, 0.0);
        let ey = Vec2::new(0.0, eps);
        let fd = Vec2::new(
            (g_fundamental(s.d + ex, s.tau) - g_fundamental(s.d - ex, s.tau)) / (2.0 * eps),
            (g_fundamental(s.d + ey, s.tau) - g_fundamental(s.d - ey, s.tau)) / (2.0 * eps),
        );
        let exact = g_gradient(s.d, s.tau);
        let scale = exact.norm().max(1e-3 * g_fundamental(s.d, s.tau));
        worst = worst.max((fd - exact).norm() / scale);
    }
    outcome("gradient_fd", worst, FIRST_DERIVATIVE_TOL, count, start)
}

/// Source-side and target-side normal derivatives against directional
/// differences of `G` in `y` and in `x`.
pub fn check_normal_derivatives(seed: u64, count: usize) -> CheckOutcome {
    let start = Instant::now();
    let ctx = KernelEvalContext::corrected();
    let eps = 1e-5;
    let mut worst = 0.0f64;
    for s in samples(seed, count) {
        let scale = gradient_scale(s.d, s.tau).max(1e-3 * g_fundamental(s.d, s.tau));
        // moving y by +eps nu moves d = x - y by -eps nu
        let fd_y = (g_fundamental(s.d - s.nu_a * eps, s.tau)
            - g_fundamental(s.d + s.nu_a * eps, s.tau))
            / (2.0 * eps);
        let exact_y = normal_derivative_y(s.d, s.tau, s.nu_a, ctx);
        let fd_x = (g_fundamental(s.d + s.nu_b * eps, s.tau)
            - g_fundamental(s.d - s.nu_b * eps, s.tau))
            / (2.0 * eps);
        let exact_x = normal_derivative_x(s.d, s.tau, s.nu_b, ctx);
        worst = worst
            .max((fd_y - exact_y).abs() / scale)
            .max((fd_x - exact_x).abs() / scale);
    }
    outcome(
        "normal_derivative_fd",
        worst,
        FIRST_DERIVATIVE_TOL,
        count,
        start,
    )
}

/// Mixed second derivative against a nested central difference (step 1e-4).
pub fn check_hypersingular(seed: u64, count: usize) -> CheckOutcome {
    let start = Instant::now();
    let ctx = KernelEvalContext::corrected();
    let eps = 1e-4;
    let mut worst = 0.0f64;
    for s in samples(seed, count) {
        let (nx, ny) = (s.nu_a * eps, s.nu_b * eps);
        let g = |v: Vec2<f64>| g_fundamental(v, s.tau);
        // x -> x + a nu_x, y -> y + b nu_y, so d -> d + a nu_x - b nu_y
        let fd = (g(s.d + nx - ny) - g(s.d + nx + ny) - g(s.d - nx - ny) + g(s.d - nx + ny))
            / (4.0 * eps * eps);
        let exact = hypersingular_kernel(s.d, s.tau, s.nu_a, s.nu_b, ctx);
        worst = worst.max((fd - exact).abs() / hessian_scale(s.d, s.tau));
    }
    outcome(
        "hypersingular_fd",
        worst,
        SECOND_DERIVATIVE_TOL,
        count,
        start,
    )
}

/// `|dG/dtau - Laplace G|` by fourth-order central differences (step 1e-3) for
/// `tau in {0.3, 1, 3}` and `|d| <= 2`.
pub fn check_heat_residual(seed: u64, count: usize) -> CheckOutcome {
    let start = Instant::now();
    let h = 1e-3;
    let first =
        |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    let second = |f: &dyn Fn(f64) -> f64| {
        (-f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h)) / (12.0 * h * h)
    };
    let mut worst = 0.0f64;
    let mut n = 0;
    let points: Vec<Vec2<f64>> = samples(seed, count).into_iter().map(|s| s.d).collect();
    for tau in [0.3, 1.0, 3.0] {
        for &d in &points {
            let dt = first(&|s| g_fundamental(d, tau + s));
            let dxx = second(&|s| g_fundamental(d + Vec2::new(s, 0.0), tau));
            let dyy = second(&|s| g_fundamental(d + Vec2::new(0.0, s), tau));
            worst = worst.max((dt - dxx - dyy).abs());
            n += 1;
        }
    }
    outcome("heat_equation_residual", worst, HEAT_RESIDUAL_TOL, n, start)
}

/// Every kernel, in both modes, is exactly zero for `tau <= 0`.
pub fn check_causality(seed: u64, count: usize) -> CheckOutcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for n in 0..count {
        let d = Vec2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let tau = if n == 0 {
            0.0
        } else {
            -rng.random_range(0.0..5.0f64)
        };
        let (a, b) = (
            unit(rng.random_range(0.0..6.3)),
            unit(rng.random_range(0.0..6.3)),
        );
        worst = worst
            .max(g_fundamental(d, tau).abs())
            .max(g_gradient(d, tau).norm());
        for ctx in [
            KernelEvalContext::corrected(),
            KernelEvalContext::paper_literal(),
        ] {
            worst = worst
                .max(normal_derivative_y(d, tau, a, ctx).abs())
                .max(normal_derivative_x(d, tau, a, ctx).abs())
                .max(hypersingular_kernel(d, tau, a, b, ctx).abs());
        }
    }
    outcome("causality", worst, 0.0, count, start)
}

/// Midpoint rule for `int G(x, tau) dx` over `[-L, L]^2`, `L = 20 sqrt(tau)`,
/// on a 2000 x 2000 grid, for `tau in {0.5, 1}`.
pub fn check_mass() -> CheckOutcome {
    let start = Instant::now();
    let cells = 2000usize;
    let mut worst = 0.0f64;
    for tau in [0.5f64, 1.0] {
        let half = 20.0 * tau.sqrt();
        let dx = 2.0 * half / cells as f64;
        let mut total = 0.0;
        for a in 0..cells {
            let x = -half + (a as f64 + 0.5) * dx;
            let mut row = 0.0;
            for b in 0..cells {
                let y = -half + (b as f64 + 0.5) * dx;
                row += g_fundamental(Vec2::new(x, y), tau);
            }
            total += row;
        }
        worst = worst.max((total * dx * dx - 1.0).abs());
    }
    outcome("mass_conservation", worst, MASS_TOL, 2, start)
}

/// `K(d, tau, nu_x, nu_y) = K(-d, tau, nu_y, nu_x)` in corrected mode.
pub fn check_symmetry(seed: u64, count: usize) -> CheckOutcome {
    let start = Instant::now();
    let ctx = KernelEvalContext::corrected();
    let mut worst = 0.0f64;
    for s in samples(seed, count) {
        let a = hypersingular_kernel(s.d, s.tau, s.nu_a, s.nu_b, ctx);
        let b = hypersingular_kernel(-s.d, s.tau, s.nu_b, s.nu_a, ctx);
        worst = worst.max((a - b).abs());
    }
    outcome("hypersingular_symmetry", worst, SYMMETRY_TOL, count, start)
}

/// Runs every kernel check at the built-in seed.
pub fn kernel_selfcheck() -> SelfCheckSummary {
    SelfCheckSummary {
        checks: vec![
            check_gradient(SEED, DERIVATIVE_SAMPLES),
            check_normal_derivatives(SEED + 1, DERIVATIVE_SAMPLES),
            check_hypersingular(SEED + 2, DERIVATIVE_SAMPLES),
            check_heat_residual(SEED + 3, 20),
            check_causality(SEED + 4, CAUSALITY_SAMPLES),
            check_mass(),
            check_symmetry(SEED + 5, DERIVATIVE_SAMPLES),
        ],
    }
}
