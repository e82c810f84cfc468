mod common;

use common::*;
use heatflux::geometry::{make_grid, BoundaryCurve};
use heatflux::inverse::{reconstruct_flux, reconstruct_flux_full, reconstruct_flux_partial};
use heatflux::potentials::{hypersingular_apply, BoundaryField};
use heatflux::synthetic::paper_example_dirichlet;
use heatflux::{Error, KernelEvalContext, SpaceTimeGrid};
use proptest::prelude::*;

const CORRECTED: KernelEvalContext = KernelEvalContext::corrected();
const LITERAL: KernelEvalContext = KernelEvalContext::paper_literal();

fn flux(
    grid: &SpaceTimeGrid,
    g: &BoundaryField<f64>,
    ctx: KernelEvalContext,
) -> BoundaryField<f64> {
    reconstruct_flux(grid, g, ctx).unwrap().flux
}

fn check_literal(a: f64, b: f64, zeta_max: f64, n: usize, m: usize, seed: u64) -> f64 {
    let curve = if a == b && a == 1.0 {
        BoundaryCurve::unit_circle()
    } else {
        ellipse(a, b)
    };
    let grid = make_grid(curve, n, m, FINAL_TIME, zeta_max).unwrap();
    let g = random_field(&grid, seed);
    let ours = flux(&grid, &g, LITERAL);
    let oracle = literal_scheme(a, b, zeta_max, n, m, FINAL_TIME, g.values());
    let oracle = BoundaryField::from_values(n, m, oracle).unwrap();
    relative_diff(&ours, &oracle)
}

#[test]
fn literal_mode_matches_transcription_full() {
    for (seed, (a, b)) in [(1.0, 1.0), (1.3, 0.8), (0.6, 0.9)].into_iter().enumerate() {
        for (n, m) in [(8, 8), (4, 2), (5, 7), (8, 3)] {
            let err = check_literal(a, b, 1.0, n, m, seed as u64);
            assert!(err <= 1e-12, "a={a} b={b} N={n} N'={m}: {err:e}");
        }
    }
}

#[test]
fn literal_mode_matches_transcription_partial() {
    for (zeta_max, n, m) in [(0.25, 8, 8), (0.01, 6, 5), (0.5, 3, 8)] {
        let err = check_literal(1.2, 0.7, zeta_max, n, m, 11);
        assert!(err <= 1e-12, "zeta*={zeta_max} M={n} M'={m}: {err:e}");
    }
}

#[test]
fn literal_single_term_on_small_circle() {
    let grid = circle_grid(4, 2);
    let mut g = BoundaryField::zeros_on(&grid);
    g.set(0, 0, 1.0);
    let ours = flux(&grid, &g, LITERAL);
    let oracle = literal_scheme(1.0, 1.0, 1.0, 4, 2, FINAL_TIME, g.values());
    for j in 0..2 {
        for i in 0..4 {
            let (x, y) = (ours.get(i, j), oracle[j * 4 + i]);
            assert!(
                (x - y).abs() <= 1e-14 * (1.0 + y.abs()),
                "({i},{j}): {x} vs {y}"
            );
        }
    }
    assert!((0..4).all(|i| ours.get(i, 0) == 0.0));
}

#[test]
fn corrected_full_is_hypersingular_operator() {
    let grid = make_grid(ellipse(1.1, 0.9), 9, 6, FINAL_TIME, 1.0).unwrap();
    let g = random_field(&grid, 3);
    let a = flux(&grid, &g, CORRECTED);
    let b = hypersingular_apply(&grid, &g, CORRECTED).unwrap();
    assert!(relative_diff(&a, &b) <= 1e-14);
}

fn partial_vs_full(ctx: KernelEvalContext, n_full: usize, m_arc: usize, n_time: usize) -> f64 {
    let zeta_max = m_arc as f64 / n_full as f64;
    let full = circle_grid(n_full, n_time);
    let arc = make_grid(
        BoundaryCurve::unit_circle(),
        m_arc,
        n_time,
        FINAL_TIME,
        zeta_max,
    )
    .unwrap();
    let g_arc = random_field(&arc, 5);
    let g_full =
        BoundaryField::from_fn(&full, |i, j| if i < m_arc { g_arc.get(i, j) } else { 0.0 });

    let partial = reconstruct_flux_partial(&arc, &g_arc, ctx).unwrap().flux;
    let whole = reconstruct_flux_full(&full, &g_full, ctx).unwrap().flux;
    let restricted = BoundaryField::from_fn(&arc, |i, j| whole.get(i, j));
    relative_diff(&partial, &restricted)
}

#[test]
fn partial_equals_restricted_full() {
    for ctx in [CORRECTED, LITERAL] {
        for (n, m, t) in [(16, 4, 8), (32, 8, 10), (20, 5, 6)] {
            let err = partial_vs_full(ctx, n, m, t);
            assert!(err <= 1e-12, "{:?} N={n} M={m}: {err:e}", ctx.mode);
        }
    }
}

#[test]
fn wrong_variant_rejected() {
    let full = circle_grid(4, 3);
    let arc = make_grid(BoundaryCurve::unit_circle(), 4, 3, FINAL_TIME, 0.5).unwrap();
    assert!(matches!(
        reconstruct_flux_full(&arc, &BoundaryField::zeros_on(&arc), CORRECTED),
        Err(Error::PartialGridSupplied { .. })
    ));
    assert!(matches!(
        reconstruct_flux_partial(&full, &BoundaryField::zeros_on(&full), CORRECTED),
        Err(Error::FullGridSupplied)
    ));
    assert!(matches!(
        reconstruct_flux(&full, &BoundaryField::zeros(5, 3), CORRECTED),
        Err(Error::GridMismatch { .. })
    ));
}

#[test]
fn partial_fifty_by_hundred_is_finite() {
    let grid = make_grid(BoundaryCurve::unit_circle(), 50, 100, FINAL_TIME, 0.01).unwrap();
    let g = paper_example_dirichlet(&grid);
    for ctx in [CORRECTED, LITERAL] {
        let out = reconstruct_flux_partial(&grid, &g, ctx).unwrap();
        assert_eq!(out.flux.shape(), (50, 100));
        assert!(out.flux.all_finite());
    }
}

#[test]
fn zero_data_gives_zero_flux() {
    let full = circle_grid(6, 4);
    let arc = make_grid(BoundaryCurve::unit_circle(), 6, 4, FINAL_TIME, 0.3).unwrap();
    for ctx in [CORRECTED, LITERAL] {
        for grid in [&full, &arc] {
            let out = flux(grid, &BoundaryField::zeros_on(grid), ctx);
            assert!(out.values().iter().all(|&v| v == 0.0));
        }
    }
}

#[test]
fn structural_invariants_of_both_variants() {
    let full = circle_grid(12, 7);
    let arc = make_grid(BoundaryCurve::unit_circle(), 6, 7, FINAL_TIME, 0.2).unwrap();
    let oval = make_grid(ellipse(1.4, 0.7), 10, 6, FINAL_TIME, 1.0).unwrap();
    for ctx in [CORRECTED, LITERAL] {
        for grid in [&full, &arc, &oval] {
            let op = |g: &BoundaryField<f64>| flux(grid, g, ctx);
            assert!(linearity_error(grid, 21, op) <= 1e-12);
            assert!(causality_exact(grid, 22, op));
        }
        let err = equivariance_error(&full, 23, |g| flux(&full, g, ctx));
        assert!(err <= 1e-12, "{:?}: {err:e}", ctx.mode);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn literal_transcription_on_random_ellipses(
        a in 0.5f64..1.5,
        b in 0.5f64..1.5,
        n in 1usize..=8,
        m in 1usize..=8,
        seed in 0u64..1000,
    ) {
        let grid = make_grid(ellipse(a, b), n, m, FINAL_TIME, 1.0).unwrap();
        let g = random_field(&grid, seed);
        let ours = flux(&grid, &g, LITERAL);
        let oracle = BoundaryField::from_values(
            n, m, literal_scheme(a, b, 1.0, n, m, FINAL_TIME, g.values()),
        ).unwrap();
        prop_assert!(relative_diff(&ours, &oracle) <= 1e-12);
    }

    #[test]
    fn reconstruction_is_linear(
        n in 2usize..=8,
        m in 2usize..=8,
        zeta_max in prop_oneof![Just(1.0f64), 0.05f64..0.9],
        seed in 0u64..1000,
    ) {
        let grid = make_grid(BoundaryCurve::unit_circle(), n, m, FINAL_TIME, zeta_max).unwrap();
        for ctx in [CORRECTED, LITERAL] {
            prop_assert!(linearity_error(&grid, seed, |g| flux(&grid, g, ctx)) <= 1e-12);
        }
    }
}
