//! The 2D heat kernel `G(d, tau) = exp(-|d|^2 / 4 tau) / (4 pi tau)` and its
//! normal derivatives, with `d = x - y` and `tau = t - s`.
//!
//! Every kernel is exactly zero for `tau <= 0` (Heaviside with `H(0) = 0`), which
//! removes all equal-time self terms from the discrete layer sums.

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, Vec2};

/// Which closed forms the derivative kernels use.
///
/// `Corrected` differentiates `G` analytically. `PaperLiteral` uses the literal
/// constants of the explicit flux scheme: prefactor `1/(4 tau^2)`, exponent
/// `-|d|^2 / tau`, and no `4 pi` normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMode {
    #[default]
    Corrected,
    #[serde(rename = "paper")]
    PaperLiteral,
}

impl std::fmt::Display for KernelMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelMode::Corrected => "corrected",
            KernelMode::PaperLiteral => "paper",
        })
    }
}

impl std::str::FromStr for KernelMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corrected" => Ok(KernelMode::Corrected),
            "paper" | "paper_literal" => Ok(KernelMode::PaperLiteral),
            other => Err(format!(
                "unknown kernel mode `{other}` (expected corrected|paper)"
            )),
        }
    }
}

/// Evaluation settings for the derivative kernels. Space dimension is fixed at 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KernelEvalContext {
    pub mode: KernelMode,
}

impl KernelEvalContext {
    pub const fn new(mode: KernelMode) -> Self {
        Self { mode }
    }

    pub const fn corrected() -> Self {
        Self::new(KernelMode::Corrected)
    }

    pub const fn paper_literal() -> Self {
        Self::new(KernelMode::PaperLiteral)
    }
}

/// `G(d, tau)`; zero for `tau <= 0`.
#[inline]
pub fn g_fundamental<T: Scalar>(d: Vec2<T>, tau: T) -> T {
    if !(tau > T::zero()) {
        return T::zero();
    }
    let four_tau = T::lit(4.0) * tau;
    (-d.norm_sq() / four_tau).exp() / (T::PI() * four_tau)
}

/// Spatial gradient `-d / (2 tau) G(d, tau)`; zero for `tau <= 0`.
#[inline]
pub fn g_gradient<T: Scalar>(d: Vec2<T>, tau: T) -> Vec2<T> {
    if !(tau > T::zero()) {
        return Vec2::zero();
    }
    d * (-g_fundamental(d, tau) / (T::lit(2.0) * tau))
}

/// Literal exponential factor `exp(-|d|^2 / tau)`.
#[inline]
fn literal_gaussian<T: Scalar>(d: Vec2<T>, tau: T) -> T {
    (-d.norm_sq() / tau).exp()
}

/// Derivative of `G(x - y, tau)` with respect to the source point `y` along `nu_y`.
#[inline]
pub fn normal_derivative_y<T: Scalar>(
    d: Vec2<T>,
    tau: T,
    nu_y: Vec2<T>,
    ctx: KernelEvalContext,
) -> T {
    if !(tau > T::zero()) {
        return T::zero();
    }
    match ctx.mode {
        KernelMode::Corrected => nu_y.dot(d) / (T::lit(2.0) * tau) * g_fundamental(d, tau),
        KernelMode::PaperLiteral => {
            // -nu(y).(y - x) / (4 tau^2) exp(-|x - y|^2 / tau)
            nu_y.dot(d) / (T::lit(4.0) * tau * tau) * literal_gaussian(d, tau)
        }
    }
}

/// Derivative of `G(x - y, tau)` with respect to the target point `x` along `nu_x`.
///
/// `PaperLiteral` mirrors the literal `y`-derivative with the sign of `d` flipped.
#[inline]
pub fn normal_derivative_x<T: Scalar>(
    d: Vec2<T>,
    tau: T,
    nu_x: Vec2<T>,
    ctx: KernelEvalContext,
) -> T {
    if !(tau > T::zero()) {
        return T::zero();
    }
    match ctx.mode {
        KernelMode::Corrected => -nu_x.dot(d) / (T::lit(2.0) * tau) * g_fundamental(d, tau),
        KernelMode::PaperLiteral => {
            -nu_x.dot(d) / (T::lit(4.0) * tau * tau) * literal_gaussian(d, tau)
        }
    }
}

/// Mixed second derivative `d^2 G / d nu(x) d nu(y)` at `d = x - y`.
///
/// `Corrected`: `G [nu_x.nu_y / (2 tau) - (nu_x.d)(nu_y.d) / (4 tau^2)]`.
///
/// `PaperLiteral`: `-1/(4 tau^2) nu_x . [(nu_y . grad_x)(y - x) + 2 (nu_y.(y - x)) (x - y) / tau]
/// exp(-|d|^2 / tau)`. The curl and convective terms of the vector
/// identity vanish for the pointwise-constant `nu_y` supplied here, and
/// `(nu_y . grad_x)(y - x) = -nu_y`.
#[inline]
pub fn hypersingular_kernel<T: Scalar>(
    d: Vec2<T>,
    tau: T,
    nu_x: Vec2<T>,
    nu_y: Vec2<T>,
    ctx: KernelEvalContext,
) -> T {
    if !(tau > T::zero()) {
        return T::zero();
    }
    match ctx.mode {
        KernelMode::Corrected => {
            let two_tau = T::lit(2.0) * tau;
            g_fundamental(d, tau)
                * (nu_x.dot(nu_y) / two_tau - nu_x.dot(d) * nu_y.dot(d) / (two_tau * two_tau))
        }
        KernelMode::PaperLiteral => {
            let y_minus_x = -d;
            let bracket = -nu_y + d * (T::lit(2.0) * nu_y.dot(y_minus_x) / tau);
            -nu_x.dot(bracket) / (T::lit(4.0) * tau * tau) * literal_gaussian(d, tau)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    const C: KernelEvalContext = KernelEvalContext::corrected();
    const P: KernelEvalContext = KernelEvalContext::paper_literal();

    #[test]
    fn fundamental_values() {
        // 1/(4 pi) and e^{-1/4}/(4 pi), evaluated independently in extended precision.
        assert!((g_fundamental(v(0.0, 0.0), 1.0) - 7.957_747_154_594_767e-2).abs() < 1e-16);
        assert!((g_fundamental(v(1.0, 0.0), 1.0) - 6.197_499_715_482_648e-2).abs() < 1e-15);
        assert_eq!(g_fundamental(v(3.0, 4.0), -2.0), 0.0);
    }

    #[test]
    fn gradient_values() {
        assert_eq!(g_gradient(v(0.0, 0.0), 1.0), v(-0.0, -0.0));
        let g = g_gradient(v(1.0, 0.0), 1.0);
        assert!((g.x + 3.098_749_857_741_324e-2).abs() < 1e-15);
        assert_eq!(g.y, 0.0);
        assert_eq!(g_gradient(v(0.0, 1.0), 0.0), Vec2::zero());
    }

    #[test]
    fn normal_derivative_values() {
        let val = normal_derivative_y(v(-1.0, 0.0), 1.0, v(1.0, 0.0), C);
        assert!((val + (-0.25f64).exp() / (8.0 * PI)).abs() < 1e-16);
        assert_eq!(normal_derivative_y(v(0.0, 1.0), 1.0, v(1.0, 0.0), C), 0.0);
        assert_eq!(normal_derivative_y(v(0.0, 1.0), 1.0, v(1.0, 0.0), P), 0.0);
        assert_eq!(normal_derivative_y(v(0.3, 1.0), -0.5, v(1.0, 0.0), C), 0.0);
        assert_eq!(normal_derivative_y(v(0.3, 1.0), -0.5, v(1.0, 0.0), P), 0.0);
    }

    #[test]
    fn paper_literal_normal_derivative_transcription() {
        // -nu(y).(y-x)/(4 tau^2) exp(-|x-y|^2/tau) with x=(0.2,0.1), y=(1,0.5)
        let (x, y, nu, tau) = (v(0.2, 0.1), v(1.0, 0.5), v(0.6, 0.8), 0.7);
        let expected = -nu.dot(y - x) / (4.0 * tau * tau) * (-(x - y).norm_sq() / tau).exp();
        let got = normal_derivative_y(x - y, tau, nu, P);
        assert!((got - expected).abs() < 1e-16);
    }

    #[test]
    fn hypersingular_values() {
        let k = hypersingular_kernel(v(0.0, 0.0), 1.0, v(1.0, 0.0), v(1.0, 0.0), C);
        assert!((k - 1.0 / (8.0 * PI)).abs() < 1e-16);
        let a = hypersingular_kernel(v(0.3, -0.2), 0.7, v(1.0, 0.0), v(0.0, 1.0), C);
        let b = hypersingular_kernel(v(-0.3, 0.2), 0.7, v(0.0, 1.0), v(1.0, 0.0), C);
        assert!((a - b).abs() < 1e-16);
        for ctx in [C, P] {
            assert_eq!(
                hypersingular_kernel(v(0.3, -0.2), 0.0, v(1.0, 0.0), v(0.0, 1.0), ctx),
                0.0
            );
        }
    }

    #[test]
    fn paper_literal_hypersingular_matches_flux_scheme_term() {
        // One term of the literal flux scheme divided by -h h' g:
        // 1/(4 tau^2) a.[-b + 2 (b.(y - x)) (x - y)/tau] exp(-|x-y|^2/tau)
        let (x, y, a, b, tau) = (v(0.9, 0.3), v(-0.1, 0.7), v(0.0, 1.0), v(-2.0, 5.0), 1.3);
        let term = a.dot(-b + (x - y) * (2.0 * b.dot(y - x) / tau)) / (4.0 * tau * tau)
            * (-(x - y).norm_sq() / tau).exp();
        let k = hypersingular_kernel(x - y, tau, a, b, P);
        assert!((-k - term).abs() < 1e-15);
    }

    #[test]
    fn f32_kernels_agree_with_f64() {
        let d32 = Vec2::<f32>::new(0.4, -0.3);
        let d64 = d32.cast::<f64>();
        let n = Vec2::<f32>::new(0.6, 0.8);
        let k32 = hypersingular_kernel(d32, 0.5f32, n, n, KernelEvalContext::corrected());
        let k64 = hypersingular_kernel(d64, 0.5, n.cast(), n.cast(), C);
        assert!(((k32 as f64) - k64).abs() < 1e-6 * k64.abs());
    }

    proptest! {
        #[test]
        fn causal_for_nonpositive_time(
            dx in -3.0f64..3.0, dy in -3.0f64..3.0, tau in -5.0f64..=0.0, a in 0.0f64..6.3, b in 0.0f64..6.3,
        ) {
            let d = v(dx, dy);
            let (na, nb) = (v(a.cos(), a.sin()), v(b.cos(), b.sin()));
            prop_assert_eq!(g_fundamental(d, tau), 0.0);
            prop_assert_eq!(g_gradient(d, tau), Vec2::zero());
            for ctx in [C, P] {
                prop_assert_eq!(normal_derivative_y(d, tau, na, ctx), 0.0);
                prop_assert_eq!(normal_derivative_x(d, tau, na, ctx), 0.0);
                prop_assert_eq!(hypersingular_kernel(d, tau, na, nb, ctx), 0.0);
            }
        }

        #[test]
        fn adjoint_is_reflected_double_layer(
            dx in -2.0f64..2.0, dy in -2.0f64..2.0, tau in 0.05f64..4.0, a in 0.0f64..6.3,
        ) {
            let n = v(a.cos(), a.sin());
            for ctx in [C, P] {
                let lhs = normal_derivative_x(v(dx, dy), tau, n, ctx);
                let rhs = normal_derivative_y(v(-dx, -dy), tau, n, ctx);
                prop_assert!((lhs - rhs).abs() <= 1e-15 * lhs.abs().max(1e-300));
            }
        }

        #[test]
        fn hypersingular_symmetric(
            dx in -2.0f64..2.0, dy in -2.0f64..2.0, tau in 0.05f64..4.0, a in 0.0f64..6.3, b in 0.0f64..6.3,
        ) {
            let (na, nb) = (v(a.cos(), a.sin()), v(b.cos(), b.sin()));
            let k1 = hypersingular_kernel(v(dx, dy), tau, na, nb, C);
            let k2 = hypersingular_kernel(v(-dx, -dy), tau, nb, na, C);
            prop_assert!((k1 - k2).abs() <= 1e-12 * k1.abs().max(1e-12));
        }
    }
}
