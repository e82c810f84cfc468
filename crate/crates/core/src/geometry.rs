//! Closed parametric boundary curves and their space-time discretization.
//!
//! A curve is a 1-periodic map `zeta -> gamma(zeta)` traversed counterclockwise.
//! The grid places space nodes at `zeta_i = i * zeta_max / N` (`i = 1..=N`) and
//! time nodes at `t_j = j * T / N'` (`j = 1..=N'`); node index 0 in the Rust
//! arrays is node 1 in the 1-based numbering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Vec2};

/// Below this tangent length the normal is undefined.
pub const DEGENERATE_TANGENT_TOL: f64 = 1e-12;

/// Samples used by inside/outside and distance queries on non-circular curves.
const QUERY_SAMPLES: usize = 8192;

/// Truncated Fourier series `c + sum_k a_k cos(2 pi k z) + b_k sin(2 pi k z)`, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigSeries<T> {
    pub constant: T,
    #[serde(default)]
    pub cos: Vec<T>,
    #[serde(default)]
    pub sin: Vec<T>,
}

impl<T: Scalar> TrigSeries<T> {
    pub fn new(constant: T, cos: Vec<T>, sin: Vec<T>) -> Self {
        Self { constant, cos, sin }
    }

    fn value(&self, zeta: T) -> T {
        let mut acc = self.constant;
        for (k, a) in self.cos.iter().enumerate() {
            acc += *a * (T::two_pi() * T::from_usize_exact(k + 1) * zeta).cos();
        }
        for (k, b) in self.sin.iter().enumerate() {
            acc += *b * (T::two_pi() * T::from_usize_exact(k + 1) * zeta).sin();
        }
        acc
    }

    fn derivative(&self, zeta: T) -> T {
        let mut acc = T::zero();
        for (k, a) in self.cos.iter().enumerate() {
            let w = T::two_pi() * T::from_usize_exact(k + 1);
            acc -= *a * w * (w * zeta).sin();
        }
        for (k, b) in self.sin.iter().enumerate() {
            let w = T::two_pi() * T::from_usize_exact(k + 1);
            acc += *b * w * (w * zeta).cos();
        }
        acc
    }

    fn all_finite(&self) -> bool {
        self.constant.is_finite()
            && self.cos.iter().all(|c| c.is_finite())
            && self.sin.iter().all(|c| c.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind<T> {
    /// Circle of the given radius centred at the origin.
    Circle { radius: T },
    /// Independent trigonometric polynomials for each coordinate.
    Trigonometric { x: TrigSeries<T>, y: TrigSeries<T> },
}

/// Analytic, 1-periodic parameterization of the domain boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve<T> {
    kind: CurveKind<T>,
}

impl<T: Scalar> BoundaryCurve<T> {
    pub fn circle(radius: T) -> Result<Self> {
        if !(radius.is_finite() && radius > T::zero()) {
            return Err(Error::invalid(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            kind: CurveKind::Circle { radius },
        })
    }

    pub fn unit_circle() -> Self {
        Self {
            kind: CurveKind::Circle { radius: T::one() },
        }
    }

    pub fn trigonometric(x: TrigSeries<T>, y: TrigSeries<T>) -> Result<Self> {
        if !(x.all_finite() && y.all_finite()) {
            return Err(Error::invalid(
                "trigonometric curve coefficients must be finite",
            ));
        }
        Ok(Self {
            kind: CurveKind::Trigonometric { x, y },
        })
    }

    pub fn kind(&self) -> &CurveKind<T> {
        &self.kind
    }

    /// `gamma(zeta)`, with `zeta` reduced modulo 1.
    pub fn point(&self, zeta: T) -> Vec2<T> {
        let z = zeta - zeta.floor();
        match &self.kind {
            CurveKind::Circle { radius } => {
                let (s, c) = (T::two_pi() * z).sin_cos();
                Vec2::new(*radius * c, *radius * s)
            }
            CurveKind::Trigonometric { x, y } => Vec2::new(x.value(z), y.value(z)),
        }
    }

    /// `gamma'(zeta)`.
    pub fn tangent(&self, zeta: T) -> Vec2<T> {
        let z = zeta - zeta.floor();
        match &self.kind {
            CurveKind::Circle { radius } => {
                let (s, c) = (T::two_pi() * z).sin_cos();
                let speed = T::two_pi() * *radius;
                Vec2::new(-speed * s, speed * c)
            }
            CurveKind::Trigonometric { x, y } => Vec2::new(x.derivative(z), y.derivative(z)),
        }
    }

    pub fn speed(&self, zeta: T) -> T {
        self.tangent(zeta).norm()
    }

    /// Outward unit normal `(gamma'_2, -gamma'_1) / |gamma'|`.
    pub fn normal(&self, zeta: T) -> Result<Vec2<T>> {
        let tangent = self.tangent(zeta);
        let speed = tangent.norm();
        if !(speed > T::lit(DEGENERATE_TANGENT_TOL)) {
            return Err(Error::DegenerateTangent {
                zeta: zeta.to_f64().unwrap_or(f64::NAN),
                speed: speed.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(tangent.perp_cw() * speed.recip())
    }

    /// Signed enclosed area from a uniform rule on `samples` parameter values.
    /// Positive for counterclockwise traversal.
    pub fn signed_area(&self, samples: usize) -> T {
        let n = samples.max(3);
        let dz = T::one() / T::from_usize_exact(n);
        let mut acc = T::zero();
        for s in 0..n {
            let z = T::from_usize_exact(s) * dz;
            acc += self.point(z).cross(self.tangent(z));
        }
        acc * dz * T::lit(0.5)
    }

    /// Winding number of the curve around `p`, from a polygon with `samples` vertices.
    pub fn winding_number(&self, p: Vec2<T>, samples: usize) -> i64 {
        let n = samples.max(3);
        let dz = T::one() / T::from_usize_exact(n);
        let mut total = T::zero();
        let mut prev = self.point(T::zero()) - p;
        for s in 1..=n {
            let cur = self.point(T::from_usize_exact(s) * dz) - p;
            total += prev.cross(cur).atan2(prev.dot(cur));
            prev = cur;
        }
        (total / T::two_pi()).round().to_i64().unwrap_or(0)
    }

    /// True when `p` lies strictly inside the curve.
    pub fn contains(&self, p: Vec2<T>) -> bool {
        match &self.kind {
            CurveKind::Circle { radius } => p.norm() < *radius,
            CurveKind::Trigonometric { .. } => self.winding_number(p, QUERY_SAMPLES) != 0,
        }
    }

    /// Distance from `p` to the curve (exact for circles, densely sampled otherwise).
    pub fn distance_to(&self, p: Vec2<T>) -> T {
        match &self.kind {
            CurveKind::Circle { radius } => (p.norm() - *radius).abs(),
            CurveKind::Trigonometric { .. } => {
                let dz = T::one() / T::from_usize_exact(QUERY_SAMPLES);
                (0..QUERY_SAMPLES)
                    .map(|s| (self.point(T::from_usize_exact(s) * dz) - p).norm())
                    .fold(T::infinity(), T::min)
            }
        }
    }
}

/// Space-time tensor grid on the boundary (or on the arc `zeta in [0, zeta_max]`)
/// with node geometry cached.
#[derive(Debug, Clone)]
pub struct SpaceTimeGrid<T> {
    curve: BoundaryCurve<T>,
    n_space: usize,
    n_time: usize,
    final_time: T,
    zeta_max: T,
    space_step: T,
    time_step: T,
    zeta: Vec<T>,
    time: Vec<T>,
    points: Vec<Vec2<T>>,
    tangents: Vec<Vec2<T>>,
    normals: Vec<Vec2<T>>,
    speeds: Vec<T>,
}

impl<T: Scalar> SpaceTimeGrid<T> {
    pub fn new(
        curve: BoundaryCurve<T>,
        n_space: usize,
        n_time: usize,
        final_time: T,
        zeta_max: T,
    ) -> Result<Self> {
        if n_space == 0 || n_time == 0 {
            return Err(Error::invalid(format!(
                "node counts must be positive (N = {n_space}, N' = {n_time})"
            )));
        }
        if !(final_time.is_finite() && final_time > T::zero()) {
            return Err(Error::invalid(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        if !(zeta_max > T::zero() && zeta_max <= T::one()) {
            return Err(Error::invalid(format!(
                "zeta_max must lie in (0, 1], got {zeta_max}"
            )));
        }

        let area_samples = (n_space as f64 / zeta_max.to_f64().unwrap_or(1.0))
            .round()
            .clamp(16.0, 65536.0) as usize;
        let area = curve.signed_area(area_samples);
        if !(area > T::zero()) {
            return Err(Error::Orientation {
                area: area.to_f64().unwrap_or(f64::NAN),
            });
        }

        let nf = T::from_usize_exact(n_space);
        let mf = T::from_usize_exact(n_time);
        let zeta: Vec<T> = (1..=n_space)
            .map(|i| zeta_max * T::from_usize_exact(i) / nf)
            .collect();
        let time: Vec<T> = (1..=n_time)
            .map(|j| final_time * T::from_usize_exact(j) / mf)
            .collect();
        let points = zeta.iter().map(|&z| curve.point(z)).collect();
        let tangents: Vec<Vec2<T>> = zeta.iter().map(|&z| curve.tangent(z)).collect();
        let normals = zeta
            .iter()
            .map(|&z| curve.normal(z))
            .collect::<Result<Vec<_>>>()?;
        let speeds = tangents.iter().map(|t| t.norm()).collect();

        Ok(Self {
            curve,
            n_space,
            n_time,
            final_time,
            zeta_max,
            space_step: zeta_max / nf,
            time_step: final_time / mf,
            zeta,
            time,
            points,
            tangents,
            normals,
            speeds,
        })
    }

    pub fn curve(&self) -> &BoundaryCurve<T> {
        &self.curve
    }
    /// Number of space nodes (`N`, or `M` on an arc).
    pub fn n_space(&self) -> usize {
        self.n_space
    }
    /// Number of time nodes (`N'`, or `M'` on an arc).
    pub fn n_time(&self) -> usize {
        self.n_time
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.n_space, self.n_time)
    }
    pub fn final_time(&self) -> T {
        self.final_time
    }
    pub fn zeta_max(&self) -> T {
        self.zeta_max
    }
    pub fn is_full_boundary(&self) -> bool {
        self.zeta_max == T::one()
    }
    /// Parameter step `h = zeta_max / N`.
    pub fn space_step(&self) -> T {
        self.space_step
    }
    /// Time step `h' = T / N'`.
    pub fn time_step(&self) -> T {
        self.time_step
    }
    /// Product weight `h * h'` of the tensor rectangle rule.
    pub fn cell_weight(&self) -> T {
        self.space_step * self.time_step
    }
    pub fn zeta(&self) -> &[T] {
        &self.zeta
    }
    pub fn times(&self) -> &[T] {
        &self.time
    }
    pub fn points(&self) -> &[Vec2<T>] {
        &self.points
    }
    pub fn tangents(&self) -> &[Vec2<T>] {
        &self.tangents
    }
    pub fn normals(&self) -> &[Vec2<T>] {
        &self.normals
    }
    pub fn speeds(&self) -> &[T] {
        &self.speeds
    }

    /// Time difference `t_j - t_l` for a lag `j - l`, as `T * lag / N'`.
    pub fn lag_time(&self, lag: usize) -> T {
        self.final_time * T::from_usize_exact(lag) / T::from_usize_exact(self.n_time)
    }
}

/// Builds a [`SpaceTimeGrid`]; see [`SpaceTimeGrid::new`].
pub fn make_grid<T: Scalar>(
    curve: BoundaryCurve<T>,
    n_space: usize,
    n_time: usize,
    final_time: T,
    zeta_max: T,
) -> Result<SpaceTimeGrid<T>> {
    SpaceTimeGrid::new(curve, n_space, n_time, final_time, zeta_max)
}

pub fn curve_point<T: Scalar>(curve: &BoundaryCurve<T>, zeta: T) -> Vec2<T> {
    curve.point(zeta)
}

pub fn curve_tangent<T: Scalar>(curve: &BoundaryCurve<T>, zeta: T) -> Vec2<T> {
    curve.tangent(zeta)
}

pub fn outward_normal<T: Scalar>(curve: &BoundaryCurve<T>, zeta: T) -> Result<Vec2<T>> {
    curve.normal(zeta)
}
