use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{make_grid, BoundaryCurve, SpaceTimeGrid, TrigSeries};
use crate::kernels::{KernelEvalContext, KernelMode};
use crate::potentials::BoundaryField;
use crate::scalar::Vec2;
use crate::synthetic::{
    paper_example_dirichlet, point_source_flux, point_source_trace, PointSourceSolution,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        radius: f64,
    },
    Trigonometric {
        x: TrigSeries<f64>,
        y: TrigSeries<f64>,
    },
}

impl CurveSpec {
    pub fn build(&self) -> Result<BoundaryCurve<f64>> {
        match self {
            CurveSpec::Circle { radius } => BoundaryCurve::circle(*radius),
            CurveSpec::Trigonometric { x, y } => BoundaryCurve::trigonometric(x.clone(), y.clone()),
        }
    }
}

/// Generator for the Dirichlet data `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    /// Trace of the heat kernel released at the exterior point `x0`.
    PointSource {
        x0: [f64; 2],
    },
    /// `g = 2 |x| cos(3t)`.
    PaperExample {},
    Zero {},
}

impl DataSpec {
    pub fn dirichlet(&self, grid: &SpaceTimeGrid<f64>) -> Result<BoundaryField<f64>> {
        match self {
            DataSpec::PointSource { x0 } => {
                let ps = PointSourceSolution::new(Vec2::from(*x0), grid.curve())?;
                point_source_trace(&ps, grid)
            }
            DataSpec::PaperExample {} => Ok(paper_example_dirichlet(grid)),
            DataSpec::Zero {} => Ok(BoundaryField::zeros_on(grid)),
        }
    }

    /// Exact flux of the generated data, when a closed form exists.
    pub fn exact_flux(&self, grid: &SpaceTimeGrid<f64>) -> Result<Option<BoundaryField<f64>>> {
        match self {
            DataSpec::PointSource { x0 } => {
                let ps = PointSourceSolution::new(Vec2::from(*x0), grid.curve())?;
                point_source_flux(&ps, grid).map(Some)
            }
            DataSpec::PaperExample {} => Ok(None),
            DataSpec::Zero {} => Ok(Some(BoundaryField::zeros_on(grid))),
        }
    }
}

/// Closed-form solution used for error metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceSpec {
    PointSource { x0: [f64; 2] },
}

impl ReferenceSpec {
    pub fn solution(&self, curve: &BoundaryCurve<f64>) -> Result<PointSourceSolution<f64>> {
        match self {
            ReferenceSpec::PointSource { x0 } => PointSourceSolution::new(Vec2::from(*x0), curve),
        }
    }
}

/// Single-layer density used when rebuilding the interior temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldFlux {
    #[default]
    Reconstructed,
    /// The reference solution's exact flux.
    Reference,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_json: Option<PathBuf>,
}

fn default_zeta_max() -> f64 {
    1.0
}

/// One experiment, read from a single JSON document. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub curve: CurveSpec,
    /// Space nodes `N` (or `M` on an arc).
    pub n_space: usize,
    /// Time nodes `N'` (or `M'`).
    pub n_time: usize,
    pub final_time: f64,
    /// 1 for the full boundary, `zeta*` for the measured arc.
    #[serde(default = "default_zeta_max")]
    pub zeta_max: f64,
    #[serde(default)]
    pub kernel_mode: KernelMode,
    pub data: DataSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Interior targets `[x1, x2, t]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<[f64; 3]>,
    #[serde(default)]
    pub field_flux: FieldFlux,
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn context(&self) -> KernelEvalContext {
        KernelEvalContext::new(self.kernel_mode)
    }

    pub fn grid(&self) -> Result<SpaceTimeGrid<f64>> {
        make_grid(
            self.curve.build()?,
            self.n_space,
            self.n_time,
            self.final_time,
            self.zeta_max,
        )
    }

    pub fn targets(&self) -> Vec<(Vec2<f64>, f64)> {
        self.targets
            .iter()
            .map(|t| (Vec2::new(t[0], t[1]), t[2]))
            .collect()
    }

    /// Checks grid preconditions and generator consistency without running anything.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_space == 0 || self.n_time == 0 {
            return fail("n_space and n_time must be at least 1".into());
        }
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return fail(format!(
                "final_time must be positive, got {}",
                self.final_time
            ));
        }
        if !(self.zeta_max > 0.0 && self.zeta_max <= 1.0) {
            return fail(format!(
                "zeta_max must lie in (0, 1], got {}",
                self.zeta_max
            ));
        }
        let curve = self
            .curve
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        if let DataSpec::PointSource { x0 } = &self.data {
            PointSourceSolution::new(Vec2::from(*x0), &curve)
                .map_err(|e| Error::Config(format!("data: {e}")))?;
        }
        if let Some(reference) = &self.reference {
            reference
                .solution(&curve)
                .map_err(|e| Error::Config(format!("reference: {e}")))?;
        }
        if self.field_flux == FieldFlux::Reference && self.reference.is_none() {
            return fail("field_flux = reference needs a reference solution".into());
        }
        for t in &self.targets {
            if !t.iter().all(|v| v.is_finite()) || !(t[2] > 0.0 && t[2] <= self.final_time) {
                return fail(format!(
                    "target {t:?} needs finite coordinates and t in (0, final_time]"
                ));
            }
        }
        Ok(())
    }
}
