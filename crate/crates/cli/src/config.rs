//! Run configuration. JSON, unknown keys rejected.
//!
//! ```json
//! {
//!   "m": 1,
//!   "F": "z1^3/6",
//!   "base": [[0.0, 1.0]],
//!   "plan": {"kind": "grid", "x": [-1, 1, 9], "v": [0.5, 2, 9]},
//!   "tolerances": {"conjugacy": 1e-6, "degenerate_margin": 0.1},
//!   "out": {"report": "report.json", "csv": "samples.csv", "obj": "surface.obj"}
//! }
//! ```
//!
//! `x` and `v` are either one `[lo, hi, n]` triple used for every complex
//! axis or an array of `m` triples. A random plan is
//! `{"kind": "random", "count": 200, "seed": 7, "box": {"x": [lo, hi], "v": [lo, hi]}}`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sksphere::{Grid, GridAxis, Prepotential, ResidualKind, Screening, Tolerances};

use crate::CliError;

/// Tolerance key that sets the screening margin instead of a residual tolerance.
pub const DEGENERATE_MARGIN_KEY: &str = "degenerate_margin";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub m: usize,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<[f64; 2]>>,
    pub plan: Plan,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub out: OutPaths,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Plan {
    Grid { x: AxisSpec, v: AxisSpec },
    Random {
        count: usize,
        seed: u64,
        #[serde(rename = "box")]
        bounds: RandomBox,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Shared((f64, f64, usize)),
    PerAxis(Vec<(f64, f64, usize)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomBox {
    pub x: [f64; 2],
    pub v: [f64; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj: Option<PathBuf>,
}

impl OutPaths {
    pub fn report_path(&self) -> PathBuf {
        self.report.clone().unwrap_or_else(|| "report.json".into())
    }

    pub fn csv_path(&self) -> PathBuf {
        self.csv.clone().unwrap_or_else(|| "samples.csv".into())
    }

    pub fn obj_path(&self) -> PathBuf {
        self.obj.clone().unwrap_or_else(|| "surface.obj".into())
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl AxisSpec {
    fn triples(&self, m: usize) -> Result<Vec<(f64, f64, usize)>, CliError> {
        match self {
            AxisSpec::Shared(t) => Ok(vec![*t; m]),
            AxisSpec::PerAxis(v) if v.len() == m => Ok(v.clone()),
            AxisSpec::PerAxis(v) => Err(config_error(format!("expected {m} axis triples, got {}", v.len()))),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.m == 0 {
            return Err(config_error("m must be at least 1"));
        }
        if let Some(base) = &self.base {
            if base.len() != self.m {
                return Err(config_error(format!("base has {} coordinates, expected {}", base.len(), self.m)));
            }
        }
        match &self.plan {
            Plan::Grid { .. } => {
                self.grid()?;
            }
            Plan::Random { count, bounds, .. } => {
                if *count == 0 {
                    return Err(config_error("random plan needs count ≥ 1"));
                }
                for (name, [lo, hi]) in [("x", bounds.x), ("v", bounds.v)] {
                    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                        return Err(config_error(format!("random box {name} range must satisfy lo ≤ hi")));
                    }
                }
            }
        }
        for (k, v) in &self.tolerances {
            if k != DEGENERATE_MARGIN_KEY && ResidualKind::from_name(k).is_none() {
                return Err(config_error(format!("unknown tolerance key {k:?}")));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(config_error(format!("tolerance {k:?} must be a finite non-negative number")));
            }
        }
        self.prepotential()?;
        Ok(())
    }

    pub fn prepotential(&self) -> Result<Prepotential, CliError> {
        Prepotential::parse(&self.f, self.m).map_err(|e| config_error(format!("prepotential: {e}")))
    }

    /// The grid of a grid plan; `None` for random plans.
    pub fn grid(&self) -> Result<Option<Grid>, CliError> {
        let Plan::Grid { x, v } = &self.plan else {
            return Ok(None);
        };
        let mut axes = Vec::with_capacity(2 * self.m);
        for (lo, hi, n) in x.triples(self.m)?.into_iter().chain(v.triples(self.m)?) {
            if n < 2 {
                return Err(config_error("grid resolution must be at least 2 per axis"));
            }
            axes.push(GridAxis::new(lo, hi, n).map_err(|e| config_error(e.to_string()))?);
        }
        Grid::new(axes).map(Some).map_err(|e| config_error(e.to_string()))
    }

    /// Plan points in plan order.
    pub fn points(&self) -> Result<Vec<Vec<Complex64>>, CliError> {
        match &self.plan {
            Plan::Grid { .. } => {
                let grid = self.grid()?.expect("grid plan");
                Ok((0..grid.len()).map(|i| grid.z(i)).collect())
            }
            Plan::Random { count, seed, bounds } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..*count)
                    .map(|_| {
                        (0..self.m)
                            .map(|_| {
                                let x = rng.gen_range(bounds.x[0]..=bounds.x[1]);
                                let v = rng.gen_range(bounds.v[0]..=bounds.v[1]);
                                Complex64::new(x, v)
                            })
                            .collect()
                    })
                    .collect())
            }
        }
    }

    pub fn base(&self) -> Option<Vec<Complex64>> {
        self.base.as_ref().map(|b| b.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }

    /// Residual tolerances (scaled) and the screening rule.
    pub fn tolerances(&self, scale: f64) -> (Tolerances, Screening) {
        let mut tol = Tolerances::default();
        let mut screening = Screening::default();
        for (k, v) in &self.tolerances {
            match ResidualKind::from_name(k) {
                Some(kind) => tol.set(kind, *v),
                None => screening.margin = *v,
            }
        }
        (tol.scaled(scale), screening)
    }
}
