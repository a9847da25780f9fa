//! Experiment configuration files.
//!
//! A config is a TOML document with top-level keys and a few sections:
//!
//! ```toml
//! experiment = "figure1"      # see `Experiment`
//! output = "out/figure1"      # writes out/figure1.csv and out/figure1.json
//!
//! [basis]
//! family = "sine"             # sine | box | exponential | haar
//! dim = 2                     # box only
//! ordering = "cube"           # box only: cube | sorted
//!
//! [symbol]
//! kind = "power"              # power | plateau | constant
//! p = 2.0                     # power
//! floor = 1.0                 # plateau
//! value = 1.0                 # constant
//!
//! [run]
//! n_list = [1, 5, 50, 500]
//! p_list = [1.0, 2.0]         # lp
//! lambda_list = [25.0]        # count
//! m_max = 1000                # count
//! j_list = [1.0, 10.0]        # tightness
//!
//! [grid]
//! min = -2.0
//! max = 2.0
//! step = 0.005
//!
//! [tolerances]
//! abs = 1e-8
//! rel = 1e-6
//! ```
//!
//! A relative `output` is resolved against the directory holding the config.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bases::{BasisFamily, BoxOrdering};
use crate::domains::SymbolSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Figure1,
    Weyl,
    Bathtub,
    Count,
    Lp,
    Tightness,
    Polya,
    Kernel,
    Mass,
    Scheffe,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Figure1,
        Experiment::Weyl,
        Experiment::Bathtub,
        Experiment::Count,
        Experiment::Lp,
        Experiment::Tightness,
        Experiment::Polya,
        Experiment::Kernel,
        Experiment::Mass,
        Experiment::Scheffe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Figure1 => "figure1",
            Experiment::Weyl => "weyl",
            Experiment::Bathtub => "bathtub",
            Experiment::Count => "count",
            Experiment::Lp => "lp",
            Experiment::Tightness => "tightness",
            Experiment::Polya => "polya",
            Experiment::Kernel => "kernel",
            Experiment::Mass => "mass",
            Experiment::Scheffe => "scheffe",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Figure1 => "scaled trace G_N(k) on a grid, one column per N",
            Experiment::Weyl => "normalized Weyl sums against n/(n+p) kappa_F^p",
            Experiment::Bathtub => "bathtub lower bound against the mu_N moment",
            Experiment::Count => "eigenvalue counts against the counting bound",
            Experiment::Lp => "L^p norms of G_N against h^(1-1/p)",
            Experiment::Tightness => "mu_N moments and sublevel masses",
            Experiment::Polya => "mass balance across the sphere of radius sqrt(lambda_m)",
            Experiment::Kernel => "distance of the rescaled kernel to its limit",
            Experiment::Mass => "mass in the Fermi ball, L2 error and plateau diagnostics",
            Experiment::Scheffe => "Scheffe example f_N(pi N x / sqrt 2) against its limit",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Sine,
    Box,
    Exponential,
    Haar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingTag {
    Cube,
    Sorted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub family: FamilyTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<OrderingTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolTag {
    Power,
    Plateau,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    pub kind: SymbolTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl Default for SymbolConfig {
    fn default() -> Self {
        SymbolConfig {
            kind: SymbolTag::Power,
            p: Some(2.0),
            floor: None,
            value: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_list: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { abs: 1e-8, rel: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub output: PathBuf,
    pub basis: BasisConfig,
    #[serde(default)]
    pub symbol: SymbolConfig,
    pub run: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let ns = &self.run.n_list;
        if ns.is_empty() {
            return bad("run.n_list must not be empty");
        }
        if ns.contains(&0) {
            return bad("run.n_list entries must be at least 1");
        }
        if ns.windows(2).any(|w| w[0] >= w[1]) {
            return bad("run.n_list must be strictly increasing");
        }
        if let Some(g) = &self.grid {
            if !(g.step > 0.0) || !g.step.is_finite() {
                return bad("grid.step must be positive");
            }
            if !(g.min.is_finite() && g.max.is_finite()) || g.max < g.min {
                return bad("grid needs finite min <= max");
            }
        }
        if !(self.tolerances.abs >= 0.0 && self.tolerances.rel >= 0.0) {
            return bad("tolerances must be non-negative");
        }
        if self.output.as_os_str().is_empty() {
            return bad("output must not be empty");
        }
        self.basis_family()?;
        self.symbol_spec()?;
        Ok(())
    }

    pub fn basis_family(&self) -> Result<BasisFamily, ConfigError> {
        let b = &self.basis;
        if b.family != FamilyTag::Box && (b.dim.is_some() || b.ordering.is_some()) {
            return bad("basis.dim and basis.ordering apply to the box family only");
        }
        Ok(match b.family {
            FamilyTag::Sine => BasisFamily::DirichletSine,
            FamilyTag::Exponential => BasisFamily::ExponentialCircle,
            FamilyTag::Haar => BasisFamily::Haar,
            FamilyTag::Box => {
                let dim = b.dim.ok_or_else(|| ConfigError("box basis needs basis.dim".into()))?;
                let ordering = match b.ordering.unwrap_or(OrderingTag::Cube) {
                    OrderingTag::Cube => BoxOrdering::IndexCube,
                    OrderingTag::Sorted => BoxOrdering::EigenSorted,
                };
                BasisFamily::dirichlet_box(dim, ordering).map_err(|e| ConfigError(e.to_string()))?
            }
        })
    }

    pub fn symbol_spec(&self) -> Result<SymbolSpec, ConfigError> {
        let n = self.basis_family()?.dim();
        let s = &self.symbol;
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| ConfigError(format!("symbol.{key} is required")));
        let spec = match s.kind {
            SymbolTag::Power => SymbolSpec::power(n, need(s.p, "p")?),
            SymbolTag::Plateau => SymbolSpec::plateau(n, need(s.floor, "floor")?),
            SymbolTag::Constant => SymbolSpec::constant(n, need(s.value, "value")?),
        };
        spec.map_err(|e| ConfigError(e.to_string()))
    }

    pub fn grid(&self) -> Result<GridConfig, ConfigError> {
        self.grid
            .ok_or_else(|| ConfigError(format!("experiment {} needs a [grid] section", self.experiment)))
    }

    /// Output prefix, resolved against `base` when relative.
    pub fn output_prefix(&self, base: &Path) -> PathBuf {
        if self.output.is_absolute() {
            self.output.clone()
        } else {
            base.join(&self.output)
        }
    }
}
