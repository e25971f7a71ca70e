use std::path::{Path, PathBuf};

use maglab_core::approximation::{SampleScheme, SequenceSpec, SuiteConfig};
use maglab_core::geometry::DEFAULT_ENUMERATION_CAP;
use maglab_core::metric::Metric;
use maglab_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Mag,
    Ivol,
    ConvexMag,
    Sweep,
    Diverge,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed excess in the suite inequalities, relative to `max(1, |rhs|)`.
    pub check: f64,
    /// Allowed excess in sweep and divergence table orderings.
    pub table: f64,
    /// Triangle-inequality slack for `--check-triangle`.
    pub triangle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            check: 1e-8,
            table: 1e-8,
            triangle: maglab_core::io::TRIANGLE_TOL,
        }
    }
}

/// Everything a run needs. Loaded from `--config`, then overridden by
/// `MAGLAB_*` variables, then by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub metric: Option<Metric>,
    pub check_triangle: bool,
    pub scheme: SampleScheme,
    pub budget: usize,
    pub cap: usize,
    /// Subsets sampled per `k` above the cap; 0 disables Monte Carlo.
    pub mc_samples: usize,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    pub t_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub spec: SequenceSpec,
    pub interior_samples: usize,
    pub count: usize,
    pub max_vertices: usize,
    pub max_dim: usize,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        let suite = SuiteConfig::default();
        Self {
            command: None,
            input: None,
            output: None,
            metric: None,
            check_triangle: false,
            scheme: SampleScheme::default(),
            budget: 256,
            cap: DEFAULT_ENUMERATION_CAP,
            mc_samples: 0,
            seed: 0,
            threads: 0,
            t_list: vec![1.0, 0.1, 0.01, 0.001],
            n_list: vec![10, 100],
            spec: SequenceSpec::Harmonic,
            interior_samples: 0,
            count: suite.count,
            max_vertices: suite.max_vertices,
            max_dim: suite.max_dim,
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let tol = &self.tolerances;
        for (name, v) in [("check", tol.check), ("table", tol.table), ("triangle", tol.triangle)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("tolerance '{name}' must be positive, got {v}")));
            }
        }
        if self.cap < 1 {
            return Err(Error::validation("cap must be at least 1"));
        }
        if self.budget < 1 {
            return Err(Error::validation("budget must be at least 1"));
        }
        if self.max_vertices < 1 || self.max_dim < 1 {
            return Err(Error::validation("max_vertices and max_dim must be at least 1"));
        }
        self.spec.validate()
    }

    pub fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            count: self.count,
            seed: self.seed,
            max_vertices: self.max_vertices,
            max_dim: self.max_dim,
            tol: self.tolerances.check,
            ..SuiteConfig::default()
        }
    }
}

/// `harmonic`, `power:<p>`, `geometric:<r>`, or a path to a JSON sequence.
pub fn parse_spec(s: &str) -> Result<SequenceSpec> {
    let named = s == "harmonic" || s.starts_with("power:") || s.starts_with("geometric:");
    if named {
        return s.parse();
    }
    let text = std::fs::read_to_string(s).map_err(|e| Error::Parse(format!("sequence file {s}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("sequence file {s}: {e}")))
}
