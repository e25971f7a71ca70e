use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use maglab_core::approximation::SampleScheme;
use maglab_core::metric::Metric;
use maglab_core::Result;

use crate::config::{parse_spec, CommandName, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "maglab", version, about = "Magnitude of finite metric spaces and l1 polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Overrides,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Magnitude and weighting of a distance matrix or point cloud
    Mag,
    /// l1 intrinsic volumes of a polytope
    Ivol,
    /// Convex magnitude formula of a polytope
    ConvexMag,
    /// Sample, formula and exponential bound over a list of scales
    Sweep,
    /// Coordinate-simplex truncations of a positive sequence
    Diverge,
    /// Inequality suite over seeded random polytopes
    Check,
}

impl From<Command> for CommandName {
    fn from(c: Command) -> Self {
        match c {
            Command::Mag => Self::Mag,
            Command::Ivol => Self::Ivol,
            Command::ConvexMag => Self::ConvexMag,
            Command::Sweep => Self::Sweep,
            Command::Diverge => Self::Diverge,
            Command::Check => Self::Check,
        }
    }
}

fn parse_scheme(s: &str) -> Result<SampleScheme, String> {
    s.parse().map_err(|e: maglab_core::Error| e.to_string())
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: maglab_core::Error| e.to_string())
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run configuration; flags and MAGLAB_* variables take precedence
    #[arg(long, global = true, env = "MAGLAB_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, env = "MAGLAB_INPUT")]
    pub input: Option<PathBuf>,
    /// Output file; tables also get a .json twin. Defaults to stdout
    #[arg(long, global = true, env = "MAGLAB_OUTPUT")]
    pub output: Option<PathBuf>,
    /// Metric for point-cloud inputs (l1 or l2)
    #[arg(long, global = true, env = "MAGLAB_METRIC", value_parser = parse_metric)]
    pub metric: Option<Metric>,
    /// Reject distance matrices that violate the triangle inequality
    #[arg(long, global = true, env = "MAGLAB_CHECK_TRIANGLE")]
    pub check_triangle: bool,
    /// vertex_grid, farthest_point or random_hull
    #[arg(long, global = true, env = "MAGLAB_SCHEME", value_parser = parse_scheme)]
    pub scheme: Option<SampleScheme>,
    #[arg(long, global = true, env = "MAGLAB_BUDGET")]
    pub budget: Option<usize>,
    /// Largest dimension for exhaustive subset enumeration
    #[arg(long, global = true, env = "MAGLAB_CAP")]
    pub cap: Option<usize>,
    /// Monte Carlo subsets per k above the cap (0 disables)
    #[arg(long, global = true, env = "MAGLAB_MC_SAMPLES")]
    pub mc_samples: Option<usize>,
    #[arg(long, global = true, env = "MAGLAB_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "MAGLAB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "MAGLAB_T_LIST", value_delimiter = ',')]
    pub t_list: Option<Vec<f64>>,
    #[arg(long, global = true, env = "MAGLAB_N_LIST", value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// harmonic, power:<p>, geometric:<r>, or a JSON sequence file
    #[arg(long, global = true, env = "MAGLAB_SPEC")]
    pub spec: Option<String>,
    /// Random interior points added to each truncation
    #[arg(long, global = true, env = "MAGLAB_INTERIOR_SAMPLES")]
    pub interior_samples: Option<usize>,
    /// Number of random polytopes for `check`
    #[arg(long, global = true, env = "MAGLAB_COUNT")]
    pub count: Option<usize>,
    #[arg(long, global = true, env = "MAGLAB_MAX_VERTICES")]
    pub max_vertices: Option<usize>,
    #[arg(long, global = true, env = "MAGLAB_MAX_DIM")]
    pub max_dim: Option<usize>,
    /// Suite tolerance, relative to max(1, |rhs|)
    #[arg(long, global = true, env = "MAGLAB_TOL")]
    pub tol: Option<f64>,
    /// Print the resolved configuration as JSON and exit
    #[arg(long, global = true)]
    pub print_config: bool,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field {
                    cfg.$field = v.clone().into();
                })*
            };
        }
        set!(input, output, metric, t_list, n_list);
        set!(scheme, budget, cap, mc_samples, seed, threads);
        set!(interior_samples, count, max_vertices, max_dim);
        if self.check_triangle {
            cfg.check_triangle = true;
        }
        if let Some(s) = &self.spec {
            cfg.spec = parse_spec(s)?;
        }
        if let Some(t) = self.tol {
            cfg.tolerances.check = t;
        }
        Ok(())
    }
}

impl Cli {
    /// Config file, then the environment and flags (merged by clap).
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.opts.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        self.opts.apply(&mut cfg)?;
        cfg.command = Some(self.command.into());
        cfg.validate()?;
        Ok(cfg)
    }
}
