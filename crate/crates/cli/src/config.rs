use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wfgame_core::dynamics::{max_selection, Configuration, GameParams, PayoffMatrix};
use wfgame_core::kernel::{
    build_complete, build_cycle, build_petersen, build_random_regular, from_weighted_graph,
    read_edge_list,
};
use wfgame_core::VotingKernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Identity,
    Gamma,
    FirstOrder,
    Duality,
    FixationCompare,
    Kingman,
    AbsorptionWasserstein,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Identity => "identity",
            Experiment::Gamma => "gamma",
            Experiment::FirstOrder => "first-order",
            Experiment::Duality => "duality",
            Experiment::FixationCompare => "fixation-compare",
            Experiment::Kingman => "kingman",
            Experiment::AbsorptionWasserstein => "absorption-wasserstein",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelType {
    Complete,
    Cycle,
    Petersen,
    RandomRegular,
    EdgeFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    #[serde(rename = "type")]
    pub kind: KernelType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_file: Option<PathBuf>,
}

/// Either donation parameters or the full matrix `[[P11, P10], [P01, P00]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PayoffSpec {
    Donation { b: f64, c: f64 },
    Matrix { matrix: [[f64; 2]; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SelectionSpec {
    W { w: f64 },
    WInf { w_inf: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationSpec {
    pub mu1: f64,
    pub mu0: f64,
}

/// Initial configuration: `m` ones placed uniformly at random per replica,
/// or a fixed set of sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum InitialSpec {
    Uniform { m: usize },
    Sites { sites: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: Experiment,
    pub kernel: KernelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoff: Option<PayoffSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<MutationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_grid: Option<Vec<f64>>,
    /// Largest `ell` for the Kingman spectrum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ell: Option<usize>,
}

fn default_replicas() -> usize {
    1000
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("invalid configuration: {0}")]
    Model(#[from] wfgame_core::Error),
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// A configuration with the kernel built and the selection strength
/// translated to `w`.
pub struct Resolved {
    pub config: Config,
    pub kernel: VotingKernel,
    /// Common degree when every row of `q` is uniform on the same number of
    /// neighbours.
    pub degree: Option<usize>,
    pub payoff: PayoffMatrix,
    pub params: GameParams,
}

impl Resolved {
    /// JSON object recorded in every output file.
    pub fn header(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "seed": self.config.root_seed,
            "resolved": {
                "sites": self.kernel.len(),
                "degree": self.degree,
                "nu_total": self.kernel.nu_total(),
                "w": self.params.w,
                "w_max": max_selection(&self.payoff),
            },
        })
    }

    pub fn initial_m(&self) -> usize {
        match &self.config.initial {
            Some(InitialSpec::Uniform { m }) => *m,
            Some(InitialSpec::Sites { sites }) => sites.len(),
            None => self.kernel.len() / 2,
        }
    }

    pub fn fixed_initial(&self) -> Option<Configuration> {
        match &self.config.initial {
            Some(InitialSpec::Sites { sites }) => {
                Some(Configuration::with_ones(self.kernel.len(), sites))
            }
            _ => None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn build_kernel(spec: &KernelSpec) -> Result<(VotingKernel, Option<usize>), ConfigError> {
    let need_n = || {
        spec.n
            .ok_or_else(|| invalid("kernel.n is required for this kernel type"))
    };
    let kernel = match spec.kind {
        KernelType::Complete => build_complete(need_n()?)?,
        KernelType::Cycle => build_cycle(need_n()?)?,
        KernelType::Petersen => build_petersen()?,
        KernelType::RandomRegular => {
            let k = spec
                .k
                .ok_or_else(|| invalid("kernel.k is required for random-regular"))?;
            build_random_regular(need_n()?, k, spec.seed.unwrap_or(0))?
        }
        KernelType::EdgeFile => {
            let path = spec
                .edge_file
                .as_ref()
                .ok_or_else(|| invalid("kernel.edge_file is required for edge-file"))?;
            let (n, edges) = read_edge_list(path)?;
            from_weighted_graph(n, &edges)?
        }
    };
    let degree = regular_degree(&kernel);
    Ok((kernel, degree))
}

fn regular_degree(kernel: &VotingKernel) -> Option<usize> {
    let k = kernel.row(0).len();
    let uniform = kernel.sites().all(|x| {
        let row = kernel.row(x);
        row.len() == k && row.iter().all(|(_, p)| (p * k as f64 - 1.0).abs() < 1e-12)
    });
    uniform.then_some(k)
}

pub fn resolve(config: Config) -> Result<Resolved, ConfigError> {
    if config.replicas == 0 {
        return Err(invalid("replicas must be at least 1"));
    }
    let (kernel, degree) = build_kernel(&config.kernel)?;
    let n = kernel.len();
    let payoff = match &config.payoff {
        Some(PayoffSpec::Donation { b, c }) => PayoffMatrix::donation(*b, *c),
        Some(PayoffSpec::Matrix { matrix }) => {
            PayoffMatrix::new(matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1])
        }
        None => PayoffMatrix::zero(),
    };
    let w = match config.selection {
        Some(SelectionSpec::W { w }) => w,
        Some(SelectionSpec::WInf { w_inf }) => w_inf * kernel.nu_total(),
        None => 0.0,
    };
    let (mu1, mu0) = config.mutation.map_or((0.0, 0.0), |m| (m.mu1, m.mu0));
    let params = GameParams::new(payoff, w, mu1, mu0)?;

    match &config.initial {
        Some(InitialSpec::Uniform { m }) if *m > n => {
            return Err(invalid(format!("initial.m = {m} exceeds the {n} sites")));
        }
        Some(InitialSpec::Sites { sites }) => {
            if let Some(bad) = sites.iter().find(|&&x| x >= n) {
                return Err(invalid(format!("initial site {bad} is outside 0..{n}")));
            }
        }
        _ => {}
    }
    for (name, v) in [("horizon", config.horizon), ("dt", config.dt)] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
    }
    if let Some(grid) = &config.sampling_grid {
        if grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(invalid(
                "sampling_grid times must be finite and nonnegative",
            ));
        }
    }

    match config.experiment {
        Experiment::FixationCompare | Experiment::AbsorptionWasserstein => {
            if mu1 != 0.0 || mu0 != 0.0 {
                return Err(invalid(format!(
                    "{} runs to absorption and needs mu1 = mu0 = 0",
                    config.experiment.name()
                )));
            }
        }
        Experiment::FirstOrder if payoff.additive_form().is_none() => {
            return Err(invalid(
                "first-order needs a payoff without interaction term (P11 - P10 - P01 + P00 = 0)",
            ));
        }
        Experiment::Duality if n < 2 => return Err(invalid("duality needs at least two sites")),
        Experiment::Kingman if config.max_ell.is_some_and(|l| l == 0 || l >= n) => {
            return Err(invalid(format!("max_ell must be in 1..{n}")));
        }
        _ => {}
    }
    Ok(Resolved {
        config,
        kernel,
        degree,
        payoff,
        params,
    })
}
