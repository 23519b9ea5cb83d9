use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gibbs::McmcConfig;
use crate::qaoa::{OptimizerBudget, SIMULATOR_LIMIT};
use crate::solvers::{DpllConfig, DEFAULT_EXHAUSTIVE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Decision,
    Gibbs,
    Qaoa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GibbsMethod {
    /// Exact enumeration when `n` is within the exhaustive limit, MCMC
    /// otherwise.
    #[default]
    Auto,
    Exact,
    Mcmc,
    /// Both estimators on every instance.
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GibbsOptions {
    pub betas: Vec<f64>,
    pub method: GibbsMethod,
    pub mcmc: McmcConfig,
}

impl Default for GibbsOptions {
    fn default() -> Self {
        GibbsOptions {
            betas: vec![0.5, 1.0, 2.0, 4.0],
            method: GibbsMethod::Auto,
            mcmc: McmcConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QaoaOptions {
    pub depths: Vec<usize>,
    pub budget: OptimizerBudget,
    /// Seed each depth's optimisation with the previous depth's optimum.
    pub warm_start: bool,
}

impl Default for QaoaOptions {
    fn default() -> Self {
        QaoaOptions {
            depths: vec![1, 2, 3],
            budget: OptimizerBudget::default(),
            warm_start: true,
        }
    }
}

/// Evenly spaced densities `min, min + step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl DensityGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.max >= self.min) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!(
                "density grid needs step > 0 and max >= min, got {self:?}"
            )));
        }
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        // Rounded to 12 decimals so 3.0 + 4 * 0.25 prints as 4 rather than 3.9999999999.
        Ok((0..count)
            .map(|i| ((self.min + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub k: usize,
    /// Nominal clause densities; each point uses `m = round(α n)` clauses.
    #[serde(default)]
    pub densities: Vec<f64>,
    pub instances: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub decision: DpllConfig,
    #[serde(default)]
    pub gibbs: GibbsOptions,
    #[serde(default)]
    pub qaoa: QaoaOptions,
}

impl SweepConfig {
    pub fn new(experiment: Experiment, n: usize, k: usize, densities: Vec<f64>, instances: usize, seed: u64) -> Self {
        SweepConfig {
            experiment,
            n,
            k,
            densities,
            instances,
            seed,
            threads: 0,
            decision: DpllConfig::default(),
            gibbs: GibbsOptions::default(),
            qaoa: QaoaOptions::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Clause count at grid point `alpha`.
    pub fn clause_count(&self, alpha: f64) -> usize {
        (alpha * self.n as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.k < 1 || self.k > self.n {
            return Err(Error::Config(format!("k = {} must satisfy 1 <= k <= n = {}", self.k, self.n)));
        }
        if self.instances < 1 {
            return Err(Error::Config("instances per point must be at least 1".into()));
        }
        if let Some(bad) = self.densities.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::Config(format!("density {bad} is not positive")));
        }
        if self.densities.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("density grid must be strictly increasing".into()));
        }
        match self.experiment {
            Experiment::Decision => {}
            Experiment::Gibbs => {
                let g = &self.gibbs;
                if g.betas.is_empty() {
                    return Err(Error::Config("gibbs sweep needs at least one beta".into()));
                }
                if let Some(b) = g.betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
                    return Err(Error::Config(format!("beta {b} is not a nonnegative number")));
                }
                if g.mcmc.sweeps < 1 || g.mcmc.chains < 1 {
                    return Err(Error::Config("MCMC needs at least one sweep and one chain".into()));
                }
                if matches!(g.method, GibbsMethod::Exact | GibbsMethod::Both)
                    && self.n > DEFAULT_EXHAUSTIVE_LIMIT
                {
                    return Err(Error::limit("exact Gibbs sweep", self.n, DEFAULT_EXHAUSTIVE_LIMIT));
                }
            }
            Experiment::Qaoa => {
                if self.qaoa.depths.is_empty() {
                    return Err(Error::Config("qaoa sweep needs at least one depth".into()));
                }
                if self.qaoa.budget.restarts < 1 {
                    return Err(Error::Config("optimizer budget needs at least one restart".into()));
                }
                if self.n > SIMULATOR_LIMIT {
                    return Err(Error::limit("qaoa sweep", self.n, SIMULATOR_LIMIT));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = DensityGrid {
            min: 3.0,
            max: 6.0,
            step: 0.25,
        };
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 13);
        assert_eq!(pts[4], 4.0);
        assert_eq!(*pts.last().unwrap(), 6.0);
        let g = DensityGrid {
            min: 1.0,
            max: 7.0,
            step: 0.5,
        };
        assert_eq!(g.points().unwrap().len(), 13);
        assert!(DensityGrid { min: 1.0, max: 2.0, step: 0.0 }.points().is_err());
    }

    #[test]
    fn toml_round_trip_and_defaults() {
        let text = r#"
experiment = "gibbs"
n = 14
k = 3
densities = [1.0, 1.5]
instances = 10
seed = 5

[gibbs]
betas = [2.0]
method = "both"

[gibbs.mcmc]
chains = 8
"#;
        let cfg = SweepConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.gibbs.mcmc.chains, 8);
        assert_eq!(cfg.gibbs.mcmc.burn_in, McmcConfig::default().burn_in);
        assert_eq!(cfg.qaoa, QaoaOptions::default());
        cfg.validate().unwrap();
        assert_eq!(SweepConfig::from_toml_str(&cfg.to_toml_string()).unwrap(), cfg);
        assert!(SweepConfig::from_toml_str("experiment = \"decision\"\nn = 3\nk = 3\ninstances = 1\nbogus = 1\n").is_err());
    }

    #[test]
    fn validation() {
        let ok = SweepConfig::new(Experiment::Decision, 20, 3, vec![1.0, 2.0], 5, 0);
        ok.validate().unwrap();
        let mut c = ok.clone();
        c.densities = vec![2.0, 1.0];
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = ok.clone();
        c.densities = vec![0.0, 1.0];
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.instances = 0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.k = 21;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.experiment = Experiment::Qaoa;
        c.n = 30;
        assert!(matches!(c.validate(), Err(Error::LimitExceeded { .. })));
        let mut c = ok;
        c.densities.clear();
        c.validate().unwrap();
    }

    #[test]
    fn clause_count_rounds_to_nearest() {
        let c = SweepConfig::new(Experiment::Decision, 75, 3, vec![], 1, 0);
        assert_eq!(c.clause_count(4.25), 319);
        assert_eq!(c.clause_count(3.0), 225);
        let c = SweepConfig::new(Experiment::Decision, 14, 3, vec![], 1, 0);
        assert_eq!(c.clause_count(1.5), 21);
    }
}
