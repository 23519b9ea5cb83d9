use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use crate::error::{Error, Result};
use crate::gibbs::EnergyReference;
use crate::sat::Density;
use crate::solvers::DecisionStatus;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: SweepConfig,
    pub rng: String,
    pub seed_derivation: String,
    pub code_version: String,
    pub ensemble: String,
    pub spin_convention: String,
    pub mixer: String,
}

/// Wall-clock data. Kept apart from everything else because it is the only
/// part of a result that differs between two runs with the same config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Timing {
    /// Seconds since the Unix epoch when the sweep started.
    pub started_at: u64,
    pub total_seconds: f64,
    pub points: Vec<PointTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointTiming {
    pub instance_seconds: Vec<f64>,
    pub mean_seconds: f64,
    pub median_seconds: f64,
}

impl PointTiming {
    pub fn new(instance_seconds: Vec<f64>) -> Self {
        PointTiming {
            mean_seconds: mean(&instance_seconds).unwrap_or(0.0),
            median_seconds: median(&instance_seconds).unwrap_or(0.0),
            instance_seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: Metadata,
    pub points: Vec<PointResult>,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub nominal_density: f64,
    pub m: usize,
    pub realized_density: Density,
    pub records: Vec<InstanceRecord>,
    pub aggregates: Aggregates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance: usize,
    pub seed: u64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum Outcome {
    Decision {
        status: DecisionStatus,
        decisions: u64,
        propagations: u64,
    },
    Gibbs {
        /// Known when `n` is within the exhaustive limit.
        ground_energy: Option<u32>,
        ground_state_count: Option<u64>,
        per_beta: Vec<BetaRecord>,
    },
    Qaoa {
        ground_energy: Option<u32>,
        per_depth: Vec<DepthRecord>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaRecord {
    pub beta: f64,
    pub exact: Option<f64>,
    pub mcmc: Option<McmcRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcRecord {
    pub value: f64,
    pub std_error: f64,
    pub acceptance_rate: f64,
    pub reference: EnergyReference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRecord {
    pub depth: usize,
    pub expectation: f64,
    pub error: Option<f64>,
    pub hit_budget: bool,
    pub restarts_used: usize,
    pub evaluations: usize,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

/// Sample mean with the standard error of the mean (`None` below two
/// samples).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: Option<f64>,
}

impl MeanEstimate {
    pub fn of(values: &[f64]) -> Option<Self> {
        let mean = mean(values)?;
        let n = values.len() as f64;
        let std_error = (values.len() > 1).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        });
        Some(MeanEstimate { mean, std_error })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum Aggregates {
    Decision(DecisionAggregates),
    Gibbs(GibbsAggregates),
    Qaoa(QaoaAggregates),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionAggregates {
    pub satisfiable: usize,
    pub unsatisfiable: usize,
    /// Instances that hit the decision cap. They are left out of the
    /// fraction and effort statistics below.
    pub censored: usize,
    /// Satisfiable share of the resolved instances.
    pub sat_fraction: Option<f64>,
    /// Binomial standard error of `sat_fraction`.
    pub sat_fraction_std_error: Option<f64>,
    /// Satisfiable share of all instances if every censored one were
    /// unsatisfiable, and if every one were satisfiable.
    pub sat_fraction_lower: f64,
    pub sat_fraction_upper: f64,
    pub decisions: Option<MeanEstimate>,
    pub median_decisions: Option<f64>,
    pub propagations: Option<MeanEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsAggregates {
    /// Share of instances with ground energy zero, when known.
    pub satisfiable_fraction: Option<f64>,
    pub per_beta: Vec<BetaAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaAggregate {
    pub beta: f64,
    pub exact: Option<MeanEstimate>,
    pub mcmc: Option<McmcAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcAggregate {
    /// Mean over instances; the standard error reflects instance-to-instance
    /// spread.
    pub estimate: MeanEstimate,
    /// Standard error of the mean contributed by sampling noise alone.
    pub sampling_error: f64,
    pub mean_acceptance_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaAggregates {
    pub satisfiable_fraction: Option<f64>,
    pub per_depth: Vec<DepthAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthAggregate {
    pub depth: usize,
    pub error: Option<MeanEstimate>,
    pub expectation: MeanEstimate,
    /// Instances whose best run stopped on the iteration cap. They are still
    /// included in the means.
    pub budget_hits: usize,
}

pub(crate) fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    })
}

fn all_known<T: Copy>(values: impl Iterator<Item = Option<T>>) -> Option<Vec<T>> {
    values.collect()
}

/// Recomputes a point's aggregates from its records.
pub fn aggregate(records: &[InstanceRecord]) -> Result<Aggregates> {
    let Some(first) = records.first() else {
        return Err(Error::Inconsistent("point has no records".into()));
    };
    let mismatch = || Error::Inconsistent("records mix experiment kinds".into());
    match &first.outcome {
        Outcome::Decision { .. } => {
            let mut rows = Vec::with_capacity(records.len());
            for r in records {
                match &r.outcome {
                    Outcome::Decision {
                        status,
                        decisions,
                        propagations,
                    } => rows.push((*status, *decisions, *propagations)),
                    _ => return Err(mismatch()),
                }
            }
            Ok(Aggregates::Decision(aggregate_decision(&rows)))
        }
        Outcome::Gibbs { per_beta, .. } => {
            let betas: Vec<f64> = per_beta.iter().map(|b| b.beta).collect();
            let mut energies = Vec::new();
            let mut tables = Vec::new();
            for r in records {
                match &r.outcome {
                    Outcome::Gibbs {
                        ground_energy,
                        per_beta,
                        ..
                    } if per_beta.iter().map(|b| b.beta).eq(betas.iter().copied()) => {
                        energies.push(*ground_energy);
                        tables.push(per_beta);
                    }
                    _ => return Err(mismatch()),
                }
            }
            let per_beta = betas
                .iter()
                .enumerate()
                .map(|(j, &beta)| {
                    let exact = all_known(tables.iter().map(|t| t[j].exact))
                        .and_then(|v| MeanEstimate::of(&v));
                    let mcmc = all_known(tables.iter().map(|t| t[j].mcmc.as_ref())).map(|runs| {
                        let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
                        let n = runs.len() as f64;
                        McmcAggregate {
                            estimate: MeanEstimate::of(&values).expect("nonempty"),
                            sampling_error: runs.iter().map(|r| r.std_error.powi(2)).sum::<f64>().sqrt() / n,
                            mean_acceptance_rate: runs.iter().map(|r| r.acceptance_rate).sum::<f64>() / n,
                        }
                    });
                    BetaAggregate { beta, exact, mcmc }
                })
                .collect();
            Ok(Aggregates::Gibbs(GibbsAggregates {
                satisfiable_fraction: satisfiable_fraction(&energies),
                per_beta,
            }))
        }
        Outcome::Qaoa { per_depth, .. } => {
            let depths: Vec<usize> = per_depth.iter().map(|d| d.depth).collect();
            let mut energies = Vec::new();
            let mut tables = Vec::new();
            for r in records {
                match &r.outcome {
                    Outcome::Qaoa {
                        ground_energy,
                        per_depth,
                    } if per_depth.iter().map(|d| d.depth).eq(depths.iter().copied()) => {
                        energies.push(*ground_energy);
                        tables.push(per_depth);
                    }
                    _ => return Err(mismatch()),
                }
            }
            let per_depth = depths
                .iter()
                .enumerate()
                .map(|(j, &depth)| {
                    let expectations: Vec<f64> = tables.iter().map(|t| t[j].expectation).collect();
                    DepthAggregate {
                        depth,
                        error: all_known(tables.iter().map(|t| t[j].error)).and_then(|v| MeanEstimate::of(&v)),
                        expectation: MeanEstimate::of(&expectations).expect("nonempty"),
                        budget_hits: tables.iter().filter(|t| t[j].hit_budget).count(),
                    }
                })
                .collect();
            Ok(Aggregates::Qaoa(QaoaAggregates {
                satisfiable_fraction: satisfiable_fraction(&energies),
                per_depth,
            }))
        }
    }
}

fn satisfiable_fraction(energies: &[Option<u32>]) -> Option<f64> {
    let known = all_known(energies.iter().copied())?;
    Some(known.iter().filter(|&&e| e == 0).count() as f64 / known.len() as f64)
}

fn aggregate_decision(rows: &[(DecisionStatus, u64, u64)]) -> DecisionAggregates {
    let count = |s: DecisionStatus| rows.iter().filter(|r| r.0 == s).count();
    let satisfiable = count(DecisionStatus::Sat);
    let unsatisfiable = count(DecisionStatus::Unsat);
    let censored = count(DecisionStatus::Timeout);
    let resolved = satisfiable + unsatisfiable;
    let total = rows.len() as f64;
    let sat_fraction = (resolved > 0).then(|| satisfiable as f64 / resolved as f64);
    let resolved_rows: Vec<_> = rows.iter().filter(|r| r.0 != DecisionStatus::Timeout).collect();
    let decisions: Vec<f64> = resolved_rows.iter().map(|r| r.1 as f64).collect();
    let propagations: Vec<f64> = resolved_rows.iter().map(|r| r.2 as f64).collect();
    DecisionAggregates {
        satisfiable,
        unsatisfiable,
        censored,
        sat_fraction,
        sat_fraction_std_error: sat_fraction.map(|p| (p * (1.0 - p) / resolved as f64).sqrt()),
        sat_fraction_lower: satisfiable as f64 / total,
        sat_fraction_upper: (satisfiable + censored) as f64 / total,
        decisions: MeanEstimate::of(&decisions),
        median_decisions: median(&decisions),
        propagations: MeanEstimate::of(&propagations),
    }
}

impl SweepResult {
    /// Checks that every point's aggregates are exactly what its records
    /// produce and that record counts and seeds match the config.
    pub fn verify_aggregates(&self) -> Result<()> {
        let config = &self.metadata.config;
        if self.points.len() != config.densities.len() {
            return Err(Error::Inconsistent(format!(
                "{} points for {} densities",
                self.points.len(),
                config.densities.len()
            )));
        }
        for (i, point) in self.points.iter().enumerate() {
            if point.nominal_density != config.densities[i] {
                return Err(Error::Inconsistent(format!("point {i} density does not match the grid")));
            }
            if point.records.len() != config.instances {
                return Err(Error::Inconsistent(format!(
                    "point {i} has {} records, expected {}",
                    point.records.len(),
                    config.instances
                )));
            }
            for (j, r) in point.records.iter().enumerate() {
                if r.instance != j || r.seed != super::instance_seed(config.seed, i, j) {
                    return Err(Error::Inconsistent(format!("point {i} record {j} has the wrong seed")));
                }
            }
            if aggregate(&point.records)? != point.aggregates {
                return Err(Error::Inconsistent(format!(
                    "aggregates at density {} do not match the records",
                    point.nominal_density
                )));
            }
        }
        Ok(())
    }

    /// The result without its timing section, as JSON. Two runs with the
    /// same config produce identical strings.
    pub fn deterministic_json(&self) -> String {
        serde_json::to_string(&serde_json::json!({
            "metadata": self.metadata,
            "points": self.points,
        }))
        .expect("result serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decision(status: DecisionStatus, decisions: u64) -> InstanceRecord {
        InstanceRecord {
            instance: 0,
            seed: 0,
            outcome: Outcome::Decision {
                status,
                decisions,
                propagations: 2 * decisions,
            },
        }
    }

    #[test]
    fn censored_instances_are_excluded() {
        let recs = vec![
            decision(DecisionStatus::Sat, 10),
            decision(DecisionStatus::Unsat, 30),
            decision(DecisionStatus::Timeout, 1000),
            decision(DecisionStatus::Sat, 20),
        ];
        let Aggregates::Decision(a) = aggregate(&recs).unwrap() else {
            panic!()
        };
        assert_eq!((a.satisfiable, a.unsatisfiable, a.censored), (2, 1, 1));
        assert_eq!(a.sat_fraction, Some(2.0 / 3.0));
        assert_eq!(a.sat_fraction_lower, 0.5);
        assert_eq!(a.sat_fraction_upper, 0.75);
        assert_eq!(a.decisions.unwrap().mean, 20.0);
        assert_eq!(a.median_decisions, Some(20.0));
        assert_eq!(a.propagations.unwrap().mean, 40.0);

        let Aggregates::Decision(a) = aggregate(&[decision(DecisionStatus::Timeout, 5)]).unwrap() else {
            panic!()
        };
        assert_eq!(a.sat_fraction, None);
        assert_eq!(a.decisions, None);
        assert_eq!((a.sat_fraction_lower, a.sat_fraction_upper), (0.0, 1.0));
    }

    #[test]
    fn mean_and_median() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
        let e = MeanEstimate::of(&[1.0, 3.0]).unwrap();
        assert_eq!(e.mean, 2.0);
        assert!((e.std_error.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(MeanEstimate::of(&[5.0]).unwrap().std_error, None);
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let recs = vec![
            decision(DecisionStatus::Sat, 1),
            InstanceRecord {
                instance: 1,
                seed: 0,
                outcome: Outcome::Qaoa {
                    ground_energy: Some(0),
                    per_depth: vec![],
                },
            },
        ];
        assert!(matches!(aggregate(&recs), Err(Error::Inconsistent(_))));
        assert!(aggregate(&[]).is_err());
    }
}
