use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::config::{Experiment, GibbsMethod, SweepConfig};
use super::result::{
    aggregate, BetaRecord, DepthRecord, InstanceRecord, McmcRecord, Metadata, Outcome, PointResult,
    PointTiming, SweepResult, Timing,
};
use super::{derive_seed, instance_seed, ENSEMBLE, MIXER_DESCRIPTION, SEED_DERIVATION, SPIN_CONVENTION};
use crate::error::{Error, Result};
use crate::gibbs::{exact_ground_probability, metropolis_ground_probability, GibbsSpec};
use crate::hamiltonian::{ground_states, DiagonalHamiltonian, DEFAULT_TABLE_LIMIT};
use crate::qaoa::{optimize_qaoa_from, QaoaParams};
use crate::sat::{generate_random_ksat, CnfFormula, Density, RNG_ALGORITHM};
use crate::solvers::{dpll_solve_with, DEFAULT_EXHAUSTIVE_LIMIT};

const MCMC_TAG: u64 = 1000;
const OPTIMIZER_TAG: u64 = 2000;

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let started_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();

    let mut points = Vec::with_capacity(config.densities.len());
    let mut timings = Vec::with_capacity(config.densities.len());
    for (p, &alpha) in config.densities.iter().enumerate() {
        let m = config.clause_count(alpha);
        let measured: Vec<(Outcome, f64)> = pool.install(|| {
            (0..config.instances)
                .into_par_iter()
                .map(|i| {
                    let seed = instance_seed(config.seed, p, i);
                    let formula = generate_random_ksat(config.n, m, config.k, seed)?;
                    let clock = Instant::now();
                    let outcome = measure(config, &formula, seed)?;
                    Ok((outcome, clock.elapsed().as_secs_f64()))
                })
                .collect::<Result<_>>()
        })?;
        let (outcomes, seconds): (Vec<Outcome>, Vec<f64>) = measured.into_iter().unzip();
        let records: Vec<InstanceRecord> = outcomes
            .into_iter()
            .enumerate()
            .map(|(i, outcome)| InstanceRecord {
                instance: i,
                seed: instance_seed(config.seed, p, i),
                outcome,
            })
            .collect();
        points.push(PointResult {
            nominal_density: alpha,
            m,
            realized_density: Density::new(m, config.n),
            aggregates: aggregate(&records)?,
            records,
        });
        timings.push(PointTiming::new(seconds));
    }

    Ok(SweepResult {
        metadata: Metadata {
            config: config.clone(),
            rng: RNG_ALGORITHM.to_string(),
            seed_derivation: SEED_DERIVATION.to_string(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            ensemble: ENSEMBLE.to_string(),
            spin_convention: SPIN_CONVENTION.to_string(),
            mixer: MIXER_DESCRIPTION.to_string(),
        },
        points,
        timing: Timing {
            started_at,
            total_seconds: clock.elapsed().as_secs_f64(),
            points: timings,
        },
    })
}

fn checked(config: &SweepConfig, expected: Experiment) -> Result<()> {
    if config.experiment != expected {
        return Err(Error::Config(format!(
            "config describes a {:?} sweep, not {expected:?}",
            config.experiment
        )));
    }
    Ok(())
}

pub fn run_decision_sweep(config: &SweepConfig) -> Result<SweepResult> {
    checked(config, Experiment::Decision)?;
    run_sweep(config)
}

pub fn run_gibbs_sweep(config: &SweepConfig) -> Result<SweepResult> {
    checked(config, Experiment::Gibbs)?;
    run_sweep(config)
}

pub fn run_qaoa_sweep(config: &SweepConfig) -> Result<SweepResult> {
    checked(config, Experiment::Qaoa)?;
    run_sweep(config)
}

fn hamiltonian_for(formula: &CnfFormula) -> Result<DiagonalHamiltonian> {
    if formula.n() <= DEFAULT_TABLE_LIMIT {
        DiagonalHamiltonian::dense(formula)
    } else {
        Ok(DiagonalHamiltonian::lazy(formula))
    }
}

fn measure(config: &SweepConfig, formula: &CnfFormula, seed: u64) -> Result<Outcome> {
    match config.experiment {
        Experiment::Decision => {
            let r = dpll_solve_with(formula, &config.decision);
            Ok(Outcome::Decision {
                status: r.status,
                decisions: r.effort.decisions,
                propagations: r.effort.propagations,
            })
        }
        Experiment::Gibbs => {
            let h = hamiltonian_for(formula)?;
            let g = &config.gibbs;
            let exhaustive = formula.n() <= DEFAULT_EXHAUSTIVE_LIMIT;
            let (exact, mcmc) = match g.method {
                GibbsMethod::Auto => (exhaustive, !exhaustive),
                GibbsMethod::Exact => (true, false),
                GibbsMethod::Mcmc => (false, true),
                GibbsMethod::Both => (true, true),
            };
            let ground = if exhaustive {
                let (e0, states) = ground_states(&h)?;
                Some((e0, states.len() as u64))
            } else {
                None
            };
            let per_beta = g
                .betas
                .iter()
                .enumerate()
                .map(|(j, &beta)| {
                    let spec = GibbsSpec::new(beta, &h)?;
                    let exact = if exact {
                        Some(exact_ground_probability(&spec)?.value)
                    } else {
                        None
                    };
                    let mcmc = if mcmc {
                        let r = metropolis_ground_probability(&spec, &g.mcmc, derive_seed(seed, MCMC_TAG + j as u64))?;
                        Some(McmcRecord {
                            value: r.value,
                            std_error: r.std_error,
                            acceptance_rate: r.acceptance_rate.unwrap_or(1.0),
                            reference: r.reference,
                        })
                    } else {
                        None
                    };
                    Ok(BetaRecord { beta, exact, mcmc })
                })
                .collect::<Result<_>>()?;
            Ok(Outcome::Gibbs {
                ground_energy: ground.map(|g| g.0),
                ground_state_count: ground.map(|g| g.1),
                per_beta,
            })
        }
        Experiment::Qaoa => {
            let h = DiagonalHamiltonian::dense(formula)?;
            let q = &config.qaoa;
            let mut depths = q.depths.clone();
            depths.sort_unstable();
            depths.dedup();
            let mut per_depth = Vec::with_capacity(depths.len());
            let mut previous: Option<QaoaParams> = None;
            for &p in &depths {
                let warm: Vec<QaoaParams> = previous.iter().filter(|_| q.warm_start).cloned().collect();
                let out = optimize_qaoa_from(&h, p, &q.budget, derive_seed(seed, OPTIMIZER_TAG + p as u64), &warm)?;
                per_depth.push(DepthRecord {
                    depth: p,
                    expectation: out.best_expectation,
                    error: out.error,
                    hit_budget: out.hit_budget,
                    restarts_used: out.restarts_used,
                    evaluations: out.evaluations,
                    gamma: out.best_params.gamma.clone(),
                    beta: out.best_params.beta.clone(),
                });
                previous = Some(out.best_params);
            }
            let ground_energy = if formula.n() <= DEFAULT_EXHAUSTIVE_LIMIT {
                Some(ground_states(&h)?.0)
            } else {
                None
            };
            Ok(Outcome::Qaoa {
                ground_energy,
                per_depth,
            })
        }
    }
}
