use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::nelder_mead::{minimize, NelderMeadOptions};
use super::{QaoaParams, QaoaSimulator};
use crate::error::{Error, Result};
use crate::hamiltonian::{ground_states, DiagonalHamiltonian};
use crate::solvers::DEFAULT_EXHAUSTIVE_LIMIT;

/// Multi-start budget: `restarts` uniformly random starting points, each
/// refined by at most `iterations` Nelder-Mead iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerBudget {
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for OptimizerBudget {
    fn default() -> Self {
        OptimizerBudget {
            restarts: 50,
            iterations: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub params: QaoaParams,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaOutcome {
    pub depth: usize,
    pub best_params: QaoaParams,
    pub best_expectation: f64,
    /// `None` when `n` is above the exhaustive limit.
    pub ground_energy: Option<u32>,
    /// `best_expectation - ground_energy`.
    pub error: Option<f64>,
    /// Final point of every local run, in run order.
    pub optimizer_trace: Vec<TracePoint>,
    pub restarts_used: usize,
    pub evaluations: usize,
    /// The run that produced the best value stopped on its iteration cap
    /// rather than on convergence.
    pub hit_budget: bool,
}

pub fn optimize_qaoa(
    h: &DiagonalHamiltonian,
    p: usize,
    budget: &OptimizerBudget,
    seed: u64,
) -> Result<QaoaOutcome> {
    optimize_qaoa_from(h, p, budget, seed, &[])
}

/// Like [`optimize_qaoa`], with extra local runs started from `warm_starts`
/// before the random restarts. Shallower parameter sets are padded with
/// zero-angle layers, which leaves their state unchanged, so a warm start
/// from the depth `p - 1` optimum can only improve on it.
pub fn optimize_qaoa_from(
    h: &DiagonalHamiltonian,
    p: usize,
    budget: &OptimizerBudget,
    seed: u64,
    warm_starts: &[QaoaParams],
) -> Result<QaoaOutcome> {
    if budget.restarts < 1 {
        return Err(Error::Domain("optimizer budget needs at least one restart".into()));
    }
    if let Some(w) = warm_starts.iter().find(|w| w.depth() > p) {
        return Err(Error::Domain(format!(
            "warm start of depth {} exceeds target depth {p}",
            w.depth()
        )));
    }
    let mut sim = QaoaSimulator::new(h)?;
    let ground_energy = if h.n() <= DEFAULT_EXHAUSTIVE_LIMIT {
        Some(ground_states(h)?.0)
    } else {
        None
    };

    let mut trace = Vec::new();
    let mut converged = Vec::new();
    let mut evaluations = 0;
    if p == 0 {
        let value = sim.expectation(&[], &[]);
        trace.push(TracePoint {
            params: QaoaParams::zeros(0),
            value,
        });
        converged.push(true);
        evaluations = 1;
    } else {
        let opts = NelderMeadOptions {
            max_iterations: budget.iterations,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut starts: Vec<Vec<f64>> = warm_starts.iter().map(|w| w.padded_to(p).to_flat()).collect();
        for _ in 0..budget.restarts {
            let mut x: Vec<f64> = (0..p).map(|_| rng.gen_range(0.0..TAU)).collect();
            x.extend((0..p).map(|_| rng.gen_range(0.0..PI)));
            starts.push(x);
        }
        for x0 in starts {
            let run = minimize(|x| sim.expectation_flat(x), &x0, &opts);
            evaluations += run.evaluations;
            let params = QaoaParams::from_flat(&run.x).wrapped();
            let value = sim.expectation(&params.gamma, &params.beta);
            evaluations += 1;
            trace.push(TracePoint { params, value });
            converged.push(run.converged);
        }
    }

    let best = (0..trace.len())
        .min_by(|&a, &b| trace[a].value.total_cmp(&trace[b].value))
        .expect("at least one run");
    let best_expectation = trace[best].value;
    Ok(QaoaOutcome {
        depth: p,
        best_params: trace[best].params.clone(),
        best_expectation,
        ground_energy,
        error: ground_energy.map(|e0| best_expectation - e0 as f64),
        restarts_used: if p == 0 { 0 } else { trace.len() },
        hit_budget: !converged[best],
        optimizer_trace: trace,
        evaluations,
    })
}
