//! Ground-state probability of the thermal (Gibbs) distribution
//! `π(s) ∝ exp(-β·energy(s))`, exactly by enumeration or by Metropolis
//! sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{ground_states_with_limit, DiagonalHamiltonian};
use crate::sat::CnfFormula;
use crate::solvers::DEFAULT_EXHAUSTIVE_LIMIT;

#[derive(Debug, Clone, Copy)]
pub struct GibbsSpec<'a> {
    pub beta: f64,
    pub hamiltonian: &'a DiagonalHamiltonian,
}

impl<'a> GibbsSpec<'a> {
    pub fn new(beta: f64, hamiltonian: &'a DiagonalHamiltonian) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!(
                "inverse temperature must be finite and nonnegative, got {beta}"
            )));
        }
        Ok(GibbsSpec { beta, hamiltonian })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Mcmc,
}

/// What "ground energy" meant for an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyReference {
    /// The true minimum, from enumeration.
    Exact,
    /// The lowest energy any chain visited; the estimate is then relative to
    /// an upper bound on the ground energy.
    BestSeen,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundProbability {
    pub value: f64,
    pub method: Method,
    /// Zero for exact results.
    pub std_error: f64,
    /// Bitstrings summed (exact) or samples drawn (MCMC).
    pub samples_used: u64,
    pub ground_energy: u32,
    pub reference: EnergyReference,
    /// Fraction of accepted Metropolis proposals (MCMC only).
    pub acceptance_rate: Option<f64>,
}

/// Ground-state weight over the partition function. Energies are shifted by
/// the ground energy before exponentiation, so the sum cannot overflow.
pub fn exact_ground_probability(spec: &GibbsSpec) -> Result<GroundProbability> {
    exact_ground_probability_with_limit(spec, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn exact_ground_probability_with_limit(spec: &GibbsSpec, limit: usize) -> Result<GroundProbability> {
    let h = spec.hamiltonian;
    let n = h.n();
    if n > limit {
        return Err(Error::limit("exact Gibbs enumeration", n, limit));
    }
    let hist = h.spectrum_histogram()?;
    let e0 = hist.iter().position(|&g| g > 0).expect("nonempty spectrum");
    // Sum from the top of the spectrum so the small terms accumulate first.
    let z: f64 = hist
        .iter()
        .enumerate()
        .skip(e0)
        .rev()
        .map(|(e, &g)| g as f64 * (-spec.beta * (e - e0) as f64).exp())
        .sum();
    Ok(GroundProbability {
        value: hist[e0] as f64 / z,
        method: Method::Exact,
        std_error: 0.0,
        samples_used: 1u64 << n,
        ground_energy: e0 as u32,
        reference: EnergyReference::Exact,
        acceptance_rate: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    /// Recorded sweeps per chain, one sample per sweep. A sweep is `n`
    /// proposed single-bit flips.
    pub sweeps: u64,
    /// Discarded sweeps at the start of each chain.
    pub burn_in: u64,
    pub chains: u32,
    /// Largest `n` for which the true ground energy is computed.
    pub exhaustive_limit: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            sweeps: 1000,
            burn_in: 10,
            chains: 32,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

/// Single-spin-flip Metropolis chain on the clause-count energy.
///
/// Proposals flip one uniformly chosen variable and are accepted with
/// probability `min(1, exp(-β ΔE))`. `ΔE` comes from per-clause counts of
/// true literals, touching only the clauses of the flipped variable.
#[derive(Debug, Clone)]
pub struct MetropolisChain {
    beta: f64,
    bits: Vec<bool>,
    /// `(clause, negated)` for each occurrence of each variable.
    occurrences: Vec<Vec<(usize, bool)>>,
    true_count: Vec<u32>,
    energy: u32,
}

impl MetropolisChain {
    pub fn new(formula: &CnfFormula, beta: f64, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != formula.n() {
            return Err(Error::Domain(format!(
                "initial state has {} bits, formula has {} variables",
                bits.len(),
                formula.n()
            )));
        }
        let mut occurrences = vec![Vec::new(); formula.n()];
        let mut true_count = vec![0u32; formula.m()];
        for (c, clause) in formula.clauses().iter().enumerate() {
            for l in clause.literals() {
                occurrences[l.variable].push((c, l.negated));
                true_count[c] += l.eval(bits[l.variable]) as u32;
            }
        }
        let energy = true_count.iter().filter(|&&t| t == 0).count() as u32;
        Ok(MetropolisChain {
            beta,
            bits,
            occurrences,
            true_count,
            energy,
        })
    }

    pub fn energy(&self) -> u32 {
        self.energy
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Energy change if `variable` were flipped.
    pub fn delta(&self, variable: usize) -> i64 {
        let value = self.bits[variable];
        self.occurrences[variable]
            .iter()
            .map(|&(c, negated)| {
                let lit_true = value != negated;
                match (lit_true, self.true_count[c]) {
                    (true, 1) => 1,
                    (false, 0) => -1,
                    _ => 0,
                }
            })
            .sum()
    }

    fn flip(&mut self, variable: usize, delta: i64) {
        let value = self.bits[variable];
        for &(c, negated) in &self.occurrences[variable] {
            if value != negated {
                self.true_count[c] -= 1;
            } else {
                self.true_count[c] += 1;
            }
        }
        self.bits[variable] = !value;
        self.energy = (self.energy as i64 + delta) as u32;
    }

    /// One proposal; returns whether it was accepted.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> bool {
        let v = rng.gen_range(0..self.bits.len());
        let delta = self.delta(v);
        let accept = delta <= 0 || rng.gen::<f64>() < (-self.beta * delta as f64).exp();
        if accept {
            self.flip(v, delta);
        }
        accept
    }
}

struct ChainRun {
    /// Post-burn-in samples per energy level.
    histogram: Vec<u64>,
    lowest: u32,
    accepted: u64,
    proposed: u64,
}

fn run_chain(formula: &CnfFormula, beta: f64, config: &McmcConfig, seed: u64, chain: u32) -> ChainRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    let n = formula.n();
    let init: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut state = MetropolisChain::new(formula, beta, init).expect("state length matches");
    let mut histogram = vec![0u64; formula.m() + 1];
    let mut lowest = state.energy();
    let mut accepted = 0u64;
    let mut proposed = 0u64;
    for sweep in 0..config.burn_in + config.sweeps {
        for _ in 0..n {
            accepted += state.step(&mut rng) as u64;
            proposed += 1;
            lowest = lowest.min(state.energy());
        }
        if sweep >= config.burn_in {
            histogram[state.energy() as usize] += 1;
        }
    }
    ChainRun {
        histogram,
        lowest,
        accepted,
        proposed,
    }
}

/// Metropolis estimate of the ground-state probability.
///
/// Each chain starts from a uniformly random state and owns the RNG stream
/// `(seed, chain index)`, so the result does not depend on scheduling. The
/// estimate is the mean over chains of the fraction of recorded samples at
/// the ground energy; the standard error comes from the spread of the chain
/// means. With a single chain the binomial error of its samples is reported
/// instead, which ignores autocorrelation.
pub fn metropolis_ground_probability(
    spec: &GibbsSpec,
    config: &McmcConfig,
    seed: u64,
) -> Result<GroundProbability> {
    if config.sweeps < 1 || config.chains < 1 {
        return Err(Error::Domain("MCMC needs at least one sweep and one chain".into()));
    }
    let h = spec.hamiltonian;
    let formula = h.formula();
    let exact_e0 = if h.n() <= config.exhaustive_limit {
        Some(ground_states_with_limit(h, config.exhaustive_limit)?.0)
    } else {
        None
    };
    let runs: Vec<ChainRun> = (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(formula, spec.beta, config, seed, c))
        .collect();

    let (target, reference) = match exact_e0 {
        Some(e0) => (e0, EnergyReference::Exact),
        None => (
            runs.iter().map(|r| r.lowest).min().unwrap(),
            EnergyReference::BestSeen,
        ),
    };
    let per_chain: Vec<f64> = runs
        .iter()
        .map(|r| r.histogram[target as usize] as f64 / config.sweeps as f64)
        .collect();
    let chains = per_chain.len() as f64;
    let value = per_chain.iter().sum::<f64>() / chains;
    let std_error = if per_chain.len() > 1 {
        let var = per_chain.iter().map(|p| (p - value).powi(2)).sum::<f64>() / (chains - 1.0);
        (var / chains).sqrt()
    } else {
        (value * (1.0 - value) / config.sweeps as f64).sqrt()
    };
    let accepted: u64 = runs.iter().map(|r| r.accepted).sum();
    let proposed: u64 = runs.iter().map(|r| r.proposed).sum();
    Ok(GroundProbability {
        value,
        method: Method::Mcmc,
        std_error,
        samples_used: config.sweeps * config.chains as u64,
        ground_energy: target,
        reference,
        acceptance_rate: Some(if proposed == 0 {
            1.0
        } else {
            accepted as f64 / proposed as f64
        }),
    })
}
