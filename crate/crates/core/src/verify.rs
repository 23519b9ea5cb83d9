//! Cross-checks every solver and Hamiltonian path against naive
//! enumeration on small random formulas.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hamiltonian::{build_hamiltonian, expand_to_ising, ground_states};
use crate::sat::{generate_random_ksat, Assignment, CnfFormula};
use crate::solvers::{brute_force_maxsat, dpll_solve, DecisionStatus};
use crate::sweep::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSuiteConfig {
    pub formulas: usize,
    pub k: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub min_density: f64,
    pub max_density: f64,
    pub seed: u64,
}

impl Default for OracleSuiteConfig {
    fn default() -> Self {
        OracleSuiteConfig {
            formulas: 500,
            k: 3,
            min_n: 3,
            max_n: 12,
            min_density: 0.5,
            max_density: 8.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: usize,
    pub total: usize,
}

impl OracleCheck {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub formulas: usize,
    pub satisfiable: usize,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::ok)
    }
}

/// Outcome of each check on a single formula.
#[derive(Debug, Clone, Copy)]
struct FormulaVerdict {
    satisfiable: bool,
    dpll_status: bool,
    diagonal: bool,
    ising: bool,
    ground_energy: bool,
}

fn check_formula(f: &CnfFormula) -> Result<FormulaVerdict> {
    let n = f.n();
    let energies: Vec<usize> = (0..1u64 << n)
        .map(|s| f.count_unsatisfied(&Assignment::from_index(s, n)))
        .collect::<Result<_>>()?;
    let naive_min = *energies.iter().min().expect("nonempty");
    let satisfiable = naive_min == 0;

    let dpll = dpll_solve(f);
    let dpll_status = match dpll.status {
        DecisionStatus::Sat => {
            satisfiable && dpll.witness.as_ref().is_some_and(|w| f.count_unsatisfied(w).ok() == Some(0))
        }
        DecisionStatus::Unsat => !satisfiable,
        DecisionStatus::Timeout => false,
    };

    let h = build_hamiltonian(f)?;
    let diagonal = energies.iter().enumerate().all(|(s, &e)| h.energy(s as u64) as usize == e);

    let ising = expand_to_ising(f);
    let ising_ok = energies
        .iter()
        .enumerate()
        .all(|(s, &e)| (ising.evaluate(&Assignment::from_index(s as u64, n)) - e as f64).abs() < 1e-9);

    let (e0, _) = ground_states(&h)?;
    let maxsat = brute_force_maxsat(f)?;
    let ground_energy = e0 as usize == naive_min && maxsat.min_unsat == naive_min;

    Ok(FormulaVerdict {
        satisfiable,
        dpll_status,
        diagonal,
        ising: ising_ok,
        ground_energy,
    })
}

/// Formula `i` has `n` drawn uniformly from `[min_n, max_n]` and a density
/// evenly spaced across `[min_density, max_density]`, so the whole range is
/// covered.
pub fn oracle_formulas(config: &OracleSuiteConfig) -> Result<Vec<CnfFormula>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.formulas)
        .map(|i| {
            let n = rng.gen_range(config.min_n.max(config.k)..=config.max_n.max(config.k));
            let t = if config.formulas > 1 {
                i as f64 / (config.formulas - 1) as f64
            } else {
                0.0
            };
            let alpha = config.min_density + t * (config.max_density - config.min_density);
            let m = (alpha * n as f64).round() as usize;
            generate_random_ksat(n, m, config.k, derive_seed(config.seed, i as u64))
        })
        .collect()
}

pub fn run_oracle_suite(config: &OracleSuiteConfig) -> Result<OracleReport> {
    let formulas = oracle_formulas(config)?;
    let verdicts: Vec<FormulaVerdict> = formulas.iter().map(check_formula).collect::<Result<_>>()?;
    let total = verdicts.len();
    let tally = |name: &str, pick: fn(&FormulaVerdict) -> bool| OracleCheck {
        name: name.to_string(),
        passed: verdicts.iter().filter(|v| pick(v)).count(),
        total,
    };
    Ok(OracleReport {
        formulas: total,
        satisfiable: verdicts.iter().filter(|v| v.satisfiable).count(),
        checks: vec![
            tally("dpll status matches enumeration", |v| v.dpll_status),
            tally("hamiltonian diagonal matches unsatisfied count", |v| v.diagonal),
            tally("ising polynomial matches diagonal", |v| v.ising),
            tally("ground energy matches brute-force min_unsat", |v| v.ground_energy),
        ],
    })
}
