use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sat::{Assignment, CnfFormula};

/// Largest `n` the exhaustive oracles accept unless configured otherwise.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveConfig {
    pub limit: usize,
    /// Keep every optimal assignment in [`MaxSatResult::optima`].
    pub collect_optima: bool,
}

impl Default for ExhaustiveConfig {
    fn default() -> Self {
        ExhaustiveConfig {
            limit: DEFAULT_EXHAUSTIVE_LIMIT,
            collect_optima: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxSatResult {
    pub min_unsat: usize,
    pub optimal_count: u64,
    pub optima: Option<Vec<Assignment>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackboneReport {
    pub fixed_fraction: f64,
    /// `(variable, forced value)` in increasing variable order.
    pub fixed_variables: Vec<(usize, bool)>,
}

/// Visits every bitstring with its violated-clause count.
fn for_each_energy(formula: &CnfFormula, limit: usize, mut visit: impl FnMut(u64, usize)) -> Result<()> {
    let n = formula.n();
    if n > limit.min(63) {
        return Err(Error::limit("exhaustive enumeration", n, limit.min(63)));
    }
    let masks = formula.clause_masks()?;
    for s in 0..1u64 << n {
        let e = masks.iter().filter(|&&(sup, pat)| s & sup == pat).count();
        visit(s, e);
    }
    Ok(())
}

pub fn brute_force_maxsat(formula: &CnfFormula) -> Result<MaxSatResult> {
    brute_force_maxsat_with(formula, &ExhaustiveConfig::default())
}

pub fn brute_force_maxsat_with(formula: &CnfFormula, config: &ExhaustiveConfig) -> Result<MaxSatResult> {
    let mut min_unsat = usize::MAX;
    let mut optimal_count = 0u64;
    let mut optima = Vec::new();
    for_each_energy(formula, config.limit, |s, e| {
        if e < min_unsat {
            min_unsat = e;
            optimal_count = 0;
            optima.clear();
        }
        if e == min_unsat {
            optimal_count += 1;
            if config.collect_optima {
                optima.push(s);
            }
        }
    })?;
    let n = formula.n();
    Ok(MaxSatResult {
        min_unsat,
        optimal_count,
        optima: config
            .collect_optima
            .then(|| optima.into_iter().map(|s| Assignment::from_index(s, n)).collect()),
    })
}

/// Variables that take the same value in every assignment minimising the
/// number of violated clauses.
pub fn backbone_fraction(formula: &CnfFormula) -> Result<BackboneReport> {
    backbone_fraction_with(formula, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn backbone_fraction_with(formula: &CnfFormula, limit: usize) -> Result<BackboneReport> {
    let mut min_unsat = usize::MAX;
    // Bitwise AND / OR over all optimal bitstrings.
    let mut all_ones = u64::MAX;
    let mut any_ones = 0u64;
    for_each_energy(formula, limit, |s, e| {
        if e < min_unsat {
            min_unsat = e;
            all_ones = u64::MAX;
            any_ones = 0;
        }
        if e == min_unsat {
            all_ones &= s;
            any_ones |= s;
        }
    })?;
    let n = formula.n();
    let fixed_variables: Vec<(usize, bool)> = (0..n)
        .filter_map(|v| {
            if (all_ones >> v) & 1 == 1 {
                Some((v, true))
            } else if (any_ones >> v) & 1 == 0 {
                Some((v, false))
            } else {
                None
            }
        })
        .collect();
    Ok(BackboneReport {
        fixed_fraction: fixed_variables.len() as f64 / n as f64,
        fixed_variables,
    })
}
