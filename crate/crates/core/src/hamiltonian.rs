//! The diagonal MAX-SAT Hamiltonian and its Ising spin-polynomial form.
//!
//! `energy(s)` is the number of clauses violated by bitstring `s`, so the
//! operator is real, diagonal and nonnegative, and its ground energy is the
//! MAX-SAT optimum (fewest violated clauses).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sat::{Assignment, CnfFormula};
use crate::solvers::DEFAULT_EXHAUSTIVE_LIMIT;

/// Largest `n` for which the full diagonal is materialised.
pub const DEFAULT_TABLE_LIMIT: usize = 26;

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<u32>),
    /// Point evaluation from clause masks (n <= 64).
    Lazy(Vec<(u64, u64)>),
    /// Point evaluation on assignments only (n > 64).
    Clauses,
}

#[derive(Debug, Clone)]
pub struct DiagonalHamiltonian {
    formula: CnfFormula,
    storage: Storage,
}

/// Dense diagonal with the default table limit.
pub fn build_hamiltonian(formula: &CnfFormula) -> Result<DiagonalHamiltonian> {
    DiagonalHamiltonian::dense(formula)
}

impl DiagonalHamiltonian {
    pub fn dense(formula: &CnfFormula) -> Result<Self> {
        Self::dense_with_limit(formula, DEFAULT_TABLE_LIMIT)
    }

    pub fn dense_with_limit(formula: &CnfFormula, limit: usize) -> Result<Self> {
        let n = formula.n();
        if n > limit.min(32) {
            return Err(Error::limit("dense Hamiltonian table", n, limit.min(32)));
        }
        let masks = formula.clause_masks()?;
        let table = (0..1u64 << n)
            .map(|s| masks.iter().filter(|&&(sup, pat)| s & sup == pat).count() as u32)
            .collect();
        Ok(DiagonalHamiltonian {
            formula: formula.clone(),
            storage: Storage::Dense(table),
        })
    }

    /// Evaluates energies on demand from the clauses.
    pub fn lazy(formula: &CnfFormula) -> Self {
        let storage = match formula.clause_masks() {
            Ok(masks) => Storage::Lazy(masks),
            Err(_) => Storage::Clauses,
        };
        DiagonalHamiltonian {
            formula: formula.clone(),
            storage,
        }
    }

    pub fn n(&self) -> usize {
        self.formula.n()
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// The materialised diagonal, if any.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.storage {
            Storage::Dense(t) => Some(t),
            _ => None,
        }
    }

    /// Energy of basis state `s` (bit `i` of `s` is variable `i`).
    ///
    /// Panics if `s >= 2^n` or if `n > 64`.
    pub fn energy(&self, s: u64) -> u32 {
        match &self.storage {
            Storage::Dense(t) => t[s as usize],
            Storage::Lazy(masks) => {
                assert!(self.n() == 64 || s >> self.n() == 0, "basis index out of range");
                masks.iter().filter(|&&(sup, pat)| s & sup == pat).count() as u32
            }
            Storage::Clauses => panic!("basis indices need n <= 64; use energy_of"),
        }
    }

    pub fn energy_of(&self, assignment: &Assignment) -> Result<u32> {
        Ok(self.formula.count_unsatisfied(assignment)? as u32)
    }

    /// Largest possible energy (every clause violated).
    pub fn max_energy_bound(&self) -> u32 {
        self.formula.m() as u32
    }

    /// Number of bitstrings at each energy `0..=m`.
    pub fn spectrum_histogram(&self) -> Result<Vec<u64>> {
        // A dense table is already enumerated; lazy storage obeys the usual limit.
        self.check_exhaustive(if self.is_dense() { 63 } else { DEFAULT_EXHAUSTIVE_LIMIT })?;
        let mut hist = vec![0u64; self.formula.m() + 1];
        self.for_each_energy(|_, e| hist[e as usize] += 1);
        Ok(hist)
    }

    fn check_exhaustive(&self, limit: usize) -> Result<()> {
        let limit = limit.min(63);
        if self.n() > limit {
            return Err(Error::limit("exhaustive enumeration", self.n(), limit));
        }
        Ok(())
    }

    fn for_each_energy(&self, mut visit: impl FnMut(u64, u32)) {
        match &self.storage {
            Storage::Dense(t) => t.iter().enumerate().for_each(|(s, &e)| visit(s as u64, e)),
            _ => (0..1u64 << self.n()).for_each(|s| visit(s, self.energy(s))),
        }
    }
}

/// Ground energy and every bitstring attaining it.
pub fn ground_states(h: &DiagonalHamiltonian) -> Result<(u32, Vec<u64>)> {
    ground_states_with_limit(h, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn ground_states_with_limit(h: &DiagonalHamiltonian, limit: usize) -> Result<(u32, Vec<u64>)> {
    h.check_exhaustive(limit)?;
    let mut best = u32::MAX;
    let mut states = Vec::new();
    h.for_each_energy(|s, e| {
        if e < best {
            best = e;
            states.clear();
        }
        if e == best {
            states.push(s);
        }
    });
    Ok((best, states))
}

/// How Boolean values map to spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinConvention {
    /// `z = 1 - 2x`: false is spin up (+1).
    #[default]
    FalseIsUp,
    /// `z = 2x - 1`: true is spin up (+1).
    TrueIsUp,
}

impl SpinConvention {
    pub fn spin(self, value: bool) -> i8 {
        match (self, value) {
            (SpinConvention::FalseIsUp, false) | (SpinConvention::TrueIsUp, true) => 1,
            _ => -1,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            SpinConvention::FalseIsUp => "z = 1 - 2x",
            SpinConvention::TrueIsUp => "z = 2x - 1",
        }
    }
}

/// Multilinear polynomial in spins `z_i ∈ {-1, +1}` whose value at the spin
/// image of any bitstring equals its energy. Keys are sorted spin indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingExpansion {
    pub convention: SpinConvention,
    pub coefficients: BTreeMap<Vec<usize>, f64>,
}

pub fn expand_to_ising(formula: &CnfFormula) -> IsingExpansion {
    expand_to_ising_with(formula, SpinConvention::default())
}

/// Each clause contributes the product of its literal-falsified indicators,
/// `Π_j (1 + σ_j z_j) / 2`, where `σ_j = ±1` depends on literal polarity and
/// the spin convention.
pub fn expand_to_ising_with(formula: &CnfFormula, convention: SpinConvention) -> IsingExpansion {
    let mut coefficients: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for clause in formula.clauses() {
        let lits = clause.literals();
        let w = lits.len();
        let scale = 0.5f64.powi(w as i32);
        for subset in 0u32..1 << w {
            let mut key = Vec::with_capacity(subset.count_ones() as usize);
            let mut sign = 1.0;
            for (j, l) in lits.iter().enumerate() {
                if subset >> j & 1 == 1 {
                    key.push(l.variable);
                    // Falsified-literal indicator: (1 + σ z)/2 with σ = spin(falsifying value).
                    sign *= convention.spin(l.negated) as f64;
                }
            }
            key.sort_unstable();
            *coefficients.entry(key).or_insert(0.0) += sign * scale;
        }
    }
    coefficients.retain(|_, c| *c != 0.0);
    IsingExpansion {
        convention,
        coefficients,
    }
}

impl IsingExpansion {
    pub fn max_order(&self) -> usize {
        self.coefficients.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn evaluate_spins(&self, spins: &[i8]) -> f64 {
        self.coefficients
            .iter()
            .map(|(key, c)| c * key.iter().map(|&i| spins[i] as f64).product::<f64>())
            .sum()
    }

    pub fn evaluate(&self, assignment: &Assignment) -> f64 {
        let spins: Vec<i8> = assignment
            .bits()
            .iter()
            .map(|&b| self.convention.spin(b))
            .collect();
        self.evaluate_spins(&spins)
    }

    /// Text table: a comment line naming the convention, then one line per
    /// term: `<order> <spin indices...> <coefficient>` with 0-based indices.
    pub fn to_table(&self) -> String {
        let mut out = format!("# spin convention: {}\n", self.convention.describe());
        for (key, c) in &self.coefficients {
            write!(out, "{}", key.len()).unwrap();
            for i in key {
                write!(out, " {i}").unwrap();
            }
            writeln!(out, " {c}").unwrap();
        }
        out
    }
}
