//! CNF formulas, uniform random k-SAT ensembles and DIMACS I/O.
//!
//! Variables are 0-based internally. Bitstring (basis-state) indices map
//! variable `i` to bit `i` of the index, so `x_i = (s >> i) & 1`.

pub mod dimacs;
mod generate;

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate_random_ksat, RNG_ALGORITHM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn positive(variable: usize) -> Self {
        Literal {
            variable,
            negated: false,
        }
    }

    pub fn negative(variable: usize) -> Self {
        Literal {
            variable,
            negated: true,
        }
    }

    /// DIMACS-style signed, 1-based literal.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 {
            return None;
        }
        let variable = (lit.unsigned_abs() - 1) as usize;
        Some(Literal {
            variable,
            negated: lit < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.variable as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal {
            variable: self.variable,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.variable + 1)
        } else {
            write!(f, "x{}", self.variable + 1)
        }
    }
}

/// A disjunction of literals over pairwise distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Fails if two literals share a variable.
    pub fn new(literals: Vec<Literal>) -> Result<Self> {
        for (i, a) in literals.iter().enumerate() {
            if literals[..i].iter().any(|b| b.variable == a.variable) {
                return Err(Error::Domain(format!(
                    "variable x{} occurs twice in one clause",
                    a.variable + 1
                )));
            }
        }
        Ok(Clause { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_satisfied_by(&self, bits: &[bool]) -> bool {
        self.literals.iter().any(|l| l.eval(bits[l.variable]))
    }

    /// `(support, falsifying pattern)` bit masks: a bitstring `s` violates the
    /// clause iff `s & support == pattern`. Requires every variable < 64.
    pub fn masks(&self) -> (u64, u64) {
        let mut support = 0u64;
        let mut pattern = 0u64;
        for l in &self.literals {
            support |= 1 << l.variable;
            if l.negated {
                pattern |= 1 << l.variable;
            }
        }
        (support, pattern)
    }
}

/// A k-SAT instance.
///
/// Formulas built through [`CnfFormula::new`] have uniform clause width `k`.
/// [`CnfFormula::new_mixed`] accepts mixed widths (relaxed DIMACS import) and
/// sets `k` to the widest clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    n: usize,
    k: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n: usize, k: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a formula needs at least one variable".into()));
        }
        if k == 0 {
            return Err(Error::Domain("clause width must be at least 1".into()));
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.width() != k {
                return Err(Error::Domain(format!(
                    "clause {} has width {}, expected {k}",
                    i + 1,
                    c.width()
                )));
            }
        }
        let f = CnfFormula { n, k, clauses };
        f.check_ranges()?;
        Ok(f)
    }

    pub fn new_mixed(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a formula needs at least one variable".into()));
        }
        if let Some(i) = clauses.iter().position(|c| c.width() == 0) {
            return Err(Error::Domain(format!("clause {} is empty", i + 1)));
        }
        let k = clauses.iter().map(Clause::width).max().unwrap_or(1);
        let f = CnfFormula { n, k, clauses };
        f.check_ranges()?;
        Ok(f)
    }

    /// Parse-from-literals convenience for tests and examples; literals are
    /// DIMACS-style signed 1-based integers.
    pub fn from_dimacs_clauses(n: usize, k: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                let lits = c
                    .iter()
                    .map(|&l| {
                        Literal::from_dimacs(l)
                            .ok_or_else(|| Error::Domain("literal 0 inside a clause".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Clause::new(lits)
            })
            .collect::<Result<Vec<_>>>()?;
        CnfFormula::new(n, k, clauses)
    }

    fn check_ranges(&self) -> Result<()> {
        for (i, c) in self.clauses.iter().enumerate() {
            if let Some(l) = c.literals().iter().find(|l| l.variable >= self.n) {
                return Err(Error::Domain(format!(
                    "clause {} references x{} but the formula has {} variables",
                    i + 1,
                    l.variable + 1,
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_uniform(&self) -> bool {
        self.clauses.iter().all(|c| c.width() == self.k)
    }

    pub fn density(&self) -> Density {
        Density::new(self.m(), self.n)
    }

    /// Number of clauses in which every literal evaluates false.
    pub fn count_unsatisfied(&self, assignment: &Assignment) -> Result<usize> {
        if assignment.len() != self.n {
            return Err(Error::Domain(format!(
                "assignment has {} values, formula has {} variables",
                assignment.len(),
                self.n
            )));
        }
        Ok(self
            .clauses
            .iter()
            .filter(|c| !c.is_satisfied_by(assignment.bits()))
            .count())
    }

    pub fn count_satisfied(&self, assignment: &Assignment) -> Result<usize> {
        Ok(self.m() - self.count_unsatisfied(assignment)?)
    }

    /// Clause masks for bitstring evaluation (see [`Clause::masks`]).
    pub fn clause_masks(&self) -> Result<Vec<(u64, u64)>> {
        if self.n > 64 {
            return Err(Error::limit("bitstring evaluation", self.n, 64));
        }
        Ok(self.clauses.iter().map(Clause::masks).collect())
    }
}

/// Clause density `m / n`, kept as an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Density(Ratio<u64>);

impl Density {
    /// Panics if `n == 0`; use [`clause_density`] for a checked version.
    pub fn new(m: usize, n: usize) -> Self {
        Density(Ratio::new(m as u64, n as u64))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn value(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    numer: u64,
    denom: u64,
    value: f64,
}

impl Serialize for Density {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityRepr {
            numer: self.numer(),
            denom: self.denom(),
            value: self.value(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Density {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DensityRepr::deserialize(d)?;
        if r.denom == 0 {
            return Err(serde::de::Error::custom("density with zero denominator"));
        }
        Ok(Density(Ratio::new(r.numer, r.denom)))
    }
}

pub fn clause_density(formula: &CnfFormula) -> Result<Density> {
    if formula.n() == 0 {
        return Err(Error::Domain("clause density of a formula with no variables".into()));
    }
    Ok(formula.density())
}

/// A full truth assignment; `bits[i]` is the value of variable `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn all_false(n: usize) -> Self {
        Assignment {
            bits: vec![false; n],
        }
    }

    /// Bit `i` of `index` becomes the value of variable `i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    /// Inverse of [`Assignment::from_index`]; `None` above 64 variables.
    pub fn to_index(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i)),
        )
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, variable: usize) -> bool {
        self.bits[variable]
    }

    pub fn set(&mut self, variable: usize, value: bool) {
        self.bits[variable] = value;
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Assignment::new(bits)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// (x1 ∨ ¬x2 ∨ x3) ∧ (¬x1 ∨ x4 ∨ ¬x5) ∧ (x2 ∨ x3 ∨ ¬x4)
    pub fn five_variable_example() -> CnfFormula {
        CnfFormula::from_dimacs_clauses(5, 3, &[&[1, -2, 3], &[-1, 4, -5], &[2, 3, -4]]).unwrap()
    }
}
