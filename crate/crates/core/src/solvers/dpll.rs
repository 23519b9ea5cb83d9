//! Backtracking search with unit propagation.
//!
//! Clause state is tracked with per-clause counters (satisfied literals and
//! falsified literals) updated through literal occurrence lists, and undone
//! from an assignment trail on backtrack. There is no clause learning.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::sat::{Assignment, CnfFormula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchHeuristic {
    /// Lowest-index unassigned variable that still occurs in an unsatisfied
    /// clause; the true branch is tried first.
    LowestIndexTrueFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DpllConfig {
    pub heuristic: BranchHeuristic,
    /// Assign pure literals as implied (non-decision) assignments.
    pub pure_literal: bool,
    /// Give up with [`DecisionStatus::Timeout`] once this many decisions
    /// have been made.
    pub decision_cap: Option<u64>,
}

impl Default for DpllConfig {
    fn default() -> Self {
        DpllConfig {
            heuristic: BranchHeuristic::LowestIndexTrueFirst,
            pure_literal: false,
            decision_cap: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionStatus {
    Sat,
    Unsat,
    Timeout,
}

/// Work done by one solve. `decisions` counts every branch taken, including
/// the second (false) branch tried after a refuted true branch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchEffort {
    pub decisions: u64,
    pub propagations: u64,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionResult {
    pub status: DecisionStatus,
    /// Present iff `status` is `Sat`.
    pub witness: Option<Assignment>,
    pub effort: SearchEffort,
}

pub fn dpll_solve(formula: &CnfFormula) -> DecisionResult {
    dpll_solve_with(formula, &DpllConfig::default())
}

pub fn dpll_solve_with(formula: &CnfFormula, config: &DpllConfig) -> DecisionResult {
    let start = Instant::now();
    let mut solver = Solver::new(formula);
    let status = solver.run(config);
    let witness = (status == DecisionStatus::Sat).then(|| {
        let w = solver.witness();
        assert_eq!(
            formula.count_unsatisfied(&w).expect("witness length"),
            0,
            "dpll witness does not satisfy the formula"
        );
        w
    });
    DecisionResult {
        status,
        witness,
        effort: SearchEffort {
            decisions: solver.decisions,
            propagations: solver.propagations,
            wall_time: start.elapsed().as_secs_f64(),
        },
    }
}

const UNASSIGNED: i8 = -1;

#[inline]
fn lit_code(variable: usize, negated: bool) -> usize {
    2 * variable + negated as usize
}

struct Frame {
    variable: usize,
    trail_len: usize,
    flipped: bool,
}

struct Solver {
    n: usize,
    /// Literal codes of each clause, flattened.
    lits: Vec<usize>,
    starts: Vec<usize>,
    /// Clause ids per literal code.
    occurs: Vec<Vec<usize>>,
    value: Vec<i8>,
    sat_count: Vec<u32>,
    false_count: Vec<u32>,
    unsatisfied: usize,
    trail: Vec<usize>,
    queue: Vec<usize>,
    decisions: u64,
    propagations: u64,
}

impl Solver {
    fn new(formula: &CnfFormula) -> Self {
        let n = formula.n();
        let mut lits = Vec::new();
        let mut starts = vec![0];
        let mut occurs = vec![Vec::new(); 2 * n];
        for (ci, c) in formula.clauses().iter().enumerate() {
            for l in c.literals() {
                let code = lit_code(l.variable, l.negated);
                lits.push(code);
                occurs[code].push(ci);
            }
            starts.push(lits.len());
        }
        let m = formula.m();
        Solver {
            n,
            lits,
            starts,
            occurs,
            value: vec![UNASSIGNED; n],
            sat_count: vec![0; m],
            false_count: vec![0; m],
            unsatisfied: m,
            trail: Vec::with_capacity(n),
            queue: Vec::new(),
            decisions: 0,
            propagations: 0,
        }
    }

    fn clause(&self, c: usize) -> &[usize] {
        &self.lits[self.starts[c]..self.starts[c + 1]]
    }

    #[inline]
    fn lit_value(&self, code: usize) -> i8 {
        match self.value[code >> 1] {
            UNASSIGNED => UNASSIGNED,
            v => (v as usize ^ (code & 1)) as i8,
        }
    }

    /// Makes literal `code` true. Returns false on conflict; implied
    /// literals are pushed to the queue.
    fn assign(&mut self, code: usize) -> bool {
        let var = code >> 1;
        debug_assert_eq!(self.value[var], UNASSIGNED);
        self.value[var] = (code & 1 == 0) as i8;
        self.trail.push(code);
        let mut ok = true;
        for i in 0..self.occurs[code].len() {
            let c = self.occurs[code][i];
            if self.sat_count[c] == 0 {
                self.unsatisfied -= 1;
            }
            self.sat_count[c] += 1;
        }
        let neg = code ^ 1;
        for i in 0..self.occurs[neg].len() {
            let c = self.occurs[neg][i];
            self.false_count[c] += 1;
            if !ok || self.sat_count[c] > 0 {
                continue;
            }
            let width = (self.starts[c + 1] - self.starts[c]) as u32;
            if self.false_count[c] == width {
                ok = false;
            } else if self.false_count[c] + 1 == width {
                let unit = self
                    .clause(c)
                    .iter()
                    .copied()
                    .find(|&l| self.lit_value(l) == UNASSIGNED)
                    .expect("unit clause has one free literal");
                self.queue.push(unit);
            }
        }
        ok
    }

    fn unassign_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let code = self.trail.pop().unwrap();
            for i in 0..self.occurs[code].len() {
                let c = self.occurs[code][i];
                self.sat_count[c] -= 1;
                if self.sat_count[c] == 0 {
                    self.unsatisfied += 1;
                }
            }
            let neg = code ^ 1;
            for i in 0..self.occurs[neg].len() {
                let c = self.occurs[neg][i];
                self.false_count[c] -= 1;
            }
            self.value[code >> 1] = UNASSIGNED;
        }
        self.queue.clear();
    }

    /// Drains the unit queue. Returns false on conflict.
    fn propagate(&mut self, pure_literal: bool) -> bool {
        loop {
            while let Some(code) = self.queue.pop() {
                match self.lit_value(code) {
                    1 => continue,
                    0 => {
                        self.queue.clear();
                        return false;
                    }
                    _ => {}
                }
                self.propagations += 1;
                if !self.assign(code) {
                    self.queue.clear();
                    return false;
                }
            }
            if !pure_literal || !self.push_pure_literals() {
                return true;
            }
        }
    }

    fn occurs_active(&self, code: usize) -> bool {
        self.occurs[code].iter().any(|&c| self.sat_count[c] == 0)
    }

    fn push_pure_literals(&mut self) -> bool {
        for v in 0..self.n {
            if self.value[v] != UNASSIGNED {
                continue;
            }
            let pos = self.occurs_active(lit_code(v, false));
            let neg = self.occurs_active(lit_code(v, true));
            if pos != neg {
                self.queue.push(lit_code(v, neg));
            }
        }
        !self.queue.is_empty()
    }

    fn pick_branch(&self) -> Option<usize> {
        (0..self.n).find(|&v| {
            self.value[v] == UNASSIGNED
                && (self.occurs_active(lit_code(v, false)) || self.occurs_active(lit_code(v, true)))
        })
    }

    fn run(&mut self, config: &DpllConfig) -> DecisionStatus {
        let cap = config.decision_cap.unwrap_or(u64::MAX);
        for c in 0..self.starts.len() - 1 {
            if self.clause(c).len() == 1 {
                self.queue.push(self.clause(c)[0]);
            }
        }
        if !self.propagate(config.pure_literal) {
            return DecisionStatus::Unsat;
        }
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            if self.unsatisfied == 0 {
                return DecisionStatus::Sat;
            }
            let var = self
                .pick_branch()
                .expect("an unsatisfied clause without conflict has a free variable");
            if self.decisions >= cap {
                return DecisionStatus::Timeout;
            }
            self.decisions += 1;
            stack.push(Frame {
                variable: var,
                trail_len: self.trail.len(),
                flipped: false,
            });
            let mut ok = self.assign(lit_code(var, false)) && self.propagate(config.pure_literal);
            while !ok {
                // Backtrack to the most recent unflipped decision.
                loop {
                    let Some(frame) = stack.last_mut() else {
                        return DecisionStatus::Unsat;
                    };
                    let trail_len = frame.trail_len;
                    if frame.flipped {
                        stack.pop();
                        self.unassign_to(trail_len);
                        continue;
                    }
                    frame.flipped = true;
                    let v = frame.variable;
                    self.unassign_to(trail_len);
                    if self.decisions >= cap {
                        return DecisionStatus::Timeout;
                    }
                    self.decisions += 1;
                    ok = self.assign(lit_code(v, true)) && self.propagate(config.pure_literal);
                    break;
                }
            }
        }
    }

    fn witness(&self) -> Assignment {
        Assignment::new(self.value.iter().map(|&v| v == 1).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::fixtures::five_variable_example;
    use crate::sat::generate_random_ksat;

    fn exhaustive_sat(f: &CnfFormula) -> bool {
        (0..1u64 << f.n()).any(|s| {
            f.count_unsatisfied(&Assignment::from_index(s, f.n()))
                .unwrap()
                == 0
        })
    }

    #[test]
    fn worked_example_is_sat() {
        let f = five_variable_example();
        let r = dpll_solve(&f);
        assert_eq!(r.status, DecisionStatus::Sat);
        assert_eq!(f.count_unsatisfied(r.witness.as_ref().unwrap()).unwrap(), 0);
    }

    #[test]
    fn contradiction_is_unsat_by_propagation() {
        let f = CnfFormula::from_dimacs_clauses(1, 1, &[&[1], &[-1]]).unwrap();
        let r = dpll_solve(&f);
        assert_eq!(r.status, DecisionStatus::Unsat);
        assert!(r.witness.is_none());
        assert_eq!(r.effort.decisions, 0);
    }

    #[test]
    fn empty_formula_needs_no_decisions() {
        let f = generate_random_ksat(6, 0, 3, 0).unwrap();
        let r = dpll_solve(&f);
        assert_eq!(r.status, DecisionStatus::Sat);
        assert_eq!(r.effort.decisions, 0);
    }

    #[test]
    fn unit_chain_solved_by_propagation() {
        // x1, x1 -> x2, x2 -> x3
        let f = crate::sat::dimacs::read_dimacs_with(
            "p cnf 3 3\n1 0\n-1 2 0\n-2 3 0\n",
            crate::sat::dimacs::DimacsOptions::relaxed(),
        )
        .unwrap();
        let r = dpll_solve(&f);
        assert_eq!(r.status, DecisionStatus::Sat);
        assert_eq!(r.effort.decisions, 0);
        assert_eq!(r.effort.propagations, 3);
        assert_eq!(r.witness.unwrap().bits(), &[true, true, true]);
    }

    #[test]
    fn agrees_with_enumeration() {
        for i in 0..500u64 {
            let n = 3 + (i % 10) as usize;
            let alpha = 0.5 + 7.5 * ((i * 37) % 100) as f64 / 100.0;
            let m = (alpha * n as f64).round() as usize;
            let f = generate_random_ksat(n, m, 3, i).unwrap();
            let r = dpll_solve(&f);
            assert_eq!(r.status == DecisionStatus::Sat, exhaustive_sat(&f), "instance {i}");
            let rp = dpll_solve_with(
                &f,
                &DpllConfig {
                    pure_literal: true,
                    ..Default::default()
                },
            );
            assert_eq!(rp.status, r.status);
        }
    }

    #[test]
    fn effort_is_deterministic() {
        let f = generate_random_ksat(40, 170, 3, 5).unwrap();
        let a = dpll_solve(&f);
        let b = dpll_solve(&f);
        assert_eq!(a.status, b.status);
        assert_eq!(a.effort.decisions, b.effort.decisions);
        assert_eq!(a.effort.propagations, b.effort.propagations);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn decision_cap_times_out() {
        let f = generate_random_ksat(60, 256, 3, 1).unwrap();
        let full = dpll_solve(&f);
        assert!(full.effort.decisions > 5);
        let capped = dpll_solve_with(
            &f,
            &DpllConfig {
                decision_cap: Some(5),
                ..Default::default()
            },
        );
        assert_eq!(capped.status, DecisionStatus::Timeout);
        assert!(capped.witness.is_none());
        assert_eq!(capped.effort.decisions, 5);
    }
}
