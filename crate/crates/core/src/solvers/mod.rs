//! Exact classical reference engines.

mod dpll;
mod maxsat;

pub use dpll::{
    dpll_solve, dpll_solve_with, BranchHeuristic, DecisionResult, DecisionStatus, DpllConfig,
    SearchEffort,
};
pub use maxsat::{
    backbone_fraction, backbone_fraction_with, brute_force_maxsat, brute_force_maxsat_with,
    BackboneReport, ExhaustiveConfig, MaxSatResult, DEFAULT_EXHAUSTIVE_LIMIT,
};
