//! Counterfactual regret minimization over histories and over public states.
//!
//! Both solvers share the same tables and update rule: one regret update
//! with the current strategy, regret matching per infostate, and the new
//! strategy folded into the average. Only the traversal differs.

mod counters;
mod public;
mod regret_matching;
mod solver;
mod tables;
mod terminal;
mod vanilla;

pub use counters::Counters;
pub use public::PublicStateSolver;
pub use regret_matching::regret_matching;
pub use solver::{cfr_solve, cfr_solve_with, new_solver, Algorithm, Solver};
pub use tables::{Averaging, CfrOptions, InfostateIndex, Policy, RegretTable, Schedule, Tables};
pub use terminal::{linear_terminal, terminal_eval_generic, terminal_eval_poker_linear};
pub use vanilla::VanillaSolver;
