//! Counterfactual regret minimization implemented twice over the same game
//! model: once on the history tree and once on the public tree.
//!
//! Games are factored-observation stochastic games ([`fosg::Game`]): every
//! transition emits one private observation per player plus one public
//! observation. From that single description the crate derives
//!
//! * the history tree, traversed lazily by the history-based solver,
//! * player infostates with a canonical string key ([`fosg::InfoState`]),
//! * the public tree with per-public-state private infostate sets and
//!   chance-weighted utility matrices ([`fosg::PublicTree`]).
//!
//! [`cfr::Solver`] runs either regret update and produces identical average
//! strategies up to floating point summation order. [`eval`] holds the
//! exact oracles (expected values, best response, exploitability) and the
//! per-iteration instrumentation record.

pub mod cfr;
pub mod error;
pub mod eval;
pub mod fosg;
pub mod zoo;

pub use cfr::{cfr_solve, Algorithm, Averaging, CfrOptions, Counters, Policy, Schedule, Solver};
pub use error::{Error, Result};
pub use eval::{
    best_response_value, expected_values, exploitability, strategy_distance, BrResult, Evaluator,
    RunRecord,
};
pub use fosg::{
    build_public_tree, check_sbg, enumerate_counts, infostate_of, sb_transform, successors,
    Action, Game, GameCounts, History, InfoState, NormalFormGame, Observation, Player,
    PublicTree, SbgReport,
};
pub use zoo::{make_game, AnyGame, GameSpec};
