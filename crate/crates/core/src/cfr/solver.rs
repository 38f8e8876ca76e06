use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::public::PublicStateSolver;
use super::vanilla::VanillaSolver;
use super::{CfrOptions, Counters, Policy, RegretTable};
use crate::error::{contract, Error, Result};
use crate::fosg::Game;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Recursion over the history tree.
    Vanilla,
    /// Public-tree passes with dense ChWU terminal products.
    PublicState,
    /// Public-tree passes with the rank-sweep terminal evaluation.
    PublicStateDomain,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Vanilla, Algorithm::PublicState, Algorithm::PublicStateDomain];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Vanilla => "vanilla",
            Algorithm::PublicState => "ps",
            Algorithm::PublicStateDomain => "ps-domain",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}; expected vanilla, ps or ps-domain")))
    }
}

/// A CFR run in progress. Each call to [`Solver::iterate`] performs one
/// regret update with the current strategy and then regret matching.
pub trait Solver {
    fn algorithm(&self) -> Algorithm;

    fn iterate(&mut self) -> Result<()>;

    fn iterations(&self) -> usize;

    fn counters(&self) -> Counters;

    /// Time spent building trees and tables before the first iteration.
    fn setup_nanoseconds(&self) -> u64;

    fn current_policy(&self) -> Policy;

    fn average_policy(&self) -> Policy;

    fn regrets(&self) -> RegretTable;

    /// Each player's expected utility under the strategy of the last
    /// iteration, recovered from the root counterfactual values.
    fn root_values(&self) -> Vec<f64>;

    /// Scalars retained between iterations.
    fn table_entries(&self) -> usize;
}

struct Vanilla<'g, G: Game> {
    inner: VanillaSolver<'g, G>,
    iterations: usize,
    setup: u64,
}

struct Public {
    inner: PublicStateSolver,
    algorithm: Algorithm,
    iterations: usize,
    setup: u64,
}

impl<G: Game> Solver for Vanilla<'_, G> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Vanilla
    }
    fn iterate(&mut self) -> Result<()> {
        self.inner.iterate()?;
        self.iterations += 1;
        Ok(())
    }
    fn iterations(&self) -> usize {
        self.iterations
    }
    fn counters(&self) -> Counters {
        self.inner.counters
    }
    fn setup_nanoseconds(&self) -> u64 {
        self.setup
    }
    fn current_policy(&self) -> Policy {
        self.inner.tables.current_policy()
    }
    fn average_policy(&self) -> Policy {
        self.inner.tables.average_policy()
    }
    fn regrets(&self) -> RegretTable {
        self.inner.tables.regret_table()
    }
    fn root_values(&self) -> Vec<f64> {
        self.inner.root_values().to_vec()
    }
    fn table_entries(&self) -> usize {
        self.inner.tables.entries()
    }
}

impl Solver for Public {
    fn algorithm(&self) -> Algorithm {
        self.algorithm
    }
    fn iterate(&mut self) -> Result<()> {
        self.inner.iterate()?;
        self.iterations += 1;
        Ok(())
    }
    fn iterations(&self) -> usize {
        self.iterations
    }
    fn counters(&self) -> Counters {
        self.inner.counters
    }
    fn setup_nanoseconds(&self) -> u64 {
        self.setup
    }
    fn current_policy(&self) -> Policy {
        self.inner.tables.current_policy()
    }
    fn average_policy(&self) -> Policy {
        self.inner.tables.average_policy()
    }
    fn regrets(&self) -> RegretTable {
        self.inner.tables.regret_table()
    }
    fn root_values(&self) -> Vec<f64> {
        self.inner.root_values().to_vec()
    }
    fn table_entries(&self) -> usize {
        self.inner.tables.entries() + self.inner.tree.table_entries()
    }
}

/// Sets up a solver of the given kind over `game`.
pub fn new_solver<'g, G: Game>(
    game: &'g G,
    algorithm: Algorithm,
    options: CfrOptions,
) -> Result<Box<dyn Solver + 'g>> {
    let start = Instant::now();
    Ok(match algorithm {
        Algorithm::Vanilla => {
            let inner = VanillaSolver::new(game, options)?;
            Box::new(Vanilla { inner, iterations: 0, setup: start.elapsed().as_nanos() as u64 })
        }
        Algorithm::PublicState | Algorithm::PublicStateDomain => {
            let inner = PublicStateSolver::new(game, algorithm == Algorithm::PublicStateDomain, options)?;
            Box::new(Public { inner, algorithm, iterations: 0, setup: start.elapsed().as_nanos() as u64 })
        }
    })
}

/// Runs `iterations` CFR iterations from the uniform strategy with default
/// options and returns the average strategy. `after_iteration` sees the
/// solver after each one.
pub fn cfr_solve<G: Game>(
    game: &G,
    algorithm: Algorithm,
    iterations: usize,
    after_iteration: impl FnMut(&dyn Solver) -> Result<()>,
) -> Result<Policy> {
    cfr_solve_with(game, algorithm, CfrOptions::default(), iterations, after_iteration)
}

pub fn cfr_solve_with<G: Game>(
    game: &G,
    algorithm: Algorithm,
    options: CfrOptions,
    iterations: usize,
    mut after_iteration: impl FnMut(&dyn Solver) -> Result<()>,
) -> Result<Policy> {
    if iterations == 0 {
        return contract("at least one iteration is required");
    }
    let mut solver = new_solver(game, algorithm, options)?;
    for _ in 0..iterations {
        solver.iterate()?;
        after_iteration(solver.as_ref())?;
    }
    Ok(solver.average_policy())
}
