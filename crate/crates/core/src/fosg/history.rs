use itertools::Itertools;

use super::{Action, Game, Observation};
use crate::error::{contract, Result};

const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// A playthrough `w0 a0 w1 ... wk` together with what it emitted.
///
/// `w0` is always the game's initial state. The chance reach and the
/// accumulated rewards are cached so that terminal utilities are available
/// without replaying the path.
#[derive(Clone, Debug)]
pub struct History<W> {
    worlds: Vec<W>,
    actions: Vec<Vec<Action>>,
    observations: Vec<Observation>,
    chance_reach: f64,
    utility: Vec<f64>,
    terminal: bool,
}

impl<W: Clone> History<W> {
    pub fn initial<G: Game<World = W>>(game: &G) -> Self {
        let world = game.initial_world();
        History {
            terminal: game.is_terminal(&world),
            worlds: vec![world],
            actions: Vec::new(),
            observations: Vec::new(),
            chance_reach: 1.0,
            utility: vec![0.0; game.num_players()],
        }
    }

    /// The world state the history ends in.
    pub fn world(&self) -> &W {
        self.worlds.last().expect("history always holds the initial world")
    }

    pub fn worlds(&self) -> &[W] {
        &self.worlds
    }

    pub fn actions(&self) -> &[Vec<Action>] {
        &self.actions
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    /// Number of transitions taken since the initial state.
    pub fn depth(&self) -> usize {
        self.actions.len()
    }

    pub fn is_initial(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn chance_reach(&self) -> f64 {
        self.chance_reach
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal
    }

    /// Sum of rewards received so far; the utility vector once terminal.
    pub fn utility(&self) -> &[f64] {
        &self.utility
    }

    /// Human-readable path, used for counterexample witnesses.
    pub fn describe<G: Game<World = W>>(&self, game: &G) -> String {
        self.actions
            .iter()
            .zip(&self.observations)
            .map(|(joint, obs)| {
                let acts = joint
                    .iter()
                    .enumerate()
                    .map(|(p, &a)| game.token(p, a))
                    .join(",");
                format!("[{acts}]->{}({})", obs.public, obs.private.join(","))
            })
            .join(" ")
    }
}

/// A child of a history: the joint action taken, the resulting history and
/// the transition probability of the sampled world.
#[derive(Clone, Debug)]
pub struct Successor<W> {
    pub joint_action: Vec<Action>,
    pub history: History<W>,
    pub probability: f64,
}

/// All joint actions at `world`, inactive players contributing the no-op.
pub fn joint_actions<G: Game>(game: &G, world: &G::World) -> Vec<Vec<Action>> {
    (0..game.num_players())
        .map(|p| game.legal_actions(world, p))
        .multi_cartesian_product()
        .collect()
}

/// Expands a non-terminal history by one step.
pub fn successors<G: Game>(game: &G, h: &History<G::World>) -> Result<Vec<Successor<G::World>>> {
    if h.terminal {
        return contract("successors of a terminal history");
    }
    let n = game.num_players();
    let world = h.world();
    let mut out = Vec::new();
    for joint in joint_actions(game, world) {
        let outcomes = game.step(world, &joint);
        if outcomes.is_empty() {
            return contract(format!(
                "non-terminal world {world:?} has no transition for {joint:?}"
            ));
        }
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return contract(format!("transition probabilities sum to {total}"));
        }
        for outcome in outcomes {
            if outcome.probability <= 0.0 {
                return contract("transition with non-positive probability");
            }
            if outcome.observation.private.len() != n || outcome.rewards.len() != n {
                return contract("observation or reward vector has the wrong arity");
            }
            if outcome.observation.public.is_empty() {
                return contract("public observation tokens must be non-empty");
            }
            let mut child = h.clone();
            child.terminal = game.is_terminal(&outcome.next);
            child.worlds.push(outcome.next);
            child.actions.push(joint.clone());
            child.observations.push(outcome.observation);
            child.chance_reach *= outcome.probability;
            for (u, r) in child.utility.iter_mut().zip(&outcome.rewards) {
                *u += r;
            }
            out.push(Successor { joint_action: joint.clone(), history: child, probability: outcome.probability });
        }
    }
    Ok(out)
}

/// Depth-first pre-order walk over every history, the initial one included.
pub fn walk_histories<G, F>(game: &G, mut visit: F) -> Result<()>
where
    G: Game,
    F: FnMut(&History<G::World>) -> Result<()>,
{
    fn recurse<G: Game, F: FnMut(&History<G::World>) -> Result<()>>(
        game: &G,
        h: &History<G::World>,
        visit: &mut F,
    ) -> Result<()> {
        visit(h)?;
        if h.is_terminal() {
            return Ok(());
        }
        for s in successors(game, h)? {
            recurse(game, &s.history, visit)?;
        }
        Ok(())
    }
    recurse(game, &History::initial(game), &mut visit)
}
