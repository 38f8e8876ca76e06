//! Factored-observation stochastic games.
//!
//! A game is described by its world-state dynamics: who acts where, which
//! actions are legal, the transition distribution, rewards, and the
//! observation each transition emits. Chance lives inside [`Game::transition`];
//! there is no chance player.
//!
//! Observations compare by their string encoding. Tokens must not contain
//! `/`, `|` or whitespace, since they are joined into infostate keys.

mod counts;
mod history;
mod infostate;
mod public_tree;
mod sbg;
mod transform;

use std::fmt;

pub use counts::{enumerate_counts, GameCounts};
pub use history::{joint_actions, successors, walk_histories, History, Successor};
pub use infostate::{infostate_of, InfoState};
pub use public_tree::{
    build_chwu, build_public_tree, Chwu, LinearTerminal, PrivateSet, PublicState, PublicTree, NO_CARD,
};
pub use sbg::{check_sbg, check_sbg_histories, Condition, SbgReport};
pub use transform::{sb_transform, NormalFormGame, SbFormGame, SbWorld};

pub type Player = usize;

/// Public observation emitted by the transition out of the initial state.
pub const START_TOKEN: &str = "start";
/// Token used for the implicit action of an inactive player.
pub const NOOP_TOKEN: &str = "noop";

/// A player's action, interpreted by the game that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(pub u16);

impl Action {
    pub const NOOP: Action = Action(u16::MAX);

    pub fn is_noop(self) -> bool {
        self == Action::NOOP
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Everything a single transition reveals: one private observation per
/// player (empty string when nothing private is observed) and one public
/// observation shared by everyone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Observation {
    pub private: Vec<String>,
    pub public: String,
}

impl Observation {
    /// An observation with no private component for any of `n` players.
    pub fn public(n: usize, public: impl Into<String>) -> Self {
        Observation { private: vec![String::new(); n], public: public.into() }
    }
}

/// One possible result of applying a joint action to a world state.
#[derive(Clone, Debug)]
pub struct Outcome<W> {
    pub next: W,
    pub probability: f64,
    pub rewards: Vec<f64>,
    pub observation: Observation,
}

/// How a two-player, rank-ordered terminal is settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Settlement {
    /// `folder` gave up; the other player collects the stake.
    Fold { folder: Player },
    /// Higher rank collects the stake; equal ranks split.
    Showdown,
}

/// Terminal structure a poker-like game can expose so that terminal values
/// can be computed by a rank sweep instead of a dense matrix product.
///
/// `hands` are card bitmasks; two private hands conflict when they share a
/// card. `stake` is what the winner gains and the loser pays.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankedOutcome {
    pub settlement: Settlement,
    pub stake: f64,
    pub hands: [u64; 2],
    pub ranks: [u32; 2],
}

/// A finite factored-observation stochastic game.
///
/// Implementations must be immutable once built; all traversal state lives
/// in the callers.
pub trait Game: Send + Sync {
    type World: Clone + fmt::Debug + Send + Sync;

    fn name(&self) -> String;

    fn num_players(&self) -> usize;

    fn initial_world(&self) -> Self::World;

    /// Players acting at `world`. Empty at the initial state and at terminals.
    fn active_players(&self, world: &Self::World) -> Vec<Player>;

    /// Legal actions of an active player. Never called for inactive players.
    fn player_actions(&self, world: &Self::World, player: Player) -> Vec<Action>;

    /// Legal actions of `player`, the no-op singleton when inactive.
    fn legal_actions(&self, world: &Self::World, player: Player) -> Vec<Action> {
        if self.active_players(world).contains(&player) {
            self.player_actions(world, player)
        } else {
            vec![Action::NOOP]
        }
    }

    fn is_terminal(&self, world: &Self::World) -> bool;

    /// Distribution over next world states. Empty exactly at terminals.
    fn transition(&self, world: &Self::World, joint: &[Action]) -> Vec<(Self::World, f64)>;

    fn reward(&self, world: &Self::World, joint: &[Action], next: &Self::World) -> Vec<f64>;

    fn observe(&self, world: &Self::World, joint: &[Action], next: &Self::World) -> Observation;

    fn action_token(&self, player: Player, action: Action) -> String;

    /// Transition, reward and observation in one call. Games override this
    /// when computing them together is cheaper.
    fn step(&self, world: &Self::World, joint: &[Action]) -> Vec<Outcome<Self::World>> {
        self.transition(world, joint)
            .into_iter()
            .map(|(next, probability)| Outcome {
                rewards: self.reward(world, joint, &next),
                observation: self.observe(world, joint, &next),
                next,
                probability,
            })
            .collect()
    }

    /// Rank-ordered settlement of a terminal, for games that have one.
    fn ranked_outcome(&self, _world: &Self::World) -> Option<RankedOutcome> {
        None
    }

    fn token(&self, player: Player, action: Action) -> String {
        if action.is_noop() {
            NOOP_TOKEN.to_string()
        } else {
            self.action_token(player, action)
        }
    }
}

impl<G: Game + ?Sized> Game for &G {
    type World = G::World;

    fn name(&self) -> String {
        (**self).name()
    }
    fn num_players(&self) -> usize {
        (**self).num_players()
    }
    fn initial_world(&self) -> Self::World {
        (**self).initial_world()
    }
    fn active_players(&self, world: &Self::World) -> Vec<Player> {
        (**self).active_players(world)
    }
    fn player_actions(&self, world: &Self::World, player: Player) -> Vec<Action> {
        (**self).player_actions(world, player)
    }
    fn legal_actions(&self, world: &Self::World, player: Player) -> Vec<Action> {
        (**self).legal_actions(world, player)
    }
    fn is_terminal(&self, world: &Self::World) -> bool {
        (**self).is_terminal(world)
    }
    fn transition(&self, world: &Self::World, joint: &[Action]) -> Vec<(Self::World, f64)> {
        (**self).transition(world, joint)
    }
    fn reward(&self, world: &Self::World, joint: &[Action], next: &Self::World) -> Vec<f64> {
        (**self).reward(world, joint, next)
    }
    fn observe(&self, world: &Self::World, joint: &[Action], next: &Self::World) -> Observation {
        (**self).observe(world, joint, next)
    }
    fn action_token(&self, player: Player, action: Action) -> String {
        (**self).action_token(player, action)
    }
    fn step(&self, world: &Self::World, joint: &[Action]) -> Vec<Outcome<Self::World>> {
        (**self).step(world, joint)
    }
    fn ranked_outcome(&self, world: &Self::World) -> Option<RankedOutcome> {
        (**self).ranked_outcome(world)
    }
}

/// Appends `token` to a `/`-joined key segment, skipping empty tokens.
pub(crate) fn push_token(segment: &mut String, token: &str) {
    if token.is_empty() {
        return;
    }
    if !segment.is_empty() {
        segment.push('/');
    }
    segment.push_str(token);
}
