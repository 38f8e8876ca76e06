use std::collections::{HashMap, HashSet};

use super::{infostate_of, walk_histories, Game};
use crate::error::Result;

/// Exhaustive size measurements of a game.
///
/// Histories are counted from the first transition on: the bare initial
/// state is a formal placeholder with no active player and is excluded, so a
/// game whose first real decision follows a deterministic "game started"
/// transition counts the same as its extensive-form tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameCounts {
    pub num_histories: usize,
    pub num_terminals: usize,
    /// Distinct infostates per player, decision or not.
    pub num_infostates: Vec<usize>,
    /// Infostates at which the player is active.
    pub num_decision_infostates: Vec<usize>,
    pub num_public_states: usize,
    /// Largest private-infostate set of any player at any public state.
    pub max_private_per_public: usize,
}

impl GameCounts {
    pub fn total_infostates(&self) -> usize {
        self.num_infostates.iter().sum()
    }

    pub fn total_decision_infostates(&self) -> usize {
        self.num_decision_infostates.iter().sum()
    }
}

/// Counts histories, infostates and public states by walking the full tree.
pub fn enumerate_counts<G: Game>(game: &G) -> Result<GameCounts> {
    let n = game.num_players();
    let mut histories = 0;
    let mut terminals = 0;
    let mut infostates: Vec<HashSet<String>> = vec![HashSet::new(); n];
    let mut decisions: Vec<HashSet<String>> = vec![HashSet::new(); n];
    let mut privates: HashMap<String, Vec<HashSet<String>>> = HashMap::new();
    walk_histories(game, |h| {
        if h.is_initial() {
            return Ok(());
        }
        histories += 1;
        if h.is_terminal() {
            terminals += 1;
        }
        let active = game.active_players(h.world());
        for p in 0..n {
            let s = infostate_of(game, h, p);
            privates
                .entry(s.public_key())
                .or_insert_with(|| vec![HashSet::new(); n])[p]
                .insert(s.private_key());
            let key = s.key();
            if active.contains(&p) {
                decisions[p].insert(key.clone());
            }
            infostates[p].insert(key);
        }
        Ok(())
    })?;
    let max_private_per_public = privates
        .values()
        .flat_map(|per_player| per_player.iter().map(HashSet::len))
        .max()
        .unwrap_or(0);
    Ok(GameCounts {
        num_histories: histories,
        num_terminals: terminals,
        num_infostates: infostates.iter().map(HashSet::len).collect(),
        num_decision_infostates: decisions.iter().map(HashSet::len).collect(),
        num_public_states: privates.len(),
        max_private_per_public,
    })
}
