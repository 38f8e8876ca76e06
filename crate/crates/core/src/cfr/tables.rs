//! Per-infostate storage shared by both solvers.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use super::regret_matching::regret_matching_into;
use crate::fosg::Player;

/// Decision infostates numbered densely, each with a slice of a flat
/// per-action buffer.
#[derive(Clone, Debug, Default)]
pub struct InfostateIndex {
    keys: Vec<String>,
    players: Vec<Player>,
    actions: Vec<Vec<String>>,
    starts: Vec<usize>,
    total: usize,
    lookup: HashMap<String, usize>,
}

impl InfostateIndex {
    /// Id of `key`, registering it with its action tokens if new.
    pub fn insert(&mut self, key: String, player: Player, actions: Vec<String>) -> usize {
        if let Some(&id) = self.lookup.get(&key) {
            return id;
        }
        let id = self.keys.len();
        self.lookup.insert(key.clone(), id);
        self.keys.push(key);
        self.players.push(player);
        self.starts.push(self.total);
        self.total += actions.len();
        self.actions.push(actions);
        id
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn id(&self, key: &str) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    pub fn key(&self, id: usize) -> &str {
        &self.keys[id]
    }

    pub fn player(&self, id: usize) -> Player {
        self.players[id]
    }

    pub fn actions(&self, id: usize) -> &[String] {
        &self.actions[id]
    }

    pub fn num_actions(&self, id: usize) -> usize {
        self.actions[id].len()
    }

    /// Slice of the flat per-action buffers owned by `id`.
    pub fn range(&self, id: usize) -> Range<usize> {
        self.starts[id]..self.starts[id] + self.actions[id].len()
    }

    /// Length of the flat per-action buffers.
    pub fn total_actions(&self) -> usize {
        self.total
    }
}

/// Action distributions per infostate key, kept sorted by key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Policy {
    entries: BTreeMap<String, (Vec<String>, Vec<f64>)>,
}

impl Policy {
    pub fn new() -> Self {
        Policy::default()
    }

    pub fn insert(&mut self, key: String, actions: Vec<String>, probs: Vec<f64>) {
        debug_assert_eq!(actions.len(), probs.len());
        self.entries.insert(key, (actions, probs));
    }

    pub fn get(&self, key: &str) -> Option<&[f64]> {
        self.entries.get(key).map(|(_, p)| p.as_slice())
    }

    pub fn actions(&self, key: &str) -> Option<&[String]> {
        self.entries.get(key).map(|(a, _)| a.as_slice())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(key, action tokens, probabilities)` in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String], &[f64])> {
        self.entries.iter().map(|(k, (a, p))| (k.as_str(), a.as_slice(), p.as_slice()))
    }
}

/// Cumulative regrets per infostate key.
pub type RegretTable = BTreeMap<String, Vec<f64>>;

/// How the returned average strategy weights the iterates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Averaging {
    /// Each iterate weighted by the player's own reach of the infostate.
    #[default]
    ReachWeighted,
    /// Plain mean of the behavioral iterates.
    Uniform,
}

/// Cumulative regrets up to this fraction of the summed action-value
/// magnitudes count as zero in regret matching. Rounding leaves exact ties
/// with residues around 1e-16 of that sum whose sign depends on summation
/// order, and regret matching would turn that sign into a pure or a uniform
/// strategy.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Which players an iteration updates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Iteration `t` (from 0) updates the regrets and strategy of player
    /// `t mod N` only.
    #[default]
    Alternating,
    /// Every player at every iteration.
    Simultaneous,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfrOptions {
    pub averaging: Averaging,
    pub schedule: Schedule,
}

/// Regrets, current strategy and average accumulator over a flat layout.
///
/// `parents[s]` is the player's previous decision infostate on the way to
/// `s` and the action taken there; it determines the player's own reach of
/// every infostate without a tree walk.
#[derive(Clone, Debug)]
pub struct Tables {
    pub index: InfostateIndex,
    pub parents: Vec<Option<(usize, usize)>>,
    pub regrets: Vec<f64>,
    pub current: Vec<f64>,
    pub average: Vec<f64>,
    pub normalizer: Vec<f64>,
    pub options: CfrOptions,
    /// Sum over updates of the largest `|q|` at each infostate.
    scale: Vec<f64>,
    num_players: usize,
    iteration: usize,
    reach: Vec<f64>,
}

impl Tables {
    pub fn new(
        index: InfostateIndex,
        parents: Vec<Option<(usize, usize)>>,
        num_players: usize,
        options: CfrOptions,
    ) -> Self {
        let n = index.total_actions();
        let mut current = vec![0.0; n];
        for id in 0..index.len() {
            let r = index.range(id);
            let k = r.len() as f64;
            current[r].fill(1.0 / k);
        }
        for (id, p) in parents.iter().enumerate() {
            if let Some((parent, _)) = p {
                assert!(*parent < id, "infostates must be numbered parents first");
            }
        }
        Tables {
            regrets: vec![0.0; n],
            average: vec![0.0; n],
            normalizer: vec![0.0; index.len()],
            scale: vec![0.0; index.len()],
            reach: vec![0.0; index.len()],
            current,
            index,
            parents,
            options,
            num_players,
            iteration: 0,
        }
    }

    /// Own reach of every infostate under the current strategy.
    pub fn own_reach(&mut self) -> &[f64] {
        for id in 0..self.index.len() {
            self.reach[id] = match self.parents[id] {
                None => 1.0,
                Some((parent, a)) => self.reach[parent] * self.current[self.index.range(parent).start + a],
            };
        }
        &self.reach
    }

    /// Whether the running iteration updates `player`.
    pub fn updates(&self, player: Player) -> bool {
        match self.options.schedule {
            Schedule::Alternating => self.iteration % self.num_players == player,
            Schedule::Simultaneous => true,
        }
    }

    /// Value of infostate `id` under the current strategy given its action
    /// values `q`; adds the instantaneous regrets when its player updates.
    pub fn accumulate(&mut self, id: usize, q: &[f64]) -> f64 {
        let r = self.index.range(id);
        let v: f64 = self.current[r.clone()].iter().zip(q).map(|(p, x)| p * x).sum();
        if self.updates(self.index.player(id)) {
            for (reg, x) in self.regrets[r].iter_mut().zip(q) {
                *reg += x - v;
            }
            self.scale[id] += q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        }
        v
    }

    /// Regret matching for the players this iteration updated, whose new
    /// strategies are then folded into the average.
    pub fn advance(&mut self) {
        for id in 0..self.index.len() {
            if self.updates(self.index.player(id)) {
                let r = self.index.range(id);
                regret_matching_into(&self.regrets[r.clone()], TIE_TOLERANCE * self.scale[id], &mut self.current[r]);
            }
        }
        if self.options.averaging == Averaging::ReachWeighted {
            self.own_reach();
        }
        for id in 0..self.index.len() {
            if !self.updates(self.index.player(id)) {
                continue;
            }
            let w = match self.options.averaging {
                Averaging::ReachWeighted => self.reach[id],
                Averaging::Uniform => 1.0,
            };
            self.normalizer[id] += w;
            for j in self.index.range(id) {
                self.average[j] += w * self.current[j];
            }
        }
        self.iteration += 1;
    }

    fn policy_from(&self, values: impl Fn(usize, Range<usize>) -> Vec<f64>) -> Policy {
        let mut p = Policy::new();
        for id in 0..self.index.len() {
            p.insert(self.index.key(id).to_string(), self.index.actions(id).to_vec(), values(id, self.index.range(id)));
        }
        p
    }

    pub fn current_policy(&self) -> Policy {
        self.policy_from(|_, r| self.current[r].to_vec())
    }

    /// Normalized average; infostates never reached default to uniform.
    pub fn average_policy(&self) -> Policy {
        self.policy_from(|id, r| {
            let z = self.normalizer[id];
            if z > 0.0 {
                self.average[r].iter().map(|w| w / z).collect()
            } else {
                vec![1.0 / r.len() as f64; r.len()]
            }
        })
    }

    pub fn regret_table(&self) -> RegretTable {
        (0..self.index.len())
            .map(|id| (self.index.key(id).to_string(), self.regrets[self.index.range(id)].to_vec()))
            .collect()
    }

    /// Scalars held across iterations: regrets, strategy, average, normalizer
    /// and regret scale.
    pub fn entries(&self) -> usize {
        3 * self.index.total_actions() + 2 * self.index.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> Tables {
        let mut idx = InfostateIndex::default();
        let a = idx.insert("1:|x".into(), 0, vec!["l".into(), "r".into()]);
        idx.insert("1:l|x/l".into(), 0, vec!["u".into(), "d".into(), "m".into()]);
        assert_eq!(idx.insert("1:|x".into(), 0, vec![]), a);
        Tables::new(idx, vec![None, Some((a, 0))], 1, CfrOptions::default())
    }

    #[test]
    fn starts_uniform_with_product_reach() {
        let mut t = two_level();
        assert_eq!(t.current, vec![0.5, 0.5, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(t.own_reach(), &[1.0, 0.5]);
    }

    #[test]
    fn single_iterate_average_is_that_iterate() {
        let mut t = two_level();
        t.regrets = vec![1.0, 3.0, 0.0, 2.0, -1.0];
        t.advance();
        let avg = t.average_policy();
        assert_eq!(avg.get("1:|x").unwrap(), &[0.25, 0.75]);
        assert_eq!(avg.get("1:l|x/l").unwrap(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn repeated_iterate_is_a_fixed_point() {
        let mut t = two_level();
        t.regrets = vec![1.0, 3.0, 0.0, 2.0, -1.0];
        t.advance();
        t.advance();
        assert_eq!(t.average_policy(), t.current_policy());
    }

    #[test]
    fn unreached_infostates_average_to_uniform() {
        let mut t = two_level();
        t.regrets = vec![0.0, 1.0, 5.0, 0.0, 0.0];
        t.advance();
        assert_eq!(t.average_policy().get("1:l|x/l").unwrap(), &[1.0 / 3.0; 3]);
    }
}
