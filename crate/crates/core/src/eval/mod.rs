//! Exact evaluation of strategy profiles: expected values, best responses,
//! exploitability, and the per-iteration run log.

mod record;
mod tree;

pub use record::{exploitability_cadence, record_run, record_solver, RunRecord, RunRow, CSV_HEADER};
pub use tree::HistoryTree;

use crate::cfr::Policy;
use crate::error::{Error, Result};
use crate::fosg::{Game, Player};

/// A best response of `player` against the rest of a profile.
#[derive(Clone, Debug)]
pub struct BrResult {
    pub player: Player,
    pub value: f64,
    /// Pure strategy over all of the player's decision infostates.
    pub policy: Policy,
}

/// Evaluates many profiles against one materialized game tree.
#[derive(Clone, Debug)]
pub struct Evaluator {
    tree: HistoryTree,
}

impl Evaluator {
    pub fn new<G: Game>(game: &G) -> Result<Evaluator> {
        Ok(Evaluator { tree: HistoryTree::build(game)? })
    }

    pub fn tree(&self) -> &HistoryTree {
        &self.tree
    }

    pub fn uniform_policy(&self) -> Policy {
        self.tree.uniform_policy()
    }

    /// Each player's expected utility when everyone follows `profile`.
    pub fn expected_values(&self, profile: &Policy) -> Result<Vec<f64>> {
        let t = &self.tree;
        let strategy = t.strategy(profile)?;
        let n = t.num_players;
        let mut values = vec![0.0; t.nodes.len() * n];
        for id in (0..t.nodes.len()).rev() {
            let node = &t.nodes[id];
            if let Some(u) = &node.utility {
                values[id * n..(id + 1) * n].copy_from_slice(u);
                continue;
            }
            for edge in &node.edges {
                let w = t.edge_weight(node, edge, &strategy, None);
                for i in 0..n {
                    values[id * n + i] += w * values[edge.child * n + i];
                }
            }
        }
        Ok(values[..n].to_vec())
    }

    /// Exact best response of `player` to the other players' part of
    /// `profile`, by backward induction over the player's infostates from
    /// the deepest decisions up.
    pub fn best_response(&self, profile: &Policy, player: Player) -> Result<BrResult> {
        let t = &self.tree;
        if t.num_players != 2 {
            return Err(Error::Unsupported("best responses are computed for two-player games".into()));
        }
        let strategy = t.strategy(profile)?;

        // Opponent-and-chance reach and own decision depth, top down.
        let mut reach = vec![0.0; t.nodes.len()];
        let mut depth = vec![0usize; t.nodes.len()];
        reach[0] = 1.0;
        for (id, node) in t.nodes.iter().enumerate() {
            let own = node.active.iter().any(|&(p, _)| p == player) as usize;
            for edge in &node.edges {
                reach[edge.child] = reach[id] * t.edge_weight(node, edge, &strategy, Some(player));
                depth[edge.child] = depth[id] + own;
            }
        }

        let mine: Vec<usize> = (0..t.infostates.len()).filter(|&s| t.infostates[s].player == player).collect();
        let mut order = mine.clone();
        order.sort_by_key(|&s| std::cmp::Reverse(depth[t.infostates[s].nodes[0]]));

        let mut choice: Vec<Option<usize>> = vec![None; t.infostates.len()];
        let mut memo = vec![f64::NAN; t.nodes.len()];
        for &s in &order {
            let info = &t.infostates[s];
            let mut action_values = vec![0.0; info.actions.len()];
            for &h in &info.nodes {
                let node = &t.nodes[h];
                let slot = node.active.iter().position(|&(p, _)| p == player).expect("player acts here");
                for edge in &node.edges {
                    let w = t.edge_weight(node, edge, &strategy, Some(player));
                    let v = self.subtree_value(edge.child, player, &strategy, &choice, &mut memo);
                    action_values[edge.positions[slot] as usize] += reach[h] * w * v;
                }
            }
            let mut best = 0;
            for (a, v) in action_values.iter().enumerate() {
                if *v > action_values[best] {
                    best = a;
                }
            }
            choice[s] = Some(best);
        }
        let value = self.subtree_value(0, player, &strategy, &choice, &mut memo);

        let mut policy = Policy::new();
        for &s in &mine {
            let info = &t.infostates[s];
            let mut probs = vec![0.0; info.actions.len()];
            probs[choice[s].expect("every infostate decided")] = 1.0;
            policy.insert(info.key.clone(), info.actions.clone(), probs);
        }
        Ok(BrResult { player, value, policy })
    }

    /// Value for `player` below `id` when they follow `choice` and everyone
    /// else follows `strategy`. Memoized: once a node's value is computed,
    /// every choice it depends on is final.
    fn subtree_value(
        &self,
        id: usize,
        player: Player,
        strategy: &[Vec<f64>],
        choice: &[Option<usize>],
        memo: &mut [f64],
    ) -> f64 {
        if !memo[id].is_nan() {
            return memo[id];
        }
        let t = &self.tree;
        let node = &t.nodes[id];
        let v = if let Some(u) = &node.utility {
            u[player]
        } else {
            let mine = node.active.iter().position(|&(p, _)| p == player);
            let mut v = 0.0;
            for edge in &node.edges {
                if let Some(slot) = mine {
                    let s = node.active[slot].1;
                    let chosen = choice[s].expect("deeper infostates are decided first");
                    if edge.positions[slot] as usize != chosen {
                        continue;
                    }
                }
                let w = t.edge_weight(node, edge, strategy, Some(player));
                v += w * self.subtree_value(edge.child, player, strategy, choice, memo);
            }
            v
        };
        memo[id] = v;
        v
    }

    /// Mean of the players' best-response gains; zero exactly at equilibrium.
    pub fn exploitability(&self, profile: &Policy) -> Result<f64> {
        if !self.tree.is_zero_sum() {
            return Err(Error::Unsupported("exploitability is defined for zero-sum games".into()));
        }
        let b0 = self.best_response(profile, 0)?.value;
        let b1 = self.best_response(profile, 1)?.value;
        Ok((b0 + b1) / 2.0)
    }
}

pub fn expected_values<G: Game>(game: &G, profile: &Policy) -> Result<Vec<f64>> {
    Evaluator::new(game)?.expected_values(profile)
}

pub fn best_response_value<G: Game>(game: &G, profile: &Policy, player: Player) -> Result<BrResult> {
    Evaluator::new(game)?.best_response(profile, player)
}

pub fn exploitability<G: Game>(game: &G, profile: &Policy) -> Result<f64> {
    Evaluator::new(game)?.exploitability(profile)
}

/// Largest probability gap over all (infostate, action) pairs. An infostate
/// present in only one policy is compared against uniform play.
pub fn strategy_distance(a: &Policy, b: &Policy) -> f64 {
    let mut worst: f64 = 0.0;
    let gap = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    for (key, _, pa) in a.iter() {
        let pb = match b.get(key) {
            Some(pb) => pb.to_vec(),
            None => vec![1.0 / pa.len() as f64; pa.len()],
        };
        if pb.len() != pa.len() {
            return f64::INFINITY;
        }
        worst = worst.max(gap(pa, &pb));
    }
    for (key, _, pb) in b.iter() {
        if a.get(key).is_none() {
            worst = worst.max(gap(pb, &vec![1.0 / pb.len() as f64; pb.len()]));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_game, GameSpec};

    fn pure(ev: &Evaluator, choose: impl Fn(&str, &[String]) -> usize) -> Policy {
        let mut p = Policy::new();
        for (key, actions, _) in ev.uniform_policy().iter() {
            let mut probs = vec![0.0; actions.len()];
            probs[choose(key, actions)] = 1.0;
            p.insert(key.to_string(), actions.to_vec(), probs);
        }
        p
    }

    #[test]
    fn matching_pennies_values() {
        let g = make_game(&GameSpec::MpSeq).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        let uniform = ev.uniform_policy();
        assert_eq!(ev.expected_values(&uniform).unwrap(), vec![0.0, 0.0]);
        assert_eq!(ev.best_response(&uniform, 1).unwrap().value, 0.0);
        assert_eq!(ev.exploitability(&uniform).unwrap(), 0.0);

        let heads = pure(&ev, |_, _| 0);
        assert_eq!(ev.best_response(&heads, 0).unwrap().value, 1.0);
        assert_eq!(ev.best_response(&heads, 1).unwrap().value, 1.0);
        assert_eq!(ev.exploitability(&heads).unwrap(), 1.0);
    }

    #[test]
    fn rock_against_uniform_is_neutral() {
        let g = make_game(&GameSpec::RpsNfg).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        let mut p = ev.uniform_policy();
        let key = "1:|start";
        p.insert(key.into(), p.actions(key).unwrap().to_vec(), vec![1.0, 0.0, 0.0]);
        assert_eq!(ev.expected_values(&p).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn distance_conventions() {
        let mut a = Policy::new();
        a.insert("1:|x".into(), vec!["l".into(), "r".into()], vec![1.0, 0.0]);
        assert_eq!(strategy_distance(&a, &a), 0.0);
        assert_eq!(strategy_distance(&a, &Policy::new()), 0.5);
        let mut b = Policy::new();
        b.insert("1:|x".into(), vec!["l".into(), "r".into()], vec![0.5, 0.5]);
        assert_eq!(strategy_distance(&a, &b), 0.5);
    }
}
