//! Regret updates over the public tree.
//!
//! Every (public state, player, private infostate) triple owns one slot.
//! Slots are laid out node by node, so parents precede children: reaches
//! flow down in one forward pass and values flow up in one backward pass.
//! All chance probability lives in the terminal ChWU matrices.

use std::time::Instant;

use super::terminal::{linear_terminal, terminal_eval_generic_pair, terminal_eval_poker_linear};
use super::{CfrOptions, Counters, Tables};
use crate::error::{Error, Result};
use crate::fosg::{build_public_tree, Game, PublicTree};

#[derive(Clone, Copy, Debug)]
struct Slot {
    /// Parent slot and action position there; `usize::MAX` at the root.
    parent: usize,
    action: usize,
    /// Decision infostate id, `u32::MAX` where the player is inactive.
    infostate: u32,
    /// Offset of the slot's action values in the Q buffer.
    q: usize,
    actions: usize,
    /// Position in the flat strategy buffer of the action that leads here
    /// from the parent slot, `usize::MAX` when the parent is inactive.
    edge: usize,
}

const NONE: u32 = u32::MAX;

pub struct PublicStateSolver {
    pub tree: PublicTree,
    pub(crate) tables: Tables,
    linear: bool,
    slots: Vec<Slot>,
    /// First slot of each node and player: `node_slots[node][player]`.
    node_slots: Vec<[usize; 3]>,
    reach: Vec<f64>,
    value: Vec<f64>,
    q: Vec<f64>,
    pub(crate) counters: Counters,
    root_values: [f64; 2],
}

impl PublicStateSolver {
    /// Builds the public tree of `game`. With `linear` set, terminals are
    /// evaluated by the rank sweep, which every terminal must support.
    pub fn new<G: Game>(game: &G, linear: bool, options: CfrOptions) -> Result<Self> {
        if game.num_players() != 2 {
            return Err(Error::Unsupported(format!(
                "public-state CFR is implemented for two players, {} has {}",
                game.name(),
                game.num_players()
            )));
        }
        let tree = build_public_tree(game)?;
        if linear {
            for z in tree.terminals() {
                linear_terminal(z)?;
            }
        }
        let mut slots = Vec::new();
        let mut node_slots: Vec<[usize; 3]> = Vec::with_capacity(tree.nodes.len());
        let mut q_len = 0;
        for node in &tree.nodes {
            let mut starts = [0; 3];
            for p in 0..2 {
                starts[p] = slots.len();
                let set = &node.privates[p];
                for k in 0..set.len() {
                    let (parent, action) = match set.parent[k] {
                        Some((pk, a)) => {
                            let pnode = node.parent.expect("non-root node has a parent");
                            (node_slots[pnode][p] + pk, a)
                        }
                        None => (usize::MAX, 0),
                    };
                    let actions = if node.terminal { 0 } else { set.actions[k].len() };
                    slots.push(Slot {
                        parent,
                        action,
                        infostate: set.infostate[k].map_or(NONE, |id| id as u32),
                        q: q_len,
                        actions,
                        edge: usize::MAX,
                    });
                    q_len += actions;
                }
            }
            starts[2] = slots.len();
            node_slots.push(starts);
        }

        // Previous own decision of every infostate, for the average strategy.
        let mut last: Vec<Option<(usize, usize)>> = vec![None; slots.len()];
        let mut parents = vec![None; tree.infostates.len()];
        for g in 0..slots.len() {
            let s = slots[g];
            if s.parent != usize::MAX {
                let ps = slots[s.parent];
                last[g] = if ps.infostate != NONE { Some((ps.infostate as usize, s.action)) } else { last[s.parent] };
            }
            if s.infostate != NONE {
                parents[s.infostate as usize] = last[g];
            }
        }

        let tables = Tables::new(tree.infostates.clone(), parents, 2, options);
        for g in 0..slots.len() {
            let s = slots[g];
            if s.parent != usize::MAX && slots[s.parent].infostate != NONE {
                slots[g].edge = tables.index.range(slots[s.parent].infostate as usize).start + s.action;
            }
        }
        let n = slots.len();
        Ok(PublicStateSolver {
            tables,
            tree,
            linear,
            slots,
            node_slots,
            reach: vec![0.0; n],
            value: vec![0.0; n],
            q: vec![0.0; q_len],
            counters: Counters::default(),
            root_values: [0.0; 2],
        })
    }

    pub fn iterate(&mut self) -> Result<()> {
        let start = Instant::now();
        self.regret_update()?;
        self.tables.advance();
        self.counters.wall_nanoseconds += start.elapsed().as_nanos() as u64;
        Ok(())
    }

    pub fn root_values(&self) -> [f64; 2] {
        self.root_values
    }

    /// Reaches down, terminal values, then values and regrets up.
    fn regret_update(&mut self) -> Result<()> {
        for (g, s) in self.slots.iter().enumerate() {
            self.reach[g] = match (s.parent, s.edge) {
                (usize::MAX, _) => 1.0,
                (p, usize::MAX) => self.reach[p],
                (p, e) => self.reach[p] * self.tables.current[e],
            };
        }

        for (id, node) in self.tree.nodes.iter().enumerate() {
            if !node.terminal {
                continue;
            }
            let [a, b, c] = self.node_slots[id];
            let (r1, r2) = (&self.reach[a..b], &self.reach[b..c]);
            let (v1, v2) = self.value[a..c].split_at_mut(b - a);
            if self.linear {
                let lt = linear_terminal(node)?;
                terminal_eval_poker_linear(lt, 0, r2, v1, &mut self.counters)?;
                terminal_eval_poker_linear(lt, 1, r1, v2, &mut self.counters)?;
            } else {
                let chwu = node.chwu.as_ref().expect("two-player terminals carry ChWU");
                terminal_eval_generic_pair(chwu, [r1, r2], v1, v2, &mut self.counters);
            }
            self.counters.infostate_value_updates += (c - a) as u64;
        }

        self.q.fill(0.0);
        for g in (0..self.slots.len()).rev() {
            let s = self.slots[g];
            if s.actions > 0 {
                let q = &self.q[s.q..s.q + s.actions];
                self.counters.infostate_value_updates += 1;
                if s.infostate == NONE {
                    self.value[g] = q[0];
                } else {
                    self.counters.infostate_action_updates += s.actions as u64;
                    self.value[g] = self.tables.accumulate(s.infostate as usize, q);
                }
            }
            if s.parent != usize::MAX {
                let ps = self.slots[s.parent];
                self.q[ps.q + s.action] += self.value[g];
            }
        }

        let [a, b, c] = self.node_slots[0];
        self.root_values = [self.value[a..b].iter().sum(), self.value[b..c].iter().sum()];
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfr::VanillaSolver;
    use crate::zoo::{make_game, GameSpec};

    fn parent_keys(t: &Tables) -> Vec<(String, Option<(String, usize)>)> {
        let mut v: Vec<_> = (0..t.index.len())
            .map(|id| (t.index.key(id).to_string(), t.parents[id].map(|(p, a)| (t.index.key(p).to_string(), a))))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn parent_chains_match_history_discovery() {
        for spec in GameSpec::zoo() {
            let g = make_game(&spec).unwrap();
            let ps = PublicStateSolver::new(&g, false, CfrOptions::default()).unwrap();
            let vanilla = VanillaSolver::new(&g, CfrOptions::default()).unwrap();
            let (a, b) = (parent_keys(&ps.tables), parent_keys(&vanilla.tables));
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x, y, "{spec}");
            }
        }
    }
}
