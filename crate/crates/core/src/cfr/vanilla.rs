//! Regret updates by recursion over the history tree.
//!
//! Histories are regenerated from the game on every iteration. A per-player
//! trie keyed by (parent node, own action, private observation, public
//! observation) maps each history to its infostates without rebuilding key
//! strings on the hot path.

use std::collections::HashMap;
use std::time::Instant;

use super::{CfrOptions, Counters, Tables};
use crate::cfr::InfostateIndex;
use crate::error::{contract, Error, Result};
use crate::fosg::{joint_actions, push_token, successors, Action, Game, History, Player};

#[derive(Debug, Default)]
struct Trie {
    children: HashMap<(u32, u16, u32, u32), u32>,
    infostate: Vec<Option<u32>>,
}

impl Trie {
    fn child(&mut self, key: (u32, u16, u32, u32)) -> u32 {
        let next = self.infostate.len() as u32;
        let id = *self.children.entry(key).or_insert(next);
        if id == next {
            self.infostate.push(None);
        }
        id
    }
}

pub struct VanillaSolver<'g, G: Game> {
    game: &'g G,
    n: usize,
    pub(crate) tables: Tables,
    tries: Vec<Trie>,
    symbols: HashMap<String, u32>,
    pub(crate) counters: Counters,
    root_values: Vec<f64>,
}

struct Discovery<'a, G: Game> {
    game: &'a G,
    index: InfostateIndex,
    parents: Vec<Option<(usize, usize)>>,
    tries: Vec<Trie>,
    symbols: HashMap<String, u32>,
}

impl<'a, G: Game> Discovery<'a, G> {
    fn symbol(&mut self, s: &str) -> u32 {
        let next = self.symbols.len() as u32;
        *self.symbols.entry(s.to_string()).or_insert(next)
    }

    fn visit(
        &mut self,
        h: &History<G::World>,
        nodes: &[u32],
        private: &[String],
        public: &str,
        last: &[Option<(usize, usize)>],
    ) -> Result<()> {
        let n = nodes.len();
        let world = h.world();
        let mut here: Vec<Option<usize>> = vec![None; n];
        if !h.is_initial() {
            for p in self.game.active_players(world) {
                let actions: Vec<String> =
                    self.game.player_actions(world, p).into_iter().map(|a| self.game.token(p, a)).collect();
                let key = format!("{}:{}|{public}", p + 1, private[p]);
                let fresh = self.index.len();
                let id = self.index.insert(key, p, actions.clone());
                if id == fresh {
                    self.parents.push(last[p]);
                } else if self.index.actions(id) != actions.as_slice() {
                    return contract(format!("legal actions differ within infostate {}", self.index.key(id)));
                }
                self.tries[p].infostate[nodes[p] as usize] = Some(id as u32);
                here[p] = Some(id);
            }
        }
        if h.is_terminal() {
            return Ok(());
        }
        for s in successors(self.game, h)? {
            let obs = s.history.observations().last().expect("successor took a step").clone();
            let public_sym = self.symbol(&obs.public);
            let mut child_nodes = Vec::with_capacity(n);
            let mut child_private = private.to_vec();
            let mut child_last = last.to_vec();
            let mut child_public = public.to_string();
            push_token(&mut child_public, &obs.public);
            for p in 0..n {
                let a = s.joint_action[p];
                let private_sym = self.symbol(&obs.private[p]);
                child_nodes.push(self.tries[p].child((nodes[p], a.0, private_sym, public_sym)));
                if !a.is_noop() {
                    push_token(&mut child_private[p], &self.game.action_token(p, a));
                }
                push_token(&mut child_private[p], &obs.private[p]);
                if let Some(id) = here[p] {
                    let pos = self.game.player_actions(world, p).iter().position(|x| *x == a).expect("legal action");
                    child_last[p] = Some((id, pos));
                }
            }
            self.visit(&s.history, &child_nodes, &child_private, &child_public, &child_last)?;
        }
        Ok(())
    }
}

impl<'g, G: Game> VanillaSolver<'g, G> {
    pub fn new(game: &'g G, options: CfrOptions) -> Result<Self> {
        let n = game.num_players();
        let mut d = Discovery {
            game,
            index: InfostateIndex::default(),
            parents: Vec::new(),
            tries: (0..n).map(|_| Trie { children: HashMap::new(), infostate: vec![None] }).collect(),
            symbols: HashMap::new(),
        };
        d.visit(&History::initial(game), &vec![0; n], &vec![String::new(); n], "", &vec![None; n])?;
        Ok(VanillaSolver {
            game,
            n,
            tables: Tables::new(d.index, d.parents, n, options),
            tries: d.tries,
            symbols: d.symbols,
            counters: Counters::default(),
            root_values: vec![0.0; n],
        })
    }

    /// One regret update with the current strategy, then regret matching.
    pub fn iterate(&mut self) -> Result<()> {
        let start = Instant::now();
        let world = self.game.initial_world();
        let nodes = vec![0u32; self.n];
        let reach = vec![1.0; self.n];
        let acc = vec![0.0; self.n];
        let mut values = vec![0.0; self.n];
        self.traverse(&world, &nodes, &reach, 1.0, &acc, true, &mut values)?;
        self.root_values = values;
        self.tables.advance();
        self.counters.wall_nanoseconds += start.elapsed().as_nanos() as u64;
        Ok(())
    }

    /// Expected utilities of the strategy used in the last iteration.
    pub fn root_values(&self) -> &[f64] {
        &self.root_values
    }

    fn node_child(&self, p: Player, node: u32, a: Action, private: &str, public: &str) -> Result<u32> {
        let sym = |s: &str| self.symbols.get(s).copied();
        let found = match (sym(private), sym(public)) {
            (Some(ps), Some(us)) => self.tries[p].children.get(&(node, a.0, ps, us)).copied(),
            _ => None,
        };
        found.ok_or_else(|| Error::Contract("history left the tree discovered at setup".into()))
    }

    /// Writes the counterfactual value of the history ending in `world` for
    /// every player into `out`: chance and opponents' reach times utility,
    /// summed over the subtree.
    #[allow(clippy::too_many_arguments)]
    fn traverse(
        &mut self,
        world: &G::World,
        nodes: &[u32],
        reach: &[f64],
        chance: f64,
        acc: &[f64],
        root: bool,
        out: &mut [f64],
    ) -> Result<()> {
        let n = self.n;
        if !root {
            self.counters.histories_touched += 1;
            self.counters.infostate_value_updates += n as u64;
        }
        if self.game.is_terminal(world) {
            for i in 0..n {
                let others: f64 = (0..n).filter(|&j| j != i).map(|j| reach[j]).product();
                out[i] = chance * others * acc[i];
            }
            self.counters.terminal_eval_ops += 1;
            return Ok(());
        }

        // Per player: infostate id and legal actions (None when inactive).
        let mut info: Vec<Option<(usize, Vec<Action>)>> = vec![None; n];
        for p in self.game.active_players(world) {
            let id = self.tries[p].infostate[nodes[p] as usize]
                .ok_or_else(|| Error::Contract("active player without a discovered infostate".into()))?;
            let actions = self.game.player_actions(world, p);
            self.counters.infostate_action_updates += actions.len() as u64;
            info[p] = Some((id as usize, actions));
        }
        let mut q: Vec<Vec<f64>> = info.iter().map(|x| vec![0.0; x.as_ref().map_or(1, |(_, a)| a.len())]).collect();

        let mut child_nodes = vec![0u32; n];
        let mut child_reach = vec![0.0; n];
        let mut child_acc = vec![0.0; n];
        let mut child_out = vec![0.0; n];
        let mut pos = vec![0usize; n];
        for joint in joint_actions(self.game, world) {
            for p in 0..n {
                child_reach[p] = reach[p];
                pos[p] = 0;
                if let Some((id, actions)) = &info[p] {
                    pos[p] = actions.iter().position(|a| *a == joint[p]).expect("legal action");
                    child_reach[p] *= self.tables.current[self.tables.index.range(*id).start + pos[p]];
                }
            }
            for outcome in self.game.step(world, &joint) {
                for p in 0..n {
                    child_nodes[p] =
                        self.node_child(p, nodes[p], joint[p], &outcome.observation.private[p], &outcome.observation.public)?;
                    child_acc[p] = acc[p] + outcome.rewards[p];
                }
                self.traverse(
                    &outcome.next,
                    &child_nodes,
                    &child_reach,
                    chance * outcome.probability,
                    &child_acc,
                    false,
                    &mut child_out,
                )?;
                for p in 0..n {
                    q[p][pos[p]] += child_out[p];
                }
            }
        }

        for p in 0..n {
            match &info[p] {
                None => out[p] = q[p][0],
                Some((id, _)) => {
                    out[p] = self.tables.accumulate(*id, &q[p]);
                }
            }
        }
        Ok(())
    }
}
