use std::collections::HashMap;

use crate::cfr::Policy;
use crate::error::{contract, Result};
use crate::fosg::{push_token, successors, Game, History, Player};

#[derive(Clone, Debug)]
pub(crate) struct Edge {
    /// Action position of each active player, in `Node::active` order.
    pub positions: Vec<u16>,
    pub probability: f64,
    pub child: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    /// `(player, infostate)` for each active player.
    pub active: Vec<(Player, usize)>,
    pub edges: Vec<Edge>,
    /// Utility vector at terminals.
    pub utility: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub(crate) struct InfostateEntry {
    pub key: String,
    pub player: Player,
    pub actions: Vec<String>,
    pub nodes: Vec<usize>,
}

/// The full history tree held in memory, nodes in depth-first pre-order.
#[derive(Clone, Debug)]
pub struct HistoryTree {
    pub(crate) num_players: usize,
    pub(crate) nodes: Vec<Node>,
    pub(crate) infostates: Vec<InfostateEntry>,
    pub(crate) zero_sum: bool,
}

struct Builder<'g, G: Game> {
    game: &'g G,
    nodes: Vec<Node>,
    infostates: Vec<InfostateEntry>,
    lookup: HashMap<String, usize>,
    zero_sum: bool,
}

impl<G: Game> Builder<'_, G> {
    fn visit(&mut self, h: &History<G::World>, private: &[String], public: &str) -> Result<usize> {
        let id = self.nodes.len();
        self.nodes.push(Node { active: Vec::new(), edges: Vec::new(), utility: None });
        if h.is_terminal() {
            let u = h.utility().to_vec();
            if u.iter().sum::<f64>().abs() > 1e-12 {
                self.zero_sum = false;
            }
            self.nodes[id].utility = Some(u);
            return Ok(id);
        }
        let world = h.world();
        let mut active = Vec::new();
        let mut legal = Vec::new();
        for p in self.game.active_players(world) {
            let actions = self.game.player_actions(world, p);
            let tokens: Vec<String> = actions.iter().map(|&a| self.game.token(p, a)).collect();
            let key = format!("{}:{}|{public}", p + 1, private[p]);
            let s = match self.lookup.get(&key) {
                Some(&s) => {
                    if self.infostates[s].actions != tokens {
                        return contract(format!("legal actions differ within infostate {key}"));
                    }
                    s
                }
                None => {
                    let s = self.infostates.len();
                    self.lookup.insert(key.clone(), s);
                    self.infostates.push(InfostateEntry { key, player: p, actions: tokens, nodes: Vec::new() });
                    s
                }
            };
            self.infostates[s].nodes.push(id);
            active.push((p, s));
            legal.push(actions);
        }
        let mut edges = Vec::new();
        for succ in successors(self.game, h)? {
            let obs = succ.history.observations().last().expect("successor took a step");
            let positions = active
                .iter()
                .zip(&legal)
                .map(|(&(p, _), actions)| {
                    actions.iter().position(|a| *a == succ.joint_action[p]).expect("legal action") as u16
                })
                .collect();
            let mut child_private = private.to_vec();
            for (p, slot) in child_private.iter_mut().enumerate() {
                let a = succ.joint_action[p];
                if !a.is_noop() {
                    push_token(slot, &self.game.action_token(p, a));
                }
                push_token(slot, &obs.private[p]);
            }
            let mut child_public = public.to_string();
            push_token(&mut child_public, &obs.public);
            let child = self.visit(&succ.history, &child_private, &child_public)?;
            edges.push(Edge { positions, probability: succ.probability, child });
        }
        self.nodes[id].active = active;
        self.nodes[id].edges = edges;
        Ok(id)
    }
}

impl HistoryTree {
    pub fn build<G: Game>(game: &G) -> Result<HistoryTree> {
        let n = game.num_players();
        let mut b = Builder { game, nodes: Vec::new(), infostates: Vec::new(), lookup: HashMap::new(), zero_sum: true };
        b.visit(&History::initial(game), &vec![String::new(); n], "")?;
        Ok(HistoryTree { num_players: n, nodes: b.nodes, infostates: b.infostates, zero_sum: b.zero_sum })
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Uniform strategy at every decision infostate.
    pub fn uniform_policy(&self) -> Policy {
        let mut p = Policy::new();
        for s in &self.infostates {
            let k = s.actions.len();
            p.insert(s.key.clone(), s.actions.clone(), vec![1.0 / k as f64; k]);
        }
        p
    }

    /// Probability vectors per tree infostate; missing keys are uniform.
    pub(crate) fn strategy(&self, policy: &Policy) -> Result<Vec<Vec<f64>>> {
        self.infostates
            .iter()
            .map(|s| match policy.get(&s.key) {
                Some(p) if p.len() == s.actions.len() => Ok(p.to_vec()),
                Some(p) => contract(format!(
                    "policy gives {} probabilities for {} which has {} actions",
                    p.len(),
                    s.key,
                    s.actions.len()
                )),
                None => Ok(vec![1.0 / s.actions.len() as f64; s.actions.len()]),
            })
            .collect()
    }

    /// Probability that the active players other than `skip` take `edge`.
    pub(crate) fn edge_weight(&self, node: &Node, edge: &Edge, strategy: &[Vec<f64>], skip: Option<Player>) -> f64 {
        let mut w = edge.probability;
        for (&(p, s), &pos) in node.active.iter().zip(&edge.positions) {
            if Some(p) != skip {
                w *= strategy[s][pos as usize];
            }
        }
        w
    }
}
