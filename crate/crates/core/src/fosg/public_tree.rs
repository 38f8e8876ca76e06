//! The public tree: histories grouped by their public observation sequence.
//!
//! Each public state lists, per player, the private infostates compatible
//! with it, their legal actions and the private infostate (plus action) they
//! were reached from. Terminal public states additionally carry the
//! chance-weighted utility matrices, and for rank-ordered games the data
//! needed by the linear-time terminal evaluation.

use std::collections::HashMap;

use super::{push_token, successors, Action, Game, History, Settlement};
use crate::cfr::InfostateIndex;
use crate::error::{contract, Error, Result};

/// Private infostates of one player at one public state.
#[derive(Clone, Debug, Default)]
pub struct PrivateSet {
    /// Private part of each infostate key.
    pub keys: Vec<String>,
    /// Legal actions; the no-op singleton where the player is inactive.
    pub actions: Vec<Vec<Action>>,
    /// Global decision-infostate id where the player is active.
    pub infostate: Vec<Option<usize>>,
    /// Parent private infostate and the position of the action taken in the
    /// parent's action list. `None` at the root.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl PrivateSet {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn position(&self, key: &str) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }
}

/// Chance-weighted utilities of a two-player terminal public state.
///
/// Cell `(r, c)` pairs player 1's private infostate `r` with player 2's
/// private infostate `c` and holds `sum P_c(z) u_i(z)` for both players over
/// the terminal histories with that private profile. Profiles no history
/// produces are stored as zero and flagged invalid.
#[derive(Clone, Debug, PartialEq)]
pub struct Chwu {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<[f64; 2]>,
    pub valid: Vec<bool>,
}

impl Chwu {
    fn zeros(rows: usize, cols: usize) -> Self {
        Chwu { rows, cols, cells: vec![[0.0; 2]; rows * cols], valid: vec![false; rows * cols] }
    }

    fn add(&mut self, r: usize, c: usize, values: [f64; 2]) {
        let cell = &mut self.cells[r * self.cols + c];
        cell[0] += values[0];
        cell[1] += values[1];
        self.valid[r * self.cols + c] = true;
    }

    /// `ChWU_i(s'_i, s'_-i)` with the player's own private infostate first.
    pub fn get(&self, player: usize, own: usize, opponent: usize) -> f64 {
        match player {
            0 => self.cells[own * self.cols + opponent][0],
            _ => self.cells[opponent * self.cols + own][1],
        }
    }

    /// Dense matrix of player `i`, rows indexed by `S'_i`.
    pub fn matrix(&self, player: usize) -> Vec<Vec<f64>> {
        let (own, opp) = if player == 0 { (self.rows, self.cols) } else { (self.cols, self.rows) };
        (0..own).map(|r| (0..opp).map(|c| self.get(player, r, c)).collect()).collect()
    }

    pub fn num_valid(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

/// Rank and card data for the linear-time evaluation of a poker terminal.
#[derive(Clone, Debug)]
pub struct LinearTerminal {
    pub settlement: Settlement,
    pub stake: f64,
    /// Chance reach shared by every terminal history of the public state.
    pub chance: f64,
    pub hands: [Vec<u64>; 2],
    pub ranks: [Vec<u32>; 2],
    /// Private indices sorted by ascending rank.
    pub order: [Vec<usize>; 2],
    /// Index of the identical hand among the other player's privates.
    pub twin: [Vec<Option<usize>>; 2],
    /// Cards of each hand renumbered densely over the cards in play; a
    /// one-card hand repeats `NO_CARD` in the second place.
    pub cards: [Vec<[u8; 2]>; 2],
    pub num_cards: usize,
    /// Every hand of both players is a single card.
    pub single_card: bool,
    /// `ranks` permuted by `order`.
    pub sorted_ranks: [Vec<u32>; 2],
}

pub const NO_CARD: u8 = u8::MAX;

#[derive(Clone, Debug)]
pub struct PublicState {
    pub key: String,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub terminal: bool,
    pub num_histories: usize,
    pub privates: Vec<PrivateSet>,
    pub chwu: Option<Chwu>,
    pub linear: Option<LinearTerminal>,
}

/// Arena of public states; node 0 is the root, parents precede children.
#[derive(Clone, Debug)]
pub struct PublicTree {
    pub nodes: Vec<PublicState>,
    pub infostates: InfostateIndex,
    pub num_players: usize,
}

impl PublicTree {
    pub fn root(&self) -> &PublicState {
        &self.nodes[0]
    }

    pub fn terminals(&self) -> impl Iterator<Item = &PublicState> {
        self.nodes.iter().filter(|n| n.terminal)
    }

    pub fn node_by_key(&self, key: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.key == key)
    }

    /// `sum_z |S'_1(z)| * |S'_2(z)|` over terminal public states.
    pub fn terminal_profile_cells(&self) -> usize {
        self.terminals().map(|n| n.privates.iter().map(PrivateSet::len).product::<usize>()).sum()
    }

    /// `sum_z (|S'_1(z)| + |S'_2(z)|)` over terminal public states.
    pub fn terminal_private_sum(&self) -> usize {
        self.terminals().map(|n| n.privates.iter().map(PrivateSet::len).sum::<usize>()).sum()
    }

    /// Whether every terminal carries rank data for the linear evaluation.
    pub fn supports_linear_terminals(&self) -> bool {
        self.terminals().all(|n| n.linear.is_some())
    }

    /// Number of stored scalars: private sets, action lists and ChWU cells.
    pub fn table_entries(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| {
                let privates: usize =
                    n.privates.iter().map(|s| s.len() + s.actions.iter().map(Vec::len).sum::<usize>()).sum();
                let chwu = n.chwu.as_ref().map_or(0, |c| 2 * c.cells.len());
                let linear = n.linear.as_ref().map_or(0, |l| 3 * (l.hands[0].len() + l.hands[1].len()));
                privates + chwu + linear
            })
            .sum()
    }
}

struct LinearAccum {
    settlement: Settlement,
    stake: f64,
    chance: f64,
    hands: [Vec<Option<(u64, u32)>>; 2],
    histories: usize,
    consistent: bool,
}

struct Builder<'g, G: Game> {
    game: &'g G,
    n: usize,
    nodes: Vec<PublicState>,
    by_key: HashMap<String, usize>,
    private_index: Vec<Vec<HashMap<String, usize>>>,
    infostates: InfostateIndex,
    chwu: Vec<HashMap<(usize, usize), [f64; 2]>>,
    linear: Vec<Option<LinearAccum>>,
}

struct Frame {
    node: usize,
    private_idx: Vec<usize>,
}

impl<'g, G: Game> Builder<'g, G> {
    fn node_for(&mut self, key: &str, parent: Option<usize>, terminal: bool) -> Result<usize> {
        if let Some(&id) = self.by_key.get(key) {
            if self.nodes[id].terminal != terminal {
                return contract(format!("public state {key} mixes terminal and non-terminal histories"));
            }
            return Ok(id);
        }
        let id = self.nodes.len();
        self.nodes.push(PublicState {
            key: key.to_string(),
            parent,
            children: Vec::new(),
            terminal,
            num_histories: 0,
            privates: vec![PrivateSet::default(); self.n],
            chwu: None,
            linear: None,
        });
        self.by_key.insert(key.to_string(), id);
        self.private_index.push(vec![HashMap::new(); self.n]);
        self.chwu.push(HashMap::new());
        self.linear.push(None);
        match parent {
            Some(p) => self.nodes[p].children.push(id),
            None if id != 0 => {
                return contract("initial transition must emit a single public observation");
            }
            None => {}
        }
        Ok(id)
    }

    fn visit(
        &mut self,
        h: &History<G::World>,
        parent: Option<(&Frame, &[Action])>,
        private: &[String],
        public: &str,
    ) -> Result<()> {
        let terminal = h.is_terminal();
        let node = self.node_for(public, parent.map(|(f, _)| f.node), terminal)?;
        self.nodes[node].num_histories += 1;
        let world = h.world();
        let mut private_idx = Vec::with_capacity(self.n);
        for p in 0..self.n {
            let link = match parent {
                Some((frame, joint)) => {
                    let parent_private = frame.private_idx[p];
                    let parent_actions = &self.nodes[frame.node].privates[p].actions[parent_private];
                    let pos = parent_actions.iter().position(|a| *a == joint[p]).ok_or_else(|| {
                        Error::Contract("action missing from parent's legal actions".into())
                    })?;
                    Some((parent_private, pos))
                }
                None => None,
            };
            let actions = self.game.legal_actions(world, p);
            let idx = match self.private_index[node][p].get(&private[p]) {
                Some(&idx) => {
                    let set = &self.nodes[node].privates[p];
                    if set.actions[idx] != actions {
                        return contract(format!(
                            "legal actions differ within infostate {}:{}|{public}",
                            p + 1,
                            private[p]
                        ));
                    }
                    if set.parent[idx] != link {
                        return contract("infostate reached from two different parents (imperfect recall)");
                    }
                    idx
                }
                None => {
                    let active = !(actions.len() == 1 && actions[0].is_noop());
                    let global = if active {
                        let key = format!("{}:{}|{public}", p + 1, private[p]);
                        let tokens = actions.iter().map(|&a| self.game.token(p, a)).collect();
                        Some(self.infostates.insert(key, p, tokens))
                    } else {
                        None
                    };
                    let set = &mut self.nodes[node].privates[p];
                    let idx = set.keys.len();
                    set.keys.push(private[p].clone());
                    set.actions.push(actions);
                    set.infostate.push(global);
                    set.parent.push(link);
                    self.private_index[node][p].insert(private[p].clone(), idx);
                    idx
                }
            };
            private_idx.push(idx);
        }

        if terminal {
            self.record_terminal(node, h, &private_idx);
            return Ok(());
        }

        let frame = Frame { node, private_idx };
        for s in successors(self.game, h)? {
            let obs = s.history.observations().last().expect("successor took a step");
            let mut child_private = private.to_vec();
            for (p, child) in child_private.iter_mut().enumerate() {
                let own = s.joint_action[p];
                if !own.is_noop() {
                    push_token(child, &self.game.action_token(p, own));
                }
                push_token(child, &obs.private[p]);
            }
            let mut child_public = public.to_string();
            push_token(&mut child_public, &obs.public);
            self.visit(&s.history, Some((&frame, &s.joint_action)), &child_private, &child_public)?;
        }
        Ok(())
    }

    fn record_terminal(&mut self, node: usize, h: &History<G::World>, private_idx: &[usize]) {
        if self.n != 2 {
            return;
        }
        let pc = h.chance_reach();
        let u = h.utility();
        let cell = self.chwu[node].entry((private_idx[0], private_idx[1])).or_insert([0.0; 2]);
        cell[0] += pc * u[0];
        cell[1] += pc * u[1];

        let ranked = self.game.ranked_outcome(h.world());
        let slot = &mut self.linear[node];
        match (ranked, slot.as_mut()) {
            (None, _) => {
                if let Some(acc) = slot.as_mut() {
                    acc.consistent = false;
                } else {
                    *slot = Some(LinearAccum {
                        settlement: Settlement::Showdown,
                        stake: 0.0,
                        chance: pc,
                        hands: [Vec::new(), Vec::new()],
                        histories: 0,
                        consistent: false,
                    });
                }
            }
            (Some(r), None) => {
                let mut acc = LinearAccum {
                    settlement: r.settlement,
                    stake: r.stake,
                    chance: pc,
                    hands: [Vec::new(), Vec::new()],
                    histories: 0,
                    consistent: true,
                };
                acc.note(private_idx, r.hands, r.ranks);
                *slot = Some(acc);
            }
            (Some(r), Some(acc)) => {
                if r.settlement != acc.settlement || r.stake != acc.stake || pc != acc.chance {
                    acc.consistent = false;
                }
                acc.note(private_idx, r.hands, r.ranks);
            }
        }
    }

    fn finish(mut self) -> PublicTree {
        for id in 0..self.nodes.len() {
            if !self.nodes[id].terminal || self.n != 2 {
                continue;
            }
            let rows = self.nodes[id].privates[0].len();
            let cols = self.nodes[id].privates[1].len();
            let mut m = Chwu::zeros(rows, cols);
            for (&(r, c), &v) in &self.chwu[id] {
                m.add(r, c, v);
            }
            self.nodes[id].chwu = Some(m);
            self.nodes[id].linear = self.linear[id].take().and_then(LinearAccum::finish);
        }
        PublicTree { nodes: self.nodes, infostates: self.infostates, num_players: self.n }
    }
}

impl LinearAccum {
    fn note(&mut self, private_idx: &[usize], hands: [u64; 2], ranks: [u32; 2]) {
        self.histories += 1;
        for p in 0..2 {
            let slots = &mut self.hands[p];
            if slots.len() <= private_idx[p] {
                slots.resize(private_idx[p] + 1, None);
            }
            match slots[private_idx[p]] {
                None => slots[private_idx[p]] = Some((hands[p], ranks[p])),
                Some(prev) if prev != (hands[p], ranks[p]) => self.consistent = false,
                Some(_) => {}
            }
        }
    }

    fn finish(self) -> Option<LinearTerminal> {
        if !self.consistent {
            return None;
        }
        let unpack = |v: &[Option<(u64, u32)>]| -> Option<(Vec<u64>, Vec<u32>)> {
            let mut hands = Vec::with_capacity(v.len());
            let mut ranks = Vec::with_capacity(v.len());
            for slot in v {
                let (h, r) = (*slot)?;
                hands.push(h);
                ranks.push(r);
            }
            Some((hands, ranks))
        };
        let (h0, r0) = unpack(&self.hands[0])?;
        let (h1, r1) = unpack(&self.hands[1])?;
        // Every card-disjoint profile must be dealt exactly once.
        let disjoint = h0.iter().map(|a| h1.iter().filter(|b| *a & **b == 0).count()).sum::<usize>();
        if disjoint != self.histories {
            return None;
        }
        let order = |r: &[u32]| {
            let mut idx: Vec<usize> = (0..r.len()).collect();
            idx.sort_by_key(|&i| (r[i], i));
            idx
        };
        let twin = |own: &[u64], other: &[u64]| -> Vec<Option<usize>> {
            let at: HashMap<u64, usize> = other.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            own.iter().map(|m| at.get(m).copied()).collect()
        };
        let in_play = h0.iter().chain(&h1).fold(0u64, |acc, m| acc | m);
        let dense = |card: u32| (in_play & ((1u64 << card) - 1)).count_ones() as u8;
        let cards = |hands: &[u64]| -> Option<Vec<[u8; 2]>> {
            hands
                .iter()
                .map(|&m| match m.count_ones() {
                    1 => Some([dense(m.trailing_zeros()), NO_CARD]),
                    2 => Some([dense(m.trailing_zeros()), dense(63 - m.leading_zeros())]),
                    _ => None,
                })
                .collect()
        };
        let (o0, o1) = (order(&r0), order(&r1));
        let sorted = |o: &[usize], r: &[u32]| o.iter().map(|&i| r[i]).collect::<Vec<u32>>();
        Some(LinearTerminal {
            twin: [twin(&h0, &h1), twin(&h1, &h0)],
            cards: [cards(&h0)?, cards(&h1)?],
            num_cards: in_play.count_ones() as usize,
            single_card: h0.iter().chain(&h1).all(|m| m.count_ones() == 1),
            sorted_ranks: [sorted(&o0, &r0), sorted(&o1, &r1)],
            settlement: self.settlement,
            stake: self.stake,
            chance: self.chance,
            order: [o0, o1],
            hands: [h0, h1],
            ranks: [r0, r1],
        })
    }
}

/// Groups every history of `game` by public observation sequence.
///
/// Fails if an infostate's legal actions are not determined by the
/// infostate, if recall is imperfect, or if a public state mixes terminal
/// and non-terminal histories.
pub fn build_public_tree<G: Game>(game: &G) -> Result<PublicTree> {
    let n = game.num_players();
    let mut b = Builder {
        game,
        n,
        nodes: Vec::new(),
        by_key: HashMap::new(),
        private_index: Vec::new(),
        infostates: InfostateIndex::default(),
        chwu: Vec::new(),
        linear: Vec::new(),
    };
    let init = History::initial(game);
    if init.is_terminal() {
        return contract("game terminates before it starts");
    }
    for s in successors(game, &init)? {
        let obs = s.history.observations().last().expect("successor took a step");
        let private: Vec<String> = obs.private.clone();
        b.visit(&s.history, None, &private, &obs.public)?;
    }
    Ok(b.finish())
}

/// Builds the ChWU matrices of one terminal public state directly from the
/// game, independently of the pass in [`build_public_tree`].
pub fn build_chwu<G: Game>(game: &G, tree: &PublicTree, node: usize) -> Result<Chwu> {
    let z = &tree.nodes[node];
    if !z.terminal {
        return contract(format!("public state {} is not terminal", z.key));
    }
    if game.num_players() != 2 {
        return Err(Error::Unsupported("ChWU matrices are built for two-player games".into()));
    }
    let mut m = Chwu::zeros(z.privates[0].len(), z.privates[1].len());
    let mut missing = false;
    super::walk_histories(game, |h| {
        if !h.is_terminal() {
            return Ok(());
        }
        let s1 = super::infostate_of(game, h, 0);
        if s1.public_key() != z.key {
            return Ok(());
        }
        let s2 = super::infostate_of(game, h, 1);
        match (z.privates[0].position(&s1.private_key()), z.privates[1].position(&s2.private_key())) {
            (Some(r), Some(c)) => {
                let pc = h.chance_reach();
                m.add(r, c, [pc * h.utility()[0], pc * h.utility()[1]]);
            }
            _ => missing = true,
        }
        Ok(())
    })?;
    if missing {
        return contract("terminal history whose private infostate is not listed in the public tree");
    }
    Ok(m)
}
