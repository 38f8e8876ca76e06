//! Two-player liar's dice. Each player rolls `dice` dice with `faces` faces
//! in secret, then players alternate raising a bid "at least q dice show
//! face f" or calling the previous bid a lie. No wild faces. The loser of the
//! challenge pays 1.

use crate::fosg::{Action, Game, Observation, Player, START_TOKEN};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiceWorld {
    /// Each player's roll; empty before the roll.
    pub rolls: Vec<Vec<u8>>,
    /// Bid indices made so far.
    pub bids: Vec<u16>,
    pub called: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiarsDice {
    pub dice: u32,
    pub faces: u32,
}

impl LiarsDice {
    pub fn new(dice: u32, faces: u32) -> Self {
        LiarsDice { dice, faces }
    }

    fn num_bids(&self) -> u16 {
        (2 * self.dice * self.faces) as u16
    }

    fn liar(&self) -> Action {
        Action(self.num_bids())
    }

    /// `(quantity, face)` of a bid index; faces count from 1.
    fn bid(&self, index: u16) -> (u32, u8) {
        let f = self.faces as u16;
        ((index / f) as u32 + 1, (index % f) as u8 + 1)
    }

    fn rolls(&self) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.dice {
            out = out
                .into_iter()
                .flat_map(|r| (1..=self.faces as u8).map(move |f| [r.clone(), vec![f]].concat()))
                .collect();
        }
        out
    }

    /// Player 1's utility once the last bid is challenged.
    fn payoff(&self, w: &DiceWorld) -> f64 {
        let last = *w.bids.last().expect("a bid precedes the challenge");
        let (quantity, face) = self.bid(last);
        let count = w.rolls.iter().flatten().filter(|&&d| d == face).count() as u32;
        let bidder = (w.bids.len() - 1) % 2;
        let bidder_wins = count >= quantity;
        let p1_wins = bidder_wins == (bidder == 0);
        if p1_wins {
            1.0
        } else {
            -1.0
        }
    }
}

impl Game for LiarsDice {
    type World = DiceWorld;

    fn name(&self) -> String {
        format!("liars_dice:d={},f={}", self.dice, self.faces)
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_world(&self) -> DiceWorld {
        DiceWorld { rolls: Vec::new(), bids: Vec::new(), called: false }
    }

    fn active_players(&self, w: &DiceWorld) -> Vec<Player> {
        if w.rolls.is_empty() || self.is_terminal(w) {
            Vec::new()
        } else {
            vec![w.bids.len() % 2]
        }
    }

    fn player_actions(&self, w: &DiceWorld, _player: Player) -> Vec<Action> {
        let first = w.bids.last().map_or(0, |&b| b + 1);
        let mut actions: Vec<Action> = (first..self.num_bids()).map(Action).collect();
        if !w.bids.is_empty() {
            actions.push(self.liar());
        }
        actions
    }

    fn is_terminal(&self, w: &DiceWorld) -> bool {
        w.called
    }

    fn transition(&self, w: &DiceWorld, joint: &[Action]) -> Vec<(DiceWorld, f64)> {
        if self.is_terminal(w) {
            return Vec::new();
        }
        if w.rolls.is_empty() {
            let rolls = self.rolls();
            let p = 1.0 / (rolls.len() * rolls.len()) as f64;
            let mut out = Vec::with_capacity(rolls.len() * rolls.len());
            for a in &rolls {
                for b in &rolls {
                    out.push((DiceWorld { rolls: vec![a.clone(), b.clone()], ..w.clone() }, p));
                }
            }
            return out;
        }
        let action = joint[w.bids.len() % 2];
        let mut next = w.clone();
        if action == self.liar() {
            next.called = true;
        } else {
            next.bids.push(action.0);
        }
        vec![(next, 1.0)]
    }

    fn reward(&self, _w: &DiceWorld, _joint: &[Action], next: &DiceWorld) -> Vec<f64> {
        if next.called {
            let u = self.payoff(next);
            vec![u, -u]
        } else {
            vec![0.0, 0.0]
        }
    }

    fn observe(&self, w: &DiceWorld, joint: &[Action], next: &DiceWorld) -> Observation {
        if w.rolls.is_empty() {
            let show = |r: &[u8]| {
                let mut r = r.to_vec();
                r.sort_unstable();
                r.iter().map(u8::to_string).collect::<String>()
            };
            return Observation {
                private: next.rolls.iter().map(|r| show(r)).collect(),
                public: START_TOKEN.into(),
            };
        }
        let me = w.bids.len() % 2;
        Observation::public(2, self.action_token(me, joint[me]))
    }

    fn action_token(&self, _player: Player, action: Action) -> String {
        if action == self.liar() {
            "L".into()
        } else {
            let (q, f) = self.bid(action.0);
            format!("{q}x{f}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosg::{check_sbg, enumerate_counts, walk_histories};

    #[test]
    fn bids_are_ordered_by_quantity_then_face() {
        let g = LiarsDice::new(1, 4);
        let tokens: Vec<String> = (0..g.num_bids()).map(|b| g.action_token(0, Action(b))).collect();
        assert_eq!(tokens[..5], ["1x1", "1x2", "1x3", "1x4", "2x1"]);
        assert_eq!(tokens.last().unwrap(), "2x4");
    }

    #[test]
    fn counts_match_closed_form() {
        // With B bids, every nonempty increasing bid sequence either ends in a
        // challenge (terminal) or not: 2^B - 1 sequences, each possibly
        // followed by "L". Per roll pair: the post-roll root, 2^B - 1 bid
        // sequences and 2^B - 1 challenged ones.
        let g = LiarsDice::new(1, 4);
        let c = enumerate_counts(&g).unwrap();
        let b = g.num_bids() as u32;
        let per_roll = 1 + 2 * ((1usize << b) - 1);
        assert_eq!(c.num_histories, 16 * per_roll);
        assert_eq!(c.num_terminals, 16 * ((1usize << b) - 1));
    }

    #[test]
    fn challenge_settles_by_count() {
        let g = LiarsDice::new(1, 4);
        walk_histories(&g, |h| {
            if h.is_terminal() {
                let w = h.world();
                let (q, f) = g.bid(*w.bids.last().unwrap());
                let count = w.rolls.iter().flatten().filter(|&&d| d == f).count() as u32;
                let bidder = (w.bids.len() - 1) % 2;
                let expected_bidder = if count >= q { 1.0 } else { -1.0 };
                assert_eq!(h.utility()[bidder], expected_bidder);
                assert_eq!(h.utility()[0] + h.utility()[1], 0.0);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn is_sequential_bayesian() {
        assert!(check_sbg(&LiarsDice::new(1, 3)).unwrap().is_sbg());
    }
}
