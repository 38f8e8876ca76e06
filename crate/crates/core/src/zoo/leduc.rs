//! Leduc hold'em: two copies each of J, Q, K, ante 1, two betting rounds with
//! raise sizes 2 and 4, at most two raises per round, one public card dealt
//! between the rounds. Cards of equal rank are merged, so chance outcomes
//! are rank combinations weighted by their multiplicity.

use crate::fosg::{Action, Game, Observation, Player, START_TOKEN};

const RANKS: [&str; 3] = ["J", "Q", "K"];
const FOLD: Action = Action(0);
const CALL: Action = Action(1);
const RAISE: Action = Action(2);
const MAX_RAISES: u8 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeducWorld {
    pub cards: Option<[u8; 2]>,
    pub board: Option<u8>,
    pub round: u8,
    /// Actions taken in the current round.
    pub moves: Vec<Action>,
    pub raises: u8,
    /// Total chips each player has put in, antes included.
    pub bets: [u32; 2],
    pub folded: Option<Player>,
    pub showdown: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Leduc;

impl LeducWorld {
    fn to_act(&self) -> Player {
        self.moves.len() % 2
    }

    fn finished(&self) -> bool {
        self.folded.is_some() || self.showdown
    }
}

impl Leduc {
    fn strength(card: u8, board: u8) -> u8 {
        if card == board {
            3 + card
        } else {
            card
        }
    }

    fn payoff(w: &LeducWorld) -> f64 {
        if let Some(folder) = w.folded {
            let u = w.bets[folder] as f64;
            return if folder == 0 { -u } else { u };
        }
        let (cards, board) = (w.cards.expect("dealt"), w.board.expect("board dealt"));
        let (a, b) = (Leduc::strength(cards[0], board), Leduc::strength(cards[1], board));
        let stake = w.bets[0] as f64;
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => stake,
            std::cmp::Ordering::Less => -stake,
            std::cmp::Ordering::Equal => 0.0,
        }
    }
}

impl Game for Leduc {
    type World = LeducWorld;

    fn name(&self) -> String {
        "leduc".into()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_world(&self) -> LeducWorld {
        LeducWorld {
            cards: None,
            board: None,
            round: 0,
            moves: Vec::new(),
            raises: 0,
            bets: [1, 1],
            folded: None,
            showdown: false,
        }
    }

    fn active_players(&self, w: &LeducWorld) -> Vec<Player> {
        if w.cards.is_none() || w.finished() {
            Vec::new()
        } else {
            vec![w.to_act()]
        }
    }

    fn player_actions(&self, w: &LeducWorld, player: Player) -> Vec<Action> {
        let mut actions = Vec::with_capacity(3);
        if w.bets[1 - player] > w.bets[player] {
            actions.push(FOLD);
        }
        actions.push(CALL);
        if w.raises < MAX_RAISES {
            actions.push(RAISE);
        }
        actions
    }

    fn is_terminal(&self, w: &LeducWorld) -> bool {
        w.finished()
    }

    fn transition(&self, w: &LeducWorld, joint: &[Action]) -> Vec<(LeducWorld, f64)> {
        if w.finished() {
            return Vec::new();
        }
        let Some(cards) = w.cards else {
            let mut deals = Vec::new();
            for a in 0..3u8 {
                for b in 0..3u8 {
                    let p = (2.0 / 6.0) * if a == b { 1.0 / 5.0 } else { 2.0 / 5.0 };
                    deals.push((LeducWorld { cards: Some([a, b]), ..w.clone() }, p));
                }
            }
            return deals;
        };
        let me = w.to_act();
        let action = joint[me];
        let mut next = w.clone();
        match action {
            FOLD => {
                next.folded = Some(me);
                next.moves.push(action);
                return vec![(next, 1.0)];
            }
            RAISE => {
                next.bets[me] = w.bets[1 - me] + if w.round == 0 { 2 } else { 4 };
                next.raises += 1;
                next.moves.push(action);
                return vec![(next, 1.0)];
            }
            _ => {}
        }
        next.bets[me] = w.bets[1 - me];
        if w.moves.is_empty() {
            next.moves.push(action);
            return vec![(next, 1.0)];
        }
        if w.round == 1 {
            next.moves.push(action);
            next.showdown = true;
            return vec![(next, 1.0)];
        }
        (0..3u8)
            .filter_map(|board| {
                let left = 2 - cards.iter().filter(|&&c| c == board).count();
                (left > 0).then(|| {
                    let mut n = next.clone();
                    n.board = Some(board);
                    n.round = 1;
                    n.moves.clear();
                    n.raises = 0;
                    (n, left as f64 / 4.0)
                })
            })
            .collect()
    }

    fn reward(&self, _w: &LeducWorld, _joint: &[Action], next: &LeducWorld) -> Vec<f64> {
        if next.finished() {
            let u = Leduc::payoff(next);
            vec![u, -u]
        } else {
            vec![0.0, 0.0]
        }
    }

    fn observe(&self, w: &LeducWorld, joint: &[Action], next: &LeducWorld) -> Observation {
        if w.cards.is_none() {
            let c = next.cards.expect("deal");
            return Observation {
                private: vec![RANKS[c[0] as usize].into(), RANKS[c[1] as usize].into()],
                public: START_TOKEN.into(),
            };
        }
        let token = self.action_token(w.to_act(), joint[w.to_act()]);
        match (w.board, next.board) {
            (None, Some(b)) => Observation::public(2, format!("{token}+{}", RANKS[b as usize])),
            _ => Observation::public(2, token),
        }
    }

    fn action_token(&self, _player: Player, action: Action) -> String {
        match action {
            FOLD => "f",
            CALL => "c",
            _ => "r",
        }
        .into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosg::{check_sbg, enumerate_counts, walk_histories};

    #[test]
    fn deal_probabilities_sum_to_one() {
        let deals = Leduc.transition(&Leduc.initial_world(), &[Action::NOOP, Action::NOOP]);
        assert_eq!(deals.len(), 9);
        let total: f64 = deals.iter().map(|d| d.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn standard_infostate_count() {
        // Six decision points per betting round, five ways to close the
        // first round, three private ranks and three board ranks. Telling
        // suits apart would give 6*6 + 5*6*6*5 = 936 instead.
        let c = enumerate_counts(&Leduc).unwrap();
        assert_eq!(c.total_decision_infostates(), 6 * 3 + 5 * 6 * 3 * 3);
    }

    #[test]
    fn utilities_bounded_and_zero_sum() {
        walk_histories(&Leduc, |h| {
            if h.is_terminal() {
                assert_eq!(h.utility()[0] + h.utility()[1], 0.0);
                assert!(h.utility()[0].abs() <= 13.0);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn is_sequential_bayesian() {
        assert!(check_sbg(&Leduc).unwrap().is_sbg());
    }
}
