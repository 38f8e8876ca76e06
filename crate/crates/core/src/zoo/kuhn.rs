//! Three-card Kuhn poker: ante 1, one bet of 1, pass or bet.

use crate::fosg::{Action, Game, Observation, Player, START_TOKEN};

const CARDS: [&str; 3] = ["J", "Q", "K"];
const PASS: Action = Action(0);
const BET: Action = Action(1);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KuhnWorld {
    /// `None` before the deal.
    pub cards: Option<[u8; 2]>,
    pub moves: Vec<Action>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Kuhn;

impl KuhnWorld {
    fn finished(&self) -> bool {
        matches!(self.moves.as_slice(), [PASS, PASS] | [BET, _] | [PASS, BET, _])
    }
}

impl Kuhn {
    /// Player 1's utility at a finished betting sequence.
    fn payoff(cards: [u8; 2], moves: &[Action]) -> f64 {
        let showdown = |stake: f64| if cards[0] > cards[1] { stake } else { -stake };
        match moves {
            [PASS, PASS] => showdown(1.0),
            [BET, PASS] => 1.0,
            [BET, BET] => showdown(2.0),
            [PASS, BET, PASS] => -1.0,
            [PASS, BET, BET] => showdown(2.0),
            _ => unreachable!("unfinished betting sequence"),
        }
    }
}

impl Game for Kuhn {
    type World = KuhnWorld;

    fn name(&self) -> String {
        "kuhn".into()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_world(&self) -> KuhnWorld {
        KuhnWorld { cards: None, moves: Vec::new() }
    }

    fn active_players(&self, w: &KuhnWorld) -> Vec<Player> {
        if w.cards.is_none() || w.finished() {
            Vec::new()
        } else {
            vec![w.moves.len() % 2]
        }
    }

    fn player_actions(&self, _w: &KuhnWorld, _player: Player) -> Vec<Action> {
        vec![PASS, BET]
    }

    fn is_terminal(&self, w: &KuhnWorld) -> bool {
        w.cards.is_some() && w.finished()
    }

    fn transition(&self, w: &KuhnWorld, joint: &[Action]) -> Vec<(KuhnWorld, f64)> {
        if w.cards.is_none() {
            let mut deals = Vec::new();
            for a in 0..3u8 {
                for b in (0..3u8).filter(|&b| b != a) {
                    deals.push((KuhnWorld { cards: Some([a, b]), moves: Vec::new() }, 1.0 / 6.0));
                }
            }
            return deals;
        }
        if w.finished() {
            return Vec::new();
        }
        let mut next = w.clone();
        next.moves.push(joint[w.moves.len() % 2]);
        vec![(next, 1.0)]
    }

    fn reward(&self, _w: &KuhnWorld, _joint: &[Action], next: &KuhnWorld) -> Vec<f64> {
        match next.cards {
            Some(cards) if next.finished() => {
                let u = Kuhn::payoff(cards, &next.moves);
                vec![u, -u]
            }
            _ => vec![0.0, 0.0],
        }
    }

    fn observe(&self, w: &KuhnWorld, _joint: &[Action], next: &KuhnWorld) -> Observation {
        match (w.cards, next.cards) {
            (None, Some(c)) => Observation {
                private: vec![CARDS[c[0] as usize].into(), CARDS[c[1] as usize].into()],
                public: START_TOKEN.into(),
            },
            _ => Observation::public(2, self.action_token(0, *next.moves.last().expect("a move was made"))),
        }
    }

    fn action_token(&self, _player: Player, action: Action) -> String {
        if action == PASS { "p" } else { "b" }.into()
    }
}
