//! Two-player matrix games played either simultaneously or sequentially with
//! player 1's move hidden from player 2.

use crate::fosg::{Action, Game, NormalFormGame, Observation, Player, START_TOKEN};

/// Public token of player 1's concealed move.
pub const HIDDEN_TOKEN: &str = "m";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Timing {
    /// Both players move at once; the public observation reveals both moves.
    Simultaneous,
    /// Player 1 moves first; player 2 only learns that a move was made.
    HiddenMove,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixWorld {
    Init,
    Open,
    Moved { row: usize },
    Done { row: usize, col: usize },
}

#[derive(Clone, Debug)]
pub struct MatrixGame {
    pub name: String,
    pub table: NormalFormGame,
    pub timing: Timing,
}

impl MatrixGame {
    pub fn new(name: &str, table: NormalFormGame, timing: Timing) -> Self {
        MatrixGame { name: name.into(), table, timing }
    }
}

impl Game for MatrixGame {
    type World = MatrixWorld;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_world(&self) -> MatrixWorld {
        MatrixWorld::Init
    }

    fn active_players(&self, w: &MatrixWorld) -> Vec<Player> {
        match (w, self.timing) {
            (MatrixWorld::Open, Timing::Simultaneous) => vec![0, 1],
            (MatrixWorld::Open, Timing::HiddenMove) => vec![0],
            (MatrixWorld::Moved { .. }, _) => vec![1],
            _ => Vec::new(),
        }
    }

    fn player_actions(&self, _w: &MatrixWorld, player: Player) -> Vec<Action> {
        (0..self.table.labels[player].len() as u16).map(Action).collect()
    }

    fn is_terminal(&self, w: &MatrixWorld) -> bool {
        matches!(w, MatrixWorld::Done { .. })
    }

    fn transition(&self, w: &MatrixWorld, joint: &[Action]) -> Vec<(MatrixWorld, f64)> {
        let next = match (*w, self.timing) {
            (MatrixWorld::Init, _) => MatrixWorld::Open,
            (MatrixWorld::Open, Timing::Simultaneous) => {
                MatrixWorld::Done { row: joint[0].index(), col: joint[1].index() }
            }
            (MatrixWorld::Open, Timing::HiddenMove) => MatrixWorld::Moved { row: joint[0].index() },
            (MatrixWorld::Moved { row }, _) => MatrixWorld::Done { row, col: joint[1].index() },
            (MatrixWorld::Done { .. }, _) => return Vec::new(),
        };
        vec![(next, 1.0)]
    }

    fn reward(&self, _w: &MatrixWorld, _joint: &[Action], next: &MatrixWorld) -> Vec<f64> {
        match *next {
            MatrixWorld::Done { row, col } => (0..2).map(|p| self.table.payoff(p, row, col)).collect(),
            _ => vec![0.0, 0.0],
        }
    }

    fn observe(&self, w: &MatrixWorld, joint: &[Action], _next: &MatrixWorld) -> Observation {
        let token = match (*w, self.timing) {
            (MatrixWorld::Init, _) => START_TOKEN.to_string(),
            (MatrixWorld::Open, Timing::Simultaneous) => {
                format!("{},{}", self.action_token(0, joint[0]), self.action_token(1, joint[1]))
            }
            (MatrixWorld::Open, Timing::HiddenMove) => HIDDEN_TOKEN.to_string(),
            _ => self.action_token(1, joint[1]),
        };
        Observation::public(2, token)
    }

    fn action_token(&self, player: Player, action: Action) -> String {
        self.table.labels[player][action.index()].clone()
    }
}
