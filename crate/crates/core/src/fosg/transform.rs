//! Code-book rewrite of a one-round two-player matrix game into a game whose
//! only private information is dealt at the start.

use itertools::Itertools;

use super::{Action, Game, Observation, Player, START_TOKEN};
use crate::error::{Error, Result};

/// A one-shot simultaneous-move game given by payoff tables.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormGame {
    pub name: String,
    /// Action labels per player.
    pub labels: Vec<Vec<String>>,
    /// `payoffs[i][r][c]`: player `i`'s payoff when player 1 plays row `r`
    /// and player 2 plays column `c`.
    pub payoffs: Vec<Vec<Vec<f64>>>,
}

impl NormalFormGame {
    pub fn new(name: &str, labels: Vec<Vec<&str>>, payoffs: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let labels: Vec<Vec<String>> =
            labels.into_iter().map(|l| l.into_iter().map(str::to_string).collect()).collect();
        if labels.len() != payoffs.len() {
            return Err(Error::Config("one payoff table per player is required".into()));
        }
        if labels.iter().any(Vec::is_empty) {
            return Err(Error::Config("every player needs at least one action".into()));
        }
        if labels.len() == 2 {
            let (rows, cols) = (labels[0].len(), labels[1].len());
            if payoffs.iter().any(|t| t.len() != rows || t.iter().any(|r| r.len() != cols)) {
                return Err(Error::Config("payoff table shape does not match the action sets".into()));
            }
        }
        Ok(NormalFormGame { name: name.to_string(), labels, payoffs })
    }

    /// Zero-sum table from player 1's payoffs.
    pub fn zero_sum(name: &str, rows: Vec<&str>, cols: Vec<&str>, u1: Vec<Vec<f64>>) -> Result<Self> {
        let u2 = u1.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        NormalFormGame::new(name, vec![rows, cols], vec![u1, u2])
    }

    /// Player 2 wins on a match.
    pub fn matching_pennies() -> Self {
        NormalFormGame::zero_sum("mp", vec!["H", "T"], vec!["H", "T"], vec![vec![-1.0, 1.0], vec![1.0, -1.0]])
            .expect("well-formed table")
    }

    pub fn rock_paper_scissors() -> Self {
        NormalFormGame::zero_sum(
            "rps",
            vec!["R", "P", "S"],
            vec!["R", "P", "S"],
            vec![vec![0.0, -1.0, 1.0], vec![1.0, 0.0, -1.0], vec![-1.0, 1.0, 0.0]],
        )
        .expect("well-formed table")
    }

    pub fn num_players(&self) -> usize {
        self.labels.len()
    }

    pub fn payoff(&self, player: Player, row: usize, col: usize) -> f64 {
        self.payoffs[player][row][col]
    }
}

/// World of the rewritten game.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SbWorld {
    Init,
    /// Player 1 holds code book `book`.
    Dealt { book: usize },
    /// Player 1 announced `code`.
    Announced { book: usize, code: usize },
    Done { book: usize, code: usize, response: usize },
}

/// The rewritten game. Player 1 privately draws a uniformly random bijection
/// from their actions to public codes, announces a code, player 2 answers
/// publicly, and payoffs are those of the decoded action pair.
#[derive(Clone, Debug)]
pub struct SbFormGame {
    pub original: NormalFormGame,
    pub codes: Vec<String>,
    /// `books[b][k]`: code assigned to player 1's action `k` by book `b`.
    pub books: Vec<Vec<usize>>,
}

impl SbFormGame {
    /// Original action encoded as `code` under `book`.
    pub fn decode(&self, book: usize, code: usize) -> usize {
        self.books[book].iter().position(|&c| c == code).expect("books are bijections")
    }

    pub fn book_token(&self, book: usize) -> String {
        self.books[book]
            .iter()
            .enumerate()
            .map(|(k, &c)| format!("{}={}", self.original.labels[0][k], self.codes[c]))
            .join(",")
    }
}

pub fn sb_transform(game: &NormalFormGame) -> Result<SbFormGame> {
    if game.num_players() != 2 {
        return Err(Error::Unsupported(format!(
            "the code-book rewrite handles two-player games, got {}",
            game.num_players()
        )));
    }
    let m = game.labels[0].len();
    let codes: Vec<String> = if m <= 3 {
        ["X", "Y", "Z"][..m].iter().map(|s| s.to_string()).collect()
    } else {
        (0..m).map(|k| format!("X{k}")).collect()
    };
    let books = (0..m).permutations(m).collect();
    Ok(SbFormGame { original: game.clone(), codes, books })
}

impl Game for SbFormGame {
    type World = SbWorld;

    fn name(&self) -> String {
        format!("sb({})", self.original.name)
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_world(&self) -> SbWorld {
        SbWorld::Init
    }

    fn active_players(&self, world: &SbWorld) -> Vec<Player> {
        match world {
            SbWorld::Dealt { .. } => vec![0],
            SbWorld::Announced { .. } => vec![1],
            _ => Vec::new(),
        }
    }

    fn player_actions(&self, _world: &SbWorld, player: Player) -> Vec<Action> {
        let n = if player == 0 { self.codes.len() } else { self.original.labels[1].len() };
        (0..n as u16).map(Action).collect()
    }

    fn is_terminal(&self, world: &SbWorld) -> bool {
        matches!(world, SbWorld::Done { .. })
    }

    fn transition(&self, world: &SbWorld, joint: &[Action]) -> Vec<(SbWorld, f64)> {
        match *world {
            SbWorld::Init => {
                let p = 1.0 / self.books.len() as f64;
                (0..self.books.len()).map(|book| (SbWorld::Dealt { book }, p)).collect()
            }
            SbWorld::Dealt { book } => vec![(SbWorld::Announced { book, code: joint[0].index() }, 1.0)],
            SbWorld::Announced { book, code } => {
                vec![(SbWorld::Done { book, code, response: joint[1].index() }, 1.0)]
            }
            SbWorld::Done { .. } => Vec::new(),
        }
    }

    fn reward(&self, _world: &SbWorld, _joint: &[Action], next: &SbWorld) -> Vec<f64> {
        match *next {
            SbWorld::Done { book, code, response } => {
                let row = self.decode(book, code);
                vec![self.original.payoff(0, row, response), self.original.payoff(1, row, response)]
            }
            _ => vec![0.0, 0.0],
        }
    }

    fn observe(&self, _world: &SbWorld, joint: &[Action], next: &SbWorld) -> Observation {
        match *next {
            SbWorld::Dealt { book } => {
                Observation { private: vec![self.book_token(book), String::new()], public: START_TOKEN.into() }
            }
            SbWorld::Announced { .. } => Observation::public(2, self.action_token(0, joint[0])),
            _ => Observation::public(2, self.action_token(1, joint[1])),
        }
    }

    fn action_token(&self, player: Player, action: Action) -> String {
        if player == 0 {
            self.codes[action.index()].clone()
        } else {
            self.original.labels[1][action.index()].clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosg::{check_sbg, enumerate_counts};

    #[test]
    fn matching_pennies_has_two_books() {
        let g = sb_transform(&NormalFormGame::matching_pennies()).unwrap();
        assert_eq!(g.books.len(), 2);
        assert_eq!(g.codes, vec!["X", "Y"]);
        assert_eq!(g.book_token(0), "H=X,T=Y");
        assert_eq!(g.book_token(1), "H=Y,T=X");
        assert!(check_sbg(&g).unwrap().is_sbg());
    }

    #[test]
    fn rps_has_six_books() {
        let g = sb_transform(&NormalFormGame::rock_paper_scissors()).unwrap();
        assert_eq!(g.books.len(), 6);
        assert!(check_sbg(&g).unwrap().is_sbg());
        let counts = enumerate_counts(&g).unwrap();
        // 6 books, then 3 codes, then 3 responses.
        assert_eq!(counts.num_histories, 6 + 18 + 54);
        assert_eq!(counts.num_decision_infostates, vec![6, 3]);
    }

    #[test]
    fn decoding_inverts_books() {
        let g = sb_transform(&NormalFormGame::rock_paper_scissors()).unwrap();
        for (b, book) in g.books.iter().enumerate() {
            for (k, &c) in book.iter().enumerate() {
                assert_eq!(g.decode(b, c), k);
            }
        }
    }

    #[test]
    fn rejects_three_players() {
        let g = NormalFormGame {
            name: "three".into(),
            labels: vec![vec!["a".into()]; 3],
            payoffs: vec![vec![vec![0.0]]; 3],
        };
        assert!(matches!(sb_transform(&g), Err(Error::Unsupported(_))));
    }
}
