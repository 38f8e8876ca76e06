//! Heads-up river subgame on a fixed board with a reduced deck.
//!
//! The pot `P` is dead money owned half by each player; `stack` is each
//! player's total stake including that half, so no player can lose more
//! than `stack`. Betting uses the fold / call / pot / all-in abstraction,
//! player 1 acts first, a check is a call of zero, and the round ends on a
//! check-check, a called bet, or a fold. Raises are unlimited up to all-in.

use std::fmt;

use super::cards::{evaluate, mask_of, Card};
use crate::error::{Error, Result};
use crate::fosg::{Action, Game, Observation, Player, RankedOutcome, Settlement, START_TOKEN};

pub const DEFAULT_BOARD: [&str; 5] = ["9s", "7c", "5s", "4h", "3c"];

const FOLD: Action = Action(0);
const CALL: Action = Action(1);
const POT: Action = Action(2);
const ALL_IN: Action = Action(3);

/// Which bet kinds players may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Abstraction {
    pub fold: bool,
    pub call: bool,
    pub pot: bool,
    pub all_in: bool,
}

impl Abstraction {
    pub const FULL: Abstraction = Abstraction { fold: true, call: true, pot: true, all_in: true };

    pub fn parse(s: &str, offset: usize) -> Result<Abstraction> {
        let mut a = Abstraction { fold: false, call: false, pot: false, all_in: false };
        for (i, ch) in s.char_indices() {
            let flag = match ch {
                'f' => &mut a.fold,
                'c' => &mut a.call,
                'p' => &mut a.pot,
                'a' => &mut a.all_in,
                _ => {
                    return Err(Error::Parse {
                        position: offset + i,
                        message: format!("unknown bet kind {ch:?}, expected a subset of f,c,p,a"),
                    })
                }
            };
            if *flag {
                return Err(Error::Parse { position: offset + i, message: format!("bet kind {ch:?} repeated") });
            }
            *flag = true;
        }
        Ok(a)
    }
}

impl fmt::Display for Abstraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (on, c) in [(self.fold, 'f'), (self.call, 'c'), (self.pot, 'p'), (self.all_in, 'a')] {
            if on {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// Parameters of a river game as written in a game spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RiverSpec {
    pub deck: u32,
    pub hand: u32,
    pub pot: u32,
    pub stack: u32,
    pub abs: Abstraction,
}

impl Default for RiverSpec {
    fn default() -> Self {
        RiverSpec { deck: 20, hand: 1, pot: 200, stack: 1000, abs: Abstraction::FULL }
    }
}

/// A fully resolved river configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RiverConfig {
    /// Cards in play, board included.
    pub deck: Vec<Card>,
    pub board: [Card; 5],
    pub hand_size: usize,
    pub pot: u32,
    pub stack: u32,
    pub abstraction: Abstraction,
}

impl RiverConfig {
    /// The board plus the highest `deck - 5` remaining cards.
    pub fn from_spec(spec: &RiverSpec) -> Result<RiverConfig> {
        let board: Vec<Card> = DEFAULT_BOARD.iter().map(|c| c.parse().expect("valid board card")).collect();
        let board: [Card; 5] = board.try_into().expect("five board cards");
        if !(1..=2).contains(&spec.hand) {
            return Err(Error::Config(format!("hand size must be 1 or 2, got {}", spec.hand)));
        }
        if spec.deck > 52 {
            return Err(Error::Config(format!("deck of {} cards exceeds 52", spec.deck)));
        }
        let needed = 5 + 2 * spec.hand;
        if spec.deck < needed {
            return Err(Error::Config(format!(
                "deck of {} cards cannot hold the 5-card board and two {}-card hands",
                spec.deck, spec.hand
            )));
        }
        if spec.pot == 0 {
            return Err(Error::Config("pot must be positive".into()));
        }
        if 2 * spec.stack < spec.pot {
            return Err(Error::Config(format!(
                "stack {} is smaller than a player's half of the pot {}",
                spec.stack, spec.pot
            )));
        }
        if !spec.abs.fold || !spec.abs.call {
            return Err(Error::Config("the bet abstraction must contain fold and call".into()));
        }
        let board_mask = mask_of(&board);
        let mut rest: Vec<Card> = (0..52u8).rev().map(Card).filter(|c| board_mask & c.mask() == 0).collect();
        rest.truncate(spec.deck as usize - 5);
        let mut deck = board.to_vec();
        deck.extend(rest);
        deck.sort();
        Ok(RiverConfig {
            deck,
            board,
            hand_size: spec.hand as usize,
            pot: spec.pot,
            stack: spec.stack,
            abstraction: spec.abs,
        })
    }

    /// Cards a private hand can be drawn from.
    pub fn hole_cards(&self) -> Vec<Card> {
        let board = mask_of(&self.board);
        self.deck.iter().copied().filter(|c| board & c.mask() == 0).collect()
    }

    /// Largest bet a player can make on top of their half of the pot.
    pub fn max_bet(&self) -> u32 {
        (self.stack as f64 - self.pot as f64 / 2.0).floor() as u32
    }
}

/// Showdown strength of a private hand on the config's board. One-card hands
/// rank by card rank alone; two-card hands by the best five of seven cards.
pub fn hand_rank(config: &RiverConfig, hand: &[Card]) -> Result<u32> {
    if hand.len() != config.hand_size {
        return Err(Error::Contract(format!("expected {} hole cards, got {}", config.hand_size, hand.len())));
    }
    if mask_of(hand) & mask_of(&config.board) != 0 {
        return Err(Error::Contract("hand shares a card with the board".into()));
    }
    if mask_of(hand).count_ones() as usize != hand.len() {
        return Err(Error::Contract("hand repeats a card".into()));
    }
    if config.hand_size == 1 {
        return Ok(hand[0].rank() as u32);
    }
    let mut seven = config.board.to_vec();
    seven.extend_from_slice(hand);
    Ok(evaluate(&seven))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiverHand {
    pub cards: Vec<Card>,
    pub mask: u64,
    pub rank: u32,
    pub token: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RiverEnd {
    Fold(Player),
    Showdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RiverWorld {
    /// Index into the deal list; `None` before the deal.
    pub deal: Option<u32>,
    /// Chips each player has bet on top of their half of the pot.
    pub bets: [u32; 2],
    /// Actions taken so far.
    pub moves: u16,
    pub end: Option<RiverEnd>,
}

#[derive(Clone, Debug)]
pub struct River {
    pub spec: RiverSpec,
    pub config: RiverConfig,
    pub hands: Vec<RiverHand>,
    /// Ordered pairs of card-disjoint hands.
    pub deals: Vec<[u32; 2]>,
}

impl River {
    pub fn new(spec: &RiverSpec) -> Result<River> {
        let config = RiverConfig::from_spec(spec)?;
        let hole = config.hole_cards();
        let mut combos: Vec<Vec<Card>> = if config.hand_size == 1 {
            hole.iter().map(|&c| vec![c]).collect()
        } else {
            let mut v = Vec::new();
            for (i, &a) in hole.iter().enumerate() {
                for &b in &hole[i + 1..] {
                    v.push(vec![b.max(a), b.min(a)]);
                }
            }
            v
        };
        combos.sort_by(|a, b| b.cmp(a));
        let hands = combos
            .into_iter()
            .map(|cards| {
                Ok(RiverHand {
                    mask: mask_of(&cards),
                    rank: hand_rank(&config, &cards)?,
                    token: cards.iter().map(Card::to_string).collect(),
                    cards,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut deals = Vec::new();
        for (i, a) in hands.iter().enumerate() {
            for (j, b) in hands.iter().enumerate() {
                if a.mask & b.mask == 0 {
                    deals.push([i as u32, j as u32]);
                }
            }
        }
        Ok(River { spec: *spec, config, hands, deals })
    }

    fn half_pot(&self) -> f64 {
        self.config.pot as f64 / 2.0
    }

    /// Bet a pot-sized raise reaches, before deduplication against all-in.
    fn pot_target(&self, w: &RiverWorld, me: Player) -> u32 {
        let facing = w.bets[1 - me];
        let pot_after_call = self.config.pot + 2 * facing;
        (facing + pot_after_call).min(self.config.max_bet())
    }

    /// Stake of a finished world: what the winner gains.
    fn stake(&self, w: &RiverWorld) -> f64 {
        match w.end {
            Some(RiverEnd::Fold(folder)) => self.half_pot() + w.bets[folder] as f64,
            _ => self.half_pot() + w.bets[0] as f64,
        }
    }

    fn payoff(&self, w: &RiverWorld) -> f64 {
        let stake = self.stake(w);
        match w.end.expect("finished") {
            RiverEnd::Fold(0) => -stake,
            RiverEnd::Fold(_) => stake,
            RiverEnd::Showdown => {
                let deal = self.deals[w.deal.expect("dealt") as usize];
                let (a, b) = (self.hands[deal[0] as usize].rank, self.hands[deal[1] as usize].rank);
                match a.cmp(&b) {
                    std::cmp::Ordering::Greater => stake,
                    std::cmp::Ordering::Less => -stake,
                    std::cmp::Ordering::Equal => 0.0,
                }
            }
        }
    }
}

impl Game for River {
    type World = RiverWorld;

    fn name(&self) -> String {
        let s = &self.spec;
        format!("river:deck={},hand={},pot={},stack={},abs={}", s.deck, s.hand, s.pot, s.stack, s.abs)
    }

    fn num_players(&self) -> usize {
        2
    }

    fn initial_world(&self) -> RiverWorld {
        RiverWorld { deal: None, bets: [0, 0], moves: 0, end: None }
    }

    fn active_players(&self, w: &RiverWorld) -> Vec<Player> {
        if w.deal.is_none() || w.end.is_some() {
            Vec::new()
        } else {
            vec![(w.moves % 2) as usize]
        }
    }

    fn player_actions(&self, w: &RiverWorld, me: Player) -> Vec<Action> {
        let abs = self.config.abstraction;
        let facing = w.bets[1 - me];
        let max = self.config.max_bet();
        let mut actions = Vec::with_capacity(4);
        if facing > w.bets[me] {
            actions.push(FOLD);
        }
        actions.push(CALL);
        if facing < max {
            if abs.pot && !(abs.all_in && self.pot_target(w, me) == max) {
                actions.push(POT);
            }
            if abs.all_in {
                actions.push(ALL_IN);
            }
        }
        actions
    }

    fn is_terminal(&self, w: &RiverWorld) -> bool {
        w.end.is_some()
    }

    fn transition(&self, w: &RiverWorld, joint: &[Action]) -> Vec<(RiverWorld, f64)> {
        if w.end.is_some() {
            return Vec::new();
        }
        if w.deal.is_none() {
            let p = 1.0 / self.deals.len() as f64;
            return (0..self.deals.len() as u32).map(|d| (RiverWorld { deal: Some(d), ..*w }, p)).collect();
        }
        let me = (w.moves % 2) as usize;
        let mut next = RiverWorld { moves: w.moves + 1, ..*w };
        match joint[me] {
            FOLD => next.end = Some(RiverEnd::Fold(me)),
            CALL => {
                next.bets[me] = w.bets[1 - me];
                if w.moves > 0 {
                    next.end = Some(RiverEnd::Showdown);
                }
            }
            POT => next.bets[me] = self.pot_target(w, me),
            _ => next.bets[me] = self.config.max_bet(),
        }
        vec![(next, 1.0)]
    }

    fn reward(&self, _w: &RiverWorld, _joint: &[Action], next: &RiverWorld) -> Vec<f64> {
        if next.end.is_some() {
            let u = self.payoff(next);
            vec![u, -u]
        } else {
            vec![0.0, 0.0]
        }
    }

    fn observe(&self, w: &RiverWorld, joint: &[Action], next: &RiverWorld) -> Observation {
        match (w.deal, next.deal) {
            (None, Some(d)) => {
                let deal = self.deals[d as usize];
                Observation {
                    private: deal.iter().map(|&h| self.hands[h as usize].token.clone()).collect(),
                    public: START_TOKEN.into(),
                }
            }
            _ => {
                let me = (w.moves % 2) as usize;
                Observation::public(2, self.action_token(me, joint[me]))
            }
        }
    }

    fn action_token(&self, _player: Player, action: Action) -> String {
        match action {
            FOLD => "f",
            CALL => "c",
            POT => "p",
            _ => "a",
        }
        .into()
    }

    fn ranked_outcome(&self, w: &RiverWorld) -> Option<RankedOutcome> {
        let end = w.end?;
        let deal = self.deals[w.deal? as usize];
        let (a, b) = (&self.hands[deal[0] as usize], &self.hands[deal[1] as usize]);
        Some(RankedOutcome {
            settlement: match end {
                RiverEnd::Fold(folder) => Settlement::Fold { folder },
                RiverEnd::Showdown => Settlement::Showdown,
            },
            stake: self.stake(w),
            hands: [a.mask, b.mask],
            ranks: [a.rank, b.rank],
        })
    }
}
