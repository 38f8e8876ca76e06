//! Playing cards and a seven-card hand evaluator.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const RANKS: &[u8; 13] = b"23456789TJQKA";
pub const SUITS: &[u8; 4] = b"shdc";

/// A card as `rank * 4 + suit`, ranks from deuce (0) to ace (12).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card(pub u8);

impl Card {
    pub fn new(rank: u8, suit: u8) -> Card {
        Card(rank * 4 + suit)
    }

    pub fn rank(self) -> u8 {
        self.0 / 4
    }

    pub fn suit(self) -> u8 {
        self.0 % 4
    }

    pub fn mask(self) -> u64 {
        1 << self.0
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", RANKS[self.rank() as usize] as char, SUITS[self.suit() as usize] as char)
    }
}

impl FromStr for Card {
    type Err = Error;

    fn from_str(s: &str) -> Result<Card> {
        let b = s.as_bytes();
        if b.len() != 2 {
            return Err(Error::Parse { position: 0, message: format!("card {s:?} is not two characters") });
        }
        let rank = RANKS.iter().position(|&r| r == b[0]);
        let suit = SUITS.iter().position(|&x| x == b[1]);
        match (rank, suit) {
            (Some(r), Some(s)) => Ok(Card::new(r as u8, s as u8)),
            (None, _) => Err(Error::Parse { position: 0, message: format!("unknown rank in {s:?}") }),
            (_, None) => Err(Error::Parse { position: 1, message: format!("unknown suit in {s:?}") }),
        }
    }
}

pub fn mask_of(cards: &[Card]) -> u64 {
    cards.iter().fold(0, |m, c| m | c.mask())
}

pub const HIGH_CARD: u32 = 0;
pub const PAIR: u32 = 1;
pub const TWO_PAIR: u32 = 2;
pub const TRIPS: u32 = 3;
pub const STRAIGHT: u32 = 4;
pub const FLUSH: u32 = 5;
pub const FULL_HOUSE: u32 = 6;
pub const QUADS: u32 = 7;
pub const STRAIGHT_FLUSH: u32 = 8;

fn pack(category: u32, ranks: &[u8]) -> u32 {
    let mut v = category;
    for i in 0..5 {
        v = (v << 4) | ranks.get(i).map_or(0, |&r| r as u32);
    }
    v
}

pub fn category(value: u32) -> u32 {
    value >> 20
}

/// Highest rank of a five-long run in a rank bitmask, the wheel included.
fn straight_high(ranks: u16) -> Option<u8> {
    for high in (4..13u8).rev() {
        let run = 0b11111u16 << (high - 4);
        if ranks & run == run {
            return Some(high);
        }
    }
    let wheel = 0b1_0000_0000_1111u16;
    (ranks & wheel == wheel).then_some(3)
}

/// Top `n` ranks of a bitmask, highest first.
fn top(ranks: u16, n: usize) -> Vec<u8> {
    (0..13u8).rev().filter(|r| ranks & (1 << r) != 0).take(n).collect()
}

/// Value of the best five-card hand within 5 to 7 cards. Larger is better;
/// equal values tie.
pub fn evaluate(cards: &[Card]) -> u32 {
    let mut counts = [0u8; 13];
    let mut by_suit = [0u16; 4];
    for c in cards {
        counts[c.rank() as usize] += 1;
        by_suit[c.suit() as usize] |= 1 << c.rank();
    }
    if let Some(suited) = by_suit.iter().copied().find(|s| s.count_ones() >= 5) {
        if let Some(high) = straight_high(suited) {
            return pack(STRAIGHT_FLUSH, &[high]);
        }
    }
    let present: u16 = (0..13).filter(|&r| counts[r] > 0).fold(0, |m, r| m | (1 << r));
    let of = |k: u8| -> Vec<u8> { (0..13u8).rev().filter(|&r| counts[r as usize] == k).collect() };
    let (quads, trips, pairs) = (of(4), of(3), of(2));
    if let Some(&q) = quads.first() {
        let kicker = top(present & !(1 << q), 1);
        return pack(QUADS, &[q, kicker[0]]);
    }
    if let Some(&t) = trips.first() {
        let pair = trips.iter().skip(1).chain(pairs.iter()).copied().max();
        if let Some(p) = pair {
            return pack(FULL_HOUSE, &[t, p]);
        }
    }
    if let Some(suited) = by_suit.iter().copied().find(|s| s.count_ones() >= 5) {
        return pack(FLUSH, &top(suited, 5));
    }
    if let Some(high) = straight_high(present) {
        return pack(STRAIGHT, &[high]);
    }
    if let Some(&t) = trips.first() {
        let mut v = vec![t];
        v.extend(top(present & !(1 << t), 2));
        return pack(TRIPS, &v);
    }
    if pairs.len() >= 2 {
        let (a, b) = (pairs[0], pairs[1]);
        let mut v = vec![a, b];
        v.extend(top(present & !(1 << a) & !(1 << b), 1));
        return pack(TWO_PAIR, &v);
    }
    if let Some(&p) = pairs.first() {
        let mut v = vec![p];
        v.extend(top(present & !(1 << p), 3));
        return pack(PAIR, &v);
    }
    pack(HIGH_CARD, &top(present, 5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cards(s: &str) -> Vec<Card> {
        s.split_whitespace().map(|c| c.parse().unwrap()).collect()
    }

    #[test]
    fn card_round_trip() {
        for i in 0..52 {
            let c = Card(i);
            assert_eq!(c.to_string().parse::<Card>().unwrap(), c);
        }
        assert!("1s".parse::<Card>().is_err());
        assert!("Ax".parse::<Card>().is_err());
    }

    #[test]
    fn categories() {
        let cases = [
            ("As Ks Qs Js Ts", STRAIGHT_FLUSH),
            ("9h 9d 9s 9c 2h", QUADS),
            ("9h 9d 9s 4c 4h", FULL_HOUSE),
            ("2h 7h 9h Jh Kh", FLUSH),
            ("As 2d 3c 4h 5s", STRAIGHT),
            ("9h 9d 9s 7c 4h", TRIPS),
            ("9h 9d 7s 7c 4h", TWO_PAIR),
            ("9h 9d 8s 7c 4h", PAIR),
            ("Ah Jd 8s 7c 4h", HIGH_CARD),
        ];
        for (hand, cat) in cases {
            assert_eq!(category(evaluate(&cards(hand))), cat, "{hand}");
        }
    }

    #[test]
    fn wheel_is_lowest_straight() {
        assert!(evaluate(&cards("As 2d 3c 4h 5s")) < evaluate(&cards("2d 3c 4h 5s 6s")));
    }

    #[test]
    fn trips_on_the_demo_board() {
        let board = "9s 7c 5s 4h 3c";
        let nines = evaluate(&cards(&format!("{board} 9h 9d")));
        let sevens = evaluate(&cards(&format!("{board} 7h 7d")));
        assert!(nines > sevens);
    }
}
