use std::cmp::Ordering;

use itertools::Itertools;
use pubcfr_core::fosg::walk_histories;
use pubcfr_core::zoo::cards::{evaluate, Card};
use pubcfr_core::zoo::{hand_rank, RiverConfig, RiverSpec};
use pubcfr_core::*;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Five-card strength as (category, tie-break ranks), compared
/// lexicographically. Written from the textbook rules, independently of the
/// crate's bitmask evaluator.
fn naive5(cards: &[Card]) -> (u8, Vec<u8>) {
    let mut counts = [0u8; 13];
    for c in cards {
        counts[c.rank() as usize] += 1;
    }
    let mut groups: Vec<(u8, u8)> = (0..13u8).filter(|&r| counts[r as usize] > 0).map(|r| (counts[r as usize], r)).collect();
    groups.sort_by(|a, b| b.cmp(a));
    let by_group: Vec<u8> = groups.iter().map(|g| g.1).collect();
    let flush = cards.iter().all(|c| c.suit() == cards[0].suit());
    let mut ranks: Vec<u8> = cards.iter().map(|c| c.rank()).collect();
    ranks.sort_unstable();
    let distinct = groups.len() == 5;
    let straight_high = if distinct && ranks[4] - ranks[0] == 4 {
        Some(ranks[4])
    } else if ranks == [0, 1, 2, 3, 12] {
        Some(3)
    } else {
        None
    };
    let shape: Vec<u8> = groups.iter().map(|g| g.0).collect();
    match (straight_high, flush, shape.as_slice()) {
        (Some(h), true, _) => (8, vec![h]),
        (_, _, [4, 1]) => (7, by_group),
        (_, _, [3, 2]) => (6, by_group),
        (_, true, _) => (5, by_group),
        (Some(h), false, _) => (4, vec![h]),
        (_, _, [3, 1, 1]) => (3, by_group),
        (_, _, [2, 2, 1]) => (2, by_group),
        (_, _, [2, 1, 1, 1]) => (1, by_group),
        _ => (0, by_group),
    }
}

fn best_of_seven(cards: &[Card]) -> (u8, Vec<u8>) {
    cards.iter().copied().combinations(5).map(|five| naive5(&five)).max().unwrap()
}

#[test]
fn evaluator_orders_like_best_of_21() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let deck: Vec<Card> = (0..52).map(Card).collect();
    let hands: Vec<Vec<Card>> = (0..600).map(|_| deck.choose_multiple(&mut rng, 7).copied().collect()).collect();
    let oracle: Vec<_> = hands.iter().map(|h| best_of_seven(h)).collect();
    let values: Vec<u32> = hands.iter().map(|h| evaluate(h)).collect();
    for i in 0..hands.len() {
        for j in i + 1..hands.len() {
            assert_eq!(values[i].cmp(&values[j]), oracle[i].cmp(&oracle[j]), "{:?} vs {:?}", hands[i], hands[j]);
        }
    }
}

#[test]
fn two_card_ranks_agree_with_oracle_on_the_board() {
    let config = RiverConfig::from_spec(&RiverSpec { deck: 20, hand: 2, ..RiverSpec::default() }).unwrap();
    let hands: Vec<Vec<Card>> = config.hole_cards().into_iter().combinations(2).collect();
    assert_eq!(hands.len(), 105);
    let with_board = |h: &[Card]| {
        let mut seven = config.board.to_vec();
        seven.extend_from_slice(h);
        best_of_seven(&seven)
    };
    let ranks: Vec<u32> = hands.iter().map(|h| hand_rank(&config, h).unwrap()).collect();
    let oracle: Vec<_> = hands.iter().map(|h| with_board(h)).collect();
    for i in 0..hands.len() {
        for j in 0..hands.len() {
            assert_eq!(ranks[i].cmp(&ranks[j]), oracle[i].cmp(&oracle[j]));
        }
    }
    // Total order and transitivity over every triple.
    for (a, b, c) in (0..hands.len()).tuple_combinations() {
        let ab = ranks[a].cmp(&ranks[b]);
        let bc = ranks[b].cmp(&ranks[c]);
        if ab == bc && ab != Ordering::Equal {
            assert_eq!(ranks[a].cmp(&ranks[c]), ab);
        }
    }
}

#[test]
fn hand_rank_examples() {
    let cards = |s: &str| -> Vec<Card> { s.split_whitespace().map(|c| c.parse().unwrap()).collect() };
    let two = RiverConfig::from_spec(&RiverSpec { deck: 52, hand: 2, ..RiverSpec::default() }).unwrap();
    assert!(hand_rank(&two, &cards("9h 9d")).unwrap() > hand_rank(&two, &cards("7h 7d")).unwrap());
    // Both play the board's straight.
    assert_eq!(hand_rank(&two, &cards("6h 2d")).unwrap(), hand_rank(&two, &cards("6d 2h")).unwrap());
    assert!(hand_rank(&two, &cards("9s 2d")).is_err());

    let one = RiverConfig::from_spec(&RiverSpec::default()).unwrap();
    assert!(hand_rank(&one, &cards("Kd")).unwrap() > hand_rank(&one, &cards("Jd")).unwrap());
    assert_eq!(hand_rank(&one, &cards("Kd")).unwrap(), hand_rank(&one, &cards("Kh")).unwrap());
    assert!(hand_rank(&one, &cards("7c")).is_err());
}

#[test]
fn utilities_are_zero_sum_and_bounded() {
    for spec in GameSpec::zoo() {
        let g = make_game(&spec).unwrap();
        let bound = match spec {
            GameSpec::Kuhn => 2.0,
            GameSpec::River(r) => r.stack as f64,
            _ => f64::INFINITY,
        };
        walk_histories(&g, |h| {
            if h.is_terminal() {
                let u = h.utility();
                assert_eq!(u.iter().sum::<f64>(), 0.0, "{spec}");
                assert!(u.iter().all(|x| x.abs() <= bound), "{spec}: {u:?}");
            }
            Ok(())
        })
        .unwrap();
    }
}

#[test]
fn small_game_sizes() {
    let kuhn = enumerate_counts(&make_game(&GameSpec::Kuhn).unwrap()).unwrap();
    assert_eq!(kuhn.total_decision_infostates(), 12);
    let rps = enumerate_counts(&make_game(&GameSpec::RpsEfg).unwrap()).unwrap();
    assert_eq!(rps.num_histories, 13);
    assert_eq!(rps.total_decision_infostates(), 2);
}

#[test]
fn river_counts_by_enumeration() {
    let g = make_game(&"river:deck=20,hand=1,pot=200,stack=1000,abs=fcpa".parse().unwrap()).unwrap();
    let c = enumerate_counts(&g).unwrap();
    let t = build_public_tree(&g).unwrap();
    // 15 hole cards give 210 ordered deals, repeated under every public node.
    assert_eq!(c.num_histories, 210 * t.nodes.len());
    assert_eq!(c.num_terminals, 210 * t.terminals().count());
    assert_eq!(c.max_private_per_public, 15);
    assert_eq!(c.num_public_states, t.nodes.len());
}

#[test]
fn game_specs_reject_bad_input() {
    assert!(matches!("kuhnn".parse::<GameSpec>(), Err(Error::Parse { .. })));
    assert!(matches!("liars_dice:d=1,g=2".parse::<GameSpec>(), Err(Error::Parse { position: 15, .. })));
    let tiny: GameSpec = "river:deck=6,hand=1,pot=200,stack=1000,abs=fc".parse().unwrap();
    assert!(matches!(make_game(&tiny), Err(Error::Config(_))));
    let no_fold: GameSpec = "river:deck=20,hand=1,pot=200,stack=1000,abs=cp".parse().unwrap();
    assert!(matches!(make_game(&no_fold), Err(Error::Config(_))));
    for spec in GameSpec::zoo() {
        assert_eq!(spec.to_string().parse::<GameSpec>().unwrap(), spec);
    }
}
