//! Benchmark games and the spec strings that name them.
//!
//! ```text
//! kuhn | leduc | rps_efg | rps_nfg | mp_seq | mp_sb
//! liars_dice:d=<int>,f=<int>
//! river:deck=<int>,hand=<1|2>,pot=<int>,stack=<int>,abs=<subset of f,c,p,a>
//! ```
//!
//! Parameters may appear in any order; omitted ones take their defaults
//! (`d=1,f=4` and `deck=20,hand=1,pot=200,stack=1000,abs=fcpa`). Rendering
//! always writes every parameter in the order above.

pub mod cards;
pub mod kuhn;
pub mod leduc;
pub mod liars_dice;
pub mod matrix;
pub mod river;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fosg::{
    sb_transform, Action, Game, NormalFormGame, Observation, Player, RankedOutcome, SbFormGame, SbWorld,
};
pub use kuhn::{Kuhn, KuhnWorld};
pub use leduc::{Leduc, LeducWorld};
pub use liars_dice::{DiceWorld, LiarsDice};
pub use matrix::{MatrixGame, MatrixWorld, Timing};
pub use river::{hand_rank, Abstraction, River, RiverConfig, RiverSpec, RiverWorld};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameSpec {
    Kuhn,
    Leduc,
    RpsEfg,
    RpsNfg,
    MpSeq,
    MpSb,
    LiarsDice { dice: u32, faces: u32 },
    River(RiverSpec),
}

impl GameSpec {
    /// Every parameterless game plus small instances of the parameterized ones.
    pub fn zoo() -> Vec<GameSpec> {
        vec![
            GameSpec::Kuhn,
            GameSpec::Leduc,
            GameSpec::RpsEfg,
            GameSpec::RpsNfg,
            GameSpec::MpSeq,
            GameSpec::MpSb,
            GameSpec::LiarsDice { dice: 1, faces: 4 },
            GameSpec::River(RiverSpec::default()),
        ]
    }

    pub fn is_river(&self) -> bool {
        matches!(self, GameSpec::River(_))
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameSpec::Kuhn => f.write_str("kuhn"),
            GameSpec::Leduc => f.write_str("leduc"),
            GameSpec::RpsEfg => f.write_str("rps_efg"),
            GameSpec::RpsNfg => f.write_str("rps_nfg"),
            GameSpec::MpSeq => f.write_str("mp_seq"),
            GameSpec::MpSb => f.write_str("mp_sb"),
            GameSpec::LiarsDice { dice, faces } => write!(f, "liars_dice:d={dice},f={faces}"),
            GameSpec::River(r) => {
                write!(f, "river:deck={},hand={},pot={},stack={},abs={}", r.deck, r.hand, r.pot, r.stack, r.abs)
            }
        }
    }
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

/// `key=value` pairs after the colon, with the byte offset of each value.
fn parameters(s: &str, offset: usize) -> Result<Vec<(&str, &str, usize)>> {
    let mut out: Vec<(&str, &str, usize)> = Vec::new();
    let mut pos = offset;
    for part in s.split(',') {
        let (key, value) =
            part.split_once('=').ok_or_else(|| parse_err(pos, format!("expected key=value, got {part:?}")))?;
        if key.is_empty() {
            return Err(parse_err(pos, "empty parameter name"));
        }
        if out.iter().any(|(k, _, _)| *k == key) {
            return Err(parse_err(pos, format!("parameter {key:?} given twice")));
        }
        out.push((key, value, pos + key.len() + 1));
        pos += part.len() + 1;
    }
    Ok(out)
}

fn integer(value: &str, at: usize) -> Result<u32> {
    value.parse().map_err(|_| parse_err(at, format!("expected a non-negative integer, got {value:?}")))
}

impl FromStr for GameSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GameSpec> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let offset = name.len() + 1;
        let simple = match name {
            "kuhn" => Some(GameSpec::Kuhn),
            "leduc" => Some(GameSpec::Leduc),
            "rps_efg" => Some(GameSpec::RpsEfg),
            "rps_nfg" => Some(GameSpec::RpsNfg),
            "mp_seq" => Some(GameSpec::MpSeq),
            "mp_sb" => Some(GameSpec::MpSb),
            "liars_dice" | "river" => None,
            _ => return Err(parse_err(0, format!("unknown game {name:?}"))),
        };
        if let Some(spec) = simple {
            return match params {
                Some(_) => Err(parse_err(name.len(), format!("{name} takes no parameters"))),
                None => Ok(spec),
            };
        }
        let params = match params {
            Some(p) => parameters(p, offset)?,
            None => Vec::new(),
        };
        if name == "liars_dice" {
            let (mut dice, mut faces) = (1, 4);
            for (key, value, at) in params {
                match key {
                    "d" => dice = integer(value, at)?,
                    "f" => faces = integer(value, at)?,
                    _ => return Err(parse_err(at - key.len() - 1, format!("unknown liars_dice parameter {key:?}"))),
                }
            }
            return Ok(GameSpec::LiarsDice { dice, faces });
        }
        let mut r = RiverSpec::default();
        for (key, value, at) in params {
            match key {
                "deck" => r.deck = integer(value, at)?,
                "hand" => r.hand = integer(value, at)?,
                "pot" => r.pot = integer(value, at)?,
                "stack" => r.stack = integer(value, at)?,
                "abs" => r.abs = Abstraction::parse(value, at)?,
                _ => return Err(parse_err(at - key.len() - 1, format!("unknown river parameter {key:?}"))),
            }
        }
        Ok(GameSpec::River(r))
    }
}

macro_rules! any_game {
    ($($variant:ident($game:ty, $world:ty)),* $(,)?) => {
        /// Any zoo game behind one type.
        #[derive(Clone, Debug)]
        pub enum AnyGame {
            $($variant($game),)*
        }

        #[derive(Clone, Debug)]
        pub enum AnyWorld {
            $($variant($world),)*
        }

        impl Game for AnyGame {
            type World = AnyWorld;

            fn name(&self) -> String {
                match self {
                    $(AnyGame::$variant(g) => g.name(),)*
                }
            }

            fn num_players(&self) -> usize {
                match self {
                    $(AnyGame::$variant(g) => g.num_players(),)*
                }
            }

            fn initial_world(&self) -> AnyWorld {
                match self {
                    $(AnyGame::$variant(g) => AnyWorld::$variant(g.initial_world()),)*
                }
            }

            fn active_players(&self, w: &AnyWorld) -> Vec<Player> {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g.active_players(w),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn player_actions(&self, w: &AnyWorld, player: Player) -> Vec<Action> {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g.player_actions(w, player),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn legal_actions(&self, w: &AnyWorld, player: Player) -> Vec<Action> {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g.legal_actions(w, player),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn is_terminal(&self, w: &AnyWorld) -> bool {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g.is_terminal(w),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn transition(&self, w: &AnyWorld, joint: &[Action]) -> Vec<(AnyWorld, f64)> {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g
                        .transition(w, joint)
                        .into_iter()
                        .map(|(n, p)| (AnyWorld::$variant(n), p))
                        .collect(),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn reward(&self, w: &AnyWorld, joint: &[Action], next: &AnyWorld) -> Vec<f64> {
                match (self, w, next) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w), AnyWorld::$variant(n)) => g.reward(w, joint, n),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn observe(&self, w: &AnyWorld, joint: &[Action], next: &AnyWorld) -> Observation {
                match (self, w, next) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w), AnyWorld::$variant(n)) => g.observe(w, joint, n),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn action_token(&self, player: Player, action: Action) -> String {
                match self {
                    $(AnyGame::$variant(g) => g.action_token(player, action),)*
                }
            }

            fn step(&self, w: &AnyWorld, joint: &[Action]) -> Vec<crate::fosg::Outcome<AnyWorld>> {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g
                        .step(w, joint)
                        .into_iter()
                        .map(|o| crate::fosg::Outcome {
                            next: AnyWorld::$variant(o.next),
                            probability: o.probability,
                            rewards: o.rewards,
                            observation: o.observation,
                        })
                        .collect(),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }

            fn ranked_outcome(&self, w: &AnyWorld) -> Option<RankedOutcome> {
                match (self, w) {
                    $((AnyGame::$variant(g), AnyWorld::$variant(w)) => g.ranked_outcome(w),)*
                    #[allow(unreachable_patterns)]
                    _ => unreachable!("world from another game"),
                }
            }
        }
    };
}

any_game! {
    Kuhn(Kuhn, KuhnWorld),
    Leduc(Leduc, LeducWorld),
    LiarsDice(LiarsDice, DiceWorld),
    Matrix(MatrixGame, MatrixWorld),
    SbForm(SbFormGame, SbWorld),
    River(River, RiverWorld),
}

pub fn make_game(spec: &GameSpec) -> Result<AnyGame> {
    Ok(match *spec {
        GameSpec::Kuhn => AnyGame::Kuhn(Kuhn),
        GameSpec::Leduc => AnyGame::Leduc(Leduc),
        GameSpec::RpsEfg => {
            AnyGame::Matrix(MatrixGame::new("rps_efg", NormalFormGame::rock_paper_scissors(), Timing::HiddenMove))
        }
        GameSpec::RpsNfg => {
            AnyGame::Matrix(MatrixGame::new("rps_nfg", NormalFormGame::rock_paper_scissors(), Timing::Simultaneous))
        }
        GameSpec::MpSeq => {
            AnyGame::Matrix(MatrixGame::new("mp_seq", NormalFormGame::matching_pennies(), Timing::HiddenMove))
        }
        GameSpec::MpSb => AnyGame::SbForm(sb_transform(&NormalFormGame::matching_pennies())?),
        GameSpec::LiarsDice { dice, faces } => {
            if dice == 0 || faces < 2 {
                return Err(Error::Config("liar's dice needs at least one die with two faces".into()));
            }
            // Bids are enumerated exhaustively; beyond ~20 the tree explodes.
            if 2 * dice * faces > 24 {
                return Err(Error::Config(format!("liars_dice:d={dice},f={faces} has too many bids to enumerate")));
            }
            AnyGame::LiarsDice(LiarsDice::new(dice, faces))
        }
        GameSpec::River(r) => AnyGame::River(River::new(&r)?),
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn parses_every_form() {
        assert_eq!("kuhn".parse::<GameSpec>().unwrap(), GameSpec::Kuhn);
        assert_eq!("liars_dice:d=1,f=4".parse::<GameSpec>().unwrap(), GameSpec::LiarsDice { dice: 1, faces: 4 });
        let r: GameSpec = "river:deck=20,hand=1,pot=200,stack=1000,abs=fcpa".parse().unwrap();
        assert_eq!(r, GameSpec::River(RiverSpec::default()));
        let reordered: GameSpec = "river:abs=apcf,stack=1000,deck=20".parse().unwrap();
        assert_eq!(reordered, r);
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| match s.parse::<GameSpec>() {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("chess"), 0);
        assert_eq!(pos("kuhn:d=1"), 4);
        assert_eq!(pos("liars_dice:d=x"), 13);
        assert_eq!(pos("liars_dice:d=1,q=2"), 15);
        assert_eq!(pos("river:deck=20,abs=fcx"), 20);
        assert_eq!(pos("river:deck"), 6);
        assert_eq!(pos("river:deck=1,deck=2"), 13);
    }

    #[test]
    fn infeasible_configs_are_config_errors() {
        for s in ["river:deck=8,hand=2", "river:pot=0", "river:abs=cpa", "liars_dice:d=0,f=4"] {
            let spec: GameSpec = s.parse().unwrap();
            assert!(matches!(make_game(&spec), Err(Error::Config(_))), "{s}");
        }
    }

    #[test]
    fn names_match_specs() {
        for spec in GameSpec::zoo() {
            let g = make_game(&spec).unwrap();
            if !matches!(spec, GameSpec::MpSb) {
                assert_eq!(g.name(), spec.to_string());
            }
        }
    }

    fn arb_spec() -> impl Strategy<Value = GameSpec> {
        let abs = (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>())
            .prop_map(|(fold, call, pot, all_in)| Abstraction { fold, call, pot, all_in });
        let river = (0u32..60, 0u32..4, 0u32..500, 0u32..5000, abs)
            .prop_map(|(deck, hand, pot, stack, abs)| GameSpec::River(RiverSpec { deck, hand, pot, stack, abs }));
        prop_oneof![
            Just(GameSpec::Kuhn),
            Just(GameSpec::Leduc),
            Just(GameSpec::RpsEfg),
            Just(GameSpec::RpsNfg),
            Just(GameSpec::MpSeq),
            Just(GameSpec::MpSb),
            (0u32..10, 0u32..10).prop_map(|(dice, faces)| GameSpec::LiarsDice { dice, faces }),
            river,
        ]
    }

    proptest! {
        #[test]
        fn spec_round_trips(spec in arb_spec()) {
            let text = spec.to_string();
            prop_assert_eq!(text.parse::<GameSpec>().unwrap(), spec);
        }
    }
}
