use std::fmt;

use super::{push_token, Game, History, Player};
use crate::error::{Error, Result};

/// What a player knows: their private observations and own actions, and the
/// public observation sequence.
///
/// Rendered as `<player>:<private tokens joined by '/'>|<public tokens joined
/// by '/'>`, with players numbered from 1 in the key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoState {
    pub player: Player,
    pub private: Vec<String>,
    pub public: Vec<String>,
}

impl InfoState {
    pub fn key(&self) -> String {
        format!("{}:{}|{}", self.player + 1, self.private_key(), self.public_key())
    }

    pub fn private_key(&self) -> String {
        self.private.join("/")
    }

    /// Key of the public state this infostate belongs to.
    pub fn public_key(&self) -> String {
        self.public.join("/")
    }

    pub fn parse(key: &str) -> Result<InfoState> {
        let err = |position: usize, message: &str| Error::Parse { position, message: message.to_string() };
        let (player, rest) = key.split_once(':').ok_or_else(|| err(0, "missing ':'"))?;
        let player: usize = player.parse().map_err(|_| err(0, "player index is not a number"))?;
        if player == 0 {
            return Err(err(0, "players are numbered from 1"));
        }
        let (private, public) = rest
            .split_once('|')
            .ok_or_else(|| err(key.len(), "missing '|'"))?;
        let tokens = |s: &str| -> Vec<String> {
            if s.is_empty() {
                Vec::new()
            } else {
                s.split('/').map(str::to_string).collect()
            }
        };
        Ok(InfoState { player: player - 1, private: tokens(private), public: tokens(public) })
    }
}

impl fmt::Display for InfoState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Player `i`'s infostate at the end of `h`.
pub fn infostate_of<G: Game>(game: &G, h: &History<G::World>, player: Player) -> InfoState {
    let mut private = String::new();
    let mut public = String::new();
    for (joint, obs) in h.actions().iter().zip(h.observations()) {
        let own = joint[player];
        if !own.is_noop() {
            push_token(&mut private, &game.action_token(player, own));
        }
        push_token(&mut private, &obs.private[player]);
        push_token(&mut public, &obs.public);
    }
    let split = |s: String| -> Vec<String> {
        if s.is_empty() {
            Vec::new()
        } else {
            s.split('/').map(str::to_string).collect()
        }
    };
    InfoState { player, private: split(private), public: split(public) }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn renders_grammar() {
        let s = InfoState {
            player: 0,
            private: vec!["J".into(), "p".into()],
            public: vec!["start".into(), "p".into(), "b".into()],
        };
        assert_eq!(s.key(), "1:J/p|start/p/b");
        assert_eq!(s.public_key(), "start/p/b");
    }

    #[test]
    fn rejects_malformed_keys() {
        assert!(InfoState::parse("J|start").is_err());
        assert!(InfoState::parse("0:J|start").is_err());
        assert!(InfoState::parse("1:J").is_err());
        assert!(InfoState::parse("x:J|start").is_err());
    }

    proptest! {
        #[test]
        fn key_round_trips(
            player in 0usize..4,
            private in prop::collection::vec("[A-Za-z0-9=,.+-]{1,4}", 0..5),
            public in prop::collection::vec("[A-Za-z0-9=,.+-]{1,4}", 0..6),
        ) {
            let s = InfoState { player, private, public };
            let parsed = InfoState::parse(&s.key()).unwrap();
            prop_assert_eq!(&parsed, &s);
            prop_assert_eq!(parsed.key(), s.key());
        }
    }
}
