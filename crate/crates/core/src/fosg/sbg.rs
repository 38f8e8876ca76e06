//! Checker for the three sequential-Bayesian-game conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use super::{infostate_of, joint_actions, walk_histories, Game, History};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// (i) after the initial transition every player observes the same thing.
    NoPrivateObservations,
    /// (ii) legal actions are determined by the public state.
    PublicLegalActions,
    /// (iii) different actions always produce different public observations.
    PublicActions,
}

impl Condition {
    pub const ALL: [Condition; 3] =
        [Condition::NoPrivateObservations, Condition::PublicLegalActions, Condition::PublicActions];

    pub fn numeral(self) -> &'static str {
        match self {
            Condition::NoPrivateObservations => "i",
            Condition::PublicLegalActions => "ii",
            Condition::PublicActions => "iii",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.numeral())
    }
}

/// Verdict per condition; a failed condition carries its smallest witness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SbgReport {
    pub witnesses: BTreeMap<Condition, String>,
}

impl SbgReport {
    pub fn is_sbg(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn passes(&self, c: Condition) -> bool {
        !self.witnesses.contains_key(&c)
    }

    pub fn failed(&self) -> Vec<Condition> {
        self.witnesses.keys().copied().collect()
    }

    pub fn witness(&self, c: Condition) -> Option<&str> {
        self.witnesses.get(&c).map(String::as_str)
    }

    fn note(&mut self, c: Condition, witness: String) {
        match self.witnesses.get_mut(&c) {
            Some(w) if *w <= witness => {}
            Some(w) => *w = witness,
            None => {
                self.witnesses.insert(c, witness);
            }
        }
    }
}

impl fmt::Display for SbgReport {
    /// `pass`, or `fail(i,iii)` listing the failed conditions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sbg() {
            f.write_str("pass")
        } else {
            write!(f, "fail({})", self.failed().iter().map(|c| c.numeral()).join(","))
        }
    }
}

/// Checks every condition over every history of `game`.
pub fn check_sbg<G: Game>(game: &G) -> Result<SbgReport> {
    let mut checker = Checker::new(game);
    walk_histories(game, |h| {
        checker.visit(h);
        Ok(())
    })?;
    Ok(checker.finish())
}

/// Checks the conditions over an explicit list of histories. The verdict and
/// the witnesses do not depend on the order of `histories`.
pub fn check_sbg_histories<G: Game>(game: &G, histories: &[History<G::World>]) -> Result<SbgReport> {
    let mut checker = Checker::new(game);
    for h in histories {
        checker.visit(h);
    }
    Ok(checker.finish())
}

struct Checker<'g, G: Game> {
    game: &'g G,
    report: SbgReport,
    legal_by_public: BTreeMap<String, BTreeMap<Vec<Vec<String>>, String>>,
}

impl<'g, G: Game> Checker<'g, G> {
    fn new(game: &'g G) -> Self {
        Checker { game, report: SbgReport::default(), legal_by_public: BTreeMap::new() }
    }

    fn visit(&mut self, h: &History<G::World>) {
        let game = self.game;
        let n = game.num_players();
        let report = &mut self.report;
        let public = infostate_of(game, h, 0).public_key();
        let legal: Vec<Vec<String>> = (0..n)
            .map(|p| game.legal_actions(h.world(), p).into_iter().map(|a| game.token(p, a)).collect())
            .collect();
        let here = h.describe(game);
        let classes = self.legal_by_public.entry(public).or_default();
        match classes.get_mut(&legal) {
            Some(w) if here < *w => *w = here.clone(),
            Some(_) => {}
            None => {
                classes.insert(legal, here.clone());
            }
        }

        if h.is_terminal() {
            return;
        }
        let world = h.world();
        // Joint actions grouped by the public observation they can emit.
        let mut by_public: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for joint in joint_actions(game, world) {
            let tokens = joint.iter().enumerate().map(|(p, &a)| game.token(p, a)).join(",");
            for outcome in game.step(world, &joint) {
                let obs = outcome.observation;
                if !h.is_initial() && obs.private.iter().any(|o| *o != obs.private[0]) {
                    report.note(
                        Condition::NoPrivateObservations,
                        format!("{here} [{tokens}]->{}({})", obs.public, obs.private.join(",")),
                    );
                }
                by_public.entry(obs.public).or_default().insert(tokens.clone());
            }
        }
        for (public, joints) in by_public {
            if joints.len() > 1 {
                let mut it = joints.iter();
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                report.note(Condition::PublicActions, format!("{here} [{a}] and [{b}] both emit {public}"));
            }
        }
    }

    fn finish(mut self) -> SbgReport {
        for (public, classes) in self.legal_by_public {
            if classes.len() > 1 {
                let mut paths: Vec<String> = classes.into_values().collect();
                paths.sort();
                self.report.note(
                    Condition::PublicLegalActions,
                    format!("public state [{public}]: {} vs {}", paths[0], paths[1]),
                );
            }
        }
        self.report
    }
}
