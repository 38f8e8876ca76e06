//! Game fixtures shared by the solver benchmarks.

use pubcfr_core::{make_game, Algorithm, AnyGame, Result};

/// Benchmarked games, each paired with the solvers it supports.
pub const FIXTURES: &[(&str, &[Algorithm])] = &[
    ("kuhn", &[Algorithm::Vanilla, Algorithm::PublicState]),
    ("leduc", &[Algorithm::Vanilla, Algorithm::PublicState]),
    (
        "river:deck=20,hand=1,pot=200,stack=1000,abs=fcpa",
        &[Algorithm::Vanilla, Algorithm::PublicState, Algorithm::PublicStateDomain],
    ),
];

pub fn load(spec: &str) -> Result<AnyGame> {
    make_game(&spec.parse()?)
}

/// Short label for a game spec: its name without parameters.
pub fn label(spec: &str) -> &str {
    spec.split(':').next().unwrap_or(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pubcfr_core::cfr::new_solver;

    #[test]
    fn every_fixture_builds() {
        for &(spec, algos) in FIXTURES {
            let game = load(spec).unwrap();
            for &algo in algos {
                new_solver(&game, algo, Default::default()).unwrap();
            }
        }
        assert_eq!(label(FIXTURES[2].0), "river");
    }
}
