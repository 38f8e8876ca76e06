use proptest::prelude::*;
use pubcfr_core::eval::{exploitability_cadence, record_run};
use pubcfr_core::fosg::{walk_histories, START_TOKEN};
use pubcfr_core::*;

fn keyed(ev: &Evaluator, player: usize) -> Vec<(String, Vec<String>)> {
    let prefix = format!("{}:", player + 1);
    ev.uniform_policy()
        .iter()
        .filter(|(k, _, _)| k.starts_with(&prefix))
        .map(|(k, a, _)| (k.to_string(), a.to_vec()))
        .collect()
}

fn with_random(ev: &Evaluator, seeds: &[f64]) -> Policy {
    let mut p = ev.uniform_policy();
    let entries: Vec<(String, Vec<String>)> = p.iter().map(|(k, a, _)| (k.to_string(), a.to_vec())).collect();
    let mut i = 0;
    for (k, a) in entries {
        let w: Vec<f64> = (0..a.len())
            .map(|_| {
                i += 1;
                seeds[i % seeds.len()] + 1e-3
            })
            .collect();
        let s: f64 = w.iter().sum();
        p.insert(k, a, w.iter().map(|x| x / s).collect());
    }
    p
}

/// Best pure-strategy value for `player` by trying every pure strategy.
fn brute_force_br(ev: &Evaluator, profile: &Policy, player: usize) -> f64 {
    let infos = keyed(ev, player);
    let total: usize = infos.iter().map(|(_, a)| a.len()).product();
    let mut best = f64::NEG_INFINITY;
    for mut code in 0..total {
        let mut p = profile.clone();
        for (k, a) in &infos {
            let mut probs = vec![0.0; a.len()];
            probs[code % a.len()] = 1.0;
            code /= a.len();
            p.insert(k.clone(), a.clone(), probs);
        }
        best = best.max(ev.expected_values(&p).unwrap()[player]);
    }
    best
}

#[test]
fn kuhn_best_response_matches_brute_force() {
    let g = make_game(&GameSpec::Kuhn).unwrap();
    let ev = Evaluator::new(&g).unwrap();
    let profiles = [ev.uniform_policy(), with_random(&ev, &[0.3, 0.9, 0.1, 0.5, 0.7]), with_random(&ev, &[0.05, 0.6, 0.95])];
    for profile in &profiles {
        for player in 0..2 {
            let br = ev.best_response(profile, player).unwrap();
            let brute = brute_force_br(&ev, profile, player);
            assert!((br.value - brute).abs() < 1e-12, "{} vs {brute}", br.value);
            // The returned policy achieves the value.
            let mut p = profile.clone();
            for (k, a, probs) in br.policy.iter() {
                p.insert(k.to_string(), a.to_vec(), probs.to_vec());
            }
            assert!((ev.expected_values(&p).unwrap()[player] - br.value).abs() < 1e-12);
        }
    }
}

#[test]
fn kuhn_uniform_values_by_enumeration() {
    let g = make_game(&GameSpec::Kuhn).unwrap();
    fn value<G: Game>(g: &G, h: &History<G::World>) -> f64 {
        if h.is_terminal() {
            return h.utility()[0];
        }
        let step: f64 = (0..2).map(|p| 1.0 / g.legal_actions(h.world(), p).len() as f64).product();
        successors(g, h).unwrap().iter().map(|s| s.probability * step * value(g, &s.history)).sum()
    }
    let oracle = value(&g, &History::initial(&g));
    let ev = Evaluator::new(&g).unwrap();
    let got = ev.expected_values(&ev.uniform_policy()).unwrap();
    assert!((got[0] - oracle).abs() < 1e-15);
    assert_eq!(got[1], -got[0]);
    assert!(ev.exploitability(&ev.uniform_policy()).unwrap() > 0.0);
}

#[test]
fn matching_pennies_examples() {
    let g = make_game(&GameSpec::MpSeq).unwrap();
    let ev = Evaluator::new(&g).unwrap();
    let u = ev.uniform_policy();
    assert_eq!(expected_values(&g, &u).unwrap(), vec![0.0, 0.0]);
    assert_eq!(best_response_value(&g, &u, 0).unwrap().value, 0.0);
    assert_eq!(exploitability(&g, &u).unwrap(), 0.0);
}

#[test]
fn mp_code_book_value_is_zero() {
    let g = make_game(&GameSpec::MpSb).unwrap();
    let avg = cfr_solve(&g, Algorithm::Vanilla, 1000, |_| Ok(())).unwrap();
    let ev = Evaluator::new(&g).unwrap();
    assert!(ev.expected_values(&avg).unwrap()[0].abs() <= 1e-3);
    assert!(ev.exploitability(&avg).unwrap() <= 1e-3);
}

#[test]
fn exploitability_falls_over_doublings() {
    for spec in [GameSpec::Kuhn, GameSpec::Leduc] {
        let g = make_game(&spec).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        let mut s = pubcfr_core::cfr::new_solver(&g, Algorithm::PublicState, CfrOptions::default()).unwrap();
        let mut prev = f64::INFINITY;
        let mut t = 0;
        for k in 0..=11 {
            while t < 1 << k {
                s.iterate().unwrap();
                t += 1;
            }
            let e = ev.exploitability(&s.average_policy()).unwrap();
            assert!(e >= -1e-12);
            assert!(e <= prev * 1.05, "{spec}: {e} after {prev} at T={t}");
            prev = e;
        }
    }
}

#[test]
fn run_record_is_monotone() {
    let g = make_game(&GameSpec::Leduc).unwrap();
    let ev = Evaluator::new(&g).unwrap();
    let iterations = 100;
    let cadence = exploitability_cadence(iterations);
    let (policy, rec) = record_run(&g, Algorithm::PublicState, CfrOptions::default(), iterations, Some(cadence), Some(&ev)).unwrap();
    assert_eq!(rec.rows().len(), iterations);
    for w in rec.rows().windows(2) {
        assert!(w[1].iteration == w[0].iteration + 1);
        assert!(w[1].value_updates >= w[0].value_updates);
        assert!(w[1].wall_ms >= w[0].wall_ms);
    }
    let sampled: Vec<usize> = rec.rows().iter().filter(|r| r.exploitability.is_some()).map(|r| r.iteration).collect();
    assert_eq!(sampled, (1..=iterations).filter(|t| t % cadence == 0 || *t == iterations).collect::<Vec<_>>());
    let last = rec.last(Algorithm::PublicState).unwrap();
    assert_eq!(last.exploitability.unwrap(), ev.exploitability(&policy).unwrap());
    assert!(record_run(&g, Algorithm::Vanilla, CfrOptions::default(), 0, None, None).is_err());
}

/// Three players each pass a token in turn; nothing is at stake.
struct Relay;

impl Game for Relay {
    type World = u8;

    fn name(&self) -> String {
        "relay".into()
    }
    fn num_players(&self) -> usize {
        3
    }
    fn initial_world(&self) -> u8 {
        0
    }
    fn active_players(&self, w: &u8) -> Vec<Player> {
        if (1..=3).contains(w) {
            vec![*w as usize - 1]
        } else {
            Vec::new()
        }
    }
    fn player_actions(&self, _w: &u8, _player: Player) -> Vec<Action> {
        vec![Action(0), Action(1)]
    }
    fn is_terminal(&self, w: &u8) -> bool {
        *w == 4
    }
    fn transition(&self, w: &u8, _joint: &[Action]) -> Vec<(u8, f64)> {
        if *w < 4 {
            vec![(w + 1, 1.0)]
        } else {
            Vec::new()
        }
    }
    fn reward(&self, _w: &u8, _joint: &[Action], _next: &u8) -> Vec<f64> {
        vec![0.0; 3]
    }
    fn observe(&self, w: &u8, joint: &[Action], _next: &u8) -> Observation {
        match *w {
            0 => Observation::public(3, START_TOKEN),
            p => Observation::public(3, self.action_token(p as usize - 1, joint[p as usize - 1])),
        }
    }
    fn action_token(&self, _player: Player, action: Action) -> String {
        format!("a{}", action.index())
    }
}

#[test]
fn best_response_needs_two_players() {
    let ev = Evaluator::new(&Relay).unwrap();
    let u = ev.uniform_policy();
    assert_eq!(ev.expected_values(&u).unwrap(), vec![0.0; 3]);
    assert!(matches!(ev.best_response(&u, 0), Err(Error::Unsupported(_))));
    let mut histories = 0;
    walk_histories(&Relay, |_| {
        histories += 1;
        Ok(())
    })
    .unwrap();
    assert_eq!(histories, 1 + 1 + 2 + 4 + 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn best_response_dominates_expected_value(
        seeds in prop::collection::vec(0.0f64..1.0, 1..40),
        leduc in any::<bool>(),
    ) {
        let spec = if leduc { GameSpec::Leduc } else { GameSpec::Kuhn };
        let g = make_game(&spec).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        let p = with_random(&ev, &seeds);
        let values = ev.expected_values(&p).unwrap();
        for (player, &v) in values.iter().enumerate() {
            prop_assert!(ev.best_response(&p, player).unwrap().value >= v - 1e-12);
        }
        prop_assert!(ev.exploitability(&p).unwrap() >= -1e-12);
    }
}
