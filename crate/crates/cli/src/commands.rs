use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use pubcfr_core::cfr::{new_solver, Solver};
use pubcfr_core::eval::{exploitability_cadence, record_solver, RunRow};
use pubcfr_core::fosg::Condition;
use pubcfr_core::*;
use serde_json::json;

use crate::strategy::write_strategy;
use crate::svg::{Plot, Series};
use crate::{BenchArgs, CliError, Command, MatrixId, SolveArgs, EXIT_THRESHOLD};

type Out<'a> = &'a mut dyn Write;

const EQUIVALENCE_TOLERANCE: f64 = 1e-9;
const VALUE_TOLERANCE: f64 = 1e-3;
const BYTES_PER_ENTRY: usize = std::mem::size_of::<f64>();

pub fn execute(command: Command, out: Out) -> Result<i32, CliError> {
    match command {
        Command::Info { game } => info(&game, out),
        Command::CheckSbg { game } => check(&game, out),
        Command::Solve(args) => solve(args, out),
        Command::Compare { game, iters, cadence } => compare(&game, iters as usize, cadence as usize, out),
        Command::Bench(args) => bench(args, out),
        Command::Transform { game, out: path, iters } => transform(game, &path, iters as usize, out),
    }
}

fn say(out: Out, line: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(out, "{}", line.as_ref()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Fails unless `path` could be created: its directory exists and it is not
/// itself a directory.
fn check_writable(path: &Path) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(CliError::Invalid(format!("{}: directory {} does not exist", path.display(), dir.display())));
    }
    if path.is_dir() {
        return Err(CliError::Invalid(format!("{} is a directory", path.display())));
    }
    Ok(())
}

/// An evaluator when exploitability is defined for the game.
fn evaluator(game: &AnyGame) -> Result<Option<Evaluator>, CliError> {
    if game.num_players() != 2 {
        return Ok(None);
    }
    let ev = Evaluator::new(game)?;
    Ok(ev.tree().is_zero_sum().then_some(ev))
}

fn info(spec: &GameSpec, out: Out) -> Result<i32, CliError> {
    let game = make_game(spec)?;
    let c = enumerate_counts(&game)?;
    let report = check_sbg(&game)?;
    let split = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+");
    say(out, format!("game: {spec}"))?;
    say(out, format!("players={}", game.num_players()))?;
    say(out, format!("histories={}", c.num_histories))?;
    say(out, format!("terminals={}", c.num_terminals))?;
    say(out, format!("infostates={} ({})", c.total_infostates(), split(&c.num_infostates)))?;
    say(out, format!("decision infostates={} ({})", c.total_decision_infostates(), split(&c.num_decision_infostates)))?;
    say(out, format!("public states={}", c.num_public_states))?;
    say(out, format!("max private per public={}", c.max_private_per_public))?;
    say(out, format!("SBG: {report}"))?;
    Ok(0)
}

fn describe(c: Condition) -> &'static str {
    match c {
        Condition::NoPrivateObservations => "no private observations after the start",
        Condition::PublicLegalActions => "legal actions depend on public information only",
        Condition::PublicActions => "every action is publicly observed",
    }
}

fn check(spec: &GameSpec, out: Out) -> Result<i32, CliError> {
    let game = make_game(spec)?;
    let report = check_sbg(&game)?;
    say(out, format!("game: {spec}"))?;
    for c in Condition::ALL {
        match report.witness(c) {
            None => say(out, format!("condition {} ({}): pass", c.numeral(), describe(c)))?,
            Some(w) => say(out, format!("condition {} ({}): fail, witness {w}", c.numeral(), describe(c)))?,
        }
    }
    say(out, format!("SBG: {report}"))?;
    Ok(0)
}

fn solve(args: SolveArgs, out: Out) -> Result<i32, CliError> {
    for path in args.strategy_out.iter().chain(&args.csv_out) {
        check_writable(path)?;
    }
    let game = make_game(&args.game)?;
    let iters = args.iters as usize;
    let mut solver = new_solver(&game, args.algo, args.run.options())?;
    let ev = evaluator(&game)?;
    let cadence = args.run.cadence.map_or(exploitability_cadence(iters), |k| k as usize);
    let record = record_solver(solver.as_mut(), iters, Some(cadence), ev.as_ref())?;
    let average = solver.average_policy();

    if let Some(path) = &args.strategy_out {
        write_file(path, &write_strategy(&average))?;
    }
    if let Some(path) = &args.csv_out {
        write_file(path, &record.to_csv(!args.run.no_wall_time))?;
    }
    let c = solver.counters();
    say(out, format!("game: {}", args.game))?;
    say(out, format!("algorithm: {}", args.algo))?;
    say(out, format!("iterations: {iters}"))?;
    say(out, format!("seed: {}", args.run.seed))?;
    if let Some(ev) = &ev {
        let last = record.rows().last().and_then(|r| r.exploitability).expect("final row is sampled");
        say(out, format!("exploitability: {last:.6e}"))?;
        let v = ev.expected_values(&average)?;
        say(out, format!("values: {:.9} {:.9}", v[0], v[1]))?;
    }
    say(out, format!("histories touched: {}", c.histories_touched))?;
    say(out, format!("value updates: {}", c.value_updates()))?;
    say(out, format!("terminal eval ops: {}", c.terminal_eval_ops))?;
    say(out, format!("table entries: {}", solver.table_entries()))?;
    if !args.run.no_wall_time {
        say(out, format!("wall ms: {:.3}", c.wall_nanoseconds as f64 / 1e6))?;
    }
    Ok(0)
}

fn compare(spec: &GameSpec, iters: usize, cadence: usize, out: Out) -> Result<i32, CliError> {
    let game = make_game(spec)?;
    let ev = evaluator(&game)?;
    let options = CfrOptions::default();
    let mut vanilla = new_solver(&game, Algorithm::Vanilla, options)?;
    let mut ps = new_solver(&game, Algorithm::PublicState, options)?;
    let mut gap: f64 = 0.0;
    let mut finals = None;
    for t in 1..=iters {
        vanilla.iterate()?;
        ps.iterate()?;
        if let Some(ev) = &ev {
            if t % cadence == 0 || t == iters {
                let a = ev.exploitability(&vanilla.average_policy())?;
                let b = ev.exploitability(&ps.average_policy())?;
                gap = gap.max((a - b).abs());
                finals = Some((a, b));
            }
        }
    }
    let distance = strategy_distance(&vanilla.average_policy(), &ps.average_policy());
    let ok = distance <= EQUIVALENCE_TOLERANCE;
    say(out, format!("game: {spec}"))?;
    say(out, format!("iterations: {iters}"))?;
    say(out, format!("max strategy distance: {distance:.3e}"))?;
    if let Some((a, b)) = finals {
        say(out, format!("max exploitability gap: {gap:.3e}"))?;
        say(out, format!("final exploitability: vanilla {a:.6e} ps {b:.6e}"))?;
    }
    let (cv, cp) = (vanilla.counters(), ps.counters());
    say(out, format!("value updates: vanilla {} ps {}", cv.value_updates(), cp.value_updates()))?;
    say(out, format!("result: {} (tolerance {EQUIVALENCE_TOLERANCE:e})", if ok { "PASS" } else { "FAIL" }))?;
    Ok(if ok { 0 } else { EXIT_THRESHOLD })
}

struct BenchRow {
    algorithm: Algorithm,
    setup_ms: f64,
    run_ms: f64,
    entries: usize,
    exploitability: Option<f64>,
    value: Option<f64>,
    updates_per_iteration: f64,
}

fn bench(args: BenchArgs, out: Out) -> Result<i32, CliError> {
    if args.algos.is_empty() {
        return Err(CliError::Invalid("at least one algorithm is required".into()));
    }
    if args.out_dir.exists() && !args.out_dir.is_dir() {
        return Err(CliError::Invalid(format!("{} is not a directory", args.out_dir.display())));
    }
    let game = make_game(&args.game)?;
    let iters = args.iters as usize;
    let options = args.run.options();
    // Every pairing is validated before anything runs or is written.
    let mut solvers: Vec<Box<dyn Solver + '_>> =
        args.algos.iter().map(|&a| new_solver(&game, a, options)).collect::<Result<_>>()?;
    let ev = evaluator(&game)?;
    let cadence = args.run.cadence.map_or(exploitability_cadence(iters), |k| k as usize);
    let wall = !args.run.no_wall_time;

    let mut record = RunRecord::new();
    let mut rows = Vec::new();
    for solver in solvers.iter_mut() {
        let run = record_solver(solver.as_mut(), iters, Some(cadence), ev.as_ref())?;
        let c = solver.counters();
        let average = solver.average_policy();
        rows.push(BenchRow {
            algorithm: solver.algorithm(),
            setup_ms: if wall { solver.setup_nanoseconds() as f64 / 1e6 } else { 0.0 },
            run_ms: if wall { c.wall_nanoseconds as f64 / 1e6 } else { 0.0 },
            entries: solver.table_entries(),
            exploitability: run.rows().last().and_then(|r| r.exploitability),
            value: ev.as_ref().map(|ev| ev.expected_values(&average).map(|v| v[0])).transpose()?,
            updates_per_iteration: c.value_updates() as f64 / iters as f64,
        });
        record.extend(run)?;
    }

    fs::create_dir_all(&args.out_dir).map_err(|source| CliError::Io { path: args.out_dir.clone(), source })?;
    let path = |name: &str| -> PathBuf { args.out_dir.join(name) };
    write_file(&path("run.csv"), &record.to_csv(wall))?;
    write_file(&path("timing.csv"), &timing_csv(&rows, iters))?;
    write_file(&path("convergence.svg"), &convergence_plot(&args.game, &record).render())?;
    write_file(&path("updates.svg"), &updates_plot(&args.game, &record).render())?;

    say(out, format!("game: {}", args.game))?;
    say(out, format!("iterations: {iters}"))?;
    say(out, format!("seed: {}", args.run.seed))?;
    say(
        out,
        format!(
            "{:<10} {:>12} {:>12} {:>14} {:>14} {:>14} {:>14} {:>12}",
            "algo", "setup_ms", "total_ms", "per_iter_ms", "table_entries", "est_bytes", "exploitability", "value_p1"
        ),
    )?;
    for r in &rows {
        say(
            out,
            format!(
                "{:<10} {:>12.3} {:>12.3} {:>14.4} {:>14} {:>14} {:>14} {:>12}",
                r.algorithm.tag(),
                r.setup_ms,
                r.setup_ms + r.run_ms,
                r.run_ms / iters as f64,
                r.entries,
                r.entries * BYTES_PER_ENTRY,
                r.exploitability.map_or("-".into(), |e| format!("{e:.4e}")),
                r.value.map_or("-".into(), |v| format!("{v:.6}")),
            ),
        )?;
    }
    let per = |a: Algorithm| rows.iter().find(|r| r.algorithm == a).map(|r| r.updates_per_iteration);
    if let (Some(v), Some(p)) = (per(Algorithm::Vanilla), per(Algorithm::PublicState)) {
        say(out, format!("value updates per iteration: vanilla {v:.0} ps {p:.0} ratio {:.2}", v / p))?;
    }
    say(out, format!("wrote {}", args.out_dir.display()))?;
    Ok(0)
}

fn timing_csv(rows: &[BenchRow], iters: usize) -> String {
    let mut s = String::from(
        "algo,setup_ms,total_ms,per_iteration_ms,table_entries,table_bytes,final_exploitability,value_updates_per_iteration\n",
    );
    for r in rows {
        s.push_str(&format!(
            "{},{:.3},{:.3},{:.6},{},{},{},{:.1}\n",
            r.algorithm,
            r.setup_ms,
            r.setup_ms + r.run_ms,
            r.run_ms / iters as f64,
            r.entries,
            r.entries * BYTES_PER_ENTRY,
            r.exploitability.map_or(String::new(), |e| format!("{e:.12e}")),
            r.updates_per_iteration,
        ));
    }
    s
}

fn by_algorithm(record: &RunRecord, point: impl Fn(&RunRow) -> Option<(f64, f64)>) -> Vec<Series> {
    let mut algos: Vec<Algorithm> = record.rows().iter().map(|r| r.algorithm).collect();
    algos.dedup();
    algos
        .into_iter()
        .map(|a| Series {
            name: a.tag().to_string(),
            points: record.rows().iter().filter(|r| r.algorithm == a).filter_map(&point).collect(),
        })
        .collect()
}

fn convergence_plot(spec: &GameSpec, record: &RunRecord) -> Plot {
    Plot {
        title: format!("{spec}: exploitability"),
        x_label: "cumulative value updates".into(),
        y_label: "exploitability".into(),
        log_x: true,
        log_y: true,
        series: by_algorithm(record, |r| r.exploitability.map(|e| (r.value_updates as f64, e))),
    }
}

fn updates_plot(spec: &GameSpec, record: &RunRecord) -> Plot {
    Plot {
        title: format!("{spec}: value updates"),
        x_label: "iteration".into(),
        y_label: "cumulative value updates".into(),
        log_x: false,
        log_y: true,
        series: by_algorithm(record, |r| Some((r.iteration as f64, r.value_updates as f64))),
    }
}

fn transform(id: MatrixId, path: &Path, iters: usize, out: Out) -> Result<i32, CliError> {
    check_writable(path)?;
    let (matrix, original_spec) = match id {
        MatrixId::Mp => (NormalFormGame::matching_pennies(), GameSpec::MpSeq),
        MatrixId::Rps => (NormalFormGame::rock_paper_scissors(), GameSpec::RpsNfg),
    };
    let sb = sb_transform(&matrix)?;
    let payoffs: Vec<Vec<Vec<f64>>> = (0..2)
        .map(|p| {
            (0..matrix.labels[0].len())
                .map(|r| (0..matrix.labels[1].len()).map(|c| matrix.payoff(p, r, c)).collect())
                .collect()
        })
        .collect();
    let books: Vec<_> = sb
        .books
        .iter()
        .enumerate()
        .map(|(b, book)| {
            let encode: serde_json::Map<String, serde_json::Value> =
                book.iter().enumerate().map(|(k, &code)| (matrix.labels[0][k].clone(), json!(sb.codes[code]))).collect();
            json!({ "index": b, "probability": 1.0 / sb.books.len() as f64, "encode": encode })
        })
        .collect();
    let description = json!({
        "name": sb.name(),
        "original": { "name": matrix.name, "actions": matrix.labels, "payoffs": payoffs },
        "codes": sb.codes,
        "books": books,
        "rounds": [
            "chance deals a code book, observed privately by player 1",
            "player 1 announces a code, observed publicly",
            "player 2 responds, observed publicly; player 1's action is the decoded code",
        ],
    });
    let text = serde_json::to_string_pretty(&description).map_err(|e| CliError::Invalid(e.to_string()))?;
    write_file(path, &(text + "\n"))?;

    let report = check_sbg(&sb)?;
    let sb_value = solved_value(&sb, iters)?;
    let original = make_game(&original_spec)?;
    let original_value = solved_value(&original, iters)?;
    let parity = (sb_value.0 - original_value.0).abs();
    let ok = report.is_sbg() && parity <= VALUE_TOLERANCE && sb_value.0.abs() <= VALUE_TOLERANCE;
    say(out, format!("transform: {} -> {}", matrix.name, path.display()))?;
    say(out, format!("code books: {}", sb.books.len()))?;
    say(out, format!("SBG: {report}"))?;
    say(out, format!("value after {iters} iterations: transformed {:.6} (exploitability {:.3e})", sb_value.0, sb_value.1))?;
    say(out, format!("value after {iters} iterations: {original_spec} {:.6} (exploitability {:.3e})", original_value.0, original_value.1))?;
    say(out, format!("parity: {} (gap {parity:.3e}, tolerance {VALUE_TOLERANCE:e})", if ok { "PASS" } else { "FAIL" }))?;
    Ok(if ok { 0 } else { EXIT_THRESHOLD })
}

/// Player 1's value and the exploitability of the vanilla average.
fn solved_value<G: Game>(game: &G, iters: usize) -> Result<(f64, f64), CliError> {
    let avg = cfr_solve(game, Algorithm::Vanilla, iters, |_| Ok(()))?;
    let ev = Evaluator::new(game)?;
    Ok((ev.expected_values(&avg)?[0], ev.exploitability(&avg)?))
}
