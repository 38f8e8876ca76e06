use std::fmt::Write as _;

use super::Evaluator;
use crate::cfr::{new_solver, Algorithm, CfrOptions, Counters, Policy, Solver};
use crate::error::{contract, Result};
use crate::fosg::Game;

#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub iteration: usize,
    pub algorithm: Algorithm,
    pub exploitability: Option<f64>,
    pub value_updates: u64,
    pub wall_ms: f64,
    pub counters: Counters,
}

/// Per-iteration log of one or more solver runs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunRecord {
    rows: Vec<RunRow>,
}

pub const CSV_HEADER: &str = "iter,algo,exploitability,value_updates_cum,wall_ms";

impl RunRecord {
    pub fn new() -> RunRecord {
        RunRecord::default()
    }

    /// Appends a row. Within one algorithm, iterations must increase and
    /// cumulative counters must not shrink.
    pub fn push(&mut self, row: RunRow) -> Result<()> {
        if let Some(prev) = self.rows.iter().rev().find(|r| r.algorithm == row.algorithm) {
            if row.iteration <= prev.iteration {
                return contract(format!("{} row {} after row {}", row.algorithm, row.iteration, prev.iteration));
            }
            if row.value_updates < prev.value_updates || row.wall_ms < prev.wall_ms {
                return contract(format!("{} counters decreased at row {}", row.algorithm, row.iteration));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[RunRow] {
        &self.rows
    }

    pub fn extend(&mut self, other: RunRecord) -> Result<()> {
        for row in other.rows {
            self.push(row)?;
        }
        Ok(())
    }

    pub fn last(&self, algorithm: Algorithm) -> Option<&RunRow> {
        self.rows.iter().rev().find(|r| r.algorithm == algorithm)
    }

    /// CSV text. Without wall time the cell is written as 0 so the file only
    /// depends on the inputs.
    pub fn to_csv(&self, wall_time: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let expl = r.exploitability.map(|e| format!("{e:.12e}")).unwrap_or_default();
            let wall = if wall_time { format!("{:.3}", r.wall_ms) } else { "0".into() };
            let _ = writeln!(out, "{},{},{},{},{}", r.iteration, r.algorithm, expl, r.value_updates, wall);
        }
        out
    }
}

/// Sampling interval for exploitability over a run of `iterations`.
pub fn exploitability_cadence(iterations: usize) -> usize {
    iterations.div_ceil(64).max(1)
}

/// Runs `iterations` of `algorithm`, logging every iteration and measuring
/// the average strategy's exploitability every `cadence` iterations and at
/// the end. The evaluator is only needed when exploitability is sampled.
pub fn record_run<G: Game>(
    game: &G,
    algorithm: Algorithm,
    options: CfrOptions,
    iterations: usize,
    cadence: Option<usize>,
    evaluator: Option<&Evaluator>,
) -> Result<(Policy, RunRecord)> {
    if iterations == 0 {
        return contract("at least one iteration is required");
    }
    let mut solver = new_solver(game, algorithm, options)?;
    let record = record_solver(solver.as_mut(), iterations, cadence, evaluator)?;
    Ok((solver.average_policy(), record))
}

/// [`record_run`] on a solver the caller keeps, continuing from wherever it
/// stands.
pub fn record_solver(
    solver: &mut dyn Solver,
    iterations: usize,
    cadence: Option<usize>,
    evaluator: Option<&Evaluator>,
) -> Result<RunRecord> {
    let mut record = RunRecord::new();
    let end = solver.iterations() + iterations;
    for _ in 0..iterations {
        solver.iterate()?;
        let t = solver.iterations();
        let sampled = match (cadence, evaluator) {
            (Some(k), Some(ev)) if t % k.max(1) == 0 || t == end => Some(ev.exploitability(&solver.average_policy())?),
            _ => None,
        };
        let c = solver.counters();
        record.push(RunRow {
            iteration: t,
            algorithm: solver.algorithm(),
            exploitability: sampled,
            value_updates: c.value_updates(),
            wall_ms: c.wall_nanoseconds as f64 / 1e6,
            counters: c,
        })?;
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_game, GameSpec};

    #[test]
    fn cadence() {
        assert_eq!(exploitability_cadence(1), 1);
        assert_eq!(exploitability_cadence(64), 1);
        assert_eq!(exploitability_cadence(65), 2);
        assert_eq!(exploitability_cadence(1000), 16);
    }

    #[test]
    fn csv_shape_and_order() {
        let g = make_game(&GameSpec::Kuhn).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        let (_, rec) = record_run(&g, Algorithm::Vanilla, CfrOptions::default(), 10, Some(4), Some(&ev)).unwrap();
        let csv = rec.to_csv(false);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 11);
        assert!(lines[1].starts_with("1,vanilla,,"));
        assert!(lines[4].split(',').nth(2).unwrap().parse::<f64>().is_ok());
        assert!(!lines[10].split(',').nth(2).unwrap().is_empty());
        assert_eq!(csv, record_run(&g, Algorithm::Vanilla, CfrOptions::default(), 10, Some(4), Some(&ev)).unwrap().1.to_csv(false));

        let mut bad = RunRecord::new();
        let row = rec.rows()[3].clone();
        bad.push(row.clone()).unwrap();
        assert!(bad.push(rec.rows()[1].clone()).is_err());
    }
}
