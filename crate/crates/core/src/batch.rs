//! Parameter sweeps over protocols, densities and non-compliance levels.

use crate::airspace::Airspace;
use crate::engine::{run_episode, MetricsReport};
use crate::protocols::ProtocolKind;
use crate::rng::derive_seed;
use crate::scenario::Scenario;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub protocols: Vec<ProtocolKind>,
    /// Aircraft per route.
    pub densities: Vec<usize>,
    pub noncompliance: Vec<f64>,
    pub episodes: usize,
    pub base_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            protocols: ProtocolKind::ALL.to_vec(),
            densities: vec![5, 10, 15, 20, 25],
            noncompliance: vec![0.0],
            episodes: 100,
            base_seed: 0,
        }
    }
}

/// Seed for one episode of one cell. Protocol and non-compliance level are
/// left out so every protocol faces the same draws.
pub fn cell_seed(base_seed: u64, density: usize, episode: usize) -> u64 {
    base_seed ^ derive_seed(0, "cell", density as u64, episode as u64)
}

/// One CSV row per episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRow {
    pub protocol: ProtocolKind,
    pub density: usize,
    pub p: f64,
    pub seed: u64,
    pub cross_corridor_los: u64,
    pub compliant_compliant_los: u64,
    pub compliant_noncompliant_los: u64,
    pub los_per_compliant_aircraft: f64,
    pub max_flight_time_s: f64,
    pub mean_halt_pct: f64,
    pub timeout_flag: u8,
    /// Empty unless the episode could not run.
    pub error: String,
}

impl EpisodeRow {
    fn from_report(density: usize, p: f64, r: &MetricsReport) -> Self {
        Self {
            protocol: r.protocol,
            density,
            p,
            seed: r.seed,
            cross_corridor_los: r.cross_corridor_los,
            compliant_compliant_los: r.compliant_compliant_los,
            compliant_noncompliant_los: r.compliant_noncompliant_los,
            los_per_compliant_aircraft: r.los_per_compliant_aircraft,
            max_flight_time_s: r.max_flight_time_s,
            mean_halt_pct: r.mean_halt_pct,
            timeout_flag: r.timeout as u8,
            error: String::new(),
        }
    }

    fn failed(protocol: ProtocolKind, density: usize, p: f64, seed: u64, error: String) -> Self {
        Self {
            protocol,
            density,
            p,
            seed,
            cross_corridor_los: 0,
            compliant_compliant_los: 0,
            compliant_noncompliant_los: 0,
            los_per_compliant_aircraft: 0.0,
            max_flight_time_s: 0.0,
            mean_halt_pct: 0.0,
            timeout_flag: 0,
            error,
        }
    }

    pub fn ok(&self) -> bool {
        self.error.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    protocol: ProtocolKind,
    density: usize,
    p: f64,
    episode: usize,
}

fn run_cell(scenario: &Scenario, airspace: &Option<Arc<Airspace>>, cell: Cell, base_seed: u64) -> EpisodeRow {
    let seed = cell_seed(base_seed, cell.density, cell.episode);
    let mut s = scenario.clone();
    s.protocol = cell.protocol;
    s.aircraft_per_route = cell.density;
    s.noncompliance = cell.p;
    s.seed = seed;
    for r in &mut s.routes {
        r.aircraft = None;
    }
    let fail = |e: String| EpisodeRow::failed(cell.protocol, cell.density, cell.p, seed, e);
    let Some(airspace) = airspace else {
        return fail("network is invalid".into());
    };
    if let Err(e) = s.validate() {
        return fail(e.to_string());
    }
    let config = s.engine_config();
    let per_route = s.per_route();
    let airspace = Arc::clone(airspace);
    match std::panic::catch_unwind(move || run_episode(airspace, &per_route, config)) {
        Ok(report) => EpisodeRow::from_report(cell.density, cell.p, &report),
        Err(_) => fail("episode panicked".into()),
    }
}

/// Run every (protocol, density, p, episode) cell in parallel. Rows come
/// back in that nesting order regardless of scheduling.
pub fn run_batch(sweep: &SweepConfig, scenario: &Scenario) -> Vec<EpisodeRow> {
    let airspace = scenario.airspace().ok().map(Arc::new);
    let mut cells = Vec::new();
    for &protocol in &sweep.protocols {
        for &density in &sweep.densities {
            for &p in &sweep.noncompliance {
                for episode in 0..sweep.episodes {
                    cells.push(Cell {
                        protocol,
                        density,
                        p,
                        episode,
                    });
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|&c| run_cell(scenario, &airspace, c, sweep.base_seed))
        .collect()
}

/// Mean and 95% normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub ci95: f64,
}

impl Estimate {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return Self { mean: f64::NAN, ci95: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return Self { mean, ci95: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            ci95: 1.96 * (var / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub protocol: ProtocolKind,
    pub density: usize,
    pub p: f64,
    pub episodes: usize,
    pub errors: usize,
    pub timeouts: usize,
    pub cross_corridor_los: Estimate,
    pub compliant_compliant_los: Estimate,
    pub compliant_noncompliant_los: Estimate,
    pub los_per_compliant_aircraft: Estimate,
    pub max_flight_time_s: Estimate,
    pub mean_halt_pct: Estimate,
}

/// Per-cell statistics over the rows that ran, in first-appearance order.
pub fn summarize(rows: &[EpisodeRow]) -> Vec<CellSummary> {
    let mut keys: Vec<(ProtocolKind, usize, u64)> = Vec::new();
    for r in rows {
        let k = (r.protocol, r.density, r.p.to_bits());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(protocol, density, pb)| {
            let cell: Vec<&EpisodeRow> = rows
                .iter()
                .filter(|r| r.protocol == protocol && r.density == density && r.p.to_bits() == pb)
                .collect();
            let ok: Vec<&&EpisodeRow> = cell.iter().filter(|r| r.ok()).collect();
            let est = |f: fn(&EpisodeRow) -> f64| Estimate::of(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
            CellSummary {
                protocol,
                density,
                p: f64::from_bits(pb),
                episodes: cell.len(),
                errors: cell.len() - ok.len(),
                timeouts: ok.iter().filter(|r| r.timeout_flag != 0).count(),
                cross_corridor_los: est(|r| r.cross_corridor_los as f64),
                compliant_compliant_los: est(|r| r.compliant_compliant_los as f64),
                compliant_noncompliant_los: est(|r| r.compliant_noncompliant_los as f64),
                los_per_compliant_aircraft: est(|r| r.los_per_compliant_aircraft),
                max_flight_time_s: est(|r| r.max_flight_time_s),
                mean_halt_pct: est(|r| r.mean_halt_pct),
            }
        })
        .collect()
}

pub fn write_rows_csv<W: Write>(out: W, rows: &[EpisodeRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(out: W, cells: &[CellSummary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let metrics = [
        "cross_corridor_los",
        "compliant_compliant_los",
        "compliant_noncompliant_los",
        "los_per_compliant_aircraft",
        "max_flight_time_s",
        "mean_halt_pct",
    ];
    let mut header = vec!["protocol", "density", "p", "episodes", "errors", "timeouts"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    for m in metrics {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_ci95"));
    }
    w.write_record(&header)?;
    for c in cells {
        let mut rec = vec![
            c.protocol.to_string(),
            c.density.to_string(),
            c.p.to_string(),
            c.episodes.to_string(),
            c.errors.to_string(),
            c.timeouts.to_string(),
        ];
        for e in [
            c.cross_corridor_los,
            c.compliant_compliant_los,
            c.compliant_noncompliant_los,
            c.los_per_compliant_aircraft,
            c.max_flight_time_s,
            c.mean_halt_pct,
        ] {
            rec.push(e.mean.to_string());
            rec.push(e.ci95.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
