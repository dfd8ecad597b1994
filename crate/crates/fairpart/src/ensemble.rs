//! Batch harness: run the solvers over seeded random polygons and aggregate
//! the outcomes into a single report.
//!
//! Every run is driven purely by (seed, count, vertex range, solver
//! settings), so two runs of the same configuration produce the same
//! polygons, the same solutions, and the same aggregates; only the recorded
//! runtimes vary.

use std::time::Instant;

use serde::Serialize;

use crate::bisect::fair_ranges;
use crate::error::{Error, Result};
use crate::gen::random_polygon_suite;
use crate::partition::{fair_partition, SolverConfig};

/// Parameters of one ensemble run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RunConfig {
    /// Requested piece count; a power of two ≥ 2.
    pub n: u64,
    pub count: usize,
    /// Inclusive vertex-count range for the generator.
    pub vertices: (usize, usize),
    pub seed: u64,
    pub theta_samples: usize,
    pub area_tol: f64,
    pub perim_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        RunConfig {
            n: 2,
            count: 100,
            vertices: (3, 12),
            seed: 1,
            theta_samples: solver.theta_samples,
            area_tol: solver.area_tol,
            perim_tol: solver.perim_tol,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(Error::UnsupportedPieceCount { n: self.n });
        }
        if self.theta_samples < 64 {
            return Err(Error::InvalidInput(format!(
                "theta_samples must be at least 64, got {}",
                self.theta_samples
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidInput("ensemble count must be positive".into()));
        }
        if self.vertices.0 < 3 || self.vertices.1 < self.vertices.0 {
            return Err(Error::InvalidInput(format!(
                "vertex range {}..{} is invalid (need 3 <= lo <= hi)",
                self.vertices.0, self.vertices.1
            )));
        }
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            theta_samples: self.theta_samples,
            area_tol: self.area_tol,
            perim_tol: self.perim_tol,
            ..SolverConfig::default()
        }
    }
}

/// What happened on one polygon of the ensemble.
#[derive(Clone, Debug, Serialize)]
pub struct PolygonOutcome {
    pub index: usize,
    pub seed: u64,
    pub vertex_count: usize,
    pub success: bool,
    pub error: Option<String>,
    pub area_spread: Option<f64>,
    pub perimeter_spread: Option<f64>,
    /// Proper fair-range count of the polygon itself.
    pub proper_ranges: usize,
    /// Proper fair-range count is odd for every convex polygon.
    pub parity_ok: bool,
    pub runtime_ms: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpreadPercentiles {
    pub p50: f64,
    pub p90: f64,
    pub max: f64,
}

fn percentiles(mut values: Vec<f64>) -> Option<SpreadPercentiles> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let at = |q: f64| values[((values.len() - 1) as f64 * q).round() as usize];
    Some(SpreadPercentiles { p50: at(0.5), p90: at(0.9), max: *values.last().unwrap() })
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleReport {
    pub config: RunConfig,
    pub outcomes: Vec<PolygonOutcome>,
    pub success_rate: f64,
    pub parity_violations: usize,
    pub area_spread_percentiles: Option<SpreadPercentiles>,
    pub perimeter_spread_percentiles: Option<SpreadPercentiles>,
}

impl EnsembleReport {
    /// The gate the `ensemble` subcommand exits 0 on.
    pub fn all_good(&self) -> bool {
        self.parity_violations == 0 && self.success_rate == 1.0
    }
}

/// Generate `count` polygons from the seed, solve each, and aggregate.
/// Per-polygon failures are recorded, not fatal.
pub fn run_ensemble(cfg: &RunConfig) -> Result<EnsembleReport> {
    cfg.validate()?;
    let solver = cfg.solver();
    let suite = random_polygon_suite(cfg.seed, cfg.count, cfg.vertices.0, cfg.vertices.1);
    let mut outcomes = Vec::with_capacity(cfg.count);
    for (index, (seed, poly)) in suite.into_iter().enumerate() {
        let start = Instant::now();
        let proper_ranges = fair_ranges(&poly).iter().filter(|r| r.proper).count();
        let solved = fair_partition(&poly, cfg.n, &solver);
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        let outcome = match solved {
            Ok(result) => PolygonOutcome {
                index,
                seed,
                vertex_count: poly.vertex_count(),
                success: true,
                error: None,
                area_spread: Some(result.report.area_spread),
                perimeter_spread: Some(result.report.perimeter_spread),
                proper_ranges,
                parity_ok: proper_ranges % 2 == 1,
                runtime_ms,
            },
            Err(e) => PolygonOutcome {
                index,
                seed,
                vertex_count: poly.vertex_count(),
                success: false,
                error: Some(e.to_string()),
                area_spread: None,
                perimeter_spread: None,
                proper_ranges,
                parity_ok: proper_ranges % 2 == 1,
                runtime_ms,
            },
        };
        log::info!(
            "ensemble {index}/{}: seed {seed} -> {}",
            cfg.count,
            outcome.error.as_deref().unwrap_or("ok")
        );
        outcomes.push(outcome);
    }
    let successes = outcomes.iter().filter(|o| o.success).count();
    Ok(EnsembleReport {
        config: *cfg,
        success_rate: successes as f64 / outcomes.len() as f64,
        parity_violations: outcomes.iter().filter(|o| !o.parity_ok).count(),
        area_spread_percentiles: percentiles(
            outcomes.iter().filter_map(|o| o.area_spread).collect(),
        ),
        perimeter_spread_percentiles: percentiles(
            outcomes.iter().filter_map(|o| o.perimeter_spread).collect(),
        ),
        outcomes,
    })
}
