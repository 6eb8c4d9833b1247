use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use san_avail::catalog::{self, BuildOptions, CatalogId};
use san_avail::ctmc;
use san_avail::san::ParamSet;
use san_avail::sim::{self, SimConfig};

use crate::spec::{Backend, Engine, StudySpec};
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    pub state_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { workers: None, state_cap: ctmc::DEFAULT_STATE_CAP }
    }
}

/// One grid point evaluated by one engine.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub study: String,
    /// Values of the ranged variables, in declaration order.
    pub point: Vec<(String, f64)>,
    pub engine: Engine,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replications: usize,
    pub converged: bool,
    /// Reachable markings (CTMC rows).
    pub states: Option<usize>,
    /// Set when the point could not be evaluated.
    pub error: Option<String>,
    /// Seconds spent on this row.
    pub wall_time: f64,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.point.iter().find(|(k, _)| k == name).map(|p| p.1)
    }
}

/// Evaluates every grid point of `spec` with each engine of its backend.
///
/// Rows come back grid point by grid point in grid order, CTMC before
/// simulation. Failures at a point (e.g. the state cap) are recorded in the
/// row and the run continues. Grid point `i` simulates with seed
/// `derive_seed(spec.sim.seed, i)`.
pub fn run_study(spec: &StudySpec, opts: &RunOptions) -> Result<Vec<ResultRow>, RunError> {
    spec.validate()?;
    let ranged = spec.ranged();
    let grid = spec.grid();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| RunError::Spec(e.to_string()))?;
    let rows: Vec<Vec<ResultRow>> = pool.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(i, params)| {
                let point = ranged.iter().map(|k| (k.clone(), params.get(k).unwrap_or(f64::NAN))).collect();
                evaluate_point(spec, i as u64, params, point, opts)
            })
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

fn evaluate_point(spec: &StudySpec, index: u64, params: &ParamSet, point: Vec<(String, f64)>, opts: &RunOptions) -> Vec<ResultRow> {
    let instance = catalog::instantiate(spec.model, params, BuildOptions { corrected: spec.corrected });
    spec.backend
        .engines()
        .iter()
        .map(|&engine| {
            let start = Instant::now();
            let mut row = ResultRow {
                study: spec.name.clone(),
                point: point.clone(),
                engine,
                mean: f64::NAN,
                ci_low: f64::NAN,
                ci_high: f64::NAN,
                replications: 0,
                converged: false,
                states: None,
                error: None,
                wall_time: 0.0,
            };
            let outcome = match &instance {
                Err(e) => Err(e.to_string()),
                Ok(inst) => match engine {
                    Engine::Ctmc => ctmc::solve(&inst.model, &inst.bindings, &inst.reward, opts.state_cap)
                        .map(|s| {
                            row.mean = s.value;
                            row.ci_low = s.value;
                            row.ci_high = s.value;
                            row.converged = true;
                            row.states = Some(s.space.len());
                        })
                        .map_err(|e| e.to_string()),
                    Engine::Sim => {
                        let cfg = SimConfig { seed: sim::derive_seed(spec.sim.seed, index), ..spec.sim };
                        sim::run_estimate(&inst.model, &inst.bindings, &inst.reward, &cfg)
                            .map(|e| {
                                row.mean = e.mean;
                                row.ci_low = e.ci_low.unwrap_or(f64::NAN);
                                row.ci_high = e.ci_high.unwrap_or(f64::NAN);
                                row.replications = e.replications;
                                row.converged = e.converged;
                            })
                            .map_err(|e| e.to_string())
                    }
                },
            };
            row.error = outcome.err();
            row.wall_time = start.elapsed().as_secs_f64();
            row
        })
        .collect()
}

/// Evaluates a catalog model at a single parameter point.
pub fn solve(
    model: CatalogId,
    params: &ParamSet,
    backend: Backend,
    sim: SimConfig,
    corrected: bool,
    opts: &RunOptions,
) -> Result<Vec<ResultRow>, RunError> {
    let mut spec = StudySpec::point(model.name(), model, params);
    spec.backend = backend;
    spec.sim = sim;
    spec.corrected = corrected;
    run_study(&spec, opts)
}
