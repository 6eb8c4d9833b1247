//! Exact steady-state analysis: reachability, generator assembly and a
//! Grassmann–Taksar–Heyman (GTH) solver.
//!
//! GTH only ever adds non-negative quantities, so stationary probabilities
//! come out with small relative error even when rates span twenty orders of
//! magnitude, as they do in the catalog studies.

mod gth;
mod iterative;
mod scc;

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::san::{Bindings, CompiledModel, CompiledReward, Marking, SanError};

pub use gth::{gth_dense, gth_sparse};
pub use iterative::{gauss_seidel, IterConfig};
pub use scc::bottom_classes;

/// Default bound on the number of explored markings.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CtmcError {
    #[error(transparent)]
    San(#[from] SanError),
    #[error("state space exceeds the cap of {cap} markings")]
    StateCap { cap: usize },
    #[error("chain has {count} recurrent classes; the stationary distribution is not unique")]
    MultipleRecurrentClasses { count: usize },
    #[error("solver failed: {0}")]
    Solver(String),
}

/// Reachable markings; state 0 is the initial marking.
#[derive(Debug, Clone, Default)]
pub struct StateSpace {
    states: Vec<Marking>,
    index: HashMap<Marking, usize>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn marking(&self, i: usize) -> &Marking {
        &self.states[i]
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn markings(&self) -> &[Marking] {
        &self.states
    }

    fn insert(&mut self, m: Marking) -> (usize, bool) {
        if let Some(&i) = self.index.get(&m) {
            return (i, false);
        }
        let i = self.states.len();
        self.index.insert(m.clone(), i);
        self.states.push(m);
        (i, true)
    }
}

/// Sparse infinitesimal generator in compressed-row form. Only off-diagonal
/// entries are stored; the diagonal is kept separately as minus the row sum.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Generator {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl Generator {
    /// Assembles a generator from `(from, to, rate)` triples. Parallel entries
    /// are summed and self-loops dropped.
    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (i, j, q) in triples {
            if i != j && q > 0.0 {
                *rows[i].entry(j).or_insert(0.0) += q;
            }
        }
        Self::from_rows(rows)
    }

    fn from_rows(rows: Vec<BTreeMap<usize, f64>>) -> Self {
        let mut g = Generator { row_ptr: vec![0], ..Default::default() };
        for row in rows {
            let mut sum = 0.0;
            for (j, q) in row {
                g.cols.push(j);
                g.vals.push(q);
                sum += q;
            }
            g.row_ptr.push(g.cols.len());
            g.diag.push(-sum);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Off-diagonal entries `(j, q_ij)` of row `i`, ordered by `j`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.diag[i]
    }

    /// Largest absolute entry, diagonal included.
    pub fn max_abs(&self) -> f64 {
        self.diag.iter().map(|d| d.abs()).chain(self.vals.iter().copied()).fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n()).map(|i| (self.row(i).map(|(_, q)| q).sum::<f64>() + self.diag[i]).abs()).fold(0.0, f64::max)
    }

    pub fn min_off_diagonal(&self) -> f64 {
        self.vals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `‖πQ‖∞`.
    pub fn residual(&self, pi: &[f64]) -> f64 {
        let mut y: Vec<f64> = pi.iter().zip(&self.diag).map(|(p, d)| p * d).collect();
        for (i, &p) in pi.iter().enumerate() {
            for (j, q) in self.row(i) {
                y[j] += p * q;
            }
        }
        y.into_iter().map(f64::abs).fold(0.0, f64::max)
    }

    /// Restriction to `keep` (in that order); must be a closed class.
    pub fn restrict(&self, keep: &[usize]) -> Generator {
        let mut pos = vec![usize::MAX; self.n()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = k;
        }
        let rows = keep
            .iter()
            .map(|&i| self.row(i).filter(|&(j, _)| pos[j] != usize::MAX).map(|(j, q)| (pos[j], q)).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = self.diag[i];
            for (j, q) in self.row(i) {
                row[j] = q;
            }
        }
        a
    }
}

/// Breadth-first reachability from the initial marking.
///
/// Every enabled activity contributes `rate * p` for each case with `p > 0`;
/// transitions back into the same marking are dropped.
pub fn explore(model: &CompiledModel, b: &Bindings, state_cap: usize) -> Result<(StateSpace, Generator), CtmcError> {
    let mut space = StateSpace::default();
    let mut rows: Vec<BTreeMap<usize, f64>> = Vec::new();
    let mut queue = VecDeque::new();
    let (s0, _) = space.insert(model.initial_marking(b)?);
    queue.push_back(s0);
    let mut probs = Vec::new();
    while let Some(i) = queue.pop_front() {
        let m = space.marking(i).clone();
        let mut row = BTreeMap::new();
        for (a, rate) in model.enabled_rates(&m, b)? {
            model.case_probs_into(a, &m, b, &mut probs)?;
            for (c, &p) in probs.iter().enumerate() {
                if p <= 0.0 {
                    continue;
                }
                let next = model.fire(a, c, &m, b)?;
                let (j, fresh) = space.insert(next);
                if fresh {
                    if space.len() > state_cap {
                        return Err(CtmcError::StateCap { cap: state_cap });
                    }
                    queue.push_back(j);
                }
                if j != i {
                    *row.entry(j).or_insert(0.0) += rate * p;
                }
            }
        }
        if rows.len() <= i {
            rows.resize(i + 1, BTreeMap::new());
        }
        rows[i] = row;
    }
    rows.resize(space.len(), BTreeMap::new());
    Ok((space, Generator::from_rows(rows)))
}

/// Stationary distribution over a [`StateSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub pi: Vec<f64>,
    /// `‖πQ‖∞` of the returned vector.
    pub residual: f64,
}

/// Chains up to this size are solved with dense GTH.
pub const DENSE_LIMIT: usize = 200;

/// Chains up to this size are solved with sparse GTH; larger ones iteratively.
pub const DIRECT_LIMIT: usize = 10_000;

/// Solves `πQ = 0`, `Σπ = 1` for a chain with a single recurrent class.
/// Transient states receive probability 0.
pub fn steady_state(gen: &Generator) -> Result<SteadyState, CtmcError> {
    let n = gen.n();
    if n == 0 {
        return Err(CtmcError::Solver("empty chain".into()));
    }
    let classes = bottom_classes(gen);
    if classes.len() != 1 {
        return Err(CtmcError::MultipleRecurrentClasses { count: classes.len() });
    }
    let class = &classes[0];
    let sub_pi = if class.len() == n {
        solve_closed(gen)?
    } else {
        solve_closed(&gen.restrict(class))?
    };
    let mut pi = vec![0.0; n];
    for (k, &i) in class.iter().enumerate() {
        pi[i] = sub_pi[k];
    }
    let residual = gen.residual(&pi);
    Ok(SteadyState { pi, residual })
}

fn solve_closed(gen: &Generator) -> Result<Vec<f64>, CtmcError> {
    if gen.n() <= DENSE_LIMIT {
        gth_dense(&gen.to_dense())
    } else if gen.n() <= DIRECT_LIMIT {
        gth_sparse(gen)
    } else {
        gauss_seidel(gen, IterConfig::default()).map(|(pi, _)| pi)
    }
}

/// Steady-state probability of the markings satisfying `reward`.
pub fn expected_reward(ss: &SteadyState, space: &StateSpace, reward: &CompiledReward, b: &Bindings) -> f64 {
    let mut terms: Vec<f64> =
        space.markings().iter().zip(&ss.pi).filter(|(m, _)| reward.eval(m, b)).map(|(_, &p)| p).collect();
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

/// Result of a full exact solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub space: StateSpace,
    pub generator: Generator,
    pub steady: SteadyState,
    pub value: f64,
}

/// Explores, solves and evaluates `reward` in one call.
pub fn solve(
    model: &CompiledModel,
    b: &Bindings,
    reward: &CompiledReward,
    state_cap: usize,
) -> Result<Solution, CtmcError> {
    let (space, generator) = explore(model, b, state_cap)?;
    let steady = steady_state(&generator)?;
    let value = expected_reward(&steady, &space, reward, b);
    Ok(Solution { space, generator, steady, value })
}
