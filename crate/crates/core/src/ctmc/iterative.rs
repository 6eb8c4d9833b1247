use super::{CtmcError, Generator};

/// Stopping rule for [`gauss_seidel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterConfig {
    /// Bound on `‖πQ‖∞ / max|q_ii|`.
    pub residual: f64,
    /// Bound on the largest relative change of any component over one sweep.
    pub change: f64,
    pub max_sweeps: usize,
}

impl Default for IterConfig {
    fn default() -> Self {
        IterConfig { residual: 1e-12, change: 1e-12, max_sweeps: 200_000 }
    }
}

/// Gauss–Seidel on `πQ = 0` for an irreducible generator, with symmetric
/// (forward then backward) sweeps. Returns `π` and the number of sweeps.
pub fn gauss_seidel(gen: &Generator, cfg: IterConfig) -> Result<(Vec<f64>, usize), CtmcError> {
    let n = gen.n();
    if n == 0 {
        return Err(CtmcError::Solver("empty chain".into()));
    }
    let mut start = vec![0usize; n + 1];
    for i in 0..n {
        for (j, _) in gen.row(i) {
            start[j + 1] += 1;
        }
    }
    for j in 0..n {
        start[j + 1] += start[j];
    }
    let mut fill = start.clone();
    let mut src = vec![0usize; gen.nnz()];
    let mut rate = vec![0.0; gen.nnz()];
    for i in 0..n {
        for (j, q) in gen.row(i) {
            src[fill[j]] = i;
            rate[fill[j]] = q;
            fill[j] += 1;
        }
    }
    let out: Vec<f64> = (0..n).map(|i| -gen.diag(i)).collect();
    if let Some(k) = out.iter().position(|&d| d <= 0.0) {
        return Err(CtmcError::Solver(format!("state {k} is absorbing")));
    }
    let scale = out.iter().copied().fold(0.0, f64::max);

    let mut pi = vec![1.0 / n as f64; n];
    let update = |pi: &mut [f64], j: usize| -> f64 {
        let r = start[j]..start[j + 1];
        let v = src[r.clone()].iter().zip(&rate[r]).map(|(&i, &q)| pi[i] * q).sum::<f64>() / out[j];
        let old = pi[j];
        pi[j] = v;
        if v > 0.0 {
            ((v - old) / v).abs()
        } else if old > 0.0 {
            1.0
        } else {
            0.0
        }
    };
    for sweep in 1..=cfg.max_sweeps {
        let mut change: f64 = 0.0;
        for j in 0..n {
            change = change.max(update(&mut pi, j));
        }
        for j in (0..n).rev() {
            change = change.max(update(&mut pi, j));
        }
        let total: f64 = pi.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(CtmcError::Solver("iteration lost all mass".into()));
        }
        pi.iter_mut().for_each(|p| *p /= total);
        if change <= cfg.change && gen.residual(&pi) <= cfg.residual * scale {
            return Ok((pi, sweep));
        }
    }
    Err(CtmcError::Solver(format!(
        "Gauss-Seidel did not converge in {} sweeps (residual {:.3e})",
        cfg.max_sweeps,
        gen.residual(&pi) / scale
    )))
}
