use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::{CtmcError, Generator};

fn reducible(k: usize) -> CtmcError {
    CtmcError::Solver(format!("state {k} has no path back to the remaining states"))
}

fn normalize(mut pi: Vec<f64>) -> Result<Vec<f64>, CtmcError> {
    let total: f64 = pi.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(CtmcError::Solver(format!("unnormalizable solution (sum {total})")));
    }
    pi.iter_mut().for_each(|p| *p /= total);
    Ok(pi)
}

/// Dense GTH on an irreducible generator given as a full matrix. Diagonal
/// entries are ignored.
pub fn gth_dense(q: &[Vec<f64>]) -> Result<Vec<f64>, CtmcError> {
    let n = q.len();
    let mut a = Vec::with_capacity(n * n);
    for row in q {
        a.extend_from_slice(row);
    }
    gth_flat(a, n)
}

fn gth_flat(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>, CtmcError> {
    if n == 0 {
        return Err(CtmcError::Solver("empty chain".into()));
    }
    let mut s = vec![0.0; n];
    for k in (1..n).rev() {
        let (head, tail) = a.split_at_mut(k * n);
        let row_k = &tail[..k];
        let sk: f64 = row_k.iter().sum();
        if sk <= 0.0 {
            return Err(reducible(k));
        }
        s[k] = sk;
        for row_i in head.chunks_exact_mut(n) {
            let f = row_i[k] / sk;
            if f == 0.0 {
                continue;
            }
            for (x, &akj) in row_i[..k].iter_mut().zip(row_k) {
                *x += f * akj;
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for k in 1..n {
        pi[k] = (0..k).map(|i| pi[i] * a[i * n + k]).sum::<f64>() / s[k];
    }
    normalize(pi)
}

/// Remaining states are handed to dense GTH once at most this many are left
/// and at least a quarter of their pairs are connected.
const DENSE_SWITCH: usize = 6000;

/// Eliminated state, the rates into it from states still present, and its total outflow.
type Elimination = (usize, Vec<(usize, f64)>, f64);

/// Sparse GTH (state reduction) on an irreducible generator.
///
/// States are eliminated greedily by smallest `in-degree × out-degree` to
/// limit fill-in; ties go to the lowest index, so results are deterministic.
/// When the reduced chain has become dense it is finished by [`gth_dense`].
pub fn gth_sparse(gen: &Generator) -> Result<Vec<f64>, CtmcError> {
    let n = gen.n();
    if n == 0 {
        return Err(CtmcError::Solver("empty chain".into()));
    }
    let mut out: Vec<HashMap<usize, f64>> = (0..n).map(|i| gen.row(i).collect()).collect();
    let mut inn: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for (i, row) in out.iter().enumerate() {
        for &j in row.keys() {
            inn[j].insert(i);
        }
    }
    let mut nnz = gen.nnz();
    let cost = |out: &[HashMap<usize, f64>], inn: &[HashSet<usize>], k: usize| (out[k].len() * inn[k].len()) as u64;
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..n).map(|k| Reverse((cost(&out, &inn, k), k))).collect();
    let mut alive = vec![true; n];
    let mut steps: Vec<Elimination> = Vec::with_capacity(n.saturating_sub(1));

    let mut remaining = n;
    while remaining > 1 {
        if remaining <= DENSE_SWITCH && nnz * 4 >= remaining * remaining {
            break;
        }
        let k = loop {
            let Reverse((c, k)) = heap.pop().ok_or_else(|| CtmcError::Solver("elimination queue exhausted".into()))?;
            if alive[k] && c == cost(&out, &inn, k) {
                break k;
            }
        };
        alive[k] = false;
        remaining -= 1;
        let mut out_k: Vec<(usize, f64)> = out[k].drain().collect();
        out_k.sort_unstable_by_key(|e| e.0);
        let s: f64 = out_k.iter().map(|e| e.1).sum();
        if s <= 0.0 {
            return Err(reducible(k));
        }
        let mut in_k: Vec<(usize, f64)> = inn[k].drain().map(|i| (i, out[i].remove(&k).unwrap_or(0.0))).collect();
        in_k.sort_unstable_by_key(|e| e.0);
        nnz -= out_k.len() + in_k.len();
        for &(j, _) in &out_k {
            inn[j].remove(&k);
        }
        for &(i, q_ik) in &in_k {
            let f = q_ik / s;
            let row = &mut out[i];
            for &(j, q_kj) in &out_k {
                if j != i {
                    let e = row.entry(j).or_insert_with(|| {
                        nnz += 1;
                        0.0
                    });
                    *e += f * q_kj;
                    inn[j].insert(i);
                }
            }
        }
        for &i in in_k.iter().map(|e| &e.0).chain(out_k.iter().map(|e| &e.0)) {
            heap.push(Reverse((cost(&out, &inn, i), i)));
        }
        steps.push((k, in_k, s));
    }

    let rest: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let mut pi = vec![0.0; n];
    if rest.len() == 1 {
        pi[rest[0]] = 1.0;
    } else {
        let m = rest.len();
        let mut pos = vec![usize::MAX; n];
        for (p, &i) in rest.iter().enumerate() {
            pos[i] = p;
        }
        let mut a = vec![0.0; m * m];
        for (p, &i) in rest.iter().enumerate() {
            for (&j, &q) in &out[i] {
                a[p * m + pos[j]] = q;
            }
        }
        for (p, x) in gth_flat(a, m)?.into_iter().enumerate() {
            pi[rest[p]] = x;
        }
    }
    for (k, in_k, s) in steps.iter().rev() {
        pi[*k] = in_k.iter().map(|&(i, q)| pi[i] * q).sum::<f64>() / s;
    }
    normalize(pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn birth_death(n: usize, lambda: f64, mu: f64) -> Generator {
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i + 1, lambda));
            t.push((i + 1, i, mu));
        }
        Generator::from_triples(n, t)
    }

    #[test]
    fn birth_death_matches_geometric() {
        let (l, m) = (1e-6, 1e-2);
        let g = birth_death(6, l, m);
        let rho: f64 = l / m;
        let z: f64 = (0..6).map(|i| rho.powi(i)).sum();
        for pi in [gth_dense(&g.to_dense()).unwrap(), gth_sparse(&g).unwrap()] {
            for (i, p) in pi.iter().enumerate() {
                let want = rho.powi(i as i32) / z;
                assert!((p - want).abs() <= 1e-13 * want, "{i}: {p} vs {want}");
            }
        }
    }

    #[test]
    fn single_state() {
        let g = Generator::from_triples(1, []);
        assert_eq!(gth_sparse(&g).unwrap(), vec![1.0]);
        assert_eq!(gth_dense(&g.to_dense()).unwrap(), vec![1.0]);
    }

    #[test]
    fn reducible_chain_is_rejected() {
        let g = Generator::from_triples(3, [(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)]);
        assert!(gth_sparse(&g).is_err());
        assert!(gth_dense(&g.to_dense()).is_err());
    }
}
