//! Independent oracles shared by the integration suites. None of them call
//! into the solvers they check.

#![allow(dead_code)]

use feedback_bandits::DirectedGraph;
use rand::Rng;

/// Random strictly positive point of the simplex.
pub fn random_simplex<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3)
        .collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|v| v / s).collect()
}

/// Minimizes `eta <x, l> + sum x ln(x / prev) - x + prev` over the simplex by
/// damped Newton on the first `n - 1` coordinates.
pub fn kkt_argmin(prev: &[f64], l: &[f64], eta: f64) -> Vec<f64> {
    let n = prev.len();
    if n == 1 {
        return vec![1.0];
    }
    let objective = |x: &[f64]| -> f64 {
        (0..n)
            .map(|i| eta * l[i] * x[i] + x[i] * (x[i] / prev[i]).ln() - x[i] + prev[i])
            .sum()
    };
    let mut x = prev.to_vec();
    for _ in 0..200 {
        let last = n - 1;
        let d_last = eta * l[last] + (x[last] / prev[last]).ln();
        let grad: Vec<f64> = (0..last)
            .map(|i| eta * l[i] + (x[i] / prev[i]).ln() - d_last)
            .collect();
        if grad.iter().all(|g| g.abs() < 1e-15) {
            break;
        }
        let mut h = vec![vec![1.0 / x[last]; last]; last];
        for i in 0..last {
            h[i][i] += 1.0 / x[i];
        }
        let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
        let dir = solve_dense(h, rhs);
        let f0 = objective(&x);
        let mut step = 1.0;
        loop {
            let mut cand = x.clone();
            for i in 0..last {
                cand[i] += step * dir[i];
            }
            cand[last] = 1.0 - cand[..last].iter().sum::<f64>();
            if cand.iter().all(|&v| v > 0.0) && objective(&cand) <= f0 + 1e-300 {
                x = cand;
                break;
            }
            step *= 0.5;
            if step < 1e-20 {
                return x;
            }
        }
    }
    x
}

/// Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn solve_checked(a: Vec<Vec<f64>>, b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m = a.clone();
    // Reject (near-)singular systems by tracking the smallest pivot.
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    Some(solve_dense(a, b))
}

/// Covering LP optimum by enumerating every basic solution: choose `n` tight
/// constraints among the cover rows and the box bounds, solve, keep the best
/// feasible one.
pub fn lp_vertex_oracle(g: &DirectedGraph) -> f64 {
    let n = g.n();
    // Each constraint is a . x >= b.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for j in g.self_loop_free_set() {
        let mut a = vec![0.0; n];
        for &i in g.in_nbrs(j) {
            a[i] = 1.0;
        }
        rows.push((a, 1.0));
    }
    for i in 0..n {
        let mut lo = vec![0.0; n];
        lo[i] = 1.0;
        rows.push((lo, 0.0));
        let mut hi = vec![0.0; n];
        hi[i] = -1.0;
        rows.push((hi, -1.0));
    }
    let m = rows.len();
    let mut best = f64::INFINITY;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = pick.iter().map(|&r| rows[r].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&r| rows[r].1).collect();
        if let Some(x) = solve_checked(a, b) {
            let feasible = rows
                .iter()
                .all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() >= b - 1e-9);
            if feasible {
                best = best.min(x.iter().sum());
            }
        }
        // Next combination of n rows out of m.
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - n + i {
                pick[i] += 1;
                for k in i + 1..n {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn masks_of(g: &DirectedGraph) -> (Vec<u32>, Vec<u32>, u32) {
    let n = g.n();
    let in_mask = (0..n)
        .map(|v| g.in_nbrs(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let out_mask = (0..n)
        .map(|v| g.out_nbrs(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let u_mask = g.self_loop_free_set().iter().fold(0u32, |m, &u| m | 1 << u);
    (in_mask, out_mask, u_mask)
}

/// Smallest set whose out-neighborhoods cover every loop-free vertex.
pub fn brute_delta(g: &DirectedGraph) -> Option<usize> {
    let (in_mask, _, u_mask) = masks_of(g);
    (0u32..1 << g.n())
        .filter(|&s| (0..g.n()).all(|j| u_mask >> j & 1 == 0 || in_mask[j] & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
}

/// Largest loop-free set meeting every out-neighborhood at most once.
pub fn brute_zeta(g: &DirectedGraph) -> usize {
    let (_, out_mask, u_mask) = masks_of(g);
    (0u32..1 << g.n())
        .filter(|&s| s & !u_mask == 0 && out_mask.iter().all(|&m| (m & s).count_ones() <= 1))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Arbitrary digraph on 1..=max_n vertices, self-loops included.
pub fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = DirectedGraph> {
    use proptest::prelude::*;
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n));
            DirectedGraph::new(n, edges).unwrap()
        })
    })
}

/// Graph from `arb_graph` that covers every loop-free vertex.
pub fn arb_coverable(max_n: usize) -> impl proptest::strategy::Strategy<Value = DirectedGraph> {
    use proptest::prelude::*;
    arb_graph(max_n).prop_filter("uncovered loop-free vertex", |g| {
        g.self_loop_free_set()
            .iter()
            .all(|&j| !g.in_nbrs(j).is_empty())
    })
}
