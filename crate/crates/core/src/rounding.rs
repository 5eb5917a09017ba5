//! Rounding packings into hard-instance supports.
//!
//! A `k`-packing independent set is an independent set `S` (no edge inside
//! `S`, hence no self-loops in `S`) such that every vertex has at most `k`
//! out-neighbors in `S`. Such a set carries the stochastic hard instances in
//! the environment module.
//!
//! Two constructive roundings live here. [`greedy_one_packing`] thins a
//! vertex packing set down to a 1-packing independent set while keeping at
//! least a third of it. [`degenerate_round`] turns any fractional packing on
//! a 1-degenerate graph into an integral one of no smaller value, so the
//! packing LP has no integrality gap there.

use serde::Serialize;

use crate::degeneracy::{degeneracy_certificate, DegeneracyCertificate, Reducer, ReductionStep};
use crate::domination::{PackingSolution, TOL};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Vertex limit of [`max_k_packing_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KPackingSet {
    pub vertices: Vec<usize>,
    pub k: usize,
}

impl KPackingSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// True iff `set` is independent and meets every out-neighborhood in at most
/// `k` vertices.
pub fn verify_k_packing(g: &DirectedGraph, set: &[usize], k: usize) -> bool {
    let mut member = vec![false; g.n()];
    for &v in set {
        if v >= g.n() || member[v] {
            return false;
        }
        member[v] = true;
    }
    let independent = set
        .iter()
        .all(|&u| g.out_nbrs(u).iter().all(|&v| !member[v]));
    independent && (0..g.n()).all(|v| g.out_nbrs(v).iter().filter(|&&w| member[w]).count() <= k)
}

/// Smallest `k` for which `set` is a `k`-packing independent set, or `None`
/// when `set` is not independent.
pub fn packing_degree(g: &DirectedGraph, set: &[usize]) -> Option<usize> {
    let k = (0..g.n())
        .map(|v| g.out_nbrs(v).iter().filter(|w| set.contains(w)).count())
        .max()
        .unwrap_or(0);
    verify_k_packing(g, set, k).then_some(k)
}

/// Extracts a 1-packing independent set from a vertex packing set.
///
/// Repeatedly takes the remaining vertex with the fewest in-neighbors among
/// the remaining ones (lowest index on ties) and discards it together with its
/// remaining in- and out-neighbors. Inside a vertex packing set every vertex
/// has out-degree at most one, so the chosen vertex has at most one remaining
/// in-neighbor and each round discards at most three vertices.
pub fn greedy_one_packing(g: &DirectedGraph, packing: &PackingSolution) -> Result<KPackingSet> {
    if !packing.integral || !packing.is_feasible(g, 0.0) {
        return Err(Error::Contract(
            "input is not an integral vertex packing set".into(),
        ));
    }
    let mut remaining = vec![false; g.n()];
    for v in packing.support() {
        remaining[v] = true;
    }
    let mut chosen = Vec::new();
    loop {
        let pick = (0..g.n())
            .filter(|&v| remaining[v])
            .min_by_key(|&v| (g.in_nbrs(v).iter().filter(|&&u| remaining[u]).count(), v));
        let Some(v) = pick else { break };
        chosen.push(v);
        remaining[v] = false;
        for &u in g.in_nbrs(v).iter().chain(g.out_nbrs(v)) {
            remaining[u] = false;
        }
    }
    chosen.sort_unstable();
    Ok(KPackingSet {
        vertices: chosen,
        k: 1,
    })
}

/// Rounds a feasible fractional packing on a 1-degenerate graph to an
/// integral packing of at least the same value.
pub fn degenerate_round(
    g: &DirectedGraph,
    fractional: &PackingSolution,
) -> Result<PackingSolution> {
    let outcome = degeneracy_certificate(g);
    let cert = outcome.certificate().ok_or(Error::NotDegenerate)?;
    degenerate_round_with(g, cert, fractional)
}

/// [`degenerate_round`] driven by a caller-supplied certificate.
///
/// Replaying the certificate, each time the unique in-edge `(j, i)` of a
/// loop-free vertex `i` is deleted and `i` is still undecided, `i` joins the
/// packing and every other loop-free vertex still reachable from `j` is
/// excluded. Vertices left undecided at the end are added greedily where
/// feasibility allows.
pub fn degenerate_round_with(
    g: &DirectedGraph,
    cert: &DegeneracyCertificate,
    fractional: &PackingSolution,
) -> Result<PackingSolution> {
    if !fractional.is_feasible(g, TOL) {
        return Err(Error::Contract("fractional packing is infeasible".into()));
    }
    let loop_free = g.self_loop_free_mask();
    let mut decided: Vec<Option<bool>> = vec![None; g.n()];
    let mut state = Reducer::new(g);
    for &step in cert.steps() {
        state.apply(step)?;
        if let ReductionStep::RemoveInEdge {
            vertex: i,
            edge: (j, _),
        } = step
        {
            if loop_free[i] && decided[i].is_none() {
                decided[i] = Some(true);
                for &k in state.out_nbrs(j) {
                    if k != i && loop_free[k] {
                        match decided[k] {
                            Some(true) => {
                                return Err(Error::Contract(format!(
                                    "rounding would exclude already chosen vertex {k}"
                                )))
                            }
                            _ => decided[k] = Some(false),
                        }
                    }
                }
            }
        }
    }
    if !state.is_empty() {
        return Err(Error::Contract(
            "certificate does not empty the graph".into(),
        ));
    }

    let mut y = vec![0.0; g.n()];
    for v in 0..g.n() {
        if decided[v] == Some(true) {
            y[v] = 1.0;
        }
    }
    let mut load: Vec<usize> = (0..g.n())
        .map(|i| g.out_nbrs(i).iter().filter(|&&j| y[j] == 1.0).count())
        .collect();
    for v in 0..g.n() {
        if loop_free[v] && decided[v].is_none() && g.in_nbrs(v).iter().all(|&i| load[i] == 0) {
            y[v] = 1.0;
            for &i in g.in_nbrs(v) {
                load[i] += 1;
            }
        }
    }
    let rounded = PackingSolution {
        value: y.iter().sum(),
        y,
        integral: true,
    };
    if !rounded.is_feasible(g, 0.0) {
        return Err(Error::Contract("rounded packing is infeasible".into()));
    }
    if rounded.value < fractional.value - 1e-9 {
        return Err(Error::Contract(format!(
            "rounded value {} below fractional value {}",
            rounded.value, fractional.value
        )));
    }
    Ok(rounded)
}

/// Maximum `k`-packing independent set by subset enumeration.
/// Ties go to the set with the smallest bitmask.
pub fn max_k_packing_bruteforce(g: &DirectedGraph, k: usize) -> Result<KPackingSet> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let out_mask: Vec<u32> = (0..n)
        .map(|v| g.out_nbrs(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut best = (0u32, 0u32);
    for set in 0u32..(1u32 << n) {
        let size = set.count_ones();
        if size <= best.1 {
            continue;
        }
        let independent = (0..n).all(|v| set >> v & 1 == 0 || out_mask[v] & set == 0);
        if independent
            && out_mask
                .iter()
                .all(|&m| (m & set).count_ones() as usize <= k)
        {
            best = (set, size);
        }
    }
    Ok(KPackingSet {
        vertices: (0..n).filter(|&v| best.0 >> v & 1 == 1).collect(),
        k,
    })
}
