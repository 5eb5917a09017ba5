//! Named graph families and random instance generators.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, ObservabilityClass};

/// Names accepted by [`named`], with their parameter syntax.
pub const CATALOGUE: &[&str] = &[
    "figure1",
    "bipartite:<a>,<b>",
    "orthogonal:<k>",
    "undirected_cycle:<n>",
    "directed_cycle:<n>",
    "directed_path:<n>",
    "directed_tree:<parent of 1>,<parent of 2>,...",
    "star:<leaves>",
    "clique:<n>",
    "revealing_pairs:<m>",
];

/// Undirected complete bipartite graph `K_{a,b}` without self-loops. The
/// first side is `0..a`, the second `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> DirectedGraph {
    let pairs = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)));
    DirectedGraph::undirected(a + b, pairs).expect("indices in range")
}

/// Orthogonality graph over `F_2^k`.
///
/// Vertices `0..2^k` are the vectors `alpha` of `F_2^k` and form a clique
/// without self-loops; vertices `2^k + beta - 1` for nonzero `beta` form an
/// independent set. `alpha` and `beta` are adjacent (both directions) iff
/// their inner product over `F_2` is one.
pub fn orthogonal_f2k(k: u32) -> Result<DirectedGraph> {
    if !(2..=12).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "orthogonal graph needs 2 <= k <= 12, got {k}"
        )));
    }
    let size = 1usize << k;
    let n = 2 * size - 1;
    let mut set = BTreeSet::new();
    for a in 0..size {
        for b in 0..size {
            if a != b {
                set.insert((a, b));
            }
        }
        for beta in 1..size {
            if (a & beta).count_ones() % 2 == 1 {
                let y = size + beta - 1;
                set.insert((a, y));
                set.insert((y, a));
            }
        }
    }
    Ok(DirectedGraph::from_set(n, set))
}

/// Four arms A, B, C, D (0..4) with A->C, B->C, C<->D and self-loops on A, B.
/// C is observed by everyone, D only by C.
pub fn figure1() -> DirectedGraph {
    DirectedGraph::new(4, [(0, 2), (1, 2), (2, 3), (3, 2), (0, 0), (1, 1)]).expect("static")
}

pub fn undirected_cycle(n: usize) -> Result<DirectedGraph> {
    if n < 3 {
        return Err(Error::InvalidArgument("cycle needs n >= 3".into()));
    }
    DirectedGraph::undirected(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn directed_cycle(n: usize) -> Result<DirectedGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument("directed cycle needs n >= 2".into()));
    }
    DirectedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn directed_path(n: usize) -> Result<DirectedGraph> {
    if n < 1 {
        return Err(Error::InvalidArgument("path needs n >= 1".into()));
    }
    DirectedGraph::new(n, (1..n).map(|i| (i - 1, i)))
}

/// Rooted tree with edges parent -> child. `parents[i]` is the parent of
/// vertex `i + 1` and must be at most `i`.
pub fn directed_tree(parents: &[usize]) -> Result<DirectedGraph> {
    for (i, &p) in parents.iter().enumerate() {
        if p > i {
            return Err(Error::InvalidArgument(format!(
                "parent {p} of vertex {} must precede it",
                i + 1
            )));
        }
    }
    DirectedGraph::new(
        parents.len() + 1,
        parents.iter().enumerate().map(|(i, &p)| (p, i + 1)),
    )
}

/// Center 0 pointing at leaves `1..=leaves`, plus vertex `leaves + 1`
/// pointing at the center. No self-loops.
pub fn directed_star(leaves: usize) -> DirectedGraph {
    let d = leaves + 1;
    DirectedGraph::new(d + 1, (1..=leaves).map(|l| (0, l)).chain([(d, 0)])).expect("in range")
}

/// Every arm observes every arm, including itself.
pub fn clique_with_loops(n: usize) -> DirectedGraph {
    DirectedGraph::new(n, (0..n).flat_map(|u| (0..n).map(move |v| (u, v)))).expect("in range")
}

/// `m` self-looped revealing arms `0..m`, arm `i` pointing at its partner
/// `m + i`. Partners have no self-loop, so they are learnable only by paying
/// for their revealer. The partners form a 1-packing independent set of
/// size `m`.
pub fn revealing_pairs(m: usize) -> Result<DirectedGraph> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "revealing_pairs needs m >= 1".into(),
        ));
    }
    DirectedGraph::new(2 * m, (0..m).flat_map(|i| [(i, i), (i, m + i)]))
}

/// Looks up a graph by catalogue name, e.g. `bipartite:2,8`.
pub fn named(name: &str) -> Result<DirectedGraph> {
    let (head, args) = match name.split_once(':') {
        Some((h, a)) => (h.trim(), a.trim()),
        None => (name.trim(), ""),
    };
    let nums = || -> Result<Vec<usize>> {
        if args.is_empty() {
            return Ok(Vec::new());
        }
        args.split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad number {s:?} in {name:?}")))
            })
            .collect()
    };
    let one = || -> Result<usize> {
        match nums()?.as_slice() {
            [x] => Ok(*x),
            _ => Err(Error::InvalidArgument(format!("{head} takes one argument"))),
        }
    };
    match head {
        "figure1" => Ok(figure1()),
        "bipartite" => match nums()?.as_slice() {
            [a, b] if *a >= 1 && *b >= 1 => Ok(complete_bipartite(*a, *b)),
            _ => Err(Error::InvalidArgument("bipartite takes a,b >= 1".into())),
        },
        "orthogonal" => orthogonal_f2k(one()? as u32),
        "undirected_cycle" => undirected_cycle(one()?),
        "directed_cycle" => directed_cycle(one()?),
        "directed_path" => directed_path(one()?),
        "directed_tree" => directed_tree(&nums()?),
        "star" => Ok(directed_star(one()?)),
        "clique" => Ok(clique_with_loops(one()?)),
        "revealing_pairs" => revealing_pairs(one()?),
        _ => Err(Error::InvalidArgument(format!(
            "unknown graph {name:?}; known: {}",
            CATALOGUE.join(", ")
        ))),
    }
}

/// Random digraph: each ordered pair `u != v` is an edge with probability
/// `edge_p`, each self-loop with probability `loop_p`.
pub fn random_digraph<R: Rng + ?Sized>(
    n: usize,
    edge_p: f64,
    loop_p: f64,
    rng: &mut R,
) -> DirectedGraph {
    let mut set = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            let p = if u == v { loop_p } else { edge_p };
            if rng.random::<f64>() < p {
                set.insert((u, v));
            }
        }
    }
    DirectedGraph::from_set(n, set)
}

/// Rejection-samples [`random_digraph`] until the result is weakly
/// observable. Edge and loop densities are themselves drawn per attempt so
/// the sample covers sparse and dense instances.
pub fn random_weakly_observable<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DirectedGraph {
    assert!(n >= 3, "weak observability needs n >= 3");
    loop {
        let edge_p = rng.random_range(0.15..0.6);
        let loop_p = rng.random_range(0.0..0.5);
        let g = random_digraph(n, edge_p, loop_p, rng);
        if g.classify() == ObservabilityClass::WeaklyObservable {
            return g;
        }
    }
}

/// Uniform random recursive tree on `n` vertices, edges oriented parent ->
/// child.
pub fn random_directed_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DirectedGraph {
    let parents: Vec<usize> = (1..n).map(|i| rng.random_range(0..i)).collect();
    directed_tree(&parents).expect("parents precede children")
}

/// Random recursive tree with each edge kept as a single arc in a random
/// direction, or as both arcs when `undirected` is set.
pub fn random_tree<R: Rng + ?Sized>(n: usize, undirected: bool, rng: &mut R) -> DirectedGraph {
    let mut set = BTreeSet::new();
    for i in 1..n {
        let p = rng.random_range(0..i);
        if undirected {
            set.insert((p, i));
            set.insert((i, p));
        } else if rng.random::<bool>() {
            set.insert((p, i));
        } else {
            set.insert((i, p));
        }
    }
    DirectedGraph::from_set(n, set)
}
