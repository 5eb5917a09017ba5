//! 1-degeneracy certificates.
//!
//! A graph is 1-degenerate when it can be emptied by repeatedly
//!
//! * deleting the unique in-edge of a vertex whose in-degree is one, or
//! * deleting a vertex of in-degree zero and out-degree at most one, together
//!   with its out-edge.
//!
//! The certificate is the sequence of such steps. The greedy search prefers
//! in-edge deletions over vertex deletions and the lowest vertex index within
//! each kind; small graphs fall back to an exhaustive search when greedy gets
//! stuck, so a disagreement between the two is observable through
//! [`SearchMethod`].

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Largest vertex count for which the exhaustive search runs.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// State budget of the exhaustive search before it reports `Unknown`.
const EXHAUSTIVE_BUDGET: usize = 500_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionStep {
    /// `vertex` has in-degree one and `edge = (u, vertex)` is that in-edge.
    RemoveInEdge { vertex: usize, edge: (usize, usize) },
    /// `vertex` has in-degree zero and `out_edge` is its only out-edge, if any.
    RemoveVertex {
        vertex: usize,
        out_edge: Option<(usize, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyCertificate {
    steps: Vec<ReductionStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Greedy,
    /// Greedy got stuck; the exhaustive search found a certificate anyway.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    Certified {
        certificate: DegeneracyCertificate,
        method: SearchMethod,
    },
    /// No sequence of steps empties the graph.
    NotDegenerate,
    /// Greedy got stuck and the graph is too large (or too branchy) for the
    /// exhaustive search.
    Unknown,
}

impl Degeneracy {
    pub fn certificate(&self) -> Option<&DegeneracyCertificate> {
        match self {
            Degeneracy::Certified { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> Option<bool> {
        match self {
            Degeneracy::Certified { .. } => Some(true),
            Degeneracy::NotDegenerate => Some(false),
            Degeneracy::Unknown => None,
        }
    }
}

/// Mutable remainder of a graph under reduction steps.
#[derive(Clone, Debug)]
pub struct Reducer {
    alive: Vec<bool>,
    remaining: usize,
    ins: Vec<BTreeSet<usize>>,
    outs: Vec<BTreeSet<usize>>,
}

impl Reducer {
    pub fn new(g: &DirectedGraph) -> Self {
        let n = g.n();
        Reducer {
            alive: vec![true; n],
            remaining: n,
            ins: (0..n)
                .map(|v| g.in_nbrs(v).iter().copied().collect())
                .collect(),
            outs: (0..n)
                .map(|v| g.out_nbrs(v).iter().copied().collect())
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    /// Current out-neighbors of `v`.
    pub fn out_nbrs(&self, v: usize) -> &BTreeSet<usize> {
        &self.outs[v]
    }

    pub fn in_nbrs(&self, v: usize) -> &BTreeSet<usize> {
        &self.ins[v]
    }

    fn in_edge_step(&self, v: usize) -> Option<ReductionStep> {
        if self.alive[v] && self.ins[v].len() == 1 {
            let u = *self.ins[v].iter().next().expect("len 1");
            Some(ReductionStep::RemoveInEdge {
                vertex: v,
                edge: (u, v),
            })
        } else {
            None
        }
    }

    fn vertex_step(&self, v: usize) -> Option<ReductionStep> {
        if self.alive[v] && self.ins[v].is_empty() && self.outs[v].len() <= 1 {
            Some(ReductionStep::RemoveVertex {
                vertex: v,
                out_edge: self.outs[v].iter().next().map(|&w| (v, w)),
            })
        } else {
            None
        }
    }

    /// Every step applicable now, in greedy preference order.
    pub fn applicable(&self) -> Vec<ReductionStep> {
        let n = self.alive.len();
        let mut steps: Vec<ReductionStep> = (0..n).filter_map(|v| self.in_edge_step(v)).collect();
        steps.extend((0..n).filter_map(|v| self.vertex_step(v)));
        steps
    }

    fn greedy_step(&self) -> Option<ReductionStep> {
        let n = self.alive.len();
        (0..n)
            .find_map(|v| self.in_edge_step(v))
            .or_else(|| (0..n).find_map(|v| self.vertex_step(v)))
    }

    /// Applies `step` after checking its precondition against the current
    /// remainder.
    pub fn apply(&mut self, step: ReductionStep) -> Result<()> {
        match step {
            ReductionStep::RemoveInEdge { vertex, edge } => {
                if self.in_edge_step(vertex) != Some(step) {
                    return Err(Error::Contract(format!(
                        "step {step:?}: vertex {vertex} does not have the single in-edge {edge:?}"
                    )));
                }
                self.ins[vertex].remove(&edge.0);
                self.outs[edge.0].remove(&vertex);
            }
            ReductionStep::RemoveVertex { vertex, out_edge } => {
                if self.vertex_step(vertex) != Some(step) {
                    return Err(Error::Contract(format!(
                        "step {step:?}: vertex {vertex} is not removable with out-edge {out_edge:?}"
                    )));
                }
                if let Some((_, w)) = out_edge {
                    self.ins[w].remove(&vertex);
                    self.outs[vertex].clear();
                }
                self.alive[vertex] = false;
                self.remaining -= 1;
            }
        }
        Ok(())
    }

    fn key(&self) -> (Vec<bool>, Vec<(usize, usize)>) {
        let edges = self
            .outs
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
            .collect();
        (self.alive.clone(), edges)
    }
}

impl DegeneracyCertificate {
    pub fn steps(&self) -> &[ReductionStep] {
        &self.steps
    }

    /// Replays the certificate on a fresh copy of `g`, checking every
    /// precondition and that the graph ends empty.
    pub fn replay(&self, g: &DirectedGraph) -> Result<()> {
        let mut state = Reducer::new(g);
        for &step in &self.steps {
            state.apply(step)?;
        }
        if state.is_empty() {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "certificate leaves {} vertices",
                state.remaining
            )))
        }
    }
}

/// Greedy reduction; `None` when it gets stuck on a nonempty remainder.
pub fn greedy_certificate(g: &DirectedGraph) -> Option<DegeneracyCertificate> {
    let mut state = Reducer::new(g);
    let mut steps = Vec::new();
    while !state.is_empty() {
        let step = state.greedy_step()?;
        state.apply(step).expect("greedy picks applicable steps");
        steps.push(step);
    }
    Some(DegeneracyCertificate { steps })
}

/// Depth-first search over all step orders with memoized dead states.
/// `Ok(None)` means no certificate exists; `Err(TooLarge)` when
/// `n > EXHAUSTIVE_LIMIT`; `Err(Contract)` when the state budget runs out.
pub fn exhaustive_certificate(g: &DirectedGraph) -> Result<Option<DegeneracyCertificate>> {
    if g.n() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut dead = HashSet::new();
    let mut steps = Vec::new();
    let found = search(Reducer::new(g), &mut steps, &mut dead)?;
    Ok(found.then_some(DegeneracyCertificate { steps }))
}

type StateKey = (Vec<bool>, Vec<(usize, usize)>);

fn search(
    state: Reducer,
    steps: &mut Vec<ReductionStep>,
    dead: &mut HashSet<StateKey>,
) -> Result<bool> {
    if state.is_empty() {
        return Ok(true);
    }
    if dead.len() > EXHAUSTIVE_BUDGET {
        return Err(Error::Contract(
            "exhaustive degeneracy search exceeded its budget".into(),
        ));
    }
    let key = state.key();
    if dead.contains(&key) {
        return Ok(false);
    }
    for step in state.applicable() {
        let mut next = state.clone();
        next.apply(step)?;
        steps.push(step);
        if search(next, steps, dead)? {
            return Ok(true);
        }
        steps.pop();
    }
    dead.insert(key);
    Ok(false)
}

/// Greedy first, exhaustive fallback for `n <= EXHAUSTIVE_LIMIT`.
pub fn degeneracy_certificate(g: &DirectedGraph) -> Degeneracy {
    if let Some(certificate) = greedy_certificate(g) {
        return Degeneracy::Certified {
            certificate,
            method: SearchMethod::Greedy,
        };
    }
    match exhaustive_certificate(g) {
        Ok(Some(certificate)) => Degeneracy::Certified {
            certificate,
            method: SearchMethod::Exhaustive,
        },
        Ok(None) => Degeneracy::NotDegenerate,
        Err(_) => Degeneracy::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        clique_with_loops, directed_cycle, directed_path, random_tree, undirected_cycle,
    };
    use crate::rng::seeded;

    fn certified(g: &DirectedGraph) -> DegeneracyCertificate {
        match degeneracy_certificate(g) {
            Degeneracy::Certified { certificate, .. } => {
                certificate.replay(g).unwrap();
                certificate
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn path_and_cycle_are_degenerate() {
        certified(&directed_path(3).unwrap());
        for n in 2..8 {
            certified(&directed_cycle(n).unwrap());
        }
    }

    #[test]
    fn undirected_k4_is_not_degenerate() {
        let k4 =
            DirectedGraph::undirected(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(degeneracy_certificate(&k4), Degeneracy::NotDegenerate);
        assert_eq!(exhaustive_certificate(&k4).unwrap(), None);
    }

    #[test]
    fn trees_are_degenerate() {
        let mut rng = seeded(3);
        for n in 1..15 {
            certified(&random_tree(n, false, &mut rng));
            certified(&random_tree(n, true, &mut rng));
        }
    }

    #[test]
    fn self_loop_only_vertex() {
        // The loop is the single in-edge; removing it leaves an isolated vertex.
        let g = DirectedGraph::new(1, [(0, 0)]).unwrap();
        let cert = certified(&g);
        assert_eq!(cert.steps().len(), 2);
        assert!(matches!(
            degeneracy_certificate(&clique_with_loops(3)),
            Degeneracy::NotDegenerate
        ));
    }

    #[test]
    fn undirected_cycle_status_agrees_with_exhaustive() {
        // Every vertex has in-degree two, so nothing is applicable.
        let g = undirected_cycle(5).unwrap();
        assert_eq!(degeneracy_certificate(&g), Degeneracy::NotDegenerate);
    }

    #[test]
    fn replay_rejects_bad_steps() {
        let g = directed_path(2).unwrap();
        let bogus = DegeneracyCertificate {
            steps: vec![ReductionStep::RemoveVertex {
                vertex: 1,
                out_edge: None,
            }],
        };
        assert!(bogus.replay(&g).is_err());
        let short = DegeneracyCertificate {
            steps: vec![ReductionStep::RemoveInEdge {
                vertex: 1,
                edge: (0, 1),
            }],
        };
        assert!(short.replay(&g).is_err());
    }

    #[test]
    fn greedy_matches_exhaustive_on_small_random_graphs() {
        let mut rng = seeded(11);
        for _ in 0..300 {
            let n = 2 + (rand::Rng::random_range(&mut rng, 0..5));
            let g = crate::generators::random_digraph(n, 0.3, 0.2, &mut rng);
            let greedy = greedy_certificate(&g).is_some();
            let exhaustive = exhaustive_certificate(&g).unwrap().is_some();
            assert_eq!(greedy, exhaustive, "{g}");
        }
    }
}
