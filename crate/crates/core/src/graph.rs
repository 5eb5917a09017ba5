//! Directed feedback graphs.
//!
//! Arms are the vertices `0..n`. Pulling arm `i` reveals the loss of every
//! out-neighbor of `i`; a self-loop `(i, i)` means the pulled arm observes its
//! own loss.
//!
//! The text format is a plain edge list: the first non-comment line holds the
//! vertex count `n`, every following non-empty line holds one directed edge
//! `u v` (0-indexed, whitespace separated). Lines whose first non-blank
//! character is `#` are comments. Duplicate edges are rejected.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A directed graph with optional self-loops and no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    in_nbrs: Vec<Vec<usize>>,
    out_nbrs: Vec<Vec<usize>>,
}

/// Observability class of a feedback graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservabilityClass {
    /// Every vertex has a self-loop or is observed by all other vertices.
    #[serde(rename = "strongly")]
    StronglyObservable,
    /// Every vertex has an in-neighbor, but the graph is not strongly observable.
    #[serde(rename = "weakly")]
    WeaklyObservable,
    /// Some vertex has no in-neighbor at all.
    #[serde(rename = "non")]
    NonObservable,
}

impl ObservabilityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ObservabilityClass::StronglyObservable => "strongly observable",
            ObservabilityClass::WeaklyObservable => "weakly observable",
            ObservabilityClass::NonObservable => "non-observable",
        }
    }
}

impl fmt::Display for ObservabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl DirectedGraph {
    /// Builds a graph on `n` vertices. Fails on an out-of-range endpoint or a
    /// repeated edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidArgument(format!("vertex {w} out of range")));
                }
            }
            if !set.insert((u, v)) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self::from_set(n, set))
    }

    /// Builds a graph from undirected pairs, each contributing both arcs.
    /// A pair `{v, v}` becomes a single self-loop. Repeated pairs collapse.
    pub fn undirected(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidArgument(format!("vertex {w} out of range")));
                }
            }
            set.insert((u, v));
            set.insert((v, u));
        }
        Ok(Self::from_set(n, set))
    }

    pub(crate) fn from_set(n: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let mut in_nbrs = vec![Vec::new(); n];
        let mut out_nbrs = vec![Vec::new(); n];
        // BTreeSet order keeps both neighbor lists sorted.
        for &(u, v) in &set {
            out_nbrs[u].push(v);
            in_nbrs[v].push(u);
        }
        for list in &mut in_nbrs {
            list.sort_unstable();
        }
        DirectedGraph {
            n,
            edges: set.into_iter().collect(),
            in_nbrs,
            out_nbrs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn in_nbrs(&self, v: usize) -> &[usize] {
        &self.in_nbrs[v]
    }

    pub fn out_nbrs(&self, v: usize) -> &[usize] {
        &self.out_nbrs[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out_nbrs[u].binary_search(&v).is_ok()
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    /// The vertices without a self-loop. Every one of them must be covered by
    /// an in-neighbor for the graph to be learnable.
    pub fn self_loop_free_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.has_self_loop(v)).collect()
    }

    /// Membership mask for [`Self::self_loop_free_set`].
    pub fn self_loop_free_mask(&self) -> Vec<bool> {
        (0..self.n).map(|v| !self.has_self_loop(v)).collect()
    }

    pub fn is_strongly_observable_vertex(&self, v: usize) -> bool {
        self.has_self_loop(v) || self.in_nbrs[v].iter().filter(|&&u| u != v).count() == self.n - 1
    }

    pub fn classify(&self) -> ObservabilityClass {
        if (0..self.n).any(|v| self.in_nbrs[v].is_empty()) {
            ObservabilityClass::NonObservable
        } else if (0..self.n).all(|v| self.is_strongly_observable_vertex(v)) {
            ObservabilityClass::StronglyObservable
        } else {
            ObservabilityClass::WeaklyObservable
        }
    }

    /// Same graph with vertices relabelled: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Parses the edge-list text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut set = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match n {
                None => {
                    if fields.len() != 1 {
                        return Err(err(format!("expected vertex count, found {line:?}")));
                    }
                    let count = fields[0]
                        .parse::<usize>()
                        .map_err(|_| err(format!("invalid vertex count {:?}", fields[0])))?;
                    n = Some(count);
                }
                Some(count) => {
                    if fields.len() != 2 {
                        return Err(err(format!("expected \"u v\", found {line:?}")));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, field) in ends.iter_mut().zip(&fields) {
                        *slot = field
                            .parse::<usize>()
                            .map_err(|_| err(format!("invalid vertex {field:?}")))?;
                        if *slot >= count {
                            return Err(err(format!("vertex {slot} out of range")));
                        }
                    }
                    if !set.insert((ends[0], ends[1])) {
                        return Err(err(format!("duplicate edge ({}, {})", ends[0], ends[1])));
                    }
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            message: "missing vertex count".into(),
        })?;
        Ok(Self::from_set(n, set))
    }

    /// Serializes to the edge-list text format, edges in lexicographic order.
    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
