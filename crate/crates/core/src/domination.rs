//! Fractional and integral weak domination and vertex packing.
//!
//! Let `U` be the arms without a self-loop. The covering LP
//!
//! ```text
//! minimize  sum_i x_i   s.t.  sum_{i in N_in(j)} x_i >= 1  for j in U,   0 <= x_i <= 1
//! ```
//!
//! has optimum `delta_star`, the fractional weak domination number. Its dual
//!
//! ```text
//! maximize  sum_{j in U} y_j   s.t.  sum_{j in N_out(i) ∩ U} y_j <= 1  for i in V,   0 <= y_j <= 1
//! ```
//!
//! has optimum `zeta_star`, the fractional vertex packing number, and the two
//! coincide. Both LPs are solved independently (exact rational simplex) so the
//! equality is a real check. The integral optima `delta` (smallest set whose
//! out-neighborhoods cover `U`) and `zeta` (largest subset of `U` meeting every
//! out-neighborhood at most once) come from exact branch and bound, falling
//! back to tagged greedy bounds when the search budget runs out.

use num_rational::BigRational;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, ObservabilityClass};
use crate::simplex::{minimize, Constraint, LinearProgram, LpOutcome, LpScalar, Relation};

/// Feasibility and duality tolerance.
pub const TOL: f64 = 1e-6;

/// Node budget for the exact integral searches.
pub const SEARCH_BUDGET: u64 = 2_000_000;

/// Optimal solution of the covering LP.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationSolution {
    /// One weight per vertex, in `[0, 1]`.
    pub x: Vec<f64>,
    /// `delta_star = sum x`.
    pub value: f64,
}

/// Solution of the packing LP or its integral restriction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackingSolution {
    /// One weight per vertex; always zero on vertices with a self-loop.
    pub y: Vec<f64>,
    pub value: f64,
    pub integral: bool,
}

/// Integral optimum with its witness set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralSolution {
    pub value: usize,
    pub witness: Vec<usize>,
    /// False when the search budget ran out and `value` is only a greedy
    /// bound (upper for `delta`, lower for `zeta`).
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub delta_star: f64,
    pub zeta_star: f64,
    pub delta: usize,
    pub zeta: usize,
    /// `delta / delta_star`.
    pub primal_gap: f64,
    /// `zeta_star / zeta`, the packing integrality gap.
    pub dual_gap: f64,
    pub observability: ObservabilityClass,
    /// Both integral values are exact optima.
    pub exact: bool,
}

impl DominationSolution {
    /// `x / sum(x)`: the exploration distribution. Uniform when `x` is zero
    /// (no vertex needs covering).
    pub fn exploration_distribution(&self) -> Vec<f64> {
        let n = self.x.len();
        if self.value <= 0.0 {
            return vec![1.0 / n as f64; n];
        }
        let total: f64 = self.x.iter().sum();
        self.x.iter().map(|v| v / total).collect()
    }

    /// Direct constraint evaluation, independent of the solver.
    pub fn is_feasible(&self, g: &DirectedGraph, tol: f64) -> bool {
        self.x.len() == g.n()
            && self.x.iter().all(|&v| (-tol..=1.0 + tol).contains(&v))
            && g.self_loop_free_set()
                .into_iter()
                .all(|j| g.in_nbrs(j).iter().map(|&i| self.x[i]).sum::<f64>() >= 1.0 - tol)
    }
}

impl PackingSolution {
    /// Integral solution with support `set`. Every member must lack a
    /// self-loop.
    pub fn from_set(g: &DirectedGraph, set: &[usize]) -> Result<Self> {
        let mut y = vec![0.0; g.n()];
        for &v in set {
            if v >= g.n() {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
            }
            if g.has_self_loop(v) {
                return Err(Error::Contract(format!("vertex {v} has a self-loop")));
            }
            y[v] = 1.0;
        }
        let value = y.iter().sum();
        Ok(PackingSolution {
            y,
            value,
            integral: true,
        })
    }

    /// Vertices with weight above one half.
    pub fn support(&self) -> Vec<usize> {
        (0..self.y.len()).filter(|&v| self.y[v] > 0.5).collect()
    }

    /// Direct constraint evaluation, independent of the solver.
    pub fn is_feasible(&self, g: &DirectedGraph, tol: f64) -> bool {
        if self.y.len() != g.n() {
            return false;
        }
        let bounds = (0..g.n()).all(|v| {
            let w = self.y[v];
            if g.has_self_loop(v) {
                w.abs() <= tol
            } else {
                (-tol..=1.0 + tol).contains(&w) && (!self.integral || w == 0.0 || w == 1.0)
            }
        });
        bounds
            && (0..g.n())
                .all(|i| g.out_nbrs(i).iter().map(|&j| self.y[j]).sum::<f64>() <= 1.0 + tol)
    }
}

/// Fails with the first vertex of `U` that has no in-neighbor.
pub fn check_coverable(g: &DirectedGraph) -> Result<()> {
    match g
        .self_loop_free_set()
        .into_iter()
        .find(|&j| g.in_nbrs(j).is_empty())
    {
        Some(vertex) => Err(Error::Infeasible { vertex }),
        None => Ok(()),
    }
}

fn covering_lp<T: LpScalar>(g: &DirectedGraph) -> LinearProgram<T> {
    let n = g.n();
    let mut rows = Vec::new();
    for j in g.self_loop_free_set() {
        let mut coeffs = vec![T::zero(); n];
        for &i in g.in_nbrs(j) {
            coeffs[i] = T::one();
        }
        rows.push(Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs: T::one(),
        });
    }
    for i in 0..n {
        let mut coeffs = vec![T::zero(); n];
        coeffs[i] = T::one();
        rows.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: T::one(),
        });
    }
    LinearProgram {
        objective: vec![T::one(); n],
        rows,
    }
}

fn packing_lp<T: LpScalar>(g: &DirectedGraph, u: &[usize]) -> LinearProgram<T> {
    let pos = position_map(g.n(), u);
    let mut rows = Vec::new();
    for i in 0..g.n() {
        let members: Vec<usize> = g.out_nbrs(i).iter().filter_map(|&j| pos[j]).collect();
        if members.is_empty() {
            continue;
        }
        let mut coeffs = vec![T::zero(); u.len()];
        for p in members {
            coeffs[p] = T::one();
        }
        rows.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: T::one(),
        });
    }
    for p in 0..u.len() {
        let mut coeffs = vec![T::zero(); u.len()];
        coeffs[p] = T::one();
        rows.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: T::one(),
        });
    }
    LinearProgram {
        objective: vec![-T::one(); u.len()],
        rows,
    }
}

fn position_map(n: usize, u: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (p, &j) in u.iter().enumerate() {
        pos[j] = Some(p);
    }
    pos
}

/// Optimal covering-LP solution over exact rationals.
pub fn solve_primal(g: &DirectedGraph) -> Result<DominationSolution> {
    solve_primal_in::<BigRational>(g)
}

/// Covering LP solved in the scalar field `T`.
pub fn solve_primal_in<T: LpScalar>(g: &DirectedGraph) -> Result<DominationSolution> {
    check_coverable(g)?;
    match minimize(&covering_lp::<T>(g)) {
        LpOutcome::Optimal { x, value } => Ok(DominationSolution {
            x: x.iter().map(|v| v.to_f64()).collect(),
            value: value.to_f64(),
        }),
        other => Err(Error::Contract(format!("covering LP returned {other:?}"))),
    }
}

/// Optimal packing-LP solution over exact rationals.
pub fn solve_dual(g: &DirectedGraph) -> Result<PackingSolution> {
    solve_dual_in::<BigRational>(g)
}

/// Packing LP solved in the scalar field `T`. Unlike the covering LP it is
/// always feasible and bounded, so uncovered vertices are not an error.
pub fn solve_dual_in<T: LpScalar>(g: &DirectedGraph) -> Result<PackingSolution> {
    let u = g.self_loop_free_set();
    match minimize(&packing_lp::<T>(g, &u)) {
        LpOutcome::Optimal { x, value } => {
            let mut y = vec![0.0; g.n()];
            for (p, &j) in u.iter().enumerate() {
                y[j] = x[p].to_f64();
            }
            let integral = y.iter().all(|&w| w == 0.0 || w == 1.0);
            Ok(PackingSolution {
                y,
                value: 0.0 - value.to_f64(),
                integral,
            })
        }
        other => Err(Error::Contract(format!("packing LP returned {other:?}"))),
    }
}

/// Greedy cover of `U`: repeatedly take the vertex covering the most
/// uncovered members, lowest index on ties.
pub fn greedy_dominating_set(g: &DirectedGraph) -> Result<Vec<usize>> {
    check_coverable(g)?;
    let u = g.self_loop_free_set();
    let covers = cover_sets(g, &u);
    let mut uncovered = BitSet::from_iter(u.len(), 0..u.len());
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let best = (0..g.n())
            .max_by_key(|&i| (covers[i].intersection_len(&uncovered), std::cmp::Reverse(i)))
            .expect("n >= 1");
        uncovered.difference_with(&covers[best]);
        chosen.push(best);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

fn cover_sets(g: &DirectedGraph, u: &[usize]) -> Vec<BitSet> {
    let pos = position_map(g.n(), u);
    (0..g.n())
        .map(|i| BitSet::from_iter(u.len(), g.out_nbrs(i).iter().filter_map(|&j| pos[j])))
        .collect()
}

struct CoverSearch<'a> {
    g: &'a DirectedGraph,
    u: &'a [usize],
    covers: Vec<BitSet>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl CoverSearch<'_> {
    fn run(&mut self, uncovered: &BitSet, chosen: &mut Vec<usize>, forbidden: &mut BitSet) {
        self.nodes += 1;
        if self.nodes > self.budget {
            return;
        }
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let remaining = uncovered.len();
        let max_cover = (0..self.g.n())
            .filter(|&i| !forbidden.contains(i))
            .map(|i| self.covers[i].intersection_len(uncovered))
            .max()
            .unwrap_or(0);
        if max_cover == 0 || chosen.len() + remaining.div_ceil(max_cover) >= self.best.len() {
            return;
        }
        // Branch on the uncovered vertex with the fewest usable dominators.
        let (_, target) = uncovered
            .iter()
            .map(|p| {
                let k = self
                    .g
                    .in_nbrs(self.u[p])
                    .iter()
                    .filter(|&&i| !forbidden.contains(i))
                    .count();
                (k, p)
            })
            .min()
            .expect("nonempty");
        let mut options: Vec<usize> = self
            .g
            .in_nbrs(self.u[target])
            .iter()
            .copied()
            .filter(|&i| !forbidden.contains(i))
            .collect();
        options.sort_by_key(|&i| {
            (
                std::cmp::Reverse(self.covers[i].intersection_len(uncovered)),
                i,
            )
        });
        let mut added = Vec::new();
        for i in options {
            let mut next = uncovered.clone();
            next.difference_with(&self.covers[i]);
            chosen.push(i);
            self.run(&next, chosen, forbidden);
            chosen.pop();
            // Later siblings never use `i`: those covers were explored here.
            forbidden.insert(i);
            added.push(i);
        }
        for i in added {
            forbidden.remove(i);
        }
    }
}

/// Minimum set whose out-neighborhoods cover `U`.
pub fn integral_delta(g: &DirectedGraph) -> Result<IntegralSolution> {
    integral_delta_with_budget(g, SEARCH_BUDGET)
}

pub fn integral_delta_with_budget(g: &DirectedGraph, budget: u64) -> Result<IntegralSolution> {
    let greedy = greedy_dominating_set(g)?;
    let u = g.self_loop_free_set();
    let mut search = CoverSearch {
        g,
        u: &u,
        covers: cover_sets(g, &u),
        best: greedy,
        nodes: 0,
        budget,
    };
    let mut chosen = Vec::new();
    let mut forbidden = BitSet::new(g.n());
    search.run(
        &BitSet::from_iter(u.len(), 0..u.len()),
        &mut chosen,
        &mut forbidden,
    );
    let exact = search.nodes <= budget;
    let mut witness = search.best;
    witness.sort_unstable();
    Ok(IntegralSolution {
        value: witness.len(),
        witness,
        exact,
    })
}

/// Conflict graph on `U`: two members conflict when some vertex sees both.
fn conflicts(g: &DirectedGraph, u: &[usize]) -> Vec<BitSet> {
    let pos = position_map(g.n(), u);
    let mut adj = vec![BitSet::new(u.len()); u.len()];
    for i in 0..g.n() {
        let members: Vec<usize> = g.out_nbrs(i).iter().filter_map(|&j| pos[j]).collect();
        for &a in &members {
            for &b in &members {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    adj
}

struct PackingSearch<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl PackingSearch<'_> {
    fn run(&mut self, cands: BitSet, current: &mut Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.budget || current.len() + cands.len() <= self.best.len() {
            return;
        }
        let pick = cands
            .iter()
            .map(|p| (self.adj[p].intersection_len(&cands), p))
            .max_by_key(|&(d, p)| (d, std::cmp::Reverse(p)));
        let Some((degree, v)) = pick else {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        };
        if degree == 0 {
            let before = current.len();
            current.extend(cands.iter());
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            current.truncate(before);
            return;
        }
        let mut with_v = cands.clone();
        with_v.difference_with(&self.adj[v]);
        with_v.remove(v);
        current.push(v);
        self.run(with_v, current);
        current.pop();
        let mut without_v = cands;
        without_v.remove(v);
        self.run(without_v, current);
    }
}

/// Maximum vertex packing set on `U`.
pub fn integral_zeta(g: &DirectedGraph) -> IntegralSolution {
    integral_zeta_with_budget(g, SEARCH_BUDGET)
}

pub fn integral_zeta_with_budget(g: &DirectedGraph, budget: u64) -> IntegralSolution {
    let u = g.self_loop_free_set();
    let adj = conflicts(g, &u);
    // Min-degree greedy as the incumbent.
    let mut greedy = Vec::new();
    let mut cands = BitSet::from_iter(u.len(), 0..u.len());
    while let Some((_, v)) = cands
        .iter()
        .map(|p| (adj[p].intersection_len(&cands), p))
        .min()
    {
        greedy.push(v);
        cands.difference_with(&adj[v]);
        cands.remove(v);
    }
    let mut search = PackingSearch {
        adj: &adj,
        best: greedy,
        nodes: 0,
        budget,
    };
    search.run(BitSet::from_iter(u.len(), 0..u.len()), &mut Vec::new());
    let exact = search.nodes <= budget;
    let mut witness: Vec<usize> = search.best.into_iter().map(|p| u[p]).collect();
    witness.sort_unstable();
    IntegralSolution {
        value: witness.len(),
        witness,
        exact,
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// All four parameters of `g` with both integrality gaps.
pub fn gap_report(g: &DirectedGraph) -> Result<GapReport> {
    let primal = solve_primal(g)?;
    let dual = solve_dual(g)?;
    if (primal.value - dual.value).abs() > TOL {
        return Err(Error::Contract(format!(
            "duality gap: covering optimum {} vs packing optimum {}",
            primal.value, dual.value
        )));
    }
    let delta = integral_delta(g)?;
    let zeta = integral_zeta(g);
    Ok(GapReport {
        delta_star: primal.value,
        zeta_star: dual.value,
        delta: delta.value,
        zeta: zeta.value,
        primal_gap: ratio(delta.value as f64, primal.value),
        dual_gap: ratio(dual.value, zeta.value as f64),
        observability: g.classify(),
        exact: delta.exact && zeta.exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        complete_bipartite, directed_path, directed_star, figure1, orthogonal_f2k,
    };

    #[test]
    fn bipartite_values() {
        for (a, b) in [(1, 2), (2, 3), (5, 5)] {
            let g = complete_bipartite(a, b);
            let p = solve_primal(&g).unwrap();
            assert!((p.value - 2.0).abs() < 1e-12, "{a},{b}: {}", p.value);
            assert!(p.is_feasible(&g, 1e-9));
            let d = solve_dual(&g).unwrap();
            assert!((d.value - 2.0).abs() < 1e-12);
            assert!(d.is_feasible(&g, 1e-9));
            assert_eq!(integral_delta(&g).unwrap().value, 2);
            let r = gap_report(&g).unwrap();
            assert_eq!((r.primal_gap, r.dual_gap, r.zeta), (1.0, 1.0, 2));
        }
    }

    #[test]
    fn figure1_values() {
        let g = figure1();
        let p = solve_primal(&g).unwrap();
        let d = solve_dual(&g).unwrap();
        assert!((p.value - 2.0).abs() < 1e-12);
        assert!((p.value - d.value).abs() < 1e-12);
        let delta = integral_delta(&g).unwrap();
        assert_eq!(delta.value, 2);
        assert!(delta.witness.contains(&2));
    }

    #[test]
    fn orthogonal_k4() {
        let g = orthogonal_f2k(4).unwrap();
        let p = solve_primal(&g).unwrap();
        assert!(p.value <= 2.0 + TOL, "{}", p.value);
        let delta = integral_delta(&g).unwrap();
        assert!(delta.exact);
        assert_eq!(delta.value, 4);
        let r = gap_report(&g).unwrap();
        assert!(r.primal_gap >= 2.0 - 1e-9);
    }

    #[test]
    fn zeta_examples() {
        // Leaves pairwise conflict through the center; the center and the
        // extra vertex d each add one more.
        let star = directed_star(4);
        let z = integral_zeta(&star);
        assert_eq!(z.value, 3);
        assert_eq!(
            z.witness.iter().filter(|&&v| (1..=4).contains(&v)).count(),
            1
        );
        let path = directed_path(3).unwrap();
        let z = integral_zeta(&path);
        assert_eq!(z.value, 3);
        let fork = DirectedGraph::new(3, [(0, 1), (0, 2), (0, 0)]).unwrap();
        assert_eq!(integral_zeta(&fork).value, 1);
        // U empty: nothing to pack.
        let loops = crate::generators::clique_with_loops(3);
        let z = integral_zeta(&loops);
        assert_eq!((z.value, z.witness.len()), (0, 0));
        let r = gap_report(&loops).unwrap();
        assert_eq!((r.delta_star, r.primal_gap, r.dual_gap), (0.0, 1.0, 1.0));
    }

    #[test]
    fn infeasible_names_vertex() {
        let g = DirectedGraph::new(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(
            solve_primal(&g).unwrap_err(),
            Error::Infeasible { vertex: 2 }
        );
        // The packing side stays well defined: vertex 2 is unconstrained.
        assert_eq!(solve_dual(&g).unwrap().value, 3.0);
        assert!(integral_delta(&g).is_err());
    }

    #[test]
    fn float_and_exact_agree() {
        let g = orthogonal_f2k(3).unwrap();
        let exact = solve_primal(&g).unwrap();
        let float = solve_primal_in::<f64>(&g).unwrap();
        assert!((exact.value - float.value).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_tagged() {
        let g = orthogonal_f2k(4).unwrap();
        let d = integral_delta_with_budget(&g, 1).unwrap();
        assert!(!d.exact);
        assert!(d.value >= 4);
        let z = integral_zeta_with_budget(&g, 1);
        assert!(!z.exact);
    }

    #[test]
    fn exploration_distribution_normalizes() {
        let g = complete_bipartite(2, 3);
        let p = solve_primal(&g).unwrap();
        let u = p.exploration_distribution();
        assert!((u.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
