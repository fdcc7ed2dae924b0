//! CELF lazy-greedy baseline.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::cascade::{estimate_influence, PropagationModel};
use crate::error::{Error, Result};
use crate::front::{Fitness, Front, FrontEntry};
use crate::graph::{Graph, NodeId};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    pub k: usize,
    pub seeds: Vec<NodeId>,
    /// Spread estimate of `seeds` (mean cascade size).
    pub influence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyCurve {
    pub steps: Vec<GreedyStep>,
    /// Number of spread estimates made while choosing seeds.
    pub gain_evaluations: usize,
    pub total_attempts: u64,
}

impl GreedyCurve {
    pub fn selected(&self) -> &[NodeId] {
        self.steps.last().map_or(&[], |s| &s.seeds)
    }

    /// Curve as a front on a graph of `n` nodes.
    pub fn to_front(&self, n: usize) -> Front {
        let n = n as f64;
        Front::from_entries(self.steps.iter().map(|s| FrontEntry {
            fitness: Fitness::new(s.influence / n, s.k as f64 / n),
            seeds: s.seeds.clone(),
        }))
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    spread: f64,
    node: NodeId,
    // size of the seed set the gain was computed against
    fresh_at: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap: larger gain first, then smaller node id
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then(other.node.cmp(&self.node))
    }
}

/// Lazy greedy over nodes `0..n`. `spread(seeds, candidate)` estimates the
/// spread of `seeds` (which already ends with `candidate`); `initial[v]` is the
/// spread of `{v}`.
pub fn lazy_greedy<F>(initial: &[f64], k_max: usize, mut spread: F) -> Result<(Vec<GreedyStep>, usize)>
where
    F: FnMut(&[NodeId], NodeId) -> Result<f64>,
{
    let mut heap: BinaryHeap<Candidate> = initial
        .iter()
        .enumerate()
        .map(|(node, &s)| Candidate {
            gain: s,
            spread: s,
            node,
            fresh_at: 0,
        })
        .collect();
    let mut evaluations = initial.len();
    let mut selected: Vec<NodeId> = Vec::with_capacity(k_max);
    let mut current = 0.0;
    let mut steps = Vec::with_capacity(k_max);
    let mut trial = Vec::with_capacity(k_max);
    while selected.len() < k_max {
        let Some(top) = heap.pop() else { break };
        if top.fresh_at == selected.len() {
            selected.push(top.node);
            current = top.spread;
            steps.push(GreedyStep {
                k: selected.len(),
                seeds: selected.clone(),
                influence: current,
            });
            continue;
        }
        trial.clear();
        trial.extend_from_slice(&selected);
        trial.push(top.node);
        let value = spread(&trial, top.node)?;
        evaluations += 1;
        heap.push(Candidate {
            gain: value - current,
            spread: value,
            node: top.node,
            fresh_at: selected.len(),
        });
    }
    Ok((steps, evaluations))
}

/// Plain greedy: every remaining node is re-evaluated at every step.
pub fn naive_greedy<F>(n: usize, k_max: usize, mut spread: F) -> Result<(Vec<GreedyStep>, usize)>
where
    F: FnMut(&[NodeId], NodeId) -> Result<f64>,
{
    let mut selected: Vec<NodeId> = Vec::new();
    let mut current = 0.0;
    let mut steps = Vec::new();
    let mut evaluations = 0;
    let mut trial = Vec::new();
    while selected.len() < k_max.min(n) {
        let mut best: Option<(f64, f64, NodeId)> = None;
        for v in (0..n).filter(|v| !selected.contains(v)) {
            trial.clear();
            trial.extend_from_slice(&selected);
            trial.push(v);
            let value = spread(&trial, v)?;
            evaluations += 1;
            let gain = value - current;
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, value, v));
            }
        }
        let (_, value, v) = best.expect("a candidate remains");
        selected.push(v);
        current = value;
        steps.push(GreedyStep {
            k: selected.len(),
            seeds: selected.clone(),
            influence: current,
        });
    }
    Ok((steps, evaluations))
}

/// CELF with Monte-Carlo spread estimates. The estimate for candidate `v`
/// when the seed set has `k` members uses a stream derived from
/// `(rng_seed, k, v)`.
pub fn celf(
    g: &Graph,
    model: PropagationModel,
    k_max: usize,
    n_sims: usize,
    rng_seed: u64,
) -> Result<GreedyCurve> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let seed_for = |k: usize, v: NodeId| rng::derive(rng_seed, &[k as u64, v as u64]);
    let sweep: Vec<(f64, u64)> = g
        .nodes()
        .into_par_iter()
        .map(|v| {
            let est = estimate_influence(g, &[v], model, n_sims, seed_for(0, v))?;
            Ok((est.mean, est.total_attempts))
        })
        .collect::<Result<_>>()?;
    let mut attempts: u64 = sweep.iter().map(|&(_, a)| a).sum();
    let initial: Vec<f64> = sweep.iter().map(|&(m, _)| m).collect();
    let (steps, gain_evaluations) = lazy_greedy(&initial, k_max.min(g.node_count()), |seeds, v| {
        let est = estimate_influence(g, seeds, model, n_sims, seed_for(seeds.len() - 1, v))?;
        attempts += est.total_attempts;
        Ok(est.mean)
    })?;
    Ok(GreedyCurve {
        steps,
        gain_evaluations,
        total_attempts: attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_cascade_picks_components_by_size() {
        // components of size 5 and 3
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (6, 7)];
        let g = Graph::from_edges(8, edges).unwrap();
        let curve = celf(&g, PropagationModel::ic(1.0).unwrap(), 2, 5, 0).unwrap();
        assert_eq!(curve.steps.len(), 2);
        assert!(curve.steps[0].seeds[0] < 5);
        assert_eq!(curve.steps[0].influence, 5.0);
        assert!(curve.steps[1].seeds[1] >= 5);
        assert_eq!(curve.steps[1].influence, 8.0);
        // the smallest-id node wins the tie
        assert_eq!(curve.selected(), &[0, 5]);
    }

    #[test]
    fn single_pick_is_the_best_single_node() {
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (4, 5)]).unwrap();
        let model = PropagationModel::ic(1.0).unwrap();
        let curve = celf(&g, model, 1, 3, 1).unwrap();
        assert_eq!(curve.selected(), &[0]);
        assert_eq!(curve.gain_evaluations, 6);
    }

    #[test]
    fn front_from_curve() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (6, 7)];
        let g = Graph::from_edges(8, edges).unwrap();
        let curve = celf(&g, PropagationModel::ic(1.0).unwrap(), 3, 2, 0).unwrap();
        let front = curve.to_front(8);
        // the third seed adds nothing, so it is dominated
        assert_eq!(front.points(), vec![Fitness::new(5.0 / 8.0, 1.0 / 8.0), Fitness::new(1.0, 2.0 / 8.0)]);
    }

    #[test]
    fn zero_budget_rejected() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(celf(&g, PropagationModel::wc(), 0, 1, 0).is_err());
    }
}
