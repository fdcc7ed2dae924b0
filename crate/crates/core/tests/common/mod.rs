#![allow(dead_code)]

use std::collections::HashMap;

use imscale::cascade::PropagationModel;
use imscale::front::Fitness;
use imscale::generators::PlantedPowerLaw;
use imscale::moea::dominates;
use imscale::{Graph, NodeId};

/// Expected cascade size by exact recursion over rounds. A state is the
/// active set and the nodes activated in the last round; every inactive
/// neighbour of the last round activates independently with probability
/// `1 - prod(1 - p)` over the links it receives attempts on.
pub fn exact_spread(g: &Graph, seeds: &[NodeId], model: PropagationModel) -> f64 {
    assert!(g.node_count() <= 64);
    let mask: u64 = seeds.iter().fold(0, |m, &v| m | (1 << v));
    let mut memo = HashMap::new();
    expand(g, model, mask, mask, &mut memo)
}

fn expand(g: &Graph, model: PropagationModel, active: u64, fresh: u64, memo: &mut HashMap<(u64, u64), f64>) -> f64 {
    if let Some(&v) = memo.get(&(active, fresh)) {
        return v;
    }
    let mut fail: HashMap<NodeId, f64> = HashMap::new();
    for u in (0..g.node_count()).filter(|&u| fresh >> u & 1 == 1) {
        for &w in g.neighbors(u) {
            if active >> w & 1 == 0 {
                *fail.entry(w).or_insert(1.0) *= 1.0 - model.probability(g, w);
            }
        }
    }
    let mut candidates: Vec<(NodeId, f64)> = fail.into_iter().map(|(w, f)| (w, 1.0 - f)).collect();
    candidates.sort_by_key(|&(w, _)| w);
    let result = if candidates.is_empty() {
        active.count_ones() as f64
    } else {
        let mut total = 0.0;
        for subset in 0u64..1 << candidates.len() {
            let mut prob = 1.0;
            let mut next = 0u64;
            for (i, &(w, q)) in candidates.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    prob *= q;
                    next |= 1 << w;
                } else {
                    prob *= 1.0 - q;
                }
            }
            if prob == 0.0 {
                continue;
            }
            total += prob
                * if next == 0 {
                    active.count_ones() as f64
                } else {
                    expand(g, model, active | next, next, memo)
                };
        }
        total
    };
    memo.insert((active, fresh), result);
    result
}

/// IC spread as bond percolation: every edge is open with probability `p`,
/// the spread is the number of nodes connected to a seed through open edges.
pub fn percolation_spread(g: &Graph, seeds: &[NodeId], p: f64) -> f64 {
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    assert!(edges.len() <= 20);
    let mut total = 0.0;
    for open in 0u64..1 << edges.len() {
        let k = open.count_ones() as i32;
        let prob = p.powi(k) * (1.0 - p).powi(edges.len() as i32 - k);
        if prob == 0.0 {
            continue;
        }
        let mut reached = vec![false; g.node_count()];
        let mut stack: Vec<NodeId> = seeds.to_vec();
        for &s in seeds {
            reached[s] = true;
        }
        while let Some(u) = stack.pop() {
            for (i, &(a, b)) in edges.iter().enumerate() {
                if open >> i & 1 == 0 {
                    continue;
                }
                let other = if a == u { b } else if b == u { a } else { continue };
                if !reached[other] {
                    reached[other] = true;
                    stack.push(other);
                }
            }
        }
        total += prob * reached.iter().filter(|&&r| r).count() as f64;
    }
    total
}

/// Layers of mutually non-dominated points, peeled one at a time.
pub fn peel_fronts(points: &[Fitness]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let layer: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(points[j], points[i])))
            .collect();
        left.retain(|i| !layer.contains(i));
        out.push(layer);
    }
    out
}

/// Crowding distance by direct neighbour search: in each objective the
/// neighbours of a point are its predecessor and successor under the order
/// (value, position in `front`).
pub fn crowding_oracle(points: &[Fitness], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let objectives: [fn(&Fitness) -> f64; 2] = [|f| f.influence, |f| f.seed_fraction];
    let mut out = vec![0.0; n];
    for obj in objectives {
        let key = |i: usize| (obj(&points[front[i]]), i);
        let before = |a: usize, b: usize| {
            let (va, ia) = key(a);
            let (vb, ib) = key(b);
            va < vb || (va == vb && ia < ib)
        };
        let position: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| before(j, i)).count()).collect();
        let at = |pos: usize| (0..n).find(|&j| position[j] == pos).unwrap();
        let lo = key(at(0)).0;
        let hi = key(at(n - 1)).0;
        for i in 0..n {
            if position[i] == 0 || position[i] == n - 1 {
                out[i] = f64::INFINITY;
            } else if hi > lo {
                let prev = key(at(position[i] - 1)).0;
                let next = key(at(position[i] + 1)).0;
                out[i] += (next - prev) / (hi - lo);
            }
        }
    }
    out
}

/// 2000 nodes in 4 communities with power-law degrees of exponent 2, cut
/// off near the structural limit `sqrt(<d> n)`; meant for stub matching.
pub fn shape_network() -> PlantedPowerLaw {
    let mut cfg = PlantedPowerLaw::new(vec![400, 450, 550, 600], 2.0);
    cfg.d_min = 1;
    cfg.d_max = 100;
    cfg.mixing = 0.1;
    cfg
}

/// 1000 nodes in 5 communities with power-law-like degrees.
pub fn quality_network() -> PlantedPowerLaw {
    let mut cfg = PlantedPowerLaw::new(vec![150, 180, 200, 220, 250], 2.5);
    cfg.d_min = 2;
    cfg.d_max = 60;
    cfg.mixing = 0.1;
    cfg
}
