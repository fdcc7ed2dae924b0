//! Discrete-time cascade propagation (independent and weighted cascade).
//!
//! A simulation starts with the seed set active. Each round, every node
//! activated in the previous round tries once to activate each neighbour
//! that was inactive at the start of the round; the process stops when a
//! round activates nobody. Every such try is an *activation attempt*, the
//! runtime proxy reported throughout the crate.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PropagationModel {
    /// Uniform activation probability on every link.
    Ic { p: f64 },
    /// Activation probability `1 / deg(target)`.
    Wc,
}

impl PropagationModel {
    /// `p` must lie in `[0, 1]`; zero is accepted so that degenerate runs can
    /// be expressed.
    pub fn ic(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "activation probability {p} is outside [0, 1]"
            )));
        }
        Ok(PropagationModel::Ic { p })
    }

    pub fn wc() -> Self {
        PropagationModel::Wc
    }

    #[inline]
    pub fn probability(&self, g: &Graph, target: NodeId) -> f64 {
        match *self {
            PropagationModel::Ic { p } => p,
            PropagationModel::Wc => 1.0 / g.degree(target) as f64,
        }
    }
}

impl std::fmt::Display for PropagationModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PropagationModel::Ic { p } => write!(f, "ic(p={p})"),
            PropagationModel::Wc => write!(f, "wc"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationResult {
    pub cascade_size: usize,
    pub activation_attempts: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfluenceEstimate {
    pub mean: f64,
    /// Standard error of `mean` (sample standard deviation over `sqrt(n)`).
    pub std_error: f64,
    pub total_attempts: u64,
}

pub fn validate_seeds(g: &Graph, seeds: &[NodeId]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let mut seen = vec![false; g.node_count()];
    for &v in seeds {
        if v >= g.node_count() {
            return Err(Error::InvalidNode(v));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::DuplicateSeed(v));
        }
    }
    Ok(())
}

/// Reusable per-worker state. Epoch stamps avoid clearing between runs.
struct Simulator {
    active: Vec<u32>,
    fresh: Vec<u32>,
    epoch: u32,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
}

impl Simulator {
    fn new(n: usize) -> Self {
        Simulator {
            active: vec![0; n],
            fresh: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn bump(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.active.iter_mut().for_each(|x| *x = 0);
            self.fresh.iter_mut().for_each(|x| *x = 0);
            self.epoch = 1;
        }
    }

    /// `try_activate(source, target)` decides one attempt.
    fn run<F>(&mut self, g: &Graph, seeds: &[NodeId], mut try_activate: F) -> SimulationResult
    where
        F: FnMut(NodeId, NodeId) -> bool,
    {
        self.bump();
        let epoch = self.epoch;
        self.frontier.clear();
        for &v in seeds {
            self.active[v] = epoch;
            self.frontier.push(v);
        }
        self.frontier.sort_unstable();
        let mut size = seeds.len();
        let mut attempts = 0u64;

        while !self.frontier.is_empty() {
            self.next.clear();
            for &u in &self.frontier {
                for &v in g.neighbors(u) {
                    if self.active[v] == epoch {
                        continue;
                    }
                    attempts += 1;
                    if try_activate(u, v) && self.fresh[v] != epoch {
                        self.fresh[v] = epoch;
                        self.next.push(v);
                    }
                }
            }
            for &v in &self.next {
                self.active[v] = epoch;
            }
            size += self.next.len();
            self.next.sort_unstable();
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        SimulationResult {
            cascade_size: size,
            activation_attempts: attempts,
        }
    }

    fn run_model(
        &mut self,
        g: &Graph,
        seeds: &[NodeId],
        model: PropagationModel,
        rng: &mut StreamRng,
    ) -> SimulationResult {
        self.run(g, seeds, |_, v| rng.random::<f64>() < model.probability(g, v))
    }
}

/// One cascade from `seeds`. Simulation `i` of [`estimate_influence`] equals
/// `simulate` with seed `rng::derive(rng_seed, &[i])`.
pub fn simulate(
    g: &Graph,
    seeds: &[NodeId],
    model: PropagationModel,
    rng_seed: u64,
) -> Result<SimulationResult> {
    validate_seeds(g, seeds)?;
    let mut rng = StreamRng::seed_from_u64(rng_seed);
    Ok(Simulator::new(g.node_count()).run_model(g, seeds, model, &mut rng))
}

/// Cascade with externally decided attempts, e.g. pre-drawn edge outcomes.
pub fn simulate_with<F>(g: &Graph, seeds: &[NodeId], try_activate: F) -> Result<SimulationResult>
where
    F: FnMut(NodeId, NodeId) -> bool,
{
    validate_seeds(g, seeds)?;
    Ok(Simulator::new(g.node_count()).run(g, seeds, try_activate))
}

/// Mean cascade size over `n_sims` runs. Run `i` uses the stream derived from
/// `(rng_seed, i)`, so the result does not depend on the thread count.
pub fn estimate_influence(
    g: &Graph,
    seeds: &[NodeId],
    model: PropagationModel,
    n_sims: usize,
    rng_seed: u64,
) -> Result<InfluenceEstimate> {
    validate_seeds(g, seeds)?;
    if n_sims == 0 {
        return Err(Error::InvalidParameter("at least one simulation is required".into()));
    }
    let n = g.node_count();
    let (sum, sum_sq, attempts) = (0..n_sims)
        .into_par_iter()
        .with_min_len(8)
        .map_init(
            || Simulator::new(n),
            |sim, i| {
                let mut rng = rng::stream(rng_seed, &[i as u64]);
                let r = sim.run_model(g, seeds, model, &mut rng);
                let size = r.cascade_size as u64;
                (size, size as u128 * size as u128, r.activation_attempts)
            },
        )
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    let count = n_sims as f64;
    let mean = sum as f64 / count;
    let std_error = if n_sims > 1 {
        // integer accumulation keeps this exact and order independent
        let num = n_sims as u128 * sum_sq - (sum as u128) * (sum as u128);
        let var = num as f64 / (count * (count - 1.0));
        (var / count).sqrt()
    } else {
        0.0
    };
    Ok(InfluenceEstimate {
        mean,
        std_error,
        total_attempts: attempts,
    })
}

/// A fixed sample of live-arc worlds: in world `w`, arc `u -> v` is live with
/// the model's probability for `v`. Spread over fixed worlds is a coverage
/// function, hence monotone and submodular, which makes it the coupled
/// estimator for oracle comparisons.
#[derive(Debug, Clone)]
pub struct LiveEdgeWorlds {
    // live[w][offset[u] + j] is arc u -> neighbors(u)[j]
    live: Vec<Vec<bool>>,
    offset: Vec<usize>,
}

impl LiveEdgeWorlds {
    pub fn sample(g: &Graph, model: PropagationModel, worlds: usize, rng_seed: u64) -> Self {
        let mut offset = Vec::with_capacity(g.node_count() + 1);
        offset.push(0);
        for v in g.nodes() {
            offset.push(offset[v] + g.degree(v));
        }
        let live = (0..worlds)
            .map(|w| {
                let mut rng = rng::stream(rng_seed, &[w as u64]);
                g.nodes()
                    .flat_map(|u| g.neighbors(u).iter().map(move |&v| (u, v)))
                    .map(|(_, v)| rng.random::<f64>() < model.probability(g, v))
                    .collect()
            })
            .collect();
        LiveEdgeWorlds { live, offset }
    }

    pub fn worlds(&self) -> usize {
        self.live.len()
    }

    /// Cascade in world `w`, attempts counted as in [`simulate`].
    pub fn simulate(&self, g: &Graph, seeds: &[NodeId], w: usize) -> Result<SimulationResult> {
        let live = &self.live[w];
        let offset = &self.offset;
        simulate_with(g, seeds, |u, v| {
            let j = g.neighbors(u).binary_search(&v).expect("arc exists");
            live[offset[u] + j]
        })
    }

    /// Total cascade size summed over all worlds.
    pub fn total_spread(&self, g: &Graph, seeds: &[NodeId]) -> Result<u64> {
        (0..self.worlds())
            .map(|w| self.simulate(g, seeds, w).map(|r| r.cascade_size as u64))
            .sum()
    }

    pub fn spread(&self, g: &Graph, seeds: &[NodeId]) -> Result<f64> {
        Ok(self.total_spread(g, seeds)? as f64 / self.worlds() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(len: usize) -> Graph {
        Graph::from_edges(len + 1, (0..len).map(|i| (i, i + 1))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn full_propagation_on_path() {
        let g = path(2);
        let r = simulate(&g, &[0], PropagationModel::ic(1.0).unwrap(), 0).unwrap();
        assert_eq!(r.cascade_size, 3);
        assert_eq!(r.activation_attempts, 2);
    }

    #[test]
    fn zero_probability_counts_boundary_attempts() {
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]).unwrap();
        let seeds = [0, 2];
        let r = simulate(&g, &seeds, PropagationModel::ic(0.0).unwrap(), 5).unwrap();
        assert_eq!(r.cascade_size, 2);
        // adj(0)\S = {1}, adj(2)\S = {1, 3}
        assert_eq!(r.activation_attempts, 3);
    }

    #[test]
    fn simultaneous_attempts_on_one_target_all_count() {
        // both seeds attempt node 2 in the same round
        let g = Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let r = simulate(&g, &[0, 1], PropagationModel::ic(1.0).unwrap(), 0).unwrap();
        assert_eq!(r.cascade_size, 3);
        assert_eq!(r.activation_attempts, 2);
    }

    #[test]
    fn isolated_seed() {
        let g = Graph::from_edges(3, [(1, 2)]).unwrap();
        let r = simulate(&g, &[0], PropagationModel::ic(1.0).unwrap(), 0).unwrap();
        assert_eq!((r.cascade_size, r.activation_attempts), (1, 0));
    }

    #[test]
    fn invalid_seeds() {
        let g = path(2);
        let m = PropagationModel::wc();
        assert!(matches!(simulate(&g, &[], m, 0), Err(Error::EmptySeedSet)));
        assert!(matches!(simulate(&g, &[3], m, 0), Err(Error::InvalidNode(3))));
        assert!(matches!(simulate(&g, &[1, 1], m, 0), Err(Error::DuplicateSeed(1))));
        assert!(PropagationModel::ic(1.5).is_err());
    }

    #[test]
    fn wc_star_from_leaf_has_expectation_two() {
        // hub activates w.p. 1/4; then each of the other 3 leaves w.p. 1:
        // E = 1 + 1/4 * (1 + 3) = 2
        let exact: f64 = [(0.25, 5.0), (0.75, 1.0)].iter().map(|(p, s)| p * s).sum();
        assert!((exact - 2.0).abs() < 1e-12);

        let g = star(4);
        let est = estimate_influence(&g, &[1], PropagationModel::wc(), 10_000, 17).unwrap();
        assert!((est.mean - exact).abs() <= 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn certain_propagation_covers_touched_components() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (3, 4), (5, 6)]).unwrap();
        let est = estimate_influence(&g, &[0, 3], PropagationModel::ic(1.0).unwrap(), 50, 2).unwrap();
        assert_eq!(est.mean, 5.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn single_simulation_matches_one_run() {
        let g = star(6);
        let model = PropagationModel::ic(0.5).unwrap();
        let est = estimate_influence(&g, &[2], model, 1, 99).unwrap();
        let one = simulate(&g, &[2], model, rng::derive(99, &[0])).unwrap();
        assert_eq!(est.mean, one.cascade_size as f64);
        assert_eq!(est.total_attempts, one.activation_attempts);
    }

    #[test]
    fn estimate_rejects_zero_sims() {
        assert!(estimate_influence(&path(1), &[0], PropagationModel::wc(), 0, 0).is_err());
    }

    #[test]
    fn live_worlds_with_certain_arcs() {
        let g = path(4);
        let worlds = LiveEdgeWorlds::sample(&g, PropagationModel::ic(1.0).unwrap(), 3, 0);
        assert_eq!(worlds.spread(&g, &[2]).unwrap(), 5.0);
        let none = LiveEdgeWorlds::sample(&g, PropagationModel::ic(0.0).unwrap(), 3, 0);
        assert_eq!(none.spread(&g, &[2]).unwrap(), 1.0);
    }
}
