//! Synthetic test networks.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::downscale::{generate_sbm, ScaledSpec};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, StreamRng};

/// Degree-corrected SBM with power-law target degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPowerLaw {
    pub sizes: Vec<usize>,
    pub alpha: f64,
    pub d_min: usize,
    pub d_max: usize,
    /// Share of each community's degree budget spent on edges leaving it.
    pub mixing: f64,
}

impl PlantedPowerLaw {
    pub fn new(sizes: Vec<usize>, alpha: f64) -> Self {
        PlantedPowerLaw {
            sizes,
            alpha,
            d_min: 2,
            d_max: 100,
            mixing: 0.1,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("community sizes must be positive");
        }
        if self.d_min == 0 || self.d_max < self.d_min {
            return bad("degree range must satisfy 1 <= d_min <= d_max");
        }
        if !(self.alpha > 0.0) {
            return bad("exponent must be positive");
        }
        if !(0.0..=1.0).contains(&self.mixing) {
            return bad("mixing must lie in [0, 1]");
        }
        Ok(())
    }

    /// Block edge counts: `(1 - mixing) D_c / 2` inside community `c` and
    /// `mixing D_r D_c / D` between `r` and `c`, with `D_c` its degree total.
    pub fn spec(&self, rng_seed: u64) -> Result<ScaledSpec> {
        self.validate()?;
        let target_degrees: Vec<Vec<usize>> = self
            .sizes
            .iter()
            .enumerate()
            .map(|(c, &k)| {
                let mut rng = rng::stream(rng_seed, &[c as u64]);
                power_law_degrees(k, self.alpha, self.d_min, self.d_max, &mut rng)
            })
            .collect();
        let totals: Vec<f64> = target_degrees
            .iter()
            .map(|d| d.iter().sum::<usize>() as f64)
            .collect();
        let all: f64 = totals.iter().sum();
        let c = self.sizes.len();
        let mut block_edges = vec![vec![0; c]; c];
        for r in 0..c {
            block_edges[r][r] = ((1.0 - self.mixing) * totals[r] / 2.0).round() as usize;
            for b in r + 1..c {
                let e = (self.mixing * totals[r] * totals[b] / all).round() as usize;
                block_edges[r][b] = e;
                block_edges[b][r] = e;
            }
        }
        Ok(ScaledSpec {
            s: 1,
            target_sizes: self.sizes.clone(),
            target_degrees,
            block_edges,
        })
    }

    /// Stub matching: every node gets a power-law degree, each of its stubs
    /// leaves the community with probability `mixing`, and stubs are paired
    /// uniformly (inside the community, or across the whole network for
    /// leaving stubs). Self-loops and repeated pairs are erased, so realised
    /// degrees match the drawn ones except at a few hubs.
    pub fn generate_matched(&self, rng_seed: u64) -> Result<(Graph, Partition)> {
        self.validate()?;
        let mut rng = rng::stream(rng_seed, &[2]);
        let mut offset = 0;
        let mut edges = Vec::new();
        let mut leaving = Vec::new();
        let mut membership = Vec::new();
        for (c, &k) in self.sizes.iter().enumerate() {
            let degrees = power_law_degrees(k, self.alpha, self.d_min, self.d_max, &mut rng);
            let mut inside = Vec::new();
            for (i, &d) in degrees.iter().enumerate() {
                for _ in 0..d {
                    if rng.random::<f64>() < self.mixing {
                        leaving.push(offset + i);
                    } else {
                        inside.push(offset + i);
                    }
                }
            }
            inside.shuffle(&mut rng);
            edges.extend(inside.chunks_exact(2).map(|p| (p[0], p[1])));
            membership.extend(std::iter::repeat(c).take(k));
            offset += k;
        }
        leaving.shuffle(&mut rng);
        edges.extend(leaving.chunks_exact(2).map(|p| (p[0], p[1])));
        let graph = Graph::from_edges(offset, edges)?;
        let partition = Partition::from_assignment(&graph, &membership)?;
        Ok((graph, partition))
    }

    /// Graph and planted partition; community `c` holds a contiguous id range.
    pub fn generate(&self, rng_seed: u64) -> Result<(Graph, Partition)> {
        let spec = self.spec(rng::derive(rng_seed, &[0]))?;
        let sbm = generate_sbm(&spec, rng::derive(rng_seed, &[1]))?;
        Ok((sbm.graph, sbm.partition))
    }
}

/// `n` draws from the power law `P(d) ~ d^-alpha` truncated to `[d_min, d_max]`.
pub fn power_law_degrees(n: usize, alpha: f64, d_min: usize, d_max: usize, rng: &mut StreamRng) -> Vec<usize> {
    let weights = (d_min..=d_max).map(|d| (d as f64).powf(-alpha));
    let dist = WeightedIndex::new(weights).expect("positive weights");
    (0..n).map(|_| d_min + dist.sample(rng)).collect()
}

/// Uniform graph with `n` nodes and `m` distinct edges.
pub fn gnm(n: usize, m: usize, rng_seed: u64) -> Result<Graph> {
    let possible = n * n.saturating_sub(1) / 2;
    if m > possible {
        return Err(Error::InvalidParameter(format!(
            "{m} edges do not fit in a simple graph on {n} nodes"
        )));
    }
    let mut rng = rng::stream(rng_seed, &[]);
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, edges)
}
