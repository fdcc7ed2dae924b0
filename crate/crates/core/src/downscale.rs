//! Community-preserving network downscaling.
//!
//! A downscaled network keeps every community of the (filtered) original,
//! shrinks node and edge counts per community by the scaling factor, and
//! reuses a degree sample whose mean and spread match the community's
//! original degrees. Edges are laid down by a degree-corrected stochastic
//! block model: each endpoint inside a block is drawn with probability
//! proportional to its target degree.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng;

pub const DEFAULT_CANDIDATES: usize = 1000;
/// Rejected draws allowed per requested edge before a block pair gives up.
pub const RETRIES_PER_EDGE: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledSpec {
    pub s: usize,
    pub target_sizes: Vec<usize>,
    pub target_degrees: Vec<Vec<usize>>,
    /// Symmetric; diagonal entries are intra-community edge counts.
    pub block_edges: Vec<Vec<usize>>,
}

impl ScaledSpec {
    pub fn communities(&self) -> usize {
        self.target_sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.communities();
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.target_degrees.len() != c || self.block_edges.len() != c {
            return bad("scaled spec has inconsistent community counts".into());
        }
        for b in 0..c {
            if self.target_sizes[b] == 0 {
                return bad(format!("community {b} has target size 0"));
            }
            if self.target_degrees[b].len() != self.target_sizes[b] {
                return bad(format!("community {b} degree list does not match its size"));
            }
            if self.block_edges[b].len() != c {
                return bad("block edge matrix is not square".into());
            }
            for r in 0..c {
                if self.block_edges[b][r] != self.block_edges[r][b] {
                    return bad("block edge matrix is not symmetric".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPlacement {
    pub r: usize,
    pub c: usize,
    pub requested: usize,
    pub placed: usize,
}

#[derive(Debug, Clone)]
pub struct ScaledGraph {
    pub graph: Graph,
    pub partition: Partition,
    /// Original community index for every downscaled community.
    pub community_map: Vec<usize>,
    pub placements: Vec<BlockPlacement>,
}

impl ScaledGraph {
    pub fn requested_edges(&self) -> usize {
        self.placements.iter().map(|b| b.requested).sum()
    }

    /// Block pairs that ran out of retries before meeting their quota.
    pub fn shortfalls(&self) -> impl Iterator<Item = &BlockPlacement> {
        self.placements.iter().filter(|b| b.placed < b.requested)
    }
}

fn round_div(x: usize, s: usize) -> usize {
    (x as f64 / s as f64).round() as usize
}

pub(crate) fn mean_std(values: &[usize]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().map(|&d| d as f64).sum::<f64>() / n;
    let var = values
        .iter()
        .map(|&d| (d as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    (mean, var.sqrt())
}

/// Draws `num_candidates` samples (with replacement) of size
/// `round(len / s)` and keeps the one whose (mean, std) is closest to the
/// original's.
pub fn sample_scaled_degrees(
    original_degrees: &[usize],
    s: usize,
    num_candidates: usize,
    rng_seed: u64,
) -> Result<Vec<usize>> {
    if s == 0 || num_candidates == 0 {
        return Err(Error::InvalidParameter(
            "scaling factor and candidate count must be positive".into(),
        ));
    }
    let size = round_div(original_degrees.len(), s);
    if size == 0 {
        return Err(Error::InvalidParameter(format!(
            "{} degrees scaled by {s} leaves an empty sample",
            original_degrees.len()
        )));
    }
    let (mean, std) = mean_std(original_degrees);
    let mut rng = rng::stream(rng_seed, &[]);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut sample = vec![0; size];
    for _ in 0..num_candidates {
        for slot in &mut sample {
            *slot = original_degrees[rng.random_range(0..original_degrees.len())];
        }
        let (m, sd) = mean_std(&sample);
        let distance = ((m - mean).powi(2) + (sd - std).powi(2)).sqrt();
        if best.as_ref().is_none_or(|(d, _)| distance < *d) {
            best = Some((distance, sample.clone()));
        }
    }
    Ok(best.map(|(_, s)| s).unwrap_or_default())
}

pub fn build_scaled_spec(
    g: &Graph,
    p: &Partition,
    s: usize,
    num_candidates: usize,
    rng_seed: u64,
) -> Result<ScaledSpec> {
    if s == 0 {
        return Err(Error::InvalidParameter("scaling factor must be at least 1".into()));
    }
    let c = p.len();
    let target_sizes: Vec<usize> = p
        .communities()
        .iter()
        .map(|members| round_div(members.len(), s).max(1))
        .collect();
    let target_degrees = p
        .communities()
        .iter()
        .enumerate()
        .map(|(b, members)| {
            let degrees: Vec<usize> = members.iter().map(|&v| g.degree(v)).collect();
            let seed = rng::derive(rng_seed, &[b as u64]);
            let mut sample = sample_scaled_degrees(&degrees, s, num_candidates, seed)?;
            // max(1, ..) can ask for one more node than rounding gives
            sample.resize(target_sizes[b], degrees[0]);
            Ok(sample)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts = vec![vec![0usize; c]; c];
    for (u, v) in g.edges() {
        let (a, b) = (p.community_of(u), p.community_of(v));
        counts[a][b] += 1;
        if a != b {
            counts[b][a] += 1;
        }
    }
    let block_edges = counts
        .iter()
        .map(|row| row.iter().map(|&e| round_div(e, s)).collect())
        .collect();
    Ok(ScaledSpec {
        s,
        target_sizes,
        target_degrees,
        block_edges,
    })
}

enum EndpointSampler {
    Weighted(WeightedIndex<f64>),
    Uniform(usize),
}

impl EndpointSampler {
    fn new(degrees: &[usize]) -> Self {
        let weights: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
        match WeightedIndex::new(&weights) {
            Ok(w) => EndpointSampler::Weighted(w),
            Err(_) => EndpointSampler::Uniform(degrees.len()),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        match self {
            EndpointSampler::Weighted(w) => w.sample(rng),
            EndpointSampler::Uniform(n) => rng.random_range(0..*n),
        }
    }
}

/// Degree-corrected SBM realisation of `spec`. Each block pair draws from its
/// own stream derived from `(rng_seed, r, c)`.
pub fn generate_sbm(spec: &ScaledSpec, rng_seed: u64) -> Result<ScaledGraph> {
    spec.validate()?;
    let c = spec.communities();
    let mut offsets = Vec::with_capacity(c + 1);
    offsets.push(0);
    for &size in &spec.target_sizes {
        offsets.push(offsets.last().unwrap() + size);
    }
    let n = offsets[c];
    let samplers: Vec<EndpointSampler> = spec
        .target_degrees
        .iter()
        .map(|d| EndpointSampler::new(d))
        .collect();

    let pairs: Vec<(usize, usize)> = (0..c)
        .flat_map(|r| (r..c).map(move |b| (r, b)))
        .filter(|&(r, b)| spec.block_edges[r][b] > 0)
        .collect();

    let blocks: Vec<(BlockPlacement, Vec<(NodeId, NodeId)>)> = pairs
        .par_iter()
        .map(|&(r, b)| {
            let quota = spec.block_edges[r][b];
            let mut rng = rng::stream(rng_seed, &[r as u64, b as u64]);
            let mut placed = HashSet::with_capacity(quota);
            let mut edges = Vec::with_capacity(quota);
            let mut budget = quota.saturating_mul(RETRIES_PER_EDGE);
            while edges.len() < quota && budget > 0 {
                budget -= 1;
                let u = offsets[r] + samplers[r].draw(&mut rng);
                let v = offsets[b] + samplers[b].draw(&mut rng);
                if u == v {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                if placed.insert(key) {
                    edges.push(key);
                }
            }
            let placement = BlockPlacement {
                r,
                c: b,
                requested: quota,
                placed: edges.len(),
            };
            (placement, edges)
        })
        .collect();

    let mut placements = Vec::with_capacity(blocks.len());
    let mut all_edges = Vec::new();
    for (placement, edges) in blocks {
        placements.push(placement);
        all_edges.extend(edges);
    }
    let graph = Graph::from_edges(n, all_edges)?;
    let membership: Vec<usize> = (0..c)
        .flat_map(|b| std::iter::repeat(b).take(spec.target_sizes[b]))
        .collect();
    let partition = Partition::from_assignment(&graph, &membership)?;
    Ok(ScaledGraph {
        graph,
        partition,
        community_map: (0..c).collect(),
        placements,
    })
}

/// Builds the scaled spec for `p` (already filtered for `s`) and realises it.
pub fn downscale(g: &Graph, p: &Partition, s: usize, rng_seed: u64) -> Result<ScaledGraph> {
    downscale_with(g, p, s, DEFAULT_CANDIDATES, rng_seed)
}

pub fn downscale_with(
    g: &Graph,
    p: &Partition,
    s: usize,
    num_candidates: usize,
    rng_seed: u64,
) -> Result<ScaledGraph> {
    let spec = build_scaled_spec(g, p, s, num_candidates, rng::derive(rng_seed, &[0]))?;
    generate_sbm(&spec, rng::derive(rng_seed, &[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_degrees_sample() {
        assert_eq!(sample_scaled_degrees(&[3, 3, 3, 3], 2, 10, 0).unwrap(), vec![3, 3]);
    }

    #[test]
    fn bimodal_degrees_pick_the_matching_pair() {
        // every 2-sample from {1,9}: {1,1} and {9,9} have std 0, only {1,9}
        // reproduces mean 5 and std 4 exactly
        let oracle: Vec<(usize, usize)> = [1usize, 9]
            .iter()
            .flat_map(|&a| [1usize, 9].iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| {
                let (m, sd) = mean_std(&[a, b]);
                (m - 5.0).abs() < 1e-12 && (sd - 4.0).abs() < 1e-12
            })
            .collect();
        assert_eq!(oracle, vec![(1, 9), (9, 1)]);

        let mut sample = sample_scaled_degrees(&[1, 1, 9, 9], 2, 200, 42).unwrap();
        sample.sort_unstable();
        assert_eq!(sample, vec![1, 9]);
    }

    #[test]
    fn identity_scale_keeps_size() {
        let degrees: Vec<usize> = (1..=20).collect();
        let sample = sample_scaled_degrees(&degrees, 1, 2000, 3).unwrap();
        assert_eq!(sample.len(), 20);
        let (m, sd) = mean_std(&sample);
        let (m0, sd0) = mean_std(&degrees);
        assert!(((m - m0).powi(2) + (sd - sd0).powi(2)).sqrt() < 0.5);
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(sample_scaled_degrees(&[1], 4, 10, 0).is_err());
        assert!(sample_scaled_degrees(&[1, 2], 1, 0, 0).is_err());
    }

    fn two_community_graph() -> (Graph, Partition) {
        // 20 nodes per community, 100 intra edges each, 10 cross edges
        let mut edges = Vec::new();
        for base in [0usize, 20] {
            let mut count = 0;
            'outer: for i in 0..20 {
                for j in i + 1..20 {
                    if (i + j) % 2 == 1 || j == i + 1 {
                        edges.push((base + i, base + j));
                        count += 1;
                        if count == 100 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        for i in 0..10 {
            edges.push((i, 20 + i));
        }
        let g = Graph::from_edges(40, edges).unwrap();
        let labels: Vec<usize> = (0..40).map(|v| v / 20).collect();
        let p = Partition::from_assignment(&g, &labels).unwrap();
        (g, p)
    }

    #[test]
    fn block_edges_scale_proportionally() {
        let (g, p) = two_community_graph();
        assert_eq!(g.edge_count(), 210);
        let spec = build_scaled_spec(&g, &p, 2, 50, 0).unwrap();
        assert_eq!(spec.block_edges, vec![vec![50, 5], vec![5, 50]]);
        assert_eq!(spec.target_sizes, vec![10, 10]);
        spec.validate().unwrap();

        let identity = build_scaled_spec(&g, &p, 1, 50, 0).unwrap();
        assert_eq!(identity.block_edges, vec![vec![100, 10], vec![10, 100]]);
    }

    #[test]
    fn target_size_rounding() {
        let edges: Vec<(usize, usize)> = (1..17).map(|v| (v - 1, v)).collect();
        let g = Graph::from_edges(17, edges).unwrap();
        let p = Partition::from_assignment(&g, &[0; 17]).unwrap();
        let spec = build_scaled_spec(&g, &p, 4, 10, 0).unwrap();
        assert_eq!(spec.target_sizes, vec![4]);
        assert_eq!(spec.target_degrees[0].len(), 4);
    }

    #[test]
    fn triangle_is_the_only_realisation() {
        let spec = ScaledSpec {
            s: 1,
            target_sizes: vec![3],
            target_degrees: vec![vec![2, 2, 2]],
            block_edges: vec![vec![3]],
        };
        let out = generate_sbm(&spec, 9).unwrap();
        assert_eq!(out.graph.edge_count(), 3);
        assert_eq!(out.graph.degree_sequence(), vec![2, 2, 2]);
        assert_eq!(out.shortfalls().count(), 0);
    }

    #[test]
    fn single_cross_edge() {
        let spec = ScaledSpec {
            s: 1,
            target_sizes: vec![1, 1],
            target_degrees: vec![vec![1], vec![1]],
            block_edges: vec![vec![0, 1], vec![1, 0]],
        };
        let out = generate_sbm(&spec, 0).unwrap();
        assert_eq!(out.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(out.partition.sizes(), vec![1, 1]);
    }

    #[test]
    fn zero_cross_quota_means_no_cross_edges() {
        let spec = ScaledSpec {
            s: 1,
            target_sizes: vec![5, 5],
            target_degrees: vec![vec![2; 5], vec![2; 5]],
            block_edges: vec![vec![5, 0], vec![0, 5]],
        };
        let out = generate_sbm(&spec, 1).unwrap();
        for (u, v) in out.graph.edges() {
            assert_eq!(out.partition.community_of(u), out.partition.community_of(v));
        }
    }

    #[test]
    fn impossible_quota_terminates_with_shortfall() {
        let spec = ScaledSpec {
            s: 1,
            target_sizes: vec![3],
            target_degrees: vec![vec![5, 5, 5]],
            block_edges: vec![vec![10]],
        };
        let out = generate_sbm(&spec, 0).unwrap();
        assert_eq!(out.graph.edge_count(), 3);
        let short: Vec<_> = out.shortfalls().collect();
        assert_eq!(short.len(), 1);
        assert_eq!((short[0].requested, short[0].placed), (10, 3));
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = ScaledSpec {
            s: 1,
            target_sizes: vec![2, 2],
            target_degrees: vec![vec![1, 1], vec![1, 1]],
            block_edges: vec![vec![1, 2], vec![0, 1]],
        };
        assert!(generate_sbm(&spec, 0).is_err());
    }

    #[test]
    fn identity_downscale_keeps_block_counts() {
        let (g, p) = two_community_graph();
        let out = downscale(&g, &p, 1, 4).unwrap();
        assert_eq!(out.graph.node_count(), 40);
        assert_eq!(out.partition.sizes(), vec![20, 20]);
        for b in &out.placements {
            assert_eq!(b.placed, b.requested);
        }
        assert_eq!(out.graph.edge_count(), 210);
    }

    #[test]
    fn downscale_halves_and_repeats() {
        let (g, p) = two_community_graph();
        let a = downscale(&g, &p, 2, 8).unwrap();
        let b = downscale(&g, &p, 2, 8).unwrap();
        assert_eq!(a.partition.sizes(), vec![10, 10]);
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.community_map, vec![0, 1]);
    }
}
