//! Mapping seed sets from a downscaled network back to the original one.
//!
//! Every node of both graphs is ranked inside its community by a centrality
//! indicator. A scaled seed of rank `r` in a community of `n_c` nodes has the
//! normalised rank `r / n_c`; it is replaced by the `s` not-yet-chosen nodes of
//! the matched original community whose normalised ranks are closest.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::{estimate_influence, PropagationModel};
use crate::centrality::{community_ranks, compute_centrality, ranked_members, CentralityKind};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::front::{Fitness, Front, FrontEntry};
use crate::graph::{Graph, NodeId};
use crate::rng;

#[derive(Debug, Clone)]
pub struct UpscaleContext<'a> {
    pub original: &'a Graph,
    pub original_partition: &'a Partition,
    pub scaled: &'a Graph,
    pub scaled_partition: &'a Partition,
    pub community_map: Vec<usize>,
    pub kind: CentralityKind,
    scaled_ranks: Vec<usize>,
    // original community -> members ordered by rank
    original_by_rank: Vec<Vec<NodeId>>,
}

impl<'a> UpscaleContext<'a> {
    pub fn new(
        original: &'a Graph,
        original_partition: &'a Partition,
        scaled: &'a Graph,
        scaled_partition: &'a Partition,
        community_map: Vec<usize>,
        kind: CentralityKind,
    ) -> Result<Self> {
        if community_map.len() != scaled_partition.len() {
            return Err(Error::InvalidParameter(
                "community map does not cover every scaled community".into(),
            ));
        }
        let mut hit = vec![false; original_partition.len()];
        for &c in &community_map {
            if c >= hit.len() || std::mem::replace(&mut hit[c], true) {
                return Err(Error::InvalidParameter("community map is not a bijection".into()));
            }
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::InvalidParameter("community map is not a bijection".into()));
        }
        let scaled_scores = compute_centrality(scaled, kind);
        let original_scores = compute_centrality(original, kind);
        let scaled_ranks = community_ranks(&scaled_scores, scaled_partition);
        let original_by_rank = original_partition
            .communities()
            .iter()
            .map(|members| ranked_members(&original_scores, members))
            .collect();
        Ok(UpscaleContext {
            original,
            original_partition,
            scaled,
            scaled_partition,
            community_map,
            kind,
            scaled_ranks,
            original_by_rank,
        })
    }

    pub fn scaled_rank(&self, v: NodeId) -> usize {
        self.scaled_ranks[v]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Upscaled {
    pub seeds: Vec<NodeId>,
    /// Nodes that could not be supplied because a community ran out.
    pub shortfall: usize,
}

pub fn upscale_seed_set(seeds: &[NodeId], ctx: &UpscaleContext<'_>, s: usize) -> Result<Upscaled> {
    for &v in seeds {
        if v >= ctx.scaled.node_count() {
            return Err(Error::InvalidNode(v));
        }
    }
    let mut order = seeds.to_vec();
    order.sort_by_key(|&v| (ctx.scaled_rank(v), v));

    let mut chosen = vec![false; ctx.original.node_count()];
    let mut out = Vec::with_capacity(seeds.len() * s);
    let mut shortfall = 0;
    for v in order {
        let c = ctx.scaled_partition.community_of(v);
        let n_c = ctx.scaled_partition.members(c).len() as i64;
        let r = ctx.scaled_rank(v) as i64;
        let ranked = &ctx.original_by_rank[ctx.community_map[c]];
        let n_o = ranked.len() as i64;

        // |r'/n_o - r/n_c| compared exactly as |r' n_c - r n_o|
        let mut candidates: Vec<(i64, usize)> = ranked
            .iter()
            .enumerate()
            .filter(|&(_, &u)| !chosen[u])
            .map(|(i, _)| (((i as i64 + 1) * n_c - r * n_o).abs(), i))
            .collect();
        let take = s.min(candidates.len());
        shortfall += s - take;
        if take < candidates.len() {
            candidates.select_nth_unstable(take);
        }
        candidates.truncate(take);
        candidates.sort_unstable();
        for (_, i) in candidates {
            chosen[ranked[i]] = true;
            out.push(ranked[i]);
        }
    }
    Ok(Upscaled {
        seeds: out,
        shortfall,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Shortfall {
    pub entry: usize,
    pub missing: usize,
}

#[derive(Debug, Clone)]
pub struct UpscaledFront {
    pub front: Front,
    pub shortfalls: Vec<Shortfall>,
    pub total_attempts: u64,
}

/// Upscales every entry and evaluates it on the original graph of `ctx`.
pub fn upscale_front(
    front: &Front,
    ctx: &UpscaleContext<'_>,
    s: usize,
    model: PropagationModel,
    n_sims: usize,
    rng_seed: u64,
) -> Result<UpscaledFront> {
    let identity: Vec<NodeId> = ctx.original.nodes().collect();
    upscale_front_onto(front, ctx, s, ctx.original, &identity, model, n_sims, rng_seed)
}

/// Like [`upscale_front`], but evaluates on `target`, with `lift[v]` the node
/// of `target` corresponding to node `v` of the context's original graph.
/// Seeds of the returned front are nodes of `target`.
#[allow(clippy::too_many_arguments)]
pub fn upscale_front_onto(
    front: &Front,
    ctx: &UpscaleContext<'_>,
    s: usize,
    target: &Graph,
    lift: &[NodeId],
    model: PropagationModel,
    n_sims: usize,
    rng_seed: u64,
) -> Result<UpscaledFront> {
    let n = target.node_count() as f64;
    let evaluated: Vec<(FrontEntry, usize, u64)> = front
        .entries()
        .par_iter()
        .map(|entry| {
            let up = upscale_seed_set(&entry.seeds, ctx, s)?;
            let seeds: Vec<NodeId> = up.seeds.iter().map(|&v| lift[v]).collect();
            let mut key: Vec<u64> = seeds.iter().map(|&v| v as u64).collect();
            key.sort_unstable();
            let est = estimate_influence(target, &seeds, model, n_sims, rng::derive(rng_seed, &key))?;
            let fitness = Fitness::new(est.mean / n, seeds.len() as f64 / n);
            Ok((FrontEntry { fitness, seeds }, up.shortfall, est.total_attempts))
        })
        .collect::<Result<_>>()?;

    let mut shortfalls = Vec::new();
    let mut total_attempts = 0;
    let mut entries = Vec::with_capacity(evaluated.len());
    for (i, (entry, missing, attempts)) in evaluated.into_iter().enumerate() {
        if missing > 0 {
            shortfalls.push(Shortfall { entry: i, missing });
        }
        total_attempts += attempts;
        entries.push(entry);
    }
    Ok(UpscaledFront {
        front: Front::from_entries(entries),
        shortfalls,
        total_attempts,
    })
}
