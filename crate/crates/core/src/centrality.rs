//! Node centrality indicators and per-community ranking.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub const PAGERANK_DAMPING: f64 = 0.85;
/// Katz attenuation as a fraction of `1 / lambda_max`.
pub const KATZ_ATTENUATION: f64 = 0.9;
pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityKind {
    Degree,
    Eigenvector,
    Pagerank,
    Katz,
    Closeness,
    Betweenness,
    Coreness,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 7] = [
        CentralityKind::Degree,
        CentralityKind::Eigenvector,
        CentralityKind::Pagerank,
        CentralityKind::Katz,
        CentralityKind::Closeness,
        CentralityKind::Betweenness,
        CentralityKind::Coreness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CentralityKind::Degree => "degree",
            CentralityKind::Eigenvector => "eigenvector",
            CentralityKind::Pagerank => "pagerank",
            CentralityKind::Katz => "katz",
            CentralityKind::Closeness => "closeness",
            CentralityKind::Betweenness => "betweenness",
            CentralityKind::Coreness => "coreness",
        }
    }
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CentralityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CentralityKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown centrality `{s}`")))
    }
}

pub type ScoreMap = Vec<f64>;

pub fn compute_centrality(g: &Graph, kind: CentralityKind) -> ScoreMap {
    match kind {
        CentralityKind::Degree => g.nodes().map(|v| g.degree(v) as f64).collect(),
        CentralityKind::Eigenvector => eigenvector(g),
        CentralityKind::Pagerank => pagerank(g),
        CentralityKind::Katz => katz(g),
        CentralityKind::Closeness => closeness(g),
        CentralityKind::Betweenness => betweenness(g),
        CentralityKind::Coreness => coreness(g).into_iter().map(|c| c as f64).collect(),
    }
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn l2_normalise(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Power iteration on `A + I`, which shares the principal eigenvector of `A`
/// and does not oscillate on bipartite graphs. Returns the vector and the
/// eigenvalue estimate of `A`.
fn principal_eigenpair(g: &Graph) -> (Vec<f64>, f64) {
    let n = g.node_count();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for _ in 0..POWER_MAX_ITERATIONS {
        for v in 0..n {
            next[v] = x[v] + g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
        }
        l2_normalise(&mut next);
        let residual = l1_distance(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if residual < POWER_TOLERANCE {
            break;
        }
    }
    // Rayleigh quotient x^T A x with |x| = 1
    let lambda = (0..n)
        .map(|v| x[v] * g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>())
        .sum::<f64>();
    (x, lambda)
}

fn eigenvector(g: &Graph) -> ScoreMap {
    let (mut x, _) = principal_eigenpair(g);
    x.iter_mut().for_each(|v| *v = v.max(0.0));
    x
}

fn pagerank(g: &Graph) -> ScoreMap {
    let n = g.node_count();
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..POWER_MAX_ITERATIONS {
        let dangling: f64 = g.nodes().filter(|&v| g.degree(v) == 0).map(|v| x[v]).sum();
        let base = (1.0 - PAGERANK_DAMPING) / nf + PAGERANK_DAMPING * dangling / nf;
        for v in 0..n {
            next[v] = base
                + PAGERANK_DAMPING
                    * g.neighbors(v)
                        .iter()
                        .map(|&u| x[u] / g.degree(u) as f64)
                        .sum::<f64>();
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let residual = l1_distance(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if residual < POWER_TOLERANCE {
            break;
        }
    }
    x
}

/// `x = alpha A x + 1` with `alpha = 0.9 / lambda_max`.
fn katz(g: &Graph) -> ScoreMap {
    let n = g.node_count();
    let (_, lambda) = principal_eigenpair(g);
    if lambda <= 0.0 {
        return vec![1.0; n];
    }
    let alpha = KATZ_ATTENUATION / lambda;
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..POWER_MAX_ITERATIONS {
        for v in 0..n {
            next[v] = 1.0 + alpha * g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
        }
        let residual = l1_distance(&x, &next) / n as f64;
        std::mem::swap(&mut x, &mut next);
        if residual < POWER_TOLERANCE {
            break;
        }
    }
    x
}

fn bfs_distances(g: &Graph, source: NodeId, dist: &mut [usize], queue: &mut VecDeque<NodeId>) {
    dist.iter_mut().for_each(|d| *d = usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
}

/// Closeness within the node's component, scaled by the reachable fraction.
fn closeness(g: &Graph) -> ScoreMap {
    let n = g.node_count();
    if n <= 1 {
        return vec![0.0; n];
    }
    g.nodes()
        .into_par_iter()
        .map_init(
            || (vec![0usize; n], VecDeque::new()),
            |(dist, queue), v| {
                bfs_distances(g, v, dist, queue);
                let (reached, total) = dist
                    .iter()
                    .filter(|&&d| d != usize::MAX)
                    .fold((0usize, 0usize), |(r, t), &d| (r + 1, t + d));
                if total == 0 {
                    return 0.0;
                }
                let r = (reached - 1) as f64;
                (r / total as f64) * (r / (n - 1) as f64)
            },
        )
        .collect()
}

const BETWEENNESS_CHUNK: usize = 64;

/// Brandes' algorithm; each unordered pair counted once.
fn betweenness(g: &Graph) -> ScoreMap {
    let n = g.node_count();
    let sources: Vec<NodeId> = g.nodes().collect();
    // fixed chunks summed in order keep the result independent of threads
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(BETWEENNESS_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut sigma = vec![0.0f64; n];
            let mut dist = vec![usize::MAX; n];
            let mut delta = vec![0.0f64; n];
            let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
            let mut order = Vec::with_capacity(n);
            let mut queue = VecDeque::new();
            for &s in chunk {
                for v in 0..n {
                    sigma[v] = 0.0;
                    dist[v] = usize::MAX;
                    delta[v] = 0.0;
                    preds[v].clear();
                }
                order.clear();
                sigma[s] = 1.0;
                dist[s] = 0;
                queue.push_back(s);
                while let Some(u) = queue.pop_front() {
                    order.push(u);
                    for &w in g.neighbors(u) {
                        if dist[w] == usize::MAX {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                        if dist[w] == dist[u] + 1 {
                            sigma[w] += sigma[u];
                            preds[w].push(u);
                        }
                    }
                }
                for &w in order.iter().rev() {
                    for &u in &preds[w] {
                        delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
                    }
                    if w != s {
                        acc[w] += delta[w];
                    }
                }
            }
            acc
        })
        .collect();
    let mut scores = vec![0.0; n];
    for part in partials {
        for (s, p) in scores.iter_mut().zip(part) {
            *s += p;
        }
    }
    scores.iter_mut().for_each(|s| *s /= 2.0);
    scores
}

/// Core numbers by repeated removal of a minimum-degree node (bucket queue).
pub fn coreness(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = g.degree_sequence();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut bins = vec![0usize; max_degree + 1];
    for &d in &degree {
        bins[d] += 1;
    }
    let mut start = 0;
    for b in bins.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut position = vec![0usize; n];
    let mut order = vec![0usize; n];
    for v in 0..n {
        position[v] = bins[degree[v]];
        order[position[v]] = v;
        bins[degree[v]] += 1;
    }
    for d in (1..=max_degree).rev() {
        bins[d] = bins[d - 1];
    }
    bins[0] = 0;
    for i in 0..n {
        let v = order[i];
        for &u in g.neighbors(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = position[u];
                let pw = bins[du];
                let w = order[pw];
                if u != w {
                    order.swap(pu, pw);
                    position[u] = pw;
                    position[w] = pu;
                }
                bins[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

/// Rank of each node inside its community: 1 is the highest score, ties go
/// to the smaller node id.
pub fn community_ranks(scores: &[f64], p: &Partition) -> Vec<usize> {
    let mut ranks = vec![0; scores.len()];
    for members in p.communities() {
        for (i, &v) in ranked_members(scores, members).iter().enumerate() {
            ranks[v] = i + 1;
        }
    }
    ranks
}

/// Members ordered by descending score, ascending id on ties.
pub fn ranked_members(scores: &[f64], members: &[NodeId]) -> Vec<NodeId> {
    let mut sorted = members.to_vec();
    sorted.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    sorted
}

pub fn write_scores_csv<W: std::io::Write>(g: &Graph, scores: &[f64], mut out: W) -> Result<()> {
    writeln!(out, "node_id,score")?;
    for v in g.nodes() {
        writeln!(out, "{},{}", g.label(v), scores[v])?;
    }
    Ok(())
}
