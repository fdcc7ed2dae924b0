//! Community detection (Leiden, modularity quality) and size filtering.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, StreamRng};

/// Disjoint cover of a graph's nodes by communities `0..C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    communities: Vec<Vec<NodeId>>,
    quality: f64,
}

impl Partition {
    /// Builds a partition from arbitrary community labels. Communities are
    /// renumbered by their smallest member, so labels that already follow
    /// that order are kept.
    pub fn from_assignment(g: &Graph, labels: &[usize]) -> Result<Self> {
        if labels.len() != g.node_count() {
            return Err(Error::InvalidParameter(format!(
                "partition covers {} nodes, graph has {}",
                labels.len(),
                g.node_count()
            )));
        }
        let assignment = renumber(labels);
        let count = assignment.iter().max().map_or(0, |&c| c + 1);
        let mut communities = vec![Vec::new(); count];
        for (v, &c) in assignment.iter().enumerate() {
            communities[c].push(v);
        }
        let quality = modularity(g, &assignment);
        Ok(Partition {
            assignment,
            communities,
            quality,
        })
    }

    pub fn community_of(&self, v: NodeId) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn communities(&self) -> &[Vec<NodeId>] {
        &self.communities
    }

    pub fn members(&self, c: usize) -> &[NodeId] {
        &self.communities[c]
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.communities.iter().map(Vec::len).collect()
    }

    /// Modularity of the partition on the graph it was built for.
    pub fn quality(&self) -> f64 {
        self.quality
    }
}

fn renumber(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Newman modularity `sum_c [ e_c/m - (d_c/2m)^2 ]`. Zero for edgeless graphs.
pub fn modularity(g: &Graph, assignment: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let count = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0usize; count];
    let mut degree = vec![0usize; count];
    for v in g.nodes() {
        degree[assignment[v]] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if assignment[u] == assignment[v] {
            internal[assignment[u]] += 1;
        }
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum()
}

/// Runs the Leiden procedure and returns the best partition found.
pub fn detect_communities(g: &Graph, rng_seed: u64) -> Result<Partition> {
    detect_communities_traced(g, rng_seed).map(|(p, _)| p)
}

/// Like [`detect_communities`], also returning the modularity after every
/// outer iteration. The trace is non-decreasing.
pub fn detect_communities_traced(g: &Graph, rng_seed: u64) -> Result<(Partition, Vec<f64>)> {
    if g.is_empty() {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    const MAX_ITERATIONS: u64 = 50;

    let base = WeightedGraph::from_graph(g);
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut quality = modularity(g, &membership);
    let mut trace = vec![quality];
    for iteration in 0..MAX_ITERATIONS {
        let mut rng = rng::stream(rng_seed, &[iteration]);
        let next = leiden_pass(&base, &membership, &mut rng);
        let next_quality = modularity(g, &next);
        if next_quality <= quality + 1e-12 {
            break;
        }
        membership = next;
        quality = next_quality;
        trace.push(quality);
    }
    Ok((Partition::from_assignment(g, &membership)?, trace))
}

/// Weighted multigraph used at every aggregation level. Edge weights count
/// original edges; `self_weight` counts edges internal to an aggregate node.
#[derive(Debug, Clone)]
struct WeightedGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    strength: Vec<f64>,
    // twice the number of original edges
    total: f64,
}

impl WeightedGraph {
    fn from_graph(g: &Graph) -> Self {
        let adjacency: Vec<Vec<(usize, f64)>> = g
            .nodes()
            .map(|v| g.neighbors(v).iter().map(|&u| (u, 1.0)).collect())
            .collect();
        let strength = g.nodes().map(|v| g.degree(v) as f64).collect();
        WeightedGraph {
            adjacency,
            self_weight: vec![0.0; g.node_count()],
            strength,
            total: 2.0 * g.edge_count() as f64,
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Collapses nodes by `groups` (values `0..k`).
    fn aggregate(&self, groups: &[usize], k: usize) -> WeightedGraph {
        let mut self_weight = vec![0.0; k];
        let mut strength = vec![0.0; k];
        let mut pending: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        for v in 0..self.len() {
            let gv = groups[v];
            self_weight[gv] += self.self_weight[v];
            strength[gv] += self.strength[v];
            for &(u, w) in &self.adjacency[v] {
                let gu = groups[u];
                if gu == gv {
                    // seen from both endpoints
                    self_weight[gv] += w / 2.0;
                } else {
                    pending[gv].push((gu, w));
                }
            }
        }
        let adjacency = pending
            .into_iter()
            .map(|mut list| {
                list.sort_unstable_by_key(|&(u, _)| u);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
                for (u, w) in list {
                    match merged.last_mut() {
                        Some((last, acc)) if *last == u => *acc += w,
                        _ => merged.push((u, w)),
                    }
                }
                merged
            })
            .collect();
        WeightedGraph {
            adjacency,
            self_weight,
            strength,
            total: self.total,
        }
    }
}

const GAIN_EPS: f64 = 1e-10;
const REFINE_RANDOMNESS: f64 = 0.01;

fn leiden_pass(base: &WeightedGraph, start: &[usize], rng: &mut StreamRng) -> Vec<usize> {
    let mut graph = base.clone();
    let mut comm = renumber(start);
    // original node -> node of the current aggregate graph
    let mut level_of: Vec<usize> = (0..base.len()).collect();

    loop {
        move_nodes(&graph, &mut comm, rng);
        comm = renumber(&comm);
        let count = comm.iter().max().map_or(0, |&c| c + 1);
        if count == graph.len() {
            break;
        }
        let mut refined = refine(&graph, &comm, rng);
        let mut refined_count = refined.iter().max().map_or(0, |&c| c + 1);
        if refined_count == graph.len() {
            // refinement found nothing to merge; aggregate the coarse partition
            refined = comm.clone();
            refined_count = count;
        }
        let mut next_comm = vec![0; refined_count];
        for v in 0..graph.len() {
            next_comm[refined[v]] = comm[v];
        }
        graph = graph.aggregate(&refined, refined_count);
        for slot in &mut level_of {
            *slot = refined[*slot];
        }
        comm = next_comm;
    }
    level_of.iter().map(|&v| comm[v]).collect()
}

/// Queue-based local moving. Returns whether any node moved.
fn move_nodes(graph: &WeightedGraph, comm: &mut [usize], rng: &mut StreamRng) -> bool {
    let n = graph.len();
    let two_m = graph.total;
    if two_m == 0.0 {
        return false;
    }
    let mut total = vec![0.0; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        total[comm[v]] += graph.strength[v];
        size[comm[v]] += 1;
    }
    let mut empty: Vec<usize> = (0..n).filter(|&c| size[c] == 0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut queue: VecDeque<usize> = order.into_iter().collect();
    let mut queued = vec![true; n];

    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved = false;

    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let current = comm[v];
        let k = graph.strength[v];

        for &(u, w) in &graph.adjacency[v] {
            let c = comm[u];
            if link[c] == 0.0 {
                touched.push(c);
            }
            link[c] += w;
        }

        total[current] -= k;
        size[current] -= 1;
        let mut best = current;
        let mut best_gain = link[current] - k * total[current] / two_m;
        for &c in &touched {
            let gain = link[c] - k * total[c] / two_m;
            if gain > best_gain + GAIN_EPS {
                best = c;
                best_gain = gain;
            }
        }
        if best_gain < -GAIN_EPS && size[current] > 0 {
            // an empty community scores zero
            if let Some(e) = empty.pop() {
                best = e;
            }
        }
        if size[current] == 0 && best != current {
            empty.push(current);
        }
        total[best] += k;
        size[best] += 1;
        comm[v] = best;

        for &c in &touched {
            link[c] = 0.0;
        }
        touched.clear();

        if best != current {
            moved = true;
            for &(u, _) in &graph.adjacency[v] {
                if !queued[u] && comm[u] != best {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    moved
}

/// Splits every community into well-connected subcommunities by merging
/// singletons, with randomised choice among non-negative gains.
fn refine(graph: &WeightedGraph, comm: &[usize], rng: &mut StreamRng) -> Vec<usize> {
    let n = graph.len();
    let two_m = graph.total;
    let mut refined: Vec<usize> = (0..n).collect();
    if two_m == 0.0 {
        return refined;
    }
    let count = comm.iter().max().map_or(0, |&c| c + 1);
    let mut members = vec![Vec::new(); count];
    let mut comm_total = vec![0.0; count];
    for v in 0..n {
        members[comm[v]].push(v);
        comm_total[comm[v]] += graph.strength[v];
    }

    let mut ref_total: Vec<f64> = graph.strength.clone();
    let mut ref_size = vec![1usize; n];
    // weight from each refined community to the rest of its parent community
    let mut ref_external: Vec<f64> = (0..n)
        .map(|v| {
            graph.adjacency[v]
                .iter()
                .filter(|&&(u, _)| comm[u] == comm[v])
                .map(|&(_, w)| w)
                .sum()
        })
        .collect();

    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut candidates: Vec<(usize, f64)> = Vec::new();

    for (c, nodes) in members.iter_mut().enumerate() {
        nodes.shuffle(rng);
        let parent_total = comm_total[c];
        for &v in nodes.iter() {
            if ref_size[refined[v]] != 1 {
                continue;
            }
            let k = graph.strength[v];
            let external_v = ref_external[refined[v]];
            if external_v < k * (parent_total - k) / two_m - GAIN_EPS {
                continue;
            }

            for &(u, w) in &graph.adjacency[v] {
                if comm[u] != c {
                    continue;
                }
                let r = refined[u];
                if link[r] == 0.0 {
                    touched.push(r);
                }
                link[r] += w;
            }

            let own = refined[v];
            candidates.clear();
            candidates.push((own, 0.0));
            for &r in &touched {
                if r == own {
                    continue;
                }
                let well_connected = ref_external[r]
                    >= ref_total[r] * (parent_total - ref_total[r]) / two_m - GAIN_EPS;
                if !well_connected {
                    continue;
                }
                let gain = link[r] - k * ref_total[r] / two_m;
                if gain >= 0.0 {
                    candidates.push((r, gain));
                }
            }

            let choice = pick_weighted(&candidates, rng);
            if choice != own {
                let w_to = link[choice];
                ref_external[choice] += external_v - 2.0 * w_to;
                ref_total[choice] += k;
                ref_size[choice] += 1;
                ref_size[own] = 0;
                ref_total[own] = 0.0;
                ref_external[own] = 0.0;
                refined[v] = choice;
            }

            for &r in &touched {
                link[r] = 0.0;
            }
            touched.clear();
        }
    }
    renumber(&refined)
}

fn pick_weighted(candidates: &[(usize, f64)], rng: &mut StreamRng) -> usize {
    let max = candidates
        .iter()
        .map(|&(_, g)| g)
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = candidates
        .iter()
        .map(|&(_, g)| ((g - max) / REFINE_RANDOMNESS).exp())
        .collect();
    let sum: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * sum;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return candidates[i].0;
        }
        x -= w;
    }
    candidates[candidates.len() - 1].0
}

/// Result of removing small communities.
#[derive(Debug, Clone)]
pub struct Filtered {
    pub graph: Graph,
    pub partition: Partition,
    /// Node of the input graph for each node of the filtered graph.
    pub parent_ids: Vec<NodeId>,
}

/// Drops every community with fewer than `s` nodes, along with its nodes.
pub fn filter_small_communities(g: &Graph, p: &Partition, s: usize) -> Result<Filtered> {
    if s == 0 {
        return Err(Error::InvalidParameter("scaling factor must be at least 1".into()));
    }
    let keep: Vec<NodeId> = g
        .nodes()
        .filter(|&v| p.members(p.community_of(v)).len() >= s)
        .collect();
    if keep.is_empty() {
        return Err(Error::AllCommunitiesFiltered);
    }
    let graph = g.induced_subgraph(&keep);
    let labels: Vec<usize> = keep.iter().map(|&v| p.community_of(v)).collect();
    let partition = Partition::from_assignment(&graph, &labels)?;
    Ok(Filtered {
        graph,
        partition,
        parent_ids: keep,
    })
}

/// Writes `node_id,community_id` rows using external node ids.
pub fn write_partition_csv<W: Write>(g: &Graph, p: &Partition, mut out: W) -> Result<()> {
    writeln!(out, "node_id,community_id")?;
    for v in g.nodes() {
        writeln!(out, "{},{}", g.label(v), p.community_of(v))?;
    }
    Ok(())
}

pub fn read_partition_csv<R: BufRead>(g: &Graph, reader: R) -> Result<Partition> {
    Partition::from_assignment(g, &read_assignment_csv(g, reader)?)
}

/// Community id of every node as written in the file, without renumbering.
pub fn read_assignment_csv<R: BufRead>(g: &Graph, reader: R) -> Result<Vec<usize>> {
    let mut labels = vec![usize::MAX; g.node_count()];
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("node_id")) {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let (node, community) = line
            .split_once(',')
            .ok_or_else(|| bad("expected `node_id,community_id`".into()))?;
        let node: u64 = node
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad node id `{node}`")))?;
        let community: usize = community
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad community id `{community}`")))?;
        let v = g
            .node_by_label(node)
            .ok_or_else(|| bad(format!("node {node} is not in the graph")))?;
        labels[v] = community;
    }
    if let Some(v) = labels.iter().position(|&c| c == usize::MAX) {
        return Err(Error::InvalidParameter(format!(
            "partition has no community for node {}",
            g.label(v)
        )));
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_edges(nodes: std::ops::Range<usize>) -> Vec<(usize, usize)> {
        let v: Vec<usize> = nodes.collect();
        let mut out = Vec::new();
        for (i, &a) in v.iter().enumerate() {
            for &b in &v[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }

    /// Maximum modularity over every set partition (restricted growth strings).
    fn brute_force_best(g: &Graph) -> (f64, Vec<usize>) {
        let n = g.node_count();
        let mut labels = vec![0usize; n];
        let mut best = (f64::NEG_INFINITY, labels.clone());
        fn rec(i: usize, max: usize, labels: &mut Vec<usize>, g: &Graph, best: &mut (f64, Vec<usize>)) {
            if i == labels.len() {
                let q = modularity(g, labels);
                if q > best.0 + 1e-12 {
                    *best = (q, labels.clone());
                }
                return;
            }
            for c in 0..=max + 1 {
                labels[i] = c;
                rec(i + 1, max.max(c), labels, g, best);
            }
        }
        labels[0] = 0;
        rec(1, 0, &mut labels, g, &mut best);
        best
    }

    fn two_cliques_with_bridge() -> Graph {
        let mut edges = clique_edges(0..5);
        edges.extend(clique_edges(5..10));
        edges.push((4, 5));
        Graph::from_edges(10, edges).unwrap()
    }

    #[test]
    fn modularity_worked_values() {
        let triangles = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!((modularity(&triangles, &[0, 0, 0, 1, 1, 1]) - 0.5).abs() < 1e-12);
        assert!(modularity(&triangles, &[0; 6]).abs() < 1e-12);

        let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((modularity(&triangle, &[0, 1, 2]) + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bridged_cliques_match_exhaustive_optimum() {
        let g = two_cliques_with_bridge();
        let (best_q, best_labels) = brute_force_best(&g);
        let p = detect_communities(&g, 7).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.members(0), &[0, 1, 2, 3, 4]);
        assert_eq!(p.members(1), &[5, 6, 7, 8, 9]);
        assert!((p.quality() - best_q).abs() < 1e-12);
        assert_eq!(renumber(&best_labels), p.assignment());
    }

    #[test]
    fn disjoint_triangles_match_exhaustive_optimum() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (best_q, _) = brute_force_best(&g);
        let p = detect_communities(&g, 1).unwrap();
        assert_eq!(p.sizes(), vec![3, 3]);
        assert!((p.quality() - best_q).abs() < 1e-12);
    }

    #[test]
    fn single_clique_stays_whole() {
        let g = Graph::from_edges(6, clique_edges(0..6)).unwrap();
        let p = detect_communities(&g, 3).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn detection_is_seed_deterministic() {
        let mut edges = Vec::new();
        for i in 0..40 {
            edges.push((i, (i + 1) % 40));
            edges.push((i, (i * 7 + 3) % 40));
        }
        let g = Graph::from_edges(40, edges).unwrap();
        let a = detect_communities(&g, 11).unwrap();
        let b = detect_communities(&g, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn edgeless_graph_stays_singletons() {
        let g = Graph::from_edges(3, []).unwrap();
        let p = detect_communities(&g, 0).unwrap();
        assert_eq!(p.len(), 3);
    }

    fn sized_partition(sizes: &[usize]) -> (Graph, Partition) {
        let n: usize = sizes.iter().sum();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut start = 0;
        for (c, &size) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat(c).take(size));
            for v in start + 1..start + size {
                edges.push((v - 1, v));
            }
            start += size;
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let p = Partition::from_assignment(&g, &labels).unwrap();
        (g, p)
    }

    #[test]
    fn filter_threshold_rule() {
        let (g, p) = sized_partition(&[10, 3]);
        let f = filter_small_communities(&g, &p, 4).unwrap();
        assert_eq!(f.partition.sizes(), vec![10]);
        assert_eq!(f.graph.node_count(), 10);
        assert_eq!(f.parent_ids, (0..10).collect::<Vec<_>>());

        let same = filter_small_communities(&g, &p, 1).unwrap();
        assert_eq!(same.graph, g);
        assert_eq!(same.partition.sizes(), vec![10, 3]);

        let (g, p) = sized_partition(&[8, 8]);
        let f = filter_small_communities(&g, &p, 8).unwrap();
        assert_eq!(f.partition.sizes(), vec![8, 8]);
    }

    #[test]
    fn filter_everything_is_an_error() {
        let (g, p) = sized_partition(&[3, 3]);
        assert!(matches!(
            filter_small_communities(&g, &p, 4),
            Err(Error::AllCommunitiesFiltered)
        ));
    }

    #[test]
    fn filter_reindexes_surviving_communities() {
        let (g, p) = sized_partition(&[2, 5, 1, 6]);
        let f = filter_small_communities(&g, &p, 3).unwrap();
        assert_eq!(f.partition.sizes(), vec![5, 6]);
        assert_eq!(f.parent_ids[0], 2);
    }

    #[test]
    fn partition_csv_round_trip() {
        let g = two_cliques_with_bridge();
        let p = detect_communities(&g, 5).unwrap();
        let mut buf = Vec::new();
        write_partition_csv(&g, &p, &mut buf).unwrap();
        let back = read_partition_csv(&g, buf.as_slice()).unwrap();
        assert_eq!(back, p);
    }
}
