//! Undirected simple graphs and the edge-list format.
//!
//! Nodes are the contiguous range `0..n`. Each node also carries the external
//! id it was loaded under, so results can be reported in the caller's ids.
//!
//! Edge-list files hold one edge per line as two whitespace-separated
//! non-negative integers. Lines starting with `#` or `%` and blank lines are
//! skipped. Self-loops and repeated edges are dropped, but a node that only
//! appears in a self-loop still exists as an isolated node; the writer uses
//! this to keep isolated nodes across a round trip.

use std::collections::{BTreeMap, VecDeque};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes labelled `0..n`. Self-loops and duplicates
    /// are discarded.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        Self::with_labels((0..n as u64).collect(), edges)
    }

    pub fn with_labels(
        labels: Vec<u64>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidNode(u));
            }
            if v >= n {
                return Err(Error::InvalidNode(v));
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            labels,
            edge_count: edge_count / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Internal id for an external label.
    pub fn node_by_label(&self, label: u64) -> Option<NodeId> {
        // labels of loaded graphs are sorted; fall back to a scan otherwise
        match self.labels.binary_search(&label) {
            Ok(i) => Some(i),
            Err(_) => self.labels.iter().position(|&l| l == label),
        }
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut component = Vec::new();
            while let Some(u) = queue.pop_front() {
                component.push(u);
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Subgraph induced by `keep` (ascending, distinct); node `i` of the result
    /// is `keep[i]`, with its label preserved.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Graph {
        let mut index = vec![usize::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adjacency: Vec<Vec<NodeId>> = keep
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&u| (index[u] != usize::MAX).then(|| index[u]))
                    .collect()
            })
            .collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adjacency,
            labels: keep.iter().map(|&v| self.labels[v]).collect(),
            edge_count,
        }
    }
}

/// Parses an edge list. External ids are remapped to `0..n` by ascending
/// value.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut raw = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next = |what: &str| -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("missing {what} endpoint"),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("`{tok}` is not a non-negative integer"),
            })
        };
        let u = next("first")?;
        let v = next("second")?;
        raw.push((u, v));
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut ids: BTreeMap<u64, NodeId> = BTreeMap::new();
    for &(u, v) in &raw {
        ids.insert(u, 0);
        ids.insert(v, 0);
    }
    for (i, slot) in ids.values_mut().enumerate() {
        *slot = i;
    }
    let labels: Vec<u64> = ids.keys().copied().collect();
    Graph::with_labels(labels, raw.iter().map(|(u, v)| (ids[u], ids[v])))
}

pub fn load_edge_list_file(path: impl AsRef<std::path::Path>) -> Result<Graph> {
    let file = std::fs::File::open(path)?;
    load_edge_list(std::io::BufReader::new(file))
}

/// Writes the graph in external ids. Isolated nodes are written as
/// self-loops so that they survive a reload.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    for v in g.nodes() {
        if g.degree(v) == 0 {
            writeln!(out, "{} {}", g.label(v), g.label(v))?;
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}
