//! Two-objective fitness and Pareto fronts of seed sets.
//!
//! Influence (fraction of the network eventually activated) is maximised,
//! seed fraction (seed-set size over network size) is minimised.
//!
//! Fronts are stored as CSV with the header
//! `influence_fraction,seed_fraction,seed_nodes`, where `seed_nodes` lists
//! external node ids separated by `;`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub influence: f64,
    pub seed_fraction: f64,
}

impl Fitness {
    pub fn new(influence: f64, seed_fraction: f64) -> Self {
        Fitness {
            influence,
            seed_fraction,
        }
    }
}

/// `a` is at least as good in both objectives and strictly better in one.
pub fn dominates(a: Fitness, b: Fitness) -> bool {
    a.influence >= b.influence
        && a.seed_fraction <= b.seed_fraction
        && (a.influence > b.influence || a.seed_fraction < b.seed_fraction)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontEntry {
    pub fitness: Fitness,
    pub seeds: Vec<NodeId>,
}

/// Mutually non-dominated entries with distinct fitness points, kept sorted by
/// ascending influence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Front {
    entries: Vec<FrontEntry>,
}

impl Front {
    pub fn new() -> Self {
        Front::default()
    }

    /// Pareto-filters `candidates`; among equal points the first one wins.
    pub fn from_entries(candidates: impl IntoIterator<Item = FrontEntry>) -> Self {
        let mut front = Front::new();
        for entry in candidates {
            front.insert(entry);
        }
        front
    }

    /// Archive update. Returns whether the entry was added.
    pub fn insert(&mut self, entry: FrontEntry) -> bool {
        let f = entry.fitness;
        if self
            .entries
            .iter()
            .any(|e| e.fitness == f || dominates(e.fitness, f))
        {
            return false;
        }
        self.entries.retain(|e| !dominates(f, e.fitness));
        let at = self.entries.partition_point(|e| {
            (e.fitness.influence, e.fitness.seed_fraction) < (f.influence, f.seed_fraction)
        });
        self.entries.insert(at, entry);
        true
    }

    pub fn entries(&self) -> &[FrontEntry] {
        &self.entries
    }

    pub fn points(&self) -> Vec<Fitness> {
        self.entries.iter().map(|e| e.fitness).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub const FRONT_HEADER: &str = "influence_fraction,seed_fraction,seed_nodes";

/// Writes the front with seed nodes translated to `g`'s external ids.
pub fn write_front_csv<W: Write>(g: &Graph, front: &Front, mut out: W) -> Result<()> {
    writeln!(out, "{FRONT_HEADER}")?;
    for e in front.entries() {
        let nodes: Vec<String> = e.seeds.iter().map(|&v| g.label(v).to_string()).collect();
        writeln!(
            out,
            "{},{},{}",
            e.fitness.influence,
            e.fitness.seed_fraction,
            nodes.join(";")
        )?;
    }
    Ok(())
}

/// A front row as stored on disk, seeds in external ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRow {
    pub fitness: Fitness,
    pub seed_labels: Vec<u64>,
}

pub fn read_front_csv<R: BufRead>(reader: R) -> Result<Vec<FrontRow>> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("influence_fraction")) {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let mut fields = line.splitn(3, ',');
        let mut number = |name: &str| -> Result<f64> {
            let field = fields.next().ok_or_else(|| bad(format!("missing {name}")))?;
            field
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad {name} `{field}`")))
        };
        let influence = number("influence_fraction")?;
        let seed_fraction = number("seed_fraction")?;
        let seed_labels = match fields.next().map(str::trim) {
            None | Some("") => Vec::new(),
            Some(list) => list
                .split(';')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| bad(format!("bad node id `{t}`")))
                })
                .collect::<Result<_>>()?,
        };
        rows.push(FrontRow {
            fitness: Fitness::new(influence, seed_fraction),
            seed_labels,
        });
    }
    Ok(rows)
}

/// Reads a front and resolves seed labels against `g`.
pub fn read_front_on<R: BufRead>(g: &Graph, reader: R) -> Result<Front> {
    let rows = read_front_csv(reader)?;
    let entries = rows
        .into_iter()
        .map(|row| {
            let seeds = row
                .seed_labels
                .iter()
                .map(|&l| {
                    g.node_by_label(l).ok_or_else(|| {
                        Error::InvalidParameter(format!("front node {l} is not in the graph"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FrontEntry {
                fitness: row.fitness,
                seeds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Front::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(x: f64, y: f64, seeds: &[NodeId]) -> FrontEntry {
        FrontEntry {
            fitness: Fitness::new(x, y),
            seeds: seeds.to_vec(),
        }
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(Fitness::new(0.5, 0.01), Fitness::new(0.4, 0.02)));
        assert!(!dominates(Fitness::new(0.5, 0.01), Fitness::new(0.5, 0.01)));
        assert!(!dominates(Fitness::new(0.5, 0.02), Fitness::new(0.6, 0.01)));
        assert!(dominates(Fitness::new(0.5, 0.01), Fitness::new(0.5, 0.02)));
    }

    #[test]
    fn archive_keeps_first_of_equal_points() {
        let mut f = Front::new();
        assert!(f.insert(entry(0.5, 0.01, &[1])));
        assert!(!f.insert(entry(0.5, 0.01, &[2])));
        assert!(f.insert(entry(0.7, 0.02, &[3, 4])));
        assert!(f.insert(entry(0.6, 0.005, &[5])));
        assert_eq!(f.points(), vec![Fitness::new(0.6, 0.005), Fitness::new(0.7, 0.02)]);
    }

    #[test]
    fn csv_round_trip() {
        let g = crate::graph::load_edge_list("10 20\n20 30\n".as_bytes()).unwrap();
        let f = Front::from_entries([entry(1.0 / 3.0, 1.0 / 3.0, &[1]), entry(1.0, 2.0 / 3.0, &[0, 2])]);
        let mut buf = Vec::new();
        write_front_csv(&g, &f, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(FRONT_HEADER));
        assert!(text.contains(",10;30\n"));
        let back = read_front_on(&g, buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn csv_errors() {
        assert!(read_front_csv("influence_fraction,seed_fraction,seed_nodes\nx,0.1,1\n".as_bytes()).is_err());
        assert!(read_front_csv("0.1,0.2,1;a\n".as_bytes()).is_err());
    }
}
