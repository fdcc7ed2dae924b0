//! Run configuration, the individual stages with their file formats, and the
//! end-to-end pipeline.
//!
//! Artifacts written by a pipeline run (all inside the output directory):
//!
//! | file                  | content                                                 |
//! |-----------------------|---------------------------------------------------------|
//! | `partition.csv`       | `node_id,community_id` for the input graph              |
//! | `scaled.edges`        | edge list of the downscaled graph                       |
//! | `scaled_partition.csv`| scaled nodes labelled with the input community id       |
//! | `front_scaled.csv`    | front found on the downscaled graph                     |
//! | `front_upscaled.csv`  | upscaled front re-evaluated on the input graph          |
//! | `hv_trace.csv`        | archive hypervolume after every generation              |
//! | `manifest.json`       | parameters, seeds, attempt counts, timings, file hashes |

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baseline::{celf, GreedyCurve};
use crate::cascade::PropagationModel;
use crate::centrality::CentralityKind;
use crate::community::{
    detect_communities, filter_small_communities, read_assignment_csv, read_partition_csv,
    write_partition_csv, Filtered, Partition,
};
use crate::downscale::{downscale, BlockPlacement, ScaledGraph};
use crate::error::{Error, Result};
use crate::evaluate::{hyperarea, hypervolume_clipped, RefPoint};
use crate::front::{read_front_csv, read_front_on, write_front_csv, Fitness, Front};
use crate::graph::{load_edge_list_file, write_edge_list, Graph, NodeId};
use crate::moea::{nsga2_run, MoeaParams, MoeaRun};
use crate::rng;
use crate::upscale::{upscale_front_onto, Shortfall, UpscaleContext, UpscaledFront};

pub const SCALE_FACTORS: [usize; 6] = [1, 2, 4, 8, 16, 32];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ic,
    Wc,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Ok(ModelKind::Ic),
            "wc" => Ok(ModelKind::Wc),
            _ => Err(Error::InvalidParameter(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub scale: usize,
    pub model: ModelKind,
    pub centrality: CentralityKind,
    /// Search parameters; `moea.ic_p` is the IC activation probability.
    pub moea: MoeaParams,
    pub seed: u64,
    pub out: PathBuf,
    pub reference_front: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::new(),
            scale: 2,
            model: ModelKind::Ic,
            centrality: CentralityKind::Pagerank,
            moea: MoeaParams::default(),
            seed: 0,
            out: PathBuf::from("out"),
            reference_front: None,
            threads: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad value `{value}` for `{key}`")))
}

/// `key = value` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "expected `key = value`".into(),
        })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Sets one option by its config-file key (dashes and underscores are
    /// interchangeable).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let m = &mut self.moea;
        match key.replace('-', "_").as_str() {
            "input" => self.input = PathBuf::from(value),
            "scale" => self.scale = parse_value(key, value)?,
            "model" => self.model = value.parse()?,
            "p" => m.ic_p = parse_value(key, value)?,
            "centrality" => self.centrality = value.parse()?,
            "seed" => self.seed = parse_value(key, value)?,
            "generations" => m.generations = parse_value(key, value)?,
            "population" => m.population_size = parse_value(key, value)?,
            "sims" => m.n_sims = parse_value(key, value)?,
            "elites" => m.elites = parse_value(key, value)?,
            "crossover_rate" => m.crossover_rate = parse_value(key, value)?,
            "mutation_rate" => m.mutation_rate = parse_value(key, value)?,
            "tournament_size" => m.tournament_size = parse_value(key, value)?,
            "k_max_fraction" => m.k_max_fraction = parse_value(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "reference_front" => self.reference_front = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_value(key, value)?),
            _ => return Err(Error::InvalidParameter(format!("unknown option `{key}`"))),
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        for (key, value) in parse_key_values(&fs::read_to_string(path)?)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    pub fn propagation(&self) -> Result<PropagationModel> {
        match self.model {
            ModelKind::Ic => PropagationModel::ic(self.moea.ic_p),
            ModelKind::Wc => Ok(PropagationModel::wc()),
        }
    }

    pub fn stage_seed(&self, stage: &str) -> u64 {
        rng::derive_str(self.seed, stage)
    }

    pub fn validate(&self) -> Result<()> {
        if !SCALE_FACTORS.contains(&self.scale) {
            return Err(Error::InvalidParameter(format!(
                "scaling factor {} is not one of {SCALE_FACTORS:?}",
                self.scale
            )));
        }
        self.moea.validate()?;
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("thread count must be positive".into()));
        }
        for path in std::iter::once(&self.input).chain(self.reference_front.as_ref()) {
            if !path.is_file() {
                return Err(Error::InvalidParameter(format!("{} is not a readable file", path.display())));
            }
        }
        Ok(())
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// What the upscaler needs from the downscaling stage.
#[derive(Debug, Clone)]
pub struct ScaledArtifacts {
    /// Input graph and partition after dropping communities smaller than `s`.
    pub filtered: Filtered,
    pub scaled_graph: Graph,
    pub scaled_partition: Partition,
    /// Filtered community for every scaled community.
    pub community_map: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DownscaleOutput {
    pub partition: Partition,
    pub filtered: Filtered,
    pub scaled: ScaledGraph,
}

impl DownscaleOutput {
    pub fn artifacts(&self) -> ScaledArtifacts {
        ScaledArtifacts {
            filtered: self.filtered.clone(),
            scaled_graph: self.scaled.graph.clone(),
            scaled_partition: self.scaled.partition.clone(),
            community_map: self.scaled.community_map.clone(),
        }
    }
}

/// Community detection, filtering and downscaling.
pub fn stage_downscale(g: &Graph, s: usize, detect_seed: u64, downscale_seed: u64) -> Result<DownscaleOutput> {
    let partition = detect_communities(g, detect_seed).map_err(|e| e.in_stage("detect"))?;
    let filtered = filter_small_communities(g, &partition, s).map_err(|e| e.in_stage("filter"))?;
    let scaled = downscale(&filtered.graph, &filtered.partition, s, downscale_seed)
        .map_err(|e| e.in_stage("downscale"))?;
    Ok(DownscaleOutput {
        partition,
        filtered,
        scaled,
    })
}

pub fn stage_optimize(g: &Graph, model: PropagationModel, params: &MoeaParams, seed: u64) -> Result<MoeaRun> {
    nsga2_run(g, model, params, seed).map_err(|e| e.in_stage("optimize"))
}

/// Upscales `front` and evaluates it on `original`, the unfiltered input graph.
#[allow(clippy::too_many_arguments)]
pub fn stage_upscale(
    original: &Graph,
    art: &ScaledArtifacts,
    front: &Front,
    s: usize,
    kind: CentralityKind,
    model: PropagationModel,
    n_sims: usize,
    seed: u64,
) -> Result<UpscaledFront> {
    let run = || {
        let ctx = UpscaleContext::new(
            &art.filtered.graph,
            &art.filtered.partition,
            &art.scaled_graph,
            &art.scaled_partition,
            art.community_map.clone(),
            kind,
        )?;
        upscale_front_onto(front, &ctx, s, original, &art.filtered.parent_ids, model, n_sims, seed)
    };
    run().map_err(|e| e.in_stage("upscale"))
}

pub fn stage_baseline(g: &Graph, model: PropagationModel, params: &MoeaParams, seed: u64) -> Result<GreedyCurve> {
    celf(g, model, params.k_max(g.node_count()), params.n_sims, seed).map_err(|e| e.in_stage("baseline"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub hv_a: f64,
    pub hv_b: f64,
    pub hr: f64,
}

/// Hypervolumes of both fronts and the hyperarea of `a` relative to `b`.
pub fn evaluate_fronts(a: &[Fitness], b: &[Fitness], reference: RefPoint) -> Result<Evaluation> {
    let hv_a = hypervolume_clipped(a, reference);
    let hv_b = hypervolume_clipped(b, reference);
    let hr = hyperarea(hv_a, hv_b).map_err(|e| e.in_stage("evaluate"))?;
    Ok(Evaluation { hv_a, hv_b, hr })
}

pub fn read_front_points(path: &Path) -> Result<Vec<Fitness>> {
    Ok(read_front_csv(BufReader::new(File::open(path)?))?
        .into_iter()
        .map(|row| row.fitness)
        .collect())
}

pub fn read_front_file(g: &Graph, path: &Path) -> Result<Front> {
    read_front_on(g, BufReader::new(File::open(path)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `bytes` to `dir/name` and returns its manifest record.
pub fn write_artifact(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileRecord> {
    fs::write(dir.join(name), bytes)?;
    Ok(FileRecord {
        path: name.to_string(),
        sha256: sha256_hex(bytes),
    })
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

pub fn render_front(g: &Graph, front: &Front) -> Result<Vec<u8>> {
    render(|b| write_front_csv(g, front, b))
}

/// Original community id (in `partition`) of each filtered community.
fn filtered_community_ids(partition: &Partition, filtered: &Filtered) -> Vec<usize> {
    filtered
        .partition
        .communities()
        .iter()
        .map(|members| partition.community_of(filtered.parent_ids[members[0]]))
        .collect()
}

/// `partition.csv`, `scaled.edges` and `scaled_partition.csv`.
pub fn write_downscale_artifacts(dir: &Path, g: &Graph, ds: &DownscaleOutput) -> Result<Vec<(String, FileRecord)>> {
    let ids = filtered_community_ids(&ds.partition, &ds.filtered);
    let scaled = &ds.scaled;
    let partition = render(|b| write_partition_csv(g, &ds.partition, b))?;
    let edges = render(|b| write_edge_list(&scaled.graph, b))?;
    let scaled_partition = render(|b| {
        writeln!(b, "node_id,community_id")?;
        for v in scaled.graph.nodes() {
            let c = scaled.community_map[scaled.partition.community_of(v)];
            writeln!(b, "{},{}", scaled.graph.label(v), ids[c])?;
        }
        Ok(())
    })?;
    Ok(vec![
        ("partition".into(), write_artifact(dir, "partition.csv", &partition)?),
        ("scaled_graph".into(), write_artifact(dir, "scaled.edges", &edges)?),
        ("scaled_partition".into(), write_artifact(dir, "scaled_partition.csv", &scaled_partition)?),
    ])
}

/// Rebuilds the downscaling outputs from the files written by
/// [`write_downscale_artifacts`].
pub fn load_scaled_artifacts(
    g: &Graph,
    partition_path: &Path,
    scaled_edges: &Path,
    scaled_partition_path: &Path,
    s: usize,
) -> Result<ScaledArtifacts> {
    let partition = read_partition_csv(g, BufReader::new(File::open(partition_path)?))?;
    let filtered = filter_small_communities(g, &partition, s)?;
    let ids = filtered_community_ids(&partition, &filtered);
    let scaled_graph = load_edge_list_file(scaled_edges)?;
    let raw = read_assignment_csv(&scaled_graph, BufReader::new(File::open(scaled_partition_path)?))?;
    let scaled_partition = Partition::from_assignment(&scaled_graph, &raw)?;
    let community_map = scaled_partition
        .communities()
        .iter()
        .map(|members| {
            let id = raw[members[0]];
            ids.iter().position(|&x| x == id).ok_or_else(|| {
                Error::InvalidParameter(format!("scaled community {id} has no counterpart in the input"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledArtifacts {
        filtered,
        scaled_graph,
        scaled_partition,
        community_map,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommunityStats {
    pub detected: usize,
    pub kept: usize,
    pub dropped_nodes: usize,
    pub modularity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaledStats {
    pub nodes: usize,
    pub edges: usize,
    pub requested_edges: usize,
    pub shortfalls: Vec<BlockPlacement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AttemptStats {
    pub downscale: u64,
    pub optimize_init: u64,
    pub optimize: u64,
    pub upscale: u64,
    pub total: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypervolumeStats {
    pub scaled: f64,
    pub upscaled: f64,
    pub reference: Option<f64>,
    pub hyperarea: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub propagation: PropagationModel,
    pub estimator: String,
    pub stage_seeds: BTreeMap<String, u64>,
    pub original: GraphStats,
    pub communities: CommunityStats,
    pub scaled: ScaledStats,
    pub evaluations: usize,
    pub attempts: AttemptStats,
    pub hypervolume: HypervolumeStats,
    pub upscale_shortfalls: Vec<Shortfall>,
    pub wall_clock_seconds: BTreeMap<String, f64>,
    pub files: BTreeMap<String, FileRecord>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub manifest: Manifest,
    pub scaled_front: Front,
    pub upscaled_front: Front,
}

pub const STAGES: [&str; 5] = ["detect", "downscale", "optimize", "upscale", "baseline"];

/// Full run: load, detect, filter, downscale, optimise, upscale, evaluate.
/// Artifacts are written as soon as they exist, so a failing stage leaves
/// the earlier ones behind.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let model = cfg.propagation()?;
    with_threads(cfg.threads, || run_stages(cfg, model))?
}

fn run_stages(cfg: &RunConfig, model: PropagationModel) -> Result<PipelineOutput> {
    let mut clock = BTreeMap::new();
    let mut files = BTreeMap::new();
    let mut timed = |name: &str, start: Instant| {
        clock.insert(name.to_string(), start.elapsed().as_secs_f64());
    };

    let t = Instant::now();
    let g = load_edge_list_file(&cfg.input).map_err(|e| e.in_stage("load"))?;
    let reference = match &cfg.reference_front {
        Some(path) => Some(read_front_points(path).map_err(|e| e.in_stage("load"))?),
        None => None,
    };
    timed("load", t);
    fs::create_dir_all(&cfg.out)?;

    let t = Instant::now();
    let ds = stage_downscale(&g, cfg.scale, cfg.stage_seed("detect"), cfg.stage_seed("downscale"))?;
    files.extend(write_downscale_artifacts(&cfg.out, &g, &ds)?);
    timed("downscale", t);

    let t = Instant::now();
    let scaled_graph = &ds.scaled.graph;
    let run = stage_optimize(scaled_graph, model, &cfg.moea, cfg.stage_seed("optimize"))?;
    files.insert(
        "front_scaled".into(),
        write_artifact(&cfg.out, "front_scaled.csv", &render_front(scaled_graph, &run.front)?)?,
    );
    let trace = render(|b| {
        writeln!(b, "generation,hypervolume")?;
        for (i, hv) in run.hv_trace.iter().enumerate() {
            writeln!(b, "{i},{hv}")?;
        }
        Ok(())
    })?;
    files.insert("hv_trace".into(), write_artifact(&cfg.out, "hv_trace.csv", &trace)?);
    timed("optimize", t);

    let t = Instant::now();
    let up = stage_upscale(
        &g,
        &ds.artifacts(),
        &run.front,
        cfg.scale,
        cfg.centrality,
        model,
        cfg.moea.n_sims,
        cfg.stage_seed("upscale"),
    )?;
    files.insert(
        "front_upscaled".into(),
        write_artifact(&cfg.out, "front_upscaled.csv", &render_front(&g, &up.front)?)?,
    );
    timed("upscale", t);

    let t = Instant::now();
    let bound = cfg.moea.reference_point();
    let hv_scaled = hypervolume_clipped(&run.front.points(), bound);
    let hv_up = hypervolume_clipped(&up.front.points(), bound);
    let (hv_ref, hr) = match &reference {
        Some(points) => {
            let e = evaluate_fronts(&up.front.points(), points, bound)?;
            (Some(e.hv_b), Some(e.hr))
        }
        None => (None, None),
    };
    timed("evaluate", t);

    let manifest = Manifest {
        config: cfg.clone(),
        propagation: model,
        estimator: "monte-carlo".into(),
        stage_seeds: STAGES.iter().map(|&s| (s.to_string(), cfg.stage_seed(s))).collect(),
        original: GraphStats {
            nodes: g.node_count(),
            edges: g.edge_count(),
        },
        communities: CommunityStats {
            detected: ds.partition.len(),
            kept: ds.filtered.partition.len(),
            dropped_nodes: g.node_count() - ds.filtered.graph.node_count(),
            modularity: ds.partition.quality(),
        },
        scaled: ScaledStats {
            nodes: scaled_graph.node_count(),
            edges: scaled_graph.edge_count(),
            requested_edges: ds.scaled.requested_edges(),
            shortfalls: ds.scaled.shortfalls().cloned().collect(),
        },
        evaluations: run.evaluations,
        attempts: AttemptStats {
            downscale: 0,
            optimize_init: run.init_attempts,
            optimize: run.total_attempts,
            upscale: up.total_attempts,
            total: run.total_attempts + up.total_attempts,
        },
        hypervolume: HypervolumeStats {
            scaled: hv_scaled,
            upscaled: hv_up,
            reference: hv_ref,
            hyperarea: hr,
        },
        upscale_shortfalls: up.shortfalls.clone(),
        wall_clock_seconds: clock,
        files,
    };
    let json = serde_json::to_vec_pretty(&manifest)?;
    fs::write(cfg.out.join("manifest.json"), json)?;
    Ok(PipelineOutput {
        manifest,
        scaled_front: run.front,
        upscaled_front: up.front,
    })
}

/// Node ids of `g` for a list of external labels.
pub fn resolve_labels(g: &Graph, labels: &[u64]) -> Result<Vec<NodeId>> {
    labels
        .iter()
        .map(|&l| {
            g.node_by_label(l)
                .ok_or_else(|| Error::InvalidParameter(format!("node {l} is not in the graph")))
        })
        .collect()
}
