use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use imscale::graph::load_edge_list_file;
use imscale::pipeline::{
    evaluate_fronts, load_scaled_artifacts, read_front_file, read_front_points, render_front,
    run_pipeline, stage_baseline, stage_downscale, stage_optimize, stage_upscale, with_threads,
    write_artifact, write_downscale_artifacts, FileRecord, RunConfig,
};
use imscale::{Error, Result};

#[derive(Parser)]
#[command(name = "imscale", version, about = "Influence maximisation on downscaled networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// detect, filter, downscale, optimise, upscale and evaluate
    Pipeline(Common),
    /// community detection and downscaling only
    Downscale(Common),
    /// NSGA-II on the input graph
    Optimize(Common),
    /// map a scaled front back to the input graph
    Upscale(UpscaleArgs),
    /// CELF greedy curve on the input graph
    Baseline(Common),
    /// hypervolumes and hyperarea of two fronts
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct Common {
    /// flat `key = value` file; flags given here win
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    scale: Option<usize>,
    #[arg(long, value_parser = ["ic", "wc"])]
    model: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    centrality: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    sims: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    reference_front: Option<PathBuf>,
}

#[derive(Args)]
struct UpscaleArgs {
    #[command(flatten)]
    common: Common,
    /// partition of the input graph written by `downscale`
    #[arg(long)]
    partition: PathBuf,
    #[arg(long)]
    scaled: PathBuf,
    #[arg(long)]
    scaled_partition: PathBuf,
    /// front found on the scaled graph
    #[arg(long)]
    front: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    front: PathBuf,
    #[arg(long)]
    reference_front: PathBuf,
    /// largest admissible seed fraction
    #[arg(long, default_value_t = 0.025)]
    bound: f64,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags: [(&str, Option<String>); 12] = [
            ("input", self.input.as_ref().map(|p| p.display().to_string())),
            ("scale", self.scale.map(|v| v.to_string())),
            ("model", self.model.clone()),
            ("p", self.p.map(|v| v.to_string())),
            ("centrality", self.centrality.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("generations", self.generations.map(|v| v.to_string())),
            ("population", self.population.map(|v| v.to_string())),
            ("sims", self.sims.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("threads", self.threads.map(|v| v.to_string())),
            ("reference_front", self.reference_front.as_ref().map(|p| p.display().to_string())),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                cfg.set(key, &value)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct StageManifest<'a> {
    stage: &'a str,
    config: &'a RunConfig,
    seed: u64,
    attempts: u64,
    files: BTreeMap<String, FileRecord>,
}

fn write_stage_manifest(cfg: &RunConfig, stage: &str, attempts: u64, files: BTreeMap<String, FileRecord>) -> Result<()> {
    let m = StageManifest {
        stage,
        config: cfg,
        seed: cfg.stage_seed(stage),
        attempts,
        files,
    };
    fs::write(cfg.out.join(format!("{stage}_manifest.json")), serde_json::to_vec_pretty(&m)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pipeline(c) => {
            let cfg = c.config()?;
            let out = run_pipeline(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&out.manifest.hypervolume)?);
            println!("attempts: {}", out.manifest.attempts.total);
        }
        Command::Downscale(c) => {
            let cfg = c.config()?;
            with_threads(cfg.threads, || -> Result<()> {
                let g = load_edge_list_file(&cfg.input)?;
                let ds = stage_downscale(&g, cfg.scale, cfg.stage_seed("detect"), cfg.stage_seed("downscale"))?;
                fs::create_dir_all(&cfg.out)?;
                let files = write_downscale_artifacts(&cfg.out, &g, &ds)?.into_iter().collect();
                println!(
                    "{} communities, scaled graph {} nodes / {} edges",
                    ds.scaled.partition.len(),
                    ds.scaled.graph.node_count(),
                    ds.scaled.graph.edge_count()
                );
                write_stage_manifest(&cfg, "downscale", 0, files)
            })??;
        }
        Command::Optimize(c) => {
            let cfg = c.config()?;
            with_threads(cfg.threads, || -> Result<()> {
                let g = load_edge_list_file(&cfg.input)?;
                let run = stage_optimize(&g, cfg.propagation()?, &cfg.moea, cfg.stage_seed("optimize"))?;
                fs::create_dir_all(&cfg.out)?;
                let rec = write_artifact(&cfg.out, "front.csv", &render_front(&g, &run.front)?)?;
                println!("{} front points, {} activation attempts", run.front.len(), run.total_attempts);
                write_stage_manifest(&cfg, "optimize", run.total_attempts, [("front".into(), rec)].into())
            })??;
        }
        Command::Upscale(a) => {
            let cfg = a.common.config()?;
            with_threads(cfg.threads, || -> Result<()> {
                let g = load_edge_list_file(&cfg.input)?;
                let art = load_scaled_artifacts(&g, &a.partition, &a.scaled, &a.scaled_partition, cfg.scale)?;
                let front = read_front_file(&art.scaled_graph, &a.front)?;
                let up = stage_upscale(
                    &g,
                    &art,
                    &front,
                    cfg.scale,
                    cfg.centrality,
                    cfg.propagation()?,
                    cfg.moea.n_sims,
                    cfg.stage_seed("upscale"),
                )?;
                fs::create_dir_all(&cfg.out)?;
                let rec = write_artifact(&cfg.out, "front_upscaled.csv", &render_front(&g, &up.front)?)?;
                println!("{} front points, {} activation attempts", up.front.len(), up.total_attempts);
                write_stage_manifest(&cfg, "upscale", up.total_attempts, [("front_upscaled".into(), rec)].into())
            })??;
        }
        Command::Baseline(c) => {
            let cfg = c.config()?;
            with_threads(cfg.threads, || -> Result<()> {
                let g = load_edge_list_file(&cfg.input)?;
                let curve = stage_baseline(&g, cfg.propagation()?, &cfg.moea, cfg.stage_seed("baseline"))?;
                fs::create_dir_all(&cfg.out)?;
                let front = curve.to_front(g.node_count());
                let rec = write_artifact(&cfg.out, "front_baseline.csv", &render_front(&g, &front)?)?;
                println!(
                    "{} seeds, {} gain evaluations, {} activation attempts",
                    curve.selected().len(),
                    curve.gain_evaluations,
                    curve.total_attempts
                );
                write_stage_manifest(&cfg, "baseline", curve.total_attempts, [("front_baseline".into(), rec)].into())
            })??;
        }
        Command::Evaluate(a) => {
            let reference = imscale::evaluate::RefPoint::with_seed_fraction(a.bound);
            let e = evaluate_fronts(
                &read_front_points(&a.front)?,
                &read_front_points(&a.reference_front)?,
                reference,
            )?;
            println!("{}", serde_json::to_string(&e)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::InvalidParameter(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
