//! End-to-end run writing every artifact to a temporary directory.

use imscale::generators::PlantedPowerLaw;
use imscale::graph::write_edge_list;
use imscale::pipeline::{run_pipeline, RunConfig};

fn main() -> imscale::Result<()> {
    let dir = std::env::temp_dir().join("imscale-example");
    std::fs::create_dir_all(&dir)?;
    let (g, _) = PlantedPowerLaw::new(vec![150, 200, 250], 2.5).generate(51)?;
    let input = dir.join("input.edges");
    write_edge_list(&g, std::fs::File::create(&input)?)?;

    let mut cfg = RunConfig::default();
    cfg.input = input;
    cfg.out = dir.join("out");
    cfg.scale = 2;
    cfg.seed = 52;
    for (key, value) in [("generations", "40"), ("population", "40"), ("sims", "30")] {
        cfg.set(key, value)?;
    }
    let out = run_pipeline(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&out.manifest.hypervolume)?);
    println!("artifacts in {}:", cfg.out.display());
    for (name, rec) in &out.manifest.files {
        println!("  {name}: {}", rec.path);
    }
    Ok(())
}
