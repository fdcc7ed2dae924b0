//! Influence against seed-set size with NSGA-II on a small network.

use imscale::cascade::PropagationModel;
use imscale::generators::PlantedPowerLaw;
use imscale::moea::{nsga2_run, MoeaParams};

fn main() -> imscale::Result<()> {
    let (g, _) = PlantedPowerLaw::new(vec![150, 150, 200], 2.5).generate(21)?;
    let params = MoeaParams {
        population_size: 50,
        generations: 60,
        n_sims: 30,
        ..MoeaParams::default()
    };
    let run = nsga2_run(&g, PropagationModel::ic(params.ic_p)?, &params, 22)?;
    println!("{} evaluations, {} activation attempts", run.evaluations, run.total_attempts);
    for (gen, hv) in run.hv_trace.iter().enumerate().step_by(10) {
        println!("generation {gen:>3}: archive hypervolume {hv:.6}");
    }
    println!("front:");
    for e in run.front.entries() {
        println!(
            "  {} seeds ({:.4} of nodes) -> {:.3} of nodes reached",
            e.seeds.len(),
            e.fitness.seed_fraction,
            e.fitness.influence
        );
    }
    Ok(())
}
