//! Spread estimates under both diffusion models, with activation attempts as
//! the cost measure, and the same estimate on fixed live-edge worlds.

use imscale::cascade::{estimate_influence, simulate, LiveEdgeWorlds, PropagationModel};
use imscale::generators::PlantedPowerLaw;

fn main() -> imscale::Result<()> {
    let (g, _) = PlantedPowerLaw::new(vec![250, 250], 2.5).generate(11)?;
    let mut hubs: Vec<usize> = g.nodes().collect();
    hubs.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let seeds = &hubs[..5];

    let one = simulate(&g, seeds, PropagationModel::ic(0.1)?, 0)?;
    println!("single IC cascade: {} nodes, {} attempts", one.cascade_size, one.activation_attempts);

    for model in [PropagationModel::ic(0.05)?, PropagationModel::ic(0.2)?, PropagationModel::wc()] {
        let est = estimate_influence(&g, seeds, model, 1000, 12)?;
        println!(
            "{model}: spread {:.2} +- {:.2}, {} attempts over 1000 runs",
            est.mean, est.std_error, est.total_attempts
        );
    }

    let worlds = LiveEdgeWorlds::sample(&g, PropagationModel::wc(), 500, 13);
    println!("wc over {} live-edge worlds: {:.2}", worlds.worlds(), worlds.spread(&g, seeds)?);
    Ok(())
}
