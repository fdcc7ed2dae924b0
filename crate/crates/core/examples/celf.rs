//! Lazy greedy seed selection and its influence curve.

use imscale::baseline::celf;
use imscale::cascade::PropagationModel;
use imscale::generators::PlantedPowerLaw;

fn main() -> imscale::Result<()> {
    let (g, _) = PlantedPowerLaw::new(vec![200, 300], 2.5).generate(41)?;
    let curve = celf(&g, PropagationModel::wc(), 10, 200, 42)?;
    for step in &curve.steps {
        println!("k={:>2} spread {:>7.2} last pick {}", step.k, step.influence, step.seeds[step.k - 1]);
    }
    println!(
        "{} spread estimates (naive greedy needs {}), {} attempts",
        curve.gain_evaluations,
        (0..10).map(|k| g.node_count() - k).sum::<usize>(),
        curve.total_attempts
    );
    Ok(())
}
