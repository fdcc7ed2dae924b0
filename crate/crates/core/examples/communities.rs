//! Leiden communities of a planted network, then the size filter used before
//! downscaling by 4.

use imscale::community::{detect_communities_traced, filter_small_communities, modularity};
use imscale::generators::PlantedPowerLaw;

fn main() -> imscale::Result<()> {
    let (g, planted) = PlantedPowerLaw::new(vec![120, 150, 180, 250], 2.5).generate(1)?;
    let (found, trace) = detect_communities_traced(&g, 2)?;
    println!("planted modularity {:.4}", modularity(&g, planted.assignment()));
    println!("found {} communities, modularity {:.4}", found.len(), found.quality());
    println!("modularity per iteration: {trace:.4?}");

    let mut sizes = found.sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!("sizes {sizes:?}");

    let kept = filter_small_communities(&g, &found, 4)?;
    println!(
        "after dropping communities below 4 nodes: {} nodes in {} communities",
        kept.graph.node_count(),
        kept.partition.len()
    );
    Ok(())
}
