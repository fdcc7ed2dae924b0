//! Shrinks a network by 2 and 4 and compares degree distributions.

use imscale::community::{detect_communities, filter_small_communities};
use imscale::downscale::downscale;
use imscale::evaluate::{fit_power_law, ks_statistic};
use imscale::generators::PlantedPowerLaw;

fn main() -> imscale::Result<()> {
    let mut cfg = PlantedPowerLaw::new(vec![300, 400, 500], 2.2);
    cfg.d_min = 1;
    let (g, _) = cfg.generate_matched(3)?;
    let p = detect_communities(&g, 4)?;
    let base = fit_power_law(&g.degree_sequence())?;
    println!("original: {} nodes, {} edges, alpha {:.3}", g.node_count(), g.edge_count(), base.alpha);

    for s in [2, 4] {
        let f = filter_small_communities(&g, &p, s)?;
        let scaled = downscale(&f.graph, &f.partition, s, 5)?;
        let fit = fit_power_law(&scaled.graph.degree_sequence())?;
        let short: usize = scaled.shortfalls().map(|b| b.requested - b.placed).sum();
        println!(
            "s={s}: {} nodes, {} of {} requested edges ({short} not placed), alpha {:.3}, degree KS vs input {:.3}",
            scaled.graph.node_count(),
            scaled.graph.edge_count(),
            scaled.requested_edges(),
            fit.alpha,
            ks_statistic(&f.graph.degree_sequence(), &scaled.graph.degree_sequence())
        );
    }
    Ok(())
}
