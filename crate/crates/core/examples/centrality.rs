//! Top nodes under each centrality and their ranks inside their community.

use imscale::centrality::{community_ranks, compute_centrality, CentralityKind};
use imscale::generators::PlantedPowerLaw;

fn main() -> imscale::Result<()> {
    let (g, p) = PlantedPowerLaw::new(vec![60, 80, 100], 2.5).generate(5)?;
    for kind in CentralityKind::ALL {
        let scores = compute_centrality(&g, kind);
        let ranks = community_ranks(&scores, &p);
        let mut order: Vec<usize> = g.nodes().collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let top: Vec<String> = order[..5]
            .iter()
            .map(|&v| format!("{v}(c{} r{})", p.community_of(v), ranks[v]))
            .collect();
        println!("{:<12} {}", kind.name(), top.join(" "));
    }
    Ok(())
}
