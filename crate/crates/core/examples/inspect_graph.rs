//! Loads an edge list (or builds a synthetic network) and prints its basic shape.
//!
//! cargo run --example inspect_graph -- [edges.txt]

use imscale::evaluate::fit_power_law;
use imscale::generators::PlantedPowerLaw;
use imscale::graph::load_edge_list_file;

fn main() -> imscale::Result<()> {
    let g = match std::env::args().nth(1) {
        Some(path) => load_edge_list_file(path)?,
        None => PlantedPowerLaw::new(vec![200, 300, 500], 2.3).generate(7)?.0,
    };
    let degrees = g.degree_sequence();
    let max = degrees.iter().max().copied().unwrap_or(0);
    let components = g.connected_components();
    println!("nodes {}, edges {}", g.node_count(), g.edge_count());
    println!(
        "mean degree {:.2}, max degree {max}",
        2.0 * g.edge_count() as f64 / g.node_count().max(1) as f64
    );
    println!(
        "{} components, largest {}",
        components.len(),
        components.iter().map(Vec::len).max().unwrap_or(0)
    );
    let fit = fit_power_law(&degrees)?;
    println!("power-law tail: alpha {:.3} from d_min {} ({} nodes, KS {:.3})", fit.alpha, fit.d_min, fit.tail, fit.ks);
    Ok(())
}
