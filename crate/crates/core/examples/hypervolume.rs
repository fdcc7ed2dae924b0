//! Dominated area of small hand-made fronts.

use imscale::evaluate::{hyperarea, hypervolume_2d, pareto_filter, RefPoint};
use imscale::front::Fitness;

fn main() -> imscale::Result<()> {
    let reference = RefPoint::default();
    let a = [Fitness::new(0.2, 0.005), Fitness::new(0.35, 0.015), Fitness::new(0.4, 0.025)];
    let b = [Fitness::new(0.1, 0.005), Fitness::new(0.3, 0.02), Fitness::new(0.25, 0.02)];
    let hv_a = hypervolume_2d(&a, reference)?;
    let hv_b = hypervolume_2d(&pareto_filter(&b), reference)?;
    println!("reference ({}, {})", reference.influence, reference.seed_fraction);
    println!("front a: HV {hv_a:.6}");
    println!("front b: {} of {} points non-dominated, HV {hv_b:.6}", pareto_filter(&b).len(), b.len());
    println!("hyperarea b/a {:.3}", hyperarea(hv_b, hv_a)?);
    Ok(())
}
