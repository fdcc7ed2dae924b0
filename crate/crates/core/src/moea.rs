//! NSGA-II over seed sets.
//!
//! Genomes are duplicate-free node lists of length `1..=k_max`. Fitness is
//! `(mean cascade size / n, |genes| / n)`. The population is seeded by
//! influence-filtered degree-weighted sampling, offspring come from one-point
//! crossover and a length-changing mutation, and survivors are picked by
//! non-dominated rank then crowding distance. An external archive keeps every
//! non-dominated point ever evaluated.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::{estimate_influence, PropagationModel};
use crate::error::{Error, Result};
use crate::evaluate::{hypervolume_clipped, RefPoint};
pub use crate::front::{dominates, Fitness, Front, FrontEntry};
use crate::graph::{Graph, NodeId};
use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoeaParams {
    pub population_size: usize,
    pub generations: usize,
    pub elites: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub k_max_fraction: f64,
    pub n_sims: usize,
    pub ic_p: f64,
}

impl Default for MoeaParams {
    fn default() -> Self {
        MoeaParams {
            population_size: 100,
            generations: 1000,
            elites: 2,
            crossover_rate: 1.0,
            mutation_rate: 0.1,
            tournament_size: 5,
            k_max_fraction: 0.025,
            n_sims: 100,
            ic_p: 0.05,
        }
    }
}

impl MoeaParams {
    pub fn k_max(&self, n: usize) -> usize {
        ((self.k_max_fraction * n as f64).round() as usize).max(1)
    }

    /// Simulations per node when ranking single-node influence.
    pub fn init_sims(&self) -> usize {
        (self.n_sims / 10).max(10)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.population_size == 0 {
            return bad("population size must be positive");
        }
        if self.tournament_size == 0 {
            return bad("tournament size must be positive");
        }
        if self.n_sims == 0 {
            return bad("simulation count must be positive");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("crossover and mutation rates must lie in [0, 1]");
        }
        if !(self.k_max_fraction > 0.0 && self.k_max_fraction <= 1.0) {
            return bad("k_max fraction must lie in (0, 1]");
        }
        if !(self.ic_p > 0.0 && self.ic_p <= 1.0) {
            return bad("IC probability must lie in (0, 1]");
        }
        Ok(())
    }

    pub fn reference_point(&self) -> RefPoint {
        RefPoint::with_seed_fraction(self.k_max_fraction)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Vec<NodeId>,
    pub fitness: Option<Fitness>,
}

impl Individual {
    pub fn new(genes: Vec<NodeId>) -> Self {
        Individual {
            genes,
            fitness: None,
        }
    }

    pub fn is_valid(&self, k_max: usize) -> bool {
        let mut sorted = self.genes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == self.genes.len() && (1..=k_max).contains(&self.genes.len())
    }
}

/// Fitness of `genes` and the activation attempts spent estimating it.
pub fn evaluate_individual(
    g: &Graph,
    genes: &[NodeId],
    model: PropagationModel,
    n_sims: usize,
    rng_seed: u64,
) -> Result<(Fitness, u64)> {
    let est = estimate_influence(g, genes, model, n_sims, rng_seed)?;
    let n = g.node_count() as f64;
    Ok((
        Fitness::new(est.mean / n, genes.len() as f64 / n),
        est.total_attempts,
    ))
}

/// Evaluation seed of a genome: depends on the gene set only, so identical
/// genomes score identically within a run.
fn genome_seed(run_seed: u64, genes: &[NodeId]) -> u64 {
    let mut key: Vec<u64> = Vec::with_capacity(genes.len() + 1);
    key.push(3);
    let mut sorted: Vec<u64> = genes.iter().map(|&g| g as u64).collect();
    sorted.sort_unstable();
    key.extend(sorted);
    rng::derive(run_seed, &key)
}

/// Initial population and the attempts spent on node filtering.
pub struct Initialisation {
    pub population: Vec<Individual>,
    pub pool: Vec<NodeId>,
    pub attempts: u64,
}

/// Keeps the more influential half of the nodes (single-node estimates) and
/// fills each individual by degree-weighted sampling without replacement.
pub fn smart_initialize(
    g: &Graph,
    model: PropagationModel,
    params: &MoeaParams,
    rng_seed: u64,
) -> Result<Initialisation> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    let sims = params.init_sims();
    let scores: Vec<(f64, u64)> = g
        .nodes()
        .into_par_iter()
        .map(|v| {
            let est = estimate_influence(g, &[v], model, sims, rng::derive(rng_seed, &[1, v as u64]))?;
            Ok((est.mean, est.total_attempts))
        })
        .collect::<Result<_>>()?;
    let attempts = scores.iter().map(|&(_, a)| a).sum();

    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by(|&a, &b| scores[b].0.total_cmp(&scores[a].0).then(a.cmp(&b)));
    order.truncate(n.div_ceil(2));
    let pool = order;

    let mut rng = rng::stream(rng_seed, &[0]);
    let max_len = params.k_max(n).min(pool.len());
    let population = (0..params.population_size)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            Individual::new(weighted_sample(g, &pool, len, &mut rng))
        })
        .collect();
    Ok(Initialisation {
        population,
        pool,
        attempts,
    })
}

/// `len` distinct nodes of `pool`, each draw proportional to degree (uniform
/// once only zero-degree nodes remain).
fn weighted_sample(g: &Graph, pool: &[NodeId], len: usize, rng: &mut StreamRng) -> Vec<NodeId> {
    let mut remaining: Vec<NodeId> = pool.to_vec();
    let mut weights: Vec<f64> = remaining.iter().map(|&v| g.degree(v) as f64).collect();
    let mut total: f64 = weights.iter().sum();
    let mut out = Vec::with_capacity(len);
    while out.len() < len && !remaining.is_empty() {
        let i = if total > 0.0 {
            let mut x = rng.random::<f64>() * total;
            let mut pick = weights.len() - 1;
            for (j, &w) in weights.iter().enumerate() {
                if x < w {
                    pick = j;
                    break;
                }
                x -= w;
            }
            // float slack can land on a zero weight at the end
            while weights[pick] == 0.0 && pick > 0 {
                pick -= 1;
            }
            pick
        } else {
            rng.random_range(0..remaining.len())
        };
        out.push(remaining.swap_remove(i));
        total -= weights.swap_remove(i);
        if total < 1e-9 {
            total = weights.iter().sum();
        }
    }
    out
}

fn dedup_keep_first(genes: &mut Vec<NodeId>) {
    let mut seen = std::collections::HashSet::with_capacity(genes.len());
    genes.retain(|g| seen.insert(*g));
}

/// Splices `a[..i] + b[j..]` and `b[..j] + a[i..]` for independently drawn
/// cuts `i`, `j`; children are deduplicated, truncated to `k_max` and never
/// left empty.
pub fn crossover_one_point(
    a: &Individual,
    b: &Individual,
    k_max: usize,
    rng: &mut StreamRng,
) -> (Individual, Individual) {
    let i = rng.random_range(0..=a.genes.len());
    let j = rng.random_range(0..=b.genes.len());
    crossover_at(a, b, i, j, k_max, rng)
}

pub fn crossover_at(
    a: &Individual,
    b: &Individual,
    cut_a: usize,
    cut_b: usize,
    k_max: usize,
    rng: &mut StreamRng,
) -> (Individual, Individual) {
    let mut child = |head: &[NodeId], tail: &[NodeId]| {
        let mut genes: Vec<NodeId> = head.iter().chain(tail).copied().collect();
        dedup_keep_first(&mut genes);
        genes.truncate(k_max);
        if genes.is_empty() {
            let donor = if rng.random::<bool>() { &a.genes } else { &b.genes };
            let donor = if donor.is_empty() { &a.genes } else { donor };
            genes.push(donor[rng.random_range(0..donor.len())]);
        }
        Individual::new(genes)
    };
    let first = child(&a.genes[..cut_a], &b.genes[cut_b..]);
    let second = child(&b.genes[..cut_b], &a.genes[cut_a..]);
    (first, second)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    Replace,
    Insert,
    Remove,
}

/// Moves applicable to a genome of length `len` on `n` nodes.
pub fn applicable_mutations(len: usize, n: usize, k_max: usize) -> Vec<Mutation> {
    let mut moves = Vec::with_capacity(3);
    if n > len {
        moves.push(Mutation::Replace);
        if len < k_max {
            moves.push(Mutation::Insert);
        }
    }
    if len > 1 {
        moves.push(Mutation::Remove);
    }
    moves
}

pub fn mutate(ind: &Individual, g: &Graph, params: &MoeaParams, rng: &mut StreamRng) -> Individual {
    let n = g.node_count();
    let k_max = params.k_max(n);
    if rng.random::<f64>() >= params.mutation_rate {
        return ind.clone();
    }
    let moves = applicable_mutations(ind.genes.len(), n, k_max);
    if moves.is_empty() {
        return ind.clone();
    }
    let mut genes = ind.genes.clone();
    let outsider = |genes: &[NodeId], rng: &mut StreamRng| loop {
        let v = rng.random_range(0..n);
        if !genes.contains(&v) {
            break v;
        }
    };
    match moves[rng.random_range(0..moves.len())] {
        Mutation::Replace => {
            let at = rng.random_range(0..genes.len());
            genes[at] = outsider(&genes, rng);
        }
        Mutation::Insert => {
            let v = outsider(&genes, rng);
            genes.push(v);
        }
        Mutation::Remove => {
            let at = rng.random_range(0..genes.len());
            genes.remove(at);
        }
    }
    Individual::new(genes)
}

/// Deb's fast non-dominated sort; `fronts[0]` is the non-dominated set.
pub fn fast_non_dominated_sort(points: &[Fitness]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    let mut fronts = vec![Vec::new()];
    for p in 0..n {
        for q in 0..n {
            if dominates(points[p], points[q]) {
                dominated_by[p].push(q);
            } else if dominates(points[q], points[p]) {
                counts[p] += 1;
            }
        }
        if counts[p] == 0 {
            fronts[0].push(p);
        }
    }
    let mut i = 0;
    while !fronts[i].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[i] {
            for &q in &dominated_by[p] {
                counts[q] -= 1;
                if counts[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        i += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of each member of `front`, aligned with it.
pub fn crowding_distance(points: &[Fitness], front: &[usize]) -> Vec<f64> {
    let len = front.len();
    let mut distance = vec![0.0; len];
    if len <= 2 {
        distance.iter_mut().for_each(|d| *d = f64::INFINITY);
        return distance;
    }
    let objectives: [fn(&Fitness) -> f64; 2] = [|f| f.influence, |f| f.seed_fraction];
    for objective in objectives {
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| {
            objective(&points[front[a]])
                .total_cmp(&objective(&points[front[b]]))
                .then(a.cmp(&b))
        });
        let lo = objective(&points[front[order[0]]]);
        let hi = objective(&points[front[order[len - 1]]]);
        distance[order[0]] = f64::INFINITY;
        distance[order[len - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..len - 1 {
                let prev = objective(&points[front[order[w - 1]]]);
                let next = objective(&points[front[order[w + 1]]]);
                distance[order[w]] += (next - prev) / (hi - lo);
            }
        }
    }
    distance
}

/// Non-dominated rank and crowding distance for every point.
fn rank_and_crowd(points: &[Fitness]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; points.len()];
    let mut crowd = vec![0.0; points.len()];
    for (r, front) in fast_non_dominated_sort(points).iter().enumerate() {
        for (&i, d) in front.iter().zip(crowding_distance(points, front)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

fn tournament(rank: &[usize], crowd: &[f64], size: usize, rng: &mut StreamRng) -> usize {
    let mut best = rng.random_range(0..rank.len());
    for _ in 1..size {
        let c = rng.random_range(0..rank.len());
        if rank[c] < rank[best] || (rank[c] == rank[best] && crowd[c] > crowd[best]) {
            best = c;
        }
    }
    best
}

/// Indices of the per-objective best points (highest influence, then lowest
/// seed fraction), at most `count` of them.
fn elite_indices(points: &[Fitness], count: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if count == 0 || points.is_empty() {
        return out;
    }
    let best_influence = (0..points.len())
        .min_by(|&a, &b| {
            points[b]
                .influence
                .total_cmp(&points[a].influence)
                .then(points[a].seed_fraction.total_cmp(&points[b].seed_fraction))
                .then(a.cmp(&b))
        })
        .unwrap();
    out.push(best_influence);
    if count >= 2 {
        let best_size = (0..points.len())
            .min_by(|&a, &b| {
                points[a]
                    .seed_fraction
                    .total_cmp(&points[b].seed_fraction)
                    .then(points[b].influence.total_cmp(&points[a].influence))
                    .then(a.cmp(&b))
            })
            .unwrap();
        if best_size != best_influence {
            out.push(best_size);
        }
    }
    out
}

/// `(mu + lambda)` survivor selection with forced elites.
fn environmental_selection(points: &[Fitness], keep: usize, elites: usize) -> Vec<usize> {
    let mut chosen = elite_indices(points, elites);
    chosen.truncate(keep);
    let mut taken = vec![false; points.len()];
    for &i in &chosen {
        taken[i] = true;
    }
    for front in fast_non_dominated_sort(points) {
        let remaining: Vec<usize> = front.into_iter().filter(|&i| !taken[i]).collect();
        let room = keep - chosen.len();
        if room == 0 {
            break;
        }
        if remaining.len() <= room {
            chosen.extend(remaining);
        } else {
            let crowd = crowding_distance(points, &remaining);
            let mut order: Vec<usize> = (0..remaining.len()).collect();
            order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(remaining[a].cmp(&remaining[b])));
            chosen.extend(order.into_iter().take(room).map(|k| remaining[k]));
            break;
        }
    }
    chosen
}

#[derive(Debug, Clone)]
pub struct MoeaRun {
    pub front: Front,
    pub total_attempts: u64,
    pub init_attempts: u64,
    pub evaluations: usize,
    /// Archive hypervolume after initialisation and after every generation.
    pub hv_trace: Vec<f64>,
}

/// Runs NSGA-II and returns the archive.
pub fn nsga2_run(g: &Graph, model: PropagationModel, params: &MoeaParams, rng_seed: u64) -> Result<MoeaRun> {
    nsga2_run_observed(g, model, params, rng_seed, |_, _, _| {})
}

/// [`nsga2_run`] with a callback receiving `(generation, population, archive)`
/// after initialisation (generation 0) and after every generation.
pub fn nsga2_run_observed<F>(
    g: &Graph,
    model: PropagationModel,
    params: &MoeaParams,
    rng_seed: u64,
    mut observe: F,
) -> Result<MoeaRun>
where
    F: FnMut(usize, &[Individual], &Front),
{
    params.validate()?;
    let n = g.node_count();
    let k_max = params.k_max(n);
    let reference = params.reference_point();

    let init = smart_initialize(g, model, params, rng::derive(rng_seed, &[0]))?;
    let mut total_attempts = init.attempts;
    let mut evaluations = 0usize;
    let mut archive = Front::new();

    let evaluate_all = |pop: &mut [Individual]| -> Result<u64> {
        let results: Vec<(Fitness, u64)> = pop
            .par_iter()
            .map(|ind| evaluate_individual(g, &ind.genes, model, params.n_sims, genome_seed(rng_seed, &ind.genes)))
            .collect::<Result<_>>()?;
        let mut attempts = 0;
        for (ind, (f, a)) in pop.iter_mut().zip(results) {
            ind.fitness = Some(f);
            attempts += a;
        }
        Ok(attempts)
    };
    let archive_all = |archive: &mut Front, pop: &[Individual]| {
        for ind in pop {
            archive.insert(FrontEntry {
                fitness: ind.fitness.expect("evaluated"),
                seeds: ind.genes.clone(),
            });
        }
    };

    let mut population = init.population;
    total_attempts += evaluate_all(&mut population)?;
    evaluations += population.len();
    archive_all(&mut archive, &population);
    let mut hv_trace = vec![hypervolume_clipped(&archive.points(), reference)];
    observe(0, &population, &archive);

    for generation in 1..=params.generations {
        let mut rng = rng::stream(rng_seed, &[2, generation as u64]);
        let points: Vec<Fitness> = population.iter().map(|i| i.fitness.unwrap()).collect();
        let (rank, crowd) = rank_and_crowd(&points);

        let mut offspring = Vec::with_capacity(params.population_size + 1);
        while offspring.len() < params.population_size {
            let a = &population[tournament(&rank, &crowd, params.tournament_size, &mut rng)];
            let b = &population[tournament(&rank, &crowd, params.tournament_size, &mut rng)];
            let (c1, c2) = if rng.random::<f64>() < params.crossover_rate {
                crossover_one_point(a, b, k_max, &mut rng)
            } else {
                (Individual::new(a.genes.clone()), Individual::new(b.genes.clone()))
            };
            offspring.push(mutate(&c1, g, params, &mut rng));
            offspring.push(mutate(&c2, g, params, &mut rng));
        }
        offspring.truncate(params.population_size);
        total_attempts += evaluate_all(&mut offspring)?;
        evaluations += offspring.len();
        archive_all(&mut archive, &offspring);

        let mut combined = population;
        combined.extend(offspring);
        let points: Vec<Fitness> = combined.iter().map(|i| i.fitness.unwrap()).collect();
        let survivors = environmental_selection(&points, params.population_size, params.elites);
        let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
        population = survivors
            .into_iter()
            .map(|i| slots[i].take().expect("selected once"))
            .collect();

        hv_trace.push(hypervolume_clipped(&archive.points(), reference));
        observe(generation, &population, &archive);
    }

    Ok(MoeaRun {
        front: archive,
        total_attempts,
        init_attempts: init.attempts,
        evaluations,
        hv_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> StreamRng {
        StreamRng::seed_from_u64(seed)
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn table_defaults() {
        let p = MoeaParams::default();
        assert_eq!((p.population_size, p.generations, p.elites, p.tournament_size), (100, 1000, 2, 5));
        assert_eq!((p.crossover_rate, p.mutation_rate, p.n_sims, p.ic_p), (1.0, 0.1, 100, 0.05));
        assert_eq!(p.k_max(1000), 25);
        assert_eq!(p.k_max(10), 1);
    }

    #[test]
    fn evaluation_cases() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let (f, _) = evaluate_individual(&g, &[2], PropagationModel::ic(1.0).unwrap(), 10, 0).unwrap();
        assert_eq!(f, Fitness::new(1.0, 0.25));
        let (f, _) = evaluate_individual(&g, &[0, 3], PropagationModel::ic(0.0).unwrap(), 10, 0).unwrap();
        assert_eq!(f, Fitness::new(0.5, 0.5));
        let iso = Graph::from_edges(5, [(0, 1)]).unwrap();
        let (f, _) = evaluate_individual(&iso, &[4], PropagationModel::wc(), 10, 0).unwrap();
        assert_eq!(f, Fitness::new(0.2, 0.2));
    }

    #[test]
    fn smart_init_keeps_star_hub() {
        let g = star(40);
        let params = MoeaParams { population_size: 100, ..MoeaParams::default() };
        let init = smart_initialize(&g, PropagationModel::ic(0.05).unwrap(), &params, 3).unwrap();
        assert!(init.pool.contains(&0));
        assert_eq!(init.pool.len(), 21);
        assert_eq!(init.population.len(), 100);
        for ind in &init.population {
            assert!(ind.is_valid(params.k_max(41)));
            assert!(ind.genes.iter().all(|v| init.pool.contains(v)));
        }
    }

    #[test]
    fn smart_init_singletons_when_k_max_is_one() {
        let g = star(10);
        let init = smart_initialize(&g, PropagationModel::wc(), &MoeaParams::default(), 0).unwrap();
        assert!(init.population.iter().all(|i| i.genes.len() == 1));
    }

    #[test]
    fn crossover_mechanical_swap() {
        let a = Individual::new(vec![1, 2]);
        let b = Individual::new(vec![3, 4]);
        let (c1, c2) = crossover_at(&a, &b, 1, 1, 10, &mut rng(0));
        assert_eq!(c1.genes, vec![1, 4]);
        assert_eq!(c2.genes, vec![3, 2]);
    }

    #[test]
    fn crossover_removes_duplicates() {
        let a = Individual::new(vec![1, 2]);
        let b = Individual::new(vec![2, 3]);
        let mut r = rng(5);
        for _ in 0..200 {
            let (c1, c2) = crossover_one_point(&a, &b, 10, &mut r);
            for c in [c1, c2] {
                assert!(c.is_valid(3), "{c:?}");
                assert!(c.genes.iter().all(|g| [1, 2, 3].contains(g)));
            }
        }
        let same = Individual::new(vec![7, 8, 9]);
        for _ in 0..100 {
            let (c1, _) = crossover_one_point(&same, &same, 3, &mut r);
            assert!(c1.is_valid(3));
            assert!(c1.genes.iter().all(|g| same.genes.contains(g)));
        }
    }

    #[test]
    fn crossover_repairs_empty_child() {
        let a = Individual::new(vec![1]);
        let b = Individual::new(vec![2]);
        let (c1, c2) = crossover_at(&a, &b, 0, 1, 5, &mut rng(1));
        assert_eq!(c1.genes.len(), 1);
        assert_eq!(c2.genes, vec![2, 1]);
    }

    #[test]
    fn mutation_applicability() {
        assert!(!applicable_mutations(1, 100, 5).contains(&Mutation::Remove));
        assert!(!applicable_mutations(5, 100, 5).contains(&Mutation::Insert));
        assert_eq!(applicable_mutations(3, 3, 5), vec![Mutation::Remove]);
        let g = star(200);
        let params = MoeaParams { mutation_rate: 0.0, ..MoeaParams::default() };
        let ind = Individual::new(vec![1, 2]);
        assert_eq!(mutate(&ind, &g, &params, &mut rng(0)), ind);
    }

    #[test]
    fn mutation_keeps_validity() {
        let g = star(200);
        let params = MoeaParams { mutation_rate: 1.0, ..MoeaParams::default() };
        let k_max = params.k_max(201);
        let mut r = rng(2);
        let mut ind = Individual::new(vec![3]);
        let mut lengths = std::collections::BTreeSet::new();
        for _ in 0..500 {
            ind = mutate(&ind, &g, &params, &mut r);
            assert!(ind.is_valid(k_max));
            lengths.insert(ind.genes.len());
        }
        assert!(lengths.len() > 1);
    }

    #[test]
    fn crowding_boundaries_are_infinite() {
        let pts: Vec<Fitness> = [(0.1, 0.01), (0.2, 0.015), (0.3, 0.02), (0.35, 0.024)]
            .iter()
            .map(|&(x, y)| Fitness::new(x, y))
            .collect();
        let d = crowding_distance(&pts, &[0, 1, 2, 3]);
        assert!(d[0].is_infinite() && d[3].is_infinite());
        assert!(d[1].is_finite() && d[2].is_finite());
    }

    #[test]
    fn path_run_finds_full_cover_with_one_seed() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let params = MoeaParams { population_size: 10, generations: 1, n_sims: 5, ..MoeaParams::default() };
        let run = nsga2_run(&g, PropagationModel::ic(1.0).unwrap(), &params, 0).unwrap();
        assert_eq!(run.front.points(), vec![Fitness::new(1.0, 1.0 / 3.0)]);
    }

    #[test]
    fn run_is_deterministic() {
        let edges: Vec<(usize, usize)> = (0..80).flat_map(|i| [(i, (i + 1) % 80), (i, (i * 13 + 5) % 80)]).collect();
        let g = Graph::from_edges(80, edges).unwrap();
        let params = MoeaParams { population_size: 12, generations: 5, n_sims: 10, k_max_fraction: 0.1, ..MoeaParams::default() };
        let model = PropagationModel::ic(0.2).unwrap();
        let a = nsga2_run(&g, model, &params, 9).unwrap();
        let b = nsga2_run(&g, model, &params, 9).unwrap();
        assert_eq!(a.front, b.front);
        assert_eq!(a.total_attempts, b.total_attempts);
        assert_eq!(a.hv_trace.len(), 6);
    }
}
