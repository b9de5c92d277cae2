//! Random nested packing sequences, their conversion to finite equivalence
//! relations and witnesses, and the random-rank partition.
//!
//! Level `j` of a sequence uses `eps_j = 2^-j` and the separation
//! `s_j = 2 s_(j-1) + 3 k_(j-1)`. One partition is sampled from a uniform
//! ball witness, shrunk by `s_j`, and joined onto the previous level. The
//! witness radius is the smallest one for which the exact split
//! probabilities certify that the shrunk multipacking is `eps_j`-tight.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::measure::Measure;
use crate::multipack::{max_support_distance, partition_from_images, sample_images, Lift};
use crate::packing::{is_s_separated, join, shrink, Packing};
use crate::rational::{at_least_one_minus_sqrt, exact, int, ratio_usize, Rational};
use crate::rng::sample_rng;
use crate::witness::{truncate_support, uniform_ball_witness, validate_witness, WitnessFamily, WitnessReport};

/// Seed of trial `t` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    sample_rng(seed, t).random::<u64>()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfwLevel {
    pub j: usize,
    pub eps: Rational,
    pub s: usize,
    /// Diameter bound of the level's partition tiles.
    pub k: usize,
    /// Largest tile diameter of the sampled `F_j`.
    pub d: usize,
    pub radius: usize,
    /// `max_x` of the summed split probabilities of edges near `x`, which
    /// bounds the fraction of packings missing `x` after shrinking.
    pub certificate: Rational,
    /// Lifted colors of the permutation construction; `m_j` is its factorial.
    pub lifted_colors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfwSchedule {
    pub levels: Vec<CfwLevel>,
}

impl CfwSchedule {
    /// `s_(j+1)`, defined for every level including the last.
    pub fn next_s(&self, j: usize) -> usize {
        match j {
            0 => 2 + 3,
            _ => {
                let l = &self.levels[j - 1];
                2 * l.s + 3 * l.k
            }
        }
    }

    fn prev(&self, j: usize) -> (usize, usize, usize) {
        // (s, k, D) of level j - 1, with level 0 = (1, 1, 0)
        match j {
            1 => (1, 1, 0),
            _ => {
                let l = &self.levels[j - 2];
                (l.s, l.k, l.d)
            }
        }
    }

    /// Every failed recursion or bound, as `(level, detail)`.
    pub fn violations(&self) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        for l in &self.levels {
            let j = l.j;
            let (s0, k0, d0) = self.prev(j);
            if l.eps != Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(j as u32)) {
                out.push((j, format!("eps_j = {} is not 2^-{j}", exact(&l.eps))));
            }
            if l.s != 2 * s0 + 3 * k0 {
                out.push((j, format!("s_j = {} but 2*{s0} + 3*{k0} = {}", l.s, 2 * s0 + 3 * k0)));
            }
            if l.d > 2 * d0 + l.k {
                out.push((j, format!("D_j = {} above 2*{d0} + {} = {}", l.d, l.k, 2 * d0 + l.k)));
            }
            if 3 * l.d > self.next_s(j) {
                out.push((j, format!("3 D_j = {} above s_(j+1) = {}", 3 * l.d, self.next_s(j))));
            }
            if l.certificate >= l.eps {
                out.push((j, format!("tightness certificate {} not below eps_j", exact(&l.certificate))));
            }
        }
        out
    }
}

impl fmt::Display for CfwSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "j,eps_j,s_j,k_j,D_j,radius,certificate,lifted_colors")?;
        for l in &self.levels {
            writeln!(
                f,
                "{},{},{},{},{},{},{},{}",
                l.j,
                exact(&l.eps),
                l.s,
                l.k,
                l.d,
                l.radius,
                exact(&l.certificate),
                l.lifted_colors
            )?;
        }
        Ok(())
    }
}

/// `F_1, F_2, ...` with, for every `j >= 2`, the index in `F_j` of the tile
/// containing each tile of `F_(j-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSequence {
    pub levels: Vec<Packing>,
    pub parents: Vec<Vec<usize>>,
}

impl PackingSequence {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Rechecks the refinement certificate by containment.
    pub fn verify_refinement(&self) -> bool {
        self.parents.len() + 1 == self.levels.len().max(1)
            && self.parents.iter().enumerate().all(|(i, map)| {
                let (lower, upper) = (&self.levels[i], &self.levels[i + 1]);
                map.len() == lower.len()
                    && lower
                        .tiles()
                        .iter()
                        .zip(map)
                        .all(|(t, &p)| p < upper.len() && t.is_subset(&upper.tiles()[p]))
            })
    }
}

fn refinement_map(n: usize, lower: &Packing, upper: &Packing) -> Option<Vec<usize>> {
    let index = upper.tile_index(n);
    lower
        .tiles()
        .iter()
        .map(|t| {
            let p = index[t.first()?]?;
            t.iter().all(|v| index[v] == Some(p)).then_some(p)
        })
        .collect()
}

/// One planned level: everything that does not depend on the seed.
#[derive(Clone, Debug)]
pub struct PlannedLevel {
    pub j: usize,
    pub eps: Rational,
    pub s: usize,
    pub k: usize,
    pub radius: usize,
    pub certificate: Rational,
    pub lifted_colors: usize,
    lift: Lift,
    bound: usize,
}

#[derive(Clone, Debug)]
pub struct CfwPlan {
    pub levels: Vec<PlannedLevel>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CfwOptions {
    /// Fixed witness radius per level instead of the certified search.
    pub radii: Option<Vec<usize>>,
}

/// `max_x sum` of `1 - Jaccard` over edges with an endpoint within `s - 1`
/// of `x`. A vertex of depth at most `s` in its tile has such an edge split.
pub fn tightness_certificate(g: &Graph, lift: &Lift, s: usize) -> Rational {
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let split: Vec<Rational> = edges
        .par_iter()
        .map(|&(x, y)| Rational::one() - lift.jaccard(x, y))
        .collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (e, &(x, y)) in edges.iter().enumerate() {
        incident[x].push(e);
        incident[y].push(e);
    }
    g.vertices()
        .into_par_iter()
        .map_init(
            || (g.bfs(), vec![false; edges.len()]),
            |(bfs, seen), x| {
                let mut total = Rational::zero();
                let mut touched = Vec::new();
                if s >= 1 {
                    for &u in bfs.run(g, [x], Some(s - 1), None) {
                        for &e in &incident[u] {
                            if !seen[e] {
                                seen[e] = true;
                                touched.push(e);
                                total += &split[e];
                            }
                        }
                    }
                }
                for e in touched {
                    seen[e] = false;
                }
                total
            },
        )
        .max()
        .unwrap_or_else(Rational::zero)
}

fn plan_level(g: &Graph, j: usize, s: usize, eps: Rational, radius: usize) -> Result<PlannedLevel> {
    let w = uniform_ball_witness(g, radius);
    let lift = Lift::new(&w)?;
    let certificate = tightness_certificate(g, &lift, s);
    let reach = max_support_distance(g, &w)?;
    let bound = 2 * reach;
    let k = bound.min(g.max_component_diameter()).max(1);
    let colors = g.distance_coloring(2 * reach + 1).num_colors;
    Ok(PlannedLevel {
        j,
        eps,
        s,
        k,
        radius,
        certificate,
        lifted_colors: colors * lift.grid,
        lift,
        bound,
    })
}

/// Fixes `eps_j`, `s_j`, the witness radius and `k_j` for `j = 1..=j_max`.
pub fn plan_cfw(g: &Graph, j_max: usize, options: &CfwOptions) -> Result<CfwPlan> {
    let mut levels: Vec<PlannedLevel> = Vec::new();
    let cap = g.max_component_diameter().max(1);
    let (mut s_prev, mut k_prev) = (1usize, 1usize);
    for j in 1..=j_max {
        let eps = Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(j as u32));
        let s = 2 * s_prev + 3 * k_prev;
        let level = match &options.radii {
            Some(radii) => {
                let r = *radii.get(j - 1).ok_or_else(|| Error::Schedule {
                    level: j,
                    detail: "no witness radius given".into(),
                })?;
                plan_level(g, j, s, eps, r)?
            }
            None => {
                let start = levels.last().map_or(1, |l| l.radius);
                let mut found = None;
                for r in start..=cap {
                    let level = plan_level(g, j, s, eps.clone(), r)?;
                    if level.certificate < eps {
                        found = Some(level);
                        break;
                    }
                }
                found.ok_or_else(|| Error::Schedule {
                    level: j,
                    detail: format!("no ball radius up to {cap} certifies tightness"),
                })?
            }
        };
        log::debug!("cfw level {j}: s={s} radius={} k={}", level.radius, level.k);
        s_prev = level.s;
        k_prev = level.k;
        levels.push(level);
    }
    Ok(CfwPlan { levels })
}

/// Samples one branch of the plan. Level `j` reads stream `j` of `seed`.
pub fn sample_cfw(g: &Graph, plan: &CfwPlan, seed: u64) -> Result<(PackingSequence, Vec<usize>)> {
    let n = g.vertex_count();
    let mut prev = Packing::empty(0);
    let mut prev_d = 0usize;
    let mut seq = PackingSequence {
        levels: Vec::new(),
        parents: Vec::new(),
    };
    let mut ds = Vec::new();
    for level in &plan.levels {
        let images = sample_images(&level.lift, n, seed, level.j as u64);
        let t = shrink(g, &partition_from_images(n, &images, level.bound), level.s);
        // hypotheses of the join bound
        if !is_s_separated(g, &prev, 1) || prev.max_tile_diameter(g).finite().is_none_or(|d| d > prev_d) {
            return Err(Error::Schedule {
                level: level.j,
                detail: "previous level is not 1-separated within D_(j-1)".into(),
            });
        }
        if !is_s_separated(g, &t, (3 * prev_d).max(1)) {
            return Err(Error::Schedule {
                level: level.j,
                detail: format!("shrunk partition is not {}-separated", 3 * prev_d),
            });
        }
        let f = join(g, &prev, &t);
        let d = f.max_tile_diameter(g).finite().ok_or_else(|| Error::Schedule {
            level: level.j,
            detail: "joined tile spans two components".into(),
        })?;
        if !seq.levels.is_empty() {
            let map = refinement_map(n, &prev, &f).ok_or_else(|| Error::Schedule {
                level: level.j,
                detail: "a tile of the previous level is split".into(),
            })?;
            seq.parents.push(map);
        }
        ds.push(d);
        prev_d = d;
        prev = f.clone();
        seq.levels.push(f);
    }
    Ok((seq, ds))
}

/// Plans, samples one sequence, and checks the schedule.
pub fn cfw_sequence(
    g: &Graph,
    j_max: usize,
    seed: u64,
    options: &CfwOptions,
) -> Result<(PackingSequence, CfwSchedule)> {
    let plan = plan_cfw(g, j_max, options)?;
    let (seq, ds) = sample_cfw(g, &plan, seed)?;
    let schedule = schedule_of(&plan, &ds);
    if let Some((level, detail)) = schedule.violations().into_iter().next() {
        return Err(Error::Schedule { level, detail });
    }
    if !seq.verify_refinement() {
        return Err(Error::Schedule {
            level: seq.len(),
            detail: "refinement certificate does not verify".into(),
        });
    }
    Ok((seq, schedule))
}

pub fn schedule_of(plan: &CfwPlan, ds: &[usize]) -> CfwSchedule {
    CfwSchedule {
        levels: plan
            .levels
            .iter()
            .zip(ds)
            .map(|(l, &d)| CfwLevel {
                j: l.j,
                eps: l.eps.clone(),
                s: l.s,
                k: l.k,
                d,
                radius: l.radius,
                certificate: l.certificate.clone(),
                lifted_colors: l.lifted_colors,
            })
            .collect(),
    }
}

/// `mu([F_j])` per level.
pub fn coverage_under_measure(seq: &PackingSequence, mu: &Measure) -> Vec<Rational> {
    seq.levels.iter().map(|f| mu.of_mask(&f.covered_mask(mu.len()))).collect()
}

/// Levels `j >= burn_in` where `mu([F_j]) < 1 - sqrt(eps_j)`.
pub fn coverage_failures(coverage: &[Rational], schedule: &CfwSchedule, burn_in: usize) -> Vec<usize> {
    schedule
        .levels
        .iter()
        .zip(coverage)
        .filter(|(l, c)| l.j >= burn_in && !at_least_one_minus_sqrt(c, &l.eps))
        .map(|(l, _)| l.j)
        .collect()
}

/// A Monte Carlo frequency with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub hits: usize,
    pub trials: usize,
}

impl Estimate {
    pub fn frequency(&self) -> Rational {
        if self.trials == 0 {
            Rational::zero()
        } else {
            ratio_usize(self.hits, self.trials)
        }
    }

    pub fn frequency_f64(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.hits as f64 / self.trials as f64
        }
    }

    /// `sqrt(p (1 - p) / trials)` at the reference probability `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Standard error at the observed frequency.
    pub fn sigma(&self) -> f64 {
        self.sigma_at(self.frequency_f64())
    }

    /// Whether the frequency is at most `bound + z sigma(bound)`.
    pub fn at_most(&self, bound: f64, z: f64) -> bool {
        self.frequency_f64() <= bound + z * self.sigma_at(bound.clamp(0.0, 1.0))
    }
}

/// Per-edge split frequencies (in `g.edges()` order) over `trials` samples;
/// trial `t` calls `sampler(trial_seed(seed, t))`. An uncovered endpoint
/// counts as a split.
pub fn split_frequencies<S>(g: &Graph, sampler: S, trials: usize, seed: u64) -> Result<Vec<Estimate>>
where
    S: Fn(u64) -> Result<Packing> + Sync,
{
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let p = sampler(trial_seed(seed, t as u64))?;
            let idx = p.tile_index(n);
            Ok::<_, Error>(edges
                .iter()
                .map(|&(x, y)| usize::from(idx[x].is_none() || idx[x] != idx[y]))
                .collect::<Vec<_>>())
        })
        .try_reduce(
            || vec![0; edges.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(s, v)| *s += v);
                Ok(a)
            },
        )?;
    Ok(counts.into_iter().map(|hits| Estimate { hits, trials }).collect())
}

/// Split frequency of one edge.
pub fn split_probability<S>(
    g: &Graph,
    sampler: S,
    edge: (Vertex, Vertex),
    trials: usize,
    seed: u64,
) -> Result<Estimate>
where
    S: Fn(u64) -> Result<Packing> + Sync,
{
    let (x, y) = edge;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if !g.is_adjacent(x, y) {
        return Err(Error::input(format!("{x} and {y} are not adjacent")));
    }
    let n = g.vertex_count();
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let p = sampler(trial_seed(seed, t as u64))?;
            let idx = p.tile_index(n);
            Ok::<_, Error>(usize::from(idx[x].is_none() || idx[x] != idx[y]))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(Estimate { hits, trials })
}

/// Per-level, per-edge split frequencies of the sampled sequence; one
/// sequence is drawn per trial with seed `trial_seed(seed, t)`.
pub fn level_split_frequencies(g: &Graph, plan: &CfwPlan, trials: usize, seed: u64) -> Result<Vec<Vec<Estimate>>> {
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let levels = plan.levels.len();
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (seq, _) = sample_cfw(g, plan, trial_seed(seed, t as u64))?;
            Ok::<_, Error>(
                seq.levels
                    .iter()
                    .map(|f| {
                        let idx = f.tile_index(n);
                        edges
                            .iter()
                            .map(|&(x, y)| usize::from(idx[x].is_none() || idx[x] != idx[y]))
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .try_reduce(
            || vec![vec![0; edges.len()]; levels],
            |mut a, b| {
                for (la, lb) in a.iter_mut().zip(b) {
                    la.iter_mut().zip(lb).for_each(|(s, v)| *s += v);
                }
                Ok(a)
            },
        )?;
    Ok(counts
        .into_iter()
        .map(|l| l.into_iter().map(|hits| Estimate { hits, trials }).collect())
        .collect())
}

/// Classes of a finite equivalence relation, each of bounded diameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteEquivalence {
    pub class_of: Vec<usize>,
    pub classes: Vec<VertexSet>,
    pub diameter_bound: usize,
}

impl FiniteEquivalence {
    pub fn class(&self, x: Vertex) -> &VertexSet {
        &self.classes[self.class_of[x]]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(VertexSet::len).collect()
    }
}

/// Tiles plus a singleton class for every uncovered vertex.
pub fn packings_to_equivalence(g: &Graph, f: &Packing) -> FiniteEquivalence {
    let n = g.vertex_count();
    let mut classes: Vec<VertexSet> = f.tiles().to_vec();
    let covered = f.covered_mask(n);
    classes.extend((0..n).filter(|&v| !covered[v]).map(VertexSet::singleton));
    classes.sort();
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        c.iter().for_each(|v| class_of[v] = i);
    }
    FiniteEquivalence {
        class_of,
        classes,
        diameter_bound: f.diameter_bound(),
    }
}

/// `p(x, y)` = average over trials of `1{y in E(x)} / |E(x)|`, for a sampler
/// of packings turned into equivalence relations. The target `n` is recorded
/// on the family.
pub fn witness_from_sequence<S>(
    g: &Graph,
    sampler: S,
    n_target: usize,
    trials: usize,
    seed: u64,
) -> Result<(WitnessFamily, WitnessReport)>
where
    S: Fn(u64) -> Result<Packing> + Sync,
{
    if trials == 0 {
        return Err(Error::input("witness estimate needs at least one trial"));
    }
    let n = g.vertex_count();
    type Tally = (Vec<HashMap<Vertex, Rational>>, usize);
    let empty = || -> Tally { (vec![HashMap::new(); n], 0) };
    let (sums, radius) = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Tally> {
            let f = sampler(trial_seed(seed, t as u64))?;
            let e = packings_to_equivalence(g, &f);
            let mut sums = vec![HashMap::new(); n];
            for class in &e.classes {
                let w = ratio_usize(1, class.len());
                for x in class.iter() {
                    for y in class.iter() {
                        sums[x].insert(y, w.clone());
                    }
                }
            }
            Ok((sums, e.diameter_bound))
        })
        .try_reduce(empty, |(mut a, ra), (b, rb)| {
            for (ax, bx) in a.iter_mut().zip(b) {
                for (y, w) in bx {
                    *ax.entry(y).or_insert_with(Rational::zero) += w;
                }
            }
            Ok((a, ra.max(rb)))
        })?;
    let scale = ratio_usize(1, trials);
    let dist = sums
        .into_iter()
        .map(|m| {
            let mut row: Vec<(Vertex, Rational)> = m.into_iter().map(|(y, w)| (y, w * &scale)).collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect();
    let w = WitnessFamily::new(n_target, dist, radius)?;
    let report = validate_witness(g, &w)?;
    Ok((w, report))
}

/// The truncated supports `supp'(p(x))` and the partition sampler over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankPartitioner {
    pub supports: Vec<Vec<Vertex>>,
    bound: usize,
}

impl RankPartitioner {
    pub fn new(g: &Graph, w: &WitnessFamily, epsilon: &Rational) -> Result<Self> {
        if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
            return Err(Error::input("epsilon must lie in (0, 1)"));
        }
        if int(w.target()) < int(3) / epsilon {
            log::warn!("witness target {} is below 3/eps", w.target());
        }
        let supports: Vec<Vec<Vertex>> = g
            .vertices()
            .into_par_iter()
            .map(|x| truncate_support(g, w, x, epsilon))
            .collect::<Result<_>>()?;
        let mut bfs = g.bfs();
        let mut reach = 0;
        for (x, s) in supports.iter().enumerate() {
            bfs.run(g, [x], None, None);
            for &y in s {
                reach = reach.max(bfs.dist(y).unwrap_or(0));
            }
        }
        Ok(RankPartitioner {
            supports,
            bound: 2 * reach,
        })
    }

    /// `x -> argmax rank over supp'(x)` with i.i.d. uniform ranks; a tie
    /// triggers a redraw.
    pub fn images(&self, seed: u64) -> Vec<Vertex> {
        let n = self.supports.len();
        let mut rng = sample_rng(seed, 0);
        let mut ranks = vec![0u64; n];
        'draw: loop {
            rng.fill(&mut ranks[..]);
            let mut image = Vec::with_capacity(n);
            for s in &self.supports {
                let mut best = s[0];
                let mut tie = false;
                for &y in &s[1..] {
                    if ranks[y] > ranks[best] {
                        best = y;
                        tie = false;
                    } else if ranks[y] == ranks[best] {
                        tie = true;
                    }
                }
                if tie {
                    continue 'draw;
                }
                image.push(best);
            }
            return image;
        }
    }

    pub fn sample(&self, seed: u64) -> Packing {
        partition_from_images(self.supports.len(), &self.images(seed), self.bound)
    }
}

/// One random-rank partition of `V`.
pub fn random_rank_partition(g: &Graph, w: &WitnessFamily, epsilon: &Rational, seed: u64) -> Result<Packing> {
    Ok(RankPartitioner::new(g, w, epsilon)?.sample(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::packing::validate_packing;
    use crate::rational::ratio;

    #[test]
    fn empty_schedule() {
        let g = generate::cycle(10);
        let (seq, sched) = cfw_sequence(&g, 0, 1, &CfwOptions::default()).unwrap();
        assert!(seq.is_empty());
        assert!(sched.levels.is_empty());
        assert_eq!(sched.next_s(0), 5);
    }

    #[test]
    fn small_cycle_is_one_tile_throughout() {
        let g = generate::cycle(8);
        let (seq, sched) = cfw_sequence(&g, 3, 5, &CfwOptions::default()).unwrap();
        for f in &seq.levels {
            assert_eq!(f.tiles(), &[g.all()]);
        }
        assert!(sched.violations().is_empty());
        assert!(seq.verify_refinement());
    }

    #[test]
    fn c200_schedule_recursions() {
        let g = generate::cycle(200);
        let (seq, sched) = cfw_sequence(&g, 3, 11, &CfwOptions::default()).unwrap();
        let mut s_prev = 1;
        let mut k_prev = 1;
        let mut d_prev = 0;
        for (l, f) in sched.levels.iter().zip(&seq.levels) {
            assert_eq!(l.s, 2 * s_prev + 3 * k_prev);
            assert!(l.d <= 2 * d_prev + l.k);
            assert!(3 * l.d <= 2 * l.s + 3 * l.k);
            assert!(validate_packing(&g, f));
            assert!(is_s_separated(&g, f, 1));
            (s_prev, k_prev, d_prev) = (l.s, l.k, l.d);
        }
        // every tile of a level sits inside one tile of the next
        for w in seq.levels.windows(2) {
            for t in w[0].tiles() {
                assert!(w[1].tiles().iter().any(|u| t.is_subset(u)));
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = generate::cycle(60);
        let plan = plan_cfw(&g, 2, &CfwOptions::default()).unwrap();
        let a = sample_cfw(&g, &plan, 3).unwrap();
        let b = sample_cfw(&g, &plan, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coverage_examples() {
        let g = generate::cycle(6);
        let seq = PackingSequence {
            levels: vec![Packing::new(vec![g.all()], 3), Packing::new(vec![VertexSet::range(0, 3)], 2)],
            parents: vec![],
        };
        let mu = Measure::uniform(6).unwrap();
        assert_eq!(coverage_under_measure(&seq, &mu), vec![Rational::one(), ratio(1, 2)]);
        let point = Measure::point(6, 5).unwrap();
        assert_eq!(coverage_under_measure(&seq, &point)[1], Rational::zero());
    }

    #[test]
    fn equivalence_examples() {
        let g = generate::cycle(4);
        let e = packings_to_equivalence(&g, &Packing::new(vec![VertexSet::range(0, 2)], 1));
        assert_eq!(
            e.classes,
            vec![VertexSet::range(0, 2), VertexSet::singleton(2), VertexSet::singleton(3)]
        );
        let e = packings_to_equivalence(&g, &Packing::empty(0));
        assert_eq!(e.sizes(), vec![1; 4]);
    }

    #[test]
    fn deterministic_samplers() {
        let g = generate::cycle(6);
        let whole = |_| Ok(Packing::new(vec![g.all()], 3));
        let singles = |_| Ok(Packing::new(g.vertices().map(VertexSet::singleton).collect(), 0));
        assert!(split_frequencies(&g, whole, 20, 1).unwrap().iter().all(|e| e.hits == 0));
        assert!(split_frequencies(&g, singles, 20, 1).unwrap().iter().all(|e| e.hits == 20));
        let (w, report) = witness_from_sequence(&g, singles, 1, 5, 0).unwrap();
        assert_eq!(w.dist(0), &[(0, Rational::one())]);
        assert_eq!(report.max_neighbor_l1, ratio(2, 1));
        let (w, _) = witness_from_sequence(&g, whole, 1, 5, 0).unwrap();
        assert_eq!(w.weight(0, 3), ratio(1, 6));
    }

    #[test]
    fn coin_flip_mixture_on_c6() {
        let g = generate::cycle(6);
        let arcs = Packing::new(vec![VertexSet::range(0, 3), VertexSet::range(3, 6)], 2);
        let shifted = Packing::new(vec![VertexSet::new([5, 0, 1]), VertexSet::range(2, 5)], 2);
        let sampler = |s: u64| Ok(if s % 2 == 0 { arcs.clone() } else { shifted.clone() });
        let trials = 4000;
        let (w, _) = witness_from_sequence(&g, sampler, 1, trials, 9).unwrap();
        let heads = (0..trials).filter(|&t| trial_seed(9, t as u64) % 2 == 0).count();
        // exact mixture for the realized coin flips
        let h = ratio_usize(heads, trials);
        assert_eq!(w.weight(0, 0), ratio(1, 3));
        assert_eq!(w.weight(0, 2), &h / int(3));
        assert_eq!(w.weight(0, 5), (Rational::one() - &h) / int(3));
        assert!((crate::rational::to_f64(&h) - 0.5).abs() < 0.05);
    }

    #[test]
    fn rank_partition_examples() {
        let g = generate::cycle(10);
        let p = random_rank_partition(&g, &crate::witness::point_mass_witness(&g), &ratio(1, 3), 4).unwrap();
        assert_eq!(p.len(), 10);
        let one = Graph::edgeless(1);
        let p = random_rank_partition(&one, &uniform_ball_witness(&one, 0), &ratio(1, 3), 4).unwrap();
        assert_eq!(p.tiles(), &[VertexSet::singleton(0)]);
        let g = generate::cycle(100);
        let rp = RankPartitioner::new(&g, &uniform_ball_witness(&g, 25), &ratio(1, 3)).unwrap();
        let a = rp.sample(17);
        assert!(validate_packing(&g, &a));
        assert_eq!(a.covered_count(), 100);
        assert_eq!(a, rp.sample(17));
        for (x, s) in rp.supports.iter().enumerate() {
            assert!(s.contains(&rp.images(17)[x]));
        }
    }
}
