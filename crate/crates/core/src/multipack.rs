//! Tight multipackings: partitions sampled from a witness through the lifted
//! point set `X+ = V x {1..M}`, defect measurement, and the way back from a
//! multipacking to a witness.
//!
//! Sample `i` draws one independent uniform rank per lifted point; vertex `x`
//! goes to the top-ranked lifted point of `Q(x) = {(u, j) : j <= M p(x, u)}`
//! and tiles are the preimages. This is the color-permutation construction
//! with a uniformly random total order in place of enumerating all `(Mk)!`
//! permutations; [`build_partitions_permuted`] keeps the enumeration form
//! for small exact checks.

use rand::Rng;
use rayon::prelude::*;

use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, Vertex, VertexSet};
use crate::measure::Measure;
use crate::packing::{shrink, Packing};
use crate::rational::{at_least_one_minus_sqrt, int, pow_usize, ratio_usize, Rational};
use crate::rng::sample_rng;
use crate::witness::WitnessFamily;

/// Upper limit on `M * |V|` lifted points.
pub const MAX_LIFTED_POINTS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multipacking {
    vertex_count: usize,
    packings: Vec<Packing>,
}

impl Multipacking {
    pub fn new(vertex_count: usize, packings: Vec<Packing>) -> Result<Self> {
        if packings.is_empty() {
            return Err(Error::input("a multipacking needs at least one packing"));
        }
        for p in &packings {
            if let Some(v) = p.tiles().iter().flat_map(|t| t.iter()).find(|&v| v >= vertex_count) {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    count: vertex_count,
                });
            }
        }
        Ok(Multipacking {
            vertex_count,
            packings,
        })
    }

    pub fn m(&self) -> usize {
        self.packings.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn packings(&self) -> &[Packing] {
        &self.packings
    }

    /// `A_x`: the number of packings covering each vertex.
    pub fn coverage_counts(&self) -> Vec<usize> {
        let mut a = vec![0usize; self.vertex_count];
        for p in &self.packings {
            for t in p.tiles() {
                for v in t.iter() {
                    a[v] += 1;
                }
            }
        }
        a
    }
}

/// Lifted point `(u, j)`, `j` in `1..=M`, stored as `u * M + (j - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftedPoint {
    pub base: Vertex,
    pub level: usize,
}

/// `Q(x)` for every vertex, as lifted ids, plus the grid `M`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub grid: usize,
    multiplicity: Vec<Vec<(Vertex, usize)>>,
}

impl Lift {
    pub fn new(w: &WitnessFamily) -> Result<Self> {
        let grid = w
            .common_denominator()
            .filter(|&m| m.checked_mul(w.vertex_count().max(1)).is_some_and(|t| t <= MAX_LIFTED_POINTS))
            .ok_or_else(|| {
                Error::input("witness weights have no usable common grid 1/M; rationalize first")
            })?;
        let big_m = int(grid);
        let multiplicity = (0..w.vertex_count())
            .map(|x| {
                w.dist(x)
                    .iter()
                    .map(|(u, p)| {
                        let i = (p * &big_m).to_integer().to_usize().expect("weight at most 1");
                        (*u, i)
                    })
                    .collect()
            })
            .collect();
        Ok(Lift { grid, multiplicity })
    }

    /// `i(x, u)` pairs for `x`.
    pub fn counts(&self, x: Vertex) -> &[(Vertex, usize)] {
        &self.multiplicity[x]
    }

    pub fn q(&self, x: Vertex) -> impl Iterator<Item = LiftedPoint> + '_ {
        self.multiplicity[x]
            .iter()
            .flat_map(|&(u, i)| (1..=i).map(move |level| LiftedPoint { base: u, level }))
    }

    fn id(&self, p: LiftedPoint) -> usize {
        p.base * self.grid + p.level - 1
    }

    /// `|Q(x) ∩ Q(y)| / |Q(x) ∪ Q(y)|` = `sum min i / sum max i`.
    pub fn jaccard(&self, x: Vertex, y: Vertex) -> Rational {
        let (a, b) = (&self.multiplicity[x], &self.multiplicity[y]);
        let (mut i, mut j) = (0, 0);
        let (mut inter, mut union) = (0usize, 0usize);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(p), Some(q)) if p.0 == q.0 => {
                    inter += p.1.min(q.1);
                    union += p.1.max(q.1);
                    i += 1;
                    j += 1;
                }
                (Some(p), Some(q)) if p.0 < q.0 => {
                    union += p.1;
                    i += 1;
                }
                (Some(p), None) => {
                    union += p.1;
                    i += 1;
                }
                (_, Some(q)) => {
                    union += q.1;
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        ratio_usize(inter, union)
    }
}

/// Exact probability that adjacent `x`, `y` land in different tiles of one
/// sampled partition.
pub fn split_probability_exact(w: &WitnessFamily, x: Vertex, y: Vertex) -> Result<Rational> {
    let lift = Lift::new(w)?;
    Ok(Rational::one() - lift.jaccard(x, y))
}

pub(crate) fn max_support_distance(g: &Graph, w: &WitnessFamily) -> Result<usize> {
    let mut bfs = g.bfs();
    let mut r = 0;
    for x in g.vertices() {
        if w.dist(x).iter().all(|&(u, _)| u == x) {
            continue;
        }
        bfs.run(g, [x], None, None);
        for &(u, _) in w.dist(x) {
            r = r.max(bfs.dist(u).ok_or(Error::UnboundedComponent {
                witness: x,
                diameter: "inf".into(),
                cap: w.support_radius(),
            })?);
        }
    }
    Ok(r)
}

pub(crate) fn partition_from_images(n: usize, image: &[usize], bound: usize) -> Packing {
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&x| (image[x], x));
    let mut tiles = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && image[order[end]] == image[order[start]] {
            end += 1;
        }
        tiles.push(VertexSet::new(order[start..end].iter().copied()));
        start = end;
    }
    Packing::new(tiles, bound)
}

/// One partition per sample; sample `i` depends only on `(seed, i)`.
/// Tile diameters are at most twice the largest support distance.
pub fn build_partitions(
    g: &Graph,
    w: &WitnessFamily,
    samples: usize,
    seed: u64,
) -> Result<Vec<Packing>> {
    w.check_graph(g)?;
    let lift = Lift::new(w)?;
    let bound = 2 * max_support_distance(g, w)?;
    Ok((0..samples)
        .into_par_iter()
        .map(|i| sample_partition(g, &lift, bound, seed, i as u64))
        .collect())
}

/// The image map `x -> top lifted point of Q(x)` for one sample.
pub fn sample_images(lift: &Lift, n: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut rng = sample_rng(seed, index);
    let mut ranks = vec![0u64; n * lift.grid];
    'draw: loop {
        rng.fill(&mut ranks[..]);
        let mut image = vec![0usize; n];
        for (x, slot) in image.iter_mut().enumerate() {
            let mut best: Option<(u64, usize)> = None;
            let mut tie = false;
            for p in lift.q(x) {
                let id = lift.id(p);
                let r = ranks[id];
                match best {
                    Some((b, _)) if r < b => {}
                    Some((b, _)) if r == b => tie = true,
                    _ => {
                        best = Some((r, id));
                        tie = false;
                    }
                }
            }
            if tie {
                log::debug!("rank collision in sample {index}, redrawing");
                continue 'draw;
            }
            *slot = best.expect("Q(x) is nonempty").1;
        }
        return image;
    }
}

fn sample_partition(g: &Graph, lift: &Lift, bound: usize, seed: u64, index: u64) -> Packing {
    let n = g.vertex_count();
    partition_from_images(n, &sample_images(lift, n, seed, index), bound)
}

/// The enumeration form: a base coloring separating distance `2R + 1`,
/// lifted colors `(chi(x) - 1) M + j`, and one partition per permutation of
/// the `Mk` lifted colors. `perms[i][c - 1]` is the new value of color `c`.
pub fn build_partitions_permuted(
    g: &Graph,
    w: &WitnessFamily,
    perms: &[Vec<usize>],
) -> Result<(Coloring, Vec<Packing>)> {
    w.check_graph(g)?;
    let lift = Lift::new(w)?;
    let r = max_support_distance(g, w)?;
    let coloring = g.distance_coloring(2 * r + 1);
    let colors = lift.grid * coloring.num_colors;
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(perms.len());
    for perm in perms {
        if perm.len() != colors {
            return Err(Error::input(format!(
                "permutation has length {}, expected {colors}",
                perm.len()
            )));
        }
        let image: Vec<usize> = (0..n)
            .map(|x| {
                lift.q(x)
                    .max_by_key(|p| {
                        let c = (coloring.color_of[p.base] - 1) * lift.grid + p.level;
                        perm[c - 1]
                    })
                    .map(|p| lift.id(p))
                    .expect("Q(x) is nonempty")
            })
            .collect();
        out.push(partition_from_images(n, &image, 2 * r));
    }
    Ok((coloring, out))
}

/// Shrinks each partition by `s`.
pub fn partitions_to_multipacking(g: &Graph, parts: &[Packing], s: usize) -> Result<Multipacking> {
    if s < 1 {
        return Err(Error::input("shrink depth must be at least 1"));
    }
    let packings = parts.par_iter().map(|p| shrink(g, p, s)).collect();
    Multipacking::new(g.vertex_count(), packings)
}

/// `max_x #{i : x uncovered by packing i} / m`.
pub fn tightness_defect(mp: &Multipacking) -> Rational {
    let m = mp.m();
    let worst = mp.coverage_counts().into_iter().map(|a| m - a).max().unwrap_or(0);
    ratio_usize(worst, m)
}

/// Shrinks every packing by `s` and checks
/// `defect(shrunk) <= d^(s+1) * defect(mp)`.
pub fn shrink_defect_bound_check(g: &Graph, mp: &Multipacking, s: usize) -> Result<bool> {
    let shrunk = Multipacking::new(
        mp.vertex_count,
        mp.packings.iter().map(|p| shrink(g, p, s)).collect(),
    )?;
    let factor = Rational::from_integer(pow_usize(g.degree_bound(), s + 1));
    Ok(tightness_defect(&shrunk) <= factor * tightness_defect(mp))
}

/// `p(x) = (sum_i uniform(tile of x in packing i)) / A_x`.
pub fn witness_from_multipacking(g: &Graph, mp: &Multipacking) -> Result<WitnessFamily> {
    let n = g.vertex_count();
    if mp.vertex_count != n {
        return Err(Error::input("multipacking and graph differ in vertex count"));
    }
    let a = mp.coverage_counts();
    if let Some(x) = (0..n).find(|&x| a[x] == 0) {
        return Err(Error::Uncovered(x));
    }
    let indices: Vec<Vec<Option<usize>>> = mp.packings.iter().map(|p| p.tile_index(n)).collect();
    let mut radius = 0;
    for p in &mp.packings {
        radius = radius.max(p.max_tile_diameter(g).finite().unwrap_or(p.diameter_bound()));
    }
    let dist = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut entries: Vec<(Vertex, Rational)> = Vec::new();
            for (p, idx) in mp.packings.iter().zip(&indices) {
                if let Some(t) = idx[x] {
                    let tile = &p.tiles()[t];
                    let w = ratio_usize(1, tile.len() * a[x]);
                    entries.extend(tile.iter().map(|y| (y, w.clone())));
                }
            }
            entries.sort_by_key(|e| e.0);
            let mut merged: Vec<(Vertex, Rational)> = Vec::with_capacity(entries.len());
            for (y, w) in entries {
                match merged.last_mut() {
                    Some(last) if last.0 == y => last.1 += w,
                    _ => merged.push((y, w)),
                }
            }
            merged
        })
        .collect();
    WitnessFamily::new(1, dist, radius)
}

/// Indices `i` with `mu([F_i]) >= 1 - sqrt(epsilon)`.
pub fn measure_tight_count(mp: &Multipacking, mu: &Measure, epsilon: &Rational) -> Result<usize> {
    if mu.len() != mp.vertex_count {
        return Err(Error::input("measure and multipacking differ in vertex count"));
    }
    Ok(mp
        .packings
        .iter()
        .filter(|p| at_least_one_minus_sqrt(&mu.of_mask(&p.covered_mask(mp.vertex_count)), epsilon))
        .count())
}

/// Per-vertex number of partitions in which the vertex has a neighbor in
/// another tile (or is uncovered and has a neighbor).
pub fn boundary_counts(g: &Graph, parts: &[Packing]) -> Vec<usize> {
    let n = g.vertex_count();
    parts
        .par_iter()
        .map(|p| {
            let idx = p.tile_index(n);
            g.vertices()
                .map(|x| usize::from(g.neighbors(x).iter().any(|&y| idx[y] != idx[x])))
                .collect::<Vec<_>>()
        })
        .reduce(
            || vec![0; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(s, v)| *s += v);
                a
            },
        )
}

/// Per-edge count of partitions separating the endpoints, in `g.edges()`
/// order.
pub fn split_counts(g: &Graph, parts: &[Packing]) -> Vec<usize> {
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    parts
        .par_iter()
        .map(|p| {
            let idx = p.tile_index(n);
            edges
                .iter()
                .map(|&(x, y)| usize::from(idx[x].is_none() || idx[x] != idx[y]))
                .collect::<Vec<_>>()
        })
        .reduce(
            || vec![0; edges.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(s, v)| *s += v);
                a
            },
        )
}

/// All permutations of `0..len` mapped to `1..=len`, in lexicographic order.
pub fn all_permutations(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=len).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..len).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..len).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::generate;
    use crate::rational::ratio;
    use crate::witness::{
        point_mass_witness, rationalize, uniform_ball_witness, validate_witness, WitnessFamily,
    };

    fn arcs(tiles: &[&[usize]], bound: usize) -> Packing {
        Packing::new(tiles.iter().map(|t| VertexSet::new(t.iter().copied())).collect(), bound)
    }

    #[test]
    fn point_masses_give_singletons() {
        let g = generate::cycle(9);
        for p in build_partitions(&g, &point_mass_witness(&g), 20, 1).unwrap() {
            assert_eq!(p.len(), 9);
        }
        let one = Graph::edgeless(1);
        let parts = build_partitions(&one, &uniform_ball_witness(&one, 2), 5, 3).unwrap();
        assert!(parts.iter().all(|p| p.tiles() == [VertexSet::singleton(0)]));
    }

    #[test]
    fn jaccard_on_c6() {
        let g = generate::cycle(6);
        let w = rationalize(&uniform_ball_witness(&g, 1), 3).unwrap();
        let lift = Lift::new(&w).unwrap();
        assert_eq!(lift.grid, 3);
        assert_eq!(lift.jaccard(0, 1), ratio(1, 2));
    }

    #[test]
    fn partitions_are_deterministic_and_bounded() {
        let g = generate::cycle(30);
        let w = uniform_ball_witness(&g, 3);
        let a = build_partitions(&g, &w, 50, 99).unwrap();
        let b = build_partitions(&g, &w, 50, 99).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert_eq!(p.covered_count(), 30);
            assert!(p.max_tile_diameter(&g).at_most(6));
        }
    }

    #[test]
    fn permutation_enumeration_matches_jaccard_exactly() {
        // P_4 with p(x) uniform on {x, x + 1}, and p(3) uniform on {2, 3}
        let g = generate::path(4);
        let half = ratio(1, 2);
        let pair = |a: usize, b: usize| vec![(a, half.clone()), (b, half.clone())];
        let dist = vec![pair(0, 1), pair(1, 2), pair(2, 3), pair(2, 3)];
        let w = WitnessFamily::new(1, dist, 1).unwrap();
        let lift = Lift::new(&w).unwrap();
        assert_eq!(lift.grid, 2);
        let perms = all_permutations(8);
        assert_eq!(perms.len(), 40_320);
        let (coloring, parts) = build_partitions_permuted(&g, &w, &perms).unwrap();
        assert_eq!(coloring.num_colors, 4);
        let total = parts.len();
        for (x, y) in g.edges() {
            let together = parts
                .iter()
                .filter(|p| {
                    let idx = p.tile_index(4);
                    idx[x] == idx[y]
                })
                .count();
            assert_eq!(ratio_usize(together, total), lift.jaccard(x, y), "edge {x}-{y}");
        }
    }

    #[test]
    fn multipacking_from_partitions() {
        let g = generate::cycle(12);
        let whole = Packing::new(vec![g.all()], 6);
        let mp = partitions_to_multipacking(&g, &[whole.clone(), whole.clone()], 1).unwrap();
        assert_eq!(mp.packings(), &[whole.clone(), whole]);
        let singles = Packing::new(g.vertices().map(VertexSet::singleton).collect(), 0);
        let mp = partitions_to_multipacking(&g, &[singles], 1).unwrap();
        assert!(mp.packings()[0].is_empty());
        let halves = arcs(&[&[0, 1, 2, 3, 4, 5], &[6, 7, 8, 9, 10, 11]], 5);
        let mp = partitions_to_multipacking(&g, &[halves], 1).unwrap();
        assert_eq!(
            mp.packings()[0].tiles(),
            &[VertexSet::range(1, 5), VertexSet::range(7, 11)]
        );
    }

    #[test]
    fn defect_examples() {
        let full = Packing::new(vec![VertexSet::range(0, 4)], 3);
        let empty = Packing::empty(3);
        let mp = Multipacking::new(4, vec![full.clone(), full.clone()]).unwrap();
        assert_eq!(tightness_defect(&mp), Rational::zero());
        let mp = Multipacking::new(4, vec![empty.clone()]).unwrap();
        assert_eq!(tightness_defect(&mp), Rational::one());
        let mp = Multipacking::new(4, vec![full, empty]).unwrap();
        assert_eq!(tightness_defect(&mp), ratio(1, 2));
        assert!(Multipacking::new(4, vec![]).is_err());
    }

    #[test]
    fn shrink_defect_examples() {
        let g = generate::cycle(8);
        let mp = Multipacking::new(8, vec![Packing::new(vec![g.all()], 4)]).unwrap();
        assert!(shrink_defect_bound_check(&g, &mp, 1).unwrap());
        let g = generate::star(3);
        let mp = Multipacking::new(4, vec![Packing::new(vec![VertexSet::singleton(0)], 0)]).unwrap();
        assert!(shrink_defect_bound_check(&g, &mp, 1).unwrap());
    }

    #[test]
    fn witness_from_two_arc_partitions() {
        let g = generate::cycle(6);
        let a = arcs(&[&[0, 1, 2], &[3, 4, 5]], 2);
        let b = arcs(&[&[1, 2, 3], &[0, 4, 5]], 2);
        let mp = Multipacking::new(6, vec![a.clone(), b]).unwrap();
        let w = witness_from_multipacking(&g, &mp).unwrap();
        assert_eq!(
            w.dist(0),
            &[
                (0, ratio(1, 3)),
                (1, ratio(1, 6)),
                (2, ratio(1, 6)),
                (4, ratio(1, 6)),
                (5, ratio(1, 6))
            ]
        );
        let single = witness_from_multipacking(&g, &Multipacking::new(6, vec![a.clone()]).unwrap()).unwrap();
        let double = witness_from_multipacking(&g, &Multipacking::new(6, vec![a.clone(), a]).unwrap()).unwrap();
        assert_eq!(single, double);
        assert_eq!(single.dist(4), &[(3, ratio(1, 3)), (4, ratio(1, 3)), (5, ratio(1, 3))]);
        let rep = validate_witness(&g, &single).unwrap();
        assert!(rep.sums_ok);
    }

    #[test]
    fn witness_from_multipacking_rejects_uncovered() {
        let g = generate::cycle(4);
        let mp = Multipacking::new(4, vec![Packing::new(vec![VertexSet::range(0, 2)], 1)]).unwrap();
        assert!(matches!(witness_from_multipacking(&g, &mp), Err(Error::Uncovered(2))));
    }

    #[test]
    fn measure_count_examples() {
        let mu = Measure::uniform(4).unwrap();
        let a = Packing::new(vec![VertexSet::range(0, 3)], 2);
        let b = Packing::new(vec![VertexSet::range(0, 4)], 2);
        let mp = Multipacking::new(4, vec![a, b.clone()]).unwrap();
        assert_eq!(measure_tight_count(&mp, &mu, &ratio(1, 16)).unwrap(), 2);
        let mp = Multipacking::new(4, vec![Packing::empty(0)]).unwrap();
        assert_eq!(measure_tight_count(&mp, &mu, &Rational::one()).unwrap(), 1);
        let mp = Multipacking::new(4, vec![b.clone(), b]).unwrap();
        assert_eq!(measure_tight_count(&mp, &mu, &ratio(1, 100)).unwrap(), 2);
    }

    #[test]
    fn permutations_enumerate() {
        assert_eq!(all_permutations(3).len(), 6);
        assert_eq!(all_permutations(3)[1], vec![1, 3, 2]);
        assert_eq!(all_permutations(1), vec![vec![1]]);
    }
}
