//! Mediator packings: finitely many packings that jointly contain every set
//! of a candidate family as a tile.
//!
//! Each candidate gets a center (its member of least eccentricity within the
//! set, ties by id). Centers are colored so that equal colors are more than
//! `2 k + 1` apart, which keeps same-colored candidates disjoint and
//! 1-separated. Mediator `(color, i)` holds the `i`-th candidate of every
//! center of that color.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::folner::{find_folner_in_ball, FolnerSearchConfig};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::packing::Packing;
use crate::rational::Rational;

/// Largest graph on which [`CandidateFamily::Enumerate`] is accepted.
pub const ENUMERATION_LIMIT: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateFamily {
    /// Every ball `B_r(x)` that qualifies.
    Balls,
    /// The set found by the ball search around every vertex.
    Searched { candidate_budget: usize },
    /// Every qualifying subset; small graphs only.
    Enumerate,
    Explicit(Vec<VertexSet>),
}

/// The `(eps, k)`-Følner members of a family, deduplicated and sorted.
pub fn candidate_sets(
    g: &Graph,
    family: &CandidateFamily,
    eps: &Rational,
    k: usize,
) -> Result<Vec<VertexSet>> {
    let qualifies = |s: &VertexSet| !s.is_empty() && g.is_folner(s, eps) && g.diameter_at_most(s, k);
    let mut sets: Vec<VertexSet> = match family {
        CandidateFamily::Balls => g
            .vertices()
            .into_par_iter()
            .map_init(
                || (g.bfs(), g.bfs()),
                |(bfs, check), x| {
                    let order = bfs.run(g, [x], Some(k), None).to_vec();
                    let mut out = Vec::new();
                    let mut end = 0;
                    for r in 0..=k {
                        let start = end;
                        while end < order.len() && bfs.dist(order[end]).is_some_and(|d| d <= r) {
                            end += 1;
                        }
                        if end == start && r > 0 {
                            break;
                        }
                        let ball = VertexSet::new(order[..end].iter().copied());
                        if !g.is_folner(&ball, eps) {
                            continue;
                        }
                        // a ball of radius r has diameter at most 2r
                        if 2 * r > k && !g.diameter_at_most_with(check, &ball, k) {
                            break;
                        }
                        out.push(ball);
                    }
                    out
                },
            )
            .flatten_iter()
            .collect(),
        CandidateFamily::Searched { candidate_budget } => {
            let cfg = FolnerSearchConfig {
                epsilon: eps.clone(),
                max_radius: (k / 2).max(1),
                candidate_budget: *candidate_budget,
            };
            let found: Vec<Option<VertexSet>> = g
                .vertices()
                .into_par_iter()
                .map(|x| find_folner_in_ball(g, x, &cfg))
                .collect::<Result<_>>()?;
            found.into_iter().flatten().filter(|s| qualifies(s)).collect()
        }
        CandidateFamily::Enumerate => {
            let n = g.vertex_count();
            if n > ENUMERATION_LIMIT {
                return Err(Error::input(format!(
                    "full enumeration needs at most {ENUMERATION_LIMIT} vertices, graph has {n}"
                )));
            }
            (1u32..(1u32 << n))
                .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<VertexSet>())
                .filter(|s| qualifies(s))
                .collect()
        }
        CandidateFamily::Explicit(sets) => {
            for s in sets {
                g.check_set(s)?;
            }
            sets.iter().filter(|s| qualifies(s)).cloned().collect()
        }
    };
    let mut seen = HashSet::new();
    sets.retain(|s| seen.insert(s.clone()));
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(sets)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MediatorFamily {
    pub mediators: Vec<Packing>,
    /// Number of candidate sets the mediators jointly contain.
    pub candidates: usize,
    pub colors: usize,
}

impl MediatorFamily {
    pub fn len(&self) -> usize {
        self.mediators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mediators.is_empty()
    }

    /// Whether every set of `family` is a tile of some mediator.
    pub fn contains_all(&self, family: &[VertexSet]) -> bool {
        let tiles: HashSet<&VertexSet> = self.mediators.iter().flat_map(|m| m.tiles()).collect();
        family.iter().all(|s| tiles.contains(s))
    }
}

/// The member of least eccentricity within `set` (ties by id), or `None`
/// when the diameter of `set` exceeds `k`.
fn center(g: &Graph, set: &VertexSet, k: usize) -> Option<Vertex> {
    let mut bfs = g.bfs();
    let mut best = (usize::MAX, usize::MAX);
    for v in set.iter() {
        bfs.run(g, [v], Some(k), None);
        let ecc = set.iter().map(|u| bfs.dist(u)).try_fold(0, |m, d| d.map(|d| m.max(d)))?;
        best = best.min((ecc, v));
    }
    Some(best.1)
}

/// Candidates must have diameter at most `k`. Fails when more than `budget`
/// mediators would be needed.
pub fn build_mediators(
    g: &Graph,
    candidates: &[VertexSet],
    k: usize,
    budget: usize,
) -> Result<MediatorFamily> {
    if candidates.is_empty() {
        return Ok(MediatorFamily {
            mediators: Vec::new(),
            candidates: 0,
            colors: 0,
        });
    }
    for s in candidates {
        g.check_set(s)?;
    }
    let coloring = g.distance_coloring(2 * k + 1);
    let centers: Vec<Vertex> = candidates
        .par_iter()
        .map(|s| center(g, s, k).ok_or_else(|| Error::input(format!("candidate {s} has diameter above {k}"))))
        .collect::<Result<_>>()?;
    let mut per_center: BTreeMap<Vertex, Vec<&VertexSet>> = BTreeMap::new();
    for (s, &c) in candidates.iter().zip(&centers) {
        per_center.entry(c).or_default().push(s);
    }
    let mut groups: BTreeMap<(usize, usize), Vec<VertexSet>> = BTreeMap::new();
    for (c, sets) in per_center {
        for (i, s) in sets.into_iter().enumerate() {
            groups.entry((coloring.color_of[c], i)).or_default().push(s.clone());
        }
    }
    if groups.len() > budget {
        return Err(Error::MediatorBudget {
            needed: groups.len(),
            budget,
        });
    }
    let colors = groups.keys().map(|k| k.0).collect::<HashSet<_>>().len();
    Ok(MediatorFamily {
        mediators: groups.into_values().map(|tiles| Packing::new(tiles, k)).collect(),
        candidates: candidates.len(),
        colors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::packing::{is_s_separated, validate_packing};
    use crate::rational::ratio;

    #[test]
    fn singletons_on_c6() {
        let g = generate::cycle(6);
        let singles: Vec<VertexSet> = g.vertices().map(VertexSet::singleton).collect();
        let m = build_mediators(&g, &singles, 0, 10).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.mediators[0].tiles(), &[VertexSet::singleton(0), VertexSet::singleton(2), VertexSet::singleton(4)]);
        assert!(m.contains_all(&singles));
    }

    #[test]
    fn five_arcs_on_c30() {
        let g = generate::cycle(30);
        let arcs: Vec<VertexSet> = (0..30).map(|c| g.ball(c, 2).unwrap()).collect();
        let m = build_mediators(&g, &arcs, 4, 100).unwrap();
        assert!(m.contains_all(&arcs));
        for med in &m.mediators {
            assert!(validate_packing(&g, med));
            assert!(is_s_separated(&g, med, 1));
        }
        assert_eq!(m.len(), 10);
    }

    #[test]
    fn empty_family_and_budget() {
        let g = generate::cycle(30);
        assert!(build_mediators(&g, &[], 4, 0).unwrap().is_empty());
        let arcs: Vec<VertexSet> = (0..30).map(|c| g.ball(c, 2).unwrap()).collect();
        assert!(matches!(
            build_mediators(&g, &arcs, 4, 3),
            Err(Error::MediatorBudget { needed: 10, budget: 3 })
        ));
    }

    #[test]
    fn candidate_families_agree_on_small_cycle() {
        let g = generate::cycle(12);
        let eps = ratio(1, 2);
        let balls = candidate_sets(&g, &CandidateFamily::Balls, &eps, 6).unwrap();
        let all = candidate_sets(&g, &CandidateFamily::Enumerate, &eps, 6).unwrap();
        for b in &balls {
            assert!(all.contains(b));
            assert!(g.is_folner(b, &eps));
        }
        // arcs of 5, 7, 9 and 11 vertices around each center (diameter at most 6
        // in C_12), plus the whole cycle
        assert_eq!(balls.len(), 4 * 12 + 1);
        let m = build_mediators(&g, &all, 6, 10_000).unwrap();
        assert!(m.contains_all(&all));
    }
}
