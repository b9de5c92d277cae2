//! Desk-scale Følner search: finding ε-Følner sets near a vertex, around a
//! given set, and greedy/backtracking packings of a set by small Følner tiles.
//!
//! The existence results these routines realize give no constructive
//! constants, so every routine is a bounded search that may come back empty.
//! Failure is returned as `None` (or as low coverage), never as an error.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, Vertex, VertexSet};
use crate::packing::Packing;
use crate::rational::{fraction_below, ratio_usize, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSearchConfig {
    pub epsilon: Rational,
    pub max_radius: usize,
    /// Cap on candidate sets evaluated during local improvement.
    pub candidate_budget: usize,
}

impl FolnerSearchConfig {
    pub fn new(epsilon: Rational, max_radius: usize, candidate_budget: usize) -> Result<Self> {
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        if epsilon <= zero || epsilon >= one {
            return Err(Error::input("epsilon must lie in (0, 1)"));
        }
        if max_radius < 1 || candidate_budget < 1 {
            return Err(Error::input("max_radius and candidate_budget must be at least 1"));
        }
        Ok(FolnerSearchConfig {
            epsilon,
            max_radius,
            candidate_budget,
        })
    }
}

/// Boundary size and size of a candidate, ordered as "better" = smaller
/// quotient, then smaller size, then lexicographically smaller members.
#[derive(Clone, Debug)]
struct Scored {
    boundary: usize,
    set: VertexSet,
}

impl Scored {
    fn new(g: &Graph, set: VertexSet, scratch: &mut [bool]) -> Self {
        for v in set.iter() {
            scratch[v] = true;
        }
        let boundary = g.boundary_size_masked(set.as_slice(), scratch);
        for v in set.iter() {
            scratch[v] = false;
        }
        Scored { boundary, set }
    }

    fn better_than(&self, other: &Scored) -> bool {
        let lhs = self.boundary * other.set.len();
        let rhs = other.boundary * self.set.len();
        lhs < rhs || (lhs == rhs && (self.set.len(), &self.set) < (other.set.len(), &other.set))
    }

    fn below(&self, eps: &Rational) -> bool {
        !self.set.is_empty() && fraction_below(self.boundary, self.set.len(), eps)
    }
}

/// Nested balls around `x` first, keeping the one with the smallest quotient;
/// if that is not yet ε-Følner, a bounded local search inside
/// `B_{max_radius}(x)` tries to improve it.
pub fn find_folner_in_ball(
    g: &Graph,
    x: Vertex,
    cfg: &FolnerSearchConfig,
) -> Result<Option<VertexSet>> {
    g.check_vertex(x)?;
    let mut bfs = g.bfs();
    let order = bfs.run(g, [x], Some(cfg.max_radius), None).to_vec();
    let mut scratch = vec![false; g.vertex_count()];
    let mut best: Option<Scored> = None;
    let mut end = 0;
    for r in 0..=cfg.max_radius {
        while end < order.len() && bfs.dist(order[end]).is_some_and(|d| d <= r) {
            end += 1;
        }
        let cand = Scored::new(g, VertexSet::new(order[..end].iter().copied()), &mut scratch);
        if best.as_ref().is_none_or(|b| cand.better_than(b)) {
            best = Some(cand);
        }
        if end == order.len() {
            break;
        }
    }
    let best = best.expect("ball around x is nonempty");
    if best.below(&cfg.epsilon) {
        return Ok(Some(best.set));
    }
    let region = VertexSet::new(order.iter().copied()).mask(g.vertex_count());
    let improved = local_improve(
        g,
        best,
        &region,
        &VertexSet::empty(),
        &cfg.epsilon,
        cfg.candidate_budget,
    );
    Ok(improved.filter(|s| s.below(&cfg.epsilon)).map(|s| s.set))
}

/// Default evaluation budget for the local search of
/// [`find_folner_containing`].
pub const DEFAULT_IMPROVE_BUDGET: usize = 10_000;

/// Grows `N_0(J) ⊂ N_1(J) ⊂ ...` and returns the first layer that is
/// ε-Følner; otherwise runs a local search that keeps `J` inside the set.
pub fn find_folner_containing(
    g: &Graph,
    j: &VertexSet,
    epsilon: &Rational,
    max_radius: usize,
) -> Result<Option<VertexSet>> {
    if j.is_empty() {
        return Err(Error::input("find_folner_containing needs a nonempty set"));
    }
    g.check_set(j)?;
    let ids = g.component_ids();
    let c = ids[j.as_slice()[0]];
    if j.iter().any(|v| ids[v] != c) {
        return Err(Error::input("set meets more than one component"));
    }
    let mut bfs = g.bfs();
    let order = bfs.run(g, j.iter(), Some(max_radius), None).to_vec();
    let mut scratch = vec![false; g.vertex_count()];
    let mut best: Option<Scored> = None;
    let mut end = 0;
    for r in 0..=max_radius {
        while end < order.len() && bfs.dist(order[end]).is_some_and(|d| d <= r) {
            end += 1;
        }
        let cand = Scored::new(g, VertexSet::new(order[..end].iter().copied()), &mut scratch);
        if cand.below(epsilon) {
            return Ok(Some(cand.set));
        }
        if best.as_ref().is_none_or(|b| cand.better_than(b)) {
            best = Some(cand);
        }
        if end == order.len() {
            break;
        }
    }
    let region = VertexSet::new(order.iter().copied()).mask(g.vertex_count());
    let best = best.expect("layer zero is nonempty");
    let improved = local_improve(g, best, &region, j, epsilon, DEFAULT_IMPROVE_BUDGET);
    Ok(improved.filter(|s| s.below(epsilon)).map(|s| s.set))
}

/// Steepest-descent search on the quotient: remove a boundary vertex (not in
/// `required`) or add a vertex of `region` adjacent to the set, taking the
/// best move while it strictly lowers the quotient.
fn local_improve(
    g: &Graph,
    start: Scored,
    region: &[bool],
    required: &VertexSet,
    eps: &Rational,
    budget: usize,
) -> Option<Scored> {
    let n = g.vertex_count();
    let mut scratch = vec![false; n];
    let mut current = start;
    let mut spent = 0usize;
    while !current.below(eps) && spent < budget {
        let inside = current.set.mask(n);
        let mut moves: Vec<VertexSet> = Vec::new();
        if current.set.len() > 1 {
            for v in current.set.iter() {
                if required.contains(v) {
                    continue;
                }
                if g.neighbors(v).iter().any(|&w| !inside[w]) {
                    moves.push(VertexSet::from_sorted(
                        current.set.iter().filter(|&u| u != v).collect(),
                    ));
                }
            }
        }
        let mut frontier: Vec<Vertex> = current
            .set
            .iter()
            .flat_map(|v| g.neighbors(v).iter().copied())
            .filter(|&w| !inside[w] && region[w])
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        for w in frontier {
            let mut next = current.set.as_slice().to_vec();
            let pos = next.binary_search(&w).unwrap_err();
            next.insert(pos, w);
            moves.push(VertexSet::from_sorted(next));
        }
        let mut best_move: Option<Scored> = None;
        for m in moves {
            if spent >= budget {
                break;
            }
            spent += 1;
            let cand = Scored::new(g, m, &mut scratch);
            if best_move.as_ref().is_none_or(|b| cand.better_than(b)) {
                best_move = Some(cand);
            }
        }
        match best_move {
            Some(m) if m.boundary * current.set.len() < current.boundary * m.set.len() => {
                current = m;
            }
            _ => break,
        }
    }
    Some(current)
}

/// Search limits for [`packing_principle_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSearch {
    /// Anchors expanded by the backtracking search before it settles for the
    /// best packing found so far.
    pub node_budget: usize,
    /// Stop as soon as this coverage is reached instead of looking for a
    /// full cover.
    pub stop_at: Option<Rational>,
}

impl Default for PackingSearch {
    fn default() -> Self {
        PackingSearch {
            node_budget: 4_000,
            stop_at: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingOutcome {
    pub packing: Packing,
    /// `|∪ H_i| / |J|`.
    pub coverage: Rational,
}

/// Disjoint ε-Følner tiles of diameter at most `k_cap` inside `j`, aiming to
/// cover as much of `j` as possible.
pub fn packing_principle(
    g: &Graph,
    j: &VertexSet,
    epsilon: &Rational,
    k_cap: usize,
) -> Result<PackingOutcome> {
    packing_principle_with(g, j, epsilon, k_cap, &PackingSearch::default())
}

/// Tiles are found by an anchored search: the smallest still-uncovered vertex
/// of `j` is either covered by a candidate tile containing it or given up.
/// Candidates are the sets `B_r(c) ∩ remainder` with `2r <= k_cap` that are
/// ε-Følner in `g`, tried smallest first (ties: lexicographic). The search
/// backtracks until it covers all of `j` or exhausts its node budget.
pub fn packing_principle_with(
    g: &Graph,
    j: &VertexSet,
    epsilon: &Rational,
    k_cap: usize,
    search: &PackingSearch,
) -> Result<PackingOutcome> {
    if k_cap < 1 {
        return Err(Error::input("packing diameter cap must be at least 1"));
    }
    if j.is_empty() {
        return Err(Error::input("packing_principle needs a nonempty set"));
    }
    g.check_set(j)?;
    if g.is_folner(j, epsilon) && g.diameter_at_most(j, k_cap) {
        return Ok(PackingOutcome {
            packing: Packing::new(vec![j.clone()], k_cap),
            coverage: ratio_usize(1, 1),
        });
    }
    let mut state = Search {
        g,
        members: j.as_slice(),
        eps: epsilon,
        half: k_cap / 2,
        rem: j.mask(g.vertex_count()),
        chosen: Vec::new(),
        covered: 0,
        best: Vec::new(),
        best_covered: 0,
        nodes: 0,
        budget: search.node_budget.max(1),
        bfs: g.bfs(),
        scratch: vec![false; g.vertex_count()],
        stop_count: search.stop_at.as_ref().map(|t| {
            (0..=j.len())
                .find(|&c| !fraction_below(c, j.len(), t))
                .unwrap_or(j.len())
        }),
    };
    state.descend(0);
    let coverage = ratio_usize(state.best_covered, j.len());
    Ok(PackingOutcome {
        packing: Packing::new(state.best, k_cap),
        coverage,
    })
}

struct Search<'a> {
    g: &'a Graph,
    members: &'a [Vertex],
    eps: &'a Rational,
    half: usize,
    rem: Vec<bool>,
    chosen: Vec<VertexSet>,
    covered: usize,
    best: Vec<VertexSet>,
    best_covered: usize,
    nodes: usize,
    budget: usize,
    bfs: Bfs,
    scratch: Vec<bool>,
    stop_count: Option<usize>,
}

impl Search<'_> {
    /// Returns `true` once the search should stop.
    fn descend(&mut self, mut pos: usize) -> bool {
        while pos < self.members.len() && !self.rem[self.members[pos]] {
            pos += 1;
        }
        if self.covered > self.best_covered || (self.best.is_empty() && !self.chosen.is_empty()) {
            self.best_covered = self.covered;
            self.best = self.chosen.clone();
        }
        if self.best_covered == self.members.len()
            || self.stop_count.is_some_and(|c| self.best_covered >= c)
        {
            return true;
        }
        if pos == self.members.len() {
            return false;
        }
        let open = self.members[pos..].iter().filter(|&&v| self.rem[v]).count();
        if self.covered + open <= self.best_covered
            || self.stop_count.is_some_and(|c| self.covered + open < c)
        {
            return false;
        }
        if self.nodes >= self.budget {
            return true;
        }
        self.nodes += 1;
        let anchor = self.members[pos];
        for cand in self.candidates(anchor) {
            for v in cand.iter() {
                self.rem[v] = false;
            }
            self.covered += cand.len();
            self.chosen.push(cand);
            let stop = self.descend(pos + 1);
            let cand = self.chosen.pop().expect("pushed above");
            self.covered -= cand.len();
            for v in cand.iter() {
                self.rem[v] = true;
            }
            if stop {
                return true;
            }
        }
        // give up on the anchor
        self.rem[anchor] = false;
        let stop = self.descend(pos + 1);
        self.rem[anchor] = true;
        stop
    }

    fn candidates(&mut self, anchor: Vertex) -> Vec<VertexSet> {
        let g = self.g;
        let centers: Vec<Vertex> = self
            .bfs
            .run(g, [anchor], Some(self.half), None)
            .iter()
            .copied()
            .filter(|&c| self.rem[c])
            .collect();
        let mut seen: HashSet<VertexSet> = HashSet::new();
        let mut out: Vec<VertexSet> = Vec::new();
        let mut layer = Vec::new();
        for c in centers {
            let ball = self.bfs.run(g, [c], Some(self.half), None).to_vec();
            let d_anchor = match self.bfs.dist(anchor) {
                Some(d) => d,
                None => continue,
            };
            layer.clear();
            let mut end = 0;
            for r in 0..=self.half {
                let before = layer.len();
                while end < ball.len() && self.bfs.dist(ball[end]).is_some_and(|d| d <= r) {
                    if self.rem[ball[end]] {
                        layer.push(ball[end]);
                    }
                    end += 1;
                }
                if r < d_anchor {
                    continue;
                }
                if r > d_anchor && layer.len() == before {
                    if end == ball.len() {
                        break;
                    }
                    continue;
                }
                let set = VertexSet::new(layer.iter().copied());
                if seen.contains(&set) {
                    continue;
                }
                let scored = Scored::new(g, set, &mut self.scratch);
                if scored.below(self.eps) {
                    seen.insert(scored.set.clone());
                    out.push(scored.set);
                } else {
                    seen.insert(scored.set);
                }
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::packing::validate_packing;
    use crate::rational::ratio;

    fn cfg(eps: Rational, r: usize) -> FolnerSearchConfig {
        FolnerSearchConfig::new(eps, r, 1_000).unwrap()
    }

    #[test]
    fn ball_search_on_a_long_cycle() {
        let g = generate::cycle(100);
        let found = find_folner_in_ball(&g, 50, &cfg(ratio(1, 2), 3)).unwrap().unwrap();
        assert_eq!(found, g.ball(50, 3).unwrap());
        assert_eq!(g.folner_quotient(&found).unwrap(), ratio(2, 7));
    }

    #[test]
    fn ball_search_on_complete_graph_returns_component() {
        let g = generate::complete(6);
        let found = find_folner_in_ball(&g, 0, &cfg(ratio(1, 10), 10)).unwrap().unwrap();
        assert_eq!(found, g.all());
    }

    /// Every subset of `B_2(x)` around an interior vertex of the 3-regular
    /// tree has quotient at least 1/10, so the search must fail.
    #[test]
    fn ball_search_fails_on_tree() {
        let g = generate::regular_tree(3, 8);
        let x = 0;
        let ball = g.ball(x, 2).unwrap();
        let members = ball.as_slice();
        let mut min_quotient = ratio(1, 1);
        for mask in 1u32..(1 << members.len()) {
            let set: VertexSet = (0..members.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| members[i])
                .collect();
            let q = g.folner_quotient(&set).unwrap();
            if q < min_quotient {
                min_quotient = q;
            }
        }
        assert!(min_quotient >= ratio(1, 10));
        assert_eq!(find_folner_in_ball(&g, x, &cfg(ratio(1, 10), 2)).unwrap(), None);
    }

    #[test]
    fn containing_search_examples() {
        let g = generate::cycle(100);
        let arc = VertexSet::range(0, 10);
        assert_eq!(find_folner_containing(&g, &arc, &ratio(1, 2), 5).unwrap(), Some(arc.clone()));
        let found = find_folner_containing(&g, &VertexSet::singleton(0), &ratio(1, 3), 10)
            .unwrap()
            .unwrap();
        assert!(found.contains(0));
        assert!(found.len() >= 7);
        assert!(g.is_folner(&found, &ratio(1, 3)));

        let t = generate::torus(&[20, 20]).unwrap();
        let found = find_folner_containing(&t, &VertexSet::singleton(0), &ratio(1, 2), 6)
            .unwrap()
            .unwrap();
        assert!(t.ball(0, 2).unwrap().is_subset(&found));
        assert!(t.is_folner(&found, &ratio(1, 2)));
    }

    #[test]
    fn containing_search_rejects_split_sets() {
        let g = generate::disjoint_union(&generate::cycle(5), &generate::cycle(5));
        assert!(find_folner_containing(&g, &VertexSet::new([0, 7]), &ratio(1, 2), 3).is_err());
    }

    #[test]
    fn packing_principle_takes_a_good_set_whole() {
        let g = generate::cycle(100);
        let j = VertexSet::range(10, 30);
        let out = packing_principle(&g, &j, &ratio(1, 2), 20).unwrap();
        assert_eq!(out.packing.tiles(), &[j]);
        assert_eq!(out.coverage, ratio(1, 1));
    }

    #[test]
    fn packing_principle_covers_a_path() {
        let g = generate::path(20);
        let out = packing_principle(&g, &g.all(), &ratio(1, 2), 6).unwrap();
        assert_eq!(out.coverage, ratio(1, 1));
        assert!(validate_packing(&g, &out.packing));
        for t in out.packing.tiles() {
            assert!(g.is_folner(t, &ratio(1, 2)));
            assert!(g.diameter_at_most(t, 6));
        }
    }

    #[test]
    fn packing_principle_whole_cycle() {
        let g = generate::cycle(9);
        let out = packing_principle(&g, &g.all(), &ratio(1, 4), 8).unwrap();
        assert_eq!(out.packing.tiles(), &[g.all()]);
        assert_eq!(out.coverage, ratio(1, 1));
    }

    #[test]
    fn packing_principle_rejects_zero_cap() {
        let g = generate::cycle(9);
        assert!(packing_principle(&g, &g.all(), &ratio(1, 4), 0).is_err());
    }

    #[test]
    fn packing_principle_half_path_block() {
        let g = generate::path(20);
        let out = packing_principle(&g, &VertexSet::range(0, 10), &ratio(1, 2), 6).unwrap();
        // smallest-first search: {0,1,2} then the rest of the block
        assert_eq!(
            out.packing.tiles(),
            &[VertexSet::range(0, 3), VertexSet::range(3, 10)]
        );
        assert_eq!(out.coverage, ratio(1, 1));
    }
}
