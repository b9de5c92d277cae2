//! Finite bounded-degree graphs and the metric notions everything else is
//! phrased in: balls, boundaries, Følner quotients, diameters measured in the
//! ambient graph, and distance colorings.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{fraction_below, ratio_usize, Rational};

pub type Vertex = usize;

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    /// `lo..hi` as a set.
    pub fn range(lo: Vertex, hi: Vertex) -> Self {
        VertexSet((lo..hi).collect())
    }

    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(
            mask.iter()
                .enumerate()
                .filter_map(|(v, &m)| m.then_some(v))
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.len() <= other.len() && self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            m[v] = true;
        }
        m
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::new(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Diameter in the ambient graph metric; sets meeting two components have
/// infinite diameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }

    pub fn at_most(self, bound: usize) -> bool {
        matches!(self, Diameter::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

/// Reusable breadth-first search state. Visited marks are epoch-stamped so
/// repeated searches do not pay for clearing.
pub(crate) struct Bfs {
    dist: Vec<usize>,
    seen: Vec<u32>,
    epoch: u32,
    queue: VecDeque<Vertex>,
    order: Vec<Vertex>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Bfs {
            dist: vec![0; n],
            seen: vec![0; n],
            epoch: 0,
            queue: VecDeque::new(),
            order: Vec::new(),
        }
    }

    /// Visits every vertex within `radius` of `sources` (all of them when
    /// `radius` is `None`), moving only through vertices allowed by `allowed`.
    /// Returns the visited vertices in nondecreasing distance order.
    pub(crate) fn run(
        &mut self,
        g: &Graph,
        sources: impl IntoIterator<Item = Vertex>,
        radius: Option<usize>,
        allowed: Option<&[bool]>,
    ) -> &[Vertex] {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
        self.order.clear();
        for s in sources {
            if self.seen[s] != self.epoch {
                self.seen[s] = self.epoch;
                self.dist[s] = 0;
                self.queue.push_back(s);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let dv = self.dist[v];
            if radius.is_some_and(|r| dv >= r) {
                continue;
            }
            for &w in g.neighbors(v) {
                if self.seen[w] == self.epoch {
                    continue;
                }
                if allowed.is_some_and(|a| !a[w]) {
                    continue;
                }
                self.seen[w] = self.epoch;
                self.dist[w] = dv + 1;
                self.queue.push_back(w);
            }
        }
        &self.order
    }

    /// Distance found by the last run, if `v` was reached.
    pub(crate) fn dist(&self, v: Vertex) -> Option<usize> {
        (self.seen[v] == self.epoch).then(|| self.dist[v])
    }
}

/// A finite simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    degree_bound: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Repeated and reversed edges collapse
    /// to one; self-loops and out-of-range ids are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, count: n });
                }
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let degree_bound = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            adjacency,
            degree_bound,
        })
    }

    /// `n` isolated vertices.
    pub fn edgeless(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            degree_bound: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Maximum degree, the `d` of every degree-dependent bound.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Edges `(u, v)` with `u < v`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::range(0, self.vertex_count())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.as_slice().last() {
            Some(&v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    pub(crate) fn bfs(&self) -> Bfs {
        Bfs::new(self.vertex_count())
    }

    /// Distances from `x` to every vertex; `None` for other components.
    pub fn distances_from(&self, x: Vertex) -> Vec<Option<usize>> {
        let mut bfs = self.bfs();
        bfs.run(self, [x], None, None);
        self.vertices().map(|v| bfs.dist(v)).collect()
    }

    pub fn distance(&self, x: Vertex, y: Vertex) -> Option<usize> {
        let mut bfs = self.bfs();
        bfs.run(self, [x], None, None);
        bfs.dist(y)
    }

    /// `B_r(x) = { y : d(x, y) <= r }`.
    pub fn ball(&self, x: Vertex, r: usize) -> Result<VertexSet> {
        self.check_vertex(x)?;
        let mut bfs = self.bfs();
        Ok(VertexSet::new(bfs.run(self, [x], Some(r), None).iter().copied()))
    }

    /// `N_r(J)`, all vertices within distance `r` of `set`.
    pub fn neighborhood(&self, set: &VertexSet, r: usize) -> VertexSet {
        let mut bfs = self.bfs();
        VertexSet::new(bfs.run(self, set.iter(), Some(r), None).iter().copied())
    }

    /// Vertices of `set` with a neighbor outside it.
    pub fn boundary(&self, set: &VertexSet) -> VertexSet {
        let inside = set.mask(self.vertex_count());
        VertexSet::from_sorted(
            set.iter()
                .filter(|&x| self.neighbors(x).iter().any(|&y| !inside[y]))
                .collect(),
        )
    }

    pub(crate) fn boundary_size_masked(&self, set: &[Vertex], inside: &[bool]) -> usize {
        set.iter()
            .filter(|&&x| self.neighbors(x).iter().any(|&y| !inside[y]))
            .count()
    }

    /// Vertices of `set` within distance `k` of its complement.
    pub fn k_boundary(&self, set: &VertexSet, k: usize) -> VertexSet {
        let inside = set.mask(self.vertex_count());
        let outside = self.vertices().filter(|&v| !inside[v]);
        let mut bfs = self.bfs();
        let reached = bfs.run(self, outside, Some(k), None);
        VertexSet::new(reached.iter().copied().filter(|&v| inside[v]))
    }

    /// `|∂L| / |L|`, exactly.
    pub fn folner_quotient(&self, set: &VertexSet) -> Result<Rational> {
        if set.is_empty() {
            return Err(Error::input("Følner quotient of an empty set"));
        }
        self.check_set(set)?;
        Ok(ratio_usize(self.boundary(set).len(), set.len()))
    }

    /// Nonempty and `|∂L| / |L| < eps`.
    pub fn is_folner(&self, set: &VertexSet, eps: &Rational) -> bool {
        !set.is_empty() && fraction_below(self.boundary(set).len(), set.len(), eps)
    }

    /// Largest pairwise distance within `set`, measured in this graph.
    pub fn set_diameter(&self, set: &VertexSet) -> Diameter {
        let mut bfs = self.bfs();
        self.set_diameter_with(&mut bfs, set)
    }

    pub(crate) fn set_diameter_with(&self, bfs: &mut Bfs, set: &VertexSet) -> Diameter {
        let mut best = 0;
        for x in set.iter() {
            bfs.run(self, [x], None, None);
            for y in set.iter() {
                match bfs.dist(y) {
                    Some(d) => best = best.max(d),
                    None => return Diameter::Infinite,
                }
            }
        }
        Diameter::Finite(best)
    }

    /// `set_diameter(set) <= k`, with early exit.
    pub fn diameter_at_most(&self, set: &VertexSet, k: usize) -> bool {
        let mut bfs = self.bfs();
        self.diameter_at_most_with(&mut bfs, set, k)
    }

    pub(crate) fn diameter_at_most_with(&self, bfs: &mut Bfs, set: &VertexSet, k: usize) -> bool {
        set.iter().all(|x| {
            bfs.run(self, [x], Some(k), None);
            set.iter().all(|y| bfs.dist(y).is_some())
        })
    }

    /// Component id per vertex, numbered in order of smallest member.
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut id = vec![usize::MAX; n];
        let mut bfs = self.bfs();
        let mut next = 0;
        for v in 0..n {
            if id[v] != usize::MAX {
                continue;
            }
            for &w in bfs.run(self, [v], None, None) {
                id[w] = next;
            }
            next += 1;
        }
        id
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.induced_components(&self.all())
    }

    /// Connected components of the subgraph induced on `set`.
    pub fn induced_components(&self, set: &VertexSet) -> Vec<VertexSet> {
        let inside = set.mask(self.vertex_count());
        let mut done = vec![false; self.vertex_count()];
        let mut bfs = self.bfs();
        let mut out = Vec::new();
        for v in set.iter() {
            if done[v] {
                continue;
            }
            let comp = VertexSet::new(bfs.run(self, [v], None, Some(&inside)).iter().copied());
            for w in comp.iter() {
                done[w] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Diameter of the whole graph.
    pub fn diameter(&self) -> Diameter {
        self.set_diameter(&self.all())
    }

    /// Largest diameter of a single component.
    pub fn max_component_diameter(&self) -> usize {
        self.components()
            .iter()
            .filter_map(|c| self.set_diameter(c).finite())
            .max()
            .unwrap_or(0)
    }

    /// `max_x |B_r(x)|`.
    pub fn max_ball_size(&self, r: usize) -> usize {
        let mut bfs = self.bfs();
        self.vertices()
            .map(|x| bfs.run(self, [x], Some(r), None).len())
            .max()
            .unwrap_or(0)
    }

    /// Greedy coloring in vertex-id order such that vertices at distance at
    /// most `r` receive different colors. Colors start at 1.
    pub fn distance_coloring(&self, r: usize) -> Coloring {
        let n = self.vertex_count();
        let mut color_of = vec![0usize; n];
        let mut bfs = self.bfs();
        let mut used = Vec::new();
        let mut num_colors = 0;
        for x in 0..n {
            used.clear();
            for &y in bfs.run(self, [x], Some(r), None) {
                if color_of[y] != 0 {
                    used.push(color_of[y]);
                }
            }
            used.sort_unstable();
            used.dedup();
            let mut c = 1;
            for &u in &used {
                if u == c {
                    c += 1;
                } else if u > c {
                    break;
                }
            }
            color_of[x] = c;
            num_colors = num_colors.max(c);
        }
        Coloring {
            color_of,
            num_colors,
            separation_radius: r,
        }
    }
}

/// A vertex coloring in which vertices at distance at most
/// `separation_radius` get different colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub color_of: Vec<usize>,
    pub num_colors: usize,
    pub separation_radius: usize,
}

impl Coloring {
    /// All-pairs check of the separation property.
    pub fn verify(&self, g: &Graph) -> bool {
        let mut bfs = g.bfs();
        g.vertices().all(|x| {
            bfs.run(g, [x], Some(self.separation_radius), None)
                .iter()
                .all(|&y| y == x || self.color_of[y] != self.color_of[x])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rational::ratio;

    /// Floyd–Warshall, kept independent of the BFS code under test.
    fn all_pairs(g: &Graph) -> Vec<Vec<Option<usize>>> {
        let n = g.vertex_count();
        let mut d = vec![vec![None; n]; n];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = Some(0);
            for &w in g.neighbors(v) {
                row[w] = Some(1);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    #[test]
    fn ball_examples() {
        let c10 = generate::cycle(10);
        assert_eq!(c10.ball(0, 0).unwrap(), VertexSet::singleton(0));
        let oracle: VertexSet = all_pairs(&c10)[0]
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_some_and(|d| d <= 2))
            .map(|(v, _)| v)
            .collect();
        assert_eq!(oracle, VertexSet::new([8, 9, 0, 1, 2]));
        assert_eq!(c10.ball(0, 2).unwrap(), oracle);
        let p3 = generate::path(3);
        assert_eq!(p3.ball(1, 5).unwrap(), VertexSet::new([0, 1, 2]));
        assert!(matches!(c10.ball(10, 1), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn boundary_examples() {
        let c12 = generate::cycle(12);
        assert!(c12.boundary(&c12.all()).is_empty());
        assert_eq!(c12.boundary(&VertexSet::range(0, 5)), VertexSet::new([0, 4]));

        let grid = generate::grid(&[10, 10]).unwrap();
        let id = |r: usize, c: usize| r * 10 + c;
        let block: VertexSet = (3..6).flat_map(|r| (3..6).map(move |c| id(r, c))).collect();
        let expected: VertexSet = block.iter().filter(|&v| v != id(4, 4)).collect();
        assert_eq!(grid.boundary(&block), expected);
    }

    #[test]
    fn k_boundary_examples() {
        let c12 = generate::cycle(12);
        let j = VertexSet::range(0, 6);
        assert_eq!(c12.k_boundary(&j, 1), c12.boundary(&j));
        assert_eq!(c12.k_boundary(&j, 2), VertexSet::new([0, 1, 4, 5]));
        assert!(c12.k_boundary(&c12.all(), 3).is_empty());
    }

    #[test]
    fn folner_quotient_examples() {
        let c100 = generate::cycle(100);
        assert_eq!(c100.folner_quotient(&c100.all()).unwrap(), ratio(0, 1));
        assert_eq!(c100.folner_quotient(&VertexSet::range(10, 15)).unwrap(), ratio(2, 5));
        let torus = generate::torus(&[10, 10]).unwrap();
        let square: VertexSet = (0..4).flat_map(|r| (0..4).map(move |c| r * 10 + c)).collect();
        assert_eq!(torus.folner_quotient(&square).unwrap(), ratio(12, 16));
        assert!(c100.folner_quotient(&VertexSet::empty()).is_err());
    }

    #[test]
    fn diameter_examples() {
        let c10 = generate::cycle(10);
        assert_eq!(c10.set_diameter(&VertexSet::singleton(3)), Diameter::Finite(0));
        assert_eq!(c10.set_diameter(&VertexSet::new([0, 5])), Diameter::Finite(5));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.set_diameter(&VertexSet::new([0, 2])), Diameter::Infinite);
        assert!(!Diameter::Infinite.at_most(usize::MAX));
    }

    #[test]
    fn distance_coloring_examples() {
        let p3 = generate::path(3);
        let c = p3.distance_coloring(1);
        assert_eq!(c.color_of, vec![1, 2, 1]);
        assert_eq!(generate::cycle(3).distance_coloring(1).num_colors, 3);
        let c9 = generate::cycle(9).distance_coloring(2);
        assert_eq!(c9.num_colors, 3);
        assert_eq!(c9.color_of, vec![1, 2, 3, 1, 2, 3, 1, 2, 3]);
        assert!(c9.verify(&generate::cycle(9)));
    }

    #[test]
    fn edge_list_dedups_and_rejects_loops() {
        let g = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert!(Graph::from_edges(2, [(1, 1)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn components_and_induced_components() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![VertexSet::new([0, 1, 2]), VertexSet::new([3, 4])]);
        assert_eq!(
            g.induced_components(&VertexSet::new([0, 2, 3, 4])),
            vec![VertexSet::singleton(0), VertexSet::singleton(2), VertexSet::new([3, 4])]
        );
        assert_eq!(g.component_ids(), vec![0, 0, 0, 1, 1]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_graph() -> impl Strategy<Value = Graph> {
            (1usize..=12).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |edges| {
                    Graph::from_edges(n, edges.into_iter().filter(|(u, v)| u != v)).unwrap()
                })
            })
        }

        fn graph_and_set() -> impl Strategy<Value = (Graph, VertexSet)> {
            small_graph().prop_flat_map(|g| {
                let n = g.vertex_count();
                proptest::collection::vec(any::<bool>(), n)
                    .prop_map(move |mask| (g.clone(), VertexSet::from_mask(&mask)))
            })
        }

        proptest! {
            #[test]
            fn boundary_nested_in_k_boundaries((g, set) in graph_and_set(), k in 1usize..4) {
                let b = g.boundary(&set);
                let bk = g.k_boundary(&set, k);
                let bk1 = g.k_boundary(&set, k + 1);
                prop_assert!(b.is_subset(&bk));
                prop_assert!(bk.is_subset(&bk1));
            }

            #[test]
            fn quotient_matches_brute_force((g, set) in graph_and_set()) {
                prop_assume!(!set.is_empty());
                let d = all_pairs(&g);
                let boundary = set.iter()
                    .filter(|&x| g.vertices().any(|y| !set.contains(y) && d[x][y] == Some(1)))
                    .count();
                prop_assert_eq!(g.folner_quotient(&set).unwrap(), ratio_usize(boundary, set.len()));
            }

            #[test]
            fn coloring_separates(g in small_graph(), r in 1usize..4) {
                let c = g.distance_coloring(r);
                let d = all_pairs(&g);
                for x in g.vertices() {
                    for y in g.vertices() {
                        if x != y && d[x][y].is_some_and(|dd| dd <= r) {
                            prop_assert_ne!(c.color_of[x], c.color_of[y]);
                        }
                    }
                }
                let max_ball = g.max_ball_size(r);
                prop_assert!(c.num_colors <= max_ball);
            }

            #[test]
            fn balls_nest_and_respect_growth(g in small_graph(), r in 0usize..4) {
                let dmax = g.degree_bound();
                let bound: usize = (0..=r).map(|i| dmax.pow(i as u32)).sum();
                for x in g.vertices() {
                    let b = g.ball(x, r).unwrap();
                    let b1 = g.ball(x, r + 1).unwrap();
                    prop_assert!(b.is_subset(&b1));
                    prop_assert!(b.len() <= bound.max(1));
                }
            }
        }
    }
}
