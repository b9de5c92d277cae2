//! Packings: families of pairwise disjoint tiles of bounded diameter, and the
//! operations on them: restriction `J_F`, separation, shrink and join.

use crate::error::{Error, Result};
use crate::graph::{Diameter, Graph, Vertex, VertexSet};

/// Pairwise disjoint, nonempty tiles with a common diameter bound. Tiles are
/// kept in canonical order (by smallest member) so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Packing {
    tiles: Vec<VertexSet>,
    diameter_bound: usize,
}

impl Packing {
    pub fn new(mut tiles: Vec<VertexSet>, diameter_bound: usize) -> Self {
        tiles.sort();
        Packing {
            tiles,
            diameter_bound,
        }
    }

    pub fn empty(diameter_bound: usize) -> Self {
        Packing {
            tiles: Vec::new(),
            diameter_bound,
        }
    }

    /// Validating constructor.
    pub fn checked(g: &Graph, tiles: Vec<VertexSet>, diameter_bound: usize) -> Result<Self> {
        let p = Packing::new(tiles, diameter_bound);
        for t in &p.tiles {
            g.check_set(t)?;
        }
        if !validate_packing(g, &p) {
            return Err(Error::input(format!(
                "tiles are not a packing with diameter bound {diameter_bound}"
            )));
        }
        Ok(p)
    }

    pub fn tiles(&self) -> &[VertexSet] {
        &self.tiles
    }

    pub fn into_tiles(self) -> Vec<VertexSet> {
        self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn diameter_bound(&self) -> usize {
        self.diameter_bound
    }

    pub fn with_bound(mut self, diameter_bound: usize) -> Self {
        self.diameter_bound = diameter_bound;
        self
    }

    /// Tile index per vertex, `None` for uncovered vertices.
    pub fn tile_index(&self, n: usize) -> Vec<Option<usize>> {
        let mut idx = vec![None; n];
        for (i, t) in self.tiles.iter().enumerate() {
            for v in t.iter() {
                idx[v] = Some(i);
            }
        }
        idx
    }

    pub fn covered_count(&self) -> usize {
        self.tiles.iter().map(VertexSet::len).sum()
    }

    pub fn covered_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.tiles.iter().flat_map(VertexSet::iter) {
            m[v] = true;
        }
        m
    }

    pub fn max_tile_diameter(&self, g: &Graph) -> Diameter {
        let mut bfs = g.bfs();
        self.tiles
            .iter()
            .map(|t| g.set_diameter_with(&mut bfs, t))
            .max()
            .unwrap_or(Diameter::Finite(0))
    }

    /// Same tile of this packing (both covered).
    pub fn same_tile(&self, index: &[Option<usize>], x: Vertex, y: Vertex) -> bool {
        matches!((index[x], index[y]), (Some(a), Some(b)) if a == b)
    }
}

/// Disjointness, nonempty tiles and the diameter bound.
pub fn validate_packing(g: &Graph, p: &Packing) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for t in p.tiles() {
        if t.is_empty() || g.check_set(t).is_err() {
            return false;
        }
        for v in t.iter() {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    let mut bfs = g.bfs();
    p.tiles()
        .iter()
        .all(|t| g.diameter_at_most_with(&mut bfs, t, p.diameter_bound()))
}

/// `[P]`, the union of the tiles.
pub fn covered_set(p: &Packing) -> VertexSet {
    VertexSet::new(p.tiles().iter().flat_map(VertexSet::iter))
}

/// `J_F`: the union of tiles entirely contained in `j`.
pub fn restrict_inside(p: &Packing, j: &VertexSet) -> VertexSet {
    VertexSet::new(
        p.tiles()
            .iter()
            .filter(|t| t.is_subset(j))
            .flat_map(VertexSet::iter),
    )
}

/// `|J_F|` without materialising the set.
pub fn restrict_inside_count(p: &Packing, inside: &[bool]) -> usize {
    p.tiles()
        .iter()
        .filter(|t| t.iter().all(|v| inside[v]))
        .map(VertexSet::len)
        .sum()
}

/// Whether vertices in different tiles are always at distance greater than `s`.
pub fn is_s_separated(g: &Graph, p: &Packing, s: usize) -> bool {
    if s == 0 || p.len() < 2 {
        return true;
    }
    let index = p.tile_index(g.vertex_count());
    let mut bfs = g.bfs();
    p.tiles().iter().enumerate().all(|(i, t)| {
        bfs.run(g, t.iter(), Some(s), None)
            .iter()
            .all(|&v| index[v].is_none_or(|j| j == i))
    })
}

/// `F^{-s}`: the connected components of the vertices lying at distance more
/// than `s` from the outside of their own tile. On 1-separated packings this
/// is the same as measuring distance to the complement of `[F]`.
pub fn shrink(g: &Graph, p: &Packing, s: usize) -> Packing {
    let n = g.vertex_count();
    let mut in_tile = vec![false; n];
    let mut depth: Vec<usize> = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for t in p.tiles() {
        for v in t.iter() {
            in_tile[v] = true;
            depth[v] = usize::MAX;
        }
        // distance to the complement of `t`, via paths whose interior stays in `t`
        queue.clear();
        for v in t.iter() {
            if g.neighbors(v).iter().any(|&w| !in_tile[w]) {
                depth[v] = 1;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = depth[v];
            if dv > s {
                continue;
            }
            for &w in g.neighbors(v) {
                if in_tile[w] && depth[w] == usize::MAX {
                    depth[w] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        let deep: VertexSet = t.iter().filter(|&v| depth[v] > s).collect();
        if !deep.is_empty() {
            out.extend(g.induced_components(&deep));
        }
        for v in t.iter() {
            in_tile[v] = false;
        }
    }
    Packing::new(out, p.diameter_bound())
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// `F ∨ F'`: the finest partition of `[F] ∪ [F']` that keeps every tile of
/// either packing together and every edge between covered vertices inside
/// one part.
pub fn join(g: &Graph, f: &Packing, fp: &Packing) -> Packing {
    let tiles = join_tiles(g, f, fp);
    let bound = {
        let mut bfs = g.bfs();
        tiles
            .iter()
            .filter_map(|t| g.set_diameter_with(&mut bfs, t).finite())
            .max()
            .unwrap_or(0)
    };
    Packing::new(tiles, bound)
}

/// Join that fails when some part has diameter above `cap`.
pub fn join_capped(g: &Graph, f: &Packing, fp: &Packing, cap: usize) -> Result<Packing> {
    let tiles = join_tiles(g, f, fp);
    let mut bfs = g.bfs();
    for t in &tiles {
        if !g.diameter_at_most_with(&mut bfs, t, cap) {
            return Err(Error::UnboundedComponent {
                witness: t.first().unwrap_or(0),
                diameter: g.set_diameter_with(&mut bfs, t).to_string(),
                cap,
            });
        }
    }
    Ok(Packing::new(tiles, cap))
}

fn join_tiles(g: &Graph, f: &Packing, fp: &Packing) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut covered = f.covered_mask(n);
    for v in fp.tiles().iter().flat_map(VertexSet::iter) {
        covered[v] = true;
    }
    let mut sets = DisjointSets::new(n);
    for t in f.tiles().iter().chain(fp.tiles()) {
        if let Some(first) = t.first() {
            for v in t.iter() {
                sets.union(first, v);
            }
        }
    }
    for (u, v) in g.edges() {
        if covered[u] && covered[v] {
            sets.union(u, v);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Vertex>> = Default::default();
    for v in (0..n).filter(|&v| covered[v]) {
        let root = sets.find(v);
        groups.entry(root).or_default().push(v);
    }
    groups.into_values().map(VertexSet::from_sorted).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn p(tiles: &[&[Vertex]], k: usize) -> Packing {
        Packing::new(tiles.iter().map(|t| VertexSet::new(t.iter().copied())).collect(), k)
    }

    #[test]
    fn validation_examples() {
        let g = generate::cycle(10);
        assert!(validate_packing(&g, &Packing::empty(0)));
        assert!(!validate_packing(&g, &p(&[&[0, 1], &[1, 2]], 5)));
        assert!(!validate_packing(&g, &p(&[&[0, 5]], 4)));
        assert!(validate_packing(&g, &p(&[&[0, 5]], 5)));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!validate_packing(&two, &p(&[&[0, 2]], 100)));
    }

    #[test]
    fn covered_and_restricted_sets() {
        let g = generate::cycle(12);
        assert!(covered_set(&Packing::empty(0)).is_empty());
        assert_eq!(covered_set(&p(&[&[0, 1], &[5]], 1)), VertexSet::new([0, 1, 5]));
        let part = p(&[&[0, 1, 2, 3, 4, 5], &[6, 7, 8, 9, 10, 11]], 5);
        assert_eq!(covered_set(&part), g.all());
        assert_eq!(restrict_inside(&part, &g.all()), g.all());
        assert!(restrict_inside(&p(&[&[0, 1, 2, 3, 4]], 4), &VertexSet::range(0, 4)).is_empty());
        let pairs = p(&[&[0, 1], &[2, 3], &[4, 5]], 1);
        assert_eq!(restrict_inside(&pairs, &VertexSet::range(0, 5)), VertexSet::range(0, 4));
    }

    #[test]
    fn separation_examples() {
        let g = generate::cycle(10);
        assert!(is_s_separated(&g, &p(&[&[0, 1, 2]], 2), 7));
        assert!(!is_s_separated(&g, &p(&[&[0], &[1]], 0), 1));
        let far = p(&[&[0, 1], &[5, 6]], 1);
        assert!(is_s_separated(&g, &far, 3));
        assert!(!is_s_separated(&g, &far, 4));
    }

    #[test]
    fn shrink_examples() {
        let c12 = generate::cycle(12);
        let full = p(&[&(0..12).collect::<Vec<_>>()], 6);
        assert_eq!(shrink(&c12, &full, 3), full);
        assert_eq!(shrink(&c12, &p(&[&[0, 1, 2, 3, 4, 5]], 5), 1), p(&[&[1, 2, 3, 4]], 5));
        assert!(shrink(&c12, &p(&[&[0, 1]], 1), 1).is_empty());
        let halves = p(&[&[0, 1, 2, 3, 4, 5], &[6, 7, 8, 9, 10, 11]], 5);
        assert_eq!(shrink(&c12, &halves, 1), p(&[&[1, 2, 3, 4], &[7, 8, 9, 10]], 5));
    }

    #[test]
    fn join_examples() {
        let c20 = generate::cycle(20);
        let f = p(&[&[0, 1, 2]], 2);
        assert_eq!(join(&c20, &f, &Packing::empty(0)).tiles(), f.tiles());
        let fp = p(&[&[9, 10]], 1);
        assert_eq!(join(&c20, &f, &fp).tiles(), p(&[&[0, 1, 2], &[9, 10]], 0).tiles());
        let chained = join(&c20, &p(&[&[0, 1], &[3, 4]], 1), &p(&[&[2]], 0));
        assert_eq!(chained.tiles(), &[VertexSet::range(0, 5)]);
        assert_eq!(chained.diameter_bound(), 4);
    }

    #[test]
    fn join_cap_reports_component() {
        let c20 = generate::cycle(20);
        let f = p(&[&[0, 1], &[3, 4]], 1);
        let err = join_capped(&c20, &f, &p(&[&[2]], 0), 3).unwrap_err();
        assert!(matches!(err, Error::UnboundedComponent { witness: 0, cap: 3, .. }));
    }

    /// The join of a 1-separated packing with a far-separated one can reach
    /// diameter `2r + t + 2`: an `F`-tile one step away from an `F'`-tile
    /// extends `r` further out on each side.
    #[test]
    fn join_diameter_can_exceed_two_r_plus_t() {
        let g = generate::path(11);
        let f = p(&[&[2, 3, 4], &[6, 7, 8]], 2);
        let fp = p(&[&[5]], 0);
        assert!(is_s_separated(&g, &f, 1));
        let joined = join(&g, &f, &fp);
        assert_eq!(joined.tiles(), &[VertexSet::range(2, 9)]);
        assert_eq!(joined.max_tile_diameter(&g), Diameter::Finite(2 * 2 + 2));
    }
}
