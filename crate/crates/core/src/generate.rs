//! Standard graph families used as test substrates. Tori and Cayley graphs
//! are vertex-transitive, so their uniform measure is invariant.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// The cycle `C_n`. `cycle(1)` is a single vertex and `cycle(2)` one edge.
pub fn cycle(n: usize) -> Graph {
    let edges = (0..n).filter_map(|i| {
        let j = (i + 1) % n;
        (i != j).then_some((i, j))
    });
    Graph::from_edges(n, edges).expect("cycle edges are valid")
}

/// The path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::from_edges(n, edges).expect("complete graph edges are valid")
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are valid")
}

fn lattice(sides: &[usize], wrap: bool) -> Result<Graph> {
    if sides.is_empty() || sides.contains(&0) {
        return Err(Error::input("lattice side lengths must be positive"));
    }
    let n: usize = sides.iter().product();
    // Row-major: `[rows, cols]` puts (r, c) at `r * cols + c`.
    let mut strides = vec![1usize; sides.len()];
    for i in (0..sides.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sides[i + 1];
    }
    let dims: Vec<usize> = sides.to_vec();
    let mut edges = Vec::new();
    for v in 0..n {
        for (axis, &side) in dims.iter().enumerate() {
            let stride = strides[axis];
            let coord = (v / stride) % side;
            let next = if coord + 1 < side {
                Some(v + stride)
            } else if wrap && side > 1 {
                Some(v - coord * stride)
            } else {
                None
            };
            if let Some(w) = next {
                if w != v {
                    edges.push((v, w));
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Torus `Z_{s_1} x ... x Z_{s_d}` with nearest-neighbour edges.
pub fn torus(sides: &[usize]) -> Result<Graph> {
    lattice(sides, true)
}

/// Grid with free boundary.
pub fn grid(sides: &[usize]) -> Result<Graph> {
    lattice(sides, false)
}

/// Right Cayley graph `g ~ g*s` of a finite group given by its multiplication
/// table, for a symmetric generator list not containing the identity.
pub fn cayley(table: &[Vec<usize>], generators: &[usize]) -> Result<Graph> {
    let n = table.len();
    if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        return Err(Error::input("multiplication table must be square with entries in range"));
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| Error::input("multiplication table has no identity"))?;
    for &s in generators {
        if s >= n {
            return Err(Error::InvalidVertex { vertex: s, count: n });
        }
        if s == identity {
            return Err(Error::input("generator list contains the identity"));
        }
        let inverse = (0..n)
            .find(|&t| table[s][t] == identity)
            .ok_or_else(|| Error::input(format!("generator {s} has no inverse")))?;
        if !generators.contains(&inverse) {
            return Err(Error::input(format!(
                "generator list is not symmetric: {s} present, inverse {inverse} missing"
            )));
        }
    }
    let edges = (0..n).flat_map(|g| generators.iter().map(move |&s| (g, table[g][s])));
    Graph::from_edges(n, edges)
}

/// Multiplication table of the cyclic group `Z_n`.
pub fn cyclic_group_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// The ball of radius `depth` in the `degree`-regular tree, rooted at 0.
pub fn regular_tree(degree: usize, depth: usize) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut frontier = vec![0usize];
    let mut next_id = 1;
    for level in 0..depth {
        let mut next = Vec::new();
        for &v in &frontier {
            let children = if level == 0 { degree } else { degree.saturating_sub(1) };
            for _ in 0..children {
                edges.push((v, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Graph::from_edges(next_id, edges).expect("tree edges are valid")
}

/// Disjoint union, relabelling `b` after `a`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.vertex_count();
    let edges = a.edges().chain(b.edges().map(|(u, v)| (u + shift, v + shift)));
    Graph::from_edges(shift + b.vertex_count(), edges).expect("union edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_three_is_a_triangle() {
        let g = cycle(3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.vertices().all(|v| g.degree(v) == 2));
    }

    #[test]
    fn small_torus_is_four_regular() {
        let g = torus(&[4, 4]).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert!(g.vertices().all(|v| g.degree(v) == 4));
        assert_eq!(g.edge_count(), 32);
    }

    #[test]
    fn grid_indexing_is_row_major() {
        let g = grid(&[3, 4]).unwrap();
        // vertex (1, 1) = 5 has neighbours (0,1)=1, (1,0)=4, (1,2)=6, (2,1)=9
        assert_eq!(g.neighbors(5), &[1, 4, 6, 9]);
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn cayley_of_cyclic_group_is_a_cycle() {
        let t = cyclic_group_table(7);
        assert_eq!(cayley(&t, &[1, 6]).unwrap(), cycle(7));
        assert!(cayley(&t, &[1]).is_err());
        assert!(cayley(&t, &[0, 1, 6]).is_err());
    }

    #[test]
    fn regular_tree_sizes() {
        let t = regular_tree(3, 2);
        assert_eq!(t.vertex_count(), 1 + 3 + 6);
        assert_eq!(t.degree(0), 3);
        assert_eq!(t.degree(1), 3);
        assert_eq!(t.degree(9), 1);
    }
}
