//! Witness families `p_n(x, .)`: one finitely supported probability
//! distribution per vertex, with exact rational weights.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{Diameter, Graph, Vertex};
use crate::rational::{int, ratio_usize, Rational};

/// A probability distribution on vertices: sorted by vertex, positive weights.
pub type Distribution = Vec<(Vertex, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFamily {
    n: usize,
    dist: Vec<Distribution>,
    support_radius: usize,
}

impl WitnessFamily {
    /// Zero weights are dropped. Every distribution must be nonnegative and
    /// sum to exactly 1; the support radius is only checked by
    /// [`validate_witness`].
    pub fn new(n: usize, dist: Vec<Distribution>, support_radius: usize) -> Result<Self> {
        let dist = dist
            .into_iter()
            .enumerate()
            .map(|(x, d)| normalize(d).map_err(|e| Error::input(format!("vertex {x}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WitnessFamily {
            n,
            dist,
            support_radius,
        })
    }

    pub fn target(&self) -> usize {
        self.n
    }

    pub fn with_target(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn support_radius(&self) -> usize {
        self.support_radius
    }

    pub fn vertex_count(&self) -> usize {
        self.dist.len()
    }

    pub fn dist(&self, x: Vertex) -> &[(Vertex, Rational)] {
        &self.dist[x]
    }

    pub fn weight(&self, x: Vertex, y: Vertex) -> Rational {
        match self.dist[x].binary_search_by_key(&y, |e| e.0) {
            Ok(i) => self.dist[x][i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn max_support_size(&self) -> usize {
        self.dist.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Least common denominator of all weights, if it fits in `usize`.
    pub fn common_denominator(&self) -> Option<usize> {
        let mut lcm = num_bigint::BigInt::one();
        for d in &self.dist {
            for (_, w) in d {
                lcm = lcm.lcm(w.denom());
            }
        }
        lcm.to_usize()
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.dist.len() != g.vertex_count() {
            return Err(Error::input(format!(
                "witness has {} vertices, graph has {}",
                self.dist.len(),
                g.vertex_count()
            )));
        }
        for d in &self.dist {
            for &(y, _) in d {
                g.check_vertex(y)?;
            }
        }
        Ok(())
    }
}

fn normalize(d: Distribution) -> std::result::Result<Distribution, String> {
    let mut acc: BTreeMap<Vertex, Rational> = BTreeMap::new();
    for (y, w) in d {
        if w.is_negative() {
            return Err(format!("negative weight at {y}"));
        }
        *acc.entry(y).or_insert_with(Rational::zero) += w;
    }
    let total: Rational = acc.values().sum();
    if !total.is_one() {
        return Err(format!("weights sum to {total}, not 1"));
    }
    Ok(acc.into_iter().filter(|(_, w)| !w.is_zero()).collect())
}

/// `sum_y |p(y) - q(y)|`. Inputs may be unsorted and contain repeats.
pub fn l1_distance(p: &[(Vertex, Rational)], q: &[(Vertex, Rational)]) -> Result<Rational> {
    let p = normalize(p.to_vec()).map_err(Error::input)?;
    let q = normalize(q.to_vec()).map_err(Error::input)?;
    Ok(l1_sorted(&p, &q))
}

/// L1 distance of two sorted, positive distributions.
pub(crate) fn l1_sorted(p: &[(Vertex, Rational)], q: &[(Vertex, Rational)]) -> Rational {
    let (mut i, mut j) = (0, 0);
    let mut total = Rational::zero();
    while i < p.len() || j < q.len() {
        match (p.get(i), q.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                total += (&a.1 - &b.1).abs();
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                total += &a.1;
                i += 1;
            }
            (Some(a), None) => {
                total += &a.1;
                i += 1;
            }
            (_, Some(b)) => {
                total += &b.1;
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    total
}

/// `p(x) = uniform on B_r(x)`, with target `n = 1` until set.
pub fn uniform_ball_witness(g: &Graph, r: usize) -> WitnessFamily {
    let mut bfs = g.bfs();
    let dist = g
        .vertices()
        .map(|x| {
            let mut ball = bfs.run(g, [x], Some(r), None).to_vec();
            ball.sort_unstable();
            let w = ratio_usize(1, ball.len());
            ball.into_iter().map(|y| (y, w.clone())).collect()
        })
        .collect();
    WitnessFamily {
        n: 1,
        dist,
        support_radius: r,
    }
}

/// Point masses `p(x) = delta_x`.
pub fn point_mass_witness(g: &Graph) -> WitnessFamily {
    WitnessFamily {
        n: 1,
        dist: g.vertices().map(|x| vec![(x, Rational::one())]).collect(),
        support_radius: 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub target: usize,
    pub declared_radius: usize,
    pub max_neighbor_l1: Rational,
    /// Edge attaining the maximum, if the graph has edges.
    pub worst_edge: Option<(Vertex, Vertex)>,
    pub max_support_radius: Diameter,
    pub sums_ok: bool,
}

impl WitnessReport {
    /// `max L1 < 1/n`; `n = 0` is read as "no quality requirement".
    pub fn l1_ok(&self) -> bool {
        self.target == 0 || &self.max_neighbor_l1 * int(self.target) < Rational::one()
    }

    pub fn radius_ok(&self) -> bool {
        self.max_support_radius.at_most(self.declared_radius)
    }

    pub fn passes(&self) -> bool {
        self.sums_ok && self.l1_ok() && self.radius_ok()
    }

    /// Largest `n` the family certifies: the largest integer with
    /// `max L1 < 1/n`, or `None` when the L1 maximum is zero.
    pub fn certified_level(&self) -> Option<usize> {
        if self.max_neighbor_l1.is_zero() {
            return None;
        }
        let inv = self.max_neighbor_l1.recip();
        let floor = inv.floor().to_integer().to_usize().unwrap_or(usize::MAX);
        Some(if inv.is_integer() { floor - 1 } else { floor })
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max_neighbor_l1={} max_support_radius={} sums_ok={}",
            self.max_neighbor_l1, self.max_support_radius, self.sums_ok
        )
    }
}

/// Exact maximum neighbor L1 distance and support radius. Never fails on a
/// family that matches the graph; failures are carried in the report.
pub fn validate_witness(g: &Graph, w: &WitnessFamily) -> Result<WitnessReport> {
    w.check_graph(g)?;
    let sums_ok = w.dist.iter().all(|d| d.iter().map(|e| &e.1).sum::<Rational>().is_one());
    let mut max_l1 = Rational::zero();
    let mut worst_edge = None;
    for (x, y) in g.edges() {
        let d = l1_sorted(&w.dist[x], &w.dist[y]);
        if worst_edge.is_none() || d > max_l1 {
            max_l1 = d;
            worst_edge = Some((x, y));
        }
    }
    let mut radius = Diameter::Finite(0);
    let mut bfs = g.bfs();
    for x in g.vertices() {
        let support = &w.dist[x];
        if support.iter().all(|&(y, _)| y == x) {
            continue;
        }
        bfs.run(g, [x], None, None);
        for &(y, _) in support {
            match bfs.dist(y) {
                Some(d) => {
                    if let Diameter::Finite(r) = radius {
                        radius = Diameter::Finite(r.max(d));
                    }
                }
                None => radius = Diameter::Infinite,
            }
        }
    }
    Ok(WitnessReport {
        target: w.n,
        declared_radius: w.support_radius,
        max_neighbor_l1: max_l1,
        worst_edge,
        max_support_radius: radius,
        sums_ok,
    })
}

/// Moves every weight onto the grid `(1/M) Z`: floor each entry, then hand
/// the leftover units to the largest remainders (ties: smaller vertex id).
pub fn rationalize(w: &WitnessFamily, m: usize) -> Result<WitnessFamily> {
    let need = w.max_support_size();
    if m < need.max(1) {
        return Err(Error::input(format!(
            "grid 1/{m} is too coarse for supports of size {need}"
        )));
    }
    let big_m = int(m);
    let dist = w
        .dist
        .iter()
        .map(|d| {
            let mut units: Vec<usize> = Vec::with_capacity(d.len());
            let mut rems: Vec<(Rational, Vertex, usize)> = Vec::with_capacity(d.len());
            for (i, (y, p)) in d.iter().enumerate() {
                let scaled = p * &big_m;
                let fl = scaled.floor();
                units.push(fl.to_integer().to_usize().expect("weight at most 1"));
                rems.push((scaled - fl, *y, i));
            }
            let missing = m - units.iter().sum::<usize>();
            rems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for (_, _, i) in rems.into_iter().take(missing) {
                units[i] += 1;
            }
            d.iter()
                .zip(units)
                .filter(|(_, u)| *u > 0)
                .map(|((y, _), u)| (*y, ratio_usize(u, m)))
                .collect()
        })
        .collect();
    Ok(WitnessFamily {
        n: w.n,
        dist,
        support_radius: w.support_radius,
    })
}

/// `Q_r(p(x))` for the least `r` whose mass reaches `1 - epsilon/3`.
pub fn truncate_support(
    g: &Graph,
    w: &WitnessFamily,
    x: Vertex,
    epsilon: &Rational,
) -> Result<Vec<Vertex>> {
    w.check_graph(g)?;
    g.check_vertex(x)?;
    let threshold = Rational::one() - epsilon / int(3);
    let dists = g.distances_from(x);
    let mut by_radius: Vec<(usize, Vertex, &Rational)> = w.dist[x]
        .iter()
        .map(|(y, p)| (dists[*y].unwrap_or(usize::MAX), *y, p))
        .collect();
    by_radius.sort_unstable_by_key(|e| (e.0, e.1));
    let mut mass = Rational::zero();
    let mut taken = 0;
    if threshold > mass {
        while taken < by_radius.len() {
            let r = by_radius[taken].0;
            while taken < by_radius.len() && by_radius[taken].0 == r {
                mass += by_radius[taken].2;
                taken += 1;
            }
            if mass >= threshold {
                break;
            }
        }
    } else {
        // Q_0: the support restricted to x itself
        while taken < by_radius.len() && by_radius[taken].0 == 0 {
            taken += 1;
        }
    }
    let mut out: Vec<Vertex> = by_radius[..taken].iter().map(|e| e.1).collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rational::ratio;

    fn uniform(members: impl IntoIterator<Item = Vertex>) -> Distribution {
        let v: Vec<Vertex> = members.into_iter().collect();
        let w = ratio_usize(1, v.len());
        v.into_iter().map(|y| (y, w.clone())).collect()
    }

    #[test]
    fn l1_examples() {
        let p = uniform(0..5);
        assert_eq!(l1_distance(&p, &p).unwrap(), Rational::zero());
        assert_eq!(l1_distance(&uniform([0]), &uniform([1])).unwrap(), int(2));
        assert_eq!(l1_distance(&p, &uniform(1..6)).unwrap(), ratio(2, 5));
        assert!(l1_distance(&[(0, ratio(1, 2))], &p).is_err());
    }

    #[test]
    fn uniform_ball_on_cycles() {
        let g = generate::cycle(100);
        let rep = validate_witness(&g, &uniform_ball_witness(&g, 10)).unwrap();
        assert_eq!(rep.max_neighbor_l1, ratio(2, 21));
        assert_eq!(rep.max_support_radius, Diameter::Finite(10));
        for (m, r) in [(7, 2), (13, 5), (30, 3)] {
            let g = generate::cycle(m);
            let rep = validate_witness(&g, &uniform_ball_witness(&g, r)).unwrap();
            assert_eq!(rep.max_neighbor_l1, ratio(2, 2 * r as i64 + 1), "C_{m} r={r}");
        }
    }

    #[test]
    fn point_masses_and_single_vertex() {
        let g = generate::path(3);
        let rep = validate_witness(&g, &point_mass_witness(&g)).unwrap();
        assert_eq!(rep.max_neighbor_l1, int(2));
        assert!(!rep.with_target(1).passes());
        let one = Graph::edgeless(1);
        let rep = validate_witness(&one, &uniform_ball_witness(&one, 3)).unwrap();
        assert_eq!(rep.max_neighbor_l1, Rational::zero());
    }

    impl WitnessReport {
        fn with_target(mut self, n: usize) -> Self {
            self.target = n;
            self
        }
    }

    #[test]
    fn certified_level_is_strict() {
        let g = generate::cycle(100);
        let rep = validate_witness(&g, &uniform_ball_witness(&g, 10)).unwrap();
        // 2/21 < 1/10 but not < 1/11
        assert_eq!(rep.certified_level(), Some(10));
        let mut rep = rep;
        rep.max_neighbor_l1 = ratio(1, 4);
        assert_eq!(rep.certified_level(), Some(3));
    }

    #[test]
    fn constructor_rejects_bad_sums() {
        assert!(WitnessFamily::new(1, vec![vec![(0, ratio(1, 2))]], 0).is_err());
        assert!(WitnessFamily::new(1, vec![vec![(0, ratio(3, 2)), (1, ratio(-1, 2))]], 1).is_err());
        let w = WitnessFamily::new(1, vec![vec![(0, ratio(1, 2)), (0, ratio(1, 2))]], 0).unwrap();
        assert_eq!(w.dist(0), &[(0, int(1))]);
    }

    #[test]
    fn rationalize_examples() {
        let third = WitnessFamily::new(1, vec![uniform(0..3)], 2).unwrap();
        assert_eq!(rationalize(&third, 3).unwrap(), third);
        let w = WitnessFamily::new(
            1,
            vec![vec![(0, ratio(1, 2)), (1, ratio(3, 10)), (2, ratio(1, 5))]],
            2,
        )
        .unwrap();
        assert_eq!(rationalize(&w, 10).unwrap(), w);
        assert!(rationalize(&w, 2).is_err());
        // (1/3, 1/3, 1/3) on the grid 1/4: one unit each, the spare unit goes to vertex 0
        let r = rationalize(&third, 4).unwrap();
        assert_eq!(r.dist(0), &[(0, ratio(1, 2)), (1, ratio(1, 4)), (2, ratio(1, 4))]);
    }

    #[test]
    fn rationalize_moves_little_mass() {
        let g = generate::torus(&[7, 7]).unwrap();
        let w = uniform_ball_witness(&g, 2);
        for m in [13, 20, 97] {
            let r = rationalize(&w, m).unwrap();
            let bound = ratio_usize(2 * w.max_support_size(), m);
            for x in g.vertices() {
                assert!(l1_sorted(w.dist(x), r.dist(x)) <= bound);
                assert!(r.dist(x).iter().all(|(_, p)| (p * int(m)).is_integer()));
            }
        }
    }

    #[test]
    fn truncate_support_examples() {
        let g = generate::cycle(100);
        let w = uniform_ball_witness(&g, 5);
        let x = 50;
        // threshold 1 - 1/11 = 10/11 is only reached by the whole ball
        let q = truncate_support(&g, &w, x, &ratio(3, 11)).unwrap();
        assert_eq!(q, g.ball(x, 5).unwrap().into_vec());
        // threshold 8/11 is reached at r = 4 (mass 9/11)
        let q = truncate_support(&g, &w, x, &ratio(9, 11)).unwrap();
        assert_eq!(q, g.ball(x, 4).unwrap().into_vec());
        let q = truncate_support(&g, &w, x, &int(3)).unwrap();
        assert_eq!(q, vec![x]);
        let pm = point_mass_witness(&g);
        assert_eq!(truncate_support(&g, &pm, 7, &ratio(1, 2)).unwrap(), vec![7]);
    }
}
