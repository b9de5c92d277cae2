//! Random-instance sweeps for the packing algebra and the multipacking
//! round trip. Instances are small enough for brute-force distances.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use tiler_core::generate;
use tiler_core::multipack::{tightness_defect, witness_from_multipacking};
use tiler_core::packing::{is_s_separated, join, shrink, validate_packing};
use tiler_core::rational::{exact, int, pow_usize};
use tiler_core::rng::{sample_rng, SampleRng};
use tiler_core::witness::validate_witness;
use tiler_core::{Graph, Multipacking, Packing, Rational, Vertex, VertexSet};

use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub anchor: String,
    pub checked: usize,
    pub violations: usize,
    pub first: Option<String>,
}

impl Property {
    fn new(name: &str, anchor: &str) -> Self {
        Property {
            name: name.to_string(),
            anchor: anchor.to_string(),
            checked: 0,
            violations: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(example());
            }
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub instances: usize,
    pub properties: Vec<Property>,
}

impl Sweep {
    pub fn holds(&self) -> bool {
        self.properties.iter().all(Property::holds)
    }

    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// One check row per property; `informational` properties are reported
    /// as metrics only.
    pub fn report_into(&self, prefix: &str, report: &mut Report, informational: &[&str]) {
        report.metric(format!("{prefix}.instances"), self.instances);
        for p in &self.properties {
            let detail = match &p.first {
                Some(ex) => format!("{} of {} violate; first: {ex}", p.violations, p.checked),
                None => format!("0 of {} violate", p.checked),
            };
            if informational.contains(&p.name.as_str()) {
                report.metric(format!("{prefix}.{}", p.name), detail);
            } else {
                report.check(format!("{prefix}.{}", p.name), &p.anchor, p.holds(), detail);
            }
        }
    }
}

/// A connected graph on at most `max_n` vertices with degrees at most 4
/// and at least one vertex of degree 2 or more.
pub fn random_graph(rng: &mut SampleRng, max_n: usize) -> Graph {
    let max_n = max_n.max(6);
    match rng.random_range(0..5) {
        0 => generate::cycle(rng.random_range(3..=max_n)),
        1 => generate::path(rng.random_range(3..=max_n)),
        2 => {
            let a = rng.random_range(2..=6);
            let b = rng.random_range(2..=(max_n / a).max(2));
            generate::grid(&[a, b]).expect("valid sides")
        }
        3 => {
            let a = rng.random_range(3..=5);
            let b = rng.random_range(3..=(max_n / a).max(3));
            generate::torus(&[a, b]).expect("valid sides")
        }
        _ => {
            // random tree plus a few extra edges, degrees capped at 4
            let n = rng.random_range(4..=max_n);
            let mut deg = vec![0usize; n];
            let mut edges = Vec::new();
            for v in 1..n {
                let choices: Vec<Vertex> = (0..v).filter(|&u| deg[u] < 4).collect();
                let u = *choices.choose(rng).expect("a vertex below degree 4 exists");
                edges.push((u, v));
                deg[u] += 1;
                deg[v] += 1;
            }
            for _ in 0..rng.random_range(0..=n / 3) {
                let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
                if u != v && deg[u] < 4 && deg[v] < 4 && !edges.contains(&(u.min(v), u.max(v))) && !edges.contains(&(u.max(v), u.min(v))) {
                    edges.push((u, v));
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            Graph::from_edges(n, edges).expect("valid edges")
        }
    }
}

/// Partition of `V` into connected pieces grown around random centers, each
/// inside a ball of radius `k / 2`, so of diameter at most `k`.
pub fn random_partition(g: &Graph, rng: &mut SampleRng, k: usize) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut taken = vec![false; n];
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(rng);
    let mut pieces = Vec::new();
    for c in order {
        if taken[c] {
            continue;
        }
        let dist = g.distances_from(c);
        let cap = rng.random_range(1..=n);
        let mut piece = vec![c];
        taken[c] = true;
        let mut frontier = vec![c];
        while let Some(i) = (!frontier.is_empty()).then(|| rng.random_range(0..frontier.len())) {
            if piece.len() >= cap {
                break;
            }
            let v = frontier.swap_remove(i);
            for &w in g.neighbors(v) {
                if !taken[w] && dist[w].is_some_and(|d| d <= k / 2) && piece.len() < cap {
                    taken[w] = true;
                    piece.push(w);
                    frontier.push(w);
                }
            }
        }
        pieces.push(VertexSet::new(piece));
    }
    pieces
}

/// A packing of some of the partition pieces, each kept with probability
/// `keep`.
pub fn random_packing(g: &Graph, rng: &mut SampleRng, k: usize, keep: f64) -> Packing {
    let tiles = random_partition(g, rng, k).into_iter().filter(|_| rng.random_bool(keep)).collect();
    Packing::new(tiles, k)
}

/// A 1-separated packing: random pieces kept greedily when no kept piece is
/// adjacent.
pub fn random_separated_packing(g: &Graph, rng: &mut SampleRng, k: usize) -> Packing {
    let n = g.vertex_count();
    let mut pieces = random_partition(g, rng, k);
    pieces.shuffle(rng);
    let mut blocked = vec![false; n];
    let mut kept = Vec::new();
    for p in pieces {
        if p.iter().any(|v| blocked[v]) || !rng.random_bool(0.8) {
            continue;
        }
        for v in p.iter() {
            blocked[v] = true;
            g.neighbors(v).iter().for_each(|&w| blocked[w] = true);
        }
        kept.push(p);
    }
    Packing::new(kept, k)
}

fn max_diameter(g: &Graph, p: &Packing) -> usize {
    p.max_tile_diameter(g).finite().expect("tiles are connected")
}

fn min_cross_distance(g: &Graph, p: &Packing) -> Option<usize> {
    let idx = p.tile_index(g.vertex_count());
    let mut best: Option<usize> = None;
    for t in p.tiles() {
        for x in t.iter() {
            let d = g.distances_from(x);
            for (y, dy) in d.iter().enumerate() {
                if let (Some(dy), Some(j)) = (dy, idx[y]) {
                    if Some(j) != idx[x] {
                        best = Some(best.map_or(*dy, |b| b.min(*dy)));
                    }
                }
            }
        }
    }
    best
}

/// Shrinking: separation, diameter bound and the defect bound `d^(s+1)`.
pub fn shrink_sweep(instances: usize, seed: u64) -> Sweep {
    let mut sep = Property::new("shrink_separated", "F^-s is s-separated");
    let mut sep_cross = Property::new(
        "shrink_separated_across_tiles",
        "parts of different tiles of F^-s are more than s apart",
    );
    let mut diam = Property::new("shrink_diameter", "tiles of F^-s have diameter <= k");
    let mut defect = Property::new(
        "shrink_defect",
        "F_i 1-separated and eps-tight => F_i^-s is d^(s+1) eps-tight",
    );
    for i in 0..instances {
        let mut rng = sample_rng(seed, i as u64);
        let g = random_graph(&mut rng, 40);
        let k = rng.random_range(1..=6);
        let s = rng.random_range(1..=3);
        let p = random_packing(&g, &mut rng, k, 0.8);
        let k_actual = max_diameter(&g, &p);
        let q = shrink(&g, &p, s);
        let d = min_cross_distance(&g, &q);
        sep.record(d.is_none_or(|d| d > s), || format!("instance {i}: s={s}, closest tiles at {}", d.unwrap_or(0)));
        // distance between shrunk parts coming from different input tiles
        let parent = p.tile_index(g.vertex_count());
        let mut cross_ok = true;
        for a in q.tiles() {
            for x in a.iter() {
                let dist = g.distances_from(x);
                for b in q.tiles() {
                    if parent[b.as_slice()[0]] != parent[x] {
                        cross_ok &= b.iter().all(|y| dist[y].is_none_or(|dy| dy > s));
                    }
                }
            }
        }
        sep_cross.record(cross_ok, || format!("instance {i}: s={s}"));
        let qd = max_diameter(&g, &q);
        diam.record(qd <= k_actual, || format!("instance {i}: {qd} > {k_actual}"));

        let m = rng.random_range(1..=8);
        let packings: Vec<Packing> = (0..m).map(|_| random_separated_packing(&g, &mut rng, k)).collect();
        let mp = Multipacking::new(g.vertex_count(), packings.clone()).expect("same vertex count");
        let shrunk =
            Multipacking::new(g.vertex_count(), packings.iter().map(|p| shrink(&g, p, s)).collect()).expect("same vertex count");
        let eps = tightness_defect(&mp);
        let after = tightness_defect(&shrunk);
        let factor = Rational::from_integer(pow_usize(g.degree_bound(), s + 1));
        let bound = &factor * &eps;
        defect.record(after <= bound, || {
            format!("instance {i}: defect {} -> {} above {}", exact(&eps), exact(&after), exact(&bound))
        });
    }
    Sweep {
        instances,
        properties: vec![sep, sep_cross, diam, defect],
    }
}

/// The join of a 1-separated `F` (diameters <= r) with a 3r-separated `F'`
/// (diameters <= t). Odd instances separate `F'` by `max(3r, 2)`; the
/// corrected bound is only recorded on such instances, since for `r = 0`
/// adjacent tiles of `F'` chain without limit.
pub fn join_sweep(instances: usize, seed: u64) -> Sweep {
    let mut sep = Property::new("join_separated", "F ∨ F' is 1-separated");
    let mut diam = Property::new("join_diameter", "tiles of F ∨ F' have diameter <= 2r + t");
    let mut diam2 = Property::new(
        "join_diameter_plus_two",
        "tiles of F ∨ F' have diameter <= 2r + t + 2 when F' is max(3r, 2)-separated",
    );
    for i in 0..instances {
        let mut rng = sample_rng(seed ^ 0x5EED_0002, i as u64);
        let g = random_graph(&mut rng, 40);
        let k = rng.random_range(0..=4);
        let f = random_separated_packing(&g, &mut rng, k);
        let r = max_diameter(&g, &f);
        let t_cap = rng.random_range(0..=4);
        let gap = if i % 2 == 1 { (3 * r).max(2) } else { 3 * r };
        // F': pieces of diameter <= t kept when more than `gap` from every kept piece
        let mut fp = Vec::new();
        let mut near = vec![false; g.vertex_count()];
        let mut pieces = random_partition(&g, &mut rng, t_cap);
        pieces.shuffle(&mut rng);
        for piece in pieces {
            if piece.iter().any(|v| near[v]) || !rng.random_bool(0.7) {
                continue;
            }
            for v in piece.iter() {
                for (w, d) in g.distances_from(v).into_iter().enumerate() {
                    if d.is_some_and(|d| d <= gap) {
                        near[w] = true;
                    }
                }
            }
            fp.push(piece);
        }
        let fp = Packing::new(fp, t_cap);
        let t = max_diameter(&g, &fp);
        debug_assert!(is_s_separated(&g, &f, 1) && is_s_separated(&g, &fp, 3 * r));
        let joined = join(&g, &f, &fp);
        let jd = max_diameter(&g, &joined);
        sep.record(validate_packing(&g, &joined) && is_s_separated(&g, &joined, 1), || format!("instance {i}"));
        diam.record(jd <= 2 * r + t, || format!("instance {i}: r={r} t={t} diameter {jd}"));
        if is_s_separated(&g, &fp, (3 * r).max(2)) {
            diam2.record(jd <= 2 * r + t + 2, || format!("instance {i}: r={r} t={t} diameter {jd}"));
        }
    }
    Sweep {
        instances,
        properties: vec![sep, diam, diam2],
    }
}

/// Witnesses built from random multipackings of 1-separated packings that
/// cover every vertex at least once.
pub fn round_trip_sweep(instances: usize, seed: u64) -> Sweep {
    let mut bound = Property::new(
        "round_trip",
        "||p(x) - p(y)||_1 <= 2 eps / (1 - eps) for the multipacking witness",
    );
    let mut sums = Property::new("round_trip_sums", "the multipacking witness is a probability family");
    let mut done = 0;
    let mut attempt = 0u64;
    while done < instances {
        let mut rng = sample_rng(seed ^ 0x5EED_0004, attempt);
        attempt += 1;
        let g = random_graph(&mut rng, 30);
        let k = rng.random_range(1..=5);
        let m = rng.random_range(2..=12);
        let packings: Vec<Packing> = (0..m).map(|_| random_separated_packing(&g, &mut rng, k)).collect();
        let mp = Multipacking::new(g.vertex_count(), packings).expect("same vertex count");
        if mp.coverage_counts().contains(&0) {
            continue;
        }
        let eps = tightness_defect(&mp);
        let w = witness_from_multipacking(&g, &mp).expect("every vertex covered");
        let r = validate_witness(&g, &w).expect("matching graph");
        let b = &eps * int(2) / (Rational::from_integer(1.into()) - &eps);
        bound.record(r.max_neighbor_l1 <= b, || {
            format!("attempt {}: L1 {} above {}", attempt - 1, exact(&r.max_neighbor_l1), exact(&b))
        });
        sums.record(r.sums_ok, || format!("attempt {}", attempt - 1));
        done += 1;
    }
    Sweep {
        instances,
        properties: vec![bound, sums],
    }
}
