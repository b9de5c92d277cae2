//! Cross-module properties on random small instances.

use num_traits::{One, Zero};
use proptest::prelude::*;
use tiler_core::folner::packing_principle;
use tiler_core::io;
use tiler_core::multipack::{build_partitions, tightness_defect, witness_from_multipacking, Multipacking};
use tiler_core::packing::{is_s_separated, join, shrink, validate_packing};
use tiler_core::rational::{int, ratio, ratio_usize};
use tiler_core::witness::{l1_distance, rationalize, uniform_ball_witness, validate_witness};
use tiler_core::{generate, Graph, Packing, Rational, Vertex, VertexSet};

fn family() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (3usize..30).prop_map(generate::cycle),
        (2usize..30).prop_map(generate::path),
        (2usize..6, 2usize..6).prop_map(|(a, b)| generate::grid(&[a, b]).unwrap()),
        (3usize..7, 3usize..7).prop_map(|(a, b)| generate::torus(&[a, b]).unwrap()),
        (1usize..6).prop_map(generate::star),
    ]
}

/// Greedy packing of random balls, skipping any ball that meets or touches
/// an earlier one.
fn separated_balls(g: &Graph, centers: &[usize], r: usize) -> Packing {
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    let mut tiles = Vec::new();
    for &c in centers {
        let ball = g.ball(c % n, r).unwrap();
        if ball.iter().any(|v| blocked[v]) {
            continue;
        }
        for v in g.neighborhood(&ball, 1).iter() {
            blocked[v] = true;
        }
        tiles.push(ball);
    }
    Packing::new(tiles, 2 * r)
}

fn distribution(n: usize, weights: &[u8]) -> Vec<(Vertex, Rational)> {
    let total: usize = weights.iter().map(|&w| w as usize).sum::<usize>().max(1);
    let mut out: Vec<(Vertex, Rational)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(v, &w)| (v % n, ratio_usize(w as usize, total)))
        .collect();
    if out.is_empty() {
        out.push((0, Rational::one()));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_round_trips_through_text(g in family()) {
        let back = io::parse_graph(&io::write_graph(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn witness_round_trips_through_text(g in family(), r in 0usize..4) {
        let w = uniform_ball_witness(&g, r).with_target(r + 1);
        let back = io::parse_witness(&io::write_witness(&w), g.vertex_count()).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn l1_is_a_metric(a in proptest::collection::vec(0u8..5, 1..8),
                      b in proptest::collection::vec(0u8..5, 1..8),
                      c in proptest::collection::vec(0u8..5, 1..8)) {
        let (p, q, s) = (distribution(8, &a), distribution(8, &b), distribution(8, &c));
        let pq = l1_distance(&p, &q).unwrap();
        prop_assert_eq!(&pq, &l1_distance(&q, &p).unwrap());
        prop_assert!(l1_distance(&p, &p).unwrap().is_zero());
        prop_assert!(pq <= l1_distance(&p, &s).unwrap() + l1_distance(&s, &q).unwrap());
        prop_assert!(pq <= int(2));
    }

    #[test]
    fn arc_formula_on_cycles(m in 5usize..80, r in 1usize..20) {
        prop_assume!(m > 2 * r + 2);
        let g = generate::cycle(m);
        let rep = validate_witness(&g, &uniform_ball_witness(&g, r)).unwrap();
        prop_assert_eq!(rep.max_neighbor_l1, ratio_usize(2, 2 * r + 1));
        prop_assert!(rep.sums_ok);
    }

    #[test]
    fn shrink_keeps_tiles_apart(g in family(), centers in proptest::collection::vec(0usize..1000, 1..8),
                                r in 0usize..3, s in 1usize..3) {
        let f = separated_balls(&g, &centers, r);
        prop_assert!(is_s_separated(&g, &f, 1));
        let shrunk = shrink(&g, &f, s);
        prop_assert!(validate_packing(&g, &shrunk));
        for t in shrunk.tiles() {
            prop_assert!(f.tiles().iter().any(|u| t.is_subset(u)));
            prop_assert!(g.diameter_at_most(t, 2 * r));
        }
        prop_assert!(is_s_separated(&g, &shrunk, 1));
    }

    #[test]
    fn join_covers_both_and_separates(g in family(), a in proptest::collection::vec(0usize..1000, 1..6),
                                      b in proptest::collection::vec(0usize..1000, 1..6)) {
        let f = separated_balls(&g, &a, 1);
        let fp = separated_balls(&g, &b, 0);
        let joined = join(&g, &f, &fp);
        prop_assert!(validate_packing(&g, &joined));
        prop_assert!(is_s_separated(&g, &joined, 1));
        let n = g.vertex_count();
        let cover = |p: &Packing| p.covered_mask(n);
        let (cf, cfp, cj) = (cover(&f), cover(&fp), cover(&joined));
        for v in 0..n {
            prop_assert_eq!(cj[v], cf[v] || cfp[v]);
        }
        for t in f.tiles().iter().chain(fp.tiles()) {
            prop_assert!(joined.tiles().iter().any(|u| t.is_subset(u)));
        }
    }

    #[test]
    fn multipacking_witness_is_a_distribution(g in family(), seed in 0u64..1000) {
        let w = rationalize(&uniform_ball_witness(&g, 1), 12).unwrap();
        let parts = build_partitions(&g, &w, 6, seed).unwrap();
        for p in &parts {
            prop_assert!(validate_packing(&g, p));
            prop_assert_eq!(p.covered_count(), g.vertex_count());
        }
        let mp = Multipacking::new(g.vertex_count(), parts).unwrap();
        prop_assert!(tightness_defect(&mp).is_zero());
        let back = witness_from_multipacking(&g, &mp).unwrap();
        for x in g.vertices() {
            let total: Rational = back.dist(x).iter().map(|(_, p)| p.clone()).sum();
            prop_assert_eq!(total, Rational::one());
        }
    }
}

#[test]
fn packing_principle_tiles_are_folner_on_small_cycles() {
    for m in 10..40 {
        let g = generate::cycle(m);
        let eps = ratio(1, 2);
        let out = packing_principle(&g, &g.all(), &eps, 6).unwrap();
        assert!(validate_packing(&g, &out.packing));
        for t in out.packing.tiles() {
            assert!(g.is_folner(t, &eps), "C_{m}: {t:?}");
            assert!(g.diameter_at_most(t, 6));
        }
    }
}

#[test]
fn measure_and_packing_text_formats_agree() {
    let p = Packing::new(vec![VertexSet::range(0, 3), VertexSet::new([5, 7])], 2);
    let back = io::parse_packing(&io::write_packing(&p)).unwrap();
    assert_eq!(back, p);
    let mp = Multipacking::new(8, vec![p.clone(), Packing::empty(2)]).unwrap();
    assert_eq!(io::parse_multipacking(&io::write_multipacking(&mp), 8).unwrap(), mp);
}
