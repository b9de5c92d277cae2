//! Line-based text formats. Blank lines and lines starting with `#` are
//! ignored everywhere.
//!
//! - graph: header `vertices N`, then one edge `u v` per line
//! - witness: header `witness n r`, then `x y num den` per weight
//! - packing: header `packing k=<bound>`, then one tile per line
//! - multipacking: packing blocks separated by `---`
//! - measure: `vertex num den` per line; missing vertices get mass 0

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::measure::Measure;
use crate::multipack::Multipacking;
use crate::packing::Packing;
use crate::rational::Rational;
use crate::witness::{Distribution, WitnessFamily};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers<T: std::str::FromStr>(line: usize, text: &str, count: usize) -> Result<Vec<T>> {
    let out: Vec<T> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad number `{t}`"))))
        .collect::<Result<_>>()?;
    if out.len() != count {
        return Err(parse_err(line, format!("expected {count} fields, found {}", out.len())));
    }
    Ok(out)
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, keyword: &str) -> Result<(usize, &'a str)> {
    let (line, text) = lines.next().ok_or_else(|| parse_err(0, format!("missing `{keyword}` header")))?;
    let rest = text
        .strip_prefix(keyword)
        .ok_or_else(|| parse_err(line, format!("expected `{keyword}` header")))?;
    Ok((line, rest.trim()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, rest) = header(&mut lines, "vertices")?;
    let n: usize = rest.parse().map_err(|_| parse_err(line, "bad vertex count"))?;
    let mut edges = Vec::new();
    for (line, text) in lines {
        let e: Vec<Vertex> = numbers(line, text, 2)?;
        if e[0] >= n || e[1] >= n {
            return Err(parse_err(line, format!("edge endpoint out of range 0..{n}")));
        }
        edges.push((e[0], e[1]));
    }
    Graph::from_edges(n, edges)
}

pub fn write_witness(w: &WitnessFamily) -> String {
    let mut out = format!("witness {} {}\n", w.target(), w.support_radius());
    for x in 0..w.vertex_count() {
        for (y, p) in w.dist(x) {
            let _ = writeln!(out, "{x} {y} {} {}", p.numer(), p.denom());
        }
    }
    out
}

/// `vertex_count` fixes the number of rows `p(x, .)`.
pub fn parse_witness(text: &str, vertex_count: usize) -> Result<WitnessFamily> {
    let mut lines = content_lines(text);
    let (line, rest) = header(&mut lines, "witness")?;
    let head: Vec<usize> = numbers(line, rest, 2)?;
    let mut dist: Vec<Distribution> = vec![Vec::new(); vertex_count];
    for (line, text) in lines {
        let f: Vec<&str> = text.split_whitespace().collect();
        if f.len() != 4 {
            return Err(parse_err(line, format!("expected 4 fields, found {}", f.len())));
        }
        let x: Vertex = f[0].parse().map_err(|_| parse_err(line, "bad vertex"))?;
        let y: Vertex = f[1].parse().map_err(|_| parse_err(line, "bad vertex"))?;
        let num: BigInt = f[2].parse().map_err(|_| parse_err(line, "bad numerator"))?;
        let den: BigInt = f[3].parse().map_err(|_| parse_err(line, "bad denominator"))?;
        if x >= vertex_count || y >= vertex_count {
            return Err(parse_err(line, format!("vertex out of range 0..{vertex_count}")));
        }
        if den == BigInt::from(0) {
            return Err(parse_err(line, "zero denominator"));
        }
        dist[x].push((y, Rational::new(num, den)));
    }
    WitnessFamily::new(head[0], dist, head[1])
}

fn write_tiles(out: &mut String, p: &Packing) {
    let _ = writeln!(out, "packing k={}", p.diameter_bound());
    for t in p.tiles() {
        let ids: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
}

pub fn write_packing(p: &Packing) -> String {
    let mut out = String::new();
    write_tiles(&mut out, p);
    out
}

fn parse_packing_lines<'a>(mut lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Packing> {
    let (line, rest) = header(&mut lines, "packing")?;
    let bound: usize = rest
        .strip_prefix("k=")
        .and_then(|b| b.parse().ok())
        .ok_or_else(|| parse_err(line, "expected `packing k=<bound>`"))?;
    let mut tiles = Vec::new();
    for (line, text) in lines {
        let ids: Vec<Vertex> = text
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad vertex `{t}`"))))
            .collect::<Result<_>>()?;
        tiles.push(VertexSet::new(ids));
    }
    Ok(Packing::new(tiles, bound))
}

/// Tiles are not checked against a graph here; use [`Packing::checked`].
pub fn parse_packing(text: &str) -> Result<Packing> {
    parse_packing_lines(content_lines(text))
}

pub fn write_multipacking(mp: &Multipacking) -> String {
    let mut out = String::new();
    for (i, p) in mp.packings().iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        write_tiles(&mut out, p);
    }
    out
}

pub fn parse_multipacking(text: &str, vertex_count: usize) -> Result<Multipacking> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let packings = lines
        .split(|(_, l)| *l == "---")
        .map(|block| parse_packing_lines(block.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    Multipacking::new(vertex_count, packings)
}

/// Rows `vertex, covered_count, m`.
pub fn multipacking_report(mp: &Multipacking) -> String {
    let mut out = String::from("vertex,covered_count,m\n");
    for (x, c) in mp.coverage_counts().into_iter().enumerate() {
        let _ = writeln!(out, "{x},{c},{}", mp.m());
    }
    out
}

pub fn write_measure(mu: &Measure) -> String {
    let mut out = String::new();
    for (x, m) in mu.masses().iter().enumerate() {
        let _ = writeln!(out, "{x} {} {}", m.numer(), m.denom());
    }
    out
}

pub fn parse_measure(text: &str, vertex_count: usize) -> Result<Measure> {
    let mut mass = vec![Rational::from_integer(0.into()); vertex_count];
    for (line, text) in content_lines(text) {
        let f: Vec<&str> = text.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(line, format!("expected 3 fields, found {}", f.len())));
        }
        let x: Vertex = f[0].parse().map_err(|_| parse_err(line, "bad vertex"))?;
        let num: BigInt = f[1].parse().map_err(|_| parse_err(line, "bad numerator"))?;
        let den: BigInt = f[2].parse().map_err(|_| parse_err(line, "bad denominator"))?;
        if x >= vertex_count {
            return Err(parse_err(line, format!("vertex out of range 0..{vertex_count}")));
        }
        if den == BigInt::from(0) {
            return Err(parse_err(line, "zero denominator"));
        }
        mass[x] = Rational::new(num, den);
    }
    Measure::new(mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rational::ratio;
    use crate::witness::uniform_ball_witness;

    #[test]
    fn graph_round_trip() {
        let g = generate::torus(&[3, 4]).unwrap();
        let back = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        let text = "# a path\nvertices 3\n\n0 1\n1 2\n";
        assert_eq!(parse_graph(text).unwrap().edge_count(), 2);
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert!(matches!(parse_graph("vertices 3\n0 1\n1 x\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("vertices 3\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("edges 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_witness("witness 1 0\n0 0 1 0\n", 1), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn witness_round_trip() {
        let g = generate::cycle(9);
        let w = uniform_ball_witness(&g, 2).with_target(4);
        let back = parse_witness(&write_witness(&w), 9).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn packing_and_multipacking_round_trip() {
        let p = Packing::new(vec![VertexSet::range(0, 3), VertexSet::new([5, 7])], 4);
        assert_eq!(parse_packing(&write_packing(&p)).unwrap(), p);
        let mp = Multipacking::new(8, vec![p.clone(), Packing::empty(2), p]).unwrap();
        let text = write_multipacking(&mp);
        assert_eq!(text.matches("---").count(), 2);
        assert_eq!(parse_multipacking(&text, 8).unwrap(), mp);
        assert!(multipacking_report(&mp).contains("\n5,2,3\n"));
    }

    #[test]
    fn measure_round_trip() {
        let mu = Measure::new(vec![ratio(1, 2), ratio(0, 1), ratio(1, 2)]).unwrap();
        assert_eq!(parse_measure(&write_measure(&mu), 3).unwrap(), mu);
        assert_eq!(parse_measure("1 1 1\n", 3).unwrap(), Measure::point(3, 1).unwrap());
        assert!(parse_measure("0 1 3\n", 3).is_err());
    }
}
