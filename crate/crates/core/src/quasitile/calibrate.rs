//! Empirical `(delta, k)` pairs for the packing principle.
//!
//! For a tile quality `eps` and a diameter cap `k`, every probe set `P` is
//! packed with `packing_principle(P, eps, k)`. Probes whose coverage stays
//! below `1 - eps` are failures, and `delta(k)` is the smallest quotient
//! among them: every probe that is `delta(k)`-Følner was packed well.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::folner::{packing_principle_with, PackingSearch};
use crate::graph::{Graph, VertexSet};
use crate::rational::{exact, pow_usize, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationBudget {
    /// Diameter caps to try; the largest component diameter is always added.
    pub k_candidates: Vec<usize>,
    /// Upper limit on the caps tried, below the component diameter this
    /// excludes whole-component tiles.
    pub max_k: Option<usize>,
    /// Number of evenly spaced ball centers.
    pub probe_centers: usize,
    pub max_probe_radius: usize,
    pub node_budget: usize,
}

impl Default for CalibrationBudget {
    fn default() -> Self {
        CalibrationBudget {
            k_candidates: vec![1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128],
            max_k: None,
            probe_centers: 6,
            max_probe_radius: 12,
            node_budget: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationRow {
    pub k: usize,
    pub delta: Rational,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub epsilon: Rational,
    pub delta: Rational,
    pub k: usize,
    pub probes: usize,
    pub rows: Vec<CalibrationRow>,
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "eps={} probes={} chosen k={} delta={}",
            exact(&self.epsilon),
            self.probes,
            self.k,
            exact(&self.delta)
        )?;
        for row in &self.rows {
            writeln!(f, "  k={} delta={} failures={}", row.k, exact(&row.delta), row.failures)?;
        }
        Ok(())
    }
}

pub fn probe_sets(g: &Graph, budget: &CalibrationBudget) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut out = Vec::new();
    for c in g.components() {
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    let centers = budget.probe_centers.min(n);
    for i in 0..centers {
        let x = i * n / centers;
        for r in 1..=budget.max_probe_radius {
            let ball = g.ball(x, r).expect("center is a vertex");
            if seen.insert(ball.clone()) {
                out.push(ball);
            }
        }
    }
    out
}

/// Picks the cap `k` maximizing `delta(k) / d^(k+1)` (ties: smaller `k`),
/// the quantity the later tolerances are divided down from.
pub fn calibrate(g: &Graph, epsilon: &Rational, budget: &CalibrationBudget) -> Result<Calibration> {
    if g.edge_count() == 0 {
        return Ok(Calibration {
            epsilon: epsilon.clone(),
            delta: Rational::one(),
            k: 0,
            probes: g.vertex_count(),
            rows: Vec::new(),
        });
    }
    let probes = probe_sets(g, budget);
    let diam = g.max_component_diameter();
    let cap = budget.max_k.unwrap_or(diam);
    let mut ks: Vec<usize> = budget
        .k_candidates
        .iter()
        .copied()
        .filter(|&k| k >= 1 && k < diam && k <= cap)
        .collect();
    if diam <= cap {
        ks.push(diam.max(1));
    }
    ks.sort_unstable();
    ks.dedup();
    let target = Rational::one() - epsilon;
    let search = PackingSearch {
        node_budget: budget.node_budget,
        stop_at: Some(target.clone()),
    };
    let quotients: Vec<Rational> = probes
        .iter()
        .map(|p| g.folner_quotient(p).expect("probes are nonempty"))
        .collect();
    let d = g.degree_bound().max(2);
    let mut rows = Vec::new();
    let mut best: Option<(Rational, usize, Rational)> = None;
    for &k in &ks {
        let mut delta = Rational::one();
        let mut failures = 0;
        for (p, q) in probes.iter().zip(&quotients) {
            if q >= &delta {
                // cannot lower delta further
                continue;
            }
            let out = packing_principle_with(g, p, epsilon, k, &search)?;
            if out.coverage < target {
                failures += 1;
                delta = q.clone();
            }
        }
        log::debug!("calibration eps={} k={k} delta={delta}", exact(epsilon));
        rows.push(CalibrationRow {
            k,
            delta: delta.clone(),
            failures,
        });
        if delta.is_zero() {
            continue;
        }
        let score = &delta / Rational::from_integer(pow_usize(d, k + 1));
        if best.as_ref().is_none_or(|b| score > b.0) {
            best = Some((score, k, delta));
        }
    }
    let mut report = Calibration {
        epsilon: epsilon.clone(),
        delta: Rational::zero(),
        k: 0,
        probes: probes.len(),
        rows,
    };
    match best {
        Some((_, k, delta)) => {
            report.k = k;
            report.delta = delta;
            Ok(report)
        }
        None => Err(Error::Calibration {
            epsilon: exact(epsilon),
            log: report.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rational::ratio;

    #[test]
    fn cycle_calibration_is_usable() {
        let g = generate::cycle(60);
        let cal = calibrate(&g, &ratio(1, 6), &CalibrationBudget::default()).unwrap();
        assert!(cal.delta > Rational::zero());
        // at the chosen cap every probe with quotient below delta is packed well
        for p in probe_sets(&g, &CalibrationBudget::default()) {
            if g.folner_quotient(&p).unwrap() < cal.delta {
                let out = crate::folner::packing_principle(&g, &p, &ratio(1, 6), cal.k).unwrap();
                assert!(out.coverage >= ratio(5, 6), "probe {p}");
            }
        }
    }

    #[test]
    fn edgeless_graph_needs_no_probing() {
        let cal = calibrate(&Graph::edgeless(1), &ratio(1, 2), &CalibrationBudget::default()).unwrap();
        assert_eq!(cal.k, 0);
        assert_eq!(cal.delta, Rational::one());
    }

    #[test]
    fn tree_without_whole_component_fails() {
        let g = generate::regular_tree(3, 5);
        let budget = CalibrationBudget {
            max_k: Some(4),
            ..CalibrationBudget::default()
        };
        assert!(matches!(
            calibrate(&g, &ratio(1, 10), &budget),
            Err(Error::Calibration { .. })
        ));
    }
}
