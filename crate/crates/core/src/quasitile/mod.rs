//! The quasi-tiling improvement loop and the marker-set audit built on it.
//!
//! A packing by `(eps0, k0)`-Følner tiles is updated once per mediator: every
//! mediator tile `H` whose inner coverage `|H_F| / |H|` is below
//! `1 - eps0/3` gets its inside repacked. Rounds of such updates repeat until
//! nothing triggers or the round limit is hit.

pub mod calibrate;
pub mod mediator;
pub mod ow;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::folner::{packing_principle_with, PackingSearch};
use crate::graph::{Graph, VertexSet};
use crate::packing::{restrict_inside_count, validate_packing, Packing};
use crate::rational::{exact, int, pow_usize, ratio_usize, Rational};

pub use calibrate::{calibrate, probe_sets, Calibration, CalibrationBudget};
pub use mediator::{build_mediators, candidate_sets, CandidateFamily, MediatorFamily};
pub use ow::{marker_set, ow_packing, ow_packing_audit, OwAudit, OwConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiTileConfig {
    pub epsilon0: Rational,
    /// Outer rounds `s`.
    pub rounds: usize,
    pub k0: usize,
    pub k1: usize,
    pub eps1: Rational,
    pub eps2: Rational,
    /// Largest number of disjoint diameter-`k1` sets meeting one such set.
    pub m: usize,
    /// Mediator count used in `eps2`.
    pub n: usize,
    pub mediator_budget: usize,
    /// Search limits for each repack.
    pub search: PackingSearch,
    /// Re-validate the packing after every update step.
    pub verify_steps: bool,
}

impl QuasiTileConfig {
    /// A configuration with hand-picked scales; `eps2` is left at zero and
    /// `m`, `n` at their trivial values.
    pub fn manual(epsilon0: Rational, k0: usize, eps1: Rational, k1: usize, rounds: usize) -> Result<Self> {
        check_epsilon(&epsilon0)?;
        Ok(QuasiTileConfig {
            epsilon0,
            rounds,
            k0,
            k1,
            eps1,
            eps2: Rational::zero(),
            m: 1,
            n: 1,
            mediator_budget: DEFAULT_MEDIATOR_BUDGET,
            search: PackingSearch::default(),
            verify_steps: true,
        })
    }

    /// `1 - eps0/3`, the repack target and the trigger threshold.
    pub fn small_threshold(&self) -> Rational {
        Rational::one() - &self.epsilon0 / int(3)
    }
}

pub const DEFAULT_MEDIATOR_BUDGET: usize = 10_000;
pub const DEFAULT_ROUND_CAP: usize = 64;
const QUICK_REPACK_BUDGET: usize = 200;

fn check_epsilon(eps: &Rational) -> Result<()> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(Error::input("epsilon0 must lie in (0, 1)"));
    }
    Ok(())
}

/// Everything derived from `eps0` by calibration.
#[derive(Clone, Debug)]
pub struct DerivedConstants {
    pub config: QuasiTileConfig,
    pub calibration0: Calibration,
    pub calibration1: Calibration,
    pub candidates: Vec<VertexSet>,
    pub mediators: MediatorFamily,
}

impl fmt::Display for DerivedConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "eps0={} k0={} eps1={} k1={} eps2={} m={} n={} rounds={}",
            exact(&c.epsilon0),
            c.k0,
            exact(&c.eps1),
            c.k1,
            exact(&c.eps2),
            c.m,
            c.n,
            c.rounds
        )?;
        write!(f, "{}{}", self.calibration0, self.calibration1)
    }
}

/// Calibrates `(delta, k)` at `eps0/3`, sets `eps1 = delta / d^(k0+1)`,
/// calibrates again at `eps1/3`, takes `m = max_x |B_k1(x)|`, builds the
/// mediators of the qualifying balls to get `n`, and sets
/// `eps2 = min(delta1, eps0 / (3 m n d^(2(k1+1))))`.
pub fn derive_constants(
    g: &Graph,
    epsilon0: &Rational,
    budget: &CalibrationBudget,
) -> Result<DerivedConstants> {
    check_epsilon(epsilon0)?;
    let d = g.degree_bound().max(1);
    let cal0 = calibrate(g, &(epsilon0 / int(3)), budget)?;
    let k0 = cal0.k;
    let eps1 = &cal0.delta / Rational::from_integer(pow_usize(d, k0 + 1));
    let cal1 = calibrate(g, &(&eps1 / int(3)), budget)?;
    let k1 = cal1.k;
    let m = g.max_ball_size(k1).max(1);
    let candidates = candidate_sets(g, &CandidateFamily::Balls, &eps1, k1)?;
    let mediators = build_mediators(g, &candidates, k1, DEFAULT_MEDIATOR_BUDGET)?;
    let n = mediators.len().max(1);
    let tail = epsilon0
        / (Rational::from_integer(pow_usize(d, 2 * (k1 + 1))) * int(3) * int(m) * int(n));
    let eps2 = if cal1.delta < tail { cal1.delta.clone() } else { tail };
    let rounds = candidates
        .iter()
        .map(VertexSet::len)
        .max()
        .unwrap_or(1)
        .clamp(1, DEFAULT_ROUND_CAP);
    Ok(DerivedConstants {
        config: QuasiTileConfig {
            epsilon0: epsilon0.clone(),
            rounds,
            k0,
            k1,
            eps1,
            eps2,
            m,
            n,
            mediator_budget: DEFAULT_MEDIATOR_BUDGET,
            search: PackingSearch::default(),
            verify_steps: true,
        },
        calibration0: cal0,
        calibration1: cal1,
        candidates,
        mediators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Improvement {
    /// `H` was not small.
    Unchanged,
    Improved { packing: Packing, coverage: Rational },
}

/// Repacks the inside of `h` when its coverage is small. Tiles of `f` that
/// cross `h` are kept and their vertices are removed from `h` before
/// repacking. Success means at least `1 - eps0/3` of `h` is covered by some
/// tile afterwards and the tiles inside `h` cover more than before.
pub fn improve_tile(g: &Graph, f: &Packing, h: &VertexSet, cfg: &QuasiTileConfig) -> Result<Improvement> {
    if h.is_empty() {
        return Ok(Improvement::Unchanged);
    }
    let n = g.vertex_count();
    let inside = h.mask(n);
    let threshold = cfg.small_threshold();
    let old_inside = restrict_inside_count(f, &inside);
    let before = ratio_usize(old_inside, h.len());
    if before >= threshold {
        return Ok(Improvement::Unchanged);
    }
    let mut keep = Vec::new();
    let mut blocked = vec![false; n];
    for t in f.tiles() {
        let in_h = t.iter().filter(|&v| inside[v]).count();
        if in_h == t.len() {
            continue;
        }
        if in_h > 0 {
            t.iter().for_each(|v| blocked[v] = true);
        }
        keep.push(t.clone());
    }
    let h_prime: VertexSet = h.iter().filter(|&v| !blocked[v]).collect();
    let failed = |achieved: &Rational| Error::ImprovementFailed {
        tile: h.as_slice().to_vec(),
        achieved: exact(achieved),
        required: exact(&threshold),
    };
    if h_prime.is_empty() {
        return Err(failed(&Rational::zero()));
    }
    // vertices of H outside H' stay covered by the crossing tiles, so H'
    // only needs (1 - eps0/3)|H| - |H \ H'| of its own vertices covered
    let blocked_count = int(h.len() - h_prime.len());
    let needed = (&threshold * int(h.len()) - blocked_count) / int(h_prime.len());
    // a short search for the largest cover, then a full-budget search that
    // stops once the requirement is met
    let k = cfg.k0.max(1);
    let quick = PackingSearch {
        node_budget: cfg.search.node_budget.min(QUICK_REPACK_BUDGET),
        stop_at: cfg.search.stop_at.clone(),
    };
    let mut out = packing_principle_with(g, &h_prime, &cfg.epsilon0, k, &quick)?;
    if out.coverage < needed && cfg.search.node_budget > quick.node_budget {
        let search = PackingSearch {
            node_budget: cfg.search.node_budget,
            stop_at: Some(cfg.search.stop_at.clone().map_or(needed.clone(), |s| s.min(needed))),
        };
        out = packing_principle_with(g, &h_prime, &cfg.epsilon0, k, &search)?;
    }
    if out.packing.covered_count() <= old_inside {
        // the tiles already inside H are at least as good as the repack
        let kept = ratio_usize(h.len() - h_prime.len() + old_inside, h.len());
        if kept >= threshold {
            log::debug!("no better repack of {h}, keeping its tiles");
            return Ok(Improvement::Unchanged);
        }
        return Err(failed(&kept));
    }
    let coverage = ratio_usize(h.len() - h_prime.len() + out.packing.covered_count(), h.len());
    if coverage < threshold {
        return Err(failed(&coverage));
    }
    keep.extend(out.packing.into_tiles());
    Ok(Improvement::Improved {
        packing: Packing::new(keep, cfg.k0),
        coverage,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub round: usize,
    pub mediator: usize,
    pub improvements: usize,
    /// Probes whose inner coverage changed in this step.
    pub alterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub improvements: usize,
    /// Probes violating `gain >= h - n |d^k1 J|`; the inequality is exact, so
    /// this is expected to stay zero.
    pub ledger_violations: usize,
    /// Smallest `gain - (h - n |d^k1 J|)` over probes.
    pub min_ledger_slack: Option<i64>,
    pub probes_on_target: usize,
    pub probes_progressed: usize,
    /// Probes below target that gained nothing this round.
    pub probes_stalled: usize,
    /// `|J_F|` per probe after the round.
    pub coverage: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuasiTileTrace {
    pub steps: Vec<StepRecord>,
    pub rounds: Vec<RoundRecord>,
    pub fixed_point: bool,
}

impl QuasiTileTrace {
    pub fn ledger_holds(&self) -> bool {
        self.rounds.iter().all(|r| r.ledger_violations == 0)
    }
}

fn check_tiles(g: &Graph, f: &Packing, cfg: &QuasiTileConfig) -> Result<()> {
    if !validate_packing(g, f) {
        return Err(Error::AuditFailed("packing lost disjointness or its diameter bound".into()));
    }
    if let Some(t) = f
        .tiles()
        .iter()
        .find(|t| !g.is_folner(t, &cfg.epsilon0) || !g.diameter_at_most(t, cfg.k0))
    {
        return Err(Error::AuditFailed(format!(
            "tile {t} is not ({}, {})-Følner",
            exact(&cfg.epsilon0),
            cfg.k0
        )));
    }
    Ok(())
}

/// Runs up to `cfg.rounds` rounds of one update per mediator, starting from
/// `seed`. The probes are the sets the trace tracks (normally the candidate
/// family of the mediators).
pub fn quasi_tile(
    g: &Graph,
    seed: &Packing,
    mediators: &MediatorFamily,
    probes: &[VertexSet],
    cfg: &QuasiTileConfig,
) -> Result<(Packing, QuasiTileTrace)> {
    check_epsilon(&cfg.epsilon0)?;
    let n_vertices = g.vertex_count();
    let mut f = seed.clone().with_bound(cfg.k0);
    check_tiles(g, &f, cfg)?;
    let mut trace = QuasiTileTrace::default();
    if n_vertices == 0 {
        trace.fixed_point = true;
        return Ok((f, trace));
    }
    let masks: Vec<Vec<bool>> = probes.iter().map(|j| j.mask(n_vertices)).collect();
    let mut probes_of: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    for (p, j) in probes.iter().enumerate() {
        j.iter().for_each(|v| probes_of[v].push(p));
    }
    let inner_boundary: Vec<usize> = probes.iter().map(|j| g.k_boundary(j, cfg.k1.max(1)).len()).collect();
    let target = Rational::one() - &cfg.epsilon0;
    let n_med = mediators.len() as i64;
    let mut current: Vec<usize> = masks.iter().map(|m| restrict_inside_count(&f, m)).collect();
    // signed change of |J_F| for the probes containing `t`, when `t` is
    // added (+1) or removed (-1)
    let shift = |current: &mut [usize], touched: &mut Vec<(usize, usize)>, t: &VertexSet, add: bool| {
        let Some(v) = t.first() else { return };
        for &p in &probes_of[v] {
            if t.iter().all(|u| masks[p][u]) {
                touched.push((p, current[p]));
                if add {
                    current[p] += t.len();
                } else {
                    current[p] -= t.len();
                }
            }
        }
    };
    for round in 1..=cfg.rounds {
        let start = current.clone();
        let mut h = vec![0usize; probes.len()];
        let mut round_improvements = 0;
        for (i, med) in mediators.mediators.iter().enumerate() {
            let mut improvements = 0;
            let mut touched = Vec::new();
            for tile in med.tiles() {
                if let Improvement::Improved { packing, .. } = improve_tile(g, &f, tile, cfg)? {
                    // only tiles inside the improved tile change
                    for t in f.tiles().iter().filter(|t| t.is_subset(tile)) {
                        shift(&mut current, &mut touched, t, false);
                    }
                    for t in packing.tiles().iter().filter(|t| t.is_subset(tile)) {
                        shift(&mut current, &mut touched, t, true);
                    }
                    f = packing;
                    improvements += 1;
                    if let Some(v) = tile.first() {
                        for &p in &probes_of[v] {
                            if tile.iter().all(|u| masks[p][u]) {
                                h[p] += 1;
                            }
                        }
                    }
                }
            }
            let mut alterations = 0;
            if improvements > 0 {
                if cfg.verify_steps {
                    check_tiles(g, &f, cfg)?;
                }
                // the first recorded value of each probe is its value before the step
                touched.sort_by_key(|e| e.0);
                touched.dedup_by_key(|e| e.0);
                alterations = touched.iter().filter(|&&(p, old)| current[p] != old).count();
            }
            round_improvements += improvements;
            trace.steps.push(StepRecord {
                round,
                mediator: i,
                improvements,
                alterations,
            });
        }
        let end = current.clone();
        let mut record = RoundRecord {
            round,
            improvements: round_improvements,
            ledger_violations: 0,
            min_ledger_slack: None,
            probes_on_target: 0,
            probes_progressed: 0,
            probes_stalled: 0,
            coverage: end.clone(),
        };
        for p in 0..probes.len() {
            let gain = end[p] as i64 - start[p] as i64;
            let slack = gain - (h[p] as i64 - n_med * inner_boundary[p] as i64);
            if slack < 0 {
                record.ledger_violations += 1;
            }
            record.min_ledger_slack = Some(record.min_ledger_slack.map_or(slack, |s: i64| s.min(slack)));
            if ratio_usize(end[p], probes[p].len()) >= target {
                record.probes_on_target += 1;
            } else if gain > 0 {
                record.probes_progressed += 1;
            } else {
                record.probes_stalled += 1;
            }
        }
        log::debug!(
            "round {round}: {round_improvements} improvements, {} probes on target",
            record.probes_on_target
        );
        trace.rounds.push(record);
        if round_improvements == 0 {
            trace.fixed_point = true;
            break;
        }
    }
    Ok((f, trace))
}

/// `|J_T| / |J|` per probe; empty probes give `None`.
pub fn coverage_report(g: &Graph, t: &Packing, probes: &[VertexSet]) -> Vec<Option<Rational>> {
    probes
        .iter()
        .map(|j| {
            (!j.is_empty()).then(|| ratio_usize(restrict_inside_count(t, &j.mask(g.vertex_count())), j.len()))
        })
        .collect()
}
