//! A packing whose uncovered part has small measure, with a full audit of
//! the counting argument behind it.
//!
//! With `eps' = eps / 11` a quasi-tiling `F` at `(eps', k)` is built, then a
//! multipacking `F_1..F_m` by `delta`-Følner tiles that is `eps'`-tight. A
//! marker set `A` takes between `eps|T|/10` and `eps|T|/5` vertices of every
//! tile `T` of `F`. Each tile `J` of each `F_j` must hold more markers than
//! vertices of `J` outside `J_F`, so the uncovered vertices of `J` inject
//! into `A ∩ J`. Double counting those injections bounds the uncovered
//! uniform mass by `eps`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::multipack::{build_partitions, tightness_defect, Multipacking};
use crate::packing::{restrict_inside_count, Packing};
use crate::rational::{exact, int, ratio_usize, Rational};
use crate::witness::uniform_ball_witness;

use super::{build_mediators, candidate_sets, quasi_tile, CandidateFamily, QuasiTileConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwConfig {
    pub epsilon: Rational,
    /// Quasi-tiling parameters; `epsilon0` is replaced by `epsilon / 11`.
    /// Mediators are built from the qualifying balls at `(eps1, k1)`.
    pub quasi: QuasiTileConfig,
    /// Følner tolerance of the multipacking tiles.
    pub delta: Rational,
    /// Number of packings `m`.
    pub samples: usize,
    /// Witness radius of the first multipacking attempt; doubled until the
    /// multipacking is tight enough.
    pub start_radius: usize,
    pub seed: u64,
}

impl OwConfig {
    /// Every scale set to the largest component diameter. Mediator and
    /// multipacking tiles use tolerance `1 / (|V| + 1)`, which only whole
    /// components meet.
    pub fn whole_scale(g: &Graph, epsilon: Rational, seed: u64) -> Result<Self> {
        let eps_prime = eps_prime(&epsilon)?;
        let k = g.max_component_diameter().max(1);
        let tiny = ratio_usize(1, g.vertex_count() + 1);
        let quasi = QuasiTileConfig::manual(eps_prime.clone(), k, tiny.clone(), k, 4)?;
        Ok(OwConfig {
            epsilon,
            quasi,
            delta: tiny,
            samples: 16,
            start_radius: 1,
            seed,
        })
    }
}

fn eps_prime(epsilon: &Rational) -> Result<Rational> {
    if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
        return Err(Error::input("epsilon must lie in (0, 1)"));
    }
    Ok(epsilon / int(11))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwAudit {
    pub epsilon: Rational,
    pub eps_prime: Rational,
    /// Components of size at most `10 / eps`, tiled whole.
    pub carved_components: usize,
    pub tiles: usize,
    pub markers: VertexSet,
    /// Tiles violating `eps|T|/10 < |A ∩ T| < eps|T|/5`.
    pub marker_violations: usize,
    pub m: usize,
    pub multipack_radius: usize,
    pub multipack_defect: Rational,
    pub delta: Rational,
    /// Multipacking tiles checked.
    pub j_tiles: usize,
    /// Tiles with `|J \ J_F| >= |A ∩ J|`.
    pub j_violations: usize,
    pub first_violation: Option<VertexSet>,
    /// Pairs `(y, phi_j(y))` built over all `j`.
    pub injections: usize,
    /// Tiles where the uncovered vertices outnumber the markers.
    pub matching_failures: usize,
    /// Some `phi_j` mapped two vertices to one marker or left `J`.
    pub injection_errors: usize,
    pub vertices: usize,
    pub uncovered: usize,
    pub uncovered_mass: Rational,
    /// `(1 - eps') m mu(X \ [F])`.
    pub chain_lhs: Rational,
    /// `sum over uncovered y of #{j : y in [F_j]}`, normalized.
    pub chain_middle: Rational,
    /// Number of injection pairs landing in `A`, normalized.
    pub chain_markers: Rational,
    /// `m mu(A)`.
    pub chain_rhs: Rational,
    /// `m eps / 5`.
    pub chain_bound: Rational,
}

impl OwAudit {
    pub fn chain_ok(&self) -> bool {
        self.chain_lhs <= self.chain_middle
            && self.chain_middle == self.chain_markers
            && self.chain_markers <= self.chain_rhs
            && self.chain_rhs <= self.chain_bound
    }

    pub fn passes(&self) -> bool {
        self.marker_violations == 0
            && self.j_violations == 0
            && self.matching_failures == 0
            && self.injection_errors == 0
            && self.multipack_defect <= self.eps_prime
            && self.chain_ok()
            && self.uncovered_mass <= self.epsilon
    }

    pub fn failure(&self) -> Option<String> {
        let reason = if self.marker_violations > 0 {
            format!("{} tiles violate the marker bounds", self.marker_violations)
        } else if self.j_violations > 0 {
            format!(
                "{} multipacking tiles have more uncovered vertices than markers, first {}",
                self.j_violations,
                self.first_violation.as_ref().map(|s| s.to_string()).unwrap_or_default()
            )
        } else if self.matching_failures > 0 || self.injection_errors > 0 {
            format!(
                "injections: {} tiles without a matching, {} bad pairs",
                self.matching_failures, self.injection_errors
            )
        } else if self.multipack_defect > self.eps_prime {
            format!("multipacking defect {} above {}", exact(&self.multipack_defect), exact(&self.eps_prime))
        } else if !self.chain_ok() {
            "counting chain broken".to_string()
        } else if self.uncovered_mass > self.epsilon {
            format!("uncovered mass {} above {}", exact(&self.uncovered_mass), exact(&self.epsilon))
        } else {
            return None;
        };
        Some(reason)
    }
}

/// Components with at most `10 / eps` vertices.
fn small_components(g: &Graph, epsilon: &Rational) -> Vec<VertexSet> {
    let limit = int(10) / epsilon;
    g.components().into_iter().filter(|c| int(c.len()) <= limit).collect()
}

/// Chooses the first `floor(eps|T|/10) + 1` vertices of every tile.
pub fn marker_set(tiles: &[VertexSet], epsilon: &Rational) -> Result<VertexSet> {
    let mut markers = Vec::new();
    for t in tiles {
        let size = int(t.len());
        let a = (epsilon * &size / int(10)).floor().to_integer();
        let a = usize::try_from(a).expect("nonnegative") + 1;
        if int(a) >= epsilon * &size / int(5) {
            return Err(Error::MarkerConstruction {
                first: t.first().unwrap_or(0),
                size: t.len(),
            });
        }
        markers.extend(t.iter().take(a));
    }
    Ok(VertexSet::new(markers))
}

/// Keeps the `delta`-Følner tiles of each partition and doubles the witness
/// radius until every vertex outside `skip` misses at most `eps' m` packings.
fn tight_multipacking(
    g: &Graph,
    cfg: &OwConfig,
    eps_prime: &Rational,
    skip: &[bool],
) -> Result<(Multipacking, usize)> {
    let n = g.vertex_count();
    let cap = g.max_component_diameter().max(1);
    let mut radius = cfg.start_radius.clamp(1, cap);
    let m = cfg.samples.max(1);
    loop {
        let w = uniform_ball_witness(g, radius);
        let parts = build_partitions(g, &w, m, cfg.seed)?;
        let packings: Vec<Packing> = parts
            .into_iter()
            .map(|p| {
                let bound = p.diameter_bound();
                let tiles = p
                    .into_tiles()
                    .into_iter()
                    .filter(|t| t.iter().all(|v| !skip[v]) && g.is_folner(t, &cfg.delta))
                    .collect();
                Packing::new(tiles, bound)
            })
            .collect();
        let mp = Multipacking::new(n, packings)?;
        let counts = mp.coverage_counts();
        let worst = (0..n).filter(|&x| !skip[x]).map(|x| m - counts[x]).max().unwrap_or(0);
        log::debug!("multipacking radius {radius}: worst miss {worst} of {m}");
        if ratio_usize(worst, m) <= *eps_prime || radius >= cap {
            return Ok((mp, radius));
        }
        radius = (2 * radius).min(cap);
    }
}

/// Builds the packing and audits it. Fails with the audit's first broken
/// inequality.
pub fn ow_packing(g: &Graph, cfg: &OwConfig) -> Result<(Packing, OwAudit)> {
    let (f, audit) = ow_packing_audit(g, cfg)?;
    match audit.failure() {
        Some(reason) => Err(Error::AuditFailed(reason)),
        None => Ok((f, audit)),
    }
}

/// Like [`ow_packing`] but returns the audit even when it fails.
pub fn ow_packing_audit(g: &Graph, cfg: &OwConfig) -> Result<(Packing, OwAudit)> {
    let eps_prime = eps_prime(&cfg.epsilon)?;
    let n = g.vertex_count();
    let carved = small_components(g, &cfg.epsilon);
    let mut skip = vec![false; n];
    for c in &carved {
        c.iter().for_each(|v| skip[v] = true);
    }
    let quasi = QuasiTileConfig {
        epsilon0: eps_prime.clone(),
        ..cfg.quasi.clone()
    };
    let probes: Vec<VertexSet> = candidate_sets(g, &CandidateFamily::Balls, &quasi.eps1, quasi.k1)?
        .into_iter()
        .filter(|s| s.iter().all(|v| !skip[v]))
        .collect();
    let mediators = build_mediators(g, &probes, quasi.k1, quasi.mediator_budget)?;
    let (core, _) = quasi_tile(g, &Packing::empty(quasi.k0), &mediators, &probes, &quasi)?;
    let core_tiles = core.into_tiles();

    let markers = marker_set(&core_tiles, &cfg.epsilon)?;
    let marker_mask = markers.mask(n);
    let marker_violations = core_tiles
        .iter()
        .filter(|t| {
            let a = int(t.iter().filter(|&v| marker_mask[v]).count());
            let size = int(t.len());
            !(&cfg.epsilon * &size / int(10) < a && a < &cfg.epsilon * &size / int(5))
        })
        .count();

    let mut all_tiles = core_tiles.clone();
    all_tiles.extend(carved.iter().cloned());
    let bound = all_tiles
        .iter()
        .filter_map(|t| g.set_diameter(t).finite())
        .max()
        .unwrap_or(0)
        .max(quasi.k0);
    let f = Packing::new(all_tiles, bound);
    let covered = f.covered_mask(n);

    let (mp, multipack_radius) = tight_multipacking(g, cfg, &eps_prime, &skip)?;
    let m = mp.m();
    let core_packing = Packing::new(core_tiles, quasi.k0);
    let mut j_tiles = 0;
    let mut j_violations = 0;
    let mut first_violation = None;
    let mut injections = 0;
    let mut matching_failures = 0;
    let mut injection_errors = 0;
    let mut hits = vec![0usize; n];
    for packing in mp.packings() {
        let mut image_used = vec![false; n];
        for j in packing.tiles() {
            j_tiles += 1;
            let inside = j.mask(n);
            let outside_jf = j.len() - restrict_inside_count(&core_packing, &inside);
            let a_in_j: Vec<Vertex> = j.iter().filter(|&v| marker_mask[v]).collect();
            if outside_jf >= a_in_j.len() {
                j_violations += 1;
                first_violation.get_or_insert_with(|| j.clone());
            }
            let uncovered: Vec<Vertex> = j.iter().filter(|&v| !covered[v]).collect();
            if uncovered.len() > a_in_j.len() {
                matching_failures += 1;
                continue;
            }
            // the bipartite graph is complete inside J, so pairing in order
            // is a maximum matching
            for (&y, &z) in uncovered.iter().zip(&a_in_j) {
                if image_used[z] || !inside[z] || !inside[y] {
                    injection_errors += 1;
                }
                image_used[z] = true;
                hits[z] += 1;
                injections += 1;
            }
        }
    }

    let uncovered = covered.iter().filter(|&&c| !c).count();
    let per_vertex = if n == 0 { Rational::zero() } else { ratio_usize(1, n) };
    let counts = mp.coverage_counts();
    let middle: usize = (0..n).filter(|&y| !covered[y]).map(|y| counts[y]).sum();
    let marker_hits: usize = markers.iter().map(|z| hits[z]).sum();
    let uncovered_mass = int(uncovered) * &per_vertex;
    let audit = OwAudit {
        epsilon: cfg.epsilon.clone(),
        eps_prime: eps_prime.clone(),
        carved_components: carved.len(),
        tiles: f.len(),
        marker_violations,
        m,
        multipack_radius,
        multipack_defect: {
            let worst = (0..n).filter(|&x| !skip[x]).map(|x| m - counts[x]).max().unwrap_or(0);
            ratio_usize(worst, m)
        },
        delta: cfg.delta.clone(),
        j_tiles,
        j_violations,
        first_violation,
        injections,
        matching_failures,
        injection_errors,
        vertices: n,
        uncovered,
        chain_lhs: (Rational::one() - &eps_prime) * int(m) * &uncovered_mass,
        chain_middle: int(middle) * &per_vertex,
        chain_markers: int(marker_hits) * &per_vertex,
        chain_rhs: int(m) * int(markers.len()) * &per_vertex,
        chain_bound: int(m) * &cfg.epsilon / int(5),
        uncovered_mass,
        markers,
    };
    debug_assert!(n == 0 || skip.iter().any(|&s| s) || audit.multipack_defect == tightness_defect(&mp));
    Ok((f, audit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rational::ratio;

    #[test]
    fn small_component_is_carved() {
        let g = generate::cycle(12);
        let cfg = OwConfig::whole_scale(&g, ratio(1, 2), 1).unwrap();
        let (f, audit) = ow_packing(&g, &cfg).unwrap();
        assert_eq!(f.tiles(), &[g.all()]);
        assert_eq!(audit.carved_components, 1);
        assert_eq!(audit.uncovered_mass, Rational::zero());
    }

    #[test]
    fn marker_counts() {
        let tiles = vec![VertexSet::range(0, 30), VertexSet::range(30, 90)];
        let a = marker_set(&tiles, &ratio(1, 2)).unwrap();
        // 30: 1.5 < 2 < 3; 60: 3 < 4 < 6
        assert_eq!(a.len(), 6);
        assert!(matches!(
            marker_set(&[VertexSet::range(0, 20)], &ratio(1, 2)),
            Err(Error::MarkerConstruction { first: 0, size: 20 })
        ));
    }

    #[test]
    fn cycle_audit_passes() {
        let g = generate::cycle(120);
        let cfg = OwConfig::whole_scale(&g, ratio(1, 2), 7).unwrap();
        let (f, audit) = ow_packing(&g, &cfg).unwrap();
        assert!(audit.passes(), "{audit:?}");
        assert_eq!(audit.carved_components, 0);
        let uncovered = g.vertex_count() - f.covered_count();
        assert_eq!(ratio_usize(uncovered, 120), audit.uncovered_mass);
        assert!(audit.chain_ok());
    }

    #[test]
    fn bad_epsilon() {
        let g = generate::cycle(30);
        assert!(OwConfig::whole_scale(&g, Rational::one(), 0).is_err());
    }
}
