//! One function per pipeline. Each fills a [`Report`] with metric rows,
//! exact pass/fail checks and artifact files.

use anyhow::{bail, Context, Result};
use num_traits::{One, Zero};
use tiler_core::multipack::{
    boundary_counts, build_partitions, partitions_to_multipacking, split_counts, split_probability_exact,
    tightness_defect, witness_from_multipacking,
};
use tiler_core::packing::{is_s_separated, validate_packing};
use tiler_core::quasitile::{
    build_mediators, candidate_sets, coverage_report, derive_constants, ow_packing_audit, quasi_tile,
    CalibrationBudget, CandidateFamily, OwConfig, QuasiTileConfig, DEFAULT_MEDIATOR_BUDGET,
};
use tiler_core::randseq::{
    coverage_under_measure, level_split_frequencies, plan_cfw, sample_cfw, schedule_of,
    CfwOptions, Estimate, RankPartitioner,
};
use tiler_core::rational::{at_least_one_minus_sqrt, exact, int, ratio_usize, to_f64};
use tiler_core::witness::{uniform_ball_witness, validate_witness};
use tiler_core::{io, Graph, Measure, Multipacking, Packing, Rational, Vertex, VertexSet};

use crate::config::{
    CalibrationParams, CfwParams, MultipackParams, OwParams, QuasitileParams, RankParams, WitnessParams,
};
use crate::report::Report;

/// Largest number of packings fed to the exact round-trip witness.
pub const ROUND_TRIP_PACKINGS: usize = 256;

fn worst<T: Copy>(items: impl Iterator<Item = (T, f64)>) -> Option<(T, f64)> {
    items.fold(None, |best, (i, v)| match best {
        Some((_, b)) if b >= v => best,
        _ => Some((i, v)),
    })
}

pub fn validate_witness_pipeline(g: &Graph, p: &WitnessParams, base: &std::path::Path, report: &mut Report) -> Result<()> {
    let w = match (&p.witness, p.radius) {
        (Some(path), _) => {
            let path = base.join(path);
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            io::parse_witness(&text, g.vertex_count()).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(r)) => uniform_ball_witness(g, r),
        (None, None) => bail!("[validate-witness] needs `radius` or `witness`"),
    };
    let w = match p.target {
        Some(n) => w.with_target(n),
        None => w,
    };
    let r = validate_witness(g, &w).context("validate-witness")?;
    report.metric("target_n", r.target);
    report.metric("declared_radius", r.declared_radius);
    report.metric("max_neighbor_l1", &r.max_neighbor_l1);
    report.metric("max_support_radius", r.max_support_radius.to_string());
    report.metric("max_support_size", w.max_support_size());
    if let Some((x, y)) = r.worst_edge {
        report.metric("worst_edge", format!("{x}-{y}"));
    }
    if let Some(level) = r.certified_level() {
        report.metric("certified_level", level);
    }
    report.check("sums", "sum_y p(x,y) = 1 for every x", r.sums_ok, "");
    report.check(
        "support_radius",
        "supp p(x) within distance r of x",
        r.radius_ok(),
        format!("{} <= {}", r.max_support_radius, r.declared_radius),
    );
    if r.target > 0 {
        report.check(
            "neighbor_l1",
            "||p(x) - p(y)||_1 < 1/n for x ~ y",
            r.l1_ok(),
            format!("{} < 1/{}", exact(&r.max_neighbor_l1), r.target),
        );
    }
    if let Some(expected) = &p.expect_max_l1 {
        report.check(
            "expected_max_l1",
            "max_neighbor_l1 equals the configured value",
            r.max_neighbor_l1 == expected.0,
            format!("{} vs {}", exact(&r.max_neighbor_l1), exact(&expected.0)),
        );
    }
    if p.write_witness {
        report.artifact("witness.txt", io::write_witness(&w));
    }
    Ok(())
}

pub fn multipack_pipeline(g: &Graph, p: &MultipackParams, seed: u64, report: &mut Report) -> Result<()> {
    if p.samples == 0 {
        bail!("[multipack] needs at least one sample");
    }
    let n = p.target.unwrap_or(p.radius);
    let w = uniform_ball_witness(g, p.radius).with_target(n);
    let wr = validate_witness(g, &w)?;
    report.metric("witness.radius", p.radius);
    report.metric("witness.target_n", n);
    report.metric("witness.max_neighbor_l1", &wr.max_neighbor_l1);
    report.check(
        "witness_quality",
        "||p(x) - p(y)||_1 < 1/n for x ~ y",
        wr.passes(),
        format!("{} < 1/{n}", exact(&wr.max_neighbor_l1)),
    );

    let parts = build_partitions(g, &w, p.samples, seed).context("multipack")?;
    let bound = 2 * p.radius;
    let all_v = g.vertex_count();
    let bad_parts = parts
        .iter()
        .filter(|q| !validate_packing(g, q) || q.covered_count() != all_v || !q.max_tile_diameter(g).at_most(bound))
        .count();
    report.check(
        "partition_tiles",
        "every sample partitions V into tiles of diameter <= 2R",
        bad_parts == 0,
        format!("{bad_parts} of {} samples fail", parts.len()),
    );

    let split_bound = ratio_usize(2, 2 + n);
    let split_bound_f = to_f64(&split_bound);
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let counts = split_counts(g, &parts);
    let mut csv = String::from("x,y,hits,trials,frequency,exact,sigma\n");
    let mut max_exact = Rational::zero();
    let mut off_exact = 0;
    let mut over_bound = 0;
    let mut freqs = Vec::with_capacity(edges.len());
    for (&(x, y), &hits) in edges.iter().zip(&counts) {
        let e = Estimate { hits, trials: p.samples };
        let ex = split_probability_exact(&w, x, y)?;
        let exf = to_f64(&ex);
        let sigma = e.sigma_at(exf);
        if (e.frequency_f64() - exf).abs() > p.z * sigma {
            off_exact += 1;
        }
        if !e.at_most(split_bound_f, p.z) {
            over_bound += 1;
        }
        csv.push_str(&format!("{x},{y},{hits},{},{:.6},{},{sigma:.6}\n", p.samples, e.frequency_f64(), exact(&ex)));
        freqs.push(((x, y), e.frequency_f64()));
        if ex > max_exact {
            max_exact = ex;
        }
    }
    if let Some(((x, y), _)) = worst(freqs.into_iter()) {
        let i = edges.iter().position(|&e| e == (x, y)).expect("edge listed");
        report.metric("split.worst_edge", format!("{x}-{y}"));
        report.estimate("split.worst", counts[i], p.samples, p.z * Estimate { hits: counts[i], trials: p.samples }.sigma_at(split_bound_f));
    }
    report.metric("split.max_exact", &max_exact);
    report.metric("split.bound", &split_bound);
    report.check(
        "split_exact_bound",
        "1 - |Q(x) ∩ Q(y)| / |Q(x) ∪ Q(y)| <= 2/(2+n)",
        max_exact <= split_bound,
        format!("{} <= {}", exact(&max_exact), exact(&split_bound)),
    );
    report.check(
        "split_matches_jaccard",
        "|split frequency - (1 - Jaccard)| <= z sigma",
        off_exact == 0,
        format!("{off_exact} of {} edges outside z={} sigma", edges.len(), p.z),
    );
    report.check(
        "split_frequency_bound",
        "split frequency <= 2/(2+n) + z sigma",
        over_bound == 0,
        format!("{over_bound} of {} edges above", edges.len()),
    );
    report.artifact("edges.csv", csv);

    if let Some(eps) = &p.boundary_epsilon {
        let d = g.degree_bound();
        let need = ratio_usize(2 * d, n + 2);
        if eps.0 <= need {
            bail!("boundary_epsilon {} must exceed 2d/(n+2) = {}", exact(&eps.0), exact(&need));
        }
        let epsf = to_f64(&eps.0);
        let counts = boundary_counts(g, &parts);
        let over = counts.iter().filter(|&&h| !Estimate { hits: h, trials: p.samples }.at_most(epsf, p.z)).count();
        if let Some((x, _)) = worst(counts.iter().enumerate().map(|(x, &h)| (x, h as f64))) {
            report.metric("boundary.worst_vertex", x);
            report.estimate(
                "boundary.worst",
                counts[x],
                p.samples,
                p.z * Estimate { hits: counts[x], trials: p.samples }.sigma_at(epsf),
            );
        }
        report.metric("boundary.epsilon", &eps.0);
        report.metric("boundary.threshold_2d_over_n_plus_2", &need);
        report.check(
            "boundary_fraction",
            "fraction of samples with x on a tile boundary <= eps + z sigma, eps > 2d/(n+2)",
            over == 0,
            format!("{over} of {} vertices above", counts.len()),
        );
    }

    let mp = partitions_to_multipacking(g, &parts, p.shrink)?;
    let defect = tightness_defect(&mp);
    report.metric("multipacking.m", mp.m());
    report.metric("multipacking.shrink", p.shrink);
    report.metric("multipacking.defect", &defect);
    let separated = mp.packings().iter().all(|q| is_s_separated(g, q, 1));
    report.check("multipacking_separated", "shrunk packings are 1-separated", separated, "");
    let head = Multipacking::new(all_v, mp.packings().iter().take(ROUND_TRIP_PACKINGS).cloned().collect())?;
    let head_defect = tightness_defect(&head);
    report.metric("round_trip.packings", head.m());
    report.metric("round_trip.defect", &head_defect);
    if head_defect < Rational::one() {
        let back = witness_from_multipacking(g, &head)?;
        let r = validate_witness(g, &back)?;
        let bound = &head_defect * int(2) / (Rational::one() - &head_defect);
        report.metric("round_trip.max_neighbor_l1", &r.max_neighbor_l1);
        report.metric("round_trip.bound", &bound);
        report.check(
            "round_trip",
            "||p(x) - p(y)||_1 <= 2 eps / (1 - eps) for the multipacking witness",
            r.max_neighbor_l1 <= bound && r.sums_ok,
            format!("{} <= {}", exact(&r.max_neighbor_l1), exact(&bound)),
        );
    } else {
        report.metric("round_trip", "skipped: some vertex is never covered");
    }
    report.artifact("coverage.csv", io::multipacking_report(&mp));
    if p.write_multipacking {
        report.artifact("multipacking.txt", io::write_multipacking(&mp));
    }
    Ok(())
}

fn calibration_budget(c: Option<&CalibrationParams>) -> CalibrationBudget {
    let mut b = CalibrationBudget::default();
    if let Some(c) = c {
        if let Some(k) = &c.k_candidates {
            b.k_candidates = k.clone();
        }
        b.max_k = c.max_k.or(b.max_k);
        b.probe_centers = c.probe_centers.unwrap_or(b.probe_centers);
        b.max_probe_radius = c.max_probe_radius.unwrap_or(b.max_probe_radius);
        b.node_budget = c.node_budget.unwrap_or(b.node_budget);
    }
    b
}

pub fn quasitile_pipeline(g: &Graph, p: &QuasitileParams, report: &mut Report) -> Result<()> {
    if g.vertex_count() == 0 {
        let empty = Packing::empty(0);
        report.metric("tiles", 0usize);
        report.check("empty_graph", "the empty graph gives the empty packing", empty.is_empty(), "");
        report.artifact("packing.txt", io::write_packing(&empty));
        return Ok(());
    }
    let budget = p.mediator_budget.unwrap_or(DEFAULT_MEDIATOR_BUDGET);
    let (mut cfg, probes, mediators) = match (p.k0, &p.eps1, p.k1) {
        (Some(k0), Some(eps1), Some(k1)) => {
            let cfg = QuasiTileConfig::manual(p.epsilon0.0.clone(), k0, eps1.0.clone(), k1, p.rounds.unwrap_or(16))?;
            let probes = candidate_sets(g, &CandidateFamily::Balls, &eps1.0, k1)?;
            let mediators = build_mediators(g, &probes, k1, budget).context("quasitile mediators")?;
            report.metric("constants", "manual");
            (cfg, probes, mediators)
        }
        _ => {
            let d = derive_constants(g, &p.epsilon0.0, &calibration_budget(p.calibration.as_ref()))
                .context("quasitile calibration")?;
            report.metric("constants", "derived");
            report.artifact("constants.txt", d.to_string());
            (d.config, d.candidates, d.mediators)
        }
    };
    if let Some(r) = p.rounds {
        cfg.rounds = r;
    }
    cfg.mediator_budget = budget;
    report.metric("epsilon0", &cfg.epsilon0);
    report.metric("k0", cfg.k0);
    report.metric("eps1", &cfg.eps1);
    report.metric("k1", cfg.k1);
    report.metric("eps2", &cfg.eps2);
    report.metric("m", cfg.m);
    report.metric("n_mediators", mediators.len());
    report.metric("rounds_allowed", cfg.rounds);
    report.metric("probes", probes.len());

    let (t, trace) =
        quasi_tile(g, &Packing::empty(cfg.k0), &mediators, &probes, &cfg).context("quasitile improvement loop")?;
    report.metric("tiles", t.len());
    report.metric("covered", t.covered_count());
    report.metric("rounds_run", trace.rounds.len());
    report.metric("fixed_point", trace.fixed_point.to_string());

    let target = Rational::one() - &cfg.epsilon0;
    let cov = coverage_report(g, &t, &probes);
    let mut low = 0;
    let mut min: Option<Rational> = None;
    let mut csv = String::from("probe,size,inside,coverage\n");
    for (i, (j, c)) in probes.iter().zip(&cov).enumerate() {
        if let Some(c) = c {
            if *c < target {
                low += 1;
            }
            if min.as_ref().is_none_or(|m| c < m) {
                min = Some(c.clone());
            }
            let inside = c * int(j.len());
            csv.push_str(&format!("{i},{},{},{}\n", j.len(), inside, exact(c)));
        }
    }
    if let Some(m) = &min {
        report.metric("probe_coverage.min", m);
    }
    report.check(
        "probe_coverage",
        "|J_T| / |J| >= 1 - eps0 for every probe J",
        low == 0,
        format!("{low} of {} probes below {}", probes.len(), exact(&target)),
    );
    let bad_tiles = t
        .tiles()
        .iter()
        .filter(|s| !g.is_folner(s, &cfg.epsilon0) || !g.diameter_at_most(s, cfg.k0))
        .count();
    report.check(
        "tiles_folner",
        "|∂T| / |T| < eps0 and diam T <= k0 for every tile",
        bad_tiles == 0 && validate_packing(g, &t),
        format!("{bad_tiles} of {} tiles fail", t.len()),
    );
    let mut rounds_csv = String::from("round,improvements,ledger_violations,min_ledger_slack,on_target,progressed,stalled\n");
    for r in &trace.rounds {
        rounds_csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.round,
            r.improvements,
            r.ledger_violations,
            r.min_ledger_slack.map(|s| s.to_string()).unwrap_or_default(),
            r.probes_on_target,
            r.probes_progressed,
            r.probes_stalled
        ));
        report.check(
            format!("ledger.round{}", r.round),
            "gain(J) >= h(J) - n |∂^k1 J| for every probe J",
            r.ledger_violations == 0,
            format!(
                "{} violations, min slack {}",
                r.ledger_violations,
                r.min_ledger_slack.map(|s| s.to_string()).unwrap_or_else(|| "-".into())
            ),
        );
    }
    let mut steps_csv = String::from("round,mediator,improvements,alterations\n");
    for s in &trace.steps {
        steps_csv.push_str(&format!("{},{},{},{}\n", s.round, s.mediator, s.improvements, s.alterations));
    }
    report.artifact("packing.txt", io::write_packing(&t));
    report.artifact("probes.csv", csv);
    report.artifact("rounds.csv", rounds_csv);
    report.artifact("steps.csv", steps_csv);
    Ok(())
}

pub fn ow_pipeline(g: &Graph, p: &OwParams, seed: u64, report: &mut Report) -> Result<()> {
    let mut cfg = OwConfig::whole_scale(g, p.epsilon.0.clone(), seed)?;
    if let Some(m) = p.samples {
        cfg.samples = m;
    }
    let (t, a) = ow_packing_audit(g, &cfg).context("ow-audit")?;
    report.metric("epsilon", &a.epsilon);
    report.metric("eps_prime", &a.eps_prime);
    report.metric("carved_components", a.carved_components);
    report.metric("tiles", a.tiles);
    report.metric("markers", a.markers.len());
    report.metric("m", a.m);
    report.metric("multipack_radius", a.multipack_radius);
    report.metric("multipack_defect", &a.multipack_defect);
    report.metric("j_tiles", a.j_tiles);
    report.metric("injections", a.injections);
    report.metric("uncovered", a.uncovered);
    report.metric("uncovered_mass", &a.uncovered_mass);
    report.metric("chain.lhs", &a.chain_lhs);
    report.metric("chain.middle", &a.chain_middle);
    report.metric("chain.markers", &a.chain_markers);
    report.metric("chain.rhs", &a.chain_rhs);
    report.metric("chain.bound", &a.chain_bound);
    report.check(
        "markers",
        "eps|T|/10 < |A ∩ T| < eps|T|/5 for every tile T",
        a.marker_violations == 0,
        format!("{} tiles violate", a.marker_violations),
    );
    report.check(
        "per_tile",
        "|J \\ J_F| < |A ∩ J| for every multipacking tile J",
        a.j_violations == 0,
        format!(
            "{} of {} tiles violate{}",
            a.j_violations,
            a.j_tiles,
            a.first_violation.as_ref().map(|s| format!(", first {s}")).unwrap_or_default()
        ),
    );
    report.check(
        "matchings",
        "every phi_j injects J \\ J_F into A ∩ J",
        a.matching_failures == 0 && a.injection_errors == 0,
        format!("{} missing, {} bad pairs", a.matching_failures, a.injection_errors),
    );
    report.check(
        "multipack_tight",
        "multipacking defect <= eps/11",
        a.multipack_defect <= a.eps_prime,
        format!("{} <= {}", exact(&a.multipack_defect), exact(&a.eps_prime)),
    );
    report.check(
        "counting_chain",
        "(1-eps')m mu(X \\ [F]) <= ... <= m mu(A) <= m eps/5",
        a.chain_ok(),
        "",
    );
    let direct = ratio_usize(g.vertex_count() - t.covered_count(), g.vertex_count().max(1));
    report.check(
        "uncovered_mass",
        "mu(X \\ [F]) <= eps, recounted from the packing",
        direct <= a.epsilon && direct == a.uncovered_mass,
        format!("{} <= {}", exact(&direct), exact(&a.epsilon)),
    );
    report.artifact("packing.txt", io::write_packing(&t));
    Ok(())
}

pub fn cfw_pipeline(g: &Graph, p: &CfwParams, seed: u64, report: &mut Report) -> Result<()> {
    let plan = plan_cfw(g, p.j_max, &CfwOptions { radii: p.radii.clone() }).context("cfw planning")?;
    let (seq, ds) = sample_cfw(g, &plan, seed).context("cfw sampling")?;
    let sched = schedule_of(&plan, &ds);
    report.metric("levels", sched.levels.len());
    report.metric("burn_in", p.burn_in);
    let mu = Measure::uniform(g.vertex_count().max(1)).ok();
    let coverage = match &mu {
        Some(mu) if g.vertex_count() > 0 => coverage_under_measure(&seq, mu),
        _ => vec![Rational::one(); seq.len()],
    };
    let (mut s0, mut k0, mut d0) = (1usize, 1usize, 0usize);
    for (i, l) in sched.levels.iter().enumerate() {
        let j = l.j;
        let f = &seq.levels[i];
        let two_j = ratio_usize(1, 1usize << j);
        report.metric(format!("level{j}.eps"), &l.eps);
        report.metric(format!("level{j}.s"), l.s);
        report.metric(format!("level{j}.k"), l.k);
        report.metric(format!("level{j}.D"), l.d);
        report.metric(format!("level{j}.radius"), l.radius);
        report.metric(format!("level{j}.certificate"), &l.certificate);
        report.metric(format!("level{j}.tiles"), f.len());
        report.metric(format!("level{j}.coverage"), &coverage[i]);
        report.check(format!("level{j}.eps"), "eps_j = 2^-j", l.eps == two_j, exact(&l.eps));
        report.check(
            format!("level{j}.s"),
            "s_j = 2 s_(j-1) + 3 k_(j-1)",
            l.s == 2 * s0 + 3 * k0,
            format!("{} = 2*{s0} + 3*{k0}", l.s),
        );
        report.check(
            format!("level{j}.D"),
            "D_j <= 2 D_(j-1) + k_j",
            l.d <= 2 * d0 + l.k,
            format!("{} <= 2*{d0} + {}", l.d, l.k),
        );
        let next = sched.next_s(j);
        report.check(format!("level{j}.sep"), "3 D_j <= s_(j+1)", 3 * l.d <= next, format!("{} <= {next}", 3 * l.d));
        report.check(
            format!("level{j}.certificate"),
            "tightness certificate < eps_j",
            l.certificate < l.eps,
            format!("{} < {}", exact(&l.certificate), exact(&l.eps)),
        );
        report.check(
            format!("level{j}.separated"),
            "F_j is a 1-separated packing",
            validate_packing(g, f) && is_s_separated(g, f, 1),
            "",
        );
        if j >= p.burn_in {
            report.check(
                format!("level{j}.coverage"),
                "mu([F_j]) >= 1 - sqrt(eps_j)",
                at_least_one_minus_sqrt(&coverage[i], &l.eps),
                exact(&coverage[i]),
            );
        }
        (s0, k0, d0) = (l.s, l.k, l.d);
    }
    report.check(
        "refinement",
        "every tile of F_(j-1) lies in one tile of F_j",
        seq.verify_refinement(),
        format!("{} levels", seq.len()),
    );
    if p.trials > 0 && !plan.levels.is_empty() {
        let freqs = level_split_frequencies(g, &plan, p.trials, seed).context("cfw split frequencies")?;
        let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
        let mut csv = String::from("level,x,y,hits,trials\n");
        for (l, per_edge) in sched.levels.iter().zip(&freqs) {
            let j = l.j;
            let bound = to_f64(&(&l.eps * int(2)));
            let over = per_edge.iter().filter(|e| !e.at_most(bound, p.z)).count();
            if let Some((i, _)) = worst(per_edge.iter().enumerate().map(|(i, e)| (i, e.frequency_f64()))) {
                let e = per_edge[i];
                report.metric(format!("level{j}.split.worst_edge"), format!("{}-{}", edges[i].0, edges[i].1));
                report.estimate(&format!("level{j}.split.worst"), e.hits, e.trials, p.z * e.sigma_at(bound.min(1.0)));
            }
            report.check(
                format!("level{j}.split"),
                "split frequency <= 2 eps_j + z sigma",
                over == 0,
                format!("{over} of {} edges above", per_edge.len()),
            );
            for ((x, y), e) in edges.iter().zip(per_edge) {
                csv.push_str(&format!("{j},{x},{y},{},{}\n", e.hits, e.trials));
            }
        }
        report.artifact("splits.csv", csv);
    }
    report.artifact("schedule.csv", sched.to_string());
    let mut levels = String::new();
    for (i, f) in seq.levels.iter().enumerate() {
        if i > 0 {
            levels.push_str("---\n");
        }
        levels.push_str(&io::write_packing(f));
    }
    report.artifact("sequence.txt", levels);
    Ok(())
}

/// Chi-square upper tail for the counts of one vertex's images.
fn chi_square_p(counts: &[usize], trials: usize) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let k = counts.len();
    if k < 2 {
        return 1.0;
    }
    let expect = trials as f64 / k as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

pub fn rank_pipeline(g: &Graph, p: &RankParams, seed: u64, report: &mut Report) -> Result<()> {
    if p.trials == 0 {
        bail!("[rank-partition] needs at least one trial");
    }
    let w = uniform_ball_witness(g, p.radius);
    let level = validate_witness(g, &w)?.certified_level().unwrap_or(1);
    let w = w.with_target(level);
    let rp = RankPartitioner::new(g, &w, &p.epsilon.0).context("rank-partition")?;
    report.metric("witness.certified_level", level);
    let n = g.vertex_count();
    let max_support = rp.supports.iter().map(Vec::len).max().unwrap_or(0);
    report.metric("epsilon", &p.epsilon.0);
    report.metric("support_size.max", max_support);
    let slot: Vec<std::collections::HashMap<Vertex, usize>> = rp
        .supports
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, &y)| (y, i)).collect())
        .collect();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut counts: Vec<Vec<usize>> = rp.supports.iter().map(|s| vec![0; s.len()]).collect();
    let mut splits = vec![0usize; edges.len()];
    let mut outside = 0usize;
    for t in 0..p.trials {
        let image = rp.images(tiler_core::randseq::trial_seed(seed, t as u64));
        for x in 0..n {
            match slot[x].get(&image[x]) {
                Some(&i) => counts[x][i] += 1,
                None => outside += 1,
            }
        }
        for (e, &(x, y)) in edges.iter().enumerate() {
            if image[x] != image[y] {
                splits[e] += 1;
            }
        }
    }
    report.check("image_in_support", "phi(x) lies in supp'(x)", outside == 0, format!("{outside} images outside"));
    let per_test = p.alpha / n.max(1) as f64;
    let pvals: Vec<f64> = counts.iter().map(|c| chi_square_p(c, p.trials)).collect();
    let below = pvals.iter().filter(|&&q| q < per_test).count();
    if let Some((x, q)) = worst(pvals.iter().enumerate().map(|(x, &q)| (x, -q))) {
        report.metric("uniformity.worst_vertex", x);
        report.metric("uniformity.min_p_value", -q);
    }
    report.metric("uniformity.per_vertex_alpha", per_test);
    report.check(
        "image_uniform",
        "phi(x) uniform on supp'(x): chi-square p >= alpha/|V| per vertex",
        below == 0,
        format!("{below} of {n} vertices reject at family-wise alpha {}", p.alpha),
    );
    let epsf = to_f64(&p.epsilon.0);
    let mut off_exact = 0;
    let mut over = 0;
    let mut max_exact = Rational::zero();
    for (e, &(x, y)) in edges.iter().enumerate() {
        let est = Estimate { hits: splits[e], trials: p.trials };
        let ex = jaccard_complement(&rp.supports[x], &rp.supports[y]);
        let exf = to_f64(&ex);
        if (est.frequency_f64() - exf).abs() > p.z * est.sigma_at(exf) {
            off_exact += 1;
        }
        if !est.at_most(epsf, p.z) {
            over += 1;
        }
        if ex > max_exact {
            max_exact = ex;
        }
    }
    if let Some((e, _)) = worst(splits.iter().enumerate().map(|(e, &h)| (e, h as f64))) {
        report.metric("split.worst_edge", format!("{}-{}", edges[e].0, edges[e].1));
        report.estimate(
            "split.worst",
            splits[e],
            p.trials,
            p.z * Estimate { hits: splits[e], trials: p.trials }.sigma_at(epsf),
        );
    }
    report.metric("split.max_exact", &max_exact);
    report.check(
        "split_matches_jaccard",
        "|split frequency - (1 - |S(x) ∩ S(y)| / |S(x) ∪ S(y)|)| <= z sigma",
        off_exact == 0,
        format!("{off_exact} of {} edges outside", edges.len()),
    );
    report.check(
        "split_bound",
        "split frequency <= eps + z sigma",
        over == 0,
        format!("{over} of {} edges above", edges.len()),
    );
    Ok(())
}

/// `1 - |a ∩ b| / |a ∪ b|` for sorted vertex lists.
pub fn jaccard_complement(a: &[Vertex], b: &[Vertex]) -> Rational {
    let a = VertexSet::new(a.iter().copied());
    let b = VertexSet::new(b.iter().copied());
    let union = a.union(&b).len();
    if union == 0 {
        return Rational::zero();
    }
    Rational::one() - ratio_usize(a.intersection(&b).len(), union)
}
