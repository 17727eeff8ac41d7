//! Acceptance suite: one pass/fail line per criterion.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use tksub::cycles::{consecutive_even_interval, cycle_spectrum_exact, parity_class};
use tksub::expander::{certify_expander, check_expansion_witness, extract_expander, ExpanderParams, ExpansionVerdict};
use tksub::gadgets::{
    build_adjuster, build_simple_adjuster, build_unit, merge_adjusters, validate_adjuster, Adjuster,
};
use tksub::generate::{all_graphs, corpus, generate_from_str, pg_incidence};
use tksub::graph::bipartition;
use tksub::kst::{kst_counting_check, kst_free, oriented_kst_free};
use tksub::oracle::{brute_adjuster_lengths, brute_expansion, brute_kst, brute_spectrum, brute_subdivision};
use tksub::routing::{fixed_length_path, RoutingParams};
use tksub::search::{Budget, Mode};
use tksub::subdivision::{find_balanced_subdivision, validate_subdivision, Strategy, SubdivisionParams};
use tksub::{Error, Graph, Path, VertexSet};

type Outcome = Result<String, String>;

/// Observations collected across all criteria for the two suite-wide laws.
#[derive(Default)]
struct Tally {
    parity_paths: usize,
    parity_violations: Vec<String>,
    counting_instances: usize,
    counting_failures: Vec<String>,
}

impl Tally {
    fn paths<'a>(&mut self, g: &Graph, paths: impl IntoIterator<Item = &'a Path>, context: &str) {
        if !g.is_bipartite() {
            return;
        }
        for p in paths {
            self.parity_paths += 1;
            let class = parity_class(g, p.start(), p.end()).expect("bipartite host");
            if p.length() % 2 != class as usize % 2 {
                self.parity_violations.push(format!("{context}: {:?} has class {class}", p.vertices()));
            }
        }
    }

    /// Runs the counting check in every orientation verified `K_{s,t}`-free.
    fn counting(&mut self, g: &Graph, context: &str) {
        let Some((x, y)) = bipartition(g) else { return };
        for (s, t) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            for (t_side, s_side) in [(&x, &y), (&y, &x)] {
                if oriented_kst_free(g, t_side, s_side, s, t) {
                    self.counting_instances += 1;
                    let check = kst_counting_check(g, t_side, s_side, s, t).expect("sides partition a bipartite host");
                    if !check.holds {
                        self.counting_failures.push(format!("{context} (s={s}, t={t}): {} > {}", check.lhs, check.rhs));
                    }
                }
            }
        }
    }
}

fn first_failures(list: &[String]) -> String {
    list.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
}

fn within(elapsed: Duration, limit_secs: u64, summary: String, failures: &[String]) -> Outcome {
    if !failures.is_empty() {
        return Err(format!("{summary}; {} failure(s): {}", failures.len(), first_failures(failures)));
    }
    if elapsed > Duration::from_secs(limit_secs) {
        return Err(format!("{summary}; took {elapsed:.1?}, limit {limit_secs}s"));
    }
    Ok(summary)
}

fn random_graphs(count: u64, orders: &[usize], label: &str) -> Vec<Graph> {
    (0..count)
        .map(|seed| {
            let n = orders[seed as usize % orders.len()];
            let p = [0.2, 0.3, 0.45][seed as usize % 3];
            generate_from_str(&format!("random-gnp:{n}:{p}"), seed ^ label.len() as u64).unwrap()
        })
        .collect()
}

fn graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(|n| all_graphs(n).unwrap()).collect()
}

fn spectra() -> Outcome {
    let start = Instant::now();
    let mut hosts = corpus(7).unwrap();
    let corpus_len = hosts.len();
    hosts.extend(random_graphs(200, &[5, 6, 7, 8, 9, 10, 11, 12], "spectra"));
    let mut failures = Vec::new();
    for g in &hosts {
        let fast = cycle_spectrum_exact(g).map_err(|e| e.to_string())?;
        let slow = brute_spectrum(g).map_err(|e| e.to_string())?;
        if fast.lengths != slow.lengths {
            failures.push(format!("{}: {:?} vs {:?}", g.to_edge_list(), fast.lengths, slow.lengths));
        }
    }
    let summary = format!("{corpus_len} corpus graphs + 200 random, {} mismatches", failures.len());
    within(start.elapsed(), 120, summary, &failures)
}

fn expansion() -> Outcome {
    let start = Instant::now();
    let mut hosts = graphs_up_to(8);
    hosts.extend(random_graphs(200, &[9, 10], "expansion"));
    let mut failures = Vec::new();
    let mut counterexamples = 0;
    for (eps1, k) in [(0.2, 2.0), (0.5, 1.0), (0.9, 3.0)] {
        let p = ExpanderParams::new(eps1, k).unwrap();
        for g in &hosts {
            let cert = certify_expander(g, &p, Mode::Exact).map_err(|e| e.to_string())?;
            let brute = brute_expansion(g, &p).map_err(|e| e.to_string())?;
            let says_counterexample = cert.verdict == ExpansionVerdict::Counterexample;
            if says_counterexample != brute.is_some() || cert.verdict == ExpansionVerdict::Inconclusive {
                failures.push(format!("{} (eps1={eps1}, k={k}): {:?}", g.to_edge_list(), cert.verdict));
            }
            if says_counterexample {
                counterexamples += 1;
                let confirmed = cert.witness.as_ref().is_some_and(|x| check_expansion_witness(g, &p, x) == Ok(false));
                if !confirmed {
                    failures.push(format!("{}: witness not confirmed", g.to_edge_list()));
                }
            }
        }
    }
    let summary = format!(
        "{} graphs x 3 parameter sets, {counterexamples} confirmed counterexamples, {} mismatches",
        hosts.len(),
        failures.len()
    );
    within(start.elapsed(), 180, summary, &failures)
}

fn kst(tally: &mut Tally) -> Outcome {
    let mut hosts = graphs_up_to(8);
    hosts.extend(random_graphs(200, &[9], "kst"));
    let mut failures = Vec::new();
    for g in &hosts {
        for (s, t) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            if s > g.n() {
                continue;
            }
            let fast = kst_free(g, s, t, Mode::Exact).map_err(|e| e.to_string())?;
            let slow = brute_kst(g, s, t).map_err(|e| e.to_string())?;
            if fast.free != slow.is_none() || fast.witness.as_ref().is_some_and(|w| !w.is_valid_in(g)) {
                failures.push(format!("{} (s={s}, t={t})", g.to_edge_list()));
            }
        }
        tally.counting(g, "kst corpus");
    }
    within(Duration::ZERO, 1, format!("{} graphs x 4 (s,t), {} mismatches", hosts.len(), failures.len()), &failures)
}

fn adjusters(tally: &mut Tally) -> Outcome {
    let (mut made, mut merged, mut brute_checked) = (0, 0, 0);
    let mut failures = Vec::new();
    let (d, m) = (2, 2);
    for seed in 0..100u64 {
        let count = 2 + seed as usize % 3;
        let g = generate_from_str(&format!("gadget-chain:{count}"), seed).unwrap();
        let mut built: Vec<(&str, Adjuster)> = Vec::new();
        if let Some(a) = build_simple_adjuster(&g, &VertexSet::new(), d, m) {
            if let Some(b) = build_simple_adjuster(&g, &a.vertex_set(), d, m) {
                if let Some(c) = merge_adjusters(&g, &a, &b, &VertexSet::new()) {
                    built.push(("merge", c));
                }
                built.push(("simple", b));
            }
            built.push(("simple", a));
        }
        for r in 1..=count {
            if let Some(a) = build_adjuster(&g, &VertexSet::new(), d, m, r) {
                built.push(("induction", a));
            }
        }
        for (how, adj) in built {
            made += 1;
            if adj.k >= 2 {
                merged += 1;
            }
            let report = validate_adjuster(&g, &adj, d, m, adj.k);
            if !report.is_valid() {
                failures.push(format!("seed {seed} {how}: {:?}", report.verdict()));
            }
            tally.paths(&g, &report.witnesses, "adjuster witnesses");
            if adj.center.len() + 2 <= 14 {
                brute_checked += 1;
                let lengths = brute_adjuster_lengths(&g, adj.v1, adj.v2, &adj.center).map_err(|e| e.to_string())?;
                let wanted: BTreeSet<usize> = (0..=adj.k).map(|i| adj.initial_length + 2 * i).collect();
                if !wanted.is_subset(&lengths) {
                    failures.push(format!("seed {seed} {how}: lengths {lengths:?} miss {wanted:?}"));
                }
            }
        }
        tally.counting(&g, "gadget chain");
    }
    if merged == 0 {
        failures.push("no adjuster with k >= 2 was produced".into());
    }
    let summary = format!("{made} adjusters ({merged} with k >= 2), {brute_checked} brute-checked, {} failures", failures.len());
    within(Duration::ZERO, 1, summary, &failures)
}

fn extraction() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut tested = 0;
    for seed in 0..100u64 {
        let n = 20 + (seed as usize * 37) % 181;
        let avg = [3.0, 5.0, 8.0, 12.0][seed as usize % 4];
        let g = generate_from_str(&format!("random-gnp:{n}:{}", avg / (n - 1) as f64), seed).unwrap();
        if g.edge_count() == 0 {
            continue;
        }
        tested += 1;
        let h = extract_expander(&g, 2.0, 0.5, seed, 100).map_err(|e| e.to_string())?;
        let (induced, _) = g.induced_subgraph(&h.vertices.iter().copied().collect());
        // d(H) >= d(G)/2 and delta(H) >= d(H)/2, cross-multiplied.
        let (eg, ng) = (g.edge_count() as u128, g.n() as u128);
        let (eh, nh) = (h.graph.edge_count() as u128, h.graph.n() as u128);
        let min_deg = (0..h.graph.n()).map(|v| h.graph.degree(v)).min().unwrap_or(0) as u128;
        if induced != h.graph || nh == 0 || 2 * eh * ng < eg * nh || min_deg * nh < eh {
            failures.push(format!("seed {seed}: n(H)={nh}, e(H)={eh}, min degree {min_deg}"));
        }
    }
    within(start.elapsed(), 120, format!("{tested} random graphs, {} failures", failures.len()), &failures)
}

fn projective_planes(tally: &mut Tally) -> Outcome {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for q in [2usize, 3, 4] {
        let g = pg_incidence(q as u32).map_err(|e| e.to_string())?;
        let (n, e) = (g.n() as u128, g.edge_count() as u128);
        let free = kst_free(&g, 2, 2, Mode::Exact).map_err(|e| e.to_string())?.free;
        let brute_free = brute_kst(&g, 2, 2).map_err(|e| e.to_string())?.is_none();
        let expected = ((q + 1) * (q * q + q + 1)) as u128;
        // e <= sqrt(2) n^{3/2}  <=>  e^2 <= 2 n^3
        if !free || !brute_free || e != expected || e * e > 2 * n * n * n {
            failures.push(format!("q={q}: free={free}/{brute_free}, e={e}, n={n}"));
        }
        rows.push(format!("q={q}: e={e} <= sqrt2*{n}^1.5"));
        tally.counting(&g, &format!("pg-incidence:{q}"));
    }
    within(Duration::ZERO, 1, rows.join(", "), &failures)
}

fn heawood() -> Outcome {
    let g = pg_incidence(2).map_err(|e| e.to_string())?;
    let fast = cycle_spectrum_exact(&g).map_err(|e| e.to_string())?;
    let slow = brute_spectrum(&g).map_err(|e| e.to_string())?;
    let want: BTreeSet<usize> = [6, 8, 10, 12, 14].into();
    let interval = consecutive_even_interval(&fast);
    let summary = format!("spectrum {:?}, interval {interval:?}", fast.lengths);
    if fast.lengths == want && slow.lengths == want && interval == Some((6, 14)) && fast.witnesses_valid_in(&g) {
        Ok(summary)
    } else {
        Err(format!("{summary}, brute {:?}", slow.lengths))
    }
}

fn subdivisions(tally: &mut Tally) -> Outcome {
    let start = Instant::now();
    let hosts = graphs_up_to(8);
    let params = SubdivisionParams::default();
    let (mut found, mut failures) = (0, Vec::new());
    for g in &hosts {
        for k in 2..=4 {
            for ell in 1..=2 {
                let cert = find_balanced_subdivision(g, k, ell, Strategy::Auto, &params, &Budget::unlimited())
                    .map_err(|e| e.to_string())?;
                let brute = brute_subdivision(g, k, ell).map_err(|e| e.to_string())?;
                if cert.is_some() != brute.is_some() {
                    failures.push(format!("{} (k={k}, ell={ell}): driver {} oracle {}", g.to_edge_list(), cert.is_some(), brute.is_some()));
                }
                for c in cert.iter().chain(brute.iter()) {
                    if !validate_subdivision(g, c).is_valid() {
                        failures.push(format!("{} (k={k}, ell={ell}): invalid certificate", g.to_edge_list()));
                    }
                    tally.paths(g, &c.paths, "subdivision");
                }
                found += usize::from(cert.is_some());
            }
        }
    }
    let summary = format!("{} graphs x 6 (k, ell), {found} found, {} disagreements", hosts.len(), failures.len());
    within(start.elapsed(), 300, summary, &failures)
}

/// Extra routed paths and unit spokes on bipartite hosts, then the verdict
/// over everything tallied.
fn parity(tally: &mut Tally) -> Outcome {
    let params = RoutingParams::default();
    let mut hosts: Vec<(String, Graph)> = [2u32, 3].iter().map(|&q| (format!("pg-incidence:{q}"), pg_incidence(q).unwrap())).collect();
    for seed in 0..30u64 {
        let descriptor = format!("random-bipartite:8:8:{}", [0.25, 0.4][seed as usize % 2]);
        hosts.push((format!("{descriptor}@{seed}"), generate_from_str(&descriptor, seed).unwrap()));
    }
    let mut refused = 0;
    for (name, g) in &hosts {
        let n = g.n();
        for i in 0..12 {
            let (u, v) = ((i * 5) % n, (i * 11 + 3) % n);
            for ell in [1, 2, 3, 4, 5, 7] {
                match fixed_length_path(g, &VertexSet::new(), u, v, ell, &params, &Budget::seconds(2.0)) {
                    Ok(Some(p)) => tally.paths(g, [&p], name),
                    Ok(None) => {}
                    Err(Error::Parity { .. }) => refused += 1,
                    Err(e) => return Err(format!("{name}: {e}")),
                }
            }
        }
        if let Some(unit) = build_unit(g, &VertexSet::new(), 2, 1, 1, 2) {
            tally.paths(g, &unit.spokes, name);
        }
        tally.counting(g, name);
    }
    let summary = format!(
        "{} paths checked across the suite, {refused} wrong-parity requests refused, {} violations",
        tally.parity_paths,
        tally.parity_violations.len()
    );
    if tally.parity_paths == 0 {
        return Err("no paths were checked".into());
    }
    within(Duration::ZERO, 1, summary, &tally.parity_violations)
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tksub"))
            .args(["sweep", "--seeds", "3", "--json", "-"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() || !b.status.success() {
        return Err(format!("sweep failed: {}", String::from_utf8_lossy(&a.stderr)));
    }
    let cells = serde_json::from_slice::<serde_json::Value>(&a.stdout).map_err(|e| e.to_string())?["result"]["cells"]
        .as_array()
        .map_or(0, Vec::len);
    if a.stdout == b.stdout {
        Ok(format!("{cells} cells, {} bytes identical", a.stdout.len()))
    } else {
        Err("the two sweeps differ".into())
    }
}

fn counting(tally: &Tally) -> Outcome {
    let summary = format!("{} K_{{s,t}}-free orientations checked, {} failures", tally.counting_instances, tally.counting_failures.len());
    if tally.counting_instances == 0 {
        return Err("no instances were checked".into());
    }
    within(Duration::ZERO, 1, summary, &tally.counting_failures)
}

fn main() {
    let suite = Instant::now();
    let mut tally = Tally::default();
    let mut results: Vec<(u8, &str, Outcome, Duration)> = Vec::new();
    let mut record = |id: u8, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((id, name, outcome, start.elapsed()));
    };
    record(1, "oracle equivalence: cycle spectra", &mut spectra);
    record(2, "oracle equivalence: expansion", &mut expansion);
    record(3, "oracle equivalence: K_{s,t}", &mut || kst(&mut tally));
    record(4, "adjuster law", &mut || adjusters(&mut tally));
    record(5, "expander extraction degree conditions", &mut extraction);
    record(6, "projective planes are C4-free and meet the edge bound", &mut || projective_planes(&mut tally));
    record(7, "Heawood even interval", &mut heawood);
    record(8, "subdivision completeness at oracle scale", &mut || subdivisions(&mut tally));
    record(10, "sweep determinism", &mut determinism);
    record(9, "parity law", &mut || parity(&mut tally));
    record(11, "counting check on K_{s,t}-free instances", &mut || counting(&tally));

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, name, outcome, took) in &results {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] C{id:<2} {name}: {detail} ({:.1}s)", took.as_secs_f64());
    }
    println!("{} of {} criteria passed in {:.1}s", results.len() - failed, results.len(), suite.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
