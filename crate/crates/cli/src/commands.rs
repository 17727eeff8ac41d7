use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use tksub::cycles::{
    consecutive_even_interval, cycle_spectrum_exact, cycle_spectrum_search, doubling_expansion_check,
    even_cycle_regime_report, parity_class, reciprocal_cycle_sum, CycleSpectrum, RegimeParams, SpectrumSearchParams,
    EXACT_SPECTRUM_LIMIT,
};
use tksub::expander::{certify_expander, check_expansion_witness, extract_expander, satisfies_degree_conditions, ExpanderParams};
use tksub::gadgets::{
    build_adjuster_with, build_hub, build_unit, validate_adjuster, validate_hub, validate_unit, CyclePolicy,
};
use tksub::generate::generate;
use tksub::graph::{bipartition, degree_stats, load_graph};
use tksub::kst::{kst_counting_check, kst_free, oriented_kst_free};
use tksub::oracle::{brute_adjuster_lengths, brute_expansion, brute_kst, brute_spectrum, brute_subdivision};
use tksub::presets::{preset_eval, PresetInput};
use tksub::routing::{fixed_length_path, RoutingParams};
use tksub::search::{Budget, Mode};
use tksub::subdivision::{find_balanced_subdivision, validate_subdivision, SubdivisionParams};
use tksub::{Graph, VertexSet};

use crate::args::*;
use crate::report::{ExperimentReport, REPORT_SCHEMA};

/// A failed run: a machine-readable kind and a message.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl From<tksub::Error> for Failure {
    fn from(e: tksub::Error) -> Self {
        Failure { kind: e.kind().to_string(), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { kind: "io".into(), message: e.to_string() }
    }
}

pub type Outcome = Result<ExperimentReport, Failure>;

#[derive(Default)]
pub struct Timings(BTreeMap<String, f64>);

impl Timings {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn into_inner(self) -> BTreeMap<String, f64> {
        self.0
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

pub fn load(input: &GraphInput) -> Result<(Graph, Value), Failure> {
    let (g, mut desc) = match (&input.input, &input.gen) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            (load_graph(&text)?, json!({ "file": path.display().to_string() }))
        }
        (None, Some(kind)) => {
            let seed = kind.is_random().then_some(input.seed);
            (generate(kind, input.seed)?, json!({ "generator": kind.to_string(), "seed": seed }))
        }
        (None, None) => {
            return Err(Failure { kind: "usage".into(), message: "either --input or --gen is required".into() });
        }
    };
    desc["n"] = json!(g.n());
    desc["edges"] = json!(g.edge_count());
    Ok((g, desc))
}

fn budget_of(output: &Output) -> Budget {
    output.budget.map_or_else(Budget::unlimited, Budget::seconds)
}

fn avoid_set(g: &Graph, avoid: &[usize]) -> Result<VertexSet, Failure> {
    let w: VertexSet = avoid.iter().copied().collect();
    w.check_range(g.n())?;
    Ok(w)
}

fn sampled_or_exact(trials: Option<usize>, seed: u64) -> Mode {
    trials.map_or(Mode::Exact, |trials| Mode::Sampled { seed, trials })
}

/// Exact up to [`EXACT_SPECTRUM_LIMIT`] vertices under `auto`.
pub fn spectrum_of(g: &Graph, method: SpectrumMethod, targets: &[usize], seed: u64, budget: &Budget) -> Result<CycleSpectrum, Failure> {
    let exact = match method {
        SpectrumMethod::Exact => true,
        SpectrumMethod::Search => false,
        SpectrumMethod::Auto => g.n() <= EXACT_SPECTRUM_LIMIT,
    };
    if exact {
        return Ok(cycle_spectrum_exact(g)?);
    }
    let all: Vec<usize> = (3..=g.n()).collect();
    let targets = if targets.is_empty() { &all[..] } else { targets };
    Ok(cycle_spectrum_search(g, targets, seed, &SpectrumSearchParams::default(), budget))
}

fn finish(
    command: &str,
    input: Value,
    parameters: Value,
    result: Value,
    budget: &Budget,
    output: &Output,
    timings: Timings,
) -> ExperimentReport {
    ExperimentReport {
        schema: REPORT_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        input,
        parameters,
        result,
        budget_exhausted: budget.was_exhausted(),
        timings_ms: output.timings.then_some(timings.0),
    }
}

/// Runs a graph subcommand: loads the host, times `body`, wraps the result.
fn with_graph<P: Serialize + clap::Args>(
    name: &str,
    run: &Run<P>,
    body: impl FnOnce(&Graph, &P, u64, &Budget, &mut Timings) -> Result<Value, Failure>,
) -> Outcome {
    let (g, input) = load(&run.common.graph)?;
    let budget = budget_of(&run.common.output);
    let mut timings = Timings::default();
    let result = body(&g, &run.params, run.common.graph.seed, &budget, &mut timings)?;
    Ok(finish(name, input, to_value(&run.params), result, &budget, &run.common.output, timings))
}

pub fn execute(command: &Command) -> Outcome {
    match command {
        Command::CertifyExpander(run) => with_graph("certify-expander", run, |g, a, seed, _, tm| {
            let p = ExpanderParams::new(a.p.eps1, a.p.k)?;
            let cert = tm.time("certify", || certify_expander(g, &p, sampled_or_exact(a.trials, seed)))?;
            let confirmed = cert.witness.as_ref().map(|x| check_expansion_witness(g, &p, x)).transpose()?.map(|ok| !ok);
            Ok(json!({ "certificate": cert, "witness_confirmed": confirmed }))
        }),
        Command::ExtractExpander(run) => with_graph("extract-expander", run, |g, a, seed, _, tm| {
            let h = tm.time("extract", || extract_expander(g, a.p.k, a.p.eps1, seed, a.trials))?;
            let stats = degree_stats(&h.graph)?;
            Ok(json!({
                "vertices": h.vertices,
                "n": h.graph.n(),
                "edges": h.graph.edge_count(),
                "average_degree": stats.average.to_string(),
                "minimum_degree": stats.minimum,
                "degree_conditions": satisfies_degree_conditions(g, &h.graph),
                "certificate": h.certificate,
            }))
        }),
        Command::KstCheck(run) => with_graph("kst-check", run, |g, a, seed, _, tm| {
            let (s, t) = (a.st.s, a.st.t);
            let verdict = tm.time("kst", || kst_free(g, s, t, sampled_or_exact(a.trials, seed)))?;
            let mut orientations = Vec::new();
            if let Some((x, y)) = bipartition(g) {
                for (t_side, s_side) in [(&x, &y), (&y, &x)] {
                    let free = oriented_kst_free(g, t_side, s_side, s, t);
                    let counting = if free { Some(kst_counting_check(g, t_side, s_side, s, t)?) } else { None };
                    orientations.push(json!({ "t_side": t_side, "free": free, "counting_check": counting }));
                }
            }
            Ok(json!({ "verdict": verdict, "orientations": orientations }))
        }),
        Command::BuildHub(run) => with_graph("build-hub", run, |g, a, _, _, tm| {
            let w = avoid_set(g, &a.avoid)?;
            let hub = tm.time("build", || build_hub(g, &w, a.h1, a.h2));
            let verdict = hub.as_ref().map(|h| validate_hub(g, h, a.h1, a.h2));
            Ok(json!({ "hub": hub, "verdict": verdict }))
        }),
        Command::BuildUnit(run) => with_graph("build-unit", run, |g, a, _, _, tm| {
            let w = avoid_set(g, &a.avoid)?;
            let unit = tm.time("build", || build_unit(g, &w, a.h0, a.h1, a.h2, a.h3));
            let verdict = unit.as_ref().map(|u| validate_unit(g, u, a.h0, a.h1, a.h2, a.h3));
            Ok(json!({ "unit": unit, "verdict": verdict }))
        }),
        Command::BuildAdjuster(run) => with_graph("build-adjuster", run, |g, a, _, _, tm| {
            let w = avoid_set(g, &a.avoid)?;
            let policy = match a.policy {
                Policy::ShortestCycle => CyclePolicy::ShortestCycle,
                Policy::ShortestEven => CyclePolicy::ShortestEven,
            };
            let adj = tm.time("build", || build_adjuster_with(g, &w, a.d, a.m, a.r, policy));
            let report = adj.as_ref().map(|x| validate_adjuster(g, x, a.d, a.m, a.r));
            Ok(json!({ "adjuster": adj, "report": report }))
        }),
        Command::Route(run) => with_graph("route", run, |g, a, _, budget, tm| {
            let w = avoid_set(g, &a.avoid)?;
            let params = RoutingParams::default();
            let path = tm.time("route", || fixed_length_path(g, &w, a.from, a.to, a.length, &params, budget))?;
            let class = bipartition(g).map(|_| parity_class(g, a.from, a.to)).transpose()?;
            Ok(json!({ "path": path, "parity_class": class }))
        }),
        Command::FindSubdivision(run) => with_graph("find-subdivision", run, |g, a, _, budget, tm| {
            let params = SubdivisionParams::default();
            let (k, ell) = (a.k_ell.k, a.k_ell.ell);
            let cert = tm.time("search", || find_balanced_subdivision(g, k, ell, a.strategy, &params, budget))?;
            let verdict = cert.as_ref().map(|c| validate_subdivision(g, c));
            Ok(json!({ "certificate": cert, "verdict": verdict }))
        }),
        Command::Spectrum(run) => with_graph("spectrum", run, |g, a, seed, budget, tm| {
            let spectrum = tm.time("spectrum", || spectrum_of(g, a.method, &a.targets, seed, budget))?;
            let sum = reciprocal_cycle_sum(&spectrum);
            Ok(json!({ "spectrum": spectrum, "reciprocal_sum": sum.to_string() }))
        }),
        Command::EvenInterval(run) => with_graph("even-interval", run, |g, a, seed, budget, tm| {
            let spectrum = tm.time("spectrum", || spectrum_of(g, a.method, &a.targets, seed, budget))?;
            Ok(json!({ "interval": consecutive_even_interval(&spectrum), "exact": spectrum.exact }))
        }),
        Command::DoublingCheck(run) => with_graph("doubling-check", run, |g, a, seed, _, tm| {
            let check = tm.time("doubling", || doubling_expansion_check(g, a.bound, sampled_or_exact(a.trials, seed)))?;
            Ok(to_value(&check))
        }),
        Command::RegimeReport(run) => with_graph("regime-report", run, |g, a, seed, budget, tm| {
            let p = RegimeParams { s: a.s, t: a.t, eps1: a.eps1, eps2: a.eps2, eps: a.eps };
            let report = tm.time("regime", || even_cycle_regime_report(g, &p, seed, budget))?;
            Ok(to_value(&report))
        }),
        Command::Presets(a) => {
            let input = PresetInput { n: a.n, d: a.d, s: a.s, t: a.t, eps1: a.eps1, eps2: a.eps2, c: a.c };
            let table = preset_eval(&input)?;
            let budget = Budget::unlimited();
            Ok(finish("presets", Value::Null, to_value(a), to_value(&table), &budget, &a.output, Timings::default()))
        }
        Command::Sweep(a) => crate::sweep::run_sweep(a),
        Command::OracleSpectrum(run) => with_graph("oracle-spectrum", run, |g, _, _, _, tm| {
            Ok(to_value(&tm.time("oracle", || brute_spectrum(g))?))
        }),
        Command::OracleExpansion(run) => with_graph("oracle-expansion", run, |g, a, _, _, tm| {
            let p = ExpanderParams::new(a.eps1, a.k)?;
            let witness = tm.time("oracle", || brute_expansion(g, &p))?;
            Ok(json!({ "expander": witness.is_none(), "witness": witness }))
        }),
        Command::OracleKst(run) => with_graph("oracle-kst", run, |g, a, _, _, tm| {
            let witness = tm.time("oracle", || brute_kst(g, a.s, a.t))?;
            Ok(json!({ "free": witness.is_none(), "witness": witness }))
        }),
        Command::OracleSubdivision(run) => with_graph("oracle-subdivision", run, |g, a, _, _, tm| {
            Ok(json!({ "certificate": tm.time("oracle", || brute_subdivision(g, a.k, a.ell))? }))
        }),
        Command::OracleAdjuster(run) => with_graph("oracle-adjuster", run, |g, a, _, _, tm| {
            let center = avoid_set(g, &a.center)?;
            Ok(json!({ "lengths": tm.time("oracle", || brute_adjuster_lengths(g, a.v1, a.v2, &center))? }))
        }),
    }
}

/// The command's output flags.
pub fn output_of(command: &Command) -> &Output {
    match command {
        Command::CertifyExpander(r) => &r.common.output,
        Command::ExtractExpander(r) => &r.common.output,
        Command::KstCheck(r) => &r.common.output,
        Command::BuildHub(r) => &r.common.output,
        Command::BuildUnit(r) => &r.common.output,
        Command::BuildAdjuster(r) => &r.common.output,
        Command::Route(r) => &r.common.output,
        Command::FindSubdivision(r) => &r.common.output,
        Command::Spectrum(r) | Command::EvenInterval(r) => &r.common.output,
        Command::DoublingCheck(r) => &r.common.output,
        Command::RegimeReport(r) => &r.common.output,
        Command::Presets(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::OracleSpectrum(r) => &r.common.output,
        Command::OracleExpansion(r) => &r.common.output,
        Command::OracleKst(r) => &r.common.output,
        Command::OracleSubdivision(r) => &r.common.output,
        Command::OracleAdjuster(r) => &r.common.output,
    }
}
