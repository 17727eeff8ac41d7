use rayon::prelude::*;
use serde_json::{json, Value};

use tksub::cycles::{consecutive_even_interval, reciprocal_cycle_sum};
use tksub::expander::{certify_expander, ExpanderParams};
use tksub::gadgets::{build_adjuster, validate_adjuster};
use tksub::generate::{generate, GraphKind};
use tksub::graph::{bipartition, shortest_cycle};
use tksub::kst::{kst_counting_check, kst_free, oriented_kst_free};
use tksub::search::{Budget, Mode};
use tksub::subdivision::{find_balanced_subdivision, validate_subdivision, Strategy, SubdivisionParams};
use tksub::{Graph, VertexSet};

use crate::args::{SpectrumMethod, SweepArgs};
use crate::commands::{spectrum_of, Failure, Outcome, Timings};
use crate::report::{ExperimentReport, REPORT_SCHEMA};

pub const DEFAULT_GRID: &[&str] = &[
    "cycle:8",
    "petersen",
    "hypercube:3",
    "complete-bipartite:3:4",
    "pg-incidence:2",
    "pg-incidence:3",
    "random-gnp:12:0.3",
    "random-bipartite:7:7:0.35",
    "kst-free-deletion:14:2:2:0.35",
    "gadget-chain:3",
];

/// Every grid cell, with seeds `0..seeds` for random generators and seed 0
/// otherwise, sorted by descriptor then seed.
pub fn cells(gens: &[GraphKind], seeds: u64) -> Vec<(GraphKind, u64)> {
    let mut out: Vec<(GraphKind, u64)> = gens
        .iter()
        .flat_map(|k| {
            let n = if k.is_random() { seeds } else { 1 };
            (0..n).map(move |s| (k.clone(), s))
        })
        .collect();
    out.sort_by(|a, b| (a.0.to_string(), a.1).cmp(&(b.0.to_string(), b.1)));
    out.dedup_by(|a, b| a.0.to_string() == b.0.to_string() && a.1 == b.1);
    out
}

fn battery(g: &Graph, seed: u64) -> Result<Value, Failure> {
    let unlimited = Budget::unlimited();
    let spectrum = spectrum_of(g, SpectrumMethod::Auto, &[], seed, &unlimited)?;
    let p = ExpanderParams::new(0.5, 2.0)?;
    let mode = if g.n() <= 16 { Mode::Exact } else { Mode::Sampled { seed, trials: 100 } };
    let expansion = certify_expander(g, &p, mode)?;
    let kst = kst_free(g, 2, 2, Mode::Exact)?;
    let counting = match bipartition(g) {
        Some((x, y)) if x.len() >= 2 && y.len() >= 2 && oriented_kst_free(g, &x, &y, 2, 2) => {
            Some(kst_counting_check(g, &x, &y, 2, 2)?.holds)
        }
        _ => None,
    };
    let subdivision = find_balanced_subdivision(g, 3, 2, Strategy::Auto, &SubdivisionParams::default(), &unlimited)?;
    let adjuster = build_adjuster(g, &VertexSet::new(), 2, 2, 2);
    Ok(json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "bipartite": g.is_bipartite(),
        "girth": shortest_cycle(g).map(|c| c.length()),
        "spectrum": spectrum.lengths,
        "spectrum_exact": spectrum.exact,
        "even_interval": consecutive_even_interval(&spectrum),
        "reciprocal_sum": reciprocal_cycle_sum(&spectrum).to_string(),
        "expansion": expansion.verdict,
        "c4_free": kst.free,
        "counting_check": counting,
        "subdivision_k3_l2": subdivision.as_ref().map(|c| validate_subdivision(g, c).is_valid()),
        "adjuster_r2": adjuster.as_ref().map(|a| validate_adjuster(g, a, 2, 2, 2).is_valid()),
    }))
}

fn cell_report((kind, seed): &(GraphKind, u64)) -> Value {
    let mut row = json!({ "generator": kind.to_string(), "seed": seed });
    match generate(kind, *seed).map_err(Failure::from).and_then(|g| battery(&g, *seed)) {
        Ok(Value::Object(fields)) => row.as_object_mut().unwrap().extend(fields),
        Ok(_) => unreachable!("battery returns an object"),
        Err(f) => row["error"] = json!({ "kind": f.kind, "message": f.message }),
    }
    row
}

pub fn run_sweep(a: &SweepArgs) -> Outcome {
    let gens: Vec<GraphKind> = if a.gens.is_empty() {
        DEFAULT_GRID.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    } else {
        a.gens.clone()
    };
    let grid = cells(&gens, a.seeds);
    let mut timings = Timings::default();
    let rows: Vec<Value> = timings.time("sweep", || grid.par_iter().map(cell_report).collect());
    Ok(ExperimentReport {
        schema: REPORT_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "sweep".into(),
        input: json!({ "generators": gens.iter().map(ToString::to_string).collect::<Vec<_>>(), "seeds": a.seeds }),
        parameters: json!({ "cells": grid.len() }),
        result: json!({ "cells": rows }),
        budget_exhausted: false,
        timings_ms: a.output.timings.then_some(timings.into_inner()),
    })
}
