//! Sublinear expansion: the decay function `ε(x)`, exact and sampled
//! certification, expander-subgraph extraction, max-cut halving and shortest
//! set-to-set connections.

use std::collections::VecDeque;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{average_degree, external_neighborhood, Graph, Path, VertexSet, UNREACHED};
use crate::search::Mode;

/// Largest graph certified by exhaustive subset enumeration.
pub const EXACT_LIMIT: usize = 24;

/// `(ε₁, k)` for the sublinear expansion condition. Logarithms are base 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub eps1: f64,
    pub k: f64,
}

impl ExpanderParams {
    pub fn new(eps1: f64, k: f64) -> Result<Self> {
        if !(eps1 > 0.0 && eps1 < 1.0) {
            return Err(Error::Domain(format!("eps1 must lie in (0, 1), got {eps1}")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("k must be positive, got {k}")));
        }
        Ok(ExpanderParams { eps1, k })
    }

    pub fn epsilon(&self, x: f64) -> f64 {
        epsilon(x, self.eps1, self.k)
    }

    /// Whether a set of `size` vertices falls in the window `k/2 ≤ |X| ≤ |G|/2`.
    pub fn in_window(&self, size: usize, n: usize) -> bool {
        size as f64 >= self.k / 2.0 && 2 * size <= n
    }

    /// Set sizes in the window for a graph on `n` vertices.
    pub fn window(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        let lo = ((self.k / 2.0).ceil() as usize).max(1);
        lo..=n / 2
    }

    fn violates(&self, size: usize, boundary: usize) -> bool {
        (boundary as f64) < self.epsilon(size as f64) * size as f64
    }
}

/// `ε(x) = 0` for `x < k/5`, else `ε₁ / log₂²(15x/k)`.
///
/// Unlike [`ExpanderParams::new`] this accepts any positive `eps1`, which is
/// handy for evaluating the formula itself.
pub fn epsilon(x: f64, eps1: f64, k: f64) -> f64 {
    if x < k / 5.0 {
        0.0
    } else {
        let l = (15.0 * x / k).log2();
        eps1 / (l * l)
    }
}

/// Advisory bound `(2/ε₁)·log₂³(15n/k)` on the distance between two large sets.
pub fn distance_bound(n: usize, eps1: f64, k: f64) -> f64 {
    2.0 / eps1 * (15.0 * n as f64 / k).log2().powi(3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionVerdict {
    Expander,
    Counterexample,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCertificate {
    pub mode: String,
    pub verdict: ExpansionVerdict,
    pub witness: Option<VertexSet>,
    pub sets_checked: u64,
    pub eps1: f64,
    pub k: f64,
}

/// Checks `|N(X)| ≥ ε(|X|)·|X|` for a set inside the size window.
pub fn check_expansion_witness(g: &Graph, p: &ExpanderParams, x: &VertexSet) -> Result<bool> {
    x.check_range(g.n())?;
    if !p.in_window(x.len(), g.n()) {
        return Err(Error::NotApplicable(format!(
            "|X| = {} outside the window [{}, {}]",
            x.len(),
            p.k / 2.0,
            g.n() as f64 / 2.0
        )));
    }
    Ok(!p.violates(x.len(), external_neighborhood(g, x).len()))
}

/// Certifies the expansion condition exactly (every set in the window) or by
/// seeded local search for poorly expanding sets.
pub fn certify_expander(g: &Graph, p: &ExpanderParams, mode: Mode) -> Result<ExpansionCertificate> {
    let (verdict, witness, sets_checked) = match mode {
        Mode::Exact => {
            if g.n() > EXACT_LIMIT {
                return Err(Error::TooLarge(format!(
                    "exact expansion check needs n <= {EXACT_LIMIT}, got {}",
                    g.n()
                )));
            }
            certify_exact(g, p)
        }
        Mode::Sampled { seed, trials } => certify_sampled(g, p, seed, trials),
    };
    Ok(ExpansionCertificate {
        mode: mode.name().into(),
        verdict,
        witness,
        sets_checked,
        eps1: p.eps1,
        k: p.k,
    })
}

fn certify_exact(g: &Graph, p: &ExpanderParams) -> (ExpansionVerdict, Option<VertexSet>, u64) {
    let n = g.n();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full: u64 = (1u64 << n) - 1;
    let mut checked = 0u64;
    for size in p.window(n) {
        let threshold = p.epsilon(size as f64) * size as f64;
        // Gosper's hack walks all `size`-subsets in increasing mask order.
        let mut x: u64 = (1u64 << size) - 1;
        while x <= full {
            let mut reach = 0u32;
            let mut bits = x;
            while bits != 0 {
                reach |= adj[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            let boundary = (reach & !(x as u32)).count_ones() as f64;
            checked += 1;
            if boundary < threshold {
                let witness = (0..n).filter(|&v| x >> v & 1 == 1).collect();
                return (ExpansionVerdict::Counterexample, Some(witness), checked);
            }
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    (ExpansionVerdict::Expander, None, checked)
}

fn certify_sampled(
    g: &Graph,
    p: &ExpanderParams,
    seed: u64,
    trials: usize,
) -> (ExpansionVerdict, Option<VertexSet>, u64) {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    let mut checked = 0u64;
    for trial in 0..trials {
        if n == 0 {
            break;
        }
        let (start, randomized) = if trial < n {
            (by_degree[trial], false)
        } else {
            (rng.random_range(0..n), true)
        };
        if let Some(x) = grow_low_boundary(g, p, start, randomized, &mut rng, &mut checked) {
            return (ExpansionVerdict::Counterexample, Some(x), checked);
        }
    }
    (ExpansionVerdict::Inconclusive, None, checked)
}

/// Greedily grows a set from `start`, each step adding the boundary vertex
/// that keeps the new boundary smallest, and reports the first window-sized
/// set that violates the expansion condition.
fn grow_low_boundary(
    g: &Graph,
    p: &ExpanderParams,
    start: usize,
    randomized: bool,
    rng: &mut ChaCha8Rng,
    checked: &mut u64,
) -> Option<VertexSet> {
    let n = g.n();
    let mut in_x = vec![false; n];
    let mut in_n = vec![false; n];
    let mut members = vec![start];
    let mut boundary: Vec<usize> = Vec::new();
    in_x[start] = true;
    for &w in g.neighbors(start) {
        in_n[w] = true;
        boundary.push(w);
    }
    loop {
        let size = members.len();
        if p.in_window(size, n) {
            *checked += 1;
            if p.violates(size, boundary.len()) {
                return Some(members.iter().copied().collect());
            }
        }
        if 2 * (size + 1) > n || boundary.is_empty() {
            return None;
        }
        let gain = |w: usize| {
            g.neighbors(w)
                .iter()
                .filter(|&&y| !in_x[y] && !in_n[y])
                .count()
        };
        let mut candidates = boundary.clone();
        if randomized {
            candidates.shuffle(rng);
        } else {
            candidates.sort_unstable();
        }
        let w = *candidates.iter().min_by_key(|&&w| gain(w)).unwrap();
        in_x[w] = true;
        in_n[w] = false;
        members.push(w);
        boundary.retain(|&y| y != w);
        for &y in g.neighbors(w) {
            if !in_x[y] && !in_n[y] {
                in_n[y] = true;
                boundary.push(y);
            }
        }
    }
}

/// An induced subgraph returned by [`extract_expander`].
#[derive(Clone, Debug)]
pub struct ExtractedExpander {
    pub graph: Graph,
    /// Original id of each vertex of `graph`.
    pub vertices: Vec<usize>,
    pub certificate: ExpansionCertificate,
}

/// Finds an induced subgraph `H` with `d(H) ≥ d(G)/2` and `δ(H) ≥ d(H)/2`
/// that is, as far as can be certified, an `(ε₁, k)`-expander.
///
/// Alternates two steps: delete minimum-degree vertices while some vertex has
/// degree below half the average (each deletion raises the average), then look
/// for a poorly expanding set `X` and continue in whichever of `X ∪ N(X)` and
/// the rest is denser. Sets of at most [`EXACT_LIMIT`] vertices are certified
/// exactly, larger ones by sampling with `seed` and `trials`.
pub fn extract_expander(
    g: &Graph,
    k: f64,
    eps1: f64,
    seed: u64,
    trials: usize,
) -> Result<ExtractedExpander> {
    if g.edge_count() == 0 {
        return Err(Error::Domain("graph has no edges".into()));
    }
    let p = ExpanderParams::new(eps1, k)?;
    let d0 = average_degree(g);
    let mut current = VertexSet::full(g.n());
    loop {
        current = peel_low_degree(g, &current);
        let (h, map) = g.induced_subgraph(&current);
        let mode = if h.n() <= EXACT_LIMIT {
            Mode::Exact
        } else {
            Mode::Sampled { seed, trials }
        };
        let certificate = certify_expander(&h, &p, mode)?;
        let next = certificate
            .witness
            .as_ref()
            .and_then(|x| denser_side(&h, x, d0))
            .map(|side| side.iter().map(|&v| map[v]).collect::<VertexSet>());
        match next {
            Some(side) => current = side,
            None => {
                let stats_ok = satisfies_degree_conditions(g, &h);
                assert!(stats_ok, "peeling must preserve both degree conditions");
                return Ok(ExtractedExpander {
                    graph: h,
                    vertices: map,
                    certificate,
                });
            }
        }
    }
}

/// `d(H) ≥ d(G)/2` and `δ(H) ≥ d(H)/2`, in exact integer arithmetic.
pub fn satisfies_degree_conditions(g: &Graph, h: &Graph) -> bool {
    if h.n() == 0 {
        return false;
    }
    let min_deg = (0..h.n()).map(|v| h.degree(v)).min().unwrap();
    2 * h.edge_count() * g.n() >= g.edge_count() * h.n() && min_deg * h.n() >= h.edge_count()
}

/// Repeatedly deletes a minimum-degree vertex (smallest id on ties) while its
/// degree is below half the current average.
fn peel_low_degree(g: &Graph, keep: &VertexSet) -> VertexSet {
    let mut alive = keep.mask(g.n());
    let mut deg: Vec<usize> = (0..g.n())
        .map(|v| {
            if alive[v] {
                g.neighbors(v).iter().filter(|&&w| alive[w]).count()
            } else {
                0
            }
        })
        .collect();
    let mut size = keep.len();
    let mut edges = keep.iter().map(|&v| deg[v]).sum::<usize>() / 2;
    loop {
        let Some(v) = (0..g.n()).filter(|&v| alive[v]).min_by_key(|&v| (deg[v], v)) else {
            break;
        };
        if deg[v] * size >= edges {
            break;
        }
        alive[v] = false;
        size -= 1;
        edges -= deg[v];
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    VertexSet::from_mask(&alive)
}

/// The denser of `X ∪ N(X)` and `V(H) \ X`, provided its average degree is
/// still at least `d0/2`.
fn denser_side(h: &Graph, x: &VertexSet, d0: Ratio<u64>) -> Option<VertexSet> {
    let closed = x.union(&external_neighborhood(h, x));
    let rest = VertexSet::full(h.n()).difference(x);
    let density = |s: &VertexSet| average_degree(&h.induced_subgraph(s).0);
    let (a, b) = (density(&closed), density(&rest));
    let pick = if a > b || (a == b && closed.len() <= rest.len()) {
        (closed, a)
    } else {
        (rest, b)
    };
    (pick.1 * 2 >= d0 && pick.1 > Ratio::from_integer(0)).then_some(pick.0)
}

/// Spanning bipartite subgraph keeping at least half of the edges.
///
/// Local-search max-cut: all vertices start on one side, and sweeps in vertex
/// order flip any vertex with strictly more neighbours on its own side.
pub fn bipartite_half(g: &Graph) -> Graph {
    let mut side = vec![false; g.n()];
    loop {
        let mut moved = false;
        for v in 0..g.n() {
            let same = g.neighbors(v).iter().filter(|&&w| side[w] == side[v]).count();
            if 2 * same > g.degree(v) {
                side[v] = !side[v];
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    g.spanning_subgraph(g.edges().filter(|&(u, v)| side[u] != side[v]))
}

/// A shortest path from `A` to `B` in `G - avoid`, if one of length at most
/// `max_len` exists.
///
/// Multi-source BFS scanning sources and neighbours in ascending order; among
/// the closest targets the smallest id wins. Members of `A` or `B` that lie in
/// `avoid` are ignored.
pub fn connect_sets(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    avoid: &VertexSet,
    max_len: usize,
) -> Option<Path> {
    let blocked = avoid.mask(g.n());
    let targets = b.mask(g.n());
    shortest_connection(g, a.as_slice(), &targets, &blocked, max_len)
}

pub(crate) fn shortest_connection(
    g: &Graph,
    sources: &[usize],
    targets: &[bool],
    blocked: &[bool],
    max_len: usize,
) -> Option<Path> {
    let mut dist = vec![UNREACHED; g.n()];
    let mut parent = vec![UNREACHED; g.n()];
    let mut queue = VecDeque::new();
    let mut sorted: Vec<usize> = sources.iter().copied().filter(|&s| !blocked[s]).collect();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&hit) = sorted.iter().find(|&&s| targets[s]) {
        return Some(Path::new(vec![hit]));
    }
    for &s in &sorted {
        dist[s] = 0;
        queue.push_back(s);
    }
    let mut level_hits: Vec<usize> = Vec::new();
    let mut level = 0;
    while let Some(u) = queue.pop_front() {
        if dist[u] >= max_len || (!level_hits.is_empty() && dist[u] >= level) {
            break;
        }
        for &w in g.neighbors(u) {
            if blocked[w] || dist[w] != UNREACHED {
                continue;
            }
            dist[w] = dist[u] + 1;
            parent[w] = u;
            if targets[w] {
                level = dist[w];
                level_hits.push(w);
            } else {
                queue.push_back(w);
            }
        }
    }
    let &end = level_hits.iter().min()?;
    let mut seq = vec![end];
    while parent[*seq.last().unwrap()] != UNREACHED {
        seq.push(parent[*seq.last().unwrap()]);
    }
    seq.reverse();
    Some(Path::new(seq))
}
