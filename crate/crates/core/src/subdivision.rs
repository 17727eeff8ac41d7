//! Balanced clique subdivisions: a certificate type, its validator and a
//! driver that searches for one.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{build_unit, Unit, Verdict};
use crate::graph::{bfs_distances, Graph, Path, VertexSet, UNREACHED};
use crate::routing::{fixed_length_path, RoutingParams};
use crate::search::Budget;

/// A `TK_k^{(ℓ)}`: `k` branch vertices and one path of length `ℓ` per pair.
/// `paths` lists pairs `(i, j)`, `i < j`, in lexicographic order, and the path
/// for `(i, j)` runs from `branch[i]` to `branch[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionCertificate {
    pub k: usize,
    pub ell: usize,
    pub branch: Vec<usize>,
    pub paths: Vec<Path>,
}

impl SubdivisionCertificate {
    /// Position of pair `(i, j)`, `i < j`, in `paths`.
    pub fn pair_index(k: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < k);
        i * (2 * k - i - 1) / 2 + (j - i - 1)
    }

    pub fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
    }

    /// Builds a certificate from paths keyed by unordered branch-vertex pairs,
    /// sorting the branch vertices and orienting each path.
    fn assemble(k: usize, ell: usize, mut branch: Vec<usize>, by_pair: &BTreeMap<(usize, usize), Path>) -> Self {
        branch.sort_unstable();
        let paths = Self::pairs(k)
            .map(|(i, j)| {
                let (a, b) = (branch[i], branch[j]);
                let p = by_pair.get(&(a.min(b), a.max(b))).expect("every pair is connected");
                if p.start() == a {
                    p.clone()
                } else {
                    p.reversed()
                }
            })
            .collect();
        SubdivisionCertificate { k, ell, branch, paths }
    }
}

/// Checks every defining property, reporting the first failure.
pub fn validate_subdivision(g: &Graph, cert: &SubdivisionCertificate) -> Verdict {
    let fail = |clause: &str, detail: String| Verdict::invalid(clause, detail);
    let (k, ell) = (cert.k, cert.ell);
    if cert.branch.len() != k {
        return fail("branch count", format!("{} branch vertices, expected {k}", cert.branch.len()));
    }
    if let Some(&v) = cert.branch.iter().find(|&&v| v >= g.n()) {
        return fail("branch range", format!("branch vertex {v} out of range"));
    }
    let branch: VertexSet = cert.branch.iter().copied().collect();
    if branch.len() != k {
        return fail("branch distinct", "branch vertices repeat".into());
    }
    let want = k * k.saturating_sub(1) / 2;
    if cert.paths.len() != want {
        return fail("path count", format!("{} paths, expected {want}", cert.paths.len()));
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (idx, (i, j)) in SubdivisionCertificate::pairs(k).enumerate() {
        let p = &cert.paths[idx];
        if p.vertices().is_empty() || p.start() != cert.branch[i] || p.end() != cert.branch[j] {
            return fail("path endpoints", format!("path {idx} must join {} and {}", cert.branch[i], cert.branch[j]));
        }
        if !p.is_valid_in(g) {
            return fail("path simplicity", format!("path {idx} is not a simple path of the graph"));
        }
        if p.length() != ell {
            return fail("uniform length", format!("path {idx} has length {}, expected {ell}", p.length()));
        }
        for &x in p.interior() {
            if branch.contains(x) {
                return fail("branch avoidance", format!("path {idx} passes branch vertex {x}"));
            }
            if owner[x] != usize::MAX {
                return fail("internal disjointness", format!("paths {} and {idx} share vertex {x}", owner[x]));
            }
            owner[x] = idx;
        }
    }
    Verdict::Valid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Auto,
    HighdegCores,
    UnitCores,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "highdeg-cores" => Ok(Strategy::HighdegCores),
            "unit-cores" => Ok(Strategy::UnitCores),
            other => Err(Error::Domain(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Knobs for [`find_balanced_subdivision`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionParams {
    /// Backtracking nodes over all branch sets.
    pub node_limit: u64,
    /// Candidate paths listed per pair before the list is cut off.
    pub path_candidates: usize,
    /// Branch sets tried by the backtracking phase.
    pub max_branch_sets: usize,
    /// The greedy phase abandons a branch vertex once more than this fraction
    /// of its neighbours is used by other connections while it still has
    /// pairs to connect.
    pub retire_fraction: f64,
    /// Greedy branch selection skips a vertex sharing more than this many
    /// neighbours with an already chosen one.
    pub codegree_threshold: Option<usize>,
    /// `(h₁, h₂, h₃)` of the units built by the unit strategy; `h₀ = k - 1`.
    pub unit_shape: (usize, usize, usize),
    pub routing: RoutingParams,
}

impl Default for SubdivisionParams {
    fn default() -> Self {
        SubdivisionParams {
            node_limit: 5_000_000,
            path_candidates: 256,
            max_branch_sets: 100_000,
            retire_fraction: 1.0,
            codegree_threshold: None,
            unit_shape: (1, 1, 2),
            routing: RoutingParams::default(),
        }
    }
}

/// Searches for an `ℓ`-balanced subdivision of `K_k`.
///
/// `highdeg-cores` first picks high-degree branch vertices greedily and
/// routes the pairs one after another, then falls back to backtracking over
/// branch sets and over candidate paths per pair, most constrained pair first.
/// On small graphs the backtracking is exhaustive, so `None` there means no
/// subdivision exists. `unit-cores` uses the cores of disjoint units as branch
/// vertices and routes between unit exteriors. `auto` runs both in that order.
/// Any certificate returned has passed [`validate_subdivision`].
pub fn find_balanced_subdivision(
    g: &Graph,
    k: usize,
    ell: usize,
    strategy: Strategy,
    params: &SubdivisionParams,
    budget: &Budget,
) -> Result<Option<SubdivisionCertificate>> {
    if k < 2 || ell < 1 {
        return Err(Error::Domain(format!("need k >= 2 and ell >= 1, got k={k}, ell={ell}")));
    }
    let needed = k + k * (k - 1) / 2 * (ell - 1);
    if g.n() < needed || (0..g.n()).filter(|&v| g.degree(v) + 1 >= k).count() < k {
        return Ok(None);
    }
    let found = match strategy {
        Strategy::HighdegCores => highdeg(g, k, ell, params, budget),
        Strategy::UnitCores => unit_cores(g, k, ell, params, budget),
        Strategy::Auto => highdeg(g, k, ell, params, budget).or_else(|| unit_cores(g, k, ell, params, budget)),
    };
    if let Some(cert) = &found {
        let verdict = validate_subdivision(g, cert);
        assert!(verdict.is_valid(), "driver produced an invalid certificate: {verdict:?}");
    }
    Ok(found)
}

fn highdeg(g: &Graph, k: usize, ell: usize, params: &SubdivisionParams, budget: &Budget) -> Option<SubdivisionCertificate> {
    let mut candidates: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) + 1 >= k).collect();
    candidates.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    if let Some(branch) = greedy_branch(g, &candidates, k, ell, params) {
        if let Some(cert) = greedy_connect(g, &branch, ell, params, budget) {
            return Some(cert);
        }
    }

    let mut search = PairSearch {
        g,
        ell,
        nodes: 0,
        limit: params.node_limit,
        cap: params.path_candidates,
        budget,
    };
    let mut tried = 0;
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        if tried >= params.max_branch_sets || search.exhausted() {
            return None;
        }
        tried += 1;
        let branch: Vec<usize> = combo.iter().map(|&i| candidates[i]).collect();
        if let Some(by_pair) = search.solve(&branch) {
            return Some(SubdivisionCertificate::assemble(k, ell, branch, &by_pair));
        }
        if !next_combination(&mut combo, candidates.len()) {
            return None;
        }
    }
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

/// Highest-degree vertices, pairwise at distance at least 3 when `ell ≥ 3`
/// and within the co-degree threshold when one is set.
fn greedy_branch(g: &Graph, candidates: &[usize], k: usize, ell: usize, params: &SubdivisionParams) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut near = vec![false; g.n()];
    for &v in candidates {
        if chosen.len() == k {
            break;
        }
        if ell >= 3 && near[v] {
            continue;
        }
        if let Some(limit) = params.codegree_threshold {
            let nv = g.neighbors(v);
            if chosen
                .iter()
                .any(|&c| g.neighbors(c).iter().filter(|x| nv.binary_search(x).is_ok()).count() > limit)
            {
                continue;
            }
        }
        chosen.push(v);
        let ball = bfs_distances(g, &[v], &vec![false; g.n()]);
        (0..g.n()).filter(|&x| ball[x] <= 2).for_each(|x| near[x] = true);
    }
    (chosen.len() == k).then_some(chosen)
}

/// Routes the pairs in order with [`fixed_length_path`], never revisiting a
/// choice.
fn greedy_connect(
    g: &Graph,
    branch: &[usize],
    ell: usize,
    params: &SubdivisionParams,
    budget: &Budget,
) -> Option<SubdivisionCertificate> {
    let k = branch.len();
    let mut used: VertexSet = branch.iter().copied().collect();
    let mut by_pair = BTreeMap::new();
    let mut pending: Vec<usize> = vec![k - 1; k];
    for (i, j) in SubdivisionCertificate::pairs(k) {
        let (a, b) = (branch[i], branch[j]);
        let mut w = used.clone();
        w = w.difference(&[a, b].into());
        let p = fixed_length_path(g, &w, a, b, ell, &params.routing, budget).ok()??;
        for &x in p.interior() {
            used.insert(x);
        }
        by_pair.insert((a.min(b), a.max(b)), p);
        pending[i] -= 1;
        pending[j] -= 1;
        for (idx, &v) in branch.iter().enumerate() {
            let consumed = g.neighbors(v).iter().filter(|&&x| used.contains(x) && !branch.contains(&x)).count();
            if pending[idx] > 0 && consumed as f64 > params.retire_fraction * g.degree(v) as f64 {
                return None;
            }
        }
    }
    Some(SubdivisionCertificate::assemble(k, ell, branch.to_vec(), &by_pair))
}

/// Backtracking over candidate paths for each branch pair.
struct PairSearch<'a> {
    g: &'a Graph,
    ell: usize,
    nodes: u64,
    limit: u64,
    cap: usize,
    budget: &'a Budget,
}

impl PairSearch<'_> {
    fn exhausted(&self) -> bool {
        self.nodes >= self.limit || self.budget.expired()
    }

    fn solve(&mut self, branch: &[usize]) -> Option<BTreeMap<(usize, usize), Path>> {
        let n = self.g.n();
        let mut used = vec![false; n];
        branch.iter().for_each(|&b| used[b] = true);
        let mut pending: Vec<(usize, usize)> = Vec::new();
        for (i, &a) in branch.iter().enumerate() {
            for &b in &branch[i + 1..] {
                pending.push((a.min(b), a.max(b)));
            }
        }
        let mut chosen = BTreeMap::new();
        self.extend(branch, &mut used, &mut pending, &mut chosen).then_some(chosen)
    }

    fn extend(
        &mut self,
        branch: &[usize],
        used: &mut Vec<bool>,
        pending: &mut Vec<(usize, usize)>,
        chosen: &mut BTreeMap<(usize, usize), Path>,
    ) -> bool {
        if pending.is_empty() {
            return true;
        }
        self.nodes += 1;
        if self.exhausted() || !self.degrees_suffice(branch, used, pending) {
            return false;
        }
        // Most constrained pair first.
        let mut best: Option<(usize, Vec<Path>)> = None;
        for (idx, &(a, b)) in pending.iter().enumerate() {
            let options = self.candidates(used, a, b);
            if best.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                let empty = options.is_empty();
                best = Some((idx, options));
                if empty {
                    return false;
                }
            }
        }
        let (idx, options) = best.expect("pending is nonempty");
        let pair = pending.swap_remove(idx);
        for p in options {
            p.interior().iter().for_each(|&x| used[x] = true);
            chosen.insert(pair, p.clone());
            if self.extend(branch, used, pending, chosen) {
                return true;
            }
            chosen.remove(&pair);
            p.interior().iter().for_each(|&x| used[x] = false);
            if self.exhausted() {
                break;
            }
        }
        pending.push(pair);
        let last = pending.len() - 1;
        pending.swap(idx, last);
        false
    }

    /// With `ℓ ≥ 2` every branch vertex needs a free neighbour per pending pair.
    fn degrees_suffice(&self, branch: &[usize], used: &[bool], pending: &[(usize, usize)]) -> bool {
        if self.ell < 2 {
            return true;
        }
        branch.iter().all(|&v| {
            let need = pending.iter().filter(|&&(a, b)| a == v || b == v).count();
            need == 0 || self.g.neighbors(v).iter().filter(|&&x| !used[x]).count() >= need
        })
    }

    /// Up to `cap` simple `a`-`b` paths of length `ℓ` with unused interiors.
    fn candidates(&mut self, used: &[bool], a: usize, b: usize) -> Vec<Path> {
        let g = self.g;
        if self.ell == 1 {
            return if g.has_edge(a, b) { vec![Path::new(vec![a, b])] } else { Vec::new() };
        }
        let mut blocked = used.to_vec();
        blocked[b] = false;
        let dist = distances_to(g, b, &blocked);
        let mut out = Vec::new();
        let mut seq = vec![a];
        let mut on = vec![false; g.n()];
        on[a] = true;
        self.enumerate(&dist, used, b, &mut seq, &mut on, &mut out);
        out
    }

    fn enumerate(&mut self, dist: &[usize], used: &[bool], b: usize, seq: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Path>) {
        if out.len() >= self.cap {
            return;
        }
        let cur = *seq.last().unwrap();
        let left = self.ell + 1 - seq.len();
        if left == 1 {
            if self.g.has_edge(cur, b) {
                let mut p = seq.clone();
                p.push(b);
                out.push(Path::new(p));
            }
            return;
        }
        self.nodes += 1;
        for &w in self.g.neighbors(cur) {
            if w == b || used[w] || on[w] || dist[w] == UNREACHED || dist[w] > left - 1 {
                continue;
            }
            seq.push(w);
            on[w] = true;
            self.enumerate(dist, used, b, seq, on, out);
            on[w] = false;
            seq.pop();
        }
    }
}

fn distances_to(g: &Graph, target: usize, blocked: &[bool]) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.n()];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x) {
            if !blocked[w] && dist[w] == UNREACHED {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Branch vertices are the cores of `k` disjoint units, each with one hub
/// per other unit. The pair `(i, j)` runs from core `i` along its spoke to a
/// hub and out to an exterior vertex, across to an exterior vertex of unit
/// `j` at exactly the remaining length, and back in to core `j`.
fn unit_cores(g: &Graph, k: usize, ell: usize, params: &SubdivisionParams, budget: &Budget) -> Option<SubdivisionCertificate> {
    let (h1, h2, h3) = params.unit_shape;
    let mut units: Vec<Unit> = Vec::new();
    let mut taken = VertexSet::new();
    for _ in 0..k {
        let unit = build_unit(g, &taken, k - 1, h1, h2, h3)?;
        taken = taken.union(&unit.vertex_set());
        units.push(unit);
    }
    let mut used = taken.clone();
    let mut by_pair = BTreeMap::new();
    let slot = |i: usize, j: usize| if j < i { j } else { j - 1 };
    for (i, j) in SubdivisionCertificate::pairs(k) {
        let (ui, uj) = (&units[i], &units[j]);
        let (hi, hj) = (&ui.hubs[slot(i, j)], &uj.hubs[slot(j, i)]);
        let (si, sj) = (&ui.spokes[slot(i, j)], &uj.spokes[slot(j, i)]);
        let outer = |hub: &crate::gadgets::Hub| -> Vec<usize> { hub.outer_layer().iter().copied().take(16).collect() };
        let mut joined = None;
        'search: for x in outer(hi) {
            for y in outer(hj) {
                let inner = si.length() + 2 + sj.length() + 2;
                let Some(middle) = ell.checked_sub(inner) else {
                    continue;
                };
                if middle == 0 {
                    continue;
                }
                let w = used.difference(&[x, y].into());
                if let Ok(Some(mid)) = fixed_length_path(g, &w, x, y, middle, &params.routing, budget) {
                    joined = Some((x, y, mid));
                    break 'search;
                }
            }
        }
        let (x, y, mid) = joined?;
        let into_i = ui.path_to_exterior(x)?;
        let into_j = uj.path_to_exterior(y)?;
        let mut seq = into_i.vertices().to_vec();
        seq.extend_from_slice(&mid.vertices()[1..]);
        seq.extend(into_j.vertices().iter().rev().skip(1));
        let p = Path::new(seq);
        for &v in p.vertices() {
            used.insert(v);
        }
        by_pair.insert((ui.core.min(uj.core), ui.core.max(uj.core)), p);
    }
    let cores = units.iter().map(|u| u.core).collect();
    let cert = SubdivisionCertificate::assemble(k, ell, cores, &by_pair);
    validate_subdivision(g, &cert).is_valid().then_some(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    fn hypercube(dim: usize) -> Graph {
        let n = 1 << dim;
        Graph::from_edges(n, (0..n).flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v))
            .unwrap()
    }

    fn find(g: &Graph, k: usize, ell: usize, s: Strategy) -> Option<SubdivisionCertificate> {
        find_balanced_subdivision(g, k, ell, s, &SubdivisionParams::default(), &Budget::unlimited()).unwrap()
    }

    #[test]
    fn pair_index_matches_order() {
        for k in 2..7 {
            for (idx, (i, j)) in SubdivisionCertificate::pairs(k).enumerate() {
                assert_eq!(SubdivisionCertificate::pair_index(k, i, j), idx);
            }
        }
    }

    #[test]
    fn driver_examples() {
        let k5 = complete(5);
        let cert = find(&k5, 4, 1, Strategy::Auto).unwrap();
        assert_eq!(cert.branch, [0, 1, 2, 3]);
        assert!(validate_subdivision(&k5, &cert).is_valid());

        assert_eq!(find(&hypercube(3), 4, 2, Strategy::Auto), None);

        let k44 = complete_bipartite(4, 4);
        let cert = find(&k44, 3, 2, Strategy::HighdegCores).unwrap();
        assert!(validate_subdivision(&k44, &cert).is_valid());
        let side: VertexSet = (0..4).collect();
        let on_left = cert.branch.iter().filter(|&&b| side.contains(b)).count();
        assert!(on_left == 3 || on_left == 0);

        assert!(find_balanced_subdivision(&k5, 1, 1, Strategy::Auto, &SubdivisionParams::default(), &Budget::unlimited()).is_err());
    }

    #[test]
    fn unit_strategy_on_a_path() {
        // Units with one spoke of length 1 to a (1,1)-hub: 1-2-3-8 and 5-6-7-9,
        // whose exteriors 8 and 9 are adjacent.
        let g = Graph::from_edges(10, [(0, 1), (1, 2), (2, 3), (3, 8), (8, 9), (9, 7), (7, 6), (6, 5), (5, 4)]).unwrap();
        let params = SubdivisionParams { unit_shape: (1, 1, 1), ..SubdivisionParams::default() };
        let cert = find_balanced_subdivision(&g, 2, 7, Strategy::UnitCores, &params, &Budget::unlimited())
            .unwrap()
            .unwrap();
        assert_eq!(cert.branch, [1, 5]);
        assert_eq!(cert.paths[0].vertices(), [1, 2, 3, 8, 9, 7, 6, 5]);
    }

    #[test]
    fn validation_examples() {
        let k5 = complete(5);
        let good = find(&k5, 4, 1, Strategy::Auto).unwrap();
        assert!(validate_subdivision(&k5, &good).is_valid());

        let k44 = complete_bipartite(4, 4);
        let cert = SubdivisionCertificate {
            k: 3,
            ell: 2,
            branch: vec![0, 1, 2],
            paths: vec![Path::new(vec![0, 4, 1]), Path::new(vec![0, 4, 2]), Path::new(vec![1, 6, 2])],
        };
        assert_eq!(validate_subdivision(&k44, &cert).clause(), Some("internal disjointness"));

        let cert = SubdivisionCertificate {
            k: 3,
            ell: 2,
            branch: vec![0, 1, 2],
            paths: vec![Path::new(vec![0, 4, 1]), Path::new(vec![0, 5, 2]), Path::new(vec![1, 6, 3, 7, 2])],
        };
        assert_eq!(validate_subdivision(&k44, &cert).clause(), Some("uniform length"));
    }
}
