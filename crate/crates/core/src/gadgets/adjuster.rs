use serde::{Deserialize, Serialize};

use super::expansion::{self, Expansion};
use super::Verdict;
use crate::expander::shortest_connection;
use crate::graph::{bfs_distances, girth_avoiding, shortest_cycle_avoiding, Cycle, Graph, Path, VertexSet};
use crate::search::{path_of_length, Budget, Outcome};

/// Largest `|A ∪ {v₁, v₂}|` for which a failed length search counts as a
/// proof that the length is missing.
pub const A4_EXACT_LIMIT: usize = 24;
/// Search nodes per length in the A4 check.
const A4_NODE_LIMIT: u64 = 20_000_000;
/// Search nodes per edge when looking for an even cycle above the girth.
const EVEN_CYCLE_NODE_LIMIT: u64 = 200_000;

/// A `(D, m, k)`-adjuster: cores `v₁`, `v₂` with disjoint `(D, m)`-expansions
/// and a center set `A` such that `G[A ∪ {v₁, v₂}]` has `v₁`-`v₂` paths of
/// every length `ℓ, ℓ+2, …, ℓ+2k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjuster {
    pub v1: usize,
    pub f1: Expansion,
    pub v2: usize,
    pub f2: Expansion,
    pub center: VertexSet,
    pub k: usize,
    pub initial_length: usize,
}

impl Adjuster {
    /// `A ∪ V(F₁) ∪ V(F₂)`.
    pub fn vertex_set(&self) -> VertexSet {
        self.center.union(&self.f1.body).union(&self.f2.body)
    }

    /// `ℓ, ℓ+2, …, ℓ+2k`.
    pub fn lengths(&self) -> Vec<usize> {
        (0..=self.k).map(|i| self.initial_length + 2 * i).collect()
    }

    /// The end (`1` or `2`) as `(core, expansion)`.
    pub fn end(&self, which: u8) -> (usize, &Expansion) {
        if which == 1 {
            (self.v1, &self.f1)
        } else {
            (self.v2, &self.f2)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum ClauseStatus {
    Pass,
    Fail(String),
    Unverified(String),
}

/// Per-clause outcome of [`validate_adjuster`]. `witnesses[i]` realises
/// length `ℓ + 2i` for each length that was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjusterReport {
    pub a1: ClauseStatus,
    pub a2: ClauseStatus,
    pub a3: ClauseStatus,
    pub a4: ClauseStatus,
    pub witnesses: Vec<Path>,
}

impl AdjusterReport {
    /// The first failing clause, else the first undecided one, else valid.
    pub fn verdict(&self) -> Verdict {
        let clauses = [("A1", &self.a1), ("A2", &self.a2), ("A3", &self.a3), ("A4", &self.a4)];
        for (name, c) in clauses {
            if let ClauseStatus::Fail(detail) = c {
                return Verdict::invalid(name, detail.clone());
            }
        }
        for (name, c) in clauses {
            if let ClauseStatus::Unverified(detail) = c {
                return Verdict::Unverified {
                    clause: name.into(),
                    detail: detail.clone(),
                };
            }
        }
        Verdict::Valid
    }

    pub fn is_valid(&self) -> bool {
        self.verdict().is_valid()
    }
}

/// Checks clauses A1–A4 for parameters `(D, m, k)`.
///
/// A4 searches each length inside `G[A ∪ {v₁, v₂}]`. A length that is found
/// passes at any size; a missing length is a failure only when the search was
/// exhaustive on at most [`A4_EXACT_LIMIT`] vertices and is reported as
/// unverified otherwise.
pub fn validate_adjuster(g: &Graph, adj: &Adjuster, d: usize, m: usize, k: usize) -> AdjusterReport {
    let n = g.n();
    let a1 = clause_a1(n, adj);
    let a2 = match (adj.f1.anchor == adj.v1, adj.f2.anchor == adj.v2) {
        (false, _) => ClauseStatus::Fail(format!("F1 is anchored at {}, not {}", adj.f1.anchor, adj.v1)),
        (_, false) => ClauseStatus::Fail(format!("F2 is anchored at {}, not {}", adj.f2.anchor, adj.v2)),
        _ => match (expansion::check(g, &adj.f1, d, m), expansion::check(g, &adj.f2, d, m)) {
            (Err(v), _) => ClauseStatus::Fail(format!("F1: {}", v.clause().unwrap_or_default())),
            (_, Err(v)) => ClauseStatus::Fail(format!("F2: {}", v.clause().unwrap_or_default())),
            _ => ClauseStatus::Pass,
        },
    };
    let a3 = if adj.center.len() <= 10 * m * k {
        ClauseStatus::Pass
    } else {
        ClauseStatus::Fail(format!("|A| = {} > 10mk = {}", adj.center.len(), 10 * m * k))
    };
    let (a4, witnesses) = if matches!(a1, ClauseStatus::Fail(_)) {
        (ClauseStatus::Unverified("A1 failed".into()), Vec::new())
    } else {
        clause_a4(g, adj, k)
    };
    AdjusterReport { a1, a2, a3, a4, witnesses }
}

fn clause_a1(n: usize, adj: &Adjuster) -> ClauseStatus {
    let parts = [&adj.center, &adj.f1.body, &adj.f2.body];
    if parts.iter().any(|p| p.check_range(n).is_err()) || adj.v1 >= n || adj.v2 >= n {
        return ClauseStatus::Fail("vertex out of range".into());
    }
    if !adj.center.is_disjoint(&adj.f1.body) {
        return ClauseStatus::Fail("A meets V(F1)".into());
    }
    if !adj.center.is_disjoint(&adj.f2.body) {
        return ClauseStatus::Fail("A meets V(F2)".into());
    }
    if !adj.f1.body.is_disjoint(&adj.f2.body) {
        return ClauseStatus::Fail("V(F1) meets V(F2)".into());
    }
    if adj.center.contains(adj.v1) || adj.center.contains(adj.v2) || adj.v1 == adj.v2 {
        return ClauseStatus::Fail("cores must be distinct and outside A".into());
    }
    ClauseStatus::Pass
}

fn clause_a4(g: &Graph, adj: &Adjuster, k: usize) -> (ClauseStatus, Vec<Path>) {
    let mut keep = adj.center.clone();
    keep.insert(adj.v1);
    keep.insert(adj.v2);
    let (sub, map) = g.induced_subgraph(&keep);
    let local = |v: usize| map.binary_search(&v).expect("core is kept");
    let allowed = vec![true; sub.n()];
    let budget = Budget::unlimited();
    let exact = keep.len() <= A4_EXACT_LIMIT;
    let mut witnesses = Vec::new();
    for i in 0..=k {
        let len = adj.initial_length + 2 * i;
        match path_of_length(&sub, &allowed, local(adj.v1), local(adj.v2), len, A4_NODE_LIMIT, &budget) {
            Outcome::Found(p) => witnesses.push(Path::new(p.vertices().iter().map(|&x| map[x]).collect())),
            Outcome::Absent if exact => {
                return (ClauseStatus::Fail(format!("no path of length {len}")), witnesses);
            }
            Outcome::Absent | Outcome::GaveUp => {
                let detail = format!("length {len} not found in a {}-vertex center", keep.len());
                return (ClauseStatus::Unverified(detail), witnesses);
            }
        }
    }
    (ClauseStatus::Pass, witnesses)
}

/// Which cycle a simple adjuster is cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclePolicy {
    /// The shortest cycle; give up if it is odd.
    ShortestCycle,
    /// The shortest even cycle.
    ShortestEven,
}

/// A shortest even cycle of `G - avoid` with at most `max_len` vertices.
///
/// Uses the girth cycle when it is even; otherwise tries lengths
/// `girth+1, girth+3, …` and, for each, every edge `ab` with a search for an
/// `a`-`b` path one shorter. Sound but incomplete on large graphs because each
/// search is node-limited.
pub(crate) fn shortest_even_cycle(g: &Graph, avoid: &[bool], max_len: usize) -> Option<Cycle> {
    let girth = girth_avoiding(g, avoid)?;
    if girth % 2 == 0 {
        return shortest_cycle_avoiding(g, avoid);
    }
    let allowed: Vec<bool> = avoid.iter().map(|&a| !a).collect();
    let alive = allowed.iter().filter(|&&a| a).count();
    let budget = Budget::unlimited();
    for len in (girth + 1..=alive.min(max_len)).step_by(2) {
        for (a, b) in g.edges().filter(|&(a, b)| allowed[a] && allowed[b]) {
            if let Outcome::Found(p) = path_of_length(g, &allowed, a, b, len - 1, EVEN_CYCLE_NODE_LIMIT, &budget) {
                return Some(Cycle(p.vertices().to_vec()));
            }
        }
    }
    None
}

/// A `(D, m, 1)`-adjuster in `G - W` cut from the shortest cycle.
pub fn build_simple_adjuster(g: &Graph, w: &VertexSet, d: usize, m: usize) -> Option<Adjuster> {
    build_simple_adjuster_with(g, w, d, m, CyclePolicy::ShortestCycle)
}

/// A `(D, m, 1)`-adjuster in `G - W`.
///
/// Takes a cycle `C` of length `2r ≥ 4` chosen by `policy`, and for each
/// rotation picks cores `v₁ = C[i]`, `v₂ = C[i+r-1]` at distance `r-1` on `C`.
/// The two expansions are the closest `D` vertices of each core's BFS region
/// in `G - W - (V(C) \ {v₁, v₂})`, splitting ties between the regions towards
/// `v₁`. The center set is `V(C) \ {v₁, v₂}` and the two arcs give lengths
/// `r-1` and `r+1`.
pub fn build_simple_adjuster_with(
    g: &Graph,
    w: &VertexSet,
    d: usize,
    m: usize,
    policy: CyclePolicy,
) -> Option<Adjuster> {
    if d == 0 {
        return None;
    }
    let avoid = w.mask(g.n());
    let cycle = match policy {
        CyclePolicy::ShortestCycle => shortest_cycle_avoiding(g, &avoid)?,
        CyclePolicy::ShortestEven => shortest_even_cycle(g, &avoid, 10 * m + 2)?,
    };
    let c = cycle.vertices();
    if c.len() % 2 == 1 || c.len() < 4 {
        return None;
    }
    let r = c.len() / 2;
    if c.len() - 2 > 10 * m {
        return None;
    }
    let mut blocked = avoid.clone();
    c.iter().for_each(|&x| blocked[x] = true);
    (0..c.len()).find_map(|i| {
        let (v1, v2) = (c[i], c[(i + r - 1) % c.len()]);
        let (f1, f2) = grow_pair(g, &blocked, v1, v2, d, m)?;
        let adj = Adjuster {
            v1,
            f1,
            v2,
            f2,
            center: c.iter().copied().filter(|&x| x != v1 && x != v2).collect(),
            k: 1,
            initial_length: r - 1,
        };
        validate_adjuster(g, &adj, d, m, 1).is_valid().then_some(adj)
    })
}

/// Disjoint `(D, m)`-expansions of `v₁` and `v₂` in `G - blocked`.
fn grow_pair(g: &Graph, blocked: &[bool], v1: usize, v2: usize, d: usize, m: usize) -> Option<(Expansion, Expansion)> {
    let mut avoid = blocked.to_vec();
    avoid[v1] = false;
    avoid[v2] = true;
    let d1 = bfs_distances(g, &[v1], &avoid);
    avoid[v1] = true;
    avoid[v2] = false;
    let d2 = bfs_distances(g, &[v2], &avoid);
    let region = |own: &[usize], other: &[usize], wins_ties: bool| -> Option<VertexSet> {
        let mut cell: Vec<usize> = (0..g.n())
            .filter(|&x| own[x] <= m && (own[x] < other[x] || (wins_ties && own[x] == other[x])))
            .collect();
        if cell.len() < d {
            return None;
        }
        cell.sort_by_key(|&x| (own[x], x));
        Some(cell.into_iter().take(d).collect())
    };
    let b1 = region(&d1, &d2, true)?;
    let b2 = region(&d2, &d1, false)?;
    Some((Expansion { anchor: v1, body: b1, m }, Expansion { anchor: v2, body: b2, m }))
}

/// Joins two disjoint adjusters into one with `k = k₁ + k₂`.
///
/// A shortest path `P` from the ends of `a1` to the ends of `a2` avoiding
/// `W` and both center sets is extended inside the two touched expansions to
/// a core-to-core path `Q`. The result keeps the untouched ends, has center
/// `A₁ ∪ A₂ ∪ V(Q)` and initial length `ℓ₁ + ℓ₂ + ℓ(Q)`. `P` may be at most
/// as long as the slack left by A3, and the result must validate.
pub fn merge_adjusters(g: &Graph, a1: &Adjuster, a2: &Adjuster, w: &VertexSet) -> Option<Adjuster> {
    if !a1.vertex_set().is_disjoint(&a2.vertex_set()) {
        return None;
    }
    let (d, m) = (a1.f1.size(), a1.f1.m);
    let k = a1.k + a2.k;
    let slack = (10 * m * k).checked_sub(a1.center.len() + a2.center.len())?;

    let mut blocked = w.mask(g.n());
    a1.center.iter().chain(a2.center.iter()).for_each(|&x| blocked[x] = true);
    let sources: Vec<usize> = a1.f1.body.union(&a1.f2.body).to_vec();
    let targets = a2.f1.body.union(&a2.f2.body).mask(g.n());
    let p = shortest_connection(g, &sources, &targets, &blocked, slack)?;

    let (near1, far1) = if a1.f1.body.contains(p.start()) { (1, 2) } else { (2, 1) };
    let (near2, far2) = if a2.f1.body.contains(p.end()) { (1, 2) } else { (2, 1) };
    let mut q = a1.end(near1).1.path_to_anchor(g, p.start());
    q.reverse();
    q.extend_from_slice(&p.vertices()[1..]);
    q.pop();
    q.extend(a2.end(near2).1.path_to_anchor(g, p.end()));
    let q = Path::new(q);

    let (v1, f1) = a1.end(far1);
    let (v2, f2) = a2.end(far2);
    let merged = Adjuster {
        v1,
        f1: f1.clone(),
        v2,
        f2: f2.clone(),
        center: a1.center.union(&a2.center).union(&q.vertex_set()),
        k,
        initial_length: a1.initial_length + a2.initial_length + q.length(),
    };
    let report = validate_adjuster(g, &merged, d, m, k);
    (!matches!(report.verdict(), Verdict::Invalid { .. })).then_some(merged)
}

/// A `(D, m, r)`-adjuster in `G - W` built by induction: start from a simple
/// adjuster and repeatedly merge in a fresh simple adjuster found outside
/// everything used so far.
pub fn build_adjuster(g: &Graph, w: &VertexSet, d: usize, m: usize, r: usize) -> Option<Adjuster> {
    build_adjuster_with(g, w, d, m, r, CyclePolicy::ShortestCycle)
}

pub fn build_adjuster_with(
    g: &Graph,
    w: &VertexSet,
    d: usize,
    m: usize,
    r: usize,
    policy: CyclePolicy,
) -> Option<Adjuster> {
    if r == 0 {
        return None;
    }
    let mut current = build_simple_adjuster_with(g, w, d, m, policy)?;
    for _ in 1..r {
        let used = w.union(&current.vertex_set());
        let fresh = build_simple_adjuster_with(g, &used, d, m, policy)?;
        current = merge_adjusters(g, &current, &fresh, w)?;
    }
    Some(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_edges(base: usize, len: usize) -> Vec<(usize, usize)> {
        (0..len).map(|i| (base + i, base + (i + 1) % len)).collect()
    }

    fn c6_gadget() -> Adjuster {
        Adjuster {
            v1: 0,
            f1: Expansion::singleton(0, 1),
            v2: 2,
            f2: Expansion::singleton(2, 1),
            center: [1, 3, 4, 5].into(),
            k: 1,
            initial_length: 2,
        }
    }

    /// `count` copies of C₆ on `6i..6i+5`, copy `i` joined to copy `i+1` by
    /// the edge `6i+2 ~ 6(i+1)`.
    fn chain(count: usize) -> Graph {
        let mut e: Vec<_> = (0..count).flat_map(|i| cycle_edges(6 * i, 6)).collect();
        e.extend((1..count).map(|i| (6 * i - 4, 6 * i)));
        Graph::from_edges(6 * count, e).unwrap()
    }

    #[test]
    fn validation_examples() {
        let c6 = Graph::from_edges(6, cycle_edges(0, 6)).unwrap();
        let report = validate_adjuster(&c6, &c6_gadget(), 1, 1, 1);
        assert!(report.is_valid(), "{report:?}");
        assert_eq!(report.witnesses.iter().map(Path::length).collect::<Vec<_>>(), [2, 4]);

        let mut k2 = c6_gadget();
        k2.k = 2;
        assert_eq!(validate_adjuster(&c6, &k2, 1, 1, 2).verdict().clause(), Some("A4"));
        assert!(matches!(validate_adjuster(&c6, &k2, 1, 1, 2).a4, ClauseStatus::Fail(_)));

        let mut overlap = c6_gadget();
        overlap.f1 = Expansion { anchor: 0, body: [0, 1].into(), m: 1 };
        assert_eq!(validate_adjuster(&c6, &overlap, 2, 1, 1).verdict().clause(), Some("A1"));

        let mut big = c6_gadget();
        big.center = [1, 3, 4, 5].into();
        assert_eq!(validate_adjuster(&c6, &big, 1, 0, 1).verdict().clause(), Some("A3"));
    }

    #[test]
    fn simple_adjuster_examples() {
        let mut e = cycle_edges(0, 6);
        e.extend([(0, 6), (0, 7), (2, 8), (2, 9)]);
        let g = Graph::from_edges(10, e).unwrap();
        let adj = build_simple_adjuster(&g, &VertexSet::new(), 3, 1).unwrap();
        assert_eq!(adj.initial_length, 2);
        assert_eq!((adj.v1, adj.v2), (0, 2));
        assert_eq!(adj.f1.body, [0, 6, 7].into());
        assert!(validate_adjuster(&g, &adj, 3, 1, 1).is_valid());

        let tree = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(build_simple_adjuster(&tree, &VertexSet::new(), 1, 3), None);

        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(build_simple_adjuster(&k4, &VertexSet::new(), 1, 3), None);
        let even = build_simple_adjuster_with(&k4, &VertexSet::new(), 1, 3, CyclePolicy::ShortestEven).unwrap();
        assert_eq!(even.initial_length, 1);
        assert!(validate_adjuster(&k4, &even, 1, 3, 1).is_valid());
    }

    #[test]
    fn merging_examples() {
        let g = chain(2);
        let a = build_simple_adjuster(&g, &VertexSet::new(), 1, 1).unwrap();
        let b = build_simple_adjuster(&g, &a.vertex_set(), 1, 1).unwrap();
        let merged = merge_adjusters(&g, &a, &b, &VertexSet::new()).unwrap();
        let report = validate_adjuster(&g, &merged, 1, 1, 2);
        assert!(report.is_valid(), "{report:?}");
        assert_eq!(merged.lengths(), [5, 7, 9]);

        let apart = Graph::from_edges(12, cycle_edges(0, 6).into_iter().chain(cycle_edges(6, 6))).unwrap();
        let a = build_simple_adjuster(&apart, &VertexSet::new(), 1, 1).unwrap();
        let b = build_simple_adjuster(&apart, &a.vertex_set(), 1, 1).unwrap();
        assert_eq!(merge_adjusters(&apart, &a, &b, &VertexSet::new()), None);

        // Route the only link between the two cycles through vertex 12.
        let mut e: Vec<_> = cycle_edges(0, 6).into_iter().chain(cycle_edges(6, 6)).collect();
        e.extend([(2, 12), (12, 6)]);
        let bridged = Graph::from_edges(13, e).unwrap();
        let a = build_simple_adjuster(&bridged, &VertexSet::new(), 1, 1).unwrap();
        let b = build_simple_adjuster(&bridged, &a.vertex_set(), 1, 1).unwrap();
        assert!(merge_adjusters(&bridged, &a, &b, &VertexSet::new()).is_some());
        assert_eq!(merge_adjusters(&bridged, &a, &b, &[12].into()), None);
    }

    #[test]
    fn induction_examples() {
        let g = chain(3);
        let adj = build_adjuster(&g, &VertexSet::new(), 1, 1, 3).unwrap();
        assert_eq!(adj.lengths().len(), 4);
        assert!(validate_adjuster(&g, &adj, 1, 1, 3).is_valid());

        assert_eq!(
            build_adjuster(&g, &VertexSet::new(), 1, 1, 1),
            build_simple_adjuster(&g, &VertexSet::new(), 1, 1)
        );

        let single = Graph::from_edges(8, cycle_edges(0, 6).into_iter().chain([(0, 6), (6, 7)])).unwrap();
        assert!(build_adjuster(&single, &VertexSet::new(), 1, 1, 1).is_some());
        assert_eq!(build_adjuster(&single, &VertexSet::new(), 1, 1, 2), None);
    }
}
