//! Paths of prescribed length: a single `v₁`-`v₂` path of length exactly
//! `ℓ`, and pairs of disjoint paths into two expansions with a combined length
//! window.

use serde::{Deserialize, Serialize};

use crate::cycles::parity_of;
use crate::error::{Error, Result};
use crate::expander::shortest_connection;
use crate::gadgets::{build_simple_adjuster_with, merge_adjusters, Adjuster, CyclePolicy, Expansion};
use crate::graph::{two_coloring, Graph, Path, VertexSet};
use crate::search::{path_of_length, Budget, Outcome};

/// Knobs for [`fixed_length_path`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoutingParams {
    /// Hosts with at most this many vertices are searched exhaustively.
    pub exact_limit: usize,
    /// Expansion size `D` of the adjusters used to tune the length.
    pub adjuster_size: usize,
    /// Expansion radius `m` of those adjusters.
    pub adjuster_radius: usize,
    /// Most simple adjusters merged while looking for a matching length.
    pub max_adjuster_levels: usize,
    /// Node limit of the depth-first fallback.
    pub node_limit: u64,
}

impl Default for RoutingParams {
    fn default() -> Self {
        RoutingParams {
            exact_limit: 20,
            adjuster_size: 1,
            adjuster_radius: 4,
            max_adjuster_levels: 4,
            node_limit: 2_000_000,
        }
    }
}

/// A simple `v₁`-`v₂` path of length exactly `ell` in `G - W`.
///
/// Tries, in order: exhaustive search when `n ≤ exact_limit`; an adjuster
/// built away from `W ∪ {v₁, v₂}`, entered from `v₁` and `v₂` by shortest
/// paths and closed inside its center set with the one length that makes the
/// total `ell`; a node-limited depth-first search. `Ok(None)` means no path
/// was found, which is conclusive only in the exhaustive case.
///
/// In a bipartite host a length of the wrong parity for `v₁`, `v₂` is an
/// error rather than `None`.
pub fn fixed_length_path(
    g: &Graph,
    w: &VertexSet,
    v1: usize,
    v2: usize,
    ell: usize,
    params: &RoutingParams,
    budget: &Budget,
) -> Result<Option<Path>> {
    g.check_vertex(v1)?;
    g.check_vertex(v2)?;
    w.check_range(g.n())?;
    if w.contains(v1) || w.contains(v2) {
        return Err(Error::Domain(format!("endpoints {v1}, {v2} must lie outside W")));
    }
    let comp = g.components();
    if comp[v1] != comp[v2] {
        return Ok(None);
    }
    let coloring = two_coloring(g);
    if let Some(colors) = &coloring {
        let class = parity_of(colors, v1, v2);
        if ell % 2 != class as usize % 2 {
            return Err(Error::Parity {
                u: v1,
                v: v2,
                length: ell,
                class,
            });
        }
    }
    let allowed: Vec<bool> = w.mask(g.n()).iter().map(|&b| !b).collect();
    if g.n() <= params.exact_limit {
        return Ok(path_of_length(g, &allowed, v1, v2, ell, u64::MAX, budget).found());
    }
    let policy = if coloring.is_some() {
        CyclePolicy::ShortestCycle
    } else {
        CyclePolicy::ShortestEven
    };
    if let Some(p) = via_adjuster(g, w, v1, v2, ell, params, policy) {
        return Ok(Some(p));
    }
    Ok(path_of_length(g, &allowed, v1, v2, ell, params.node_limit, budget).found())
}

fn via_adjuster(
    g: &Graph,
    w: &VertexSet,
    v1: usize,
    v2: usize,
    ell: usize,
    params: &RoutingParams,
    policy: CyclePolicy,
) -> Option<Path> {
    let (d, m) = (params.adjuster_size, params.adjuster_radius);
    let mut reserved = w.clone();
    reserved.insert(v1);
    reserved.insert(v2);
    let mut adj = build_simple_adjuster_with(g, &reserved, d, m, policy)?;
    for level in 1..=params.max_adjuster_levels {
        if let Some(p) = close_through(g, w, v1, v2, ell, &adj) {
            return Some(p);
        }
        if level == params.max_adjuster_levels || adj.initial_length > ell {
            break;
        }
        let fresh = build_simple_adjuster_with(g, &reserved.union(&adj.vertex_set()), d, m, policy)?;
        adj = merge_adjusters(g, &adj, &fresh, &reserved)?;
    }
    None
}

/// `v₁ → F_a → core_a ⇝ core_b → F_b → v₂`, with the middle section inside
/// the center set at whichever of the adjuster's lengths fits.
fn close_through(g: &Graph, w: &VertexSet, v1: usize, v2: usize, ell: usize, adj: &Adjuster) -> Option<Path> {
    let n = g.n();
    for (a, b) in [(1, 2), (2, 1)] {
        let (core_a, fa) = adj.end(a);
        let (core_b, fb) = adj.end(b);
        let mut blocked = w.union(&adj.center).union(&fb.body).mask(n);
        blocked[v2] = true;
        let Some(p1) = shortest_connection(g, &[v1], &fa.body.mask(n), &blocked, n) else {
            continue;
        };
        let qa = fa.path_to_anchor(g, p1.end());

        let mut blocked = w.union(&adj.center).union(&fa.body).mask(n);
        p1.vertices().iter().for_each(|&x| blocked[x] = true);
        let Some(p2) = shortest_connection(g, &[v2], &fb.body.mask(n), &blocked, n) else {
            continue;
        };
        let qb = fb.path_to_anchor(g, p2.end());

        let fixed = p1.length() + (qa.len() - 1) + p2.length() + (qb.len() - 1);
        let Some(middle) = ell.checked_sub(fixed) else {
            continue;
        };
        if middle < adj.initial_length || (middle - adj.initial_length) % 2 == 1 {
            continue;
        }
        if (middle - adj.initial_length) / 2 > adj.k {
            continue;
        }
        let mut inner = adj.center.mask(n);
        inner[core_a] = true;
        inner[core_b] = true;
        let Outcome::Found(mid) = path_of_length(g, &inner, core_a, core_b, middle, u64::MAX, &Budget::unlimited())
        else {
            continue;
        };
        let mut seq = p1.vertices().to_vec();
        seq.extend_from_slice(&qa[1..]);
        seq.extend_from_slice(&mid.vertices()[1..]);
        seq.extend(qb.iter().rev().skip(1));
        seq.extend(p2.vertices().iter().rev().skip(1));
        let path = Path::new(seq);
        if path.length() == ell && path.is_valid_in(g) {
            return Some(path);
        }
    }
    None
}

/// Two vertex-disjoint paths: one from `U₁` and one from `U₂`, each ending
/// at the anchor of a different expansion, with combined length in
/// `[ell, ell + slack]`.
///
/// The first path is a shortest connection from one side into either
/// expansion, extended inside it to the anchor. The second runs from the other
/// side to the other anchor in what remains, first as a shortest path and
/// otherwise at each fitting length via [`fixed_length_path`]. Both
/// assignments of sides are tried.
#[allow(clippy::too_many_arguments)]
pub fn paired_paths(
    g: &Graph,
    w: &VertexSet,
    u1: &VertexSet,
    u2: &VertexSet,
    f3: &Expansion,
    f4: &Expansion,
    ell: usize,
    slack: usize,
    params: &RoutingParams,
    budget: &Budget,
) -> Option<(Path, Path)> {
    let n = g.n();
    let attempt = |first: &VertexSet, second: &VertexSet| -> Option<(Path, Path)> {
        let mut blocked = w.union(second).mask(n);
        let ends = f3.body.union(&f4.body);
        let p = shortest_connection(g, first.as_slice(), &ends.mask(n), &blocked, n)?;
        let (near, far) = if f3.body.contains(p.end()) { (f3, f4) } else { (f4, f3) };
        let mut seq = p.vertices().to_vec();
        seq.pop();
        seq.extend(near.path_to_anchor(g, p.end()));
        let p1 = Path::new(seq);

        blocked = w.union(first).union(&near.body).union(&p1.vertex_set()).mask(n);
        let sources: Vec<usize> = second.iter().copied().filter(|&x| !blocked[x]).collect();
        let lo = ell.saturating_sub(p1.length());
        let hi = (ell + slack).checked_sub(p1.length())?;
        let fits = |q: &Path| (lo..=hi).contains(&q.length());
        let anchor = far.anchor;
        if !blocked[anchor] {
            let mut target = vec![false; n];
            target[anchor] = true;
            if let Some(q) = shortest_connection(g, &sources, &target, &blocked, hi) {
                if fits(&q) {
                    return Some((p1, q));
                }
            }
            let avoid = VertexSet::from_mask(&blocked);
            for len in lo..=hi {
                for &s in &sources {
                    if let Ok(Some(q)) = fixed_length_path(g, &avoid, s, anchor, len, params, budget) {
                        return Some((p1, q));
                    }
                }
            }
        }
        None
    };
    attempt(u1, u2).or_else(|| attempt(u2, u1).map(|(a, b)| (b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn heawood() -> Graph {
        let mut e: Vec<_> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
        e.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
        Graph::from_edges(14, e).unwrap()
    }

    fn route(g: &Graph, v1: usize, v2: usize, ell: usize) -> Result<Option<Path>> {
        fixed_length_path(g, &VertexSet::new(), v1, v2, ell, &RoutingParams::default(), &Budget::unlimited())
    }

    #[test]
    fn fixed_length_examples() {
        let c6 = cycle(6);
        let p = route(&c6, 0, 1, 5).unwrap().unwrap();
        assert_eq!(p.vertices(), [0, 5, 4, 3, 2, 1]);
        assert!(matches!(route(&c6, 0, 1, 4), Err(Error::Parity { class: 1, .. })));
        assert_eq!(route(&c6, 0, 1, 3).unwrap(), None);

        let h = heawood();
        let p = route(&h, 0, 1, 13).unwrap().unwrap();
        assert_eq!(p.length(), 13);
        assert!(p.is_valid_in(&h));
        assert!(route(&h, 0, 0, 2).unwrap().is_none());
    }

    #[test]
    fn adjuster_strategy_tunes_the_middle() {
        // 0-1-2-3 enters a C₆ on 7..=12 at 7; 9 leaves via 4-5-6.
        let mut e = vec![(0, 1), (1, 2), (2, 3), (3, 7), (9, 4), (4, 5), (5, 6)];
        e.extend((0..6).map(|i| (7 + i, 7 + (i + 1) % 6)));
        let g = Graph::from_edges(13, e).unwrap();
        let params = RoutingParams::default();
        let w = VertexSet::new();
        for ell in [9, 11] {
            let p = via_adjuster(&g, &w, 0, 6, ell, &params, CyclePolicy::ShortestCycle).unwrap();
            assert_eq!(p.length(), ell);
            assert!(p.is_valid_in(&g));
        }
        assert_eq!(via_adjuster(&g, &w, 0, 6, 13, &params, CyclePolicy::ShortestCycle), None);
        let exact = RoutingParams { exact_limit: 0, ..params };
        let p = fixed_length_path(&g, &w, 0, 6, 11, &exact, &Budget::unlimited()).unwrap().unwrap();
        assert_eq!(p.length(), 11);
    }

    #[test]
    fn paired_examples() {
        // U₁ = {0,1}, U₂ = {2,3}; bridge 4-5-6-7; expansions {8,9} at 8 and {10,11} at 10.
        let g = Graph::from_edges(
            12,
            [(0, 4), (1, 4), (2, 5), (3, 5), (4, 6), (5, 7), (6, 7), (6, 8), (7, 10), (8, 9), (10, 11)],
        )
        .unwrap();
        let f3 = Expansion { anchor: 8, body: [8, 9].into(), m: 1 };
        let f4 = Expansion { anchor: 10, body: [10, 11].into(), m: 1 };
        let (u1, u2): (VertexSet, VertexSet) = ([0, 1].into(), [2, 3].into());
        let params = RoutingParams::default();
        let budget = Budget::unlimited();
        let (p, q) = paired_paths(&g, &VertexSet::new(), &u1, &u2, &f3, &f4, 4, 4, &params, &budget).unwrap();
        let total = p.length() + q.length();
        assert!((4..=8).contains(&total));
        assert!(p.vertex_set().is_disjoint(&q.vertex_set()));
        assert!(u1.contains(p.start()) && u2.contains(q.start()));
        assert!([p.end(), q.end()] == [8, 10] || [p.end(), q.end()] == [10, 8]);

        let cut: VertexSet = [4].into();
        assert_eq!(paired_paths(&g, &cut, &u1, &u2, &f3, &f4, 4, 4, &params, &budget), None);

        let tiny = Graph::from_edges(6, [(0, 2), (1, 3), (2, 4), (3, 5)]).unwrap();
        let f3 = Expansion::singleton(2, 0);
        let f4 = Expansion::singleton(3, 0);
        let (p, q) =
            paired_paths(&tiny, &VertexSet::new(), &[0].into(), &[1].into(), &f3, &f4, 0, 2, &params, &budget).unwrap();
        assert_eq!((p.vertices(), q.vertices()), (&[0, 2][..], &[1, 3][..]));
    }
}
