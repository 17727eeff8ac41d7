//! Brute-force reference implementations for small instances.
//!
//! Everything here is written directly against the adjacency lists with plain
//! exhaustive loops and no pruning beyond keeping paths simple, and calls
//! nothing from the modules it is used to check.

use std::collections::BTreeSet;

use crate::cycles::CycleSpectrum;
use crate::error::{Error, Result};
use crate::expander::ExpanderParams;
use crate::graph::{Graph, Path, VertexSet};
use crate::kst::KstWitness;
use crate::subdivision::SubdivisionCertificate;

pub const SPECTRUM_LIMIT: usize = 14;
pub const EXPANSION_LIMIT: usize = 12;
pub const SUBSET_LIMIT: u64 = 2_000_000;
pub const SUBDIVISION_LIMIT: usize = 8;
pub const ADJUSTER_CENTER_LIMIT: usize = 12;

fn too_large(what: &str, limit: impl std::fmt::Display, got: impl std::fmt::Display) -> Error {
    Error::TooLarge(format!("{what}: limit {limit}, got {got}"))
}

fn adjacent(g: &Graph, u: usize, v: usize) -> bool {
    g.neighbors(u).contains(&v)
}

/// All cycle lengths, by walking every simple path from each start vertex
/// through larger vertices and closing it when possible.
pub fn brute_spectrum(g: &Graph) -> Result<CycleSpectrum> {
    let n = g.n();
    if n > SPECTRUM_LIMIT {
        return Err(too_large("brute spectrum", SPECTRUM_LIMIT, n));
    }
    fn walk(g: &Graph, start: usize, path: &mut Vec<usize>, found: &mut BTreeSet<usize>) {
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if w == start && path.len() >= 3 {
                found.insert(path.len());
            }
            if w > start && !path.contains(&w) {
                path.push(w);
                walk(g, start, path, found);
                path.pop();
            }
        }
    }
    let mut found = BTreeSet::new();
    for start in 0..n {
        walk(g, start, &mut vec![start], &mut found);
    }
    Ok(CycleSpectrum::from_lengths(found, true))
}

/// Scans every vertex subset in the size window for
/// `|N(X)| < ε(|X|)·|X|`; returns the first violator by bitmask value, or
/// `None` if the graph is an expander.
pub fn brute_expansion(g: &Graph, p: &ExpanderParams) -> Result<Option<VertexSet>> {
    let n = g.n();
    if n > EXPANSION_LIMIT {
        return Err(too_large("brute expansion", EXPANSION_LIMIT, n));
    }
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if (size as f64) < p.k / 2.0 || 2 * size > n {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let outside: BTreeSet<usize> = members
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| mask >> w & 1 == 0)
            .collect();
        let x = size as f64;
        let eps = if x < p.k / 5.0 {
            0.0
        } else {
            p.eps1 / (15.0 * x / p.k).log2().powi(2)
        };
        if (outside.len() as f64) < eps * x {
            return Ok(Some(members.into_iter().collect()));
        }
    }
    Ok(None)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if n < size {
        return Vec::new();
    }
    let mut out = subsets(n - 1, size);
    for mut s in subsets(n - 1, size - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn choose(n: usize, k: usize) -> u64 {
    (0..k as u64).fold(1u64, |acc, i| acc.saturating_mul(n as u64 - i) / (i + 1))
}

/// Every `s`-set with at least `t` common neighbours is a `K_{s,t}`; returns
/// the first one found as `(S, smallest t common neighbours)`.
pub fn brute_kst(g: &Graph, s: usize, t: usize) -> Result<Option<KstWitness>> {
    let n = g.n();
    if s == 0 || t == 0 || s > n {
        return Err(Error::Domain(format!("need 1 <= s <= n and t >= 1, got s={s}, t={t}, n={n}")));
    }
    if choose(n, s) > SUBSET_LIMIT {
        return Err(too_large("brute K_{s,t} subsets", SUBSET_LIMIT, choose(n, s)));
    }
    let mut all = subsets(n, s);
    all.sort();
    for set in all {
        let common: Vec<usize> = (0..n).filter(|&w| set.iter().all(|&v| adjacent(g, v, w))).collect();
        if common.len() >= t {
            return Ok(Some(KstWitness {
                s_side: set.into_iter().collect(),
                t_side: common.into_iter().take(t).collect(),
            }));
        }
    }
    Ok(None)
}

/// Tries every branch set and every assignment of simple paths to pairs.
pub fn brute_subdivision(g: &Graph, k: usize, ell: usize) -> Result<Option<SubdivisionCertificate>> {
    let n = g.n();
    if n > SUBDIVISION_LIMIT || k > 4 || ell > 2 {
        return Err(too_large("brute subdivision (n, k, ell)", "(8, 4, 2)", format!("({n}, {k}, {ell})")));
    }
    if k < 2 || ell < 1 {
        return Err(Error::Domain(format!("need k >= 2 and ell >= 1, got k={k}, ell={ell}")));
    }
    let mut sets = subsets(n, k);
    sets.sort();
    for branch in sets {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let mut used = vec![false; n];
        for &b in &branch {
            used[b] = true;
        }
        let mut chosen = Vec::new();
        if assign(g, &branch, &pairs, ell, &mut used, &mut chosen) {
            return Ok(Some(SubdivisionCertificate {
                k,
                ell,
                branch,
                paths: chosen.into_iter().map(Path::new).collect(),
            }));
        }
    }
    Ok(None)
}

fn assign(
    g: &Graph,
    branch: &[usize],
    pairs: &[(usize, usize)],
    ell: usize,
    used: &mut [bool],
    chosen: &mut Vec<Vec<usize>>,
) -> bool {
    let Some(&(i, j)) = pairs.get(chosen.len()) else {
        return true;
    };
    let mut options = Vec::new();
    all_paths(g, branch[j], ell, used, &mut vec![branch[i]], &mut options);
    for p in options {
        for &x in &p[1..p.len() - 1] {
            used[x] = true;
        }
        chosen.push(p.clone());
        if assign(g, branch, pairs, ell, used, chosen) {
            return true;
        }
        chosen.pop();
        for &x in &p[1..p.len() - 1] {
            used[x] = false;
        }
    }
    false
}

/// Simple paths of exactly `ell` edges from the end of `path` to `target`
/// whose interior avoids `used`.
fn all_paths(g: &Graph, target: usize, ell: usize, used: &[bool], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    if path.len() == ell {
        if adjacent(g, last, target) {
            let mut p = path.clone();
            p.push(target);
            out.push(p);
        }
        return;
    }
    for &w in g.neighbors(last) {
        if w != target && !used[w] && !path.contains(&w) {
            path.push(w);
            all_paths(g, target, ell, used, path, out);
            path.pop();
        }
    }
}

/// Lengths of all simple `v₁`-`v₂` paths inside `G[A ∪ {v₁, v₂}]`.
pub fn brute_adjuster_lengths(g: &Graph, v1: usize, v2: usize, a: &VertexSet) -> Result<BTreeSet<usize>> {
    if a.len() > ADJUSTER_CENTER_LIMIT {
        return Err(too_large("brute adjuster center", ADJUSTER_CENTER_LIMIT, a.len()));
    }
    let n = g.n();
    if v1 >= n || v2 >= n || a.iter().any(|&x| x >= n) {
        return Err(Error::VertexOutOfRange {
            vertex: v1.max(v2).max(a.iter().copied().max().unwrap_or(0)),
            n,
        });
    }
    let mut inside = vec![false; n];
    for &x in a.iter().chain([&v1, &v2]) {
        inside[x] = true;
    }
    fn walk(g: &Graph, target: usize, inside: &[bool], path: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        let last = *path.last().unwrap();
        if last == target {
            out.insert(path.len() - 1);
            return;
        }
        for &w in g.neighbors(last) {
            if inside[w] && !path.contains(&w) {
                path.push(w);
                walk(g, target, inside, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(g, v2, &inside, &mut vec![v1], &mut out);
    Ok(out)
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

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn set(s: &BTreeSet<usize>) -> Vec<usize> {
        s.iter().copied().collect()
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(set(&brute_spectrum(&complete(4)).unwrap().lengths), [3, 4]);
        assert_eq!(set(&brute_spectrum(&complete_bipartite(3, 3)).unwrap().lengths), [4, 6]);
        assert_eq!(set(&brute_spectrum(&cycle(5)).unwrap().lengths), [5]);
        assert!(brute_spectrum(&cycle(15)).is_err());
    }

    #[test]
    fn expansion_examples() {
        let p = ExpanderParams::new(0.2, 2.0).unwrap();
        assert_eq!(brute_expansion(&complete(6), &p).unwrap(), None);
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(brute_expansion(&two_triangles, &p).unwrap(), Some([0, 1, 2].into()));
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(brute_expansion(&edge, &ExpanderParams::new(0.5, 4.0).unwrap()).unwrap(), None);
    }

    #[test]
    fn kst_examples() {
        assert!(brute_kst(&cycle(6), 2, 2).unwrap().is_none());
        let w = brute_kst(&cycle(4), 2, 2).unwrap().unwrap();
        assert_eq!((w.s_side, w.t_side), ([0, 2].into(), [1, 3].into()));
        assert!(brute_kst(&complete_bipartite(3, 3), 3, 3).unwrap().is_some());
    }

    #[test]
    fn subdivision_examples() {
        let cert = brute_subdivision(&complete(5), 4, 1).unwrap().unwrap();
        assert_eq!(cert.branch, [0, 1, 2, 3]);
        let q3 = Graph::from_edges(8, (0..8usize).flat_map(|u| (0..3).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v))
            .unwrap();
        assert_eq!(brute_subdivision(&q3, 4, 2).unwrap(), None);
        let cert = brute_subdivision(&complete_bipartite(4, 4), 3, 2).unwrap().unwrap();
        assert_eq!(cert.branch, [0, 1, 2]);
        assert_eq!(cert.paths[0].vertices(), [0, 4, 1]);
    }

    #[test]
    fn adjuster_length_examples() {
        assert_eq!(set(&brute_adjuster_lengths(&cycle(6), 0, 2, &[1, 3, 4, 5].into()).unwrap()), [2, 4]);
        let edge = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(set(&brute_adjuster_lengths(&edge, 0, 1, &VertexSet::new()).unwrap()), [1]);
        assert!(brute_adjuster_lengths(&edge, 0, 2, &VertexSet::new()).unwrap().is_empty());
    }
}
