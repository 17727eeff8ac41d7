//! Shared search machinery: wall-clock budgets and the exact-length simple
//! path search that adjuster validation, path routing and cycle search rely on.

use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Path, UNREACHED};

/// A soft wall-clock limit shared by every search of one invocation.
///
/// Searches poll [`Budget::expired`] between nodes. Once the deadline passes the
/// budget stays exhausted, so callers can report "budget-exhausted" rather than
/// silently returning a partial answer.
#[derive(Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    exhausted: AtomicBool,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn seconds(secs: f64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs_f64(secs.max(0.0))),
            exhausted: AtomicBool::new(false),
        }
    }

    /// True once the deadline has passed; latches.
    pub fn expired(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                self.exhausted.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }

    /// Whether any search under this budget ran out of time.
    pub fn was_exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }
}

/// Exhaustive or seeded randomized checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Mode {
    Exact,
    Sampled { seed: u64, trials: usize },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled { .. } => "sampled",
        }
    }
}

/// Result of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    /// The search space was exhausted without a hit.
    Absent,
    /// Node limit or wall-clock budget ran out first.
    GaveUp,
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

/// Upper bound on memoised dead states before the memo stops growing.
const MEMO_CAP: usize = 4_000_000;

/// Finds a simple `u`-`v` path with exactly `ell` edges whose vertices all lie
/// in `allowed` (the endpoints must be allowed too).
///
/// Depth-first over neighbours in ascending order, so the first path found is
/// the lexicographically smallest one. Pruned by BFS distance to `v` in the
/// unvisited part of the graph. On graphs with at most 64 vertices failed
/// states `(visited, current, remaining)` are memoised, which makes the search
/// exhaustive in practice up to about 20 vertices.
pub fn path_of_length(
    g: &Graph,
    allowed: &[bool],
    u: usize,
    v: usize,
    ell: usize,
    node_limit: u64,
    budget: &Budget,
) -> Outcome<Path> {
    if !allowed[u] || !allowed[v] {
        return Outcome::Absent;
    }
    if u == v {
        return if ell == 0 {
            Outcome::Found(Path::new(vec![u]))
        } else {
            Outcome::Absent
        };
    }
    let mut s = LengthSearch {
        g,
        allowed,
        target: v,
        visited: vec![false; g.n()],
        seq: vec![u],
        nodes: 0,
        node_limit,
        budget,
        gave_up: false,
        memo: HashSet::new(),
        use_memo: g.n() <= 64,
        mask: 0,
        dist: vec![UNREACHED; g.n()],
        queue: VecDeque::new(),
    };
    s.visited[u] = true;
    s.mask = bit(u, s.use_memo);
    if s.extend(ell) {
        s.seq.push(v);
        Outcome::Found(Path::new(s.seq))
    } else if s.gave_up {
        Outcome::GaveUp
    } else {
        Outcome::Absent
    }
}

fn bit(v: usize, enabled: bool) -> u64 {
    if enabled {
        1u64 << v
    } else {
        0
    }
}

struct LengthSearch<'a> {
    g: &'a Graph,
    allowed: &'a [bool],
    target: usize,
    visited: Vec<bool>,
    seq: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    budget: &'a Budget,
    gave_up: bool,
    memo: HashSet<(u64, u32, u32)>,
    use_memo: bool,
    mask: u64,
    dist: Vec<usize>,
    queue: VecDeque<usize>,
}

impl LengthSearch<'_> {
    /// Distance from `target` to `from` avoiding visited vertices (except `from`).
    fn residual_distance(&mut self, from: usize, cap: usize) -> usize {
        self.dist.iter_mut().for_each(|d| *d = UNREACHED);
        self.queue.clear();
        self.dist[self.target] = 0;
        self.queue.push_back(self.target);
        while let Some(x) = self.queue.pop_front() {
            if self.dist[x] >= cap {
                break;
            }
            for &w in self.g.neighbors(x) {
                if w == from {
                    return self.dist[x] + 1;
                }
                if self.allowed[w] && !self.visited[w] && self.dist[w] == UNREACHED {
                    self.dist[w] = self.dist[x] + 1;
                    self.queue.push_back(w);
                }
            }
        }
        UNREACHED
    }

    fn extend(&mut self, remaining: usize) -> bool {
        let cur = *self.seq.last().unwrap();
        if remaining <= 1 {
            return remaining == 1 && self.g.has_edge(cur, self.target);
        }
        self.nodes += 1;
        if self.nodes > self.node_limit || (self.nodes & 0x3ff == 0 && self.budget.expired()) {
            self.gave_up = true;
            return false;
        }
        let key = (self.mask, cur as u32, remaining as u32);
        if self.use_memo && self.memo.contains(&key) {
            return false;
        }
        let d = self.residual_distance(cur, remaining);
        if d > remaining {
            self.remember(key);
            return false;
        }
        for i in 0..self.g.degree(cur) {
            let w = self.g.neighbors(cur)[i];
            if w == self.target || !self.allowed[w] || self.visited[w] {
                continue;
            }
            self.visited[w] = true;
            self.seq.push(w);
            self.mask |= bit(w, self.use_memo);
            let hit = self.extend(remaining - 1);
            if hit {
                return true;
            }
            self.mask &= !bit(w, self.use_memo);
            self.seq.pop();
            self.visited[w] = false;
            if self.gave_up {
                return false;
            }
        }
        if !self.gave_up {
            self.remember(key);
        }
        false
    }

    fn remember(&mut self, key: (u64, u32, u32)) {
        if self.use_memo && self.memo.len() < MEMO_CAP {
            self.memo.insert(key);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cycle_arcs() {
        let g = cycle(6);
        let all = vec![true; 6];
        let b = Budget::unlimited();
        let p = path_of_length(&g, &all, 0, 1, 5, u64::MAX, &b).found().unwrap();
        assert_eq!(p.vertices(), &[0, 5, 4, 3, 2, 1]);
        assert_eq!(path_of_length(&g, &all, 0, 1, 1, u64::MAX, &b).found().unwrap().length(), 1);
        assert_eq!(path_of_length(&g, &all, 0, 1, 3, u64::MAX, &b), Outcome::Absent);
    }

    #[test]
    fn respects_allowed() {
        let g = cycle(6);
        let mut allowed = vec![true; 6];
        allowed[3] = false;
        let b = Budget::unlimited();
        assert_eq!(path_of_length(&g, &allowed, 0, 1, 5, u64::MAX, &b), Outcome::Absent);
    }

    #[test]
    fn node_limit_gives_up() {
        let g = Graph::from_edges(8, (0..8).flat_map(|u| (u + 1..8).map(move |v| (u, v)))).unwrap();
        let all = vec![true; 8];
        let b = Budget::unlimited();
        assert_eq!(path_of_length(&g, &all, 0, 1, 7, 1, &b), Outcome::GaveUp);
        assert!(path_of_length(&g, &all, 0, 1, 7, u64::MAX, &b).is_found());
    }

    #[test]
    fn zero_budget_expires() {
        let b = Budget::seconds(0.0);
        assert!(b.expired());
        assert!(b.was_exhausted());
        assert!(!Budget::unlimited().expired());
    }
}
