//! Immutable simple undirected graphs and the structural queries every other
//! module builds on.
//!
//! Vertices are `0..n`. Adjacency lists are kept sorted so that every search
//! that walks neighbours in list order is lexicographic by vertex id, which is
//! what makes certificates reproducible.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Marker for "not reached" in BFS distance vectors.
pub const UNREACHED: usize = usize::MAX;

/// An immutable simple undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, dropping duplicate edges.
    ///
    /// Self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::Domain(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Vertex count `|G|`.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Edge count `e(G)`.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The subgraph induced by `keep`, relabelled to `0..keep.len()`.
    ///
    /// The returned vector maps new ids back to ids in `self`.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let mut index = vec![UNREACHED; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (index[w] != UNREACHED).then_some(index[w]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        (Graph { adj, edge_count }, keep.to_vec())
    }

    /// `G - remove`, relabelled; see [`Graph::induced_subgraph`].
    pub fn without(&self, remove: &VertexSet) -> (Graph, Vec<usize>) {
        let mask = remove.mask(self.n());
        let keep: VertexSet = (0..self.n()).filter(|&v| !mask[v]).collect();
        self.induced_subgraph(&keep)
    }

    /// Spanning subgraph on the same vertex set with the given edges only.
    pub fn spanning_subgraph<I>(&self, edges: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges(self.n(), edges).expect("edges of a valid graph")
    }

    /// Serialises to the edge-list text format accepted by [`load_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn is_bipartite(&self) -> bool {
        bipartition(self).is_some()
    }

    /// Connected component label per vertex; labels are assigned in order of
    /// each component's minimum vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![UNREACHED; self.n()];
        let mut next = 0;
        for s in 0..self.n() {
            if label[s] != UNREACHED {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if label[w] == UNREACHED {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    /// Every vertex of a graph on `n` vertices.
    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    /// Vertices whose flag is set.
    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet((0..mask.len()).filter(|&v| mask[v]).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.clone()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// Membership flags for a graph on `n` vertices. Ids `>= n` are ignored.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in self.0.iter().filter(|&&v| v < n) {
            mask[v] = true;
        }
        mask
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.0.iter().chain(other.0.iter()).copied().collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(a: [usize; N]) -> Self {
        VertexSet::from(a.to_vec())
    }
}

/// An ordered vertex sequence. Its length is the number of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Number of edges, `ℓ(P)`. The empty sequence has length 0.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().expect("non-empty path")
    }

    /// Vertices strictly between the endpoints.
    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn join(&self, other: &Path) -> Path {
        debug_assert_eq!(self.end(), other.start());
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Path(v)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// Non-empty, no repeated vertex, consecutive vertices adjacent in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        if self.0.is_empty() || self.0.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let mut seen = vec![false; g.n()];
        for &v in &self.0 {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

/// A cycle as its vertex sequence; the closing edge back to the first vertex
/// is implicit. Its length is the number of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(pub Vec<usize>);

impl Cycle {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.0.len() >= 3
            && Path(self.0.clone()).is_valid_in(g)
            && g.has_edge(self.0[0], self.0[self.0.len() - 1])
    }
}

/// Parses the edge-list format: a header line `n m`, then `m` lines `u v`.
///
/// Blank lines are skipped; duplicate edges are merged.
pub fn load_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header `n m`".into(),
    })?;
    let (n, m) = parse_pair(header_line, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, content) in lines {
        if edges.len() == m {
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {m} edges"),
            });
        }
        let (u, v) = parse_pair(line, content)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                message: format!("vertex id out of range (n = {n})"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

fn parse_pair(line: usize, content: &str) -> Result<(usize, usize)> {
    let mut parts = content.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = parts.next().ok_or_else(|| Error::Parse {
            line,
            message: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = (next()?, next()?);
    if parts.next().is_some() {
        return Err(Error::Parse {
            line,
            message: "trailing tokens".into(),
        });
    }
    Ok(pair)
}

/// Average and minimum degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    /// `d(G) = 2e(G)/|G|`, exact.
    pub average: Ratio<u64>,
    /// `δ(G)`.
    pub minimum: usize,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(DegreeStats {
        average: average_degree(g),
        minimum: (0..g.n()).map(|v| g.degree(v)).min().unwrap_or(0),
    })
}

/// `2e(G)/|G|`; zero for the empty graph.
pub fn average_degree(g: &Graph) -> Ratio<u64> {
    if g.n() == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(2 * g.edge_count() as u64, g.n() as u64)
    }
}

/// `N(X)`: vertices outside `X` with a neighbour in `X`.
pub fn external_neighborhood(g: &Graph, x: &VertexSet) -> VertexSet {
    let inside = x.mask(g.n());
    let mut hit = vec![false; g.n()];
    for &v in x.iter().filter(|&&v| v < g.n()) {
        for &w in g.neighbors(v) {
            if !inside[w] {
                hit[w] = true;
            }
        }
    }
    VertexSet::from_mask(&hit)
}

/// Multi-source BFS distances in `G - avoid`. Sources inside `avoid` are skipped.
pub fn bfs_distances(g: &Graph, sources: &[usize], avoid: &[bool]) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !avoid[s] && dist[s] == UNREACHED {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !avoid[w] && dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `B^r_{G-avoid}(A)`: every vertex within `r` steps of `A` in `G - avoid`,
/// including `A` itself. Members of `A` that are in `avoid` are dropped.
pub fn bfs_ball(g: &Graph, a: &VertexSet, r: usize, avoid: &VertexSet) -> VertexSet {
    let avoid = avoid.mask(g.n());
    let dist = bfs_distances(g, a.as_slice(), &avoid);
    (0..g.n()).filter(|&v| dist[v] <= r).collect()
}

/// A shortest cycle, or `None` for a forest.
///
/// Among all shortest cycles the one returned has the lexicographically
/// smallest vertex sequence when read from its minimum vertex.
pub fn shortest_cycle(g: &Graph) -> Option<Cycle> {
    shortest_cycle_avoiding(g, &vec![false; g.n()])
}

pub(crate) fn shortest_cycle_avoiding(g: &Graph, avoid: &[bool]) -> Option<Cycle> {
    let girth = girth_avoiding(g, avoid)?;
    (0..g.n())
        .filter(|&v| !avoid[v])
        .find_map(|v| lex_first_cycle_through_min(g, avoid, v, girth))
}

/// Length of a shortest cycle in `G - avoid`.
pub(crate) fn girth_avoiding(g: &Graph, avoid: &[bool]) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut dist = vec![UNREACHED; g.n()];
    let mut parent = vec![UNREACHED; g.n()];
    for s in (0..g.n()).filter(|&s| !avoid[s]) {
        dist.iter_mut().for_each(|d| *d = UNREACHED);
        dist[s] = 0;
        parent[s] = UNREACHED;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &w in g.neighbors(u) {
                if avoid[w] {
                    continue;
                }
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                    break 'bfs;
                }
            }
        }
    }
    best
}

/// Lexicographically first cycle of exactly `len` vertices whose minimum vertex is `v`.
fn lex_first_cycle_through_min(g: &Graph, avoid: &[bool], v: usize, len: usize) -> Option<Cycle> {
    // Distances back to `v` inside the vertices >= v bound the remaining steps.
    let restricted: Vec<bool> = (0..g.n()).map(|u| avoid[u] || u < v).collect();
    let dist = bfs_distances(g, &[v], &restricted);
    let mut on_path = vec![false; g.n()];
    let mut seq = vec![v];
    on_path[v] = true;

    fn extend(
        g: &Graph,
        restricted: &[bool],
        dist: &[usize],
        len: usize,
        seq: &mut Vec<usize>,
        on_path: &mut [bool],
    ) -> bool {
        let u = *seq.last().unwrap();
        if seq.len() == len {
            return g.has_edge(u, seq[0]);
        }
        for &w in g.neighbors(u) {
            if restricted[w] || on_path[w] || dist[w] == UNREACHED {
                continue;
            }
            // After stepping to w we hold seq.len()+1 vertices and still need
            // len - seq.len() - 1 more plus the closing edge.
            if dist[w] > len - seq.len() {
                continue;
            }
            seq.push(w);
            on_path[w] = true;
            if extend(g, restricted, dist, len, seq, on_path) {
                return true;
            }
            on_path[w] = false;
            seq.pop();
        }
        false
    }

    extend(g, &restricted, &dist, len, &mut seq, &mut on_path).then(|| Cycle(seq))
}

/// A proper 2-colouring `(L, R)` with each component's minimum vertex in `L`,
/// or `None` if `g` has an odd cycle.
pub fn bipartition(g: &Graph) -> Option<(VertexSet, VertexSet)> {
    let side = two_coloring(g)?;
    let left = (0..g.n()).filter(|&v| side[v] == 0).collect();
    let right = (0..g.n()).filter(|&v| side[v] == 1).collect();
    Some((left, right))
}

/// Colour (0 or 1) per vertex, component minimum coloured 0.
pub(crate) fn two_coloring(g: &Graph) -> Option<Vec<u8>> {
    let mut side = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return None;
                }
            }
        }
    }
    Some(side)
}
