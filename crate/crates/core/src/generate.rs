//! Deterministic graph generators and a small isomorphism-free corpus.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{shortest_cycle, Graph, VertexSet};
use crate::kst::kst_free;
use crate::search::Mode;

/// A generator descriptor such as `cycle:6` or `random-gnp:40:0.1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphKind {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Hypercube(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    Petersen,
    RandomGnp(usize, f64),
    RandomBipartite(usize, usize, f64),
    PgIncidence(u32),
    KstFreeDeletion { n: usize, s: usize, t: usize, p: f64 },
    /// `count` random even cycles `C_{2r}`, each with pendant paths at two
    /// vertices at distance `r-1`, consecutive cycles joined through those
    /// pendants by short paths, vertices shuffled.
    GadgetChain(usize),
}

pub const KINDS: &[&str] = &[
    "complete:N",
    "cycle:N",
    "path:N",
    "hypercube:DIM",
    "star:LEAVES",
    "complete-bipartite:A:B",
    "petersen",
    "random-gnp:N:P",
    "random-bipartite:A:B:P",
    "pg-incidence:Q",
    "kst-free-deletion:N:S:T:P",
    "gadget-chain:COUNT",
];

const MAX_VERTICES: usize = 1 << 20;

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |why: &str| Error::Domain(format!("generator '{s}': {why}; known kinds: {}", KINDS.join(", ")));
        let int = |i: usize| -> Result<usize> {
            parts.get(i).ok_or_else(|| bad("missing argument"))?.parse().map_err(|_| bad("bad integer"))
        };
        let prob = |i: usize| -> Result<f64> {
            let p: f64 = parts.get(i).ok_or_else(|| bad("missing argument"))?.parse().map_err(|_| bad("bad number"))?;
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(bad("probability outside [0, 1]"))
            }
        };
        let arity = match parts[0] {
            "petersen" => 0,
            "complete" | "cycle" | "path" | "hypercube" | "star" | "pg-incidence" | "gadget-chain" => 1,
            "complete-bipartite" | "random-gnp" => 2,
            "random-bipartite" => 3,
            "kst-free-deletion" => 4,
            _ => return Err(bad("unknown kind")),
        };
        if parts.len() != arity + 1 {
            return Err(bad(&format!("expected {arity} argument(s)")));
        }
        let kind = match parts[0] {
            "petersen" => GraphKind::Petersen,
            "complete" => GraphKind::Complete(int(1)?),
            "cycle" => GraphKind::Cycle(int(1)?),
            "path" => GraphKind::Path(int(1)?),
            "hypercube" => GraphKind::Hypercube(int(1)?),
            "star" => GraphKind::Star(int(1)?),
            "pg-incidence" => GraphKind::PgIncidence(int(1)? as u32),
            "gadget-chain" => GraphKind::GadgetChain(int(1)?),
            "complete-bipartite" => GraphKind::CompleteBipartite(int(1)?, int(2)?),
            "random-gnp" => GraphKind::RandomGnp(int(1)?, prob(2)?),
            "random-bipartite" => GraphKind::RandomBipartite(int(1)?, int(2)?, prob(3)?),
            _ => GraphKind::KstFreeDeletion { n: int(1)?, s: int(2)?, t: int(3)?, p: prob(4)? },
        };
        Ok(kind)
    }
}

impl TryFrom<String> for GraphKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GraphKind> for String {
    fn from(k: GraphKind) -> String {
        k.to_string()
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Complete(n) => write!(f, "complete:{n}"),
            GraphKind::Cycle(n) => write!(f, "cycle:{n}"),
            GraphKind::Path(n) => write!(f, "path:{n}"),
            GraphKind::Hypercube(d) => write!(f, "hypercube:{d}"),
            GraphKind::Star(l) => write!(f, "star:{l}"),
            GraphKind::CompleteBipartite(a, b) => write!(f, "complete-bipartite:{a}:{b}"),
            GraphKind::Petersen => write!(f, "petersen"),
            GraphKind::RandomGnp(n, p) => write!(f, "random-gnp:{n}:{p}"),
            GraphKind::RandomBipartite(a, b, p) => write!(f, "random-bipartite:{a}:{b}:{p}"),
            GraphKind::PgIncidence(q) => write!(f, "pg-incidence:{q}"),
            GraphKind::KstFreeDeletion { n, s, t, p } => write!(f, "kst-free-deletion:{n}:{s}:{t}:{p}"),
            GraphKind::GadgetChain(c) => write!(f, "gadget-chain:{c}"),
        }
    }
}

impl GraphKind {
    /// Whether the output depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            GraphKind::RandomGnp(..)
                | GraphKind::RandomBipartite(..)
                | GraphKind::KstFreeDeletion { .. }
                | GraphKind::GadgetChain(_)
        )
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices requested, limit {MAX_VERTICES}")));
    }
    Ok(())
}

/// Builds the graph described by `kind`; random kinds draw from a ChaCha8
/// stream seeded with `seed`.
pub fn generate(kind: &GraphKind, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        GraphKind::Complete(n) => {
            check_size(n)?;
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        GraphKind::Cycle(n) => {
            if n < 3 {
                return Err(Error::Domain(format!("cycle needs at least 3 vertices, got {n}")));
            }
            check_size(n)?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Path(n) => {
            check_size(n)?;
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        GraphKind::Hypercube(d) => {
            if d > 20 {
                return Err(Error::TooLarge(format!("hypercube dimension {d} > 20")));
            }
            let n = 1usize << d;
            Graph::from_edges(n, (0..n).flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b)))).filter(|&(u, v)| u < v))
        }
        GraphKind::Star(leaves) => {
            check_size(leaves + 1)?;
            Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
        }
        GraphKind::CompleteBipartite(a, b) => {
            check_size(a + b)?;
            Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
        }
        GraphKind::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
        GraphKind::RandomGnp(n, p) => {
            check_size(n)?;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        GraphKind::RandomBipartite(a, b, p) => {
            check_size(a + b)?;
            let mut edges = Vec::new();
            for u in 0..a {
                for v in a..a + b {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(a + b, edges)
        }
        GraphKind::PgIncidence(q) => pg_incidence(q),
        GraphKind::KstFreeDeletion { n, s, t, p } => {
            let g = generate(&GraphKind::RandomGnp(n, p), seed)?;
            kst_deletion(g, s, t, seed)
        }
        GraphKind::GadgetChain(count) => gadget_chain(count, &mut rng),
    }
}

/// Parses a descriptor and generates it.
pub fn generate_from_str(descriptor: &str, seed: u64) -> Result<Graph> {
    generate(&descriptor.parse()?, seed)
}

/// Addition and multiplication tables of GF(q), elements `0..q` with 0 and 1
/// the field identities.
struct Field {
    q: usize,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
}

/// GF(4) = GF(2)[x]/(x²+x+1); element `a + 2b` stands for `a + bx`.
const GF4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

/// GF(8) = GF(2)[x]/(x³+x+1), elements as bit vectors.
const GF8_MUL: [[u8; 8]; 8] = [
    [0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 2, 3, 4, 5, 6, 7],
    [0, 2, 4, 6, 3, 1, 7, 5],
    [0, 3, 6, 5, 7, 4, 1, 2],
    [0, 4, 3, 7, 6, 2, 5, 1],
    [0, 5, 1, 4, 2, 7, 3, 6],
    [0, 6, 7, 1, 5, 3, 2, 4],
    [0, 7, 5, 2, 1, 6, 4, 3],
];

/// GF(9) = GF(3)[i]/(i²+1); element `a + 3b` stands for `a + bi`.
const GF9_ADD: [[u8; 9]; 9] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8],
    [1, 2, 0, 4, 5, 3, 7, 8, 6],
    [2, 0, 1, 5, 3, 4, 8, 6, 7],
    [3, 4, 5, 6, 7, 8, 0, 1, 2],
    [4, 5, 3, 7, 8, 6, 1, 2, 0],
    [5, 3, 4, 8, 6, 7, 2, 0, 1],
    [6, 7, 8, 0, 1, 2, 3, 4, 5],
    [7, 8, 6, 1, 2, 0, 4, 5, 3],
    [8, 6, 7, 2, 0, 1, 5, 3, 4],
];
const GF9_MUL: [[u8; 9]; 9] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 2, 3, 4, 5, 6, 7, 8],
    [0, 2, 1, 6, 8, 7, 3, 5, 4],
    [0, 3, 6, 2, 5, 8, 1, 4, 7],
    [0, 4, 8, 5, 6, 1, 7, 2, 3],
    [0, 5, 7, 8, 1, 3, 4, 6, 2],
    [0, 6, 3, 1, 7, 4, 2, 8, 5],
    [0, 7, 5, 4, 2, 6, 8, 3, 1],
    [0, 8, 4, 7, 3, 2, 5, 1, 6],
];

impl Field {
    fn new(q: u32) -> Result<Field> {
        let q = q as usize;
        let table = |rows: &[&[u8]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        let xor = |q: usize| (0..q).map(|a| (0..q).map(|b| (a ^ b) as u8).collect()).collect();
        let modular = |q: usize, op: fn(usize, usize) -> usize| {
            (0..q).map(|a| (0..q).map(|b| (op(a, b) % q) as u8).collect()).collect()
        };
        let (add, mul) = match q {
            2 | 3 | 5 | 7 => (modular(q, |a, b| a + b), modular(q, |a, b| a * b)),
            4 => (xor(4), table(&GF4_MUL.iter().map(|r| &r[..]).collect::<Vec<_>>())),
            8 => (xor(8), table(&GF8_MUL.iter().map(|r| &r[..]).collect::<Vec<_>>())),
            9 => (
                table(&GF9_ADD.iter().map(|r| &r[..]).collect::<Vec<_>>()),
                table(&GF9_MUL.iter().map(|r| &r[..]).collect::<Vec<_>>()),
            ),
            _ => {
                return Err(Error::Domain(format!("pg-incidence supports q in {{2,3,4,5,7,8,9}}, got {q}")));
            }
        };
        Ok(Field { q, add, mul })
    }

    fn dot(&self, x: &[u8; 3], y: &[u8; 3]) -> u8 {
        (0..3).fold(0, |acc, i| self.add[acc as usize][self.mul[x[i] as usize][y[i] as usize] as usize])
    }

    /// Projective points: nonzero triples whose first nonzero entry is 1.
    fn projective_points(&self) -> Vec<[u8; 3]> {
        let q = self.q as u8;
        let mut out = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    let first = [a, b, c].into_iter().find(|&x| x != 0);
                    if first == Some(1) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

/// Point-line incidence graph of PG(2, q): points are `0..q²+q+1`, lines
/// follow. Checked on the way out to be `(q+1)`-regular, bipartite, of girth 6.
pub fn pg_incidence(q: u32) -> Result<Graph> {
    let field = Field::new(q)?;
    let points = field.projective_points();
    let p = points.len();
    let mut edges = Vec::new();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            if field.dot(x, y) == 0 {
                edges.push((i, p + j));
            }
        }
    }
    let g = Graph::from_edges(2 * p, edges)?;
    let q = q as usize;
    let regular = (0..g.n()).all(|v| g.degree(v) == q + 1);
    let girth = shortest_cycle(&g).map(|c| c.length());
    if p != q * q + q + 1 || !regular || !g.is_bipartite() || girth != Some(6) {
        return Err(Error::Domain(format!("field tables for q = {q} produced a malformed incidence graph")));
    }
    Ok(g)
}

/// Repeatedly asks the sampled `K_{s,t}` search for a witness and deletes the
/// edge between the smallest vertex of each side, until a search comes back
/// empty.
fn kst_deletion(mut g: Graph, s: usize, t: usize, seed: u64) -> Result<Graph> {
    let trials = 4 * g.n().max(16);
    for round in 0u64.. {
        let mode = Mode::Sampled { seed: seed.wrapping_add(round), trials };
        let Some(w) = kst_free(&g, s, t, mode)?.witness else {
            return Ok(g);
        };
        let a = VertexSet::min(&w.s_side).expect("nonempty witness side");
        let b = VertexSet::min(&w.t_side).expect("nonempty witness side");
        let (a, b) = (a.min(b), a.max(b));
        g = g.spanning_subgraph(g.edges().filter(|&e| e != (a, b)).collect::<Vec<_>>());
    }
    unreachable!()
}

fn gadget_chain(count: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if count == 0 {
        return Err(Error::Domain("gadget-chain needs at least one cycle".into()));
    }
    check_size(count * 20)?;
    let mut edges = Vec::new();
    let mut next = 0usize;
    fn fresh(edges: &mut Vec<(usize, usize)>, next: &mut usize, from: usize) -> usize {
        edges.push((from, *next));
        *next += 1;
        *next - 1
    }
    let mut previous: Option<usize> = None;
    for _ in 0..count {
        let r = rng.random_range(2..=4usize);
        let base = next;
        next += 2 * r;
        edges.extend((0..2 * r).map(|i| (base + i, base + (i + 1) % (2 * r))));
        let mut tips = [base, base + r - 1];
        for tip in &mut tips {
            for _ in 0..rng.random_range(1..=2usize) {
                *tip = fresh(&mut edges, &mut next, *tip);
            }
        }
        if let Some(mut at) = previous {
            for _ in 1..rng.random_range(1..=3usize) {
                at = fresh(&mut edges, &mut next, at);
            }
            edges.push((at, tips[0]));
        }
        previous = Some(tips[1]);
    }
    let mut perm: Vec<usize> = (0..next).collect();
    perm.shuffle(rng);
    Graph::from_edges(next, edges.into_iter().map(|(u, v)| (perm[u], perm[v])))
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices, each in canonical labelling, sorted by canonical code.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    isomorphism_classes(n, true)
}

/// Like [`connected_graphs`] but including disconnected graphs.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>> {
    isomorphism_classes(n, false)
}

/// Every graph on `n` vertices arises from one on `n - 1` by adding a vertex
/// (for connected graphs, a non-cut vertex joined to a nonempty set).
fn isomorphism_classes(n: usize, connected: bool) -> Result<Vec<Graph>> {
    if n == 0 || n > CORPUS_LIMIT {
        return Err(Error::Domain(format!("corpus order must lie in 1..={CORPUS_LIMIT}, got {n}")));
    }
    let mut layer: BTreeSet<u64> = [0].into();
    for order in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &layer {
            let adj = decode(code, order - 1);
            for mask in u32::from(connected)..(1 << (order - 1)) {
                let mut bigger = adj.clone();
                bigger.push(mask);
                for (u, row) in bigger.iter_mut().enumerate().take(order - 1) {
                    if mask >> u & 1 == 1 {
                        *row |= 1 << (order - 1);
                    }
                }
                next.insert(canonical_code(&bigger));
            }
        }
        layer = next;
    }
    layer.into_iter().map(|c| to_graph(&decode(c, n))).collect()
}

/// Connected graphs with `1 ≤ order ≤ max_n`, smallest first.
pub fn corpus(max_n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(connected_graphs(n)?);
    }
    Ok(out)
}

pub const CORPUS_LIMIT: usize = 9;

fn to_graph(adj: &[u32]) -> Result<Graph> {
    let n = adj.len();
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v))))
}

/// Upper triangle, row by row, first pair in the most significant bit.
fn encode(adj: &[u32], order: &[usize]) -> u64 {
    let n = adj.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = code << 1 | u64::from(adj[order[i]] >> order[j] & 1);
        }
    }
    code
}

fn decode(code: u64, n: usize) -> Vec<u32> {
    let bits = n * n.saturating_sub(1) / 2;
    let mut adj = vec![0u32; n];
    let mut k = bits;
    for i in 0..n {
        for j in i + 1..n {
            k -= 1;
            if code >> k & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Colour refinement to a stable ordered partition: each round a vertex's new
/// colour is the rank of (old colour, sorted neighbour colours).
fn refine(adj: &[u32], mut colour: Vec<usize>) -> Vec<usize> {
    let n = adj.len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(&s).unwrap()).collect();
        let before = colour.iter().collect::<BTreeSet<_>>().len();
        if distinct.len() == before {
            return next;
        }
        colour = next;
    }
}

/// Minimum code over all leaves of the individualisation-refinement tree.
fn canonical_code(adj: &[u32]) -> u64 {
    fn search(adj: &[u32], colour: Vec<usize>, best: &mut u64) {
        let colour = refine(adj, colour);
        let n = adj.len();
        let mut sizes = vec![0usize; n];
        for &c in &colour {
            sizes[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| sizes[c] > 1) else {
            let mut order = vec![0; n];
            for (v, &c) in colour.iter().enumerate() {
                order[c] = v;
            }
            *best = (*best).min(encode(adj, &order));
            return;
        };
        for v in (0..n).filter(|&v| colour[v] == cell) {
            let split = colour.iter().enumerate().map(|(w, &c)| 2 * c + usize::from(c == cell && w != v)).collect();
            search(adj, split, best);
        }
    }
    let mut best = u64::MAX;
    search(adj, vec![0; adj.len()], &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for s in ["complete:5", "random-gnp:10:0.25", "kst-free-deletion:20:2:2:0.3", "petersen", "gadget-chain:3"] {
            assert_eq!(s.parse::<GraphKind>().unwrap().to_string(), s);
        }
        assert!("bogus:3".parse::<GraphKind>().is_err());
        assert!("cycle".parse::<GraphKind>().is_err());
        assert!("random-gnp:5:1.5".parse::<GraphKind>().is_err());
    }

    #[test]
    fn complete_graph() {
        let g = generate_from_str("complete:5", 0).unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, 10));
    }

    #[test]
    fn projective_planes() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let g = pg_incidence(q).unwrap();
            let q = q as usize;
            assert_eq!(g.n(), 2 * (q * q + q + 1));
            assert_eq!(g.edge_count(), (q + 1) * (q * q + q + 1));
        }
        assert_eq!(pg_incidence(2).unwrap().n(), 14);
        assert_eq!(pg_incidence(3).unwrap().n(), 26);
        assert!(pg_incidence(6).is_err());
    }

    #[test]
    fn random_kinds_follow_the_seed() {
        let a = generate_from_str("random-gnp:30:0.2", 7).unwrap();
        assert_eq!(a, generate_from_str("random-gnp:30:0.2", 7).unwrap());
        assert_ne!(a, generate_from_str("random-gnp:30:0.2", 8).unwrap());
    }

    #[test]
    fn deletion_removes_four_cycles() {
        let g = generate_from_str("kst-free-deletion:25:2:2:0.3", 3).unwrap();
        assert!(kst_free(&g, 2, 2, Mode::Exact).unwrap().free);
    }

    #[test]
    fn gadget_chain_is_connected_and_bipartite() {
        for seed in 0..20 {
            let g = generate_from_str("gadget-chain:4", seed).unwrap();
            assert!(g.is_bipartite());
            assert!(g.components().iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn corpus_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 6, 21, 112, 853]);
        let counts: Vec<usize> = (1..=7).map(|n| all_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 2, 4, 11, 34, 156, 1044]);
    }

    #[test]
    fn canonical_code_ignores_labels() {
        let path = |order: [usize; 4]| {
            let mut adj = vec![0u32; 4];
            for w in order.windows(2) {
                adj[w[0]] |= 1 << w[1];
                adj[w[1]] |= 1 << w[0];
            }
            adj
        };
        assert_eq!(canonical_code(&path([0, 1, 2, 3])), canonical_code(&path([2, 0, 3, 1])));
    }
}
