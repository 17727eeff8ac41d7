use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{collapse, ensure, Verdict};
use crate::graph::{Graph, VertexSet};

/// An `(h₁, h₂)`-hub: a center, `h₁` of its neighbours, and for each of those
/// a private set of `h₂` further neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hub {
    pub center: usize,
    pub first_layer: VertexSet,
    pub second_layer: BTreeMap<usize, VertexSet>,
}

impl Hub {
    /// `B₁(v) = {v} ∪ S₁(v)`.
    pub fn ball(&self) -> VertexSet {
        let mut b = self.first_layer.clone();
        b.insert(self.center);
        b
    }

    /// `S₂(v)`: union of the second-layer sets.
    pub fn outer_layer(&self) -> VertexSet {
        self.second_layer.values().flat_map(|s| s.iter().copied()).collect()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.ball().union(&self.outer_layer())
    }
}

pub fn validate_hub(g: &Graph, hub: &Hub, h1: usize, h2: usize) -> Verdict {
    collapse(check(g, hub, h1, h2))
}

pub(crate) fn check(g: &Graph, hub: &Hub, h1: usize, h2: usize) -> Result<(), Verdict> {
    let c = hub.center;
    ensure(c < g.n() && hub.vertex_set().check_range(g.n()).is_ok(), "hub range", || {
        "vertex out of range".into()
    })?;
    ensure(hub.first_layer.len() == h1, "first-layer size", || {
        format!("|S1({c})| = {}, expected {h1}", hub.first_layer.len())
    })?;
    if let Some(&z) = hub.first_layer.iter().find(|&&z| !g.has_edge(c, z)) {
        return Err(Verdict::invalid("first-layer adjacency", format!("{z} not adjacent to {c}")));
    }
    let keys: VertexSet = hub.second_layer.keys().copied().collect();
    ensure(keys == hub.first_layer, "second-layer keys", || {
        "second layer must be indexed by the first layer".into()
    })?;
    for (&z, leaves) in &hub.second_layer {
        ensure(leaves.len() == h2, "second-layer size", || {
            format!("|S1({z})| = {}, expected {h2}", leaves.len())
        })?;
    }
    for (&z, leaves) in &hub.second_layer {
        if let Some(&w) = leaves.iter().find(|&&w| !g.has_edge(z, w)) {
            return Err(Verdict::invalid("second-layer adjacency", format!("{w} not adjacent to {z}")));
        }
    }
    let mut seen = hub.ball();
    ensure(seen.len() == h1 + 1, "disjointness", || format!("center {c} lies in its own first layer"))?;
    for (&z, leaves) in &hub.second_layer {
        for &w in leaves {
            ensure(seen.insert(w), "disjointness", || {
                format!("second-layer vertex {w} of {z} is reused")
            })?;
        }
    }
    Ok(())
}

/// Greedy hub search in `G - W`.
///
/// Centers are tried by residual degree (descending, then id). For a center,
/// its neighbours are scanned in id order and each receives `h₂` unused
/// leaves, preferring leaves that are not themselves neighbours of the center
/// so those stay available for the first layer.
pub fn build_hub(g: &Graph, w: &VertexSet, h1: usize, h2: usize) -> Option<Hub> {
    let blocked = w.mask(g.n());
    let residual = |v: usize| g.neighbors(v).iter().filter(|&&x| !blocked[x]).count();
    let mut centers: Vec<usize> = (0..g.n()).filter(|&v| !blocked[v] && residual(v) >= h1).collect();
    centers.sort_by_key(|&v| (std::cmp::Reverse(residual(v)), v));
    centers.into_iter().find_map(|c| hub_at(g, &blocked, c, h1, h2))
}

/// Greedy hub with a fixed center, avoiding `blocked`.
pub(crate) fn hub_at(g: &Graph, blocked: &[bool], c: usize, h1: usize, h2: usize) -> Option<Hub> {
    if blocked[c] {
        return None;
    }
    let mut used = blocked.to_vec();
    used[c] = true;
    let near_center: Vec<bool> = {
        let mut m = vec![false; g.n()];
        g.neighbors(c).iter().for_each(|&z| m[z] = true);
        m
    };
    let mut first = Vec::new();
    let mut second = BTreeMap::new();
    for &z in g.neighbors(c) {
        if first.len() == h1 {
            break;
        }
        if used[z] {
            continue;
        }
        let mut pool: Vec<usize> = g.neighbors(z).iter().copied().filter(|&x| !used[x] && x != z).collect();
        pool.sort_by_key(|&x| (near_center[x], x));
        if pool.len() < h2 {
            continue;
        }
        pool.truncate(h2);
        used[z] = true;
        pool.iter().for_each(|&x| used[x] = true);
        first.push(z);
        second.insert(z, pool.into_iter().collect::<VertexSet>());
    }
    (first.len() == h1).then(|| Hub {
        center: c,
        first_layer: first.into_iter().collect(),
        second_layer: second,
    })
}
