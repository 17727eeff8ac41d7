use serde::{Deserialize, Serialize};

use super::hub::{self, hub_at, Hub};
use super::{collapse, ensure, Verdict};
use crate::expander::shortest_connection;
use crate::graph::{bfs_distances, Graph, Path, VertexSet, UNREACHED};

/// Cores tried by [`build_unit`] before giving up.
const MAX_CORES: usize = 64;
/// Satellite centers tried per spoke.
const MAX_CANDIDATES: usize = 256;

/// An `(h₀, h₁, h₂, h₃)`-unit: a core joined by spokes of length at most `h₃`
/// to the centers of `h₀` disjoint `(h₁, h₂)`-hubs. `spokes[j]` runs from the
/// core to `hubs[j].center`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unit {
    pub core: usize,
    pub hubs: Vec<Hub>,
    pub spokes: Vec<Path>,
}

impl Unit {
    pub fn vertex_set(&self) -> VertexSet {
        let mut all: Vec<usize> = vec![self.core];
        for h in &self.hubs {
            all.extend(h.vertex_set().iter());
        }
        for p in &self.spokes {
            all.extend(p.vertices());
        }
        all.into()
    }

    /// `Ext(M)`: the second layers of all hubs.
    pub fn exterior(&self) -> VertexSet {
        self.hubs.iter().flat_map(|h| h.outer_layer().to_vec()).collect()
    }

    /// `Int(M) = V(M) \ Ext(M)`.
    pub fn interior(&self) -> VertexSet {
        self.vertex_set().difference(&self.exterior())
    }

    /// A path inside the unit from the core to an exterior vertex `x`:
    /// spoke, hub center, first-layer vertex, `x`.
    pub fn path_to_exterior(&self, x: usize) -> Option<Path> {
        self.hubs.iter().zip(&self.spokes).find_map(|(h, spoke)| {
            h.second_layer.iter().find(|(_, s)| s.contains(x)).map(|(&z, _)| {
                let mut v = spoke.vertices().to_vec();
                v.extend([z, x]);
                Path::new(v)
            })
        })
    }
}

pub fn validate_unit(g: &Graph, m: &Unit, h0: usize, h1: usize, h2: usize, h3: usize) -> Verdict {
    collapse(check(g, m, h0, h1, h2, h3))
}

fn check(g: &Graph, m: &Unit, h0: usize, h1: usize, h2: usize, h3: usize) -> Result<(), Verdict> {
    ensure(m.core < g.n(), "core range", || format!("core {} out of range", m.core))?;
    ensure(m.hubs.len() == h0, "hub count", || format!("{} hubs, expected {h0}", m.hubs.len()))?;
    ensure(m.spokes.len() == h0, "spoke count", || {
        format!("{} spokes, expected {h0}", m.spokes.len())
    })?;
    for h in &m.hubs {
        hub::check(g, h, h1, h2).map_err(|v| {
            Verdict::invalid("hub", format!("hub at {}: {}", h.center, v.clause().unwrap_or_default()))
        })?;
    }
    let sets: Vec<VertexSet> = m.hubs.iter().map(Hub::vertex_set).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            ensure(sets[i].is_disjoint(&sets[j]), "hub disjointness", || {
                format!("hubs {i} and {j} intersect")
            })?;
        }
    }
    for (j, (p, h)) in m.spokes.iter().zip(&m.hubs).enumerate() {
        ensure(p.is_valid_in(g), "spoke path", || format!("spoke {j} is not a path"))?;
        ensure(p.start() == m.core && p.end() == h.center, "spoke endpoints", || {
            format!("spoke {j} must join {} to {}", m.core, h.center)
        })?;
        ensure(p.length() <= h3, "spoke length", || {
            format!("spoke {j} has length {} > {h3}", p.length())
        })?;
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (j, p) in m.spokes.iter().enumerate() {
        for &x in &p.vertices()[1..] {
            ensure(owner[x] == usize::MAX, "spoke disjointness", || {
                format!("vertex {x} lies on spokes {} and {j}", owner[x])
            })?;
            owner[x] = j;
        }
    }
    for (j, p) in m.spokes.iter().enumerate() {
        for &x in p.vertices() {
            for (i, set) in sets.iter().enumerate() {
                let allowed = x == m.hubs[i].center && (i == j || x == m.core);
                ensure(!set.contains(x) || allowed, "spoke-hub disjointness", || {
                    format!("spoke {j} meets hub {i} at {x}")
                })?;
            }
        }
    }
    Ok(())
}

/// Greedy unit search in `G - W`.
///
/// Cores are tried by degree (descending, then id). From a core, satellites
/// are added one at a time: candidate centers are taken in order of distance
/// from the core (at most `h₃`), and for each the builder tries a shortest
/// spoke followed by a hub avoiding it, then a hub followed by a spoke
/// avoiding the hub. Everything committed is blocked for later satellites, so
/// spokes are internally disjoint and avoid every hub except at their ends.
pub fn build_unit(g: &Graph, w: &VertexSet, h0: usize, h1: usize, h2: usize, h3: usize) -> Option<Unit> {
    let blocked = w.mask(g.n());
    let mut cores: Vec<usize> = (0..g.n()).filter(|&v| !blocked[v] && g.degree(v) > 0).collect();
    cores.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    cores.truncate(MAX_CORES);
    for core in cores {
        if let Some(unit) = unit_at(g, &blocked, core, h0, h1, h2, h3) {
            debug_assert!(validate_unit(g, &unit, h0, h1, h2, h3).is_valid());
            return Some(unit);
        }
    }
    None
}

fn unit_at(
    g: &Graph,
    blocked: &[bool],
    core: usize,
    h0: usize,
    h1: usize,
    h2: usize,
    h3: usize,
) -> Option<Unit> {
    let mut used = blocked.to_vec();
    let mut hubs = Vec::new();
    let mut spokes = Vec::new();
    while hubs.len() < h0 {
        used[core] = false;
        let dist = bfs_distances(g, &[core], &used);
        used[core] = true;
        let mut candidates: Vec<usize> = (0..g.n())
            .filter(|&u| u != core && dist[u] != UNREACHED && dist[u] <= h3)
            .collect();
        candidates.sort_by_key(|&u| (dist[u], u));
        candidates.truncate(MAX_CANDIDATES);
        let (hub, spoke) = candidates
            .into_iter()
            .find_map(|u| satellite(g, &used, core, u, h1, h2, h3))?;
        for x in hub.vertex_set().iter().chain(spoke.vertices()) {
            used[*x] = true;
        }
        hubs.push(hub);
        spokes.push(spoke);
    }
    Some(Unit { core, hubs, spokes })
}

/// A hub centered at `u` plus a spoke from `core`, both avoiding `used`
/// (which contains `core`).
fn satellite(
    g: &Graph,
    used: &[bool],
    core: usize,
    u: usize,
    h1: usize,
    h2: usize,
    h3: usize,
) -> Option<(Hub, Path)> {
    let mut target = vec![false; g.n()];
    target[u] = true;
    let spoke_avoiding = |extra: &[bool]| {
        let mut b: Vec<bool> = used.iter().zip(extra).map(|(&a, &e)| a || e).collect();
        b[core] = false;
        b[u] = false;
        shortest_connection(g, &[core], &target, &b, h3)
    };

    let none = vec![false; g.n()];
    if let Some(spoke) = spoke_avoiding(&none) {
        let mut b = used.to_vec();
        spoke.vertices().iter().for_each(|&x| b[x] = true);
        b[u] = false;
        if let Some(hub) = hub_at(g, &b, u, h1, h2) {
            return Some((hub, spoke));
        }
    }
    let hub = hub_at(g, used, u, h1, h2)?;
    let mut hub_mask = hub.vertex_set().mask(g.n());
    hub_mask[u] = false;
    let spoke = spoke_avoiding(&hub_mask)?;
    Some((hub, spoke))
}
