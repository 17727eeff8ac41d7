use serde::{Deserialize, Serialize};

use super::{collapse, ensure, Verdict};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Graph, VertexSet, UNREACHED};

/// A `(D, m)`-expansion: `D` vertices, each within distance `m` of the anchor
/// inside the subgraph they induce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub anchor: usize,
    pub body: VertexSet,
    /// Radius bound.
    pub m: usize,
}

impl Expansion {
    /// The one-vertex expansion `{v}`.
    pub fn singleton(v: usize, m: usize) -> Self {
        Expansion {
            anchor: v,
            body: VertexSet::singleton(v),
            m,
        }
    }

    /// `D`.
    pub fn size(&self) -> usize {
        self.body.len()
    }

    /// Distances from the anchor inside `G[body]`, indexed by host vertex.
    pub(crate) fn internal_distances(&self, g: &Graph) -> Vec<usize> {
        let outside: Vec<bool> = self.body.mask(g.n()).iter().map(|&b| !b).collect();
        bfs_distances(g, &[self.anchor], &outside)
    }

    /// Shortest path inside `G[body]` from `v` to the anchor.
    pub(crate) fn path_to_anchor(&self, g: &Graph, v: usize) -> Vec<usize> {
        let dist = self.internal_distances(g);
        let mut seq = vec![v];
        let mut cur = v;
        while cur != self.anchor {
            cur = *g
                .neighbors(cur)
                .iter()
                .find(|&&w| dist[w] != UNREACHED && dist[w] + 1 == dist[cur])
                .expect("body is connected");
            seq.push(cur);
        }
        seq
    }
}

/// Checks size, anchor membership and the radius bound.
pub fn validate_expansion(g: &Graph, f: &Expansion, d: usize, m: usize) -> Verdict {
    collapse(check(g, f, d, m))
}

pub(crate) fn check(g: &Graph, f: &Expansion, d: usize, m: usize) -> Result<(), Verdict> {
    ensure(f.body.check_range(g.n()).is_ok(), "expansion range", || {
        "body vertex out of range".into()
    })?;
    ensure(f.body.contains(f.anchor), "expansion anchor", || {
        format!("anchor {} not in body", f.anchor)
    })?;
    ensure(f.body.len() == d, "expansion size", || {
        format!("|F| = {}, expected {d}", f.body.len())
    })?;
    let dist = f.internal_distances(g);
    if let Some(&far) = f.body.iter().find(|&&v| dist[v] == UNREACHED || dist[v] > m) {
        return Err(Verdict::invalid(
            "expansion radius",
            format!("vertex {far} is farther than {m} from anchor {}", f.anchor),
        ));
    }
    Ok(())
}

/// Keeps the `d0` vertices closest to the anchor (ties by id), which is again
/// an expansion with the same radius bound.
pub fn trim_expansion(g: &Graph, f: &Expansion, d0: usize) -> Result<Expansion> {
    if d0 == 0 || d0 > f.size() {
        return Err(Error::Domain(format!(
            "target size {d0} outside [1, {}]",
            f.size()
        )));
    }
    let dist = f.internal_distances(g);
    let mut order: Vec<usize> = f.body.to_vec();
    order.sort_by_key(|&v| (dist[v], v));
    Ok(Expansion {
        anchor: f.anchor,
        body: order.into_iter().take(d0).collect(),
        m: f.m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn trimming() {
        let p = path(10);
        // The path 0..9 anchored at 3 has radius 6.
        let f = Expansion {
            anchor: 3,
            body: VertexSet::full(10),
            m: 6,
        };
        assert!(validate_expansion(&p, &f, 10, 6).is_valid());
        assert_eq!(trim_expansion(&p, &f, 10).unwrap(), f);
        assert_eq!(trim_expansion(&p, &f, 1).unwrap().body, [3].into());
        let t = trim_expansion(&p, &f, 4).unwrap();
        assert_eq!(t.body, [2, 3, 4, 1].into());
        assert!(validate_expansion(&p, &t, 4, 6).is_valid());
        assert!(trim_expansion(&p, &f, 0).is_err());
        assert!(trim_expansion(&p, &f, 11).is_err());

        let k = complete(10);
        let ball = Expansion {
            anchor: 7,
            body: VertexSet::full(10),
            m: 1,
        };
        let t = trim_expansion(&k, &ball, 5).unwrap();
        assert_eq!(t.body, [0, 1, 2, 3, 7].into());
        assert!(validate_expansion(&k, &t, 5, 1).is_valid());
    }

    #[test]
    fn validation_clauses() {
        let p = path(5);
        let f = Expansion {
            anchor: 0,
            body: VertexSet::full(5),
            m: 4,
        };
        assert_eq!(validate_expansion(&p, &f, 5, 3).clause(), Some("expansion radius"));
        assert_eq!(validate_expansion(&p, &f, 4, 4).clause(), Some("expansion size"));
        let gap = Expansion {
            anchor: 0,
            body: [0, 2].into(),
            m: 4,
        };
        assert_eq!(validate_expansion(&p, &gap, 2, 4).clause(), Some("expansion radius"));
    }
}
