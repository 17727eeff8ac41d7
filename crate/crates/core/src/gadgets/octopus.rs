use serde::{Deserialize, Serialize};

use super::adjuster::{validate_adjuster, Adjuster};
use super::{collapse, ensure, Verdict};
use crate::graph::{Graph, Path, VertexSet};

/// An `(r₁, r₂, r₃, r₄)`-octopus: a core simple adjuster, one of its ends `R`
/// (`designated_end` is 1 or 2), `r₃` disjoint simple adjusters (the arms)
/// and short tentacle paths linking `R` to an end of every arm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Octopus {
    pub core: Adjuster,
    pub designated_end: u8,
    pub arms: Vec<Adjuster>,
    pub tentacles: Vec<Path>,
}

/// Checks the core and arms as `(r₁, r₂, 1)`-adjusters, arm disjointness (F1),
/// the tentacle family (F2) and `|𝒫| ≤ |𝒟|`. An undecided A4 clause in any
/// adjuster makes the whole verdict unverified unless something else fails.
pub fn validate_octopus(g: &Graph, b: &Octopus, r1: usize, r2: usize, r3: usize, r4: usize) -> Verdict {
    let mut undecided = None;
    let result = check(g, b, r1, r2, r3, r4, &mut undecided);
    match (collapse(result), undecided) {
        (Verdict::Valid, Some(v)) => v,
        (v, _) => v,
    }
}

fn check(
    g: &Graph,
    b: &Octopus,
    r1: usize,
    r2: usize,
    r3: usize,
    r4: usize,
    undecided: &mut Option<Verdict>,
) -> Result<(), Verdict> {
    let mut adjuster_ok = |adj: &Adjuster, clause: &str| match validate_adjuster(g, adj, r1, r2, 1).verdict() {
        Verdict::Valid => Ok(()),
        Verdict::Invalid { clause: c, detail } => Err(Verdict::invalid(clause, format!("{c}: {detail}"))),
        unverified => {
            undecided.get_or_insert(unverified);
            Ok(())
        }
    };
    adjuster_ok(&b.core, "core adjuster")?;
    ensure(b.designated_end == 1 || b.designated_end == 2, "designated end", || {
        format!("end {} is neither 1 nor 2", b.designated_end)
    })?;
    for arm in &b.arms {
        adjuster_ok(arm, "arm adjuster")?;
    }
    ensure(b.arms.len() == r3, "arm count", || format!("{} arms, expected {r3}", b.arms.len()))?;

    let core_set = b.core.vertex_set();
    let arm_sets: Vec<VertexSet> = b.arms.iter().map(Adjuster::vertex_set).collect();
    for (i, s) in arm_sets.iter().enumerate() {
        ensure(s.is_disjoint(&core_set), "F1", || format!("arm {i} meets the core adjuster"))?;
        for (j, t) in arm_sets.iter().enumerate().skip(i + 1) {
            ensure(s.is_disjoint(t), "F1", || format!("arms {i} and {j} intersect"))?;
        }
    }

    let centers = b.arms.iter().fold(b.core.center.clone(), |acc, a| acc.union(&a.center));
    let mut interior_owner = vec![usize::MAX; g.n()];
    for (j, p) in b.tentacles.iter().enumerate() {
        ensure(p.is_valid_in(g), "tentacle path", || format!("tentacle {j} is not a path"))?;
        ensure(p.length() <= r4, "tentacle length", || {
            format!("tentacle {j} has length {} > {r4}", p.length())
        })?;
        ensure(p.vertices().iter().all(|&x| !centers.contains(x)), "F2", || {
            format!("tentacle {j} meets a center set")
        })?;
        for &x in p.interior() {
            ensure(interior_owner[x] == usize::MAX, "F2", || {
                format!("tentacles {} and {j} share interior vertex {x}", interior_owner[x])
            })?;
            interior_owner[x] = j;
        }
    }

    let r = &b.core.end(b.designated_end).1.body;
    for (i, arm) in b.arms.iter().enumerate() {
        let linked = b.tentacles.iter().any(|p| {
            let touches = |s: &VertexSet| p.vertices().iter().any(|&x| s.contains(x));
            touches(r) && (touches(&arm.f1.body) || touches(&arm.f2.body))
        });
        ensure(linked, "F2", || format!("no tentacle links R to an end of arm {i}"))?;
    }
    ensure(b.tentacles.len() <= b.arms.len(), "tentacle count", || {
        format!("{} tentacles for {} arms", b.tentacles.len(), b.arms.len())
    })?;
    Ok(())
}
