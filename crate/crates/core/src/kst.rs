//! `K_{s,t}`-freeness testing and the extremal counting bounds used to
//! monitor it.

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{average_degree, Graph, VertexSet};
use crate::search::Mode;

/// Exact freeness checks enumerate at most this many `s`-subsets.
pub const EXACT_SUBSETS: f64 = 1e7;

/// `(s, t, d)` together with the derived `η` and `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KstParams {
    pub s: usize,
    pub t: usize,
    pub d: f64,
}

impl KstParams {
    pub fn new(s: usize, t: usize, d: f64) -> Result<Self> {
        if s < 2 || t < s {
            return Err(Error::Domain(format!("need t >= s >= 2, got s = {s}, t = {t}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Domain(format!("d must be positive, got {d}")));
        }
        Ok(KstParams { s, t, d })
    }

    /// `η = d^{s/(2(s-1))}`.
    pub fn eta(&self) -> f64 {
        let s = self.s as f64;
        self.d.powf(s / (2.0 * (s - 1.0)))
    }

    /// `m = log₂(15n / (ε₂η²))`; requires `ε₂η² < 15n`.
    pub fn m(&self, n: usize, eps2: f64) -> Result<f64> {
        let eta = self.eta();
        let arg = 15.0 * n as f64 / (eps2 * eta * eta);
        if !(eps2 > 0.0) || !(arg > 1.0) {
            return Err(Error::Domain(format!(
                "log argument 15n/(eps2*eta^2) = {arg} must exceed 1"
            )));
        }
        Ok(arg.log2())
    }
}

/// A complete bipartite subgraph: every vertex of `s_side` is adjacent to
/// every vertex of `t_side`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KstWitness {
    pub s_side: VertexSet,
    pub t_side: VertexSet,
}

impl KstWitness {
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.s_side.is_disjoint(&self.t_side)
            && self
                .s_side
                .iter()
                .all(|&a| self.t_side.iter().all(|&b| g.has_edge(a, b)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KstVerdict {
    pub mode: String,
    /// False when a witness was found. In sampled mode `true` only means none was found.
    pub free: bool,
    pub witness: Option<KstWitness>,
    pub sets_checked: u64,
}

/// Looks for a `K_{s,t}` by enumerating `s`-sets and their common neighbourhoods.
///
/// Exact mode walks all `s`-subsets in lexicographic order, pruning branches
/// whose running common neighbourhood drops below `t`; the first hit is
/// returned as `(S, first t common neighbours)`. Sampled mode draws `S` from
/// the neighbourhood of a random vertex, falling back to uniform subsets.
pub fn kst_free(g: &Graph, s: usize, t: usize, mode: Mode) -> Result<KstVerdict> {
    if s == 0 || t == 0 {
        return Err(Error::Domain("s and t must be positive".into()));
    }
    let nbhd: Vec<FixedBitSet> = (0..g.n())
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(g.n());
            g.neighbors(v).iter().for_each(|&w| b.insert(w));
            b
        })
        .collect();
    let (witness, checked) = match mode {
        Mode::Exact => {
            if binomial(g.n(), s) > EXACT_SUBSETS {
                return Err(Error::TooLarge(format!(
                    "C({}, {s}) subsets exceed the exact limit",
                    g.n()
                )));
            }
            let mut search = SubsetSearch {
                nbhd: &nbhd,
                s,
                t,
                chosen: Vec::with_capacity(s),
                checked: 0,
            };
            let mut all = FixedBitSet::with_capacity(g.n());
            all.insert_range(..);
            let w = search.descend(0, &all);
            (w, search.checked)
        }
        Mode::Sampled { seed, trials } => sample_kst(g, &nbhd, s, t, seed, trials),
    };
    Ok(KstVerdict {
        mode: mode.name().into(),
        free: witness.is_none(),
        witness,
        sets_checked: checked,
    })
}

struct SubsetSearch<'a> {
    nbhd: &'a [FixedBitSet],
    s: usize,
    t: usize,
    chosen: Vec<usize>,
    checked: u64,
}

impl SubsetSearch<'_> {
    fn descend(&mut self, from: usize, common: &FixedBitSet) -> Option<KstWitness> {
        if self.chosen.len() == self.s {
            self.checked += 1;
            return (common.count_ones(..) >= self.t).then(|| KstWitness {
                s_side: self.chosen.iter().copied().collect(),
                t_side: common.ones().take(self.t).collect(),
            });
        }
        let n = self.nbhd.len();
        let needed = self.s - self.chosen.len();
        for v in from..=n.saturating_sub(needed) {
            if v >= n {
                break;
            }
            let mut next = common.clone();
            next.intersect_with(&self.nbhd[v]);
            if next.count_ones(..) < self.t {
                // Every superset has an even smaller common neighbourhood.
                self.checked += 1;
                continue;
            }
            self.chosen.push(v);
            let hit = self.descend(v + 1, &next);
            self.chosen.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}

fn sample_kst(
    g: &Graph,
    nbhd: &[FixedBitSet],
    s: usize,
    t: usize,
    seed: u64,
    trials: usize,
) -> (Option<KstWitness>, u64) {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for trial in 0..trials {
        if n < s {
            break;
        }
        let pivot = rng.random_range(0..n);
        let pool: Vec<usize> = if trial % 2 == 0 && g.degree(pivot) >= s {
            g.neighbors(pivot).to_vec()
        } else {
            (0..n).collect()
        };
        let mut chosen: Vec<usize> = sample(&mut rng, pool.len(), s)
            .into_iter()
            .map(|i| pool[i])
            .collect();
        chosen.sort_unstable();
        let mut common = nbhd[chosen[0]].clone();
        chosen[1..].iter().for_each(|&v| common.intersect_with(&nbhd[v]));
        checked += 1;
        if common.count_ones(..) >= t {
            return (
                Some(KstWitness {
                    s_side: chosen.into_iter().collect(),
                    t_side: common.ones().take(t).collect(),
                }),
                checked,
            );
        }
    }
    (None, checked)
}

/// Whether no `s`-subset of `b_side` has `t` common neighbours in `a_side`,
/// i.e. there is no `K_{s,t}` with its `t` vertices in `A` and `s` in `B`.
pub fn oriented_kst_free(g: &Graph, a_side: &VertexSet, b_side: &VertexSet, s: usize, t: usize) -> bool {
    let in_a = a_side.mask(g.n());
    let b: Vec<usize> = b_side.to_vec();
    let mut chosen = Vec::with_capacity(s);
    fn rec(g: &Graph, in_a: &[bool], b: &[usize], from: usize, s: usize, t: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == s {
            let common = g
                .neighbors(chosen[0])
                .iter()
                .filter(|&&w| in_a[w] && chosen[1..].iter().all(|&c| g.has_edge(c, w)))
                .count();
            return common < t;
        }
        (from..b.len()).all(|i| {
            chosen.push(b[i]);
            let ok = rec(g, in_a, b, i + 1, s, t, chosen);
            chosen.pop();
            ok
        })
    }
    s == 0 || rec(g, &in_a, &b, 0, s, t, &mut chosen)
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `x(x-1)…(x-s+1)/s!` for `x ≥ s-1`, else 0: the convex extension of
/// `C(x, s)` to real `x`.
pub fn generalized_binomial(x: f64, s: usize) -> f64 {
    if x < s as f64 - 1.0 {
        return 0.0;
    }
    (0..s).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// `t^{1/s} n^{2-1/s}`, the upper bound on edges of an `n`-vertex `K_{s,t}`-free graph.
pub fn kst_extremal_bound(n: usize, s: usize, t: usize) -> f64 {
    let s = s as f64;
    (t as f64).powf(1.0 / s) * (n as f64).powf(2.0 - 1.0 / s)
}

/// The three-term upper bound on `z(m, n; s, t)`:
/// `(t-s+1)^{1/s} m n^{1-1/s} + (s-1) n^{2-2/s} + (s-2) m`.
pub fn zarankiewicz_bound(m_side: usize, n_side: usize, s: usize, t: usize) -> Result<f64> {
    if s < 2 || t < s || m_side < s || n_side < t {
        return Err(Error::Domain(format!(
            "need t >= s >= 2, m >= s, n >= t; got m = {m_side}, n = {n_side}, s = {s}, t = {t}"
        )));
    }
    let (m, n, sf) = (m_side as f64, n_side as f64, s as f64);
    Ok(((t - s + 1) as f64).powf(1.0 / sf) * m * n.powf(1.0 - 1.0 / sf)
        + (sf - 1.0) * n.powf(2.0 - 2.0 / sf)
        + (sf - 2.0) * m)
}

/// `δ·|A|^{1/s} / (e·t)`, the neighbourhood lower bound for a set `A` of
/// minimum degree `δ` in a `K_{s,t}`-free bipartite graph.
pub fn kst_neighborhood_lower(delta: f64, a_size: usize, s: usize, t: usize) -> f64 {
    delta * (a_size as f64).powf(1.0 / s as f64) / (std::f64::consts::E * t as f64)
}

/// Both sides of the counting inequality `|A|·C(d̄(A), s) ≤ t·C(|B|, s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the counting inequality for a bipartite graph with sides `A`
/// (carrying `t`) and `B` (carrying `s`), using [`generalized_binomial`]
/// because the average degree `d̄(A)` is rarely an integer.
pub fn kst_counting_check(
    g: &Graph,
    a_side: &VertexSet,
    b_side: &VertexSet,
    s: usize,
    t: usize,
) -> Result<CountingCheck> {
    a_side.check_range(g.n())?;
    b_side.check_range(g.n())?;
    if !a_side.is_disjoint(b_side) || a_side.len() + b_side.len() != g.n() {
        return Err(Error::Domain("sides must partition the vertex set".into()));
    }
    if g.edges().any(|(u, v)| a_side.contains(u) == a_side.contains(v)) {
        return Err(Error::Domain("an edge lies inside one side".into()));
    }
    let a_degree_sum: usize = a_side.iter().map(|&v| g.degree(v)).sum();
    let lhs = if a_side.is_empty() {
        0.0
    } else {
        let avg = a_degree_sum as f64 / a_side.len() as f64;
        a_side.len() as f64 * generalized_binomial(avg, s)
    };
    let rhs = t as f64 * binomial(b_side.len(), s);
    Ok(CountingCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-12) + 1e-9,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityThreshold {
    Quarter,
    Half,
}

impl DensityThreshold {
    pub fn fraction(self) -> Ratio<u64> {
        match self {
            DensityThreshold::Quarter => Ratio::new(1, 4),
            DensityThreshold::Half => Ratio::new(1, 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustDensity {
    /// `d(G - W)`, exact.
    pub average: Ratio<u64>,
    pub meets_threshold: bool,
}

/// `d(G - W)` compared against `d(G)` scaled by the threshold.
pub fn robust_density(g: &Graph, w: &VertexSet, threshold: DensityThreshold) -> Result<RobustDensity> {
    w.check_range(g.n())?;
    if w.len() >= g.n() {
        return Err(Error::Domain("cannot delete every vertex".into()));
    }
    let average = average_degree(&g.without(w).0);
    Ok(RobustDensity {
        average,
        meets_threshold: average >= average_degree(g) * threshold.fraction(),
    })
}
