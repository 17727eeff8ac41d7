//! Cycle lengths: exact and search-based spectra, runs of consecutive even
//! lengths, the reciprocal sum, the doubling-expansion condition and the
//! density-regime report for bipartite `K_{s,t}`-free hosts.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{average_degree, two_coloring, Cycle, Graph, VertexSet};
use crate::routing::{fixed_length_path, RoutingParams};
use crate::search::{Budget, Mode};

/// Largest order accepted by [`cycle_spectrum_exact`].
pub const EXACT_SPECTRUM_LIMIT: usize = 16;
/// Largest order accepted by exact [`doubling_expansion_check`].
pub const EXACT_DOUBLING_LIMIT: usize = 24;

/// Which path lengths join `u` and `v` in a bipartite graph: 0 when
/// `u = v`, 1 for opposite sides (odd lengths), 2 for distinct vertices on the
/// same side (even lengths). A `u`-`v` path of length `ℓ` always has
/// `ℓ ≡ class (mod 2)`.
pub fn parity_class(g: &Graph, u: usize, v: usize) -> Result<u8> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let colors = two_coloring(g).ok_or(Error::NotBipartite)?;
    let comp = g.components();
    if comp[u] != comp[v] {
        return Err(Error::Disconnected(u, v));
    }
    Ok(parity_of(&colors, u, v))
}

pub(crate) fn parity_of(colors: &[u8], u: usize, v: usize) -> u8 {
    if u == v {
        0
    } else if colors[u] != colors[v] {
        1
    } else {
        2
    }
}

/// A set of cycle lengths. `exact` marks a complete enumeration; otherwise
/// the set is a lower bound and every member has a witness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSpectrum {
    pub exact: bool,
    pub lengths: BTreeSet<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witnesses: BTreeMap<usize, Cycle>,
}

impl CycleSpectrum {
    pub fn from_lengths<I: IntoIterator<Item = usize>>(lengths: I, exact: bool) -> Self {
        CycleSpectrum {
            exact,
            lengths: lengths.into_iter().collect(),
            witnesses: BTreeMap::new(),
        }
    }

    /// Every witness is a cycle of `g` with the length it is filed under.
    pub fn witnesses_valid_in(&self, g: &Graph) -> bool {
        self.witnesses
            .iter()
            .all(|(&len, c)| c.length() == len && c.is_valid_in(g) && self.lengths.contains(&len))
    }
}

/// All cycle lengths of `g`, with a witness for each.
///
/// For each start vertex `s`, a subset dynamic program over vertices above `s`
/// records which vertices end an `s`-path through exactly a given set; a set
/// whose path can close back to `s` gives a cycle of length `|set| + 1`.
pub fn cycle_spectrum_exact(g: &Graph) -> Result<CycleSpectrum> {
    let n = g.n();
    if n > EXACT_SPECTRUM_LIMIT {
        return Err(Error::TooLarge(format!(
            "exact spectrum needs n <= {EXACT_SPECTRUM_LIMIT}, got {n}"
        )));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut spectrum = CycleSpectrum {
        exact: true,
        ..CycleSpectrum::default()
    };
    for s in 0..n.saturating_sub(2) {
        let shift = s + 1;
        let higher = n - shift;
        // reach[M >> shift]: vertices ending an s-path whose other vertices are exactly M.
        let mut reach = vec![0u32; 1 << higher];
        let start = adj[s] >> shift << shift;
        for v in bits(start) {
            reach[1 << (v - shift)] |= 1 << v;
        }
        for idx in 1..reach.len() {
            let ends = reach[idx];
            if ends == 0 {
                continue;
            }
            let set = (idx as u32) << shift;
            let size = set.count_ones() as usize;
            if size >= 2 && ends & adj[s] != 0 && !spectrum.lengths.contains(&(size + 1)) {
                let last = (ends & adj[s]).trailing_zeros() as usize;
                let cycle = rebuild(&reach, &adj, s, set, last);
                spectrum.lengths.insert(size + 1);
                spectrum.witnesses.insert(size + 1, cycle);
            }
            for v in bits(ends) {
                for w in bits(adj[v] >> shift << shift & !set) {
                    reach[idx | 1 << (w - shift)] |= 1 << w;
                }
            }
        }
    }
    Ok(spectrum)
}

fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            b
        })
    })
}

fn rebuild(reach: &[u32], adj: &[u32], s: usize, mut set: u32, mut cur: usize) -> Cycle {
    let shift = s + 1;
    let mut back = vec![cur];
    while set.count_ones() > 1 {
        set &= !(1 << cur);
        let prev = (reach[(set >> shift) as usize] & adj[cur]).trailing_zeros() as usize;
        back.push(prev);
        cur = prev;
    }
    back.push(s);
    back.reverse();
    Cycle(back)
}

/// Knobs for [`cycle_spectrum_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSearchParams {
    /// Edges tried per target length; all edges are tried when there are
    /// no more than this many.
    pub edge_trials: usize,
    pub routing: RoutingParams,
}

impl Default for SpectrumSearchParams {
    fn default() -> Self {
        SpectrumSearchParams {
            edge_trials: 64,
            routing: RoutingParams::default(),
        }
    }
}

/// Cycle lengths among `targets` found by closing an edge `uv` with a
/// `u`-`v` path of length `ℓ - 1`. Targets are searched in parallel; each
/// uses its own seeded edge order, so the result does not depend on the
/// thread schedule.
pub fn cycle_spectrum_search(
    g: &Graph,
    targets: &[usize],
    seed: u64,
    params: &SpectrumSearchParams,
    budget: &Budget,
) -> CycleSpectrum {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut wanted: Vec<usize> = targets.iter().copied().filter(|&l| l >= 3 && l <= g.n()).collect();
    wanted.sort_unstable();
    wanted.dedup();
    let found: Vec<(usize, Cycle)> = wanted
        .par_iter()
        .filter_map(|&len| {
            let mut order = edges.clone();
            if order.len() > params.edge_trials {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (len as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                order.shuffle(&mut rng);
                order.truncate(params.edge_trials);
            }
            order.into_iter().find_map(|(u, v)| {
                match fixed_length_path(g, &VertexSet::new(), u, v, len - 1, &params.routing, budget) {
                    Ok(Some(p)) => Some((len, Cycle(p.vertices().to_vec()))),
                    _ => None,
                }
            })
        })
        .collect();
    let mut spectrum = CycleSpectrum::default();
    for (len, c) in found {
        spectrum.lengths.insert(len);
        spectrum.witnesses.insert(len, c);
    }
    spectrum
}

/// Outcome of [`doubling_expansion_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingCheck {
    pub mode: String,
    pub holds: bool,
    pub witness: Option<VertexSet>,
    pub sets_checked: u64,
}

/// Whether every nonempty `X` with `|X| ≤ size_bound` has `|N(X)| > 2|X|`.
///
/// Exact mode scans all such sets (`n ≤ 24`) by size, then in colex order,
/// and returns the first violator. Sampled mode grows sets greedily from
/// start vertices, adding whichever vertex keeps `|N(X)| - 2|X|` smallest.
pub fn doubling_expansion_check(g: &Graph, size_bound: usize, mode: Mode) -> Result<DoublingCheck> {
    let n = g.n();
    let bound = size_bound.min(n);
    match mode {
        Mode::Exact => {
            if n > EXACT_DOUBLING_LIMIT {
                return Err(Error::TooLarge(format!(
                    "exact doubling check needs n <= {EXACT_DOUBLING_LIMIT}, got {n}"
                )));
            }
            let adj: Vec<u32> = (0..n)
                .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
                .collect();
            let mut checked = 0u64;
            for size in 1..=bound {
                let mut x: u32 = (1u32 << size) - 1;
                while (x as u64) < (1u64 << n) {
                    checked += 1;
                    let nb = bits(x).fold(0u32, |m, v| m | adj[v]) & !x;
                    if nb.count_ones() as usize <= 2 * size {
                        let witness = bits(x).collect();
                        return Ok(DoublingCheck {
                            mode: mode.name().into(),
                            holds: false,
                            witness: Some(witness),
                            sets_checked: checked,
                        });
                    }
                    // Gosper's hack: next set of the same size.
                    let c = x & x.wrapping_neg();
                    let r = x.wrapping_add(c);
                    if r == 0 {
                        break;
                    }
                    x = (((r ^ x) >> 2) / c) | r;
                }
            }
            Ok(DoublingCheck {
                mode: mode.name().into(),
                holds: true,
                witness: None,
                sets_checked: checked,
            })
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checked = 0u64;
            let mut by_degree: Vec<usize> = (0..n).collect();
            by_degree.sort_by_key(|&v| (g.degree(v), v));
            for trial in 0..trials {
                if n == 0 || bound == 0 {
                    break;
                }
                let start = if trial < n { by_degree[trial] } else { rng.random_range(0..n) };
                let mut in_x = vec![false; n];
                let mut count = vec![0usize; n];
                let mut x = vec![start];
                let mut boundary = add(g, &mut in_x, &mut count, start);
                loop {
                    checked += 1;
                    if boundary <= 2 * x.len() {
                        return Ok(DoublingCheck {
                            mode: mode.name().into(),
                            holds: false,
                            witness: Some(x.into_iter().collect()),
                            sets_checked: checked,
                        });
                    }
                    if x.len() == bound {
                        break;
                    }
                    let pick = (0..n)
                        .filter(|&w| !in_x[w])
                        .min_by_key(|&w| {
                            let fresh = g.neighbors(w).iter().filter(|&&y| !in_x[y] && count[y] == 0).count();
                            let lost = usize::from(count[w] > 0);
                            let jitter = if trial >= n { rng.random_range(0..1024u32) } else { w as u32 };
                            ((boundary + fresh).saturating_sub(lost), jitter)
                        })
                        .expect("X is smaller than V");
                    boundary = boundary + g.neighbors(pick).iter().filter(|&&y| !in_x[y] && count[y] == 0).count()
                        - usize::from(count[pick] > 0);
                    add(g, &mut in_x, &mut count, pick);
                    x.push(pick);
                }
            }
            Ok(DoublingCheck {
                mode: mode.name().into(),
                holds: true,
                witness: None,
                sets_checked: checked,
            })
        }
    }
}

/// Adds `v` to `X`, returning `|N(X)|` if `X` was `{v}`.
fn add(g: &Graph, in_x: &mut [bool], count: &mut [usize], v: usize) -> usize {
    in_x[v] = true;
    for &y in g.neighbors(v) {
        count[y] += 1;
    }
    g.degree(v)
}

/// The longest run `lo, lo+2, …, hi` of even members with at least two
/// elements; the earliest run wins ties.
pub fn consecutive_even_interval(spectrum: &CycleSpectrum) -> Option<(usize, usize)> {
    let evens: Vec<usize> = spectrum.lengths.iter().copied().filter(|l| l % 2 == 0).collect();
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < evens.len() {
        let mut j = i;
        while j + 1 < evens.len() && evens[j + 1] == evens[j] + 2 {
            j += 1;
        }
        if j > i && best.is_none_or(|(lo, hi)| evens[j] - evens[i] > hi - lo) {
            best = Some((evens[i], evens[j]));
        }
        i = j + 1;
    }
    best
}

/// `Σ 1/ℓ` over the spectrum, exactly.
pub fn reciprocal_cycle_sum(spectrum: &CycleSpectrum) -> BigRational {
    spectrum
        .lengths
        .iter()
        .fold(BigRational::from_integer(BigInt::from(0)), |acc, &l| {
            acc + BigRational::new(BigInt::from(1), BigInt::from(l))
        })
}

/// The asymptotic comparison value `s/(2(s-1)) · log₂ d`.
pub fn reciprocal_reference(s: usize, d: f64) -> f64 {
    s as f64 / (2.0 * (s as f64 - 1.0)) * d.log2()
}

/// Parameters of [`even_cycle_regime_report`]. `eps` is the constant in the
/// dense-regime threshold `d > ε n^{(s-1)/s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub s: usize,
    pub t: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub eps: f64,
}

impl RegimeParams {
    pub fn new(s: usize, t: usize, eps1: f64, eps2: f64) -> Self {
        RegimeParams { s, t, eps1, eps2, eps: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictedInterval {
    pub lo: f64,
    pub hi: f64,
    /// The interval is empty, or lies outside `[1, n]`.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub n: usize,
    pub average_degree: f64,
    pub params: RegimeParams,
    /// 1 (dense), 2 (intermediate) or 3 (sparse).
    pub regime: u8,
    pub dense_threshold: f64,
    pub polylog_threshold: f64,
    pub predicted: PredictedInterval,
    pub spectrum: CycleSpectrum,
    pub measured: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeEstimate {
    pub regime: u8,
    pub dense_threshold: f64,
    pub polylog_threshold: f64,
    pub predicted: PredictedInterval,
}

/// Picks the density regime of an `n`-vertex host with average degree `d`
/// and evaluates its predicted interval of even cycle lengths (logs base 2).
pub fn classify_regime(n: usize, d: f64, p: &RegimeParams) -> RegimeEstimate {
    let n = n as f64;
    let (s, t) = (p.s as f64, p.t as f64);
    let e = s / (s - 1.0);
    let dense_threshold = p.eps * n.powf((s - 1.0) / s);
    let polylog_threshold = n.log2().powi(200);
    let ds = d.powf(e);
    let (regime, lo, hi) = if d > dense_threshold {
        let lo = 4.0 / p.eps1 * (15.0 * n / (p.eps2 * ds)).log2().powi(3);
        let hi = ds / (288.0 * t.powf(1.0 / s)).powf(e);
        (1, lo, hi)
    } else if d >= polylog_threshold {
        let l = (n / ds).log2();
        (2, 300.0 * l.powi(8), ds / 100.0 * l.powi(12))
    } else {
        (3, n.log2().powi(7), n / n.log2().powi(12))
    };
    let vacuous = !(lo <= hi && hi >= 1.0 && lo <= n);
    RegimeEstimate { regime, dense_threshold, polylog_threshold, predicted: PredictedInterval { lo, hi, vacuous } }
}

/// Classifies a bipartite host into the three density regimes, evaluates the
/// predicted interval of even cycle lengths for its regime, and measures the
/// actual longest even run. The prediction is reference data only.
pub fn even_cycle_regime_report(g: &Graph, p: &RegimeParams, seed: u64, budget: &Budget) -> Result<RegimeReport> {
    if p.s < 2 || p.t < p.s {
        return Err(Error::Domain(format!("need t >= s >= 2, got s={}, t={}", p.s, p.t)));
    }
    if two_coloring(g).is_none() {
        return Err(Error::NotBipartite);
    }
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let avg = average_degree(g);
    let d = *avg.numer() as f64 / *avg.denom() as f64;
    let RegimeEstimate { regime, dense_threshold, polylog_threshold, predicted } = classify_regime(g.n(), d, p);
    let spectrum = if g.n() <= EXACT_SPECTRUM_LIMIT {
        cycle_spectrum_exact(g)?
    } else {
        let targets: Vec<usize> = (4..=g.n()).step_by(2).collect();
        cycle_spectrum_search(g, &targets, seed, &SpectrumSearchParams::default(), budget)
    };
    let measured = consecutive_even_interval(&spectrum);
    Ok(RegimeReport {
        n: g.n(),
        average_degree: d,
        params: p.clone(),
        regime,
        dense_threshold,
        polylog_threshold,
        predicted,
        spectrum,
        measured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn petersen() -> Graph {
        let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..5).map(|i| (i, i + 5)));
        e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        Graph::from_edges(10, e).unwrap()
    }

    fn heawood() -> Graph {
        let mut e: Vec<_> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
        e.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
        Graph::from_edges(14, e).unwrap()
    }

    fn lengths(s: &CycleSpectrum) -> Vec<usize> {
        s.lengths.iter().copied().collect()
    }

    #[test]
    fn parity_examples() {
        let c6 = cycle(6);
        assert_eq!(parity_class(&c6, 2, 2).unwrap(), 0);
        assert_eq!(parity_class(&c6, 0, 1).unwrap(), 1);
        assert_eq!(parity_class(&c6, 0, 2).unwrap(), 2);
        assert!(matches!(parity_class(&complete(3), 0, 1), Err(Error::NotBipartite)));
    }

    #[test]
    fn exact_spectrum_examples() {
        for (g, want) in [
            (complete(4), vec![3, 4]),
            (cycle(6), vec![6]),
            (petersen(), vec![5, 6, 8, 9]),
            (heawood(), vec![6, 8, 10, 12, 14]),
        ] {
            let s = cycle_spectrum_exact(&g).unwrap();
            assert_eq!(lengths(&s), want);
            assert!(s.witnesses_valid_in(&g));
        }
        assert!(cycle_spectrum_exact(&cycle(17)).is_err());
    }

    #[test]
    fn search_spectrum_examples() {
        let budget = Budget::unlimited();
        let p = SpectrumSearchParams::default();
        let h = heawood();
        let s = cycle_spectrum_search(&h, &[6, 8, 10, 12, 14], 7, &p, &budget);
        assert_eq!(lengths(&s), [6, 8, 10, 12, 14]);
        assert!(s.witnesses_valid_in(&h));

        let tree = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(cycle_spectrum_search(&tree, &[3, 4, 5], 1, &p, &budget).lengths.is_empty());
        assert!(cycle_spectrum_search(&cycle(8), &[6], 1, &p, &budget).lengths.is_empty());
    }

    #[test]
    fn doubling_examples() {
        let k10 = doubling_expansion_check(&complete(10), 3, Mode::Exact).unwrap();
        assert!(k10.holds);
        assert_eq!(k10.sets_checked, 10 + 45 + 120);
        let c6 = doubling_expansion_check(&cycle(6), 1, Mode::Exact).unwrap();
        assert_eq!((c6.holds, c6.witness), (false, Some([0].into())));
        let star = Graph::from_edges(10, (1..10).map(|i| (0, i))).unwrap();
        let st = doubling_expansion_check(&star, 1, Mode::Exact).unwrap();
        assert_eq!((st.holds, st.witness), (false, Some([1].into())));
        let sampled = doubling_expansion_check(&star, 1, Mode::Sampled { seed: 3, trials: 20 }).unwrap();
        assert!(!sampled.holds);
        assert!(doubling_expansion_check(&complete(10), 3, Mode::Sampled { seed: 3, trials: 40 }).unwrap().holds);
    }

    #[test]
    fn interval_and_sum_examples() {
        let s = CycleSpectrum::from_lengths([4, 6, 8, 12], true);
        assert_eq!(consecutive_even_interval(&s), Some((4, 8)));
        assert_eq!(consecutive_even_interval(&CycleSpectrum::from_lengths([5, 7], true)), None);
        assert_eq!(consecutive_even_interval(&CycleSpectrum::from_lengths([4, 6, 10, 12], true)), Some((4, 6)));

        let r = |num: i64, den: i64| BigRational::new(num.into(), den.into());
        assert_eq!(reciprocal_cycle_sum(&cycle_spectrum_exact(&complete(4)).unwrap()), r(7, 12));
        assert_eq!(reciprocal_cycle_sum(&cycle_spectrum_exact(&cycle(6)).unwrap()), r(1, 6));
        assert_eq!(reciprocal_cycle_sum(&cycle_spectrum_exact(&petersen()).unwrap()), r(217, 360));
    }

    #[test]
    fn regime_examples() {
        let budget = Budget::unlimited();
        let rep = even_cycle_regime_report(&heawood(), &RegimeParams::new(2, 2, 0.5, 0.1), 0, &budget).unwrap();
        assert_eq!(rep.measured, Some((6, 14)));
        assert_eq!(rep.regime, 3);
        assert!(rep.predicted.vacuous);
        let c100 = even_cycle_regime_report(&cycle(100), &RegimeParams::new(2, 2, 0.5, 0.1), 0, &budget).unwrap();
        assert_eq!(c100.measured, None);
        assert!(even_cycle_regime_report(&complete(3), &RegimeParams::new(2, 2, 0.5, 0.1), 0, &budget).is_err());
    }

    proptest! {
        #[test]
        fn even_interval_is_a_run_of_members(ls in proptest::collection::btree_set(3usize..40, 0..12)) {
            let s = CycleSpectrum { exact: true, lengths: ls.clone(), witnesses: BTreeMap::new() };
            if let Some((lo, hi)) = consecutive_even_interval(&s) {
                prop_assert!(lo % 2 == 0 && lo < hi);
                prop_assert!((lo..=hi).step_by(2).all(|l| ls.contains(&l)));
                prop_assert!(!ls.contains(&(hi + 2)));
            } else {
                prop_assert!(ls.iter().all(|&l| l % 2 == 1 || !ls.contains(&(l + 2))));
            }
        }
    }
}
