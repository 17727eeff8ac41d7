//! Fast versions of the differential checks against the brute-force oracles.

use tksub::cycles::cycle_spectrum_exact;
use tksub::expander::{certify_expander, check_expansion_witness, ExpanderParams, ExpansionVerdict};
use tksub::generate::{all_graphs, corpus, generate_from_str};
use tksub::kst::kst_free;
use tksub::oracle::{brute_expansion, brute_kst, brute_spectrum, brute_subdivision};
use tksub::search::{Budget, Mode};
use tksub::subdivision::{find_balanced_subdivision, validate_subdivision, Strategy, SubdivisionParams};

#[test]
fn spectra_match() {
    for g in corpus(6).unwrap() {
        assert_eq!(cycle_spectrum_exact(&g).unwrap().lengths, brute_spectrum(&g).unwrap().lengths);
    }
    for seed in 0..30 {
        let g = generate_from_str("random-gnp:11:0.3", seed).unwrap();
        assert_eq!(cycle_spectrum_exact(&g).unwrap().lengths, brute_spectrum(&g).unwrap().lengths);
    }
}

#[test]
fn expansion_verdicts_match() {
    let p = ExpanderParams::new(0.5, 1.0).unwrap();
    let mut counterexamples = 0;
    for g in (1..=6).flat_map(|n| all_graphs(n).unwrap()) {
        let cert = certify_expander(&g, &p, Mode::Exact).unwrap();
        let brute = brute_expansion(&g, &p).unwrap();
        assert_eq!(cert.verdict == ExpansionVerdict::Counterexample, brute.is_some());
        if let Some(x) = &cert.witness {
            counterexamples += 1;
            assert!(!check_expansion_witness(&g, &p, x).unwrap());
        }
    }
    assert!(counterexamples > 0);
}

#[test]
fn kst_verdicts_match() {
    for g in corpus(7).unwrap() {
        for (s, t) in [(2, 2), (2, 3), (3, 3)] {
            if s <= g.n() {
                assert_eq!(kst_free(&g, s, t, Mode::Exact).unwrap().free, brute_kst(&g, s, t).unwrap().is_none());
            }
        }
    }
}

#[test]
fn subdivision_existence_matches() {
    let params = SubdivisionParams::default();
    for g in corpus(7).unwrap() {
        for (k, ell) in [(3, 1), (3, 2), (4, 1), (4, 2)] {
            let found = find_balanced_subdivision(&g, k, ell, Strategy::Auto, &params, &Budget::unlimited()).unwrap();
            assert_eq!(found.is_some(), brute_subdivision(&g, k, ell).unwrap().is_some(), "{}", g.to_edge_list());
            if let Some(cert) = found {
                assert!(validate_subdivision(&g, &cert).is_valid());
            }
        }
    }
}
