use proptest::prelude::*;

use tksub::cycles::parity_class;
use tksub::gadgets::{build_adjuster, build_hub, validate_adjuster, validate_hub};
use tksub::generate::{generate_from_str, pg_incidence};
use tksub::graph::shortest_cycle;
use tksub::kst::{kst_counting_check, kst_free, oriented_kst_free};
use tksub::oracle::brute_adjuster_lengths;
use tksub::routing::{fixed_length_path, RoutingParams};
use tksub::search::{Budget, Mode};
use tksub::{graph::bipartition, Error, VertexSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routed_paths_obey_parity(seed in 0u64..10_000, a in 4usize..9, ell in 1usize..9) {
        let g = generate_from_str(&format!("random-bipartite:{a}:{a}:0.4"), seed).unwrap();
        let (u, v) = ((seed as usize) % a, a + (seed as usize / 7) % a);
        let params = RoutingParams::default();
        match fixed_length_path(&g, &VertexSet::new(), u, v, ell, &params, &Budget::unlimited()) {
            Ok(Some(p)) => {
                prop_assert!(p.is_valid_in(&g));
                prop_assert_eq!((p.start(), p.end(), p.length()), (u, v, ell));
                prop_assert_eq!(p.length() % 2, parity_class(&g, u, v).unwrap() as usize % 2);
            }
            Ok(None) => {}
            Err(Error::Parity { .. }) => prop_assert_eq!(ell % 2, 0),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn built_adjusters_validate(seed in 0u64..10_000, count in 1usize..5, r in 1usize..4) {
        let g = generate_from_str(&format!("gadget-chain:{count}"), seed).unwrap();
        if let Some(adj) = build_adjuster(&g, &VertexSet::new(), 2, 2, r) {
            prop_assert!(validate_adjuster(&g, &adj, 2, 2, r).is_valid());
            if adj.center.len() + 2 <= 14 {
                let lengths = brute_adjuster_lengths(&g, adj.v1, adj.v2, &adj.center).unwrap();
                for i in 0..=r {
                    prop_assert!(lengths.contains(&(adj.initial_length + 2 * i)));
                }
            }
        }
    }

    #[test]
    fn built_hubs_validate(seed in 0u64..10_000, h1 in 1usize..4, h2 in 0usize..3) {
        let g = generate_from_str("random-gnp:30:0.2", seed).unwrap();
        if let Some(hub) = build_hub(&g, &VertexSet::new(), h1, h2) {
            prop_assert!(validate_hub(&g, &hub, h1, h2).is_valid());
        }
    }

    #[test]
    fn counting_check_holds_when_free(seed in 0u64..10_000, a in 3usize..10, b in 3usize..10) {
        let g = generate_from_str(&format!("random-bipartite:{a}:{b}:0.35"), seed).unwrap();
        let (x, y): (VertexSet, VertexSet) = ((0..a).collect(), (a..a + b).collect());
        for (s, t) in [(2, 2), (2, 3), (3, 3)] {
            if oriented_kst_free(&g, &x, &y, s, t) {
                prop_assert!(kst_counting_check(&g, &x, &y, s, t).unwrap().holds);
            }
        }
    }
}

#[test]
fn projective_planes_are_four_cycle_free() {
    for q in [2u32, 3, 4, 5] {
        let g = pg_incidence(q).unwrap();
        assert!(kst_free(&g, 2, 2, Mode::Exact).unwrap().free);
        assert_eq!(shortest_cycle(&g).unwrap().length(), 6);
        let (e, n) = (g.edge_count() as u128, g.n() as u128);
        assert!(e * e <= 2 * n * n * n);
        let (x, y) = bipartition(&g).unwrap();
        assert!(kst_counting_check(&g, &x, &y, 2, 2).unwrap().holds);
    }
}
