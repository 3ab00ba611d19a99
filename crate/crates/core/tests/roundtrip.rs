use cacd::export::{edge_list_csv, DemandFile, GraphFile};
use cacd::routing::check_trace;
use cacd::*;
use proptest::prelude::*;

fn network(weights: &[f64], shift: u128) -> Network {
    Network::build(&Distribution::from_weights(weights).unwrap(), UnitPoint::from_bits(shift)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_file_roundtrips(weights in prop::collection::vec(0.001f64..1.0, 2..40), shift in any::<u128>()) {
        let net = network(&weights, shift);
        let file = GraphFile::from_network(&net, Some(Side::Source));
        let back: GraphFile = serde_json::from_str(&file.to_json()).unwrap();
        let rebuilt = back.to_network().unwrap();
        prop_assert_eq!(rebuilt.graph.edges(), net.graph.edges());
        prop_assert_eq!(rebuilt.placement.points(), net.placement.points());
        prop_assert_eq!(edge_list_csv(&rebuilt), edge_list_csv(&net));
    }

    #[test]
    fn routes_walk_existing_edges(weights in prop::collection::vec(0.001f64..1.0, 2..30), shift in any::<u128>(), s in 0usize..30, d in 0usize..30) {
        let net = network(&weights, shift);
        let n = net.placement.n();
        let (s, d) = (s % n, d % n);
        let r = Router::for_network(&net);
        for algo in Algorithm::ALL {
            let t = r.route(s, d, algo);
            prop_assert!(t.delivered());
            prop_assert_eq!(*t.hops.last().unwrap(), d);
            prop_assert!(check_trace(&net.graph, None, &t).is_ok());
        }
    }
}

#[test]
fn demand_file_variants_agree() {
    let product = DemandFile::parse(r#"{"product": {"p_s": ["0.5", "0.5"], "p_d": [0.25, 0.75]}}"#).unwrap();
    let matrix = DemandFile::parse(r#"{"matrix": [["0.125", "0.375"], ["0.125", "0.375"]]}"#).unwrap();
    let (a, b) = (product.to_demand().unwrap(), matrix.to_demand().unwrap());
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(a.entry(i, j), b.entry(i, j));
        }
    }
}

#[test]
fn zipf_demand_file_is_deterministic() {
    let f = DemandFile::parse(r#"{"zipf": {"n": 16, "s_source": 1.0, "s_dest": 0.5, "perm_seed": 3}}"#).unwrap();
    assert_eq!(f.to_demand().unwrap().to_f64_rows(), f.to_demand().unwrap().to_f64_rows());
    assert!(DemandFile::parse(r#"{"zipf": {"n": 16, "s_source": 1.0, "s_dest": 0.5, "extra": 1}}"#).is_err());
}
