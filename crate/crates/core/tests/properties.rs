mod common;

use std::collections::BTreeSet;

use crimenet::infiltration::{infiltration_index, test_h2_network};
use crimenet::ingest::{self, havel_hakimi, DegreeSequence};
use crimenet::ranking::{compute_icc_network, dense_rank_ascending, test_h1};
use crimenet::uncertainty::{fit_method_of_moments, gamma_cdf, gamma_moments};
use crimenet::{EconomicNetwork, FirmCountThresholds, GammaParams, NodeAttributes, NodeId};
use proptest::prelude::*;

fn id(i: usize) -> NodeId {
    NodeId::new(i.to_string()).unwrap()
}

#[derive(Debug, Clone)]
struct Spec {
    n: usize,
    edges: Vec<(usize, usize)>,
    flags: Vec<bool>,
    firms: Vec<u64>,
}

fn arb_spec() -> impl Strategy<Value = Spec> {
    (2usize..25).prop_flat_map(|n| {
        (
            prop::collection::vec((0..n, 0..n), 0..n * 3),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(0u64..700, n),
        )
            .prop_map(move |(edges, flags, firms)| Spec { n, edges, flags, firms })
    })
}

fn build(spec: &Spec, label: impl Fn(usize) -> usize) -> EconomicNetwork {
    let mut b = EconomicNetwork::builder();
    for i in 0..spec.n {
        let attrs = NodeAttributes::labelled(format!("n{i}")).with_firm_count(spec.firms[i]).infiltrated(spec.flags[i]);
        b.add_node(id(label(i)), attrs).unwrap();
    }
    for &(x, y) in &spec.edges {
        if x != y {
            b.add_edge(&id(label(x)), &id(label(y))).unwrap();
        }
    }
    b.build()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn havel_hakimi_realizes_any_graphical_sequence(spec in arb_spec()) {
        let net = build(&spec, |i| i);
        let seq = DegreeSequence::new(
            net.sorted_ids().into_iter().map(|n| (n.clone(), net.raw_degree(n).unwrap())).collect(),
        ).unwrap();
        let edges = havel_hakimi(&seq).unwrap();
        let mut seen = BTreeSet::new();
        for (a, b) in &edges {
            prop_assert!(a < b);
            prop_assert!(seen.insert((a.clone(), b.clone())));
        }
        let realized = ingest::synthesize_from_degree_sequence(&seq).unwrap();
        for (n, d) in seq.entries() {
            prop_assert_eq!(realized.raw_degree(n).unwrap(), *d);
        }
        prop_assert_eq!(havel_hakimi(&seq).unwrap(), edges);
    }

    #[test]
    fn odd_sums_never_realize(mut degrees in prop::collection::vec(0usize..10, 1..20)) {
        if degrees.iter().sum::<usize>() % 2 == 0 {
            degrees[0] += 1;
        }
        let n = degrees.len();
        degrees.iter_mut().for_each(|d| *d = (*d).min(n.saturating_sub(1)));
        prop_assume!(degrees.iter().sum::<usize>() % 2 == 1);
        prop_assert!(havel_hakimi(&DegreeSequence::from_degrees(&degrees)).is_err());
    }

    #[test]
    fn relabeling_preserves_the_analysis(spec in arb_spec(), shift in 1usize..1000) {
        let a = build(&spec, |i| i);
        let b = build(&spec, |i| i + shift);
        let th = FirmCountThresholds::default();
        let (ia, ib) = (compute_icc_network(&a, &th).unwrap(), compute_icc_network(&b, &th).unwrap());
        for i in 0..spec.n {
            let (sa, sb) = (ia.get(&id(i)).unwrap(), ib.get(&id(i + shift)).unwrap());
            prop_assert_eq!((sa.rank_degree, sa.rank_firms, sa.icc), (sb.rank_degree, sb.rank_firms, sb.icc));
        }
        prop_assert_eq!(ia.icc_sum, ib.icc_sum);
        if a.edge_count() > 0 {
            prop_assert_eq!(infiltration_index(&a).unwrap(), infiltration_index(&b).unwrap());
        }
    }

    #[test]
    fn index_is_a_degree_ratio(spec in arb_spec()) {
        let net = build(&spec, |i| i);
        prop_assume!(net.edge_count() > 0);
        let mut inf = 0;
        for i in 0..spec.n {
            if spec.flags[i] {
                inf += net.raw_degree(&id(i)).unwrap();
            }
        }
        prop_assert_eq!(infiltration_index(&net).unwrap(), inf as f64 / (2 * net.edge_count()) as f64);
    }

    #[test]
    fn h1_matches_its_definition(spec in arb_spec()) {
        let net = build(&spec, |i| i);
        prop_assume!(spec.flags.iter().any(|&f| f));
        let icc = compute_icc_network(&net, &FirmCountThresholds::default()).unwrap();
        let mean = icc.icc_sum as f64 / spec.n as f64;
        let expected = !icc.sectors.iter().filter(|s| s.infiltrated).all(|s| s.icc as f64 > mean);
        prop_assert_eq!(test_h1(&icc).unwrap().rejected, expected);
    }

    #[test]
    fn h2_matches_its_definition(spec in arb_spec()) {
        let net = build(&spec, |i| i);
        prop_assume!(spec.flags.iter().any(|&f| f));
        let max = (0..spec.n).map(|i| net.raw_degree(&id(i)).unwrap()).max().unwrap();
        let hit = (0..spec.n).any(|i| spec.flags[i] && net.raw_degree(&id(i)).unwrap() == max);
        prop_assert_eq!(test_h2_network(&net).unwrap().rejected, !hit);
    }

    #[test]
    fn dense_ranks_are_gapless(xs in prop::collection::vec(-1e6f64..1e6, 1..60)) {
        let ranks = dense_rank_ascending(&xs).unwrap();
        prop_assert_eq!(&ranks, &common::dense_rank_oracle(&xs));
        let distinct: BTreeSet<usize> = ranks.iter().copied().collect();
        prop_assert_eq!(distinct, (1..=*ranks.iter().max().unwrap()).collect::<BTreeSet<_>>());
    }

    #[test]
    fn moments_fit_round_trip(k in 0.01f64..500.0, theta in 1e-4f64..1e4) {
        let p = GammaParams::new(k, theta).unwrap();
        let m = gamma_moments(&p);
        let q = fit_method_of_moments(m.mean, m.std_dev).unwrap();
        prop_assert!(((q.shape() - k) / k).abs() <= 1e-12);
        prop_assert!(((q.scale() - theta) / theta).abs() <= 1e-12);
    }

    #[test]
    fn cdf_scales_with_theta(k in 0.1f64..40.0, theta in 0.01f64..10.0, z in 0.0f64..60.0) {
        let unit = GammaParams::new(k, 1.0).unwrap();
        let scaled = GammaParams::new(k, theta).unwrap();
        let a = gamma_cdf(&unit, z).unwrap();
        let b = gamma_cdf(&scaled, z * theta).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }
}
