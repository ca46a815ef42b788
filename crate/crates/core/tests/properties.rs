use proptest::prelude::*;

use invlab_core::decycler::{decycle, verify_family, Strategy as Pipeline};
use invlab_core::f2::{encode_backward, encode_set, minimize_family, pi_signature, PairVector};
use invlab_core::fas::{fas_exact, fas_heuristic};
use invlab_core::generators::{mcc_reduction, random_oriented_graph, random_tournament, MccInstance};
use invlab_core::graph::backward_arcs;
use invlab_core::io::{from_json, parse_dot, to_dot, to_json};
use invlab_core::kernel::{delvertex_step, KernelConfig, StepOutcome};
use invlab_core::{apply_family, invert, is_acyclic, InversionFamily, OrientedGraph, SizeMode, Tournament};

fn graph() -> impl Strategy<Value = OrientedGraph> {
    (1usize..10, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, d, s)| random_oriented_graph(n, d, s).unwrap())
}

fn graph_and_set() -> impl Strategy<Value = (OrientedGraph, Vec<usize>)> {
    graph().prop_flat_map(|d| {
        let n = d.order();
        (Just(d), proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n))
    })
}

fn family_for(n: usize, p: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(proptest::sample::subsequence((0..n).collect::<Vec<_>>(), p), 0..30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inversion_is_an_involution((d, x) in graph_and_set()) {
        let once = invert(&d, &x).unwrap();
        prop_assert_eq!(invert(&once, &x).unwrap(), d.clone());
        prop_assert_eq!(once.arc_count(), d.arc_count());
    }

    #[test]
    fn inversion_flips_exactly_the_inner_pairs((d, x) in graph_and_set()) {
        let after = invert(&d, &x).unwrap();
        for (u, v) in d.arcs() {
            let inside = x.contains(&u) && x.contains(&v);
            prop_assert_eq!(after.has_arc(v, u), inside);
        }
    }

    #[test]
    fn backward_vector_adds_set_vector(seed in any::<u64>(), n in 2usize..10, picks in any::<u64>()) {
        let t = random_tournament(n, seed);
        let x: Vec<usize> = (0..n).filter(|&v| picks >> v & 1 == 1).collect();
        let after = invert(&t, &x).unwrap();
        let lhs = encode_backward(&after);
        let rhs = encode_backward(&t).xor(&encode_set(&x, n).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn signature_is_invariant(seed in any::<u64>(), n in 5usize..10, p in 2usize..8, picks in any::<u64>()) {
        prop_assume!(n >= p + 2);
        let t = random_tournament(n, seed);
        let mut x: Vec<usize> = (0..n).filter(|&v| picks >> v & 1 == 1).collect();
        x.truncate(p);
        for v in 0..n {
            if x.len() == p { break; }
            if !x.contains(&v) { x.push(v); }
        }
        let after = invert(&t, &x).unwrap();
        prop_assert_eq!(
            pi_signature(&encode_backward(&t), p).unwrap(),
            pi_signature(&encode_backward(&after), p).unwrap()
        );
    }

    #[test]
    fn heuristic_fas_is_a_valid_upper_bound(d in graph()) {
        let h = fas_heuristic(&d);
        prop_assert_eq!(&h.arcs, &backward_arcs(&d, &h.ordering));
        let mut rest = d.clone();
        for &(a, b) in &h.arcs { rest.remove_arc(a, b); }
        prop_assert!(is_acyclic(&rest));
        prop_assert!(h.size >= fas_exact(&d).unwrap().size);
    }

    #[test]
    fn minimization_keeps_net_effect(
        (d, sets) in graph().prop_filter("n >= 2", |d| d.order() >= 2)
            .prop_flat_map(|d| { let n = d.order(); (Just(d), family_for(n, 2.min(n))) })
    ) {
        let fam = InversionFamily::with_sets(SizeMode::Exact(2.min(d.order())), sets);
        let small = minimize_family(&d, &fam).unwrap();
        prop_assert!(small.len() <= d.edges().len());
        prop_assert_eq!(apply_family(&d, &small).unwrap(), apply_family(&d, &fam).unwrap());
    }

    #[test]
    fn pipelines_decycle(seed in any::<u64>(), n in 6usize..11, density in 0.3f64..=1.0, which in 0usize..4) {
        let d = random_oriented_graph(n, density, seed).unwrap();
        let strategy = [Pipeline::Fas, Pipeline::TwoFas, Pipeline::Dense, Pipeline::OptDense][which];
        let r = decycle(&d, 4, strategy).unwrap();
        let rep = verify_family(&d, &r.family, SizeMode::Exact(4)).unwrap();
        prop_assert!(rep.sizes_ok && rep.acyclic);
        prop_assert!(r.len() <= d.arc_count());
    }

    #[test]
    fn json_and_dot_round_trip(d in graph()) {
        prop_assert_eq!(from_json::<OrientedGraph>(&to_json(&d)).unwrap(), d.clone());
        prop_assert_eq!(parse_dot(&to_dot(&d, None)).unwrap(), d);
    }

    #[test]
    fn family_json_round_trip(sets in family_for(8, 3), leq in any::<bool>()) {
        let mode = if leq { SizeMode::AtMost(3) } else { SizeMode::Exact(3) };
        let f = InversionFamily::with_sets(mode, sets);
        prop_assert_eq!(from_json::<InversionFamily>(&to_json(&f)).unwrap(), f);
    }

    #[test]
    fn pair_vector_hex_round_trip(seed in any::<u64>(), n in 0usize..12) {
        let u: PairVector = encode_backward(&random_tournament(n, seed));
        prop_assert_eq!(PairVector::from_hex(n, &u.to_hex()).unwrap(), u);
    }

    #[test]
    fn mcc_reduction_is_digon_free(q1 in 2usize..4, q2 in 2usize..4, q3 in 2usize..3, mask in any::<u64>()) {
        let parts = vec![(0..q1).collect::<Vec<_>>(), (q1..q1 + q2).collect(), (q1 + q2..q1 + q2 + q3).collect()];
        let n = q1 + q2 + q3;
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let inst = MccInstance { n, edges, parts };
        let r = mcc_reduction(&inst).unwrap();
        prop_assert_eq!(r.p, 6);
        let text = to_json(&r.graph);
        prop_assert!(from_json::<OrientedGraph>(&text).is_ok());
        for i in 0..3 {
            let q = r.w[i].len();
            for j in 0..q {
                prop_assert!(r.graph.has_arc(r.w[i][j], r.x[i][j]));
                prop_assert!(r.graph.has_arc(r.x[i][j], r.w[i][(j + 1) % q]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn deleted_vertex_avoids_fas_endpoints(seed in any::<u64>(), n in 55usize..62, flips in 1usize..3) {
        let mut g = invlab_core::generators::transitive_tournament(n).into_graph();
        let mut s = seed;
        for _ in 0..flips {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (s >> 33) as usize % (n - 3);
            g.flip_pair(a, a + 2);
        }
        let t = Tournament::try_from(g).unwrap();
        let cfg = KernelConfig::new(3, 1).with_eps(num_rational::Ratio::from_integer(1));
        let step = delvertex_step(&t, &cfg).unwrap();
        if let StepOutcome::Deleted { tournament, vertex, .. } = step.outcome {
            let minimal = invlab_core::kernel::make_arc_minimal(&t, &fas_heuristic(&t).arcs);
            prop_assert!(minimal.iter().all(|&(a, b)| a != vertex && b != vertex));
            prop_assert_eq!(tournament.order(), n - 1);
        } else {
            prop_assert!(false, "expected a deletion, got {:?}", step.outcome);
        }
    }
}
