use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zp_colorful::altdefect::{alt_min, colorability_defect, AltMode};
use zp_colorful::colorful::{find_colorful_balanced, local_lower_formulas, validate_colorful_witness, ColorfulSearch};
use zp_colorful::index::{s0, value_l, value_l_by_definition, LabeledSimplex};
use zp_colorful::io::{coloring_to_text, hypergraph_to_text, parse_coloring, parse_hypergraph};
use zp_colorful::{ChromaticNumber, Hypergraph, Modulus, SearchBudget, VertexSet};

/// A `k`-uniform hypergraph on `n` vertices from a mask over all `k`-subsets.
fn uniform(n: usize, k: usize, mask: u64) -> Hypergraph {
    let all: Vec<VertexSet> = (0u64..1 << n).map(VertexSet).filter(|s| s.len() == k).collect();
    let edges = all.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| *e).collect();
    Hypergraph::from_sets(n, edges).unwrap().with_uniformity(k).unwrap()
}

fn graph() -> impl Strategy<Value = Hypergraph> {
    (2usize..=7, any::<u64>()).prop_map(|(n, mask)| uniform(n, 2, mask))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_roundtrips(n in 1usize..=8, k in 1usize..=3, mask in any::<u64>()) {
        prop_assume!(k <= n);
        let h = uniform(n, k, mask);
        let back = parse_hypergraph(&hypergraph_to_text(&h)).unwrap();
        prop_assert_eq!(back.n(), h.n());
        prop_assert_eq!(back.edges(), h.edges());
        prop_assert_eq!(back.uniformity(), h.uniformity());
    }

    #[test]
    fn coloring_text_roundtrips(colors in prop::collection::vec(0usize..9, 1..20)) {
        let c = zp_colorful::Coloring::from_colors(colors.clone());
        let back = parse_coloring(&coloring_to_text(&c), colors.len()).unwrap();
        prop_assert_eq!(back.colors(), &colors[..]);
    }

    #[test]
    fn chromatic_witness_is_optimal_and_proper(h in graph()) {
        let res = h.chromatic_number(SearchBudget::default());
        let ChromaticNumber::Finite(k) = res.value else { panic!("graphs are colorable") };
        let c = res.witness.unwrap();
        prop_assert!(res.exact);
        prop_assert!(h.is_proper(&c).unwrap());
        prop_assert!(c.used() <= k);
        prop_assert!(h.clique_number().unwrap() <= k);
        if k > 1 {
            prop_assert!(h.proper_colorings(k - 1, 1).is_empty());
        }
    }

    #[test]
    fn defect_is_below_alternation_bound(n in 3usize..=7, k in 2usize..=3, p in prop::sample::select(vec![2usize, 3]), mask in any::<u64>()) {
        prop_assume!(k <= n);
        let f = uniform(n, k, mask);
        let cd = colorability_defect(&f, p, SearchBudget::default()).unwrap();
        let alt = alt_min(&f, p, AltMode::Exact).unwrap();
        prop_assert!(cd.value <= n - alt.value, "cd {} alt {}", cd.value, alt.value);
    }

    #[test]
    fn colorful_witnesses_validate(h in graph(), seed in any::<u64>(), target in 1usize..=4) {
        let chi = h.chromatic_number(SearchBudget::default()).finite().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = h.random_proper_coloring(chi + 1, &mut rng).unwrap();
        let res = find_colorful_balanced(&h, &c, Modulus::prime(2).unwrap(), target, SearchBudget::default()).unwrap();
        match &res {
            ColorfulSearch::Found(w) => {
                prop_assert_eq!(w.total_size, target);
                prop_assert!(validate_colorful_witness(&h, &c, w).is_ok());
            }
            ColorfulSearch::Counterexample { best_total, best, .. } => {
                prop_assert!(*best_total < target);
                prop_assert!(validate_colorful_witness(&h, &c, best).is_ok());
            }
            ColorfulSearch::Unknown { .. } => prop_assert!(false, "tiny search ran out of budget"),
        }
    }

    #[test]
    fn local_bound_formulas(t in 0usize..60, p in 2usize..=7, r in 2usize..=7) {
        prop_assume!(r <= p);
        let f = local_lower_formulas(t, p, r).unwrap();
        prop_assert_eq!(f.a * p + f.b, t);
        prop_assert!(f.hypergraph_bound <= t.div_ceil(r - 1));
        prop_assert_eq!(f.degenerate, t < p);
        if r == 2 {
            prop_assert_eq!(f.graph_bound.min(t), f.hypergraph_bound);
        }
        let next = local_lower_formulas(t + 1, p, r).unwrap();
        prop_assert!(next.hypergraph_bound >= f.hypergraph_bound);
    }

    #[test]
    fn l_closed_form(p in 2usize..=5, m in 1usize..=6, mask in any::<u64>()) {
        let e: Vec<(usize, usize)> = (0..p * m).filter(|&i| mask >> i & 1 == 1).map(|i| (i % p, i / p)).collect();
        let tau = LabeledSimplex::new(p, m, &e).unwrap();
        prop_assert_eq!(value_l(&tau).0, value_l_by_definition(&tau));
    }

    #[test]
    fn s0_is_equivariant(p in prop::sample::select(vec![2usize, 3, 5, 7, 11]), mask in any::<u64>()) {
        let set = VertexSet(mask & ((1 << p) - 1));
        prop_assume!(!set.is_empty() && set.len() < p);
        let shifted: VertexSet = set.iter().map(|x| (x + 1) % p).collect();
        prop_assert_eq!(s0(shifted, p).unwrap(), (s0(set, p).unwrap() + 1) % p);
    }
}
