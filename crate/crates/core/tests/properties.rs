use mapcone_core::corpus::acceptance_corpus;
use mapcone_core::dg::{dg_check, taylor_dg};
use mapcone_core::format::{parse_ideal, print_ideal};
use mapcone_core::resolution::{betti_from_sets, betti_oracle, lq_ranks, lq_resolution, verify_complex};
use mapcone_core::{Decomposer, Monomial, OrderStrategy, OrderedIdeal};
use proptest::prelude::*;

fn monomial_sets(max_vars: usize, max_exp: u32, max_len: usize) -> impl Strategy<Value = OrderedIdeal> {
    (1..=max_vars).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(0..=max_exp, n), 1..=max_len).prop_filter_map(
            "proper ideal",
            |es| {
                let ms: Vec<Monomial> = es.into_iter().map(Monomial::new).filter(|m| !m.is_one()).collect();
                OrderedIdeal::minimalize(ms).ok()
            },
        )
    })
}

/// Ideals in an order with linear quotients, nondecreasing degrees and a
/// regular decomposition function.
fn resolvable(i: &OrderedIdeal) -> Option<OrderedIdeal> {
    let o = i.find_lq_order(OrderStrategy::Degrevlex).ok()??;
    let ok = o.degrees_nondecreasing() && Decomposer::new(&o).ok()?.is_regular().regular;
    ok.then_some(o)
}

#[test]
fn corpus_ranks_and_entries() {
    for e in acceptance_corpus() {
        let f = lq_resolution(&e.ideal).unwrap();
        assert_eq!(f.ranks(), lq_ranks(&e.ideal).unwrap(), "{:?}", e.ideal.generators());
        for i in 1..=f.length() {
            for (_, _, p) in f.differential(i).entries() {
                let (_, c) = p.single_term().expect("single term");
                assert!(c.numer().magnitude() == &1u32.into() && c.is_integer());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resolutions_verify(i in monomial_sets(4, 3, 6)) {
        if let Some(o) = resolvable(&i) {
            let f = lq_resolution(&o).unwrap();
            let v = verify_complex(&f);
            prop_assert!(v.passed(), "{:?} {:?}", o.generators(), v);
            prop_assert_eq!(f.ranks(), lq_ranks(&o).unwrap());
        }
    }

    #[test]
    fn betti_formula_matches_oracle(i in monomial_sets(4, 3, 6)) {
        if let Some(o) = resolvable(&i) {
            prop_assert_eq!(betti_from_sets(&o).unwrap(), betti_oracle(&o));
        }
    }

    #[test]
    fn taylor_dg_laws(i in monomial_sets(3, 2, 4)) {
        let r = dg_check(&taylor_dg(i.generators()).unwrap());
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn parse_print_roundtrip(i in monomial_sets(5, 4, 8)) {
        prop_assert_eq!(parse_ideal(&print_ideal(&i)).unwrap(), i);
    }
}

