mod common;

use common::{flexible_by_walks, index_by_walks, random_automaton};
use lcl_core::automaton::{
    build_rooted_automaton, closed_walk_gcd, components, flexibility_index, is_flexible,
    scc_report, FlexAutomaton,
};
use lcl_core::problem::Problem;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mis() -> FlexAutomaton {
    // states 0 = 00, 1 = 01, 2 = 10
    FlexAutomaton::from_edges(3, &[(0, 1), (1, 2), (2, 0), (2, 1)])
}

#[test]
fn mis_automaton_index() {
    let a = mis();
    let comps = components(&a);
    assert_eq!(comps.len(), 1);
    assert!(is_flexible(&a, &comps[0]));
    let k = flexibility_index(&a, &comps[0]).unwrap();
    assert_eq!(k, index_by_walks(&a, &comps[0].states));
    assert_eq!(k, 5);
}

#[test]
fn mis_path_problem_has_the_same_automaton() {
    let p = common::problem(common::MIS_PATH);
    let Problem::Rooted(r) = &p else {
        unreachable!()
    };
    let a = build_rooted_automaton(r, &r.all_labels());
    assert_eq!(a.num_states(), 3);
    assert_eq!(a.num_edges(), 4);
    let report = scc_report(&a).unwrap();
    assert_eq!(
        report.flexible().map(|(_, k)| k).collect::<Vec<_>>(),
        vec![5]
    );
}

#[test]
fn two_cycle_is_not_flexible() {
    let a = FlexAutomaton::from_edges(2, &[(0, 1), (1, 0)]);
    let c = &components(&a)[0];
    assert!(!is_flexible(&a, c));
    assert_eq!(closed_walk_gcd(&a, 0, 3), 2);
}

#[test]
fn self_loop_index_is_one() {
    let a = FlexAutomaton::from_edges(1, &[(0, 0)]);
    let c = &components(&a)[0];
    assert_eq!(flexibility_index(&a, c).unwrap(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flexibility_matches_walk_oracle(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = rng.random_range(0.1..0.6);
        let a = random_automaton(&mut rng, n, p);
        for c in components(&a) {
            let flexible = is_flexible(&a, &c);
            for &s in &c.states {
                prop_assert_eq!(flexible, flexible_by_walks(&a, s));
            }
            if flexible {
                prop_assert_eq!(flexibility_index(&a, &c).unwrap(), index_by_walks(&a, &c.states));
            }
        }
    }

    #[test]
    fn gcd_truncation_is_exact(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_automaton(&mut rng, n, 0.3);
        for s in 0..n {
            prop_assert_eq!(closed_walk_gcd(&a, s, 2 * n - 1), closed_walk_gcd(&a, s, 4 * n));
        }
    }
}
