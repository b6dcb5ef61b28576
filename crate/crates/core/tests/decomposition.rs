use lcl_core::decompose::{
    choose_parameters, decompose, shrinkage_violations, surviving_subtree_sizes,
    validate_decomposition, Decomposition, ParamMode,
};
use lcl_core::problem::ProblemKind;
use lcl_core::tree::{
    complete_tree, hairy_path, random_bounded_tree, random_regular_tree, Layer, Phase, Tree,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tree(rng: &mut impl Rng) -> Tree {
    let kind = if rng.random_bool(0.5) {
        ProblemKind::Rooted
    } else {
        ProblemKind::Unrooted
    };
    let n = rng.random_range(1..400);
    let seed = rng.random();
    if rng.random_bool(0.5) {
        let d = rng.random_range(2..5);
        random_regular_tree(n, kind, d, seed).unwrap()
    } else {
        let d = rng.random_range(2..6);
        random_bounded_tree(n, kind, d, seed).unwrap()
    }
}

#[test]
fn thousand_random_trees_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let tree = random_tree(&mut rng);
        let gamma = rng.random_range(1..5);
        let ell = rng.random_range(1..5);
        let dec = decompose(&tree, gamma, ell).unwrap();
        assert_eq!(validate_decomposition(&tree, &dec), Vec::<String>::new());
        assert_eq!(dec.assignment.len(), tree.n());
        assert!(dec
            .assignment
            .iter()
            .all(|l| l.index >= 1 && l.index <= dec.layers));
        let covered: usize = dec.components.iter().map(|c| c.nodes.len()).sum();
        assert_eq!(covered, tree.n());
    }
}

#[test]
fn single_node() {
    for kind in [ProblemKind::Rooted, ProblemKind::Unrooted] {
        let tree = complete_tree(kind, 2, 0, false).unwrap();
        let dec = decompose(&tree, 1, 1).unwrap();
        assert_eq!(dec.layers, 1);
        assert_eq!(dec.assignment, vec![Layer::rake(1)]);
    }
}

#[test]
fn complete_binary_tree_is_pure_raking() {
    for h in 0..8 {
        let tree = complete_tree(ProblemKind::Rooted, 2, h, false).unwrap();
        let dec = decompose(&tree, 1, 2).unwrap();
        assert_eq!(dec.layers, h + 1);
        assert!(dec.assignment.iter().all(|l| l.phase == Phase::Rake));
    }
}

#[test]
fn star() {
    let tree = complete_tree(ProblemKind::Unrooted, 3, 1, true).unwrap();
    let dec = decompose(&tree, 1, 1).unwrap();
    assert_eq!(dec.layers, 2);
    let center = (0..4).find(|&v| tree.degree(v) == 3).unwrap();
    for v in 0..4 {
        let expected = if v == center {
            Layer::rake(2)
        } else {
            Layer::rake(1)
        };
        assert_eq!(dec.assignment[v], expected);
    }
}

#[test]
fn hairy_path_interior_is_compressed_in_chunks() {
    let tree = hairy_path(9, 3).unwrap();
    let dec = decompose(&tree, 1, 2).unwrap();
    assert_eq!(dec.layers, 2);
    for v in 0..tree.n() {
        if tree.degree(v) == 1 {
            assert_eq!(dec.assignment[v], Layer::rake(1));
        }
    }
    let chunks: Vec<_> = dec
        .components
        .iter()
        .filter(|c| c.layer == Layer::compress(1))
        .collect();
    assert!(!chunks.is_empty());
    for c in &chunks {
        assert!((2..=4).contains(&c.nodes.len()));
        assert!(c.nodes.iter().all(|&v| tree.degree(v) == 3));
    }
    let interior = (0..tree.n()).filter(|&v| tree.degree(v) == 3).count();
    let compressed: usize = chunks.iter().map(|c| c.nodes.len()).sum();
    let promoted = dec
        .assignment
        .iter()
        .filter(|&&l| l == Layer::rake(2))
        .count();
    assert_eq!(compressed + promoted, interior);
}

#[test]
fn directed_path_layer_bound() {
    let n = 20;
    let edges: Vec<_> = (1..n).map(|v| (v, v - 1)).collect();
    let tree = Tree::from_edges(ProblemKind::Rooted, n, &edges, None).unwrap();
    let dec = decompose(&tree, 1, 2).unwrap();
    assert!(validate_decomposition(&tree, &dec).is_empty());
    let bound = 1.0 + (n as f64).ln() / (5.0f64 / 4.0).ln();
    assert!((dec.layers as f64) <= bound);
}

#[test]
fn hand_built_violations() {
    let path = Tree::from_edges(ProblemKind::Unrooted, 3, &[(0, 1), (1, 2)], None).unwrap();
    let dec = Decomposition::from_assignment(
        ProblemKind::Unrooted,
        1,
        2,
        vec![Layer::rake(2), Layer::compress(1), Layer::rake(2)],
    );
    assert!(!validate_decomposition(&path, &dec).is_empty());

    let pair = Tree::from_edges(ProblemKind::Rooted, 2, &[(1, 0)], None).unwrap();
    let dec = Decomposition::from_assignment(
        ProblemKind::Rooted,
        1,
        1,
        vec![Layer::rake(1), Layer::rake(1)],
    );
    assert!(!validate_decomposition(&pair, &dec).is_empty());
    let dec = Decomposition::from_assignment(
        ProblemKind::Rooted,
        2,
        1,
        vec![Layer::rake(1), Layer::rake(1)],
    );
    assert!(validate_decomposition(&pair, &dec).is_empty());
}

#[test]
fn whole_subtree_survives_iteration_zero() {
    let tree = random_bounded_tree(300, ProblemKind::Rooted, 3, 11).unwrap();
    let dec = decompose(&tree, 1, 2).unwrap();
    let sizes = surviving_subtree_sizes(&tree, &dec, 0);
    assert_eq!(sizes[tree.root().unwrap()], tree.n());
    let last = dec.raw.iter().map(|r| r.iteration).max().unwrap();
    assert!(surviving_subtree_sizes(&tree, &dec, last)
        .iter()
        .all(|&s| s == 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn rooted_subtrees_shrink(seed in any::<u64>(), n in 1usize..2000, gamma in 1usize..5, ell in 1usize..4, regular in any::<bool>()) {
        let tree = if regular {
            random_regular_tree(n, ProblemKind::Rooted, 2, seed).unwrap()
        } else {
            random_bounded_tree(n, ProblemKind::Rooted, 3, seed).unwrap()
        };
        let dec = decompose(&tree, gamma, ell).unwrap();
        prop_assert_eq!(shrinkage_violations(&tree, &dec), Vec::<String>::new());
    }

    #[test]
    fn rooted_layer_count_within_parameters(seed in any::<u64>(), n in 1usize..3000, k in 1usize..4, ell in 1usize..4) {
        let tree = random_bounded_tree(n, ProblemKind::Rooted, 3, seed).unwrap();
        let (_, l_star) = choose_parameters(tree.n(), ParamMode::Logarithmic, ell).unwrap();
        prop_assert!(decompose(&tree, 1, ell).unwrap().layers <= l_star);
        let (gamma, _) = choose_parameters(tree.n(), ParamMode::Finite(k), ell).unwrap();
        let dec = decompose(&tree, gamma, ell).unwrap();
        prop_assert!(dec.layers <= k, "n={} gamma={} layers={}", tree.n(), gamma, dec.layers);
    }

    #[test]
    fn unrooted_decompositions_validate(seed in any::<u64>(), n in 1usize..1500, gamma in 1usize..4, ell in 1usize..4) {
        let tree = random_bounded_tree(n, ProblemKind::Unrooted, 4, seed).unwrap();
        let dec = decompose(&tree, gamma, ell).unwrap();
        prop_assert!(validate_decomposition(&tree, &dec).is_empty());
        let (_, l_star) = choose_parameters(tree.n(), ParamMode::Logarithmic, ell).unwrap();
        prop_assert!(dec.layers <= l_star + 1, "layers={} bound={}", dec.layers, l_star);
    }
}

#[test]
fn component_root_keeps_an_uncompressible_run() {
    let tree = Tree::from_edges(ProblemKind::Rooted, 3, &[(1, 0), (2, 1)], None).unwrap();
    let dec = decompose(&tree, 1, 1).unwrap();
    let before = surviving_subtree_sizes(&tree, &dec, 0)[0];
    let after = surviving_subtree_sizes(&tree, &dec, 1)[0];
    assert_eq!((before, after), (3, 2));
    assert!(after * 3 >= before * 2);
    assert!(shrinkage_violations(&tree, &dec).is_empty());
}
