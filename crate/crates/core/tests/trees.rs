use lcl_core::problem::ProblemKind;
use lcl_core::tree::{
    complete_tree, hairy_path, lower_bound_size_rooted, lower_bound_size_unrooted,
    lower_bound_tree_rooted, lower_bound_tree_unrooted, random_bounded_tree, random_regular_tree,
    Layer, LowerBoundParams, Role, Tree,
};
use proptest::prelude::*;

fn small_gadget() -> LowerBoundParams {
    let mut p = LowerBoundParams::new(3, 2, 1, 1);
    p.gamma_hat = 2;
    p.path_len = Some(5);
    p
}

#[test]
fn small_gadget_shape() {
    let tree = lower_bound_tree_unrooted(&small_gadget()).unwrap();
    assert_eq!(tree.n(), 574);
    assert_eq!((0..tree.n()).filter(|&v| tree.degree(v) == 1).count(), 288);
    assert_eq!((0..tree.n()).filter(|&v| tree.degree(v) == 3).count(), 286);
    assert_eq!(lower_bound_size_unrooted(&small_gadget()), 574);
    let compress = (0..tree.n())
        .filter(|&v| tree.annotation(v).unwrap().layer == Layer::compress(1))
        .count();
    assert_eq!(compress, 12 * 5);
}

fn check_unrooted(p: &LowerBoundParams) {
    let tree = lower_bound_tree_unrooted(p).unwrap();
    assert_eq!(tree.n() as u128, lower_bound_size_unrooted(p));
    for v in 0..tree.n() {
        let a = tree.annotation(v).unwrap();
        let d = tree.degree(v);
        assert!(
            d == p.degree || (d == 1 && a.layer == Layer::rake(1)),
            "node {v} degree {d} in {}",
            a.layer
        );
        assert_eq!(
            a.role.is_some(),
            a.layer.index <= p.k && a.layer != Layer::rake(a.layer.index)
        );
    }
    check_roles(&tree, p);
}

fn check_rooted(p: &LowerBoundParams) {
    let tree = lower_bound_tree_rooted(p).unwrap();
    assert_eq!(tree.n() as u128, lower_bound_size_rooted(p));
    for v in 0..tree.n() {
        let d = tree.indegree(v);
        assert!(d == 0 || d == p.degree, "node {v} indegree {d}");
    }
    check_roles(&tree, p);
}

fn check_roles(tree: &Tree, p: &LowerBoundParams) {
    let count = |r: Role| {
        (0..tree.n())
            .filter(|&v| tree.annotation(v).unwrap().role == Some(r))
            .count()
    };
    let (front, central, rear) = (count(Role::Front), count(Role::Central), count(Role::Rear));
    let paths = (front + central + rear) / p.s();
    assert_eq!(paths * p.s(), front + central + rear);
    assert_eq!(front, paths * p.t.min(p.s()));
    assert_eq!(central, paths * p.s().saturating_sub(2 * p.t));
}

#[test]
fn small_lower_bound_graphs() {
    for degree in 3..=4 {
        for k in 1..=2 {
            for t in 1..=2 {
                let mut p = LowerBoundParams::new(degree, 2, k, t);
                p.gamma_hat = 2;
                p.path_len = Some(4 * t + 2);
                if lower_bound_size_unrooted(&p) <= 200_000 {
                    check_unrooted(&p);
                }
            }
        }
    }
    for degree in 1..=3 {
        for k in 1..=3 {
            let mut p = LowerBoundParams::new(degree, 2, k, 1);
            p.gamma_hat = 2;
            p.path_len = Some(5);
            if lower_bound_size_rooted(&p) <= 200_000 {
                check_rooted(&p);
            }
        }
    }
}

#[test]
fn default_path_length() {
    let p = LowerBoundParams::new(3, 3, 2, 4);
    assert_eq!(p.s(), 10 * 4 + 9 + 10);
    assert_eq!(p.gamma_hat, 4);
    check_rooted(&LowerBoundParams::new(2, 2, 1, 1));
    check_unrooted(&LowerBoundParams::new(3, 2, 1, 1));
}

#[test]
fn rejected_parameters() {
    assert!(lower_bound_tree_unrooted(&LowerBoundParams::new(3, 2, 0, 1)).is_err());
    assert!(lower_bound_tree_unrooted(&LowerBoundParams::new(3, 2, 1, 0)).is_err());
    assert!(lower_bound_tree_unrooted(&LowerBoundParams::new(1, 2, 1, 1)).is_err());
    assert!(random_bounded_tree(0, ProblemKind::Rooted, 2, 0).is_err());
    assert!(hairy_path(0, 3).is_err());
}

#[test]
fn complete_and_hairy_counts() {
    for h in 0..6 {
        let t = complete_tree(ProblemKind::Unrooted, 3, h, true).unwrap();
        assert_eq!(t.n(), 1 + 3 * ((1 << h) - 1));
        let r = complete_tree(ProblemKind::Rooted, 3, h, false).unwrap();
        assert_eq!(r.n(), (3usize.pow(h as u32 + 1) - 1) / 2);
    }
    for k in 1..20 {
        let h = hairy_path(k, 3).unwrap();
        assert_eq!(h.n(), 2 * (k + 1) + 2);
        assert_eq!(h.max_degree(), 3);
    }
}

proptest! {
    #[test]
    fn random_regular_trees_are_full(n in 1usize..3000, degree in 1usize..5, seed in any::<u64>(), rooted in any::<bool>()) {
        let kind = if rooted { ProblemKind::Rooted } else { ProblemKind::Unrooted };
        prop_assume!(rooted || degree >= 2);
        let tree = random_regular_tree(n, kind, degree, seed).unwrap();
        prop_assert!(tree.n() <= n && tree.n() + degree > n);
        for v in 0..tree.n() {
            if rooted {
                prop_assert!(tree.indegree(v) == 0 || tree.indegree(v) == degree);
            } else if tree.n() > 1 {
                prop_assert!(tree.degree(v) == 1 || tree.degree(v) == degree);
            }
        }
    }

    #[test]
    fn random_bounded_trees_respect_the_bound(n in 1usize..3000, max_degree in 2usize..6, seed in any::<u64>(), rooted in any::<bool>()) {
        let kind = if rooted { ProblemKind::Rooted } else { ProblemKind::Unrooted };
        let tree = random_bounded_tree(n, kind, max_degree, seed).unwrap();
        prop_assert_eq!(tree.n(), n);
        prop_assert_eq!(tree.edges().len(), n - 1);
        for v in 0..n {
            let d = if rooted { tree.indegree(v) } else { tree.degree(v) };
            prop_assert!(d <= max_degree);
        }
    }
}
