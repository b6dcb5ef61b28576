#![allow(dead_code)]

use lcl_core::automaton::FlexAutomaton;
use lcl_core::parser::parse_problem;
use lcl_core::problem::{
    Label, LabelMultiset, Problem, RootedConfig, RootedProblem, UnrootedProblem,
};
use rand::Rng;

pub const INTRO: &str = include_str!("../../../../problems/intro.lcl");
pub const ROOTED_TWO_COLORING: &str = include_str!("../../../../problems/rooted-two-coloring.lcl");
pub const UNROOTED_TWO_COLORING: &str =
    include_str!("../../../../problems/unrooted-two-coloring.lcl");
pub const SINKLESS: &str = include_str!("../../../../problems/sinkless-orientation.lcl");
pub const MIS_PATH: &str = include_str!("../../../../problems/mis-path.lcl");
pub const EMPTY: &str = include_str!("../../../../problems/empty.lcl");

pub fn problem(text: &str) -> Problem {
    parse_problem(text).expect("sample problem parses").problem
}

fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// All multisets of size `k` over `n` labels, in lexicographic order.
pub fn multisets(n: usize, k: usize) -> Vec<LabelMultiset> {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<LabelMultiset>) {
        if cur.len() == k {
            out.push(LabelMultiset::from_ids(cur));
            return;
        }
        for x in from..n {
            cur.push(x);
            go(n, k, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Rooted problem keeping each possible configuration with probability `p`.
pub fn random_rooted(rng: &mut impl Rng, delta: usize, labels: usize, p: f64) -> Problem {
    let mut configs = Vec::new();
    for l in 0..labels {
        for m in multisets(labels, delta) {
            if rng.random_bool(p) {
                configs.push(RootedConfig {
                    label: Label::from(l),
                    children: m,
                });
            }
        }
    }
    Problem::Rooted(RootedProblem::new(delta, names(labels), configs).expect("valid"))
}

/// Rooted problem with exactly `count` distinct configurations.
pub fn random_rooted_sized(
    rng: &mut impl Rng,
    delta: usize,
    labels: usize,
    count: usize,
) -> Problem {
    let mut all = Vec::new();
    for l in 0..labels {
        for m in multisets(labels, delta) {
            all.push(RootedConfig {
                label: Label::from(l),
                children: m,
            });
        }
    }
    for i in 0..count.min(all.len()) {
        let j = rng.random_range(i..all.len());
        all.swap(i, j);
    }
    all.truncate(count);
    Problem::Rooted(RootedProblem::new(delta, names(labels), all).expect("valid"))
}

/// Unrooted problem keeping each node and edge configuration with probability `p`.
pub fn random_unrooted(rng: &mut impl Rng, delta: usize, labels: usize, p: f64) -> Problem {
    let nodes = multisets(labels, delta)
        .into_iter()
        .filter(|_| rng.random_bool(p))
        .collect();
    let edges = multisets(labels, 2)
        .into_iter()
        .filter(|_| rng.random_bool(p))
        .collect();
    Problem::Unrooted(UnrootedProblem::new(delta, names(labels), nodes, edges).expect("valid"))
}

/// Boolean adjacency matrix product.
pub fn mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

/// `powers[k][i][j]`: a walk of exactly `k` steps from `i` to `j` exists, for `k` in `0..=max`.
pub fn walk_powers(adj: &[Vec<bool>], max: usize) -> Vec<Vec<Vec<bool>>> {
    let n = adj.len();
    let mut id = vec![vec![false; n]; n];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = true;
    }
    let mut out = vec![id];
    for _ in 0..max {
        let next = mat_mul(out.last().unwrap(), adj);
        out.push(next);
    }
    out
}

pub fn random_automaton(rng: &mut impl Rng, n: usize, p: f64) -> FlexAutomaton {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    FlexAutomaton::from_edges(n, &edges)
}

fn adjacency(a: &FlexAutomaton, states: &[usize]) -> Vec<Vec<bool>> {
    states
        .iter()
        .map(|&s| states.iter().map(|&t| a.has_edge(s, t)).collect())
        .collect()
}

/// Closed walks at `s` of every length in `[K, 4|V|²]` for some `K ≤ 2|V|²`.
pub fn flexible_by_walks(a: &FlexAutomaton, s: usize) -> bool {
    let n = a.num_states();
    let all: Vec<usize> = (0..n).collect();
    let pw = walk_powers(&adjacency(a, &all), 4 * n * n);
    (1..=2 * n * n).any(|k| (k..=4 * n * n).all(|len| pw[len][s][s]))
}

/// Smallest `K ≥ 1` after which every ordered pair of the component is joined by
/// walks of every length, checked far past the stabilization point.
pub fn index_by_walks(a: &FlexAutomaton, states: &[usize]) -> usize {
    let m = states.len();
    let horizon = 8 * m * m + 8;
    let pw = walk_powers(&adjacency(a, states), horizon);
    let full = |k: usize| pw[k].iter().all(|r| r.iter().all(|&x| x));
    (1..=horizon)
        .find(|&k| (k..=horizon).all(full))
        .expect("flexible component stabilizes")
}
