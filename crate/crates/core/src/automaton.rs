//! Path-form automata, their strongly connected components and path-flexibility.

use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{LclError, Result};
use crate::problem::{
    sub_multisets_of_size_2, Label, LabelMultiset, LabelSet, ProblemKind, RootedProblem,
    UnrootedProblem,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    /// Ordered label pair `(a, b)` of an unrooted path-form automaton.
    Pair(Label, Label),
    /// A label of a rooted path-form automaton.
    Single(Label),
    /// A bare vertex of an automaton built from an edge list.
    Plain(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexAutomaton {
    kind: Option<ProblemKind>,
    states: Vec<State>,
    succ: Vec<Vec<usize>>,
}

impl FlexAutomaton {
    /// Automaton over states `0..n` with the given directed edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in edges {
            succ[a].push(b);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        FlexAutomaton {
            kind: None,
            states: (0..n).map(State::Plain).collect(),
            succ,
        }
    }

    /// `None` for automata built from plain edge lists.
    pub fn kind(&self) -> Option<ProblemKind> {
        self.kind
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn state(&self, s: usize) -> State {
        self.states[s]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state_index(&self, state: State) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
    }

    /// States reachable from each state by walks of positive length.
    pub fn positive_reach(&self) -> Vec<BitSet> {
        let n = self.num_states();
        (0..n)
            .map(|s| {
                let mut seen = BitSet::new(n);
                let mut stack: Vec<usize> = Vec::new();
                for &t in &self.succ[s] {
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
                while let Some(u) = stack.pop() {
                    for &t in &self.succ[u] {
                        if seen.insert(t) {
                            stack.push(t);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    pub fn render_state(&self, s: usize, labels: &[String]) -> String {
        let name = |l: Label| {
            labels
                .get(l.index())
                .cloned()
                .unwrap_or_else(|| l.0.to_string())
        };
        match self.states[s] {
            State::Pair(a, b) => format!("{}|{}", name(a), name(b)),
            State::Single(a) => name(a),
            State::Plain(i) => i.to_string(),
        }
    }
}

/// Path-form pair set `D` of a configuration set and the automaton `M_D`.
///
/// `configs` selects node configurations of `problem` by index.
pub fn build_unrooted_automaton(
    problem: &UnrootedProblem,
    configs: &BitSet,
) -> (Vec<LabelMultiset>, FlexAutomaton) {
    let mut pairs: Vec<LabelMultiset> = configs
        .iter()
        .flat_map(|i| sub_multisets_of_size_2(&problem.node_configs[i]).expect("delta >= 2"))
        .collect();
    pairs.sort();
    pairs.dedup();
    let automaton = unrooted_automaton_from_pairs(problem, &pairs);
    (pairs, automaton)
}

/// `M_D` for an explicit pair set `D`.
pub fn unrooted_automaton_from_pairs(
    problem: &UnrootedProblem,
    pairs: &[LabelMultiset],
) -> FlexAutomaton {
    let edges = problem.edge_table();
    let mut states: Vec<State> = Vec::new();
    for p in pairs {
        let (a, b) = (p.entries()[0], p.entries()[1]);
        states.push(State::Pair(a, b));
        if a != b {
            states.push(State::Pair(b, a));
        }
    }
    states.sort();
    states.dedup();
    let succ = states
        .iter()
        .map(|&from| {
            let State::Pair(_, b) = from else {
                unreachable!()
            };
            states
                .iter()
                .enumerate()
                .filter(|(_, to)| matches!(to, State::Pair(c, _) if edges.allows(b, *c)))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    FlexAutomaton {
        kind: Some(ProblemKind::Unrooted),
        states,
        succ,
    }
}

/// Path-form digraph of the restriction of `problem` to `labels`.
pub fn build_rooted_automaton(problem: &RootedProblem, labels: &LabelSet) -> FlexAutomaton {
    let states: Vec<State> = labels
        .iter()
        .map(|i| State::Single(Label::from(i)))
        .collect();
    let index_of = |l: Label| {
        states
            .binary_search(&State::Single(l))
            .expect("label in set")
    };
    let mut succ = vec![Vec::new(); states.len()];
    for c in problem.configs_within(labels) {
        let to = index_of(c.label);
        for &a in c.children.entries() {
            succ[index_of(a)].push(to);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    FlexAutomaton {
        kind: Some(ProblemKind::Rooted),
        states,
        succ,
    }
}

/// A strongly connected component.
///
/// `states` are automaton state ids. For unrooted automata `pairs` lists the
/// member multisets `{a,b}`; `labels` lists the labels occurring in members.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Component {
    pub pairs: Vec<LabelMultiset>,
    pub labels: Vec<Label>,
    pub states: Vec<usize>,
}

impl Component {
    pub fn label_set(&self, universe: usize) -> LabelSet {
        LabelSet::from_indices(universe, self.labels.iter().map(|l| l.index()))
    }
}

/// Classes of the four-way reachability relation on pairs `{a,b}`.
pub fn scc_unrooted(automaton: &FlexAutomaton) -> Vec<Component> {
    let reach = automaton.positive_reach();
    let orient = |p: &LabelMultiset| -> Vec<usize> {
        let (a, b) = (p.entries()[0], p.entries()[1]);
        let mut v = vec![automaton.state_index(State::Pair(a, b)).expect("state")];
        if a != b {
            v.push(automaton.state_index(State::Pair(b, a)).expect("state"));
        }
        v
    };
    let mut pairs: Vec<LabelMultiset> = automaton
        .states
        .iter()
        .filter_map(|s| match *s {
            State::Pair(a, b) if a <= b => Some(LabelMultiset::pair(a, b)),
            _ => None,
        })
        .collect();
    pairs.sort();
    let related = |p: &LabelMultiset, q: &LabelMultiset| {
        let (op, oq) = (orient(p), orient(q));
        op.iter().all(|&s| oq.iter().all(|&t| reach[s].contains(t)))
    };
    let mut assigned = vec![false; pairs.len()];
    let mut out = Vec::new();
    for i in 0..pairs.len() {
        if assigned[i] || !related(&pairs[i], &pairs[i]) {
            continue;
        }
        let mut members = Vec::new();
        for j in i..pairs.len() {
            if !assigned[j] && related(&pairs[i], &pairs[j]) && related(&pairs[j], &pairs[i]) {
                assigned[j] = true;
                members.push(pairs[j].clone());
            }
        }
        out.push(component_of_pairs(automaton, members));
    }
    out.sort();
    out
}

fn component_of_pairs(automaton: &FlexAutomaton, pairs: Vec<LabelMultiset>) -> Component {
    let mut states = Vec::new();
    let mut labels = Vec::new();
    for p in &pairs {
        let (a, b) = (p.entries()[0], p.entries()[1]);
        states.push(automaton.state_index(State::Pair(a, b)).expect("state"));
        states.push(automaton.state_index(State::Pair(b, a)).expect("state"));
        labels.extend([a, b]);
    }
    states.sort_unstable();
    states.dedup();
    labels.sort_unstable();
    labels.dedup();
    Component {
        pairs,
        labels,
        states,
    }
}

/// Ordinary strongly connected components that contain at least one cycle.
pub fn scc_rooted(automaton: &FlexAutomaton) -> Vec<Component> {
    let reach = automaton.positive_reach();
    let n = automaton.num_states();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if assigned[s] || !reach[s].contains(s) {
            continue;
        }
        let states: Vec<usize> = (s..n)
            .filter(|&t| reach[s].contains(t) && reach[t].contains(s))
            .collect();
        for &t in &states {
            assigned[t] = true;
        }
        let labels = states
            .iter()
            .filter_map(|&t| match automaton.states[t] {
                State::Single(l) => Some(l),
                _ => None,
            })
            .collect();
        out.push(Component {
            pairs: Vec::new(),
            labels,
            states,
        });
    }
    out.sort();
    out
}

/// Components under the relation appropriate for the automaton's kind.
pub fn components(automaton: &FlexAutomaton) -> Vec<Component> {
    match automaton.kind {
        Some(ProblemKind::Unrooted) => scc_unrooted(automaton),
        _ => scc_rooted(automaton),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of the lengths `1..=max_len` of closed walks at `state`; 0 if there are none.
pub fn closed_walk_gcd(automaton: &FlexAutomaton, state: usize, max_len: usize) -> usize {
    let n = automaton.num_states();
    let mut cur = BitSet::from_indices(n, [state]);
    let mut g = 0;
    for len in 1..=max_len {
        let mut next = BitSet::new(n);
        for u in cur.iter() {
            for &t in automaton.successors(u) {
                next.insert(t);
            }
        }
        if next.contains(state) {
            g = gcd(g, len);
        }
        cur = next;
    }
    g
}

/// Whether the closed walks at a representative state have coprime lengths.
pub fn is_flexible(automaton: &FlexAutomaton, component: &Component) -> bool {
    let Some(&rep) = component.states.first() else {
        return false;
    };
    let bound = (2 * automaton.num_states()).saturating_sub(1);
    closed_walk_gcd(automaton, rep, bound) == 1
}

/// Minimum `K >= 1` such that every ordered pair of component states is joined
/// by walks of every length in `[K, K + m²]`, `m` the component size.
pub fn flexibility_index(automaton: &FlexAutomaton, component: &Component) -> Result<usize> {
    let m = component.states.len();
    let b_max = 2 * m * m + 2 * m;
    if m == 0 {
        return Err(LclError::StabilizationNotReached { bound: b_max });
    }
    let local = |s: usize| component.states.binary_search(&s).ok();
    let succ: Vec<BitSet> = component
        .states
        .iter()
        .map(|&s| BitSet::from_indices(m, automaton.successors(s).iter().filter_map(|&t| local(t))))
        .collect();
    let window = m * m;
    let full = BitSet::full(m);
    let mut rows = succ.clone();
    let mut start: Option<usize> = None;
    let mut k = 1;
    loop {
        if rows.iter().all(|r| *r == full) {
            let s = *start.get_or_insert(k);
            if k - s >= window {
                return Ok(s);
            }
        } else {
            start = None;
            if k >= b_max {
                return Err(LclError::StabilizationNotReached { bound: b_max });
            }
        }
        rows = rows
            .iter()
            .map(|r| {
                let mut next = BitSet::new(m);
                for u in r.iter() {
                    next.union_with(&succ[u]);
                }
                next
            })
            .collect();
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentInfo {
    pub component: Component,
    pub flexible: bool,
    pub flexibility_index: Option<usize>,
}

/// Components of an automaton with their flexibility annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccReport {
    pub components: Vec<ComponentInfo>,
}

impl SccReport {
    pub fn flexible(&self) -> impl Iterator<Item = (&Component, usize)> {
        self.components
            .iter()
            .filter_map(|c| c.flexibility_index.map(|k| (&c.component, k)))
    }
}

pub fn scc_report(automaton: &FlexAutomaton) -> Result<SccReport> {
    let components = components(automaton)
        .into_iter()
        .map(|component| {
            let flexible = is_flexible(automaton, &component);
            let flexibility_index = if flexible {
                Some(flexibility_index(automaton, &component)?)
            } else {
                None
            };
            Ok(ComponentInfo {
                component,
                flexible,
                flexibility_index,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SccReport { components })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering; flexible components become clusters labeled with K.
pub fn to_dot(automaton: &FlexAutomaton, labels: &[String], report: &SccReport) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    let mut clustered = vec![false; automaton.num_states()];
    for (i, (comp, k)) in report.flexible().enumerate() {
        let _ = writeln!(
            out,
            "  subgraph cluster_{i} {{\n    label=\"flexible K={k}\";\n    style=dashed;"
        );
        for &s in &comp.states {
            clustered[s] = true;
            let _ = writeln!(
                out,
                "    s{s} [label=\"{}\"];",
                dot_escape(&automaton.render_state(s, labels))
            );
        }
        out.push_str("  }\n");
    }
    for (s, &done) in clustered.iter().enumerate() {
        if !done {
            let _ = writeln!(
                out,
                "  s{s} [label=\"{}\"];",
                dot_escape(&automaton.render_state(s, labels))
            );
        }
    }
    for (a, b) in automaton.edges() {
        let _ = writeln!(out, "  s{a} -> s{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::RootedConfig;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{}", i + 1)).collect()
    }

    fn rooted(delta: usize, n: usize, configs: &[(usize, &[usize])]) -> RootedProblem {
        RootedProblem::new(
            delta,
            names(n),
            configs
                .iter()
                .map(|(l, c)| RootedConfig {
                    label: Label::from(*l),
                    children: LabelMultiset::from_ids(c),
                })
                .collect(),
        )
        .unwrap()
    }

    fn edge_set(a: &FlexAutomaton) -> Vec<(State, State)> {
        let mut e: Vec<_> = a.edges().map(|(x, y)| (a.state(x), a.state(y))).collect();
        e.sort();
        e
    }

    #[test]
    fn unrooted_examples() {
        let p = UnrootedProblem::new(
            3,
            names(1),
            vec![LabelMultiset::from_ids(&[0, 0, 0])],
            vec![LabelMultiset::from_ids(&[0, 0])],
        )
        .unwrap();
        let (d, a) = build_unrooted_automaton(&p, &BitSet::new(1));
        assert!(d.is_empty() && a.num_states() == 0);
        let (d, a) = build_unrooted_automaton(&p, &BitSet::full(1));
        assert_eq!(d, vec![LabelMultiset::from_ids(&[0, 0])]);
        assert_eq!(a.num_states(), 1);
        assert!(a.has_edge(0, 0));
        assert_eq!(scc_unrooted(&a).len(), 1);

        let two = UnrootedProblem::new(
            3,
            names(2),
            vec![
                LabelMultiset::from_ids(&[0, 0, 0]),
                LabelMultiset::from_ids(&[1, 1, 1]),
            ],
            vec![LabelMultiset::from_ids(&[0, 1])],
        )
        .unwrap();
        let (d, a) = build_unrooted_automaton(&two, &BitSet::full(2));
        assert_eq!(
            d,
            vec![
                LabelMultiset::from_ids(&[0, 0]),
                LabelMultiset::from_ids(&[1, 1])
            ]
        );
        let (l1, l2) = (Label(0), Label(1));
        assert_eq!(
            edge_set(&a),
            vec![
                (State::Pair(l1, l1), State::Pair(l2, l2)),
                (State::Pair(l2, l2), State::Pair(l1, l1))
            ]
        );
        let comps = scc_unrooted(&a);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].pairs.len(), 2);
        assert!(!is_flexible(&a, &comps[0]));
    }

    #[test]
    fn lone_state_without_loop_has_no_class() {
        let p = UnrootedProblem::new(
            3,
            names(2),
            vec![LabelMultiset::from_ids(&[0, 0, 0])],
            vec![LabelMultiset::from_ids(&[1, 1])],
        )
        .unwrap();
        let (_, a) = build_unrooted_automaton(&p, &BitSet::full(1));
        assert_eq!(a.num_states(), 1);
        assert!(scc_unrooted(&a).is_empty());
    }

    #[test]
    fn rooted_examples() {
        let intro = rooted(2, 2, &[(0, &[0, 1]), (1, &[0, 0])]);
        let a = build_rooted_automaton(&intro, &intro.all_labels());
        let (s1, s2) = (State::Single(Label(0)), State::Single(Label(1)));
        assert_eq!(edge_set(&a), vec![(s1, s1), (s1, s2), (s2, s1)]);
        let comps = scc_rooted(&a);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].labels, vec![Label(0), Label(1)]);
        assert!(is_flexible(&a, &comps[0]));

        let ab = rooted(2, 2, &[(0, &[1, 1]), (1, &[0, 0])]);
        let a = build_rooted_automaton(&ab, &ab.all_labels());
        assert_eq!(a.num_edges(), 2);
        let comps = scc_rooted(&a);
        assert_eq!(comps.len(), 1);
        assert!(!is_flexible(&a, &comps[0]));
        let only_a = LabelSet::from_indices(2, [0]);
        let a = build_rooted_automaton(&ab, &only_a);
        assert_eq!((a.num_states(), a.num_edges()), (1, 0));
        assert!(scc_rooted(&a).is_empty());
    }

    #[test]
    fn self_loop_index_is_one() {
        let a = FlexAutomaton::from_edges(1, &[(0, 0)]);
        let c = &scc_rooted(&a)[0];
        assert!(is_flexible(&a, c));
        assert_eq!(flexibility_index(&a, c).unwrap(), 1);
    }

    #[test]
    fn two_cycle_has_no_index() {
        let a = FlexAutomaton::from_edges(2, &[(0, 1), (1, 0)]);
        let c = &scc_rooted(&a)[0];
        assert!(flexibility_index(&a, c).is_err());
    }

    #[test]
    fn dot_output_lists_states_and_edges() {
        let a = FlexAutomaton::from_edges(3, &[(0, 1), (1, 2), (2, 0), (2, 1)]);
        let report = scc_report(&a).unwrap();
        let dot = to_dot(&a, &[], &report);
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("cluster_0"));
    }
}
