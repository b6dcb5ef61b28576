//! Labeling trees from a good sequence and a rake-and-compress decomposition,
//! plus an exhaustive backtracking oracle.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::classify::{compute_depth, GoodSequence};
use crate::decompose::{choose_parameters, decompose, Decomposition, LayerComponent, ParamMode};
use crate::error::{LclError, Result};
use crate::labeling::{validate_labeling, Labeling};
use crate::problem::{
    Label, LabelMultiset, LabelSet, Problem, ProblemKind, RootedProblem, UnrootedProblem,
};
use crate::tree::{Layer, Phase, Tree};

/// A labeling together with the decomposition and parameters that produced it.
#[derive(Clone, Debug)]
pub struct Solution {
    pub labeling: Labeling,
    pub decomposition: Decomposition,
    pub gamma: usize,
    pub ell: usize,
    /// Analytic round count `(γ + ℓ) · L`.
    pub rounds: usize,
    /// Layer whose processing fixed each node's label (rooted) or half-edge labels (unrooted).
    pub fixed_by: Vec<Layer>,
    /// The full configuration each node was labeled with: the index into
    /// `configs` (rooted) or `node_configs` (unrooted), when one was chosen.
    pub config_of: Vec<Option<usize>>,
}

fn check_degrees(problem: &Problem, tree: &Tree) -> Result<()> {
    if problem.kind() != tree.kind() {
        return Err(LclError::KindMismatch(format!(
            "problem is {}, tree is {}",
            problem.kind(),
            tree.kind()
        )));
    }
    let d = problem.delta();
    for v in 0..tree.n() {
        let deg = match tree.kind() {
            ProblemKind::Rooted => tree.indegree(v),
            ProblemKind::Unrooted => tree.degree(v),
        };
        if deg > d {
            return Err(LclError::IncompatibleDegree(format!(
                "node {v} has {} {deg}, problem allows {d}",
                if tree.kind() == ProblemKind::Rooted {
                    "indegree"
                } else {
                    "degree"
                }
            )));
        }
    }
    Ok(())
}

/// The `ℓ` required by a certificate.
pub fn required_ell(sequence: &GoodSequence) -> usize {
    let flex = sequence
        .flexible
        .iter()
        .map(|f| f.flexibility)
        .max()
        .unwrap_or(0);
    match sequence.kind {
        ProblemKind::Rooted => flex.max(1),
        ProblemKind::Unrooted => flex.saturating_sub(1).max(1),
    }
}

/// Decomposition parameters for a certificate on an `n`-node tree.
fn decompose_for(tree: &Tree, sequence: &GoodSequence, ell: usize) -> Result<Decomposition> {
    if sequence.stabilized {
        return decompose(tree, 1, ell);
    }
    let k = sequence.len();
    let (mut gamma, _) = choose_parameters(tree.n(), ParamMode::Finite(k), ell)?;
    loop {
        let dec = decompose(tree, gamma, ell)?;
        if dec.layers <= k {
            return Ok(dec);
        }
        if gamma >= tree.n() {
            return Err(LclError::CompletionFailure(format!(
                "no decomposition with at most {k} layers"
            )));
        }
        gamma = (2 * gamma).min(tree.n());
    }
}

/// Label `tree` using the certificate `sequence`; the result is checked before it is returned.
pub fn solve_with_certificate(
    problem: &Problem,
    tree: &Tree,
    sequence: &GoodSequence,
) -> Result<Solution> {
    check_degrees(problem, tree)?;
    if sequence.kind != problem.kind() || sequence.is_empty() {
        return Err(LclError::KindMismatch(
            "certificate does not match the problem".into(),
        ));
    }
    let ell = required_ell(sequence);
    let dec = decompose_for(tree, sequence, ell)?;
    let mut by_layer: HashMap<Layer, Vec<&LayerComponent>> = HashMap::new();
    for c in &dec.components {
        by_layer.entry(c.layer).or_default().push(c);
    }
    let mut order = Vec::new();
    for i in (1..=dec.layers).rev() {
        if i < dec.layers {
            order.push(Layer::compress(i));
        }
        order.push(Layer::rake(i));
    }
    let (labeling, fixed_by, config_of) = match problem {
        Problem::Rooted(p) => {
            let mut s = RootedSolver::new(p, tree, sequence);
            for layer in &order {
                for comp in by_layer.get(layer).into_iter().flatten() {
                    s.component(comp, &dec)?;
                }
            }
            (Labeling::Rooted(s.labels), s.fixed_by, s.config_of)
        }
        Problem::Unrooted(p) => {
            let mut s = UnrootedSolver::new(p, tree, sequence);
            for layer in &order {
                for comp in by_layer.get(layer).into_iter().flatten() {
                    s.component(comp)?;
                }
            }
            (s.labeling, s.fixed_by, s.config_of)
        }
    };
    let violations = validate_labeling(problem, tree, &labeling)?;
    if let Some(v) = violations.first() {
        return Err(LclError::CompletionFailure(format!(
            "produced labeling violates {v}"
        )));
    }
    let (gamma, layers) = (dec.gamma, dec.layers);
    Ok(Solution {
        labeling,
        gamma,
        ell,
        rounds: (gamma + ell) * layers,
        decomposition: dec,
        fixed_by,
        config_of,
    })
}

/// Classify `problem` and label `tree` with its witness sequence.
pub fn solve(problem: &Problem, tree: &Tree) -> Result<Solution> {
    let result = compute_depth(problem)?;
    let witness = result.witness.ok_or(LclError::Unsolvable)?;
    solve_with_certificate(problem, tree, &witness)
}

/// Walk of `steps` transitions from `start` into `targets`, staying inside `states`.
fn walk<S: Copy + Eq + std::hash::Hash + Ord>(
    start: S,
    steps: usize,
    states: &[S],
    step: impl Fn(S, S) -> bool,
    is_target: impl Fn(S) -> bool,
) -> Option<Vec<S>> {
    let mut layers: Vec<HashMap<S, S>> = vec![HashMap::from([(start, start)])];
    for _ in 0..steps {
        let prev = layers.last().expect("nonempty");
        let mut from: Vec<S> = prev.keys().copied().collect();
        from.sort();
        let mut next = HashMap::new();
        for &t in states {
            if let Some(&f) = from.iter().find(|&&f| step(f, t)) {
                next.insert(t, f);
            }
        }
        layers.push(next);
    }
    let mut end: Vec<S> = layers
        .last()?
        .keys()
        .copied()
        .filter(|&s| is_target(s))
        .collect();
    end.sort();
    let mut cur = *end.first()?;
    let mut path = vec![cur];
    for t in (1..layers.len()).rev() {
        cur = layers[t][&cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

struct RootedSolver<'a> {
    problem: &'a RootedProblem,
    tree: &'a Tree,
    sequence: &'a GoodSequence,
    labels: Vec<Option<Label>>,
    fixed_by: Vec<Layer>,
    config_of: Vec<Option<usize>>,
}

impl<'a> RootedSolver<'a> {
    fn new(problem: &'a RootedProblem, tree: &'a Tree, sequence: &'a GoodSequence) -> Self {
        let n = tree.n();
        RootedSolver {
            problem,
            tree,
            sequence,
            labels: vec![None; n],
            fixed_by: vec![Layer::rake(0); n],
            config_of: vec![None; n],
        }
    }

    /// Smallest configuration with head `head` (any head in `rake` if `None`),
    /// children inside `rake`, containing `child` if given.
    fn find(&self, head: Option<Label>, rake: &LabelSet, child: Option<Label>) -> Option<usize> {
        self.problem.configs.iter().position(|c| {
            rake.contains(c.label.index())
                && head.is_none_or(|h| h == c.label)
                && c.children.all_in(rake)
                && child.is_none_or(|x| c.children.contains(x))
        })
    }

    fn fix(&mut self, v: usize, label: Label, layer: Layer) {
        if self.labels[v].is_none() {
            self.labels[v] = Some(label);
            self.fixed_by[v] = layer;
        }
    }

    /// Apply configuration `ci` at `v`, with `path_child` (if any) receiving `child_label`.
    fn apply(&mut self, v: usize, ci: usize, layer: Layer, path_child: Option<(usize, Label)>) {
        let cfg = &self.problem.configs[ci];
        self.fix(v, cfg.label, layer);
        self.config_of[v] = Some(ci);
        let mut rest: Vec<Label> = cfg.children.entries().to_vec();
        if let Some((_, x)) = path_child {
            let at = rest
                .iter()
                .position(|&l| l == x)
                .expect("config holds the path label");
            rest.remove(at);
        }
        let mut rest = rest.into_iter();
        for &c in self.tree.children(v) {
            if path_child.is_some_and(|(pc, _)| pc == c) {
                continue;
            }
            let l = rest.next().expect("indegree at most delta");
            self.fix(c, l, layer);
        }
        if let Some((pc, x)) = path_child {
            self.fix(pc, x, layer);
        }
    }

    fn component(&mut self, comp: &LayerComponent, dec: &Decomposition) -> Result<()> {
        let i = comp.layer.index;
        let rake = self.sequence.rake_set(i).clone();
        match comp.layer.phase {
            Phase::Rake => {
                for &v in &comp.nodes {
                    let ci = self.find(self.labels[v], &rake, None).ok_or_else(|| {
                        LclError::CompletionFailure(format!(
                            "no configuration for node {v} in ({})",
                            comp.layer
                        ))
                    })?;
                    self.apply(v, ci, comp.layer, None);
                }
                Ok(())
            }
            Phase::Compress => {
                let flex = self.sequence.compress_layer(i).ok_or_else(|| {
                    LclError::CompletionFailure(format!("certificate has no compress layer {i}"))
                })?;
                let (_, w) = comp.attachments.expect("compress attachments");
                let path = &comp.nodes;
                let s = path.len();
                let alpha = self.labels[path[0]].expect("top fixed by its parent");
                let beta = self.labels[w].expect("attachment labeled");
                let u_states: Vec<Label> = flex.component.labels.clone();
                let edge = |parent: Label, child: Label| {
                    self.find(Some(parent), &rake, Some(child)).is_some()
                };
                let seq = walk(alpha, s, &u_states, edge, |x| x == beta).ok_or_else(|| {
                    LclError::CompletionFailure(format!(
                        "no walk of length {s} for path at node {} (gamma {}, ell {})",
                        path[0], dec.gamma, dec.ell
                    ))
                })?;
                for j in 0..s {
                    let ci = self
                        .find(Some(seq[j]), &rake, Some(seq[j + 1]))
                        .expect("walk edge");
                    let next = if j + 1 < s { path[j + 1] } else { w };
                    self.apply(path[j], ci, comp.layer, Some((next, seq[j + 1])));
                }
                Ok(())
            }
        }
    }
}

struct UnrootedSolver<'a> {
    problem: &'a UnrootedProblem,
    tree: &'a Tree,
    sequence: &'a GoodSequence,
    edges: crate::problem::EdgeTable,
    labeling: Labeling,
    fixed_by: Vec<Layer>,
    config_of: Vec<Option<usize>>,
}

impl<'a> UnrootedSolver<'a> {
    fn new(problem: &'a UnrootedProblem, tree: &'a Tree, sequence: &'a GoodSequence) -> Self {
        let n = tree.n();
        UnrootedSolver {
            problem,
            tree,
            sequence,
            edges: problem.edge_table(),
            labeling: Labeling::empty(tree),
            fixed_by: vec![Layer::rake(0); n],
            config_of: vec![None; n],
        }
    }

    /// Label the half-edges of `v` with configuration `ci`, honoring `fixed`.
    fn apply(&mut self, v: usize, ci: usize, layer: Layer, fixed: &[(usize, Label)]) {
        let mut rest: Vec<Label> = self.problem.node_configs[ci].entries().to_vec();
        for &(u, l) in fixed {
            let at = rest
                .iter()
                .position(|&x| x == l)
                .expect("config holds fixed label");
            rest.remove(at);
            self.labeling.set_half_edge(self.tree, v, u, l);
        }
        let mut rest = rest.into_iter();
        for &u in self.tree.neighbors(v) {
            if fixed.iter().any(|&(f, _)| f == u) {
                continue;
            }
            let l = rest.next().expect("degree at most delta");
            self.labeling.set_half_edge(self.tree, v, u, l);
        }
        self.config_of[v] = Some(ci);
        self.fixed_by[v] = layer;
    }

    /// Entries of `v`'s chosen configuration other than one occurrence of `except`.
    fn others(&self, v: usize, except: Label) -> Vec<Label> {
        let ci = self.config_of[v].expect("labeled");
        let mut rest = self.problem.node_configs[ci].entries().to_vec();
        if let Some(at) = rest.iter().position(|&x| x == except) {
            rest.remove(at);
        }
        rest
    }

    fn component(&mut self, comp: &LayerComponent) -> Result<()> {
        let i = comp.layer.index;
        let set = self.sequence.rake_set(i).clone();
        let fail = |v: usize| {
            LclError::CompletionFailure(format!(
                "no configuration for node {v} in ({})",
                comp.layer
            ))
        };
        match comp.layer.phase {
            Phase::Rake => {
                for &v in &comp.nodes {
                    let anchor = self
                        .tree
                        .neighbors(v)
                        .iter()
                        .copied()
                        .find(|&u| self.config_of[u].is_some());
                    match anchor {
                        None => {
                            let ci = set.iter().next().ok_or_else(|| fail(v))?;
                            self.apply(v, ci, comp.layer, &[]);
                        }
                        Some(u) => {
                            let beta = self
                                .labeling
                                .half_edge(self.tree, u, v)
                                .expect("anchor labeled");
                            let (ci, alpha) = set
                                .iter()
                                .find_map(|ci| {
                                    self.problem.node_configs[ci]
                                        .entries()
                                        .iter()
                                        .find(|&&a| self.edges.allows(a, beta))
                                        .map(|&a| (ci, a))
                                })
                                .ok_or_else(|| fail(v))?;
                            self.apply(v, ci, comp.layer, &[(u, alpha)]);
                        }
                    }
                }
                Ok(())
            }
            Phase::Compress => {
                let flex = self.sequence.compress_layer(i).ok_or_else(|| {
                    LclError::CompletionFailure(format!("certificate has no compress layer {i}"))
                })?;
                let pairs = &flex.component.pairs;
                let in_d =
                    |a: Label, b: Label| pairs.binary_search(&LabelMultiset::pair(a, b)).is_ok();
                let mut states: Vec<(Label, Label)> = Vec::new();
                for p in pairs {
                    let (a, b) = (p.entries()[0], p.entries()[1]);
                    states.push((a, b));
                    if a != b {
                        states.push((b, a));
                    }
                }
                states.sort();
                let (u, w) = comp.attachments.expect("compress attachments");
                let path = &comp.nodes;
                let s = path.len();
                let b0 = self
                    .labeling
                    .half_edge(self.tree, u, path[0])
                    .expect("attachment labeled");
                let a0 = *self
                    .others(u, b0)
                    .iter()
                    .filter(|&&a| in_d(a, b0))
                    .min()
                    .ok_or_else(|| fail(u))?;
                let a_end = self
                    .labeling
                    .half_edge(self.tree, w, path[s - 1])
                    .expect("attachment labeled");
                let ends: Vec<Label> = self.others(w, a_end);
                let edges = &self.edges;
                let seq = walk(
                    (a0, b0),
                    s + 1,
                    &states,
                    |(_, b), (c, _)| edges.allows(b, c),
                    |(a, b)| a == a_end && ends.contains(&b) && in_d(a, b),
                )
                .ok_or_else(|| {
                    LclError::CompletionFailure(format!(
                        "no walk of length {} for path at node {}",
                        s + 1,
                        path[0]
                    ))
                })?;
                for (j, &v) in path.iter().enumerate() {
                    let (a, b) = seq[j + 1];
                    let want = LabelMultiset::pair(a, b);
                    let ci = set
                        .iter()
                        .find(|&ci| want.is_sub_multiset_of(&self.problem.node_configs[ci]))
                        .ok_or_else(|| fail(v))?;
                    let prev = if j == 0 { u } else { path[j - 1] };
                    let next = if j + 1 < s { path[j + 1] } else { w };
                    self.apply(v, ci, comp.layer, &[(prev, a), (next, b)]);
                }
                Ok(())
            }
        }
    }
}

/// Root constraint for [`brute_force_solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootForce {
    /// Rooted: the root carries this label.
    Label(Label),
    /// Unrooted: the root uses this node configuration (index into `node_configs`).
    Config(usize),
}

#[derive(Clone, Debug)]
pub struct BruteForceOptions {
    /// Maximum number of search steps.
    pub budget: usize,
    /// Allowed configurations (indices into `configs` / `node_configs`).
    pub configs: Option<BitSet>,
    /// Allowed labels on every node (rooted) or half-edge (unrooted).
    pub labels: Option<LabelSet>,
    pub root: Option<RootForce>,
    /// Root node for the unrooted search; node 0 by default.
    pub root_node: Option<usize>,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            budget: 1_000_000,
            configs: None,
            labels: None,
            root: None,
            root_node: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Sat(Labeling),
    Unsat,
    BudgetExceeded,
}

impl BruteForceOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, BruteForceOutcome::Sat(_))
    }
}

struct Budget {
    left: usize,
}

impl Budget {
    fn spend(&mut self) -> std::result::Result<(), ()> {
        if self.left == 0 {
            return Err(());
        }
        self.left -= 1;
        Ok(())
    }
}

/// Distinct orderings of a multiset, lexicographic.
fn permutations(items: &[Label]) -> Vec<Vec<Label>> {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    let mut used = vec![false; sorted.len()];
    let mut cur = Vec::new();
    fn go(sorted: &[Label], used: &mut [bool], cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == sorted.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..sorted.len() {
            if used[i] || (i > 0 && sorted[i] == sorted[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            cur.push(sorted[i]);
            go(sorted, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    go(&sorted, &mut used, &mut cur, &mut out);
    out
}

type Memo<K> = HashMap<K, Option<Vec<Label>>>;

struct RootedSearch<'a> {
    problem: &'a RootedProblem,
    tree: &'a Tree,
    configs: Vec<usize>,
    labels: LabelSet,
    budget: Budget,
    /// (node, label) → children labels in child order, or failure.
    memo: Memo<(usize, Label)>,
}

impl RootedSearch<'_> {
    fn feasible(&mut self, v: usize, sigma: Label) -> std::result::Result<bool, ()> {
        if let Some(r) = self.memo.get(&(v, sigma)) {
            return Ok(r.is_some());
        }
        self.budget.spend()?;
        let kids = self.tree.children(v).to_vec();
        let mut found = None;
        if kids.len() == self.problem.delta {
            let cands: Vec<usize> = self
                .configs
                .iter()
                .copied()
                .filter(|&ci| self.problem.configs[ci].label == sigma)
                .collect();
            'outer: for ci in cands {
                let entries = self.problem.configs[ci].children.entries().to_vec();
                for perm in permutations(&entries) {
                    let mut ok = true;
                    for (&c, &l) in kids.iter().zip(&perm) {
                        if !self.feasible(c, l)? {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        found = Some(perm);
                        break 'outer;
                    }
                }
            }
        } else {
            let mut choice = Vec::new();
            for &c in &kids {
                let mut picked = None;
                for l in self.labels.clone().iter() {
                    if self.feasible(c, Label::from(l))? {
                        picked = Some(Label::from(l));
                        break;
                    }
                }
                match picked {
                    Some(l) => choice.push(l),
                    None => break,
                }
            }
            if choice.len() == kids.len() {
                found = Some(choice);
            }
        }
        let ok = found.is_some();
        self.memo.insert((v, sigma), found);
        Ok(ok)
    }

    fn fill(&self, v: usize, sigma: Label, out: &mut [Option<Label>]) {
        let mut stack = vec![(v, sigma)];
        while let Some((v, sigma)) = stack.pop() {
            out[v] = Some(sigma);
            let kids = self.memo[&(v, sigma)].as_ref().expect("feasible");
            for (&c, &l) in self.tree.children(v).iter().zip(kids) {
                stack.push((c, l));
            }
        }
    }
}

struct UnrootedSearch<'a> {
    problem: &'a UnrootedProblem,
    tree: &'a Tree,
    edges: crate::problem::EdgeTable,
    configs: Vec<usize>,
    labels: LabelSet,
    budget: Budget,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// (node, parent's label towards it) → own label towards the parent
    /// followed by own labels towards each child.
    memo: Memo<(usize, Label)>,
}

impl UnrootedSearch<'_> {
    /// Labels of `v` towards its children given the allowed multisets; `None` if infeasible.
    fn children_with(
        &mut self,
        v: usize,
        rest: &[Label],
    ) -> std::result::Result<Option<Vec<Label>>, ()> {
        let kids = self.children[v].clone();
        for perm in permutations(rest) {
            let mut ok = true;
            for (&c, &l) in kids.iter().zip(&perm) {
                if !self.feasible(c, l)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(perm));
            }
        }
        Ok(None)
    }

    fn free_children(&mut self, v: usize) -> std::result::Result<Option<Vec<Label>>, ()> {
        let kids = self.children[v].clone();
        let mut choice = Vec::new();
        for c in kids {
            let mut picked = None;
            for l in self.labels.clone().iter() {
                if self.feasible(c, Label::from(l))? {
                    picked = Some(Label::from(l));
                    break;
                }
            }
            match picked {
                Some(l) => choice.push(l),
                None => return Ok(None),
            }
        }
        Ok(Some(choice))
    }

    /// Whether the subtree of `v` can be labeled when the parent's half-edge carries `beta`.
    fn feasible(&mut self, v: usize, beta: Label) -> std::result::Result<bool, ()> {
        if let Some(r) = self.memo.get(&(v, beta)) {
            return Ok(r.is_some());
        }
        self.budget.spend()?;
        let mut found = None;
        if self.tree.degree(v) == self.problem.delta {
            'outer: for ci in self.configs.clone() {
                let entries = self.problem.node_configs[ci].entries().to_vec();
                let mut tried = Vec::new();
                for (k, &alpha) in entries.iter().enumerate() {
                    if tried.contains(&alpha) || !self.edges.allows(alpha, beta) {
                        continue;
                    }
                    tried.push(alpha);
                    let mut rest = entries.clone();
                    rest.remove(k);
                    if let Some(kids) = self.children_with(v, &rest)? {
                        let mut r = vec![alpha];
                        r.extend(kids);
                        found = Some(r);
                        break 'outer;
                    }
                }
            }
        } else {
            for alpha in self.labels.clone().iter().map(Label::from) {
                if !self.edges.allows(alpha, beta) {
                    continue;
                }
                if let Some(kids) = self.free_children(v)? {
                    let mut r = vec![alpha];
                    r.extend(kids);
                    found = Some(r);
                    break;
                }
            }
        }
        let ok = found.is_some();
        self.memo.insert((v, beta), found);
        Ok(ok)
    }

    fn fill(&self, v: usize, own: &[Label], out: &mut Labeling) {
        let mut stack = vec![(v, own.to_vec())];
        while let Some((v, own)) = stack.pop() {
            let down = match self.parent[v] {
                Some(p) => {
                    out.set_half_edge(self.tree, v, p, own[0]);
                    &own[1..]
                }
                None => &own[..],
            };
            for (&c, &l) in self.children[v].iter().zip(down) {
                out.set_half_edge(self.tree, v, c, l);
                let next = self.memo[&(c, l)].clone().expect("feasible");
                stack.push((c, next));
            }
        }
    }
}

/// Exhaustive memoized backtracking search for a correct labeling.
///
/// Nodes with full degree (unrooted) or indegree (rooted) use allowed
/// configurations; the others take any allowed labels.
pub fn brute_force_solve(
    problem: &Problem,
    tree: &Tree,
    options: &BruteForceOptions,
) -> Result<BruteForceOutcome> {
    if problem.kind() != tree.kind() {
        return Err(LclError::KindMismatch(format!(
            "problem is {}, tree is {}",
            problem.kind(),
            tree.kind()
        )));
    }
    let budget = Budget {
        left: options.budget,
    };
    let nl = problem.labels().len();
    let labels = options.labels.clone().unwrap_or_else(|| LabelSet::full(nl));
    match problem {
        Problem::Rooted(p) => {
            let configs: Vec<usize> = (0..p.configs.len())
                .filter(|&ci| options.configs.as_ref().is_none_or(|s| s.contains(ci)))
                .filter(|&ci| {
                    labels.contains(p.configs[ci].label.index())
                        && p.configs[ci].children.all_in(&labels)
                })
                .collect();
            let mut search = RootedSearch {
                problem: p,
                tree,
                configs,
                labels: labels.clone(),
                budget,
                memo: HashMap::new(),
            };
            let root = tree.root().expect("rooted tree has a root");
            let cands: Vec<Label> = match &options.root {
                Some(RootForce::Label(l)) => vec![*l],
                Some(RootForce::Config(_)) => {
                    return Err(LclError::InvalidParameters(
                        "rooted search forces a label".into(),
                    ))
                }
                None => labels.iter().map(Label::from).collect(),
            };
            let mut order: Vec<usize> = Vec::with_capacity(tree.n());
            postorder_rooted(tree, root, &mut order);
            for sigma in cands {
                if !labels.contains(sigma.index()) {
                    continue;
                }
                // warm the memo bottom-up to keep recursion shallow
                for &v in &order {
                    for l in labels.iter() {
                        if search.feasible(v, Label::from(l)).is_err() {
                            return Ok(BruteForceOutcome::BudgetExceeded);
                        }
                    }
                }
                match search.feasible(root, sigma) {
                    Err(()) => return Ok(BruteForceOutcome::BudgetExceeded),
                    Ok(true) => {
                        let mut out = vec![None; tree.n()];
                        search.fill(root, sigma, &mut out);
                        return Ok(BruteForceOutcome::Sat(Labeling::Rooted(out)));
                    }
                    Ok(false) => {}
                }
            }
            Ok(BruteForceOutcome::Unsat)
        }
        Problem::Unrooted(p) => {
            let configs: Vec<usize> = (0..p.node_configs.len())
                .filter(|&ci| options.configs.as_ref().is_none_or(|s| s.contains(ci)))
                .filter(|&ci| p.node_configs[ci].all_in(&labels))
                .collect();
            let root = options.root_node.unwrap_or(0);
            let (parent, children, order) = orient(tree, root);
            let mut search = UnrootedSearch {
                problem: p,
                tree,
                edges: p.edge_table(),
                configs: configs.clone(),
                labels: labels.clone(),
                budget,
                parent,
                children,
                memo: HashMap::new(),
            };
            for &v in order.iter().rev() {
                if v == root {
                    continue;
                }
                for l in 0..nl {
                    if search.feasible(v, Label::from(l)).is_err() {
                        return Ok(BruteForceOutcome::BudgetExceeded);
                    }
                }
            }
            let full = tree.degree(root) == p.delta;
            let root_sets: Vec<Vec<Label>> = match &options.root {
                Some(RootForce::Config(ci)) => {
                    if !full {
                        return Err(LclError::InvalidParameters(
                            "forced root needs full degree".into(),
                        ));
                    }
                    vec![p.node_configs[*ci].entries().to_vec()]
                }
                Some(RootForce::Label(_)) => {
                    return Err(LclError::InvalidParameters(
                        "unrooted search forces a configuration".into(),
                    ))
                }
                None if full => configs
                    .iter()
                    .map(|&ci| p.node_configs[ci].entries().to_vec())
                    .collect(),
                None => vec![],
            };
            let found = if full {
                let mut found = None;
                for entries in root_sets {
                    match search.children_with(root, &entries) {
                        Err(()) => return Ok(BruteForceOutcome::BudgetExceeded),
                        Ok(Some(k)) => {
                            found = Some(k);
                            break;
                        }
                        Ok(None) => {}
                    }
                }
                found
            } else {
                match search.free_children(root) {
                    Err(()) => return Ok(BruteForceOutcome::BudgetExceeded),
                    Ok(k) => k,
                }
            };
            match found {
                None => Ok(BruteForceOutcome::Unsat),
                Some(own) => {
                    let mut out = Labeling::empty(tree);
                    search.fill(root, &own, &mut out);
                    Ok(BruteForceOutcome::Sat(out))
                }
            }
        }
    }
}

fn postorder_rooted(tree: &Tree, root: usize, out: &mut Vec<usize>) {
    let mut stack = vec![(root, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            out.push(v);
        } else {
            stack.push((v, true));
            for &c in tree.children(v) {
                stack.push((c, false));
            }
        }
    }
}

/// Parent pointers, child lists and BFS order of an unrooted tree hung from `root`.
#[allow(clippy::type_complexity)]
fn orient(tree: &Tree, root: usize) -> (Vec<Option<usize>>, Vec<Vec<usize>>, Vec<usize>) {
    let n = tree.n();
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &u in tree.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                children[v].push(u);
                order.push(u);
            }
        }
    }
    (parent, children, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::RootedConfig;
    use crate::tree::{complete_tree, random_bounded_tree};

    fn rooted(delta: usize, labels: &[&str], configs: &[(usize, &[usize])]) -> Problem {
        Problem::Rooted(
            RootedProblem::new(
                delta,
                labels.iter().map(|s| s.to_string()).collect(),
                configs
                    .iter()
                    .map(|(l, c)| RootedConfig {
                        label: Label::from(*l),
                        children: LabelMultiset::from_ids(c),
                    })
                    .collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn permutations_are_distinct() {
        let l = |i: usize| Label::from(i);
        assert_eq!(permutations(&[l(0), l(0), l(1)]).len(), 3);
        assert_eq!(permutations(&[l(0), l(1), l(2)]).len(), 6);
    }

    #[test]
    fn brute_force_examples() {
        let empty = rooted(2, &["a"], &[]);
        let t1 = complete_tree(ProblemKind::Rooted, 2, 1, false).unwrap();
        let r = brute_force_solve(&empty, &t1, &BruteForceOptions::default()).unwrap();
        assert_eq!(r, BruteForceOutcome::Unsat);

        let intro = rooted(2, &["1", "2"], &[(0, &[0, 1]), (1, &[0, 0])]);
        let t3 = complete_tree(ProblemKind::Rooted, 2, 3, false).unwrap();
        match brute_force_solve(&intro, &t3, &BruteForceOptions::default()).unwrap() {
            BruteForceOutcome::Sat(l) => {
                assert!(validate_labeling(&intro, &t3, &l).unwrap().is_empty())
            }
            other => panic!("{other:?}"),
        }
        let tight = BruteForceOptions {
            budget: 2,
            ..Default::default()
        };
        assert_eq!(
            brute_force_solve(&intro, &t3, &tight).unwrap(),
            BruteForceOutcome::BudgetExceeded
        );
    }

    #[test]
    fn intro_solves_on_random_trees() {
        let intro = rooted(2, &["1", "2"], &[(0, &[0, 1]), (1, &[0, 0])]);
        for seed in 0..5 {
            let t = random_bounded_tree(300, ProblemKind::Rooted, 2, seed).unwrap();
            let s = solve(&intro, &t).unwrap();
            assert!(validate_labeling(&intro, &t, &s.labeling)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn two_coloring_is_single_rake() {
        let p = rooted(2, &["a", "b"], &[(0, &[1, 1]), (1, &[0, 0])]);
        let t = complete_tree(ProblemKind::Rooted, 2, 4, false).unwrap();
        let s = solve(&p, &t).unwrap();
        assert_eq!(s.decomposition.layers, 1);
    }
}
