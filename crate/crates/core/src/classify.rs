//! Good sequences, the depth of a problem and its complexity class.

use std::fmt;

use crate::automaton::{build_rooted_automaton, build_unrooted_automaton, scc_report, Component};
use crate::bitset::BitSet;
use crate::error::Result;
use crate::problem::{
    sub_multisets_of_size_2, LabelMultiset, LabelSet, Problem, ProblemKind, RootedProblem,
    UnrootedProblem,
};
use crate::trim::{trim_rooted, trim_unrooted};

/// Default cap on the number of stored maximal sequences.
pub const DEFAULT_SEQUENCE_LIMIT: usize = 64;

/// `S↾D`: configurations of `s` whose size-2 sub-multisets all lie in `d`.
pub fn restrict_unrooted(problem: &UnrootedProblem, s: &BitSet, d: &[LabelMultiset]) -> BitSet {
    BitSet::from_indices(
        s.universe(),
        s.iter().filter(|&i| {
            sub_multisets_of_size_2(&problem.node_configs[i])
                .map(|subs| subs.iter().all(|p| d.binary_search(p).is_ok()))
                .unwrap_or(false)
        }),
    )
}

/// A flexible component chosen in a good sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexLayer {
    pub component: Component,
    /// Labels of the component (rooted: `Σ^C_i`; unrooted: labels occurring in `D_i`).
    pub labels: LabelSet,
    pub flexibility: usize,
}

/// Alternating trimmed sets and flexible components.
///
/// Unrooted `trimmed[i]` are sets of node configuration indices; rooted
/// `trimmed[i]` are label sets. A stabilized sequence has one flexible layer
/// per trimmed set and repeats its last pair forever; otherwise it has one
/// flexible layer fewer than trimmed sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodSequence {
    pub kind: ProblemKind,
    pub trimmed: Vec<BitSet>,
    pub flexible: Vec<FlexLayer>,
    pub stabilized: bool,
}

impl GoodSequence {
    /// Number of trimmed sets.
    pub fn len(&self) -> usize {
        self.trimmed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trimmed.is_empty()
    }

    /// Trimmed set of layer `i` (1-based); layers past the end repeat the last set.
    pub fn rake_set(&self, i: usize) -> &BitSet {
        &self.trimmed[(i.max(1) - 1).min(self.trimmed.len() - 1)]
    }

    /// Flexible layer `i` (1-based), clamped the same way.
    pub fn compress_layer(&self, i: usize) -> Option<&FlexLayer> {
        if self.flexible.is_empty() {
            return None;
        }
        self.flexible
            .get((i.max(1) - 1).min(self.flexible.len() - 1))
    }

    fn sort_key(&self) -> Vec<Vec<usize>> {
        let mut key = Vec::new();
        for (i, t) in self.trimmed.iter().enumerate() {
            key.push(t.to_vec());
            if let Some(f) = self.flexible.get(i) {
                key.push(f.component.states.clone());
            }
        }
        key
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Depth {
    Unsolvable,
    Finite(usize),
    Infinite,
}

impl Depth {
    /// Complexity class of the depth.
    pub fn class(self) -> String {
        match self {
            Depth::Unsolvable => "unsolvable".to_string(),
            Depth::Finite(1) => "Θ(n)".to_string(),
            Depth::Finite(k) => format!("Θ(n^{{1/{k}}})"),
            Depth::Infinite => "O(log n)".to_string(),
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Unsolvable => f.write_str("0"),
            Depth::Finite(k) => write!(f, "{k}"),
            Depth::Infinite => f.write_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthResult {
    pub depth: Depth,
    pub verdict: String,
    pub witness: Option<GoodSequence>,
    pub sequences: Vec<GoodSequence>,
    /// More maximal sequences exist than were stored.
    pub overflow: bool,
}

impl DepthResult {
    /// Extra remark attached to the verdict.
    pub fn note(&self) -> Option<&'static str> {
        (self.depth == Depth::Infinite).then_some("lower classes not distinguished")
    }
}

struct Enumerator<'a> {
    problem: &'a Problem,
    limit: usize,
    sequences: Vec<GoodSequence>,
    overflow: bool,
    best: Option<GoodSequence>,
}

impl Enumerator<'_> {
    fn emit(&mut self, seq: GoodSequence) {
        let better = match &self.best {
            None => true,
            Some(b) => {
                let rank = |s: &GoodSequence| (s.stabilized, s.len());
                rank(&seq) > rank(b) || (rank(&seq) == rank(b) && seq.sort_key() < b.sort_key())
            }
        };
        if !self.sequences.contains(&seq) {
            if self.sequences.len() < self.limit {
                self.sequences.push(seq.clone());
            } else {
                self.overflow = true;
            }
        }
        if better {
            self.best = Some(seq);
        }
    }

    /// Flexible components of the automaton of `current`, with their labels and indices.
    fn flexible_components(&self, current: &BitSet) -> Result<Vec<FlexLayer>> {
        let automaton = match self.problem {
            Problem::Unrooted(p) => build_unrooted_automaton(p, current).1,
            Problem::Rooted(p) => build_rooted_automaton(p, current),
        };
        let universe = self.problem.labels().len();
        Ok(scc_report(&automaton)?
            .flexible()
            .map(|(c, k)| FlexLayer {
                labels: c.label_set(universe),
                component: c.clone(),
                flexibility: k,
            })
            .collect())
    }

    fn descend(&self, current: &BitSet, layer: &FlexLayer) -> BitSet {
        match self.problem {
            Problem::Unrooted(p) => {
                let restricted = restrict_unrooted(p, current, &layer.component.pairs);
                trim_unrooted(p, &restricted).0
            }
            Problem::Rooted(p) => trim_rooted(p, &layer.labels).0,
        }
    }

    fn dfs(&mut self, trimmed: &mut Vec<BitSet>, flexible: &mut Vec<FlexLayer>) -> Result<()> {
        let current = trimmed.last().expect("nonempty prefix").clone();
        let kind = self.problem.kind();
        let mut extended = false;
        for layer in self.flexible_components(&current)? {
            let next = self.descend(&current, &layer);
            debug_assert!(next.is_subset(&current));
            if next.is_empty() {
                continue;
            }
            extended = true;
            flexible.push(layer);
            if next == current {
                self.emit(GoodSequence {
                    kind,
                    trimmed: trimmed.clone(),
                    flexible: flexible.clone(),
                    stabilized: true,
                });
            } else {
                trimmed.push(next);
                self.dfs(trimmed, flexible)?;
                trimmed.pop();
            }
            flexible.pop();
        }
        if !extended {
            self.emit(GoodSequence {
                kind,
                trimmed: trimmed.clone(),
                flexible: flexible.clone(),
                stabilized: false,
            });
        }
        Ok(())
    }
}

/// First trimmed set: `trim(V)` (unrooted) or `trim(Σ)` (rooted).
pub fn first_trimmed(problem: &Problem) -> BitSet {
    match problem {
        Problem::Unrooted(p) => trim_unrooted(p, &p.all_configs()).0,
        Problem::Rooted(p) => trim_rooted(p, &p.all_labels()).0,
    }
}

fn enumerate(problem: &Problem, limit: usize) -> Result<Enumerator<'_>> {
    let mut e = Enumerator {
        problem,
        limit,
        sequences: Vec::new(),
        overflow: false,
        best: None,
    };
    let first = first_trimmed(problem);
    if !first.is_empty() {
        e.dfs(&mut vec![first], &mut Vec::new())?;
    }
    Ok(e)
}

/// Every maximal good sequence (up to [`DEFAULT_SEQUENCE_LIMIT`]).
pub fn enumerate_good_sequences(problem: &Problem) -> Result<Vec<GoodSequence>> {
    Ok(enumerate(problem, DEFAULT_SEQUENCE_LIMIT)?.sequences)
}

pub fn compute_depth(problem: &Problem) -> Result<DepthResult> {
    compute_depth_with_limit(problem, DEFAULT_SEQUENCE_LIMIT)
}

/// Depth, verdict and witness; at most `limit` maximal sequences are stored.
pub fn compute_depth_with_limit(problem: &Problem, limit: usize) -> Result<DepthResult> {
    let e = enumerate(problem, limit)?;
    let depth = match &e.best {
        None => Depth::Unsolvable,
        Some(s) if s.stabilized => Depth::Infinite,
        Some(s) => Depth::Finite(s.len()),
    };
    Ok(DepthResult {
        depth,
        verdict: depth.class(),
        witness: e.best,
        sequences: e.sequences,
        overflow: e.overflow,
    })
}

/// Unrooted convenience: the configurations of `V_i` as multisets.
pub fn unrooted_layer_configs(problem: &UnrootedProblem, set: &BitSet) -> Vec<LabelMultiset> {
    set.iter()
        .map(|i| problem.node_configs[i].clone())
        .collect()
}

/// The rooted restriction check used by tests: every label in a trimmed set heads a
/// configuration inside the set.
pub fn rooted_closed(problem: &RootedProblem, set: &LabelSet) -> bool {
    set.iter().all(|l| {
        problem
            .configs
            .iter()
            .any(|c| c.label.index() == l && c.children.all_in(set))
    })
}
