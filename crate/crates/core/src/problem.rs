//! Core domain types for LCL problems on regular unrooted and rooted trees.

use std::fmt;

use crate::bitset::BitSet;
use crate::error::{LclError, Result};

/// Dense label id; an index into the owning problem's alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u16);

impl Label {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Label {
    fn from(i: usize) -> Self {
        Label(u16::try_from(i).expect("label id exceeds u16"))
    }
}

/// Set of labels of one alphabet, stored as a bit set over label ids.
pub type LabelSet = BitSet;

/// Multiset of labels kept in canonical (sorted) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelMultiset {
    entries: Vec<Label>,
}

impl LabelMultiset {
    pub fn new(mut entries: Vec<Label>) -> Self {
        entries.sort_unstable();
        LabelMultiset { entries }
    }

    pub fn pair(a: Label, b: Label) -> Self {
        LabelMultiset::new(vec![a, b])
    }

    pub fn from_ids(ids: &[usize]) -> Self {
        LabelMultiset::new(ids.iter().map(|&i| Label::from(i)).collect())
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Label] {
        &self.entries
    }

    pub fn contains(&self, label: Label) -> bool {
        self.entries.binary_search(&label).is_ok()
    }

    /// The multiset with one copy of `label` removed, if present.
    pub fn without_one(&self, label: Label) -> Option<LabelMultiset> {
        let pos = self.entries.binary_search(&label).ok()?;
        let mut entries = self.entries.clone();
        entries.remove(pos);
        Some(LabelMultiset { entries })
    }

    /// Whether `self` is contained in `other` counting multiplicities.
    pub fn is_sub_multiset_of(&self, other: &LabelMultiset) -> bool {
        let mut j = 0;
        for &x in &self.entries {
            while j < other.entries.len() && other.entries[j] < x {
                j += 1;
            }
            if j == other.entries.len() || other.entries[j] != x {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn label_set(&self, universe: usize) -> LabelSet {
        LabelSet::from_indices(universe, self.entries.iter().map(|l| l.index()))
    }

    pub fn all_in(&self, set: &LabelSet) -> bool {
        self.entries.iter().all(|l| set.contains(l.index()))
    }
}

/// Sort the entries of a multiset into canonical order.
pub fn canonicalize(multiset: &LabelMultiset) -> LabelMultiset {
    LabelMultiset::new(multiset.entries.clone())
}

/// Every distinct size-2 sub-multiset of `config`, in canonical order.
pub fn sub_multisets_of_size_2(config: &LabelMultiset) -> Result<Vec<LabelMultiset>> {
    if config.arity() < 2 {
        return Err(LclError::InvalidArity {
            expected: 2,
            found: config.arity(),
        });
    }
    let e = &config.entries;
    let mut out = Vec::new();
    for i in 0..e.len() {
        // Skip repeated first elements; entries are sorted.
        if i > 0 && e[i] == e[i - 1] {
            continue;
        }
        for j in i + 1..e.len() {
            if j > i + 1 && e[j] == e[j - 1] {
                continue;
            }
            out.push(LabelMultiset {
                entries: vec![e[i], e[j]],
            });
        }
    }
    Ok(out)
}

/// Symmetric edge-configuration lookup table.
#[derive(Clone, Debug)]
pub struct EdgeTable {
    n: usize,
    allowed: Vec<bool>,
}

impl EdgeTable {
    #[inline]
    pub fn allows(&self, a: Label, b: Label) -> bool {
        self.allowed[a.index() * self.n + b.index()]
    }

    /// Labels `b` with `{a, b}` an allowed edge configuration.
    pub fn partners(&self, a: Label) -> impl Iterator<Item = Label> + '_ {
        (0..self.n)
            .filter(move |&b| self.allowed[a.index() * self.n + b])
            .map(Label::from)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Rooted,
    Unrooted,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Rooted => "rooted",
            ProblemKind::Unrooted => "unrooted",
        })
    }
}

/// LCL on Δ-regular unrooted trees: half-edge labels, node and edge constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnrootedProblem {
    pub delta: usize,
    pub labels: Vec<String>,
    pub node_configs: Vec<LabelMultiset>,
    pub edge_configs: Vec<LabelMultiset>,
}

impl UnrootedProblem {
    /// Canonicalizes and deduplicates the configuration lists, then validates.
    pub fn new(
        delta: usize,
        labels: Vec<String>,
        node_configs: Vec<LabelMultiset>,
        edge_configs: Vec<LabelMultiset>,
    ) -> Result<Self> {
        let mut p = UnrootedProblem {
            delta,
            labels,
            node_configs,
            edge_configs,
        };
        p.normalize();
        let diags = p.diagnostics();
        if let Some(d) = diags.first() {
            return Err(LclError::InvalidProblem(d.to_string()));
        }
        Ok(p)
    }

    fn normalize(&mut self) {
        for c in self
            .node_configs
            .iter_mut()
            .chain(self.edge_configs.iter_mut())
        {
            *c = canonicalize(c);
        }
        self.node_configs.sort();
        self.node_configs.dedup();
        self.edge_configs.sort();
        self.edge_configs.dedup();
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn all_configs(&self) -> BitSet {
        BitSet::full(self.node_configs.len())
    }

    pub fn edge_table(&self) -> EdgeTable {
        let n = self.labels.len();
        let mut allowed = vec![false; n * n];
        for e in &self.edge_configs {
            let (a, b) = (e.entries[0].index(), e.entries[1].index());
            allowed[a * n + b] = true;
            allowed[b * n + a] = true;
        }
        EdgeTable { n, allowed }
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.labels[l.index()]
    }

    /// Same problem with the node constraint replaced by a subset of configurations.
    pub fn with_node_subset(&self, subset: &BitSet) -> UnrootedProblem {
        UnrootedProblem {
            delta: self.delta,
            labels: self.labels.clone(),
            node_configs: subset
                .iter()
                .map(|i| self.node_configs[i].clone())
                .collect(),
            edge_configs: self.edge_configs.clone(),
        }
    }

    /// Apply the label permutation `perm` (old id -> new id).
    pub fn relabel(&self, perm: &[usize]) -> UnrootedProblem {
        let map = |m: &LabelMultiset| {
            LabelMultiset::new(
                m.entries
                    .iter()
                    .map(|l| Label::from(perm[l.index()]))
                    .collect(),
            )
        };
        let mut labels = vec![String::new(); self.labels.len()];
        for (old, name) in self.labels.iter().enumerate() {
            labels[perm[old]] = name.clone();
        }
        let mut p = UnrootedProblem {
            delta: self.delta,
            labels,
            node_configs: self.node_configs.iter().map(map).collect(),
            edge_configs: self.edge_configs.iter().map(map).collect(),
        };
        p.normalize();
        p
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.delta < 2 {
            out.push(Diagnostic::new(
                "header",
                format!("delta must be at least 2, got {}", self.delta),
            ));
        }
        check_alphabet(&self.labels, &mut out);
        let n = self.labels.len();
        for (i, c) in self.node_configs.iter().enumerate() {
            let loc = format!("node config #{i} {}", self.render(c));
            if c.arity() != self.delta {
                out.push(Diagnostic::new(
                    &loc,
                    format!("arity {} but delta is {}", c.arity(), self.delta),
                ));
            }
            check_ids(c, n, &loc, &mut out);
        }
        for (i, c) in self.edge_configs.iter().enumerate() {
            let loc = format!("edge config #{i} {}", self.render(c));
            if c.arity() != 2 {
                out.push(Diagnostic::new(
                    &loc,
                    format!("arity {} but edge configurations have arity 2", c.arity()),
                ));
            }
            check_ids(c, n, &loc, &mut out);
        }
        out
    }

    pub fn render(&self, m: &LabelMultiset) -> String {
        render_multiset(&self.labels, m)
    }
}

/// One rooted node configuration `(label : children)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedConfig {
    pub label: Label,
    pub children: LabelMultiset,
}

/// LCL on δ-regular rooted trees: node labels, constraint on (label : children).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedProblem {
    pub delta: usize,
    pub labels: Vec<String>,
    pub configs: Vec<RootedConfig>,
}

impl RootedProblem {
    pub fn new(delta: usize, labels: Vec<String>, configs: Vec<RootedConfig>) -> Result<Self> {
        let mut p = RootedProblem {
            delta,
            labels,
            configs,
        };
        p.normalize();
        let diags = p.diagnostics();
        if let Some(d) = diags.first() {
            return Err(LclError::InvalidProblem(d.to_string()));
        }
        Ok(p)
    }

    fn normalize(&mut self) {
        for c in &mut self.configs {
            c.children = canonicalize(&c.children);
        }
        self.configs.sort();
        self.configs.dedup();
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn all_labels(&self) -> LabelSet {
        LabelSet::full(self.labels.len())
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.labels[l.index()]
    }

    /// Configurations whose label and children all lie in `set`.
    pub fn configs_within<'a>(
        &'a self,
        set: &'a LabelSet,
    ) -> impl Iterator<Item = &'a RootedConfig> + 'a {
        self.configs
            .iter()
            .filter(move |c| set.contains(c.label.index()) && c.children.all_in(set))
    }

    pub fn relabel(&self, perm: &[usize]) -> RootedProblem {
        let mut labels = vec![String::new(); self.labels.len()];
        for (old, name) in self.labels.iter().enumerate() {
            labels[perm[old]] = name.clone();
        }
        let mut p = RootedProblem {
            delta: self.delta,
            labels,
            configs: self
                .configs
                .iter()
                .map(|c| RootedConfig {
                    label: Label::from(perm[c.label.index()]),
                    children: LabelMultiset::new(
                        c.children
                            .entries
                            .iter()
                            .map(|l| Label::from(perm[l.index()]))
                            .collect(),
                    ),
                })
                .collect(),
        };
        p.normalize();
        p
    }

    fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.delta < 1 {
            out.push(Diagnostic::new(
                "header",
                "delta must be at least 1".to_string(),
            ));
        }
        check_alphabet(&self.labels, &mut out);
        let n = self.labels.len();
        for (i, c) in self.configs.iter().enumerate() {
            let loc = format!("config #{i} {}", self.render(c));
            if c.label.index() >= n {
                out.push(Diagnostic::new(
                    &loc,
                    format!("label id {} outside alphabet of size {n}", c.label.0),
                ));
            }
            if c.children.arity() != self.delta {
                out.push(Diagnostic::new(
                    &loc,
                    format!(
                        "{} children but delta is {}",
                        c.children.arity(),
                        self.delta
                    ),
                ));
            }
            check_ids(&c.children, n, &loc, &mut out);
        }
        out
    }

    pub fn render(&self, c: &RootedConfig) -> String {
        let head = self
            .labels
            .get(c.label.index())
            .map(String::as_str)
            .unwrap_or("?");
        let kids: Vec<&str> = c
            .children
            .entries()
            .iter()
            .map(|l| {
                self.labels
                    .get(l.index())
                    .map(String::as_str)
                    .unwrap_or("?")
            })
            .collect();
        format!("({head} : {})", kids.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Rooted(RootedProblem),
    Unrooted(UnrootedProblem),
}

impl Problem {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Problem::Rooted(_) => ProblemKind::Rooted,
            Problem::Unrooted(_) => ProblemKind::Unrooted,
        }
    }

    pub fn delta(&self) -> usize {
        match self {
            Problem::Rooted(p) => p.delta,
            Problem::Unrooted(p) => p.delta,
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            Problem::Rooted(p) => &p.labels,
            Problem::Unrooted(p) => &p.labels,
        }
    }

    pub fn label_index(&self, name: &str) -> Option<Label> {
        self.labels()
            .iter()
            .position(|l| l == name)
            .map(Label::from)
    }
}

/// One violated problem invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    fn new(location: &str, message: String) -> Self {
        Diagnostic {
            location: location.to_string(),
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// All invariant violations of `problem`; empty iff the problem is well formed.
pub fn validate_problem(problem: &Problem) -> Vec<Diagnostic> {
    match problem {
        Problem::Rooted(p) => p.diagnostics(),
        Problem::Unrooted(p) => p.diagnostics(),
    }
}

fn check_alphabet(labels: &[String], out: &mut Vec<Diagnostic>) {
    for (i, name) in labels.iter().enumerate() {
        if labels[..i].contains(name) {
            out.push(Diagnostic::new(
                "labels",
                format!("duplicate label name `{name}`"),
            ));
        }
    }
    if labels.len() > u16::MAX as usize {
        out.push(Diagnostic::new("labels", "alphabet too large".to_string()));
    }
}

fn check_ids(m: &LabelMultiset, n: usize, loc: &str, out: &mut Vec<Diagnostic>) {
    for l in m.entries() {
        if l.index() >= n {
            out.push(Diagnostic::new(
                loc,
                format!("label id {} outside alphabet of size {n}", l.0),
            ));
        }
    }
}

pub(crate) fn render_multiset(labels: &[String], m: &LabelMultiset) -> String {
    let names: Vec<&str> = m
        .entries()
        .iter()
        .map(|l| labels.get(l.index()).map(String::as_str).unwrap_or("?"))
        .collect();
    format!("{{{}}}", names.join(","))
}
