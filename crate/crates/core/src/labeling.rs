//! Labelings of tree instances and their validation against a problem.

use std::collections::HashSet;
use std::fmt;

use crate::error::{LclError, Result};
use crate::problem::{Label, LabelMultiset, Problem, ProblemKind, RootedProblem, UnrootedProblem};
use crate::tree::Tree;

/// Rooted: one label per node. Unrooted: one label per half-edge, where
/// `half[v][i]` labels the half-edge of `v` towards `tree.neighbors(v)[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Labeling {
    Rooted(Vec<Option<Label>>),
    Unrooted(Vec<Vec<Option<Label>>>),
}

impl Labeling {
    pub fn empty(tree: &Tree) -> Labeling {
        match tree.kind() {
            ProblemKind::Rooted => Labeling::Rooted(vec![None; tree.n()]),
            ProblemKind::Unrooted => {
                Labeling::Unrooted((0..tree.n()).map(|v| vec![None; tree.degree(v)]).collect())
            }
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            Labeling::Rooted(_) => ProblemKind::Rooted,
            Labeling::Unrooted(_) => ProblemKind::Unrooted,
        }
    }

    pub fn is_complete(&self) -> bool {
        match self {
            Labeling::Rooted(l) => l.iter().all(Option::is_some),
            Labeling::Unrooted(h) => h.iter().flatten().all(Option::is_some),
        }
    }

    pub fn node(&self, v: usize) -> Option<Label> {
        match self {
            Labeling::Rooted(l) => l[v],
            Labeling::Unrooted(_) => None,
        }
    }

    pub fn set_node(&mut self, v: usize, label: Label) {
        if let Labeling::Rooted(l) = self {
            l[v] = Some(label);
        }
    }

    /// Label of the half-edge of `v` on the edge `{v, u}`.
    pub fn half_edge(&self, tree: &Tree, v: usize, u: usize) -> Option<Label> {
        match self {
            Labeling::Unrooted(h) => tree.position(v, u).and_then(|i| h[v][i]),
            Labeling::Rooted(_) => None,
        }
    }

    pub fn set_half_edge(&mut self, tree: &Tree, v: usize, u: usize, label: Label) {
        if let Labeling::Unrooted(h) = self {
            let i = tree.position(v, u).expect("half-edge of a tree edge");
            h[v][i] = Some(label);
        }
    }

    /// Labels of all half-edges around `v` (unrooted only).
    pub fn around(&self, v: usize) -> &[Option<Label>] {
        match self {
            Labeling::Unrooted(h) => &h[v],
            Labeling::Rooted(_) => &[],
        }
    }
}

/// One local constraint violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Node { node: usize, detail: String },
    Edge { u: usize, v: usize, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Node { node, detail } => write!(f, "node {node} {detail}"),
            Violation::Edge { u, v, detail } => write!(f, "edge {u} {v} {detail}"),
        }
    }
}

/// Every violated node or edge constraint of a complete labeling.
pub fn validate_labeling(
    problem: &Problem,
    tree: &Tree,
    labeling: &Labeling,
) -> Result<Vec<Violation>> {
    if problem.kind() != tree.kind() || labeling.kind() != tree.kind() {
        return Err(LclError::KindMismatch(format!(
            "problem is {}, tree is {}, labeling is {}",
            problem.kind(),
            tree.kind(),
            labeling.kind()
        )));
    }
    if !labeling.is_complete() {
        return Err(LclError::IncompleteLabeling(
            "some nodes or half-edges carry no label".into(),
        ));
    }
    Ok(match problem {
        Problem::Rooted(p) => validate_rooted(p, tree, labeling),
        Problem::Unrooted(p) => validate_unrooted(p, tree, labeling),
    })
}

fn validate_rooted(p: &RootedProblem, tree: &Tree, labeling: &Labeling) -> Vec<Violation> {
    let allowed: HashSet<(Label, &LabelMultiset)> =
        p.configs.iter().map(|c| (c.label, &c.children)).collect();
    let mut out = Vec::new();
    for v in 0..tree.n() {
        if tree.indegree(v) != p.delta {
            continue;
        }
        let own = labeling.node(v).expect("complete");
        let kids = LabelMultiset::new(
            tree.children(v)
                .iter()
                .map(|&c| labeling.node(c).expect("complete"))
                .collect(),
        );
        if !allowed.contains(&(own, &kids)) {
            let cfg = crate::problem::RootedConfig {
                label: own,
                children: kids,
            };
            out.push(Violation::Node {
                node: v,
                detail: format!("configuration {} not allowed", p.render(&cfg)),
            });
        }
    }
    out
}

fn validate_unrooted(p: &UnrootedProblem, tree: &Tree, labeling: &Labeling) -> Vec<Violation> {
    let nodes: HashSet<&LabelMultiset> = p.node_configs.iter().collect();
    let edges = p.edge_table();
    let mut out = Vec::new();
    for v in 0..tree.n() {
        if tree.degree(v) == p.delta {
            let c = LabelMultiset::new(
                labeling
                    .around(v)
                    .iter()
                    .map(|l| l.expect("complete"))
                    .collect(),
            );
            if !nodes.contains(&c) {
                out.push(Violation::Node {
                    node: v,
                    detail: format!("configuration {} not allowed", p.render(&c)),
                });
            }
        }
    }
    for (u, v) in tree.edges() {
        let a = labeling.half_edge(tree, u, v).expect("complete");
        let b = labeling.half_edge(tree, v, u).expect("complete");
        if !edges.allows(a, b) {
            out.push(Violation::Edge {
                u,
                v,
                detail: format!(
                    "configuration {} not allowed",
                    p.render(&LabelMultiset::pair(a, b))
                ),
            });
        }
    }
    out
}
