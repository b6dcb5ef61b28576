//! Tree instances: the validated tree type and the generators for complete
//! trees, hairy paths, random trees and lower-bound gadget trees.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LclError, Result};
use crate::problem::ProblemKind;

/// Rake or compress half of a layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Rake,
    Compress,
}

/// A layer tag `(R,i)` or `(C,i)`; `index` is 1-based.
///
/// Layers are ordered `(R,1) < (C,1) < (R,2) < (C,2) < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    pub phase: Phase,
    pub index: usize,
}

impl Layer {
    pub fn rake(index: usize) -> Self {
        Layer {
            phase: Phase::Rake,
            index,
        }
    }

    pub fn compress(index: usize) -> Self {
        Layer {
            phase: Phase::Compress,
            index,
        }
    }

    pub fn rank(self) -> usize {
        2 * self.index + usize::from(self.phase == Phase::Compress)
    }
}

impl PartialOrd for Layer {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Layer {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.phase {
            Phase::Rake => 'R',
            Phase::Compress => 'C',
        };
        write!(f, "{p},{}", self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Front,
    Central,
    Rear,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Front => "front",
            Role::Central => "central",
            Role::Rear => "rear",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Annotation {
    pub layer: Layer,
    pub role: Option<Role>,
}

/// A finite tree; rooted trees carry child-to-parent orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    kind: ProblemKind,
    adj: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    annotations: Vec<Option<Annotation>>,
    degree_bound: Option<usize>,
}

impl Tree {
    /// Build and validate a tree from an edge list.
    ///
    /// Rooted edges are `(child, parent)`. `degree_bound` limits the degree
    /// (unrooted) or indegree (rooted) of every node.
    pub fn from_edges(
        kind: ProblemKind,
        n: usize,
        edges: &[(usize, usize)],
        degree_bound: Option<usize>,
    ) -> Result<Tree> {
        if n == 0 {
            return Err(LclError::InvalidTree(
                "tree must have at least one node".into(),
            ));
        }
        let mut adj = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        let mut uf = UnionFind::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(LclError::InvalidTree(format!(
                    "edge {u}-{v} references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(LclError::InvalidTree(format!("self-loop at node {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            if kind == ProblemKind::Rooted {
                if parent[u].is_some() {
                    return Err(LclError::InvalidTree(format!(
                        "node {u} has more than one parent"
                    )));
                }
                parent[u] = Some(v);
            }
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(LclError::InvalidTree(format!("duplicate edge at node {v}")));
            }
        }
        for &(u, v) in edges {
            if !uf.union(u, v) {
                return Err(LclError::InvalidTree(format!(
                    "cycle detected through edge {u}-{v}"
                )));
            }
        }
        if edges.len() != n - 1 {
            return Err(LclError::InvalidTree(format!(
                "disconnected: {} edges for {n} nodes",
                edges.len()
            )));
        }
        let mut children = vec![Vec::new(); n];
        if kind == ProblemKind::Rooted {
            let roots = parent.iter().filter(|p| p.is_none()).count();
            if roots != 1 {
                return Err(LclError::InvalidTree(format!(
                    "expected exactly one root, found {roots}"
                )));
            }
            for (v, p) in parent.iter().enumerate() {
                if let Some(p) = *p {
                    children[p].push(v);
                }
            }
        }
        if let Some(bound) = degree_bound {
            for v in 0..n {
                let d = match kind {
                    ProblemKind::Rooted => children[v].len(),
                    ProblemKind::Unrooted => adj[v].len(),
                };
                if d > bound {
                    return Err(LclError::InvalidTree(format!(
                        "node {v} has degree {d}, above the bound {bound}"
                    )));
                }
            }
        }
        Ok(Tree {
            kind,
            adj,
            parent,
            children,
            annotations: vec![None; n],
            degree_bound,
        })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.degree_bound
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Index of `u` in the neighbor list of `v`.
    pub fn position(&self, v: usize, u: usize) -> Option<usize> {
        self.adj[v].binary_search(&u).ok()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Sorted children of `v` (rooted trees only; empty otherwise).
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.children[v].len()
    }

    pub fn root(&self) -> Option<usize> {
        match self.kind {
            ProblemKind::Rooted => self.parent.iter().position(Option::is_none),
            ProblemKind::Unrooted => None,
        }
    }

    /// Rooted: `(child, parent)` sorted by child. Unrooted: `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.kind {
            ProblemKind::Rooted => (0..self.n())
                .filter_map(|v| self.parent[v].map(|p| (v, p)))
                .collect(),
            ProblemKind::Unrooted => (0..self.n())
                .flat_map(|u| {
                    self.adj[u]
                        .iter()
                        .filter(move |&&v| u < v)
                        .map(move |&v| (u, v))
                })
                .collect(),
        }
    }

    pub fn annotation(&self, v: usize) -> Option<Annotation> {
        self.annotations[v]
    }

    pub fn set_annotation(&mut self, v: usize, a: Option<Annotation>) {
        self.annotations[v] = a;
    }

    pub fn has_annotations(&self) -> bool {
        self.annotations.iter().any(Option::is_some)
    }

    pub fn max_degree(&self) -> usize {
        match self.kind {
            ProblemKind::Rooted => self.children.iter().map(Vec::len).max().unwrap_or(0),
            ProblemKind::Unrooted => self.adj.iter().map(Vec::len).max().unwrap_or(0),
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Incremental construction of a tree top-down; every node but the first names its parent.
struct Builder {
    kind: ProblemKind,
    parent: Vec<Option<usize>>,
    ann: Vec<Option<Annotation>>,
}

impl Builder {
    fn new(kind: ProblemKind) -> Self {
        Builder {
            kind,
            parent: Vec::new(),
            ann: Vec::new(),
        }
    }

    fn node(&mut self, parent: Option<usize>, ann: Option<Annotation>) -> usize {
        self.parent.push(parent);
        self.ann.push(ann);
        self.parent.len() - 1
    }

    fn finish(self, bound: Option<usize>) -> Result<Tree> {
        let edges: Vec<(usize, usize)> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (v, p)))
            .collect();
        let mut tree = Tree::from_edges(self.kind, self.parent.len(), &edges, bound)?;
        tree.annotations = self.ann;
        Ok(tree)
    }

    /// Complete tree hanging from `parent`; returns (root, leaves at full depth).
    fn complete(
        &mut self,
        parent: Option<usize>,
        root_branching: usize,
        branching: usize,
        height: usize,
        ann: Option<Annotation>,
    ) -> (usize, Vec<usize>) {
        let root = self.node(parent, ann);
        let mut frontier = vec![root];
        for depth in 0..height {
            let b = if depth == 0 {
                root_branching
            } else {
                branching
            };
            let mut next = Vec::with_capacity(frontier.len() * b);
            for &v in &frontier {
                for _ in 0..b {
                    next.push(self.node(Some(v), ann));
                }
            }
            frontier = next;
        }
        (root, frontier)
    }
}

/// Complete tree of height `height`.
///
/// Unrooted: `T_i` branches `degree - 1` at every internal node, `T_i*`
/// branches `degree` at the root. Rooted: every internal node has `degree`
/// children; the starred variant does not exist.
pub fn complete_tree(
    kind: ProblemKind,
    degree: usize,
    height: usize,
    starred: bool,
) -> Result<Tree> {
    let mut b = Builder::new(kind);
    match kind {
        ProblemKind::Rooted => {
            if starred {
                return Err(LclError::InvalidParameters(
                    "rooted complete trees have no starred variant".into(),
                ));
            }
            b.complete(None, degree, degree, height, None);
        }
        ProblemKind::Unrooted => {
            if degree < 1 {
                return Err(LclError::InvalidParameters(
                    "degree must be positive".into(),
                ));
            }
            let root_b = if starred { degree } else { degree - 1 };
            b.complete(None, root_b, degree - 1, height, None);
        }
    }
    b.finish(None)
}

/// Hairy path `H_k`: a path of `k + 1` nodes padded with leaves to degree `delta`.
pub fn hairy_path(k: usize, delta: usize) -> Result<Tree> {
    if delta < 3 {
        return Err(LclError::InvalidParameters(format!(
            "hairy paths need delta >= 3, got {delta}"
        )));
    }
    if k < 1 {
        return Err(LclError::InvalidParameters(
            "hairy path length must be at least 1".into(),
        ));
    }
    let mut b = Builder::new(ProblemKind::Unrooted);
    let mut prev = None;
    let path: Vec<usize> = (0..=k)
        .map(|_| {
            let v = b.node(prev, None);
            prev = Some(v);
            v
        })
        .collect();
    for (j, &v) in path.iter().enumerate() {
        let on_path = if j == 0 || j == k { 1 } else { 2 };
        for _ in on_path..delta {
            b.node(Some(v), None);
        }
    }
    b.finish(Some(delta))
}

/// Random tree in which every internal node has full degree.
///
/// Unrooted internal nodes have degree `degree`; rooted internal nodes have
/// `degree` children. Leaves are expanded uniformly at random while the node
/// count stays within `n_target`, so the result has between
/// `n_target - degree + 1` and `n_target` nodes.
pub fn random_regular_tree(
    n_target: usize,
    kind: ProblemKind,
    degree: usize,
    seed: u64,
) -> Result<Tree> {
    if n_target < 1 {
        return Err(LclError::InvalidParameters(
            "n_target must be at least 1".into(),
        ));
    }
    if degree < 1 {
        return Err(LclError::InvalidParameters(
            "degree must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new(kind);
    let root = b.node(None, None);
    let mut leaves = vec![root];
    let mut first = true;
    while !leaves.is_empty() {
        let need = match kind {
            ProblemKind::Unrooted if first => degree,
            ProblemKind::Unrooted => degree - 1,
            ProblemKind::Rooted => degree,
        };
        if need == 0 || b.parent.len() + need > n_target {
            break;
        }
        let i = rng.random_range(0..leaves.len());
        let v = leaves.swap_remove(i);
        for _ in 0..need {
            leaves.push(b.node(Some(v), None));
        }
        first = false;
    }
    b.finish(Some(degree))
}

/// Uniform-attachment random tree of exactly `n` nodes with degree (unrooted)
/// or indegree (rooted) at most `max_degree`.
pub fn random_bounded_tree(
    n: usize,
    kind: ProblemKind,
    max_degree: usize,
    seed: u64,
) -> Result<Tree> {
    if n < 1 {
        return Err(LclError::InvalidParameters("n must be at least 1".into()));
    }
    let min_needed = if kind == ProblemKind::Unrooted { 2 } else { 1 };
    if n > 2 && max_degree < min_needed {
        return Err(LclError::InvalidParameters(format!(
            "max_degree {max_degree} cannot span {n} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new(kind);
    b.node(None, None);
    let mut used = vec![0usize];
    let mut open = vec![0usize];
    while b.parent.len() < n {
        let i = rng.random_range(0..open.len());
        let p = open[i];
        let v = b.node(Some(p), None);
        used[p] += 1;
        used.push(usize::from(kind == ProblemKind::Unrooted));
        if used[p] >= max_degree {
            open.swap_remove(i);
        }
        if used[v] < max_degree {
            open.push(v);
        }
    }
    b.finish(Some(max_degree))
}

/// Parameters shared by both lower-bound constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBoundParams {
    /// Δ for unrooted trees, δ for rooted trees.
    pub degree: usize,
    /// Height γ̂ of the complete trees used in rake layers.
    pub gamma_hat: usize,
    pub k: usize,
    pub t: usize,
    /// |Σ| of the problem the instance is built for; enters the default path length.
    pub alphabet_size: usize,
    /// Overrides the default compress path length `10t + |Σ|² + 10`.
    pub path_len: Option<usize>,
}

impl LowerBoundParams {
    pub fn new(degree: usize, alphabet_size: usize, k: usize, t: usize) -> Self {
        LowerBoundParams {
            degree,
            gamma_hat: alphabet_size + 1,
            k,
            t,
            alphabet_size,
            path_len: None,
        }
    }

    pub fn s(&self) -> usize {
        self.path_len
            .unwrap_or(10 * self.t + self.alphabet_size * self.alphabet_size + 10)
    }

    fn check(&self, min_degree: usize) -> Result<()> {
        if self.k < 1 || self.t < 1 {
            return Err(LclError::InvalidParameters(
                "lower-bound trees need k >= 1 and t >= 1".into(),
            ));
        }
        if self.degree < min_degree {
            return Err(LclError::InvalidParameters(format!(
                "lower-bound trees need degree >= {min_degree}, got {}",
                self.degree
            )));
        }
        if self.s() < 1 {
            return Err(LclError::InvalidParameters(
                "path length must be positive".into(),
            ));
        }
        Ok(())
    }

    fn role(&self, j: usize) -> Role {
        let (s, t) = (self.s(), self.t);
        if j <= t {
            Role::Front
        } else if j + t <= s {
            Role::Central
        } else {
            Role::Rear
        }
    }
}

fn ann(layer: Layer, role: Option<Role>) -> Option<Annotation> {
    Some(Annotation { layer, role })
}

/// Unrooted main lower-bound graph `G*_{R,k+1}` with layer and role annotations.
pub fn lower_bound_tree_unrooted(p: &LowerBoundParams) -> Result<Tree> {
    p.check(2)?;
    let mut b = Builder::new(ProblemKind::Unrooted);
    unrooted_rake_gadget(&mut b, p, p.k + 1, None, true);
    b.finish(Some(p.degree))
}

fn unrooted_rake_gadget(
    b: &mut Builder,
    p: &LowerBoundParams,
    i: usize,
    parent: Option<usize>,
    starred: bool,
) -> usize {
    let d = p.degree;
    let root_b = if starred { d } else { d - 1 };
    let (root, leaves) = b.complete(
        parent,
        root_b,
        d - 1,
        p.gamma_hat,
        ann(Layer::rake(i), None),
    );
    if i >= 2 {
        for leaf in leaves {
            for _ in 0..d - 1 {
                unrooted_compress_gadget(b, p, i - 1, Some(leaf));
            }
        }
    }
    root
}

fn unrooted_compress_gadget(
    b: &mut Builder,
    p: &LowerBoundParams,
    i: usize,
    parent: Option<usize>,
) -> usize {
    let (d, s) = (p.degree, p.s());
    let mut prev = parent;
    let mut path = Vec::with_capacity(s);
    for j in 1..=s {
        let v = b.node(prev, ann(Layer::compress(i), Some(p.role(j))));
        path.push(v);
        prev = Some(v);
    }
    for (j, &v) in path.iter().enumerate() {
        let copies = if j + 1 < s { d - 2 } else { d - 1 };
        for _ in 0..copies {
            unrooted_rake_gadget(b, p, i, Some(v), false);
        }
    }
    path[0]
}

/// Rooted main lower-bound graph: core paths of `G°_{C,1..k}` chained into the root of `G_{R,k+1}`.
pub fn lower_bound_tree_rooted(p: &LowerBoundParams) -> Result<Tree> {
    p.check(1)?;
    let mut b = Builder::new(ProblemKind::Rooted);
    let mut attach = None;
    for i in 1..=p.k {
        let (_, last) = rooted_compress_gadget(&mut b, p, i, attach, true);
        attach = Some(last);
    }
    rooted_rake_gadget(&mut b, p, p.k + 1, attach);
    b.finish(Some(p.degree))
}

fn rooted_rake_gadget(
    b: &mut Builder,
    p: &LowerBoundParams,
    i: usize,
    parent: Option<usize>,
) -> usize {
    let d = p.degree;
    let (root, leaves) = b.complete(parent, d, d, p.gamma_hat, ann(Layer::rake(i), None));
    if i >= 2 {
        for leaf in leaves {
            for _ in 0..d {
                rooted_compress_gadget(b, p, i - 1, Some(leaf), false);
            }
        }
    }
    root
}

/// Returns the first and last node of the core path `v_1 <- ... <- v_s`.
fn rooted_compress_gadget(
    b: &mut Builder,
    p: &LowerBoundParams,
    i: usize,
    parent: Option<usize>,
    open_end: bool,
) -> (usize, usize) {
    let (d, s) = (p.degree, p.s());
    let mut prev = parent;
    let mut path = Vec::with_capacity(s);
    for j in 1..=s {
        let v = b.node(prev, ann(Layer::compress(i), Some(p.role(j))));
        path.push(v);
        prev = Some(v);
    }
    for (j, &v) in path.iter().enumerate() {
        let copies = if j + 1 < s || open_end { d - 1 } else { d };
        for _ in 0..copies {
            rooted_rake_gadget(b, p, i, Some(v));
        }
    }
    (path[0], path[s - 1])
}

fn complete_size(root_b: u128, b: u128, height: usize) -> (u128, u128) {
    let mut total = 1u128;
    let mut level = 1u128;
    for depth in 0..height {
        level *= if depth == 0 { root_b } else { b };
        total += level;
    }
    (total, level)
}

/// Node count of the unrooted lower-bound graph, without building it.
pub fn lower_bound_size_unrooted(p: &LowerBoundParams) -> u128 {
    let d = p.degree as u128;
    let s = p.s() as u128;
    let rake = |i: usize, compress_below: u128, starred: bool| {
        let (nodes, leaves) = complete_size(if starred { d } else { d - 1 }, d - 1, p.gamma_hat);
        if i >= 2 {
            nodes + leaves * (d - 1) * compress_below
        } else {
            nodes
        }
    };
    let mut r = rake(1, 0, false);
    for i in 1..=p.k {
        let c = s + ((s - 1) * (d - 2) + (d - 1)) * r;
        r = rake(i + 1, c, i == p.k);
    }
    r
}

/// Node count of the rooted lower-bound graph, without building it.
pub fn lower_bound_size_rooted(p: &LowerBoundParams) -> u128 {
    let d = p.degree as u128;
    let s = p.s() as u128;
    let (t_nodes, t_leaves) = complete_size(d, d, p.gamma_hat);
    let mut r = t_nodes;
    let mut total = 0u128;
    for _ in 1..=p.k {
        let c = s + (s - 1) * (d - 1) * r + d * r;
        let c_open = s + s * (d - 1) * r;
        total += c_open;
        r = t_nodes + t_leaves * d * c;
    }
    total + r
}
