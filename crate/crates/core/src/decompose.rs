//! `(γ, ℓ, L)` rake-and-compress decompositions of rooted and unrooted trees.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{LclError, Result};
use crate::problem::ProblemKind;
use crate::tree::{Layer, Phase, Tree};

/// When a node was removed by the raw rake-and-compress process, before
/// compress paths are split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawStamp {
    pub iteration: usize,
    pub phase: Phase,
    /// Rake step within the iteration (1-based); 0 for compress.
    pub step: usize,
}

/// A connected component of one layer.
///
/// Rake components list nodes breadth-first from `root`. Compress components
/// list the path `v_1 … v_s` in order, with `attachments = (u, w)` adjacent
/// to `v_1` and `v_s` (rooted: `u` is the parent of `v_1`, `w` a child of `v_s`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerComponent {
    pub layer: Layer,
    pub nodes: Vec<usize>,
    pub root: Option<usize>,
    pub attachments: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub kind: ProblemKind,
    pub gamma: usize,
    pub ell: usize,
    /// `L`: the number of rake layers.
    pub layers: usize,
    pub assignment: Vec<Layer>,
    pub raw: Vec<RawStamp>,
    pub components: Vec<LayerComponent>,
    pub component_of: Vec<usize>,
}

impl Decomposition {
    /// A decomposition given only by its layer assignment; for checking hand-built cases.
    pub fn from_assignment(
        kind: ProblemKind,
        gamma: usize,
        ell: usize,
        assignment: Vec<Layer>,
    ) -> Self {
        let layers = assignment.iter().map(|l| l.index).max().unwrap_or(0);
        Decomposition {
            kind,
            gamma,
            ell,
            layers,
            raw: Vec::new(),
            components: Vec::new(),
            component_of: Vec::new(),
            assignment,
        }
    }

    /// Nodes of each layer in the order `V_R^1, V_C^1, …, V_R^L`.
    pub fn layer_sizes(&self) -> Vec<(Layer, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.layers {
            for layer in [Layer::rake(i), Layer::compress(i)] {
                let c = self.assignment.iter().filter(|&&l| l == layer).count();
                if layer.phase == Phase::Rake || c > 0 {
                    out.push((layer, c));
                }
            }
        }
        out
    }

    /// One line per node: `<id> <R|C> <layer> <component-id>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, l) in self.assignment.iter().enumerate() {
            let p = if l.phase == Phase::Rake { 'R' } else { 'C' };
            let _ = write!(out, "{v} {p} {}", l.index);
            if let Some(c) = self.component_of.get(v) {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Greedy `(ℓ, 2ℓ)`-independent set of a path given as its node sequence:
/// returns the indices to promote.
pub fn split_path(len: usize, ell: usize) -> Vec<usize> {
    let mut cut = Vec::new();
    let mut start = 0;
    while len - start > 2 * ell {
        cut.push(start + ell);
        start += ell + 1;
    }
    cut
}

fn check_params(gamma: usize, ell: usize) -> Result<()> {
    if gamma < 1 || ell < 1 {
        return Err(LclError::InvalidParameters(format!(
            "gamma and ell must be positive (gamma={gamma}, ell={ell})"
        )));
    }
    Ok(())
}

/// Rake-and-compress decomposition of a rooted tree.
pub fn decompose_rooted(tree: &Tree, gamma: usize, ell: usize) -> Result<Decomposition> {
    check_params(gamma, ell)?;
    if tree.kind() != ProblemKind::Rooted {
        return Err(LclError::KindMismatch(
            "decompose_rooted needs a rooted tree".into(),
        ));
    }
    let n = tree.n();
    let mut alive = vec![true; n];
    let mut indeg: Vec<usize> = (0..n).map(|v| tree.indegree(v)).collect();
    let mut raw = vec![
        RawStamp {
            iteration: 0,
            phase: Phase::Rake,
            step: 0
        };
        n
    ];
    let mut assignment = vec![Layer::rake(0); n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut remaining = n;
    let mut iteration = 0;
    let mut promotions = Vec::new();
    while remaining > 0 {
        iteration += 1;
        for step in 1..=gamma {
            if frontier.is_empty() {
                break;
            }
            let removed = std::mem::take(&mut frontier);
            for &v in &removed {
                alive[v] = false;
                raw[v] = RawStamp {
                    iteration,
                    phase: Phase::Rake,
                    step,
                };
                assignment[v] = Layer::rake(iteration);
                remaining -= 1;
            }
            for &v in &removed {
                if let Some(p) = tree.parent(v) {
                    indeg[p] -= 1;
                    if indeg[p] == 0 && alive[p] {
                        frontier.push(p);
                    }
                }
            }
        }
        if remaining == 0 {
            break;
        }
        let on_chain = |v: usize, alive: &[bool], indeg: &[usize]| {
            alive[v] && indeg[v] == 1 && tree.parent(v).is_some_and(|p| alive[p])
        };
        let mut chains = Vec::new();
        for v in 0..n {
            if !on_chain(v, &alive, &indeg) {
                continue;
            }
            let p = tree.parent(v).expect("on chain");
            if on_chain(p, &alive, &indeg) {
                continue;
            }
            let mut chain = vec![v];
            let mut cur = v;
            loop {
                let child = *tree
                    .children(cur)
                    .iter()
                    .find(|&&c| alive[c])
                    .expect("indegree one");
                if on_chain(child, &alive, &indeg) {
                    chain.push(child);
                    cur = child;
                } else {
                    break;
                }
            }
            if chain.len() >= ell {
                chains.push(chain);
            }
        }
        for chain in chains {
            for &v in &chain {
                alive[v] = false;
                raw[v] = RawStamp {
                    iteration,
                    phase: Phase::Compress,
                    step: 0,
                };
                assignment[v] = Layer::compress(iteration);
                remaining -= 1;
            }
            let top_parent = tree.parent(chain[0]).expect("chain has a parent");
            indeg[top_parent] -= 1;
            if indeg[top_parent] == 0 {
                frontier.push(top_parent);
            }
            for idx in split_path(chain.len(), ell) {
                promotions.push((chain[idx], iteration + 1));
            }
        }
    }
    for (v, i) in promotions {
        assignment[v] = Layer::rake(i);
    }
    finish(tree, gamma, ell, assignment, raw, None)
}

/// Rake-and-compress decomposition of an unrooted tree.
pub fn decompose_unrooted(tree: &Tree, gamma: usize, ell: usize) -> Result<Decomposition> {
    check_params(gamma, ell)?;
    if tree.kind() != ProblemKind::Unrooted {
        return Err(LclError::KindMismatch(
            "decompose_unrooted needs an unrooted tree".into(),
        ));
    }
    let n = tree.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut raw = vec![
        RawStamp {
            iteration: 0,
            phase: Phase::Rake,
            step: 0
        };
        n
    ];
    let mut assignment = vec![Layer::rake(0); n];
    let mut rake_parent: Vec<Option<usize>> = vec![None; n];
    let mut in_frontier = vec![false; n];
    let mut frontier: Vec<usize> = Vec::new();
    for v in 0..n {
        if deg[v] <= 1 {
            in_frontier[v] = true;
            frontier.push(v);
        }
    }
    let alive_neighbor =
        |v: usize, alive: &[bool]| tree.neighbors(v).iter().copied().find(|&u| alive[u]);
    let mut remaining = n;
    let mut iteration = 0;
    let mut promotions = Vec::new();
    while remaining > 0 {
        iteration += 1;
        for step in 1..=gamma {
            if remaining == 0 {
                break;
            }
            let mut removed = Vec::new();
            let mut keep = Vec::new();
            for &v in &frontier {
                let take = match deg[v] {
                    0 => true,
                    _ => {
                        let u = alive_neighbor(v, &alive).expect("degree one");
                        deg[u] >= 2 || v < u
                    }
                };
                if take {
                    removed.push(v);
                } else {
                    keep.push(v);
                }
            }
            for &v in &removed {
                rake_parent[v] = alive_neighbor(v, &alive);
            }
            frontier = keep;
            for &v in &removed {
                alive[v] = false;
                in_frontier[v] = false;
                raw[v] = RawStamp {
                    iteration,
                    phase: Phase::Rake,
                    step,
                };
                assignment[v] = Layer::rake(iteration);
                remaining -= 1;
            }
            for &v in &removed {
                if let Some(u) = rake_parent[v] {
                    deg[u] -= 1;
                    if deg[u] <= 1 && !in_frontier[u] {
                        in_frontier[u] = true;
                        frontier.push(u);
                    }
                }
            }
        }
        if remaining == 0 {
            break;
        }
        let mut seen = vec![false; n];
        let mut chains = Vec::new();
        for v in 0..n {
            if !alive[v] || deg[v] != 2 || seen[v] {
                continue;
            }
            let mut chain = VecDeque::from([v]);
            seen[v] = true;
            for dir in 0..2 {
                let mut prev = v;
                let mut cur = tree
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| alive[u])
                    .nth(dir);
                while let Some(c) = cur {
                    if deg[c] != 2 || seen[c] {
                        break;
                    }
                    seen[c] = true;
                    if dir == 0 {
                        chain.push_front(c);
                    } else {
                        chain.push_back(c);
                    }
                    let next = tree
                        .neighbors(c)
                        .iter()
                        .copied()
                        .find(|&u| alive[u] && u != prev);
                    prev = c;
                    cur = next;
                }
            }
            if chain.len() >= ell {
                chains.push(Vec::from(chain));
            }
        }
        for chain in chains {
            for &v in &chain {
                alive[v] = false;
                raw[v] = RawStamp {
                    iteration,
                    phase: Phase::Compress,
                    step: 0,
                };
                assignment[v] = Layer::compress(iteration);
                remaining -= 1;
            }
            let ends = if chain.len() == 1 {
                &chain[..1]
            } else {
                &[chain[0], chain[chain.len() - 1]][..]
            };
            for &end in ends {
                for &u in tree.neighbors(end) {
                    if alive[u] {
                        deg[u] -= 1;
                        if deg[u] <= 1 && !in_frontier[u] {
                            in_frontier[u] = true;
                            frontier.push(u);
                        }
                    }
                }
            }
            for idx in split_path(chain.len(), ell) {
                promotions.push((chain[idx], iteration + 1));
            }
        }
    }
    for &(v, i) in &promotions {
        assignment[v] = Layer::rake(i);
        rake_parent[v] = None;
    }
    finish(tree, gamma, ell, assignment, raw, Some(rake_parent))
}

/// Decompose according to the tree's kind.
pub fn decompose(tree: &Tree, gamma: usize, ell: usize) -> Result<Decomposition> {
    match tree.kind() {
        ProblemKind::Rooted => decompose_rooted(tree, gamma, ell),
        ProblemKind::Unrooted => decompose_unrooted(tree, gamma, ell),
    }
}

fn finish(
    tree: &Tree,
    gamma: usize,
    ell: usize,
    assignment: Vec<Layer>,
    raw: Vec<RawStamp>,
    rake_parent: Option<Vec<Option<usize>>>,
) -> Result<Decomposition> {
    let layers = assignment.iter().map(|l| l.index).max().unwrap_or(0);
    let mut dec = Decomposition {
        kind: tree.kind(),
        gamma,
        ell,
        layers,
        assignment,
        raw,
        components: Vec::new(),
        component_of: vec![usize::MAX; tree.n()],
    };
    let groups = group_components(tree, &dec.assignment);
    for (id, nodes) in groups.into_iter().enumerate() {
        let layer = dec.assignment[nodes[0]];
        for &v in &nodes {
            dec.component_of[v] = id;
        }
        let comp = match layer.phase {
            Phase::Rake => {
                let root = match (&rake_parent, tree.kind()) {
                    (Some(rp), _) => nodes
                        .iter()
                        .copied()
                        .find(|&v| rp[v].is_none_or(|p| dec.assignment[p] != layer))
                        .expect("rake component has a root"),
                    (None, _) => top_of(tree, &dec.assignment, &nodes),
                };
                let ordered = bfs_within(tree, &dec.assignment, root);
                LayerComponent {
                    layer,
                    nodes: ordered,
                    root: Some(root),
                    attachments: None,
                }
            }
            Phase::Compress => {
                let (path, attach) =
                    order_path(tree, &dec.assignment, &nodes).ok_or_else(|| {
                        LclError::DecompositionInvalid(format!(
                            "compress component at node {} is not a path",
                            nodes[0]
                        ))
                    })?;
                LayerComponent {
                    layer,
                    nodes: path,
                    root: None,
                    attachments: attach,
                }
            }
        };
        dec.components.push(comp);
    }
    let diagnostics = validate_decomposition(tree, &dec);
    if let Some(d) = diagnostics.first() {
        return Err(LclError::DecompositionInvalid(d.clone()));
    }
    Ok(dec)
}

fn top_of(tree: &Tree, assignment: &[Layer], nodes: &[usize]) -> usize {
    let layer = assignment[nodes[0]];
    nodes
        .iter()
        .copied()
        .find(|&v| tree.parent(v).is_none_or(|p| assignment[p] != layer))
        .expect("connected rooted component has a top")
}

fn bfs_within(tree: &Tree, assignment: &[Layer], root: usize) -> Vec<usize> {
    let layer = assignment[root];
    let mut order = vec![root];
    let mut i = 0;
    let mut prev = std::collections::HashMap::new();
    prev.insert(root, usize::MAX);
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &u in tree.neighbors(v) {
            if assignment[u] == layer && !prev.contains_key(&u) {
                prev.insert(u, v);
                order.push(u);
            }
        }
    }
    order
}

/// Connected components of the subgraphs induced by each layer, in order of smallest node.
fn group_components(tree: &Tree, assignment: &[Layer]) -> Vec<Vec<usize>> {
    let n = tree.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &u in tree.neighbors(v) {
                if !seen[u] && assignment[u] == assignment[v] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Path order of a compress component and its higher-layer attachments, if it is a path.
#[allow(clippy::type_complexity)]
fn order_path(
    tree: &Tree,
    assignment: &[Layer],
    nodes: &[usize],
) -> Option<(Vec<usize>, Option<(usize, usize)>)> {
    let layer = assignment[nodes[0]];
    let inside = |v: usize| assignment[v] == layer;
    let higher = |v: usize| assignment[v] > layer;
    let path = match tree.kind() {
        ProblemKind::Rooted => {
            let top = top_of(tree, assignment, nodes);
            let mut path = vec![top];
            let mut cur = top;
            loop {
                let kids: Vec<usize> = tree
                    .children(cur)
                    .iter()
                    .copied()
                    .filter(|&c| inside(c))
                    .collect();
                match kids.as_slice() {
                    [] => break,
                    [c] => {
                        path.push(*c);
                        cur = *c;
                    }
                    _ => return None,
                }
            }
            path
        }
        ProblemKind::Unrooted => {
            let ends: Vec<usize> = nodes
                .iter()
                .copied()
                .filter(|&v| tree.neighbors(v).iter().filter(|&&u| inside(u)).count() <= 1)
                .collect();
            let start = *ends.iter().min()?;
            let mut path = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next: Vec<usize> = tree
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .filter(|&u| inside(u) && u != prev)
                    .collect();
                match next.as_slice() {
                    [] => break,
                    [u] => {
                        prev = cur;
                        cur = *u;
                        path.push(cur);
                    }
                    _ => return None,
                }
            }
            path
        }
    };
    if path.len() != nodes.len() {
        return None;
    }
    let first = path[0];
    let last = *path.last().expect("nonempty");
    let attach = match tree.kind() {
        ProblemKind::Rooted => {
            let u = tree.parent(first).filter(|&p| higher(p));
            let w = tree.children(last).iter().copied().find(|&c| higher(c));
            u.zip(w)
        }
        ProblemKind::Unrooted => {
            let hi = |v: usize, not: Option<usize>| {
                tree.neighbors(v)
                    .iter()
                    .copied()
                    .find(|&u| higher(u) && Some(u) != not)
            };
            let u = hi(first, None);
            let w = u.and_then(|u| hi(last, if first == last { Some(u) } else { None }));
            u.zip(w)
        }
    };
    Some((path, attach))
}

/// All violations of the layer requirements; empty for a valid decomposition.
pub fn validate_decomposition(tree: &Tree, dec: &Decomposition) -> Vec<String> {
    let mut out = Vec::new();
    let n = tree.n();
    if dec.assignment.len() != n {
        out.push(format!(
            "assignment covers {} of {n} nodes",
            dec.assignment.len()
        ));
        return out;
    }
    if dec.gamma < 1 || dec.ell < 1 {
        out.push("gamma and ell must be positive".into());
        return out;
    }
    for (v, l) in dec.assignment.iter().enumerate() {
        if l.index < 1
            || l.index > dec.layers
            || (l.phase == Phase::Compress && l.index >= dec.layers)
        {
            out.push(format!(
                "node {v}: layer ({l}) outside V_R^1 .. V_R^{}",
                dec.layers
            ));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let a = &dec.assignment;
    for nodes in group_components(tree, a) {
        let layer = a[nodes[0]];
        let name = format!("component of node {} in ({layer})", nodes[0]);
        match layer.phase {
            Phase::Rake => check_rake(tree, dec, &nodes, &name, &mut out),
            Phase::Compress => check_compress(tree, dec, &nodes, &name, &mut out),
        }
    }
    out
}

fn depth_from(tree: &Tree, a: &[Layer], root: usize) -> (usize, usize) {
    let layer = a[root];
    let mut dist = std::collections::HashMap::from([(root, 0usize)]);
    let mut q = VecDeque::from([root]);
    let mut far = (root, 0);
    while let Some(v) = q.pop_front() {
        let d = dist[&v];
        if d > far.1 {
            far = (v, d);
        }
        for &u in tree.neighbors(v) {
            if a[u] == layer && !dist.contains_key(&u) {
                dist.insert(u, d + 1);
                q.push_back(u);
            }
        }
    }
    far
}

fn check_rake(
    tree: &Tree,
    dec: &Decomposition,
    nodes: &[usize],
    name: &str,
    out: &mut Vec<String>,
) {
    let a = &dec.assignment;
    let layer = a[nodes[0]];
    let limit = dec.gamma - 1;
    match tree.kind() {
        ProblemKind::Rooted => {
            for &v in nodes {
                if let Some(&c) = tree.children(v).iter().find(|&&c| a[c] > layer) {
                    out.push(format!(
                        "{name}: node {v} has in-neighbor {c} in higher layer ({})",
                        a[c]
                    ));
                }
            }
            let z = top_of(tree, a, nodes);
            let (far, d) = depth_from(tree, a, z);
            if d > limit {
                out.push(format!(
                    "{name}: node {far} at distance {d} from root {z}, above {limit}"
                ));
            }
        }
        ProblemKind::Unrooted => {
            let mut attached = Vec::new();
            for &v in nodes {
                let hi = tree.neighbors(v).iter().filter(|&&u| a[u] > layer).count();
                if hi > 0 {
                    attached.push((v, hi));
                }
            }
            match attached.as_slice() {
                [] => {
                    let (x, _) = depth_from(tree, a, nodes[0]);
                    let (_, diam) = depth_from(tree, a, x);
                    if diam.div_ceil(2) > limit {
                        out.push(format!("{name}: radius {} above {limit}", diam.div_ceil(2)));
                    }
                }
                [(z, hi)] => {
                    if *hi > 1 {
                        out.push(format!(
                            "{name}: root {z} has {hi} neighbors in higher layers"
                        ));
                    }
                    let (far, d) = depth_from(tree, a, *z);
                    if d > limit {
                        out.push(format!(
                            "{name}: node {far} at distance {d} from root {z}, above {limit}"
                        ));
                    }
                }
                _ => out.push(format!(
                    "{name}: {} nodes have neighbors in higher layers",
                    attached.len()
                )),
            }
        }
    }
}

fn check_compress(
    tree: &Tree,
    dec: &Decomposition,
    nodes: &[usize],
    name: &str,
    out: &mut Vec<String>,
) {
    let a = &dec.assignment;
    let layer = a[nodes[0]];
    let s = nodes.len();
    if s < dec.ell || s > 2 * dec.ell {
        out.push(format!(
            "{name}: path of {s} nodes outside [{}, {}]",
            dec.ell,
            2 * dec.ell
        ));
    }
    let Some((path, attach)) = order_path(tree, a, nodes) else {
        out.push(format!("{name}: not a path"));
        return;
    };
    let Some((u, w)) = attach else {
        out.push(format!(
            "{name}: endpoints lack two higher-layer attachments"
        ));
        return;
    };
    let strictly_higher = |v: usize| a[v] > layer;
    for (j, &v) in path.iter().enumerate() {
        for &x in tree.neighbors(v) {
            if !strictly_higher(x) {
                continue;
            }
            let ok = (j == 0 && x == u) || (j + 1 == s && x == w);
            if !ok {
                out.push(format!(
                    "{name}: node {v} has extra higher-layer neighbor {x}"
                ));
            }
        }
    }
    if tree.kind() == ProblemKind::Rooted {
        for pair in path.windows(2) {
            if tree.parent(pair[1]) != Some(pair[0]) {
                out.push(format!("{name}: not a directed path"));
            }
        }
    }
}

/// `|U_{C,i}^v|` for every `v`: the nodes of the subtree of `v` still connected to
/// `v` after the compress of raw iteration `i` (`i = 0` is the whole subtree).
pub fn surviving_subtree_sizes(tree: &Tree, dec: &Decomposition, i: usize) -> Vec<usize> {
    let n = tree.n();
    let mut order = Vec::with_capacity(n);
    if let Some(r) = tree.root() {
        order.push(r);
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            order.extend_from_slice(tree.children(v));
        }
    }
    let mut size = vec![0usize; n];
    for &v in order.iter().rev() {
        if dec.raw[v].iteration > i {
            size[v] = 1 + tree.children(v).iter().map(|&c| size[c]).sum::<usize>();
        }
    }
    size
}

/// Nodes and iterations where the subtree below a node fails to shrink.
///
/// A node whose parent is still present during the compress of iteration `i`
/// must satisfy `|U_{C,i}^v| · (γ+2ℓ) < |U_{C,i-1}^v| · 2ℓ`. The root of a
/// remaining component may keep an uncompressible indegree-one run on top and
/// is held to `|U_{C,i}^v| · (γ+2ℓ) < |U_{C,i-1}^v| · 2ℓ + γ`. Rooted only.
pub fn shrinkage_violations(tree: &Tree, dec: &Decomposition) -> Vec<String> {
    let mut out = Vec::new();
    if dec.raw.len() != tree.n() || tree.kind() != ProblemKind::Rooted {
        return out;
    }
    let present_at_compress = |u: usize, i: usize| {
        let r = dec.raw[u];
        r.iteration > i || (r.iteration == i && r.phase == Phase::Compress)
    };
    let iterations = dec.raw.iter().map(|r| r.iteration).max().unwrap_or(0);
    let mut before = surviving_subtree_sizes(tree, dec, 0);
    for i in 1..=iterations {
        let after = surviving_subtree_sizes(tree, dec, i);
        for v in 0..tree.n() {
            let (b, a) = (before[v], after[v]);
            if b == 0 {
                continue;
            }
            let slack = match tree.parent(v) {
                Some(p) if present_at_compress(p, i) => 0,
                _ => dec.gamma,
            };
            if a * (dec.gamma + 2 * dec.ell) >= b * 2 * dec.ell + slack {
                out.push(format!("node {v}, iteration {i}: {a} of {b} survive"));
            }
        }
        before = after;
    }
    out
}

/// How `choose_parameters` fixes the free parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamMode {
    /// `L = k`, smallest `γ`.
    Finite(usize),
    /// `γ = 1`, smallest `L`.
    Logarithmic,
}

/// Whether `n · (2ℓ/(γ+2ℓ))^(L−1) ≤ γ`.
pub fn layer_inequality_holds(n: usize, gamma: usize, ell: usize, layers: usize) -> bool {
    let e = (layers.max(1) - 1) as u32;
    let exact = (|| {
        let lhs = (n as u128).checked_mul((2 * ell as u128).checked_pow(e)?)?;
        let rhs = (gamma as u128).checked_mul((gamma as u128 + 2 * ell as u128).checked_pow(e)?)?;
        Some(lhs <= rhs)
    })();
    exact.unwrap_or_else(|| {
        let lhs = (n as f64).ln() + e as f64 * ((2 * ell) as f64).ln();
        let rhs = (gamma as f64).ln() + e as f64 * ((gamma + 2 * ell) as f64).ln();
        lhs <= rhs
    })
}

/// `(γ, L)` satisfying the layer inequality, minimal in the free parameter.
pub fn choose_parameters(n: usize, mode: ParamMode, ell: usize) -> Result<(usize, usize)> {
    if n < 1 || ell < 1 {
        return Err(LclError::InvalidParameters(
            "n and ell must be positive".into(),
        ));
    }
    match mode {
        ParamMode::Finite(k) => {
            if k < 1 {
                return Err(LclError::InvalidParameters("k must be positive".into()));
            }
            let (mut lo, mut hi) = (1usize, n);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if layer_inequality_holds(n, mid, ell, k) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Ok((lo, k))
        }
        ParamMode::Logarithmic => {
            let mut l = 1;
            while !layer_inequality_holds(n, 1, ell, l) {
                l += 1;
            }
            Ok((1, l))
        }
    }
}
