//! Text and JSON formats for problems, trees and labelings.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{LclError, Result};
use crate::labeling::Labeling;
use crate::problem::{
    Label, LabelMultiset, Problem, ProblemKind, RootedConfig, RootedProblem, UnrootedProblem,
};
use crate::tree::{Annotation, Layer, Phase, Role, Tree};

/// A parsed problem plus non-fatal remarks (duplicate configurations).
#[derive(Clone, Debug)]
pub struct ParsedProblem {
    pub problem: Problem,
    pub warnings: Vec<String>,
}

fn syntax(line: usize, message: impl Into<String>) -> LclError {
    LclError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | ':' | '#' | '=' | '{' | '}'))
}

/// `key=value` pairs separated by whitespace, tolerating spaces around `=`.
fn key_values(s: &str) -> Vec<(String, String)> {
    let joined = s.replace(" =", "=").replace("= ", "=");
    joined
        .split_whitespace()
        .filter_map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
        })
        .collect()
}

struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Label>,
}

impl Alphabet {
    fn new(names: Vec<String>, line: usize) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(syntax(line, format!("invalid label name `{n}`")));
            }
            if index.insert(n.clone(), Label::from(i)).is_some() {
                return Err(syntax(line, format!("duplicate label name `{n}`")));
            }
        }
        Ok(Alphabet { names, index })
    }

    fn get(&self, name: &str) -> Result<Label> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LclError::UnknownLabel(name.to_string()))
    }

    fn multiset<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<LabelMultiset> {
        Ok(LabelMultiset::new(
            names
                .into_iter()
                .map(|n| self.get(n))
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

/// Parse the line-oriented problem format.
pub fn parse_problem(text: &str) -> Result<ParsedProblem> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "empty document"))?;
    let mut words = header.splitn(2, char::is_whitespace);
    let kind = match words.next() {
        Some("rooted") => ProblemKind::Rooted,
        Some("unrooted") => ProblemKind::Unrooted,
        other => {
            return Err(syntax(
                hl,
                format!(
                    "expected `rooted` or `unrooted`, found `{}`",
                    other.unwrap_or("")
                ),
            ))
        }
    };
    let delta = key_values(words.next().unwrap_or(""))
        .into_iter()
        .find(|(k, _)| k == "delta")
        .ok_or_else(|| syntax(hl, "missing delta=<d>"))?
        .1
        .parse::<usize>()
        .map_err(|e| syntax(hl, format!("bad delta: {e}")))?;

    let (ll, labels_line) = lines
        .next()
        .ok_or_else(|| syntax(hl + 1, "missing labels line"))?;
    let rest = labels_line
        .strip_prefix("labels")
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| syntax(ll, "expected `labels = <name>,...`"))?;
    let names: Vec<String> = rest
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let alphabet = Alphabet::new(names, ll)?;

    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    let mut note_duplicate = |line: usize, key: String| {
        if !seen.insert(key.clone()) {
            warnings.push(format!(
                "line {line}: duplicate configuration `{key}` ignored"
            ));
        }
    };

    let problem = match kind {
        ProblemKind::Rooted => {
            let mut configs = Vec::new();
            for (ln, line) in lines {
                let (head, body) = line
                    .split_once(':')
                    .ok_or_else(|| syntax(ln, "expected `<label> : <children>`"))?;
                let label = alphabet.get(head.trim())?;
                let kids: Vec<&str> = body.split_whitespace().collect();
                if kids.len() != delta {
                    return Err(LclError::ArityMismatch {
                        line: ln,
                        expected: delta,
                        found: kids.len(),
                    });
                }
                let children = alphabet.multiset(kids)?;
                note_duplicate(ln, format!("{:?}:{:?}", label, children));
                configs.push(RootedConfig { label, children });
            }
            Problem::Rooted(RootedProblem::new(delta, alphabet.names, configs)?)
        }
        ProblemKind::Unrooted => {
            let mut node_configs = Vec::new();
            let mut edge_configs = Vec::new();
            for (ln, line) in lines {
                let (head, body) = line
                    .split_once(':')
                    .ok_or_else(|| syntax(ln, "expected `node : ...` or `edge : ...`"))?;
                let items: Vec<&str> = body.split_whitespace().collect();
                let (target, arity, tag) = match head.trim() {
                    "node" => (&mut node_configs, delta, "node"),
                    "edge" => (&mut edge_configs, 2, "edge"),
                    other => return Err(syntax(ln, format!("unknown line kind `{other}`"))),
                };
                if items.len() != arity {
                    return Err(LclError::ArityMismatch {
                        line: ln,
                        expected: arity,
                        found: items.len(),
                    });
                }
                let m = alphabet.multiset(items)?;
                note_duplicate(ln, format!("{tag}{:?}", m));
                target.push(m);
            }
            Problem::Unrooted(UnrootedProblem::new(
                delta,
                alphabet.names,
                node_configs,
                edge_configs,
            )?)
        }
    };
    Ok(ParsedProblem { problem, warnings })
}

fn names_of(labels: &[String], m: &LabelMultiset) -> Vec<String> {
    m.entries()
        .iter()
        .map(|l| labels[l.index()].clone())
        .collect()
}

/// Canonical text form; `parse_problem(serialize_problem(p))` reproduces `p`.
pub fn serialize_problem(problem: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} delta={}", problem.kind(), problem.delta());
    let _ = writeln!(out, "labels = {}", problem.labels().join(","));
    match problem {
        Problem::Rooted(p) => {
            for c in &p.configs {
                let _ = writeln!(
                    out,
                    "{} : {}",
                    p.label_name(c.label),
                    names_of(&p.labels, &c.children).join(" ")
                );
            }
        }
        Problem::Unrooted(p) => {
            for c in &p.node_configs {
                let _ = writeln!(out, "node : {}", names_of(&p.labels, c).join(" "));
            }
            for c in &p.edge_configs {
                let _ = writeln!(out, "edge : {}", names_of(&p.labels, c).join(" "));
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct RootedConfigJson {
    label: String,
    children: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ProblemJson {
    Rooted {
        delta: usize,
        labels: Vec<String>,
        configs: Vec<RootedConfigJson>,
    },
    Unrooted {
        delta: usize,
        labels: Vec<String>,
        node_configs: Vec<Vec<String>>,
        edge_configs: Vec<Vec<String>>,
    },
}

/// Parse the JSON problem format.
pub fn parse_problem_json(text: &str) -> Result<ParsedProblem> {
    let doc: ProblemJson =
        serde_json::from_str(text).map_err(|e| syntax(e.line(), e.to_string()))?;
    let mut warnings = Vec::new();
    let problem = match doc {
        ProblemJson::Rooted {
            delta,
            labels,
            configs,
        } => {
            let alphabet = Alphabet::new(labels, 0)?;
            let mut out = Vec::new();
            for (i, c) in configs.iter().enumerate() {
                if c.children.len() != delta {
                    return Err(LclError::InvalidArity {
                        expected: delta,
                        found: c.children.len(),
                    });
                }
                let cfg = RootedConfig {
                    label: alphabet.get(&c.label)?,
                    children: alphabet.multiset(c.children.iter().map(String::as_str))?,
                };
                if out.contains(&cfg) {
                    warnings.push(format!("configuration #{i} is a duplicate and was ignored"));
                }
                out.push(cfg);
            }
            Problem::Rooted(RootedProblem::new(delta, alphabet.names, out)?)
        }
        ProblemJson::Unrooted {
            delta,
            labels,
            node_configs,
            edge_configs,
        } => {
            let alphabet = Alphabet::new(labels, 0)?;
            let mut convert =
                |list: &[Vec<String>], arity: usize, tag: &str| -> Result<Vec<LabelMultiset>> {
                    let mut out = Vec::new();
                    for (i, c) in list.iter().enumerate() {
                        if c.len() != arity {
                            return Err(LclError::InvalidArity {
                                expected: arity,
                                found: c.len(),
                            });
                        }
                        let m = alphabet.multiset(c.iter().map(String::as_str))?;
                        if out.contains(&m) {
                            warnings.push(format!(
                                "{tag} configuration #{i} is a duplicate and was ignored"
                            ));
                        }
                        out.push(m);
                    }
                    Ok(out)
                };
            let nodes = convert(&node_configs, delta, "node")?;
            let edges = convert(&edge_configs, 2, "edge")?;
            Problem::Unrooted(UnrootedProblem::new(delta, alphabet.names, nodes, edges)?)
        }
    };
    Ok(ParsedProblem { problem, warnings })
}

pub fn problem_to_json(problem: &Problem) -> String {
    let doc = match problem {
        Problem::Rooted(p) => ProblemJson::Rooted {
            delta: p.delta,
            labels: p.labels.clone(),
            configs: p
                .configs
                .iter()
                .map(|c| RootedConfigJson {
                    label: p.label_name(c.label).to_string(),
                    children: names_of(&p.labels, &c.children),
                })
                .collect(),
        },
        Problem::Unrooted(p) => ProblemJson::Unrooted {
            delta: p.delta,
            labels: p.labels.clone(),
            node_configs: p
                .node_configs
                .iter()
                .map(|c| names_of(&p.labels, c))
                .collect(),
            edge_configs: p
                .edge_configs
                .iter()
                .map(|c| names_of(&p.labels, c))
                .collect(),
        },
    };
    serde_json::to_string_pretty(&doc).expect("problem serializes")
}

/// Parse by file name: `.json` selects the JSON format, anything else the text format.
pub fn parse_problem_named(file_name: &str, text: &str) -> Result<ParsedProblem> {
    if file_name.to_ascii_lowercase().ends_with(".json") {
        parse_problem_json(text)
    } else {
        parse_problem(text)
    }
}

/// Parse the tree format.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "empty document"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("tree") {
        return Err(syntax(hl, "expected `tree rooted|unrooted n=<count>`"));
    }
    let kind = match words.next() {
        Some("rooted") => ProblemKind::Rooted,
        Some("unrooted") => ProblemKind::Unrooted,
        other => {
            return Err(syntax(
                hl,
                format!("unknown tree kind `{}`", other.unwrap_or("")),
            ))
        }
    };
    let rest: Vec<&str> = words.collect();
    let kv = key_values(&rest.join(" "));
    let num = |key: &str| -> Result<Option<usize>> {
        kv.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| {
                v.parse::<usize>()
                    .map_err(|e| syntax(hl, format!("bad {key}: {e}")))
            })
            .transpose()
    };
    let n = num("n")?.ok_or_else(|| syntax(hl, "missing n=<count>"))?;
    let bound = num("delta")?;

    let mut edges = Vec::new();
    let mut annotations = Vec::new();
    let arrow = match kind {
        ProblemKind::Rooted => "->",
        ProblemKind::Unrooted => "--",
    };
    let node_id = |s: &str, ln: usize| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| syntax(ln, format!("bad node id `{}`", s.trim())))
    };
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("node ") {
            let mut it = rest.split_whitespace();
            let v = node_id(it.next().unwrap_or(""), ln)?;
            let mut layer = None;
            let mut role = None;
            for tok in it {
                match tok.split_once('=') {
                    Some(("layer", val)) => {
                        layer = Some(
                            parse_layer(val)
                                .ok_or_else(|| syntax(ln, format!("bad layer `{val}`")))?,
                        )
                    }
                    Some(("role", val)) => {
                        role = Some(match val {
                            "front" => Role::Front,
                            "central" => Role::Central,
                            "rear" => Role::Rear,
                            _ => return Err(syntax(ln, format!("bad role `{val}`"))),
                        })
                    }
                    _ => return Err(syntax(ln, format!("bad annotation `{tok}`"))),
                }
            }
            let layer = layer.ok_or_else(|| syntax(ln, "annotation without layer="))?;
            annotations.push((ln, v, Annotation { layer, role }));
            continue;
        }
        let (a, b) = line
            .split_once(arrow)
            .ok_or_else(|| syntax(ln, format!("expected `<u> {arrow} <v>`")))?;
        edges.push((node_id(a, ln)?, node_id(b, ln)?));
    }
    let mut tree = Tree::from_edges(kind, n, &edges, bound)?;
    for (ln, v, a) in annotations {
        if v >= n {
            return Err(syntax(
                ln,
                format!("annotation for node {v} outside 0..{n}"),
            ));
        }
        tree.set_annotation(v, Some(a));
    }
    Ok(tree)
}

fn parse_layer(s: &str) -> Option<Layer> {
    let (p, i) = s.split_once(',')?;
    let phase = match p {
        "R" => Phase::Rake,
        "C" => Phase::Compress,
        _ => return None,
    };
    let index = i.parse().ok().filter(|&i| i >= 1)?;
    Some(Layer { phase, index })
}

pub fn serialize_tree(tree: &Tree) -> String {
    let mut out = String::new();
    let _ = write!(out, "tree {} n={}", tree.kind(), tree.n());
    if let Some(d) = tree.degree_bound() {
        let _ = write!(out, " delta={d}");
    }
    out.push('\n');
    let arrow = match tree.kind() {
        ProblemKind::Rooted => "->",
        ProblemKind::Unrooted => "--",
    };
    for (u, v) in tree.edges() {
        let _ = writeln!(out, "{u} {arrow} {v}");
    }
    for v in 0..tree.n() {
        if let Some(a) = tree.annotation(v) {
            let _ = write!(out, "node {v} layer={}", a.layer);
            if let Some(r) = a.role {
                let _ = write!(out, " role={}", r.as_str());
            }
            out.push('\n');
        }
    }
    out
}

/// Rooted: `<node> <label>`; unrooted: `<node> <neighbor> <label>`; ordered by ids.
pub fn serialize_labeling(problem: &Problem, tree: &Tree, labeling: &Labeling) -> Result<String> {
    if !labeling.is_complete() {
        return Err(LclError::IncompleteLabeling(
            "cannot serialize a partial labeling".into(),
        ));
    }
    if labeling.kind() != tree.kind() {
        return Err(LclError::KindMismatch(
            "labeling and tree kinds differ".into(),
        ));
    }
    let names = problem.labels();
    let mut out = String::new();
    match labeling {
        Labeling::Rooted(l) => {
            for (v, lab) in l.iter().enumerate() {
                let _ = writeln!(out, "{v} {}", names[lab.expect("complete").index()]);
            }
        }
        Labeling::Unrooted(h) => {
            for (v, row) in h.iter().enumerate() {
                for (i, lab) in row.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{v} {} {}",
                        tree.neighbors(v)[i],
                        names[lab.expect("complete").index()]
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Parse a labeling for `tree`; missing entries are an error.
pub fn parse_labeling(problem: &Problem, tree: &Tree, text: &str) -> Result<Labeling> {
    let mut labeling = Labeling::empty(tree);
    let label = |s: &str| {
        problem
            .label_index(s)
            .ok_or_else(|| LclError::UnknownLabel(s.to_string()))
    };
    for (ln, line) in content_lines(text) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let id = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .ok()
                .filter(|&v| v < tree.n())
                .ok_or_else(|| syntax(ln, format!("bad node id `{s}`")))
        };
        match (&mut labeling, parts.as_slice()) {
            (Labeling::Rooted(l), [v, name]) => l[id(v)?] = Some(label(name)?),
            (Labeling::Unrooted(_), [v, u, name]) => {
                let (v, u) = (id(v)?, id(u)?);
                if tree.position(v, u).is_none() {
                    return Err(syntax(ln, format!("{v} and {u} are not adjacent")));
                }
                let l = label(name)?;
                labeling.set_half_edge(tree, v, u, l);
            }
            _ => return Err(syntax(ln, "wrong number of fields")),
        }
    }
    if !labeling.is_complete() {
        return Err(LclError::IncompleteLabeling(
            "labeling file does not cover every node or half-edge".into(),
        ));
    }
    Ok(labeling)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intro_problem() {
        let p = parse_problem("rooted delta=2\nlabels=1,2\n1 : 1 2\n2 : 1 1\n")
            .unwrap()
            .problem;
        let Problem::Rooted(r) = &p else { panic!() };
        assert_eq!(r.delta, 2);
        assert_eq!(r.configs.len(), 2);
        assert_eq!(r.configs[0].children, LabelMultiset::from_ids(&[0, 1]));
        assert_eq!(r.configs[1].children, LabelMultiset::from_ids(&[0, 0]));
    }

    #[test]
    fn single_label_unrooted() {
        let p = parse_problem("unrooted delta=3\nlabels=a\nnode : a a a\nedge : a a\n")
            .unwrap()
            .problem;
        let Problem::Unrooted(u) = &p else { panic!() };
        assert_eq!((u.node_configs.len(), u.edge_configs.len()), (1, 1));
    }

    #[test]
    fn arity_and_label_errors() {
        assert!(matches!(
            parse_problem("rooted delta=2\nlabels=1\n1 : 1\n"),
            Err(LclError::ArityMismatch {
                line: 3,
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_problem("rooted delta=1\nlabels=1\n1 : 7\n"),
            Err(LclError::UnknownLabel(_))
        ));
        assert!(matches!(
            parse_problem("sideways delta=1\n"),
            Err(LclError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn duplicates_warn() {
        let r =
            parse_problem("rooted delta=2 # comment\n\nlabels = a, b\na : a b\na : b a\n").unwrap();
        assert_eq!(r.warnings.len(), 1);
        let Problem::Rooted(p) = r.problem else {
            panic!()
        };
        assert_eq!(p.configs.len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let p =
            parse_problem("unrooted delta=3\nlabels=I,O\nnode : I I O\nnode : O O O\nedge : I O\n")
                .unwrap()
                .problem;
        let back = parse_problem_json(&problem_to_json(&p)).unwrap().problem;
        assert_eq!(back, p);
        assert_eq!(parse_problem(&serialize_problem(&p)).unwrap().problem, p);
    }

    #[test]
    fn trees() {
        let t = parse_tree("tree rooted n=3\n1 -> 0\n2->0\n").unwrap();
        assert_eq!(t.root(), Some(0));
        assert!(parse_tree("tree unrooted n=2\n0 -- 1\n1 -- 0\n").is_err());
        let p = parse_tree("tree unrooted n=4\n0--1\n1--2\n2--3\nnode 1 layer=C,1 role=front\n")
            .unwrap();
        assert_eq!(p.degree(1), 2);
        assert_eq!(parse_tree(&serialize_tree(&p)).unwrap(), p);
    }

    #[test]
    fn labeling_text() {
        let prob = parse_problem("unrooted delta=2\nlabels=a,b\nnode : a b\nedge : a b\n")
            .unwrap()
            .problem;
        let tree = parse_tree("tree unrooted n=2\n0 -- 1\n").unwrap();
        let l = parse_labeling(&prob, &tree, "0 1 a\n1 0 b\n").unwrap();
        assert_eq!(
            serialize_labeling(&prob, &tree, &l).unwrap(),
            "0 1 a\n1 0 b\n"
        );
        let rp = parse_problem("rooted delta=1\nlabels=a\na : a\n")
            .unwrap()
            .problem;
        let rt = parse_tree("tree rooted n=1\n").unwrap();
        let rl = parse_labeling(&rp, &rt, "0 a").unwrap();
        assert_eq!(serialize_labeling(&rp, &rt, &rl).unwrap(), "0 a\n");
        assert!(parse_labeling(&prob, &tree, "0 1 a\n").is_err());
    }
}
