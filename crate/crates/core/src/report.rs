//! Verdict documents and human-readable explanations of a classification.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::automaton::{build_rooted_automaton, build_unrooted_automaton, scc_report, SccReport};
use crate::bitset::BitSet;
use crate::classify::{first_trimmed, restrict_unrooted, Depth, DepthResult, GoodSequence};
use crate::error::Result;
use crate::parser::serialize_problem;
use crate::problem::{Label, Problem};
use crate::solver::required_ell;
use crate::trim::{trim_rooted, trim_unrooted, TrimTrace};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerDoc {
    /// `R,i` or `C,i`.
    pub layer: String,
    pub members: Vec<String>,
    pub flexibility: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceDoc {
    pub length: usize,
    pub stabilized: bool,
    pub ell: usize,
    pub layers: Vec<LayerDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictDocument {
    pub version: String,
    pub problem_digest: String,
    pub kind: String,
    pub depth: serde_json::Value,
    pub class: String,
    pub note: Option<String>,
    pub witness: Option<SequenceDoc>,
    pub sequences: Option<Vec<SequenceDoc>>,
    pub overflow: bool,
    pub timing_ms: Option<f64>,
}

/// SHA-256 of the canonical text form of a problem, hex encoded.
pub fn problem_digest(problem: &Problem) -> String {
    let hash = Sha256::digest(serialize_problem(problem).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn set_members(problem: &Problem, set: &BitSet) -> Vec<String> {
    match problem {
        Problem::Rooted(p) => set
            .iter()
            .map(|l| p.label_name(Label::from(l)).to_string())
            .collect(),
        Problem::Unrooted(p) => set.iter().map(|i| p.render(&p.node_configs[i])).collect(),
    }
}

/// The layers of a good sequence rendered with label names.
pub fn sequence_doc(problem: &Problem, seq: &GoodSequence) -> SequenceDoc {
    let mut layers = Vec::new();
    for (i, t) in seq.trimmed.iter().enumerate() {
        layers.push(LayerDoc {
            layer: format!("R,{}", i + 1),
            members: set_members(problem, t),
            flexibility: None,
        });
        if let Some(f) = seq.flexible.get(i) {
            let members = match problem {
                Problem::Rooted(p) => f
                    .component
                    .labels
                    .iter()
                    .map(|&l| p.label_name(l).to_string())
                    .collect(),
                Problem::Unrooted(p) => f.component.pairs.iter().map(|m| p.render(m)).collect(),
            };
            layers.push(LayerDoc {
                layer: format!("C,{}", i + 1),
                members,
                flexibility: Some(f.flexibility),
            });
        }
    }
    SequenceDoc {
        length: seq.len(),
        stabilized: seq.stabilized,
        ell: required_ell(seq),
        layers,
    }
}

/// Assemble the verdict; `timing_ms` is omitted (null) for stable output.
pub fn verdict_document(
    problem: &Problem,
    result: &DepthResult,
    all_sequences: bool,
    timing_ms: Option<f64>,
) -> VerdictDocument {
    let depth = match result.depth {
        Depth::Unsolvable => serde_json::json!(0),
        Depth::Finite(k) => serde_json::json!(k),
        Depth::Infinite => serde_json::json!("infinity"),
    };
    VerdictDocument {
        version: VERSION.to_string(),
        problem_digest: problem_digest(problem),
        kind: problem.kind().to_string(),
        depth,
        class: result.depth.class(),
        note: result.note().map(str::to_string),
        witness: result.witness.as_ref().map(|w| sequence_doc(problem, w)),
        sequences: all_sequences.then(|| {
            result
                .sequences
                .iter()
                .map(|s| sequence_doc(problem, s))
                .collect()
        }),
        overflow: result.overflow,
        timing_ms,
    }
}

fn render_sequence(out: &mut String, doc: &SequenceDoc) {
    for l in &doc.layers {
        let _ = write!(out, "  {}: {{{}}}", l.layer, l.members.join(", "));
        if let Some(k) = l.flexibility {
            let _ = write!(out, " K={k}");
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "  stabilized: {}",
        if doc.stabilized { "yes" } else { "no" }
    );
    let _ = writeln!(out, "  ell: {}", doc.ell);
}

/// Plain-text form of a verdict document.
pub fn render_verdict(doc: &VerdictDocument) -> String {
    let mut out = String::new();
    let depth = match &doc.depth {
        serde_json::Value::String(s) => s.clone(),
        v => v.to_string(),
    };
    let _ = writeln!(out, "kind: {}", doc.kind);
    let _ = writeln!(out, "depth: {depth}");
    match &doc.note {
        Some(n) => {
            let _ = writeln!(out, "class: {} ({n})", doc.class);
        }
        None => {
            let _ = writeln!(out, "class: {}", doc.class);
        }
    }
    let _ = writeln!(out, "digest: {}", doc.problem_digest);
    if let Some(w) = &doc.witness {
        out.push_str("witness:\n");
        render_sequence(&mut out, w);
    }
    if let Some(all) = &doc.sequences {
        let _ = writeln!(
            out,
            "sequences: {}{}",
            all.len(),
            if doc.overflow { " (truncated)" } else { "" }
        );
        for (i, s) in all.iter().enumerate() {
            let _ = writeln!(out, "sequence {}:", i + 1);
            render_sequence(&mut out, s);
        }
    }
    if let Some(t) = doc.timing_ms {
        let _ = writeln!(out, "time: {t:.3} ms");
    }
    out
}

fn render_trace(problem: &Problem, out: &mut String, trace: &TrimTrace) {
    let names = problem.labels();
    for (i, s) in trace.sigma_sequence.iter().enumerate() {
        let members: Vec<&str> = s.iter().map(|l| names[l].as_str()).collect();
        let _ = writeln!(out, "    sigma_{i} = {{{}}}", members.join(", "));
    }
}

fn render_scc(problem: &Problem, out: &mut String, report: &SccReport) {
    let names = problem.labels();
    if report.components.is_empty() {
        out.push_str("    no cyclic components\n");
    }
    for c in &report.components {
        let members: Vec<String> = if c.component.pairs.is_empty() {
            c.component
                .labels
                .iter()
                .map(|l| names[l.index()].clone())
                .collect()
        } else {
            c.component
                .pairs
                .iter()
                .map(|m| {
                    m.entries()
                        .iter()
                        .map(|l| names[l.index()].as_str())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .map(|s| format!("{{{s}}}"))
                .collect()
        };
        let status = match c.flexibility_index {
            Some(k) => format!("flexible, K={k}"),
            None => "not flexible".to_string(),
        };
        let _ = writeln!(out, "    [{}] {status}", members.join(", "));
    }
}

/// Step-by-step account of how the witness was derived: trim traces and
/// component reports for every layer.
pub fn explain(problem: &Problem, result: &DepthResult) -> Result<String> {
    let mut out = String::new();
    let (first, trace) = match problem {
        Problem::Rooted(p) => trim_rooted(p, &p.all_labels()),
        Problem::Unrooted(p) => trim_unrooted(p, &p.all_configs()),
    };
    debug_assert_eq!(first, first_trimmed(problem));
    out.push_str("R,1 = trim of everything\n  trim trace:\n");
    render_trace(problem, &mut out, &trace);
    let _ = writeln!(
        out,
        "  result: {{{}}}",
        set_members(problem, &first).join(", ")
    );
    let Some(w) = &result.witness else {
        out.push_str("no good sequence: the problem is unsolvable\n");
        return Ok(out);
    };
    for (i, current) in w.trimmed.iter().enumerate() {
        let report = match problem {
            Problem::Rooted(p) => scc_report(&build_rooted_automaton(p, current))?,
            Problem::Unrooted(p) => scc_report(&build_unrooted_automaton(p, current).1)?,
        };
        let _ = writeln!(out, "components of the automaton of R,{}:", i + 1);
        render_scc(problem, &mut out, &report);
        let Some(layer) = w.flexible.get(i) else {
            out.push_str("  no flexible component extends the sequence\n");
            break;
        };
        let doc = sequence_doc(problem, w);
        let chosen = &doc.layers[2 * i + 1];
        let _ = writeln!(
            out,
            "  chosen C,{}: {{{}}}",
            i + 1,
            chosen.members.join(", ")
        );
        let (next, trace) = match problem {
            Problem::Rooted(p) => trim_rooted(p, &layer.labels),
            Problem::Unrooted(p) => {
                trim_unrooted(p, &restrict_unrooted(p, current, &layer.component.pairs))
            }
        };
        let _ = writeln!(out, "R,{} = trim of C,{}\n  trim trace:", i + 2, i + 1);
        render_trace(problem, &mut out, &trace);
        let _ = writeln!(
            out,
            "  result: {{{}}}",
            set_members(problem, &next).join(", ")
        );
        if &next == current {
            out.push_str("  equal to the previous set: the sequence stabilizes\n");
        }
    }
    let _ = writeln!(out, "depth: {}", result.depth);
    Ok(out)
}
