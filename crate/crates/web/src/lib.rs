//! WebAssembly bindings behind the static demo page in `www/`.

use lcl_core::automaton::{build_rooted_automaton, build_unrooted_automaton, scc_report};
use lcl_core::classify::compute_depth;
use lcl_core::decompose::decompose;
use lcl_core::parser::parse_problem;
use lcl_core::problem::{Problem, ProblemKind};
use lcl_core::report::{explain, render_verdict, verdict_document};
use lcl_core::tree::{random_bounded_tree, random_regular_tree, Phase};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn problem(text: &str) -> Result<Problem, String> {
    parse_problem(text)
        .map(|p| p.problem)
        .map_err(|e| e.to_string())
}

/// Verdict as `{ "text": ..., "explain": ..., "document": {...} }`.
pub fn classify_json(text: &str) -> Result<String, String> {
    let p = problem(text)?;
    let result = compute_depth(&p).map_err(|e| e.to_string())?;
    let doc = verdict_document(&p, &result, false, None);
    let out = json!({
        "text": render_verdict(&doc),
        "explain": explain(&p, &result).map_err(|e| e.to_string())?,
        "document": doc,
    });
    Ok(out.to_string())
}

/// Random tree and its decomposition: nodes, edges and per-node layers.
pub fn decomposition_json(
    rooted: bool,
    n: usize,
    degree: usize,
    regular: bool,
    seed: u64,
    gamma: usize,
    ell: usize,
) -> Result<String, String> {
    let kind = if rooted {
        ProblemKind::Rooted
    } else {
        ProblemKind::Unrooted
    };
    let tree = if regular {
        random_regular_tree(n, kind, degree, seed)
    } else {
        random_bounded_tree(n, kind, degree, seed)
    }
    .map_err(|e| e.to_string())?;
    let dec = decompose(&tree, gamma, ell).map_err(|e| e.to_string())?;
    let layers: Vec<_> = dec
        .assignment
        .iter()
        .map(|l| json!({ "phase": if l.phase == Phase::Rake { "R" } else { "C" }, "index": l.index }))
        .collect();
    let out = json!({
        "n": tree.n(),
        "rooted": rooted,
        "root": tree.root(),
        "edges": tree.edges(),
        "layers": layers,
        "count": dec.layers,
        "gamma": dec.gamma,
        "ell": dec.ell,
    });
    Ok(out.to_string())
}

/// Automaton of the full label (rooted) or configuration (unrooted) set.
pub fn automaton_json(text: &str) -> Result<String, String> {
    let p = problem(text)?;
    let a = match &p {
        Problem::Rooted(r) => build_rooted_automaton(r, &r.all_labels()),
        Problem::Unrooted(u) => build_unrooted_automaton(u, &u.all_configs()).1,
    };
    let report = scc_report(&a).map_err(|e| e.to_string())?;
    let labels = p.labels();
    let states: Vec<String> = (0..a.num_states())
        .map(|s| a.render_state(s, labels))
        .collect();
    let edges: Vec<(usize, usize)> = a.edges().collect();
    let components: Vec<_> = report
        .components
        .iter()
        .map(|c| json!({ "states": c.component.states, "flexibility": c.flexibility_index }))
        .collect();
    Ok(json!({ "states": states, "edges": edges, "components": components }).to_string())
}

#[wasm_bindgen]
pub fn classify(text: &str) -> Result<String, JsError> {
    classify_json(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decomposition(
    rooted: bool,
    n: usize,
    degree: usize,
    regular: bool,
    seed: u32,
    gamma: usize,
    ell: usize,
) -> Result<String, JsError> {
    decomposition_json(rooted, n, degree, regular, u64::from(seed), gamma, ell)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn automaton(text: &str) -> Result<String, JsError> {
    automaton_json(text).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTRO: &str = include_str!("../../../problems/intro.lcl");
    const MIS: &str = include_str!("../../../problems/mis-path.lcl");

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn classify_intro() {
        let v = parse(&classify_json(INTRO).unwrap());
        assert_eq!(v["document"]["class"], "O(log n)");
        assert!(v["text"].as_str().unwrap().contains("depth: infinity"));
        assert!(classify_json("rooted delta=2\n").is_err());
    }

    #[test]
    fn decomposition_covers_every_node() {
        let v = parse(&decomposition_json(true, 200, 2, false, 3, 1, 2).unwrap());
        assert_eq!(v["layers"].as_array().unwrap().len(), 200);
        assert_eq!(v["edges"].as_array().unwrap().len(), 199);
        assert!(decomposition_json(false, 0, 3, false, 0, 1, 1).is_err());
    }

    #[test]
    fn mis_automaton() {
        let v = parse(&automaton_json(MIS).unwrap());
        assert_eq!(v["states"].as_array().unwrap().len(), 3);
        assert_eq!(v["edges"].as_array().unwrap().len(), 4);
        assert_eq!(v["components"][0]["flexibility"], 5);
    }
}
