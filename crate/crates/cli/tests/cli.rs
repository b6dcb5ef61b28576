use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
}

fn lcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcl"))
        .args(args)
        .env("LCL_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_exit_codes() {
    let o = lcl(&["classify", path(&problem("intro.lcl"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class: O(log n)"));

    let o = lcl(&["classify", path(&problem("empty.lcl"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("unsolvable"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lcl");
    std::fs::write(&bad, "rooted delta=2\nlabels = a\na : a\n").unwrap();
    assert_eq!(lcl(&["classify", path(&bad)]).status.code(), Some(1));
    assert_eq!(
        lcl(&["classify", "/nonexistent.lcl"]).status.code(),
        Some(1)
    );
    assert_eq!(lcl(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn json_is_stable() {
    let file = problem("rooted-two-coloring.lcl");
    let args = [
        "classify",
        path(&file),
        "--json",
        "--stable",
        "--all-sequences",
    ];
    let a = lcl(&args);
    let b = lcl(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["class"], "Θ(n)");
    assert_eq!(doc["depth"], 1);
    assert!(doc["timing_ms"].is_null());
    assert_eq!(doc["sequences"].as_array().unwrap().len(), 1);

    let sinkless = lcl(&[
        "classify",
        path(&problem("sinkless-orientation.lcl")),
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&sinkless.stdout).unwrap();
    assert_eq!(doc["depth"], "infinity");
    assert!(doc["timing_ms"].is_number());
}

#[test]
fn explain_shows_the_derivation() {
    let o = lcl(&[
        "classify",
        path(&problem("intro.lcl")),
        "--explain",
        "--stable",
    ]);
    let text = stdout(&o);
    assert!(text.contains("trim trace"));
    assert!(text.contains("stabilizes"));
    assert!(!text.contains('\x1b'));
}

#[test]
fn classify_solve_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("intro.lcl", "rooted", 2),
        ("rooted-two-coloring.lcl", "rooted", 2),
        ("mis-path.lcl", "rooted", 1),
        ("unrooted-two-coloring.lcl", "unrooted", 3),
        ("sinkless-orientation.lcl", "unrooted", 3),
    ];
    for (name, kind, degree) in cases {
        let p = problem(name);
        let degree = degree.to_string();
        let generators: Vec<Vec<&str>> = vec![
            vec!["random", "--n", "500", "--seed", "4"],
            vec!["random", "--n", "2000", "--regular", "--seed", "5"],
            vec!["complete", "--height", "4"],
        ];
        for (i, g) in generators.iter().enumerate() {
            let mut args = vec!["gen"];
            args.extend(g);
            args.extend(["--kind", kind, "--degree", &degree]);
            let tree = lcl(&args);
            assert_eq!(tree.status.code(), Some(0), "{name} {g:?}");
            let tree_file = dir.path().join(format!("{name}-{i}.tree"));
            std::fs::write(&tree_file, &tree.stdout).unwrap();
            let out = dir.path().join(format!("{name}-{i}.lab"));
            let s = lcl(&["solve", path(&p), path(&tree_file), "--out", path(&out)]);
            assert_eq!(
                s.status.code(),
                Some(0),
                "{name}: {}",
                String::from_utf8_lossy(&s.stderr)
            );
            let v = lcl(&["verify", path(&p), path(&tree_file), path(&out)]);
            assert_eq!(v.status.code(), Some(0), "{name}: {}", stdout(&v));
        }
    }
}

#[test]
fn solve_with_generated_tree_and_unsolvable_problem() {
    let o = lcl(&[
        "solve",
        path(&problem("sinkless-orientation.lcl")),
        "--gen",
        "random:n=30,seed=1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2 * 29);

    let o = lcl(&[
        "solve",
        path(&problem("empty.lcl")),
        "--gen",
        "complete:height=2",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = lcl(&[
        "solve",
        path(&problem("intro.lcl")),
        "--gen",
        "random:degree=3,n=50",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.tree");
    std::fs::write(&tree, "tree rooted n=3\n1 -> 0\n2 -> 0\n").unwrap();
    let good = dir.path().join("good.lab");
    std::fs::write(&good, "0 1\n1 1\n2 2\n").unwrap();
    let bad = dir.path().join("bad.lab");
    std::fs::write(&bad, "0 2\n1 1\n2 2\n").unwrap();
    let p = problem("intro.lcl");
    let o = lcl(&["verify", path(&p), path(&tree), path(&good)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "ok");
    let o = lcl(&["verify", path(&p), path(&tree), path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let report = stdout(&o);
    assert_eq!(report.lines().count(), 1);
    assert!(report.starts_with("node 0"));
}

#[test]
fn mis_automaton_dot() {
    let o = lcl(&["automaton", path(&problem("mis-path.lcl")), "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("[label=").count(), 3);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert!(dot.contains("flexible K=5"));

    let o = lcl(&["automaton", path(&problem("intro.lcl")), "--set", "1"]);
    assert!(stdout(&o).contains("states: 1"));
    let o = lcl(&[
        "automaton",
        path(&problem("sinkless-orientation.lcl")),
        "--set",
        "R,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = lcl(&["automaton", path(&problem("intro.lcl")), "--set", "x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn generators() {
    let o = lcl(&[
        "gen",
        "complete",
        "--kind",
        "unrooted",
        "--degree",
        "3",
        "--height",
        "2",
        "--starred",
    ]);
    assert!(stdout(&o).starts_with("tree unrooted n=10"));
    let o = lcl(&["gen", "hairy", "--k", "9"]);
    assert!(stdout(&o).starts_with("tree unrooted n=22"));
    let o = lcl(&["gen", "lowerbound", "--gamma-hat", "2", "--path-len", "5"]);
    let text = stdout(&o);
    assert!(text.starts_with("tree unrooted n=574"));
    assert!(text.contains("role=central"));
    let a = lcl(&["gen", "random", "--n", "40", "--seed", "9"]);
    let b = lcl(&["gen", "random", "--n", "40", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        lcl(&["gen", "random", "--kind", "sideways"]).status.code(),
        Some(1)
    );
}

#[test]
fn decompose_dump() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("star.tree");
    std::fs::write(&tree, "tree unrooted n=4\n0 -- 1\n0 -- 2\n0 -- 3\n").unwrap();
    let o = lcl(&["decompose", path(&tree), "--gamma", "1", "--ell", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(
        lines[0].split_whitespace().take(3).collect::<Vec<_>>(),
        ["0", "R", "2"]
    );
    assert!(lines[1..]
        .iter()
        .all(|l| l.split_whitespace().nth(2) == Some("1")));
}
