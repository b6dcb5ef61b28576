mod gen;

use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gen::{GenSpec, Generator};
use lcl_core::automaton::{
    build_rooted_automaton, build_unrooted_automaton, scc_report, to_dot, FlexAutomaton,
};
use lcl_core::bitset::BitSet;
use lcl_core::classify::{compute_depth, Depth};
use lcl_core::decompose::{decompose, validate_decomposition};
use lcl_core::labeling::validate_labeling;
use lcl_core::parser::{
    parse_labeling, parse_problem_named, parse_tree, serialize_labeling, serialize_tree,
};
use lcl_core::problem::{LabelMultiset, Problem, ProblemKind};
use lcl_core::report::{explain, render_verdict, verdict_document};
use lcl_core::solver::solve_with_certificate;
use lcl_core::tree::Tree;

const EXIT_REJECTED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lcl",
    version,
    about = "Classify and solve LCL problems on regular trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the depth and complexity class of a problem.
    Classify {
        problem: PathBuf,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
        /// Include every maximal good sequence.
        #[arg(long)]
        all_sequences: bool,
        /// Show trim traces and component reports layer by layer.
        #[arg(long)]
        explain: bool,
        /// Omit the timing field so the output is reproducible.
        #[arg(long)]
        stable: bool,
    },
    /// Label a tree with the certified algorithm.
    Solve {
        problem: PathBuf,
        /// Tree file; `-` reads standard input.
        #[arg(required_unless_present = "gen", conflicts_with = "gen")]
        tree: Option<PathBuf>,
        /// Generate the tree instead: `<complete|hairy|random|lowerbound>[:key=value,...]`.
        #[arg(long)]
        gen: Option<String>,
        /// Write the labeling here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a labeling against a problem.
    Verify {
        problem: PathBuf,
        tree: PathBuf,
        labeling: PathBuf,
    },
    /// Print a generated tree.
    Gen(GenArgs),
    /// Show the automaton of a label or configuration set.
    Automaton {
        problem: PathBuf,
        /// `all`, `R,<i>` from the witness sequence, rooted label names `a,b`,
        /// or unrooted configurations `a a b;a b b`.
        #[arg(long, default_value = "all")]
        set: String,
        /// Print Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Print a rake-and-compress decomposition of a tree.
    Decompose {
        tree: PathBuf,
        #[arg(long, default_value_t = 1)]
        gamma: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    generator: Generator,
    /// rooted or unrooted.
    #[arg(long, default_value = "unrooted")]
    kind: String,
    /// Δ (unrooted) or δ (rooted).
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Node count for random trees.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Height for complete trees.
    #[arg(long, default_value_t = 3)]
    height: usize,
    /// Complete unrooted tree with a full-degree root.
    #[arg(long)]
    starred: bool,
    /// Random tree whose internal nodes all have full degree.
    #[arg(long)]
    regular: bool,
    /// Hairy path length, or lower-bound layer count.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Lower-bound front/rear length.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Alphabet size the lower-bound instance is built for.
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long)]
    gamma_hat: Option<usize>,
    /// Compress path length of lower-bound instances.
    #[arg(long)]
    path_len: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_kind(s: &str) -> Result<ProblemKind> {
    match s {
        "rooted" => Ok(ProblemKind::Rooted),
        "unrooted" => Ok(ProblemKind::Unrooted),
        _ => bail!("kind must be rooted or unrooted, got `{s}`"),
    }
}

fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_problem(path: &Path) -> Result<Problem> {
    let text = read(path)?;
    let parsed = parse_problem_named(&path.to_string_lossy(), &text)
        .with_context(|| format!("parsing {}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.problem)
}

fn load_tree(path: &Path) -> Result<Tree> {
    parse_tree(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn color_enabled() -> bool {
    std::env::var("LCL_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn classify(
    problem_path: &Path,
    json: bool,
    all_sequences: bool,
    explain_it: bool,
    stable: bool,
) -> Result<ExitCode> {
    let problem = load_problem(problem_path)?;
    let start = Instant::now();
    let result = compute_depth(&problem)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let doc = verdict_document(
        &problem,
        &result,
        all_sequences,
        (!stable).then_some(elapsed),
    );
    let mut out = std::io::stdout().lock();
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        let text = render_verdict(&doc);
        for line in text.lines() {
            match line.strip_prefix("class: ") {
                Some(rest) => writeln!(out, "class: {}", paint(rest, "1"))?,
                None => writeln!(out, "{line}")?,
            }
        }
    }
    if explain_it {
        let text = explain(&problem, &result)?;
        if json {
            eprint!("{text}");
        } else {
            write!(out, "{text}")?;
        }
    }
    Ok(if result.depth == Depth::Unsolvable {
        ExitCode::from(EXIT_REJECTED)
    } else {
        ExitCode::SUCCESS
    })
}

fn solve(
    problem_path: &Path,
    tree: Option<&Path>,
    gen_spec: Option<&str>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let problem = load_problem(problem_path)?;
    let tree = match (tree, gen_spec) {
        (Some(path), _) => load_tree(path)?,
        (None, Some(spec)) => {
            let mut base = GenSpec::new(Generator::Random, problem.kind(), problem.delta());
            base.alphabet = problem.labels().len();
            GenSpec::parse(spec, base)?.build()?
        }
        (None, None) => bail!("give a tree file or --gen"),
    };
    let result = compute_depth(&problem)?;
    let Some(witness) = result.witness else {
        eprintln!("unsolvable: no good sequence exists");
        return Ok(ExitCode::from(EXIT_REJECTED));
    };
    let sol = solve_with_certificate(&problem, &tree, &witness)?;
    let text = serialize_labeling(&problem, &tree, &sol.labeling)?;
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    eprintln!(
        "solved n={} class={} gamma={} ell={} layers={} rounds={}",
        tree.n(),
        result.depth.class(),
        sol.gamma,
        sol.ell,
        sol.decomposition.layers,
        sol.rounds
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(problem_path: &Path, tree_path: &Path, labeling_path: &Path) -> Result<ExitCode> {
    let problem = load_problem(problem_path)?;
    let tree = load_tree(tree_path)?;
    let labeling = parse_labeling(&problem, &tree, &read(labeling_path)?)
        .with_context(|| format!("parsing {}", labeling_path.display()))?;
    let violations = validate_labeling(&problem, &tree, &labeling)?;
    if violations.is_empty() {
        println!("{}", paint("ok", "32"));
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        println!("{v}");
    }
    eprintln!("{} {}", violations.len(), paint("violations", "31"));
    Ok(ExitCode::from(EXIT_REJECTED))
}

fn generate(args: &GenArgs) -> Result<ExitCode> {
    let spec = GenSpec {
        generator: args.generator,
        kind: parse_kind(&args.kind)?,
        degree: args.degree,
        n: args.n,
        height: args.height,
        starred: args.starred,
        regular: args.regular,
        k: args.k,
        t: args.t,
        alphabet: args.alphabet,
        gamma_hat: args.gamma_hat,
        path_len: args.path_len,
        seed: args.seed,
    };
    print!("{}", serialize_tree(&spec.build()?));
    Ok(ExitCode::SUCCESS)
}

fn selected_set(problem: &Problem, spec: &str) -> Result<BitSet> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(match problem {
            Problem::Rooted(p) => p.all_labels(),
            Problem::Unrooted(p) => p.all_configs(),
        });
    }
    if let Some(i) = spec.strip_prefix("R,") {
        let i: usize = i.parse().with_context(|| format!("bad layer `{spec}`"))?;
        let result = compute_depth(problem)?;
        let w = result.witness.context("the problem has no good sequence")?;
        if i < 1 || i > w.len() {
            bail!("the witness has layers R,1..R,{}", w.len());
        }
        return Ok(w.trimmed[i - 1].clone());
    }
    let label = |name: &str| {
        problem
            .label_index(name)
            .with_context(|| format!("unknown label `{name}`"))
    };
    match problem {
        Problem::Rooted(p) => {
            let ids = spec
                .split(',')
                .map(|s| label(s.trim()).map(|l| l.index()))
                .collect::<Result<Vec<_>>>()?;
            Ok(BitSet::from_indices(p.labels.len(), ids))
        }
        Problem::Unrooted(p) => {
            let mut ids = Vec::new();
            for cfg in spec.split(';') {
                let labels = cfg
                    .split_whitespace()
                    .map(label)
                    .collect::<Result<Vec<_>>>()?;
                let m = LabelMultiset::new(labels);
                let i = p
                    .node_configs
                    .iter()
                    .position(|c| *c == m)
                    .with_context(|| format!("`{}` is not a node configuration", cfg.trim()))?;
                ids.push(i);
            }
            Ok(BitSet::from_indices(p.node_configs.len(), ids))
        }
    }
}

fn automaton(problem_path: &Path, set: &str, dot: bool) -> Result<ExitCode> {
    let problem = load_problem(problem_path)?;
    let set = selected_set(&problem, set)?;
    let a: FlexAutomaton = match &problem {
        Problem::Rooted(p) => build_rooted_automaton(p, &set),
        Problem::Unrooted(p) => build_unrooted_automaton(p, &set).1,
    };
    let report = scc_report(&a)?;
    let labels = problem.labels();
    if dot {
        print!("{}", to_dot(&a, labels, &report));
        return Ok(ExitCode::SUCCESS);
    }
    println!("states: {}", a.num_states());
    println!("edges: {}", a.num_edges());
    for (a_state, b_state) in a.edges() {
        println!(
            "  {} -> {}",
            a.render_state(a_state, labels),
            a.render_state(b_state, labels)
        );
    }
    for c in &report.components {
        let members: Vec<String> = c
            .component
            .states
            .iter()
            .map(|&s| a.render_state(s, labels))
            .collect();
        match c.flexibility_index {
            Some(k) => println!("component [{}] flexible K={k}", members.join(", ")),
            None => println!("component [{}] not flexible", members.join(", ")),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn decomposition(tree_path: &Path, gamma: usize, ell: usize) -> Result<ExitCode> {
    let tree = load_tree(tree_path)?;
    let dec = decompose(&tree, gamma, ell)?;
    print!("{}", dec.dump());
    let problems = validate_decomposition(&tree, &dec);
    for p in &problems {
        eprintln!("{p}");
    }
    eprintln!("layers={} components={}", dec.layers, dec.components.len());
    Ok(if problems.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REJECTED)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify {
            problem,
            json,
            all_sequences,
            explain,
            stable,
        } => classify(&problem, json, all_sequences, explain, stable),
        Command::Solve {
            problem,
            tree,
            gen,
            out,
        } => solve(&problem, tree.as_deref(), gen.as_deref(), out.as_deref()),
        Command::Verify {
            problem,
            tree,
            labeling,
        } => verify(&problem, &tree, &labeling),
        Command::Gen(args) => generate(&args),
        Command::Automaton { problem, set, dot } => automaton(&problem, &set, dot),
        Command::Decompose { tree, gamma, ell } => decomposition(&tree, gamma, ell),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
