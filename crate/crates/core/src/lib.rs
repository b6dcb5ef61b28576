//! Classification and solving of locally checkable labeling problems on
//! regular rooted and unrooted trees.

pub mod automaton;
pub mod bitset;
pub mod classify;
pub mod decompose;
pub mod error;
pub mod labeling;
pub mod parser;
pub mod problem;
pub mod report;
pub mod solver;
pub mod tree;
pub mod trim;

pub use bitset::BitSet;
pub use classify::{compute_depth, Depth, DepthResult, GoodSequence};
pub use decompose::{
    choose_parameters, decompose, shrinkage_violations, surviving_subtree_sizes,
    validate_decomposition, Decomposition, ParamMode,
};
pub use error::{LclError, Result};
pub use labeling::{validate_labeling, Labeling, Violation};
pub use problem::{
    Label, LabelMultiset, Problem, ProblemKind, RootedConfig, RootedProblem, UnrootedProblem,
};
pub use solver::{
    brute_force_solve, solve, solve_with_certificate, BruteForceOptions, BruteForceOutcome,
    RootForce, Solution,
};
pub use tree::Tree;
