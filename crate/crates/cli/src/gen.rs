//! Tree generator specifications shared by `lcl gen` and `lcl solve --gen`.

use anyhow::{anyhow, bail, Context, Result};
use lcl_core::problem::ProblemKind;
use lcl_core::tree::{
    complete_tree, hairy_path, lower_bound_tree_rooted, lower_bound_tree_unrooted,
    random_bounded_tree, random_regular_tree, LowerBoundParams, Tree,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Generator {
    Complete,
    Hairy,
    Random,
    Lowerbound,
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub generator: Generator,
    pub kind: ProblemKind,
    pub degree: usize,
    pub n: usize,
    pub height: usize,
    pub starred: bool,
    pub regular: bool,
    pub k: usize,
    pub t: usize,
    pub alphabet: usize,
    pub gamma_hat: Option<usize>,
    pub path_len: Option<usize>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(generator: Generator, kind: ProblemKind, degree: usize) -> Self {
        GenSpec {
            generator,
            kind,
            degree,
            n: 100,
            height: 3,
            starred: false,
            regular: false,
            k: 1,
            t: 1,
            alphabet: 2,
            gamma_hat: None,
            path_len: None,
            seed: 0,
        }
    }

    /// Parse `<generator>[:key=value,...]`, starting from `base` for unspecified keys.
    pub fn parse(spec: &str, base: GenSpec) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut g = base;
        g.generator = match name {
            "complete" => Generator::Complete,
            "hairy" => Generator::Hairy,
            "random" => Generator::Random,
            "lowerbound" => Generator::Lowerbound,
            other => bail!("unknown generator `{other}` (complete, hairy, random, lowerbound)"),
        };
        for item in rest.split(',').filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value in generator spec, found `{item}`"))?;
            let num = || {
                value
                    .parse::<usize>()
                    .with_context(|| format!("bad value for {key}: `{value}`"))
            };
            let flag = || match value {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(anyhow!("bad value for {key}: `{value}`")),
            };
            match key {
                "n" => g.n = num()?,
                "degree" => g.degree = num()?,
                "height" => g.height = num()?,
                "k" => g.k = num()?,
                "t" => g.t = num()?,
                "alphabet" => g.alphabet = num()?,
                "gamma_hat" => g.gamma_hat = Some(num()?),
                "path_len" => g.path_len = Some(num()?),
                "starred" => g.starred = flag()?,
                "regular" => g.regular = flag()?,
                "seed" => {
                    g.seed = value
                        .parse()
                        .with_context(|| format!("bad seed `{value}`"))?
                }
                "kind" => {
                    g.kind = match value {
                        "rooted" => ProblemKind::Rooted,
                        "unrooted" => ProblemKind::Unrooted,
                        _ => bail!("kind must be rooted or unrooted"),
                    }
                }
                _ => bail!("unknown generator key `{key}`"),
            }
        }
        Ok(g)
    }

    pub fn build(&self) -> Result<Tree> {
        let tree = match self.generator {
            Generator::Complete => {
                complete_tree(self.kind, self.degree, self.height, self.starred)?
            }
            Generator::Hairy => {
                if self.kind == ProblemKind::Rooted {
                    bail!("hairy paths are unrooted");
                }
                hairy_path(self.k, self.degree)?
            }
            Generator::Random if self.regular => {
                random_regular_tree(self.n, self.kind, self.degree, self.seed)?
            }
            Generator::Random => random_bounded_tree(self.n, self.kind, self.degree, self.seed)?,
            Generator::Lowerbound => {
                let mut p = LowerBoundParams::new(self.degree, self.alphabet, self.k, self.t);
                if let Some(g) = self.gamma_hat {
                    p.gamma_hat = g;
                }
                p.path_len = self.path_len;
                match self.kind {
                    ProblemKind::Rooted => lower_bound_tree_rooted(&p)?,
                    ProblemKind::Unrooted => lower_bound_tree_unrooted(&p)?,
                }
            }
        };
        Ok(tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let base = GenSpec::new(Generator::Random, ProblemKind::Unrooted, 3);
        let g = GenSpec::parse("random:n=50,seed=9,regular=yes", base.clone()).unwrap();
        assert_eq!((g.n, g.seed, g.regular, g.degree), (50, 9, true, 3));
        let g = GenSpec::parse("complete", base.clone()).unwrap();
        assert_eq!(g.generator, Generator::Complete);
        assert!(GenSpec::parse("cycle", base.clone()).is_err());
        assert!(GenSpec::parse("random:n", base.clone()).is_err());
        assert!(GenSpec::parse("random:size=3", base).is_err());
    }
}
