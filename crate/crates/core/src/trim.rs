//! The trim operator for both formalisms.

use crate::bitset::BitSet;
use crate::problem::{EdgeTable, Label, LabelSet, RootedProblem, UnrootedProblem};

/// Label sets visited by the trim fixpoint, ending with the fixpoint twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimTrace {
    pub sigma_sequence: Vec<LabelSet>,
    pub fixpoint: LabelSet,
}

fn partner_table(edges: &EdgeTable, sigma: &LabelSet, n: usize) -> Vec<bool> {
    (0..n)
        .map(|a| {
            edges
                .partners(Label::from(a))
                .any(|b| sigma.contains(b.index()))
        })
        .collect()
}

/// Trim a set of node configurations (indices into `problem.node_configs`).
pub fn trim_unrooted(problem: &UnrootedProblem, s: &BitSet) -> (BitSet, TrimTrace) {
    let n = problem.num_labels();
    let edges = problem.edge_table();
    let mut sigma = LabelSet::new(n);
    for i in s.iter() {
        for l in problem.node_configs[i].entries() {
            sigma.insert(l.index());
        }
    }
    let mut seq = vec![sigma.clone()];
    loop {
        let has = partner_table(&edges, &sigma, n);
        let mut next = LabelSet::new(n);
        for i in s.iter() {
            let c = &problem.node_configs[i];
            for &sig in c.entries() {
                if !sigma.contains(sig.index()) || next.contains(sig.index()) {
                    continue;
                }
                let rest = c.without_one(sig).expect("member");
                if rest.entries().iter().all(|a| has[a.index()]) {
                    next.insert(sig.index());
                }
            }
        }
        let stable = next == sigma;
        seq.push(next.clone());
        sigma = next;
        if stable {
            break;
        }
    }
    let has = partner_table(&edges, &sigma, n);
    let kept = BitSet::from_indices(
        s.universe(),
        s.iter().filter(|&i| {
            problem.node_configs[i]
                .entries()
                .iter()
                .all(|a| has[a.index()])
        }),
    );
    (
        kept,
        TrimTrace {
            sigma_sequence: seq,
            fixpoint: sigma,
        },
    )
}

/// Trim a label set of a rooted problem.
pub fn trim_rooted(problem: &RootedProblem, labels: &LabelSet) -> (LabelSet, TrimTrace) {
    let mut sigma = labels.clone();
    let mut seq = vec![sigma.clone()];
    loop {
        let mut next = LabelSet::new(labels.universe());
        for c in &problem.configs {
            if sigma.contains(c.label.index()) && c.children.all_in(&sigma) {
                next.insert(c.label.index());
            }
        }
        let stable = next == sigma;
        seq.push(next.clone());
        sigma = next;
        if stable {
            break;
        }
    }
    (
        sigma.clone(),
        TrimTrace {
            sigma_sequence: seq,
            fixpoint: sigma,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{LabelMultiset, RootedConfig};

    fn names(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    }

    #[test]
    fn unrooted_examples() {
        let p = UnrootedProblem::new(
            3,
            names(2),
            vec![
                LabelMultiset::from_ids(&[0, 0, 0]),
                LabelMultiset::from_ids(&[1, 1, 1]),
            ],
            vec![LabelMultiset::from_ids(&[0, 0])],
        )
        .unwrap();
        let (t, _) = trim_unrooted(&p, &BitSet::new(2));
        assert!(t.is_empty());
        let (t, _) = trim_unrooted(&p, &BitSet::from_indices(2, [0]));
        assert_eq!(t.to_vec(), vec![0]);
        let (t, trace) = trim_unrooted(&p, &BitSet::full(2));
        assert_eq!(t.to_vec(), vec![0]);
        assert_eq!(trace.sigma_sequence[0].to_vec(), vec![0, 1]);
        assert_eq!(trace.sigma_sequence[1].to_vec(), vec![0]);
        assert_eq!(trace.fixpoint.to_vec(), vec![0]);
    }

    #[test]
    fn rooted_examples() {
        let cfg = |l: usize, c: &[usize]| RootedConfig {
            label: Label::from(l),
            children: LabelMultiset::from_ids(c),
        };
        let intro =
            RootedProblem::new(2, names(2), vec![cfg(0, &[0, 1]), cfg(1, &[0, 0])]).unwrap();
        assert_eq!(
            trim_rooted(&intro, &intro.all_labels()).0.to_vec(),
            vec![0, 1]
        );
        let empty = RootedProblem::new(2, names(1), vec![]).unwrap();
        assert!(trim_rooted(&empty, &empty.all_labels()).0.is_empty());
        let aa = RootedProblem::new(2, names(2), vec![cfg(0, &[0, 0])]).unwrap();
        assert_eq!(trim_rooted(&aa, &aa.all_labels()).0.to_vec(), vec![0]);
    }
}
