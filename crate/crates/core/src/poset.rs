//! Finite posets with integer labels, and the set-family embeddings that
//! feed the graph constructions.

use std::collections::BTreeSet;

use crate::error::{invalid, Result};

/// A finite partial order. Element `i` carries `labels[i]`; the numeric
/// order of labels is the auxiliary linear order used by [`split_fb`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<u64>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Checks reflexivity, antisymmetry and transitivity of `leq`.
    pub fn new(labels: Vec<u64>, leq: Vec<Vec<bool>>) -> Result<Poset> {
        let k = labels.len();
        if leq.len() != k || leq.iter().any(|row| row.len() != k) {
            return invalid("order matrix must be square over the elements");
        }
        let distinct: BTreeSet<u64> = labels.iter().copied().collect();
        if distinct.len() != k || labels.contains(&0) {
            return invalid("labels must be distinct positive integers");
        }
        for i in 0..k {
            if !leq[i][i] {
                return invalid(format!("order is not reflexive at {}", labels[i]));
            }
            for j in 0..k {
                if i != j && leq[i][j] && leq[j][i] {
                    return invalid(format!("order is not antisymmetric on {} and {}", labels[i], labels[j]));
                }
                for l in 0..k {
                    if leq[i][j] && leq[j][l] && !leq[i][l] {
                        return invalid(format!(
                            "order is not transitive on {} <= {} <= {}",
                            labels[i], labels[j], labels[l]
                        ));
                    }
                }
            }
        }
        Ok(Poset { labels, leq })
    }

    /// Reflexive-transitive closure of the strict pairs `a < b`, given by
    /// label.
    pub fn from_covers(labels: Vec<u64>, covers: &[(u64, u64)]) -> Result<Poset> {
        let k = labels.len();
        let mut leq = vec![vec![false; k]; k];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        let index = |x: u64| labels.iter().position(|&l| l == x);
        for &(a, b) in covers {
            match (index(a), index(b)) {
                (Some(i), Some(j)) => leq[i][j] = true,
                _ => return invalid(format!("pair {a} {b} names an unknown label")),
            }
        }
        for m in 0..k {
            for i in 0..k {
                if leq[i][m] {
                    for j in 0..k {
                        if leq[m][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Poset::new(labels, leq)
    }

    pub fn antichain(labels: Vec<u64>) -> Result<Poset> {
        Poset::from_covers(labels, &[])
    }

    /// `labels[0] < labels[1] < ...` in the order.
    pub fn chain(labels: Vec<u64>) -> Result<Poset> {
        let covers: Vec<(u64, u64)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
        Poset::from_covers(labels, &covers)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> u64 {
        self.labels[i]
    }

    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Cover pairs `(a, b)` by label: `a < b` with nothing in between.
    pub fn covers(&self) -> Vec<(u64, u64)> {
        let k = self.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j && self.leq[i][j] && !(0..k).any(|m| m != i && m != j && self.leq[i][m] && self.leq[m][j]) {
                    out.push((self.labels[i], self.labels[j]));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// `x ↦ ↓x`, as label sets.
pub fn downset_embedding(p: &Poset) -> Vec<BTreeSet<u64>> {
    (0..p.len()).map(|x| (0..p.len()).filter(|&y| p.leq(y, x)).map(|y| p.label(y)).collect()).collect()
}

/// Strict pairs of the order, split by whether labels agree with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardBackward {
    /// `x < y` in the order and `label(x) < label(y)`.
    pub forward: Vec<(u64, u64)>,
    /// `x < y` in the order and `label(x) > label(y)`.
    pub backward: Vec<(u64, u64)>,
}

pub fn split_fb(p: &Poset) -> ForwardBackward {
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i != j && p.leq(i, j) {
                let pair = (p.label(i), p.label(j));
                if pair.0 < pair.1 {
                    forward.push(pair);
                } else {
                    backward.push(pair);
                }
            }
        }
    }
    forward.sort_unstable();
    backward.sort_unstable();
    ForwardBackward { forward, backward }
}

/// `f(x)`: `x` together with everything above it in the backward order.
pub fn backward_sets(p: &Poset) -> Vec<BTreeSet<u64>> {
    (0..p.len())
        .map(|x| {
            (0..p.len())
                .filter(|&y| y == x || (p.leq(x, y) && p.label(x) > p.label(y)))
                .map(|y| p.label(y))
                .collect()
        })
        .collect()
}

/// `U(x) = { f(y) : y ≤ x forward }`, compared by [`dominated_by`].
pub fn layered_embedding(p: &Poset) -> Vec<BTreeSet<BTreeSet<u64>>> {
    let f = backward_sets(p);
    (0..p.len())
        .map(|x| {
            (0..p.len())
                .filter(|&y| y == x || (p.leq(y, x) && p.label(y) < p.label(x)))
                .map(|y| f[y].clone())
                .collect()
        })
        .collect()
}

/// Every member of `a` contains some member of `b`.
pub fn dominated_by(a: &BTreeSet<BTreeSet<u64>>, b: &BTreeSet<BTreeSet<u64>>) -> bool {
    a.iter().all(|s| b.iter().any(|t| t.is_subset(s)))
}

/// Every element of `a` is divisible by some element of `b`.
pub fn divisibility_leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().all(|&x| b.iter().any(|&y| y != 0 && x % y == 0))
}
