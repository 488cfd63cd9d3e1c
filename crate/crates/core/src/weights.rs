//! Weighted graphs as square matrices and the weighted relational operator.

use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::relation::Relation;

/// Scalars usable as edge weights.
pub trait Weight: Zero + Copy + PartialEq + std::fmt::Debug {}

impl<T: Zero + Copy + PartialEq + std::fmt::Debug> Weight for T {}

/// Square weight matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<W> {
    n: usize,
    data: Vec<W>,
}

impl<W: Weight> WeightMatrix<W> {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix { n, data: vec![W::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<W>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return invalid("weight matrix must be square");
        }
        Ok(WeightMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    /// Adjacency matrix of `g` with weight one on every arc.
    pub fn from_graph(g: &Graph) -> Self
    where
        W: One,
    {
        let mut m = Self::zeros(g.n());
        for (u, v) in g.arcs() {
            m.set(u, v, W::one());
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> W {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, w: W) {
        self.data[i * self.n + j] = w;
    }

    pub fn rows(&self) -> Vec<Vec<W>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    /// Pairs carrying a nonzero weight.
    pub fn support(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) != W::zero())
            .collect()
    }
}

/// `Rᵀ W R`: entry `(a, b)` sums `w(x, y)` over `(x, a), (y, b) ∈ R`.
pub fn apply_weighted<W: Weight>(w: &WeightMatrix<W>, r: &Relation) -> Result<WeightMatrix<W>> {
    if w.n != r.src_n() {
        return invalid(format!("matrix size {} differs from relation source size {}", w.n, r.src_n()));
    }
    let images: Vec<Vec<usize>> = (0..w.n).map(|x| r.images(x)).collect();
    let mut out = WeightMatrix::zeros(r.dst_n());
    for x in 0..w.n {
        for y in 0..w.n {
            let wxy = w.get(x, y);
            if wxy == W::zero() {
                continue;
            }
            for &a in &images[x] {
                for &b in &images[y] {
                    let cur = out.get(a, b);
                    out.set(a, b, cur + wxy);
                }
            }
        }
    }
    Ok(out)
}
