//! Degree refinement matrices.

use crate::error::{precondition, Result};
use crate::graph::{Graph, Partition};
use crate::iso::refine;

/// The coarsest equitable partition with its neighbour-count matrix.
///
/// Blocks are ordered by the rank of their refinement signature, so two
/// graphs have equal DRMs exactly when `blocks`-independent `matrix`
/// values coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drm {
    pub blocks: Partition,
    pub matrix: Vec<Vec<usize>>,
}

/// Refines the unit partition by neighbour counts until stable.
pub fn drm(g: &Graph) -> Result<Drm> {
    if g.is_directed() {
        return precondition("degree refinement matrices are computed for undirected graphs");
    }
    if !g.is_connected() {
        return precondition("degree refinement matrices need a connected graph");
    }
    let mut colors = [vec![0u32; g.n()]];
    refine(&[g], &mut colors);
    let [colors] = colors;
    let k = colors.iter().max().map_or(0, |&m| m as usize + 1);
    let mut blocks = vec![Vec::new(); k];
    for (v, &c) in colors.iter().enumerate() {
        blocks[c as usize].push(v);
    }
    let matrix = blocks
        .iter()
        .map(|b| {
            let mut row = vec![0; k];
            for w in g.out_set(b[0]).ones() {
                row[colors[w] as usize] += 1;
            }
            row
        })
        .collect();
    Ok(Drm { blocks: Partition::new(g.n(), blocks)?, matrix })
}

/// Whether `p` is equitable for `g`.
pub fn is_equitable(g: &Graph, p: &Partition) -> bool {
    let block = p.block_of();
    p.blocks().iter().all(|b| {
        let row = |v: usize| {
            let mut r = vec![0; p.len()];
            g.out_set(v).ones().for_each(|w| r[block[w]] += 1);
            r
        };
        let first = row(b[0]);
        b.iter().all(|&v| row(v) == first)
    })
}
