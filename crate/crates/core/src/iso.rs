//! Isomorphism testing and canonical certificates by colour refinement
//! with individualisation.

use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::search::{Budget, Outcome, OutOfBudget, SearchConfig};

type Sig = (u32, Vec<(u32, u32)>, Vec<(u32, u32)>);

fn counts(colors: &[u32], it: impl Iterator<Item = usize>) -> Vec<(u32, u32)> {
    let mut m: BTreeMap<u32, u32> = BTreeMap::new();
    for w in it {
        *m.entry(colors[w]).or_default() += 1;
    }
    m.into_iter().collect()
}

fn class_count(colors: &[Vec<u32>]) -> usize {
    let mut all: Vec<u32> = colors.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Refines the colourings of several graphs jointly until stable. Colours
/// are ranks of sorted signatures, so the result is isomorphism-invariant.
pub(crate) fn refine(graphs: &[&Graph], colors: &mut [Vec<u32>]) {
    let mut classes = class_count(colors);
    loop {
        let sigs: Vec<Vec<Sig>> = graphs
            .iter()
            .zip(colors.iter())
            .map(|(g, c)| {
                (0..g.n())
                    .map(|v| {
                        let ins = if g.is_directed() { counts(c, g.in_set(v).ones()) } else { Vec::new() };
                        (c[v], counts(c, g.out_set(v).ones()), ins)
                    })
                    .collect()
            })
            .collect();
        let mut all: Vec<&Sig> = sigs.iter().flatten().collect();
        all.sort();
        all.dedup();
        for (gi, s) in sigs.iter().enumerate() {
            for (v, sig) in s.iter().enumerate() {
                colors[gi][v] = all.binary_search(&sig).expect("present") as u32;
            }
        }
        if all.len() == classes {
            return;
        }
        classes = all.len();
    }
}

fn initial_colors(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| u32::from(g.has_loop(v))).collect()
}

fn histogram(c: &[u32]) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for &x in c {
        *m.entry(x).or_default() += 1;
    }
    m
}

/// Smallest non-singleton colour class (ties broken by colour value).
fn target_cell(c: &[u32]) -> Option<u32> {
    histogram(c).into_iter().filter(|&(_, k)| k > 1).min_by_key(|&(col, k)| (k, col)).map(|(col, _)| col)
}

/// An isomorphism `g -> h` as a vertex map, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph, cfg: &SearchConfig) -> Outcome<Vec<usize>> {
    if g.n() != h.n() || g.is_directed() != h.is_directed() || g.arc_count() != h.arc_count() {
        return Outcome::Absent;
    }
    let mut budget = Budget::new(cfg.max_nodes);
    match iso_search(g, h, initial_colors(g), initial_colors(h), &mut budget) {
        Ok(Some(f)) => Outcome::Found(f),
        Ok(None) => Outcome::Absent,
        Err(OutOfBudget) => Outcome::Exhausted,
    }
}

/// Exact isomorphism test.
///
/// # Panics
/// When the default search budget is exhausted, which does not happen for
/// the graph sizes this crate targets.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h, &SearchConfig::default()).decided().expect("isomorphism search budget exhausted")
}

fn iso_search(
    g: &Graph,
    h: &Graph,
    cg: Vec<u32>,
    ch: Vec<u32>,
    budget: &mut Budget,
) -> Result<Option<Vec<usize>>, OutOfBudget> {
    let mut colors = [cg, ch];
    refine(&[g, h], &mut colors);
    let [cg, ch] = colors;
    if histogram(&cg) != histogram(&ch) {
        return Ok(None);
    }
    let Some(cell) = target_cell(&cg) else {
        let mut by_color = vec![0; h.n()];
        for (v, &c) in ch.iter().enumerate() {
            by_color[c as usize] = v;
        }
        let f: Vec<usize> = cg.iter().map(|&c| by_color[c as usize]).collect();
        let ok = (0..g.n()).all(|u| (0..g.n()).all(|v| g.has_edge(u, v) == h.has_edge(f[u], f[v])));
        return Ok(ok.then_some(f));
    };
    let fresh = cg.iter().max().copied().unwrap_or(0) + 1;
    let u = cg.iter().position(|&c| c == cell).expect("cell nonempty");
    for v in (0..h.n()).filter(|&v| ch[v] == cell) {
        budget.tick()?;
        let mut cg2 = cg.clone();
        let mut ch2 = ch.clone();
        cg2[u] = fresh;
        ch2[v] = fresh;
        if let Some(f) = iso_search(g, h, cg2, ch2, budget)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Canonical certificate: equal exactly for isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate {
    directed: bool,
    n: usize,
    bits: Vec<u64>,
}

/// Lexicographically least adjacency matrix over all leaves of the
/// individualisation-refinement tree.
pub fn canonical_form(g: &Graph) -> Certificate {
    let mut best: Option<Vec<u64>> = None;
    canon_search(g, initial_colors(g), &mut best);
    Certificate { directed: g.is_directed(), n: g.n(), bits: best.unwrap_or_default() }
}

fn canon_search(g: &Graph, c: Vec<u32>, best: &mut Option<Vec<u64>>) {
    let mut colors = [c];
    refine(&[g], &mut colors);
    let [c] = colors;
    let Some(cell) = target_cell(&c) else {
        let n = g.n();
        let mut inv = vec![0; n];
        for (v, &col) in c.iter().enumerate() {
            inv[col as usize] = v;
        }
        let mut bits = vec![0u64; (n * n).div_ceil(64)];
        for i in 0..n {
            for j in 0..n {
                if g.has_edge(inv[i], inv[j]) {
                    let k = i * n + j;
                    bits[k / 64] |= 1 << (63 - k % 64);
                }
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            *best = Some(bits);
        }
        return;
    };
    let fresh = c.iter().max().copied().unwrap_or(0) + 1;
    for v in (0..g.n()).filter(|&v| c[v] == cell) {
        let mut c2 = c.clone();
        c2[v] = fresh;
        canon_search(g, c2, best);
    }
}
