//! Graph realisations of finite posets: disjoint unions of directed cycles,
//! sunlet gadgets under locally injective homomorphisms, and line graphs of
//! indicator products of sunlets.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{exhausted, invalid, precondition, Result};
use crate::generators::{dicycle, indicator, sunlet};
use crate::graph::{EdgeOrientation, Graph};
use crate::hom::{check_hom, find_hom, HomConstraint};
use crate::poset::{layered_embedding, Poset};
use crate::search::{Outcome, SearchConfig};

/// Upper bound on the vertex count of any single constructed graph.
pub const DEFAULT_MAX_VERTICES: usize = 20_000;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn product(labels: impl IntoIterator<Item = u64>, max: usize) -> Result<usize> {
    let mut acc: u64 = 1;
    for l in labels {
        acc = match acc.checked_mul(l) {
            Some(v) if v <= max as u64 => v,
            _ => return exhausted(format!("cycle length product exceeds {max}")),
        };
    }
    Ok(acc as usize)
}

/// `x ↦ ⊕_{S ∈ U(x)} C⃗_{∏S}`. Labels must be distinct odd primes.
pub fn embed_into_dicycles(p: &Poset, max_vertices: usize) -> Result<Vec<Graph>> {
    if let Some(&bad) = p.labels().iter().find(|&&l| l == 2 || !is_prime(l)) {
        return precondition(format!("label {bad} is not an odd prime"));
    }
    layered_embedding(p)
        .into_iter()
        .map(|family| {
            let cycles = family
                .iter()
                .map(|s| dicycle(product(s.iter().copied(), max_vertices)?))
                .collect::<Result<Vec<_>>>()?;
            let g = Graph::disjoint_union_all(&cycles)?;
            if g.n() > max_vertices {
                return exhausted(format!("image has {} vertices, limit {max_vertices}", g.n()));
            }
            Ok(g)
        })
        .collect()
}

/// Cycle lengths of the two sunlets of `H(x)`: `2 p(x)` on the left and
/// `2^label(x)` on the right, where `p(x)` multiplies the labels `q ≤ label(x)`
/// lying above `x` in the order.
pub fn gadget_lengths(p: &Poset, x: usize, max_vertices: usize) -> Result<(usize, usize)> {
    let lx = p.label(x);
    let above = (0..p.len()).filter(|&q| p.label(q) <= lx && p.leq(x, q)).map(|q| p.label(q));
    let left = 2 * product(above, max_vertices)?;
    if lx >= 63 || (1u64 << lx) > max_vertices as u64 {
        return exhausted(format!("right sunlet length 2^{lx} exceeds {max_vertices}"));
    }
    Ok((left, 1usize << lx))
}

/// `H(x)`: left sunlet (internal `0..L`, pendants `L..2L`), right sunlet
/// (internal `2L..2L+R`, pendants after), and an edge joining pendant
/// `p(x)` of the left sunlet to pendant `0` of the right one.
pub fn sunlet_gadget(p: &Poset, x: usize, max_vertices: usize) -> Result<Graph> {
    let (l, r) = gadget_lengths(p, x, max_vertices)?;
    let g = sunlet(l)?.disjoint_union(&sunlet(r)?)?;
    let bridge = (l + l / 2, 2 * l + r);
    Graph::undirected(g.n(), g.edge_list().into_iter().chain([bridge]))
}

/// `E(x)`: `H(x)` followed by copies of `E(k)` for every `k` with smaller
/// label below `x`, each joined by an edge from its left internal vertex 0 to
/// right internal vertex `2^label(k) - 1` of `H(x)`.
pub fn embed_into_sunlet_gadgets(p: &Poset, max_vertices: usize) -> Result<Vec<Graph>> {
    if let Some(&bad) = p.labels().iter().find(|&&l| l < 5 || !is_prime(l)) {
        return precondition(format!("label {bad} is not a prime of at least 5"));
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&x| p.label(x));
    let mut built: Vec<Option<Graph>> = vec![None; p.len()];
    for &x in &order {
        let h = sunlet_gadget(p, x, max_vertices)?;
        let (l, _) = gadget_lengths(p, x, max_vertices)?;
        let mut parts = vec![h.clone()];
        let mut extra = Vec::new();
        let mut offset = h.n();
        for &k in order.iter().filter(|&&k| p.label(k) < p.label(x) && p.leq(k, x)) {
            let ek = built[k].clone().expect("smaller labels are built first");
            extra.push((offset, 2 * l + (1usize << p.label(k)) - 1));
            offset += ek.n();
            parts.push(ek);
        }
        if offset > max_vertices {
            return exhausted(format!("E({}) has {offset} vertices, limit {max_vertices}", p.label(x)));
        }
        let g = Graph::disjoint_union_all(&parts)?;
        built[x] = Some(Graph::undirected(g.n(), g.edge_list().into_iter().chain(extra))?);
    }
    Ok(built.into_iter().map(|g| g.expect("all built")).collect())
}

/// `L(G_{n,d})` with the data needed to lift sunlet homomorphisms.
#[derive(Debug, Clone)]
pub struct LineGadget {
    pub n: usize,
    pub d: usize,
    /// `G_{n,d} = S_n * I_d(a, b)`.
    pub base: Graph,
    /// Representative `(sunlet edge, indicator vertex)` per vertex of `base`.
    pub base_legend: Vec<((usize, usize), usize)>,
    pub line: Graph,
    /// Edge of `base` per vertex of `line`.
    pub line_legend: Vec<(usize, usize)>,
    a: usize,
    b: usize,
}

pub fn line_gadget(n: usize, d: usize) -> Result<LineGadget> {
    if n < 3 || d < 3 {
        return invalid("line-graph gadgets need n >= 3 and d >= 3");
    }
    let (ind, a, b) = indicator(d)?;
    let (base, base_legend) = sunlet(n)?.indicator_product(&ind, a, b, EdgeOrientation::LowToHigh)?;
    let (line, line_legend) = base.line_graph()?;
    Ok(LineGadget { n, d, base, base_legend, line, line_legend, a, b })
}

/// `L(d, A)`: disjoint union of `L(G_{a,d})` over `a ∈ A`.
pub fn embed_into_line_graphs(set: &[usize], d: usize) -> Result<Graph> {
    if set.is_empty() {
        return invalid("the integer set must be nonempty");
    }
    let parts = set.iter().map(|&a| line_gadget(a, d).map(|g| g.line)).collect::<Result<Vec<_>>>()?;
    Graph::disjoint_union_all(&parts)
}

/// `x ↦ L(d, {∏S : S ∈ U(x)})`. Labels must be distinct odd primes.
pub fn embed_poset_into_line_graphs(p: &Poset, d: usize, max_vertices: usize) -> Result<Vec<Graph>> {
    if let Some(&bad) = p.labels().iter().find(|&&l| l == 2 || !is_prime(l)) {
        return precondition(format!("label {bad} is not an odd prime"));
    }
    layered_embedding(p)
        .into_iter()
        .map(|family| {
            let set = family.iter().map(|s| product(s.iter().copied(), max_vertices)).collect::<Result<Vec<_>>>()?;
            let g = embed_into_line_graphs(&set, d)?;
            if g.n() > max_vertices {
                return exhausted(format!("image has {} vertices, limit {max_vertices}", g.n()));
            }
            Ok(g)
        })
        .collect()
}

/// Wraps `S_n` around `S_m` (`i ↦ i mod m`) and lifts the map through the
/// indicator product and the line graph. `None` unless `m` divides `n`. The
/// returned map is a homomorphism `L(G_{n,d}) → L(G_{m,d})`.
pub fn cyclic_witness(src: &LineGadget, dst: &LineGadget) -> Result<Option<Vec<usize>>> {
    if src.d != dst.d {
        return invalid("gadgets must share the indicator degree");
    }
    let (n, m) = (src.n, dst.n);
    if n % m != 0 {
        return Ok(None);
    }
    let wrap = |v: usize| if v < n { v % m } else { (v - n) % m + m };
    let vertex_of = |g: &LineGadget, (e, z): ((usize, usize), usize)| -> Option<usize> {
        (z == g.a).then_some(e.0).or((z == g.b).then_some(e.1))
    };
    let mut terminal = HashMap::new();
    let mut inner = HashMap::new();
    for (node, &(e, z)) in dst.base_legend.iter().enumerate() {
        match vertex_of(dst, (e, z)) {
            Some(v) => terminal.insert(v, node),
            None => inner.insert((e, z), node),
        };
    }
    let base_map: Vec<usize> = src
        .base_legend
        .iter()
        .map(|&(e, z)| match vertex_of(src, (e, z)) {
            Some(v) => terminal[&wrap(v)],
            None => {
                let (x, y) = (wrap(e.0), wrap(e.1));
                inner[&((x.min(y), x.max(y)), z)]
            }
        })
        .collect();
    let line_index: HashMap<(usize, usize), usize> =
        dst.line_legend.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut f = Vec::with_capacity(src.line.n());
    for &(p, q) in &src.line_legend {
        let (x, y) = (base_map[p], base_map[q]);
        match line_index.get(&(x.min(y), x.max(y))) {
            Some(&i) => f.push(i),
            None => return precondition("wrapped edge is not an edge of the target"),
        }
    }
    if !check_hom(&f, &src.line, &dst.line, HomConstraint::Plain) {
        return precondition("lifted wrap map is not a homomorphism");
    }
    Ok(Some(f))
}

/// One ordered pair whose comparator verdict disagrees with the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub x: u64,
    pub y: u64,
    pub expected: bool,
    pub found: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmbeddingReport {
    pub cells: usize,
    pub mismatches: Vec<Mismatch>,
    /// Pairs `(x, y)` whose search ran out of budget.
    pub exhausted: Vec<(u64, u64)>,
}

impl EmbeddingReport {
    pub fn is_verified(&self) -> bool {
        self.mismatches.is_empty() && self.exhausted.is_empty()
    }
}

/// Runs `find_hom(images[x], images[y], c)` for every ordered pair and
/// compares each answer with `x ≤ y`. Cells run in parallel.
pub fn verify_embedding(images: &[Graph], p: &Poset, c: HomConstraint, cfg: &SearchConfig) -> Result<EmbeddingReport> {
    if images.len() != p.len() {
        return invalid("one image per poset element is required");
    }
    let k = p.len();
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).collect();
    let verdicts = cells
        .par_iter()
        .map(|&(x, y)| find_hom(&images[x], &images[y], c, cfg).map(|o| ((x, y), o.decided())))
        .collect::<Result<Vec<_>>>()?;
    let mut report = EmbeddingReport { cells: cells.len(), ..Default::default() };
    for ((x, y), verdict) in verdicts {
        let (lx, ly) = (p.label(x), p.label(y));
        match verdict {
            None => report.exhausted.push((lx, ly)),
            Some(found) if found != p.leq(x, y) => {
                report.mismatches.push(Mismatch { x: lx, y: ly, expected: p.leq(x, y), found })
            }
            Some(_) => {}
        }
    }
    Ok(report)
}

/// Decides `L(G_{n,d}) → L(G_{m,d})`: the cyclic witness when `m | n`,
/// otherwise the search engine.
pub fn line_gadget_hom(src: &LineGadget, dst: &LineGadget, cfg: &SearchConfig) -> Result<Outcome<Vec<usize>>> {
    if let Some(f) = cyclic_witness(src, dst)? {
        return Ok(Outcome::Found(f));
    }
    find_hom(&src.line, &dst.line, HomConstraint::Plain, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    fn example() -> Poset {
        Poset::from_covers(vec![3, 5, 7, 11], &[(7, 3), (7, 5), (11, 5), (3, 5), (7, 11)]).unwrap()
    }

    fn cycles(lengths: &[usize]) -> Graph {
        Graph::disjoint_union_all(&lengths.iter().map(|&k| dicycle(k).unwrap()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn dicycle_images_of_example() {
        let e = embed_into_dicycles(&example(), DEFAULT_MAX_VERTICES).unwrap();
        assert!(is_isomorphic(&e[0], &cycles(&[3])));
        assert!(is_isomorphic(&e[1], &cycles(&[5, 3])));
        assert!(is_isomorphic(&e[2], &cycles(&[105])));
        assert!(is_isomorphic(&e[3], &cycles(&[105, 55])));
    }

    #[test]
    fn dicycles_reject_non_primes() {
        let p = Poset::antichain(vec![3, 9]).unwrap();
        assert!(matches!(embed_into_dicycles(&p, 1000), Err(crate::Error::Precondition(_))));
        let p = Poset::antichain(vec![2]).unwrap();
        assert!(embed_into_dicycles(&p, 1000).is_err());
    }

    #[test]
    fn example_verifies_and_corruption_is_caught() {
        let p = example();
        let mut e = embed_into_dicycles(&p, DEFAULT_MAX_VERTICES).unwrap();
        let cfg = SearchConfig::default();
        let rep = verify_embedding(&e, &p, HomConstraint::Plain, &cfg).unwrap();
        assert_eq!(rep.cells, 16);
        assert!(rep.is_verified(), "{rep:?}");
        e[0] = dicycle(7).unwrap();
        assert!(!verify_embedding(&e, &p, HomConstraint::Plain, &cfg).unwrap().mismatches.is_empty());
    }

    #[test]
    fn singleton_poset_is_vacuous() {
        let p = Poset::antichain(vec![3]).unwrap();
        let e = embed_into_dicycles(&p, 100).unwrap();
        assert_eq!(e[0], dicycle(3).unwrap());
        assert!(verify_embedding(&e, &p, HomConstraint::Plain, &SearchConfig::default()).unwrap().is_verified());
    }

    #[test]
    fn gadget_shape() {
        let p = Poset::antichain(vec![5]).unwrap();
        let h = sunlet_gadget(&p, 0, DEFAULT_MAX_VERTICES).unwrap();
        assert_eq!(h.n(), 2 * 10 + 2 * 32);
        assert_eq!(h.edge_count(), 20 + 64 + 1);
        let deg3 = (0..h.n()).filter(|&v| h.degree(v) == 3).count();
        assert_eq!(deg3, 10 + 32);
        assert!(h.is_connected());
    }

    #[test]
    fn gadget_guard() {
        let p = Poset::antichain(vec![17]).unwrap();
        assert!(matches!(embed_into_sunlet_gadgets(&p, 1000), Err(crate::Error::BudgetExhausted(_))));
    }

    #[test]
    fn line_gadget_sizes() {
        let g = line_gadget(3, 3).unwrap();
        assert_eq!(g.base.n(), 14 * 3);
        assert_eq!(g.line.n(), g.base.edge_count());
        assert_eq!(g.line.n(), 20 * 3);
        let u = embed_into_line_graphs(&[3, 4], 3).unwrap();
        assert_eq!(u.n(), 60 + 80);
    }

    #[test]
    fn wrap_lifts_to_line_graphs() {
        let (g6, g3) = (line_gadget(6, 3).unwrap(), line_gadget(3, 3).unwrap());
        assert!(cyclic_witness(&g6, &g3).unwrap().is_some());
        assert!(cyclic_witness(&g3, &g3).unwrap().is_some());
        assert!(cyclic_witness(&g3, &g6).unwrap().is_none());
    }
}
