//! Brute-force oracles written straight from the definitions. Nothing here
//! calls into the search, core or enumeration code of the library; graphs
//! are read only through `n`, `is_directed` and `has_edge`.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use relgraph::{Graph, HomConstraint};

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    (0..g.n()).map(|u| (0..g.n()).map(|v| g.has_edge(u, v)).collect()).collect()
}

pub fn from_adjacency(directed: bool, a: &[Vec<bool>]) -> Graph {
    let n = a.len();
    let edges = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| a[u][v] && (directed || u <= v));
    Graph::new(directed, n, edges.collect::<Vec<_>>()).unwrap()
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every map `0..n -> 0..m`.
pub fn maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f: Vec<usize>| (0..m).map(move |a| [f.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Lexicographically least adjacency string over all relabelings.
pub fn brute_canon(g: &Graph) -> (bool, usize, Vec<bool>) {
    let a = adjacency(g);
    let n = g.n();
    let best = permutations(n)
        .into_iter()
        .map(|p| (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| a[p[u]][p[v]]).collect::<Vec<bool>>())
        .min()
        .unwrap_or_default();
    (g.is_directed(), n, best)
}

pub fn brute_iso(g: &Graph, h: &Graph) -> bool {
    brute_canon(g) == brute_canon(h)
}

/// One graph per isomorphism class on `1..=max_n` vertices, built from all
/// adjacency matrices.
pub fn all_graphs(directed: bool, loops: bool, max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| if u == v { loops } else { directed || u < v })
            .collect();
        let mut seen = BTreeSet::new();
        for mask in 0u64..(1 << slots.len()) {
            let mut a = vec![vec![false; n]; n];
            for (i, &(u, v)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a[u][v] = true;
                    a[v][u] |= !directed;
                }
            }
            let g = from_adjacency(directed, &a);
            if seen.insert(brute_canon(&g)) {
                out.push(g);
            }
        }
    }
    out
}

pub fn has_isolated(g: &Graph) -> bool {
    (0..g.n()).any(|v| (0..g.n()).all(|w| !g.has_edge(v, w) && !g.has_edge(w, v)))
}

/// The variant conditions, each checked directly on `f`.
pub fn is_hom(f: &[usize], g: &Graph, h: &Graph, c: HomConstraint) -> bool {
    is_hom_adj(f, &adjacency(g), &adjacency(h), c)
}

pub fn is_hom_adj(f: &[usize], a: &[Vec<bool>], b: &[Vec<bool>], c: HomConstraint) -> bool {
    use HomConstraint::*;
    let (n, m) = (a.len(), b.len());
    let pairs = |k: usize| (0..k).flat_map(move |u| (0..k).map(move |v| (u, v)));
    if !pairs(n).all(|(u, v)| !a[u][v] || b[f[u]][f[v]]) {
        return false;
    }
    let injective = || (0..n).all(|u| (0..u).all(|v| f[u] != f[v]));
    let full = || pairs(n).all(|(u, v)| a[u][v] == b[f[u]][f[v]]);
    let onto_vertices = || (0..m).all(|x| f.contains(&x));
    let onto_edges = || pairs(m).all(|(x, y)| !b[x][y] || pairs(n).any(|(u, v)| a[u][v] && f[u] == x && f[v] == y));
    let local_inj = || {
        (0..n).all(|v| {
            let img: Vec<usize> = (0..n).filter(|&w| a[v][w]).map(|w| f[w]).collect();
            img.iter().collect::<BTreeSet<_>>().len() == img.len()
        })
    };
    let local_sur = || {
        (0..n).all(|v| {
            let img: BTreeSet<usize> = (0..n).filter(|&w| a[v][w]).map(|w| f[w]).collect();
            (0..m).filter(|&x| b[f[v]][x]).all(|x| img.contains(&x))
        })
    };
    match c {
        Plain => true,
        Mono => injective(),
        Embedding => injective() && full(),
        Full => full(),
        VertexSurjective => onto_vertices(),
        EdgeSurjective => onto_edges(),
        Surjective => onto_vertices() && onto_edges(),
        LocallyInjective => local_inj(),
        LocallySurjective => local_sur(),
        LocallyBijective => local_inj() && local_sur(),
    }
}

pub fn hom_exists(g: &Graph, h: &Graph, c: HomConstraint) -> bool {
    let (a, b) = (adjacency(g), adjacency(h));
    maps(g.n(), h.n()).iter().any(|f| is_hom_adj(f, &a, &b, c))
}

/// `G * R` for the relation whose pair `(x, b)` is bit `x * m + b` of
/// `mask`; `None` when some target vertex has no preimage.
pub fn strong_image(a: &[Vec<bool>], m: usize, mask: u64) -> Option<Vec<Vec<bool>>> {
    let n = a.len();
    let rel = |x: usize, y: usize| mask >> (x * m + y) & 1 == 1;
    if (0..m).any(|y| (0..n).all(|x| !rel(x, y))) {
        return None;
    }
    let mut out = vec![vec![false; m]; m];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            *cell = (0..n).any(|x| rel(x, p) && (0..n).any(|y| rel(y, q) && a[x][y]));
        }
    }
    Some(out)
}

pub fn full_domain(n: usize, m: usize, mask: u64) -> bool {
    (0..n).all(|x| (0..m).any(|y| mask >> (x * m + y) & 1 == 1))
}

/// Whether some relation `r` (optionally with full domain) gives
/// `g * r = h` exactly.
pub fn relation_exists(g: &Graph, h: &Graph, require_full_domain: bool) -> bool {
    let (a, b) = (adjacency(g), adjacency(h));
    let (n, m) = (g.n(), h.n());
    (0u64..1 << (n * m)).any(|mask| {
        (!require_full_domain || full_domain(n, m, mask)) && strong_image(&a, m, mask).is_some_and(|img| img == b)
    })
}

/// Isomorphism classes reachable from each graph of `universe` by a
/// relation, recorded as universe indices.
pub struct Reach {
    pub full: Vec<BTreeSet<usize>>,
    pub partial: Vec<BTreeSet<usize>>,
}

pub fn reach(universe: &[Graph]) -> Reach {
    let index: HashMap<_, usize> = universe.iter().enumerate().map(|(i, g)| (brute_canon(g), i)).collect();
    let max_m = universe.iter().map(Graph::n).max().unwrap_or(0);
    let directed = universe.first().is_some_and(Graph::is_directed);
    let mut canon_cache: HashMap<Vec<Vec<bool>>, Option<usize>> = HashMap::new();
    let mut full = Vec::new();
    let mut partial = Vec::new();
    for g in universe {
        let a = adjacency(g);
        let n = g.n();
        let (mut f, mut p) = (BTreeSet::new(), BTreeSet::new());
        for m in 1..=max_m {
            for mask in 0u64..1 << (n * m) {
                let Some(img) = strong_image(&a, m, mask) else { continue };
                let id = *canon_cache
                    .entry(img.clone())
                    .or_insert_with(|| index.get(&brute_canon(&from_adjacency(directed, &img))).copied());
                if let Some(id) = id {
                    p.insert(id);
                    if full_domain(n, m, mask) {
                        f.insert(id);
                    }
                }
            }
        }
        full.push(f);
        partial.push(p);
    }
    Reach { full, partial }
}

/// Smallest universe graphs related to `universe[i]` both ways. A unique
/// smallest class is expected; all minimum-size candidates are returned.
pub fn minimal_representatives(universe: &[Graph], reach: &[BTreeSet<usize>], i: usize) -> Vec<usize> {
    let mutual: Vec<usize> = reach[i].iter().copied().filter(|&j| reach[j].contains(&i)).collect();
    let least = mutual.iter().map(|&j| universe[j].n()).min().unwrap_or(0);
    mutual.into_iter().filter(|&j| universe[j].n() == least).collect()
}

/// Coarsest equitable partition by fixpoint over neighbour counts,
/// returned as a set of blocks.
pub fn equitable_blocks(g: &Graph) -> BTreeSet<BTreeSet<usize>> {
    let a = adjacency(g);
    let n = g.n();
    let mut colour = vec![0usize; n];
    loop {
        let k = colour.iter().max().map_or(0, |c| c + 1);
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut counts = vec![0; k];
                for w in (0..n).filter(|&w| a[v][w]) {
                    counts[colour[w]] += 1;
                }
                (colour[v], counts)
            })
            .collect();
        let distinct: BTreeSet<_> = sig.iter().cloned().collect();
        let next: Vec<usize> = sig.iter().map(|s| distinct.iter().position(|d| d == s).unwrap()).collect();
        if distinct.len() == k {
            let mut blocks = vec![BTreeSet::new(); k];
            for (v, &c) in next.iter().enumerate() {
                blocks[c].insert(v);
            }
            return blocks.into_iter().collect();
        }
        colour = next;
    }
}
