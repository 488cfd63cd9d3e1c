//! Binary relations between vertex ranges and their action on graphs.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, precondition, Result};
use crate::graph::Graph;

/// A relation `R ⊆ {0..src_n} × {0..dst_n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    src_n: usize,
    dst_n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel({}->{}; {:?})", self.src_n, self.dst_n, self.pairs)
    }
}

/// Basic properties of a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInfo {
    pub domain: Vec<usize>,
    pub image: Vec<usize>,
    pub full_domain: bool,
    pub full_image: bool,
    pub functional: bool,
    pub injective: bool,
}

impl Relation {
    pub fn new(src_n: usize, dst_n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let mut set = BTreeSet::new();
        for (x, b) in pairs {
            if x >= src_n || b >= dst_n {
                return invalid(format!("pair ({x},{b}) out of range {src_n}x{dst_n}"));
            }
            set.insert((x, b));
        }
        Ok(Relation { src_n, dst_n, pairs: set })
    }

    pub fn identity(n: usize) -> Relation {
        Relation { src_n: n, dst_n: n, pairs: (0..n).map(|v| (v, v)).collect() }
    }

    /// Identity on `0..n` restricted to `subset`.
    pub fn identity_on(n: usize, subset: &[usize]) -> Result<Relation> {
        Relation::new(n, n, subset.iter().map(|&v| (v, v)))
    }

    /// The graph of a mapping `x -> f[x]`.
    pub fn from_map(f: &[usize], dst_n: usize) -> Result<Relation> {
        Relation::new(f.len(), dst_n, f.iter().copied().enumerate())
    }

    pub fn src_n(&self) -> usize {
        self.src_n
    }

    pub fn dst_n(&self) -> usize {
        self.dst_n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn contains(&self, x: usize, b: usize) -> bool {
        self.pairs.contains(&(x, b))
    }

    /// `R(x)`.
    pub fn images(&self, x: usize) -> Vec<usize> {
        self.pairs.range((x, 0)..(x + 1, 0)).map(|&(_, b)| b).collect()
    }

    /// `R⁻¹(b)`.
    pub fn preimages(&self, b: usize) -> Vec<usize> {
        self.pairs.iter().filter(|&&(_, c)| c == b).map(|&(x, _)| x).collect()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn transpose(&self) -> Relation {
        Relation { src_n: self.dst_n, dst_n: self.src_n, pairs: self.pairs.iter().map(|&(x, b)| (b, x)).collect() }
    }

    /// `self ∘ s`: pairs `(x, z)` with `(x, y) ∈ self` and `(y, z) ∈ s`.
    pub fn compose(&self, s: &Relation) -> Result<Relation> {
        if self.dst_n != s.src_n {
            return invalid(format!("cannot compose {}x{} with {}x{}", self.src_n, self.dst_n, s.src_n, s.dst_n));
        }
        let mut out = BTreeSet::new();
        for &(x, y) in &self.pairs {
            for z in s.images(y) {
                out.insert((x, z));
            }
        }
        Ok(Relation { src_n: self.src_n, dst_n: s.dst_n, pairs: out })
    }

    pub fn info(&self) -> RelationInfo {
        let mut out_deg = vec![0usize; self.src_n];
        let mut in_deg = vec![0usize; self.dst_n];
        for &(x, b) in &self.pairs {
            out_deg[x] += 1;
            in_deg[b] += 1;
        }
        RelationInfo {
            domain: (0..self.src_n).filter(|&x| out_deg[x] > 0).collect(),
            image: (0..self.dst_n).filter(|&b| in_deg[b] > 0).collect(),
            full_domain: out_deg.iter().all(|&d| d > 0),
            full_image: in_deg.iter().all(|&d| d > 0),
            functional: out_deg.iter().all(|&d| d <= 1),
            injective: in_deg.iter().all(|&d| d <= 1),
        }
    }

    pub fn has_full_domain(&self) -> bool {
        self.info().full_domain
    }

    pub fn has_full_image(&self) -> bool {
        self.info().full_image
    }

    /// The mapping when the relation is a total function.
    pub fn as_map(&self) -> Option<Vec<usize>> {
        let info = self.info();
        if !(info.functional && info.full_domain) {
            return None;
        }
        Some((0..self.src_n).map(|x| self.images(x)[0]).collect())
    }

    fn first_uncovered_target(&self) -> Option<usize> {
        let mut hit = vec![false; self.dst_n];
        for &(_, b) in &self.pairs {
            hit[b] = true;
        }
        hit.iter().position(|h| !h)
    }
}

/// `G * R`: requires `R` to have full image.
pub fn apply_strong(g: &Graph, r: &Relation) -> Result<Graph> {
    if r.src_n != g.n() {
        return invalid(format!("relation source size {} differs from graph size {}", r.src_n, g.n()));
    }
    if let Some(b) = r.first_uncovered_target() {
        return precondition(format!("relation does not cover target vertex {b}"));
    }
    Ok(apply_strong_unchecked(g, r))
}

/// `R⁺ ∘ G ∘ R` for any relation of matching source size; uncovered
/// targets become isolated vertices.
///
/// # Panics
/// When `r.src_n() != g.n()`.
pub fn apply_strong_unchecked(g: &Graph, r: &Relation) -> Graph {
    assert_eq!(r.src_n, g.n(), "relation source size must match the graph");
    let images: Vec<Vec<usize>> = (0..g.n()).map(|x| r.images(x)).collect();
    let mut edges = Vec::new();
    for (u, v) in g.arcs() {
        for &a in &images[u] {
            for &b in &images[v] {
                edges.push((a, b));
            }
        }
    }
    Graph::new(g.is_directed(), r.dst_n, edges).expect("targets in range")
}

/// `G ⋆ R`: the strong composition without loops.
pub fn apply_weak(g: &Graph, r: &Relation) -> Result<Graph> {
    if !g.is_loop_free() {
        return precondition("weak composition takes a loop-free graph");
    }
    let strong = apply_strong(g, r)?;
    Graph::new(g.is_directed(), strong.n(), strong.arcs().filter(|&(a, b)| a != b))
}

/// `R = I_A ∘ R_D ∘ R_C` with `A = dom R` and `B` the pairs of `R` in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub i_a: Relation,
    pub r_d: Relation,
    pub r_c: Relation,
    /// `dom R`, ascending.
    pub domain: Vec<usize>,
}

impl Decomposition {
    /// `R_D` with its source renumbered onto `G[dom R]`.
    pub fn r_d_on_domain(&self) -> Relation {
        let mut pos = vec![usize::MAX; self.r_d.src_n];
        for (i, &x) in self.domain.iter().enumerate() {
            pos[x] = i;
        }
        Relation::new(self.domain.len(), self.r_d.dst_n, self.r_d.pairs().map(|(x, b)| (pos[x], b)))
            .expect("in range")
    }

    pub fn recompose(&self) -> Relation {
        self.i_a.compose(&self.r_d).and_then(|r| r.compose(&self.r_c)).expect("sizes agree")
    }
}

pub fn decompose(r: &Relation) -> Decomposition {
    let pairs: Vec<(usize, usize)> = r.pairs().collect();
    let domain = r.info().domain;
    let i_a = Relation::identity_on(r.src_n, &domain).expect("in range");
    let r_d = Relation::new(r.src_n, pairs.len(), pairs.iter().enumerate().map(|(k, &(x, _))| (x, k))).expect("in range");
    let r_c = Relation::new(pairs.len(), r.dst_n, pairs.iter().enumerate().map(|(k, &(_, b))| (k, b))).expect("in range");
    Decomposition { i_a, r_d, r_c, domain }
}

/// Outcome of the Hall-condition test on `dom R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hall {
    /// A matching saturating `dom R`, as `(source, target)` pairs.
    Satisfied(Vec<(usize, usize)>),
    /// A source set `S` with `|S| > |R(S)|`.
    Violated(Vec<usize>),
}

/// Maximum bipartite matching by augmenting paths.
pub fn hall_check(r: &Relation) -> Hall {
    let adj: Vec<Vec<usize>> = (0..r.src_n).map(|x| r.images(x)).collect();
    let mut mate_of_target = vec![usize::MAX; r.dst_n];
    let mut mate_of_source = vec![usize::MAX; r.src_n];

    fn augment(x: usize, adj: &[Vec<usize>], seen: &mut [bool], mt: &mut [usize], ms: &mut [usize]) -> bool {
        for &b in &adj[x] {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            if mt[b] == usize::MAX || augment(mt[b], adj, seen, mt, ms) {
                mt[b] = x;
                ms[x] = b;
                return true;
            }
        }
        false
    }

    for x in 0..r.src_n {
        if adj[x].is_empty() {
            continue;
        }
        let mut seen = vec![false; r.dst_n];
        if !augment(x, &adj, &mut seen, &mut mate_of_target, &mut mate_of_source) {
            // Sources reachable from x by alternating paths form the deficient set.
            let mut in_set = vec![false; r.src_n];
            let mut stack = vec![x];
            in_set[x] = true;
            let mut visited_target = vec![false; r.dst_n];
            while let Some(y) = stack.pop() {
                for &b in &adj[y] {
                    if visited_target[b] {
                        continue;
                    }
                    visited_target[b] = true;
                    let m = mate_of_target[b];
                    if m != usize::MAX && !in_set[m] {
                        in_set[m] = true;
                        stack.push(m);
                    }
                }
            }
            return Hall::Violated((0..r.src_n).filter(|&v| in_set[v]).collect());
        }
    }
    Hall::Satisfied((0..r.src_n).filter(|&x| mate_of_source[x] != usize::MAX).map(|x| (x, mate_of_source[x])).collect())
}

/// A monomorphism `g -> h` contained in `r`, when `r` has full domain and
/// satisfies the Hall condition. Requires `g * r = h`.
pub fn extract_monomorphism(g: &Graph, r: &Relation, h: &Graph) -> Result<Option<Vec<usize>>> {
    if apply_strong(g, r)? != *h {
        return precondition("g * r differs from h");
    }
    if !r.has_full_domain() {
        return Ok(None);
    }
    let Hall::Satisfied(matching) = hall_check(r) else {
        return Ok(None);
    };
    let mut f = vec![0; g.n()];
    for (x, b) in matching {
        f[x] = b;
    }
    let mono = g.arcs().all(|(u, v)| h.has_edge(f[u], f[v]));
    Ok(mono.then_some(f))
}

/// Both reversibility verdicts for `(g, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reversibility {
    /// Full domain, and vertices sharing an image share their neighbourhoods.
    pub criterion: bool,
    /// `(g * r) * r⁺ = g`, computed directly.
    pub direct: bool,
}

pub fn reversibility(g: &Graph, r: &Relation) -> Result<Reversibility> {
    let h = apply_strong(g, r)?;
    let back = apply_strong_unchecked(&h, &r.transpose());
    let direct = back == *g;
    let images: Vec<Vec<usize>> = (0..g.n()).map(|x| r.images(x)).collect();
    let mut criterion = r.has_full_domain();
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            if images[x].iter().any(|b| images[y].contains(b))
                && (g.out_set(x) != g.out_set(y) || g.in_set(x) != g.in_set(y))
            {
                criterion = false;
            }
        }
    }
    Ok(Reversibility { criterion, direct })
}

/// Whether `(g * r) * r⁺ = g`. Both verdicts are computed and must agree.
pub fn is_reversible(g: &Graph, r: &Relation) -> Result<bool> {
    let rev = reversibility(g, r)?;
    assert_eq!(rev.criterion, rev.direct, "reversibility verdicts disagree");
    Ok(rev.direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};

    fn rel(src: usize, dst: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::new(src, dst, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_small() {
        let r = rel(1, 2, &[(0, 0), (0, 1)]);
        let s = rel(2, 1, &[(1, 0)]);
        assert_eq!(r.compose(&s).unwrap(), rel(1, 1, &[(0, 0)]));
        assert!(s.compose(&s).is_err());
        assert_eq!(Relation::identity(1).compose(&r).unwrap(), r);
    }

    #[test]
    fn transpose_basics() {
        let r = rel(2, 3, &[(0, 1)]);
        assert_eq!(r.transpose(), rel(3, 2, &[(1, 0)]));
        assert_eq!(r.transpose().transpose(), r);
    }

    #[test]
    fn predicates() {
        let id = Relation::identity(3).info();
        assert!(id.full_domain && id.full_image && id.functional && id.injective);
        let r = rel(2, 1, &[(0, 0), (1, 0)]).info();
        assert!(r.functional && !r.injective && r.full_domain && r.full_image);
        assert!(!rel(2, 2, &[]).info().full_domain);
    }

    #[test]
    fn triangle_onto_edge() {
        let c3 = cycle(3).unwrap();
        let r = rel(3, 2, &[(0, 0), (1, 1)]);
        assert_eq!(apply_strong(&c3, &r).unwrap(), complete(2).unwrap());
    }

    #[test]
    fn edge_onto_path() {
        let r = rel(2, 3, &[(0, 0), (0, 2), (1, 1)]);
        let p3 = Graph::undirected(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(apply_strong(&path(2).unwrap(), &r).unwrap(), p3);
    }

    #[test]
    fn uncovered_target_is_named() {
        let err = apply_strong(&path(2).unwrap(), &rel(2, 3, &[(0, 0), (1, 1)])).unwrap_err();
        assert!(err.to_string().contains("target vertex 2"));
    }

    #[test]
    fn weak_composition_drops_loops() {
        let k3 = complete(3).unwrap();
        let r = rel(3, 2, &[(0, 0), (2, 0), (1, 1)]);
        assert_eq!(apply_weak(&k3, &r).unwrap(), complete(2).unwrap());
        assert!(apply_strong(&k3, &r).unwrap().has_loop(0));
    }

    #[test]
    fn weighted_support_and_duplication() {
        use crate::weights::{apply_weighted, WeightMatrix};
        let p3 = path(3).unwrap();
        let w: WeightMatrix<i64> = WeightMatrix::from_graph(&p3);
        let r = rel(3, 4, &[(0, 0), (1, 1), (2, 2), (1, 3)]);
        let out = apply_weighted(&w, &r).unwrap();
        let strong = apply_strong(&p3, &r).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(out.get(a, b) != 0, strong.has_edge(a, b));
            }
        }
        let row = |m: &WeightMatrix<i64>, i: usize| (0..m.n()).map(|j| m.get(i, j)).sum::<i64>();
        let dup = rel(3, 4, &[(0, 0), (1, 1), (2, 2), (0, 3)]);
        let out = apply_weighted(&w, &dup).unwrap();
        let col = |m: &WeightMatrix<i64>, j: usize| (0..m.n()).map(|i| m.get(i, j)).sum::<i64>();
        assert_eq!(row(&out, 0) + row(&out, 3), 2 * row(&w, 0));
        assert_eq!(col(&out, 0) + col(&out, 3), 2 * col(&w, 0));
        assert_eq!(row(&out, 3), row(&w, 0));
    }

    #[test]
    fn decomposition_of_identity_and_small_relation() {
        let d = decompose(&Relation::identity(3));
        assert_eq!(d.i_a, Relation::identity(3));
        assert_eq!(d.r_d, Relation::identity(3));
        assert_eq!(d.r_c, Relation::identity(3));
        let r = rel(2, 3, &[(0, 0), (0, 2), (1, 1)]);
        let d = decompose(&r);
        assert_eq!(d.r_d.dst_n(), 3);
        assert_eq!(d.recompose(), r);
        assert!(d.r_d.info().injective && d.r_c.info().functional);
    }

    #[test]
    fn hall_two_sources_one_target() {
        let r = rel(3, 3, &[(1, 2), (2, 2), (0, 0)]);
        assert_eq!(hall_check(&r), Hall::Violated(vec![1, 2]));
        match hall_check(&Relation::identity(4)) {
            Hall::Satisfied(m) => assert_eq!(m, (0..4).map(|v| (v, v)).collect::<Vec<_>>()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monomorphism_inside_relation() {
        let p2 = path(2).unwrap();
        let r = rel(2, 3, &[(0, 0), (0, 2), (1, 1)]);
        let p3 = apply_strong(&p2, &r).unwrap();
        let f = extract_monomorphism(&p2, &r, &p3).unwrap().unwrap();
        assert!(r.contains(0, f[0]) && r.contains(1, f[1]));
        assert!(p3.has_edge(f[0], f[1]));
        let k2 = complete(2).unwrap();
        let r = rel(2, 1, &[(0, 0), (1, 0)]);
        let h = apply_strong(&k2, &r).unwrap();
        assert_eq!(extract_monomorphism(&k2, &r, &h).unwrap(), None);
        assert!(extract_monomorphism(&k2, &r, &k2).is_err());
    }

    #[test]
    fn reversibility_examples() {
        let c3 = cycle(3).unwrap();
        assert!(is_reversible(&c3, &Relation::identity(3)).unwrap());
        assert!(!is_reversible(&c3, &rel(3, 2, &[(0, 0), (1, 1)])).unwrap());
        let p3 = path(3).unwrap();
        assert!(is_reversible(&p3, &rel(3, 2, &[(0, 0), (2, 0), (1, 1)])).unwrap());
    }
}
