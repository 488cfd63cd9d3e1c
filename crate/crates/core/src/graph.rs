//! Finite graphs with loops, directed or undirected, and structural
//! constructions on them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::error::{invalid, precondition, Result};

/// A finite graph on vertices `0..n`. Loops are allowed.
///
/// Undirected graphs store both orientations of each edge; a loop is the
/// single pair `(v, v)`. The neighbourhood `N(v)` contains `v` exactly when
/// `v` carries a loop.
#[derive(Clone)]
pub struct Graph {
    directed: bool,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    out: Vec<FixedBitSet>,
    inc: Vec<FixedBitSet>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.directed.hash(state);
        self.n.hash(state);
        self.edges.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.directed { "digraph" } else { "graph" };
        write!(f, "{kind}({}; ", self.n)?;
        let list: Vec<String> = self.edge_list().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        write!(f, "{})", list.join(" "))
    }
}

/// How `complement` treats the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementMode {
    /// Toggle loops too, so a loop-free graph becomes looped everywhere.
    WithLoops,
    /// Ordinary complement: only distinct pairs are toggled, no loops.
    LoopFree,
}

/// Which endpoint of an undirected edge acts as its tail in
/// [`Graph::indicator_product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrientation {
    LowToHigh,
    HighToLow,
}

impl Graph {
    /// Builds a graph, symmetrising when undirected. Vertex indices must be
    /// below `n`.
    pub fn new(directed: bool, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for {n} vertices"));
            }
            set.insert((u, v));
            if !directed {
                set.insert((v, u));
            }
        }
        Ok(Self::from_set(directed, n, set))
    }

    pub fn undirected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        Self::new(false, n, edges)
    }

    pub fn directed(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        Self::new(true, n, edges)
    }

    pub fn empty(directed: bool, n: usize) -> Graph {
        Self::from_set(directed, n, BTreeSet::new())
    }

    fn from_set(directed: bool, n: usize, edges: BTreeSet<(usize, usize)>) -> Graph {
        let mut out = vec![FixedBitSet::with_capacity(n); n];
        let mut inc = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in &edges {
            out[u].insert(v);
            inc[v].insert(u);
        }
        Graph { directed, n, edges, out, inc }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// All stored ordered pairs (both orientations for undirected graphs).
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn arc_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as listed in the text format: every arc when directed, pairs
    /// with `u <= v` when undirected.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|&(u, v)| self.directed || u <= v).collect()
    }

    /// Number of edges, counting an undirected edge or a loop once.
    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.edges.len()
        } else {
            self.edges.iter().filter(|&&(u, v)| u <= v).count()
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn loop_count(&self) -> usize {
        (0..self.n).filter(|&v| self.has_loop(v)).count()
    }

    pub fn is_loop_free(&self) -> bool {
        self.loop_count() == 0
    }

    /// Out-neighbourhood; the neighbourhood for undirected graphs.
    pub fn out_set(&self, v: usize) -> &FixedBitSet {
        &self.out[v]
    }

    pub fn in_set(&self, v: usize) -> &FixedBitSet {
        &self.inc[v]
    }

    /// `N(v)` as a sorted list (out-neighbours when directed).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.out[v].ones().collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.inc[v].ones().collect()
    }

    /// `|N(v)|`, a loop contributing one.
    pub fn degree(&self, v: usize) -> usize {
        self.out[v].count_ones(..)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].count_ones(..)
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.out[v].is_clear() && self.inc[v].is_clear()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.is_isolated(v)).collect()
    }

    /// The underlying undirected graph.
    pub fn to_undirected(&self) -> Graph {
        Self::new(false, self.n, self.edges.iter().copied()).expect("indices in range")
    }

    /// Subgraph induced by `vertices`, renumbered by ascending original
    /// index.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        self.induced_ordered(&sorted)
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced_ordered(&self, vertices: &[usize]) -> Result<Graph> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return invalid(format!("vertex {v} out of range"));
            }
            if pos[v] != usize::MAX {
                return invalid(format!("vertex {v} listed twice"));
            }
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::new(self.directed, vertices.len(), edges)
    }

    /// Disjoint union; `other` is shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        Graph::disjoint_union_all(&[self.clone(), other.clone()])
    }

    pub fn disjoint_union_all(parts: &[Graph]) -> Result<Graph> {
        let Some(first) = parts.first() else {
            return invalid("disjoint union of no graphs");
        };
        if parts.iter().any(|g| g.directed != first.directed) {
            return invalid("cannot mix directed and undirected graphs");
        }
        let mut offset = 0;
        let mut edges = Vec::new();
        for g in parts {
            edges.extend(g.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
            offset += g.n;
        }
        Graph::new(first.directed, offset, edges)
    }

    pub fn complement(&self, mode: ComplementMode) -> Graph {
        let mut edges = BTreeSet::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if u == v && mode == ComplementMode::LoopFree {
                    continue;
                }
                if !self.has_edge(u, v) {
                    edges.insert((u, v));
                }
            }
        }
        Self::from_set(self.directed, self.n, edges)
    }

    /// Graph on the blocks of `p`; blocks `i` and `j` are joined when some
    /// edge runs between them, a block gets a loop when it contains an edge.
    pub fn quotient(&self, p: &Partition) -> Result<Graph> {
        if p.n() != self.n {
            return invalid("partition does not cover the vertex set");
        }
        let block = p.block_of();
        Graph::new(self.directed, p.len(), self.edges.iter().map(|&(u, v)| (block[u], block[v])))
    }

    /// Replaces vertex `v` by `counts[v]` copies. Copies of `u` and `v` are
    /// joined exactly when `uv` is an edge, so copies of a looped vertex are
    /// mutually adjacent and looped. Copies of vertex 0 come first.
    pub fn vertex_multiplication(&self, counts: &[usize]) -> Result<Graph> {
        if counts.len() != self.n {
            return invalid("one multiplicity per vertex required");
        }
        if counts.contains(&0) {
            return invalid("multiplicities must be positive");
        }
        let mut start = Vec::with_capacity(self.n);
        let mut total = 0;
        for &c in counts {
            start.push(total);
            total += c;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            for i in 0..counts[u] {
                for j in 0..counts[v] {
                    edges.push((start[u] + i, start[v] + j));
                }
            }
        }
        Graph::new(self.directed, total, edges)
    }

    /// Line graph of a loop-free undirected graph. The legend lists the
    /// original edge `(u, v)`, `u < v`, behind each node.
    pub fn line_graph(&self) -> Result<(Graph, Vec<(usize, usize)>)> {
        if self.directed {
            return precondition("line graphs are defined for undirected graphs");
        }
        if !self.is_loop_free() {
            return precondition("line graphs require a loop-free graph");
        }
        let legend = self.edge_list();
        let mut edges = Vec::new();
        for i in 0..legend.len() {
            for j in i + 1..legend.len() {
                let (a, b) = legend[i];
                let (c, d) = legend[j];
                if a == c || a == d || b == c || b == d {
                    edges.push((i, j));
                }
            }
        }
        Ok((Graph::new(false, legend.len(), edges)?, legend))
    }

    /// Replaces every undirected edge `xy` of `self` by a copy of `ind`,
    /// gluing `a` onto the tail and `b` onto the head (tail chosen by
    /// `orientation`).
    ///
    /// Non-isolated vertices of `self` keep their relative order and come
    /// first; the inner vertices of each copy follow edge by edge. The
    /// legend names a representative `((tail, head), indicator vertex)` for
    /// every node.
    pub fn indicator_product(
        &self,
        ind: &Graph,
        a: usize,
        b: usize,
        orientation: EdgeOrientation,
    ) -> Result<(Graph, Vec<((usize, usize), usize)>)> {
        if self.directed || ind.directed {
            return precondition("indicator products are built from undirected graphs");
        }
        if !self.is_loop_free() {
            return precondition("indicator products require a loop-free graph");
        }
        if a >= ind.n || b >= ind.n || a == b {
            return invalid("terminals must be two distinct indicator vertices");
        }
        let oriented: Vec<(usize, usize)> = self
            .edge_list()
            .into_iter()
            .map(|(u, v)| match orientation {
                EdgeOrientation::LowToHigh => (u, v),
                EdgeOrientation::HighToLow => (v, u),
            })
            .collect();
        let mut id = vec![usize::MAX; self.n];
        let mut legend = Vec::new();
        for v in 0..self.n {
            if let Some(&e) = oriented.iter().find(|&&(x, y)| x == v || y == v) {
                id[v] = legend.len();
                legend.push((e, if e.0 == v { a } else { b }));
            }
        }
        let inner: Vec<usize> = (0..ind.n).filter(|&z| z != a && z != b).collect();
        let mut slot = vec![usize::MAX; ind.n];
        for (k, &z) in inner.iter().enumerate() {
            slot[z] = k;
        }
        let base = legend.len();
        for &e in &oriented {
            for &z in &inner {
                legend.push((e, z));
            }
        }
        let mut edges = Vec::new();
        for (ei, &(x, y)) in oriented.iter().enumerate() {
            let node = |z: usize| -> usize {
                if z == a {
                    id[x]
                } else if z == b {
                    id[y]
                } else {
                    base + ei * inner.len() + slot[z]
                }
            };
            for (p, q) in ind.edge_list() {
                edges.push((node(p), node(q)));
            }
        }
        Ok((Graph::new(false, legend.len(), edges)?, legend))
    }

    /// Closed neighbourhood `N[x]`: in- and out-neighbours plus `x`.
    pub fn closed_neighborhood(&self, x: usize) -> Vec<usize> {
        let mut s = self.out[x].clone();
        s.union_with(&self.inc[x]);
        s.insert(x);
        s.ones().collect()
    }

    /// Removes every vertex of `s` together with its closed neighbourhood.
    pub fn delete_closed_neighborhoods(&self, s: &[usize]) -> Result<Graph> {
        let mut gone = vec![false; self.n];
        for &x in s {
            if x >= self.n {
                return invalid(format!("vertex {x} out of range"));
            }
            for v in self.closed_neighborhood(x) {
                gone[v] = true;
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone[v]).collect();
        self.induced_subgraph(&keep)
    }

    /// Adds a copy of `x` with the same open neighbourhood; the copy gets a
    /// loop, and an edge to `x`, only when `x` has a loop.
    pub fn duplicate_vertex(&self, x: usize) -> Result<Graph> {
        if x >= self.n {
            return invalid(format!("vertex {x} out of range"));
        }
        let mut counts = vec![1; self.n];
        counts[x] = 2;
        let m = self.vertex_multiplication(&counts)?;
        // Move the copy (at x + 1) to the end.
        let perm: Vec<usize> = (0..m.n)
            .map(|v| match v.cmp(&(x + 1)) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => m.n - 1,
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        m.relabel(&perm)
    }

    /// Weakly connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.out[u].ones().chain(self.inc[u].ones()) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    /// Directed distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for w in self.out[u].ones() {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Distance in the underlying undirected graph.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.to_undirected().distances_from(u)[v]
    }

    /// Eccentricities in the underlying undirected graph; `None` when some
    /// vertex is unreachable.
    fn eccentricities(&self) -> Vec<Option<usize>> {
        let und = self.to_undirected();
        (0..self.n)
            .map(|s| und.distances_from(s).into_iter().try_fold(0, |m, d| d.map(|d| m.max(d))))
            .collect()
    }

    /// `None` stands for infinite radius (disconnected or empty graph).
    pub fn radius(&self) -> Option<usize> {
        let ecc = self.eccentricities();
        if ecc.is_empty() || ecc.iter().any(Option::is_none) {
            return None;
        }
        ecc.into_iter().flatten().min()
    }

    pub fn diameter(&self) -> Option<usize> {
        let ecc = self.eccentricities();
        if ecc.is_empty() || ecc.iter().any(Option::is_none) {
            return None;
        }
        ecc.into_iter().flatten().max()
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return invalid("permutation length differs from vertex count");
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return invalid("not a permutation");
            }
            seen[p] = true;
        }
        Graph::new(self.directed, self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// A partition of `0..n` into nonempty blocks, kept in the given order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return invalid("empty block");
            }
            b.sort_unstable();
            for &v in b.iter() {
                if v >= n {
                    return invalid(format!("vertex {v} out of range"));
                }
                if seen[v] {
                    return invalid(format!("vertex {v} in two blocks"));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return invalid("blocks do not cover every vertex");
        }
        Ok(Partition { n, blocks })
    }

    /// Groups vertices by key; blocks are ordered by their least vertex.
    pub fn by_key<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Partition {
        let mut map: std::collections::BTreeMap<K, usize> = Default::default();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            let k = key(v);
            match map.get(&k) {
                Some(&i) => blocks[i].push(v),
                None => {
                    map.insert(k, blocks.len());
                    blocks.push(vec![v]);
                }
            }
        }
        Partition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block index of every vertex.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[v] = i;
            }
        }
        out
    }

    /// Blocks as sorted sets, independent of block order.
    pub fn as_set(&self) -> BTreeSet<Vec<usize>> {
        self.blocks.iter().cloned().collect()
    }
}
