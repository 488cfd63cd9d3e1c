//! Homomorphism variants and a single backtracking engine answering all of
//! them.
//!
//! The engine keeps a candidate set per source vertex, picks the vertex
//! with fewest candidates, and after each assignment restores arc
//! consistency on the edge constraints. Variant-specific rules prune
//! further: injectivity and fullness filter candidates directly, local
//! injectivity forbids repeated images inside a neighbourhood, and the
//! surjectivity variants compare what is still uncovered against what can
//! still be assigned. Before branching, candidates are filtered by solving
//! the radius-two ball around each vertex. For variants whose conditions
//! only couple nearby vertices, parts of the source that no longer share a
//! constraint are solved independently. Debug builds re-verify every
//! witness with [`check_hom`].

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{exhausted, invalid, unsupported, Error, Result};
use crate::generators::complete;
use crate::graph::Graph;
use crate::search::{Budget, Outcome, OutOfBudget, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomConstraint {
    Plain,
    Mono,
    Embedding,
    Full,
    VertexSurjective,
    EdgeSurjective,
    Surjective,
    LocallyInjective,
    LocallySurjective,
    LocallyBijective,
}

impl HomConstraint {
    pub const ALL: [HomConstraint; 10] = [
        HomConstraint::Plain,
        HomConstraint::Mono,
        HomConstraint::Embedding,
        HomConstraint::Full,
        HomConstraint::VertexSurjective,
        HomConstraint::EdgeSurjective,
        HomConstraint::Surjective,
        HomConstraint::LocallyInjective,
        HomConstraint::LocallySurjective,
        HomConstraint::LocallyBijective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HomConstraint::Plain => "plain",
            HomConstraint::Mono => "mono",
            HomConstraint::Embedding => "embedding",
            HomConstraint::Full => "full",
            HomConstraint::VertexSurjective => "vs",
            HomConstraint::EdgeSurjective => "es",
            HomConstraint::Surjective => "surjective",
            HomConstraint::LocallyInjective => "li",
            HomConstraint::LocallySurjective => "ls",
            HomConstraint::LocallyBijective => "lb",
        }
    }

    pub fn injective(self) -> bool {
        matches!(self, HomConstraint::Mono | HomConstraint::Embedding)
    }

    pub fn full(self) -> bool {
        matches!(self, HomConstraint::Full | HomConstraint::Embedding)
    }

    pub fn vertex_surjective(self) -> bool {
        matches!(self, HomConstraint::VertexSurjective | HomConstraint::Surjective)
    }

    pub fn edge_surjective(self) -> bool {
        matches!(self, HomConstraint::EdgeSurjective | HomConstraint::Surjective)
    }

    pub fn locally_injective(self) -> bool {
        matches!(self, HomConstraint::LocallyInjective | HomConstraint::LocallyBijective)
    }

    pub fn locally_surjective(self) -> bool {
        matches!(self, HomConstraint::LocallySurjective | HomConstraint::LocallyBijective)
    }

    pub fn is_local(self) -> bool {
        self.locally_injective() || self.locally_surjective()
    }

    /// Whether the conditions only couple vertices at distance at most two,
    /// so that independent parts of the source can be searched separately.
    fn componentwise(self) -> bool {
        matches!(self, HomConstraint::Plain) || self.is_local()
    }
}

impl fmt::Display for HomConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HomConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace(['-', '_'], "");
        let c = match lower.as_str() {
            "plain" | "hom" => HomConstraint::Plain,
            "mono" | "monomorphism" | "m" => HomConstraint::Mono,
            "embedding" | "e" => HomConstraint::Embedding,
            "full" | "f" => HomConstraint::Full,
            "vs" | "vertexsurjective" => HomConstraint::VertexSurjective,
            "es" | "edgesurjective" => HomConstraint::EdgeSurjective,
            "s" | "surjective" => HomConstraint::Surjective,
            "li" | "locallyinjective" => HomConstraint::LocallyInjective,
            "ls" | "locallysurjective" => HomConstraint::LocallySurjective,
            "lb" | "locallybijective" => HomConstraint::LocallyBijective,
            _ => return invalid(format!("unknown constraint {s}")),
        };
        Ok(c)
    }
}

/// Verifies that `f` is a homomorphism `g -> h` of the given variant.
pub fn check_hom(f: &[usize], g: &Graph, h: &Graph, c: HomConstraint) -> bool {
    if f.len() != g.n() || f.iter().any(|&a| a >= h.n()) || g.is_directed() != h.is_directed() {
        return false;
    }
    if !g.arcs().all(|(u, v)| h.has_edge(f[u], f[v])) {
        return false;
    }
    if c.injective() {
        let mut seen = vec![false; h.n()];
        for &a in f {
            if std::mem::replace(&mut seen[a], true) {
                return false;
            }
        }
    }
    if c.full() {
        for u in 0..g.n() {
            for v in 0..g.n() {
                if h.has_edge(f[u], f[v]) && !g.has_edge(u, v) {
                    return false;
                }
            }
        }
    }
    if c.vertex_surjective() {
        let mut hit = vec![false; h.n()];
        for &a in f {
            hit[a] = true;
        }
        if hit.iter().any(|x| !x) {
            return false;
        }
    }
    if c.edge_surjective() {
        let covered: std::collections::HashSet<(usize, usize)> = g.arcs().map(|(u, v)| (f[u], f[v])).collect();
        if h.arcs().any(|e| !covered.contains(&e)) {
            return false;
        }
    }
    if c.locally_injective() {
        for v in 0..g.n() {
            let mut seen = FixedBitSet::with_capacity(h.n());
            for w in g.out_set(v).ones() {
                if seen.put(f[w]) {
                    return false;
                }
            }
        }
    }
    if c.locally_surjective() {
        for v in 0..g.n() {
            let mut img = FixedBitSet::with_capacity(h.n());
            for w in g.out_set(v).ones() {
                img.insert(f[w]);
            }
            if !h.out_set(f[v]).is_subset(&img) {
                return false;
            }
        }
    }
    true
}

/// First homomorphism `g -> h` of variant `c`.
pub fn find_hom(g: &Graph, h: &Graph, c: HomConstraint, cfg: &SearchConfig) -> Result<Outcome<Vec<usize>>> {
    find_hom_in(g, h, c, None, cfg).map(|(o, _)| o)
}

/// Like [`find_hom`], with each source vertex `v` restricted to the
/// targets in `domains[v]`. Also returns the number of search nodes used.
pub fn find_hom_in(
    g: &Graph,
    h: &Graph,
    c: HomConstraint,
    domains: Option<&[Vec<usize>]>,
    cfg: &SearchConfig,
) -> Result<(Outcome<Vec<usize>>, u64)> {
    if g.is_directed() != h.is_directed() {
        return invalid("source and target must have the same directedness");
    }
    if c.is_local() && g.is_directed() {
        return unsupported("locally constrained homomorphisms are defined for undirected graphs");
    }
    if let Some(d) = domains {
        if d.len() != g.n() || d.iter().flatten().any(|&a| a >= h.n()) {
            return invalid("domain restriction does not match the graphs");
        }
    }
    let search = || {
        let mut engine = Engine::new(g, h, c, domains, cfg);
        let outcome = engine.run();
        (outcome, engine.budget.used())
    };
    if g.n() <= INLINE_SEARCH_MAX {
        return Ok(search());
    }
    // The search recurses once per assigned vertex.
    let result = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_PER_VERTEX * g.n())
            .spawn_scoped(s, search)
            .map(|handle| handle.join().unwrap_or_else(|p| std::panic::resume_unwind(p)))
    });
    result.map_err(|e| Error::InvalidParameter(format!("cannot start search thread: {e}")))
}

/// Largest source searched on the caller's stack.
const INLINE_SEARCH_MAX: usize = 256;
const STACK_PER_VERTEX: usize = 8 * 1024;

struct Engine<'a> {
    g: &'a Graph,
    h: &'a Graph,
    c: HomConstraint,
    /// Neighbours along arcs, self excluded (loops are handled up front).
    g_out: Vec<Vec<usize>>,
    g_in: Vec<Vec<usize>>,
    g_deg: Vec<usize>,
    init: Vec<FixedBitSet>,
    /// Index into `init_unions` for each source vertex.
    init_class: Vec<usize>,
    /// Out- and in-neighbourhood unions of each distinct initial domain.
    init_unions: Vec<(FixedBitSet, FixedBitSet)>,
    budget: Budget,
    rng: Option<ChaCha8Rng>,
    h_arcs: Vec<(usize, usize)>,
    g_arcs: Vec<(usize, usize)>,
    decomposable: bool,
    /// Whether to filter candidates by searching the ball around each vertex.
    ball_filter: bool,
    /// Vertices sharing a constraint with each vertex: neighbours, plus
    /// vertices at distance two for the local variants.
    links: Vec<Vec<usize>>,
}

/// Candidate sets with an undo trail. Each search level saves a domain the
/// first time it changes, so memory follows the number of changes rather
/// than depth times source size.
struct Domains {
    sets: Vec<FixedBitSet>,
    trail: Vec<(usize, FixedBitSet)>,
    saved_in: Vec<u64>,
    /// Open levels as `(id, trail length on entry)`.
    levels: Vec<(u64, usize)>,
    next_id: u64,
}

impl Domains {
    fn new(sets: Vec<FixedBitSet>) -> Self {
        let n = sets.len();
        Domains { sets, trail: Vec::new(), saved_in: vec![0; n], levels: Vec::new(), next_id: 0 }
    }

    fn modify(&mut self, v: usize) -> &mut FixedBitSet {
        if let Some(&(id, _)) = self.levels.last() {
            if self.saved_in[v] != id {
                self.saved_in[v] = id;
                self.trail.push((v, self.sets[v].clone()));
            }
        }
        &mut self.sets[v]
    }

    fn push_level(&mut self) {
        self.next_id += 1;
        self.levels.push((self.next_id, self.trail.len()));
    }

    /// Restores every domain changed since the matching `push_level`.
    fn undo_level(&mut self) {
        let (_, mark) = self.levels.pop().expect("open level");
        while self.trail.len() > mark {
            let (v, old) = self.trail.pop().expect("nonempty trail");
            self.sets[v] = old;
        }
    }

    /// Keeps the changes; they are undone with the enclosing level.
    fn commit_level(&mut self) {
        self.levels.pop().expect("open level");
    }
}

impl std::ops::Index<usize> for Domains {
    type Output = FixedBitSet;

    fn index(&self, v: usize) -> &FixedBitSet {
        &self.sets[v]
    }
}

const UNSET: usize = usize::MAX;
/// Domains at least this large use the precomputed unions in propagation.
const LARGE_DOMAIN: usize = 256;

impl<'a> Engine<'a> {
    fn new(g: &'a Graph, h: &'a Graph, c: HomConstraint, domains: Option<&[Vec<usize>]>, cfg: &SearchConfig) -> Self {
        let nh = h.n();
        let g_out: Vec<Vec<usize>> = (0..g.n()).map(|v| g.out_set(v).ones().filter(|&w| w != v).collect()).collect();
        let g_in: Vec<Vec<usize>> = (0..g.n()).map(|v| g.in_set(v).ones().filter(|&w| w != v).collect()).collect();
        let g_deg = (0..g.n()).map(|v| g_out[v].len() + g_in[v].len()).collect();
        let h_deg: Vec<usize> = (0..nh).map(|a| h.degree(a)).collect();
        let mut init = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            let mut d = FixedBitSet::with_capacity(nh);
            match domains {
                Some(ds) => ds[v].iter().for_each(|&a| d.insert(a)),
                None => d.insert_range(..),
            }
            let deg = g.degree(v);
            for a in 0..nh {
                let ok = (!g.has_loop(v) || h.has_loop(a))
                    && (!c.full() || g.has_loop(v) || !h.has_loop(a))
                    && (!c.locally_injective() || deg <= h_deg[a])
                    && (!c.locally_surjective() || deg >= h_deg[a])
                    && (g.out_set(v).is_clear() || !h.out_set(a).is_clear())
                    && (g.in_set(v).is_clear() || !h.in_set(a).is_clear());
                if !ok {
                    d.set(a, false);
                }
            }
            init.push(d);
        }
        let mut classes: HashMap<&FixedBitSet, usize> = HashMap::new();
        let mut init_unions = Vec::new();
        let init_class = init
            .iter()
            .map(|dv| {
                *classes.entry(dv).or_insert_with(|| {
                    let mut succ = FixedBitSet::with_capacity(nh);
                    let mut pred = FixedBitSet::with_capacity(nh);
                    for b in dv.ones() {
                        succ.union_with(h.out_set(b));
                        pred.union_with(h.in_set(b));
                    }
                    init_unions.push((succ, pred));
                    init_unions.len() - 1
                })
            })
            .collect();
        let rng = (cfg.seed != 0).then(|| ChaCha8Rng::seed_from_u64(cfg.seed));
        let links = (0..g.n())
            .map(|v| {
                let mut s = g.out_set(v).clone();
                s.union_with(g.in_set(v));
                if c.is_local() {
                    for w in g.out_set(v).ones() {
                        s.union_with(g.out_set(w));
                    }
                }
                s.set(v, false);
                s.ones().collect()
            })
            .collect();
        Engine {
            g,
            h,
            c,
            g_out,
            g_in,
            g_deg,
            init,
            init_class,
            init_unions,
            budget: Budget::new(cfg.max_nodes),
            rng,
            h_arcs: h.arcs().collect(),
            g_arcs: g.arcs().collect(),
            decomposable: c.componentwise(),
            ball_filter: true,
            links,
        }
    }

    fn run(&mut self) -> Outcome<Vec<usize>> {
        let n = self.g.n();
        let mut f = vec![UNSET; n];
        let mut domains = Domains::new(self.init.clone());
        if !self.propagate(&mut domains, (0..n).collect()) {
            return Outcome::Absent;
        }
        match self.filter_by_balls(&mut domains) {
            Ok(true) => {}
            Ok(false) => return Outcome::Absent,
            Err(OutOfBudget) => return Outcome::Exhausted,
        }
        let all: Vec<usize> = (0..n).collect();
        match self.solve(&all, &mut domains, &mut f) {
            Ok(true) => {}
            Ok(false) => return Outcome::Absent,
            Err(OutOfBudget) => return Outcome::Exhausted,
        }
        if n == 0 && !check_hom(&f, self.g, self.h, self.c) {
            return Outcome::Absent;
        }
        debug_assert!(check_hom(&f, self.g, self.h, self.c));
        Outcome::Found(f)
    }

    /// Arc consistency over the edge constraints, starting from `queue`.
    fn propagate(&self, d: &mut Domains, queue: Vec<usize>) -> bool {
        let nh = self.h.n();
        let mut in_queue = vec![false; self.g.n()];
        let mut queue: VecDeque<usize> = queue.into_iter().collect();
        for &v in &queue {
            in_queue[v] = true;
        }
        let directed = self.g.is_directed();
        // Large domains are approximated from above by the initial domain,
        // whose unions are precomputed. This prunes less but never wrongly.
        let union = |v: usize, dv: &FixedBitSet, out: bool| {
            if dv.count_ones(..) >= LARGE_DOMAIN {
                let (succ, pred) = &self.init_unions[self.init_class[v]];
                return if out { succ.clone() } else { pred.clone() };
            }
            let mut acc = FixedBitSet::with_capacity(nh);
            for b in dv.ones() {
                acc.union_with(if out { self.h.out_set(b) } else { self.h.in_set(b) });
            }
            acc
        };
        while let Some(v) = queue.pop_front() {
            in_queue[v] = false;
            let succ = union(v, &d[v], true);
            for &w in &self.g_out[v] {
                if d[w].is_subset(&succ) {
                    continue;
                }
                let dw = d.modify(w);
                dw.intersect_with(&succ);
                let after = dw.count_ones(..);
                if after == 0 {
                    return false;
                }
                if !in_queue[w] {
                    in_queue[w] = true;
                    queue.push_back(w);
                }
            }
            if directed {
                let pred = union(v, &d[v], false);
                for &w in &self.g_in[v] {
                    if d[w].is_subset(&pred) {
                        continue;
                    }
                    let dw = d.modify(w);
                    dw.intersect_with(&pred);
                    let after = dw.count_ones(..);
                    if after == 0 {
                            return false;
                    }
                    if !in_queue[w] {
                        in_queue[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        true
    }

    /// Removes `a` from the candidates of `v` when the subgraph induced by
    /// the vertices within distance two of `v` has no map of a weaker
    /// variant sending `v` to `a`. Balls without cycles are skipped. Only the variants whose conditions
    /// survive restriction to an induced subgraph are used.
    fn filter_by_balls(&mut self, d: &mut Domains) -> std::result::Result<bool, OutOfBudget> {
        const MIN_SOURCE: usize = 16;
        // One sub-search per candidate pair stops paying off on large inputs.
        const MAX_PAIRS: usize = 250_000;
        let pairs: usize = (0..self.g.n()).map(|v| d[v].count_ones(..)).sum();
        if !self.ball_filter || self.g.n() < MIN_SOURCE || pairs > MAX_PAIRS {
            return Ok(true);
        }
        let local = match self.c {
            HomConstraint::Plain
            | HomConstraint::Mono
            | HomConstraint::Embedding
            | HomConstraint::Full
            | HomConstraint::LocallyInjective => self.c,
            HomConstraint::LocallyBijective => HomConstraint::LocallyInjective,
            _ => HomConstraint::Plain,
        };
        let und = self.g.to_undirected();
        for v in 0..self.g.n() {
            let dist = und.distances_from(v);
            let ball: Vec<usize> = (0..self.g.n()).filter(|&w| dist[w].is_some_and(|k| k <= 2)).collect();
            if ball.len() == self.g.n() {
                continue;
            }
            let sub = self.g.induced_subgraph(&ball).expect("ball vertices are in range");
            // Arc consistency already decides acyclic balls.
            if und.induced_subgraph(&ball).expect("in range").edge_count() < ball.len() {
                continue;
            }
            let centre = ball.binary_search(&v).expect("centre is in its ball");
            let mut changed = false;
            for a in d[v].ones().collect::<Vec<_>>() {
                let mut doms: Vec<Vec<usize>> = ball.iter().map(|&w| d[w].ones().collect()).collect();
                doms[centre] = vec![a];
                let cfg = SearchConfig { max_nodes: self.budget.remaining(), seed: 0 };
                let mut inner = Engine::new(&sub, self.h, local, Some(&doms), &cfg);
                inner.ball_filter = false;
                let outcome = inner.run();
                self.budget.charge(inner.budget.used())?;
                match outcome {
                    Outcome::Absent => {
                        d.modify(v).set(a, false);
                        changed = true;
                    }
                    Outcome::Exhausted => return Err(OutOfBudget),
                    Outcome::Found(_) => {}
                }
            }
            if d[v].is_clear() {
                return Ok(false);
            }
            if changed && !self.propagate(d, vec![v]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies the variant rules triggered by `f(u) = a`; returns the
    /// vertices whose candidates shrank, or `None` on a wipe-out.
    fn assign_rules(&self, d: &mut Domains, f: &[usize], u: usize, a: usize) -> Option<Vec<usize>> {
        let n = self.g.n();
        let mut changed = vec![u];
        let mut shrink = |d: &mut Domains, w: usize, remove: &dyn Fn(&mut FixedBitSet)| -> bool {
            let mut next = d[w].clone();
            remove(&mut next);
            if next != d[w] {
                changed.push(w);
                *d.modify(w) = next;
            }
            !d[w].is_clear()
        };
        if self.c.injective() {
            for w in (0..n).filter(|&w| w != u && f[w] == UNSET) {
                if !shrink(d, w, &|s| s.set(a, false)) {
                    return None;
                }
            }
        }
        if self.c.full() {
            for w in (0..n).filter(|&w| w != u) {
                let out_ok = self.g.has_edge(u, w);
                let in_ok = self.g.has_edge(w, u);
                let rule = |s: &mut FixedBitSet| {
                    if !out_ok {
                        s.difference_with(self.h.out_set(a));
                    }
                    if !in_ok {
                        s.difference_with(self.h.in_set(a));
                    }
                };
                if !shrink(d, w, &rule) {
                    return None;
                }
            }
        }
        if self.c.locally_injective() {
            for w in self.g.out_set(u).ones() {
                for x in self.g.out_set(w).ones().filter(|&x| x != u) {
                    if !shrink(d, x, &|s| s.set(a, false)) {
                        return None;
                    }
                }
            }
        }
        changed.sort_unstable();
        changed.dedup();
        Some(changed)
    }

    /// Counting and coverage bounds for the global and locally surjective
    /// variants.
    fn feasible(&self, d: &Domains, f: &[usize], active: &[usize]) -> bool {
        let nh = self.h.n();
        if self.c.vertex_surjective() {
            let mut covered = FixedBitSet::with_capacity(nh);
            let mut reachable = FixedBitSet::with_capacity(nh);
            let mut free = 0;
            for v in 0..self.g.n() {
                if f[v] == UNSET {
                    free += 1;
                    reachable.union_with(&d[v]);
                } else {
                    covered.insert(f[v]);
                }
            }
            let uncovered = nh - covered.count_ones(..);
            reachable.union_with(&covered);
            if uncovered > free || reachable.count_ones(..) < nh {
                return false;
            }
        }
        if self.c.edge_surjective() {
            let mut covered = std::collections::HashSet::new();
            let mut open = 0;
            for &(u, v) in &self.g_arcs {
                if f[u] != UNSET && f[v] != UNSET {
                    covered.insert((f[u], f[v]));
                } else {
                    open += 1;
                }
            }
            let uncovered: Vec<&(usize, usize)> = self.h_arcs.iter().filter(|e| !covered.contains(e)).collect();
            if uncovered.len() > open {
                return false;
            }
            if self.g_arcs.len() * uncovered.len() <= 20_000 {
                for &&(a, b) in &uncovered {
                    if !self.g_arcs.iter().any(|&(u, v)| d[u].contains(a) && d[v].contains(b)) {
                        return false;
                    }
                }
            }
        }
        if self.c.locally_surjective() {
            for &v in active {
                if f[v] == UNSET {
                    continue;
                }
                let mut img = FixedBitSet::with_capacity(nh);
                let mut reach = FixedBitSet::with_capacity(nh);
                let mut free = 0;
                for w in self.g.out_set(v).ones() {
                    if f[w] == UNSET {
                        free += 1;
                        reach.union_with(&d[w]);
                    } else {
                        img.insert(f[w]);
                    }
                }
                let need = self.h.out_set(f[v]);
                let missing = need.difference(&img).count();
                if missing > free {
                    return false;
                }
                reach.union_with(&img);
                if !need.is_subset(&reach) {
                    return false;
                }
            }
        }
        true
    }

    fn choose(&self, d: &Domains, free: &[usize]) -> usize {
        *free
            .iter()
            .min_by_key(|&&v| (d[v].count_ones(..), std::cmp::Reverse(self.g_deg[v]), v))
            .expect("nonempty")
    }

    /// Splits the unassigned vertices into groups that share no
    /// constraint once the assigned vertices are fixed.
    fn split(&self, free: &[usize], f: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.g.n()];
        let mut groups = Vec::new();
        for &s in free {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut group = vec![s];
            let mut i = 0;
            while i < group.len() {
                let v = group[i];
                i += 1;
                for &w in &self.links[v] {
                    if !seen[w] && f[w] == UNSET {
                        seen[w] = true;
                        group.push(w);
                    }
                }
            }
            group.sort_unstable();
            groups.push(group);
        }
        groups
    }

    /// Assigns every vertex of `vars`. For decomposable variants independent
    /// groups are solved one after another, smallest first, without
    /// backtracking between them. On failure `f` is restored.
    fn solve(&mut self, vars: &[usize], d: &mut Domains, f: &mut Vec<usize>) -> std::result::Result<bool, OutOfBudget> {
        let free: Vec<usize> = vars.iter().copied().filter(|&v| f[v] == UNSET).collect();
        if free.is_empty() {
            return Ok(self.decomposable || check_hom(f, self.g, self.h, self.c));
        }
        let mut groups = if self.decomposable { self.split(&free, f) } else { vec![free.clone()] };
        // Small groups first: a failing group then costs little.
        groups.sort_by_key(Vec::len);
        let result = if groups.len() > 1 {
            let mut all = true;
            for group in &groups {
                if !self.solve(group, d, f)? {
                    all = false;
                    break;
                }
            }
            all
        } else {
            self.branch(&groups[0], d, f)?
        };
        if !result {
            for &v in &free {
                f[v] = UNSET;
            }
        }
        Ok(result)
    }

    fn branch(&mut self, group: &[usize], d: &mut Domains, f: &mut Vec<usize>) -> std::result::Result<bool, OutOfBudget> {
        let u = self.choose(d, group);
        let mut values: Vec<usize> = d[u].ones().collect();
        if let Some(rng) = self.rng.as_mut() {
            values.shuffle(rng);
        }
        for a in values {
            self.budget.tick()?;
            d.push_level();
            let du = d.modify(u);
            du.clear();
            du.insert(a);
            f[u] = a;
            let ok = (!self.decomposable || self.local_ok(f, u)) && match self.assign_rules(d, f, u, a) {
                Some(changed) => self.propagate(d, changed) && self.feasible(d, f, group),
                None => false,
            };
            if ok && self.solve(group, d, f)? {
                d.commit_level();
                return Ok(true);
            }
            d.undo_level();
            f[u] = UNSET;
        }
        Ok(false)
    }

    /// Conditions that the assignment of `u` completes: arcs between
    /// assigned vertices near `u`, and the local variant conditions at `u`
    /// and its neighbours.
    fn local_ok(&self, f: &[usize], u: usize) -> bool {
        let h = self.h;
        let mut around = self.g.out_set(u).clone();
        around.union_with(self.g.in_set(u));
        around.insert(u);
        for v in around.ones().filter(|&v| f[v] != UNSET) {
            let assigned = || self.g.out_set(v).ones().filter(|&w| f[w] != UNSET);
            if assigned().any(|w| !h.has_edge(f[v], f[w])) {
                return false;
            }
            if self.c.locally_injective() {
                let mut seen = FixedBitSet::with_capacity(h.n());
                if assigned().any(|w| seen.put(f[w])) {
                    return false;
                }
            }
            if self.c.locally_surjective() && assigned().count() == self.g.out_set(v).count_ones(..) {
                let mut img = FixedBitSet::with_capacity(h.n());
                assigned().for_each(|w| img.insert(f[w]));
                if !h.out_set(f[v]).is_subset(&img) {
                    return false;
                }
            }
        }
        true
    }
}

/// Least `k` with a homomorphism to `K_k`.
pub fn chromatic_number(g: &Graph, cfg: &SearchConfig) -> Result<usize> {
    if g.is_directed() || !g.is_loop_free() {
        return invalid("chromatic number needs a loop-free undirected graph");
    }
    for k in 1..=g.n() {
        match find_hom(g, &complete(k)?, HomConstraint::Plain, cfg)? {
            Outcome::Found(_) => return Ok(k),
            Outcome::Absent => {}
            Outcome::Exhausted => return exhausted(format!("colouring with {k} colours")),
        }
    }
    Ok(0)
}

/// Chromatic number of the line graph.
pub fn chromatic_index(g: &Graph, cfg: &SearchConfig) -> Result<usize> {
    chromatic_number(&g.line_graph()?.0, cfg)
}

/// Whether every endomorphism is surjective: for each vertex `v`, no
/// endomorphism avoids `v`.
pub fn is_core(g: &Graph, cfg: &SearchConfig) -> Result<bool> {
    Ok(shrinking_endomorphism(g, cfg)?.is_none())
}

/// An endomorphism whose image misses some vertex.
pub(crate) fn shrinking_endomorphism(g: &Graph, cfg: &SearchConfig) -> Result<Option<Vec<usize>>> {
    for v in 0..g.n() {
        let doms: Vec<Vec<usize>> = (0..g.n()).map(|_| (0..g.n()).filter(|&a| a != v).collect()).collect();
        match find_hom_in(g, g, HomConstraint::Plain, Some(&doms), cfg)?.0 {
            Outcome::Found(f) => return Ok(Some(f)),
            Outcome::Absent => {}
            Outcome::Exhausted => return exhausted(format!("endomorphism avoiding vertex {v}")),
        }
    }
    Ok(None)
}

/// The factorisation `f = i ∘ s` through the homomorphic image: the image
/// graph has vertices `f(V)` (ascending) and the images of all arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageFactorization {
    pub image: Graph,
    /// Surjective part `g -> image`.
    pub s: Vec<usize>,
    /// Injective part `image -> h`.
    pub i: Vec<usize>,
}

pub fn image_factorization(g: &Graph, h: &Graph, f: &[usize]) -> Result<ImageFactorization> {
    if !check_hom(f, g, h, HomConstraint::Plain) {
        return invalid("not a homomorphism");
    }
    let mut i: Vec<usize> = f.to_vec();
    i.sort_unstable();
    i.dedup();
    let s: Vec<usize> = f.iter().map(|a| i.binary_search(a).expect("present")).collect();
    let image = Graph::new(g.is_directed(), i.len(), g.arcs().map(|(u, v)| (s[u], s[v])))?;
    Ok(ImageFactorization { image, s, i })
}
