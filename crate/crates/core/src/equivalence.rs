//! Relational equivalences and the reduced graphs they determine:
//! point-determining quotients, R-cores, cocores and graph cores, plus
//! exhaustive relation search.

use fixedbitset::FixedBitSet;

use crate::error::{exhausted, invalid, precondition, unsupported, Result};
use crate::graph::{Graph, Partition};
use crate::hom::{check_hom, shrinking_endomorphism, HomConstraint};
use crate::iso::is_isomorphic;
use crate::relation::{apply_strong, Relation};
use crate::search::{Budget, Outcome, OutOfBudget, SearchConfig};

/// The point-determining quotient `G_pd` with its classes and the
/// membership relation `R_S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdQuotient {
    pub quotient: Graph,
    pub classes: Partition,
    pub membership: Relation,
}

/// Groups vertices with equal neighbourhoods (in- and out-neighbourhoods
/// when directed).
pub fn pd_quotient(g: &Graph) -> PdQuotient {
    let key = |v: usize| -> (Vec<usize>, Vec<usize>) {
        let ins = if g.is_directed() { g.in_neighbors(v) } else { Vec::new() };
        (g.neighbors(v), ins)
    };
    let classes = Partition::by_key(g.n(), key);
    let quotient = g.quotient(&classes).expect("partition of g");
    let block = classes.block_of();
    let membership = Relation::new(g.n(), classes.len(), block.iter().copied().enumerate()).expect("in range");
    PdQuotient { quotient, classes, membership }
}

pub fn is_point_determining(g: &Graph) -> bool {
    pd_quotient(g).classes.len() == g.n()
}

pub fn strongly_equivalent(g: &Graph, h: &Graph) -> bool {
    is_isomorphic(&pd_quotient(g).quotient, &pd_quotient(h).quotient)
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return unsupported("this operation is defined for undirected graphs");
    }
    Ok(())
}

/// Repeatedly deletes the least vertex `v` whose neighbourhood is the union
/// of the neighbourhoods it contains, and (when `dominated` is set) which is
/// contained in some other neighbourhood. Isolated vertices are stripped
/// first and one of them is kept. Returns the surviving vertices.
fn reduce(g: &Graph, dominated: bool) -> Vec<usize> {
    let n = g.n();
    let isolated = g.isolated_vertices();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    for &v in &isolated {
        alive.set(v, false);
    }
    let nbhd = |alive: &FixedBitSet, v: usize| {
        let mut s = g.out_set(v).clone();
        s.intersect_with(alive);
        s
    };
    'outer: loop {
        let vs: Vec<usize> = alive.ones().collect();
        let nb: Vec<FixedBitSet> = (0..n).map(|v| nbhd(&alive, v)).collect();
        for &v in &vs {
            let mut union = FixedBitSet::with_capacity(n);
            for &j in &vs {
                if j != v && nb[j].is_subset(&nb[v]) {
                    union.union_with(&nb[j]);
                }
            }
            if union != nb[v] {
                continue;
            }
            if dominated && !vs.iter().any(|&u| u != v && nb[v].is_subset(&nb[u])) {
                continue;
            }
            alive.set(v, false);
            continue 'outer;
        }
        break;
    }
    if let Some(&i) = isolated.first() {
        alive.insert(i);
    }
    alive.ones().collect()
}

/// Vertices of the R-core kept by the deletion rule, ascending.
pub fn r_core_vertices(g: &Graph) -> Result<Vec<usize>> {
    require_undirected(g)?;
    Ok(reduce(g, true))
}

/// The R-core, as an induced subgraph of `g`.
pub fn r_core(g: &Graph) -> Result<Graph> {
    g.induced_subgraph(&r_core_vertices(g)?)
}

pub fn weakly_equivalent(g: &Graph, h: &Graph) -> Result<bool> {
    Ok(is_isomorphic(&r_core(g)?, &r_core(h)?))
}

/// Vertices of the cocore, ascending.
pub fn cocore_vertices(g: &Graph) -> Result<Vec<usize>> {
    require_undirected(g)?;
    Ok(reduce(g, false))
}

/// The cocore, as an induced subgraph of `g`.
pub fn cocore(g: &Graph) -> Result<Graph> {
    g.induced_subgraph(&cocore_vertices(g)?)
}

/// `N(x) ⊆ N(y)` only when `x = y`.
pub fn has_property_n(g: &Graph) -> Result<bool> {
    require_undirected(g)?;
    let n = g.n();
    Ok((0..n).all(|x| (0..n).all(|y| x == y || !g.out_set(x).is_subset(g.out_set(y)))))
}

/// No neighbourhood is the union of the (one or more) other neighbourhoods
/// it contains.
pub fn has_property_nstar(g: &Graph) -> Result<bool> {
    require_undirected(g)?;
    Ok((0..g.n()).all(|x| !is_union_of_others(g, x)))
}

fn is_union_of_others(g: &Graph, x: usize) -> bool {
    let mut union = FixedBitSet::with_capacity(g.n());
    let mut any = false;
    for y in (0..g.n()).filter(|&y| y != x) {
        if g.out_set(y).is_subset(g.out_set(x)) {
            union.union_with(g.out_set(y));
            any = true;
        }
    }
    any && union == *g.out_set(x)
}

/// The unique least set `B` such that every neighbourhood is a union of
/// neighbourhoods of vertices in `B`. An isolated vertex needs no basis
/// element, so it never belongs to `B`.
pub fn minimal_basis(g: &Graph) -> Result<Vec<usize>> {
    require_undirected(g)?;
    if !is_point_determining(g) {
        return precondition("minimal basis needs a point-determining graph");
    }
    Ok((0..g.n()).filter(|&x| !g.is_isolated(x) && !is_union_of_others(g, x)).collect())
}

/// A core of `g` together with a retraction onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    pub core: Graph,
    /// Vertices of `g` spanning the core, ascending.
    pub vertices: Vec<usize>,
    /// Retraction `g -> g[vertices]` in original labels; identity on
    /// `vertices`.
    pub retraction: Vec<usize>,
}

/// Shrinks `g` along endomorphisms that miss a vertex until none exists;
/// the surviving induced subgraph is a core, and composing the
/// endomorphisms with the inverse of the final automorphism gives a
/// retraction.
pub fn graph_core(g: &Graph, cfg: &SearchConfig) -> Result<CoreResult> {
    let mut verts: Vec<usize> = (0..g.n()).collect();
    let mut phi: Vec<usize> = (0..g.n()).collect();
    loop {
        let sub = g.induced_subgraph(&verts)?;
        let Some(f) = shrinking_endomorphism(&sub, cfg)? else { break };
        for p in phi.iter_mut() {
            let local = verts.binary_search(p).expect("phi maps into verts");
            *p = verts[f[local]];
        }
        let mut next: Vec<usize> = f.iter().map(|&i| verts[i]).collect();
        next.sort_unstable();
        next.dedup();
        verts = next;
    }
    // phi restricted to verts is an automorphism of the core; undo it.
    let mut inverse = vec![usize::MAX; g.n()];
    for &v in &verts {
        inverse[phi[v]] = v;
    }
    let retraction: Vec<usize> = phi.iter().map(|&p| inverse[p]).collect();
    let core = g.induced_subgraph(&verts)?;
    debug_assert!({
        let local: Vec<usize> = retraction.iter().map(|r| verts.binary_search(r).unwrap()).collect();
        check_hom(&local, g, &core, HomConstraint::Plain)
    });
    Ok(CoreResult { core, vertices: verts, retraction })
}

/// Backtracking over target preimages. Each target `b` receives a nonempty
/// set `S_b` of source vertices; `a b` must be an edge exactly when some arc
/// runs from `S_a` to `S_b`.
struct RelSearch<'a> {
    h: &'a Graph,
    n: usize,
    full_domain: bool,
    order: Vec<usize>,
    out_mask: Vec<u64>,
    candidates: Vec<Vec<u64>>,
    budget: Budget,
}

impl<'a> RelSearch<'a> {
    fn new(g: &'a Graph, h: &'a Graph, full_domain: bool, cfg: &SearchConfig) -> Result<Self> {
        if g.is_directed() != h.is_directed() {
            return invalid("source and target must have the same directedness");
        }
        let n = g.n();
        if n > 20 {
            return unsupported("relation search is limited to sources with at most 20 vertices");
        }
        let mask_of = |s: &FixedBitSet| s.ones().fold(0u64, |m, w| m | (1 << w));
        let out_of: Vec<u64> = (0..n).map(|v| mask_of(g.out_set(v))).collect();
        let mut masks: Vec<u64> = (1u64..(1u64 << n)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let out_mask_fn = |s: u64| (0..n).filter(|&v| s >> v & 1 == 1).fold(0u64, |m, v| m | out_of[v]);
        let out_mask: Vec<u64> = if n <= 16 { (0..(1u64 << n)).map(out_mask_fn).collect() } else { Vec::new() };
        let candidates = (0..h.n())
            .map(|b| {
                masks
                    .iter()
                    .copied()
                    .filter(|&s| {
                        let out = if n <= 16 { out_mask[s as usize] } else { out_mask_fn(s) };
                        (out & s != 0) == h.has_loop(b)
                            && (out != 0 || h.out_set(b).is_clear())
                            && (out_mask_in(g, s) != 0 || h.in_set(b).is_clear())
                    })
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..h.n()).collect();
        order.sort_by_key(|&b| (std::cmp::Reverse(h.degree(b) + h.in_degree(b)), b));
        let out_mask = if n <= 16 { out_mask } else { (0..n).map(|v| out_of[v]).collect() };
        Ok(RelSearch { h, n, full_domain, order, out_mask, candidates, budget: Budget::new(cfg.max_nodes) })
    }

    fn out_of(&self, s: u64) -> u64 {
        if self.n <= 16 {
            self.out_mask[s as usize]
        } else {
            (0..self.n).filter(|&v| s >> v & 1 == 1).fold(0u64, |m, v| m | self.out_mask[v])
        }
    }

    /// Visits every solution; `visit` returns `false` to stop early.
    fn run(&mut self, visit: &mut dyn FnMut(&[u64]) -> bool) -> std::result::Result<bool, OutOfBudget> {
        let mut sets = vec![0u64; self.h.n()];
        let mut outs = vec![0u64; self.h.n()];
        self.dfs(0, &mut sets, &mut outs, visit)
    }

    fn dfs(
        &mut self,
        depth: usize,
        sets: &mut Vec<u64>,
        outs: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> std::result::Result<bool, OutOfBudget> {
        if depth == self.order.len() {
            if self.full_domain {
                let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
                if sets.iter().fold(0, |m, s| m | s) != all {
                    return Ok(true);
                }
            }
            return Ok(visit(sets));
        }
        let b = self.order[depth];
        for ci in 0..self.candidates[b].len() {
            let s = self.candidates[b][ci];
            let out = self.out_of(s);
            let consistent = self.order[..depth].iter().all(|&a| {
                (outs[a] & s != 0) == self.h.has_edge(a, b) && (out & sets[a] != 0) == self.h.has_edge(b, a)
            });
            if !consistent {
                continue;
            }
            self.budget.tick()?;
            sets[b] = s;
            outs[b] = out;
            let keep_going = self.dfs(depth + 1, sets, outs, visit)?;
            sets[b] = 0;
            outs[b] = 0;
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn out_mask_in(g: &Graph, s: u64) -> u64 {
    (0..g.n()).filter(|&v| s >> v & 1 == 1).fold(0u64, |m, v| m | g.in_set(v).ones().fold(0, |a, w| a | (1 << w)))
}

fn sets_to_relation(n: usize, sets: &[u64]) -> Relation {
    let pairs = sets.iter().enumerate().flat_map(|(b, &s)| (0..n).filter(move |&x| s >> x & 1 == 1).map(move |x| (x, b)));
    Relation::new(n, sets.len(), pairs).expect("in range")
}

/// Some relation `r` with `g * r = h` (with full domain if requested).
pub fn find_relation(g: &Graph, h: &Graph, full_domain: bool, cfg: &SearchConfig) -> Result<Outcome<Relation>> {
    if h.n() == 0 {
        let ok = !full_domain || g.n() == 0;
        return Ok(if ok { Outcome::Found(Relation::new(g.n(), 0, [])?) } else { Outcome::Absent });
    }
    let mut search = RelSearch::new(g, h, full_domain, cfg)?;
    let mut found = None;
    let res = search.run(&mut |sets| {
        found = Some(sets.to_vec());
        false
    });
    Ok(match (res, found) {
        (_, Some(sets)) => {
            let r = sets_to_relation(g.n(), &sets);
            debug_assert_eq!(apply_strong(g, &r).as_ref(), Ok(h));
            Outcome::Found(r)
        }
        (Ok(_), None) => Outcome::Absent,
        (Err(OutOfBudget), None) => Outcome::Exhausted,
    })
}

/// Every relation `r` with `g * r = h`; `Exhausted` when the budget ran out.
pub fn all_relations(g: &Graph, h: &Graph, full_domain: bool, cfg: &SearchConfig) -> Result<Outcome<Vec<Relation>>> {
    if h.n() == 0 {
        return Ok(Outcome::Found(match find_relation(g, h, full_domain, cfg)? {
            Outcome::Found(r) => vec![r],
            _ => vec![],
        }));
    }
    let mut search = RelSearch::new(g, h, full_domain, cfg)?;
    let mut all = Vec::new();
    let res = search.run(&mut |sets| {
        all.push(sets_to_relation(g.n(), sets));
        true
    });
    Ok(match res {
        Ok(_) => Outcome::Found(all),
        Err(OutOfBudget) => Outcome::Exhausted,
    })
}

/// Inclusion-minimal and inclusion-maximal members of `Rel(g, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelExtremes {
    pub minimal: Vec<Relation>,
    pub maximal: Vec<Relation>,
    pub total: usize,
}

pub fn rel_extremes(g: &Graph, h: &Graph, cfg: &SearchConfig) -> Result<RelExtremes> {
    let Outcome::Found(all) = all_relations(g, h, false, cfg)? else {
        return exhausted("enumerating Rel(g, h)");
    };
    let strictly = |a: &Relation, b: &Relation| a != b && a.is_subset(b);
    let minimal = all.iter().filter(|r| !all.iter().any(|s| strictly(s, r))).cloned().collect();
    let maximal = all.iter().filter(|r| !all.iter().any(|s| strictly(r, s))).cloned().collect();
    Ok(RelExtremes { minimal, maximal, total: all.len() })
}

/// Verdicts on whether every solution of `g * r = g` is an automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutomorphicVerdict {
    /// Property N.
    pub criterion: bool,
    /// Exhaustive enumeration; `None` when skipped (more than five
    /// vertices) or out of budget.
    pub oracle: Option<bool>,
}

pub fn all_self_relations_automorphic(g: &Graph, cfg: &SearchConfig) -> Result<AutomorphicVerdict> {
    let criterion = has_property_n(g)?;
    let oracle = if g.n() <= 5 {
        match all_relations(g, g, false, cfg)? {
            Outcome::Found(all) => Some(all.iter().all(|r| {
                r.as_map().is_some_and(|f| {
                    let info = r.info();
                    info.injective && check_hom(&f, g, g, HomConstraint::Embedding)
                })
            })),
            _ => None,
        }
    } else {
        None
    };
    Ok(AutomorphicVerdict { criterion, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};

    fn c() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn pd_quotient_examples() {
        let q = pd_quotient(&path(3).unwrap());
        assert_eq!(q.classes.as_set(), [vec![0, 2], vec![1]].into_iter().collect());
        assert!(is_isomorphic(&q.quotient, &complete(2).unwrap()));
        let k22 = cycle(4).unwrap();
        assert!(is_isomorphic(&pd_quotient(&k22).quotient, &complete(2).unwrap()));
        let c5 = cycle(5).unwrap();
        assert_eq!(pd_quotient(&c5).quotient, c5);
    }

    #[test]
    fn reconstruction_from_quotient() {
        for g in [path(3).unwrap(), cycle(4).unwrap(), Graph::undirected(3, [(0, 1), (0, 0), (1, 1), (2, 0), (2, 1)]).unwrap()] {
            let q = pd_quotient(&g);
            assert_eq!(apply_strong(&q.quotient, &q.membership.transpose()).unwrap(), g);
        }
    }

    #[test]
    fn strong_equivalence() {
        let g = cycle(5).unwrap();
        assert!(strongly_equivalent(&g, &g.duplicate_vertex(2).unwrap()));
        assert!(strongly_equivalent(&path(3).unwrap(), &complete(2).unwrap()));
        assert!(!strongly_equivalent(&complete(2).unwrap(), &complete(3).unwrap()));
    }

    #[test]
    fn r_core_examples() {
        assert!(is_isomorphic(&r_core(&path(3).unwrap()).unwrap(), &complete(2).unwrap()));
        assert_eq!(r_core(&Graph::empty(false, 2)).unwrap().n(), 1);
        assert_eq!(r_core(&complete(3).unwrap()).unwrap(), complete(3).unwrap());
        assert!(weakly_equivalent(&path(3).unwrap(), &complete(2).unwrap()).unwrap());
        assert!(weakly_equivalent(&complete(2).unwrap(), &cycle(4).unwrap()).unwrap());
        assert!(!weakly_equivalent(&complete(2).unwrap(), &complete(3).unwrap()).unwrap());
    }

    #[test]
    fn cocore_examples() {
        assert!(is_isomorphic(&cocore(&path(3).unwrap()).unwrap(), &complete(2).unwrap()));
        assert_eq!(cocore(&path(4).unwrap()).unwrap(), path(4).unwrap());
        let all_loops = Graph::undirected(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(cocore(&all_loops).unwrap(), crate::generators::single_loop());
        // A loop does not collapse the cocore when the looped vertex is needed.
        let pendant_on_loop = Graph::undirected(2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(cocore(&pendant_on_loop).unwrap(), pendant_on_loop);
    }

    #[test]
    fn properties_n_and_nstar() {
        assert!(has_property_n(&cycle(6).unwrap()).unwrap());
        let p4 = path(4).unwrap();
        assert!(!has_property_n(&p4).unwrap());
        assert!(has_property_nstar(&p4).unwrap());
        let k1 = Graph::empty(false, 1);
        assert!(has_property_n(&k1).unwrap() && has_property_nstar(&k1).unwrap());
    }

    #[test]
    fn minimal_basis_examples() {
        assert_eq!(minimal_basis(&complete(3).unwrap()).unwrap(), vec![0, 1, 2]);
        assert!(minimal_basis(&path(3).unwrap()).is_err());
        assert_eq!(minimal_basis(&path(4).unwrap()).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn graph_core_examples() {
        let r = graph_core(&cycle(6).unwrap(), &c()).unwrap();
        assert!(is_isomorphic(&r.core, &complete(2).unwrap()));
        for &v in &r.vertices {
            assert_eq!(r.retraction[v], v);
        }
        assert_eq!(graph_core(&complete(3).unwrap(), &c()).unwrap().core, complete(3).unwrap());
        let looped = Graph::undirected(3, [(0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(graph_core(&looped, &c()).unwrap().vertices, vec![2]);
    }

    #[test]
    fn find_relation_examples() {
        assert!(find_relation(&cycle(3).unwrap(), &complete(2).unwrap(), false, &c()).unwrap().is_found());
        assert!(find_relation(&complete(2).unwrap(), &cycle(3).unwrap(), false, &c()).unwrap().is_absent());
        let g = cycle(5).unwrap();
        let r = find_relation(&g, &g, true, &c()).unwrap().found().unwrap();
        assert_eq!(apply_strong(&g, &r).unwrap(), g);
    }

    #[test]
    fn rel_extremes_on_path_to_edge() {
        let p4 = path(4).unwrap();
        let k2 = complete(2).unwrap();
        let ex = rel_extremes(&p4, &k2, &c()).unwrap();
        let maximal = Relation::new(4, 2, [(0, 0), (2, 0), (1, 1), (3, 1)]).unwrap();
        let minimal = Relation::new(4, 2, [(0, 0), (1, 1)]).unwrap();
        assert!(ex.maximal.contains(&maximal));
        assert!(ex.minimal.contains(&minimal));
        let k1 = Graph::empty(false, 1);
        assert_eq!(rel_extremes(&k1, &k1, &c()).unwrap().total, 1);
    }

    #[test]
    fn automorphic_self_relations() {
        let v = all_self_relations_automorphic(&complete(3).unwrap(), &c()).unwrap();
        assert_eq!(v, AutomorphicVerdict { criterion: true, oracle: Some(true) });
        let v = all_self_relations_automorphic(&path(3).unwrap(), &c()).unwrap();
        assert_eq!(v, AutomorphicVerdict { criterion: false, oracle: Some(false) });
    }
}
