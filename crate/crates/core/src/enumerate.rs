//! Exhaustive small-graph universes and the order-theoretic checks run over
//! them: gaps, finite dualities, the relation-to-homomorphism reductions and
//! PR-core checks.
//!
//! Every statement here is relative to a finite universe. A pair reported
//! as a gap only has nothing strictly between it *inside the universe*.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::equivalence::{cocore, find_relation, is_point_determining};
use crate::error::{exhausted, invalid, unsupported, Error, Result};
use crate::generators::cycle;
use crate::graph::{ComplementMode, Graph};
use crate::hom::{find_hom, HomConstraint};
use crate::iso::{canonical_form, is_isomorphic, Certificate};
use crate::search::SearchConfig;

pub const MAX_DIRECTED: usize = 5;
pub const MAX_UNDIRECTED: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniverseSpec {
    pub directed: bool,
    pub loops: bool,
    pub max_n: usize,
}

/// One representative per isomorphism class of graphs on `1..=max_n`
/// vertices, ordered by vertex count, edge count, then certificate.
#[derive(Debug, Clone)]
pub struct Universe {
    pub spec: UniverseSpec,
    pub graphs: Vec<Graph>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn of_size(&self, n: usize) -> impl Iterator<Item = &Graph> {
        self.graphs.iter().filter(move |g| g.n() == n)
    }

    /// Index of the representative isomorphic to `g`.
    pub fn position(&self, g: &Graph) -> Option<usize> {
        self.graphs.iter().position(|r| r.n() == g.n() && r.arc_count() == g.arc_count() && is_isomorphic(r, g))
    }
}

/// Grows representatives one vertex at a time: every graph on `n` vertices
/// is a graph on `n - 1` vertices plus a last vertex with some neighbours.
pub fn enumerate(spec: UniverseSpec) -> Result<Universe> {
    let cap = if spec.directed { MAX_DIRECTED } else { MAX_UNDIRECTED };
    if spec.max_n > cap {
        return unsupported(format!("enumeration is limited to {cap} vertices for this graph kind"));
    }
    let mut layers: Vec<Vec<(Certificate, Graph)>> = vec![vec![(canonical_form(&Graph::empty(spec.directed, 0)), Graph::empty(spec.directed, 0))]];
    for n in 1..=spec.max_n {
        let prev = &layers[n - 1];
        let found: Vec<(Certificate, Graph)> = prev
            .par_iter()
            .flat_map_iter(|(_, base)| extensions(base, spec).into_iter().map(|g| (canonical_form(&g), g)))
            .collect();
        let mut unique: BTreeMap<Certificate, Graph> = BTreeMap::new();
        for (c, g) in found {
            unique.entry(c).or_insert(g);
        }
        let mut layer: Vec<(Certificate, Graph)> = unique.into_iter().collect();
        layer.sort_by(|(ca, a), (cb, b)| a.arc_count().cmp(&b.arc_count()).then(ca.cmp(cb)));
        layers.push(layer);
    }
    let graphs = layers.into_iter().skip(1).flatten().map(|(_, g)| g).collect();
    Ok(Universe { spec, graphs })
}

fn extensions(base: &Graph, spec: UniverseSpec) -> Vec<Graph> {
    let m = base.n();
    let arcs: Vec<(usize, usize)> = base.arcs().collect();
    let choices: Vec<(usize, usize)> = if spec.directed {
        (0..m).flat_map(|v| [(m, v), (v, m)]).collect()
    } else {
        (0..m).map(|v| (m, v)).collect()
    };
    let loop_opts: &[bool] = if spec.loops { &[false, true] } else { &[false] };
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << choices.len()) {
        for &lp in loop_opts {
            let mut edges = arcs.clone();
            edges.extend(choices.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e));
            if lp {
                edges.push((m, m));
            }
            out.push(Graph::new(spec.directed, m + 1, edges).expect("in range"));
        }
    }
    out
}

/// The quasi-order used to compare graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Hom(HomConstraint),
    /// A relation with full domain.
    Relation,
    /// Any relation (domain may be partial).
    PartialRelation,
}

impl Comparator {
    /// `Some(g ≤ h)`, or `None` when the search budget ran out.
    pub fn holds(self, g: &Graph, h: &Graph, cfg: &SearchConfig) -> Result<Option<bool>> {
        Ok(match self {
            Comparator::Hom(c) => find_hom(g, h, c, cfg)?.decided(),
            Comparator::Relation => find_relation(g, h, true, cfg)?.decided(),
            Comparator::PartialRelation => find_relation(g, h, false, cfg)?.decided(),
        })
    }

    fn decide(self, g: &Graph, h: &Graph, cfg: &SearchConfig) -> Result<bool> {
        match self.holds(g, h, cfg)? {
            Some(b) => Ok(b),
            None => exhausted(format!("comparing graphs under {self}")),
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparator::Hom(c) => write!(f, "{c}"),
            Comparator::Relation => f.write_str("rel"),
            Comparator::PartialRelation => f.write_str("prel"),
        }
    }
}

impl FromStr for Comparator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rel" => Ok(Comparator::Relation),
            "prel" => Ok(Comparator::PartialRelation),
            _ => s.parse().map(Comparator::Hom),
        }
    }
}

/// `leq[i][j]` for every ordered pair of universe graphs, in parallel.
pub fn order_matrix(graphs: &[Graph], c: Comparator, cfg: &SearchConfig) -> Result<Vec<Vec<bool>>> {
    let k = graphs.len();
    let cells: Vec<bool> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            if i == j {
                Ok(true)
            } else {
                c.decide(&graphs[i], &graphs[j], cfg)
            }
        })
        .collect::<Result<_>>()?;
    Ok(cells.chunks(k).map(|r| r.to_vec()).collect())
}

/// A pair `lower < upper` with no universe graph strictly between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    /// Universe indices of the smallest representatives of both classes.
    pub lower: usize,
    pub upper: usize,
    /// Set when the pair is a gap of the full (infinite) order by a known
    /// theorem: `(K_1, K_2)` for plain homomorphisms of undirected graphs.
    pub cited_true_gap: bool,
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub comparator: Comparator,
    /// Number of equivalence classes of the quasi-order in the universe.
    pub classes: usize,
    pub gaps: Vec<Gap>,
}

pub fn find_gaps(u: &Universe, c: Comparator, cfg: &SearchConfig) -> Result<GapReport> {
    let leq = order_matrix(&u.graphs, c, cfg)?;
    let k = u.len();
    // Smallest universe index of each class.
    let reps: Vec<usize> = (0..k).filter(|&i| !(0..i).any(|j| leq[i][j] && leq[j][i])).collect();
    let lt = |i: usize, j: usize| leq[i][j] && !leq[j][i];
    let mut gaps = Vec::new();
    for &a in &reps {
        for &b in &reps {
            if lt(a, b) && !reps.iter().any(|&m| lt(a, m) && lt(m, b)) {
                let cited = c == Comparator::Hom(HomConstraint::Plain)
                    && !u.spec.directed
                    && u.graphs[a].n() == 1
                    && u.graphs[a].arc_count() == 0
                    && u.graphs[b].n() == 2
                    && u.graphs[b].edge_count() == 1
                    && u.graphs[b].is_loop_free();
                gaps.push(Gap { lower: a, upper: b, cited_true_gap: cited });
            }
        }
    }
    Ok(GapReport { comparator: c, classes: reps.len(), gaps })
}

/// `(F, D)`: within a universe, a graph is above some member of `F` exactly
/// when it is not below any member of `D`.
#[derive(Debug, Clone)]
pub struct DualityPair {
    pub f_side: Vec<Graph>,
    pub d_side: Vec<Graph>,
    pub comparator: Comparator,
    /// Candidate size bound used to build `F`, when below the bound the
    /// construction asks for.
    pub truncated_at: Option<usize>,
}

fn minimal_under(graphs: Vec<Graph>, c: Comparator, cfg: &SearchConfig) -> Result<Vec<Graph>> {
    let leq = order_matrix(&graphs, c, cfg)?;
    let k = graphs.len();
    Ok(graphs
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| !(0..k).any(|j| j != i && leq[j][i] && !leq[i][j]))
        .map(|(_, g)| g)
        .collect())
}

fn avoids_all(f: &Graph, d_set: &[Graph], c: Comparator, cfg: &SearchConfig) -> Result<bool> {
    for d in d_set {
        if c.decide(f, d, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_order(d_set: &[Graph]) -> Result<usize> {
    d_set.iter().map(Graph::n).max().map_or_else(|| invalid("the D side must be nonempty"), Ok)
}

/// `F` = minimal graphs on at most `n + 1` vertices embedding into no member
/// of `d_set`, where `n` is the largest order in `d_set`. With `mono` the
/// monomorphism order is used instead of embeddings.
pub fn duality_for_embeddings(d_set: &[Graph], candidates: &Universe, mono: bool, cfg: &SearchConfig) -> Result<DualityPair> {
    let n = max_order(d_set)?;
    if candidates.spec.max_n < n + 1 {
        return invalid(format!("candidates must include every graph on {} vertices", n + 1));
    }
    let c = Comparator::Hom(if mono { HomConstraint::Mono } else { HomConstraint::Embedding });
    let mut pool = Vec::new();
    for f in candidates.graphs.iter().filter(|f| f.n() <= n + 1) {
        if avoids_all(f, d_set, c, cfg)? {
            pool.push(f.clone());
        }
    }
    Ok(DualityPair { f_side: minimal_under(pool, c, cfg)?, d_side: d_set.to_vec(), comparator: c, truncated_at: None })
}

/// `F` = minimal point-determining graphs on at most
/// `n + 1 + C(n + 1, 2)` vertices with no full homomorphism into `d_set`.
/// Candidates come from `candidates`; when it stops short of the bound the
/// pair records where it was cut.
pub fn duality_for_full_homs(d_set: &[Graph], candidates: &Universe, cfg: &SearchConfig) -> Result<DualityPair> {
    if let Some(d) = d_set.iter().find(|d| !is_point_determining(d)) {
        return invalid(format!("D-side graph on {} vertices is not point-determining", d.n()));
    }
    let n = max_order(d_set)?;
    let bound = n + 1 + (n + 1) * n / 2;
    if candidates.spec.max_n < n + 1 {
        return invalid(format!("candidates must include every graph on {} vertices", n + 1));
    }
    let c = Comparator::Hom(HomConstraint::Full);
    let mut pool = Vec::new();
    for f in candidates.graphs.iter().filter(|f| f.n() <= bound && is_point_determining(f)) {
        if avoids_all(f, d_set, c, cfg)? {
            pool.push(f.clone());
        }
    }
    let truncated_at = (candidates.spec.max_n < bound).then_some(candidates.spec.max_n);
    Ok(DualityPair { f_side: minimal_under(pool, c, cfg)?, d_side: d_set.to_vec(), comparator: c, truncated_at })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityViolation {
    pub index: usize,
    pub above_f: bool,
    pub below_d: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub checked: usize,
    pub violations: Vec<DualityViolation>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks "above some `F` xor below some `D`" for every universe graph.
pub fn verify_duality(p: &DualityPair, u: &Universe, cfg: &SearchConfig) -> Result<DualityReport> {
    let verdicts: Vec<(bool, bool)> = u
        .graphs
        .par_iter()
        .map(|g| {
            let mut above = false;
            for f in &p.f_side {
                if p.comparator.decide(f, g, cfg)? {
                    above = true;
                    break;
                }
            }
            let mut below = false;
            for d in &p.d_side {
                if p.comparator.decide(g, d, cfg)? {
                    below = true;
                    break;
                }
            }
            Ok((above, below))
        })
        .collect::<Result<_>>()?;
    let violations = verdicts
        .into_iter()
        .enumerate()
        .filter(|(_, (a, b))| a == b)
        .map(|(index, (above_f, below_d))| DualityViolation { index, above_f, below_d })
        .collect();
    Ok(DualityReport { checked: u.len(), violations })
}

/// `g ⊕ h`: a homomorphism `g → h` exists iff a full-domain relation
/// `g ⊕ h → h` exists.
pub fn reduce_hom_to_fulrel(g: &Graph, h: &Graph) -> Result<Graph> {
    g.disjoint_union(h)
}

/// `g` with every vertex copied `|V_h|` times: a full-domain relation
/// `g → h` exists iff a surjective homomorphism from the result to `h`
/// exists.
pub fn reduce_fulrel_to_surhom(g: &Graph, h: &Graph) -> Result<Graph> {
    if h.n() == 0 {
        return invalid("the target must have at least one vertex");
    }
    g.vertex_multiplication(&vec![h.n(); g.n()])
}

/// One disagreement between the brute-force PR-core and the cocore.
#[derive(Debug, Clone)]
pub struct PrCoreMismatch {
    pub graph: Graph,
    pub pr_core: Graph,
    pub cocore: Graph,
}

#[derive(Debug, Clone)]
pub struct PrCoreReport {
    pub checked: usize,
    pub mismatches: Vec<PrCoreMismatch>,
    /// `(n, m, relation exists)` between complements of `C_n` and `C_m`.
    pub cycle_complements: Vec<(usize, usize, bool)>,
    pub complement_mode: ComplementMode,
}

impl PrCoreReport {
    pub fn cores_agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Relations between cycle complements exist only on the diagonal.
    pub fn complements_form_antichain(&self) -> bool {
        self.cycle_complements.iter().all(|&(n, m, r)| r == (n == m))
    }
}

/// The smallest universe graph related to `g` in both directions by
/// partial relations.
pub fn pr_core_brute_force(g: &Graph, u: &Universe, cfg: &SearchConfig) -> Result<Graph> {
    for h in u.graphs.iter().filter(|h| h.n() <= g.n()) {
        let c = Comparator::PartialRelation;
        if c.decide(g, h, cfg)? && c.decide(h, g, cfg)? {
            return Ok(h.clone());
        }
    }
    invalid("the universe does not contain the graph's own class")
}

/// PR-core against cocore over an undirected universe, and relations
/// between complements of `C_n` for `n` in `cycle_lengths`.
pub fn pr_core_checks(u: &Universe, cycle_lengths: &[usize], mode: ComplementMode, cfg: &SearchConfig) -> Result<PrCoreReport> {
    if u.spec.directed {
        return unsupported("PR-core checks run on undirected universes");
    }
    let mismatches: Vec<Option<PrCoreMismatch>> = u
        .graphs
        .par_iter()
        .map(|g| {
            let pr = pr_core_brute_force(g, u, cfg)?;
            let co = cocore(g)?;
            Ok((!is_isomorphic(&pr, &co)).then(|| PrCoreMismatch { graph: g.clone(), pr_core: pr, cocore: co }))
        })
        .collect::<Result<_>>()?;
    let comps = cycle_lengths.iter().map(|&n| cycle(n).map(|c| c.complement(mode))).collect::<Result<Vec<_>>>()?;
    let mut cycle_complements = Vec::new();
    for (i, &n) in cycle_lengths.iter().enumerate() {
        for (j, &m) in cycle_lengths.iter().enumerate() {
            let r = Comparator::PartialRelation.decide(&comps[i], &comps[j], cfg)?;
            cycle_complements.push((n, m, r));
        }
    }
    Ok(PrCoreReport {
        checked: u.len(),
        mismatches: mismatches.into_iter().flatten().collect(),
        cycle_complements,
        complement_mode: mode,
    })
}
