use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

use relgraph::drm::drm;
use relgraph::embedding::{
    embed_into_dicycles, embed_into_sunlet_gadgets, embed_poset_into_line_graphs, verify_embedding, DEFAULT_MAX_VERTICES,
};
use relgraph::enumerate::{
    duality_for_embeddings, duality_for_full_homs, enumerate, find_gaps, reduce_fulrel_to_surhom, reduce_hom_to_fulrel,
    verify_duality, Comparator, DualityPair, Universe, UniverseSpec,
};
use relgraph::equivalence::{
    cocore, find_relation, graph_core, has_property_n, has_property_nstar, is_point_determining, pd_quotient, r_core,
};
use relgraph::generators::Family;
use relgraph::hom::is_core;
use relgraph::io::{parse_graph, parse_poset, parse_relation, parse_weights, write_graph, write_relation, write_weights};
use relgraph::poset::Poset;
use relgraph::relation::{apply_strong, apply_weak};
use relgraph::{apply_weighted, find_hom, Error, Graph, HomConstraint, Outcome, Relation, SearchConfig};

/// Graph relations, cores, constrained homomorphisms and poset embeddings.
#[derive(Parser)]
#[command(name = "relgraph", version)]
struct Cli {
    /// Search tie-breaking seed; 0 keeps candidates in ascending order.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget per backtracking search.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_nodes: u64,
    /// Largest vertex count for enumerated universes.
    #[arg(long, global = true, default_value_t = 4)]
    max_n: usize,
    /// Worker threads for parallel verification; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a relation to a graph (strong by default).
    Apply {
        /// Graph file, or a `weights N` matrix with --weighted.
        graph: String,
        relation: String,
        #[arg(long, conflicts_with_all = ["weak", "weighted"])]
        strong: bool,
        #[arg(long, conflicts_with = "weighted")]
        weak: bool,
        #[arg(long)]
        weighted: bool,
    },
    /// R-core: the smallest graph strongly related both ways by full-domain relations.
    Rcore { graph: Option<String> },
    /// Cocore: the smallest graph related both ways by partial relations.
    Cocore { graph: Option<String> },
    /// Homomorphism core.
    Core { graph: Option<String> },
    /// Point-determining quotient.
    Pd { graph: Option<String> },
    /// Degree refinement matrix.
    Drm { graph: Option<String> },
    /// Property N, N*, point-determining and core flags.
    Props { graph: Option<String> },
    /// Search for a constrained homomorphism.
    Hom {
        g: String,
        h: String,
        #[arg(long, default_value = "plain")]
        constraint: String,
    },
    /// Search for a relation `r` with `g * r = h`.
    FindRelation {
        g: String,
        h: String,
        #[arg(long)]
        full_domain: bool,
    },
    /// Realise a poset as graphs.
    Embed(EmbedArgs),
    /// Check that realised images reproduce the poset's order.
    VerifyEmbedding(EmbedArgs),
    /// List graphs up to isomorphism.
    Enumerate(UniverseArgs),
    /// Universe-relative gaps of a comparator.
    Gaps {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(long, default_value = "plain")]
        comparator: String,
    },
    /// Build or check a finite duality over a universe.
    Duality {
        #[command(flatten)]
        universe: UniverseArgs,
        /// embedding, mono or full build the F side; other comparators need --f.
        #[arg(long, default_value = "embedding")]
        comparator: String,
        /// D-side graph files.
        #[arg(long = "d", required = true, num_args = 1..)]
        d_side: Vec<String>,
        /// F-side graph files; when given, the pair is checked as is.
        #[arg(long = "f", num_args = 1..)]
        f_side: Vec<String>,
    },
    /// Instance transformations between decision problems.
    Reduce {
        g: String,
        h: String,
        #[arg(long, value_enum)]
        which: Reduction,
    },
    /// Emit a named graph.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Args)]
struct EmbedArgs {
    poset: String,
    #[arg(long, value_enum)]
    target: Target,
    /// Indicator degree for line-graph targets.
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
}

#[derive(Args)]
struct UniverseArgs {
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    loops: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Dicycles,
    Sunlets,
    Linegraphs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    Hom2fulrel,
    Fulrel2surhom,
}

enum Failure {
    Input(String),
    Exhausted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted(m) => Failure::Exhausted(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Run = Result<(String, bool), Failure>;

fn read_source(path: Option<&str>) -> Result<String, Failure> {
    let path = path.unwrap_or("-");
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn with_path<T>(path: &str, r: relgraph::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { .. } => Failure::Input(format!("{path}: {e}")),
        other => other.into(),
    })
}

fn load_graph(path: Option<&str>) -> Result<Graph, Failure> {
    let text = read_source(path)?;
    with_path(path.unwrap_or("-"), parse_graph(&text))
}

fn load_relation(path: &str) -> Result<Relation, Failure> {
    let text = read_source(Some(path))?;
    with_path(path, parse_relation(&text))
}

fn load_poset(path: &str) -> Result<Poset, Failure> {
    let text = read_source(Some(path))?;
    with_path(path, parse_poset(&text))
}

fn decided<T>(o: Outcome<T>, what: &str) -> Result<Option<T>, Failure> {
    match o {
        Outcome::Found(t) => Ok(Some(t)),
        Outcome::Absent => Ok(None),
        Outcome::Exhausted => Err(Failure::Exhausted(what.to_string())),
    }
}

fn universe(args: &UniverseArgs, max_n: usize) -> Result<Universe, Failure> {
    Ok(enumerate(UniverseSpec { directed: args.directed, loops: args.loops, max_n })?)
}

fn one_line(g: &Graph) -> String {
    let edges: Vec<String> = g.edge_list().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("{} {} {}", if g.is_directed() { "digraph" } else { "graph" }, g.n(), edges.join(" "))
}

fn images(args: &EmbedArgs, p: &Poset) -> Result<(Vec<Graph>, HomConstraint), Failure> {
    Ok(match args.target {
        Target::Dicycles => (embed_into_dicycles(p, args.max_vertices)?, HomConstraint::Plain),
        Target::Sunlets => (embed_into_sunlet_gadgets(p, args.max_vertices)?, HomConstraint::LocallyInjective),
        Target::Linegraphs => (embed_poset_into_line_graphs(p, args.d, args.max_vertices)?, HomConstraint::Plain),
    })
}

fn run(cli: Cli) -> Run {
    let cfg = SearchConfig { max_nodes: cli.max_nodes, seed: cli.seed };
    let mut out = String::new();
    let mut positive = true;
    match cli.command {
        Command::Apply { graph, relation, weak, weighted, .. } => {
            let r = load_relation(&relation)?;
            if weighted {
                let text = read_source(Some(&graph))?;
                let w = with_path(&graph, parse_weights::<Rational64>(&text))?;
                out = write_weights(&apply_weighted(&w, &r)?);
            } else {
                let g = load_graph(Some(&graph))?;
                out = write_graph(&if weak { apply_weak(&g, &r)? } else { apply_strong(&g, &r)? });
            }
        }
        Command::Rcore { graph } => out = write_graph(&r_core(&load_graph(graph.as_deref())?)?),
        Command::Cocore { graph } => out = write_graph(&cocore(&load_graph(graph.as_deref())?)?),
        Command::Core { graph } => {
            let res = graph_core(&load_graph(graph.as_deref())?, &cfg)?;
            let verts: Vec<String> = res.vertices.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "# vertices {}", verts.join(" "));
            out.push_str(&write_graph(&res.core));
        }
        Command::Pd { graph } => {
            let q = pd_quotient(&load_graph(graph.as_deref())?);
            for (i, block) in q.classes.blocks().iter().enumerate() {
                let members: Vec<String> = block.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "# class {i}: {}", members.join(" "));
            }
            out.push_str(&write_graph(&q.quotient));
        }
        Command::Drm { graph } => {
            let d = drm(&load_graph(graph.as_deref())?)?;
            for (i, (block, row)) in d.blocks.blocks().iter().zip(&d.matrix).enumerate() {
                let members: Vec<String> = block.iter().map(usize::to_string).collect();
                let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "block {i}: {} | {}", members.join(" "), cells.join(" "));
            }
        }
        Command::Props { graph } => {
            let g = load_graph(graph.as_deref())?;
            let _ = writeln!(out, "N {}", has_property_n(&g)?);
            let _ = writeln!(out, "N* {}", has_property_nstar(&g)?);
            let _ = writeln!(out, "point-determining {}", is_point_determining(&g));
            let _ = writeln!(out, "core {}", is_core(&g, &cfg)?);
        }
        Command::Hom { g, h, constraint } => {
            let c: HomConstraint = constraint.parse()?;
            let (g, h) = (load_graph(Some(&g))?, load_graph(Some(&h))?);
            match decided(find_hom(&g, &h, c, &cfg)?, "homomorphism search")? {
                Some(f) => out = write_relation(&Relation::from_map(&f, h.n())?),
                None => (out, positive) = ("NONE\n".into(), false),
            }
        }
        Command::FindRelation { g, h, full_domain } => {
            let (g, h) = (load_graph(Some(&g))?, load_graph(Some(&h))?);
            match decided(find_relation(&g, &h, full_domain, &cfg)?, "relation search")? {
                Some(r) => out = write_relation(&r),
                None => (out, positive) = ("NONE\n".into(), false),
            }
        }
        Command::Embed(args) => {
            let p = load_poset(&args.poset)?;
            let (imgs, _) = images(&args, &p)?;
            for (x, g) in imgs.iter().enumerate() {
                let _ = writeln!(out, "# element {}", p.label(x));
                out.push_str(&write_graph(g));
            }
        }
        Command::VerifyEmbedding(args) => {
            let p = load_poset(&args.poset)?;
            let (imgs, c) = images(&args, &p)?;
            let rep = verify_embedding(&imgs, &p, c, &cfg)?;
            let _ = writeln!(out, "cells {} comparator {c}", rep.cells);
            for m in &rep.mismatches {
                let _ = writeln!(out, "mismatch {} {} expected {} found {}", m.x, m.y, m.expected, m.found);
            }
            if !rep.exhausted.is_empty() {
                let pairs: Vec<String> = rep.exhausted.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                return Err(Failure::Exhausted(format!("undecided cells {}", pairs.join(" "))));
            }
            positive = rep.is_verified();
            let _ = writeln!(out, "{}", if positive { "verified" } else { "FAILED" });
        }
        Command::Enumerate(args) => {
            let u = universe(&args, cli.max_n)?;
            let _ = writeln!(out, "# {} graphs", u.len());
            for (i, g) in u.graphs.iter().enumerate() {
                let _ = writeln!(out, "{i} {}", one_line(g));
            }
        }
        Command::Gaps { universe: args, comparator } => {
            let c: Comparator = comparator.parse()?;
            let u = universe(&args, cli.max_n)?;
            let rep = find_gaps(&u, c, &cfg)?;
            let _ = writeln!(out, "# comparator {c}, {} graphs, {} classes; gaps are universe-relative", u.len(), rep.classes);
            for gap in &rep.gaps {
                let tag = if gap.cited_true_gap { " true-gap" } else { "" };
                let (a, b) = (&u.graphs[gap.lower], &u.graphs[gap.upper]);
                let _ = writeln!(out, "gap {} {} | {} < {}{tag}", gap.lower, gap.upper, one_line(a), one_line(b));
            }
        }
        Command::Duality { universe: args, comparator, d_side, f_side } => {
            let c: Comparator = comparator.parse()?;
            let u = universe(&args, cli.max_n)?;
            let d = d_side.iter().map(|p| load_graph(Some(p))).collect::<Result<Vec<_>, _>>()?;
            let pair = if !f_side.is_empty() {
                let f = f_side.iter().map(|p| load_graph(Some(p))).collect::<Result<Vec<_>, _>>()?;
                DualityPair { f_side: f, d_side: d, comparator: c, truncated_at: None }
            } else {
                match c {
                    Comparator::Hom(HomConstraint::Embedding) => duality_for_embeddings(&d, &u, false, &cfg)?,
                    Comparator::Hom(HomConstraint::Mono) => duality_for_embeddings(&d, &u, true, &cfg)?,
                    Comparator::Hom(HomConstraint::Full) => duality_for_full_homs(&d, &u, &cfg)?,
                    _ => return Err(Failure::Input(format!("no F-side construction for {c}; pass --f"))),
                }
            };
            if let Some(t) = pair.truncated_at {
                let _ = writeln!(out, "# F candidates truncated at {t} vertices");
            }
            for f in &pair.f_side {
                let _ = writeln!(out, "F {}", one_line(f));
            }
            let rep = verify_duality(&pair, &u, &cfg)?;
            for v in &rep.violations {
                let _ = writeln!(out, "violation {} above-F {} below-D {}", one_line(&u.graphs[v.index]), v.above_f, v.below_d);
            }
            positive = rep.holds();
            let _ = writeln!(out, "checked {} {}", rep.checked, if positive { "holds" } else { "FAILED" });
        }
        Command::Reduce { g, h, which } => {
            let (g, h) = (load_graph(Some(&g))?, load_graph(Some(&h))?);
            let r = match which {
                Reduction::Hom2fulrel => reduce_hom_to_fulrel(&g, &h)?,
                Reduction::Fulrel2surhom => reduce_fulrel_to_surhom(&g, &h)?,
            };
            out = write_graph(&r);
        }
        Command::Generate { family, k } => {
            let f: Family = family.parse()?;
            out = write_graph(&f.generate(k)?);
        }
    }
    Ok((out, positive))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((out, positive)) => {
            print!("{out}");
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted(m)) => {
            eprintln!("budget exhausted: {m}");
            ExitCode::from(3)
        }
    }
}
