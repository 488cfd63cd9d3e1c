//! Line-oriented text formats for graphs, relations, posets and weight
//! matrices. `#` starts a comment; blank lines are skipped. Parse errors
//! carry the 1-based line number.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poset::Poset;
use crate::relation::Relation;
use crate::weights::WeightMatrix;

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Non-empty lines with comments stripped, paired with line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn number<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().or_else(|_| err(line, format!("expected a number, found `{tok}`")))
}

fn pair(line: usize, toks: &[&str], bound: (usize, usize)) -> Result<(usize, usize)> {
    if toks.len() != 2 {
        return err(line, format!("expected two values, found {}", toks.len()));
    }
    let (u, v): (usize, usize) = (number(line, toks[0])?, number(line, toks[1])?);
    if u >= bound.0 || v >= bound.1 {
        return err(line, format!("pair ({u}, {v}) out of range"));
    }
    Ok((u, v))
}

/// `graph N` or `digraph N`, then one `u v` per edge.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let Some((ln, head)) = lines.next() else {
        return err(1, "empty graph file");
    };
    let directed = match (head.first().copied(), head.len()) {
        (Some("graph"), 2) => false,
        (Some("digraph"), 2) => true,
        _ => return err(ln, "header must be `graph N` or `digraph N`"),
    };
    let n: usize = number(ln, head[1])?;
    let mut edges = Vec::new();
    for (ln, toks) in lines {
        edges.push(pair(ln, &toks, (n, n))?);
    }
    Graph::new(directed, n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", if g.is_directed() { "digraph" } else { "graph" }, g.n());
    for (u, v) in g.edge_list() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// `relation SRC DST`, then one `u b` per pair.
pub fn parse_relation(text: &str) -> Result<Relation> {
    let mut lines = content_lines(text);
    let Some((ln, head)) = lines.next() else {
        return err(1, "empty relation file");
    };
    if head.len() != 3 || head[0] != "relation" {
        return err(ln, "header must be `relation SRC DST`");
    }
    let (src, dst): (usize, usize) = (number(ln, head[1])?, number(ln, head[2])?);
    let mut pairs = Vec::new();
    for (ln, toks) in lines {
        pairs.push(pair(ln, &toks, (src, dst))?);
    }
    Relation::new(src, dst, pairs)
}

pub fn write_relation(r: &Relation) -> String {
    let mut s = format!("relation {} {}\n", r.src_n(), r.dst_n());
    for (u, b) in r.pairs() {
        let _ = writeln!(s, "{u} {b}");
    }
    s
}

/// `poset K`, a line of `K` labels, then cover pairs `a b` meaning `a < b`.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut lines = content_lines(text);
    let Some((ln, head)) = lines.next() else {
        return err(1, "empty poset file");
    };
    if head.len() != 2 || head[0] != "poset" {
        return err(ln, "header must be `poset K`");
    }
    let k: usize = number(ln, head[1])?;
    let labels: Vec<u64> = match lines.next() {
        Some((ln, toks)) if toks.len() == k => toks.iter().map(|t| number(ln, t)).collect::<Result<_>>()?,
        Some((ln, toks)) => return err(ln, format!("expected {k} labels, found {}", toks.len())),
        None if k == 0 => Vec::new(),
        None => return err(ln, "missing label line"),
    };
    let mut covers = Vec::new();
    for (ln, toks) in lines {
        if toks.len() != 2 {
            return err(ln, "expected a cover pair `a b`");
        }
        let (a, b): (u64, u64) = (number(ln, toks[0])?, number(ln, toks[1])?);
        if !labels.contains(&a) || !labels.contains(&b) {
            return err(ln, format!("cover ({a}, {b}) uses an unknown label"));
        }
        covers.push((a, b));
    }
    Poset::from_covers(labels, &covers)
}

pub fn write_poset(p: &Poset) -> String {
    let labels: Vec<String> = p.labels().iter().map(u64::to_string).collect();
    let mut s = format!("poset {}\n{}\n", p.len(), labels.join(" "));
    for (a, b) in p.covers() {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

/// `weights N`, then `N` rows of `N` entries.
pub fn parse_weights<W>(text: &str) -> Result<WeightMatrix<W>>
where
    W: FromStr + crate::weights::Weight,
{
    let mut lines = content_lines(text);
    let Some((ln, head)) = lines.next() else {
        return err(1, "empty weights file");
    };
    if head.len() != 2 || head[0] != "weights" {
        return err(ln, "header must be `weights N`");
    }
    let n: usize = number(ln, head[1])?;
    let mut rows = Vec::with_capacity(n);
    for (ln, toks) in lines {
        if rows.len() == n {
            return err(ln, "too many rows");
        }
        if toks.len() != n {
            return err(ln, format!("expected {n} entries, found {}", toks.len()));
        }
        rows.push(toks.iter().map(|t| number(ln, t)).collect::<Result<Vec<W>>>()?);
    }
    if rows.len() != n {
        return err(ln, format!("expected {n} rows, found {}", rows.len()));
    }
    WeightMatrix::from_rows(rows)
}

pub fn write_weights<W: crate::weights::Weight + std::fmt::Display>(w: &WeightMatrix<W>) -> String {
    let mut s = format!("weights {}\n", w.n());
    for row in w.rows() {
        let cells: Vec<String> = row.iter().map(W::to_string).collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    s
}
