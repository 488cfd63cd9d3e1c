//! Standard graph families.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Path on `k` vertices.
pub fn path(k: usize) -> Result<Graph> {
    if k == 0 {
        return invalid("path needs at least one vertex");
    }
    Graph::undirected(k, (1..k).map(|i| (i - 1, i)))
}

/// Directed path `0 -> 1 -> ... -> k-1`.
pub fn dipath(k: usize) -> Result<Graph> {
    if k == 0 {
        return invalid("path needs at least one vertex");
    }
    Graph::directed(k, (1..k).map(|i| (i - 1, i)))
}

pub fn cycle(k: usize) -> Result<Graph> {
    if k < 3 {
        return invalid("cycles need at least 3 vertices");
    }
    Graph::undirected(k, (0..k).map(|i| (i, (i + 1) % k)))
}

/// Directed cycle `0 -> 1 -> ... -> k-1 -> 0`.
pub fn dicycle(k: usize) -> Result<Graph> {
    if k < 2 {
        return invalid("directed cycles need at least 2 vertices");
    }
    Graph::directed(k, (0..k).map(|i| (i, (i + 1) % k)))
}

pub fn complete(k: usize) -> Result<Graph> {
    if k == 0 {
        return invalid("complete graph needs at least one vertex");
    }
    Graph::undirected(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))))
}

/// Cycle `0..k` with pendant `i + k` hanging from `i`.
pub fn sunlet(k: usize) -> Result<Graph> {
    if k < 3 {
        return invalid("sunlets need a cycle of length at least 3");
    }
    let ring = (0..k).map(|i| (i, (i + 1) % k));
    let pendants = (0..k).map(|i| (i, i + k));
    Graph::undirected(2 * k, ring.chain(pendants))
}

/// `K_{d+1}` on `0..=d` with edge `0 d` subdivided by vertex `d + 1`.
pub fn dragon(d: usize) -> Result<Graph> {
    if d < 3 {
        return invalid("dragons are defined for d >= 3");
    }
    let mut edges: Vec<(usize, usize)> =
        (0..=d).flat_map(|i| (i + 1..=d).map(move |j| (i, j))).filter(|&e| e != (0, d)).collect();
    edges.push((0, d + 1));
    edges.push((d + 1, d));
    Graph::undirected(d + 2, edges)
}

/// One vertex carrying a loop.
pub fn single_loop() -> Graph {
    Graph::undirected(1, [(0, 0)]).expect("valid")
}

/// Indicator built from a dragon: path `a - c - b` with `c` joined to the
/// subdividing vertex of the dragon. Returns the graph and the terminals
/// `(a, b)`; vertices are numbered dragon first, then `a`, `c`, `b`.
pub fn indicator(d: usize) -> Result<(Graph, usize, usize)> {
    let dr = dragon(d)?;
    let (a, c, b) = (d + 2, d + 3, d + 4);
    let mut edges = dr.edge_list();
    edges.extend([(a, c), (c, b), (c, d + 1)]);
    Ok((Graph::undirected(d + 5, edges)?, a, b))
}

/// Family names accepted by the command line `generate` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Dipath,
    Cycle,
    Dicycle,
    Complete,
    Sunlet,
    Dragon,
    SingleLoop,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Path,
        Family::Dipath,
        Family::Cycle,
        Family::Dicycle,
        Family::Complete,
        Family::Sunlet,
        Family::Dragon,
        Family::SingleLoop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Dipath => "dipath",
            Family::Cycle => "cycle",
            Family::Dicycle => "dicycle",
            Family::Complete => "complete",
            Family::Sunlet => "sunlet",
            Family::Dragon => "dragon",
            Family::SingleLoop => "single_loop",
        }
    }

    pub fn generate(self, k: usize) -> Result<Graph> {
        match self {
            Family::Path => path(k),
            Family::Dipath => dipath(k),
            Family::Cycle => cycle(k),
            Family::Dicycle => dicycle(k),
            Family::Complete => complete(k),
            Family::Sunlet => sunlet(k),
            Family::Dragon => dragon(k),
            Family::SingleLoop if k == 1 => Ok(single_loop()),
            Family::SingleLoop => invalid("single_loop takes k = 1"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dragon_counts() {
        for d in 3..8 {
            let g = dragon(d).unwrap();
            assert_eq!(g.n(), d + 2);
            assert_eq!(g.edge_count(), d * (d + 1) / 2 + 1);
            assert_eq!(g.degree(d + 1), 2);
        }
    }

    #[test]
    fn indicator_has_eight_vertices_for_d3() {
        let (g, a, b) = indicator(3).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.degree(a), 1);
        assert_eq!(g.degree(b), 1);
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn sunlet_shape() {
        let s = sunlet(5).unwrap();
        assert_eq!(s.n(), 10);
        assert!((0..5).all(|i| s.degree(i) == 3 && s.degree(i + 5) == 1));
    }

    #[test]
    fn family_round_trip_and_bad_parameters() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!(Family::Cycle.generate(2).is_err());
        assert!(Family::Dragon.generate(2).is_err());
        assert!(Family::Path.generate(0).is_err());
        assert!(Family::SingleLoop.generate(2).is_err());
        assert!("tree".parse::<Family>().is_err());
    }
}
