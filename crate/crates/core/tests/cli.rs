use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use relgraph::generators::{complete, cycle, dragon};
use relgraph::io::{parse_graph, parse_relation, write_graph, write_relation};
use relgraph::relation::apply_strong;
use relgraph::{check_hom, Graph, HomConstraint, Relation};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relgraph"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Writes `text` to a file unique to this test process.
fn fixture(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_round_trips() {
    let o = run(&["generate", "--family", "sunlet", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_graph(&stdout(&o)).unwrap();
    assert_eq!(g, relgraph::generators::sunlet(4).unwrap());
    assert_eq!(write_graph(&g), stdout(&o));
}

#[test]
fn strong_apply_matches_library() {
    let c3 = cycle(3).unwrap();
    let r = Relation::new(3, 2, [(0, 0), (1, 1), (2, 1)]).unwrap();
    let g = fixture("c3", &write_graph(&c3));
    let rel = fixture("c3-k2.rel", &write_relation(&r));
    let o = run(&["apply", "--strong", path_str(&g), path_str(&rel)]);
    assert_eq!(o.status.code(), Some(0));
    let h = parse_graph(&stdout(&o)).unwrap();
    assert_eq!(h, apply_strong(&c3, &r).unwrap());
    assert!(h.has_loop(1) && h.has_edge(0, 1) && !h.has_loop(0));
}

#[test]
fn dragon_core_from_stdin() {
    let o = run_stdin(&["core", "-"], &write_graph(&dragon(3).unwrap()));
    assert_eq!(o.status.code(), Some(0));
    let core = parse_graph(&stdout(&o)).unwrap();
    assert_eq!(core.n(), 3);
    assert_eq!(core.edge_count(), 3);
}

#[test]
fn hom_witness_and_refusal() {
    let c5 = fixture("c5", &write_graph(&cycle(5).unwrap()));
    let k3 = fixture("k3", &write_graph(&complete(3).unwrap()));
    let k2 = fixture("k2", &write_graph(&complete(2).unwrap()));
    let o = run(&["hom", path_str(&c5), path_str(&k3)]);
    assert_eq!(o.status.code(), Some(0));
    let f = parse_relation(&stdout(&o)).unwrap().as_map().unwrap();
    assert!(check_hom(&f, &cycle(5).unwrap(), &complete(3).unwrap(), HomConstraint::Plain));
    let o = run(&["hom", path_str(&c5), path_str(&k2)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NONE"));
}

#[test]
fn input_errors_exit_two() {
    let bad = fixture("bad", "graph 3\n0 1\n1 7\n");
    let o = run(&["props", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(run(&["props", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_three() {
    let big = Graph::disjoint_union_all(&vec![cycle(7).unwrap(); 6]).unwrap();
    let g = fixture("c7x6", &write_graph(&big));
    let h = fixture("c7", &write_graph(&cycle(7).unwrap()));
    let o = run(&["--max-nodes", "5", "hom", "--constraint", "li", path_str(&g), path_str(&h)]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
