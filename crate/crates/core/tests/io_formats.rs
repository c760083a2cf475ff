mod common;

use std::fs;
use std::path::Path;

use locus::io::{
    adjacencylist_to_edgelist, edgelist_to_adjacencylist, load_adjacencylist, load_edgelist,
    load_graph, save_adjacencylist, save_edgelist,
};
use locus::{Error, Format, Graph};
use proptest::prelude::*;
use rand::Rng;

use common::{graph, random_edges, rng, Weights};

/// A random graph whose last vertex has an edge, so EdgeList can carry it.
fn random_graph(seed: u64) -> Graph {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=40u64);
    let weights = [Weights::Unit, Weights::Integer(7), Weights::Real][seed as usize % 3];
    let density = rng.random_range(0.0..0.4);
    let mut edges = random_edges(&mut rng, n, density, 0.05, weights);
    if !edges.iter().any(|&(u, v, _)| u == n - 1 || v == n - 1) {
        edges.push((0, n - 1, 1.0));
    }
    graph(n, &edges)
}

/// Insert comment and blank lines before, between and after the lines of `text`.
fn sprinkle(text: &str, seed: u64) -> String {
    let mut rng = rng(seed);
    let junk = ["# comment", "", "#", "   ", "\t", "# 0 1 2"];
    let mut out = String::new();
    for line in text.lines() {
        while rng.random_bool(0.3) {
            out.push_str(junk[rng.random_range(0..junk.len())]);
            out.push('\n');
        }
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("# trailing\n\n");
    out
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_formats_round_trip(seed in any::<u64>()) {
        let dir = tempfile::tempdir().unwrap();
        let g = random_graph(seed);
        let el = dir.path().join("g.el");
        let al = dir.path().join("g.al");
        save_edgelist(&g, &el).unwrap();
        save_adjacencylist(&g, &al).unwrap();
        prop_assert_eq!(load_edgelist(&el).unwrap(), g.clone());
        prop_assert_eq!(load_adjacencylist(&al).unwrap(), g);
    }

    #[test]
    fn streaming_conversion_matches_load_and_save(seed in any::<u64>()) {
        let dir = tempfile::tempdir().unwrap();
        let g = random_graph(seed);
        let el = dir.path().join("g.el");
        save_edgelist(&g, &el).unwrap();

        let converted = dir.path().join("converted.al");
        let saved = dir.path().join("saved.al");
        edgelist_to_adjacencylist(&el, &converted).unwrap();
        save_adjacencylist(&load_edgelist(&el).unwrap(), &saved).unwrap();
        prop_assert_eq!(fs::read(&converted).unwrap(), fs::read(&saved).unwrap());

        let back = dir.path().join("back.el");
        adjacencylist_to_edgelist(&converted, &back).unwrap();
        prop_assert_eq!(load_edgelist(&back).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines_anywhere(seed in any::<u64>()) {
        let dir = tempfile::tempdir().unwrap();
        let g = random_graph(seed);
        let el = dir.path().join("g.el");
        let al = dir.path().join("g.al");
        save_edgelist(&g, &el).unwrap();
        save_adjacencylist(&g, &al).unwrap();

        let noisy_el = write(dir.path(), "noisy.el", &sprinkle(&fs::read_to_string(&el).unwrap(), seed));
        let noisy_al = write(dir.path(), "noisy.al", &sprinkle(&fs::read_to_string(&al).unwrap(), seed ^ 1));
        prop_assert_eq!(load_edgelist(&noisy_el).unwrap(), g.clone());
        prop_assert_eq!(load_adjacencylist(&noisy_al).unwrap(), g);
    }
}

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let el = write(dir.path(), "t.el", "# This is a comment\n0 1 0.5\n1 2 1\n2 0 3\n");
    let g = load_edgelist(&el).unwrap();
    assert_eq!(g, Graph::from_edges([(0, 1, 0.5), (1, 2, 1.0), (2, 0, 3.0)]).unwrap());

    let al = write(dir.path(), "t.al", "# This is a comment\n0: 1 2\n1: 0 3 2\n2: 0 1\n3: 1\n");
    let g = load_adjacencylist(&al).unwrap();
    assert_eq!(g.num_vertices(), 4);
    assert_eq!(g.edges().count(), 4);
}

#[test]
fn tabs_and_repeated_spaces_separate_tokens() {
    let dir = tempfile::tempdir().unwrap();
    let el = write(dir.path(), "t.el", "0\t1   2.5\n1  2\n");
    let g = load_edgelist(&el).unwrap();
    assert_eq!(g, Graph::from_edges([(0, 1, 2.5), (1, 2, 1.0)]).unwrap());
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let el = write(dir.path(), "bad.el", "0 1\n1 2\n2 x\n");
    match load_edgelist(&el) {
        Err(e @ Error::Parse { line: 3, .. }) => assert!(e.to_string().contains("line 3")),
        other => panic!("expected a parse error on line 3, got {other:?}"),
    }
    let al = write(dir.path(), "bad.al", "0: 1\n1: 0\n2 1\n");
    assert!(matches!(load_adjacencylist(&al), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn unsorted_adjacency_headers_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let al = write(dir.path(), "bad.al", "1: 0\n0: 1\n");
    assert!(matches!(
        load_adjacencylist(&al),
        Err(Error::UnsortedNodeIds { line: 2, .. })
    ));
}

#[test]
fn conflicting_duplicates_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let same = write(dir.path(), "same.el", "0 1 2\n1 0 2\n");
    assert_eq!(load_edgelist(&same).unwrap().num_edges(), 1);
    let conflict = write(dir.path(), "conflict.el", "0 1 2\n1 0 3\n");
    assert!(load_edgelist(&conflict).is_err());
}

#[test]
fn missing_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.el");
    assert!(matches!(
        load_graph(&missing, Format::EdgeList),
        Err(Error::FileNotFound { .. })
    ));
}

#[test]
fn format_from_extension() {
    assert_eq!(Format::from_extension(Path::new("a.el")), Some(Format::EdgeList));
    assert_eq!(Format::from_extension(Path::new("a.al")), Some(Format::AdjacencyList));
    assert_eq!(Format::from_extension(Path::new("a.csv")), None);
}
