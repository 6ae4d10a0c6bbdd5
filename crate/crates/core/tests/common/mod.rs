//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use cl_structures::multigraph::parse_graph;
use cl_structures::ribbon::{default_rotation, RibbonGraph};
use cl_structures::{Dart, MultiGraph, RotationSystem, TwistVector};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Graph and rotation from a fixture file (default rotation if absent).
pub fn load(name: &str) -> Arc<RibbonGraph> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    let parsed = parse_graph(&text).expect("fixture parses");
    let rot = match &parsed.rotations {
        Some(r) => RotationSystem::from_spec(&parsed.graph, r).expect("fixture rotation"),
        None => default_rotation(&parsed.graph),
    };
    RibbonGraph::new(parsed.graph, rot)
}

pub fn golden(name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(fixture_path(&format!("golden/{name}.census.json"))).expect("golden exists");
    serde_json::from_str(&text).expect("golden parses")
}

pub fn rotation_from_json(g: &MultiGraph, v: &serde_json::Value) -> RotationSystem {
    let spec: BTreeMap<String, Vec<(String, u8)>> = serde_json::from_value(v.clone()).expect("rotation spec");
    RotationSystem::from_spec(g, &spec).expect("valid rotation")
}

/// Connected multigraph with loops and parallel edges: a random spanning
/// tree plus extra random edges.
pub fn random_graph<R: Rng>(rng: &mut R, max_n: usize, max_extra: usize) -> MultiGraph {
    let n = rng.gen_range(1..=max_n);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((format!("e{}", edges.len()), vertices[i].clone(), vertices[j].clone()));
    }
    for _ in 0..rng.gen_range(0..=max_extra) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        edges.push((format!("e{}", edges.len()), vertices[a].clone(), vertices[b].clone()));
    }
    MultiGraph::new("random", &vertices, &edges, true).expect("connected by construction")
}

pub fn random_rotation<R: Rng>(rng: &mut R, g: &MultiGraph) -> RotationSystem {
    let lists: Vec<Vec<Dart>> = (0..g.n())
        .map(|v| {
            let mut d = g.darts_at(v);
            d.shuffle(rng);
            d
        })
        .collect();
    RotationSystem::from_lists(g, lists).expect("permuted darts form a rotation")
}

pub fn random_twists<R: Rng>(rng: &mut R, m: usize) -> TwistVector {
    let mut t = TwistVector::zero(m);
    for e in 0..m {
        t.set(e, rng.gen_bool(0.5));
    }
    t
}

/// Orientability by propagating vertex signs along a spanning tree: the
/// patch is orientable iff every edge agrees with the signs of its ends.
pub fn orientable_by_signs(g: &MultiGraph, twists: &TwistVector) -> bool {
    let mut sign: Vec<Option<bool>> = vec![None; g.n()];
    sign[0] = Some(false);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for (e, edge) in g.edges().iter().enumerate() {
            let [a, b] = edge.ends;
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if sign[w].is_none() {
                sign[w] = Some(sign[v].unwrap() ^ twists.get(e));
                stack.push(w);
            }
        }
    }
    g.edges().iter().enumerate().all(|(e, edge)| {
        let [a, b] = edge.ends;
        sign[a].unwrap() ^ sign[b].unwrap() ^ twists.get(e) == false
    })
}
