//! Extended intersection graph of a cycle basis, its simple paths, and the
//! tuples of pairwise disjoint paths counted by `p`.
//!
//! H-vertices are numbered from 0 internally and from 1 in serialized form.
//! Paths are unordered up to reversal, tuples are unordered sets, and the
//! empty tuple is not counted.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::cycle_space::CycleBasis;
use crate::multigraph::MultiGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Carrier {
    /// A G-edge lying on both cycles.
    Edge(usize),
    /// A G-vertex on both cycles with no shared edge at it.
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HEdge {
    pub from: usize,
    pub to: usize,
    pub carrier: Carrier,
}

impl HEdge {
    pub fn other(&self, x: usize) -> usize {
        if self.from == x {
            self.to
        } else {
            self.from
        }
    }

    pub fn to_json(&self, g: &MultiGraph) -> Value {
        let (kind, carrier) = match self.carrier {
            Carrier::Edge(e) => ("edge", g.edge_id(e)),
            Carrier::Vertex(v) => ("vertex", g.vertex_id(v)),
        };
        json!({"from": self.from + 1, "to": self.to + 1, "type": kind, "carrier": carrier})
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGraph {
    pub q: usize,
    /// Sorted by (from, to, carrier) with `from < to`.
    pub edges: Vec<HEdge>,
}

impl HGraph {
    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_type_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| matches!(e.carrier, Carrier::Vertex(_)))
            .count()
    }

    pub fn summary(&self, g: &MultiGraph) -> Value {
        json!({
            "vertices": self.q,
            "edges": self.edges.iter().map(|e| e.to_json(g)).collect::<Vec<_>>(),
        })
    }
}

/// One H-vertex per basis cycle; an H-edge per shared G-edge, plus one per
/// shared G-vertex not incident to any shared edge.
pub fn build_h(g: &MultiGraph, basis: &CycleBasis) -> HGraph {
    let q = basis.q();
    let touches: Vec<Vec<bool>> = basis
        .cycles
        .iter()
        .map(|c| {
            let mut t = vec![false; g.n()];
            for e in c.iter() {
                for &v in &g.edge(e).ends {
                    t[v] = true;
                }
            }
            t
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            let shared = basis.cycles[i].intersection(&basis.cycles[j]);
            let mut near_shared = vec![false; g.n()];
            for e in shared.iter() {
                edges.push(HEdge {
                    from: i,
                    to: j,
                    carrier: Carrier::Edge(e),
                });
                for &v in &g.edge(e).ends {
                    near_shared[v] = true;
                }
            }
            for v in 0..g.n() {
                if touches[i][v] && touches[j][v] && !near_shared[v] {
                    edges.push(HEdge {
                        from: i,
                        to: j,
                        carrier: Carrier::Vertex(v),
                    });
                }
            }
        }
    }
    edges.sort();
    HGraph { q, edges }
}

/// A constant path (one vertex, no edges) or a simple path stored with its
/// smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPath {
    pub vertices: Vec<usize>,
    /// Indices into [`HGraph::edges`].
    pub edges: Vec<usize>,
}

impl HPath {
    pub fn is_constant(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_mask(&self) -> u64 {
        self.vertices.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn to_json(&self, h: &HGraph, g: &MultiGraph) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&e| h.edges[e].to_json(g)).collect::<Vec<_>>(),
        })
    }
}

/// Largest basis size the path machinery accepts (vertex masks are `u64`).
pub const MAX_Q: usize = 64;

/// All constant paths and all simple paths up to reversal. Parallel H-edges
/// give distinct paths.
pub fn simple_paths(h: &HGraph) -> Vec<HPath> {
    assert!(h.q <= MAX_Q, "basis too large for path enumeration");
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); h.q];
    for (i, e) in h.edges.iter().enumerate() {
        adj[e.from].push(i);
        adj[e.to].push(i);
    }
    let mut out = Vec::new();

    fn extend(h: &HGraph, adj: &[Vec<usize>], verts: &mut Vec<usize>, edges: &mut Vec<usize>, mask: u64, out: &mut Vec<HPath>) {
        let last = *verts.last().expect("path has a vertex");
        if verts.len() > 1 && verts[0] < last {
            out.push(HPath {
                vertices: verts.clone(),
                edges: edges.clone(),
            });
        }
        for &ei in &adj[last] {
            let w = h.edges[ei].other(last);
            if mask >> w & 1 == 1 {
                continue;
            }
            verts.push(w);
            edges.push(ei);
            extend(h, adj, verts, edges, mask | 1 << w, out);
            verts.pop();
            edges.pop();
        }
    }

    for s in 0..h.q {
        out.push(HPath {
            vertices: vec![s],
            edges: Vec::new(),
        });
        let mut verts = vec![s];
        let mut edges = Vec::new();
        extend(h, &adj, &mut verts, &mut edges, 1 << s, &mut out);
    }
    out.sort_by(|a, b| (a.vertices.len(), &a.vertices, &a.edges).cmp(&(b.vertices.len(), &b.vertices, &b.edges)));
    out
}

/// Nonempty set of pairwise vertex-disjoint paths; members are indices into
/// the path list, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathTuple {
    pub paths: Vec<usize>,
}

impl PathTuple {
    pub fn k(&self) -> usize {
        self.paths.len()
    }

    pub fn to_json(&self, paths: &[HPath], h: &HGraph, g: &MultiGraph) -> Value {
        Value::Array(self.paths.iter().map(|&i| paths[i].to_json(h, g)).collect())
    }
}

/// Every nonempty set of pairwise disjoint paths, in lexicographic order of
/// member indices.
pub fn disjoint_tuples(paths: &[HPath]) -> Vec<PathTuple> {
    let masks: Vec<u64> = paths.iter().map(HPath::vertex_mask).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();

    fn rec(masks: &[u64], start: usize, used: u64, current: &mut Vec<usize>, out: &mut Vec<PathTuple>) {
        for i in start..masks.len() {
            if masks[i] & used != 0 {
                continue;
            }
            current.push(i);
            out.push(PathTuple {
                paths: current.clone(),
            });
            rec(masks, i + 1, used | masks[i], current, out);
            current.pop();
        }
    }

    rec(&masks, 0, 0, &mut current, &mut out);
    out
}

/// Number of nonempty sets of pairwise disjoint paths, without listing
/// them: memoized over the set of still-available H-vertices.
pub fn count_disjoint_tuples(paths: &[HPath], q: usize) -> u128 {
    if q == 0 {
        return 0;
    }
    // paths grouped by their smallest vertex
    let mut by_min: Vec<Vec<u64>> = vec![Vec::new(); q];
    for p in paths {
        let mask = p.vertex_mask();
        by_min[mask.trailing_zeros() as usize].push(mask);
    }
    let mut memo: HashMap<u64, u128> = HashMap::new();

    fn count(avail: u64, by_min: &[Vec<u64>], memo: &mut HashMap<u64, u128>) -> u128 {
        if avail == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(&avail) {
            return c;
        }
        let v = avail.trailing_zeros() as usize;
        let rest = avail & !(1 << v);
        let mut total = count(rest, by_min, memo);
        for &mask in &by_min[v] {
            if mask & !avail == 0 {
                total += count(avail & !mask, by_min, memo);
            }
        }
        memo.insert(avail, total);
        total
    }

    let full = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    count(full, &by_min, &mut memo) - 1
}

/// `p` for the given basis.
pub fn p_of(g: &MultiGraph, basis: &CycleBasis) -> u128 {
    let h = build_h(g, basis);
    count_disjoint_tuples(&simple_paths(&h), h.q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLowerBound {
    pub p: u128,
    pub floor: u128,
    pub equality: bool,
    pub h_edgeless: bool,
    /// `p >= 2^q - 1` and equality exactly when H has no edges.
    pub consistent: bool,
}

impl PLowerBound {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.to_string(),
            "two_pow_q_minus_1": self.floor.to_string(),
            "equality": self.equality,
            "h_edgeless": self.h_edgeless,
            "consistent": self.consistent,
        })
    }
}

pub fn check_p_lower_bound(g: &MultiGraph, basis: &CycleBasis) -> PLowerBound {
    let h = build_h(g, basis);
    let p = count_disjoint_tuples(&simple_paths(&h), h.q);
    let floor = (1u128 << basis.q()) - 1;
    let equality = p == floor;
    let h_edgeless = h.is_edgeless();
    PLowerBound {
        p,
        floor,
        equality,
        h_edgeless,
        consistent: p >= floor && equality == h_edgeless,
    }
}
