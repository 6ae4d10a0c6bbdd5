//! Connected multigraphs with loops and parallel edges.
//!
//! Vertices and edges carry stable string ids taken from the input; every
//! report refers to them. Internally both are addressed by their position
//! in declaration order, and an edge end is a [`Dart`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ribbon::RotationSystem;

/// One end of an edge. A loop owns both of its darts at the same vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: usize, end: u8) -> Self {
        debug_assert!(end < 2);
        Dart { edge, end }
    }

    #[inline]
    pub fn index(self) -> usize {
        2 * self.edge + self.end as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Dart {
            edge: i / 2,
            end: (i % 2) as u8,
        }
    }

    #[inline]
    pub fn opposite(self) -> Self {
        Dart {
            edge: self.edge,
            end: 1 - self.end,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    allow_degree_two: bool,
    vertex_ids: HashMap<String, usize>,
    edge_ids: HashMap<String, usize>,
}

/// On-disk graph format. `rotations` maps a vertex id to its cyclic list of
/// `[edge id, end index]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations: Option<BTreeMap<String, Vec<(String, u8)>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_degree_two: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub id: String,
    pub ends: [String; 2],
}

/// A validated graph together with whatever rotation data its document had.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: MultiGraph,
    pub rotations: Option<BTreeMap<String, Vec<(String, u8)>>>,
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    ParsedGraph::from_document(doc)
}

impl ParsedGraph {
    pub fn from_document(doc: GraphDocument) -> Result<Self> {
        let edges: Vec<(String, String, String)> = doc
            .edges
            .into_iter()
            .map(|e| {
                let [a, b] = e.ends;
                (e.id, a, b)
            })
            .collect();
        let graph = MultiGraph::new(&doc.name, &doc.vertices, &edges, doc.allow_degree_two)?;
        Ok(ParsedGraph {
            graph,
            rotations: doc.rotations,
        })
    }
}

/// Result of contracting a single edge.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: MultiGraph,
    /// Surviving vertex id of the merged pair.
    pub kept: String,
    /// Vertex id that disappeared into `kept`.
    pub removed: String,
    /// Old vertex index to new vertex index.
    pub vertex_map: Vec<usize>,
    /// Old edge index to new edge index; `None` for the contracted edge.
    pub edge_map: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Edge at a degree-one vertex.
    Pendant,
    /// One of the two edges at a degree-two vertex.
    Suppression,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    pub edge: String,
    pub kept: String,
    pub removed: String,
    pub kind: StepKind,
}

#[derive(Clone, Debug)]
pub struct CyclicPart {
    pub graph: MultiGraph,
    /// For every original edge: the cyclic-part edge it ends up in, or
    /// `None` if it collapsed into a point.
    pub edge_map: BTreeMap<String, Option<String>>,
    /// Contractions in the order they were applied.
    pub steps: Vec<ContractionStep>,
}

/// A vertex replaced by a path of degree-three vertices.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub graph: MultiGraph,
    /// Indices (in `graph`) of the new vertices, in path order.
    pub new_vertices: Vec<usize>,
    /// Cyclic order at each new vertex, aligned with `new_vertices`.
    pub local_rotations: Vec<Vec<Dart>>,
    pub expansion_edges: Vec<String>,
}

/// Vertex bijection plus dart bijection preserving incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    /// Indexed by dart index of the source graph.
    pub dart_map: Vec<Dart>,
}

impl Isomorphism {
    pub fn edge_map(&self) -> Vec<usize> {
        self.dart_map.iter().step_by(2).map(|d| d.edge).collect()
    }
}

impl MultiGraph {
    pub fn new<S: AsRef<str>>(
        name: &str,
        vertices: &[S],
        edges: &[(S, S, S)],
        allow_degree_two: bool,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Empty);
        }
        let mut vertex_ids = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_ids.insert(v.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateVertex(v.as_ref().to_string()));
            }
        }
        let mut edge_list = Vec::with_capacity(edges.len());
        let mut edge_ids = HashMap::with_capacity(edges.len());
        for (i, (id, a, b)) in edges.iter().enumerate() {
            let id = id.as_ref().to_string();
            let lookup = |v: &S| {
                vertex_ids
                    .get(v.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex(v.as_ref().to_string()))
            };
            let ends = [lookup(a)?, lookup(b)?];
            if edge_ids.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateEdge(id));
            }
            edge_list.push(Edge { id, ends });
        }
        let g = MultiGraph {
            name: name.to_string(),
            vertices: vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            edges: edge_list,
            allow_degree_two,
            vertex_ids,
            edge_ids,
        };
        if !g.connected_without(&[]) {
            return Err(Error::Disconnected);
        }
        if !allow_degree_two {
            if let Some(v) = (0..g.n()).find(|&v| g.degree_of(v) == 2) {
                return Err(Error::DegreeTwo(g.vertices[v].clone()));
            }
        }
        Ok(g)
    }

    /// Builds a graph from trusted parts (ids unique, ends in range).
    pub(crate) fn from_parts(
        name: String,
        vertices: Vec<String>,
        edges: Vec<Edge>,
        allow_degree_two: bool,
    ) -> Self {
        let vertex_ids = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let edge_ids = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        MultiGraph {
            name,
            vertices,
            edges,
            allow_degree_two,
            vertex_ids,
            edge_ids,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Dimension of the cycle space, `m - n + 1`.
    pub fn q(&self) -> usize {
        self.m() + 1 - self.n()
    }

    pub fn allow_degree_two(&self) -> bool {
        self.allow_degree_two
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        self.vertex_ids
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn edge_index(&self, e: &str) -> Result<usize> {
        self.edge_ids
            .get(e)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(e.to_string()))
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    #[inline]
    pub fn dart_vertex(&self, d: Dart) -> usize {
        self.edges[d.edge].ends[d.end as usize]
    }

    pub fn dart_count(&self) -> usize {
        2 * self.m()
    }

    /// Darts at `v`, ordered by (edge index, end).
    pub fn darts_at(&self, v: usize) -> Vec<Dart> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for end in 0..2u8 {
                if e.ends[end as usize] == v {
                    out.push(Dart::new(i, end));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: &str) -> Result<usize> {
        Ok(self.degree_of(self.vertex_index(v)?))
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| e.ends.iter().filter(|&&x| x == v).count())
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for e in &self.edges {
            deg[e.ends[0]] += 1;
            deg[e.ends[1]] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Every vertex has degree exactly three.
    pub fn is_cubic(&self) -> bool {
        self.m() > 0 && self.degrees().iter().all(|&d| d == 3)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_loop()).count()
    }

    fn adjacency(&self, skip: &[usize]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (i, e) in self.edges.iter().enumerate() {
            if skip.contains(&i) || e.is_loop() {
                continue;
            }
            adj[e.ends[0]].push(e.ends[1]);
            adj[e.ends[1]].push(e.ends[0]);
        }
        adj
    }

    /// Still connected after deleting the edges at the given indices.
    pub fn connected_without(&self, skip: &[usize]) -> bool {
        let adj = self.adjacency(skip);
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n()
    }

    /// `mask[e]` is true iff deleting edge `e` disconnects the graph.
    pub fn bridge_mask(&self) -> Vec<bool> {
        (0..self.m())
            .map(|e| !self.edges[e].is_loop() && !self.connected_without(&[e]))
            .collect()
    }

    pub fn bridges(&self) -> BTreeSet<String> {
        self.bridge_mask()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(e, _)| self.edges[e].id.clone())
            .collect()
    }

    pub fn bridge_count(&self) -> usize {
        self.bridge_mask().iter().filter(|&&b| b).count()
    }

    /// Contracts non-loop edge `e`, keeping the id of its end-0 vertex.
    pub fn contract_edge(&self, e: &str) -> Result<Contraction> {
        let ei = self.edge_index(e)?;
        let keep = self.edges[ei].ends[0];
        self.contract_keeping(ei, keep)
    }

    /// Contracts non-loop edge `e` into the endpoint `keep`.
    pub fn contract_edge_into(&self, e: &str, keep: &str) -> Result<Contraction> {
        let ei = self.edge_index(e)?;
        let keep = self.vertex_index(keep)?;
        if !self.edges[ei].ends.contains(&keep) {
            return Err(Error::UnknownVertex(self.vertices[keep].clone()));
        }
        self.contract_keeping(ei, keep)
    }

    fn contract_keeping(&self, ei: usize, keep: usize) -> Result<Contraction> {
        let edge = &self.edges[ei];
        if edge.is_loop() {
            return Err(Error::LoopContraction(edge.id.clone()));
        }
        let removed = if edge.ends[0] == keep {
            edge.ends[1]
        } else {
            edge.ends[0]
        };
        let mut vertex_map = vec![0; self.n()];
        let mut vertices = Vec::with_capacity(self.n() - 1);
        for (i, v) in self.vertices.iter().enumerate() {
            if i != removed {
                vertex_map[i] = vertices.len();
                vertices.push(v.clone());
            }
        }
        vertex_map[removed] = vertex_map[keep];
        let mut edges = Vec::with_capacity(self.m() - 1);
        let mut edge_map = vec![None; self.m()];
        for (i, e) in self.edges.iter().enumerate() {
            if i == ei {
                continue;
            }
            edge_map[i] = Some(edges.len());
            edges.push(Edge {
                id: e.id.clone(),
                ends: [vertex_map[e.ends[0]], vertex_map[e.ends[1]]],
            });
        }
        Ok(Contraction {
            graph: MultiGraph::from_parts(self.name.clone(), vertices, edges, true),
            kept: self.vertices[keep].clone(),
            removed: self.vertices[removed].clone(),
            vertex_map,
            edge_map,
        })
    }

    /// Contracts pendant edges until none remain, then suppresses every
    /// degree-two vertex by contracting its incident edge with the smaller
    /// id. A lone vertex carrying a single loop is left alone.
    pub fn cyclic_part(&self) -> CyclicPart {
        let mut g = self.clone();
        g.allow_degree_two = true;
        let mut steps = Vec::new();
        // edge id -> partner it was absorbed into (None: collapsed to a point)
        let mut absorbed: HashMap<String, Option<String>> = HashMap::new();

        while let Some(v) = (0..g.n()).find(|&v| g.n() > 1 && g.degree_of(v) == 1) {
            let d = g.darts_at(v)[0];
            let keep = g.dart_vertex(d.opposite());
            let id = g.edges[d.edge].id.clone();
            let c = g.contract_keeping(d.edge, keep).expect("pendant edge is not a loop");
            steps.push(ContractionStep {
                edge: id.clone(),
                kept: c.kept.clone(),
                removed: c.removed.clone(),
                kind: StepKind::Pendant,
            });
            absorbed.insert(id, None);
            g = c.graph;
        }

        loop {
            let found = (0..g.n()).find_map(|v| {
                let darts = g.darts_at(v);
                (darts.len() == 2 && darts[0].edge != darts[1].edge).then_some((v, darts))
            });
            let Some((v, darts)) = found else { break };
            let (a, b) = (darts[0].edge, darts[1].edge);
            let (e, partner) = if g.edges[a].id <= g.edges[b].id {
                (a, b)
            } else {
                (b, a)
            };
            let keep = g.dart_vertex(if darts[0].edge == e {
                darts[0].opposite()
            } else {
                darts[1].opposite()
            });
            debug_assert_ne!(keep, v);
            let id = g.edges[e].id.clone();
            let partner_id = g.edges[partner].id.clone();
            let c = g.contract_keeping(e, keep).expect("suppressed edge is not a loop");
            steps.push(ContractionStep {
                edge: id.clone(),
                kept: c.kept.clone(),
                removed: c.removed.clone(),
                kind: StepKind::Suppression,
            });
            absorbed.insert(id, Some(partner_id));
            g = c.graph;
        }

        let mut edge_map = BTreeMap::new();
        for e in &self.edges {
            let mut cur = Some(e.id.clone());
            while let Some(id) = cur.clone() {
                match absorbed.get(&id) {
                    Some(next) => cur = next.clone(),
                    None => break,
                }
            }
            edge_map.insert(e.id.clone(), cur);
        }
        CyclicPart {
            graph: g,
            edge_map,
            steps,
        }
    }

    /// Equal to its own cyclic part.
    pub fn is_cyclic(&self) -> bool {
        let deg = self.degrees();
        if deg.iter().any(|&d| d == 1) {
            return false;
        }
        if deg.iter().any(|&d| d == 2) {
            return self.n() == 1 && self.m() == 1;
        }
        true
    }

    /// Non-bridge edges of the cyclic part.
    pub fn m_bc(&self) -> usize {
        let cp = self.cyclic_part().graph;
        cp.m() - cp.bridge_count()
    }

    fn next_expansion_index(&self) -> usize {
        self.edges
            .iter()
            .filter_map(|e| e.id.strip_prefix("_x")?.parse::<usize>().ok())
            .map(|k| k + 1)
            .max()
            .unwrap_or(0)
    }

    fn fresh_vertex_id(&self, base: &str, i: usize, taken: &BTreeSet<String>) -> String {
        let mut id = format!("{base}~{i}");
        while self.vertex_ids.contains_key(&id) || taken.contains(&id) {
            id.push('\'');
        }
        id
    }

    /// Replaces `v` by a path of `degree - 2` degree-three vertices joined by
    /// new `_x<k>` edges. `order` is the cyclic order of the darts at `v`;
    /// consecutive darts land on the same or adjacent path vertices, so
    /// contracting the new edges gives back `v` with that cyclic order.
    pub fn expand_vertex(&self, v: &str, order: &[Dart]) -> Result<Expansion> {
        let vi = self.vertex_index(v)?;
        let degree = self.degree_of(vi);
        if degree < 4 {
            return Err(Error::DegreeTooSmall {
                vertex: v.to_string(),
                degree,
            });
        }
        let mut expected = self.darts_at(vi);
        let mut given = order.to_vec();
        expected.sort();
        given.sort();
        if expected != given {
            return Err(Error::Rotation(format!(
                "order at `{v}` does not list exactly its darts"
            )));
        }

        let k = degree - 2;
        // position of each dart of v along the path
        let mut slot: HashMap<Dart, usize> = HashMap::new();
        for (i, &d) in order.iter().enumerate() {
            let s = if i < 2 {
                0
            } else if i >= degree - 2 {
                k - 1
            } else {
                i - 1
            };
            slot.insert(d, s);
        }

        let mut taken = BTreeSet::new();
        let mut vertices = Vec::with_capacity(self.n() + k - 1);
        let mut vertex_map = vec![0; self.n()];
        let mut new_vertices = Vec::with_capacity(k);
        for (i, name) in self.vertices.iter().enumerate() {
            if i == vi {
                for j in 0..k {
                    let id = self.fresh_vertex_id(name, j, &taken);
                    taken.insert(id.clone());
                    new_vertices.push(vertices.len());
                    vertices.push(id);
                }
            } else {
                vertex_map[i] = vertices.len();
                vertices.push(name.clone());
            }
        }

        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .map(|(ei, e)| {
                let mut ends = [0; 2];
                for end in 0..2 {
                    ends[end] = if e.ends[end] == vi {
                        new_vertices[slot[&Dart::new(ei, end as u8)]]
                    } else {
                        vertex_map[e.ends[end]]
                    };
                }
                Edge {
                    id: e.id.clone(),
                    ends,
                }
            })
            .collect();

        let first = self.next_expansion_index();
        let base = edges.len();
        let mut expansion_edges = Vec::with_capacity(k - 1);
        for j in 0..k - 1 {
            let id = format!("_x{}", first + j);
            expansion_edges.push(id.clone());
            edges.push(Edge {
                id,
                ends: [new_vertices[j], new_vertices[j + 1]],
            });
        }

        let x = |j: usize, end: u8| Dart::new(base + j, end);
        let mut local_rotations = Vec::with_capacity(k);
        for j in 0..k {
            let mut rot = Vec::with_capacity(3);
            if j == 0 {
                rot.extend_from_slice(&order[0..2]);
            } else {
                rot.push(x(j - 1, 1));
            }
            if j > 0 && j < k - 1 {
                rot.push(order[j + 1]);
            }
            if j == k - 1 {
                if k > 1 {
                    rot.extend_from_slice(&order[degree - 2..]);
                } else {
                    unreachable!("degree >= 4 gives at least two path vertices");
                }
            } else {
                rot.push(x(j, 0));
            }
            local_rotations.push(rot);
        }

        Ok(Expansion {
            graph: MultiGraph::from_parts(self.name.clone(), vertices, edges, self.allow_degree_two),
            new_vertices,
            local_rotations,
            expansion_edges,
        })
    }

    /// `counts[i][j]`: number of edges joining `i` and `j`; loops on the
    /// diagonal.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let mut mat = vec![vec![0; self.n()]; self.n()];
        for e in &self.edges {
            let [a, b] = e.ends;
            mat[a][b] += 1;
            if a != b {
                mat[b][a] += 1;
            }
        }
        mat
    }

    pub fn to_document(&self, rotation: Option<&RotationSystem>) -> GraphDocument {
        GraphDocument {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    id: e.id.clone(),
                    ends: [
                        self.vertices[e.ends[0]].clone(),
                        self.vertices[e.ends[1]].clone(),
                    ],
                })
                .collect(),
            rotations: rotation.map(|r| r.to_spec(self)),
            allow_degree_two: self.allow_degree_two,
        }
    }
}

/// Applies [`MultiGraph::expand_vertex`] at every vertex of degree at least
/// four, carrying the rotation along. Cubic graphs come back unchanged.
pub fn cubic_resolution(g: &MultiGraph, rotation: &RotationSystem) -> (MultiGraph, RotationSystem) {
    let mut graph = g.clone();
    let mut rot: Vec<Vec<Dart>> = (0..g.n()).map(|v| rotation.at(v).to_vec()).collect();
    let targets: Vec<String> = g
        .vertices()
        .iter()
        .enumerate()
        .filter(|&(v, _)| g.degree_of(v) >= 4)
        .map(|(_, id)| id.clone())
        .collect();
    for id in targets {
        let vi = graph.vertex_index(&id).expect("vertex survives earlier expansions");
        let exp = graph
            .expand_vertex(&id, &rot[vi])
            .expect("rotation lists the darts of the vertex");
        let mut next = Vec::with_capacity(exp.graph.n());
        for (i, r) in rot.into_iter().enumerate() {
            if i == vi {
                next.extend(exp.local_rotations.iter().cloned());
            } else {
                next.push(r);
            }
        }
        rot = next;
        graph = exp.graph;
    }
    let rotation = RotationSystem::from_lists(&graph, rot).expect("expansion keeps a valid rotation");
    (graph, rotation)
}

/// Vertex permutations `p` with `mat1[i][j] == mat2[p[i]][p[j]]`, found by
/// backtracking with degree and loop-count pruning. Stops after the first
/// hit when `first_only`.
fn vertex_bijections(g1: &MultiGraph, g2: &MultiGraph, first_only: bool) -> Vec<Vec<usize>> {
    if g1.n() != g2.n() || g1.m() != g2.m() {
        return Vec::new();
    }
    let (m1, m2) = (g1.multiplicity_matrix(), g2.multiplicity_matrix());
    let (d1, d2) = (g1.degrees(), g2.degrees());
    let mut s1 = d1.clone();
    let mut s2 = d2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Vec::new();
    }
    let n = g1.n();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn rec(
        i: usize,
        n: usize,
        ctx: (&[Vec<usize>], &[Vec<usize>], &[usize], &[usize]),
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        first_only: bool,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        if i == n {
            out.push(map.clone());
            return;
        }
        let (m1, m2, d1, d2) = ctx;
        for j in 0..n {
            if used[j] || d1[i] != d2[j] || m1[i][i] != m2[j][j] {
                continue;
            }
            if (0..i).any(|k| m1[i][k] != m2[j][map[k]]) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            rec(i + 1, n, ctx, map, used, out, first_only);
            used[j] = false;
            map[i] = usize::MAX;
        }
    }

    rec(0, n, (&m1, &m2, &d1, &d2), &mut map, &mut used, &mut out, first_only);
    out
}

/// Groups edge indices by their unordered endpoint pair.
fn edge_classes(g: &MultiGraph) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        let [a, b] = e.ends;
        classes.entry((a.min(b), a.max(b))).or_default().push(i);
    }
    classes
}

fn dart_for(g1: &MultiGraph, g2: &MultiGraph, vmap: &[usize], e1: usize, e2: usize, flip_loop: bool) -> [Dart; 2] {
    let a = &g1.edges()[e1];
    let b = &g2.edges()[e2];
    let swap = if a.is_loop() {
        flip_loop
    } else {
        vmap[a.ends[0]] != b.ends[0]
    };
    if swap {
        [Dart::new(e2, 1), Dart::new(e2, 0)]
    } else {
        [Dart::new(e2, 0), Dart::new(e2, 1)]
    }
}

/// Returns a witness isomorphism if one exists. Exhaustive; meant for the
/// small graphs of the catalog.
pub fn are_isomorphic(g1: &MultiGraph, g2: &MultiGraph) -> Option<Isomorphism> {
    let vmap = vertex_bijections(g1, g2, true).into_iter().next()?;
    let c2 = edge_classes(g2);
    let mut dart_map = vec![Dart::new(0, 0); g1.dart_count()];
    for (&(a, b), edges) in &edge_classes(g1) {
        let (x, y) = (vmap[a], vmap[b]);
        let targets = &c2[&(x.min(y), x.max(y))];
        for (&e1, &e2) in edges.iter().zip(targets) {
            let [d0, d1] = dart_for(g1, g2, &vmap, e1, e2, false);
            dart_map[2 * e1] = d0;
            dart_map[2 * e1 + 1] = d1;
        }
    }
    Some(Isomorphism {
        vertex_map: vmap,
        dart_map,
    })
}

/// Size of the dart-level automorphism group.
pub fn automorphism_count(g: &MultiGraph) -> u128 {
    let vperms = vertex_bijections(g, g, false).len() as u128;
    let mut per = 1u128;
    for edges in edge_classes(g).values() {
        per = per.saturating_mul((1..=edges.len() as u128).product());
    }
    per = per.saturating_mul(1u128 << g.loop_count().min(100));
    vperms.saturating_mul(per)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every dart-level automorphism: vertex permutation, a bijection within
/// each class of parallel edges, and an end swap choice per loop. Returns
/// `None` when the group is larger than `cap`.
pub fn automorphisms(g: &MultiGraph, cap: u128) -> Option<Vec<Isomorphism>> {
    if automorphism_count(g) > cap {
        return None;
    }
    let classes = edge_classes(g);
    let loops: Vec<usize> = (0..g.m()).filter(|&e| g.edges()[e].is_loop()).collect();
    let mut out = Vec::new();
    for vmap in vertex_bijections(g, g, false) {
        // per class: all bijections onto the image class
        let mut partial: Vec<Vec<Option<usize>>> = vec![vec![None; g.m()]];
        for (&(a, b), edges) in &classes {
            let (x, y) = (vmap[a], vmap[b]);
            let target = &classes[&(x.min(y), x.max(y))];
            let perms = permutations(target);
            let mut next = Vec::with_capacity(partial.len() * perms.len());
            for base in &partial {
                for p in &perms {
                    let mut m = base.clone();
                    for (&e1, &e2) in edges.iter().zip(p) {
                        m[e1] = Some(e2);
                    }
                    next.push(m);
                }
            }
            partial = next;
        }
        for emap in partial {
            for mask in 0u64..(1u64 << loops.len()) {
                let mut dart_map = vec![Dart::new(0, 0); g.dart_count()];
                for e in 0..g.m() {
                    let flip = loops
                        .iter()
                        .position(|&l| l == e)
                        .is_some_and(|i| mask >> i & 1 == 1);
                    let [d0, d1] = dart_for(g, g, &vmap, e, emap[e].expect("every edge mapped"), flip);
                    dart_map[2 * e] = d0;
                    dart_map[2 * e + 1] = d1;
                }
                out.push(Isomorphism {
                    vertex_map: vmap.clone(),
                    dart_map,
                });
            }
        }
    }
    Some(out)
}
