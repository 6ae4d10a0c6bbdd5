//! Patches as ribbon structures: a rotation system on a multigraph plus one
//! twist bit per edge.
//!
//! Every vertex disk is read counterclockwise. Each dart has two ports on
//! the disk rim, `CW` and `CCW`. The boundary of the thickened graph is a
//! union of arcs glued at ports:
//! - a corner arc joins `(h_i, CCW)` to `(h_{i+1}, CW)` for consecutive darts
//!   in the rotation at a vertex;
//! - an untwisted edge joins `(end0, CW)` to `(end1, CCW)` and `(end0, CCW)`
//!   to `(end1, CW)`; a twisted edge joins `CW` to `CW` and `CCW` to `CCW`.
//!
//! Every port meets one corner arc and one side arc, so the arcs form
//! disjoint circles, which are the boundary components.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cycle_space::{cycle_twist_parity, CycleBasis, EdgeSet};
use crate::error::{Error, Result};
use crate::multigraph::{Contraction, Dart, MultiGraph};

const CW: usize = 0;
const CCW: usize = 1;

#[inline]
fn port(d: Dart, side: usize) -> usize {
    2 * d.index() + side
}

/// Cyclic order of the darts around every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationSystem {
    at: Vec<Vec<Dart>>,
}

impl RotationSystem {
    /// Validates that the lists partition the darts of `g` by vertex.
    pub fn from_lists(g: &MultiGraph, lists: Vec<Vec<Dart>>) -> Result<Self> {
        if lists.len() != g.n() {
            return Err(Error::Rotation(format!(
                "{} vertex lists for {} vertices",
                lists.len(),
                g.n()
            )));
        }
        let mut seen = vec![false; g.dart_count()];
        for (v, list) in lists.iter().enumerate() {
            for &d in list {
                if d.edge >= g.m() {
                    return Err(Error::Rotation(format!("dart of unknown edge {}", d.edge)));
                }
                if g.dart_vertex(d) != v {
                    return Err(Error::Rotation(format!(
                        "dart ({}, {}) is not at vertex `{}`",
                        g.edge_id(d.edge),
                        d.end,
                        g.vertex_id(v)
                    )));
                }
                if std::mem::replace(&mut seen[d.index()], true) {
                    return Err(Error::Rotation(format!(
                        "dart ({}, {}) listed twice",
                        g.edge_id(d.edge),
                        d.end
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            let d = Dart::from_index(i);
            return Err(Error::Rotation(format!(
                "dart ({}, {}) missing",
                g.edge_id(d.edge),
                d.end
            )));
        }
        Ok(RotationSystem { at: lists })
    }

    /// Reads the document form. Vertices absent from `spec` get the default
    /// order.
    pub fn from_spec(g: &MultiGraph, spec: &BTreeMap<String, Vec<(String, u8)>>) -> Result<Self> {
        let mut lists: Vec<Vec<Dart>> = (0..g.n()).map(|v| g.darts_at(v)).collect();
        for (v, darts) in spec {
            let vi = g.vertex_index(v)?;
            lists[vi] = darts
                .iter()
                .map(|(e, end)| {
                    if *end > 1 {
                        return Err(Error::Rotation(format!("end index {end} for edge `{e}`")));
                    }
                    Ok(Dart::new(g.edge_index(e)?, *end))
                })
                .collect::<Result<_>>()?;
        }
        Self::from_lists(g, lists)
    }

    pub fn to_spec(&self, g: &MultiGraph) -> BTreeMap<String, Vec<(String, u8)>> {
        self.at
            .iter()
            .enumerate()
            .map(|(v, list)| {
                (
                    g.vertex_id(v).to_string(),
                    list.iter().map(|d| (g.edge_id(d.edge).to_string(), d.end)).collect(),
                )
            })
            .collect()
    }

    pub fn at(&self, v: usize) -> &[Dart] {
        &self.at[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.at.len()
    }

    pub fn reversed_at(&self, v: usize) -> Self {
        let mut at = self.at.clone();
        at[v].reverse();
        RotationSystem { at }
    }

    pub fn set_at(&mut self, v: usize, order: Vec<Dart>) {
        self.at[v] = order;
    }
}

/// Darts at each vertex ordered by (edge index, end).
pub fn default_rotation(g: &MultiGraph) -> RotationSystem {
    RotationSystem {
        at: (0..g.n()).map(|v| g.darts_at(v)).collect(),
    }
}

/// Same cyclic sequence up to rotation of the starting point.
pub fn cyclically_equal(a: &[Dart], b: &[Dart]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..b.len()).any(|s| (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()]))
}

/// Rotation induced on `c.graph` by contracting the untwisted, non-loop edge
/// `e` of `g`: the darts of the removed vertex are spliced into the kept
/// vertex in place of `e`'s dart.
pub fn contract_rotation(g: &MultiGraph, rot: &RotationSystem, c: &Contraction, e: usize) -> RotationSystem {
    let kept = g.vertex_index(&c.kept).expect("kept vertex of g");
    let removed = g.vertex_index(&c.removed).expect("removed vertex of g");
    let at_kept = Dart::new(e, if g.edge(e).ends[0] == kept { 0 } else { 1 });
    let at_removed = at_kept.opposite();
    let remap = |d: Dart| Dart::new(c.edge_map[d.edge].expect("edge survives"), d.end);

    let rr = rot.at(removed);
    let pos = rr.iter().position(|&d| d == at_removed).expect("dart at removed vertex");
    let splice: Vec<Dart> = (1..rr.len()).map(|i| rr[(pos + i) % rr.len()]).collect();

    let mut lists = vec![Vec::new(); c.graph.n()];
    for v in 0..g.n() {
        if v == removed {
            continue;
        }
        let mut list = Vec::with_capacity(rot.at(v).len() + splice.len());
        for &d in rot.at(v) {
            if v == kept && d == at_kept {
                list.extend(splice.iter().map(|&s| remap(s)));
            } else {
                list.push(remap(d));
            }
        }
        lists[c.vertex_map[v]] = list;
    }
    RotationSystem::from_lists(&c.graph, lists).expect("contraction keeps a valid rotation")
}

/// Applies the contractions of [`MultiGraph::cyclic_part`] to a rotation.
pub fn cyclic_part_with_rotation(g: &MultiGraph, rot: &RotationSystem) -> (MultiGraph, RotationSystem) {
    let cp = g.cyclic_part();
    let mut graph = g.clone();
    let mut rotation = rot.clone();
    for step in &cp.steps {
        let e = graph.edge_index(&step.edge).expect("step edge present");
        let c = graph
            .contract_edge_into(&step.edge, &step.kept)
            .expect("cyclic part replays");
        rotation = contract_rotation(&graph, &rotation, &c, e);
        graph = c.graph;
    }
    debug_assert_eq!(graph.m(), cp.graph.m());
    (graph, rotation)
}

/// One bit per edge; set means the edge strip is switched.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistVector(EdgeSet);

impl TwistVector {
    pub fn zero(m: usize) -> Self {
        TwistVector(EdgeSet::empty(m))
    }

    pub fn from_set(set: EdgeSet) -> Self {
        TwistVector(set)
    }

    pub fn from_ids(g: &MultiGraph, ids: &[&str]) -> Result<Self> {
        let mut s = EdgeSet::empty(g.m());
        for id in ids {
            s.insert(g.edge_index(id)?);
        }
        Ok(TwistVector(s))
    }

    pub fn as_set(&self) -> &EdgeSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 0
    }

    #[inline]
    pub fn get(&self, e: usize) -> bool {
        self.0.contains(e)
    }

    pub fn set(&mut self, e: usize, value: bool) {
        self.0.set(e, value)
    }

    pub fn toggle(&mut self, e: usize) {
        self.0.toggle(e)
    }

    pub fn count(&self) -> usize {
        self.0.count()
    }

    pub fn switched_ids(&self, g: &MultiGraph) -> Vec<String> {
        self.0.ids(g)
    }

    /// `{edge id: 0|1}` in edge order.
    pub fn to_json(&self, g: &MultiGraph) -> Value {
        let map: serde_json::Map<String, Value> = (0..self.len())
            .map(|e| (g.edge_id(e).to_string(), json!(u8::from(self.get(e)))))
            .collect();
        Value::Object(map)
    }

    /// Compact form: one `x` (switched) or `=` per edge.
    pub fn pattern(&self) -> String {
        (0..self.len()).map(|e| if self.get(e) { 'x' } else { '=' }).collect()
    }
}

/// A graph with a fixed rotation system and the tables needed to trace
/// boundaries. Shared by every patch built on it.
#[derive(Debug)]
pub struct RibbonGraph {
    graph: MultiGraph,
    rotation: RotationSystem,
    bridges: Vec<bool>,
    corner_mate: Vec<usize>,
    corner_vertex: Vec<usize>,
}

impl RibbonGraph {
    pub fn new(graph: MultiGraph, rotation: RotationSystem) -> Arc<Self> {
        let ports = 2 * graph.dart_count();
        let mut corner_mate = vec![usize::MAX; ports];
        let mut corner_vertex = vec![usize::MAX; ports];
        for v in 0..graph.n() {
            let r = rotation.at(v);
            for i in 0..r.len() {
                let a = port(r[i], CCW);
                let b = port(r[(i + 1) % r.len()], CW);
                corner_mate[a] = b;
                corner_mate[b] = a;
                corner_vertex[a] = v;
                corner_vertex[b] = v;
            }
        }
        let bridges = graph.bridge_mask();
        Arc::new(RibbonGraph {
            graph,
            rotation,
            bridges,
            corner_mate,
            corner_vertex,
        })
    }

    pub fn with_default_rotation(graph: MultiGraph) -> Arc<Self> {
        let rot = default_rotation(&graph);
        Self::new(graph, rot)
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn bridges(&self) -> &[bool] {
        &self.bridges
    }

    /// Non-bridge edge indices in edge order.
    pub fn free_edges(&self) -> Vec<usize> {
        (0..self.graph.m()).filter(|&e| !self.bridges[e]).collect()
    }

    #[inline]
    fn side_mate(&self, p: usize, twists: &TwistVector) -> usize {
        let d = Dart::from_index(p / 2);
        let side = p % 2;
        let other = d.opposite();
        if twists.get(d.edge) {
            port(other, side)
        } else {
            port(other, 1 - side)
        }
    }

    fn isolated_vertices(&self) -> usize {
        (0..self.graph.n()).filter(|&v| self.rotation.at(v).is_empty()).count()
    }

    /// Number of boundary circles.
    pub fn boundary_count(&self, twists: &TwistVector) -> usize {
        let ports = self.corner_mate.len();
        let mut seen = vec![false; ports];
        let mut count = 0;
        for start in 0..ports {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut p = start;
            loop {
                seen[p] = true;
                let q = self.corner_mate[p];
                seen[q] = true;
                p = self.side_mate(q, twists);
                if p == start {
                    break;
                }
            }
        }
        count + self.isolated_vertices()
    }

    /// Boundary circles as arc sequences.
    pub fn trace(&self, twists: &TwistVector) -> Vec<Vec<TraceArc>> {
        let ports = self.corner_mate.len();
        let mut seen = vec![false; ports];
        let mut out = Vec::new();
        for start in 0..ports {
            if seen[start] {
                continue;
            }
            let mut arcs = Vec::new();
            let mut p = start;
            loop {
                seen[p] = true;
                let q = self.corner_mate[p];
                seen[q] = true;
                let (from, to) = if p % 2 == CCW {
                    (Dart::from_index(p / 2), Dart::from_index(q / 2))
                } else {
                    (Dart::from_index(q / 2), Dart::from_index(p / 2))
                };
                arcs.push(TraceArc::Corner {
                    vertex: self.corner_vertex[p],
                    from,
                    to,
                });
                let next = self.side_mate(q, twists);
                let d = Dart::from_index(q / 2);
                let side_at_end0 = if d.end == 0 { q % 2 } else { next % 2 };
                arcs.push(TraceArc::Side {
                    edge: d.edge,
                    side: side_at_end0 as u8,
                });
                p = next;
                if p == start {
                    break;
                }
            }
            out.push(arcs);
        }
        for v in 0..self.graph.n() {
            if self.rotation.at(v).is_empty() {
                out.push(vec![TraceArc::Disk { vertex: v }]);
            }
        }
        out
    }
}

/// A piece of a boundary circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceArc {
    /// One long side of an edge strip, named by its port side at end 0.
    Side { edge: usize, side: u8 },
    /// Rim of a vertex disk between two consecutive darts.
    Corner { vertex: usize, from: Dart, to: Dart },
    /// Whole rim of an isolated vertex.
    Disk { vertex: usize },
}

impl TraceArc {
    pub fn to_json(&self, g: &MultiGraph) -> Value {
        match *self {
            TraceArc::Side { edge, side } => json!({"edge": g.edge_id(edge), "side": side}),
            TraceArc::Corner { vertex, from, to } => json!({
                "vertex": g.vertex_id(vertex),
                "from": [g.edge_id(from.edge), from.end],
                "to": [g.edge_id(to.edge), to.end],
            }),
            TraceArc::Disk { vertex } => json!({"vertex": g.vertex_id(vertex)}),
        }
    }
}

/// Edges whose strip contributes exactly one side to the circle.
pub fn odd_support(trace: &[TraceArc], m: usize) -> EdgeSet {
    let mut s = EdgeSet::empty(m);
    for arc in trace {
        if let TraceArc::Side { edge, .. } = arc {
            s.toggle(*edge);
        }
    }
    s
}

/// Closed or bordered surface type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Surface {
    Orientable { genus: usize },
    NonOrientable { crosscaps: usize },
}

impl Surface {
    pub fn is_orientable(&self) -> bool {
        matches!(self, Surface::Orientable { .. })
    }

    /// Name of the closed surface.
    pub fn closed_name(&self) -> String {
        match *self {
            Surface::Orientable { genus: 0 } => "sphere".into(),
            Surface::Orientable { genus: 1 } => "torus".into(),
            Surface::Orientable { genus } => format!("orientable genus {genus}"),
            Surface::NonOrientable { crosscaps: 1 } => "projective plane".into(),
            Surface::NonOrientable { crosscaps: 2 } => "Klein bottle".into(),
            Surface::NonOrientable { crosscaps } => format!("{crosscaps} crosscaps"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub b: usize,
    pub traces: Vec<Vec<TraceArc>>,
    pub orientable: bool,
    pub euler: i64,
    pub surface: Surface,
    /// Closed surface obtained by gluing a disk onto the boundary; strips only.
    pub capped: Option<Surface>,
}

impl BoundaryReport {
    pub fn to_json(&self, g: &MultiGraph, with_traces: bool) -> Value {
        let mut v = json!({
            "b": self.b,
            "orientable": self.orientable,
            "euler": self.euler,
            "surface": self.surface,
        });
        if let Some(c) = self.capped {
            v["capped"] = json!({"surface": c, "name": c.closed_name()});
        }
        if with_traces {
            v["traces"] = Value::Array(
                self.traces
                    .iter()
                    .map(|t| Value::Array(t.iter().map(|a| a.to_json(g)).collect()))
                    .collect(),
            );
        }
        v
    }
}

/// Solves for genus or crosscap number from Euler characteristic and
/// boundary count.
pub fn classify(euler: i64, b: usize, orientable: bool) -> Result<Surface> {
    let deficit = 2 - euler - b as i64;
    let bad = || Error::InconsistentSurface {
        euler,
        boundary: b,
        orientable,
    };
    if b == 0 {
        return Err(bad());
    }
    if orientable {
        if deficit < 0 || deficit % 2 != 0 {
            return Err(bad());
        }
        Ok(Surface::Orientable {
            genus: (deficit / 2) as usize,
        })
    } else {
        if deficit < 1 {
            return Err(bad());
        }
        Ok(Surface::NonOrientable {
            crosscaps: deficit as usize,
        })
    }
}

/// Graph, rotation and twists, with twist bits on bridges cleared.
#[derive(Clone, Debug)]
pub struct Patch {
    ribbon: Arc<RibbonGraph>,
    twists: TwistVector,
}

impl PartialEq for Patch {
    fn eq(&self, other: &Self) -> bool {
        self.ribbon.graph == other.ribbon.graph
            && self.ribbon.rotation == other.ribbon.rotation
            && self.twists == other.twists
    }
}

impl Eq for Patch {}

impl Patch {
    pub fn new(ribbon: Arc<RibbonGraph>, mut twists: TwistVector) -> Self {
        assert_eq!(twists.len(), ribbon.graph.m(), "twist vector length");
        for (e, &bridge) in ribbon.bridges.iter().enumerate() {
            if bridge {
                twists.set(e, false);
            }
        }
        Patch { ribbon, twists }
    }

    pub fn untwisted(ribbon: Arc<RibbonGraph>) -> Self {
        let m = ribbon.graph.m();
        Self::new(ribbon, TwistVector::zero(m))
    }

    pub fn ribbon(&self) -> &Arc<RibbonGraph> {
        &self.ribbon
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.ribbon.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.ribbon.rotation
    }

    pub fn twists(&self) -> &TwistVector {
        &self.twists
    }

    pub fn boundary_count(&self) -> usize {
        self.ribbon.boundary_count(&self.twists)
    }

    pub fn is_strip(&self) -> bool {
        self.boundary_count() == 1
    }

    /// Every cycle of `basis` carries an even number of switched edges.
    pub fn is_orientable(&self, basis: &CycleBasis) -> bool {
        basis.cycles.iter().all(|c| !cycle_twist_parity(c, &self.twists))
    }

    pub fn euler(&self) -> i64 {
        self.graph().n() as i64 - self.graph().m() as i64
    }

    pub fn boundary_components(&self, basis: &CycleBasis) -> Result<BoundaryReport> {
        let traces = self.ribbon.trace(&self.twists);
        let b = traces.len();
        let orientable = self.is_orientable(basis);
        let euler = self.euler();
        let surface = classify(euler, b, orientable)?;
        Ok(BoundaryReport {
            b,
            traces,
            orientable,
            euler,
            surface,
            capped: (b == 1).then_some(surface),
        })
    }

    /// Same as [`Patch::boundary_components`] without keeping the traces.
    pub fn surface_class(&self, basis: &CycleBasis) -> Result<BoundaryReport> {
        let b = self.boundary_count();
        let orientable = self.is_orientable(basis);
        let euler = self.euler();
        let surface = classify(euler, b, orientable)?;
        Ok(BoundaryReport {
            b,
            traces: Vec::new(),
            orientable,
            euler,
            surface,
            capped: (b == 1).then_some(surface),
        })
    }

    pub fn switch(&self, e: &str) -> Result<Patch> {
        let ei = self.graph().edge_index(e)?;
        Ok(self.switch_index(ei))
    }

    pub fn switch_index(&self, e: usize) -> Patch {
        let mut t = self.twists.clone();
        t.toggle(e);
        Patch::new(self.ribbon.clone(), t)
    }

    /// Mirror one vertex disk: reverse its rotation and toggle the twist of
    /// each non-loop edge with exactly one end there.
    pub fn vertex_flip(&self, v: &str) -> Result<Patch> {
        let vi = self.graph().vertex_index(v)?;
        Ok(self.vertex_flip_index(vi))
    }

    pub fn vertex_flip_index(&self, v: usize) -> Patch {
        let g = self.graph().clone();
        let rot = self.rotation().reversed_at(v);
        let mut t = self.twists.clone();
        for (e, edge) in g.edges().iter().enumerate() {
            if !edge.is_loop() && edge.ends.contains(&v) {
                t.toggle(e);
            }
        }
        Patch::new(RibbonGraph::new(g, rot), t)
    }

    /// `{"graph", "rotation", "twists"}` document.
    pub fn to_json(&self) -> Value {
        let g = self.graph();
        json!({
            "graph": g.name(),
            "rotation": self.rotation().to_spec(g),
            "twists": self.twists.to_json(g),
        })
    }
}

/// Rotation with the most boundary circles at zero twist (a planar one when
/// the graph is planar), found by trying every rotation system. Ties go to
/// the first in enumeration order. `None` when there are more than `cap`
/// rotation systems.
pub fn min_genus_rotation(g: &MultiGraph, cap: u128) -> Option<RotationSystem> {
    let mut total: u128 = 1;
    for v in 0..g.n() {
        let d = g.degree_of(v) as u128;
        for k in 2..d {
            total = total.saturating_mul(k);
        }
    }
    if total > cap {
        return None;
    }
    let base = default_rotation(g);
    // all cyclic orders at each vertex, first dart fixed
    let options: Vec<Vec<Vec<Dart>>> = (0..g.n())
        .map(|v| {
            let darts = base.at(v);
            if darts.len() <= 2 {
                return vec![darts.to_vec()];
            }
            let rest: Vec<usize> = (1..darts.len()).collect();
            permutations(&rest)
                .into_iter()
                .map(|p| {
                    let mut order = vec![darts[0]];
                    order.extend(p.into_iter().map(|i| darts[i]));
                    order
                })
                .collect()
        })
        .collect();
    let zero = TwistVector::zero(g.m());
    let mut best: Option<(usize, RotationSystem)> = None;
    let mut idx = vec![0usize; g.n()];
    loop {
        let rot = RotationSystem {
            at: (0..g.n()).map(|v| options[v][idx[v]].clone()).collect(),
        };
        let b = RibbonGraph::new(g.clone(), rot.clone()).boundary_count(&zero);
        if best.as_ref().is_none_or(|(bb, _)| b > *bb) {
            best = Some((b, rot));
        }
        // odometer
        let mut v = 0;
        loop {
            if v == g.n() {
                return best.map(|(_, r)| r);
            }
            idx[v] += 1;
            if idx[v] < options[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
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

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::multigraph::fixtures::theta;

    /// Theta drawn in the plane: `u: (a0, b0, c0)`, `v: (c1, b1, a1)`.
    pub fn planar_theta() -> Arc<RibbonGraph> {
        let g = theta();
        let rot = RotationSystem::from_lists(
            &g,
            vec![
                vec![Dart::new(0, 0), Dart::new(1, 0), Dart::new(2, 0)],
                vec![Dart::new(2, 1), Dart::new(1, 1), Dart::new(0, 1)],
            ],
        )
        .unwrap();
        RibbonGraph::new(g, rot)
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::planar_theta;
    use super::*;
    use crate::cycle_space::fundamental_basis;
    use crate::multigraph::fixtures::*;

    fn patch(ribbon: &Arc<RibbonGraph>, ids: &[&str]) -> Patch {
        let t = TwistVector::from_ids(ribbon.graph(), ids).unwrap();
        Patch::new(ribbon.clone(), t)
    }

    #[test]
    fn default_rotations() {
        let g = theta();
        let r = default_rotation(&g);
        assert_eq!(r.at(0), &[Dart::new(0, 0), Dart::new(1, 0), Dart::new(2, 0)]);
        assert_eq!(r.at(1), &[Dart::new(0, 1), Dart::new(1, 1), Dart::new(2, 1)]);
        let r = default_rotation(&single_loop());
        assert_eq!(r.at(0), &[Dart::new(0, 0), Dart::new(0, 1)]);
        let r = default_rotation(&figure_eight());
        assert_eq!(
            r.at(0),
            &[Dart::new(0, 0), Dart::new(0, 1), Dart::new(1, 0), Dart::new(1, 1)]
        );
    }

    #[test]
    fn rotation_validation() {
        let g = theta();
        let bad = RotationSystem::from_lists(&g, vec![vec![Dart::new(0, 0)], vec![]]);
        assert!(matches!(bad, Err(Error::Rotation(_))));
        let spec = BTreeMap::from([("u".to_string(), vec![("a".to_string(), 1)])]);
        assert!(RotationSystem::from_spec(&g, &spec).is_err());
        let r = default_rotation(&g);
        assert_eq!(RotationSystem::from_spec(&g, &r.to_spec(&g)).unwrap(), r);
    }

    #[test]
    fn calibration_fixtures() {
        let ribbon = RibbonGraph::with_default_rotation(single_loop());
        assert_eq!(patch(&ribbon, &[]).boundary_count(), 2);
        assert_eq!(patch(&ribbon, &["e"]).boundary_count(), 1);
        assert_eq!(patch(&planar_theta(), &[]).boundary_count(), 3);
    }

    #[test]
    fn strips() {
        let ribbon = RibbonGraph::with_default_rotation(single_loop());
        assert!(patch(&ribbon, &["e"]).is_strip());
        assert!(!patch(&ribbon, &[]).is_strip());
        assert!(patch(&planar_theta(), &["a", "b", "c"]).is_strip());
    }

    #[test]
    fn orientability() {
        let t = planar_theta();
        let basis = fundamental_basis(t.graph());
        assert!(patch(&t, &["a", "b", "c"]).is_orientable(&basis));
        assert!(!patch(&t, &["a", "b"]).is_orientable(&basis));
        let l = RibbonGraph::with_default_rotation(single_loop());
        assert!(!patch(&l, &["e"]).is_orientable(&fundamental_basis(l.graph())));
    }

    #[test]
    fn surface_classes() {
        let t = planar_theta();
        let basis = fundamental_basis(t.graph());
        let r = patch(&t, &["a", "b", "c"]).surface_class(&basis).unwrap();
        assert_eq!((r.euler, r.b), (-1, 1));
        assert_eq!(r.surface, Surface::Orientable { genus: 1 });
        assert_eq!(r.capped.unwrap().closed_name(), "torus");
        let r = patch(&t, &["a", "b"]).surface_class(&basis).unwrap();
        assert_eq!(r.surface, Surface::NonOrientable { crosscaps: 2 });
        assert_eq!(r.capped.unwrap().closed_name(), "Klein bottle");
        let l = RibbonGraph::with_default_rotation(single_loop());
        let r = patch(&l, &["e"]).surface_class(&fundamental_basis(l.graph())).unwrap();
        assert_eq!((r.euler, r.b), (0, 1));
        assert_eq!(r.surface, Surface::NonOrientable { crosscaps: 1 });
        assert_eq!(r.capped.unwrap().closed_name(), "projective plane");
        assert!(classify(-1, 2, true).is_err());
        assert!(classify(0, 2, false).is_err());
    }

    #[test]
    fn planar_theta_traces() {
        let t = planar_theta();
        let p = patch(&t, &[]);
        let r = p.boundary_components(&fundamental_basis(t.graph())).unwrap();
        assert_eq!(r.b, 3);
        let mut supports: Vec<Vec<String>> = r
            .traces
            .iter()
            .map(|tr| odd_support(tr, 3).ids(t.graph()))
            .collect();
        supports.sort();
        assert_eq!(supports, vec![vec!["a", "b"], vec!["a", "c"], vec!["b", "c"]]);
        // every arc appears once overall
        let arcs: usize = r.traces.iter().map(Vec::len).sum();
        assert_eq!(arcs, 2 * 3 + 6);
    }

    #[test]
    fn switching() {
        let t = planar_theta();
        let px = patch(&t, &["a", "b", "c"]);
        let s = px.switch("c").unwrap();
        assert_eq!(s.twists().switched_ids(t.graph()), vec!["a", "b"]);
        assert_eq!(s.switch("c").unwrap(), px);
        assert!(matches!(px.switch("zz"), Err(Error::UnknownEdge(_))));
        let d = RibbonGraph::with_default_rotation(dumbbell());
        let p = patch(&d, &["a"]);
        assert_eq!(p.switch("f").unwrap(), p);
        assert_ne!(p.switch("b").unwrap(), p);
    }

    #[test]
    fn vertex_flips() {
        let t = planar_theta();
        let p = patch(&t, &["a"]);
        let f = p.vertex_flip("v").unwrap();
        assert_eq!(f.rotation().at(1), &[Dart::new(0, 1), Dart::new(1, 1), Dart::new(2, 1)]);
        assert_eq!(f.twists().switched_ids(t.graph()), vec!["b", "c"]);
        assert_eq!(f.boundary_count(), p.boundary_count());
        assert_eq!(f.vertex_flip("v").unwrap(), p);

        let e = RibbonGraph::with_default_rotation(figure_eight());
        let p = patch(&e, &["a"]);
        let f = p.vertex_flip("v").unwrap();
        assert_eq!(f.twists(), p.twists());
        assert_eq!(f.boundary_count(), p.boundary_count());
        assert!(matches!(p.vertex_flip("nope"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn isolated_vertex_is_a_disk() {
        let g = MultiGraph::new("pt", &["x"], &[] as &[(&str, &str, &str)], false).unwrap();
        let r = RibbonGraph::with_default_rotation(g);
        let p = Patch::untwisted(r);
        assert_eq!(p.boundary_count(), 1);
        let rep = p.surface_class(&fundamental_basis(p.graph())).unwrap();
        assert_eq!(rep.surface, Surface::Orientable { genus: 0 });
    }

    #[test]
    fn min_genus_finds_planar_theta() {
        let g = theta();
        let r = min_genus_rotation(&g, 1000).unwrap();
        let ribbon = RibbonGraph::new(g, r);
        assert_eq!(Patch::untwisted(ribbon).boundary_count(), 3);
        let r = min_genus_rotation(&figure_eight(), 1000).unwrap();
        assert_eq!(r, default_rotation(&figure_eight()));
    }

    #[test]
    fn contraction_keeps_the_surface() {
        // contracting an untwisted edge is a homeomorphism of the thickening
        let t = planar_theta();
        let g = t.graph();
        let c = g.contract_edge("b").unwrap();
        let rot = contract_rotation(g, t.rotation(), &c, 1);
        let contracted = RibbonGraph::new(c.graph.clone(), rot);
        for ids in [vec![], vec!["a"], vec!["a", "c"]] {
            let lifted = patch(&t, &ids);
            let down = TwistVector::from_ids(&c.graph, &ids).unwrap();
            assert_eq!(contracted.boundary_count(&down), lifted.boundary_count());
        }
    }
}
