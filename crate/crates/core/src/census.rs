//! Exhaustive patch census on one graph with a fixed rotation system, and
//! the checks run against it.
//!
//! Twist vectors are enumerated as binary counters over the non-bridge
//! edges in edge order (bit 0 is the first non-bridge edge); bridges stay
//! untwisted. "First" always means first in that order.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cycle_space::{fundamental_basis, min_c_basis, CycleBasis, EdgeSet, MIN_C_MAX_EDGES};
use crate::error::{Error, Result};
use crate::intersection::{
    build_h, check_p_lower_bound, count_disjoint_tuples, simple_paths, Carrier, HGraph, HPath, PathTuple,
};
use crate::multigraph::{automorphisms, MultiGraph};
use crate::ribbon::{classify, cyclically_equal, odd_support, Patch, RibbonGraph, Surface, TwistVector};

pub const DEFAULT_MAX_MBC: usize = 24;
pub const DEFAULT_ISO_CAP: u128 = 200_000;
/// Violations kept verbatim in a check witness.
const WITNESS_LIMIT: usize = 20;

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub max_mbc: usize,
    pub parallel: bool,
    /// Largest automorphism group used for the up-to-isomorphism count.
    pub iso_cap: u128,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            max_mbc: DEFAULT_MAX_MBC,
            parallel: true,
            iso_cap: DEFAULT_ISO_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchRecord {
    pub twists: TwistVector,
    pub b: usize,
    pub orientable: bool,
    pub strip: bool,
    pub surface: Surface,
}

impl PatchRecord {
    pub fn to_json(&self, g: &MultiGraph) -> Value {
        let mut v = json!({
            "twists": self.twists.to_json(g),
            "pattern": self.twists.pattern(),
            "b": self.b,
            "orientable": self.orientable,
            "strip": self.strip,
            "surface": self.surface,
        });
        if self.strip {
            v["capped"] = json!(self.surface.closed_name());
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct Census {
    pub ribbon: Arc<RibbonGraph>,
    pub basis: CycleBasis,
    /// Non-bridge edges, i.e. the counter bits.
    pub free_edges: Vec<usize>,
    pub m_bc: usize,
    pub cyclic_bridges: usize,
    pub p: u128,
    pub records: Vec<PatchRecord>,
    pub warnings: Vec<String>,
}

impl Census {
    pub fn graph(&self) -> &MultiGraph {
        self.ribbon.graph()
    }

    pub fn q(&self) -> usize {
        self.basis.q()
    }

    pub fn c(&self) -> usize {
        self.basis.c()
    }

    pub fn patch_count(&self) -> usize {
        self.records.len()
    }

    pub fn strips(&self) -> impl Iterator<Item = &PatchRecord> {
        self.records.iter().filter(|r| r.strip)
    }

    /// Number of strips.
    pub fn s(&self) -> usize {
        self.strips().count()
    }

    /// Orientable strips.
    pub fn o(&self) -> usize {
        self.strips().filter(|r| r.orientable).count()
    }

    /// Non-orientable strips.
    pub fn n(&self) -> usize {
        self.strips().filter(|r| !r.orientable).count()
    }

    /// `2^m_bc - p`.
    pub fn bound_t4(&self) -> i128 {
        (1i128 << self.m_bc) - self.p as i128
    }

    /// Every non-bridge edge switched.
    pub fn px(&self) -> TwistVector {
        let mut t = TwistVector::zero(self.graph().m());
        for &e in &self.free_edges {
            t.set(e, true);
        }
        t
    }

    /// Cyclic and at most cubic: the setting the bounds are stated for.
    pub fn bounds_apply(&self) -> bool {
        self.graph().is_cyclic() && self.graph().max_degree() <= 3
    }

    pub fn is_bridgeless_cubic(&self) -> bool {
        self.graph().is_cubic() && self.cyclic_bridges == 0 && self.ribbon.bridges().iter().all(|b| !b)
    }

    pub fn patch(&self, twists: &TwistVector) -> Patch {
        Patch::new(self.ribbon.clone(), twists.clone())
    }

    pub fn record(&self, twists: &TwistVector) -> Option<&PatchRecord> {
        self.index_of(twists).map(|i| &self.records[i])
    }

    fn index_of(&self, twists: &TwistVector) -> Option<usize> {
        let mut idx = 0usize;
        for (bit, &e) in self.free_edges.iter().enumerate() {
            if twists.get(e) {
                idx |= 1 << bit;
            }
        }
        (idx < self.records.len()).then_some(idx)
    }

    fn severity(&self) -> Status {
        if self.bounds_apply() {
            Status::Fail
        } else {
            Status::Finding
        }
    }
}

fn twist_for_counter(m: usize, free: &[usize], counter: usize) -> TwistVector {
    let mut t = TwistVector::zero(m);
    for (bit, &e) in free.iter().enumerate() {
        if counter >> bit & 1 == 1 {
            t.set(e, true);
        }
    }
    t
}

fn classify_record(ribbon: &RibbonGraph, basis: &CycleBasis, twists: TwistVector) -> Result<PatchRecord> {
    let b = ribbon.boundary_count(&twists);
    let orientable = basis.cycles.iter().all(|c| !c.dot(twists.as_set()));
    let g = ribbon.graph();
    let surface = classify(g.n() as i64 - g.m() as i64, b, orientable)?;
    Ok(PatchRecord {
        twists,
        b,
        orientable,
        strip: b == 1,
        surface,
    })
}

/// Classifies all `2^(non-bridge edges)` patches. Graphs that are not
/// cyclic or have a vertex of degree above three are still enumerated, with
/// a warning.
pub fn enumerate_patches(ribbon: Arc<RibbonGraph>, basis: CycleBasis, cfg: &CensusConfig) -> Result<Census> {
    let g = ribbon.graph();
    let free = ribbon.free_edges();
    let cp = g.cyclic_part().graph;
    let cyclic_bridges = cp.bridge_count();
    let m_bc = cp.m() - cyclic_bridges;
    let size = free.len().max(m_bc);
    if size > cfg.max_mbc {
        return Err(Error::InstanceTooLarge {
            m_bc: size,
            cap: cfg.max_mbc,
        });
    }
    let mut warnings = Vec::new();
    if !g.is_cyclic() {
        warnings.push(format!(
            "graph is not cyclic: {} twist classes enumerated, cyclic part has m_bc = {m_bc}",
            1usize << free.len()
        ));
    }
    if g.max_degree() > 3 {
        warnings.push("graph has vertices of degree above three; bounds are checked literally".into());
    }

    let m = g.m();
    let classify_one = |counter: usize| classify_record(&ribbon, &basis, twist_for_counter(m, &free, counter));
    let total = 1usize << free.len();
    let records: Vec<PatchRecord> = if cfg.parallel {
        (0..total).into_par_iter().map(classify_one).collect::<Result<_>>()?
    } else {
        (0..total).map(classify_one).collect::<Result<_>>()?
    };
    let h = build_h(g, &basis);
    let p = count_disjoint_tuples(&simple_paths(&h), h.q);

    Ok(Census {
        ribbon: ribbon.clone(),
        basis,
        free_edges: free,
        m_bc,
        cyclic_bridges,
        p,
        records,
        warnings,
    })
}

/// First strip in counter order.
pub fn find_strip(ribbon: &Arc<RibbonGraph>) -> Option<Patch> {
    let free = ribbon.free_edges();
    let m = ribbon.graph().m();
    (0..1usize << free.len())
        .map(|c| twist_for_counter(m, &free, c))
        .find(|t| ribbon.boundary_count(t) == 1)
        .map(|t| Patch::new(ribbon.clone(), t))
}

/// Disjoint-set forest over record indices.
struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Strip count up to graph automorphisms. An automorphism acts on a patch
/// by relabeling; vertex disks whose rotation comes out reversed are
/// flipped back. Automorphisms that map the rotation at some vertex to an
/// order that is neither the same nor reversed do not act on this census
/// and are skipped. `None` when the automorphism group exceeds the cap.
pub fn strips_up_to_iso(census: &Census, cap: u128) -> Option<usize> {
    let g = census.graph();
    let rot = census.ribbon.rotation();
    let auts = automorphisms(g, cap)?;
    let strips: Vec<usize> = (0..census.records.len()).filter(|&i| census.records[i].strip).collect();
    let mut dsu = Dsu((0..census.records.len()).collect());
    for aut in &auts {
        let mut flipped = vec![false; g.n()];
        let mut acts = true;
        for v in 0..g.n() {
            let image: Vec<_> = rot.at(v).iter().map(|d| aut.dart_map[d.index()]).collect();
            let w = aut.vertex_map[v];
            if cyclically_equal(&image, rot.at(w)) {
                continue;
            }
            let mut rev = image.clone();
            rev.reverse();
            if cyclically_equal(&rev, rot.at(w)) {
                flipped[w] = true;
            } else {
                acts = false;
                break;
            }
        }
        if !acts {
            continue;
        }
        let edge_map = aut.edge_map();
        for &i in &strips {
            let src = &census.records[i].twists;
            let mut t = TwistVector::zero(g.m());
            for e in 0..g.m() {
                t.set(edge_map[e], src.get(e));
            }
            for (e, edge) in g.edges().iter().enumerate() {
                if !edge.is_loop() && flipped[edge.ends[0]] != flipped[edge.ends[1]] {
                    t.toggle(e);
                }
            }
            let t = census.patch(&t).twists().clone();
            let j = census.index_of(&t).expect("image is a normalized twist vector");
            debug_assert!(census.records[j].strip, "automorphism image of a strip is a strip");
            dsu.union(i, j);
        }
    }
    let mut roots: Vec<usize> = strips.iter().map(|&i| dsu.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Some(roots.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A violation on an input outside the setting of the claim, or a
    /// counterexample to an open question.
    Finding,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Value,
    /// The statement being checked.
    pub claim: String,
}

impl CheckRecord {
    fn new(name: &str, claim: &str, status: Status, witness: Value) -> Self {
        CheckRecord {
            name: name.to_string(),
            status,
            witness,
            claim: claim.to_string(),
        }
    }
}

pub fn verify_p_lower_bound(census: &Census) -> CheckRecord {
    let r = check_p_lower_bound(census.graph(), &census.basis);
    let status = if r.consistent { Status::Pass } else { Status::Fail };
    CheckRecord::new(
        "p_lower_bound",
        "p >= 2^q - 1, with equality iff the intersection graph has no edges",
        status,
        r.to_json(),
    )
}

/// `S <= 2^m_bc - p`.
pub fn verify_theorem_bound(census: &Census) -> CheckRecord {
    let s = census.s() as i128;
    let bound = census.bound_t4();
    let status = if s <= bound {
        Status::Pass
    } else {
        census.severity()
    };
    CheckRecord::new(
        "strip_bound",
        "number of strips <= 2^m_bc - p",
        status,
        json!({
            "strips": s,
            "m_bc": census.m_bc,
            "p": census.p.to_string(),
            "bound": bound.to_string(),
            "slack": (bound - s).to_string(),
        }),
    )
}

/// Switching a non-switched, non-bridge edge of a strip gives a strip, and
/// a non-orientable one when the strip was orientable.
pub fn verify_switch_lemma(census: &Census) -> CheckRecord {
    let g = census.graph();
    let mut tried = 0usize;
    let mut violations = Vec::new();
    for r in census.strips() {
        for &e in &census.free_edges {
            if r.twists.get(e) {
                continue;
            }
            tried += 1;
            let mut t = r.twists.clone();
            t.toggle(e);
            let target = census.record(&t).expect("switched vector is enumerated");
            let strip_ok = target.strip;
            let orient_ok = !(r.orientable && target.orientable);
            if !(strip_ok && orient_ok) {
                violations.push(json!({
                    "source": r.twists.pattern(),
                    "edge": g.edge_id(e),
                    "target": target.twists.pattern(),
                    "target_b": target.b,
                    "source_orientable": r.orientable,
                    "target_orientable": target.orientable,
                }));
            }
        }
    }
    let status = if violations.is_empty() {
        Status::Pass
    } else {
        census.severity()
    };
    let count = violations.len();
    let from_orientable = violations
        .iter()
        .filter(|v| v["source_orientable"] == json!(true))
        .count();
    violations.truncate(WITNESS_LIMIT);
    CheckRecord::new(
        "switch_lemma",
        "switching a non-switched edge of a strip keeps a strip; orientable becomes non-orientable",
        status,
        json!({
            "pairs_checked": tried,
            "violations": count,
            "violations_from_orientable": from_orientable,
            "violations_from_non_orientable": count - from_orientable,
            "examples": violations,
        }),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiRecord {
    pub source: TwistVector,
    pub edge: usize,
    pub target: TwistVector,
}

/// All (orientable strip other than the all-switched one, non-switched
/// non-bridge edge, resulting non-orientable strip) triples.
pub fn phi_relation(census: &Census) -> Vec<PhiRecord> {
    let px = census.px();
    let mut out = Vec::new();
    for r in census.strips().filter(|r| r.orientable && r.twists != px) {
        for &e in &census.free_edges {
            if r.twists.get(e) {
                continue;
            }
            let mut t = r.twists.clone();
            t.toggle(e);
            let target = census.record(&t).expect("switched vector is enumerated");
            if target.strip && !target.orientable {
                out.push(PhiRecord {
                    source: r.twists.clone(),
                    edge: e,
                    target: t,
                });
            }
        }
    }
    out
}

/// Distinct sources per target, in first-seen order of targets.
pub fn phi_fibers(records: &[PhiRecord]) -> Vec<(TwistVector, Vec<(TwistVector, usize)>)> {
    let mut order: Vec<TwistVector> = Vec::new();
    let mut fibers: HashMap<TwistVector, Vec<(TwistVector, usize)>> = HashMap::new();
    for r in records {
        let entry = fibers.entry(r.target.clone()).or_insert_with(|| {
            order.push(r.target.clone());
            Vec::new()
        });
        if !entry.iter().any(|(s, _)| *s == r.source) {
            entry.push((r.source.clone(), r.edge));
        }
    }
    order
        .into_iter()
        .map(|t| {
            let f = fibers.remove(&t).expect("target recorded");
            (t, f)
        })
        .collect()
}

/// Some simple cycle of `g` contains both edges.
pub fn on_common_simple_cycle(g: &MultiGraph, e1: usize, e2: usize) -> bool {
    if e1 == e2 {
        return true;
    }
    if g.edge(e1).is_loop() || g.edge(e2).is_loop() {
        return false;
    }
    // simple paths from one end of e1 back to the other, avoiding e1
    let [target, start] = g.edge(e1).ends;
    let mut visited = vec![false; g.n()];
    visited[start] = true;

    fn dfs(g: &MultiGraph, v: usize, target: usize, skip: usize, want: usize, used_want: bool, visited: &mut [bool]) -> bool {
        if v == target {
            return used_want;
        }
        for (i, e) in g.edges().iter().enumerate() {
            if i == skip || e.is_loop() || !e.ends.contains(&v) {
                continue;
            }
            let w = if e.ends[0] == v { e.ends[1] } else { e.ends[0] };
            if visited[w] {
                continue;
            }
            visited[w] = true;
            let found = dfs(g, w, target, skip, want, used_want || i == want, visited);
            visited[w] = false;
            if found {
                return true;
            }
        }
        false
    }

    dfs(g, start, target, e1, e2, false, &mut visited)
}

/// Fiber structure of the switch relation and the orientable-count bounds.
pub fn verify_phi_properties(census: &Census) -> Vec<CheckRecord> {
    let g = census.graph();
    let relation = phi_relation(census);
    let fibers = phi_fibers(&relation);
    let severity = census.severity();
    let c = census.c();
    let cubic = census.is_bridgeless_cubic();
    let fiber_cap = if cubic { c / 2 } else { c };

    let mut pair_violations = Vec::new();
    let mut pairs = 0usize;
    for (target, sources) in &fibers {
        for i in 0..sources.len() {
            for j in i + 1..sources.len() {
                pairs += 1;
                let ((s1, e1), (s2, e2)) = (&sources[i], &sources[j]);
                let mut diff = s1.as_set().sym_diff(s2.as_set()).expect("same length");
                diff.remove(*e1);
                diff.remove(*e2);
                let agree = diff.is_empty();
                let common_cycle = on_common_simple_cycle(g, *e1, *e2);
                let disconnects = !g.connected_without(&[*e1, *e2]);
                if !(agree && common_cycle && disconnects) {
                    pair_violations.push(json!({
                        "target": target.pattern(),
                        "sources": [s1.pattern(), s2.pattern()],
                        "edges": [g.edge_id(*e1), g.edge_id(*e2)],
                        "agree_outside": agree,
                        "common_cycle": common_cycle,
                        "disconnects": disconnects,
                    }));
                }
            }
        }
    }
    let pair_status = if pairs == 0 {
        Status::NotApplicable
    } else if pair_violations.is_empty() {
        Status::Pass
    } else {
        severity
    };

    let max_fiber = fibers.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let big: Vec<Value> = fibers
        .iter()
        .filter(|(_, s)| s.len() > fiber_cap)
        .take(WITNESS_LIMIT)
        .map(|(t, s)| json!({"target": t.pattern(), "size": s.len()}))
        .collect();
    let fiber_status = if fibers.is_empty() {
        Status::NotApplicable
    } else if big.is_empty() {
        Status::Pass
    } else {
        severity
    };

    let (o, n) = (census.o() as i128, census.n() as i128);
    let factor = fiber_cap as i128;
    let count_ok = o <= factor * n + 1;

    let even = census.q() % 2 == 0;
    // O <= f (2^m_bc - p) / (f + 1) + 1, cleared of the denominator
    let bound = census.bound_t4();
    let combined_ok = o * (factor + 1) <= factor * bound + factor + 1;

    vec![
        CheckRecord::new(
            "phi_pairs",
            "two orientable strips with the same switch image agree outside the two edges, \
             which lie on a common simple cycle and together disconnect the graph",
            pair_status,
            json!({"pairs_checked": pairs, "relation_size": relation.len(), "violations": pair_violations}),
        ),
        CheckRecord::new(
            "phi_fibers",
            "each non-orientable strip has at most c preimages (floor(c/2) for bridgeless cubic graphs)",
            fiber_status,
            json!({"max_fiber": max_fiber, "cap": fiber_cap, "c": c, "bridgeless_cubic": cubic, "oversized": big}),
        ),
        CheckRecord::new(
            "orientable_vs_nonorientable",
            "O <= c N + 1 (floor(c/2) in place of c for bridgeless cubic graphs)",
            if count_ok { Status::Pass } else { severity },
            json!({"O": o, "N": n, "factor": factor, "bound": (factor * n + 1).to_string()}),
        ),
        CheckRecord::new(
            "orientable_bound",
            "for even q: O <= c (2^m_bc - p) / (c + 1) + 1 (floor(c/2) for bridgeless cubic graphs)",
            if !even {
                Status::NotApplicable
            } else if combined_ok {
                Status::Pass
            } else {
                severity
            },
            json!({
                "O": o,
                "q": census.q(),
                "factor": factor,
                "strip_bound": bound.to_string(),
                "lhs_times_denominator": (o * (factor + 1)).to_string(),
                "rhs_times_denominator": (factor * bound + factor + 1).to_string(),
            }),
        ),
    ]
}

/// Odd `q` admits no orientable strip.
pub fn verify_odd_q(census: &Census) -> CheckRecord {
    let q = census.q();
    let o = census.o();
    // an orientable strip has euler 1 - q = 1 - 2 genus
    let consistent = census
        .strips()
        .filter(|r| r.orientable)
        .all(|r| matches!(r.surface, Surface::Orientable { genus } if 2 * genus == q));
    let status = if q % 2 == 0 {
        if consistent {
            Status::NotApplicable
        } else {
            Status::Fail
        }
    } else if o == 0 && consistent {
        Status::Pass
    } else {
        Status::Fail
    };
    CheckRecord::new(
        "odd_q",
        "every strip on a graph with odd q is non-orientable",
        status,
        json!({"q": q, "O": o, "genus_consistent": consistent}),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCharacter {
    Longitudinal,
    Transversal,
}

/// Un-switches `e` on a strip: longitudinal if a strip remains, transversal
/// otherwise. Also returns the boundary count after un-switching.
pub fn edge_character(strip: &Patch, e: &str) -> Result<(EdgeCharacter, usize)> {
    let g = strip.graph();
    let ei = g.edge_index(e)?;
    if strip.ribbon().bridges()[ei] {
        return Err(Error::Bridge(e.to_string()));
    }
    if !strip.twists().get(ei) {
        return Err(Error::NotSwitched(e.to_string()));
    }
    if !strip.is_strip() {
        return Err(Error::NotAStrip);
    }
    let b = strip.switch_index(ei).boundary_count();
    let ch = if b == 1 {
        EdgeCharacter::Longitudinal
    } else {
        EdgeCharacter::Transversal
    };
    Ok((ch, b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripCharacter {
    pub twists: TwistVector,
    pub orientable: bool,
    pub longitudinal: Vec<usize>,
    pub transversal: Vec<usize>,
    /// Largest boundary count seen after un-switching one edge.
    pub max_unswitched_b: usize,
}

impl StripCharacter {
    pub fn to_json(&self, g: &MultiGraph) -> Value {
        let ids = |v: &[usize]| v.iter().map(|&e| g.edge_id(e).to_string()).collect::<Vec<_>>();
        json!({
            "pattern": self.twists.pattern(),
            "orientable": self.orientable,
            "longitudinal": ids(&self.longitudinal),
            "transversal": ids(&self.transversal),
        })
    }
}

/// Longitudinal/transversal split of the switched edges of every strip.
pub fn strip_characters(census: &Census) -> Vec<StripCharacter> {
    census
        .strips()
        .map(|r| {
            let mut sc = StripCharacter {
                twists: r.twists.clone(),
                orientable: r.orientable,
                longitudinal: Vec::new(),
                transversal: Vec::new(),
                max_unswitched_b: 0,
            };
            for &e in &census.free_edges {
                if !r.twists.get(e) {
                    continue;
                }
                let mut t = r.twists.clone();
                t.toggle(e);
                let b = census.record(&t).expect("enumerated").b;
                sc.max_unswitched_b = sc.max_unswitched_b.max(b);
                if b == 1 {
                    sc.longitudinal.push(e);
                } else {
                    sc.transversal.push(e);
                }
            }
            sc
        })
        .collect()
}

/// Un-switching one switched edge of a strip leaves at most two boundary
/// circles.
pub fn verify_unswitch_boundary(characters: &[StripCharacter]) -> CheckRecord {
    let bad: Vec<Value> = characters
        .iter()
        .filter(|c| c.max_unswitched_b > 2)
        .take(WITNESS_LIMIT)
        .map(|c| json!({"strip": c.twists.pattern(), "max_b": c.max_unswitched_b}))
        .collect();
    let checked: usize = characters.iter().map(|c| c.longitudinal.len() + c.transversal.len()).sum();
    CheckRecord::new(
        "unswitch_boundary",
        "un-switching a switched edge of a strip gives at most two boundary components",
        if bad.is_empty() { Status::Pass } else { Status::Fail },
        json!({"edges_checked": checked, "violations": bad}),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConjectureFlag {
    /// Orientable strip with no longitudinal edge.
    NoLongitudinalEdge { strip: String, switched: Vec<String> },
    /// At least as many orientable as non-orientable strips.
    OrientableNotFewer { orientable: usize, non_orientable: usize },
}

/// Counterexample hunt for the two open questions on orientable strips.
/// Graphs with `q = 0` (a single disk strip) are skipped.
pub fn conjecture_sweep_checks(census: &Census, characters: &[StripCharacter]) -> Vec<ConjectureFlag> {
    let g = census.graph();
    if census.q() == 0 {
        return Vec::new();
    }
    let mut flags: Vec<ConjectureFlag> = characters
        .iter()
        .filter(|c| c.orientable && c.longitudinal.is_empty())
        .map(|c| ConjectureFlag::NoLongitudinalEdge {
            strip: c.twists.pattern(),
            switched: c.twists.switched_ids(g),
        })
        .collect();
    let (o, n) = (census.o(), census.n());
    if census.s() > 0 && o >= n {
        flags.push(ConjectureFlag::OrientableNotFewer {
            orientable: o,
            non_orientable: n,
        });
    }
    flags
}

pub const CHECK_NAMES: &[&str] = &[
    "p_lower_bound",
    "strip_bound",
    "switch_lemma",
    "phi",
    "odd_q",
    "unswitch_boundary",
    "conjectures",
];

/// Everything computed from one census.
#[derive(Clone, Debug)]
pub struct Verification {
    pub checks: Vec<CheckRecord>,
    pub characters: Vec<StripCharacter>,
    pub phi: Vec<PhiRecord>,
    pub flags: Vec<ConjectureFlag>,
}

impl Verification {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn findings(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Finding).count()
    }
}

/// Runs the named checks (all of [`CHECK_NAMES`] when `names` is empty).
pub fn run_checks(census: &Census, names: &[String]) -> Result<Verification> {
    for n in names {
        if !CHECK_NAMES.contains(&n.as_str()) {
            return Err(Error::UnknownCheck(n.clone()));
        }
    }
    let wants = |n: &str| names.is_empty() || names.iter().any(|x| x == n);
    let characters = strip_characters(census);
    let phi = phi_relation(census);
    let flags = conjecture_sweep_checks(census, &characters);
    let mut checks = Vec::new();
    if wants("p_lower_bound") {
        checks.push(verify_p_lower_bound(census));
    }
    if wants("strip_bound") {
        checks.push(verify_theorem_bound(census));
    }
    if wants("switch_lemma") {
        checks.push(verify_switch_lemma(census));
    }
    if wants("phi") {
        checks.extend(verify_phi_properties(census));
    }
    if wants("odd_q") {
        checks.push(verify_odd_q(census));
    }
    if wants("unswitch_boundary") {
        checks.push(verify_unswitch_boundary(&characters));
    }
    if wants("conjectures") {
        let witness = serde_json::to_value(&flags).expect("flags serialize");
        checks.push(CheckRecord::new(
            "conjectures",
            "every orientable strip has a longitudinal edge; O < N",
            if flags.is_empty() { Status::Pass } else { Status::Finding },
            witness,
        ));
    }
    Ok(Verification {
        checks,
        characters,
        phi,
        flags,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisChoice {
    #[default]
    Bfs,
    MinC,
}

/// The requested cycle basis. A minimum-`c` request on a graph too large
/// for spanning-tree enumeration falls back to BFS with a warning.
pub fn choose_basis(g: &MultiGraph, choice: BasisChoice) -> (CycleBasis, Option<String>) {
    match choice {
        BasisChoice::Bfs => (fundamental_basis(g), None),
        BasisChoice::MinC => match min_c_basis(g) {
            Some(b) => (b, None),
            None => (
                fundamental_basis(g),
                Some(format!(
                    "min-c basis needs m <= {MIN_C_MAX_EDGES}; fell back to the BFS basis"
                )),
            ),
        },
    }
}

/// Result of building a patch for a tuple of disjoint paths.
#[derive(Clone, Debug)]
pub struct TuplePatch {
    pub k: usize,
    /// G-edges carried by the tuple's paths.
    pub contracted: Vec<usize>,
    /// The pinned search failed and some contracted edge carries a twist.
    pub contracted_twisted: bool,
    pub contraction_size: (usize, usize),
    pub patch: Option<Patch>,
    pub b: Option<usize>,
    /// Per path: target cycle (restricted to non-contracted edges) and
    /// whether some boundary circle has exactly that odd support.
    pub enclosures: Vec<(EdgeSet, bool)>,
}

impl TuplePatch {
    pub fn ok(&self) -> bool {
        self.b == Some(self.k + 1) && self.enclosures.iter().all(|(_, e)| *e)
    }

    pub fn to_json(&self, g: &MultiGraph) -> Value {
        json!({
            "k": self.k,
            "contracted": self.contracted.iter().map(|&e| g.edge_id(e)).collect::<Vec<_>>(),
            "contracted_twisted": self.contracted_twisted,
            "contraction": {"n": self.contraction_size.0, "m": self.contraction_size.1},
            "patch": self.patch.as_ref().map(Patch::to_json),
            "b": self.b,
            "b_is_k_plus_1": self.b == Some(self.k + 1),
            "enclosures": self.enclosures.iter().map(|(s, ok)| json!({"cycle": s.ids(g), "enclosed": ok})).collect::<Vec<_>>(),
            "ok": self.ok(),
        })
    }
}

/// Patch with `k + 1` boundary circles for a tuple of `k` disjoint paths.
///
/// The G-edges carried by the paths are kept untwisted and the remaining
/// non-bridge edges are searched in counter order for a twist vector giving
/// `k + 1` circles where each path's cycle sum (restricted to non-contracted
/// edges) is the odd support of some circle. If none exists, all non-bridge
/// edges are searched; failing that, the first vector with `k + 1` circles
/// is returned with its enclosures marked false. `patch` is `None` if no
/// twist vector reaches `k + 1`.
pub fn build_patch_from_tuple(
    ribbon: &Arc<RibbonGraph>,
    basis: &CycleBasis,
    h: &HGraph,
    paths: &[HPath],
    tuple: &PathTuple,
) -> Result<TuplePatch> {
    let g = ribbon.graph();
    let k = tuple.k();
    if k == 0 {
        return Err(Error::Tuple("empty tuple".into()));
    }
    let mut used = 0u64;
    let mut contracted = EdgeSet::empty(g.m());
    for &pi in &tuple.paths {
        let path = paths
            .get(pi)
            .ok_or_else(|| Error::Tuple(format!("path index {pi} out of range")))?;
        let mask = path.vertex_mask();
        if mask & used != 0 {
            return Err(Error::Tuple("paths are not vertex-disjoint".into()));
        }
        used |= mask;
        for &he in &path.edges {
            match h.edges[he].carrier {
                Carrier::Edge(e) => contracted.insert(e),
                Carrier::Vertex(v) => return Err(Error::VertexTypeEdge(g.vertex_id(v).to_string())),
            }
        }
    }

    // contraction size, for the record
    let mut small = g.clone();
    for e in contracted.iter() {
        let id = g.edge_id(e);
        if let Ok(c) = small.contract_edge(id) {
            small = c.graph;
        }
    }

    let targets: Vec<EdgeSet> = tuple
        .paths
        .iter()
        .map(|&pi| {
            let mut s = EdgeSet::empty(g.m());
            for &v in &paths[pi].vertices {
                s.xor_assign(&basis.cycles[v]);
            }
            for e in contracted.iter() {
                s.remove(e);
            }
            s
        })
        .collect();

    let search = |free: &[usize]| {
        let mut fallback: Option<(TwistVector, Vec<(EdgeSet, bool)>)> = None;
        for counter in 0..1usize << free.len() {
            let t = twist_for_counter(g.m(), free, counter);
            if ribbon.boundary_count(&t) != k + 1 {
                continue;
            }
            let supports: Vec<EdgeSet> = ribbon
                .trace(&t)
                .iter()
                .map(|tr| {
                    let mut s = odd_support(tr, g.m());
                    for e in contracted.iter() {
                        s.remove(e);
                    }
                    s
                })
                .collect();
            let enclosures: Vec<(EdgeSet, bool)> = targets
                .iter()
                .map(|target| (target.clone(), supports.iter().any(|s| s == target)))
                .collect();
            if enclosures.iter().all(|(_, ok)| *ok) {
                return (Some((t, enclosures)), fallback);
            }
            if fallback.is_none() {
                fallback = Some((t, enclosures));
            }
        }
        (None, fallback)
    };
    // Contracting an untwisted edge is a homeomorphism of the ribbon, so the
    // pinned search cannot always split the boundary; the second pass lets
    // the contracted edges twist as well.
    let all_free = ribbon.free_edges();
    let pinned: Vec<usize> = all_free.iter().copied().filter(|&e| !contracted.contains(e)).collect();
    let (pinned_hit, pinned_fallback) = search(&pinned);
    let (chosen, fallback) = match pinned_hit {
        Some(hit) => (Some(hit), None),
        None => {
            let (hit, fb) = search(&all_free);
            (hit, pinned_fallback.or(fb))
        }
    };
    let found = chosen.or(fallback);
    let (patch, b, enclosures) = match found {
        Some((t, enc)) => {
            let p = Patch::new(ribbon.clone(), t);
            let b = p.boundary_count();
            (Some(p), Some(b), enc)
        }
        None => (None, None, targets.into_iter().map(|t| (t, false)).collect()),
    };
    Ok(TuplePatch {
        k,
        contracted: contracted.iter().collect(),
        contraction_size: (small.n(), small.m()),
        contracted_twisted: patch
            .as_ref()
            .is_some_and(|p| contracted.iter().any(|e| p.twists().get(e))),
        patch,
        b,
        enclosures,
    })
}

/// Full census report as JSON.
pub fn census_report(census: &Census, verification: &Verification, iso_cap: u128) -> Value {
    let g = census.graph();
    let up_to_iso = strips_up_to_iso(census, iso_cap);
    let fibers = phi_fibers(&verification.phi);
    let phi_records: Vec<Value> = verification
        .phi
        .iter()
        .map(|r| {
            let fiber = fibers
                .iter()
                .find(|(t, _)| *t == r.target)
                .map_or(0, |(_, s)| s.len());
            json!({
                "source": r.source.pattern(),
                "edge": g.edge_id(r.edge),
                "target": r.target.pattern(),
                "fiber_size": fiber,
            })
        })
        .collect();
    let mut surfaces: BTreeMap<String, usize> = BTreeMap::new();
    for r in census.strips() {
        *surfaces.entry(r.surface.closed_name()).or_default() += 1;
    }
    let mut b_hist: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &census.records {
        *b_hist.entry(r.b).or_default() += 1;
    }
    json!({
        "graph": g.name(),
        "n": g.n(),
        "m": g.m(),
        "edge_order": g.edges().iter().map(|e| e.id.clone()).collect::<Vec<_>>(),
        "rotation": census.ribbon.rotation().to_spec(g),
        "basis": census.basis.to_ids(g),
        "basis_kind": census.basis.kind,
        "m_bc": census.m_bc,
        "q": census.q(),
        "b_cp": census.cyclic_bridges,
        "p": census.p.to_string(),
        "c": census.c(),
        "patch_count": census.patch_count(),
        "records": census.records.iter().map(|r| r.to_json(g)).collect::<Vec<_>>(),
        "boundary_histogram": b_hist.iter().map(|(b, n)| json!([b, n])).collect::<Vec<_>>(),
        "S": census.s(),
        "O": census.o(),
        "N": census.n(),
        "S_up_to_iso": up_to_iso,
        "capped_surfaces": surfaces,
        "bound_T4": census.bound_t4().to_string(),
        "bound_checks": verification.checks,
        "phi_records": phi_records,
        "strip_characters": verification.characters.iter().map(|c| c.to_json(g)).collect::<Vec<_>>(),
        "conjecture_flags": verification.flags,
        "warnings": census.warnings,
    })
}

/// One row per twist class.
pub fn census_csv(census: &Census) -> String {
    let mut out = String::from("pattern,switched,b,orientable,strip,surface\n");
    let g = census.graph();
    for r in &census.records {
        let surface = match r.surface {
            Surface::Orientable { genus } => format!("genus {genus}"),
            Surface::NonOrientable { crosscaps } => format!("crosscaps {crosscaps}"),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.twists.pattern(),
            r.twists.switched_ids(g).join(" "),
            r.b,
            r.orientable,
            r.strip,
            surface
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::fixtures::*;
    use crate::ribbon::test_support::planar_theta;
    use crate::ribbon::{default_rotation, RotationSystem};
    use crate::multigraph::Dart;

    fn census_of(ribbon: Arc<RibbonGraph>) -> Census {
        let basis = fundamental_basis(ribbon.graph());
        enumerate_patches(ribbon, basis, &CensusConfig::default()).unwrap()
    }

    /// Boundary counts by brute force through the public patch API, one
    /// patch at a time, as an oracle for the parallel census.
    fn oracle_counts(ribbon: &Arc<RibbonGraph>) -> (usize, usize, usize) {
        let g = ribbon.graph();
        let basis = fundamental_basis(g);
        let free = ribbon.free_edges();
        let (mut s, mut o) = (0, 0);
        let mut total = 0;
        for mask in 0..1u64 << free.len() {
            let mut t = TwistVector::zero(g.m());
            for (i, &e) in free.iter().enumerate() {
                t.set(e, mask >> i & 1 == 1);
            }
            let p = Patch::new(ribbon.clone(), t);
            total += 1;
            if p.is_strip() {
                s += 1;
                if p.is_orientable(&basis) {
                    o += 1;
                }
            }
        }
        (total, s, o)
    }

    #[test]
    fn theta_census() {
        let c = census_of(planar_theta());
        assert_eq!(c.patch_count(), 8);
        assert_eq!((c.s(), c.o(), c.n()), (4, 1, 3));
        assert_eq!(c.p, 4);
        assert_eq!(c.bound_t4(), 4);
        assert_eq!(strips_up_to_iso(&c, DEFAULT_ISO_CAP), Some(2));
        let orientable: Vec<_> = c.strips().filter(|r| r.orientable).collect();
        assert_eq!(orientable[0].twists, c.px());
        // the default (non-planar) rotation has the same counts
        let d = census_of(RibbonGraph::with_default_rotation(theta()));
        assert_eq!((d.patch_count(), d.s(), d.o(), d.n()), (8, 4, 1, 3));
        assert_eq!(strips_up_to_iso(&d, DEFAULT_ISO_CAP), Some(2));
    }

    #[test]
    fn small_censuses() {
        let l = census_of(RibbonGraph::with_default_rotation(single_loop()));
        assert_eq!((l.patch_count(), l.s(), l.o(), l.n()), (2, 1, 0, 1));
        assert_eq!(strips_up_to_iso(&l, DEFAULT_ISO_CAP), Some(1));
        let d = census_of(RibbonGraph::with_default_rotation(dumbbell()));
        assert_eq!((d.patch_count(), d.s(), d.o(), d.n()), (4, 1, 0, 1));
        assert_eq!(strips_up_to_iso(&d, DEFAULT_ISO_CAP), Some(1));
        let strip = d.strips().next().unwrap();
        assert_eq!(strip.twists.switched_ids(d.graph()), vec!["a", "b"]);
        let t = census_of(RibbonGraph::with_default_rotation(tree()));
        assert_eq!((t.patch_count(), t.s(), t.o()), (1, 1, 1));
        assert!(t.warnings.iter().any(|w| w.contains("not cyclic")));
    }

    #[test]
    fn census_matches_oracle() {
        for g in [theta(), dumbbell(), k4(), figure_eight()] {
            let r = RibbonGraph::with_default_rotation(g);
            let c = census_of(r.clone());
            assert_eq!((c.patch_count(), c.s(), c.o()), oracle_counts(&r));
        }
    }

    #[test]
    fn cap_refuses_large_instances() {
        let cfg = CensusConfig {
            max_mbc: 2,
            ..CensusConfig::default()
        };
        let r = planar_theta();
        let basis = fundamental_basis(r.graph());
        assert!(matches!(
            enumerate_patches(r, basis, &cfg),
            Err(Error::InstanceTooLarge { m_bc: 3, cap: 2 })
        ));
    }

    #[test]
    fn theta_bounds_and_lemmas() {
        let c = census_of(planar_theta());
        let t4 = verify_theorem_bound(&c);
        assert_eq!(t4.status, Status::Pass);
        assert_eq!(t4.witness["slack"], "0");
        assert_eq!(verify_switch_lemma(&c).status, Status::Pass);
        assert!(phi_relation(&c).is_empty());
        let phi = verify_phi_properties(&c);
        assert!(phi.iter().all(|r| matches!(r.status, Status::Pass | Status::NotApplicable)));
        let count = phi.iter().find(|r| r.name == "orientable_vs_nonorientable").unwrap();
        assert_eq!(count.witness["bound"], "4");
        assert_eq!(verify_odd_q(&c).status, Status::NotApplicable);
    }

    #[test]
    fn dumbbell_and_tree_bounds() {
        let c = census_of(RibbonGraph::with_default_rotation(dumbbell()));
        let t4 = verify_theorem_bound(&c);
        assert_eq!((t4.status, t4.witness["slack"].as_str()), (Status::Pass, Some("0")));
        assert!(phi_relation(&c).is_empty());
        let t = census_of(RibbonGraph::with_default_rotation(tree()));
        let t4 = verify_theorem_bound(&t);
        assert_eq!(t4.witness["bound"], "1");
        assert_eq!(t4.witness["slack"], "0");
    }

    #[test]
    fn theta_edge_characters() {
        let r = planar_theta();
        let px = Patch::new(r.clone(), TwistVector::from_ids(r.graph(), &["a", "b", "c"]).unwrap());
        for e in ["a", "b", "c"] {
            assert_eq!(edge_character(&px, e).unwrap().0, EdgeCharacter::Longitudinal);
        }
        let n = Patch::new(r.clone(), TwistVector::from_ids(r.graph(), &["a", "b"]).unwrap());
        assert_eq!(edge_character(&n, "a").unwrap(), (EdgeCharacter::Transversal, 2));
        assert_eq!(edge_character(&n, "b").unwrap().0, EdgeCharacter::Transversal);
        assert!(matches!(edge_character(&n, "c"), Err(Error::NotSwitched(_))));
        let l = RibbonGraph::with_default_rotation(single_loop());
        let mobius = Patch::new(l.clone(), TwistVector::from_ids(l.graph(), &["e"]).unwrap());
        assert_eq!(edge_character(&mobius, "e").unwrap(), (EdgeCharacter::Transversal, 2));
        let d = RibbonGraph::with_default_rotation(dumbbell());
        let s = Patch::new(d.clone(), TwistVector::from_ids(d.graph(), &["a", "b"]).unwrap());
        assert!(matches!(edge_character(&s, "f"), Err(Error::Bridge(_))));
    }

    #[test]
    fn odd_q_on_loop() {
        let c = census_of(RibbonGraph::with_default_rotation(single_loop()));
        assert_eq!(verify_odd_q(&c).status, Status::Pass);
    }

    #[test]
    fn find_strips() {
        let s = find_strip(&planar_theta()).unwrap();
        assert_eq!(s.twists().switched_ids(s.graph()), vec!["a", "b"]);
        let l = find_strip(&RibbonGraph::with_default_rotation(single_loop())).unwrap();
        assert_eq!(l.twists().count(), 1);
        let t = find_strip(&RibbonGraph::with_default_rotation(tree())).unwrap();
        assert_eq!(t.twists().count(), 0);
    }

    #[test]
    fn theta_conjectures_clear() {
        let c = census_of(planar_theta());
        let v = run_checks(&c, &[]).unwrap();
        assert!(v.flags.is_empty());
        assert!(!v.failed());
        assert_eq!(v.findings(), 0);
        let d = census_of(RibbonGraph::with_default_rotation(dumbbell()));
        assert!(run_checks(&d, &[]).unwrap().flags.is_empty());
        assert!(matches!(run_checks(&c, &["bogus".into()]), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn common_cycles() {
        let g = k4();
        // a = 01 and f = 23 lie on the 4-cycle 0-1-3-2
        assert!(on_common_simple_cycle(&g, 0, 5));
        let d = dumbbell();
        assert!(!on_common_simple_cycle(&d, 0, 1));
        assert!(!on_common_simple_cycle(&d, 0, 2));
    }

    #[test]
    fn tuple_patches_on_theta() {
        let r = planar_theta();
        let g = r.graph();
        let basis = crate::cycle_space::CycleBasis::from_ids(
            g,
            &[vec!["a".into(), "b".into()], vec!["b".into(), "c".into()]],
        )
        .unwrap();
        let h = build_h(g, &basis);
        let paths = simple_paths(&h);
        let tuples = crate::intersection::disjoint_tuples(&paths);
        let mut bs = Vec::new();
        for t in &tuples {
            let tp = build_patch_from_tuple(&r, &basis, &h, &paths, t).unwrap();
            assert!(tp.ok(), "tuple {:?}", t);
            bs.push(tp.b.unwrap());
        }
        bs.sort();
        assert_eq!(bs, vec![2, 2, 2, 3]);
    }

    #[test]
    fn vertex_type_tuple_is_rejected() {
        let g = figure_eight();
        let r = RibbonGraph::with_default_rotation(g.clone());
        let basis = fundamental_basis(&g);
        let h = build_h(&g, &basis);
        let paths = simple_paths(&h);
        let idx = paths.iter().position(|p| !p.is_constant()).unwrap();
        let err = build_patch_from_tuple(&r, &basis, &h, &paths, &PathTuple { paths: vec![idx] });
        assert!(matches!(err, Err(Error::VertexTypeEdge(_))));
    }

    #[test]
    fn iso_count_skips_incompatible_automorphisms() {
        // interleaved figure-eight: every automorphism maps the rotation to
        // itself or its reverse
        let g = figure_eight();
        let rot = RotationSystem::from_lists(
            &g,
            vec![vec![Dart::new(0, 0), Dart::new(1, 0), Dart::new(0, 1), Dart::new(1, 1)]],
        )
        .unwrap();
        let c = census_of(RibbonGraph::new(g.clone(), rot));
        assert!(strips_up_to_iso(&c, DEFAULT_ISO_CAP).unwrap() <= c.s());
        let nested = census_of(RibbonGraph::new(g.clone(), default_rotation(&g)));
        assert_eq!(nested.s(), 1);
    }
}
