//! Small cyclic multigraphs up to isomorphism, and the sweep that runs the
//! census checks over them.
//!
//! Graphs are generated from non-increasing degree sequences (all degrees
//! at least three, so every graph is its own cyclic part) by filling the
//! upper triangle of the multiplicity matrix row by row; loops count twice
//! towards the degree. Isomorphic copies are removed by a canonical form:
//! the lexicographically smallest matrix over vertex orders that keep the
//! degree sequence sorted.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::census::{
    choose_basis, enumerate_patches, run_checks, strips_up_to_iso, BasisChoice, CensusConfig, Status,
};
use crate::error::{Error, Result};
use crate::multigraph::{cubic_resolution, MultiGraph};
use crate::ribbon::{default_rotation, min_genus_rotation, RibbonGraph};

/// Largest edge count the generator accepts.
pub const MAX_CATALOG_EDGES: usize = 10;
/// Rotation systems tried per graph when looking for a minimum-genus one.
pub const DEFAULT_ROTATION_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogSpec {
    pub max_edges: usize,
    pub cubic_only: bool,
    pub bridgeless_only: bool,
    pub allow_loops: bool,
    /// Also emit the single loop, the cyclic part of every cycle graph.
    pub include_degree_two_cyclic: bool,
}

impl Default for CatalogSpec {
    fn default() -> Self {
        CatalogSpec {
            max_edges: 6,
            cubic_only: false,
            bridgeless_only: false,
            allow_loops: true,
            include_degree_two_cyclic: false,
        }
    }
}

impl CatalogSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_edges == 0 {
            return Err(Error::CatalogSpec("max_edges must be at least 1".into()));
        }
        if self.max_edges > MAX_CATALOG_EDGES {
            return Err(Error::CatalogSpec(format!(
                "max_edges {} exceeds the cap of {MAX_CATALOG_EDGES}",
                self.max_edges
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_edges": self.max_edges,
            "cubic_only": self.cubic_only,
            "bridgeless_only": self.bridgeless_only,
            "allow_loops": self.allow_loops,
            "include_degree_two_cyclic": self.include_degree_two_cyclic,
        })
    }
}

type Matrix = Vec<Vec<usize>>;

/// Non-increasing sequences of `n` values, each at least 3, summing to `total`.
fn degree_sequences(n: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = n - cur.len();
        if left < 3 * slots {
            return;
        }
        let hi = cap.min(left - 3 * (slots - 1));
        for d in (3..=hi).rev() {
            cur.push(d);
            rec(n, left - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, total, &mut Vec::new(), &mut out);
    out
}

/// Symmetric multiplicity matrices realizing `degrees` (diagonal = loops).
fn fill_matrices(degrees: &[usize], allow_loops: bool) -> Vec<Matrix> {
    fn rec(
        i: usize,
        j: usize,
        rem: &mut Vec<usize>,
        mat: &mut Matrix,
        allow_loops: bool,
        out: &mut Vec<Matrix>,
    ) {
        let n = rem.len();
        if i == n {
            out.push(mat.clone());
            return;
        }
        if j == n {
            if rem[i] == 0 {
                rec(i + 1, i + 2, rem, mat, allow_loops, out);
            }
            return;
        }
        if j == i + 1 && allow_loops {
            // loops at i first, then the off-diagonal cells of row i
            let loops_max = rem[i] / 2;
            for l in (0..=loops_max).rev() {
                rem[i] -= 2 * l;
                mat[i][i] = l;
                fill_row(i, j, rem, mat, allow_loops, out);
                mat[i][i] = 0;
                rem[i] += 2 * l;
            }
            return;
        }
        fill_row(i, j, rem, mat, allow_loops, out);
    }

    fn fill_row(
        i: usize,
        j: usize,
        rem: &mut Vec<usize>,
        mat: &mut Matrix,
        allow_loops: bool,
        out: &mut Vec<Matrix>,
    ) {
        let n = rem.len();
        if j == n {
            if rem[i] == 0 {
                rec(i + 1, i + 2, rem, mat, allow_loops, out);
            }
            return;
        }
        if j == n - 1 {
            // the last cell must take what is left of row i
            let k = rem[i];
            if k <= rem[j] {
                set(i, j, k, rem, mat);
                if i + 1 == n - 1 && allow_loops {
                    finish_last(rem, mat, out);
                } else {
                    rec(i + 1, i + 2, rem, mat, allow_loops, out);
                }
                set(i, j, 0, rem, mat);
                rem[i] += k;
                rem[j] += k;
            }
            return;
        }
        let hi = rem[i].min(rem[j]);
        for k in (0..=hi).rev() {
            set(i, j, k, rem, mat);
            fill_row(i, j + 1, rem, mat, allow_loops, out);
            set(i, j, 0, rem, mat);
            rem[i] += k;
            rem[j] += k;
        }
    }

    fn set(i: usize, j: usize, k: usize, rem: &mut [usize], mat: &mut Matrix) {
        rem[i] -= k;
        rem[j] -= k;
        mat[i][j] = k;
        mat[j][i] = k;
    }

    /// The last vertex can only take loops.
    fn finish_last(rem: &mut [usize], mat: &mut Matrix, out: &mut Vec<Matrix>) {
        let last = rem.len() - 1;
        if rem[last] % 2 == 0 {
            mat[last][last] = rem[last] / 2;
            out.push(mat.clone());
            mat[last][last] = 0;
        }
    }

    let n = degrees.len();
    let mut out = Vec::new();
    let mut rem = degrees.to_vec();
    let mut mat = vec![vec![0; n]; n];
    if n == 1 {
        if allow_loops && rem[0] % 2 == 0 {
            mat[0][0] = rem[0] / 2;
            out.push(mat);
        }
        return out;
    }
    rec(0, 1, &mut rem, &mut mat, allow_loops, &mut out);
    out
}

/// Upper triangle (with diagonal) in row-major order.
fn flatten(mat: &Matrix, perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            v.push(mat[perm[i]][perm[j]]);
        }
    }
    v
}

/// Smallest flattened matrix over orderings that permute only within runs
/// of equal degree. Returns the flattened form.
fn canonical_form(mat: &Matrix, degrees: &[usize]) -> Vec<usize> {
    let n = degrees.len();
    let mut best: Option<Vec<usize>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn rec(
        mat: &Matrix,
        degrees: &[usize],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<Vec<usize>>,
    ) {
        let n = degrees.len();
        if perm.len() == n {
            let f = flatten(mat, perm);
            if best.as_ref().is_none_or(|b| f < *b) {
                *best = Some(f);
            }
            return;
        }
        let slot = perm.len();
        for v in 0..n {
            if used[v] || degrees[v] != degrees[slot] {
                continue;
            }
            used[v] = true;
            perm.push(v);
            rec(mat, degrees, perm, used, best);
            perm.pop();
            used[v] = false;
        }
    }

    rec(mat, degrees, &mut perm, &mut used, &mut best);
    best.expect("identity ordering is admissible")
}

fn unflatten(n: usize, flat: &[usize]) -> Matrix {
    let mut mat = vec![vec![0; n]; n];
    let mut it = flat.iter();
    for i in 0..n {
        for j in i..n {
            let k = *it.next().expect("flat matrix has n(n+1)/2 entries");
            mat[i][j] = k;
            mat[j][i] = k;
        }
    }
    mat
}

/// Graph with vertices `v0..` and edges `e0..` listed cell by cell.
fn graph_from_matrix(name: &str, mat: &Matrix, allow_degree_two: bool) -> Result<MultiGraph> {
    let n = mat.len();
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            for _ in 0..mat[i][j] {
                edges.push((format!("e{}", edges.len()), vertices[i].clone(), vertices[j].clone()));
            }
        }
    }
    MultiGraph::new(name, &vertices, &edges, allow_degree_two)
}

/// The single loop on one vertex.
pub fn single_loop() -> MultiGraph {
    graph_from_matrix("loop", &vec![vec![1]], true).expect("valid")
}

/// All graphs of the spec, by increasing `m`, then `n`, then canonical
/// matrix. Names are `m{m}n{n}-{k}` with `k` counting within `(m, n)`.
pub fn generate(spec: &CatalogSpec) -> Result<Vec<MultiGraph>> {
    spec.validate()?;
    let mut out = Vec::new();
    if spec.include_degree_two_cyclic && spec.allow_loops {
        out.push(single_loop());
    }
    for m in 1..=spec.max_edges {
        for n in 1..=(2 * m / 3) {
            if spec.cubic_only && 3 * n != 2 * m {
                continue;
            }
            let mut forms: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
            for degrees in degree_sequences(n, 2 * m) {
                for mat in fill_matrices(&degrees, spec.allow_loops) {
                    forms.insert((degrees.clone(), canonical_form(&mat, &degrees)));
                }
            }
            let mut k = 0;
            for (_, flat) in forms {
                let mat = unflatten(n, &flat);
                let g = match graph_from_matrix(&format!("m{m}n{n}-{k}"), &mat, false) {
                    Ok(g) => g,
                    Err(Error::Disconnected) => continue,
                    Err(e) => return Err(e),
                };
                if spec.bridgeless_only && g.bridge_count() > 0 {
                    continue;
                }
                out.push(g);
                k += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub checks: Vec<String>,
    pub basis: BasisChoice,
    pub resolve_cubic: bool,
    pub rotation_cap: u128,
    pub census: CensusConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            checks: Vec::new(),
            basis: BasisChoice::Bfs,
            resolve_cubic: false,
            rotation_cap: DEFAULT_ROTATION_CAP,
            census: CensusConfig::default(),
        }
    }
}

/// Per-graph sweep outcome.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub name: String,
    pub value: Value,
    pub statuses: Vec<(String, Status)>,
    pub flags: usize,
    pub skipped: bool,
}

/// Census plus checks for one graph, under its minimum-genus rotation.
pub fn sweep_graph(g: &MultiGraph, cfg: &SweepConfig) -> Result<SweepRow> {
    let mut warnings = Vec::new();
    let rot = min_genus_rotation(g, cfg.rotation_cap).unwrap_or_else(|| {
        warnings.push("rotation search capped; using the default rotation".to_string());
        default_rotation(g)
    });
    let (graph, rot) = if cfg.resolve_cubic && g.max_degree() > 3 {
        let (rg, rr) = cubic_resolution(g, &rot);
        (rg.with_name(g.name()), rr)
    } else {
        (g.clone(), rot)
    };
    let (basis, warning) = choose_basis(&graph, cfg.basis);
    warnings.extend(warning);
    let ribbon = RibbonGraph::new(graph.clone(), rot);
    let census = match enumerate_patches(ribbon, basis, &cfg.census) {
        Ok(c) => c,
        Err(Error::InstanceTooLarge { m_bc, cap }) => {
            return Ok(SweepRow {
                name: g.name().to_string(),
                value: json!({
                    "graph": g.name(),
                    "n": graph.n(),
                    "m": graph.m(),
                    "skipped": format!("m_bc = {m_bc} exceeds cap {cap}"),
                }),
                statuses: Vec::new(),
                flags: 0,
                skipped: true,
            })
        }
        Err(e) => return Err(e),
    };
    warnings.extend(census.warnings.iter().cloned());
    let v = run_checks(&census, &cfg.checks)?;
    let checks: Vec<Value> = v
        .checks
        .iter()
        .map(|c| {
            if c.status == Status::Pass || c.status == Status::NotApplicable {
                json!({"name": c.name, "status": c.status})
            } else {
                serde_json::to_value(c).expect("check records serialize")
            }
        })
        .collect();
    let value = json!({
        "graph": graph.name(),
        "n": graph.n(),
        "m": graph.m(),
        "q": census.q(),
        "m_bc": census.m_bc,
        "p": census.p.to_string(),
        "c": census.c(),
        "bound_T4": census.bound_t4().to_string(),
        "rotation": census.ribbon.rotation().to_spec(&graph),
        "basis": census.basis.to_ids(&graph),
        "patches": census.patch_count(),
        "S": census.s(),
        "O": census.o(),
        "N": census.n(),
        "S_up_to_iso": strips_up_to_iso(&census, cfg.census.iso_cap),
        "checks": checks,
        "conjecture_flags": v.flags,
        "warnings": warnings,
    });
    Ok(SweepRow {
        name: graph.name().to_string(),
        value,
        statuses: v.checks.iter().map(|c| (c.name.clone(), c.status)).collect(),
        flags: v.flags.len(),
        skipped: false,
    })
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub spec: CatalogSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn count(&self, status: Status) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.statuses)
            .filter(|(_, s)| *s == status)
            .count()
    }

    pub fn failures(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn findings(&self) -> usize {
        self.count(Status::Finding)
    }

    pub fn conjecture_flags(&self) -> usize {
        self.rows.iter().map(|r| r.flags).sum()
    }

    pub fn to_json(&self, cfg: &SweepConfig) -> Value {
        let mut per_check: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for (name, status) in self.rows.iter().flat_map(|r| &r.statuses) {
            let key = serde_json::to_value(status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            *per_check.entry(name.clone()).or_default().entry(key).or_default() += 1;
        }
        let offenders: Vec<&str> = self
            .rows
            .iter()
            .filter(|r| {
                r.flags > 0
                    || r
                        .statuses
                        .iter()
                        .any(|(_, s)| matches!(s, Status::Fail | Status::Finding))
            })
            .map(|r| r.name.as_str())
            .collect();
        json!({
            "spec": self.spec.to_json(),
            "basis": cfg.basis,
            "resolve_cubic": cfg.resolve_cubic,
            "graphs": self.rows.len(),
            "skipped": self.rows.iter().filter(|r| r.skipped).count(),
            "failures": self.failures(),
            "findings": self.findings(),
            "conjecture_flags": self.conjecture_flags(),
            "per_check": per_check,
            "graphs_with_failures_or_findings": offenders,
            "rows": self.rows.iter().map(|r| &r.value).collect::<Vec<_>>(),
        })
    }
}

/// Runs [`sweep_graph`] over the catalog. Rows come back in catalog order
/// whatever the thread count.
pub fn sweep(spec: &CatalogSpec, cfg: &SweepConfig) -> Result<SweepReport> {
    let graphs = generate(spec)?;
    let rows = if cfg.census.parallel {
        graphs
            .par_iter()
            .map(|g| sweep_graph(g, cfg))
            .collect::<Result<Vec<_>>>()?
    } else {
        graphs.iter().map(|g| sweep_graph(g, cfg)).collect::<Result<Vec<_>>>()?
    };
    Ok(SweepReport {
        spec: spec.clone(),
        rows,
    })
}

/// One graph document per line.
pub fn to_jsonl(graphs: &[MultiGraph]) -> String {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&serde_json::to_string(&g.to_document(None)).expect("documents serialize"));
        out.push('\n');
    }
    out
}
