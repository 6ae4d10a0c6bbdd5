//! Edge space and cycle space of a multigraph over GF(2).

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::MultiGraph;
use crate::ribbon::TwistVector;

/// Subset of the edges of a graph, one bit per edge in declaration order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    len: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn empty(len: usize) -> Self {
        EdgeSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Low `len` bits of `mask`; `len` must be at most 64.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut s = Self::empty(len);
        if len > 0 {
            s.words[0] = if len == 64 { mask } else { mask & ((1 << len) - 1) };
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "edge index {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// Symmetric difference; fails on a length mismatch.
    pub fn sym_diff(&self, other: &EdgeSet) -> Result<EdgeSet> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        Ok(EdgeSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn xor_assign(&mut self, other: &EdgeSet) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of `|self ∩ other|`.
    pub fn dot(&self, other: &EdgeSet) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        assert_eq!(self.len, other.len);
        EdgeSet {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn ids(&self, g: &MultiGraph) -> Vec<String> {
        self.iter().map(|e| g.edge_id(e).to_string()).collect()
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Parity of the number of switched edges on `cycle`.
pub fn cycle_twist_parity(cycle: &EdgeSet, twists: &TwistVector) -> bool {
    cycle.dot(twists.as_set())
}

/// Every vertex meets the set an even number of times (loops count twice),
/// i.e. the set lies in the cycle space.
pub fn is_even_subgraph(g: &MultiGraph, set: &EdgeSet) -> bool {
    let mut deg = vec![0usize; g.n()];
    for e in set.iter() {
        let [a, b] = g.edge(e).ends;
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.iter().all(|d| d % 2 == 0)
}

/// Rank over GF(2).
pub fn gf2_rank(sets: &[EdgeSet]) -> usize {
    let mut rows: Vec<EdgeSet> = sets.to_vec();
    let len = sets.first().map_or(0, EdgeSet::len);
    let mut r = 0;
    for col in 0..len {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].contains(col)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.contains(col) {
                row.xor_assign(&pivot);
            }
        }
        r += 1;
    }
    r
}

/// Connected, and every vertex it touches has degree two in it (a single
/// loop qualifies).
pub fn is_simple_cycle(g: &MultiGraph, set: &EdgeSet) -> bool {
    let edges: Vec<usize> = set.iter().collect();
    if edges.is_empty() {
        return false;
    }
    let mut deg = vec![0usize; g.n()];
    for &e in &edges {
        let [a, b] = g.edge(e).ends;
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    // connectivity over the touched vertices
    let start = g.edge(edges[0]).ends[0];
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &e in &edges {
            let [a, b] = g.edge(e).ends;
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    (0..g.n()).all(|v| deg[v] == 0 || seen[v])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Bfs,
    MinC,
    Given,
}

/// Fundamental cycles of a spanning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub kind: BasisKind,
    pub tree: EdgeSet,
    pub cycles: Vec<EdgeSet>,
    /// Non-tree edge generating each cycle, aligned with `cycles`.
    pub chords: Vec<usize>,
}

impl CycleBasis {
    /// Dimension of the cycle space.
    pub fn q(&self) -> usize {
        self.cycles.len()
    }

    /// Length of the longest basis cycle (0 for an empty basis).
    pub fn c(&self) -> usize {
        self.cycles.iter().map(EdgeSet::count).max().unwrap_or(0)
    }

    pub fn to_ids(&self, g: &MultiGraph) -> Vec<Vec<String>> {
        self.cycles.iter().map(|c| c.ids(g)).collect()
    }

    /// Caller-supplied cycles: each must be a simple cycle, they must be
    /// independent, and there must be `m - n + 1` of them.
    pub fn from_cycles(g: &MultiGraph, cycles: Vec<EdgeSet>) -> Result<Self> {
        if cycles.len() != g.q() {
            return Err(Error::Basis(format!(
                "{} cycles given, cycle space has dimension {}",
                cycles.len(),
                g.q()
            )));
        }
        for (i, c) in cycles.iter().enumerate() {
            if c.len() != g.m() {
                return Err(Error::LengthMismatch(c.len(), g.m()));
            }
            if !is_simple_cycle(g, c) {
                return Err(Error::Basis(format!("cycle {} is not a simple cycle", i + 1)));
            }
        }
        if gf2_rank(&cycles) != cycles.len() {
            return Err(Error::Basis("cycles are linearly dependent".into()));
        }
        Ok(CycleBasis {
            kind: BasisKind::Given,
            tree: EdgeSet::empty(g.m()),
            cycles,
            chords: Vec::new(),
        })
    }

    pub fn from_ids(g: &MultiGraph, cycles: &[Vec<String>]) -> Result<Self> {
        let sets = cycles
            .iter()
            .map(|c| {
                let mut s = EdgeSet::empty(g.m());
                for id in c {
                    s.insert(g.edge_index(id)?);
                }
                Ok(s)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_cycles(g, sets)
    }

    fn from_tree(g: &MultiGraph, tree: EdgeSet, kind: BasisKind) -> Self {
        // parent pointers by BFS over tree edges from vertex 0
        let n = g.n();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for e in tree.iter() {
                let [a, b] = g.edge(e).ends;
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut cycles = Vec::new();
        let mut chords = Vec::new();
        for e in 0..g.m() {
            if tree.contains(e) {
                continue;
            }
            let mut cyc = EdgeSet::empty(g.m());
            cyc.insert(e);
            let [mut x, mut y] = g.edge(e).ends;
            while x != y {
                if depth[x] >= depth[y] {
                    let (p, pe) = parent[x].expect("non-root has a parent");
                    cyc.toggle(pe);
                    x = p;
                } else {
                    let (p, pe) = parent[y].expect("non-root has a parent");
                    cyc.toggle(pe);
                    y = p;
                }
            }
            cycles.push(cyc);
            chords.push(e);
        }
        CycleBasis {
            kind,
            tree,
            cycles,
            chords,
        }
    }
}

/// Breadth-first spanning tree rooted at the first vertex, scanning edges in
/// declaration order; one fundamental cycle per non-tree edge.
pub fn fundamental_basis(g: &MultiGraph) -> CycleBasis {
    let mut tree = EdgeSet::empty(g.m());
    let mut seen = vec![false; g.n()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for (i, e) in g.edges().iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            let w = if e.ends[0] == v {
                e.ends[1]
            } else if e.ends[1] == v {
                e.ends[0]
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                tree.insert(i);
                queue.push_back(w);
            }
        }
    }
    CycleBasis::from_tree(g, tree, BasisKind::Bfs)
}

/// Largest edge count for which [`min_c_basis`] searches all spanning trees.
pub const MIN_C_MAX_EDGES: usize = 10;

/// Among the fundamental bases of all spanning trees, the first (in subset
/// order) whose longest cycle is shortest. `None` above
/// [`MIN_C_MAX_EDGES`] edges.
pub fn min_c_basis(g: &MultiGraph) -> Option<CycleBasis> {
    if g.m() > MIN_C_MAX_EDGES {
        return None;
    }
    let candidates: Vec<usize> = (0..g.m()).filter(|&e| !g.edge(e).is_loop()).collect();
    let need = g.n() - 1;
    let mut best: Option<CycleBasis> = None;
    let mut chosen = Vec::with_capacity(need);

    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }

    fn rec(
        g: &MultiGraph,
        candidates: &[usize],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<CycleBasis>,
    ) {
        if chosen.len() == need {
            let mut parent: Vec<usize> = (0..g.n()).collect();
            for &e in chosen.iter() {
                let [a, b] = g.edge(e).ends;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    return;
                }
                parent[ra] = rb;
            }
            let tree = EdgeSet::from_indices(g.m(), chosen.iter().copied());
            let basis = CycleBasis::from_tree(g, tree, BasisKind::MinC);
            if best.as_ref().is_none_or(|b| basis.c() < b.c()) {
                *best = Some(basis);
            }
            return;
        }
        for i in start..candidates.len() {
            if candidates.len() - i < need - chosen.len() {
                break;
            }
            chosen.push(candidates[i]);
            rec(g, candidates, i + 1, need, chosen, best);
            chosen.pop();
        }
    }

    rec(g, &candidates, 0, need, &mut chosen, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::fixtures::*;

    #[test]
    fn theta_basis() {
        let g = theta();
        let b = fundamental_basis(&g);
        assert_eq!(b.q(), 2);
        assert_eq!(b.c(), 2);
        assert_eq!(b.to_ids(&g), vec![vec!["a", "b"], vec!["a", "c"]]);
        assert!(b.cycles.iter().all(|c| is_simple_cycle(&g, c)));
    }

    #[test]
    fn tree_and_figure_eight_bases() {
        let b = fundamental_basis(&tree());
        assert_eq!(b.q(), 0);
        assert_eq!(b.c(), 0);
        let g = figure_eight();
        let b = fundamental_basis(&g);
        assert_eq!(b.q(), 2);
        assert_eq!(b.c(), 1);
        assert_eq!(b.to_ids(&g), vec![vec!["a"], vec!["b"]]);
    }

    #[test]
    fn basis_invariants_on_k4() {
        let g = k4();
        let b = fundamental_basis(&g);
        assert_eq!(b.q(), g.m() - g.n() + 1);
        assert_eq!(gf2_rank(&b.cycles), b.q());
        for (cyc, &chord) in b.cycles.iter().zip(&b.chords) {
            assert!(is_simple_cycle(&g, cyc));
            assert!(cyc.contains(chord));
            let others = b.cycles.iter().filter(|c| c.contains(chord)).count();
            assert_eq!(others, 1);
        }
        // every combination stays in the cycle space
        for mask in 0u32..(1 << b.q()) {
            let mut s = EdgeSet::empty(g.m());
            for (i, c) in b.cycles.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.xor_assign(c);
                }
            }
            assert!(is_even_subgraph(&g, &s));
        }
    }

    #[test]
    fn min_c_never_worse() {
        for g in [theta(), k4(), dumbbell(), figure_eight()] {
            let bfs = fundamental_basis(&g);
            let min = min_c_basis(&g).unwrap();
            assert!(min.c() <= bfs.c());
            assert_eq!(min.q(), bfs.q());
        }
    }

    #[test]
    fn given_bases() {
        let g = theta();
        let ids = vec![vec!["a".to_string(), "b".to_string()], vec!["b".to_string(), "c".to_string()]];
        let b = CycleBasis::from_ids(&g, &ids).unwrap();
        assert_eq!(b.kind, BasisKind::Given);
        assert_eq!(b.to_ids(&g), ids);
        let dup = vec![ids[0].clone(), ids[0].clone()];
        assert!(matches!(CycleBasis::from_ids(&g, &dup), Err(Error::Basis(_))));
        let short = vec![ids[0].clone()];
        assert!(matches!(CycleBasis::from_ids(&g, &short), Err(Error::Basis(_))));
        let not_cycle = vec![vec!["a".to_string()], ids[1].clone()];
        assert!(matches!(CycleBasis::from_ids(&g, &not_cycle), Err(Error::Basis(_))));
    }

    #[test]
    fn symmetric_difference() {
        let g = theta();
        let ab = EdgeSet::from_indices(3, [0, 1]);
        let bc = EdgeSet::from_indices(3, [1, 2]);
        assert_eq!(ab.sym_diff(&bc).unwrap().ids(&g), vec!["a", "c"]);
        assert!(ab.sym_diff(&ab).unwrap().is_empty());
        assert_eq!(ab.sym_diff(&EdgeSet::empty(3)).unwrap(), ab);
        assert!(matches!(
            ab.sym_diff(&EdgeSet::empty(4)),
            Err(Error::LengthMismatch(3, 4))
        ));
    }

    #[test]
    fn twist_parity() {
        let ab = EdgeSet::from_indices(3, [0, 1]);
        let bc = EdgeSet::from_indices(3, [1, 2]);
        let all = TwistVector::from_set(EdgeSet::from_indices(3, [0, 1, 2]));
        assert!(!cycle_twist_parity(&ab, &all));
        let t = TwistVector::from_set(EdgeSet::from_indices(3, [0, 1]));
        assert!(cycle_twist_parity(&bc, &t));
        assert!(!cycle_twist_parity(&bc, &TwistVector::zero(3)));
    }
}
