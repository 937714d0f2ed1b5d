//! The combinatorial layer: labelled trees, stable translation quivers
//! `ℤT`, admissible quotients, and additive functions.
//!
//! `ℤT` has vertices `(p, t)` for integers `p` and tree vertices `t`; for
//! each tree arrow `s → t` there are arrows `(p, s) → (p, t)` and
//! `(p+1, t) → (p, s)`, and the translation is `τ(p, t) = (p+1, t)`.  A
//! group of automorphisms is admissible when no orbit contains a vertex
//! together with one of its neighbours; quotients by admissible groups are
//! again stable translation quivers and the quotient map is a covering.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A finite directed tree with `(a, b)` arrow labels and a positive integer
/// valuation.  Window boundaries (vertices whose star is cut off) are
/// marked so checks can skip them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledTree {
    names: Vec<String>,
    edges: Vec<TreeEdge>,
    values: Vec<u64>,
    boundary: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub src: usize,
    pub dst: usize,
    pub a: usize,
    pub b: usize,
}

impl LabelledTree {
    pub fn new(
        names: Vec<String>,
        edges: Vec<TreeEdge>,
        values: Vec<u64>,
        boundary: BTreeSet<usize>,
    ) -> Result<Self> {
        let n = names.len();
        if values.len() != n {
            return Err(Error::InvalidArgument("valuation size mismatch".into()));
        }
        for e in &edges {
            if e.src >= n || e.dst >= n || e.src == e.dst {
                return Err(Error::InvalidArgument("bad tree edge".into()));
            }
        }
        if values.iter().any(|&v| v == 0) {
            return Err(Error::InvalidArgument("valuation must be positive".into()));
        }
        // Acyclic and connected: |E| = |V| - 1 and all reachable.
        if n > 0 && edges.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "a tree on {n} vertices has {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut seen = BTreeSet::new();
        if n > 0 {
            let mut stack = vec![0usize];
            seen.insert(0);
            while let Some(v) = stack.pop() {
                for e in &edges {
                    for (x, y) in [(e.src, e.dst), (e.dst, e.src)] {
                        if x == v && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
            }
            if seen.len() != n {
                return Err(Error::InvalidArgument("tree is not connected".into()));
            }
        }
        Ok(LabelledTree {
            names,
            edges,
            values,
            boundary,
        })
    }

    /// A linearly oriented path `t_0 → t_1 → … → t_{n-1}` with all labels
    /// `(1, 1)` and the given valuation; a window of `A_∞` when the last
    /// vertex is marked as boundary.
    pub fn path(values: &[u64], last_is_boundary: bool) -> Result<Self> {
        let n = values.len();
        let names = (0..n).map(|i| format!("t{i}")).collect();
        let edges = (0..n.saturating_sub(1))
            .map(|i| TreeEdge {
                src: i,
                dst: i + 1,
                a: 1,
                b: 1,
            })
            .collect();
        let mut boundary = BTreeSet::new();
        if last_is_boundary && n > 0 {
            boundary.insert(n - 1);
        }
        LabelledTree::new(names, edges, values.to_vec(), boundary)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn value(&self, v: usize) -> u64 {
        self.values[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.contains(&v)
    }
}

/// Result of the additive-function check: vertices that fail the identity,
/// and boundary vertices that were skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveVerdict {
    pub failures: Vec<(String, i64)>,
    pub skipped: Vec<String>,
}

impl AdditiveVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `2f(t) - Σ_{s→t} a·f(s) - Σ_{t→u} b·f(u) = 0` at every interior
/// vertex; boundary vertices are skipped and listed.
pub fn additive_function_check(tree: &LabelledTree) -> AdditiveVerdict {
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    for t in 0..tree.len() {
        if tree.is_boundary(t) {
            skipped.push(tree.name(t).to_string());
            continue;
        }
        let mut lhs = 2 * tree.value(t) as i64;
        for e in tree.edges() {
            if e.dst == t {
                lhs -= (e.a as i64) * tree.value(e.src) as i64;
            }
            if e.src == t {
                lhs -= (e.b as i64) * tree.value(e.dst) as i64;
            }
        }
        if lhs != 0 {
            failures.push((tree.name(t).to_string(), lhs));
        }
    }
    AdditiveVerdict { failures, skipped }
}

/// A vertex of a `ℤT` window.
pub type ZtVertex = (i64, usize);

/// A finite window of `ℤT`, or of a quotient `ℤT/Π`: vertices, labelled
/// arrows, and the translation where defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableTranslationQuiver {
    /// Canonical vertex representatives.
    pub vertices: Vec<ZtVertex>,
    /// Arrows with labels `(a, b)`.
    pub arrows: Vec<(ZtVertex, ZtVertex, usize, usize)>,
    /// τ where both endpoints lie in the window.
    pub tau: BTreeMap<ZtVertex, ZtVertex>,
    /// The underlying tree.
    pub tree: LabelledTree,
    /// Translation range of the window.
    pub p_range: (i64, i64),
    /// Orbit size data for quotients: `None` for `ℤT` itself.
    pub quotient_of: Option<QuotientData>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    pub generator: GroupElement,
    /// Orbit identification on the window: vertex → canonical representative.
    pub classes: BTreeMap<ZtVertex, ZtVertex>,
}

/// An automorphism of `ℤT` commuting with translation: a labelled-tree
/// automorphism combined with a translation power, `(p, t) ↦ (p + shift, π(t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub tree_map: Vec<usize>,
    pub shift: i64,
}

impl GroupElement {
    pub fn identity(tree: &LabelledTree) -> Self {
        GroupElement {
            tree_map: (0..tree.len()).collect(),
            shift: 0,
        }
    }

    pub fn pure_shift(tree: &LabelledTree, shift: i64) -> Self {
        GroupElement {
            tree_map: (0..tree.len()).collect(),
            shift,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.tree_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    fn validate(&self, tree: &LabelledTree) -> Result<()> {
        let n = tree.len();
        if self.tree_map.len() != n {
            return Err(Error::BadTranslationQuiver(
                "tree map has wrong size".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &j in &self.tree_map {
            if j >= n || seen[j] {
                return Err(Error::BadTranslationQuiver(
                    "tree map is not a permutation".into(),
                ));
            }
            seen[j] = true;
        }
        // Must preserve labelled edges.
        for e in tree.edges() {
            let image = (self.tree_map[e.src], self.tree_map[e.dst]);
            let ok = tree
                .edges()
                .iter()
                .any(|f| (f.src, f.dst) == image && (f.a, f.b) == (e.a, e.b));
            if !ok {
                return Err(Error::BadTranslationQuiver(
                    "tree map does not preserve labelled edges".into(),
                ));
            }
        }
        Ok(())
    }

    fn apply(&self, v: ZtVertex) -> ZtVertex {
        (v.0 + self.shift, self.tree_map[v.1])
    }
}

/// Build the window of `ℤT` with `p` in the inclusive range.
pub fn zt_build(tree: &LabelledTree, p_lo: i64, p_hi: i64) -> Result<StableTranslationQuiver> {
    if p_lo > p_hi {
        return Err(Error::InvalidArgument("empty translation range".into()));
    }
    let mut vertices = Vec::new();
    for p in p_lo..=p_hi {
        for t in 0..tree.len() {
            vertices.push((p, t));
        }
    }
    let mut arrows = Vec::new();
    for p in p_lo..=p_hi {
        for e in tree.edges() {
            // (p, s) → (p, t) with the tree label.
            arrows.push(((p, e.src), (p, e.dst), e.a, e.b));
            // (p+1, t) → (p, s) with the swapped label.
            if p + 1 <= p_hi {
                arrows.push(((p + 1, e.dst), (p, e.src), e.b, e.a));
            }
        }
    }
    let mut tau = BTreeMap::new();
    for p in p_lo..p_hi {
        for t in 0..tree.len() {
            tau.insert((p, t), (p + 1, t));
        }
    }
    Ok(StableTranslationQuiver {
        vertices,
        arrows,
        tau,
        tree: tree.clone(),
        p_range: (p_lo, p_hi),
        quotient_of: None,
    })
}

impl StableTranslationQuiver {
    /// Neighbours of a vertex in the window (arrow sources and targets).
    fn neighbours(&self, v: ZtVertex) -> Vec<ZtVertex> {
        let mut out = Vec::new();
        for &(s, t, _, _) in &self.arrows {
            if s == v {
                out.push(t);
            }
            if t == v {
                out.push(s);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Arrows ending at `v`.
    pub fn arrows_into(&self, v: ZtVertex) -> Vec<(ZtVertex, usize, usize)> {
        self.arrows
            .iter()
            .filter(|&&(_, t, _, _)| t == v)
            .map(|&(s, _, a, b)| (s, a, b))
            .collect()
    }

    /// τ-fixed points in the quotient: a vertex identified with a nonzero
    /// translation power of itself, with the smallest such power.
    pub fn tau_fixed_point(&self) -> Option<(ZtVertex, i64)> {
        let Some(q) = &self.quotient_of else {
            return None;
        };
        let width = (self.p_range.1 - self.p_range.0).max(1);
        for v in &self.vertices {
            for k in 1..=width {
                let moved = (v.0 + k, v.1);
                if canonical_rep(&q.generator, moved) == *v {
                    return Some((*v, k));
                }
            }
        }
        None
    }

    /// The covering property on the window: for interior vertices, the
    /// quotient map restricts to a bijection between arrows ending at a
    /// vertex and arrows ending at its class.
    pub fn covering_check(&self, cover: &StableTranslationQuiver) -> Result<()> {
        let Some(q) = &self.quotient_of else {
            return Err(Error::InvalidArgument(
                "covering check needs a quotient".into(),
            ));
        };
        let (lo, hi) = cover.p_range;
        for v in &cover.vertices {
            // Skip window-boundary vertices: their in-stars are cut off.
            if v.0 <= lo || v.0 >= hi || cover.tree.is_boundary(v.1) {
                continue;
            }
            let up = cover.arrows_into(*v);
            let down_v = q.classes.get(v).copied().unwrap_or(*v);
            let down = self.arrows_into(down_v);
            if up.len() != down.len() {
                return Err(Error::BadTranslationQuiver(format!(
                    "covering fails at {v:?}: {} arrows upstairs, {} downstairs",
                    up.len(),
                    down.len()
                )));
            }
            // Distinct upstairs arrows map to distinct downstairs arrows.
            let mut images: Vec<ZtVertex> = up
                .iter()
                .map(|(s, _, _)| q.classes.get(s).copied().unwrap_or(*s))
                .collect();
            images.sort();
            images.dedup();
            if images.len() != up.len() {
                return Err(Error::BadTranslationQuiver(format!(
                    "covering fails at {v:?}: arrows collapse"
                )));
            }
        }
        Ok(())
    }
}

/// Quotient of a `ℤT` window by the cyclic group generated by one
/// translation-commuting automorphism.  Admissibility (no orbit touching a
/// neighbouring pair) is verified on the window.
pub fn zt_quotient(
    zt: &StableTranslationQuiver,
    generator: &GroupElement,
) -> Result<StableTranslationQuiver> {
    generator.validate(&zt.tree)?;
    if zt.quotient_of.is_some() {
        return Err(Error::InvalidArgument("already a quotient".into()));
    }
    if generator.is_identity() {
        let mut out = zt.clone();
        out.quotient_of = Some(QuotientData {
            generator: generator.clone(),
            classes: zt.vertices.iter().map(|&v| (v, v)).collect(),
        });
        return Ok(out);
    }

    let mut classes: BTreeMap<ZtVertex, ZtVertex> = BTreeMap::new();
    for &v in &zt.vertices {
        classes.insert(v, canonical_rep(generator, v));
    }

    // Admissibility: no vertex shares an orbit with one of its neighbours.
    for &v in &zt.vertices {
        for nb in zt.neighbours(v) {
            if classes[&v] == classes[&nb] && v != nb {
                return Err(Error::BadTranslationQuiver(format!(
                    "group is not admissible: {v:?} and its neighbour {nb:?} share an orbit"
                )));
            }
        }
    }

    let mut vertices: Vec<ZtVertex> = classes.values().cloned().collect();
    vertices.sort();
    vertices.dedup();

    let mut arrows = Vec::new();
    let mut seen = BTreeSet::new();
    for &(s, t, a, b) in &zt.arrows {
        let key = (classes[&s], classes[&t]);
        if seen.insert(key) {
            arrows.push((key.0, key.1, a, b));
        }
    }
    let mut tau = BTreeMap::new();
    for (&from, &to) in &zt.tau {
        tau.entry(classes[&from]).or_insert(classes[&to]);
    }

    Ok(StableTranslationQuiver {
        vertices,
        arrows,
        tau,
        tree: zt.tree.clone(),
        p_range: zt.p_range,
        quotient_of: Some(QuotientData {
            generator: generator.clone(),
            classes,
        }),
    })
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Canonical representative of the orbit of `v` under the cyclic group
/// generated by `g = (π, s)`: `g^k(v) = (p + k·s, π^k(t))`.
///
/// For `s ≠ 0` exactly one power lands with translation coordinate in
/// `[0, |s|)`; for `s = 0` the orbit is finite and the smallest tree index
/// over the π-cycle is taken.
fn canonical_rep(g: &GroupElement, v: ZtVertex) -> ZtVertex {
    if g.shift != 0 {
        let s = g.shift;
        // k with 0 ≤ p + k·s < |s|.
        let k = if s > 0 {
            -(v.0.div_euclid(s))
        } else {
            v.0.div_euclid(-s)
        };
        let mut out = v;
        let inv = inverse_perm(&g.tree_map);
        if k >= 0 {
            for _ in 0..k {
                out = g.apply(out);
            }
        } else {
            for _ in 0..(-k) {
                out = (out.0 - g.shift, inv[out.1]);
            }
        }
        debug_assert!(
            (0..s.abs()).contains(&out.0),
            "canonical p-coordinate in range"
        );
        out
    } else {
        let mut best = v;
        let mut cur = v;
        loop {
            cur = g.apply(cur);
            if cur == v {
                break;
            }
            if cur < best {
                best = cur;
            }
        }
        best
    }
}

/// Extract the `A_∞`-window tree of a consistent component fragment: one
/// vertex per row, labels `(1, 1)`, valuation the β of that row, top row
/// marked as window boundary.
pub fn tree_from_fragment(f: &crate::quiver::ARQuiverFragment) -> Result<LabelledTree> {
    let rows = crate::quiver::beta_per_row(f).map_err(Error::Inconsistent)?;
    let values: Vec<u64> = rows.iter().map(|&b| b as u64).collect();
    LabelledTree::path(&values, true)
}
