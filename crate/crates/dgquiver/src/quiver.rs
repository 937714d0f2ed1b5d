//! Walking components of the AR quiver mesh by mesh.
//!
//! A mesh ending at an indecomposable `N` is the triangle
//! `τN → Y → N → ΣτN` built on the almost-vanishing map `w: N → ΣτN`
//! (nonzero, killed by the radical of `End N` under precomposition).  The
//! middle `Y` decomposes into the in-neighbours of `N`; arrow labels are
//! computed as `dim rad/rad²` over a stabilised vertex universe and
//! cross-checked against the summand multiplicities of `Y`, which catches a
//! universe chosen too small.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::decompose::{decompose, indecomposable_iso, Summand};
use crate::derived::{
    ar_translate, ar_translate_inverse, ar_translate_power, check_gorenstein, fixed_point_check,
    GorensteinReport,
};
use crate::dga::DGAlgebra;
use crate::endalg::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::hom::MorphismClasses;
use crate::matrix::Matrix;
use crate::module::{DGModule, Side};
use crate::morphism::{cone, DGMorphism};
use crate::resolution::{beta, resolve_compact};
use crate::scalar::Scalar;

/// A computed mesh `τN → Y → N`.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertex: usize,
    pub tau_vertex: usize,
    /// In-neighbours of `N` with multiplicities, sorted by vertex id.
    pub middle: Vec<(usize, usize)>,
    pub beta_vertex: usize,
    pub beta_tau: usize,
    pub beta_middle: usize,
    /// The sink map `F_Y → F_N` of the triangle.
    pub sink: DGMorphism,
    /// Indecomposable parts of `F_Y`: vertex id plus splitting data.
    pub parts: Vec<(usize, Summand)>,
    /// The minimal model of the middle.
    pub y_model: Arc<DGModule>,
}

/// Explores one component: registry of indecomposable vertices (deduplicated
/// up to derived isomorphism), meshes, and translation links.
pub struct ComponentExplorer {
    algebra: Arc<DGAlgebra>,
    report: GorensteinReport,
    modules: Vec<Arc<DGModule>>,
    betas: Vec<usize>,
    censuses: Vec<BTreeMap<i64, usize>>,
    meshes: BTreeMap<usize, Mesh>,
    tau_of: BTreeMap<usize, usize>,
    tau_inv_of: BTreeMap<usize, usize>,
    hom_cache: BTreeMap<(usize, usize), Arc<MorphismClasses>>,
}

impl ComponentExplorer {
    pub fn new(algebra: &Arc<DGAlgebra>) -> Result<Self> {
        let report = check_gorenstein(algebra)?;
        if !report.holds() {
            return Err(Error::GorensteinRequired(report.to_string()));
        }
        Ok(ComponentExplorer {
            algebra: Arc::clone(algebra),
            report,
            modules: Vec::new(),
            betas: Vec::new(),
            censuses: Vec::new(),
            meshes: BTreeMap::new(),
            tau_of: BTreeMap::new(),
            tau_inv_of: BTreeMap::new(),
            hom_cache: BTreeMap::new(),
        })
    }

    pub fn report(&self) -> &GorensteinReport {
        &self.report
    }

    pub fn module(&self, v: usize) -> &Arc<DGModule> {
        &self.modules[v]
    }

    pub fn beta(&self, v: usize) -> usize {
        self.betas[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.modules.len()
    }

    /// Register an indecomposable module, deduplicating against the registry.
    pub fn register(&mut self, m: &Arc<DGModule>) -> Result<usize> {
        let res = resolve_compact(m)?;
        if res.module().dim() == 0 {
            return Err(Error::InvalidArgument(
                "the zero module does not define a quiver vertex".into(),
            ));
        }
        let census = res.generator_census();
        for (i, c) in self.censuses.iter().enumerate() {
            if *c == census && indecomposable_iso(&self.modules[i], m)?.is_some() {
                return Ok(i);
            }
        }
        let model = Arc::clone(res.module());
        self.modules.push(model);
        self.betas.push(res.beta());
        self.censuses.push(census);
        Ok(self.modules.len() - 1)
    }

    pub fn tau(&mut self, v: usize) -> Result<usize> {
        if let Some(&t) = self.tau_of.get(&v) {
            return Ok(t);
        }
        let t_mod = ar_translate(&Arc::clone(&self.modules[v]))?;
        let t = self.register(&t_mod)?;
        self.tau_of.insert(v, t);
        self.tau_inv_of.insert(t, v);
        Ok(t)
    }

    pub fn tau_inverse(&mut self, v: usize) -> Result<usize> {
        if let Some(&t) = self.tau_inv_of.get(&v) {
            return Ok(t);
        }
        let t_mod = ar_translate_inverse(&Arc::clone(&self.modules[v]), &self.report)?;
        let t = self.register(&t_mod)?;
        self.tau_inv_of.insert(v, t);
        self.tau_of.insert(t, v);
        Ok(t)
    }

    fn classes(&mut self, x: usize, y: usize) -> Result<Arc<MorphismClasses>> {
        if let Some(c) = self.hom_cache.get(&(x, y)) {
            return Ok(Arc::clone(c));
        }
        let c = Arc::new(MorphismClasses::new(&self.modules[x], &self.modules[y], 0)?);
        self.hom_cache.insert((x, y), Arc::clone(&c));
        Ok(c)
    }

    /// The mesh ending at vertex `v`.
    pub fn mesh(&mut self, v: usize) -> Result<Mesh> {
        if let Some(m) = self.meshes.get(&v) {
            return Ok(m.clone());
        }
        let n_model = Arc::clone(&self.modules[v]);
        let tau_v = self.tau(v)?;
        let tau_model = Arc::clone(&self.modules[tau_v]);
        let shifted_tau = Arc::new(tau_model.suspend(1));

        // Almost-vanishing maps: classes w with w ∘ rad(End N) ≃ 0.
        let w_classes = MorphismClasses::new(&n_model, &shifted_tau, 0)?;
        let end = self.classes(v, v)?;
        let end_alg = end_algebra(&end)?;
        let rad = end_alg.radical()?;
        let field = self.algebra.field();
        // Duality dimension check: dim Hom(N, ΣτN) = dim End(N).
        if w_classes.dim() != end.dim() {
            return Err(Error::Inconsistent(format!(
                "Hom(N, ΣτN) has dimension {} but End(N) has dimension {}",
                w_classes.dim(),
                end.dim()
            )));
        }
        let socle = {
            // Solve for λ with (Σ λ_i w_i) ∘ r ≃ 0 for every radical basis r.
            let t = w_classes.dim();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for rc in 0..rad.cols() {
                let r_mor = end.from_coords(&rad.column(rc));
                // Precompose each w-basis class with r and take class coords.
                let target = MorphismClasses::new(&n_model, &shifted_tau, 0)?;
                for pos in 0..target.dim() {
                    let mut row = vec![Scalar::zero(field); t];
                    let mut nonzero = false;
                    for (i, w) in w_classes.reps().iter().enumerate() {
                        let comp = w.compose(&r_mor)?;
                        let coords = target.class_coords(&comp).ok_or_else(|| {
                            Error::Inconsistent("composite left the class space".into())
                        })?;
                        if !coords[pos].is_zero() {
                            row[i] = coords[pos].clone();
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
            if rows.is_empty() {
                Matrix::identity(field, t)
            } else {
                Matrix::from_rows(field, rows).kernel_basis()
            }
        };
        if socle.cols() != 1 {
            return Err(Error::Inconsistent(format!(
                "almost-vanishing space has dimension {}, expected 1",
                socle.cols()
            )));
        }
        let w = w_classes.from_coords(&socle.column(0));
        if w.is_zero() {
            return Err(Error::Inconsistent("almost-vanishing map is zero".into()));
        }

        // Y = Σ⁻¹ cone(w); the sink map is the projection onto the F_N block.
        let cw = cone(&w)?;
        let y_raw = Arc::new(cw.suspend(-1));
        let n_dim = n_model.dim();
        let sink_raw = {
            let mut m = Matrix::zero(field, n_dim, y_raw.dim());
            for i in 0..n_dim {
                m.set(i, i, Scalar::one(field));
            }
            DGMorphism::new(Arc::clone(&y_raw), Arc::clone(&n_model), 0, m)?
        };
        debug_assert!(sink_raw.is_closed());

        let y_res = resolve_compact(&y_raw)?;
        let sink = sink_raw.compose(y_res.quasi_iso())?;
        let parts_raw = decompose(&y_raw)?;
        let mut parts: Vec<(usize, Summand)> = Vec::new();
        for p in parts_raw {
            let id = self.register(&p.module)?;
            parts.push((id, p));
        }
        parts.sort_by_key(|(id, _)| *id);
        let mut middle: BTreeMap<usize, usize> = BTreeMap::new();
        for (id, _) in &parts {
            *middle.entry(*id).or_insert(0) += 1;
        }

        let beta_vertex = self.betas[v];
        let beta_tau = self.betas[tau_v];
        let beta_middle = y_res.beta();
        // Exact mesh additivity.
        if beta_tau + beta_vertex != beta_middle {
            return Err(Error::Inconsistent(format!(
                "mesh additivity fails: β(τN) {beta_tau} + β(N) {beta_vertex} != β(Y) {beta_middle}"
            )));
        }

        let mesh = Mesh {
            vertex: v,
            tau_vertex: tau_v,
            middle: middle.into_iter().collect(),
            beta_vertex,
            beta_tau,
            beta_middle,
            sink,
            parts,
            y_model: Arc::clone(y_res.module()),
        };
        self.meshes.insert(v, mesh.clone());
        Ok(mesh)
    }

    /// In-neighbours (sources of arrows into `v`).
    pub fn in_neighbours(&mut self, v: usize) -> Result<Vec<usize>> {
        Ok(self.mesh(v)?.middle.iter().map(|(m, _)| *m).collect())
    }

    /// Out-neighbours: the middle of the mesh ending at `τ⁻¹v`.
    pub fn out_neighbours(&mut self, v: usize) -> Result<Vec<usize>> {
        let tv = self.tau_inverse(v)?;
        Ok(self.mesh(tv)?.middle.iter().map(|(m, _)| *m).collect())
    }

    /// Vertices within mesh distance `radius` of the given centres
    /// (τ, τ⁻¹ and arrows in both directions all count as one step).
    pub fn ball(&mut self, centres: &[usize], radius: usize) -> Result<Vec<usize>> {
        let mut dist: BTreeMap<usize, usize> = centres.iter().map(|&c| (c, 0)).collect();
        let mut queue: Vec<usize> = centres.to_vec();
        let mut qi = 0;
        while qi < queue.len() {
            let v = queue[qi];
            qi += 1;
            let d = dist[&v];
            if d == radius {
                continue;
            }
            let mut next = vec![self.tau(v)?, self.tau_inverse(v)?];
            next.extend(self.in_neighbours(v)?);
            next.extend(self.out_neighbours(v)?);
            for u in next {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(u) {
                    e.insert(d + 1);
                    queue.push(u);
                }
            }
        }
        Ok(queue)
    }

    /// `dim rad(x, y) / rad²(x, y)` over a finite universe of vertices.
    pub fn irr_dim_over(&mut self, x: usize, y: usize, universe: &[usize]) -> Result<usize> {
        let field = self.algebra.field();
        let rad_xy = self.radical_hom(x, y)?;
        if rad_xy.is_empty() {
            return Ok(0);
        }
        let flat = |m: &DGMorphism| -> Vec<Scalar> {
            let mat = m.matrix();
            let mut out = Vec::with_capacity(mat.rows() * mat.cols());
            for i in 0..mat.rows() {
                for j in 0..mat.cols() {
                    out.push(mat.at(i, j).clone());
                }
            }
            out
        };
        let len = flat(&rad_xy[0]).len();
        let classes_xy = self.classes(x, y)?;
        // rad² = Σ_z rad(z, y) ∘ rad(x, z).
        let mut sq_cols: Vec<Vec<Scalar>> = Vec::new();
        for &z in universe {
            let first = self.radical_hom(x, z)?;
            if first.is_empty() {
                continue;
            }
            let second = self.radical_hom(z, y)?;
            if second.is_empty() {
                continue;
            }
            for g in &second {
                for f in &first {
                    let comp = g.compose(f)?;
                    if !classes_xy.is_nullhomotopic(&comp) {
                        sq_cols.push(flat(&comp));
                    }
                }
            }
        }
        // Modulo null-homotopic maps: include the full boundary span (its
        // flattening convention matches `flat` above).
        let mut span_cols: Vec<Vec<Scalar>> = sq_cols;
        let b = classes_xy.boundary_span();
        for c in 0..b.cols() {
            span_cols.push(b.column(c));
        }
        let base_rank = rank_of_columns(field, len, &span_cols);

        let mut all_cols = span_cols;
        for r in &rad_xy {
            all_cols.push(flat(r));
        }
        let full_rank = rank_of_columns(field, len, &all_cols);
        Ok(full_rank - base_rank)
    }

    /// Irreducible-morphism dimension with universe stabilisation: double
    /// the ball radius until two consecutive answers agree.
    pub fn irr_dim(&mut self, x: usize, y: usize) -> Result<usize> {
        let mut radius = 2usize;
        let mut last: Option<usize> = None;
        loop {
            let universe = self.ball(&[x, y], radius)?;
            let v = self.irr_dim_over(x, y, &universe)?;
            if last == Some(v) {
                return Ok(v);
            }
            last = Some(v);
            radius *= 2;
            if radius > 16 {
                return Err(Error::UniverseUnstable(format!(
                    "irr_dim({x}, {y}) kept changing up to ball radius 16"
                )));
            }
        }
    }

    /// Basis of the radical of `Hom(x, y)`: every class when `x ≇ y`, the
    /// radical of the endomorphism algebra when `x = y`.
    fn radical_hom(&mut self, x: usize, y: usize) -> Result<Vec<DGMorphism>> {
        let classes = self.classes(x, y)?;
        if x != y {
            return Ok(classes.reps().to_vec());
        }
        let alg = end_algebra(&classes)?;
        let rad = alg.radical()?;
        Ok((0..rad.cols())
            .map(|c| classes.from_coords(&rad.column(c)))
            .collect())
    }

    /// The arrow label `(a, b)` for an arrow `x → y`:
    /// `a` = multiplicity of `x` in the mesh middle ending at `y`,
    /// `b` = multiplicity of `y` in the mesh middle ending at `τ⁻¹x`
    /// (the mesh starting at `x`).  `a` is cross-checked against rad/rad².
    pub fn arrow_label(&mut self, x: usize, y: usize) -> Result<(usize, usize)> {
        let mesh_y = self.mesh(y)?;
        let a = mesh_y
            .middle
            .iter()
            .find(|(m, _)| *m == x)
            .map_or(0, |(_, c)| *c);
        let irr = self.irr_dim(x, y)?;
        if irr != a {
            return Err(Error::UniverseUnstable(format!(
                "rad/rad² gives {irr} for arrow {x}→{y}, mesh middle multiplicity is {a}"
            )));
        }
        let tx = self.tau_inverse(x)?;
        let mesh_from_x = self.mesh(tx)?;
        let b = mesh_from_x
            .middle
            .iter()
            .find(|(m, _)| *m == y)
            .map_or(0, |(_, c)| *c);
        Ok((a, b))
    }
}

fn rank_of_columns(field: crate::scalar::FieldKind, len: usize, cols: &[Vec<Scalar>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    Matrix::from_fn(field, len, cols.len(), |i, j| cols[j][i].clone()).rank()
}

/// `H⁰End` as a structure-constant algebra.
fn end_algebra(classes: &MorphismClasses) -> Result<FiniteAlgebra> {
    let n = classes.dim();
    let field = classes.source().field();
    let mut table = vec![vec![vec![Scalar::zero(field); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = classes.reps()[i].compose(&classes.reps()[j])?;
            table[i][j] = classes
                .class_coords(&prod)
                .ok_or_else(|| Error::Inconsistent("composition left the class space".into()))?;
        }
    }
    let id = DGMorphism::identity(classes.source());
    let unit = classes
        .class_coords(&id)
        .ok_or_else(|| Error::Inconsistent("identity has no class coordinates".into()))?;
    FiniteAlgebra::new(field, table, unit)
}

// ---------------------------------------------------------------------
// fragments
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FragmentVertex {
    pub id: String,
    pub beta: usize,
    pub row: i64,
    #[serde(rename = "tauPower")]
    pub tau_power: i64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FragmentArrow {
    pub src: usize,
    pub dst: usize,
    pub a: usize,
    pub b: usize,
}

/// A finite window of a component, as pure data (checkable and
/// serialisable without module models).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ARQuiverFragment {
    pub vertices: Vec<FragmentVertex>,
    pub arrows: Vec<FragmentArrow>,
    /// τ as index pairs `(from, to)`, where defined inside the window.
    pub tau: Vec<(usize, usize)>,
    pub radius: usize,
    /// Vertices whose full mesh star lies inside the window.
    pub interior: Vec<bool>,
}

/// A built fragment together with the explorer vertex ids behind it.
pub struct BuiltComponent {
    pub fragment: ARQuiverFragment,
    pub vertex_ids: Vec<usize>,
    pub explorer: ComponentExplorer,
}

/// Breadth-first mesh expansion from a seed, up to the given radius.
pub fn build_component(
    algebra: &Arc<DGAlgebra>,
    seed: &Arc<DGModule>,
    radius: usize,
) -> Result<BuiltComponent> {
    let mut ex = ComponentExplorer::new(algebra)?;
    if !crate::decompose::is_indecomposable(seed)? {
        return Err(Error::InvalidArgument(
            "component seed must be indecomposable".into(),
        ));
    }
    let s = ex.register(seed)?;
    let ids = ex.ball(&[s], radius)?;

    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &v) in ids.iter().enumerate() {
        index.insert(v, i);
    }
    // Interior: all mesh neighbours within the window.
    let mut interior = vec![false; ids.len()];
    for (i, &v) in ids.iter().enumerate() {
        let mut nb = vec![ex.tau(v)?, ex.tau_inverse(v)?];
        nb.extend(ex.in_neighbours(v)?);
        nb.extend(ex.out_neighbours(v)?);
        interior[i] = nb.iter().all(|u| index.contains_key(u));
    }

    let mut arrows = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &v in &ids {
        for m in ex.in_neighbours(v)? {
            if index.contains_key(&m) && seen.insert((m, v)) {
                let (a, b) = ex.arrow_label(m, v)?;
                arrows.push(FragmentArrow {
                    src: index[&m],
                    dst: index[&v],
                    a,
                    b,
                });
            }
        }
        // Out-arrows keep boundary vertices connected even when the mesh
        // ending at the target is centred outside the window.
        for u in ex.out_neighbours(v)? {
            if index.contains_key(&u) && seen.insert((v, u)) {
                let (a, b) = ex.arrow_label(v, u)?;
                arrows.push(FragmentArrow {
                    src: index[&v],
                    dst: index[&u],
                    a,
                    b,
                });
            }
        }
    }
    arrows.sort_by_key(|a| (a.src, a.dst));

    let mut tau = Vec::new();
    for &v in &ids {
        let t = ex.tau(v)?;
        if index.contains_key(&t) {
            tau.push((index[&v], index[&t]));
        }
    }

    let mut vertices: Vec<FragmentVertex> = ids
        .iter()
        .enumerate()
        .map(|(i, &v)| FragmentVertex {
            id: format!("v{i}"),
            beta: ex.beta(v),
            row: -1,
            tau_power: 0,
        })
        .collect();

    let mut fragment = ARQuiverFragment {
        vertices: vertices.clone(),
        arrows,
        tau,
        radius,
        interior,
    };

    // Shape analysis fills rows, τ-powers and canonical ids when the window
    // is consistent with ℤA∞.
    if let ShapeVerdict::Consistent { rows, powers } = analyze_shape(&fragment) {
        let seed_key = canonical_seed_key(seed);
        for (i, v) in vertices.iter_mut().enumerate() {
            v.row = rows[i];
            v.tau_power = powers[i];
            v.id = format!("{seed_key}:p{}:r{}", powers[i], rows[i]);
        }
        fragment.vertices = vertices;
    }

    Ok(BuiltComponent {
        fragment,
        vertex_ids: ids,
        explorer: ex,
    })
}

fn canonical_seed_key(seed: &DGModule) -> String {
    // Short stable key from the seed's structure.
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for (i, d) in seed.degrees().iter().enumerate() {
        eat(&d.to_le_bytes());
        eat(seed.name(i).as_bytes());
    }
    format!("{h:08x}")
}

// ---------------------------------------------------------------------
// certification
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeVerdict {
    Consistent {
        rows: Vec<i64>,
        powers: Vec<i64>,
    },
    Inconsistent(String),
    /// Degenerate window: nothing to certify.
    Vacuous(String),
}

impl ShapeVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ShapeVerdict::Consistent { .. })
    }
}

/// Check a window against `ℤA∞`: one end row, interior stars of size one or
/// two, free horizontal τ action, all labels `(1, 1)`.
pub fn analyze_shape(f: &ARQuiverFragment) -> ShapeVerdict {
    let n = f.vertices.len();
    if n == 0 {
        return ShapeVerdict::Vacuous("empty window".into());
    }
    if f.arrows.is_empty() && n == 1 {
        return ShapeVerdict::Vacuous("single vertex, radius too small to certify".into());
    }

    for a in &f.arrows {
        if a.src == a.dst {
            return ShapeVerdict::Inconsistent(format!("loop at vertex {}", a.src));
        }
        if (a.a, a.b) != (1, 1) {
            return ShapeVerdict::Inconsistent(format!(
                "label ({}, {}) on arrow {}→{} is not (1, 1)",
                a.a, a.b, a.src, a.dst
            ));
        }
    }

    // τ must be injective and fixed-point free (as a partial map).
    {
        let mut seen = std::collections::BTreeSet::new();
        for &(from, to) in &f.tau {
            if from == to {
                return ShapeVerdict::Inconsistent(format!("τ fixes vertex {from}"));
            }
            if !seen.insert(to) {
                return ShapeVerdict::Inconsistent(format!("τ hits vertex {to} twice"));
            }
        }
        // No short τ-cycles inside the window.
        let map: BTreeMap<usize, usize> = f.tau.iter().cloned().collect();
        for &start in map.keys() {
            let mut cur = start;
            for _ in 0..map.len() {
                match map.get(&cur) {
                    Some(&next) => {
                        if next == start {
                            return ShapeVerdict::Inconsistent(format!(
                                "τ-cycle through vertex {start}"
                            ));
                        }
                        cur = next;
                    }
                    None => break,
                }
            }
        }
    }

    let mut in_arrows: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_arrows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in &f.arrows {
        in_arrows[a.dst].push(a.src);
        out_arrows[a.src].push(a.dst);
    }

    // Interior vertices carry the full mesh star: 1 or 2 in-arrows.
    let mut ends = Vec::new();
    for (i, v) in f.vertices.iter().enumerate() {
        if !f.interior[i] {
            continue;
        }
        let k = in_arrows[i].len();
        if k == 0 || k > 2 {
            return ShapeVerdict::Inconsistent(format!(
                "interior vertex {} has {k} in-arrows",
                v.id
            ));
        }
        if k == 1 {
            ends.push(i);
        }
    }

    // Every interior end vertex must lie on one τ-orbit (a single end row).
    let tau_map: BTreeMap<usize, usize> = f.tau.iter().cloned().collect();
    let tau_inv: BTreeMap<usize, usize> = f.tau.iter().map(|&(a, b)| (b, a)).collect();
    if let Some(&e0) = ends.first() {
        for &e in &ends[1..] {
            let mut reachable = false;
            let mut cur = e0;
            for _ in 0..n {
                if cur == e {
                    reachable = true;
                    break;
                }
                match tau_map.get(&cur) {
                    Some(&t) => cur = t,
                    None => break,
                }
            }
            let mut cur = e0;
            if !reachable {
                for _ in 0..n {
                    if cur == e {
                        reachable = true;
                        break;
                    }
                    match tau_inv.get(&cur) {
                        Some(&t) => cur = t,
                        None => break,
                    }
                }
            }
            if !reachable {
                return ShapeVerdict::Inconsistent(format!(
                    "two τ-disconnected end vertices: {} and {}",
                    f.vertices[e0].id, f.vertices[e].id
                ));
            }
        }
    }

    // Row assignment: distance to the end row through the β-graded mesh
    // structure.  In a ZA∞ window rows are determined by undirected arrow
    // distance to the end orbit; τ preserves rows, arrows change them by 1.
    let mut rows = vec![i64::MIN; n];
    let mut queue: Vec<usize> = Vec::new();
    if ends.is_empty() {
        // The window may be too small to contain an interior end vertex.
        return ShapeVerdict::Vacuous("no interior end vertex in the window".into());
    }
    for &e in &ends {
        rows[e] = 0;
        queue.push(e);
    }
    // Propagate along τ (same row) first, then arrows (row ± 1).
    let mut qi = 0;
    while qi < queue.len() {
        let v = queue[qi];
        qi += 1;
        let r = rows[v];
        let visit = |u: usize, ru: i64, queue: &mut Vec<usize>, rows: &mut Vec<i64>| -> bool {
            if rows[u] == i64::MIN {
                rows[u] = ru;
                queue.push(u);
                true
            } else {
                rows[u] == ru
            }
        };
        if let Some(&t) = tau_map.get(&v) {
            if !visit(t, r, &mut queue, &mut rows) {
                return ShapeVerdict::Inconsistent(format!(
                    "τ changes the row at {}",
                    f.vertices[v].id
                ));
            }
        }
        if let Some(&t) = tau_inv.get(&v) {
            if !visit(t, r, &mut queue, &mut rows) {
                return ShapeVerdict::Inconsistent(format!(
                    "τ changes the row at {}",
                    f.vertices[v].id
                ));
            }
        }
        for &u in &in_arrows[v] {
            // Arrow u → v: rows differ by exactly one.
            if rows[u] == i64::MIN {
                // In ZA∞, in-arrows come from row r-1 and row r+1; decide by
                // the other structure: prefer β when available.
                let ru = if f.vertices[u].beta > f.vertices[v].beta {
                    r + 1
                } else {
                    r - 1
                };
                let ru = ru.max(0);
                rows[u] = ru;
                queue.push(u);
            } else if (rows[u] - r).abs() != 1 {
                return ShapeVerdict::Inconsistent(format!(
                    "arrow {}→{} does not connect adjacent rows",
                    f.vertices[u].id, f.vertices[v].id
                ));
            }
        }
        for &u in &out_arrows[v] {
            if rows[u] == i64::MIN {
                let ru = if f.vertices[u].beta > f.vertices[v].beta {
                    r + 1
                } else {
                    r - 1
                };
                let ru = ru.max(0);
                rows[u] = ru;
                queue.push(u);
            } else if (rows[u] - r).abs() != 1 {
                return ShapeVerdict::Inconsistent(format!(
                    "arrow {}→{} does not connect adjacent rows",
                    f.vertices[v].id, f.vertices[u].id
                ));
            }
        }
    }
    if rows.iter().any(|&r| r == i64::MIN) {
        return ShapeVerdict::Inconsistent("window is not arrow-connected".into());
    }
    if rows.iter().any(|&r| r < 0) {
        return ShapeVerdict::Inconsistent(
            "negative row: a second end row below the detected one".into(),
        );
    }

    // τ-power coordinates: 0 at the first end, +1 along τ.
    let mut powers = vec![i64::MIN; n];
    let anchor = ends[0];
    powers[anchor] = 0;
    let mut queue = vec![anchor];
    let mut qi = 0;
    while qi < queue.len() {
        let v = queue[qi];
        qi += 1;
        let p = powers[v];
        let push = |u: usize, pu: i64, powers: &mut Vec<i64>, queue: &mut Vec<usize>| -> bool {
            if powers[u] == i64::MIN {
                powers[u] = pu;
                queue.push(u);
                true
            } else {
                powers[u] == pu
            }
        };
        if let Some(&t) = tau_map.get(&v) {
            if !push(t, p + 1, &mut powers, &mut queue) {
                return ShapeVerdict::Inconsistent("τ-power assignment inconsistent".into());
            }
        }
        if let Some(&t) = tau_inv.get(&v) {
            if !push(t, p - 1, &mut powers, &mut queue) {
                return ShapeVerdict::Inconsistent("τ-power assignment inconsistent".into());
            }
        }
        for &u in &in_arrows[v] {
            // Arrow (p, r-1) → (p, r) keeps p; arrow (p+1, r+1) → (p, r)
            // drops to p when seen from the target: source power p+1.
            let pu = if rows[u] == rows[v] - 1 { p } else { p + 1 };
            if !push(u, pu, &mut powers, &mut queue) {
                return ShapeVerdict::Inconsistent("τ-power assignment inconsistent".into());
            }
        }
        for &u in &out_arrows[v] {
            let pu = if rows[u] == rows[v] + 1 { p } else { p - 1 };
            if !push(u, pu, &mut powers, &mut queue) {
                return ShapeVerdict::Inconsistent("τ-power assignment inconsistent".into());
            }
        }
    }

    // Uniqueness of the end row was checked through τ-connectivity; double
    // rows would also break the row assignment above.
    ShapeVerdict::Consistent { rows, powers }
}

/// Mesh β-additivity from stored data: at every vertex with τ inside the
/// window and an interior mesh, `β(τN) + β(N) = Σ a·β(M)` over arrows into N.
pub fn mesh_beta_check(f: &ARQuiverFragment) -> std::result::Result<(), String> {
    let tau_map: BTreeMap<usize, usize> = f.tau.iter().cloned().collect();
    for (i, v) in f.vertices.iter().enumerate() {
        if !f.interior[i] {
            continue;
        }
        let Some(&t) = tau_map.get(&i) else { continue };
        let sum: usize = f
            .arrows
            .iter()
            .filter(|a| a.dst == i)
            .map(|a| a.a * f.vertices[a.src].beta)
            .sum();
        if f.vertices[t].beta + v.beta != sum {
            return Err(format!(
                "β(τ{id}) + β({id}) = {} but Σ a·β = {sum}",
                f.vertices[t].beta + v.beta,
                id = v.id
            ));
        }
    }
    Ok(())
}

/// Label symmetry from stored data:
/// (i) `a_{τM→N} = b_{N→M}`, (ii) `b_{τM→N} = a_{N→M}`,
/// (iii) labels are τ-invariant.
pub fn label_symmetry_check(f: &ARQuiverFragment) -> std::result::Result<(), String> {
    let tau_map: BTreeMap<usize, usize> = f.tau.iter().cloned().collect();
    let find = |src: usize, dst: usize| -> Option<&FragmentArrow> {
        f.arrows.iter().find(|a| a.src == src && a.dst == dst)
    };
    for a in &f.arrows {
        // a: N → M (as in the statement, read the arrow as N=src, M=dst).
        let (n_v, m_v) = (a.src, a.dst);
        if let Some(&tm) = tau_map.get(&m_v) {
            if let Some(partner) = find(tm, n_v) {
                if partner.a != a.b {
                    return Err(format!(
                        "a_{{τ{}→{}}} = {} but b_{{{}→{}}} = {}",
                        f.vertices[tm].id,
                        f.vertices[n_v].id,
                        partner.a,
                        f.vertices[n_v].id,
                        f.vertices[m_v].id,
                        a.b
                    ));
                }
                if partner.b != a.a {
                    return Err(format!(
                        "b_{{τ{}→{}}} = {} but a_{{{}→{}}} = {}",
                        f.vertices[tm].id,
                        f.vertices[n_v].id,
                        partner.b,
                        f.vertices[n_v].id,
                        f.vertices[m_v].id,
                        a.a
                    ));
                }
            }
        }
        // (iii): the translated arrow τsrc → τdst carries the same label.
        if let (Some(&ts), Some(&td)) = (tau_map.get(&a.src), tau_map.get(&a.dst)) {
            if let Some(translated) = find(ts, td) {
                if (translated.a, translated.b) != (a.a, a.b) {
                    return Err(format!(
                        "label ({}, {}) at {}→{} becomes ({}, {}) under τ",
                        a.a,
                        a.b,
                        f.vertices[a.src].id,
                        f.vertices[a.dst].id,
                        translated.a,
                        translated.b
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn no_loops_check(f: &ARQuiverFragment) -> std::result::Result<(), String> {
    for a in &f.arrows {
        if a.src == a.dst {
            return Err(format!("loop at {}", f.vertices[a.src].id));
        }
    }
    Ok(())
}

/// Maximum β per row, walking away from the quiver end.  Requires a
/// consistent shape (rows assigned).
pub fn beta_per_row(f: &ARQuiverFragment) -> std::result::Result<Vec<usize>, String> {
    if f.vertices.iter().any(|v| v.row < 0) {
        return Err("rows are not assigned; run shape analysis first".into());
    }
    let max_row = f.vertices.iter().map(|v| v.row).max().unwrap_or(-1);
    let mut out = vec![0usize; (max_row + 1) as usize];
    for v in &f.vertices {
        let r = v.row as usize;
        out[r] = out[r].max(v.beta);
    }
    Ok(out)
}

/// Fixed-point freeness over the window: `τ^p M ≇ M` for `1 ≤ |p| ≤ bound`,
/// certified per vertex via the lowest-degree argument with the exact
/// isomorphism test as fallback.
pub fn fixed_point_sweep(
    built: &mut BuiltComponent,
    bound: i64,
) -> Result<Vec<(String, i64, bool)>> {
    let mut out = Vec::new();
    let report = built.explorer.report().clone();
    for (i, &v) in built.vertex_ids.iter().enumerate() {
        let m = Arc::clone(built.explorer.module(v));
        for p in 1..=bound {
            for q in [p, -p] {
                let fp = fixed_point_check(&m, q, &report)?;
                out.push((
                    built.fragment.vertices[i].id.clone(),
                    q,
                    fp.fixed_point_free,
                ));
            }
        }
    }
    Ok(out)
}

/// Number of distinct components met by the shifted free modules
/// `Σ^s R, 0 ≤ s ≤ shift_window`: two shifts lie in one component exactly
/// when a translation power carries one to the other.
pub fn count_components(algebra: &Arc<DGAlgebra>, shift_window: i64) -> Result<usize> {
    let report = check_gorenstein(algebra)?;
    if !report.holds() {
        return Err(Error::GorensteinRequired(report.to_string()));
    }
    let reg = DGModule::regular(algebra, Side::Left);
    let shifts: Vec<Arc<DGModule>> = (0..=shift_window)
        .map(|s| Arc::new(reg.suspend(s)))
        .collect();
    let n = shifts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut related = false;
            for p in -(shift_window)..=shift_window {
                let moved = ar_translate_power(&shifts[i], p, &report)?;
                if crate::decompose::derived_iso(&moved, &shifts[j])?.is_some() {
                    related = true;
                    break;
                }
            }
            if related {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut roots = std::collections::BTreeSet::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        roots.insert(r);
    }
    Ok(roots.len())
}

/// β identity `β(τN) = β(N)` for a list of modules; exact.
pub fn beta_tau_invariance(modules: &[Arc<DGModule>]) -> Result<()> {
    for m in modules {
        let t = ar_translate(m)?;
        let (bm, bt) = (beta(m)?, beta(&t)?);
        if bm != bt {
            return Err(Error::Inconsistent(format!("β(M) = {bm} but β(τM) = {bt}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::interval_module;
    use crate::scalar::FieldKind;

    fn sphere(d: i64) -> Arc<DGAlgebra> {
        DGAlgebra::sphere(d, FieldKind::Rational).unwrap()
    }

    #[test]
    fn mesh_at_regular_over_two_sphere() {
        let r = sphere(2);
        let mut ex = ComponentExplorer::new(&r).unwrap();
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let v = ex.register(&reg).unwrap();
        let mesh = ex.mesh(v).unwrap();
        assert_eq!(mesh.beta_vertex, 1);
        assert_eq!(mesh.beta_tau, 1);
        assert_eq!(mesh.beta_middle, 2);
        // End of the component: a single middle summand.
        assert_eq!(mesh.middle.len(), 1);
        assert_eq!(mesh.middle[0].1, 1);
    }

    #[test]
    fn irr_dim_examples() {
        let r = sphere(2);
        let mut ex = ComponentExplorer::new(&r).unwrap();
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let v = ex.register(&reg).unwrap();
        // No loops: irr_dim(M, M) = 0.
        assert_eq!(ex.irr_dim(v, v).unwrap(), 0);
        // Adjacent vertices: exactly one irreducible morphism.
        let mesh = ex.mesh(v).unwrap();
        let m = mesh.middle[0].0;
        assert_eq!(ex.irr_dim(m, v).unwrap(), 1);
        // Distant vertices (two rows apart): compositions land in rad².
        let far = ex.register(&interval_module(&r, 0, 2).unwrap()).unwrap();
        assert_eq!(ex.irr_dim(far, v).unwrap(), 0);
    }

    #[test]
    fn component_window_radius_two() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let built = build_component(&r, &reg, 2).unwrap();
        let f = &built.fragment;
        assert!(f.vertices.len() >= 6);
        assert!(no_loops_check(f).is_ok());
        assert!(mesh_beta_check(f).is_ok());
        assert!(label_symmetry_check(f).is_ok());
        assert!(f.arrows.iter().all(|a| (a.a, a.b) == (1, 1)));
        let verdict = analyze_shape(f);
        assert!(verdict.is_consistent(), "{verdict:?}");
        let rows = beta_per_row(f).unwrap();
        for (r, max_beta) in rows.iter().enumerate() {
            assert_eq!(*max_beta, r + 1);
        }
    }

    #[test]
    fn radius_zero_fragment_is_vacuous() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let built = build_component(&r, &reg, 0).unwrap();
        assert_eq!(built.fragment.vertices.len(), 1);
        assert!(built.fragment.arrows.is_empty());
        assert!(matches!(
            analyze_shape(&built.fragment),
            ShapeVerdict::Vacuous(_)
        ));
    }

    #[test]
    fn corrupted_label_is_detected() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let mut f = build_component(&r, &reg, 2).unwrap().fragment;
        // Fault injection: corrupt one label.
        f.arrows[0].a = 5;
        assert!(label_symmetry_check(&f).is_err() || mesh_beta_check(&f).is_err());
        assert!(!analyze_shape(&f).is_consistent());
    }

    #[test]
    fn component_counts_match_dimension() {
        assert_eq!(count_components(&sphere(2), 4).unwrap(), 1);
        assert_eq!(count_components(&sphere(3), 4).unwrap(), 2);
    }

    #[test]
    fn hand_built_za3_window_is_inconsistent() {
        // A window of ℤA₃: rows 0..=2, translation powers 0..=2.  Both row 0
        // and row 2 are quiver ends, so the window has a second end row and
        // must be rejected.
        let idx = |p: usize, r: usize| 3 * p + r;
        let vertices: Vec<FragmentVertex> = (0..3)
            .flat_map(|p| {
                (0..3).map(move |r| FragmentVertex {
                    id: format!("p{p}r{r}"),
                    beta: r + 1,
                    row: -1,
                    tau_power: 0,
                })
            })
            .collect();
        let mut arrows = Vec::new();
        for p in 0..3usize {
            for r in 0..2usize {
                // (p, r) → (p, r+1)
                arrows.push(FragmentArrow {
                    src: idx(p, r),
                    dst: idx(p, r + 1),
                    a: 1,
                    b: 1,
                });
                // (p+1, r+1) → (p, r)
                if p + 1 < 3 {
                    arrows.push(FragmentArrow {
                        src: idx(p + 1, r + 1),
                        dst: idx(p, r),
                        a: 1,
                        b: 1,
                    });
                }
            }
        }
        let mut tau = Vec::new();
        for p in 0..2usize {
            for r in 0..3usize {
                tau.push((idx(p, r), idx(p + 1, r)));
            }
        }
        // Mark the two lower translation slices interior so both end rows
        // show up with complete stars.
        let interior = (0..9).map(|i| i / 3 < 2).collect();
        let f = ARQuiverFragment {
            vertices,
            arrows,
            tau,
            radius: 2,
            interior,
        };
        match analyze_shape(&f) {
            ShapeVerdict::Inconsistent(w) => {
                assert!(w.contains("end"), "witness names the second end row: {w}")
            }
            other => panic!("ℤA₃ window must be inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn end_rings_of_window_vertices_are_local() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let built = build_component(&r, &reg, 1).unwrap();
        for &v in &built.vertex_ids {
            let end = crate::decompose::end_ring(built.explorer.module(v)).unwrap();
            assert!(end.is_local().unwrap());
        }
    }

    #[test]
    fn seed_and_translate_give_same_component() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let shifted = Arc::new(reg.suspend(1)); // τR over the 2-sphere
        let b1 = build_component(&r, &reg, 2).unwrap();
        let b2 = build_component(&r, &shifted, 2).unwrap();
        // Same component: identical β multiset over the window.
        let mut m1: Vec<usize> = b1.fragment.vertices.iter().map(|v| v.beta).collect();
        let mut m2: Vec<usize> = b2.fragment.vertices.iter().map(|v| v.beta).collect();
        m1.sort();
        m2.sort();
        assert_eq!(m1, m2);
    }
}
