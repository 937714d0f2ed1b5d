//! Composition chains of irreducible and radical morphisms: the Harada-Sai
//! vanishing bound and the inductive construction of long nonzero paths.

use std::sync::Arc;

use crate::decompose::{is_indecomposable, summand_iso};
use crate::error::{Error, Result};
use crate::hom::MorphismClasses;
use crate::matrix::Matrix;
use crate::module::{DGModule, Side};
use crate::morphism::DGMorphism;
use crate::quiver::ComponentExplorer;
use crate::resolution::windowed_resolution_model;
use crate::scalar::Scalar;

/// Outcome of a Harada-Sai run on a chain `M_n → … → M_0` of
/// non-isomorphisms between indecomposables.
#[derive(Debug, Clone)]
pub struct HaradaSaiReport {
    /// `p = (max β along the chain) · dim_k R`.
    pub p: usize,
    /// `2^p - 1`.
    pub bound: usize,
    pub chain_len: usize,
    /// Smallest prefix length whose composite is zero in the derived
    /// category, if any prefix vanishes.
    pub observed_vanishing: Option<usize>,
    /// The vanishing promise: chains of length `≥ 2^p - 1` compose to zero.
    pub verdict: bool,
}

/// Check a chain of closed degree-0 maps `maps[i]: M_{i+1} → M_i` (so the
/// composite is `maps[0] ∘ maps[1] ∘ …`).  Every object must be
/// indecomposable and every map a non-isomorphism; both are verified.
pub fn harada_sai_check(maps: &[DGMorphism]) -> Result<HaradaSaiReport> {
    if maps.is_empty() {
        return Err(Error::InvalidArgument("empty chain".into()));
    }
    for w in maps.windows(2) {
        if w[0].source().as_ref() != w[1].target().as_ref() {
            return Err(Error::BadMorphism(
                "composable (chain links mismatch)".into(),
            ));
        }
    }
    let mut objects: Vec<Arc<DGModule>> = vec![Arc::clone(maps[0].target())];
    for m in maps {
        objects.push(Arc::clone(m.source()));
    }
    let algebra_dim = objects[0].algebra().dim();
    let mut max_beta = 0usize;
    for obj in &objects {
        if !is_indecomposable(obj)? {
            return Err(Error::InvalidArgument(
                "chain object is decomposable".into(),
            ));
        }
        max_beta = max_beta.max(crate::resolution::beta(obj)?);
    }
    for m in maps {
        if !m.is_closed() || m.degree() != 0 {
            return Err(Error::BadMorphism("closed of degree 0".into()));
        }
        // Between minimal models, invertibility in the derived category is
        // strict invertibility.
        if m.is_strict_iso() {
            return Err(Error::InvalidArgument(
                "chain contains an isomorphism".into(),
            ));
        }
    }

    let p = max_beta * algebra_dim;
    let bound = (1usize << p) - 1;

    let mut observed = None;
    let mut composite = maps[0].clone();
    for (k, m) in maps.iter().enumerate() {
        if k > 0 {
            composite = composite.compose(m)?;
        }
        let classes = MorphismClasses::new(composite.source(), composite.target(), 0)?;
        if classes.is_nullhomotopic(&composite) {
            observed = Some(k + 1);
            break;
        }
    }

    let verdict = maps.len() < bound || observed.map_or(false, |v| v <= bound);
    Ok(HaradaSaiReport {
        p,
        bound,
        chain_len: maps.len(),
        observed_vanishing: observed,
        verdict,
    })
}

/// A found path of irreducible morphisms with nonzero composite, together
/// with the witness map from a shifted residue module.
pub struct NonzeroPath {
    /// Explorer vertex ids `[M_q, …, M_1, M_0]`.
    pub vertices: Vec<usize>,
    /// `maps[i]: M_{i+1} → M_i` models; the composite `maps[0]∘…∘maps[q-1]`
    /// is certified nonzero in `H⁰Hom`.
    pub maps: Vec<DGMorphism>,
    /// The shift `i` with a nonzero `κ: Σ^i k → M_q` threading the path.
    pub shift: i64,
    /// At each step, the summands that would also have kept the composite
    /// nonzero (the construction takes the first in vertex order).
    pub alternatives: Vec<Vec<usize>>,
}

/// Inductive construction of a length-`q` path of irreducible morphisms with
/// nonzero composite, starting at explorer vertex `seed`.
///
/// A nonzero map from a shifted residue module is dragged through each mesh:
/// it is never a retraction (the residue module is not perfect), so it
/// factors through the mesh middle, and some indecomposable summand keeps
/// the composite nonzero.  The first such summand in vertex order is taken;
/// the rest are recorded as alternatives.
pub fn nonzero_path_search(
    explorer: &mut ComponentExplorer,
    seed: usize,
    q: usize,
) -> Result<NonzeroPath> {
    let seed_model = Arc::clone(explorer.module(seed));
    let algebra = Arc::clone(seed_model.algebra());
    let field = algebra.field();

    // Non-compactness probe for k, a precondition of the construction.
    let growth = crate::resolution::tor_kk_growth(&algebra, &[2, 4, 6])?;
    if !(growth[0] < growth[1] && growth[1] < growth[2]) {
        return Err(Error::InvalidArgument(
            "residue module resolves finitely; nonzero-path construction does not apply".into(),
        ));
    }

    let max_deg = seed_model.degrees().iter().max().copied().unwrap_or(0);
    let min_deg = seed_model.degrees().iter().min().copied().unwrap_or(0);
    let top = algebra.top_degree();
    // Degree budget: path targets stay within q meshes of the seed.
    let window = max_deg + (q as i64 + 2) * top + 4;
    let k = Arc::new(DGModule::residue(&algebra, Side::Left));
    let (trunc, _, _) = windowed_resolution_model(&k, window)?;

    // Find a shift with a nonzero class Σ^i k → seed.
    let mut chosen: Option<(i64, Arc<DGModule>, DGMorphism)> = None;
    for i in (-(max_deg + top + 2))..=(-min_deg + top + 2) {
        let source = Arc::new(trunc.suspend(i));
        let classes = MorphismClasses::new(&source, &seed_model, 0)?;
        if classes.dim() > 0 {
            chosen = Some((i, source, classes.reps()[0].clone()));
            break;
        }
    }
    let Some((shift, source, mut kappa)) = chosen else {
        return Err(Error::Inconsistent(
            "no nonzero map from a shifted residue module was found".into(),
        ));
    };

    let mut vertices = vec![seed];
    let mut maps: Vec<DGMorphism> = Vec::new(); // maps[j]: M_{j+1} → M_j
    let mut alternatives: Vec<Vec<usize>> = Vec::new();
    let m0_model = seed_model;

    for _ in 0..q {
        let current = *vertices.last().unwrap();
        let mesh = explorer.mesh(current)?;
        let current_model = Arc::clone(explorer.module(current));

        // Factor kappa through the sink map: kappa ≃ sink ∘ kappa'.
        let y_model = Arc::clone(&mesh.y_model);
        let to_y = MorphismClasses::new(&source, &y_model, 0)?;
        let into_current = MorphismClasses::new(&source, &current_model, 0)?;
        let target_coords = into_current
            .class_coords(&kappa)
            .ok_or_else(|| Error::Inconsistent("kappa lost its class coordinates".into()))?;
        let t = to_y.dim();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for u in to_y.reps() {
            let comp = mesh.sink.compose(u)?;
            let coords = into_current
                .class_coords(&comp)
                .ok_or_else(|| Error::Inconsistent("sink composite left the class space".into()))?;
            cols.push(coords);
        }
        let a = Matrix::from_fn(field, target_coords.len(), t, |i, j| cols[j][i].clone());
        let sol = a.solve(&target_coords)?.ok_or_else(|| {
            Error::Inconsistent(
                "map from the residue module failed to factor through the mesh middle".into(),
            )
        })?;
        let kappa_prime = to_y.from_coords(&sol);

        // Pick the first summand (in vertex order) keeping the composite to
        // M_0 nonzero.
        let into_m0 = MorphismClasses::new(&source, &m0_model, 0)?;
        let mut pick: Option<(usize, DGMorphism, DGMorphism)> = None;
        let mut alts = Vec::new();
        for (vid, part) in &mesh.parts {
            let reg_model = Arc::clone(explorer.module(*vid));
            let Some(g) = summand_iso(&part.module, &reg_model)? else {
                return Err(Error::Inconsistent(
                    "mesh part does not match its registry model".into(),
                ));
            };
            let g_inv = DGMorphism::new(
                Arc::clone(&reg_model),
                Arc::clone(&part.module),
                0,
                g.matrix()
                    .inverse()
                    .ok_or_else(|| Error::Inconsistent("summand iso is not invertible".into()))?,
            )?;
            let kappa_t = g.compose(&part.projection.compose(&kappa_prime)?)?;
            let mu_t = mesh.sink.compose(&part.inclusion.compose(&g_inv)?)?;
            let mut comp = mu_t.compose(&kappa_t)?;
            for m in maps.iter().rev() {
                comp = m.compose(&comp)?;
            }
            if !into_m0.is_nullhomotopic(&comp) {
                if pick.is_none() {
                    pick = Some((*vid, mu_t, kappa_t));
                } else {
                    alts.push(*vid);
                }
            }
        }
        let Some((vid, mu, kappa_next)) = pick else {
            return Err(Error::Inconsistent(
                "no mesh summand keeps the composite nonzero (contradicts the factoring argument)"
                    .into(),
            ));
        };
        vertices.push(vid);
        maps.push(mu);
        alternatives.push(alts);
        kappa = kappa_next;
    }

    // Certify: path composite nonzero, and still nonzero against kappa.
    if let Some(first) = maps.first() {
        let mut comp = first.clone();
        for m in &maps[1..] {
            comp = comp.compose(m)?;
        }
        let path_classes = MorphismClasses::new(comp.source(), comp.target(), 0)?;
        if path_classes.is_nullhomotopic(&comp) {
            return Err(Error::Inconsistent(
                "assembled path composite is zero".into(),
            ));
        }
        let full = comp.compose(&kappa)?;
        let full_classes = MorphismClasses::new(full.source(), full.target(), 0)?;
        if full_classes.is_nullhomotopic(&full) {
            return Err(Error::Inconsistent(
                "path composite with kappa is zero".into(),
            ));
        }
    }

    vertices.reverse(); // M_q first
    Ok(NonzeroPath {
        vertices,
        maps,
        shift,
        alternatives,
    })
}

/// A deterministic walk along quiver arrows: `length` steps from `start`,
/// keeping every vertex's β within `max_beta`, choices driven by the seed.
/// Returns the route and the chain of irreducible non-isomorphisms in the
/// order [`harada_sai_check`] expects (composite = walk end back to start).
pub fn arrow_walk_chain(
    explorer: &mut ComponentExplorer,
    start: usize,
    length: usize,
    max_beta: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<DGMorphism>)> {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move |bound: usize| -> usize {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % bound as u64) as usize
    };
    let mut route = vec![start];
    let mut walk_maps: Vec<DGMorphism> = Vec::new();
    for _ in 0..length {
        let cur = *route.last().unwrap();
        let mut outs: Vec<usize> = explorer
            .out_neighbours(cur)?
            .into_iter()
            .filter(|&u| explorer.beta(u) <= max_beta)
            .collect();
        outs.sort();
        outs.dedup();
        if outs.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "vertex {cur} has no out-arrows within the β bound"
            )));
        }
        let nxt = outs[next(outs.len())];
        let src = Arc::clone(explorer.module(cur));
        let dst = Arc::clone(explorer.module(nxt));
        let classes = MorphismClasses::new(&src, &dst, 0)?;
        let pick = classes
            .reps()
            .iter()
            .find(|m| !m.is_strict_iso() && !m.is_zero())
            .cloned()
            .ok_or_else(|| {
                Error::InvalidArgument(format!("no non-isomorphism from {cur} to {nxt}"))
            })?;
        walk_maps.push(pick);
        route.push(nxt);
    }
    walk_maps.reverse();
    Ok((route, walk_maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::DGAlgebra;
    use crate::quiver::build_component;
    use crate::scalar::FieldKind;

    fn sphere(d: i64) -> Arc<DGAlgebra> {
        DGAlgebra::sphere(d, FieldKind::Rational).unwrap()
    }

    #[test]
    fn nonzero_paths_from_regular_seed() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let mut built = build_component(&r, &reg, 1).unwrap();
        let seed = built.vertex_ids[0];
        for q in [0usize, 1, 3] {
            let path = nonzero_path_search(&mut built.explorer, seed, q).unwrap();
            assert_eq!(path.maps.len(), q);
            assert_eq!(path.vertices.len(), q + 1);
        }
    }

    #[test]
    fn harada_sai_single_nonzero_map() {
        // One irreducible map: vanishing not yet forced.
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let mut built = build_component(&r, &reg, 1).unwrap();
        let seed = built.vertex_ids[0];
        let path = nonzero_path_search(&mut built.explorer, seed, 1).unwrap();
        let report = harada_sai_check(&path.maps).unwrap();
        assert_eq!(report.chain_len, 1);
        assert_eq!(report.observed_vanishing, None);
        assert!(report.verdict); // shorter than the bound
    }

    #[test]
    fn harada_sai_rejects_isomorphisms() {
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let res = crate::resolution::resolve_compact(&reg).unwrap();
        let id = DGMorphism::identity(res.module());
        assert!(harada_sai_check(&[id]).is_err());
    }

    #[test]
    fn long_chains_vanish_within_the_bound() {
        // Walks confined to β ≤ 2 vertices over the 2-sphere: p = 4, so any
        // chain of length 15 composes to zero.
        let r = sphere(2);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let mut built = build_component(&r, &reg, 2).unwrap();
        let seed = built.vertex_ids[0];
        let (_, maps) = arrow_walk_chain(&mut built.explorer, seed, 15, 2, 7).unwrap();
        let report = harada_sai_check(&maps).unwrap();
        assert_eq!(report.p, 4);
        assert_eq!(report.bound, 15);
        assert!(report.verdict, "{report:?}");
        assert!(report.observed_vanishing.is_some());
        assert!(report.observed_vanishing.unwrap() <= report.bound);
    }
}
