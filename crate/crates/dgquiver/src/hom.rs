//! Hom complexes and morphism spaces up to homotopy.
//!
//! `Hom_R(M, N)` in degree `n` is the space of graded R-linear maps of
//! degree `n`, with differential `d(f) = d_N∘f - (-1)ⁿ f∘d_M`.  Closed
//! degree-0 elements are chain maps; `H⁰` classifies maps in the homotopy
//! category, which for semi-free sources computes derived Hom.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::GradedComplex;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{DGModule, Side};
use crate::morphism::DGMorphism;
use crate::scalar::Scalar;

fn check_compatible(source: &DGModule, target: &DGModule) -> Result<()> {
    if source.algebra() != target.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if source.side() != target.side() {
        return Err(Error::SideMismatch {
            expected: source.side(),
            got: target.side(),
        });
    }
    Ok(())
}

/// A basis of the graded R-linear maps `M → N` of the given degree, as full
/// matrices.
pub fn hom_basis(source: &DGModule, target: &DGModule, degree: i64) -> Result<Vec<Matrix>> {
    check_compatible(source, target)?;
    let field = source.field();
    // Entries allowed by the degree constraint.
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for i in 0..target.dim() {
        for j in 0..source.dim() {
            if target.degree(i) == source.degree(j) + degree {
                slots.push((i, j));
            }
        }
    }
    if slots.is_empty() {
        return Ok(Vec::new());
    }
    // R-linearity constraints: Φ·A_M(r) = ε_r · A_N(r)·Φ for each non-unit r.
    let alg = source.algebra();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for r in 0..alg.dim() {
        if r == alg.unit() {
            continue;
        }
        let am = source.action_matrix(r);
        let an = target.action_matrix(r);
        let sign = match source.side() {
            Side::Left => Scalar::sign(field, degree * alg.degree(r)),
            Side::Right => Scalar::one(field),
        };
        // Constraint entry (i, j): Σ_k Φ_{ik} am_{kj} - ε an_{ik} Φ_{kj} = 0.
        for i in 0..target.dim() {
            for j in 0..source.dim() {
                let mut row = vec![Scalar::zero(field); slots.len()];
                let mut nonzero = false;
                for (s, &(a, b)) in slots.iter().enumerate() {
                    let mut coeff = Scalar::zero(field);
                    if a == i {
                        coeff = coeff.add(am.at(b, j));
                    }
                    if b == j {
                        coeff = coeff.sub(&sign.mul(an.at(i, a)));
                    }
                    if !coeff.is_zero() {
                        row[s] = coeff;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(field, slots.len())
    } else {
        Matrix::from_rows(field, rows).kernel_basis()
    };
    let mut out = Vec::new();
    for c in 0..kernel.cols() {
        let mut m = Matrix::zero(field, target.dim(), source.dim());
        for (s, &(i, j)) in slots.iter().enumerate() {
            m.set(i, j, kernel.at(s, c).clone());
        }
        out.push(m);
    }
    Ok(out)
}

/// The full Hom complex as a graded complex: degree-wise dimensions and the
/// matrix of `d(f) = d_N∘f - (-1)ⁿ f∘d_M` in the computed bases.
pub fn hom_complex(source: &DGModule, target: &DGModule) -> Result<GradedComplex> {
    check_compatible(source, target)?;
    let field = source.field();
    if source.dim() == 0 || target.dim() == 0 {
        return GradedComplex::new(field, BTreeMap::new(), BTreeMap::new());
    }
    let lo = target.degrees().iter().min().unwrap() - source.degrees().iter().max().unwrap();
    let hi = target.degrees().iter().max().unwrap() - source.degrees().iter().min().unwrap();
    let mut bases: BTreeMap<i64, Vec<Matrix>> = BTreeMap::new();
    for n in lo..=hi {
        let b = hom_basis(source, target, n)?;
        if !b.is_empty() {
            bases.insert(n, b);
        }
    }
    let dims: BTreeMap<i64, usize> = bases.iter().map(|(&n, b)| (n, b.len())).collect();
    let mut diffs = BTreeMap::new();
    let ds = source.diff_matrix();
    let dt = target.diff_matrix();
    for (&n, basis) in &bases {
        let Some(next) = bases.get(&(n + 1)) else {
            continue;
        };
        let sign = Scalar::sign(field, n);
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for f in basis {
            let df = dt.mul(f).sub(&f.mul(&ds).scale(&sign));
            cols.push(coords_in_basis(&df, next).ok_or_else(|| {
                Error::Inconsistent("hom differential leaves the computed basis".into())
            })?);
        }
        let m = Matrix::from_fn(field, next.len(), basis.len(), |i, j| cols[j][i].clone());
        if !m.is_zero() {
            diffs.insert(n, m);
        }
    }
    GradedComplex::new(field, dims, diffs)
}

/// Express a matrix as coordinates in a list of linearly independent
/// matrices, if possible.
pub fn coords_in_basis(m: &Matrix, basis: &[Matrix]) -> Option<Vec<Scalar>> {
    let field = m.field();
    if basis.is_empty() {
        return if m.is_zero() { Some(Vec::new()) } else { None };
    }
    let rows = m.rows() * m.cols();
    let a = Matrix::from_fn(field, rows, basis.len(), |i, j| {
        basis[j].at(i / m.cols(), i % m.cols()).clone()
    });
    let b: Vec<Scalar> = (0..rows)
        .map(|i| m.at(i / m.cols(), i % m.cols()).clone())
        .collect();
    a.solve(&b).ok().flatten()
}

/// Morphisms `M → N` of one degree, up to homotopy: representatives of
/// cohomology classes of the Hom complex plus a boundary-membership test.
#[derive(Debug, Clone)]
pub struct MorphismClasses {
    source: Arc<DGModule>,
    target: Arc<DGModule>,
    degree: i64,
    /// Basis of closed maps.
    cocycles: Vec<DGMorphism>,
    /// Flattened span of null-homotopic maps.
    boundaries: Matrix,
    /// Class representatives (a subset of the closed maps, independent
    /// modulo boundaries).
    reps: Vec<DGMorphism>,
}

impl MorphismClasses {
    pub fn new(source: &Arc<DGModule>, target: &Arc<DGModule>, degree: i64) -> Result<Self> {
        check_compatible(source, target)?;
        let field = source.field();
        let flat_len = target.dim() * source.dim();

        let all = hom_basis(source, target, degree)?;
        let ds = source.diff_matrix();
        let dt = target.diff_matrix();
        let sign = Scalar::sign(field, degree);

        // Closed maps: kernel of d restricted to this degree.
        let mut cocycles = Vec::new();
        if !all.is_empty() {
            let rows: Vec<Vec<Scalar>> = all
                .iter()
                .map(|f| flatten(&dt.mul(f).sub(&f.mul(&ds).scale(&sign))))
                .collect();
            let constraint = Matrix::from_fn(field, flat_len, all.len(), |i, j| rows[j][i].clone());
            let kernel = constraint.kernel_basis();
            for c in 0..kernel.cols() {
                let mut m = Matrix::zero(field, target.dim(), source.dim());
                for (j, f) in all.iter().enumerate() {
                    if !kernel.at(j, c).is_zero() {
                        m = m.add(&f.scale(kernel.at(j, c)));
                    }
                }
                cocycles.push(DGMorphism::new(
                    Arc::clone(source),
                    Arc::clone(target),
                    degree,
                    m,
                )?);
            }
        }

        // Boundaries: images of degree-1-lower maps.
        let below = hom_basis(source, target, degree - 1)?;
        let sign_b = Scalar::sign(field, degree - 1);
        let mut boundary_cols: Vec<Vec<Scalar>> = Vec::new();
        for h in &below {
            let dh = dt.mul(h).sub(&h.mul(&ds).scale(&sign_b));
            if !dh.is_zero() {
                boundary_cols.push(flatten(&dh));
            }
        }
        let boundaries = if boundary_cols.is_empty() {
            Matrix::zero(field, flat_len, 0)
        } else {
            Matrix::from_fn(field, flat_len, boundary_cols.len(), |i, j| {
                boundary_cols[j][i].clone()
            })
            .column_span_basis()
        };

        // Representatives independent modulo boundaries.
        let mut reps = Vec::new();
        let mut span = boundaries.clone();
        for z in &cocycles {
            let v = flatten(z.matrix());
            let new = if span.cols() == 0 {
                !v.iter().all(Scalar::is_zero)
            } else {
                !span.contains_in_column_span(&v)
            };
            if new {
                let col = Matrix::from_fn(field, v.len(), 1, |i, _| v[i].clone());
                span = span.hstack(&col);
                reps.push(z.clone());
            }
        }

        Ok(MorphismClasses {
            source: Arc::clone(source),
            target: Arc::clone(target),
            degree,
            cocycles,
            boundaries,
            reps,
        })
    }

    pub fn source(&self) -> &Arc<DGModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DGModule> {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[DGMorphism] {
        &self.reps
    }

    pub fn cocycles(&self) -> &[DGMorphism] {
        &self.cocycles
    }

    /// Columns spanning the null-homotopic maps, in flattened matrix
    /// coordinates (row-major over the `target.dim() × source.dim()` grid).
    pub fn boundary_span(&self) -> &Matrix {
        &self.boundaries
    }

    pub fn is_nullhomotopic(&self, phi: &DGMorphism) -> bool {
        let v = flatten(phi.matrix());
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        if self.boundaries.cols() == 0 {
            return false;
        }
        self.boundaries.contains_in_column_span(&v)
    }

    /// Coordinates of a closed map's class in the representative basis.
    pub fn class_coords(&self, phi: &DGMorphism) -> Option<Vec<Scalar>> {
        let field = self.source.field();
        let flat_len = self.target.dim() * self.source.dim();
        let cols = self.reps.len() + self.boundaries.cols();
        if cols == 0 {
            return if phi.is_zero() {
                Some(Vec::new())
            } else {
                None
            };
        }
        let a = Matrix::from_fn(field, flat_len, cols, |i, j| {
            if j < self.reps.len() {
                let m = self.reps[j].matrix();
                m.at(i / self.source.dim(), i % self.source.dim()).clone()
            } else {
                self.boundaries.at(i, j - self.reps.len()).clone()
            }
        });
        let x = a.solve(&flatten(phi.matrix())).ok().flatten()?;
        Some(x[..self.reps.len()].to_vec())
    }

    /// Rebuild a representative morphism from class coordinates.
    pub fn from_coords(&self, coords: &[Scalar]) -> DGMorphism {
        let field = self.source.field();
        let mut m = Matrix::zero(field, self.target.dim(), self.source.dim());
        for (c, rep) in coords.iter().zip(&self.reps) {
            if !c.is_zero() {
                m = m.add(&rep.matrix().scale(c));
            }
        }
        DGMorphism::new(
            Arc::clone(&self.source),
            Arc::clone(&self.target),
            self.degree,
            m,
        )
        .expect("linear combination of morphisms is a morphism")
    }
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m.at(i, j).clone());
        }
    }
    out
}

/// Dimension of `H⁰Hom(M, N)` (maps in the homotopy category).
pub fn h0_dim(source: &Arc<DGModule>, target: &Arc<DGModule>) -> Result<usize> {
    Ok(MorphismClasses::new(source, target, 0)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::DGAlgebra;
    use crate::scalar::FieldKind;

    fn sphere(d: i64) -> Arc<DGAlgebra> {
        DGAlgebra::sphere(d, FieldKind::Rational).unwrap()
    }

    #[test]
    fn hom_from_free_rank_one_is_the_target() {
        // Hom_R(R, N) ≅ N via evaluation at the unit, including cohomology.
        let r = sphere(2);
        let reg = DGModule::regular(&r, Side::Left);
        for n in [
            DGModule::regular(&r, Side::Left).suspend(1),
            DGModule::residue(&r, Side::Left),
        ] {
            let h = hom_complex(&reg, &n).unwrap();
            assert_eq!(h.dims(), n.complex().dims());
            assert_eq!(h.cohomology_dims(), n.cohomology_dims());
        }
    }

    #[test]
    fn identity_is_a_closed_degree_zero_class() {
        let r = sphere(2);
        let m = Arc::new(DGModule::regular(&r, Side::Left));
        let classes = MorphismClasses::new(&m, &m, 0).unwrap();
        let id = DGMorphism::identity(&m);
        assert!(!classes.is_nullhomotopic(&id));
        let coords = classes.class_coords(&id).unwrap();
        assert!(coords.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn hom_of_residue_over_sphere() {
        // Degree-0 R-linear maps k → k over the d = 2 sphere: one dimension.
        let r = sphere(2);
        let k = DGModule::residue(&r, Side::Left);
        let b = hom_basis(&k, &k, 0).unwrap();
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let r2 = sphere(2);
        let r3 = sphere(3);
        let left = DGModule::regular(&r2, Side::Left);
        let right = DGModule::regular(&r2, Side::Right);
        let other = DGModule::regular(&r3, Side::Left);
        assert!(matches!(
            hom_complex(&left, &right),
            Err(crate::error::Error::SideMismatch { .. })
        ));
        assert!(matches!(
            hom_complex(&left, &other),
            Err(crate::error::Error::AlgebraMismatch)
        ));
    }

    #[test]
    fn right_module_hom_has_no_koszul_sign() {
        let r = sphere(3);
        let reg = DGModule::regular(&r, Side::Right);
        let h = hom_complex(&reg, &reg).unwrap();
        // End(R_R) ≅ R as a complex.
        assert_eq!(h.dims(), reg.complex().dims());
    }
}
