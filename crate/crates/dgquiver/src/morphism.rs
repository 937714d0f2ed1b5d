//! Graded R-linear morphisms of DG modules, and mapping cones.

use std::sync::Arc;

use crate::dga::Combination;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{DGModule, Side};
use crate::scalar::Scalar;

/// A graded R-linear map between two same-side modules over one algebra.
///
/// Stored as a full `dim(target) × dim(source)` matrix in basis coordinates;
/// column `j` is the image of source basis element `j`.  Degree-`n` maps obey
/// the Koszul rule `φ(r·m) = (-1)^{n|r|} r·φ(m)` on the left (no sign on the
/// right), and are *closed* when `d∘φ = (-1)ⁿ φ∘d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DGMorphism {
    source: Arc<DGModule>,
    target: Arc<DGModule>,
    degree: i64,
    matrix: Matrix,
}

impl DGMorphism {
    pub fn new(
        source: Arc<DGModule>,
        target: Arc<DGModule>,
        degree: i64,
        matrix: Matrix,
    ) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if source.side() != target.side() {
            return Err(Error::SideMismatch {
                expected: source.side(),
                got: target.side(),
            });
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "morphism matrix is {}×{}, expected {}×{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let phi = DGMorphism {
            source,
            target,
            degree,
            matrix,
        };
        phi.check_graded()?;
        phi.check_linear()?;
        Ok(phi)
    }

    fn check_graded(&self) -> Result<()> {
        for i in 0..self.target.dim() {
            for j in 0..self.source.dim() {
                if !self.matrix.at(i, j).is_zero()
                    && self.target.degree(i) != self.source.degree(j) + self.degree
                {
                    return Err(Error::BadMorphism(format!(
                        "homogeneous of degree {}: entry ({i},{j}) crosses degrees",
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_linear(&self) -> Result<()> {
        let alg = self.source.algebra();
        let field = self.source.field();
        for r in 0..alg.dim() {
            if r == alg.unit() {
                continue;
            }
            let lhs = self.matrix.mul(&self.source.action_matrix(r));
            let sign = match self.source.side() {
                Side::Left => Scalar::sign(field, self.degree * alg.degree(r)),
                Side::Right => Scalar::one(field),
            };
            let rhs = self.target.action_matrix(r).mul(&self.matrix).scale(&sign);
            if lhs != rhs {
                return Err(Error::BadMorphism(format!(
                    "R-linear (fails at {})",
                    alg.name(r)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(module: &Arc<DGModule>) -> Self {
        DGMorphism {
            source: Arc::clone(module),
            target: Arc::clone(module),
            degree: 0,
            matrix: Matrix::identity(module.field(), module.dim()),
        }
    }

    pub fn zero(source: &Arc<DGModule>, target: &Arc<DGModule>, degree: i64) -> Self {
        DGMorphism {
            source: Arc::clone(source),
            target: Arc::clone(target),
            degree,
            matrix: Matrix::zero(source.field(), target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &Arc<DGModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DGModule> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `d_N ∘ φ - (-1)^{|φ|} φ ∘ d_M`.
    pub fn differential(&self) -> DGMorphism {
        let sign = Scalar::sign(self.source.field(), self.degree);
        let m = self
            .target
            .diff_matrix()
            .mul(&self.matrix)
            .sub(&self.matrix.mul(&self.source.diff_matrix()).scale(&sign));
        DGMorphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            degree: self.degree + 1,
            matrix: m,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DGMorphism) -> Result<DGMorphism> {
        if other.target.as_ref() != self.source.as_ref() {
            return Err(Error::BadMorphism(
                "composable (target/source mismatch)".into(),
            ));
        }
        Ok(DGMorphism {
            source: Arc::clone(&other.source),
            target: Arc::clone(&self.target),
            degree: self.degree + other.degree,
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn add(&self, other: &DGMorphism) -> DGMorphism {
        assert_eq!(self.degree, other.degree);
        DGMorphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            degree: self.degree,
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn scale(&self, c: &Scalar) -> DGMorphism {
        DGMorphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            degree: self.degree,
            matrix: self.matrix.scale(c),
        }
    }

    pub fn apply(&self, c: &Combination) -> Combination {
        let field = self.source.field();
        let mut v = vec![Scalar::zero(field); self.source.dim()];
        for (i, s) in c {
            v[*i] = v[*i].add(s);
        }
        let out = self.matrix.mul_vec(&v);
        out.into_iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    /// Graded isomorphism test: invertible as a matrix (degreewise, which the
    /// homogeneity check already guarantees).
    pub fn is_strict_iso(&self) -> bool {
        self.degree == 0 && self.source.dim() == self.target.dim() && self.matrix.is_invertible()
    }

    /// Restrict to a direct summand of the source given by column vectors.
    pub fn restrict_source(&self, inclusion: &Matrix, summand: Arc<DGModule>) -> DGMorphism {
        DGMorphism {
            source: summand,
            target: Arc::clone(&self.target),
            degree: self.degree,
            matrix: self.matrix.mul(inclusion),
        }
    }

    /// Whether the induced maps on cohomology are isomorphisms in every degree.
    pub fn is_quasi_iso(&self) -> bool {
        if self.degree != 0 || !self.is_closed() {
            return false;
        }
        let sc = self.source.complex();
        let tc = self.target.complex();
        let mut degrees: Vec<i64> = sc.degrees();
        degrees.extend(tc.degrees());
        degrees.sort();
        degrees.dedup();
        for d in degrees {
            let hs = sc.cohomology_at(d);
            let ht = tc.cohomology_at(d);
            if hs.dim() != ht.dim() {
                return false;
            }
            // Image classes of the source representatives must stay linearly
            // independent modulo boundaries in the target.
            let source_by_degree = self.source.basis_by_degree();
            let empty = Vec::new();
            let idx = source_by_degree.get(&d).unwrap_or(&empty);
            let target_by_degree = self.target.basis_by_degree();
            let tidx = target_by_degree.get(&d).unwrap_or(&empty);
            let mut span = ht.boundaries.clone();
            for rep in &hs.reps {
                // Expand the degree-d coordinates to full module coordinates.
                let mut full = vec![Scalar::zero(self.source.field()); self.source.dim()];
                for (pos, &i) in idx.iter().enumerate() {
                    full[i] = rep[pos].clone();
                }
                let image_full = self.matrix.mul_vec(&full);
                let image: Vec<Scalar> = tidx.iter().map(|&i| image_full[i].clone()).collect();
                let indep = if span.cols() == 0 {
                    !image.iter().all(Scalar::is_zero)
                } else {
                    !span.contains_in_column_span(&image)
                };
                if !indep {
                    return false;
                }
                let col =
                    Matrix::from_fn(self.target.field(), image.len(), 1, |i, _| image[i].clone());
                span = span.hstack(&col);
            }
        }
        true
    }
}

/// Mapping cone of a closed degree-0 morphism: `ΣM ⊕ N` with the twisted
/// differential `d(sm, n) = (-s(dm), φ(m) + dn)`.
pub fn cone(phi: &DGMorphism) -> Result<DGModule> {
    if phi.degree() != 0 {
        return Err(Error::BadMorphism(
            "degree 0 (cone needs a degree-0 map)".into(),
        ));
    }
    if !phi.is_closed() {
        return Err(Error::BadMorphism("closed (cone needs a chain map)".into()));
    }
    let m = phi.source();
    let n = phi.target();
    let sm = m.suspend(1);
    let sum = sm.direct_sum(n)?;
    // Add the φ component: d(s m_j) gains φ(m_j) inside the N block.
    let mdim = m.dim();
    let mut diff = sum.diff_table().clone();
    for j in 0..mdim {
        for i in 0..n.dim() {
            let c = phi.matrix().at(i, j);
            if !c.is_zero() {
                diff[j].push((mdim + i, c.clone()));
            }
        }
    }
    let basis = (0..sum.dim())
        .map(|i| (sum.name(i).to_string(), sum.degree(i)))
        .collect();
    DGModule::new(
        Arc::clone(sum.algebra()),
        sum.side(),
        basis,
        sum.action_table().clone(),
        diff,
    )
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
    fn identity_is_closed_quasi_iso() {
        let r = sphere(2);
        let m = Arc::new(DGModule::regular(&r, Side::Left));
        let id = DGMorphism::identity(&m);
        assert!(id.is_closed());
        assert!(id.is_quasi_iso());
        assert!(id.is_strict_iso());
    }

    #[test]
    fn zero_map_is_not_quasi_iso_on_nonacyclic() {
        let r = sphere(2);
        let m = Arc::new(DGModule::regular(&r, Side::Left));
        let z = DGMorphism::zero(&m, &m, 0);
        assert!(z.is_closed());
        assert!(!z.is_quasi_iso());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let r = sphere(2);
        let m = Arc::new(DGModule::regular(&r, Side::Left));
        let c = cone(&DGMorphism::identity(&m)).unwrap();
        assert_eq!(c.dim(), 2 * m.dim());
        assert!(c.complex().is_acyclic());
    }

    #[test]
    fn cone_of_zero_is_suspension_plus_target() {
        let r = sphere(2);
        let m = Arc::new(DGModule::regular(&r, Side::Left));
        let n = Arc::new(DGModule::regular(&r, Side::Left).suspend(2));
        let c = cone(&DGMorphism::zero(&m, &n, 0)).unwrap();
        let expected = m.suspend(1).direct_sum(&n).unwrap();
        assert_eq!(c.cohomology_dims(), expected.cohomology_dims());
    }

    #[test]
    fn cone_of_zero_endomorphism_of_k() {
        // k --0--> k: total cohomology of the cone has dimension 2.
        let r = sphere(2);
        let k = Arc::new(DGModule::residue(&r, Side::Left));
        let c = cone(&DGMorphism::zero(&k, &k, 0)).unwrap();
        assert_eq!(c.total_cohomology(), 2);
    }

    #[test]
    fn multiplication_morphism_on_sphere() {
        // x· : Σ^{-d} R → R is closed, degree 0, R-linear; its cone is the
        // two-generator module with β = 2.
        let d = 2;
        let r = sphere(d);
        let reg = Arc::new(DGModule::regular(&r, Side::Left));
        let shifted = Arc::new(reg.suspend(-d));
        // Basis order of R is (1, x); the map sends the shifted unit to x.
        let mut mat = Matrix::zero(FieldKind::Rational, 2, 2);
        mat.set(1, 0, Scalar::one(FieldKind::Rational));
        let phi = DGMorphism::new(Arc::clone(&shifted), Arc::clone(&reg), 0, mat).unwrap();
        assert!(phi.is_closed());
        let c = cone(&phi).unwrap();
        assert_eq!(c.dim(), 4);
        // H(cone): degrees 0 and 2d - 1.
        let h = c.cohomology_dims();
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&(2 * d - 1)), Some(&1));
    }
}
