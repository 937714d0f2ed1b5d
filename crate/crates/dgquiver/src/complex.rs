//! Complexes of graded vector spaces, and exact cohomology.
//!
//! This is the shape shared by Hom complexes, tensor products and the
//! underlying complex of a DG module: per-degree dimensions and degree `+1`
//! differentials.

use std::collections::BTreeMap;

use crate::dga::Combination;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct GradedComplex {
    field: FieldKind,
    dims: BTreeMap<i64, usize>,
    /// `diffs[d]`: matrix of the differential from degree `d` to `d + 1`,
    /// shaped `dims[d+1] × dims[d]`.  Missing entries mean zero maps.
    diffs: BTreeMap<i64, Matrix>,
}

impl GradedComplex {
    pub fn new(
        field: FieldKind,
        dims: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, n)| *n > 0).collect();
        let c = GradedComplex { field, dims, diffs };
        for (&d, m) in &c.diffs {
            if m.rows() != c.dim(d + 1) || m.cols() != c.dim(d) {
                return Err(Error::DimensionMismatch(format!(
                    "differential at degree {d} is {}×{}, expected {}×{}",
                    m.rows(),
                    m.cols(),
                    c.dim(d + 1),
                    c.dim(d)
                )));
            }
        }
        for (&d, m) in &c.diffs {
            if let Some(next) = c.diffs.get(&(d + 1)) {
                if !next.mul(m).is_zero() {
                    return Err(Error::Inconsistent(format!(
                        "d² != 0 between degrees {d} and {}",
                        d + 2
                    )));
                }
            }
        }
        Ok(c)
    }

    /// Build from a basis-with-degrees plus differential in combination form
    /// (the representation DG modules use).
    pub fn from_basis_diff(field: FieldKind, degrees: &[i64], diff: &[Combination]) -> Self {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &d) in degrees.iter().enumerate() {
            by_degree.entry(d).or_default().push(i);
        }
        let pos: BTreeMap<usize, usize> = by_degree
            .values()
            .flat_map(|v| v.iter().enumerate().map(|(p, &i)| (i, p)))
            .collect();
        let dims: BTreeMap<i64, usize> = by_degree.iter().map(|(&d, v)| (d, v.len())).collect();
        let mut diffs = BTreeMap::new();
        for (&d, basis) in &by_degree {
            let target = by_degree.get(&(d + 1)).map_or(0, Vec::len);
            if target == 0 {
                continue;
            }
            let mut m = Matrix::zero(field, target, basis.len());
            for (col, &i) in basis.iter().enumerate() {
                for (k, c) in &diff[i] {
                    debug_assert_eq!(degrees[*k], d + 1);
                    m.set(pos[k], col, c.clone());
                }
            }
            if !m.is_zero() {
                diffs.insert(d, m);
            }
        }
        GradedComplex { field, dims, diffs }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.dims.keys().cloned().collect()
    }

    pub fn diff(&self, degree: i64) -> Matrix {
        self.diffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.field, self.dim(degree + 1), self.dim(degree)))
    }

    /// Alternating sum of dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&d, &n)| {
                if d.rem_euclid(2) == 0 {
                    n as i64
                } else {
                    -(n as i64)
                }
            })
            .sum()
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &d in self.dims.keys() {
            let h = self.cohomology_dim(d);
            if h > 0 {
                out.insert(d, h);
            }
        }
        out
    }

    pub fn cohomology_dim(&self, degree: i64) -> usize {
        let n = self.dim(degree);
        if n == 0 {
            return 0;
        }
        let out_rank = self.diff(degree).rank();
        let in_rank = self.diff(degree - 1).rank();
        n - out_rank - in_rank
    }

    pub fn inf_cohomology(&self) -> Option<i64> {
        self.dims
            .keys()
            .find(|&&d| self.cohomology_dim(d) > 0)
            .copied()
    }

    pub fn sup_cohomology(&self) -> Option<i64> {
        self.dims
            .keys()
            .rev()
            .find(|&&d| self.cohomology_dim(d) > 0)
            .copied()
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.keys().all(|&d| self.cohomology_dim(d) == 0)
    }

    /// Cocycles, boundaries and chosen class representatives in one degree.
    pub fn cohomology_at(&self, degree: i64) -> CohomologySlice {
        let cocycles = self.diff(degree).kernel_basis();
        let boundaries_full = self.diff(degree - 1);
        let boundaries = boundaries_full.column_span_basis();
        // Representatives: cocycle columns extending the boundary span.
        let mut reps: Vec<Vec<Scalar>> = Vec::new();
        let mut span = boundaries.clone();
        for j in 0..cocycles.cols() {
            let cand = cocycles.column(j);
            let test = if span.cols() == 0 {
                !cand.iter().all(Scalar::is_zero)
            } else {
                !span.contains_in_column_span(&cand)
            };
            if test {
                let col = Matrix::from_fn(self.field, cand.len(), 1, |i, _| cand[i].clone());
                span = span.hstack(&col);
                reps.push(cand);
            }
        }
        CohomologySlice {
            cocycles,
            boundaries,
            reps,
        }
    }
}

/// Cohomology in one degree with explicit witnesses, in the coordinates of
/// that degree's component.
pub struct CohomologySlice {
    pub cocycles: Matrix,
    pub boundaries: Matrix,
    pub reps: Vec<Vec<Scalar>>,
}

impl CohomologySlice {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Is the given cocycle a boundary?
    pub fn is_boundary(&self, v: &[Scalar]) -> bool {
        if v.iter().all(Scalar::is_zero) {
            return true;
        }
        if self.boundaries.cols() == 0 {
            return false;
        }
        self.boundaries.contains_in_column_span(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldKind {
        FieldKind::Rational
    }

    #[test]
    fn two_term_complex() {
        // 0 → k → k → 0 with the identity differential: acyclic.
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(1, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::identity(q(), 1));
        let c = GradedComplex::new(q(), dims, diffs).unwrap();
        assert!(c.is_acyclic());
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.inf_cohomology(), None);
    }

    #[test]
    fn cohomology_with_reps() {
        // 0 → k² →(d) k → 0, d = [1 0]: H^0 one-dimensional.
        let mut dims = BTreeMap::new();
        dims.insert(0, 2);
        dims.insert(1, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64_rows(q(), &[&[1, 0]]));
        let c = GradedComplex::new(q(), dims, diffs).unwrap();
        assert_eq!(c.cohomology_dim(0), 1);
        assert_eq!(c.cohomology_dim(1), 0);
        let slice = c.cohomology_at(0);
        assert_eq!(slice.dim(), 1);
        assert_eq!(c.inf_cohomology(), Some(0));
        assert_eq!(c.sup_cohomology(), Some(0));
    }

    #[test]
    fn two_routes_to_cohomology_agree() {
        // Rank-nullity count versus the explicit representative construction
        // on a random-ish complex: 0 → k³ → k² → k → 0.
        let mut dims = BTreeMap::new();
        dims.insert(0, 3);
        dims.insert(1, 2);
        dims.insert(2, 1);
        let mut diffs = BTreeMap::new();
        let d0 = Matrix::from_i64_rows(q(), &[&[1, 2, 3], &[2, 4, 6]]);
        let d1 = Matrix::from_i64_rows(q(), &[&[2, -1]]);
        diffs.insert(0, d0);
        diffs.insert(1, d1);
        let c = GradedComplex::new(q(), dims, diffs).unwrap();
        for deg in 0..=2 {
            assert_eq!(
                c.cohomology_dim(deg),
                c.cohomology_at(deg).dim(),
                "degree {deg}"
            );
        }
    }

    #[test]
    fn d_squared_enforced() {
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(1, 1);
        dims.insert(2, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::identity(q(), 1));
        diffs.insert(1, Matrix::identity(q(), 1));
        assert!(GradedComplex::new(q(), dims, diffs).is_err());
    }
}
