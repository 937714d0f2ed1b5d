//! Finite-dimensional cochain DG algebras.
//!
//! An algebra here is a graded basis, a structure-constant table and a
//! degree `+1` differential, over an exact field.  Validation enforces the
//! cochain conditions (nothing below degree zero, one-dimensional degree
//! zero spanned by the unit, nothing in degree one, finite total dimension)
//! together with the usual DGA axioms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldKind, Scalar};

/// Linear-combination rows: `b_i · b_j = Σ c · b_k` is stored as a list of
/// `(k, c)` pairs with nonzero `c`.
pub type Combination = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGAlgebra {
    field: FieldKind,
    names: Vec<String>,
    degrees: Vec<i64>,
    unit: usize,
    mult: Vec<Vec<Combination>>,
    diff: Vec<Combination>,
}

/// Unvalidated description of an algebra, as produced by a parser or built
/// by hand.  [`DGAlgebra::validate`] turns it into a usable algebra.
#[derive(Debug, Clone)]
pub struct DgaData {
    pub field: FieldKind,
    pub basis: Vec<(String, i64)>,
    pub unit: usize,
    pub mult: Vec<Vec<Combination>>,
    pub diff: Vec<Combination>,
}

pub(crate) fn normalize(field: FieldKind, mut c: Combination) -> Combination {
    c.retain(|(_, s)| !s.is_zero());
    c.sort_by_key(|(k, _)| *k);
    let mut out: Combination = Vec::new();
    for (k, s) in c {
        match out.last_mut() {
            Some((k0, s0)) if *k0 == k => *s0 = s0.add(&s),
            _ => out.push((k, s)),
        }
    }
    out.retain(|(_, s)| !s.is_zero());
    let _ = field;
    out
}

pub(crate) fn comb_add(field: FieldKind, a: &Combination, b: &Combination) -> Combination {
    let mut c = a.clone();
    c.extend(b.iter().cloned());
    normalize(field, c)
}

pub(crate) fn comb_scale(field: FieldKind, a: &Combination, s: &Scalar) -> Combination {
    normalize(field, a.iter().map(|(k, c)| (*k, c.mul(s))).collect())
}

impl DGAlgebra {
    /// Check every axiom of a raw description and return the algebra.
    ///
    /// Each violated axiom produces its own error naming a witness.
    pub fn validate(data: DgaData) -> Result<DGAlgebra> {
        let DgaData {
            field,
            basis,
            unit,
            mult,
            diff,
        } = data;
        let n = basis.len();
        if n == 0 {
            return Err(Error::AlgebraAxiom("empty basis".into()));
        }
        if unit >= n {
            return Err(Error::AlgebraAxiom(format!(
                "unit index {unit} out of range"
            )));
        }
        if mult.len() != n || mult.iter().any(|row| row.len() != n) || diff.len() != n {
            return Err(Error::AlgebraAxiom(
                "structure tables do not match basis size".into(),
            ));
        }
        let names: Vec<String> = basis.iter().map(|(s, _)| s.clone()).collect();
        let degrees: Vec<i64> = basis.iter().map(|(_, d)| *d).collect();

        for (i, &d) in degrees.iter().enumerate() {
            if d < 0 {
                return Err(Error::AlgebraAxiom(format!(
                    "negative degree: basis element {} has degree {d}",
                    names[i]
                )));
            }
            if d == 1 {
                return Err(Error::AlgebraAxiom(format!(
                    "R^1 != 0: basis element {} has degree 1",
                    names[i]
                )));
            }
        }
        let dim0 = degrees.iter().filter(|&&d| d == 0).count();
        if dim0 != 1 {
            return Err(Error::AlgebraAxiom(format!("dim R^0 = {dim0}, expected 1")));
        }
        if degrees[unit] != 0 {
            return Err(Error::AlgebraAxiom(format!(
                "unit {} must have degree 0, has degree {}",
                names[unit], degrees[unit]
            )));
        }

        let mult: Vec<Vec<Combination>> = mult
            .into_iter()
            .map(|row| row.into_iter().map(|c| normalize(field, c)).collect())
            .collect();
        let diff: Vec<Combination> = diff.into_iter().map(|c| normalize(field, c)).collect();

        // Degree compatibility of products and the differential.
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &mult[i][j] {
                    if degrees[*k] != degrees[i] + degrees[j] {
                        return Err(Error::AlgebraAxiom(format!(
                            "degree of product: {}·{} hits {} of degree {}, expected {}",
                            names[i],
                            names[j],
                            names[*k],
                            degrees[*k],
                            degrees[i] + degrees[j]
                        )));
                    }
                }
            }
            for (k, _) in &diff[i] {
                if degrees[*k] != degrees[i] + 1 {
                    return Err(Error::AlgebraAxiom(format!(
                        "differential degree: d({}) hits {} of degree {}, expected {}",
                        names[i],
                        names[*k],
                        degrees[*k],
                        degrees[i] + 1
                    )));
                }
            }
        }

        let alg = DGAlgebra {
            field,
            names,
            degrees,
            unit,
            mult,
            diff,
        };

        // Unitality.
        for i in 0..n {
            let one_i = vec![(i, Scalar::one(field))];
            if alg.mult[alg.unit][i] != one_i || alg.mult[i][alg.unit] != one_i {
                return Err(Error::AlgebraAxiom(format!(
                    "unit does not act as identity on {}",
                    alg.names[i]
                )));
            }
        }

        // Associativity at every basis triple.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = alg.mult_comb(&alg.mult[i][j], k);
                    let right = alg.comb_mult(i, &alg.mult[j][k]);
                    if left != right {
                        return Err(Error::AlgebraAxiom(format!(
                            "associativity fails at ({}, {}, {})",
                            alg.names[i], alg.names[j], alg.names[k]
                        )));
                    }
                }
            }
        }

        // d∘d = 0 at every basis element.
        for i in 0..n {
            if !alg.diff_comb(&alg.diff[i]).is_empty() {
                return Err(Error::AlgebraAxiom(format!("d² != 0 at {}", alg.names[i])));
            }
        }

        // Leibniz: d(ab) = d(a)b + (-1)^{|a|} a d(b) at every basis pair.
        for i in 0..n {
            for j in 0..n {
                let lhs = alg.diff_comb(&alg.mult[i][j]);
                let term1 = alg.mult_comb(&alg.diff[i], j);
                let term2 = comb_scale(
                    field,
                    &alg.comb_mult(i, &alg.diff[j]),
                    &Scalar::sign(field, alg.degrees[i]),
                );
                if lhs != comb_add(field, &term1, &term2) {
                    return Err(Error::AlgebraAxiom(format!(
                        "Leibniz fails at ({}, {})",
                        alg.names[i], alg.names[j]
                    )));
                }
            }
        }

        Ok(alg)
    }

    /// The formal cochain model of a `d`-sphere: basis `{1, x}` with
    /// `|x| = d`, `x² = 0`, zero differential.  Requires characteristic 0.
    pub fn sphere(d: i64, field: FieldKind) -> Result<Arc<DGAlgebra>> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "sphere dimension must be >= 2, got {d}"
            )));
        }
        if !field.is_char_zero() {
            return Err(Error::CharZeroRequired(field.tag()));
        }
        Ok(Arc::new(DGAlgebra::square_zero_unchecked(
            field,
            &[("x".into(), d)],
        )))
    }

    /// The ground field viewed as a DGA on the single basis element `1`.
    pub fn trivial(field: FieldKind) -> Arc<DGAlgebra> {
        Arc::new(DGAlgebra::square_zero_unchecked(field, &[]))
    }

    /// `k ⟨gens⟩ / (gens)²`: unit plus the listed generators, with every
    /// product of generators zero and zero differential.
    pub fn square_zero(field: FieldKind, gens: &[(String, i64)]) -> Result<Arc<DGAlgebra>> {
        let alg = DGAlgebra::square_zero_unchecked(field, gens);
        // Re-run validation so degree conditions on the generators are checked.
        DGAlgebra::validate(DgaData {
            field,
            basis: alg
                .names
                .iter()
                .cloned()
                .zip(alg.degrees.iter().cloned())
                .collect(),
            unit: alg.unit,
            mult: alg.mult.clone(),
            diff: alg.diff.clone(),
        })
        .map(Arc::new)
    }

    fn square_zero_unchecked(field: FieldKind, gens: &[(String, i64)]) -> DGAlgebra {
        let n = gens.len() + 1;
        let mut names = vec!["1".to_string()];
        let mut degrees = vec![0i64];
        for (name, d) in gens {
            names.push(name.clone());
            degrees.push(*d);
        }
        let mut mult = vec![vec![Vec::new(); n]; n];
        for (i, row) in mult.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if i == 0 {
                    *cell = vec![(j, Scalar::one(field))];
                } else if j == 0 {
                    *cell = vec![(i, Scalar::one(field))];
                }
            }
        }
        DGAlgebra {
            field,
            names,
            degrees,
            unit: 0,
            mult,
            diff: vec![Vec::new(); n],
        }
    }

    /// Opposite algebra: `r ·op s = (-1)^{|r||s|} s r`.
    pub fn opposite(&self) -> DGAlgebra {
        let n = self.dim();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for (i, row) in mult.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let sign = Scalar::sign(self.field, self.degrees[i] * self.degrees[j]);
                *cell = comb_scale(self.field, &self.mult[j][i], &sign);
            }
        }
        DGAlgebra {
            field: self.field,
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            unit: self.unit,
            mult,
            diff: self.diff.clone(),
        }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn top_degree(&self) -> i64 {
        *self.degrees.iter().max().expect("nonempty basis")
    }

    pub fn mult(&self, i: usize, j: usize) -> &Combination {
        &self.mult[i][j]
    }

    pub fn diff(&self, i: usize) -> &Combination {
        &self.diff[i]
    }

    /// Multiply a combination on the right by basis element `k`.
    pub fn mult_comb(&self, a: &Combination, k: usize) -> Combination {
        let mut out = Vec::new();
        for (i, c) in a {
            out.extend(comb_scale(self.field, &self.mult[*i][k], c));
        }
        normalize(self.field, out)
    }

    /// Multiply basis element `i` on the left into a combination.
    pub fn comb_mult(&self, i: usize, a: &Combination) -> Combination {
        let mut out = Vec::new();
        for (j, c) in a {
            out.extend(comb_scale(self.field, &self.mult[i][*j], c));
        }
        normalize(self.field, out)
    }

    pub fn diff_comb(&self, a: &Combination) -> Combination {
        let mut out = Vec::new();
        for (i, c) in a {
            out.extend(comb_scale(self.field, &self.diff[*i], c));
        }
        normalize(self.field, out)
    }

    /// Indices of basis elements in strictly positive degree (the maximal
    /// graded ideal `R^{≥1}`).
    pub fn augmentation_ideal(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] > 0).collect()
    }

    /// Two-dimensional algebras (unit plus one generator) get dedicated
    /// fast paths: their perfect modules are graded vector spaces with a
    /// single nilpotent degree-shifting operator.
    pub fn strand_generator(&self) -> Option<usize> {
        if self.dim() != 2 {
            return None;
        }
        let x = 1 - self.unit;
        Some(x)
    }

    /// The whole multiplication table as matrices: left multiplication by
    /// basis element `i` on the underlying vector space.
    pub fn left_mult_matrix(&self, i: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for j in 0..n {
            for (k, c) in &self.mult[i][j] {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    pub fn data(&self) -> DgaData {
        DgaData {
            field: self.field,
            basis: self
                .names
                .iter()
                .cloned()
                .zip(self.degrees.iter().cloned())
                .collect(),
            unit: self.unit,
            mult: self.mult.clone(),
            diff: self.diff.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_algebra_is_valid() {
        let k = DGAlgebra::trivial(FieldKind::Rational);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.top_degree(), 0);
        DGAlgebra::validate(k.data()).unwrap();
    }

    #[test]
    fn sphere_models() {
        for d in [2, 3, 5] {
            let r = DGAlgebra::sphere(d, FieldKind::Rational).unwrap();
            assert_eq!(r.dim(), 2);
            assert_eq!(r.degrees(), &[0, d]);
            // x² = 0 by construction.
            assert!(r.mult(1, 1).is_empty());
            DGAlgebra::validate(r.data()).unwrap();
        }
        assert!(DGAlgebra::sphere(1, FieldKind::Rational).is_err());
        assert!(DGAlgebra::sphere(2, FieldKind::Prime(7)).is_err());
    }

    #[test]
    fn degree_one_rejected() {
        let err = DGAlgebra::square_zero(FieldKind::Rational, &[("x".into(), 1)]).unwrap_err();
        assert!(err.to_string().contains("R^1 != 0"), "{err}");
    }

    #[test]
    fn negative_degree_rejected() {
        let err = DGAlgebra::square_zero(FieldKind::Rational, &[("x".into(), -2)]).unwrap_err();
        assert!(err.to_string().contains("negative degree"), "{err}");
    }

    #[test]
    fn opposite_is_involution() {
        let r = DGAlgebra::sphere(3, FieldKind::Rational).unwrap();
        let op = r.opposite();
        assert_eq!(op.opposite(), *r);
        // Sphere models are graded-commutative with an even or square-zero
        // generator, so the opposite is the algebra itself.
        assert_eq!(op, *r);
        DGAlgebra::validate(op.data()).unwrap();
    }

    #[test]
    fn mutated_axioms_are_each_caught() {
        let r = DGAlgebra::sphere(2, FieldKind::Rational).unwrap();

        // Break unitality.
        let mut data = r.data();
        data.mult[0][1] = vec![];
        assert!(
            matches!(DGAlgebra::validate(data), Err(Error::AlgebraAxiom(m)) if m.contains("unit"))
        );

        // Break degree compatibility.
        let mut data = r.data();
        data.mult[1][1] = vec![(0, Scalar::one(FieldKind::Rational))];
        assert!(
            matches!(DGAlgebra::validate(data), Err(Error::AlgebraAxiom(m)) if m.contains("degree of product"))
        );

        // Break the differential degree.
        let mut data = r.data();
        data.diff[0] = vec![(1, Scalar::one(FieldKind::Rational))];
        assert!(
            matches!(DGAlgebra::validate(data), Err(Error::AlgebraAxiom(m)) if m.contains("differential degree"))
        );

        // Two degree-zero elements.
        let mut data = r.data();
        data.basis[1].1 = 0;
        assert!(
            matches!(DGAlgebra::validate(data), Err(Error::AlgebraAxiom(m)) if m.contains("dim R^0"))
        );
    }

    #[test]
    fn associativity_and_leibniz_witnesses() {
        // Basis {1, x, y} with |x| = 2, |y| = 3, d(x) = y. Leibniz holds;
        // then corrupt the differential so d² != 0.
        let field = FieldKind::Rational;
        let mut data = DGAlgebra::square_zero(field, &[("x".into(), 2), ("y".into(), 3)])
            .unwrap()
            .data();
        data.diff[1] = vec![(2, Scalar::one(field))];
        DGAlgebra::validate(data.clone()).unwrap();

        data.diff[2] = vec![(1, Scalar::one(field))]; // wrong degree
        assert!(DGAlgebra::validate(data.clone()).is_err());
    }
}
