//! Tensor products: over the ground field, and over the algebra.
//!
//! `A ⊗_R F` for a right module (or bimodule) `A` and a left module `F` is
//! the quotient of `A ⊗_k F` by the span of `a·r ⊗ m - a ⊗ r·m`, with
//! differential `d(a⊗f) = da⊗f + (-1)^{|a|} a⊗df`.  When `A` carries a left
//! action commuting with its right one, the quotient is again a left module;
//! otherwise it is a complex of vector spaces.  Applied to a semi-free `F`
//! this computes the derived tensor product.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::GradedComplex;
use crate::dga::{normalize, Combination, DGAlgebra};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::{DGModule, Side};
use crate::scalar::{FieldKind, Scalar};

/// `R` and `DR` carry commuting left and right actions; those are the only
/// bimodules the engine stores.
#[derive(Debug, Clone, PartialEq)]
pub struct DGBimodule {
    /// The underlying left module (basis, left action, differential).
    left: DGModule,
    /// `right_action[r][m] = m·r`.
    right_action: Vec<Vec<Combination>>,
}

impl DGBimodule {
    pub fn new(left: DGModule, right_action: Vec<Vec<Combination>>) -> Result<Self> {
        if left.side() != Side::Left {
            return Err(Error::SideMismatch {
                expected: Side::Left,
                got: left.side(),
            });
        }
        // Validate the right structure by building it as a module. Shares
        // basis and differential with the left one.
        let right = DGModule::new(
            Arc::clone(left.algebra()),
            Side::Right,
            (0..left.dim())
                .map(|i| (left.name(i).to_string(), left.degree(i)))
                .collect(),
            right_action.clone(),
            left.diff_table().clone(),
        )?;
        // The two actions must commute: (r·m)·s = r·(m·s).
        let alg = left.algebra();
        for r in 0..alg.dim() {
            for s in 0..alg.dim() {
                for m in 0..left.dim() {
                    let lr = right.act(s, &left.action_table()[r][m]);
                    let rl = left.act(r, &right.action_table()[s][m]);
                    if lr != rl {
                        return Err(Error::ModuleAxiom(format!(
                            "bimodule actions do not commute at ({}, {}, {})",
                            alg.name(r),
                            alg.name(s),
                            left.name(m)
                        )));
                    }
                }
            }
        }
        Ok(DGBimodule { left, right_action })
    }

    /// `R` as a bimodule over itself.
    pub fn regular(algebra: &Arc<DGAlgebra>) -> Self {
        let left = DGModule::regular(algebra, Side::Left);
        let right = DGModule::regular(algebra, Side::Right);
        DGBimodule::new(left, right.action_table().clone()).expect("regular bimodule is valid")
    }

    /// `DR = Hom_k(R, k)` with its two actions.
    pub fn dual_regular(algebra: &Arc<DGAlgebra>) -> Self {
        // Left action: dual of the right regular module.
        let left = DGModule::regular(algebra, Side::Right).dual();
        // Right action: dual of the left regular module.
        let right = DGModule::regular(algebra, Side::Left).dual();
        DGBimodule::new(left, right.action_table().clone()).expect("dual regular bimodule is valid")
    }

    pub fn as_left(&self) -> &DGModule {
        &self.left
    }

    /// Suspension of the bimodule: the left action picks up the usual twist,
    /// the right action is untwisted.
    pub fn suspend(&self, n: i64) -> DGBimodule {
        DGBimodule::new(self.left.suspend(n), self.right_action.clone())
            .expect("suspension of a bimodule is a bimodule")
    }

    /// The underlying right module.
    pub fn as_right(&self) -> DGModule {
        DGModule::new(
            Arc::clone(self.left.algebra()),
            Side::Right,
            (0..self.left.dim())
                .map(|i| (self.left.name(i).to_string(), self.left.degree(i)))
                .collect(),
            self.right_action.clone(),
            self.left.diff_table().clone(),
        )
        .expect("right structure was validated at construction")
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }
}

/// Tensor over the ground field of the underlying complexes.
pub fn tensor_k(a: &DGModule, b: &DGModule) -> GradedComplex {
    let field = a.field();
    let na = a.dim();
    let nb = b.dim();
    let degrees: Vec<i64> = (0..na * nb)
        .map(|t| a.degree(t / nb) + b.degree(t % nb))
        .collect();
    let mut diff: Vec<Combination> = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            let mut c: Combination = Vec::new();
            for (k, s) in a.diff_table()[i].iter() {
                c.push((k * nb + j, s.clone()));
            }
            let sign = Scalar::sign(field, a.degree(i));
            for (k, s) in b.diff_table()[j].iter() {
                c.push((i * nb + k, s.mul(&sign)));
            }
            diff.push(normalize(field, c));
        }
    }
    GradedComplex::from_basis_diff(field, &degrees, &diff)
}

/// The quotient data shared by both tensor flavours.
struct TensorQuotient {
    field: FieldKind,
    /// Degrees of the full tensor basis `(a_i, f_j) ↦ i·dim(F) + j`.
    degrees: Vec<i64>,
    /// Row-reduced relation rows, used to project onto the quotient.
    reduction: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    /// Free coordinates: the quotient basis, in tensor coordinates.
    free: Vec<usize>,
}

impl TensorQuotient {
    fn build(a_right: &DGModule, f: &DGModule) -> Result<Self> {
        if a_right.algebra() != f.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if a_right.side() != Side::Right {
            return Err(Error::SideMismatch {
                expected: Side::Right,
                got: a_right.side(),
            });
        }
        if f.side() != Side::Left {
            return Err(Error::SideMismatch {
                expected: Side::Left,
                got: f.side(),
            });
        }
        let field = a_right.field();
        let alg = a_right.algebra();
        let na = a_right.dim();
        let nf = f.dim();
        let total = na * nf;
        let degrees: Vec<i64> = (0..total)
            .map(|t| a_right.degree(t / nf) + f.degree(t % nf))
            .collect();

        // Relations a·r ⊗ m - a ⊗ r·m, for every basis triple (skip the unit,
        // whose relation is trivially zero).
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for r in 0..alg.dim() {
            if r == alg.unit() {
                continue;
            }
            for i in 0..na {
                for j in 0..nf {
                    let mut row = vec![Scalar::zero(field); total];
                    let mut nonzero = false;
                    for (k, s) in &a_right.action_table()[r][i] {
                        row[k * nf + j] = row[k * nf + j].add(s);
                        nonzero = true;
                    }
                    for (l, s) in &f.action_table()[r][j] {
                        row[i * nf + l] = row[i * nf + l].sub(s);
                        nonzero = true;
                    }
                    if nonzero && !row.iter().all(Scalar::is_zero) {
                        rows.push(row);
                    }
                }
            }
        }

        let (reduction, pivots) = if rows.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let m = Matrix::from_rows(field, rows);
            let (r, p) = m.rref();
            let rr: Vec<Vec<Scalar>> = (0..p.len()).map(|i| r.row(i)).collect();
            (rr, p)
        };
        let free: Vec<usize> = (0..total).filter(|t| !pivots.contains(t)).collect();
        Ok(TensorQuotient {
            field,
            degrees,
            reduction,
            pivots,
            free,
        })
    }

    /// Project a tensor-coordinate vector to quotient coordinates.
    fn project(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &p) in self.reduction.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&c.mul(r));
                }
            }
        }
        self.free.iter().map(|&t| v[t].clone()).collect()
    }

    fn project_comb(&self, c: &Combination, total: usize) -> Combination {
        let mut v = vec![Scalar::zero(self.field); total];
        for (t, s) in c {
            v[*t] = v[*t].add(s);
        }
        let q = self.project(v);
        q.into_iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }
}

fn tensor_diff_comb(a: &DGModule, f: &DGModule, i: usize, j: usize) -> Combination {
    let field = a.field();
    let nf = f.dim();
    let mut c: Combination = Vec::new();
    for (k, s) in &a.diff_table()[i] {
        c.push((k * nf + j, s.clone()));
    }
    let sign = Scalar::sign(field, a.degree(i));
    for (l, s) in &f.diff_table()[j] {
        c.push((i * nf + l, s.mul(&sign)));
    }
    normalize(field, c)
}

/// `A ⊗_R F` for a plain right module: a complex of vector spaces.
pub fn tensor_over_algebra(a_right: &DGModule, f: &DGModule) -> Result<GradedComplex> {
    let q = TensorQuotient::build(a_right, f)?;
    let total = a_right.dim() * f.dim();
    let nf = f.dim();
    let degrees: Vec<i64> = q.free.iter().map(|&t| q.degrees[t]).collect();
    let mut diff: Vec<Combination> = Vec::with_capacity(q.free.len());
    for &t in &q.free {
        let (i, j) = (t / nf, t % nf);
        diff.push(q.project_comb(&tensor_diff_comb(a_right, f, i, j), total));
    }
    Ok(GradedComplex::from_basis_diff(q.field, &degrees, &diff))
}

/// `A ⊗_R F` for a bimodule: a left DG module via `r·(a⊗f) = (r·a)⊗f`.
pub fn tensor_bimodule(a: &DGBimodule, f: &DGModule) -> Result<DGModule> {
    let a_right = a.as_right();
    let q = TensorQuotient::build(&a_right, f)?;
    let total = a.dim() * f.dim();
    let nf = f.dim();
    let alg = Arc::clone(f.algebra());

    let basis: Vec<(String, i64)> = q
        .free
        .iter()
        .map(|&t| {
            let (i, j) = (t / nf, t % nf);
            (
                format!("{}⊗{}", a.as_left().name(i), f.name(j)),
                q.degrees[t],
            )
        })
        .collect();

    let mut diff: Vec<Combination> = Vec::with_capacity(q.free.len());
    for &t in &q.free {
        let (i, j) = (t / nf, t % nf);
        diff.push(q.project_comb(&tensor_diff_comb(&a_right, f, i, j), total));
    }

    let mut action: Vec<Vec<Combination>> = Vec::with_capacity(alg.dim());
    for r in 0..alg.dim() {
        let mut row = Vec::with_capacity(q.free.len());
        for &t in &q.free {
            let (i, j) = (t / nf, t % nf);
            let mut c: Combination = Vec::new();
            for (k, s) in &a.as_left().action_table()[r][i] {
                c.push((k * nf + j, s.clone()));
            }
            row.push(q.project_comb(&normalize(q.field, c), total));
        }
        action.push(row);
    }

    DGModule::new(alg, Side::Left, basis, action, diff)
}

/// Dimensions of the tensor quotient per degree, mostly for tests.
pub fn tensor_over_algebra_dims(a_right: &DGModule, f: &DGModule) -> Result<BTreeMap<i64, usize>> {
    Ok(tensor_over_algebra(a_right, f)?.dims().clone())
}
