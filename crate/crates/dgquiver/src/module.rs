//! Finite-dimensional DG modules over a cochain DGA.
//!
//! A module is a graded basis with an action table and a degree `+1`
//! differential.  Left and right modules are distinguished by `side`; the
//! action table reads `action[r][m] = r·m` for left modules and `m·r` for
//! right ones.
//!
//! Sign conventions, fixed once for the whole crate:
//!
//! * suspension: `(Σⁿ M)^i = M^{i+n}`, `d_{ΣM} = -d_M`, left action twisted
//!   by `(-1)^{|r|}`, right action untwisted;
//! * dual: `(DM)^i = Hom_k(M^{-i}, k)` with `d(f) = -(-1)^{|f|} f∘d`; a left
//!   module dualises to a right one via `(f·r)(m) = f(r·m)` and a right one
//!   to a left one via `(r·f)(m) = (-1)^{|r|(|f|+|m|)} f(m·r)`;
//! * cone of a closed degree-0 map `φ: M → N`: underlying `ΣM ⊕ N`,
//!   `d(sm, n) = (-s(dm), φ(m) + dn)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::GradedComplex;
use crate::dga::{comb_add, comb_scale, normalize, Combination, DGAlgebra};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldKind, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DGModule {
    algebra: Arc<DGAlgebra>,
    side: Side,
    names: Vec<String>,
    degrees: Vec<i64>,
    /// `action[r][m]`: the product of algebra basis `r` with module basis
    /// `m`, on the side given by `self.side`.
    action: Vec<Vec<Combination>>,
    diff: Vec<Combination>,
}

impl DGModule {
    pub fn new(
        algebra: Arc<DGAlgebra>,
        side: Side,
        basis: Vec<(String, i64)>,
        action: Vec<Vec<Combination>>,
        diff: Vec<Combination>,
    ) -> Result<DGModule> {
        let field = algebra.field();
        let n = basis.len();
        if action.len() != algebra.dim()
            || action.iter().any(|row| row.len() != n)
            || diff.len() != n
        {
            return Err(Error::ModuleAxiom(
                "structure tables do not match basis size".into(),
            ));
        }
        let names = basis.iter().map(|(s, _)| s.clone()).collect();
        let degrees = basis.iter().map(|(_, d)| *d).collect();
        let action: Vec<Vec<Combination>> = action
            .into_iter()
            .map(|row| row.into_iter().map(|c| normalize(field, c)).collect())
            .collect();
        let diff: Vec<Combination> = diff.into_iter().map(|c| normalize(field, c)).collect();
        let m = DGModule {
            algebra,
            side,
            names,
            degrees,
            action,
            diff,
        };
        m.check_axioms()?;
        Ok(m)
    }

    /// Degree bookkeeping, unitality, associativity over R, `d² = 0`, and
    /// the Leibniz rule for the action.  One distinct error per axiom.
    pub fn validate(&self) -> Result<()> {
        self.check_axioms()
    }

    fn check_axioms(&self) -> Result<()> {
        let alg = &self.algebra;
        let field = alg.field();
        let n = self.dim();

        for r in 0..alg.dim() {
            for m in 0..n {
                for (k, _) in &self.action[r][m] {
                    if self.degrees[*k] != alg.degree(r) + self.degrees[m] {
                        return Err(Error::ModuleAxiom(format!(
                            "degree of action: {}·{} hits {} of degree {}, expected {}",
                            alg.name(r),
                            self.names[m],
                            self.names[*k],
                            self.degrees[*k],
                            alg.degree(r) + self.degrees[m]
                        )));
                    }
                }
            }
        }
        for m in 0..n {
            for (k, _) in &self.diff[m] {
                if self.degrees[*k] != self.degrees[m] + 1 {
                    return Err(Error::ModuleAxiom(format!(
                        "differential degree: d({}) hits {} of degree {}, expected {}",
                        self.names[m],
                        self.names[*k],
                        self.degrees[*k],
                        self.degrees[m] + 1
                    )));
                }
            }
        }

        let one = vec![(0usize, Scalar::one(field))];
        let _ = one;
        for m in 0..n {
            if self.action[alg.unit()][m] != vec![(m, Scalar::one(field))] {
                return Err(Error::ModuleAxiom(format!(
                    "unit does not act as identity on {}",
                    self.names[m]
                )));
            }
        }

        // Associativity over R.  For a left module: (r s)·m = r·(s·m).
        // For a right module the table stores m·r, and associativity reads
        // m·(r s) = (m·r)·s, i.e. action[rs][m] = action[s][action[r][m]].
        for r in 0..alg.dim() {
            for s in 0..alg.dim() {
                let rs = alg.mult(r, s);
                for m in 0..n {
                    let via_product = self.act_comb_alg(rs, m);
                    let stepwise = match self.side {
                        Side::Left => self.act(r, &self.action[s][m].clone()),
                        Side::Right => self.act(s, &self.action[r][m].clone()),
                    };
                    if via_product != stepwise {
                        return Err(Error::ModuleAxiom(format!(
                            "associativity of action fails at ({}, {}, {})",
                            alg.name(r),
                            alg.name(s),
                            self.names[m]
                        )));
                    }
                }
            }
        }

        for m in 0..n {
            if !self.diff_comb(&self.diff[m]).is_empty() {
                return Err(Error::ModuleAxiom(format!("d² != 0 at {}", self.names[m])));
            }
        }

        // Leibniz.  Left: d(r·m) = d(r)·m + (-1)^{|r|} r·d(m).
        // Right: d(m·r) = d(m)·r + (-1)^{|m|} m·d(r).
        for r in 0..alg.dim() {
            for m in 0..n {
                let lhs = self.diff_comb(&self.action[r][m]);
                let rhs = match self.side {
                    Side::Left => {
                        let t1 = self.act_comb_alg_on_basis(alg.diff(r), m);
                        let t2 = comb_scale(
                            field,
                            &self.act(r, &self.diff[m].clone()),
                            &Scalar::sign(field, alg.degree(r)),
                        );
                        comb_add(field, &t1, &t2)
                    }
                    Side::Right => {
                        let t1 = self.act(r, &self.diff[m].clone());
                        let t2 = comb_scale(
                            field,
                            &self.act_comb_alg_on_basis(alg.diff(r), m),
                            &Scalar::sign(field, self.degrees[m]),
                        );
                        comb_add(field, &t1, &t2)
                    }
                };
                if lhs != rhs {
                    return Err(Error::ModuleAxiom(format!(
                        "Leibniz fails at ({}, {})",
                        alg.name(r),
                        self.names[m]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Act by algebra basis element `r` on a module combination.
    pub fn act(&self, r: usize, c: &Combination) -> Combination {
        let field = self.field();
        let mut out = Vec::new();
        for (m, s) in c {
            out.extend(comb_scale(field, &self.action[r][*m], s));
        }
        normalize(field, out)
    }

    /// Act by an algebra combination on module basis element `m`.
    fn act_comb_alg(&self, rc: &Combination, m: usize) -> Combination {
        let field = self.field();
        let mut out = Vec::new();
        for (r, s) in rc {
            out.extend(comb_scale(field, &self.action[*r][m], s));
        }
        normalize(field, out)
    }

    fn act_comb_alg_on_basis(&self, rc: &Combination, m: usize) -> Combination {
        self.act_comb_alg(rc, m)
    }

    pub fn diff_comb(&self, c: &Combination) -> Combination {
        let field = self.field();
        let mut out = Vec::new();
        for (m, s) in c {
            out.extend(comb_scale(field, &self.diff[*m], s));
        }
        normalize(field, out)
    }

    pub fn algebra(&self) -> &Arc<DGAlgebra> {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn field(&self) -> FieldKind {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
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

    pub fn action_table(&self) -> &Vec<Vec<Combination>> {
        &self.action
    }

    pub fn diff_table(&self) -> &Vec<Combination> {
        &self.diff
    }

    /// Basis indices in each degree, in basis order (deterministic).
    pub fn basis_by_degree(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut map: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &d) in self.degrees.iter().enumerate() {
            map.entry(d).or_default().push(i);
        }
        map
    }

    /// The full differential as one `dim × dim` matrix: column `j` holds
    /// `d(b_j)` in basis coordinates.
    pub fn diff_matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field(), n, n);
        for (j, col) in self.diff.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    /// The action of algebra basis element `r` as a `dim × dim` matrix.
    pub fn action_matrix(&self, r: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field(), n, n);
        for (j, col) in self.action[r].iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    /// Forget the action: the underlying complex of vector spaces.
    pub fn complex(&self) -> GradedComplex {
        GradedComplex::from_basis_diff(self.field(), &self.degrees, &self.diff)
    }

    /// Per-degree cohomology dimensions.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.complex().cohomology_dims()
    }

    /// `inf { i | H^i != 0 }`; `None` for a module with vanishing cohomology.
    pub fn inf_cohomology(&self) -> Option<i64> {
        self.complex().inf_cohomology()
    }

    /// Total dimension of cohomology.
    pub fn total_cohomology(&self) -> usize {
        self.cohomology_dims().values().sum()
    }

    // ------------------------------------------------------------------
    // Constructions
    // ------------------------------------------------------------------

    /// The residue module `k = R/R^{≥1}`: one-dimensional in degree 0 with
    /// the positive-degree part acting as zero.
    pub fn residue(algebra: &Arc<DGAlgebra>, side: Side) -> DGModule {
        let field = algebra.field();
        let mut action = vec![vec![Vec::new()]; algebra.dim()];
        action[algebra.unit()][0] = vec![(0, Scalar::one(field))];
        DGModule {
            algebra: Arc::clone(algebra),
            side,
            names: vec!["k".into()],
            degrees: vec![0],
            action,
            diff: vec![Vec::new()],
        }
    }

    /// `R` as a module over itself.
    pub fn regular(algebra: &Arc<DGAlgebra>, side: Side) -> DGModule {
        let n = algebra.dim();
        let mut action = vec![vec![Vec::new(); n]; n];
        for (r, row) in action.iter_mut().enumerate() {
            for (m, cell) in row.iter_mut().enumerate() {
                *cell = match side {
                    Side::Left => algebra.mult(r, m).clone(),
                    Side::Right => algebra.mult(m, r).clone(),
                };
            }
        }
        DGModule {
            algebra: Arc::clone(algebra),
            side,
            names: (0..n).map(|i| algebra.name(i).to_string()).collect(),
            degrees: algebra.degrees().to_vec(),
            action,
            diff: (0..n).map(|i| algebra.diff(i).clone()).collect(),
        }
    }

    /// The zero module.
    pub fn zero(algebra: &Arc<DGAlgebra>, side: Side) -> DGModule {
        DGModule {
            algebra: Arc::clone(algebra),
            side,
            names: vec![],
            degrees: vec![],
            action: vec![vec![]; algebra.dim()],
            diff: vec![],
        }
    }

    /// Suspension `Σⁿ`: degrees drop by `n`, the differential picks up
    /// `(-1)ⁿ`, and for left modules the action of `r` picks up `(-1)^{n|r|}`.
    pub fn suspend(&self, n: i64) -> DGModule {
        let field = self.field();
        let dsign = Scalar::sign(field, n);
        let diff = self
            .diff
            .iter()
            .map(|c| comb_scale(field, c, &dsign))
            .collect();
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let s = match self.side {
                    Side::Left => Scalar::sign(field, n * self.algebra.degree(r)),
                    Side::Right => Scalar::one(field),
                };
                row.iter().map(|c| comb_scale(field, c, &s)).collect()
            })
            .collect();
        DGModule {
            algebra: Arc::clone(&self.algebra),
            side: self.side,
            names: self.names.clone(),
            degrees: self.degrees.iter().map(|d| d - n).collect(),
            action,
            diff,
        }
    }

    /// k-linear dual, flipping the side.
    pub fn dual(&self) -> DGModule {
        let field = self.field();
        let n = self.dim();
        let names = self.names.iter().map(|s| format!("{s}^")).collect();
        let degrees: Vec<i64> = self.degrees.iter().map(|d| -d).collect();

        // d(b_i^) = -(-1)^{|b_i|} Σ_j <d b_j, b_i> b_j^
        let mut diff = vec![Vec::new(); n];
        for (i, dual_d) in diff.iter_mut().enumerate() {
            let sgn = Scalar::sign(field, self.degrees[i]).neg();
            let mut out = Vec::new();
            for j in 0..n {
                for (k, c) in &self.diff[j] {
                    if *k == i {
                        out.push((j, c.mul(&sgn)));
                    }
                }
            }
            *dual_d = normalize(field, out);
        }

        let mut action = vec![vec![Vec::new(); n]; self.algebra.dim()];
        for r in 0..self.algebra.dim() {
            for i in 0..n {
                let mut out = Vec::new();
                match self.side {
                    // M left, DM right: (f·r)(m) = f(r·m).
                    Side::Left => {
                        for j in 0..n {
                            for (k, c) in &self.action[r][j] {
                                if *k == i {
                                    out.push((j, c.clone()));
                                }
                            }
                        }
                    }
                    // M right, DM left: (r·f)(m) = (-1)^{|r|(|f|+|m|)} f(m·r),
                    // which on basis functionals reduces to the sign (-1)^{|r|}.
                    Side::Right => {
                        let sgn = Scalar::sign(field, self.algebra.degree(r));
                        for j in 0..n {
                            for (k, c) in &self.action[r][j] {
                                if *k == i {
                                    out.push((j, c.mul(&sgn)));
                                }
                            }
                        }
                    }
                }
                action[r][i] = normalize(field, out);
            }
        }

        DGModule {
            algebra: Arc::clone(&self.algebra),
            side: self.side.flip(),
            names,
            degrees,
            action,
            diff,
        }
    }

    /// Direct sum; names are tagged to stay distinct.
    pub fn direct_sum(&self, other: &DGModule) -> Result<DGModule> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        if self.side != other.side {
            return Err(Error::SideMismatch {
                expected: self.side,
                got: other.side,
            });
        }
        let n1 = self.dim();
        let names = self
            .names
            .iter()
            .map(|s| format!("l.{s}"))
            .chain(other.names.iter().map(|s| format!("r.{s}")))
            .collect();
        let degrees = self
            .degrees
            .iter()
            .chain(other.degrees.iter())
            .cloned()
            .collect();
        let shift = |c: &Combination| -> Combination {
            c.iter().map(|(k, s)| (k + n1, s.clone())).collect()
        };
        let action = (0..self.algebra.dim())
            .map(|r| {
                self.action[r]
                    .iter()
                    .cloned()
                    .chain(other.action[r].iter().map(shift))
                    .collect()
            })
            .collect();
        let diff = self
            .diff
            .iter()
            .cloned()
            .chain(other.diff.iter().map(shift))
            .collect();
        Ok(DGModule {
            algebra: Arc::clone(&self.algebra),
            side: self.side,
            names,
            degrees,
            action,
            diff,
        })
    }

    /// A right module is the same thing as a left module over the opposite
    /// algebra, via `r ·op m = (-1)^{|r||m|} m·r`.  Used to route one-sided
    /// computations through the left-module machinery.
    pub fn as_left_over_opposite(&self, opposite: &Arc<DGAlgebra>) -> Result<DGModule> {
        if self.side != Side::Right {
            return Err(Error::SideMismatch {
                expected: Side::Right,
                got: self.side,
            });
        }
        let field = self.field();
        let action = (0..self.algebra.dim())
            .map(|r| {
                (0..self.dim())
                    .map(|m| {
                        let sgn = Scalar::sign(field, self.algebra.degree(r) * self.degrees[m]);
                        comb_scale(field, &self.action[r][m], &sgn)
                    })
                    .collect()
            })
            .collect();
        DGModule::new(
            Arc::clone(opposite),
            Side::Left,
            self.names
                .iter()
                .cloned()
                .zip(self.degrees.iter().cloned())
                .collect(),
            action,
            self.diff.clone(),
        )
    }

    /// Dual of the dual, sharing the side of the original.
    pub fn double_dual(&self) -> DGModule {
        self.dual().dual()
    }

    /// Restrict basis to a sub-list (must be closed under differential and
    /// action; callers are responsible, the constructor re-validates).
    pub fn submodule_on(&self, keep: &[usize]) -> Result<DGModule> {
        let field = self.field();
        let pos: BTreeMap<usize, usize> = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let remap = |c: &Combination| -> Result<Combination> {
            let mut out = Vec::new();
            for (k, s) in c {
                match pos.get(k) {
                    Some(&nk) => out.push((nk, s.clone())),
                    None => {
                        return Err(Error::ModuleAxiom(
                            "subset is not closed under structure maps".into(),
                        ))
                    }
                }
            }
            Ok(normalize(field, out))
        };
        let basis = keep
            .iter()
            .map(|&i| (self.names[i].clone(), self.degrees[i]))
            .collect();
        let mut action = Vec::with_capacity(self.algebra.dim());
        for r in 0..self.algebra.dim() {
            let mut row = Vec::with_capacity(keep.len());
            for &m in keep {
                row.push(remap(&self.action[r][m])?);
            }
            action.push(row);
        }
        let mut diff = Vec::with_capacity(keep.len());
        for &m in keep {
            diff.push(remap(&self.diff[m])?);
        }
        DGModule::new(Arc::clone(&self.algebra), self.side, basis, action, diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(d: i64) -> Arc<DGAlgebra> {
        DGAlgebra::sphere(d, FieldKind::Rational).unwrap()
    }

    #[test]
    fn residue_module_shape() {
        let r = sphere(2);
        for side in [Side::Left, Side::Right] {
            let k = DGModule::residue(&r, side);
            assert_eq!(k.dim(), 1);
            assert_eq!(k.degree(0), 0);
            // x acts as zero, the unit as the identity.
            assert!(k.action_table()[1][0].is_empty());
            assert_eq!(
                k.action_table()[0][0],
                vec![(0, Scalar::one(FieldKind::Rational))]
            );
            k.check_axioms().unwrap();
        }
    }

    #[test]
    fn regular_module_is_valid_both_sides() {
        for d in [2, 3] {
            let r = sphere(d);
            DGModule::regular(&r, Side::Left).check_axioms().unwrap();
            DGModule::regular(&r, Side::Right).check_axioms().unwrap();
        }
    }

    #[test]
    fn suspension_composes_and_validates() {
        let r = sphere(3);
        let m = DGModule::regular(&r, Side::Left);
        let s = m.suspend(2).suspend(-5);
        let direct = m.suspend(-3);
        assert_eq!(s.degrees(), direct.degrees());
        assert_eq!(s.action_table(), direct.action_table());
        s.check_axioms().unwrap();
        assert_eq!(m.suspend(0), m);
        // Σ k sits in degree -1.
        let k = DGModule::residue(&r, Side::Left);
        assert_eq!(k.suspend(1).degree(0), -1);
    }

    #[test]
    fn suspension_shifts_cohomology() {
        let r = sphere(2);
        let m = DGModule::regular(&r, Side::Left);
        let h = m.cohomology_dims();
        let hs = m.suspend(4).cohomology_dims();
        for (deg, dim) in h {
            assert_eq!(hs.get(&(deg - 4)), Some(&dim));
        }
    }

    #[test]
    fn dual_of_residue_is_residue() {
        let r = sphere(2);
        let k = DGModule::residue(&r, Side::Left);
        let dk = k.dual();
        assert_eq!(dk.side(), Side::Right);
        assert_eq!(dk.dim(), 1);
        assert_eq!(dk.degree(0), 0);
        dk.check_axioms().unwrap();
    }

    #[test]
    fn dual_of_regular_has_reflected_degrees() {
        for d in [2, 3] {
            let r = sphere(d);
            let dr = DGModule::regular(&r, Side::Right).dual();
            assert_eq!(dr.side(), Side::Left);
            let mut degs = dr.degrees().to_vec();
            degs.sort();
            assert_eq!(degs, vec![-d, 0]);
            dr.check_axioms().unwrap();
        }
    }

    #[test]
    fn double_dual_is_isomorphic_degreewise() {
        let r = sphere(2);
        let m = DGModule::regular(&r, Side::Left).suspend(1);
        let dd = m.dual().dual();
        assert_eq!(dd.side(), m.side());
        let mut a = m.degrees().to_vec();
        let mut b = dd.degrees().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(dd.cohomology_dims(), m.cohomology_dims());
        dd.check_axioms().unwrap();
    }

    #[test]
    fn right_module_as_left_over_opposite() {
        let r = sphere(3);
        let op = Arc::new(r.opposite());
        let m = DGModule::regular(&r, Side::Right);
        let left = m.as_left_over_opposite(&op).unwrap();
        assert_eq!(left.side(), Side::Left);
        assert_eq!(left.cohomology_dims(), m.cohomology_dims());
    }

    #[test]
    fn direct_sum_dims_add() {
        let r = sphere(2);
        let a = DGModule::regular(&r, Side::Left);
        let b = a.suspend(1);
        let sum = a.direct_sum(&b).unwrap();
        assert_eq!(sum.dim(), a.dim() + b.dim());
        sum.check_axioms().unwrap();
        let mut h: Vec<usize> = sum.cohomology_dims().values().cloned().collect();
        h.sort();
        assert_eq!(
            h.iter().sum::<usize>(),
            a.total_cohomology() + b.total_cohomology()
        );
    }

    #[test]
    fn zero_module_is_legal() {
        let r = sphere(2);
        let z = DGModule::zero(&r, Side::Left);
        assert!(z.is_zero());
        assert_eq!(z.inf_cohomology(), None);
        z.check_axioms().unwrap();
    }
}

/// The evaluation map `M → DDM`, `ev(m)(f) = (-1)^{|m||f|} f(m)`: on basis
/// elements the diagonal with entries `(-1)^{|m_i|}`.  A natural strict
/// isomorphism; constructing it revalidates closedness and linearity.
pub fn double_dual_map(m: &Arc<DGModule>) -> Result<crate::morphism::DGMorphism> {
    let field = m.field();
    let dd = Arc::new(m.double_dual());
    let mut mat = Matrix::zero(field, dd.dim(), m.dim());
    for i in 0..m.dim() {
        mat.set(i, i, Scalar::sign(field, m.degree(i)));
    }
    crate::morphism::DGMorphism::new(Arc::clone(m), dd, 0, mat)
}
