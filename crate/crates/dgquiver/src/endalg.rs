//! Finite-dimensional associative algebras by structure constants.
//!
//! Used for endomorphism rings of perfect modules: radical computation via
//! the trace form (characteristic zero), minimal polynomials, and idempotent
//! search through rational spectral projectors.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{FieldKind, Scalar};

/// An algebra presented by a basis, a multiplication table in coordinates,
/// and the coordinates of the unit.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    field: FieldKind,
    dim: usize,
    /// `table[i][j]` = coordinates of `b_i · b_j`.
    table: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
}

impl FiniteAlgebra {
    pub fn new(field: FieldKind, table: Vec<Vec<Vec<Scalar>>>, unit: Vec<Scalar>) -> Result<Self> {
        let dim = table.len();
        if table
            .iter()
            .any(|row| row.len() != dim || row.iter().any(|c| c.len() != dim))
            || unit.len() != dim
        {
            return Err(Error::DimensionMismatch(
                "algebra table is not square".into(),
            ));
        }
        Ok(FiniteAlgebra {
            field,
            dim,
            table,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(self.field); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].add(&c.mul(t));
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x` in the regular representation.
    pub fn left_mult(&self, x: &[Scalar]) -> Matrix {
        Matrix::from_fn(self.field, self.dim, self.dim, |k, j| {
            let mut acc = Scalar::zero(self.field);
            for (i, xi) in x.iter().enumerate() {
                if !xi.is_zero() && !self.table[i][j][k].is_zero() {
                    acc = acc.add(&xi.mul(&self.table[i][j][k]));
                }
            }
            acc
        })
    }

    fn trace(m: &Matrix) -> Scalar {
        let mut t = Scalar::zero(m.field());
        for i in 0..m.rows() {
            t = t.add(m.at(i, i));
        }
        t
    }

    /// Columns spanning the Jacobson radical.  Characteristic zero only:
    /// the radical is the kernel of `x ↦ (y ↦ tr(L_{xy}))`.
    pub fn radical(&self) -> Result<Matrix> {
        if !self.field.is_char_zero() {
            return Err(Error::CharZeroRequired(self.field.tag()));
        }
        let lefts: Vec<Matrix> = (0..self.dim)
            .map(|i| {
                let mut e = vec![Scalar::zero(self.field); self.dim];
                e[i] = Scalar::one(self.field);
                self.left_mult(&e)
            })
            .collect();
        // Gram matrix G_{ij} = tr(L_i L_j); radical = kernel of G.
        let gram = Matrix::from_fn(self.field, self.dim, self.dim, |i, j| {
            Self::trace(&lefts[i].mul(&lefts[j]))
        });
        Ok(gram.kernel_basis())
    }

    /// Dimension of the semisimple quotient `A / rad A`.
    pub fn semisimple_dim(&self) -> Result<usize> {
        Ok(self.dim - self.radical()?.rank())
    }

    /// Monic minimal polynomial of `x`, low degree first:
    /// `m(t) = t^k + c_{k-1} t^{k-1} + … + c_0` returned as `[c_0, …, c_{k-1}, 1]`.
    pub fn min_poly(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut powers: Vec<Vec<Scalar>> = Vec::new();
        powers.push(self.unit.clone());
        loop {
            // Is the last power dependent on the earlier ones?
            let k = powers.len();
            let m = Matrix::from_fn(self.field, self.dim, k - 1, |i, j| powers[j][i].clone());
            let target = powers[k - 1].clone();
            if k > 1 {
                if let Ok(Some(sol)) = m.solve(&target) {
                    let mut coeffs: Vec<Scalar> = sol.iter().map(|c| c.neg()).collect();
                    coeffs.push(Scalar::one(self.field));
                    return coeffs;
                }
            }
            let next = self.mul(powers.last().unwrap(), x);
            powers.push(next);
            assert!(
                powers.len() <= self.dim + 2,
                "minimal polynomial search ran away"
            );
        }
    }

    /// Evaluate a polynomial (coefficients low-to-high) at `x`.
    pub fn eval_poly(&self, coeffs: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        let mut acc = vec![Scalar::zero(self.field); self.dim];
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            if !c.is_zero() {
                for (a, u) in acc.iter_mut().zip(&self.unit) {
                    *a = a.add(&c.mul(u));
                }
            }
        }
        acc
    }

    pub fn is_idempotent(&self, x: &[Scalar]) -> bool {
        self.mul(x, x) == x.to_vec()
    }

    fn is_zero_vec(x: &[Scalar]) -> bool {
        x.iter().all(Scalar::is_zero)
    }

    /// Search for an idempotent different from 0 and 1.
    ///
    /// Candidates are basis vectors, pairwise sums/differences/products and a
    /// deterministic sequence of small pseudo-random combinations.  For each
    /// candidate the minimal polynomial is split at a rational root and the
    /// corresponding spectral projector is evaluated — a polynomial in the
    /// candidate, hence exactly idempotent when the split is coprime.
    pub fn find_idempotent(&self) -> Result<Option<Vec<Scalar>>> {
        if !self.field.is_char_zero() {
            return Err(Error::CharZeroRequired(self.field.tag()));
        }
        let mut candidates: Vec<Vec<Scalar>> = Vec::new();
        let basis: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|i| {
                let mut e = vec![Scalar::zero(self.field); self.dim];
                e[i] = Scalar::one(self.field);
                e
            })
            .collect();
        candidates.extend(basis.iter().cloned());
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let sum: Vec<Scalar> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a.add(b))
                    .collect();
                let dif: Vec<Scalar> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a.sub(b))
                    .collect();
                candidates.push(sum);
                candidates.push(dif);
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    candidates.push(self.mul(&basis[i], &basis[j]));
                }
            }
        }
        // Deterministic pseudo-random small combinations.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        for _ in 0..48 {
            let v: Vec<Scalar> = (0..self.dim)
                .map(|_| Scalar::from_i64(self.field, (next() % 7) as i64 - 3))
                .collect();
            candidates.push(v);
        }

        for cand in candidates {
            if Self::is_zero_vec(&cand) {
                continue;
            }
            if let Some(e) = self.spectral_idempotent(&cand) {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    /// Split the minimal polynomial of `x` at a rational root and return a
    /// nontrivial spectral projector, when one exists.
    fn spectral_idempotent(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let m = self.min_poly(x);
        if m.len() <= 2 {
            return None; // degree ≤ 1: scalar element
        }
        for root in rational_roots(&m) {
            // m = (t - λ)^a · g with g(λ) ≠ 0.
            let lin = vec![root.neg(), Scalar::one(self.field)];
            let mut g = m.clone();
            let mut factor = vec![Scalar::one(self.field)];
            loop {
                let (q, r) = poly_divmod(&g, &lin);
                if !r.iter().all(Scalar::is_zero) {
                    break;
                }
                g = q;
                factor = poly_mul(&factor, &lin);
            }
            if g.len() <= 1 {
                continue; // primary: m = (t - λ)^a, no split
            }
            // Bezout: u·(t-λ)^a + v·g = 1; e := (v·g)(x).
            let (gcd, _u, v) = poly_ext_gcd(&factor, &g);
            if gcd.len() != 1 {
                continue;
            }
            let scale = gcd[0]
                .inv()
                .expect("gcd of coprime polys is a nonzero constant");
            let vg = poly_mul(&poly_scale(&v, &scale), &g);
            let e = self.eval_poly(&vg, x);
            if Self::is_zero_vec(&e) || e == self.unit {
                continue;
            }
            debug_assert!(self.is_idempotent(&e));
            return Some(e);
        }
        None
    }
}

// --- dense polynomial helpers over a field (coefficients low-to-high) ---

pub fn poly_trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.len() > 1 && p.last().map_or(false, Scalar::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let field = a[0].kind();
    let mut out = vec![Scalar::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    poly_trim(out)
}

pub fn poly_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    poly_trim(a.iter().map(|x| x.mul(c)).collect())
}

pub fn poly_divmod(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let field = b.last().expect("nonzero divisor").kind();
    let mut rem: Vec<Scalar> = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db]
        .inv()
        .expect("divisor has nonzero leading coefficient");
    if rem.len() <= db {
        return (vec![Scalar::zero(field)], poly_trim(rem));
    }
    let mut quot = vec![Scalar::zero(field); rem.len() - db];
    while rem.len() > db && !(rem.len() == 1 && rem[0].is_zero()) {
        let dr = rem.len() - 1;
        let c = rem[dr].mul(&lead);
        if !c.is_zero() {
            quot[dr - db] = quot[dr - db].add(&c);
            for i in 0..=db {
                rem[dr - db + i] = rem[dr - db + i].sub(&c.mul(&b[i]));
            }
        }
        rem.pop();
        rem = poly_trim(rem);
        if rem.iter().all(Scalar::is_zero) {
            break;
        }
    }
    (poly_trim(quot), poly_trim(rem))
}

/// Extended Euclid: returns `(gcd, u, v)` with `u·a + v·b = gcd`.
pub fn poly_ext_gcd(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
    let field = a
        .iter()
        .chain(b.iter())
        .next()
        .map(Scalar::kind)
        .expect("nonempty polynomials");
    let zero = || vec![Scalar::zero(field)];
    let one = || vec![Scalar::one(field)];
    let is_zero = |p: &[Scalar]| p.iter().all(Scalar::is_zero);

    let (mut r0, mut r1) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while !is_zero(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let new_s = poly_sub(&s0, &poly_mul(&q, &s1));
        let new_t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    (r0, s0, t0)
}

pub fn poly_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let field = a
        .iter()
        .chain(b.iter())
        .next()
        .map(Scalar::kind)
        .expect("nonempty polynomials");
    let n = a.len().max(b.len());
    let mut out = vec![Scalar::zero(field); n];
    for (i, x) in a.iter().enumerate() {
        out[i] = out[i].add(x);
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = out[i].sub(y);
    }
    poly_trim(out)
}

/// Rational roots of a rational-coefficient polynomial, by the rational root
/// theorem on the integer-cleared form.  Returns distinct roots.
pub fn rational_roots(p: &[Scalar]) -> Vec<Scalar> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    let p = poly_trim(p.to_vec());
    if p.len() <= 1 {
        return vec![];
    }
    let rats: Vec<BigRational> = p
        .iter()
        .map(|s| match s {
            Scalar::Rational(r) => r.clone(),
            _ => panic!("rational_roots needs rational coefficients"),
        })
        .collect();
    // Clear denominators.
    let mut denom_lcm = BigInt::one();
    for r in &rats {
        let d = r.denom();
        let g = num_integer::gcd(denom_lcm.clone(), d.clone());
        denom_lcm = denom_lcm / g * d;
    }
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from(denom_lcm.clone())).to_integer())
        .collect();

    let eval = |root: &BigRational| -> bool {
        let mut acc = BigRational::zero();
        for c in ints.iter().rev() {
            acc = acc * root + BigRational::from(c.clone());
        }
        acc.is_zero()
    };

    let mut roots: Vec<BigRational> = Vec::new();
    let mut push = |r: BigRational| {
        if eval(&r) && !roots.contains(&r) {
            roots.push(r);
        }
    };
    push(BigRational::zero());
    // Leading and trailing nonzero coefficients.
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
    let trail = ints
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap_or_else(BigInt::one);
    let small_divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let n = n.abs();
        if n.is_zero() {
            return out;
        }
        // Enumerate divisors when the value is small enough; otherwise fall
        // back to divisors up to a bound (candidates are verified anyway).
        if let Ok(v) = i64::try_from(n.clone()) {
            let mut d = 1i64;
            while (d as i128) * (d as i128) <= v as i128 {
                if v % d == 0 {
                    out.push(BigInt::from(d));
                    out.push(BigInt::from(v / d));
                }
                d += 1;
            }
        } else {
            for d in 1..=64i64 {
                out.push(BigInt::from(d));
            }
        }
        out
    };
    for p in small_divisors(&trail) {
        for q in small_divisors(&lead) {
            let r = BigRational::new(p.clone(), q.clone());
            push(r.clone());
            push(-r);
        }
    }
    roots.into_iter().map(Scalar::Rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldKind {
        FieldKind::Rational
    }

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(q(), v)
    }

    /// k × k as structure constants.
    fn product_of_two_fields() -> FiniteAlgebra {
        let e = |i: usize| {
            let mut v = vec![s(0), s(0)];
            v[i] = s(1);
            v
        };
        let table = vec![vec![e(0), vec![s(0), s(0)]], vec![vec![s(0), s(0)], e(1)]];
        FiniteAlgebra::new(q(), table, vec![s(1), s(1)]).unwrap()
    }

    /// k[ε]/ε²: local with one-dimensional radical.
    fn dual_numbers() -> FiniteAlgebra {
        let table = vec![
            vec![vec![s(1), s(0)], vec![s(0), s(1)]],
            vec![vec![s(0), s(1)], vec![s(0), s(0)]],
        ];
        FiniteAlgebra::new(q(), table, vec![s(1), s(0)]).unwrap()
    }

    #[test]
    fn radical_of_dual_numbers() {
        let a = dual_numbers();
        let rad = a.radical().unwrap();
        assert_eq!(rad.rank(), 1);
        assert_eq!(a.semisimple_dim().unwrap(), 1);
        assert!(a.find_idempotent().unwrap().is_none());
    }

    #[test]
    fn split_product_of_fields() {
        let a = product_of_two_fields();
        assert_eq!(a.semisimple_dim().unwrap(), 2);
        let e = a.find_idempotent().unwrap().expect("k × k has idempotents");
        assert!(a.is_idempotent(&e));
        assert_ne!(e, a.unit().to_vec());
    }

    #[test]
    fn min_poly_of_idempotent() {
        let a = product_of_two_fields();
        // (1, 0) has minimal polynomial t² - t.
        let m = a.min_poly(&[s(1), s(0)]);
        assert_eq!(m, vec![s(0), s(-1), s(1)]);
    }

    #[test]
    fn poly_ext_gcd_bezout() {
        // (t-1) and (t-2) are coprime.
        let a = vec![s(-1), s(1)];
        let b = vec![s(-2), s(1)];
        let (g, u, v) = poly_ext_gcd(&a, &b);
        assert_eq!(g.len(), 1);
        let combo = poly_sub(&poly_mul(&u, &a), &poly_scale(&poly_mul(&v, &b), &s(-1)));
        assert_eq!(poly_trim(combo), vec![g[0].clone()]);
    }

    #[test]
    fn rational_roots_enumeration() {
        // 2t² - 3t + 1 = (2t - 1)(t - 1): roots 1/2 and 1.
        let p = vec![s(1), s(-3), s(2)];
        let mut roots: Vec<String> = rational_roots(&p)
            .iter()
            .map(|r| r.to_coeff_string())
            .collect();
        roots.sort();
        assert_eq!(roots, vec!["1", "1/2"]);
    }

    #[test]
    fn matrix_algebra_two_by_two_splits() {
        // Mat₂(k) by elementary matrices e11, e12, e21, e22.
        let mut table = vec![vec![vec![s(0); 4]; 4]; 4];
        // Index (i,j) ↦ 2i + j; e_{ij} e_{kl} = δ_{jk} e_{il}.
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        if j == k {
                            table[2 * i + j][2 * k + l][2 * i + l] = s(1);
                        }
                    }
                }
            }
        }
        let unit = vec![s(1), s(0), s(0), s(1)];
        let a = FiniteAlgebra::new(q(), table, unit).unwrap();
        assert_eq!(a.radical().unwrap().rank(), 0);
        let e = a
            .find_idempotent()
            .unwrap()
            .expect("matrix algebra has idempotents");
        assert!(a.is_idempotent(&e));
    }
}
