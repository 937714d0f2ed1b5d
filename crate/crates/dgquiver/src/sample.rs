//! Deterministic sampling of perfect modules over two-dimensional algebras,
//! for property suites: random generator degrees and attaching matrices,
//! reproducible from a seed.

use std::sync::Arc;

use crate::dga::{Combination, DGAlgebra};
use crate::error::{Error, Result};
use crate::module::{DGModule, Side};
use crate::scalar::Scalar;

/// SplitMix64: small, deterministic, good enough for test data.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// A random perfect module over a two-dimensional algebra `k ⊕ k·x`:
/// semi-free on a few generators with random attaching coefficients (only
/// degree-aligned attachings are possible, matching minimality).  The result
/// is nonzero, perfect by construction, and validated.
pub fn random_perfect_module(algebra: &Arc<DGAlgebra>, seed: u64) -> Result<Arc<DGModule>> {
    let x = algebra.strand_generator().ok_or_else(|| {
        Error::InvalidArgument(
            "random perfect modules are sampled over two-dimensional algebras".into(),
        )
    })?;
    let field = algebra.field();
    let step = algebra.degree(x) - 1;
    let mut rng = SplitMix64::new(seed);

    let gens = 1 + rng.below(4) as usize;
    let degrees: Vec<i64> = (0..gens).map(|_| rng.int_in(-3, 3)).collect();
    let mut order: Vec<usize> = (0..gens).collect();
    order.sort_by_key(|&j| degrees[j]);
    let degrees: Vec<i64> = order.iter().map(|&j| degrees[j]).collect();

    // Attaching: e_j can hit x·e_l when deg(e_l) = deg(e_j) - step and l < j.
    let rdim = algebra.dim();
    let unit = algebra.unit();
    let mut basis = Vec::with_capacity(gens * rdim);
    for (j, d) in degrees.iter().enumerate() {
        for i in 0..rdim {
            basis.push((format!("{}·e{}", algebra.name(i), j), algebra.degree(i) + d));
        }
    }
    let mut diff: Vec<Combination> = vec![Vec::new(); gens * rdim];
    for j in 0..gens {
        let mut c: Combination = Vec::new();
        for l in 0..j {
            if degrees[l] == degrees[j] - step {
                let coeff = rng.int_in(-2, 2);
                if coeff != 0 {
                    c.push((l * rdim + x, Scalar::from_i64(field, coeff)));
                }
            }
        }
        diff[j * rdim + unit] = c;
    }
    let mut action: Vec<Vec<Combination>> = Vec::with_capacity(rdim);
    for q in 0..rdim {
        let mut row = Vec::with_capacity(gens * rdim);
        for j in 0..gens {
            for i in 0..rdim {
                let c: Combination = algebra
                    .mult(q, i)
                    .iter()
                    .map(|(k, s)| (j * rdim + k, s.clone()))
                    .collect();
                row.push(c);
            }
        }
        action.push(row);
    }
    Ok(Arc::new(DGModule::new(
        Arc::clone(algebra),
        Side::Left,
        basis,
        action,
        diff,
    )?))
}
