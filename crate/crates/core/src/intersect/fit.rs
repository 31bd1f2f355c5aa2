//! Fitting linear dependencies and affine lattices to witness data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Hit;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::multirec::ShiftedSublattice;
use crate::poly::rat;

/// `d · k_index = constant + Σ coeff_v k_v` with `d > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRelation {
    pub index: usize,
    pub denominator: i64,
    pub constant: i64,
    pub coeffs: Vec<(usize, i64)>,
}

impl AffineRelation {
    pub fn holds(&self, k: &[i64]) -> bool {
        self.denominator * k[self.index] == self.constant + self.coeffs.iter().map(|&(v, c)| c * k[v]).sum::<i64>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDependencyReport {
    /// `(index, value)` for coordinates constant over the witnesses.
    pub constant_components: Vec<(usize, i64)>,
    pub relations: Vec<AffineRelation>,
    pub free_indices: Vec<usize>,
    /// The absence of relations with coefficients in the box among the free
    /// indices was confirmed by enumeration (false when the box is too large).
    pub exhaustive_check: bool,
}

impl LinearDependencyReport {
    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> i64 {
        self.relations.iter().fold(1, |acc, r| acc.lcm(&r.denominator))
    }
}

const ENUMERATION_CAP: u64 = 1 << 20;

/// Constants and integer affine relations satisfied by every witness.
pub fn fit_linear_dependencies(ks: &[Vec<i64>], coeff_bound: i64) -> Result<LinearDependencyReport> {
    if ks.len() < 2 {
        return Err(Error::InsufficientWitnesses { needed: 2, got: ks.len() });
    }
    let s = ks[0].len();
    if ks.iter().any(|k| k.len() != s) {
        return Err(Error::ShapeMismatch("witnesses of different lengths".into()));
    }
    let k0 = &ks[0];
    let (constant, moving): (Vec<usize>, Vec<usize>) = (0..s).partition(|&v| ks.iter().all(|k| k[v] == k0[v]));
    let diffs: Matrix<BigRational> =
        ks[1..].iter().map(|k| moving.iter().map(|&v| rat(k[v] - k0[v])).collect()).collect();
    let e = linalg::rref(&diffs);
    let free_indices: Vec<usize> = e.pivots.iter().map(|&c| moving[c]).collect();
    let mut relations = Vec::new();
    for (c, &u) in moving.iter().enumerate() {
        if e.pivots.contains(&c) {
            continue;
        }
        // k_u − k0_u = Σ_r rows[r][c] (k_{p_r} − k0_{p_r})
        let coef: Vec<BigRational> = (0..e.pivots.len()).map(|r| e.rows[r][c].clone()).collect();
        let d = coef.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let dq = BigRational::from_integer(d.clone());
        let mut constant = &dq * rat(k0[u]);
        let mut coeffs = Vec::new();
        for (r, q) in coef.iter().enumerate() {
            let p = moving[e.pivots[r]];
            let a = q * &dq;
            constant -= &a * rat(k0[p]);
            if !a.is_zero() {
                coeffs.push((p, to_i64(&a)?));
            }
        }
        relations.push(AffineRelation { index: u, denominator: to_i64(&dq)?, constant: to_i64(&constant)?, coeffs });
    }
    let l = free_indices.len() as u32;
    let box_size = (2 * coeff_bound.max(0) as u64 + 1).checked_pow(l);
    let exhaustive_check =
        box_size.is_some_and(|b| b <= ENUMERATION_CAP) && !small_relation_exists(ks, &free_indices, coeff_bound);
    Ok(LinearDependencyReport {
        constant_components: constant.iter().map(|&v| (v, k0[v])).collect(),
        relations,
        free_indices,
        exhaustive_check,
    })
}

fn to_i64(q: &BigRational) -> Result<i64> {
    q.to_integer().to_i64().ok_or_else(|| Error::InvalidInput("relation coefficient exceeds 64 bits".into()))
}

/// Some `c ≠ 0` with `|c_v| ≤ bound` and `Σ c_v (k_v − k0_v) = 0` on all witnesses.
fn small_relation_exists(ks: &[Vec<i64>], free: &[usize], bound: i64) -> bool {
    let l = free.len();
    if l == 0 || bound <= 0 {
        return false;
    }
    let mut c = vec![-bound; l];
    loop {
        if c.iter().any(|&x| x != 0)
            && ks.iter().all(|k| free.iter().zip(&c).map(|(&v, &cv)| cv * (k[v] - ks[0][v])).sum::<i64>() == 0)
        {
            return true;
        }
        let mut i = l;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if c[i] < bound {
                c[i] += 1;
                break;
            }
            c[i] = -bound;
        }
    }
}

/// Integer `(A, b)` with `h = kA + b` on every point, or `None`. Under
/// degenerate geometry the offset is solved for first and free entries of
/// `A` are zero.
pub fn fit_affine_points(points: &[(Vec<i64>, Vec<i64>)]) -> Option<ShiftedSublattice> {
    let (k0, h0) = points.first()?;
    let (l, r) = (k0.len(), h0.len());
    let rows: Matrix<BigRational> = points
        .iter()
        .map(|(k, _)| std::iter::once(BigRational::one()).chain(k.iter().map(|&x| rat(x))).collect())
        .collect();
    let mut a = vec![vec![0i64; r]; l];
    let mut b = vec![0i64; r];
    for v in 0..r {
        let rhs: Vec<BigRational> = points.iter().map(|(_, h)| rat(h[v])).collect();
        let x = linalg::solve(&rows, &rhs, &BigRational::zero())?;
        if x.iter().any(|q| !q.is_integer()) {
            return None;
        }
        b[v] = x[0].to_integer().to_i64()?;
        for i in 0..l {
            a[i][v] = x[i + 1].to_integer().to_i64()?;
        }
    }
    ShiftedSublattice::new(a, b).ok()
}

/// [`fit_affine_points`] on the `(k, h)` pairs of the hits.
pub fn fit_affine_lattice(hits: &[Hit]) -> Option<ShiftedSublattice> {
    let pts: Vec<(Vec<i64>, Vec<i64>)> = hits.iter().map(|h| (h.k.clone(), h.h.clone())).collect();
    fit_affine_points(&pts)
}
