//! Exact linear algebra over any field whose elements know their own zero.
//!
//! Matrices are plain row-major `Vec<Vec<T>>`. Everything here is exact;
//! elimination picks the first nonzero pivot.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field operations needed by Gaussian elimination.
///
/// Number field elements carry their field, so the neutral elements are
/// obtained from an existing value instead of a static constructor.
pub trait Scalar: Clone + PartialEq {
    fn is_zero_s(&self) -> bool;
    fn add_s(&self, other: &Self) -> Self;
    fn sub_s(&self, other: &Self) -> Self;
    fn mul_s(&self, other: &Self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is nonzero.
    fn inv_s(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;

    fn neg_s(&self) -> Self {
        self.zero_like().sub_s(self)
    }
}

impl Scalar for BigRational {
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_s(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_s(&self, other: &Self) -> Self {
        self * other
    }
    fn inv_s(&self) -> Self {
        self.recip()
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub rows: Matrix<T>,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form.
pub fn rref<T: Scalar>(m: &Matrix<T>) -> Echelon<T> {
    let mut a = m.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero_s()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].inv_s();
        for c in col..ncols {
            a[row][c] = a[row][c].mul_s(&inv);
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero_s() {
                let f = a[r][col].clone();
                for c in col..ncols {
                    let t = f.mul_s(&a[row][c]);
                    a[r][c] = a[r][c].sub_s(&t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { rows: a, pivots }
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    rref(m).pivots.len()
}

/// Determinant by exact Gaussian elimination.
pub fn det<T: Scalar>(m: &Matrix<T>, one: &T) -> T {
    let n = m.len();
    if n == 0 {
        return one.clone();
    }
    let mut a = m.clone();
    let mut d = one.clone();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero_s()) else {
            return one.zero_like();
        };
        if p != col {
            a.swap(p, col);
            d = d.neg_s();
        }
        d = d.mul_s(&a[col][col]);
        let inv = a[col][col].inv_s();
        for r in col + 1..n {
            if a[r][col].is_zero_s() {
                continue;
            }
            let f = a[r][col].mul_s(&inv);
            for c in col..n {
                let t = f.mul_s(&a[col][c]);
                a[r][c] = a[r][c].sub_s(&t);
            }
        }
    }
    d
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<T: Scalar>(m: &Matrix<T>, one: &T) -> Option<Matrix<T>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let zero = one.zero_like();
    let mut aug: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let e = rref(&aug);
    if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    aug = e.rows;
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `m · x = rhs`. Returns one solution (free variables set to zero)
/// or `None` if the system is inconsistent.
pub fn solve<T: Scalar>(m: &Matrix<T>, rhs: &[T], zero: &T) -> Option<Vec<T>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let aug: Matrix<T> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let e = rref(&aug);
    if e.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![zero.clone(); ncols];
    for (i, &p) in e.pivots.iter().enumerate() {
        x[p] = e.rows[i][ncols].clone();
    }
    Some(x)
}

/// Basis of the right kernel `{x : m·x = 0}`.
pub fn kernel<T: Scalar>(m: &Matrix<T>, ncols: usize, one: &T) -> Vec<Vec<T>> {
    let e = rref(m);
    let zero = one.zero_like();
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); ncols];
            v[f] = one.clone();
            for (i, &p) in e.pivots.iter().enumerate() {
                v[p] = e.rows[i][f].neg_s();
            }
            v
        })
        .collect()
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, zero: &T) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    (0..inner).fold(zero.clone(), |acc, k| acc.add_s(&row[k].mul_s(&b[k][c])))
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(x·I − m)` of a rational matrix, lowest
/// degree first, via the Faddeev–LeVerrier recursion.
pub fn charpoly(m: &Matrix<BigRational>) -> Vec<BigRational> {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let identity = |s: &BigRational| -> Matrix<BigRational> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { s.clone() } else { BigRational::zero() }).collect())
            .collect()
    };
    let mut acc: Matrix<BigRational> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(m, &acc, &BigRational::zero());
        let shift = identity(&coeffs[n - k + 1]);
        for i in 0..n {
            for j in 0..n {
                next[i][j] = &next[i][j] + &shift[i][j];
            }
        }
        let am = mat_mul(m, &next, &BigRational::zero());
        let trace: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
        acc = next;
    }
    coeffs
}

/// Product of all denominators cleared: returns an integer vector
/// proportional to `v` with positive leading nonzero entry and content 1.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(BigInt::one(), |x| x.signum());
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = qm(&[&[2, 1], &[5, 3]]);
        assert_eq!(det(&m, &q(1)), q(1));
        let inv = inverse(&m, &q(1)).unwrap();
        assert_eq!(inv, qm(&[&[3, -1], &[-5, 2]]));
        assert!(inverse(&qm(&[&[1, 2], &[2, 4]]), &q(1)).is_none());
    }

    #[test]
    fn charpoly_of_companion() {
        // companion matrix of x^2 - 2
        let m = qm(&[&[0, 2], &[1, 0]]);
        assert_eq!(charpoly(&m), vec![q(-2), q(0), q(1)]);
    }

    #[test]
    fn kernel_and_solve() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m, 3, &q(1));
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigRational = (0..3).map(|i| &m[0][i] * &v[i]).sum();
            assert!(s.is_zero());
        }
        assert_eq!(solve(&m, &[q(1), q(2)], &q(0)), Some(vec![q(1), q(0), q(0)]));
        assert_eq!(solve(&m, &[q(1), q(3)], &q(0)), None);
    }
}
