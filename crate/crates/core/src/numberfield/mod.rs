//! Exact arithmetic in number fields `K = Q[x]/(f)`.
//!
//! Elements are dense rational coordinate vectors in the power basis
//! `1, θ, …, θ^{d-1}` where `θ` is the class of `x`. Every element holds an
//! [`Arc`] to its field, so arithmetic never needs a separate context.

mod nfpoly;
mod splitting;
mod tower;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor;
use crate::linalg::{self, Matrix, Scalar};
use crate::poly::{rat, QPoly};

pub use nfpoly::NfPoly;
pub use splitting::{SplittingContainer, DEFAULT_MAX_SPLITTING_DEGREE};
pub use tower::{simple_extension, Embedding, Extension};

/// A number field given by a monic irreducible integer polynomial.
pub struct NumberField {
    min_poly: QPoly,
    degree: usize,
    /// Power-basis coordinates of `θ^{d+i}` for `i = 0..d-1`.
    reductions: Vec<Vec<BigRational>>,
    integral_basis: Vec<Vec<BigRational>>,
    maximal_order_known: bool,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.min_poly)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl Eq for NumberField {}

pub type FieldRef = Arc<NumberField>;

impl NumberField {
    /// Builds `Q[x]/(f)` from integer coefficients, lowest degree first.
    /// Irreducibility is checked by a complete factorization.
    pub fn new(coeffs: &[i64]) -> Result<FieldRef> {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_integer_coeffs(&big)
    }

    pub fn from_integer_coeffs(coeffs: &[BigInt]) -> Result<FieldRef> {
        let f = QPoly::from_bigints(coeffs);
        match f.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            _ => {}
        }
        if !f.is_monic() {
            return Err(Error::NonMonic);
        }
        let facs = factor::factor_rational(&f);
        if facs.len() > 1 || facs[0].1 > 1 {
            return Err(Error::ReducibleMinPoly { factor: facs[0].0.to_string() });
        }
        Ok(Self::new_unchecked(f))
    }

    /// Builds the field without the irreducibility check. The caller
    /// guarantees `f` is monic, integral and irreducible.
    pub(crate) fn new_unchecked(f: QPoly) -> FieldRef {
        let d = f.degree().expect("nonzero polynomial");
        // θ^d = −(f_0 + … + f_{d−1} θ^{d−1})
        let mut reductions = Vec::with_capacity(d);
        let mut cur: Vec<BigRational> = (0..d).map(|i| -f.coeff(i)).collect();
        for _ in 0..d {
            reductions.push(cur.clone());
            // multiply by θ
            let top = cur[d - 1].clone();
            let mut next = vec![BigRational::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] -= &top * f.coeff(i);
            }
            cur = next;
        }
        let (integral_basis, maximal_order_known) = integral_basis_for(&f);
        Arc::new(NumberField { min_poly: f, degree: d, reductions, integral_basis, maximal_order_known })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    /// Integer coefficients of the minimal polynomial, lowest degree first.
    pub fn min_poly_integers(&self) -> Vec<BigInt> {
        self.min_poly.coeffs().iter().map(|c| c.to_integer()).collect()
    }

    /// Z-basis used to enumerate algebraic integers. For quadratic fields
    /// `x² − D` with squarefree `D` this is the basis of the maximal order;
    /// otherwise it is the power basis (the equation order `Z[θ]`) unless
    /// the discriminant is squarefree.
    pub fn integral_basis(self: &Arc<Self>) -> Vec<Element> {
        self.integral_basis.iter().map(|c| self.element(c.clone())).collect()
    }

    /// Whether [`integral_basis`](Self::integral_basis) is known to span the maximal order.
    pub fn maximal_order_known(&self) -> bool {
        self.maximal_order_known
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<BigRational>) -> Element {
        assert_eq!(coeffs.len(), self.degree, "coordinate vector has wrong length");
        Element { field: Arc::clone(self), coeffs }
    }

    /// Element from (possibly shorter) integer power-basis coordinates.
    pub fn from_ints(self: &Arc<Self>, c: &[i64]) -> Element {
        let mut v: Vec<BigRational> = c.iter().map(|&x| rat(x)).collect();
        v.resize(self.degree, BigRational::zero());
        self.reduce_poly(&QPoly::new(v))
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> Element {
        let mut v = vec![BigRational::zero(); self.degree];
        v[0] = q;
        self.element(v)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> Element {
        self.from_rational(rat(n))
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        self.element(vec![BigRational::zero(); self.degree])
    }

    pub fn one(self: &Arc<Self>) -> Element {
        self.from_int(1)
    }

    /// The class `θ` of `x`.
    pub fn generator(self: &Arc<Self>) -> Element {
        self.reduce_poly(&QPoly::x())
    }

    /// Reduction of an arbitrary rational polynomial modulo `f`.
    pub fn reduce_poly(self: &Arc<Self>, p: &QPoly) -> Element {
        let d = self.degree;
        let mut out = vec![BigRational::zero(); d];
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < d {
                out[i] += c;
            } else {
                let r = self.power_coords(i);
                for (o, x) in out.iter_mut().zip(r) {
                    *o += c * x;
                }
            }
        }
        self.element(out)
    }

    /// Coordinates of θ^i for arbitrary i ≥ d.
    fn power_coords(&self, i: usize) -> Vec<BigRational> {
        let d = self.degree;
        if i < 2 * d {
            return self.reductions[i - d].clone();
        }
        let mut cur = self.reductions[d - 1].clone();
        for _ in 2 * d - 1..i {
            cur = self.times_theta(&cur);
        }
        cur
    }

    fn times_theta(&self, v: &[BigRational]) -> Vec<BigRational> {
        let d = self.degree;
        let top = v[d - 1].clone();
        let mut next = vec![BigRational::zero(); d];
        for i in (1..d).rev() {
            next[i] = v[i - 1].clone();
        }
        if !top.is_zero() {
            for (n, r) in next.iter_mut().zip(&self.reductions[0]) {
                *n += &top * r;
            }
        }
        next
    }

    /// Parses an element given as a list of rational power-basis coordinates.
    pub fn parse_element(self: &Arc<Self>, coords: &[BigRational]) -> Result<Element> {
        if coords.len() > self.degree {
            return Err(Error::InvalidInput(format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                self.degree
            )));
        }
        let mut v = coords.to_vec();
        v.resize(self.degree, BigRational::zero());
        Ok(self.element(v))
    }

    /// Primitive root of unity generating the torsion subgroup of `K*`,
    /// together with its order.
    pub fn torsion_generator(self: &Arc<Self>) -> (Element, u64) {
        let d = self.degree as u64;
        let mut best = (self.from_int(-1), 2u64);
        if d % 2 == 1 {
            return best;
        }
        let mut n = 3u64;
        while n <= 2 * d * d + 2 {
            if d % euler_phi(n) == 0 && n > best.1 {
                let cyclo = cyclotomic(n);
                if let Some(z) = NfPoly::from_rational_poly(self, &cyclo).roots().into_iter().next() {
                    best = (z, n);
                }
            }
            n += 1;
        }
        best
    }

    /// All roots of unity in the field, as powers `ζ^0, ζ^1, …` of the torsion generator.
    pub fn roots_of_unity(self: &Arc<Self>) -> Vec<Element> {
        let (z, w) = self.torsion_generator();
        let mut out = Vec::with_capacity(w as usize);
        let mut cur = self.one();
        for _ in 0..w {
            out.push(cur.clone());
            cur = &cur * &z;
        }
        out
    }
}

fn integral_basis_for(f: &QPoly) -> (Vec<Vec<BigRational>>, bool) {
    let d = f.degree().unwrap();
    let power: Vec<Vec<BigRational>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    if d == 2 {
        let b = f.coeff(1).to_integer();
        let c = f.coeff(0).to_integer();
        let disc: BigInt = &b * &b - BigInt::from(4) * &c;
        if b.is_zero() {
            let dd = -c;
            if is_squarefree(&dd) {
                if dd.mod_floor(&BigInt::from(4)) == BigInt::one() {
                    let half = BigRational::new(BigInt::one(), BigInt::from(2));
                    return (vec![power[0].clone(), vec![half.clone(), half]], true);
                }
                return (power, true);
            }
        }
        return (power, is_squarefree(&disc));
    }
    (power, false)
}

pub(crate) fn is_squarefree(n: &BigInt) -> bool {
    let n = n.abs();
    if n.is_zero() {
        return false;
    }
    let mut k = BigInt::from(2);
    while &k * &k <= n {
        if (&n % (&k * &k)).is_zero() {
            return false;
        }
        k += 1;
    }
    true
}

pub(crate) fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The n-th cyclotomic polynomial.
pub(crate) fn cyclotomic(n: u64) -> QPoly {
    let mut xn = vec![BigRational::zero(); n as usize + 1];
    xn[0] = rat(-1);
    xn[n as usize] = rat(1);
    let mut p = QPoly::new(xn);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_rem(&cyclotomic(d)).0;
        }
    }
    p
}

/// An element of a number field.
#[derive(Clone)]
pub struct Element {
    field: FieldRef,
    coeffs: Vec<BigRational>,
}

impl Element {
    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    /// The integer value if the element lies in Z.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    fn same_field(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check(&self, other: &Element) {
        assert!(self.same_field(other), "elements of different number fields combined");
    }

    pub fn scale(&self, q: &BigRational) -> Element {
        Element { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<Element> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.as_poly().xgcd(&self.field.min_poly);
        debug_assert_eq!(g, QPoly::one());
        Ok(self.field.reduce_poly(&s))
    }

    pub fn checked_div(&self, other: &Element) -> Result<Element> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        Ok(self * &other.inverse()?)
    }

    /// Integer power; negative exponents invert. Panics on `0^e` with `e < 0`.
    pub fn pow(&self, e: i64) -> Element {
        let base = if e < 0 { self.inverse().expect("zero raised to a negative power") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        result
    }

    /// Matrix of multiplication by `self` on the power basis; column j holds
    /// the coordinates of `self · θ^j`.
    pub fn mul_matrix(&self) -> Matrix<BigRational> {
        let d = self.field.degree;
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.coeffs.clone();
        for _ in 0..d {
            cols.push(cur.clone());
            cur = self.field.times_theta(&cur);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field norm `N_{K/Q}`, the determinant of the multiplication map.
    pub fn norm(&self) -> BigRational {
        linalg::det(&self.mul_matrix(), &BigRational::one())
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mul_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Characteristic polynomial of the multiplication map.
    pub fn charpoly(&self) -> QPoly {
        QPoly::new(linalg::charpoly(&self.mul_matrix()))
    }

    /// Monic minimal polynomial over Q: the squarefree part of the
    /// characteristic polynomial (which is a power of it).
    pub fn minpoly(&self) -> QPoly {
        self.charpoly().squarefree_part()
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minpoly().is_integral()
    }

    /// Unit of the ring of integers: integral with norm ±1.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.norm().abs().is_one() && self.is_algebraic_integer()
    }

    /// Least `n ≥ 1` with `self^n = 1`, searching only orders whose Euler
    /// totient is at most the field degree.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if self.is_zero() || !self.norm().abs().is_one() {
            return None;
        }
        if !self.is_algebraic_integer() {
            return None;
        }
        let d = self.field.degree as u64;
        let limit = 2 * d * d + 2;
        let mut cur = self.clone();
        for n in 1..=limit {
            if cur.is_one() {
                return (euler_phi(n) <= d).then_some(n);
            }
            cur = &cur * self;
        }
        None
    }

    /// Spelling used by callers that think of the test as a predicate.
    pub fn is_root_of_unity(&self) -> Option<u64> {
        self.root_of_unity_order()
    }

    /// Numerical images under every complex embedding, ordered like the
    /// complex roots returned by [`complex_roots`].
    pub fn complex_values(&self, roots: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let c: Vec<f64> = self.coeffs.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
        roots
            .iter()
            .map(|&(re, im)| {
                let (mut ar, mut ai) = (0.0, 0.0);
                for &ci in c.iter().rev() {
                    let nr = ar * re - ai * im + ci;
                    let ni = ar * im + ai * re;
                    ar = nr;
                    ai = ni;
                }
                (ar, ai)
            })
            .collect()
    }

    fn cmp_coeffs(&self, other: &Element) -> Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

/// Numerical complex roots of a polynomial (Aberth–Ehrlich iteration).
pub fn complex_roots(p: &QPoly) -> Vec<(f64, f64)> {
    let lead = p.lead().to_f64().unwrap();
    let c: Vec<f64> = p.coeffs().iter().map(|q| q.to_f64().unwrap() / lead).collect();
    crate::numeric::aberth(&c)
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coeffs == other.coeffs
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on power-basis coordinates; used only for
/// canonical, deterministic sorting.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_coeffs(other)
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        self.check(o);
        Element {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        self.check(o);
        Element {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.check(o);
        let d = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..d].to_vec();
        for k in d..2 * d - 1 {
            if prod[k].is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.field.reductions[k - d]) {
                *o += &prod[k] * r;
            }
        }
        Element { field: Arc::clone(&self.field), coeffs: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Element> for Element {
            type Output = Element;
            fn $m(self, o: Element) -> Element {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Element> for Element {
            type Output = Element;
            fn $m(self, o: &Element) -> Element {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Scalar for Element {
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
        self.inverse().expect("pivot is nonzero")
    }
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        write!(f, "{}", self.as_poly().display_with("a"))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
