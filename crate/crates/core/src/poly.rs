//! Dense univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial over Q, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division, `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let f = &r[i] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &f * dc;
                r[i - dd + j] -= t;
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = r1;
            r1 = r;
            let s2 = &s0 - &(&q * &s1);
            s0 = s1;
            s1 = s2;
            let t2 = &t0 - &(&q * &t1);
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &QPoly) -> QPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, c| &(&acc * other) + &QPoly::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| &acc * self)
    }

    /// Integer primitive part: the unique integer polynomial with content 1
    /// and positive leading coefficient that is a rational multiple of `self`.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        let v = crate::linalg::primitive_integer_vector(&self.coeffs);
        if v.last().is_some_and(|c| c.is_negative()) {
            v.into_iter().map(|c| -c).collect()
        } else {
            v
        }
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
        let n = xs.len();
        let mut dd: Vec<BigRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut result = QPoly::constant(dd[n - 1].clone());
        for i in (0..n - 1).rev() {
            let lin = QPoly::new(vec![-xs[i].clone(), BigRational::one()]);
            result = &(&result * &lin) + &QPoly::constant(dd[i].clone());
        }
        result
    }

    /// Content-free denominator: least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl QPoly {
    /// Renders the polynomial with `var` as the indeterminate.
    pub fn display_with(&self, var: &str) -> String {
        let mut out = String::new();
        self.write_with(&mut out, var).expect("writing to a String cannot fail");
        out
    }

    fn write_with(&self, f: &mut impl fmt::Write, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{var}")?,
                _ => write!(f, "{var}^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, "x")
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}
