//! Univariate polynomials over a number field and their factorization.

use std::fmt;

use num_rational::BigRational;

use super::{Element, FieldRef};
use crate::factor::factor_rational;
use crate::poly::{rat, QPoly};

/// Polynomial in `K[y]`, coefficients lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct NfPoly {
    field: FieldRef,
    coeffs: Vec<Element>,
}

impl NfPoly {
    pub fn new(field: &FieldRef, mut coeffs: Vec<Element>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NfPoly { field: field.clone(), coeffs }
    }

    pub fn from_rational_poly(field: &FieldRef, p: &QPoly) -> Self {
        Self::new(field, p.coeffs().iter().map(|c| field.from_rational(c.clone())).collect())
    }

    pub fn zero(field: &FieldRef) -> Self {
        NfPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: Element) -> Self {
        let f = c.field().clone();
        Self::new(&f, vec![c])
    }

    /// `y − a`.
    pub fn linear(a: &Element) -> Self {
        let f = a.field().clone();
        Self::new(&f, vec![-a, f.one()])
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn coeff(&self, i: usize) -> Element {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Self {
        let Some(l) = self.coeffs.last() else { return self.clone() };
        let inv = l.inverse().expect("leading coefficient is nonzero");
        Self::new(&self.field, self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn add(&self, o: &NfPoly) -> NfPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(&self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &NfPoly) -> NfPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(&self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &NfPoly) -> NfPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(&self.field, out)
    }

    pub fn div_rem(&self, d: &NfPoly) -> (NfPoly, NfPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.coeffs[dd].inverse().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let f = &r[i] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = &r[i - dd + j] - &(&f * dc);
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        (Self::new(&self.field, q), Self::new(&self.field, r))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &NfPoly) -> NfPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> NfPoly {
        Self::new(
            &self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&rat(i as i64))).collect(),
        )
    }

    pub fn eval(&self, x: &Element) -> Element {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// `self(y − s)` for a field element `s`.
    pub fn shift(&self, s: &Element) -> NfPoly {
        let lin = NfPoly::linear(s);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(&self.field), |acc, c| acc.mul(&lin).add(&NfPoly::constant(c.clone())))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `Norm_{K(y)/Q(y)}` of the polynomial, by evaluating at integer points
    /// and interpolating.
    pub fn norm_poly(&self) -> QPoly {
        let d = self.field.degree();
        let n = self.degree().unwrap_or(0) * d;
        let xs: Vec<BigRational> = (0..=n as i64).map(rat).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| self.eval(&self.field.from_rational(x.clone())).norm()).collect();
        QPoly::interpolate(&xs, &ys)
    }

    /// Monic irreducible factors of a squarefree polynomial (Trager).
    pub fn factor_squarefree(&self) -> Vec<NfPoly> {
        let Some(deg) = self.degree() else { return Vec::new() };
        if deg == 0 {
            return Vec::new();
        }
        if deg == 1 {
            return vec![self.monic()];
        }
        let theta = self.field.generator();
        for s in 0i64.. {
            let shift = theta.scale(&rat(s));
            // h_s(y) = h(y + sθ) has roots r − sθ
            let hs = self.shift(&(-&shift));
            let nrm = hs.norm_poly();
            if !nrm.is_squarefree() {
                continue;
            }
            let mut out = Vec::new();
            for (g, _) in factor_rational(&nrm) {
                let gk = NfPoly::from_rational_poly(&self.field, &g);
                let fac = hs.gcd(&gk);
                if fac.degree().unwrap_or(0) > 0 {
                    out.push(fac.shift(&shift).monic());
                }
            }
            sort_factors(&mut out);
            return out;
        }
        unreachable!()
    }

    /// Full factorization with multiplicities (Yun, then Trager).
    pub fn factor(&self) -> Vec<(NfPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let b_next = b.div_rem(&a).0;
            let c_next = d.div_rem(&a).0;
            d = c_next.sub(&b_next.derivative());
            for g in a.factor_squarefree() {
                out.push((g, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    /// Distinct roots in the field, sorted.
    pub fn roots(&self) -> Vec<Element> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let g = self.gcd(&self.derivative());
        let sqf = self.div_rem(&g).0.monic();
        let mut r: Vec<Element> = sqf
            .factor_squarefree()
            .into_iter()
            .filter(|f| f.degree() == Some(1))
            .map(|f| -&f.coeffs[0])
            .collect();
        r.sort();
        r
    }

    pub fn is_irreducible(&self) -> bool {
        self.is_squarefree() && self.factor_squarefree().len() == 1
    }
}

fn sort_factors(v: &mut [NfPoly]) {
    v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs.cmp(&b.coeffs)));
}

impl fmt::Debug for NfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*y^{i}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl NfPoly {
    /// True when every coefficient lies in Q.
    pub fn as_rational_poly(&self) -> Option<QPoly> {
        let c: Option<Vec<BigRational>> = self.coeffs.iter().map(|c| c.as_rational()).collect();
        c.map(QPoly::new)
    }

    pub fn lead(&self) -> Element {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }
}
