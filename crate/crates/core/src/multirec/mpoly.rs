//! Sparse multivariate polynomials with number field coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::numberfield::{Element, Embedding, FieldRef};
use crate::poly::rat;

/// Polynomial in `nvars` integer variables, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: FieldRef,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Element>,
}

impl MPoly {
    pub fn zero(field: &FieldRef, nvars: usize) -> Self {
        MPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Element, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_monomial(vec![0; nvars], c);
        p
    }

    /// The variable `k_i`.
    pub fn var(field: &FieldRef, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_monomial(e, field.one());
        p
    }

    pub fn from_monomials(field: &FieldRef, nvars: usize, monos: Vec<(Vec<u32>, Element)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in monos {
            assert_eq!(e.len(), nvars, "exponent vector has wrong length");
            p.add_monomial(e, c);
        }
        p
    }

    fn add_monomial(&mut self, e: Vec<u32>, c: Element) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Vec<u32>, &Element)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> Element {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, k: &[i64]) -> Element {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut m = rat(1);
            for (&ei, &ki) in e.iter().zip(k) {
                for _ in 0..ei {
                    m *= rat(ki);
                }
            }
            acc = &acc + &c.scale(&m);
        }
        acc
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_monomial(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { field: self.field.clone(), nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Element) -> MPoly {
        let mut out = Self::zero(&self.field, self.nvars);
        for (e, c) in &self.terms {
            out.add_monomial(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = Self::zero(&self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_monomial(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = Self::constant(self.field.one(), self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `P(kA + b)` for `P` in `r` variables, giving a polynomial in `s = A.len()` variables.
    pub fn compose_affine(&self, a: &[Vec<i64>], b: &[i64]) -> MPoly {
        let s = a.len();
        let r = self.nvars;
        // h_v = Σ_ν k_ν A[ν][v] + b[v]
        let lin: Vec<MPoly> = (0..r)
            .map(|v| {
                let mut p = MPoly::constant(self.field.from_int(b[v]), s);
                for (nu, row) in a.iter().enumerate() {
                    if row[v] != 0 {
                        p = p.add(&MPoly::var(&self.field, s, nu).scale(&self.field.from_int(row[v])));
                    }
                }
                p
            })
            .collect();
        let mut out = MPoly::zero(&self.field, s);
        for (e, c) in &self.terms {
            let mut m = MPoly::constant(c.clone(), s);
            for (v, &ev) in e.iter().enumerate() {
                if ev > 0 {
                    m = m.mul(&lin[v].pow(ev));
                }
            }
            out = out.add(&m);
        }
        out
    }

    pub fn embed(&self, emb: &Embedding) -> MPoly {
        let mut out = MPoly::zero(&emb.target, self.nvars);
        for (e, c) in &self.terms {
            out.add_monomial(e.clone(), emb.apply(c));
        }
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("k{}", i + 1) } else { format!("k{}^{x}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
