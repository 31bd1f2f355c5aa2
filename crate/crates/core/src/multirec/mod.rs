//! Functions of polynomial-exponential type
//! `G(k) = Σ_j P_j(k) · α_{j1}^{k_1} ⋯ α_{js}^{k_s}`.

mod mpoly;

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numberfield::{Element, Embedding, FieldRef};

pub use mpoly::MPoly;

/// Default cap on candidate periods for zero-structure searches.
pub const DEFAULT_PERIOD_CAP: u64 = 360;

/// One summand `P(k) · Π α_i^{k_i}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: MPoly,
    pub base: Vec<Element>,
}

impl Term {
    pub fn eval(&self, k: &[i64]) -> Element {
        self.base.iter().zip(k).fold(self.coeff.eval(k), |acc, (a, &ki)| &acc * &a.pow(ki))
    }
}

/// A multi-recurrence in `vars` variables over a number field.
///
/// Terms are kept merged (distinct base vectors), free of zero
/// coefficients, and sorted in descending lexicographic order of their base
/// coordinate vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiRecurrence {
    field: FieldRef,
    vars: usize,
    terms: Vec<Term>,
}

/// `Λ(A, b) = { kA + b : k ∈ Z^s }` with `A` an `s × r` integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftedSublattice {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

impl ShiftedSublattice {
    pub fn new(a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self> {
        if let Some(row) = a.iter().find(|row| row.len() != b.len()) {
            return Err(Error::ShapeMismatch(format!("row of length {} but offset of length {}", row.len(), b.len())));
        }
        Ok(ShiftedSublattice { a, b })
    }

    /// Number of parameters `s`.
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Ambient dimension `r`.
    pub fn ambient(&self) -> usize {
        self.b.len()
    }

    /// The point `kA + b`.
    pub fn point(&self, k: &[i64]) -> Vec<i64> {
        (0..self.b.len()).map(|v| self.b[v] + k.iter().zip(&self.a).map(|(ki, row)| ki * row[v]).sum::<i64>()).collect()
    }

    pub fn identity(r: usize) -> Self {
        ShiftedSublattice { a: (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect(), b: vec![0; r] }
    }
}

/// Cartesian product of progressions `k_i = c_i + d_i N_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiProgression {
    pub offsets: Vec<i64>,
    pub steps: Vec<i64>,
}

impl MultiProgression {
    pub fn new(offsets: Vec<i64>, steps: Vec<i64>) -> Result<Self> {
        if offsets.len() != steps.len() {
            return Err(Error::ShapeMismatch("offsets and steps differ in length".into()));
        }
        if steps.iter().any(|&d| d < 1) {
            return Err(Error::InvalidInput("progression steps must be positive".into()));
        }
        Ok(MultiProgression { offsets, steps })
    }

    pub fn all(s: usize) -> Self {
        MultiProgression { offsets: vec![0; s], steps: vec![1; s] }
    }

    pub fn point(&self, n: &[i64]) -> Vec<i64> {
        self.offsets.iter().zip(&self.steps).zip(n).map(|((c, d), x)| c + d * x).collect()
    }

    pub fn as_sublattice(&self) -> ShiftedSublattice {
        let s = self.steps.len();
        ShiftedSublattice {
            a: (0..s).map(|i| (0..s).map(|j| if i == j { self.steps[i] } else { 0 }).collect()).collect(),
            b: self.offsets.clone(),
        }
    }

    /// Whether `k` lies on the progression.
    pub fn contains(&self, k: &[i64]) -> bool {
        k.iter().zip(&self.offsets).zip(&self.steps).all(|((k, c), d)| (k - c).mod_floor(d) == 0)
    }
}

/// Merged groups produced by [`MultiRecurrence::is_zero_on_progression`].
#[derive(Clone, Debug)]
pub struct ZeroCertificate {
    pub vanishes: bool,
    /// Restricted recurrence after merging; empty exactly when `vanishes`.
    pub merged: MultiRecurrence,
    /// For every merged base, the indices of the original terms that fell into it.
    pub groups: Vec<Vec<usize>>,
}

/// Zero set of a univariate simple recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroStructure {
    /// Certified progressions `(c, d)`: `G(c + dN) = 0` for all `N`.
    pub progressions: Vec<(i64, i64)>,
    /// Zeros in `[0, bound]` outside the certified progressions.
    pub sporadic: Vec<i64>,
    pub search_bound: i64,
    /// Candidate period used for the residue class tests.
    pub period: u64,
}

impl MultiRecurrence {
    /// Builds a recurrence, merging terms with equal bases.
    pub fn new(field: &FieldRef, vars: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.base.len() != vars || t.coeff.nvars() != vars {
                return Err(Error::ShapeMismatch(format!("term does not have {vars} variables")));
            }
            if t.base.iter().any(|a| a.is_zero()) {
                return Err(Error::InvalidInput("base entries must be nonzero".into()));
            }
        }
        Ok(Self::from_terms(field, vars, terms))
    }

    fn from_terms(field: &FieldRef, vars: usize, terms: Vec<Term>) -> Self {
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.iter_mut().find(|m| m.base == t.base) {
                Some(m) => m.coeff = m.coeff.add(&t.coeff),
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        merged.sort_by(|a, b| b.base.cmp(&a.base));
        MultiRecurrence { field: field.clone(), vars, terms: merged }
    }

    /// Simple recurrence from `(coefficient, base)` pairs.
    pub fn simple(field: &FieldRef, vars: usize, terms: Vec<(Element, Vec<Element>)>) -> Result<Self> {
        let t = terms.into_iter().map(|(c, base)| Term { coeff: MPoly::constant(c, vars), base }).collect();
        Self::new(field, vars, t)
    }

    pub fn zero(field: &FieldRef, vars: usize) -> Self {
        MultiRecurrence { field: field.clone(), vars, terms: Vec::new() }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every coefficient is constant.
    pub fn is_simple(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_constant())
    }

    /// Constant coefficients of a simple recurrence.
    pub fn constant_coeffs(&self) -> Vec<Element> {
        self.terms.iter().map(|t| t.coeff.constant_term()).collect()
    }

    pub fn eval(&self, k: &[i64]) -> Element {
        assert_eq!(k.len(), self.vars, "point has wrong dimension");
        self.terms.iter().fold(self.field.zero(), |acc, t| &acc + &t.eval(k))
    }

    pub fn add(&self, o: &MultiRecurrence) -> MultiRecurrence {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Self::from_terms(&self.field, self.vars, t)
    }

    pub fn neg(&self) -> MultiRecurrence {
        let t = self.terms.iter().map(|t| Term { coeff: t.coeff.neg(), base: t.base.clone() }).collect();
        Self::from_terms(&self.field, self.vars, t)
    }

    pub fn sub(&self, o: &MultiRecurrence) -> MultiRecurrence {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Element) -> MultiRecurrence {
        let t = self.terms.iter().map(|t| Term { coeff: t.coeff.scale(s), base: t.base.clone() }).collect();
        Self::from_terms(&self.field, self.vars, t)
    }

    /// Image under a field embedding.
    pub fn embed(&self, emb: &Embedding) -> MultiRecurrence {
        let t = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff.embed(emb), base: t.base.iter().map(|a| emb.apply(a)).collect() })
            .collect();
        Self::from_terms(&emb.target, self.vars, t)
    }

    /// Substitutes `h = kA + b`.
    pub fn restrict_sublattice(&self, lat: &ShiftedSublattice) -> Result<MultiRecurrence> {
        if lat.ambient() != self.vars {
            return Err(Error::ShapeMismatch(format!(
                "sublattice lives in Z^{} but the recurrence has {} variables",
                lat.ambient(),
                self.vars
            )));
        }
        let s = lat.dim();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let shift = t.base.iter().zip(&lat.b).fold(self.field.one(), |acc, (a, &bv)| &acc * &a.pow(bv));
                let base = lat
                    .a
                    .iter()
                    .map(|row| t.base.iter().zip(row).fold(self.field.one(), |acc, (a, &e)| &acc * &a.pow(e)))
                    .collect();
                Term { coeff: t.coeff.compose_affine(&lat.a, &lat.b).scale(&shift), base }
            })
            .collect();
        Ok(Self::from_terms(&self.field, s, terms))
    }

    /// Substitutes `k_i = c_i + d_i N_i`.
    pub fn restrict_progression(&self, prog: &MultiProgression) -> Result<MultiRecurrence> {
        self.restrict_sublattice(&prog.as_sublattice())
    }

    fn require_simple(&self) -> Result<()> {
        if self.is_simple() {
            Ok(())
        } else {
            Err(Error::NonSimpleUnsupported)
        }
    }

    /// Decides whether a simple recurrence vanishes identically on the
    /// progression: restrict, merge equal bases, inspect coefficients.
    pub fn is_zero_on_progression(&self, prog: &MultiProgression) -> Result<ZeroCertificate> {
        self.require_simple()?;
        let restricted = self.restrict_progression(prog)?;
        let mut groups: Vec<Vec<usize>> = restricted.terms.iter().map(|_| Vec::new()).collect();
        let mut cancelled: Vec<Vec<Element>> = Vec::new();
        let mut cancelled_groups: Vec<Vec<usize>> = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let base: Vec<Element> = prog
                .steps
                .iter()
                .enumerate()
                .map(|(nu, &d)| t.base[nu].pow(d))
                .collect();
            if let Some(j) = restricted.terms.iter().position(|r| r.base == base) {
                groups[j].push(i);
            } else if let Some(j) = cancelled.iter().position(|b| *b == base) {
                cancelled_groups[j].push(i);
            } else {
                cancelled.push(base);
                cancelled_groups.push(vec![i]);
            }
        }
        groups.extend(cancelled_groups);
        Ok(ZeroCertificate { vanishes: restricted.is_empty(), merged: restricted, groups })
    }

    /// Folds terms that are proportional along `prog` into their first
    /// partner. Returns `(G_red, G0_I)` with `G = G_red + G0_I` identically and
    /// `G0_I` vanishing on `prog`.
    pub fn reduce(&self, prog: &MultiProgression) -> Result<(MultiRecurrence, MultiRecurrence)> {
        self.require_simple()?;
        if prog.steps.len() != self.vars {
            return Err(Error::ShapeMismatch("progression dimension differs from recurrence".into()));
        }
        let coeffs = self.constant_coeffs();
        let n = self.terms.len();
        let mut rep: Vec<Option<(usize, Element)>> = vec![None; n];
        for j in 0..n {
            for i in 0..j {
                if rep[i].is_some() {
                    continue;
                }
                if let Some(c) = proportional_along(&self.terms[i].base, &self.terms[j].base, prog) {
                    rep[j] = Some((i, c));
                    break;
                }
            }
        }
        let mut red = Vec::new();
        let mut zero_part = Vec::new();
        for j in 0..n {
            let base = self.terms[j].base.clone();
            match &rep[j] {
                None => red.push((coeffs[j].clone(), base)),
                Some((i, c)) => {
                    let moved = &coeffs[j] * c;
                    red.push((moved.clone(), self.terms[*i].base.clone()));
                    zero_part.push((coeffs[j].clone(), base));
                    zero_part.push((-&moved, self.terms[*i].base.clone()));
                }
            }
        }
        Ok((
            Self::simple(&self.field, self.vars, red)?,
            Self::simple(&self.field, self.vars, zero_part)?,
        ))
    }

    /// Zeros of a univariate simple recurrence: certified progressions plus
    /// sporadic zeros found in `[0, bound]`.
    pub fn sml_zero_structure(&self, search_bound: i64) -> Result<ZeroStructure> {
        self.sml_zero_structure_with_cap(search_bound, DEFAULT_PERIOD_CAP)
    }

    pub fn sml_zero_structure_with_cap(&self, search_bound: i64, cap: u64) -> Result<ZeroStructure> {
        if self.vars != 1 {
            return Err(Error::Unsupported(format!("zero structure needs one variable, got {}", self.vars)));
        }
        self.require_simple()?;
        let mut period = 1u64;
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                let ratio = self.terms[j].base[0].checked_div(&self.terms[i].base[0])?;
                if let Some(o) = ratio.root_of_unity_order() {
                    period = period.lcm(&o);
                }
            }
        }
        let period = period.min(cap);
        let mut progressions: Vec<(i64, i64)> = Vec::new();
        for d in (1..=period).filter(|d| period % d == 0) {
            let d = d as i64;
            for c in 0..d {
                if progressions.iter().any(|&(c0, d0)| d % d0 == 0 && (c - c0).mod_floor(&d0) == 0) {
                    continue;
                }
                let prog = MultiProgression::new(vec![c], vec![d])?;
                if self.is_zero_on_progression(&prog)?.vanishes {
                    progressions.push((c, d));
                }
            }
        }
        let sporadic = (0..=search_bound)
            .filter(|&k| !progressions.iter().any(|&(c, d)| (k - c).mod_floor(&d) == 0))
            .filter(|&k| self.eval(&[k]).is_zero())
            .collect();
        Ok(ZeroStructure { progressions, sporadic, search_bound, period })
    }
}

/// `Some(c)` when `β^k = c · α^k` for every `k` on the progression, i.e.
/// each ratio `ρ_ν = β_ν/α_ν` satisfies `ρ_ν^{d_ν} = 1`; then `c = Π ρ_ν^{c_ν}`.
pub fn proportional_along(alpha: &[Element], beta: &[Element], prog: &MultiProgression) -> Option<Element> {
    let field = alpha.first()?.field().clone();
    let mut c = field.one();
    for nu in 0..alpha.len() {
        let rho = beta[nu].checked_div(&alpha[nu]).ok()?;
        if !rho.pow(prog.steps[nu]).is_one() {
            return None;
        }
        c = &c * &rho.pow(prog.offsets[nu]);
    }
    Some(c)
}

impl fmt::Debug for MultiRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let base: Vec<String> =
                    t.base.iter().enumerate().map(|(i, a)| format!("({a})^k{}", i + 1)).collect();
                format!("[{:?}]·{}", t.coeff, base.join("·"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests;
