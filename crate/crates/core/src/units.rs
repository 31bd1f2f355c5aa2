//! Fundamental units and exact unit decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numberfield::{complex_roots, is_squarefree, Element, FieldRef, NumberField};
use crate::numeric;

/// A system of independent units `ε_1, …, ε_r` together with the torsion
/// subgroup of the field.
#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub field: FieldRef,
    pub fundamental_units: Vec<Element>,
    pub torsion_generator: Element,
    pub torsion_order: u64,
}

/// `u = zeta · Π ε_i^{exponents_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub zeta: Element,
    pub exponents: Vec<i64>,
}

impl UnitSystem {
    /// Checked constructor: every generator must be an algebraic integer of norm ±1.
    pub fn new(field: &FieldRef, units: Vec<Element>) -> Result<Self> {
        for u in &units {
            if !u.is_unit() {
                return Err(Error::NotAUnit(u.to_string()));
            }
        }
        Ok(Self::unchecked(field, units))
    }

    /// Builds a system without checks; [`verify_unit_system`] reports problems.
    pub fn unchecked(field: &FieldRef, units: Vec<Element>) -> Self {
        let (torsion_generator, torsion_order) = field.torsion_generator();
        UnitSystem { field: field.clone(), fundamental_units: units, torsion_generator, torsion_order }
    }

    pub fn rank(&self) -> usize {
        self.fundamental_units.len()
    }

    /// The roots of unity of the field as powers of the torsion generator.
    pub fn torsion(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.torsion_order as usize);
        let mut cur = self.field.one();
        for _ in 0..self.torsion_order {
            out.push(cur.clone());
            cur = &cur * &self.torsion_generator;
        }
        out
    }

    /// `ζ · Π ε_i^{w_i}`.
    pub fn compose(&self, zeta: &Element, w: &[i64]) -> Element {
        self.fundamental_units.iter().zip(w).fold(zeta.clone(), |acc, (e, &k)| &acc * &e.pow(k))
    }
}

/// Archimedean places: real roots first, then one root from each complex pair.
pub fn places(field: &NumberField) -> Vec<(f64, f64)> {
    let roots = complex_roots(field.min_poly());
    let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.0.hypot(z.1)));
    let tol = 1e-9 * scale;
    let mut real: Vec<(f64, f64)> = roots.iter().filter(|z| z.1.abs() < tol).map(|z| (z.0, 0.0)).collect();
    real.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cpx: Vec<(f64, f64)> = roots.iter().filter(|z| z.1 >= tol).copied().collect();
    cpx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    real.extend(cpx);
    real
}

/// The Dirichlet rank `r_1 + r_2 − 1` of the unit group.
pub fn dirichlet_rank(field: &NumberField) -> usize {
    places(field).len() - 1
}

fn log_vector(u: &Element, pl: &[(f64, f64)]) -> Vec<f64> {
    u.complex_values(pl).into_iter().map(|(re, im)| re.hypot(im).ln()).collect()
}

/// Fundamental unit `ε > 1` of `Q(√d)` from the continued fraction of the
/// generator of the maximal order. The element lives in the field `x² − d`.
pub fn fundamental_unit_real_quadratic(d: i64) -> Result<Element> {
    if d <= 1 {
        return Err(Error::InvalidInput(format!("d = {d} must exceed 1")));
    }
    if !is_squarefree(&BigInt::from(d)) {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    let k = NumberField::new(&[-d, 0, 1])?;
    let dd = BigInt::from(d);
    let s = dd.sqrt();
    let one = BigInt::one();
    let half = BigRational::new(one.clone(), BigInt::from(2));
    // expand (P + √d)/Q; convergents p/q
    let (mut big_p, mut big_q) = if d % 4 == 1 { (one.clone(), BigInt::from(2)) } else { (BigInt::zero(), one.clone()) };
    let (mut p0, mut q0) = (one.clone(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), one.clone());
    loop {
        let a = (&big_p + &s).div_floor(&big_q);
        let p = &a * &p0 + &p1;
        let q = &a * &q0 + &q1;
        p1 = std::mem::replace(&mut p0, p.clone());
        q1 = std::mem::replace(&mut q0, q.clone());
        big_p = &a * &big_q - &big_p;
        big_q = (&dd - &big_p * &big_p) / &big_q;
        if d % 4 == 1 {
            let n: BigInt = &p * &p - &p * &q - &q * &q * ((&dd - 1) / 4);
            if n.abs().is_one() {
                // (p − q) + qω with ω = (1 + θ)/2
                let qr = BigRational::from_integer(q.clone());
                let a0 = BigRational::from_integer(&p - &q) + &qr * &half;
                return Ok(k.element(vec![a0, qr * &half]));
            }
        } else {
            let n: BigInt = &p * &p - &dd * &q * &q;
            if n.abs().is_one() {
                return Ok(k.element(vec![BigRational::from_integer(p), BigRational::from_integer(q)]));
            }
        }
    }
}

/// Exact decomposition `u = ζ · Π ε_i^{w_i}`.
///
/// Exponents are estimated from logarithmic embeddings in double precision,
/// rounded and then checked exactly. Any residual is fed back into the
/// estimate, and a small integer neighborhood is searched when the rounded
/// estimate stalls, so the floating stage only proposes candidates.
pub fn unit_decompose(u: &Element, sys: &UnitSystem) -> Result<UnitDecomposition> {
    if !u.is_unit() {
        return Err(Error::NotAUnit(u.to_string()));
    }
    let r = sys.rank();
    if r == 0 {
        return match u.root_of_unity_order() {
            Some(_) => Ok(UnitDecomposition { zeta: u.clone(), exponents: Vec::new() }),
            None => Err(Error::DecompositionFailed("empty unit system and u is not torsion".into())),
        };
    }
    let pl = places(&sys.field);
    if pl.len() < r + 1 {
        return Err(Error::DecompositionFailed(format!(
            "system has rank {r} but the field has only {} places",
            pl.len()
        )));
    }
    let logs: Vec<Vec<f64>> = sys.fundamental_units.iter().map(|e| log_vector(e, &pl)).collect();
    let mut total = vec![0i64; r];
    let mut cur = u.clone();
    for _ in 0..32 {
        if cur.root_of_unity_order().is_some() {
            return Ok(UnitDecomposition { zeta: cur, exponents: total });
        }
        let lu = log_vector(&cur, &pl);
        let w = estimate_exponents(&logs, &lu, r).ok_or_else(|| {
            Error::DecompositionFailed("logarithmic system is singular; generators are dependent".into())
        })?;
        let rounded: Vec<i64> = w.iter().map(|x| x.round() as i64).collect();
        if rounded.iter().any(|&x| x != 0) {
            cur = &cur * &sys.compose(&sys.field.one(), &rounded.iter().map(|x| -x).collect::<Vec<_>>());
            for (t, x) in total.iter_mut().zip(&rounded) {
                *t += x;
            }
            continue;
        }
        // stalled: search a small box around zero
        for radius in 1..=2i64 {
            if let Some(off) = neighborhood(r, radius).into_iter().find(|off| {
                let neg: Vec<i64> = off.iter().map(|x| -x).collect();
                (&cur * &sys.compose(&sys.field.one(), &neg)).root_of_unity_order().is_some()
            }) {
                let neg: Vec<i64> = off.iter().map(|x| -x).collect();
                let zeta = &cur * &sys.compose(&sys.field.one(), &neg);
                for (t, x) in total.iter_mut().zip(&off) {
                    *t += x;
                }
                return Ok(UnitDecomposition { zeta, exponents: total });
            }
        }
        break;
    }
    Err(Error::DecompositionFailed(format!("{u} is not in the group generated by the system and torsion")))
}

/// Solves the log system using the `r` places of largest total weight,
/// leaving out the smallest conjugate, whose logarithm is the least accurate.
fn estimate_exponents(logs: &[Vec<f64>], lu: &[f64], r: usize) -> Option<Vec<f64>> {
    if lu.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let nplaces = lu.len();
    let drop = (0..nplaces).min_by(|&a, &b| lu[a].total_cmp(&lu[b]))?;
    let keep: Vec<usize> = (0..nplaces).filter(|&j| j != drop).take(r).collect();
    let a: Vec<Vec<f64>> = keep.iter().map(|&j| (0..r).map(|i| logs[i][j]).collect()).collect();
    let b: Vec<f64> = keep.iter().map(|&j| lu[j]).collect();
    numeric::solve_real(&a, &b).or_else(|| {
        // try every other choice of r places
        let keep: Vec<usize> = (0..nplaces).take(r).collect();
        let a: Vec<Vec<f64>> = keep.iter().map(|&j| (0..r).map(|i| logs[i][j]).collect()).collect();
        let b: Vec<f64> = keep.iter().map(|&j| lu[j]).collect();
        numeric::solve_real(&a, &b)
    })
}

/// Nonzero integer vectors of length `r` with sup norm exactly `radius`.
fn neighborhood(r: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-radius; r];
    loop {
        if v.iter().any(|x| x.abs() == radius) {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            if v[i] < radius {
                v[i] += 1;
                break;
            }
            v[i] = -radius;
            i += 1;
        }
    }
}

/// Outcome of [`verify_unit_system`].
#[derive(Clone, Debug, Default)]
pub struct UnitSystemReport {
    pub valid: bool,
    /// Indices of generators that are not units.
    pub non_units: Vec<usize>,
    /// A nontrivial `c` with `Π ε_i^{c_i}` a root of unity.
    pub relation: Option<Vec<i64>>,
    /// Rank predicted by Dirichlet's theorem.
    pub expected_rank: usize,
    /// For real quadratic fields: exponents of each generator relative to
    /// the computed fundamental unit when different from ±1.
    pub non_fundamental: Vec<(usize, i64)>,
    pub messages: Vec<String>,
}

/// Checks that the generators are units and that no relation with
/// exponents bounded by `relation_bound` collapses the rank.
pub fn verify_unit_system(sys: &UnitSystem, relation_bound: i64) -> UnitSystemReport {
    let mut rep = UnitSystemReport { expected_rank: dirichlet_rank(&sys.field), ..Default::default() };
    for (i, e) in sys.fundamental_units.iter().enumerate() {
        if !e.is_unit() {
            rep.non_units.push(i);
            rep.messages.push(Error::NotAUnit(e.to_string()).to_string());
        }
    }
    if !rep.non_units.is_empty() {
        return rep;
    }
    let r = sys.rank();
    let pl = places(&sys.field);
    let logs: Vec<Vec<f64>> = sys.fundamental_units.iter().map(|e| log_vector(e, &pl)).collect();
    'search: for radius in 1..=relation_bound {
        for c in neighborhood(r, radius) {
            // canonical sign: first nonzero entry positive
            if c.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                continue;
            }
            let size: f64 = (0..pl.len())
                .map(|j| (0..r).map(|i| c[i] as f64 * logs[i][j]).sum::<f64>().abs())
                .fold(0.0, f64::max);
            if size > 1e-6 {
                continue;
            }
            if sys.compose(&sys.field.one(), &c).root_of_unity_order().is_some() {
                rep.relation = Some(c);
                rep.messages.push("generators satisfy a multiplicative relation".into());
                break 'search;
            }
        }
    }
    if r != rep.expected_rank {
        rep.messages.push(format!("system rank {r} differs from unit rank {}", rep.expected_rank));
    }
    if let Some(d) = real_quadratic_radicand(&sys.field) {
        if let Ok(eps) = fundamental_unit_real_quadratic(d) {
            let here = sys.field.element(eps.coeffs().to_vec());
            let single = UnitSystem::unchecked(&sys.field, vec![here]);
            for (i, e) in sys.fundamental_units.iter().enumerate() {
                if let Ok(dec) = unit_decompose(e, &single) {
                    if dec.exponents[0].abs() != 1 {
                        rep.non_fundamental.push((i, dec.exponents[0]));
                        rep.messages.push(format!("generator {e} is the power {} of the fundamental unit", dec.exponents[0]));
                    }
                }
            }
        }
    }
    rep.valid = rep.non_units.is_empty() && rep.relation.is_none();
    rep
}

/// `Some(d)` when the field is defined by `x² − d` with `d > 1` squarefree.
pub fn real_quadratic_radicand(field: &NumberField) -> Option<i64> {
    let f = field.min_poly();
    if f.degree() != Some(2) || !f.coeff(1).is_zero() {
        return None;
    }
    let d = (-f.coeff(0)).to_integer().to_i64()?;
    (d > 1 && is_squarefree(&BigInt::from(d))).then_some(d)
}
