//! Box searches: solutions of the equation and norm-m representatives.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NormFormProblem;
use crate::numberfield::Element;
use crate::numeric;
use crate::poly::rat;

/// The norm form `F(x) = N(Σ x_j α_j)` as an integer polynomial, homogeneous of
/// degree `d` in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormForm {
    pub nvars: usize,
    /// Exponent vector to coefficient.
    pub monomials: BTreeMap<Vec<u32>, BigInt>,
    /// `F` was multiplied by this positive integer to clear denominators.
    pub denominator: BigInt,
}

type RPoly = BTreeMap<Vec<u32>, BigRational>;

fn rp_mul(a: &RPoly, b: &RPoly) -> RPoly {
    let mut out = RPoly::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            let v = out.entry(e).or_insert_with(BigRational::zero);
            *v += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn rp_add_scaled(acc: &mut RPoly, p: &RPoly, sign: i64) {
    for (e, c) in p {
        let v = acc.entry(e.clone()).or_insert_with(BigRational::zero);
        *v += c * rat(sign);
    }
    acc.retain(|_, c| !c.is_zero());
}

/// Computes the norm form symbolically as the determinant of
/// `Σ x_j · (multiplication by α_j)` by Laplace expansion with memoized minors.
pub fn norm_form(p: &NormFormProblem) -> NormForm {
    let n = p.n();
    let d = p.field.degree();
    let mats: Vec<_> = p.alphas.iter().map(|a| a.mul_matrix()).collect();
    let entry = |r: usize, c: usize| -> RPoly {
        let mut out = RPoly::new();
        for (j, m) in mats.iter().enumerate() {
            if !m[r][c].is_zero() {
                let mut e = vec![0u32; n];
                e[j] = 1;
                out.insert(e, m[r][c].clone());
            }
        }
        out
    };
    let entries: Vec<Vec<RPoly>> = (0..d).map(|r| (0..d).map(|c| entry(r, c)).collect()).collect();
    let mut memo = HashMap::new();
    let mut det = minor(0, (1u32 << d) - 1, n, &entries, &mut memo);
    det.retain(|_, c| !c.is_zero());
    let denominator = det.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let monomials = det
        .into_iter()
        .map(|(e, c)| (e, (c * BigRational::from_integer(denominator.clone())).to_integer()))
        .collect();
    NormForm { nvars: n, monomials, denominator }
}

/// Minor on rows `row..d` and the columns selected by `mask`.
fn minor(row: usize, mask: u32, nvars: usize, entries: &[Vec<RPoly>], memo: &mut HashMap<u32, RPoly>) -> RPoly {
    let d = entries.len();
    if row == d {
        return RPoly::from([(vec![0; nvars], BigRational::one())]);
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut acc = RPoly::new();
    let mut sign = 1;
    for c in 0..d {
        if mask & (1 << c) == 0 {
            continue;
        }
        if !entries[row][c].is_empty() {
            let sub = minor(row + 1, mask & !(1 << c), nvars, entries, memo);
            rp_add_scaled(&mut acc, &rp_mul(&entries[row][c], &sub), sign);
        }
        sign = -sign;
    }
    memo.insert(mask, acc.clone());
    acc
}

impl NormForm {
    pub fn eval(&self, x: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.monomials {
            let mut t = c.clone();
            for (&ei, &xi) in e.iter().zip(x) {
                for _ in 0..ei {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients (lowest degree first) of `t ↦ F(prefix, t)`.
    fn univariate(&self, prefix: &[i64]) -> Vec<BigInt> {
        let last = self.nvars - 1;
        let deg = self.monomials.keys().map(|e| e[last]).max().unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (e, c) in &self.monomials {
            let mut t = c.clone();
            for (&ei, &xi) in e[..last].iter().zip(prefix) {
                for _ in 0..ei {
                    t *= xi;
                }
            }
            out[e[last] as usize] += t;
        }
        out
    }
}

/// Box search strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Scan all but the last coordinate and solve the remaining univariate
    /// polynomial equation for integer roots.
    #[default]
    Fast,
    /// Evaluate the exact element norm at every box point.
    Exhaustive,
}

/// All `x ∈ Z^n` with `|x_i| ≤ bound` and `N(Σ x_i α_i) = m`, sorted lexicographically.
pub fn solve_bruteforce(p: &NormFormProblem, bound: i64) -> Vec<Vec<i64>> {
    solve_bruteforce_with(p, bound, SolveMode::Fast)
}

pub fn solve_bruteforce_with(p: &NormFormProblem, bound: i64, mode: SolveMode) -> Vec<Vec<i64>> {
    let n = p.n();
    if bound < 0 || n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    match mode {
        SolveMode::Exhaustive => {
            let target = BigRational::from_integer(p.m.clone());
            for_each_point(n, bound, |x| {
                if p.linear_form(x).norm() == target {
                    out.push(x.to_vec());
                }
            });
        }
        SolveMode::Fast => {
            let f = norm_form(p);
            let target = &p.m * &f.denominator;
            for_each_point(n - 1, bound, |prefix| {
                let mut g = f.univariate(prefix);
                g[0] -= &target;
                for t in integer_roots(&g, bound) {
                    let mut x = prefix.to_vec();
                    x.push(t);
                    out.push(x);
                }
            });
        }
    }
    out.sort();
    out
}

fn for_each_point(n: usize, bound: i64, mut f: impl FnMut(&[i64])) {
    let mut x = vec![-bound; n];
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
        }
    }
}

fn eval_int(g: &[BigInt], t: i64) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

/// Integer roots of `g` in `[−bound, bound]`, ascending.
fn integer_roots(g: &[BigInt], bound: i64) -> Vec<i64> {
    let mut g = g.to_vec();
    while g.last().is_some_and(|c| c.is_zero()) {
        g.pop();
    }
    let in_range = |t: &BigInt| t.abs() <= BigInt::from(bound);
    match g.len() {
        0 => (-bound..=bound).collect(),
        1 => Vec::new(),
        2 => {
            let (q, r) = (-&g[0]).div_rem(&g[1]);
            if r.is_zero() && in_range(&q) {
                vec![q.to_i64().unwrap()]
            } else {
                Vec::new()
            }
        }
        3 => {
            let (c, b, a) = (&g[0], &g[1], &g[2]);
            let disc: BigInt = b * b - BigInt::from(4) * a * c;
            if disc.is_negative() {
                return Vec::new();
            }
            let s = disc.sqrt();
            if &s * &s != disc {
                return Vec::new();
            }
            let two_a = a * 2;
            let mut roots: Vec<i64> = [-b + &s, -b - &s]
                .into_iter()
                .filter_map(|num| {
                    let (q, r) = num.div_rem(&two_a);
                    (r.is_zero() && in_range(&q)).then(|| q.to_i64().unwrap())
                })
                .collect();
            roots.sort();
            roots.dedup();
            roots
        }
        _ => {
            let lead = g.last().unwrap().to_f64().unwrap_or(f64::NAN);
            let c: Vec<f64> = g.iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / lead).collect();
            if c.iter().any(|x| !x.is_finite()) {
                return (-bound..=bound).filter(|&t| eval_int(&g, t).is_zero()).collect();
            }
            let mut cand: Vec<i64> = numeric::aberth(&c)
                .into_iter()
                .filter(|z| z.1.abs() < 1.0)
                .flat_map(|z| {
                    let r = z.0.round();
                    if r.abs() > bound as f64 + 2.0 {
                        Vec::new()
                    } else {
                        let r = r as i64;
                        (r - 2..=r + 2).collect()
                    }
                })
                .filter(|t| t.abs() <= bound)
                .collect();
            cand.sort();
            cand.dedup();
            cand.into_iter().filter(|&t| eval_int(&g, t).is_zero()).collect()
        }
    }
}

/// One representative per associate class of integers of norm `m`, found
/// in a coefficient box over the integral basis.
#[derive(Clone, Debug)]
pub struct NormRepresentatives {
    pub representatives: Vec<Element>,
    pub coeff_bound: i64,
    /// Completeness holds only inside the box.
    pub box_limited: bool,
    /// The integral basis spans the maximal order (otherwise the equation order).
    pub over_maximal_order: bool,
}

fn rep_key(c: &[i64]) -> (i64, std::cmp::Reverse<Vec<i64>>) {
    (c.iter().map(|x| x.abs()).sum(), std::cmp::Reverse(c.to_vec()))
}

/// Enumerates `μ = Σ c_i ω_i` with `|c_i| ≤ coeff_bound` and `N(μ) = m`,
/// keeping the smallest member (by coefficient 1-norm, then the
/// lexicographically largest coordinates) of each associate class.
pub fn norm_representatives(p: &NormFormProblem, coeff_bound: i64) -> NormRepresentatives {
    let basis = p.field.integral_basis();
    let target = BigRational::from_integer(p.m.clone());
    let mut hits: Vec<(Vec<i64>, Element)> = Vec::new();
    for_each_point(basis.len(), coeff_bound.max(0), |c| {
        let mu = basis.iter().zip(c).fold(p.field.zero(), |acc, (w, &ci)| &acc + &w.scale(&rat(ci)));
        if !mu.is_zero() && mu.norm() == target {
            hits.push((c.to_vec(), mu));
        }
    });
    hits.sort_by(|a, b| rep_key(&a.0).cmp(&rep_key(&b.0)));
    let mut reps: Vec<Element> = Vec::new();
    for (_, mu) in hits {
        if !reps.iter().any(|r| are_associates(r, &mu)) {
            reps.push(mu);
        }
    }
    NormRepresentatives {
        representatives: reps,
        coeff_bound,
        box_limited: true,
        over_maximal_order: p.field.maximal_order_known(),
    }
}

/// Both quotients are algebraic integers.
pub fn are_associates(a: &Element, b: &Element) -> bool {
    match (a.checked_div(b), b.checked_div(a)) {
        (Ok(x), Ok(y)) => x.is_algebraic_integer() && y.is_algebraic_integer(),
        _ => false,
    }
}
