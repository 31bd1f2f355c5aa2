//! Generalized unit equations `a_1 y_1 + ⋯ + a_n y_n = 1` over explicitly
//! generated subgroups of `(K*)^n`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::numberfield::Element;

/// Largest `n` for which subsets are enumerated.
pub const SUBSET_CAP: usize = 20;

/// `E = (6n)^{3n} (r + 1)`; the number of non-degenerate solutions is at most `exp(E)`.
pub fn ess_bound(n: u32, r: u32) -> BigUint {
    num_traits::pow(BigUint::from(6u32 * n), 3 * n as usize) * BigUint::from(r + 1)
}

/// Whether `count ≤ exp(E)`. Uses `ln(count) < bits(count)` and `E ≥ bits(count)`,
/// with an exact fallback for tiny `E`.
pub fn count_within_ess_bound(count: u64, e: &BigUint) -> bool {
    if count <= 1 {
        return true;
    }
    let bits = 64 - count.leading_zeros() as u64;
    if *e >= BigUint::from(bits) {
        return true;
    }
    // E < 64: compare ln(count) ≤ E in floating point with ample margin
    (count as f64).ln() <= e.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
}

/// The group generated by explicit vectors in `(K*)^n`.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub n: usize,
    pub generators: Vec<Vec<Element>>,
    pub rank_claimed: Option<usize>,
}

impl GroupSpec {
    pub fn new(n: usize, generators: Vec<Vec<Element>>, rank_claimed: Option<usize>) -> Result<Self> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::ShapeMismatch(format!("generator has {} entries, expected {n}", g.len())));
            }
            if g.iter().any(|x| x.is_zero()) {
                return Err(Error::InvalidInput("generator entries must be nonzero".into()));
            }
        }
        Ok(GroupSpec { n, generators, rank_claimed })
    }

    /// `r` for the bound: the claimed rank, else the number of generators.
    pub fn rank(&self) -> usize {
        self.rank_claimed.unwrap_or(self.generators.len())
    }

    pub fn element(&self, e: &[i64], one: &Element) -> Vec<Element> {
        (0..self.n)
            .map(|i| self.generators.iter().zip(e).fold(one.clone(), |acc, (g, &ej)| &acc * &g[i].pow(ej)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitEqSolution {
    pub y: Vec<Element>,
    /// Exponents on the generators (first vector found in enumeration order).
    pub exponents: Vec<i64>,
    pub degenerate: bool,
    /// Minimal vanishing subsets (zero based).
    pub vanishing_subsets: Vec<Vec<usize>>,
}

/// All solutions `y = Π g_j^{e_j}` with `|e_j| ≤ expo_bound`, deduplicated by `y`.
pub fn solve_unit_equation(a: &[Element], grp: &GroupSpec, expo_bound: i64) -> Result<Vec<UnitEqSolution>> {
    if a.len() != grp.n {
        return Err(Error::ShapeMismatch(format!("{} coefficients for {} unknowns", a.len(), grp.n)));
    }
    if a.iter().any(|x| x.is_zero()) {
        return Err(Error::InvalidInput("coefficients must be nonzero".into()));
    }
    let Some(first) = a.first() else { return Ok(Vec::new()) };
    let one = first.field().one();
    let t = grp.generators.len();
    let mut out: Vec<UnitEqSolution> = Vec::new();
    let mut e = vec![-expo_bound; t];
    loop {
        let y = grp.element(&e, &one);
        let s = a.iter().zip(&y).fold(first.field().zero(), |acc, (ai, yi)| &acc + &(ai * yi));
        if s.is_one() && !out.iter().any(|sol| sol.y == y) {
            let vanishing_subsets = vanishing_subsums(a, &y)?;
            out.push(UnitEqSolution { degenerate: !vanishing_subsets.is_empty(), vanishing_subsets, exponents: e.clone(), y });
        }
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if e[i] < expo_bound {
                e[i] += 1;
                break;
            }
            e[i] = -expo_bound;
        }
    }
}

/// Minimal nonempty `I` with `Σ_{i∈I} a_i y_i = 0`, ordered by size then lexicographically.
pub fn vanishing_subsums(a: &[Element], y: &[Element]) -> Result<Vec<Vec<usize>>> {
    let terms: Vec<Element> = a.iter().zip(y).map(|(x, z)| x * z).collect();
    minimal_vanishing(&terms, &(0..terms.len()).collect::<Vec<_>>())
}

/// Minimal vanishing subsets of `terms` restricted to `within`.
fn minimal_vanishing(terms: &[Element], within: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = within.len();
    if n > SUBSET_CAP {
        return Err(Error::DimensionCapExceeded { got: n, cap: SUBSET_CAP });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let zero = terms[within[0]].field().zero();
    let mut sums = vec![zero; 1 << n];
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &terms[within[low]];
    }
    let mut masks: Vec<usize> = (1usize..1 << n).filter(|&m| sums[m].is_zero()).collect();
    masks.sort_by_key(|&m| (m.count_ones(), subset_key(m, n)));
    let mut minimal: Vec<usize> = Vec::new();
    for m in masks {
        if !minimal.iter().any(|&p| p & m == p) {
            minimal.push(m);
        }
    }
    Ok(minimal.into_iter().map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| within[i]).collect()).collect())
}

fn subset_key(m: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| m >> i & 1 == 1).collect()
}

/// `z_i = ratio · z_j` holds for the data at hand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairRelation {
    pub i: usize,
    pub j: usize,
    pub ratio: Element,
}

/// A vanishing sum with no vanishing proper subsum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeBlock {
    pub indices: Vec<usize>,
    /// Ratios of every member to the first member.
    pub relations: Vec<PairRelation>,
}

/// Splitting of one vanishing sum into minimal blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeOutcome {
    pub blocks: Vec<CascadeBlock>,
    /// Recursion depth reached; at most `n − 1`.
    pub depth: usize,
}

impl CascadeOutcome {
    pub fn relations(&self) -> impl Iterator<Item = &PairRelation> {
        self.blocks.iter().flat_map(|b| b.relations.iter())
    }
}

/// Recursively splits the vanishing sum `Σ c_i z_i = 0` into minimal
/// vanishing blocks, each member related to the block's first index.
pub fn cascade_homogeneous(c: &[Element], z: &[Element]) -> Result<CascadeOutcome> {
    let terms: Vec<Element> = c.iter().zip(z).map(|(x, y)| x * y).collect();
    let all: Vec<usize> = (0..terms.len()).collect();
    let total = all.iter().fold(terms[0].field().zero(), |acc, &i| &acc + &terms[i]);
    if !total.is_zero() {
        return Err(Error::InvalidInput("cascade needs a vanishing sum".into()));
    }
    let mut blocks = Vec::new();
    let depth = split(&terms, c, z, all, 0, &mut blocks)?;
    blocks.sort_by(|a, b| a.indices.cmp(&b.indices));
    Ok(CascadeOutcome { blocks, depth })
}

fn split(terms: &[Element], c: &[Element], z: &[Element], set: Vec<usize>, depth: usize, out: &mut Vec<CascadeBlock>) -> Result<usize> {
    let minimal = minimal_vanishing(terms, &set)?;
    let first = minimal.into_iter().next().expect("the whole set vanishes");
    if first.len() == set.len() {
        let j = set[0];
        let relations = set[1..]
            .iter()
            .map(|&i| {
                let ratio = if set.len() == 2 {
                    // c_i z_i + c_j z_j = 0
                    -&c[j].checked_div(&c[i]).expect("nonzero coefficient")
                } else {
                    z[i].checked_div(&z[j]).expect("nonzero unknown")
                };
                PairRelation { i, j, ratio }
            })
            .collect();
        out.push(CascadeBlock { indices: set, relations });
        return Ok(depth);
    }
    let rest: Vec<usize> = set.iter().copied().filter(|i| !first.contains(i)).collect();
    let d1 = split(terms, c, z, first, depth + 1, out)?;
    let d2 = split(terms, c, z, rest, depth + 1, out)?;
    Ok(d1.max(d2))
}

/// Per-solution cascade plus aggregated relation multiplicities.
#[derive(Clone, Debug)]
pub struct CascadeReport {
    pub outcomes: Vec<CascadeOutcome>,
    pub multiplicities: Vec<(PairRelation, usize)>,
}

/// Runs the cascade on each `y`. When `Σ a_i y_i = s ≠ 0` the constant term
/// `−s` is appended with index `n` and unknown `1`; a non-degenerate
/// solution then forms a single block and passes through unchanged.
pub fn degenerate_cascade(a: &[Element], solutions: &[Vec<Element>]) -> Result<CascadeReport> {
    let mut outcomes = Vec::new();
    let mut mult: Vec<(PairRelation, usize)> = Vec::new();
    for y in solutions {
        let field = a[0].field().clone();
        let s = a.iter().zip(y).fold(field.zero(), |acc, (x, z)| &acc + &(x * z));
        let (c, z) = if s.is_zero() {
            (a.to_vec(), y.clone())
        } else {
            let mut c = a.to_vec();
            c.push(-&s);
            let mut z = y.clone();
            z.push(field.one());
            (c, z)
        };
        let o = cascade_homogeneous(&c, &z)?;
        for r in o.relations() {
            match mult.iter_mut().find(|(m, _)| m == r) {
                Some((_, k)) => *k += 1,
                None => mult.push((r.clone(), 1)),
            }
        }
        outcomes.push(o);
    }
    Ok(CascadeReport { outcomes, multiplicities: mult })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::NumberField;
    use crate::poly::rat;

    #[test]
    fn bound_values() {
        assert_eq!(ess_bound(2, 1), BigUint::from(5_971_968u32));
        assert_eq!(ess_bound(1, 0), BigUint::from(216u32));
        assert_eq!(ess_bound(3, 2), num_traits::pow(BigUint::from(18u32), 9) * BigUint::from(3u32));
        assert!(count_within_ess_bound(1 << 40, &ess_bound(1, 0)));
    }

    #[test]
    fn diagonal_group() {
        let k = NumberField::new(&[0, 1]).unwrap();
        let a = vec![k.one(), k.one()];
        let g = GroupSpec::new(2, vec![vec![k.from_int(2), k.from_int(2)]], None).unwrap();
        let s = solve_unit_equation(&a, &g, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].y, vec![k.from_rational(rat(1) / rat(2)); 2]);
        assert_eq!(s[0].exponents, vec![-1]);
        assert!(!s[0].degenerate);
        let triv = GroupSpec::new(2, vec![vec![k.one(), k.one()]], None).unwrap();
        assert!(solve_unit_equation(&a, &triv, 4).unwrap().is_empty());
    }

    #[test]
    fn three_term_group() {
        let k = NumberField::new(&[0, 1]).unwrap();
        let a = vec![k.one(), k.one(), k.from_int(-1)];
        let gens = vec![
            vec![k.from_int(2), k.one(), k.one()],
            vec![k.one(), k.from_int(2), k.one()],
            vec![k.one(), k.one(), k.from_int(2)],
        ];
        let s = solve_unit_equation(&a, &GroupSpec::new(3, gens, None).unwrap(), 2).unwrap();
        let ones = s.iter().find(|x| x.y.iter().all(|v| v.is_one())).unwrap();
        assert_eq!(ones.vanishing_subsets, vec![vec![0, 2], vec![1, 2]]);
        assert!(s.iter().any(|x| x.vanishing_subsets.contains(&vec![1, 2])));
        for sol in &s {
            let sum = a.iter().zip(&sol.y).fold(k.zero(), |acc, (x, y)| &acc + &(x * y));
            assert!(sum.is_one());
        }
    }

    #[test]
    fn minimal_subsets() {
        let k = NumberField::new(&[0, 1]).unwrap();
        let a: Vec<Element> = [1, 1, -1, -1].iter().map(|&x| k.from_int(x)).collect();
        let y = vec![k.one(); 4];
        assert_eq!(vanishing_subsums(&a, &y).unwrap(), vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        let a: Vec<Element> = [2, -1, -1].iter().map(|&x| k.from_int(x)).collect();
        assert_eq!(vanishing_subsums(&a, &[k.one(), k.one(), k.one()]).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn cascades() {
        let k = NumberField::new(&[0, 1]).unwrap();
        let a: Vec<Element> = [1, 1, -1, -1].iter().map(|&x| k.from_int(x)).collect();
        let rep = degenerate_cascade(&a, &[vec![k.one(); 4]]).unwrap();
        let o = &rep.outcomes[0];
        assert_eq!(o.blocks.len(), 2);
        assert_eq!(o.relations().count(), 2);
        assert!(o.depth <= 3);
        // non-degenerate solution of y1 + y2 = 1
        let half = k.from_rational(rat(1) / rat(2));
        let rep = degenerate_cascade(&[k.one(), k.one()], &[vec![half.clone(), half]]).unwrap();
        assert_eq!(rep.outcomes[0].blocks.len(), 1);
        assert_eq!(rep.outcomes[0].blocks[0].indices, vec![0, 1, 2]);
        // two-term vanishing sum: y1/y2 = −a2/a1
        let rep = degenerate_cascade(&[k.from_int(3), k.from_int(-6)], &[vec![k.from_int(2), k.one()]]).unwrap();
        let r = rep.outcomes[0].relations().next().unwrap();
        assert_eq!((r.i, r.j), (1, 0));
        assert_eq!(r.ratio, k.from_rational(rat(1) / rat(2)));
    }
}
