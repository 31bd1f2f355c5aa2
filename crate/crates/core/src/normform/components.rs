//! Embedding matrix, component recurrences and lifted problems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::solve::norm_representatives;
use super::NormFormProblem;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::multirec::MultiRecurrence;
use crate::numberfield::{simple_extension, Element, Embedding, FieldRef, NfPoly, SplittingContainer};
use crate::units::UnitSystem;

/// `M = (σ_i(α_j))` for a selection of `n` embeddings, with its exact inverse.
#[derive(Clone, Debug)]
pub struct EmbeddingMatrix {
    pub sigma_order: Vec<usize>,
    pub m: Matrix<Element>,
    pub m_inv: Matrix<Element>,
}

/// Picks the lexicographically first `n`-subset of embeddings whose matrix is nonsingular.
pub fn embedding_matrix(p: &NormFormProblem, sc: &SplittingContainer) -> Result<EmbeddingMatrix> {
    let n = p.n();
    let d = sc.roots.len();
    let conj: Vec<Vec<Element>> = p.alphas.iter().map(|a| sc.conjugates(a)).collect();
    let one = sc.ambient.one();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let m: Matrix<Element> = idx.iter().map(|&i| (0..n).map(|j| conj[j][i].clone()).collect()).collect();
        if let Some(m_inv) = linalg::inverse(&m, &one) {
            return Ok(EmbeddingMatrix { sigma_order: idx, m, m_inv });
        }
        if !crate::factor::next_combination(&mut idx, d) {
            return Err(Error::NoNonsingularSelection);
        }
    }
}

/// Which exponent vectors `h` give genuine solutions when some generators
/// have norm −1: `N(ζ) · Π N(ε_v)^{h_v} = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAnnotation {
    pub unit_norms: Vec<i64>,
    pub zeta_norm: i64,
}

impl ParityAnnotation {
    pub fn admits(&self, h: &[i64]) -> bool {
        let odd: i64 = self.unit_norms.iter().zip(h).filter(|(n, _)| **n < 0).map(|(_, x)| x.rem_euclid(2)).sum();
        let sign = if odd % 2 == 0 { 1 } else { -1 };
        sign * self.zeta_norm == 1
    }

    /// Every `h` is admissible.
    pub fn is_trivial(&self) -> bool {
        self.zeta_norm == 1 && self.unit_norms.iter().all(|&n| n == 1)
    }

    /// Admissible residues of `h` modulo 2, as 0/1 vectors.
    pub fn admissible_residues(&self) -> Vec<Vec<i64>> {
        let r = self.unit_norms.len();
        (0..1u64 << r)
            .map(|mask| (0..r).map(|v| ((mask >> v) & 1) as i64).collect::<Vec<_>>())
            .filter(|h| self.admits(h))
            .collect()
    }
}

/// `x_ℓ = H(h)` for solutions `β = ζ μ Π ε_v^{h_v}`.
#[derive(Clone, Debug)]
pub struct ComponentRecurrence {
    /// Zero-based coordinate index ℓ.
    pub component: usize,
    pub h: MultiRecurrence,
    pub mu: Element,
    pub zeta: Element,
    pub parity: ParityAnnotation,
    pub sigma_order: Vec<usize>,
}

impl ComponentRecurrence {
    /// Value as an integer when it is one.
    pub fn eval_integer(&self, h: &[i64]) -> Option<BigInt> {
        self.h.eval(h).as_integer()
    }
}

fn norm_sign(e: &Element) -> i64 {
    if e.norm().is_positive() {
        1
    } else {
        -1
    }
}

/// Component recurrences for coordinate `component` (zero based), one per
/// norm-m representative and root of unity.
pub fn build_component_recurrences(
    p: &NormFormProblem,
    component: usize,
    sc: &SplittingContainer,
    rep_bound: i64,
) -> Result<Vec<ComponentRecurrence>> {
    let all = build_all_components(p, sc, rep_bound)?;
    if component >= p.n() {
        return Err(Error::InvalidInput(format!("component {component} out of range for n = {}", p.n())));
    }
    Ok(all.into_iter().map(|mut row| row.swap_remove(component)).collect())
}

/// For every `(μ, ζ)` pair, the recurrences of all `n` coordinates.
pub fn build_all_components(
    p: &NormFormProblem,
    sc: &SplittingContainer,
    rep_bound: i64,
) -> Result<Vec<Vec<ComponentRecurrence>>> {
    let sys: &UnitSystem = p.unit_system()?;
    let em = embedding_matrix(p, sc)?;
    let reps = norm_representatives(p, rep_bound);
    let r = sys.rank();
    let unit_conj: Vec<Vec<Element>> = sys.fundamental_units.iter().map(|e| sc.conjugates(e)).collect();
    let unit_norms: Vec<i64> = sys.fundamental_units.iter().map(norm_sign).collect();
    let mut out = Vec::new();
    for mu in &reps.representatives {
        for zeta in sys.torsion() {
            let zm = &zeta * mu;
            let zm_conj = sc.conjugates(&zm);
            let parity = ParityAnnotation { unit_norms: unit_norms.clone(), zeta_norm: norm_sign(&zeta) };
            let mut row = Vec::with_capacity(p.n());
            for l in 0..p.n() {
                let terms: Vec<(Element, Vec<Element>)> = em
                    .sigma_order
                    .iter()
                    .enumerate()
                    .map(|(col, &i)| {
                        let tau = &em.m_inv[l][col] * &zm_conj[i];
                        (tau, (0..r).map(|v| unit_conj[v][i].clone()).collect())
                    })
                    .collect();
                row.push(ComponentRecurrence {
                    component: l,
                    h: MultiRecurrence::simple(&sc.ambient, r, terms)?,
                    mu: mu.clone(),
                    zeta: zeta.clone(),
                    parity: parity.clone(),
                    sigma_order: em.sigma_order.clone(),
                });
            }
            out.push(row);
        }
    }
    Ok(out)
}

/// Extension `L ⊇ K` given by successive polynomials, each over the field
/// built so far (coefficients as coordinate vectors in that field).
#[derive(Clone, Debug, Default)]
pub struct LiftSpec {
    /// Each polynomial is a list of coefficients, lowest degree first; each
    /// coefficient is a list of rational coordinates over the current field.
    pub polynomials: Vec<Vec<Vec<BigRational>>>,
    pub max_degree: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LiftedProblem {
    pub problem: NormFormProblem,
    pub embedding: Embedding,
    /// `[L : K]`.
    pub relative_degree: usize,
    /// Elements on which the tower formula was checked.
    pub tower_samples: Vec<Element>,
}

/// Builds `N_{L/Q}(Σ x_i α_i) = m^{[L:K]}` over the extension described by `spec`.
pub fn lift(p: &NormFormProblem, spec: &LiftSpec) -> Result<LiftedProblem> {
    let cap = spec.max_degree.unwrap_or(crate::numberfield::DEFAULT_MAX_SPLITTING_DEGREE);
    let mut emb = Embedding::identity(&p.field);
    for coeffs in &spec.polynomials {
        let cur: FieldRef = emb.target.clone();
        let elems: Vec<Element> = coeffs.iter().map(|c| cur.parse_element(c)).collect::<Result<_>>()?;
        let g = NfPoly::new(&cur, elems);
        let deg = g.degree().unwrap_or(0);
        if deg == 0 {
            return Err(Error::InvalidInput("lift polynomial must be non-constant".into()));
        }
        // adjoin a root of the first irreducible factor of largest degree
        let factors = g.factor();
        let top = factors.iter().filter_map(|(f, _)| f.degree()).max().unwrap();
        let g1 = factors.into_iter().map(|(f, _)| f).find(|f| f.degree() == Some(top)).unwrap();
        let needed = cur.degree() * g1.degree().unwrap();
        if needed > cap {
            return Err(Error::DegreeCapExceeded { needed, cap });
        }
        let ext = simple_extension(&cur, &g1)?;
        emb = emb.then(&ext.embedding);
    }
    let l = emb.target.clone();
    let rel = l.degree() / p.field.degree();
    let alphas: Vec<Element> = p.alphas.iter().map(|a| emb.apply(a)).collect();
    let m = num_traits::pow(p.m.clone(), rel);
    let mut samples: Vec<Element> = p.alphas.clone();
    samples.push(p.field.generator());
    samples.push(&p.field.generator() + &p.field.from_int(3));
    for s in &samples {
        let lhs = emb.apply(s).norm();
        let rhs = num_traits::pow(s.norm(), rel);
        if lhs != rhs {
            return Err(Error::InvalidInput(format!("tower formula failed for {s}: {lhs} vs {rhs}")));
        }
    }
    Ok(LiftedProblem {
        problem: NormFormProblem::new_unchecked(&l, alphas, m, None),
        embedding: emb,
        relative_degree: rel,
        tower_samples: samples,
    })
}

/// Radical lift `K(α^{1/e})` as a one-step [`LiftSpec`]: the polynomial `y^e − α`.
pub fn radical_spec(alpha: &Element, e: usize) -> LiftSpec {
    let d = alpha.field().degree();
    let zero = vec![BigRational::from_integer(0.into()); d];
    let mut one = zero.clone();
    one[0] = BigRational::one();
    let mut coeffs = vec![zero; e + 1];
    coeffs[0] = alpha.coeffs().iter().map(|c| -c).collect();
    coeffs[e] = one;
    LiftSpec { polynomials: vec![coeffs], max_degree: None }
}
