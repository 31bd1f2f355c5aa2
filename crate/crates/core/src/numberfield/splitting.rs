//! A field containing every root of the defining polynomial of `K`.

use super::{Element, Embedding, FieldRef, NfPoly};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SPLITTING_DEGREE: usize = 24;

/// Splitting field `L` of `f` with the `d` embeddings `σ_i: K → L`.
///
/// `roots[0]` is always the image of `θ` under the canonical inclusion, so
/// `σ_1` is the identity when `K` is Galois.
#[derive(Clone, Debug)]
pub struct SplittingContainer {
    pub base: FieldRef,
    pub ambient: FieldRef,
    pub roots: Vec<Element>,
    /// Inclusion of `K` into the ambient field (`σ_1`).
    pub inclusion: Embedding,
}

impl SplittingContainer {
    pub fn new(k: &FieldRef) -> Result<Self> {
        Self::with_cap(k, DEFAULT_MAX_SPLITTING_DEGREE)
    }

    /// Adjoins one root at a time until `f` splits, refusing to exceed
    /// `cap` for the absolute degree.
    pub fn with_cap(k: &FieldRef, cap: usize) -> Result<Self> {
        if k.degree() > cap {
            return Err(Error::DegreeCapExceeded { needed: k.degree(), cap });
        }
        let f = NfPoly::from_rational_poly(k, k.min_poly());
        let mut inclusion = Embedding::identity(k);
        let mut roots = vec![k.generator()];
        loop {
            let ambient = inclusion.target.clone();
            let mut rest = inclusion.apply_poly(&f);
            for r in &roots {
                rest = rest.div_rem(&NfPoly::linear(r)).0;
            }
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let mut nonlinear = None;
            for g in rest.factor_squarefree() {
                if g.degree() == Some(1) {
                    roots.push(-&g.coeffs()[0]);
                } else if nonlinear.is_none() {
                    nonlinear = Some(g);
                }
            }
            let Some(g) = nonlinear else { break };
            let needed = ambient.degree() * g.degree().unwrap();
            if needed > cap {
                return Err(Error::DegreeCapExceeded { needed, cap });
            }
            let ext = super::simple_extension(&ambient, &g)?;
            roots = roots.iter().map(|r| ext.embedding.apply(r)).collect();
            roots.push(ext.root);
            inclusion = inclusion.then(&ext.embedding);
        }
        let sc = SplittingContainer { base: k.clone(), ambient: inclusion.target.clone(), roots, inclusion };
        debug_assert_eq!(sc.roots.len(), k.degree());
        Ok(sc)
    }

    /// `σ_i` as an embedding `K → L`.
    pub fn embedding(&self, i: usize) -> Embedding {
        Embedding { source: self.base.clone(), target: self.ambient.clone(), image: self.roots[i].clone() }
    }

    pub fn apply(&self, i: usize, a: &Element) -> Element {
        self.embedding(i).apply(a)
    }

    /// `(σ_1(a), …, σ_d(a))`.
    pub fn conjugates(&self, a: &Element) -> Vec<Element> {
        (0..self.roots.len()).map(|i| self.apply(i, a)).collect()
    }

    /// Element `a ∈ K` with `σ_i(a) = z`, if `z` lies in `σ_i(K)`.
    pub fn preimage(&self, i: usize, z: &Element) -> Option<Element> {
        self.embedding(i).preimage(z)
    }

    pub fn is_galois(&self) -> bool {
        self.ambient.degree() == self.base.degree()
    }
}
