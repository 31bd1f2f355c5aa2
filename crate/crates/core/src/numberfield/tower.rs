//! Simple extensions `K[y]/(g)` rewritten as absolute fields `Q(γ)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Element, FieldRef, NfPoly, NumberField};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{rat, QPoly};

/// A field homomorphism `K → L` determined by the image of the generator of `K`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: FieldRef,
    pub target: FieldRef,
    /// Image of the power-basis generator of the source.
    pub image: Element,
}

impl Embedding {
    pub fn identity(k: &FieldRef) -> Self {
        Embedding { source: k.clone(), target: k.clone(), image: k.generator() }
    }

    pub fn apply(&self, a: &Element) -> Element {
        a.coeffs()
            .iter()
            .rev()
            .fold(self.target.zero(), |acc, c| &(&acc * &self.image) + &self.target.from_rational(c.clone()))
    }

    pub fn apply_poly(&self, p: &NfPoly) -> NfPoly {
        NfPoly::new(&self.target, p.coeffs().iter().map(|c| self.apply(c)).collect())
    }

    /// `L → M` after `K → L` gives `K → M`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        Embedding { source: self.source.clone(), target: next.target.clone(), image: next.apply(&self.image) }
    }

    /// Solves `self.apply(a) = z`; `None` if `z` is not in the image.
    pub fn preimage(&self, z: &Element) -> Option<Element> {
        let d = self.source.degree();
        let n = self.target.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.target.one();
        for _ in 0..d {
            cols.push(cur.coeffs().to_vec());
            cur = &cur * &self.image;
        }
        let m: Vec<Vec<BigRational>> = (0..n).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        let x = linalg::solve(&m, z.coeffs(), &BigRational::zero())?;
        let a = self.source.element(x);
        (self.apply(&a) == *z).then_some(a)
    }
}

/// Result of adjoining a root of an irreducible `g ∈ K[y]`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: FieldRef,
    pub embedding: Embedding,
    /// The image of `y`, a root of `g` in the new field.
    pub root: Element,
}

/// Builds `L = K[y]/(g)` as `Q(γ)` with `γ = y + cθ` for the first shift
/// `c ∈ 0, 1, −1, 2, …` that makes `γ` primitive.
pub fn simple_extension(k: &FieldRef, g: &NfPoly) -> Result<Extension> {
    let g = g.monic();
    let m = g.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if m == 1 {
        return Ok(Extension { field: k.clone(), embedding: Embedding::identity(k), root: -&g.coeffs()[0] });
    }
    let d = k.degree();
    let n = d * m;
    let theta = k.generator();
    let coords = |p: &NfPoly| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); n];
        for (j, c) in p.coeffs().iter().enumerate() {
            for (i, x) in c.coeffs().iter().enumerate() {
                v[j * d + i] = x.clone();
            }
        }
        v
    };
    for step in 0..64i64 {
        let c = if step == 0 { 0 } else if step % 2 == 1 { (step + 1) / 2 } else { -(step / 2) };
        // γ = y + cθ in K[y]/(g)
        let gamma = NfPoly::new(k, vec![theta.scale(&rat(c)), k.one()]);
        let mut powers = Vec::with_capacity(n + 1);
        let mut cur = NfPoly::constant(k.one());
        for _ in 0..=n {
            powers.push(coords(&cur));
            cur = cur.mul(&gamma).div_rem(&g).1;
        }
        // columns: γ^0 … γ^{n−1}
        let mat: Vec<Vec<BigRational>> = (0..n).map(|r| (0..n).map(|col| powers[col][r].clone()).collect()).collect();
        let Some(inv) = linalg::inverse(&mat, &BigRational::one()) else { continue };
        let express = |v: &[BigRational]| -> Vec<BigRational> {
            (0..n).map(|r| (0..n).map(|col| &inv[r][col] * &v[col]).sum()).collect()
        };
        let top = express(&powers[n]);
        let mut minpoly: Vec<BigRational> = top.iter().map(|x| -x).collect();
        minpoly.push(BigRational::one());
        let minpoly = QPoly::new(minpoly);
        if !minpoly.is_integral() {
            return Err(Error::Unsupported(format!(
                "adjoined root generates a non-integral primitive element ({minpoly})"
            )));
        }
        let field = NumberField::new_unchecked(minpoly);
        let theta_img = field.element(express(&coords(&NfPoly::constant(theta.clone()))));
        let y_img = field.element(express(&coords(&NfPoly::new(k, vec![k.zero(), k.one()]))));
        let embedding = Embedding { source: k.clone(), target: field.clone(), image: theta_img };
        debug_assert!(embedding.apply_poly(&g).eval(&y_img).is_zero());
        return Ok(Extension { field, embedding, root: y_img });
    }
    Err(Error::Unsupported("no primitive element found among small shifts".into()))
}
