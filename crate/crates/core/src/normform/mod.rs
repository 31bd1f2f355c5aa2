//! Norm form equations `N_{K/Q}(x_1 α_1 + ⋯ + x_n α_n) = m`.

mod components;
mod solve;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg;
use crate::numberfield::{Element, FieldRef};
use crate::units::UnitSystem;

pub use components::{
    build_all_components, build_component_recurrences, embedding_matrix, lift, ComponentRecurrence, EmbeddingMatrix,
    LiftSpec, LiftedProblem, ParityAnnotation, radical_spec,
};
pub use solve::{are_associates, norm_form, norm_representatives, solve_bruteforce, solve_bruteforce_with, NormForm, NormRepresentatives, SolveMode};

/// Data of a norm form equation.
#[derive(Clone, Debug)]
pub struct NormFormProblem {
    pub field: FieldRef,
    pub alphas: Vec<Element>,
    pub m: BigInt,
    pub unit_system: Option<UnitSystem>,
}

impl NormFormProblem {
    /// Validated constructor: `m ≠ 0`, `n ≤ d`, the `α_i` are algebraic
    /// integers and linearly independent over Q.
    pub fn new(field: &FieldRef, alphas: Vec<Element>, m: BigInt, unit_system: Option<UnitSystem>) -> Result<Self> {
        let p = Self::new_unchecked(field, alphas, m, unit_system);
        p.validate()?;
        Ok(p)
    }

    /// Skips validation; inconsistent data surfaces as errors from the
    /// operations that depend on it.
    pub fn new_unchecked(field: &FieldRef, alphas: Vec<Element>, m: BigInt, unit_system: Option<UnitSystem>) -> Self {
        NormFormProblem { field: field.clone(), alphas, m, unit_system }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.field.degree();
        let n = self.alphas.len();
        if self.m == BigInt::from(0) {
            return Err(Error::InvalidInput("right-hand side m must be nonzero".into()));
        }
        if n == 0 || n > d {
            return Err(Error::InvalidInput(format!("need 1 ≤ n ≤ {d} module generators, got {n}")));
        }
        if let Some(a) = self.alphas.iter().find(|a| !a.is_algebraic_integer()) {
            return Err(Error::InvalidInput(format!("{a} is not an algebraic integer")));
        }
        let rows: Vec<Vec<BigRational>> = self.alphas.iter().map(|a| a.coeffs().to_vec()).collect();
        if linalg::rank(&rows) < n {
            return Err(Error::InvalidInput("module generators are linearly dependent over Q".into()));
        }
        if let Some(sys) = &self.unit_system {
            if *sys.field != *self.field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    /// `x_1 α_1 + ⋯ + x_n α_n`.
    pub fn linear_form(&self, x: &[i64]) -> Element {
        self.alphas.iter().zip(x).fold(self.field.zero(), |acc, (a, &xi)| &acc + &a.scale(&crate::poly::rat(xi)))
    }

    pub fn unit_system(&self) -> Result<&UnitSystem> {
        self.unit_system.as_ref().ok_or_else(|| Error::MissingUnitSystem("the problem carries no unit system".into()))
    }
}
