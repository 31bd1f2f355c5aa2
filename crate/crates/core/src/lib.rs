pub mod error;
pub mod factor;
pub mod intersect;
pub mod linalg;
pub mod multirec;
pub mod normform;
pub mod numberfield;
pub mod numeric;
pub mod poly;
pub mod uniteq;
pub mod units;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/number-fields.md")]
    pub struct NumberFields;
    #[doc = include_str!("../../../book/src/units.md")]
    pub struct Units;
    #[doc = include_str!("../../../book/src/norm-forms.md")]
    pub struct NormForms;
    #[doc = include_str!("../../../book/src/multi-recurrences.md")]
    pub struct MultiRecurrences;
    #[doc = include_str!("../../../book/src/unit-equations.md")]
    pub struct UnitEquations;
    #[doc = include_str!("../../../book/src/intersections.md")]
    pub struct Intersections;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
