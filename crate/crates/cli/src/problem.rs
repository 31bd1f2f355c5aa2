//! Problem files: TOML in, library objects out, canonical TOML back.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use normrec::multirec::{MPoly, MultiRecurrence, Term};
use normrec::normform::NormFormProblem;
use normrec::numberfield::{Element, FieldRef, NumberField};
use normrec::units::{fundamental_unit_real_quadratic, real_quadratic_radicand, UnitSystem};

use crate::CliError;

/// An exact number: a TOML integer or a decimal/rational string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

type Coords = Vec<Num>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Minimal polynomial, lowest degree first.
    pub field: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Coords>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Vec<Coords>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub auto_units_quadratic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<RecurrenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniteq: Option<UnitEqSpec>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceSpec {
    pub vars: usize,
    pub terms: Vec<TermSpec>,
}

/// `coeff · base^k`, or a polynomial coefficient given by `monomials`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<Coords>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<MonomialSpec>>,
    pub base: Vec<Coords>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub exp: Vec<u32>,
    pub coeff: Coords,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_box: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_box: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_threshold: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_splitting_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expo_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sml_bound: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitEqSpec {
    pub a: Vec<Coords>,
    /// Each generator is a vector of `n` field elements.
    pub generators: Vec<Vec<Coords>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

fn input(loc: impl std::fmt::Display, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{loc}: {msg}"))
}

pub fn parse_num(n: &Num, loc: &str) -> Result<BigRational, CliError> {
    match n {
        Num::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
        Num::Str(s) => {
            let s = s.trim();
            BigRational::from_str(s)
                .or_else(|_| BigInt::from_str(s).map(BigRational::from_integer))
                .map_err(|_| input(loc, format!("`{s}` is not an exact rational")))
        }
    }
}

fn num_str(q: &BigRational) -> Num {
    Num::Str(q.to_string())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(e.to_string().trim_end().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files serialize")
    }

    pub fn number_field(&self) -> Result<FieldRef, CliError> {
        let mut coeffs = Vec::with_capacity(self.field.len());
        for (i, c) in self.field.iter().enumerate() {
            let loc = format!("field[{i}]");
            let q = parse_num(c, &loc)?;
            if !q.is_integer() {
                return Err(input(loc, "minimal polynomial coefficients must be integers"));
            }
            coeffs.push(q.to_integer());
        }
        NumberField::from_integer_coeffs(&coeffs).map_err(|e| input("field", e))
    }

    pub fn problem(&self, k: &FieldRef) -> Result<NormFormProblem, CliError> {
        let alphas = self.alphas.as_ref().ok_or_else(|| input("alphas", "missing"))?;
        let alphas = alphas.iter().enumerate().map(|(i, a)| element(k, a, &format!("alphas[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        let m = parse_num(self.m.as_ref().ok_or_else(|| input("m", "missing"))?, "m")?;
        if !m.is_integer() {
            return Err(input("m", "must be an integer"));
        }
        let sys = self.unit_system(k)?;
        NormFormProblem::new(k, alphas, m.to_integer(), sys).map_err(|e| input("problem", e))
    }

    fn unit_system(&self, k: &FieldRef) -> Result<Option<UnitSystem>, CliError> {
        if self.auto_units_quadratic {
            if self.units.is_some() {
                return Err(input("units", "give either units or auto_units_quadratic"));
            }
            let d = real_quadratic_radicand(k)
                .ok_or_else(|| input("auto_units_quadratic", "field is not of the form x^2 - d with d > 1 squarefree"))?;
            let eps = fundamental_unit_real_quadratic(d).map_err(|e| input("auto_units_quadratic", e))?;
            // the unit lives in Q[x]/(x^2 - d), which is the field itself
            let eps = k.element(eps.coeffs().to_vec());
            return UnitSystem::new(k, vec![eps]).map(Some).map_err(|e| input("auto_units_quadratic", e));
        }
        match &self.units {
            None => Ok(None),
            Some(us) => {
                let es = us.iter().enumerate().map(|(i, u)| element(k, u, &format!("units[{i}]"))).collect::<Result<_, _>>()?;
                UnitSystem::new(k, es).map(Some).map_err(|e| input("units", e))
            }
        }
    }

    pub fn recurrence(&self, k: &FieldRef) -> Result<MultiRecurrence, CliError> {
        let spec = self.recurrence.as_ref().ok_or_else(|| input("recurrence", "missing"))?;
        let s = spec.vars;
        let mut terms = Vec::new();
        for (i, t) in spec.terms.iter().enumerate() {
            let loc = format!("recurrence.terms[{i}]");
            if t.base.len() != s {
                return Err(input(&loc, format!("base has {} entries, expected {s}", t.base.len())));
            }
            let base = t.base.iter().enumerate().map(|(j, b)| element(k, b, &format!("{loc}.base[{j}]"))).collect::<Result<Vec<_>, _>>()?;
            let coeff = match (&t.coeff, &t.monomials) {
                (Some(c), None) => MPoly::constant(element(k, c, &format!("{loc}.coeff"))?, s),
                (None, Some(ms)) => {
                    let mut monos = Vec::new();
                    for (j, m) in ms.iter().enumerate() {
                        let mloc = format!("{loc}.monomials[{j}]");
                        if m.exp.len() != s {
                            return Err(input(&mloc, format!("exponent has {} entries, expected {s}", m.exp.len())));
                        }
                        monos.push((m.exp.clone(), element(k, &m.coeff, &format!("{mloc}.coeff"))?));
                    }
                    MPoly::from_monomials(k, s, monos)
                }
                _ => return Err(input(&loc, "give exactly one of coeff or monomials")),
            };
            terms.push(Term { coeff, base });
        }
        MultiRecurrence::new(k, s, terms).map_err(|e| input("recurrence", e))
    }

    pub fn search(&self) -> SearchSpec {
        self.search.clone().unwrap_or_default()
    }

    /// Numbers as reduced rational strings and coordinate vectors padded to the degree.
    pub fn canonical(&self) -> Result<ProblemFile, CliError> {
        let k = self.number_field()?;
        let d = k.degree();
        let coords = |c: &Coords, loc: &str| -> Result<Coords, CliError> { Ok(element(&k, c, loc)?.coeffs().iter().map(num_str).collect()) };
        let list = |v: &Vec<Coords>, loc: &str| -> Result<Vec<Coords>, CliError> {
            v.iter().enumerate().map(|(i, c)| coords(c, &format!("{loc}[{i}]"))).collect()
        };
        let mut out = self.clone();
        out.field = self.field.iter().enumerate().map(|(i, c)| parse_num(c, &format!("field[{i}]")).map(|q| num_str(&q))).collect::<Result<_, _>>()?;
        out.alphas = self.alphas.as_ref().map(|a| list(a, "alphas")).transpose()?;
        out.m = self.m.as_ref().map(|m| parse_num(m, "m").map(|q| num_str(&q))).transpose()?;
        out.units = self.units.as_ref().map(|u| list(u, "units")).transpose()?;
        if let Some(r) = &mut out.recurrence {
            for (i, t) in r.terms.iter_mut().enumerate() {
                let loc = format!("recurrence.terms[{i}]");
                t.base = list(&t.base, &format!("{loc}.base"))?;
                t.coeff = t.coeff.as_ref().map(|c| coords(c, &format!("{loc}.coeff"))).transpose()?;
                if let Some(ms) = &mut t.monomials {
                    for m in ms.iter_mut() {
                        m.coeff = coords(&m.coeff, &loc)?;
                    }
                }
            }
        }
        if let Some(u) = &mut out.uniteq {
            u.a = list(&u.a, "uniteq.a")?;
            u.generators = u.generators.iter().enumerate().map(|(i, g)| list(g, &format!("uniteq.generators[{i}]"))).collect::<Result<_, _>>()?;
        }
        debug_assert!(out.alphas.iter().flatten().all(|c| c.len() == d));
        Ok(out)
    }
}

/// Coordinates of a field element; shorter vectors are padded with zeros.
pub fn element(k: &FieldRef, c: &Coords, loc: &str) -> Result<Element, CliError> {
    let d = k.degree();
    if c.len() > d {
        return Err(input(loc, format!("{} coordinates for a field of degree {d}", c.len())));
    }
    let mut q: Vec<BigRational> = c.iter().enumerate().map(|(i, x)| parse_num(x, &format!("{loc}[{i}]"))).collect::<Result<_, _>>()?;
    q.resize(d, BigRational::from_integer(BigInt::from(0)));
    k.parse_element(&q).map_err(|e| input(loc, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PELL: &str = r#"
field = [-2, 0, 1]
alphas = [[1], [0, 1]]
m = 1
units = [["3", "2"]]

[recurrence]
vars = 1
terms = [{ coeff = ["3/2", "1"], base = [[17, 12]] }, { coeff = ["3/2", "-1"], base = [[17, -12]] }]

[search]
component = 1
"#;

    #[test]
    fn parse_pell() {
        let f = ProblemFile::parse(PELL).unwrap();
        let k = f.number_field().unwrap();
        let p = f.problem(&k).unwrap();
        assert_eq!(p.n(), 2);
        let g = f.recurrence(&k).unwrap();
        assert_eq!(g.eval(&[0]).as_integer(), Some(3.into()));
        assert_eq!(g.eval(&[1]).as_integer(), Some(99.into()));
    }

    #[test]
    fn canonical_round_trip() {
        let c = ProblemFile::parse(PELL).unwrap().canonical().unwrap();
        let text = c.to_toml();
        let again = ProblemFile::parse(&text).unwrap().canonical().unwrap();
        assert_eq!(text, again.to_toml());
        assert!(text.contains("\"3/2\""));
    }

    #[test]
    fn located_errors() {
        let e = ProblemFile::parse("field = [1, 0, 1]\nm = ").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let f = ProblemFile::parse("field = [-2, 0, 1]\nalphas = [[1], [\"x\"]]\nm = 1").unwrap();
        let k = f.number_field().unwrap();
        let e = f.problem(&k).unwrap_err().to_string();
        assert!(e.starts_with("alphas[1][0]"), "{e}");
        let e = ProblemFile::parse("field = [-2, 0, 1]\nbogus = 1").unwrap_err().to_string();
        assert!(e.contains("bogus"), "{e}");
        let f = ProblemFile::parse("field = [-2, 0, 1]\nalphas = [[1]]\nm = 1\nauto_units_quadratic = true").unwrap();
        let k = f.number_field().unwrap();
        assert_eq!(f.problem(&k).unwrap().unit_system().unwrap().fundamental_units[0], k.from_ints(&[1, 1]));
    }
}
