//! Coincidences `x_ℓ = G(k)` between solution components of a norm form
//! equation and a simple multi-recurrence, with exception detection.

mod detect;
mod fit;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::multirec::{MultiProgression, MultiRecurrence, ShiftedSublattice};
use crate::normform::{build_all_components, ComponentRecurrence, NormFormProblem};
use crate::numberfield::{SplittingContainer, DEFAULT_MAX_SPLITTING_DEGREE};

pub use detect::{detect_exception, detect_reduced_exception};
pub use fit::{fit_affine_lattice, fit_affine_points, fit_linear_dependencies, AffineRelation, LinearDependencyReport};

/// `G(k) = x_ℓ = H(h)` for a solution of the norm form equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub x_value: BigInt,
    pub k: Vec<i64>,
    pub h: Vec<i64>,
    /// Row of [`build_all_components`] whose recurrence matched.
    pub recurrence_id: usize,
    /// The full solution vector `(x_1, …, x_n)`.
    pub solution: Vec<BigInt>,
}

/// Search boxes and pipeline parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectConfig {
    /// `k ∈ [0, k_box]^s`.
    pub k_box: i64,
    /// `h ∈ [−h_box, h_box]^r`.
    pub h_box: i64,
    /// Coefficient box for norm-m representatives.
    pub rep_bound: i64,
    /// Witnesses needed before structure fitting is attempted.
    pub structure_threshold: usize,
    /// Coefficient box for confirming that free indices are independent.
    pub coeff_bound: i64,
    pub max_splitting_degree: usize,
    /// Progression points sampled when verifying a certificate.
    pub sample_points: usize,
    /// Search bound for sporadic zeros of `G_0`.
    pub sml_bound: i64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            k_box: 30,
            h_box: 12,
            rep_bound: 10,
            structure_threshold: 5,
            coeff_bound: 3,
            max_splitting_degree: DEFAULT_MAX_SPLITTING_DEGREE,
            sample_points: 50,
            sml_bound: 100,
        }
    }
}

/// One line of a verification transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub step: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub(crate) fn new(step: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { step: step.to_string(), passed, detail: detail.into() }
    }
}

/// The hits found inside the boxes; no claim is made outside them.
#[derive(Clone, Debug)]
pub struct FinitenessReport {
    pub hits: Vec<Hit>,
    pub k_box: i64,
    pub h_box: i64,
    pub classification: String,
    /// Step at which structure detection stopped, if it was attempted.
    pub failed_step: Option<String>,
    pub notes: Vec<String>,
    pub transcript: Vec<Check>,
}

/// `G(k) = H(k'A + b) + G_0(k')` for `k = k'P + c` with `k'` on the progression.
#[derive(Clone, Debug)]
pub struct ExceptionCertificate {
    pub component: usize,
    pub h: ComponentRecurrence,
    pub g: MultiRecurrence,
    /// `k = k'P + c`: constants and dependent indices expressed in the free ones.
    pub domain: ShiftedSublattice,
    /// `h = k'A + b`.
    pub lattice: ShiftedSublattice,
    /// Progression of `k'` on which the identity is certified.
    pub progression: MultiProgression,
    /// Over the splitting container, in the `k'` variables.
    pub g0: MultiRecurrence,
    /// A progression on which `G_0` vanishes identically.
    pub zero_locus: Option<MultiProgression>,
    /// `G_0 = 0` on the progression (and no extension was needed).
    pub reduced: bool,
    pub witnesses: Vec<Hit>,
    pub transcript: Vec<Check>,
    pub(crate) sc: std::sync::Arc<SplittingContainer>,
}

impl ExceptionCertificate {
    /// The `n`-th point of the progression, as `(k, k', h)`.
    pub fn sample(&self, n: &[i64]) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
        let kp = self.progression.point(n);
        (self.domain.point(&kp), self.lattice.point(&kp), kp)
    }

    /// Checks `G(k) = H(h) + G_0(k')` exactly at `count` progression points.
    pub fn verify_samples(&self, count: usize) -> bool {
        sample_indices(self.progression.steps.len(), count).iter().all(|n| {
            let (k, h, kp) = self.sample(n);
            let lhs = self.sc.inclusion.apply(&self.g.eval(&k));
            lhs == &self.h.h.eval(&h) + &self.g0.eval(&kp)
        })
    }

    pub fn splitting_container(&self) -> &SplittingContainer {
        &self.sc
    }
}

/// Outcome of exception detection.
#[derive(Clone, Debug)]
pub enum Detection {
    Exception(Box<ExceptionCertificate>),
    Finite(FinitenessReport),
}

impl Detection {
    pub fn classification(&self) -> &str {
        match self {
            Detection::Exception(c) if c.reduced => "reduced-exception",
            Detection::Exception(_) => "exception",
            Detection::Finite(r) => &r.classification,
        }
    }

    pub fn certificate(&self) -> Option<&ExceptionCertificate> {
        match self {
            Detection::Exception(c) => Some(c),
            Detection::Finite(_) => None,
        }
    }

    pub fn report(&self) -> Option<&FinitenessReport> {
        match self {
            Detection::Finite(r) => Some(r),
            Detection::Exception(_) => None,
        }
    }
}

/// `count` distinct points of `N^l`, in order of increasing sum.
pub(crate) fn sample_indices(l: usize, count: usize) -> Vec<Vec<i64>> {
    if l == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut total = 0i64;
    while out.len() < count {
        push_compositions(l, total, &mut Vec::new(), &mut out, count);
        total += 1;
    }
    out
}

fn push_compositions(l: usize, rest: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, count: usize) {
    if out.len() >= count {
        return;
    }
    if prefix.len() + 1 == l {
        let mut v = prefix.clone();
        v.push(rest);
        out.push(v);
        return;
    }
    for x in 0..=rest {
        prefix.push(x);
        push_compositions(l, rest - x, prefix, out, count);
        prefix.pop();
    }
}

pub(crate) struct Tabulation {
    pub sc: std::sync::Arc<SplittingContainer>,
    pub rows: Vec<Vec<ComponentRecurrence>>,
    pub hits: Vec<Hit>,
}

/// Hypotheses on `G`: simple, over the field of the problem, integral bases when `s ≥ 2`.
pub(crate) fn check_recurrence(p: &NormFormProblem, g: &MultiRecurrence, integral_bases: bool) -> Result<()> {
    if !g.is_simple() {
        return Err(Error::NonSimpleUnsupported);
    }
    if **g.field() != *p.field {
        return Err(Error::FieldMismatch);
    }
    if integral_bases {
        for t in g.terms() {
            if let Some(a) = t.base.iter().find(|a| !a.is_algebraic_integer()) {
                return Err(Error::NonIntegerBase(a.to_string()));
            }
        }
    }
    Ok(())
}

pub(crate) fn tabulate(p: &NormFormProblem, l: usize, g: &MultiRecurrence, cfg: &DetectConfig) -> Result<Tabulation> {
    if l >= p.n() {
        return Err(Error::InvalidInput(format!("component {l} out of range for n = {}", p.n())));
    }
    check_recurrence(p, g, g.vars() >= 2)?;
    let sc = std::sync::Arc::new(SplittingContainer::with_cap(&p.field, cfg.max_splitting_degree)?);
    let rows = build_all_components(p, &sc, cfg.rep_bound)?;
    let r = p.unit_system()?.rank();
    let mut table: HashMap<BigInt, Vec<(usize, Vec<i64>)>> = HashMap::new();
    for (rid, row) in rows.iter().enumerate() {
        let rec = &row[l];
        for h in box_points(r, -cfg.h_box, cfg.h_box) {
            if !rec.parity.admits(&h) {
                continue;
            }
            if let Some(x) = rec.eval_integer(&h) {
                table.entry(x).or_default().push((rid, h));
            }
        }
    }
    let mut hits = Vec::new();
    for k in box_points(g.vars(), 0, cfg.k_box) {
        let Some(x) = g.eval(&k).as_integer() else { continue };
        let Some(entries) = table.get(&x) else { continue };
        for (rid, h) in entries {
            let Some(solution) = rows[*rid].iter().map(|c| c.eval_integer(h)).collect::<Option<Vec<BigInt>>>() else {
                continue;
            };
            if solves(p, &solution) {
                hits.push(Hit { x_value: x.clone(), k: k.clone(), h: h.clone(), recurrence_id: *rid, solution });
            }
        }
    }
    hits.sort_by(|a, b| (&a.k, a.recurrence_id, &a.h).cmp(&(&b.k, b.recurrence_id, &b.h)));
    Ok(Tabulation { sc, rows, hits })
}

/// `N(Σ x_i α_i) = m`.
pub(crate) fn solves(p: &NormFormProblem, x: &[BigInt]) -> bool {
    let beta = p
        .alphas
        .iter()
        .zip(x)
        .fold(p.field.zero(), |acc, (a, xi)| &acc + &a.scale(&BigRational::from_integer(xi.clone())));
    beta.norm() == BigRational::from_integer(p.m.clone())
}

/// Integer points of `[lo, hi]^n` in lexicographic order.
pub(crate) fn box_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// All coincidences inside the boxes, sorted by `(k, recurrence, h)`.
pub fn find_coincidences(p: &NormFormProblem, l: usize, g: &MultiRecurrence, k_box: i64, h_box: i64) -> Result<Vec<Hit>> {
    let cfg = DetectConfig { k_box, h_box, ..DetectConfig::default() };
    find_coincidences_with(p, l, g, &cfg)
}

pub fn find_coincidences_with(p: &NormFormProblem, l: usize, g: &MultiRecurrence, cfg: &DetectConfig) -> Result<Vec<Hit>> {
    Ok(tabulate(p, l, g, cfg)?.hits)
}
